//! Reference streams: recorded traces resolved against a prefix table, and
//! synthetic streams for testing and calibration.
//!
//! Two on-disk formats are supported, both line oriented and diffable:
//!
//! * `dst-csv`: one `timestamp_usec,dotted-quad` record per line. Timestamps
//!   are carried into reports for context but the models measure time in
//!   references, never in seconds.
//! * `refstring`: one decimal unit id per line, already resolved.
//!
//! gzip-compressed variants are accepted and written when the path ends in
//! `.gz`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::net::Ipv4Addr;
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::prefix_table::PrefixTable;
use crate::stats;

/// Identifier of a unit of reference (a prefix id for resolved traffic).
pub type UnitId = u32;

/// Generation block size for seeded synthetic streams. Blocks are seeded
/// independently, so output is identical whether blocks are filled in
/// parallel or sequentially.
const GEN_BLOCK: usize = 1 << 20;

/// An ordered, replayable stream of unit references, fully materialized.
///
/// Iterating [`ids`](Self::ids) again replays the exact same sequence; a
/// stream is cheap to share immutably across sweep workers.
#[derive(Debug, Clone)]
pub struct ReferenceStream {
    ids: Vec<UnitId>,
    timestamps: Option<Vec<u64>>,
    /// Bit i set = reference i belongs to injected attack traffic.
    attack_bits: Option<Vec<u64>>,
    /// Declared alphabet size for synthetic streams.
    n_units_hint: Option<u32>,
    max_id: Option<UnitId>,
}

impl ReferenceStream {
    pub fn from_ids(ids: Vec<UnitId>) -> Self {
        let max_id = ids.iter().copied().max();
        ReferenceStream {
            ids,
            timestamps: None,
            attack_bits: None,
            n_units_hint: None,
            max_id,
        }
    }

    pub(crate) fn with_hint(mut self, n_units: u32) -> Self {
        self.n_units_hint = Some(n_units);
        self
    }

    pub(crate) fn with_timestamps(mut self, ts: Vec<u64>) -> Self {
        debug_assert_eq!(ts.len(), self.ids.len());
        self.timestamps = Some(ts);
        self
    }

    pub(crate) fn with_attack_bits(mut self, bits: Vec<u64>) -> Self {
        self.attack_bits = Some(bits);
        self
    }

    /// Number of references (`u` in the reports).
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[UnitId] {
        &self.ids
    }

    pub fn timestamps(&self) -> Option<&[u64]> {
        self.timestamps.as_deref()
    }

    /// Largest unit id present, if the stream is nonempty.
    pub fn max_id(&self) -> Option<UnitId> {
        self.max_id
    }

    /// Alphabet size: the declared unit universe for synthetic streams,
    /// otherwise `max_id + 1`.
    pub fn alphabet_size(&self) -> usize {
        match (self.n_units_hint, self.max_id) {
            (Some(n), _) => n as usize,
            (None, Some(m)) => m as usize + 1,
            (None, None) => 0,
        }
    }

    /// Whether reference `idx` is tagged as attack traffic.
    pub fn is_attack(&self, idx: usize) -> bool {
        match &self.attack_bits {
            Some(bits) => bits[idx / 64] >> (idx % 64) & 1 == 1,
            None => false,
        }
    }

    /// True if the stream carries attack tags.
    pub fn has_attack_tags(&self) -> bool {
        self.attack_bits.is_some()
    }

    /// The set of distinct units referenced by the whole stream.
    pub fn visited_set(&self) -> VisitedSet {
        let words = self.alphabet_size().div_ceil(64);
        let mut mask = vec![0u64; words];
        let mut count = 0u64;
        for &id in &self.ids {
            let w = &mut mask[id as usize / 64];
            let bit = 1u64 << (id % 64);
            if *w & bit == 0 {
                *w |= bit;
                count += 1;
            }
        }
        VisitedSet { mask, count }
    }
}

/// Distinct-unit set of a stream (the visited set).
#[derive(Debug, Clone)]
pub struct VisitedSet {
    mask: Vec<u64>,
    count: u64,
}

impl VisitedSet {
    /// Cardinality of the set.
    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, id: UnitId) -> bool {
        self.mask
            .get(id as usize / 64)
            .is_some_and(|w| w >> (id % 64) & 1 == 1)
    }

    /// Members in increasing id order.
    pub fn ids(&self) -> Vec<UnitId> {
        let mut out = Vec::with_capacity(self.count as usize);
        for (w, &word) in self.mask.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                out.push((w * 64) as u32 + b);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Ratio of visited prefixes to the filtered table size, truncated to two
/// decimals the way the routing-table statistics are reported.
pub fn coverage_ratio(psi_size: u64, bgp_filtered_size: u64) -> f64 {
    (psi_size as f64 / bgp_filtered_size as f64 * 100.0).floor() / 100.0
}

/// Specification of an independent-reference-model stream: i.i.d. draws
/// from a Zipf law over a fixed unit universe. Stationary by construction,
/// which is what makes it a usable ground truth for the estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrmSpec {
    pub n_units: u32,
    /// Zipf exponent; 0 gives the uniform distribution.
    pub zipf_exponent: f64,
    pub length: u64,
    pub seed: u64,
}

impl IrmSpec {
    fn validate(&self) -> Result<()> {
        if self.n_units < 1 {
            return Err(Error::InvalidInput("IRM needs at least one unit".into()));
        }
        if self.length < 1 {
            return Err(Error::InvalidInput("IRM stream length must be >= 1".into()));
        }
        if self.zipf_exponent.is_nan() || self.zipf_exponent < 0.0 {
            return Err(Error::InvalidInput(format!(
                "Zipf exponent must be >= 0, got {}",
                self.zipf_exponent
            )));
        }
        Ok(())
    }

    /// Exact probability of unit id `i` (rank `i + 1`).
    pub fn pmf(&self, id: u32) -> f64 {
        let h: f64 = (1..=self.n_units)
            .map(|r| (r as f64).powf(-self.zipf_exponent))
            .sum();
        ((id + 1) as f64).powf(-self.zipf_exponent) / h
    }
}

/// Cumulative Zipf table for inverse-CDF sampling.
fn zipf_cdf(n_units: u32, exponent: f64) -> Vec<f64> {
    let mut cdf: Vec<f64> = Vec::with_capacity(n_units as usize);
    let mut acc = 0.0;
    for rank in 1..=n_units {
        acc += (rank as f64).powf(-exponent);
        cdf.push(acc);
    }
    let total = acc;
    for v in &mut cdf {
        *v /= total;
    }
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

/// Generate an IRM stream. Deterministic: the same [`IrmSpec`] always
/// produces the same sequence, in both parallel and sequential builds.
pub fn gen_irm(spec: &IrmSpec) -> Result<ReferenceStream> {
    spec.validate()?;
    let cdf = zipf_cdf(spec.n_units, spec.zipf_exponent);
    let mut ids = vec![0u32; spec.length as usize];
    par::for_each_chunk_mut(&mut ids, GEN_BLOCK, |block, chunk| {
        let mut rng = stats::rng_for(spec.seed, block as u64);
        for slot in chunk {
            let u: f64 = rng.gen();
            *slot = cdf.partition_point(|&c| c <= u) as u32;
        }
    });
    Ok(ReferenceStream::from_ids(ids).with_hint(spec.n_units))
}

/// Concatenate two IRM streams over disjoint unit-id ranges: a synthetic
/// sequence of two distinct localities, nonstationary by construction.
/// The second stream's ids are shifted above the first's universe.
pub fn gen_regime_switch(spec_a: &IrmSpec, spec_b: &IrmSpec) -> Result<ReferenceStream> {
    let a = gen_irm(spec_a)?;
    let b = gen_irm(spec_b)?;
    let shift = spec_a.n_units;
    let mut ids = a.ids;
    ids.extend(b.ids.iter().map(|&id| id + shift));
    Ok(ReferenceStream::from_ids(ids).with_hint(spec_a.n_units + spec_b.n_units))
}

/// A raw destination trace: `(timestamp_usec, destination)` records in file
/// order, not yet resolved to prefix ids.
#[derive(Debug, Clone)]
pub struct DstTrace {
    pub records: Vec<(u64, Ipv4Addr)>,
}

/// On-disk trace formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    DstCsv,
    RefString,
}

/// A trace as read from disk, before (or without need for) resolution.
#[derive(Debug, Clone)]
pub enum RawTrace {
    Dst(DstTrace),
    Refs(ReferenceStream),
}

fn open_reader(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(BufReader::new(GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Read a trace file in the declared format. An empty file is a valid,
/// zero-length stream.
pub fn open_trace(path: impl AsRef<Path>, format: TraceFormat) -> Result<RawTrace> {
    let reader = open_reader(path.as_ref())?;
    match format {
        TraceFormat::DstCsv => Ok(RawTrace::Dst(read_dst_csv(reader)?)),
        TraceFormat::RefString => Ok(RawTrace::Refs(read_refstring(reader)?)),
    }
}

pub fn read_dst_csv(reader: impl BufRead) -> Result<DstTrace> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (ts, addr) = text.split_once(',').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("expected `timestamp,addr`, got `{text}`"),
        })?;
        let ts: u64 = ts.trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad timestamp `{ts}`"),
        })?;
        let addr: Ipv4Addr = addr.trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad IPv4 address `{addr}`"),
        })?;
        records.push((ts, addr));
    }
    Ok(DstTrace { records })
}

pub fn read_refstring(reader: impl BufRead) -> Result<ReferenceStream> {
    let mut ids = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let id: UnitId = text.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad unit id `{text}`"),
        })?;
        ids.push(id);
    }
    Ok(ReferenceStream::from_ids(ids))
}

/// Write a stream in `refstring` form; gzip when the path ends in `.gz`.
pub fn write_refstring(path: impl AsRef<Path>, stream: &ReferenceStream) -> Result<()> {
    write_refstring_annotated(path, stream, &[])
}

/// Like [`write_refstring`] with leading `#` comment lines (readers of the
/// format skip them); used to record provenance such as the generator seed.
pub fn write_refstring_annotated(
    path: impl AsRef<Path>,
    stream: &ReferenceStream,
    comments: &[String],
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out: Box<dyn Write> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(BufWriter::new(GzEncoder::new(
            file,
            flate2::Compression::default(),
        )))
    } else {
        Box::new(BufWriter::new(file))
    };
    for line in comments {
        writeln!(out, "# {line}").map_err(|e| Error::io(path, e))?;
    }
    for &id in stream.ids() {
        writeln!(out, "{id}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// What to do with destinations no table prefix covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnmatchedPolicy {
    /// Drop the reference (the default: the models analyze matched prefixes).
    Drop,
    /// Keep it under a single reserved unit id (`table.len()`).
    CountAsSpecial,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ResolveStats {
    pub matched: u64,
    pub unmatched: u64,
}

/// Resolve destination addresses to prefix ids by longest-prefix match.
pub fn resolve(
    trace: &DstTrace,
    table: &PrefixTable,
    policy: UnmatchedPolicy,
) -> (ReferenceStream, ResolveStats) {
    let special = table.len() as UnitId;
    let mut ids = Vec::with_capacity(trace.records.len());
    let mut timestamps = Vec::with_capacity(trace.records.len());
    let mut stats = ResolveStats::default();
    for &(ts, addr) in &trace.records {
        match table.lookup(addr) {
            Some(id) => {
                stats.matched += 1;
                ids.push(id);
                timestamps.push(ts);
            }
            None => {
                stats.unmatched += 1;
                if policy == UnmatchedPolicy::CountAsSpecial {
                    ids.push(special);
                    timestamps.push(ts);
                }
            }
        }
    }
    let hint = match policy {
        UnmatchedPolicy::Drop => table.len() as u32,
        UnmatchedPolicy::CountAsSpecial => table.len() as u32 + 1,
    };
    (
        ReferenceStream::from_ids(ids)
            .with_timestamps(timestamps)
            .with_hint(hint),
        stats,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefix_table::RawTable;

    fn irm(n: u32, expo: f64, len: u64, seed: u64) -> ReferenceStream {
        gen_irm(&IrmSpec {
            n_units: n,
            zipf_exponent: expo,
            length: len,
            seed,
        })
        .unwrap()
    }

    #[test]
    fn single_unit_stream_is_constant() {
        let s = irm(1, 1.0, 5, 42);
        assert_eq!(s.ids(), &[0, 0, 0, 0, 0]);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = irm(100, 0.8, 50_000, 7);
        let b = irm(100, 0.8, 50_000, 7);
        assert_eq!(a.ids(), b.ids());
        let c = irm(100, 0.8, 50_000, 8);
        assert_ne!(a.ids(), c.ids());
    }

    #[test]
    fn uniform_frequencies_balance() {
        // exponent 0 over two units: both frequencies within 3 binomial
        // standard deviations of 1/2.
        let len = 100_000u64;
        let s = irm(2, 0.0, len, 3);
        let ones = s.ids().iter().filter(|&&id| id == 1).count() as f64;
        let sigma = (len as f64 * 0.25).sqrt();
        assert!((ones - len as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn zipf_frequencies_match_exact_pmf() {
        // chi-squared goodness of fit against the exact Zipf pmf, 1% level.
        let spec = IrmSpec {
            n_units: 100,
            zipf_exponent: 1.0,
            length: 200_000,
            seed: 11,
        };
        let s = gen_irm(&spec).unwrap();
        let mut obs = vec![0u64; 100];
        for &id in s.ids() {
            obs[id as usize] += 1;
        }
        let mut chi2 = 0.0;
        for id in 0..100u32 {
            let expected = spec.pmf(id) * spec.length as f64;
            let d = obs[id as usize] as f64 - expected;
            chi2 += d * d / expected;
        }
        // 1% upper critical value for chi-squared with 99 degrees of
        // freedom via the Wilson-Hilferty approximation.
        let nu = 99.0f64;
        let z = 2.3263478740408408; // Phi^{-1}(0.99)
        let crit = nu * (1.0 - 2.0 / (9.0 * nu) + z * (2.0 / (9.0 * nu)).sqrt()).powi(3);
        assert!(chi2 < crit, "chi2 {chi2} >= crit {crit}");
    }

    #[test]
    fn regime_switch_concatenates_disjoint_ranges() {
        let a = IrmSpec {
            n_units: 2,
            zipf_exponent: 0.5,
            length: 4,
            seed: 1,
        };
        let b = IrmSpec {
            n_units: 2,
            zipf_exponent: 0.5,
            length: 4,
            seed: 2,
        };
        let s = gen_regime_switch(&a, &b).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.alphabet_size(), 4);
        assert!(s.ids()[..4].iter().all(|&id| id < 2));
        assert!(s.ids()[4..].iter().all(|&id| (2..4).contains(&id)));
    }

    #[test]
    fn visited_set_counts_distinct_units() {
        let s = ReferenceStream::from_ids(vec![3, 5, 3]);
        let v = s.visited_set();
        assert_eq!(v.len(), 2);
        assert!(v.contains(3) && v.contains(5) && !v.contains(4));
        assert_eq!(v.ids(), vec![3, 5]);
    }

    #[test]
    fn empty_stream_has_empty_visited_set() {
        let s = ReferenceStream::from_ids(vec![]);
        assert!(s.visited_set().is_empty());
        assert_eq!(s.alphabet_size(), 0);
    }

    #[test]
    fn visited_set_is_bounded_by_length_and_alphabet() {
        let s = irm(50, 1.0, 30, 9);
        let v = s.visited_set();
        assert!(v.len() <= 30);
        assert!(v.len() <= 50);
    }

    #[test]
    fn coverage_ratio_truncates() {
        // The published table computes 94964/170638 = 0.5565.. as 0.55.
        assert_eq!(coverage_ratio(94_964, 170_638), 0.55);
        assert_eq!(coverage_ratio(143_775, 216_272), 0.66);
    }

    #[test]
    fn dst_csv_parses_records() {
        let t = read_dst_csv("0,10.0.0.1\n1,10.0.0.2\n".as_bytes()).unwrap();
        assert_eq!(t.records.len(), 2);
        assert_eq!(t.records[1], (1, "10.0.0.2".parse().unwrap()));
    }

    #[test]
    fn refstring_parses_ids() {
        let s = read_refstring("3\n3\n7\n".as_bytes()).unwrap();
        assert_eq!(s.ids(), &[3, 3, 7]);
    }

    #[test]
    fn empty_file_is_a_valid_stream() {
        let s = read_refstring("".as_bytes()).unwrap();
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn malformed_record_reports_index() {
        let err = read_dst_csv("0,10.0.0.1\nnot-a-record\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_refstring("1\nx\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn resolve_drops_or_tags_unmatched() {
        let table = RawTable::parse("10.0.0.0/8".as_bytes())
            .unwrap()
            .filter_more_specifics();
        let trace = DstTrace {
            records: vec![
                (0, "10.1.2.3".parse().unwrap()),
                (1, "11.0.0.1".parse().unwrap()),
            ],
        };
        let (s, st) = resolve(&trace, &table, UnmatchedPolicy::Drop);
        assert_eq!(s.ids().len(), 1);
        assert_eq!((st.matched, st.unmatched), (1, 1));

        let (s, st) = resolve(&trace, &table, UnmatchedPolicy::CountAsSpecial);
        assert_eq!(s.ids(), &[0, 1]);
        assert_eq!(st.unmatched, 1);
    }

    #[test]
    fn resolve_preserves_length_when_all_match() {
        let table = RawTable::parse("10.0.0.0/8".as_bytes())
            .unwrap()
            .filter_more_specifics();
        let trace = DstTrace {
            records: (0..100)
                .map(|i| (i, Ipv4Addr::new(10, 0, 0, (i % 250) as u8)))
                .collect(),
        };
        let (s, st) = resolve(&trace, &table, UnmatchedPolicy::Drop);
        assert_eq!(s.len(), 100);
        assert_eq!(st.unmatched, 0);
        assert_eq!(s.timestamps().unwrap().len(), 100);
    }

    #[test]
    fn refstring_roundtrip_plain_and_gzip() {
        let dir = std::env::temp_dir();
        let s = irm(50, 1.0, 1000, 5);
        for name in ["mapcache_rt_test.txt", "mapcache_rt_test.txt.gz"] {
            let path = dir.join(name);
            write_refstring(&path, &s).unwrap();
            let back = match open_trace(&path, TraceFormat::RefString).unwrap() {
                RawTrace::Refs(r) => r,
                _ => unreachable!(),
            };
            assert_eq!(back.ids(), s.ids());
            std::fs::remove_file(&path).ok();
        }
    }
}
