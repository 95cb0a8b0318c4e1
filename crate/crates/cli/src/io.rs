//! File formats emitted and consumed by the commands. All CSV outputs start
//! with `#` comment lines recording the schema version, the exact command
//! and the seed, so every artifact is reproducible from its own header.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use mapcache::emulator::EmulationReport;
use mapcache::locality::{PiecewiseLocality, Segment};
use mapcache::workingset::{AvgWorkingSet, WorkingSetCurve};

pub const SCHEMA_VERSION: u32 = 1;

pub fn csv_header(command: &str, seed: Option<u64>) -> String {
    let mut h = format!("# mapcache schema_version={SCHEMA_VERSION}\n# command: {command}\n");
    if let Some(seed) = seed {
        h.push_str(&format!("# seed: {seed}\n"));
    }
    h
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn data_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

pub fn write_curves_csv(
    path: &Path,
    curves: &[WorkingSetCurve],
    command: &str,
    seed: Option<u64>,
) -> Result<()> {
    let mut out = csv_header(command, seed);
    out.push_str("curve,start_index,T,w\n");
    for (i, curve) in curves.iter().enumerate() {
        for &(t, w) in curve.samples() {
            out.push_str(&format!("{i},{},{t},{w}\n", curve.start_index));
        }
    }
    write_text(path, &out)
}

pub fn write_avg_csv(
    path: &Path,
    avg: &AvgWorkingSet,
    command: &str,
    seed: Option<u64>,
) -> Result<()> {
    let mut out = csv_header(command, seed);
    out.push_str("u,s,std,m\n");
    for i in 0..avg.grid.len() {
        let std = avg
            .std
            .as_ref()
            .map(|s| format!("{}", s[i]))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{std},{}\n",
            avg.grid[i], avg.s[i], avg.m[i]
        ));
    }
    write_text(path, &out)
}

pub fn read_avg_csv(path: &Path) -> Result<AvgWorkingSet> {
    let mut grid = Vec::new();
    let mut s = Vec::new();
    let mut std = Vec::new();
    let mut any_std = false;
    let mut m = Vec::new();
    for (idx, line) in data_lines(path)?.into_iter().enumerate() {
        if idx == 0 && line.starts_with("u,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            bail!("{}: expected 4 columns, got `{line}`", path.display());
        }
        grid.push(
            fields[0]
                .parse()
                .with_context(|| format!("bad u `{}`", fields[0]))?,
        );
        s.push(
            fields[1]
                .parse()
                .with_context(|| format!("bad s `{}`", fields[1]))?,
        );
        if fields[2].is_empty() {
            std.push(0.0);
        } else {
            any_std = true;
            std.push(
                fields[2]
                    .parse()
                    .with_context(|| format!("bad std `{}`", fields[2]))?,
            );
        }
        m.push(
            fields[3]
                .parse()
                .with_context(|| format!("bad m `{}`", fields[3]))?,
        );
    }
    if grid.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(AvgWorkingSet {
        grid,
        s,
        std: any_std.then_some(std),
        m,
    })
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_emulation_csv(
    path: &Path,
    reports: &[EmulationReport],
    command: &str,
    seed: Option<u64>,
) -> Result<()> {
    let per_class = reports.iter().any(|r| r.per_class.is_some());
    let mut out = csv_header(command, seed);
    out.push_str("capacity,normalized_size,misses,miss_rate_raw,miss_rate_warm");
    if per_class {
        out.push_str(",legit_refs,legit_misses,attack_refs,attack_misses");
    }
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{}",
            r.capacity,
            opt(r.normalized_size),
            r.misses,
            r.miss_rate_raw,
            opt(r.miss_rate_warm)
        ));
        if per_class {
            match &r.per_class {
                Some(pc) => out.push_str(&format!(
                    ",{},{},{},{}",
                    pc.legit_refs, pc.legit_misses, pc.attack_refs, pc.attack_misses
                )),
                None => out.push_str(",,,,"),
            }
        }
        out.push('\n');
    }
    write_text(path, &out)
}

pub struct EmulatedRow {
    pub capacity: u64,
    pub miss_rate_raw: f64,
    pub miss_rate_warm: Option<f64>,
}

pub fn read_emulation_csv(path: &Path) -> Result<Vec<EmulatedRow>> {
    let mut rows = Vec::new();
    for (idx, line) in data_lines(path)?.into_iter().enumerate() {
        if idx == 0 && line.starts_with("capacity,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 5 {
            bail!("{}: expected >= 5 columns, got `{line}`", path.display());
        }
        rows.push(EmulatedRow {
            capacity: fields[0]
                .parse()
                .with_context(|| format!("bad capacity `{}`", fields[0]))?,
            miss_rate_raw: fields[3]
                .parse()
                .with_context(|| format!("bad miss_rate_raw `{}`", fields[3]))?,
            miss_rate_warm: if fields[4].is_empty() {
                None
            } else {
                Some(
                    fields[4]
                        .parse()
                        .with_context(|| format!("bad miss_rate_warm `{}`", fields[4]))?,
                )
            },
        });
    }
    if rows.is_empty() {
        bail!("{}: no emulation rows", path.display());
    }
    Ok(rows)
}

pub fn write_instantaneous_csv(
    path: &Path,
    reports: &[EmulationReport],
    command: &str,
    seed: Option<u64>,
) -> Result<()> {
    let mut out = csv_header(command, seed);
    out.push_str("capacity,window_index,miss_rate\n");
    for r in reports {
        for &(w, rate) in &r.instantaneous {
            out.push_str(&format!("{},{w},{rate}\n", r.capacity));
        }
    }
    write_text(path, &out)
}

pub fn write_prediction_csv(path: &Path, rows: &[(f64, f64)], command: &str) -> Result<()> {
    let mut out = csv_header(command, None);
    out.push_str("cache_size,miss_rate\n");
    for &(size, miss) in rows {
        out.push_str(&format!("{size},{miss}\n"));
    }
    write_text(path, &out)
}

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    u_lo: f64,
    u_hi: f64,
    alpha: f64,
    beta: f64,
    s_lo: f64,
    s_hi: f64,
}

/// On-disk form of a fitted locality model.
#[derive(Serialize, Deserialize)]
pub struct FitDoc {
    pub schema_version: u32,
    pub command: String,
    pub k_segments: usize,
    pub log_sse: f64,
    pub warnings: Vec<String>,
    pub u_min: f64,
    pub u_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    segments: Vec<SegmentDoc>,
}

pub fn write_fit_json(path: &Path, fit: &PiecewiseLocality, command: &str) -> Result<()> {
    let doc = FitDoc {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        k_segments: fit.segments().len(),
        log_sse: fit.log_sse,
        warnings: fit.warnings.clone(),
        u_min: fit.u_min(),
        u_max: fit.u_max(),
        s_min: fit.s_min(),
        s_max: fit.s_max(),
        segments: fit
            .segments()
            .iter()
            .map(|seg| SegmentDoc {
                u_lo: seg.u_lo,
                u_hi: seg.u_hi,
                alpha: seg.alpha,
                beta: seg.beta,
                s_lo: (seg.beta + seg.alpha * seg.u_lo.ln()).exp(),
                s_hi: (seg.beta + seg.alpha * seg.u_hi.ln()).exp(),
            })
            .collect(),
    };
    write_text(path, &format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

pub fn read_fit_json(path: &Path) -> Result<PiecewiseLocality> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: FitDoc =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if doc.schema_version != SCHEMA_VERSION {
        bail!(
            "{}: schema_version {} unsupported (expected {SCHEMA_VERSION})",
            path.display(),
            doc.schema_version
        );
    }
    let segments: Vec<Segment> = doc
        .segments
        .iter()
        .map(|d| Segment {
            u_lo: d.u_lo,
            u_hi: d.u_hi,
            alpha: d.alpha,
            beta: d.beta,
        })
        .collect();
    let mut fit = PiecewiseLocality::from_segments(segments)?;
    fit.log_sse = doc.log_sse;
    fit.warnings = doc.warnings;
    Ok(fit)
}

/// Parse either an explicit comma list (`100,200,400`) or a log-spaced
/// range (`lo:hi:count`) of positive integers.
pub fn parse_sizes(text: &str) -> Result<Vec<u64>> {
    if let Some((lo, rest)) = text.split_once(':') {
        let (hi, count) = rest.split_once(':').context("range form is lo:hi:count")?;
        let lo: u64 = lo.parse().context("bad range start")?;
        let hi: u64 = hi.parse().context("bad range end")?;
        let count: usize = count.parse().context("bad range count")?;
        if lo < 1 || hi < lo || count < 2 {
            bail!("range needs 1 <= lo <= hi and count >= 2");
        }
        let mut sizes: Vec<u64> = (0..count)
            .map(|i| {
                ((lo as f64) * ((hi as f64) / (lo as f64)).powf(i as f64 / (count - 1) as f64))
                    .round() as u64
            })
            .collect();
        sizes.dedup();
        Ok(sizes)
    } else {
        let mut sizes = Vec::new();
        for tok in text.split(',') {
            let v: u64 = tok
                .trim()
                .parse()
                .with_context(|| format!("bad size `{tok}`"))?;
            if v < 1 {
                bail!("sizes must be >= 1");
            }
            sizes.push(v);
        }
        if sizes.is_empty() {
            bail!("no sizes given");
        }
        Ok(sizes)
    }
}
