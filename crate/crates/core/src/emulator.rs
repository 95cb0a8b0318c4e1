//! Trace-driven LRU map-cache emulation.
//!
//! The emulator replays a reference stream against a fixed-capacity cache
//! with LRU eviction and infinite TTL: a hit refreshes the entry's recency,
//! a miss inserts (evicting the least recently used entry when full).
//! Recency is an intrusive doubly-linked order over an id-indexed slot
//! array, so hits and misses are O(1) and sweeps over 10^8-reference
//! streams stay CPU-bound.
//!
//! Reports carry both the raw miss rate and the warm (post-first-fill) miss
//! rate: caches close to the visited-set size fill only near the end of a
//! trace, and the fill-up misses visibly overestimate the steady state.
//!
//! Scanning attacks are emulated by constructing the attack prefix set and
//! interleaving its random enumeration uniformly into the legitimate
//! stream at the configured intensity.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_pcg::Pcg64Mcg;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::stats;
use crate::trace::{ReferenceStream, UnitId, VisitedSet};

const NIL: u32 = u32::MAX;

/// Fixed-capacity LRU cache over dense unit ids.
#[derive(Debug, Clone)]
pub struct LruCache {
    capacity: usize,
    /// Per-id linked-list slots; `head`/`tail` of the recency order.
    next: Vec<u32>,
    prev: Vec<u32>,
    present: Vec<bool>,
    head: u32,
    tail: u32,
    len: usize,
    hits: u64,
    misses: u64,
    evictions: u64,
}

impl LruCache {
    /// `universe` is the number of distinct ids the cache may ever see.
    pub fn new(capacity: usize, universe: usize) -> Self {
        assert!(capacity >= 1, "cache capacity must be at least 1");
        LruCache {
            capacity,
            next: vec![NIL; universe],
            prev: vec![NIL; universe],
            present: vec![false; universe],
            head: NIL,
            tail: NIL,
            len: 0,
            hits: 0,
            misses: 0,
            evictions: 0,
        }
    }

    fn unlink(&mut self, id: u32) {
        let (p, n) = (self.prev[id as usize], self.next[id as usize]);
        if p == NIL {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.tail = p;
        } else {
            self.prev[n as usize] = p;
        }
    }

    fn push_front(&mut self, id: u32) {
        self.prev[id as usize] = NIL;
        self.next[id as usize] = self.head;
        if self.head != NIL {
            self.prev[self.head as usize] = id;
        }
        self.head = id;
        if self.tail == NIL {
            self.tail = id;
        }
    }

    /// Reference unit `id`; returns true on a hit.
    #[inline]
    pub fn access(&mut self, id: UnitId) -> bool {
        if self.present[id as usize] {
            self.hits += 1;
            if self.head != id {
                self.unlink(id);
                self.push_front(id);
            }
            true
        } else {
            self.misses += 1;
            if self.len == self.capacity {
                let victim = self.tail;
                self.unlink(victim);
                self.present[victim as usize] = false;
                self.len -= 1;
                self.evictions += 1;
            }
            self.present[id as usize] = true;
            self.push_front(id);
            self.len += 1;
            false
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn contains(&self, id: UnitId) -> bool {
        self.present.get(id as usize).copied().unwrap_or(false)
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn evictions(&self) -> u64 {
        self.evictions
    }
}

/// Per-class counters when the stream carries attack tags.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct PerClass {
    pub legit_refs: u64,
    pub legit_misses: u64,
    pub attack_refs: u64,
    pub attack_misses: u64,
}

/// Outcome of emulating one cache size over one stream.
#[derive(Debug, Clone, Serialize)]
pub struct EmulationReport {
    pub capacity: usize,
    /// `capacity / universe` when the unit universe is known.
    pub normalized_size: Option<f64>,
    pub total_refs: u64,
    pub hits: u64,
    pub misses: u64,
    pub evictions: u64,
    pub miss_rate_raw: f64,
    /// Reference index at which the cache first became full, if it did.
    pub fill_index: Option<u64>,
    /// Miss rate over the references after the fill point.
    pub miss_rate_warm: Option<f64>,
    /// Instantaneous miss rate per fixed window of references.
    pub instantaneous: Vec<(u64, f64)>,
    pub per_class: Option<PerClass>,
    /// Window size used for the instantaneous series.
    pub window: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct EmulateConfig {
    /// Window for the instantaneous miss-rate series.
    pub window: u64,
    /// Unit universe for normalized cache sizes (e.g. the filtered table
    /// size); defaults to the stream alphabet.
    pub universe: Option<u64>,
}

impl Default for EmulateConfig {
    fn default() -> Self {
        EmulateConfig {
            window: 100_000,
            universe: None,
        }
    }
}

/// Emulate one cache size with default reporting options.
pub fn run(stream: &ReferenceStream, capacity: usize) -> EmulationReport {
    run_with(stream, capacity, &EmulateConfig::default())
}

pub fn run_with(
    stream: &ReferenceStream,
    capacity: usize,
    config: &EmulateConfig,
) -> EmulationReport {
    let universe = stream.alphabet_size().max(1);
    let mut cache = LruCache::new(capacity, universe);

    let tagged = stream.has_attack_tags();
    let mut per_class = PerClass::default();
    let mut fill_index: Option<u64> = None;
    let mut warm_misses = 0u64;
    let mut instantaneous = Vec::new();
    let mut window_misses = 0u64;

    for (idx, &id) in stream.ids().iter().enumerate() {
        let hit = cache.access(id);
        if !hit {
            window_misses += 1;
            if fill_index.is_some() {
                warm_misses += 1;
            }
        }
        if tagged {
            if stream.is_attack(idx) {
                per_class.attack_refs += 1;
                per_class.attack_misses += u64::from(!hit);
            } else {
                per_class.legit_refs += 1;
                per_class.legit_misses += u64::from(!hit);
            }
        }
        if fill_index.is_none() && cache.len() == capacity {
            fill_index = Some(idx as u64);
        }
        if (idx as u64 + 1) % config.window == 0 {
            instantaneous.push((
                (idx as u64 + 1) / config.window - 1,
                window_misses as f64 / config.window as f64,
            ));
            window_misses = 0;
        }
    }

    let total = stream.len() as u64;
    let warm_refs = fill_index.map(|fi| total - fi - 1);
    EmulationReport {
        capacity,
        normalized_size: config
            .universe
            .or(Some(universe as u64))
            .filter(|&u| u > 0)
            .map(|u| capacity as f64 / u as f64),
        total_refs: total,
        hits: cache.hits(),
        misses: cache.misses(),
        evictions: cache.evictions(),
        miss_rate_raw: if total > 0 {
            cache.misses() as f64 / total as f64
        } else {
            0.0
        },
        fill_index,
        miss_rate_warm: match (fill_index, warm_refs) {
            (Some(_), Some(w)) if w > 0 => Some(warm_misses as f64 / w as f64),
            _ => None,
        },
        instantaneous,
        per_class: tagged.then_some(per_class),
        window: config.window,
    }
}

/// Emulate every capacity independently (in parallel when enabled).
pub fn sweep(
    stream: &ReferenceStream,
    capacities: &[usize],
    config: &EmulateConfig,
) -> Result<Vec<EmulationReport>> {
    if capacities.is_empty() {
        return Err(Error::InvalidInput("no capacities to sweep".into()));
    }
    if let Some(&bad) = capacities.iter().find(|&&c| c == 0) {
        return Err(Error::InvalidInput(format!("invalid capacity {bad}")));
    }
    Ok(par::map_slice(capacities, |&c| run_with(stream, c, config)))
}

/// Endless scanning-attack reference source: a random enumeration of the
/// attack set, reshuffled at the start of every cycle so no periodic
/// artifact survives across cycles.
#[derive(Debug, Clone)]
pub struct AttackStream {
    omega: Vec<UnitId>,
    rng: Pcg64Mcg,
    cursor: usize,
    universe_size: u32,
}

impl AttackStream {
    /// Members of the attack set (ascending, one per id).
    pub fn omega(&self) -> &[UnitId] {
        &self.omega
    }

    /// References per full scan cycle, `|omega|`.
    pub fn cycle_len(&self) -> usize {
        self.omega.len()
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    fn next_ref(&mut self) -> UnitId {
        if self.cursor == 0 {
            self.omega.shuffle(&mut self.rng);
        }
        let id = self.omega[self.cursor];
        self.cursor = (self.cursor + 1) % self.omega.len();
        id
    }
}

impl Iterator for AttackStream {
    type Item = UnitId;

    fn next(&mut self) -> Option<UnitId> {
        Some(self.next_ref())
    }
}

/// Build the attack set over a dense universe `0..bgp_size`: all ids
/// outside the visited set, plus a seeded uniform sample of
/// `round(delta * |psi|)` visited ids. `omega_size` must equal
/// [`build_attack_size`](crate::attack::build_attack_size) for the same
/// inputs; the redundancy is validated.
pub fn build_attack_stream(
    omega_size: u64,
    seed: u64,
    bgp_size: u32,
    psi: &VisitedSet,
    delta: f64,
) -> Result<AttackStream> {
    let psi_ids = psi.ids();
    if psi_ids.iter().any(|&id| id >= bgp_size) {
        return Err(Error::InvalidInput(
            "visited set contains ids outside the table universe".into(),
        ));
    }
    let expected = crate::attack::build_attack_size(bgp_size as u64, psi.len(), delta)?;
    if omega_size != expected {
        return Err(Error::InvalidInput(format!(
            "omega size {omega_size} inconsistent with universe: expected {expected}"
        )));
    }

    let mut omega: Vec<UnitId> = (0..bgp_size).filter(|&id| !psi.contains(id)).collect();
    let overlap = (delta * psi.len() as f64).round() as usize;
    let mut rng = stats::rng_for(seed, 0xA77AC4);
    if overlap > 0 {
        // Partial Fisher-Yates: the first `overlap` entries become a
        // uniform sample without replacement.
        let mut pool = psi_ids;
        for i in 0..overlap {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        omega.extend_from_slice(&pool[..overlap]);
    }
    omega.sort_unstable();
    debug_assert_eq!(omega.len() as u64, omega_size);

    Ok(AttackStream {
        omega,
        rng,
        cursor: 0,
        universe_size: bgp_size,
    })
}

/// Interleave attack references uniformly into a legitimate stream at
/// `rho` attack packets per legitimate packet, using a credit accumulator:
/// after the j-th legitimate reference the merged stream has emitted
/// exactly `floor(j * rho)` attack references. The legitimate subsequence
/// is preserved verbatim; every reference is class-tagged.
pub fn inject_attack(
    legit: &ReferenceStream,
    attack: &mut AttackStream,
    rho: f64,
) -> Result<ReferenceStream> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "attack intensity rho must be positive, got {rho}"
        )));
    }
    let expected = legit.len() + (legit.len() as f64 * rho).floor() as usize;
    let mut ids: Vec<UnitId> = Vec::with_capacity(expected + 1);
    let mut bits: Vec<u64> = vec![0; (expected + 65) / 64];
    let mut emitted = 0u64;

    let tag_attack = |ids: &mut Vec<UnitId>, bits: &mut Vec<u64>, id: UnitId| {
        let idx = ids.len();
        if idx / 64 >= bits.len() {
            bits.push(0);
        }
        bits[idx / 64] |= 1u64 << (idx % 64);
        ids.push(id);
    };

    for (j, &id) in legit.ids().iter().enumerate() {
        ids.push(id);
        let target = ((j as f64 + 1.0) * rho).floor() as u64;
        while emitted < target {
            tag_attack(&mut ids, &mut bits, attack.next_ref());
            emitted += 1;
        }
    }

    let hint = (legit.alphabet_size() as u32).max(attack.universe_size());
    Ok(ReferenceStream::from_ids(ids)
        .with_attack_bits(bits)
        .with_hint(hint))
}

/// Naive list-based LRU, O(capacity) per reference. Semantically identical
/// to [`run`]; kept as an independent oracle for exact-equivalence tests
/// on small inputs.
pub fn reference_lru(ids: &[UnitId], capacity: usize) -> (u64, u64) {
    assert!(capacity >= 1);
    let mut cache: Vec<UnitId> = Vec::with_capacity(capacity);
    let mut misses = 0u64;
    let mut hits = 0u64;
    for &id in ids {
        match cache.iter().position(|&x| x == id) {
            Some(pos) => {
                hits += 1;
                cache.remove(pos);
                cache.insert(0, id);
            }
            None => {
                misses += 1;
                if cache.len() == capacity {
                    cache.pop();
                }
                cache.insert(0, id);
            }
        }
    }
    (misses, hits)
}
