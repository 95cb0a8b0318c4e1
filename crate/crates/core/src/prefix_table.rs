//! Routing-table prefixes, more-specific filtering and longest-prefix match.
//!
//! A table is loaded from a plain CIDR list (one `a.b.c.d/len` per line,
//! `#` comments allowed), deduplicated, and then stripped of every prefix
//! that is strictly contained in another one. The surviving prefixes are
//! pairwise disjoint, so each IPv4 address maps to at most one of them and
//! prefixes can be identified by a dense integer id.
//!
//! Lookups go through a path-compressed binary trie keyed on prefix bits:
//! at most 32 branch decisions per lookup regardless of table size.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::net::Ipv4Addr;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense prefix identifier, `0..table.len()` after filtering.
pub type PrefixId = u32;

/// An IPv4 prefix in canonical form: host bits below `length` are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Prefix {
    network: u32,
    length: u8,
}

impl Prefix {
    /// Build a prefix, rejecting lengths over 32 and set host bits.
    pub fn new(network: Ipv4Addr, length: u8) -> Result<Self> {
        if length > 32 {
            return Err(Error::InvalidInput(format!(
                "prefix length {length} out of range 0-32"
            )));
        }
        let bits = u32::from(network);
        if bits & !mask(length) != 0 {
            return Err(Error::InvalidInput(format!(
                "{network}/{length} has host bits set"
            )));
        }
        Ok(Prefix {
            network: bits,
            length,
        })
    }

    /// Parse `a.b.c.d/len`.
    pub fn parse(s: &str) -> Result<Self> {
        let (addr, len) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidInput(format!("`{s}` is not in a.b.c.d/len form")))?;
        let network: Ipv4Addr = addr
            .parse()
            .map_err(|_| Error::InvalidInput(format!("`{addr}` is not an IPv4 address")))?;
        let length: u8 = len
            .parse()
            .map_err(|_| Error::InvalidInput(format!("`{len}` is not a prefix length")))?;
        Prefix::new(network, length)
    }

    pub fn network(&self) -> Ipv4Addr {
        Ipv4Addr::from(self.network)
    }

    pub fn length(&self) -> u8 {
        self.length
    }

    /// First address of the prefix, as a raw u32.
    fn start(&self) -> u32 {
        self.network
    }

    /// Last address of the prefix, as a raw u32.
    fn end(&self) -> u32 {
        self.network | !mask(self.length)
    }

    pub fn contains_addr(&self, addr: Ipv4Addr) -> bool {
        u32::from(addr) & mask(self.length) == self.network
    }

    /// True if `self` covers every address of `other` (equality included).
    pub fn covers(&self, other: &Prefix) -> bool {
        self.length <= other.length && other.network & mask(self.length) == self.network
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.network(), self.length)
    }
}

fn mask(length: u8) -> u32 {
    if length == 0 {
        0
    } else {
        u32::MAX << (32 - length)
    }
}

/// A loaded, deduplicated prefix list before more-specific filtering.
#[derive(Debug, Clone)]
pub struct RawTable {
    prefixes: Vec<Prefix>,
}

impl RawTable {
    /// Parse a CIDR list. Empty lines and `#` comments are ignored, CRLF is
    /// tolerated, exact duplicates collapse. A default route is rejected:
    /// it would swallow the whole address space and make the visited-set
    /// accounting meaningless.
    pub fn parse(reader: impl Read) -> Result<Self> {
        let mut prefixes = Vec::new();
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if text.split_whitespace().count() != 1 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected a single CIDR token, got `{text}`"),
                });
            }
            let prefix = Prefix::parse(text).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            if prefix.length == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "default route 0.0.0.0/0 is not usable as an EID prefix".into(),
                });
            }
            prefixes.push(prefix);
        }
        Self::from_prefixes(prefixes)
    }

    /// Load from a file path.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(file)
    }

    pub fn from_prefixes(mut prefixes: Vec<Prefix>) -> Result<Self> {
        prefixes.sort_unstable();
        prefixes.dedup();
        if prefixes.is_empty() {
            return Err(Error::InvalidInput("empty prefix table".into()));
        }
        Ok(RawTable { prefixes })
    }

    /// Number of distinct prefixes as loaded.
    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn prefixes(&self) -> &[Prefix] {
        &self.prefixes
    }

    /// Drop every prefix strictly contained in another one and index the
    /// survivors for lookup.
    pub fn filter_more_specifics(&self) -> PrefixTable {
        let filtered = filter_contained(&self.prefixes);
        PrefixTable::from_disjoint(filtered, self.prefixes.len())
    }
}

/// Remove prefixes contained in another prefix of the (sorted, deduped) input.
///
/// Prefix address ranges never partially overlap, so after sorting by
/// (network, length) a prefix is contained in some earlier prefix exactly
/// when its start falls inside the last survivor's range.
fn filter_contained(sorted: &[Prefix]) -> Vec<Prefix> {
    let mut kept: Vec<Prefix> = Vec::with_capacity(sorted.len());
    for &p in sorted {
        match kept.last() {
            Some(last) if p.start() <= last.end() => {
                debug_assert!(last.covers(&p));
            }
            _ => kept.push(p),
        }
    }
    kept
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(PrefixId),
    /// Test bit `bit` (0 = MSB); children indexed by the bit value.
    Branch {
        bit: u8,
        children: [u32; 2],
    },
}

/// Filtered routing table: pairwise disjoint prefixes with dense ids and a
/// compressed binary trie for longest-prefix match.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct PrefixTable {
    raw_size: usize,
    prefixes: Vec<Prefix>,
    nodes: Vec<Node>,
    root: u32,
}

impl PrefixTable {
    fn from_disjoint(prefixes: Vec<Prefix>, raw_size: usize) -> Self {
        assert!(!prefixes.is_empty());
        let mut nodes = Vec::with_capacity(2 * prefixes.len());
        let root = build_trie(&prefixes, 0, prefixes.len(), &mut nodes);
        PrefixTable {
            raw_size,
            prefixes,
            nodes,
            root,
        }
    }

    /// Number of prefixes in the unfiltered input table.
    pub fn raw_size(&self) -> usize {
        self.raw_size
    }

    /// Number of prefixes after filtering.
    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    /// Prefixes in id order.
    pub fn prefixes(&self) -> &[Prefix] {
        &self.prefixes
    }

    pub fn prefix(&self, id: PrefixId) -> Prefix {
        self.prefixes[id as usize]
    }

    pub fn id_of(&self, prefix: &Prefix) -> Option<PrefixId> {
        self.prefixes
            .binary_search(prefix)
            .ok()
            .map(|i| i as PrefixId)
    }

    /// Longest-prefix match. Filtering guarantees at most one covering
    /// prefix, so the walk ends at a single candidate leaf which is then
    /// verified against the address.
    pub fn lookup(&self, addr: Ipv4Addr) -> Option<PrefixId> {
        let bits = u32::from(addr);
        let mut node = &self.nodes[self.root as usize];
        loop {
            match node {
                Node::Leaf(id) => {
                    let p = self.prefixes[*id as usize];
                    return p.contains_addr(addr).then_some(*id);
                }
                Node::Branch { bit, children } => {
                    let side = (bits >> (31 - bit)) & 1;
                    node = &self.nodes[children[side as usize] as usize];
                }
            }
        }
    }

    /// Re-run more-specific filtering on the already filtered table.
    /// Idempotent by construction; exposed so the property is testable.
    pub fn filter_more_specifics(&self) -> PrefixTable {
        let filtered = filter_contained(&self.prefixes);
        PrefixTable::from_disjoint(filtered, self.raw_size)
    }
}

/// Build a trie over `prefixes[lo..hi]` (sorted, disjoint). Returns the
/// index of the subtree root in `nodes`.
fn build_trie(prefixes: &[Prefix], lo: usize, hi: usize, nodes: &mut Vec<Node>) -> u32 {
    if hi - lo == 1 {
        nodes.push(Node::Leaf(lo as PrefixId));
        return (nodes.len() - 1) as u32;
    }
    // Disjoint prefixes have distinct networks; branch on the first bit
    // where the range's networks diverge. Every prefix in the range is
    // longer than that bit position, otherwise it would cover the rest.
    let first = prefixes[lo].network;
    let last = prefixes[hi - 1].network;
    let bit = (first ^ last).leading_zeros() as u8;
    debug_assert!(bit < 32);
    let split = prefixes[lo..hi].partition_point(|p| (p.network >> (31 - bit)) & 1 == 0) + lo;
    debug_assert!(split > lo && split < hi);

    let slot = nodes.len();
    nodes.push(Node::Branch {
        bit,
        children: [0, 0],
    });
    let left = build_trie(prefixes, lo, split, nodes);
    let right = build_trie(prefixes, split, hi, nodes);
    if let Node::Branch { children, .. } = &mut nodes[slot] {
        *children = [left, right];
    }
    slot as u32
}
