//! Relay index sets as bitmasks and deterministic set enumeration.
//!
//! Relays are numbered 1..=N. A `NodeSet` stores relay k in bit k-1, so the
//! numeric order of the masks is the lexicographic order of characteristic
//! vectors (with relay 1 in the least significant position):
//! {}, {1}, {2}, {1,2}, {3}, ...

use crate::error::{Error, Result};
use std::fmt;

pub const MAX_RELAYS: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    /// The full relay set {1, ..., n}.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_RELAYS, "at most {MAX_RELAYS} relays supported");
        NodeSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(k: usize) -> Self {
        assert!(k >= 1 && k <= MAX_RELAYS, "relay index out of range");
        NodeSet(1 << (k - 1))
    }

    pub fn from_slice(nodes: &[usize]) -> Self {
        nodes.iter().fold(NodeSet::EMPTY, |s, &k| s.with(k))
    }

    pub fn with(self, k: usize) -> Self {
        self.union(NodeSet::singleton(k))
    }

    pub fn without(self, k: usize) -> Self {
        NodeSet(self.0 & !NodeSet::singleton(k).0)
    }

    pub fn contains(self, k: usize) -> bool {
        k >= 1 && k <= MAX_RELAYS && self.0 & NodeSet::singleton(k).0 != 0
    }

    pub fn union(self, other: NodeSet) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> Self {
        NodeSet(self.0 & !other.0)
    }

    /// Complement within `ground`.
    pub fn complement_in(self, ground: NodeSet) -> Self {
        ground.difference(self)
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Relay indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (1..=MAX_RELAYS).filter(move |k| mask & (1 << (k - 1)) != 0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All sets S with `lower` ⊆ S ⊆ `upper`, in increasing mask order
/// (lexicographic characteristic vectors, relay 1 least significant).
pub fn enumerate_subsets(ground: NodeSet, lower: NodeSet, upper: NodeSet) -> Result<Vec<NodeSet>> {
    if !lower.is_subset(upper) || !upper.is_subset(ground) {
        return Err(Error::InvalidParameter(format!(
            "inclusion chain violated: need {lower} \u{2286} {upper} \u{2286} {ground}"
        )));
    }
    let free = upper.difference(lower).0;
    let mut out = Vec::with_capacity(1 << free.count_ones());
    // Standard subset-of-mask walk: visits submasks of `free` in increasing order.
    let mut sub: u32 = 0;
    loop {
        out.push(NodeSet(lower.0 | sub));
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    out.sort();
    Ok(out)
}

/// All ordered partitions of `ground` into at most `max_layers` nonempty
/// disjoint layers, in a deterministic order (first layer enumerated in
/// subset order, then recursively).
pub fn enumerate_ordered_partitions(
    ground: NodeSet,
    max_layers: usize,
) -> Result<Vec<Vec<NodeSet>>> {
    if ground.len() > 8 {
        return Err(Error::EnumerationCap(format!(
            "ordered partitions requested for {} elements (limit 8)",
            ground.len()
        )));
    }
    let mut out = Vec::new();
    if ground.is_empty() {
        out.push(Vec::new());
        return Ok(out);
    }
    if max_layers == 0 {
        return Ok(out); // nonempty ground, no layers allowed: no partitions
    }
    for first in enumerate_subsets(ground, NodeSet::EMPTY, ground)? {
        if first.is_empty() {
            continue;
        }
        let rest = ground.difference(first);
        for tail in enumerate_ordered_partitions(rest, max_layers - 1)? {
            let mut layers = Vec::with_capacity(tail.len() + 1);
            layers.push(first);
            layers.extend(tail);
            out.push(layers);
        }
    }
    Ok(out)
}

/// Ordered Bell numbers via the standard recurrence
/// a(n) = sum_{k=1..n} C(n,k) a(n-k); used as an independent count oracle.
pub fn ordered_bell(n: usize) -> u64 {
    let mut a = vec![1u64; n + 1];
    for m in 1..=n {
        let mut total = 0u64;
        let mut binom = 1u64;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u64 / k as u64;
            total += binom * a[m - k];
        }
        a[m] = total;
    }
    a[n]
}
