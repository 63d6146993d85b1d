//! R0 statistics and collision detection over classified pairs: group pairs
//! by their exact T value and read off the solution-count histograms.

use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeMap;

/// Exact T value used as a grouping key; desk-scale values live in the
/// i128 arm, anything larger spills to a big integer. A given value always
/// lands in the same arm, so grouping is exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiscKey {
    Small(i128),
    Big(BigInt),
}

impl DiscKey {
    pub fn from_bigint(v: &BigInt) -> DiscKey {
        match i128::try_from(v) {
            Ok(s) => DiscKey::Small(s),
            Err(_) => DiscKey::Big(v.clone()),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            DiscKey::Small(v) => BigInt::from(*v),
            DiscKey::Big(v) => v.clone(),
        }
    }
}

impl std::fmt::Display for DiscKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiscKey::Small(v) => write!(f, "{v}"),
            DiscKey::Big(v) => write!(f, "{v}"),
        }
    }
}

/// Compact per-pair row kept for the d-grouped statistics.
#[derive(Debug, Clone)]
pub struct DiscEntry {
    pub key: DiscKey,
    pub a: i64,
    pub b: i64,
    pub squarefree: bool,
    pub osada: bool,
    pub member: bool,
}

/// A pair of box pairs sharing one T value beyond the forced b <-> -b
/// symmetry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub a1: i64,
    pub b1: i64,
    pub a2: i64,
    pub b2: i64,
    /// Shared T value, decimal.
    pub disc: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct R0Stats {
    /// R0 value -> number of squarefree d attaining it (gcd condition on).
    pub histogram: BTreeMap<u64, u64>,
    /// Same histogram without the gcd((n-1)a, nb) = 1 side condition.
    pub raw_histogram: BTreeMap<u64, u64>,
    /// Number of distinct squarefree d with at least one gcd-passing pair.
    pub distinct_d: u64,
    pub sum_r0: u64,
    pub sum_r0_sq: u64,
    /// Member pairs grouped per squarefree d, summed; cross-checks the
    /// census member_count.
    pub member_pair_sum: u64,
    pub collision_count: u64,
    pub collisions: Vec<Collision>,
}

/// Sorts the entries by T value and reads off every histogram in one scan.
pub fn finalize(entries: &mut Vec<DiscEntry>) -> R0Stats {
    entries.sort_by(|x, y| {
        x.key
            .cmp(&y.key)
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    });
    let mut stats = R0Stats::default();
    let mut i = 0;
    while i < entries.len() {
        let mut j = i + 1;
        while j < entries.len() && entries[j].key == entries[i].key {
            j += 1;
        }
        let group = &entries[i..j];

        if group[0].squarefree {
            let raw = group.len() as u64;
            let filtered = group.iter().filter(|e| e.osada).count() as u64;
            let members = group.iter().filter(|e| e.member).count() as u64;
            *stats.raw_histogram.entry(raw).or_insert(0) += 1;
            if filtered > 0 {
                *stats.histogram.entry(filtered).or_insert(0) += 1;
                stats.distinct_d += 1;
                stats.sum_r0 += filtered;
                stats.sum_r0_sq += filtered * filtered;
            }
            stats.member_pair_sum += members;
        }

        // cross-collisions: pairs in the group not related by b <-> -b
        if group.len() > 1 {
            for (x, e1) in group.iter().enumerate() {
                for e2 in &group[x + 1..] {
                    let mirror = e1.a == e2.a && (e1.b == e2.b || e1.b == -e2.b);
                    if !mirror {
                        stats.collision_count += 1;
                        if stats.collisions.len() < COLLISION_LIST_CAP {
                            stats.collisions.push(Collision {
                                a1: e1.a,
                                b1: e1.b,
                                a2: e2.a,
                                b2: e2.b,
                                disc: e1.key.to_string(),
                            });
                        }
                    }
                }
            }
        }
        i = j;
    }
    stats
}

/// Collisions are expected to be extremely sparse; the listing is capped so
/// a pathological box cannot balloon the report.
pub const COLLISION_LIST_CAP: usize = 10_000;
