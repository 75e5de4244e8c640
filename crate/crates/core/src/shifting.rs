//! The shifting operator `s_{i,j}` and joint shifting of family pairs.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, GroundSize, SetMask};

/// An ordered pair `i < j` naming the operator `s_{i,j}`, which replaces
/// `j` by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShiftPair {
    pub i: u32,
    pub j: u32,
}

impl ShiftPair {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidPair { i, j, reason: "elements are 1-based" });
        }
        if i >= j {
            return Err(Error::InvalidPair { i, j, reason: "need i < j" });
        }
        Ok(Self { i, j })
    }

    pub fn check(self, n: GroundSize) -> Result<()> {
        if self.j > n.get() {
            return Err(Error::InvalidPair {
                i: self.i,
                j: self.j,
                reason: "element outside the ground set",
            });
        }
        Ok(())
    }

    /// `s_{i,j}` applied to one set, given membership in the family.
    fn apply(self, set: SetMask, family: &Family) -> SetMask {
        if set.contains(self.j) && !set.contains(self.i) {
            let moved = set.without(self.j).with(self.i);
            if !family.contains(moved) {
                return moved;
            }
        }
        set
    }
}

impl fmt::Display for ShiftPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// Every pair `1 ≤ i < j ≤ n`, in lexicographic order.
pub fn all_pairs(n: GroundSize) -> Vec<ShiftPair> {
    let n = n.get();
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| ShiftPair { i, j }))
        .collect()
}

/// `s_{i,j}(f)`, or `None` when the operator fixes `f`.
fn try_shift(f: &Family, pair: ShiftPair) -> Option<Family> {
    let moves = f
        .iter()
        .any(|m| pair.apply(m, f) != m);
    if !moves {
        return None;
    }
    let members: Vec<SetMask> = f.iter().map(|m| pair.apply(m, f)).collect();
    let shifted = Family::new(f.ground(), members).expect("shifting stays inside the ground set");
    debug_assert_eq!(shifted.len(), f.len());
    Some(shifted)
}

pub fn shift_once(f: &Family, pair: ShiftPair) -> Result<Family> {
    pair.check(f.ground())?;
    Ok(try_shift(f, pair).unwrap_or_else(|| f.clone()))
}

/// True iff every allowed operator fixes `f`.
pub fn is_shifted(f: &Family, allowed: &[ShiftPair]) -> bool {
    allowed
        .iter()
        .filter(|p| p.j <= f.ground().get())
        .all(|p| try_shift(f, *p).is_none())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointShift {
    pub f: Family,
    pub g: Family,
    /// Pairs applied, in order; serializes as `[[i, j], ...]`.
    #[serde(serialize_with = "pairs_as_arrays")]
    pub log: Vec<ShiftPair>,
}

fn pairs_as_arrays<S: serde::Serializer>(log: &[ShiftPair], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(log.iter().map(|p| [p.i, p.j]))
}

/// Applies the same operator to both families until neither moves.
///
/// Pairs are scanned in lexicographic order and the scan restarts after
/// every productive application, so the log is deterministic.
pub fn shift_pair_to_fixpoint(f: &Family, g: &Family, allowed: &[ShiftPair]) -> Result<JointShift> {
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch(f.ground().get(), g.ground().get()));
    }
    let mut pairs = allowed.to_vec();
    for p in &pairs {
        p.check(f.ground())?;
    }
    pairs.sort_unstable();
    pairs.dedup();

    let mut f = f.clone();
    let mut g = g.clone();
    let mut log = Vec::new();
    'scan: loop {
        for &pair in &pairs {
            let next_f = try_shift(&f, pair);
            let next_g = try_shift(&g, pair);
            if next_f.is_some() || next_g.is_some() {
                if let Some(next) = next_f {
                    f = next;
                }
                if let Some(next) = next_g {
                    g = next;
                }
                log.push(pair);
                continue 'scan;
            }
        }
        break;
    }
    Ok(JointShift { f, g, log })
}

/// `Σ_{F ∈ f} Σ_{e ∈ F} e`, which every productive shift strictly lowers.
pub fn element_weight(f: &Family) -> u64 {
    f.iter()
        .flat_map(|m| m.elements())
        .map(u64::from)
        .sum()
}
