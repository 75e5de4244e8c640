//! Exact decision procedures for the family properties used throughout.
//!
//! Every pair check quantifies over `F, F'` including `F = F'`. On failure
//! the witness is the lexicographically smallest violating pair in canonical
//! member order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, SetMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<(SetMask, SetMask)>,
}

impl Verdict {
    fn from_witness(witness: Option<(SetMask, SetMask)>) -> Self {
        Verdict { holds: witness.is_none(), witness }
    }
}

/// First violating pair `(F, F')` with `F ≤ F'`, for a symmetric relation.
fn first_violation<P>(f: &Family, ok: P) -> Option<(SetMask, SetMask)>
where
    P: Fn(SetMask, SetMask) -> bool,
{
    let members = f.members();
    members.iter().enumerate().find_map(|(idx, &a)| {
        members[idx..]
            .iter()
            .find(|&&b| !ok(a, b))
            .map(|&b| (a, b))
    })
}

fn first_cross_violation<P>(f: &Family, g: &Family, ok: P) -> Result<Option<(SetMask, SetMask)>>
where
    P: Fn(SetMask, SetMask) -> bool,
{
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch(f.ground().get(), g.ground().get()));
    }
    Ok(f.iter()
        .find_map(|a| g.iter().find(|&b| !ok(a, b)).map(|b| (a, b))))
}

pub fn is_t_intersecting(f: &Family, t: u32) -> Verdict {
    Verdict::from_witness(first_violation(f, |a, b| (a & b).len() >= t))
}

pub fn is_s_union(f: &Family, s: u32) -> Verdict {
    Verdict::from_witness(first_violation(f, |a, b| (a | b).len() <= s))
}

/// Intersecting and no two members (equal ones included) cover `[n]`.
pub fn is_iu(f: &Family) -> Verdict {
    let full = f.ground().full();
    Verdict::from_witness(first_violation(f, |a, b| {
        !(a & b).is_empty() && (a | b) != full
    }))
}

/// Vacuously true when either side is empty.
pub fn is_cross_t_intersecting(f: &Family, g: &Family, t: u32) -> Result<Verdict> {
    first_cross_violation(f, g, |a, b| (a & b).len() >= t).map(Verdict::from_witness)
}

/// No member of `f` contains or is contained in a member of `g`.
pub fn is_cross_sperner(f: &Family, g: &Family) -> Result<Verdict> {
    first_cross_violation(f, g, |a, b| !a.is_subset(b) && !b.is_subset(a))
        .map(Verdict::from_witness)
}

/// Closed under taking subsets.
pub fn is_downset(f: &Family) -> bool {
    f.iter()
        .all(|m| m.elements().all(|e| f.contains(m.without(e))))
}

/// Closed under taking supersets within `[n]`.
pub fn is_upset(f: &Family) -> bool {
    let full = f.ground().full();
    f.iter()
        .all(|m| (full - m).elements().all(|e| f.contains(m.with(e))))
}
