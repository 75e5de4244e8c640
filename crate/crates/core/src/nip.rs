//! Necessary intersection points of cross `t`-intersecting pairs and the
//! weight-non-decreasing compression that pushes the maximal one down.
//!
//! For a cross pair `(F, G)` the element `a` is a necessary intersection
//! point when `|[a] ∩ F ∩ G| = t` and `a ∈ F ∩ G`, i.e. `a` is the `t`-th
//! smallest element of `F ∩ G`. Each cross pair therefore contributes
//! exactly one point, and the maximal one is a maximum over pairs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, SetMask};
use crate::params::{rational_string, ExactRational};
use crate::predicates::is_cross_t_intersecting;
use crate::separated::{family_weight, k_family, s_family, WeightTable};
use crate::shifting::{shift_pair_to_fixpoint, ShiftPair};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NipReport {
    pub max_nip: Option<u32>,
    /// `F^a`: members of `f` in some witness pair for `a`.
    pub f_witnesses: Family,
    /// `G^a`: members of `g` in some witness pair for `a`.
    pub g_witnesses: Family,
}

fn require_cross(f: &Family, g: &Family, t: u32) -> Result<()> {
    if f.is_empty() || g.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let verdict = is_cross_t_intersecting(f, g, t)?;
    if let Some((a, b)) = verdict.witness {
        return Err(Error::NotCrossIntersecting { t, f: a.to_string(), g: b.to_string() });
    }
    Ok(())
}

/// The necessary intersection point contributed by one cross pair.
fn pair_point(a: SetMask, b: SetMask, t: u32) -> Option<u32> {
    (a & b).nth_smallest(t)
}

pub fn max_nip(f: &Family, g: &Family, t: u32) -> Result<NipReport> {
    if t == 0 {
        return Err(Error::Params("t must be positive".into()));
    }
    require_cross(f, g, t)?;
    let best = f
        .iter()
        .flat_map(|a| g.iter().filter_map(move |b| pair_point(a, b, t)))
        .max();
    let Some(top) = best else {
        return Ok(NipReport {
            max_nip: None,
            f_witnesses: Family::empty(f.ground()),
            g_witnesses: Family::empty(g.ground()),
        });
    };
    let f_witnesses = f.filter(|a| g.iter().any(|b| pair_point(a, b, t) == Some(top)));
    let g_witnesses = g.filter(|b| f.iter().any(|a| pair_point(a, b, t) == Some(top)));
    Ok(NipReport { max_nip: Some(top), f_witnesses, g_witnesses })
}

/// Which side of the compression grew.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `F* = F ∪ F^add`, `G* = G \ G^a`
    GrowF,
    /// `F* = F \ F^a`, `G* = G ∪ G^add`
    GrowG,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressStep {
    pub f: Family,
    pub g: Family,
    /// Maximal necessary intersection point of the input.
    pub a: u32,
    pub branch: Branch,
    #[serde(with = "rational_string")]
    pub weight_before: ExactRational,
    #[serde(with = "rational_string")]
    pub weight_after: ExactRational,
}

/// `ω_1(f) + ω_2(g)`.
pub fn pair_weight(f: &Family, g: &Family, w1: &WeightTable, w2: &WeightTable) -> Result<ExactRational> {
    Ok(family_weight(f, w1)? + family_weight(g, w2)?)
}

fn drop_point(witnesses: &Family, a: u32) -> Family {
    Family::from_valid(witnesses.ground(), witnesses.iter().map(|m| m.without(a)).collect())
}

/// One compression step at the maximal necessary intersection point `a`.
///
/// With `F^add = {F \ {a} : F ∈ F^a}` (and `G^add` alike), grows `F` and
/// trims `G` when `ω_1(F^a) ≥ ω_2(G^a)`, and the other way round otherwise.
pub fn compress_step(
    f: &Family,
    g: &Family,
    t: u32,
    w1: &WeightTable,
    w2: &WeightTable,
) -> Result<CompressStep> {
    let nip = max_nip(f, g, t)?;
    let a = nip.max_nip.ok_or(Error::NoNip)?;
    if a == t {
        return Err(Error::TerminalAEqualsT(a));
    }
    if nip.f_witnesses == *f {
        return Err(Error::FEqualsWitnesses(a));
    }
    if nip.g_witnesses == *g {
        return Err(Error::GEqualsWitnesses(a));
    }
    let weight_before = pair_weight(f, g, w1, w2)?;
    let (next_f, next_g, branch) =
        if family_weight(&nip.f_witnesses, w1)? >= family_weight(&nip.g_witnesses, w2)? {
            let grown = f.union(&drop_point(&nip.f_witnesses, a))?;
            (grown, g.difference(&nip.g_witnesses)?, Branch::GrowF)
        } else {
            let grown = g.union(&drop_point(&nip.g_witnesses, a))?;
            (f.difference(&nip.f_witnesses)?, grown, Branch::GrowG)
        };
    let weight_after = pair_weight(&next_f, &next_g, w1, w2)?;
    Ok(CompressStep { f: next_f, g: next_g, a, branch, weight_before, weight_after })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Shift,
    Compress,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub detail: String,
    pub a_before: Option<u32>,
    pub a_after: Option<u32>,
    #[serde(with = "rational_string")]
    pub weight_before: ExactRational,
    #[serde(with = "rational_string")]
    pub weight_after: ExactRational,
}

/// How a compression run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TerminalClass {
    /// Every member of `f` is a witness: `f` sits inside `S_k(a, ·)`, `g` inside `K_k(a, ·, t)`.
    #[serde(rename = "(S,K)")]
    SK,
    /// Every member of `g` is a witness: `f` sits inside `K_k(a, ·, t)`, `g` inside `S_k(a, ·)`.
    #[serde(rename = "(K,S)")]
    KS,
    /// `a = t`, so `[t]` lies in every member of both families.
    #[serde(rename = "a=t-star")]
    AEqualsT,
}

impl std::fmt::Display for TerminalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TerminalClass::SK => "(S,K)",
            TerminalClass::KS => "(K,S)",
            TerminalClass::AEqualsT => "a=t",
        })
    }
}

impl std::fmt::Display for StepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepKind::Shift => "shift",
            StepKind::Compress => "compress",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Terminal {
    pub f: Family,
    pub g: Family,
    pub a: u32,
    pub class: TerminalClass,
    pub trace: Vec<TraceStep>,
    #[serde(with = "rational_string")]
    pub initial_weight: ExactRational,
    #[serde(with = "rational_string")]
    pub terminal_weight: ExactRational,
}

/// Total budget for `k · |trace|`.
pub const STEP_CAP: usize = 10_000;

/// Alternates joint shifting and [`compress_step`] until the pair is
/// terminal, then classifies it.
pub fn compress_to_terminal(
    f: &Family,
    g: &Family,
    t: u32,
    w1: &WeightTable,
    w2: &WeightTable,
    allowed: &[ShiftPair],
) -> Result<Terminal> {
    let k = f.ground().get() as usize;
    let mut f = f.clone();
    let mut g = g.clone();
    let initial_weight = pair_weight(&f, &g, w1, w2)?;
    let mut trace = Vec::new();

    loop {
        if k * trace.len() > STEP_CAP {
            return Err(Error::StepCap(trace.len()));
        }
        let shifted = shift_pair_to_fixpoint(&f, &g, allowed)?;
        if !shifted.log.is_empty() {
            let weight = pair_weight(&shifted.f, &shifted.g, w1, w2)?;
            let before = max_nip(&f, &g, t)?.max_nip;
            let after = max_nip(&shifted.f, &shifted.g, t)?.max_nip;
            trace.push(TraceStep {
                kind: StepKind::Shift,
                detail: shifted
                    .log
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
                a_before: before,
                a_after: after,
                weight_before: weight.clone(),
                weight_after: weight,
            });
            f = shifted.f;
            g = shifted.g;
        }

        let nip = max_nip(&f, &g, t)?;
        let a = nip.max_nip.ok_or(Error::NoNip)?;
        let class = if a == t {
            Some(TerminalClass::AEqualsT)
        } else if nip.f_witnesses == f {
            Some(TerminalClass::SK)
        } else if nip.g_witnesses == g {
            Some(TerminalClass::KS)
        } else {
            None
        };
        if let Some(class) = class {
            let terminal_weight = pair_weight(&f, &g, w1, w2)?;
            return Ok(Terminal { f, g, a, class, trace, initial_weight, terminal_weight });
        }

        let step = compress_step(&f, &g, t, w1, w2)?;
        let after = max_nip(&step.f, &step.g, t)?.max_nip;
        trace.push(TraceStep {
            kind: StepKind::Compress,
            detail: format!("{:?} at a = {}", step.branch, step.a),
            a_before: Some(step.a),
            a_after: after,
            weight_before: step.weight_before,
            weight_after: step.weight_after,
        });
        f = step.f;
        g = step.g;
    }
}

/// One candidate of the structured maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuredEntry {
    /// `"KS"` for `(K_k(a,ℓ,t), S_k(a,ℓ′))`, `"SK"` for `(S_k(a,ℓ), K_k(a,ℓ′,t))`.
    pub shape: &'static str,
    pub a: u32,
    #[serde(with = "rational_string")]
    pub value: ExactRational,
}

/// `max{ max_{a∈[t,ℓ′]} ω_1(K_k(a,ℓ,t)) + ω_2(S_k(a,ℓ′)),
///       max_{a∈[t,ℓ]} ω_1(S_k(a,ℓ)) + ω_2(K_k(a,ℓ′,t)) }`,
/// the upper bound for arbitrary non-increasing weights. Ties keep the
/// first entry in the order listed.
pub fn structured_max(
    k: u32,
    l: u32,
    lp: u32,
    t: u32,
    w1: &WeightTable,
    w2: &WeightTable,
) -> Result<StructuredEntry> {
    if !(k >= l && l >= lp && lp >= t && t >= 1) {
        return Err(Error::Params(format!("need k >= l >= l' >= t >= 1, got k={k} l={l} l'={lp} t={t}")));
    }
    let mut best: Option<StructuredEntry> = None;
    let mut offer = |entry: StructuredEntry| {
        if best.as_ref().map_or(true, |b| entry.value > b.value) {
            best = Some(entry);
        }
    };
    for a in t..=lp {
        let value = pair_weight(&k_family(k, a, l, t)?, &s_family(k, a, lp)?, w1, w2)?;
        offer(StructuredEntry { shape: "KS", a, value });
    }
    for a in t..=l {
        let value = pair_weight(&s_family(k, a, l)?, &k_family(k, a, lp, t)?, w1, w2)?;
        offer(StructuredEntry { shape: "SK", a, value });
    }
    best.ok_or_else(|| Error::Internal("empty candidate range".into()))
}
