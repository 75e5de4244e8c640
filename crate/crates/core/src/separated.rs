//! Separated families over a ground set cut into `k` blocks of `n` elements.
//!
//! Block `X_i` is the interval `[(i−1)n + 1, in]` and its minimum is
//! `v_i = (i−1)n + 1`. `H(n, k, ℓ)` is the family of `ℓ`-sets meeting every
//! block at most once.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{content_lines, parse_header_value, Family, GroundSize, SetMask};
use crate::params::{integer, rational_string, ExactRational};
use crate::shifting::ShiftPair;

/// `C(m, r)`, zero when `r < 0` or `r > m`.
pub fn binomial(m: i64, r: i64) -> BigInt {
    if r < 0 || m < 0 || r > m {
        return BigInt::zero();
    }
    let r = r.min(m - r);
    let mut acc = BigInt::one();
    for step in 0..r {
        acc = acc * BigInt::from(m - step) / BigInt::from(step + 1);
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BlockStructure {
    /// Block size.
    pub n: u32,
    /// Number of blocks.
    pub k: u32,
}

impl BlockStructure {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Params(format!("block size and count must be positive (n={n}, k={k})")));
        }
        GroundSize::new(n * k).map_err(|_| {
            Error::Params(format!("separated ground n*k = {} exceeds 30", n * k))
        })?;
        Ok(Self { n, k })
    }

    pub fn ground(self) -> GroundSize {
        GroundSize::new(self.n * self.k).expect("validated in new")
    }

    /// `X_i` for `i ∈ [k]`.
    pub fn block(self, i: u32) -> SetMask {
        debug_assert!((1..=self.k).contains(&i));
        SetMask::from_bits(((1u32 << self.n) - 1) << ((i - 1) * self.n))
    }

    /// `v_i`, the smallest element of `X_i`.
    pub fn minimum(self, i: u32) -> u32 {
        (i - 1) * self.n + 1
    }

    /// `{v_1, …, v_a}`.
    pub fn minima(self, a: u32) -> SetMask {
        SetMask::from_elements((1..=a.min(self.k)).map(|i| self.minimum(i)))
    }

    pub fn block_of(self, e: u32) -> u32 {
        (e - 1) / self.n + 1
    }

    /// Shifting operators allowed on separated families: `i < j` in one block.
    pub fn shift_pairs(self) -> Vec<ShiftPair> {
        (1..=self.k)
            .flat_map(|b| {
                let elems: Vec<u32> = self.block(b).elements().collect();
                let mut pairs = Vec::new();
                for (x, &i) in elems.iter().enumerate() {
                    for &j in &elems[x + 1..] {
                        pairs.push(ShiftPair { i, j });
                    }
                }
                pairs
            })
            .collect()
    }

    /// Whether `set` meets every block at most once; the offending block otherwise.
    pub fn check_separated(self, set: SetMask) -> Result<()> {
        for b in 1..=self.k {
            if (set & self.block(b)).len() > 1 {
                return Err(Error::BlockCollision { set: set.to_string(), block: b });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeparatedParams {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub lp: u32,
    pub t: u32,
}

impl SeparatedParams {
    /// Checks `k ≥ ℓ ≥ ℓ′ ≥ t ≥ 1` and `n ≥ 1`.
    pub fn new(n: u32, k: u32, l: u32, lp: u32, t: u32) -> Result<Self> {
        if n == 0 || t == 0 || !(k >= l && l >= lp && lp >= t) {
            return Err(Error::Params(format!(
                "need n >= 1 and k >= l >= l' >= t >= 1, got n={n} k={k} l={l} l'={lp} t={t}"
            )));
        }
        Ok(Self { n, k, l, lp, t })
    }

    pub fn blocks(self) -> Result<BlockStructure> {
        BlockStructure::new(self.n, self.k)
    }
}

impl fmt::Display for SeparatedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={} l={} l'={} t={}", self.n, self.k, self.l, self.lp, self.t)
    }
}

/// A nonnegative weight per set size `j ∈ [0, k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightTable {
    #[serde(with = "rational_string::vec")]
    values: Vec<ExactRational>,
}

impl WeightTable {
    /// Requires nonnegative, non-increasing values.
    pub fn new(values: Vec<ExactRational>) -> Result<Self> {
        let table = Self { values };
        if table.values.is_empty() {
            return Err(Error::Weights("table must cover at least j = 0".into()));
        }
        if table.values.iter().any(|v| v.is_negative()) {
            return Err(Error::Weights("weights must be nonnegative".into()));
        }
        if !table.is_non_increasing() {
            return Err(Error::Weights("weights must be non-increasing".into()));
        }
        Ok(table)
    }

    pub fn from_integers(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| integer(v)).collect())
    }

    /// Every size gets weight one, so family weight is family size.
    pub fn unit(k: u32) -> Self {
        Self { values: vec![integer(1); k as usize + 1] }
    }

    pub fn max_size(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    pub fn get(&self, j: u32) -> &ExactRational {
        &self.values[j as usize]
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightTables {
    pub omega1: WeightTable,
    pub omega2: WeightTable,
    pub warnings: Vec<String>,
}

fn omega(n: u32, k: u32, size: u32, j: u32) -> BigInt {
    let exp = i64::from(size) - i64::from(j);
    if exp < 0 {
        return BigInt::zero();
    }
    binomial(i64::from(k) - i64::from(j), exp) * Pow::pow(BigInt::from(n - 1), exp as u64)
}

/// `ω_1(j) = C(k−j, ℓ−j)(n−1)^{ℓ−j}` and `ω_2(j) = C(k−j, ℓ′−j)(n−1)^{ℓ′−j}`.
///
/// At `n = 1` the tables need not be monotone; they are returned anyway with
/// a warning.
pub fn weight_tables(p: SeparatedParams) -> WeightTables {
    let build = |size: u32| WeightTable {
        values: (0..=p.k).map(|j| integer(omega(p.n, p.k, size, j))).collect(),
    };
    let omega1 = build(p.l);
    let omega2 = build(p.lp);
    let mut warnings = Vec::new();
    if p.n < 2 {
        warnings.push("n < 2: weight tables are not guaranteed to be non-increasing".to_string());
    }
    WeightTables { omega1, omega2, warnings }
}

/// `H(n, k, ℓ)`.
pub fn enumerate_h(bs: BlockStructure, l: u32) -> Result<Family> {
    if l > bs.k {
        return Err(Error::Params(format!("l = {l} exceeds the block count k = {}", bs.k)));
    }
    let mut out = Vec::new();
    fill_h(bs, 1, l, SetMask::EMPTY, &mut out);
    Family::new(bs.ground(), out)
}

fn fill_h(bs: BlockStructure, block: u32, remaining: u32, acc: SetMask, out: &mut Vec<SetMask>) {
    if remaining == 0 {
        out.push(acc);
        return;
    }
    if bs.k + 1 - block < remaining {
        return;
    }
    for e in bs.block(block).elements() {
        fill_h(bs, block + 1, remaining - 1, acc.with(e), out);
    }
    fill_h(bs, block + 1, remaining, acc, out);
}

/// `A(H) = {i : H ∩ X_i = {v_i}}`, as a subset of `[k]`.
pub fn a_profile(h: SetMask, bs: BlockStructure) -> Result<SetMask> {
    let mut profile = SetMask::EMPTY;
    for b in 1..=bs.k {
        let hit = h & bs.block(b);
        if hit.len() > 1 {
            return Err(Error::BlockCollision { set: h.to_string(), block: b });
        }
        if hit == SetMask::singleton(bs.minimum(b)) {
            profile = profile.with(b);
        }
    }
    Ok(profile)
}

/// `A(F) = {A(F) : F ∈ F}` over the ground set `[k]`, deduplicated.
pub fn a_family(f: &Family, bs: BlockStructure) -> Result<Family> {
    if f.ground() != bs.ground() {
        return Err(Error::GroundMismatch(f.ground().get(), bs.ground().get()));
    }
    let profiles = f
        .iter()
        .map(|h| a_profile(h, bs))
        .collect::<Result<Vec<_>>>()?;
    Family::new(GroundSize::new(bs.k)?, profiles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidate {
    /// `{F ∈ H(n,k,ℓ) : |F ∩ {v_1..v_ℓ′}| ≥ t}`
    F0,
    /// `{{v_1, …, v_ℓ′}}`
    G0,
    /// `{F ∈ H(n,k,ℓ) : {v_1..v_a} ⊆ F}`
    Fa(u32),
    /// `{G ∈ H(n,k,ℓ′) : |G ∩ {v_1..v_a}| ≥ t}`
    Ga(u32),
}

pub fn build_candidates(p: SeparatedParams, which: Candidate) -> Result<Family> {
    let bs = p.blocks()?;
    let check_a = |a: u32| {
        if a == 0 || a > p.l {
            Err(Error::Params(format!("a = {a} outside [1, l = {}]", p.l)))
        } else {
            Ok(())
        }
    };
    match which {
        Candidate::F0 => {
            let v = bs.minima(p.lp);
            Ok(enumerate_h(bs, p.l)?.filter(|m| (m & v).len() >= p.t))
        }
        Candidate::G0 => Family::new(bs.ground(), [bs.minima(p.lp)]),
        Candidate::Fa(a) => {
            check_a(a)?;
            let v = bs.minima(a);
            Ok(enumerate_h(bs, p.l)?.filter(|m| v.is_subset(m)))
        }
        Candidate::Ga(a) => {
            check_a(a)?;
            let v = bs.minima(a);
            Ok(enumerate_h(bs, p.lp)?.filter(|m| (m & v).len() >= p.t))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsKind {
    /// `K_k(a, ℓ, t) = {K ⊆ [k] : |K| ≤ ℓ, |K ∩ [a]| ≥ t}`
    K,
    /// `S_k(a, ℓ) = {S ⊆ [k] : |S| ≤ ℓ, [a] ⊆ S}`
    S,
}

pub fn build_ks(k: u32, a: u32, l: u32, t: u32, which: KsKind) -> Result<Family> {
    if t > a {
        return Err(Error::Params(format!("need t <= a, got t={t} a={a}")));
    }
    match which {
        KsKind::K => k_family(k, a, l, t),
        KsKind::S => s_family(k, a, l),
    }
}

fn ks_universe(k: u32, a: u32, l: u32) -> Result<Family> {
    if a > k || l > k {
        return Err(Error::Params(format!("need a <= k and l <= k, got k={k} a={a} l={l}")));
    }
    Ok(Family::up_to_size(GroundSize::new(k)?, l))
}

pub fn k_family(k: u32, a: u32, l: u32, t: u32) -> Result<Family> {
    let prefix = SetMask::prefix(a);
    Ok(ks_universe(k, a, l)?.filter(|m| (m & prefix).len() >= t))
}

pub fn s_family(k: u32, a: u32, l: u32) -> Result<Family> {
    let prefix = SetMask::prefix(a);
    Ok(ks_universe(k, a, l)?.filter(|m| prefix.is_subset(m)))
}

/// `Σ_{F ∈ f} w(|F|)`.
pub fn family_weight(f: &Family, w: &WeightTable) -> Result<ExactRational> {
    let hist = f.size_histogram();
    let mut total = ExactRational::zero();
    for (size, &count) in hist.iter().enumerate() {
        if count == 0 {
            continue;
        }
        if size as u32 > w.max_size() {
            return Err(Error::Weights(format!(
                "member of size {size} but the table stops at {}",
                w.max_size()
            )));
        }
        total += w.get(size as u32) * integer(count);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub a: u32,
    #[serde(with = "rational_string")]
    pub value: ExactRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "which", content = "a", rename_all = "lowercase")]
pub enum Argmax {
    F(u32),
    G(u32),
}

impl fmt::Display for Argmax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argmax::F(a) => write!(f, "f({a})"),
            Argmax::G(a) => write!(f, "g({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct T3Report {
    pub params: SeparatedParams,
    /// `f(a)` for `a ∈ [t, ℓ′]`.
    pub f: Vec<BoundEntry>,
    /// `g(a)` for `a ∈ [t, ℓ]`.
    pub g: Vec<BoundEntry>,
    #[serde(with = "rational_string")]
    pub bound: ExactRational,
    pub argmax: Argmax,
    /// Whether the candidate sizes were re-counted by enumeration.
    pub identities_checked: bool,
}

impl T3Report {
    pub fn f_at(&self, a: u32) -> Option<&ExactRational> {
        self.f.iter().find(|e| e.a == a).map(|e| &e.value)
    }

    pub fn g_at(&self, a: u32) -> Option<&ExactRational> {
        self.g.iter().find(|e| e.a == a).map(|e| &e.value)
    }
}

/// Largest `n·k` for which [`t3_bound`] re-counts candidates by enumeration.
pub const IDENTITY_CHECK_MAX_GROUND: u32 = 16;

/// The upper bound on `|F| + |G|` for non-empty cross `t`-intersecting
/// `F ⊆ H(n,k,ℓ)`, `G ⊆ H(n,k,ℓ′)`:
/// `max{f(ℓ′), max_{a ∈ [ℓ′+1, ℓ]} g(a)}` with
/// `f(a) = ω_1(K_k(a,ℓ,t)) + ω_2(S_k(a,ℓ′))` and
/// `g(a) = ω_1(S_k(a,ℓ)) + ω_2(K_k(a,ℓ′,t))`.
///
/// Ties go to `f(ℓ′)`, then to the smallest `a`.
pub fn t3_bound(p: SeparatedParams) -> Result<T3Report> {
    if p.n < 2 {
        return Err(Error::Params("the bound needs n >= 2 (weight tables can fail monotonicity at n = 1)".into()));
    }
    let WeightTables { omega1, omega2, .. } = weight_tables(p);
    let f_at = |a: u32| -> Result<ExactRational> {
        Ok(family_weight(&k_family(p.k, a, p.l, p.t)?, &omega1)?
            + family_weight(&s_family(p.k, a, p.lp)?, &omega2)?)
    };
    let g_at = |a: u32| -> Result<ExactRational> {
        Ok(family_weight(&s_family(p.k, a, p.l)?, &omega1)?
            + family_weight(&k_family(p.k, a, p.lp, p.t)?, &omega2)?)
    };
    let f = (p.t..=p.lp)
        .map(|a| Ok(BoundEntry { a, value: f_at(a)? }))
        .collect::<Result<Vec<_>>>()?;
    let g = (p.t..=p.l)
        .map(|a| Ok(BoundEntry { a, value: g_at(a)? }))
        .collect::<Result<Vec<_>>>()?;

    let f_top = f.last().expect("t <= l' so the range is non-empty");
    let mut bound = f_top.value.clone();
    let mut argmax = Argmax::F(p.lp);
    for entry in g.iter().filter(|e| e.a > p.lp) {
        if entry.value > bound {
            bound = entry.value.clone();
            argmax = Argmax::G(entry.a);
        }
    }

    let identities_checked = p.n * p.k <= IDENTITY_CHECK_MAX_GROUND;
    if identities_checked {
        let sum = |x: Candidate, y: Candidate| -> Result<ExactRational> {
            Ok(integer(build_candidates(p, x)?.len() + build_candidates(p, y)?.len()))
        };
        let counted = sum(Candidate::F0, Candidate::G0)?;
        if counted != f_top.value {
            return Err(Error::Internal(format!(
                "|F_0| + |G_0| = {counted} but f({}) = {} for {p}",
                p.lp, f_top.value
            )));
        }
        for entry in g.iter().filter(|e| e.a > p.lp) {
            let counted = sum(Candidate::Fa(entry.a), Candidate::Ga(entry.a))?;
            if counted != entry.value {
                return Err(Error::Internal(format!(
                    "|F_{a}| + |G_{a}| = {counted} but g({a}) = {} for {p}",
                    entry.value,
                    a = entry.a
                )));
            }
        }
    }

    Ok(T3Report { params: p, f, g, bound, argmax, identities_checked })
}

/// `f(a+1) − f(a)` from the explicit difference formula
/// `Σ_{j ∈ [0, ℓ−t]} C(a, t−1) C(k−a−1, j) ω_1(j+t) − Σ_{j ∈ [0, ℓ′−a]} C(k−a−1, j) ω_2(j+a)`.
pub fn f_difference(p: SeparatedParams, w1: &WeightTable, w2: &WeightTable, a: u32) -> ExactRational {
    let (k, a64, t) = (i64::from(p.k), i64::from(a), i64::from(p.t));
    let mut diff = ExactRational::zero();
    for j in 0..=(p.l - p.t) {
        let coeff = binomial(a64, t - 1) * binomial(k - a64 - 1, i64::from(j));
        if !coeff.is_zero() {
            diff += integer(coeff) * w1.get(j + p.t);
        }
    }
    for j in 0..=(p.lp.saturating_sub(a)) {
        let coeff = binomial(k - a64 - 1, i64::from(j));
        if !coeff.is_zero() {
            diff -= integer(coeff) * w2.get(j + a);
        }
    }
    diff
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct F23Report {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub lp: u32,
    #[serde(serialize_with = "bigint_string")]
    pub value: BigInt,
    /// Whether `n > 3ℓ`, the range where the closed form is known to hold.
    pub hypothesis_holds: bool,
}

fn bigint_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `Σ_{j ∈ [ℓ]} (C(k, j) − C(k−ℓ′, j)) C(k−j, ℓ−j) (n−1)^{ℓ−j} + 1`, evaluated
/// for any inputs.
pub fn f23_sum(n: u32, k: u32, l: u32, lp: u32) -> BigInt {
    let (k, l, lp) = (i64::from(k), i64::from(l), i64::from(lp));
    let base = BigInt::from(i64::from(n) - 1);
    let mut total = BigInt::one();
    for j in 1..=l {
        let lead = binomial(k, j) - binomial(k - lp, j);
        if lead.is_zero() {
            continue;
        }
        total += lead * binomial(k - j, l - j) * Pow::pow(&base, (l - j) as u64);
    }
    total
}

pub fn f23_report(n: u32, k: u32, l: u32, lp: u32) -> F23Report {
    F23Report {
        n,
        k,
        l,
        lp,
        value: f23_sum(n, k, l, lp),
        hypothesis_holds: n > 3 * l,
    }
}

/// A family read from a separated instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatedFamily {
    pub blocks: BlockStructure,
    pub family: Family,
}

impl SeparatedFamily {
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} k={}\n", self.blocks.n, self.blocks.k);
        for m in self.family.iter() {
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses a separated instance file: header `n=<int> k=<int>`, then one set
/// per line in global element numbering.
pub fn parse_separated(text: &str) -> Result<SeparatedFamily> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n=<int> k=<int>` header".into(),
    })?;
    let n = parse_header_value(header, "n", line_no)?;
    let k = parse_header_value(header, "k", line_no)?;
    let blocks = BlockStructure::new(n, k)?;
    let ground = blocks.ground();
    let mut members = Vec::new();
    for (line_no, line) in lines {
        let set: SetMask = line.parse().map_err(|message| Error::Parse { line: line_no, message })?;
        if !ground.admits(set) {
            let element = set.max_element().unwrap_or(0);
            return Err(Error::ElementOutOfRange { element, n: ground.get() });
        }
        blocks.check_separated(set)?;
        members.push(set);
    }
    Ok(SeparatedFamily { blocks, family: Family::new(ground, members)? })
}
