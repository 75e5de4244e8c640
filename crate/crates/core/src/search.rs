//! Brute-force oracles: exhaustive cross `t`-intersecting pair maximization,
//! maximal IU-family enumeration, and parameter sweeps that compare the
//! oracles against the closed-form bounds.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, GroundSize, SetMask};
use crate::nip::structured_max;
use crate::params::{integer, rational_string, sperner_budget_check, sturdiness, ExactRational};
use crate::separated::{enumerate_h, f23_sum, t3_bound, weight_tables, BlockStructure, SeparatedParams, WeightTable};

/// Hard ceiling on `max_universe_bits`.
pub const MAX_UNIVERSE_BITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_universe_bits: u32,
    pub time_cap: Option<Duration>,
    pub parallel_chunks: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_universe_bits: MAX_UNIVERSE_BITS,
            time_cap: Some(Duration::from_secs(600)),
            parallel_chunks: 64,
        }
    }
}

impl SearchBudget {
    fn validate(&self) -> Result<()> {
        if self.max_universe_bits > MAX_UNIVERSE_BITS {
            return Err(Error::Budget(format!(
                "max_universe_bits = {} exceeds {MAX_UNIVERSE_BITS}",
                self.max_universe_bits
            )));
        }
        Ok(())
    }

    fn deadline(&self, start: Instant) -> Option<Instant> {
        self.time_cap.map(|cap| start + cap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Pair { f: Family, g: Family },
    Single { family: Family },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    #[serde(with = "rational_string::option")]
    pub optimum: Option<ExactRational>,
    pub witness: Option<Witness>,
    pub method: String,
    pub exhaustive: bool,
}

/// `{G ∈ universe : |G ∩ F| ≥ t for all F ∈ f}`.
pub fn best_partner(f: &Family, universe: &Family, t: u32) -> Family {
    universe.filter(|g| f.iter().all(|m| (m & g).len() >= t))
}

/// Weight tables rescaled to a common denominator.
struct ScaledWeights {
    denominator: BigInt,
    w1: Vec<u64>,
    w2: Vec<u64>,
}

fn scale_weights(w1: &WeightTable, w2: &WeightTable) -> Result<ScaledWeights> {
    let denominator = w1
        .values()
        .iter()
        .chain(w2.values())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scale = |w: &WeightTable| -> Result<Vec<u64>> {
        w.values()
            .iter()
            .map(|v| {
                (v * ExactRational::from_integer(denominator.clone()))
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| Error::Weights("scaled weight does not fit in 64 bits".into()))
            })
            .collect()
    };
    Ok(ScaledWeights { w1: scale(w1)?, w2: scale(w2)?, denominator })
}

fn member_weights(universe: &Family, table: &[u64]) -> Result<Vec<u64>> {
    universe
        .iter()
        .map(|m| {
            table.get(m.len() as usize).copied().ok_or_else(|| {
                Error::Weights(format!("member {m} is larger than the table ({} entries)", table.len()))
            })
        })
        .collect()
}

/// Compatibility bitsets of the outer members against the inner universe.
struct PairKernel {
    outer_len: usize,
    words: usize,
    compat: Vec<u64>,
    outer_weight: Vec<u64>,
    inner_weight: Vec<u64>,
}

/// Best `(score, mask)` so far: larger score wins, then smaller mask.
type Best = Option<(u128, u32)>;

fn better(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if x.0 > y.0 || (x.0 == y.0 && x.1 < y.1) {
                Some(x)
            } else {
                Some(y)
            }
        }
    }
}

struct Scan<'a> {
    kernel: &'a PairKernel,
    deadline: Option<Instant>,
    stop: &'a AtomicBool,
    nodes: u64,
}

impl PairKernel {
    fn new(outer: &Family, inner: &Family, t: u32, ow: Vec<u64>, iw: Vec<u64>) -> Self {
        let words = inner.len().div_ceil(64).max(1);
        let mut compat = vec![0u64; outer.len() * words];
        for (i, f) in outer.iter().enumerate() {
            for (j, g) in inner.iter().enumerate() {
                if (f & g).len() >= t {
                    compat[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Self { outer_len: outer.len(), words, compat, outer_weight: ow, inner_weight: iw }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.compat[i * self.words..(i + 1) * self.words]
    }

    fn partner_weight(&self, partner: &[u64]) -> u128 {
        let mut total = 0u128;
        for (w, &word) in partner.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let j = w * 64 + bits.trailing_zeros() as usize;
                total += u128::from(self.inner_weight[j]);
                bits &= bits - 1;
            }
        }
        total
    }
}

impl Scan<'_> {
    fn expired(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        self.stop.load(Ordering::Relaxed)
    }

    /// Extends `mask` by members with index `>= start`.
    fn descend(&mut self, start: usize, mask: u32, f_weight: u128, partner: &[u64], best: &mut Best) {
        let k = self.kernel;
        let mut next = vec![0u64; k.words];
        for i in start..k.outer_len {
            if self.expired() {
                return;
            }
            let mut any = false;
            for (w, slot) in next.iter_mut().enumerate() {
                *slot = partner[w] & k.compat[i * k.words + w];
                any |= *slot != 0;
            }
            // Supersets only shrink the partner.
            if !any {
                continue;
            }
            let weight = f_weight + u128::from(k.outer_weight[i]);
            let chosen = mask | 1 << i;
            *best = better(*best, Some((weight + k.partner_weight(&next), chosen)));
            let snapshot = next.clone();
            self.descend(i + 1, chosen, weight, &snapshot, best);
        }
    }
}

/// Maximum of `ω_1(f) + ω_2(g)` over non-empty cross `t`-intersecting
/// `f ⊆ universe_f`, `g ⊆ universe_g`.
///
/// Only subsets of the smaller universe are enumerated; the other side is
/// always [`best_partner`]. Exceeding the time cap yields the best pair seen
/// so far with `exhaustive = false`.
pub fn exhaustive_pair_max(
    universe_f: &Family,
    universe_g: &Family,
    t: u32,
    w1: &WeightTable,
    w2: &WeightTable,
    budget: &SearchBudget,
) -> Result<ExtremalReport> {
    budget.validate()?;
    if universe_f.ground() != universe_g.ground() {
        return Err(Error::GroundMismatch(universe_f.ground().get(), universe_g.ground().get()));
    }
    let swapped = universe_g.len() < universe_f.len();
    let (outer, inner) = if swapped { (universe_g, universe_f) } else { (universe_f, universe_g) };
    if outer.len() > budget.max_universe_bits as usize {
        return Err(Error::Budget(format!(
            "smaller universe has {} members, cap is {}",
            outer.len(),
            budget.max_universe_bits
        )));
    }
    let scaled = scale_weights(w1, w2)?;
    let (ow, iw) = if swapped { (&scaled.w2, &scaled.w1) } else { (&scaled.w1, &scaled.w2) };
    let kernel = PairKernel::new(outer, inner, t, member_weights(outer, ow)?, member_weights(inner, iw)?);

    let start = Instant::now();
    let stop = AtomicBool::new(false);
    let depth = (budget.parallel_chunks.max(1).next_power_of_two().trailing_zeros() as usize).min(kernel.outer_len);
    let full_partner: Vec<u64> = (0..kernel.words)
        .map(|w| {
            let bits = inner.len().saturating_sub(w * 64).min(64);
            if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 }
        })
        .collect();

    let best = (0u32..1 << depth)
        .into_par_iter()
        .map(|prefix| {
            let mut partner = full_partner.clone();
            let mut weight = 0u128;
            for i in (0..depth).filter(|i| prefix >> i & 1 == 1) {
                for (w, slot) in partner.iter_mut().enumerate() {
                    *slot &= kernel.row(i)[w];
                }
                weight += u128::from(kernel.outer_weight[i]);
            }
            if prefix != 0 && partner.iter().all(|&w| w == 0) {
                return None;
            }
            let mut best = None;
            if prefix != 0 {
                best = Some((weight + kernel.partner_weight(&partner), prefix));
            }
            let mut scan = Scan { kernel: &kernel, deadline: budget.deadline(start), stop: &stop, nodes: 0 };
            scan.descend(depth, prefix, weight, &partner, &mut best);
            best
        })
        .reduce(|| None, better);

    let exhaustive = !stop.load(Ordering::Relaxed);
    let method = format!(
        "subsets of the {}-member universe with best partner from the {}-member one",
        outer.len(),
        inner.len()
    );
    let Some((score, mask)) = best else {
        return Ok(ExtremalReport { optimum: None, witness: None, method, exhaustive });
    };
    let chosen = outer.filter_indexed(|i| mask >> i & 1 == 1);
    let partner = best_partner(&chosen, inner, t);
    let (f, g) = if swapped { (partner, chosen) } else { (chosen, partner) };
    let optimum = ExactRational::new(BigInt::from(score), scaled.denominator);
    Ok(ExtremalReport { optimum: Some(optimum), witness: Some(Witness::Pair { f, g }), method, exhaustive })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IuAggregate {
    pub n: u32,
    /// Optimum is the largest maximal IU-family; witness is one attaining it.
    pub report: ExtremalReport,
    pub maximal_families: u64,
    pub max_beta: usize,
    pub max_beta_witness: Option<Family>,
}

struct CliqueSearch<'a, C: FnMut(&Family)> {
    n: GroundSize,
    vertices: Vec<SetMask>,
    adj: Vec<u64>,
    deadline: Option<Instant>,
    stopped: bool,
    on_family: &'a mut C,
    count: u64,
    max_size: Option<Family>,
    max_beta: Option<(usize, Family)>,
}

impl<C: FnMut(&Family)> CliqueSearch<'_, C> {
    fn emit(&mut self, r: &[usize]) {
        let family = Family::from_valid(self.n, r.iter().map(|&v| self.vertices[v]).collect());
        (self.on_family)(&family);
        self.count += 1;
        if self.count % 256 == 0 {
            if let Some(deadline) = self.deadline {
                self.stopped |= Instant::now() >= deadline;
            }
        }
        let beta = sturdiness(&family).map(|(b, _)| b).unwrap_or(0);
        if self.max_beta.as_ref().map_or(true, |(b, _)| beta > *b) {
            self.max_beta = Some((beta, family.clone()));
        }
        if self.max_size.as_ref().map_or(true, |m| family.len() > m.len()) {
            self.max_size = Some(family);
        }
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: u64, mut x: u64) {
        if self.stopped {
            return;
        }
        if p == 0 {
            if x == 0 {
                self.emit(r);
            }
            return;
        }
        let mut candidates = p | x;
        let mut pivot = 0;
        let mut pivot_hits = -1i32;
        while candidates != 0 {
            let u = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let hits = (p & self.adj[u]).count_ones() as i32;
            if hits > pivot_hits {
                pivot = u;
                pivot_hits = hits;
            }
        }
        let mut todo = p & !self.adj[pivot];
        while todo != 0 {
            let v = todo.trailing_zeros() as usize;
            todo &= todo - 1;
            r.push(v);
            self.expand(r, p & self.adj[v], x & self.adj[v]);
            r.pop();
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
}

/// Vertex order from repeatedly removing a minimum-degree vertex.
fn degeneracy_order(adj: &[u64]) -> Vec<usize> {
    let mut remaining: u64 = if adj.len() == 64 { u64::MAX } else { (1u64 << adj.len()) - 1 };
    let mut order = Vec::with_capacity(adj.len());
    while remaining != 0 {
        let mut bits = remaining;
        let mut pick = 0;
        let mut low = u32::MAX;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (adj[v] & remaining).count_ones();
            if d < low {
                low = d;
                pick = v;
            }
        }
        order.push(pick);
        remaining &= !(1 << pick);
    }
    order
}

/// Enumerates every inclusion-maximal IU-family over `[n]`, `3 ≤ n ≤ 6`, as
/// a maximal clique of the compatibility graph on `2^[n] \ {∅, [n]}`.
pub fn iu_maximal_families<C: FnMut(&Family)>(
    n: u32,
    budget: &SearchBudget,
    mut on_family: C,
) -> Result<IuAggregate> {
    if !(3..=6).contains(&n) {
        return Err(Error::Params(format!("IU clique search needs 3 <= n <= 6, got {n}")));
    }
    let ground = GroundSize::new(n)?;
    let full = ground.full();
    let vertices: Vec<SetMask> = Family::power_set(ground)
        .iter()
        .filter(|&m| !m.is_empty() && m != full)
        .collect();
    let adj: Vec<u64> = vertices
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            vertices.iter().enumerate().fold(0u64, |acc, (j, &b)| {
                if i != j && !(a & b).is_empty() && (a | b) != full {
                    acc | 1 << j
                } else {
                    acc
                }
            })
        })
        .collect();

    let start = Instant::now();
    let mut search = CliqueSearch {
        n: ground,
        vertices,
        adj,
        deadline: budget.deadline(start),
        stopped: false,
        on_family: &mut on_family,
        count: 0,
        max_size: None,
        max_beta: None,
    };
    let mut earlier = 0u64;
    for v in degeneracy_order(&search.adj) {
        let later = !earlier & !(1u64 << v);
        let p = search.adj[v] & later;
        let x = search.adj[v] & earlier;
        search.expand(&mut vec![v], p, x);
        earlier |= 1 << v;
        if search.stopped {
            break;
        }
    }

    let report = ExtremalReport {
        optimum: search.max_size.as_ref().map(|f| integer(f.len() as u64)),
        witness: search.max_size.clone().map(|family| Witness::Single { family }),
        method: "maximal cliques by pivoting Bron-Kerbosch in degeneracy order".into(),
        exhaustive: !search.stopped,
    };
    let (max_beta, max_beta_witness) = match search.max_beta {
        Some((b, f)) => (b, Some(f)),
        None => (0, None),
    };
    Ok(IuAggregate { n, report, maximal_families: search.count, max_beta, max_beta_witness })
}

/// Calls `visit` on every cross-Sperner pair of families over `[n]`, `n ≤ 4`.
pub fn for_each_cross_sperner_pair<V: FnMut(&Family, &Family)>(n: u32, mut visit: V) -> Result<()> {
    if n > 4 {
        return Err(Error::Budget(format!("exhaustive cross-Sperner enumeration needs n <= 4, got {n}")));
    }
    let ground = GroundSize::new(n)?;
    let sets: Vec<SetMask> = Family::power_set(ground).iter().collect();
    let m = sets.len();
    let comparable: Vec<u32> = sets
        .iter()
        .map(|&a| {
            (0..m).fold(0u32, |acc, j| {
                let b = sets[j];
                if a.is_subset(b) || b.is_subset(a) { acc | 1 << j } else { acc }
            })
        })
        .collect();
    let pick = |bits: u32| Family::from_valid(ground, (0..m).filter(|j| bits >> j & 1 == 1).map(|j| sets[j]).collect());
    let all = ((1u64 << m) - 1) as u32;
    for fbits in 0..=all {
        let blocked = (0..m).filter(|i| fbits >> i & 1 == 1).fold(0u32, |acc, i| acc | comparable[i]);
        let allowed = all & !blocked;
        let f = pick(fbits);
        let mut sub = allowed;
        loop {
            visit(&f, &pick(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & allowed;
        }
        if fbits == all {
            break;
        }
    }
    Ok(())
}

/// A random cross-Sperner pair over `[n]`.
pub fn random_cross_sperner_pair<R: Rng>(n: GroundSize, rng: &mut R) -> (Family, Family) {
    let full = n.full().bits();
    let count = rng.gen_range(1..=6);
    let f = Family::from_valid(n, (0..count).map(|_| SetMask::from_bits(rng.gen::<u32>() & full)).collect());
    let density: f64 = rng.gen_range(0.01..0.5);
    let g = Family::power_set(n).filter(|b| {
        f.iter().all(|a| !a.is_subset(b) && !b.is_subset(a)) && rng.gen_bool(density)
    });
    (f, g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    T1,
    T2,
    N1,
    T3,
    F23,
}

impl FromStr for SweepTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t1" => Ok(Self::T1),
            "t2" => Ok(Self::T2),
            "n1" => Ok(Self::N1),
            "t3" => Ok(Self::T3),
            "f23" => Ok(Self::F23),
            other => Err(Error::Params(format!("unknown sweep target {other:?}; use t1, t2, n1, t3 or f23"))),
        }
    }
}

impl fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::T1 => "t1",
            Self::T2 => "t2",
            Self::N1 => "n1",
            Self::T3 => "t3",
            Self::F23 => "f23",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Equality,
    Violation,
    ExpectedCounterexample,
    Skipped,
}

impl Outcome {
    fn compare(optimum: &ExactRational, bound: &ExactRational) -> Self {
        match optimum.cmp(bound) {
            std::cmp::Ordering::Less => Self::Pass,
            std::cmp::Ordering::Equal => Self::Equality,
            std::cmp::Ordering::Greater => Self::Violation,
        }
    }

    pub fn is_failure(self) -> bool {
        self == Self::Violation
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub target: SweepTarget,
    pub params: String,
    #[serde(with = "rational_string::option")]
    pub optimum: Option<ExactRational>,
    #[serde(with = "rational_string::option")]
    pub bound: Option<ExactRational>,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Parameter ranges for [`extremal_sweep`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub n: Vec<u32>,
    pub k_max: u32,
    pub t_max: u32,
    pub p: Vec<ExactRational>,
    /// Random pairs per `(n, p)` when `n` is too large for exhaustion.
    pub random_pairs: usize,
    pub seed: u64,
    pub budget: SearchBudget,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            n: vec![2, 3],
            k_max: 3,
            t_max: 2,
            p: ["1/10", "1/4", "1/2", "3/4", "9/10"]
                .iter()
                .map(|s| crate::params::parse_rational(s).expect("constant"))
                .collect(),
            random_pairs: 1000,
            seed: 0x5eed,
            budget: SearchBudget::default(),
        }
    }
}

fn skipped(target: SweepTarget, params: String, note: String) -> SweepRecord {
    SweepRecord { target, params, optimum: None, bound: None, outcome: Outcome::Skipped, witness: None, note: Some(note) }
}

fn bounded(
    target: SweepTarget,
    params: String,
    report: ExtremalReport,
    bound: ExactRational,
) -> SweepRecord {
    if !report.exhaustive {
        return skipped(target, params, "time cap reached before the scan finished".into());
    }
    let outcome = match &report.optimum {
        Some(opt) => Outcome::compare(opt, &bound),
        None => Outcome::Pass,
    };
    SweepRecord { target, params, optimum: report.optimum, bound: Some(bound), outcome, witness: report.witness, note: None }
}

fn pair_oracle(
    uf: &Family,
    ug: &Family,
    t: u32,
    w1: &WeightTable,
    w2: &WeightTable,
    budget: &SearchBudget,
) -> Result<Option<ExtremalReport>> {
    match exhaustive_pair_max(uf, ug, t, w1, w2, budget) {
        Ok(report) => Ok(Some(report)),
        Err(Error::Budget(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn sweep_t1(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for &n in spec.n.iter().filter(|n| (3..=6).contains(*n)) {
        let agg = iu_maximal_families(n, &spec.budget, |_| {})?;
        let params = format!("n={n}");
        if !agg.report.exhaustive {
            records.push(skipped(SweepTarget::T1, params, "time cap reached during clique enumeration".into()));
            continue;
        }
        let size_bound = integer(1u64 << (n - 2));
        let mut size = bounded(SweepTarget::T1, format!("{params} |f|"), agg.report.clone(), size_bound);
        size.note = Some(format!("{} maximal IU-families", agg.maximal_families));
        records.push(size);
        let beta_bound = ExactRational::new(BigInt::one() << n, BigInt::from(16));
        let beta = integer(agg.max_beta as u64);
        records.push(SweepRecord {
            target: SweepTarget::T1,
            params: format!("{params} beta"),
            outcome: Outcome::compare(&beta, &beta_bound),
            optimum: Some(beta),
            bound: Some(beta_bound),
            witness: agg.max_beta_witness.map(|family| Witness::Single { family }),
            note: None,
        });
    }
    Ok(records)
}

fn sweep_t2(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for &n in &spec.n {
        for p in &spec.p {
            let mut checked = 0u64;
            let mut violation: Option<(Family, Family)> = None;
            let mut cache: HashMap<(Vec<u64>, Vec<u64>), bool> = HashMap::new();
            let mut check = |f: &Family, g: &Family| -> Result<()> {
                checked += 1;
                let key = (f.size_histogram(), g.size_histogram());
                let ok = match cache.get(&key) {
                    Some(&ok) => ok,
                    None => {
                        let ok = sperner_budget_check(f, g, p)?;
                        cache.insert(key, ok);
                        ok
                    }
                };
                if !ok && violation.is_none() {
                    violation = Some((f.clone(), g.clone()));
                }
                Ok(())
            };
            let (mode, result) = if n <= 4 {
                let mut err = Ok(());
                for_each_cross_sperner_pair(n, |f, g| {
                    if err.is_ok() {
                        err = check(f, g);
                    }
                })?;
                ("exhaustive", err)
            } else {
                let ground = GroundSize::new(n)?;
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ u64::from(n));
                let mut err = Ok(());
                for _ in 0..spec.random_pairs {
                    let (f, g) = random_cross_sperner_pair(ground, &mut rng);
                    err = check(&f, &g);
                    if err.is_err() {
                        break;
                    }
                }
                ("random", err)
            };
            result?;
            records.push(SweepRecord {
                target: SweepTarget::T2,
                params: format!("n={n} p={p} {mode}"),
                optimum: None,
                bound: None,
                outcome: if violation.is_some() { Outcome::Violation } else { Outcome::Pass },
                witness: violation.map(|(f, g)| Witness::Pair { f, g }),
                note: Some(format!("{checked} cross-Sperner pairs")),
            });
        }
    }
    Ok(records)
}

fn sweep_n1(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for k in 1..=spec.k_max {
        let ground = GroundSize::new(k)?;
        for l in 1..=k {
            for lp in 1..=l {
                for t in 1..=lp.min(spec.t_max) {
                    let uf = Family::up_to_size(ground, l);
                    let ug = Family::up_to_size(ground, lp);
                    let mut tables = vec![("unit".to_string(), WeightTable::unit(k), WeightTable::unit(k))];
                    for &n in spec.n.iter().filter(|&&n| n >= 2) {
                        let w = weight_tables(SeparatedParams::new(n, k, l, lp, t)?);
                        tables.push((format!("omega(n={n})"), w.omega1, w.omega2));
                    }
                    for (label, w1, w2) in tables {
                        let params = format!("k={k} l={l} l'={lp} t={t} {label}");
                        let bound = structured_max(k, l, lp, t, &w1, &w2)?.value;
                        match pair_oracle(&uf, &ug, t, &w1, &w2, &spec.budget)? {
                            Some(report) => records.push(bounded(SweepTarget::N1, params, report, bound)),
                            None => records.push(skipped(SweepTarget::N1, params, "universe exceeds the bit cap".into())),
                        }
                    }
                }
            }
        }
    }
    Ok(records)
}

fn sweep_t3(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for &n in spec.n.iter().filter(|&&n| n >= 2) {
        for k in 1..=spec.k_max {
            let Ok(bs) = BlockStructure::new(n, k) else { continue };
            for l in 1..=k {
                for lp in 1..=l {
                    for t in 1..=lp.min(spec.t_max) {
                        let p = SeparatedParams::new(n, k, l, lp, t)?;
                        let params = p.to_string();
                        let uf = enumerate_h(bs, l)?;
                        let ug = enumerate_h(bs, lp)?;
                        let unit = WeightTable::unit(bs.ground().get());
                        let Some(report) = pair_oracle(&uf, &ug, t, &unit, &unit, &spec.budget)? else {
                            records.push(skipped(SweepTarget::T3, params, "universe exceeds the bit cap".into()));
                            continue;
                        };
                        records.push(bounded(SweepTarget::T3, params, report, t3_bound(p)?.bound));
                    }
                }
            }
        }
    }
    Ok(records)
}

fn sweep_f23(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for &n in spec.n.iter().filter(|&&n| n >= 2) {
        for k in 2..=spec.k_max {
            let Ok(bs) = BlockStructure::new(n, k) else { continue };
            for l in 2..=k {
                for lp in 2..=l {
                    let params = format!("n={n} k={k} l={l} l'={lp}");
                    let uf = enumerate_h(bs, l)?;
                    let ug = enumerate_h(bs, lp)?;
                    let unit = WeightTable::unit(bs.ground().get());
                    let Some(report) = pair_oracle(&uf, &ug, 1, &unit, &unit, &spec.budget)? else {
                        records.push(skipped(SweepTarget::F23, params, "universe exceeds the bit cap".into()));
                        continue;
                    };
                    let mut record = bounded(SweepTarget::F23, params, report, integer(f23_sum(n, k, l, lp)));
                    if record.outcome == Outcome::Violation && n <= 3 * l {
                        record.outcome = Outcome::ExpectedCounterexample;
                        record.note = Some(format!("n = {n} <= 3l = {}: outside the hypothesis", 3 * l));
                    }
                    records.push(record);
                }
            }
        }
    }
    Ok(records)
}

/// Runs the oracle matching `target` on every instance in `spec` and
/// compares it with the corresponding bound.
pub fn extremal_sweep(spec: &SweepSpec, target: SweepTarget) -> Result<Vec<SweepRecord>> {
    spec.budget.validate()?;
    match target {
        SweepTarget::T1 => sweep_t1(spec),
        SweepTarget::T2 => sweep_t2(spec),
        SweepTarget::N1 => sweep_n1(spec),
        SweepTarget::T3 => sweep_t3(spec),
        SweepTarget::F23 => sweep_f23(spec),
    }
}
