//! Degree, diversity and sturdiness, plus exact product-measure arithmetic.
//!
//! No floating point appears anywhere in this module. The square-root
//! inequality `√x + √y ≤ 1` is decided through its radical-free equivalent
//! `x + y ≤ 1 ∧ 4xy ≤ (1 − x − y)²`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{restrict, Family, GroundSize, Restriction, SetMask};
use crate::predicates::{is_downset, is_upset};

/// Arbitrary-precision rational in lowest terms.
pub type ExactRational = BigRational;

/// Parses `"num/den"` or a plain integer.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let bad = || Error::Params(format!("`{text}` is not a rational of the form num/den"));
    let (num, den) = match text.trim().split_once('/') {
        Some((num, den)) => (num.trim(), den.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn rational(num: i64, den: i64) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

pub fn integer(value: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(value.into())
}

/// Serde helper: rationals serialize as `"num/den"` strings (`"7"` for integers).
pub mod rational_string {
    use super::ExactRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub mod option {
        use super::ExactRational;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(value: &Option<ExactRational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.collect_str(v),
                None => s.serialize_none(),
            }
        }
    }

    pub mod vec {
        use super::ExactRational;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(values: &[ExactRational], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(values.iter().map(|v| v.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub n: u32,
    pub size: usize,
    pub max_degree: usize,
    /// Smallest element attaining the maximum degree.
    pub max_degree_element: u32,
    pub diversity: usize,
    /// Smallest element attaining the diversity.
    pub diversity_element: u32,
    /// Absent when `n < 2`.
    pub sturdiness: Option<usize>,
    /// Lexicographically smallest ordered pair `(i, j)` attaining the sturdiness.
    pub sturdiness_pair: Option<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub max_degree: usize,
    pub max_degree_element: u32,
    pub diversity: usize,
    pub diversity_element: u32,
}

/// `Δ(f)` and `γ(f)`; zeros for the empty family.
pub fn degree_stats(f: &Family) -> DegreeStats {
    let n = f.ground().get();
    let mut stats = DegreeStats {
        max_degree: 0,
        max_degree_element: 1,
        diversity: usize::MAX,
        diversity_element: 1,
    };
    for i in 1..=n {
        let degree = restrict(f, Restriction::Contains(i)).map(|r| r.len()).unwrap_or(0);
        let avoiding = restrict(f, Restriction::Avoids(i)).map(|r| r.len()).unwrap_or(0);
        if degree > stats.max_degree {
            stats.max_degree = degree;
            stats.max_degree_element = i;
        }
        if avoiding < stats.diversity {
            stats.diversity = avoiding;
            stats.diversity_element = i;
        }
    }
    debug_assert_eq!(stats.diversity, f.len() - stats.max_degree);
    stats
}

/// `β(f) = min_{i ≠ j} |f(i, j̄)|` with the lexicographically smallest argmin.
pub fn sturdiness(f: &Family) -> Result<(usize, (u32, u32))> {
    let n = f.ground().get();
    if n < 2 {
        return Err(Error::Params(format!("sturdiness needs n >= 2, got {n}")));
    }
    let mut best = (usize::MAX, (0, 0));
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let count = pair_count(f, i, j);
            if count < best.0 {
                best = (count, (i, j));
            }
        }
    }
    Ok(best)
}

/// `|f(i, j̄)|` without materializing the restriction.
pub fn pair_count(f: &Family, i: u32, j: u32) -> usize {
    f.iter().filter(|m| m.contains(i) && !m.contains(j)).count()
}

pub fn param_report(f: &Family) -> ParamReport {
    let stats = degree_stats(f);
    let sturdy = sturdiness(f).ok();
    ParamReport {
        n: f.ground().get(),
        size: f.len(),
        max_degree: stats.max_degree,
        max_degree_element: stats.max_degree_element,
        diversity: stats.diversity,
        diversity_element: stats.diversity_element,
        sturdiness: sturdy.map(|(value, _)| value),
        sturdiness_pair: sturdy.map(|(_, pair)| pair),
    }
}

/// The product measure `μ_p` on `2^[n]` for one rational `p ∈ (0, 1)`.
///
/// Stores `μ_p` of a single set of each cardinality, so measuring a family
/// costs one multiplication per cardinality.
#[derive(Debug, Clone)]
pub struct ProductMeasure {
    p: ExactRational,
    by_size: Vec<ExactRational>,
}

impl ProductMeasure {
    pub fn new(n: GroundSize, p: &ExactRational) -> Result<Self> {
        check_probability(p)?;
        let q = ExactRational::one() - p;
        let n = n.get() as usize;
        let by_size = (0..=n)
            .map(|c| Pow::pow(p, c) * Pow::pow(&q, n - c))
            .collect();
        Ok(Self { p: p.clone(), by_size })
    }

    pub fn p(&self) -> &ExactRational {
        &self.p
    }

    pub fn of_set(&self, set: SetMask) -> &ExactRational {
        &self.by_size[set.len() as usize]
    }

    pub fn of_family(&self, f: &Family) -> ExactRational {
        debug_assert_eq!(f.ground().get() as usize + 1, self.by_size.len());
        f.size_histogram()
            .into_iter()
            .zip(&self.by_size)
            .filter(|(count, _)| *count > 0)
            .map(|(count, w)| w * integer(count))
            .fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

fn check_probability(p: &ExactRational) -> Result<()> {
    if p > &ExactRational::zero() && p < &ExactRational::one() {
        Ok(())
    } else {
        Err(Error::Probability(p.to_string()))
    }
}

/// `μ_p(f) = Σ_{F ∈ f} p^{|F|} (1 − p)^{n − |F|}`.
pub fn product_measure(f: &Family, p: &ExactRational) -> Result<ExactRational> {
    Ok(ProductMeasure::new(f.ground(), p)?.of_family(f))
}

/// Exact `√x + √y ≤ 1` for nonnegative rationals.
pub fn sqrt_sum_at_most_one(x: &ExactRational, y: &ExactRational) -> bool {
    let one = ExactRational::one();
    let slack = &one - x - y;
    if slack < ExactRational::zero() {
        return false;
    }
    integer(4) * x * y <= &slack * &slack
}

/// `μ_p(f)^{1/2} + μ_p(g)^{1/2} ≤ 1`, decided exactly. Does not re-verify
/// that the pair is cross-Sperner.
pub fn sperner_budget_check(f: &Family, g: &Family, p: &ExactRational) -> Result<bool> {
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch(f.ground().get(), g.ground().get()));
    }
    let measure = ProductMeasure::new(f.ground(), p)?;
    Ok(sqrt_sum_at_most_one(&measure.of_family(f), &measure.of_family(g)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrelationReport {
    pub holds: bool,
    #[serde(with = "rational_string")]
    pub intersection_measure: ExactRational,
    #[serde(with = "rational_string")]
    pub product_of_measures: ExactRational,
    pub down_is_downset: bool,
    pub up_is_upset: bool,
}

/// Compares `μ_p(down ∩ up)` with `μ_p(down) μ_p(up)`. Monotonicity of the
/// inputs is reported, not enforced.
pub fn correlation_check(down: &Family, up: &Family, p: &ExactRational) -> Result<CorrelationReport> {
    let measure = ProductMeasure::new(down.ground(), p)?;
    let both = down.intersection(up)?;
    let lhs = measure.of_family(&both);
    let rhs = measure.of_family(down) * measure.of_family(up);
    Ok(CorrelationReport {
        holds: lhs <= rhs,
        intersection_measure: lhs,
        product_of_measures: rhs,
        down_is_downset: is_downset(down),
        up_is_upset: is_upset(up),
    })
}

/// Partition of `2^[n]` by whether a set contains some member of `f` and/or
/// some member of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpernerPartition {
    /// Above a member of both.
    pub a: Family,
    /// Above a member of `f` only.
    pub b: Family,
    /// Above a member of `g` only.
    pub c: Family,
    /// Above neither.
    pub d: Family,
}

pub fn sperner_partition(f: &Family, g: &Family) -> Result<SpernerPartition> {
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch(f.ground().get(), g.ground().get()));
    }
    let n = f.ground();
    let (mut a, mut b, mut c, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for x in Family::power_set(n).iter() {
        let above_f = f.iter().any(|m| m.is_subset(x));
        let above_g = g.iter().any(|m| m.is_subset(x));
        match (above_f, above_g) {
            (true, true) => a.push(x),
            (true, false) => b.push(x),
            (false, true) => c.push(x),
            (false, false) => d.push(x),
        }
    }
    Ok(SpernerPartition {
        a: Family::new(n, a)?,
        b: Family::new(n, b)?,
        c: Family::new(n, c)?,
        d: Family::new(n, d)?,
    })
}

impl SpernerPartition {
    /// `μ_p(B) μ_p(C) ≤ μ_p(A) μ_p(D)`.
    pub fn product_inequality_holds(&self, measure: &ProductMeasure) -> bool {
        measure.of_family(&self.b) * measure.of_family(&self.c)
            <= measure.of_family(&self.a) * measure.of_family(&self.d)
    }
}

/// `min(|g(x, ȳ)|, |g(y, x̄)|)`, the quantity bounded by `2^{n−4}` for IU-families.
pub fn iu_pair_min(g: &Family, x: u32, y: u32) -> usize {
    pair_count(g, x, y).min(pair_count(g, y, x))
}
