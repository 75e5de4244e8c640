//! Ground sets, set masks and canonical families.
//!
//! Elements of the ground set `[n]` are 1-based; element `e` lives in bit
//! `e - 1` of a [`SetMask`]. Families keep their members sorted by
//! cardinality and then by the numeric value of the mask, with no
//! duplicates, so two families are equal exactly when their member lists
//! are.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground size. Every set fits in one `u32`.
pub const MAX_GROUND: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GroundSize(u32);

impl GroundSize {
    pub fn new(n: u32) -> Result<Self> {
        if (1..=MAX_GROUND).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::GroundSize(n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// The whole ground set `[n]`.
    pub fn full(self) -> SetMask {
        SetMask((1u32 << self.0) - 1)
    }

    pub fn check_element(self, e: u32) -> Result<()> {
        if e >= 1 && e <= self.0 {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: e, n: self.0 })
        }
    }

    pub fn admits(self, set: SetMask) -> bool {
        set.0 & !self.full().0 == 0
    }

    /// Number of subsets of `[n]`.
    pub fn subset_count(self) -> u64 {
        1u64 << self.0
    }
}

impl TryFrom<u32> for GroundSize {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

impl From<GroundSize> for u32 {
    fn from(n: GroundSize) -> u32 {
        n.0
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Characteristic vector of a subset of `[n]`.
///
/// The `Ord` impl is the canonical order: by cardinality, then by the
/// numeric value of the bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SetMask(u32);

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// `{e}` for a 1-based element `e` in `[1, 32]`.
    pub fn singleton(e: u32) -> Self {
        debug_assert!((1..=32).contains(&e));
        Self(1 << (e - 1))
    }

    /// The interval `[1, a]`; `prefix(0)` is the empty set.
    pub fn prefix(a: u32) -> Self {
        debug_assert!(a <= 32);
        if a == 0 {
            Self(0)
        } else {
            Self(u32::MAX >> (32 - a))
        }
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(Self::EMPTY, |acc, e| acc.with(e))
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: u32) -> bool {
        e >= 1 && e <= 32 && self.0 & (1 << (e - 1)) != 0
    }

    pub fn with(self, e: u32) -> Self {
        Self(self.0 | Self::singleton(e).0)
    }

    pub fn without(self, e: u32) -> Self {
        Self(self.0 & !Self::singleton(e).0)
    }

    pub fn is_subset(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in increasing order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    pub fn max_element(self) -> Option<u32> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros())
    }

    /// The `t`-th smallest element (1-based `t`), if the set has that many.
    pub fn nth_smallest(self, t: u32) -> Option<u32> {
        if t == 0 {
            return None;
        }
        self.elements().nth(t as usize - 1)
    }
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

impl Ord for SetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitAnd for SetMask {
    type Output = SetMask;
    fn bitand(self, rhs: Self) -> Self {
        Self(self.0 & rhs.0)
    }
}

impl BitOr for SetMask {
    type Output = SetMask;
    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

/// Set difference.
impl Sub for SetMask {
    type Output = SetMask;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 & !rhs.0)
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, e) in self.elements().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serializes as the sorted element list.
impl Serialize for SetMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elements())
    }
}

impl FromStr for SetMask {
    type Err = String;

    /// Parses `{a,b,c}` with strictly increasing 1-based elements.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|rest| rest.strip_suffix('}'))
            .ok_or_else(|| format!("expected a set literal like {{1,2}}, got `{}`", s.trim()))?;
        let mut set = SetMask::EMPTY;
        let mut last = 0u32;
        if inner.trim().is_empty() {
            return Ok(set);
        }
        for token in inner.split(',') {
            let e: u32 = token
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not a positive integer", token.trim()))?;
            if e == 0 || e > 32 {
                return Err(format!("element {e} out of range"));
            }
            if e <= last {
                return Err(format!("elements must be strictly increasing ({last} then {e})"));
            }
            last = e;
            set = set.with(e);
        }
        Ok(set)
    }
}

/// A deduplicated family of subsets of `[n]` in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct Family {
    n: GroundSize,
    members: Vec<SetMask>,
}

impl Family {
    pub fn empty(n: GroundSize) -> Self {
        Self { n, members: Vec::new() }
    }

    /// Builds a canonical family, silently dropping duplicates.
    pub fn new<I: IntoIterator<Item = SetMask>>(n: GroundSize, members: I) -> Result<Self> {
        let mut members: Vec<SetMask> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| !n.admits(**m)) {
            let element = 32 - bad.0.leading_zeros();
            return Err(Error::ElementOutOfRange { element, n: n.get() });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { n, members })
    }

    /// Members must already be valid for `n`, sorted and distinct.
    pub(crate) fn from_canonical(n: GroundSize, members: Vec<SetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|m| n.admits(*m)));
        Self { n, members }
    }

    /// Members must be valid for `n`; sorts and dedups.
    pub(crate) fn from_valid(n: GroundSize, mut members: Vec<SetMask>) -> Self {
        debug_assert!(members.iter().all(|m| n.admits(*m)));
        members.sort_unstable();
        members.dedup();
        Self { n, members }
    }

    /// All `2^n` subsets of `[n]`.
    pub fn power_set(n: GroundSize) -> Self {
        Self::from_valid(n, (0..n.subset_count() as u32).map(SetMask).collect())
    }

    /// `{F ⊆ [n] : |F| ≤ max_size}`.
    pub fn up_to_size(n: GroundSize, max_size: u32) -> Self {
        Self::from_valid(
            n,
            (0..n.subset_count() as u32)
                .map(SetMask)
                .filter(|m| m.len() <= max_size)
                .collect(),
        )
    }

    pub fn ground(&self) -> GroundSize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = SetMask> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, set: SetMask) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    pub fn filter<P: FnMut(SetMask) -> bool>(&self, mut keep: P) -> Family {
        Self::from_canonical(self.n, self.iter().filter(|m| keep(*m)).collect())
    }

    fn same_ground(&self, other: &Family) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::GroundMismatch(self.n.get(), other.n.get()))
        }
    }

    /// Members whose position in canonical order satisfies `keep`.
    pub fn filter_indexed<P: FnMut(usize) -> bool>(&self, mut keep: P) -> Family {
        let members = self
            .members
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, m)| *m)
            .collect();
        Self::from_canonical(self.n, members)
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.same_ground(other)?;
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        Ok(Self::from_valid(self.n, members))
    }

    pub fn intersection(&self, other: &Family) -> Result<Family> {
        self.same_ground(other)?;
        Ok(self.filter(|m| other.contains(m)))
    }

    pub fn difference(&self, other: &Family) -> Result<Family> {
        self.same_ground(other)?;
        Ok(self.filter(|m| !other.contains(m)))
    }

    pub fn is_subfamily(&self, other: &Family) -> bool {
        self.n == other.n && self.iter().all(|m| other.contains(m))
    }

    /// `hist[c]` is the number of members of cardinality `c`, for `c ∈ [0, n]`.
    pub fn size_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.n.get() as usize + 1];
        for m in &self.members {
            hist[m.len() as usize] += 1;
        }
        hist
    }

    /// Serializes to the line-oriented family file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for m in &self.members {
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, ", self.n)?;
        f.debug_set().entries(self.members.iter()).finish()?;
        f.write_str(")")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, m) in self.members.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// JSON shape of a family: `{"n": 3, "sets": [[1,2],[1,3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: u32,
    pub sets: Vec<Vec<u32>>,
}

impl From<Family> for FamilyJson {
    fn from(f: Family) -> Self {
        FamilyJson {
            n: f.n.get(),
            sets: f.members.iter().map(|m| m.elements().collect()).collect(),
        }
    }
}

impl FamilyJson {
    fn masks(&self) -> Result<(GroundSize, Vec<SetMask>)> {
        let n = GroundSize::new(self.n)?;
        let mut members = Vec::with_capacity(self.sets.len());
        for (idx, set) in self.sets.iter().enumerate() {
            let mut mask = SetMask::EMPTY;
            let mut last = 0;
            for &e in set {
                n.check_element(e)?;
                if e <= last {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("set {} is not strictly increasing", idx + 1),
                    });
                }
                last = e;
                mask = mask.with(e);
            }
            members.push(mask);
        }
        Ok((n, members))
    }
}

impl TryFrom<FamilyJson> for Family {
    type Error = Error;

    fn try_from(json: FamilyJson) -> Result<Family> {
        let (n, members) = json.masks()?;
        Ok(Family::from_valid(n, members))
    }
}

/// A parsed family together with the duplicate lines that were dropped.
#[derive(Debug, Clone)]
pub struct ParsedFamily {
    pub family: Family,
    pub duplicates: Vec<SetMask>,
}

/// Parses a family file (or its JSON alternative), canonicalizing the result.
pub fn parse_family(text: &str) -> Result<Family> {
    parse_family_detailed(text).map(|p| p.family)
}

pub fn parse_family_detailed(text: &str) -> Result<ParsedFamily> {
    let (n, members) = if text.trim_start().starts_with('{') {
        let json: FamilyJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        json.masks()?
    } else {
        parse_text_members(text)?
    };
    let mut sorted = members.clone();
    sorted.sort_unstable();
    let duplicates = sorted
        .windows(2)
        .filter(|w| w[0] == w[1])
        .map(|w| w[0])
        .collect();
    Ok(ParsedFamily {
        family: Family::from_valid(n, members),
        duplicates,
    })
}

fn parse_text_members(text: &str) -> Result<(GroundSize, Vec<SetMask>)> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n=<int>` header".into(),
    })?;
    let n = parse_header_value(header, "n", line_no)?;
    let n = GroundSize::new(n)?;

    let mut members = Vec::new();
    for (line_no, line) in lines {
        let set: SetMask = line.parse().map_err(|message| Error::Parse { line: line_no, message })?;
        if !n.admits(set) {
            let element = set.max_element().unwrap_or(0);
            return Err(Error::ElementOutOfRange { element, n: n.get() });
        }
        members.push(set);
    }
    Ok((n, members))
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// Reads `key=<int>` out of a header line that may hold several such fields.
pub(crate) fn parse_header_value(header: &str, key: &str, line: usize) -> Result<u32> {
    for field in header.split_whitespace() {
        if let Some((k, v)) = field.split_once('=') {
            if k.trim() == key {
                return v.trim().parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{key}` is not a positive integer: `{v}`"),
                });
            }
        }
    }
    Err(Error::Parse {
        line,
        message: format!("header is missing `{key}=<int>`"),
    })
}

/// Which sub-family [`restrict`] extracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// `F(i) = {F \ {i} : i ∈ F}`
    Contains(u32),
    /// `F(ī) = {F : i ∉ F}`
    Avoids(u32),
    /// `F(i, j̄) = {F \ {i} : F ∩ {i, j} = {i}}`
    Pair(u32, u32),
}

/// Restricts a family. The ground size never changes; the removed element
/// simply goes unused.
pub fn restrict(f: &Family, mode: Restriction) -> Result<Family> {
    let n = f.ground();
    match mode {
        Restriction::Contains(i) => {
            n.check_element(i)?;
            Ok(Family::from_valid(
                n,
                f.iter().filter(|m| m.contains(i)).map(|m| m.without(i)).collect(),
            ))
        }
        Restriction::Avoids(i) => {
            n.check_element(i)?;
            Ok(f.filter(|m| !m.contains(i)))
        }
        Restriction::Pair(i, j) => {
            n.check_element(i)?;
            n.check_element(j)?;
            if i == j {
                return Err(Error::InvalidPair { i, j, reason: "i and j must differ" });
            }
            Ok(Family::from_valid(
                n,
                f.iter()
                    .filter(|m| m.contains(i) && !m.contains(j))
                    .map(|m| m.without(i))
                    .collect(),
            ))
        }
    }
}

/// `{universe \ F : F ∈ f}`. Every member must lie inside `universe`.
pub fn relative_complement(f: &Family, universe: SetMask) -> Result<Family> {
    let n = f.ground();
    if !n.admits(universe) {
        let element = universe.max_element().unwrap_or(0);
        return Err(Error::ElementOutOfRange { element, n: n.get() });
    }
    if let Some(bad) = f.iter().find(|m| !m.is_subset(universe)) {
        return Err(Error::NotInUniverse(bad.to_string(), universe.to_string()));
    }
    Ok(Family::from_valid(n, f.iter().map(|m| universe - m).collect()))
}
