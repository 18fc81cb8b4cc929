// Copyright 2026 The proxygrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact order statistics over multisets of rationals, and the selector
//! functions that choose which order statistic a mechanism reports.

use std::fmt;

use crate::{Error, Rational, Result};

/// A multiset of rationals, stored sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMultiset(Vec<Rational>);

impl RationalMultiset {
    pub fn new() -> Self {
        RationalMultiset(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn insert(&mut self, value: Rational) {
        let at = self.0.partition_point(|x| *x <= value);
        self.0.insert(at, value);
    }

    /// Removes one copy of `value`; returns whether one was present.
    pub fn remove_one(&mut self, value: Rational) -> bool {
        match self.0.binary_search(&value) {
            Ok(at) => {
                self.0.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    pub fn smallest(&self) -> Option<Rational> {
        self.0.first().copied()
    }

    pub fn largest(&self) -> Option<Rational> {
        self.0.last().copied()
    }

    /// Every element repeated `k` times.
    pub fn repeated(&self, k: usize) -> RationalMultiset {
        RationalMultiset(self.0.iter().flat_map(|x| std::iter::repeat(*x).take(k)).collect())
    }
}

impl FromIterator<Rational> for RationalMultiset {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        let mut v: Vec<Rational> = iter.into_iter().collect();
        v.sort();
        RationalMultiset(v)
    }
}

impl<'a> IntoIterator for &'a RationalMultiset {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// The `k`-th smallest element (1-indexed, counting multiplicity).
pub fn mu(k: usize, s: &RationalMultiset) -> Result<Rational> {
    if k == 0 || k > s.len() {
        return Err(Error::IndexOutOfRange { k, len: s.len() });
    }
    Ok(s.0[k - 1])
}

/// Chooses the order statistic `g(k)` for a pool of size `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SelectorFn {
    /// `g(k) = ceil(k/2)`, the smaller of the two medians.
    LowerMedian,
    /// `g(k) = floor(k/2) + 1`.
    UpperMedian,
    /// `g(k) = 1`.
    Min,
    /// `g(k) = k`.
    Max,
    /// Explicit values `g(1), g(2), ...`; undefined past the end.
    Table(Vec<usize>),
}

impl SelectorFn {
    /// Validated table selector.
    pub fn table(values: Vec<usize>) -> Result<SelectorFn> {
        if values.is_empty() {
            return Err(Error::InvalidSelector("empty table".into()));
        }
        for (i, &g) in values.iter().enumerate() {
            let k = i + 1;
            if g == 0 || g > k {
                return Err(Error::InvalidSelector(format!("g({k}) = {g} is outside 1..={k}")));
            }
        }
        Ok(SelectorFn::Table(values))
    }

    /// Largest pool size the selector is defined for; `None` if unbounded.
    pub fn domain(&self) -> Option<usize> {
        match self {
            SelectorFn::Table(t) => Some(t.len()),
            _ => None,
        }
    }

    pub fn apply(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Err(Error::IndexOutOfRange { k, len: 0 });
        }
        Ok(match self {
            SelectorFn::LowerMedian => k.div_ceil(2),
            SelectorFn::UpperMedian => k / 2 + 1,
            SelectorFn::Min => 1,
            SelectorFn::Max => k,
            SelectorFn::Table(t) => {
                *t.get(k - 1).ok_or(Error::SelectorDomainExceeded { k, bound: t.len() })?
            }
        })
    }

    /// `mu(g(|s|), s)`.
    pub fn select(&self, s: &RationalMultiset) -> Result<Rational> {
        mu(self.apply(s.len())?, s)
    }

    /// Whether two selectors agree on every size in `1..=bound` (within both
    /// domains) and have the same domain up to `bound`.
    pub fn agrees_with(&self, other: &SelectorFn, bound: usize) -> bool {
        (1..=bound).all(|k| match (self.apply(k), other.apply(k)) {
            (Ok(a), Ok(b)) => a == b,
            (Err(_), Err(_)) => true,
            _ => false,
        })
    }
}

impl fmt::Display for SelectorFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectorFn::LowerMedian => f.write_str("lower_median"),
            SelectorFn::UpperMedian => f.write_str("upper_median"),
            SelectorFn::Min => f.write_str("min"),
            SelectorFn::Max => f.write_str("max"),
            SelectorFn::Table(t) => write!(f, "table{t:?}"),
        }
    }
}

/// Outcome of checking a condition on `g` over a range of pool sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionCheck<W> {
    /// No violation for sizes up to `checked_up_to` (which is below the
    /// requested bound when a table selector runs out).
    Holds { checked_up_to: usize },
    Violated(W),
}

impl<W> ConditionCheck<W> {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionCheck::Holds { .. })
    }
}

/// `g(p+1) ∈ {g(p), g(p)+1}` for every `1 <= p < maxk`; on failure returns
/// the smallest violating `p`.
pub fn check_sc_condition(g: &SelectorFn, maxk: usize) -> ConditionCheck<usize> {
    let top = g.domain().map_or(maxk, |d| d.min(maxk));
    for p in 1..top {
        let (a, b) = (g.apply(p).unwrap(), g.apply(p + 1).unwrap());
        if b != a && b != a + 1 {
            return ConditionCheck::Violated(p);
        }
    }
    ConditionCheck::Holds { checked_up_to: top }
}

/// `g(k+k') ∈ {g(k)+g(k')-1, g(k)+g(k')}` for every `k, k' >= 1` with
/// `k + k' <= maxk`. Pairs are visited by increasing sum, then increasing
/// `k`; on failure returns the first violating `(k, k')`.
pub fn check_oc_condition(g: &SelectorFn, maxk: usize) -> ConditionCheck<(usize, usize)> {
    let top = g.domain().map_or(maxk, |d| d.min(maxk));
    for sum in 2..=top {
        let whole = g.apply(sum).unwrap();
        for k in 1..sum {
            let parts = g.apply(k).unwrap() + g.apply(sum - k).unwrap();
            if whole != parts && whole + 1 != parts {
                return ConditionCheck::Violated((k, sum - k));
            }
        }
    }
    ConditionCheck::Holds { checked_up_to: top }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn ms(values: &[i64]) -> RationalMultiset {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn order_statistics() {
        assert_eq!(mu(2, &ms(&[1, 3, 3, 5])).unwrap(), int(3));
        assert_eq!(mu(1, &ms(&[7])).unwrap(), int(7));
        assert_eq!(mu(3, &ms(&[5, 0, 2, 5, 0])).unwrap(), int(2));
        assert_eq!(mu(0, &ms(&[1])), Err(Error::IndexOutOfRange { k: 0, len: 1 }));
        assert_eq!(mu(2, &ms(&[1])), Err(Error::IndexOutOfRange { k: 2, len: 1 }));
    }

    #[test]
    fn builtin_selectors() {
        let lm: Vec<usize> = (1..=6).map(|k| SelectorFn::LowerMedian.apply(k).unwrap()).collect();
        assert_eq!(lm, [1, 1, 2, 2, 3, 3]);
        let um: Vec<usize> = (1..=6).map(|k| SelectorFn::UpperMedian.apply(k).unwrap()).collect();
        assert_eq!(um, [1, 2, 2, 3, 3, 4]);
        assert_eq!(SelectorFn::Max.apply(9).unwrap(), 9);
        assert_eq!(SelectorFn::Min.apply(9).unwrap(), 1);
    }

    #[test]
    fn tables() {
        assert!(SelectorFn::table(vec![1, 3]).is_err());
        assert!(SelectorFn::table(vec![0]).is_err());
        let t = SelectorFn::table(vec![1, 1, 2]).unwrap();
        assert_eq!(t.apply(4), Err(Error::SelectorDomainExceeded { k: 4, bound: 3 }));
        assert!(t.agrees_with(&SelectorFn::LowerMedian, 3));
        assert!(!t.agrees_with(&SelectorFn::LowerMedian, 4));
    }

    #[test]
    fn sc_condition() {
        for g in [SelectorFn::LowerMedian, SelectorFn::UpperMedian, SelectorFn::Min, SelectorFn::Max] {
            assert_eq!(check_sc_condition(&g, 50), ConditionCheck::Holds { checked_up_to: 50 });
        }
        let t = SelectorFn::table(vec![1, 1, 1, 4]).unwrap();
        assert_eq!(check_sc_condition(&t, 50), ConditionCheck::Violated(3));
    }

    #[test]
    fn oc_condition() {
        for g in [SelectorFn::LowerMedian, SelectorFn::UpperMedian, SelectorFn::Min, SelectorFn::Max] {
            assert!(check_oc_condition(&g, 50).holds());
        }
        let t = SelectorFn::table(vec![1, 1, 3]).unwrap();
        assert_eq!(check_oc_condition(&t, 50), ConditionCheck::Violated((1, 2)));
        let short = SelectorFn::table(vec![1, 1]).unwrap();
        assert_eq!(check_oc_condition(&short, 50), ConditionCheck::Holds { checked_up_to: 2 });
    }

    #[test]
    fn multiset_edits() {
        let mut s = ms(&[3, 1]);
        s.insert(int(2));
        assert_eq!(s.as_slice(), &[int(1), int(2), int(3)]);
        assert!(s.remove_one(int(2)));
        assert!(!s.remove_one(int(2)));
        assert_eq!(s.repeated(2).as_slice(), &[int(1), int(1), int(3), int(3)]);
    }
}
