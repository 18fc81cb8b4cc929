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

//! Phantom representations of strategy-proof grading rules.
//!
//! Every strategy-proof rule can be written as
//!
//! ```text
//! grade(J) = max over S ⊆ T of min({v_i(J) : i ∈ S} ∪ {ω_S})
//! ```
//!
//! where `T` is the set of voters who graded `J` and the phantom values
//! `ω_S` depend only on the residual profile in which the graders have been
//! blanked out. This module evaluates that formula, derives the phantoms of
//! a phantom-proxy mechanism, normalizes phantoms into the input range, and
//! evaluates the median form used by anonymous rules.
//!
//! A phantom may be `None`, meaning "ungraded"; that only happens when
//! nobody graded the candidate.

use crate::model::Profile;
use crate::order_stats::{mu, RationalMultiset};
use crate::proxy::Mechanism;
use crate::{Error, Rational, Result};

/// Largest grader set the subset enumeration accepts.
pub const MAX_GRADERS: usize = 12;

/// Phantom values `ω_S` for every subset `S` of a grader set `T`, at one
/// residual profile. `values[mask]` is the value for the subset whose
/// members are `graders[b]` for each bit `b` set in `mask`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhantomTable {
    pub candidate: usize,
    pub graders: Vec<usize>,
    pub values: Vec<Option<Rational>>,
}

impl PhantomTable {
    pub fn full_mask(&self) -> usize {
        (1 << self.graders.len()) - 1
    }

    pub fn value(&self, mask: usize) -> Option<Rational> {
        self.values[mask]
    }

    /// `S ⊆ S' ⇒ ω_S <= ω_S'`, checked on single-element extensions.
    pub fn is_monotone(&self) -> bool {
        (0..self.values.len()).all(|mask| {
            (0..self.graders.len()).filter(|b| mask & (1 << b) == 0).all(|b| {
                match (self.values[mask], self.values[mask | (1 << b)]) {
                    (Some(a), Some(c)) => a <= c,
                    (None, None) => true,
                    _ => false,
                }
            })
        })
    }

    /// Moves every phantom into `[lo, hi]` without changing the max-min value:
    /// values below `lo` become `ω_T` if that is itself below `lo`, else `lo`;
    /// values above `hi` become `ω_∅` if that is itself above `hi`, else `hi`.
    pub fn clamped(&self, lo: Rational, hi: Rational) -> PhantomTable {
        let mut values = self.values.clone();
        let top = self.values[self.full_mask()];
        let bottom = self.values[0];
        for v in values.iter_mut().flatten() {
            if *v < lo {
                *v = match top {
                    Some(t) if t < lo => t,
                    _ => lo,
                };
            }
        }
        for v in values.iter_mut().flatten() {
            if *v > hi {
                *v = match bottom {
                    Some(b) if b > hi => b,
                    _ => hi,
                };
            }
        }
        PhantomTable { values, ..self.clone() }
    }

    /// `ω_∅ <= lo` and `ω_T >= hi`: the phantoms never override a unanimous
    /// grader set.
    pub fn respects_unanimity(&self, lo: Rational, hi: Rational) -> bool {
        matches!(self.values[0], Some(b) if b <= lo) && matches!(self.values[self.full_mask()], Some(t) if t >= hi)
    }
}

/// A family of phantom values for one candidate.
pub trait PhantomMapping: Sync {
    fn candidate(&self) -> usize;

    /// Phantoms for every subset of `graders` at the residual profile.
    fn table(&self, graders: &[usize], residual: &Profile) -> Result<PhantomTable>;
}

/// Phantoms of a phantom-proxy mechanism.
///
/// With `F` the proxy votes for the candidate and `p = g(|T| + |F|)`, the
/// subset `S` gets `k = |S| - |T| + p` and `ω_S` is `lo` if `k <= 0`, `hi`
/// if `k > |F|`, and the `k`-th smallest proxy vote otherwise.
pub struct ProxyPhantoms<'a> {
    mechanism: &'a Mechanism,
    candidate: usize,
}

impl<'a> ProxyPhantoms<'a> {
    pub fn new(mechanism: &'a Mechanism, candidate: usize) -> Self {
        ProxyPhantoms { mechanism, candidate }
    }
}

impl PhantomMapping for ProxyPhantoms<'_> {
    fn candidate(&self) -> usize {
        self.candidate
    }

    fn table(&self, graders: &[usize], residual: &Profile) -> Result<PhantomTable> {
        phantoms_from_proxy(self.mechanism, self.candidate, graders, residual)
    }
}

/// Phantom table of a phantom-proxy mechanism for grader set `graders` at
/// the residual profile.
pub fn phantoms_from_proxy(
    m: &Mechanism,
    candidate: usize,
    graders: &[usize],
    residual: &Profile,
) -> Result<PhantomTable> {
    check_grader_count(graders.len())?;
    let proxies = m.proxy_votes(residual, candidate)?;
    let size = graders.len() + proxies.len();
    let count = 1usize << graders.len();
    if size == 0 {
        return Ok(PhantomTable { candidate, graders: graders.to_vec(), values: vec![None; count] });
    }
    let p = m.selector(candidate).apply(size)? as i64;
    let (lo, hi) = (residual.scale().lo(), residual.scale().hi());
    let t = graders.len() as i64;
    let values = (0..count)
        .map(|mask| {
            let k = mask.count_ones() as i64 - t + p;
            Ok(Some(if k <= 0 {
                lo
            } else if k as usize > proxies.len() {
                hi
            } else {
                mu(k as usize, &proxies)?
            }))
        })
        .collect::<Result<_>>()?;
    Ok(PhantomTable { candidate, graders: graders.to_vec(), values })
}

type PhantomFn<'a> = dyn Fn(usize, &[usize], &Profile) -> Option<Rational> + Send + Sync + 'a;

/// Phantoms given by a function of `(subset mask, grader set, residual)`.
pub struct FnPhantoms<'a> {
    candidate: usize,
    f: Box<PhantomFn<'a>>,
}

impl<'a> FnPhantoms<'a> {
    pub fn new<F>(candidate: usize, f: F) -> Self
    where
        F: Fn(usize, &[usize], &Profile) -> Option<Rational> + Send + Sync + 'a,
    {
        FnPhantoms { candidate, f: Box::new(f) }
    }
}

impl PhantomMapping for FnPhantoms<'_> {
    fn candidate(&self) -> usize {
        self.candidate
    }

    fn table(&self, graders: &[usize], residual: &Profile) -> Result<PhantomTable> {
        check_grader_count(graders.len())?;
        let values = (0..1usize << graders.len()).map(|mask| (self.f)(mask, graders, residual)).collect();
        Ok(PhantomTable { candidate: self.candidate, graders: graders.to_vec(), values })
    }
}

/// A mapping normalized into the input range; see [`PhantomTable::clamped`].
pub struct Clamped<P> {
    inner: P,
}

impl<P: PhantomMapping> PhantomMapping for Clamped<P> {
    fn candidate(&self) -> usize {
        self.inner.candidate()
    }

    fn table(&self, graders: &[usize], residual: &Profile) -> Result<PhantomTable> {
        let scale = residual.scale();
        Ok(self.inner.table(graders, residual)?.clamped(scale.lo(), scale.hi()))
    }
}

pub fn clamp_phantoms<P: PhantomMapping>(pm: P) -> Clamped<P> {
    Clamped { inner: pm }
}

fn check_grader_count(count: usize) -> Result<()> {
    if count > MAX_GRADERS {
        return Err(Error::TooManyGraders { count, limit: MAX_GRADERS });
    }
    Ok(())
}

/// Residual profile and phantom table for the candidate's graders in `p`.
pub fn phantom_table_at<P: PhantomMapping + ?Sized>(pm: &P, p: &Profile) -> Result<PhantomTable> {
    let graders = p.graders(pm.candidate());
    check_grader_count(graders.len())?;
    pm.table(&graders, &p.without_voters(&graders))
}

/// The max-min value of the mapping at `p`.
pub fn eval_maxmin<P: PhantomMapping + ?Sized>(pm: &P, p: &Profile) -> Result<Option<Rational>> {
    let table = phantom_table_at(pm, p)?;
    Ok(maxmin_of_table(&table, p))
}

fn maxmin_of_table(table: &PhantomTable, p: &Profile) -> Option<Rational> {
    let grades: Vec<Rational> =
        table.graders.iter().map(|&i| p.value(p.vote(i, table.candidate)).expect("grader")).collect();
    let mut best: Option<Rational> = None;
    for (mask, phantom) in table.values.iter().enumerate() {
        let members = (0..grades.len()).filter(|b| mask & (1 << b) != 0).map(|b| grades[b]);
        let low = members.chain(*phantom).min();
        best = match (best, low) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
    best
}

/// Phantoms of an anonymous rule: for `d` graders, values `ω_0 <= ... <= ω_d`.
pub trait SaPhantomFamily: Sync {
    fn candidate(&self) -> usize;

    /// The `d + 1` phantoms for `d` graders at the residual profile.
    fn phantoms(&self, d: usize, residual: &Profile) -> Result<Vec<Option<Rational>>>;
}

/// Median form of the majority grade: phantom `k` of `d` sits at the top of
/// the scale when `k > d/2`, at the bottom otherwise; with no graders the
/// single phantom is "ungraded".
pub struct MajorityGradeFamily {
    candidate: usize,
}

impl MajorityGradeFamily {
    pub fn new(candidate: usize) -> Self {
        MajorityGradeFamily { candidate }
    }
}

impl SaPhantomFamily for MajorityGradeFamily {
    fn candidate(&self) -> usize {
        self.candidate
    }

    fn phantoms(&self, d: usize, residual: &Profile) -> Result<Vec<Option<Rational>>> {
        if d == 0 {
            return Ok(vec![None]);
        }
        let (lo, hi) = (residual.scale().lo(), residual.scale().hi());
        Ok((0..=d).map(|k| Some(if 2 * k > d { hi } else { lo })).collect())
    }
}

/// Whether consecutive phantoms are non-decreasing.
pub fn is_monotone_family(phantoms: &[Option<Rational>]) -> bool {
    phantoms.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => a <= b,
        (None, None) => true,
        _ => false,
    })
}

/// Lower median of the `d` grades and the `d + 1` phantoms.
pub fn eval_sa_median<F: SaPhantomFamily + ?Sized>(fam: &F, p: &Profile) -> Result<Option<Rational>> {
    let j = fam.candidate();
    let graders = p.graders(j);
    let d = graders.len();
    let phantoms = fam.phantoms(d, &p.without_voters(&graders))?;
    if phantoms.len() != d + 1 {
        return Err(Error::ShapeMismatch(format!("{} phantoms for {d} graders", phantoms.len())));
    }
    if phantoms.iter().any(Option::is_none) {
        if d == 0 {
            return Ok(None);
        }
        return Err(Error::UndefinedPhantom);
    }
    let values: RationalMultiset = graders
        .iter()
        .map(|&i| p.value(p.vote(i, j)).expect("grader"))
        .chain(phantoms.into_iter().flatten())
        .collect();
    mu(values.len().div_ceil(2), &values).map(Some)
}
