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

//! Phantom-proxy mechanisms.
//!
//! For each candidate the mechanism builds a voting pool from the real
//! grades and from proxy votes standing in for voters who did not grade the
//! candidate, then reports the `g(k)`-th smallest element of the pool of
//! size `k`.
//!
//! A voter whose whole ballot consists of blank and ineligible cells never
//! gets a proxy: there is nothing to learn from and the voter asked to be
//! left out.

use std::fmt;
use std::sync::Arc;

use crate::model::{ElectionShape, Profile, Vote};
use crate::order_stats::{RationalMultiset, SelectorFn};
use crate::{Error, Rational, Result};

/// Read access to one voter's ballot, handed to custom proxies.
#[derive(Clone, Copy)]
pub struct BallotView<'a> {
    profile: &'a Profile,
    voter: usize,
}

impl<'a> BallotView<'a> {
    pub fn new(profile: &'a Profile, voter: usize) -> Self {
        BallotView { profile, voter }
    }

    pub fn voter(&self) -> usize {
        self.voter
    }

    pub fn vote(&self, candidate: usize) -> Vote {
        self.profile.vote(self.voter, candidate)
    }

    pub fn votes(&self) -> impl Iterator<Item = Vote> + 'a {
        let (p, i) = (self.profile, self.voter);
        (0..p.n_candidates()).map(move |j| p.vote(i, j))
    }

    /// Positions of the grades on the ballot, in candidate order.
    pub fn grades(&self) -> impl Iterator<Item = Rational> + 'a {
        let p = self.profile;
        self.votes().filter_map(move |v| p.value(v))
    }

    pub fn profile(&self) -> &'a Profile {
        self.profile
    }
}

type ProxyClosure = dyn Fn(&BallotView<'_>, usize) -> Option<Rational> + Send + Sync;

/// User-supplied proxy: any total function of the voter's ballot (and the
/// candidate being proxied).
pub struct CustomProxy {
    name: String,
    f: Box<ProxyClosure>,
}

/// How a voter who did not grade a candidate is represented in its pool.
#[derive(Clone)]
pub enum ProxyFn {
    /// Never represented.
    None,
    /// The exact mean of the voter's grades; nothing if the voter graded
    /// no candidate.
    OwnAverage,
    /// A fixed value of the output interval.
    Constant(Rational),
    Custom(Arc<CustomProxy>),
}

impl ProxyFn {
    pub fn custom<F>(name: impl Into<String>, f: F) -> ProxyFn
    where
        F: Fn(&BallotView<'_>, usize) -> Option<Rational> + Send + Sync + 'static,
    {
        ProxyFn::Custom(Arc::new(CustomProxy { name: name.into(), f: Box::new(f) }))
    }

    pub fn name(&self) -> String {
        match self {
            ProxyFn::None => "none".into(),
            ProxyFn::OwnAverage => "own_average".into(),
            ProxyFn::Constant(c) => format!("constant({c})"),
            ProxyFn::Custom(c) => format!("custom({})", c.name),
        }
    }

    fn evaluate(&self, ballot: &BallotView<'_>, candidate: usize) -> Option<Rational> {
        match self {
            ProxyFn::None => None,
            ProxyFn::OwnAverage => {
                let (sum, count) = ballot.grades().fold((Rational::from_integer(0), 0i64), |(s, c), g| (s + g, c + 1));
                (count > 0).then(|| sum / count)
            }
            ProxyFn::Constant(c) => Some(*c),
            ProxyFn::Custom(c) => (c.f)(ballot, candidate),
        }
    }
}

impl PartialEq for ProxyFn {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ProxyFn::None, ProxyFn::None) | (ProxyFn::OwnAverage, ProxyFn::OwnAverage) => true,
            (ProxyFn::Constant(a), ProxyFn::Constant(b)) => a == b,
            (ProxyFn::Custom(a), ProxyFn::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Debug for ProxyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Treatment of abstentions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbsenteePolicy {
    /// An abstaining voter gets no proxy for that candidate.
    RemoveFromPool,
    /// Abstentions are proxied like blank and ineligible cells.
    ProxyAnyway,
}

/// Where a pool element comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Grade,
    Proxy,
    /// Reinforcement value added for an abstaining voter when ranking.
    Absentee,
}

/// One element of a voting pool and its owner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PoolEntry {
    pub voter: usize,
    /// Replica number once pools are duplicated; 0 otherwise.
    pub copy: usize,
    pub value: Rational,
    pub source: Source,
}

/// The multiset a candidate's grade is selected from, with provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VotingPool {
    candidate: usize,
    entries: Vec<PoolEntry>,
}

impl VotingPool {
    pub fn new(candidate: usize, mut entries: Vec<PoolEntry>) -> Self {
        entries.sort_by_key(|e| (e.voter, e.copy, e.source));
        VotingPool { candidate, entries }
    }

    /// Pool whose `k`-th value is owned by voter `k`, all real grades.
    pub fn from_values(candidate: usize, values: &[Rational]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(voter, &value)| PoolEntry { voter, copy: 0, value, source: Source::Grade })
            .collect();
        VotingPool::new(candidate, entries)
    }

    pub fn candidate(&self) -> usize {
        self.candidate
    }

    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> RationalMultiset {
        self.entries.iter().map(|e| e.value).collect()
    }

    /// The element a voter contributes (first copy), if any.
    pub fn contribution(&self, voter: usize) -> Option<&PoolEntry> {
        self.entries.iter().find(|e| e.voter == voter)
    }

    pub fn push(&mut self, entry: PoolEntry) {
        let at = self.entries.partition_point(|e| (e.voter, e.copy, e.source) <= (entry.voter, entry.copy, entry.source));
        self.entries.insert(at, entry);
    }

    /// Every entry replicated `k` times, replicas numbered `0..k`.
    pub fn repeated(&self, k: usize) -> VotingPool {
        let entries = self
            .entries
            .iter()
            .flat_map(|e| (0..k).map(move |c| PoolEntry { copy: e.copy * k + c, ..*e }))
            .collect();
        VotingPool::new(self.candidate, entries)
    }
}

/// Grade of one candidate and the pool it was selected from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateGrade {
    pub candidate: usize,
    /// `None` when the pool is empty (the candidate is ungraded).
    pub grade: Option<Rational>,
    pub pool: VotingPool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeResult {
    pub candidates: Vec<CandidateGrade>,
}

impl GradeResult {
    pub fn grades(&self) -> Vec<Option<Rational>> {
        self.candidates.iter().map(|c| c.grade).collect()
    }
}

/// A phantom-proxy mechanism for a fixed set of voters and candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism {
    voters: Vec<String>,
    candidates: Vec<String>,
    /// Candidate-major, like profile cells.
    proxies: Vec<ProxyFn>,
    selectors: Vec<SelectorFn>,
    absentee_policy: AbsenteePolicy,
}

impl Mechanism {
    /// Same proxy for every cell and same selector for every candidate.
    pub fn uniform(shape: &ElectionShape, proxy: ProxyFn, selector: SelectorFn, policy: AbsenteePolicy) -> Self {
        Mechanism {
            voters: shape.voters().to_vec(),
            candidates: shape.candidates().to_vec(),
            proxies: vec![proxy; shape.n_voters() * shape.n_candidates()],
            selectors: vec![selector; shape.n_candidates()],
            absentee_policy: policy,
        }
    }

    pub fn with_proxy(mut self, voter: usize, candidate: usize, proxy: ProxyFn) -> Self {
        self.set_proxy(voter, candidate, proxy);
        self
    }

    pub fn with_selector(mut self, candidate: usize, selector: SelectorFn) -> Self {
        self.set_selector(candidate, selector);
        self
    }

    pub fn set_proxy(&mut self, voter: usize, candidate: usize, proxy: ProxyFn) {
        let n = self.voters.len();
        self.proxies[candidate * n + voter] = proxy;
    }

    pub fn set_selector(&mut self, candidate: usize, selector: SelectorFn) {
        self.selectors[candidate] = selector;
    }

    pub fn set_absentee_policy(&mut self, policy: AbsenteePolicy) {
        self.absentee_policy = policy;
    }

    pub fn voters(&self) -> &[String] {
        &self.voters
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn n_voters(&self) -> usize {
        self.voters.len()
    }

    pub fn n_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn proxy(&self, voter: usize, candidate: usize) -> &ProxyFn {
        &self.proxies[candidate * self.voters.len() + voter]
    }

    pub fn proxies(&self) -> &[ProxyFn] {
        &self.proxies
    }

    pub fn selector(&self, candidate: usize) -> &SelectorFn {
        &self.selectors[candidate]
    }

    pub fn selectors(&self) -> &[SelectorFn] {
        &self.selectors
    }

    /// Short summary such as `proxy own_average, selector min, abstentions removed`;
    /// `mixed` marks per-cell or per-candidate variation.
    pub fn describe(&self) -> String {
        let proxy = match self.proxies.split_first() {
            Some((first, rest)) if rest.iter().all(|p| p == first) => first.name(),
            Some(_) => "mixed".into(),
            None => "none".into(),
        };
        let selector = match self.selectors.split_first() {
            Some((first, rest)) if rest.iter().all(|g| g == first) => first.to_string(),
            Some(_) => self.selectors.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("/"),
            None => "none".into(),
        };
        let policy = match self.absentee_policy {
            AbsenteePolicy::RemoveFromPool => "abstentions removed",
            AbsenteePolicy::ProxyAnyway => "abstentions proxied",
        };
        format!("proxy {proxy}, selector {selector}, {policy}")
    }

    pub fn absentee_policy(&self) -> AbsenteePolicy {
        self.absentee_policy
    }

    /// The common selector, if all candidates use the same one for pool
    /// sizes up to `bound`.
    pub fn common_selector(&self, bound: usize) -> Option<&SelectorFn> {
        let first = self.selectors.first()?;
        self.selectors.iter().all(|g| g.agrees_with(first, bound)).then_some(first)
    }

    fn check_shape(&self, p: &Profile) -> Result<()> {
        let shape = p.shape();
        if shape.voters() != self.voters.as_slice() || shape.candidates() != self.candidates.as_slice() {
            return Err(Error::ShapeMismatch("mechanism was built for another electorate".into()));
        }
        Ok(())
    }

    /// The proxy vote of `voter` for `candidate`, or `None` when the voter
    /// is not represented by a proxy there.
    pub fn effective_proxy(&self, p: &Profile, voter: usize, candidate: usize) -> Result<Option<Rational>> {
        match p.vote(voter, candidate) {
            Vote::Grade(_) => return Ok(None),
            Vote::Abstain if self.absentee_policy == AbsenteePolicy::RemoveFromPool => return Ok(None),
            _ => {}
        }
        let silent = (0..p.n_candidates()).all(|j| matches!(p.vote(voter, j), Vote::Blank | Vote::Ineligible));
        if silent {
            return Ok(None);
        }
        let value = self.proxy(voter, candidate).evaluate(&BallotView::new(p, voter), candidate);
        match value {
            Some(v) if !p.scale().contains(v) => Err(Error::ProxyOutOfRange {
                voter: self.voters[voter].clone(),
                candidate: self.candidates[candidate].clone(),
                value: v,
            }),
            other => Ok(other),
        }
    }

    /// All proxy votes for a candidate.
    pub fn proxy_votes(&self, p: &Profile, candidate: usize) -> Result<RationalMultiset> {
        self.check_shape(p)?;
        let mut out = Vec::new();
        for i in 0..p.n_voters() {
            if let Some(v) = self.effective_proxy(p, i, candidate)? {
                out.push(v);
            }
        }
        Ok(out.into_iter().collect())
    }

    pub fn assemble_pool(&self, p: &Profile, candidate: usize) -> Result<VotingPool> {
        self.check_shape(p)?;
        let mut entries = Vec::new();
        for i in 0..p.n_voters() {
            let entry = match p.value(p.vote(i, candidate)) {
                Some(value) => Some((value, Source::Grade)),
                None => self.effective_proxy(p, i, candidate)?.map(|v| (v, Source::Proxy)),
            };
            if let Some((value, source)) = entry {
                entries.push(PoolEntry { voter: i, copy: 0, value, source });
            }
        }
        Ok(VotingPool::new(candidate, entries))
    }

    pub fn grade(&self, p: &Profile) -> Result<GradeResult> {
        let candidates = (0..p.n_candidates())
            .map(|j| {
                let pool = self.assemble_pool(p, j)?;
                let grade = self.select(j, &pool.values())?;
                Ok(CandidateGrade { candidate: j, grade, pool })
            })
            .collect::<Result<_>>()?;
        Ok(GradeResult { candidates })
    }

    /// Grades only, skipping provenance.
    pub fn grades(&self, p: &Profile) -> Result<Vec<Option<Rational>>> {
        self.pools(p)?.iter().enumerate().map(|(j, pool)| self.select(j, pool)).collect()
    }

    /// Pool values of every candidate.
    pub fn pools(&self, p: &Profile) -> Result<Vec<RationalMultiset>> {
        (0..p.n_candidates()).map(|j| Ok(self.assemble_pool(p, j)?.values())).collect()
    }

    fn select(&self, candidate: usize, pool: &RationalMultiset) -> Result<Option<Rational>> {
        if pool.is_empty() {
            return Ok(None);
        }
        self.selectors[candidate].select(pool).map(Some)
    }
}

/// Pool of one candidate; see [`Mechanism::assemble_pool`].
pub fn assemble_pool(m: &Mechanism, p: &Profile, candidate: usize) -> Result<VotingPool> {
    m.assemble_pool(p, candidate)
}

/// Grades of every candidate; see [`Mechanism::grade`].
pub fn grade(m: &Mechanism, p: &Profile) -> Result<GradeResult> {
    m.grade(p)
}

/// The majority grade: no proxies, lower median, abstentions ignored.
pub fn majority_grade_mechanism(shape: &ElectionShape) -> Mechanism {
    Mechanism::uniform(shape, ProxyFn::None, SelectorFn::LowerMedian, AbsenteePolicy::RemoveFromPool)
}
