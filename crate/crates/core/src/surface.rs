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

//! Property verdicts read off a mechanism's structure.
//!
//! Each verdict comes from the proxies, selectors and absentee policy
//! alone. When the structure rules a property out, a counterexample
//! profile is built for the given electorate and verified by evaluation
//! before `Fails` is reported. Custom proxies and mixed structures fall
//! back to a search over a small family of probe profiles; when that finds
//! nothing, the verdict is [`SurfaceVerdict::NotDecidableSyntactically`].

use std::fmt;
use std::sync::Arc;

use crate::axioms::{check, evaluate_instance, Axiom, CheckOptions, Instance, InstanceSpace, Witness};
use crate::axioms::standard_alphabet;
use crate::model::{ElectionShape, Profile, Vote};
use crate::order_stats::{check_oc_condition, check_sc_condition, ConditionCheck, SelectorFn};
use crate::proxy::{AbsenteePolicy, Mechanism, ProxyFn};
use crate::{Error, Result};

/// Properties with a structural verdict.
pub const SURFACE_AXIOMS: [Axiom; 13] = [
    Axiom::U,
    Axiom::Sc,
    Axiom::P,
    Axiom::Fp,
    Axiom::Oc,
    Axiom::F,
    Axiom::N,
    Axiom::Sn,
    Axiom::A,
    Axiom::Sa,
    Axiom::Jd,
    Axiom::Bv,
    Axiom::Si,
];

#[derive(Debug, Clone)]
pub enum SurfaceVerdict {
    Holds { reason: String },
    /// The witness is absent only when the violation needs more voters
    /// than the electorate has.
    Fails { reason: String, witness: Option<Box<Witness>> },
    NotDecidableSyntactically { reason: String },
}

impl SurfaceVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SurfaceVerdict::Holds { .. } => "holds",
            SurfaceVerdict::Fails { .. } => "fails",
            SurfaceVerdict::NotDecidableSyntactically { .. } => "not_decidable",
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            SurfaceVerdict::Holds { reason }
            | SurfaceVerdict::Fails { reason, .. }
            | SurfaceVerdict::NotDecidableSyntactically { reason } => reason,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SurfaceVerdict::Fails { witness, .. } => witness.as_deref(),
            _ => None,
        }
    }
}

impl fmt::Display for SurfaceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label(), self.reason())
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceReport {
    pub entries: Vec<(Axiom, SurfaceVerdict)>,
}

impl SurfaceReport {
    pub fn get(&self, axiom: Axiom) -> Option<&SurfaceVerdict> {
        self.entries.iter().find(|(a, _)| *a == axiom).map(|(_, v)| v)
    }
}

/// Structural verdicts for `m` on electorate `shape`, with selector
/// conditions checked for pool sizes up to `maxk` (and at least the number
/// of voters).
pub fn validate_axiom_surface(m: &Mechanism, shape: &Arc<ElectionShape>, maxk: usize) -> Result<SurfaceReport> {
    if m.voters() != shape.voters() || m.candidates() != shape.candidates() {
        return Err(Error::ShapeMismatch("mechanism was built for another electorate".into()));
    }
    let ctx = Ctx { m, shape, bound: maxk.max(shape.n_voters()) };
    let entries = SURFACE_AXIOMS.iter().map(|&a| Ok((a, ctx.verdict(a)?))).collect::<Result<_>>()?;
    Ok(SurfaceReport { entries })
}

struct Ctx<'a> {
    m: &'a Mechanism,
    shape: &'a Arc<ElectionShape>,
    bound: usize,
}

enum Firing {
    Never,
    Always,
    Unknown,
}

fn holds(reason: impl Into<String>) -> SurfaceVerdict {
    SurfaceVerdict::Holds { reason: reason.into() }
}

fn undecided(reason: impl Into<String>) -> SurfaceVerdict {
    SurfaceVerdict::NotDecidableSyntactically { reason: reason.into() }
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.shape.n_voters()
    }

    fn c(&self) -> usize {
        self.shape.n_candidates()
    }

    fn hi(&self) -> usize {
        self.shape.scale().len() - 1
    }

    fn silent(&self) -> Vec<Vote> {
        vec![Vote::Blank; self.n() * self.c()]
    }

    fn set(&self, cells: &mut [Vote], voter: usize, candidate: usize, v: Vote) {
        cells[candidate * self.n() + voter] = v;
    }

    fn profile(&self, cells: Vec<Vote>) -> Profile {
        Profile::from_raw(self.shape.clone(), cells)
    }

    fn proxies(&self) -> impl Iterator<Item = &ProxyFn> {
        self.m.proxies().iter()
    }

    fn has_custom(&self) -> bool {
        self.proxies().any(|p| matches!(p, ProxyFn::Custom(_)))
    }

    /// Whether `voter`'s proxy for `candidate` can ever enter a pool.
    fn firing(&self, voter: usize, candidate: usize) -> Firing {
        let reachable = self.c() >= 2 || self.m.absentee_policy() == AbsenteePolicy::ProxyAnyway;
        match self.m.proxy(voter, candidate) {
            ProxyFn::None => Firing::Never,
            ProxyFn::OwnAverage if self.c() >= 2 => Firing::Always,
            ProxyFn::OwnAverage => Firing::Never,
            ProxyFn::Constant(_) if reachable => Firing::Always,
            ProxyFn::Custom(_) if reachable => Firing::Unknown,
            _ => Firing::Never,
        }
    }

    /// A verified witness, or `None` if evaluation does not confirm it.
    fn confirm(&self, cells: Vec<Vote>, instance: Instance) -> Result<Option<Box<Witness>>> {
        Ok(evaluate_instance(self.m, &self.profile(cells), &instance)?.map(Box::new))
    }

    fn verdict(&self, axiom: Axiom) -> Result<SurfaceVerdict> {
        match axiom {
            Axiom::U => self.unanimity(),
            Axiom::Sc | Axiom::P => self.consent(axiom),
            Axiom::Fp => self.full_participation(),
            Axiom::Oc => self.outer_consistency(),
            Axiom::F | Axiom::N | Axiom::Sn => self.neutrality(axiom),
            Axiom::A | Axiom::Sa => self.anonymity(axiom),
            Axiom::Jd => {
                if self.c() == 1 || self.proxies().all(|p| *p == ProxyFn::None) {
                    Ok(holds("no proxy looks beyond the candidate's own column"))
                } else {
                    self.probe(axiom, "proxies read other candidates' cells")
                }
            }
            Axiom::Bv => {
                if self.has_custom() {
                    self.probe(axiom, "custom proxies may tell blank from ineligible")
                } else {
                    Ok(holds("built-in proxies treat blank and ineligible cells alike"))
                }
            }
            Axiom::Si => {
                let quiet = (0..self.n()).all(|i| (0..self.c()).all(|j| *self.m.proxy(i, j) == ProxyFn::None));
                if self.m.absentee_policy() == AbsenteePolicy::RemoveFromPool {
                    Ok(holds("abstentions are removed from the pool"))
                } else if quiet {
                    Ok(holds("no voter is represented by a proxy"))
                } else {
                    self.probe(axiom, "abstainers may be represented by proxies")
                }
            }
            _ => Ok(undecided("no structural rule")),
        }
    }

    fn unanimity(&self) -> Result<SurfaceVerdict> {
        let never = (0..self.n()).all(|i| (0..self.c()).all(|j| matches!(self.firing(i, j), Firing::Never)));
        if never {
            return Ok(holds("no proxy vote ever enters a pool"));
        }
        self.probe(Axiom::U, "proxy votes can enter pools")
    }

    /// Selector condition for pool sizes up to the bound, or the reason it
    /// cannot be assessed.
    fn selector_sc(&self, g: &SelectorFn) -> std::result::Result<Option<usize>, String> {
        match check_sc_condition(g, self.bound) {
            ConditionCheck::Violated(p) => Ok(Some(p)),
            ConditionCheck::Holds { checked_up_to } if checked_up_to >= self.bound => Ok(None),
            ConditionCheck::Holds { checked_up_to } => {
                Err(format!("selector {g} is undefined past pool size {checked_up_to}"))
            }
        }
    }

    fn consent(&self, axiom: Axiom) -> Result<SurfaceVerdict> {
        let mut pending = Vec::new();
        for j in 0..self.c() {
            let g = self.m.selector(j);
            let p = match self.selector_sc(g) {
                Ok(None) => continue,
                Ok(Some(p)) => p,
                Err(reason) => {
                    pending.push(reason);
                    continue;
                }
            };
            let quiet: Vec<usize> = (0..self.n())
                .filter(|&i| {
                    self.m.absentee_policy() == AbsenteePolicy::RemoveFromPool
                        || matches!(self.m.proxy(i, j), ProxyFn::None | ProxyFn::OwnAverage)
                })
                .collect();
            let Some(&abstainer) = quiet.first() else {
                if (0..self.n()).any(|i| matches!(self.m.proxy(i, j), ProxyFn::Custom(_))) {
                    pending.push(format!("custom proxies decide whether abstainers on {} are represented", self.cand(j)));
                }
                continue;
            };
            let reason = format!("selector {g} jumps between pool sizes {p} and {}", p + 1);
            if p + 1 > self.n() {
                return Ok(SurfaceVerdict::Fails { reason, witness: None });
            }
            let (cells, alpha) = self.consent_base(j, p, g, abstainer);
            let witness = if axiom == Axiom::Sc {
                self.confirm(cells, Instance::Sc { voter: abstainer, candidate: j, label: alpha })?
            } else {
                let mut graded = cells;
                self.set(&mut graded, abstainer, j, Vote::Grade(alpha));
                self.confirm(graded, Instance::P { voter: abstainer, candidate: j })?
            };
            return Ok(match witness {
                Some(w) => SurfaceVerdict::Fails { reason, witness: Some(w) },
                None => undecided(format!("{reason}, but the constructed profile does not violate {axiom}")),
            });
        }
        Ok(match pending.is_empty() {
            true => holds("selectors satisfy the consent condition or abstainers are always represented"),
            false => undecided(pending.join("; ")),
        })
    }

    /// `p` graders of `candidate` arranged so that the selected grade is
    /// `alpha` but one more copy of `alpha` moves the selection; the
    /// abstainer is left unrepresented.
    fn consent_base(&self, candidate: usize, p: usize, g: &SelectorFn, abstainer: usize) -> (Vec<Vote>, usize) {
        let (gp, gq) = (g.apply(p).unwrap(), g.apply(p + 1).unwrap());
        let (low_count, alpha) = if gq > gp + 1 { (gp, 0) } else { (gp - 1, self.hi()) };
        let mut cells = self.silent();
        let graders = (0..self.n()).filter(|&i| i != abstainer).take(p);
        for (rank, i) in graders.enumerate() {
            let label = if rank < low_count { 0 } else { self.hi() };
            self.set(&mut cells, i, candidate, Vote::Grade(label));
        }
        self.set(&mut cells, abstainer, candidate, Vote::Abstain);
        (cells, alpha)
    }

    fn full_participation(&self) -> Result<SurfaceVerdict> {
        if self.n() < 2 || self.hi() == 0 {
            return Ok(undecided("needs two voters and two scale labels"));
        }
        let j = 0;
        let Ok(g2) = self.m.selector(j).apply(2) else {
            return Ok(undecided("selector undefined for two graders"));
        };
        let mut cells = self.silent();
        self.set(&mut cells, 0, j, Vote::Grade(0));
        self.set(&mut cells, 1, j, Vote::Grade(self.hi()));
        let voter = if g2 == 1 { 0 } else { 1 };
        let reason = "a grader whose grade equals the outcome can move it by blanking, under the non-strict form";
        Ok(match self.confirm(cells, Instance::Fp { voter, candidate: j, replacement: Vote::Blank })? {
            Some(w) => SurfaceVerdict::Fails { reason: reason.into(), witness: Some(w) },
            None => undecided("two-grader profile does not violate FP"),
        })
    }

    fn outer_consistency(&self) -> Result<SurfaceVerdict> {
        let mut pending = Vec::new();
        for j in 0..self.c() {
            let g = self.m.selector(j);
            match check_oc_condition(g, self.bound) {
                ConditionCheck::Holds { checked_up_to } if checked_up_to >= self.bound => {}
                ConditionCheck::Holds { checked_up_to } => {
                    pending.push(format!("selector {g} is undefined past pool size {checked_up_to}"))
                }
                ConditionCheck::Violated((k, k2)) => {
                    let reason = format!("selector {g} breaks the split condition at sizes {k} and {k2}");
                    if k + k2 > self.n() {
                        return Ok(SurfaceVerdict::Fails { reason, witness: None });
                    }
                    let whole = g.apply(k + k2).unwrap();
                    let parts = g.apply(k).unwrap() + g.apply(k2).unwrap();
                    let lows = |size: usize| g.apply(size).unwrap() - usize::from(whole < parts);
                    let mut cells = self.silent();
                    for (offset, size) in [(0, k), (k, k2)] {
                        for r in 0..size {
                            let label = if r < lows(size) { 0 } else { self.hi() };
                            self.set(&mut cells, offset + r, j, Vote::Grade(label));
                        }
                    }
                    let group: Vec<usize> = (0..k).collect();
                    return Ok(match self.confirm(cells, Instance::Oc { candidate: j, group })? {
                        Some(w) => SurfaceVerdict::Fails { reason, witness: Some(w) },
                        None => undecided(format!("{reason}, but the constructed split does not violate OC")),
                    });
                }
            }
        }
        Ok(match pending.is_empty() {
            true => holds("every selector satisfies the split condition"),
            false => undecided(pending.join("; ")),
        })
    }

    /// First pool size up to the bound where two selectors differ.
    fn selector_split(&self) -> Option<(usize, usize, usize, bool)> {
        for a in 0..self.c() {
            for b in a + 1..self.c() {
                for k in 1..=self.bound {
                    match (self.m.selector(a).apply(k), self.m.selector(b).apply(k)) {
                        (Ok(x), Ok(y)) if x == y => {}
                        (Err(_), Err(_)) => break,
                        (Ok(_), Ok(_)) => return Some((a, b, k, true)),
                        _ => return Some((a, b, k, false)),
                    }
                }
            }
        }
        None
    }

    fn neutrality(&self, axiom: Axiom) -> Result<SurfaceVerdict> {
        if self.c() < 2 {
            return Ok(holds("a single candidate"));
        }
        if let Some((a, b, k, comparable)) = self.selector_split() {
            let reason = format!("candidates {} and {} select differently from pools of size {k}", self.cand(a), self.cand(b));
            if !comparable {
                return Ok(undecided(reason));
            }
            if k > self.n() {
                return Ok(SurfaceVerdict::Fails { reason, witness: None });
            }
            let ga = self.m.selector(a).apply(k).unwrap();
            let gb = self.m.selector(b).apply(k).unwrap();
            let mut cells = self.silent();
            for i in 0..k {
                let label = if i < ga.min(gb) { 0 } else { self.hi() };
                self.set(&mut cells, i, a, Vote::Grade(label));
                self.set(&mut cells, i, b, Vote::Grade(label));
            }
            let instance = match axiom {
                Axiom::F => Instance::F { first: a, second: b },
                Axiom::N => Instance::N { first: a, second: b },
                _ => Instance::Sn { first: a, second: b },
            };
            return Ok(match self.confirm(cells, instance)? {
                Some(w) => SurfaceVerdict::Fails { reason, witness: Some(w) },
                None => undecided(format!("{reason}, but identical columns do not violate {axiom}")),
            });
        }
        if axiom == Axiom::F {
            return Ok(holds("all candidates share one selector"));
        }
        let uniform = (0..self.n()).all(|i| {
            let first = self.m.proxy(i, 0);
            !matches!(first, ProxyFn::Custom(_)) && (1..self.c()).all(|j| self.m.proxy(i, j) == first)
        });
        if uniform {
            return Ok(holds("one selector and, per voter, one built-in proxy for all candidates"));
        }
        self.probe(axiom, "proxies differ between candidates")
    }

    fn anonymity(&self, axiom: Axiom) -> Result<SurfaceVerdict> {
        let uniform = (0..self.c()).all(|j| {
            let first = self.m.proxy(0, j);
            !matches!(first, ProxyFn::Custom(_)) && (1..self.n()).all(|i| self.m.proxy(i, j) == first)
        });
        if uniform {
            return Ok(holds("each candidate uses one built-in proxy for all voters"));
        }
        self.probe(axiom, "proxies differ between voters")
    }

    fn cand(&self, j: usize) -> &str {
        &self.shape.candidates()[j]
    }

    /// Searches the probe family for a violation of `axiom`.
    fn probe(&self, axiom: Axiom, context: &str) -> Result<SurfaceVerdict> {
        match self.probe_search(axiom)? {
            Some(w) => Ok(SurfaceVerdict::Fails { reason: context.to_string(), witness: Some(w) }),
            None => Ok(undecided(format!("{context}; no violation among probe profiles"))),
        }
    }

    /// Profiles where every voter either stays silent, grades the candidate
    /// under study, or leaves it blank or abstains while grading one other
    /// candidate.
    fn probe_bases(&self) -> Vec<Vec<Vote>> {
        let n = self.n();
        if n > PROBE_MAX_VOTERS {
            return Vec::new();
        }
        let mut values = vec![0, self.hi() / 2, self.hi()];
        values.dedup();
        let mut bases = Vec::new();
        for j in 0..self.c() {
            let other = (j + 1) % self.c();
            for &alpha in &values {
                for &beta in &values {
                    for roles in 0..4usize.pow(n as u32) {
                        let mut cells = self.silent();
                        let mut code = roles;
                        for i in 0..n {
                            let role = code % 4;
                            code /= 4;
                            match role {
                                1 => self.set(&mut cells, i, j, Vote::Grade(alpha)),
                                2 | 3 => {
                                    self.set(&mut cells, i, j, if role == 2 { Vote::Blank } else { Vote::Abstain });
                                    if other != j {
                                        self.set(&mut cells, i, other, Vote::Grade(beta));
                                    }
                                }
                                _ => {}
                            }
                        }
                        bases.push(cells);
                    }
                }
            }
        }
        bases.sort();
        bases.dedup();
        bases
    }

    fn probe_search(&self, axiom: Axiom) -> Result<Option<Box<Witness>>> {
        let alphabet = standard_alphabet(self.shape.scale());
        let opts = CheckOptions { budget: PROBE_BUDGET, ..CheckOptions::default() };
        for cells in self.probe_bases() {
            let space = InstanceSpace::pinned(self.profile(cells), alphabet.clone())?;
            match check(axiom, self.m, &space, &opts) {
                Ok(v) => {
                    if let Some(w) = v.witness {
                        return Ok(Some(w));
                    }
                }
                Err(Error::BudgetExceeded { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }
}

const PROBE_MAX_VOTERS: usize = 5;
const PROBE_BUDGET: u128 = 100_000;
