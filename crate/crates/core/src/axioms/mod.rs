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

//! Exhaustive verification of grading-function properties.
//!
//! Every property is phrased as a family of *instances* rooted at a base
//! profile: a deviation, an edit, a permutation or a split of the
//! electorate. [`check`] enumerates all base profiles of an
//! [`InstanceSpace`] in encoding order and all instances of each, and stops
//! at the first violation. The returned [`Witness`] names the base profile
//! and the instance, and [`replay`] re-evaluates it from scratch.
//!
//! Grading functions are black boxes ([`GradingFn`]), so hand-written
//! aggregators can be audited next to proxy mechanisms.

mod aggregators;
mod cross;
mod space;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use aggregators::{ArithmeticMean, ConstantGrade, TrimmedMean};
pub use cross::{theorem_cross_checks, CrossCheck};
pub(crate) use space::Oracle;
pub use space::{standard_alphabet, InstanceSpace};

use crate::model::{Profile, Vote};
use crate::order_stats::RationalMultiset;
use crate::proxy::Mechanism;
use crate::{Error, Rational, Result};

/// Grades of every candidate; `None` marks an ungraded candidate.
pub type Outcome = Vec<Option<Rational>>;

/// A grading function under test.
pub trait GradingFn: Sync {
    fn name(&self) -> String;

    fn grades(&self, p: &Profile) -> Result<Outcome>;

    /// Pools behind the grades, for functions built from pools.
    fn pools(&self, _p: &Profile) -> Option<Result<Vec<RationalMultiset>>> {
        None
    }

    /// Whether the function is a phantom-proxy mechanism.
    fn is_mechanism(&self) -> bool {
        false
    }
}

impl GradingFn for Mechanism {
    fn name(&self) -> String {
        self.describe()
    }

    fn grades(&self, p: &Profile) -> Result<Outcome> {
        Mechanism::grades(self, p)
    }

    fn pools(&self, p: &Profile) -> Option<Result<Vec<RationalMultiset>>> {
        Some(Mechanism::pools(self, p))
    }

    fn is_mechanism(&self) -> bool {
        true
    }
}

/// The checkable properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// Strategy-proofness: a voter cannot pull a grade toward its own by
    /// changing its ballot.
    Sp,
    /// Strategy-proofness against any ballot change, including blanks and
    /// abstentions, for a voter with any peak.
    StrongSp,
    /// Blank votes behave as ineligibility.
    Bv,
    /// Abstainers are ignored.
    Si,
    /// Abstainers consent to the outcome.
    Sc,
    /// Participating never moves the grade away from one's own.
    P,
    /// Abstaining or blanking never helps, non-strict form.
    Fp,
    /// A candidate's grade depends only on its own column.
    Jd,
    /// Unanimous graders decide.
    U,
    /// No grade is better for some grader and worse for none.
    Pareto,
    /// Swapping two candidates with the same eligible voters swaps their grades.
    N,
    /// Swapping any two candidates swaps their grades.
    Sn,
    /// Equal pools give equal grades.
    F,
    /// Swapping two voters with the same eligibility changes nothing.
    A,
    /// Swapping any two voters changes nothing.
    Sa,
    /// Splitting the electorate into two agreeing halves preserves the grade.
    Oc,
    /// Merging two disjoint sub-juries that agree preserves the grade.
    Ic,
}

impl Axiom {
    pub const ALL: [Axiom; 17] = [
        Axiom::Sp,
        Axiom::StrongSp,
        Axiom::Bv,
        Axiom::Si,
        Axiom::Sc,
        Axiom::P,
        Axiom::Fp,
        Axiom::Jd,
        Axiom::U,
        Axiom::Pareto,
        Axiom::N,
        Axiom::Sn,
        Axiom::F,
        Axiom::A,
        Axiom::Sa,
        Axiom::Oc,
        Axiom::Ic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Sp => "SP",
            Axiom::StrongSp => "StrongSP",
            Axiom::Bv => "BV",
            Axiom::Si => "SI",
            Axiom::Sc => "SC",
            Axiom::P => "P",
            Axiom::Fp => "FP",
            Axiom::Jd => "JD",
            Axiom::U => "U",
            Axiom::Pareto => "Pareto",
            Axiom::N => "N",
            Axiom::Sn => "SN",
            Axiom::F => "F",
            Axiom::A => "A",
            Axiom::Sa => "SA",
            Axiom::Oc => "OC",
            Axiom::Ic => "IC",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Axiom> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().to_ascii_lowercase() == key || (key == "ssp" && *a == Axiom::StrongSp))
            .ok_or_else(|| Error::Schema { path: "axioms".into(), message: format!("unknown axiom `{s}`") })
    }
}

/// One concrete test of a property, relative to a base profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    /// `voter`, who graded `candidate`, submits `ballot` instead.
    Sp { voter: usize, candidate: usize, ballot: Vec<Vote> },
    /// `voter` with single-peaked preference around scale label `peak`
    /// submits `ballot` instead.
    StrongSp { voter: usize, candidate: usize, peak: usize, ballot: Vec<Vote> },
    /// A blank cell becomes ineligible.
    Bv { voter: usize, candidate: usize },
    /// A voter abstaining on `candidate` loses every right to vote.
    Si { voter: usize, candidate: usize },
    /// An abstainer grades the outcome instead (`label`).
    Sc { voter: usize, candidate: usize, label: usize },
    /// A grader abstains instead.
    P { voter: usize, candidate: usize },
    /// A grader abstains or blanks instead.
    Fp { voter: usize, candidate: usize, replacement: Vote },
    /// Another profile with the same column for `candidate`.
    Jd { candidate: usize, other: Vec<Vote> },
    U { candidate: usize },
    Pareto { candidate: usize },
    N { first: usize, second: usize },
    Sn { first: usize, second: usize },
    F { first: usize, second: usize },
    A { first: usize, second: usize },
    Sa { first: usize, second: usize },
    /// `group` and its complement; each side is evaluated with the other
    /// side's ballots blanked.
    Oc { candidate: usize, group: Vec<usize> },
    /// Two rights-removals of the base profile with disjoint juries for
    /// `candidate`.
    Ic { candidate: usize, left: Vec<Vote>, right: Vec<Vote> },
}

impl Instance {
    pub fn axiom(&self) -> Axiom {
        match self {
            Instance::Sp { .. } => Axiom::Sp,
            Instance::StrongSp { .. } => Axiom::StrongSp,
            Instance::Bv { .. } => Axiom::Bv,
            Instance::Si { .. } => Axiom::Si,
            Instance::Sc { .. } => Axiom::Sc,
            Instance::P { .. } => Axiom::P,
            Instance::Fp { .. } => Axiom::Fp,
            Instance::Jd { .. } => Axiom::Jd,
            Instance::U { .. } => Axiom::U,
            Instance::Pareto { .. } => Axiom::Pareto,
            Instance::N { .. } => Axiom::N,
            Instance::Sn { .. } => Axiom::Sn,
            Instance::F { .. } => Axiom::F,
            Instance::A { .. } => Axiom::A,
            Instance::Sa { .. } => Axiom::Sa,
            Instance::Oc { .. } => Axiom::Oc,
            Instance::Ic { .. } => Axiom::Ic,
        }
    }

    /// The profiles the instance compares against the base, with a role
    /// name for each.
    pub fn derived_profiles(&self, base: &Profile) -> Vec<(&'static str, Profile)> {
        let n = base.n_voters();
        let shape = base.shape().clone();
        let cells = base.cells();
        let make = |c: Vec<Vote>| Profile::from_raw(shape.clone(), c);
        match self {
            Instance::Sp { voter, ballot, .. } | Instance::StrongSp { voter, ballot, .. } => {
                vec![("deviation", make(with_ballot(cells, n, *voter, ballot)))]
            }
            Instance::Bv { voter, candidate } => {
                vec![("ineligible", make(with_cell(cells, n, *voter, *candidate, Vote::Ineligible)))]
            }
            Instance::Si { voter, .. } => {
                let ballot = vec![Vote::Ineligible; base.n_candidates()];
                vec![("removed", make(with_ballot(cells, n, *voter, &ballot)))]
            }
            Instance::Sc { voter, candidate, label } => {
                vec![("consent", make(with_cell(cells, n, *voter, *candidate, Vote::Grade(*label))))]
            }
            Instance::P { voter, candidate } => {
                vec![("abstain", make(with_cell(cells, n, *voter, *candidate, Vote::Abstain)))]
            }
            Instance::Fp { voter, candidate, replacement } => {
                vec![("withdrawn", make(with_cell(cells, n, *voter, *candidate, *replacement)))]
            }
            Instance::Jd { other, .. } => vec![("other", make(other.clone()))],
            Instance::U { .. } | Instance::Pareto { .. } | Instance::F { .. } => Vec::new(),
            Instance::N { first, second } | Instance::Sn { first, second } => {
                vec![("swapped", base.swap_candidates(*first, *second))]
            }
            Instance::A { first, second } | Instance::Sa { first, second } => {
                vec![("swapped", base.swap_voters(*first, *second))]
            }
            Instance::Oc { group, .. } => {
                let rest: Vec<usize> = (0..n).filter(|i| !group.contains(i)).collect();
                vec![("complement only", base.without_voters(group)), ("group only", base.without_voters(&rest))]
            }
            Instance::Ic { left, right, .. } => vec![
                ("left", make(left.clone())),
                ("right", make(right.clone())),
                ("merged", make(merge(left, right))),
            ],
        }
    }

    /// Human-readable description using the base profile's identifiers.
    pub fn describe(&self, base: &Profile) -> String {
        let shape = base.shape();
        let v = |i: usize| shape.voters()[i].as_str();
        let c = |j: usize| shape.candidates()[j].as_str();
        let vote = |x: &Vote| render_vote(base, *x);
        let ballot = |b: &[Vote]| b.iter().map(vote).collect::<Vec<_>>().join(", ");
        match self {
            Instance::Sp { voter, candidate, ballot: b } => {
                format!("{} (peak on {}) submits ({})", v(*voter), c(*candidate), ballot(b))
            }
            Instance::StrongSp { voter, candidate, peak, ballot: b } => format!(
                "{} with peak {} on {} submits ({})",
                v(*voter),
                base.scale().label(*peak),
                c(*candidate),
                ballot(b)
            ),
            Instance::Bv { voter, candidate } => format!("blank of {} on {} made ineligible", v(*voter), c(*candidate)),
            Instance::Si { voter, candidate } => {
                format!("{} abstains on {}; all of its rights removed", v(*voter), c(*candidate))
            }
            Instance::Sc { voter, candidate, label } => format!(
                "{} abstains on {}; grades {} instead",
                v(*voter),
                c(*candidate),
                base.scale().label(*label)
            ),
            Instance::P { voter, candidate } => format!("{} abstains on {} instead of grading", v(*voter), c(*candidate)),
            Instance::Fp { voter, candidate, replacement } => {
                format!("{} replaces its grade on {} by {}", v(*voter), c(*candidate), vote(replacement))
            }
            Instance::Jd { candidate, .. } => format!("other profile with the same column {}", c(*candidate)),
            Instance::U { candidate } => format!("unanimous graders of {}", c(*candidate)),
            Instance::Pareto { candidate } => format!("graders of {}", c(*candidate)),
            Instance::N { first, second } | Instance::Sn { first, second } | Instance::F { first, second } => {
                format!("candidates {} and {}", c(*first), c(*second))
            }
            Instance::A { first, second } | Instance::Sa { first, second } => {
                format!("voters {} and {}", v(*first), v(*second))
            }
            Instance::Oc { candidate, group } => format!(
                "candidate {}, split {{{}}} against the rest",
                c(*candidate),
                group.iter().map(|&i| v(i)).collect::<Vec<_>>().join(", ")
            ),
            Instance::Ic { candidate, .. } => format!("disjoint juries for {}", c(*candidate)),
        }
    }
}

fn render_vote(p: &Profile, v: Vote) -> String {
    match v {
        Vote::Grade(l) => p.scale().label(l).to_string(),
        Vote::Blank => "blank".into(),
        Vote::Abstain => "abstain".into(),
        Vote::Ineligible => "ineligible".into(),
    }
}

fn with_cell(cells: &[Vote], n: usize, voter: usize, candidate: usize, v: Vote) -> Vec<Vote> {
    let mut out = cells.to_vec();
    out[candidate * n + voter] = v;
    out
}

fn with_ballot(cells: &[Vote], n: usize, voter: usize, ballot: &[Vote]) -> Vec<Vote> {
    let mut out = cells.to_vec();
    for (j, v) in ballot.iter().enumerate() {
        out[j * n + voter] = *v;
    }
    out
}

fn merge(left: &[Vote], right: &[Vote]) -> Vec<Vote> {
    left.iter().zip(right).map(|(l, r)| if *l == Vote::Ineligible { *r } else { *l }).collect()
}

/// A replayable violation.
#[derive(Debug, Clone)]
pub struct Witness {
    pub axiom: Axiom,
    pub base: Profile,
    pub instance: Instance,
    pub observed: String,
    pub required: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated: {}; observed {}; required {}",
            self.axiom,
            self.instance.describe(&self.base),
            self.observed,
            self.required
        )
    }
}

/// Result of checking one property over a space.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub axiom: Axiom,
    /// Upper bound on the instances the check could visit.
    pub instances: u128,
    pub witness: Option<Box<Witness>>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Which consent grades the abstainer of [`Axiom::Sc`] may give.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConsentDomain {
    /// Scale labels only; outcomes between labels make the instance vacuous.
    #[default]
    ScaleLabels,
    /// Any outcome, widening the scale with the outcome when needed.
    AnyOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Largest number of instances a check may plan to visit.
    pub budget: u128,
    pub consent: ConsentDomain,
}

pub const DEFAULT_BUDGET: u128 = 10_000_000;

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: DEFAULT_BUDGET, consent: ConsentDomain::ScaleLabels }
    }
}

/// Upper bound on the number of instances `axiom` visits over `space`.
pub fn planned_instances(axiom: Axiom, space: &InstanceSpace) -> u128 {
    let n = space.n_voters() as u128;
    let m = space.n_candidates() as u128;
    let labels = space.shape().scale().len() as u128;
    let eligible = space.eligible_values().len() as u128;
    let graded = space.alphabet().iter().filter(|v| v.is_grade()).count() as u128;
    let pow = |b: u128, e: u128| (0..e).fold(1u128, |acc, _| acc.saturating_mul(b));
    let cells = n * m;
    let per_base = match axiom {
        Axiom::Sp => n * m * graded * pow(eligible, m.saturating_sub(1)),
        Axiom::StrongSp => n * m * labels * pow(eligible, m),
        Axiom::Bv | Axiom::Si | Axiom::Sc | Axiom::P => cells,
        Axiom::Fp => 2 * cells,
        Axiom::Jd => {
            let widest = (0..(cells as usize)).map(|k| space.domain(k).len() as u128).max().unwrap_or(1);
            m * pow(widest, cells - n)
        }
        Axiom::U | Axiom::Pareto => m,
        Axiom::N | Axiom::Sn | Axiom::F => m * m,
        Axiom::A | Axiom::Sa => n * n,
        Axiom::Oc => m * pow(2, n),
        Axiom::Ic => m * pow(3, n) * pow(4, cells - n),
    };
    space.base_count().saturating_mul(per_base.max(1))
}

/// Checks one property over every base profile of `space`.
pub fn check(axiom: Axiom, f: &dyn GradingFn, space: &InstanceSpace, opts: &CheckOptions) -> Result<Verdict> {
    let planned = planned_instances(axiom, space);
    if planned > opts.budget {
        return Err(Error::BudgetExceeded { required: planned, budget: opts.budget });
    }
    let oracle = Oracle::new(f, space, true)?;
    let witness = (0..space.base_count() as u64)
        .into_par_iter()
        .map(|index| {
            let cells = space.base_cells(index as u128);
            first_violation(&oracle, axiom, &cells, opts)
        })
        .find_map_first(|r| r.transpose())
        .transpose()?;
    Ok(Verdict { axiom, instances: planned, witness: witness.map(Box::new) })
}

/// Checks several properties, sharing one outcome table.
pub fn check_many(axioms: &[Axiom], f: &dyn GradingFn, space: &InstanceSpace, opts: &CheckOptions) -> Result<Vec<Verdict>> {
    for &a in axioms {
        let planned = planned_instances(a, space);
        if planned > opts.budget {
            return Err(Error::BudgetExceeded { required: planned, budget: opts.budget });
        }
    }
    let oracle = Oracle::new(f, space, true)?;
    axioms
        .iter()
        .map(|&axiom| {
            let witness = (0..space.base_count() as u64)
                .into_par_iter()
                .map(|index| first_violation(&oracle, axiom, &space.base_cells(index as u128), opts))
                .find_map_first(|r| r.transpose())
                .transpose()?;
            Ok(Verdict { axiom, instances: planned_instances(axiom, space), witness: witness.map(Box::new) })
        })
        .collect()
}

macro_rules! checker {
    ($($(#[$doc:meta])* $name:ident => $axiom:expr;)*) => {
        $(
            $(#[$doc])*
            pub fn $name(f: &dyn GradingFn, space: &InstanceSpace) -> Result<Verdict> {
                check($axiom, f, space, &CheckOptions::default())
            }
        )*
    };
}

checker! {
    check_sp => Axiom::Sp;
    check_strong_sp => Axiom::StrongSp;
    check_bv => Axiom::Bv;
    check_si => Axiom::Si;
    check_sc => Axiom::Sc;
    check_p => Axiom::P;
    check_fp => Axiom::Fp;
    check_jd => Axiom::Jd;
    check_u => Axiom::U;
    check_pareto => Axiom::Pareto;
    check_n => Axiom::N;
    check_sn => Axiom::Sn;
    /// Needs pools: black-box functions without them yield
    /// [`Error::NeedsMechanism`].
    check_fairness => Axiom::F;
    check_a => Axiom::A;
    check_sa => Axiom::Sa;
    check_oc => Axiom::Oc;
    check_ic => Axiom::Ic;
}

/// Re-evaluates a witness from scratch; `true` if it still violates its
/// property.
pub fn replay(f: &dyn GradingFn, witness: &Witness) -> Result<bool> {
    Ok(evaluate_instance(f, &witness.base, &witness.instance)?.is_some())
}

/// Evaluates one instance on `base` directly; a violation comes back as a
/// witness.
pub fn evaluate_instance(f: &dyn GradingFn, base: &Profile, instance: &Instance) -> Result<Option<Witness>> {
    let alphabet = standard_alphabet(base.scale());
    let space = InstanceSpace::pinned(base.clone(), alphabet)?;
    let oracle = Oracle::new(f, &space, false)?;
    let out = oracle.outcome(base.cells())?;
    Ok(judge(&oracle, base, &out, instance)?.map(|(observed, required)| Witness {
        axiom: instance.axiom(),
        base: base.clone(),
        instance: instance.clone(),
        observed,
        required,
    }))
}

fn first_violation(o: &Oracle<'_>, axiom: Axiom, cells: &[Vote], opts: &CheckOptions) -> Result<Option<Witness>> {
    let base = o.space().profile(cells.to_vec());
    let out = o.outcome(cells)?;
    if axiom == Axiom::F && o.function().pools(&base).is_none() {
        return Err(Error::NeedsMechanism(format!("{} has no voting pools", o.function().name())));
    }
    for (base, instance) in instances(o, axiom, &base, &out, opts)? {
        let out = if base.shape().scale() == o.space().shape().scale() {
            out.clone()
        } else {
            o.function().grades(&base)?
        };
        if let Some((observed, required)) = judge(o, &base, &out, &instance)? {
            return Ok(Some(Witness { axiom, base, instance, observed, required }));
        }
    }
    Ok(None)
}

/// All instances of `axiom` rooted at `base`. The consent property may
/// re-express the base on a widened scale, so each instance carries its
/// own base.
fn instances(
    o: &Oracle<'_>,
    axiom: Axiom,
    base: &Profile,
    out: &Outcome,
    opts: &CheckOptions,
) -> Result<Vec<(Profile, Instance)>> {
    let space = o.space();
    let n = base.n_voters();
    let m = base.n_candidates();
    let cells = base.cells();
    let at = |i: usize, j: usize| cells[j * n + i];
    let eligible_values = space.eligible_values();
    let labels = base.scale().len();
    let mut list = Vec::new();
    let mut widened_list = Vec::new();
    let mut push = |inst: Instance| list.push((base.clone(), inst));
    match axiom {
        Axiom::Sp => {
            for i in 0..n {
                for j in 0..m {
                    if !at(i, j).is_grade() {
                        continue;
                    }
                    let slots: Vec<Vec<Vote>> = (0..m)
                        .map(|k| {
                            if !at(i, k).is_eligible() {
                                vec![Vote::Ineligible]
                            } else if k == j {
                                eligible_values.iter().copied().filter(|v| v.is_grade()).collect()
                            } else {
                                eligible_values.clone()
                            }
                        })
                        .collect();
                    for ballot in product(&slots) {
                        push(Instance::Sp { voter: i, candidate: j, ballot });
                    }
                }
            }
        }
        Axiom::StrongSp => {
            for i in 0..n {
                let slots: Vec<Vec<Vote>> = (0..m)
                    .map(|k| if at(i, k).is_eligible() { eligible_values.clone() } else { vec![Vote::Ineligible] })
                    .collect();
                let ballots: Vec<Vec<Vote>> = product(&slots).collect();
                for j in 0..m {
                    let peaks: Vec<usize> = match at(i, j) {
                        Vote::Grade(l) => vec![l],
                        _ => (0..labels).collect(),
                    };
                    for &peak in &peaks {
                        for ballot in &ballots {
                            push(Instance::StrongSp { voter: i, candidate: j, peak, ballot: ballot.clone() });
                        }
                    }
                }
            }
        }
        Axiom::Bv => each_cell(n, m, |i, j| at(i, j) == Vote::Blank, |voter, candidate| push(Instance::Bv { voter, candidate })),
        Axiom::Si => {
            each_cell(n, m, |i, j| at(i, j) == Vote::Abstain, |voter, candidate| push(Instance::Si { voter, candidate }))
        }
        Axiom::P => each_cell(n, m, |i, j| at(i, j).is_grade(), |voter, candidate| push(Instance::P { voter, candidate })),
        Axiom::Fp => each_cell(
            n,
            m,
            |i, j| at(i, j).is_grade(),
            |voter, candidate| {
                for replacement in [Vote::Abstain, Vote::Blank] {
                    push(Instance::Fp { voter, candidate, replacement });
                }
            },
        ),
        Axiom::Sc => {
            for j in 0..m {
                let Some(value) = out[j] else { continue };
                for i in 0..n {
                    if at(i, j) != Vote::Abstain {
                        continue;
                    }
                    match base.scale().label_at(value) {
                        Some(label) => push(Instance::Sc { voter: i, candidate: j, label }),
                        None if opts.consent == ConsentDomain::AnyOutcome => {
                            let (widened, label) = base.with_scale_point(value)?;
                            widened_list.push((widened, Instance::Sc { voter: i, candidate: j, label }));
                        }
                        None => {}
                    }
                }
            }
        }
        Axiom::Jd => {
            for j in 0..m {
                let slots: Vec<Vec<Vote>> = (0..n * m)
                    .map(|k| if k / n == j { vec![cells[k]] } else { space.domain(k).to_vec() })
                    .collect();
                for other in product(&slots) {
                    if other != cells {
                        push(Instance::Jd { candidate: j, other });
                    }
                }
            }
        }
        Axiom::U => (0..m).for_each(|candidate| push(Instance::U { candidate })),
        Axiom::Pareto => (0..m).for_each(|candidate| push(Instance::Pareto { candidate })),
        Axiom::N | Axiom::Sn | Axiom::F => {
            for first in 0..m {
                for second in first + 1..m {
                    push(match axiom {
                        Axiom::N => Instance::N { first, second },
                        Axiom::Sn => Instance::Sn { first, second },
                        _ => Instance::F { first, second },
                    });
                }
            }
        }
        Axiom::A | Axiom::Sa => {
            for first in 0..n {
                for second in first + 1..n {
                    push(if axiom == Axiom::A { Instance::A { first, second } } else { Instance::Sa { first, second } });
                }
            }
        }
        Axiom::Oc => {
            for j in 0..m {
                for mask in 0..(1usize << n) {
                    let group: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    push(Instance::Oc { candidate: j, group });
                }
            }
        }
        Axiom::Ic => {
            if cells.iter().all(|v| v.is_eligible()) {
                for j in 0..m {
                    // Per cell: which of the two removals keep the right to vote.
                    let slots: Vec<Vec<(bool, bool)>> = (0..n * m)
                        .map(|k| {
                            if k / n == j {
                                vec![(true, false), (false, true), (false, false)]
                            } else {
                                vec![(true, true), (true, false), (false, true), (false, false)]
                            }
                        })
                        .collect();
                    for keep in product(&slots) {
                        let side = |pick: fn(&(bool, bool)) -> bool| -> Vec<Vote> {
                            cells.iter().zip(&keep).map(|(v, k)| if pick(k) { *v } else { Vote::Ineligible }).collect()
                        };
                        push(Instance::Ic { candidate: j, left: side(|k| k.0), right: side(|k| k.1) });
                    }
                }
            }
        }
    }
    list.extend(widened_list);
    Ok(list)
}

fn each_cell(n: usize, m: usize, keep: impl Fn(usize, usize) -> bool, mut visit: impl FnMut(usize, usize)) {
    for i in 0..n {
        for j in 0..m {
            if keep(i, j) {
                visit(i, j);
            }
        }
    }
}

/// Cartesian product of `slots`, first slot most significant.
fn product<T: Clone>(slots: &[Vec<T>]) -> impl Iterator<Item = Vec<T>> + '_ {
    let total: usize = slots.iter().map(Vec::len).product();
    (0..total).map(move |mut index| {
        let mut out: Vec<T> = Vec::with_capacity(slots.len());
        let mut digits = vec![0; slots.len()];
        for (k, s) in slots.iter().enumerate().rev() {
            digits[k] = index % s.len();
            index /= s.len();
        }
        out.extend(digits.iter().zip(slots).map(|(&d, s)| s[d].clone()));
        out
    })
}

fn show(x: Option<Rational>) -> String {
    x.map_or_else(|| "ungraded".into(), |r| r.to_string())
}

fn show_all(out: &Outcome) -> String {
    format!("({})", out.iter().map(|x| show(*x)).collect::<Vec<_>>().join(", "))
}

/// Whether moving from `before` to `after` drags the grade away from
/// `peak`, when `before` lies strictly (or weakly) on one side of it.
fn moves_away(before: Option<Rational>, after: Option<Rational>, peak: Rational, strict: bool) -> bool {
    let (Some(b), Some(a)) = (before, after) else {
        return false;
    };
    let above = if strict { b > peak } else { b >= peak };
    let below = if strict { b < peak } else { b <= peak };
    (above && a < b) || (below && a > b)
}

/// Whether moving from `before` to `after` brings the grade strictly closer
/// to `peak` from one side.
fn moves_toward(before: Option<Rational>, after: Option<Rational>, peak: Rational) -> bool {
    let (Some(b), Some(a)) = (before, after) else {
        return false;
    };
    (b > peak && a < b) || (b < peak && a > b)
}

type Failure = Option<(String, String)>;

fn judge(o: &Oracle<'_>, base: &Profile, out: &Outcome, instance: &Instance) -> Result<Failure> {
    let n = base.n_voters();
    let cells = base.cells();
    let derived = |inst: &Instance| -> Vec<Vec<Vote>> {
        inst.derived_profiles(base).into_iter().map(|(_, p)| p.cells().to_vec()).collect()
    };
    let eval = |c: &[Vote]| -> Result<Outcome> {
        if base.shape().scale() == o.space().shape().scale() {
            o.outcome(c)
        } else {
            o.function().grades(&Profile::from_raw(base.shape().clone(), c.to_vec()))
        }
    };
    let fail = |observed: String, required: &str| Ok(Some((observed, required.to_string())));
    match instance {
        Instance::Sp { voter, candidate, .. } => {
            let Some(peak) = base.value(cells[candidate * n + voter]) else { return Ok(None) };
            let after = eval(&derived(instance)[0])?[*candidate];
            if moves_toward(out[*candidate], after, peak) {
                return fail(
                    format!("grade moved from {} to {}", show(out[*candidate]), show(after)),
                    "no move toward the deviator's grade",
                );
            }
        }
        Instance::StrongSp { candidate, peak, .. } => {
            let peak = base.scale().position(*peak);
            let after = eval(&derived(instance)[0])?[*candidate];
            if moves_toward(out[*candidate], after, peak) {
                return fail(
                    format!("grade moved from {} to {}", show(out[*candidate]), show(after)),
                    "no move toward the deviator's peak",
                );
            }
        }
        Instance::Bv { .. } => {
            let after = eval(&derived(instance)[0])?;
            if &after != out {
                return fail(format!("grades {} became {}", show_all(out), show_all(&after)), "identical grades");
            }
        }
        Instance::Si { candidate, .. } => {
            let after = eval(&derived(instance)[0])?[*candidate];
            if after != out[*candidate] {
                return fail(format!("grade {} became {}", show(out[*candidate]), show(after)), "identical grade");
            }
        }
        Instance::Sc { candidate, label, .. } => {
            let consent = Some(base.scale().position(*label));
            if out[*candidate] != consent {
                return Ok(None);
            }
            let after = eval(&derived(instance)[0])?[*candidate];
            if after != consent {
                return fail(format!("grade {} became {}", show(consent), show(after)), "identical grade");
            }
        }
        Instance::P { voter, candidate } | Instance::Fp { voter, candidate, .. } => {
            let Some(peak) = base.value(cells[candidate * n + voter]) else { return Ok(None) };
            let strict = matches!(instance, Instance::P { .. });
            let after = eval(&derived(instance)[0])?[*candidate];
            if moves_away(out[*candidate], after, peak, strict) {
                return fail(
                    format!("grade moved from {} to {}", show(out[*candidate]), show(after)),
                    "no move away from the voter's grade",
                );
            }
        }
        Instance::Jd { candidate, other } => {
            let after = eval(other)?[*candidate];
            if after != out[*candidate] {
                return fail(format!("grade {} against {}", show(out[*candidate]), show(after)), "identical grade");
            }
        }
        Instance::U { candidate } => {
            let column = base.column(*candidate);
            let grades: Vec<usize> = column.iter().filter_map(|v| v.label()).collect();
            let Some(&first) = grades.first() else { return Ok(None) };
            if grades.iter().any(|&g| g != first) {
                return Ok(None);
            }
            let required = Some(base.scale().position(first));
            if out[*candidate] != required {
                return fail(format!("grade {}", show(out[*candidate])), &format!("grade {}", show(required)));
            }
        }
        Instance::Pareto { candidate } => {
            let peaks: Vec<Rational> = base.column(*candidate).iter().filter_map(|v| base.value(*v)).collect();
            if peaks.is_empty() {
                return Ok(None);
            }
            let Some(x) = out[*candidate] else {
                return fail("ungraded".into(), "a grade");
            };
            let dist = |a: Rational, b: Rational| if a > b { a - b } else { b - a };
            for &beta in &peaks {
                let better = peaks.iter().any(|&p| dist(beta, p) < dist(x, p));
                let worse = peaks.iter().any(|&p| dist(beta, p) > dist(x, p));
                if better && !worse {
                    return fail(format!("grade {x}, dominated by {beta}"), "an undominated grade");
                }
            }
        }
        Instance::N { first, second } | Instance::Sn { first, second } => {
            if matches!(instance, Instance::N { .. }) && base.eligible_voters(*first) != base.eligible_voters(*second) {
                return Ok(None);
            }
            let after = eval(&derived(instance)[0])?;
            let mut expected = out.clone();
            expected.swap(*first, *second);
            if after != expected {
                return fail(format!("grades {}", show_all(&after)), &format!("grades {}", show_all(&expected)));
            }
        }
        Instance::F { first, second } => {
            let pools = o
                .function()
                .pools(base)
                .ok_or_else(|| Error::NeedsMechanism(format!("{} has no voting pools", o.function().name())))??;
            if pools[*first] == pools[*second] && out[*first] != out[*second] {
                return fail(
                    format!("grades {} and {} from equal pools", show(out[*first]), show(out[*second])),
                    "equal grades",
                );
            }
        }
        Instance::A { first, second } | Instance::Sa { first, second } => {
            if matches!(instance, Instance::A { .. })
                && base.eligible_candidates(*first) != base.eligible_candidates(*second)
            {
                return Ok(None);
            }
            let after = eval(&derived(instance)[0])?;
            if &after != out {
                return fail(format!("grades {} became {}", show_all(out), show_all(&after)), "identical grades");
            }
        }
        Instance::Oc { candidate, .. } => {
            let sides = derived(instance);
            let (a, b) = (eval(&sides[0])?[*candidate], eval(&sides[1])?[*candidate]);
            if a == b && out[*candidate] != a {
                return fail(
                    format!("both sides give {} but the whole gives {}", show(a), show(out[*candidate])),
                    &format!("grade {}", show(a)),
                );
            }
        }
        Instance::Ic { candidate, left, right } => {
            let (a, b) = (eval(left)?[*candidate], eval(right)?[*candidate]);
            if a != b {
                return Ok(None);
            }
            let merged = eval(&merge(left, right))?[*candidate];
            if merged != a {
                return fail(
                    format!("both juries give {} but the merge gives {}", show(a), show(merged)),
                    &format!("grade {}", show(a)),
                );
            }
        }
    }
    Ok(None)
}
