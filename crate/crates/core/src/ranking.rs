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

//! Ranking candidates by voting ranges.
//!
//! The voting range of a pool is obtained by repeatedly selecting the
//! mechanism's order statistic, recording it, and removing one element equal
//! to it. Candidates are then ordered lexicographically by range, after all
//! pools have been replicated to a common size.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::model::{ElectionShape, Profile, ProfileEdit, Vote};
use crate::order_stats::{check_oc_condition, ConditionCheck, RationalMultiset, SelectorFn};
use crate::proxy::{Mechanism, PoolEntry, Source, VotingPool};
use crate::{Error, Rational, Result};

/// Which pool element leaves after each selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalRule {
    /// An element equal to the selected value, owned by the smallest voter.
    MatchSelected,
    /// The largest element, whatever was selected. Not a valid rule.
    /// Any rule that removes by sorted position alone keeps ranges monotone
    /// in each value, so the range probe cannot tell it apart.
    Largest,
    /// The element farthest from the selected value, the larger one on
    /// ties. Not a valid rule; the range probe does notice this one.
    Farthest,
}

/// Selected values in removal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VotingRange {
    pub candidate: usize,
    pub values: Vec<Rational>,
    pub pool_size: usize,
    /// The pool entries in the order they were removed.
    pub removed: Vec<PoolEntry>,
}

/// Voting range of a pool under an explicit selector and removal rule.
pub fn range_with_rule(g: &SelectorFn, pool: &VotingPool, rule: RemovalRule) -> Result<VotingRange> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let mut residual: Vec<PoolEntry> = pool.entries().to_vec();
    let mut values = Vec::with_capacity(residual.len());
    let mut removed = Vec::with_capacity(residual.len());
    while !residual.is_empty() {
        let pool_values: RationalMultiset = residual.iter().map(|e| e.value).collect();
        let alpha = g.select(&pool_values)?;
        values.push(alpha);
        let at = match rule {
            RemovalRule::MatchSelected => residual.iter().position(|e| e.value == alpha).expect("selected from pool"),
            RemovalRule::Largest => {
                let top = *pool_values.as_slice().last().expect("nonempty");
                residual.iter().position(|e| e.value == top).expect("max of pool")
            }
            RemovalRule::Farthest => {
                let (lo, hi) = (pool_values.as_slice()[0], *pool_values.as_slice().last().expect("nonempty"));
                let far = if hi - alpha >= alpha - lo { hi } else { lo };
                residual.iter().position(|e| e.value == far).expect("extreme of pool")
            }
        };
        removed.push(residual.remove(at));
    }
    Ok(VotingRange { candidate: pool.candidate(), values, pool_size: pool.len(), removed })
}

/// Voting range of a pool under a fair mechanism.
pub fn voting_range(m: &Mechanism, pool: &VotingPool) -> Result<VotingRange> {
    let g = m.common_selector(pool.len()).ok_or(Error::NotFair)?;
    range_with_rule(g, pool, RemovalRule::MatchSelected)
}

/// Ranges obtained under every admissible removal choice: at each step any
/// remaining entry equal to the selected value may be removed.
pub fn ranges_under_all_removals(g: &SelectorFn, pool: &VotingPool) -> Result<BTreeSet<Vec<Rational>>> {
    fn walk(
        g: &SelectorFn,
        residual: &[PoolEntry],
        prefix: &mut Vec<Rational>,
        out: &mut BTreeSet<Vec<Rational>>,
    ) -> Result<()> {
        if residual.is_empty() {
            out.insert(prefix.clone());
            return Ok(());
        }
        let alpha = g.select(&residual.iter().map(|e| e.value).collect())?;
        prefix.push(alpha);
        for at in (0..residual.len()).filter(|&at| residual[at].value == alpha) {
            let mut rest = residual.to_vec();
            rest.remove(at);
            walk(g, &rest, prefix, out)?;
        }
        prefix.pop();
        Ok(())
    }
    let mut out = BTreeSet::new();
    walk(g, pool.entries(), &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Voting ranges computed on the profile itself: select the grade, then
/// withdraw every right of any one voter whose grade or proxy equals it, and
/// repeat. Returns the ranges reachable through all such choices.
pub fn ranges_by_voter_removal(m: &Mechanism, p: &Profile, candidate: usize) -> Result<BTreeSet<Vec<Rational>>> {
    fn walk(
        m: &Mechanism,
        p: &Profile,
        candidate: usize,
        prefix: &mut Vec<Rational>,
        out: &mut BTreeSet<Vec<Rational>>,
    ) -> Result<()> {
        let pool = m.assemble_pool(p, candidate)?;
        if pool.is_empty() {
            out.insert(prefix.clone());
            return Ok(());
        }
        let alpha = m.selector(candidate).select(&pool.values())?;
        prefix.push(alpha);
        for entry in pool.entries().iter().filter(|e| e.value == alpha) {
            walk(m, &p.erase_voter(entry.voter), candidate, prefix, out)?;
        }
        prefix.pop();
        Ok(())
    }
    let mut out = BTreeSet::new();
    walk(m, p, candidate, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Replicates every pool to size `target`, which must be a multiple of each
/// pool size.
pub fn replicate_to(pools: &[VotingPool], target: usize) -> Result<Vec<VotingPool>> {
    pools
        .iter()
        .map(|p| {
            if p.is_empty() || target % p.len() != 0 {
                return Err(Error::ShapeMismatch(format!("pool of size {} cannot reach {target}", p.len())));
            }
            Ok(p.repeated(target / p.len()))
        })
        .collect()
}

/// Replicates non-empty pools to the least common multiple of their sizes.
pub fn equalize_pools(pools: &[VotingPool]) -> Result<(Vec<VotingPool>, usize)> {
    let target = pools.iter().try_fold(1usize, |acc, p| {
        if p.is_empty() {
            Err(Error::EmptyPool)
        } else {
            Ok(acc.lcm(&p.len()))
        }
    })?;
    Ok((replicate_to(pools, target)?, target))
}

/// Candidates ordered best first, with per-candidate ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOutcome {
    /// Groups of tied candidates, best group first; candidates in a group are
    /// listed in identifier order.
    pub tiers: Vec<Vec<usize>>,
    /// Range per candidate; `None` for excluded candidates.
    pub ranges: Vec<Option<VotingRange>>,
    /// Candidates with an empty pool.
    pub excluded: Vec<usize>,
    /// Common pool size after replication (0 if every pool is empty).
    pub pool_size: usize,
}

/// Ranks candidates from their pools.
///
/// `selectors` gives each candidate's selector; they must agree on every
/// size that occurs, and satisfy the outer-consistency condition whenever
/// pools must be replicated.
pub fn rank_pools(selectors: &[SelectorFn], pools: Vec<VotingPool>) -> Result<RankOutcome> {
    let excluded: Vec<usize> = pools.iter().filter(|p| p.is_empty()).map(|p| p.candidate()).collect();
    let kept: Vec<VotingPool> = pools.iter().filter(|p| !p.is_empty()).cloned().collect();
    let mut ranges: Vec<Option<VotingRange>> = vec![None; pools.len()];
    if kept.is_empty() {
        return Ok(RankOutcome { tiers: Vec::new(), ranges, excluded, pool_size: 0 });
    }
    let (equal, size) = equalize_pools(&kept)?;
    let g = &selectors[kept[0].candidate()];
    if !kept.iter().all(|p| selectors[p.candidate()].agrees_with(g, size)) {
        return Err(Error::NotFair);
    }
    if kept.iter().any(|p| p.len() != size) {
        match check_oc_condition(g, size) {
            ConditionCheck::Violated(first) => return Err(Error::NotOuterConsistent { bound: size, first }),
            ConditionCheck::Holds { checked_up_to } if checked_up_to < size => {
                return Err(Error::SelectorDomainExceeded { k: size, bound: checked_up_to })
            }
            ConditionCheck::Holds { .. } => {}
        }
    }
    for pool in &equal {
        ranges[pool.candidate()] = Some(range_with_rule(g, pool, RemovalRule::MatchSelected)?);
    }
    let mut order: Vec<usize> = kept.iter().map(|p| p.candidate()).collect();
    let key = |c: &usize| ranges[*c].as_ref().map(|r| r.values.clone());
    order.sort_by(|a, b| key(b).cmp(&key(a)).then(a.cmp(b)));
    let mut tiers: Vec<Vec<usize>> = Vec::new();
    for c in order {
        match tiers.last_mut() {
            Some(tier) if key(&tier[0]) == key(&c) => tier.push(c),
            _ => tiers.push(vec![c]),
        }
    }
    Ok(RankOutcome { tiers, ranges, excluded, pool_size: size })
}

/// The candidate's pool plus one copy of its grade for every abstaining voter
/// who is not otherwise represented in it.
pub fn reinforced_pool(m: &Mechanism, p: &Profile, candidate: usize) -> Result<VotingPool> {
    let mut pool = m.assemble_pool(p, candidate)?;
    if pool.is_empty() {
        return Ok(pool);
    }
    let grade = m.selector(candidate).select(&pool.values())?;
    let absentees: Vec<usize> = (0..p.n_voters())
        .filter(|&i| p.vote(i, candidate) == Vote::Abstain && pool.contribution(i).is_none())
        .collect();
    for voter in absentees {
        pool.push(PoolEntry { voter, copy: 0, value: grade, source: Source::Absentee });
    }
    Ok(pool)
}

/// Ranks the candidates of a profile.
pub fn rank(m: &Mechanism, p: &Profile, reinforce_absentees: bool) -> Result<RankOutcome> {
    let pools = (0..p.n_candidates())
        .map(|j| if reinforce_absentees { reinforced_pool(m, p, j) } else { m.assemble_pool(p, j) })
        .collect::<Result<Vec<_>>>()?;
    rank_pools(m.selectors(), pools)
}

/// A deviation that moves a voting range toward the deviator's grade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeViolation {
    pub voter: usize,
    pub deviation: usize,
    pub truthful: Vec<Rational>,
    pub manipulated: Vec<Rational>,
}

/// Looks for a grader of `candidate` who can pull the voting range toward
/// their own grade by reporting one of the `deviations` labels instead.
///
/// Ranges are compared at their first difference: the deviation is
/// profitable when the truthful value there lies on one side of the
/// voter's grade and the deviated value lies closer to or past it.
pub fn range_sp_violation(
    m: &Mechanism,
    p: &Profile,
    candidate: usize,
    deviations: &[usize],
    rule: RemovalRule,
) -> Result<Option<RangeViolation>> {
    let g = m.selector(candidate);
    let truthful = range_with_rule(g, &m.assemble_pool(p, candidate)?, rule);
    let truthful = match truthful {
        Ok(r) => r.values,
        Err(Error::EmptyPool) => return Ok(None),
        Err(e) => return Err(e),
    };
    for voter in p.graders(candidate) {
        let peak = p.value(p.vote(voter, candidate)).expect("grader");
        for &label in deviations {
            if Vote::Grade(label) == p.vote(voter, candidate) {
                continue;
            }
            let q = p.apply_edit(ProfileEdit { voter, candidate, replacement: Vote::Grade(label) })?;
            let manipulated = range_with_rule(g, &m.assemble_pool(&q, candidate)?, rule)?.values;
            let first = truthful.iter().zip(&manipulated).position(|(a, b)| a != b);
            if let Some(k) = first {
                let (t, d) = (truthful[k], manipulated[k]);
                if (t > peak && d < t) || (t < peak && d > t) {
                    return Ok(Some(RangeViolation { voter, deviation: label, truthful, manipulated }));
                }
            }
        }
    }
    Ok(None)
}

/// `true` when no grader of `candidate` can profitably misreport.
pub fn range_sp_probe(m: &Mechanism, p: &Profile, candidate: usize, deviations: &[usize]) -> Result<bool> {
    Ok(range_sp_violation(m, p, candidate, deviations, RemovalRule::MatchSelected)?.is_none())
}

/// Every voter replaced by `k` identical copies named `id#1..id#k`.
pub fn duplicate_election(m: &Mechanism, p: &Profile, k: usize) -> Result<(Mechanism, Profile)> {
    let shape = p.shape();
    let mut ids: Vec<(String, usize)> = shape
        .voters()
        .iter()
        .enumerate()
        .flat_map(|(i, id)| (1..=k).map(move |c| (format!("{id}#{c}"), i)))
        .collect();
    ids.sort();
    let names: Vec<String> = ids.iter().map(|(id, _)| id.clone()).collect();
    let new_shape = ElectionShape::new(&names, shape.candidates(), shape.scale().clone())?;
    let n = ids.len();
    let mut cells = vec![Vote::Ineligible; n * p.n_candidates()];
    let mut dup = Mechanism::uniform(&new_shape, m.proxy(0, 0).clone(), m.selector(0).clone(), m.absentee_policy());
    for j in 0..p.n_candidates() {
        dup.set_selector(j, m.selector(j).clone());
        for (new, &(_, old)) in ids.iter().enumerate() {
            cells[j * n + new] = p.vote(old, j);
            dup.set_proxy(new, j, m.proxy(old, j).clone());
        }
    }
    Ok((dup, Profile::from_votes(new_shape, cells)?))
}
