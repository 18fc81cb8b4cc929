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


mod common;

use common::*;
use proptest::prelude::*;
use proxygrade::axioms::{check, replay, Axiom, CheckOptions, InstanceSpace};
use proxygrade::io::{parse_election, render_election};
use proxygrade::maxmin::{clamp_phantoms, eval_maxmin, eval_sa_median, MajorityGradeFamily, ProxyPhantoms};
use proxygrade::model::{Profile, ProfileEdit, Vote};
use proxygrade::order_stats::{mu, RationalMultiset, SelectorFn};
use proxygrade::proxy::{majority_grade_mechanism, AbsenteePolicy, Mechanism, ProxyFn, VotingPool};
use proxygrade::ranking::{duplicate_election, rank, ranges_under_all_removals, reinforced_pool};
use proxygrade::{int, Rational};

fn vote() -> impl Strategy<Value = Vote> {
    prop_oneof![
        4 => (0usize..3).prop_map(Vote::Grade),
        1 => Just(Vote::Blank),
        1 => Just(Vote::Abstain),
        1 => Just(Vote::Ineligible),
    ]
}

fn profiles(max_voters: usize, max_candidates: usize) -> impl Strategy<Value = Profile> {
    (1..=max_voters, 1..=max_candidates).prop_flat_map(|(n, m)| {
        proptest::collection::vec(vote(), n * m).prop_map(move |cells| Profile::from_votes(shape(n, m), cells).unwrap())
    })
}

fn profile_pairs(max_voters: usize, max_candidates: usize) -> impl Strategy<Value = (Profile, Profile)> {
    (1..=max_voters, 1..=max_candidates).prop_flat_map(|(n, m)| {
        let cells = || proptest::collection::vec(vote(), n * m);
        (cells(), cells()).prop_map(move |(a, b)| {
            (Profile::from_votes(shape(n, m), a).unwrap(), Profile::from_votes(shape(n, m), b).unwrap())
        })
    })
}

fn selector() -> impl Strategy<Value = SelectorFn> {
    prop_oneof![
        Just(SelectorFn::LowerMedian),
        Just(SelectorFn::UpperMedian),
        Just(SelectorFn::Min),
        Just(SelectorFn::Max),
    ]
}

fn proxy() -> impl Strategy<Value = ProxyFn> {
    prop_oneof![
        Just(ProxyFn::None),
        Just(ProxyFn::OwnAverage),
        (0i64..=4).prop_map(|k| ProxyFn::Constant(Rational::new(k, 2))),
    ]
}

fn policy() -> impl Strategy<Value = AbsenteePolicy> {
    prop_oneof![Just(AbsenteePolicy::RemoveFromPool), Just(AbsenteePolicy::ProxyAnyway)]
}

fn mechanism_for(p: &Profile, proxy: ProxyFn, g: SelectorFn, policy: AbsenteePolicy) -> Mechanism {
    Mechanism::uniform(p.shape(), proxy, g, policy)
}

fn values() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-6i64..=6, 1i64..=3).prop_map(|(a, b)| Rational::new(a, b)), 1..9)
}

proptest! {
    #[test]
    fn order_statistic_ignores_input_order(v in values(), seed in any::<u64>(), k in 1usize..9) {
        let k = 1 + k % v.len();
        let mut shuffled = v.clone();
        let len = shuffled.len();
        for i in 0..len {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % len);
        }
        let a: RationalMultiset = v.iter().copied().collect();
        let b: RationalMultiset = shuffled.into_iter().collect();
        prop_assert_eq!(mu(k, &a).unwrap(), mu(k, &b).unwrap());
        prop_assert_eq!(mu(k, &a).unwrap(), kth_smallest(&v, k));
    }

    #[test]
    fn grade_comes_from_the_pool(p in profiles(5, 3), f in proxy(), g in selector(), pol in policy()) {
        let m = mechanism_for(&p, f, g, pol);
        let result = m.grade(&p).unwrap();
        for c in &result.candidates {
            match c.grade {
                None => prop_assert!(c.pool.is_empty()),
                Some(x) => {
                    prop_assert!(c.pool.values().iter().any(|v| *v == x));
                    prop_assert!(p.scale().contains(x));
                }
            }
        }
    }

    #[test]
    fn majority_pool_is_local((p, q) in profile_pairs(4, 3)) {
        let m = majority_grade_mechanism(p.shape());
        let mut cells = q.cells().to_vec();
        let n = p.n_voters();
        cells[..n].copy_from_slice(p.column(0));
        let mixed = Profile::from_votes(p.shape().clone(), cells).unwrap();
        prop_assert_eq!(m.assemble_pool(&p, 0).unwrap(), m.assemble_pool(&mixed, 0).unwrap());
    }

    #[test]
    fn single_misreport_never_helps(
        p in profiles(5, 2),
        f in proxy(),
        g in selector(),
        pol in policy(),
        voter in 0usize..5,
        candidate in 0usize..2,
        report in 0usize..3,
    ) {
        let (voter, candidate) = (voter % p.n_voters(), candidate % p.n_candidates());
        let Vote::Grade(peak) = p.vote(voter, candidate) else { return Ok(()) };
        let m = mechanism_for(&p, f, g, pol);
        let q = p.apply_edit(ProfileEdit { voter, candidate, replacement: Vote::Grade(report) }).unwrap();
        let (before, after) = (m.grades(&p).unwrap()[candidate].unwrap(), m.grades(&q).unwrap()[candidate].unwrap());
        let peak = p.scale().position(peak);
        prop_assert!(!(before < peak && after > before) && !(before > peak && after < before));
    }

    #[test]
    fn maxmin_matches_grade(p in profiles(5, 2), f in proxy(), g in selector(), pol in policy()) {
        let m = mechanism_for(&p, f, g, pol);
        let grades = m.grades(&p).unwrap();
        for j in 0..p.n_candidates() {
            prop_assert_eq!(eval_maxmin(&ProxyPhantoms::new(&m, j), &p).unwrap(), grades[j]);
        }
    }

    #[test]
    fn clamping_keeps_the_value(p in profiles(5, 2), f in proxy(), g in selector()) {
        let m = mechanism_for(&p, f, g, AbsenteePolicy::RemoveFromPool);
        for j in 0..p.n_candidates() {
            let raw = eval_maxmin(&ProxyPhantoms::new(&m, j), &p).unwrap();
            prop_assert_eq!(eval_maxmin(&clamp_phantoms(ProxyPhantoms::new(&m, j)), &p).unwrap(), raw);
        }
    }

    #[test]
    fn median_form_matches_majority(p in profiles(6, 2)) {
        let grades = majority_grade_mechanism(p.shape()).grades(&p).unwrap();
        for j in 0..p.n_candidates() {
            prop_assert_eq!(eval_sa_median(&MajorityGradeFamily::new(j), &p).unwrap(), grades[j]);
        }
    }

    #[test]
    fn ranges_do_not_depend_on_removal_choice(v in proptest::collection::vec(0i64..3, 1..8), g in selector()) {
        let pool = VotingPool::from_values(0, &ints(&v));
        let all = ranges_under_all_removals(&g, &pool).unwrap();
        prop_assert_eq!(all.len(), 1);
        let select = |k: usize| g.apply(k).unwrap();
        prop_assert!(all.contains(&oracle_range(&ints(&v), select)));
    }

    #[test]
    fn duplication_keeps_the_ranking(p in profiles(4, 3), f in proxy(), k in 2usize..4) {
        let m = mechanism_for(&p, f, SelectorFn::LowerMedian, AbsenteePolicy::RemoveFromPool);
        let base = rank(&m, &p, false).unwrap();
        let (dm, dp) = duplicate_election(&m, &p, k).unwrap();
        let dup = rank(&dm, &dp, false).unwrap();
        prop_assert_eq!(dup.tiers, base.tiers);
        prop_assert_eq!(dup.excluded, base.excluded);
    }

    #[test]
    fn reinforcement_keeps_the_grade(p in profiles(5, 3), f in proxy(), g in selector()) {
        let m = mechanism_for(&p, f, g.clone(), AbsenteePolicy::RemoveFromPool);
        for j in 0..p.n_candidates() {
            let plain = m.assemble_pool(&p, j).unwrap();
            let reinforced = reinforced_pool(&m, &p, j).unwrap();
            prop_assert!(reinforced.len() >= plain.len());
            if plain.is_empty() {
                prop_assert!(reinforced.is_empty());
                continue;
            }
            let (lo, hi) = (plain.values().smallest().unwrap(), plain.values().largest().unwrap());
            let grade = g.select(&reinforced.values()).unwrap();
            prop_assert!(lo <= grade && grade <= hi);
            if g == SelectorFn::LowerMedian {
                prop_assert_eq!(grade, g.select(&plain.values()).unwrap());
            }
        }
    }

    #[test]
    fn elections_round_trip(p in profiles(5, 3)) {
        let text = render_election(&p);
        let back = parse_election(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(render_election(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_replay(table in proptest::collection::vec(1usize..=3, 3), f in proxy(), pol in policy(), axiom in 0usize..6) {
        let table: Vec<usize> = table.iter().enumerate().map(|(i, g)| 1 + (g - 1) % (i + 1)).collect();
        let axiom = [Axiom::Sp, Axiom::Sc, Axiom::P, Axiom::Fp, Axiom::Oc, Axiom::U][axiom];
        let sp = InstanceSpace::new(3, 1, scale012(), standard_votes()).unwrap();
        let m = Mechanism::uniform(sp.shape(), f, SelectorFn::table(table).unwrap(), pol);
        if let Some(w) = check(axiom, &m, &sp, &CheckOptions::default()).unwrap().witness {
            prop_assert!(replay(&m, &w).unwrap(), "{}", w);
        }
    }
}

#[test]
fn constant_proxy_values_are_exact() {
    let p = profile(2, 2, "1b 2a");
    let m = Mechanism::uniform(p.shape(), ProxyFn::Constant(Rational::new(1, 3)), SelectorFn::Min, AbsenteePolicy::ProxyAnyway);
    assert_eq!(m.grades(&p).unwrap(), vec![Some(Rational::new(1, 3)), Some(Rational::new(1, 3))]);
    assert_eq!(m.grades(&p).unwrap()[0].map(|r| r * 3), Some(int(1)));
}
