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


//! Fixtures and brute-force oracles shared by the integration tests. The
//! oracles are written from the definitions, without calling the library
//! code they are compared against.

#![allow(dead_code)]

use std::sync::Arc;

use proxygrade::model::{build_profile, CellValue, ElectionShape, GradeScale, Profile, Vote};
use proxygrade::{int, Rational};

/// Three voters, two candidates, labels "1".."5": x grades I with 1, y
/// grades J with 3, z grades both with 2. x and y are ineligible elsewhere.
pub fn worked_example() -> Profile {
    build_profile(
        &["x", "y", "z"],
        &["I", "J"],
        GradeScale::integer_range(1, 5).unwrap(),
        &[
            ("x", "I", CellValue::Label("1")),
            ("y", "J", CellValue::Label("3")),
            ("z", "I", CellValue::Label("2")),
            ("z", "J", CellValue::Label("2")),
        ],
    )
    .unwrap()
}

pub fn scale012() -> GradeScale {
    GradeScale::integer_range(0, 2).unwrap()
}

pub fn shape(voters: usize, candidates: usize) -> Arc<ElectionShape> {
    ElectionShape::generated(voters, candidates, scale012())
}

/// Profile over labels 0..=2 from candidate-major cells written as
/// `'0'..'2'`, `b` (blank), `a` (abstain) or `-` (ineligible).
pub fn profile(voters: usize, candidates: usize, cells: &str) -> Profile {
    let votes = cells
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0'..='9' => Vote::Grade(c as usize - '0' as usize),
            'b' => Vote::Blank,
            'a' => Vote::Abstain,
            '-' => Vote::Ineligible,
            other => panic!("bad cell {other}"),
        })
        .collect();
    Profile::from_votes(shape(voters, candidates), votes).unwrap()
}

/// `k`-th smallest (1-based) by sorting a copy.
pub fn kth_smallest(values: &[Rational], k: usize) -> Rational {
    let mut v = values.to_vec();
    v.sort();
    v[k - 1]
}

pub fn lower_median_index(k: usize) -> usize {
    (k + 1) / 2
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleProxy {
    None,
    OwnAverage,
    Constant(Rational),
}

/// Pool of `candidate` straight from the definition: graders contribute
/// their grade; every other voter (abstainers only unless `drop_abstain`)
/// contributes the proxy value, provided their ballot is not entirely blank
/// or ineligible.
pub fn oracle_pool(p: &Profile, candidate: usize, proxy: OracleProxy, drop_abstain: bool) -> Vec<Rational> {
    let mut out = Vec::new();
    for i in 0..p.n_voters() {
        let ballot: Vec<Vote> = (0..p.n_candidates()).map(|j| p.vote(i, j)).collect();
        let grades: Vec<Rational> =
            ballot.iter().filter_map(|v| v.label()).map(|l| p.scale().position(l)).collect();
        match ballot[candidate] {
            Vote::Grade(l) => out.push(p.scale().position(l)),
            Vote::Abstain if drop_abstain => {}
            _ => {
                let silent = ballot.iter().all(|v| matches!(v, Vote::Blank | Vote::Ineligible));
                if silent {
                    continue;
                }
                match proxy {
                    OracleProxy::None => {}
                    OracleProxy::OwnAverage => {
                        if !grades.is_empty() {
                            out.push(grades.iter().sum::<Rational>() / int(grades.len() as i64));
                        }
                    }
                    OracleProxy::Constant(c) => out.push(c),
                }
            }
        }
    }
    out
}

/// Voting range by repeated selection and removal of one equal value.
pub fn oracle_range(values: &[Rational], select: impl Fn(usize) -> usize) -> Vec<Rational> {
    let mut rest = values.to_vec();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let alpha = kth_smallest(&rest, select(rest.len()));
        out.push(alpha);
        let at = rest.iter().position(|v| *v == alpha).unwrap();
        rest.remove(at);
    }
    out
}

/// Every vector over `alphabet` of length `len`, first entry most significant.
pub fn all_cells(alphabet: &[Vote], len: usize) -> Vec<Vec<Vote>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

pub fn standard_votes() -> Vec<Vote> {
    vec![Vote::Grade(0), Vote::Grade(1), Vote::Grade(2), Vote::Blank, Vote::Abstain]
}
