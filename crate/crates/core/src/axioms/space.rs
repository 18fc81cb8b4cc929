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

//! Finite spaces of profiles and a memoizing evaluator over them.

use std::sync::Arc;

use rayon::prelude::*;

use super::{GradingFn, Outcome};
use crate::model::{ElectionShape, GradeScale, Profile, Vote};
use crate::{Error, Result};

/// Profiles whose cells all come from an alphabet, optionally with a fixed
/// eligibility pattern; or a single pinned profile whose instances are
/// explored with the alphabet.
#[derive(Debug, Clone)]
pub struct InstanceSpace {
    shape: Arc<ElectionShape>,
    alphabet: Vec<Vote>,
    /// Values each cell ranges over, candidate-major.
    domains: Vec<Vec<Vote>>,
    pinned: Option<Profile>,
}

/// Grades, blank and abstain: every cell eligible.
pub fn standard_alphabet(scale: &GradeScale) -> Vec<Vote> {
    (0..scale.len()).map(Vote::Grade).chain([Vote::Blank, Vote::Abstain]).collect()
}

impl InstanceSpace {
    /// All profiles of `voters × candidates` cells over `alphabet`, with
    /// generated identifiers.
    pub fn new(voters: usize, candidates: usize, scale: GradeScale, alphabet: Vec<Vote>) -> Result<Self> {
        InstanceSpace::over_shape(ElectionShape::generated(voters, candidates, scale), alphabet)
    }

    pub fn over_shape(shape: Arc<ElectionShape>, alphabet: Vec<Vote>) -> Result<Self> {
        let alphabet = normalize_alphabet(&shape, alphabet)?;
        let cells = shape.n_voters() * shape.n_candidates();
        Ok(InstanceSpace { domains: vec![alphabet.clone(); cells], shape, alphabet, pinned: None })
    }

    /// Restricts the space to one eligibility pattern (candidate-major,
    /// `true` = eligible). Eligible cells range over the alphabet without
    /// `Ineligible`; ineligible cells are fixed.
    pub fn with_eligibility(mut self, eligible: &[bool]) -> Result<Self> {
        if eligible.len() != self.domains.len() {
            return Err(Error::ShapeMismatch(format!("eligibility pattern of length {}", eligible.len())));
        }
        let allowed: Vec<Vote> = self.alphabet.iter().copied().filter(|v| v.is_eligible()).collect();
        self.domains = eligible
            .iter()
            .map(|&e| if e { allowed.clone() } else { vec![Vote::Ineligible] })
            .collect();
        Ok(self)
    }

    /// The single base profile `profile`; deviations and alternative
    /// profiles are drawn from `alphabet`.
    pub fn pinned(profile: Profile, alphabet: Vec<Vote>) -> Result<Self> {
        let mut space = InstanceSpace::over_shape(profile.shape().clone(), alphabet)?;
        space.pinned = Some(profile);
        Ok(space)
    }

    pub fn shape(&self) -> &Arc<ElectionShape> {
        &self.shape
    }

    pub fn alphabet(&self) -> &[Vote] {
        &self.alphabet
    }

    pub fn n_voters(&self) -> usize {
        self.shape.n_voters()
    }

    pub fn n_candidates(&self) -> usize {
        self.shape.n_candidates()
    }

    pub fn is_pinned(&self) -> bool {
        self.pinned.is_some()
    }

    /// Values a cell ranges over when profiles vary.
    pub fn domain(&self, cell: usize) -> &[Vote] {
        &self.domains[cell]
    }

    /// Values an eligible cell may take in a voter's deviation.
    pub fn eligible_values(&self) -> Vec<Vote> {
        self.alphabet.iter().copied().filter(|v| v.is_eligible()).collect()
    }

    /// Number of profiles of the full space.
    pub fn profile_count(&self) -> u128 {
        self.domains.iter().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    /// Number of base profiles instances are rooted at.
    pub fn base_count(&self) -> u128 {
        if self.pinned.is_some() {
            1
        } else {
            self.profile_count()
        }
    }

    /// Cells of the `index`-th base profile in lexicographic order of the
    /// cell encoding.
    pub fn base_cells(&self, index: u128) -> Vec<Vote> {
        if let Some(p) = &self.pinned {
            return p.cells().to_vec();
        }
        let mut rest = index;
        let mut cells = vec![Vote::Ineligible; self.domains.len()];
        for (k, d) in self.domains.iter().enumerate().rev() {
            let radix = d.len() as u128;
            cells[k] = d[(rest % radix) as usize];
            rest /= radix;
        }
        cells
    }

    /// Inverse of [`InstanceSpace::base_cells`] on the full space.
    pub fn encode(&self, cells: &[Vote]) -> Option<u128> {
        let mut code = 0u128;
        for (v, d) in cells.iter().zip(&self.domains) {
            let digit = d.iter().position(|x| x == v)?;
            code = code * d.len() as u128 + digit as u128;
        }
        Some(code)
    }

    pub fn profile(&self, cells: Vec<Vote>) -> Profile {
        Profile::from_raw(self.shape.clone(), cells)
    }

    /// Every base profile, in enumeration order.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.base_count()).map(|i| self.profile(self.base_cells(i)))
    }
}

fn normalize_alphabet(shape: &ElectionShape, mut alphabet: Vec<Vote>) -> Result<Vec<Vote>> {
    let labels = shape.scale().len();
    if let Some(bad) = alphabet.iter().find_map(|v| v.label().filter(|l| *l >= labels)) {
        return Err(Error::UnknownLabel(format!("#{bad}")));
    }
    alphabet.sort();
    alphabet.dedup();
    if alphabet.is_empty() {
        return Err(Error::ShapeMismatch("empty cell alphabet".into()));
    }
    Ok(alphabet)
}

/// Largest space whose outcomes are tabulated up front.
const TABLE_LIMIT: u128 = 1 << 22;

/// Evaluates a grading function on cell vectors, from a precomputed table
/// when the cells belong to the space.
pub(crate) struct Oracle<'a> {
    f: &'a dyn GradingFn,
    space: &'a InstanceSpace,
    table: Option<Vec<Outcome>>,
}

impl<'a> Oracle<'a> {
    pub(crate) fn new(f: &'a dyn GradingFn, space: &'a InstanceSpace, tabulate: bool) -> Result<Self> {
        let count = space.profile_count();
        let table = if tabulate && !space.is_pinned() && count <= TABLE_LIMIT {
            Some(
                (0..count as u64)
                    .into_par_iter()
                    .map(|i| f.grades(&space.profile(space.base_cells(i as u128))))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        Ok(Oracle { f, space, table })
    }

    pub(crate) fn space(&self) -> &InstanceSpace {
        self.space
    }

    pub(crate) fn function(&self) -> &dyn GradingFn {
        self.f
    }

    pub(crate) fn outcome(&self, cells: &[Vote]) -> Result<Outcome> {
        if let Some(table) = &self.table {
            if let Some(code) = self.space.encode(cells) {
                return Ok(table[code as usize].clone());
            }
        }
        self.f.grades(&self.space.profile(cells.to_vec()))
    }
}
