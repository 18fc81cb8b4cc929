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

//! Plain aggregators of submitted grades, useful as negative controls.

use super::{GradingFn, Outcome};
use crate::model::Profile;
use crate::{Rational, Result};

fn column_grades(p: &Profile, j: usize) -> Vec<Rational> {
    let mut g: Vec<Rational> = p.column(j).iter().filter_map(|v| p.value(*v)).collect();
    g.sort();
    g
}

fn mean(values: &[Rational]) -> Option<Rational> {
    (!values.is_empty()).then(|| values.iter().sum::<Rational>() / Rational::from_integer(values.len() as i64))
}

/// Mean of the submitted grades of each candidate.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArithmeticMean;

impl GradingFn for ArithmeticMean {
    fn name(&self) -> String {
        "mean".into()
    }

    fn grades(&self, p: &Profile) -> Result<Outcome> {
        Ok((0..p.n_candidates()).map(|j| mean(&column_grades(p, j))).collect())
    }
}

/// Mean after dropping the `trim` smallest and `trim` largest grades; the
/// plain mean when nothing would be left.
#[derive(Debug, Clone, Copy)]
pub struct TrimmedMean {
    pub trim: usize,
}

impl GradingFn for TrimmedMean {
    fn name(&self) -> String {
        format!("trimmed_mean({})", self.trim)
    }

    fn grades(&self, p: &Profile) -> Result<Outcome> {
        Ok((0..p.n_candidates())
            .map(|j| {
                let g = column_grades(p, j);
                if g.len() > 2 * self.trim {
                    mean(&g[self.trim..g.len() - self.trim])
                } else {
                    mean(&g)
                }
            })
            .collect())
    }
}

/// The same grade for every candidate, whatever the votes.
#[derive(Debug, Clone, Copy)]
pub struct ConstantGrade {
    pub value: Rational,
}

impl GradingFn for ConstantGrade {
    fn name(&self) -> String {
        format!("constant({})", self.value)
    }

    fn grades(&self, p: &Profile) -> Result<Outcome> {
        Ok(vec![Some(self.value); p.n_candidates()])
    }
}
