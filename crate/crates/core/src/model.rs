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

//! The election universe: grade scales, votes, election shapes and profiles.
//!
//! A [`Profile`] is an immutable candidate-by-voter matrix of [`Vote`]s.
//! Eligibility is implicit: a voter is eligible for a candidate exactly when
//! the cell is not [`Vote::Ineligible`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Rational, Result};

/// Words that cannot be used as grade labels because the file formats use
/// them for the non-grade votes.
pub const RESERVED_LABELS: [&str; 3] = ["blank", "abstain", "ineligible"];

/// Ordered input grades embedded in the rational output interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradeScale {
    labels: Vec<String>,
    positions: Vec<Rational>,
}

impl GradeScale {
    /// Builds a scale from labels and strictly increasing positions.
    pub fn new(labels: Vec<String>, positions: Vec<Rational>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::InvalidScale("at least two labels are required".into()));
        }
        if labels.len() != positions.len() {
            return Err(Error::InvalidScale(format!(
                "{} labels but {} positions",
                labels.len(),
                positions.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if label.is_empty() {
                return Err(Error::InvalidScale("empty label".into()));
            }
            if RESERVED_LABELS.contains(&label.as_str()) {
                return Err(Error::InvalidScale(format!("`{label}` is a reserved word")));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidScale(format!("label `{label}` appears twice")));
            }
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidScale("positions must be strictly increasing".into()));
        }
        Ok(GradeScale { labels, positions })
    }

    /// Labels placed at positions `0, 1, ..., n-1`.
    pub fn with_default_positions(labels: Vec<String>) -> Result<Self> {
        let positions = (0..labels.len() as i64).map(Rational::from_integer).collect();
        GradeScale::new(labels, positions)
    }

    /// The integer scale `lo..=hi`, each label being the decimal integer.
    pub fn integer_range(lo: i64, hi: i64) -> Result<Self> {
        let labels = (lo..=hi).map(|n| n.to_string()).collect();
        let positions = (lo..=hi).map(Rational::from_integer).collect();
        GradeScale::new(labels, positions)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn positions(&self) -> &[Rational] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Lowest input grade, also the lower end of the output interval.
    pub fn lo(&self) -> Rational {
        self.positions[0]
    }

    /// Highest input grade, also the upper end of the output interval.
    pub fn hi(&self) -> Rational {
        *self.positions.last().unwrap()
    }

    pub fn position(&self, label: usize) -> Rational {
        self.positions[label]
    }

    pub fn label(&self, label: usize) -> &str {
        &self.labels[label]
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// Index of the label sitting exactly at `value`, if any.
    pub fn label_at(&self, value: Rational) -> Option<usize> {
        self.positions.binary_search(&value).ok()
    }

    /// Whether `value` lies in the output interval `[lo, hi]`.
    pub fn contains(&self, value: Rational) -> bool {
        self.lo() <= value && value <= self.hi()
    }

    /// Same scale with one more label at `value`, named after the value.
    ///
    /// Returns the index of the label at `value`; the scale is unchanged if
    /// a label already sits there.
    pub fn with_point(&self, value: Rational) -> Result<(GradeScale, usize)> {
        if let Some(idx) = self.label_at(value) {
            return Ok((self.clone(), idx));
        }
        let idx = self.positions.partition_point(|p| *p < value);
        let mut labels = self.labels.clone();
        let mut positions = self.positions.clone();
        let mut name = value.to_string();
        while labels.contains(&name) {
            name.push('\'');
        }
        labels.insert(idx, name);
        positions.insert(idx, value);
        Ok((GradeScale::new(labels, positions)?, idx))
    }
}

/// One cell of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vote {
    /// A grade, as an index into the scale's labels.
    Grade(usize),
    /// Explicit request to be treated as ineligible for this candidate.
    Blank,
    /// Silence.
    Abstain,
    /// The voter has no right to vote for this candidate.
    Ineligible,
}

impl Vote {
    pub fn is_grade(self) -> bool {
        matches!(self, Vote::Grade(_))
    }

    pub fn is_eligible(self) -> bool {
        self != Vote::Ineligible
    }

    pub fn label(self) -> Option<usize> {
        match self {
            Vote::Grade(l) => Some(l),
            _ => None,
        }
    }
}

/// Voters, candidates and scale of an election, without the votes.
///
/// Identifiers are kept in lexicographic order so that every iteration over
/// voters or candidates is reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElectionShape {
    voters: Vec<String>,
    candidates: Vec<String>,
    scale: GradeScale,
}

impl ElectionShape {
    pub fn new<S: AsRef<str>>(
        voters: &[S],
        candidates: &[S],
        scale: GradeScale,
    ) -> Result<Arc<ElectionShape>> {
        Ok(Arc::new(ElectionShape {
            voters: sorted_unique(voters)?,
            candidates: sorted_unique(candidates)?,
            scale,
        }))
    }

    /// Shape with generated identifiers `v1..vn` and `c1..cm`, zero-padded so
    /// that lexicographic and numeric order agree.
    pub fn generated(voters: usize, candidates: usize, scale: GradeScale) -> Arc<ElectionShape> {
        let ids = |prefix: &str, n: usize| -> Vec<String> {
            let width = n.to_string().len();
            (1..=n).map(|i| format!("{prefix}{i:0width$}")).collect()
        };
        ElectionShape::new(&ids("v", voters), &ids("c", candidates), scale)
            .expect("generated identifiers are unique")
    }

    pub fn voters(&self) -> &[String] {
        &self.voters
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn scale(&self) -> &GradeScale {
        &self.scale
    }

    pub fn n_voters(&self) -> usize {
        self.voters.len()
    }

    pub fn n_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn voter_index(&self, id: &str) -> Result<usize> {
        self.voters
            .binary_search_by(|v| v.as_str().cmp(id))
            .map_err(|_| Error::UnknownVoter(id.to_string()))
    }

    pub fn candidate_index(&self, id: &str) -> Result<usize> {
        self.candidates
            .binary_search_by(|c| c.as_str().cmp(id))
            .map_err(|_| Error::UnknownCandidate(id.to_string()))
    }

    /// Same voters and candidates over another scale.
    pub fn with_scale(&self, scale: GradeScale) -> Arc<ElectionShape> {
        Arc::new(ElectionShape { voters: self.voters.clone(), candidates: self.candidates.clone(), scale })
    }

    /// Whether two shapes have the same voters and candidates (the scale may differ).
    pub fn same_electorate(&self, other: &ElectionShape) -> bool {
        self.voters == other.voters && self.candidates == other.candidates
    }
}

fn sorted_unique<S: AsRef<str>>(ids: &[S]) -> Result<Vec<String>> {
    let mut out: Vec<String> = ids.iter().map(|s| s.as_ref().to_string()).collect();
    out.sort();
    for w in out.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateIdentifier(w[0].clone()));
        }
    }
    Ok(out)
}

/// Value of a listed cell when building a profile from identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellValue<'a> {
    Label(&'a str),
    Blank,
    Abstain,
    Ineligible,
}

/// Builds a profile from identifiers and a sparse list of cells.
///
/// Cells that are not listed are ineligible.
pub fn build_profile<S: AsRef<str>>(
    voters: &[S],
    candidates: &[S],
    scale: GradeScale,
    cells: &[(&str, &str, CellValue<'_>)],
) -> Result<Profile> {
    let shape = ElectionShape::new(voters, candidates, scale)?;
    let n = shape.n_voters();
    let mut votes = vec![Vote::Ineligible; n * shape.n_candidates()];
    let mut listed: Vec<Option<CellValue<'_>>> = vec![None; votes.len()];
    for &(voter, candidate, value) in cells {
        let i = shape.voter_index(voter)?;
        let j = shape.candidate_index(candidate)?;
        let vote = match value {
            CellValue::Label(name) => {
                Vote::Grade(shape.scale().label_index(name).ok_or_else(|| Error::UnknownLabel(name.into()))?)
            }
            CellValue::Blank => Vote::Blank,
            CellValue::Abstain => Vote::Abstain,
            CellValue::Ineligible => Vote::Ineligible,
        };
        let slot = &mut listed[j * n + i];
        if let Some(previous) = *slot {
            let ids = || (voter.to_string(), candidate.to_string());
            let clash = |a: CellValue<'_>, b: CellValue<'_>| {
                matches!((a, b), (CellValue::Ineligible, CellValue::Label(_)))
            };
            let (voter, candidate) = ids();
            return Err(if clash(previous, value) || clash(value, previous) {
                Error::GradeOnIneligibleCell { voter, candidate }
            } else {
                Error::DuplicateCell { voter, candidate }
            });
        }
        *slot = Some(value);
        votes[j * n + i] = vote;
    }
    Ok(Profile { shape, cells: votes })
}

/// Replacement of a single cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProfileEdit {
    pub voter: usize,
    pub candidate: usize,
    pub replacement: Vote,
}

/// Immutable candidate-by-voter matrix of votes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    shape: Arc<ElectionShape>,
    cells: Vec<Vote>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rows = f.debug_map();
        for (j, c) in self.shape.candidates.iter().enumerate() {
            let row: Vec<String> = self
                .column(j)
                .iter()
                .map(|v| match v {
                    Vote::Grade(l) => self.shape.scale.label(*l).to_string(),
                    Vote::Blank => "blank".into(),
                    Vote::Abstain => "abstain".into(),
                    Vote::Ineligible => "-".into(),
                })
                .collect();
            rows.entry(c, &row.join(" "));
        }
        rows.finish()
    }
}

impl Profile {
    /// Builds a profile from a candidate-major cell vector.
    pub fn from_votes(shape: Arc<ElectionShape>, cells: Vec<Vote>) -> Result<Profile> {
        if cells.len() != shape.n_voters() * shape.n_candidates() {
            return Err(Error::ShapeMismatch(format!(
                "{} cells for {} voters and {} candidates",
                cells.len(),
                shape.n_voters(),
                shape.n_candidates()
            )));
        }
        let labels = shape.scale().len();
        if let Some(bad) = cells.iter().find_map(|v| v.label().filter(|l| *l >= labels)) {
            return Err(Error::UnknownLabel(format!("#{bad}")));
        }
        Ok(Profile { shape, cells })
    }

    pub(crate) fn from_raw(shape: Arc<ElectionShape>, cells: Vec<Vote>) -> Profile {
        debug_assert_eq!(cells.len(), shape.n_voters() * shape.n_candidates());
        Profile { shape, cells }
    }

    pub fn shape(&self) -> &Arc<ElectionShape> {
        &self.shape
    }

    pub fn scale(&self) -> &GradeScale {
        &self.shape.scale
    }

    pub fn n_voters(&self) -> usize {
        self.shape.n_voters()
    }

    pub fn n_candidates(&self) -> usize {
        self.shape.n_candidates()
    }

    /// Candidate-major cells: cell `(voter, candidate)` is at
    /// `candidate * n_voters + voter`.
    pub fn cells(&self) -> &[Vote] {
        &self.cells
    }

    pub fn vote(&self, voter: usize, candidate: usize) -> Vote {
        self.cells[candidate * self.n_voters() + voter]
    }

    pub fn column(&self, candidate: usize) -> &[Vote] {
        let n = self.n_voters();
        &self.cells[candidate * n..(candidate + 1) * n]
    }

    pub fn ballot(&self, voter: usize) -> Vec<Vote> {
        (0..self.n_candidates()).map(|j| self.vote(voter, j)).collect()
    }

    /// Position of a vote on the scale, for grades.
    pub fn value(&self, vote: Vote) -> Option<Rational> {
        vote.label().map(|l| self.scale().position(l))
    }

    /// Candidates the voter may vote for.
    pub fn eligible_candidates(&self, voter: usize) -> Vec<usize> {
        (0..self.n_candidates()).filter(|&j| self.vote(voter, j).is_eligible()).collect()
    }

    /// Candidates the voter graded.
    pub fn graded_candidates(&self, voter: usize) -> Vec<usize> {
        (0..self.n_candidates()).filter(|&j| self.vote(voter, j).is_grade()).collect()
    }

    /// Voters eligible for the candidate.
    pub fn eligible_voters(&self, candidate: usize) -> Vec<usize> {
        let col = self.column(candidate);
        (0..col.len()).filter(|&i| col[i].is_eligible()).collect()
    }

    /// Voters who graded the candidate.
    pub fn graders(&self, candidate: usize) -> Vec<usize> {
        let col = self.column(candidate);
        (0..col.len()).filter(|&i| col[i].is_grade()).collect()
    }

    /// Returns a copy with one cell replaced.
    ///
    /// Rights can be removed (any cell may become ineligible) but never
    /// granted.
    pub fn apply_edit(&self, edit: ProfileEdit) -> Result<Profile> {
        self.check_coordinates(edit.voter, edit.candidate)?;
        if let Vote::Grade(l) = edit.replacement {
            if l >= self.scale().len() {
                return Err(Error::UnknownLabel(format!("#{l}")));
            }
        }
        if self.vote(edit.voter, edit.candidate) == Vote::Ineligible && edit.replacement.is_eligible() {
            return Err(Error::IllegalEligibilityGrant {
                voter: self.shape.voters[edit.voter].clone(),
                candidate: self.shape.candidates[edit.candidate].clone(),
            });
        }
        let mut cells = self.cells.clone();
        cells[edit.candidate * self.n_voters() + edit.voter] = edit.replacement;
        Ok(Profile { shape: self.shape.clone(), cells })
    }

    /// Replaces a voter's whole ballot, subject to the same rule as
    /// [`Profile::apply_edit`] on every cell.
    pub fn with_ballot(&self, voter: usize, ballot: &[Vote]) -> Result<Profile> {
        if ballot.len() != self.n_candidates() {
            return Err(Error::ShapeMismatch(format!("ballot of length {}", ballot.len())));
        }
        let mut out = self.clone();
        for (j, &v) in ballot.iter().enumerate() {
            out = out.apply_edit(ProfileEdit { voter, candidate: j, replacement: v })?;
        }
        Ok(out)
    }

    /// The residual profile in which every voter of `voters` has each of
    /// their allowed votes replaced by a blank vote, on every candidate.
    pub fn without_voters(&self, voters: &[usize]) -> Profile {
        let n = self.n_voters();
        let mut cells = self.cells.clone();
        for &i in voters {
            for j in 0..self.n_candidates() {
                let cell = &mut cells[j * n + i];
                if cell.is_eligible() {
                    *cell = Vote::Blank;
                }
            }
        }
        Profile { shape: self.shape.clone(), cells }
    }

    /// The voter loses every right: all of their cells become ineligible.
    pub fn erase_voter(&self, voter: usize) -> Profile {
        let n = self.n_voters();
        let mut cells = self.cells.clone();
        for j in 0..self.n_candidates() {
            cells[j * n + voter] = Vote::Ineligible;
        }
        Profile { shape: self.shape.clone(), cells }
    }

    /// Exchanges the columns of two candidates.
    pub fn swap_candidates(&self, a: usize, b: usize) -> Profile {
        let n = self.n_voters();
        let mut cells = self.cells.clone();
        for i in 0..n {
            cells.swap(a * n + i, b * n + i);
        }
        Profile { shape: self.shape.clone(), cells }
    }

    /// Exchanges the ballots of two voters.
    pub fn swap_voters(&self, a: usize, b: usize) -> Profile {
        let n = self.n_voters();
        let mut cells = self.cells.clone();
        for j in 0..self.n_candidates() {
            cells.swap(j * n + a, j * n + b);
        }
        Profile { shape: self.shape.clone(), cells }
    }

    /// The same votes over a scale extended with a label at `value`.
    pub fn with_scale_point(&self, value: Rational) -> Result<(Profile, usize)> {
        let (scale, idx) = self.scale().with_point(value)?;
        let shift = scale.len() - self.scale().len();
        let cells = self
            .cells
            .iter()
            .map(|&v| match v {
                Vote::Grade(l) if l >= idx => Vote::Grade(l + shift),
                other => other,
            })
            .collect();
        Ok((Profile { shape: self.shape.with_scale(scale), cells }, idx))
    }

    fn check_coordinates(&self, voter: usize, candidate: usize) -> Result<()> {
        if voter >= self.n_voters() {
            return Err(Error::UnknownVoter(format!("#{voter}")));
        }
        if candidate >= self.n_candidates() {
            return Err(Error::UnknownCandidate(format!("#{candidate}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_example() -> Profile {
        let scale = GradeScale::integer_range(1, 5).unwrap();
        build_profile(
            &["x", "y", "z"],
            &["I", "J"],
            scale,
            &[
                ("x", "I", CellValue::Label("1")),
                ("y", "J", CellValue::Label("3")),
                ("z", "I", CellValue::Label("2")),
                ("z", "J", CellValue::Label("2")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_grader_sets() {
        let p = worked_example();
        assert_eq!(p.graders(0), vec![0, 2]);
        assert_eq!(p.graders(1), vec![1, 2]);
        assert_eq!(p.eligible_candidates(0), vec![0]);
        assert_eq!(p.graded_candidates(2), vec![0, 1]);
    }

    #[test]
    fn empty_cells_mean_no_eligibility() {
        let scale = GradeScale::integer_range(0, 1).unwrap();
        let p = build_profile(&["a"], &["A"], scale, &[]).unwrap();
        assert!(p.eligible_voters(0).is_empty());
    }

    #[test]
    fn unknown_label_rejected() {
        let scale = GradeScale::integer_range(1, 5).unwrap();
        let err = build_profile(&["x"], &["I"], scale, &[("x", "I", CellValue::Label("7"))]).unwrap_err();
        assert_eq!(err, Error::UnknownLabel("7".into()));
    }

    #[test]
    fn duplicate_identifiers_rejected() {
        let scale = GradeScale::integer_range(1, 5).unwrap();
        let err = build_profile(&["x", "x"], &["I"], scale, &[]).unwrap_err();
        assert_eq!(err, Error::DuplicateIdentifier("x".into()));
    }

    #[test]
    fn conflicting_cells() {
        let scale = GradeScale::integer_range(1, 5).unwrap();
        let cells = [("x", "I", CellValue::Ineligible), ("x", "I", CellValue::Label("2"))];
        let err = build_profile(&["x"], &["I"], scale.clone(), &cells).unwrap_err();
        assert!(matches!(err, Error::GradeOnIneligibleCell { .. }));
        let cells = [("x", "I", CellValue::Blank), ("x", "I", CellValue::Label("2"))];
        let err = build_profile(&["x"], &["I"], scale, &cells).unwrap_err();
        assert!(matches!(err, Error::DuplicateCell { .. }));
    }

    #[test]
    fn edits() {
        let p = worked_example();
        let before = p.clone();
        let q = p.apply_edit(ProfileEdit { voter: 2, candidate: 1, replacement: Vote::Abstain }).unwrap();
        assert_eq!(q.graders(1), vec![1]);
        assert_eq!(p, before);

        let blank = q.apply_edit(ProfileEdit { voter: 2, candidate: 1, replacement: Vote::Blank }).unwrap();
        assert!(blank
            .apply_edit(ProfileEdit { voter: 2, candidate: 1, replacement: Vote::Ineligible })
            .is_ok());

        let err = p.apply_edit(ProfileEdit { voter: 0, candidate: 1, replacement: Vote::Grade(1) }).unwrap_err();
        assert!(matches!(err, Error::IllegalEligibilityGrant { .. }));
    }

    #[test]
    fn residual_profiles() {
        let p = worked_example();
        assert_eq!(p.without_voters(&[]), p);
        let q = p.without_voters(&[0]);
        assert_eq!(q.vote(0, 0), Vote::Blank);
        assert_eq!(q.vote(0, 1), Vote::Ineligible);
        let all = p.without_voters(&[0, 1, 2]);
        assert!(all.cells().iter().all(|v| matches!(v, Vote::Blank | Vote::Ineligible)));
        assert_eq!(all.eligible_voters(0), p.eligible_voters(0));
    }

    #[test]
    fn identifiers_are_sorted() {
        let scale = GradeScale::integer_range(0, 1).unwrap();
        let shape = ElectionShape::new(&["z", "a", "m"], &["B", "A"], scale).unwrap();
        assert_eq!(shape.voters(), ["a", "m", "z"]);
        assert_eq!(shape.candidates(), ["A", "B"]);
        let g = ElectionShape::generated(12, 1, GradeScale::integer_range(0, 1).unwrap());
        assert_eq!(g.voters()[1], "v02");
    }

    #[test]
    fn scale_validation() {
        assert!(GradeScale::integer_range(0, 0).is_err());
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(GradeScale::new(labels.clone(), vec![crate::int(1), crate::int(1)]).is_err());
        assert!(GradeScale::new(vec!["blank".into(), "b".into()], vec![crate::int(0), crate::int(1)]).is_err());
        let s = GradeScale::with_default_positions(labels).unwrap();
        assert_eq!((s.lo(), s.hi()), (crate::int(0), crate::int(1)));
    }

    #[test]
    fn scale_point_insertion_keeps_values() {
        let p = worked_example();
        let (q, idx) = p.with_scale_point(Rational::new(3, 2)).unwrap();
        assert_eq!(idx, 1);
        for (a, b) in p.cells().iter().zip(q.cells()) {
            assert_eq!(p.value(*a), q.value(*b));
        }
    }
}
