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

use serde::{Deserialize, Serialize};

use super::{from_json, RationalText};
use crate::model::{build_profile, CellValue, GradeScale, Profile, Vote};
use crate::{Error, Rational, Result};

/// On-disk election: scale, identifiers and a sparse list of cells.
/// Cells that are not listed are ineligible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionFile {
    pub scale: ScaleSpec,
    pub voters: Vec<String>,
    pub candidates: Vec<String>,
    #[serde(default)]
    pub ballots: Vec<BallotCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    pub labels: Vec<String>,
    /// Defaults to `0, 1, ..., n-1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<RationalText>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallotCell {
    pub voter: String,
    pub candidate: String,
    /// A scale label, `blank` or `abstain`.
    pub value: String,
}

impl ElectionFile {
    pub fn to_profile(&self) -> Result<Profile> {
        let scale = match &self.scale.positions {
            Some(p) => GradeScale::new(self.scale.labels.clone(), p.iter().map(|r| r.0).collect())?,
            None => GradeScale::with_default_positions(self.scale.labels.clone())?,
        };
        let cells: Vec<(&str, &str, CellValue<'_>)> = self
            .ballots
            .iter()
            .map(|b| {
                let value = match b.value.as_str() {
                    "blank" => CellValue::Blank,
                    "abstain" => CellValue::Abstain,
                    "ineligible" => CellValue::Ineligible,
                    label => CellValue::Label(label),
                };
                (b.voter.as_str(), b.candidate.as_str(), value)
            })
            .collect();
        build_profile(&self.voters, &self.candidates, scale, &cells)
    }

    /// Canonical file for a profile: sorted identifiers, eligible cells
    /// only, ordered by voter then candidate, positions omitted when they
    /// are the defaults.
    pub fn from_profile(p: &Profile) -> ElectionFile {
        let shape = p.shape();
        let scale = shape.scale();
        let default_positions = scale.positions().iter().enumerate().all(|(i, x)| *x == Rational::from_integer(i as i64));
        let mut ballots = Vec::new();
        for i in 0..p.n_voters() {
            for j in 0..p.n_candidates() {
                let value = match p.vote(i, j) {
                    Vote::Grade(l) => scale.label(l).to_string(),
                    Vote::Blank => "blank".into(),
                    Vote::Abstain => "abstain".into(),
                    Vote::Ineligible => continue,
                };
                ballots.push(BallotCell {
                    voter: shape.voters()[i].clone(),
                    candidate: shape.candidates()[j].clone(),
                    value,
                });
            }
        }
        ElectionFile {
            scale: ScaleSpec {
                labels: scale.labels().to_vec(),
                positions: (!default_positions).then(|| scale.positions().iter().map(|r| RationalText(*r)).collect()),
            },
            voters: shape.voters().to_vec(),
            candidates: shape.candidates().to_vec(),
            ballots,
        }
    }
}

/// Parses and validates an election file.
pub fn parse_election(bytes: &[u8]) -> Result<Profile> {
    from_json::<ElectionFile>(bytes)?.to_profile()
}

/// Canonical pretty-printed JSON of a profile, newline-terminated.
pub fn render_election(p: &Profile) -> String {
    let mut s = serde_json::to_string_pretty(&ElectionFile::from_profile(p)).expect("election files serialize");
    s.push('\n');
    s
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CsvRow {
    voter: String,
    candidate: String,
    value: String,
}

/// Reads one ballot cell per row (`voter,candidate,value` with a header
/// line). Voters and candidates are those that appear in the rows.
pub fn parse_election_csv(bytes: &[u8], scale: &GradeScale) -> Result<Profile> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let mut ballots = Vec::new();
    for (line, row) in reader.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(|e| Error::Schema { path: format!("row {}", line + 1), message: e.to_string() })?;
        ballots.push(BallotCell { voter: row.voter, candidate: row.candidate, value: row.value });
    }
    let unique = |f: fn(&BallotCell) -> &String| {
        let mut ids: Vec<String> = ballots.iter().map(|b| f(b).clone()).collect();
        ids.sort();
        ids.dedup();
        ids
    };
    let file = ElectionFile {
        scale: ScaleSpec {
            labels: scale.labels().to_vec(),
            positions: Some(scale.positions().iter().map(|r| RationalText(*r)).collect()),
        },
        voters: unique(|b| &b.voter),
        candidates: unique(|b| &b.candidate),
        ballots,
    };
    file.to_profile()
}
