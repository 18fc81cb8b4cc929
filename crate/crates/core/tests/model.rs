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

use common::{profile, worked_example};
use proxygrade::model::{build_profile, CellValue, GradeScale, ProfileEdit, Vote};
use proxygrade::{int, Error};

#[test]
fn worked_example_graders() {
    let p = worked_example();
    assert_eq!(p.graders(0), vec![0, 2]);
    assert_eq!(p.graders(1), vec![1, 2]);
    assert_eq!(p.eligible_voters(0), vec![0, 2]);
    assert_eq!(p.eligible_candidates(2), vec![0, 1]);
    assert_eq!(p.value(p.vote(1, 1)), Some(int(3)));
}

#[test]
fn no_cells_means_no_rights() {
    let p = build_profile(&["v"], &["c"], GradeScale::integer_range(1, 5).unwrap(), &[]).unwrap();
    assert!(p.eligible_voters(0).is_empty());
    assert_eq!(p.vote(0, 0), Vote::Ineligible);
}

#[test]
fn unknown_label_rejected() {
    let err = build_profile(&["x"], &["I"], GradeScale::integer_range(1, 5).unwrap(), &[("x", "I", CellValue::Label("7"))])
        .unwrap_err();
    assert_eq!(err, Error::UnknownLabel("7".into()));
}

#[test]
fn grade_on_ineligible_cell_rejected() {
    let err = build_profile(
        &["x"],
        &["I"],
        GradeScale::integer_range(1, 5).unwrap(),
        &[("x", "I", CellValue::Ineligible), ("x", "I", CellValue::Label("2"))],
    )
    .unwrap_err();
    assert!(matches!(err, Error::GradeOnIneligibleCell { .. }));
}

#[test]
fn identifiers_are_validated() {
    let scale = GradeScale::integer_range(0, 2).unwrap();
    assert!(matches!(build_profile(&["x", "x"], &["I"], scale.clone(), &[]), Err(Error::DuplicateIdentifier(_))));
    assert!(matches!(
        build_profile(&["x"], &["I"], scale, &[("w", "I", CellValue::Blank)]),
        Err(Error::UnknownVoter(_))
    ));
    assert!(GradeScale::with_default_positions(vec!["good".into(), "blank".into()]).is_err());
    assert!(GradeScale::new(vec!["a".into(), "b".into()], vec![int(2), int(1)]).is_err());
}

#[test]
fn edits_only_remove_rights() {
    // voter 0 grades J with 2
    let p = profile(2, 2, "1b 2-");
    let q = p.apply_edit(ProfileEdit { voter: 0, candidate: 1, replacement: Vote::Abstain }).unwrap();
    assert_eq!(q.graders(1), Vec::<usize>::new());
    let blank_to_ineligible = p.apply_edit(ProfileEdit { voter: 1, candidate: 0, replacement: Vote::Ineligible });
    assert!(blank_to_ineligible.is_ok());
    let grant = p.apply_edit(ProfileEdit { voter: 1, candidate: 1, replacement: Vote::Grade(2) });
    assert!(matches!(grant, Err(Error::IllegalEligibilityGrant { .. })));
}

#[test]
fn removing_voters_blanks_their_rights() {
    let p = worked_example();
    assert_eq!(p.without_voters(&[]), p);
    let q = p.without_voters(&[0]);
    assert_eq!(q.vote(0, 0), Vote::Blank);
    assert_eq!(q.vote(0, 1), Vote::Ineligible);
    let all = p.without_voters(&[0, 1, 2]);
    for (cell, orig) in all.cells().iter().zip(p.cells()) {
        let expected = if orig.is_eligible() { Vote::Blank } else { Vote::Ineligible };
        assert_eq!(*cell, expected);
    }
}

#[test]
fn swaps_and_erasure() {
    let p = profile(2, 2, "01 2a");
    assert_eq!(p.swap_candidates(0, 1).column(0), p.column(1));
    assert_eq!(p.swap_voters(0, 1).ballot(0), p.ballot(1));
    assert_eq!(p.erase_voter(1).ballot(1), vec![Vote::Ineligible, Vote::Ineligible]);
}

#[test]
fn scale_points_shift_labels() {
    let p = profile(1, 1, "2");
    let (q, at) = p.with_scale_point(proxygrade::Rational::new(1, 2)).unwrap();
    assert_eq!(at, 1);
    assert_eq!(q.scale().len(), 4);
    assert_eq!(q.value(q.vote(0, 0)), Some(int(2)));
    let (same, at) = p.with_scale_point(int(1)).unwrap();
    assert_eq!((same.scale().len(), at), (3, 1));
}
