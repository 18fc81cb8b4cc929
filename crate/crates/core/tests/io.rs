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
use proxygrade::io::{
    cmd_check, cmd_grade, cmd_rank, parse_election, parse_election_csv, parse_mechanism, render_election,
    ElectionFile, OutputFormat,
};
use proxygrade::axioms::{Axiom, CheckOptions, InstanceSpace};
use proxygrade::model::{GradeScale, Vote};
use proxygrade::order_stats::SelectorFn;
use proxygrade::proxy::{AbsenteePolicy, ProxyFn};
use proxygrade::{int, Error, Rational};

const WORKED: &str = r#"{
  "scale": {"labels": ["1", "2", "3", "4", "5"], "positions": [1, "2", "3/1", 4, "5"]},
  "voters": ["z", "y", "x"],
  "candidates": ["J", "I"],
  "ballots": [
    {"voter": "z", "candidate": "J", "value": "2"},
    {"voter": "x", "candidate": "I", "value": "1"},
    {"voter": "y", "candidate": "J", "value": "3"},
    {"voter": "z", "candidate": "I", "value": "2"}
  ]
}"#;

const WORKED_MECHANISM: &str = r#"{"proxy": "own_average", "selectors": {"I": "min", "J": "max"}}"#;

#[test]
fn worked_example_file() {
    let p = parse_election(WORKED.as_bytes()).unwrap();
    assert_eq!(p, worked_example());
    let (m, reinforce) = parse_mechanism(WORKED_MECHANISM.as_bytes(), p.shape()).unwrap();
    assert!(!reinforce);
    assert_eq!(m.grades(&p).unwrap(), vec![Some(int(1)), Some(int(3))]);
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let p = parse_election(WORKED.as_bytes()).unwrap();
    let once = render_election(&p);
    let twice = render_election(&parse_election(once.as_bytes()).unwrap());
    assert_eq!(once, twice);
    assert!(once.ends_with('\n'));
    let file: ElectionFile = serde_json::from_str(&once).unwrap();
    assert_eq!(file.voters, vec!["x", "y", "z"]);
}

#[test]
fn default_positions_are_omitted() {
    let p = profile(1, 1, "1");
    let text = render_election(&p);
    assert!(!text.contains("positions"));
    assert_eq!(parse_election(text.as_bytes()).unwrap(), p);
}

#[test]
fn missing_ballots_mean_no_rights() {
    let p = parse_election(br#"{"scale":{"labels":["lo","hi"]},"voters":["a","b"],"candidates":["c"]}"#).unwrap();
    assert!(p.cells().iter().all(|v| *v == Vote::Ineligible));
}

#[test]
fn unknown_label_in_file() {
    let text = br#"{"scale":{"labels":["no","yes"]},"voters":["a"],"candidates":["c"],
        "ballots":[{"voter":"a","candidate":"c","value":"maybe"}]}"#;
    assert_eq!(parse_election(text).unwrap_err(), Error::UnknownLabel("maybe".into()));
}

#[test]
fn schema_errors_carry_a_path() {
    let text = br#"{"scale":{"labels":["no","yes"]},"voters":["a"],"candidates":["c"],
        "ballots":[{"voter":"a","candidate":"c","grade":"yes"}]}"#;
    let Error::Schema { path, .. } = parse_election(text).unwrap_err() else { panic!() };
    assert!(path.starts_with("ballots[0]"), "{path}");
    assert!(matches!(parse_election(b"{} trailing"), Err(Error::Schema { .. })));
    let dup = br#"{"scale":{"labels":["no","yes"]},"voters":["a"],"candidates":["c"],
        "ballots":[{"voter":"a","candidate":"c","value":"yes"},{"voter":"a","candidate":"c","value":"no"}]}"#;
    assert!(matches!(parse_election(dup), Err(Error::DuplicateCell { .. })));
}

#[test]
fn mechanism_files() {
    let sh = shape(2, 2);
    let (m, _) = parse_mechanism(b"{}", &sh).unwrap();
    assert_eq!(m.proxy(0, 0), &ProxyFn::None);
    assert_eq!(m.selector(1), &SelectorFn::LowerMedian);
    assert_eq!(m.absentee_policy(), AbsenteePolicy::RemoveFromPool);

    let text = br#"{"selector":[1,1,2],"proxy":{"constant":"1/2"},"absentee_policy":"proxy_anyway",
        "proxies":[{"voter":"v2","candidate":"c1","proxy":"none"}],"reinforce_absentees":true}"#;
    let (m, reinforce) = parse_mechanism(text, &sh).unwrap();
    assert!(reinforce);
    assert_eq!(m.selector(0), &SelectorFn::Table(vec![1, 1, 2]));
    assert_eq!(m.proxy(0, 0), &ProxyFn::Constant(Rational::new(1, 2)));
    assert_eq!(m.proxy(1, 0), &ProxyFn::None);
    assert_eq!(m.absentee_policy(), AbsenteePolicy::ProxyAnyway);

    assert!(matches!(parse_mechanism(br#"{"selector":"mode"}"#, &sh), Err(Error::InvalidSelector(_))));
    assert!(matches!(parse_mechanism(br#"{"selector":[2]}"#, &sh), Err(Error::InvalidSelector(_))));
    assert!(matches!(parse_mechanism(br#"{"proxy":{"constant":5}}"#, &sh), Err(Error::ProxyOutOfRange { .. })));
    assert!(matches!(parse_mechanism(br#"{"selectors":{"zz":"min"}}"#, &sh), Err(Error::UnknownCandidate(_))));
    assert!(matches!(parse_mechanism(br#"{"colour":"red"}"#, &sh), Err(Error::Schema { .. })));
}

#[test]
fn csv_import() {
    let scale = GradeScale::with_default_positions(vec!["bad".into(), "good".into()]).unwrap();
    let text = b"voter,candidate,value\nb,c1,good\na,c1,bad\na,c2,abstain\nb,c2,blank\n";
    let p = parse_election_csv(text, &scale).unwrap();
    assert_eq!(p.shape().voters(), ["a", "b"]);
    assert_eq!(p.cells(), &[Vote::Grade(0), Vote::Grade(1), Vote::Abstain, Vote::Blank]);
    assert!(parse_election_csv(b"voter,candidate,value\na,c1,meh\n", &scale).is_err());
}

#[test]
fn grade_report() {
    let p = worked_example();
    let (m, _) = parse_mechanism(WORKED_MECHANISM.as_bytes(), p.shape()).unwrap();
    let r = cmd_grade(&p, &m).unwrap();
    let j = &r.json["candidates"];
    assert_eq!(j[0]["candidate"], "I");
    assert_eq!(j[0]["grade"]["exact"], "1");
    assert_eq!(j[1]["grade"]["decimal"], 3.0);
    let sources: Vec<&str> = j[0]["pool"].as_array().unwrap().iter().map(|e| e["source"].as_str().unwrap()).collect();
    assert_eq!(sources, ["grade", "proxy", "grade"]);
    assert!(r.render(OutputFormat::Table).contains("y=3*"));
    assert_eq!(r.render(OutputFormat::Json), cmd_grade(&p, &m).unwrap().render(OutputFormat::Json));
}

#[test]
fn rank_report() {
    let p = profile(3, 3, "012 122 bbb");
    let m = proxygrade::proxy::majority_grade_mechanism(p.shape());
    let r = cmd_rank(&p, &m, false).unwrap();
    assert_eq!(r.json["tiers"][0]["candidates"][0], "c2");
    assert_eq!(r.json["excluded"][0], "c3");
    assert_eq!(r.json["tiers"][1]["range"], serde_json::json!(["1", "0", "2"]));
}

#[test]
fn check_report_and_witness_files() {
    let sp = InstanceSpace::new(3, 1, scale012(), standard_votes()).unwrap();
    let m = proxygrade::proxy::Mechanism::uniform(
        sp.shape(),
        ProxyFn::None,
        SelectorFn::table(vec![1, 1, 3]).unwrap(),
        AbsenteePolicy::RemoveFromPool,
    );
    let r = cmd_check(&m, &sp, &[Axiom::Sp, Axiom::Oc], &CheckOptions::default()).unwrap();
    assert!(r.failed);
    assert_eq!(r.json["verdicts"][0]["holds"], true);
    assert_eq!(r.json["verdicts"][1]["holds"], false);
    assert_eq!(r.witness_files.len(), 1);
    let (name, body) = &r.witness_files[0];
    assert_eq!(name, "OC.json");
    let base = parse_election(body.as_bytes()).unwrap();
    let pinned = InstanceSpace::pinned(base, standard_votes()).unwrap();
    let again = cmd_check(&m, &pinned, &[Axiom::Oc], &CheckOptions::default()).unwrap();
    assert!(again.failed);
}
