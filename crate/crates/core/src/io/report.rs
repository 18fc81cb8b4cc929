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

use serde_json::{json, Value};

use super::{rational_decimal, rational_text, render_election, ElectionFile};
use crate::axioms::{check_many, Axiom, CheckOptions, GradingFn, InstanceSpace, Witness};
use crate::model::{Profile, Vote};
use crate::proxy::{Mechanism, PoolEntry, Source};
use crate::ranking::rank;
use crate::{Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Table,
}

/// Output of one command.
#[derive(Debug, Clone)]
pub struct Report {
    /// Canonical form: object keys sorted, rationals as strings.
    pub json: Value,
    pub table: String,
    /// Whether some checked property fails.
    pub failed: bool,
    /// Election files reproducing each failure, keyed by file name.
    pub witness_files: Vec<(String, String)>,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
            OutputFormat::Table => self.table.clone(),
        }
    }
}

fn grade_json(g: Option<Rational>) -> Value {
    match g {
        Some(r) => json!({ "exact": rational_text(r), "decimal": rational_decimal(r) }),
        None => Value::Null,
    }
}

fn grade_cell(g: Option<Rational>) -> String {
    g.map_or_else(|| "ungraded".into(), |r| format!("{} ({:.4})", rational_text(r), rational_decimal(r)))
}

fn source_name(s: Source) -> &'static str {
    match s {
        Source::Grade => "grade",
        Source::Proxy => "proxy",
        Source::Absentee => "absentee",
    }
}

fn entry_json(p: &Profile, e: &PoolEntry) -> Value {
    json!({ "voter": p.shape().voters()[e.voter], "value": rational_text(e.value), "source": source_name(e.source) })
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([header[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Grades with pools and provenance.
pub fn cmd_grade(p: &Profile, m: &Mechanism) -> Result<Report> {
    let result = m.grade(p)?;
    let shape = p.shape();
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for c in &result.candidates {
        let name = &shape.candidates()[c.candidate];
        items.push(json!({
            "candidate": name,
            "grade": grade_json(c.grade),
            "pool": c.pool.entries().iter().map(|e| entry_json(p, e)).collect::<Vec<_>>(),
        }));
        let pool = c
            .pool
            .entries()
            .iter()
            .map(|e| {
                let mark = if e.source == Source::Proxy { "*" } else { "" };
                format!("{}={}{}", shape.voters()[e.voter], rational_text(e.value), mark)
            })
            .collect::<Vec<_>>()
            .join(" ");
        rows.push(vec![name.clone(), grade_cell(c.grade), pool]);
    }
    let text = table(&["candidate", "grade", "pool (* = proxy)"], &rows);
    Ok(Report { json: json!({ "candidates": items }), table: text, failed: false, witness_files: Vec::new() })
}

/// Ranking with voting ranges, tiers and excluded candidates.
pub fn cmd_rank(p: &Profile, m: &Mechanism, reinforce_absentees: bool) -> Result<Report> {
    let outcome = rank(m, p, reinforce_absentees)?;
    let names = p.shape().candidates();
    let range_of = |c: usize| -> Vec<String> {
        outcome.ranges[c].as_ref().map(|r| r.values.iter().map(|v| rational_text(*v)).collect()).unwrap_or_default()
    };
    let mut tiers = Vec::new();
    let mut rows = Vec::new();
    for (k, tier) in outcome.tiers.iter().enumerate() {
        let members: Vec<&String> = tier.iter().map(|&c| &names[c]).collect();
        tiers.push(json!({ "rank": k + 1, "candidates": members, "range": range_of(tier[0]) }));
        for &c in tier {
            let grade = outcome.ranges[c].as_ref().and_then(|r| r.values.first().copied());
            rows.push(vec![(k + 1).to_string(), names[c].clone(), grade_cell(grade), range_of(c).join(" ")]);
        }
    }
    let excluded: Vec<&String> = outcome.excluded.iter().map(|&c| &names[c]).collect();
    let mut text = table(&["rank", "candidate", "grade", "voting range"], &rows);
    if !excluded.is_empty() {
        text.push_str(&format!(
            "excluded (empty pool): {}\n",
            excluded.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ));
    }
    let json = json!({
        "tiers": tiers,
        "excluded": excluded,
        "pool_size": outcome.pool_size,
        "reinforce_absentees": reinforce_absentees,
    });
    Ok(Report { json, table: text, failed: false, witness_files: Vec::new() })
}

fn vote_name(p: &Profile, v: Vote) -> String {
    match v {
        Vote::Grade(l) => p.scale().label(l).to_string(),
        Vote::Blank => "blank".into(),
        Vote::Abstain => "abstain".into(),
        Vote::Ineligible => "ineligible".into(),
    }
}

fn witness_json(w: &Witness) -> Value {
    let derived: Vec<Value> = w
        .instance
        .derived_profiles(&w.base)
        .into_iter()
        .map(|(role, p)| json!({ "role": role, "election": ElectionFile::from_profile(&p) }))
        .collect();
    json!({
        "instance": w.instance.describe(&w.base),
        "observed": w.observed,
        "required": w.required,
        "election": ElectionFile::from_profile(&w.base),
        "derived": derived,
    })
}

/// Checks `axioms` for `f` over `space`. Every failure comes with a
/// witness election file named `<axiom>.json`; checking that file alone
/// fails again.
pub fn cmd_check(f: &dyn GradingFn, space: &InstanceSpace, axioms: &[Axiom], opts: &CheckOptions) -> Result<Report> {
    let verdicts = check_many(axioms, f, space, opts)?;
    let shape = space.shape();
    let base = space.profile(vec![Vote::Blank; shape.n_voters() * shape.n_candidates()]);
    let alphabet: Vec<String> = space.alphabet().iter().map(|v| vote_name(&base, *v)).collect();
    let mut items = Vec::new();
    let mut rows = Vec::new();
    let mut witness_files = Vec::new();
    for v in &verdicts {
        let mut item = json!({ "axiom": v.axiom.name(), "holds": v.holds(), "instances": v.instances.to_string() });
        let detail = match &v.witness {
            Some(w) => {
                item["witness"] = witness_json(w);
                witness_files.push((format!("{}.json", v.axiom.name()), render_election(&w.base)));
                w.to_string()
            }
            None => String::new(),
        };
        items.push(item);
        rows.push(vec![
            v.axiom.name().to_string(),
            if v.holds() { "holds" } else { "fails" }.to_string(),
            v.instances.to_string(),
            detail,
        ]);
    }
    let json = json!({
        "function": f.name(),
        "space": {
            "voters": shape.voters(),
            "candidates": shape.candidates(),
            "labels": shape.scale().labels(),
            "alphabet": alphabet,
            "pinned": space.is_pinned(),
            "base_profiles": space.base_count().to_string(),
        },
        "verdicts": items,
    });
    let failed = verdicts.iter().any(|v| !v.holds());
    let text = table(&["axiom", "verdict", "instances", "witness"], &rows);
    Ok(Report { json, table: text, failed, witness_files })
}
