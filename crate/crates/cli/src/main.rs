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

//! `proxygrade`: grade, rank and audit elections from the command line.
//!
//! Exit status is 0 on success, 2 on any error and 3 when `check` finds a
//! violated property.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use proxygrade::axioms::{
    standard_alphabet, ArithmeticMean, Axiom, CheckOptions, ConstantGrade, GradingFn, InstanceSpace, TrimmedMean,
    DEFAULT_BUDGET,
};
use proxygrade::io::{
    cmd_check, cmd_grade, cmd_rank, parse_election, parse_election_csv, parse_mechanism, OutputFormat, Report,
};
use proxygrade::model::{ElectionShape, GradeScale, Profile, Vote};
use proxygrade::proxy::{majority_grade_mechanism, Mechanism};
use proxygrade::Rational;

#[derive(Parser)]
#[command(name = "proxygrade", version, about = "Phantom-proxy grading, ranking and property checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grade every candidate and show the pools.
    Grade(GradeArgs),
    /// Rank candidates by their voting ranges.
    Rank(RankArgs),
    /// Check properties exhaustively over a space of profiles.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Table,
}

impl From<Output> for OutputFormat {
    fn from(o: Output) -> Self {
        match o {
            Output::Json => OutputFormat::Json,
            Output::Table => OutputFormat::Table,
        }
    }
}

#[derive(Args)]
struct ElectionArgs {
    /// Election file (JSON, or CSV with `voter,candidate,value` rows).
    #[arg(long)]
    election: PathBuf,
    /// Grade labels, lowest first; required for CSV elections.
    #[arg(long, value_delimiter = ',')]
    labels: Vec<String>,
    /// Mechanism file; the majority grade when omitted.
    #[arg(long)]
    mechanism: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    output: Output,
}

#[derive(Args)]
struct GradeArgs {
    #[command(flatten)]
    election: ElectionArgs,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    election: ElectionArgs,
    /// Add the grade once per unrepresented abstainer before ranking.
    #[arg(long)]
    reinforce_absentees: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Explore instances rooted at this election only.
    #[arg(long)]
    election: Option<PathBuf>,
    /// Mechanism under test; see also `--aggregator`.
    #[arg(long, conflicts_with = "aggregator")]
    mechanism: Option<PathBuf>,
    /// Built-in function under test: majority, mean, trimmed-mean or
    /// constant:<p/q>.
    #[arg(long)]
    aggregator: Option<String>,
    /// Comma-separated properties; all but IC by default.
    #[arg(long, value_delimiter = ',')]
    axioms: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Voters of the generated space (ignored with `--election`).
    #[arg(long, default_value_t = 3)]
    voters: usize,
    /// Candidates of the generated space (ignored with `--election`).
    #[arg(long, default_value_t = 2)]
    candidates: usize,
    /// Grade labels of the generated space, lowest first.
    #[arg(long, value_delimiter = ',', default_values_t = ["0".to_string(), "1".to_string(), "2".to_string()])]
    labels: Vec<String>,
    /// Cell values: any of `grades`, `blank`, `abstain`, `ineligible`.
    #[arg(long, value_delimiter = ',', default_values_t = ["grades".to_string(), "blank".to_string(), "abstain".to_string()])]
    alphabet: Vec<String>,
    /// Write one replayable election file per violated property here.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    output: Output,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_election(path: &Path, labels: &[String]) -> Result<Profile> {
    let bytes = read(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let profile = if is_csv {
        if labels.is_empty() {
            bail!("CSV elections need --labels");
        }
        parse_election_csv(&bytes, &GradeScale::with_default_positions(labels.to_vec())?)?
    } else {
        parse_election(&bytes)?
    };
    Ok(profile)
}

fn load_mechanism(path: Option<&Path>, shape: &ElectionShape) -> Result<(Mechanism, bool)> {
    match path {
        Some(p) => Ok(parse_mechanism(&read(p)?, shape).with_context(|| format!("in {}", p.display()))?),
        None => Ok((majority_grade_mechanism(shape), false)),
    }
}

fn grade(args: &GradeArgs) -> Result<Report> {
    let e = &args.election;
    let profile = load_election(&e.election, &e.labels)?;
    let (m, _) = load_mechanism(e.mechanism.as_deref(), profile.shape())?;
    Ok(cmd_grade(&profile, &m)?)
}

fn rank(args: &RankArgs) -> Result<Report> {
    let e = &args.election;
    let profile = load_election(&e.election, &e.labels)?;
    let (m, reinforce) = load_mechanism(e.mechanism.as_deref(), profile.shape())?;
    Ok(cmd_rank(&profile, &m, reinforce || args.reinforce_absentees)?)
}

fn parse_alphabet(names: &[String], scale: &GradeScale) -> Result<Vec<Vote>> {
    let mut out = Vec::new();
    for name in names {
        match name.as_str() {
            "grades" => out.extend((0..scale.len()).map(Vote::Grade)),
            "blank" => out.push(Vote::Blank),
            "abstain" => out.push(Vote::Abstain),
            "ineligible" => out.push(Vote::Ineligible),
            label => match scale.label_index(label) {
                Some(l) => out.push(Vote::Grade(l)),
                None => bail!("unknown alphabet entry `{label}`"),
            },
        }
    }
    Ok(out)
}

fn check(args: &CheckArgs) -> Result<Report> {
    let space = match &args.election {
        Some(path) => {
            let profile = load_election(path, &[])?;
            let alphabet = standard_alphabet(profile.scale());
            InstanceSpace::pinned(profile, alphabet)?
        }
        None => {
            let scale = GradeScale::with_default_positions(args.labels.clone())?;
            let alphabet = parse_alphabet(&args.alphabet, &scale)?;
            InstanceSpace::new(args.voters, args.candidates, scale, alphabet)?
        }
    };
    let shape = space.shape().clone();
    let f: Box<dyn GradingFn> = match (&args.mechanism, args.aggregator.as_deref()) {
        (Some(path), _) => Box::new(load_mechanism(Some(path), &shape)?.0),
        (None, None | Some("majority")) => Box::new(majority_grade_mechanism(&shape)),
        (None, Some("mean")) => Box::new(ArithmeticMean),
        (None, Some("trimmed-mean")) => Box::new(TrimmedMean { trim: 1 }),
        (None, Some(other)) => match other.strip_prefix("constant:") {
            Some(v) => Box::new(ConstantGrade {
                value: v.parse::<Rational>().map_err(|_| anyhow::anyhow!("`{v}` is not a rational"))?,
            }),
            None => bail!("unknown aggregator `{other}`"),
        },
    };
    let axioms: Vec<Axiom> = if args.axioms.is_empty() {
        Axiom::ALL
            .into_iter()
            .filter(|a| *a != Axiom::Ic && (*a != Axiom::F || f.is_mechanism()))
            .collect()
    } else {
        args.axioms.iter().map(|a| a.parse()).collect::<Result<_, _>>()?
    };
    let opts = CheckOptions { budget: args.budget, ..CheckOptions::default() };
    let report = cmd_check(f.as_ref(), &space, &axioms, &opts)?;
    if let Some(dir) = &args.witness_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for (name, contents) in &report.witness_files {
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::Grade(a) => (grade(a), a.election.output),
        Command::Rank(a) => (rank(a), a.election.output),
        Command::Check(a) => (check(a), a.output),
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(output.into()));
            if report.failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
