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

//! Error type shared by every module of the crate.

use crate::Rational;

/// Everything that can go wrong while building, grading, ranking or checking.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid grade scale: {0}")]
    InvalidScale(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("unknown voter `{0}`")]
    UnknownVoter(String),
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("unknown grade label `{0}`")]
    UnknownLabel(String),
    #[error("cell ({voter}, {candidate}) is listed both as ineligible and as a grade")]
    GradeOnIneligibleCell { voter: String, candidate: String },
    #[error("cell ({voter}, {candidate}) is listed more than once")]
    DuplicateCell { voter: String, candidate: String },
    #[error("voter `{voter}` is not eligible for `{candidate}` and cannot grant themselves a vote")]
    IllegalEligibilityGrant { voter: String, candidate: String },
    #[error("profile does not match the election shape: {0}")]
    ShapeMismatch(String),
    #[error("order statistic {k} requested from a multiset of size {len}")]
    IndexOutOfRange { k: usize, len: usize },
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error("selector is defined up to pool size {bound} but a pool of size {k} occurred")]
    SelectorDomainExceeded { k: usize, bound: usize },
    #[error("proxy for ({voter}, {candidate}) returned {value}, outside the output interval")]
    ProxyOutOfRange { voter: String, candidate: String, value: Rational },
    #[error("selectors differ between candidates; ranking needs a single selector")]
    NotFair,
    #[error("selector is not outer-consistent up to pool size {bound} (first violation at {first:?})")]
    NotOuterConsistent { bound: usize, first: (usize, usize) },
    #[error("{count} graders exceed the subset-enumeration limit of {limit}")]
    TooManyGraders { count: usize, limit: usize },
    #[error("phantom value undefined for a non-empty grader set")]
    UndefinedPhantom,
    #[error("check needs {required} predicate evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("{0} needs voting pools; pass a mechanism rather than a black-box function")]
    NeedsMechanism(String),
    #[error("empty voting pool")]
    EmptyPool,
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
