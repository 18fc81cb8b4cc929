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

//! Grading and ranking for elections with restricted voting rights.
//!
//! Voters may grade, vote blank, abstain, or be ineligible for each
//! candidate. The crate provides:
//!
//! * [`model`]: grade scales, votes and immutable profiles.
//! * [`order_stats`]: exact multiset order statistics and selector functions.
//! * [`proxy`]: phantom-proxy mechanisms (real grades plus proxy votes,
//!   then an order statistic), including the majority grade.
//! * [`maxmin`]: the max-min phantom representation of strategy-proof rules
//!   and the anonymous median form.
//! * [`ranking`]: voting ranges and the lexicographic ranking built on them.
//! * [`axioms`]: exhaustive, black-box checking of the axioms with
//!   replayable witnesses.
//! * [`io`]: JSON/CSV formats and the report builders behind the CLI.
//!
//! All arithmetic is exact over 64-bit rationals.

pub mod axioms;
pub mod error;
pub mod io;
pub mod maxmin;
pub mod model;
pub mod order_stats;
pub mod proxy;
pub mod ranking;
pub mod surface;

pub use error::{Error, Result};

/// Exact grade value.
pub type Rational = num_rational::Rational64;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}
