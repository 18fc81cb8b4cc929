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

//! File formats and reports.
//!
//! Elections and mechanisms are JSON documents; see [`ElectionFile`] and
//! [`MechanismFile`]. Elections can also be imported from CSV with one
//! `voter,candidate,value` row per cell. Reports come out as canonical JSON
//! (sorted keys, rationals as `"p/q"` strings with a decimal companion) or
//! as aligned text tables.

mod election;
mod mechanism;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use election::{parse_election, parse_election_csv, render_election, BallotCell, ElectionFile, ScaleSpec};
pub use mechanism::{parse_mechanism, MechanismFile, PolicySpec, ProxyOverride, ProxySpec, SelectorSpec};
pub use report::{cmd_check, cmd_grade, cmd_rank, OutputFormat, Report};

use crate::{Error, Rational, Result};

/// A rational read from a JSON integer or a `"p/q"` string and written as
/// a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl fmt::Display for RationalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for RationalText {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<Rational>()
            .map(RationalText)
            .map_err(|_| Error::Schema { path: String::new(), message: format!("`{s}` is not a rational p/q") })
    }
}

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(RationalText(Rational::from_integer(n))),
            Raw::Text(s) => s.parse().map_err(|_| serde::de::Error::custom(format!("`{s}` is not a rational p/q"))),
        }
    }
}

/// Exact `"p/q"` form of a rational.
pub fn rational_text(r: Rational) -> String {
    r.to_string()
}

/// Nearest `f64` to a rational.
pub fn rational_decimal(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn from_json<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| Error::Schema { path: ".".into(), message: e.to_string() })?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_from_json() {
        let r: RationalText = serde_json::from_str("\"3/6\"").unwrap();
        assert_eq!(r.0, Rational::new(1, 2));
        let r: RationalText = serde_json::from_str("4").unwrap();
        assert_eq!(r.0, Rational::from_integer(4));
        assert!(serde_json::from_str::<RationalText>("\"half\"").is_err());
        assert_eq!(serde_json::to_string(&RationalText(Rational::new(-2, 4))).unwrap(), "\"-1/2\"");
    }
}
