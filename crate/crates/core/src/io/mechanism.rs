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

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{from_json, RationalText};
use crate::model::ElectionShape;
use crate::order_stats::SelectorFn;
use crate::proxy::{AbsenteePolicy, Mechanism, ProxyFn};
use crate::{Error, Result};

/// On-disk mechanism. Every field is optional; the defaults give the
/// majority grade.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismFile {
    /// Selector of every candidate without an entry in `selectors`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector: Option<SelectorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub selectors: BTreeMap<String, SelectorSpec>,
    /// Proxy of every cell without an entry in `proxies`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proxy: Option<ProxySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub proxies: Vec<ProxyOverride>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absentee_policy: Option<PolicySpec>,
    #[serde(default)]
    pub reinforce_absentees: bool,
}

/// `"lower_median" | "upper_median" | "min" | "max"` or a table `[g(1), ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SelectorSpec {
    Named(String),
    Table(Vec<usize>),
}

/// `"none" | "own_average"` or `{"constant": "p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProxySpec {
    Named(String),
    Constant { constant: RationalText },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxyOverride {
    pub voter: String,
    pub candidate: String,
    pub proxy: ProxySpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicySpec {
    RemoveFromPool,
    ProxyAnyway,
}

impl SelectorSpec {
    pub fn resolve(&self) -> Result<SelectorFn> {
        match self {
            SelectorSpec::Named(name) => match name.as_str() {
                "lower_median" => Ok(SelectorFn::LowerMedian),
                "upper_median" => Ok(SelectorFn::UpperMedian),
                "min" => Ok(SelectorFn::Min),
                "max" => Ok(SelectorFn::Max),
                other => Err(Error::InvalidSelector(format!("unknown selector `{other}`"))),
            },
            SelectorSpec::Table(t) => SelectorFn::table(t.clone()),
        }
    }

    pub fn from_selector(g: &SelectorFn) -> SelectorSpec {
        match g {
            SelectorFn::Table(t) => SelectorSpec::Table(t.clone()),
            named => SelectorSpec::Named(named.to_string()),
        }
    }
}

impl ProxySpec {
    pub fn resolve(&self, shape: &ElectionShape) -> Result<ProxyFn> {
        match self {
            ProxySpec::Named(name) => match name.as_str() {
                "none" => Ok(ProxyFn::None),
                "own_average" => Ok(ProxyFn::OwnAverage),
                other => Err(Error::Schema { path: "proxy".into(), message: format!("unknown proxy `{other}`") }),
            },
            ProxySpec::Constant { constant } => {
                if !shape.scale().contains(constant.0) {
                    return Err(Error::ProxyOutOfRange {
                        voter: "*".into(),
                        candidate: "*".into(),
                        value: constant.0,
                    });
                }
                Ok(ProxyFn::Constant(constant.0))
            }
        }
    }
}

impl MechanismFile {
    /// Builds the mechanism for an electorate; also returns whether
    /// rankings reinforce absentees.
    pub fn to_mechanism(&self, shape: &ElectionShape) -> Result<(Mechanism, bool)> {
        let selector = self.selector.as_ref().map(SelectorSpec::resolve).transpose()?.unwrap_or(SelectorFn::LowerMedian);
        let proxy = self.proxy.as_ref().map(|p| p.resolve(shape)).transpose()?.unwrap_or(ProxyFn::None);
        let policy = match self.absentee_policy.unwrap_or(PolicySpec::RemoveFromPool) {
            PolicySpec::RemoveFromPool => AbsenteePolicy::RemoveFromPool,
            PolicySpec::ProxyAnyway => AbsenteePolicy::ProxyAnyway,
        };
        let mut m = Mechanism::uniform(shape, proxy, selector, policy);
        for (candidate, spec) in &self.selectors {
            m.set_selector(shape.candidate_index(candidate)?, spec.resolve()?);
        }
        for o in &self.proxies {
            let (i, j) = (shape.voter_index(&o.voter)?, shape.candidate_index(&o.candidate)?);
            let proxy = o.proxy.resolve(shape).map_err(|e| match e {
                Error::ProxyOutOfRange { value, .. } => {
                    Error::ProxyOutOfRange { voter: o.voter.clone(), candidate: o.candidate.clone(), value }
                }
                other => other,
            })?;
            m.set_proxy(i, j, proxy);
        }
        Ok((m, self.reinforce_absentees))
    }
}

/// Parses a mechanism file against an electorate.
pub fn parse_mechanism(bytes: &[u8], shape: &ElectionShape) -> Result<(Mechanism, bool)> {
    from_json::<MechanismFile>(bytes)?.to_mechanism(shape)
}
