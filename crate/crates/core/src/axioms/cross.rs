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

//! Known implications between properties, checked on computed verdicts.

use std::collections::BTreeMap;

use super::{check_many, Axiom, CheckOptions, GradingFn, InstanceSpace};
use crate::Result;

/// One implication or equivalence and whether the verdicts respect it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub relation: &'static str,
    pub consistent: bool,
    /// The verdicts involved, e.g. `SC=holds P=fails`.
    pub detail: String,
}

/// Checks every relation that applies to `f` over `space`:
///
/// * U and Pareto are equivalent,
/// * P implies SC,
/// * StrongSP is equivalent to SP, FP and JD together,
///
/// and for phantom-proxy mechanisms additionally
///
/// * SC and P are equivalent,
/// * BV and OC together imply P.
pub fn theorem_cross_checks(f: &dyn GradingFn, space: &InstanceSpace, opts: &CheckOptions) -> Result<Vec<CrossCheck>> {
    let mut axioms = vec![Axiom::U, Axiom::Pareto, Axiom::P, Axiom::Sc, Axiom::StrongSp, Axiom::Sp, Axiom::Fp, Axiom::Jd];
    if f.is_mechanism() {
        axioms.extend([Axiom::Bv, Axiom::Oc]);
    }
    let verdicts: BTreeMap<Axiom, bool> =
        check_many(&axioms, f, space, opts)?.into_iter().map(|v| (v.axiom, v.holds())).collect();
    let holds = |a: Axiom| verdicts[&a];
    let detail = |list: &[Axiom]| {
        list.iter()
            .map(|a| format!("{}={}", a, if holds(*a) { "holds" } else { "fails" }))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = vec![
        CrossCheck {
            relation: "U <=> Pareto",
            consistent: holds(Axiom::U) == holds(Axiom::Pareto),
            detail: detail(&[Axiom::U, Axiom::Pareto]),
        },
        CrossCheck {
            relation: "P => SC",
            consistent: !holds(Axiom::P) || holds(Axiom::Sc),
            detail: detail(&[Axiom::P, Axiom::Sc]),
        },
        CrossCheck {
            relation: "StrongSP <=> SP & FP & JD",
            consistent: holds(Axiom::StrongSp) == (holds(Axiom::Sp) && holds(Axiom::Fp) && holds(Axiom::Jd)),
            detail: detail(&[Axiom::StrongSp, Axiom::Sp, Axiom::Fp, Axiom::Jd]),
        },
    ];
    if f.is_mechanism() {
        out.push(CrossCheck {
            relation: "SC <=> P",
            consistent: holds(Axiom::Sc) == holds(Axiom::P),
            detail: detail(&[Axiom::Sc, Axiom::P]),
        });
        out.push(CrossCheck {
            relation: "BV & OC => P",
            consistent: !(holds(Axiom::Bv) && holds(Axiom::Oc)) || holds(Axiom::P),
            detail: detail(&[Axiom::Bv, Axiom::Oc, Axiom::P]),
        });
    }
    Ok(out)
}
