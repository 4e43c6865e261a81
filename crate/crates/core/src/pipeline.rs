//! End-to-end run over one semigroup, twist and representation: every
//! construction, every identification check, the mirror search and the
//! algebra checks, as an ordered list of stages.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{build_algebra, verify_opposite_identifications};
use crate::characters::enumerate_characters;
use crate::chirality::{self_oppositeness_verdict, WeightFunction};
use crate::error::Result;
use crate::germ::{
    build_germ_groupoid, canonical_universal_mirror, germ_to_universal, verify_mirror_square,
};
use crate::groupoid_iso::TwistedGroupoid;
use crate::partial::Representation;
use crate::search::SearchLimits;
use crate::semigroup::{validate_inverse_semigroup, InverseSemigroup};
use crate::twist::{induce_cocycle, validate_twist_data, verify_universal_bridge, TwistData};

pub const STAGES: [&str; 10] = [
    "validation",
    "characters",
    "universal groupoid",
    "germ groupoid",
    "twist validation",
    "cocycle induction",
    "bridge check",
    "mirror search",
    "index",
    "algebra check",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub status: Status,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub stages: Vec<Stage>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.status != Status::Failed)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({"format": 1, "passed": self.passed(), "stages": self.stages})
    }

    /// One line per stage, then its detail fields indented.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            let status = match s.status {
                Status::Passed => "passed",
                Status::Failed => "FAILED",
                Status::Skipped => "skipped",
            };
            let _ = writeln!(out, "{}: {status}", s.name);
            if let Value::Object(map) = &s.detail {
                for (k, v) in map {
                    let _ = writeln!(out, "  {k}: {v}");
                }
            }
        }
        let _ = writeln!(out, "passed: {}", self.passed());
        out
    }
}

struct Builder {
    stages: Vec<Stage>,
}

impl Builder {
    fn push(&mut self, name: &'static str, status: Status, detail: Value) {
        debug_assert_eq!(STAGES[self.stages.len()], name);
        self.stages.push(Stage { name, status, detail });
    }

    fn pass(&mut self, name: &'static str, ok: bool, detail: Value) {
        let status = if ok { Status::Passed } else { Status::Failed };
        self.push(name, status, detail);
    }

    fn skip_rest(&mut self, reason: &str) {
        while self.stages.len() < STAGES.len() {
            let name = STAGES[self.stages.len()];
            self.push(name, Status::Skipped, json!({"reason": reason}));
        }
    }

    fn fail(&mut self, name: &'static str, err: impl std::fmt::Display) {
        self.push(name, Status::Failed, json!({"error": err.to_string()}));
        self.skip_rest(&format!("{name} failed"));
    }
}

/// Runs every stage in order. Errors inside a stage become a failed stage
/// with the error text; later stages are then skipped.
pub fn run_pipeline(
    s: &InverseSemigroup,
    omega: &TwistData,
    rho: &Representation,
    weights: &WeightFunction,
    limits: SearchLimits,
) -> Result<PipelineReport> {
    let mut b = Builder { stages: Vec::new() };
    macro_rules! attempt {
        ($name:expr, $e:expr) => {
            match $e {
                Ok(v) => v,
                Err(err) => {
                    b.fail($name, err);
                    return Ok(PipelineReport { stages: b.stages });
                }
            }
        };
    }

    let report = attempt!("validation", validate_inverse_semigroup(&s.rows(), s.star_table()));
    let valid = report.is_valid();
    b.pass(
        "validation",
        valid,
        json!({"elements": s.order(), "idempotents": s.idempotents().len(), "violations": report.violations.len()}),
    );
    if !valid {
        b.skip_rest("validation failed");
        return Ok(PipelineReport { stages: b.stages });
    }

    let space = attempt!("characters", enumerate_characters(s));
    b.pass("characters", true, json!({"characters": space.len()}));

    let um = attempt!("universal groupoid", canonical_universal_mirror(s));
    let ug = um.universal.groupoid();
    b.pass(
        "universal groupoid",
        um.universal.check_bisections().is_ok(),
        json!({
            "units": ug.unit_count(),
            "arrows": ug.arrow_count(),
            "mirror_identification": "verified",
        }),
    );

    let germ = attempt!("germ groupoid", build_germ_groupoid(s, rho));
    let functor = attempt!("germ groupoid", germ_to_universal(&germ, rho, &um.universal));
    b.pass(
        "germ groupoid",
        germ.check_bisections().is_ok(),
        json!({
            "units": germ.groupoid().unit_count(),
            "arrows": germ.groupoid().arrow_count(),
            "functor_to_universal": "verified",
            "functor_injective": functor.is_injective_on_arrows(),
            "functor_surjective": functor.is_surjective_on_arrows(ug),
        }),
    );

    let twist_report = attempt!("twist validation", validate_twist_data(s, omega));
    let twist_ok = twist_report.is_valid();
    b.pass(
        "twist validation",
        twist_ok,
        json!({
            "trivial": omega.is_trivial(),
            "violations": twist_report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
    );
    if !twist_ok {
        b.skip_rest("twist validation failed");
        return Ok(PipelineReport { stages: b.stages });
    }

    let sigma = attempt!("cocycle induction", induce_cocycle(&um.universal, omega));
    let sigma_germ = attempt!("cocycle induction", induce_cocycle(&germ, omega));
    b.pass(
        "cocycle induction",
        true,
        json!({
            "universal_values": sigma.distinct_values(),
            "germ_values": sigma_germ.distinct_values(),
        }),
    );

    let bridge = attempt!("bridge check", verify_universal_bridge(s, omega));
    let square = attempt!("bridge check", verify_mirror_square(s, rho));
    b.pass(
        "bridge check",
        bridge.passed() && square.passed(),
        json!({
            "universal_bridge": bridge,
            "mirror_square": square,
        }),
    );

    let tg = attempt!("mirror search", TwistedGroupoid::new(ug.clone(), sigma));
    let verdict = attempt!("mirror search", self_oppositeness_verdict(&tg, weights, limits));
    b.pass(
        "mirror search",
        true,
        json!({
            "mir_count": verdict.report.mir_count,
            "search_nodes": verdict.report.search_nodes,
            "log_hash": verdict.report.log_hash,
        }),
    );
    b.pass("index", true, verdict.report.to_json());

    let alg = attempt!("algebra check", build_algebra(&tg));
    let opposite = attempt!("algebra check", verify_opposite_identifications(&tg, limits));
    let pullback_ok = verdict.pullback.as_ref().map_or(true, |p| p.passed());
    b.pass(
        "algebra check",
        pullback_ok && opposite.passed(),
        json!({
            "dim": alg.dim(),
            "witness_pullback": verdict.pullback.as_ref().map(|p| p.passed()),
            "opposite_reversed_twist": opposite.reversed_twist_equal,
            "opposite_conjugate_twist": opposite.conjugate_twist.isomorphic,
            "scope": opposite.conjugate_twist.scope,
        }),
    );
    Ok(PipelineReport { stages: b.stages })
}
