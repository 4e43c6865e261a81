//! Chirality indices and mirror verdicts at the semigroup, represented and
//! groupoid levels.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{CheckedAdd, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{build_algebra, pullback_map, PullbackReport};
use crate::error::{Error, Result};
use crate::groupoid_iso::{mirror_set_groupoid, GroupoidIso, TwistedGroupoid};
use crate::isotopy::{
    mirror_set_represented, mirror_set_semigroup, Isotopism, RepresentedSemigroup, INTERPRETATION,
};
use crate::search::{SearchLimits, SearchOutcome};
use crate::semigroup::DecoratedSemigroup;

pub type Weight = Ratio<i64>;

/// Positive weights on mirror morphisms, keyed by their canonical serialization.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum WeightFunction {
    /// Every morphism weighs 1, so the index is `|Mir|`.
    #[default]
    Constant,
    Table(BTreeMap<String, Weight>),
}

impl WeightFunction {
    pub fn table(map: BTreeMap<String, Weight>) -> Result<Self> {
        if let Some((key, _)) = map.iter().find(|(_, w)| **w <= Weight::zero()) {
            return Err(Error::NonPositiveWeight { key: key.clone() });
        }
        Ok(WeightFunction::Table(map))
    }

    /// `{"<key>": [num, den], ...}`
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Format("weights must be a JSON object".into()))?;
        let mut map = BTreeMap::new();
        for (key, v) in obj {
            let pair: [i64; 2] = serde_json::from_value(v.clone())
                .map_err(|e| Error::Format(format!("weight {key}: {e}")))?;
            if pair[1] == 0 {
                return Err(Error::Format(format!("weight {key} has zero denominator")));
            }
            map.insert(key.clone(), Weight::new(pair[0], pair[1]));
        }
        Self::table(map)
    }

    pub fn weight(&self, key: &str) -> Result<Weight> {
        match self {
            WeightFunction::Constant => Ok(Weight::from_integer(1)),
            WeightFunction::Table(map) => {
                let w = *map.get(key).ok_or_else(|| Error::MissingWeight(key.to_string()))?;
                if w <= Weight::zero() {
                    return Err(Error::NonPositiveWeight { key: key.to_string() });
                }
                Ok(w)
            }
        }
    }
}

/// `k = Σ_{Φ ∈ Mir} w(Φ)`, exact.
pub fn chirality_index<I, S>(keys: I, w: &WeightFunction) -> Result<Weight>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    keys.into_iter().try_fold(Weight::zero(), |acc, key| {
        acc.checked_add(&w.weight(key.as_ref())?)
            .ok_or_else(|| Error::Internal("chirality index overflowed".into()))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Semigroup,
    Represented,
    Groupoid,
}

/// Data for replaying an exhausted search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiralityCertificate {
    pub search_nodes: u64,
    pub log_hash: String,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MirrorReport {
    pub level: Level,
    pub mir_count: usize,
    pub index: Weight,
    pub chiral: bool,
    pub witness: Option<Value>,
    pub search_nodes: u64,
    pub log_hash: String,
    /// Present exactly when the mirror set is empty.
    pub certificate: Option<ChiralityCertificate>,
}

impl MirrorReport {
    fn build<T: Serialize>(
        level: Level,
        outcome: &SearchOutcome<T>,
        keys: Vec<String>,
        w: &WeightFunction,
    ) -> Result<Self> {
        let index = chirality_index(&keys, w)?;
        let chiral = outcome.results.is_empty();
        if chiral != index.is_zero() {
            return Err(Error::Internal("index vanishes without an empty mirror set".into()));
        }
        let witness = outcome.results.first().map(|r| json!(r));
        let certificate = chiral.then(|| ChiralityCertificate {
            search_nodes: outcome.nodes,
            log_hash: outcome.log_hash.clone(),
            bound: outcome.bound,
        });
        Ok(MirrorReport {
            level,
            mir_count: outcome.results.len(),
            index,
            chiral,
            witness,
            search_nodes: outcome.nodes,
            log_hash: outcome.log_hash.clone(),
            certificate,
        })
    }

    /// `{"mir_count", "index": [n, d], "chiral", "witness", "search_nodes",
    /// "interpretation"}` plus the level, log hash and certificate.
    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "mir_count": self.mir_count,
            "index": [self.index.numer(), self.index.denom()],
            "chiral": self.chiral,
            "witness": self.witness,
            "search_nodes": self.search_nodes,
            "log_hash": self.log_hash,
            "certificate": self.certificate,
            "interpretation": INTERPRETATION,
        })
    }
}

/// `Mir(S, Σ)` and its index.
pub fn semigroup_verdict(
    a: &DecoratedSemigroup,
    w: &WeightFunction,
    limits: SearchLimits,
) -> Result<(MirrorReport, Vec<Isotopism>)> {
    let outcome = mirror_set_semigroup(a, limits)?;
    let keys = outcome.results.iter().map(Isotopism::key).collect();
    let report = MirrorReport::build(Level::Semigroup, &outcome, keys, w)?;
    Ok((report, outcome.results))
}

/// `Mir(S, ρ)` and its index, under the v1 intertwining predicate.
pub fn represented_verdict(
    a: &RepresentedSemigroup,
    w: &WeightFunction,
    limits: SearchLimits,
) -> Result<(MirrorReport, Vec<Isotopism>)> {
    let outcome = mirror_set_represented(a, limits)?;
    let keys = outcome.results.iter().map(|r| r.isotopism.key()).collect();
    let report = MirrorReport::build(Level::Represented, &outcome, keys, w)?;
    let mir = outcome.results.into_iter().map(|r| r.isotopism).collect();
    Ok((report, mir))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupoidVerdict {
    pub report: MirrorReport,
    pub mir: Vec<GroupoidIso>,
    /// The pullback along the first witness, `A(G,σ) → A(G^op,σ#)`.
    pub pullback: Option<PullbackReport>,
}

/// `Mir(G, σ)`, its index, and the algebra identification along the first witness.
pub fn self_oppositeness_verdict(
    tg: &TwistedGroupoid,
    w: &WeightFunction,
    limits: SearchLimits,
) -> Result<GroupoidVerdict> {
    let outcome = mirror_set_groupoid(tg, limits)?;
    let keys = outcome.results.iter().map(GroupoidIso::key).collect();
    let report = MirrorReport::build(Level::Groupoid, &outcome, keys, w)?;
    let pullback = match outcome.results.first() {
        Some(phi) => {
            let from = build_algebra(tg)?;
            let to = build_algebra(&tg.mirror())?;
            Some(pullback_map(phi, &from, &to))
        }
        None => None,
    };
    Ok(GroupoidVerdict {
        report,
        mir: outcome.results,
        pullback,
    })
}

/// Re-runs the groupoid search and compares node count and log hash.
pub fn replay_certificate(
    tg: &TwistedGroupoid,
    certificate: &ChiralityCertificate,
    limits: SearchLimits,
) -> Result<bool> {
    let outcome = mirror_set_groupoid(tg, limits)?;
    Ok(outcome.results.is_empty()
        && outcome.nodes == certificate.search_nodes
        && outcome.log_hash == certificate.log_hash)
}
