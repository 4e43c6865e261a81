//! JSON file formats for semigroups, representations, twists and weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chirality::WeightFunction;
use crate::circle::CircleValue;
use crate::error::{Error, Result};
use crate::partial::{PartialBijection, Representation};
use crate::semigroup::{DecoratedSemigroup, InverseSemigroup, Semigroup};
use crate::twist::TwistData;

fn parse<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

/// `{"elements": [...], "table": [[...]], "star": [...], "decoration": [...]}`.
/// A missing `star` marks a plain semigroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoration: Option<Vec<usize>>,
}

impl SemigroupFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: SemigroupFile = parse("semigroup file", text)?;
        file.check_shape()?;
        Ok(file)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.elements.len();
        if self.table.len() != n {
            return Err(Error::Format(format!(
                "field table: {} rows for {n} elements",
                self.table.len()
            )));
        }
        for (i, row) in self.table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!("field table: row {i} has {} entries", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Format(format!("field table: row {i} has entry {bad} out of range")));
            }
        }
        if let Some(star) = &self.star {
            if star.len() != n {
                return Err(Error::Format(format!("field star: {} entries for {n} elements", star.len())));
            }
            if let Some(&bad) = star.iter().find(|&&x| x >= n) {
                return Err(Error::Format(format!("field star: entry {bad} out of range")));
            }
        }
        if let Some(d) = &self.decoration {
            if let Some(&bad) = d.iter().find(|&&x| x >= n) {
                return Err(Error::Format(format!("field decoration: entry {bad} out of range")));
            }
        }
        Ok(())
    }

    pub fn is_inverse(&self) -> bool {
        self.star.is_some()
    }

    pub fn to_inverse(&self) -> Result<InverseSemigroup> {
        let star = self
            .star
            .as_ref()
            .ok_or_else(|| Error::Format("field star is required for this operation".into()))?;
        InverseSemigroup::new(&self.table, star)?.with_labels(self.elements.clone())
    }

    pub fn to_semigroup(&self) -> Result<Semigroup> {
        Semigroup::new(&self.table)?.with_labels(self.elements.clone())
    }

    pub fn to_decorated(&self) -> Result<DecoratedSemigroup> {
        DecoratedSemigroup::new(self.to_semigroup()?, self.decoration.clone())
    }

    pub fn from_inverse(s: &InverseSemigroup) -> Self {
        SemigroupFile {
            format: Some(1),
            elements: s.labels().to_vec(),
            table: s.rows(),
            star: Some(s.star_table().to_vec()),
            decoration: None,
        }
    }

    pub fn from_decorated(d: &DecoratedSemigroup) -> Self {
        SemigroupFile {
            format: Some(1),
            elements: d.semigroup.labels().to_vec(),
            table: d.semigroup.rows(),
            star: None,
            decoration: d.decoration.as_ref().map(|s| s.iter().copied().collect()),
        }
    }
}

/// `{"carrier": n, "map": {"0": 1, ...}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialBijectionFile {
    pub carrier: usize,
    pub map: BTreeMap<String, usize>,
}

fn map_to_partial(carrier: usize, map: &BTreeMap<String, usize>) -> Result<PartialBijection> {
    let pairs = map
        .iter()
        .map(|(k, &v)| {
            let x: usize = k
                .parse()
                .map_err(|_| Error::Format(format!("field map: key {k:?} is not an index")))?;
            if x >= carrier || v >= carrier {
                return Err(Error::Format(format!("field map: {x} ↦ {v} leaves the carrier")));
            }
            Ok((x, v))
        })
        .collect::<Result<Vec<_>>>()?;
    PartialBijection::from_pairs(carrier, &pairs)
}

fn partial_to_map(f: &PartialBijection) -> BTreeMap<String, usize> {
    f.pairs().into_iter().map(|(x, y)| (x.to_string(), y)).collect()
}

impl PartialBijectionFile {
    pub fn parse(text: &str) -> Result<PartialBijection> {
        let file: PartialBijectionFile = parse("partial bijection file", text)?;
        map_to_partial(file.carrier, &file.map)
    }

    pub fn from_partial(f: &PartialBijection) -> Self {
        PartialBijectionFile {
            carrier: f.carrier(),
            map: partial_to_map(f),
        }
    }
}

/// `{"carrier": n, "images": [{"0": 1, ...}, ...]}`, one map per element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub carrier: usize,
    pub images: Vec<BTreeMap<String, usize>>,
}

impl RepresentationFile {
    pub fn parse(s: &InverseSemigroup, text: &str) -> Result<Representation> {
        let file: RepresentationFile = parse("representation file", text)?;
        let images = file
            .images
            .iter()
            .map(|m| map_to_partial(file.carrier, m))
            .collect::<Result<Vec<_>>>()?;
        Representation::new(s, file.carrier, images)
    }

    pub fn from_representation(rho: &Representation) -> Self {
        RepresentationFile {
            format: Some(1),
            carrier: rho.carrier(),
            images: rho.images().iter().map(partial_to_map).collect(),
        }
    }
}

/// `{"den_lcm": N, "values": [[num, den], ...]}`, row-major over `S × S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub den_lcm: u64,
    pub values: Vec<CircleValue>,
}

impl TwistFile {
    pub fn parse(order: usize, text: &str) -> Result<TwistData> {
        let file: TwistFile = parse("twist file", text)?;
        if file.den_lcm == 0 {
            return Err(Error::Format("field den_lcm must be positive".into()));
        }
        if let Some((i, v)) = file
            .values
            .iter()
            .enumerate()
            .find(|(_, v)| file.den_lcm % v.den() != 0)
        {
            return Err(Error::Format(format!(
                "field values: entry {i} = {v} has a denominator not dividing den_lcm {}",
                file.den_lcm
            )));
        }
        TwistData::new(order, file.values)
    }

    pub fn from_twist(omega: &TwistData) -> Self {
        TwistFile {
            format: Some(1),
            den_lcm: omega.den_lcm(),
            values: omega.values().to_vec(),
        }
    }
}

pub fn parse_weights(text: &str) -> Result<WeightFunction> {
    let value: Value = parse("weights file", text)?;
    WeightFunction::from_json(&value)
}

pub fn to_pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn weights_to_json(map: &BTreeMap<String, crate::chirality::Weight>) -> Value {
    let obj: serde_json::Map<String, Value> = map
        .iter()
        .map(|(k, w)| (k.clone(), json!([w.numer(), w.denom()])))
        .collect();
    Value::Object(obj)
}
