//! Twist data on a semigroup and the circle-valued 2-cocycles it induces on
//! germ groupoids.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::characters::{enumerate_characters, CharacterSpace};
use crate::circle::{lcm, CircleValue};
use crate::error::{Error, Result};
use crate::germ::{build_universal_groupoid, canonical_universal_mirror, GermGroupoid};
use crate::groupoid::{ArrowId, FiniteGroupoid};
use crate::semigroup::{Element, InverseSemigroup};

/// `ω : S × S → 𝕋`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistData {
    order: usize,
    values: Vec<CircleValue>,
}

impl TwistData {
    pub fn new(order: usize, values: Vec<CircleValue>) -> Result<Self> {
        if values.len() != order * order {
            return Err(Error::Format(format!(
                "twist has {} values, expected {}",
                values.len(),
                order * order
            )));
        }
        Ok(TwistData { order, values })
    }

    pub fn trivial(order: usize) -> Self {
        TwistData {
            order,
            values: vec![CircleValue::ONE; order * order],
        }
    }

    pub fn from_fn(order: usize, f: impl Fn(Element, Element) -> CircleValue) -> Self {
        let values = (0..order * order).map(|k| f(k / order, k % order)).collect();
        TwistData { order, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, s: Element, t: Element) -> CircleValue {
        self.values[s * self.order + t]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    pub fn values(&self) -> &[CircleValue] {
        &self.values
    }

    pub fn den_lcm(&self) -> u64 {
        self.values.iter().fold(1, |acc, v| lcm(acc, v.den()))
    }

    pub fn permuted(&self, perm: &[Element]) -> TwistData {
        let n = self.order;
        let mut values = vec![CircleValue::ONE; n * n];
        for s in 0..n {
            for t in 0..n {
                values[perm[s] * n + perm[t]] = self.get(s, t);
            }
        }
        TwistData { order: n, values }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `ω(e, s)`
    Left,
    /// `ω(s, e)`
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwistViolation {
    Normalization {
        idempotent: Element,
        element: Element,
        side: Side,
    },
    Associativity {
        s: Element,
        t: Element,
        u: Element,
    },
    /// `ω(s,t) ≠ ω(s',t')` although the germs agree at `character`.
    GermInvariance {
        character: usize,
        s: Element,
        t: Element,
        s2: Element,
        t2: Element,
    },
}

impl fmt::Display for TwistViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TwistViolation::Normalization {
                idempotent,
                element,
                side: Side::Left,
            } => write!(f, "ω({idempotent}, {element}) ≠ 1 for idempotent {idempotent}"),
            TwistViolation::Normalization {
                idempotent,
                element,
                side: Side::Right,
            } => write!(f, "ω({element}, {idempotent}) ≠ 1 for idempotent {idempotent}"),
            TwistViolation::Associativity { s, t, u } => {
                write!(f, "ω({s},{t})ω({s}·{t},{u}) ≠ ω({t},{u})ω({s},{t}·{u})")
            }
            TwistViolation::GermInvariance {
                character,
                s,
                t,
                s2,
                t2,
            } => write!(
                f,
                "ω({s},{t}) ≠ ω({s2},{t2}) though the germs agree at character {character}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub violations: Vec<TwistViolation>,
}

impl TwistReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for TwistReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Normalization, the associativity constraint on all triples, and germ
/// invariance: for every character `χ`, germ-equivalent `t ~ t'` at `χ` and
/// `s ~ s'` at `θ_t(χ)`, `ω(s,t) = ω(s',t')`.
pub fn validate_twist_data(s: &InverseSemigroup, omega: &TwistData) -> Result<TwistReport> {
    let n = s.order();
    if omega.order() != n {
        return Err(Error::Format(format!(
            "twist is defined on {} elements, semigroup has {n}",
            omega.order()
        )));
    }
    let mut violations = Vec::new();
    for e in s.idempotents() {
        for a in 0..n {
            if !omega.get(e, a).is_one() {
                violations.push(TwistViolation::Normalization {
                    idempotent: e,
                    element: a,
                    side: Side::Left,
                });
            }
            if !omega.get(a, e).is_one() {
                violations.push(TwistViolation::Normalization {
                    idempotent: e,
                    element: a,
                    side: Side::Right,
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = s.mul(a, b);
            for c in 0..n {
                let lhs = omega.get(a, b) * omega.get(ab, c);
                let rhs = omega.get(b, c) * omega.get(a, s.mul(b, c));
                if lhs != rhs {
                    violations.push(TwistViolation::Associativity { s: a, t: b, u: c });
                }
            }
        }
    }
    let space = enumerate_characters(s)?;
    germ_invariance_violations(s, &space, omega, &mut violations)?;
    Ok(TwistReport { violations })
}

fn germ_invariance_violations(
    s: &InverseSemigroup,
    space: &CharacterSpace,
    omega: &TwistData,
    out: &mut Vec<TwistViolation>,
) -> Result<()> {
    let n = s.order();
    for chi in 0..space.len() {
        let right: Vec<Element> = (0..n).filter(|&t| space.in_source(t, chi)).collect();
        for &t in &right {
            for &t2 in &right {
                if !space.germ_equivalent(t, t2, chi)? {
                    continue;
                }
                let mid = space.act(t, chi)?;
                let left: Vec<Element> = (0..n).filter(|&a| space.in_source(a, mid)).collect();
                for &a in &left {
                    for &a2 in &left {
                        if (a, t) >= (a2, t2) || !space.germ_equivalent(a, a2, mid)? {
                            continue;
                        }
                        if omega.get(a, t) != omega.get(a2, t2) {
                            out.push(TwistViolation::GermInvariance {
                                character: chi,
                                s: a,
                                t,
                                s2: a2,
                                t2,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `ω#(s,t) = conj ω(t,s)`, validated as twist data on `S#`.
pub fn mirror_twist(s: &InverseSemigroup, omega: &TwistData) -> Result<TwistData> {
    let n = omega.order();
    let mirrored = TwistData::from_fn(n, |a, b| omega.get(b, a).conj());
    let report = validate_twist_data(&s.mirror(), &mirrored)?;
    if !report.is_valid() {
        return Err(Error::invalid("mirror twist", report));
    }
    Ok(mirrored)
}

/// A circle value on every composable pair of a groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidCocycle {
    arrows: usize,
    values: Vec<Option<CircleValue>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleViolation {
    Shape,
    /// Missing on a composable pair, or present on a non-composable one.
    Support { g: ArrowId, h: ArrowId },
    Normalization { g: ArrowId, h: ArrowId },
    CocycleIdentity { g: ArrowId, h: ArrowId, k: ArrowId },
}

impl fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CocycleViolation::Shape => write!(f, "cocycle table has the wrong size"),
            CocycleViolation::Support { g, h } => write!(f, "support is wrong at ({g}, {h})"),
            CocycleViolation::Normalization { g, h } => {
                write!(f, "σ({g}, {h}) ≠ 1 although one of them is a unit")
            }
            CocycleViolation::CocycleIdentity { g, h, k } => {
                write!(f, "cocycle identity fails at ({g}, {h}, {k})")
            }
        }
    }
}

impl GroupoidCocycle {
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        Self::from_fn(g, |_, _| CircleValue::ONE)
    }

    pub fn from_fn(g: &FiniteGroupoid, f: impl Fn(ArrowId, ArrowId) -> CircleValue) -> Self {
        let m = g.arrow_count();
        let mut values = vec![None; m * m];
        for (a, b) in g.composable_pairs() {
            values[a * m + b] = Some(f(a, b));
        }
        GroupoidCocycle { arrows: m, values }
    }

    #[inline]
    pub fn get(&self, g: ArrowId, h: ArrowId) -> Option<CircleValue> {
        self.values[g * self.arrows + h]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_one())
    }

    /// All distinct values, ascending.
    pub fn distinct_values(&self) -> Vec<CircleValue> {
        let mut v: Vec<CircleValue> = self.values.iter().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn validate(&self, g: &FiniteGroupoid) -> Vec<CocycleViolation> {
        let m = g.arrow_count();
        if self.arrows != m || self.values.len() != m * m {
            return vec![CocycleViolation::Shape];
        }
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if self.get(a, b).is_some() != g.compose(a, b).is_some() {
                    out.push(CocycleViolation::Support { g: a, h: b });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (a, b) in g.composable_pairs() {
            if (g.is_unit_arrow(a) || g.is_unit_arrow(b)) && !self.get(a, b).unwrap().is_one() {
                out.push(CocycleViolation::Normalization { g: a, h: b });
            }
        }
        for (a, b) in g.composable_pairs() {
            let ab = g.compose(a, b).unwrap();
            for c in (0..m).filter(|&c| g.src(b) == g.rng(c)) {
                let bc = g.compose(b, c).unwrap();
                let lhs = self.get(a, b).unwrap() * self.get(ab, c).unwrap();
                let rhs = self.get(b, c).unwrap() * self.get(a, bc).unwrap();
                if lhs != rhs {
                    out.push(CocycleViolation::CocycleIdentity { g: a, h: b, k: c });
                }
            }
        }
        out
    }

    /// Relabels arrows to match [`FiniteGroupoid::relabeled`].
    pub fn relabeled(&self, arrow_perm: &[ArrowId]) -> GroupoidCocycle {
        let m = self.arrows;
        let mut values = vec![None; m * m];
        for a in 0..m {
            for b in 0..m {
                values[arrow_perm[a] * m + arrow_perm[b]] = self.get(a, b);
            }
        }
        GroupoidCocycle { arrows: m, values }
    }

    /// `{"format": 1, "values": [[g, h, [num, den]], ...]}` over composable pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let m = self.arrows;
        let values: Vec<_> = (0..m * m)
            .filter_map(|k| self.values[k].map(|v| json!([k / m, k % m, v])))
            .collect();
        json!({"format": 1, "values": values})
    }
}

/// `σ_ω([s, θ_t(u)], [t, u]) = ω(s, t)`, checked on every pair of
/// representatives.
pub fn induce_cocycle(germs: &GermGroupoid, omega: &TwistData) -> Result<GroupoidCocycle> {
    let g = germs.groupoid();
    if omega.order() != germs.semigroup().order() {
        return Err(Error::Format("twist and semigroup sizes differ".into()));
    }
    let m = g.arrow_count();
    let mut values = vec![None; m * m];
    for (a, b) in g.composable_pairs() {
        let v = omega.get(germs.word(a), germs.word(b));
        for &s in germs.members(a) {
            for &t in germs.members(b) {
                if omega.get(s, t) != v {
                    return Err(Error::NotWellDefined(format!(
                        "induced cocycle on ({a}, {b}): ω({}, {}) = {v} but ω({s}, {t}) = {}",
                        germs.word(a),
                        germs.word(b),
                        omega.get(s, t)
                    )));
                }
            }
        }
        values[a * m + b] = Some(v);
    }
    let sigma = GroupoidCocycle { arrows: m, values };
    if let Some(v) = sigma.validate(g).first() {
        return Err(Error::invalid("induced cocycle", v));
    }
    Ok(sigma)
}

/// `σ#(g,h) = conj σ(h,g)` on the opposite groupoid.
pub fn mirror_cocycle(sigma: &GroupoidCocycle) -> GroupoidCocycle {
    let m = sigma.arrows;
    let mut values = vec![None; m * m];
    for a in 0..m {
        for b in 0..m {
            values[a * m + b] = sigma.get(b, a).map(CircleValue::conj);
        }
    }
    GroupoidCocycle { arrows: m, values }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeFailure {
    pub g: ArrowId,
    pub h: ArrowId,
    /// `σ_{ω#}(g, h)` on `G_u(S#)`
    pub mirror_value: CircleValue,
    /// `σ_ω#(Ψg, Ψh)` on `G_u(S)^op`
    pub transported_value: CircleValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub arrows: usize,
    pub pairs_checked: usize,
    pub failure: Option<BridgeFailure>,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Compares `(G_u(S#), σ_{ω#})` with `(G_u(S)^op, σ_ω#)` along the canonical
/// identification, pair by pair.
pub fn verify_universal_bridge(s: &InverseSemigroup, omega: &TwistData) -> Result<BridgeReport> {
    let um = canonical_universal_mirror(s)?;
    let sigma = induce_cocycle(&um.universal, omega)?;
    let sigma_mirror = mirror_cocycle(&sigma);
    let omega_mirror = mirror_twist(s, omega)?;
    let sigma_of_mirror = induce_cocycle(&um.mirror, &omega_mirror)?;
    let f = &um.functor.arrow_map;
    let mg = um.mirror.groupoid();
    let mut pairs_checked = 0;
    for (g, h) in mg.composable_pairs() {
        pairs_checked += 1;
        let mirror_value = sigma_of_mirror.get(g, h).unwrap();
        let transported = sigma_mirror.get(f[g], f[h]);
        if transported != Some(mirror_value) {
            return Ok(BridgeReport {
                arrows: mg.arrow_count(),
                pairs_checked,
                failure: Some(BridgeFailure {
                    g,
                    h,
                    mirror_value,
                    transported_value: transported.unwrap_or(CircleValue::ONE),
                }),
            });
        }
    }
    Ok(BridgeReport {
        arrows: mg.arrow_count(),
        pairs_checked,
        failure: None,
    })
}

/// Convenience: `G_u(S)` with `σ_ω`.
pub fn twisted_universal_groupoid(
    s: &InverseSemigroup,
    omega: &TwistData,
) -> Result<(GermGroupoid, GroupoidCocycle)> {
    let g = build_universal_groupoid(s)?;
    let sigma = induce_cocycle(&g, omega)?;
    Ok((g, sigma))
}
