//! Finite discrete groupoids.
//!
//! Composition is stored in paper order: `compose(g, h)` is `g·h`, defined
//! iff `src(g) = rng(h)` (first `h`, then `g`).

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::semigroup::InverseSemigroup;

pub type ArrowId = usize;
pub type UnitId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub src: UnitId,
    pub rng: UnitId,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupoidViolation {
    Shape { detail: String },
    /// Composition defined exactly when it should not be, or vice versa.
    CompositionDomain { g: ArrowId, h: ArrowId },
    ProductEndpoints { g: ArrowId, h: ArrowId },
    NotAssociative { g: ArrowId, h: ArrowId, k: ArrowId },
    UnitArrow { unit: UnitId },
    UnitLaw { g: ArrowId },
    InverseLaw { g: ArrowId },
}

impl fmt::Display for GroupoidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupoidViolation::Shape { detail } => write!(f, "shape: {detail}"),
            GroupoidViolation::CompositionDomain { g, h } => {
                write!(f, "composability of ({g}, {h}) disagrees with src/rng")
            }
            GroupoidViolation::ProductEndpoints { g, h } => {
                write!(f, "src/rng of {g}·{h} are wrong")
            }
            GroupoidViolation::NotAssociative { g, h, k } => {
                write!(f, "associativity fails at ({g}, {h}, {k})")
            }
            GroupoidViolation::UnitArrow { unit } => write!(f, "unit arrow of {unit} is misplaced"),
            GroupoidViolation::UnitLaw { g } => write!(f, "unit law fails at {g}"),
            GroupoidViolation::InverseLaw { g } => write!(f, "inverse law fails at {g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    units: Vec<String>,
    arrows: Vec<Arrow>,
    comp: Vec<Option<ArrowId>>,
    inv: Vec<ArrowId>,
    unit_arrow: Vec<ArrowId>,
}

/// Independent axiom check over all pairs and composable triples.
pub fn validate_groupoid(
    unit_count: usize,
    arrows: &[Arrow],
    comp: &[Option<ArrowId>],
    inv: &[ArrowId],
    unit_arrow: &[ArrowId],
) -> Vec<GroupoidViolation> {
    let m = arrows.len();
    let shape = |detail: String| vec![GroupoidViolation::Shape { detail }];
    if comp.len() != m * m || inv.len() != m || unit_arrow.len() != unit_count {
        return shape("table sizes do not match the arrow and unit counts".into());
    }
    if arrows.iter().any(|a| a.src >= unit_count || a.rng >= unit_count)
        || comp.iter().flatten().any(|&x| x >= m)
        || inv.iter().chain(unit_arrow).any(|&x| x >= m)
    {
        return shape("index out of range".into());
    }
    let c = |g: usize, h: usize| comp[g * m + h];
    let mut out = Vec::new();

    for g in 0..m {
        for h in 0..m {
            let composable = arrows[g].src == arrows[h].rng;
            match c(g, h) {
                Some(gh) if composable => {
                    if arrows[gh].src != arrows[h].src || arrows[gh].rng != arrows[g].rng {
                        out.push(GroupoidViolation::ProductEndpoints { g, h });
                    }
                }
                None if !composable => {}
                _ => out.push(GroupoidViolation::CompositionDomain { g, h }),
            }
        }
    }
    if !out.is_empty() {
        return out;
    }

    let assoc: Vec<GroupoidViolation> = (0..m)
        .into_par_iter()
        .map(|g| {
            let mut local = Vec::new();
            for h in (0..m).filter(|&h| arrows[g].src == arrows[h].rng) {
                let gh = c(g, h).unwrap();
                for k in (0..m).filter(|&k| arrows[h].src == arrows[k].rng) {
                    let hk = c(h, k).unwrap();
                    if c(gh, k) != c(g, hk) {
                        local.push(GroupoidViolation::NotAssociative { g, h, k });
                    }
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    out.extend(assoc);

    for (u, &a) in unit_arrow.iter().enumerate() {
        if arrows[a].src != u || arrows[a].rng != u {
            out.push(GroupoidViolation::UnitArrow { unit: u });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for g in 0..m {
        let left = unit_arrow[arrows[g].rng];
        let right = unit_arrow[arrows[g].src];
        if c(left, g) != Some(g) || c(g, right) != Some(g) {
            out.push(GroupoidViolation::UnitLaw { g });
        }
        let gi = inv[g];
        if inv[gi] != g || c(g, gi) != Some(left) || c(gi, g) != Some(right) {
            out.push(GroupoidViolation::InverseLaw { g });
        }
    }
    out
}

impl FiniteGroupoid {
    pub fn new(
        units: Vec<String>,
        arrows: Vec<Arrow>,
        comp: Vec<Option<ArrowId>>,
        inv: Vec<ArrowId>,
        unit_arrow: Vec<ArrowId>,
    ) -> Result<Self> {
        let violations = validate_groupoid(units.len(), &arrows, &comp, &inv, &unit_arrow);
        if let Some(v) = violations.first() {
            return Err(Error::invalid("groupoid", v));
        }
        Ok(FiniteGroupoid {
            units,
            arrows,
            comp,
            inv,
            unit_arrow,
        })
    }

    /// A group viewed as a one-unit groupoid; arrow ids are element indices.
    pub fn from_group(g: &InverseSemigroup) -> Result<Self> {
        let idem = g.idempotents();
        if idem.len() != 1 {
            return Err(Error::Domain(format!(
                "a group has exactly one idempotent, found {}",
                idem.len()
            )));
        }
        let n = g.order();
        let arrows = (0..n)
            .map(|i| Arrow {
                src: 0,
                rng: 0,
                label: g.label(i).to_string(),
            })
            .collect();
        let comp = (0..n * n).map(|k| Some(g.mul(k / n, k % n))).collect();
        let inv = (0..n).map(|i| g.star(i)).collect();
        Self::new(vec![g.label(idem[0]).to_string()], arrows, comp, inv, vec![idem[0]])
    }

    /// The pair groupoid on `n` points: one arrow `(i, j)` from `j` to `i`.
    /// Arrow `(i, j)` has id `i*n + j`.
    pub fn pair_groupoid(n: usize) -> Result<Self> {
        let units = (0..n).map(|i| i.to_string()).collect();
        let arrows = (0..n * n)
            .map(|a| Arrow {
                src: a % n,
                rng: a / n,
                label: format!("({},{})", a / n, a % n),
            })
            .collect();
        let mut comp = vec![None; n.pow(4)];
        let m = n * n;
        for g in 0..m {
            for h in 0..m {
                if g % n == h / n {
                    comp[g * m + h] = Some((g / n) * n + h % n);
                }
            }
        }
        let inv = (0..m).map(|a| (a % n) * n + a / n).collect();
        let unit_arrow = (0..n).map(|i| i * n + i).collect();
        Self::new(units, arrows, comp, inv, unit_arrow)
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, g: ArrowId) -> &Arrow {
        &self.arrows[g]
    }

    #[inline]
    pub fn src(&self, g: ArrowId) -> UnitId {
        self.arrows[g].src
    }

    #[inline]
    pub fn rng(&self, g: ArrowId) -> UnitId {
        self.arrows[g].rng
    }

    /// `g·h` in paper order.
    #[inline]
    pub fn compose(&self, g: ArrowId, h: ArrowId) -> Option<ArrowId> {
        self.comp[g * self.arrows.len() + h]
    }

    #[inline]
    pub fn inv(&self, g: ArrowId) -> ArrowId {
        self.inv[g]
    }

    #[inline]
    pub fn unit_arrow(&self, u: UnitId) -> ArrowId {
        self.unit_arrow[u]
    }

    pub fn is_unit_arrow(&self, g: ArrowId) -> bool {
        self.unit_arrow[self.src(g)] == g
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (ArrowId, ArrowId)> + '_ {
        let m = self.arrows.len();
        (0..m).flat_map(move |g| {
            (0..m)
                .filter(move |&h| self.src(g) == self.rng(h))
                .map(move |h| (g, h))
        })
    }

    /// Arrows with the given source and range.
    pub fn fiber(&self, src: UnitId, rng: UnitId) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&g| self.src(g) == src && self.rng(g) == rng)
            .collect()
    }

    /// Same arrows, source and range swapped, `g ·op h = h·g`.
    pub fn opposite(&self) -> FiniteGroupoid {
        let m = self.arrows.len();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                src: a.rng,
                rng: a.src,
                label: a.label.clone(),
            })
            .collect();
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for h in 0..m {
                comp[g * m + h] = self.compose(h, g);
            }
        }
        FiniteGroupoid {
            units: self.units.clone(),
            arrows,
            comp,
            inv: self.inv.clone(),
            unit_arrow: self.unit_arrow.clone(),
        }
    }

    /// Relabels units by `unit_perm` and arrows by `arrow_perm`.
    pub fn relabeled(&self, unit_perm: &[UnitId], arrow_perm: &[ArrowId]) -> Result<FiniteGroupoid> {
        let m = self.arrows.len();
        let u = self.units.len();
        let mut units = vec![String::new(); u];
        for (i, name) in self.units.iter().enumerate() {
            units[unit_perm[i]] = name.clone();
        }
        let mut arrows = vec![
            Arrow {
                src: 0,
                rng: 0,
                label: String::new()
            };
            m
        ];
        let mut inv = vec![0; m];
        let mut comp = vec![None; m * m];
        for g in 0..m {
            let a = &self.arrows[g];
            arrows[arrow_perm[g]] = Arrow {
                src: unit_perm[a.src],
                rng: unit_perm[a.rng],
                label: a.label.clone(),
            };
            inv[arrow_perm[g]] = arrow_perm[self.inv[g]];
            for h in 0..m {
                comp[arrow_perm[g] * m + arrow_perm[h]] = self.compose(g, h).map(|x| arrow_perm[x]);
            }
        }
        let mut unit_arrow = vec![0; u];
        for (i, &a) in self.unit_arrow.iter().enumerate() {
            unit_arrow[unit_perm[i]] = arrow_perm[a];
        }
        FiniteGroupoid::new(units, arrows, comp, inv, unit_arrow)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arrows: Vec<_> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(id, a)| json!({"id": id, "src": a.src, "rng": a.rng, "label": a.label}))
            .collect();
        let comp: Vec<_> = self
            .composable_pairs()
            .map(|(g, h)| json!([g, h, self.compose(g, h).unwrap()]))
            .collect();
        json!({
            "format": 1,
            "order": "paper",
            "units": self.units,
            "arrows": arrows,
            "comp": comp,
            "inv": self.inv,
        })
    }

    /// DOT digraph, one edge per non-unit arrow from source to range.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "// format: 1");
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        for (u, label) in self.units.iter().enumerate() {
            let _ = writeln!(out, "  u{u} [label=\"{}\"];", escape(label));
        }
        for (g, a) in self.arrows.iter().enumerate() {
            if self.is_unit_arrow(g) {
                continue;
            }
            let _ = writeln!(
                out,
                "  u{} -> u{} [label=\"{}\", id=\"a{g}\"];",
                a.src,
                a.rng,
                escape(&a.label)
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn opposite_groupoid(g: &FiniteGroupoid) -> FiniteGroupoid {
    g.opposite()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Covariant,
    /// Reverses composition and swaps source with range.
    Contravariant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidFunctor {
    pub unit_map: Vec<UnitId>,
    pub arrow_map: Vec<ArrowId>,
    pub variance: Variance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    Shape { detail: String },
    Endpoints { g: ArrowId },
    Composition { g: ArrowId, h: ArrowId },
    Unit { unit: UnitId },
    Inverse { g: ArrowId },
    NotBijective,
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Shape { detail } => write!(f, "shape: {detail}"),
            FunctorViolation::Endpoints { g } => write!(f, "source/range not preserved at {g}"),
            FunctorViolation::Composition { g, h } => {
                write!(f, "composition not preserved on the pair ({g}, {h})")
            }
            FunctorViolation::Unit { unit } => write!(f, "unit {unit} not preserved"),
            FunctorViolation::Inverse { g } => write!(f, "inverse not preserved at {g}"),
            FunctorViolation::NotBijective => write!(f, "map is not bijective"),
        }
    }
}

impl GroupoidFunctor {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidFunctor {
            unit_map: (0..g.unit_count()).collect(),
            arrow_map: (0..g.arrow_count()).collect(),
            variance: Variance::Covariant,
        }
    }

    /// Checks the functor laws on every arrow and composable pair.
    pub fn verify(&self, from: &FiniteGroupoid, to: &FiniteGroupoid) -> Result<(), FunctorViolation> {
        if self.unit_map.len() != from.unit_count() || self.arrow_map.len() != from.arrow_count() {
            return Err(FunctorViolation::Shape {
                detail: "map sizes do not match the source groupoid".into(),
            });
        }
        if self.unit_map.iter().any(|&u| u >= to.unit_count())
            || self.arrow_map.iter().any(|&a| a >= to.arrow_count())
        {
            return Err(FunctorViolation::Shape {
                detail: "map leaves the target groupoid".into(),
            });
        }
        let f = &self.arrow_map;
        let contra = self.variance == Variance::Contravariant;
        for g in 0..from.arrow_count() {
            let (s, r) = (self.unit_map[from.src(g)], self.unit_map[from.rng(g)]);
            let ok = if contra {
                to.src(f[g]) == r && to.rng(f[g]) == s
            } else {
                to.src(f[g]) == s && to.rng(f[g]) == r
            };
            if !ok {
                return Err(FunctorViolation::Endpoints { g });
            }
        }
        for (g, h) in from.composable_pairs() {
            let gh = from.compose(g, h).unwrap();
            let image = if contra {
                to.compose(f[h], f[g])
            } else {
                to.compose(f[g], f[h])
            };
            if image != Some(f[gh]) {
                return Err(FunctorViolation::Composition { g, h });
            }
        }
        for u in 0..from.unit_count() {
            if f[from.unit_arrow(u)] != to.unit_arrow(self.unit_map[u]) {
                return Err(FunctorViolation::Unit { unit: u });
            }
        }
        for g in 0..from.arrow_count() {
            if f[from.inv(g)] != to.inv(f[g]) {
                return Err(FunctorViolation::Inverse { g });
            }
        }
        Ok(())
    }

    pub fn is_bijective(&self, from: &FiniteGroupoid, to: &FiniteGroupoid) -> bool {
        is_permutation(&self.arrow_map, to.arrow_count())
            && is_permutation(&self.unit_map, to.unit_count())
            && from.arrow_count() == to.arrow_count()
    }

    pub fn is_surjective_on_arrows(&self, to: &FiniteGroupoid) -> bool {
        let mut hit = vec![false; to.arrow_count()];
        for &a in &self.arrow_map {
            hit[a] = true;
        }
        hit.into_iter().all(|x| x)
    }

    pub fn is_injective_on_arrows(&self) -> bool {
        let mut sorted = self.arrow_map.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupoidFunctor) -> GroupoidFunctor {
        let variance = if self.variance == other.variance {
            Variance::Covariant
        } else {
            Variance::Contravariant
        };
        GroupoidFunctor {
            unit_map: self.unit_map.iter().map(|&u| other.unit_map[u]).collect(),
            arrow_map: self.arrow_map.iter().map(|&a| other.arrow_map[a]).collect(),
            variance,
        }
    }
}

pub(crate) fn is_permutation(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Arrow inversion `g ↦ g⁻¹`, a covariant isomorphism `G → G^op`.
pub fn inversion_to_opposite(g: &FiniteGroupoid) -> GroupoidFunctor {
    GroupoidFunctor {
        unit_map: (0..g.unit_count()).collect(),
        arrow_map: (0..g.arrow_count()).map(|a| g.inv(a)).collect(),
        variance: Variance::Covariant,
    }
}
