//! Groupoids of germs: the universal groupoid on the character space and the
//! germ groupoid of a concrete representation, with the canonical maps
//! between them and their opposites.

use std::collections::HashMap;

use serde::Serialize;

use crate::characters::{enumerate_characters, Character, CharacterSpace};
use crate::error::{Error, Result};
use crate::groupoid::{
    Arrow, ArrowId, FiniteGroupoid, FunctorViolation, GroupoidFunctor, UnitId, Variance,
};
use crate::partial::{inverted_representation, mirror_representation, Representation};
use crate::semigroup::{Element, InverseSemigroup};

/// A partial action of `S` on a finite unit space, together with the
/// idempotent neighbourhoods used by the germ relation.
trait GermModel {
    fn unit_count(&self) -> usize;
    fn unit_label(&self, u: UnitId) -> String;
    /// `u ∈ dom θ_s`
    fn in_domain(&self, s: Element, u: UnitId) -> bool;
    fn act(&self, s: Element, u: UnitId) -> Result<UnitId>;
}

struct CharacterModel<'a>(&'a CharacterSpace);

impl GermModel for CharacterModel<'_> {
    fn unit_count(&self) -> usize {
        self.0.len()
    }

    fn unit_label(&self, u: UnitId) -> String {
        format!("χ{}", self.0.character(u))
    }

    fn in_domain(&self, s: Element, u: UnitId) -> bool {
        self.0.in_source(s, u)
    }

    fn act(&self, s: Element, u: UnitId) -> Result<UnitId> {
        self.0.act(s, u)
    }
}

struct PointModel<'a> {
    rho: &'a Representation,
    points: &'a [usize],
    unit_of_point: Vec<Option<UnitId>>,
}

impl GermModel for PointModel<'_> {
    fn unit_count(&self) -> usize {
        self.points.len()
    }

    fn unit_label(&self, u: UnitId) -> String {
        format!("x{}", self.points[u])
    }

    fn in_domain(&self, s: Element, u: UnitId) -> bool {
        self.rho.image(s).in_domain(self.points[u])
    }

    fn act(&self, s: Element, u: UnitId) -> Result<UnitId> {
        let x = self.points[u];
        let y = self
            .rho
            .image(s)
            .apply(x)
            .ok_or_else(|| Error::Domain(format!("point {x} is not in dom ρ({s})")))?;
        self.unit_of_point[y].ok_or_else(|| {
            Error::Internal(format!("ρ({s}) sends {x} to the uncovered point {y}"))
        })
    }
}

#[derive(Clone, Debug)]
pub enum UnitSpace {
    Characters(CharacterSpace),
    /// Points of the carrier lying in the domain of some idempotent.
    Points {
        carrier: usize,
        points: Vec<usize>,
    },
}

/// A germ groupoid together with its germ index.
#[derive(Clone, Debug)]
pub struct GermGroupoid {
    semigroup: InverseSemigroup,
    units: UnitSpace,
    groupoid: FiniteGroupoid,
    /// Canonical representative word of each arrow (smallest element index).
    word: Vec<Element>,
    /// Every word representing the arrow at its source, ascending.
    members: Vec<Vec<Element>>,
    lookup: HashMap<(Element, UnitId), ArrowId>,
}

impl GermGroupoid {
    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn unit_space(&self) -> &UnitSpace {
        &self.units
    }

    pub fn character_space(&self) -> Option<&CharacterSpace> {
        match &self.units {
            UnitSpace::Characters(c) => Some(c),
            UnitSpace::Points { .. } => None,
        }
    }

    pub fn word(&self, g: ArrowId) -> Element {
        self.word[g]
    }

    pub fn members(&self, g: ArrowId) -> &[Element] {
        &self.members[g]
    }

    /// The arrow `[s, u]`, if `u ∈ dom θ_s`.
    pub fn germ(&self, s: Element, u: UnitId) -> Option<ArrowId> {
        self.lookup.get(&(s, u)).copied()
    }

    /// `U(s)`, ordered by source unit.
    pub fn bisection(&self, s: Element) -> Vec<ArrowId> {
        (0..self.groupoid.unit_count())
            .filter_map(|u| self.germ(s, u))
            .collect()
    }

    /// Source and range are injective on every `U(s)`; returns the first
    /// offending `(s, g, h)` otherwise.
    pub fn check_bisections(&self) -> Result<(), (Element, ArrowId, ArrowId)> {
        let g = &self.groupoid;
        for s in 0..self.semigroup.order() {
            let u = self.bisection(s);
            for (i, &a) in u.iter().enumerate() {
                for &b in &u[i + 1..] {
                    if a == b || g.src(a) == g.src(b) || g.rng(a) == g.rng(b) {
                        return Err((s, a, b));
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the unit attached to carrier point `x`, for point models.
    pub fn unit_of_point(&self, x: usize) -> Option<UnitId> {
        match &self.units {
            UnitSpace::Points { points, .. } => points.iter().position(|&p| p == x),
            UnitSpace::Characters(_) => None,
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn build<M: GermModel>(
    s: &InverseSemigroup,
    model: &M,
    contains: impl Fn(Element, UnitId) -> bool,
    units: UnitSpace,
) -> Result<GermGroupoid> {
    let n = s.order();
    let unit_count = model.unit_count();
    let idempotents = s.idempotents();

    // class_of[(s, u)] = canonical (smallest) word, per unit
    let mut class_rep: HashMap<(Element, UnitId), Element> = HashMap::new();
    for u in 0..unit_count {
        let words: Vec<Element> = (0..n).filter(|&a| model.in_domain(a, u)).collect();
        let related = |a: Element, b: Element| {
            idempotents
                .iter()
                .any(|&e| contains(e, u) && s.mul(a, e) == s.mul(b, e))
        };
        let mut parent: Vec<usize> = (0..words.len()).collect();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if related(words[i], words[j]) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let roots: Vec<usize> = (0..words.len()).map(|i| find(&mut parent, i)).collect();
        // the relation must already be transitive: every pair in a class is directly related
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if roots[i] == roots[j] && !related(words[i], words[j]) {
                    return Err(Error::NotWellDefined(format!(
                        "germ relation is not transitive at unit {u}: {} and {} are only related through a chain",
                        words[i], words[j]
                    )));
                }
            }
            class_rep.insert((words[i], u), words[roots[i]]);
        }
    }

    let mut lookup_rep: HashMap<(Element, UnitId), ArrowId> = HashMap::new();
    let mut word = Vec::new();
    let mut base = Vec::new();
    for a in 0..n {
        for u in 0..unit_count {
            if class_rep.get(&(a, u)) == Some(&a) {
                lookup_rep.insert((a, u), word.len());
                word.push(a);
                base.push(u);
            }
        }
    }
    let m = word.len();
    let mut lookup = HashMap::new();
    let mut members = vec![Vec::new(); m];
    for a in 0..n {
        for u in 0..unit_count {
            if let Some(rep) = class_rep.get(&(a, u)) {
                let id = lookup_rep[&(*rep, u)];
                lookup.insert((a, u), id);
                members[id].push(a);
            }
        }
    }

    let mut arrows = Vec::with_capacity(m);
    for g in 0..m {
        let rng = model.act(word[g], base[g])?;
        for &a in &members[g] {
            if model.act(a, base[g])? != rng {
                return Err(Error::NotWellDefined(format!(
                    "range of germ [{}, {}] depends on the representative {a}",
                    word[g], base[g]
                )));
            }
        }
        arrows.push(Arrow {
            src: base[g],
            rng,
            label: format!("[{}, {}]", s.label(word[g]), model.unit_label(base[g])),
        });
    }

    let mut comp = vec![None; m * m];
    for g in 0..m {
        for h in 0..m {
            if arrows[g].src != arrows[h].rng {
                continue;
            }
            let u = arrows[h].src;
            let product = |a: Element, b: Element| {
                lookup.get(&(s.mul(a, b), u)).copied().ok_or_else(|| {
                    Error::Internal(format!("{}·{} is not defined at unit {u}", a, b))
                })
            };
            let gh = product(word[g], word[h])?;
            for &a in &members[g] {
                for &b in &members[h] {
                    if product(a, b)? != gh {
                        return Err(Error::NotWellDefined(format!(
                            "composition of arrows {g} and {h} depends on the representatives ({a}, {b})"
                        )));
                    }
                }
            }
            comp[g * m + h] = Some(gh);
        }
    }

    let mut inv = Vec::with_capacity(m);
    for g in 0..m {
        let r = arrows[g].rng;
        let inverse_of = |a: Element| {
            lookup
                .get(&(s.star(a), r))
                .copied()
                .ok_or_else(|| Error::Internal(format!("{}* is not defined at unit {r}", a)))
        };
        let gi = inverse_of(word[g])?;
        for &a in &members[g] {
            if inverse_of(a)? != gi {
                return Err(Error::NotWellDefined(format!(
                    "inverse of arrow {g} depends on the representative {a}"
                )));
            }
        }
        inv.push(gi);
    }

    let mut unit_arrow = Vec::with_capacity(unit_count);
    for u in 0..unit_count {
        let candidates: Vec<ArrowId> = idempotents
            .iter()
            .filter(|&&e| contains(e, u))
            .map(|&e| lookup[&(e, u)])
            .collect();
        match candidates.split_first() {
            Some((&first, rest)) if rest.iter().all(|&c| c == first) => unit_arrow.push(first),
            Some(_) => {
                return Err(Error::NotWellDefined(format!(
                    "idempotents through unit {u} give different germs"
                )))
            }
            None => {
                return Err(Error::Internal(format!("no idempotent contains unit {u}")));
            }
        }
    }

    let labels = (0..unit_count).map(|u| model.unit_label(u)).collect();
    let groupoid = FiniteGroupoid::new(labels, arrows, comp, inv, unit_arrow)?;
    let out = GermGroupoid {
        semigroup: s.clone(),
        units,
        groupoid,
        word,
        members,
        lookup,
    };
    if let Err((w, a, b)) = out.check_bisections() {
        return Err(Error::Internal(format!(
            "U({w}) is not a bisection: arrows {a} and {b} share an endpoint"
        )));
    }
    Ok(out)
}

/// Paterson's universal groupoid `G_u(S)`: germs `[s, χ]` with `χ ∈ D(s*s)`.
pub fn build_universal_groupoid(s: &InverseSemigroup) -> Result<GermGroupoid> {
    let space = enumerate_characters(s)?;
    let model = CharacterModel(&space);
    build(
        s,
        &model,
        |e, chi| space.value(chi, e),
        UnitSpace::Characters(space.clone()),
    )
}

/// The germ groupoid `G_germ(S, ρ)`: germs `[s, x]` with `x ∈ dom ρ(s)`.
pub fn build_germ_groupoid(s: &InverseSemigroup, rho: &Representation) -> Result<GermGroupoid> {
    if rho.images().len() != s.order() {
        return Err(Error::Format("representation does not match the semigroup".into()));
    }
    let idempotents = s.idempotents();
    let carrier = rho.carrier();
    let points: Vec<usize> = (0..carrier)
        .filter(|&x| idempotents.iter().any(|&e| rho.image(e).in_domain(x)))
        .collect();
    let mut unit_of_point = vec![None; carrier];
    for (u, &x) in points.iter().enumerate() {
        unit_of_point[x] = Some(u);
    }
    let model = PointModel {
        rho,
        points: &points,
        unit_of_point,
    };
    build(
        s,
        &model,
        |e, u| rho.image(e).in_domain(points[u]),
        UnitSpace::Points {
            carrier,
            points: points.clone(),
        },
    )
}

/// Sends the mirror germ of `s` with source `u` to the original germ of `s`
/// whose range is `u`; in the opposite groupoid that arrow has source `u`.
fn mirror_arrow_map(
    mirror: &GermGroupoid,
    original: &GermGroupoid,
    unit_map: &[UnitId],
) -> Result<Vec<ArrowId>> {
    let mg = mirror.groupoid();
    let og = original.groupoid();
    (0..mg.arrow_count())
        .map(|g| {
            let s = mirror.word(g);
            let u = unit_map[mg.src(g)];
            original
                .bisection(s)
                .into_iter()
                .find(|&a| og.rng(a) == u)
                .ok_or_else(|| {
                    Error::Functor(FunctorViolation::Shape {
                        detail: format!("no germ of {s} in the original groupoid ends at unit {u}"),
                    })
                })
        })
        .collect()
}

/// The identification `G_u(S#) ≅ G_u(S)^op`.
#[derive(Clone, Debug)]
pub struct UniversalMirror {
    /// `G_u(S#)`
    pub mirror: GermGroupoid,
    /// `G_u(S)`
    pub universal: GermGroupoid,
    /// `G_u(S)^op`
    pub opposite: FiniteGroupoid,
    /// Covariant functor `G_u(S#) → G_u(S)^op`, verified and bijective.
    pub functor: GroupoidFunctor,
}

/// Builds both sides and the germ-wise identity between them, then verifies
/// it; a failure is returned as [`Error::Functor`] with the offending pair.
pub fn canonical_universal_mirror(s: &InverseSemigroup) -> Result<UniversalMirror> {
    let universal = build_universal_groupoid(s)?;
    let mirror = build_universal_groupoid(&s.mirror())?;
    let opposite = universal.groupoid().opposite();
    let functor = identify_with_opposite(&mirror, &universal, &opposite)?;
    Ok(UniversalMirror {
        mirror,
        universal,
        opposite,
        functor,
    })
}

fn identify_with_opposite(
    mirror: &GermGroupoid,
    original: &GermGroupoid,
    opposite: &FiniteGroupoid,
) -> Result<GroupoidFunctor> {
    if mirror.groupoid().unit_count() != opposite.unit_count() {
        return Err(Error::Functor(FunctorViolation::Shape {
            detail: "unit spaces differ in size".into(),
        }));
    }
    let unit_map = unit_identification(mirror, original)?;
    let arrow_map = mirror_arrow_map(mirror, original, &unit_map)?;
    let functor = GroupoidFunctor {
        unit_map,
        arrow_map,
        variance: Variance::Covariant,
    };
    functor
        .verify(mirror.groupoid(), opposite)
        .map_err(Error::Functor)?;
    if !functor.is_bijective(mirror.groupoid(), opposite) {
        return Err(Error::Functor(FunctorViolation::NotBijective));
    }
    Ok(functor)
}

/// Units of the two models correspond by equal characters or equal points.
fn unit_identification(a: &GermGroupoid, b: &GermGroupoid) -> Result<Vec<UnitId>> {
    match (&a.units, &b.units) {
        (UnitSpace::Characters(ca), UnitSpace::Characters(cb)) => ca
            .characters()
            .iter()
            .map(|c| {
                cb.index_of(c)
                    .ok_or_else(|| Error::Internal(format!("character {c} missing on one side")))
            })
            .collect(),
        (UnitSpace::Points { points: pa, .. }, UnitSpace::Points { points: pb, .. }) => pa
            .iter()
            .map(|x| {
                pb.iter()
                    .position(|y| y == x)
                    .ok_or_else(|| Error::Internal(format!("point {x} missing on one side")))
            })
            .collect(),
        _ => Err(Error::Internal("unit spaces of different kinds".into())),
    }
}

/// `χ_x(e) = 1 iff x ∈ dom ρ(e)`.
pub fn point_character(s: &InverseSemigroup, rho: &Representation, x: usize) -> Character {
    Character::new(
        s.idempotents()
            .iter()
            .map(|&e| rho.image(e).in_domain(x))
            .collect(),
    )
}

/// The canonical functor `G_germ(S, ρ) → G_u(S)`, `[s, x] ↦ [s, χ_x]`.
pub fn germ_to_universal(
    germ: &GermGroupoid,
    rho: &Representation,
    universal: &GermGroupoid,
) -> Result<GroupoidFunctor> {
    let s = germ.semigroup();
    let space = universal
        .character_space()
        .ok_or_else(|| Error::Domain("target must be a universal groupoid".into()))?;
    for x in 0..rho.carrier() {
        if point_character(s, rho, x).is_zero() {
            return Err(Error::Domain(format!(
                "point {x} lies in no idempotent domain, so χ_{x} is zero"
            )));
        }
    }
    let points = match germ.unit_space() {
        UnitSpace::Points { points, .. } => points,
        UnitSpace::Characters(_) => {
            return Err(Error::Domain("source must be a representation germ groupoid".into()))
        }
    };
    let unit_map: Vec<UnitId> = points
        .iter()
        .map(|&x| {
            let chi = point_character(s, rho, x);
            space
                .index_of(&chi)
                .ok_or_else(|| Error::Domain(format!("χ_{x} = {chi} is not a character")))
        })
        .collect::<Result<_>>()?;
    let gg = germ.groupoid();
    let arrow_map = (0..gg.arrow_count())
        .map(|g| {
            let w = germ.word(g);
            universal.germ(w, unit_map[gg.src(g)]).ok_or_else(|| {
                Error::Internal(format!("[{w}, χ] missing from the universal groupoid"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let functor = GroupoidFunctor {
        unit_map,
        arrow_map,
        variance: Variance::Covariant,
    };
    functor
        .verify(gg, universal.groupoid())
        .map_err(Error::Functor)?;
    Ok(functor)
}

/// Germ-level counterpart of [`UniversalMirror`].
///
/// The mirror side is the germ groupoid of `S#` under `s ↦ ρ(s)⁻¹`, the
/// representation of the mirror semigroup induced by `ρ`. The pointwise
/// `ρ#(s) = ρ(s*)⁻¹` is also computed and its coincidence with `ρ` recorded.
#[derive(Clone, Debug)]
pub struct GermMirror {
    pub mirror: GermGroupoid,
    pub mirror_rep: Representation,
    pub germ: GermGroupoid,
    pub opposite: FiniteGroupoid,
    pub functor: GroupoidFunctor,
    pub literal_mirror_rep_is_trivial: bool,
}

pub fn germ_mirror_identification(s: &InverseSemigroup, rho: &Representation) -> Result<GermMirror> {
    let germ = build_germ_groupoid(s, rho)?;
    let sm = s.mirror();
    let mirror_rep = inverted_representation(&sm, rho)?;
    let mirror = build_germ_groupoid(&sm, &mirror_rep)?;
    let opposite = germ.groupoid().opposite();
    let functor = identify_with_opposite(&mirror, &germ, &opposite)?;
    let literal_mirror_rep_is_trivial = mirror_representation(s, rho).coincides_with_original;
    Ok(GermMirror {
        mirror,
        mirror_rep,
        germ,
        opposite,
        functor,
        literal_mirror_rep_is_trivial,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorSquareReport {
    pub arrows_checked: usize,
    /// First mirror-germ arrow where the two routes disagree.
    pub failure: Option<ArrowId>,
    pub germ_functor_injective: bool,
    pub germ_functor_surjective: bool,
    pub literal_mirror_rep_is_trivial: bool,
}

impl MirrorSquareReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that `Φ ∘ Ψ_germ = Ψ_u ∘ Φ#` on every arrow of `G_germ(S#, ρ⁻¹)`,
/// where `Φ`, `Φ#` are the germ-to-universal functors and `Ψ` the mirror
/// identifications.
pub fn verify_mirror_square(s: &InverseSemigroup, rho: &Representation) -> Result<MirrorSquareReport> {
    let um = canonical_universal_mirror(s)?;
    let gm = germ_mirror_identification(s, rho)?;
    let phi = germ_to_universal(&gm.germ, rho, &um.universal)?;
    let phi_mirror = germ_to_universal(&gm.mirror, &gm.mirror_rep, &um.mirror)?;
    let m = gm.mirror.groupoid().arrow_count();
    let failure = (0..m).find(|&g| {
        let via_germ = phi.arrow_map[gm.functor.arrow_map[g]];
        let via_universal = um.functor.arrow_map[phi_mirror.arrow_map[g]];
        via_germ != via_universal
    });
    Ok(MirrorSquareReport {
        arrows_checked: m,
        failure,
        germ_functor_injective: phi.is_injective_on_arrows(),
        germ_functor_surjective: phi.is_surjective_on_arrows(um.universal.groupoid()),
        literal_mirror_rep_is_trivial: gm.literal_mirror_rep_is_trivial,
    })
}
