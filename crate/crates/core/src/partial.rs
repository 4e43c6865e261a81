//! Partial bijections of a finite set and representations by them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{Element, InverseSemigroup};

/// A partial injective map on `{0, .., carrier-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    carrier: usize,
    map: Vec<Option<usize>>,
}

impl PartialBijection {
    pub fn new(carrier: usize, map: Vec<Option<usize>>) -> Result<Self> {
        if map.len() != carrier {
            return Err(Error::Format(format!(
                "map has {} slots for a carrier of size {carrier}",
                map.len()
            )));
        }
        let mut hit = vec![false; carrier];
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = *y {
                if y >= carrier {
                    return Err(Error::Format(format!("{x} ↦ {y} leaves the carrier")));
                }
                if hit[y] {
                    return Err(Error::invalid(
                        "partial bijection",
                        format!("{y} has two preimages"),
                    ));
                }
                hit[y] = true;
            }
        }
        Ok(PartialBijection { carrier, map })
    }

    pub fn from_pairs(carrier: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut map = vec![None; carrier];
        for &(x, y) in pairs {
            if x >= carrier {
                return Err(Error::Format(format!("{x} is outside the carrier")));
            }
            if map[x].replace(y).is_some() {
                return Err(Error::Format(format!("{x} is mapped twice")));
            }
        }
        Self::new(carrier, map)
    }

    pub fn empty(carrier: usize) -> Self {
        PartialBijection {
            carrier,
            map: vec![None; carrier],
        }
    }

    pub fn identity(carrier: usize) -> Self {
        PartialBijection {
            carrier,
            map: (0..carrier).map(Some).collect(),
        }
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn in_domain(&self, x: usize) -> bool {
        self.apply(x).is_some()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.carrier).filter(|&x| self.in_domain(x)).collect()
    }

    pub fn range(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.map.iter().flatten().copied().collect();
        r.sort_unstable();
        r
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect()
    }

    /// `self ∘ g`: apply `g` first.
    pub fn compose(&self, g: &PartialBijection) -> Result<PartialBijection> {
        if self.carrier != g.carrier {
            return Err(Error::CarrierMismatch {
                left: self.carrier,
                right: g.carrier,
            });
        }
        let map = g.map.iter().map(|y| y.and_then(|y| self.apply(y))).collect();
        Ok(PartialBijection {
            carrier: self.carrier,
            map,
        })
    }

    pub fn inverse(&self) -> PartialBijection {
        let mut map = vec![None; self.carrier];
        for (x, y) in self.pairs() {
            map[y] = Some(x);
        }
        PartialBijection {
            carrier: self.carrier,
            map,
        }
    }

    /// A partial identity.
    pub fn is_idempotent(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(x, y)| y.map_or(true, |y| y == x))
    }
}

impl fmt::Display for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, (x, y)) in self.pairs().into_iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}↦{y}")?;
        }
        write!(f, "}}")
    }
}

pub fn compose_partial(f: &PartialBijection, g: &PartialBijection) -> Result<PartialBijection> {
    f.compose(g)
}

pub fn invert_partial(f: &PartialBijection) -> PartialBijection {
    f.inverse()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepresentationViolation {
    CarrierMismatch { element: Element },
    NotMultiplicative { i: Element, j: Element },
    StarIncompatible { i: Element },
    NotFaithful { i: Element, j: Element },
}

impl fmt::Display for RepresentationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RepresentationViolation::CarrierMismatch { element } => {
                write!(f, "image of {element} lives on a different carrier")
            }
            RepresentationViolation::NotMultiplicative { i, j } => {
                write!(f, "ρ({i}·{j}) ≠ ρ({i})∘ρ({j})")
            }
            RepresentationViolation::StarIncompatible { i } => write!(f, "ρ({i}*) ≠ ρ({i})⁻¹"),
            RepresentationViolation::NotFaithful { i, j } => write!(f, "ρ({i}) = ρ({j})"),
        }
    }
}

/// A faithful homomorphism `S → I(X)`, one partial bijection per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    carrier: usize,
    images: Vec<PartialBijection>,
}

impl Representation {
    pub fn validate(
        s: &InverseSemigroup,
        carrier: usize,
        images: &[PartialBijection],
    ) -> Result<Vec<RepresentationViolation>> {
        if images.len() != s.order() {
            return Err(Error::Format(format!(
                "{} images for {} elements",
                images.len(),
                s.order()
            )));
        }
        let mut out = Vec::new();
        for (element, img) in images.iter().enumerate() {
            if img.carrier() != carrier {
                out.push(RepresentationViolation::CarrierMismatch { element });
            }
        }
        if !out.is_empty() {
            return Ok(out);
        }
        let n = s.order();
        for i in 0..n {
            for j in 0..n {
                if images[s.mul(i, j)] != images[i].compose(&images[j])? {
                    out.push(RepresentationViolation::NotMultiplicative { i, j });
                }
            }
        }
        for i in 0..n {
            if images[s.star(i)] != images[i].inverse() {
                out.push(RepresentationViolation::StarIncompatible { i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if images[i] == images[j] {
                    out.push(RepresentationViolation::NotFaithful { i, j });
                }
            }
        }
        Ok(out)
    }

    pub fn new(s: &InverseSemigroup, carrier: usize, images: Vec<PartialBijection>) -> Result<Self> {
        let violations = Self::validate(s, carrier, &images)?;
        if let Some(v) = violations.first() {
            return Err(Error::invalid("representation", v));
        }
        Ok(Representation { carrier, images })
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn image(&self, s: Element) -> &PartialBijection {
        &self.images[s]
    }

    pub fn images(&self) -> &[PartialBijection] {
        &self.images
    }

    /// Relabels semigroup elements to match `S.permuted(perm)`.
    pub fn permuted_elements(&self, perm: &[Element]) -> Representation {
        let mut images = self.images.clone();
        for (i, img) in self.images.iter().enumerate() {
            images[perm[i]] = img.clone();
        }
        Representation {
            carrier: self.carrier,
            images,
        }
    }
}

/// The Wagner–Preston representation on the underlying set of `S`:
/// `s` maps `x ↦ s·x` on `{x : s*s·x = x}`.
pub fn wagner_preston(s: &InverseSemigroup) -> Result<Representation> {
    let n = s.order();
    let images = (0..n)
        .map(|a| {
            let e = s.source_idempotent(a);
            let map = (0..n)
                .map(|x| (s.mul(e, x) == x).then(|| s.mul(a, x)))
                .collect();
            PartialBijection::new(n, map)
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(s, n, images)
}

/// `ρ#(s) = ρ(s*)⁻¹`, computed pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorRepresentation {
    pub images: Vec<PartialBijection>,
    /// `ρ# = ρ` pointwise.
    pub coincides_with_original: bool,
}

pub fn mirror_representation(s: &InverseSemigroup, rho: &Representation) -> MirrorRepresentation {
    let images: Vec<PartialBijection> = (0..s.order())
        .map(|a| rho.image(s.star(a)).inverse())
        .collect();
    let coincides_with_original = images.as_slice() == rho.images();
    MirrorRepresentation {
        images,
        coincides_with_original,
    }
}

impl MirrorRepresentation {
    pub fn into_representation(self, s: &InverseSemigroup, carrier: usize) -> Result<Representation> {
        Representation::new(s, carrier, self.images)
    }
}

/// `s ↦ ρ(s)⁻¹`, which is a representation of the mirror semigroup `S#`.
pub fn inverted_representation(
    mirror: &InverseSemigroup,
    rho: &Representation,
) -> Result<Representation> {
    let images = rho.images().iter().map(PartialBijection::inverse).collect();
    Representation::new(mirror, rho.carrier(), images)
}
