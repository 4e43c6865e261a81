//! Twisted convolution algebras of finite groupoids, held as exact structure
//! constants on the basis `{δ_γ}`.

use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::circle::{lcm, CircleValue};
use crate::error::{Error, Result};
use crate::groupoid::{is_permutation, ArrowId, FiniteGroupoid};
use crate::groupoid_iso::{enumerate_groupoid_isos, groupoid_search_bound, GroupoidIso, TwistedGroupoid};
use crate::search::{SearchLimits, SearchLog};
use crate::twist::GroupoidCocycle;

/// `c·δ_k`, or zero.
type Monomial = Option<(usize, CircleValue)>;

fn mono_mul(alg: &TwistedAlgebra, x: Monomial, y: Monomial) -> Monomial {
    let ((a, s), (b, t)) = (x?, y?);
    let (c, u) = alg.mult(a, b)?;
    Some((c, s * t * u))
}

fn mono_star(alg: &TwistedAlgebra, x: Monomial) -> Monomial {
    let (a, s) = x?;
    let (b, t) = alg.star(a);
    Some((b, s.conj() * t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraViolation {
    Associativity { a: usize, b: usize, c: usize },
    StarAntiMultiplicative { a: usize, b: usize },
    StarInvolution { a: usize },
    NotBijective,
    Multiplicative { a: usize, b: usize },
    StarPreserving { a: usize },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AlgebraViolation::Associativity { a, b, c } => {
                write!(f, "(δ{a}·δ{b})·δ{c} ≠ δ{a}·(δ{b}·δ{c})")
            }
            AlgebraViolation::StarAntiMultiplicative { a, b } => {
                write!(f, "(δ{a}·δ{b})* ≠ δ{b}*·δ{a}*")
            }
            AlgebraViolation::StarInvolution { a } => write!(f, "δ{a}** ≠ δ{a}"),
            AlgebraViolation::NotBijective => write!(f, "basis map is not a bijection"),
            AlgebraViolation::Multiplicative { a, b } => {
                write!(f, "map is not multiplicative on (δ{a}, δ{b})")
            }
            AlgebraViolation::StarPreserving { a } => write!(f, "map does not commute with * on δ{a}"),
        }
    }
}

/// Basis `δ_γ` per arrow; `δ_α·δ_β = σ(α,β)δ_{αβ}` when composable, else 0;
/// `δ_γ* = conj σ(γ⁻¹,γ)·δ_{γ⁻¹}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedAlgebra {
    groupoid: FiniteGroupoid,
    mult: Vec<Monomial>,
    star: Vec<(usize, CircleValue)>,
}

impl TwistedAlgebra {
    pub fn dim(&self) -> usize {
        self.star.len()
    }

    /// The groupoid whose arrows index the basis.
    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    #[inline]
    pub fn mult(&self, a: usize, b: usize) -> Monomial {
        self.mult[a * self.dim() + b]
    }

    #[inline]
    pub fn star(&self, a: usize) -> (usize, CircleValue) {
        self.star[a]
    }

    /// All structure constants, for phase-group computations.
    pub fn constants(&self) -> impl Iterator<Item = CircleValue> + '_ {
        self.mult
            .iter()
            .flatten()
            .map(|&(_, c)| c)
            .chain(self.star.iter().map(|&(_, c)| c))
    }

    /// Associativity on all basis triples, `(ab)* = b*a*` on all pairs, `** = id`.
    pub fn verify(&self) -> std::result::Result<(), AlgebraViolation> {
        let d = self.dim();
        let basis = |a: usize| Some((a, CircleValue::ONE));
        for a in 0..d {
            if mono_star(self, mono_star(self, basis(a))) != basis(a) {
                return Err(AlgebraViolation::StarInvolution { a });
            }
            for b in 0..d {
                let ab = mono_mul(self, basis(a), basis(b));
                let lhs = mono_star(self, ab);
                let rhs = mono_mul(self, mono_star(self, basis(b)), mono_star(self, basis(a)));
                if lhs != rhs {
                    return Err(AlgebraViolation::StarAntiMultiplicative { a, b });
                }
                for c in 0..d {
                    let l = mono_mul(self, ab, basis(c));
                    let r = mono_mul(self, basis(a), mono_mul(self, basis(b), basis(c)));
                    if l != r {
                        return Err(AlgebraViolation::Associativity { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// `{"format": 1, "dim", "mult": [[i, j, k, [n, d]]], "star": [[i, k, [n, d]]]}`;
    /// zero products are omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let d = self.dim();
        let mult: Vec<_> = (0..d * d)
            .filter_map(|k| self.mult[k].map(|(c, v)| json!([k / d, k % d, c, v])))
            .collect();
        let star: Vec<_> = self
            .star
            .iter()
            .enumerate()
            .map(|(i, &(k, v))| json!([i, k, v]))
            .collect();
        json!({"format": 1, "dim": d, "mult": mult, "star": star})
    }
}

/// The twisted convolution algebra of `(G, σ)`; refuses an invalid cocycle.
pub fn build_algebra(tg: &TwistedGroupoid) -> Result<TwistedAlgebra> {
    let g = &tg.groupoid;
    let sigma: &GroupoidCocycle = &tg.cocycle;
    if let Some(v) = sigma.validate(g).first() {
        return Err(Error::invalid("cocycle", v));
    }
    let m = g.arrow_count();
    let mut mult = vec![None; m * m];
    for (a, b) in g.composable_pairs() {
        mult[a * m + b] = Some((g.compose(a, b).unwrap(), sigma.get(a, b).unwrap()));
    }
    let star = (0..m)
        .map(|a| {
            let ai = g.inv(a);
            (ai, sigma.get(ai, a).unwrap().conj())
        })
        .collect();
    let alg = TwistedAlgebra {
        groupoid: g.clone(),
        mult,
        star,
    };
    alg.verify().map_err(|v| Error::Internal(format!("convolution algebra: {v}")))?;
    Ok(alg)
}

/// Reversed multiplication, same involution; indexed by `G^op`.
pub fn opposite_algebra(a: &TwistedAlgebra) -> Result<TwistedAlgebra> {
    let d = a.dim();
    let mut mult = vec![None; d * d];
    for x in 0..d {
        for y in 0..d {
            mult[x * d + y] = a.mult(y, x);
        }
    }
    let op = TwistedAlgebra {
        groupoid: a.groupoid.opposite(),
        mult,
        star: a.star.clone(),
    };
    op.verify().map_err(|v| Error::Internal(format!("opposite algebra: {v}")))?;
    Ok(op)
}

/// `δ_a ↦ c_a·δ_{π(a)}`, extended linearly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraMap {
    pub basis_map: Vec<(usize, CircleValue)>,
}

impl AlgebraMap {
    pub fn identity(dim: usize) -> Self {
        AlgebraMap {
            basis_map: (0..dim).map(|a| (a, CircleValue::ONE)).collect(),
        }
    }

    fn image(&self, x: Monomial) -> Monomial {
        let (a, s) = x?;
        let (b, c) = self.basis_map[a];
        Some((b, s * c))
    }

    /// Bijective on the basis, multiplicative and `*`-preserving on every
    /// basis pair.
    pub fn verify(&self, from: &TwistedAlgebra, to: &TwistedAlgebra) -> std::result::Result<(), AlgebraViolation> {
        let d = from.dim();
        let perm: Vec<usize> = self.basis_map.iter().map(|&(b, _)| b).collect();
        if to.dim() != d || !is_permutation(&perm, d) {
            return Err(AlgebraViolation::NotBijective);
        }
        let basis = |a: usize| Some((a, CircleValue::ONE));
        for a in 0..d {
            if self.image(mono_star(from, basis(a))) != mono_star(to, self.image(basis(a))) {
                return Err(AlgebraViolation::StarPreserving { a });
            }
            for b in 0..d {
                let lhs = self.image(mono_mul(from, basis(a), basis(b)));
                let rhs = mono_mul(to, self.image(basis(a)), self.image(basis(b)));
                if lhs != rhs {
                    return Err(AlgebraViolation::Multiplicative { a, b });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackReport {
    pub map: AlgebraMap,
    pub failure: Option<AlgebraViolation>,
}

impl PullbackReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `f ↦ f ∘ Φ⁻¹`, i.e. `δ_γ ↦ δ_{Φ(γ)}`, checked against both tables.
pub fn pullback_map(phi: &GroupoidIso, from: &TwistedAlgebra, to: &TwistedAlgebra) -> PullbackReport {
    let map = AlgebraMap {
        basis_map: phi.arrow_map.iter().map(|&b| (b, CircleValue::ONE)).collect(),
    };
    let failure = map.verify(from, to).err();
    PullbackReport { map, failure }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraIsoVerdict {
    pub isomorphic: bool,
    pub map: Option<AlgebraMap>,
    /// Phases range over the `phase_order`-th roots of unity.
    pub phase_order: u64,
    pub nodes: u64,
    pub scope: String,
}

/// Searches `A → B` over monomial maps: basis bijections that are groupoid
/// isomorphisms of the indexing groupoids, with one phase per basis element
/// from the cyclic group generated by all structure constants of `A` and `B`.
/// A negative verdict holds only within that scope.
pub fn algebras_isomorphic(
    a: &TwistedAlgebra,
    b: &TwistedAlgebra,
    limits: SearchLimits,
) -> Result<AlgebraIsoVerdict> {
    let order = a.constants().chain(b.constants()).fold(1, |acc, c| lcm(acc, c.den()));
    let scope = format!("monomial maps, phases in the cyclic group of order {order}");
    let mut verdict = AlgebraIsoVerdict {
        isomorphic: false,
        map: None,
        phase_order: order,
        nodes: 0,
        scope,
    };
    if a.dim() != b.dim() {
        return Ok(verdict);
    }
    let free = a.dim().saturating_sub(a.groupoid.unit_count()) as i32;
    limits.check(groupoid_search_bound(&a.groupoid) * (order as f64).powi(free))?;
    let shapes = enumerate_groupoid_isos(
        &TwistedGroupoid::untwisted(a.groupoid.clone()),
        &TwistedGroupoid::untwisted(b.groupoid.clone()),
        limits,
    )?;
    verdict.nodes = shapes.nodes;
    for phi in &shapes.results {
        let mut search = PhaseSearch::new(a, b, &phi.arrow_map, order);
        let found = search.run();
        verdict.nodes += search.log.nodes;
        if let Some(map) = found {
            if let Err(v) = map.verify(a, b) {
                return Err(Error::Internal(format!("phase search emitted a bad map: {v}")));
            }
            verdict.isomorphic = true;
            verdict.map = Some(map);
            break;
        }
    }
    Ok(verdict)
}

const UNSET: u64 = u64::MAX;

/// Phases as exponents `k` of `exp(2πi·k/N)`, with propagation.
struct PhaseSearch<'a> {
    a: &'a TwistedAlgebra,
    b: &'a TwistedAlgebra,
    pi: &'a [ArrowId],
    order: u64,
    phase: Vec<u64>,
    assigned: Vec<ArrowId>,
    log: SearchLog,
}

impl<'a> PhaseSearch<'a> {
    fn new(a: &'a TwistedAlgebra, b: &'a TwistedAlgebra, pi: &'a [ArrowId], order: u64) -> Self {
        PhaseSearch {
            a,
            b,
            pi,
            order,
            phase: vec![UNSET; a.dim()],
            assigned: Vec::new(),
            log: SearchLog::default(),
        }
    }

    fn exp(&self, c: CircleValue) -> u64 {
        c.num() * (self.order / c.den())
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.order
    }

    fn neg(&self, x: u64) -> u64 {
        (self.order - x) % self.order
    }

    /// Sets `phase[x] = k` and everything it forces; false on contradiction.
    fn set(&mut self, x: usize, k: u64) -> bool {
        let mut queue = vec![(x, k)];
        while let Some((x, k)) = queue.pop() {
            if self.phase[x] != UNSET {
                if self.phase[x] != k {
                    return false;
                }
                continue;
            }
            self.phase[x] = k;
            self.assigned.push(x);
            // φ(δx*) = φ(δx)*:  t_x + c_{x'} = -c_x + t'_{πx}
            let (xi, t) = self.a.star(x);
            let (_, t2) = self.b.star(self.pi[x]);
            let want = self.add(self.neg(self.exp(t)), self.add(self.neg(k), self.exp(t2)));
            queue.push((xi, want));
            // c_x + c_y + τ(πx, πy) = c_{xy} + σ(x, y)
            for y in 0..self.a.dim() {
                let ky = if y == x { k } else { self.phase[y] };
                if ky == UNSET {
                    continue;
                }
                for (p, q, kp, kq) in [(x, y, k, ky), (y, x, ky, k)] {
                    if let Some((pq, s)) = self.a.mult(p, q) {
                        let (_, t) = self.b.mult(self.pi[p], self.pi[q]).expect("π is a groupoid map");
                        let want = self.add(self.add(kp, kq), self.add(self.exp(t), self.neg(self.exp(s))));
                        queue.push((pq, want));
                    }
                }
            }
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        for x in self.assigned.drain(mark..) {
            self.phase[x] = UNSET;
        }
    }

    fn run(&mut self) -> Option<AlgebraMap> {
        let next = self.phase.iter().position(|&p| p == UNSET);
        let Some(x) = next else {
            return Some(AlgebraMap {
                basis_map: (0..self.a.dim())
                    .map(|a| (self.pi[a], CircleValue::root_of_unity(self.phase[a], self.order)))
                    .collect(),
            });
        };
        for k in 0..self.order {
            let mark = self.assigned.len();
            let ok = self.set(x, k);
            self.log.visit(4, x, k as usize, ok);
            if ok {
                if let Some(map) = self.run() {
                    return Some(map);
                }
            }
            self.rollback(mark);
        }
        None
    }
}

/// The two readings of the opposite-algebra identity that type-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OppositeReport {
    /// `A(G,σ)^op` equals `A(G^op, (g,h) ↦ σ(h,g))` table for table.
    pub reversed_twist_equal: bool,
    /// `A(G,σ)^op ≅ A(G, conj σ)`, searched within the phase scope.
    pub conjugate_twist: AlgebraIsoVerdict,
}

impl OppositeReport {
    pub fn passed(&self) -> bool {
        self.reversed_twist_equal && self.conjugate_twist.isomorphic
    }
}

pub fn verify_opposite_identifications(tg: &TwistedGroupoid, limits: SearchLimits) -> Result<OppositeReport> {
    let alg = build_algebra(tg)?;
    let op = opposite_algebra(&alg)?;
    let g = &tg.groupoid;
    let sigma = &tg.cocycle;
    let reversed = TwistedGroupoid::new(
        g.opposite(),
        GroupoidCocycle::from_fn(&g.opposite(), |a, b| sigma.get(b, a).unwrap()),
    )?;
    let reversed_twist_equal = build_algebra(&reversed)? == op;
    let conj = TwistedGroupoid::new(
        g.clone(),
        GroupoidCocycle::from_fn(g, |a, b| sigma.get(a, b).unwrap().conj()),
    )?;
    let conjugate_twist = algebras_isomorphic(&op, &build_algebra(&conj)?, limits)?;
    Ok(OppositeReport {
        reversed_twist_equal,
        conjugate_twist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::germ::build_universal_groupoid;
    use crate::twist::induce_cocycle;

    fn twisted(name: &str, twist: usize) -> TwistedGroupoid {
        let inst = corpus::instance(name).unwrap();
        let g = build_universal_groupoid(&inst.semigroup).unwrap();
        let sigma = induce_cocycle(&g, &inst.twists[twist].1).unwrap();
        TwistedGroupoid::new(g.groupoid().clone(), sigma).unwrap()
    }

    #[test]
    fn z2_group_algebra() {
        let alg = build_algebra(&twisted("z2", 0)).unwrap();
        assert_eq!(alg.mult(1, 1), Some((0, CircleValue::ONE)));
        let signed = build_algebra(&twisted("z2", 1)).unwrap();
        assert_eq!(signed.mult(1, 1), Some((0, CircleValue::root_of_unity(1, 2))));
    }

    #[test]
    fn matrix_units() {
        let g = FiniteGroupoid::pair_groupoid(2).unwrap();
        let alg = build_algebra(&TwistedGroupoid::untwisted(g.clone())).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let expect = g.compose(a, b).map(|c| (c, CircleValue::ONE));
                assert_eq!(alg.mult(a, b), expect);
            }
        }
        let op = opposite_algebra(&alg).unwrap();
        let v = algebras_isomorphic(&alg, &op, SearchLimits::default()).unwrap();
        assert!(v.isomorphic);
        assert_eq!(opposite_algebra(&op).unwrap().mult, alg.mult);
    }

    #[test]
    fn identity_pullback() {
        let tg = twisted("z4", 1);
        let alg = build_algebra(&tg).unwrap();
        assert!(pullback_map(&GroupoidIso::identity(&tg.groupoid), &alg, &alg).passed());
    }

    #[test]
    fn z2_sign_twist_is_not_monomially_isomorphic_to_untwisted() {
        let a = build_algebra(&twisted("z2", 0)).unwrap();
        let b = build_algebra(&twisted("z2", 1)).unwrap();
        let v = algebras_isomorphic(&a, &b, SearchLimits::default()).unwrap();
        assert_eq!(v.phase_order, 2);
        assert!(!v.isomorphic);
    }

    #[test]
    fn opposite_identifications_hold_for_klein_bicharacter() {
        let r = verify_opposite_identifications(&twisted("klein", 1), SearchLimits::default()).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
