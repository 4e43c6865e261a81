//! Isotopisms of finite (decorated, represented) semigroups: exhaustive
//! enumeration, autotopism groups, mirror-isotopisms and transport.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::is_permutation;
use crate::partial::{inverted_representation, Representation};
use crate::search::{factorial, merge_logs, SearchLimits, SearchLog, SearchOutcome};
use crate::semigroup::{DecoratedSemigroup, Element, InverseSemigroup, Semigroup};

/// Version tag of the intertwining predicate used for represented semigroups.
pub const INTERPRETATION: &str = "v1";

/// `(α, β, γ)` with `α(x)·β(y) = γ(x·y)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Isotopism {
    pub alpha: Vec<Element>,
    pub beta: Vec<Element>,
    pub gamma: Vec<Element>,
}

impl Isotopism {
    pub fn identity(n: usize) -> Self {
        let id: Vec<Element> = (0..n).collect();
        Isotopism {
            alpha: id.clone(),
            beta: id.clone(),
            gamma: id,
        }
    }

    /// `(p, p, p)`, the isotopism induced by a relabeling.
    pub fn from_permutation(p: &[Element]) -> Self {
        Isotopism {
            alpha: p.to_vec(),
            beta: p.to_vec(),
            gamma: p.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Full check of the defining identity, bijectivity and decorations.
    pub fn verify(&self, a: &DecoratedSemigroup, b: &DecoratedSemigroup) -> bool {
        let n = a.semigroup.order();
        if b.semigroup.order() != n
            || ![&self.alpha, &self.beta, &self.gamma]
                .iter()
                .all(|m| is_permutation(m, n))
        {
            return false;
        }
        let (sa, sb) = (&a.semigroup, &b.semigroup);
        let law = (0..n).all(|x| {
            (0..n).all(|y| sb.mul(self.alpha[x], self.beta[y]) == self.gamma[sa.mul(x, y)])
        });
        law && match (&a.decoration, &b.decoration) {
            (None, None) => true,
            (Some(da), Some(db)) => [&self.alpha, &self.beta, &self.gamma]
                .iter()
                .all(|m| da.iter().map(|&x| m[x]).collect::<std::collections::BTreeSet<_>>() == *db),
            _ => false,
        }
    }

    /// `self ∘ other`, componentwise.
    pub fn compose(&self, other: &Isotopism) -> Isotopism {
        let c = |f: &[Element], g: &[Element]| g.iter().map(|&x| f[x]).collect();
        Isotopism {
            alpha: c(&self.alpha, &other.alpha),
            beta: c(&self.beta, &other.beta),
            gamma: c(&self.gamma, &other.gamma),
        }
    }

    pub fn inverse(&self) -> Isotopism {
        let inv = |f: &[Element]| {
            let mut out = vec![0; f.len()];
            for (i, &x) in f.iter().enumerate() {
                out[x] = i;
            }
            out
        };
        Isotopism {
            alpha: inv(&self.alpha),
            beta: inv(&self.beta),
            gamma: inv(&self.gamma),
        }
    }

    /// `h#: A# → B#` for `h: A → B`, which is `(β, α, γ)`.
    pub fn mirror(&self) -> Isotopism {
        Isotopism {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            gamma: self.gamma.clone(),
        }
    }

    /// Canonical serialization, used as the weight-table key.
    pub fn key(&self) -> String {
        let j = |m: &[Element]| m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("a:{}|b:{}|g:{}", j(&self.alpha), j(&self.beta), j(&self.gamma))
    }
}

impl fmt::Display for Isotopism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// `(n!)² · k!`, where `k` counts the elements of `A` that are not products;
/// `γ` is forced everywhere else.
pub fn isotopism_search_bound(a: &Semigroup) -> f64 {
    let n = a.order();
    let free = a.products().iter().filter(|&&p| !p).count();
    factorial(n).powi(2) * factorial(free)
}

const NONE: usize = usize::MAX;

struct IsoSearch<'a> {
    a: &'a Semigroup,
    b: &'a Semigroup,
    sig_a: Option<Vec<bool>>,
    sig_b: Option<Vec<bool>>,
    n: usize,
    alpha: Vec<usize>,
    beta: Vec<usize>,
    gamma: Vec<usize>,
    used_alpha: Vec<bool>,
    used_beta: Vec<bool>,
    used_gamma: Vec<bool>,
    log: SearchLog,
    out: Vec<Isotopism>,
}

impl<'a> IsoSearch<'a> {
    fn new(a: &'a DecoratedSemigroup, b: &'a DecoratedSemigroup) -> Self {
        let n = a.semigroup.order();
        let mask = |d: &Option<std::collections::BTreeSet<Element>>| {
            d.as_ref().map(|d| (0..n).map(|x| d.contains(&x)).collect())
        };
        IsoSearch {
            a: &a.semigroup,
            b: &b.semigroup,
            sig_a: mask(&a.decoration),
            sig_b: mask(&b.decoration),
            n,
            alpha: vec![NONE; n],
            beta: vec![NONE; n],
            gamma: vec![NONE; n],
            used_alpha: vec![false; n],
            used_beta: vec![false; n],
            used_gamma: vec![false; n],
            log: SearchLog::default(),
            out: Vec::new(),
        }
    }

    #[inline]
    fn decoration_ok(&self, x: Element, v: Element) -> bool {
        match (&self.sig_a, &self.sig_b) {
            (Some(sa), Some(sb)) => sa[x] == sb[v],
            _ => true,
        }
    }

    /// Forces `γ(z) = w`; records new assignments in `trail`.
    #[inline]
    fn force_gamma(&mut self, z: Element, w: Element, trail: &mut Vec<Element>) -> bool {
        let g = self.gamma[z];
        if g != NONE {
            return g == w;
        }
        if self.used_gamma[w] || !self.decoration_ok(z, w) {
            return false;
        }
        self.gamma[z] = w;
        self.used_gamma[w] = true;
        trail.push(z);
        true
    }

    fn undo(&mut self, trail: &[Element]) {
        for &z in trail {
            self.used_gamma[self.gamma[z]] = false;
            self.gamma[z] = NONE;
        }
    }

    /// Assigns variable `k` (`α(k/2)` for even `k`, `β(k/2)` for odd) to `v`.
    fn assign(&mut self, k: usize, v: Element, trail: &mut Vec<Element>) -> bool {
        let x = k / 2;
        let is_alpha = k % 2 == 0;
        let used = if is_alpha { &self.used_alpha } else { &self.used_beta };
        if used[v] || !self.decoration_ok(x, v) {
            return false;
        }
        if is_alpha {
            self.alpha[x] = v;
            self.used_alpha[v] = true;
        } else {
            self.beta[x] = v;
            self.used_beta[v] = true;
        }
        // α(x) meets β(0..x) and, for β, α(0..=x) meets β(x)
        let limit = if is_alpha { x } else { x + 1 };
        for y in 0..limit {
            let (z, w) = if is_alpha {
                (self.a.mul(x, y), self.b.mul(v, self.beta[y]))
            } else {
                (self.a.mul(y, x), self.b.mul(self.alpha[y], v))
            };
            if !self.force_gamma(z, w, trail) {
                return false;
            }
        }
        true
    }

    fn unassign(&mut self, k: usize) {
        let x = k / 2;
        if k % 2 == 0 {
            if self.alpha[x] != NONE {
                self.used_alpha[self.alpha[x]] = false;
                self.alpha[x] = NONE;
            }
        } else if self.beta[x] != NONE {
            self.used_beta[self.beta[x]] = false;
            self.beta[x] = NONE;
        }
    }

    fn try_value(&mut self, k: usize, v: Element) {
        let mut trail = Vec::new();
        let ok = self.assign(k, v, &mut trail);
        self.log.visit(0, k, v, ok);
        if ok {
            self.descend(k + 1);
        }
        self.undo(&trail);
        self.unassign(k);
    }

    fn descend(&mut self, k: usize) {
        if k == 2 * self.n {
            let free: Vec<Element> = (0..self.n).filter(|&z| self.gamma[z] == NONE).collect();
            self.complete_gamma(&free, 0);
            return;
        }
        for v in 0..self.n {
            self.try_value(k, v);
        }
    }

    /// `γ` on non-products is unconstrained apart from bijectivity and decoration.
    fn complete_gamma(&mut self, free: &[Element], i: usize) {
        if i == free.len() {
            self.out.push(Isotopism {
                alpha: self.alpha.clone(),
                beta: self.beta.clone(),
                gamma: self.gamma.clone(),
            });
            return;
        }
        let z = free[i];
        for w in 0..self.n {
            let ok = !self.used_gamma[w] && self.decoration_ok(z, w);
            self.log.visit(1, z, w, ok);
            if ok {
                self.gamma[z] = w;
                self.used_gamma[w] = true;
                self.complete_gamma(free, i + 1);
                self.used_gamma[w] = false;
                self.gamma[z] = NONE;
            }
        }
    }
}

fn check_decorations(a: &DecoratedSemigroup, b: &DecoratedSemigroup) -> Result<bool> {
    match (&a.decoration, &b.decoration) {
        (None, None) => Ok(true),
        (Some(da), Some(db)) => Ok(da.len() == db.len()),
        _ => Err(Error::invalid(
            "decoration",
            "isotopisms need both sides decorated or neither",
        )),
    }
}

/// Every isotopism `A → B`, sorted. Sizes that differ give an empty list.
pub fn enumerate_isotopisms(
    a: &DecoratedSemigroup,
    b: &DecoratedSemigroup,
    limits: SearchLimits,
) -> Result<SearchOutcome<Isotopism>> {
    let n = a.semigroup.order();
    let bound = isotopism_search_bound(&a.semigroup);
    if b.semigroup.order() != n || !check_decorations(a, b)? || n == 0 {
        return Ok(SearchOutcome {
            results: vec![],
            nodes: 0,
            log_hash: merge_logs(vec![]).1,
            bound,
        });
    }
    limits.check(bound)?;
    let branches: Vec<(Vec<Isotopism>, SearchLog)> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut search = IsoSearch::new(a, b);
            search.try_value(0, v);
            (search.out, search.log)
        })
        .collect();
    let mut results = Vec::new();
    let mut logs = Vec::new();
    for (r, l) in branches {
        results.extend(r);
        logs.push(l);
    }
    if let Some(bad) = results.iter().find(|h| !h.verify(a, b)) {
        return Err(Error::Internal(format!("search emitted a non-isotopism {bad}")));
    }
    results.sort();
    let (nodes, log_hash) = merge_logs(logs);
    Ok(SearchOutcome {
        results,
        nodes,
        log_hash,
        bound,
    })
}

/// `Atp(A)`, with a closure certificate: the list is checked to be closed under
/// composition and inverses and to contain the identity.
pub fn autotopism_group(
    a: &DecoratedSemigroup,
    limits: SearchLimits,
) -> Result<SearchOutcome<Isotopism>> {
    let outcome = enumerate_isotopisms(a, a, limits)?;
    check_group(&outcome.results, a.semigroup.order())?;
    Ok(outcome)
}

fn check_group(elements: &[Isotopism], n: usize) -> Result<()> {
    let set: HashSet<&Isotopism> = elements.iter().collect();
    if !set.contains(&Isotopism::identity(n)) {
        return Err(Error::Internal("autotopisms lack the identity".into()));
    }
    let missing = elements.par_iter().find_any(|f| {
        !set.contains(&f.inverse()) || elements.iter().any(|g| !set.contains(&f.compose(g)))
    });
    if let Some(f) = missing {
        return Err(Error::Internal(format!("autotopisms not closed at {f}")));
    }
    Ok(())
}

/// `Mir(A) = Iso(A, A#)`.
pub fn mirror_set_semigroup(
    a: &DecoratedSemigroup,
    limits: SearchLimits,
) -> Result<SearchOutcome<Isotopism>> {
    enumerate_isotopisms(a, &a.mirror(), limits)
}

/// An inverse semigroup together with a faithful representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentedSemigroup {
    pub semigroup: InverseSemigroup,
    pub rep: Representation,
}

impl RepresentedSemigroup {
    pub fn new(semigroup: InverseSemigroup, rep: Representation) -> Result<Self> {
        let violations = Representation::validate(&semigroup, rep.carrier(), rep.images())?;
        if let Some(v) = violations.first() {
            return Err(Error::invalid("representation", v));
        }
        Ok(RepresentedSemigroup { semigroup, rep })
    }

    /// `(S#, s ↦ ρ(s)⁻¹)`.
    pub fn mirror(&self) -> Result<RepresentedSemigroup> {
        let m = self.semigroup.mirror();
        let rep = inverted_representation(&m, &self.rep)?;
        Ok(RepresentedSemigroup { semigroup: m, rep })
    }

    pub fn permuted(&self, perm: &[Element]) -> RepresentedSemigroup {
        RepresentedSemigroup {
            semigroup: self.semigroup.permuted(perm),
            rep: self.rep.permuted_elements(perm),
        }
    }

    fn decorated(&self) -> DecoratedSemigroup {
        DecoratedSemigroup::undecorated(self.semigroup.semigroup().clone())
    }
}

/// The v1 intertwining predicate against the target representation `σ`:
/// `σ(α(s)) = σ(β(s)) = σ(γ(s))` for every `s`.
pub fn intertwines_v1(h: &Isotopism, target: &RepresentedSemigroup) -> bool {
    let img = |x: Element| target.rep.image(x);
    (0..h.len()).all(|s| img(h.alpha[s]) == img(h.beta[s]) && img(h.beta[s]) == img(h.gamma[s]))
}

/// A represented isotopism with the interpretation tag it was accepted under.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RepresentedIsotopism {
    pub isotopism: Isotopism,
    pub interpretation: &'static str,
}

pub fn enumerate_represented_isotopisms(
    a: &RepresentedSemigroup,
    b: &RepresentedSemigroup,
    limits: SearchLimits,
) -> Result<SearchOutcome<RepresentedIsotopism>> {
    let outcome = enumerate_isotopisms(&a.decorated(), &b.decorated(), limits)?;
    let results = outcome
        .results
        .into_iter()
        .filter(|h| intertwines_v1(h, b))
        .map(|isotopism| RepresentedIsotopism {
            isotopism,
            interpretation: INTERPRETATION,
        })
        .collect();
    Ok(SearchOutcome {
        results,
        nodes: outcome.nodes,
        log_hash: outcome.log_hash,
        bound: outcome.bound,
    })
}

/// `Mir(S, ρ) = Iso((S, ρ), (S, ρ)#)`.
pub fn mirror_set_represented(
    a: &RepresentedSemigroup,
    limits: SearchLimits,
) -> Result<SearchOutcome<RepresentedIsotopism>> {
    enumerate_represented_isotopisms(a, &a.mirror()?, limits)
}

/// `h# ∘ m ∘ h⁻¹` for every `m`, sorted.
pub fn transport_mirror_set(h: &Isotopism, mir: &[Isotopism]) -> Vec<Isotopism> {
    let hm = h.mirror();
    let hinv = h.inverse();
    let mut out: Vec<Isotopism> = mir.iter().map(|m| hm.compose(&m.compose(&hinv))).collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub transported: usize,
    pub target: usize,
    /// A transported morphism missing from the target set.
    pub missing: Option<Isotopism>,
    /// A target morphism not hit by transport.
    pub unmatched: Option<Isotopism>,
    /// Two sources transported to the same morphism.
    pub collision: bool,
}

impl TransportReport {
    pub fn passed(&self) -> bool {
        self.missing.is_none() && self.unmatched.is_none() && !self.collision
    }
}

/// Checks that conjugation by `h` maps `mir_a` bijectively onto `mir_b`.
pub fn verify_transport(h: &Isotopism, mir_a: &[Isotopism], mir_b: &[Isotopism]) -> TransportReport {
    let moved = transport_mirror_set(h, mir_a);
    let moved_set: HashSet<&Isotopism> = moved.iter().collect();
    let target: HashSet<&Isotopism> = mir_b.iter().collect();
    TransportReport {
        transported: moved.len(),
        target: mir_b.len(),
        missing: moved.iter().find(|m| !target.contains(m)).cloned(),
        unmatched: mir_b.iter().find(|m| !moved_set.contains(m)).cloned(),
        collision: moved_set.len() != moved.len(),
    }
}

/// Whether `candidate = reference ∘ b` for some autotopism `b`.
pub fn is_admissible_transition(
    atp: &[Isotopism],
    reference: &Isotopism,
    candidate: &Isotopism,
) -> bool {
    atp.iter().any(|b| &reference.compose(b) == candidate)
}
