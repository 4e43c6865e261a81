//! Twist-preserving isomorphisms between finite twisted groupoids and the
//! mirror set `Mir(G, σ) = Iso((G, σ), (G^op, σ#))`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid, UnitId};
use crate::search::{factorial, merge_logs, SearchLimits, SearchLog, SearchOutcome};
use crate::twist::{mirror_cocycle, GroupoidCocycle};

/// A groupoid with a cocycle on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedGroupoid {
    pub groupoid: FiniteGroupoid,
    pub cocycle: GroupoidCocycle,
}

impl TwistedGroupoid {
    pub fn new(groupoid: FiniteGroupoid, cocycle: GroupoidCocycle) -> Result<Self> {
        if let Some(v) = cocycle.validate(&groupoid).first() {
            return Err(Error::invalid("cocycle", v));
        }
        Ok(TwistedGroupoid { groupoid, cocycle })
    }

    pub fn untwisted(groupoid: FiniteGroupoid) -> Self {
        let cocycle = GroupoidCocycle::trivial(&groupoid);
        TwistedGroupoid { groupoid, cocycle }
    }

    /// `(G^op, σ#)`
    pub fn mirror(&self) -> TwistedGroupoid {
        TwistedGroupoid {
            groupoid: self.groupoid.opposite(),
            cocycle: mirror_cocycle(&self.cocycle),
        }
    }

    pub fn relabeled(&self, unit_perm: &[UnitId], arrow_perm: &[ArrowId]) -> Result<TwistedGroupoid> {
        Ok(TwistedGroupoid {
            groupoid: self.groupoid.relabeled(unit_perm, arrow_perm)?,
            cocycle: self.cocycle.relabeled(arrow_perm),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupoidIso {
    pub unit_map: Vec<UnitId>,
    pub arrow_map: Vec<ArrowId>,
}

impl GroupoidIso {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidIso {
            unit_map: (0..g.unit_count()).collect(),
            arrow_map: (0..g.arrow_count()).collect(),
        }
    }

    /// `g ↦ g⁻¹`, a candidate map `G → G^op`.
    pub fn inversion(g: &FiniteGroupoid) -> Self {
        GroupoidIso {
            unit_map: (0..g.unit_count()).collect(),
            arrow_map: (0..g.arrow_count()).map(|a| g.inv(a)).collect(),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GroupoidIso) -> GroupoidIso {
        GroupoidIso {
            unit_map: other.unit_map.iter().map(|&u| self.unit_map[u]).collect(),
            arrow_map: other.arrow_map.iter().map(|&a| self.arrow_map[a]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupoidIso {
        let inv = |f: &[usize]| {
            let mut out = vec![0; f.len()];
            for (i, &x) in f.iter().enumerate() {
                out[x] = i;
            }
            out
        };
        GroupoidIso {
            unit_map: inv(&self.unit_map),
            arrow_map: inv(&self.arrow_map),
        }
    }

    /// Canonical serialization, used as the weight-table key.
    pub fn key(&self) -> String {
        let j = |m: &[usize]| m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("u:{}|a:{}", j(&self.unit_map), j(&self.arrow_map))
    }
}

impl fmt::Display for GroupoidIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoViolation {
    NotBijective,
    Endpoints { g: ArrowId },
    Composition { g: ArrowId, h: ArrowId },
    Inverse { g: ArrowId },
    Unit { u: UnitId },
    Twist { g: ArrowId, h: ArrowId },
}

impl fmt::Display for IsoViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IsoViolation::NotBijective => write!(f, "maps are not bijections"),
            IsoViolation::Endpoints { g } => write!(f, "source or range of {g} not preserved"),
            IsoViolation::Composition { g, h } => write!(f, "composition of ({g}, {h}) not preserved"),
            IsoViolation::Inverse { g } => write!(f, "inverse of {g} not preserved"),
            IsoViolation::Unit { u } => write!(f, "unit arrow of {u} not preserved"),
            IsoViolation::Twist { g, h } => write!(f, "τ(Φ{g}, Φ{h}) ≠ σ({g}, {h})"),
        }
    }
}

fn bijective(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.len() == n && map.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Straight check of every clause of a twist-preserving isomorphism.
pub fn verify_groupoid_iso(
    from: &TwistedGroupoid,
    to: &TwistedGroupoid,
    phi: &GroupoidIso,
) -> std::result::Result<(), IsoViolation> {
    let (g, h) = (&from.groupoid, &to.groupoid);
    if g.unit_count() != h.unit_count()
        || g.arrow_count() != h.arrow_count()
        || !bijective(&phi.unit_map, g.unit_count())
        || !bijective(&phi.arrow_map, g.arrow_count())
    {
        return Err(IsoViolation::NotBijective);
    }
    let f = &phi.arrow_map;
    let u = &phi.unit_map;
    for a in 0..g.arrow_count() {
        if h.src(f[a]) != u[g.src(a)] || h.rng(f[a]) != u[g.rng(a)] {
            return Err(IsoViolation::Endpoints { g: a });
        }
        if h.inv(f[a]) != f[g.inv(a)] {
            return Err(IsoViolation::Inverse { g: a });
        }
    }
    for x in 0..g.unit_count() {
        if h.unit_arrow(u[x]) != f[g.unit_arrow(x)] {
            return Err(IsoViolation::Unit { u: x });
        }
    }
    for a in 0..g.arrow_count() {
        for b in 0..g.arrow_count() {
            if g.compose(a, b).map(|c| f[c]) != h.compose(f[a], f[b]) {
                return Err(IsoViolation::Composition { g: a, h: b });
            }
            if let Some(s) = from.cocycle.get(a, b) {
                if to.cocycle.get(f[a], f[b]) != Some(s) {
                    return Err(IsoViolation::Twist { g: a, h: b });
                }
            }
        }
    }
    Ok(())
}

fn fiber_sizes(g: &FiniteGroupoid) -> Vec<usize> {
    let n = g.unit_count();
    let mut sizes = vec![0; n * n];
    for a in 0..g.arrow_count() {
        sizes[g.src(a) * n + g.rng(a)] += 1;
    }
    sizes
}

/// `|units|! · Π |G(u, v)|!`: unit maps times fiber-respecting arrow maps.
pub fn groupoid_search_bound(g: &FiniteGroupoid) -> f64 {
    fiber_sizes(g)
        .iter()
        .fold(factorial(g.unit_count()), |acc, &k| acc * factorial(k))
}

const NONE: usize = usize::MAX;

struct GroupoidSearch<'a> {
    from: &'a TwistedGroupoid,
    to: &'a TwistedGroupoid,
    sizes_from: Vec<usize>,
    sizes_to: Vec<usize>,
    fibers_to: HashMap<(UnitId, UnitId), Vec<ArrowId>>,
    /// `(h, k)` with `h·k = g`, per `g`.
    factorizations: Vec<Vec<(ArrowId, ArrowId)>>,
    units: usize,
    arrows: usize,
    unit_map: Vec<UnitId>,
    unit_used: Vec<bool>,
    arrow_map: Vec<ArrowId>,
    arrow_used: Vec<bool>,
    log: SearchLog,
    out: Vec<GroupoidIso>,
}

impl<'a> GroupoidSearch<'a> {
    fn new(from: &'a TwistedGroupoid, to: &'a TwistedGroupoid) -> Self {
        let (g, h) = (&from.groupoid, &to.groupoid);
        let mut fibers_to: HashMap<(UnitId, UnitId), Vec<ArrowId>> = HashMap::new();
        for a in 0..h.arrow_count() {
            fibers_to.entry((h.src(a), h.rng(a))).or_default().push(a);
        }
        let mut factorizations = vec![Vec::new(); g.arrow_count()];
        for (a, b) in g.composable_pairs() {
            factorizations[g.compose(a, b).unwrap()].push((a, b));
        }
        GroupoidSearch {
            from,
            to,
            sizes_from: fiber_sizes(g),
            sizes_to: fiber_sizes(h),
            fibers_to,
            factorizations,
            units: g.unit_count(),
            arrows: g.arrow_count(),
            unit_map: vec![NONE; g.unit_count()],
            unit_used: vec![false; g.unit_count()],
            arrow_map: vec![NONE; g.arrow_count()],
            arrow_used: vec![false; g.arrow_count()],
            log: SearchLog::default(),
            out: Vec::new(),
        }
    }

    fn unit_ok(&self, u: UnitId, v: UnitId) -> bool {
        if self.unit_used[v] {
            return false;
        }
        let n = self.units;
        (0..=u).all(|w| {
            let fw = if w == u { v } else { self.unit_map[w] };
            self.sizes_from[u * n + w] == self.sizes_to[v * n + fw]
                && self.sizes_from[w * n + u] == self.sizes_to[fw * n + v]
        })
    }

    fn try_unit(&mut self, u: UnitId, v: UnitId) {
        let ok = self.unit_ok(u, v);
        self.log.visit(2, u, v, ok);
        if !ok {
            return;
        }
        self.unit_map[u] = v;
        self.unit_used[v] = true;
        if u + 1 == self.units {
            self.assign_arrows(0);
        } else {
            for w in 0..self.units {
                self.try_unit(u + 1, w);
            }
        }
        self.unit_used[v] = false;
        self.unit_map[u] = NONE;
    }

    fn arrow_ok(&self, a: ArrowId, x: ArrowId) -> bool {
        let (g, h) = (&self.from.groupoid, &self.to.groupoid);
        let (sigma, tau) = (&self.from.cocycle, &self.to.cocycle);
        let f = &self.arrow_map;
        if g.is_unit_arrow(a) != h.is_unit_arrow(x) {
            return false;
        }
        let ia = g.inv(a);
        if ia == a {
            if h.inv(x) != x {
                return false;
            }
        } else if f[ia] != NONE && f[ia] != h.inv(x) {
            return false;
        }
        let image = |b: ArrowId| if b == a { x } else { f[b] };
        // pairs with `a` on either side, the other factor already placed
        for b in 0..self.arrows {
            let fb = image(b);
            if fb == NONE {
                continue;
            }
            if let Some(ab) = g.compose(a, b) {
                let fab = image(ab);
                if fab != NONE && h.compose(x, fb) != Some(fab) {
                    return false;
                }
                if tau.get(x, fb) != sigma.get(a, b) {
                    return false;
                }
            }
            if let Some(ba) = g.compose(b, a) {
                let fba = image(ba);
                if fba != NONE && h.compose(fb, x) != Some(fba) {
                    return false;
                }
                if tau.get(fb, x) != sigma.get(b, a) {
                    return false;
                }
            }
        }
        // `a` as a product of two placed arrows
        self.factorizations[a].iter().all(|&(p, q)| {
            let (fp, fq) = (image(p), image(q));
            fp == NONE || fq == NONE || h.compose(fp, fq) == Some(x)
        })
    }

    fn assign_arrows(&mut self, a: ArrowId) {
        if a == self.arrows {
            self.out.push(GroupoidIso {
                unit_map: self.unit_map.clone(),
                arrow_map: self.arrow_map.clone(),
            });
            return;
        }
        let g = &self.from.groupoid;
        let key = (self.unit_map[g.src(a)], self.unit_map[g.rng(a)]);
        let candidates = self.fibers_to.get(&key).cloned().unwrap_or_default();
        for x in candidates {
            let ok = !self.arrow_used[x] && self.arrow_ok(a, x);
            self.log.visit(3, a, x, ok);
            if ok {
                self.arrow_map[a] = x;
                self.arrow_used[x] = true;
                self.assign_arrows(a + 1);
                self.arrow_used[x] = false;
                self.arrow_map[a] = NONE;
            }
        }
    }
}

/// Every twist-preserving isomorphism `(G, σ) → (H, τ)`, sorted, each
/// re-verified by [`verify_groupoid_iso`].
pub fn enumerate_groupoid_isos(
    from: &TwistedGroupoid,
    to: &TwistedGroupoid,
    limits: SearchLimits,
) -> Result<SearchOutcome<GroupoidIso>> {
    let (g, h) = (&from.groupoid, &to.groupoid);
    let bound = groupoid_search_bound(g);
    let empty = || SearchOutcome {
        results: vec![],
        nodes: 0,
        log_hash: merge_logs(vec![]).1,
        bound,
    };
    if g.unit_count() != h.unit_count() || g.arrow_count() != h.arrow_count() || g.unit_count() == 0 {
        return Ok(empty());
    }
    let mut sf = fiber_sizes(g);
    let mut st = fiber_sizes(h);
    sf.sort_unstable();
    st.sort_unstable();
    if sf != st {
        return Ok(empty());
    }
    limits.check(bound)?;
    let branches: Vec<(Vec<GroupoidIso>, SearchLog)> = (0..g.unit_count())
        .into_par_iter()
        .map(|v| {
            let mut search = GroupoidSearch::new(from, to);
            search.try_unit(0, v);
            (search.out, search.log)
        })
        .collect();
    let mut results = Vec::new();
    let mut logs = Vec::new();
    for (r, l) in branches {
        results.extend(r);
        logs.push(l);
    }
    if let Some((phi, v)) = results
        .iter()
        .find_map(|phi| verify_groupoid_iso(from, to, phi).err().map(|v| (phi, v)))
    {
        return Err(Error::Internal(format!("search emitted {phi}, which fails: {v}")));
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

/// `Mir(G, σ)`
pub fn mirror_set_groupoid(
    g: &TwistedGroupoid,
    limits: SearchLimits,
) -> Result<SearchOutcome<GroupoidIso>> {
    enumerate_groupoid_isos(g, &g.mirror(), limits)
}

/// `Φ ∘ m ∘ Φ⁻¹` for every `m`, sorted; `Φ^op` has the same underlying maps.
pub fn transport_groupoid_mirror_set(phi: &GroupoidIso, mir: &[GroupoidIso]) -> Vec<GroupoidIso> {
    let inv = phi.inverse();
    let mut out: Vec<GroupoidIso> = mir.iter().map(|m| phi.compose(&m.compose(&inv))).collect();
    out.sort();
    out
}

/// Conjugation by `Φ` maps `mir_from` bijectively onto `mir_to`.
pub fn verify_groupoid_transport(
    phi: &GroupoidIso,
    mir_from: &[GroupoidIso],
    mir_to: &[GroupoidIso],
) -> bool {
    let moved = transport_groupoid_mirror_set(phi, mir_from);
    let moved_set: HashSet<&GroupoidIso> = moved.iter().collect();
    let target: HashSet<&GroupoidIso> = mir_to.iter().collect();
    moved_set.len() == moved.len() && moved_set == target
}
