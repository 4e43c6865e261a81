//! Brute-force oracles. Each one works from raw tables and shares no code
//! with the library's searches or validators.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chiral_core::circle::CircleValue;
use chiral_core::groupoid::FiniteGroupoid;
use chiral_core::groupoid_iso::TwistedGroupoid;
use chiral_core::semigroup::InverseSemigroup;

pub type Table = Vec<Vec<usize>>;

/// Angle `p/q` in `[0, 1)`, reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(pub u64, pub u64);

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Angle {
    pub const ZERO: Angle = Angle(0, 1);

    pub fn new(p: u64, q: u64) -> Angle {
        let p = p % q;
        let g = gcd(p, q).max(1);
        Angle(p / g, q / g)
    }

    pub fn add(self, o: Angle) -> Angle {
        Angle::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }

    pub fn neg(self) -> Angle {
        Angle::new(self.1 - self.0, self.1)
    }

    pub fn of(c: CircleValue) -> Angle {
        Angle::new(c.num(), c.den())
    }
}

pub fn is_associative(t: &Table) -> bool {
    let n = t.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| t[t[i][j]][k] == t[i][t[j][k]])))
}

/// An inverse semigroup is a semigroup in which every element has exactly
/// one inverse; `star` must name it.
pub fn is_inverse_semigroup(t: &Table, star: &[usize]) -> bool {
    let n = t.len();
    if !is_associative(t) {
        return false;
    }
    (0..n).all(|i| {
        let inverses: Vec<usize> = (0..n)
            .filter(|&x| t[t[i][x]][i] == i && t[t[x][i]][x] == x)
            .collect();
        inverses == [star[i]]
    })
}

pub fn idempotents(t: &Table) -> Vec<usize> {
    (0..t.len()).filter(|&i| t[i][i] == i).collect()
}

/// Every nonzero map `E → {0,1}` with `χ(ef) = χ(e)χ(f)`, over all `2^|E|`
/// maps, sorted.
pub fn brute_characters(t: &Table) -> Vec<Vec<bool>> {
    let e = idempotents(t);
    let k = e.len();
    assert!(k <= 20);
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let chi = |i: usize| mask >> i & 1 == 1;
        let pos = |x: usize| e.iter().position(|&y| y == x).unwrap();
        let hom = (0..k).all(|a| (0..k).all(|b| chi(pos(t[e[a]][e[b]])) == (chi(a) && chi(b))));
        if hom {
            out.push((0..k).map(chi).collect());
        }
    }
    out.sort();
    out
}

/// Classes of an equivalence given as a predicate on a finite list, by
/// repeated merging until nothing changes.
fn classes<T: Clone>(items: &[T], related: impl Fn(&T, &T) -> bool) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..items.len()).collect();
    loop {
        let mut changed = false;
        for i in 0..items.len() {
            for j in 0..items.len() {
                if label[i] != label[j] && related(&items[i], &items[j]) {
                    let (a, b) = (label[i].min(label[j]), label[i].max(label[j]));
                    for l in label.iter_mut() {
                        if *l == b {
                            *l = a;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, l) in label.into_iter().enumerate() {
        by.entry(l).or_default().push(i);
    }
    by.into_values().collect()
}

/// `(units, arrows)` of the universal groupoid by direct germ classification:
/// pairs `(s, χ)` with `χ(s*s) = 1`, identified when some idempotent `e`
/// with `χ(e) = 1` has `se = te`.
pub fn universal_germ_counts(t: &Table, star: &[usize]) -> (usize, usize) {
    let e = idempotents(t);
    let chars = brute_characters(t);
    let val = |c: &Vec<bool>, x: usize| c[e.iter().position(|&y| y == x).unwrap()];
    let mut pairs = Vec::new();
    for s in 0..t.len() {
        for (ci, c) in chars.iter().enumerate() {
            if val(c, t[star[s]][s]) {
                pairs.push((s, ci));
            }
        }
    }
    let cl = classes(&pairs, |&(s, a), &(u, b)| {
        a == b && e.iter().any(|&f| val(&chars[a], f) && t[s][f] == t[u][f])
    });
    (chars.len(), cl.len())
}

/// Wagner–Preston images: `s` sends `x ↦ s·x` on `{x : s*s·x = x}`.
pub fn wagner_preston_images(t: &Table, star: &[usize]) -> Vec<Vec<Option<usize>>> {
    let n = t.len();
    (0..n)
        .map(|s| {
            (0..n)
                .map(|x| (t[t[star[s]][s]][x] == x).then(|| t[s][x]))
                .collect()
        })
        .collect()
}

/// `(units, arrows)` of the germ groupoid of a representation: points lying
/// in the domain of some idempotent, and pairs `(s, x)` with `x ∈ dom ρ(s)`
/// identified when `x ∈ dom ρ(e)` and `se = te` for some idempotent `e`.
pub fn representation_germ_counts(t: &Table, images: &[Vec<Option<usize>>]) -> (usize, usize) {
    let e = idempotents(t);
    let carrier = images[0].len();
    let points = (0..carrier)
        .filter(|&x| e.iter().any(|&f| images[f][x].is_some()))
        .count();
    let mut pairs = Vec::new();
    for s in 0..t.len() {
        for x in 0..carrier {
            if images[s][x].is_some() {
                pairs.push((s, x));
            }
        }
    }
    let cl = classes(&pairs, |&(s, x), &(u, y)| {
        x == y && e.iter().any(|&f| images[f][x].is_some() && t[s][f] == t[u][f])
    });
    (points, cl.len())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub type Triple = (Vec<usize>, Vec<usize>, Vec<usize>);

fn decoration_ok(m: &[usize], da: &Option<BTreeSet<usize>>, db: &Option<BTreeSet<usize>>) -> bool {
    match (da, db) {
        (None, None) => true,
        (Some(a), Some(b)) => a.iter().map(|&x| m[x]).collect::<BTreeSet<_>>() == *b,
        _ => false,
    }
}

/// Every `(α, β, γ)` with `α(x)β(y) = γ(xy)` and decorations preserved.
/// Up to 4 elements every triple of bijections is tried; up to 6, every
/// pair `(α, β)` is tried and each bijection `γ` extending the forced values
/// on products is enumerated.
pub fn naive_isotopisms(
    a: &Table,
    da: &Option<BTreeSet<usize>>,
    b: &Table,
    db: &Option<BTreeSet<usize>>,
) -> Vec<Triple> {
    let n = a.len();
    if b.len() != n {
        return Vec::new();
    }
    let perms = permutations(n);
    let law = |al: &[usize], be: &[usize], ga: &[usize]| {
        (0..n).all(|x| (0..n).all(|y| b[al[x]][be[y]] == ga[a[x][y]]))
    };
    let deco = |m: &[usize]| decoration_ok(m, da, db);
    let mut out = Vec::new();
    if n <= 4 {
        for al in &perms {
            for be in &perms {
                for ga in &perms {
                    if law(al, be, ga) && deco(al) && deco(be) && deco(ga) {
                        out.push((al.clone(), be.clone(), ga.clone()));
                    }
                }
            }
        }
    } else {
        assert!(n <= 6, "naive isotopism oracle is limited to 6 elements");
        for al in &perms {
            for be in &perms {
                let mut forced = vec![None; n];
                let mut consistent = true;
                for x in 0..n {
                    for y in 0..n {
                        let v = b[al[x]][be[y]];
                        match forced[a[x][y]] {
                            None => forced[a[x][y]] = Some(v),
                            Some(w) if w != v => consistent = false,
                            _ => {}
                        }
                    }
                }
                if !consistent {
                    continue;
                }
                for ga in &perms {
                    if (0..n).all(|z| forced[z].map_or(true, |v| v == ga[z]))
                        && law(al, be, ga)
                        && deco(al)
                        && deco(be)
                        && deco(ga)
                    {
                        out.push((al.clone(), be.clone(), ga.clone()));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Plain arrays describing a twisted groupoid.
#[derive(Clone, Debug)]
pub struct RawGroupoid {
    pub units: usize,
    pub src: Vec<usize>,
    pub rng: Vec<usize>,
    pub comp: Vec<Vec<Option<usize>>>,
    pub sigma: Vec<Vec<Option<Angle>>>,
}

impl RawGroupoid {
    pub fn of(tg: &TwistedGroupoid) -> Self {
        let g = &tg.groupoid;
        let m = g.arrow_count();
        RawGroupoid {
            units: g.unit_count(),
            src: (0..m).map(|a| g.src(a)).collect(),
            rng: (0..m).map(|a| g.rng(a)).collect(),
            comp: (0..m).map(|a| (0..m).map(|b| g.compose(a, b)).collect()).collect(),
            sigma: (0..m)
                .map(|a| (0..m).map(|b| tg.cocycle.get(a, b).map(Angle::of)).collect())
                .collect(),
        }
    }

    pub fn arrows(&self) -> usize {
        self.src.len()
    }

    /// `(G^op, σ#)`: same arrows, endpoints swapped, `comp'(g,h) = comp(h,g)`,
    /// `σ#(g,h) = conj σ(h,g)`.
    pub fn mirror(&self) -> RawGroupoid {
        let m = self.arrows();
        RawGroupoid {
            units: self.units,
            src: self.rng.clone(),
            rng: self.src.clone(),
            comp: (0..m).map(|a| (0..m).map(|b| self.comp[b][a]).collect()).collect(),
            sigma: (0..m)
                .map(|a| (0..m).map(|b| self.sigma[b][a].map(Angle::neg)).collect())
                .collect(),
        }
    }

    pub fn unit_arrow(&self, u: usize) -> usize {
        (0..self.arrows())
            .find(|&a| self.src[a] == u && self.rng[a] == u && self.comp[a][a] == Some(a))
            .expect("unit arrow")
    }

    pub fn inv(&self, a: usize) -> usize {
        let id = self.unit_arrow(self.src[a]);
        (0..self.arrows()).find(|&b| self.comp[b][a] == Some(id)).expect("inverse")
    }
}

pub fn is_twist_preserving_iso(g: &RawGroupoid, h: &RawGroupoid, u: &[usize], f: &[usize]) -> bool {
    let m = g.arrows();
    (0..m).all(|a| h.src[f[a]] == u[g.src[a]] && h.rng[f[a]] == u[g.rng[a]])
        && (0..g.units).all(|x| f[g.unit_arrow(x)] == h.unit_arrow(u[x]))
        && (0..m).all(|a| f[g.inv(a)] == h.inv(f[a]))
        && (0..m).all(|a| {
            (0..m).all(|b| {
                g.comp[a][b].map(|c| f[c]) == h.comp[f[a]][f[b]] && g.sigma[a][b] == h.sigma[f[a]][f[b]]
            })
        })
}

/// Every twist-preserving isomorphism `G → H` as `(unit_map, arrow_map)`,
/// sorted. Up to 8 arrows every pair of bijections is tried. Beyond that,
/// arrow maps are drawn from the maps that send each fiber `G(x, y)` onto
/// `H(u(x), u(y))` (the endpoint clause of the definition) and every other
/// clause is checked in full.
pub fn naive_groupoid_isos(g: &RawGroupoid, h: &RawGroupoid) -> Vec<(Vec<usize>, Vec<usize>)> {
    let m = g.arrows();
    if h.arrows() != m || h.units != g.units {
        return Vec::new();
    }
    let mut out = Vec::new();
    let unit_perms = permutations(g.units);
    if m <= 8 {
        let arrow_perms = permutations(m);
        for u in &unit_perms {
            for f in &arrow_perms {
                if is_twist_preserving_iso(g, h, u, f) {
                    out.push((u.clone(), f.clone()));
                }
            }
        }
    } else {
        assert!(m <= 24, "naive groupoid oracle is limited to 24 arrows");
        for u in &unit_perms {
            let fiber = |r: &RawGroupoid, x: usize, y: usize| -> Vec<usize> {
                (0..m).filter(|&a| r.src[a] == x && r.rng[a] == y).collect()
            };
            let mut blocks = Vec::new();
            let mut sizes_match = true;
            for x in 0..g.units {
                for y in 0..g.units {
                    let (fa, fb) = (fiber(g, x, y), fiber(h, u[x], u[y]));
                    sizes_match &= fa.len() == fb.len();
                    blocks.push((fa, fb));
                }
            }
            if !sizes_match {
                continue;
            }
            let mut f = vec![usize::MAX; m];
            expand(&blocks, 0, &mut f, &mut |f| {
                if is_twist_preserving_iso(g, h, u, f) {
                    out.push((u.clone(), f.to_vec()));
                }
            });
        }
    }
    out.sort();
    out
}

fn expand(blocks: &[(Vec<usize>, Vec<usize>)], i: usize, f: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if i == blocks.len() {
        visit(f);
        return;
    }
    let (from, to) = &blocks[i];
    for p in permutations(from.len()) {
        for (k, &a) in from.iter().enumerate() {
            f[a] = to[p[k]];
        }
        expand(blocks, i + 1, f, visit);
    }
}

/// Checks that `δ_γ ↦ δ_{Φγ}` carries the twisted convolution product and
/// involution of `(G, σ)` onto those of `(H, τ)`, computed from the
/// defining formulas: `δ_a δ_b = σ(a,b) δ_{ab}` when composable, else 0,
/// and `δ_γ* = conj σ(γ, γ⁻¹) δ_{γ⁻¹}`.
pub fn pullback_preserves_structure(g: &RawGroupoid, h: &RawGroupoid, f: &[usize]) -> bool {
    let m = g.arrows();
    let product = |r: &RawGroupoid, a: usize, b: usize| r.comp[a][b].map(|c| (c, r.sigma[a][b].unwrap()));
    let star = |r: &RawGroupoid, a: usize| {
        let ai = r.inv(a);
        (ai, r.sigma[a][ai].unwrap().neg())
    };
    let mut seen = vec![false; m];
    if !f.iter().all(|&x| x < m && !std::mem::replace(&mut seen[x], true)) {
        return false;
    }
    (0..m).all(|a| {
        let (sa, ca) = star(g, a);
        let (sb, cb) = star(h, f[a]);
        f[sa] == sb && ca == cb
    }) && (0..m).all(|a| {
        (0..m).all(|b| product(g, a, b).map(|(c, v)| (f[c], v)) == product(h, f[a], f[b]))
    })
}

/// The inverse subsemigroup of `I_k` generated by some partial bijections,
/// closed under composition and inversion, in sorted order.
pub fn generated_inverse_semigroup(k: usize, gens: &[Vec<Option<usize>>]) -> InverseSemigroup {
    type Map = Vec<Option<usize>>;
    let compose = |f: &Map, g: &Map| -> Map { (0..k).map(|x| g[x].and_then(|y| f[y])).collect() };
    let invert = |f: &Map| -> Map {
        let mut out = vec![None; k];
        for (x, y) in f.iter().enumerate() {
            if let Some(y) = y {
                out[*y] = Some(x);
            }
        }
        out
    };
    let mut set: BTreeSet<Map> = BTreeSet::new();
    for g in gens {
        set.insert(g.clone());
        set.insert(invert(g));
    }
    loop {
        let items: Vec<Map> = set.iter().cloned().collect();
        let before = set.len();
        for f in &items {
            for g in &items {
                set.insert(compose(f, g));
            }
        }
        if set.len() == before {
            break;
        }
    }
    let items: Vec<Map> = set.into_iter().collect();
    let idx = |m: &Map| items.iter().position(|x| x == m).unwrap();
    let rows: Table = items.iter().map(|f| items.iter().map(|g| idx(&compose(f, g))).collect()).collect();
    let star: Vec<usize> = items.iter().map(|f| idx(&invert(f))).collect();
    InverseSemigroup::new(&rows, &star).expect("generated semigroup is inverse")
}

/// The groupoid's raw arrays, without a twist.
pub fn raw_untwisted(g: &FiniteGroupoid) -> RawGroupoid {
    RawGroupoid::of(&TwistedGroupoid::untwisted(g.clone()))
}
