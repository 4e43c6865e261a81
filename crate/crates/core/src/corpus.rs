//! Small named semigroups and twists used by tests, the acceptance suite and
//! the CLI's bundled data.

use crate::circle::CircleValue;
use crate::partial::PartialBijection;
use crate::semigroup::{DecoratedSemigroup, InverseSemigroup, Semigroup};
use crate::twist::TwistData;

fn build(rows: Vec<Vec<usize>>, labels: Vec<String>) -> InverseSemigroup {
    InverseSemigroup::from_table(&rows)
        .and_then(|s| s.with_labels(labels))
        .expect("corpus table is an inverse semigroup")
}

pub fn trivial_group() -> InverseSemigroup {
    build(vec![vec![0]], vec!["e".into()])
}

/// `Z/n` with `i·j = i + j mod n`.
pub fn cyclic_group(n: usize) -> InverseSemigroup {
    assert!(n > 0);
    let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let labels = (0..n).map(|i| if i == 0 { "e".into() } else { format!("a{i}") }).collect();
    build(rows, labels)
}

/// `Z/2 × Z/2`, element `2a + b` for `(a, b)`.
pub fn klein_four() -> InverseSemigroup {
    let rows = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    build(rows, vec!["e".into(), "b".into(), "a".into(), "ab".into()])
}

/// `S_3`, permutations of `{0,1,2}` in lexicographic order, `(p·q)(x) = p(q(x))`.
pub fn symmetric_group_3() -> InverseSemigroup {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let rows = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| index([p[q[0]], p[q[1]], p[q[2]]]))
                .collect()
        })
        .collect();
    let labels = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
    build(rows, labels)
}

/// The chain `0 < 1 < … < k-1` with `i·j = min(i, j)`.
pub fn chain_semilattice(k: usize) -> InverseSemigroup {
    assert!(k > 0);
    let rows = (0..k).map(|i| (0..k).map(|j| i.min(j)).collect()).collect();
    build(rows, (0..k).map(|i| format!("e{i}")).collect())
}

/// Two incomparable atoms `e`, `f` over their meet `z = ef`.
pub fn v_semilattice() -> InverseSemigroup {
    // z = 0, e = 1, f = 2
    build(
        vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]],
        vec!["z".into(), "e".into(), "f".into()],
    )
}

/// All partial bijections of `{0..k}`, ordered by their value vectors with
/// undefined before defined; `(f·g)(x) = f(g(x))`.
pub fn symmetric_inverse_monoid(k: usize) -> InverseSemigroup {
    let maps = all_partial_bijections(k);
    let index = |p: &PartialBijection| maps.iter().position(|q| q == p).unwrap();
    let rows = maps
        .iter()
        .map(|f| maps.iter().map(|g| index(&f.compose(g).unwrap())).collect())
        .collect();
    let labels = maps.iter().map(|f| f.to_string()).collect();
    build(rows, labels)
}

/// The elements of [`symmetric_inverse_monoid`] in table order.
pub fn all_partial_bijections(k: usize) -> Vec<PartialBijection> {
    let mut maps: Vec<Vec<Option<usize>>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for m in &maps {
            for choice in std::iter::once(None).chain((0..k).map(Some)) {
                if choice.is_some() && m.contains(&choice) {
                    continue;
                }
                let mut m = m.clone();
                m.push(choice);
                next.push(m);
            }
        }
        maps = next;
    }
    maps.sort();
    maps.into_iter()
        .map(|m| PartialBijection::new(k, m).expect("injective by construction"))
        .collect()
}

/// The Brandt semigroup `B_2 = {0} ∪ {e_ij}` with `e_ij·e_kl = δ_jk e_il`.
pub fn brandt_b2() -> InverseSemigroup {
    // 0 = zero, 1 + 2i + j = e_ij
    let decode = |x: usize| ((x - 1) / 2, (x - 1) % 2);
    let rows = (0..5)
        .map(|a| {
            (0..5)
                .map(|b| {
                    if a == 0 || b == 0 {
                        return 0;
                    }
                    let ((i, j), (k, l)) = (decode(a), decode(b));
                    if j == k {
                        1 + 2 * i + l
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    build(
        rows,
        vec!["0".into(), "e11".into(), "e12".into(), "e21".into(), "e22".into()],
    )
}

/// `G ∪ {0}` with a new zero at index `|G|`.
pub fn group_with_zero(g: &InverseSemigroup) -> InverseSemigroup {
    let n = g.order();
    let rows = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| if a == n || b == n { n } else { g.mul(a, b) })
                .collect()
        })
        .collect();
    let mut labels = g.labels().to_vec();
    labels.push("0".into());
    build(rows, labels)
}

/// `G ∪ {1}` with a new identity at index `|G|`, above the identity of `G`.
pub fn monoid_closure(g: &InverseSemigroup) -> InverseSemigroup {
    let n = g.order();
    let rows = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| match (a == n, b == n) {
                    (true, _) => b,
                    (_, true) => a,
                    _ => g.mul(a, b),
                })
                .collect()
        })
        .collect();
    let mut labels = g.labels().to_vec();
    labels.push("1".into());
    build(rows, labels)
}

/// `L_k` with `x·y = x`. Not an inverse semigroup.
pub fn left_zero(k: usize) -> Semigroup {
    let rows: Vec<Vec<usize>> = (0..k).map(|i| vec![i; k]).collect();
    Semigroup::new(&rows).expect("left-zero table is associative")
}

/// `L_2` decorated by both of its elements.
pub fn left_zero_decorated() -> DecoratedSemigroup {
    DecoratedSemigroup::new(left_zero(2), Some(vec![0, 1])).expect("Σ generates L_2")
}

/// `ω(a, a) = -1` on `Z/2`, 1 elsewhere.
pub fn z2_sign_twist() -> TwistData {
    TwistData::from_fn(2, |a, b| {
        if a == 1 && b == 1 {
            CircleValue::root_of_unity(1, 2)
        } else {
            CircleValue::ONE
        }
    })
}

/// The carry cocycle on `Z/n`: `ω(i, j) = phase` when `i + j ≥ n`, else 1.
pub fn carry_twist(n: usize, phase: CircleValue) -> TwistData {
    TwistData::from_fn(n, |i, j| if i + j >= n { phase } else { CircleValue::ONE })
}

/// On the Klein group: `ω((a,b),(c,d)) = (-1)^{a·d}`.
pub fn klein_bicharacter() -> TwistData {
    TwistData::from_fn(4, |x, y| {
        let a = x >> 1;
        let d = y & 1;
        CircleValue::root_of_unity((a * d) as u64, 2)
    })
}

/// The sign twist of `Z/2` extended by 1 on the adjoined identity of `Z/2 ∪ {1}`.
pub fn z2_one_sign_twist() -> TwistData {
    TwistData::from_fn(3, |a, b| {
        if a == 1 && b == 1 {
            CircleValue::root_of_unity(1, 2)
        } else {
            CircleValue::ONE
        }
    })
}

/// A named inverse semigroup with the twists it is tested against.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub semigroup: InverseSemigroup,
    /// Named twists; the trivial twist is always first.
    pub twists: Vec<(&'static str, TwistData)>,
}

impl Instance {
    fn new(name: &'static str, semigroup: InverseSemigroup) -> Self {
        let n = semigroup.order();
        Instance {
            name,
            semigroup,
            twists: vec![("trivial", TwistData::trivial(n))],
        }
    }

    fn with_twist(mut self, name: &'static str, omega: TwistData) -> Self {
        self.twists.push((name, omega));
        self
    }
}

/// Every inverse semigroup of the standard corpus, smallest first.
pub fn standard_corpus() -> Vec<Instance> {
    vec![
        Instance::new("trivial", trivial_group()),
        Instance::new("z2", cyclic_group(2)).with_twist("sign", z2_sign_twist()),
        Instance::new("z3", cyclic_group(3))
            .with_twist("carry", carry_twist(3, CircleValue::root_of_unity(1, 3))),
        Instance::new("z4", cyclic_group(4))
            .with_twist("carry", carry_twist(4, CircleValue::root_of_unity(1, 4))),
        Instance::new("klein", klein_four()).with_twist("bicharacter", klein_bicharacter()),
        Instance::new("chain2", chain_semilattice(2)),
        Instance::new("chain3", chain_semilattice(3)),
        Instance::new("v3", v_semilattice()),
        Instance::new("i1", symmetric_inverse_monoid(1)),
        Instance::new("z2-zero", group_with_zero(&cyclic_group(2))),
        Instance::new("z2-one", monoid_closure(&cyclic_group(2)))
            .with_twist("sign", z2_one_sign_twist()),
        Instance::new("b2", brandt_b2()),
        Instance::new("s3", symmetric_group_3()),
        Instance::new("i2", symmetric_inverse_monoid(2)),
    ]
}

/// Looks an instance up by name.
pub fn instance(name: &str) -> Option<Instance> {
    standard_corpus().into_iter().find(|i| i.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist::validate_twist_data;

    #[test]
    fn sizes() {
        assert_eq!(symmetric_inverse_monoid(1).order(), 2);
        assert_eq!(symmetric_inverse_monoid(2).order(), 7);
        assert_eq!(symmetric_inverse_monoid(3).order(), 34);
        assert_eq!(brandt_b2().order(), 5);
        assert_eq!(symmetric_group_3().order(), 6);
    }

    #[test]
    fn i1_order_is_empty_then_identity() {
        let s = symmetric_inverse_monoid(1);
        assert_eq!(s.mul(0, 1), 0);
        assert_eq!(s.mul(1, 1), 1);
    }

    #[test]
    fn s3_is_a_noncommutative_group() {
        let s = symmetric_group_3();
        assert!(s.is_group());
        assert!(!s.is_commutative());
    }

    #[test]
    fn every_corpus_twist_is_valid() {
        for inst in standard_corpus() {
            for (name, omega) in &inst.twists {
                let report = validate_twist_data(&inst.semigroup, omega).unwrap();
                assert!(report.is_valid(), "{} / {name}: {report}", inst.name);
            }
        }
    }

    #[test]
    fn left_zero_is_not_inverse() {
        assert!(InverseSemigroup::from_table(&left_zero(2).rows()).is_err());
    }
}
