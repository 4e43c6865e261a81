//! Finite semigroups given by Cayley tables.
//!
//! Elements are dense indices `0..n`. A [`Semigroup`] only promises
//! associativity; an [`InverseSemigroup`] additionally carries the involution
//! `s ↦ s*` and is only constructed after the full axiom check passes.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Element = usize;

/// A single failed axiom, with the elements that witness the failure.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `(i·j)·k ≠ i·(j·k)`
    NotAssociative { i: Element, j: Element, k: Element },
    /// `star[star[i]] ≠ i`
    StarNotInvolution { i: Element },
    /// `i·i*·i ≠ i`
    NotRegular { i: Element },
    /// `i*·i·i* ≠ i*`
    StarNotRegular { i: Element },
    /// `other` is an inverse of `i` distinct from `star[i]`.
    InverseNotUnique { i: Element, other: Element },
    /// Idempotents `e`, `f` with `e·f ≠ f·e`.
    IdempotentsDoNotCommute { e: Element, f: Element },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotAssociative { i, j, k } => {
                write!(f, "associativity fails at ({i}, {j}, {k})")
            }
            Violation::StarNotInvolution { i } => write!(f, "star is not an involution at {i}"),
            Violation::NotRegular { i } => write!(f, "{i}·{i}*·{i} ≠ {i}"),
            Violation::StarNotRegular { i } => write!(f, "{i}*·{i}·{i}* ≠ {i}*"),
            Violation::InverseNotUnique { i, other } => {
                write!(f, "{other} is a second inverse of {i}")
            }
            Violation::IdempotentsDoNotCommute { e, f: g } => {
                write!(f, "idempotents {e} and {g} do not commute")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_shape(table: &[Vec<usize>], star: Option<&[usize]>) -> Result<usize> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Format("table must have at least one row".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Format(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|&x| x >= n) {
            return Err(Error::Format(format!(
                "table[{i}][{j}] = {} is out of range 0..{n}",
                row[j]
            )));
        }
    }
    if let Some(star) = star {
        if star.len() != n {
            return Err(Error::Format(format!(
                "star has {} entries, expected {n}",
                star.len()
            )));
        }
        if let Some(i) = star.iter().position(|&x| x >= n) {
            return Err(Error::Format(format!(
                "star[{i}] = {} is out of range 0..{n}",
                star[i]
            )));
        }
    }
    Ok(n)
}

fn associativity_violations(table: &[Vec<usize>]) -> Vec<Violation> {
    let n = table.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in 0..n {
                let ij = table[i][j];
                for k in 0..n {
                    if table[ij][k] != table[i][table[j][k]] {
                        out.push(Violation::NotAssociative { i, j, k });
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Checks associativity only.
pub fn validate_semigroup(table: &[Vec<usize>]) -> Result<ValidationReport> {
    check_shape(table, None)?;
    Ok(ValidationReport {
        violations: associativity_violations(table),
    })
}

/// Checks every inverse-semigroup axiom and reports all failures.
pub fn validate_inverse_semigroup(table: &[Vec<usize>], star: &[usize]) -> Result<ValidationReport> {
    let n = check_shape(table, Some(star))?;
    let mul = |a: usize, b: usize| table[a][b];
    let mut violations = associativity_violations(table);

    for i in 0..n {
        let s = star[i];
        if star[s] != i {
            violations.push(Violation::StarNotInvolution { i });
        }
        if mul(mul(i, s), i) != i {
            violations.push(Violation::NotRegular { i });
        }
        if mul(mul(s, i), s) != s {
            violations.push(Violation::StarNotRegular { i });
        }
        for x in 0..n {
            if x != s && mul(mul(i, x), i) == i && mul(mul(x, i), x) == x {
                violations.push(Violation::InverseNotUnique { i, other: x });
            }
        }
    }

    let idem: Vec<usize> = (0..n).filter(|&e| mul(e, e) == e).collect();
    for (a, &e) in idem.iter().enumerate() {
        for &f in &idem[a + 1..] {
            if mul(e, f) != mul(f, e) {
                violations.push(Violation::IdempotentsDoNotCommute { e, f });
            }
        }
    }
    Ok(ValidationReport { violations })
}

/// A finite semigroup: an associative Cayley table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    order: usize,
    table: Vec<Element>,
    labels: Vec<String>,
}

impl Semigroup {
    pub fn new(rows: &[Vec<usize>]) -> Result<Self> {
        let report = validate_semigroup(rows)?;
        if !report.is_valid() {
            return Err(Error::invalid("semigroup", report));
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    fn from_rows_unchecked(rows: &[Vec<usize>]) -> Self {
        let order = rows.len();
        Semigroup {
            order,
            table: rows.iter().flatten().copied().collect(),
            labels: (0..order).map(|i| i.to_string()).collect(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::Format(format!(
                "{} labels for {} elements",
                labels.len(),
                self.order
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order + b]
    }

    pub fn label(&self, i: Element) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_idempotent(&self, e: Element) -> bool {
        self.mul(e, e) == e
    }

    pub fn idempotents(&self) -> Vec<Element> {
        (0..self.order).filter(|&e| self.is_idempotent(e)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Same elements, multiplication reversed: `x ·# y = y·x`.
    pub fn mirror(&self) -> Semigroup {
        let n = self.order;
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = self.mul(j, i);
            }
        }
        Semigroup {
            order: n,
            table,
            labels: self.labels.clone(),
        }
    }

    /// Sub-semigroup generated by `gens`, in element order.
    pub fn closure(&self, gens: &[Element]) -> Vec<Element> {
        let mut seen = vec![false; self.order];
        let mut members: Vec<Element> = Vec::new();
        for &g in gens {
            if !seen[g] {
                seen[g] = true;
                members.push(g);
            }
        }
        let mut idx = 0;
        while idx < members.len() {
            let a = members[idx];
            let mut fresh = Vec::new();
            for &b in &members {
                for p in [self.mul(a, b), self.mul(b, a)] {
                    if !seen[p] {
                        seen[p] = true;
                        fresh.push(p);
                    }
                }
            }
            members.extend(fresh);
            idx += 1;
        }
        members.sort_unstable();
        members
    }

    /// Relabels elements: element `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[Element]) -> Semigroup {
        let n = self.order;
        let mut table = vec![0; n * n];
        let mut labels = vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            for j in 0..n {
                table[perm[i] * n + perm[j]] = perm[self.mul(i, j)];
            }
        }
        Semigroup {
            order: n,
            table,
            labels,
        }
    }

    /// Elements of `S·S`.
    pub fn products(&self) -> Vec<bool> {
        let mut hit = vec![false; self.order];
        for &p in &self.table {
            hit[p] = true;
        }
        hit
    }
}

/// A finite inverse semigroup: validated table plus involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSemigroup {
    semigroup: Semigroup,
    star: Vec<Element>,
}

impl Deref for InverseSemigroup {
    type Target = Semigroup;

    fn deref(&self) -> &Semigroup {
        &self.semigroup
    }
}

impl InverseSemigroup {
    pub fn new(rows: &[Vec<usize>], star: &[usize]) -> Result<Self> {
        let report = validate_inverse_semigroup(rows, star)?;
        if !report.is_valid() {
            return Err(Error::invalid("inverse semigroup", report));
        }
        Ok(InverseSemigroup {
            semigroup: Semigroup::from_rows_unchecked(rows),
            star: star.to_vec(),
        })
    }

    /// Builds the involution from the table, if every element has a unique inverse.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = check_shape(rows, None)?;
        let mut star = Vec::with_capacity(n);
        for i in 0..n {
            let inverses: Vec<usize> = (0..n)
                .filter(|&x| rows[rows[i][x]][i] == i && rows[rows[x][i]][x] == x)
                .collect();
            match inverses.as_slice() {
                [x] => star.push(*x),
                _ => {
                    return Err(Error::invalid(
                        "inverse semigroup",
                        format!("element {i} has {} inverses", inverses.len()),
                    ))
                }
            }
        }
        Self::new(rows, &star)
    }

    pub fn with_labels(self, labels: Vec<String>) -> Result<Self> {
        Ok(InverseSemigroup {
            semigroup: self.semigroup.with_labels(labels)?,
            star: self.star,
        })
    }

    pub fn semigroup(&self) -> &Semigroup {
        &self.semigroup
    }

    #[inline]
    pub fn star(&self, i: Element) -> Element {
        self.star[i]
    }

    pub fn star_table(&self) -> &[Element] {
        &self.star
    }

    /// `s*·s`, the idempotent on whose characters `s` acts.
    #[inline]
    pub fn source_idempotent(&self, s: Element) -> Element {
        self.mul(self.star[s], s)
    }

    /// `s·s*`
    #[inline]
    pub fn range_idempotent(&self, s: Element) -> Element {
        self.mul(s, self.star[s])
    }

    pub fn is_group(&self) -> bool {
        self.idempotents().len() == 1
    }

    /// `s ≤ t` iff `s = e·t` for some idempotent `e`.
    pub fn natural_partial_order(&self) -> PartialOrder {
        let n = self.order();
        let idem = self.idempotents();
        let mut leq = vec![false; n * n];
        for t in 0..n {
            for &e in &idem {
                leq[self.mul(e, t) * n + t] = true;
            }
        }
        PartialOrder { size: n, leq }
    }

    pub fn mirror(&self) -> InverseSemigroup {
        InverseSemigroup {
            semigroup: self.semigroup.mirror(),
            star: self.star.clone(),
        }
    }

    pub fn permuted(&self, perm: &[Element]) -> InverseSemigroup {
        let mut star = vec![0; self.order()];
        for i in 0..self.order() {
            star[perm[i]] = perm[self.star[i]];
        }
        InverseSemigroup {
            semigroup: self.semigroup.permuted(perm),
            star,
        }
    }
}

/// A relation on `0..size`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialOrder {
    size: usize,
    leq: Vec<bool>,
}

impl PartialOrder {
    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn pairs(&self) -> Vec<(Element, Element)> {
        (0..self.size)
            .flat_map(|a| (0..self.size).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq(a, b))
            .collect()
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.size;
        let reflexive = (0..n).all(|a| self.leq(a, a));
        let antisymmetric =
            (0..n).all(|a| (0..n).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a))));
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| !self.leq(a, b) || (0..n).all(|c| !self.leq(b, c) || self.leq(a, c)))
        });
        reflexive && antisymmetric && transitive
    }
}

/// A semigroup with a distinguished generating set. `decoration: None` means
/// the morphisms between such objects carry no decoration constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedSemigroup {
    pub semigroup: Semigroup,
    pub decoration: Option<BTreeSet<Element>>,
}

impl DecoratedSemigroup {
    pub fn new(semigroup: Semigroup, decoration: Option<Vec<Element>>) -> Result<Self> {
        let decoration = match decoration {
            None => None,
            Some(d) => {
                if let Some(&bad) = d.iter().find(|&&x| x >= semigroup.order()) {
                    return Err(Error::Format(format!("decoration element {bad} out of range")));
                }
                let generated = semigroup.closure(&d);
                if generated.len() != semigroup.order() {
                    return Err(Error::invalid(
                        "decoration",
                        format!(
                            "generates {} of {} elements",
                            generated.len(),
                            semigroup.order()
                        ),
                    ));
                }
                Some(d.into_iter().collect())
            }
        };
        Ok(DecoratedSemigroup {
            semigroup,
            decoration,
        })
    }

    pub fn undecorated(semigroup: Semigroup) -> Self {
        DecoratedSemigroup {
            semigroup,
            decoration: None,
        }
    }

    /// `(S, Σ)# = (S^op, Σ)`
    pub fn mirror(&self) -> DecoratedSemigroup {
        DecoratedSemigroup {
            semigroup: self.semigroup.mirror(),
            decoration: self.decoration.clone(),
        }
    }

    pub fn permuted(&self, perm: &[Element]) -> DecoratedSemigroup {
        DecoratedSemigroup {
            semigroup: self.semigroup.permuted(perm),
            decoration: self
                .decoration
                .as_ref()
                .map(|d| d.iter().map(|&x| perm[x]).collect()),
        }
    }
}

/// `mirror_semigroup(S)`: reversed multiplication, same involution.
pub fn mirror_semigroup(s: &InverseSemigroup) -> InverseSemigroup {
    s.mirror()
}
