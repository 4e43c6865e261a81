//! Characters of the idempotent semilattice and the canonical partial action.
//!
//! A character is a nonzero semilattice homomorphism `E(S) → {0,1}`. At finite
//! size the character space is discrete, so `D(e)` is just the set of
//! characters with `χ(e) = 1`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::semigroup::{Element, InverseSemigroup};

/// Values indexed by position in [`CharacterSpace::idempotents`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    values: Vec<bool>,
}

impl Character {
    pub fn new(values: Vec<bool>) -> Self {
        Character { values }
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        !self.values.iter().any(|&v| v)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `true` iff `values` is a nonzero homomorphism on the given idempotents.
pub fn is_character(s: &InverseSemigroup, idempotents: &[Element], values: &[bool]) -> bool {
    if values.len() != idempotents.len() || !values.iter().any(|&v| v) {
        return false;
    }
    let pos: HashMap<Element, usize> = idempotents.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    idempotents.iter().enumerate().all(|(a, &e)| {
        idempotents.iter().enumerate().all(|(b, &f)| match pos.get(&s.mul(e, f)) {
            Some(&ef) => values[ef] == (values[a] && values[b]),
            None => false,
        })
    })
}

#[derive(Clone, Debug)]
pub struct CharacterSpace {
    semigroup: InverseSemigroup,
    idempotents: Vec<Element>,
    position: Vec<Option<usize>>,
    characters: Vec<Character>,
    index: HashMap<Character, usize>,
}

/// All characters of `E(S)`, sorted lexicographically by value vector.
///
/// In a finite meet-semilattice every nonempty filter is principal, so the
/// candidates are the filters `↑e`; each is re-checked against the
/// homomorphism condition before it is admitted.
pub fn enumerate_characters(s: &InverseSemigroup) -> Result<CharacterSpace> {
    let idempotents = s.idempotents();
    if idempotents.is_empty() {
        return Err(Error::Domain("semigroup has no idempotents".into()));
    }
    let mut position = vec![None; s.order()];
    for (i, &e) in idempotents.iter().enumerate() {
        position[e] = Some(i);
    }
    let mut characters: Vec<Character> = idempotents
        .iter()
        .map(|&e| Character::new(idempotents.iter().map(|&f| s.mul(e, f) == e).collect()))
        .collect();
    characters.sort();
    characters.dedup();
    for chi in &characters {
        if !is_character(s, &idempotents, chi.values()) {
            return Err(Error::Internal(format!("principal filter {chi} is not a character")));
        }
    }
    let index = characters
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    Ok(CharacterSpace {
        semigroup: s.clone(),
        idempotents,
        position,
        characters,
        index,
    })
}

impl CharacterSpace {
    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn idempotents(&self) -> &[Element] {
        &self.idempotents
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn character(&self, chi: usize) -> &Character {
        &self.characters[chi]
    }

    pub fn index_of(&self, chi: &Character) -> Option<usize> {
        self.index.get(chi).copied()
    }

    /// `χ(e)`; `e` must be idempotent.
    pub fn value(&self, chi: usize, e: Element) -> bool {
        let pos = self.position[e].expect("value() called on a non-idempotent");
        self.characters[chi].values[pos]
    }

    /// `D(e)` as character indices.
    pub fn domain(&self, e: Element) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.value(c, e)).collect()
    }

    /// `χ ∈ D(s*s)`
    pub fn in_source(&self, s: Element, chi: usize) -> bool {
        self.value(chi, self.semigroup.source_idempotent(s))
    }

    /// `θ_s(χ)(e) = χ(s*·e·s)`, defined on `D(s*s)`.
    pub fn act(&self, s: Element, chi: usize) -> Result<usize> {
        let sg = &self.semigroup;
        if !self.in_source(s, chi) {
            return Err(Error::Domain(format!(
                "character {} is not in D({s}*{s})",
                self.characters[chi]
            )));
        }
        let st = sg.star(s);
        let values = self
            .idempotents
            .iter()
            .map(|&e| self.value(chi, sg.mul(sg.mul(st, e), s)))
            .collect();
        let image = Character::new(values);
        self.index_of(&image)
            .ok_or_else(|| Error::Internal(format!("θ_{s}({chi}) = {image} is not a character")))
    }

    /// `(s,χ) ~ (t,χ)` iff some idempotent `e` has `χ(e) = 1` and `s·e = t·e`.
    pub fn germ_equivalent(&self, s: Element, t: Element, chi: usize) -> Result<bool> {
        if !self.in_source(s, chi) || !self.in_source(t, chi) {
            return Err(Error::Domain(format!(
                "character {chi} is not in D({s}*{s}) ∩ D({t}*{t})"
            )));
        }
        let sg = &self.semigroup;
        Ok(self
            .idempotents
            .iter()
            .any(|&e| self.value(chi, e) && sg.mul(s, e) == sg.mul(t, e)))
    }
}

pub fn apply_partial_action(space: &CharacterSpace, s: Element, chi: usize) -> Result<usize> {
    space.act(s, chi)
}

pub fn germ_equivalent(space: &CharacterSpace, s: Element, t: Element, chi: usize) -> Result<bool> {
    space.germ_equivalent(s, t, chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i1() -> InverseSemigroup {
        InverseSemigroup::new(&[vec![0, 0], vec![0, 1]], &[0, 1]).unwrap()
    }

    #[test]
    fn trivial_group_has_one_character() {
        let g = InverseSemigroup::new(&[vec![0]], &[0]).unwrap();
        let space = enumerate_characters(&g).unwrap();
        assert_eq!(space.len(), 1);
        assert_eq!(space.character(0).values(), &[true]);
    }

    #[test]
    fn two_chain_has_two_characters() {
        // z = 0 ≤ u = 1
        let s = InverseSemigroup::new(&[vec![0, 0], vec![0, 1]], &[0, 1]).unwrap();
        let space = enumerate_characters(&s).unwrap();
        let vals: Vec<Vec<bool>> = space.characters().iter().map(|c| c.values().to_vec()).collect();
        assert_eq!(vals, vec![vec![false, true], vec![true, true]]);
    }

    #[test]
    fn idempotent_action_fixes_characters() {
        let s = i1();
        let space = enumerate_characters(&s).unwrap();
        for e in s.idempotents() {
            for chi in space.domain(e) {
                assert_eq!(space.act(e, chi).unwrap(), chi);
            }
        }
    }

    #[test]
    fn action_outside_domain_is_error() {
        let s = i1();
        let space = enumerate_characters(&s).unwrap();
        // the character (0,1) does not contain the empty map
        let chi = space.index_of(&Character::new(vec![false, true])).unwrap();
        assert!(matches!(space.act(0, chi), Err(Error::Domain(_))));
        assert!(matches!(space.germ_equivalent(0, 1, chi), Err(Error::Domain(_))));
    }

    #[test]
    fn germs_of_i1_merge_at_bottom_character() {
        let s = i1();
        let space = enumerate_characters(&s).unwrap();
        let bottom = space.index_of(&Character::new(vec![true, true])).unwrap();
        assert!(space.germ_equivalent(0, 1, bottom).unwrap());
        assert!(space.germ_equivalent(1, 1, bottom).unwrap());
    }

    #[test]
    fn group_germs_are_elements() {
        let z3 = InverseSemigroup::new(
            &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            &[0, 2, 1],
        )
        .unwrap();
        let space = enumerate_characters(&z3).unwrap();
        assert_eq!(space.len(), 1);
        for s in 0..3 {
            assert_eq!(space.act(s, 0).unwrap(), 0);
            for t in 0..3 {
                assert_eq!(space.germ_equivalent(s, t, 0).unwrap(), s == t);
            }
        }
    }
}
