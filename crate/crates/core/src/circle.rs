//! Roots of unity as exact rational angles.
//!
//! `CircleValue { num, den }` stands for `exp(2πi·num/den)`, kept reduced with
//! `0 ≤ num < den`. Multiplication adds angles mod 1; conjugation negates.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircleValue {
    num: u64,
    den: u64,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl CircleValue {
    pub const ONE: CircleValue = CircleValue { num: 0, den: 1 };

    /// `exp(2πi·num/den)`; any integer numerator, reduced mod 1.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Format("angle denominator must be positive".into()));
        }
        let r = num.rem_euclid(den as i64) as u64;
        Ok(Self::reduced(r, den))
    }

    fn reduced(num: u64, den: u64) -> Self {
        if num == 0 {
            return Self::ONE;
        }
        let g = gcd(num, den);
        CircleValue {
            num: num / g,
            den: den / g,
        }
    }

    /// The primitive-or-not `n`-th root `exp(2πi·k/n)`.
    pub fn root_of_unity(k: u64, n: u64) -> Self {
        Self::reduced(k % n, n)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == 0
    }

    pub fn mul(self, other: CircleValue) -> CircleValue {
        let den = lcm(self.den, other.den);
        let num = (self.num * (den / self.den) + other.num * (den / other.den)) % den;
        Self::reduced(num, den)
    }

    pub fn conj(self) -> CircleValue {
        if self.num == 0 {
            self
        } else {
            CircleValue {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    /// Multiplicative order.
    pub fn order(self) -> u64 {
        self.den
    }

    /// Real and imaginary parts, for display only.
    pub fn to_complex(self) -> (f64, f64) {
        let t = std::f64::consts::TAU * self.num as f64 / self.den as f64;
        (t.cos(), t.sin())
    }
}

impl Default for CircleValue {
    fn default() -> Self {
        Self::ONE
    }
}

impl Mul for CircleValue {
    type Output = CircleValue;

    fn mul(self, rhs: CircleValue) -> CircleValue {
        CircleValue::mul(self, rhs)
    }
}

pub fn circle_mul(a: CircleValue, b: CircleValue) -> CircleValue {
    a * b
}

pub fn circle_conj(a: CircleValue) -> CircleValue {
    a.conj()
}

pub fn circle_eq(a: CircleValue, b: CircleValue) -> bool {
    a == b
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for CircleValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.num, self.den].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CircleValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [num, den] = <[i64; 2]>::deserialize(deserializer)?;
        if den <= 0 {
            return Err(serde::de::Error::custom("angle denominator must be positive"));
        }
        CircleValue::new(num, den as u64).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(n: i64, d: u64) -> CircleValue {
        CircleValue::new(n, d).unwrap()
    }

    #[test]
    fn basic_identities() {
        assert_eq!(circle_mul(cv(1, 2), cv(1, 2)), CircleValue::ONE);
        assert_eq!(circle_conj(cv(1, 3)), cv(2, 3));
        assert_eq!(circle_mul(cv(1, 4), circle_conj(cv(1, 4))), CircleValue::ONE);
        assert!(circle_eq(cv(2, 4), cv(1, 2)));
        assert_eq!(cv(-1, 4), cv(3, 4));
        assert_eq!(cv(5, 5), CircleValue::ONE);
    }

    #[test]
    fn reduced_form() {
        let v = cv(6, 8);
        assert_eq!((v.num(), v.den()), (3, 4));
        assert_eq!((CircleValue::ONE.num(), CircleValue::ONE.den()), (0, 1));
        assert!(CircleValue::new(1, 0).is_err());
    }

    #[test]
    fn abelian_group_on_small_denominators() {
        let all: Vec<CircleValue> = (1..=12u64)
            .flat_map(|d| (0..d).map(move |k| CircleValue::root_of_unity(k, d)))
            .collect();
        for &a in &all {
            assert_eq!(a * CircleValue::ONE, a);
            assert_eq!(a * a.conj(), CircleValue::ONE);
            assert_eq!(a.conj().conj(), a);
            for &b in &all {
                assert_eq!(a * b, b * a);
                for &c in all.iter().step_by(7) {
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let v = cv(3, 4);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[3,4]");
        let back: CircleValue = serde_json::from_str("[-1,4]").unwrap();
        assert_eq!(back, v);
    }
}
