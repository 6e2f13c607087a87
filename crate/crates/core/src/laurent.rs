//! Integer Laurent polynomials in the single variable `A`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("span is undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// A finite sum `Σ c_d A^d` with arbitrary-precision integer coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty
/// map and structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * A^degree`.
    pub fn monomial(c: impl Into<BigInt>, degree: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, c.into());
        p
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (d, c) in terms {
            p.add_term(d, c.into());
        }
        p
    }

    /// `(-A^{-2} - A^2)^k`, the weight of `k` extra circles in a state.
    pub fn delta_pow(k: u32) -> Self {
        let delta = Self::from_terms([(-2, -1), (2, -1)]);
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * &delta;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, degree: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(degree).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&degree);
        }
    }

    /// Coefficient at `degree`, zero when absent.
    pub fn coeff(&self, degree: i64) -> BigInt {
        self.terms.get(&degree).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending degree order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `(min degree, max degree, span)`.
    pub fn span_min_max(&self) -> Result<(i64, i64, i64), LaurentError> {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => Ok((lo, hi, hi - lo)),
            _ => Err(LaurentError::ZeroPolynomial),
        }
    }

    pub fn span(&self) -> Result<i64, LaurentError> {
        self.span_min_max().map(|(_, _, s)| s)
    }

    /// The substitution `A -> A^{-1}`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (-d, c.clone())).collect(),
        }
    }

    /// Multiplies by `A^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (d + shift, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(d, c)| (*d, c * k)).collect(),
        }
    }

    /// Every pair of degrees differs by a multiple of `modulus`.
    pub fn degrees_congruent(&self, modulus: i64) -> bool {
        let mut it = self.terms.keys();
        match it.next() {
            None => true,
            Some(first) => it.all(|d| (d - first).rem_euclid(modulus) == 0),
        }
    }

    /// Pairs `[degree, coefficient]` in ascending degree order.
    pub fn to_pairs(&self) -> Vec<(i64, BigInt)> {
        self.terms.iter().map(|(d, c)| (*d, c.clone())).collect()
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms joined by ` + ` from the highest degree down, e.g.
    /// `-1*A^5 + -1*A^-3 + 1*A^-7`. Constants print bare.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *d == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*A^{d}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &'a LaurentPoly) {
        for (d, c) in &rhs.terms {
            self.add_term(*d, c.clone());
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                out.add_term(d1 + d2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| acc + p)
    }
}

impl Serialize for LaurentPoly {
    /// A list of `[degree, coefficient]` pairs, ascending. Coefficients that
    /// do not fit in an `i64` are written as decimal strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (d, c) in &self.terms {
            match c.to_i64() {
                Some(small) => seq.serialize_element(&(d, small))?,
                None => seq.serialize_element(&(d, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, CoeffRepr)> = Vec::deserialize(deserializer)?;
        let mut p = LaurentPoly::zero();
        for (d, c) in pairs {
            let c = match c {
                CoeffRepr::Int(v) => BigInt::from(v),
                CoeffRepr::Text(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| de::Error::custom(format!("bad coefficient {s:?}: {e}")))?,
            };
            p.add_term(d, c);
        }
        Ok(p)
    }
}

/// `(-1)^k` as a small integer.
pub fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// True when every coefficient of `p` is the negative of the corresponding
/// coefficient of `q` or both are equal, i.e. `p = ±q`.
pub fn equal_up_to_sign(p: &LaurentPoly, q: &LaurentPoly) -> bool {
    p == q || *p == -q
}

impl LaurentPoly {
    /// Largest absolute coefficient, used in reports.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn add_examples() {
        assert!((p(&[(1, 1)]) + p(&[(1, -1)])).is_zero());
        assert_eq!(p(&[(3, 1)]) + p(&[(-3, 1)]), p(&[(3, 1), (-3, 1)]));
        assert_eq!(
            p(&[(5, -1), (-3, -1)]) + p(&[(-3, 1), (-7, 1)]),
            p(&[(5, -1), (-7, 1)])
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            p(&[(1, 1), (-1, 1)]) * p(&[(1, 1), (-1, -1)]),
            p(&[(2, 1), (-2, -1)])
        );
        let q = p(&[(7, 3), (-2, -5)]);
        assert_eq!(LaurentPoly::one() * q.clone(), q);
        let d = p(&[(-2, -1), (2, -1)]);
        assert_eq!(&d * &d, p(&[(-4, 1), (0, 2), (4, 1)]));
    }

    #[test]
    fn delta_powers() {
        assert_eq!(LaurentPoly::delta_pow(0), LaurentPoly::one());
        assert_eq!(LaurentPoly::delta_pow(1), p(&[(-2, -1), (2, -1)]));
        assert_eq!(LaurentPoly::delta_pow(2), p(&[(-4, 1), (0, 2), (4, 1)]));
    }

    #[test]
    fn span_examples() {
        let trefoil = p(&[(5, -1), (-3, -1), (-7, 1)]);
        assert_eq!(trefoil.span_min_max(), Ok((-7, 5, 12)));
        assert_eq!(LaurentPoly::one().span_min_max(), Ok((0, 0, 0)));
        assert_eq!(
            LaurentPoly::zero().span_min_max(),
            Err(LaurentError::ZeroPolynomial)
        );
    }

    #[test]
    fn text_rendering() {
        let trefoil = p(&[(5, -1), (-3, -1), (-7, 1)]);
        assert_eq!(trefoil.to_string(), "-1*A^5 + -1*A^-3 + 1*A^-7");
        assert_eq!(LaurentPoly::one().to_string(), "1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_rendering() {
        let trefoil = p(&[(5, -1), (-3, -1), (-7, 1)]);
        let js = serde_json::to_string(&trefoil).unwrap();
        assert_eq!(js, "[[-7,1],[-3,-1],[5,-1]]");
        let big = LaurentPoly::monomial(BigInt::from(i64::MAX) * 4, 2);
        let back: LaurentPoly =
            serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-8i64..8, -5i64..6), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn degree_bounds_of_products(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ab = &a * &b;
            prop_assert_eq!(ab.min_degree().unwrap(), a.min_degree().unwrap() + b.min_degree().unwrap());
            prop_assert_eq!(ab.max_degree().unwrap(), a.max_degree().unwrap() + b.max_degree().unwrap());
        }

        #[test]
        fn delta_pow_is_symmetric(k in 0u32..12) {
            let d = LaurentPoly::delta_pow(k);
            prop_assert_eq!(d.span().unwrap(), 4 * k as i64);
            prop_assert_eq!(d.invert_variable(), d);
        }
    }
}
