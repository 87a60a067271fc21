//! Graded coefficient rings over Z2.
//!
//! All three rings used by the engine are (sub)rings of a Laurent polynomial
//! ring in one variable over Z2:
//!
//! * `Laurent`:  Z2[t⁻¹, t] with |t| = N,
//! * `Positive`: Z2[t] with |t| = N,
//! * `Ambient`:  Z2[q⁻¹, q] with |q| = 2, reached from `Laurent` by t ↦ q^{N/2}.
//!
//! Coefficients live in Z2, so an element is nothing more than the set of
//! exponents whose monomial is present.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Laurent,
    Positive,
    Ambient,
}

/// Which coefficient ring a complex lives over, and the degree of its variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    kind: RingKind,
    generator_degree: u32,
}

impl RingSpec {
    pub fn laurent(generator_degree: u32) -> Result<Self, Error> {
        Self::new(RingKind::Laurent, generator_degree)
    }

    pub fn positive(generator_degree: u32) -> Result<Self, Error> {
        Self::new(RingKind::Positive, generator_degree)
    }

    /// The q-ring 𝒜 over a Laurent ring. Requires an even generator degree.
    pub fn ambient_of(laurent: RingSpec) -> Result<Self, Error> {
        if laurent.kind != RingKind::Laurent {
            return Err(Error::RingMismatch(format!(
                "ambient ring must be built from a laurent ring, got {:?}",
                laurent.kind
            )));
        }
        if !laurent.generator_degree.is_multiple_of(2) {
            return Err(Error::OddMaslov(laurent.generator_degree));
        }
        Ok(RingSpec { kind: RingKind::Ambient, generator_degree: 2 })
    }

    fn new(kind: RingKind, generator_degree: u32) -> Result<Self, Error> {
        if generator_degree == 0 {
            return Err(Error::InvalidData("generator degree must be at least 1".into()));
        }
        Ok(RingSpec { kind, generator_degree })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn generator_degree(&self) -> u32 {
        self.generator_degree
    }

    /// `generator_degree` as a signed degree, which is how it enters every degree law.
    pub fn n(&self) -> i64 {
        self.generator_degree as i64
    }

    pub fn contains(&self, a: &LaurentElement) -> bool {
        match self.kind {
            RingKind::Positive => a.min_exponent().is_none_or(|e| e >= 0),
            RingKind::Laurent | RingKind::Ambient => true,
        }
    }

    pub fn variable(&self) -> char {
        match self.kind {
            RingKind::Ambient => 'q',
            _ => 't',
        }
    }
}

/// An element of Z2[t⁻¹, t]: the set of exponents with coefficient 1.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentElement {
    exponents: BTreeSet<i64>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(exponent: i64) -> Self {
        LaurentElement { exponents: BTreeSet::from([exponent]) }
    }

    /// Builds an element from a list of exponents, cancelling repeats in pairs.
    pub fn from_exponents<I: IntoIterator<Item = i64>>(exponents: I) -> Self {
        let mut out = Self::zero();
        for e in exponents {
            out.toggle(e);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn contains(&self, exponent: i64) -> bool {
        self.exponents.contains(&exponent)
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.exponents.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.exponents.first().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.exponents.last().copied()
    }

    /// Adds the monomial with the given exponent (mod 2).
    pub fn toggle(&mut self, exponent: i64) {
        if !self.exponents.remove(&exponent) {
            self.exponents.insert(exponent);
        }
    }

    /// Multiplies by the monomial of the given exponent.
    pub fn shift(&self, by: i64) -> Self {
        LaurentElement { exponents: self.exponents.iter().map(|e| e + by).collect() }
    }

    /// Parity of the number of monomials, i.e. the value at t = 1.
    pub fn parity(&self) -> bool {
        self.exponents.len() % 2 == 1
    }

    /// Image under t ↦ q^{N/2}. Fails for odd `n`.
    pub fn to_ambient(&self, n: u32) -> Result<Self, Error> {
        if !n.is_multiple_of(2) {
            return Err(Error::OddMaslov(n));
        }
        let half = (n / 2) as i64;
        Ok(LaurentElement { exponents: self.exponents.iter().map(|e| e * half).collect() })
    }

    /// Image under t ↦ 0 (only defined on Z2[t]).
    pub fn sigma_specialize(&self) -> Result<bool, Error> {
        if let Some(e) = self.min_exponent().filter(|e| *e < 0) {
            return Err(Error::NegativeExponent(format!("t^{e} is not in the positive ring")));
        }
        Ok(self.contains(0))
    }

    pub fn display_with(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.exponents
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents)
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with('t'))
    }
}

impl AddAssign<&LaurentElement> for LaurentElement {
    fn add_assign(&mut self, rhs: &LaurentElement) {
        for &e in &rhs.exponents {
            self.toggle(e);
        }
    }
}

impl Add for &LaurentElement {
    type Output = LaurentElement;

    fn add(self, rhs: &LaurentElement) -> LaurentElement {
        LaurentElement { exponents: self.exponents.symmetric_difference(&rhs.exponents).copied().collect() }
    }
}

impl Mul for &LaurentElement {
    type Output = LaurentElement;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentElement) -> LaurentElement {
        let mut out = LaurentElement::zero();
        for a in &self.exponents {
            for b in &rhs.exponents {
                out.toggle(a + b);
            }
        }
        out
    }
}

/// A Laurent element tagged with the ring it belongs to; arithmetic is checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    pub ring: RingSpec,
    pub value: LaurentElement,
}

impl RingElement {
    pub fn new(ring: RingSpec, value: LaurentElement) -> Result<Self, Error> {
        if !ring.contains(&value) {
            return Err(Error::NegativeExponent(format!("{value:?} is not in {:?}", ring.kind())));
        }
        Ok(RingElement { ring, value })
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement, Error> {
        self.same_ring(other)?;
        Ok(RingElement { ring: self.ring, value: &self.value + &other.value })
    }

    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement, Error> {
        self.same_ring(other)?;
        Ok(RingElement { ring: self.ring, value: &self.value * &other.value })
    }

    /// t ↦ q^{N/2}, landing in the ambient ring.
    pub fn to_ambient(&self) -> Result<RingElement, Error> {
        let ring = RingSpec::ambient_of(self.ring)?;
        Ok(RingElement { ring, value: self.value.to_ambient(self.ring.generator_degree())? })
    }

    pub fn sigma_specialize(&self) -> Result<bool, Error> {
        if self.ring.kind() != RingKind::Positive {
            return Err(Error::RingMismatch("σ is only defined on the positive ring".into()));
        }
        self.value.sigma_specialize()
    }

    fn same_ring(&self, other: &RingElement) -> Result<(), Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(e: &[i64]) -> LaurentElement {
        LaurentElement::from_exponents(e.iter().copied())
    }

    #[test]
    fn addition_is_symmetric_difference() {
        assert_eq!(&el(&[0]) + &el(&[0]), el(&[]));
        assert_eq!(&el(&[1]) + &el(&[0]), el(&[0, 1]));
        assert_eq!(&el(&[]) + &el(&[3]), el(&[3]));
    }

    #[test]
    fn multiplication_is_convolution_mod_two() {
        assert_eq!(&el(&[1]) * &el(&[2]), el(&[3]));
        assert_eq!(&el(&[0, 1]) * &el(&[0, 1]), el(&[0, 2]));
        assert_eq!(&el(&[0]) * &el(&[5]), el(&[5]));
    }

    #[test]
    fn ambient_map() {
        assert_eq!(el(&[1]).to_ambient(2).unwrap(), el(&[1]));
        assert_eq!(el(&[0]).to_ambient(6).unwrap(), el(&[0]));
        assert_eq!(el(&[2]).to_ambient(4).unwrap(), el(&[4]));
        assert!(matches!(el(&[1]).to_ambient(3), Err(Error::OddMaslov(3))));
    }

    #[test]
    fn sigma() {
        assert!(el(&[0]).sigma_specialize().unwrap());
        assert!(!el(&[1, 2]).sigma_specialize().unwrap());
        assert!(!el(&[]).sigma_specialize().unwrap());
        assert!(el(&[-1, 0]).sigma_specialize().is_err());
    }

    #[test]
    fn ring_specs() {
        assert!(RingSpec::laurent(0).is_err());
        assert!(RingSpec::ambient_of(RingSpec::laurent(3).unwrap()).is_err());
        assert!(RingSpec::ambient_of(RingSpec::positive(2).unwrap()).is_err());
        let a = RingSpec::ambient_of(RingSpec::laurent(4).unwrap()).unwrap();
        assert_eq!(a.generator_degree(), 2);
        assert_eq!(a.variable(), 'q');
    }

    #[test]
    fn checked_arithmetic_rejects_mixed_rings() {
        let l = RingSpec::laurent(2).unwrap();
        let p = RingSpec::positive(2).unwrap();
        let a = RingElement::new(l, el(&[1])).unwrap();
        let b = RingElement::new(p, el(&[1])).unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_))));
        assert!(matches!(a.checked_mul(&b), Err(Error::RingMismatch(_))));
        assert!(RingElement::new(p, el(&[-1])).is_err());
        assert_eq!(a.checked_mul(&a).unwrap().value, el(&[2]));
        assert_eq!(a.to_ambient().unwrap().ring.kind(), RingKind::Ambient);
        assert!(b.sigma_specialize().is_ok());
        assert!(a.sigma_specialize().is_err());
    }

    fn arb() -> impl Strategy<Value = LaurentElement> {
        prop::collection::vec(-6i64..6, 0..6).prop_map(LaurentElement::from_exponents)
    }

    fn arb_pos() -> impl Strategy<Value = LaurentElement> {
        prop::collection::vec(0i64..6, 0..6).prop_map(LaurentElement::from_exponents)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &LaurentElement::one(), a.clone());
            prop_assert!((&a + &a).is_zero());
        }

        #[test]
        fn to_ambient_is_a_graded_ring_map(a in arb(), b in arb(), half in 1u32..4) {
            let n = 2 * half;
            let lhs = (&a * &b).to_ambient(n).unwrap();
            let rhs = &a.to_ambient(n).unwrap() * &b.to_ambient(n).unwrap();
            prop_assert_eq!(lhs, rhs);
            let image = a.to_ambient(n).unwrap();
            let degrees: Vec<i64> = a.exponents().map(|e| e * n as i64).collect();
            let image_degrees: Vec<i64> = image.exponents().map(|e| e * 2).collect();
            prop_assert_eq!(degrees, image_degrees);
        }

        #[test]
        fn sigma_is_a_ring_map(a in arb_pos(), b in arb_pos()) {
            let s = |x: &LaurentElement| x.sigma_specialize().unwrap();
            prop_assert_eq!(s(&(&a * &b)), s(&a) & s(&b));
            prop_assert_eq!(s(&(&a + &b)), s(&a) ^ s(&b));
        }
    }
}
