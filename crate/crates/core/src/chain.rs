//! Cochains and coefficient-linear maps on free modules with a finite basis.

use std::collections::BTreeMap;

use crate::ring::LaurentElement;

/// A finite formal sum `Σ g · a_g` with `a_g` a Laurent element, keyed by basis position.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    terms: BTreeMap<usize, LaurentElement>,
}

impl Cochain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(g: usize) -> Self {
        Self::monomial(g, 0)
    }

    pub fn monomial(g: usize, exponent: i64) -> Self {
        let mut c = Self::zero();
        c.add_monomial(g, exponent);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: usize) -> LaurentElement {
        self.terms.get(&g).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &LaurentElement)> {
        self.terms.iter().map(|(g, a)| (*g, a))
    }

    /// `(generator, exponent)` pairs of every monomial present.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.terms.iter().flat_map(|(g, a)| a.exponents().map(move |e| (*g, e)))
    }

    pub fn add_monomial(&mut self, g: usize, exponent: i64) {
        let entry = self.terms.entry(g).or_default();
        entry.toggle(exponent);
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_term(&mut self, g: usize, coeff: &LaurentElement) {
        let entry = self.terms.entry(g).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_assign(&mut self, other: &Cochain) {
        for (g, a) in other.terms() {
            self.add_term(g, a);
        }
    }

    pub fn sum(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, coeff: &LaurentElement) -> Cochain {
        let mut out = Cochain::zero();
        for (g, a) in self.terms() {
            out.add_term(g, &(a * coeff));
        }
        out
    }

    pub fn shift(&self, by: i64) -> Cochain {
        Cochain { terms: self.terms.iter().map(|(g, a)| (*g, a.shift(by))).collect() }
    }

    /// Applies `f` to every coefficient; zero results are dropped.
    pub fn map_coefficients(&self, f: impl Fn(&LaurentElement) -> LaurentElement) -> Cochain {
        let mut out = Cochain::zero();
        for (g, a) in self.terms() {
            out.add_term(g, &f(a));
        }
        out
    }

    /// Relabels basis positions.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> Cochain {
        let mut out = Cochain::zero();
        for (g, a) in self.terms() {
            out.add_term(f(g), a);
        }
        out
    }
}

impl FromIterator<(usize, i64)> for Cochain {
    fn from_iter<I: IntoIterator<Item = (usize, i64)>>(iter: I) -> Self {
        let mut c = Cochain::zero();
        for (g, e) in iter {
            c.add_monomial(g, e);
        }
        c
    }
}

/// A coefficient-linear map between free modules, stored by its images of basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMap {
    target_len: usize,
    images: Vec<Cochain>,
}

impl SparseMap {
    pub fn zero(source_len: usize, target_len: usize) -> Self {
        SparseMap { target_len, images: vec![Cochain::zero(); source_len] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMap { target_len: n, images: (0..n).map(Cochain::basis).collect() }
    }

    pub fn from_images(target_len: usize, images: Vec<Cochain>) -> Self {
        debug_assert!(images.iter().all(|c| c.terms().all(|(g, _)| g < target_len)));
        SparseMap { target_len, images }
    }

    pub fn source_len(&self) -> usize {
        self.images.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn image(&self, g: usize) -> &Cochain {
        &self.images[g]
    }

    pub fn add_entry(&mut self, source: usize, target: usize, coeff: &LaurentElement) {
        self.images[source].add_term(target, coeff);
    }

    pub fn apply(&self, c: &Cochain) -> Cochain {
        let mut out = Cochain::zero();
        for (g, a) in c.terms() {
            out.add_assign(&self.images[g].scale(a));
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SparseMap) -> SparseMap {
        debug_assert_eq!(inner.target_len, self.source_len());
        SparseMap { target_len: self.target_len, images: inner.images.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn sum(&self, other: &SparseMap) -> SparseMap {
        debug_assert_eq!(self.images.len(), other.images.len());
        SparseMap {
            target_len: self.target_len,
            images: self.images.iter().zip(&other.images).map(|(a, b)| a.sum(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Cochain::is_zero)
    }

    /// Nonzero entries as `(source, target, coefficient)`, sorted.
    pub fn entries(&self) -> Vec<(usize, usize, LaurentElement)> {
        self.images.iter().enumerate().flat_map(|(s, c)| c.terms().map(move |(t, a)| (s, t, a.clone()))).collect()
    }

    pub fn map_coefficients(&self, f: impl Fn(&LaurentElement) -> LaurentElement) -> SparseMap {
        SparseMap { target_len: self.target_len, images: self.images.iter().map(|c| c.map_coefficients(&f)).collect() }
    }
}
