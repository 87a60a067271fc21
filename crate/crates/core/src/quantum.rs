//! Quantum products from structure constants and their interaction with the
//! Gysin sequence.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::chain::Cochain;
use crate::error::Error;
use crate::gf2::{BitMatrix, BitVec};
use crate::graded::{Model, PieceCohomology, View};
use crate::gysin::BundleComplex;
use crate::pearl::{check_count, PearlComplex};
use crate::ring::RingKind;

/// One count contributing `count · z t^{mu_bar}` to `x * y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub z: String,
    pub x: String,
    pub y: String,
    pub mu_bar: i64,
    pub count: u8,
}

impl ProductTerm {
    pub fn new(z: impl Into<String>, x: impl Into<String>, y: impl Into<String>, mu_bar: i64) -> Self {
        ProductTerm { z: z.into(), x: x.into(), y: y.into(), mu_bar, count: 1 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductData {
    pub terms: Vec<ProductTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
}

/// Structure constants resolved against a complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    table: HashMap<(usize, usize), Cochain>,
    unit: Option<Cochain>,
}

impl Product {
    pub fn new(complex: &PearlComplex, data: &ProductData) -> Result<Self, Error> {
        let n = complex.n();
        let mut table: HashMap<(usize, usize), Cochain> = HashMap::new();
        for term in &data.terms {
            let z = complex.find(&term.z)?;
            let x = complex.find(&term.x)?;
            let y = complex.find(&term.y)?;
            let lhs = complex.index(z) + term.mu_bar * n;
            let rhs = complex.index(x) + complex.index(y);
            if lhs != rhs {
                return Err(Error::ProductDegreeViolation(format!(
                    "({} <- {} * {}, mu_bar {}): |z| + mu_bar·N = {lhs} but |x| + |y| = {rhs}",
                    term.z, term.x, term.y, term.mu_bar
                )));
            }
            if complex.ring().kind() == RingKind::Positive && term.mu_bar < 0 {
                return Err(Error::NegativeExponent(format!(
                    "product ({} <- {} * {}) has mu_bar {}",
                    term.z, term.x, term.y, term.mu_bar
                )));
            }
            if check_count(term.count, "product term")? {
                table.entry((x, y)).or_default().add_monomial(z, term.mu_bar);
            }
        }
        let unit = data.unit.as_ref().map(|u| complex.unit_cochain(u)).transpose()?;
        Ok(Product { table, unit })
    }

    pub fn unit(&self) -> Option<&Cochain> {
        self.unit.as_ref()
    }

    pub fn with_unit(mut self, unit: Cochain) -> Self {
        self.unit = Some(unit);
        self
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, a: &Cochain, b: &Cochain) -> Cochain {
        let mut out = Cochain::zero();
        for (x, ex) in a.monomials() {
            for (y, ey) in b.monomials() {
                if let Some(c) = self.table.get(&(x, y)) {
                    out.add_assign(&c.shift(ex + ey));
                }
            }
        }
        out
    }
}

/// Generator pairs `(x, y)` where `d(x*y) + dx*y + x*dy ≠ 0`.
pub fn check_leibniz(complex: &PearlComplex, product: &Product) -> Vec<(String, String)> {
    let mut offending = Vec::new();
    for x in 0..complex.len() {
        for y in 0..complex.len() {
            let (cx, cy) = (Cochain::basis(x), Cochain::basis(y));
            let mut s = complex.d(&product.multiply(&cx, &cy));
            s.add_assign(&product.multiply(&complex.d(&cx), &cy));
            s.add_assign(&product.multiply(&cx, &complex.d(&cy)));
            if !s.is_zero() {
                offending.push((complex.id(x).to_string(), complex.id(y).to_string()));
            }
        }
    }
    offending
}

/// The product induced on cohomology, degree by degree.
pub struct HomologyRing<'a> {
    view: View<'a>,
    product: &'a Product,
    cache: RefCell<BTreeMap<i64, PieceCohomology>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingVerdict {
    pub associative: bool,
    pub unital: bool,
    pub failures: Vec<String>,
}

impl RingVerdict {
    pub fn is_ok(&self) -> bool {
        self.associative && self.unital
    }
}

impl<'a> HomologyRing<'a> {
    pub fn new(complex: &'a PearlComplex, product: &'a Product, model: Model) -> Self {
        HomologyRing { view: View::new(complex, model), product, cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn cohomology(&self, k: i64) -> PieceCohomology {
        self.cache.borrow_mut().entry(k).or_insert_with(|| self.view.cohomology(k)).clone()
    }

    pub fn dim(&self, k: i64) -> usize {
        self.cohomology(k).dim()
    }

    pub fn class_of(&self, c: &Cochain, k: i64) -> Result<BitVec, Error> {
        self.cohomology(k).class_of(c)
    }

    pub fn lift(&self, k: i64, coords: &BitVec) -> Cochain {
        self.cohomology(k).lift(coords)
    }

    pub fn product(&self, k: i64, a: &BitVec, l: i64, b: &BitVec) -> Result<BitVec, Error> {
        let c = self.product.multiply(&self.lift(k, a), &self.lift(l, b));
        self.class_of(&c, k + l)
    }

    pub fn unit_class(&self) -> Result<BitVec, Error> {
        let unit = self.product.unit().ok_or(Error::MissingUnit)?;
        self.class_of(unit, 0)
    }

    /// Matrix of `α ↦ c * α` (or `α ↦ α * c` when `right`) from `H^k` to `H^{k + deg c}`.
    pub fn multiplication_matrix(&self, deg: i64, c: &BitVec, k: i64, right: bool) -> Result<BitMatrix, Error> {
        let dim = self.dim(k);
        let columns = (0..dim)
            .map(|i| {
                let e = BitVec::unit(dim, i);
                if right {
                    self.product(k, &e, deg, c)
                } else {
                    self.product(deg, c, k, &e)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitMatrix::from_columns(self.dim(k + deg), &columns))
    }

    /// Associativity and two-sided unitality on basis classes of the given degrees.
    pub fn check(&self, degrees: Range<i64>) -> Result<RingVerdict, Error> {
        let unit = self.unit_class()?;
        let mut failures = Vec::new();
        let mut unital = true;
        for k in degrees.clone() {
            for i in 0..self.dim(k) {
                let a = BitVec::unit(self.dim(k), i);
                if self.product(0, &unit, k, &a)? != a || self.product(k, &a, 0, &unit)? != a {
                    unital = false;
                    failures.push(format!("unit fails on class {i} of degree {k}"));
                }
            }
        }
        let mut associative = true;
        for k in degrees.clone() {
            for l in degrees.clone() {
                for m in degrees.clone() {
                    for i in 0..self.dim(k) {
                        for j in 0..self.dim(l) {
                            for h in 0..self.dim(m) {
                                let a = BitVec::unit(self.dim(k), i);
                                let b = BitVec::unit(self.dim(l), j);
                                let c = BitVec::unit(self.dim(m), h);
                                let ab = self.product(k, &a, l, &b)?;
                                let bc = self.product(l, &b, m, &c)?;
                                if self.product(k + l, &ab, m, &c)? != self.product(k, &a, l + m, &bc)? {
                                    associative = false;
                                    failures.push(format!("({k}:{i} {l}:{j} {m}:{h}) not associative"));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(RingVerdict { associative, unital, failures })
    }

    /// Two-sided inverse of `c ∈ H^deg`, as a class in `H^{-deg}`.
    pub fn inverse(&self, deg: i64, c: &BitVec) -> Result<BitVec, Error> {
        let unit = self.unit_class()?;
        if unit.is_zero() {
            return Err(Error::NotInvertible("the cohomology ring is zero".into()));
        }
        let left = self.multiplication_matrix(deg, c, -deg, false)?;
        let right = self.multiplication_matrix(deg, c, -deg, true)?;
        left.stack(&right)
            .solve(&unit.concat(&unit))
            .ok_or_else(|| Error::NotInvertible(format!("class {c:?} in degree {deg}")))
    }
}

/// Comparison of `δ(α)` with `α * e_F` and `e_F * α` on basis classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaProductVerdict {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl DeltaProductVerdict {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn delta_equals_mult_euler(
    bundle: &BundleComplex,
    product: &Product,
    model: Model,
    degrees: Range<i64>,
) -> Result<DeltaProductVerdict, Error> {
    let unit = product.unit().ok_or(Error::MissingUnit)?;
    let e = bundle.euler_class(unit, model)?.coordinates;
    let ring = HomologyRing::new(bundle.base(), product, model);
    let mut checked = 0;
    let mut failures = Vec::new();
    for k in degrees {
        let delta = bundle.connecting_map(model, k)?;
        for i in 0..ring.dim(k) {
            let a = BitVec::unit(ring.dim(k), i);
            let d = delta.generic.column(i);
            if ring.product(k, &a, 2, &e)? != d {
                failures.push(format!("δ ≠ α*e_F on class {i} of degree {k}"));
            }
            if ring.product(2, &e, k, &a)? != d {
                failures.push(format!("δ ≠ e_F*α on class {i} of degree {k}"));
            }
            checked += 1;
        }
    }
    Ok(DeltaProductVerdict { checked, failures })
}

/// Structure constants on the doubled generators: `(z';x',y')`, `(z'';x'',y')`
/// and `(z'';x',y'')` copy the base counts; nothing else is nonzero.
pub fn lift_product(data: &ProductData) -> ProductData {
    let mut terms = Vec::with_capacity(3 * data.terms.len());
    for t in &data.terms {
        let d = |s: &str, primes: &str| format!("{s}{primes}");
        let lifted = [
            (d(&t.z, "'"), d(&t.x, "'"), d(&t.y, "'")),
            (d(&t.z, "''"), d(&t.x, "''"), d(&t.y, "'")),
            (d(&t.z, "''"), d(&t.x, "'"), d(&t.y, "''")),
        ];
        for (z, x, y) in lifted {
            terms.push(ProductTerm { z, x, y, mu_bar: t.mu_bar, count: t.count });
        }
    }
    ProductData { terms, unit: data.unit.as_ref().map(|u| u.iter().map(|id| format!("{id}'")).collect()) }
}

/// Chain-level identities `i(x*y) = i(x)*i(y)`, `p(x̃*i(y)) = p(x̃)*y`,
/// `p(i(x)*ỹ) = x*p(ỹ)`, over all generator pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftIdentities {
    pub i_multiplicative: Vec<String>,
    pub p_right: Vec<String>,
    pub p_left: Vec<String>,
}

impl LiftIdentities {
    pub fn is_ok(&self) -> bool {
        self.i_multiplicative.is_empty() && self.p_right.is_empty() && self.p_left.is_empty()
    }
}

pub fn check_lift_identities(bundle: &BundleComplex, base: &Product, lifted: &Product) -> LiftIdentities {
    let (i, p) = (bundle.map_i(), bundle.map_p());
    let b = bundle.base();
    let t = bundle.total();
    let mut out = LiftIdentities { i_multiplicative: vec![], p_right: vec![], p_left: vec![] };
    for x in 0..b.len() {
        for y in 0..b.len() {
            let (cx, cy) = (Cochain::basis(x), Cochain::basis(y));
            if i.apply(&base.multiply(&cx, &cy)) != lifted.multiply(&i.apply(&cx), &i.apply(&cy)) {
                out.i_multiplicative.push(format!("({}, {})", b.id(x), b.id(y)));
            }
        }
    }
    for xt in 0..t.len() {
        let cxt = Cochain::basis(xt);
        for y in 0..b.len() {
            let cy = Cochain::basis(y);
            if p.apply(&lifted.multiply(&cxt, &i.apply(&cy))) != base.multiply(&p.apply(&cxt), &cy) {
                out.p_right.push(format!("({}, {})", t.id(xt), b.id(y)));
            }
            if p.apply(&lifted.multiply(&i.apply(&cy), &cxt)) != base.multiply(&cy, &p.apply(&cxt)) {
                out.p_left.push(format!("({}, {})", b.id(y), t.id(xt)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientClass {
    pub id: String,
    pub degree: i64,
}

/// One count contributing `count · z t^{mu_bar}` to `a * x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTerm {
    pub z: String,
    pub a: String,
    pub x: String,
    pub mu_bar: i64,
    pub count: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleActionData {
    pub ambient_classes: Vec<AmbientClass>,
    #[serde(default)]
    pub action_terms: Vec<ActionTerm>,
    /// The ambient class playing the role of the first Chern class of the normal bundle.
    pub normal_chern_class: String,
}

/// `a * c` for an ambient class `a` acting on a cochain of L.
pub fn module_action(complex: &PearlComplex, data: &ModuleActionData, a: &str, c: &Cochain) -> Result<Cochain, Error> {
    let degrees: HashMap<&str, i64> = data.ambient_classes.iter().map(|k| (k.id.as_str(), k.degree)).collect();
    if !degrees.contains_key(a) {
        return Err(Error::UnknownGenerator(a.to_string()));
    }
    let mut table: HashMap<usize, Cochain> = HashMap::new();
    for term in &data.action_terms {
        let deg = *degrees.get(term.a.as_str()).ok_or_else(|| Error::UnknownGenerator(term.a.clone()))?;
        let z = complex.find(&term.z)?;
        let x = complex.find(&term.x)?;
        let lhs = complex.index(z) + term.mu_bar * complex.n();
        let rhs = deg + complex.index(x);
        if lhs != rhs {
            return Err(Error::ProductDegreeViolation(format!(
                "action ({} <- {} * {}, mu_bar {}): {lhs} ≠ {rhs}",
                term.z, term.a, term.x, term.mu_bar
            )));
        }
        if check_count(term.count, "action term")? && term.a == a {
            table.entry(x).or_default().add_monomial(z, term.mu_bar);
        }
    }
    let mut out = Cochain::zero();
    for (x, e) in c.monomials() {
        if let Some(img) = table.get(&x) {
            out.add_assign(&img.shift(e));
        }
    }
    Ok(out)
}

/// `r_L(c) = c * 1` for the designated normal Chern class.
pub fn quantum_restriction(complex: &PearlComplex, data: &ModuleActionData, unit: &Cochain) -> Result<Cochain, Error> {
    module_action(complex, data, &data.normal_chern_class, unit)
}

/// A disk class with its count `ν(A)` and pairing `⟨c, A⟩`, both mod 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskCount {
    pub class: String,
    pub nu: u8,
    pub pairing: u8,
}

/// `e_F = (Σ ν(A)⟨c, A⟩) · t · 1`, valid for N = 2.
pub fn euler_from_disk_counts(counts: &[DiskCount], n: u32, unit: &Cochain) -> Result<Cochain, Error> {
    if n != 2 {
        return Err(Error::FormulaScope(n));
    }
    let mut parity = false;
    for c in counts {
        parity ^= check_count(c.nu, "disk count")? & check_count(c.pairing, "disk pairing")?;
    }
    Ok(if parity { unit.shift(1) } else { Cochain::zero() })
}
