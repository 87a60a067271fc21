//! The circle-bundle complex over doubled generators and its Gysin sequence.
//!
//! Each base generator `x` gives `x'` of index `|x|` and `x''` of index
//! `|x| + 1`, with
//!
//! ```text
//! d̃ x'  = (dx)'
//! d̃ y'' = T(y)' + (dy)''
//! ```
//!
//! where `T` is the degree-2 twist. `d̃² = 0` exactly when `dT + Td = 0`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::chain::{Cochain, SparseMap};
use crate::error::Error;
use crate::gf2::{BitMatrix, BitVec};
use crate::graded::{exact_at, induced, Model, PieceCohomology, View};
use crate::les::{ChainExactness, LongExact, ShortExact};
use crate::pearl::{check_count, Generator, PearlComplex, PearlData};
use crate::ring::{LaurentElement, RingKind, RingSpec};

/// One count contributing `count · x' t^{mu_bar}` to `d̃ y''`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistTerm {
    pub x: String,
    pub y: String,
    pub mu_bar: i64,
    pub count: u8,
}

impl TwistTerm {
    pub fn new(x: impl Into<String>, y: impl Into<String>, mu_bar: i64) -> Self {
        TwistTerm { x: x.into(), y: y.into(), mu_bar, count: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleComplex {
    base: PearlComplex,
    twist: SparseMap,
    total: PearlComplex,
    i: SparseMap,
    p: SparseMap,
}

pub fn twist_map(base: &PearlComplex, terms: &[TwistTerm]) -> Result<SparseMap, Error> {
    let n = base.n();
    let mut twist = SparseMap::zero(base.len(), base.len());
    for term in terms {
        let x = base.find(&term.x)?;
        let y = base.find(&term.y)?;
        let lhs = base.index(x) + term.mu_bar * n;
        let rhs = base.index(y) + 2;
        if lhs != rhs {
            return Err(Error::TwistDegreeViolation(format!(
                "({} <- {}, mu_bar {}): |x| + mu_bar·N = {lhs} but |y| + 2 = {rhs}",
                term.x, term.y, term.mu_bar
            )));
        }
        if base.ring().kind() == RingKind::Positive && term.mu_bar < 0 {
            return Err(Error::NegativeExponent(format!(
                "twist ({} <- {}) has mu_bar {}",
                term.x, term.y, term.mu_bar
            )));
        }
        if check_count(term.count, "twist term")? {
            twist.add_entry(y, x, &LaurentElement::monomial(term.mu_bar));
        }
    }
    Ok(twist)
}

/// Entries of `dT + Td`, the obstruction to `d̃² = 0`.
pub fn twist_commutator(base: &PearlComplex, twist: &SparseMap) -> Vec<String> {
    let d = base.differential();
    d.compose(twist)
        .sum(&twist.compose(d))
        .entries()
        .into_iter()
        .map(|(s, t, a)| format!("({}, {}): {}", base.id(t), base.id(s), a.display_with(base.ring().variable())))
        .collect()
}

impl BundleComplex {
    pub fn build(base: &PearlData, twist: &[TwistTerm], ring: RingSpec) -> Result<Self, Error> {
        let base = PearlComplex::build(base, ring)?;
        let twist = twist_map(&base, twist)?;
        Self::from_base(base, twist)
    }

    /// Assembles the total complex from a built base and a twist map.
    pub fn from_base(base: PearlComplex, twist: SparseMap) -> Result<Self, Error> {
        base.require_d_squared_zero()?;
        let obstruction = twist_commutator(&base, &twist);
        if !obstruction.is_empty() {
            return Err(Error::TwistNotCocycle(obstruction));
        }
        let n = base.len();
        let generators: Vec<Generator> = base
            .generators()
            .iter()
            .map(|g| Generator::new(format!("{}'", g.id), g.index))
            .chain(base.generators().iter().map(|g| Generator::new(format!("{}''", g.id), g.index + 1)))
            .collect();
        let d = base.differential();
        let images: Vec<Cochain> = (0..n)
            .map(|g| d.image(g).clone())
            .chain((0..n).map(|g| twist.image(g).sum(&d.image(g).reindex(|x| x + n))))
            .collect();
        let differential = SparseMap::from_images(2 * n, images);
        let total = PearlComplex::from_parts(base.name(), base.ring(), generators, Some(differential))?;
        let i = SparseMap::from_images(2 * n, (0..n).map(Cochain::basis).collect());
        let p = SparseMap::from_images(n, (0..n).map(|_| Cochain::zero()).chain((0..n).map(Cochain::basis)).collect());
        Ok(BundleComplex { base, twist, total, i, p })
    }

    pub fn base(&self) -> &PearlComplex {
        &self.base
    }

    pub fn twist(&self) -> &SparseMap {
        &self.twist
    }

    pub fn total(&self) -> &PearlComplex {
        &self.total
    }

    pub fn map_i(&self) -> &SparseMap {
        &self.i
    }

    pub fn map_p(&self) -> &SparseMap {
        &self.p
    }

    /// `x ↦ x''`, the distinguished section of `p` on generators.
    pub fn section(&self, c: &Cochain) -> Cochain {
        c.reindex(|g| g + self.base.len())
    }

    /// Chain-map identities `d̃ i = i d` and `d p = p d̃`, and `p i = 0`, over the ring.
    pub fn chain_map_checks(&self) -> ChainMapChecks {
        let d = self.base.differential();
        let dt = self.total.differential();
        ChainMapChecks {
            i_commutes: dt.compose(&self.i) == self.i.compose(d),
            p_commutes: d.compose(&self.p) == self.p.compose(dt),
            p_after_i_zero: self.p.compose(&self.i).is_zero(),
        }
    }

    pub fn short_exact(&self, model: Model) -> ShortExact<'_> {
        ShortExact {
            a: View::new(&self.base, model),
            b: View::new(&self.total, model),
            c: View::new(&self.base, model),
            f: &self.i,
            g: &self.p,
            shift: -1,
        }
    }

    pub fn chain_exactness(&self, model: Model, window: Range<i64>) -> Vec<ChainExactness> {
        let ses = self.short_exact(model);
        window.map(|m| ses.chain_exactness(m)).collect()
    }

    /// The closed-form connecting map on a cocycle: `δ(y) = T(y)`.
    pub fn delta_formula(&self, y: &Cochain) -> Result<Cochain, Error> {
        if !self.base.is_cocycle(y) {
            return Err(Error::NotCocycle(self.base.format(y)));
        }
        Ok(self.twist.apply(y))
    }

    /// Snake lemma with the canonical lift: `d̃ (y'')` pulled back through `i`.
    pub fn delta_canonical(&self, y: &Cochain) -> Result<Cochain, Error> {
        if !self.base.is_cocycle(y) {
            return Err(Error::NotCocycle(self.base.format(y)));
        }
        let n = self.base.len();
        let image = self.total.d(&self.section(y));
        debug_assert!(image.terms().all(|(g, _)| g < n));
        Ok(image)
    }

    /// Matrices of δ on `H^k → H^{k+2}` by the formula and by the pivot-based snake.
    pub fn connecting_map(&self, model: Model, k: i64) -> Result<ConnectingMap, Error> {
        let view = View::new(&self.base, model);
        let source = view.cohomology(k);
        let target = view.cohomology(k + 2);
        let formula = induced(&source.piece().matrix_to(&self.twist, target.piece()), &source, &target)?;
        let ses = self.short_exact(model);
        let columns = (0..source.dim())
            .map(|i| {
                let a = ses.connect_cocycle(k + 1, source.rep_vector(i))?;
                target.coordinates(&a).ok_or_else(|| Error::NotCocycle(format!("δ image in degree {}", k + 2)))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let generic = BitMatrix::from_columns(target.dim(), &columns);
        Ok(ConnectingMap { degree: k, formula, generic })
    }

    /// Class of `δ` applied to an arbitrary cocycle of degree `k`, by the pivot-based snake.
    pub fn snake_class(&self, model: Model, k: i64, y: &BitVec) -> Result<BitVec, Error> {
        let a = self.short_exact(model).connect_cocycle(k + 1, y)?;
        View::new(&self.base, model)
            .cohomology(k + 2)
            .coordinates(&a)
            .ok_or_else(|| Error::NotCocycle(format!("δ image in degree {}", k + 2)))
    }

    /// `e_F = δ(unit)`.
    pub fn euler_class(&self, unit: &Cochain, model: Model) -> Result<EulerClass, Error> {
        match self.base.degree_of(unit)? {
            None | Some(0) => {}
            Some(d) => return Err(Error::NotHomogeneous { expected: 0, detail: format!("degree {d}") }),
        }
        let representative = self.delta_formula(unit)?;
        let h2 = View::new(&self.base, model).cohomology(2);
        let coordinates = h2.class_of(&representative)?;
        Ok(EulerClass { display: self.base.format(&representative), representative, coordinates })
    }

    /// The Floer–Gysin sequence over `window` (rows indexed by k, δ: k → k + 2).
    pub fn long_exact_sequence(&self, model: Model, window: Range<i64>) -> Result<GysinReport, Error> {
        let les = self.short_exact(model).long_exact(window.start..window.end + 2)?;
        let rows = window
            .clone()
            .map(|k| {
                let delta = les.connecting[&(k + 1)].clone();
                let i = les.f[&(k + 2)].clone();
                let p = les.g[&(k + 2)].clone();
                GysinRow {
                    k,
                    dim_l_k: les.c[&k].dim(),
                    dim_l_k2: les.a[&(k + 2)].dim(),
                    dim_gamma_k2: les.b[&(k + 2)].dim(),
                    dim_l_k1: les.c[&(k + 1)].dim(),
                    exact_at_l_k2: exact_at(&delta, &i, les.a[&(k + 2)].dim()),
                    exact_at_gamma: exact_at(&i, &p, les.b[&(k + 2)].dim()),
                    exact_at_l_k1: exact_at(&p, &les.connecting[&(k + 2)], les.c[&(k + 1)].dim()),
                    delta,
                    i,
                    p,
                }
            })
            .collect();
        let gamma_dims = window.clone().map(|k| (k, les.b[&k].dim())).collect();
        let base_dims = window.clone().map(|k| (k, les.a[&k].dim())).collect();
        Ok(GysinReport { model, rows, gamma_dims, base_dims, les })
    }

    /// Same bundle over the ambient ring: `T_M = T + q·Id`.
    pub fn ambient_variant(&self) -> Result<BundleComplex, Error> {
        let base = self.base.to_ambient()?;
        let n = self.base.ring().generator_degree();
        let mut twist = self.twist.map_coefficients(|a| a.to_ambient(n).expect("even N"));
        for g in 0..base.len() {
            twist.add_entry(g, g, &LaurentElement::monomial(1));
        }
        BundleComplex::from_base(base, twist)
    }

    /// Over Λ⁺: the same bundle with positive coefficients, for σ and θ comparisons.
    pub fn positive_variant(&self) -> Result<BundleComplex, Error> {
        let ring = RingSpec::positive(self.base.ring().generator_degree())?;
        let negative = self
            .base
            .differential()
            .entries()
            .into_iter()
            .chain(self.twist.entries())
            .any(|(_, _, a)| a.min_exponent().is_some_and(|e| e < 0));
        if negative {
            return Err(Error::NegativeExponent(format!("{} has negative mu_bar terms", self.base.name())));
        }
        let base = PearlComplex::from_parts(
            self.base.name(),
            ring,
            self.base.generators().to_vec(),
            Some(self.base.differential().clone()),
        )?;
        BundleComplex::from_base(base, self.twist.clone())
    }

    /// Degree span `[min index, max index + 2)` of the total complex.
    pub fn classical_window(&self) -> Range<i64> {
        let lo = self.base.generators().iter().map(|g| g.index).min().unwrap_or(0);
        let hi = self.base.generators().iter().map(|g| g.index).max().unwrap_or(-1);
        lo..hi + 2
    }

    /// The t = 0 Gysin sequence: μ̄ = 0 parts of differential and twist.
    pub fn classical_gysin(&self) -> Result<GysinReport, Error> {
        self.long_exact_sequence(Model::Classical, self.classical_window())
    }
}

/// Build-time chain-map identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainMapChecks {
    pub i_commutes: bool,
    pub p_commutes: bool,
    pub p_after_i_zero: bool,
}

impl ChainMapChecks {
    pub fn is_ok(&self) -> bool {
        self.i_commutes && self.p_commutes && self.p_after_i_zero
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectingMap {
    pub degree: i64,
    pub formula: BitMatrix,
    pub generic: BitMatrix,
}

impl ConnectingMap {
    pub fn agree(&self) -> bool {
        self.formula == self.generic
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerClass {
    pub representative: Cochain,
    pub coordinates: BitVec,
    pub display: String,
}

impl EulerClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_zero()
    }
}

/// `QH^k(L) →δ QH^{k+2}(L) →i QH^{k+2}(Γ) →p QH^{k+1}(L)`.
#[derive(Debug, Clone)]
pub struct GysinRow {
    pub k: i64,
    pub dim_l_k: usize,
    pub dim_l_k2: usize,
    pub dim_gamma_k2: usize,
    pub dim_l_k1: usize,
    pub delta: BitMatrix,
    pub i: BitMatrix,
    pub p: BitMatrix,
    pub exact_at_l_k2: bool,
    pub exact_at_gamma: bool,
    pub exact_at_l_k1: bool,
}

impl GysinRow {
    pub fn exact(&self) -> bool {
        self.exact_at_l_k2 && self.exact_at_gamma && self.exact_at_l_k1
    }

    pub fn delta_is_iso(&self) -> bool {
        self.dim_l_k == self.dim_l_k2 && self.delta.rank() == self.dim_l_k
    }
}

#[derive(Debug, Clone)]
pub struct GysinReport {
    pub model: Model,
    pub rows: Vec<GysinRow>,
    pub gamma_dims: Vec<(i64, usize)>,
    pub base_dims: Vec<(i64, usize)>,
    pub les: LongExact,
}

impl GysinReport {
    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(GysinRow::exact)
    }

    pub fn gamma_vanishes(&self) -> bool {
        self.gamma_dims.iter().all(|&(_, d)| d == 0)
    }

    pub fn gamma_dim(&self, k: i64) -> usize {
        self.les.b.get(&k).map_or(0, PieceCohomology::dim)
    }

    pub fn base_dim(&self, k: i64) -> usize {
        self.les.a.get(&k).map_or(0, PieceCohomology::dim)
    }
}
