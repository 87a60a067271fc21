//! Positive coefficients, the specialization t ↦ 0, and checkers built on them.
//!
//! Over Λ⁺ the Morse complex is the exponent-0 part of the positive complex,
//! so σ̃ is the projection onto exponent 0 and θ the inclusion Λ⁺ ⊂ Λ.

use std::ops::Range;

use serde::Serialize;

use crate::chain::{Cochain, SparseMap};
use crate::error::Error;
use crate::gf2::BitMatrix;
use crate::graded::{induced, Model, View};
use crate::gysin::{BundleComplex, GysinReport};
use crate::les::ShortExact;
use crate::pearl::{CohomologyTable, PearlComplex, PearlData};
use crate::ring::RingSpec;

/// Builds over Λ⁺, rejecting negative exponents and negative indices.
pub fn positive_complex(data: &PearlData) -> Result<PearlComplex, Error> {
    if let Some(g) = data.generators.iter().find(|g| g.index < 0) {
        return Err(Error::NegativeExponent(format!(
            "generator {} has index {}; positive complexes start in degree 0",
            g.id, g.index
        )));
    }
    PearlComplex::build(data, RingSpec::positive(data.n)?)
}

/// The specialization map between two views of one complex, degree by degree.
fn view_map(complex: &PearlComplex, from: Model, to: Model, k: i64) -> Result<BitMatrix, Error> {
    let src = View::new(complex, from).cohomology(k);
    let tgt = View::new(complex, to).cohomology(k);
    let chain = src.piece().matrix_to(&SparseMap::identity(complex.len()), tgt.piece());
    induced(&chain, &src, &tgt)
}

/// σ̃ commutes with the differentials in every degree of `window`.
pub fn sigma_is_chain_map(complex: &PearlComplex, window: Range<i64>) -> bool {
    let id = SparseMap::identity(complex.len());
    let pos = View::new(complex, Model::Positive);
    let cl = View::new(complex, Model::Classical);
    window.into_iter().all(|k| {
        let s_k = pos.piece(k).matrix_to(&id, &cl.piece(k));
        let s_k1 = pos.piece(k + 1).matrix_to(&id, &cl.piece(k + 1));
        s_k1.mul(&pos.d_matrix(k)) == cl.d_matrix(k).mul(&s_k)
    })
}

/// σ: `Q⁺H^k → H^k` as a matrix on cohomology.
pub fn sigma_map(complex: &PearlComplex, k: i64) -> Result<BitMatrix, Error> {
    view_map(complex, Model::Positive, Model::Classical, k)
}

/// θ: `Q⁺H^k → QH^k` as a matrix on cohomology.
pub fn theta_map(complex: &PearlComplex, k: i64) -> Result<BitMatrix, Error> {
    view_map(complex, Model::Positive, Model::Laurent, k)
}

/// σ applied to a Λ⁺ cocycle: the exponent-0 part.
pub fn sigma_cochain(c: &Cochain) -> Result<Cochain, Error> {
    let mut out = Cochain::zero();
    for (g, a) in c.terms() {
        if a.sigma_specialize()? {
            out.add_monomial(g, 0);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    /// `(k, dim ker σ)` for k in `[0, N)`.
    pub kernels: Vec<(i64, usize)>,
    /// Exactness of the sequence of `0 → t·C₊ → C₊ → C_Morse → 0`.
    pub pair_sequence_exact: bool,
}

impl InjectivityVerdict {
    pub fn injective(&self) -> bool {
        self.kernels.iter().all(|&(_, k)| k == 0)
    }
}

pub fn injectivity_window(complex: &PearlComplex) -> Result<InjectivityVerdict, Error> {
    let n = complex.n();
    let kernels =
        (0..n).map(|k| sigma_map(complex, k).map(|s| (k, s.ncols() - s.rank()))).collect::<Result<Vec<_>, _>>()?;
    let id = SparseMap::identity(complex.len());
    let ses = ShortExact {
        a: View::new(complex, Model::TMultiple),
        b: View::new(complex, Model::Positive),
        c: View::new(complex, Model::Classical),
        f: &id,
        g: &id,
        shift: 0,
    };
    let window = complex.default_window();
    let chain_ok = window.clone().all(|m| ses.chain_exactness(m).is_ok());
    let les = ses.long_exact(window)?;
    Ok(InjectivityVerdict { kernels, pair_sequence_exact: chain_ok && les.all_exact() })
}

/// Squares of a ladder between two Gysin sequences, one flag per row and square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderVerdict {
    /// `(k, δ-square, i-square, p-square)`.
    pub squares: Vec<(i64, bool, bool, bool)>,
}

impl LadderVerdict {
    pub fn commutes(&self) -> bool {
        self.squares.iter().all(|&(_, a, b, c)| a && b && c)
    }
}

/// Vertical maps `positive → to` on base and total, checked against each row.
fn ladder(bundle: &BundleComplex, upper: &GysinReport, lower: &GysinReport, to: Model) -> Result<LadderVerdict, Error> {
    let base = bundle.base();
    let total = bundle.total();
    let mut squares = Vec::new();
    for (u, l) in upper.rows.iter().zip(&lower.rows) {
        let k = u.k;
        let v_k = view_map(base, Model::Positive, to, k)?;
        let v_k1 = view_map(base, Model::Positive, to, k + 1)?;
        let v_k2 = view_map(base, Model::Positive, to, k + 2)?;
        let w_k2 = view_map(total, Model::Positive, to, k + 2)?;
        squares.push((
            k,
            v_k2.mul(&u.delta) == l.delta.mul(&v_k),
            w_k2.mul(&u.i) == l.i.mul(&v_k2),
            v_k1.mul(&u.p) == l.p.mul(&w_k2),
        ));
    }
    Ok(LadderVerdict { squares })
}

/// σ-ladder from the positive Floer–Gysin sequence to the classical one.
pub fn comparison_ladder(bundle: &BundleComplex, window: Range<i64>) -> Result<LadderVerdict, Error> {
    let upper = bundle.long_exact_sequence(Model::Positive, window.clone())?;
    let lower = bundle.long_exact_sequence(Model::Classical, window)?;
    ladder(bundle, &upper, &lower, Model::Classical)
}

/// θ-ladder from the positive sequence to the Laurent one.
pub fn theta_ladder(bundle: &BundleComplex, window: Range<i64>) -> Result<LadderVerdict, Error> {
    let upper = bundle.long_exact_sequence(Model::Positive, window.clone())?;
    let lower = bundle.long_exact_sequence(Model::Laurent, window)?;
    ladder(bundle, &upper, &lower, Model::Laurent)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Periodicity {
    Periodic,
    /// First degree k with `dim QH^k ≠ dim QH^{k+2}`.
    NotPeriodic(i64),
    /// QH(Γ) ≠ 0, so the splitting argument does not apply.
    NotApplicable,
}

/// `dim QH^k = dim QH^{k+2}` for every k, checked only when QH(Γ) = 0.
pub fn periodicity_check(table: &CohomologyTable, gamma_vanishes: bool) -> Periodicity {
    if !gamma_vanishes {
        return Periodicity::NotApplicable;
    }
    let keys: Vec<i64> = table.degrees.keys().copied().collect();
    for k in keys {
        if (table.periodic || table.degrees.contains_key(&(k + 2))) && table.dim(k) != table.dim(k + 2) {
            return Periodicity::NotPeriodic(k);
        }
    }
    Periodicity::Periodic
}

/// True when every Betti number in degrees `i ≡ -1 (mod N)` vanishes.
pub fn narrowness_obstruction(betti: &[usize], n: u32) -> bool {
    let n = n as usize;
    betti.iter().enumerate().all(|(i, &b)| (i + 1) % n != 0 || b == 0)
}
