//! Long exact sequences from short exact sequences of complexes.
//!
//! `0 → A →f B →g C → 0` where `f` preserves degree and `g` shifts it by `s`
//! (`g: B^m → C^{m+s}`). The connecting map `H^{m+s}(C) → H^{m+1}(A)` is found
//! by lifting through `g`, applying the differential and pulling back through
//! `f`, each step a Z2 linear solve.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::chain::SparseMap;
use crate::error::Error;
use crate::gf2::{BitMatrix, BitVec};
use crate::graded::{exact_at, induced, PieceCohomology, View};

pub struct ShortExact<'a> {
    pub a: View<'a>,
    pub b: View<'a>,
    pub c: View<'a>,
    pub f: &'a SparseMap,
    pub g: &'a SparseMap,
    pub shift: i64,
}

/// Chain-level exactness data in one degree of B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainExactness {
    pub degree: i64,
    pub f_commutes: bool,
    pub g_commutes: bool,
    pub f_injective: bool,
    pub g_surjective: bool,
    pub composite_zero: bool,
    pub image_is_kernel: bool,
}

impl ChainExactness {
    pub fn is_ok(&self) -> bool {
        self.f_commutes
            && self.g_commutes
            && self.f_injective
            && self.g_surjective
            && self.composite_zero
            && self.image_is_kernel
    }
}

impl<'a> ShortExact<'a> {
    fn f_matrix(&self, m: i64) -> BitMatrix {
        self.a.piece(m).matrix_to(self.f, &self.b.piece(m))
    }

    fn g_matrix(&self, m: i64) -> BitMatrix {
        self.b.piece(m).matrix_to(self.g, &self.c.piece(m + self.shift))
    }

    pub fn chain_exactness(&self, m: i64) -> ChainExactness {
        let f = self.f_matrix(m);
        let g = self.g_matrix(m);
        let gf = g.mul(&f);
        let f_next = self.f_matrix(m + 1);
        let g_next = self.g_matrix(m + 1);
        ChainExactness {
            degree: m,
            f_commutes: self.b.d_matrix(m).mul(&f) == f_next.mul(&self.a.d_matrix(m)),
            g_commutes: self.c.d_matrix(m + self.shift).mul(&g) == g_next.mul(&self.b.d_matrix(m)),
            f_injective: f.rank() == f.ncols(),
            g_surjective: g.rank() == g.nrows(),
            composite_zero: gf.is_zero(),
            image_is_kernel: gf.is_zero() && f.rank() + g.rank() == f.nrows(),
        }
    }

    /// Connecting map on a cocycle of `C^{m+s}`, returned as a cocycle of `A^{m+1}`.
    pub fn connect_cocycle(&self, m: i64, c: &BitVec) -> Result<BitVec, Error> {
        let b = self.g_matrix(m).solve(c).ok_or_else(|| Error::InvalidData(format!("g is not onto in degree {m}")))?;
        let db = self.b.d_matrix(m).mul_vec(&b);
        self.f_matrix(m + 1)
            .solve(&db)
            .ok_or_else(|| Error::InvalidData(format!("d(lift) leaves the image of f in degree {}", m + 1)))
    }

    pub fn long_exact(&self, degrees: Range<i64>) -> Result<LongExact, Error> {
        let mut les = LongExact {
            shift: self.shift,
            degrees: degrees.clone(),
            a: BTreeMap::new(),
            b: BTreeMap::new(),
            c: BTreeMap::new(),
            f: BTreeMap::new(),
            g: BTreeMap::new(),
            connecting: BTreeMap::new(),
        };
        for m in degrees.start..=degrees.end {
            les.a.insert(m, self.a.cohomology(m));
            les.b.insert(m, self.b.cohomology(m));
        }
        for m in degrees.start..=degrees.end {
            les.f.insert(m, induced(&self.f_matrix(m), &les.a[&m], &les.b[&m])?);
        }
        for m in degrees {
            let hc = self.c.cohomology(m + self.shift);
            les.g.insert(m, induced(&self.g_matrix(m), &les.b[&m], &hc)?);
            let target = &les.a[&(m + 1)];
            let columns = (0..hc.dim())
                .map(|i| {
                    let a = self.connect_cocycle(m, hc.rep_vector(i))?;
                    target
                        .coordinates(&a)
                        .ok_or_else(|| Error::NotCocycle(format!("connecting image in degree {}", m + 1)))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            les.connecting.insert(m, BitMatrix::from_columns(target.dim(), &columns));
            les.c.insert(m + self.shift, hc);
        }
        Ok(les)
    }
}

/// Cohomology of the three complexes and the maps between them, keyed by B-degree `m`:
/// `f[m]: H^m(A) → H^m(B)`, `g[m]: H^m(B) → H^{m+s}(C)`,
/// `connecting[m]: H^{m+s}(C) → H^{m+1}(A)`.
#[derive(Debug, Clone)]
pub struct LongExact {
    pub shift: i64,
    pub degrees: Range<i64>,
    pub a: BTreeMap<i64, PieceCohomology>,
    pub b: BTreeMap<i64, PieceCohomology>,
    pub c: BTreeMap<i64, PieceCohomology>,
    pub f: BTreeMap<i64, BitMatrix>,
    pub g: BTreeMap<i64, BitMatrix>,
    pub connecting: BTreeMap<i64, BitMatrix>,
}

impl LongExact {
    pub fn exact_at_b(&self, m: i64) -> bool {
        exact_at(&self.f[&m], &self.g[&m], self.b[&m].dim())
    }

    pub fn exact_at_c(&self, m: i64) -> bool {
        exact_at(&self.g[&m], &self.connecting[&m], self.c[&(m + self.shift)].dim())
    }

    /// Exactness at `H^{m+1}(A)`, between `connecting[m]` and `f[m + 1]`.
    pub fn exact_at_a(&self, m: i64) -> bool {
        exact_at(&self.connecting[&m], &self.f[&(m + 1)], self.a[&(m + 1)].dim())
    }

    pub fn all_exact(&self) -> bool {
        self.degrees.clone().all(|m| self.exact_at_b(m) && self.exact_at_c(m) && self.exact_at_a(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Model;
    use crate::pearl::{DiffTerm, Generator, PearlComplex, PearlData};
    use crate::ring::RingSpec;

    #[test]
    fn t_multiple_sequence_of_a_circle() {
        // 0 → t·C₊ → C₊ → C_Morse → 0 for the circle with d M = m t
        let mut data = PearlData::new("S1", 2, vec![Generator::new("m", 0), Generator::new("M", 1)]);
        data.diff_terms.push(DiffTerm::new("m", "M", 1));
        let c = PearlComplex::build(&data, RingSpec::positive(2).unwrap()).unwrap();
        let id = SparseMap::identity(c.len());
        let ses = ShortExact {
            a: View::new(&c, Model::TMultiple),
            b: View::new(&c, Model::Positive),
            c: View::new(&c, Model::Classical),
            f: &id,
            g: &id,
            shift: 0,
        };
        for m in -1..5 {
            assert!(ses.chain_exactness(m).is_ok(), "degree {m}");
        }
        let les = ses.long_exact(-1..5).unwrap();
        assert!(les.all_exact());
        // H^1 of the Morse complex maps onto the class of m t in the t-multiple part
        assert_eq!(les.connecting[&1].rank(), 1);
    }
}
