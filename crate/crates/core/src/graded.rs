//! Single-degree slices of a complex as Z2 vector spaces.
//!
//! Over the coefficient field the degree-k part of a free complex has the
//! Z2-basis `{g t^e : |g| + e·N = k}`. A [`Model`] restricts which exponents
//! are kept, which turns one complex into its positive, t-multiple and
//! classical (t = 0) variants without rebuilding it.

use std::collections::HashMap;

use crate::chain::{Cochain, SparseMap};
use crate::error::Error;
use crate::gf2::{BitMatrix, BitVec, TaggedEchelon};
use crate::pearl::PearlComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Every exponent.
    Laurent,
    /// Exponents `e ≥ 0`.
    Positive,
    /// Exponents `e ≥ 1`: the subcomplex `t·C₊`.
    TMultiple,
    /// Exponent 0 only; everything else is projected away (t ↦ 0).
    Classical,
}

impl Model {
    pub fn keeps(self, exponent: i64) -> bool {
        match self {
            Model::Laurent => true,
            Model::Positive => exponent >= 0,
            Model::TMultiple => exponent >= 1,
            Model::Classical => exponent == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePiece {
    degree: i64,
    model: Model,
    cells: Vec<(usize, i64)>,
    lookup: HashMap<(usize, i64), usize>,
}

impl DegreePiece {
    pub fn new(complex: &PearlComplex, degree: i64, model: Model) -> Self {
        let n = complex.n();
        let cells: Vec<(usize, i64)> = (0..complex.len())
            .filter_map(|g| {
                let gap = degree - complex.index(g);
                (gap.rem_euclid(n) == 0).then_some((g, gap / n))
            })
            .filter(|&(_, e)| model.keeps(e))
            .collect();
        let lookup = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        DegreePiece { degree, model, cells, lookup }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[(usize, i64)] {
        &self.cells
    }

    pub fn position(&self, g: usize, exponent: i64) -> Option<usize> {
        self.lookup.get(&(g, exponent)).copied()
    }

    /// Coordinates of the part of `c` lying in this piece.
    pub fn project(&self, c: &Cochain) -> BitVec {
        let mut v = BitVec::zeros(self.dim());
        for (g, e) in c.monomials() {
            if let Some(i) = self.position(g, e) {
                v.flip(i);
            }
        }
        v
    }

    /// True when every monomial of `c` is a cell of this piece.
    pub fn contains(&self, c: &Cochain) -> bool {
        c.monomials().all(|(g, e)| self.position(g, e).is_some())
    }

    pub fn cochain(&self, v: &BitVec) -> Cochain {
        v.ones().map(|i| self.cells[i]).collect()
    }

    /// Matrix of `map` from this piece into `target`, projecting images.
    pub fn matrix_to(&self, map: &SparseMap, target: &DegreePiece) -> BitMatrix {
        let columns: Vec<BitVec> = self
            .cells
            .iter()
            .map(|&(g, e)| {
                let image = map.image(g).shift(e);
                debug_assert!(
                    target.model == Model::Classical || target.contains(&image),
                    "image leaves the target piece"
                );
                target.project(&image)
            })
            .collect();
        BitMatrix::from_columns(target.dim(), &columns)
    }
}

/// A complex seen through a [`Model`].
#[derive(Debug, Clone, Copy)]
pub struct View<'a> {
    pub complex: &'a PearlComplex,
    pub model: Model,
}

impl<'a> View<'a> {
    pub fn new(complex: &'a PearlComplex, model: Model) -> Self {
        View { complex, model }
    }

    pub fn piece(&self, degree: i64) -> DegreePiece {
        DegreePiece::new(self.complex, degree, self.model)
    }

    /// The differential from degree k to degree k + 1.
    pub fn d_matrix(&self, degree: i64) -> BitMatrix {
        self.piece(degree).matrix_to(self.complex.differential(), &self.piece(degree + 1))
    }

    pub fn cohomology(&self, degree: i64) -> PieceCohomology {
        PieceCohomology::new(self.piece(degree), &self.d_matrix(degree - 1), self.d_matrix(degree))
    }
}

/// `H^k` of a view with a fixed basis of representatives.
#[derive(Debug, Clone)]
pub struct PieceCohomology {
    piece: DegreePiece,
    reps: Vec<BitVec>,
    echelon: TaggedEchelon,
    d_out: BitMatrix,
}

impl PieceCohomology {
    pub fn new(piece: DegreePiece, d_in: &BitMatrix, d_out: BitMatrix) -> Self {
        let dim = piece.dim();
        let mut span = TaggedEchelon::new(dim, 0);
        let empty = BitVec::zeros(0);
        for j in 0..d_in.ncols() {
            span.insert(&d_in.column(j), &empty);
        }
        let reps: Vec<BitVec> = d_out.kernel().into_iter().filter(|z| span.insert(z, &empty)).collect();
        let mut echelon = TaggedEchelon::new(dim, reps.len());
        let zero_tag = BitVec::zeros(reps.len());
        for j in 0..d_in.ncols() {
            echelon.insert(&d_in.column(j), &zero_tag);
        }
        for (i, r) in reps.iter().enumerate() {
            echelon.insert(r, &BitVec::unit(reps.len(), i));
        }
        PieceCohomology { piece, reps, echelon, d_out }
    }

    pub fn degree(&self) -> i64 {
        self.piece.degree()
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn piece(&self) -> &DegreePiece {
        &self.piece
    }

    pub fn rep_vector(&self, i: usize) -> &BitVec {
        &self.reps[i]
    }

    pub fn representative(&self, i: usize) -> Cochain {
        self.piece.cochain(&self.reps[i])
    }

    pub fn is_cocycle(&self, v: &BitVec) -> bool {
        self.d_out.mul_vec(v).is_zero()
    }

    /// Class coordinates of a cocycle given in piece coordinates.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        if !self.is_cocycle(v) {
            return None;
        }
        let (rest, tag) = self.echelon.reduce(v);
        debug_assert!(rest.is_zero());
        Some(tag)
    }

    pub fn class_of(&self, c: &Cochain) -> Result<BitVec, Error> {
        self.coordinates(&self.piece.project(c))
            .ok_or_else(|| Error::NotCocycle(format!("{c:?} in degree {}", self.degree())))
    }

    /// Representative cochain of the class with the given coordinates.
    pub fn lift(&self, coords: &BitVec) -> Cochain {
        let mut v = BitVec::zeros(self.piece.dim());
        for i in coords.ones() {
            v.xor_assign(&self.reps[i]);
        }
        self.piece.cochain(&v)
    }
}

/// Matrix on cohomology of a chain-level matrix from `src`'s piece to `tgt`'s piece.
pub fn induced(chain: &BitMatrix, src: &PieceCohomology, tgt: &PieceCohomology) -> Result<BitMatrix, Error> {
    let columns = (0..src.dim())
        .map(|i| {
            tgt.coordinates(&chain.mul_vec(src.rep_vector(i))).ok_or_else(|| {
                Error::NotCocycle(format!(
                    "image of class {i} from degree {} is not a cocycle in degree {}",
                    src.degree(),
                    tgt.degree()
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BitMatrix::from_columns(tgt.dim(), &columns))
}

/// `im(incoming) = ker(outgoing)` at a node of dimension `dim`.
pub fn exact_at(incoming: &BitMatrix, outgoing: &BitMatrix, dim: usize) -> bool {
    outgoing.mul(incoming).is_zero() && incoming.rank() + outgoing.rank() == dim
}
