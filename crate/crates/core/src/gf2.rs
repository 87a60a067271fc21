//! Dense linear algebra over Z2 with bit-packed rows.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        let mut out = BitVec::zeros(end - start);
        for i in self.ones().filter(|i| (start..end).contains(i)) {
            out.set(i - start, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// A `rows × cols` matrix over Z2 stored as bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        debug_assert_eq!(self.cols, rhs.nrows());
        let mut out = BitMatrix::zeros(self.nrows(), rhs.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones() {
                out.rows[i].xor_assign(&rhs.rows[k]);
            }
        }
        out
    }

    pub fn add(&self, rhs: &BitMatrix) -> BitMatrix {
        debug_assert_eq!((self.nrows(), self.cols), (rhs.nrows(), rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&rhs.rows) {
            a.xor_assign(b);
        }
        out
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        (BitMatrix { cols: self.cols, rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self · x = 0}`, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<BitVec> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.cols, f);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self · x = b`, choosing zero on every free column.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        debug_assert_eq!(b.len(), self.nrows());
        let augmented = BitMatrix {
            cols: self.cols + 1,
            rows: self.rows.iter().enumerate().map(|(i, r)| r.concat(&BitVec::from_bools(&[b.get(i)]))).collect(),
        };
        let (r, pivots) = augmented.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            if r.get(row, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    pub fn stack(&self, below: &BitMatrix) -> BitMatrix {
        debug_assert_eq!(self.cols, below.cols);
        let mut rows = self.rows.clone();
        rows.extend(below.rows.iter().cloned());
        BitMatrix { cols: self.cols, rows }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Incrementally built echelon basis where every row carries a tag vector.
///
/// Used to express a vector in terms of previously inserted ones: the tag of
/// a reduction is the sum of the tags of the rows it consumed.
#[derive(Clone, Debug)]
pub struct TaggedEchelon {
    len: usize,
    tag_len: usize,
    rows: Vec<(usize, BitVec, BitVec)>,
}

impl TaggedEchelon {
    pub fn new(len: usize, tag_len: usize) -> Self {
        TaggedEchelon { len, tag_len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn tag_len(&self) -> usize {
        self.tag_len
    }

    /// Grows every tag to `tag_len` bits.
    pub fn widen_tags(&mut self, tag_len: usize) {
        debug_assert!(tag_len >= self.tag_len);
        for (_, _, t) in &mut self.rows {
            *t = t.concat(&BitVec::zeros(tag_len - self.tag_len));
        }
        self.tag_len = tag_len;
    }

    /// Reduces `v` against the stored rows; returns the remainder and accumulated tag.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        debug_assert_eq!(v.len(), self.len);
        let mut rem = v.clone();
        let mut tag = BitVec::zeros(self.tag_len);
        // rows are kept sorted by pivot, and each pivot is the row's lowest bit
        for (pivot, row, row_tag) in &self.rows {
            if rem.get(*pivot) {
                rem.xor_assign(row);
                tag.xor_assign(row_tag);
            }
        }
        (rem, tag)
    }

    /// Inserts `v` with `tag`; returns false when `v` was already in the span.
    pub fn insert(&mut self, v: &BitVec, tag: &BitVec) -> bool {
        let (rem, acc) = self.reduce(v);
        let Some(pivot) = rem.first_one() else {
            return false;
        };
        let mut row_tag = tag.clone();
        row_tag.xor_assign(&acc);
        // keep rows reduced so that a single pass in pivot order suffices
        for (_, row, t) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&rem);
                t.xor_assign(&row_tag);
            }
        }
        let at = self.rows.partition_point(|(p, _, _)| *p < pivot);
        self.rows.insert(at, (pivot, rem, row_tag));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(
            cols,
            rows.iter().map(|r| BitVec::from_bools(&r.iter().map(|&b| b == 1).collect::<Vec<_>>())).collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).is_zero());
        assert_eq!(k[0], BitVec::from_bools(&[true, true, true]));
    }

    #[test]
    fn solve_finds_solution_or_none() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let b = BitVec::from_bools(&[true, false, true]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.solve(&BitVec::from_bools(&[true, false, false])).is_none());
    }

    #[test]
    fn empty_shapes() {
        let a = BitMatrix::zeros(0, 3);
        assert_eq!(a.kernel().len(), 3);
        let b = BitMatrix::zeros(2, 0);
        assert!(b.kernel().is_empty());
        assert_eq!(b.solve(&BitVec::zeros(2)), Some(BitVec::zeros(0)));
        assert!(b.solve(&BitVec::unit(2, 1)).is_none());
    }

    #[test]
    fn wide_vectors_cross_word_boundaries() {
        let mut v = BitVec::zeros(130);
        v.set(129, true);
        v.set(64, true);
        assert_eq!(v.first_one(), Some(64));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![64, 129]);
        assert_eq!(v.slice(100, 130).first_one(), Some(29));
    }

    #[test]
    fn tagged_echelon_tracks_combinations() {
        let mut e = TaggedEchelon::new(3, 2);
        assert!(e.insert(&BitVec::from_bools(&[true, true, false]), &BitVec::unit(2, 0)));
        assert!(e.insert(&BitVec::from_bools(&[false, true, true]), &BitVec::unit(2, 1)));
        assert!(!e.insert(&BitVec::from_bools(&[true, false, true]), &BitVec::zeros(2)));
        let (rem, tag) = e.reduce(&BitVec::from_bools(&[true, false, true]));
        assert!(rem.is_zero());
        assert_eq!(tag, BitVec::from_bools(&[true, true]));
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (0usize..7, 0usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), c), r)
                .prop_map(move |rows| BitMatrix::from_rows(c, rows.iter().map(|b| BitVec::from_bools(b)).collect()))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_matrix()) {
            let k = a.kernel();
            prop_assert_eq!(a.rank() + k.len(), a.ncols());
            for v in &k {
                prop_assert!(a.mul_vec(v).is_zero());
            }
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn solve_is_consistent(a in arb_matrix(), seed in any::<u64>()) {
            let x = BitVec::from_bools(&(0..a.ncols()).map(|i| seed >> (i % 64) & 1 == 1).collect::<Vec<_>>());
            let b = a.mul_vec(&x);
            let y = a.solve(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&y), b);
        }
    }
}
