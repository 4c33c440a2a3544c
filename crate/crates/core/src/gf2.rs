//! Dense linear algebra over GF(2).
//!
//! Vectors and matrices are packed 64 bits per word, rows stored contiguously.
//! Row operations are plain word-wise XOR. Column permutations produced by
//! [`row_reduce_to_standard_form`] are always returned explicitly so that
//! vectors can be mapped back to their original coordinates.

use std::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones at `support`.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the overlap with `other`.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

/// A row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from dense 0/1 rows. All rows must share the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &b) in r.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from per-row supports.
    pub fn from_sparse_rows(cols: usize, supports: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(supports.len(), cols);
        for (i, s) in supports.iter().enumerate() {
            for &j in s {
                m.toggle(i, j);
            }
        }
        m
    }

    pub fn from_vectors(cols: usize, vectors: &[BitVector]) -> Self {
        let mut m = Self::zeros(vectors.len(), cols);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), cols, "vector {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(v.words());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).support()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `rows[dst] ^= rows[src]`
    #[inline]
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix-vector product `M · v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row(r).iter_ones() {
                let src = other.row_words(k);
                for (d, s) in out.row_words_mut(r).iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Returns a copy with columns reordered: column `j` of the result is column
    /// `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> BitMatrix {
        assert_eq!(perm.len(), self.cols);
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (j, &src) in perm.iter().enumerate() {
                if self.get(r, src) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        out
    }

    /// Reduced row echelon form in place. Returns the pivot column of each
    /// leading row; rows past the rank are zero afterwards.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let word = c / WORD_BITS;
            let mask = 1u64 << (c % WORD_BITS);
            let Some(p) = (next..self.rows).find(|&r| self.data[r * self.stride + word] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.data[r * self.stride + word] & mask != 0 {
                    self.xor_rows(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// GF(2) rank of `m`.
pub fn rank(m: &BitMatrix) -> usize {
    let mut work = m.clone();
    work.rref_in_place().len()
}

/// Result of [`row_reduce_to_standard_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    /// `[I_r | P]` with columns in permuted order, zero rows removed.
    pub reduced: BitMatrix,
    /// Original indices of the pivot columns, in pivot order.
    pub pivot_cols: Vec<usize>,
    /// Column `j` of `reduced` is column `col_perm[j]` of the input.
    pub col_perm: Vec<usize>,
}

impl StandardForm {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Original indices of the non-pivot columns.
    pub fn free_cols(&self) -> &[usize] {
        &self.col_perm[self.pivot_cols.len()..]
    }
}

/// Brings `m` to `[I | P]` up to an explicit column permutation.
pub fn row_reduce_to_standard_form(m: &BitMatrix) -> StandardForm {
    let mut work = m.clone();
    let pivot_cols = work.rref_in_place();
    let r = pivot_cols.len();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivot_cols {
        is_pivot[p] = true;
    }
    let mut col_perm = pivot_cols.clone();
    col_perm.extend((0..m.cols()).filter(|&c| !is_pivot[c]));
    let top: Vec<usize> = (0..r).collect();
    let reduced = work.select_rows(&top).permute_cols(&col_perm);
    StandardForm {
        reduced,
        pivot_cols,
        col_perm,
    }
}

/// Basis of `{x : M x = 0}` as the rows of the returned matrix.
///
/// Row `i` is the unique kernel vector equal to one on the `i`-th free column
/// (in ascending order) and zero on every other free column.
pub fn nullspace_basis(m: &BitMatrix) -> BitMatrix {
    let mut work = m.clone();
    let pivots = work.rref_in_place();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut basis = BitMatrix::zeros(free.len(), n);
    for (i, &f) in free.iter().enumerate() {
        basis.set(i, f, true);
        for (row, &p) in pivots.iter().enumerate() {
            if work.get(row, f) {
                basis.set(i, p, true);
            }
        }
    }
    basis
}

/// Free (non-pivot) columns of the reduced echelon form of `m`, ascending.
///
/// These index an information set of the kernel: the kernel vectors returned
/// by [`nullspace_basis`] restrict to the identity on them.
pub fn free_columns(m: &BitMatrix) -> Vec<usize> {
    let mut work = m.clone();
    let pivots = work.rref_in_place();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols()).filter(|&c| !is_pivot[c]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(rank(&BitMatrix::zeros(4, 7)), 0);
        assert_eq!(rank(&m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])), 2);
    }

    #[test]
    fn standard_form_identity() {
        let sf = row_reduce_to_standard_form(&BitMatrix::identity(3));
        assert_eq!(sf.reduced, BitMatrix::identity(3));
        assert_eq!(sf.col_perm, vec![0, 1, 2]);
        assert_eq!(sf.pivot_cols, vec![0, 1, 2]);
    }

    #[test]
    fn standard_form_drops_dependent_row() {
        let sf = row_reduce_to_standard_form(&m(&[&[0, 1], &[0, 1]]));
        assert_eq!(sf.rank(), 1);
        assert_eq!(sf.pivot_cols, vec![1]);
        assert_eq!(sf.col_perm, vec![1, 0]);
        assert_eq!(sf.reduced, m(&[&[1, 0]]));
    }

    #[test]
    fn standard_form_repetition_checks() {
        // Hand reduction: [[1,1,0],[0,1,1]] -> [[1,0,1],[0,1,1]], pivots 0,1.
        let sf = row_reduce_to_standard_form(&m(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(sf.reduced, m(&[&[1, 0, 1], &[0, 1, 1]]));
        assert_eq!(sf.col_perm, vec![0, 1, 2]);
        assert_eq!(sf.free_cols(), &[2]);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace_basis(&BitMatrix::zeros(2, 3)).rows(), 3);
        assert_eq!(nullspace_basis(&BitMatrix::identity(3)).rows(), 0);
        let g = nullspace_basis(&m(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(g, m(&[&[1, 1, 1]]));
    }

    #[test]
    fn mul_and_transpose() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let v = BitVector::from_bools(&[true, true, false]);
        assert_eq!(a.mul_vec(&v).to_bools(), vec![true, true]);
        assert_eq!(a.transpose().transpose(), a);
        let prod = a.mul(&a.transpose());
        assert_eq!(prod, m(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn wide_matrix_crosses_words() {
        let n = 150;
        let mut a = BitMatrix::zeros(n - 1, n);
        for i in 0..n - 1 {
            a.set(i, i, true);
            a.set(i, i + 1, true);
        }
        assert_eq!(rank(&a), n - 1);
        let g = nullspace_basis(&a);
        assert_eq!(g.rows(), 1);
        assert_eq!(g.row_weight(0), n);
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
                .prop_map(|rows| BitMatrix::from_rows(&rows))
        })
    }

    /// Rank by exhaustive span enumeration, independent of elimination.
    fn rank_by_span(m: &BitMatrix) -> usize {
        let mut span = std::collections::HashSet::new();
        span.insert(BitVector::zeros(m.cols()));
        for r in 0..m.rows() {
            let row = m.row(r);
            let extra: Vec<BitVector> = span
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w.xor_assign(&row);
                    w
                })
                .collect();
            span.extend(extra);
        }
        span.len().trailing_zeros() as usize
    }

    proptest! {
        #[test]
        fn rank_nullity_small(mat in arb_matrix(8, 12)) {
            let r = rank(&mat);
            prop_assert_eq!(r, rank_by_span(&mat));
            let g = nullspace_basis(&mat);
            prop_assert_eq!(r + g.rows(), mat.cols());
            prop_assert_eq!(rank(&g), g.rows());
            for i in 0..g.rows() {
                prop_assert!(mat.mul_vec(&g.row(i)).is_zero());
            }
        }

        #[test]
        fn rank_nullity_large(mat in arb_matrix(40, 130)) {
            let g = nullspace_basis(&mat);
            prop_assert_eq!(rank(&mat) + g.rows(), mat.cols());
            prop_assert!(mat.mul(&g.transpose()).is_zero());
        }

        #[test]
        fn standard_form_is_idempotent(mat in arb_matrix(10, 20)) {
            let sf = row_reduce_to_standard_form(&mat);
            let r = sf.rank();
            for i in 0..r {
                for j in 0..r {
                    prop_assert_eq!(sf.reduced.get(i, j), i == j);
                }
            }
            // Reducing again needs no further permutation.
            let again = row_reduce_to_standard_form(&sf.reduced);
            prop_assert_eq!(&again.reduced, &sf.reduced);
            prop_assert_eq!(again.col_perm, (0..mat.cols()).collect::<Vec<_>>());
            // Row space is preserved: every original row lies in the span.
            let back = sf.reduced.permute_cols(&inverse(&sf.col_perm));
            let mut stacked = back.clone();
            stacked = stack(&stacked, &mat);
            prop_assert_eq!(rank(&stacked), r);
        }
    }

    fn inverse(perm: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; perm.len()];
        for (j, &p) in perm.iter().enumerate() {
            inv[p] = j;
        }
        inv
    }

    fn stack(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut rows: Vec<BitVector> = (0..a.rows()).map(|i| a.row(i)).collect();
        rows.extend((0..b.rows()).map(|i| b.row(i)));
        BitMatrix::from_vectors(a.cols(), &rows)
    }
}
