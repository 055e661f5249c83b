//! Dense complex matrices with row-major storage, plus 2x2 block plumbing.
//!
//! `ComplexMatrix` is an immutable value type: every operation returns a new
//! matrix and never mutates its inputs. Dimensions are always positive; a
//! matrix with zero rows or columns cannot be constructed. Entries are
//! validated to be finite at every public construction site, and all
//! arithmetic is carried out in double precision.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major, dimensions at least 1x1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension { rows, cols });
        }
        let expected = rows * cols;
        if entries.len() != expected {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected,
                got: entries.len(),
            });
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Internal constructor for results of arithmetic on already-validated
    /// values. Finite inputs at these magnitudes cannot overflow to Inf/NaN.
    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert!(rows > 0 && cols > 0);
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension { rows, cols });
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    /// Builds a matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyDimension {
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        let cols = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::EntryCount {
                    rows: rows.len(),
                    cols,
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, entries)
    }

    /// Builds a matrix from nested rows of real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let lifted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&lifted)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension { rows, cols });
        }
        Ok(Self::from_vec_unchecked(
            rows,
            cols,
            vec![Complex64::new(0.0, 0.0); rows * cols],
        ))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose: result(i,j) = conj(self(j,i)).
    pub fn conj_transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self[(i, j)].conj());
            }
        }
        Self::from_vec_unchecked(self.cols, self.rows, entries)
    }

    /// Checked matrix product; errors unless cols(self) = rows(rhs).
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(self.shape_mismatch("matmul", rhs));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut entries = vec![Complex64::new(0.0, 0.0); m * n];
        for i in 0..m {
            for l in 0..k {
                let a = self.entries[i * k + l];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let lhs_row = &rhs.entries[l * n..(l + 1) * n];
                let out_row = &mut entries[i * n..(i + 1) * n];
                for j in 0..n {
                    out_row[j] += a * lhs_row[j];
                }
            }
        }
        Self::from_vec_unchecked(m, n, entries)
    }

    /// Checked entrywise sum.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(self.shape_mismatch("add", rhs));
        }
        Ok(self.zip_unchecked(rhs, |x, y| x + y))
    }

    /// Checked entrywise difference.
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(self.shape_mismatch("sub", rhs));
        }
        Ok(self.zip_unchecked(rhs, |x, y| x - y))
    }

    fn zip_unchecked(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(&x, &y)| f(x, y))
            .collect();
        Self::from_vec_unchecked(self.rows, self.cols, entries)
    }

    /// Scalar multiple by a complex factor.
    pub fn scale(&self, factor: Complex64) -> Self {
        let entries = self.entries.iter().map(|&z| factor * z).collect();
        Self::from_vec_unchecked(self.rows, self.cols, entries)
    }

    /// Scalar multiple by a real factor.
    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Frobenius norm: sqrt of the sum of squared entry moduli.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - rhs`; panics on shape mismatch.
    pub fn distance(&self, rhs: &Self) -> f64 {
        assert_eq!(self.shape(), rhs.shape(), "distance requires equal shapes");
        self.entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(&x, &y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius deviation from Hermitian symmetry, `||M - M*||_F`.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(
            self.is_square(),
            "hermitian deviation requires a square matrix"
        );
        let mut sum = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                sum += d.norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// Horizontal concatenation `[self rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(self.shape_mismatch("hstack", rhs));
        }
        let cols = self.cols + rhs.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
            entries.extend_from_slice(&rhs.entries[i * rhs.cols..(i + 1) * rhs.cols]);
        }
        Ok(Self::from_vec_unchecked(self.rows, cols, entries))
    }

    /// Vertical concatenation `[self; rhs]`.
    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(self.shape_mismatch("vstack", rhs));
        }
        let mut entries = Vec::with_capacity((self.rows + rhs.rows) * self.cols);
        entries.extend_from_slice(&self.entries);
        entries.extend_from_slice(&rhs.entries);
        Ok(Self::from_vec_unchecked(
            self.rows + rhs.rows,
            self.cols,
            entries,
        ))
    }

    /// Copies the sub-block with the given half-open row/column ranges.
    pub(crate) fn sub_block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        debug_assert!(r0 < r1 && r1 <= self.rows && c0 < c1 && c1 <= self.cols);
        let mut entries = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            entries.extend_from_slice(&self.entries[i * self.cols + c0..i * self.cols + c1]);
        }
        Self::from_vec_unchecked(r1 - r0, c1 - c0, entries)
    }

    /// Copies column `j` as an n x 1 matrix.
    pub fn column(&self, j: usize) -> Self {
        assert!(j < self.cols);
        self.sub_block(0, self.rows, j, j + 1)
    }

    fn shape_mismatch(&self, op: &'static str, rhs: &Self) -> Error {
        Error::ShapeMismatch {
            op,
            lhs_rows: self.rows,
            lhs_cols: self.cols,
            rhs_rows: rhs.rows,
            rhs_cols: rhs.cols,
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

// Operators on references panic on non-conformable shapes; the checked
// methods above are the fallible interface. Internal pipeline code uses the
// operators only where shapes are guaranteed by construction.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        self.zip_unchecked(rhs, |x, y| x + y)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        self.zip_unchecked(rhs, |x, y| x - y)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sides of a 2x2 block partition; every side is at least 1.
///
/// A matrix split with partition (p, q, s, t) has p+q rows and s+t columns:
/// the first p rows and s columns land in the top-left block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPartition {
    p: usize,
    q: usize,
    s: usize,
    t: usize,
}

impl BlockPartition {
    pub fn new(p: usize, q: usize, s: usize, t: usize) -> Result<Self> {
        if p == 0 || q == 0 || s == 0 || t == 0 {
            return Err(Error::ZeroPartition { p, q, s, t });
        }
        Ok(Self { p, q, s, t })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn rows(&self) -> usize {
        self.p + self.q
    }

    pub fn cols(&self) -> usize {
        self.s + self.t
    }

    pub fn matches(&self, m: &ComplexMatrix) -> Result<()> {
        if m.rows() != self.rows() || m.cols() != self.cols() {
            return Err(Error::PartitionMismatch {
                p: self.p,
                q: self.q,
                s: self.s,
                t: self.t,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(())
    }
}

impl FromStr for BlockPartition {
    type Err = Error;

    /// Parses the `p,q,s,t` form used on the command line.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("partition must be four comma-separated sides, got '{text}'"),
            });
        }
        let mut sides = [0usize; 4];
        for (slot, part) in sides.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("partition side '{part}' is not a positive integer"),
            })?;
        }
        Self::new(sides[0], sides[1], sides[2], sides[3])
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.p, self.q, self.s, self.t)
    }
}

/// The four sub-blocks of a 2x2 partitioned matrix `[a b; c d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Block2x2 {
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
    d: ComplexMatrix,
}

impl Block2x2 {
    /// Validates mutual consistency: a,b share rows; c,d share rows; a,c share
    /// columns; b,d share columns.
    pub fn new(
        a: ComplexMatrix,
        b: ComplexMatrix,
        c: ComplexMatrix,
        d: ComplexMatrix,
    ) -> Result<Self> {
        let ok = a.rows() == b.rows()
            && c.rows() == d.rows()
            && a.cols() == c.cols()
            && b.cols() == d.cols();
        if !ok {
            return Err(Error::BlockMismatch {
                a_rows: a.rows(),
                a_cols: a.cols(),
                b_rows: b.rows(),
                b_cols: b.cols(),
                c_rows: c.rows(),
                c_cols: c.cols(),
                d_rows: d.rows(),
                d_cols: d.cols(),
            });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }

    pub fn partition(&self) -> BlockPartition {
        BlockPartition::new(self.a.rows(), self.c.rows(), self.a.cols(), self.b.cols())
            .expect("block dimensions are positive by construction")
    }
}

/// Copies the four sub-blocks of `e` determined by `part`.
pub fn split(e: &ComplexMatrix, part: &BlockPartition) -> Result<Block2x2> {
    part.matches(e)?;
    let (p, s) = (part.p(), part.s());
    let (rows, cols) = e.shape();
    Block2x2::new(
        e.sub_block(0, p, 0, s),
        e.sub_block(0, p, s, cols),
        e.sub_block(p, rows, 0, s),
        e.sub_block(p, rows, s, cols),
    )
}

/// Reassembles a partitioned matrix from its four sub-blocks.
pub fn compose(blocks: &Block2x2) -> ComplexMatrix {
    let top = blocks
        .a()
        .hstack(blocks.b())
        .expect("top blocks share a row count by construction");
    let bottom = blocks
        .c()
        .hstack(blocks.d())
        .expect("bottom blocks share a row count by construction");
    top.vstack(&bottom)
        .expect("stacked halves share a column count by construction")
}
