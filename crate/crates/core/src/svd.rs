//! Singular value machinery: a one-sided Jacobi SVD for complex matrices,
//! the SVD-based pseudoinverse, numerical rank, and a values-only Hermitian
//! eigensolver.
//!
//! One-sided Jacobi orthogonalizes the columns of the input by unitary plane
//! rotations accumulated into V; the column norms of the rotated matrix are
//! the singular values. It is slow for large matrices but has excellent
//! relative accuracy at the small dense sizes this crate targets.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 64;

/// Pairwise columns count as orthogonal once |b_i* b_j| <= TOL * |b_i| |b_j|.
const JACOBI_TOL: f64 = 1e-15;

/// Thin singular value decomposition `M = U diag(sigma) V*`.
///
/// `u` is rows x k and `v` is cols x k with k = min(rows, cols); `sigma` is
/// descending. Columns of the rectangular factor paired with a singular
/// value at or below the default rank threshold are zero vectors, not
/// arbitrary unit vectors: those directions are not resolvable in f64.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Default rank threshold: max(rows, cols) * machine epsilon * sigma_max.
pub fn default_rank_tol(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Computes the thin SVD by one-sided Jacobi rotations.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        let flipped = svd_tall(&m.conj_transpose())?;
        Ok(Svd {
            u: flipped.v,
            sigma: flipped.sigma,
            v: flipped.u,
        })
    }
}

fn svd_tall(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = m.shape();
    debug_assert!(rows >= cols);

    // Column-major working copies: b starts as M, v as the identity, and the
    // invariant M * v = b is preserved by every rotation.
    let mut b: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut col = vec![Complex64::new(0.0, 0.0); cols];
            col[j] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        converged = true;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha = norm_sqr(&b[i]);
                let beta = norm_sqr(&b[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&b[i], &b[j]);
                let g = gamma.norm();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                converged = false;

                // Unitary plane rotation zeroing the (i,j) column product:
                // with gamma = g e^{i phi}, choose t solving t^2 + 2 zeta t = 1.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + f64::hypot(1.0, zeta));
                let c = 1.0 / f64::hypot(1.0, t);
                let s = phase * (c * t);

                rotate_pair(&mut b, i, j, c, s);
                rotate_pair(&mut v, i, j, c, s);
            }
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let sigmas: Vec<f64> = b.iter().map(|col| norm_sqr(col).sqrt()).collect();
    order.sort_by(|&x, &y| sigmas[y].partial_cmp(&sigmas[x]).expect("finite norms"));

    let sigma: Vec<f64> = order.iter().map(|&k| sigmas[k]).collect();
    // Columns whose singular value sits at noise level would normalize into
    // arbitrary unit vectors; the contract zeroes them instead.
    let cutoff = default_rank_tol(rows, cols, sigma.first().copied().unwrap_or(0.0));
    let u = ComplexMatrix::from_fn(rows, cols, |i, j| {
        let k = order[j];
        if sigmas[k] > cutoff {
            b[k][i] / sigmas[k]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let v = ComplexMatrix::from_fn(cols, cols, |i, j| v[order[j]][i])?;
    Ok(Svd { u, sigma, v })
}

/// Applies the plane rotation to columns i and j:
/// new_i = c b_i - conj(s) b_j, new_j = s b_i + c b_j.
fn rotate_pair(columns: &mut [Vec<Complex64>], i: usize, j: usize, c: f64, s: Complex64) {
    let (head, tail) = columns.split_at_mut(j);
    let (col_i, col_j) = (&mut head[i], &mut tail[0]);
    for (x, y) in col_i.iter_mut().zip(col_j.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = xi * c - yj * s.conj();
        *y = xi * s + yj * c;
    }
}

fn norm_sqr(col: &[Complex64]) -> f64 {
    col.iter().map(|z| z.norm_sqr()).sum()
}

/// Inner product col_i* col_j (conjugate-linear in the first argument).
fn dot(col_i: &[Complex64], col_j: &[Complex64]) -> Complex64 {
    col_i
        .iter()
        .zip(col_j.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Singular values of `m`, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(m)?.sigma)
}

/// Moore-Penrose pseudoinverse with the default rank threshold.
pub fn svd_pinv(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let decomp = svd(m)?;
    let sigma_max = decomp.sigma.first().copied().unwrap_or(0.0);
    let tol = default_rank_tol(m.rows(), m.cols(), sigma_max);
    Ok(pinv_from_svd(&decomp, m.rows(), m.cols(), tol))
}

/// Moore-Penrose pseudoinverse treating singular values at or below
/// `rank_tol` as zero.
///
/// Directions below the default rank threshold are not resolvable by the
/// factorization itself, so a `rank_tol` smaller than the default behaves
/// like the default.
pub fn svd_pinv_with_tol(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if rank_tol.is_nan() || rank_tol < 0.0 {
        return Err(Error::NegativeTolerance { tol: rank_tol });
    }
    let decomp = svd(m)?;
    Ok(pinv_from_svd(&decomp, m.rows(), m.cols(), rank_tol))
}

fn pinv_from_svd(decomp: &Svd, rows: usize, cols: usize, tol: f64) -> ComplexMatrix {
    // X = sum over kept k of sigma_k^{-1} v_k u_k*.
    let k = decomp.sigma.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); cols * rows];
    for l in 0..k {
        let sigma = decomp.sigma[l];
        if sigma <= tol {
            break;
        }
        let inv = 1.0 / sigma;
        for i in 0..cols {
            let vi = decomp.v[(i, l)] * inv;
            for j in 0..rows {
                entries[i * rows + j] += vi * decomp.u[(j, l)].conj();
            }
        }
    }
    ComplexMatrix::new(cols, rows, entries).expect("pinv entries are finite sums of finite terms")
}

/// Numerical rank: the number of singular values strictly above `tol`.
pub fn rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::NegativeTolerance { tol });
    }
    Ok(svd(m)?.sigma.iter().filter(|&&s| s > tol).count())
}

/// Numerical rank at the default threshold.
pub fn rank_default(m: &ComplexMatrix) -> Result<usize> {
    let sigma = singular_values(m)?;
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let tol = default_rank_tol(m.rows(), m.cols(), sigma_max);
    Ok(sigma.iter().filter(|&&s| s > tol).count())
}

/// Ratio of the largest singular value to the smallest one above the default
/// rank threshold; `None` for the zero matrix.
pub fn effective_condition(m: &ComplexMatrix) -> Result<Option<f64>> {
    let sigma = singular_values(m)?;
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(None);
    }
    let tol = default_rank_tol(m.rows(), m.cols(), sigma_max);
    let smallest_kept = sigma
        .iter()
        .copied()
        .filter(|&s| s > tol)
        .fold(sigma_max, f64::min);
    Ok(Some(sigma_max / smallest_kept))
}

/// Eigenvalues of the Hermitian part (M + M*)/2, descending.
///
/// Values-only cyclic Jacobi; callers that require `m` itself to be Hermitian
/// must check `hermitian_deviation` separately.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "hermitian_eigenvalues",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let herm = &m.scale_re(0.5) + &m.conj_transpose().scale_re(0.5);
    let mut w: Vec<Complex64> = herm.entries().to_vec();
    let scale = herm.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let threshold = JACOBI_TOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        converged = true;
        for i in 0..n {
            for j in i + 1..n {
                let gamma = w[i * n + j];
                let g = gamma.norm();
                if g <= threshold {
                    continue;
                }
                converged = false;

                let a = w[i * n + i].re;
                let b = w[j * n + j].re;
                let phase = gamma / g;
                let zeta = (b - a) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + f64::hypot(1.0, zeta));
                let c = 1.0 / f64::hypot(1.0, t);
                let s = phase * (c * t);

                // Congruence W <- J* W J restricted to the (i,j) plane.
                for k in 0..n {
                    let (ki, kj) = (w[k * n + i], w[k * n + j]);
                    w[k * n + i] = ki * c - kj * s.conj();
                    w[k * n + j] = ki * s + kj * c;
                }
                for k in 0..n {
                    let (ik, jk) = (w[i * n + k], w[j * n + k]);
                    w[i * n + k] = ik * c - jk * s;
                    w[j * n + k] = ik * s.conj() + jk * c;
                }
            }
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| w[i * n + i].re).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(eigs)
}
