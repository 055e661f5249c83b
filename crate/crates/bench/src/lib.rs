//! Seeded matrix generators shared by the benchmark targets.
//!
//! Benchmarks want inputs that are deterministic across runs, well
//! conditioned (so every route succeeds), and of controlled rank. The
//! generators here build matrices as `U diag(sigma) V*` with orthonormal
//! factors and singular values in `[0.5, 2]`.

use blockpinv::{BlockPartition, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

/// Random matrix with independent entries in the complex unit square.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    })
    .expect("positive dimensions")
}

/// Random matrix with orthonormal columns via modified Gram-Schmidt with
/// re-orthogonalization; regenerates on (vanishingly rare) near-dependence.
pub fn orthonormal_columns(rows: usize, k: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    assert!(
        k <= rows,
        "cannot fit {k} orthonormal columns in {rows} rows"
    );
    'attempt: loop {
        let raw = random_matrix(rows, k, rng);
        let mut cols: Vec<Vec<Complex64>> = (0..k)
            .map(|j| (0..rows).map(|i| raw[(i, j)]).collect())
            .collect();
        for j in 0..k {
            let (done, rest) = cols.split_at_mut(j);
            let target = &mut rest[0];
            for _ in 0..2 {
                for basis in done.iter() {
                    let proj: Complex64 = basis
                        .iter()
                        .zip(target.iter())
                        .map(|(b, t)| b.conj() * *t)
                        .sum();
                    for (t, b) in target.iter_mut().zip(basis.iter()) {
                        *t -= proj * b;
                    }
                }
            }
            let norm: f64 = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue 'attempt;
            }
            for t in target.iter_mut() {
                *t /= norm;
            }
        }
        return ComplexMatrix::from_fn(rows, k, |i, j| cols[j][i]).expect("positive dimensions");
    }
}

/// Well-conditioned matrix of exactly the requested rank, deterministic in
/// the seed.
pub fn random_rank_r(rows: usize, cols: usize, rank: usize, seed: u64) -> ComplexMatrix {
    assert!(rank >= 1 && rank <= rows.min(cols), "rank out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = orthonormal_columns(rows, rank, &mut rng);
    let v = orthonormal_columns(cols, rank, &mut rng);
    let sigma: Vec<f64> = (0..rank).map(|_| 0.5 + 1.5 * rng.gen::<f64>()).collect();
    let scaled = ComplexMatrix::from_fn(rows, rank, |i, j| u[(i, j)] * sigma[j])
        .expect("positive dimensions");
    &scaled * &v.conj_transpose()
}

/// The near-even 2x2 partition of a `rows x cols` matrix.
pub fn half_partition(rows: usize, cols: usize) -> BlockPartition {
    assert!(rows >= 2 && cols >= 2, "both sides need at least two rows");
    let p = rows / 2;
    let s = cols / 2;
    BlockPartition::new(p, rows - p, s, cols - s).expect("all four sides are positive")
}
