//! Penrose-equation machinery.
//!
//! The four Penrose equations for a candidate inverse X of M are
//!   (1) M X M = M    (2) X M X = X    (3) (M X)* = M X    (4) (X M)* = X M
//! and the unique matrix satisfying all four is the Moore-Penrose inverse.
//! Everything here is judged by the Frobenius residuals of these equations,
//! relative to max(1, |M|_F, |X|_F).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::svd::{svd_pinv, svd_pinv_with_tol};

/// Default relative tolerance for membership checks.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

/// Frobenius residuals of the four Penrose equations for a pair (M, X).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenroseReport {
    /// |M X M - M|_F
    pub r1: f64,
    /// |X M X - X|_F
    pub r2: f64,
    /// |(M X)* - M X|_F
    pub r3: f64,
    /// |(X M)* - X M|_F
    pub r4: f64,
    /// |M|_F
    pub scale_m: f64,
    /// |X|_F
    pub scale_x: f64,
}

impl PenroseReport {
    /// Raw residual of one equation (1 through 4).
    pub fn residual(&self, eq: u8) -> f64 {
        match eq {
            1 => self.r1,
            2 => self.r2,
            3 => self.r3,
            4 => self.r4,
            _ => panic!("Penrose equations are numbered 1 through 4, got {eq}"),
        }
    }

    /// Denominator for relative judgments: max(1, |M|_F, |X|_F).
    pub fn scale(&self) -> f64 {
        1.0_f64.max(self.scale_m).max(self.scale_x)
    }

    /// Residual of one equation divided by `scale()`.
    pub fn relative(&self, eq: u8) -> f64 {
        self.residual(eq) / self.scale()
    }

    /// Largest relative residual across all four equations.
    pub fn max_relative(&self) -> f64 {
        (1..=4).map(|eq| self.relative(eq)).fold(0.0, f64::max)
    }

    /// True iff every equation named by `cls` holds at relative tolerance `tol`.
    pub fn satisfies(&self, cls: InverseClass, tol: f64) -> bool {
        cls.equations().iter().all(|&eq| self.relative(eq) <= tol)
    }

    /// Largest relative residual among the equations named by `cls`.
    pub fn max_relative_of(&self, cls: InverseClass) -> f64 {
        cls.equations()
            .iter()
            .map(|&eq| self.relative(eq))
            .fold(0.0, f64::max)
    }
}

/// A nonempty subset of the four Penrose equations, e.g. {1,2,4}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseClass(u8);

impl InverseClass {
    pub const ONE: Self = Self(0b0001);
    pub const ONE_THREE: Self = Self(0b0101);
    pub const ONE_FOUR: Self = Self(0b1001);
    pub const ONE_TWO_THREE: Self = Self(0b0111);
    pub const ONE_TWO_FOUR: Self = Self(0b1011);
    pub const MOORE_PENROSE: Self = Self(0b1111);

    /// Builds a class from equation numbers; rejects an empty selection.
    pub fn new(equations: &[u8]) -> Result<Self> {
        let mut bits = 0u8;
        for &eq in equations {
            if !(1..=4).contains(&eq) {
                return Err(Error::BadClassToken {
                    token: eq.to_string(),
                });
            }
            bits |= 1 << (eq - 1);
        }
        if bits == 0 {
            return Err(Error::EmptyClass);
        }
        Ok(Self(bits))
    }

    pub fn contains(&self, eq: u8) -> bool {
        (1..=4).contains(&eq) && self.0 & (1 << (eq - 1)) != 0
    }

    /// The equation numbers in this class, ascending.
    pub fn equations(&self) -> Vec<u8> {
        (1..=4).filter(|&eq| self.contains(eq)).collect()
    }
}

impl FromStr for InverseClass {
    type Err = Error;

    /// Parses the comma-separated form used on the command line, e.g. "1,2,4".
    fn from_str(text: &str) -> Result<Self> {
        let mut equations = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let eq: u8 = token.parse().map_err(|_| Error::BadClassToken {
                token: token.to_string(),
            })?;
            equations.push(eq);
        }
        Self::new(&equations)
    }
}

impl fmt::Display for InverseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs = self.equations();
        let text: Vec<String> = eqs.iter().map(u8::to_string).collect();
        write!(f, "{}", text.join(","))
    }
}

/// Evaluates all four Penrose residuals. X must have the transposed shape of M.
pub fn penrose_check(m: &ComplexMatrix, x: &ComplexMatrix) -> Result<PenroseReport> {
    if x.shape() != (m.cols(), m.rows()) {
        return Err(Error::ShapeMismatch {
            op: "penrose_check",
            lhs_rows: m.rows(),
            lhs_cols: m.cols(),
            rhs_rows: x.rows(),
            rhs_cols: x.cols(),
        });
    }
    let mx = m.matmul(x).expect("shapes verified above");
    let xm = x.matmul(m).expect("shapes verified above");
    Ok(PenroseReport {
        r1: (&mx * m).distance(m),
        r2: (&xm * x).distance(x),
        r3: mx.hermitian_deviation(),
        r4: xm.hermitian_deviation(),
        scale_m: m.frobenius_norm(),
        scale_x: x.frobenius_norm(),
    })
}

/// True iff X satisfies every equation in `cls` at relative tolerance `tol`.
pub fn is_member(
    m: &ComplexMatrix,
    x: &ComplexMatrix,
    cls: InverseClass,
    tol: f64,
) -> Result<bool> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::NegativeTolerance { tol });
    }
    Ok(penrose_check(m, x)?.satisfies(cls, tol))
}

/// A {1}-inverse of M. The default realization is the pseudoinverse, which
/// satisfies all four equations and in particular equation 1.
pub fn one_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    svd_pinv(m)
}

/// A seed-deterministic random {1}-inverse.
///
/// Every {1}-inverse of M has the form X0 + (I - X0 M) U + V (I - M X0) with
/// X0 any particular {1}-inverse; drawing U and V with i.i.d. entries from
/// the complex unit disc samples that family. For invertible M the family
/// collapses to the single point M^{-1}.
pub fn one_inverse_sample(m: &ComplexMatrix, seed: u64) -> Result<ComplexMatrix> {
    let x0 = svd_pinv(m)?;
    one_inverse_sample_around(m, seed, x0)
}

/// Like [`one_inverse_sample`], but the anchor pseudoinverse treats singular
/// values below `rank_tol` as zero. Intended for targets produced by
/// cancellation-prone computations, whose noise floor sits above the default
/// cutoff; the anchor then ignores noise directions instead of inverting
/// them.
pub fn one_inverse_sample_with_tol(
    m: &ComplexMatrix,
    seed: u64,
    rank_tol: f64,
) -> Result<ComplexMatrix> {
    let x0 = svd_pinv_with_tol(m, rank_tol)?;
    one_inverse_sample_around(m, seed, x0)
}

fn one_inverse_sample_around(
    m: &ComplexMatrix,
    seed: u64,
    x0: ComplexMatrix,
) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unit_disc(m.cols(), m.rows(), &mut rng);
    let v = random_unit_disc(m.cols(), m.rows(), &mut rng);

    let id_n = ComplexMatrix::identity(m.cols()).expect("cols >= 1");
    let id_m = ComplexMatrix::identity(m.rows()).expect("rows >= 1");
    let left_annihilator = &id_n - &(&x0 * m);
    let right_annihilator = &id_m - &(m * &x0);
    let x = &(&x0 + &(&left_annihilator * &u)) + &(&v * &right_annihilator);
    Ok(x)
}

fn random_unit_disc(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let radius = rng.gen::<f64>().sqrt();
        let angle = rng.gen::<f64>() * std::f64::consts::TAU;
        Complex64::from_polar(radius, angle)
    })
    .expect("dimensions are positive")
}

/// One-sided inverse through the outer Gram matrix G = M M*: for any
/// g_inv in G{1}, the product
/// M* g_inv is a {1,2,4}-inverse of M.
pub fn gram_inverse_124(m: &ComplexMatrix, g_inv: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = m.matmul(&m.conj_transpose()).expect("M M* always conforms");
    require_member(&gram, g_inv, InverseClass::ONE, "g_inv")?;
    Ok(&m.conj_transpose() * g_inv)
}

/// One-sided inverse through the inner Gram matrix H = M* M: for any
/// h_inv in H{1}, the product
/// h_inv M* is a {1,2,3}-inverse of M.
pub fn gram_inverse_123(m: &ComplexMatrix, h_inv: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = m.conj_transpose().matmul(m).expect("M* M always conforms");
    require_member(&gram, h_inv, InverseClass::ONE, "h_inv")?;
    Ok(h_inv * &m.conj_transpose())
}

/// The factored Moore-Penrose inverse L M R from any L in M{1,4} and
/// R in M{1,3}; both memberships are verified before multiplying.
pub fn mpi_from_one_sided(
    m: &ComplexMatrix,
    l: &ComplexMatrix,
    r: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    require_member(m, l, InverseClass::ONE_FOUR, "L")?;
    require_member(m, r, InverseClass::ONE_THREE, "R")?;
    Ok(&(l * m) * r)
}

/// Verifies membership at the default tolerance, reporting the worst relative
/// residual on failure.
pub(crate) fn require_member(
    m: &ComplexMatrix,
    x: &ComplexMatrix,
    cls: InverseClass,
    role: &'static str,
) -> Result<()> {
    let report = penrose_check(m, x).map_err(|e| match e {
        Error::ShapeMismatch {
            lhs_rows,
            lhs_cols,
            rhs_rows,
            rhs_cols,
            ..
        } => Error::ShapeMismatch {
            op: "membership check",
            lhs_rows,
            lhs_cols,
            rhs_rows,
            rhs_cols,
        },
        other => other,
    })?;
    if !report.satisfies(cls, DEFAULT_MEMBERSHIP_TOL) {
        return Err(Error::NotMember {
            role,
            class: cls.to_string(),
            residual: report.max_relative_of(cls),
            tol: DEFAULT_MEMBERSHIP_TOL,
        });
    }
    Ok(())
}
