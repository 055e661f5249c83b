//! Projectors and subspace-constrained inverses.
//!
//! Orthogonal projectors onto the range or corange of a matrix can be
//! assembled from one-sided inverse classes: `M X` is the orthogonal
//! projector onto `ran(M)` whenever `X` is a {1,3}-inverse of `M`, and
//! `X M` projects onto `ran(M*)` whenever `X` is a {1,4}-inverse. This
//! module provides those constructions, orthogonal complements, oblique
//! (non-orthogonal) projectors onto one subspace along a complementary
//! one, and {1,2}-inverses with prescribed range and null space, of
//! which the Moore-Penrose inverse is the orthogonal special case.

use crate::error::{Error, Result};
use crate::geninv::{self, InverseClass};
use crate::matrix::ComplexMatrix;
use crate::svd;

/// Relative tolerance for accepting a matrix as a projector: idempotency
/// deviation is measured against `max(1, ||P||_F^2)` and Hermitian
/// deviation against `max(1, ||P||_F)`.
pub const PROJECTOR_TOL: f64 = 1e-9;

/// Smallest principal angle (radians) between complementary subspaces
/// below which an oblique projector is flagged as near-degenerate.
pub const MIN_PRINCIPAL_ANGLE: f64 = 1e-6;

/// A linear subspace presented as the span of the columns of a generator
/// matrix. The columns need not be linearly independent; the numerical
/// rank of the generator matrix determines the subspace dimension.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    generators: ComplexMatrix,
}

impl SubspaceBasis {
    /// Wraps a generator matrix; the subspace is the span of its columns
    /// inside the ambient space whose dimension is the row count.
    pub fn new(generators: ComplexMatrix) -> Self {
        Self { generators }
    }

    /// Dimension of the ambient space the subspace lives in.
    pub fn ambient_dim(&self) -> usize {
        self.generators.rows()
    }

    /// The generator matrix whose column span is the subspace.
    pub fn generators(&self) -> &ComplexMatrix {
        &self.generators
    }

    /// Numerical dimension of the subspace (rank of the generators).
    pub fn dim(&self) -> Result<usize> {
        svd::rank_default(&self.generators)
    }

    /// Orthogonal projector onto the subspace, `G G^+` for generators `G`.
    pub fn projector(&self) -> Result<ComplexMatrix> {
        let pinv = svd::svd_pinv(&self.generators)?;
        Ok(&self.generators * &pinv)
    }

    /// Orthonormal basis for the subspace as matrix columns, or `None`
    /// for the trivial subspace.
    fn orthonormal_basis(&self) -> Result<Option<ComplexMatrix>> {
        let decomp = svd::svd(&self.generators)?;
        let sigma_max = decomp.sigma.first().copied().unwrap_or(0.0);
        let tol = svd::default_rank_tol(self.generators.rows(), self.generators.cols(), sigma_max);
        let mut basis: Option<ComplexMatrix> = None;
        for (j, &s) in decomp.sigma.iter().enumerate() {
            if s <= tol {
                break;
            }
            let col = decomp.u.column(j);
            basis = Some(match basis {
                Some(b) => b.hstack(&col).expect("row counts match"),
                None => col,
            });
        }
        Ok(basis)
    }
}

/// Orthogonal projector onto `ran(M)` built from a {1,3}-inverse: `M X`.
///
/// Membership of `x` in `M{1,3}` is verified first and a
/// [`Error::NotMember`] is returned if it fails.
pub fn projector_from_13(m: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    geninv::require_member(m, x, InverseClass::ONE_THREE, "x_13")?;
    Ok(m * x)
}

/// Orthogonal projector onto `ran(M*)` built from a {1,4}-inverse: `X M`.
///
/// Membership of `x` in `M{1,4}` is verified first and a
/// [`Error::NotMember`] is returned if it fails.
pub fn projector_from_14(m: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    geninv::require_member(m, x, InverseClass::ONE_FOUR, "x_14")?;
    Ok(x * m)
}

/// Complementary orthogonal projector `I - P`.
///
/// `p` must be Hermitian and idempotent within [`PROJECTOR_TOL`]; other
/// inputs are rejected with [`Error::NotProjector`].
pub fn complement(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_orthogonal_projector(p)?;
    let id = ComplexMatrix::identity(p.rows()).expect("projector has at least one row");
    Ok(&id - p)
}

fn require_orthogonal_projector(p: &ComplexMatrix) -> Result<()> {
    if !p.is_square() {
        return Err(Error::NotProjector {
            reason: format!("matrix is {}x{}, not square", p.rows(), p.cols()),
        });
    }
    let norm = p.frobenius_norm();
    let idem = (&(p * p) - p).frobenius_norm();
    if idem > PROJECTOR_TOL * norm.powi(2).max(1.0) {
        return Err(Error::NotProjector {
            reason: format!("idempotency deviation {idem:.3e} exceeds tolerance"),
        });
    }
    let herm = p.hermitian_deviation();
    if herm > PROJECTOR_TOL * norm.max(1.0) {
        return Err(Error::NotProjector {
            reason: format!("Hermitian deviation {herm:.3e} exceeds tolerance"),
        });
    }
    Ok(())
}

/// An oblique projector together with any near-degeneracy flags raised
/// while assembling it.
#[derive(Debug, Clone)]
pub struct ObliqueProjection {
    /// The projector onto the first subspace along the second.
    pub matrix: ComplexMatrix,
    /// Non-fatal warnings, e.g. a tiny principal angle between the
    /// subspaces that makes the projector large.
    pub warnings: Vec<String>,
}

/// Projector onto `ran(U)` along `ran(V)` for complementary subspaces.
///
/// Complementarity is checked numerically: the subspace dimensions must
/// add up to the ambient dimension and the stacked generators must have
/// full rank. The projector is assembled as the Moore-Penrose inverse of
/// `(I - P_V) P_U`, where `P_U` and `P_V` are the orthogonal projectors
/// onto the two subspaces. A smallest principal angle below
/// [`MIN_PRINCIPAL_ANGLE`] radians is reported as a warning, not an
/// error, since the projector is still well defined.
pub fn oblique_projector(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<ObliqueProjection> {
    let n = u.ambient_dim();
    if v.ambient_dim() != n {
        return Err(Error::ShapeMismatch {
            op: "oblique_projector",
            lhs_rows: n,
            lhs_cols: u.generators.cols(),
            rhs_rows: v.ambient_dim(),
            rhs_cols: v.generators.cols(),
        });
    }
    let rank_u = u.dim()?;
    let rank_v = v.dim()?;
    let stacked = u.generators.hstack(&v.generators)?;
    let rank_sum = svd::rank_default(&stacked)?;
    if rank_u + rank_v != n || rank_sum != n {
        return Err(Error::NotComplementary {
            reason: format!(
                "rank(U) = {rank_u}, rank(V) = {rank_v}, rank([U V]) = {rank_sum}, \
                 ambient dimension {n}"
            ),
        });
    }

    let mut warnings = Vec::new();
    if let (Some(qu), Some(qv)) = (u.orthonormal_basis()?, v.orthonormal_basis()?) {
        let overlap = &qu.conj_transpose() * &qv;
        let cos_min_angle = svd::singular_values(&overlap)?
            .first()
            .copied()
            .unwrap_or(0.0)
            .min(1.0);
        let min_angle = cos_min_angle.acos();
        if min_angle < MIN_PRINCIPAL_ANGLE {
            warnings.push(format!(
                "subspaces are nearly parallel: smallest principal angle \
                 {min_angle:.3e} rad is below {MIN_PRINCIPAL_ANGLE:.1e}"
            ));
        }
    }

    let p_u = u.projector()?;
    let p_v = v.projector()?;
    let id = ComplexMatrix::identity(n).expect("ambient dimension is at least one");
    let product = &(&id - &p_v) * &p_u;
    let matrix = svd::svd_pinv(&product)?;
    Ok(ObliqueProjection { matrix, warnings })
}

/// A {1,2}-inverse with prescribed range and null space, together with
/// any near-degeneracy flags raised while assembling it.
#[derive(Debug, Clone)]
pub struct ConstrainedInverse {
    /// The constrained inverse.
    pub matrix: ComplexMatrix,
    /// Non-fatal warnings inherited from the oblique projectors used in
    /// the construction.
    pub warnings: Vec<String>,
}

/// The {1,2}-inverse of `m` with range `ran(V)` and null space `ran(U)`.
///
/// Requires `ran(M) ⊕ ran(U)` to fill the codomain and
/// `nul(M) ⊕ ran(V)` to fill the domain; both conditions are checked
/// numerically and violations reported as [`Error::NotComplementary`].
/// The result is `P_{V,nul(M)} · M^(1) · P_{ran(M),U}` for any
/// {1}-inverse `M^(1)`; the product is independent of that choice. A
/// caller-supplied `m_one` is membership-checked first; by default the
/// Moore-Penrose inverse is used. Choosing `V = ran(M*)` and
/// `U = ran(M)^⊥` recovers the Moore-Penrose inverse itself.
pub fn constrained_inverse(
    m: &ComplexMatrix,
    v: &SubspaceBasis,
    u: &SubspaceBasis,
    m_one: Option<&ComplexMatrix>,
) -> Result<ConstrainedInverse> {
    if v.ambient_dim() != m.cols() {
        return Err(Error::ShapeMismatch {
            op: "constrained_inverse range subspace",
            lhs_rows: m.rows(),
            lhs_cols: m.cols(),
            rhs_rows: v.ambient_dim(),
            rhs_cols: v.generators.cols(),
        });
    }
    if u.ambient_dim() != m.rows() {
        return Err(Error::ShapeMismatch {
            op: "constrained_inverse null-space subspace",
            lhs_rows: m.rows(),
            lhs_cols: m.cols(),
            rhs_rows: u.ambient_dim(),
            rhs_cols: u.generators.cols(),
        });
    }
    let one = match m_one {
        Some(x) => {
            geninv::require_member(m, x, InverseClass::ONE, "m_one")?;
            x.clone()
        }
        None => geninv::one_inverse(m)?,
    };

    let pinv = svd::svd_pinv(m)?;
    // I - M^+ M spans nul(M). With full column rank the null space is
    // trivial and the subtraction leaves pure rounding noise whose rank
    // would be misjudged, so substitute exact zeros.
    let null_generators = if svd::rank_default(m)? == m.cols() {
        ComplexMatrix::zeros(m.cols(), 1).expect("cols >= 1")
    } else {
        let id_domain = ComplexMatrix::identity(m.cols()).expect("cols >= 1");
        &id_domain - &(&pinv * m)
    };

    let range_basis = SubspaceBasis::new(m.clone());
    let null_basis = SubspaceBasis::new(null_generators);
    let onto_range = oblique_projector(&range_basis, u)?;
    let onto_v = oblique_projector(v, &null_basis)?;

    let matrix = &(&onto_v.matrix * &one) * &onto_range.matrix;
    let mut warnings = onto_v.warnings;
    warnings.extend(onto_range.warnings);
    Ok(ConstrainedInverse { matrix, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geninv::{is_member, one_inverse_sample, DEFAULT_MEMBERSHIP_TOL};
    use num_complex::Complex64;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        })
        .expect("positive dimensions")
    }

    /// Gaussian elimination with partial pivoting; `a` square, returns
    /// `x` with `a x = b`. Test oracle only: panics on singular input.
    fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let n = a.rows();
        assert!(a.is_square() && b.rows() == n);
        let k = b.cols();
        let mut aug = a.clone();
        let mut rhs = b.clone();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    aug[(r1, col)]
                        .norm()
                        .partial_cmp(&aug[(r2, col)].norm())
                        .expect("finite entries")
                })
                .expect("non-empty range");
            assert!(aug[(pivot_row, col)].norm() > 1e-12, "singular system");
            if pivot_row != col {
                for j in 0..n {
                    let tmp = aug[(col, j)];
                    aug[(col, j)] = aug[(pivot_row, j)];
                    aug[(pivot_row, j)] = tmp;
                }
                for j in 0..k {
                    let tmp = rhs[(col, j)];
                    rhs[(col, j)] = rhs[(pivot_row, j)];
                    rhs[(pivot_row, j)] = tmp;
                }
            }
            for row in (col + 1)..n {
                let factor = aug[(row, col)] / aug[(col, col)];
                for j in col..n {
                    let delta = factor * aug[(col, j)];
                    aug[(row, j)] -= delta;
                }
                for j in 0..k {
                    let delta = factor * rhs[(col, j)];
                    rhs[(row, j)] -= delta;
                }
            }
        }
        let mut x = rhs;
        for col in (0..n).rev() {
            for j in 0..k {
                let mut acc = x[(col, j)];
                for inner in (col + 1)..n {
                    acc -= aug[(col, inner)] * x[(inner, j)];
                }
                x[(col, j)] = acc / aug[(col, col)];
            }
        }
        x
    }

    /// Oblique projector onto `ran(U)` along `ran(V)` via a linear solve:
    /// decompose each basis vector as `u + v` and keep the `u` part.
    fn oblique_oracle(u_gen: &ComplexMatrix, v_gen: &ComplexMatrix) -> ComplexMatrix {
        let n = u_gen.rows();
        let stacked = u_gen.hstack(v_gen).expect("same ambient dimension");
        assert_eq!(stacked.cols(), n, "oracle needs independent generators");
        let id = ComplexMatrix::identity(n).expect("n >= 1");
        let coeffs = solve(&stacked, &id);
        let u_coeffs = ComplexMatrix::from_fn(u_gen.cols(), n, |i, j| coeffs[(i, j)])
            .expect("positive dimensions");
        u_gen * &u_coeffs
    }

    #[test]
    fn subspace_basis_projector_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let gen = random_matrix(4, 2, &mut rng);
        let basis = SubspaceBasis::new(gen.clone());
        assert_eq!(basis.ambient_dim(), 4);
        assert_eq!(basis.dim().unwrap(), 2);

        let p = basis.projector().unwrap();
        assert!(p.hermitian_deviation() <= 1e-12 * p.frobenius_norm());
        let idem = (&(&p * &p) - &p).frobenius_norm();
        assert!(idem <= 1e-12, "idempotency deviation {idem:.3e}");
        // The projector fixes every generator column.
        let fixed = (&(&p * &gen) - &gen).frobenius_norm();
        assert!(fixed <= 1e-12 * gen.frobenius_norm());
    }

    #[test]
    fn projector_from_13_matches_range_projector() {
        let m = ComplexMatrix::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let x = ComplexMatrix::from_real_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]]).unwrap();
        let p = projector_from_13(&m, &x).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(p.distance(&expected) <= 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_matrix(4, 2, &mut rng);
        let x = svd::svd_pinv(&m).unwrap();
        let p = projector_from_13(&m, &x).unwrap();
        assert_eq!(
            svd::rank_default(&p).unwrap(),
            svd::rank_default(&m).unwrap()
        );
        let fixes_range = (&(&p * &m) - &m).frobenius_norm();
        assert!(fixes_range <= 1e-12 * m.frobenius_norm());
    }

    #[test]
    fn projector_from_14_matches_corange_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_matrix(2, 4, &mut rng);
        let x = svd::svd_pinv(&m).unwrap();
        let p = projector_from_14(&m, &x).unwrap();
        // X M projects onto ran(M*): it fixes the columns of M*.
        let adjoint = m.conj_transpose();
        let fixes = (&(&p * &adjoint) - &adjoint).frobenius_norm();
        assert!(fixes <= 1e-12 * adjoint.frobenius_norm());
        assert!(p.hermitian_deviation() <= 1e-12 * p.frobenius_norm());
    }

    #[test]
    fn projector_builders_reject_wrong_class() {
        let m = ComplexMatrix::identity(2).unwrap();
        let zero = ComplexMatrix::zeros(2, 2).unwrap();
        let err = projector_from_13(&m, &zero).unwrap_err();
        assert!(matches!(err, Error::NotMember { .. }));
        let err = projector_from_14(&m, &zero).unwrap_err();
        assert!(matches!(err, Error::NotMember { .. }));

        // Proper one-sided members must still be rejected by the builder
        // for the other side. For M = diag(1, 0): [[1, 1], [0, 0]] is in
        // M{1,4} but not M{1,3}, and [[1, 0], [1, 0]] is the reverse.
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let only_14 = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let only_13 = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(is_member(&m, &only_14, InverseClass::ONE_FOUR, DEFAULT_MEMBERSHIP_TOL).unwrap());
        assert!(is_member(
            &m,
            &only_13,
            InverseClass::ONE_THREE,
            DEFAULT_MEMBERSHIP_TOL
        )
        .unwrap());
        let err = projector_from_13(&m, &only_14).unwrap_err();
        assert!(matches!(err, Error::NotMember { .. }));
        let err = projector_from_14(&m, &only_13).unwrap_err();
        assert!(matches!(err, Error::NotMember { .. }));
    }

    #[test]
    fn complement_hand_cases() {
        let id = ComplexMatrix::identity(2).unwrap();
        let zero = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(complement(&id).unwrap().distance(&zero) <= 1e-15);
        assert!(complement(&zero).unwrap().distance(&id) <= 1e-15);

        let half = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert!(complement(&half).unwrap().distance(&expected) <= 1e-15);
    }

    #[test]
    fn complement_rejects_non_projectors() {
        // Idempotent but not Hermitian.
        let skew = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            complement(&skew).unwrap_err(),
            Error::NotProjector { .. }
        ));
        // Hermitian but not idempotent.
        let scaled = ComplexMatrix::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            complement(&scaled).unwrap_err(),
            Error::NotProjector { .. }
        ));
        // Not square.
        let rect = ComplexMatrix::zeros(2, 3).unwrap();
        assert!(matches!(
            complement(&rect).unwrap_err(),
            Error::NotProjector { .. }
        ));
    }

    #[test]
    fn oblique_projector_hand_case() {
        // Project onto span{(1, 1)} along span{(0, 1)}.
        let u = SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![1.0], vec![1.0]]).unwrap());
        let v = SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![0.0], vec![1.0]]).unwrap());
        let proj = oblique_projector(&u, &v).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(
            proj.matrix.distance(&expected) <= 1e-12,
            "distance {:.3e}",
            proj.matrix.distance(&expected)
        );
        assert!(proj.warnings.is_empty());
    }

    #[test]
    fn oblique_projector_orthogonal_case_reduces_to_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let gen = random_matrix(4, 2, &mut rng);
        let u = SubspaceBasis::new(gen.clone());
        // V = orthogonal complement of U.
        let p_u = u.projector().unwrap();
        let v = SubspaceBasis::new(complement(&p_u).unwrap());
        let proj = oblique_projector(&u, &v).unwrap();
        assert!(
            proj.matrix.distance(&p_u) <= 1e-10,
            "oblique along the orthogonal complement must be orthogonal"
        );
    }

    #[test]
    fn oblique_projector_matches_linear_solve_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let u_gen = random_matrix(4, 2, &mut rng);
        let v_gen = random_matrix(4, 2, &mut rng);
        let u = SubspaceBasis::new(u_gen.clone());
        let v = SubspaceBasis::new(v_gen.clone());
        let proj = oblique_projector(&u, &v).unwrap();
        let oracle = oblique_oracle(&u_gen, &v_gen);
        let gap = proj.matrix.distance(&oracle);
        assert!(
            gap <= 1e-8 * oracle.frobenius_norm().max(1.0),
            "gap {gap:.3e}"
        );

        // Projector properties and completeness with the swapped roles.
        let idem = (&(&proj.matrix * &proj.matrix) - &proj.matrix).frobenius_norm();
        assert!(idem <= 1e-9 * proj.matrix.frobenius_norm().powi(2).max(1.0));
        let fixes_u = (&(&proj.matrix * &u_gen) - &u_gen).frobenius_norm();
        assert!(fixes_u <= 1e-9 * u_gen.frobenius_norm());
        let kills_v = (&proj.matrix * &v_gen).frobenius_norm();
        assert!(kills_v <= 1e-9 * v_gen.frobenius_norm());

        let swapped = oblique_projector(&v, &u).unwrap();
        let id = ComplexMatrix::identity(4).unwrap();
        let completeness = (&(&proj.matrix + &swapped.matrix) - &id).frobenius_norm();
        assert!(
            completeness <= 1e-9,
            "completeness deviation {completeness:.3e}"
        );
    }

    #[test]
    fn oblique_projector_rejects_non_complementary_subspaces() {
        // Same 1-dimensional subspace twice: ranks sum to 2 = ambient,
        // but the union spans only one dimension.
        let e1 = ComplexMatrix::from_real_rows(&[vec![1.0], vec![0.0]]).unwrap();
        let u = SubspaceBasis::new(e1.clone());
        let v = SubspaceBasis::new(e1);
        assert!(matches!(
            oblique_projector(&u, &v).unwrap_err(),
            Error::NotComplementary { .. }
        ));

        // Dimensions that cannot add up.
        let full = SubspaceBasis::new(ComplexMatrix::identity(2).unwrap());
        let line =
            SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![0.0], vec![1.0]]).unwrap());
        assert!(matches!(
            oblique_projector(&full, &line).unwrap_err(),
            Error::NotComplementary { .. }
        ));

        // Mismatched ambient dimensions.
        let three = SubspaceBasis::new(ComplexMatrix::zeros(3, 1).unwrap());
        let two = SubspaceBasis::new(ComplexMatrix::zeros(2, 1).unwrap());
        assert!(matches!(
            oblique_projector(&three, &two).unwrap_err(),
            Error::ShapeMismatch { .. }
        ));
    }

    #[test]
    fn oblique_projector_flags_nearly_parallel_subspaces() {
        // An angle of ~1e-8 rad is below the warning threshold; entries of
        // the projector grow like 1/angle and its accuracy degrades like
        // eps/angle^2, which is exactly what the warning is for.
        let u = SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![1.0], vec![0.0]]).unwrap());
        let v =
            SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![1.0], vec![1e-8]]).unwrap());
        let proj = oblique_projector(&u, &v).unwrap();
        assert!(
            !proj.warnings.is_empty(),
            "tiny principal angle must raise a warning"
        );
        assert!(proj
            .matrix
            .entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite()));
        assert!(
            proj.matrix.frobenius_norm() >= 1e6,
            "nearly parallel subspaces force a large projector"
        );

        // At ~1e-5 rad the geometry is still harsh but resolvable: no
        // warning, and the closed form [[1, -1e5], [0, 0]] is reproduced.
        let mild =
            SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![1.0], vec![1e-5]]).unwrap());
        let proj = oblique_projector(&u, &mild).unwrap();
        assert!(proj.warnings.is_empty(), "1e-5 rad is above the threshold");
        let expected = ComplexMatrix::from_real_rows(&[vec![1.0, -1e5], vec![0.0, 0.0]]).unwrap();
        let gap = proj.matrix.distance(&expected);
        assert!(
            gap <= 1e-8 * expected.frobenius_norm(),
            "gap {gap:.3e} vs scale {:.3e}",
            expected.frobenius_norm()
        );
    }

    #[test]
    fn constrained_inverse_hand_case() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let v = SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![1.0], vec![1.0]]).unwrap());
        let u = SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![0.0], vec![1.0]]).unwrap());
        let result = constrained_inverse(&m, &v, &u, None).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(
            result.matrix.distance(&expected) <= 1e-12,
            "distance {:.3e}",
            result.matrix.distance(&expected)
        );

        // The defining properties: X is a {1,2}-inverse, its range is
        // ran(V), and it annihilates ran(U).
        let x = &result.matrix;
        let one_two = InverseClass::new(&[1, 2]).unwrap();
        assert!(is_member(&m, x, one_two, 1e-8).unwrap());
        let u_col = ComplexMatrix::from_real_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!((x * &u_col).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn constrained_inverse_is_choice_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        // Rank-2 map on C^3 so that both complements are non-trivial.
        let left = random_matrix(3, 2, &mut rng);
        let right = random_matrix(2, 3, &mut rng);
        let m = &left * &right;

        // V = ran(M*), U = ran(M)^perp: the constrained inverse with
        // these subspaces is exactly the Moore-Penrose inverse.
        let v = SubspaceBasis::new(m.conj_transpose());
        let pinv = svd::svd_pinv(&m).unwrap();
        let range_proj = &m * &pinv;
        let u = SubspaceBasis::new(complement(&range_proj).unwrap());

        let default_choice = constrained_inverse(&m, &v, &u, None).unwrap();
        assert!(
            default_choice.matrix.distance(&pinv) <= 1e-8 * pinv.frobenius_norm().max(1.0),
            "orthogonal constraints must reproduce the Moore-Penrose inverse"
        );

        for seed in [3_u64, 4] {
            let sampled = one_inverse_sample(&m, seed).unwrap();
            let result = constrained_inverse(&m, &v, &u, Some(&sampled)).unwrap();
            assert!(
                result.matrix.distance(&default_choice.matrix)
                    <= 1e-8 * default_choice.matrix.frobenius_norm().max(1.0),
                "constrained inverse must not depend on the {{1}}-inverse choice"
            );
        }
    }

    #[test]
    fn constrained_inverse_invertible_case() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        // Invertible M: the domain subspace is everything, the extra
        // null-space direction is trivial.
        let v = SubspaceBasis::new(ComplexMatrix::identity(2).unwrap());
        let u = SubspaceBasis::new(ComplexMatrix::zeros(2, 1).unwrap());
        let result = constrained_inverse(&m, &v, &u, None).unwrap();
        let id = ComplexMatrix::identity(2).unwrap();
        let recon = (&(&m * &result.matrix) - &id).frobenius_norm();
        assert!(
            recon <= 1e-12,
            "M X = I must hold for invertible M, got {recon:.3e}"
        );
    }

    #[test]
    fn constrained_inverse_rejects_bad_inputs() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let good_v =
            SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![1.0], vec![1.0]]).unwrap());
        let good_u =
            SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![0.0], vec![1.0]]).unwrap());

        // V inside nul(M): the domain decomposition fails.
        let bad_v =
            SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![0.0], vec![1.0]]).unwrap());
        assert!(matches!(
            constrained_inverse(&m, &bad_v, &good_u, None).unwrap_err(),
            Error::NotComplementary { .. }
        ));

        // U inside ran(M): the codomain decomposition fails.
        let bad_u =
            SubspaceBasis::new(ComplexMatrix::from_real_rows(&[vec![1.0], vec![0.0]]).unwrap());
        assert!(matches!(
            constrained_inverse(&m, &good_v, &bad_u, None).unwrap_err(),
            Error::NotComplementary { .. }
        ));

        // Ambient dimension mismatches.
        let wrong_dim = SubspaceBasis::new(ComplexMatrix::zeros(3, 1).unwrap());
        assert!(matches!(
            constrained_inverse(&m, &wrong_dim, &good_u, None).unwrap_err(),
            Error::ShapeMismatch { .. }
        ));
        assert!(matches!(
            constrained_inverse(&m, &good_v, &wrong_dim, None).unwrap_err(),
            Error::ShapeMismatch { .. }
        ));

        // A candidate {1}-inverse that is not one.
        let not_inverse = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(matches!(
            constrained_inverse(&m, &good_v, &good_u, Some(&not_inverse)).unwrap_err(),
            Error::NotMember { .. }
        ));
    }
}
