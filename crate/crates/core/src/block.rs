//! The 2x2-block pipeline: from a partitioned matrix `E = [a b; c d]`,
//! build the Gram-type auxiliary matrices, a left factor `L` and a right
//! factor `R` with `L * E * R` equal to the Moore-Penrose inverse, the
//! orthogonal projectors onto the range and corange of `E`, and the
//! Schur-complement route to blockwise {1}-inverses of `E E*` and `E* E`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geninv::{self, InverseClass};
use crate::matrix::{compose, split, Block2x2, BlockPartition, ComplexMatrix};
use crate::svd;

/// Relative bound on the Hermitian deviation of the Gram-type auxiliaries.
const HERMITIAN_DEV_TOL: f64 = 1e-12;

/// Relative lower bound for eigenvalues of the nonnegative auxiliaries.
const NONNEG_EIG_TOL: f64 = 1e-10;

/// Nonzero-part condition number beyond which a warning is recorded.
const CONDITION_WARN_THRESHOLD: f64 = 1e8;

/// Safety factor on top of the dimensional epsilon scaling when deciding
/// which singular values of a Gram-type auxiliary are cancellation noise.
/// Gram formation and the residual subtractions leave noise at a small
/// multiple of dim * eps * scale; the factor gives two orders of headroom
/// while staying far below anything the pipeline can meaningfully resolve.
const GRAM_NOISE_FACTOR: f64 = 64.0;

/// Rank cutoff used when inverting a Gram-type auxiliary: singular values
/// below this are treated as exact zeros. `scale` is the magnitude of the
/// computation that produced the matrix, not necessarily its own norm.
fn gram_rank_tol(total_dim: usize, scale: f64) -> f64 {
    GRAM_NOISE_FACTOR * total_dim as f64 * f64::EPSILON * scale
}

/// How to obtain the {1}-inverse of one Hermitian nonnegative auxiliary
/// matrix in the pipeline.
#[derive(Clone, Debug, Default)]
pub enum OneInverseChoice {
    /// Pseudoinverse of the target, with the pipeline's noise-floor rank
    /// cutoff: the best-conditioned default.
    #[default]
    Pinv,
    /// Seeded random draw from the affine family of {1}-inverses, anchored
    /// at the same noise-aware pseudoinverse.
    Sampled {
        /// Seed for the draw.
        seed: u64,
    },
    /// Caller-supplied matrix, membership-checked against its target.
    Explicit(ComplexMatrix),
}

impl OneInverseChoice {
    fn realize(
        &self,
        target: &ComplexMatrix,
        rank_tol: f64,
        role: &'static str,
    ) -> Result<ComplexMatrix> {
        match self {
            OneInverseChoice::Pinv => svd::svd_pinv_with_tol(target, rank_tol),
            OneInverseChoice::Sampled { seed } => {
                geninv::one_inverse_sample_with_tol(target, *seed, rank_tol)
            }
            OneInverseChoice::Explicit(candidate) => {
                geninv::require_member(target, candidate, InverseClass::ONE, role)?;
                Ok(candidate.clone())
            }
        }
    }
}

/// The {1}-inverse choices for the four auxiliary matrices that the pipeline
/// inverts. Any mix of choices yields the same Moore-Penrose inverse in exact
/// arithmetic; the default uses the pseudoinverse for all four.
#[derive(Clone, Debug, Default)]
pub struct AuxChoices {
    /// Choice for `mu`, the Gram matrix of the top row slab.
    pub mu: OneInverseChoice,
    /// Choice for `sigma`, the Gram matrix of the left column slab.
    pub sigma: OneInverseChoice,
    /// Choice for `nu`, the Gram matrix of the bottom-row residual.
    pub nu: OneInverseChoice,
    /// Choice for `omega`, the Gram matrix of the right-column residual.
    pub omega: OneInverseChoice,
}

impl AuxChoices {
    /// Four independently seeded sampler choices derived from one master seed.
    pub fn sampled(master_seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        let mut next = || OneInverseChoice::Sampled { seed: rng.gen() };
        Self {
            mu: next(),
            sigma: next(),
            nu: next(),
            omega: next(),
        }
    }
}

/// Every auxiliary quantity derived from one 2x2 partition of a matrix.
///
/// Built by [`build_aux`] and treated as read-only afterwards; all fields are
/// finished values of the pipeline. Dimension conventions: the partition has
/// row sizes `p`, `q` and column sizes `s`, `t`.
#[derive(Clone, Debug)]
pub struct BlockAux {
    /// The original sub-blocks `a`, `b`, `c`, `d`.
    pub blocks: Block2x2,
    /// Top row slab `[a b]`, p x (s+t).
    pub row_top: ComplexMatrix,
    /// Bottom row slab `[c d]`, q x (s+t).
    pub row_bottom: ComplexMatrix,
    /// Left column slab `[a; c]`, (p+q) x s.
    pub col_left: ComplexMatrix,
    /// Right column slab `[b; d]`, (p+q) x t.
    pub col_right: ComplexMatrix,
    /// Gram matrix of the top row slab: `mu = a a* + b b*`, p x p.
    pub mu: ComplexMatrix,
    /// Gram matrix of the left column slab: `sigma = a* a + c* c`, s x s.
    pub sigma: ComplexMatrix,
    /// Gram matrix of the bottom row slab: `zeta = c c* + d d*`, q x q.
    pub zeta: ComplexMatrix,
    /// Gram matrix of the right column slab: `tau = b* b + d* d`, t x t.
    pub tau: ComplexMatrix,
    /// Cross-Gram of the bottom rows against the top rows:
    /// `rho = c a* + d b*`, q x p.
    pub rho: ComplexMatrix,
    /// Cross-Gram of the left columns against the right columns:
    /// `lambda = a* b + c* d`, s x t.
    pub lambda: ComplexMatrix,
    /// Chosen {1}-inverse of `mu`.
    pub mu_ginv: ComplexMatrix,
    /// Chosen {1}-inverse of `sigma`.
    pub sigma_ginv: ComplexMatrix,
    /// Left block of the bottom-row residual: `phi = c - rho mu_ginv a`, q x s.
    pub phi: ComplexMatrix,
    /// Right block of the bottom-row residual: `psi = d - rho mu_ginv b`, q x t.
    pub psi: ComplexMatrix,
    /// Top block of the right-column residual: `eta = b - a sigma_ginv lambda`, p x t.
    pub eta: ComplexMatrix,
    /// Bottom block of the right-column residual: `theta = d - c sigma_ginv lambda`, q x t.
    pub theta: ComplexMatrix,
    /// `[phi psi]`, q x (s+t): the part of the bottom row slab outside the
    /// row space of the top slab; annihilates `row_top*`.
    pub row_residual: ComplexMatrix,
    /// `[eta; theta]`, (p+q) x t: the part of the right column slab
    /// orthogonal to the range of the left slab; `col_residual*` annihilates
    /// `col_left`.
    pub col_residual: ComplexMatrix,
    /// Gram matrix of the row residual, `nu = phi phi* + psi psi*`, computed
    /// through the cheaper equivalent `zeta - rho mu_ginv rho*`, q x q.
    pub nu: ComplexMatrix,
    /// Gram matrix of the column residual, `omega = eta* eta + theta* theta`,
    /// computed through `tau - lambda* sigma_ginv lambda`, t x t.
    pub omega: ComplexMatrix,
    /// Chosen {1}-inverse of `nu`.
    pub nu_ginv: ComplexMatrix,
    /// Chosen {1}-inverse of `omega`.
    pub omega_ginv: ComplexMatrix,
    /// Ill-conditioning flags collected while building (never fatal).
    pub warnings: Vec<String>,
}

impl BlockAux {
    /// The partition the auxiliaries were built for.
    pub fn partition(&self) -> BlockPartition {
        self.blocks.partition()
    }
}

/// Left factor of the Moore-Penrose factorization, stored blockwise:
/// `L = [l11 l12; l21 l22]` is (s+t) x (p+q) and is a {1,2,4}-inverse of the
/// partitioned matrix.
#[derive(Clone, Debug)]
pub struct LeftFactor {
    /// s x p block: `(a* - l12 rho) mu_ginv`.
    pub l11: ComplexMatrix,
    /// s x q block: `phi* nu_ginv`.
    pub l12: ComplexMatrix,
    /// t x p block: `(b* - l22 rho) mu_ginv`.
    pub l21: ComplexMatrix,
    /// t x q block: `psi* nu_ginv`.
    pub l22: ComplexMatrix,
}

impl LeftFactor {
    /// Assembles the four blocks into the full factor.
    pub fn to_matrix(&self) -> ComplexMatrix {
        assemble2x2(&self.l11, &self.l12, &self.l21, &self.l22)
    }
}

/// Right factor of the Moore-Penrose factorization, stored blockwise:
/// `R = [r11 r12; r21 r22]` is (s+t) x (p+q) and is a {1,2,3}-inverse of the
/// partitioned matrix.
#[derive(Clone, Debug)]
pub struct RightFactor {
    /// s x p block: `sigma_ginv (a* - lambda r21)`.
    pub r11: ComplexMatrix,
    /// s x q block: `sigma_ginv (c* - lambda r22)`.
    pub r12: ComplexMatrix,
    /// t x p block: `omega_ginv eta*`.
    pub r21: ComplexMatrix,
    /// t x q block: `omega_ginv theta*`.
    pub r22: ComplexMatrix,
}

impl RightFactor {
    /// Assembles the four blocks into the full factor.
    pub fn to_matrix(&self) -> ComplexMatrix {
        assemble2x2(&self.r11, &self.r12, &self.r21, &self.r22)
    }
}

/// Both factors of the factorization `pinv(E) = L * E * R`.
#[derive(Clone, Debug)]
pub struct LrFactors {
    /// The left factor.
    pub left: LeftFactor,
    /// The right factor.
    pub right: RightFactor,
}

/// The Moore-Penrose inverse assembled by the block pipeline.
#[derive(Clone, Debug)]
pub struct BlockPinv {
    /// The full inverse, computed as `L * E * R`.
    pub pinv: ComplexMatrix,
    /// Top-left block (s x p) of the explicit bilinear expansion.
    pub alpha: ComplexMatrix,
    /// Top-right block (s x q) of the explicit bilinear expansion.
    pub beta: ComplexMatrix,
    /// Bottom-left block (t x p) of the explicit bilinear expansion.
    pub gamma: ComplexMatrix,
    /// Bottom-right block (t x q) of the explicit bilinear expansion.
    pub delta: ComplexMatrix,
    /// Ill-conditioning flags inherited from the auxiliary pipeline.
    pub warnings: Vec<String>,
}

impl BlockPinv {
    /// Reassembles the four expansion blocks into one matrix; agrees with
    /// [`BlockPinv::pinv`] up to rounding.
    pub fn assembled(&self) -> ComplexMatrix {
        assemble2x2(&self.alpha, &self.beta, &self.gamma, &self.delta)
    }
}

/// Stacks four blocks `[m11 m12; m21 m22]` whose shapes are consistent by
/// construction.
fn assemble2x2(
    m11: &ComplexMatrix,
    m12: &ComplexMatrix,
    m21: &ComplexMatrix,
    m22: &ComplexMatrix,
) -> ComplexMatrix {
    let top = m11.hstack(m12).expect("top blocks share a row count");
    let bottom = m21.hstack(m22).expect("bottom blocks share a row count");
    top.vstack(&bottom).expect("block columns line up")
}

/// Validates that `m` is Hermitian positive semidefinite within scaled
/// tolerances and returns its eigenvalues in descending order.
///
/// `scale_hint` lets callers pass the magnitude of the computation that
/// produced `m`, so that a residual formed by near-total cancellation (whose
/// own norm is rounding noise) is not rejected spuriously.
fn validate_hermitian_nonneg(m: &ComplexMatrix, role: &str, scale_hint: f64) -> Result<Vec<f64>> {
    let scale = m.frobenius_norm().max(scale_hint);
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_DEV_TOL * scale {
        return Err(Error::NotHermitianNonneg {
            reason: format!(
                "{role} deviates from Hermitian by {deviation:.3e} at scale {scale:.3e}"
            ),
        });
    }
    let eigenvalues = svd::hermitian_eigenvalues(m)?;
    let min = eigenvalues.last().copied().unwrap_or(0.0);
    if min < -NONNEG_EIG_TOL * scale {
        return Err(Error::NotHermitianNonneg {
            reason: format!(
                "{role} has eigenvalue {min:.3e}, below tolerance at scale {scale:.3e}"
            ),
        });
    }
    Ok(eigenvalues)
}

/// Records a warning when the part of a Hermitian nonnegative matrix kept by
/// the rank cutoff has condition number above [`CONDITION_WARN_THRESHOLD`].
fn push_condition_warning(
    role: &str,
    eigenvalues: &[f64],
    cutoff: f64,
    warnings: &mut Vec<String>,
) {
    let max = eigenvalues.first().copied().unwrap_or(0.0);
    if max <= cutoff {
        return;
    }
    let min_nonzero = eigenvalues
        .iter()
        .copied()
        .filter(|&value| value > cutoff)
        .fold(max, f64::min);
    let condition = max / min_nonzero;
    if condition > CONDITION_WARN_THRESHOLD {
        warnings.push(format!(
            "{role} is ill-conditioned: nonzero-part condition {condition:.3e} exceeds {CONDITION_WARN_THRESHOLD:.0e}"
        ));
    }
}

/// Computes every auxiliary quantity of the block pipeline.
///
/// The four Gram-type matrices that get inverted (`mu`, `sigma`, `nu`,
/// `omega`) and the two that do not (`zeta`, `tau`) are validated as
/// Hermitian nonnegative; ill-conditioning of the inverted ones is recorded
/// in [`BlockAux::warnings`] rather than treated as an error. Supplied
/// explicit {1}-inverses are membership-checked against their targets.
pub fn build_aux(blocks: Block2x2, choices: &AuxChoices) -> Result<BlockAux> {
    let (a, b, c, d) = (blocks.a(), blocks.b(), blocks.c(), blocks.d());
    let a_adj = a.conj_transpose();
    let b_adj = b.conj_transpose();
    let c_adj = c.conj_transpose();
    let d_adj = d.conj_transpose();

    let row_top = a.hstack(b).expect("a and b share a row count");
    let row_bottom = c.hstack(d).expect("c and d share a row count");
    let col_left = a.vstack(c).expect("a and c share a column count");
    let col_right = b.vstack(d).expect("b and d share a column count");

    let mu = &(a * &a_adj) + &(b * &b_adj);
    let sigma = &(&a_adj * a) + &(&c_adj * c);
    let zeta = &(c * &c_adj) + &(d * &d_adj);
    let tau = &(&b_adj * b) + &(&d_adj * d);
    let rho = &(c * &a_adj) + &(d * &b_adj);
    let lambda = &(&a_adj * b) + &(&c_adj * d);

    let part = blocks.partition();
    let total_dim = part.rows() + part.cols();

    let mut warnings = Vec::new();
    let mu_eigs = validate_hermitian_nonneg(&mu, "mu", 0.0)?;
    let mu_cut = gram_rank_tol(total_dim, mu_eigs.first().copied().unwrap_or(0.0));
    push_condition_warning("mu", &mu_eigs, mu_cut, &mut warnings);
    let sigma_eigs = validate_hermitian_nonneg(&sigma, "sigma", 0.0)?;
    let sigma_cut = gram_rank_tol(total_dim, sigma_eigs.first().copied().unwrap_or(0.0));
    push_condition_warning("sigma", &sigma_eigs, sigma_cut, &mut warnings);
    validate_hermitian_nonneg(&zeta, "zeta", 0.0)?;
    validate_hermitian_nonneg(&tau, "tau", 0.0)?;

    let mu_ginv = choices.mu.realize(&mu, mu_cut, "mu_ginv")?;
    let sigma_ginv = choices.sigma.realize(&sigma, sigma_cut, "sigma_ginv")?;

    let rho_mu = &rho * &mu_ginv;
    let phi = c - &(&rho_mu * a);
    let psi = d - &(&rho_mu * b);
    let sigma_lambda = &sigma_ginv * &lambda;
    let eta = b - &(a * &sigma_lambda);
    let theta = d - &(c * &sigma_lambda);

    let row_residual = phi.hstack(&psi).expect("phi and psi share a row count");
    let col_residual = eta
        .vstack(&theta)
        .expect("eta and theta share a column count");

    let nu = &zeta - &(&rho_mu * &rho.conj_transpose());
    let omega = &tau - &(&lambda.conj_transpose() * &sigma_lambda);

    // The residual Gram matrices arise by subtraction and can cancel to
    // rounding noise, so they are judged at the scale of the computation
    // that produced them, not just their own (possibly tiny) norm.
    let nu_hint = zeta
        .frobenius_norm()
        .max(rho_mu.frobenius_norm() * rho.frobenius_norm());
    let nu_eigs = validate_hermitian_nonneg(&nu, "nu", nu_hint)?;
    let nu_cut = gram_rank_tol(
        total_dim,
        nu_eigs.first().copied().unwrap_or(0.0).max(nu_hint),
    );
    push_condition_warning("nu", &nu_eigs, nu_cut, &mut warnings);
    let omega_hint = tau
        .frobenius_norm()
        .max(sigma_lambda.frobenius_norm() * lambda.frobenius_norm());
    let omega_eigs = validate_hermitian_nonneg(&omega, "omega", omega_hint)?;
    let omega_cut = gram_rank_tol(
        total_dim,
        omega_eigs.first().copied().unwrap_or(0.0).max(omega_hint),
    );
    push_condition_warning("omega", &omega_eigs, omega_cut, &mut warnings);

    let nu_ginv = choices.nu.realize(&nu, nu_cut, "nu_ginv")?;
    let omega_ginv = choices.omega.realize(&omega, omega_cut, "omega_ginv")?;

    Ok(BlockAux {
        blocks,
        row_top,
        row_bottom,
        col_left,
        col_right,
        mu,
        sigma,
        zeta,
        tau,
        rho,
        lambda,
        mu_ginv,
        sigma_ginv,
        phi,
        psi,
        eta,
        theta,
        row_residual,
        col_residual,
        nu,
        omega,
        nu_ginv,
        omega_ginv,
        warnings,
    })
}

/// Builds the left factor `L` from finished auxiliaries:
/// `l12 = phi* nu_ginv`, `l11 = (a* - l12 rho) mu_ginv`,
/// `l22 = psi* nu_ginv`, `l21 = (b* - l22 rho) mu_ginv`.
pub fn left_factor(aux: &BlockAux) -> LeftFactor {
    let a_adj = aux.blocks.a().conj_transpose();
    let b_adj = aux.blocks.b().conj_transpose();
    let l12 = &aux.phi.conj_transpose() * &aux.nu_ginv;
    let l11 = &(&a_adj - &(&l12 * &aux.rho)) * &aux.mu_ginv;
    let l22 = &aux.psi.conj_transpose() * &aux.nu_ginv;
    let l21 = &(&b_adj - &(&l22 * &aux.rho)) * &aux.mu_ginv;
    LeftFactor { l11, l12, l21, l22 }
}

/// Builds the right factor `R` from finished auxiliaries:
/// `r21 = omega_ginv eta*`, `r11 = sigma_ginv (a* - lambda r21)`,
/// `r22 = omega_ginv theta*`, `r12 = sigma_ginv (c* - lambda r22)`.
pub fn right_factor(aux: &BlockAux) -> RightFactor {
    let a_adj = aux.blocks.a().conj_transpose();
    let c_adj = aux.blocks.c().conj_transpose();
    let r21 = &aux.omega_ginv * &aux.eta.conj_transpose();
    let r11 = &aux.sigma_ginv * &(&a_adj - &(&aux.lambda * &r21));
    let r22 = &aux.omega_ginv * &aux.theta.conj_transpose();
    let r12 = &aux.sigma_ginv * &(&c_adj - &(&aux.lambda * &r22));
    RightFactor { r11, r12, r21, r22 }
}

/// Both factors via the direct blockwise formulas.
pub fn lr_factors(aux: &BlockAux) -> LrFactors {
    LrFactors {
        left: left_factor(aux),
        right: right_factor(aux),
    }
}

/// Orthogonal projector onto the range (column space) of the partitioned
/// matrix, assembled blockwise:
///
/// ```text
/// [ a sigma_ginv a* + eta omega_ginv eta*      a sigma_ginv c* + eta omega_ginv theta*  ]
/// [ c sigma_ginv a* + theta omega_ginv eta*    c sigma_ginv c* + theta omega_ginv theta*]
/// ```
///
/// Equals `E * R` (and `col_left sigma_ginv col_left* + col_residual
/// omega_ginv col_residual*`) up to rounding.
pub fn range_projector(aux: &BlockAux) -> ComplexMatrix {
    let a = aux.blocks.a();
    let c = aux.blocks.c();
    let a_adj = a.conj_transpose();
    let c_adj = c.conj_transpose();
    let eta_adj = aux.eta.conj_transpose();
    let theta_adj = aux.theta.conj_transpose();
    let a_sigma = a * &aux.sigma_ginv;
    let c_sigma = c * &aux.sigma_ginv;
    let eta_omega = &aux.eta * &aux.omega_ginv;
    let theta_omega = &aux.theta * &aux.omega_ginv;
    let p11 = &(&a_sigma * &a_adj) + &(&eta_omega * &eta_adj);
    let p12 = &(&a_sigma * &c_adj) + &(&eta_omega * &theta_adj);
    let p21 = &(&c_sigma * &a_adj) + &(&theta_omega * &eta_adj);
    let p22 = &(&c_sigma * &c_adj) + &(&theta_omega * &theta_adj);
    assemble2x2(&p11, &p12, &p21, &p22)
}

/// Orthogonal projector onto the corange (row space) of the partitioned
/// matrix: `row_top* mu_ginv row_top + row_residual* nu_ginv row_residual`.
/// Equals `L * E` up to rounding.
pub fn corange_projector(aux: &BlockAux) -> ComplexMatrix {
    let top_adj = aux.row_top.conj_transpose();
    let residual_adj = aux.row_residual.conj_transpose();
    let top_part = &(&top_adj * &aux.mu_ginv) * &aux.row_top;
    let residual_part = &(&residual_adj * &aux.nu_ginv) * &aux.row_residual;
    &top_part + &residual_part
}

/// One triple product of the bilinear expansion.
fn expansion_term(
    left: &ComplexMatrix,
    mid: &ComplexMatrix,
    right: &ComplexMatrix,
) -> ComplexMatrix {
    &(left * mid) * right
}

/// Sums the four triple products making up one block of the expansion.
fn expansion_block(
    t1: ComplexMatrix,
    t2: ComplexMatrix,
    t3: ComplexMatrix,
    t4: ComplexMatrix,
) -> ComplexMatrix {
    &(&(&t1 + &t2) + &t3) + &t4
}

/// Assembles the Moore-Penrose inverse from finished auxiliaries and
/// factors: the full product `L * E * R` plus the four blocks of the
/// explicit sixteen-term bilinear expansion, each term computed as written.
pub fn pinv_from_factors(aux: &BlockAux, left: &LeftFactor, right: &RightFactor) -> BlockPinv {
    let e = compose(&aux.blocks);
    let pinv = &(&left.to_matrix() * &e) * &right.to_matrix();

    let (a, b, c, d) = (
        aux.blocks.a(),
        aux.blocks.b(),
        aux.blocks.c(),
        aux.blocks.d(),
    );
    let LeftFactor { l11, l12, l21, l22 } = left;
    let RightFactor { r11, r12, r21, r22 } = right;

    let alpha = expansion_block(
        expansion_term(l11, a, r11),
        expansion_term(l11, b, r21),
        expansion_term(l12, c, r11),
        expansion_term(l12, d, r21),
    );
    let beta = expansion_block(
        expansion_term(l11, a, r12),
        expansion_term(l11, b, r22),
        expansion_term(l12, c, r12),
        expansion_term(l12, d, r22),
    );
    let gamma = expansion_block(
        expansion_term(l21, a, r11),
        expansion_term(l21, b, r21),
        expansion_term(l22, c, r11),
        expansion_term(l22, d, r21),
    );
    let delta = expansion_block(
        expansion_term(l21, a, r12),
        expansion_term(l21, b, r22),
        expansion_term(l22, c, r12),
        expansion_term(l22, d, r22),
    );

    BlockPinv {
        pinv,
        alpha,
        beta,
        gamma,
        delta,
        warnings: aux.warnings.clone(),
    }
}

/// Moore-Penrose inverse of `e` through the block pipeline: splits `e` by
/// `part`, builds the auxiliaries with the given {1}-inverse choices, and
/// assembles `L * E * R` together with the expansion blocks.
pub fn block_pinv(
    e: &ComplexMatrix,
    part: &BlockPartition,
    choices: &AuxChoices,
) -> Result<BlockPinv> {
    let aux = build_aux(split(e, part)?, choices)?;
    let factors = lr_factors(&aux);
    Ok(pinv_from_factors(&aux, &factors.left, &factors.right))
}

/// Blockwise {1}-inverse of a Hermitian nonnegative matrix `m` split after
/// row/column `p`, via the generalized Schur complement:
///
/// ```text
/// X = [ m11_inv + m11_inv m12 schur_ginv m21 m11_inv    -m11_inv m12 schur_ginv ]
///     [ -schur_ginv m21 m11_inv                          schur_ginv             ]
/// ```
///
/// where `schur = m22 - m21 m11_inv m12` and `schur_ginv` is its
/// pseudoinverse. `m11_inv` may be any {1}-inverse of the leading block and
/// is membership-checked.
pub fn schur_one_inverse(
    m: &ComplexMatrix,
    p: usize,
    m11_inv: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "schur_one_inverse",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if p == 0 || p >= n {
        return Err(Error::BadSplitIndex { p, dim: n });
    }
    validate_hermitian_nonneg(m, "matrix", 0.0)?;
    let part = BlockPartition::new(p, n - p, p, n - p).expect("split sizes are positive");
    let blocks = split(m, &part)?;
    geninv::require_member(blocks.a(), m11_inv, InverseClass::ONE, "m11_inv")?;

    let upper = m11_inv * blocks.b();
    let lower = blocks.c() * m11_inv;
    let schur = blocks.d() - &(blocks.c() * &upper);
    // The complement is a difference that can cancel to rounding noise when
    // the trailing block adds no rank, so its pseudoinverse is cut off at
    // the scale of the computation that produced it.
    let schur_scale = schur
        .frobenius_norm()
        .max(blocks.d().frobenius_norm())
        .max(blocks.c().frobenius_norm() * upper.frobenius_norm());
    let schur_ginv = svd::svd_pinv_with_tol(&schur, gram_rank_tol(n, schur_scale))?;

    let x11 = m11_inv + &(&(&upper * &schur_ginv) * &lower);
    let x12 = -&(&upper * &schur_ginv);
    let x21 = -&(&schur_ginv * &lower);
    Ok(assemble2x2(&x11, &x12, &x21, &schur_ginv))
}

/// Blockwise {1}-inverses of the two Gram matrices `G = E E*` and
/// `H = E* E`, assembled from the auxiliaries by the Schur-complement
/// construction applied to `G = [mu rho*; rho zeta]` and
/// `H = [sigma lambda; lambda* tau]` (whose Schur complements are exactly
/// `nu` and `omega`).
pub fn gram_one_inverses(aux: &BlockAux) -> (ComplexMatrix, ComplexMatrix) {
    let rho_adj = aux.rho.conj_transpose();
    let upper = &aux.mu_ginv * &rho_adj;
    let lower = &aux.rho * &aux.mu_ginv;
    let g11 = &aux.mu_ginv + &(&(&upper * &aux.nu_ginv) * &lower);
    let g12 = -&(&upper * &aux.nu_ginv);
    let g21 = -&(&aux.nu_ginv * &lower);
    let g_inv = assemble2x2(&g11, &g12, &g21, &aux.nu_ginv);

    let lambda_adj = aux.lambda.conj_transpose();
    let upper = &aux.sigma_ginv * &aux.lambda;
    let lower = &lambda_adj * &aux.sigma_ginv;
    let h11 = &aux.sigma_ginv + &(&(&upper * &aux.omega_ginv) * &lower);
    let h12 = -&(&upper * &aux.omega_ginv);
    let h21 = -&(&aux.omega_ginv * &lower);
    let h_inv = assemble2x2(&h11, &h12, &h21, &aux.omega_ginv);

    (g_inv, h_inv)
}

/// Alternative route to the factors: `L = E* G_inv` and `R = H_inv E*` with
/// the Gram {1}-inverses from [`gram_one_inverses`]. Agrees with
/// [`left_factor`] / [`right_factor`] (exactly, in exact arithmetic) when the
/// same auxiliary {1}-inverse choices are used.
pub fn factors_via_gram(aux: &BlockAux) -> LrFactors {
    let part = aux.partition();
    let e_adj = compose(&aux.blocks).conj_transpose();
    let (g_inv, h_inv) = gram_one_inverses(aux);
    let left_mat = &e_adj * &g_inv;
    let right_mat = &h_inv * &e_adj;

    let factor_part = BlockPartition::new(part.s(), part.t(), part.p(), part.q())
        .expect("partition sizes are positive");
    let left_blocks = split(&left_mat, &factor_part).expect("factor shape matches partition");
    let right_blocks = split(&right_mat, &factor_part).expect("factor shape matches partition");
    LrFactors {
        left: LeftFactor {
            l11: left_blocks.a().clone(),
            l12: left_blocks.b().clone(),
            l21: left_blocks.c().clone(),
            l22: left_blocks.d().clone(),
        },
        right: RightFactor {
            r11: right_blocks.a().clone(),
            r12: right_blocks.b().clone(),
            r21: right_blocks.c().clone(),
            r22: right_blocks.d().clone(),
        },
    }
}
