//! Generalized inverses of dense complex matrices.
//!
//! The crate centers on a block pipeline that assembles the Moore-Penrose
//! inverse of a 2x2-partitioned matrix from {1}-inverses of four small
//! Hermitian auxiliaries, without ever factorizing the full matrix. The
//! same intermediates yield the orthogonal projectors onto the range and
//! corange. An independent SVD path ([`svd_pinv`]) serves as the oracle
//! the block route is verified against, and [`penrose_check`] scores any
//! candidate inverse against the four Penrose equations.
//!
//! Modules:
//!
//! - [`matrix`]: dense column-indexed complex matrices, 2x2 block
//!   partitions, splitting and reassembly.
//! - [`svd`]: one-sided Jacobi SVD, pseudoinverse, rank and condition
//!   estimates.
//! - [`geninv`]: Penrose-equation diagnostics, inverse-class membership,
//!   {1}-inverse sampling, and one-sided inverses through Gram matrices.
//! - [`block`]: the block pipeline proper — auxiliaries, left/right
//!   factors, the assembled pseudoinverse, and block projectors.
//! - [`projectors`]: orthogonal and oblique projectors, complements, and
//!   inverses with prescribed range and null space.
//! - [`io`]: a line-oriented text format for complex matrices with
//!   exact-round-trip formatting.
//!
//! All fallible operations return [`Result`] with a structured [`Error`];
//! shape checks happen on entry, and candidate inverses supplied by
//! callers are membership-checked before they are used.

pub mod block;
pub mod error;
pub mod geninv;
pub mod io;
pub mod matrix;
pub mod projectors;
pub mod svd;

pub use block::{
    block_pinv, build_aux, corange_projector, factors_via_gram, gram_one_inverses, left_factor,
    lr_factors, pinv_from_factors, range_projector, right_factor, schur_one_inverse, AuxChoices,
    BlockAux, BlockPinv, LeftFactor, LrFactors, OneInverseChoice, RightFactor,
};
pub use error::{Error, Result};
pub use geninv::{
    gram_inverse_123, gram_inverse_124, is_member, mpi_from_one_sided, one_inverse,
    one_inverse_sample, one_inverse_sample_with_tol, penrose_check, InverseClass, PenroseReport,
    DEFAULT_MEMBERSHIP_TOL,
};
pub use io::{read_matrix, read_matrix_from, write_matrix, write_matrix_to};
pub use matrix::{compose, split, Block2x2, BlockPartition, ComplexMatrix};
pub use projectors::{
    complement, constrained_inverse, oblique_projector, projector_from_13, projector_from_14,
    ConstrainedInverse, ObliqueProjection, SubspaceBasis, MIN_PRINCIPAL_ANGLE, PROJECTOR_TOL,
};
pub use svd::{
    default_rank_tol, effective_condition, hermitian_eigenvalues, rank, rank_default,
    singular_values, svd, svd_pinv, svd_pinv_with_tol, Svd,
};
