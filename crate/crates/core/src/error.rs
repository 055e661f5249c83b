use thiserror::Error;

/// Errors reported by every fallible operation in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },

    #[error("entry buffer holds {got} values, expected {expected} for a {rows}x{cols} matrix")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error(
        "dimension mismatch in {op}: left is {lhs_rows}x{lhs_cols}, right is {rhs_rows}x{rhs_cols}"
    )]
    ShapeMismatch {
        op: &'static str,
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },

    #[error("block partition sides must be positive, got p={p}, q={q}, s={s}, t={t}")]
    ZeroPartition {
        p: usize,
        q: usize,
        s: usize,
        t: usize,
    },

    #[error("partition ({p}+{q})x({s}+{t}) does not cover a {rows}x{cols} matrix")]
    PartitionMismatch {
        p: usize,
        q: usize,
        s: usize,
        t: usize,
        rows: usize,
        cols: usize,
    },

    #[error("inconsistent block dimensions: a is {a_rows}x{a_cols}, b is {b_rows}x{b_cols}, c is {c_rows}x{c_cols}, d is {d_rows}x{d_cols}")]
    BlockMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
        c_rows: usize,
        c_cols: usize,
        d_rows: usize,
        d_cols: usize,
    },

    #[error("operation '{op}' requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("SVD did not converge within {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error("tolerance must be nonnegative, got {tol}")]
    NegativeTolerance { tol: f64 },

    #[error("inverse class must name at least one Penrose equation")]
    EmptyClass,

    #[error("unknown Penrose equation '{token}' in inverse class (expected 1, 2, 3 or 4)")]
    BadClassToken { token: String },

    #[error("{role} is not a {{{class}}}-inverse of its target: relative residual {residual:.3e} exceeds {tol:.3e}")]
    NotMember {
        role: &'static str,
        class: String,
        residual: f64,
        tol: f64,
    },

    #[error("matrix is not Hermitian nonnegative: {reason}")]
    NotHermitianNonneg { reason: String },

    #[error("matrix is not an orthogonal projector: {reason}")]
    NotProjector { reason: String },

    #[error("subspaces are not complementary: {reason}")]
    NotComplementary { reason: String },

    #[error("split index {p} must leave both sides nonempty in a dimension of {dim}")]
    BadSplitIndex { p: usize, dim: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
