//! Structured solvers, singular value bounds and numerical proof checks for
//! lower-triangular Toeplitz matrices whose subdiagonals repeat with period
//! `i` and whose diagonal grows linearly (`mu+1, mu+2, ...`).

pub mod bounds;
pub mod error;
pub mod matrix;
pub mod presets;
pub mod proof;
pub mod rational;
pub mod special;
pub mod spectral;

pub use bounds::{
    check_hypotheses, inverse_first_column, omega, psi_phi, theorem_bound, theta, BoundSequence,
    HypothesisVerdict, InverseColumn, TheoremBound,
};
pub use error::{Error, Result};
pub use matrix::{
    forward_solve, materialize_dense, matvec, transpose_matvec, transpose_solve, DenseMatrix,
    Limits, MatrixSpec, OpCounter,
};
pub use proof::{build_proof_trace, Check, CheckRecord, ProofTrace};
pub use rational::Rational;
pub use spectral::{
    dense_gram_eigen_oracle, frobenius_inverse_norm, smallest_singular_value, spectral_report,
    PowerOptions, SingularValueEstimate, SpectralReport,
};
