//! Dense complex matrices and the matrix-function machinery everything else
//! is built on.

mod funm;
mod matrix;
mod schur;

pub use funm::{
    apply_entire, cauchy_taylor, commutes, complex_power, funm_triangular, mat_exp,
    mat_log_principal, matrix_power, power_fn, real_power, ExpAffine, FnScalar, Log,
    ScalarFunction, CLUSTER_GAP,
};
pub use matrix::{residual, CMatrix, MAX_DIM};
pub use schur::{schur, spectral_bounds, SchurForm, SharedBasis, SpectralInfo};

pub(crate) use schur::spectral_info;
