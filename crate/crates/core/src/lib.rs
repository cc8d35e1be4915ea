//! Gamma, incomplete gamma and incomplete exponential functions of square
//! complex matrices, together with a seeded identity verification suite.
//!
//! Matrix functions are evaluated through a Schur–Parlett scheme
//! ([`matcore::apply_entire`]); every special function in the crate is built
//! on top of that primitive and on convergent matrix series.

pub mod error;
pub mod gammamat;
pub mod hyper;
pub mod identities;
pub mod incexp;
pub mod incgamma;
pub mod matcore;
pub mod oracle;
pub mod series;

pub use error::{MgfError, Result};
pub use matcore::CMatrix;
pub use num_complex::Complex64 as C64;
