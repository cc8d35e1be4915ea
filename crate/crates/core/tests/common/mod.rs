#![allow(dead_code)]

use mgf_core::matcore::residual;
use mgf_core::{CMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn scalar(n: usize, v: f64) -> CMatrix {
    CMatrix::scalar(n, r(v))
}

pub fn diag(d: &[f64]) -> CMatrix {
    CMatrix::from_diag(&d.iter().map(|&v| r(v)).collect::<Vec<_>>())
}

pub fn rows(n: usize, d: &[(f64, f64)]) -> CMatrix {
    CMatrix::from_rows(n, &d.iter().map(|&(a, b)| c(a, b)).collect::<Vec<_>>()).unwrap()
}

/// A fixed non-normal 2×2 matrix with spectrum in the right half plane.
pub fn q2() -> CMatrix {
    rows(2, &[(1.3, 0.2), (0.4, -0.1), (0.2, 0.3), (2.2, -0.4)])
}

/// A fixed 3×3 matrix with spectrum in the right half plane.
pub fn q3() -> CMatrix {
    rows(
        3,
        &[
            (1.1, 0.1), (0.3, 0.0), (-0.2, 0.1),
            (0.1, -0.2), (1.8, 0.0), (0.25, 0.0),
            (0.0, 0.1), (0.15, 0.05), (2.6, -0.3),
        ],
    )
}

#[track_caller]
pub fn assert_close(got: &CMatrix, want: &CMatrix, tol: f64) {
    let e = residual(got, want);
    assert!(e <= tol, "residual {e:.3e} > {tol:.0e}\n got {got:?}\nwant {want:?}");
}

#[track_caller]
pub fn assert_near(got: C64, want: C64, tol: f64) {
    let e = (got - want).norm();
    assert!(e <= tol, "|{got} − {want}| = {e:.3e} > {tol:.0e}");
}
