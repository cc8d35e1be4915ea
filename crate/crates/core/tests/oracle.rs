mod common;

use common::*;
use mgf_core::incgamma::lower_inc_gamma;
use mgf_core::matcore::real_power;
use mgf_core::oracle::{
    finite_diff, quad_matrix, quad_power_weighted, quad_semi_infinite, scalar_ref_incgamma,
};
use mgf_core::{CMatrix, C64};

#[test]
fn finite_quadrature() {
    let i = CMatrix::identity(2);
    let q = quad_matrix(|_| Ok(i.clone()), 0.0, 1.0, 1e-12).unwrap();
    assert_close(&q.value, &i, 1e-15);
    assert!(q.abs_error_estimate < 1e-13);

    let w = diag(&[2.0, 3.0]);
    let v = quad_power_weighted(&w, |_| Ok(CMatrix::identity(2)), 1.0, 1e-12).unwrap();
    assert_close(&v.value, &diag(&[0.5, 1.0 / 3.0]), 1e-10);

    let v = quad_power_weighted(&scalar(1, 0.5), |_| Ok(CMatrix::identity(1)), 1.0, 1e-12).unwrap();
    assert_near(v.value.get(0, 0), r(2.0), 1e-8);
}

#[test]
fn semi_infinite_quadrature() {
    let one = quad_semi_infinite(|t| Ok(scalar(1, (-t).exp())), 0.0, 1e-12).unwrap();
    assert_near(one.value.get(0, 0), r(1.0), 1e-10);
    let two = quad_semi_infinite(|t| Ok(scalar(1, t * (-t).exp())), 1.0, 1e-12).unwrap();
    assert_near(two.value.get(0, 0), r(2.0 / std::f64::consts::E), 1e-9);

    let q = diag(&[1.0, 2.0]);
    let qm1 = q.shift_re(-1.0);
    let up = quad_semi_infinite(|t| Ok(real_power(t, &qm1)?.scale_re((-t).exp())), 1.0, 1e-12).unwrap();
    let e1 = (-1.0f64).exp();
    assert_close(&up.value, &diag(&[e1, 2.0 * e1]), 1e-10);
}

#[test]
fn finite_differences() {
    let d = finite_diff(|t| Ok(scalar(2, t * t)), 3.0, 1).unwrap();
    assert_close(&d, &scalar(2, 6.0), 1e-7);
    let d = finite_diff(|t| Ok(scalar(2, t.exp())), 0.0, 2).unwrap();
    assert_close(&d, &scalar(2, 1.0), 1e-5);
    let d = finite_diff(|t| lower_inc_gamma(&CMatrix::identity(2), t), 1.0, 1).unwrap();
    assert_close(&d, &scalar(2, (-1.0f64).exp()), 1e-6);
}

#[test]
fn scalar_incomplete_gamma_reference() {
    let (lo, up) = scalar_ref_incgamma(r(1.0), 1.0).unwrap();
    let e1 = (-1.0f64).exp();
    assert_near(lo, r(1.0 - e1), 1e-15);
    assert_near(up, r(e1), 1e-15);

    // √π·erf(0.5)
    let (lo, _) = scalar_ref_incgamma(r(0.5), 0.25).unwrap();
    assert_near(lo, r(0.922_562_012_825_584_8), 1e-9);

    let a = c(2.5, 0.7);
    let (lo, up) = scalar_ref_incgamma(a, 0.0).unwrap();
    assert_eq!(lo, C64::new(0.0, 0.0));
    assert_near(up, mgf_core::oracle::ref_gamma(a), 1e-14);
    assert!(scalar_ref_incgamma(r(-0.5), 1.0).is_err());
}
