mod common;

use common::*;
use mgf_core::gammamat::{beta_mat, gamma_mat, pochhammer, pochhammer_kn, rgamma_mat};
use mgf_core::{CMatrix, MgfError};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[test]
fn reciprocal_gamma_values() {
    assert_close(&rgamma_mat(&CMatrix::identity(2)).unwrap(), &CMatrix::identity(2), 1e-14);
    assert!(rgamma_mat(&CMatrix::zeros(2)).unwrap().max_abs() < 1e-14);
    let pi = std::f64::consts::PI;
    assert_close(&rgamma_mat(&diag(&[0.5, 3.0])).unwrap(), &diag(&[1.0 / pi.sqrt(), 0.5]), 1e-14);
}

#[test]
fn gamma_values() {
    assert_close(&gamma_mat(&diag(&[1.0, 2.0, 3.0])).unwrap(), &diag(&[1.0, 1.0, 2.0]), 1e-13);
    let pi = std::f64::consts::PI;
    assert_close(&gamma_mat(&scalar(2, 0.5)).unwrap(), &scalar(2, pi.sqrt()), 1e-13);
    let j = rows(2, &[(2.0, 0.0), (1.0, 0.0), (0.0, 0.0), (2.0, 0.0)]);
    let want = rows(2, &[(1.0, 0.0), (1.0 - EULER_GAMMA, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    assert_close(&gamma_mat(&j).unwrap(), &want, 1e-10);
}

#[test]
fn gamma_rejects_poles() {
    match gamma_mat(&diag(&[1.5, -2.0])) {
        Err(MgfError::Pole { eigenvalue }) => assert!((eigenvalue - r(-2.0)).norm() < 1e-12),
        other => panic!("expected a pole error, got {other:?}"),
    }
}

#[test]
fn pochhammer_values() {
    let a = q3();
    assert_close(&pochhammer(&a, 0), &CMatrix::identity(3), 0.0);
    assert_close(&pochhammer(&a, 1), &a, 0.0);
    assert_close(&pochhammer(&diag(&[1.0, 2.0]), 2), &diag(&[2.0, 6.0]), 1e-15);
}

#[test]
fn pochhammer_kn_factorization() {
    let q = q3();
    for n in 0..5 {
        assert_close(&pochhammer_kn(&q, 1, n).unwrap(), &pochhammer(&q, n), 1e-15);
    }
    assert_close(&pochhammer_kn(&CMatrix::identity(1), 2, 1).unwrap(), &scalar(1, 2.0), 1e-15);
    assert_close(&pochhammer_kn(&q, 3, 2).unwrap(), &pochhammer(&q, 6), 1e-10);
}

#[test]
fn beta_values() {
    let i = CMatrix::identity(2);
    assert_close(&beta_mat(&i, &i).unwrap(), &i, 1e-13);
    assert_close(&beta_mat(&i, &scalar(2, 2.0)).unwrap(), &scalar(2, 0.5), 1e-13);
    assert_close(&beta_mat(&diag(&[2.0, 3.0]), &i).unwrap(), &diag(&[0.5, 1.0 / 3.0]), 1e-13);
    assert!(matches!(beta_mat(&q2(), &diag(&[1.0, 2.0])), Err(MgfError::Commutativity(_))));
}
