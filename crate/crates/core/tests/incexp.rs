mod common;

use common::*;
use mgf_core::gammamat::rgamma_mat;
use mgf_core::hyper::{eval_pfq, ParamSet};
use mgf_core::incexp::{
    addition_series, eval_big_e, eval_e, eval_res, multiplication_series, shift_param, DeltaArray,
    IncExpParams, ShiftDirection, ShiftTarget,
};
use mgf_core::incgamma::{lower_inc_gamma, upper_inc_gamma, IncKind};
use mgf_core::CMatrix;

/// `a·I + b·K` for a fixed nilpotent-free `K`, so every member commutes.
fn poly(a: f64, b: f64) -> CMatrix {
    let k = rows(2, &[(0.3, 0.1), (0.5, 0.0), (0.2, -0.1), (-0.4, 0.2)]);
    &scalar(2, a) + &k.scale_re(b)
}

fn family() -> ParamSet {
    ParamSet::new(
        vec![poly(0.6, 0.3), poly(0.9, -0.2)],
        vec![poly(1.7, 0.25)],
        poly(1.0, 0.1),
        poly(1.3, 0.3),
    )
    .unwrap()
}

#[test]
fn e_at_zero_argument() {
    let q = q2();
    let x = 1.7;
    let want = &lower_inc_gamma(&q, x).unwrap() * &rgamma_mat(&q).unwrap();
    assert_close(&eval_e(&q, x, r(0.0)).unwrap().value, &want, 1e-14);
    let want = &upper_inc_gamma(&q, x).unwrap() * &rgamma_mat(&q).unwrap();
    assert_close(&eval_big_e(&q, x, r(0.0)).unwrap().value, &want, 1e-13);
}

#[test]
fn res_at_zero_and_large_x() {
    let base = family();
    let q = base.q.clone();
    let x = 2.2;
    for kind in [IncKind::Lower, IncKind::Upper] {
        let p = IncExpParams::new(base.clone(), x, kind).unwrap();
        let g = match kind {
            IncKind::Lower => lower_inc_gamma(&q, x).unwrap(),
            IncKind::Upper => upper_inc_gamma(&q, x).unwrap(),
        };
        assert_close(&eval_res(&p, r(0.0)).unwrap().value, &(&g * &rgamma_mat(&q).unwrap()), 1e-13);
    }
    let z = c(0.3, 0.2);
    let lo = IncExpParams::new(base.clone(), 50.0, IncKind::Lower).unwrap();
    let pfq = ParamSet::hypergeometric(base.upper.clone(), base.lower.clone()).unwrap();
    assert_close(&eval_res(&lo, z).unwrap().value, &eval_pfq(&pfq, z).unwrap().value, 1e-6);
    let up = IncExpParams::new(base, 50.0, IncKind::Upper).unwrap();
    assert!(eval_res(&up, z).unwrap().value.norm2() < 1e-6);
}

#[test]
fn contiguous_shift() {
    let p = IncExpParams::new(family(), 1.4, IncKind::Lower).unwrap();
    let z = c(0.35, -0.1);
    let same = shift_param(&p, ShiftTarget::Lower(0), ShiftDirection::Down, 0, z).unwrap();
    assert_close(&same.value, &eval_res(&p, z).unwrap().value, 0.0);

    let shifted = shift_param(&p, ShiftTarget::Lower(0), ShiftDirection::Down, 1, z).unwrap();
    let b = &p.base;
    let direct = p
        .with_base(ParamSet::new(b.upper.clone(), vec![b.lower[0].shift_re(-1.0)], b.p.clone(), b.q.clone()).unwrap())
        .unwrap();
    assert_close(&shifted.value, &eval_res(&direct, z).unwrap().value, 1e-9);
}

#[test]
fn addition_theorem() {
    let p = IncExpParams::new(family(), 1.1, IncKind::Upper).unwrap();
    let (y, z) = (r(0.3), r(0.2));
    assert_close(&addition_series(&p, y, r(0.0), 40).unwrap(), &eval_res(&p, y).unwrap().value, 1e-15);
    assert_close(&addition_series(&p, y, z, 60).unwrap(), &eval_res(&p, y + z).unwrap().value, 1e-8);
}

#[test]
fn multiplication_theorem() {
    let base = ParamSet::new(vec![scalar(1, 0.7)], vec![scalar(1, 1.6)], scalar(1, 1.0), scalar(1, 1.2)).unwrap();
    let p = IncExpParams::new(base, 0.9, IncKind::Lower).unwrap();
    let y = r(0.4);
    assert_close(&multiplication_series(&p, y, r(1.0), 40).unwrap(), &eval_res(&p, y).unwrap().value, 1e-15);
    assert_close(&multiplication_series(&p, y, r(1.3), 60).unwrap(), &eval_res(&p, r(0.52)).unwrap().value, 1e-8);
}

#[test]
fn delta_array() {
    let a = q2();
    let d = DeltaArray::new(2, &a).unwrap();
    assert_eq!(d.members.len(), 2);
    assert_close(&d.members[0], &a.scale_re(0.5), 1e-16);
    assert_close(&d.members[1], &a.shift_re(1.0).scale_re(0.5), 1e-16);
    assert!(DeltaArray::new(0, &a).is_err());
}
