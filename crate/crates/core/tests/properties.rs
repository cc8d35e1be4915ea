mod common;

use common::*;
use mgf_core::gammamat::{gamma_mat, pochhammer, pochhammer_kn, rgamma_mat, RGamma};
use mgf_core::hyper::{classify_pfq, classify_rrs, ParamSet};
use mgf_core::incexp::{eval_big_e, eval_e};
use mgf_core::matcore::{apply_entire, mat_exp, real_power, residual, FnScalar};
use mgf_core::oracle::{quad_matrix, ref_gamma, scalar_ref_incgamma};
use mgf_core::{CMatrix, C64};
use proptest::prelude::*;

/// Spectrum in a box in the right half plane, mild non-normality.
fn stable(n: usize) -> impl Strategy<Value = CMatrix> {
    (
        prop::collection::vec((0.6..3.0f64, -0.8..0.8f64), n),
        prop::collection::vec((-0.4..0.4f64, -0.4..0.4f64), n * n),
        prop::collection::vec((-0.25..0.25f64, -0.25..0.25f64), n * n),
    )
        .prop_map(move |(d, up, s)| {
            let t = CMatrix::from_fn(n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => c(d[i].0, d[i].1),
                std::cmp::Ordering::Less => c(up[i * n + j].0, up[i * n + j].1),
                std::cmp::Ordering::Greater => c(0.0, 0.0),
            });
            let s = similarity(n, &s);
            &(&s * &t) * &s.inverse().unwrap()
        })
}

fn similarity(n: usize, s: &[(f64, f64)]) -> CMatrix {
    CMatrix::from_fn(n, |i, j| c(s[i * n + j].0 + if i == j { 1.0 } else { 0.0 }, s[i * n + j].1))
}

fn sized() -> impl Strategy<Value = CMatrix> {
    (1usize..=3).prop_flat_map(stable)
}

fn with_transform() -> impl Strategy<Value = (CMatrix, CMatrix)> {
    (1usize..=3).prop_flat_map(|n| {
        (stable(n), prop::collection::vec((-0.25..0.25f64, -0.25..0.25f64), n * n))
            .prop_map(move |(a, s)| (a, similarity(n, &s)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonal_input_maps_entrywise(d in prop::collection::vec((-3.0..3.0f64, -2.0..2.0f64), 1..5)) {
        let z: Vec<C64> = d.iter().map(|&(a, b)| c(a, b)).collect();
        let got = apply_entire(&RGamma, &CMatrix::from_diag(&z)).unwrap();
        let want = CMatrix::from_diag(&z.iter().map(|&v| mgf_core::gammamat::rgamma(v)).collect::<Vec<_>>());
        prop_assert!(residual(&got, &want) < 1e-12);
    }

    #[test]
    fn similarity_covariance((a, s) in with_transform()) {
        let si = s.inverse().unwrap();
        let moved = &(&s * &a) * &si;
        let lhs = rgamma_mat(&moved).unwrap();
        let rhs = &(&s * &rgamma_mat(&a).unwrap()) * &si;
        let kappa = s.norm2() * si.norm2();
        prop_assert!(residual(&lhs, &rhs) < 1e-9 * kappa);
    }

    #[test]
    fn functions_of_commuting_pair_commute(a in sized()) {
        let b = &(&a * &a).scale_re(0.3) + &a.shift_re(0.5);
        let fa = mat_exp(&a.scale_re(0.5)).unwrap();
        let gb = apply_entire(&FnScalar(|z: C64| z.sin() + z * z), &b).unwrap();
        prop_assert!(residual(&(&fa * &gb), &(&gb * &fa)) < 1e-10);
    }

    #[test]
    fn real_power_is_multiplicative(q in sized(), x in 0.1..5.0f64, y in 0.1..5.0f64) {
        let lhs = &real_power(x, &q).unwrap() * &real_power(y, &q).unwrap();
        prop_assert!(residual(&lhs, &real_power(x * y, &q).unwrap()) < 1e-10);
    }

    #[test]
    fn gamma_recurrence_and_inverse(a in sized()) {
        let g = gamma_mat(&a).unwrap();
        let up = gamma_mat(&a.shift_re(1.0)).unwrap();
        prop_assert!(residual(&up, &(&a * &g)) < 1e-10);
        let n = a.dim();
        prop_assert!(residual(&(&rgamma_mat(&a).unwrap() * &g), &CMatrix::identity(n)) < 1e-9);
    }

    #[test]
    fn pochhammer_splits(a in sized(), m in 0usize..5, n in 0usize..5) {
        let lhs = pochhammer(&a, m + n);
        let rhs = &pochhammer(&a, m) * &pochhammer(&a.shift_re(m as f64), n);
        prop_assert!(residual(&lhs, &rhs) < 1e-11);
    }

    #[test]
    fn pochhammer_kn_is_pochhammer(a in sized(), k in 1usize..=4, n in 0usize..=5) {
        let lhs = pochhammer_kn(&a, k, n).unwrap();
        prop_assert!(residual(&lhs, &pochhammer(&a, k * n)) < 1e-11);
    }

    #[test]
    fn classification_ignores_similarity((a, s) in with_transform(), (b, t) in with_transform()) {
        prop_assume!(a.dim() == b.dim());
        let si = s.inverse().unwrap();
        let ti = t.inverse().unwrap();
        let a2 = &(&s * &a) * &si;
        let b2 = &(&t * &b) * &ti;
        let half = a.scale_re(0.3);
        let half2 = a2.scale_re(0.3);
        let p = ParamSet::hypergeometric(vec![half.clone(), a.clone()], vec![b.clone()]).unwrap();
        let p2 = ParamSet::hypergeometric(vec![half2.clone(), a2.clone()], vec![b2.clone()]).unwrap();
        prop_assert_eq!(classify_pfq(&p).unwrap(), classify_pfq(&p2).unwrap());
        let p = ParamSet::hypergeometric(vec![half, a.clone(), b.clone()], vec![a]).unwrap();
        let p2 = ParamSet::hypergeometric(vec![half2, a2.clone(), b2], vec![a2]).unwrap();
        prop_assert_eq!(classify_rrs(&p).unwrap(), classify_rrs(&p2).unwrap());
    }

    #[test]
    fn scalar_reference_pair_sums_to_gamma(re in 0.5..6.0f64, im in -2.0..2.0f64, x in 0.0..25.0f64) {
        let a = c(re, im);
        let (lo, up) = scalar_ref_incgamma(a, x).unwrap();
        let g = ref_gamma(a);
        prop_assert!(((lo + up) - g).norm() <= 1e-12 * g.norm());
    }

    #[test]
    fn quadrature_is_linear(q in sized(), alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let f = |t: f64| real_power(1.0 + t, &q);
        let g = |t: f64| mat_exp(&q.scale_re(-t));
        let qf = quad_matrix(f, 0.0, 2.0, 1e-12).unwrap();
        let qg = quad_matrix(g, 0.0, 2.0, 1e-12).unwrap();
        let qs = quad_matrix(|t| Ok(&f(t)?.scale_re(alpha) + &g(t)?.scale_re(beta)), 0.0, 2.0, 1e-12).unwrap();
        let lin = &qf.value.scale_re(alpha) + &qg.value.scale_re(beta);
        let budget = 1e-10 + alpha.abs() * qf.abs_error_estimate + beta.abs() * qg.abs_error_estimate + qs.abs_error_estimate;
        prop_assert!((&qs.value - &lin).norm2() <= budget.max(1e-12 * lin.norm2()));
    }

    #[test]
    fn incomplete_exponentials_sum_to_exp(q in sized(), x in 0.0..6.0f64, ure in -1.0..1.0f64, uim in -1.0..1.0f64) {
        let u = c(ure, uim);
        let s = &eval_e(&q, x, u).unwrap().value + &eval_big_e(&q, x, u).unwrap().value;
        prop_assert!(residual(&s, &CMatrix::scalar(q.dim(), u.exp())) < 1e-12);
    }

    #[test]
    fn matrix_json_roundtrip(a in sized()) {
        let back = CMatrix::from_json_value(&a.to_json()).unwrap();
        prop_assert_eq!(back.to_row_major(), a.to_row_major());
    }
}
