//! Checkers for the incomplete exponential families.

use crate::error::Result;
use crate::gammamat::{beta_mat, gamma_mat, pochhammer, rgamma_mat};
use crate::hyper::{eval_pfq, eval_rrs_matrix_arg, ParamSet};
use crate::incexp::{eval_big_e, eval_e, eval_res, psi_phi_seq, series_terms, IncExpParams, IncKind};
use crate::incexp::{addition_series, multiplication_series};
use crate::incgamma::regularized;
use crate::matcore::{complex_power, CMatrix};
use crate::oracle::{cauchy_derivative, finite_diff};
use crate::C64;

use super::draw::{Draw, SpectralBox};
use super::support::*;

type M = CMatrix;

const ORIGIN: C64 = C64::new(0.0, 0.0);

fn ev(p: &IncExpParams, z: C64) -> Result<M> {
    Ok(eval_res(p, z)?.value)
}

fn rebuild(p: &IncExpParams, upper: Vec<M>, lower: Vec<M>, pp: M, q: M) -> Result<IncExpParams> {
    IncExpParams::new(ParamSet::new(upper, lower, pp, q)?, p.x, p.kind)
}

fn shift_upper(p: &IncExpParams, i: usize, by: f64) -> Result<IncExpParams> {
    let b = &p.base;
    let mut up = b.upper.clone();
    up[i] = up[i].shift_re(by);
    rebuild(p, up, b.lower.clone(), b.p.clone(), b.q.clone())
}

fn shift_lower(p: &IncExpParams, j: usize, by: f64) -> Result<IncExpParams> {
    let b = &p.base;
    let mut lo = b.lower.clone();
    lo[j] = lo[j].shift_re(by);
    rebuild(p, b.upper.clone(), lo, b.p.clone(), b.q.clone())
}

/// Commuting parameters with `x` drawn from `[0.3, 6]`.
fn draw_inc(d: &mut Draw, r: usize, s: usize, kind: IncKind) -> Result<IncExpParams> {
    let base = family_params(d, r, s)?;
    let x = d.real("x", 0.3, 6.0);
    inc(base, x, kind)
}

fn id(n: usize) -> M {
    M::identity(n)
}

fn theta(p: &IncExpParams, z: C64, radius: f64) -> Result<M> {
    Ok(cauchy_derivative(|w| ev(p, w), z, 1, radius, 48)?.scale(z))
}

/// `Σ_ℓ w_ℓ Ψ_ℓ` over the first `count` terms.
fn weighted_psi(p: &IncExpParams, z: C64, count: usize, w: impl Fn(usize) -> Result<M>) -> Result<M> {
    let terms = series_terms(p, z, count)?;
    let mut s = M::zeros(p.base.dim());
    for (l, t) in terms.iter().enumerate() {
        s += &(&w(l)? * t);
    }
    Ok(s)
}

const PSI_TERMS: usize = 120;

pub fn eq_3_3(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 1.2, 10.0);
    let u = d.disk("u", ORIGIN, 2.0);
    let lhs = (|| Ok(&eval_e(&q, x, u)?.value + &eval_big_e(&q, x, u)?.value))();
    let rhs = id(q.dim()).scale(u.exp());
    Ok(vec![d.resid(lhs, Ok(rhs))])
}

pub fn eq_3_4(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.3, 6.0);
    let u = d.disk("u", ORIGIN, 1.0);
    let h = ParamSet::hypergeometric(vec![], vec![q.clone()]).map_err(infeasible)?;
    let rhs = (|| {
        let v = weighted(&q, |t| Ok(eval_pfq(&h, u * t)?.value.scale_re((-t).exp())), x)?;
        Ok(&rgamma_mat(&q)? * &v)
    })();
    Ok(vec![d.resid(eval_e(&q, x, u).map(|s| s.value), rhs)])
}

pub fn eq_3_5(d: &mut Draw) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.3, 6.0);
    let u = d.disk("u", ORIGIN, 1.0);
    let h = ParamSet::hypergeometric(vec![], vec![q.clone()]).map_err(infeasible)?;
    let qm = q.shift_re(-1.0);
    let rhs = (|| {
        let v = quad(
            |t| Ok(&pow(t, &qm)? * &eval_pfq(&h, u * t)?.value.scale_re((-t).exp())),
            x,
            x + 100.0,
        )?;
        Ok(&rgamma_mat(&q)? * &v)
    })();
    Ok(vec![d.resid(eval_big_e(&q, x, u).map(|s| s.value), rhs)])
}

pub fn eq_3_8(d: &mut Draw) -> Result<Vec<f64>> {
    let a = d.matrix("A1", A_BOX);
    let b = d.matrix("B1", B_BOX);
    let p = d.matrix("P", P_BOX);
    let q = d.matrix("Q", Q_BOX);
    let x = d.real("x", 1.2, 10.0);
    let z = d.disk("z", ORIGIN, 1.5);
    let base = params(vec![a.clone()], vec![b.clone()], p, q)?;
    let lo = inc(base.clone(), x, IncKind::Lower)?;
    let up = inc(base, x, IncKind::Upper)?;
    let f = ParamSet::hypergeometric(vec![a], vec![b]).map_err(infeasible)?;
    let lhs = (|| Ok(&ev(&lo, z)? + &ev(&up, z)?))();
    Ok(vec![d.resid(lhs, eval_pfq(&f, z).map(|s| s.value))])
}

fn reduction(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let q = d.matrix("Q", SpectralBox::DEFAULT);
    let x = d.real("x", 0.1, 10.0);
    let z = d.disk("z", ORIGIN, 2.0);
    let n = q.dim();
    let p = inc(params(vec![], vec![], id(n), q.clone())?, x, kind)?;
    let direct = match kind {
        IncKind::Lower => eval_e(&q, x, z),
        IncKind::Upper => eval_big_e(&q, x, z),
    };
    Ok(vec![d.resid(ev(&p, z), direct.map(|s| s.value))])
}

pub fn eq_3_9(d: &mut Draw) -> Result<Vec<f64>> {
    reduction(d, IncKind::Lower)
}

pub fn eq_3_10(d: &mut Draw) -> Result<Vec<f64>> {
    reduction(d, IncKind::Upper)
}

fn avoid_param_integers(d: &Draw, p: &IncExpParams) -> Result<()> {
    for m in p.base.upper.iter().chain(p.base.lower.iter()) {
        d.avoid_integers(m, 0.1)?;
    }
    Ok(())
}

pub fn eq_3_11(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    avoid_param_integers(d, &p)?;
    let n = d.int("n", 1, 3);
    let z = d.disk("z", ORIGIN, 0.8);
    let dim = p.base.dim();
    let nf = n as f64;
    let a = p.base.upper[0].clone();
    let b = p.base.lower[0].clone();
    let prod = |f: &dyn Fn(usize) -> Result<M>| -> Result<M> {
        let mut m = id(dim);
        for k in 1..=n {
            m = &m * &f(k)?;
        }
        Ok(m)
    };
    let mut out = Vec::new();
    // upward shift of A
    let rhs = (|| {
        let pre = prod(&|k| a.shift_re(k as f64 - 1.0).inverse())?;
        let s = weighted_psi(&p, z, PSI_TERMS, |l| prod(&|k| Ok(a.shift_re((l + k) as f64 - 1.0))))?;
        Ok(&pre * &s)
    })();
    out.push(d.resid(shift_upper(&p, 0, nf).and_then(|s| ev(&s, z)), rhs));
    // downward shift of A
    let rhs = (|| {
        let pre = prod(&|k| Ok(a.shift_re(-(k as f64))))?;
        let s = weighted_psi(&p, z, PSI_TERMS, |l| prod(&|k| a.shift_re(l as f64 - k as f64).inverse()))?;
        Ok(&pre * &s)
    })();
    out.push(d.resid(shift_upper(&p, 0, -nf).and_then(|s| ev(&s, z)), rhs));
    // upward shift of B
    let rhs = (|| {
        let pre = prod(&|k| Ok(b.shift_re(k as f64 - 1.0)))?;
        let s = weighted_psi(&p, z, PSI_TERMS, |l| prod(&|k| b.shift_re((l + k) as f64 - 1.0).inverse()))?;
        Ok(&pre * &s)
    })();
    out.push(d.resid(shift_lower(&p, 0, nf).and_then(|s| ev(&s, z)), rhs));
    // downward shift of B
    let rhs = (|| {
        let pre = prod(&|k| b.shift_re(-(k as f64)).inverse())?;
        let s = weighted_psi(&p, z, PSI_TERMS, |l| prod(&|k| Ok(b.shift_re(l as f64 - k as f64))))?;
        Ok(&pre * &s)
    })();
    out.push(d.resid(shift_lower(&p, 0, -nf).and_then(|s| ev(&s, z)), rhs));
    Ok(vec![worst(&out)])
}

pub fn eq_3_12(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    let z = d.disk("z", ORIGIN, 0.8);
    let a = p.base.upper[0].clone();
    let rhs = (|| {
        let ai = a.inverse()?;
        weighted_psi(&p, z, PSI_TERMS, |l| Ok(&a.shift_re(l as f64) * &ai))
    })();
    Ok(vec![d.resid(shift_upper(&p, 0, 1.0).and_then(|s| ev(&s, z)), rhs)])
}

pub fn eq_3_13(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    avoid_param_integers(d, &p)?;
    let z = d.disk("z", ORIGIN, 0.8);
    let a = p.base.upper[0].clone();
    let b = p.base.lower[0].clone();
    let mut out = Vec::new();
    let rhs = (|| Ok(&a.inverse()? * &weighted_psi(&p, z, PSI_TERMS, |l| Ok(a.shift_re(l as f64)))?))();
    out.push(d.resid(shift_upper(&p, 0, 1.0).and_then(|s| ev(&s, z)), rhs));
    let rhs = (|| {
        let s = weighted_psi(&p, z, PSI_TERMS, |l| a.shift_re(l as f64 - 1.0).inverse())?;
        Ok(&a.shift_re(-1.0) * &s)
    })();
    out.push(d.resid(shift_upper(&p, 0, -1.0).and_then(|s| ev(&s, z)), rhs));
    let rhs = (|| Ok(&b * &weighted_psi(&p, z, PSI_TERMS, |l| b.shift_re(l as f64).inverse())?))();
    out.push(d.resid(shift_lower(&p, 0, 1.0).and_then(|s| ev(&s, z)), rhs));
    let rhs = (|| {
        let s = weighted_psi(&p, z, PSI_TERMS, |l| Ok(b.shift_re(l as f64 - 1.0)))?;
        Ok(&b.shift_re(-1.0).inverse()? * &s)
    })();
    out.push(d.resid(shift_lower(&p, 0, -1.0).and_then(|s| ev(&s, z)), rhs));
    Ok(vec![worst(&out)])
}

pub fn eq_3_14(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    let z = d.disk("z", ORIGIN, 1.5);
    let (a1, a2) = (&p.base.upper[0], &p.base.upper[1]);
    let lhs = (|| Ok(&(a2 - a1) * &ev(&p, z)?))();
    let rhs = (|| {
        Ok(&(a2 * &ev(&shift_upper(&p, 1, 1.0)?, z)?) - &(a1 * &ev(&shift_upper(&p, 0, 1.0)?, z)?))
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_3_15(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 1, 2, IncKind::Lower)?;
    let z = d.disk("z", ORIGIN, 1.5);
    let (b1, b2) = (&p.base.lower[0], &p.base.lower[1]);
    let lhs = (|| Ok(&(b2 - b1) * &ev(&p, z)?))();
    let rhs = (|| {
        let t2 = &b2.shift_re(-1.0) * &ev(&shift_lower(&p, 1, -1.0)?, z)?;
        let t1 = &b1.shift_re(-1.0) * &ev(&shift_lower(&p, 0, -1.0)?, z)?;
        Ok(&t2 - &t1)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

fn mixed_contiguous(d: &mut Draw, kind: IncKind, r: usize) -> Result<Vec<f64>> {
    let p = draw_inc(d, r, 1, kind)?;
    let i = d.int("i", 0, r - 1);
    let radius = if kind == IncKind::Upper && r == 2 { 0.7 } else { 1.5 };
    let z = d.disk("z", ORIGIN, radius);
    let a = &p.base.upper[i];
    let b = &p.base.lower[0];
    let lhs = (|| Ok(&(&(a - b)).shift_re(1.0) * &ev(&p, z)?))();
    let rhs = (|| {
        let ta = a * &ev(&shift_upper(&p, i, 1.0)?, z)?;
        let tb = &b.shift_re(-1.0) * &ev(&shift_lower(&p, 0, -1.0)?, z)?;
        Ok(&ta - &tb)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_3_16(d: &mut Draw) -> Result<Vec<f64>> {
    mixed_contiguous(d, IncKind::Lower, 2)
}

pub fn eq_3_42(d: &mut Draw) -> Result<Vec<f64>> {
    mixed_contiguous(d, IncKind::Lower, 1)
}

pub fn eq_3_43(d: &mut Draw) -> Result<Vec<f64>> {
    mixed_contiguous(d, IncKind::Upper, 1)
}

pub fn eq_3_17(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    let i = d.int("i", 0, 1);
    let z = d.disk("z", ORIGIN, 1.0);
    let a = &p.base.upper[i];
    let lhs = (|| Ok(&theta(&p, z, 0.25)? + &(a * &ev(&p, z)?)))();
    let rhs = (|| Ok(a * &ev(&shift_upper(&p, i, 1.0)?, z)?))();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_3_18(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    let z = d.disk("z", ORIGIN, 1.0);
    let bm = p.base.lower[0].shift_re(-1.0);
    let lhs = (|| Ok(&theta(&p, z, 0.25)? + &(&bm * &ev(&p, z)?)))();
    let rhs = (|| Ok(&bm * &ev(&shift_lower(&p, 0, -1.0)?, z)?))();
    Ok(vec![d.resid(lhs, rhs)])
}

/// `Π(Aᵢ)ₙ Π[(Bⱼ)ₙ]⁻¹` times the series with every parameter raised by `n`
/// and `Q` replaced by `nP + Q`.
fn derivative_rhs(p: &IncExpParams, z: C64, n: usize) -> Result<M> {
    let b = &p.base;
    let nf = n as f64;
    let mut coef = id(b.dim());
    for a in &b.upper {
        coef = &coef * &pochhammer(a, n);
    }
    for l in &b.lower {
        coef = pochhammer(l, n).solve_right(&coef)?;
    }
    let up = b.upper.iter().map(|a| a.shift_re(nf)).collect();
    let lo = b.lower.iter().map(|l| l.shift_re(nf)).collect();
    let q = &b.p.scale_re(nf) + &b.q;
    let shifted = rebuild(p, up, lo, b.p.clone(), q)?;
    Ok(&coef * &ev(&shifted, z)?)
}

fn z_derivative_fd(d: &mut Draw, kinds: &[IncKind], orders: &[usize]) -> Result<Vec<f64>> {
    let base = family_params(d, 2, 1)?;
    let x = d.real("x", 0.3, 6.0);
    let z = d.disk("z", ORIGIN, 0.5);
    let mut out = Vec::new();
    for &kind in kinds {
        let p = inc(base.clone(), x, kind)?;
        for &n in orders {
            let lhs = finite_diff(|t| ev(&p, z + t), 0.0, n as u8);
            out.push(d.resid(lhs, derivative_rhs(&p, z, n)));
        }
    }
    Ok(vec![worst(&out)])
}

fn z_derivative_contour(d: &mut Draw, kinds: &[IncKind], orders: &[usize]) -> Result<Vec<f64>> {
    let base = family_params(d, 2, 1)?;
    let x = d.real("x", 0.3, 6.0);
    let z = d.disk("z", ORIGIN, 0.5);
    let mut out = Vec::new();
    for &kind in kinds {
        let p = inc(base.clone(), x, kind)?;
        for &n in orders {
            let lhs = cauchy_derivative(|w| ev(&p, w), z, n, 0.25, 48);
            out.push(d.resid(lhs, derivative_rhs(&p, z, n)));
        }
    }
    Ok(vec![worst(&out)])
}

pub fn eq_3_19(d: &mut Draw) -> Result<Vec<f64>> {
    z_derivative_fd(d, &[IncKind::Lower], &[1, 2])
}

pub fn eq_3_20(d: &mut Draw) -> Result<Vec<f64>> {
    z_derivative_contour(d, &[IncKind::Lower], &[1])
}

pub fn eq_3_27(d: &mut Draw) -> Result<Vec<f64>> {
    z_derivative_contour(d, &[IncKind::Upper, IncKind::Lower], &[1, 2, 3])
}

pub fn eq_3_29(d: &mut Draw) -> Result<Vec<f64>> {
    z_derivative_fd(d, &[IncKind::Upper], &[1])
}

pub fn eq_3_30(d: &mut Draw) -> Result<Vec<f64>> {
    z_derivative_fd(d, &[IncKind::Lower], &[1])
}

fn rrs_at_power(p: &IncExpParams, z: C64, t: f64) -> Result<M> {
    if t == 0.0 {
        return rgamma_mat(&p.base.q);
    }
    Ok(eval_rrs_matrix_arg(&p.base, z, &pow(t, &p.base.p)?)?.value)
}

fn x_derivative(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let p = draw_inc(d, 1, 1, kind)?;
    let z = d.disk("z", ORIGIN, 1.5);
    let x = p.x.max(0.5);
    let lhs = finite_diff(
        |t| {
            let mut q = p.clone();
            q.x = t;
            ev(&q, z)
        },
        x,
        1,
    );
    let sign = if kind == IncKind::Lower { 1.0 } else { -1.0 };
    let rhs = (|| {
        let f = &pow(x, &p.base.q.shift_re(-1.0))? * &rrs_at_power(&p, z, x)?;
        Ok(f.scale_re(sign * (-x).exp()))
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_3_31(d: &mut Draw) -> Result<Vec<f64>> {
    x_derivative(d, IncKind::Lower)
}

pub fn eq_3_32(d: &mut Draw) -> Result<Vec<f64>> {
    x_derivative(d, IncKind::Upper)
}

pub fn eq_4_12(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    let z = d.disk("z", ORIGIN, 1.0);
    let b = &p.base;
    let x = p.x;
    let op = |pp: &IncExpParams| -> Result<M> {
        let dz = cauchy_derivative(|w| ev(pp, w), z, 1, 0.25, 48)?.scale(z);
        Ok(&(&b.p * &dz) + &(&b.q * &ev(pp, z)?))
    };
    let parts = (|| -> Result<(M, M, M)> {
        let left = op(&p)?;
        let raised = rebuild(&p, b.upper.clone(), b.lower.clone(), b.p.clone(), b.q.shift_re(1.0))?;
        let right = op(&raised)?;
        let r = &pow(x, &b.q)? * &rrs_at_power(&p, z, x)?;
        Ok((left, right, r))
    })();
    let (left, right, r) = match parts {
        Ok(v) => v,
        Err(e) => {
            let f = d.failed(e);
            return Ok(vec![f; 4]);
        }
    };
    let mut out = Vec::new();
    for (sign, expo) in [(1.0, x), (-1.0, -x), (1.0, -x), (-1.0, x)] {
        let lhs = &left + &r.scale_re(sign * expo.exp());
        out.push(d.resid(Ok(lhs), Ok(right.clone())));
    }
    Ok(out)
}

/// `∫_x^∞ t^{Q−I} e^{−t} ᵣRₛ(z t^P) dt`, truncated where `e^{−t}` is negligible.
fn tail_integral(p: &IncExpParams, z: C64) -> Result<M> {
    let qm = p.base.q.shift_re(-1.0);
    quad(
        |t| Ok((&pow(t, &qm)? * &rrs_at_power(p, z, t)?).scale_re((-t).exp())),
        p.x,
        p.x + 80.0,
    )
}

pub fn eq_3_22(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 1, 1, IncKind::Upper)?;
    let z = d.disk("z", ORIGIN, 0.5);
    let lhs = ev(&p, z);
    let tail = tail_integral(&p, z);
    let r1 = d.resid(lhs.clone(), tail.clone());
    let r2 = d.resid(lhs, tail.map(|m| -&m));
    Ok(vec![r1, r2])
}

pub fn eq_3_23(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 1, 1, IncKind::Lower)?;
    let z = d.disk("z", ORIGIN, 0.5);
    let lhs = ev(&p, z);
    let tail = tail_integral(&p, z);
    let head = weighted(&p.base.q, |t| Ok(rrs_at_power(&p, z, t)?.scale_re((-t).exp())), p.x);
    let r1 = d.resid(lhs.clone(), tail.clone().map(|m| -&m));
    let r2 = d.resid(lhs.clone(), tail);
    let r3 = d.resid(lhs, head);
    Ok(vec![r1, r2, r3])
}

/// `Γ(B)Γ⁻¹(A)Γ⁻¹(B−A) ∫_0^1 t^{A−I}(1−t)^{B−A−I} f(zt) dt`.
fn euler_integral(a: &M, b: &M, f: impl Fn(f64) -> Result<M>) -> Result<M> {
    let bma = b - a;
    if small_m(&bma)? <= 0.0 {
        return Err(crate::MgfError::DivergentIntegral(
            "(1−t)^{B−A−I} is not integrable at 1".into(),
        ));
    }
    let coef = &(&gamma_mat(b)? * &rgamma_mat(a)?) * &rgamma_mat(&bma)?;
    Ok(&coef * &two_sided(0.0, 1.0, a, &bma, f)?)
}

/// Euler-type representation with the integrated pair `(A, B)` taken from the
/// drawn upper/lower parameter lists at positions `i`, `j`.
fn euler_check(p: &IncExpParams, i: usize, j: usize, z: C64) -> Result<(M, M)> {
    let b = &p.base;
    let mut up = b.upper.clone();
    let a = up.remove(i);
    let mut lo = b.lower.clone();
    let bb = lo.remove(j);
    let inner = rebuild(p, up, lo, b.p.clone(), b.q.clone())?;
    let rhs = euler_integral(&a, &bb, |t| ev(&inner, z * t))?;
    Ok((ev(p, z)?, rhs))
}

fn hypothesis_order(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let fam = d.family(&[
        ("small", SpectralBox::new(0.5, 1.2, -0.3, 0.3)),
        ("big", SpectralBox::new(2.0, 3.0, -0.3, 0.3)),
        ("A2", A_BOX),
        ("P", P_BOX),
        ("Q", Q_BOX),
    ])?;
    let x = d.real("x", 0.3, 6.0);
    let z = d.disk("z", ORIGIN, 0.6);
    let (small, big, a2, pp, q) = (&fam[0], &fam[1], &fam[2], &fam[3], &fam[4]);
    let mut out = Vec::new();
    for (a1, b1) in [(big, small), (small, big)] {
        let r = (|| {
            let p = inc(params(vec![a1.clone(), a2.clone()], vec![b1.clone()], pp.clone(), q.clone())?, x, kind)?;
            euler_check(&p, 0, 0, z)
        })();
        out.push(match r {
            Ok((l, rr)) => d.resid(Ok(l), Ok(rr)),
            Err(e) => d.failed(e),
        });
    }
    Ok(out)
}

pub fn eq_3_24(d: &mut Draw) -> Result<Vec<f64>> {
    hypothesis_order(d, IncKind::Lower)
}

pub fn eq_3_25(d: &mut Draw) -> Result<Vec<f64>> {
    hypothesis_order(d, IncKind::Upper)
}

pub fn eq_3_26(d: &mut Draw) -> Result<Vec<f64>> {
    let fam = d.family(&[("A1", SpectralBox::new(0.5, 1.5, -0.5, 0.5)), ("B1", SpectralBox::new(2.2, 3.5, -0.5, 0.5))])?;
    let (a, b) = (&fam[0], &fam[1]);
    let l = d.int("l", 0, 4);
    let lhs = pochhammer(b, l).solve_right(&pochhammer(a, l));
    let dim = a.dim();
    let al = a.shift_re(l as f64);
    let rhs = (|| {
        let coef = &(&gamma_mat(b)? * &rgamma_mat(a)?) * &rgamma_mat(&(b - a))?;
        Ok(&coef * &two_sided(0.0, 1.0, &al, &(b - a), |_| Ok(id(dim)))?)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

fn euler_general(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let fam = d.family(&[
        ("A1", SpectralBox::new(0.5, 1.5, -0.3, 0.3)),
        ("A2", SpectralBox::new(0.5, 1.5, -0.3, 0.3)),
        ("B1", SpectralBox::new(2.2, 3.5, -0.3, 0.3)),
        ("B2", SpectralBox::new(2.2, 3.5, -0.3, 0.3)),
        ("P", P_BOX),
        ("Q", Q_BOX),
    ])?;
    let x = d.real("x", 0.3, 6.0);
    let i = d.int("i", 0, 1);
    let j = d.int("j", 0, 1);
    let z = d.disk("z", ORIGIN, 0.6);
    let p = inc(params(fam[0..2].to_vec(), fam[2..4].to_vec(), fam[4].clone(), fam[5].clone())?, x, kind)?;
    Ok(vec![match euler_check(&p, i, j, z) {
        Ok((l, r)) => d.resid(Ok(l), Ok(r)),
        Err(e) => d.failed(e),
    }])
}

pub fn eq_3_38(d: &mut Draw) -> Result<Vec<f64>> {
    euler_general(d, IncKind::Lower)
}

pub fn eq_3_39(d: &mut Draw) -> Result<Vec<f64>> {
    euler_general(d, IncKind::Upper)
}

fn laplace_type(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let p = draw_inc(d, 1, 1, kind)?;
    let z = d.disk("z", ORIGIN, 0.5);
    let b = &p.base;
    let a1 = b.upper[0].clone();
    let inner = rebuild(&p, vec![], b.lower.clone(), b.p.clone(), b.q.clone())?;
    let rhs = (|| {
        let v = weighted(&a1, |t| Ok(ev(&inner, z * t)?.scale_re((-t).exp())), 60.0)?;
        Ok(&rgamma_mat(&a1)? * &v)
    })();
    Ok(vec![d.resid(ev(&p, z), rhs)])
}

pub fn eq_3_40(d: &mut Draw) -> Result<Vec<f64>> {
    laplace_type(d, IncKind::Lower)
}

pub fn eq_3_41(d: &mut Draw) -> Result<Vec<f64>> {
    laplace_type(d, IncKind::Upper)
}

pub fn eq_3_34(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Upper)?;
    let y = d.disk("y", ORIGIN, 0.3);
    let z = d.disk("z", ORIGIN, 0.5);
    Ok(vec![d.resid(ev(&p, y + z), addition_series(&p, y, z, 80))])
}

pub fn eq_3_35(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Upper)?;
    let y = d.disk("y", ORIGIN, 0.6);
    let z = d.disk("z", C64::new(1.0, 0.0), 0.3);
    Ok(vec![d.resid(ev(&p, y * z), multiplication_series(&p, y, z, 80))])
}

fn delta(kappa: usize, a: &M) -> Vec<M> {
    (0..kappa).map(|j| a.shift_re(j as f64).scale_re(1.0 / kappa as f64)).collect()
}

pub fn eq_4_25(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 1, 0, IncKind::Upper)?;
    let k = d.int("k", 1, 2);
    let t = d.real("t", 0.5, 1.5);
    let z = d.disk("z", ORIGIN, 0.3);
    let b = &p.base;
    let (pp, q) = (&b.p, &b.q);
    let lhs = two_sided(0.0, t, pp, q, |u| ev(&p, z * u.powi(k as i32)));
    let rhs = (|| {
        let mut up = b.upper.clone();
        up.extend(delta(k, pp));
        let mut lo = b.lower.clone();
        lo.extend(delta(k, &(pp + q)));
        let ext = rebuild(&p, up, lo, pp.clone(), q.clone())?;
        let v = ev(&ext, z * t.powi(k as i32))?;
        Ok(&(&beta_mat(pp, q)? * &pow(t, &(pp + q).shift_re(-1.0))?) * &v)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_3_37(d: &mut Draw) -> Result<Vec<f64>> {
    let fam = d.family(&[("A1", A_BOX), ("C", SpectralBox::new(0.5, 2.0, -0.3, 0.3)), ("P", P_BOX), ("Q", Q_BOX)])?;
    let x = d.real("x", 1.8, 4.0);
    let t = d.real("t", x - 1.5, x - 0.3);
    let k = d.int("k", 1, 2);
    let z = d.disk("z", ORIGIN, 0.3);
    let (a, cm, pp, q) = (&fam[0], &fam[1], &fam[2], &fam[3]);
    let p = inc(params(vec![a.clone()], vec![], pp.clone(), q.clone())?, x, IncKind::Upper)?;
    let lhs = (|| {
        let coef = &(&rgamma_mat(q)? * &rgamma_mat(cm)?) * &gamma_mat(&(q + cm))?;
        let v = two_sided(t, x, q, cm, |u| ev(&p, z * (u - t).powi(k as i32)))?;
        Ok(&coef * &v)
    })();
    let rhs = (|| {
        let up = [vec![a.clone()], delta(k, q)].concat();
        let lo = delta(k, &(q + cm));
        let ext = rebuild(&p, up, lo, pp.clone(), q.clone())?;
        let v = ev(&ext, z * (x - t).powi(k as i32))?;
        Ok(&pow(x - t, &(q + cm).shift_re(-1.0))? * &v)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_3_44(d: &mut Draw) -> Result<Vec<f64>> {
    let p = draw_inc(d, 2, 1, IncKind::Lower)?;
    let z = d.disk("z", ORIGIN, 0.8);
    let b = &p.base;
    let (a1, a2, b1) = (&b.upper[0], &b.upper[1], &b.lower[0]);
    let lhs = (|| Ok(&(&(a1 - b1)).shift_re(1.0) * &ev(&p, z)?))();
    let rhs = (|| {
        let n = b.dim();
        let b1m = b1.shift_re(-1.0);
        let mut s = M::zeros(n);
        let mut scal = C64::new(1.0, 0.0);
        let mut small = 0;
        for l in 0..400 {
            if l > 0 {
                scal *= z / l as f64;
            }
            let w = regularized(&(&b.p.scale_re(l as f64) + &b.q), p.x, IncKind::Lower)?;
            let common = &pochhammer(a2, l) * &w;
            let first = &(a1 * &pochhammer(&a1.shift_re(1.0), l)) * &pochhammer(b1, l).solve_right(&common)?;
            let second = &(&pochhammer(a1, l) * &b1m) * &pochhammer(&b1m, l).solve_right(&common)?;
            let t = (&first - &second).scale(scal);
            s += &t;
            if t.norm_fro() <= 1e-17 * (1.0 + s.norm_fro()) {
                small += 1;
                if small == 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        Ok(s)
    })();
    Ok(vec![d.resid(lhs, rhs)])
}

fn draw_c(d: &mut Draw, dim_box: SpectralBox) -> Result<M> {
    let c = d.matrix("C", dim_box);
    d.avoid_integers(&c, 0.2)?;
    Ok(c)
}

pub fn eq_3_45(d: &mut Draw) -> Result<Vec<f64>> {
    let c = draw_c(d, SpectralBox::new(0.5, 3.5, -0.5, 0.5))?;
    let k = d.int("k", 0, 5);
    let n = d.int("n", 0, 5);
    let kf = k as f64;
    let nf = n as f64;
    let mc = -&c;
    let lhs = pochhammer(&c.shift_re(1.0 - kf), n);
    let mid = (|| Ok(&gamma_mat(&c.shift_re(1.0 - kf + nf))? * &rgamma_mat(&c.shift_re(1.0 - kf))?))();
    let r_mid = d.resid(Ok(lhs.clone()), mid);
    let printed = (|| {
        let num = &pochhammer(&c.shift_re(1.0), n) * &pochhammer(&mc.shift_re(kf - 1.0), k);
        pochhammer(&mc.shift_re(kf - nf - 1.0), k).solve_right(&num)
    })();
    let corrected = (|| {
        let num = &pochhammer(&c.shift_re(1.0), n) * &pochhammer(&mc, k);
        pochhammer(&mc.shift_re(-nf), k).solve_right(&num)
    })();
    let r_p = d.resid(Ok(lhs.clone()), printed);
    let r_c = d.resid(Ok(lhs), corrected);
    Ok(vec![r_mid.max(r_p), r_mid.max(r_c)])
}

/// `Σ_k c_k(k) t^k / k!` with matrix coefficients, stopped once three
/// consecutive terms are negligible or after `cap` terms.
fn power_sum(n: usize, t: C64, cap: usize, coef: impl Fn(usize) -> Result<M>) -> Result<M> {
    let mut s = M::zeros(n);
    let mut scal = C64::new(1.0, 0.0);
    let mut small = 0;
    for k in 0..cap {
        if k > 0 {
            scal *= t / k as f64;
        }
        let term = coef(k)?.scale(scal);
        s += &term;
        if !s.is_finite() {
            return Err(crate::MgfError::Domain("partial sums overflowed".into()));
        }
        if term.norm_fro() <= 1e-17 * (1.0 + s.norm_fro()) {
            small += 1;
            if small == 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    Ok(s)
}

const SUM_CAP: usize = 90;

fn printed_weight(c: &M, k: usize) -> M {
    pochhammer(&(-c).shift_re(k as f64 - 1.0), k)
}

fn corrected_weight(c: &M, k: usize) -> M {
    pochhammer(&(-c), k)
}

pub fn eq_3_49(d: &mut Draw) -> Result<Vec<f64>> {
    let c = draw_c(d, SpectralBox::DEFAULT)?;
    let t = d.disk("t", ORIGIN, 0.3);
    let n = c.dim();
    let rhs = complex_power(C64::new(1.0, 0.0) - t, &c);
    let printed = power_sum(n, t, SUM_CAP, |k| Ok(printed_weight(&c, k)));
    let corrected = power_sum(n, t, SUM_CAP, |k| Ok(corrected_weight(&c, k)));
    let r_p = d.resid(printed, rhs.clone());
    let r_c = d.resid(corrected, rhs);
    Ok(vec![r_p.max(r_c), r_c])
}

/// Draws `A, C, P, Q` commuting and the scalars for the summation theorems.
fn summation_setup(d: &mut Draw) -> Result<(M, M, M, M, f64, C64, C64)> {
    let fam = d.family(&[("A1", A_BOX), ("C", SpectralBox::new(0.5, 2.5, -0.3, 0.3)), ("P", P_BOX), ("Q", Q_BOX)])?;
    d.avoid_integers(&fam[1], 0.15)?;
    let x = d.real("x", 0.3, 6.0);
    let z = d.disk("z", ORIGIN, 0.5);
    let u = d.disk("u", ORIGIN, 0.3);
    Ok((fam[0].clone(), fam[1].clone(), fam[2].clone(), fam[3].clone(), x, z, u))
}

/// Both forms of the binomial summation over a lower parameter, for a
/// function `f(lower, z)` of the family.
fn binomial_summation(
    d: &mut Draw,
    c: &M,
    u: C64,
    z: C64,
    f: &dyn Fn(&M, C64) -> Result<M>,
) -> Vec<f64> {
    let n = c.dim();
    let one_u = C64::new(1.0, 0.0) - u;
    let lhs = |w: &dyn Fn(usize) -> M| power_sum(n, u, SUM_CAP, |k| Ok(&w(k) * &f(&c.shift_re(1.0 - k as f64), z)?));
    let printed_l = lhs(&|k| printed_weight(c, k));
    let printed_r = (|| Ok(&complex_power(one_u, c)? * &f(&(&id(n) - c), z * one_u)?))();
    let corrected_l = lhs(&|k| corrected_weight(c, k));
    let corrected_r = (|| Ok(&complex_power(one_u, c)? * &f(&c.shift_re(1.0), z * one_u)?))();
    vec![d.resid(printed_l, printed_r), d.resid(corrected_l, corrected_r)]
}

fn inc_summation(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let (a, c, pp, q, x, z, u) = summation_setup(d)?;
    let f = |lower: &M, w: C64| -> Result<M> {
        let p = IncExpParams::new(ParamSet::new(vec![a.clone()], vec![lower.clone()], pp.clone(), q.clone())?, x, kind)?;
        ev(&p, w)
    };
    Ok(binomial_summation(d, &c, u, z, &f))
}

pub fn eq_3_46(d: &mut Draw) -> Result<Vec<f64>> {
    inc_summation(d, IncKind::Lower)
}

pub fn eq_3_47(d: &mut Draw) -> Result<Vec<f64>> {
    inc_summation(d, IncKind::Upper)
}

pub fn eq_3_50(d: &mut Draw) -> Result<Vec<f64>> {
    let (a, c, _, _, _, z, u) = summation_setup(d)?;
    let f = |lower: &M, w: C64| -> Result<M> {
        Ok(eval_pfq(&ParamSet::hypergeometric(vec![a.clone()], vec![lower.clone()])?, w)?.value)
    };
    Ok(binomial_summation(d, &c, u, z, &f))
}

pub fn eq_3_48(d: &mut Draw) -> Result<Vec<f64>> {
    let (a, c, pp, q, x, z, t) = summation_setup(d)?;
    let n = c.dim();
    let lower_of = |lower: M| -> Result<IncExpParams> {
        IncExpParams::new(ParamSet::new(vec![a.clone()], vec![lower], pp.clone(), q.clone())?, x, IncKind::Lower)
    };
    let lhs = |w: &dyn Fn(usize) -> M| {
        power_sum(n, t, SUM_CAP, |k| Ok(&w(k) * &ev(&lower_of(c.shift_re(1.0 - k as f64))?, z)?))
    };
    let rhs = |inner: &dyn Fn(usize, usize) -> M| -> Result<M> {
        let psi = series_terms(&lower_of(c.shift_re(1.0))?, z, 60)?;
        let mut s = M::zeros(n);
        for (m, term) in psi.iter().enumerate() {
            let sm = power_sum(n, t, SUM_CAP, |k| Ok(inner(m, k)))?;
            s += &(term * &sm);
        }
        Ok(s)
    };
    let mc = -&c;
    let printed = d.resid(
        lhs(&|k| printed_weight(&c, k)),
        rhs(&|m, k| pochhammer(&mc.shift_re(k as f64 - m as f64 - 1.0), k)),
    );
    let corrected = d.resid(
        lhs(&|k| corrected_weight(&c, k)),
        rhs(&|m, k| pochhammer(&mc.shift_re(-(m as f64)), k)),
    );
    Ok(vec![printed, corrected])
}

fn psi_explicit(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let p = draw_inc(d, 1, 1, kind)?;
    let c = draw_c(d, SpectralBox::new(0.5, 2.5, -0.3, 0.3))?;
    let kappa = d.int("kappa", 1, 3);
    let pidx = d.int("p", 0, 4);
    let z = d.disk("z", ORIGIN, 0.8);
    let b = &p.base;
    let n = b.dim();
    let head = (-&c).shift_re(1.0 - pidx as f64);
    let members: Vec<M> = (0..kappa)
        .map(|j| head.shift_re(j as f64).scale_re(1.0 / kappa as f64))
        .collect();
    let rhs = (|| {
        let mut s = M::zeros(n);
        let mut scal = C64::new(1.0, 0.0);
        let mut small = 0;
        for l in 0..600 {
            if l > 0 {
                scal *= z / l as f64;
            }
            let mut coef = pochhammer(&b.upper[0], l);
            for m in members.iter().chain(b.lower.iter()) {
                coef = pochhammer(m, l).solve_right(&coef)?;
            }
            let w = regularized(&(&b.p.scale_re(l as f64) + &b.q), p.x, kind)?;
            let t = (&coef * &w).scale(scal);
            s += &t;
            if t.norm_fro() <= 1e-17 * (1.0 + s.norm_fro()) {
                small += 1;
                if small == 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        Ok(s)
    })();
    let lhs = psi_phi_seq(&p, &c, kappa, pidx, z).map(|s| s.value);
    Ok(vec![d.resid(lhs, rhs)])
}

pub fn eq_3_51(d: &mut Draw) -> Result<Vec<f64>> {
    psi_explicit(d, IncKind::Lower)
}

pub fn eq_3_52(d: &mut Draw) -> Result<Vec<f64>> {
    psi_explicit(d, IncKind::Upper)
}

fn sequence_summation(d: &mut Draw, kind: IncKind) -> Result<Vec<f64>> {
    let (a, c, pp, q, x, z, t) = summation_setup(d)?;
    let kappa = d.int("kappa", 1, 2);
    let m = d.int("m", 0, 2);
    let n = c.dim();
    let p = inc(params(vec![a], vec![], pp, q)?, x, kind)?;
    let r = p.base.r();
    let mf = m as f64;
    let lhs = |w: &dyn Fn(usize) -> M| {
        power_sum(n, t, SUM_CAP, |k| Ok(&w(k) * &psi_phi_seq(&p, &c, kappa, m + k, z)?.value))
    };
    let one_t = C64::new(1.0, 0.0) - t;
    let rhs = (|| {
        let v = psi_phi_seq(&p, &c, kappa, m, z * one_t.powi(kappa as i32))?.value;
        Ok(&complex_power(one_t, &(-&c).shift_re(-mf))? * &v)
    })();
    let printed = d.resid(lhs(&|k| pochhammer(&c.shift_re(mf + k as f64 - 1.0), r)), rhs.clone());
    let corrected = d.resid(lhs(&|k| pochhammer(&c.shift_re(mf), k)), rhs);
    Ok(vec![printed, corrected])
}

pub fn eq_3_53(d: &mut Draw) -> Result<Vec<f64>> {
    sequence_summation(d, IncKind::Lower)
}

pub fn eq_3_54(d: &mut Draw) -> Result<Vec<f64>> {
    sequence_summation(d, IncKind::Upper)
}

pub fn eq_3_55(d: &mut Draw) -> Result<Vec<f64>> {
    let c = draw_c(d, SpectralBox::new(0.5, 3.5, -0.5, 0.5))?;
    let p = d.int("p", 0, 4);
    let m = d.int("m", 0, 4);
    let l = d.int("l", 0, 4);
    let kappa = d.int("kappa", 1, 3);
    let (pf, mf) = (p as f64, m as f64);
    let kl = kappa * l;
    let mc = -&c;
    let lhs = pochhammer(&mc.shift_re(1.0 - mf - pf), kl);
    let base = pochhammer(&mc.shift_re(1.0 - mf), kl);
    let printed = (|| {
        let num = &base * &pochhammer(&c.shift_re(mf + pf - 1.0), p);
        pochhammer(&c.shift_re(mf - kl as f64 + pf - 1.0), p).solve_right(&num)
    })();
    let corrected = (|| {
        let num = &base * &pochhammer(&c.shift_re(mf), p);
        pochhammer(&c.shift_re(mf - kl as f64), p).solve_right(&num)
    })();
    let r_p = d.resid(Ok(lhs.clone()), printed);
    let r_c = d.resid(Ok(lhs), corrected);
    Ok(vec![r_p, r_c])
}
