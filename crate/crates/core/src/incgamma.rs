//! Incomplete gamma functions of a matrix argument.
//!
//! The lower function comes from its two convergent matrix series: the
//! alternating one for `x ≤ 1` and the positive-term one above that. The
//! upper function is `Γ(Q) − γ(Q,x)` for `x ≤ 1`; for larger `x` that
//! difference cancels badly, so the upper function is evaluated as the
//! primary matrix function of the scalar `a ↦ Γ(a,x)`, which is entire in `a`.
//!
//! Every routine works in the Schur basis of `Q`, where all the factors
//! involved are upper triangular and commute.

use crate::error::{MgfError, Result};
use crate::gammamat::{gamma_mat, rgamma, RGamma};
use crate::matcore::{power_fn, schur, CMatrix, ScalarFunction, SchurForm};
use crate::series::{Accumulator, SeriesControl, SeriesResult};
use crate::C64;

/// Above this `x` the lower function uses the positive-term series.
pub const ALTERNATING_LIMIT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IncKind {
    Lower,
    Upper,
}

#[derive(Clone, Debug)]
pub struct IncGammaPair {
    pub lower: CMatrix,
    pub upper: CMatrix,
}

/// Scalar incomplete gamma functions used by the matrix lift.
pub mod scalar {
    use super::*;

    /// `γ(a,x)` by the positive-term series, `x > 0`.
    pub fn lower(a: C64, x: f64) -> C64 {
        let mut term = 1.0 / a;
        let mut sum = term;
        for k in 1..5000 {
            term *= x / (a + k as f64);
            sum += term;
            if term.norm() <= f64::EPSILON * 0.25 * sum.norm() {
                break;
            }
        }
        (a * x.ln() - x).exp() * sum
    }

    /// `Γ(a,x)` for `x > 0`, by continued fraction when `x > Re a + 1` and
    /// by `Γ(a) − γ(a,x)` otherwise.
    pub fn upper(a: C64, x: f64) -> C64 {
        if x <= a.re + 1.0 {
            return 1.0 / rgamma(a) - lower(a, x);
        }
        let tiny = C64::new(1e-300, 0.0);
        let mut b = x + 1.0 - a;
        let mut c = C64::new(1e300, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.norm() < 1e-300 {
                d = tiny;
            }
            c = b + an / c;
            if c.norm() < 1e-300 {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).norm() < f64::EPSILON {
                break;
            }
        }
        (a * x.ln() - x).exp() * h
    }
}

struct UpperScalar {
    x: f64,
}

impl ScalarFunction for UpperScalar {
    fn eval(&self, a: C64) -> C64 {
        scalar::upper(a, self.x)
    }
}

/// `γ(a,x)/Γ(a)` or `Γ(a,x)/Γ(a)`, each computed from whichever of the two
/// incomplete functions is the smaller.
struct RegularizedScalar {
    x: f64,
    kind: IncKind,
}

impl ScalarFunction for RegularizedScalar {
    fn eval(&self, a: C64) -> C64 {
        let lower_small = self.x <= a.re + 1.0;
        let small = if lower_small {
            scalar::lower(a, self.x) * rgamma(a)
        } else {
            scalar::upper(a, self.x) * rgamma(a)
        };
        match (self.kind, lower_small) {
            (IncKind::Lower, true) | (IncKind::Upper, false) => small,
            _ => 1.0 - small,
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(MgfError::Domain(format!("x must be finite and ≥ 0, got {x}")));
    }
    Ok(())
}

fn positive_stable_schur(q: &CMatrix) -> Result<SchurForm> {
    let s = schur(q)?;
    if let Some(z) = s.eigenvalues().into_iter().find(|z| z.re <= 0.0) {
        return Err(MgfError::Domain(format!(
            "Q must be positive stable, eigenvalue {z}"
        )));
    }
    Ok(s)
}

/// `x^T` for triangular `T`.
fn pow_tri(x: f64, t: &SchurForm) -> Result<CMatrix> {
    t.apply_triangular(&power_fn(C64::new(x, 0.0)))
}

fn e(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `γ(Q,x) = e^{−x} x^Q Σ_k x^k [(Q)_{k+1}]⁻¹`, in the Schur basis.
fn positive_series_tri(t: &SchurForm, x: f64, ctl: SeriesControl) -> Result<SeriesResult> {
    let tri = &t.triangular;
    let n = tri.dim();
    let mut acc = Accumulator::new(n, ctl);
    let mut term = tri.solve(&CMatrix::identity(n))?;
    while !acc.push(&term)? {
        let k = acc.terms() as f64;
        term = tri.shift_re(k).solve(&term.scale_re(x))?;
    }
    let pre = pow_tri(x, t)?.scale_re((-x).exp());
    let mut r = acc.finish(None);
    r.value = &pre * &r.value;
    Ok(r)
}

/// `γ(Q,x) = x^Q Σ_k (−x)^k/k! (Q+kI)⁻¹`, in the Schur basis.
fn alternating_series_tri(t: &SchurForm, x: f64, ctl: SeriesControl) -> Result<SeriesResult> {
    let tri = &t.triangular;
    let n = tri.dim();
    let mut acc = Accumulator::new(n, ctl);
    let mut coef = 1.0f64;
    loop {
        let k = acc.terms();
        let term = tri.shift_re(k as f64).solve(&CMatrix::scalar(n, e(coef)))?;
        if acc.push(&term)? {
            break;
        }
        coef *= -x / (k + 1) as f64;
    }
    let pre = pow_tri(x, t)?;
    let mut r = acc.finish(None);
    r.value = &pre * &r.value;
    Ok(r)
}

fn lower_tri(t: &SchurForm, x: f64, ctl: SeriesControl) -> Result<SeriesResult> {
    if x == 0.0 {
        let n = t.dim();
        return Ok(SeriesResult {
            value: CMatrix::zeros(n),
            terms_used: 0,
            tail_estimate: 0.0,
            convergence: None,
        });
    }
    if x <= ALTERNATING_LIMIT {
        alternating_series_tri(t, x, ctl)
    } else {
        positive_series_tri(t, x, ctl)
    }
}

fn upper_tri(t: &SchurForm, x: f64, ctl: SeriesControl) -> Result<CMatrix> {
    if x <= ALTERNATING_LIMIT {
        let g = gamma_mat(&t.triangular)?;
        Ok(&g - &lower_tri(t, x, ctl)?.value)
    } else {
        t.apply_triangular(&UpperScalar { x })
    }
}

/// Lower incomplete gamma `γ(Q,x)` for positive-stable `Q` and `x ≥ 0`.
pub fn lower_inc_gamma(q: &CMatrix, x: f64) -> Result<CMatrix> {
    Ok(lower_inc_gamma_with(q, x, SeriesControl::default())?.value)
}

pub fn lower_inc_gamma_with(q: &CMatrix, x: f64, ctl: SeriesControl) -> Result<SeriesResult> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    let mut r = lower_tri(&t, x, ctl)?;
    r.value = t.restore(&r.value);
    Ok(r)
}

/// Upper incomplete gamma `Γ(Q,x)` for positive-stable `Q` and `x ≥ 0`.
pub fn upper_inc_gamma(q: &CMatrix, x: f64) -> Result<CMatrix> {
    upper_inc_gamma_with(q, x, SeriesControl::default())
}

pub fn upper_inc_gamma_with(q: &CMatrix, x: f64, ctl: SeriesControl) -> Result<CMatrix> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    Ok(t.restore(&upper_tri(&t, x, ctl)?))
}

pub fn inc_gamma_pair(q: &CMatrix, x: f64) -> Result<IncGammaPair> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    let ctl = SeriesControl::default();
    Ok(IncGammaPair {
        lower: t.restore(&lower_tri(&t, x, ctl)?.value),
        upper: t.restore(&upper_tri(&t, x, ctl)?),
    })
}

/// The positive-term series for `γ(Q,x)`, whatever the size of `x`.
pub fn lower_series_positive(q: &CMatrix, x: f64) -> Result<CMatrix> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    Ok(t.restore(&positive_series_tri(&t, x, SeriesControl::default())?.value))
}

/// The alternating series for `γ(Q,x)`, whatever the size of `x`.
pub fn lower_series_alternating(q: &CMatrix, x: f64) -> Result<CMatrix> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    Ok(t.restore(&alternating_series_tri(&t, x, SeriesControl::default())?.value))
}

/// `γ(M,x) Γ⁻¹(M)` or `Γ(M,x) Γ⁻¹(M)`, lifted from the scalar ratio so that
/// the large factors `γ` and `Γ⁻¹` never meet as matrices.
pub fn regularized(m: &CMatrix, x: f64, kind: IncKind) -> Result<CMatrix> {
    check_x(x)?;
    let t = positive_stable_schur(m)?;
    let n = t.dim();
    let v = match kind {
        IncKind::Lower if x == 0.0 => CMatrix::zeros(n),
        IncKind::Upper if x == 0.0 => CMatrix::identity(n),
        _ => t.apply_triangular(&RegularizedScalar { x, kind })?,
    };
    Ok(t.restore(&v))
}

/// Entire function `γ*(Q,x) = e^{−x} Σ_k x^k Γ⁻¹(Q+(k+1)I)`.
pub fn gamma_star(q: &CMatrix, x: f64) -> Result<CMatrix> {
    check_x(x)?;
    let t = schur(q)?;
    let n = t.dim();
    let mut acc = Accumulator::new(n, SeriesControl::default());
    let mut xk = 1.0f64;
    loop {
        let k = acc.terms();
        let r = t.shifted(e((k + 1) as f64)).apply_triangular(&RGamma)?;
        if acc.push(&r.scale_re(xk))? {
            break;
        }
        xk *= x;
    }
    Ok(t.restore(&acc.finish(None).value.scale_re((-x).exp())))
}

/// `γ*(Q,x) = Γ⁻¹(Q) Σ_k (−x)^k/k! (Q+kI)⁻¹`; needs `Q` free of
/// nonpositive-integer eigenvalues.
pub fn gamma_star_alternating(q: &CMatrix, x: f64) -> Result<CMatrix> {
    check_x(x)?;
    let t = schur(q)?;
    let tri = &t.triangular;
    let n = t.dim();
    let mut acc = Accumulator::new(n, SeriesControl::default());
    let mut coef = 1.0f64;
    loop {
        let k = acc.terms();
        let term = tri.shift_re(k as f64).solve(&CMatrix::scalar(n, e(coef)))?;
        if acc.push(&term)? {
            break;
        }
        coef *= -x / (k + 1) as f64;
    }
    let r = &t.apply_triangular(&RGamma)? * &acc.finish(None).value;
    Ok(t.restore(&r))
}

/// Incomplete Pochhammer symbol `γ(Q+nI,x) Γ⁻¹(Q)` or `Γ(Q+nI,x) Γ⁻¹(Q)`.
pub fn inc_pochhammer(q: &CMatrix, x: f64, n: usize, kind: IncKind) -> Result<CMatrix> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    let tn = t.shifted(e(n as f64));
    let ctl = SeriesControl::default();
    let g = match kind {
        IncKind::Lower => lower_tri(&tn, x, ctl)?.value,
        IncKind::Upper => upper_tri(&tn, x, ctl)?,
    };
    Ok(t.restore(&(&g * &t.apply_triangular(&RGamma)?)))
}

/// `x^Q e^{−x} Σ_{r<n} (Q+(r+1)I)_{n−r−1} x^r`, the correction in the
/// shift relations, in the Schur basis.
fn shift_correction(t: &SchurForm, x: f64, n: usize) -> Result<CMatrix> {
    let tri = &t.triangular;
    let dim = t.dim();
    let mut sum = CMatrix::zeros(dim);
    for r in 0..n {
        let mut p = CMatrix::identity(dim).scale_re(x.powi(r as i32));
        for j in r + 1..n {
            p = &p * &tri.shift_re(j as f64);
        }
        sum += &p;
    }
    Ok(&pow_tri(x, t)?.scale_re((-x).exp()) * &sum)
}

/// `γ(Q+nI,x)` from `γ(Q,x)` by the upward shift relation.
pub fn shifted_lower(q: &CMatrix, x: f64, n: usize) -> Result<CMatrix> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    let g = lower_tri(&t, x, SeriesControl::default())?.value;
    let qn = crate::gammamat::pochhammer(&t.triangular, n);
    let v = &(&qn * &g) - &shift_correction(&t, x, n)?;
    Ok(t.restore(&v))
}

/// `Γ(Q+nI,x)` from `Γ(Q,x)` by the upward shift relation.
pub fn shifted_upper(q: &CMatrix, x: f64, n: usize) -> Result<CMatrix> {
    check_x(x)?;
    let t = positive_stable_schur(q)?;
    let g = upper_tri(&t, x, SeriesControl::default())?;
    let qn = crate::gammamat::pochhammer(&t.triangular, n);
    let v = &(&qn * &g) + &shift_correction(&t, x, n)?;
    Ok(t.restore(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammamat::gamma;
    use crate::matcore::residual;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample() -> CMatrix {
        CMatrix::from_rows(2, &[c(1.3, 0.2), c(0.4, -0.1), c(0.2, 0.3), c(2.2, -0.4)]).unwrap()
    }

    #[test]
    fn scalar_half_order_values() {
        // γ(1/2, x) = √π erf(√x); erf(1) = 0.8427007929497149
        let v = scalar::lower(c(0.5, 0.0), 1.0);
        assert!((v.re - std::f64::consts::PI.sqrt() * 0.842_700_792_949_714_9).abs() < 1e-15);
        // Γ(1, x) = e^{-x}
        let u = scalar::upper(c(1.0, 0.0), 7.5);
        assert!((u.re - (-7.5f64).exp()).abs() < 1e-18);
        let u = scalar::upper(c(1.0, 0.0), 0.5);
        assert!((u.re - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn decomposition_holds() {
        let q = sample();
        let g = gamma_mat(&q).unwrap();
        for x in [0.0, 0.3, 1.0, 1.7, 6.0, 25.0] {
            let p = inc_gamma_pair(&q, x).unwrap();
            assert!(residual(&(&p.lower + &p.upper), &g) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn both_series_agree() {
        let q = sample();
        for x in [0.2, 1.0, 2.5] {
            let a = lower_series_positive(&q, x).unwrap();
            let b = lower_series_alternating(&q, x).unwrap();
            assert!(residual(&a, &b) < 1e-13);
        }
    }

    #[test]
    fn gamma_star_series_agree_and_reduce() {
        let q = sample();
        for x in [0.0, 0.5, 2.0] {
            let a = gamma_star(&q, x).unwrap();
            let b = gamma_star_alternating(&q, x).unwrap();
            assert!(residual(&a, &b) < 1e-13);
        }
        // scalar check: γ*(1,x) = (1 − e^{−x})/x
        let one = CMatrix::identity(1);
        let v = gamma_star(&one, 2.0).unwrap().get(0, 0).re;
        assert!((v - (1.0 - (-2.0f64).exp()) / 2.0).abs() < 1e-15);
        // entire: defined at a pole of Γ
        let m = CMatrix::scalar(1, c(-1.0, 0.0));
        let v = gamma_star(&m, 0.7).unwrap().get(0, 0);
        // γ*(−1, x) = x
        assert!((v - 0.7).norm() < 1e-14);
    }

    #[test]
    fn shift_relations() {
        let q = sample();
        for n in 0..4 {
            let qn = q.shift_re(n as f64);
            for x in [0.4, 3.0] {
                let l = shifted_lower(&q, x, n).unwrap();
                assert!(residual(&l, &lower_inc_gamma(&qn, x).unwrap()) < 1e-13);
                let u = shifted_upper(&q, x, n).unwrap();
                assert!(residual(&u, &upper_inc_gamma(&qn, x).unwrap()) < 1e-13);
            }
        }
    }

    #[test]
    fn regularized_pair_sums_to_identity() {
        let q = sample();
        for x in [0.5, 4.0] {
            let a = regularized(&q, x, IncKind::Lower).unwrap();
            let b = regularized(&q, x, IncKind::Upper).unwrap();
            assert!(residual(&(&a + &b), &CMatrix::identity(2)) < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_domain() {
        let q = sample();
        assert!(lower_inc_gamma(&q, -1.0).is_err());
        let neg = CMatrix::scalar(1, c(-0.5, 0.0));
        assert!(matches!(lower_inc_gamma(&neg, 1.0), Err(MgfError::Domain(_))));
        let _ = gamma(c(1.0, 0.0));
    }
}
