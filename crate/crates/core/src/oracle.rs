//! Independent reference machinery: adaptive quadrature of matrix-valued
//! integrands, finite differences, Cauchy-integral derivatives and scalar
//! reference implementations that share no code with the evaluators.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{MgfError, Result};
use crate::matcore::{real_power, CMatrix};
use crate::C64;

/// Default subdivision cap of [`quad_matrix`].
pub const MAX_SUBDIVISIONS: usize = 200;

/// Width of the analytically integrated piece next to a power singularity.
pub const SINGULAR_EPS: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct QuadResult {
    pub value: CMatrix,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: CMatrix,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval_at<F>(f: &F, t: f64) -> Result<CMatrix>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    let v = f(t)?;
    if !v.is_finite() {
        return Err(MgfError::NonFiniteIntegrand { t });
    }
    Ok(v)
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic applied to
/// each entry; the entrywise maximum is scaled by `n` to bound the 2-norm.
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = eval_at(f, c)?;
    let n = fc.dim();
    let mut vals = Vec::with_capacity(15);
    for j in 0..7 {
        let d = h * XGK[j];
        vals.push((eval_at(f, c - d)?, eval_at(f, c + d)?));
    }
    let mut kron = fc.scale_re(WGK[7]);
    let mut gauss = fc.scale_re(WG[3]);
    for j in 0..7 {
        let s = &vals[j].0 + &vals[j].1;
        kron += &s.scale_re(WGK[j]);
        if j % 2 == 1 {
            gauss += &s.scale_re(WG[j / 2]);
        }
    }
    let mut err: f64 = 0.0;
    for r in 0..n {
        for col in 0..n {
            let mean = kron.get(r, col) * 0.5;
            let mut asc = WGK[7] * (fc.get(r, col) - mean).norm();
            let mut abs = WGK[7] * fc.get(r, col).norm();
            for j in 0..7 {
                let (lo, hi) = (vals[j].0.get(r, col), vals[j].1.get(r, col));
                asc += WGK[j] * ((lo - mean).norm() + (hi - mean).norm());
                abs += WGK[j] * (lo.norm() + hi.norm());
            }
            let (asc, abs) = (asc * h.abs(), abs * h.abs());
            let mut e = ((kron.get(r, col) - gauss.get(r, col)) * h).norm();
            if asc != 0.0 && e != 0.0 {
                e = asc * (200.0 * e / asc).powf(1.5).min(1.0);
            }
            if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
                e = e.max(50.0 * f64::EPSILON * abs);
            }
            err = err.max(e);
        }
    }
    Ok(Segment {
        a,
        b,
        value: kron.scale_re(h),
        error: err * n as f64,
    })
}

/// Adaptive Gauss–Kronrod quadrature of `∫_a^b f(t) dt`, bisecting the panel
/// with the largest error until the total estimate is below
/// `tol · (1 + ‖value‖₂)`.
pub fn quad_matrix<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    quad_matrix_capped(f, a, b, tol, MAX_SUBDIVISIONS)
}

pub fn quad_matrix_capped<F>(f: F, a: f64, b: f64, tol: f64, cap: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(MgfError::Domain(format!("quadrature needs finite a < b, got [{a}, {b}]")));
    }
    let first = gk15(&f, a, b)?;
    let mut total = first.value.clone();
    let mut err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0;
    loop {
        if err <= tol * (1.0 + total.norm2()) {
            break;
        }
        if subdivisions >= cap {
            return Err(MgfError::MaxSubdivisions {
                subdivisions,
                error_estimate: err,
            });
        }
        let worst = heap.pop().expect("heap holds every panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        total = &(&(&total - &worst.value) + &left.value) + &right.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // resum to drop the drift of the running updates
    let n = total.dim();
    let mut value = CMatrix::zeros(n);
    let mut e = 0.0;
    for s in heap.into_sorted_vec() {
        value += &s.value;
        e += s.error;
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: e.max(0.0),
        subdivisions,
    })
}

/// `∫_a^∞ f(t) dt` through `t = a + s/(1−s)`.
pub fn quad_semi_infinite<F>(f: F, a: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    quad_matrix(
        |s: f64| {
            let d = 1.0 - s;
            let t = a + s / d;
            let v = f(t)?;
            if v.is_zero() {
                return Ok(v);
            }
            Ok(v.scale_re(1.0 / (d * d)))
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫_0^b t^{W−I} g(t) dt` for positive stable `W`: the piece on `[0, ε]` is
/// taken as `ε^W W⁻¹ g(0)` and the rest by [`quad_matrix`].
pub fn quad_power_weighted<G>(w: &CMatrix, g: G, b: f64, tol: f64) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<CMatrix>,
{
    let info = crate::matcore::spectral_bounds(w)?;
    if info.small_m <= 0.0 {
        return Err(MgfError::DivergentIntegral(format!(
            "t^(W-I) is not integrable at 0: smallest real part {}",
            info.small_m
        )));
    }
    let eps = SINGULAR_EPS.min(0.5 * b);
    let wm1 = w.shift_re(-1.0);
    let head = &(&real_power(eps, w)? * &w.inverse()?) * &g(0.0)?;
    let rest = quad_matrix(
        |t: f64| Ok(&real_power(t, &wm1)? * &g(t)?),
        eps,
        b,
        tol,
    )?;
    Ok(QuadResult {
        value: &head + &rest.value,
        abs_error_estimate: rest.abs_error_estimate,
        subdivisions: rest.subdivisions,
    })
}

/// Central difference of order 1 (step `max(1e−5, 1e−5|t0|)`) or the
/// five-point second difference (step `max(1e−3, 1e−3|t0|)`).
pub fn finite_diff<F>(f: F, t0: f64, order: u8) -> Result<CMatrix>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    match order {
        1 => {
            let h = 1e-5f64.max(1e-5 * t0.abs());
            Ok((&f(t0 + h)? - &f(t0 - h)?).scale_re(0.5 / h))
        }
        2 => {
            let h = 1e-3f64.max(1e-3 * t0.abs());
            let s = &(&(&f(t0 + h)? + &f(t0 - h)?).scale_re(16.0) - &f(t0).map(|v| v.scale_re(30.0))?)
                - &(&f(t0 + 2.0 * h)? + &f(t0 - 2.0 * h)?);
            Ok(s.scale_re(1.0 / (12.0 * h * h)))
        }
        _ => Err(MgfError::Domain(format!("finite differences of order {order} are not provided"))),
    }
}

/// `f⁽ⁿ⁾(z0)` of a holomorphic matrix function from the trapezoid rule on
/// the circle `|z − z0| = radius`.
pub fn cauchy_derivative<F>(f: F, z0: C64, n: usize, radius: f64, points: usize) -> Result<CMatrix>
where
    F: Fn(C64) -> Result<CMatrix>,
{
    let mut acc: Option<CMatrix> = None;
    for k in 0..points {
        let th = 2.0 * PI * k as f64 / points as f64;
        let e = C64::from_polar(1.0, th);
        let v = f(z0 + e * radius)?.scale(e.powi(-(n as i32)));
        acc = Some(match acc {
            Some(a) => &a + &v,
            None => v,
        });
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let acc = acc.ok_or_else(|| MgfError::Domain("no contour points".into()))?;
    Ok(acc.scale_re(fact / (points as f64 * radius.powi(n as i32))))
}

const BERNOULLI_TERMS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `Γ(z)` for `Re z > 0` by upward shift and the Stirling series.
pub fn ref_gamma(z: C64) -> C64 {
    let mut shift = C64::new(1.0, 0.0);
    let mut w = z;
    while w.norm() < 20.0 || w.re < 10.0 {
        shift *= w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut corr = C64::new(0.0, 0.0);
    let mut p = inv;
    for c in BERNOULLI_TERMS {
        corr += p * c;
        p *= inv2;
    }
    let ln = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + corr;
    ln.exp() / shift
}

/// `Γ(a, x)` for `x ≥ Re a + 1` by backward evaluation of the continued
/// fraction at doubling depths until two depths agree.
fn ref_upper_cf(a: C64, x: f64) -> Result<C64> {
    let eval = |depth: usize| -> C64 {
        let mut tail = C64::new(0.0, 0.0);
        for k in (1..=depth).rev() {
            let kf = k as f64;
            let an = -kf * (kf - a);
            let bn = x + 2.0 * kf + 1.0 - a;
            tail = an / (bn + tail);
        }
        1.0 / (x + 1.0 - a + tail)
    };
    let pre = (a * x.ln() - x).exp();
    let mut prev = eval(16);
    let mut depth = 32;
    while depth <= 1 << 16 {
        let cur = eval(depth);
        if (cur - prev).norm() <= 1e-16 * cur.norm() {
            return Ok(pre * cur);
        }
        prev = cur;
        depth *= 2;
    }
    Err(MgfError::Truncation {
        terms: depth,
        tail_estimate: (eval(depth) - prev).norm(),
    })
}

fn ref_lower_series(a: C64, x: f64) -> Result<C64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    for k in 1..10_000 {
        term *= x / (a + k as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            return Ok((a * x.ln() - x).exp() * sum);
        }
    }
    Err(MgfError::Truncation {
        terms: 10_000,
        tail_estimate: term.norm(),
    })
}

/// Scalar `(γ(a,x), Γ(a,x))`: the power series below `x = Re a + 1`, the
/// continued fraction above.
pub fn scalar_ref_incgamma(a: C64, x: f64) -> Result<(C64, C64)> {
    if !(a.re > 0.0) || !(x >= 0.0) || !x.is_finite() {
        return Err(MgfError::Domain(format!("reference needs Re a > 0 and x ≥ 0, got a={a}, x={x}")));
    }
    let g = ref_gamma(a);
    if x == 0.0 {
        return Ok((C64::new(0.0, 0.0), g));
    }
    if x < a.re + 1.0 {
        let lo = ref_lower_series(a, x)?;
        Ok((lo, g - lo))
    } else {
        let up = ref_upper_cf(a, x)?;
        Ok((g - up, up))
    }
}

/// Partial sum `Σ_{ℓ<terms} ∏(aᵢ)_ℓ / ∏(bⱼ)_ℓ · z^ℓ/ℓ!`.
pub fn scalar_ref_pfq(a: &[C64], b: &[C64], z: C64, terms: usize) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut t = C64::new(1.0, 0.0);
    for l in 0..terms {
        sum += t;
        let lf = l as f64;
        for &ai in a {
            t *= ai + lf;
        }
        for &bj in b {
            t /= bj + lf;
        }
        t *= z / (lf + 1.0);
    }
    sum
}

/// Partial sum of `Σ ∏(aᵢ)_ℓ / ∏(bⱼ)_ℓ · z^ℓ/ℓ! / Γ(ℓp + q)` for `Re q > 0`,
/// `Re p > 0`.
pub fn scalar_ref_rrs(a: &[C64], b: &[C64], p: C64, q: C64, z: C64, terms: usize) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut t = C64::new(1.0, 0.0);
    for l in 0..terms {
        let lf = l as f64;
        sum += t / ref_gamma(p * lf + q);
        for &ai in a {
            t *= ai + lf;
        }
        for &bj in b {
            t /= bj + lf;
        }
        t *= z / (lf + 1.0);
    }
    sum
}
