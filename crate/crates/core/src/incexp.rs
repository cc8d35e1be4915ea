//! Incomplete exponential matrix functions `e((x,u);Q)`, `E((x,u);Q)` and
//! the generalized families `ᵣeₛ`, `ᵣEₛ`.
//!
//! The generalized series weight each hypergeometric coefficient with the
//! regularized incomplete gamma `γ(ℓP+Q,x) Γ⁻¹(ℓP+Q)` (lower kind) or
//! `Γ(ℓP+Q,x) Γ⁻¹(ℓP+Q)` (upper kind).

use crate::error::{MgfError, Result};
use crate::gammamat::{pochhammer, pole_distance, POLE_TOL};
use crate::hyper::{
    classify_pfq, classify_rrs, sum_weighted, weighted_terms, ConvergenceClass, ParamSet,
};
use crate::incgamma::regularized;
pub use crate::incgamma::IncKind;
use crate::matcore::{schur, spectral_info, CMatrix};
use crate::series::{Accumulator, SeriesControl, SeriesResult};
use crate::C64;

/// Parameters of `ᵣeₛ(x,P,Q;z)` / `ᵣEₛ(x,P,Q;z)`.
#[derive(Clone, Debug)]
pub struct IncExpParams {
    pub base: ParamSet,
    pub x: f64,
    pub kind: IncKind,
}

impl IncExpParams {
    pub fn new(base: ParamSet, x: f64, kind: IncKind) -> Result<Self> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(MgfError::Domain(format!("x must be finite and ≥ 0, got {x}")));
        }
        for (name, m) in [("P", &base.p), ("Q", &base.q)] {
            let info = spectral_info(schur(m)?.eigenvalues());
            if info.small_m <= 0.0 {
                return Err(MgfError::Domain(format!(
                    "{name} must be positive stable, smallest real part {}",
                    info.small_m
                )));
            }
        }
        Ok(IncExpParams { base, x, kind })
    }

    /// Same function with other parameters.
    pub fn with_base(&self, base: ParamSet) -> Result<Self> {
        IncExpParams::new(base, self.x, self.kind)
    }
}

/// Convergence region of the series.
///
/// The lower kind decays like `ᵣRₛ` and inherits its rule. In the upper kind
/// the factor `Γ(ℓP+Q,x) Γ⁻¹(ℓP+Q)` tends to `I`, so the series behaves like
/// `ᵣFₛ` and takes that rule instead.
pub fn classify_res(params: &IncExpParams) -> Result<ConvergenceClass> {
    match params.kind {
        IncKind::Lower => classify_rrs(&params.base),
        IncKind::Upper => classify_pfq(&params.base),
    }
}

fn e_series(q: &CMatrix, x: f64, u: C64, kind: IncKind, ctl: SeriesControl) -> Result<SeriesResult> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(MgfError::Domain(format!("x must be finite and ≥ 0, got {x}")));
    }
    let t = schur(q)?;
    let tri = &t.triangular;
    let n = q.dim();
    let mut acc = Accumulator::new(n, ctl);
    let mut coef = C64::new(1.0, 0.0);
    loop {
        let k = acc.terms();
        let g = regularized(&tri.shift_re(k as f64), x, kind)?;
        if acc.push(&g.scale(coef))? {
            break;
        }
        coef *= u / (k + 1) as f64;
    }
    let mut r = acc.finish(None);
    r.value = t.restore(&r.value);
    Ok(r)
}

/// `e((x,u);Q) = Σ γ(Q+nI,x) Γ⁻¹(Q+nI) uⁿ/n!`.
pub fn eval_e(q: &CMatrix, x: f64, u: C64) -> Result<SeriesResult> {
    e_series(q, x, u, IncKind::Lower, SeriesControl::default())
}

/// `E((x,u);Q) = Σ Γ(Q+nI,x) Γ⁻¹(Q+nI) uⁿ/n!`.
pub fn eval_big_e(q: &CMatrix, x: f64, u: C64) -> Result<SeriesResult> {
    e_series(q, x, u, IncKind::Upper, SeriesControl::default())
}

pub fn eval_e_with(q: &CMatrix, x: f64, u: C64, kind: IncKind, ctl: SeriesControl) -> Result<SeriesResult> {
    e_series(q, x, u, kind, ctl)
}

fn weight_fn(x: f64, kind: IncKind) -> impl Fn(usize, &ParamSet) -> Result<CMatrix> {
    move |l, ps| regularized(&(&ps.p.scale_re(l as f64) + &ps.q), x, kind)
}

/// `ᵣeₛ` or `ᵣEₛ` at `z`, by kind.
pub fn eval_res(params: &IncExpParams, z: C64) -> Result<SeriesResult> {
    eval_res_with(params, z, SeriesControl::default())
}

pub fn eval_res_with(params: &IncExpParams, z: C64, ctl: SeriesControl) -> Result<SeriesResult> {
    let class = classify_res(params)?;
    class.check(z)?;
    sum_weighted(
        &params.base,
        z,
        None,
        ctl,
        Some(class),
        weight_fn(params.x, params.kind),
    )
}

/// The first `count` terms `Ψ_ℓ(z)` (lower kind) or `Ω_ℓ(z)` (upper kind).
pub fn series_terms(params: &IncExpParams, z: C64, count: usize) -> Result<Vec<CMatrix>> {
    weighted_terms(&params.base, z, count, weight_fn(params.x, params.kind))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftTarget {
    Upper(usize),
    Lower(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    Up,
    Down,
}

fn near_integer_at_most(m: &CMatrix, bound: i64) -> Result<Option<C64>> {
    for z in schur(m)?.eigenvalues() {
        let k = z.re.round();
        if k as i64 <= bound && (z - k).norm() <= POLE_TOL {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

fn invalid(what: &str, z: C64) -> MgfError {
    MgfError::InvalidShift(format!("{what}: eigenvalue {z}"))
}

/// Shifted parameter set `A_i ± nI` or `B_j ± nI`.
fn shifted_params(
    base: &ParamSet,
    target: ShiftTarget,
    dir: ShiftDirection,
    n: usize,
) -> Result<ParamSet> {
    let d = match dir {
        ShiftDirection::Up => n as f64,
        ShiftDirection::Down => -(n as f64),
    };
    let mut upper = base.upper.clone();
    let mut lower = base.lower.clone();
    match target {
        ShiftTarget::Upper(i) => {
            let a = upper
                .get_mut(i)
                .ok_or_else(|| MgfError::InvalidShift(format!("no upper parameter {i}")))?;
            *a = a.shift_re(d);
        }
        ShiftTarget::Lower(j) => {
            let b = lower
                .get_mut(j)
                .ok_or_else(|| MgfError::InvalidShift(format!("no lower parameter {j}")))?;
            *b = b.shift_re(d);
        }
    }
    ParamSet::new(upper, lower, base.p.clone(), base.q.clone()).map_err(|e| match e {
        MgfError::Pole { eigenvalue } => invalid("shifted lower parameter hits a pole", eigenvalue),
        other => other,
    })
}

/// Contiguous shift of one parameter by `n`, computed from the unshifted
/// terms `Ψ_ℓ` with the weights of the contiguous relations.
pub fn shift_param(
    params: &IncExpParams,
    target: ShiftTarget,
    dir: ShiftDirection,
    n: usize,
    z: C64,
) -> Result<SeriesResult> {
    if n == 0 {
        return eval_res(params, z);
    }
    let base = &params.base;
    if !base.is_commuting() {
        return Err(MgfError::Commutativity(
            "contiguous relations need commuting parameters".into(),
        ));
    }
    let shifted = params.with_base(shifted_params(base, target, dir, n)?)?;
    let class = classify_res(&shifted)?;
    class.check(z)?;
    let dim = base.dim();
    let nn = n as i64;
    let (m, is_upper) = match target {
        ShiftTarget::Upper(i) => (base.upper[i].clone(), true),
        ShiftTarget::Lower(j) => (base.lower[j].clone(), false),
    };
    // validity of the factors that get inverted
    match (is_upper, dir) {
        (true, ShiftDirection::Up) => {
            if let Some(z) = near_integer_at_most(&m.scale_re(-1.0), nn - 1)? {
                if z.re <= 0.0 {
                    return Err(invalid("A + (k-1)I is singular", -z));
                }
            }
        }
        (true, ShiftDirection::Down) => {
            if let Some(z) = near_integer_at_most(&m, nn)? {
                return Err(invalid("A + (l-k)I is singular", z));
            }
        }
        (false, ShiftDirection::Down) => {
            if let Some(z) = near_integer_at_most(&m, nn)? {
                return Err(invalid("B - kI is singular", z));
            }
        }
        (false, ShiftDirection::Up) => {}
    }
    let id = CMatrix::identity(dim);
    let mut pre = id.clone();
    for k in 1..=n {
        let kf = k as f64;
        pre = match (is_upper, dir) {
            (true, ShiftDirection::Up) => m.shift_re(kf - 1.0).solve(&pre)?,
            (true, ShiftDirection::Down) => &pre * &m.shift_re(-kf),
            (false, ShiftDirection::Up) => &pre * &m.shift_re(kf - 1.0),
            (false, ShiftDirection::Down) => m.shift_re(-kf).solve(&pre)?,
        };
    }
    let (x, kind) = (params.x, params.kind);
    let pick = move |ps: &ParamSet| -> CMatrix {
        match target {
            ShiftTarget::Upper(i) => ps.upper[i].clone(),
            ShiftTarget::Lower(j) => ps.lower[j].clone(),
        }
    };
    let mut r = sum_weighted(base, z, None, SeriesControl::default(), Some(class), |l, ps| {
        let m = pick(ps);
        let lf = l as f64;
        let mut w = CMatrix::identity(m.dim());
        for k in 1..=n {
            let kf = k as f64;
            w = match (is_upper, dir) {
                (true, ShiftDirection::Up) => &w * &m.shift_re(lf + kf - 1.0),
                (true, ShiftDirection::Down) => m.shift_re(lf - kf).solve(&w)?,
                (false, ShiftDirection::Up) => m.shift_re(lf + kf - 1.0).solve(&w)?,
                (false, ShiftDirection::Down) => &w * &m.shift_re(lf - kf),
            };
        }
        let g = regularized(&(&ps.p.scale_re(lf) + &ps.q), x, kind)?;
        Ok(&w * &g)
    })?;
    r.value = &pre * &r.value;
    Ok(r)
}

/// Parameters `A + nI; B + nI; P, nP + Q`.
fn derivative_params(params: &IncExpParams, n: usize) -> Result<IncExpParams> {
    let b = &params.base;
    let nf = n as f64;
    let base = ParamSet::new(
        b.upper.iter().map(|a| a.shift_re(nf)).collect(),
        b.lower.iter().map(|m| m.shift_re(nf)).collect(),
        b.p.clone(),
        &b.p.scale_re(nf) + &b.q,
    )?;
    params.with_base(base)
}

/// `∏(Aᵢ)_n ∏[(Bⱼ)_n]⁻¹`.
fn pochhammer_ratio(base: &ParamSet, n: usize) -> Result<CMatrix> {
    let mut c = CMatrix::identity(base.dim());
    for a in &base.upper {
        c = &c * &pochhammer(a, n);
    }
    for b in &base.lower {
        c = pochhammer(b, n).solve_right(&c)?;
    }
    Ok(c)
}

/// `dⁿ/dzⁿ` of `ᵣeₛ` / `ᵣEₛ`, as a coefficient times the series with
/// parameters shifted by `n`.
pub fn derivative_z(params: &IncExpParams, z: C64, n: usize) -> Result<CMatrix> {
    let base = &params.base;
    if base.r() + base.s() >= 2 && !base.is_commuting() {
        return Err(MgfError::Commutativity(
            "z-derivative formula needs commuting parameters".into(),
        ));
    }
    let shifted = derivative_params(params, n)?;
    let v = eval_res(&shifted, z)?.value;
    Ok(&pochhammer_ratio(base, n)? * &v)
}

const OUTER_CAP: usize = 80;

fn outer_sum(
    params: &IncExpParams,
    terms: usize,
    coef: C64,
    y: C64,
) -> Result<CMatrix> {
    if !params.base.is_commuting() {
        return Err(MgfError::Commutativity(
            "addition and multiplication formulas need commuting parameters".into(),
        ));
    }
    let terms = terms.clamp(1, OUTER_CAP);
    let dim = params.base.dim();
    let mut sum = CMatrix::zeros(dim);
    let mut scal = C64::new(1.0, 0.0);
    let mut last = [f64::INFINITY; 3];
    for l in 0..terms {
        if l > 0 {
            scal *= coef / l as f64;
        }
        let shifted = derivative_params(params, l)?;
        let t = (&pochhammer_ratio(&params.base, l)? * &eval_res(&shifted, y)?.value).scale(scal);
        last = [last[1], last[2], t.norm_fro()];
        sum += &t;
        if last.iter().all(|&v| v <= f64::EPSILON * sum.norm_fro()) {
            break;
        }
    }
    let [a, b, c] = last;
    let r = if terms >= 3 && a > 0.0 && b > 0.0 {
        (c / b).max(b / a)
    } else {
        1.0
    };
    let tail = if c == 0.0 {
        0.0
    } else if r < 1.0 {
        c * r / (1.0 - r)
    } else {
        c
    };
    if tail > 1e-10 * (1.0 + sum.norm_fro()) {
        return Err(MgfError::Truncation {
            terms,
            tail_estimate: tail,
        });
    }
    Ok(sum)
}

/// Partial sum of the expansion of the series at `y + z` around `y`.
pub fn addition_series(params: &IncExpParams, y: C64, z: C64, terms: usize) -> Result<CMatrix> {
    outer_sum(params, terms, z, y)
}

/// Partial sum of the expansion of the series at `y·z` around `y`.
pub fn multiplication_series(
    params: &IncExpParams,
    y: C64,
    z: C64,
    terms: usize,
) -> Result<CMatrix> {
    outer_sum(params, terms, y * (z - 1.0), y)
}

/// The `κ` parameters `A/κ, (A+I)/κ, …, (A+(κ−1)I)/κ`.
#[derive(Clone, Debug)]
pub struct DeltaArray {
    pub kappa: usize,
    pub a: CMatrix,
    pub members: Vec<CMatrix>,
}

impl DeltaArray {
    pub fn new(kappa: usize, a: &CMatrix) -> Result<Self> {
        if kappa == 0 {
            return Err(MgfError::Domain("Δ(κ, A) needs κ ≥ 1".into()));
        }
        let k = kappa as f64;
        let members = (0..kappa).map(|j| a.shift_re(j as f64).scale_re(1.0 / k)).collect();
        Ok(DeltaArray {
            kappa,
            a: a.clone(),
            members,
        })
    }
}

/// `Ψ_p^{(C,κ)}(z)` (lower kind) or `Φ_p^{(C,κ)}(z)` (upper kind): the series
/// with `Δ(κ, (1−p)I − C)` placed before the lower parameters.
pub fn psi_phi_seq(
    params: &IncExpParams,
    c: &CMatrix,
    kappa: usize,
    p: usize,
    z: C64,
) -> Result<SeriesResult> {
    let extended = psi_phi_params(params, c, kappa, p)?;
    eval_res(&extended, z)
}

/// Parameters of `Ψ_p^{(C,κ)}` / `Φ_p^{(C,κ)}`.
pub fn psi_phi_params(
    params: &IncExpParams,
    c: &CMatrix,
    kappa: usize,
    p: usize,
) -> Result<IncExpParams> {
    let head = (-c).shift_re(1.0 - p as f64);
    let delta = DeltaArray::new(kappa, &head)?;
    for m in &delta.members {
        for z in schur(m)?.eigenvalues() {
            if pole_distance(z) <= POLE_TOL {
                return Err(invalid("Δ member is not a valid lower parameter", z));
            }
        }
    }
    let b = &params.base;
    let mut lower = delta.members;
    lower.extend(b.lower.iter().cloned());
    params.with_base(ParamSet::new(b.upper.clone(), lower, b.p.clone(), b.q.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::eval_pfq;
    use crate::matcore::residual;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn q2() -> CMatrix {
        CMatrix::from_rows(2, &[c(1.3, 0.2), c(0.4, -0.1), c(0.2, 0.3), c(2.2, -0.4)]).unwrap()
    }

    #[test]
    fn e_plus_big_e_is_exponential() {
        let q = q2();
        let u = c(0.7, -0.4);
        for x in [0.0, 0.6, 3.5] {
            let s = &eval_e(&q, x, u).unwrap().value + &eval_big_e(&q, x, u).unwrap().value;
            assert!(residual(&s, &CMatrix::scalar(2, u.exp())) < 1e-13, "x={x}");
        }
        let z = eval_big_e(&CMatrix::identity(1), 0.0, c(1.0, 0.0)).unwrap().value;
        assert!((z.get(0, 0) - std::f64::consts::E).norm() < 1e-15);
    }

    #[test]
    fn decomposition_matches_pfq() {
        let a = CMatrix::from_rows(2, &[c(0.8, 0.1), c(0.3, 0.0), c(-0.2, 0.1), c(1.1, 0.0)])
            .unwrap();
        let b = CMatrix::from_rows(2, &[c(1.9, 0.0), c(0.1, 0.2), c(0.3, 0.0), c(2.4, -0.3)])
            .unwrap();
        let base = ParamSet::new(vec![a.clone()], vec![b.clone()], q2(), q2().shift_re(0.5))
            .unwrap();
        let z = c(0.6, 0.2);
        let lo = IncExpParams::new(base.clone(), 1.7, IncKind::Lower).unwrap();
        let up = IncExpParams::new(base, 1.7, IncKind::Upper).unwrap();
        let s = &eval_res(&lo, z).unwrap().value + &eval_res(&up, z).unwrap().value;
        let f = eval_pfq(&ParamSet::hypergeometric(vec![a], vec![b]).unwrap(), z)
            .unwrap()
            .value;
        assert!(residual(&s, &f) < 1e-12);
    }

    #[test]
    fn delta_array_members() {
        let a = q2();
        let d = DeltaArray::new(2, &a).unwrap();
        assert_eq!(d.members[0], a.scale_re(0.5));
        assert_eq!(d.members[1], a.shift_re(1.0).scale_re(0.5));
    }

    #[test]
    fn zero_shift_is_identity() {
        let base = ParamSet::new(vec![q2()], vec![], q2(), q2()).unwrap();
        let p = IncExpParams::new(base, 1.0, IncKind::Lower).unwrap();
        let a = shift_param(&p, ShiftTarget::Upper(0), ShiftDirection::Up, 0, c(0.3, 0.0))
            .unwrap()
            .value;
        assert_eq!(a, eval_res(&p, c(0.3, 0.0)).unwrap().value);
    }
}
