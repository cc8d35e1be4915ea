//! Shared pieces of the checkers: quadrature wrappers, boxes, parameter
//! builders and a few classical functions built only from hypergeometric
//! series.

use crate::error::{MgfError, Result};
use crate::gammamat::{gamma_mat, rgamma_mat};
use crate::hyper::{eval_pfq, ParamSet};
use crate::incexp::{IncExpParams, IncKind};
use crate::matcore::{real_power, spectral_bounds, CMatrix};
use crate::oracle::{quad_matrix, quad_power_weighted, quad_semi_infinite};
use crate::C64;

use super::draw::{Draw, SpectralBox};

pub const QTOL: f64 = 1e-11;

pub const A_BOX: SpectralBox = SpectralBox::new(0.5, 2.0, -0.5, 0.5);
pub const B_BOX: SpectralBox = SpectralBox::new(1.5, 3.5, -0.5, 0.5);
pub const P_BOX: SpectralBox = SpectralBox::new(0.7, 1.5, -0.25, 0.25);
pub const Q_BOX: SpectralBox = SpectralBox::new(0.5, 2.5, -0.5, 0.5);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn worst(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
}

pub fn pow(x: f64, m: &CMatrix) -> Result<CMatrix> {
    real_power(x, m)
}

pub fn quad(f: impl Fn(f64) -> Result<CMatrix>, a: f64, b: f64) -> Result<CMatrix> {
    Ok(quad_matrix(f, a, b, QTOL)?.value)
}

pub fn semi_inf(f: impl Fn(f64) -> Result<CMatrix>, a: f64) -> Result<CMatrix> {
    Ok(quad_semi_infinite(f, a, QTOL)?.value)
}

/// `∫_0^b t^{W−I} g(t) dt`.
pub fn weighted(w: &CMatrix, g: impl Fn(f64) -> Result<CMatrix>, b: f64) -> Result<CMatrix> {
    Ok(quad_power_weighted(w, g, b, QTOL)?.value)
}

/// `∫_a^b (u−a)^{L−I} (b−u)^{R−I} h(u) du` for commuting `L`, `R` and `h`,
/// split at the midpoint so each end carries one power singularity.
pub fn two_sided(
    a: f64,
    b: f64,
    l: &CMatrix,
    r: &CMatrix,
    h: impl Fn(f64) -> Result<CMatrix>,
) -> Result<CMatrix> {
    let len = b - a;
    let lm = l.shift_re(-1.0);
    let rm = r.shift_re(-1.0);
    let left = weighted(l, |v| Ok(&pow(len - v, &rm)? * &h(a + v)?), 0.5 * len)?;
    let right = weighted(r, |v| Ok(&pow(len - v, &lm)? * &h(b - v)?), 0.5 * len)?;
    Ok(&left + &right)
}

/// Smallest real part of the spectrum.
pub fn small_m(m: &CMatrix) -> Result<f64> {
    Ok(spectral_bounds(m)?.small_m)
}

/// Kummer's function `Φ(A;B;z)` for commuting `A`, `B`.
pub fn kummer(a: &CMatrix, b: &CMatrix, z: C64) -> Result<CMatrix> {
    Ok(eval_pfq(&ParamSet::hypergeometric(vec![a.clone()], vec![b.clone()])?, z)?.value)
}

/// Tricomi's function through the connection formula
/// `U(A;B;x) = Γ(I−B)Γ⁻¹(A−B+I)Φ(A;B;x) + Γ(B−I)Γ⁻¹(A)x^{I−B}Φ(A−B+I;2I−B;x)`,
/// for commuting `A`, `B` with `B` free of integer eigenvalues.
pub fn tricomi(a: &CMatrix, b: &CMatrix, x: f64) -> Result<CMatrix> {
    let n = a.dim();
    let id = CMatrix::identity(n);
    let one_b = &id - b;
    let amb1 = &(a - b) + &id;
    let t1 = &(&gamma_mat(&one_b)? * &rgamma_mat(&amb1)?) * &kummer(a, b, c(x, 0.0))?;
    let two_b = one_b.shift_re(1.0);
    let t2 = &(&(&gamma_mat(&b.shift_re(-1.0))? * &rgamma_mat(a)?) * &pow(x, &one_b)?)
        * &kummer(&amb1, &two_b, c(x, 0.0))?;
    Ok(&t1 + &t2)
}

/// Commuting `A₁..A_r; B₁..B_s; P; Q` drawn from the standard boxes.
pub fn family_params(d: &mut Draw, r: usize, s: usize) -> Result<ParamSet> {
    const NAMES_A: [&str; 4] = ["A1", "A2", "A3", "A4"];
    const NAMES_B: [&str; 4] = ["B1", "B2", "B3", "B4"];
    let mut spec: Vec<(&str, SpectralBox)> = Vec::new();
    for name in NAMES_A.iter().take(r) {
        spec.push((name, A_BOX));
    }
    for name in NAMES_B.iter().take(s) {
        spec.push((name, B_BOX));
    }
    spec.push(("P", P_BOX));
    spec.push(("Q", Q_BOX));
    let mut f = d.family(&spec)?;
    let q = f.pop().expect("Q drawn");
    let p = f.pop().expect("P drawn");
    let lower = f.split_off(r);
    params(f, lower, p, q)
}

pub fn params(upper: Vec<CMatrix>, lower: Vec<CMatrix>, p: CMatrix, q: CMatrix) -> Result<ParamSet> {
    ParamSet::new(upper, lower, p, q).map_err(infeasible)
}

pub fn inc(base: ParamSet, x: f64, kind: IncKind) -> Result<IncExpParams> {
    IncExpParams::new(base, x, kind).map_err(infeasible)
}

/// Turns a parameter-validation failure of a drawn input into a redraw.
pub fn infeasible(e: MgfError) -> MgfError {
    match e {
        MgfError::Pole { .. } | MgfError::Domain(_) | MgfError::Commutativity(_) => {
            MgfError::GeneratorInfeasible(e.to_string())
        }
        other => other,
    }
}
