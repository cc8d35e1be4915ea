//! Gamma, reciprocal gamma, Pochhammer and beta functions of matrices.

use std::f64::consts::PI;

use crate::error::{MgfError, Result};
use crate::matcore::{apply_entire, schur, CMatrix, ScalarFunction};
use crate::C64;

/// Eigenvalues within this distance of a nonpositive integer are poles.
pub const POLE_TOL: f64 = 1e-8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` for `Re z ≥ 1/2` (Lanczos, g = 7).
fn ln_gamma_right(z: C64) -> C64 {
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `sin(πz)` with the real part reduced first, so zeros at integers are
/// reproduced accurately.
fn sin_pi(z: C64) -> C64 {
    let n = z.re.round();
    let f = z - n;
    let s = (f * PI).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `Γ(z)` for complex `z`, with reflection for `Re z < 1/2`.
pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        PI / (sin_pi(z) * ln_gamma_right(1.0 - z).exp())
    } else {
        ln_gamma_right(z).exp()
    }
}

/// `1/Γ(z)`, entire.
pub fn rgamma(z: C64) -> C64 {
    if z.re < 0.5 {
        sin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

/// Distance from `z` to the nearest nonpositive integer.
pub fn pole_distance(z: C64) -> f64 {
    let n = z.re.round().min(0.0);
    (z - n).norm()
}

/// The reciprocal gamma function as a [`ScalarFunction`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RGamma;

impl ScalarFunction for RGamma {
    fn eval(&self, z: C64) -> C64 {
        rgamma(z)
    }
}

/// Fails with [`MgfError::Pole`] if any eigenvalue is a nonpositive integer.
pub fn check_no_poles(a: &CMatrix) -> Result<()> {
    for z in schur(a)?.eigenvalues() {
        if pole_distance(z) <= POLE_TOL {
            return Err(MgfError::Pole { eigenvalue: z });
        }
    }
    Ok(())
}

/// `Γ⁻¹(A)`, defined for every square matrix.
pub fn rgamma_mat(a: &CMatrix) -> Result<CMatrix> {
    apply_entire(&RGamma, a)
}

/// `Γ(A)` as the inverse of `Γ⁻¹(A)`.
pub fn gamma_mat(a: &CMatrix) -> Result<CMatrix> {
    check_no_poles(a)?;
    rgamma_mat(a)?.inverse()
}

/// `(A)_n = A(A+I)⋯(A+(n−1)I)`, with `(A)_0 = I`.
pub fn pochhammer(a: &CMatrix, n: usize) -> CMatrix {
    let mut out = CMatrix::identity(a.dim());
    for k in 0..n {
        out = &out * &a.shift_re(k as f64);
    }
    out
}

/// `(A)_{kn}` through the multiplication formula
/// `k^{kn} ∏_{j=0}^{k-1} ((A + jI)/k)_n`.
pub fn pochhammer_kn(a: &CMatrix, k: usize, n: usize) -> Result<CMatrix> {
    if k == 0 {
        return Err(MgfError::Domain("pochhammer_kn needs k ≥ 1".into()));
    }
    let kf = k as f64;
    let mut out = CMatrix::identity(a.dim()).scale_re(kf.powi((k * n) as i32));
    for j in 0..k {
        let base = a.shift_re(j as f64).scale_re(1.0 / kf);
        out = &out * &pochhammer(&base, n);
    }
    Ok(out)
}

/// `B(P, Q) = Γ(P) Γ(Q) Γ⁻¹(P + Q)` for commuting `P`, `Q`.
pub fn beta_mat(p: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
    if !p.commutes_with(q, 1e-10) {
        return Err(MgfError::Commutativity("beta needs PQ = QP".into()));
    }
    let gp = gamma_mat(p)?;
    let gq = gamma_mat(q)?;
    let r = rgamma_mat(&(p + q))?;
    Ok(&(&gp * &gq) * &r)
}

/// Incrementally extended table of `(A)_k`.
#[derive(Clone, Debug)]
pub struct PochhammerCache {
    base: CMatrix,
    values: Vec<CMatrix>,
}

impl PochhammerCache {
    pub fn new(base: CMatrix) -> Self {
        let id = CMatrix::identity(base.dim());
        PochhammerCache {
            base,
            values: vec![id],
        }
    }

    pub fn get(&mut self, k: usize) -> &CMatrix {
        while self.values.len() <= k {
            let j = self.values.len() - 1;
            let next = &self.values[j] * &self.base.shift_re(j as f64);
            self.values.push(next);
        }
        &self.values[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::residual;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn scalar_values() {
        assert!((gamma(c(5.0, 0.0)) - 24.0).norm() < 1e-12);
        assert!((gamma(c(0.5, 0.0)) - PI.sqrt()).norm() < 1e-14);
        assert!((gamma(c(-0.5, 0.0)) + 2.0 * PI.sqrt()).norm() < 1e-13);
        // Γ(1+i) = 0.498015668118356 − 0.154949828301811i
        let g = gamma(c(1.0, 1.0));
        assert!((g - c(0.498_015_668_118_356, -0.154_949_828_301_811)).norm() < 1e-14);
        assert_eq!(rgamma(c(-3.0, 0.0)).norm(), 0.0);
        assert!(rgamma(c(300.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn gamma_matrix_recurrence() {
        let a = CMatrix::from_rows(2, &[c(1.2, 0.1), c(0.4, 0.0), c(0.3, -0.2), c(2.1, 0.3)])
            .unwrap();
        let g1 = gamma_mat(&a.shift_re(1.0)).unwrap();
        let g = gamma_mat(&a).unwrap();
        assert!(residual(&g1, &(&a * &g)) < 1e-13);
    }

    #[test]
    fn poles_are_rejected() {
        let a = CMatrix::from_diag(&[c(-2.0, 0.0), c(1.5, 0.0)]);
        assert!(matches!(gamma_mat(&a), Err(MgfError::Pole { .. })));
        let r = rgamma_mat(&a).unwrap();
        assert_eq!(r.get(0, 0).norm(), 0.0);
    }

    #[test]
    fn multiplication_formula_matches_product() {
        let a = CMatrix::from_rows(2, &[c(0.7, 0.1), c(0.2, 0.0), c(-0.1, 0.3), c(1.4, -0.2)])
            .unwrap();
        for k in 1..4 {
            for n in 0..4 {
                let lhs = pochhammer(&a, k * n);
                let rhs = pochhammer_kn(&a, k, n).unwrap();
                assert!(residual(&lhs, &rhs) < 1e-13, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn cache_agrees_with_direct_product() {
        let a = CMatrix::scalar(1, c(0.5, 0.5));
        let mut cache = PochhammerCache::new(a.clone());
        assert!(residual(cache.get(6), &pochhammer(&a, 6)) < 1e-15);
    }
}
