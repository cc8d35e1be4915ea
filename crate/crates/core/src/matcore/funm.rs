//! Schur–Parlett evaluation of primary matrix functions.

use std::f64::consts::PI;

use super::matrix::CMatrix;
use super::schur::{schur, swap_adjacent};
use crate::error::{MgfError, Result};
use crate::C64;

/// Eigenvalues closer than this are evaluated together in one Taylor block.
pub const CLUSTER_GAP: f64 = 0.1;

/// Extra Taylor terms beyond the block size before convergence is tested.
const TAYLOR_EXTRA: usize = 10;

/// A scalar function that can be lifted to matrices.
pub trait ScalarFunction {
    fn eval(&self, z: C64) -> C64;

    /// Taylor coefficients `f⁽ᵏ⁾(c)/k!` for `k = 0..=order`.
    ///
    /// `radius` is a circle around `c` on which `f` is analytic and which
    /// encloses the eigenvalue cluster being expanded. The default uses the
    /// trapezoidal rule on the Cauchy integral over that circle.
    fn taylor(&self, c: C64, order: usize, radius: f64) -> Vec<C64> {
        cauchy_taylor(|z| self.eval(z), c, radius, order)
    }

    /// Largest usable expansion radius about `c`; infinite for entire
    /// functions.
    fn analytic_radius(&self, _c: C64) -> f64 {
        f64::INFINITY
    }
}

impl<T: ScalarFunction + ?Sized> ScalarFunction for &T {
    fn eval(&self, z: C64) -> C64 {
        (**self).eval(z)
    }
    fn taylor(&self, c: C64, order: usize, radius: f64) -> Vec<C64> {
        (**self).taylor(c, order, radius)
    }
    fn analytic_radius(&self, c: C64) -> f64 {
        (**self).analytic_radius(c)
    }
}

/// Adapter for an entire function given as a closure.
pub struct FnScalar<F>(pub F);

impl<F: Fn(C64) -> C64> ScalarFunction for FnScalar<F> {
    fn eval(&self, z: C64) -> C64 {
        (self.0)(z)
    }
}

/// Taylor coefficients of `f` about `c` from `N` samples on the circle of
/// radius `rho`.
pub fn cauchy_taylor(f: impl Fn(C64) -> C64, c: C64, rho: f64, order: usize) -> Vec<C64> {
    let n = (2 * (order + 1)).next_power_of_two().max(64);
    let samples: Vec<C64> = (0..n)
        .map(|j| f(c + C64::from_polar(rho, 2.0 * PI * j as f64 / n as f64)))
        .collect();
    (0..=order)
        .map(|k| {
            let mut s = C64::new(0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                let idx = (j * k) % n;
                s += v * C64::from_polar(1.0, -2.0 * PI * idx as f64 / n as f64);
            }
            s / (n as f64 * rho.powi(k as i32))
        })
        .collect()
}

/// `e^{a z + b}` with closed-form Taylor coefficients.
#[derive(Clone, Copy, Debug)]
pub struct ExpAffine {
    pub a: C64,
    pub b: C64,
}

impl ScalarFunction for ExpAffine {
    fn eval(&self, z: C64) -> C64 {
        (self.a * z + self.b).exp()
    }
    fn taylor(&self, c: C64, order: usize, _radius: f64) -> Vec<C64> {
        let mut out = Vec::with_capacity(order + 1);
        let mut t = self.eval(c);
        for k in 0..=order {
            out.push(t);
            t = t * self.a / (k + 1) as f64;
        }
        out
    }
}

/// Principal logarithm.
#[derive(Clone, Copy, Debug)]
pub struct Log;

impl ScalarFunction for Log {
    fn eval(&self, z: C64) -> C64 {
        z.ln()
    }
    fn taylor(&self, c: C64, order: usize, _radius: f64) -> Vec<C64> {
        let mut out = vec![c.ln()];
        let mut p = C64::new(1.0, 0.0);
        for k in 1..=order {
            p /= c;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out.push(p * sign / k as f64);
        }
        out
    }
    fn analytic_radius(&self, c: C64) -> f64 {
        c.norm()
    }
}

/// `f(T)` for upper-triangular `T`; the result is upper triangular.
pub fn funm_triangular<F: ScalarFunction + ?Sized>(f: &F, t: &CMatrix) -> Result<CMatrix> {
    let n = t.dim();
    if n == 1 {
        let v = f.eval(t.get(0, 0));
        return finite(CMatrix::from_diag(&[v]));
    }
    let labels = cluster_labels(&t.diagonal());
    let contiguous = is_contiguous(&labels);
    let (tt, v, labels) = if contiguous {
        (t.clone(), None, labels)
    } else {
        let (tt, v, l) = reorder(t, labels);
        (tt, Some(v), l)
    };
    let blocks = block_ranges(&labels);
    let mut fm = CMatrix::zeros(n);

    for &(s, e) in &blocks {
        let fb = eval_block(f, &tt, s, e)?;
        for i in s..e {
            for j in i..e {
                fm.set(i, j, fb[(i - s) * (e - s) + (j - s)]);
            }
        }
    }

    // Off-diagonal blocks, one block superdiagonal at a time.
    let nb = blocks.len();
    for d in 1..nb {
        for bi in 0..nb - d {
            let bj = bi + d;
            solve_off_block(&tt, &mut fm, &blocks, bi, bj);
        }
    }

    let out = match v {
        None => fm,
        Some(v) => {
            let mut r = &(&v * &fm) * &v.adjoint();
            r.zero_lower();
            r
        }
    };
    finite(out)
}

fn finite(m: CMatrix) -> Result<CMatrix> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(MgfError::Domain(
            "matrix function value overflowed or is undefined".into(),
        ))
    }
}

fn cluster_labels(ev: &[C64]) -> Vec<usize> {
    let n = ev.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (ev[i] - ev[j]).norm() <= CLUSTER_GAP {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    // label clusters by first appearance
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|i| {
            let r = root(&mut parent, i);
            if map[r] == usize::MAX {
                map[r] = next;
                next += 1;
            }
            map[r]
        })
        .collect()
}

fn is_contiguous(labels: &[usize]) -> bool {
    let mut seen = vec![false; labels.len()];
    for (i, &l) in labels.iter().enumerate() {
        if i > 0 && labels[i - 1] == l {
            continue;
        }
        if seen[l] {
            return false;
        }
        seen[l] = true;
    }
    true
}

/// Moves every cluster into a contiguous run with adjacent swaps.
fn reorder(t: &CMatrix, mut labels: Vec<usize>) -> (CMatrix, CMatrix, Vec<usize>) {
    let n = t.dim();
    let mut tt = t.clone();
    let mut u = CMatrix::identity(n);
    let mut target = labels.clone();
    target.sort();
    for p in 0..n {
        if labels[p] == target[p] {
            continue;
        }
        let q = (p + 1..n).find(|&q| labels[q] == target[p]).expect("label present");
        for k in (p..q).rev() {
            swap_adjacent(&mut tt, &mut u, k);
            labels.swap(k, k + 1);
        }
    }
    (tt, u, labels)
}

fn block_ranges(labels: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut s = 0;
    for i in 1..=labels.len() {
        if i == labels.len() || labels[i] != labels[s] {
            out.push((s, i));
            s = i;
        }
    }
    out
}

/// Row-major upper-triangular values of `f` on the diagonal block `[s, e)`.
fn eval_block<F: ScalarFunction + ?Sized>(
    f: &F,
    t: &CMatrix,
    s: usize,
    e: usize,
) -> Result<Vec<C64>> {
    let m = e - s;
    if m == 1 {
        return Ok(vec![f.eval(t.get(s, s))]);
    }
    let sigma = (s..e).map(|i| t.get(i, i)).sum::<C64>() / m as f64;
    let spread = (s..e).map(|i| (t.get(i, i) - sigma).norm()).fold(0.0, f64::max);
    let mut rho = (4.0 * spread).max(1.0);
    let limit = f.analytic_radius(sigma);
    if limit.is_finite() {
        rho = rho.min(0.5 * limit);
        if rho <= 1.5 * spread {
            return Err(MgfError::Domain(format!(
                "eigenvalue cluster at {sigma} lies too close to a singularity"
            )));
        }
    }
    let block = CMatrix::from_fn(m, |i, j| {
        if i == j {
            t.get(s + i, s + j) - sigma
        } else if i < j {
            t.get(s + i, s + j)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    for order in [64usize, 256] {
        let coef = f.taylor(sigma, order, rho);
        let mut acc = CMatrix::scalar(m, coef[0]);
        let mut pw = CMatrix::identity(m);
        let mut small = 0;
        for (k, a) in coef.iter().enumerate().skip(1) {
            pw = &pw * &block;
            let term = pw.scale(*a);
            acc += &term;
            let tn = term.max_abs();
            if tn <= f64::EPSILON * acc.max_abs() * 0.5 || tn == 0.0 {
                small += 1;
            } else {
                small = 0;
            }
            if k >= m + TAYLOR_EXTRA && small >= 2 {
                let mut out = Vec::with_capacity(m * m);
                for i in 0..m {
                    for j in 0..m {
                        out.push(acc.get(i, j));
                    }
                }
                return Ok(out);
            }
        }
    }
    Err(MgfError::DerivativeOrder { cluster_size: m })
}

/// Solves `T_ii X − X T_jj = F_ii T_ij − T_ij F_jj + Σ_k (F_ik T_kj − T_ik F_kj)`
/// for the off-diagonal block `(bi, bj)` of `F`.
fn solve_off_block(
    t: &CMatrix,
    fm: &mut CMatrix,
    blocks: &[(usize, usize)],
    bi: usize,
    bj: usize,
) {
    let (is, ie) = blocks[bi];
    let (js, je) = blocks[bj];
    let zero = C64::new(0.0, 0.0);
    // right-hand side, rows is..ie, cols js..je
    let rows = ie - is;
    let cols = je - js;
    let mut rhs = vec![zero; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let (i, j) = (is + r, js + c);
            let mut s = zero;
            // F_ii T_ij
            for k in i..ie {
                s += fm.get(i, k) * t.get(k, j);
            }
            // − T_ij F_jj
            for k in js..=j {
                s -= t.get(i, k) * fm.get(k, j);
            }
            // intermediate blocks
            for k in ie..js {
                s += fm.get(i, k) * t.get(k, j) - t.get(i, k) * fm.get(k, j);
            }
            rhs[r * cols + c] = s;
        }
    }
    // column by column: (T_ii − t_cc I) x_c = rhs_c + Σ_{r<c} x_r T_jj[r, c]
    let mut x = vec![zero; rows * cols];
    for c in 0..cols {
        let mu = t.get(js + c, js + c);
        let mut b: Vec<C64> = (0..rows).map(|r| rhs[r * cols + c]).collect();
        for (r, bv) in b.iter_mut().enumerate() {
            for p in 0..c {
                *bv += x[r * cols + p] * t.get(js + p, js + c);
            }
        }
        for r in (0..rows).rev() {
            let mut s = b[r];
            for k in r + 1..rows {
                s -= t.get(is + r, is + k) * x[k * cols + c];
            }
            x[r * cols + c] = s / (t.get(is + r, is + r) - mu);
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            fm.set(is + r, js + c, x[r * cols + c]);
        }
    }
}

/// Primary matrix function `f(A)` of an entire (or suitably analytic) `f`.
pub fn apply_entire<F: ScalarFunction + ?Sized>(f: &F, a: &CMatrix) -> Result<CMatrix> {
    schur(a)?.apply(f)
}

pub fn mat_exp(a: &CMatrix) -> Result<CMatrix> {
    apply_entire(
        &ExpAffine {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
        },
        a,
    )
}

/// Principal logarithm; the spectrum must avoid the closed negative real axis.
pub fn mat_log_principal(a: &CMatrix) -> Result<CMatrix> {
    let s = schur(a)?;
    for z in s.eigenvalues() {
        if z.im.abs() <= 1e-14 * (1.0 + z.re.abs()) && z.re <= 0.0 {
            return Err(MgfError::Domain(format!(
                "eigenvalue {z} on the branch cut of the logarithm"
            )));
        }
    }
    s.apply(&Log)
}

/// `x^Q = exp(Q ln x)` for real `x > 0`.
pub fn real_power(x: f64, q: &CMatrix) -> Result<CMatrix> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(MgfError::Domain(format!("x^Q needs x > 0, got {x}")));
    }
    apply_entire(&power_fn(C64::new(x, 0.0)), q)
}

/// `w^E = exp(E Log w)` for a complex base off the closed negative axis.
pub fn complex_power(w: C64, e: &CMatrix) -> Result<CMatrix> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(MgfError::Domain(format!("w^E needs w off (-inf, 0], got {w}")));
    }
    apply_entire(&power_fn(w), e)
}

/// `λ ↦ w^λ` as a scalar function.
pub fn power_fn(w: C64) -> ExpAffine {
    ExpAffine {
        a: w.ln(),
        b: C64::new(0.0, 0.0),
    }
}

/// `B^E = exp(E log B)` for commuting `B` and `E`.
pub fn matrix_power(b: &CMatrix, e: &CMatrix) -> Result<CMatrix> {
    mat_exp(&(e * &mat_log_principal(b)?))
}

/// Commutation test `‖AB − BA‖₂ ≤ tol·(1 + ‖A‖₂‖B‖₂)`.
pub fn commutes(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.commutes_with(b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::matrix::residual;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn taylor_exp(a: &CMatrix) -> CMatrix {
        let n = a.dim();
        let mut acc = CMatrix::identity(n);
        let mut term = CMatrix::identity(n);
        for k in 1..80 {
            term = (&term * a).scale_re(1.0 / k as f64);
            acc += &term;
        }
        acc
    }

    #[test]
    fn exp_matches_power_series() {
        let a = CMatrix::from_rows(
            3,
            &[
                c(0.3, 0.1),
                c(0.5, 0.0),
                c(-0.2, 0.4),
                c(0.1, 0.0),
                c(-0.4, 0.2),
                c(0.3, -0.1),
                c(0.0, 0.2),
                c(0.6, 0.0),
                c(0.2, 0.3),
            ],
        )
        .unwrap();
        assert!(residual(&mat_exp(&a).unwrap(), &taylor_exp(&a)) < 1e-14);
    }

    #[test]
    fn clustered_and_defective_spectra() {
        // Jordan block
        let j = CMatrix::from_rows(2, &[c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        let e = mat_exp(&j).unwrap();
        let e2 = 2f64.exp();
        assert!((e.get(0, 0) - e2).norm() < 1e-13);
        assert!((e.get(0, 1) - e2).norm() < 1e-13);
        // near-equal eigenvalues, forces a Taylor block
        let a = CMatrix::from_rows(
            3,
            &[
                c(1.0, 0.0),
                c(0.7, 0.0),
                c(0.2, 0.1),
                c(0.0, 0.0),
                c(1.05, 0.0),
                c(0.4, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0 + 1e-9, 0.0),
            ],
        )
        .unwrap();
        assert!(residual(&mat_exp(&a).unwrap(), &taylor_exp(&a)) < 1e-14);
        // cluster split by a far eigenvalue forces reordering
        let b = CMatrix::from_rows(
            3,
            &[
                c(0.5, 0.0),
                c(0.3, 0.2),
                c(0.1, 0.0),
                c(0.0, 0.0),
                c(-1.5, 0.0),
                c(0.4, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.52, 0.0),
            ],
        )
        .unwrap();
        assert!(residual(&mat_exp(&b).unwrap(), &taylor_exp(&b)) < 1e-14);
    }

    #[test]
    fn log_inverts_exp() {
        let a = CMatrix::from_rows(2, &[c(0.2, 0.3), c(0.5, 0.0), c(-0.1, 0.1), c(0.4, -0.2)])
            .unwrap();
        let l = mat_log_principal(&mat_exp(&a).unwrap()).unwrap();
        assert!(residual(&l, &a) < 1e-14);
        let neg = CMatrix::scalar(2, c(-1.0, 0.0));
        assert!(mat_log_principal(&neg).is_err());
    }

    #[test]
    fn default_taylor_is_accurate() {
        let f = FnScalar(|z: C64| z.sin());
        let co = f.taylor(c(0.3, 0.2), 12, 1.0);
        let exact = [c(0.3, 0.2).sin(), c(0.3, 0.2).cos(), -c(0.3, 0.2).sin() / 2.0];
        for k in 0..3 {
            assert!((co[k] - exact[k]).norm() < 1e-15);
        }
    }
}
