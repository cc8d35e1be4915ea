use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{MgfError, Result};
use crate::C64;

/// Largest supported dimension.
pub const MAX_DIM: usize = 32;

/// Dense square complex matrix with finite entries.
///
/// All arithmetic is plain dense linear algebra; the invariant that entries
/// are finite is enforced on construction from external data and re-checked
/// at API boundaries with [`CMatrix::ensure_finite`].
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

/// Wire format: `{"n": 2, "data": [[re, im], ...]}` in row-major order.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    data: Vec<[f64; 2]>,
}

impl CMatrix {
    /// Builds an `n×n` matrix from row-major entries.
    pub fn from_rows(n: usize, data: &[C64]) -> Result<Self> {
        check_dim(n)?;
        if data.len() != n * n {
            return Err(MgfError::Dimension(format!(
                "expected {} entries for n = {}, found {}",
                n * n,
                n,
                data.len()
            )));
        }
        let m = CMatrix(DMatrix::from_row_slice(n, n, data));
        m.ensure_finite()?;
        Ok(m)
    }

    /// Wraps an existing nalgebra matrix after validating it.
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(MgfError::Dimension(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        check_dim(m.nrows())?;
        let m = CMatrix(m);
        m.ensure_finite()?;
        Ok(m)
    }

    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        CMatrix(m)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(n: usize) -> Self {
        CMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    /// `c·I`.
    pub fn scalar(n: usize, c: C64) -> Self {
        CMatrix(DMatrix::from_diagonal_element(n, n, c))
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let n = d.len();
        CMatrix::from_fn(n, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.0[(i, i)]).collect()
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        CMatrix(&self.0 * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// `A + c·I`.
    pub fn shift(&self, c: C64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += c;
        }
        CMatrix(m)
    }

    pub fn shift_re(&self, c: f64) -> Self {
        self.shift(C64::new(c, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Spectral norm (largest singular value).
    pub fn norm2(&self) -> f64 {
        if self.dim() == 1 {
            return self.0[(0, 0)].norm();
        }
        if self.is_zero() {
            return 0.0;
        }
        self.0
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let z = self.0[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(MgfError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Largest modulus below the diagonal.
    pub fn lower_max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in j + 1..n {
                m = m.max(self.0[(i, j)].norm());
            }
        }
        m
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.lower_max_abs() == 0.0
    }

    pub fn zero_lower(&mut self) {
        let n = self.dim();
        for j in 0..n {
            for i in j + 1..n {
                self.0[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }

    /// `self⁻¹ · rhs`, by back substitution when `self` is upper triangular
    /// and by partially pivoted LU otherwise.
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        let out = if self.is_upper_triangular() {
            let n = self.dim();
            let mut x = rhs.0.clone();
            for i in 0..n {
                if self.0[(i, i)].norm() == 0.0 {
                    return Err(MgfError::Singular(format!("zero pivot at {i}")));
                }
            }
            for c in 0..n {
                for i in (0..n).rev() {
                    let mut s = x[(i, c)];
                    for k in i + 1..n {
                        s -= self.0[(i, k)] * x[(k, c)];
                    }
                    x[(i, c)] = s / self.0[(i, i)];
                }
            }
            x
        } else {
            self.0
                .clone()
                .lu()
                .solve(&rhs.0)
                .ok_or_else(|| MgfError::Singular("LU factorisation has a zero pivot".into()))?
        };
        let out = CMatrix(out);
        if !out.is_finite() {
            return Err(MgfError::Singular("solution is not finite".into()));
        }
        Ok(out)
    }

    /// `lhs · self⁻¹`.
    pub fn solve_right(&self, lhs: &CMatrix) -> Result<CMatrix> {
        Ok(self.adjoint().solve(&lhs.adjoint())?.adjoint())
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.solve(&CMatrix::identity(self.dim()))
    }

    pub fn powi(&self, k: usize) -> CMatrix {
        let mut out = CMatrix::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `‖AB − BA‖₂ ≤ tol·(1 + ‖A‖₂‖B‖₂)`.
    pub fn commutes_with(&self, other: &CMatrix, tol: f64) -> bool {
        let c = &(self * other) - &(other * self);
        c.norm2() <= tol * (1.0 + self.norm2() * other.norm2())
    }

    /// Short hex digest of the entries, used to identify inputs in reports.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.dim() as u64).to_le_bytes());
        for z in self.to_row_major() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let data: Vec<[f64; 2]> = self.to_row_major().iter().map(|z| [z.re, z.im]).collect();
        serde_json::to_value(MatrixJson { n: self.dim(), data }).expect("matrix serialises")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let mj: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| MgfError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        mj.try_into()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let mj: MatrixJson = serde_json::from_str(s).map_err(|e| MgfError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        mj.try_into()
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = MgfError;

    fn try_from(mj: MatrixJson) -> Result<Self> {
        let data: Vec<C64> = mj.data.iter().map(|p| C64::new(p[0], p[1])).collect();
        CMatrix::from_rows(mj.n, &data)
    }
}

impl Serialize for CMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let data: Vec<[f64; 2]> = self.to_row_major().iter().map(|z| [z.re, z.im]).collect();
        MatrixJson { n: self.dim(), data }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mj = MatrixJson::deserialize(d)?;
        CMatrix::try_from(mj).map_err(serde::de::Error::custom)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(MgfError::Dimension(format!(
            "dimension {n} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a CMatrix> for &'a CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &'a CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &'a CMatrix) -> CMatrix {
                CMatrix(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<CMatrix> for &'a CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<C64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, c: C64) -> CMatrix {
        self.scale(c)
    }
}

impl Mul<C64> for CMatrix {
    type Output = CMatrix;
    fn mul(self, c: C64) -> CMatrix {
        CMatrix(self.0 * c)
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-self.0)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&CMatrix> for CMatrix {
    fn sub_assign(&mut self, rhs: &CMatrix) {
        self.0 -= &rhs.0;
    }
}

/// Scale-free residual `‖L − R‖₂ / (1 + max(‖L‖₂, ‖R‖₂))`.
pub fn residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    let d = (lhs - rhs).norm2();
    if d == 0.0 {
        return 0.0;
    }
    let r = d / (1.0 + lhs.norm2().max(rhs.norm2()));
    if r.is_nan() {
        f64::INFINITY
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn json_round_trip() {
        let m = CMatrix::from_rows(2, &[c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 3.0), c(4.25, -1.0)])
            .unwrap();
        let s = m.to_json().to_string();
        assert_eq!(s, r#"{"data":[[1.0,0.5],[-2.0,0.0],[0.0,3.0],[4.25,-1.0]],"n":2}"#);
        assert_eq!(CMatrix::from_json_str(&s).unwrap(), m);
    }

    #[test]
    fn rejects_bad_counts_and_syntax() {
        let e = CMatrix::from_json_str(r#"{"n":2,"data":[[1,0],[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(e, MgfError::Dimension(_)));
        let e = CMatrix::from_json_str("{\"n\":2,\n \"data\": [[1,0],}").unwrap_err();
        match e {
            MgfError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(CMatrix::from_rows(0, &[]).is_err());
        assert!(CMatrix::from_rows(33, &vec![c(0.0, 0.0); 33 * 33]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        let e = CMatrix::from_rows(1, &[c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(e, MgfError::NonFinite { row: 0, col: 0 });
    }

    #[test]
    fn triangular_solve_matches_lu() {
        let t = CMatrix::from_rows(2, &[c(2.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(3.0, -1.0)])
            .unwrap();
        let b = CMatrix::from_rows(2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 1.0)])
            .unwrap();
        let x = t.solve(&b).unwrap();
        assert!(residual(&(&t * &x), &b) < 1e-15);
        let full = &t + &CMatrix::from_rows(2, &[c(0.0, 0.0); 4]).unwrap();
        let lu = CMatrix::wrap(full.0.clone().lu().solve(&b.0).unwrap());
        assert!(residual(&x, &lu) < 1e-15);
    }

    #[test]
    fn norm2_of_diagonal() {
        let d = CMatrix::from_diag(&[c(3.0, 4.0), c(-1.0, 0.0)]);
        assert!((d.norm2() - 5.0).abs() < 1e-14);
    }
}
