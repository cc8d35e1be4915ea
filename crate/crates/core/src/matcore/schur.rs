use nalgebra::linalg::Schur;

use super::funm::{funm_triangular, ScalarFunction};
use super::matrix::CMatrix;
use crate::error::{MgfError, Result};
use crate::C64;

/// `A = U T Uᴴ` with `U` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct SchurForm {
    pub unitary: CMatrix,
    pub triangular: CMatrix,
    trivial_basis: bool,
}

impl SchurForm {
    /// Wraps an already upper-triangular matrix with the identity basis.
    pub fn from_triangular(t: CMatrix) -> Self {
        debug_assert!(t.is_upper_triangular());
        let n = t.dim();
        SchurForm {
            unitary: CMatrix::identity(n),
            triangular: t,
            trivial_basis: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.triangular.dim()
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.triangular.diagonal()
    }

    /// `U X Uᴴ`.
    pub fn restore(&self, x: &CMatrix) -> CMatrix {
        if self.trivial_basis {
            return x.clone();
        }
        &(&self.unitary * x) * &self.unitary.adjoint()
    }

    /// `Uᴴ X U`.
    pub fn project(&self, x: &CMatrix) -> CMatrix {
        if self.trivial_basis {
            return x.clone();
        }
        &(&self.unitary.adjoint() * x) * &self.unitary
    }

    /// Same basis, triangular factor shifted by `c·I`.
    pub fn shifted(&self, c: C64) -> SchurForm {
        SchurForm {
            unitary: self.unitary.clone(),
            triangular: self.triangular.shift(c),
            trivial_basis: self.trivial_basis,
        }
    }

    /// `f(T)` in the Schur basis (upper triangular).
    pub fn apply_triangular<F: ScalarFunction + ?Sized>(&self, f: &F) -> Result<CMatrix> {
        funm_triangular(f, &self.triangular)
    }

    /// `f(A) = U f(T) Uᴴ`.
    pub fn apply<F: ScalarFunction + ?Sized>(&self, f: &F) -> Result<CMatrix> {
        Ok(self.restore(&self.apply_triangular(f)?))
    }
}

/// Complex Schur decomposition. Upper-triangular input is returned as is.
pub fn schur(a: &CMatrix) -> Result<SchurForm> {
    if a.is_upper_triangular() {
        return Ok(SchurForm::from_triangular(a.clone()));
    }
    let n = a.dim();
    let s = Schur::try_new(a.as_dmatrix().clone(), f64::EPSILON, 1000 * n.max(1)).ok_or_else(
        || MgfError::Convergence {
            digest: a.digest(),
        },
    )?;
    let (q, t) = s.unpack();
    let mut t = CMatrix::wrap(t);
    t.zero_lower();
    let form = SchurForm {
        unitary: CMatrix::wrap(q),
        triangular: t,
        trivial_basis: false,
    };
    if !form.triangular.is_finite() || !form.unitary.is_finite() {
        return Err(MgfError::Convergence {
            digest: a.digest(),
        });
    }
    Ok(form)
}

#[derive(Clone, Debug)]
pub struct SpectralInfo {
    pub eigenvalues: Vec<C64>,
    /// Smallest real part of the spectrum.
    pub small_m: f64,
    /// Largest real part of the spectrum.
    pub big_m: f64,
}

pub fn spectral_bounds(a: &CMatrix) -> Result<SpectralInfo> {
    Ok(spectral_info(schur(a)?.eigenvalues()))
}

pub(crate) fn spectral_info(eigenvalues: Vec<C64>) -> SpectralInfo {
    let small_m = eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let big_m = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    SpectralInfo {
        eigenvalues,
        small_m,
        big_m,
    }
}

/// Swaps diagonal entries `k` and `k+1` of the upper-triangular `t` with a
/// Givens rotation, accumulating the rotation into `u`.
pub(crate) fn swap_adjacent(t: &mut CMatrix, u: &mut CMatrix, k: usize) {
    let n = t.dim();
    let a = t.get(k, k);
    let b = t.get(k + 1, k + 1);
    let c = t.get(k, k + 1);
    // eigenvector of the 2x2 block for eigenvalue b
    let v1 = c;
    let v2 = b - a;
    let r = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    if r == 0.0 {
        return;
    }
    let (g11, g21) = (v1 / r, v2 / r);
    let (g12, g22) = (-g21.conj(), g11.conj());
    // rows k, k+1 <- Gᴴ · rows
    for j in 0..n {
        let x = t.get(k, j);
        let y = t.get(k + 1, j);
        t.set(k, j, g11.conj() * x + g21.conj() * y);
        t.set(k + 1, j, g12.conj() * x + g22.conj() * y);
    }
    // cols k, k+1 <- cols · G
    for i in 0..n {
        let x = t.get(i, k);
        let y = t.get(i, k + 1);
        t.set(i, k, x * g11 + y * g21);
        t.set(i, k + 1, x * g12 + y * g22);
        let x = u.get(i, k);
        let y = u.get(i, k + 1);
        u.set(i, k, x * g11 + y * g21);
        u.set(i, k + 1, x * g12 + y * g22);
    }
    t.set(k, k, b);
    t.set(k + 1, k + 1, a);
    t.set(k + 1, k, C64::new(0.0, 0.0));
}

/// A unitary basis in which every member of a commuting family is upper
/// triangular.
///
/// Working in this basis lets repeated matrix-function evaluations skip the
/// Schur step, since [`schur`] returns triangular input unchanged.
#[derive(Clone, Debug)]
pub struct SharedBasis {
    form: SchurForm,
}

impl SharedBasis {
    /// Lower-triangular leakage allowed when verifying the basis, relative to
    /// `1 + ‖X‖₂`.
    pub const LEAK_TOL: f64 = 1e-13;

    /// Finds a common triangularising basis, or `None` when the members do
    /// not commute or the generic combination has a degenerate spectrum.
    pub fn find(members: &[&CMatrix]) -> Option<SharedBasis> {
        let n = members.first()?.dim();
        if members.iter().any(|m| m.dim() != n) {
            return None;
        }
        if n == 1 || members.iter().all(|m| m.is_upper_triangular()) {
            return Some(SharedBasis {
                form: SchurForm::from_triangular(CMatrix::identity(n)),
            });
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if !a.commutes_with(b, 1e-10) {
                    return None;
                }
            }
        }
        let mut combo = CMatrix::zeros(n);
        for (i, m) in members.iter().enumerate() {
            // fixed, irrational-looking weights keep accidental degeneracy unlikely
            let k = i as f64;
            let w = C64::from_polar(1.0 + 0.371 * k, 0.713 + 1.618 * k);
            combo += &m.scale(w);
        }
        let s = schur(&combo).ok()?;
        let basis = SharedBasis {
            form: SchurForm {
                unitary: s.unitary,
                triangular: CMatrix::identity(n),
                trivial_basis: false,
            },
        };
        for m in members {
            let y = basis.form.project(m);
            if y.lower_max_abs() > Self::LEAK_TOL * (1.0 + m.norm2()) {
                return None;
            }
        }
        Some(basis)
    }

    /// `Uᴴ X U` with the (verified negligible) lower part cleared.
    pub fn to_basis(&self, x: &CMatrix) -> CMatrix {
        let mut y = self.form.project(x);
        y.zero_lower();
        y
    }

    pub fn from_basis(&self, x: &CMatrix) -> CMatrix {
        self.form.restore(x)
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.form.unitary
    }
}
