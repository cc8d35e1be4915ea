//! Seeded input generation for identity trials.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{MgfError, Result};
use crate::matcore::{residual, schur, CMatrix};
use crate::C64;

/// Rectangle of the complex plane that eigenvalues are drawn from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl SpectralBox {
    pub const DEFAULT: SpectralBox = SpectralBox {
        re: (0.5, 3.5),
        im: (-1.0, 1.0),
    };

    pub const fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        SpectralBox {
            re: (re_lo, re_hi),
            im: (im_lo, im_hi),
        }
    }

    fn contains(&self, z: C64) -> bool {
        z.re >= self.re.0 && z.re <= self.re.1 && z.im >= self.im.0 && z.im <= self.im.1
    }

    fn center(&self) -> C64 {
        C64::new(0.5 * (self.re.0 + self.re.1), 0.5 * (self.im.0 + self.im.1))
    }
}

/// Strength of the strictly upper part of drawn triangular factors.
const OFF_DIAG: f64 = 0.4;

/// Draws for one trial; every draw is recorded so a failing trial can be
/// reported and replayed.
pub struct Draw {
    rng: ChaCha8Rng,
    dim: usize,
    inputs: Map<String, Value>,
    errors: Vec<String>,
}

impl Draw {
    pub fn new(seed: u64, dim: usize) -> Self {
        Draw {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
            inputs: Map::new(),
            errors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inputs(&self) -> Value {
        Value::Object(self.inputs.clone())
    }

    pub fn errors(&self) -> &[String] {
        &self.errors
    }

    fn record(&mut self, name: &str, v: Value) {
        self.inputs.insert(name.to_string(), v);
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            lo
        } else {
            self.rng.gen_range(lo..hi)
        }
    }

    /// Uniform real in `[lo, hi)`.
    pub fn real(&mut self, name: &str, lo: f64, hi: f64) -> f64 {
        let v = self.uniform(lo, hi);
        self.record(name, json!(v));
        v
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, name: &str, lo: usize, hi: usize) -> usize {
        let v = self.rng.gen_range(lo..=hi);
        self.record(name, json!(v));
        v
    }

    /// Uniform point of the disk `|z − c| ≤ r`.
    pub fn disk(&mut self, name: &str, c: C64, r: f64) -> C64 {
        let rho = r * self.uniform(0.0, 1.0).sqrt();
        let th = self.uniform(0.0, std::f64::consts::TAU);
        let z = c + C64::from_polar(rho, th);
        self.record(name, json!([z.re, z.im]));
        z
    }

    fn point(&mut self, b: SpectralBox) -> C64 {
        C64::new(self.uniform(b.re.0, b.re.1), self.uniform(b.im.0, b.im.1))
    }

    fn unitary(&mut self) -> CMatrix {
        let n = self.dim;
        let g = DMatrix::from_fn(n, n, |_, _| {
            C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
        });
        CMatrix::from_dmatrix(g.qr().q()).expect("finite unitary")
    }

    fn triangular(&mut self, eig: &[C64]) -> CMatrix {
        let n = eig.len();
        let mut t = CMatrix::from_diag(eig);
        for i in 0..n {
            for j in i + 1..n {
                let v = C64::new(self.uniform(-OFF_DIAG, OFF_DIAG), self.uniform(-OFF_DIAG, OFF_DIAG));
                t.set(i, j, v);
            }
        }
        t
    }

    fn conjugate(&mut self, t: &CMatrix) -> CMatrix {
        let u = self.unitary();
        &(&u * t) * &u.adjoint()
    }

    /// Matrix with spectrum in `b`: a random upper-triangular factor
    /// conjugated by a random unitary.
    pub fn matrix(&mut self, name: &str, b: SpectralBox) -> CMatrix {
        let eig: Vec<C64> = (0..self.dim).map(|_| self.point(b)).collect();
        let t = self.triangular(&eig);
        let m = self.conjugate(&t);
        self.record(name, m.to_json());
        m
    }

    /// Matrix with a real spectrum in `[lo, hi]`.
    pub fn real_spectrum(&mut self, name: &str, lo: f64, hi: f64) -> CMatrix {
        self.matrix(name, SpectralBox::new(lo, hi, 0.0, 0.0))
    }

    /// Family of commuting matrices `cᵢI + βᵢS + γᵢS²` in one seed matrix `S`,
    /// each with spectrum inside its box.
    pub fn family(&mut self, members: &[(&str, SpectralBox)]) -> Result<Vec<CMatrix>> {
        let n = self.dim;
        let im = if members.iter().any(|(_, b)| b.im.0 == b.im.1) {
            0.0
        } else {
            0.35
        };
        let mu: Vec<C64> = (0..n)
            .map(|_| C64::new(self.uniform(-1.0, 1.0), self.uniform(-im, im)))
            .collect();
        let t = self.triangular(&mu);
        let s = self.conjugate(&t);
        let s2 = &s * &s;
        let mut out = Vec::with_capacity(members.len());
        for &(name, b) in members {
            let half_re = 0.5 * (b.re.1 - b.re.0);
            let mut beta = 0.95 * half_re;
            let mut accepted = None;
            for _ in 0..60 {
                let bt = beta * self.uniform(0.6, 1.0);
                let gm = 0.15 * bt * self.uniform(-1.0, 1.0);
                let ok = mu.iter().all(|&m| b.contains(b.center() + m * bt + m * m * gm));
                if ok {
                    accepted = Some((bt, gm));
                    break;
                }
                beta *= 0.85;
            }
            let (bt, gm) = accepted.ok_or_else(|| {
                MgfError::GeneratorInfeasible(format!("no member of the family fits the box of {name}"))
            })?;
            let m = &(&CMatrix::identity(n).scale(b.center()) + &s.scale_re(bt)) + &s2.scale_re(gm);
            self.record(name, m.to_json());
            out.push(m);
        }
        Ok(out)
    }

    /// Rejects the trial when an eigenvalue lies within `dist` of an integer.
    pub fn avoid_integers(&self, m: &CMatrix, dist: f64) -> Result<()> {
        for z in schur(m)?.eigenvalues() {
            if (z - z.re.round()).norm() < dist {
                return Err(MgfError::GeneratorInfeasible(format!(
                    "eigenvalue {z} within {dist} of an integer"
                )));
            }
        }
        Ok(())
    }

    /// Residual of two sides, or `∞` with the error recorded.
    pub fn resid(&mut self, lhs: Result<CMatrix>, rhs: Result<CMatrix>) -> f64 {
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => residual(&l, &r),
            (Err(e), _) | (_, Err(e)) => {
                self.errors.push(e.to_string());
                f64::INFINITY
            }
        }
    }

    /// `∞` with the error recorded.
    pub fn failed(&mut self, e: MgfError) -> f64 {
        self.errors.push(e.to_string());
        f64::INFINITY
    }
}
