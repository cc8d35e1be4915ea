//! Truncation control shared by every matrix series in the crate.

use serde::Serialize;

use crate::error::{MgfError, Result};
use crate::hyper::ConvergenceClass;
use crate::matcore::CMatrix;

/// Default cap on the number of terms of any series.
pub const DEFAULT_TERM_CAP: usize = 2000;

/// Stopping rule: a series ends once three consecutive terms fall below
/// `tol · (‖partial sum‖ + 1e-300)`; reaching `term_cap` first is an error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesControl {
    pub tol: f64,
    pub term_cap: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            tol: f64::EPSILON,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

/// Value of a truncated matrix series.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesResult {
    pub value: CMatrix,
    pub terms_used: usize,
    pub tail_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceClass>,
}

/// Running sum with the stopping rule of [`SeriesControl`].
pub struct Accumulator {
    ctl: SeriesControl,
    sum: CMatrix,
    terms: usize,
    small_run: usize,
    last: [f64; 3],
}

impl Accumulator {
    pub fn new(n: usize, ctl: SeriesControl) -> Self {
        Accumulator {
            ctl,
            sum: CMatrix::zeros(n),
            terms: 0,
            small_run: 0,
            last: [f64::INFINITY; 3],
        }
    }

    /// Adds a term; `Ok(true)` once the series has converged.
    pub fn push(&mut self, term: &CMatrix) -> Result<bool> {
        self.sum += term;
        self.terms += 1;
        let tn = term.norm_fro();
        self.last = [self.last[1], self.last[2], tn];
        if !self.sum.is_finite() {
            return Err(MgfError::Domain(format!(
                "series overflowed after {} terms",
                self.terms
            )));
        }
        if tn < self.ctl.tol * (self.sum.norm_fro() + 1e-300) {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        if self.small_run >= 3 {
            return Ok(true);
        }
        if self.terms >= self.ctl.term_cap {
            return Err(MgfError::Truncation {
                terms: self.terms,
                tail_estimate: self.tail_estimate(),
            });
        }
        Ok(false)
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn sum(&self) -> &CMatrix {
        &self.sum
    }

    /// Geometric extrapolation of the remainder from the last three terms.
    pub fn tail_estimate(&self) -> f64 {
        let [a, b, c] = self.last;
        if c == 0.0 {
            return 0.0;
        }
        let mut r: f64 = 0.0;
        if b > 0.0 && b.is_finite() {
            r = r.max(c / b);
        }
        if a > 0.0 && a.is_finite() {
            r = r.max(b / a);
        }
        if r > 0.0 && r < 1.0 {
            c * r / (1.0 - r)
        } else {
            c
        }
    }

    pub fn finish(self, convergence: Option<ConvergenceClass>) -> SeriesResult {
        let tail_estimate = self.tail_estimate();
        SeriesResult {
            value: self.sum,
            terms_used: self.terms,
            tail_estimate,
            convergence,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn geometric_series_stops_and_estimates_tail() {
        let mut acc = Accumulator::new(1, SeriesControl::default());
        let mut k = 0;
        while !acc.push(&CMatrix::scalar(1, C64::new(0.5f64.powi(k), 0.0))).unwrap() {
            k += 1;
        }
        let v = acc.sum().get(0, 0).re;
        assert!((v - 2.0).abs() < 1e-15);
        assert!(acc.tail_estimate() < 1e-15);
    }

    #[test]
    fn cap_raises_truncation() {
        let ctl = SeriesControl {
            tol: 1e-16,
            term_cap: 10,
        };
        let mut acc = Accumulator::new(1, ctl);
        let one = CMatrix::identity(1);
        let err = loop {
            match acc.push(&one) {
                Ok(false) => continue,
                Ok(true) => panic!("diverging series converged"),
                Err(e) => break e,
            }
        };
        assert!(matches!(err, MgfError::Truncation { terms: 10, .. }));
    }
}
