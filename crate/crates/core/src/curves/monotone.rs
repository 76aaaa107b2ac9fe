//! Strictly monotone sampled maps with cubic-Hermite evaluation and
//! safeguarded-Newton inversion. Used for arc-length maps and for the
//! Mannheim correspondence s <-> s*.

use serde::{Deserialize, Serialize};

/// A strictly increasing map y(x) stored as dense Hermite data
/// (node positions, values and derivatives dy/dx).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotoneMap {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub dydx: Vec<f64>,
}

impl MonotoneMap {
    pub fn new(x: Vec<f64>, y: Vec<f64>, dydx: Vec<f64>) -> Self {
        debug_assert!(x.len() == y.len() && y.len() == dydx.len() && x.len() >= 2);
        MonotoneMap { x, y, dydx }
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y[0], *self.y.last().unwrap())
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.y.windows(2).all(|w| w[1] > w[0])
    }

    fn segment(&self, x: f64) -> usize {
        match self.x.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    /// Hermite evaluation of y(x); clamps to the stored range.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let u = ((x - x0) / h).clamp(0.0, 1.0);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.dydx[i] * h, self.dydx[i + 1] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * m0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * m1
    }

    /// Derivative dy/dx of the Hermite interpolant.
    pub fn eval_deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let u = ((x - x0) / h).clamp(0.0, 1.0);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.dydx[i] * h, self.dydx[i + 1] * h);
        let u2 = u * u;
        let dy_du = (6.0 * u2 - 6.0 * u) * y0
            + (3.0 * u2 - 4.0 * u + 1.0) * m0
            + (-6.0 * u2 + 6.0 * u) * y1
            + (3.0 * u2 - 2.0 * u) * m1;
        dy_du / h
    }

    /// Inverse x(y) by bisection-bracketed Newton on the interpolant.
    pub fn inverse(&self, y: f64) -> f64 {
        let (ylo, yhi) = self.y_range();
        if y <= ylo {
            return self.x[0];
        }
        if y >= yhi {
            return *self.x.last().unwrap();
        }
        // bracket by node values
        let i = match self
            .y
            .binary_search_by(|v| v.partial_cmp(&y).unwrap())
        {
            Ok(i) => return self.x[i],
            Err(i) => i - 1,
        };
        let (mut lo, mut hi) = (self.x[i], self.x[i + 1]);
        let mut x = lo + (hi - lo) * (y - self.y[i]) / (self.y[i + 1] - self.y[i]);
        for _ in 0..60 {
            let f = self.eval(x) - y;
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.eval_deriv(x);
            let mut step = if d != 0.0 { f / d } else { 0.0 };
            let mut xn = x - step;
            if !(lo..=hi).contains(&xn) || step == 0.0 {
                xn = 0.5 * (lo + hi);
                step = x - xn;
            }
            x = xn;
            if step.abs() < 1e-15 * (1.0 + x.abs()) || hi - lo < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        x
    }
}
