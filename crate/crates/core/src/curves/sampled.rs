//! Sampled curves with finite-difference derivatives.
//!
//! Derivatives come from central stencils on a uniform grid: 5-point
//! stencils for orders 1 and 2 (O(h^4)) and a 7-point stencil for order 3
//! (O(h^4)). Non-uniform input is resampled by cubic interpolation onto a
//! uniform grid first. Off-node queries are served by a Taylor shift from
//! the nearest node.

use super::{Curve, CurveError};
use crate::jet::{Jet, JET_LEN};
use crate::lorentz::{JVec3, MVec3, Signature};

pub struct SampledCurve {
    sig: Signature,
    t0: f64,
    h: f64,
    points: Vec<MVec3>,
}

/// Natural cubic spline through (xs, ys); returns second derivatives.
fn spline_second_derivs(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    let mut u = vec![0.0; n];
    for i in 1..n - 1 {
        let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
        let p = sig * m[i - 1] + 2.0;
        m[i] = (sig - 1.0) / p;
        let d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
            - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        u[i] = (6.0 * d / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
    }
    for i in (1..n - 1).rev() {
        let next = m[i + 1];
        m[i] = m[i] * next + u[i];
    }
    m[0] = 0.0;
    m[n - 1] = 0.0;
    m
}

fn spline_eval(xs: &[f64], ys: &[f64], y2: &[f64], x: f64) -> f64 {
    let mut lo = 0usize;
    let mut hi = xs.len() - 1;
    while hi - lo > 1 {
        let mid = (hi + lo) / 2;
        if xs[mid] > x {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let h = xs[hi] - xs[lo];
    let a = (xs[hi] - x) / h;
    let b = (x - xs[lo]) / h;
    a * ys[lo] + b * ys[hi]
        + ((a * a * a - a) * y2[lo] + (b * b * b - b) * y2[hi]) * h * h / 6.0
}

impl SampledCurve {
    pub fn new(sig: Signature, ts: &[f64], points: &[MVec3]) -> Result<Self, CurveError> {
        if ts.len() < 7 {
            return Err(CurveError::TooFewSamples(ts.len()));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CurveError::NotIncreasing);
        }
        let n = ts.len();
        let h_first = ts[1] - ts[0];
        let uniform = ts
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h_first).abs() < 1e-9 * (1.0 + h_first.abs()));
        if uniform {
            return Ok(SampledCurve {
                sig,
                t0: ts[0],
                h: h_first,
                points: points.to_vec(),
            });
        }
        // resample by cubic interpolation onto a uniform grid of equal size
        let t0 = ts[0];
        let h = (ts[n - 1] - ts[0]) / (n - 1) as f64;
        let mut comps: Vec<Vec<f64>> = vec![Vec::with_capacity(n); 3];
        for p in points {
            comps[0].push(p.x1);
            comps[1].push(p.x2);
            comps[2].push(p.x3);
        }
        let y2: Vec<Vec<f64>> = comps.iter().map(|c| spline_second_derivs(ts, c)).collect();
        let mut resampled = Vec::with_capacity(n);
        for i in 0..n {
            let t = t0 + i as f64 * h;
            resampled.push(MVec3::new(
                spline_eval(ts, &comps[0], &y2[0], t),
                spline_eval(ts, &comps[1], &y2[1], t),
                spline_eval(ts, &comps[2], &y2[2], t),
            ));
        }
        Ok(SampledCurve {
            sig,
            t0,
            h,
            points: resampled,
        })
    }

    fn t_end(&self) -> f64 {
        self.t0 + self.h * (self.points.len() - 1) as f64
    }

    fn comp(&self, i: usize, axis: usize) -> f64 {
        self.points[i].comp(axis)
    }

    /// Stencil derivatives of one component at node i. Orders 1-3 are the
    /// documented O(h^4) estimates; orders 4-5 are lower-order correctors
    /// that keep the off-node Taylor shift of the third derivative from
    /// degrading to O(h).
    fn node_derivs(&self, i: usize, axis: usize) -> [f64; 6] {
        let h = self.h;
        let f = |k: isize| self.comp((i as isize + k) as usize, axis);
        let d0 = f(0);
        let d1 = (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / (12.0 * h);
        let d2 = (-f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) / (12.0 * h * h);
        let d3 =
            (f(-3) - 8.0 * f(-2) + 13.0 * f(-1) - 13.0 * f(1) + 8.0 * f(2) - f(3)) / (8.0 * h * h * h);
        let h4 = h * h * h * h;
        let d4 = (f(-2) - 4.0 * f(-1) + 6.0 * f(0) - 4.0 * f(1) + f(2)) / h4;
        let d5 = (-f(-3) + 4.0 * f(-2) - 5.0 * f(-1) + 5.0 * f(1) - 4.0 * f(2) + f(3))
            / (2.0 * h4 * h);
        [d0, d1, d2, d3, d4, d5]
    }

    fn node_index(&self, t: f64) -> Result<usize, CurveError> {
        let n = self.points.len();
        let idx = ((t - self.t0) / self.h).round() as isize;
        // order-3 stencil needs 3 nodes on each side
        if idx < 3 || idx as usize + 3 >= n {
            return Err(CurveError::OutOfRange(t));
        }
        if (t - (self.t0 + idx as f64 * self.h)).abs() > 0.5 * self.h + 1e-12 {
            return Err(CurveError::OutOfRange(t));
        }
        Ok(idx as usize)
    }
}

impl Curve for SampledCurve {
    fn domain(&self) -> (f64, f64) {
        // usable domain excludes the stencil margin
        (self.t0 + 3.0 * self.h, self.t_end() - 3.0 * self.h)
    }

    fn jets(&self, t: f64) -> Result<JVec3, CurveError> {
        let i = self.node_index(t)?;
        let node_t = self.t0 + i as f64 * self.h;
        let dt = t - node_t;
        let mut out = [Jet::constant(0.0); 3];
        for axis in 0..3 {
            let d = self.node_derivs(i, axis);
            // Taylor shift from the node to t
            let mut shifted = [0.0; 6];
            for k in 0..6 {
                let mut acc = 0.0;
                let mut fact = 1.0;
                for (j, dj) in d.iter().enumerate().skip(k) {
                    if j > k {
                        fact *= (j - k) as f64;
                    }
                    acc += dj * dt.powi((j - k) as i32) / fact;
                }
                shifted[k] = acc;
            }
            let mut c = [0.0; JET_LEN];
            let mut kfact = 1.0;
            for k in 0..6 {
                if k > 0 {
                    kfact *= k as f64;
                }
                c[k] = shifted[k] / kfact;
            }
            out[axis] = Jet { c };
        }
        Ok(out)
    }

    fn signature(&self) -> Signature {
        self.sig
    }

    fn max_order(&self) -> Option<usize> {
        Some(3)
    }
}

/// Central finite-difference derivative of a sampled curve at `t`.
pub fn sampled_derivatives(
    sig: Signature,
    ts: &[f64],
    points: &[MVec3],
    t: f64,
    order: usize,
) -> Result<MVec3, CurveError> {
    if order == 0 || order > 3 {
        return Err(CurveError::OrderUnavailable { order, max: 3 });
    }
    let curve = SampledCurve::new(sig, ts, points)?;
    super::derivative(&curve, t, order)
}
