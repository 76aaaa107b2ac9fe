//! Weakened-pair validation: joining-line orthogonality plus estimation of
//! the degenerate sets Z (where ds*/ds = 0) and N (where ds/ds* = 0) at
//! sample resolution.

use super::PairError;
use crate::curves::{arclength_map, Curve, MonotoneMap};
use crate::lorentz::{jvec_deriv, jvec_dot_in, jvec_scale, jvec_value, minkowski_dot_in};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct WmOutcome {
    /// Per-sample (s, s*, |<d,T>|, |<d,T~>|, ds*/ds estimate).
    pub rows: Vec<(f64, f64, f64, f64, f64)>,
    /// Parameter intervals where |ds*/ds| < tol_zero.
    pub z_intervals: Vec<(f64, f64)>,
    /// Parameter intervals where |ds/ds*| < tol_zero.
    pub n_intervals: Vec<(f64, f64)>,
    /// No two consecutive samples inside Z (resp. N).
    pub z_empty_interior: bool,
    pub n_empty_interior: bool,
    pub max_orth_g: f64,
    pub max_orth_gt: f64,
}

/// Central finite-difference derivative of uniformly sampled values. The
/// 3-point stencil keeps the straddle of a degenerate (flat) region to one
/// sample on each side, so detected Z intervals track the true interval
/// endpoints at sample resolution.
fn fd_derivative(vals: &[f64], h: f64) -> Vec<f64> {
    let n = vals.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        out[i] = if i >= 1 && i + 1 < n {
            (vals[i + 1] - vals[i - 1]) / (2.0 * h)
        } else if i == 0 {
            (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * h)
        } else {
            (3.0 * vals[n - 1] - 4.0 * vals[n - 2] + vals[n - 3]) / (2.0 * h)
        };
    }
    out
}

/// Groups flagged grid cells [s_i, s_{i+1}] into intervals. A run of two
/// or more cells has an interior sample, so the estimated set fails the
/// empty-interior requirement.
fn flag_cell_intervals(ss: &[f64], cell_flags: &[bool]) -> (Vec<(f64, f64)>, bool) {
    let mut intervals = Vec::new();
    let mut empty_interior = true;
    let mut start: Option<usize> = None;
    for i in 0..cell_flags.len() {
        if cell_flags[i] {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s0) = start.take() {
            intervals.push((ss[s0], ss[i]));
            if i - s0 >= 2 {
                empty_interior = false;
            }
        }
    }
    if let Some(s0) = start {
        intervals.push((ss[s0], ss[cell_flags.len()]));
        if cell_flags.len() - s0 >= 2 {
            empty_interior = false;
        }
    }
    (intervals, empty_interior)
}

/// Validates a weakened pair: orthogonality of the joining line at every
/// sample and empty-interior estimates for Z and N. The correspondence is
/// a monotone map s -> s* between arc lengths; plateaus are allowed (they
/// are exactly what the Z set estimates), decreasing samples are rejected
/// with `NotMonotone`.
pub fn wm_validate(
    g: &dyn Curve,
    gt: &dyn Curve,
    corr_s_to_sstar: &MonotoneMap,
    tol_zero: f64,
    samples: usize,
) -> Result<WmOutcome, PairError> {
    if corr_s_to_sstar.y.windows(2).any(|w| w[1] < w[0]) {
        return Err(PairError::NotMonotone);
    }
    let sig = g.signature();
    let g_map = arclength_map(g, g.domain(), 1e-10)?;
    let gt_map = arclength_map(gt, gt.domain(), 1e-10)?;
    let (s_lo, s_hi) = corr_s_to_sstar.x_range();
    let pad = 1e-9 * (s_hi - s_lo);
    let n = samples.max(7);
    let h = (s_hi - s_lo - 2.0 * pad) / (n - 1) as f64;
    let mut ss = Vec::with_capacity(n);
    let mut sstars = Vec::with_capacity(n);
    for i in 0..n {
        let s = s_lo + pad + h * i as f64;
        ss.push(s);
        sstars.push(corr_s_to_sstar.eval(s));
    }
    let sigma_prime = fd_derivative(&sstars, h);

    let mut rows = Vec::with_capacity(n);
    let mut max_g: f64 = 0.0;
    let mut max_gt: f64 = 0.0;
    for i in 0..n {
        let s = ss[i];
        let s_star = sstars[i];
        let t_g = g_map.t_of_s(s);
        let t_gt = gt_map.t_of_s(s_star);
        let pa = jvec_value(&g.jets(t_g)?);
        let pb = jvec_value(&gt.jets(t_gt)?);
        let d = pa.sub(&pb);
        let tangent = |c: &dyn Curve, t: f64| -> Result<_, PairError> {
            let j = c.jets(t)?;
            let d1 = jvec_deriv(&j);
            let q = jvec_dot_in(sig, &d1, &d1);
            let eps = q.value().signum();
            let m = (q * eps).sqrt();
            Ok(jvec_value(&jvec_scale(&d1, m.recip())))
        };
        let tg = tangent(g, t_g)?;
        let tgt = tangent(gt, t_gt)?;
        let og = minkowski_dot_in(sig, &d, &tg).abs();
        let ogt = minkowski_dot_in(sig, &d, &tgt).abs();
        max_g = max_g.max(og);
        max_gt = max_gt.max(ogt);
        rows.push((s, s_star, og, ogt, sigma_prime[i]));
    }

    // degenerate-set estimation on grid cells: the forward difference over
    // [s_i, s_{i+1}] certifies that whole cell, so detected interval
    // endpoints track the true ones within one sample spacing
    let mut z_cells = Vec::with_capacity(n - 1);
    let mut n_cells = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let d = (sstars[i + 1] - sstars[i]) / h;
        z_cells.push(d.abs() < tol_zero);
        n_cells.push(d.abs() > 1.0 / tol_zero);
    }
    let (z_intervals, z_empty_interior) = flag_cell_intervals(&ss, &z_cells);
    let (n_intervals, n_empty_interior) = flag_cell_intervals(&ss, &n_cells);

    Ok(WmOutcome {
        rows,
        z_intervals,
        n_intervals,
        z_empty_interior,
        n_empty_interior,
        max_orth_g: max_g,
        max_orth_gt: max_gt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_derivative_is_accurate() {
        let h = 0.01;
        let vals: Vec<f64> = (0..101).map(|i| (i as f64 * h).sin()).collect();
        let d = fd_derivative(&vals, h);
        for (i, di) in d.iter().enumerate() {
            let expect = (i as f64 * h).cos();
            // second-order central stencil: error ~ h^2 f'''/6
            assert!((di - expect).abs() < 5.0 * h * h, "i={i}: {di} vs {expect}");
        }
    }

    #[test]
    fn cell_interval_flagging() {
        let ss: Vec<f64> = (0..10).map(|i| i as f64).collect();
        // 9 cells between 10 samples
        let flags = vec![false, true, false, false, true, true, true, false, true];
        let (ivs, empty) = flag_cell_intervals(&ss, &flags);
        assert_eq!(ivs, vec![(1.0, 2.0), (4.0, 7.0), (8.0, 9.0)]);
        assert!(!empty);
        // isolated single cells keep an empty interior
        let flags2 = vec![false, true, false, false, true, false, false, false, false];
        let (_, empty2) = flag_cell_intervals(&ss, &flags2);
        assert!(empty2);
    }
}
