//! Per-sample pair checks: the eight angle identities, the torsion
//! formula, the constancy quantity, the helix/line characterization and
//! joining-line orthogonality.
//!
//! Identity residuals are evaluated in their standard form and, where the
//! standard signs cannot hold for mixed tangent characters (e1 != e1~,
//! cases 2 and 5), also in the character-resolved form; the reporting
//! layer turns persistent gaps between the two into sign-convention
//! findings rather than hiding them.

use super::construct::MannheimPair;
use super::{partner_torsion, CaseId, PairError};
use crate::curves::{ArcLengthMap, Curve, MonotoneMap};
use crate::frenet::frenet_at_param;
use crate::lorentz::{jvec_deriv, jvec_dot_in, jvec_scale, jvec_value, minkowski_dot_in};
use serde::Serialize;

/// One pair sample: geometry, decomposition coefficients and residuals.
#[derive(Debug, Clone, Serialize)]
pub struct SampleRow {
    pub s: f64,
    pub s_star: f64,
    pub distance: f64,
    pub phi: f64,
    /// Standard-form identity residuals i..viii; `None` where not applicable.
    pub res: [Option<f64>; 8],
    /// Character-resolved residuals for (ii)/(vi), (iii)/(vii), (iv)/(viii).
    pub res_resolved: [f64; 3],
    /// Relative defect of the measured partner torsion vs the case formula.
    pub res_torsion: f64,
    pub res_orth_g: f64,
    pub res_orth_gt: f64,
    /// Euclidean defect of N - mu B~ (the pair property itself).
    pub fm_defect: f64,
    /// |ds/ds* - sqrt(e1 (e1~ + e2~ lambda^2 tau~^2))|.
    pub res_speed_formula: f64,
    /// |ds*/ds - x| (the speed relation against the decomposition).
    pub res_speed_decomp: f64,
    /// Measured ds*/ds at the sample.
    pub dsstar_ds: f64,
    /// Residual |tau sigma' lambda mu + 1| of the degenerate circular
    /// branch, present when the tangent decomposition has cos(phi) ~ 0.
    pub res_cos_zero_branch: Option<f64>,
    /// Tangent decomposition coefficients in the partner frame.
    pub x: f64,
    pub y: f64,
    /// Sign of <N, B~>/<B~,B~> at this sample.
    pub mu_sample: f64,
    pub kappa_g: f64,
    pub tau_g: f64,
    pub tau_gt: f64,
}

/// Evaluates all per-sample checks at `n` samples spread over the
/// correspondence domain.
pub fn pair_samples(pair: &MannheimPair, n: usize) -> Result<Vec<SampleRow>, PairError> {
    if n == 0 {
        return Err(PairError::EmptyReport);
    }
    let sig = pair.g.signature();
    let link = &pair.link;
    let lambda = link.lambda;
    let mu = link.mu;
    let omega = link.binormal_sign;
    let circular = link.case_id.is_circular();
    let (sstar_lo, sstar_hi) = link.correspondence.x_range();
    // keep a hair inside the domain so map inversion stays in range
    let pad = 1e-6 * (sstar_hi - sstar_lo);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let s_star = if n == 1 {
            0.5 * (sstar_lo + sstar_hi)
        } else {
            sstar_lo + pad + (sstar_hi - sstar_lo - 2.0 * pad) * i as f64 / (n - 1) as f64
        };
        let s = link.correspondence.eval(s_star);
        let t_gt = pair.gt_map.t_of_s(s_star);
        let t_g = pair.g_map.t_of_s(s);
        let fg = frenet_at_param(pair.g.as_ref(), t_g, s)?;
        let fgt = frenet_at_param(pair.gt.as_ref(), t_gt, s_star)?;

        let alpha = jvec_value(&pair.g.jets(t_g)?);
        let beta = jvec_value(&pair.gt.jets(t_gt)?);
        let d = alpha.sub(&beta);
        let distance = minkowski_dot_in(sig, &d, &d).abs().sqrt();

        let b_link = fgt.binormal.scale(omega);
        let tau_gt = omega * fgt.tau;
        let bb = minkowski_dot_in(sig, &b_link, &b_link);
        let mu_sample = (minkowski_dot_in(sig, &fg.normal, &b_link) / bb).signum();

        let x = fgt.eps1 * minkowski_dot_in(sig, &fg.tangent, &fgt.tangent);
        let y = fgt.eps2 * minkowski_dot_in(sig, &fg.tangent, &fgt.normal);
        let phi = if circular { y.atan2(x) } else { y.asinh() };

        let e1 = fg.eps1;
        let e2 = fg.eps2;
        let e1t = fgt.eps1;
        let kappa = fg.kappa;
        let tau = fg.tau;
        let p = 1.0 + e1 * e2 * lambda * mu * kappa;

        let mut res: [Option<f64>; 8] = [None; 8];
        if circular {
            res[4] = Some(y - lambda * tau_gt * x);
            res[5] = Some(p * y - lambda * mu * tau * x);
            res[6] = Some(x * x - p);
            res[7] = Some(y * y - lambda * lambda * mu * tau * tau_gt);
        } else {
            res[0] = Some(y - lambda * e1t * tau_gt * x);
            res[1] = Some(p * y + lambda * mu * tau * x);
            res[2] = Some(x * x - p);
            res[3] = Some(y * y + lambda * lambda * mu * e1t * tau * tau_gt);
        }
        // character-resolved forms, exact for genuine pairs under the
        // pinned frame conventions
        let res_resolved = [
            p * y + lambda * tau * x,
            x * x - e1 * e1t * p,
            y * y + e1 * lambda * lambda * tau * tau_gt,
        ];

        let formula = partner_torsion(kappa, tau, lambda, mu, link.case_id)?;
        let res_torsion = (tau_gt - formula).abs() / tau_gt.abs().max(1e-12);

        let res_orth_g = minkowski_dot_in(sig, &d, &fg.tangent).abs();
        let res_orth_gt = minkowski_dot_in(sig, &d, &fgt.tangent).abs();

        let fm_defect = fg.normal.sub(&b_link.scale(mu)).euclid_norm();

        let sigma_prime = link.correspondence.eval_deriv(s_star); // ds/ds*
        let radicand = e1 * (e1t + fgt.eps2 * lambda * lambda * tau_gt * tau_gt);
        let res_speed_formula = if radicand > 0.0 {
            (sigma_prime - radicand.sqrt()).abs()
        } else {
            f64::INFINITY
        };
        let res_speed_decomp = (1.0 / sigma_prime - x).abs();
        let dsstar_ds = 1.0 / sigma_prime;
        let res_cos_zero_branch = if circular && x.abs() < 1e-6 {
            Some((tau * dsstar_ds * lambda * mu + 1.0).abs())
        } else {
            None
        };

        rows.push(SampleRow {
            s,
            s_star,
            distance,
            phi,
            res,
            res_resolved,
            res_torsion,
            res_orth_g,
            res_orth_gt,
            fm_defect,
            res_speed_formula,
            res_speed_decomp,
            dsstar_ds,
            res_cos_zero_branch,
            x,
            y,
            mu_sample,
            kappa_g: kappa,
            tau_g: tau,
            tau_gt,
        });
    }
    Ok(rows)
}

/// The angle identities at `n` samples (the full sample rows; identity
/// columns carry the applicable set for the pair's case).
pub fn check_angle_identities(
    pair: &MannheimPair,
    samples: usize,
) -> Result<Vec<SampleRow>, PairError> {
    pair_samples(pair, samples)
}

/// Joining-line orthogonality residual columns (|<d,T>|, |<d,T~>|).
pub fn check_orthogonality(
    pair: &MannheimPair,
    samples: usize,
) -> Result<Vec<(f64, f64)>, PairError> {
    Ok(pair_samples(pair, samples)?
        .into_iter()
        .map(|r| (r.res_orth_g, r.res_orth_gt))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstancyOutcome {
    pub values: Vec<f64>,
    pub mean: f64,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Constancy of (e1~ tau + tau~)/(kappa tau~) (cases 1, 2, 4, 5) or
/// (tau + tau~)/(kappa tau~) (case 3) over the samples.
pub fn check_constancy_quotient(
    pair: &MannheimPair,
    samples: usize,
    tolerance: f64,
) -> Result<ConstancyOutcome, PairError> {
    let rows = pair_samples(pair, samples)?;
    constancy_from_rows(&rows, pair.link.case_id, pair_eps1t(pair)?, tolerance)
}

fn pair_eps1t(pair: &MannheimPair) -> Result<f64, PairError> {
    let (t0, t1) = pair.gt.domain();
    let anchor = 0.5 * (t0 + t1);
    let f = frenet_at_param(pair.gt.as_ref(), anchor, pair.gt_map.s_of_t(anchor))?;
    Ok(f.eps1)
}

/// Remark-1 quantity from already-computed rows.
pub(crate) fn constancy_from_rows(
    rows: &[SampleRow],
    case: CaseId,
    eps1t: f64,
    tolerance: f64,
) -> Result<ConstancyOutcome, PairError> {
    if rows.is_empty() {
        return Err(PairError::EmptyReport);
    }
    let mut values = Vec::with_capacity(rows.len());
    for r in rows {
        let den = r.kappa_g * r.tau_gt;
        if den.abs() < 1e-12 {
            return Err(PairError::DivisionDegenerate(den));
        }
        let num = if case.is_circular() {
            r.tau_g + r.tau_gt
        } else {
            eps1t * r.tau_g + r.tau_gt
        };
        values.push(num / den);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_deviation = values
        .iter()
        .map(|v| (v - mean).abs())
        .fold(0.0f64, f64::max);
    Ok(ConstancyOutcome {
        values,
        mean,
        max_deviation,
        pass: max_deviation < tolerance,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HelixLineOutcome {
    /// <T, T~> is constant and nonzero across the samples.
    pub angle_side: bool,
    /// kappa and tau constant and the partner straight.
    pub helix_line_side: bool,
    /// <T, T~> vanishes everywhere: the remark's hypothesis fails.
    pub indeterminate: bool,
    pub tangent_dot_deviation: f64,
    pub kappa_deviation: f64,
    pub tau_deviation: f64,
    pub gt_max_curvature: f64,
}

impl HelixLineOutcome {
    pub fn sides_agree(&self) -> bool {
        self.indeterminate || self.angle_side == self.helix_line_side
    }
}

/// Checks both sides of the helix/line characterization: the tangent
/// angle is constant (with nonzero product) iff the curve is a circular
/// helix and its conjugate a straight line. The partner's curvature is
/// measured frame-free so straight lines are admissible.
pub fn check_helix_line_characterization(
    g: &dyn Curve,
    g_map: &ArcLengthMap,
    gt: &dyn Curve,
    gt_map: &ArcLengthMap,
    corr_s_to_sstar: &MonotoneMap,
    samples: usize,
) -> Result<HelixLineOutcome, PairError> {
    let sig = g.signature();
    let (s_lo, s_hi) = corr_s_to_sstar.x_range();
    let pad = 1e-6 * (s_hi - s_lo);
    let mut dots = Vec::with_capacity(samples);
    let mut kappas = Vec::with_capacity(samples);
    let mut taus = Vec::with_capacity(samples);
    let mut gt_kappa_max: f64 = 0.0;
    for i in 0..samples {
        let s = s_lo + pad + (s_hi - s_lo - 2.0 * pad) * i as f64 / (samples - 1) as f64;
        let s_star = corr_s_to_sstar.eval(s);
        let t_g = g_map.t_of_s(s);
        let t_gt = gt_map.t_of_s(s_star);
        let fg = frenet_at_param(g, t_g, s)?;
        kappas.push(fg.kappa);
        taus.push(fg.tau);
        // frame-free unit tangent and bending of the partner
        let j = gt.jets(t_gt)?;
        let d1 = jvec_deriv(&j);
        let q = jvec_dot_in(sig, &d1, &d1);
        let m = q.value().abs().sqrt();
        if m < 1e-12 {
            return Err(PairError::Curve(crate::curves::CurveError::NotRegular));
        }
        let eps = q.value().signum();
        let m_jet = (q * eps).sqrt();
        let t_jet = jvec_scale(&d1, m_jet.recip());
        let tangent_gt = jvec_value(&t_jet);
        let dtds = jvec_value(&jvec_scale(&jvec_deriv(&t_jet), m_jet.recip()));
        gt_kappa_max = gt_kappa_max.max(dtds.euclid_norm());
        dots.push(minkowski_dot_in(sig, &fg.tangent, &tangent_gt));
    }
    let dev = |v: &[f64]| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let d = v.iter().map(|x| (x - mean).abs()).fold(0.0f64, f64::max);
        (mean, d)
    };
    let (dot_mean, dot_dev) = dev(&dots);
    let (_, kappa_dev) = dev(&kappas);
    let (_, tau_dev) = dev(&taus);
    let tol_const = 1e-6;
    let indeterminate = dots.iter().all(|d| d.abs() < 1e-9);
    let angle_side = !indeterminate && dot_dev < tol_const && dot_mean.abs() > 1e-9;
    let helix_line_side = kappa_dev < tol_const && tau_dev < tol_const && gt_kappa_max < 1e-8;
    Ok(HelixLineOutcome {
        angle_side,
        helix_line_side,
        indeterminate,
        tangent_dot_deviation: dot_dev,
        kappa_deviation: kappa_dev,
        tau_deviation: tau_dev,
        gt_max_curvature: gt_kappa_max,
    })
}

/// Synthetic identity evaluation for formula-level unit tests.
#[cfg(test)]
pub(crate) fn identity_iii_residual(x: f64, e1: f64, e2: f64, lambda: f64, mu: f64, kappa: f64) -> f64 {
    x * x - (1.0 + e1 * e2 * lambda * mu * kappa)
}
