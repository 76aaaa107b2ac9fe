//! Constructors: the binormal-offset partner curve, the planar conjugate,
//! and pair assembly from two independently given curves.

use super::{classify_case, MannheimLink, PairError};
use crate::curves::{arclength_map, ArcLengthMap, Curve, CurveError, MonotoneMap};
use crate::frenet::{frame_jets, frenet_at_param, FrenetData};
use crate::jet::JET_LEN;
use crate::lorentz::{
    jvec_add, jvec_deriv, jvec_dot_in, jvec_scale, jvec_value, minkowski_dot_in, JVec3, MVec3,
    Signature,
};
use std::sync::Arc;

/// A Mannheim pair: the curve, its conjugate, their arc-length maps and the
/// pairing data. The curve `g` is parametrized by the conjugate's parameter
/// (the correspondence is the identity in that parameter).
pub struct MannheimPair {
    pub g: Arc<dyn Curve>,
    pub g_map: ArcLengthMap,
    pub gt: Arc<dyn Curve>,
    pub gt_map: ArcLengthMap,
    pub link: MannheimLink,
    /// Requested mu, when the caller declared one.
    pub mu_requested: Option<f64>,
}

impl MannheimPair {
    /// Frenet data of both curves at a shared parameter value.
    pub fn frames_at(&self, t: f64) -> Result<(FrenetData, FrenetData), PairError> {
        let s = self.g_map.s_of_t(t);
        let st = self.gt_map.s_of_t(t);
        let g = frenet_at_param(self.g.as_ref(), t, s)?;
        let gt = frenet_at_param(self.gt.as_ref(), t, st)?;
        Ok((g, gt))
    }
}

/// The offset curve alpha(t) = beta(t) + lambda_raw * (T~ ^ N~)(t), with
/// jets composed from the base curve's jets.
struct PartnerCurve {
    base: Arc<dyn Curve>,
    lambda_raw: f64,
}

impl Curve for PartnerCurve {
    fn domain(&self) -> (f64, f64) {
        self.base.domain()
    }

    fn jets(&self, t: f64) -> Result<JVec3, CurveError> {
        let f = frame_jets(self.base.as_ref(), t, t)
            .map_err(|_| CurveError::NotRegular)?;
        let p = self.base.jets(t)?;
        Ok(jvec_add(&p, &jvec_scale(&f.binormal, crate::jet::Jet::constant(self.lambda_raw))))
    }

    fn signature(&self) -> Signature {
        self.base.signature()
    }

    fn max_order(&self) -> Option<usize> {
        // two derivative orders are spent building the frame
        Some(self.base.max_order().unwrap_or(JET_LEN - 1).saturating_sub(2))
    }
}

/// Number of probe points used for sign/degeneracy validation.
const PROBES: usize = 64;

fn probe_params(domain: (f64, f64), n: usize) -> Vec<f64> {
    let (t0, t1) = domain;
    (0..n)
        .map(|i| t0 + (t1 - t0) * (i as f64 + 0.5) / n as f64)
        .collect()
}

/// Builds the partner curve alpha = beta + lambda B~ from the conjugate
/// `gt` and assembles the pair.
///
/// `lambda` is the offset along the oriented binormal (see the module
/// docs); it must be nonzero. `mu` is the caller's declared sign, checked
/// against the measured one by the reporting layer. Fails with
/// `ZeroTorsion` if the conjugate's torsion vanishes at a probe and with
/// `ImaginarySpeed` if the speed radicand `e1~ + e2~ lambda^2 tau~^2`
/// degenerates or changes sign (the offset curve would be null there).
pub fn construct_partner_curve(
    gt: Arc<dyn Curve>,
    lambda: f64,
    mu: Option<f64>,
) -> Result<MannheimPair, PairError> {
    if lambda == 0.0 {
        return Err(PairError::ZeroLambda);
    }
    let domain = gt.domain();
    let gt_map = arclength_map(gt.as_ref(), domain, 1e-10)?;

    // probe the conjugate: constant signs, nonzero torsion, radicand, and
    // the admissibility law for this offset. Torsion and its arc-length
    // derivative come from the frame jets, so the admissibility residual is
    // exact (no differencing noise): it vanishes iff the offset curve's
    // normal stays on the joining line.
    let sig = gt.signature();
    let probes = probe_params(domain, PROBES);
    let mut eps1t = 0.0;
    let mut eps2t = 0.0;
    let mut radicand_sign = 0.0;
    let mut admissibility: f64 = 0.0;
    for &t in &probes {
        let f = frenet_at_param(gt.as_ref(), t, gt_map.s_of_t(t))?;
        if eps1t == 0.0 {
            eps1t = f.eps1;
            eps2t = f.eps2;
        } else if f.eps1 != eps1t || f.eps2 != eps2t {
            return Err(PairError::UnlistedConfiguration {
                e1: f64::NAN,
                e2: f64::NAN,
                e1t: f.eps1,
                e2t: f.eps2,
            });
        }
        if f.tau.abs() < 1e-9 {
            return Err(PairError::ZeroTorsion(t));
        }
        let radicand = eps1t + eps2t * lambda * lambda * f.tau * f.tau;
        if radicand.abs() < 1e-10 {
            return Err(PairError::ImaginarySpeed(t));
        }
        if radicand_sign == 0.0 {
            radicand_sign = radicand.signum();
        } else if radicand.signum() != radicand_sign {
            return Err(PairError::ImaginarySpeed(t));
        }
        let fj = frame_jets(gt.as_ref(), t, t)?;
        let dnds = jvec_scale(&jvec_deriv(&fj.normal), fj.m.recip());
        let bb = jvec_dot_in(sig, &fj.binormal, &fj.binormal);
        let tau_jet = jvec_dot_in(sig, &dnds, &fj.binormal) / bb;
        let dtau_ds = (tau_jet.deriv_series() / fj.m).value();
        let lambda_raw_probe = -eps1t * lambda;
        admissibility = admissibility
            .max((lambda_raw_probe * dtau_ds + f.kappa * radicand).abs());
    }

    let omega = -eps1t;
    let lambda_raw = omega * lambda;

    let partner: Arc<dyn Curve> = Arc::new(PartnerCurve {
        base: Arc::clone(&gt),
        lambda_raw,
    });
    let g_map = arclength_map(partner.as_ref(), domain, 1e-10)?;

    finish_pair(partner, g_map, gt, gt_map, lambda, mu, omega, admissibility)
}

#[allow(clippy::too_many_arguments)]
fn finish_pair(
    g: Arc<dyn Curve>,
    g_map: ArcLengthMap,
    gt: Arc<dyn Curve>,
    gt_map: ArcLengthMap,
    lambda: f64,
    mu_requested: Option<f64>,
    omega: f64,
    admissibility: f64,
) -> Result<MannheimPair, PairError> {
    let sig = g.signature();
    let domain = gt.domain();

    // correspondence s* -> s on a dense grid, with exact node derivatives
    let n = 400usize;
    let (t0, t1) = domain;
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    let mut ds = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = t0 + (t1 - t0) * i as f64 / n as f64;
        xs.push(gt_map.s_of_t(t));
        ys.push(g_map.s_of_t(t));
        ds.push(g_map.speed(t) / gt_map.speed(t));
    }
    let correspondence = MonotoneMap::new(xs, ys, ds);

    // anchor sample: case, mu, phi
    let anchor = t0 + 0.5 * (t1 - t0);
    let fg = frenet_at_param(g.as_ref(), anchor, g_map.s_of_t(anchor))?;
    let fgt = frenet_at_param(gt.as_ref(), anchor, gt_map.s_of_t(anchor))?;
    let case_id = classify_case(&fg, &fgt)?;
    let b_link = fgt.binormal.scale(omega);
    let bb = minkowski_dot_in(sig, &b_link, &b_link);
    let mu = (minkowski_dot_in(sig, &fg.normal, &b_link) / bb).signum();
    let x = fgt.eps1 * minkowski_dot_in(sig, &fg.tangent, &fgt.tangent);
    let y = fgt.eps2 * minkowski_dot_in(sig, &fg.tangent, &fgt.normal);
    let phi = if case_id.is_circular() {
        y.atan2(x)
    } else {
        y.asinh()
    };

    Ok(MannheimPair {
        g,
        g_map,
        gt,
        gt_map,
        link: MannheimLink {
            lambda,
            mu,
            case_id,
            phi,
            binormal_sign: omega,
            correspondence,
            admissibility,
        },
        mu_requested,
    })
}

/// The conjugate offset curve beta = alpha - mu lambda N of a plane curve.
struct NormalOffsetCurve {
    base: Arc<dyn Curve>,
    offset: f64, // -mu lambda
}

impl Curve for NormalOffsetCurve {
    fn domain(&self) -> (f64, f64) {
        self.base.domain()
    }

    fn jets(&self, t: f64) -> Result<JVec3, CurveError> {
        let f = frame_jets(self.base.as_ref(), t, t)
            .map_err(|_| CurveError::NotRegular)?;
        let p = self.base.jets(t)?;
        Ok(jvec_add(&p, &jvec_scale(&f.normal, crate::jet::Jet::constant(self.offset))))
    }

    fn signature(&self) -> Signature {
        self.base.signature()
    }

    fn max_order(&self) -> Option<usize> {
        Some(self.base.max_order().unwrap_or(JET_LEN - 1).saturating_sub(2))
    }
}

/// Builds the plane conjugate beta = alpha - mu lambda N of a planar curve.
///
/// Requires the curve to be planar (torsion residual below `1e-8` at the
/// probes) and the speed factor `1 + e1 e2 mu lambda kappa` to stay away
/// from zero (`DegenerateSpeed` otherwise).
pub fn construct_planar_conjugate(
    g: Arc<dyn Curve>,
    lambda: f64,
    mu: f64,
) -> Result<Arc<dyn Curve>, PairError> {
    if lambda == 0.0 {
        return Err(PairError::ZeroLambda);
    }
    let domain = g.domain();
    let g_map = arclength_map(g.as_ref(), domain, 1e-10)?;
    let mut speed_sign = 0.0;
    for &t in &probe_params(domain, PROBES) {
        let s = g_map.s_of_t(t);
        let f = frenet_at_param(g.as_ref(), t, s)?;
        if f.tau.abs() > 1e-8 {
            return Err(PairError::Frenet(crate::frenet::FrenetError::TorsionMismatch {
                s,
                tau_n: f.tau,
                tau_b: 0.0,
            }));
        }
        // a sign change between probes implies an interior zero of the
        // speed factor even when no probe lands on it
        let speed = 1.0 + f.eps1 * f.eps2 * mu * lambda * f.kappa;
        if speed.abs() < 1e-10 || (speed_sign != 0.0 && speed.signum() != speed_sign) {
            return Err(PairError::DegenerateSpeed(s));
        }
        speed_sign = speed.signum();
    }
    Ok(Arc::new(NormalOffsetCurve {
        base: g,
        offset: -mu * lambda,
    }))
}

/// Assembles a pair from two independently given curves and an explicit
/// correspondence `s -> s*` (arc lengths from the respective domain
/// starts). Used by the verification paths where the pair is an input, not
/// a construction.
pub fn pair_from_curves(
    g: Arc<dyn Curve>,
    gt: Arc<dyn Curve>,
    corr_s_to_sstar: &MonotoneMap,
    mu: Option<f64>,
) -> Result<MannheimPair, PairError> {
    if !corr_s_to_sstar.is_strictly_increasing() {
        return Err(PairError::NotMonotone);
    }
    let g_map = arclength_map(g.as_ref(), g.domain(), 1e-10)?;
    let gt_map = arclength_map(gt.as_ref(), gt.domain(), 1e-10)?;

    // invert to s* -> s for the link
    let n = corr_s_to_sstar.x.len();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut ds = Vec::with_capacity(n);
    for i in 0..n {
        xs.push(corr_s_to_sstar.y[i]);
        ys.push(corr_s_to_sstar.x[i]);
        let d = corr_s_to_sstar.dydx[i];
        ds.push(if d.abs() > 1e-300 { 1.0 / d } else { f64::MAX });
    }
    let correspondence = MonotoneMap::new(xs, ys, ds);

    let sig = g.signature();
    // anchor in the middle of the correspondence
    let (s_lo, s_hi) = corr_s_to_sstar.x_range();
    let s_anchor = 0.5 * (s_lo + s_hi);
    let sstar_anchor = corr_s_to_sstar.eval(s_anchor);
    let fg = frenet_at_param(g.as_ref(), g_map.t_of_s(s_anchor), s_anchor)?;
    let fgt = frenet_at_param(gt.as_ref(), gt_map.t_of_s(sstar_anchor), sstar_anchor)?;
    let case_id = classify_case(&fg, &fgt)?;
    let omega = -fgt.eps1;
    let b_link = fgt.binormal.scale(omega);
    let bb = minkowski_dot_in(sig, &b_link, &b_link);
    let mu_meas = (minkowski_dot_in(sig, &fg.normal, &b_link) / bb).signum();
    let d = position_diff(g.as_ref(), g_map.t_of_s(s_anchor), gt.as_ref(), gt_map.t_of_s(sstar_anchor))?;
    let lambda = minkowski_dot_in(sig, &d, &b_link) / bb;
    let x = fgt.eps1 * minkowski_dot_in(sig, &fg.tangent, &fgt.tangent);
    let y = fgt.eps2 * minkowski_dot_in(sig, &fg.tangent, &fgt.normal);
    let phi = if case_id.is_circular() {
        y.atan2(x)
    } else {
        y.asinh()
    };

    Ok(MannheimPair {
        g,
        g_map,
        gt,
        gt_map,
        link: MannheimLink {
            lambda,
            mu: mu_meas,
            case_id,
            phi,
            binormal_sign: omega,
            correspondence,
            admissibility: f64::NAN,
        },
        mu_requested: mu,
    })
}

fn position_diff(
    g: &dyn Curve,
    tg: f64,
    gt: &dyn Curve,
    tgt: f64,
) -> Result<MVec3, PairError> {
    let a = jvec_value(&g.jets(tg)?);
    let b = jvec_value(&gt.jets(tgt)?);
    Ok(a.sub(&b))
}
