//! Frenet apparatus of a non-null curve and residuals of the Frenet
//! equations
//!
//!   T' = k N,   N' = -e1 e2 k T + tau B,   B' = e1 tau N
//!
//! with <T,T> = e1, <N,N> = e2, <B,B> = -e1 e2 and B = T ^ N.
//!
//! Torsion is extracted as <N',B>/<B,B> and cross-checked against the B'
//! row; a disagreement indicates a convention drift and is reported as an
//! error rather than silently averaged.

use crate::curves::{ArcLengthMap, Curve, CurveError};
use crate::jet::{Jet, JET_LEN};
use crate::lorentz::{
    jvec_cross_in, jvec_deriv, jvec_dot_in, jvec_scale, jvec_value, JVec3, MVec3,
};
use serde::Serialize;
use thiserror::Error;

/// Curvature floor below which the principal normal is numerically
/// meaningless (N = T'/k amplifies noise as 1/k).
pub const TOL_KAPPA: f64 = 1e-8;

const TOL_NULL_FRAME: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FrenetError {
    #[error("curvature below {tol} at s = {s}: frame undefined")]
    ZeroCurvature { s: f64, tol: f64 },
    #[error("frame vector is numerically null at s = {s}")]
    NullFrameVector { s: f64 },
    #[error("torsion extraction mismatch at s = {s}: {tau_n} (N' row) vs {tau_b} (B' row)")]
    TorsionMismatch { s: f64, tau_n: f64, tau_b: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Frame, curvature, torsion and signature signs at one arc length.
#[derive(Debug, Clone, Serialize)]
pub struct FrenetData {
    pub s: f64,
    pub tangent: MVec3,
    pub normal: MVec3,
    pub binormal: MVec3,
    pub kappa: f64,
    pub tau: f64,
    pub eps1: f64,
    pub eps2: f64,
}

/// Jet-valued frame data in the curve's own parameter.
pub(crate) struct FrameJets {
    /// speed ds/dt
    pub m: Jet,
    pub tangent: JVec3,
    pub normal: JVec3,
    pub binormal: JVec3,
    pub kappa: Jet,
    pub eps1: f64,
    pub eps2: f64,
}

/// Builds the frame as Taylor series at parameter `t`. Orders remain valid
/// up to the base curve's jet depth minus two.
pub(crate) fn frame_jets(curve: &dyn Curve, t: f64, s_label: f64) -> Result<FrameJets, FrenetError> {
    let sig = curve.signature();
    let j = curve.jets(t)?;
    let d1 = jvec_deriv(&j);
    let q = jvec_dot_in(sig, &d1, &d1);
    let q0 = q.value();
    if q0.abs() < TOL_NULL_FRAME {
        return Err(FrenetError::NullFrameVector { s: s_label });
    }
    let eps1 = q0.signum();
    let m = (q * eps1).sqrt();
    let tangent = jvec_scale(&d1, m.recip());
    let dtds = jvec_scale(&jvec_deriv(&tangent), m.recip());
    let qn = jvec_dot_in(sig, &dtds, &dtds);
    let qn0 = qn.value();
    let euclid2 = dtds[0].value().powi(2) + dtds[1].value().powi(2) + dtds[2].value().powi(2);
    if qn0.abs() < TOL_NULL_FRAME {
        if euclid2.sqrt() > TOL_KAPPA {
            return Err(FrenetError::NullFrameVector { s: s_label });
        }
        return Err(FrenetError::ZeroCurvature {
            s: s_label,
            tol: TOL_KAPPA,
        });
    }
    let eps2 = qn0.signum();
    let kappa = (qn * eps2).sqrt();
    if kappa.value() <= TOL_KAPPA {
        return Err(FrenetError::ZeroCurvature {
            s: s_label,
            tol: TOL_KAPPA,
        });
    }
    let normal = jvec_scale(&dtds, kappa.recip());
    let binormal = jvec_cross_in(sig, &tangent, &normal);
    Ok(FrameJets {
        m,
        tangent,
        normal,
        binormal,
        kappa,
        eps1,
        eps2,
    })
}

/// Frenet apparatus at arc length `s` (converted through the map).
pub fn frenet_apparatus(
    curve: &dyn Curve,
    map: &ArcLengthMap,
    s: f64,
) -> Result<FrenetData, FrenetError> {
    frenet_at_param(curve, map.t_of_s(s), s)
}

/// Frenet apparatus at the curve's own parameter `t`; `s` is only a label.
pub fn frenet_at_param(curve: &dyn Curve, t: f64, s: f64) -> Result<FrenetData, FrenetError> {
    let max = curve.max_order().unwrap_or(JET_LEN - 1);
    if max < 3 {
        return Err(FrenetError::Curve(CurveError::OrderUnavailable {
            order: 3,
            max,
        }));
    }
    let sig = curve.signature();
    let f = frame_jets(curve, t, s)?;
    let dnds = jvec_scale(&jvec_deriv(&f.normal), f.m.recip());
    let bb = jvec_dot_in(sig, &f.binormal, &f.binormal).value();
    let tau_n = jvec_dot_in(sig, &dnds, &f.binormal).value() / bb;
    let dbds = jvec_scale(&jvec_deriv(&f.binormal), f.m.recip());
    let tau_b = jvec_dot_in(sig, &dbds, &f.normal).value() / (f.eps1 * f.eps2);
    if (tau_n - tau_b).abs() > 1e-6 * tau_n.abs().max(1.0) {
        return Err(FrenetError::TorsionMismatch {
            s,
            tau_n,
            tau_b,
        });
    }
    Ok(FrenetData {
        s,
        tangent: jvec_value(&f.tangent),
        normal: jvec_value(&f.normal),
        binormal: jvec_value(&f.binormal),
        kappa: f.kappa.value(),
        tau: tau_n,
        eps1: f.eps1,
        eps2: f.eps2,
    })
}

/// Residuals of the three Frenet equations at `s`, with frame derivatives
/// taken by a 5-point central difference in arc length (step
/// `1e-4 * domain length`, shrunk near the ends). This is an independent
/// check of the jet pipeline: the differentiation path shares nothing with
/// the frame construction.
pub fn frenet_residual(
    curve: &dyn Curve,
    map: &ArcLengthMap,
    s: f64,
) -> Result<(f64, f64, f64), FrenetError> {
    let total = map.total;
    let mut h = 1e-4 * total;
    let margin = (s - 0.0).min(total - s);
    if margin < 2.0 * h {
        h = (margin / 2.0).max(1e-9 * total);
    }
    let here = frenet_apparatus(curve, map, s)?;
    let fm2 = frenet_apparatus(curve, map, s - 2.0 * h)?;
    let fm1 = frenet_apparatus(curve, map, s - h)?;
    let fp1 = frenet_apparatus(curve, map, s + h)?;
    let fp2 = frenet_apparatus(curve, map, s + 2.0 * h)?;
    let diff = |a: &MVec3, b: &MVec3, c: &MVec3, d: &MVec3| {
        MVec3::new(
            (a.x1 - 8.0 * b.x1 + 8.0 * c.x1 - d.x1) / (12.0 * h),
            (a.x2 - 8.0 * b.x2 + 8.0 * c.x2 - d.x2) / (12.0 * h),
            (a.x3 - 8.0 * b.x3 + 8.0 * c.x3 - d.x3) / (12.0 * h),
        )
    };
    let tp = diff(&fm2.tangent, &fm1.tangent, &fp1.tangent, &fp2.tangent);
    let np = diff(&fm2.normal, &fm1.normal, &fp1.normal, &fp2.normal);
    let bp = diff(&fm2.binormal, &fm1.binormal, &fp1.binormal, &fp2.binormal);
    let e1 = here.eps1;
    let e2 = here.eps2;
    let rhs_t = here.normal.scale(here.kappa);
    let rhs_n = here
        .tangent
        .scale(-e1 * e2 * here.kappa)
        .add(&here.binormal.scale(here.tau));
    let rhs_b = here.normal.scale(e1 * here.tau);
    Ok((
        tp.sub(&rhs_t).euclid_norm(),
        np.sub(&rhs_n).euclid_norm(),
        bp.sub(&rhs_b).euclid_norm(),
    ))
}
