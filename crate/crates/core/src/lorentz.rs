//! Minkowski 3-space vector algebra: indefinite inner product, causal
//! classification, the metric-adjusted cross product and pair angles.
//!
//! The default metric signature is `(+, +, -)` (third axis timelike). The
//! alternative `(-, +, +)` can be selected process-wide with
//! [`set_signature`] (intended to be called once at startup) or per call
//! through the `*_in` variants.

use crate::jet::Jet;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU8, Ordering};
use thiserror::Error;

/// Diagonal metric signature of the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Signature {
    /// diag(+1, +1, -1): third component timelike (library default).
    #[serde(rename = "ppm")]
    #[default]
    Ppm,
    /// diag(-1, +1, +1): first component timelike.
    #[serde(rename = "mpp")]
    Mpp,
}

impl Signature {
    pub fn diag(self) -> [f64; 3] {
        match self {
            Signature::Ppm => [1.0, 1.0, -1.0],
            Signature::Mpp => [-1.0, 1.0, 1.0],
        }
    }

    /// Index of the timelike axis.
    pub fn timelike_axis(self) -> usize {
        match self {
            Signature::Ppm => 2,
            Signature::Mpp => 0,
        }
    }

    /// Orthonormal basis ordered as (spacelike, spacelike, timelike).
    pub fn basis(self) -> (MVec3, MVec3, MVec3) {
        match self {
            Signature::Ppm => (
                MVec3::new(1.0, 0.0, 0.0),
                MVec3::new(0.0, 1.0, 0.0),
                MVec3::new(0.0, 0.0, 1.0),
            ),
            Signature::Mpp => (
                MVec3::new(0.0, 1.0, 0.0),
                MVec3::new(0.0, 0.0, 1.0),
                MVec3::new(1.0, 0.0, 0.0),
            ),
        }
    }
}

static SIGNATURE: AtomicU8 = AtomicU8::new(0);

/// Selects the process-wide metric signature. Call once at startup, before
/// any geometry is evaluated; concurrent readers observe a consistent value.
pub fn set_signature(sig: Signature) {
    SIGNATURE.store(
        match sig {
            Signature::Ppm => 0,
            Signature::Mpp => 1,
        },
        Ordering::SeqCst,
    );
}

pub fn signature() -> Signature {
    match SIGNATURE.load(Ordering::SeqCst) {
        0 => Signature::Ppm,
        _ => Signature::Mpp,
    }
}

/// Default tolerance on <v,v> below which a vector is classified null.
pub const TOL_NULL: f64 = 1e-10;

/// A 3-vector with Minkowski-metric semantics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Causal character of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Null,
}

#[derive(Debug, Error, PartialEq)]
pub enum AngleError {
    #[error("input vector is not unit: |<v,v>| = {0}")]
    NotUnit(f64),
    #[error("causal configuration contradicts the requested angle mode")]
    ModeMismatch,
}

impl MVec3 {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        MVec3 { x1, x2, x3 }
    }

    pub const fn zero() -> Self {
        MVec3::new(0.0, 0.0, 0.0)
    }

    pub fn comp(&self, i: usize) -> f64 {
        match i {
            0 => self.x1,
            1 => self.x2,
            _ => self.x3,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn add(&self, o: &MVec3) -> MVec3 {
        MVec3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }

    pub fn sub(&self, o: &MVec3) -> MVec3 {
        MVec3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }

    pub fn scale(&self, a: f64) -> MVec3 {
        MVec3::new(a * self.x1, a * self.x2, a * self.x3)
    }

    /// Euclidean magnitude, used for scale factors in residual bounds.
    pub fn euclid_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    /// sqrt(|<v,v>|) under the active signature.
    pub fn mink_norm(&self) -> f64 {
        minkowski_dot(self, self).abs().sqrt()
    }
}

/// Indefinite inner product under the active signature.
pub fn minkowski_dot(u: &MVec3, v: &MVec3) -> f64 {
    minkowski_dot_in(signature(), u, v)
}

pub fn minkowski_dot_in(sig: Signature, u: &MVec3, v: &MVec3) -> f64 {
    let g = sig.diag();
    g[0] * u.x1 * v.x1 + g[1] * u.x2 * v.x2 + g[2] * u.x3 * v.x3
}

/// Causal classification of `v` by the sign of <v,v> against `tol_null`.
pub fn causal_character(v: &MVec3, tol_null: f64) -> CausalClass {
    causal_character_in(signature(), v, tol_null)
}

pub fn causal_character_in(sig: Signature, v: &MVec3, tol_null: f64) -> CausalClass {
    let q = minkowski_dot_in(sig, v, v);
    if q > tol_null {
        CausalClass::Spacelike
    } else if q < -tol_null {
        CausalClass::Timelike
    } else {
        CausalClass::Null
    }
}

/// Metric-adjusted cross product: the unique w with <w, z> = det[u, v, z].
///
/// For signature (+,+,-) this is (c1, c2, -c3) where c is the Euclidean
/// cross product, so <u ^ v, u> = <u ^ v, v> = 0.
pub fn lorentz_cross(u: &MVec3, v: &MVec3) -> MVec3 {
    lorentz_cross_in(signature(), u, v)
}

pub fn lorentz_cross_in(sig: Signature, u: &MVec3, v: &MVec3) -> MVec3 {
    let c1 = u.x2 * v.x3 - u.x3 * v.x2;
    let c2 = u.x3 * v.x1 - u.x1 * v.x3;
    let c3 = u.x1 * v.x2 - u.x2 * v.x1;
    let g = sig.diag();
    MVec3::new(g[0] * c1, g[1] * c2, g[2] * c3)
}

/// Principal angle between two unit non-null tangents.
///
/// Hyperbolic mode requires both inputs of the same causal character with
/// |<T1,T2>| >= 1 (timelike spanning plane) and returns acosh|<T1,T2>|.
/// Circular mode requires two spacelike inputs spanning a spacelike plane
/// (|<T1,T2>| <= 1) and returns acos in [0, pi]. The returned angle is the
/// principal (non-negative) value; signed resolution against a frame
/// decomposition happens in the pair pipeline, which has the frame.
pub fn pair_angle(t1: &MVec3, t2: &MVec3, hyperbolic: bool) -> Result<f64, AngleError> {
    pair_angle_in(signature(), t1, t2, hyperbolic)
}

pub fn pair_angle_in(
    sig: Signature,
    t1: &MVec3,
    t2: &MVec3,
    hyperbolic: bool,
) -> Result<f64, AngleError> {
    const UNIT_TOL: f64 = 1e-8;
    let q1 = minkowski_dot_in(sig, t1, t1);
    let q2 = minkowski_dot_in(sig, t2, t2);
    for q in [q1, q2] {
        if (q.abs() - 1.0).abs() > UNIT_TOL {
            return Err(AngleError::NotUnit(q));
        }
    }
    let d = minkowski_dot_in(sig, t1, t2);
    if hyperbolic {
        if q1.signum() != q2.signum() {
            return Err(AngleError::ModeMismatch);
        }
        if d.abs() < 1.0 - UNIT_TOL {
            return Err(AngleError::ModeMismatch);
        }
        Ok(d.abs().max(1.0).acosh())
    } else {
        if q1 < 0.0 || q2 < 0.0 || d.abs() > 1.0 + UNIT_TOL {
            return Err(AngleError::ModeMismatch);
        }
        Ok(d.clamp(-1.0, 1.0).acos())
    }
}

/// Jet-valued 3-vector: each component is a truncated Taylor series.
pub type JVec3 = [Jet; 3];

pub fn jvec_constant(v: &MVec3) -> JVec3 {
    [
        Jet::constant(v.x1),
        Jet::constant(v.x2),
        Jet::constant(v.x3),
    ]
}

pub fn jvec_value(v: &JVec3) -> MVec3 {
    MVec3::new(v[0].value(), v[1].value(), v[2].value())
}

pub fn jvec_add(a: &JVec3, b: &JVec3) -> JVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn jvec_sub(a: &JVec3, b: &JVec3) -> JVec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn jvec_scale(a: &JVec3, s: Jet) -> JVec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn jvec_deriv(a: &JVec3) -> JVec3 {
    [a[0].deriv_series(), a[1].deriv_series(), a[2].deriv_series()]
}

pub fn jvec_dot_in(sig: Signature, a: &JVec3, b: &JVec3) -> Jet {
    let g = sig.diag();
    a[0] * b[0] * g[0] + a[1] * b[1] * g[1] + a[2] * b[2] * g[2]
}

pub fn jvec_cross_in(sig: Signature, a: &JVec3, b: &JVec3) -> JVec3 {
    let c1 = a[1] * b[2] - a[2] * b[1];
    let c2 = a[2] * b[0] - a[0] * b[2];
    let c3 = a[0] * b[1] - a[1] * b[0];
    let g = sig.diag();
    [c1 * g[0], c2 * g[1], c3 * g[2]]
}
