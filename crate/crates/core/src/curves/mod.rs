//! Curve representations: analytic families with exact derivatives (via
//! Taylor jets), curves integrated from intrinsic curvature/torsion data,
//! sampled curves with finite-difference derivatives, and arc-length
//! reparametrization.

mod arclength;
mod families;
mod intrinsic;
mod monotone;
mod sampled;

pub use arclength::{arclength_map, ArcLengthMap};
pub use families::{family_oracle, make_family, seed_omega, FamilyOracle};
pub use intrinsic::IntrinsicCurve;
pub use monotone::MonotoneMap;
pub use sampled::{sampled_derivatives, SampledCurve};

use crate::jet::JET_LEN;
use crate::lorentz::{JVec3, MVec3, Signature};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("unknown curve family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters for family `{family}`: {reason}")]
    BadParams { family: String, reason: String },
    #[error("parameter {0} outside the curve domain")]
    OutOfRange(f64),
    #[error("sampled curve needs at least 7 points, got {0}")]
    TooFewSamples(usize),
    #[error("sample parameters must be strictly increasing")]
    NotIncreasing,
    #[error("curve velocity is null (|<a',a'>| < {tol}) near t = {t}")]
    NullVelocity { t: f64, tol: f64 },
    #[error("curve is not regular on the requested domain")]
    NotRegular,
    #[error("requested derivative order {order} exceeds available order {max}")]
    OrderUnavailable { order: usize, max: usize },
    #[error("invalid curve spec: {0}")]
    BadSpec(String),
}

/// A parametric curve presented as Taylor jets of its position components.
///
/// Analytic families return machine-precision jets; sampled curves return
/// stencil-based jets truncated at order 3.
pub trait Curve: Send + Sync {
    fn domain(&self) -> (f64, f64);
    fn jets(&self, t: f64) -> Result<JVec3, CurveError>;
    fn signature(&self) -> Signature;
    /// Highest derivative order with full accuracy (`JET_LEN - 1` if `None`).
    fn max_order(&self) -> Option<usize> {
        None
    }
}

pub fn position(curve: &dyn Curve, t: f64) -> Result<MVec3, CurveError> {
    let j = curve.jets(t)?;
    Ok(MVec3::new(j[0].value(), j[1].value(), j[2].value()))
}

pub fn derivative(curve: &dyn Curve, t: f64, order: usize) -> Result<MVec3, CurveError> {
    let max = curve.max_order().unwrap_or(JET_LEN - 1);
    if order > max {
        return Err(CurveError::OrderUnavailable { order, max });
    }
    let j = curve.jets(t)?;
    Ok(MVec3::new(
        j[0].derivative(order),
        j[1].derivative(order),
        j[2].derivative(order),
    ))
}

/// On-disk curve description.
///
/// Analytic: `{"family": "timelike_helix", "params": {"a": 1.0, "b": 0.5},
/// "domain": [0, 6.283]}`. Sampled: `{"samples": [[t, x, y, z], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSpec {
    Analytic {
        family: String,
        params: BTreeMap<String, f64>,
        domain: [f64; 2],
    },
    Sampled { samples: Vec<[f64; 4]> },
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        serde_json::from_str(text).map_err(|e| CurveError::BadSpec(e.to_string()))
    }

    /// Builds the evaluator under the given signature.
    pub fn build(&self, sig: Signature) -> Result<Arc<dyn Curve>, CurveError> {
        match self {
            CurveSpec::Analytic {
                family,
                params,
                domain,
            } => make_family(sig, family, params, (domain[0], domain[1])),
            CurveSpec::Sampled { samples } => {
                let mut ts = Vec::with_capacity(samples.len());
                let mut pts = Vec::with_capacity(samples.len());
                for row in samples {
                    ts.push(row[0]);
                    pts.push(MVec3::new(row[1], row[2], row[3]));
                }
                Ok(Arc::new(SampledCurve::new(sig, &ts, &pts)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_spec_json_round_trip() {
        let text = r#"{ "family": "timelike_helix", "params": {"a": 1.0, "b": 1.5}, "domain": [0.0, 6.283] }"#;
        let spec = CurveSpec::from_json(text).unwrap();
        match &spec {
            CurveSpec::Analytic { family, params, domain } => {
                assert_eq!(family, "timelike_helix");
                assert_eq!(params["a"], 1.0);
                assert_eq!(domain[1], 6.283);
            }
            _ => panic!("expected analytic spec"),
        }
        let spec2 = CurveSpec::from_json(r#"{ "samples": [[0,0,0,0],[1,1,0,0]] }"#).unwrap();
        assert!(matches!(spec2, CurveSpec::Sampled { .. }));
    }

    #[test]
    fn malformed_spec_is_rejected() {
        assert!(CurveSpec::from_json("{ not json").is_err());
        assert!(CurveSpec::from_json(r#"{"family": 3}"#).is_err());
    }
}
