//! Mannheim pair theory: construction of the binormal-offset partner,
//! causal case classification, identity and constancy checks, planar
//! conjugates, and validation of weakened pairs.
//!
//! ## Conventions
//!
//! Frenet frames everywhere use `N = T'/kappa` (kappa > 0) and `B = T ^ N`.
//! The pair layer reports its quantities in a per-pair orientation of the
//! partner binormal, `B~ = omega (T~ ^ N~)` with `omega = -e1~`: with that
//! choice the five case torsion formulas and the constancy quantity hold in
//! their standard form for every realizable case. The factor is recorded in
//! [`MannheimLink::binormal_sign`], and the joining-line offset `lambda`
//! and the sign `mu` (`B~ = mu N`) are reported in the same orientation.

mod checks;
mod construct;
mod wm;

pub use checks::{
    check_angle_identities, check_orthogonality, check_constancy_quotient, check_helix_line_characterization, pair_samples,
    ConstancyOutcome, HelixLineOutcome, SampleRow,
};
pub use construct::{
    construct_partner_curve, construct_planar_conjugate, pair_from_curves, MannheimPair,
};
pub use wm::{wm_validate, WmOutcome};

use crate::curves::{CurveError, MonotoneMap};
use crate::frenet::{FrenetData, FrenetError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five causal configurations of a non-null Mannheim pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    Case1 = 1,
    Case2 = 2,
    Case3 = 3,
    Case4 = 4,
    Case5 = 5,
}

impl CaseId {
    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Option<CaseId> {
        match i {
            1 => Some(CaseId::Case1),
            2 => Some(CaseId::Case2),
            3 => Some(CaseId::Case3),
            4 => Some(CaseId::Case4),
            5 => Some(CaseId::Case5),
            _ => None,
        }
    }

    /// Case 3 uses circular functions; the others hyperbolic ones.
    pub fn is_circular(self) -> bool {
        matches!(self, CaseId::Case3)
    }
}

#[derive(Debug, Error)]
pub enum PairError {
    #[error("sign pattern (e1={e1}, e2={e2}, e1~={e1t}, e2~={e2t}) matches none of the five cases")]
    UnlistedConfiguration { e1: f64, e2: f64, e1t: f64, e2t: f64 },
    #[error("offset lambda must be nonzero")]
    ZeroLambda,
    #[error("partner torsion vanishes at t = {0}")]
    ZeroTorsion(f64),
    #[error("partner speed radicand e1~ + e2~ lambda^2 tau~^2 is degenerate at t = {0} (constructed curve would be null)")]
    ImaginarySpeed(f64),
    #[error("torsion formula denominator 1 + e1 e2 lambda mu kappa is degenerate")]
    DegeneratePair,
    #[error("planar conjugate speed 1 + e1 e2 mu lambda kappa vanishes at s = {0}")]
    DegenerateSpeed(f64),
    #[error("kappa * tau~ = {0} too small for the constancy quotient")]
    DivisionDegenerate(f64),
    #[error("correspondence samples are not strictly increasing")]
    NotMonotone,
    #[error("report rows are empty")]
    EmptyReport,
    #[error(transparent)]
    Frenet(#[from] FrenetError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Pairing data for a Mannheim pair.
#[derive(Debug, Clone, Serialize)]
pub struct MannheimLink {
    /// Constant offset along the oriented partner binormal.
    pub lambda: f64,
    /// Sign with `B~ = mu N` (measured at the first sample and required
    /// constant; a flip is a pairing failure reported by the checks).
    pub mu: f64,
    pub case_id: CaseId,
    /// Pair angle estimate at the anchor sample.
    pub phi: f64,
    /// Orientation of the reported partner binormal against `T~ ^ N~`.
    pub binormal_sign: f64,
    /// Correspondence s* -> s between the partner's and the curve's arc
    /// lengths, both measured from the domain start.
    pub correspondence: MonotoneMap,
    /// Max residual of the partner-admissibility law
    /// `lambda_raw tau~' + kappa~ (e1~ + e2~ lambda^2 tau~^2)` over the
    /// probe grid; zero (numerically) iff the offset construction closes
    /// into a genuine pair at this lambda.
    pub admissibility: f64,
}

/// Sign pattern -> case id. Pure over the four signs; exactly five of the
/// sixteen patterns are listed.
pub fn classify_case(g: &FrenetData, gt: &FrenetData) -> Result<CaseId, PairError> {
    classify_signs(g.eps1, g.eps2, gt.eps1, gt.eps2)
}

pub fn classify_signs(e1: f64, e2: f64, e1t: f64, e2t: f64) -> Result<CaseId, PairError> {
    match ((e1 as i8), (e2 as i8), (e1t as i8), (e2t as i8)) {
        (-1, 1, -1, 1) => Ok(CaseId::Case1),
        (-1, 1, 1, -1) => Ok(CaseId::Case2),
        (1, -1, 1, 1) => Ok(CaseId::Case3),
        (1, 1, 1, -1) => Ok(CaseId::Case4),
        (1, 1, -1, 1) => Ok(CaseId::Case5),
        _ => Err(PairError::UnlistedConfiguration { e1, e2, e1t, e2t }),
    }
}

/// Torsion of the partner from the case formula, read verbatim from the
/// case analysis:
///
///   case 1:  tau / (1 - lambda mu kappa)
///   case 2: -tau / (1 - lambda mu kappa)
///   case 3: -tau / (1 - lambda mu kappa)
///   case 4: -tau / (1 + lambda mu kappa)
///   case 5:  tau / (1 + lambda mu kappa)
pub fn partner_torsion(
    kappa: f64,
    tau: f64,
    lambda: f64,
    mu: f64,
    case: CaseId,
) -> Result<f64, PairError> {
    let (num_sign, den_sign) = match case {
        CaseId::Case1 => (1.0, -1.0),
        CaseId::Case2 => (-1.0, -1.0),
        CaseId::Case3 => (-1.0, -1.0),
        CaseId::Case4 => (-1.0, 1.0),
        CaseId::Case5 => (1.0, 1.0),
    };
    let den = 1.0 + den_sign * lambda * mu * kappa;
    if den.abs() < 1e-12 {
        return Err(PairError::DegeneratePair);
    }
    Ok(num_sign * tau / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_all_sixteen_patterns() {
        let signs = [-1.0, 1.0];
        let mut listed = 0;
        for &e1 in &signs {
            for &e2 in &signs {
                for &e1t in &signs {
                    for &e2t in &signs {
                        match classify_signs(e1, e2, e1t, e2t) {
                            Ok(case) => {
                                listed += 1;
                                let expect = match (e1 as i8, e2 as i8, e1t as i8, e2t as i8) {
                                    (-1, 1, -1, 1) => CaseId::Case1,
                                    (-1, 1, 1, -1) => CaseId::Case2,
                                    (1, -1, 1, 1) => CaseId::Case3,
                                    (1, 1, 1, -1) => CaseId::Case4,
                                    _ => CaseId::Case5,
                                };
                                assert_eq!(case, expect);
                            }
                            Err(PairError::UnlistedConfiguration { .. }) => {}
                            Err(e) => panic!("unexpected error {e}"),
                        }
                    }
                }
            }
        }
        assert_eq!(listed, 5);
        // both spacelike with spacelike normals is not among the cases
        assert!(classify_signs(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn partner_torsion_case_formulas() {
        // case 1: tau/(1 - lambda mu kappa) = 1/(1 - 0.5) = 2
        let v = partner_torsion(1.0, 1.0, 0.5, 1.0, CaseId::Case1).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        // case 4: -tau/(1 + lambda mu kappa) = -1/1.5
        let v = partner_torsion(2.0, 1.0, 0.25, 1.0, CaseId::Case4).unwrap();
        assert!((v + 1.0 / 1.5).abs() < 1e-15);
        // zero torsion maps to zero in every case
        for case in [
            CaseId::Case1,
            CaseId::Case2,
            CaseId::Case3,
            CaseId::Case4,
            CaseId::Case5,
        ] {
            assert_eq!(partner_torsion(1.3, 0.0, 0.2, -1.0, case).unwrap(), 0.0);
        }
        // pole
        assert!(matches!(
            partner_torsion(1.0, 1.0, 1.0, 1.0, CaseId::Case1),
            Err(PairError::DegeneratePair)
        ));
    }
}
