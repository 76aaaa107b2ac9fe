//! Built-in analytic curve families.
//!
//! The helix families carry hand-derived closed-form curvature/torsion and
//! frame signs, exposed through [`FamilyOracle`] so tests can check the
//! numerical pipeline against an independent closed form. The planar
//! families and the pair-seed families are defined intrinsically (prescribed
//! curvature/torsion) and realized by [`IntrinsicCurve`].
//!
//! Pair seeds: `pair_seed_case<k>(k, lam, c0)` is a constant-curvature curve
//! whose torsion follows the unique law that makes the binormal-offset
//! partner construction at offset `lam` close up into a genuine pair (the
//! normal of the offset curve stays on the joining line). `u = tanh/coth/tan`
//! below are the closed-form solutions of that law for each causal class.

use super::intrinsic::IntrinsicCurve;
use super::{Curve, CurveError};
use crate::jet::Jet;
use crate::lorentz::{JVec3, MVec3, Signature};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Closed-form Frenet data for a family, as functions of the curve
/// parameter. Used as an independent oracle by tests.
pub struct FamilyOracle {
    pub eps: (f64, f64),
    pub kappa: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub tau: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

fn get(family: &str, params: &BTreeMap<String, f64>, key: &str) -> Result<f64, CurveError> {
    params.get(key).copied().ok_or_else(|| CurveError::BadParams {
        family: family.to_string(),
        reason: format!("missing parameter `{key}`"),
    })
}

fn bad(family: &str, reason: impl Into<String>) -> CurveError {
    CurveError::BadParams {
        family: family.to_string(),
        reason: reason.into(),
    }
}

/// Places (spacelike1, spacelike2, timelike) component functions into
/// coordinate slots according to the signature's axis layout.
fn combine(sig: Signature, f_s1: Jet, f_s2: Jet, f_t: Jet) -> JVec3 {
    match sig {
        Signature::Ppm => [f_s1, f_s2, f_t],
        Signature::Mpp => [f_t, f_s1, f_s2],
    }
}

enum Shape {
    TimelikeHelix { a: f64, b: f64 },
    SpacelikeHelixSpacelikeNormal { a: f64, b: f64 },
    SpacelikeHelixTimelikeNormal { a: f64, b: f64 },
    Line { p: MVec3, d: MVec3 },
}

struct AnalyticCurve {
    sig: Signature,
    shape: Shape,
    domain: (f64, f64),
}

impl Curve for AnalyticCurve {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn jets(&self, t: f64) -> Result<JVec3, CurveError> {
        let tv = Jet::variable(t);
        Ok(match &self.shape {
            Shape::TimelikeHelix { a, b } => {
                let (s, c) = tv.sin_cos();
                combine(self.sig, c * *a, s * *a, tv * *b)
            }
            Shape::SpacelikeHelixSpacelikeNormal { a, b } => {
                let (sh, ch) = tv.sinh_cosh();
                combine(self.sig, ch * *a, tv * *b, sh * *a)
            }
            Shape::SpacelikeHelixTimelikeNormal { a, b } => {
                let (sh, ch) = tv.sinh_cosh();
                combine(self.sig, sh * *a, tv * *b, ch * *a)
            }
            Shape::Line { p, d } => [
                tv * d.x1 + p.x1,
                tv * d.x2 + p.x2,
                tv * d.x3 + p.x3,
            ],
        })
    }

    fn signature(&self) -> Signature {
        self.sig
    }
}

/// Seed torsion branches, as `u(t) = lambda_raw * tau_raw(t)`.
enum SeedBranch {
    Tanh { k: f64, c0: f64 },
    Coth { k: f64, c0: f64 },
    TanhNeg { k: f64, c0: f64 },
    CothNeg { k: f64, c0: f64 },
    TanNeg { k: f64, c0: f64 },
}

impl SeedBranch {
    fn u_jet(&self, s0: f64) -> Jet {
        let sv = Jet::variable(s0);
        match self {
            SeedBranch::Tanh { k, c0 } => (sv * *k + *c0).tanh(),
            SeedBranch::Coth { k, c0 } => (sv * *k + *c0).coth(),
            SeedBranch::TanhNeg { k, c0 } => (-(sv * *k) + *c0).tanh(),
            SeedBranch::CothNeg { k, c0 } => (-(sv * *k) + *c0).coth(),
            SeedBranch::TanNeg { k, c0 } => (-(sv * *k) + *c0).tan(),
        }
    }

    fn u_value(&self, s: f64) -> f64 {
        self.u_jet(s).value()
    }
}

/// Case layout of a pair seed: the seed's own frame signs and the
/// orientation factor relating the reported binormal to T ^ N.
fn seed_layout(case: u8) -> ((f64, f64), f64) {
    match case {
        1 => ((-1.0, 1.0), 1.0),
        2 => ((1.0, -1.0), -1.0),
        3 => ((1.0, 1.0), -1.0),
        4 => ((1.0, -1.0), -1.0),
        _ => ((-1.0, 1.0), 1.0),
    }
}

fn make_seed(
    sig: Signature,
    case: u8,
    params: &BTreeMap<String, f64>,
    domain: (f64, f64),
) -> Result<Arc<dyn Curve>, CurveError> {
    let fam = format!("pair_seed_case{case}");
    let k = get(&fam, params, "k")?;
    let lam = get(&fam, params, "lam")?;
    let c0 = get(&fam, params, "c0")?;
    if k <= 0.0 {
        return Err(bad(&fam, "curvature k must be positive"));
    }
    if lam == 0.0 {
        return Err(bad(&fam, "offset lam must be nonzero"));
    }
    let (eps, omega) = seed_layout(case);
    let lambda_raw = omega * lam;
    let (t0, t1) = domain;
    let branch = match case {
        1 => {
            if k * t0 + c0 <= 1e-3 {
                return Err(bad(&fam, "k*t + c0 must stay positive on the domain"));
            }
            SeedBranch::Tanh { k, c0 }
        }
        5 => {
            if k * t0 + c0 <= 1e-3 {
                return Err(bad(&fam, "k*t + c0 must stay positive on the domain"));
            }
            SeedBranch::Coth { k, c0 }
        }
        2 => {
            if c0 - k * t1 <= 1e-3 {
                return Err(bad(&fam, "c0 - k*t must stay positive on the domain"));
            }
            SeedBranch::CothNeg { k, c0 }
        }
        4 => {
            if c0 - k * t1 <= 1e-3 {
                return Err(bad(&fam, "c0 - k*t must stay positive on the domain"));
            }
            SeedBranch::TanhNeg { k, c0 }
        }
        3 => {
            if c0 - k * t1 <= 1e-3 || c0 - k * t0 >= std::f64::consts::FRAC_PI_2 - 0.05 {
                return Err(bad(
                    &fam,
                    "c0 - k*t must stay inside (0, pi/2) on the domain",
                ));
            }
            SeedBranch::TanNeg { k, c0 }
        }
        _ => return Err(CurveError::UnknownFamily(fam)),
    };
    let inv_lam = 1.0 / lambda_raw;
    let tau = move |s: f64| branch.u_jet(s) * inv_lam;
    let curve = IntrinsicCurve::new(
        sig,
        eps,
        Box::new(move |s| Jet::constant(k) + Jet::variable(s) * 0.0),
        Box::new(tau),
        domain,
    )?;
    Ok(Arc::new(curve))
}

/// Builds a built-in family evaluator over `domain`.
pub fn make_family(
    sig: Signature,
    name: &str,
    params: &BTreeMap<String, f64>,
    domain: (f64, f64),
) -> Result<Arc<dyn Curve>, CurveError> {
    let (t0, t1) = domain;
    if !(t1 > t0) {
        return Err(CurveError::NotRegular);
    }
    match name {
        "timelike_helix" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            if a <= 0.0 || b.abs() <= a {
                return Err(bad(name, "requires a > 0 and |b| > a (timelike velocity)"));
            }
            Ok(Arc::new(AnalyticCurve {
                sig,
                shape: Shape::TimelikeHelix { a, b },
                domain,
            }))
        }
        "spacelike_helix_spacelike_normal" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            if a <= 0.0 || b.abs() <= a {
                return Err(bad(name, "requires a > 0 and |b| > a (spacelike velocity)"));
            }
            Ok(Arc::new(AnalyticCurve {
                sig,
                shape: Shape::SpacelikeHelixSpacelikeNormal { a, b },
                domain,
            }))
        }
        "spacelike_helix_timelike_normal" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            if a <= 0.0 || b == 0.0 {
                return Err(bad(name, "requires a > 0 and b != 0"));
            }
            Ok(Arc::new(AnalyticCurve {
                sig,
                shape: Shape::SpacelikeHelixTimelikeNormal { a, b },
                domain,
            }))
        }
        "line" => {
            let p = MVec3::new(
                get(name, params, "px")?,
                get(name, params, "py")?,
                get(name, params, "pz")?,
            );
            let d = MVec3::new(
                get(name, params, "dx")?,
                get(name, params, "dy")?,
                get(name, params, "dz")?,
            );
            if d.euclid_norm() == 0.0 {
                return Err(bad(name, "direction must be nonzero"));
            }
            Ok(Arc::new(AnalyticCurve {
                sig,
                shape: Shape::Line { p, d },
                domain,
            }))
        }
        "planar_spacelike" | "planar_timelike" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            if a + b * t0 <= 1e-6 || a + b * t1 <= 1e-6 {
                return Err(bad(name, "curvature profile a + b*t must stay positive"));
            }
            let eps = if name == "planar_spacelike" {
                (1.0, 1.0)
            } else {
                (-1.0, 1.0)
            };
            let curve = IntrinsicCurve::new(
                sig,
                eps,
                Box::new(move |s| Jet::variable(s) * b + a),
                Box::new(|s| Jet::variable(s) * 0.0),
                domain,
            )?;
            Ok(Arc::new(curve))
        }
        "pair_seed_case1" => make_seed(sig, 1, params, domain),
        "pair_seed_case2" => make_seed(sig, 2, params, domain),
        "pair_seed_case3" => make_seed(sig, 3, params, domain),
        "pair_seed_case4" => make_seed(sig, 4, params, domain),
        "pair_seed_case5" => make_seed(sig, 5, params, domain),
        other => Err(CurveError::UnknownFamily(other.to_string())),
    }
}

/// Closed-form oracle for a family, if it admits a Frenet frame.
///
/// The returned functions take the family's own curve parameter. Lines have
/// no frame (zero curvature) and return `None`.
pub fn family_oracle(
    name: &str,
    params: &BTreeMap<String, f64>,
) -> Result<Option<FamilyOracle>, CurveError> {
    match name {
        "timelike_helix" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            let c2 = b * b - a * a;
            Ok(Some(FamilyOracle {
                eps: (-1.0, 1.0),
                kappa: Box::new(move |_| a / c2),
                tau: Box::new(move |_| b / c2),
            }))
        }
        "spacelike_helix_spacelike_normal" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            let c2 = b * b - a * a;
            Ok(Some(FamilyOracle {
                eps: (1.0, 1.0),
                kappa: Box::new(move |_| a / c2),
                tau: Box::new(move |_| b / c2),
            }))
        }
        "spacelike_helix_timelike_normal" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            let c2 = a * a + b * b;
            Ok(Some(FamilyOracle {
                eps: (1.0, -1.0),
                kappa: Box::new(move |_| a / c2),
                tau: Box::new(move |_| b / c2),
            }))
        }
        "line" => Ok(None),
        "planar_spacelike" | "planar_timelike" => {
            let a = get(name, params, "a")?;
            let b = get(name, params, "b")?;
            let eps = if name == "planar_spacelike" {
                (1.0, 1.0)
            } else {
                (-1.0, 1.0)
            };
            Ok(Some(FamilyOracle {
                eps,
                kappa: Box::new(move |t| a + b * t),
                tau: Box::new(|_| 0.0),
            }))
        }
        "pair_seed_case1" | "pair_seed_case2" | "pair_seed_case3" | "pair_seed_case4"
        | "pair_seed_case5" => {
            let case: u8 = name.as_bytes()[name.len() - 1] - b'0';
            let k = get(name, params, "k")?;
            let lam = get(name, params, "lam")?;
            let c0 = get(name, params, "c0")?;
            let (eps, omega) = seed_layout(case);
            let lambda_raw = omega * lam;
            let branch = match case {
                1 => SeedBranch::Tanh { k, c0 },
                5 => SeedBranch::Coth { k, c0 },
                2 => SeedBranch::CothNeg { k, c0 },
                4 => SeedBranch::TanhNeg { k, c0 },
                _ => SeedBranch::TanNeg { k, c0 },
            };
            Ok(Some(FamilyOracle {
                eps,
                kappa: Box::new(move |_| k),
                tau: Box::new(move |s| branch.u_value(s) / lambda_raw),
            }))
        }
        other => Err(CurveError::UnknownFamily(other.to_string())),
    }
}

/// Orientation factor used by the pair layer for a seed's case.
pub fn seed_omega(case: u8) -> f64 {
    seed_layout(case).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::derivative;
    use crate::lorentz::{causal_character_in, minkowski_dot_in, CausalClass};

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn unknown_family_and_bad_params() {
        assert!(matches!(
            make_family(Signature::Ppm, "klein_bottle", &params(&[]), (0.0, 1.0)),
            Err(CurveError::UnknownFamily(_))
        ));
        assert!(matches!(
            make_family(
                Signature::Ppm,
                "timelike_helix",
                &params(&[("a", -1.0), ("b", 2.0)]),
                (0.0, 1.0)
            ),
            Err(CurveError::BadParams { .. })
        ));
        // |b| <= a gives a spacelike or null velocity, rejected for this family
        assert!(make_family(
            Signature::Ppm,
            "timelike_helix",
            &params(&[("a", 1.0), ("b", 0.5)]),
            (0.0, 1.0)
        )
        .is_err());
    }

    #[test]
    fn line_second_derivative_vanishes() {
        let p = params(&[
            ("px", 1.0),
            ("py", 2.0),
            ("pz", 3.0),
            ("dx", 0.5),
            ("dy", -0.5),
            ("dz", 0.1),
        ]);
        let c = make_family(Signature::Ppm, "line", &p, (-1.0, 1.0)).unwrap();
        let d2 = derivative(c.as_ref(), 0.3, 2).unwrap();
        assert_eq!(d2, MVec3::zero());
    }

    #[test]
    fn timelike_helix_velocity_is_timelike_everywhere() {
        // oracle: <a',a'> = a^2 - b^2 < 0, checked at 100 points
        let (a, b) = (1.0, 1.7);
        let c = make_family(
            Signature::Ppm,
            "timelike_helix",
            &params(&[("a", a), ("b", b)]),
            (0.0, 6.0),
        )
        .unwrap();
        for i in 0..100 {
            let t = 6.0 * i as f64 / 99.0;
            let v = derivative(c.as_ref(), t, 1).unwrap();
            assert_eq!(
                causal_character_in(Signature::Ppm, &v, 1e-10),
                CausalClass::Timelike
            );
            let q = minkowski_dot_in(Signature::Ppm, &v, &v);
            assert!((q - (a * a - b * b)).abs() < 1e-12);
        }
    }

    #[test]
    fn mpp_signature_places_timelike_axis_first() {
        let (a, b) = (1.0, 1.7);
        let c = make_family(
            Signature::Mpp,
            "timelike_helix",
            &params(&[("a", a), ("b", b)]),
            (0.0, 6.0),
        )
        .unwrap();
        let v = derivative(c.as_ref(), 0.4, 1).unwrap();
        assert_eq!(
            causal_character_in(Signature::Mpp, &v, 1e-10),
            CausalClass::Timelike
        );
    }

    #[test]
    fn planar_family_unit_speed_and_profile() {
        let c = make_family(
            Signature::Ppm,
            "planar_spacelike",
            &params(&[("a", 0.8), ("b", 0.2)]),
            (0.0, 2.0),
        )
        .unwrap();
        for i in 0..=20 {
            let t = 2.0 * i as f64 / 20.0;
            let v = derivative(c.as_ref(), t, 1).unwrap();
            let q = minkowski_dot_in(Signature::Ppm, &v, &v);
            assert!((q - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn seed_families_build_and_have_nonzero_torsion_oracle() {
        let specs: [(&str, f64, f64, f64, (f64, f64)); 5] = [
            ("pair_seed_case1", 1.0, -0.4, 0.5, (0.0, 1.0)),
            ("pair_seed_case2", 1.0, 0.45, 1.8, (0.0, 0.7)),
            ("pair_seed_case3", 1.0, -0.35, 1.2, (0.0, 0.9)),
            ("pair_seed_case4", 1.0, 0.35, 1.7, (0.0, 0.9)),
            ("pair_seed_case5", 1.0, -0.5, 0.6, (0.0, 1.0)),
        ];
        for (name, k, lam, c0, dom) in specs {
            let p = params(&[("k", k), ("lam", lam), ("c0", c0)]);
            let c = make_family(Signature::Ppm, name, &p, dom).unwrap();
            let v = derivative(c.as_ref(), 0.5 * (dom.0 + dom.1), 1).unwrap();
            assert!(v.is_finite());
            let oracle = family_oracle(name, &p).unwrap().unwrap();
            let tau_mid = (oracle.tau)(0.5 * (dom.0 + dom.1));
            assert!(tau_mid.abs() > 1e-3, "{name}: tau = {tau_mid}");
        }
    }
}
