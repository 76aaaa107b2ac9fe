//! Arc-length reparametrization by adaptive composite Simpson quadrature.

use super::monotone::MonotoneMap;
use super::{Curve, CurveError};
use crate::lorentz::{jvec_deriv, jvec_dot_in};

/// Monotone map t <-> s with s(t_min) = 0.
#[derive(Debug, Clone)]
pub struct ArcLengthMap {
    map: MonotoneMap,
    pub total: f64,
    pub tol: f64,
}

impl ArcLengthMap {
    pub fn s_of_t(&self, t: f64) -> f64 {
        self.map.eval(t)
    }

    pub fn t_of_s(&self, s: f64) -> f64 {
        self.map.inverse(s)
    }

    pub fn domain_t(&self) -> (f64, f64) {
        self.map.x_range()
    }

    /// Speed ds/dt at t (from the stored Hermite data).
    pub fn speed(&self, t: f64) -> f64 {
        self.map.eval_deriv(t)
    }

    pub fn as_monotone(&self) -> &MonotoneMap {
        &self.map
    }
}

fn speed_at(curve: &dyn Curve, t: f64, tol_null: f64) -> Result<f64, CurveError> {
    let j = curve.jets(t)?;
    let d1 = jvec_deriv(&j);
    let q = jvec_dot_in(curve.signature(), &d1, &d1).value();
    if q.abs() < tol_null {
        let e = d1[0].value().powi(2) + d1[1].value().powi(2) + d1[2].value().powi(2);
        if e < tol_null {
            return Err(CurveError::NotRegular);
        }
        return Err(CurveError::NullVelocity { t, tol: tol_null });
    }
    Ok(q.abs().sqrt())
}

/// Adaptive Simpson on [a, b] with function values cached at endpoints.
fn adaptive_simpson(
    f: &mut dyn FnMut(f64) -> Result<f64, CurveError>,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    tol: f64,
    depth: usize,
) -> Result<f64, CurveError> {
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    simpson_step(f, a, b, fa, fm, fb, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &mut dyn FnMut(f64) -> Result<f64, CurveError>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    tol: f64,
    depth: usize,
) -> Result<f64, CurveError> {
    let h = b - a;
    let whole = h / 6.0 * (fa + 4.0 * fm + fb);
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m))?;
    let frm = f(0.5 * (m + b))?;
    let left = h / 12.0 * (fa + 4.0 * flm + fm);
    let right = h / 12.0 * (fm + 4.0 * frm + fb);
    let err = (left + right - whole) / 15.0;
    if err.abs() <= tol || depth == 0 {
        return Ok(left + right + err);
    }
    let l = simpson_step(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Builds the arc-length map s(t) = integral of sqrt(|<a',a'>|).
///
/// The inverse is available through [`ArcLengthMap::t_of_s`] (monotone
/// bracketing plus safeguarded Newton on the stored interpolant).
pub fn arclength_map(
    curve: &dyn Curve,
    domain: (f64, f64),
    tol: f64,
) -> Result<ArcLengthMap, CurveError> {
    let (t0, t1) = domain;
    if !(t1 > t0) || tol <= 0.0 {
        return Err(CurveError::NotRegular);
    }
    let tol_null = 1e-12;
    let n = 400usize;
    let h = (t1 - t0) / n as f64;
    let mut xs = Vec::with_capacity(n + 1);
    let mut ss = Vec::with_capacity(n + 1);
    let mut ms = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    let mut prev_m = speed_at(curve, t0, tol_null)?;
    xs.push(t0);
    ss.push(0.0);
    ms.push(prev_m);
    let local_tol = tol / n as f64;
    for i in 1..=n {
        let a = t0 + (i - 1) as f64 * h;
        let b = t0 + i as f64 * h;
        let mb = speed_at(curve, b, tol_null)?;
        let mut f = |t: f64| speed_at(curve, t, tol_null);
        acc += adaptive_simpson(&mut f, a, b, prev_m, mb, local_tol, 20)?;
        xs.push(b);
        ss.push(acc);
        ms.push(mb);
        prev_m = mb;
    }
    Ok(ArcLengthMap {
        map: MonotoneMap::new(xs, ss, ms),
        total: acc,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::make_family;
    use crate::lorentz::Signature;
    use std::collections::BTreeMap;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn line_length_is_exact() {
        let p = params(&[
            ("px", 0.0),
            ("py", 0.0),
            ("pz", 0.0),
            ("dx", 1.0),
            ("dy", 0.0),
            ("dz", 0.0),
        ]);
        let c = make_family(Signature::Ppm, "line", &p, (0.0, 2.0)).unwrap();
        let m = arclength_map(c.as_ref(), (0.0, 2.0), 1e-10).unwrap();
        assert!((m.total - 2.0).abs() < 1e-10);
    }

    #[test]
    fn helix_speed_is_constant_closed_form() {
        // timelike helix: speed^2 = b^2 - a^2
        let (a, b) = (1.0, 1.6);
        let p = params(&[("a", a), ("b", b)]);
        let c = make_family(Signature::Ppm, "timelike_helix", &p, (0.0, 4.0)).unwrap();
        let m = arclength_map(c.as_ref(), (0.0, 4.0), 1e-10).unwrap();
        let speed = (b * b - a * a).sqrt();
        assert!((m.total - 4.0 * speed).abs() < 1e-8, "{}", m.total);
    }

    #[test]
    fn inverse_round_trip_within_tolerance() {
        let p = params(&[("a", 1.0), ("b", 1.4)]);
        let tol = 1e-9;
        let c = make_family(Signature::Ppm, "timelike_helix", &p, (0.0, 5.0)).unwrap();
        let m = arclength_map(c.as_ref(), (0.0, 5.0), tol).unwrap();
        for i in 0..50 {
            let t0 = 0.05 + 4.9 * i as f64 / 49.0;
            let s = m.s_of_t(t0);
            let t_back = m.t_of_s(s);
            assert!((t_back - t0).abs() < 10.0 * tol, "{t0} {t_back}");
        }
    }

    #[test]
    fn degenerate_domain_rejected() {
        let p = params(&[("a", 1.0), ("b", 1.4)]);
        let c = make_family(Signature::Ppm, "timelike_helix", &p, (0.0, 1.0)).unwrap();
        assert!(matches!(
            arclength_map(c.as_ref(), (1.0, 1.0), 1e-8),
            Err(CurveError::NotRegular)
        ));
    }

    #[test]
    fn monotone_in_t() {
        let p = params(&[("a", 1.2), ("b", 2.0)]);
        let c = make_family(Signature::Ppm, "timelike_helix", &p, (0.0, 3.0)).unwrap();
        let m = arclength_map(c.as_ref(), (0.0, 3.0), 1e-9).unwrap();
        let mut prev = -1.0;
        for i in 0..=60 {
            let s = m.s_of_t(3.0 * i as f64 / 60.0);
            assert!(s > prev);
            prev = s;
        }
    }
}
