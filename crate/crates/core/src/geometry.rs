//! Coordinates on the upper half-plane.
//!
//! The chart `g = f0 . h` parametrizes `C+ \ {u0}` by the trapezoid
//! `Xi = { -3pi/2 < eta <= pi/2, xi < -eta }`; its restriction to
//! `Theta = { -pi <= eta <= 0, xi < -eta }` sweeps out the closure of the
//! simply connected domain `Delta` on which the analytic continuation of
//! `T0` lives. Curves `Gamma_eta` are the images of `eta = const` lines.

use std::f64::consts::PI;

use crate::real::constants;
use crate::{Error, PlanePoint, Result};

/// Snap width for classifying a computed preimage onto the closed
/// boundary of `Theta`.
const ETA_SNAP: f64 = 1e-9;

/// Above this modulus the chart is evaluated in a rearranged form to keep
/// `R^2` representable.
const R_OVERFLOW_THRESHOLD: f64 = 1e150;

/// A point `(eta, xi)` of the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub eta: f64,
    pub xi: f64,
}

impl ParamPoint {
    pub fn new(eta: f64, xi: f64) -> Self {
        ParamPoint { eta, xi }
    }

    /// Places the point relative to the closed trapezoid `Theta`.
    pub fn theta_class(self) -> ThetaClass {
        if !in_theta(self) {
            ThetaClass::Outside
        } else if self.eta == 0.0 {
            ThetaClass::EtaZeroEdge
        } else if self.eta == -PI {
            ThetaClass::EtaMinusPiEdge
        } else {
            ThetaClass::Interior
        }
    }
}

impl From<(f64, f64)> for ParamPoint {
    fn from((eta, xi): (f64, f64)) -> Self {
        ParamPoint::new(eta, xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaClass {
    Interior,
    EtaZeroEdge,
    EtaMinusPiEdge,
    Outside,
}

/// Tags for the named regions of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Interior of the parameter trapezoid `Theta`.
    ThetaInterior,
    /// The two boundary edges `eta = 0` and `eta = -pi` of `Theta`.
    ThetaBoundary,
    /// The enclosing trapezoid `Xi`, outside `Theta`.
    Xi,
    /// The open image domain `Delta = g(int Theta)`; membership is decided
    /// by [`g_inv`].
    Delta,
    /// The closed strip `D = { -pi/2 <= Im w <= 0 }`.
    DStrip,
    /// The ray `L = (-inf, sqrt(3) pi / 9]` on the real axis.
    LRay,
    /// The open first quadrant `Q`.
    QQuadrant,
    Outside,
}

/// Membership in `Theta`: `-pi <= eta <= 0` and strictly `xi < -eta`.
pub fn in_theta(p: ParamPoint) -> bool {
    -PI <= p.eta && p.eta <= 0.0 && p.xi < -p.eta
}

/// Membership in `Xi`: `-3pi/2 < eta <= pi/2` and `xi < -eta`.
pub fn in_xi(p: ParamPoint) -> bool {
    -1.5 * PI < p.eta && p.eta <= 0.5 * PI && p.xi < -p.eta
}

/// Membership in the closed strip `D`.
pub fn in_d(w: PlanePoint) -> bool {
    -0.5 * PI <= w.im && w.im <= 0.0
}

/// Membership in the ray `L` (comparisons are exact IEEE comparisons, so
/// boundary points can be probed deliberately).
pub fn in_l(w: PlanePoint) -> bool {
    w.im == 0.0 && w.re <= constants().t_max
}

/// Membership in the open first quadrant `Q`.
pub fn in_q(z: PlanePoint) -> bool {
    z.re > 0.0 && z.im > 0.0
}

/// Classifies a parameter point among `Theta` interior, `Theta` boundary,
/// the rest of `Xi`, and everything else.
pub fn classify_param(p: ParamPoint) -> Region {
    match p.theta_class() {
        ThetaClass::Interior => Region::ThetaInterior,
        ThetaClass::EtaZeroEdge | ThetaClass::EtaMinusPiEdge => Region::ThetaBoundary,
        ThetaClass::Outside => {
            if in_xi(p) {
                Region::Xi
            } else {
                Region::Outside
            }
        }
    }
}

/// `f0(v) = sqrt(3) i (v - 1) / (1 - |v|^2) + u0` on the exterior of the
/// unit disc.
pub fn f0(v: PlanePoint) -> Result<PlanePoint> {
    let r2 = v.norm_sqr();
    if !(r2 > 1.0) {
        return Err(Error::domain("f0", format!("|v| = {} must exceed 1", v.norm())));
    }
    let sqrt3 = 3f64.sqrt();
    Ok(PlanePoint::new(0.0, sqrt3) * (v - 1.0) / (1.0 - r2) + constants().u0)
}

/// Inverse of `f0`: `v = (u - conj(u0)) / (conj(u) - conj(u0))`.
pub fn f0_inv(u: PlanePoint) -> Result<PlanePoint> {
    let u0 = constants().u0;
    if !(u.im > 0.0) {
        return Err(Error::domain(
            "f0_inv",
            format!("Im u = {} must be positive", u.im),
        ));
    }
    if u == u0 {
        return Err(Error::domain("f0_inv", "u0 is excluded from the chart"));
    }
    Ok((u - u0.conj()) / (u.conj() - u0.conj()))
}

/// `h(eta, xi) = exp(-sqrt(3)(eta + xi) + i xi)` on `Xi`.
pub fn h_map(p: ParamPoint) -> Result<PlanePoint> {
    if !in_xi(p) {
        return Err(Error::domain(
            "h_map",
            format!("({}, {}) lies outside the trapezoid", p.eta, p.xi),
        ));
    }
    let sqrt3 = 3f64.sqrt();
    Ok((-sqrt3 * (p.eta + p.xi)).exp() * PlanePoint::cis(p.xi))
}

/// Inverse of `h`: lands in `Xi` by shifting with
/// `k = ceil(eta0 / 2pi - 1/4)`.
pub fn h_inv(v: PlanePoint) -> Result<ParamPoint> {
    if !(v.norm_sqr() > 1.0) {
        return Err(Error::domain(
            "h_inv",
            format!("|v| = {} must exceed 1", v.norm()),
        ));
    }
    let sqrt3 = 3f64.sqrt();
    let eta0 = -v.norm().ln() / sqrt3 - v.arg();
    let xi0 = v.arg();
    let k = (eta0 / (2.0 * PI) - 0.25).ceil();
    Ok(ParamPoint::new(eta0 - 2.0 * PI * k, xi0 + 2.0 * PI * k))
}

/// The chart `g(eta, xi) = f(e^{-sqrt(3)(eta + xi)}, xi)`, restricted to
/// `Theta`; its image is the closure of `Delta` minus `{u0} + [0, inf)`.
pub fn g_map(p: ParamPoint) -> Result<PlanePoint> {
    if !in_theta(p) {
        return Err(Error::domain(
            "g_map",
            format!("({}, {}) lies outside the trapezoid", p.eta, p.xi),
        ));
    }
    Ok(g_map_unchecked(p))
}

pub(crate) fn g_map_unchecked(p: ParamPoint) -> PlanePoint {
    let sqrt3 = 3f64.sqrt();
    let u0 = constants().u0;
    let su = sqrt3 * (p.eta + p.xi); // < 0 on Theta
    let r = (-su).exp();
    if r <= R_OVERFLOW_THRESHOLD {
        PlanePoint::new(0.0, sqrt3) * (r * PlanePoint::cis(p.xi) - 1.0) / (1.0 - r * r) + u0
    } else {
        // rearranged so that R^2 never materializes
        let num = PlanePoint::cis(p.xi) - su.exp();
        let den_ln = -su + (-(2.0 * su).exp()).ln_1p();
        u0 - PlanePoint::new(0.0, sqrt3) * num * (-den_ln).exp()
    }
}

/// Inverse of `g` on the closure of `Delta` minus `[0, inf)` and `u0`.
///
/// The preimage candidate from `h_inv` lands in `Xi`; at most one shift by
/// `2 pi` (applied as `eta -> eta - 2k pi`, `xi -> xi + 2k pi`) can put it
/// in `Theta`, because the curves `Gamma_eta` partition the half-plane.
pub fn g_inv(u: PlanePoint) -> Result<ParamPoint> {
    let v = f0_inv(u)?;
    let base = h_inv(v)?;
    for shift in [0.0, 2.0 * PI, -2.0 * PI] {
        let eta = base.eta + shift;
        let xi = base.xi - shift;
        if (-PI - ETA_SNAP..=ETA_SNAP).contains(&eta) {
            let p = ParamPoint::new(eta.clamp(-PI, 0.0), xi);
            if !in_theta(p) {
                continue;
            }
            let back = g_map_unchecked(p);
            if (back - u).norm() <= 1e-11 * (1.0 + u.norm()) {
                return Ok(p);
            }
            return Err(Error::Inconsistent {
                op: "g_inv",
                msg: format!("roundtrip defect {} at ({}, {})", (back - u).norm(), p.eta, p.xi),
            });
        }
    }
    Err(Error::OutsideDomain { op: "g_inv" })
}

/// Samples of the level curve `Gamma_eta` at the given `xi` values.
pub fn gamma_curve(eta: f64, xi_grid: &[f64]) -> Result<Vec<PlanePoint>> {
    if !(-PI..=0.0).contains(&eta) {
        return Err(Error::domain(
            "gamma_curve",
            format!("eta = {eta} must lie in [-pi, 0]"),
        ));
    }
    xi_grid
        .iter()
        .map(|&xi| {
            if xi >= -eta {
                return Err(Error::domain(
                    "gamma_curve",
                    format!("xi = {xi} must satisfy xi < {}", -eta),
                ));
            }
            Ok(g_map_unchecked(ParamPoint::new(eta, xi)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> PlanePoint {
        PlanePoint::new(re, im)
    }

    #[test]
    fn f0_on_real_points() {
        // sqrt(3) i (3 - 1)/(1 - 9) + u0 = 1/2 + sqrt(3)/4 i
        let v = f0(c(3.0, 0.0)).unwrap();
        assert!((v - c(0.5, 3f64.sqrt() / 4.0)).norm() < 1e-15);
        let v = f0(c(-3.0, 0.0)).unwrap();
        assert!((v - c(0.5, 3f64.sqrt())).norm() < 1e-15);
        assert!(f0(c(0.5, 0.5)).is_err());
        assert!(f0(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn f0_inv_worked_points() {
        let v = f0_inv(c(0.5, 3f64.sqrt())).unwrap();
        assert!((v - c(-3.0, 0.0)).norm() < 1e-13);
        // |f0_inv(i)|^2 = (2 + sqrt(3)) / (2 - sqrt(3)) = 7 + 4 sqrt(3)
        let v = f0_inv(c(0.0, 1.0)).unwrap();
        assert!((v.norm_sqr() - (7.0 + 4.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!(v.norm() > 1.0);
        assert!(f0_inv(c(2.0, 0.0)).is_err());
        assert!(f0_inv(constants().u0).is_err());
        assert!(f0_inv(c(0.3, -1.0)).is_err());
    }

    #[test]
    fn f0_roundtrip_on_circles() {
        for r in [1.01, 2.0, 10.0, 100.0] {
            for k in 0..16 {
                let v = PlanePoint::from_polar(r, 2.0 * PI * k as f64 / 16.0 + 0.01);
                let back = f0_inv(f0(v).unwrap()).unwrap();
                assert!(
                    (back - v).norm() <= 1e-13 * v.norm(),
                    "r = {r}, k = {k}: {back} vs {v}"
                );
            }
        }
    }

    #[test]
    fn h_map_values_and_modulus() {
        // frozen from a 40-digit evaluation of e^{sqrt(3)} (cos 1 - i sin 1)
        let v = h_map(ParamPoint::new(0.0, -1.0)).unwrap();
        assert!((v - c(3.053914887386167, -4.756190636053822)).norm() < 1e-13);
        // e^{sqrt(3) pi} on the positive real axis
        let v = h_map(ParamPoint::new(-PI, 0.0)).unwrap();
        assert!((v.re - 230.76458831914587).abs() < 1e-10 && v.im.abs() < 1e-13);
        for (eta, xi) in [(0.25, -3.0), (-1.0, 0.5), (-4.0, 2.0)] {
            let p = ParamPoint::new(eta, xi);
            let v = h_map(p).unwrap();
            let expected = (-(3f64.sqrt()) * (eta + xi)).exp();
            assert!((v.norm() - expected).abs() <= 1e-12 * expected);
            assert!(v.norm() > 1.0);
        }
        assert!(h_map(ParamPoint::new(1.7, -2.0)).is_err());
        assert!(h_map(ParamPoint::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn h_inv_is_the_xi_representative() {
        let p = h_inv(h_map(ParamPoint::new(0.0, -1.0)).unwrap()).unwrap();
        assert!((p.eta - 0.0).abs() < 1e-12 && (p.xi + 1.0).abs() < 1e-12);

        let p = h_inv(c(230.76458831914587, 0.0)).unwrap();
        assert!(in_xi(p));
        assert!((p.eta + PI).abs() < 1e-12 && p.xi.abs() < 1e-12);

        let p = h_inv(c(2.0, 0.0)).unwrap();
        assert!(in_xi(p));
        assert!((p.eta + 2f64.ln() / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(p.xi, 0.0);
        let back = h_map(p).unwrap();
        assert!((back - c(2.0, 0.0)).norm() < 1e-12);

        assert!(h_inv(c(0.3, 0.2)).is_err());
    }

    #[test]
    fn h_roundtrip_on_xi_grid() {
        for i in 0..12 {
            let eta = -1.5 * PI + (i as f64 + 0.5) / 12.0 * 2.0 * PI;
            for j in 0..12 {
                let xi = -eta - 0.05 - j as f64;
                let p = ParamPoint::new(eta, xi);
                let q = h_inv(h_map(p).unwrap()).unwrap();
                assert!(
                    (q.eta - eta).abs() < 1e-12 && (q.xi - xi).abs() < 1e-12,
                    "({eta}, {xi}) -> ({}, {})",
                    q.eta,
                    q.xi
                );
            }
        }
    }

    #[test]
    fn g_is_the_composition_of_f0_and_h() {
        for i in 0..10 {
            let eta = -PI + PI * i as f64 / 9.0;
            for j in 0..10 {
                let xi = -eta - 0.1 - 0.7 * j as f64;
                let p = ParamPoint::new(eta, xi);
                let direct = g_map(p).unwrap();
                let composed = f0(h_map(p).unwrap()).unwrap();
                assert!((direct - composed).norm() <= 1e-14 * (1.0 + direct.norm()));
            }
        }
    }

    #[test]
    fn g_map_worked_point_and_quadrant() {
        // frozen from a 40-digit evaluation: g(-pi, 0) = 1/2 + i (sqrt(3)/2 - sqrt(3)/(e^{sqrt(3) pi} + 1))
        let u = g_map(ParamPoint::new(-PI, 0.0)).unwrap();
        assert!((u - c(0.5, 0.858552084326404)).norm() < 1e-14);
        for i in 0..50 {
            let eta = -PI + PI * i as f64 / 49.0;
            for j in 0..50 {
                let xi = -eta - 0.05 - 0.4 * j as f64;
                let u = g_map(ParamPoint::new(eta, xi)).unwrap();
                assert!(u.re > 0.0 && u.im > 0.0, "({eta}, {xi}) -> {u}");
            }
        }
        assert!(g_map(ParamPoint::new(0.5, -3.0)).is_err());
    }

    #[test]
    fn g_map_overflow_guard_is_continuous() {
        // straddle the naive/rearranged switch at R = 1e150
        let s_lo = 150.0 * 10f64.ln() - 1e-6;
        let s_hi = 150.0 * 10f64.ln() + 1e-6;
        let sqrt3 = 3f64.sqrt();
        let u_lo = g_map(ParamPoint::new(-1.0, 1.0 - s_lo / sqrt3)).unwrap();
        let u_hi = g_map(ParamPoint::new(-1.0, 1.0 - s_hi / sqrt3)).unwrap();
        assert!((u_lo - u_hi).norm() < 1e-12);
        // far tail collapses onto u0
        let u = g_map(ParamPoint::new(-1.0, -500.0)).unwrap();
        assert!((u - constants().u0).norm() < 1e-100);
    }

    #[test]
    fn positivity_inequality_on_theta() {
        // e^{-sqrt(3)(eta + xi)} > sqrt(3 sin^2 xi + 1) - sqrt(3) sin(xi)
        let sqrt3 = 3f64.sqrt();
        for i in 0..100 {
            let eta = -PI * i as f64 / 99.0;
            for j in 0..100 {
                let xi = -eta - 0.01 - 15.0 * j as f64 / 99.0;
                let lhs = (-sqrt3 * (eta + xi)).exp();
                let s = xi.sin();
                let rhs = (3.0 * s * s + 1.0).sqrt() - sqrt3 * s;
                assert!(lhs > rhs, "({eta}, {xi}): {lhs} <= {rhs}");
            }
        }
    }

    #[test]
    fn g_inv_roundtrips() {
        let p = ParamPoint::new(-PI / 2.0, 1.0);
        let q = g_inv(g_map(p).unwrap()).unwrap();
        assert!((q.eta - p.eta).abs() < 1e-11 && (q.xi - p.xi).abs() < 1e-11);

        // boundary curve eta = -pi, recovered through the snap
        let q = g_inv(c(0.5, 0.858552084326404)).unwrap();
        assert!((q.eta + PI).abs() < 1e-9 && q.xi.abs() < 1e-6);

        let u = c(2.0, 2.0);
        let q = g_inv(u).unwrap();
        let back = g_map(q).unwrap();
        assert!((back - u).norm() <= 1e-11 * (1.0 + u.norm()));
    }

    #[test]
    fn g_inv_rejects_points_outside_the_closure() {
        // preimage lands at eta = 0.3, inside Xi but not Theta
        let u = f0(h_map(ParamPoint::new(0.3, -1.0)).unwrap()).unwrap();
        assert!(matches!(
            g_inv(u),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(g_inv(c(1.0, 0.0)).is_err());
        assert!(g_inv(c(0.0, -1.0)).is_err());
    }

    #[test]
    fn gamma_curve_limits() {
        // on Gamma_0 the curve shrinks into the origin as xi -> 0-
        let pts = gamma_curve(0.0, &[-0.1, -1.0, -5.0]).unwrap();
        assert!(pts[0].norm() < 0.2);
        assert!(pts[0].norm() < pts[1].norm() && pts[1].norm() < pts[2].norm());
        for u in &pts {
            assert!(u.re > 0.0 && u.im > 0.0);
        }
        // boundary limit: Gamma_eta spirals into u0 monotonically; the far
        // samples collapse onto u0 exactly once |u - u0| drops below the
        // spacing of floats around u0
        let u0 = constants().u0;
        for eta in [-PI, -1.0, -0.2] {
            let pts = gamma_curve(eta, &[-10.0, -20.0, -40.0]).unwrap();
            let d: Vec<f64> = pts.iter().map(|u| (u - u0).norm()).collect();
            assert!(d[0] >= d[1] && d[1] >= d[2], "eta = {eta}: {d:?}");
            assert!(d[0] > 1e-12 && d[2] < 1e-14, "eta = {eta}: {d:?}");
        }
        assert!(gamma_curve(0.3, &[-1.0]).is_err());
        assert!(gamma_curve(-1.0, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn region_predicates() {
        let c0 = constants();
        assert!(in_l(c(0.0, 0.0)));
        assert!(in_l(c(c0.t_max, 0.0)));
        assert!(!in_l(c(c0.t_max + 1e-12, 0.0)));
        assert!(!in_l(c(0.0, -1e-300)));
        assert!(in_d(c(123.0, -PI / 2.0)));
        assert!(!in_d(c(-0.6046, -1.6)));
        assert!(in_q(c(0.1, 2.0)));
        assert!(!in_q(c(0.0, 1.0)) && !in_q(c(1.0, 0.0)));
        assert!(!in_theta(ParamPoint::new(0.0, 0.0)));
        assert!(in_theta(ParamPoint::new(0.0, -1e-9)));
        // L is inside D, Theta inside Xi
        assert!(in_d(c(-5.0, 0.0)) && in_l(c(-5.0, 0.0)));
        assert!(in_xi(ParamPoint::new(-PI, 1.0)) && in_theta(ParamPoint::new(-PI, 1.0)));
        assert_eq!(
            classify_param(ParamPoint::new(-1.0, 0.5)),
            Region::ThetaInterior
        );
        assert_eq!(
            classify_param(ParamPoint::new(0.0, -1.0)),
            Region::ThetaBoundary
        );
        assert_eq!(classify_param(ParamPoint::new(0.4, -1.0)), Region::Xi);
        assert_eq!(classify_param(ParamPoint::new(2.0, -9.0)), Region::Outside);
        assert_eq!(
            ParamPoint::new(-PI, 2.0).theta_class(),
            ThetaClass::EtaMinusPiEdge
        );
    }
}
