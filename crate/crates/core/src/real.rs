//! The real-line slice of the construction.
//!
//! `t0` is the strictly decreasing elementary function
//! `T0(s) = int_s^1 t/(t^2 - t + 1) dt` on `[0, inf)`, with closed form
//! `-(sqrt(3)/3)(arctan((2s-1)/sqrt(3)) - pi/6) - ln(s^2 - s + 1)/2`.
//! Its inverse `t0_inv`, the real half-log map `w_real`, and the closed
//! form of the moment generating function live here, together with the
//! named constants of the construction.

use std::sync::LazyLock;

use crate::quad::GaussLegendre;
use crate::{Error, PlanePoint, Result};

/// Named constants, computed in working precision at first use.
#[derive(Debug, Clone, Copy)]
pub struct Constants {
    /// `sqrt(3) pi / 9 = T0(0)`, the right end of the ray `L`.
    pub t_max: f64,
    /// `2 / (e^{2 sqrt(3) pi / 9} - 1)`; fixes the support edge.
    pub gamma0: f64,
    /// `sqrt(2 + gamma0)`, the edge of the support of the measure.
    pub edge: f64,
    /// `(1 + sqrt(3) i)/2`, the upper pole of `t/(t^2 - t + 1)`.
    pub u0: PlanePoint,
    /// `-sqrt(3) pi / 9`, additive constant of the multivalued antiderivative.
    pub alpha: f64,
    /// `(3 - sqrt(3) i)/6`, logarithm coefficient of the same.
    pub beta: PlanePoint,
}

static CONSTANTS: LazyLock<Constants> = LazyLock::new(|| {
    let sqrt3 = 3f64.sqrt();
    let t_max = sqrt3 * std::f64::consts::PI / 9.0;
    let gamma0 = 2.0 / (2.0 * t_max).exp_m1();
    Constants {
        t_max,
        gamma0,
        edge: (2.0 + gamma0).sqrt(),
        u0: PlanePoint::new(0.5, 0.5 * sqrt3),
        alpha: -t_max,
        beta: PlanePoint::new(0.5, -sqrt3 / 6.0),
    }
});

pub fn constants() -> &'static Constants {
    &CONSTANTS
}

/// Absolute tolerance of the root finder behind [`t0_inv`].
pub const T0_INV_TOL: f64 = 1e-13;

/// Below this distance from `t_max` the inverse starts from the
/// branch-point series `s ~ sqrt(2 (t_max - w))`.
const BRANCH_SERIES_WINDOW: f64 = 1e-4;

fn check_nonneg(op: &'static str, s: f64) -> Result<()> {
    if !(s >= 0.0) {
        return Err(Error::domain(op, format!("argument {s} must be >= 0")));
    }
    Ok(())
}

/// `T0(s)` for `s >= 0`.
pub fn t0(s: f64) -> Result<f64> {
    check_nonneg("t0", s)?;
    Ok(t0_unchecked(s))
}

pub(crate) fn t0_unchecked(s: f64) -> f64 {
    let sqrt3 = 3f64.sqrt();
    -(sqrt3 / 3.0) * (((2.0 * s - 1.0) / sqrt3).atan() - std::f64::consts::FRAC_PI_6)
        - 0.5 * (s * s - s + 1.0).ln()
}

/// `T0'(s) = -s / (s^2 - s + 1)`.
pub(crate) fn t0_derivative(s: f64) -> f64 {
    -s / (s * s - s + 1.0)
}

/// `T0(s)` by Gauss-Legendre quadrature of the integral form; serves as an
/// oracle for the closed form. Panels are capped at length 3/2 so the poles
/// at `e^{+-i pi/3}` stay well away from every panel's Bernstein ellipse.
pub fn t0_integral(s: f64, npoints: usize) -> Result<f64> {
    check_nonneg("t0_integral", s)?;
    if s == 1.0 {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(npoints);
    let panels = ((s - 1.0).abs() / 1.5).ceil().max(1.0) as usize;
    Ok(rule.integrate_panels(s, 1.0, panels, |t| t / (t * t - t + 1.0)))
}

/// Inverse of `T0` on `(-inf, t_max]`, by Newton guarded with bisection.
/// Arguments up to one rounding step above `t_max` are clamped, so the
/// float image of `t0` itself always roundtrips.
pub fn t0_inv(w: f64) -> Result<f64> {
    let c = constants();
    if !(w <= c.t_max + 1e-14) {
        return Err(Error::domain(
            "t0_inv",
            format!("argument {w} exceeds the maximum {}", c.t_max),
        ));
    }
    if w >= c.t_max {
        return Ok(0.0);
    }
    // Bracket: t0 is strictly decreasing with t0(0) = t_max and t0 -> -inf.
    let mut lo = 0.0;
    let mut hi = 2.0;
    while t0_unchecked(hi) > w {
        hi *= 2.0;
    }
    let mut s = if c.t_max - w < BRANCH_SERIES_WINDOW {
        // T0'(0) = 0 and T0''(0) = -1, so Newton stagnates without this seed.
        (2.0 * (c.t_max - w)).sqrt()
    } else {
        1.0f64.clamp(lo, hi)
    };
    for _ in 0..100 {
        let f = t0_unchecked(s) - w;
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let d = t0_derivative(s);
        let newton = s - f / d;
        let next = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - s).abs() <= T0_INV_TOL.max(1e-15 * s.abs());
        s = next;
        if done {
            break;
        }
    }
    Ok(s)
}

/// `W(x) = (1/2) ln(1 + 2/(x^2 - 2))` for `|x| > sqrt(2)`.
pub fn w_real(x: f64) -> Result<f64> {
    if !(x.abs() > std::f64::consts::SQRT_2) {
        return Err(Error::domain(
            "w_real",
            format!("|{x}| must exceed sqrt(2)"),
        ));
    }
    Ok(0.5 * (2.0 / (x * x - 2.0)).ln_1p())
}

/// Closed form of the moment generating function,
/// `M(x) = 1 / t0_inv( (1/2) ln(1/(1 - 2x^2)) )` for `|x| < 1/edge`.
pub fn mgf_closed(x: f64) -> Result<f64> {
    let c = constants();
    if !(x.abs() < 1.0 / c.edge) {
        return Err(Error::domain(
            "mgf_closed",
            format!("|{x}| must be below 1/edge = {}", 1.0 / c.edge),
        ));
    }
    let w = -0.5 * (-2.0 * x * x).ln_1p();
    Ok(1.0 / t0_inv(w)?)
}
