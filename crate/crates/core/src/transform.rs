//! The analytic continuation `T` of `t0`, its inverse on the strip `D`,
//! the half-log map `W` with its inverse, and the Cauchy-Stieltjes pair
//! `F = z T^{-1}(W(z))`, `G = 1/F`.
//!
//! `H(eta, xi) = T(g(eta, xi))` has an exact form whose imaginary part is
//! `eta/2` on every level curve; the real part is strictly decreasing in
//! `xi`, which is what makes `H` (and hence `T`) invertible by bisection.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, SQRT_2};

use crate::geometry::{g_inv, g_map, in_d, in_l, in_theta, ParamPoint};
use crate::real::{constants, t0, t0_inv};
use crate::{Error, PlanePoint, Result};

/// Within this distance of `t_max` the inverse of `T` is routed through the
/// real branch: the bisection bracket on the `eta = 0` curve collapses there.
const L_BOUNDARY_WINDOW: f64 = 1e-12;

/// Above this real part, `w1_inv` switches to an overflow-free form:
/// complex division squares `|e^{2w}|`, which must stay representable.
const W1_LARGE_RE: f64 = 150.0;

/// Square root with the argument taken in `(-pi/2, 3pi/2]`; maps the closed
/// upper half-plane onto the closed first quadrant.
pub fn branch_sqrt(v: PlanePoint) -> PlanePoint {
    if v == PlanePoint::new(0.0, 0.0) {
        return v;
    }
    let mut phase = v.arg();
    if phase <= -FRAC_PI_2 {
        phase += 2.0 * PI;
    }
    PlanePoint::from_polar(v.norm().sqrt(), 0.5 * phase)
}

/// `exp(w) - 1` without cancellation for small `w`.
fn complex_exp_m1(w: PlanePoint) -> PlanePoint {
    let half = (0.5 * w.im).sin();
    PlanePoint::new(
        w.re.exp_m1() * w.im.cos() - 2.0 * half * half,
        w.re.exp() * w.im.sin(),
    )
}

/// Exact form of `H(eta, xi) = T(g(eta, xi))` on `Theta`.
///
/// With `R = e^{-sqrt(3)(eta + xi)}` and `u = g(eta, xi)`:
///
/// ```text
/// Re H = -(sqrt(3)/6) ( Arg(R e^{i xi} - 1) - Arg(u - conj(u0))
///                       + 2 ceil((xi - pi)/(2 pi)) pi + pi/6 )
///        - ln(|u - u0| |u - conj(u0)|) / 2,
/// Im H = eta / 2.
/// ```
///
/// Everything is evaluated in forms that stay accurate for `R` near 1 and
/// for `R` beyond overflow: `u - u0` is taken analytically (never as a
/// difference of rounded values), `ln(R - 1/R)` goes through `sinh`, and the
/// argument reduction of `xi` is shared with the ceiling term so the
/// principal-branch seams of the two cancel exactly.
pub fn h_exact(p: ParamPoint) -> Result<PlanePoint> {
    if !in_theta(p) {
        return Err(Error::domain(
            "h_exact",
            format!("({}, {}) lies outside the trapezoid", p.eta, p.xi),
        ));
    }
    let sqrt3 = 3f64.sqrt();
    let k2 = ((p.xi - PI) / (2.0 * PI)).ceil();
    let xi_r = p.xi - 2.0 * PI * k2; // in (-pi, pi]
    let su = sqrt3 * (p.eta + p.xi); // < 0 on Theta

    // (R e^{i xi} - 1)/R, written to dodge the cancellations near (0, 0)
    let num = PlanePoint::new(
        -2.0 * (0.5 * xi_r).sin().powi(2) - su.exp_m1(),
        xi_r.sin(),
    );
    let arg1 = num.arg();

    // ln(R - 1/R) = ln(2 sinh(-su)), overflow-safe for very negative su
    let den_ln = if -su > 350.0 {
        -su + (-(2.0 * su).exp()).ln_1p()
    } else {
        (2.0 * (-su).sinh()).ln()
    };

    let d1 = PlanePoint::new(0.0, -sqrt3) * num * (-den_ln).exp(); // u - u0
    let d2 = d1 + PlanePoint::new(0.0, sqrt3); // u - conj(u0)
    let arg2 = d2.arg();
    let ln_d1 = sqrt3.ln() + num.norm().ln() - den_ln;
    let ln_prod = ln_d1 + d2.norm().ln();

    let re = -(sqrt3 / 6.0) * (arg1 - arg2 + 2.0 * k2 * PI + FRAC_PI_6) - 0.5 * ln_prod;
    Ok(PlanePoint::new(re, 0.5 * p.eta))
}

fn re_h(eta: f64, xi: f64) -> f64 {
    h_exact(ParamPoint::new(eta, xi))
        .expect("bisection stays inside the trapezoid")
        .re
}

/// Inverse of `H` on `D` minus the ray `L`.
///
/// `eta = 2 Im w` is immediate; `xi` solves `Re H(eta, xi) = Re w` by
/// bisection on the strictly decreasing map `xi -> Re H(eta, xi)`. The left
/// bracket end expands geometrically (`Re H -> +inf` as `xi -> -inf`
/// guarantees termination).
pub fn h_inv(w: PlanePoint) -> Result<ParamPoint> {
    let c = constants();
    if !in_d(w) {
        return Err(Error::domain(
            "h_inv",
            format!("{w} lies outside the strip"),
        ));
    }
    if in_l(w) || (w - c.t_max).norm() < L_BOUNDARY_WINDOW {
        return Err(Error::RealBranch);
    }
    let eta = 2.0 * w.im;
    let target = w.re;
    let mut hi = -eta - 1e-12;
    if re_h(eta, hi) > target {
        return Err(Error::domain(
            "h_inv",
            format!("real part {target} is below the attainable range at eta = {eta}"),
        ));
    }
    let mut lo = f64::NAN;
    let mut gap = 1.0;
    for _ in 0..80 {
        let cand = -eta - gap;
        if re_h(eta, cand) > target {
            lo = cand;
            break;
        }
        gap *= 2.0;
    }
    if lo.is_nan() {
        return Err(Error::Inconsistent {
            op: "h_inv",
            msg: format!("bracket expansion failed for {w}"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if re_h(eta, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick the endpoint that lands closer
    let xi = if (re_h(eta, lo) - target).abs() < (re_h(eta, hi) - target).abs() {
        lo
    } else {
        hi
    };
    Ok(ParamPoint::new(eta, xi))
}

/// The continuation `T` on the closure of `Delta` minus `{u0}`: the real
/// function `t0` on `[0, inf)`, `H . g^{-1}` everywhere else.
pub fn t_of(u: PlanePoint) -> Result<PlanePoint> {
    let c = constants();
    if u == c.u0 {
        return Err(Error::domain("t_of", "the winding point u0 is excluded"));
    }
    if u.im == 0.0 {
        if u.re >= 0.0 {
            return Ok(PlanePoint::new(t0(u.re)?, 0.0));
        }
        return Err(Error::domain(
            "t_of",
            format!("{u} lies on the negative real axis, outside the domain"),
        ));
    }
    let p = g_inv(u)?;
    h_exact(p)
}

/// Inverse of `T` on the strip `D`: the real inverse on the ray `L`,
/// `g . H^{-1}` on the rest.
pub fn t_inv(w: PlanePoint) -> Result<PlanePoint> {
    if !in_d(w) {
        return Err(Error::domain(
            "t_inv",
            format!("{w} lies outside the strip"),
        ));
    }
    match h_inv(w) {
        Ok(p) => g_map(p),
        Err(Error::RealBranch) => {
            let s = t0_inv(w.re.min(constants().t_max))?;
            Ok(PlanePoint::new(s, 0.0))
        }
        Err(e) => Err(e),
    }
}

/// Continuous extension of the half-log map to `(C+ u R) \ {-sqrt2, 0, sqrt2}`.
///
/// Off the real axis this is the principal value
/// `(1/2) Log(1 + 2/(z^2 - 2))`. On `(0, sqrt2)` the continuous boundary
/// value from above is `(1/2) ln(x^2/(2 - x^2)) - i pi/2`; on
/// `(-sqrt2, 0)` its mirror with `+ i pi/2`.
pub fn w_complex(z: PlanePoint) -> Result<PlanePoint> {
    if z.im < 0.0 {
        return Err(Error::domain("w_complex", format!("Im {z} must be >= 0")));
    }
    if z.im == 0.0 {
        let x = z.re;
        if x == 0.0 || x.abs() == SQRT_2 {
            return Err(Error::Pole { op: "w_complex" });
        }
        if x.abs() < SQRT_2 {
            let re = 0.5 * (x * x / (2.0 - x * x)).ln();
            let im = if x > 0.0 { -FRAC_PI_2 } else { FRAC_PI_2 };
            return Ok(PlanePoint::new(re, im));
        }
        return Ok(PlanePoint::new(0.5 * (2.0 / (x * x - 2.0)).ln_1p(), 0.0));
    }
    // 1 + 2/(z^2 - 2) written as z^2/(z^2 - 2): the former cancels
    // catastrophically for z near 0
    let zz = z * z;
    Ok(0.5 * (zz / (zz - 2.0)).ln())
}

/// Inverse of the half-log map restricted to the closed first quadrant:
/// `w1_inv(w) = e^w sqrt(2/(e^{2w} - 1))` with [`branch_sqrt`].
pub fn w1_inv(w: PlanePoint) -> Result<PlanePoint> {
    if w == PlanePoint::new(0.0, 0.0) {
        return Err(Error::Pole { op: "w1_inv" });
    }
    if !in_d(w) {
        return Err(Error::domain(
            "w1_inv",
            format!("{w} lies outside the strip"),
        ));
    }
    if w.re >= W1_LARGE_RE {
        // e^{2w} would overflow; z = sqrt(2) (1 - e^{-2w})^{-1/2}
        let tail = 1.0 - (-2.0 * w).exp();
        return Ok(SQRT_2 * tail.powf(-0.5));
    }
    Ok(w.exp() * branch_sqrt(2.0 / complex_exp_m1(2.0 * w)))
}

/// The reciprocal Cauchy-Stieltjes transform on `(C+ u R) \ {0}`.
///
/// `F(z) = z T^{-1}(W(z))` for `Re z >= 0`, extended by
/// `F(z) = -conj(F(-conj z))` to the left half-plane. The two real branch
/// points carry their limit values: `F = 0` at `±sqrt(2 + gamma0)` and
/// `F = sqrt(2) u0` at `sqrt(2)`.
pub fn f_mu(z: PlanePoint) -> Result<PlanePoint> {
    let c = constants();
    if z.im < 0.0 {
        return Err(Error::domain("f_mu", format!("Im {z} must be >= 0")));
    }
    if z == PlanePoint::new(0.0, 0.0) {
        return Err(Error::domain(
            "f_mu",
            "F has no value at 0; use g_mu there",
        ));
    }
    if z.re < 0.0 {
        let mirrored = f_mu(-z.conj())?;
        return Ok(-mirrored.conj());
    }
    if z.im == 0.0 {
        if z.re == c.edge {
            return Ok(PlanePoint::new(0.0, 0.0));
        }
        if z.re == SQRT_2 {
            return Ok(SQRT_2 * c.u0);
        }
    }
    let w = w_complex(z)?;
    let u = t_inv(w)?;
    Ok(z * u)
}

/// The Cauchy-Stieltjes transform `G = 1/F` on `(C+ u R)`, with the
/// boundary values at `0` and `±sqrt(2)` filled in by their closed forms;
/// at `±sqrt(2 + gamma0)` the value is the point at infinity.
pub fn g_mu(z: PlanePoint) -> Result<PlanePoint> {
    let c = constants();
    if z.im < 0.0 {
        return Err(Error::domain("g_mu", format!("Im {z} must be >= 0")));
    }
    if z == PlanePoint::new(0.0, 0.0) {
        return Ok(PlanePoint::new(0.0, -0.5 * SQRT_2 * c.t_max.exp()));
    }
    if z.im == 0.0 {
        if z.re.abs() == c.edge {
            return Err(Error::Infinite { op: "g_mu" });
        }
        if z.re == SQRT_2 {
            return Ok(PlanePoint::new(SQRT_2 / 4.0, -6f64.sqrt() / 4.0));
        }
        if z.re == -SQRT_2 {
            return Ok(PlanePoint::new(-SQRT_2 / 4.0, -6f64.sqrt() / 4.0));
        }
    }
    if z.re < 0.0 {
        let mirrored = g_mu(-z.conj())?;
        return Ok(-mirrored.conj());
    }
    Ok(f_mu(z)?.inv())
}

/// All values computed along the transform pipeline at one point.
#[derive(Debug, Clone, Copy)]
pub struct TransformValue {
    pub z: PlanePoint,
    /// Image under the half-log map, when the pipeline passes through it.
    pub w: Option<PlanePoint>,
    /// Preimage of `w` under `T`, when the pipeline passes through it.
    pub u: Option<PlanePoint>,
    pub f: PlanePoint,
    pub g: PlanePoint,
}

/// Evaluates `F` and `G` at `z`, keeping the intermediate values when the
/// generic pipeline applies. Errors at `±sqrt(2 + gamma0)` where `G` is
/// infinite.
pub fn transform_point(z: PlanePoint) -> Result<TransformValue> {
    let c = constants();
    if z.im < 0.0 {
        return Err(Error::domain(
            "transform_point",
            format!("Im {z} must be >= 0"),
        ));
    }
    let special = z == PlanePoint::new(0.0, 0.0)
        || (z.im == 0.0 && (z.re.abs() == SQRT_2 || z.re.abs() == c.edge));
    if special || z.re < 0.0 {
        let g = g_mu(z)?;
        let f = if z.im == 0.0 && z.re.abs() == c.edge {
            PlanePoint::new(0.0, 0.0)
        } else {
            g.inv()
        };
        return Ok(TransformValue {
            z,
            w: None,
            u: None,
            f,
            g,
        });
    }
    let w = w_complex(z)?;
    let u = t_inv(w)?;
    let f = z * u;
    Ok(TransformValue {
        z,
        w: Some(w),
        u: Some(u),
        f,
        g: f.inv(),
    })
}
