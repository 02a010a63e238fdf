//! The density of the measure on `(-edge, edge)`, `edge = sqrt(2 + gamma0)`.
//!
//! Two evaluation routes are provided and cross-checked: the boundary-value
//! formula `rho(x) = Im F(x) / (pi |F(x)|^2)` and a parametric sweep along
//! the two boundary curves of the parameter trapezoid. A quadrature oracle
//! integrates `x^k rho(x)` against the exact moment recursion, and a
//! Stieltjes inversion probe recovers the density from inside the upper
//! half-plane.

use std::f64::consts::{PI, SQRT_2};

use crate::geometry::ParamPoint;
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::real::constants;
use crate::transform::{g_mu, h_exact, t_inv, w1_inv, w_complex};
use crate::{Error, PlanePoint, Result};

/// Within this distance of `sqrt(2)` the closed-form value is returned:
/// the half-log image runs off to infinity there and bisection brackets
/// would grow without bound.
const SQRT2_WINDOW: f64 = 1e-10;

/// How the sample was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Boundary-value pipeline through `t_inv(w_complex(x))`.
    Direct,
    /// Parametric sweep through `H` and the inverse half-log map.
    Parametric,
    /// Closed-form value at a special point, or zero outside the support.
    Special,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Parametric => "parametric",
            Method::Special => "special",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One density sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub x: f64,
    pub rho: f64,
    pub method: Method,
}

/// The support and its distinguished points.
#[derive(Debug, Clone, Copy)]
pub struct SupportInfo {
    pub edge: f64,
    /// `-edge, -sqrt(2), 0, sqrt(2), edge`.
    pub special_points: [f64; 5],
}

pub fn support_info() -> SupportInfo {
    let edge = constants().edge;
    SupportInfo {
        edge,
        special_points: [-edge, -SQRT_2, 0.0, SQRT_2, edge],
    }
}

/// `rho(sqrt(2)) = sqrt(6) / (4 pi)`.
pub fn rho_at_sqrt2() -> f64 {
    6f64.sqrt() / (4.0 * PI)
}

/// `rho(0) = (sqrt(2) / (2 pi)) e^{sqrt(3) pi / 9}`.
pub fn rho_at_zero() -> f64 {
    SQRT_2 / (2.0 * PI) * constants().t_max.exp()
}

/// Density by the boundary-value formula; a total, even function of `x`.
pub fn rho_direct(x: f64) -> DensitySample {
    let ax = x.abs();
    let c = constants();
    if ax >= c.edge {
        return DensitySample {
            x,
            rho: 0.0,
            method: Method::Special,
        };
    }
    if ax == 0.0 {
        return DensitySample {
            x,
            rho: rho_at_zero(),
            method: Method::Special,
        };
    }
    if (ax - SQRT_2).abs() <= SQRT2_WINDOW {
        return DensitySample {
            x,
            rho: rho_at_sqrt2(),
            method: Method::Special,
        };
    }
    let w = w_complex(PlanePoint::new(ax, 0.0)).expect("0 < |x| < edge avoids the poles");
    let u = t_inv(w).expect("boundary values of W stay inside the strip");
    let f = ax * u;
    DensitySample {
        x,
        rho: f.im / (PI * f.norm_sqr()),
        method: Method::Direct,
    }
}

/// Which boundary curve of the trapezoid the parametric sweep follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParametricBranch {
    /// `eta = -pi`, `xi < pi`; sweeps `x` over `(0, sqrt(2))`.
    Inner,
    /// `eta = 0`, `xi < 0`; sweeps `x` over `(sqrt(2), edge)`.
    Outer,
}

/// Density by the parametric recipe: for each `xi`, `w = H(eta, xi)`,
/// `x = w1_inv(w)` (real up to roundoff), `u = g(eta, xi)` and
/// `rho = Im(x u) / (pi |x u|^2)`.
pub fn rho_parametric(branch: ParametricBranch, xi_grid: &[f64]) -> Result<Vec<DensitySample>> {
    let eta = match branch {
        ParametricBranch::Inner => -PI,
        ParametricBranch::Outer => 0.0,
    };
    xi_grid
        .iter()
        .map(|&xi| {
            if xi >= -eta {
                return Err(Error::domain(
                    "rho_parametric",
                    format!("xi = {xi} must be below {}", -eta),
                ));
            }
            let p = ParamPoint::new(eta, xi);
            let w = h_exact(p)?;
            let z = w1_inv(w)?;
            if z.im.abs() > 1e-8 * (1.0 + z.re.abs()) {
                return Err(Error::Inconsistent {
                    op: "rho_parametric",
                    msg: format!("imaginary leak {} at xi = {xi}", z.im),
                });
            }
            let x = z.re;
            let u = crate::geometry::g_map(p)?;
            let f = x * u;
            Ok(DensitySample {
                x,
                rho: f.im / (PI * f.norm_sqr()),
                method: Method::Parametric,
            })
        })
        .collect()
}

/// `2 int_0^edge x^k rho(x) dx` by composite Gauss-Legendre after the
/// substitution `x = edge sin(theta)`, which removes the inverse-square-root
/// endpoint singularity; the panel chain splits at `x = sqrt(2)`.
pub fn quad_moment(k: u32, npanels: usize) -> Result<f64> {
    quad_moment_with(k, npanels, 32)
}

pub fn quad_moment_with(k: u32, npanels: usize, nnodes: usize) -> Result<f64> {
    if !k.is_multiple_of(2) || k > 12 {
        return Err(Error::domain(
            "quad_moment",
            format!("order {k} must be even and at most 12"),
        ));
    }
    if npanels < 2 || nnodes < 2 {
        return Err(Error::domain(
            "quad_moment",
            "need at least 2 panels and 2 nodes",
        ));
    }
    let edge = constants().edge;
    let theta_star = (SQRT_2 / edge).asin();
    let rule = GaussLegendre::new(nnodes);
    let inner_panels = npanels / 2;
    let outer_panels = npanels - inner_panels;
    let integrand = |theta: f64| {
        let x = edge * theta.sin();
        2.0 * x.powi(k as i32) * rho_direct(x).rho * edge * theta.cos()
    };
    let parts = [
        rule.integrate_panels(0.0, theta_star, inner_panels, integrand),
        rule.integrate_panels(theta_star, 0.5 * PI, outer_panels, integrand),
    ];
    Ok(pairwise_sum(&parts))
}

/// `-(1/pi) Im G(x + i eps)`; converges to the density as `eps -> 0`.
pub fn stieltjes_check(x: f64, eps: f64) -> Result<f64> {
    let c = constants();
    if !(x.abs() < c.edge) {
        return Err(Error::domain(
            "stieltjes_check",
            format!("|{x}| must be below the support edge"),
        ));
    }
    if !(eps > 0.0) {
        return Err(Error::domain("stieltjes_check", "eps must be positive"));
    }
    Ok(-g_mu(PlanePoint::new(x, eps))?.im / PI)
}

/// `rho(edge - delta) sqrt(edge^2 - (edge - delta)^2)` for each `delta`;
/// stabilizes as `delta -> 0` because the density diverges like an inverse
/// square root at the support edge.
pub fn edge_ratio(deltas: &[f64]) -> Vec<f64> {
    let edge = constants().edge;
    deltas
        .iter()
        .map(|&d| {
            let x = edge - d;
            rho_direct(x).rho * (edge * edge - x * x).sqrt()
        })
        .collect()
}
