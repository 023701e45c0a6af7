//! Closed-form geometry of geodesic balls in H^n (curvature -1).
//!
//! Every function here is pure. Ball-side quantities double as oracles for
//! the general-domain code: parallel perimeters `ω sinh^{n-1}(R - t)`, the
//! curvature integrals `V_i = ω sinh^{n-1}R coth^{n-1-i}R`, and the
//! right-hand side of the perimeter-decay bound.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{adaptive_simpson, gamma};

/// Ambient dimension together with the unit-sphere area `ω_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams {
    n: usize,
    omega: f64,
}

impl SpaceParams {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            omega: unit_sphere_area(n)?,
        })
    }

    pub fn plane() -> Self {
        Self { n: 2, omega: 2.0 * PI }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `sinh^{n-1}(r)`, the radial volume density.
    pub fn density(&self, r: f64) -> f64 {
        r.sinh().powi(self.n as i32 - 1)
    }
}

/// Perimeter and volume of a geodesic ball of radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallGeometry {
    pub radius: f64,
    pub perimeter: f64,
    pub volume: f64,
}

impl BallGeometry {
    pub fn new(sp: SpaceParams, radius: f64) -> Result<Self> {
        Ok(Self {
            radius,
            perimeter: ball_perimeter(sp, radius)?,
            volume: ball_volume(sp, radius)?,
        })
    }
}

/// Area of the unit (n-1)-sphere, `2 π^{n/2} / Γ(n/2)`.
pub fn unit_sphere_area(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be at least 2, got {n}")));
    }
    let half = n as f64 / 2.0;
    Ok(2.0 * PI.powf(half) / gamma(half))
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be positive and finite, got {r}")))
    }
}

pub fn ball_perimeter(sp: SpaceParams, radius: f64) -> Result<f64> {
    check_radius(radius)?;
    Ok(sp.omega * sp.density(radius))
}

/// Ball volume. Closed form in the plane, adaptive quadrature otherwise.
pub fn ball_volume(sp: SpaceParams, radius: f64) -> Result<f64> {
    check_radius(radius)?;
    if sp.n == 2 {
        // cosh R - 1 = 2 sinh^2(R/2) avoids cancellation at small R
        return Ok(sp.omega * 2.0 * (0.5 * radius).sinh().powi(2));
    }
    let integral = adaptive_simpson(|s| sp.density(s), 0.0, radius, 1e-10 / sp.omega);
    Ok(sp.omega * integral)
}

pub fn radius_from_perimeter(sp: SpaceParams, perimeter: f64) -> Result<f64> {
    if !(perimeter > 0.0 && perimeter.is_finite()) {
        return Err(Error::domain(format!("perimeter must be positive, got {perimeter}")));
    }
    Ok((perimeter / sp.omega).powf(1.0 / (sp.n as f64 - 1.0)).asinh())
}

/// Perimeter of the inner parallel ball at depth `t`, `ω sinh^{n-1}(R - t)`.
pub fn ball_parallel_perimeter(sp: SpaceParams, radius: f64, t: f64) -> Result<f64> {
    check_radius(radius)?;
    if !(0.0..radius).contains(&t) {
        return Err(Error::domain(format!(
            "offset t = {t} outside [0, R) for R = {radius}"
        )));
    }
    Ok(sp.omega * sp.density(radius - t))
}

/// Curvature integral `V_i = ∫ H_{n-1-i}` over the sphere of radius `R`.
pub fn ball_curvature_integral(sp: SpaceParams, radius: f64, i: usize) -> Result<f64> {
    check_radius(radius)?;
    if i >= sp.n {
        return Err(Error::domain(format!(
            "curvature-integral index {i} out of range 0..={}",
            sp.n - 1
        )));
    }
    let coth = 1.0 / radius.tanh();
    Ok(sp.omega * sp.density(radius) * coth.powi((sp.n - 1 - i) as i32))
}

/// All curvature integrals `V_0..V_{n-1}` of a ball.
pub fn ball_curvature_integrals(sp: SpaceParams, radius: f64) -> Result<Vec<f64>> {
    (0..sp.n).map(|i| ball_curvature_integral(sp, radius, i)).collect()
}

/// Lower bound on `-dP/dt` for inner parallel sets, as a function of the
/// current perimeter. Attained with equality by geodesic balls.
pub fn af_rhs(sp: SpaceParams, perimeter: f64) -> Result<f64> {
    if !(perimeter > 0.0 && perimeter.is_finite()) {
        return Err(Error::domain(format!("perimeter must be positive, got {perimeter}")));
    }
    let n = sp.n as f64;
    let x = perimeter / sp.omega;
    let bracket = x * x + x.powf(2.0 * (n - 2.0) / (n - 1.0));
    Ok((n - 1.0) * sp.omega * bracket.sqrt())
}

/// Outer parallel perimeter from curvature integrals `V_0..V_{n-1}`.
pub fn steiner_outer_perimeter(sp: SpaceParams, v: &[f64], s: f64) -> Result<f64> {
    if v.len() != sp.n {
        return Err(Error::Contract(format!(
            "expected {} curvature integrals, got {}",
            sp.n,
            v.len()
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::domain(format!("outer offset must be non-negative, got {s}")));
    }
    let m = sp.n - 1;
    let (c, sh) = (s.cosh(), s.sinh());
    let mut binom = 1.0;
    let mut total = 0.0;
    for (i, vi) in v.iter().enumerate() {
        total += binom * c.powi(i as i32) * sh.powi((m - i) as i32) * vi;
        binom = binom * (m - i) as f64 / (i + 1) as f64;
    }
    Ok(total)
}
