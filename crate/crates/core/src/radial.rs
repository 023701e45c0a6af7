//! The radial Robin eigenproblem on a geodesic ball of H^n:
//!
//! ```text
//! ψ'' + (n-1) coth(r) ψ' + λ ψ = 0,   ψ'(0) = 0,   ψ'(R) + β ψ(R) = 0
//! ```
//!
//! Two independent routes are provided. The weak route discretizes the
//! weighted Rayleigh quotient with linear elements and takes the smallest
//! eigenvalue of the resulting tridiagonal pencil. The shooting route
//! integrates the ODE from a series start near the origin and finds the
//! smallest root of the boundary residual.

use crate::error::{Error, Result};
use crate::hypgeo::{ball_perimeter, ball_volume, SpaceParams};
use crate::linalg::{smallest_eigenpair, SymBand};
use crate::ode::{integrate, Tolerances};
use crate::special::{simpson_nonuniform, GAUSS3_NODES, GAUSS3_WEIGHTS};

/// Default number of radial elements.
pub const DEFAULT_ELEMENTS: usize = 512;
/// Ratio between the outermost and innermost element length.
pub const GRADING_RATIO: f64 = 0.9;
/// Launch radius of the shooting integration.
pub const SHOOT_START: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub sp: SpaceParams,
    pub radius: f64,
    pub beta: f64,
}

impl RadialProblem {
    pub fn new(sp: SpaceParams, radius: f64, beta: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("ball radius must be positive, got {radius}")));
        }
        if !beta.is_finite() {
            return Err(Error::domain("Robin parameter must be finite"));
        }
        Ok(Self { sp, radius, beta })
    }
}

/// First eigenpair of a ball, eigenfunction normalized by `ψ(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenpair {
    pub lambda1: f64,
    pub grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub v_min: f64,
    pub v_max: f64,
    /// `ω ∫_0^R ψ² sinh^{n-1}(r) dr`
    pub l2_sq: f64,
    /// `|ψ'(R) + β ψ(R)|` with `ψ'(R)` from a one-sided quadratic fit.
    pub boundary_residual: f64,
    pub beta: f64,
}

impl RadialEigenpair {
    /// The same eigenpair with the eigenfunction multiplied by `c > 0`.
    pub fn rescaled(&self, c: f64) -> Self {
        Self {
            psi: self.psi.iter().map(|v| v * c).collect(),
            v_min: self.v_min * c,
            v_max: self.v_max * c,
            l2_sq: self.l2_sq * c * c,
            boundary_residual: self.boundary_residual * c,
            ..self.clone()
        }
    }

    /// `v_m` for β < 0, `v_M` for β > 0.
    pub fn extreme_value(&self) -> f64 {
        if self.beta < 0.0 {
            self.v_min
        } else {
            self.v_max
        }
    }
}

/// `β P(B_R) / |B_R|`, the Rayleigh quotient of the constant function.
pub fn rayleigh_constant_bound(sp: SpaceParams, radius: f64, beta: f64) -> Result<f64> {
    let p = ball_perimeter(sp, radius)?;
    let v = ball_volume(sp, radius)?;
    Ok(beta * p / v)
}

/// Graded grid on `[0, R]`: element lengths shrink linearly toward `r = R`
/// so the last element is `GRADING_RATIO` times the first.
pub fn graded_grid(radius: f64, elements: usize) -> Vec<f64> {
    let n = elements;
    let denom = (n.max(2) - 1) as f64;
    let lengths: Vec<f64> = (0..n)
        .map(|i| 1.0 - (1.0 - GRADING_RATIO) * i as f64 / denom)
        .collect();
    let total: f64 = lengths.iter().sum();
    let mut grid = Vec::with_capacity(n + 1);
    let mut r = 0.0;
    grid.push(0.0);
    for h in &lengths[..n - 1] {
        r += h / total * radius;
        grid.push(r);
    }
    grid.push(radius);
    grid
}

/// Splits every element of `grid` in two.
pub fn bisect_grid(grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * grid.len() - 1);
    for w in grid.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.push(*grid.last().unwrap());
    out
}

/// Stiffness-plus-boundary and mass matrices of the radial pencil (the
/// common factor `ω` is dropped).
fn assemble_radial(prob: &RadialProblem, grid: &[f64]) -> (SymBand, SymBand) {
    let n = grid.len();
    let mut a = SymBand::zeros(n, 1);
    let mut m = SymBand::zeros(n, 1);
    for e in 0..n - 1 {
        let (r0, r1) = (grid[e], grid[e + 1]);
        let h = r1 - r0;
        let mut w_int = 0.0;
        let mut m00 = 0.0;
        let mut m01 = 0.0;
        let mut m11 = 0.0;
        for (xi, wq) in GAUSS3_NODES.iter().zip(GAUSS3_WEIGHTS) {
            let w = prob.sp.density(r0 + xi * h) * wq * h;
            w_int += w;
            m00 += (1.0 - xi) * (1.0 - xi) * w;
            m01 += (1.0 - xi) * xi * w;
            m11 += xi * xi * w;
        }
        let k = w_int / (h * h);
        a.add(e, e, k);
        a.add(e + 1, e + 1, k);
        a.add(e + 1, e, -k);
        m.add(e, e, m00);
        m.add(e + 1, e + 1, m11);
        m.add(e + 1, e, m01);
    }
    a.add(n - 1, n - 1, prob.beta * prob.sp.density(prob.radius));
    (a, m)
}

fn solve_on_grid(prob: &RadialProblem, grid: Vec<f64>) -> Result<RadialEigenpair> {
    let (a, m) = assemble_radial(prob, &grid);
    let ones = vec![1.0; grid.len()];
    let upper = a.form(&ones, &ones) / m.form(&ones, &ones);
    let eig = smallest_eigenpair(&a, &m, upper, &ones)?;

    let origin = eig.vector[0];
    if origin == 0.0 || !origin.is_finite() {
        return Err(Error::Solver("eigenvector vanishes at the origin".into()));
    }
    let psi: Vec<f64> = eig.vector.iter().map(|v| v / origin).collect();
    if let Some(i) = psi.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Solver(format!(
            "first eigenvector changes sign at node {i} (r = {})",
            grid[i]
        )));
    }

    let k = psi.len() - 1;
    let (h1, h2) = (grid[k] - grid[k - 1], grid[k - 1] - grid[k - 2]);
    // derivative at the last node of the quadratic through the last three nodes
    let dpsi = psi[k] * (2.0 * h1 + h2) / (h1 * (h1 + h2)) - psi[k - 1] * (h1 + h2) / (h1 * h2)
        + psi[k - 2] * h1 / (h2 * (h1 + h2));
    let boundary_residual = (dpsi + prob.beta * psi[k]).abs();

    let mut pair = RadialEigenpair {
        lambda1: eig.value,
        grid,
        psi,
        v_min: f64::NAN,
        v_max: f64::NAN,
        l2_sq: f64::NAN,
        boundary_residual,
        beta: prob.beta,
    };
    let (v_min, v_max, l2_sq) = eigen_quantities(&pair, prob.sp)?;
    pair.v_min = v_min;
    pair.v_max = v_max;
    pair.l2_sq = l2_sq;
    Ok(pair)
}

/// Weak-form (finite element) solve with `elements` graded linear elements.
pub fn solve_radial_weak(prob: &RadialProblem, elements: usize) -> Result<RadialEigenpair> {
    if elements < 16 || !elements.is_multiple_of(2) {
        return Err(Error::Resolution(format!(
            "radial element count must be even and at least 16, got {elements}"
        )));
    }
    solve_on_grid(prob, graded_grid(prob.radius, elements))
}

/// Weak-form solve followed by one uniform refinement; the eigenvalue is
/// Richardson-extrapolated from the two levels (second order), the
/// eigenfunction is taken from the finer level.
pub fn solve_radial_refined(prob: &RadialProblem, elements: usize) -> Result<RadialEigenpair> {
    let coarse = solve_radial_weak(prob, elements)?;
    let mut fine = solve_on_grid(prob, bisect_grid(&coarse.grid))?;
    fine.lambda1 = (4.0 * fine.lambda1 - coarse.lambda1) / 3.0;
    Ok(fine)
}

/// Extrema and weighted L² norm of the eigenfunction. The extrema are read
/// from the profile endpoints after checking the profile is monotone in
/// the direction fixed by the sign of β.
pub fn eigen_quantities(pair: &RadialEigenpair, sp: SpaceParams) -> Result<(f64, f64, f64)> {
    let psi = &pair.psi;
    let first = psi[0];
    let last = *psi.last().unwrap();
    if pair.beta != 0.0 {
        let increasing = pair.beta < 0.0;
        for i in 1..psi.len() {
            let step = psi[i] - psi[i - 1];
            let ok = if increasing { step > 0.0 } else { step < 0.0 };
            if !ok {
                return Err(Error::NonMonotone {
                    index: i,
                    beta: pair.beta,
                });
            }
        }
    }
    let (v_min, v_max) = if pair.beta < 0.0 {
        (first, last)
    } else if pair.beta > 0.0 {
        (last, first)
    } else {
        let lo = psi.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = psi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let y: Vec<f64> = pair
        .grid
        .iter()
        .zip(psi)
        .map(|(r, v)| v * v * sp.density(*r))
        .collect();
    let l2_sq = sp.omega() * simpson_nonuniform(&pair.grid, &y);
    Ok((v_min, v_max, l2_sq))
}

/// Result of one shooting integration.
#[derive(Debug, Clone, Copy)]
struct Shot {
    /// `ψ'(R) + β ψ(R)`
    residual: f64,
    psi_end: f64,
    /// ψ changed sign somewhere in `(0, R]`
    has_node: bool,
}

impl Shot {
    /// λ lies strictly below the first eigenvalue.
    fn below(&self) -> bool {
        !self.has_node && self.residual > 0.0
    }
}

fn shoot(prob: &RadialProblem, lambda: f64) -> Result<Shot> {
    let n = prob.sp.n() as f64;
    let r0 = SHOOT_START;
    let a = -lambda / (2.0 * n);
    let c4 = lambda * (lambda + 2.0 * (n - 1.0) / 3.0) / (8.0 * n * (n + 2.0));
    let y0 = [
        1.0 + a * r0 * r0 + c4 * r0.powi(4),
        2.0 * a * r0 + 4.0 * c4 * r0.powi(3),
    ];
    let mut has_node = false;
    let (_, y) = integrate(
        |r, y: &[f64; 2]| [y[1], -(n - 1.0) / r.tanh() * y[1] - lambda * y[0]],
        r0,
        y0,
        prob.radius,
        Tolerances::default(),
        |_, y| {
            if y[0] <= 0.0 {
                has_node = true;
            }
            !has_node
        },
    )?;
    Ok(Shot {
        residual: y[1] + prob.beta * y[0],
        psi_end: y[0],
        has_node,
    })
}

/// Interval bracketing the first eigenvalue, found by doubling away from
/// the constant-function bound.
pub fn bracket_lambda1(prob: &RadialProblem) -> Result<(f64, f64)> {
    if prob.beta == 0.0 {
        return Err(Error::domain("beta = 0 has the known eigenvalue 0; no bracket needed"));
    }
    let bound = rayleigh_constant_bound(prob.sp, prob.radius, prob.beta)?;
    if prob.beta < 0.0 {
        let mut lo = bound;
        for _ in 0..60 {
            if shoot(prob, lo)?.below() {
                return Ok((lo, 0.0));
            }
            lo *= 2.0;
        }
        Err(Error::BracketSearch { doublings: 60, last: lo })
    } else {
        let mut hi = bound;
        for _ in 0..60 {
            if !shoot(prob, hi)?.below() {
                return Ok((0.0, hi));
            }
            hi *= 2.0;
        }
        Err(Error::BracketSearch { doublings: 60, last: hi })
    }
}

/// Smallest eigenvalue in `bracket` by shooting: bisection on the Sturm
/// predicate "no node and positive residual", then Illinois refinement on
/// the boundary residual.
pub fn solve_radial_shooting(prob: &RadialProblem, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::Bracket { lo, hi });
    }
    let mut s_lo = shoot(prob, lo)?;
    let mut s_hi = shoot(prob, hi)?;
    if !s_lo.below() || s_hi.below() {
        return Err(Error::Bracket { lo, hi });
    }
    let tol = |l: f64| 1e-9 * l.abs().max(1.0);
    while hi - lo > 1e-6 * lo.abs().max(hi.abs()).max(1.0) || s_hi.has_node {
        let mid = 0.5 * (lo + hi);
        let s = shoot(prob, mid)?;
        if s.below() {
            lo = mid;
            s_lo = s;
        } else {
            hi = mid;
            s_hi = s;
        }
    }

    let f_scale = |s: &Shot| 1e-9 * s.psi_end.abs().max(1.0);
    let (mut f_lo, mut f_hi) = (s_lo.residual, s_hi.residual);
    let mut side = 0i8;
    for _ in 0..200 {
        let x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let s = shoot(prob, x)?;
        if s.residual.abs() <= f_scale(&s) || hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            return Ok(x);
        }
        if s.residual > 0.0 {
            lo = x;
            f_lo = s.residual;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            f_hi = s.residual;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
        if hi - lo <= tol(hi) * 1e-6 {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Solver(format!("shooting refinement stalled in [{lo}, {hi}]")))
}

/// First eigenvalue by shooting, bracketing automatically.
pub fn shoot_lambda1(prob: &RadialProblem) -> Result<f64> {
    let bracket = if prob.beta == 0.0 {
        (-1.0, 1.0)
    } else {
        bracket_lambda1(prob)?
    };
    solve_radial_shooting(prob, bracket)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob(n: usize, r: f64, beta: f64) -> RadialProblem {
        RadialProblem::new(SpaceParams::new(n).unwrap(), r, beta).unwrap()
    }

    #[test]
    fn grid_is_graded_and_increasing() {
        let g = graded_grid(2.0, 64);
        assert_eq!(g.len(), 65);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[64], 2.0);
        let first = g[1] - g[0];
        let last = g[64] - g[63];
        assert!((last / first - GRADING_RATIO).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn neumann_case_is_constant() {
        let pair = solve_radial_weak(&prob(2, 1.0, 0.0), 64).unwrap();
        assert!(pair.lambda1.abs() < 1e-9);
        assert!(pair.psi.iter().all(|v| (v - 1.0).abs() < 1e-8));
        assert!((pair.v_min - 1.0).abs() < 1e-8 && (pair.v_max - 1.0).abs() < 1e-8);
        let vol = ball_volume(SpaceParams::plane(), 1.0).unwrap();
        assert!((pair.l2_sq - vol).abs() < 1e-6 * vol);
    }

    #[test]
    fn rayleigh_bound_values() {
        let sp2 = SpaceParams::plane();
        let expected = -(1f64.sinh()) / (1f64.cosh() - 1.0);
        assert!((rayleigh_constant_bound(sp2, 1.0, -1.0).unwrap() - expected).abs() < 1e-12);
        assert!((expected + 2.163_953).abs() < 1e-6);
        assert_eq!(rayleigh_constant_bound(sp2, 1.0, 0.0).unwrap(), 0.0);
        let sp3 = SpaceParams::new(3).unwrap();
        let got = rayleigh_constant_bound(sp3, 1.0, -1.0).unwrap();
        let closed = -4.0 * 1f64.sinh().powi(2) / (2f64.sinh() - 2.0);
        assert!((got - closed).abs() < 1e-9);
        assert!((got + 3.395_738).abs() < 1e-5);
    }

    #[test]
    fn weak_respects_bound_and_sign() {
        let bound = rayleigh_constant_bound(SpaceParams::plane(), 1.0, -1.0).unwrap();
        let neg = solve_radial_weak(&prob(2, 1.0, -1.0), DEFAULT_ELEMENTS).unwrap();
        assert!(neg.lambda1 < 0.0 && neg.lambda1 <= bound);
        assert_eq!(neg.v_min, 1.0);
        let pos = solve_radial_weak(&prob(2, 1.0, 1.0), DEFAULT_ELEMENTS).unwrap();
        assert!(pos.lambda1 > 0.0 && pos.lambda1 <= -bound);
        assert_eq!(pos.v_max, 1.0);
    }

    #[test]
    fn element_count_validated() {
        assert!(solve_radial_weak(&prob(2, 1.0, 1.0), 8).is_err());
        assert!(solve_radial_weak(&prob(2, 1.0, 1.0), 33).is_err());
    }

    #[test]
    fn bracket_behaviour() {
        assert!(bracket_lambda1(&prob(2, 1.0, 0.0)).is_err());
        let p = prob(2, 1.0, -1.0);
        let (lo, hi) = bracket_lambda1(&p).unwrap();
        let weak = solve_radial_weak(&p, DEFAULT_ELEMENTS).unwrap().lambda1;
        assert!(lo < weak && weak < hi);
        let (lo, hi) = bracket_lambda1(&prob(2, 2.0, 0.5)).unwrap();
        assert!(lo >= 0.0 && hi > 0.0);
    }

    #[test]
    fn shooting_rejects_bad_bracket() {
        let p = prob(2, 1.0, -1.0);
        assert!(matches!(solve_radial_shooting(&p, (-0.5, 0.0)), Err(Error::Bracket { .. })));
    }

    #[test]
    fn shooting_neumann_is_zero() {
        let l = shoot_lambda1(&prob(2, 1.0, 0.0)).unwrap();
        assert!(l.abs() < 1e-8, "{l}");
    }

    #[test]
    fn rescaling_scales_quantities() {
        let pair = solve_radial_weak(&prob(2, 1.0, -1.0), 64).unwrap();
        let big = pair.rescaled(10.0);
        assert!((big.v_min - 10.0 * pair.v_min).abs() < 1e-12);
        assert!((big.l2_sq - 100.0 * pair.l2_sq).abs() < 1e-9 * big.l2_sq);
    }
}
