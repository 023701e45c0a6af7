//! Star-shaped domains in the hyperbolic plane, described in geodesic polar
//! coordinates `r = r(θ)` about a center, with spectrally accurate geometry
//! and the normal-offset (parallel curve) flow.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub const DEFAULT_ANGLES: usize = 512;
/// Relative Gauss–Bonnet residual above which a curve is reported as under-resolved.
pub const GAUSS_BONNET_TOL: f64 = 1e-6;
/// Slack on the h-convexity test `κ ≥ 1`.
pub const HCONVEX_SLACK: f64 = 1e-9;
/// Safety gap below the focal horizon of the inner flow.
pub const FOCAL_EPS: f64 = 1e-6;

/// A point of H² in the hyperboloid model, `⟨x,x⟩ = -1`, `x0 ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperboloidPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl HyperboloidPoint {
    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        let p = Self { x0, x1, x2 };
        let norm = p.minkowski(&p);
        if (norm + 1.0).abs() > 1e-10 * x0.abs().max(1.0).powi(2) || x0 < 1.0 {
            return Err(Error::InvalidPoint(-norm));
        }
        Ok(p)
    }

    /// Point at geodesic distance `r` from the origin in direction `theta`.
    pub fn from_polar(r: f64, theta: f64) -> Self {
        let s = r.sinh();
        Self {
            x0: r.cosh(),
            x1: s * theta.cos(),
            x2: s * theta.sin(),
        }
    }

    /// Point from Poincaré-disk coordinates.
    pub fn from_disk(u: f64, v: f64) -> Self {
        let q = u * u + v * v;
        let d = 1.0 - q;
        Self {
            x0: (1.0 + q) / d,
            x1: 2.0 * u / d,
            x2: 2.0 * v / d,
        }
    }

    /// Point from Klein-disk coordinates (geodesics are straight chords).
    pub fn from_klein(u: f64, v: f64) -> Self {
        let g = 1.0 / (1.0 - u * u - v * v).sqrt();
        Self {
            x0: g,
            x1: g * u,
            x2: g * v,
        }
    }

    pub fn to_klein(&self) -> (f64, f64) {
        (self.x1 / self.x0, self.x2 / self.x0)
    }

    /// Lorentzian inner product `-x0 y0 + x1 y1 + x2 y2`.
    pub fn minkowski(&self, other: &Self) -> f64 {
        -self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2
    }
}

/// `arccosh(-⟨p,q⟩)`, evaluated as `2 asinh(‖p - q‖/2)` which keeps full
/// precision for nearby points.
pub fn hyperboloid_distance(p: &HyperboloidPoint, q: &HyperboloidPoint) -> Result<f64> {
    let c = -p.minkowski(q);
    if c < 1.0 - 1e-9 {
        return Err(Error::InvalidPoint(c));
    }
    let d = HyperboloidPoint {
        x0: p.x0 - q.x0,
        x1: p.x1 - q.x1,
        x2: p.x2 - q.x2,
    };
    let chord = d.minkowski(&d).max(0.0).sqrt();
    Ok(2.0 * (0.5 * chord).asinh())
}

/// Closed curve `r = r(θ)` sampled on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCurve {
    theta: Vec<f64>,
    r: Vec<f64>,
}

impl RadialCurve {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        let m = r.len();
        if m < 128 || !m.is_multiple_of(2) {
            return Err(Error::Resolution(format!(
                "angle count must be even and at least 128, got {m}"
            )));
        }
        let theta: Vec<f64> = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
        if let Some((j, &bad)) = r.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidFamily {
                theta: theta[j],
                radius: bad,
            });
        }
        Ok(Self { theta, r })
    }

    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let r = (0..m).map(|j| f(2.0 * PI * j as f64 / m as f64)).collect();
        Self::new(r)
    }

    pub fn circle(radius: f64, m: usize) -> Result<Self> {
        Self::from_fn(m, |_| radius)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// First and second θ-derivatives by trigonometric differentiation.
    pub fn derivatives(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.len();
        let (fwd, inv) = plans(m);
        let mut spec: Vec<Complex<f64>> = self.r.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fwd.process(&mut spec);
        let mut d1 = spec.clone();
        let mut d2 = spec;
        for k in 0..m {
            let w = wavenumber(k, m);
            d1[k] = if k == m / 2 {
                Complex::new(0.0, 0.0)
            } else {
                d1[k] * Complex::new(0.0, w)
            };
            d2[k] *= -w * w;
        }
        inv.process(&mut d1);
        inv.process(&mut d2);
        let s = 1.0 / m as f64;
        (
            d1.iter().map(|c| c.re * s).collect(),
            d2.iter().map(|c| c.re * s).collect(),
        )
    }

    /// Trigonometric interpolant resampled on `count ≥ M` uniform angles.
    pub fn resample(&self, count: usize) -> Vec<f64> {
        let m = self.len();
        if count == m {
            return self.r.clone();
        }
        assert!(count > m, "resampling only refines");
        let (fwd, _) = plans(m);
        let mut spec: Vec<Complex<f64>> = self.r.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fwd.process(&mut spec);
        let mut padded = vec![Complex::new(0.0, 0.0); count];
        let half = m / 2;
        for k in 0..half {
            padded[k] = spec[k];
        }
        for k in half + 1..m {
            padded[count - (m - k)] = spec[k];
        }
        // split the Nyquist coefficient symmetrically
        padded[half] = spec[half] * 0.5;
        padded[count - half] = spec[half] * 0.5;
        let inv = FftPlanner::new().plan_fft_inverse(count);
        inv.process(&mut padded);
        padded.iter().map(|c| c.re / m as f64).collect()
    }

    /// Trigonometric interpolant evaluated on any number of uniform angles.
    pub fn evaluate(&self, count: usize) -> Vec<f64> {
        let m = self.len();
        if count == m {
            return self.r.clone();
        }
        if count > m {
            return self.resample(count);
        }
        let (fwd, _) = plans(m);
        let mut spec: Vec<Complex<f64>> = self.r.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fwd.process(&mut spec);
        let half = m / 2;
        (0..count)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / count as f64;
                let mut sum = spec[0].re;
                for (k, c) in spec.iter().enumerate().take(half).skip(1) {
                    let (s, co) = (k as f64 * th).sin_cos();
                    sum += 2.0 * (c.re * co - c.im * s);
                }
                sum += spec[half].re * (half as f64 * th).cos();
                sum / m as f64
            })
            .collect()
    }
}

fn plans(m: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(m), planner.plan_fft_inverse(m))
}

fn wavenumber(k: usize, m: usize) -> f64 {
    if k <= m / 2 {
        k as f64
    } else {
        k as f64 - m as f64
    }
}

/// One Fourier mode `ε cos(kθ + φ)` of a radial perturbation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Mode {
    pub k: u32,
    pub amplitude: f64,
    pub phase: f64,
}

impl Mode {
    pub fn new(k: u32, amplitude: f64, phase: f64) -> Self {
        Self { k, amplitude, phase }
    }
}

/// `r(θ) = r0 + Σ ε_k cos(kθ + φ_k)` on `m` angles.
pub fn make_family(r0: f64, modes: &[Mode], m: usize) -> Result<RadialCurve> {
    if !(r0 > 0.0) {
        return Err(Error::domain(format!("base radius must be positive, got {r0}")));
    }
    let eval = |th: f64| {
        r0 + modes
            .iter()
            .map(|md| md.amplitude * (md.k as f64 * th + md.phase).cos())
            .sum::<f64>()
    };
    // check on a fine grid so a dip between samples is still caught
    let fine = 8 * m.max(1);
    for j in 0..fine {
        let th = 2.0 * PI * j as f64 / fine as f64;
        let v = eval(th);
        if !(v > 0.0) {
            return Err(Error::InvalidFamily { theta: th, radius: v });
        }
    }
    RadialCurve::from_fn(m, eval)
}

/// Perimeter, area and geodesic curvature of a radial curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGeometry {
    pub perimeter: f64,
    pub area: f64,
    pub kappa: Vec<f64>,
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// `∫ κ ds`
    pub total_curvature: f64,
    /// Arc-length density `ds/dθ` at the samples.
    pub speed: Vec<f64>,
    pub is_hconvex: bool,
}

impl CurveGeometry {
    fn dtheta(&self) -> f64 {
        2.0 * PI / self.speed.len() as f64
    }

    /// `|∫κ ds - (2π + A)| / (2π + A)`
    pub fn gauss_bonnet_residual(&self) -> f64 {
        let target = 2.0 * PI + self.area;
        (self.total_curvature - target).abs() / target
    }

    /// `∫ g(κ) ds` by the periodic trapezoid rule.
    pub fn integrate_along(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.kappa
            .iter()
            .zip(&self.speed)
            .map(|(k, s)| g(*k) * s)
            .sum::<f64>()
            * self.dtheta()
    }
}

pub fn curve_geometry(c: &RadialCurve) -> Result<CurveGeometry> {
    let (d1, d2) = c.derivatives();
    let m = c.len();
    let dth = 2.0 * PI / m as f64;
    let mut kappa = Vec::with_capacity(m);
    let mut speed = Vec::with_capacity(m);
    let mut area = 0.0;
    for j in 0..m {
        let r = c.r[j];
        let (f, fp) = (r.sinh(), r.cosh());
        let (rp, rpp) = (d1[j], d2[j]);
        let q = rp * rp + f * f;
        let sp = q.sqrt();
        speed.push(sp);
        kappa.push((-f * rpp + 2.0 * fp * rp * rp + f * f * fp) / (q * sp));
        area += 2.0 * (0.5 * r).sinh().powi(2);
    }
    area *= dth;
    let perimeter = speed.iter().sum::<f64>() * dth;
    let total_curvature = kappa.iter().zip(&speed).map(|(k, s)| k * s).sum::<f64>() * dth;
    let kappa_min = kappa.iter().copied().fold(f64::INFINITY, f64::min);
    let kappa_max = kappa.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g = CurveGeometry {
        perimeter,
        area,
        kappa,
        kappa_min,
        kappa_max,
        total_curvature,
        speed,
        is_hconvex: kappa_min >= 1.0 - HCONVEX_SLACK,
    };
    let residual = g.gauss_bonnet_residual();
    if !(residual <= GAUSS_BONNET_TOL) {
        return Err(Error::RefinementNeeded {
            residual,
            tolerance: GAUSS_BONNET_TOL,
        });
    }
    Ok(g)
}

/// h-convexity test; the margin is `κ_min - 1`.
pub fn check_hconvex(g: &CurveGeometry) -> (bool, f64) {
    (g.kappa_min >= 1.0 - HCONVEX_SLACK, g.kappa_min - 1.0)
}

/// Curvature of the parallel curve at signed inward offset `t`
/// (`t < 0` offsets outward): `(κ - tanh t) / (1 - κ tanh t)`.
pub fn parallel_curvature(kappa: f64, t: f64) -> Result<f64> {
    let th = t.tanh();
    let denominator = 1.0 - kappa * th;
    if !(denominator > 0.0) {
        return Err(Error::Focal {
            kappa,
            t,
            denominator,
        });
    }
    Ok((kappa - th) / denominator)
}

/// Curvatures of the inner parallel curve at depth `t`.
pub fn flow_curvatures(g: &CurveGeometry, t: f64) -> Result<Vec<f64>> {
    g.kappa.iter().map(|&k| parallel_curvature(k, t)).collect()
}

/// Largest inward offset before some point of the boundary reaches its
/// focal point, `min_θ artanh(1/κ)`.
pub fn focal_horizon(g: &CurveGeometry) -> f64 {
    if g.kappa_max <= 1.0 {
        f64::INFINITY
    } else {
        (1.0 / g.kappa_max).atanh()
    }
}

/// Perimeters of inner parallel sets along a grid of depths.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelProfile {
    pub t: Vec<f64>,
    pub p_inner: Vec<f64>,
    pub t_valid: f64,
}

/// `P(Ω_t) = ∫ (cosh t - κ sinh t) ds` for every `t` in `t_grid` up to the
/// focal horizon; later entries are dropped.
pub fn inner_parallel_profile(c: &RadialCurve, t_grid: &[f64]) -> Result<ParallelProfile> {
    let g = curve_geometry(c)?;
    profile_from_geometry(&g, t_grid)
}

pub fn profile_from_geometry(g: &CurveGeometry, t_grid: &[f64]) -> Result<ParallelProfile> {
    if !g.is_hconvex {
        return Err(Error::NotHConvex {
            kappa_min: g.kappa_min,
        });
    }
    let t_valid = focal_horizon(g) - FOCAL_EPS;
    let mut t = Vec::new();
    let mut p_inner = Vec::new();
    for &tt in t_grid {
        if tt < 0.0 {
            return Err(Error::domain(format!("inner offset must be non-negative, got {tt}")));
        }
        if tt > t_valid {
            break;
        }
        let (ch, sh) = (tt.cosh(), tt.sinh());
        t.push(tt);
        p_inner.push(g.integrate_along(|k| ch - k * sh));
    }
    Ok(ParallelProfile { t, p_inner, t_valid })
}

/// `∫ (cosh s + κ sinh s) ds`, the perimeter of the outer parallel set.
pub fn outer_parallel_perimeter(c: &RadialCurve, s: f64) -> Result<f64> {
    outer_from_geometry(&curve_geometry(c)?, s)
}

pub fn outer_from_geometry(g: &CurveGeometry, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("outer offset must be non-negative, got {s}")));
    }
    let (ch, sh) = (s.cosh(), s.sinh());
    Ok(g.integrate_along(|k| ch + k * sh))
}

/// Resolution of the brute-force inradius search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InradiusGrid {
    pub radial: usize,
    pub angular: usize,
    pub boundary_samples: usize,
}

impl Default for InradiusGrid {
    fn default() -> Self {
        Self {
            radial: 64,
            angular: 64,
            boundary_samples: 4096,
        }
    }
}

/// Largest distance from an interior point to the boundary.
pub fn inradius(c: &RadialCurve, grid: InradiusGrid) -> Result<f64> {
    if grid.radial < 2 || grid.angular < 3 || grid.boundary_samples < c.len().min(64) {
        return Err(Error::Resolution(format!("degenerate inradius grid {grid:?}")));
    }
    let samples = grid.boundary_samples.max(c.len());
    let rb = c.resample(samples);
    let boundary: Vec<HyperboloidPoint> = rb
        .iter()
        .enumerate()
        .map(|(j, &r)| HyperboloidPoint::from_polar(r, 2.0 * PI * j as f64 / samples as f64))
        .collect();
    let depth = |p: &HyperboloidPoint| -> f64 {
        let c = boundary
            .iter()
            .map(|q| -p.minkowski(q))
            .fold(f64::INFINITY, f64::min);
        c.max(1.0).acosh()
    };

    let mut best = (f64::NEG_INFINITY, HyperboloidPoint::from_polar(0.0, 0.0));
    for ja in 0..grid.angular {
        let th = 2.0 * PI * ja as f64 / grid.angular as f64;
        let rb_th = interpolate_periodic(&rb, th);
        for ir in 0..grid.radial {
            let rho = (ir as f64 + 0.5) / grid.radial as f64;
            let p = HyperboloidPoint::from_polar(rho * rb_th, th);
            let d = depth(&p);
            if d > best.0 {
                best = (d, p);
            }
        }
    }

    // coordinate-wise golden-section refinement in the Klein model
    let (mut u, mut v) = best.1.to_klein();
    let mut half_width = 2.0 * c.r.iter().copied().fold(0.0, f64::max).tanh() / grid.radial as f64;
    let mut value = best.0;
    for _ in 0..6 {
        let f_u = |x: f64| depth(&HyperboloidPoint::from_klein(x, v));
        let (nu, du) = golden_max(f_u, u - half_width, u + half_width, 1e-9);
        u = nu;
        value = du;
        let f_v = |y: f64| depth(&HyperboloidPoint::from_klein(u, y));
        let (nv, dv) = golden_max(f_v, v - half_width, v + half_width, 1e-9);
        v = nv;
        value = value.max(dv);
        half_width *= 0.5;
    }
    Ok(value.max(best.0))
}

fn interpolate_periodic(samples: &[f64], theta: f64) -> f64 {
    let n = samples.len();
    let x = theta / (2.0 * PI) * n as f64;
    let i = x.floor() as usize % n;
    let w = x - x.floor();
    samples[i] * (1.0 - w) + samples[(i + 1) % n] * w
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fixture() -> RadialCurve {
        make_family(1.0, &[Mode::new(2, 0.05, 0.0)], DEFAULT_ANGLES).unwrap()
    }

    #[test]
    fn circle_geometry_closed_forms() {
        let g = curve_geometry(&RadialCurve::circle(1.0, 256).unwrap()).unwrap();
        let coth = 1.0 / 1f64.tanh();
        assert!(g.kappa.iter().all(|k| (k - coth).abs() < 1e-12));
        assert_relative_eq!(coth, 1.313_035_285_5, epsilon = 1e-9);
        assert_relative_eq!(g.perimeter, 2.0 * PI * 1f64.sinh(), max_relative = 1e-13);
        assert_relative_eq!(g.area, 2.0 * PI * (1f64.cosh() - 1.0), max_relative = 1e-13);
        assert!(check_hconvex(&g).0);
    }

    #[test]
    fn large_circle_approaches_horocycle() {
        let g = curve_geometry(&RadialCurve::circle(12.0, 128).unwrap()).unwrap();
        assert!(g.kappa_min > 1.0 && g.kappa_max - 1.0 < 1e-9);
    }

    #[test]
    fn perturbed_fixture_gauss_bonnet_and_isoperimetry() {
        let g = curve_geometry(&fixture()).unwrap();
        assert!(g.gauss_bonnet_residual() < 1e-10);
        assert!(g.perimeter.powi(2) >= g.area.powi(2) + 4.0 * PI * g.area - 1e-8);
        let (convex, margin) = check_hconvex(&g);
        assert!(convex);
        assert_relative_eq!(margin, 0.186_303_307_5, epsilon = 1e-8);
    }

    #[test]
    fn strong_perturbation_is_not_hconvex() {
        let c = make_family(1.0, &[Mode::new(2, 0.8, 0.0)], 1024).unwrap();
        match curve_geometry(&c) {
            Ok(g) => assert!(!check_hconvex(&g).0, "kappa_min = {}", g.kappa_min),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn family_validation() {
        let c = make_family(0.7, &[], 128).unwrap();
        assert!(c.radii().iter().all(|&r| r == 0.7));
        assert!(matches!(
            make_family(0.1, &[Mode::new(1, 0.2, 0.0)], 128),
            Err(Error::InvalidFamily { .. })
        ));
        assert!(RadialCurve::circle(1.0, 100).is_err());
        assert!(RadialCurve::circle(1.0, 130).is_ok());
    }

    #[test]
    fn parallel_curvature_cases() {
        let r: f64 = 1.3;
        let coth = |x: f64| 1.0 / x.tanh();
        for t in [0.1, 0.5, 1.2] {
            assert_relative_eq!(parallel_curvature(coth(r), t).unwrap(), coth(r - t), max_relative = 1e-12);
            assert!((parallel_curvature(1.0, t).unwrap() - 1.0).abs() <= 1e-12);
        }
        assert_eq!(parallel_curvature(1.7, 0.0).unwrap(), 1.7);
        assert!(matches!(parallel_curvature(coth(r), r), Err(Error::Focal { .. })));
        // outward offsets never hit a focal point for κ ≥ 0
        assert_relative_eq!(parallel_curvature(coth(r), -0.4).unwrap(), coth(r + 0.4), max_relative = 1e-12);
    }

    #[test]
    fn circle_profile_and_outer_perimeter() {
        let r = 1.0f64;
        let c = RadialCurve::circle(r, 256).unwrap();
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.06).collect();
        let prof = inner_parallel_profile(&c, &grid).unwrap();
        assert!((prof.t_valid - (r - FOCAL_EPS)).abs() < 1e-12);
        assert_eq!(prof.t.len(), 17); // 0.96 is the last depth below R
        for (t, p) in prof.t.iter().zip(&prof.p_inner) {
            assert_relative_eq!(*p, 2.0 * PI * (r - t).sinh(), max_relative = 1e-8);
        }
        let s = 0.3;
        assert_relative_eq!(
            outer_parallel_perimeter(&c, s).unwrap(),
            2.0 * PI * (r + s).sinh(),
            max_relative = 1e-12
        );
        assert_eq!(outer_parallel_perimeter(&c, 0.0).unwrap(), curve_geometry(&c).unwrap().perimeter);
    }

    #[test]
    fn profile_rejects_non_hconvex() {
        let c = make_family(1.0, &[Mode::new(2, 0.8, 0.0)], 1024).unwrap();
        assert!(matches!(inner_parallel_profile(&c, &[0.0, 0.1]), Err(Error::NotHConvex { .. })));
    }

    #[test]
    fn hyperboloid_distances() {
        let p = HyperboloidPoint::from_polar(1.0, 0.3);
        assert_eq!(hyperboloid_distance(&p, &p).unwrap(), 0.0);
        let a = HyperboloidPoint::from_polar(0.4, 1.0);
        let b = HyperboloidPoint::from_polar(1.5, 1.0);
        assert_relative_eq!(hyperboloid_distance(&a, &b).unwrap(), 1.1, max_relative = 1e-12);
        // right angle at the center: cosh d = cosh² 1
        let q = HyperboloidPoint::from_polar(1.0, 0.5 * PI);
        let d = hyperboloid_distance(&HyperboloidPoint::from_polar(1.0, 0.0), &q).unwrap();
        assert_relative_eq!(d, (1f64.cosh().powi(2)).acosh(), max_relative = 1e-12);
        assert_relative_eq!(d, 1.513_374_006_6, epsilon = 1e-9);
        assert!(HyperboloidPoint::new(1.0, 0.5, 0.0).is_err());
        let bogus = HyperboloidPoint { x0: 0.5, x1: 0.0, x2: 0.0 };
        assert!(matches!(
            hyperboloid_distance(&bogus, &HyperboloidPoint::from_polar(0.0, 0.0)),
            Err(Error::InvalidPoint(_))
        ));
    }

    #[test]
    fn model_conversions_agree() {
        let p = HyperboloidPoint::from_polar(0.8, 2.0);
        let e = (0.4f64).tanh();
        let q = HyperboloidPoint::from_disk(e * 2f64.cos(), e * 2f64.sin());
        assert!(hyperboloid_distance(&p, &q).unwrap() < 1e-7);
        let (u, v) = p.to_klein();
        let k = HyperboloidPoint::from_klein(u, v);
        assert!(hyperboloid_distance(&p, &k).unwrap() < 1e-7);
    }

    #[test]
    fn resample_reproduces_trig_polynomial() {
        let c = make_family(1.0, &[Mode::new(3, 0.1, 0.4)], 128).unwrap();
        let fine = c.resample(512);
        for (j, v) in fine.iter().enumerate() {
            let th = 2.0 * PI * j as f64 / 512.0;
            assert!((v - (1.0 + 0.1 * (3.0 * th + 0.4).cos())).abs() < 1e-13);
        }
    }

    #[test]
    fn coarse_evaluation_matches_trig_polynomial() {
        let c = make_family(1.0, &[Mode::new(3, 0.1, 0.4)], 256).unwrap();
        let coarse = c.evaluate(48);
        for (j, v) in coarse.iter().enumerate() {
            let th = 2.0 * PI * j as f64 / 48.0;
            assert!((v - (1.0 + 0.1 * (3.0 * th + 0.4).cos())).abs() < 1e-13);
        }
    }

    #[test]
    fn circle_inradius() {
        let c = RadialCurve::circle(0.9, 256).unwrap();
        let r = inradius(&c, InradiusGrid::default()).unwrap();
        assert!((r - 0.9).abs() < 1e-4, "{r}");
    }
}
