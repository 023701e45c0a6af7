//! Linear finite elements for the Robin eigenproblem on a star-shaped
//! domain of H², meshed in the Poincaré disk.
//!
//! In two dimensions the Dirichlet energy is conformally invariant, so the
//! stiffness matrix is the Euclidean one. The metric enters only through the
//! area weight `(2/(1-|x|²))²` in the mass matrix and the length weight
//! `2/(1-|x|²)` in the boundary mass.

use std::io::Write;

use crate::domain2d::RadialCurve;
use crate::error::{Error, Result};
use crate::linalg::{smallest_eigenpair, SymBand};

pub const DEFAULT_RINGS: usize = 48;
pub const DEFAULT_SPOKES: usize = 192;
pub const DEFAULT_REFINEMENTS: usize = 2;

/// Weight evaluations closer than this to the ideal boundary are refused.
const IDEAL_BOUNDARY_GAP: f64 = 1e-12;

/// Structured triangulation of a star-shaped domain in the Poincaré disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<[usize; 2]>,
}

impl DiskMesh {
    /// Number of distinct edges.
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }

    pub fn bandwidth(&self) -> usize {
        self.triangles
            .iter()
            .map(|t| {
                let hi = t.iter().max().unwrap();
                let lo = t.iter().min().unwrap();
                hi - lo
            })
            .max()
            .unwrap_or(0)
    }

    /// Vertex lines `x y`, a blank line, then triangle lines `i j k`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        for v in &self.vertices {
            writeln!(out, "{} {}", v[0], v[1])?;
        }
        writeln!(out)?;
        for t in &self.triangles {
            writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }

    /// Checks orientation, the boundary loop and that the mesh stays in the disk.
    pub fn validate(&self) -> Result<()> {
        for (k, t) in self.triangles.iter().enumerate() {
            let area = signed_area(&self.vertices, t);
            if !(area >= 1e-14) {
                return Err(Error::Mesh(format!("triangle {k} has signed area {area:e}")));
            }
        }
        if let Some(v) = self.vertices.iter().find(|v| v[0] * v[0] + v[1] * v[1] >= 1.0) {
            return Err(Error::Mesh(format!("vertex {v:?} outside the unit disk")));
        }
        let n = self.boundary_edges.len();
        if n < 3 {
            return Err(Error::Mesh("boundary has fewer than three edges".into()));
        }
        for k in 0..n {
            if self.boundary_edges[k][1] != self.boundary_edges[(k + 1) % n][0] {
                return Err(Error::Mesh(format!("boundary loop broken after edge {k}")));
            }
        }
        Ok(())
    }
}

fn signed_area(v: &[[f64; 2]], t: &[usize; 3]) -> f64 {
    let (a, b, c) = (v[t[0]], v[t[1]], v[t[2]]);
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Maps the geodesic polar points `(ρ r(θ), θ)`, `ρ ∈ [0, 1]`, to the disk
/// (Euclidean radius `tanh(ρ r(θ) / 2)`) and triangulates ring by ring with
/// a fan around the center.
pub fn mesh_domain(c: &RadialCurve, n_r: usize, n_theta: usize) -> Result<DiskMesh> {
    if n_r < 2 || n_theta < 8 {
        return Err(Error::Resolution(format!("mesh {n_r}x{n_theta} too coarse")));
    }
    let boundary_r = c.evaluate(n_theta);
    let mut vertices = Vec::with_capacity(1 + n_r * n_theta);
    vertices.push([0.0, 0.0]);
    for i in 1..=n_r {
        let rho = i as f64 / n_r as f64;
        for (j, rb) in boundary_r.iter().enumerate() {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            let e = (0.5 * rho * rb).tanh();
            vertices.push([e * th.cos(), e * th.sin()]);
        }
    }
    let id = |i: usize, j: usize| 1 + (i - 1) * n_theta + j % n_theta;
    let mut triangles = Vec::with_capacity(n_theta * (2 * n_r - 1));
    for j in 0..n_theta {
        triangles.push([0, id(1, j), id(1, j + 1)]);
    }
    for i in 1..n_r {
        for j in 0..n_theta {
            let (a, b, cc, d) = (id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j));
            triangles.push([a, d, cc]);
            triangles.push([a, cc, b]);
        }
    }
    let boundary_edges = (0..n_theta).map(|j| [id(n_r, j), id(n_r, j + 1)]).collect();
    let mesh = DiskMesh {
        vertices,
        triangles,
        boundary_edges,
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Stiffness, boundary mass and mass matrices of a mesh.
#[derive(Debug, Clone)]
pub struct RobinMatrices {
    pub stiffness: SymBand,
    pub boundary_mass: SymBand,
    pub mass: SymBand,
}

fn area_weight(x: f64, y: f64) -> Result<f64> {
    let gap = 1.0 - x * x - y * y;
    if gap < IDEAL_BOUNDARY_GAP {
        return Err(Error::Mesh(format!(
            "quadrature point ({x}, {y}) too close to the ideal boundary"
        )));
    }
    Ok((2.0 / gap).powi(2))
}

/// Assembles `K`, `B` and `M`. Degree-2 three-point rule for the mass,
/// two-point Gauss rule along boundary edges.
pub fn assemble(mesh: &DiskMesh) -> Result<RobinMatrices> {
    let n = mesh.vertices.len();
    let bw = mesh.bandwidth();
    let mut k = SymBand::zeros(n, bw);
    let mut m = SymBand::zeros(n, bw);
    let mut b = SymBand::zeros(n, bw);
    const TRI_PTS: [[f64; 3]; 3] = [
        [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
        [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
    ];
    for t in &mesh.triangles {
        let p = [mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]];
        let area = signed_area(&mesh.vertices, t);
        // gradients of barycentric coordinates, scaled by 2·area
        let g = [
            [p[1][1] - p[2][1], p[2][0] - p[1][0]],
            [p[2][1] - p[0][1], p[0][0] - p[2][0]],
            [p[0][1] - p[1][1], p[1][0] - p[0][0]],
        ];
        let mut wq = [0.0; 3];
        for (q, bary) in TRI_PTS.iter().enumerate() {
            let x = bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0];
            let y = bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1];
            wq[q] = area_weight(x, y)?;
        }
        for a in 0..3 {
            for c in 0..=a {
                let kv = (g[a][0] * g[c][0] + g[a][1] * g[c][1]) / (4.0 * area);
                k.add(t[a], t[c], kv);
                let mv: f64 = (0..3).map(|q| wq[q] * TRI_PTS[q][a] * TRI_PTS[q][c]).sum::<f64>() * area / 3.0;
                m.add(t[a], t[c], mv);
            }
        }
    }
    let gp = [0.5 - 0.5 / 3f64.sqrt(), 0.5 + 0.5 / 3f64.sqrt()];
    for e in &mesh.boundary_edges {
        let (p, q) = (mesh.vertices[e[0]], mesh.vertices[e[1]]);
        let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        let mut local = [[0.0; 2]; 2];
        for s in gp {
            let x = p[0] + s * (q[0] - p[0]);
            let y = p[1] + s * (q[1] - p[1]);
            let w = area_weight(x, y)?.sqrt() * 0.5 * len;
            let phi = [1.0 - s, s];
            for a in 0..2 {
                for c in 0..2 {
                    local[a][c] += w * phi[a] * phi[c];
                }
            }
        }
        b.add(e[0], e[0], local[0][0]);
        b.add(e[1], e[1], local[1][1]);
        b.add(e[1], e[0], local[1][0]);
    }
    Ok(RobinMatrices {
        stiffness: k,
        boundary_mass: b,
        mass: m,
    })
}

/// First Robin eigenpair of a discretized domain.
#[derive(Debug, Clone, PartialEq)]
pub struct RobinEigenResult {
    pub lambda1: f64,
    /// Nodal eigenvector, positive with maximum 1.
    pub u: Vec<f64>,
    pub dof: usize,
    pub residual: f64,
}

/// Smallest eigenvalue of `(K + βB) u = λ M u`.
pub fn solve_pencil(mats: &RobinMatrices, beta: f64) -> Result<RobinEigenResult> {
    let a = mats.stiffness.add_scaled(beta, &mats.boundary_mass);
    let n = a.dim();
    let ones = vec![1.0; n];
    let upper = a.form(&ones, &ones) / mats.mass.form(&ones, &ones);
    let eig = smallest_eigenpair(&a, &mats.mass, upper, &ones)?;
    let sign = if eig.vector.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let max = eig.vector.iter().map(|v| v * sign).fold(f64::NEG_INFINITY, f64::max);
    let u: Vec<f64> = eig.vector.iter().map(|v| v * sign / max).collect();
    if let Some(i) = u.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Solver(format!(
            "first eigenvector not positive at node {i} (value {})",
            u[i]
        )));
    }
    Ok(RobinEigenResult {
        lambda1: eig.value,
        u,
        dof: n,
        residual: eig.residual,
    })
}

/// Mesh sizes of a refinement ladder.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FemResolution {
    /// Rings of the finest mesh.
    pub n_r: usize,
    /// Spokes of the finest mesh.
    pub n_theta: usize,
    /// Number of halvings below the finest mesh.
    pub refinements: usize,
}

impl Default for FemResolution {
    fn default() -> Self {
        Self {
            n_r: DEFAULT_RINGS,
            n_theta: DEFAULT_SPOKES,
            refinements: DEFAULT_REFINEMENTS,
        }
    }
}

impl FemResolution {
    /// `(n_r, n_theta)` from coarsest to finest.
    pub fn levels(&self) -> Result<Vec<(usize, usize)>> {
        let div = 1usize << self.refinements;
        if !self.n_r.is_multiple_of(div) || !self.n_theta.is_multiple_of(div) {
            return Err(Error::Resolution(format!(
                "mesh {}x{} not divisible by 2^{}",
                self.n_r, self.n_theta, self.refinements
            )));
        }
        let levels: Vec<(usize, usize)> = (0..=self.refinements)
            .map(|k| {
                let f = 1usize << (self.refinements - k);
                (self.n_r / f, self.n_theta / f)
            })
            .collect();
        let (r0, t0) = levels[0];
        if r0 < 4 || t0 < 16 {
            return Err(Error::Resolution(format!(
                "coarsest ladder mesh {r0}x{t0} below 4x16"
            )));
        }
        Ok(levels)
    }
}

/// Result of a refinement-ladder solve.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSolve {
    /// Richardson-extrapolated eigenvalue.
    pub lambda1: f64,
    /// Difference between the two finest extrapolants, or between the two
    /// finest raw values when only two levels exist.
    pub error_estimate: f64,
    pub levels: Vec<(usize, f64)>,
    pub observed_order: Option<f64>,
    pub warning: Option<String>,
    /// Finest-level eigenpair.
    pub finest: RobinEigenResult,
}

/// Assembled matrices for every level of a refinement ladder, reusable
/// across Robin parameters.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub levels: Vec<RobinMatrices>,
}

impl Ladder {
    pub fn build(c: &RadialCurve, res: FemResolution) -> Result<Self> {
        let levels = res
            .levels()?
            .into_iter()
            .map(|(n_r, n_theta)| mesh_domain(c, n_r, n_theta).and_then(|m| assemble(&m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { levels })
    }

    /// Solves on every level and extrapolates assuming second order.
    pub fn solve(&self, beta: f64) -> Result<DomainSolve> {
        let mut levels = Vec::new();
        let mut finest = None;
        for mats in &self.levels {
            let sol = solve_pencil(mats, beta)?;
            levels.push((sol.dof, sol.lambda1));
            finest = Some(sol);
        }
        let finest = finest.ok_or_else(|| Error::Resolution("empty refinement ladder".into()))?;
        let vals: Vec<f64> = levels.iter().map(|l| l.1).collect();
        let n = vals.len();
        let richardson = |coarse: f64, fine: f64| (4.0 * fine - coarse) / 3.0;

        let (lambda1, error_estimate) = match n {
            1 => (vals[0], f64::NAN),
            2 => (richardson(vals[0], vals[1]), (vals[1] - vals[0]).abs()),
            _ => {
                let e1 = richardson(vals[n - 3], vals[n - 2]);
                let e2 = richardson(vals[n - 2], vals[n - 1]);
                (e2, (e2 - e1).abs())
            }
        };
        let observed_order = if n >= 3 {
            let d1 = vals[n - 2] - vals[n - 3];
            let d2 = vals[n - 1] - vals[n - 2];
            Some((d1 / d2).abs().log2())
        } else {
            None
        };
        let diffs: Vec<f64> = vals.windows(2).map(|w| w[1] - w[0]).collect();
        let monotone = diffs.iter().all(|d| *d <= 0.0) || diffs.iter().all(|d| *d >= 0.0);
        let warning = (!monotone).then(|| format!("non-monotone refinement sequence {vals:?}"));
        Ok(DomainSolve {
            lambda1,
            error_estimate,
            levels,
            observed_order,
            warning,
            finest,
        })
    }
}

/// Builds the ladder for `c` and solves it once.
pub fn solve_domain(c: &RadialCurve, beta: f64, res: FemResolution) -> Result<DomainSolve> {
    Ladder::build(c, res)?.solve(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain2d::{make_family, Mode};
    use crate::hypgeo::{ball_perimeter, ball_volume, SpaceParams};

    fn circle(r: f64) -> RadialCurve {
        RadialCurve::circle(r, 256).unwrap()
    }

    #[test]
    fn boundary_vertices_on_circle() {
        let mesh = mesh_domain(&circle(1.0), 8, 64).unwrap();
        for e in &mesh.boundary_edges {
            let v = mesh.vertices[e[0]];
            assert!(((v[0] * v[0] + v[1] * v[1]).sqrt() - 0.5f64.tanh()).abs() < 1e-14);
        }
        assert!((0.5f64.tanh() - 0.462_117_157).abs() < 1e-9);
    }

    #[test]
    fn euler_characteristic_of_disk() {
        let c = make_family(1.0, &[Mode::new(2, 0.05, 0.0)], 512).unwrap();
        for (nr, nt) in [(8, 64), (13, 70)] {
            let mesh = mesh_domain(&c, nr, nt).unwrap();
            let v = mesh.vertices.len() as i64;
            let e = mesh.edge_count() as i64;
            let f = mesh.triangles.len() as i64;
            assert_eq!(v - e + f, 1);
        }
    }

    #[test]
    fn dump_format() {
        let mesh = mesh_domain(&circle(0.5), 2, 8).unwrap();
        let mut buf = Vec::new();
        mesh.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let (verts, tris) = text.split_once("\n\n").unwrap();
        assert_eq!(verts.lines().count(), mesh.vertices.len());
        assert_eq!(tris.lines().count(), mesh.triangles.len());
        assert_eq!(tris.lines().next().unwrap(), "0 1 2");
    }

    #[test]
    fn constants_have_zero_energy_and_recover_measures() {
        let mats = assemble(&mesh_domain(&circle(1.0), DEFAULT_RINGS, DEFAULT_SPOKES).unwrap()).unwrap();
        let ones = vec![1.0; mats.mass.dim()];
        assert!(mats.stiffness.form(&ones, &ones).abs() < 1e-10);
        let area = mats.mass.form(&ones, &ones);
        let perim = mats.boundary_mass.form(&ones, &ones);
        let sp = SpaceParams::plane();
        assert!((area / ball_volume(sp, 1.0).unwrap() - 1.0).abs() < 1e-2);
        assert!((perim / ball_perimeter(sp, 1.0).unwrap() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn neumann_pencil() {
        let mats = assemble(&mesh_domain(&circle(1.0), 16, 64).unwrap()).unwrap();
        let sol = solve_pencil(&mats, 0.0).unwrap();
        assert!(sol.lambda1.abs() < 1e-7);
        let lo = sol.u.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(1.0 - lo < 1e-6);
    }

    #[test]
    fn ideal_boundary_refused() {
        let c = circle(40.0);
        assert!(matches!(
            mesh_domain(&c, 8, 64).and_then(|m| assemble(&m)),
            Err(Error::Mesh(_))
        ));
    }

    #[test]
    fn monotone_in_beta_and_below_constant_quotient() {
        let c = make_family(0.9, &[Mode::new(2, 0.04, 0.3)], 256).unwrap();
        let mats = assemble(&mesh_domain(&c, 12, 64).unwrap()).unwrap();
        let ones = vec![1.0; mats.mass.dim()];
        let mut last = f64::NEG_INFINITY;
        for beta in [-2.0, -1.0, -0.25, 0.0, 0.25, 1.0, 2.0] {
            let sol = solve_pencil(&mats, beta).unwrap();
            let a = mats.stiffness.add_scaled(beta, &mats.boundary_mass);
            assert!(sol.lambda1 <= a.form(&ones, &ones) / mats.mass.form(&ones, &ones) + 1e-10);
            assert!(sol.lambda1 >= last);
            assert!(sol.u.iter().all(|&v| v > 0.0));
            assert!(sol.residual <= 1e-8);
            last = sol.lambda1;
        }
    }

    #[test]
    fn circle_matches_radial_solver() {
        use crate::radial::{shoot_lambda1, RadialProblem};
        let c = circle(1.0);
        for beta in [-1.0, 1.0] {
            let exact = shoot_lambda1(&RadialProblem::new(SpaceParams::plane(), 1.0, beta).unwrap()).unwrap();
            let sol = solve_domain(&c, beta, FemResolution { n_r: 16, n_theta: 64, refinements: 1 }).unwrap();
            assert!((sol.lambda1 - exact).abs() < 1e-3 * exact.abs());
            assert!((sol.finest.lambda1 - exact).abs() < 1e-2 * exact.abs());
            assert!(sol.warning.is_none());
        }
    }

    #[test]
    fn ladder_levels() {
        let lv = FemResolution::default().levels().unwrap();
        assert_eq!(lv, vec![(12, 48), (24, 96), (48, 192)]);
        assert!(FemResolution { n_r: 10, n_theta: 64, refinements: 2 }.levels().is_err());
    }
}
