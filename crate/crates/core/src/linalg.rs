//! Symmetric band matrices, band Cholesky, and a shift-invert solver for the
//! smallest eigenpair of a symmetric-definite pencil `A x = λ M x`.

use crate::error::{Error, Result};

/// Symmetric matrix with half-bandwidth `bw`, lower triangle stored row by row.
/// Row `i` holds columns `i - bw ..= i`; entries left of column 0 are padding.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + j + self.bw - i
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to entry `(i, j)` (and implicitly `(j, i)`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            let mut acc = 0.0;
            for j in lo..i {
                let a = row[j + self.bw - i];
                acc += a * x[j];
                y[j] += a * x[i];
            }
            acc += row[self.bw] * x[i];
            y[i] += acc;
        }
        y
    }

    /// `xᵀ A y`
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.matvec(y))
    }

    /// `self + c * other`, bandwidth of the wider operand.
    pub fn add_scaled(&self, c: f64, other: &SymBand) -> SymBand {
        assert_eq!(self.n, other.n);
        let bw = self.bw.max(other.bw);
        let mut out = SymBand::zeros(self.n, bw);
        for src in [(1.0, self), (c, other)] {
            let (s, m) = src;
            for i in 0..m.n {
                for j in i.saturating_sub(m.bw)..=i {
                    let v = m.data[m.idx(i, j)];
                    if v != 0.0 {
                        out.add(i, j, s * v);
                    }
                }
            }
        }
        out
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let v = self.data[self.idx(i, j)].abs();
                sums[i] += v;
                if j != i {
                    sums[j] += v;
                }
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn cholesky(&self) -> Result<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = self.data.clone();
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                // sum over k in [lo_i, j) of L[i][k] L[j][k]
                let mut s = l[i * w + j + bw - i];
                let lo = lo_i.max(j.saturating_sub(bw));
                if lo < j {
                    let ri = i * w + lo + bw - i;
                    let rj = j * w + lo + bw - j;
                    let len = j - lo;
                    s -= dot(&l[ri..ri + len], &l[rj..rj + len]);
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite { row: i, pivot: s });
                    }
                    l[i * w + bw] = s.sqrt();
                } else {
                    l[i * w + j + bw - i] = s / l[j * w + bw];
                }
            }
        }
        Ok(BandCholesky { n, bw, l })
    }
}

/// Lower factor of a band Cholesky decomposition.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut y = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let r = i * w + lo + bw - i;
            let s = dot(&self.l[r..r + (i - lo)], &y[lo..i]);
            y[i] = (y[i] - s) / self.l[i * w + bw];
        }
        for i in (0..n).rev() {
            y[i] /= self.l[i * w + bw];
            let yi = y[i];
            let lo = i.saturating_sub(bw);
            for j in lo..i {
                y[j] -= self.l[i * w + j + bw - i] * yi;
            }
        }
        y
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest eigenpair of `A x = λ M x` with `M` positive definite.
#[derive(Debug, Clone)]
pub struct PencilEigen {
    pub value: f64,
    /// M-normalized eigenvector.
    pub vector: Vec<f64>,
    /// `‖(A - λM)x‖∞ / ‖A‖∞` with `x` scaled to unit max norm.
    pub residual: f64,
    pub iterations: usize,
    pub shift: f64,
}

/// Shift-invert inverse iteration. `upper` must be an upper bound for the
/// smallest eigenvalue (any Rayleigh quotient will do); shifts below the
/// spectrum are found by requiring `A - σM` to admit a Cholesky factor.
pub fn smallest_eigenpair(a: &SymBand, m: &SymBand, upper: f64, start: &[f64]) -> Result<PencilEigen> {
    let n = a.dim();
    if m.dim() != n || start.len() != n {
        return Err(Error::Contract("pencil dimensions disagree".into()));
    }
    m.cholesky().map_err(|e| Error::Solver(format!("mass matrix not positive definite: {e}")))?;
    let scale = upper.abs().max(1.0);

    let mut delta = 0.25 * scale;
    let mut attempts = 0;
    let (mut shift, mut factor) = loop {
        let sigma = upper - delta;
        match a.add_scaled(-sigma, m).cholesky() {
            Ok(f) => break (sigma, f),
            Err(_) if attempts < 60 => {
                attempts += 1;
                delta *= 2.0;
            }
            Err(e) => return Err(Error::Solver(format!("no shift below the spectrum found: {e}"))),
        }
    };

    let mut x = start.to_vec();
    m_normalize(m, &mut x)?;
    let mut rq = a.form(&x, &x);
    let mut reshifted = false;
    let a_norm = a.norm_inf().max(f64::MIN_POSITIVE);

    for it in 1..=1000 {
        let rhs = m.matvec(&x);
        let mut y = factor.solve(&rhs);
        m_normalize(m, &mut y)?;
        let rq_new = a.form(&y, &y);
        // flip to keep a consistent sign between iterates
        if dot(&y, &rhs) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        x = y;
        let change = (rq_new - rq).abs();
        rq = rq_new;

        if !reshifted && change <= 1e-4 * scale {
            let sigma = rq - 1e-3 * scale;
            if let Ok(f) = a.add_scaled(-sigma, m).cholesky() {
                shift = sigma;
                factor = f;
            }
            reshifted = true;
        }
        let residual = residual_norm(a, m, rq, &x) / a_norm;
        let stagnated = it > 50 && change <= 1e-15 * scale;
        if (residual <= 1e-12 && it > 2) || stagnated {
            return Ok(PencilEigen {
                value: rq,
                vector: x,
                residual,
                iterations: it,
                shift,
            });
        }
    }
    Err(Error::Solver(format!(
        "inverse iteration did not converge (last Rayleigh quotient {rq}, shift {shift})"
    )))
}

fn m_normalize(m: &SymBand, x: &mut [f64]) -> Result<()> {
    let nrm = m.form(x, x);
    if !(nrm > 0.0) || !nrm.is_finite() {
        return Err(Error::Solver(format!("degenerate iterate (M-norm² = {nrm})")));
    }
    let s = nrm.sqrt().recip();
    x.iter_mut().for_each(|v| *v *= s);
    Ok(())
}

fn residual_norm(a: &SymBand, m: &SymBand, lambda: f64, x: &[f64]) -> f64 {
    let xmax = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let ax = a.matvec(x);
    let mx = m.matvec(x);
    ax.iter()
        .zip(&mx)
        .map(|(p, q)| (p - lambda * q).abs())
        .fold(0.0, f64::max)
        / xmax
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SymBand {
        let mut a = SymBand::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i > 0 {
                a.add(i, i - 1, -1.0);
            }
        }
        a
    }

    fn identity(n: usize) -> SymBand {
        let mut m = SymBand::zeros(n, 0);
        for i in 0..n {
            m.add(i, i, 1.0);
        }
        m
    }

    #[test]
    fn cholesky_solves_banded_system() {
        let n = 40;
        let mut a = SymBand::zeros(n, 3);
        for i in 0..n {
            a.add(i, i, 10.0 + i as f64 * 0.1);
            for d in 1..=3 {
                if i >= d {
                    a.add(i, i - d, 1.0 / (d as f64 + 1.0));
                }
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.matvec(&x);
        let got = a.cholesky().unwrap().solve(&b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = laplacian_1d(5);
        a.add(2, 2, -10.0);
        assert!(matches!(a.cholesky(), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn smallest_eigenvalue_of_discrete_laplacian() {
        let n = 50;
        let a = laplacian_1d(n);
        let m = identity(n);
        let start = vec![1.0; n];
        let upper = a.form(&start, &start) / n as f64;
        let eig = smallest_eigenpair(&a, &m, upper, &start).unwrap();
        let h = std::f64::consts::PI / (n as f64 + 1.0);
        let exact = 2.0 - 2.0 * h.cos();
        assert!((eig.value - exact).abs() < 1e-13);
        assert!(eig.residual < 1e-12);
    }

    #[test]
    fn indefinite_pencil_with_negative_eigenvalue() {
        let n = 30;
        let mut a = laplacian_1d(n);
        a.add(n - 1, n - 1, -3.0);
        let m = identity(n);
        let start = vec![1.0; n];
        let upper = a.form(&start, &start) / n as f64;
        let eig = smallest_eigenpair(&a, &m, upper, &start).unwrap();
        assert!(eig.value < 0.0);
        assert!(eig.residual < 1e-10);
    }
}
