use super::{cached_rule, ln_gamma_complex, LogRadialGrid};
use crate::{Error, Real, Result, C64};
use nalgebra::DMatrix;

/// s-wave radial Fourier transform `ξ(r) = √(2/π) (1/r) ∫ sin(pr) p ξ̂(p) dp`,
/// evaluated by the grid quadrature at the requested radii.
///
/// The transform is its own inverse, so the same call maps position samples
/// on a radial grid back to momentum.
pub fn sine_transform_swave<T: Real>(grid: &LogRadialGrid<T>, xi_hat: &[T], radii: &[T]) -> Result<Vec<T>> {
    if xi_hat.len() != grid.n {
        return Err(Error::Grid(format!("{} samples on a {}-node grid", xi_hat.len(), grid.n)));
    }
    let pref = (T::lit(2.0) / T::PI()).sqrt();
    Ok(radii
        .iter()
        .map(|&r| {
            let s = grid
                .nodes
                .iter()
                .zip(&grid.weights)
                .zip(xi_hat)
                .fold(T::zero(), |acc, ((&p, &w), &x)| acc + w * (p * r).sin() * x / p);
            pref * s / r
        })
        .collect())
}

/// Discrete unitary spherical Hankel transform of order `l` between a log
/// momentum grid and its reciprocal position grid.
///
/// Works in the coordinates `u_j = √h p_j^{3/2} ξ̂(p_j)` and `v_i = √h r_i^{3/2} ξ(r_i)`
/// where it is a real symmetric orthogonal matrix, built from the exact Mellin
/// multiplier of the kernel `(pr)^{3/2} j_l(pr)`.
#[derive(Debug, Clone)]
pub struct LogHankel {
    pub order: usize,
    pub log_step: f64,
    pub momenta: Vec<f64>,
    pub radii: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

impl LogHankel {
    pub fn new(grid: &LogRadialGrid<f64>, order: usize) -> Self {
        let n = grid.n;
        let h = grid.log_step();
        let nu = order as f64 + 0.5;
        let a = 0.5 * (nu + 1.0);
        let tau = std::f64::consts::TAU;
        let phase = |m: usize| {
            let k = tau * m as f64 / (n as f64 * h);
            k * std::f64::consts::LN_2 + 2.0 * ln_gamma_complex(C64::new(a, 0.5 * k)).im
        };
        let paired = (n - 1) / 2;
        let thetas: Vec<f64> = (1..=paired).map(phase).collect();
        let nyquist = if n % 2 == 0 {
            let c = phase(n / 2).cos();
            Some(if c < 0.0 { -1.0 } else { 1.0 })
        } else {
            None
        };
        let diag: Vec<f64> = (0..2 * n - 1)
            .map(|s| {
                let shift = s as f64 - (n as f64 - 1.0);
                let mut acc = 1.0;
                for (i, &th) in thetas.iter().enumerate() {
                    let m = (i + 1) as f64;
                    acc += 2.0 * (tau * m * shift / n as f64 - th).cos();
                }
                if let Some(sgn) = nyquist {
                    let par = if (s + n - 1) % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sgn * par;
                }
                acc / n as f64
            })
            .collect();
        let matrix = DMatrix::from_fn(n, n, |i, j| diag[i + j]);
        let radii = grid.nodes.iter().rev().map(|p| 1.0 / p).collect();
        Self { order, log_step: h, momenta: grid.nodes.clone(), radii, matrix }
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    /// Momentum samples to position samples at [`LogHankel::radii`].
    pub fn to_position(&self, xi_hat: &[f64]) -> Vec<f64> {
        let u = nalgebra::DVector::from_iterator(
            self.len(),
            self.momenta.iter().zip(xi_hat).map(|(&p, &x)| p.powf(1.5) * x),
        );
        let v = &self.matrix * u;
        v.iter().zip(&self.radii).map(|(&vi, &r)| vi / r.powf(1.5)).collect()
    }

    /// Position samples at [`LogHankel::radii`] back to momentum samples.
    pub fn to_momentum(&self, xi: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_iterator(
            self.len(),
            self.radii.iter().zip(xi).map(|(&r, &x)| r.powf(1.5) * x),
        );
        let u = &self.matrix * v;
        u.iter().zip(&self.momenta).map(|(&ui, &p)| ui / p.powf(1.5)).collect()
    }

    /// Average of `f` over the log cell around each radius.
    pub fn cell_averages<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        let rule = cached_rule(8);
        let hh = 0.5 * self.log_step;
        self.radii
            .iter()
            .map(|&r| 0.5 * rule.integrate(|t| f(r * (hh * t).exp())))
            .collect()
    }

    /// Matrix of the position-space multiplier `f(r)` in unitary momentum coordinates.
    pub fn multiplier<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let m = self.cell_averages(f);
        let scaled = DMatrix::from_fn(self.len(), self.len(), |i, j| m[i] * self.matrix[(i, j)]);
        &self.matrix * scaled
    }

    /// Complex multiplier `f(r)` in unitary momentum coordinates.
    pub fn multiplier_complex<F: Fn(f64) -> C64>(&self, f: F) -> DMatrix<C64> {
        let re = self.multiplier(|r| f(r).re);
        let im = self.multiplier(|r| f(r).im);
        DMatrix::from_fn(self.len(), self.len(), |i, j| C64::new(re[(i, j)], im[(i, j)]))
    }
}
