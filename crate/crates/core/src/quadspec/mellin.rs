use crate::{Error, Real, Result};
use num_complex::Complex;

/// Samples of `g♯(k) = (2π)^{-1/2} ∫ e^{-ikx} e^{2x} g(e^x) dx` on a uniform
/// frequency grid `k_m = (m - n/2) Δk`.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinSpectrum<T> {
    pub k: Vec<T>,
    pub values: Vec<Complex<T>>,
    pub dk: T,
    /// Set when `g` has not decayed at the grid ends (relative size above 1e-8).
    pub endpoint_warning: bool,
}

impl<T: Real> MellinSpectrum<T> {
    /// `Σ |g♯(k_m)|^2 w(k_m) Δk`.
    pub fn weighted_norm<F: Fn(T) -> T>(&self, w: F) -> T {
        self.k
            .iter()
            .zip(&self.values)
            .fold(T::zero(), |acc, (&k, v)| acc + v.norm_sqr() * w(k))
            * self.dk
    }
}

fn log_step<T: Real>(nodes: &[T]) -> Result<T> {
    if nodes.len() < 2 {
        return Err(Error::Grid("Mellin transform needs at least 2 nodes".into()));
    }
    if nodes.iter().any(|&p| !(p > T::zero())) {
        return Err(Error::Grid("Mellin transform needs positive nodes".into()));
    }
    let n = nodes.len();
    let h = (nodes[n - 1].ln() - nodes[0].ln()) / T::idx(n - 1);
    let tol = T::lit(1e-9).max(T::epsilon() * T::lit(64.0));
    for w in nodes.windows(2) {
        let step = w[1].ln() - w[0].ln();
        if ((step - h) / h).abs() > tol {
            return Err(Error::Grid("nodes are not uniformly spaced in ln p".into()));
        }
    }
    Ok(h)
}

/// Discrete Mellin-type transform of radial samples on a uniform log grid.
pub fn mellin_sharp<T: Real>(nodes: &[T], g: &[Complex<T>]) -> Result<MellinSpectrum<T>> {
    if nodes.len() != g.len() {
        return Err(Error::Grid("sample count differs from node count".into()));
    }
    let h = log_step(nodes)?;
    let n = nodes.len();
    let two_pi = T::TAU();
    let dk = two_pi / (T::idx(n) * h);
    let a: Vec<Complex<T>> = nodes.iter().zip(g).map(|(&p, &v)| v * (p * p)).collect();
    let max = a.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    let edge = a[0].norm().max(a[n - 1].norm());
    let endpoint_warning = max > T::zero() && edge > T::lit(1e-8) * max;
    let xs: Vec<T> = nodes.iter().map(|p| p.ln()).collect();
    let pref = h / two_pi.sqrt();
    let half = T::idx(n / 2);
    let k: Vec<T> = (0..n).map(|m| (T::idx(m) - half) * dk).collect();
    let values = k
        .iter()
        .map(|&km| {
            a.iter()
                .zip(&xs)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&aj, &xj)| {
                    acc + aj * Complex::from_polar(T::one(), -km * xj)
                })
                * pref
        })
        .collect();
    Ok(MellinSpectrum { k, values, dk, endpoint_warning })
}

/// Inverse of [`mellin_sharp`] on the same nodes.
pub fn inverse_mellin_sharp<T: Real>(nodes: &[T], spec: &MellinSpectrum<T>) -> Result<Vec<Complex<T>>> {
    if nodes.len() != spec.values.len() {
        return Err(Error::Grid("spectrum length differs from node count".into()));
    }
    log_step(nodes)?;
    let pref = spec.dk / T::TAU().sqrt();
    Ok(nodes
        .iter()
        .map(|&p| {
            let x = p.ln();
            let s = spec
                .k
                .iter()
                .zip(&spec.values)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&km, &v)| {
                    acc + v * Complex::from_polar(T::one(), km * x)
                });
            s * pref / (p * p)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadspec::LogRadialGrid;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    type C = Complex<f64>;

    #[test]
    fn gaussian_in_log_variable() {
        // g(p) = p^{-2} exp(-(ln p)^2/2) so that e^{2x} g = exp(-x^2/2) and g♯ = exp(-k^2/2)
        let grid = LogRadialGrid::<f64>::new((-12f64).exp(), 12f64.exp(), 256).unwrap();
        let g: Vec<C> = grid.nodes.iter().map(|&p| C::new((-p.ln().powi(2) / 2.0).exp() / (p * p), 0.0)).collect();
        let s = mellin_sharp(&grid.nodes, &g).unwrap();
        assert!(!s.endpoint_warning);
        for (&k, v) in s.k.iter().zip(&s.values) {
            if k.abs() < 8.0 {
                // phase from the grid origin is absent because x runs symmetric about 0
                assert!((v - C::new((-k * k / 2.0).exp(), 0.0)).norm() < 1e-10, "k={k} v={v}");
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let grid = LogRadialGrid::<f64>::new(1e-3, 1e3, 64).unwrap();
        let s = mellin_sharp(&grid.nodes, &vec![C::new(0.0, 0.0); 64]).unwrap();
        assert!(s.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn nonuniform_rejected() {
        let nodes = vec![1.0, 2.0, 3.0, 4.0];
        let g = vec![C::new(1.0, 0.0); 4];
        assert!(mellin_sharp(&nodes, &g).is_err());
    }

    #[test]
    fn warns_on_undecayed_input() {
        let grid = LogRadialGrid::<f64>::new(1e-2, 1e2, 64).unwrap();
        let g: Vec<C> = grid.nodes.iter().map(|&p| C::new(1.0 / (p * p), 0.0)).collect();
        assert!(mellin_sharp(&grid.nodes, &g).unwrap().endpoint_warning);
    }

    #[test]
    fn inverse_round_trip() {
        let grid = LogRadialGrid::<f64>::new(1e-4, 1e4, 128).unwrap();
        let g: Vec<C> = grid.nodes.iter().map(|&p| C::new(p.powi(2) * (-p).exp() / (1.0 + p.powi(4)), 0.0)).collect();
        let s = mellin_sharp(&grid.nodes, &g).unwrap();
        let back = inverse_mellin_sharp(&grid.nodes, &s).unwrap();
        let scale = g.iter().zip(&grid.nodes).map(|(a, &p)| a.norm() * p * p).fold(0.0, f64::max);
        for ((a, b), &p) in g.iter().zip(&back).zip(&grid.nodes) {
            assert!((a - b).norm() * p * p <= 1e-13 * scale);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn plancherel_against_radial_quadrature(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let s0: f64 = rng.gen_range(0.5..2.0);
            let grid = LogRadialGrid::<f64>::new(1e-6, 1e3, 400).unwrap();
            let g: Vec<C> = grid.nodes.iter().map(|&p| {
                let poly = c[0] + c[1] * p + c[2] * p * p + c[3] / (1.0 + p);
                C::new(poly * (-p * p / s0).exp(), c[1] * (-p).exp())
            }).collect();
            let s = mellin_sharp(&grid.nodes, &g).unwrap();
            let lhs = s.weighted_norm(|_| 1.0);
            let rhs: f64 = grid.nodes.iter().zip(&grid.weights).zip(&g).map(|((&p, &w), v)| w * p * v.norm_sqr()).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.max(1e-300));
        }
    }
}
