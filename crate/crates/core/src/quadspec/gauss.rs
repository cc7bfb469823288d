use crate::{Error, Real, Result};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("quadrature order must be positive".into()));
        }
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let m = (n + 1) / 2;
        let nf = n as f64;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_{-1}^{1} f(y) dy`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// `∫_a^b f(x) dx` with the rule mapped affinely.
    pub fn integrate_on<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (b + a) / T::lit(2.0);
        half * self.integrate(|y| f(mid + half * y))
    }

    /// `∫_a^b f` split into `panels` equal sub-intervals.
    pub fn integrate_panels<F: FnMut(T) -> T>(&self, a: T, b: T, panels: usize, mut f: F) -> T {
        let panels = panels.max(1);
        let step = (b - a) / T::idx(panels);
        (0..panels).fold(T::zero(), |acc, i| {
            let lo = a + step * T::idx(i);
            acc + self.integrate_on(lo, lo + step, &mut f)
        })
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> (Vec<T>, Vec<T>) {
        let half = (b - a) / T::lit(2.0);
        let mid = (b + a) / T::lit(2.0);
        let xs = self.nodes.iter().map(|&y| mid + half * y).collect();
        let ws = self.weights.iter().map(|&w| half * w).collect();
        (xs, ws)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared double-precision rule of order `n`, built once per process.
pub fn cached_rule(n: usize) -> &'static QuadratureRule<f64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static QuadratureRule<f64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(n).or_insert_with(|| {
        let rule = QuadratureRule::gauss_legendre(n.max(1)).expect("positive order");
        Box::leak(Box::new(rule))
    })
}

/// Cached rule of order `n` converted to `T`.
pub fn rule_as<T: Real>(n: usize) -> QuadratureRule<T> {
    let r = cached_rule(n);
    QuadratureRule {
        nodes: r.nodes.iter().map(|&x| T::lit(x)).collect(),
        weights: r.weights.iter().map(|&w| T::lit(w)).collect(),
    }
}
