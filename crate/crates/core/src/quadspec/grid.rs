use crate::{Error, Real, Result};

/// Geometric momentum grid with trapezoid-in-log weights that carry the
/// `p^2` volume factor, so `Σ w_j f(p_j) ≈ ∫_0^∞ f(p) p^2 dp`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRadialGrid<T> {
    pub p_min: T,
    pub p_max: T,
    pub n: usize,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> LogRadialGrid<T> {
    pub fn new(p_min: T, p_max: T, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Grid(format!("need at least 2 nodes, got {n}")));
        }
        if !(p_min > T::zero() && p_max > p_min && p_max.is_finite()) {
            return Err(Error::Grid(format!("need 0 < p_min < p_max, got [{p_min:?}, {p_max:?}]")));
        }
        let lmin = p_min.ln();
        let h = (p_max.ln() - lmin) / T::idx(n - 1);
        let nodes: Vec<T> = (0..n)
            .map(|j| {
                if j == 0 {
                    p_min
                } else if j == n - 1 {
                    p_max
                } else {
                    (lmin + h * T::idx(j)).exp()
                }
            })
            .collect();
        let weights = nodes
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let end = if j == 0 || j == n - 1 { T::lit(0.5) } else { T::one() };
                end * h * p * p * p
            })
            .collect();
        Ok(Self { p_min, p_max, n, nodes, weights })
    }

    /// Default discretization `[1e-4, 1e4]` with 512 nodes.
    pub fn default_grid() -> Self {
        Self::new(T::lit(1e-4), T::lit(1e4), 512).expect("valid default grid")
    }

    /// Grid of `n` nodes centred (in log) at `centre` with the given density.
    pub fn centred(centre: T, n: usize, nodes_per_decade: usize) -> Result<Self> {
        if nodes_per_decade == 0 {
            return Err(Error::Grid("node density must be positive".into()));
        }
        let half_decades = T::idx(n.saturating_sub(1)) / T::idx(nodes_per_decade) / T::lit(2.0);
        let span = T::lit(10.0).powf(half_decades);
        Self::new(centre / span, centre * span, n)
    }

    /// Uniform step in `ln p`.
    pub fn log_step(&self) -> T {
        (self.p_max.ln() - self.p_min.ln()) / T::idx(self.n - 1)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `Σ w_j f(p_j)`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&p, &w)| acc + w * f(p))
    }

    /// Reciprocal grid `r_i = 1 / p_{n-1-i}` used for position-space samples.
    pub fn reciprocal(&self) -> Self {
        Self::new(T::one() / self.p_max, T::one() / self.p_min, self.n).expect("reciprocal of a valid grid")
    }

    /// Same range with `2n - 1` nodes, so every old node is kept.
    pub fn refined(&self) -> Self {
        Self::new(self.p_min, self.p_max, 2 * self.n - 1).expect("refinement of a valid grid")
    }
}
