use super::{cached_rule, legendre_p_all, spherical_bessel_j_all};
use crate::{Error, Result};

const ORDER: usize = 16;

/// Composite 16-point Gauss–Legendre rule on radial panels, with an exact
/// rule for `∫ sin(pr) g(r) dr` when `g` is a polynomial on every panel.
///
/// The oscillatory rule expands `g` in Legendre polynomials per panel and uses
/// `∫_{-1}^{1} e^{iωx} P_k(x) dx = 2 i^k j_k(ω)`, so its cost does not grow with `p`.
#[derive(Debug, Clone)]
pub struct RadialPanels {
    pub breaks: Vec<f64>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    projector: Vec<Vec<f64>>,
}

impl RadialPanels {
    pub fn new(breaks: Vec<f64>) -> Result<Self> {
        if breaks.len() < 2 || breaks[0] < 0.0 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("panel breaks must be increasing, non-negative, at least two".into()));
        }
        let rule = cached_rule(ORDER);
        let mut nodes = Vec::with_capacity(ORDER * (breaks.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in breaks.windows(2) {
            let (ns, ws) = rule.mapped(w[0], w[1]);
            nodes.extend(ns);
            weights.extend(ws);
        }
        let projector = (0..ORDER)
            .map(|k| {
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| (k as f64 + 0.5) * w * legendre_p_all(k, x)[k])
                    .collect()
            })
            .collect();
        Ok(Self { breaks, nodes, weights, projector })
    }

    /// Panels on `[0, r_max]` with `anchor` as a break: halving towards the
    /// origin, doubling up to `4·anchor`, then uniform of width `anchor/2`.
    pub fn anchored(anchor: f64, r_max: f64) -> Result<Self> {
        if !(anchor > 0.0 && r_max > anchor) {
            return Err(Error::Grid(format!("need 0 < anchor < r_max, got {anchor}, {r_max}")));
        }
        let mut breaks = vec![0.0];
        breaks.extend((1..=40).rev().map(|k| anchor * 0.5f64.powi(k)));
        breaks.push(anchor);
        let mut r = anchor;
        while r < 4.0 * anchor && 2.0 * r < r_max {
            r *= 2.0;
            breaks.push(r);
        }
        while r + 0.5 * anchor < r_max {
            r += 0.5 * anchor;
            breaks.push(r);
        }
        breaks.push(r_max);
        Self::new(breaks)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ g(r) dr` from samples at the nodes.
    pub fn integrate(&self, g: &[f64]) -> f64 {
        g.iter().zip(&self.weights).map(|(a, b)| a * b).sum()
    }

    fn coefficients(&self, g: &[f64]) -> Vec<[f64; ORDER]> {
        g.chunks(ORDER)
            .map(|chunk| {
                let mut c = [0.0; ORDER];
                for (k, ck) in c.iter_mut().enumerate() {
                    *ck = self.projector[k].iter().zip(chunk).map(|(a, b)| a * b).sum();
                }
                c
            })
            .collect()
    }

    /// `∫ sin(pr) g(r) dr` for each requested `p`.
    pub fn sine_integrals(&self, g: &[f64], ps: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.len() {
            return Err(Error::Grid(format!("{} samples for {} panel nodes", g.len(), self.len())));
        }
        let coeffs = self.coefficients(g);
        Ok(ps
            .iter()
            .map(|&p| {
                let mut total = 0.0;
                for (w, c) in self.breaks.windows(2).zip(&coeffs) {
                    let half = 0.5 * (w[1] - w[0]);
                    let centre = 0.5 * (w[1] + w[0]);
                    let js = spherical_bessel_j_all(ORDER - 1, p * half);
                    let mut acc = 0.0;
                    for k in 0..ORDER {
                        acc += c[k] * js[k] * (p * centre + k as f64 * std::f64::consts::FRAC_PI_2).sin();
                    }
                    total += 2.0 * half * acc;
                }
                total
            })
            .collect())
    }
}
