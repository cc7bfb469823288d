use crate::quadspec::{cached_rule, legendre_p_all, legendre_q_zm1};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Diagonal symbol `√(3p²/4 + λ)`.
pub fn kernel_diag(p: f64, lambda: f64) -> f64 {
    (0.75 * p * p + lambda).sqrt()
}

fn check_momenta(p: f64, q: f64) -> Result<()> {
    if p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("kernels need p, q > 0, got {p}, {q}")))
    }
}

/// Sector kernel of the exchange term,
/// `−(2/π) ∫ P_l(y) / (p² + q² + pqy + λ) dy = −(2/π)(−1)^l (2/(pq)) Q_l((p² + q² + λ)/(pq))`.
///
/// `λ = 0` is accepted and gives the scale-invariant kernel.
pub fn kernel_off(l: usize, p: f64, q: f64, lambda: f64) -> Result<f64> {
    check_momenta(p, q)?;
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("kernel_off needs lambda >= 0, got {lambda}")));
    }
    let zm1 = ((p - q) * (p - q) + p * q + lambda) / (p * q);
    let sign = if l % 2 == 0 { -1.0 } else { 1.0 };
    Ok(sign * (2.0 / PI) * (2.0 / (p * q)) * legendre_q_zm1(l, zm1)?)
}

/// Sector kernel of the `γ/|y|` term,
/// `(γ/π) ∫ P_l(y) / (p² + q² − 2pqy) dy = (γ/π)(1/(pq)) Q_l((p² + q²)/(2pq))`.
pub fn kernel_reg2(l: usize, p: f64, q: f64, gamma: f64) -> Result<f64> {
    check_momenta(p, q)?;
    if p == q {
        return Err(Error::Precondition("kernel_reg2 is singular at p = q; use the diagonal cell integral".into()));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let zm1 = (p - q) * (p - q) / (2.0 * p * q);
    Ok(gamma / PI / (p * q) * legendre_q_zm1(l, zm1)?)
}

/// `∫_0^c e^{σ2t} Q_l(cosh t) dt` with the logarithmic singularity at `t = 0`
/// integrated analytically.
fn half_cell(l: usize, c: f64, sigma: f64) -> f64 {
    let rule = cached_rule(24);
    let g = |t: f64| (sigma * 2.0 * t).exp() * legendre_p_all(l, t.cosh())[l];
    let g0 = 1.0;
    let log_part = g0 * c * (1.0 - c.ln())
        + rule.integrate_on(0.0, 1.0, |u| {
            let t = c * u * u * u;
            if t == 0.0 {
                0.0
            } else {
                -t.ln() * (g(t) - g0) * 3.0 * c * u * u
            }
        });
    let regular = rule.integrate_on(0.0, c, |t| {
        let zm1 = 2.0 * (0.5 * t).sinh().powi(2);
        let q = legendre_q_zm1(l, zm1).expect("positive argument");
        (sigma * 2.0 * t).exp() * (q + t.ln() * legendre_p_all(l, t.cosh())[l])
    });
    log_part + regular
}

/// Contribution of the log cell `[ln p − h_lo, ln p + h_hi]` around `q = p`
/// to the `γ/|y|` sector kernel, `(γ/π) p ∫ e^{2t} Q_l(cosh t) dt`.
pub fn reg2_cell(l: usize, p: f64, h_lo: f64, h_hi: f64, gamma: f64) -> f64 {
    let mut s = 0.0;
    if h_hi > 0.0 {
        s += half_cell(l, h_hi, 1.0);
    }
    if h_lo > 0.0 {
        s += half_cell(l, h_lo, -1.0);
    }
    gamma / PI * p * s
}

/// Diagonal entry of the `γ/|y|` kernel in operator coordinates on a log grid
/// of step `h`: `(γ/π) h p (ln(4π/h) − H_l)`, with `H_l` the harmonic number.
///
/// With this weight the punctured trapezoid sum over the logarithmic
/// singularity `Q_l(cosh t) ≈ ln(2/|t|) − H_l` is accurate to `O(h³)`, where
/// the cell integral [`reg2_cell`] alone leaves an `O(h)` defect from the
/// neighbouring cells.
pub fn reg2_diagonal(l: usize, p: f64, h: f64, gamma: f64) -> f64 {
    let harmonic: f64 = (1..=l).map(|k| 1.0 / k as f64).sum();
    gamma / PI * h * p * ((4.0 * PI / h).ln() - harmonic)
}

/// Composite Gauss–Legendre evaluation of `∫_{-1}^{1} f(y) dy` with panels
/// graded towards `y = 1`, used as an independent oracle for the closed forms.
pub fn angular_quadrature<F: Fn(f64) -> f64>(f: F) -> f64 {
    let rule = cached_rule(32);
    let mut total = rule.integrate_on(-1.0, 0.0, &f);
    let mut a = 0.0;
    for k in 1..=40 {
        let b = 1.0 - 0.5f64.powi(k);
        total += rule.integrate_on(a, b, &f);
        a = b;
    }
    total + rule.integrate_on(a, 1.0, &f)
}

/// Direct angular quadrature of the exchange kernel.
pub fn kernel_off_by_quadrature(l: usize, p: f64, q: f64, lambda: f64) -> f64 {
    -2.0 / PI * angular_quadrature(|y| legendre_p_all(l, y)[l] / (p * p + q * q + p * q * y + lambda))
}

/// Direct angular quadrature of the `γ/|y|` kernel.
pub fn kernel_reg2_by_quadrature(l: usize, p: f64, q: f64, gamma: f64) -> f64 {
    gamma / PI * angular_quadrature(|y| legendre_p_all(l, y)[l] / (p * p + q * q - 2.0 * p * q * y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn diag_examples() {
        assert_eq!(kernel_diag(0.0, 4.0), 2.0);
        assert!((kernel_diag(2.0, 0.0) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(kernel_diag(2.0, 1.0), 2.0);
    }

    #[test]
    fn off_example() {
        let v = kernel_off(0, 1.0, 1.0, 1.0).unwrap();
        assert!((v + 2.0 / PI * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn reg2_example() {
        let gamma = 1.7;
        let v = kernel_reg2(0, 1.0, 2.0, gamma).unwrap();
        assert!((v - gamma / (2.0 * PI) * 3f64.ln()).abs() < 1e-14);
        assert_eq!(kernel_reg2(3, 1.0, 2.0, 0.0).unwrap(), 0.0);
        assert!(matches!(kernel_reg2(0, 1.0, 1.0, 1.0), Err(Error::Precondition(_))));
        assert!(kernel_off(0, 0.0, 1.0, 1.0).is_err());
    }

    fn cell_oracle(l: usize, c: f64, sigma: f64) -> f64 {
        let rule = cached_rule(32);
        let mut total = 0.0;
        let mut hi = c;
        for _ in 0..80 {
            let lo = 0.5 * hi;
            total += rule.integrate_on(lo, hi, |t| {
                (sigma * 2.0 * t).exp() * legendre_q_zm1(l, 2.0 * (0.5 * t).sinh().powi(2)).unwrap()
            });
            hi = lo;
        }
        total
    }

    #[test]
    fn singular_cell_against_graded_quadrature() {
        for l in 0..=6 {
            for &c in &[1e-3, 0.02, 0.3] {
                for &sigma in &[1.0, -1.0] {
                    let a = half_cell(l, c, sigma);
                    let b = cell_oracle(l, c, sigma);
                    assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "l={l} c={c} {a} {b}");
                }
            }
        }
        let total = reg2_cell(2, 3.0, 0.1, 0.05, 2.0);
        let expected = 2.0 / PI * 3.0 * (cell_oracle(2, 0.05, 1.0) + cell_oracle(2, 0.1, -1.0));
        assert!((total - expected).abs() < 1e-12 * expected);
    }

    fn punctured_row_sum(l: usize, h: f64, diag: f64) -> f64 {
        // Σ_j entry_j φ(t_j) / ((γ/π) p) for φ(t) = e^{-t²}, unit γ and p
        let mut s = diag * PI;
        for j in 1..400 {
            let t = j as f64 * h;
            let q = legendre_q_zm1(l, 2.0 * (0.5 * t).sinh().powi(2)).unwrap();
            s += h * q * (-t * t).exp() * ((0.5 * t).exp() + (-0.5 * t).exp());
        }
        s
    }

    fn row_oracle(l: usize) -> f64 {
        let f = |t: f64| (-t * t).exp() * 2.0 * (0.5 * t).cosh();
        let rule = cached_rule(32);
        let mut total = rule.integrate_panels(1.0, 12.0, 40, |t| f(t) * legendre_q_zm1(l, 2.0 * (0.5 * t).sinh().powi(2)).unwrap());
        let mut hi = 1.0;
        for _ in 0..80 {
            let lo = 0.5 * hi;
            total += rule.integrate_on(lo, hi, |t| f(t) * legendre_q_zm1(l, 2.0 * (0.5 * t).sinh().powi(2)).unwrap());
            hi = lo;
        }
        total
    }

    #[test]
    fn corrected_diagonal_converges_fast() {
        for l in [0, 1, 4] {
            let exact = row_oracle(l);
            let err = |h: f64| (punctured_row_sum(l, h, reg2_diagonal(l, 1.0, h, 1.0)) - exact).abs();
            let cell_err = |h: f64| (punctured_row_sum(l, h, reg2_cell(l, 1.0, 0.5 * h, 0.5 * h, 1.0)) - exact).abs();
            assert!(err(0.05) < 1e-4, "l={l} {}", err(0.05));
            assert!(err(0.05) / err(0.025) > 6.0, "l={l} {} {}", err(0.05), err(0.025));
            assert!(cell_err(0.05) > 10.0 * err(0.05));
        }
    }

    proptest! {
        #[test]
        fn closed_forms_match_quadrature(l in 0usize..=6, p in 0.05f64..20.0, r in 0.05f64..20.0, lambda in 0.0f64..10.0) {
            prop_assume!((p - r).abs() > 1e-3 * p);
            let a = kernel_off(l, p, r, lambda).unwrap();
            let b = kernel_off_by_quadrature(l, p, r, lambda);
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()), "off l={} {} {}", l, a, b);
            let c = kernel_reg2(l, p, r, 1.3).unwrap();
            let d = kernel_reg2_by_quadrature(l, p, r, 1.3);
            prop_assert!((c - d).abs() < 1e-9 * (1.0 + c.abs()), "reg l={} {} {}", l, c, d);
        }

        #[test]
        fn symmetric_and_signed(l in 0usize..=8, p in 0.01f64..100.0, r in 0.01f64..100.0, lambda in 0.0f64..10.0) {
            prop_assume!(p != r);
            let a = kernel_off(l, p, r, lambda).unwrap();
            prop_assert_eq!(a, kernel_off(l, r, p, lambda).unwrap());
            if l % 2 == 0 { prop_assert!(a <= 0.0) } else { prop_assert!(a >= 0.0) }
            let c = kernel_reg2(l, p, r, 2.0).unwrap();
            prop_assert_eq!(c, kernel_reg2(l, r, p, 2.0).unwrap());
            prop_assert!(c > 0.0);
        }
    }
}
