//! Brute-force double integrals of the pre-Fourier representations, used as
//! independent checks of the closed forms.

use crate::quadspec::{legendre_p_all, legendre_q_zm1, rule_as};
use crate::Real;

const X_MAX: f64 = 40.0;
const GEOMETRIC_PANELS: usize = 60;

/// `2 ∫_0^{40} cos(kx) f(x) dx`, with geometric panels toward `x = 0` so an
/// integrable logarithmic singularity there is resolved.
fn even_fourier<T: Real>(k: T, f: impl Fn(T) -> T) -> T {
    let rule = rule_as::<T>(16);
    let g = |x: T| (k * x).cos() * f(x);
    let mut acc = T::zero();
    let mut hi = T::one();
    for _ in 0..GEOMETRIC_PANELS {
        let lo = hi / T::lit(2.0);
        acc = acc + rule.integrate_on(lo, hi, g);
        hi = lo;
    }
    let panels = (X_MAX as usize - 1) * (1 + (k.abs() / T::lit(4.0)).to_usize().unwrap_or(0));
    let coarse = rule_as::<T>(32);
    acc = acc + coarse.integrate_panels(T::one(), T::lit(X_MAX), panels, g);
    T::lit(2.0) * acc
}

/// `∫_{-1}^{1} P_l(y) / (cosh x + y/2) dy` by 64-point Gauss–Legendre.
fn off_inner<T: Real>(l: usize, x: T) -> T {
    let rule = rule_as::<T>(64);
    let c = x.cosh();
    rule.integrate(|y| legendre_p_all(l, y)[l] / (c + y / T::lit(2.0)))
}

/// `∫_{-1}^{1} P_l(y) / (cosh x − y) dy = 2 Q_l(cosh x)`, using `cosh x − 1 = 2 sinh²(x/2)`.
fn reg_inner<T: Real>(l: usize, x: T) -> T {
    let s = (x / T::lit(2.0)).sinh();
    let zm1 = T::lit(2.0) * s * s;
    if zm1 <= T::zero() {
        return T::zero();
    }
    T::lit(2.0) * legendre_q_zm1(l, zm1).unwrap_or(T::zero())
}

/// `S_off,l(k) = −(1/π) ∫ dx e^{−ikx} ∫ dy P_l(y)/(cosh x + y/2)`.
pub fn s_off_oracle<T: Real>(l: usize, k: T) -> T {
    -even_fourier(k, |x| off_inner(l, x)) / T::PI()
}

/// `S_reg,l(k) = (γ/2π) ∫ dx e^{−ikx} ∫ dy P_l(y)/(cosh x − y)`.
pub fn s_reg_oracle<T: Real>(l: usize, k: T, gamma: T) -> T {
    gamma * even_fourier(k, |x| reg_inner(l, x)) / (T::lit(2.0) * T::PI())
}

/// `Re S_off,l(k + i)` from the `cosh x`-weighted real-axis integral (`l >= 1`).
pub fn s_off_one_shift_oracle<T: Real>(l: usize, k: T) -> T {
    -even_fourier(k, |x| x.cosh() * off_inner(l, x)) / T::PI()
}

/// `Re S_reg,l(k + i)` from the `cosh x`-weighted real-axis integral (`l >= 1`).
pub fn s_reg_one_shift_oracle<T: Real>(l: usize, k: T, gamma: T) -> T {
    gamma * even_fourier(k, |x| x.cosh() * reg_inner(l, x)) / (T::lit(2.0) * T::PI())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{s_off, s_reg};
    use std::f64::consts::PI;

    #[test]
    fn swave_oracle_values() {
        assert!((s_off_oracle(0, 0.0f64) + 2.0 * PI / 3.0).abs() < 1e-10);
        assert!((s_reg_oracle(0, 0.0f64, 1.0) - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn oracle_agrees_with_closed_forms() {
        for l in 0..=6 {
            for &k in &[0.0f64, 0.5, -1.0, 2.0, -5.0, 10.0] {
                let a = s_off(l, k);
                let b = s_off_oracle(l, k);
                assert!((a - b).abs() < 1e-9, "off l={l} k={k} {a} {b}");
                let a = s_reg(l, k, 1.3);
                let b = s_reg_oracle(l, k, 1.3);
                assert!((a - b).abs() < 1e-9, "reg l={l} k={k} {a} {b}");
            }
        }
    }

    #[test]
    fn oracle_gamma_linearity() {
        let a = s_reg_oracle(2, 0.7f64, 2.4);
        let b = 2.0 * s_reg_oracle(2, 0.7f64, 1.2);
        assert!((a - b).abs() < 1e-14);
    }
}
