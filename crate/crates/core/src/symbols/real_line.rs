use super::ratio::{cosh_ratio, panels_for, sinh_over_k_cosh, sinh_ratio, tanh_over_k};
use crate::quadspec::{legendre_p_all, rule_as};
use crate::Real;

pub(crate) const ORDER: usize = 48;

/// `∫_0^{upper} P_l(scale · sin φ) · ratio(φ) dφ`, with the parity-matched
/// cosh or sinh ratio against `cosh(kπ/2)` or `sinh(kπ/2)`.
pub(crate) fn angular_integral<T: Real>(l: usize, k: T, upper: T, scale: T, extra: impl Fn(T) -> T) -> T {
    let rule = rule_as::<T>(ORDER);
    let half_pi = T::FRAC_PI_2();
    let even = l % 2 == 0;
    rule.integrate_panels(T::zero(), upper, panels_for(k, upper), |phi| {
        let p = legendre_p_all(l, scale * phi.sin())[l];
        let r = if even { cosh_ratio(phi, half_pi, k) } else { sinh_ratio(phi, half_pi, k) };
        p * r * extra(phi)
    })
}

/// Off-diagonal sector symbol `S_off,l(k)`: non-positive for even `l`,
/// non-negative for odd `l`, even in `k`.
pub fn s_off<T: Real>(l: usize, k: T) -> T {
    let v = T::lit(4.0) * angular_integral(l, k, T::PI() / T::lit(6.0), T::lit(2.0), |_| T::one());
    if l % 2 == 0 {
        -v
    } else {
        v
    }
}

/// Regularizing sector symbol `S_reg,l(k; γ)`, non-negative and linear in `γ`.
pub fn s_reg<T: Real>(l: usize, k: T, gamma: T) -> T {
    gamma * angular_integral(l, k, T::FRAC_PI_2(), T::one(), |_| T::one())
}

/// Full sector symbol `√3/2 + S_off,l + S_reg,l`.
pub fn s_total<T: Real>(l: usize, k: T, gamma: T) -> T {
    T::lit(3.0).sqrt() / T::lit(2.0) + s_off(l, k) + s_reg(l, k, gamma)
}

/// Positivity function of the s-wave lower bound,
/// `f(k) = s + (2/√3) (γ tanh(kπ/2)/k − 4 sinh(kπ/6)/(k cosh(kπ/2)))`.
pub fn theta_f<T: Real>(k: T, s: T, gamma: T) -> T {
    let half_pi = T::FRAC_PI_2();
    let sixth_pi = T::PI() / T::lit(6.0);
    s + T::lit(2.0) / T::lit(3.0).sqrt()
        * (gamma * tanh_over_k(half_pi, k) - T::lit(4.0) * sinh_over_k_cosh(sixth_pi, half_pi, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::critical_constants;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn swave_values() {
        assert!((s_off(0, 0.0f64) + 2.0 * PI / 3.0).abs() < 1e-14);
        for &k in &[1e-5, 0.3, 1.0, 4.0, 12.0] {
            let closed = -4.0 * (k * PI / 6.0).sinh() / (k * (k * PI / 2.0).cosh());
            assert!((s_off(0, k) - closed).abs() < 1e-13, "k={k}");
            let reg = 1.7 * (k * PI / 2.0).tanh() / k;
            assert!((s_reg(0, k, 1.7) - reg).abs() < 1e-13, "k={k}");
        }
        assert!((s_reg(0, 0.0f64, 2.0) - PI).abs() < 1e-14);
    }

    #[test]
    fn total_at_threshold_vanishes() {
        let g = critical_constants().gamma_c;
        assert!(s_total(0, 0.0f64, g).abs() < 1e-12);
        let v = s_total(0, 0.0, 1.0);
        assert!((v - (3f64.sqrt() / 2.0 - 2.0 * PI / 3.0 + PI / 2.0)).abs() < 1e-13 && v > 0.0);
    }

    #[test]
    fn odd_sector_decays_monotonically() {
        let mut prev = s_off(1, 0.0f64);
        for i in 1..60 {
            let v = s_off(1, i as f64 * 0.5);
            assert!(v <= prev && v >= 0.0);
            prev = v;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn theta_f_limit_and_sign() {
        let s = 0.4;
        let g = 1.1;
        let f0 = s + (g * PI - 4.0 * PI / 3.0) / 3f64.sqrt();
        assert!((theta_f(0.0, s, g) - f0).abs() < 1e-14);
        for i in 0..200 {
            assert!(theta_f(i as f64 * 0.2, 0.5, 1.4) > 0.0);
        }
    }

    #[test]
    fn single_precision_symbols() {
        let v = s_off(0, 1.0f32);
        let w = s_off(0, 1.0f64);
        assert!(((v as f64) - w).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn even_in_k(l in 0usize..9, k in 0.0f64..20.0, g in 0.0f64..5.0) {
            prop_assert!((s_off(l, k) - s_off(l, -k)).abs() < 1e-12);
            prop_assert!((s_reg(l, k, g) - s_reg(l, -k, g)).abs() < 1e-12);
        }

        #[test]
        fn sign_pattern(l in 0usize..9, k in -20.0f64..20.0) {
            let v = s_off(l, k);
            if l % 2 == 0 { prop_assert!(v <= 0.0) } else { prop_assert!(v >= 0.0) }
            prop_assert!(s_reg(l, k, 1.0) >= 0.0);
        }

        #[test]
        fn reg_linear_in_gamma(l in 0usize..7, k in -10.0f64..10.0, g in 0.0f64..4.0) {
            let a = s_reg(l, k, 2.0 * g);
            let b = 2.0 * s_reg(l, k, g);
            prop_assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
        }

        #[test]
        fn theta_f_matches_symbols(k in -15.0f64..15.0, s in 0.01f64..0.99, g in 0.0f64..3.0) {
            let direct = s + 2.0 / 3f64.sqrt() * (s_reg(0, k, g) + s_off(0, k));
            prop_assert!((theta_f(k, s, g) - direct).abs() < 1e-12);
        }
    }
}
