use crate::Real;

/// Closed-form thresholds and bounds of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalConstants<T> {
    /// Coercivity threshold `(√3/π)(4π/(3√3) − 1)`.
    pub gamma_c: T,
    /// Lower bound `B` on `−S_off,2`.
    pub bound_b: T,
    /// Threshold `7√3/4 − 2` for `H^1` regularity of charges.
    pub gamma_c_star: T,
    /// `d = 8/(√3π) − 4/3`, bounding `Re S_off,l(k+i)` for even `l`.
    pub d_const: T,
}

pub fn critical_constants<T: Real>() -> CriticalConstants<T> {
    let pi = T::PI();
    let s3 = T::lit(3.0).sqrt();
    let gamma_c = s3 / pi * (T::lit(4.0) * pi / (T::lit(3.0) * s3) - T::one());
    let bound_b = T::lit(50.0) * pi / T::lit(27.0) - T::lit(10.0) / T::lit(3.0) * s3 + T::lit(11.0).sqrt() / T::lit(9.0)
        - T::lit(10.0) / T::lit(9.0) * (T::one() / T::lit(12.0).sqrt()).asin();
    let gamma_c_star = T::lit(7.0) * s3 / T::lit(4.0) - T::lit(2.0);
    let d_const = T::lit(8.0) / (s3 * pi) - T::lit(4.0) / T::lit(3.0);
    CriticalConstants { gamma_c, bound_b, gamma_c_star, d_const }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{s_off, scan_min, SymbolKind};

    fn round3(x: f64) -> f64 {
        (x * 1000.0).round() / 1000.0
    }

    #[test]
    fn printed_values() {
        let c = critical_constants::<f64>();
        assert_eq!(round3(c.gamma_c), 0.782);
        assert_eq!(round3(c.bound_b), 0.087);
        assert_eq!(round3(c.gamma_c_star), 1.031);
        assert!(c.d_const > 0.0 && c.d_const < 1.0);
        let f = critical_constants::<f32>();
        assert!((f.gamma_c as f64 - c.gamma_c).abs() < 1e-6);
    }

    #[test]
    fn even_off_symbols_stay_above_minus_b() {
        // the bound is not sharp: min_k S_off,2 is about -0.040
        let c = critical_constants::<f64>();
        let (_, m) = scan_min(SymbolKind::Off, 2, 0.0, 40.0, 1024).unwrap();
        assert!(m >= -c.bound_b && m < 0.0, "min={m}");
        for l in (2..=8).step_by(2) {
            for i in 0..64 {
                let k = i as f64 * 0.3;
                assert!(s_off(l, k) >= s_off(2, k) - 1e-14);
            }
        }
    }
}
