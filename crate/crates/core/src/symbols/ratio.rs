use crate::Real;

const TAYLOR_CUTOFF: f64 = 1e-4;

/// `cosh(k a) / cosh(k b)` for `|a| <= b`, without overflow.
pub(crate) fn cosh_ratio<T: Real>(a: T, b: T, k: T) -> T {
    let kk = k.abs();
    if kk < T::lit(TAYLOR_CUTOFF) {
        return T::one() + kk * kk * (a * a - b * b) / T::lit(2.0);
    }
    let aa = a.abs();
    let two = T::lit(2.0);
    (kk * (aa - b)).exp() * (T::one() + (-two * kk * aa).exp()) / (T::one() + (-two * kk * b).exp())
}

/// `sinh(k a) / sinh(k b)` for `|a| <= b`, even in `k`, with the `k -> 0` limit.
pub(crate) fn sinh_ratio<T: Real>(a: T, b: T, k: T) -> T {
    let kk = k.abs();
    if kk < T::lit(TAYLOR_CUTOFF) {
        return a / b * (T::one() + kk * kk * (a * a - b * b) / T::lit(6.0));
    }
    let aa = a.abs();
    let two = T::lit(2.0);
    let v = (kk * (aa - b)).exp() * (-(-two * kk * aa).exp_m1()) / (-(-two * kk * b).exp_m1());
    if a < T::zero() {
        -v
    } else {
        v
    }
}

/// `tanh(k b) / k`, with its limit `b` at `k = 0`.
pub(crate) fn tanh_over_k<T: Real>(b: T, k: T) -> T {
    let kk = k.abs();
    if kk < T::lit(TAYLOR_CUTOFF) {
        return b * (T::one() - kk * kk * b * b / T::lit(3.0));
    }
    (kk * b).tanh() / kk
}

/// `sinh(k a) / (k cosh(k b))`, with its limit `a` at `k = 0`.
pub(crate) fn sinh_over_k_cosh<T: Real>(a: T, b: T, k: T) -> T {
    let kk = k.abs();
    if kk < T::lit(TAYLOR_CUTOFF) {
        return a * (T::one() + kk * kk * (a * a / T::lit(6.0) - b * b / T::lit(2.0)));
    }
    let two = T::lit(2.0);
    (kk * (a - b)).exp() * (-(-two * kk * a).exp_m1()) / (two * kk) * two / (T::one() + (-two * kk * b).exp())
}

/// Number of Gauss panels that keeps `exp(k x)` well resolved over `len`.
pub(crate) fn panels_for<T: Real>(k: T, len: T) -> usize {
    1 + (k.abs() * len / T::lit(16.0)).to_usize().unwrap_or(0).min(1000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ratios_match_direct(a in -1.5f64..1.5, k in -30.0f64..30.0) {
            let b = 1.6;
            let c = cosh_ratio(a, b, k);
            let s = sinh_ratio(a, b, k);
            let cd = (k * a).cosh() / (k * b).cosh();
            prop_assert!((c - cd).abs() <= 1e-13 * cd.abs().max(1e-300));
            if k.abs() > 1e-3 {
                let sd = (k * a).sinh() / (k * b).sinh();
                prop_assert!((s - sd).abs() <= 1e-12 * sd.abs().max(1e-300) + 1e-300);
                let t = tanh_over_k(b, k);
                prop_assert!((t - (k * b).tanh() / k).abs() < 1e-14);
                let q = sinh_over_k_cosh(a.abs(), b, k);
                let qd = (k * a.abs()).sinh() / (k * (k * b).cosh());
                prop_assert!((q - qd).abs() <= 1e-12 * qd.abs().max(1e-300) + 1e-300);
            }
        }

        #[test]
        fn taylor_branch_is_continuous(a in 0.0f64..1.5) {
            let b = 1.6;
            let lo = 0.99e-4;
            let hi = 1.01e-4;
            prop_assert!((sinh_ratio(a, b, lo) - sinh_ratio(a, b, hi)).abs() < 1e-9);
            prop_assert!((cosh_ratio(a, b, lo) - cosh_ratio(a, b, hi)).abs() < 1e-9);
            prop_assert!((sinh_over_k_cosh(a, b, lo) - sinh_over_k_cosh(a, b, hi)).abs() < 1e-9);
        }
    }
}
