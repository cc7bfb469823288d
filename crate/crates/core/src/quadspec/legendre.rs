use crate::{Error, Real, Result};

/// Legendre polynomial `P_l(y)` for `|y| <= 1`.
pub fn legendre_p<T: Real>(l: usize, y: T) -> Result<T> {
    if !(y.abs() <= T::one()) {
        return Err(Error::Domain(format!("legendre_p needs |y| <= 1, got {y:?}")));
    }
    Ok(p_recurrence(l, y))
}

/// `P_0(y), ..., P_lmax(y)` for any real `y`.
pub fn legendre_p_all<T: Real>(lmax: usize, y: T) -> Vec<T> {
    let mut out = Vec::with_capacity(lmax + 1);
    out.push(T::one());
    if lmax >= 1 {
        out.push(y);
    }
    for n in 1..lmax {
        let nf = T::idx(n);
        let next = ((nf + nf + T::one()) * y * out[n] - nf * out[n - 1]) / (nf + T::one());
        out.push(next);
    }
    out
}

fn p_recurrence<T: Real>(l: usize, y: T) -> T {
    let mut p0 = T::one();
    if l == 0 {
        return p0;
    }
    let mut p1 = y;
    for n in 1..l {
        let nf = T::idx(n);
        let p2 = ((nf + nf + T::one()) * y * p1 - nf * p0) / (nf + T::one());
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Legendre function of the second kind `Q_l(z)` for `z > 1`.
pub fn legendre_q<T: Real>(l: usize, z: T) -> Result<T> {
    if !(z > T::one()) {
        return Err(Error::Domain(format!("legendre_q needs z > 1, got {z:?}")));
    }
    Ok(q_from_zm1(l, z - T::one()))
}

/// `Q_l(1 + zm1)`, accurate when `zm1` is small and known more precisely than `z`.
pub fn legendre_q_zm1<T: Real>(l: usize, zm1: T) -> Result<T> {
    if !(zm1 > T::zero()) {
        return Err(Error::Domain(format!("legendre_q_zm1 needs z - 1 > 0, got {zm1:?}")));
    }
    Ok(q_from_zm1(l, zm1))
}

/// `Q_0, ..., Q_lmax` at `z = 1 + zm1`.
pub fn legendre_q_all_zm1<T: Real>(lmax: usize, zm1: T) -> Result<Vec<T>> {
    if !(zm1 > T::zero()) {
        return Err(Error::Domain(format!("legendre_q_all_zm1 needs z - 1 > 0, got {zm1:?}")));
    }
    if digits_lost(lmax, zm1) < T::lit(MAX_DIGITS_LOST) {
        Ok(q_forward(lmax, zm1))
    } else {
        Ok(q_miller(lmax, zm1))
    }
}

fn q0<T: Real>(zm1: T) -> T {
    T::lit(0.5) * (T::lit(2.0) / zm1).ln_1p()
}

/// Forward recurrence is used only while it loses fewer decimal digits than this.
const MAX_DIGITS_LOST: f64 = 3.0;

/// Decimal digits the forward recurrence loses at order `l`: the dominant
/// solution grows like `(z + sqrt(z^2 - 1))^l` while `Q_l` decays at that rate.
fn digits_lost<T: Real>(l: usize, zm1: T) -> T {
    let zeta = T::one() + zm1 + (zm1 * (zm1 + T::lit(2.0))).sqrt();
    T::lit(2.0) * T::idx(l) * zeta.log10()
}

fn q_from_zm1<T: Real>(l: usize, zm1: T) -> T {
    if l == 0 {
        return q0(zm1);
    }
    let v = if digits_lost(l, zm1) < T::lit(MAX_DIGITS_LOST) {
        q_forward(l, zm1)
    } else {
        q_miller(l, zm1)
    };
    v[l]
}

fn q_forward<T: Real>(lmax: usize, zm1: T) -> Vec<T> {
    let z = T::one() + zm1;
    let mut out = Vec::with_capacity(lmax + 1);
    let a = q0(zm1);
    out.push(a);
    if lmax >= 1 {
        out.push(z * a - T::one());
    }
    for n in 1..lmax {
        let nf = T::idx(n);
        let next = ((nf + nf + T::one()) * z * out[n] - nf * out[n - 1]) / (nf + T::one());
        out.push(next);
    }
    out
}

/// Backward recurrence started far above `lmax`, normalized by the exact `Q_0`.
fn q_miller<T: Real>(lmax: usize, zm1: T) -> Vec<T> {
    let z = T::one() + zm1;
    let zeta = T::one() + zm1 + (zm1 * (zm1 + T::lit(2.0))).sqrt();
    let extra = (T::lit(40.0) / zeta.ln()).to_usize().unwrap_or(100_000).min(100_000);
    let top = lmax + extra + 10;
    let big = T::max_value().sqrt();
    let mut out = vec![T::zero(); lmax + 1];
    let mut upper = T::zero();
    let mut cur = T::min_positive_value().sqrt();
    for n in (1..=top).rev() {
        if n <= lmax {
            out[n] = cur;
        }
        let nf = T::idx(n);
        let lower = ((nf + nf + T::one()) * z * cur - (nf + T::one()) * upper) / nf;
        upper = cur;
        cur = lower;
        if cur.abs() > big {
            cur = cur / big;
            upper = upper / big;
            for v in out.iter_mut() {
                *v = *v / big;
            }
        }
    }
    out[0] = cur;
    let scale = q0(zm1) / cur;
    for v in out.iter_mut() {
        *v = *v * scale;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadspec::cached_rule;
    use proptest::prelude::*;

    fn q_oracle(l: usize, z: f64) -> f64 {
        // 0.5 * integral of P_l(y)/(z - y); panels concentrate near y = 1.
        let r = cached_rule(64);
        let breaks = [-1.0, 0.0, 0.8, 0.95, 0.99, 0.999, 1.0];
        let mut s = 0.0;
        for w in breaks.windows(2) {
            s += r.integrate_on(w[0], w[1], |y| p_recurrence(l, y) / (z - y));
        }
        0.5 * s
    }

    #[test]
    fn p_examples() {
        assert_eq!(legendre_p(0, 0.3).unwrap(), 1.0);
        assert!((legendre_p(2, 1.0f64).unwrap() - 1.0).abs() < 1e-15);
        assert!((legendre_p(2, 0.5f64).unwrap() + 0.125).abs() < 1e-15);
        assert!(legendre_p(3, 1.5).is_err());
        assert!(legendre_p(3, f64::NAN).is_err());
    }

    #[test]
    fn p_all_matches_single() {
        let v = legendre_p_all(8, 0.37f64);
        for (l, &x) in v.iter().enumerate() {
            assert!((x - legendre_p(l, 0.37f64).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn q_examples() {
        assert!((legendre_q(0, 3.0).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-15);
        let q1 = 3f64.ln() - 1.0;
        assert!((legendre_q(1, 2.0).unwrap() - q1).abs() < 1e-14);
        assert!((legendre_q(2, 1.5).unwrap() - q_oracle(2, 1.5)).abs() < 1e-10);
        assert!(legendre_q(0, 1.0).is_err());
        assert!(legendre_q_zm1(1, 0.0).is_err());
    }

    #[test]
    fn q_large_argument_asymptotics() {
        // Q_l(z) ~ l! / (2l+1)!! z^{-l-1}
        let z = 1e6f64;
        let mut df = 1.0;
        let mut fact = 1.0;
        for l in 0..10usize {
            if l > 0 {
                fact *= l as f64;
                df *= (2 * l + 1) as f64;
            }
            let q = legendre_q(l, z).unwrap();
            let lead = fact / df * z.powi(-(l as i32) - 1);
            assert!((q / lead - 1.0).abs() < 1e-9, "l={l} q={q} lead={lead}");
        }
    }

    #[test]
    fn q_all_consistent() {
        for zm1 in [1e-6f64, 0.01, 0.5, 3.0, 49.0, 1e5] {
            let all = legendre_q_all_zm1(12, zm1).unwrap();
            for (l, &v) in all.iter().enumerate() {
                let s = legendre_q_zm1(l, zm1).unwrap();
                assert!((v - s).abs() <= 1e-11 * s.abs(), "zm1={zm1} l={l}");
            }
        }
    }

    #[test]
    fn q_single_precision() {
        let v = legendre_q(3, 4.0f32).unwrap();
        let r = legendre_q(3, 4.0f64).unwrap();
        assert!(((v as f64) / r - 1.0).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn q_matches_quadrature(l in 0usize..=8, z in 1.01f64..50.0) {
            let v = legendre_q(l, z).unwrap();
            let o = q_oracle(l, z);
            prop_assert!((v - o).abs() < 1e-9, "l={} z={} v={} o={}", l, z, v, o);
        }

        #[test]
        fn q_positive_and_decreasing_in_l(z in 1.001f64..100.0) {
            let all = legendre_q_all_zm1(10, z - 1.0).unwrap();
            for w in all.windows(2) {
                prop_assert!(w[0] > 0.0 && w[1] > 0.0 && w[1] < w[0]);
            }
        }
    }
}
