use crate::{Error, Real, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Modified Bessel function `K_0(x)`.
pub fn bessel_k0<T: Real>(x: T) -> Result<T> {
    check(x)?;
    Ok(if x <= T::lit(2.0) { series_k0k1(x).0 } else { integral_kn(x, 0) })
}

/// Modified Bessel function `K_1(x)`.
pub fn bessel_k1<T: Real>(x: T) -> Result<T> {
    check(x)?;
    Ok(if x <= T::lit(2.0) { series_k0k1(x).1 } else { integral_kn(x, 1) })
}

/// Modified Bessel function `K_2(x)`, from `K_2 = K_0 + 2 K_1 / x`.
pub fn bessel_k2<T: Real>(x: T) -> Result<T> {
    check(x)?;
    if x <= T::lit(2.0) {
        let (k0, k1) = series_k0k1(x);
        Ok(k0 + T::lit(2.0) * k1 / x)
    } else {
        Ok(integral_kn(x, 0) + T::lit(2.0) * integral_kn(x, 1) / x)
    }
}

/// Spherical Bessel functions `j_0(x), ..., j_kmax(x)` for `x >= 0`.
pub fn spherical_bessel_j_all<T: Real>(kmax: usize, x: T) -> Vec<T> {
    let mut out = vec![T::zero(); kmax + 1];
    let ax = x.abs();
    if ax < T::lit(1e-3) {
        let mut dfact = T::one();
        for (k, o) in out.iter_mut().enumerate() {
            let kf = T::idx(k);
            if k > 0 {
                dfact = dfact * (T::lit(2.0) * kf + T::one());
            }
            let x2 = ax * ax;
            let series = T::one() - x2 / (T::lit(2.0) * (T::lit(2.0) * kf + T::lit(3.0)))
                + x2 * x2 / (T::lit(8.0) * (T::lit(2.0) * kf + T::lit(3.0)) * (T::lit(2.0) * kf + T::lit(5.0)));
            *o = ax.powi(k as i32) / dfact * series;
        }
        return out;
    }
    let (s, c) = (ax.sin(), ax.cos());
    let j0 = s / ax;
    if ax > T::idx(kmax) {
        out[0] = j0;
        if kmax >= 1 {
            out[1] = s / (ax * ax) - c / ax;
        }
        for k in 1..kmax {
            out[k + 1] = (T::lit(2.0) * T::idx(k) + T::one()) / ax * out[k] - out[k - 1];
        }
        return out;
    }
    let top = kmax + 20 + ax.to_usize().unwrap_or(0);
    let mut above = T::zero();
    let mut cur = T::one();
    let big = T::lit(1e30);
    for k in (0..=top).rev() {
        if k <= kmax {
            out[k] = cur;
        }
        if k == 0 {
            break;
        }
        let below = (T::lit(2.0) * T::idx(k) + T::one()) / ax * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > big {
            let scale = T::one() / big;
            cur = cur * scale;
            above = above * scale;
            for o in out.iter_mut() {
                *o = *o * scale;
            }
        }
    }
    let j1 = s / (ax * ax) - c / ax;
    let norm = if j0.abs() >= j1.abs() || kmax == 0 { j0 / out[0] } else { j1 / out[1] };
    for o in out.iter_mut() {
        *o = *o * norm;
    }
    out
}

fn check<T: Real>(x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("modified Bessel K needs x > 0, got {x:?}")))
    }
}

/// Power series around the origin, fine for `x <= 2`.
fn series_k0k1<T: Real>(x: T) -> (T, T) {
    let q = x * x / T::lit(4.0);
    let lhalf = (x / T::lit(2.0)).ln();
    let eg = T::lit(EULER_GAMMA);
    let eps = T::epsilon() * T::lit(0.1);
    // term = q^k / (k!)^2, harmonic = H_k, psi(k+1) = H_k - gamma
    let mut term = T::one();
    let mut harmonic = T::zero();
    let mut i0 = T::zero();
    let mut harm_sum = T::zero();
    let mut i1s = T::zero();
    let mut k1s = T::zero();
    let mut k = 0usize;
    loop {
        let kf = T::idx(k);
        let t1 = term / (kf + T::one());
        i0 = i0 + term;
        harm_sum = harm_sum + term * harmonic;
        i1s = i1s + t1;
        let psi1 = harmonic - eg;
        let psi2 = harmonic + T::one() / (kf + T::one()) - eg;
        k1s = k1s + (psi1 + psi2) * t1;
        if k > 2 && term < eps * i0 {
            break;
        }
        k += 1;
        let kf = T::idx(k);
        harmonic = harmonic + T::one() / kf;
        term = term * q / (kf * kf);
    }
    let k0 = -(lhalf + eg) * i0 + harm_sum;
    let i1 = x / T::lit(2.0) * i1s;
    let k1 = T::one() / x + lhalf * i1 - x / T::lit(4.0) * k1s;
    (k0, k1)
}

/// `K_n(x) = ∫_0^∞ exp(-x cosh t) cosh(n t) dt` by the trapezoid rule, which
/// converges geometrically for this doubly-exponentially decaying integrand.
fn integral_kn<T: Real>(x: T, n: usize) -> T {
    let h = T::lit(0.05);
    let nf = T::idx(n);
    let mut sum = T::lit(0.5) * (-x).exp();
    let mut j = 1usize;
    loop {
        let t = h * T::idx(j);
        let v = (-x * t.cosh()).exp() * (nf * t).cosh();
        sum = sum + v;
        if v < T::epsilon() * T::lit(1e-3) * sum || j > 4000 {
            break;
        }
        j += 1;
    }
    h * sum
}
