use super::ratio::{cosh_ratio, panels_for};
use super::real_line::{s_off, s_reg, ORDER};
use crate::quadspec::{legendre_p_all, legendre_q_zm1, rule_as};
use crate::{Error, Real, Result};
use num_complex::Complex;

/// `Re S_off,l(k + i/2) = −4 ∫_{π/3}^{2π/3} P_l(2 cos t) sin(t/2) cosh(kt)/cosh(kπ) dt`.
pub fn s_off_half_shift<T: Real>(l: usize, k: T) -> T {
    let rule = rule_as::<T>(ORDER);
    let pi = T::PI();
    let (a, b) = (pi / T::lit(3.0), T::lit(2.0) * pi / T::lit(3.0));
    -T::lit(4.0)
        * rule.integrate_panels(a, b, panels_for(k, b - a), |t| {
            legendre_p_all(l, T::lit(2.0) * t.cos())[l] * (t / T::lit(2.0)).sin() * cosh_ratio(t, pi, k)
        })
}

/// `Re S_reg,l(k + i/2) = γ ∫_0^π P_l(−cos t) sin(t/2) cosh(kt)/cosh(kπ) dt`.
pub fn s_reg_half_shift<T: Real>(l: usize, k: T, gamma: T) -> T {
    let rule = rule_as::<T>(ORDER);
    let pi = T::PI();
    gamma
        * rule.integrate_panels(T::zero(), pi, panels_for(k, pi), |t| {
            legendre_p_all(l, -t.cos())[l] * (t / T::lit(2.0)).sin() * cosh_ratio(t, pi, k)
        })
}

/// `Re S_l(k + i/2)`.
pub fn s_half_shift<T: Real>(l: usize, k: T, gamma: T) -> T {
    T::lit(3.0).sqrt() / T::lit(2.0) + s_off_half_shift(l, k) + s_reg_half_shift(l, k, gamma)
}

/// Fully explicit s-wave form of `√3/2 (1−s) + Re S_off,0(k+i/2) + Re S_reg,0(k+i/2)`,
/// written as `(f_0 + f_1) / ((1 + 4k²) cosh kπ)`.
pub fn half_shift_swave_explicit<T: Real>(k: T, s: T, gamma: T) -> T {
    let pi = T::PI();
    let s3 = T::lit(3.0).sqrt();
    let kk = k.abs();
    let c = |a: T| cosh_ratio(a, pi, kk);
    // sinh(a k) / cosh(π k) for a <= π
    let sh = |a: T| {
        let two = T::lit(2.0);
        (kk * (a - pi)).exp() * (-(-two * kk * a).exp_m1()) / (T::one() + (-two * kk * pi).exp())
    };
    let inv_cosh = T::one() / (kk * pi).cosh();
    let f0 = s3 / T::lit(2.0) * (T::one() - s) + T::lit(4.0) * c(T::lit(2.0) * pi / T::lit(3.0))
        - T::lit(4.0) * s3 * c(pi / T::lit(3.0))
        + T::lit(2.0) * gamma * inv_cosh;
    let f1 = T::lit(2.0) * s3 * (T::one() - s) * kk * kk
        + T::lit(4.0)
            * kk
            * (gamma * (kk * pi).tanh() - T::lit(2.0) * s3 * sh(T::lit(2.0) * pi / T::lit(3.0))
                + T::lit(2.0) * sh(pi / T::lit(3.0)));
    (f0 + f1) / (T::one() + T::lit(4.0) * kk * kk)
}

fn need_positive_l(l: usize) -> Result<()> {
    if l == 0 {
        Err(Error::Unsupported("the line k + i is not reached by the s-wave symbols; use q_t_symbols".into()))
    } else {
        Ok(())
    }
}

/// `Re S_off,l(k + i) = −[(l+1) S_off,l+1(k) + l S_off,l−1(k)] / (2(2l+1))`.
pub fn s_off_one_shift<T: Real>(l: usize, k: T) -> Result<T> {
    need_positive_l(l)?;
    let lf = T::idx(l);
    Ok(-((lf + T::one()) * s_off(l + 1, k) + lf * s_off(l - 1, k)) / (T::lit(2.0) * T::idx(2 * l + 1)))
}

/// `Re S_reg,l(k + i) = [(l+1) S_reg,l+1(k) + l S_reg,l−1(k)] / (2l+1)`.
pub fn s_reg_one_shift<T: Real>(l: usize, k: T, gamma: T) -> Result<T> {
    need_positive_l(l)?;
    let lf = T::idx(l);
    Ok(((lf + T::one()) * s_reg(l + 1, k, gamma) + lf * s_reg(l - 1, k, gamma)) / T::idx(2 * l + 1))
}

/// `Re S_l(k + i)` for `l >= 1`.
pub fn s_one_shift<T: Real>(l: usize, k: T, gamma: T) -> Result<T> {
    Ok(T::lit(3.0).sqrt() / T::lit(2.0) + s_off_one_shift(l, k)? + s_reg_one_shift(l, k, gamma)?)
}

/// The three s-wave symbols on the line `Im = 1 − t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSymbols<T> {
    pub q0: Complex<T>,
    pub q1: Complex<T>,
    pub q2: Complex<T>,
    /// `Re q0 >= 0` is guaranteed only for `γ > 2`.
    pub sign_definite: bool,
}

/// `∫_{-40}^{40} e^{−ikx} f(x) dx` with geometric panels on both sides of `x = 0`.
fn line_fourier<T: Real>(k: T, f: impl Fn(T) -> T) -> Complex<T> {
    let fine = rule_as::<T>(16);
    let coarse = rule_as::<T>(32);
    let panels = 39 * (1 + (k.abs() / T::lit(4.0)).to_usize().unwrap_or(0));
    let mut re = T::zero();
    let mut im = T::zero();
    for sgn in [T::one(), -T::one()] {
        let g_re = |x: T| (k * x).cos() * f(x);
        let g_im = |x: T| -(k * x).sin() * f(x);
        let mut hi = sgn;
        for _ in 0..60 {
            let lo = hi / T::lit(2.0);
            let (a, b) = if sgn > T::zero() { (lo, hi) } else { (hi, lo) };
            re = re + fine.integrate_on(a, b, g_re);
            im = im + fine.integrate_on(a, b, g_im);
            hi = lo;
        }
        let (a, b) = if sgn > T::zero() { (T::one(), T::lit(40.0)) } else { (T::lit(-40.0), -T::one()) };
        re = re + coarse.integrate_panels(a, b, panels, g_re);
        im = im + coarse.integrate_panels(a, b, panels, g_im);
    }
    Complex::new(re, im)
}

/// `Q¹_t(k) = (1/2π) ∫dν ν ∫dx e^{−ikx} e^{(1−t)x} / (cosh x (cosh x + ν/2))`, `t ∈ [0, 1)`.
pub fn q1_symbol<T: Real>(k: T, t: T) -> Complex<T> {
    let rule = rule_as::<T>(32);
    let v = line_fourier(k, |x| {
        let c = x.cosh();
        let inner = rule.integrate(|nu| nu / (c + nu / T::lit(2.0)));
        ((T::one() - t) * x).exp() / c * inner
    });
    v / (T::lit(2.0) * T::PI())
}

/// `Q²_t(k) = (γ/2π) ∫dν ν ∫dx e^{−ikx} e^{(1−t)x} / (cosh x (cosh x − ν))`, `t ∈ [0, 1)`.
pub fn q2_symbol<T: Real>(k: T, t: T, gamma: T) -> Complex<T> {
    let v = line_fourier(k, |x| {
        let s = (x / T::lit(2.0)).sinh();
        let zm1 = T::lit(2.0) * s * s;
        if zm1 <= T::zero() {
            return T::zero();
        }
        // ∫ ν/(z − ν) dν = 2 Q_1(z)
        let inner = T::lit(2.0) * legendre_q_zm1(1, zm1).unwrap_or(T::zero());
        ((T::one() - t) * x).exp() / x.cosh() * inner
    });
    v * gamma / (T::lit(2.0) * T::PI())
}

/// `Q⁰_t, Q¹_t, Q²_t` at frequency `k`, for `t ∈ (0, 1)`.
pub fn q_t_symbols<T: Real>(k: T, t: T, gamma: T) -> Result<QSymbols<T>> {
    if !(t > T::zero() && t < T::one()) {
        return Err(Error::Domain(format!("q_t_symbols needs t in (0, 1), got {t:?}")));
    }
    let half_pi = T::FRAC_PI_2();
    let (st, ct) = ((half_pi * t).sin(), (half_pi * t).cos());
    let ch = (half_pi * k).cosh();
    let th = (half_pi * k).tanh();
    let den = ch * (st * st + ct * ct * th * th);
    let pref = (gamma - T::lit(2.0)) / T::lit(2.0);
    let q0 = Complex::new(pref * st / den, -pref * ct * th / den);
    Ok(QSymbols {
        q0,
        q1: q1_symbol(k, t),
        q2: q2_symbol(k, t, gamma),
        sign_definite: gamma > T::lit(2.0),
    })
}
