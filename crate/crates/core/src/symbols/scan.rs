use super::{s_half_shift, s_off, s_one_shift, s_reg, s_total, theta_f};
use crate::{Error, Real, Result};

/// Which symbol a scan evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolKind {
    Off,
    Reg,
    Total,
    /// `Re S_l(k + i/2)`.
    HalfShift,
    /// `Re S_l(k + i)`, `l >= 1`.
    OneShift,
    /// The s-wave positivity function with parameter `s`.
    Theta { s: f64 },
}

pub fn symbol_value<T: Real>(kind: SymbolKind, l: usize, k: T, gamma: T) -> Result<T> {
    Ok(match kind {
        SymbolKind::Off => s_off(l, k),
        SymbolKind::Reg => s_reg(l, k, gamma),
        SymbolKind::Total => s_total(l, k, gamma),
        SymbolKind::HalfShift => s_half_shift(l, k, gamma),
        SymbolKind::OneShift => s_one_shift(l, k, gamma)?,
        SymbolKind::Theta { s } => theta_f(k, T::lit(s), gamma),
    })
}

/// Minimum of an even symbol over `[0, k_max]`: coarse scan with `n_samples`
/// points followed by golden-section refinement around the best sample.
pub fn scan_min<T: Real>(kind: SymbolKind, l: usize, gamma: T, k_max: T, n_samples: usize) -> Result<(T, T)> {
    if n_samples < 64 {
        return Err(Error::Precondition(format!("scan needs at least 64 samples, got {n_samples}")));
    }
    if !(k_max > T::zero()) {
        return Err(Error::Precondition("scan range must be positive".into()));
    }
    let f = |k: T| symbol_value(kind, l, k, gamma);
    let step = k_max / T::idx(n_samples - 1);
    let mut best = (0usize, f(T::zero())?);
    for i in 1..n_samples {
        let v = f(step * T::idx(i))?;
        if v < best.1 {
            best = (i, v);
        }
    }
    let mut a = step * T::idx(best.0.saturating_sub(1));
    let mut b = step * T::idx((best.0 + 1).min(n_samples - 1));
    let ratio = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    let (kr, vr) = if fc < fd { (c, fc) } else { (d, fd) };
    let kc = step * T::idx(best.0);
    Ok(if vr < best.1 { (kr, vr) } else { (kc, best.1) })
}

/// Coupling at which `min_k S_0(k; γ)` changes sign, by bisection on `[lo, hi]`.
pub fn critical_gamma_by_scan<T: Real>(lo: T, hi: T, tol: T) -> Result<T> {
    let m = |g: T| scan_min(SymbolKind::Total, 0, g, T::lit(40.0), 1024).map(|r| r.1);
    let (mut a, mut b) = (lo, hi);
    if !(m(a)? < T::zero() && m(b)? > T::zero()) {
        return Err(Error::Precondition("the s-wave minimum does not change sign on the bracket".into()));
    }
    while b - a > tol {
        let mid = (a + b) / T::lit(2.0);
        if m(mid)? > T::zero() {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok((a + b) / T::lit(2.0))
}
