use crate::{Error, Real, Result};

/// Matrix element `B_{lj}` of the odd/even decomposition of the off-diagonal form.
///
/// Zero when `l` and `j` have different parity or `j < l`; negative when both
/// are even and positive when both are odd.
pub fn b_coeff<T: Real>(l: usize, j: usize) -> T {
    if j < l || (j - l) % 2 == 1 {
        return T::zero();
    }
    // d^l/dy^l y^j = j!/(j-l)! y^{j-l}; ∫ y^m (1-y^2)^l dy = Σ_i C(l,i) (-1)^i 2/(m+2i+1)
    let m = j - l;
    let mut integral = T::zero();
    let mut binom = T::one();
    for i in 0..=l {
        let term = binom * T::lit(2.0) / T::idx(m + 2 * i + 1);
        integral = if i % 2 == 0 { integral + term } else { integral - term };
        binom = binom * T::idx(l - i) / T::idx(i + 1);
    }
    // prefactor 2/(π 2^l l!) · 1/j! · j!/(j-l)!
    let mut pref = T::lit(2.0) / T::PI();
    for i in 1..=l {
        pref = pref / (T::lit(2.0) * T::idx(i));
    }
    for i in 1..=m {
        pref = pref / T::idx(i);
    }
    let sign = if j % 2 == 0 { -T::one() } else { T::one() };
    sign * pref * integral
}

/// Legendre moments `a_l = ∫_{-1}^{1} P_l(y) g(y) dy` of `g(y) = Σ c_n y^n` with `c_n >= 0`.
///
/// Terms are dropped once the remaining coefficient mass is below `1e-12`.
/// Fails if a coefficient is negative, or if the resulting moments are not
/// non-negative and non-increasing in steps of two.
pub fn legendre_moments<T: Real>(coeffs: &[T], l_max: usize) -> Result<Vec<T>> {
    if let Some(n) = coeffs.iter().position(|&c| !(c >= T::zero())) {
        return Err(Error::Precondition(format!("series coefficient c_{n} is negative")));
    }
    let mut tail: Vec<T> = vec![T::zero(); coeffs.len() + 1];
    for n in (0..coeffs.len()).rev() {
        tail[n] = tail[n + 1] + T::lit(2.0) * coeffs[n];
    }
    let cut = tail.iter().position(|&t| t < T::lit(1e-12)).unwrap_or(coeffs.len());
    let mut out = Vec::with_capacity(l_max + 1);
    // m(l, l) = 2^{l+1} (l!)^2 / (2l+1)!, m(l, n+2) = m(l, n) (n+2)(n+1) / ((n-l+2)(n+l+3))
    let mut diag = T::lit(2.0);
    for l in 0..=l_max {
        if l > 0 {
            diag = diag * T::idx(l) / T::idx(2 * l + 1);
        }
        let mut acc = T::zero();
        let mut mom = diag;
        let mut n = l;
        while n < cut {
            acc = acc + coeffs[n] * mom;
            mom = mom * T::idx((n + 2) * (n + 1)) / T::idx((n - l + 2) * (n + l + 3));
            n += 2;
        }
        out.push(acc);
    }
    let scale = out.first().map(|v| v.abs()).unwrap_or(T::zero()).max(T::one());
    let tol = T::lit(1e-12) * scale;
    for l in 0..out.len() {
        if out[l] < -tol {
            return Err(Error::Precondition(format!("moment a_{l} is negative")));
        }
        if l + 2 < out.len() && out[l + 2] > out[l] + tol {
            return Err(Error::Precondition(format!("moment a_{} exceeds a_{l}", l + 2)));
        }
    }
    Ok(out)
}

/// `∫ P_l(y) y^n dy` by Gauss–Legendre quadrature.
#[cfg(test)]
pub(crate) fn moment_by_quadrature<T: Real>(l: usize, n: usize) -> T {
    let rule = crate::quadspec::rule_as::<T>(64);
    rule.integrate(|y| crate::quadspec::legendre_p_all(l, y)[l] * y.powi(n as i32))
}
