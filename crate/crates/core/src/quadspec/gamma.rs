use num_complex::Complex;

/// `ln Γ(z)` for `Re z > 0`, via upward shift and the Stirling series.
///
/// The imaginary part is a continuous branch only up to multiples of `2π`,
/// which is all that phase factors `exp(ln Γ)` need.
pub fn ln_gamma_complex(z: Complex<f64>) -> Complex<f64> {
    const SHIFT: f64 = 12.0;
    let mut w = z;
    let mut acc = Complex::new(0.0, 0.0);
    while w.re < SHIFT {
        acc += w.ln();
        w += 1.0;
    }
    // Bernoulli coefficients B_{2j} / (2j (2j-1))
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex::new(0.0, 0.0);
    let mut pow = inv;
    for c in C {
        series += pow * c;
        pow *= inv2;
    }
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    (w - 0.5) * w.ln() - w + half_ln_2pi + series - acc
}
