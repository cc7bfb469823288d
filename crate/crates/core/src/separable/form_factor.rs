use crate::quadspec::cached_rule;
use crate::{Error, Grid, Result};
use std::f64::consts::PI;

/// Shape of the form factor `χ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormProfile {
    /// `χ(x) = (2πσ²)^{-3/2} e^{−x²/(2σ²)}`.
    Gaussian,
    /// `χ(x) = e^{−x/σ} / (8πσ³)`.
    Exponential,
}

impl FormProfile {
    pub fn name(self) -> &'static str {
        match self {
            FormProfile::Gaussian => "gaussian",
            FormProfile::Exponential => "exponential",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(FormProfile::Gaussian),
            "exponential" => Ok(FormProfile::Exponential),
            other => Err(Error::Domain(format!("unknown form factor {other:?}"))),
        }
    }
}

/// Non-negative radial form factor with `∫χ = 1` and its unitary Fourier
/// transform `χ̂(k)`, `χ̂(0) = (2π)^{-3/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFactor {
    pub profile: FormProfile,
    pub sigma: f64,
}

const HAT0: f64 = 0.063_493_635_934_240_97;

impl FormFactor {
    pub fn new(profile: FormProfile, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!("form factor width must be positive, got {sigma}")));
        }
        Ok(Self { profile, sigma })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(FormProfile::Gaussian, sigma)
    }

    pub fn exponential(sigma: f64) -> Result<Self> {
        Self::new(FormProfile::Exponential, sigma)
    }

    /// `(2π)^{-3/2}`.
    pub fn hat_at_zero() -> f64 {
        HAT0
    }

    /// `s³ χ(s x)`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.profile, self.sigma / s)
    }

    pub fn chi(&self, x: f64) -> f64 {
        let s = self.sigma;
        match self.profile {
            FormProfile::Gaussian => (2.0 * PI * s * s).powf(-1.5) * (-x * x / (2.0 * s * s)).exp(),
            FormProfile::Exponential => (-x / s).exp() / (8.0 * PI * s * s * s),
        }
    }

    pub fn chi_hat(&self, k: f64) -> f64 {
        let u = self.sigma * k;
        match self.profile {
            FormProfile::Gaussian => HAT0 * (-0.5 * u * u).exp(),
            FormProfile::Exponential => HAT0 / (1.0 + u * u).powi(2),
        }
    }

    /// `dχ̂/dk`.
    pub fn chi_hat_prime(&self, k: f64) -> f64 {
        let s = self.sigma;
        let u = s * k;
        match self.profile {
            FormProfile::Gaussian => -s * u * HAT0 * (-0.5 * u * u).exp(),
            FormProfile::Exponential => -4.0 * s * u * HAT0 / (1.0 + u * u).powi(3),
        }
    }

    /// `‖χ‖²_{L²}` from `4π ∫ k² χ̂(k)² dk`.
    pub fn l2_norm_sq(&self) -> f64 {
        4.0 * PI * integrate_half_line(|k| k * k * self.chi_hat(k).powi(2), 1.0 / self.sigma)
    }

    /// Position and momentum samples on the nodes of a grid.
    pub fn samples(&self, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
        (
            grid.nodes.iter().map(|&x| self.chi(x)).collect(),
            grid.nodes.iter().map(|&k| self.chi_hat(k)).collect(),
        )
    }

    /// `ℓ`, `ℓ′` and `γ₀` in closed form.
    pub fn closed_form_constants(&self) -> ChiConstants {
        let s = self.sigma;
        let (ell, ell_prime) = match self.profile {
            FormProfile::Gaussian => (1.0 / (s * PI.sqrt()), s / (2.0 * PI.sqrt())),
            FormProfile::Exponential => (5.0 / (16.0 * s), 7.0 * s / 16.0),
        };
        ChiConstants::from_pair(ell, ell_prime)
    }
}

/// `ℓ = 4π ∫ |χ̂|²/k² dk`, `ℓ′` the same with `χ̂′`, and `γ₀ = 3π √(ℓℓ′/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiConstants {
    pub ell: f64,
    pub ell_prime: f64,
    pub gamma0: f64,
}

impl ChiConstants {
    fn from_pair(ell: f64, ell_prime: f64) -> Self {
        Self { ell, ell_prime, gamma0: 3.0 * PI * (0.5 * ell * ell_prime).sqrt() }
    }
}

/// `∫_0^∞ f(k) dk` by Gauss–Legendre on dyadic panels around `scale`,
/// extended outwards until the panels stop contributing.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, scale: f64) -> f64 {
    let rule = cached_rule(24);
    let low = scale * 0.5f64.powi(40);
    let mut total = rule.integrate_on(0.0, low, &f);
    let mut a = low;
    while a < scale {
        total += rule.integrate_on(a, 2.0 * a, &f);
        a *= 2.0;
    }
    let mut quiet = 0;
    for _ in 0..400 {
        let v = rule.integrate_on(a, 2.0 * a, &f);
        total += v;
        a *= 2.0;
        quiet = if v.abs() <= 1e-18 * total.abs() { quiet + 1 } else { 0 };
        if quiet >= 3 {
            break;
        }
    }
    total
}

/// `ℓ`, `ℓ′`, `γ₀` by radial quadrature.
pub fn chi_constants(chi: &FormFactor) -> Result<ChiConstants> {
    let scale = 1.0 / chi.sigma;
    let c = 16.0 * PI * PI;
    let ell = c * integrate_half_line(|k| chi.chi_hat(k).powi(2), scale);
    let ell_prime = c * integrate_half_line(|k| chi.chi_hat_prime(k).powi(2), scale);
    if !(ell.is_finite() && ell_prime.is_finite() && ell > 0.0 && ell_prime > 0.0) {
        return Err(Error::Domain(format!("form factor constants are not finite: {ell}, {ell_prime}")));
    }
    Ok(ChiConstants::from_pair(ell, ell_prime))
}

/// `r(s) = 4π ∫ |χ̂(sk)|² / (k²(k² + 1)) d³k`, with `r(0) = 1` and `s·r(s)` increasing.
pub fn r_func(s: f64, chi: &FormFactor) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("r(s) needs s >= 0, got {s}")));
    }
    let c = 16.0 * PI * PI;
    if s <= 1.0 {
        Ok(c * integrate_half_line(|k| chi.chi_hat(s * k).powi(2) / (k * k + 1.0), 1.0))
    } else {
        Ok(c * s * integrate_half_line(|u| chi.chi_hat(u).powi(2) / (u * u + s * s), 1.0 / chi.sigma))
    }
}
