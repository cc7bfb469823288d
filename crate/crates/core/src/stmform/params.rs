use crate::symbols::critical_constants;
use crate::{Error, Result};

/// Shape of the cutoff `θ` in the three-body regularization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffKind {
    /// `θ ≡ 1`.
    One,
    /// `θ = 1` for `r <= b`, `0` beyond.
    Indicator,
    /// `θ = e^{-r/b}`.
    Exponential,
    /// `θ = 1` for `r <= b`, smooth monotone step down to `0` at `2b`.
    SmoothCompact,
}

impl CutoffKind {
    pub fn name(self) -> &'static str {
        match self {
            CutoffKind::One => "one",
            CutoffKind::Indicator => "indicator",
            CutoffKind::Exponential => "exponential",
            CutoffKind::SmoothCompact => "smooth_compact",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(CutoffKind::One),
            "indicator" => Ok(CutoffKind::Indicator),
            "exponential" => Ok(CutoffKind::Exponential),
            "smooth_compact" => Ok(CutoffKind::SmoothCompact),
            other => Err(Error::Domain(format!("unknown cutoff kind {other:?}"))),
        }
    }
}

/// Cutoff profile `θ(r)` with its length scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    pub kind: CutoffKind,
    pub b: f64,
}

fn smooth_bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

impl CutoffProfile {
    pub fn one() -> Self {
        Self { kind: CutoffKind::One, b: 1.0 }
    }

    pub fn new(kind: CutoffKind, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("cutoff length must be positive, got {b}")));
        }
        Ok(Self { kind, b })
    }

    pub fn is_one(&self) -> bool {
        self.kind == CutoffKind::One
    }

    /// `θ(r)`.
    pub fn theta(&self, r: f64) -> f64 {
        let b = self.b;
        match self.kind {
            CutoffKind::One => 1.0,
            CutoffKind::Indicator => {
                if r <= b {
                    1.0
                } else {
                    0.0
                }
            }
            CutoffKind::Exponential => (-r / b).exp(),
            CutoffKind::SmoothCompact => {
                let t = (2.0 * b - r) / b;
                if t >= 1.0 {
                    1.0
                } else if t <= 0.0 {
                    0.0
                } else {
                    let a = smooth_bump(t);
                    a / (a + smooth_bump(1.0 - t))
                }
            }
        }
    }

    /// `(1 − θ(r)) / r`, evaluated without cancellation near the origin.
    pub fn deficit_over_r(&self, r: f64) -> f64 {
        match self.kind {
            CutoffKind::Exponential => {
                let x = r / self.b;
                if x < 1e-8 {
                    (1.0 - 0.5 * x) / self.b
                } else {
                    -(-x).exp_m1() / r
                }
            }
            _ => (1.0 - self.theta(r)) / r,
        }
    }

    /// `|θ(r) − 1| <= c r`.
    pub fn satisfies_h1(&self) -> bool {
        true
    }

    /// `θ ∈ C²` with bounded derivatives and `θ(0) = 1`.
    pub fn satisfies_h2(&self) -> bool {
        self.kind != CutoffKind::Indicator
    }
}

/// One instance of the regularized model: two-body parameter `β`, three-body
/// strength `γ`, spectral shift `λ` and cutoff `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub cutoff: CutoffProfile,
}

impl ModelParams {
    pub fn new(beta: f64, gamma: f64, lambda: f64, cutoff: CutoffProfile) -> Result<Self> {
        let p = Self { beta, gamma, lambda, cutoff };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() {
            return Err(Error::Domain(format!("beta must be finite, got {}", self.beta)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must be non-negative, got {}", self.gamma)));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Domain(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.cutoff.b > 0.0 && self.cutoff.b.is_finite()) {
            return Err(Error::Domain(format!("cutoff length must be positive, got {}", self.cutoff.b)));
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..*self }
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..*self }
    }

    /// `a(y) = β + (γ/y)(θ(y) − 1)`.
    pub fn a(&self, y: f64) -> f64 {
        if self.cutoff.is_one() {
            self.beta
        } else {
            self.beta - self.gamma * self.cutoff.deficit_over_r(y)
        }
    }

    /// `Γ_reg(y) = β + γ θ(y) / y`.
    pub fn gamma_reg(&self, y: f64) -> f64 {
        self.beta + self.gamma * self.cutoff.theta(y) / y
    }

    /// `‖a‖_∞`: exact for the one, indicator and exponential profiles,
    /// dense sampling of the transition layer for the smooth compact one.
    pub fn a_sup(&self) -> f64 {
        let beta = self.beta;
        let drop = self.gamma / self.cutoff.b;
        match self.cutoff.kind {
            CutoffKind::One => beta.abs(),
            CutoffKind::Indicator | CutoffKind::Exponential => beta.abs().max((beta - drop).abs()),
            CutoffKind::SmoothCompact => {
                let b = self.cutoff.b;
                let peak = (0..=20_000)
                    .map(|i| self.cutoff.deficit_over_r(b * (1.0 + i as f64 / 20_000.0)))
                    .fold(0.0f64, f64::max);
                beta.abs().max((beta - self.gamma * peak).abs())
            }
        }
    }
}

/// Effective position-dependent scattering length `−1/(β + γθ(y)/y)`.
///
/// A zero denominator is a pole and is reported as an infinite length.
pub fn a_eff(y: f64, params: &ModelParams) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("a_eff needs y > 0, got {y}")));
    }
    let g = params.gamma_reg(y);
    if g == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-1.0 / g)
}

/// Admissible interval for the splitting parameter `s` and the margin `Λ`
/// entering the coercivity shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoercivityMargin {
    pub s_low: f64,
    pub s_star: f64,
    pub margin: f64,
}

pub fn coercivity_margin(gamma: f64) -> Result<CoercivityMargin> {
    let c = critical_constants::<f64>();
    if !(gamma > c.gamma_c) {
        return Err(Error::Threshold { gamma, threshold: c.gamma_c });
    }
    let s_low = (1.0 - std::f64::consts::PI / 3f64.sqrt() * (gamma - c.gamma_c)).max(0.0);
    let s_star = 0.5 * (s_low + 1.0);
    let margin = (1.0 - s_star).min(1.0 - 2.0 * c.bound_b / 3f64.sqrt());
    Ok(CoercivityMargin { s_low, s_star, margin })
}

/// Shift `λ₀` beyond which the charge form is coercive, `(‖a‖_∞ / Λ)²`;
/// the indicator profile uses `γ²/(Λb)²` for `β >= 0` and `(|β|b + γ)²/(Λb)²` otherwise.
pub fn lambda0(params: &ModelParams) -> Result<f64> {
    let m = coercivity_margin(params.gamma)?.margin;
    let cut = params.cutoff;
    if cut.kind == CutoffKind::Indicator {
        let b = cut.b;
        let num = if params.beta >= 0.0 { params.gamma } else { params.beta.abs() * b + params.gamma };
        return Ok((num / (m * b)).powi(2));
    }
    Ok((params.a_sup() / m).powi(2))
}

/// Working shift for coercivity runs: `2λ₀`, or `1` when `λ₀ = 0`.
pub fn coercive_lambda(params: &ModelParams) -> Result<f64> {
    let l0 = lambda0(params)?;
    Ok(if l0 > 0.0 { 2.0 * l0 } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn indicator(beta: f64, gamma: f64, b: f64) -> ModelParams {
        ModelParams::new(beta, gamma, 1.0, CutoffProfile::new(CutoffKind::Indicator, b).unwrap()).unwrap()
    }

    #[test]
    fn profiles_stay_in_unit_interval() {
        for kind in [CutoffKind::One, CutoffKind::Indicator, CutoffKind::Exponential, CutoffKind::SmoothCompact] {
            let c = CutoffProfile::new(kind, 1.3).unwrap();
            for i in 0..400 {
                let r = i as f64 * 0.01;
                let t = c.theta(r);
                assert!((0.0..=1.0).contains(&t));
                if r > 0.0 {
                    assert!((1.0 - t).abs() <= r / 1.3 + 1e-15, "{kind:?} violates the linear bound at {r}");
                }
            }
            assert_eq!(c.theta(0.0), 1.0);
        }
    }

    #[test]
    fn smooth_compact_is_flat_then_vanishes() {
        let c = CutoffProfile::new(CutoffKind::SmoothCompact, 2.0).unwrap();
        assert_eq!(c.theta(1.9), 1.0);
        assert_eq!(c.theta(4.1), 0.0);
        assert!((c.theta(3.0) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=200 {
            let t = c.theta(2.0 + i as f64 * 0.01);
            assert!(t <= prev);
            prev = t;
        }
    }

    #[test]
    fn a_sup_for_indicator() {
        let p = indicator(0.5, 2.0, 1.0);
        assert_eq!(p.a_sup(), 1.5);
        let sampled = (1..100_000).map(|i| p.a(i as f64 * 1e-4).abs()).fold(0.0, f64::max);
        assert!(sampled <= p.a_sup() + 1e-12);
        assert!(sampled > p.a_sup() - 1e-3);
    }

    #[test]
    fn a_sup_bounds_samples_for_every_profile() {
        for kind in [CutoffKind::Exponential, CutoffKind::SmoothCompact] {
            let p = ModelParams::new(0.3, 2.0, 1.0, CutoffProfile::new(kind, 0.7).unwrap()).unwrap();
            let sampled = (1..200_000).map(|i| p.a(i as f64 * 1e-4).abs()).fold(0.0, f64::max);
            assert!(sampled <= p.a_sup() * (1.0 + 1e-6), "{kind:?}");
            assert!(sampled >= p.a_sup() * (1.0 - 1e-3), "{kind:?}");
        }
    }

    #[test]
    fn a_for_unit_cutoff_is_beta() {
        let p = ModelParams::new(-0.7, 3.0, 2.0, CutoffProfile::one()).unwrap();
        assert_eq!(p.a(0.01), -0.7);
        assert_eq!(p.a_sup(), 0.7);
    }

    #[test]
    fn validation() {
        assert!(ModelParams::new(0.0, -1.0, 1.0, CutoffProfile::one()).is_err());
        assert!(ModelParams::new(0.0, 1.0, 0.0, CutoffProfile::one()).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 1.0, CutoffProfile::one()).is_err());
        assert!(CutoffProfile::new(CutoffKind::Indicator, 0.0).is_err());
        assert!(CutoffKind::parse("gaussian").is_err());
        for kind in [CutoffKind::One, CutoffKind::Indicator, CutoffKind::Exponential, CutoffKind::SmoothCompact] {
            assert_eq!(CutoffKind::parse(kind.name()).unwrap(), kind);
        }
    }

    #[test]
    fn effective_length() {
        let p = indicator(-2.0, 1.5, 1.0);
        assert_eq!(a_eff(2.0, &p).unwrap(), 0.5);
        let y = 0.3;
        let a = 0.5;
        let expected = a * y / (y - 1.5 * a);
        assert!((a_eff(y, &p).unwrap() - expected).abs() < 1e-14);
        assert!(a_eff(1e-9, &p).unwrap().abs() < 1e-8);
        let free = ModelParams::new(0.25, 0.0, 1.0, CutoffProfile::one()).unwrap();
        assert_eq!(a_eff(3.0, &free).unwrap(), -4.0);
        assert_eq!(a_eff(0.75, &p).unwrap(), f64::INFINITY);
        assert!(a_eff(0.0, &p).is_err());
    }

    #[test]
    fn lambda0_cases() {
        let free = ModelParams::new(0.0, 1.0, 1.0, CutoffProfile::one()).unwrap();
        assert_eq!(lambda0(&free).unwrap(), 0.0);
        assert_eq!(coercive_lambda(&free).unwrap(), 1.0);
        let p = indicator(0.0, 2.0, 1.0);
        let m = coercivity_margin(2.0).unwrap().margin;
        assert!((lambda0(&p).unwrap() - 4.0 / (m * m)).abs() < 1e-12);
        let q = indicator(-1.0, 3.0, 1.0);
        assert!((lambda0(&q).unwrap() - 64.0).abs() < 1e-12);
        assert!(matches!(lambda0(&indicator(0.0, 0.5, 1.0)), Err(Error::Threshold { .. })));
    }

    #[test]
    fn lambda0_blows_up_at_threshold() {
        let gc = critical_constants::<f64>().gamma_c;
        let mut prev = 0.0;
        for i in 0..12 {
            let g = gc + 0.5f64.powi(12 - i);
            let v = lambda0(&indicator(0.0, g, 1.0)).unwrap();
            if i > 0 {
                assert!(v <= prev, "not monotone at step {i}");
            }
            prev = v;
        }
        let near = lambda0(&indicator(0.0, gc + 1e-9, 1.0)).unwrap();
        assert!(near > 1e15);
    }
}
