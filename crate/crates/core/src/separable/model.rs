use super::form_factor::{chi_constants, r_func, ChiConstants, FormFactor};
use crate::stmform::{CutoffKind, CutoffProfile, ModelParams};
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Separable model at scale `ε`: form factor `χ_ε(x) = ε^{-3} χ(x/ε)` and
/// three-body coupling `g_ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsModel {
    pub eps: f64,
    pub params: ModelParams,
    pub chi: FormFactor,
    pub consts: ChiConstants,
}

impl EpsModel {
    /// Requires `ε < ℓ/(2‖a‖_∞)`.
    pub fn new(eps: f64, params: ModelParams, chi: FormFactor) -> Result<Self> {
        params.validate()?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        let consts = chi_constants(&chi)?;
        let ceiling = eps_ceiling(&params, &consts);
        if eps >= ceiling {
            return Err(Error::Precondition(format!("eps = {eps} is not below ell/(2 |a|_inf) = {ceiling}")));
        }
        Ok(Self { eps, params, chi, consts })
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(eps, self.params, self.chi)
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { params: self.params.with_lambda(lambda), ..*self }
    }

    /// `ε/ℓ`.
    pub fn ratio(&self) -> f64 {
        self.eps / self.consts.ell
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    /// `χ̂(εk)`.
    pub fn chi_hat_eps(&self, k: f64) -> f64 {
        self.chi.chi_hat(self.eps * k)
    }

    /// `Γ_diag,ε(p) = μ r(εμ)` with `μ = √(3p²/4 + λ)`.
    pub fn gamma_diag(&self, p: f64) -> f64 {
        let mu = (0.75 * p * p + self.params.lambda).sqrt();
        mu * r_func(self.eps * mu, &self.chi).expect("non-negative argument")
    }
}

/// `ℓ/(2‖a‖_∞)`, infinite when `a ≡ 0`.
pub fn eps_ceiling(params: &ModelParams, consts: &ChiConstants) -> f64 {
    let a = params.a_sup();
    if a > 0.0 {
        consts.ell / (2.0 * a)
    } else {
        f64::INFINITY
    }
}

/// `g_ε(y) = −4π (ε/ℓ) / (1 + (ε/ℓ)(a(y) + γθ(y)/y))`.
pub fn g_eps(y: f64, model: &EpsModel) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("g_eps needs y > 0, got {y}")));
    }
    let t = model.ratio();
    Ok(-4.0 * PI * t / (1.0 + t * model.params.gamma_reg(y)))
}

/// `ν_ε(y) = ((1 + (ε/ℓ)a(y))^{1/2} + i((ε/ℓ)γ/y)^{1/2})^{-1}`, so that
/// `|ν_ε|^{-2} = 1 + (ε/ℓ)Γ_reg(y)`.
pub fn nu_eps(y: f64, model: &EpsModel) -> Result<C64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("nu_eps needs y > 0, got {y}")));
    }
    Ok(nu_at(y, model))
}

pub(crate) fn nu_at(y: f64, model: &EpsModel) -> C64 {
    let t = model.ratio();
    let p = &model.params;
    let re = (1.0 + t * p.a(y)).sqrt();
    let im = (t * p.gamma / y).sqrt();
    C64::new(re, im).inv()
}

/// Smallest `λ ≥ 1` with `√λ r(ε_max √λ) ≥ 2‖a‖_∞`; since `μ r(εμ)` grows in
/// `μ` and shrinks in `ε`, the diagonal then dominates `2‖a‖_∞` for every
/// `ε ≤ ε_max` and `p`.
pub fn lambda1(params: &ModelParams, chi: &FormFactor, eps_max: f64) -> Result<f64> {
    let consts = chi_constants(chi)?;
    let target = 2.0 * params.a_sup();
    if eps_max >= eps_ceiling(params, &consts) {
        return Err(Error::Precondition(format!("eps_max = {eps_max} is not below the ceiling")));
    }
    let f = |lam: f64| {
        let s = lam.sqrt();
        s * r_func(eps_max * s, chi).expect("non-negative argument") - target
    };
    if f(1.0) >= 0.0 {
        return Ok(1.0);
    }
    let mut hi = 2.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e16 {
            return Err(Error::Precondition("no finite lambda_1 below 1e16".into()));
        }
    }
    let mut lo = hi / 2.0;
    while hi / lo > 1.0 + 1e-12 {
        let mid = (lo * hi).sqrt();
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Parameters used by the convergence study when none are given: gaussian
/// width `σ`, `γ = γ₀ + 1/2`, exponential cutoff of radius 4 and `β = γ/8`,
/// at shift `λ = 2`.
pub fn default_study_params(chi: &FormFactor) -> Result<ModelParams> {
    let gamma = chi_constants(chi)?.gamma0 + 0.5;
    let b = 4.0;
    ModelParams::new(gamma / (2.0 * b), gamma, 2.0, CutoffProfile::new(CutoffKind::Exponential, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gaussian_model(eps: f64, beta: f64, gamma: f64) -> EpsModel {
        let p = ModelParams::new(beta, gamma, 10.0, CutoffProfile::one()).unwrap();
        EpsModel::new(eps, p, FormFactor::gaussian(1.0).unwrap()).unwrap()
    }

    #[test]
    fn ceiling_is_enforced() {
        let p = ModelParams::new(1.0, 3.0, 1.0, CutoffProfile::one()).unwrap();
        let chi = FormFactor::gaussian(1.0).unwrap();
        let ell = chi.closed_form_constants().ell;
        assert!(EpsModel::new(0.99 * ell / 2.0, p, chi).is_ok());
        assert!(matches!(EpsModel::new(1.01 * ell / 2.0, p, chi), Err(Error::Precondition(_))));
        assert!(EpsModel::new(0.0, p, chi).is_err());
    }

    #[test]
    fn coupling_without_bounded_part() {
        let m = gaussian_model(0.1, 0.0, 2.0);
        let t = m.ratio();
        for &y in &[0.01, 1.0, 30.0] {
            let want = -4.0 * PI * t / (1.0 + t * 2.0 / y);
            assert!((g_eps(y, &m).unwrap() - want).abs() < 1e-15);
        }
        assert!(g_eps(0.0, &m).is_err());
    }

    #[test]
    fn small_eps_expansion_is_third_order() {
        let base = gaussian_model(0.1, 0.3, 2.0);
        let y = 0.7;
        let mut errs = Vec::new();
        for &eps in &[0.02, 0.01, 0.005, 0.0025] {
            let m = base.with_eps(eps).unwrap();
            let t = m.ratio();
            let e = g_eps(y, &m).unwrap() + 4.0 * PI * t - 4.0 * PI * t * t * m.params.gamma_reg(y);
            errs.push(e.abs());
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 8.0).abs() < 0.8, "{errs:?}");
        }
    }

    #[test]
    fn lambda1_meets_its_definition() {
        let chi = FormFactor::gaussian(1.0).unwrap();
        let p = default_study_params(&chi).unwrap();
        let a = p.a_sup();
        let l1 = lambda1(&p, &chi, 0.4).unwrap();
        assert!(l1 >= 1.0);
        let s = l1.sqrt();
        let v = s * r_func(0.4 * s, &chi).unwrap();
        assert!(v >= 2.0 * a * (1.0 - 1e-10));
        if l1 > 1.0 {
            let s = (l1 * 0.999).sqrt();
            assert!(s * r_func(0.4 * s, &chi).unwrap() < 2.0 * a);
        }
        let free = ModelParams::new(0.0, 1.0, 1.0, CutoffProfile::one()).unwrap();
        assert_eq!(lambda1(&free, &chi, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn default_study_model_admits_the_ladder() {
        let chi = FormFactor::gaussian(1.0).unwrap();
        let p = default_study_params(&chi).unwrap();
        assert!(p.cutoff.satisfies_h2());
        for eps in [0.4, 0.2, 0.1, 0.05, 0.025] {
            assert!(EpsModel::new(eps, p, chi).is_ok());
        }
    }

    proptest! {
        #[test]
        fn coupling_factorizes(y in 1e-3f64..1e3, eps in 1e-3f64..0.2, beta in -1.0f64..1.0, gamma in 0.0f64..4.0) {
            let m = gaussian_model(eps, beta, gamma);
            let nu = nu_eps(y, &m).unwrap();
            let g = g_eps(y, &m).unwrap();
            let rhs = -4.0 * PI * m.ratio() * nu.norm_sqr();
            prop_assert!((g - rhs).abs() <= 1e-14 * g.abs().max(1e-300));
            prop_assert!(nu.norm() <= 2f64.sqrt());
            prop_assert!(g.abs() <= 8.0 * PI * m.ratio() * (1.0 + 1e-12));
        }
    }
}
