use super::form_factor::{integrate_half_line, FormFactor};
use super::model::EpsModel;
use super::operators::{gamma_eps_assemble, nu_matrix, symmetric_fill};
use crate::quadspec::cached_rule;
use crate::spectrum::{gstar_g_matrix, resolvent_charge};
use crate::stmform::{operator_weights, SectorCharge};
use crate::{Error, Grid, Result, C64};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Direct part of `B_ε^λ`: `4π ∫ k² χ̂(εk)² / (k² + μ²) dk`.
pub fn b_direct(p: f64, model: &EpsModel) -> f64 {
    let mu2 = 0.75 * p * p + model.lambda();
    let scale = 1.0 / (model.eps * model.chi.sigma);
    4.0 * PI * integrate_half_line(|k| k * k * model.chi_hat_eps(k).powi(2) / (k * k + mu2), scale)
}

/// `∫_{-1}^{1} dy` rewritten over `u = |p/2 + q|`, the relative momentum of
/// the incoming pair, with `v = |p + q/2|` the outgoing one.
fn pair_integral(p: f64, q: f64, model: &EpsModel) -> f64 {
    let lam = model.lambda();
    let lo = (0.5 * p - q).abs();
    let hi = 0.5 * p + q;
    let shift = 0.75 * (p * p - q * q);
    let rule = cached_rule(24);
    let s = rule.integrate_panels(lo, hi, 4, |u| {
        let v = (u * u + shift).max(0.0).sqrt();
        u * model.chi_hat_eps(u) * model.chi_hat_eps(v) / (u * u + 0.75 * p * p + lam)
    });
    2.0 * s / (p * q)
}

/// Exchange part of `B_ε^λ` in s-wave, averaged over the two pair variables.
pub fn b_exchange(p: f64, q: f64, model: &EpsModel) -> f64 {
    2.0 * PI * (pair_integral(p, q, model) + pair_integral(q, p, model))
}

/// `B_ε^λ = ν_ε^* (D_B + K_B) ν_ε` in unitary s-wave coordinates.
pub fn b_matrix(model: &EpsModel, grid: &Grid) -> DMatrix<C64> {
    let w = operator_weights(grid);
    let p = &grid.nodes;
    let mut inner = symmetric_fill(grid.n, |i, j| (w[i] * w[j]).sqrt() * b_exchange(p[i], p[j], model));
    let d: Vec<f64> = p.par_iter().map(|&x| b_direct(x, model)).collect();
    for (i, v) in d.into_iter().enumerate() {
        inner[(i, i)] += v;
    }
    let nu = nu_matrix(model, grid);
    nu.adjoint() * complex(&inner) * nu
}

/// `ν_ε^* Γ_ε^λ ν_ε` in unitary s-wave coordinates.
pub fn conjugated_gamma(model: &EpsModel, grid: Arc<Grid>) -> Result<DMatrix<C64>> {
    let nu = nu_matrix(model, &grid);
    let gamma = gamma_eps_assemble(model, grid)?;
    Ok(nu.adjoint() * complex(&gamma.matrix) * nu)
}

/// Both sides of `(1/4π) ν_ε^* Γ_ε^λ ν_ε = ℓ/(4πε) − B_ε^λ`.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub lhs: DMatrix<C64>,
    pub rhs: DMatrix<C64>,
    /// `‖lhs − rhs‖_F / ‖rhs‖_F`.
    pub residual: f64,
    /// Smallest eigenvalue of the right side.
    pub min_eig: f64,
}

pub fn b_eps_identity_check(model: &EpsModel, grid: Arc<Grid>) -> Result<IdentityCheck> {
    let lhs = conjugated_gamma(model, grid.clone())? / C64::new(4.0 * PI, 0.0);
    let shift = model.consts.ell / (4.0 * PI * model.eps);
    let rhs = DMatrix::<C64>::identity(grid.n, grid.n) * C64::new(shift, 0.0) - b_matrix(model, &grid);
    let residual = (&lhs - &rhs).norm() / rhs.norm();
    let min_eig = hermitian_min_eig(&rhs);
    Ok(IdentityCheck { lhs, rhs, residual, min_eig })
}

pub(crate) fn hermitian_min_eig(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

pub(crate) fn hermitian_max_eig(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Exchange kernel of `A_ε^{λ*} 𝒢^λ`:
/// `64π³ χ̂(0) ∫ χ̂(ε|p/2 + q|) / (p² + q² + pqy + λ)² dy`.
pub fn adjoint_exchange(p: f64, q: f64, model: &EpsModel) -> f64 {
    let lam = model.lambda();
    let rule = cached_rule(24);
    let s = rule.integrate_panels(-1.0, 1.0, 4, |y| {
        let pq = p * q * y;
        let a = (0.25 * p * p + q * q + pq).max(0.0).sqrt();
        model.chi_hat_eps(a) / (p * p + q * q + pq + lam).powi(2)
    });
    64.0 * PI.powi(3) * FormFactor::hat_at_zero() * s
}

/// `A_ε^{λ*} 𝒢^λ` without the outer `ν_ε^*`, in unitary coordinates.
pub fn adjoint_source_matrix(model: &EpsModel, grid: &Grid) -> DMatrix<f64> {
    let w = operator_weights(grid);
    let p = &grid.nodes;
    let lam = model.lambda();
    let rows: Vec<Vec<f64>> = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            (0..grid.n)
                .map(|j| {
                    let mut v = (w[i] * w[j]).sqrt() * adjoint_exchange(p[i], p[j], model);
                    if i == j {
                        let mu = (0.75 * p[i] * p[i] + lam).sqrt();
                        v += super::operators::channel_integrals(mu, model.eps, &model.chi).i2;
                    }
                    v
                })
                .collect()
        })
        .collect();
    DMatrix::from_fn(grid.n, grid.n, |i, j| rows[i][j])
}

/// Charge-level output of the finite-range resolvent on `f = 𝒢^λ η`.
#[derive(Debug, Clone)]
pub struct KkResolvent {
    /// `h_ε = (ℓ/4πε) (ν_ε^* Γ_ε^λ ν_ε)^{-1} A_ε^{λ*} f`.
    pub h: SectorCharge,
    /// `ν_ε ζ_ε` with `ζ_ε = (ε/ℓ) h_ε`, the charge entering the correction term.
    pub charge: SectorCharge,
    /// `‖h − A^* f/(4π) − (4πε/ℓ) B h‖ / ‖h‖`.
    pub fixed_point_residual: f64,
    /// `‖ν_ε ζ_ε − ξ‖ / ‖ξ‖` against the contact-model charge.
    pub limit_difference: f64,
}

pub fn kk_resolvent(model: &EpsModel, eta: &SectorCharge) -> Result<KkResolvent> {
    if eta.l != 0 {
        return Err(Error::Unsupported(format!("finite-range sources are s-wave only, got l = {}", eta.l)));
    }
    let grid = eta.grid.clone();
    let n = grid.n;
    let coords = |c: &SectorCharge| DVector::from_iterator(n, c.to_coords().0.iter().zip(c.to_coords().1.iter()).map(|(&a, &b)| C64::new(a, b)));
    let from = |v: &DVector<C64>| {
        let re = v.map(|z| z.re);
        let im = v.map(|z| z.im);
        SectorCharge::from_coords(0, grid.clone(), &re, &im)
    };
    let eta_c = coords(eta);
    let nu = nu_matrix(model, &grid);
    let a_star_f = nu.adjoint() * (complex(&adjoint_source_matrix(model, &grid)) * &eta_c);
    let conj = conjugated_gamma(model, grid.clone())?;
    let scale = model.consts.ell / (4.0 * PI * model.eps);
    let lu = conj.lu();
    let h = lu
        .solve(&(&a_star_f * C64::new(scale, 0.0)))
        .ok_or_else(|| Error::Singular("conjugated charge operator".into()))?;
    let b = b_matrix(model, &grid);
    let hn = h.norm();
    let fixed = &h - &a_star_f / C64::new(4.0 * PI, 0.0) - (&b * &h) * C64::new(1.0 / scale, 0.0);
    let fixed_point_residual = if hn > 0.0 { fixed.norm() / hn } else { fixed.norm() };
    let zeta = &h * C64::new(model.ratio(), 0.0);
    let nz = &nu * zeta;
    let reference = resolvent_charge(eta, &model.params)?;
    let xi = coords(&reference.charge);
    let xn = xi.norm();
    let limit_difference = if xn > 0.0 { (&nz - &xi).norm() / xn } else { nz.norm() };
    Ok(KkResolvent { h: from(&h), charge: from(&nz), fixed_point_residual, limit_difference })
}

/// `A_ε^{λ*} 𝒢^λ` tends to `G^{λ*} 𝒢^λ` as `ε → 0`.
pub fn adjoint_source_limit_gap(model: &EpsModel, grid: &Grid) -> f64 {
    let a = adjoint_source_matrix(model, grid);
    let g = gstar_g_matrix(model.lambda(), grid);
    (a - &g).norm() / g.norm()
}
