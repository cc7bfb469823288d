use super::form_factor::FormFactor;
use super::identity::{adjoint_source_matrix, conjugated_gamma};
use super::model::{lambda1, EpsModel};
use super::operators::{channel_integrals, channel_table, gamma_eps_assemble, nu_matrix, windowed_nu_matrix};
use crate::quadspec::LogHankel;
use crate::spectrum::gstar_g_matrix;
use crate::stmform::{assemble_gamma_with, log_log_slope, ModelParams, RegScheme, SectorCharge};
use crate::testing::{random_swave_charges, seeded};
use crate::{Error, Grid, Result, C64};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

fn real_vec(v: &DVector<f64>) -> DVector<C64> {
    v.map(|x| C64::new(x, 0.0))
}

/// Error measures at one `ε`, all restricted to the s-wave sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub eps: f64,
    /// `‖A_{1,ε}^λ − G^λ‖`, the multiplication part.
    pub a1: f64,
    /// `‖A_{2,ε}^λ‖`, the part carrying `ν_ε − 1`; it only starts to decrease
    /// once `ε` is well below `ℓ/γ`.
    pub a2: f64,
    /// `‖A_ε^λ − G^λ‖` from the full discretized kernel.
    pub a_total: f64,
    /// `‖A_ε^λ‖`.
    pub a_norm: f64,
    /// Largest `‖(ν_ε^* Γ_ε^λ ν_ε − Γ^λ) ξ‖ / ‖φ‖` over the source battery, with `ξ = (Γ^λ)^{-1} G^{λ*} φ`.
    pub gamma_err: f64,
    /// Largest `‖A_ε^λ ζ_ε − G^λ ξ‖ / ‖φ‖` over the source battery: the
    /// direct-channel piece of the resolvent difference.
    pub composite: f64,
}

/// Rates fitted to a [`convergence_study`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub lambda: f64,
    pub lambda1: f64,
    pub rows: Vec<StudyRow>,
    pub slope_a1: f64,
    pub slope_a2: f64,
    pub slope_total: f64,
    pub slope_gamma: f64,
    pub slope_composite: f64,
    /// Smooth cutoff and `γ > max(γ₀, 2)`; rates are only expected to hold when set.
    pub hypotheses_hold: bool,
    /// `‖G^λ‖ = (2π/√λ)^{1/2}` in the s-wave sector.
    pub g_norm: f64,
}

impl RateReport {
    /// `‖A_ε − G‖`, its `A_{1,ε}` piece, the charge-operator error and the
    /// composite error all decrease along the ladder.
    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|w| {
            w[1].a1 < w[0].a1
                && w[1].a_total < w[0].a_total
                && w[1].gamma_err < w[0].gamma_err
                && w[1].composite < w[0].composite
        })
    }
}

/// Smooth s-wave sources `η(p) = e^{−p²/(2s²)}`, `s ∈ {1/2, 1, 2}`, for `φ = 𝒢^λ η`.
pub fn source_battery(grid: Arc<Grid>) -> Vec<SectorCharge> {
    [0.5, 1.0, 2.0]
        .iter()
        .map(|&s: &f64| SectorCharge::from_fn(0, grid.clone(), move |p| (-p * p / (2.0 * s * s)).exp()))
        .collect()
}

fn check_ladder(eps_list: &[f64]) -> Result<()> {
    if eps_list.len() < 4 {
        return Err(Error::Precondition(format!("need at least 4 eps values, got {}", eps_list.len())));
    }
    if eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain("eps values must be positive".into()));
    }
    let q = eps_list[1] / eps_list[0];
    if !(q < 1.0) || eps_list.windows(2).any(|w| ((w[1] / w[0]) / q - 1.0).abs() > 1e-6) {
        return Err(Error::Precondition("eps values must form a decreasing geometric ladder".into()));
    }
    Ok(())
}

/// Limit-model quantities shared by every `ε`.
struct Limit {
    hankel_dim: usize,
    gamma: DMatrix<f64>,
    sources: Vec<DVector<f64>>,
    xi: Vec<DVector<f64>>,
    source_norms: Vec<f64>,
}

fn limit_model(params: &ModelParams, grid: Arc<Grid>) -> Result<Limit> {
    let gamma = assemble_gamma_with(0, params, grid.clone(), RegScheme::Transform)?.matrix;
    let gg = gstar_g_matrix(params.lambda, &grid);
    let chol = gamma.clone().cholesky().ok_or(Error::NotCoercive { min_eig: gamma.symmetric_eigenvalues().min() })?;
    let sources: Vec<DVector<f64>> = source_battery(grid.clone()).iter().map(|c| c.to_coords().0).collect();
    let gstar: Vec<DVector<f64>> = sources.iter().map(|e| &gg * e).collect();
    let xi = gstar.iter().map(|g| chol.solve(g) / (4.0 * PI)).collect();
    let source_norms = sources.iter().zip(&gstar).map(|(e, g)| (3.0 * e.dot(g)).sqrt()).collect();
    Ok(Limit { hankel_dim: grid.n, gamma, sources, xi, source_norms })
}

fn study_point(model: &EpsModel, grid: Arc<Grid>, limit: &Limit) -> Result<StudyRow> {
    let n = limit.hankel_dim;
    let nu = nu_matrix(model, &grid);
    let nu_w = windowed_nu_matrix(model, &grid)?;
    let tab = channel_table(model, &grid);
    let a1 = channel_integrals(model.lambda().sqrt(), model.eps, &model.chi).i_diff.sqrt();
    let root_i1 = DMatrix::from_diagonal(&DVector::from_iterator(n, tab.iter().map(|c| C64::new(c.i1.sqrt(), 0.0))));
    let eye = DMatrix::<C64>::identity(n, n);
    let a2 = (&root_i1 * (&nu_w - &eye)).singular_values().max();
    let a_norm = (&root_i1 * &nu_w).singular_values().max();
    let d = |f: &dyn Fn(&super::ChannelIntegrals) -> f64| {
        DMatrix::from_diagonal(&DVector::from_iterator(n, tab.iter().map(|c| C64::new(f(c), 0.0))))
    };
    let i1 = d(&|c| c.i1);
    let i2 = d(&|c| c.i2);
    let i3 = d(&|c| c.i3);
    let gram = nu_w.adjoint() * &i1 * &nu_w - nu_w.adjoint() * &i2 - &i2 * &nu_w + &i3;
    let a_total = super::identity::hermitian_max_eig(&gram).max(0.0).sqrt();

    let conj = conjugated_gamma(model, grid.clone())?;
    let lu = conj.clone().lu();
    let adj = complex(&adjoint_source_matrix(model, &grid));
    let gamma_c = complex(&limit.gamma);
    let mut gamma_err = 0.0f64;
    let mut composite = 0.0f64;
    for b in 0..limit.sources.len() {
        let xi = real_vec(&limit.xi[b]);
        let phi_norm = limit.source_norms[b];
        // Γ ξ = G^* φ / (4π), so the scale of ξ is taken out
        let strawberry = (&conj * &xi - &gamma_c * &xi).norm() * 4.0 * PI / phi_norm;
        gamma_err = gamma_err.max(strawberry);
        let a_star = nu.adjoint() * (&adj * real_vec(&limit.sources[b]));
        let zeta = lu
            .solve(&(a_star / C64::new(4.0 * PI, 0.0)))
            .ok_or_else(|| Error::Singular("conjugated charge operator".into()))?;
        let nz = &nu * zeta;
        let mut sq = 0.0;
        for (j, c) in tab.iter().enumerate() {
            let x = limit.xi[b][j];
            sq += c.i1 * nz[j].norm_sqr() - 2.0 * c.i2 * nz[j].re * x + c.i3 * x * x;
        }
        composite = composite.max(sq.max(0.0).sqrt() / phi_norm);
    }
    Ok(StudyRow { eps: model.eps, a1, a2, a_total, a_norm, gamma_err, composite })
}

/// Convergence of the finite-range model to the contact model along a
/// geometric `ε` ladder at shift `λ`.
pub fn convergence_study(eps_list: &[f64], params: &ModelParams, chi: &FormFactor, grid: Arc<Grid>) -> Result<RateReport> {
    check_ladder(eps_list)?;
    let eps_min = eps_list.iter().cloned().fold(f64::INFINITY, f64::min);
    let eps_max = eps_list.iter().cloned().fold(0.0, f64::max);
    if grid.p_max < 10.0 / eps_min {
        return Err(Error::Grid(format!("grid p_max = {} does not resolve 10/eps = {}", grid.p_max, 10.0 / eps_min)));
    }
    let l1 = lambda1(params, chi, eps_max)?;
    if params.lambda < l1 {
        return Err(Error::Precondition(format!("lambda = {} is below lambda_1 = {l1}", params.lambda)));
    }
    let limit = limit_model(params, grid.clone())?;
    let rows = eps_list
        .par_iter()
        .map(|&e| study_point(&EpsModel::new(e, *params, *chi)?, grid.clone(), &limit))
        .collect::<Result<Vec<_>>>()?;
    let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
    let slope = |f: fn(&StudyRow) -> f64| log_log_slope(&eps, &rows.iter().map(f).collect::<Vec<_>>());
    let gamma0 = super::chi_constants(chi)?.gamma0;
    Ok(RateReport {
        lambda: params.lambda,
        lambda1: l1,
        slope_a1: slope(|r| r.a1),
        slope_a2: slope(|r| r.a2),
        slope_total: slope(|r| r.a_total),
        slope_gamma: slope(|r| r.gamma_err),
        slope_composite: slope(|r| r.composite),
        rows,
        hypotheses_hold: params.cutoff.satisfies_h2() && params.gamma > gamma0.max(2.0),
        g_norm: (2.0 * PI / params.lambda.sqrt()).sqrt(),
    })
}

/// Coercivity constant at one `(ε, λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformRow {
    pub eps: f64,
    pub lambda: f64,
    /// Smallest generalized eigenvalue of `Γ_ε^λ` against `W = I + 1/|y|`.
    pub c: f64,
    /// Smallest ratio `Φ_ε^λ(ξ) / (ξ, Wξ)` over the random charges.
    pub min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformBound {
    pub lambda1: f64,
    pub rows: Vec<UniformRow>,
}

impl UniformBound {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.c > 0.0 && r.min_ratio >= r.c * (1.0 - 1e-9))
    }

    pub fn min_c(&self) -> f64 {
        self.rows.iter().map(|r| r.c).fold(f64::INFINITY, f64::min)
    }
}

/// Checks `Φ_ε^λ(ξ) ≥ c (ξ, (I + 1/|y|) ξ)` for every `ε` and every `λ`,
/// each `λ` at least `λ₁(max ε)`, on `count` random charges.
pub fn uniform_bound_check(
    params: &ModelParams,
    chi: &FormFactor,
    eps_list: &[f64],
    lambdas: &[f64],
    grid: Arc<Grid>,
    count: usize,
    seed: u64,
) -> Result<UniformBound> {
    let gamma0 = super::chi_constants(chi)?.gamma0;
    if !(params.gamma > gamma0) {
        return Err(Error::Unsupported(format!(
            "uniform lower bound needs gamma > gamma_0 = {gamma0}, got {}",
            params.gamma
        )));
    }
    let eps_max = eps_list.iter().cloned().fold(0.0, f64::max);
    let l1 = lambda1(params, chi, eps_max)?;
    if let Some(&l) = lambdas.iter().find(|&&l| l < l1) {
        return Err(Error::Precondition(format!("lambda = {l} is below lambda_1 = {l1}")));
    }
    let hankel = LogHankel::new(&grid, 0);
    let f = &hankel.matrix;
    let inv_r = DMatrix::from_diagonal(&DVector::from_iterator(grid.n, hankel.radii.iter().map(|r| 1.0 / r)));
    let mut w = f * inv_r * f + DMatrix::identity(grid.n, grid.n);
    crate::stmform::symmetrize_matrix(&mut w);
    let chol = w.clone().cholesky().ok_or(Error::NotCoercive { min_eig: f64::NAN })?;
    let l_inv = chol.l().try_inverse().ok_or_else(|| Error::Singular("weight factor".into()))?;
    let mut rng = seeded(seed);
    let charges = random_swave_charges(&mut rng, grid.clone(), count);
    let coords: Vec<DVector<f64>> = charges.iter().map(|c| c.to_coords().0).collect();
    let pairs: Vec<(f64, f64)> = eps_list.iter().flat_map(|&e| lambdas.iter().map(move |&l| (e, l))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(e, l)| {
            let model = EpsModel::new(e, params.with_lambda(l), *chi)?;
            let g = gamma_eps_assemble(&model, grid.clone())?.matrix;
            let mut reduced = &l_inv * &g * l_inv.transpose();
            crate::stmform::symmetrize_matrix(&mut reduced);
            let c = reduced.symmetric_eigenvalues().min();
            let min_ratio = coords
                .iter()
                .map(|u| u.dot(&(&g * u)) / u.dot(&(&w * u)))
                .fold(f64::INFINITY, f64::min);
            Ok(UniformRow { eps: e, lambda: l, c, min_ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UniformBound { lambda1: l1, rows })
}
