//! Property suite behind `tms verify`. Every property reports its worst
//! margin, non-negative when it holds.

use crate::config::RunConfig;
use crate::CliError;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};
use tms_core::separable::{
    adjoint_source_limit_gap, b_eps_identity_check, chi_constants, convergence_study, g_eps, j_eps, kernel_off_eps,
    kk_resolvent, lambda1, nu_eps, off_eps_lower_bound_margins, r_func, EpsModel, FormFactor, FormProfile, RateReport,
};
use tms_core::spectrum::{bound_states, resolvent_charge, thomas_scan, ThomasConfig, ThomasRow};
use tms_core::stmform::{
    assemble_gamma, coercive_lambda, f_lambda_correction, greens_asymptotic_check, hardy_check, kernel_off,
    kernel_off_by_quadrature, log_log_slope, solve_charge, solve_with_operator, t_operator_apply, CutoffKind,
    CutoffProfile, ModelParams, SectorCharge,
};
use tms_core::symbols::{
    b_coeff, critical_constants, critical_gamma_by_scan, s_half_shift, s_off, s_off_one_shift, s_off_one_shift_oracle,
    s_off_oracle, s_reg, s_reg_oracle, scan_min, SymbolKind,
};
use tms_core::testing::{random_charges, random_swave_charges, seeded};
use tms_core::Grid;

/// Replaceable pieces of the library used by the symbol-oracle section.
#[derive(Debug, Clone, Copy)]
pub struct Hooks {
    pub s_off: fn(usize, f64) -> f64,
}

impl Default for Hooks {
    fn default() -> Self {
        Self { s_off: s_off::<f64> }
    }
}

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct Property {
    pub name: &'static str,
    pub topic: &'static str,
    pub passed: bool,
    /// Worst slack over every sampled case; negative on failure.
    pub margin: f64,
    pub detail: String,
}

type Check = fn(&Ctx) -> Result<f64, CliError>;

/// Shared inputs and results reused by several properties.
pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub hooks: Hooks,
    thomas: OnceLock<Result<Vec<ThomasRow>, String>>,
    identity: OnceLock<Result<Vec<(f64, f64)>, String>>,
    study: OnceLock<Result<RateReport, String>>,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a RunConfig, hooks: Hooks) -> Self {
        Self { cfg, hooks, thomas: OnceLock::new(), identity: OnceLock::new(), study: OnceLock::new() }
    }

    fn grid(&self) -> Result<Arc<Grid>, CliError> {
        self.cfg.grid()
    }

    fn thomas(&self) -> Result<&Vec<ThomasRow>, CliError> {
        self.thomas
            .get_or_init(|| {
                let sizes = &self.cfg.thomas_sizes;
                if sizes.len() < 2 {
                    return Err("collapse probes need two grid sizes".into());
                }
                let picked = [sizes[0], sizes[sizes.len() - 1]];
                let base = unit(1.0, 0.0, 1.0)?;
                let cfg = ThomasConfig::centred(&picked).map_err(|e| e.to_string())?;
                thomas_scan(&[0.5, 1.0], &base, &cfg).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CliError::Check(e.clone()))
    }

    /// `(residual, smallest eigenvalue)` of the dual-assembly identity over the test matrix.
    fn identity(&self) -> Result<&Vec<(f64, f64)>, CliError> {
        self.identity
            .get_or_init(|| {
                let run = || -> Result<Vec<(f64, f64)>, CliError> {
                    let chi = self.cfg.form()?;
                    let params = self.cfg.approx_params()?;
                    let l1 = lambda1(&params, &chi, 0.2)?;
                    let grid = Arc::new(Grid::new(1e-3, 1e4, 128)?);
                    let cases: Vec<(f64, f64)> =
                        [0.2, 0.1, 0.05].iter().flat_map(|&e| [(e, l1), (e, 2.0 * l1)]).collect();
                    cases
                        .par_iter()
                        .map(|&(e, l)| {
                            let m = EpsModel::new(e, params.with_lambda(l), chi)?;
                            let c = b_eps_identity_check(&m, grid.clone())?;
                            Ok((c.residual, c.min_eig))
                        })
                        .collect()
                };
                run().map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CliError::Check(e.clone()))
    }

    fn study(&self) -> Result<&RateReport, CliError> {
        self.study
            .get_or_init(|| {
                let run = || -> Result<RateReport, CliError> {
                    Ok(convergence_study(
                        &self.cfg.eps,
                        &self.cfg.approx_params()?,
                        &self.cfg.form()?,
                        self.cfg.approx_grid()?,
                    )?)
                };
                run().map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CliError::Check(e.clone()))
    }
}

fn unit(gamma: f64, beta: f64, lambda: f64) -> Result<ModelParams, String> {
    ModelParams::new(beta, gamma, lambda, CutoffProfile::one()).map_err(|e| e.to_string())
}

fn params(gamma: f64, beta: f64, lambda: f64) -> Result<ModelParams, CliError> {
    unit(gamma, beta, lambda).map_err(CliError::Check)
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(f64::INFINITY, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.min(b) })
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

const ORACLE_KS: [f64; 11] = [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0, 10.0, -10.0];

fn gamma_c_closed_form(_: &Ctx) -> Result<f64, CliError> {
    let c = critical_constants::<f64>();
    let s3 = 3f64.sqrt();
    let closed = s3 / PI * (4.0 * PI / (3.0 * s3) - 1.0);
    Ok((1e-12 - (c.gamma_c - closed).abs()).min(5e-4 - (c.gamma_c - 0.782).abs()))
}

fn bound_b_closed_form(_: &Ctx) -> Result<f64, CliError> {
    let c = critical_constants::<f64>();
    let closed = 50.0 * PI / 27.0 - 10.0 / 3.0 * 3f64.sqrt() + 11f64.sqrt() / 9.0 - 10.0 / 9.0 * (1.0 / 12f64.sqrt()).asin();
    let (_, min_off2) = scan_min(SymbolKind::Off, 2, 0.0, 40.0, 1024)?;
    Ok(worst([1e-12 - (c.bound_b - closed).abs(), 5e-4 - (c.bound_b - 0.087).abs(), c.bound_b + min_off2]))
}

fn gamma_c_star_closed_form(_: &Ctx) -> Result<f64, CliError> {
    let c = critical_constants::<f64>();
    let closed = 7.0 * 3f64.sqrt() / 4.0 - 2.0;
    Ok((1e-12 - (c.gamma_c_star - closed).abs()).min(5e-4 - (c.gamma_c_star - 1.031).abs()))
}

fn one_shift_even_bound(_: &Ctx) -> Result<f64, CliError> {
    let d = critical_constants::<f64>().d_const;
    let floor = -3f64.sqrt() / 2.0 * d;
    let mut m = f64::INFINITY;
    for l in [2, 4, 6, 8] {
        for k in linspace(-20.0, 20.0, 81) {
            m = m.min(s_off_one_shift(l, k)? - floor);
        }
    }
    Ok(m)
}

fn s_off_matches_oracle(ctx: &Ctx) -> Result<f64, CliError> {
    let s = ctx.hooks.s_off;
    Ok(worst((0..=6).flat_map(|l| ORACLE_KS.iter().map(move |&k| 1e-6 - (s(l, k) - s_off_oracle(l, k)).abs()))))
}

fn s_reg_matches_oracle(ctx: &Ctx) -> Result<f64, CliError> {
    let gc = critical_constants::<f64>().gamma_c;
    let gammas = [gc, ctx.cfg.gamma, 2.5];
    let mut m = f64::INFINITY;
    for l in 0..=6 {
        for k in ORACLE_KS {
            for g in gammas {
                m = m.min(1e-6 - (s_reg(l, k, g) - s_reg_oracle(l, k, g)).abs());
            }
        }
    }
    Ok(m)
}

fn threshold_identity(ctx: &Ctx) -> Result<f64, CliError> {
    let gc = critical_constants::<f64>().gamma_c;
    Ok(1e-8 - (3f64.sqrt() / 2.0 + (ctx.hooks.s_off)(0, 0.0) + s_reg(0, 0.0, gc)).abs())
}

fn threshold_sign_flip(_: &Ctx) -> Result<f64, CliError> {
    let gc = critical_constants::<f64>().gamma_c;
    let (_, below) = scan_min(SymbolKind::Total, 0, gc - 1e-4, 40.0, 1024)?;
    let (_, above) = scan_min(SymbolKind::Total, 0, gc + 1e-4, 40.0, 1024)?;
    let found = critical_gamma_by_scan(0.5, 1.2, 1e-10)?;
    Ok(worst([-below, above, 1e-6 - (found - gc).abs()]))
}

fn mono_grid() -> Vec<f64> {
    linspace(-10.0, 10.0, 64)
}

fn off_symbols_ordered(_: &Ctx) -> Result<f64, CliError> {
    let mut m = f64::INFINITY;
    for l in 0..=8 {
        for k in mono_grid() {
            let (a, b) = (s_off(l, k), s_off(l + 2, k));
            m = m.min(if l % 2 == 0 { (b - a).min(-b) } else { (a - b).min(b) });
        }
    }
    Ok(m)
}

fn reg_symbols_ordered(ctx: &Ctx) -> Result<f64, CliError> {
    let mut m = f64::INFINITY;
    for g in [critical_constants::<f64>().gamma_c, ctx.cfg.gamma] {
        for l in 0..=8 {
            for k in mono_grid() {
                let (a, b) = (s_reg(l, k, g), s_reg(l + 2, k, g));
                m = m.min((a - b).min(b));
            }
        }
    }
    Ok(m)
}

fn moment_table_signs(_: &Ctx) -> Result<f64, CliError> {
    let mut m = f64::INFINITY;
    for l in 0..=8 {
        for j in 0..=8 {
            let b: f64 = b_coeff(l, j);
            m = m.min(if (l + j) % 2 == 1 || j < l {
                -b.abs()
            } else if l % 2 == 0 {
                -b
            } else {
                b
            });
        }
    }
    Ok(m)
}

fn half_shift_odd(_: &Ctx) -> Result<f64, CliError> {
    let floor = 3f64.sqrt() / 2.0;
    Ok(worst([1, 3, 5, 7].iter().flat_map(|&l| linspace(-20.0, 20.0, 161).into_iter().map(move |k| s_half_shift(l, k, 0.0) - floor + 1e-12))))
}

fn half_shift_even(_: &Ctx) -> Result<f64, CliError> {
    let floor = 3f64.sqrt() / 18.0;
    Ok(worst([2, 4, 6, 8].iter().flat_map(|&l| linspace(-20.0, 20.0, 161).into_iter().map(move |k| s_half_shift(l, k, 0.0) - floor))))
}

fn one_shift_recurrence(_: &Ctx) -> Result<f64, CliError> {
    let mut m = f64::INFINITY;
    for l in 1..=3 {
        for k in [0.0f64, 0.5, -0.5, 1.0, 3.0, -5.0] {
            m = m.min(1e-8 - (s_off_one_shift(l, k)? - s_off_one_shift_oracle(l, k)).abs());
        }
    }
    Ok(m)
}

fn coercivity_models() -> Result<Vec<ModelParams>, CliError> {
    let ind = CutoffProfile::new(CutoffKind::Indicator, 1.0)?;
    let raw = [params(1.0, 0.0, 1.0)?, params(1.5, 1.0, 1.0)?, ModelParams::new(-1.0, 3.0, 1.0, ind)?];
    raw.iter().map(|p| Ok(p.with_lambda(coercive_lambda(p)?))).collect()
}

/// Smallest eigenvalue per (model, sector) on the configured grid and on twice as many nodes.
fn coercivity_table(ctx: &Ctx) -> Result<Vec<(f64, f64)>, CliError> {
    let coarse = ctx.grid()?;
    let fine = Arc::new(Grid::new(coarse.p_min, coarse.p_max, 2 * coarse.n)?);
    let cases: Vec<(ModelParams, usize)> =
        coercivity_models()?.into_iter().flat_map(|p| (0..=4).map(move |l| (p, l))).collect();
    cases
        .par_iter()
        .map(|(p, l)| {
            let a = assemble_gamma(*l, p, coarse.clone())?.min_eig();
            let b = assemble_gamma(*l, p, fine.clone())?.min_eig();
            Ok((a, b))
        })
        .collect()
}

fn coercivity(ctx: &Ctx) -> Result<f64, CliError> {
    let t = coercivity_table(ctx)?;
    let positive = worst(t.iter().map(|&(a, b)| a.min(b)));
    let stable = worst(t.iter().map(|&(a, b)| 0.2 - ((a - b) / b).abs()));
    Ok(positive.min(stable))
}

fn hardy_random(ctx: &Ctx) -> Result<f64, CliError> {
    let mut rng = seeded(ctx.cfg.seed);
    let charges = random_charges(&mut rng, 0, ctx.grid()?, ctx.cfg.charges);
    Ok(worst(charges.iter().map(|xi| {
        let (lhs, rhs) = hardy_check(xi);
        1.0 - lhs / rhs
    })))
}

fn gaussian_charge(g: &Arc<Grid>) -> SectorCharge {
    SectorCharge::from_fn(0, g.clone(), |p| (-p * p / 2.0).exp())
}

fn charge_round_trip(ctx: &Ctx) -> Result<f64, CliError> {
    let g = ctx.grid()?;
    let op = assemble_gamma(0, &params(2.5, 0.3, 2.0)?, g.clone())?;
    let xi0 = gaussian_charge(&g);
    let sol = solve_with_operator(&op, &op.apply(&xi0))?;
    Ok(1e-9 - sol.charge.sub(&xi0).l2_norm() / xi0.l2_norm())
}

fn h32_grid_stable(ctx: &Ctx) -> Result<f64, CliError> {
    let g = ctx.grid()?;
    let fine = Arc::new(g.refined());
    let p = params(2.5, 0.0, 1.0)?;
    let a = solve_charge(&p, &gaussian_charge(&g))?.h_three_half;
    let b = solve_charge(&p, &gaussian_charge(&fine))?.h_three_half;
    if !(a.is_finite() && b.is_finite()) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(0.02 - ((a - b) / b).abs())
}

fn reformulated_equation(ctx: &Ctx) -> Result<f64, CliError> {
    let g = ctx.grid()?;
    let p = params(2.0, 0.5, 3.0)?;
    let f = gaussian_charge(&g);
    let sol = solve_charge(&p, &f)?;
    let (t, _) = t_operator_apply(&sol.charge, p.gamma)?.to_coords();
    let (fl, _) = f_lambda_correction(&sol.charge, &f, &p)?.to_coords();
    Ok(1e-8 - (&t - &fl).norm() / fl.norm())
}

fn greens_linear(ctx: &Ctx) -> Result<f64, CliError> {
    let xs = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    let rows = greens_asymptotic_check(&gaussian_charge(&ctx.grid()?), &params(1.0, 0.0, 1.0)?, &xs);
    let errs: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let decreasing = worst(errs.windows(2).map(|w| w[0] - w[1]));
    Ok(decreasing.min(0.2 - (log_log_slope(&xs, &errs) - 1.0).abs()))
}

fn exchange_kernel_quadrature(_: &Ctx) -> Result<f64, CliError> {
    let mut m = f64::INFINITY;
    for &(l, p, q, lam) in &[(0, 1.0, 2.0, 1.0), (1, 0.3, 0.7, 5.0), (2, 4.0, 4.5, 0.2), (3, 10.0, 0.1, 1.0), (4, 2.0, 2.0, 0.0)] {
        let a = kernel_off(l, p, q, lam)?;
        let b = kernel_off_by_quadrature(l, p, q, lam);
        m = m.min(1e-9 * (1.0 + a.abs()) - (a - b).abs());
    }
    Ok(m)
}

fn thomas_collapse(ctx: &Ctx) -> Result<f64, CliError> {
    let row = &ctx.thomas()?[0];
    let (Some(a), Some(b)) = (row.probes[0].deepest_sign_change, row.probes[1].deepest_sign_change) else {
        return Ok(f64::NEG_INFINITY);
    };
    Ok((b / a - 4.0).min(-row.min_symbol))
}

/// `μ₀/√λ` over the part `λ ≥ 100 p_min²` of each probe path that the grid resolves.
fn thomas_stable(ctx: &Ctx) -> Result<f64, CliError> {
    let row = &ctx.thomas()?[1];
    if row.probes.iter().any(|p| p.deepest_sign_change.is_some()) || !row.stable {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(worst(row.probes.iter().flat_map(|p| {
        let floor = 100.0 * p.p_min * p.p_min;
        p.mu0_path.iter().filter(move |v| v.0 >= floor).map(|v| v.1 / v.0.sqrt())
    })))
}

fn bound_state_threshold(ctx: &Ctx) -> Result<f64, CliError> {
    let s = bound_states(&params(1.0, -2.0, 1.0)?, 0, (1e-3, 1e6), 1, ctx.grid()?)?;
    let Some(st) = s.states.first() else {
        return Ok(f64::NEG_INFINITY);
    };
    Ok((1e-3 - (st.energy + 4.0).abs()).min(1e-8 - st.residual))
}

fn resolvent_identities(ctx: &Ctx) -> Result<f64, CliError> {
    let r = resolvent_charge(&gaussian_charge(&ctx.grid()?), &params(2.0, 0.5, 2.0)?)?;
    Ok((1e-9 - r.domain_residual).min(1e-10 - r.norm_discrepancy))
}

fn r_properties(ctx: &Ctx) -> Result<f64, CliError> {
    let chi = ctx.cfg.form()?;
    let at0 = 1e-10 - (r_func(0.0, &chi)? - 1.0).abs();
    let ss: Vec<f64> = (0..200).map(|i| 1e-3 * 10f64.powf(5.0 * i as f64 / 199.0)).collect();
    let sr = ss.iter().map(|&s| r_func(s, &chi).map(|r| s * r)).collect::<Result<Vec<_>, _>>()?;
    let increasing = worst(sr.windows(2).map(|w| w[1] - w[0]));
    let small: Vec<f64> = (0..20).map(|i| 1e-6 * 10f64.powf(4.0 * i as f64 / 19.0)).collect();
    let dev = small.iter().map(|&s| r_func(s, &chi).map(|r| (r - 1.0).abs())).collect::<Result<Vec<_>, _>>()?;
    let exponent = log_log_slope(&small, &dev);
    Ok(worst([at0, increasing, exponent - 0.49]))
}

fn form_constants(ctx: &Ctx) -> Result<f64, CliError> {
    let mut m = f64::INFINITY;
    for profile in [FormProfile::Gaussian, FormProfile::Exponential] {
        let chi = FormFactor::new(profile, ctx.cfg.sigma)?;
        let num = chi_constants(&chi)?;
        let closed = chi.closed_form_constants();
        for (a, b) in [(num.ell, closed.ell), (num.ell_prime, closed.ell_prime), (num.gamma0, closed.gamma0)] {
            m = m.min(1e-8 - ((a - b) / b).abs());
        }
        m = m.min(num.gamma0 - 2.0);
    }
    Ok(m)
}

fn coupling_identity(ctx: &Ctx) -> Result<f64, CliError> {
    let model = EpsModel::new(0.1, ctx.cfg.approx_params()?, ctx.cfg.form()?)?;
    let t = model.ratio();
    let mut m = f64::INFINITY;
    for i in 0..200 {
        let y = 1e-3 * 10f64.powf(6.0 * i as f64 / 199.0);
        let g = g_eps(y, &model)?;
        let nu = nu_eps(y, &model)?;
        let want = -4.0 * PI * t * nu.norm_sqr();
        m = m.min(1e-13 - ((g - want) / want).abs()).min(2f64.sqrt() - nu.norm());
    }
    Ok(m)
}

fn dual_assembly_identity(ctx: &Ctx) -> Result<f64, CliError> {
    Ok(worst(ctx.identity()?.iter().map(|&(r, _)| 1e-6 - r)))
}

fn uniform_invertibility(ctx: &Ctx) -> Result<f64, CliError> {
    Ok(worst(ctx.identity()?.iter().map(|&(_, c)| c - 0.05)))
}

fn exchange_lower_bound(ctx: &Ctx) -> Result<f64, CliError> {
    let grid = Arc::new(Grid::new(1e-3, 1e4, 192)?);
    let mut rng = seeded(ctx.cfg.seed);
    let charges = random_swave_charges(&mut rng, grid, 50);
    let params = ctx.cfg.approx_params()?;
    let chi = ctx.cfg.form()?;
    let per_eps = ctx
        .cfg
        .eps
        .par_iter()
        .map(|&e| {
            let m = EpsModel::new(e, params, chi)?;
            Ok(worst(off_eps_lower_bound_margins(&m, &charges)?.into_iter().map(|(a, b)| a.min(b))))
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    Ok(worst(per_eps))
}

fn weight_bound(ctx: &Ctx) -> Result<f64, CliError> {
    let params = ctx.cfg.approx_params()?;
    let chi = ctx.cfg.form()?;
    let ys: Vec<f64> = (0..200).map(|i| 1e-4 * 1.08f64.powi(i)).collect();
    let mut m = f64::INFINITY;
    for &e in &ctx.cfg.eps {
        let model = EpsModel::new(e, params, chi)?;
        let j = j_eps(&ys, &model)?;
        m = m.min(worst(ys.iter().zip(j).map(|(y, v)| model.consts.gamma0 - y * v)));
    }
    Ok(m)
}

fn exchange_kernel_limit(ctx: &Ctx) -> Result<f64, CliError> {
    let base = params(3.0, 0.0, 2.0)?;
    let chi = ctx.cfg.form()?;
    let mut m = f64::INFINITY;
    for &(p, q) in &[(0.1, 0.3), (1.0, 1.0), (2.0, 0.5)] {
        let k0 = kernel_off(0, p, q, 2.0)?;
        let errs = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&e| Ok((kernel_off_eps(p, q, &EpsModel::new(e, base, chi)?) - k0).abs()))
            .collect::<Result<Vec<f64>, CliError>>()?;
        m = m.min(worst([errs[0] - errs[1], errs[1] - errs[2], 1e-5 * k0.abs() - errs[2]]));
    }
    Ok(m)
}

fn finite_range_fixed_point(ctx: &Ctx) -> Result<f64, CliError> {
    let grid = Arc::new(Grid::new(1e-3, 1e4, 128)?);
    let model = EpsModel::new(0.1, ctx.cfg.approx_params()?, ctx.cfg.form()?)?;
    Ok(1e-8 - kk_resolvent(&model, &gaussian_charge(&grid))?.fixed_point_residual)
}

fn adjoint_source_limit(ctx: &Ctx) -> Result<f64, CliError> {
    let grid = Grid::new(1e-2, 1e2, 64)?;
    let params = ctx.cfg.approx_params()?;
    let chi = ctx.cfg.form()?;
    let gaps = [0.1, 0.01, 0.001]
        .iter()
        .map(|&e| Ok(adjoint_source_limit_gap(&EpsModel::new(e, params, chi)?, &grid)))
        .collect::<Result<Vec<f64>, CliError>>()?;
    Ok(worst([gaps[0] - 5.0 * gaps[1], gaps[1] - 5.0 * gaps[2], 1e-2 - gaps[2]]))
}

fn rate_a1(ctx: &Ctx) -> Result<f64, CliError> {
    let r = ctx.study()?;
    let mono = worst(r.rows.windows(2).map(|w| w[0].a1 - w[1].a1));
    Ok(mono.min(0.05 - (r.slope_a1 - 0.5).abs()))
}

fn rate_composite(ctx: &Ctx) -> Result<f64, CliError> {
    let r = ctx.study()?;
    let mono = worst(r.rows.windows(2).map(|w| w[0].composite - w[1].composite));
    Ok(mono.min(r.slope_composite - 0.3))
}

/// Every property: name, topic, check.
pub const PROPERTIES: &[(&str, &str, Check)] = &[
    ("gamma_c_closed_form", "critical constants", gamma_c_closed_form),
    ("bound_b_closed_form", "critical constants", bound_b_closed_form),
    ("gamma_c_star_closed_form", "critical constants", gamma_c_star_closed_form),
    ("one_shift_even_bound", "critical constants", one_shift_even_bound),
    ("s_off_matches_oracle", "symbol oracle", s_off_matches_oracle),
    ("s_reg_matches_oracle", "symbol oracle", s_reg_matches_oracle),
    ("threshold_identity", "symbol oracle", threshold_identity),
    ("threshold_sign_flip", "threshold", threshold_sign_flip),
    ("off_symbols_ordered", "monotonicity", off_symbols_ordered),
    ("reg_symbols_ordered", "monotonicity", reg_symbols_ordered),
    ("moment_table_signs", "monotonicity", moment_table_signs),
    ("half_shift_odd_bound", "shifted lines", half_shift_odd),
    ("half_shift_even_bound", "shifted lines", half_shift_even),
    ("one_shift_recurrence", "shifted lines", one_shift_recurrence),
    ("sector_coercivity", "charge operator", coercivity),
    ("exchange_kernel_quadrature", "charge operator", exchange_kernel_quadrature),
    ("hardy_random_charges", "hardy", hardy_random),
    ("charge_round_trip", "charge solver", charge_round_trip),
    ("h32_grid_stable", "charge solver", h32_grid_stable),
    ("reformulated_equation", "charge solver", reformulated_equation),
    ("greens_deviation_linear", "charge solver", greens_linear),
    ("thomas_collapse", "spectrum", thomas_collapse),
    ("thomas_stable", "spectrum", thomas_stable),
    ("bound_state_threshold", "spectrum", bound_state_threshold),
    ("resolvent_identities", "spectrum", resolvent_identities),
    ("r_function_properties", "form factor", r_properties),
    ("form_factor_constants", "form factor", form_constants),
    ("coupling_identity", "finite range", coupling_identity),
    ("dual_assembly_identity", "finite range", dual_assembly_identity),
    ("uniform_invertibility", "finite range", uniform_invertibility),
    ("exchange_lower_bound", "finite range", exchange_lower_bound),
    ("weight_bound", "finite range", weight_bound),
    ("exchange_kernel_limit", "finite range", exchange_kernel_limit),
    ("finite_range_fixed_point", "finite range", finite_range_fixed_point),
    ("adjoint_source_limit", "finite range", adjoint_source_limit),
    ("rate_a1", "convergence rate", rate_a1),
    ("rate_composite", "convergence rate", rate_composite),
];

/// Runs every property whose name or topic matches `selector` (all when `None`).
pub fn run_suite(cfg: &RunConfig, hooks: Hooks, selector: Option<&str>) -> Vec<Property> {
    let ctx = Ctx::new(cfg, hooks);
    PROPERTIES
        .par_iter()
        .filter(|(name, topic, _)| selector.is_none_or(|s| s == *name || s == *topic))
        .map(|&(name, topic, check)| match check(&ctx) {
            Ok(margin) => Property { name, topic, passed: margin >= 0.0, margin: margin + 0.0, detail: String::new() },
            Err(e) => Property { name, topic, passed: false, margin: f64::NAN, detail: e.to_string() },
        })
        .collect()
}
