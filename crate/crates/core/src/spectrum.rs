//! Spectral diagnostics through the charge operator: zero modes as bound
//! states, refinement-divergent negative modes as the Thomas collapse, and
//! the charge part of the resolvent.

use crate::quadspec::cached_rule;
use crate::stmform::{
    assemble_gamma, operator_weights, solve_with_operator, ModelParams, SectorAssembler, SectorCharge, SectorOperator,
};
use crate::symbols::{scan_min, SymbolKind};
use crate::{Error, Grid, Result};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// Smallest eigenvalue `μ₀(λ)` of the sector matrix of `Γ^λ`.
pub fn min_eig(l: usize, lambda: f64, params: &ModelParams, grid: Arc<Grid>) -> Result<f64> {
    Ok(assemble_gamma(l, &params.with_lambda(lambda), grid)?.min_eig())
}

/// Geometric ladder `lo, lo·ratio, …` up to and including the first point `>= hi`.
pub fn lambda_ladder(lo: f64, hi: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && ratio > 1.0) {
        return Err(Error::Domain(format!("need 0 < lo < hi and ratio > 1, got {lo}, {hi}, {ratio}")));
    }
    let mut out = vec![lo];
    let mut x = lo;
    while x < hi {
        x = (x * ratio).min(hi);
        out.push(x);
    }
    Ok(out)
}

/// A zero mode of `Γ^{λ*}`: a three-body bound state at energy `−λ*`.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub energy: f64,
    pub sector: usize,
    /// Zero mode with unit discrete `L²` norm.
    pub charge: SectorCharge,
    /// `|μ(λ*)|`, equal to `‖Γ^{λ*} ξ‖ / ‖ξ‖` for the returned mode.
    pub residual: f64,
    /// `E < −β²`: strictly below the atom-dimer threshold of an attractive pair.
    pub below_two_body_threshold: bool,
}

/// Energy `−β²` of the two-body bound state for `β < 0`, else `0`.
pub fn two_body_threshold(params: &ModelParams) -> f64 {
    if params.beta < 0.0 {
        -params.beta * params.beta
    } else {
        0.0
    }
}

/// Result of a bound-state sweep.
#[derive(Debug, Clone)]
pub struct BoundStateSearch {
    pub states: Vec<BoundState>,
    /// `γ <= γ_c`: the discrete states found depend on the grid cutoff.
    pub collapse_regime: bool,
    pub lambdas: Vec<f64>,
    pub negative_counts: Vec<usize>,
}

fn sorted_eigenvalue(op: &SectorOperator, k: usize) -> f64 {
    let mut ev: Vec<f64> = op.matrix.clone().symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    ev[k]
}

fn negative_count(op: &SectorOperator) -> usize {
    op.matrix.clone().symmetric_eigenvalues().iter().filter(|&&v| v < 0.0).count()
}

/// Bisection in `ln λ` for the zero of the `k`-th eigenvalue on `[lo, hi]`.
fn bisect_zero(asm: &SectorAssembler, k: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = sorted_eigenvalue(&asm.at(lo)?, k);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        let f = sorted_eigenvalue(&asm.at(mid)?, k);
        if f == 0.0 {
            return Ok(mid);
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Zero modes of `Γ^λ` in sector `l` for `λ` in `range`, located from sign
/// changes of the eigenvalues on a ratio-2 geometric ladder and refined by
/// bisection. States are sorted by energy, deepest first, and the sweep
/// stops once `max_count` of them are found.
///
/// For `β < 0` the first zero mode sits at the atom-dimer threshold `−β²`;
/// crossings above it come from the discretized dimer continuum.
pub fn bound_states(
    params: &ModelParams,
    l: usize,
    range: (f64, f64),
    max_count: usize,
    grid: Arc<Grid>,
) -> Result<BoundStateSearch> {
    let asm = SectorAssembler::new(l, params, grid.clone())?;
    let lambdas = lambda_ladder(range.0, range.1, 2.0)?;
    let negative_counts = lambdas
        .par_iter()
        .map(|&lam| asm.at(lam).map(|op| negative_count(&op)))
        .collect::<Result<Vec<_>>>()?;
    let mut states = Vec::new();
    let threshold = two_body_threshold(params);
    'sweep: for (i, w) in negative_counts.windows(2).enumerate().rev() {
        let (a, b) = (w[0], w[1]);
        let (lo, hi) = (lambdas[i], lambdas[i + 1]);
        let (from, to) = if a > b { (b, a) } else { (a, b) };
        for k in from..to {
            if states.len() >= max_count {
                break 'sweep;
            }
            let root = bisect_zero(&asm, k, lo, hi)?;
            let op = asm.at(root)?;
            let eig = op.eigen();
            let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
            let idx = order[k];
            let v = eig.eigenvectors.column(idx).into_owned();
            let charge = SectorCharge::from_coords(l, grid.clone(), &v, &nalgebra::DVector::zeros(v.len()));
            states.push(BoundState {
                energy: -root,
                sector: l,
                charge,
                residual: eig.eigenvalues[idx].abs(),
                below_two_body_threshold: -root < threshold * (1.0 + 1e-6),
            });
        }
    }
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let gamma_c = crate::symbols::critical_constants::<f64>().gamma_c;
    Ok(BoundStateSearch { states, collapse_regime: params.gamma <= gamma_c, lambdas, negative_counts })
}

/// Collapse probe of one `γ` on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseProbe {
    pub n: usize,
    pub p_min: f64,
    pub p_max: f64,
    /// Largest `λ` on the ladder at which the s-wave matrix is not positive
    /// definite, refined by bisection; `None` if it is positive throughout.
    pub deepest_sign_change: Option<f64>,
    /// `(λ, μ₀(λ))` on a coarse ladder.
    pub mu0_path: Vec<(f64, f64)>,
}

/// One row of [`thomas_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThomasRow {
    pub gamma: f64,
    /// `min_k S₀(k; γ)` and where it is attained.
    pub min_symbol: f64,
    pub k_at_min: f64,
    /// Stable iff `min_k S₀ > 0`.
    pub stable: bool,
    pub probes: Vec<CollapseProbe>,
}

/// Grids and ladders used by [`thomas_scan`].
#[derive(Debug, Clone)]
pub struct ThomasConfig {
    pub grids: Vec<Arc<Grid>>,
    /// Ratio of the positivity sweep.
    pub ratio: f64,
    /// Ratio of the reported `μ₀` path.
    pub path_ratio: f64,
}

impl ThomasConfig {
    /// Grids centred at `p = 1` with 64 nodes per decade for each size.
    pub fn centred(sizes: &[usize]) -> Result<Self> {
        let grids = sizes.iter().map(|&n| Grid::centred(1.0, n, 64).map(Arc::new)).collect::<Result<Vec<_>>>()?;
        Ok(Self { grids, ratio: 2.0, path_ratio: 100.0 })
    }
}

/// Sweep range `[p_min², 100 p_max²]` of a grid, which covers every scale it resolves.
pub fn sweep_range(grid: &Grid) -> (f64, f64) {
    (grid.p_min * grid.p_min, 100.0 * grid.p_max * grid.p_max)
}

fn probe(params: &ModelParams, grid: Arc<Grid>, cfg: &ThomasConfig) -> Result<CollapseProbe> {
    let asm = SectorAssembler::new(0, params, grid.clone())?;
    let (lo, hi) = sweep_range(&grid);
    let ladder = lambda_ladder(lo, hi, cfg.ratio)?;
    let pd = |lam: f64| asm.at(lam).map(|op| op.is_positive_definite());
    let mut deepest = None;
    let mut upper = None;
    for w in ladder.windows(2).rev() {
        if !pd(w[0])? {
            deepest = Some(w[0]);
            upper = Some(w[1]);
            break;
        }
    }
    if let (Some(mut a), Some(mut b)) = (deepest, upper) {
        while b / a > 1.001 {
            let mid = (a * b).sqrt();
            if pd(mid)? {
                b = mid;
            } else {
                a = mid;
            }
        }
        deepest = Some(a);
    }
    let mu0_path = lambda_ladder(lo, hi, cfg.path_ratio)?
        .par_iter()
        .map(|&lam| asm.at(lam).map(|op| (lam, op.min_eig())))
        .collect::<Result<Vec<_>>>()?;
    Ok(CollapseProbe { n: grid.n, p_min: grid.p_min, p_max: grid.p_max, deepest_sign_change: deepest, mu0_path })
}

/// Stability verdict from the s-wave symbol and, on each grid, the deepest
/// `λ` at which `Γ^λ` still has a negative mode. In the collapse regime that
/// point tracks the grid cutoff instead of converging.
pub fn thomas_scan(gammas: &[f64], base: &ModelParams, cfg: &ThomasConfig) -> Result<Vec<ThomasRow>> {
    gammas
        .iter()
        .map(|&gamma| {
            if !(gamma > 0.0) {
                return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
            }
            let (k_at_min, min_symbol) = scan_min(SymbolKind::Total, 0, gamma, 40.0, 1024)?;
            let params = base.with_gamma(gamma);
            let probes = cfg.grids.iter().map(|g| probe(&params, g.clone(), cfg)).collect::<Result<Vec<_>>>()?;
            Ok(ThomasRow { gamma, min_symbol, k_at_min, stable: min_symbol > 0.0, probes })
        })
        .collect()
}

/// Weighted matrix of `G^{λ*} 𝒢^λ` in the s-wave, where `𝒢^λ = Σ_j S^j G^λ`
/// is the symmetrized potential: `2π/μ(p)` on the diagonal plus the exchange
/// kernel `16 / ((p² + q² + λ)² − p²q²)`.
pub fn gstar_g_matrix(lambda: f64, grid: &Grid) -> DMatrix<f64> {
    let w = operator_weights(grid);
    let p = &grid.nodes;
    DMatrix::from_fn(grid.n, grid.n, |i, j| {
        let a = p[i] * p[i] + p[j] * p[j] + lambda;
        let off = (w[i] * w[j]).sqrt() * 16.0 / (a * a - (p[i] * p[j]).powi(2));
        if i == j {
            off + 2.0 * PI / (0.75 * p[i] * p[i] + lambda).sqrt()
        } else {
            off
        }
    })
}

/// Exchange part of `(η, G^{λ*} 𝒢^λ η)` with the angular integral done by
/// quadrature instead of in closed form.
pub fn exchange_form_by_quadrature(eta: &SectorCharge, lambda: f64) -> f64 {
    let rule = cached_rule(32);
    let w = operator_weights(&eta.grid);
    let p = &eta.grid.nodes;
    let (u, _) = eta.to_coords();
    (0..eta.grid.n)
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for j in 0..eta.grid.n {
                let a = p[i] * p[i] + p[j] * p[j] + lambda;
                let k = 8.0 * rule.integrate(|y| 1.0 / (a + p[i] * p[j] * y).powi(2));
                s += u[i] * u[j] * (w[i] * w[j]).sqrt() * k;
            }
            s
        })
        .sum()
}

/// Charge part of the resolvent applied to the symmetric source `f = 𝒢^λ η`.
#[derive(Debug, Clone)]
pub struct ResolventCharge {
    /// `ξ = (4π)^{-1} (Γ^λ)^{-1} G^{λ*} f`.
    pub charge: SectorCharge,
    /// `G^{λ*} f`.
    pub gstar_f: SectorCharge,
    /// `‖f‖`, from `‖f‖² = 3 (η, G^{λ*} f)`.
    pub source_norm: f64,
    /// `‖G^{λ*} f‖ / ‖f‖`.
    pub gstar_ratio: f64,
    /// `‖Γ^λ ξ − (4π)^{-1} G^{λ*} f‖ / ‖(4π)^{-1} G^{λ*} f‖`.
    pub domain_residual: f64,
    /// Relative difference of `‖f‖²` between the closed-form and the
    /// angular-quadrature exchange term.
    pub norm_discrepancy: f64,
}

/// Solves for the charge of `(H + λ)^{-1} f` with `f = 𝒢^λ η` and an s-wave `η`.
pub fn resolvent_charge(eta: &SectorCharge, params: &ModelParams) -> Result<ResolventCharge> {
    if eta.l != 0 {
        return Err(Error::Unsupported(format!("resolvent sources are s-wave only, got l = {}", eta.l)));
    }
    let grid = eta.grid.clone();
    let gg = SectorOperator::new(0, grid.clone(), gstar_g_matrix(params.lambda, &grid))?;
    let gstar_f = gg.apply(eta);
    let pairing = gg.form(eta);
    let source_sq = 3.0 * pairing;
    let diag_form: f64 = {
        let (u, v) = eta.to_coords();
        grid.nodes
            .iter()
            .enumerate()
            .map(|(j, &p)| 2.0 * PI / (0.75 * p * p + params.lambda).sqrt() * (u[j] * u[j] + v[j] * v[j]))
            .sum()
    };
    let (_, im) = eta.to_coords();
    let quad_sq = 3.0 * (diag_form + exchange_form_by_quadrature(eta, params.lambda) + {
        let im_charge = SectorCharge::from_coords(0, grid.clone(), &im, &nalgebra::DVector::zeros(grid.n));
        exchange_form_by_quadrature(&im_charge, params.lambda)
    });
    let norm_discrepancy = if source_sq > 0.0 { ((source_sq - quad_sq) / source_sq).abs() } else { 0.0 };
    let rhs = gstar_f.scaled(1.0 / (4.0 * PI));
    let op = assemble_gamma(0, params, grid)?;
    let sol = solve_with_operator(&op, &rhs)?;
    let back = op.apply(&sol.charge);
    let rn = rhs.l2_norm();
    let domain_residual = if rn > 0.0 { back.sub(&rhs).l2_norm() / rn } else { back.l2_norm() };
    let source_norm = source_sq.max(0.0).sqrt();
    let gstar_ratio = if source_norm > 0.0 { gstar_f.l2_norm() / source_norm } else { 0.0 };
    Ok(ResolventCharge { charge: sol.charge, gstar_f, source_norm, gstar_ratio, domain_residual, norm_discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stmform::{CutoffKind, CutoffProfile};

    fn unit(gamma: f64, beta: f64, lambda: f64) -> ModelParams {
        ModelParams::new(beta, gamma, lambda, CutoffProfile::one()).unwrap()
    }

    fn grid(n: usize) -> Arc<Grid> {
        Arc::new(Grid::new(1e-4, 1e4, n).unwrap())
    }

    #[test]
    fn ladder_shape() {
        let l = lambda_ladder(1e-3, 1.0, 2.0).unwrap();
        assert_eq!(l[0], 1e-3);
        assert_eq!(*l.last().unwrap(), 1.0);
        assert!(l.windows(2).all(|w| w[1] / w[0] <= 2.0 + 1e-12));
        assert!(lambda_ladder(1.0, 0.5, 2.0).is_err());
    }

    #[test]
    fn regular_coupling_is_positive_at_large_lambda() {
        assert!(min_eig(0, 100.0, &unit(1.2, 0.0, 1.0), grid(256)).unwrap() > 0.0);
    }

    #[test]
    fn collapse_coupling_goes_negative() {
        assert!(min_eig(0, 1e4, &unit(0.5, 0.0, 1.0), grid(512)).unwrap() < 0.0);
    }

    #[test]
    fn smallest_eigenvalue_is_continuous_in_lambda() {
        let p = unit(1.5, -0.5, 1.0);
        let g = grid(192);
        let a = min_eig(0, 2.0, &p, g.clone()).unwrap();
        let d: Vec<f64> = [1e-2, 1e-4, 1e-6].iter().map(|&e| (min_eig(0, 2.0 + e, &p, g.clone()).unwrap() - a).abs()).collect();
        assert!(d[0] > d[1] && d[1] > d[2] && d[2] < 1e-5, "{d:?}");
    }

    #[test]
    fn smallest_eigenvalue_grows_with_gamma() {
        let g = grid(192);
        let mut last = f64::NEG_INFINITY;
        for gamma in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let m = min_eig(0, 1.0, &unit(gamma, 0.0, 1.0), g.clone()).unwrap();
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn attractive_pair_binds() {
        let search = bound_states(&unit(1.0, -2.0, 1.0), 0, (1e-3, 1e6), 3, grid(256)).unwrap();
        assert_eq!(search.states.len(), 3);
        assert!(search.states.windows(2).all(|w| w[0].energy <= w[1].energy));
        assert!((search.states[0].energy + 4.0).abs() < 1e-3, "{}", search.states[0].energy);
        for s in &search.states {
            assert!(s.energy < 0.0 && s.residual < 1e-8);
            assert!((s.charge.l2_norm() - 1.0).abs() < 1e-12);
            let op = assemble_gamma(0, &unit(1.0, -2.0, -s.energy), s.charge.grid.clone()).unwrap();
            let r = op.apply(&s.charge).l2_norm() / s.charge.l2_norm();
            assert!(r < 1e-8, "{r}");
        }
        assert!(!search.collapse_regime);
    }

    #[test]
    fn bound_state_energy_is_grid_stable() {
        let p = unit(1.0, -2.0, 1.0);
        let a = bound_states(&p, 0, (1e-3, 1e6), 1, grid(256)).unwrap().states[0].energy;
        let b = bound_states(&p, 0, (1e-3, 1e6), 1, grid(511)).unwrap().states[0].energy;
        assert!(((a - b) / b).abs() < 0.01, "{a} {b}");
    }

    #[test]
    fn repulsive_pair_has_no_bound_state() {
        let p = unit(3.0, 1.0, 1.0);
        let l0 = crate::stmform::lambda0(&p).unwrap();
        let search = bound_states(&p, 0, (1e-3 * l0, 10.0 * l0), 5, grid(256)).unwrap();
        assert!(search.states.is_empty());
        assert!(search.negative_counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn thomas_verdicts() {
        let cfg = ThomasConfig { grids: vec![Arc::new(Grid::centred(1.0, 128, 32).unwrap())], ratio: 4.0, path_ratio: 1e4 };
        let rows = thomas_scan(&[0.5, 1.0], &unit(1.0, 0.0, 1.0), &cfg).unwrap();
        assert!(!rows[0].stable && rows[0].probes[0].deepest_sign_change.is_some());
        assert!(rows[1].stable && rows[1].probes[0].deepest_sign_change.is_none());
        assert!(thomas_scan(&[0.0], &unit(1.0, 0.0, 1.0), &cfg).is_err());
    }

    #[test]
    fn verdict_flips_at_threshold() {
        let gc = crate::symbols::critical_constants::<f64>().gamma_c;
        let cfg = ThomasConfig { grids: vec![], ratio: 2.0, path_ratio: 10.0 };
        let rows = thomas_scan(&[gc - 1e-3, gc + 1e-3], &unit(1.0, 0.0, 1.0), &cfg).unwrap();
        assert!(!rows[0].stable && rows[1].stable);
    }

    #[test]
    fn resolvent_charge_identities() {
        let g = grid(256);
        let p = unit(2.0, 0.5, 2.0);
        let eta = SectorCharge::from_fn(0, g.clone(), |q| (-q * q).exp());
        let r = resolvent_charge(&eta, &p).unwrap();
        assert!(r.domain_residual < 1e-9);
        assert!(r.norm_discrepancy < 1e-10, "{}", r.norm_discrepancy);
        let zero = resolvent_charge(&SectorCharge::zeros(0, g.clone()), &p).unwrap();
        assert_eq!(zero.charge.l2_norm(), 0.0);
        let fine = resolvent_charge(&SectorCharge::from_fn(0, grid(511), |q| (-q * q).exp()), &p).unwrap();
        assert!(((r.gstar_ratio - fine.gstar_ratio) / fine.gstar_ratio).abs() < 1e-3);
        assert!(resolvent_charge(&SectorCharge::zeros(1, g), &p).is_err());
    }

    #[test]
    fn resolvent_with_indicator_cutoff() {
        let g = grid(256);
        let base = ModelParams::new(-1.0, 3.0, 1.0, CutoffProfile::new(CutoffKind::Indicator, 1.0).unwrap()).unwrap();
        let p = base.with_lambda(crate::stmform::coercive_lambda(&base).unwrap());
        let eta = SectorCharge::from_fn(0, g, |q| 1.0 / (1.0 + q * q).powi(2));
        assert!(resolvent_charge(&eta, &p).unwrap().domain_residual < 1e-9);
    }
}
