use super::kernels::kernel_diag;
use super::operator::{assemble_gamma, assemble_off, assemble_reg1, assemble_reg2, operator_weights, SectorCharge, SectorOperator};
use super::params::ModelParams;
use crate::quadspec::{cached_rule, legendre_p_all, LogHankel};
use crate::{Error, Grid, Result};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Solution of `Γ^λ ξ = f` in one sector with diagnostics.
#[derive(Debug, Clone)]
pub struct ChargeSolution {
    pub charge: SectorCharge,
    /// `‖Mu − b‖ / ‖b‖` in operator coordinates.
    pub residual: f64,
    /// Discrete `H^{1/2}`, `H^1`, `H^{3/2}` norms squared.
    pub h_half: f64,
    pub h_one: f64,
    pub h_three_half: f64,
}

fn cholesky_solve(op: &SectorOperator, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let chol = op
        .matrix
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotCoercive { min_eig: op.min_eig() })?;
    let mut x = chol.solve(rhs);
    for _ in 0..3 {
        let r = rhs - &op.matrix * &x;
        x += chol.solve(&r);
    }
    Ok(x)
}

/// Solves `M u = √w f` with an already assembled operator.
pub fn solve_with_operator(op: &SectorOperator, f: &SectorCharge) -> Result<ChargeSolution> {
    if f.grid.n != op.dim() {
        return Err(Error::Grid(format!("{} samples for a {}-dimensional operator", f.grid.n, op.dim())));
    }
    let (bre, bim) = f.to_coords();
    let xre = cholesky_solve(op, &bre)?;
    let xim = if bim.iter().all(|v| *v == 0.0) { DVector::zeros(op.dim()) } else { cholesky_solve(op, &bim)? };
    let rnorm = ((&op.matrix * &xre - &bre).norm_squared() + (&op.matrix * &xim - &bim).norm_squared()).sqrt();
    let bnorm = (bre.norm_squared() + bim.norm_squared()).sqrt();
    let residual = if bnorm > 0.0 { rnorm / bnorm } else { rnorm };
    let charge = SectorCharge::from_coords(op.l, op.grid.clone(), &xre, &xim);
    Ok(ChargeSolution {
        h_half: charge.sobolev_norm_sq(0.5),
        h_one: charge.sobolev_norm_sq(1.0),
        h_three_half: charge.sobolev_norm_sq(1.5),
        residual,
        charge,
    })
}

/// Solves `Γ^λ ξ = f` in sector `f.l`; fails with [`Error::NotCoercive`]
/// when the assembled matrix is not positive definite.
pub fn solve_charge(params: &ModelParams, f: &SectorCharge) -> Result<ChargeSolution> {
    let op = assemble_gamma(f.l, params, f.grid.clone())?;
    solve_with_operator(&op, f)
}

fn t_matrix(l: usize, gamma: f64, grid: &Grid) -> Result<DMatrix<f64>> {
    let mut m = assemble_off(l, 0.0, grid)?;
    m += assemble_reg2(l, gamma, grid);
    for (j, &p) in grid.nodes.iter().enumerate() {
        m[(j, j)] += 0.75f64.sqrt() * p;
    }
    Ok(m)
}

/// The scale-invariant operator `T = (√3/2) p + Γ_off^0 + γ/|y|` applied to a charge.
pub fn t_operator_apply(xi: &SectorCharge, gamma: f64) -> Result<SectorCharge> {
    let op = SectorOperator::new(xi.l, xi.grid.clone(), t_matrix(xi.l, gamma, &xi.grid)?)?;
    Ok(op.apply(xi))
}

/// Kernel of `Γ_off^λ − Γ_off^0`,
/// `(2λ/π) ∫ P_l(y) / ((p² + q² + pqy + λ)(p² + q² + pqy)) dy`, by Gauss–Legendre in `y`.
pub fn lambda_kernel(l: usize, p: f64, q: f64, lambda: f64) -> f64 {
    let rule = cached_rule(32);
    let a0 = p * p + q * q;
    2.0 * lambda / PI
        * rule.integrate(|y| {
            let d = a0 + p * q * y;
            legendre_p_all(l, y)[l] / ((d + lambda) * d)
        })
}

/// Weighted matrix of [`lambda_kernel`] on a grid.
pub fn lambda_kernel_matrix(l: usize, lambda: f64, grid: &Grid) -> DMatrix<f64> {
    let w = operator_weights(grid);
    let p = &grid.nodes;
    let rows: Vec<Vec<f64>> = (0..grid.n)
        .into_par_iter()
        .map(|i| (0..grid.n).map(|j| (w[i] * w[j]).sqrt() * lambda_kernel(l, p[i], p[j], lambda)).collect())
        .collect();
    DMatrix::from_fn(grid.n, grid.n, |i, j| rows[i][j])
}

/// `f^λ = f − (Γ^λ − T) ξ`, with the exchange difference computed from
/// [`lambda_kernel`] rather than from the two assembled exchange matrices.
pub fn f_lambda_correction(xi: &SectorCharge, f: &SectorCharge, params: &ModelParams) -> Result<SectorCharge> {
    let grid = &xi.grid;
    let lam = params.lambda;
    let mut m = lambda_kernel_matrix(xi.l, lam, grid);
    m += assemble_reg1(xi.l, params, grid);
    for (j, &p) in grid.nodes.iter().enumerate() {
        m[(j, j)] += kernel_diag(p, lam) - 0.75f64.sqrt() * p;
    }
    let correction = SectorOperator::new(xi.l, grid.clone(), m)?.apply(xi);
    Ok(f.sub(&correction))
}

/// Both sides of the Hardy inequality `∫ |ξ(y)|²/|y| dy ≤ (π/2) ∫ p |ξ̂(p)|² dp`
/// for an s-wave charge, the left side through the discrete order-zero
/// Hankel transform.
pub fn hardy_check(xi: &SectorCharge) -> (f64, f64) {
    let grid = &xi.grid;
    let hankel = LogHankel::new(grid, 0);
    let inv_r: Vec<f64> = hankel.radii.iter().map(|r| 1.0 / r).collect();
    let (ure, uim) = xi.to_coords();
    let lhs: f64 = [ure, uim]
        .iter()
        .map(|u| (&hankel.matrix * u).iter().zip(&inv_r).map(|(v, m)| v * v * m).sum::<f64>())
        .sum();
    let rhs = PI / 2.0 * xi.moment(1.0);
    (lhs, rhs)
}

/// One row of [`greens_asymptotic_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensRow {
    pub x: f64,
    pub error: f64,
}

fn one_minus_mean_decay(z: f64) -> f64 {
    if z < 1e-3 {
        z / 2.0 - z * z / 6.0 + z * z * z / 24.0
    } else {
        1.0 - (-(-z).exp_m1()) / z
    }
}

/// s-wave `L²` size of `G^λ ξ(x, ·) − ξ/x + Γ_diag^λ ξ` at each distance `x`.
///
/// In momentum space the expression is `μ ξ̂ (1 − (1 − e^{−μx})/(μx))` with
/// `μ = √(3p²/4 + λ)`, which vanishes linearly in `x`.
pub fn greens_asymptotic_check(xi: &SectorCharge, params: &ModelParams, xs: &[f64]) -> Vec<GreensRow> {
    let w = operator_weights(&xi.grid);
    xs.iter()
        .map(|&x| {
            let s: f64 = xi
                .grid
                .nodes
                .iter()
                .zip(&w)
                .zip(&xi.values)
                .map(|((&p, w), v)| {
                    let mu = kernel_diag(p, params.lambda);
                    let d = mu * one_minus_mean_decay(mu * x);
                    w * v.norm_sqr() * d * d
                })
                .sum();
            GreensRow { x, error: s.sqrt() }
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stmform::{CutoffKind, CutoffProfile};
    use crate::testing::{random_charges, seeded};
    use std::sync::Arc;

    fn grid(n: usize) -> Arc<Grid> {
        Arc::new(Grid::new(1e-4, 1e4, n).unwrap())
    }

    fn unit(gamma: f64, beta: f64, lambda: f64) -> ModelParams {
        ModelParams::new(beta, gamma, lambda, CutoffProfile::one()).unwrap()
    }

    fn gaussian(l: usize, g: &Arc<Grid>) -> SectorCharge {
        SectorCharge::from_fn(l, g.clone(), |p| (-p * p / 2.0).exp())
    }

    #[test]
    fn round_trip_recovers_known_charge() {
        let g = grid(192);
        let params = unit(2.5, 0.3, 2.0);
        let op = assemble_gamma(0, &params, g.clone()).unwrap();
        let xi0 = gaussian(0, &g);
        let sol = solve_with_operator(&op, &op.apply(&xi0)).unwrap();
        assert!(sol.residual < 1e-10);
        assert!(sol.charge.sub(&xi0).l2_norm() < 1e-9 * xi0.l2_norm());
    }

    #[test]
    fn zero_source_gives_zero_charge() {
        let g = grid(96);
        let sol = solve_charge(&unit(2.0, 0.0, 1.0), &SectorCharge::zeros(0, g)).unwrap();
        assert_eq!(sol.charge.l2_norm(), 0.0);
    }

    #[test]
    fn indefinite_operator_is_reported() {
        let g = grid(128);
        let r = solve_charge(&unit(0.0, -3.0, 1.0), &gaussian(0, &g));
        assert!(matches!(r, Err(Error::NotCoercive { min_eig }) if min_eig < 0.0));
    }

    #[test]
    fn smooth_solution_norms_are_stable_under_refinement() {
        let params = unit(2.5, 0.0, 1.0);
        let coarse = solve_charge(&params, &gaussian(0, &grid(256))).unwrap();
        let fine = solve_charge(&params, &gaussian(0, &grid(511))).unwrap();
        let a = coarse.charge.moment(3.0);
        let b = fine.charge.moment(3.0);
        assert!(((a - b) / b).abs() < 0.02, "{a} {b}");
        let da = coarse.charge.l2_norm();
        let db = fine.charge.l2_norm();
        assert!(((da - db) / db).abs() < 0.01);
        assert!(coarse.residual < 1e-10 && fine.residual < 1e-10);
    }

    #[test]
    fn reformulated_equation_holds_for_solved_charges() {
        let g = grid(192);
        for (params, l) in [
            (unit(2.0, 0.5, 3.0), 0),
            (unit(1.5, -0.2, 1.0), 1),
            (ModelParams::new(0.0, 3.0, 4.0, CutoffProfile::new(CutoffKind::Exponential, 2.0).unwrap()).unwrap(), 0),
        ] {
            let f = gaussian(l, &g);
            let sol = solve_charge(&params, &f).unwrap();
            let t = t_operator_apply(&sol.charge, params.gamma).unwrap();
            let fl = f_lambda_correction(&sol.charge, &f, &params).unwrap();
            let (a, _) = t.to_coords();
            let (b, _) = fl.to_coords();
            assert!((&a - &b).norm() < 1e-8 * b.norm(), "{}", (&a - &b).norm() / b.norm());
        }
    }

    #[test]
    fn diagonal_difference_vanishes_with_lambda() {
        for &p in &[0.1, 1.0, 10.0] {
            let d = |lam: f64| kernel_diag(p, lam) - 0.75f64.sqrt() * p;
            assert!(d(1e-8) < 1e-3 && d(1e-8) < d(1e-4) && d(1e-4) < d(1.0));
        }
    }

    #[test]
    fn lambda_kernel_matches_exchange_difference() {
        for &(l, p, q, lam) in &[(0, 1.0, 2.0, 1.0), (1, 0.3, 0.7, 5.0), (2, 4.0, 4.5, 0.2)] {
            let d = crate::stmform::kernel_off(l, p, q, lam).unwrap() - crate::stmform::kernel_off(l, p, q, 0.0).unwrap();
            assert!((d - lambda_kernel(l, p, q, lam)).abs() < 1e-12 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn lambda_kernel_is_hilbert_schmidt() {
        let a = lambda_kernel_matrix(0, 1.0, &Grid::new(1e-3, 1e3, 128).unwrap()).norm();
        let b = lambda_kernel_matrix(0, 1.0, &Grid::new(1e-3, 1e3, 255).unwrap()).norm();
        let c = lambda_kernel_matrix(0, 1.0, &Grid::new(1e-4, 1e4, 340).unwrap()).norm();
        assert!(((a - b) / b).abs() < 0.02 && ((b - c) / c).abs() < 0.02, "{a} {b} {c}");
    }

    #[test]
    fn hardy_gaussian_values() {
        let (lhs, rhs) = hardy_check(&gaussian(0, &grid(512)));
        assert!((lhs - 0.5).abs() < 1e-6, "{lhs}");
        assert!((rhs - PI / 4.0).abs() < 1e-9);
        assert!(lhs < rhs);
    }

    #[test]
    fn hardy_zero_and_scaling() {
        let g = grid(512);
        assert_eq!(hardy_check(&SectorCharge::zeros(0, g.clone())), (0.0, 0.0));
        let (l1, r1) = hardy_check(&gaussian(0, &g));
        let s = 3.0;
        let (l2, r2) = hardy_check(&SectorCharge::from_fn(0, g, |p| (-(s * p).powi(2) / 2.0).exp()));
        assert!((l2 / l1 * s.powi(4) - 1.0).abs() < 1e-6);
        assert!((r2 / r1 * s.powi(4) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn hardy_holds_on_random_charges() {
        let g = grid(384);
        let mut rng = seeded(3);
        for xi in random_charges(&mut rng, 0, g, 20) {
            let (lhs, rhs) = hardy_check(&xi);
            assert!(lhs <= rhs * (1.0 + 1e-6));
        }
    }

    #[test]
    fn greens_deviation_is_linear_in_distance() {
        let g = grid(256);
        let xs = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
        let rows = greens_asymptotic_check(&gaussian(0, &g), &unit(1.0, 0.0, 1.0), &xs);
        assert!(rows.windows(2).all(|w| w[1].error < w[0].error));
        let slope = log_log_slope(&xs, &rows.iter().map(|r| r.error).collect::<Vec<_>>());
        assert!((slope - 1.0).abs() < 0.2, "{slope}");
        let zero = greens_asymptotic_check(&SectorCharge::zeros(0, g), &unit(1.0, 0.0, 1.0), &xs);
        assert!(zero.iter().all(|r| r.error == 0.0));
    }

    #[test]
    fn small_argument_branch_is_continuous() {
        let z = 1e-3;
        assert!((one_minus_mean_decay(z * (1.0 - 1e-12)) - one_minus_mean_decay(z * (1.0 + 1e-12))).abs() < 1e-13);
    }
}
