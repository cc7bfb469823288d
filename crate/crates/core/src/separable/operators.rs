use super::form_factor::FormFactor;
use super::model::{nu_at, EpsModel};
use crate::quadspec::{bessel_k2, cached_rule, LogHankel, RadialPanels};
use crate::stmform::{assemble_reg_transform, hardy_check, operator_weights, SectorCharge, SectorOperator};
use crate::{Error, Grid, Result, C64};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

const Y_PANELS: usize = 4;
const Y_ORDER: usize = 24;

pub(crate) fn symmetric_fill<F: Fn(usize, usize) -> f64 + Sync>(n: usize, f: F) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|i| (0..=i).map(|j| f(i, j)).collect()).collect();
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// `F diag(m) F` for complex values `m_i` at the reciprocal radii.
pub fn complex_multiplier(hankel: &LogHankel, m: &[C64]) -> DMatrix<C64> {
    let f = hankel.matrix.map(|x| C64::new(x, 0.0));
    let scaled = DMatrix::from_fn(f.nrows(), f.ncols(), |i, j| m[i] * f[(i, j)]);
    &f * scaled
}

/// Values of `ν_ε` at the reciprocal radii of the s-wave log Hankel grid.
pub fn nu_values(model: &EpsModel, hankel: &LogHankel) -> Vec<C64> {
    hankel.radii.iter().map(|&r| nu_at(r, model)).collect()
}

/// Position multiplier `ν_ε` in unitary s-wave momentum coordinates.
pub fn nu_matrix(model: &EpsModel, grid: &Grid) -> DMatrix<C64> {
    let hankel = LogHankel::new(grid, 0);
    complex_multiplier(&hankel, &nu_values(model, &hankel))
}

/// `ν_ε` restricted to the grid window but applied on a grid extended by
/// three decades on each side, so that charges at the window edges do not
/// wrap around the periodic log transform.
pub fn windowed_nu_matrix(model: &EpsModel, grid: &Grid) -> Result<DMatrix<C64>> {
    let h = grid.log_step();
    let pad = (3.0 * std::f64::consts::LN_10 / h).ceil() as usize;
    let shift = pad as f64 * h;
    let ext = Grid::new(grid.p_min * (-shift).exp(), grid.p_max * shift.exp(), grid.n + 2 * pad)?;
    Ok(nu_matrix(model, &ext).view((pad, pad), (grid.n, grid.n)).into_owned())
}

/// s-wave exchange kernel
/// `−16π² ∫ χ̂(ε|p/2 + q|) χ̂(ε|p + q/2|) / (p² + q² + pqy + λ) dy`.
pub fn kernel_off_eps(p: f64, q: f64, model: &EpsModel) -> f64 {
    let lam = model.lambda();
    let rule = cached_rule(Y_ORDER);
    let s = rule.integrate_panels(-1.0, 1.0, Y_PANELS, |y| {
        let pq = p * q * y;
        let a = (0.25 * p * p + q * q + pq).max(0.0).sqrt();
        let b = (p * p + 0.25 * q * q + pq).max(0.0).sqrt();
        model.chi_hat_eps(a) * model.chi_hat_eps(b) / (p * p + q * q + pq + lam)
    });
    -16.0 * PI * PI * s
}

/// Weighted matrix of `Γ_off,ε`.
pub fn assemble_off_eps(model: &EpsModel, grid: &Grid) -> DMatrix<f64> {
    let w = operator_weights(grid);
    let p = &grid.nodes;
    symmetric_fill(grid.n, |i, j| (w[i] * w[j]).sqrt() * kernel_off_eps(p[i], p[j], model))
}

/// Diagonal of `Γ_diag,ε`.
pub fn assemble_diag_eps(model: &EpsModel, grid: &Grid) -> DMatrix<f64> {
    let d: Vec<f64> = grid.nodes.par_iter().map(|&p| model.gamma_diag(p)).collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
}

/// s-wave matrix of `Γ_ε^λ = Γ_reg + Γ_diag,ε + Γ_off,ε`, with `Γ_reg` applied
/// through the log Hankel transform.
pub fn gamma_eps_assemble(model: &EpsModel, grid: Arc<Grid>) -> Result<SectorOperator> {
    if !(model.lambda() > 0.0) {
        return Err(Error::Domain(format!("gamma_eps needs lambda > 0, got {}", model.lambda())));
    }
    let mut m = assemble_off_eps(model, &grid);
    m += assemble_diag_eps(model, &grid);
    m += assemble_reg_transform(0, &model.params, &grid);
    SectorOperator::new(0, grid, m)
}

/// `‖Γ_off,ε‖ ≤ 8π (2π)^{-3/2} (4π²/√2)^{1/2} λ^{-1/4} ε^{-3/2} ‖χ‖_{L²}`.
pub fn off_eps_norm_bound(model: &EpsModel) -> f64 {
    let c = 8.0 * PI * (2.0 * PI).powf(-1.5) * (4.0 * PI * PI / 2f64.sqrt()).sqrt();
    c * model.lambda().powf(-0.25) * model.eps.powf(-1.5) * model.chi.l2_norm_sq().sqrt()
}

/// `J_ε(y) = 32π² ∫ k² (sin ky / ky) χ̂(εk) χ̂(εk/2) / (k² + λ) dk` at each `y`,
/// the radial weight that dominates `−Γ_off,ε` in the position-space form.
pub fn j_eps(ys: &[f64], model: &EpsModel) -> Result<Vec<f64>> {
    if let Some(&y) = ys.iter().find(|&&y| !(y > 0.0)) {
        return Err(Error::Domain(format!("J_eps needs y > 0, got {y}")));
    }
    let scale = model.eps * model.chi.sigma;
    let panels = RadialPanels::anchored(1.0 / scale, 40.0 / scale)?;
    let lam = model.lambda();
    let g: Vec<f64> = panels
        .nodes
        .iter()
        .map(|&k| k * model.chi_hat_eps(k) * model.chi_hat_eps(0.5 * k) / (k * k + lam))
        .collect();
    let s = panels.sine_integrals(&g, ys)?;
    Ok(ys.iter().zip(s).map(|(&y, v)| 32.0 * PI * PI * v / y).collect())
}

/// `J_ε` for a gaussian form factor as `8π (ρ ∗ Y)(y)` with the gaussian
/// `ρ` of variance `5ε²σ²/4` and the Yukawa potential `Y(R) = e^{−√λ R}/(4πR)`.
pub fn j_eps_gaussian_position(y: f64, model: &EpsModel) -> Result<f64> {
    if model.chi.profile != super::FormProfile::Gaussian {
        return Err(Error::Unsupported("position-space J_eps is implemented for the gaussian profile".into()));
    }
    if !(y > 0.0 && model.lambda() > 0.0) {
        return Err(Error::Domain(format!("need y > 0 and lambda > 0, got {y}, {}", model.lambda())));
    }
    let s2 = 1.25 * (model.eps * model.chi.sigma).powi(2);
    let s = s2.sqrt();
    let m = model.lambda().sqrt();
    let rho = |z: f64| (2.0 * PI * s2).powf(-1.5) * (-z * z / (2.0 * s2)).exp();
    let f = |z: f64| {
        let shell = (-m * (y - z).abs()).exp() - (-m * (y + z)).exp();
        z * z * rho(z) * shell / (2.0 * m * y * z)
    };
    let rule = cached_rule(24);
    let z_max = 14.0 * s;
    let v = if y < z_max {
        rule.integrate_panels(0.0, y, 16, f) + rule.integrate_panels(y, z_max, 16, f)
    } else {
        rule.integrate_panels(0.0, z_max, 32, f)
    };
    Ok(8.0 * PI * v)
}

/// Free resolvent kernel of `−Δ_x − (3/4)Δ_y + λ` in six dimensions,
/// `λ K₂(√(4λ/3) ρ) / (4√3 π³ ρ²)` with `ρ² = (3/4)|Δx|² + |Δy|²`.
pub fn resolvent_kernel_6d(lambda: f64, dx: f64, dy: f64) -> Result<f64> {
    let rho2 = 0.75 * dx * dx + dy * dy;
    if !(rho2 > 0.0 && lambda > 0.0) {
        return Err(Error::Domain("resolvent kernel needs a positive separation and lambda".into()));
    }
    let rho = rho2.sqrt();
    Ok(lambda * bessel_k2((4.0 * lambda / 3.0).sqrt() * rho)? / (4.0 * 3f64.sqrt() * PI.powi(3) * rho2))
}

/// `e^{−√λ r}/(4πr)`.
pub fn yukawa(lambda: f64, r: f64) -> f64 {
    (-lambda.sqrt() * r).exp() / (4.0 * PI * r)
}

/// Position form `Σ_i v_i² m(r_i)` of a real multiplier sampled at the
/// reciprocal radii, in the unitary s-wave coordinates of `xi`.
pub fn position_form(xi: &SectorCharge, m: &[f64]) -> f64 {
    let hankel = LogHankel::new(&xi.grid, 0);
    let (re, im) = xi.to_coords();
    [re, im]
        .iter()
        .map(|u| (&hankel.matrix * u).iter().zip(m).map(|(v, w)| v * v * w).sum::<f64>())
        .sum()
}

/// Margins of the exchange lower bound on each charge: the pair
/// `((ξ, Γ_off,ε ξ) + γ₀(ξ, ξ/y), γ₀(ξ, ξ/y) − (ξ, J_ε ξ))`, both non-negative
/// when the bound holds.
pub fn off_eps_lower_bound_margins(model: &EpsModel, charges: &[SectorCharge]) -> Result<Vec<(f64, f64)>> {
    let Some(first) = charges.first() else {
        return Ok(Vec::new());
    };
    let grid = first.grid.clone();
    if charges.iter().any(|c| c.l != 0 || !Arc::ptr_eq(&c.grid, &grid)) {
        return Err(Error::Grid("charges must be s-wave on one shared grid".into()));
    }
    let off = SectorOperator::new(0, grid.clone(), assemble_off_eps(model, &grid))?;
    let hankel = LogHankel::new(&grid, 0);
    let j = j_eps(&hankel.radii, model)?;
    let g0 = model.consts.gamma0;
    Ok(charges
        .iter()
        .map(|xi| {
            let inv_y = hardy_check(xi).0;
            (off.form(xi) + g0 * inv_y, g0 * inv_y - position_form(xi, &j))
        })
        .collect())
}

/// `χ̂(εk)` integrals over `d³k` that appear in `A_ε^λ`, at `μ = √(3p²/4 + λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelIntegrals {
    /// `(4π)² ∫ χ̂(εk)² / (k² + μ²)² d³k`.
    pub i1: f64,
    /// `(4π)² χ̂(0) ∫ χ̂(εk) / (k² + μ²)² d³k`.
    pub i2: f64,
    /// `2π/μ`, the same with `χ̂ ≡ χ̂(0)`.
    pub i3: f64,
    /// `(4π)² ∫ (χ̂(εk) − χ̂(0))² / (k² + μ²)² d³k`.
    pub i_diff: f64,
}

pub fn channel_integrals(mu: f64, eps: f64, chi: &FormFactor) -> ChannelIntegrals {
    let h0 = FormFactor::hat_at_zero();
    let c = (4.0 * PI).powi(3);
    let radial = |f: &dyn Fn(f64) -> f64| {
        c / mu * super::form_factor::integrate_half_line(|t| t * t * f(eps * mu * t) / (t * t + 1.0).powi(2), 1.0)
    };
    ChannelIntegrals {
        i1: radial(&|k| chi.chi_hat(k).powi(2)),
        i2: radial(&|k| h0 * chi.chi_hat(k)),
        i3: 2.0 * PI / mu,
        i_diff: radial(&|k| (chi.chi_hat(k) - h0).powi(2)),
    }
}

/// Channel integrals at every grid node.
pub fn channel_table(model: &EpsModel, grid: &Grid) -> Vec<ChannelIntegrals> {
    let lam = model.lambda();
    grid.nodes
        .par_iter()
        .map(|&p| channel_integrals((0.75 * p * p + lam).sqrt(), model.eps, &model.chi))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stmform::{assemble_off, kernel_off, CutoffKind, CutoffProfile, ModelParams};
    use crate::testing::{random_swave_charges, seeded};

    fn model(eps: f64, lambda: f64) -> EpsModel {
        let p = ModelParams::new(0.0, 3.0, lambda, CutoffProfile::one()).unwrap();
        EpsModel::new(eps, p, FormFactor::gaussian(1.0).unwrap()).unwrap()
    }

    #[test]
    fn exchange_kernel_tends_to_the_contact_kernel() {
        for &(p, q) in &[(0.1, 0.3), (1.0, 1.0), (2.0, 0.5)] {
            let k0 = kernel_off(0, p, q, 2.0).unwrap();
            let errs: Vec<f64> =
                [1e-1, 1e-2, 1e-3].iter().map(|&e| (kernel_off_eps(p, q, &model(e, 2.0)) - k0).abs()).collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 1e-5 * k0.abs(), "{errs:?}");
        }
    }

    #[test]
    fn diagonal_tends_to_the_contact_diagonal() {
        for &p in &[0.1, 1.0, 5.0] {
            let mu = (0.75 * p * p + 2.0f64).sqrt();
            let errs: Vec<f64> = [1e-1, 1e-2, 1e-3].iter().map(|&e| (model(e, 2.0).gamma_diag(p) - mu).abs()).collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 1e-2 * mu, "{errs:?}");
        }
    }

    #[test]
    fn exchange_matrix_converges_on_a_fixed_grid() {
        let grid = Grid::new(1e-2, 1e2, 48).unwrap();
        let k0 = assemble_off(0, 1.0, &grid).unwrap();
        let d: Vec<f64> =
            [0.1, 0.01, 0.001].iter().map(|&e| (assemble_off_eps(&model(e, 1.0), &grid) - &k0).norm()).collect();
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    }

    #[test]
    fn exchange_norm_is_below_its_bound() {
        let grid = Grid::new(1e-3, 1e4, 256).unwrap();
        for &(e, l) in &[(0.2, 1.0), (0.05, 1.0), (0.05, 20.0)] {
            let m = model(e, l);
            let a = assemble_off_eps(&m, &grid);
            let norm = a.symmetric_eigenvalues().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            assert!(norm <= off_eps_norm_bound(&m), "eps={e} lambda={l}: {norm}");
        }
    }

    #[test]
    fn six_dimensional_kernel_integrates_to_yukawa() {
        let rule = cached_rule(32);
        for &(lam, d) in &[(1.0, 0.5), (2.0, 1.3), (0.3, 3.0)] {
            let v = 4.0 * PI
                * rule.integrate_panels(0.0, 60.0 / (lam as f64).sqrt(), 64, |t| {
                    t * t * resolvent_kernel_6d(lam, d, t).unwrap()
                });
            let want = yukawa(lam, d);
            assert!((v - want).abs() < 1e-9 * want, "{v} {want}");
        }
        assert!(resolvent_kernel_6d(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn weight_agrees_between_momentum_and_position() {
        for &(e, l) in &[(0.2, 1.0), (0.05, 3.0)] {
            let m = model(e, l);
            let ys = [0.01, 0.1, 0.5, 2.0, 9.0];
            let mom = j_eps(&ys, &m).unwrap();
            for (&y, &a) in ys.iter().zip(&mom) {
                let b = j_eps_gaussian_position(y, &m).unwrap();
                assert!((a - b).abs() < 1e-8 * b.abs() + 1e-13, "eps={e} y={y}: {a} {b}");
            }
        }
        let exp = EpsModel::new(0.1, model(0.1, 1.0).params, FormFactor::exponential(1.0).unwrap()).unwrap();
        assert!(matches!(j_eps_gaussian_position(1.0, &exp), Err(Error::Unsupported(_))));
    }

    #[test]
    fn weight_tends_to_the_point_limit() {
        let y: f64 = 1.5;
        let want = 2.0 * (-y).exp() / y;
        let errs: Vec<f64> = [0.1, 0.01, 0.001].iter().map(|&e| (j_eps(&[y], &model(e, 1.0)).unwrap()[0] - want).abs()).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 1e-5, "{errs:?}");
    }

    #[test]
    fn weight_is_dominated_pointwise() {
        for chi in [FormFactor::gaussian(1.0).unwrap(), FormFactor::exponential(1.0).unwrap()] {
            for &e in &[0.3, 0.05] {
                for &l in &[1e-3, 1.0] {
                    let m = EpsModel::new(e, model(e, l).params, chi).unwrap();
                    let ys: Vec<f64> = (0..200).map(|i| 1e-4 * 1.08f64.powi(i)).collect();
                    let j = j_eps(&ys, &m).unwrap();
                    for (y, v) in ys.iter().zip(j) {
                        assert!(y * v <= m.consts.gamma0, "{:?} eps={e} y={y}", chi.profile);
                    }
                }
            }
        }
    }

    #[test]
    fn exchange_form_lower_bound_on_random_charges() {
        let grid = Arc::new(Grid::new(1e-3, 1e4, 192).unwrap());
        let mut rng = seeded(53);
        let charges = random_swave_charges(&mut rng, grid, 50);
        for &e in &[0.2, 0.05] {
            for (a, b) in off_eps_lower_bound_margins(&model(e, 1.0), &charges).unwrap() {
                assert!(a >= 0.0 && b >= 0.0, "eps={e}: {a} {b}");
            }
        }
    }

    #[test]
    fn channel_integrals_limits() {
        let chi = FormFactor::gaussian(1.0).unwrap();
        // the gap to the point limit is the tail beyond k ~ 1/ε, of relative size ~ε
        let c = channel_integrals(1.3, 1e-9, &chi);
        for v in [c.i1, c.i2] {
            assert!((v - c.i3).abs() < 1e-8 * c.i3, "{c:?}");
        }
        assert!(c.i_diff < 1e-8 * c.i3);
        let c = channel_integrals(1.3, 0.2, &chi);
        // (I1 − 2I2 + I3) is the integral of the squared difference
        assert!((c.i1 - 2.0 * c.i2 + c.i3 - c.i_diff).abs() < 1e-12 * c.i3);
    }

    #[test]
    fn windowed_multiplier_agrees_inside_the_window() {
        let grid = Grid::new(1e-3, 1e3, 128).unwrap();
        let m = model(0.1, 1.0);
        let full = nu_matrix(&m, &grid);
        let win = windowed_nu_matrix(&m, &grid).unwrap();
        let bump: Vec<C64> = grid.nodes.iter().map(|&p| C64::new(p.powf(1.5) * (-p * p).exp(), 0.0)).collect();
        let u = nalgebra::DVector::from_vec(bump);
        let d = (&full * &u - &win * &u).norm() / u.norm();
        assert!(d < 1e-4, "{d}");
    }

    #[test]
    fn nu_matrix_is_bounded() {
        let grid = Grid::new(1e-3, 1e3, 128).unwrap();
        let p = ModelParams::new(0.2, 3.0, 1.0, CutoffProfile::new(CutoffKind::Exponential, 4.0).unwrap()).unwrap();
        let m = EpsModel::new(0.2, p, FormFactor::gaussian(1.0).unwrap()).unwrap();
        let n = nu_matrix(&m, &grid);
        let s = n.singular_values();
        assert!(s.max() <= 2f64.sqrt());
    }
}
