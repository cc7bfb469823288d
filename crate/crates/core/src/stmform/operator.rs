use super::kernels::{kernel_diag, kernel_off, kernel_reg2, reg2_diagonal};
use super::params::ModelParams;
use crate::quadspec::LogHankel;
use crate::{Error, Grid, Result, C64};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use std::sync::Arc;

/// Radial samples `ξ̂_{lm}(p_j)` of a charge in one angular sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorCharge {
    pub l: usize,
    pub grid: Arc<Grid>,
    pub values: Vec<C64>,
}

/// Quadrature weights `h p_j³` of the operator coordinates `u_j = √w_j ξ_j`.
///
/// These are the trapezoid-in-log weights without the endpoint halving, so
/// that the coordinates coincide with those of the log Hankel transform.
pub fn operator_weights(grid: &Grid) -> Vec<f64> {
    let h = grid.log_step();
    grid.nodes.iter().map(|p| h * p * p * p).collect()
}

impl SectorCharge {
    pub fn new(l: usize, grid: Arc<Grid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Grid(format!("{} samples on a {}-node grid", values.len(), grid.n)));
        }
        Ok(Self { l, grid, values })
    }

    pub fn from_real(l: usize, grid: Arc<Grid>, values: &[f64]) -> Result<Self> {
        Self::new(l, grid, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    /// Samples of a radial profile.
    pub fn from_fn<F: Fn(f64) -> f64>(l: usize, grid: Arc<Grid>, f: F) -> Self {
        let values = grid.nodes.iter().map(|&p| C64::new(f(p), 0.0)).collect();
        Self { l, grid, values }
    }

    pub fn zeros(l: usize, grid: Arc<Grid>) -> Self {
        let n = grid.n;
        Self { l, grid, values: vec![C64::new(0.0, 0.0); n] }
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Discrete Sobolev norm squared `Σ w_j (1 + p_j²)^s |ξ_j|²`.
    pub fn sobolev_norm_sq(&self, s: f64) -> f64 {
        operator_weights(&self.grid)
            .iter()
            .zip(&self.grid.nodes)
            .zip(&self.values)
            .map(|((w, p), v)| w * (1.0 + p * p).powf(s) * v.norm_sqr())
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm_sq(0.0).sqrt()
    }

    /// Weighted moment `Σ w_j p_j^k |ξ_j|²`.
    pub fn moment(&self, k: f64) -> f64 {
        operator_weights(&self.grid)
            .iter()
            .zip(&self.grid.nodes)
            .zip(&self.values)
            .map(|((w, p), v)| w * p.powf(k) * v.norm_sqr())
            .sum()
    }

    /// Operator coordinates `√w_j ξ_j`, real and imaginary parts.
    pub fn to_coords(&self) -> (DVector<f64>, DVector<f64>) {
        let w = operator_weights(&self.grid);
        let re = DVector::from_iterator(self.grid.n, w.iter().zip(&self.values).map(|(w, v)| w.sqrt() * v.re));
        let im = DVector::from_iterator(self.grid.n, w.iter().zip(&self.values).map(|(w, v)| w.sqrt() * v.im));
        (re, im)
    }

    pub fn from_coords(l: usize, grid: Arc<Grid>, re: &DVector<f64>, im: &DVector<f64>) -> Self {
        let w = operator_weights(&grid);
        let values = w.iter().enumerate().map(|(j, w)| C64::new(re[j], im[j]) / w.sqrt()).collect();
        Self { l, grid, values }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * a).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(), ..self.clone() }
    }
}

/// Dense symmetric matrix of a sector operator in the coordinates
/// `u_j = √w_j ξ_j`, so that `u^T M u` is the sector quadratic form.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    pub l: usize,
    pub grid: Arc<Grid>,
    pub matrix: DMatrix<f64>,
}

impl SectorOperator {
    pub fn new(l: usize, grid: Arc<Grid>, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != grid.n || matrix.ncols() != grid.n {
            return Err(Error::Grid(format!("{}x{} matrix on a {}-node grid", matrix.nrows(), matrix.ncols(), grid.n)));
        }
        Ok(Self { l, grid, matrix })
    }

    pub fn dim(&self) -> usize {
        self.grid.n
    }

    /// Largest `|M_ij − M_ji|` relative to the largest entry.
    pub fn symmetry_defect(&self) -> f64 {
        let m = &self.matrix;
        let scale = m.amax().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..i {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst / scale
    }

    /// Quadratic form `ξ† M ξ`.
    pub fn form(&self, xi: &SectorCharge) -> f64 {
        let (re, im) = xi.to_coords();
        re.dot(&(&self.matrix * &re)) + im.dot(&(&self.matrix * &im))
    }

    /// Samples of the operator applied to `ξ`.
    pub fn apply(&self, xi: &SectorCharge) -> SectorCharge {
        let (re, im) = xi.to_coords();
        SectorCharge::from_coords(self.l, self.grid.clone(), &(&self.matrix * re), &(&self.matrix * im))
    }

    pub fn eigen(&self) -> SymmetricEigen<f64, nalgebra::Dyn> {
        SymmetricEigen::new(self.matrix.clone())
    }

    /// Smallest eigenvalue.
    pub fn min_eig(&self) -> f64 {
        self.matrix.clone().symmetric_eigenvalues().min()
    }

    /// `true` when a Cholesky factorization exists.
    pub fn is_positive_definite(&self) -> bool {
        self.matrix.clone().cholesky().is_some()
    }
}

/// How the `γ/|y|` part of the three-body term is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegScheme {
    /// Momentum-space Legendre-Q kernel with the singular cell integrated
    /// analytically; `a(y)` through cell averages on the log Hankel grid.
    Kernel,
    /// The full multiplier `β + γθ(y)/y` sampled at the reciprocal radii
    /// and applied with the log Hankel transform.
    Transform,
}

fn parallel_matrix<F: Fn(usize, usize) -> f64 + Sync>(n: usize, f: F) -> DMatrix<f64> {
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

/// Diagonal part `√(3p²/4 + λ)`.
pub fn assemble_diag(grid: &Grid, lambda: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(grid.n, grid.nodes.iter().map(|&p| kernel_diag(p, lambda))))
}

/// Exchange part for sector `l` at shift `λ >= 0`.
pub fn assemble_off(l: usize, lambda: f64, grid: &Grid) -> Result<DMatrix<f64>> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("exchange term needs lambda >= 0, got {lambda}")));
    }
    let w = operator_weights(grid);
    let p = &grid.nodes;
    Ok(parallel_matrix(grid.n, |i, j| {
        (w[i] * w[j]).sqrt() * kernel_off(l, p[i], p[j], lambda).expect("positive nodes")
    }))
}

/// `γ/|y|` part for sector `l`, with the logarithmic singularity absorbed
/// into the corrected diagonal weight [`reg2_diagonal`].
pub fn assemble_reg2(l: usize, gamma: f64, grid: &Grid) -> DMatrix<f64> {
    if gamma == 0.0 {
        return DMatrix::zeros(grid.n, grid.n);
    }
    let w = operator_weights(grid);
    let p = &grid.nodes;
    let h = grid.log_step();
    parallel_matrix(grid.n, |i, j| {
        if i == j {
            reg2_diagonal(l, p[i], h, gamma)
        } else {
            (w[i] * w[j]).sqrt() * kernel_reg2(l, p[i], p[j], gamma).expect("distinct positive nodes")
        }
    })
}

/// Matrix of the position multiplier with values `m_i` at the reciprocal radii.
pub fn hankel_multiplier(hankel: &LogHankel, m: &[f64]) -> DMatrix<f64> {
    let f = &hankel.matrix;
    let scaled = DMatrix::from_fn(f.nrows(), f.ncols(), |i, j| m[i] * f[(i, j)]);
    let mut out = f * scaled;
    symmetrize(&mut out);
    out
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Bounded part `a(y) = β + (γ/y)(θ(y) − 1)` of the three-body term.
pub fn assemble_reg1(l: usize, params: &ModelParams, grid: &Grid) -> DMatrix<f64> {
    if params.cutoff.is_one() {
        return DMatrix::identity(grid.n, grid.n) * params.beta;
    }
    let hankel = LogHankel::new(grid, l);
    let m = hankel.cell_averages(|r| params.a(r));
    hankel_multiplier(&hankel, &m)
}

/// Full multiplier `β + γθ(y)/y` through the log Hankel transform.
pub fn assemble_reg_transform(l: usize, params: &ModelParams, grid: &Grid) -> DMatrix<f64> {
    let hankel = LogHankel::new(grid, l);
    let m: Vec<f64> = hankel.radii.iter().map(|&r| params.gamma_reg(r)).collect();
    hankel_multiplier(&hankel, &m)
}

/// Sector matrix of `Γ^λ` with the default discretization.
pub fn assemble_gamma(l: usize, params: &ModelParams, grid: Arc<Grid>) -> Result<SectorOperator> {
    assemble_gamma_with(l, params, grid, RegScheme::Kernel)
}

pub fn assemble_gamma_with(l: usize, params: &ModelParams, grid: Arc<Grid>, scheme: RegScheme) -> Result<SectorOperator> {
    params.validate()?;
    let mut m = assemble_off(l, params.lambda, &grid)?;
    m += assemble_diag(&grid, params.lambda);
    match scheme {
        RegScheme::Kernel => {
            m += assemble_reg2(l, params.gamma, &grid);
            m += assemble_reg1(l, params, &grid);
        }
        RegScheme::Transform => m += assemble_reg_transform(l, params, &grid),
    }
    SectorOperator::new(l, grid, m)
}

/// λ-independent pieces of a sector matrix, for sweeps over the shift.
#[derive(Debug, Clone)]
pub struct SectorAssembler {
    pub l: usize,
    pub grid: Arc<Grid>,
    pub params: ModelParams,
    fixed: DMatrix<f64>,
}

impl SectorAssembler {
    pub fn new(l: usize, params: &ModelParams, grid: Arc<Grid>) -> Result<Self> {
        params.validate()?;
        let mut fixed = assemble_reg2(l, params.gamma, &grid);
        fixed += assemble_reg1(l, params, &grid);
        Ok(Self { l, grid, params: *params, fixed })
    }

    pub fn at(&self, lambda: f64) -> Result<SectorOperator> {
        let mut m = assemble_off(self.l, lambda, &self.grid)?;
        m += assemble_diag(&self.grid, lambda);
        m += &self.fixed;
        SectorOperator::new(self.l, self.grid.clone(), m)
    }
}

/// Full quadratic form `Φ^λ(ξ)` of a charge given as a list of sector
/// components; components sharing a sector reuse one assembled matrix.
pub fn phi_eval(sectors: &[SectorCharge], params: &ModelParams) -> Result<f64> {
    let mut cache: Vec<SectorOperator> = Vec::new();
    let mut total = 0.0;
    for s in sectors {
        let op = match cache.iter().find(|o| o.l == s.l && Arc::ptr_eq(&o.grid, &s.grid)) {
            Some(op) => op,
            None => {
                cache.push(assemble_gamma(s.l, params, s.grid.clone())?);
                cache.last().expect("just pushed")
            }
        };
        total += op.form(s);
    }
    Ok(total)
}
