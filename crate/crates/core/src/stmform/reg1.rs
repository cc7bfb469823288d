use super::operator::SectorCharge;
use super::params::ModelParams;
use crate::quadspec::{sine_transform_swave, RadialPanels};
use crate::{Error, Result, C64};

/// Largest radius at which the grid quadrature of the sine transform still
/// resolves the oscillation where `p³|ξ̂(p)|` is above `1e-13` of its peak.
fn alias_free_radius(xi: &SectorCharge) -> f64 {
    let mags: Vec<f64> = xi.grid.nodes.iter().zip(&xi.values).map(|(p, v)| p * p * p * v.norm()).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    let p_hi = xi
        .grid
        .nodes
        .iter()
        .zip(&mags)
        .filter(|(_, &m)| m > 1e-13 * peak)
        .map(|(&p, _)| p)
        .fold(xi.grid.p_min, f64::max);
    std::f64::consts::TAU / (xi.grid.log_step() * p_hi)
}

/// Bounded part `a(y) ξ` of the three-body term applied to a charge.
///
/// For `θ ≡ 1` this is `β ξ` in any sector. Otherwise only the s-wave is
/// supported: the charge is taken to position space with the radial sine
/// transform, multiplied by `a`, and brought back with a panel Filon rule
/// that has a break at the cutoff length.
pub fn reg1_apply(xi: &SectorCharge, params: &ModelParams) -> Result<SectorCharge> {
    if params.cutoff.is_one() {
        return Ok(xi.scaled(params.beta));
    }
    if xi.l != 0 {
        return Err(Error::Unsupported(format!(
            "cutoff {} is only supported in the s-wave sector, got l = {}",
            params.cutoff.kind.name(),
            xi.l
        )));
    }
    let grid = &xi.grid;
    let b = params.cutoff.b;
    let r_max = (1.0 / grid.p_min).min(60.0 * b.max(1.0)).min(alias_free_radius(xi)).max(2.0 * b);
    let panels = RadialPanels::anchored(b.min(0.5 * r_max), r_max)?;
    let pref = (2.0 / std::f64::consts::PI).sqrt();
    let mut parts = Vec::with_capacity(2);
    for part in [xi.real_part(), xi.imag_part()] {
        if part.iter().all(|v| *v == 0.0) {
            parts.push(vec![0.0; grid.n]);
            continue;
        }
        let pos = sine_transform_swave(grid.as_ref(), &part, &panels.nodes)?;
        let g: Vec<f64> = panels.nodes.iter().zip(&pos).map(|(&r, &x)| r * params.a(r) * x).collect();
        let s = panels.sine_integrals(&g, &grid.nodes)?;
        parts.push(grid.nodes.iter().zip(&s).map(|(p, s)| pref * s / p).collect());
    }
    let values = parts[0].iter().zip(&parts[1]).map(|(&re, &im)| C64::new(re, im)).collect();
    SectorCharge::new(0, grid.clone(), values)
}
