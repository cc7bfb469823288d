//! Subcommand drivers. Each returns its tables, a JSON result block and
//! the lines printed to stdout; writing files is left to the caller.

use crate::config::RunConfig;
use crate::report::{fmt_sig10, grid_spec, report_json, Table};
use crate::verify::{run_suite, Hooks};
use crate::CliError;
use serde_json::{json, Value};
use std::sync::Arc;
use tms_core::separable::{chi_constants, convergence_study};
use tms_core::spectrum::{bound_states, thomas_scan, two_body_threshold, ThomasConfig};
use tms_core::stmform::{assemble_gamma, solve_charge, solve_with_operator, SectorCharge};
use tms_core::symbols::{critical_constants, s_off, s_reg, s_total};
use tms_core::{Error, Grid};

/// The subcommands.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Constants,
    Symbols,
    Spectrum,
    Thomas,
    Charge,
    Approx,
    /// Runs the properties whose name or topic equals the selector, or all of them.
    Verify { suite: Option<String> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::Symbols => "symbols",
            Command::Spectrum => "spectrum",
            Command::Thomas => "thomas",
            Command::Charge => "charge",
            Command::Approx => "approx",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Everything a subcommand produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    /// `(file stem, table)` pairs.
    pub tables: Vec<(String, Table)>,
    pub json: Value,
    pub lines: Vec<String>,
    /// Process exit status: zero unless a check inside the command failed.
    pub status: i32,
}

pub fn run_command(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Constants => constants(cfg),
        Command::Symbols => symbols(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Thomas => thomas(cfg),
        Command::Charge => charge(cfg),
        Command::Approx => approx(cfg),
        Command::Verify { suite } => verify(cfg, Hooks::default(), suite.as_deref()),
    }
}

fn cfg_grid(cfg: &RunConfig) -> Value {
    grid_spec(cfg.p_min, cfg.p_max, cfg.grid_n)
}

fn outcome(name: &'static str, cfg: &RunConfig, grid: Value, results: Value, tables: Vec<(String, Table)>, lines: Vec<String>) -> Outcome {
    Outcome { command: name, json: report_json(name, cfg, grid, results), tables, lines, status: 0 }
}

pub fn constants(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = critical_constants::<f64>();
    let chi = cfg.form()?;
    let k = chi_constants(&chi)?;
    let values = [
        ("gamma_c", c.gamma_c),
        ("bound_b", c.bound_b),
        ("gamma_c_star", c.gamma_c_star),
        ("d_const", c.d_const),
        ("gamma0", k.gamma0),
        ("ell", k.ell),
        ("ell_prime", k.ell_prime),
    ];
    let mut table = Table::new(&["name", "value"]);
    let mut results = serde_json::Map::new();
    let mut lines = Vec::new();
    for (name, v) in values {
        table.push(vec![name.into(), v.into()]);
        results.insert(name.to_string(), json!(v));
        lines.push(format!("{name:<13}{}", fmt_sig10(v)));
    }
    results.insert("form_factor".into(), json!({ "profile": chi.profile.name(), "sigma": chi.sigma }));
    Ok(outcome("constants", cfg, cfg_grid(cfg), Value::Object(results), vec![("constants".into(), table)], lines))
}

/// `k_points` values spread evenly over `[-k_max, k_max]`, with `k = 0` exact for odd counts.
pub fn k_grid(k_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|i| k_max * (2.0 * i as f64 / (n - 1) as f64 - 1.0)).collect()
}

pub fn symbols(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ks = k_grid(cfg.k_max, cfg.k_points);
    let g = cfg.gamma;
    let mut table = Table::new(&["l", "k", "s_off", "s_reg", "s_total"]);
    let mut min_reg = f64::INFINITY;
    let mut min_total = Vec::new();
    for l in 0..=cfg.l_max {
        let mut m = f64::INFINITY;
        for &k in &ks {
            let (a, b, t) = (s_off(l, k), s_reg(l, k, g), s_total(l, k, g));
            min_reg = min_reg.min(b);
            m = m.min(t);
            table.push(vec![l.into(), k.into(), a.into(), b.into(), t.into()]);
        }
        min_total.push(m);
    }
    let lines = vec![
        format!("{} rows, gamma = {}", table.len(), fmt_sig10(g)),
        format!("min s_reg = {:e}", min_reg),
        format!("min s_total per sector = {:?}", min_total),
    ];
    let results = json!({ "gamma": g, "rows": table.len(), "min_s_reg": min_reg, "min_s_total": min_total });
    Ok(outcome("symbols", cfg, cfg_grid(cfg), results, vec![("symbols".into(), table)], lines))
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.model_params()?;
    let search =
        bound_states(&params, cfg.spectrum_l, (cfg.spectrum_lambda_min, cfg.spectrum_lambda_max), cfg.bound_max, cfg.grid()?)?;
    let mut states = Table::new(&["index", "sector", "energy", "residual", "below_two_body_threshold"]);
    for (i, s) in search.states.iter().enumerate() {
        states.push(vec![i.into(), s.sector.into(), s.energy.into(), s.residual.into(), s.below_two_body_threshold.into()]);
    }
    let mut ladder = Table::new(&["lambda", "negative_count"]);
    for (&l, &c) in search.lambdas.iter().zip(&search.negative_counts) {
        ladder.push(vec![l.into(), c.into()]);
    }
    let mut lines = vec![format!("{} bound state(s) in sector {}", states.len(), cfg.spectrum_l)];
    lines.extend(search.states.iter().map(|s| format!("E = {:e} (residual {:.1e})", s.energy, s.residual)));
    if search.collapse_regime {
        lines.push("gamma is at or below gamma_c: the spectrum is not bounded below".into());
    }
    let results = json!({
        "energies": search.states.iter().map(|s| s.energy).collect::<Vec<_>>(),
        "collapse_regime": search.collapse_regime,
        "two_body_threshold": two_body_threshold(&params),
    });
    Ok(outcome("spectrum", cfg, cfg_grid(cfg), results, vec![("spectrum".into(), states), ("spectrum_ladder".into(), ladder)], lines))
}

pub fn thomas(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let base = cfg.model_params()?;
    let tc = ThomasConfig::centred(&cfg.thomas_sizes)?;
    let rows = thomas_scan(&cfg.thomas_gammas, &base, &tc)?;
    let mut verdicts =
        Table::new(&["gamma", "stable", "min_symbol", "k_at_min", "n", "p_min", "p_max", "deepest_sign_change"]);
    let mut path = Table::new(&["gamma", "n", "lambda", "mu0"]);
    let mut lines = Vec::new();
    for r in &rows {
        for p in &r.probes {
            verdicts.push(vec![
                r.gamma.into(),
                r.stable.into(),
                r.min_symbol.into(),
                r.k_at_min.into(),
                p.n.into(),
                p.p_min.into(),
                p.p_max.into(),
                p.deepest_sign_change.unwrap_or(f64::NAN).into(),
            ]);
            for &(l, m) in &p.mu0_path {
                path.push(vec![r.gamma.into(), p.n.into(), l.into(), m.into()]);
            }
        }
        let points: Vec<String> =
            r.probes.iter().map(|p| p.deepest_sign_change.map_or("none".into(), |v| format!("{v:.3e}"))).collect();
        lines.push(format!(
            "gamma = {:<6} {:<9} min S0 = {:+.4e}  deepest sign change: {}",
            r.gamma,
            if r.stable { "stable" } else { "collapse" },
            r.min_symbol,
            points.join(" / ")
        ));
    }
    let flips: Vec<Value> = rows
        .windows(2)
        .filter(|w| w[0].stable != w[1].stable)
        .map(|w| json!({ "lower": w[0].gamma, "upper": w[1].gamma, "estimate": 0.5 * (w[0].gamma + w[1].gamma) }))
        .collect();
    for f in &flips {
        lines.push(format!("verdict flips between gamma = {} and {}", f["lower"], f["upper"]));
    }
    let growth: Vec<Value> = rows
        .iter()
        .filter_map(|r| {
            let first = r.probes.first()?.deepest_sign_change?;
            let last = r.probes.last()?.deepest_sign_change?;
            Some(json!({ "gamma": r.gamma, "ratio": last / first }))
        })
        .collect();
    let results = json!({
        "gamma_c": critical_constants::<f64>().gamma_c,
        "flips": flips,
        "sign_change_growth": growth,
        "stable": rows.iter().map(|r| json!({ "gamma": r.gamma, "stable": r.stable })).collect::<Vec<_>>(),
    });
    let grids: Vec<Value> = tc.grids.iter().map(|g| grid_spec(g.p_min, g.p_max, g.n)).collect();
    Ok(outcome("thomas", cfg, Value::Array(grids), results, vec![("thomas".into(), verdicts), ("thomas_path".into(), path)], lines))
}

pub fn charge(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.model_params()?;
    let gc = critical_constants::<f64>().gamma_c;
    if params.gamma <= gc {
        return Err(Error::Threshold { gamma: params.gamma, threshold: gc }.into());
    }
    let grid = cfg.grid()?;
    let profile = |g: &Arc<Grid>| SectorCharge::from_fn(0, g.clone(), |p| (-p * p / 2.0).exp());
    let op = assemble_gamma(0, &params, grid.clone())?;
    let known = profile(&grid);
    let back = solve_with_operator(&op, &op.apply(&known))?;
    let round_trip = back.charge.sub(&known).l2_norm() / known.l2_norm();
    let coarse = solve_charge(&params, &profile(&grid))?;
    let fine_grid = Arc::new(grid.refined());
    let fine = solve_charge(&params, &profile(&fine_grid))?;
    let h32_change = ((coarse.h_three_half - fine.h_three_half) / fine.h_three_half).abs();
    let mut table = Table::new(&["p", "xi_re", "xi_im"]);
    for (&p, v) in grid.nodes.iter().zip(&coarse.charge.values) {
        table.push(vec![p.into(), v.re.into(), v.im.into()]);
    }
    let ok = round_trip < 1e-9;
    let lines = vec![
        format!("manufactured round trip: {round_trip:.3e} ({})", if ok { "ok" } else { "FAILED" }),
        format!("H^1/2 {:e}  H^1 {:e}  H^3/2 {:e}", coarse.h_half, coarse.h_one, coarse.h_three_half),
        format!("H^3/2 change under refinement: {h32_change:.3e}"),
    ];
    let results = json!({
        "round_trip_error": round_trip,
        "round_trip_ok": ok,
        "residual": coarse.residual,
        "h_half": coarse.h_half,
        "h_one": coarse.h_one,
        "h_three_half": coarse.h_three_half,
        "h_three_half_refined": fine.h_three_half,
        "h_three_half_change": h32_change,
    });
    let mut out = outcome("charge", cfg, cfg_grid(cfg), results, vec![("charge".into(), table)], lines);
    out.status = if ok { 0 } else { 1 };
    Ok(out)
}

pub fn approx(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let chi = cfg.form()?;
    let params = cfg.approx_params()?;
    let grid = cfg.approx_grid()?;
    let r = convergence_study(&cfg.eps, &params, &chi, grid.clone())?;
    let mut table = Table::new(&["eps", "a1", "a2", "a_total", "a_norm", "gamma_err", "composite"]);
    for row in &r.rows {
        table.push(vec![
            row.eps.into(),
            row.a1.into(),
            row.a2.into(),
            row.a_total.into(),
            row.a_norm.into(),
            row.gamma_err.into(),
            row.composite.into(),
        ]);
    }
    table.push(vec![
        "slope".into(),
        r.slope_a1.into(),
        r.slope_a2.into(),
        r.slope_total.into(),
        f64::NAN.into(),
        r.slope_gamma.into(),
        r.slope_composite.into(),
    ]);
    let lines = vec![
        format!("lambda = {}  lambda_1 = {:.6}  hypotheses hold: {}", r.lambda, r.lambda1, r.hypotheses_hold),
        format!(
            "slopes: a1 {:.4}  a2 {:.4}  a_total {:.4}  gamma_err {:.4}  composite {:.4}",
            r.slope_a1, r.slope_a2, r.slope_total, r.slope_gamma, r.slope_composite
        ),
        format!("monotone: {}", r.monotone()),
    ];
    let results = json!({
        "model": { "beta": params.beta, "gamma": params.gamma, "cutoff": params.cutoff.kind.name(), "cutoff_b": params.cutoff.b },
        "lambda": r.lambda,
        "lambda1": r.lambda1,
        "hypotheses_hold": r.hypotheses_hold,
        "monotone": r.monotone(),
        "g_norm": r.g_norm,
        "slopes": {
            "a1": r.slope_a1, "a2": r.slope_a2, "a_total": r.slope_total,
            "gamma_err": r.slope_gamma, "composite": r.slope_composite,
        },
    });
    let spec = grid_spec(grid.p_min, grid.p_max, grid.n);
    Ok(outcome("approx", cfg, spec, results, vec![("approx".into(), table)], lines))
}

/// Runs the property suite with the given hooks.
pub fn verify(cfg: &RunConfig, hooks: Hooks, suite: Option<&str>) -> Result<Outcome, CliError> {
    let props = run_suite(cfg, hooks, suite);
    let mut table = Table::new(&["name", "topic", "status", "margin"]);
    let mut lines = Vec::new();
    for p in &props {
        let status = if p.passed { "pass" } else { "fail" };
        table.push(vec![p.name.into(), p.topic.into(), status.into(), p.margin.into()]);
        let mut line = format!("{},{},{},{}", p.name, p.topic, status, crate::report::fmt_num(p.margin));
        if !p.detail.is_empty() {
            line.push_str(&format!(" ({})", p.detail));
        }
        lines.push(line);
    }
    let failed = props.iter().filter(|p| !p.passed).count();
    lines.push(format!("{} properties, {} failed", props.len(), failed));
    let results = json!({
        "total": props.len(),
        "failed": failed,
        "properties": props.iter().map(|p| json!({
            "name": p.name, "topic": p.topic, "passed": p.passed, "margin": p.margin, "detail": p.detail,
        })).collect::<Vec<_>>(),
    });
    let mut out = outcome("verify", cfg, cfg_grid(cfg), results, vec![("verify".into(), table)], lines);
    out.status = if failed == 0 && !props.is_empty() { 0 } else { 1 };
    Ok(out)
}
