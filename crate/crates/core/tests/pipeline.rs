//! End-to-end checks through the public API.

use proptest::prelude::*;
use std::sync::Arc;
use tms_core::stmform::{assemble_gamma, hardy_check, solve_with_operator, CutoffProfile, ModelParams, SectorCharge};
use tms_core::symbols::{critical_constants, s_off, s_total};
use tms_core::testing::{random_charges, seeded};
use tms_core::Grid;

fn grid(n: usize) -> Arc<Grid> {
    Arc::new(Grid::new(1e-3, 1e3, n).unwrap())
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(Grid::new(1.0, 0.5, 16).is_err());
    assert!(Grid::new(1e-3, 1e3, 1).is_err());
    assert!(ModelParams::new(0.0, 1.0, 0.0, CutoffProfile::one()).is_err());
    assert!(ModelParams::new(0.0, -1.0, 1.0, CutoffProfile::one()).is_err());
    assert!(ModelParams::new(f64::NAN, 1.0, 1.0, CutoffProfile::one()).is_err());
}

#[test]
fn single_precision_symbols_track_double() {
    for l in 0..4 {
        for k in [0.0, 0.7, 3.0] {
            let a = s_off::<f32>(l, k as f32) as f64;
            let b = s_off::<f64>(l, k);
            assert!((a - b).abs() < 1e-5, "l={l} k={k}: {a} vs {b}");
        }
    }
}

#[test]
fn symbol_minimum_changes_sign_across_threshold() {
    let gc = critical_constants::<f64>().gamma_c;
    assert!(s_total(0, 0.0, gc - 1e-3) < 0.0);
    assert!(s_total(0, 0.0, gc + 1e-3) > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn total_symbol_is_even(l in 0usize..6, k in -30.0f64..30.0, g in 0.0f64..4.0) {
        let (a, b) = (s_total(l, k, g), s_total(l, -k, g));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn solve_inverts_apply(g in 1.0f64..3.0, beta in 0.0f64..1.0, l in 0usize..3, w in 0.3f64..3.0) {
        let p = ModelParams::new(beta, g, 2.0, CutoffProfile::one()).unwrap();
        let gr = grid(64);
        let op = assemble_gamma(l, &p, gr.clone()).unwrap();
        let xi = SectorCharge::from_fn(l, gr, |q| q.powi(l as i32) * (-(q * q) / (2.0 * w * w)).exp());
        let sol = solve_with_operator(&op, &op.apply(&xi)).unwrap();
        prop_assert!(sol.charge.sub(&xi).l2_norm() <= 1e-9 * xi.l2_norm());
    }

    #[test]
    fn hardy_holds_for_any_seed(seed in any::<u64>(), l in 0usize..3) {
        let mut rng = seeded(seed);
        for xi in random_charges(&mut rng, l, grid(96), 5) {
            let (lhs, rhs) = hardy_check(&xi);
            prop_assert!(lhs <= rhs, "{lhs} > {rhs}");
        }
    }
}
