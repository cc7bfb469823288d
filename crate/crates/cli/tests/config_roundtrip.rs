use proptest::prelude::*;
use tms_cli::config::{RunConfig, KEYS};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, 1e-12f64..1e-3, Just(0.0), Just(0.1), Just(1.0 / 3.0)]
}

fn positive() -> impl Strategy<Value = f64> {
    prop_oneof![1e-9f64..1e9, Just(0.1), Just(1.0 / 7.0)]
}

fn config() -> impl Strategy<Value = RunConfig> {
    (
        (finite(), 0.0f64..10.0, positive(), 0usize..4, positive()),
        (1e-8f64..1.0, 1.0f64..1e8, 8usize..2048),
        (0usize..12, 0.0f64..50.0, 1usize..500),
        (prop::collection::vec(0.01f64..5.0, 1..6), prop::collection::vec(8usize..4096, 1..4)),
        (any::<bool>(), positive(), prop::collection::vec(1e-4f64..1.0, 1..8)),
        (prop::option::of(0.0f64..10.0), prop::option::of(finite()), any::<u64>(), 0usize..1000, "[a-z][a-z0-9_/]{0,12}"),
    )
        .prop_map(|(m, g, s, t, f, r)| {
            let kinds = ["one", "indicator", "exponential", "smooth_compact"];
            let mut c = RunConfig::default();
            c.beta = m.0;
            c.gamma = m.1;
            c.lambda = m.2;
            c.set("cutoff", kinds[m.3]).unwrap();
            c.cutoff_b = m.4;
            c.p_min = g.0;
            c.p_max = g.1;
            c.grid_n = g.2;
            c.l_max = s.0;
            c.k_max = s.1;
            c.k_points = s.2;
            c.thomas_gammas = t.0;
            c.thomas_sizes = t.1;
            c.set("form_factor", if f.0 { "gaussian" } else { "exponential" }).unwrap();
            c.sigma = f.1;
            c.eps = f.2;
            c.approx_gamma = r.0;
            c.approx_beta = r.1;
            c.seed = r.2;
            c.charges = r.3;
            c.out_dir = r.4;
            c
        })
}

proptest! {
    #[test]
    fn parse_emit_parse_is_identity(c in config()) {
        let text = c.emit();
        let once = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&once, &c);
        prop_assert_eq!(once.emit(), text);
        prop_assert_eq!(once.hash(), c.hash());
    }

    #[test]
    fn json_form_round_trips(c in config()) {
        let json = serde_json::to_string(&c.to_json()).unwrap();
        prop_assert_eq!(RunConfig::parse(&json).unwrap(), c);
    }

    #[test]
    fn unknown_keys_are_rejected(key in "[a-z_]{1,16}") {
        prop_assume!(KEYS.iter().all(|k| k.0 != key));
        let text = format!("{} = 1", key);
        prop_assert!(RunConfig::parse(&text).is_err());
    }
}

#[test]
fn every_key_is_documented_and_emitted() {
    let emitted = RunConfig::default().emit();
    for (key, default, doc) in KEYS {
        assert!(!doc.is_empty() && !default.is_empty());
        assert!(emitted.lines().any(|l| l.starts_with(&format!("{key} = "))), "{key}");
    }
    assert_eq!(emitted.lines().count(), KEYS.len());
}
