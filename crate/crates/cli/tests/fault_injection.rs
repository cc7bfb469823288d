use tms_cli::config::RunConfig;
use tms_cli::verify::{run_suite, Hooks, Property};
use tms_core::symbols::s_off;

fn flipped(l: usize, k: f64) -> f64 {
    -s_off::<f64>(l, k)
}

fn section(props: &[Property], topic: &str) -> Vec<Property> {
    props.iter().filter(|p| p.topic == topic).cloned().collect()
}

#[test]
fn sign_error_in_s_off_is_caught_by_the_oracle_section_only() {
    let cfg = RunConfig::default();
    let hooks = Hooks { s_off: flipped };
    let mut props = run_suite(&cfg, hooks, Some("symbol oracle"));
    props.extend(run_suite(&cfg, hooks, Some("monotonicity")));
    props.extend(run_suite(&cfg, hooks, Some("hardy")));

    let oracle = section(&props, "symbol oracle");
    assert!(oracle.iter().any(|p| p.name == "s_off_matches_oracle" && !p.passed), "{oracle:?}");
    assert!(oracle.iter().any(|p| p.name == "threshold_identity" && !p.passed), "{oracle:?}");
    for topic in ["monotonicity", "hardy"] {
        let s = section(&props, topic);
        assert!(!s.is_empty());
        assert!(s.iter().all(|p| p.passed), "{s:?}");
    }
}

#[test]
fn library_s_off_passes_the_oracle_section() {
    let props = run_suite(&RunConfig::default(), Hooks::default(), Some("symbol oracle"));
    assert_eq!(props.len(), 3);
    assert!(props.iter().all(|p| p.passed && p.margin >= 0.0), "{props:?}");
}
