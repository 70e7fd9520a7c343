use cstar_clone::algebra::AlgebraSpec;
use cstar_clone::cloning::{audit_cloner, optimize_cloner, CloneSpec, OptimizerConfig};
use cstar_clone::verify::{self, VerifyConfig};

fn small(seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        restarts: 3,
        iters: 400,
        seed,
        samples: 2,
        ..OptimizerConfig::default()
    }
}

#[test]
fn optimizer_is_reproducible() {
    let factor = AlgebraSpec::full(2);
    let a = optimize_cloner(&factor, &small(9)).unwrap();
    let b = optimize_cloner(&factor, &small(9)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = optimize_cloner(&factor, &small(10)).unwrap();
    assert_ne!(a.restarts, c.restarts);
}

#[test]
fn best_candidate_survives_an_independent_re_audit() {
    let factor = AlgebraSpec::full(2);
    let cfg = OptimizerConfig {
        penalties: false,
        ..small(4)
    };
    let r = optimize_cloner(&factor, &cfg).unwrap();
    let best = r.best.expect("penalty-free runs always report a best restart");
    let cfg = &r.audit_config;
    let spec = CloneSpec::new(cfg.factor.clone(), best.blank.clone(), cfg.epsilon, cfg.sample_count, cfg.seed)
        .unwrap()
        .with_tolerances(cfg.tolerances);
    let again = audit_cloner(&best.channel, &spec).unwrap();
    assert_eq!(again, best.audit);
    let g = &again.aggregates;
    assert!((g.min_clone_fidelity.min(g.min_original_fidelity) - best.worst_fidelity).abs() <= 1e-12);
    assert!(best.channel.is_cp() && best.channel.is_trace_preserving());
}

#[test]
fn verify_reports_are_reproducible() {
    let cfg = VerifyConfig {
        seed: 11,
        trials: Some(15),
        only: vec![],
    };
    assert_eq!(verify::run(&cfg).unwrap(), verify::run(&cfg).unwrap());
}
