//! Seeded property suites for the metric, channel and cloning identities.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{construct_pure_pair, evaluate_local, isomorphism_alpha, AlgebraSpec, CommutingPair, LocalState};
use crate::channels::{monotonicity_check, random_channel_with};
use crate::cloning::{audit_cloner, classical_copy_channel, CloneSpec};
use crate::error::Result;
use crate::matcore::vectors::inner;
use crate::matcore::{random, Complex64, ComplexMatrix, SeededRng};
use crate::states::{
    bures_distance, fidelity, fidelity_psd, fidelity_trace_formula, mix, tensor_states, trace_distance,
    transition_probability, AlgebraState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    BuresIdentity,
    Triangle,
    Transition,
    IntermediateFidelity,
    Isomorphism,
    Monotonicity,
    Multiplicativity,
    Perturbation,
    AbelianCloning,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::BuresIdentity,
        Suite::Triangle,
        Suite::Transition,
        Suite::IntermediateFidelity,
        Suite::Isomorphism,
        Suite::Monotonicity,
        Suite::Multiplicativity,
        Suite::Perturbation,
        Suite::AbelianCloning,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::BuresIdentity => "bures-identity",
            Suite::Triangle => "triangle",
            Suite::Transition => "transition",
            Suite::IntermediateFidelity => "intermediate-fidelity",
            Suite::Isomorphism => "isomorphism",
            Suite::Monotonicity => "monotonicity",
            Suite::Multiplicativity => "multiplicativity",
            Suite::Perturbation => "perturbation",
            Suite::AbelianCloning => "abelian-cloning",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::BuresIdentity => "D^2 = 2 - 2F with D and F computed by independent routes",
            Suite::Triangle => "Bures distance satisfies the triangle inequality",
            Suite::Transition => "pure states: transition probability = F^2, F = |<x,y>|, trace distance = 2 sqrt(1 - F^2)",
            Suite::IntermediateFidelity => "non-abelian blocks reach every fidelity in [0, 1]; abelian pure states only 0 or 1",
            Suite::Isomorphism => "fidelity and expectation values are preserved by the isomorphism between the pair",
            Suite::Monotonicity => "fidelity does not decrease under trace-preserving CP maps",
            Suite::Multiplicativity => "fidelity of product states factorizes",
            Suite::Perturbation => "mixing in weight a moves fidelities by less than 20 sqrt(a) and 10 sqrt(a)",
            Suite::AbelianCloning => "the classical copier clones every point mass exactly",
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Suite::BuresIdentity | Suite::Triangle | Suite::Transition | Suite::Monotonicity => 1000,
            Suite::Multiplicativity => 500,
            Suite::Perturbation | Suite::Isomorphism => 200,
            Suite::IntermediateFidelity => 11,
            Suite::AbelianCloning => 4,
        }
    }

    fn tolerance(self) -> f64 {
        match self {
            Suite::Multiplicativity => 1e-8,
            Suite::Perturbation => 1.0,
            Suite::AbelianCloning => 1e-10,
            _ => 1e-9,
        }
    }

    /// Accepts the suite id or one of its short aliases.
    pub fn from_name(name: &str) -> Option<Suite> {
        let s = match name {
            "eq1" => Suite::BuresIdentity,
            "eq2" => Suite::Triangle,
            "prop5" | "prop4" | "lemma7" => Suite::Transition,
            "prop6" => Suite::IntermediateFidelity,
            "eq3" => Suite::Isomorphism,
            "eq5" => Suite::Monotonicity,
            "lemma12" => Suite::Multiplicativity,
            "lemma10" => Suite::Perturbation,
            "thm2" => Suite::AbelianCloning,
            other => return Suite::ALL.into_iter().find(|s| s.id() == other),
        };
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: usize,
    pub defect: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub description: String,
    pub trials: usize,
    pub tolerance: f64,
    /// Largest observed defect; the suite passes when it stays within the tolerance.
    pub max_defect: f64,
    pub violations: usize,
    pub passed: bool,
    pub failures: Vec<FailureRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: Option<usize>,
    pub only: Vec<Suite>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

const MAX_FAILURE_RECORDS: usize = 10;

struct Tally {
    suite: Suite,
    trials: usize,
    max_defect: f64,
    violations: usize,
    failures: Vec<FailureRecord>,
    strict: bool,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            trials: 0,
            max_defect: 0.0,
            violations: 0,
            failures: Vec::new(),
            strict: suite == Suite::Perturbation,
        }
    }

    fn record(&mut self, trial: usize, defect: f64, detail: impl FnOnce() -> String) {
        self.trials = self.trials.max(trial + 1);
        self.max_defect = self.max_defect.max(defect);
        let tol = self.suite.tolerance();
        let bad = !defect.is_finite() || if self.strict { defect >= tol } else { defect > tol };
        if bad {
            self.violations += 1;
            if self.failures.len() < MAX_FAILURE_RECORDS {
                self.failures.push(FailureRecord {
                    trial,
                    defect,
                    detail: detail(),
                });
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite.id().into(),
            description: self.suite.description().into(),
            trials: self.trials,
            tolerance: self.suite.tolerance(),
            max_defect: self.max_defect,
            violations: self.violations,
            passed: self.violations == 0,
            failures: self.failures,
        }
    }
}

pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    let selected: Vec<Suite> = if config.only.is_empty() {
        Suite::ALL.to_vec()
    } else {
        Suite::ALL.into_iter().filter(|s| config.only.contains(s)).collect()
    };
    let mut suites = Vec::with_capacity(selected.len());
    for s in selected {
        suites.push(run_suite(s, config.seed, config.trials)?);
    }
    Ok(VerifyReport {
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

pub fn run_suite(suite: Suite, seed: u64, trials: Option<usize>) -> Result<SuiteReport> {
    let n = trials.unwrap_or(suite.default_trials());
    let index = Suite::ALL.iter().position(|&s| s == suite).expect("listed") as u64;
    let mut rng = random::stream(seed, 0x7665_7269_0000 + index);
    let mut t = Tally::new(suite);
    match suite {
        Suite::BuresIdentity => bures_identity(&mut t, n, &mut rng)?,
        Suite::Triangle => triangle(&mut t, n, &mut rng)?,
        Suite::Transition => transition(&mut t, n, &mut rng)?,
        Suite::IntermediateFidelity => intermediate(&mut t, n, seed)?,
        Suite::Isomorphism => isomorphism(&mut t, n, &mut rng)?,
        Suite::Monotonicity => monotonicity(&mut t, n, &mut rng)?,
        Suite::Multiplicativity => multiplicativity(&mut t, n, &mut rng)?,
        Suite::Perturbation => perturbation(&mut t, n, &mut rng)?,
        Suite::AbelianCloning => abelian_cloning(&mut t, n)?,
    }
    Ok(t.finish())
}

/// A full block of dimension ≤ `max_dim`, or now and then a small direct sum.
pub fn random_spec(rng: &mut SeededRng, max_dim: usize) -> AlgebraSpec {
    if max_dim >= 3 && rng.random_bool(0.25) {
        let mut blocks = Vec::new();
        let mut left = max_dim;
        while left > 0 && blocks.len() < 3 {
            let d = rng.random_range(1..=left.min(3));
            blocks.push(d);
            left -= d;
            if rng.random_bool(0.4) {
                break;
            }
        }
        return AlgebraSpec::new(blocks).expect("nonempty");
    }
    AlgebraSpec::full(rng.random_range(1..=max_dim))
}

/// Pure or mixed (random rank) with equal odds.
pub fn random_state(spec: &AlgebraSpec, rng: &mut SeededRng) -> AlgebraState {
    if rng.random_bool(0.5) {
        AlgebraState::random_pure(spec, rng)
    } else {
        let ranks: Vec<usize> = spec.blocks().iter().map(|&d| rng.random_range(1..=d)).collect();
        AlgebraState::random_with_ranks(spec, &ranks, rng)
    }
}

fn blockwise_trace_formula(a: &AlgebraState, b: &AlgebraState) -> Result<f64> {
    let mut f = 0.0;
    for k in 0..a.spec().num_blocks() {
        let (p, q) = (a.weights()[k], b.weights()[k]);
        if p > 0.0 && q > 0.0 {
            f += (p * q).sqrt() * fidelity_trace_formula(&a.densities()[k], &b.densities()[k])?;
        }
    }
    Ok(f.min(1.0))
}

fn bures_identity(t: &mut Tally, n: usize, rng: &mut SeededRng) -> Result<()> {
    for k in 0..n {
        let spec = random_spec(rng, 8);
        let (a, b) = (random_state(&spec, rng), random_state(&spec, rng));
        let d = bures_distance(&a, &b)?;
        let f = blockwise_trace_formula(&a, &b)?;
        let defect = (d * d - (2.0 - 2.0 * f)).abs();
        t.record(k, defect, || format!("blocks {:?}: D = {d}, F = {f}", spec.blocks()));
    }
    Ok(())
}

fn triangle(t: &mut Tally, n: usize, rng: &mut SeededRng) -> Result<()> {
    for k in 0..n {
        let spec = random_spec(rng, 8);
        let (a, b, c) = (random_state(&spec, rng), random_state(&spec, rng), random_state(&spec, rng));
        let direct = bures_distance(&a, &b)?;
        let detour = bures_distance(&a, &c)? + bures_distance(&c, &b)?;
        t.record(k, (direct - detour).max(0.0), || {
            format!("blocks {:?}: {direct} > {detour}", spec.blocks())
        });
    }
    Ok(())
}

fn transition(t: &mut Tally, n: usize, rng: &mut SeededRng) -> Result<()> {
    for k in 0..n {
        let spec = random_spec(rng, 8);
        let a = AlgebraState::random_pure(&spec, rng);
        let b = AlgebraState::random_pure(&spec, rng);
        let f = fidelity(&a, &b)?;
        let tp = transition_probability(&a, &b)?;
        let (ba, x) = a.pure_vector().expect("pure");
        let (bb, y) = b.pure_vector().expect("pure");
        let overlap = if ba == bb { inner(&x, &y).norm() } else { 0.0 };
        let td = trace_distance(&a, &b)?;
        let closed = 2.0 * (1.0 - overlap * overlap).max(0.0).sqrt();
        let defect = (tp - f * f).abs().max((f - overlap).abs()).max((td - closed).abs());
        t.record(k, defect, || format!("F = {f}, |<x,y>| = {overlap}, tp = {tp}, td = {td}"));
    }
    Ok(())
}

fn intermediate(t: &mut Tally, n: usize, seed: u64) -> Result<()> {
    let steps = n.max(2) - 1;
    let mut trial = 0;
    for d in [2usize, 3, 4] {
        let spec = AlgebraSpec::full(d);
        for s in [0, seed.wrapping_add(d as u64) | 1] {
            for i in 0..=steps {
                let alpha = i as f64 / steps as f64;
                let (a, b) = construct_pure_pair(&spec, alpha, s)?;
                let f = fidelity(&a, &b)?;
                t.record(trial, (f - alpha).abs(), || format!("d = {d}, alpha = {alpha}: F = {f}"));
                trial += 1;
            }
        }
    }
    let abelian = AlgebraSpec::diagonal(3);
    let one = [Complex64::new(1.0, 0.0)];
    for i in 0..3 {
        for j in 0..3 {
            let a = AlgebraState::pure(abelian.clone(), i, &one)?;
            let b = AlgebraState::pure(abelian.clone(), j, &one)?;
            let f = fidelity(&a, &b)?;
            let expected = if i == j { 1.0 } else { 0.0 };
            t.record(trial, (f - expected).abs(), || format!("point masses {i}, {j}: F = {f}"));
            trial += 1;
        }
    }
    Ok(())
}

fn isomorphism(t: &mut Tally, n: usize, rng: &mut SeededRng) -> Result<()> {
    for k in 0..n {
        let d = rng.random_range(2..=4);
        let spec = AlgebraSpec::full(d);
        let pair = CommutingPair::new(spec.clone());
        let (a, b) = (random_state(&spec, rng), random_state(&spec, rng));
        let tau = ComplexMatrix::identity(d).scale(1.0 / d as f64);
        let lift = |s: &AlgebraState| crate::matcore::kron(&s.to_density(), &tau);
        let (la, lb) = (lift(&a), lift(&b));
        let f1 = fidelity_psd(&la, &lb)?;
        let f2 = fidelity_psd(&pair.alpha_operator(&la), &pair.alpha_operator(&lb))?;
        let fa = fidelity(&a, &b)?;
        let moved_a = isomorphism_alpha(&LocalState::first(a.clone()))?;
        let moved_b = isomorphism_alpha(&LocalState::first(b.clone()))?;
        let f_moved = fidelity(&moved_a.state, &moved_b.state)?;
        let mut defect = (f1 - f2).abs().max((f1 - fa).abs()).max((f_moved - fa).abs());
        let first = LocalState::first(a.clone());
        for g in spec.generators() {
            let x = pair.embed_first(&g);
            let v1 = evaluate_local(&pair, &first, &x)?;
            let v2 = evaluate_local(&pair, &moved_a, &pair.alpha_operator(&x))?;
            defect = defect.max((v1 - v2).norm());
        }
        t.record(k, defect, || format!("d = {d}: F = {fa}, lifted {f1}, transported {f2}"));
    }
    Ok(())
}

fn monotonicity(t: &mut Tally, n: usize, rng: &mut SeededRng) -> Result<()> {
    for k in 0..n {
        let din: usize = rng.random_range(2..=4);
        let dout: usize = rng.random_range(1..=4);
        let env = rng.random_range(din.div_ceil(dout)..=4usize.max(din.div_ceil(dout)));
        let c = random_channel_with(din, dout, env, rng)?;
        let spec = AlgebraSpec::full(din);
        let (a, b) = (random_state(&spec, rng), random_state(&spec, rng));
        let m = monotonicity_check(&c, &a, &b)?;
        t.record(k, (m.before - m.after).max(0.0), || {
            format!("{din} -> {dout} (env {env}): {} -> {}", m.before, m.after)
        });
    }
    Ok(())
}

fn multiplicativity(t: &mut Tally, n: usize, rng: &mut SeededRng) -> Result<()> {
    for k in 0..n {
        let s1 = AlgebraSpec::full(rng.random_range(1..=4));
        let s2 = AlgebraSpec::full(rng.random_range(1..=4));
        let (a1, b1) = (random_state(&s1, rng), random_state(&s1, rng));
        let (a2, b2) = (random_state(&s2, rng), random_state(&s2, rng));
        let joint = fidelity(&tensor_states(&a1, &a2), &tensor_states(&b1, &b2))?;
        let split = fidelity(&a1, &b1)? * fidelity(&a2, &b2)?;
        t.record(k, (joint - split).abs(), || format!("{joint} vs {split}"));
    }
    Ok(())
}

fn perturbation(t: &mut Tally, n: usize, rng: &mut SeededRng) -> Result<()> {
    let mut trial = 0;
    for a in [1e-2, 1e-4, 1e-6] {
        let root = f64::sqrt(a);
        for _ in 0..n {
            let s1 = AlgebraSpec::full(rng.random_range(1..=4));
            let s2 = AlgebraSpec::full(rng.random_range(1..=4));
            let (p1, f1) = (random_state(&s1, rng), random_state(&s1, rng));
            let (p2, f2) = (random_state(&s2, rng), random_state(&s2, rng));
            let g1 = mix(&f1, &p1, a)?;
            let g2 = mix(&f2, &p2, a)?;
            let left = tensor_states(&p1, &p2);
            let joint = (fidelity(&left, &tensor_states(&f1, &f2))? - fidelity(&left, &tensor_states(&g1, &g2))?).abs();
            let single = (fidelity(&p1, &f1)? - fidelity(&p1, &g1)?)
                .abs()
                .max((fidelity(&p2, &f2)? - fidelity(&p2, &g2)?).abs());
            let ratio = (joint / (20.0 * root)).max(single / (10.0 * root));
            t.record(trial, ratio, || format!("a = {a}: product change {joint}, single change {single}"));
            trial += 1;
        }
    }
    Ok(())
}

fn abelian_cloning(t: &mut Tally, n: usize) -> Result<()> {
    for trial in 0..n {
        let d = 2 + trial % 4;
        let spec = AlgebraSpec::diagonal(d);
        let channel = classical_copy_channel(&spec)?;
        let mut worst: f64 = 0.0;
        let mut verdict = true;
        for blank in [AlgebraState::maximally_mixed(&spec), AlgebraState::pure(spec.clone(), d - 1, &[Complex64::new(1.0, 0.0)])?] {
            let report = audit_cloner(&channel, &CloneSpec::new(spec.clone(), blank, 0.0, 0, 0)?)?;
            verdict &= report.verdict_perfect && report.records.len() == d;
            worst = worst.max((1.0 - report.aggregates.min_clone_fidelity).abs());
        }
        let defect = if verdict { worst } else { f64::INFINITY };
        t.record(trial, defect, || format!("d = {d}: perfect audit {verdict}, fidelity defect {worst}"));
    }
    Ok(())
}
