//! Search for non-entangling cloners over Stinespring isometries.
//!
//! For a fixed blank σ₂ the cloner only matters through ρ ↦ T(ρ ⊗ σ₂), a
//! channel from ℂⁿ to ℂⁿ ⊗ ℂⁿ, and every such channel arises that way from
//! T = W ∘ tr₂. The search therefore runs over isometries
//! W: ℂⁿ → (ℂⁿ ⊗ ℂⁿ) ⊗ ℂᴱ with E = n³, which covers all channels and every
//! choice of blank at once.
//!
//! With penalties on, the objective is a softmin of the clone fidelities
//! inside an augmented Lagrangian for three constraints per sample: product
//! output, preserved original, pure clone. Ascent is Riemannian on the
//! Stiefel manifold with a QR retraction, adaptive steps and a coordinate
//! search fallback. Restarts run in parallel and are reduced in index order.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{audit_cloner, clone_samples, CloneAuditReport, CloneConfig, CloneSpec, CloneTolerances};
use crate::algebra::{is_abelian, AlgebraSpec, CommutingPair};
use crate::channels::{compose, discard_second, from_isometry, QuantumChannel};
use crate::error::{Error, Result};
use crate::matcore::random::{orthonormalize_columns, random_isometry};
use crate::matcore::vectors::basis_vector;
use crate::matcore::{kron, partial_trace_unchecked, random, Complex64, ComplexMatrix, Factor};
use crate::states::AlgebraState;

const OUTER_ROUNDS: usize = 40;
const MU_START: f64 = 1.0;
const MU_MAX: f64 = 1e7;
const BETA_START: f64 = 40.0;
const BETA_MAX: f64 = 400.0;

/// How the blank state is handled. The search space is the same for both:
/// the returned cloner discards the blank and prepares its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlankStrategy {
    /// Reported blank is the first basis vector.
    CoOptimized,
    Fixed(AlgebraState),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Ascent steps per restart.
    pub iters: usize,
    pub seed: u64,
    /// Haar samples on top of the adversarial set.
    pub samples: usize,
    pub epsilon: f64,
    pub tolerances: CloneTolerances,
    pub env_dim: Option<usize>,
    /// With penalties off the objective is the worst fidelity of either copy.
    pub penalties: bool,
    pub blank: BlankStrategy,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            iters: 20000,
            seed: 1,
            samples: 8,
            epsilon: 0.05,
            tolerances: CloneTolerances::default(),
            env_dim: None,
            penalties: true,
            blank: BlankStrategy::CoOptimized,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub index: usize,
    pub feasible: bool,
    pub worst_fidelity: f64,
    pub product_residual: f64,
    pub marginal_residual: f64,
    pub purity_defect: f64,
    pub steps: usize,
    pub fallback_moves: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartStats {
    pub restarts: usize,
    pub feasible: usize,
    pub best_fidelity: Option<f64>,
    pub worst_fidelity: Option<f64>,
    pub mean_fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestCandidate {
    pub restart: usize,
    pub worst_fidelity: f64,
    pub feasible: bool,
    pub product_residual: f64,
    pub marginal_residual: f64,
    pub purity_defect: f64,
    pub blank: AlgebraState,
    pub channel: QuantumChannel,
    pub audit: CloneAuditReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub factor: AlgebraSpec,
    pub config: OptimizerConfig,
    pub audit_config: CloneConfig,
    pub env_dim: usize,
    /// Best feasible restart (penalties on) or best restart (penalties off).
    pub best: Option<BestCandidate>,
    pub stats: RestartStats,
    pub restarts: Vec<RestartRecord>,
}

pub fn optimize_cloner(factor: &AlgebraSpec, config: &OptimizerConfig) -> Result<OptimizerResult> {
    if config.restarts == 0 {
        return Err(Error::domain("optimizer needs at least one restart"));
    }
    if is_abelian(factor) && factor.num_blocks() < 2 {
        return Err(Error::domain("nothing to clone on a one-dimensional algebra"));
    }
    let pair = CommutingPair::new(factor.clone());
    let n = pair.local_dim();
    let env = config.env_dim.unwrap_or(n * n * n).max(1);
    let blank = match &config.blank {
        BlankStrategy::Fixed(s) => s.clone(),
        BlankStrategy::CoOptimized => AlgebraState::pure(factor.clone(), 0, &basis_vector(factor.blocks()[0], 0))?,
    };
    let spec = CloneSpec::new(factor.clone(), blank.clone(), config.epsilon, config.samples, config.seed)?
        .with_tolerances(config.tolerances);
    let problem = Problem::new(&pair, &spec, env, config.penalties);

    let runs: Vec<(RestartRecord, Option<(QuantumChannel, CloneAuditReport)>)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = random::stream(config.seed, (1u64 << 32) + r as u64);
            let outcome = problem.solve(config.iters, &mut rng);
            let channel = problem.pair_channel(&outcome.w);
            let audit = audit_cloner(&channel, &spec)?;
            let a = &audit.aggregates;
            let worst = if config.penalties {
                a.min_clone_fidelity
            } else {
                a.min_clone_fidelity.min(a.min_original_fidelity)
            };
            let t = config.tolerances;
            let record = RestartRecord {
                index: r,
                feasible: a.max_product_residual <= t.product
                    && a.max_marginal_residual <= t.marginal
                    && a.max_purity_defect <= t.purity,
                worst_fidelity: worst,
                product_residual: a.max_product_residual,
                marginal_residual: a.max_marginal_residual,
                purity_defect: a.max_purity_defect,
                steps: outcome.steps,
                fallback_moves: outcome.fallback_moves,
            };
            Ok((record, Some((channel, audit))))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<(usize, f64)> = None;
    for (i, (rec, _)) in runs.iter().enumerate() {
        let eligible = rec.feasible || !config.penalties;
        if eligible && best.is_none_or(|(_, f)| rec.worst_fidelity > f) {
            best = Some((i, rec.worst_fidelity));
        }
    }
    let mut restarts = Vec::with_capacity(runs.len());
    let mut best_candidate = None;
    for (i, (rec, payload)) in runs.into_iter().enumerate() {
        if best.is_some_and(|(b, _)| b == i) {
            let (channel, audit) = payload.expect("every restart carries its channel");
            best_candidate = Some(BestCandidate {
                restart: i,
                worst_fidelity: rec.worst_fidelity,
                feasible: rec.feasible,
                product_residual: rec.product_residual,
                marginal_residual: rec.marginal_residual,
                purity_defect: rec.purity_defect,
                blank: blank.clone(),
                channel,
                audit,
            });
        }
        restarts.push(rec);
    }
    let eligible: Vec<f64> = restarts
        .iter()
        .filter(|r| r.feasible || !config.penalties)
        .map(|r| r.worst_fidelity)
        .collect();
    let stats = RestartStats {
        restarts: restarts.len(),
        feasible: restarts.iter().filter(|r| r.feasible).count(),
        best_fidelity: eligible.iter().copied().reduce(f64::max),
        worst_fidelity: eligible.iter().copied().reduce(f64::min),
        mean_fidelity: (!eligible.is_empty()).then(|| eligible.iter().sum::<f64>() / eligible.len() as f64),
    };
    Ok(OptimizerResult {
        factor: factor.clone(),
        config: config.clone(),
        audit_config: spec.config(),
        env_dim: env,
        best: best_candidate,
        stats,
        restarts,
    })
}

struct Problem {
    pair: CommutingPair,
    n: usize,
    nn: usize,
    env: usize,
    vectors: Vec<Vec<Complex64>>,
    projectors: Vec<ComplexMatrix>,
    clone_weights: Vec<ComplexMatrix>,
    original_weights: Vec<ComplexMatrix>,
    penalties: bool,
    pinched: bool,
}

/// Multipliers and penalty weight of the augmented Lagrangian.
#[derive(Clone)]
struct Multipliers {
    product: Vec<ComplexMatrix>,
    marginal: Vec<ComplexMatrix>,
    purity: Vec<f64>,
    mu: f64,
    beta: f64,
}

struct SampleEval {
    rho_a: ComplexMatrix,
    rho_b: ComplexMatrix,
    clone: f64,
    original: f64,
    product: ComplexMatrix,
    marginal: ComplexMatrix,
    purity: f64,
}

struct Outcome {
    w: ComplexMatrix,
    steps: usize,
    fallback_moves: usize,
}

impl Problem {
    fn new(pair: &CommutingPair, spec: &CloneSpec, env: usize, penalties: bool) -> Self {
        let factor = pair.factor();
        let n = pair.local_dim();
        let offsets = factor.offsets();
        let vectors: Vec<Vec<Complex64>> = clone_samples(factor, spec.sample_count, spec.seed, spec.epsilon)
            .iter()
            .map(|s| {
                let (block, v) = s.state.pure_vector().expect("samples are pure");
                let mut full = vec![Complex64::new(0.0, 0.0); n];
                full[offsets[block]..offsets[block] + v.len()].copy_from_slice(&v);
                full
            })
            .collect();
        let projectors: Vec<ComplexMatrix> = vectors.iter().map(|v| ComplexMatrix::outer(v)).collect();
        let id = ComplexMatrix::identity(n);
        Self {
            pair: pair.clone(),
            n,
            nn: n * n,
            env,
            clone_weights: projectors.iter().map(|p| kron(&id, p)).collect(),
            original_weights: projectors.iter().map(|p| kron(p, &id)).collect(),
            vectors,
            projectors,
            penalties,
            pinched: factor.num_blocks() > 1,
        }
    }

    fn pair_channel(&self, w: &ComplexMatrix) -> QuantumChannel {
        let local = from_isometry(w, self.nn, self.env);
        compose(&local, &discard_second(self.n, self.n)).expect("dimensions match")
    }

    fn output(&self, w: &ComplexMatrix, k: usize) -> (Vec<Complex64>, ComplexMatrix) {
        let wk = w.matvec(&self.vectors[k]).expect("isometry columns match samples");
        let (nn, e) = (self.nn, self.env);
        let mut rho = ComplexMatrix::from_fn(nn, nn, |r, c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..e {
                acc += wk[r * e + x] * wk[c * e + x].conj();
            }
            acc
        });
        if self.pinched {
            rho = self.pair.pinch(&rho);
        }
        (wk, rho)
    }

    fn eval_sample(&self, rho: ComplexMatrix, k: usize) -> SampleEval {
        let n = self.n;
        let rho_a = partial_trace_unchecked(&rho, n, n, Factor::Second);
        let rho_b = partial_trace_unchecked(&rho, n, n, Factor::First);
        let clone = rho_b.trace_product(&self.projectors[k]).re;
        let original = rho_a.trace_product(&self.projectors[k]).re;
        let product = &rho - &kron(&rho_a, &rho_b);
        let marginal = &rho_a - &self.projectors[k];
        let purity = 1.0 - rho_b.trace_product(&rho_b).re;
        SampleEval {
            rho_a,
            rho_b,
            clone,
            original,
            product,
            marginal,
            purity,
        }
    }

    fn evaluate(&self, w: &ComplexMatrix) -> Vec<(Vec<Complex64>, SampleEval)> {
        (0..self.vectors.len())
            .map(|k| {
                let (wk, rho) = self.output(w, k);
                (wk, self.eval_sample(rho, k))
            })
            .collect()
    }

    /// Fidelity terms entering the softmin: clones, plus originals when penalties are off.
    fn scores(&self, evals: &[(Vec<Complex64>, SampleEval)]) -> Vec<f64> {
        let mut s: Vec<f64> = evals.iter().map(|(_, e)| e.clone).collect();
        if !self.penalties {
            s.extend(evals.iter().map(|(_, e)| e.original));
        }
        s
    }

    fn lagrangian(&self, evals: &[(Vec<Complex64>, SampleEval)], m: &Multipliers) -> f64 {
        let (value, _) = softmin(&self.scores(evals), m.beta);
        if !self.penalties {
            return value;
        }
        let mut pen = 0.0;
        for (k, (_, e)) in evals.iter().enumerate() {
            let p2 = e.product.frobenius_norm().powi(2);
            let m2 = e.marginal.frobenius_norm().powi(2);
            pen += m.product[k].trace_product(&e.product).re + 0.5 * m.mu * p2;
            pen += m.marginal[k].trace_product(&e.marginal).re + 0.5 * m.mu * m2;
            pen += m.purity[k] * e.purity + 0.5 * m.mu * e.purity * e.purity;
        }
        value - pen
    }

    /// Euclidean gradient of the Lagrangian with respect to W.
    fn gradient(&self, evals: &[(Vec<Complex64>, SampleEval)], m: &Multipliers) -> ComplexMatrix {
        let (n, nn, e) = (self.n, self.nn, self.env);
        let kk = evals.len();
        let (_, weights) = softmin(&self.scores(evals), m.beta);
        let id = ComplexMatrix::identity(n);
        let mut grad = ComplexMatrix::zeros(nn * e, n);
        for (k, (wk, ev)) in evals.iter().enumerate() {
            let mut g = self.clone_weights[k].scale(weights[k]);
            if !self.penalties {
                g.axpy(Complex64::new(weights[kk + k], 0.0), &self.original_weights[k]);
            } else {
                let xi = &m.product[k] + &ev.product.scale(m.mu);
                let left = partial_trace_unchecked(&(&xi * &kron(&id, &ev.rho_b)), n, n, Factor::Second);
                let right = partial_trace_unchecked(&(&xi * &kron(&ev.rho_a, &id)), n, n, Factor::First);
                let mut g_prod = xi.clone();
                g_prod.axpy(Complex64::new(-1.0, 0.0), &kron(&left, &id));
                g_prod.axpy(Complex64::new(-1.0, 0.0), &kron(&id, &right));
                let g_marg = kron(&(&m.marginal[k] + &ev.marginal.scale(m.mu)), &id);
                let g_pur = kron(&id, &ev.rho_b).scale(-2.0 * (m.purity[k] + m.mu * ev.purity));
                g.axpy(Complex64::new(-1.0, 0.0), &g_prod.hermitian_part());
                g.axpy(Complex64::new(-1.0, 0.0), &g_marg.hermitian_part());
                g.axpy(Complex64::new(-1.0, 0.0), &g_pur);
            }
            if self.pinched {
                g = self.pair.pinch(&g);
            }
            // (G ⊗ I_E) w, accumulated as 2 g u†.
            let gw: Vec<Complex64> = (0..nn * e)
                .map(|idx| {
                    let (r, x) = (idx / e, idx % e);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..nn {
                        acc += g[(r, c)] * wk[c * e + x];
                    }
                    acc * 2.0
                })
                .collect();
            let u = &self.vectors[k];
            for (idx, gv) in gw.iter().enumerate() {
                for (col, uc) in u.iter().enumerate() {
                    grad[(idx, col)] += gv * uc.conj();
                }
            }
        }
        grad
    }

    fn solve<R: Rng + ?Sized>(&self, iters: usize, rng: &mut R) -> Outcome {
        let mut w = random_isometry(self.nn * self.env, self.n, rng);
        let kk = self.vectors.len();
        let mut m = Multipliers {
            product: vec![ComplexMatrix::zeros(self.nn, self.nn); kk],
            marginal: vec![ComplexMatrix::zeros(self.n, self.n); kk],
            purity: vec![0.0; kk],
            mu: MU_START,
            beta: BETA_START,
        };
        let per_round = (iters / OUTER_ROUNDS).max(1);
        let mut steps = 0;
        let mut fallback_moves = 0;
        let mut step = 0.1;
        let mut last_violation = f64::INFINITY;
        for round in 0..OUTER_ROUNDS {
            let mut evals = self.evaluate(&w);
            let mut value = self.lagrangian(&evals, &m);
            for _ in 0..per_round {
                if steps >= iters {
                    break;
                }
                steps += 1;
                let euclid = self.gradient(&evals, &m);
                let z = tangent_projection(&w, &euclid);
                let zn = z.frobenius_norm();
                if zn < 1e-13 {
                    break;
                }
                let mut accepted = false;
                for _ in 0..40 {
                    let cand = retract(&w, &z, step / zn);
                    let ce = self.evaluate(&cand);
                    let cv = self.lagrangian(&ce, &m);
                    if cv > value {
                        w = cand;
                        evals = ce;
                        value = cv;
                        step = (step * 1.5).min(1.0);
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                    if step < 1e-16 {
                        break;
                    }
                }
                if !accepted {
                    let moved = self.coordinate_search(&mut w, &mut value, &m, rng);
                    fallback_moves += moved;
                    evals = self.evaluate(&w);
                    step = 1e-3;
                    if moved == 0 {
                        break;
                    }
                }
            }
            if !self.penalties {
                m.beta = (m.beta * 1.5).min(BETA_MAX);
                continue;
            }
            let mut violation: f64 = 0.0;
            for (k, (_, e)) in evals.iter().enumerate() {
                m.product[k].axpy(Complex64::new(m.mu, 0.0), &e.product);
                m.marginal[k].axpy(Complex64::new(m.mu, 0.0), &e.marginal);
                m.purity[k] += m.mu * e.purity;
                violation = violation
                    .max(e.product.frobenius_norm())
                    .max(e.marginal.frobenius_norm())
                    .max(e.purity);
            }
            if violation > 0.25 * last_violation {
                m.mu = (m.mu * 4.0).min(MU_MAX);
            }
            last_violation = violation;
            if round % 4 == 3 {
                m.beta = (m.beta * 1.5).min(BETA_MAX);
            }
        }
        Outcome {
            w,
            steps,
            fallback_moves,
        }
    }

    /// Derivative-free moves along single real or imaginary coordinates.
    fn coordinate_search<R: Rng + ?Sized>(&self, w: &mut ComplexMatrix, value: &mut f64, m: &Multipliers, rng: &mut R) -> usize {
        let entries = w.rows() * w.cols();
        let mut moved = 0;
        let mut h = 1e-3;
        for _ in 0..4 {
            for _ in 0..entries.min(64) {
                let idx = rng.random_range(0..entries);
                let imaginary = rng.random_bool(0.5);
                for sign in [1.0, -1.0] {
                    let mut dir = ComplexMatrix::zeros(w.rows(), w.cols());
                    dir.as_mut_slice()[idx] = if imaginary {
                        Complex64::new(0.0, sign)
                    } else {
                        Complex64::new(sign, 0.0)
                    };
                    let cand = retract(w, &dir, h);
                    let cv = self.lagrangian(&self.evaluate(&cand), m);
                    if cv > *value {
                        *w = cand;
                        *value = cv;
                        moved += 1;
                        break;
                    }
                }
            }
            if moved > 0 {
                break;
            }
            h *= 0.1;
        }
        moved
    }
}

/// Smooth minimum −(1/β) log Σ exp(−β sₖ) and its gradient.
fn softmin(s: &[f64], beta: f64) -> (f64, Vec<f64>) {
    let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
    let exps: Vec<f64> = s.iter().map(|&x| (-beta * (x - lo)).exp()).collect();
    let total: f64 = exps.iter().sum();
    (lo - total.ln() / beta, exps.iter().map(|e| e / total).collect())
}

/// Z − W herm(W†Z): projection onto the tangent space of the Stiefel manifold.
fn tangent_projection(w: &ComplexMatrix, z: &ComplexMatrix) -> ComplexMatrix {
    let wz = (&w.adjoint() * z).hermitian_part();
    z - &(w * &wz)
}

fn retract(w: &ComplexMatrix, z: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let mut y = w.clone();
    y.axpy(Complex64::new(t, 0.0), z);
    if !orthonormalize_columns(&mut y) {
        return w.clone();
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmin_bounds_the_minimum() {
        let (v, g) = softmin(&[0.3, 0.5, 0.9], 100.0);
        assert!(v <= 0.3 && v > 0.29);
        assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(g[0] > 0.99);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let factor = AlgebraSpec::full(2);
        let pair = CommutingPair::new(factor.clone());
        let blank = AlgebraState::pure(factor.clone(), 0, &basis_vector(2, 0)).unwrap();
        let spec = CloneSpec::new(factor, blank, 0.05, 2, 3).unwrap();
        for penalties in [true, false] {
            let p = Problem::new(&pair, &spec, 3, penalties);
            let mut rng = random::seeded(9);
            let w = random_isometry(12, 2, &mut rng);
            let kk = p.vectors.len();
            let m = Multipliers {
                product: (0..kk).map(|_| random::random_hermitian(4, &mut rng)).collect(),
                marginal: (0..kk).map(|_| random::random_hermitian(2, &mut rng)).collect(),
                purity: vec![0.3; kk],
                mu: 2.0,
                beta: 5.0,
            };
            let g = p.gradient(&p.evaluate(&w), &m);
            let dir = random::gaussian_matrix(12, 2, &mut rng);
            let h = 1e-6;
            let mut plus = w.clone();
            plus.axpy(Complex64::new(h, 0.0), &dir);
            let mut minus = w.clone();
            minus.axpy(Complex64::new(-h, 0.0), &dir);
            let fd = (p.lagrangian(&p.evaluate(&plus), &m) - p.lagrangian(&p.evaluate(&minus), &m)) / (2.0 * h);
            let analytic = g.trace_product(&dir.adjoint()).re;
            assert!((fd - analytic).abs() < 1e-5 * (1.0 + fd.abs()), "{fd} vs {analytic}");
        }
    }
}
