//! Variational ground-state search: initialization strategies, a BFGS
//! minimizer with parameter-shift gradients, and layer-sweep experiments.

use std::f64::consts::FRAC_PI_2;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::circuit::{
    build_chain_ansatz, build_staggered_ansatz, expectation, simulate_statevector, Circuit,
};
use crate::configspace::{encode_index, Configuration, ConfigurationSet};
use crate::encode::QubitOperator;
use crate::error::{Error, Result};
use crate::parallel;

/// How the ansatz parameters are initialized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InitStrategy {
    /// All parameters zero; the circuit starts from the reference state.
    #[serde(rename = "hf")]
    HartreeFock,
    /// Independent normal draws with mean 0. `variance` is the variance
    /// (default 0.3), not the standard deviation.
    Gaussian {
        seed: u64,
        #[serde(default = "default_variance")]
        variance: f64,
    },
}

fn default_variance() -> f64 {
    0.3
}

impl InitStrategy {
    pub fn gaussian(seed: u64) -> Self {
        InitStrategy::Gaussian { seed, variance: default_variance() }
    }

    /// Same strategy with the seed shifted by `offset` (restart seeds are
    /// `base_seed + i`). Hartree-Fock initialization is unaffected.
    pub fn with_seed_offset(&self, offset: u64) -> Self {
        match *self {
            InitStrategy::HartreeFock => InitStrategy::HartreeFock,
            InitStrategy::Gaussian { seed, variance } => {
                InitStrategy::Gaussian { seed: seed + offset, variance }
            }
        }
    }
}

/// Draw the initial parameter vector (radians).
pub fn initialize_params(strategy: &InitStrategy, n_params: usize) -> Result<Vec<f64>> {
    match *strategy {
        InitStrategy::HartreeFock => Ok(vec![0.0; n_params]),
        InitStrategy::Gaussian { seed, variance } => {
            if variance <= 0.0 {
                return Err(Error::Validation(format!(
                    "Gaussian init needs positive variance, got {variance}"
                )));
            }
            let normal = Normal::new(0.0, variance.sqrt())
                .map_err(|e| Error::Validation(format!("bad Gaussian parameters: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..n_params).map(|_| normal.sample(&mut rng)).collect())
        }
    }
}

/// Qubit basis index of the aufbau reference: the configuration occupying
/// the lowest `n_alpha` even and `n_beta` odd spin-orbitals, encoded
/// through the sector's canonical order.
pub fn hf_reference_state(set: &ConfigurationSet) -> Result<u64> {
    if set.is_empty() {
        return Err(Error::Validation("empty configuration set".into()));
    }
    let mut bits = 0u64;
    for k in 0..set.n_alpha() {
        bits |= 1 << (2 * k);
    }
    for k in 0..set.n_beta() {
        bits |= 1 << (2 * k + 1);
    }
    let config = Configuration::new(bits, set.n_spin_orbitals())?;
    Ok(encode_index(set, &config)? as u64)
}

/// Stopping criteria for [`minimize`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OptimConfig {
    /// Stop when the gradient max-norm falls at or below this.
    pub grad_tol: f64,
    /// Stop when the objective improves by at most this over an iteration.
    pub f_tol: f64,
    /// Cap on direct objective evaluations (line-search probes and accepted
    /// points; gradient side evaluations are accounted separately).
    pub max_evals: usize,
}

impl Default for OptimConfig {
    fn default() -> Self {
        Self { grad_tol: 1e-8, f_tol: 1e-10, max_evals: 20_000 }
    }
}

/// Outcome of a local minimization.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub f: f64,
    /// `(evaluation index, objective value)` for each direct evaluation.
    pub history: Vec<(usize, f64)>,
    /// Direct objective evaluations performed.
    pub evaluations: usize,
    pub converged: bool,
}

/// BFGS with a weak-Wolfe line search.
///
/// The curvature check reuses the gradient needed for the next BFGS
/// update, so a unit step costs one evaluation and one gradient. Stops
/// when the gradient max-norm reaches `grad_tol`, the objective change
/// over an iteration reaches `f_tol`, or `max_evals` is exhausted (then
/// `converged` is false). The returned point is the best direct
/// evaluation seen.
pub fn minimize<F, G>(
    mut objective: F,
    mut gradient: G,
    x0: &[f64],
    config: &OptimConfig,
) -> Result<MinimizeResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
    G: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    const C1: f64 = 1e-4;
    const C2: f64 = 0.9;

    let n = x0.len();
    let mut history: Vec<(usize, f64)> = Vec::new();
    let mut evals = 0usize;

    let mut eval = |x: &[f64], history: &mut Vec<(usize, f64)>, evals: &mut usize| -> Result<f64> {
        let v = objective(x)?;
        if !v.is_finite() {
            return Err(Error::Numerical(format!(
                "objective returned a non-finite value {v} at evaluation {}",
                *evals + 1
            )));
        }
        history.push((*evals, v));
        *evals += 1;
        Ok(v)
    };

    let mut x = x0.to_vec();
    let mut fx = eval(&x, &mut history, &mut evals)?;
    let mut best = (fx, x.clone());

    if n == 0 {
        return Ok(MinimizeResult { x, f: fx, history, evaluations: evals, converged: true });
    }

    // Inverse Hessian approximation, dense row-major.
    let mut h_inv: Vec<f64> = identity(n);
    let mut first_update = true;
    let mut g = gradient(&x)?;
    let mut converged = false;

    'outer: loop {
        if max_norm(&g) <= config.grad_tol {
            converged = true;
            break;
        }
        if evals >= config.max_evals {
            break;
        }

        let mut d = neg_mat_vec(&h_inv, &g, n);
        let mut slope = dot(&d, &g);
        if slope >= 0.0 {
            // Curvature information went bad; restart from steepest descent.
            h_inv = identity(n);
            first_update = true;
            d = g.iter().map(|v| -v).collect();
            slope = dot(&d, &g);
        }

        // Weak-Wolfe bracketing: shrink on an Armijo failure, expand when
        // the directional derivative says the step is still too short.
        // If the bracket exhausts before curvature holds, fall back to the
        // lowest sufficient-decrease point seen.
        let mut lo = 0.0f64;
        let mut hi = f64::INFINITY;
        let mut alpha = 1.0f64;
        let mut accepted: Option<(Vec<f64>, f64, Vec<f64>)> = None;
        for _ in 0..30 {
            if evals >= config.max_evals {
                break 'outer;
            }
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            let ft = eval(&trial, &mut history, &mut evals)?;
            if ft < best.0 {
                best = (ft, trial.clone());
            }
            if ft > fx + C1 * alpha * slope {
                hi = alpha;
            } else {
                let gt = gradient(&trial)?;
                let st = dot(&gt, &d);
                let better = accepted.as_ref().map_or(true, |(_, fa, _)| ft < *fa);
                if better {
                    accepted = Some((trial, ft, gt));
                }
                if st < C2 * slope {
                    lo = alpha;
                } else {
                    break;
                }
            }
            alpha = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * alpha };
            if hi - lo < 1e-16 * (1.0 + lo) {
                break;
            }
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            // Armijo never held: numerically flat along this direction.
            break;
        };

        let delta_f = fx - f_new;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if first_update {
                // Scale the seed inverse Hessian to the measured curvature.
                let yy = dot(&y, &y);
                if yy > 0.0 {
                    let scale = sy / yy;
                    for (i, v) in h_inv.iter_mut().enumerate() {
                        *v = if i % (n + 1) == 0 { scale } else { 0.0 };
                    }
                }
                first_update = false;
            }
            bfgs_update(&mut h_inv, &s, &y, sy, n);
        }
        x = x_new;
        fx = f_new;
        g = g_new;

        if delta_f.abs() <= config.f_tol {
            converged = true;
            break;
        }
    }

    Ok(MinimizeResult { x: best.1, f: best.0, history, evaluations: evals, converged })
}

/// [`minimize`] with a central finite-difference gradient (step 1e-6) for
/// objectives that have no structural gradient. The difference evaluations
/// do not count toward `max_evals`.
pub fn minimize_fd<F>(mut objective: F, x0: &[f64], config: &OptimConfig) -> Result<MinimizeResult>
where
    F: FnMut(&[f64]) -> Result<f64> + Clone,
{
    let mut for_grad = objective.clone();
    let grad = move |x: &[f64]| -> Result<Vec<f64>> {
        let h = 1e-6;
        let mut out = Vec::with_capacity(x.len());
        let mut probe = x.to_vec();
        for i in 0..x.len() {
            probe[i] = x[i] + h;
            let plus = for_grad(&probe)?;
            probe[i] = x[i] - h;
            let minus = for_grad(&probe)?;
            probe[i] = x[i];
            out.push((plus - minus) / (2.0 * h));
        }
        Ok(out)
    };
    minimize(move |x| objective(x), grad, x0, config)
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn max_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn neg_mat_vec(m: &[f64], v: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|i| -dot(&m[i * n..(i + 1) * n], v)).collect()
}

/// Standard BFGS inverse-Hessian update:
/// `H <- (I - s y^T / sy) H (I - y s^T / sy) + s s^T / sy`.
fn bfgs_update(h: &mut Vec<f64>, s: &[f64], y: &[f64], sy: f64, n: usize) {
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], y)).collect();
    let yhy = dot(y, &hy);
    let rho = 1.0 / sy;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = h[i * n + j] - rho * (s[i] * hy[j] + hy[i] * s[j])
                + rho * rho * yhy * s[i] * s[j]
                + rho * s[i] * s[j];
        }
    }
    *h = out;
}

/// Parameter-shift gradient of the expectation objective: component `i` is
/// `[E(θ + π/2 e_i) − E(θ − π/2 e_i)] / 2`, exact for Ry generators.
pub fn parameter_shift_gradient(
    h: &QubitOperator,
    circuit: &Circuit,
    prep: u64,
    params: &[f64],
) -> Result<Vec<f64>> {
    let components: Vec<Result<f64>> = parallel::indexed_map(params.len(), |i| {
        let mut shifted = params.to_vec();
        shifted[i] = params[i] + FRAC_PI_2;
        let plus = expectation(&simulate_statevector(circuit, &shifted, prep)?, h)?;
        shifted[i] = params[i] - FRAC_PI_2;
        let minus = expectation(&simulate_statevector(circuit, &shifted, prep)?, h)?;
        Ok((plus - minus) / 2.0)
    });
    components.into_iter().collect()
}

/// One finished VQE run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VqeResult {
    pub energy_hartree: f64,
    pub params: Vec<f64>,
    /// Total expectation evaluations, including parameter-shift pairs.
    pub evaluations: usize,
    pub converged: bool,
    /// `(evaluation index, energy)` per direct objective evaluation.
    pub history: Vec<(usize, f64)>,
    pub layers: usize,
    pub ansatz: String,
    pub init: InitStrategy,
}

/// Minimize `<ψ(θ)|H|ψ(θ)>` where `|ψ(θ)>` is the circuit applied to the
/// basis state `|prep>` (state preparation by X gates on the set bits).
pub fn run_vqe(
    h: &QubitOperator,
    circuit: &Circuit,
    prep: u64,
    init: &InitStrategy,
    config: &OptimConfig,
) -> Result<VqeResult> {
    if h.n_qubits() != circuit.n_qubits() {
        return Err(Error::Dimension(format!(
            "operator on {} qubits, circuit on {}",
            h.n_qubits(),
            circuit.n_qubits()
        )));
    }
    if prep >> circuit.n_qubits() != 0 {
        return Err(Error::Validation(format!(
            "preparation index {prep} outside the {}-qubit register",
            circuit.n_qubits()
        )));
    }

    let x0 = initialize_params(init, circuit.n_params())?;
    let shift_evals = AtomicUsize::new(0);

    let objective =
        |params: &[f64]| -> Result<f64> { expectation(&simulate_statevector(circuit, params, prep)?, h) };
    let gradient = |params: &[f64]| -> Result<Vec<f64>> {
        shift_evals.fetch_add(2 * params.len(), Ordering::Relaxed);
        parameter_shift_gradient(h, circuit, prep, params)
    };

    let result = minimize(objective, gradient, &x0, config)?;
    Ok(VqeResult {
        energy_hartree: result.f,
        params: result.x,
        evaluations: result.evaluations + shift_evals.load(Ordering::Relaxed),
        converged: result.converged,
        history: result.history,
        layers: 0,
        ansatz: String::new(),
        init: *init,
    })
}

/// The two hardware-efficient ansatz families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsatzFamily {
    Staggered,
    Chain,
}

impl AnsatzFamily {
    pub fn build(&self, n_qubits: usize, layers: usize) -> Result<Circuit> {
        match self {
            AnsatzFamily::Staggered => build_staggered_ansatz(n_qubits, layers),
            AnsatzFamily::Chain => build_chain_ansatz(n_qubits, layers),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AnsatzFamily::Staggered => "staggered",
            AnsatzFamily::Chain => "chain",
        }
    }
}

impl std::str::FromStr for AnsatzFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "staggered" => Ok(AnsatzFamily::Staggered),
            "chain" => Ok(AnsatzFamily::Chain),
            other => Err(Error::Config(format!("unknown ansatz family '{other}'"))),
        }
    }
}

/// Best-of-restarts VQE for each entry of `layer_list`.
///
/// Restart `i` uses the init seed shifted by `i`; Hartree-Fock
/// initialization is deterministic, so it runs once per layer count.
/// Results come back one per layer, in the order given.
pub fn layer_sweep(
    h: &QubitOperator,
    family: AnsatzFamily,
    layer_list: &[usize],
    prep: u64,
    init: &InitStrategy,
    n_restarts: usize,
    config: &OptimConfig,
) -> Result<Vec<VqeResult>> {
    if layer_list.is_empty() {
        return Err(Error::Validation("layer list is empty".into()));
    }
    if n_restarts == 0 {
        return Err(Error::Validation("need at least one restart".into()));
    }
    let restarts = match init {
        InitStrategy::HartreeFock => 1,
        InitStrategy::Gaussian { .. } => n_restarts,
    };
    let jobs: Vec<(usize, u64)> = layer_list
        .iter()
        .flat_map(|&layers| (0..restarts as u64).map(move |r| (layers, r)))
        .collect();
    let runs: Vec<Result<VqeResult>> = parallel::indexed_map(jobs.len(), |j| {
        let (layers, restart) = jobs[j];
        let circuit = family.build(h.n_qubits(), layers)?;
        let mut result = run_vqe(h, &circuit, prep, &init.with_seed_offset(restart), config)?;
        result.layers = layers;
        result.ansatz = family.name().to_string();
        Ok(result)
    });
    let mut per_layer: Vec<VqeResult> = Vec::with_capacity(layer_list.len());
    for (chunk, _layers) in runs.chunks(restarts).zip(layer_list) {
        let mut best: Option<VqeResult> = None;
        for r in chunk {
            let r = r.as_ref().map_err(|e| Error::Numerical(e.to_string()))?;
            if best.as_ref().map_or(true, |b| r.energy_hartree < b.energy_hartree) {
                best = Some(r.clone());
            }
        }
        per_layer.push(best.expect("restarts > 0"));
    }
    Ok(per_layer)
}
