//! Thermal-relaxation noise channels and density-matrix simulation.
//!
//! The channel model is zero-temperature thermal relaxation: amplitude
//! damping with probability `1 - exp(-t/T1)` combined with enough pure
//! dephasing that coherences decay as `exp(-t/T2)`. Noise acts on the
//! qubits a gate touches, for that gate's duration; a final
//! measurement-duration relaxation hits every qubit.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, StateVector};
use crate::encode::{OperatorRepr, QubitOperator};
use crate::error::{Error, Result};
use crate::oracle::hermitian_eigen;

/// Gate and measurement durations in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateDurations {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub cnot: f64,
    pub reset: f64,
    pub measure: f64,
}

impl Default for GateDurations {
    fn default() -> Self {
        Self { u1: 0.0, u2: 50.0, u3: 100.0, cnot: 200.0, reset: 1000.0, measure: 1000.0 }
    }
}

impl GateDurations {
    /// All durations zero: every channel degenerates to the identity.
    pub fn zero() -> Self {
        Self { u1: 0.0, u2: 0.0, u3: 0.0, cnot: 0.0, reset: 0.0, measure: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("u1", self.u1),
            ("u2", self.u2),
            ("u3", self.u3),
            ("cnot", self.cnot),
            ("reset", self.reset),
            ("measure", self.measure),
        ] {
            if v < 0.0 {
                return Err(Error::Validation(format!("duration {name} is negative")));
            }
        }
        Ok(())
    }
}

/// Per-qubit relaxation times plus gate durations. A `null` entry in the
/// T1/T2 arrays means no relaxation on that axis for that qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub t1_ms: Vec<Option<f64>>,
    pub t2_ms: Vec<Option<f64>>,
    pub durations_ns: GateDurations,
    /// Also decohere qubits idling while another gate runs.
    #[serde(default)]
    pub idle_noise: bool,
}

impl Default for NoiseModel {
    /// The primary 8-qubit calibration used by the noisy-simulation tests.
    fn default() -> Self {
        Self::calibration_primary()
    }
}

impl NoiseModel {
    /// Primary 8-qubit calibration.
    pub fn calibration_primary() -> Self {
        Self {
            t1_ms: [194.24, 230.20, 218.81, 212.36, 189.67, 198.52, 230.69, 153.56]
                .map(Some)
                .to_vec(),
            t2_ms: [188.28, 219.84, 226.43, 165.82, 236.03, 204.83, 196.17, 166.16]
                .map(Some)
                .to_vec(),
            durations_ns: GateDurations::default(),
            idle_noise: false,
        }
    }

    /// Second 8-qubit calibration (the one used for the enol-form runs).
    pub fn calibration_secondary() -> Self {
        Self {
            t1_ms: [134.45, 147.61, 208.15, 211.67, 170.22, 208.24, 200.66, 242.95]
                .map(Some)
                .to_vec(),
            t2_ms: [60.85, 234.66, 178.45, 210.15, 224.01, 178.00, 105.58, 136.21]
                .map(Some)
                .to_vec(),
            durations_ns: GateDurations::default(),
            idle_noise: false,
        }
    }

    /// A model that leaves states untouched (all durations zero).
    pub fn noiseless(n_qubits: usize) -> Self {
        Self {
            t1_ms: vec![None; n_qubits],
            t2_ms: vec![None; n_qubits],
            durations_ns: GateDurations::zero(),
            idle_noise: false,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.t1_ms.len().min(self.t2_ms.len())
    }

    pub fn validate(&self) -> Result<()> {
        self.durations_ns.validate()?;
        for (q, (t1, t2)) in self.t1_ms.iter().zip(&self.t2_ms).enumerate() {
            if let Some(t1) = t1 {
                if *t1 <= 0.0 {
                    return Err(Error::Physicality(format!("qubit {q}: T1 must be positive")));
                }
            }
            if let (Some(t1), Some(t2)) = (t1, t2) {
                if *t2 > 2.0 * t1 {
                    return Err(Error::Physicality(format!(
                        "qubit {q}: T2 = {t2} ms exceeds 2 T1 = {} ms",
                        2.0 * t1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: NoiseModel = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("bad noise model JSON: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("noise model serializes")
    }

    fn duration_of(&self, gate: &Gate) -> f64 {
        match gate {
            // Ry and X are U3-class single-qubit rotations for timing.
            Gate::Ry { .. } | Gate::X { .. } => self.durations_ns.u3,
            Gate::Cnot { .. } => self.durations_ns.cnot,
        }
    }
}

/// Kraus operators of a single-qubit channel.
#[derive(Debug, Clone)]
pub struct KrausSet {
    ops: Vec<Matrix2<Complex64>>,
}

impl KrausSet {
    pub fn identity() -> Self {
        Self { ops: vec![Matrix2::identity()] }
    }

    pub fn ops(&self) -> &[Matrix2<Complex64>] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.len() == 1 && (self.ops[0] - Matrix2::<Complex64>::identity()).norm() < 1e-15
    }

    /// `Σ K†K`, which must equal the identity for a trace-preserving channel.
    pub fn completeness(&self) -> Matrix2<Complex64> {
        let mut acc = Matrix2::zeros();
        for k in &self.ops {
            acc += k.adjoint() * k;
        }
        acc
    }
}

/// Thermal-relaxation channel for one qubit over `t_ns` nanoseconds.
///
/// `None` for a time constant disables that decay axis. Kraus operators:
/// `diag(1, c)`, `[[0, sqrt(1-e1)], [0, 0]]`, `diag(0, sqrt(e1 - c^2))`
/// with `e1 = exp(-t/T1)` and `c = exp(-t/T2)`; the channel fixes `|0><0|`.
pub fn thermal_kraus(t1_ms: Option<f64>, t2_ms: Option<f64>, t_ns: f64) -> Result<KrausSet> {
    if t_ns < 0.0 {
        return Err(Error::Validation(format!("negative duration {t_ns} ns")));
    }
    if let Some(t1) = t1_ms {
        if t1 <= 0.0 {
            return Err(Error::Physicality("T1 must be positive".into()));
        }
    }
    if let (Some(t1), Some(t2)) = (t1_ms, t2_ms) {
        if t2 > 2.0 * t1 {
            return Err(Error::Physicality(format!("T2 = {t2} ms exceeds 2 T1 = {} ms", 2.0 * t1)));
        }
    }
    // ns over ms: t/T in consistent units.
    let ratio = |t_const_ms: Option<f64>| t_const_ms.map(|t_const| t_ns * 1e-9 / (t_const * 1e-3));
    let e1 = ratio(t1_ms).map_or(1.0, |r| (-r).exp());
    let coherence = match ratio(t2_ms) {
        Some(r) => (-r).exp(),
        None => e1.sqrt(), // amplitude damping alone
    };
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let k0 = Matrix2::new(one, zero, zero, Complex64::new(coherence, 0.0));
    let k1 = Matrix2::new(zero, Complex64::new((1.0 - e1).max(0.0).sqrt(), 0.0), zero, zero);
    let k2 = Matrix2::new(
        zero,
        zero,
        zero,
        Complex64::new((e1 - coherence * coherence).max(0.0).sqrt(), 0.0),
    );
    let ops: Vec<Matrix2<Complex64>> =
        [k0, k1, k2].into_iter().filter(|k| k.norm() > 1e-15).collect();
    Ok(KrausSet { ops })
}

/// A `2^Q x 2^Q` density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: DMatrix<Complex64>,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Pure state `|basis><basis|`.
    pub fn pure_basis(n_qubits: usize, basis: u64) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if basis as usize >= dim {
            return Err(Error::Validation(format!(
                "basis index {basis} outside a {n_qubits}-qubit register"
            )));
        }
        let mut rho = DMatrix::zeros(dim, dim);
        rho[(basis as usize, basis as usize)] = Complex64::new(1.0, 0.0);
        Ok(Self { rho, n_qubits })
    }

    pub fn from_statevector(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut rho = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        Self { rho, n_qubits: state.n_qubits() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.diagonal().sum()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).diagonal().sum().re
    }

    /// Check Hermiticity, unit trace, and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let dim = self.rho.nrows();
        for i in 0..dim {
            for j in 0..=i {
                if (self.rho[(i, j)] - self.rho[(j, i)].conj()).norm() > 1e-10 {
                    return Err(Error::Numerical("density matrix is not Hermitian".into()));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Numerical(format!("density matrix trace {tr} is not 1")));
        }
        let (eigs, _) = hermitian_eigen(&self.rho, 1e-9)?;
        if eigs[0] < -1e-9 {
            return Err(Error::Numerical(format!(
                "density matrix has negative eigenvalue {}",
                eigs[0]
            )));
        }
        Ok(())
    }
}

/// `rho -> U rho U†` for a single-qubit unitary `u` on `qubit`.
fn conjugate_single(rho: &mut DMatrix<Complex64>, qubit: usize, u: &Matrix2<Complex64>) {
    let dim = rho.nrows();
    let bit = 1usize << qubit;
    // Left multiply by U: mix row pairs, column by column.
    for col in 0..dim {
        for row in 0..dim {
            if row & bit != 0 {
                continue;
            }
            let r1 = row | bit;
            let a = rho[(row, col)];
            let b = rho[(r1, col)];
            rho[(row, col)] = u[(0, 0)] * a + u[(0, 1)] * b;
            rho[(r1, col)] = u[(1, 0)] * a + u[(1, 1)] * b;
        }
    }
    // Right multiply by U†: mix column pairs, row by row.
    for row in 0..dim {
        for col in 0..dim {
            if col & bit != 0 {
                continue;
            }
            let c1 = col | bit;
            let a = rho[(row, col)];
            let b = rho[(row, c1)];
            rho[(row, col)] = a * u[(0, 0)].conj() + b * u[(0, 1)].conj();
            rho[(row, c1)] = a * u[(1, 0)].conj() + b * u[(1, 1)].conj();
        }
    }
}

fn conjugate_cnot(rho: &mut DMatrix<Complex64>, control: usize, target: usize) {
    let dim = rho.nrows();
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    // Permutation conjugation: swap rows, then matching columns.
    for i in 0..dim {
        if i & cbit != 0 && i & tbit == 0 {
            let j = i | tbit;
            for col in 0..dim {
                let tmp = rho[(i, col)];
                rho[(i, col)] = rho[(j, col)];
                rho[(j, col)] = tmp;
            }
        }
    }
    for i in 0..dim {
        if i & cbit != 0 && i & tbit == 0 {
            let j = i | tbit;
            for row in 0..dim {
                let tmp = rho[(row, i)];
                rho[(row, i)] = rho[(row, j)];
                rho[(row, j)] = tmp;
            }
        }
    }
}

/// `rho -> Σ_k K_k rho K_k†` for a single-qubit Kraus set.
fn apply_kraus(rho: &mut DMatrix<Complex64>, qubit: usize, kraus: &KrausSet) {
    if kraus.is_identity() {
        return;
    }
    let mut acc = DMatrix::zeros(rho.nrows(), rho.ncols());
    for k in kraus.ops() {
        let mut term = rho.clone();
        conjugate_single(&mut term, qubit, k);
        acc += term;
    }
    *rho = acc;
}

fn ry_matrix(theta: f64) -> Matrix2<Complex64> {
    let (sin, cos) = (theta / 2.0).sin_cos();
    Matrix2::new(
        Complex64::new(cos, 0.0),
        Complex64::new(-sin, 0.0),
        Complex64::new(sin, 0.0),
        Complex64::new(cos, 0.0),
    )
}

fn x_matrix() -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    )
}

/// Simulate a circuit as a density matrix under the noise model.
///
/// Each gate applies its unitary, then the thermal channel of that gate's
/// duration on every qubit it touches (all qubits when `idle_noise` is
/// set). A measurement-duration relaxation closes the run.
pub fn simulate_density(
    circuit: &Circuit,
    params: &[f64],
    model: &NoiseModel,
    initial: u64,
) -> Result<DensityMatrix> {
    let q = circuit.n_qubits();
    if params.len() != circuit.n_params() {
        return Err(Error::Validation(format!(
            "circuit takes {} parameters, got {}",
            circuit.n_params(),
            params.len()
        )));
    }
    if model.n_qubits() < q {
        return Err(Error::Config(format!(
            "noise model covers {} qubits, circuit needs {q}",
            model.n_qubits()
        )));
    }
    model.validate()?;

    let mut dm = DensityMatrix::pure_basis(q, initial)?;
    let rho = &mut dm.rho;

    let relax = |rho: &mut DMatrix<Complex64>, qubits: &[usize], t_ns: f64| -> Result<()> {
        if t_ns == 0.0 {
            return Ok(());
        }
        for &qb in qubits {
            let kraus = thermal_kraus(model.t1_ms[qb], model.t2_ms[qb], t_ns)?;
            apply_kraus(rho, qb, &kraus);
        }
        Ok(())
    };

    for gate in circuit.gates() {
        let touched: Vec<usize> = match *gate {
            Gate::Ry { qubit, param } => {
                conjugate_single(rho, qubit, &ry_matrix(params[param]));
                vec![qubit]
            }
            Gate::X { qubit } => {
                conjugate_single(rho, qubit, &x_matrix());
                vec![qubit]
            }
            Gate::Cnot { control, target } => {
                conjugate_cnot(rho, control, target);
                vec![control, target]
            }
        };
        let duration = model.duration_of(gate);
        if model.idle_noise {
            let all: Vec<usize> = (0..q).collect();
            relax(rho, &all, duration)?;
        } else {
            relax(rho, &touched, duration)?;
        }
    }

    let all: Vec<usize> = (0..q).collect();
    relax(rho, &all, model.durations_ns.measure)?;

    dm.validate()?;
    Ok(dm)
}

/// Raw and subspace-renormalized expectation values under a noisy state.
///
/// `raw = Re Tr(rho H)`; `renormalized` projects onto the encoded block
/// first and divides by the retained population. The two agree when no
/// population leaked into padding states.
pub fn noisy_expectation(rho: &DensityMatrix, h: &QubitOperator) -> Result<(f64, f64)> {
    if rho.n_qubits() != h.n_qubits() {
        return Err(Error::Dimension(format!(
            "state on {} qubits, operator on {}",
            rho.n_qubits(),
            h.n_qubits()
        )));
    }
    let m = rho.matrix();
    let d = h.encoded_dim();
    let (mut raw, mut projected) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    match h.repr() {
        OperatorRepr::Sparse(op) => {
            for (r, c, v) in op.entries() {
                let contrib = v * m[(c as usize, r as usize)];
                raw += contrib;
                if (r as usize) < d && (c as usize) < d {
                    projected += contrib;
                }
            }
        }
        OperatorRepr::Pauli(_) => {
            let hm = h.to_matrix()?;
            for r in 0..hm.nrows() {
                for c in 0..hm.ncols() {
                    let v = hm[(r, c)];
                    if v.norm_sqr() == 0.0 {
                        continue;
                    }
                    let contrib = v * m[(c, r)];
                    raw += contrib;
                    if r < d && c < d {
                        projected += contrib;
                    }
                }
            }
        }
    }
    let retained: f64 = (0..d).map(|k| m[(k, k)].re).sum();
    if retained < 1e-12 {
        return Err(Error::Numerical(format!(
            "encoded-subspace population {retained:.3e} is degenerate"
        )));
    }
    Ok((raw.re, projected.re / retained))
}
