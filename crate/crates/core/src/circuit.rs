//! Hardware-efficient ansatz circuits and exact statevector simulation.
//!
//! The gate set is Ry, CNOT, and X (for basis-state preparation) — exactly
//! what the two ansatz families need. `Ry(θ) = [[cos θ/2, −sin θ/2],
//! [sin θ/2, cos θ/2]]`, so circuits of Ry and CNOT keep real initial
//! vectors real.

use num_complex::Complex64;

use crate::encode::{OperatorRepr, QubitOperator};
use crate::error::{Error, Result};

/// A single gate. `Ry` carries the index of its rotation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Ry { qubit: usize, param: usize },
    Cnot { control: usize, target: usize },
    X { qubit: usize },
}

/// An ordered gate list on a fixed qubit register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new(), n_params: 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let check = |q: usize| -> Result<()> {
            if q >= self.n_qubits {
                return Err(Error::Validation(format!(
                    "qubit {q} outside the {}-qubit register",
                    self.n_qubits
                )));
            }
            Ok(())
        };
        match gate {
            Gate::Ry { qubit, param } => {
                check(qubit)?;
                self.n_params = self.n_params.max(param + 1);
            }
            Gate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::Validation("CNOT control equals target".into()));
                }
            }
            Gate::X { qubit } => check(qubit)?,
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Prefix the circuit with X gates flipping the set bits of `basis`,
    /// so running it from `|0...0>` starts the ansatz from `|basis>`.
    pub fn with_state_prep(&self, basis: u64) -> Result<Circuit> {
        if basis >> self.n_qubits != 0 {
            return Err(Error::Validation(format!(
                "basis index {basis} outside the {}-qubit register",
                self.n_qubits
            )));
        }
        let mut out = Circuit::new(self.n_qubits);
        for q in 0..self.n_qubits {
            if (basis >> q) & 1 == 1 {
                out.push(Gate::X { qubit: q })?;
            }
        }
        for &g in &self.gates {
            out.push(g)?;
        }
        out.n_params = self.n_params;
        Ok(out)
    }

    /// Serialize: header `QUBITS <Q> PARAMS <P>`, one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {} PARAMS {}\n", self.n_qubits, self.n_params);
        for g in &self.gates {
            match g {
                Gate::Ry { qubit, param } => out.push_str(&format!("RY {qubit} {param}\n")),
                Gate::Cnot { control, target } => {
                    out.push_str(&format!("CNOT {control} {target}\n"))
                }
                Gate::X { qubit } => out.push_str(&format!("X {qubit}\n")),
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "empty circuit file".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "QUBITS" || fields[2] != "PARAMS" {
            return Err(Error::Parse { line: 1, msg: "expected 'QUBITS <q> PARAMS <p>'".into() });
        }
        let parse_idx = |s: &str, line: usize| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse { line, msg: format!("bad integer '{s}'") })
        };
        let n_qubits = parse_idx(fields[1], 1)?;
        let n_params = parse_idx(fields[3], 1)?;
        let mut c = Circuit::new(n_qubits);
        for (idx, raw) in lines {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let gate = match (fields[0], fields.len()) {
                ("RY", 3) => Gate::Ry {
                    qubit: parse_idx(fields[1], lineno)?,
                    param: parse_idx(fields[2], lineno)?,
                },
                ("CNOT", 3) => Gate::Cnot {
                    control: parse_idx(fields[1], lineno)?,
                    target: parse_idx(fields[2], lineno)?,
                },
                ("X", 2) => Gate::X { qubit: parse_idx(fields[1], lineno)? },
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unrecognized gate line '{line}'"),
                    })
                }
            };
            c.push(gate)?;
        }
        if c.n_params > n_params {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header declares {n_params} params, gates use {}", c.n_params),
            });
        }
        c.n_params = n_params;
        Ok(c)
    }
}

/// Staggered entangler ansatz: each layer applies one Ry per qubit, then
/// `n/2` CNOTs pairing `(0,1)(2,3)...` on odd layers and the shifted pairs
/// `(1,2)(3,4)...(n-1,0)` on even layers, with a final Ry rank after the
/// last layer. Totals for n qubits: `n/2 · L` CNOTs and `n(L+1)` parameters.
pub fn build_staggered_ansatz(n_qubits: usize, layers: usize) -> Result<Circuit> {
    if n_qubits == 0 || n_qubits % 2 != 0 {
        return Err(Error::Validation(format!(
            "staggered ansatz needs an even qubit count, got {n_qubits}"
        )));
    }
    let mut c = Circuit::new(n_qubits);
    let mut param = 0;
    for layer in 1..=layers {
        for q in 0..n_qubits {
            c.push(Gate::Ry { qubit: q, param })?;
            param += 1;
        }
        if layer % 2 == 1 {
            for q in (0..n_qubits).step_by(2) {
                c.push(Gate::Cnot { control: q, target: q + 1 })?;
            }
        } else {
            for q in (1..n_qubits - 1).step_by(2) {
                c.push(Gate::Cnot { control: q, target: q + 1 })?;
            }
            c.push(Gate::Cnot { control: n_qubits - 1, target: 0 })?;
        }
    }
    for q in 0..n_qubits {
        c.push(Gate::Ry { qubit: q, param })?;
        param += 1;
    }
    Ok(c)
}

/// Chain entangler ansatz: each layer applies one Ry per qubit followed by
/// the CNOT chain `(0,1)(1,2)...(n-2,n-1)`; no trailing Ry rank. Totals:
/// `(n-1) · L` CNOTs and `n · L` parameters.
pub fn build_chain_ansatz(n_qubits: usize, layers: usize) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::Validation(format!(
            "chain ansatz needs at least 2 qubits, got {n_qubits}"
        )));
    }
    if layers == 0 {
        return Err(Error::Validation("chain ansatz needs at least 1 layer".into()));
    }
    let mut c = Circuit::new(n_qubits);
    let mut param = 0;
    for _ in 0..layers {
        for q in 0..n_qubits {
            c.push(Gate::Ry { qubit: q, param })?;
            param += 1;
        }
        for q in 0..n_qubits - 1 {
            c.push(Gate::Cnot { control: q, target: q + 1 })?;
        }
    }
    Ok(c)
}

/// A normalized complex state vector; basis index bit `i` is qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: u64) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index as usize >= dim {
            return Err(Error::Validation(format!(
                "basis index {index} outside a {n_qubits}-qubit register"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::Dimension("amplitude count must be a power of two".into()));
        }
        let s = Self { amplitudes };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!("state vector norm {norm} is not 1")));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Initial state for the simulator: a basis index or a full vector.
#[derive(Debug, Clone)]
pub enum InitialState {
    Basis(u64),
    Vector(StateVector),
}

impl From<u64> for InitialState {
    fn from(index: u64) -> Self {
        InitialState::Basis(index)
    }
}

impl From<StateVector> for InitialState {
    fn from(v: StateVector) -> Self {
        InitialState::Vector(v)
    }
}

#[inline]
pub(crate) fn apply_ry(amps: &mut [Complex64], qubit: usize, theta: f64) {
    let (sin, cos) = (theta / 2.0).sin_cos();
    let bit = 1usize << qubit;
    for base in 0..amps.len() / 2 {
        // index with the qubit bit cleared: spread the low bits around it
        let low = base & (bit - 1);
        let high = (base & !(bit - 1)) << 1;
        let i = high | low;
        let j = i | bit;
        let a = amps[i];
        let b = amps[j];
        amps[i] = a * cos - b * sin;
        amps[j] = a * sin + b * cos;
    }
}

#[inline]
pub(crate) fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

#[inline]
pub(crate) fn apply_x(amps: &mut [Complex64], qubit: usize) {
    let bit = 1usize << qubit;
    for i in 0..amps.len() {
        if i & bit == 0 {
            amps.swap(i, i | bit);
        }
    }
}

/// Apply the circuit's gates in order to the initial state.
pub fn simulate_statevector(
    circuit: &Circuit,
    params: &[f64],
    initial: impl Into<InitialState>,
) -> Result<StateVector> {
    if params.len() != circuit.n_params() {
        return Err(Error::Validation(format!(
            "circuit takes {} parameters, got {}",
            circuit.n_params(),
            params.len()
        )));
    }
    let mut state = match initial.into() {
        InitialState::Basis(index) => StateVector::basis(circuit.n_qubits(), index)?,
        InitialState::Vector(v) => {
            if v.n_qubits() != circuit.n_qubits() {
                return Err(Error::Dimension(format!(
                    "initial state on {} qubits, circuit on {}",
                    v.n_qubits(),
                    circuit.n_qubits()
                )));
            }
            v
        }
    };
    for gate in circuit.gates() {
        match *gate {
            Gate::Ry { qubit, param } => apply_ry(&mut state.amplitudes, qubit, params[param]),
            Gate::Cnot { control, target } => apply_cnot(&mut state.amplitudes, control, target),
            Gate::X { qubit } => apply_x(&mut state.amplitudes, qubit),
        }
    }
    Ok(state)
}

/// Exact expectation value `<s|H|s>`.
///
/// The imaginary part must vanish (Hermitian observable); values above
/// 1e-10 are rejected.
pub fn expectation(state: &StateVector, h: &QubitOperator) -> Result<f64> {
    if state.n_qubits() != h.n_qubits() {
        return Err(Error::Dimension(format!(
            "state on {} qubits, operator on {}",
            state.n_qubits(),
            h.n_qubits()
        )));
    }
    let amps = state.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    match h.repr() {
        OperatorRepr::Sparse(op) => {
            for (r, c, v) in op.entries() {
                acc += amps[r as usize].conj() * v * amps[c as usize];
            }
        }
        OperatorRepr::Pauli(sum) => {
            for (string, coeff) in sum.terms() {
                let mut term = Complex64::new(0.0, 0.0);
                for (j, a) in amps.iter().enumerate() {
                    if a.norm_sqr() == 0.0 {
                        continue;
                    }
                    let (tgt, phase) = string.apply_to_basis(j as u64);
                    term += amps[tgt as usize].conj() * phase * a;
                }
                acc += coeff * term;
            }
        }
    }
    if acc.im.abs() >= 1e-10 {
        return Err(Error::Numerical(format!(
            "expectation has imaginary part {:.3e}; operator is not Hermitian",
            acc.im
        )));
    }
    Ok(acc.re)
}

/// Shot-sampled expectation: each Pauli term's outcome distribution is
/// sampled binomially with `shots` draws. Seeded and reproducible; the
/// noiseless pipeline uses [`expectation`] instead.
pub fn sampled_expectation(
    state: &StateVector,
    h: &QubitOperator,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    use rand::SeedableRng;
    use rand_distr::{Binomial, Distribution};

    if shots == 0 {
        return Err(Error::Validation("shot count must be positive".into()));
    }
    let sum = h.pauli_sum()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for (string, coeff) in sum.terms() {
        if string.is_identity() {
            total += coeff.re;
            continue;
        }
        let single = QubitOperator::from_pauli({
            let mut s = crate::pauli::PauliSum::zero(sum.n_qubits());
            s.add_term(*string, Complex64::new(1.0, 0.0))?;
            s
        });
        let mean = expectation(state, &single)?;
        let p = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
        let dist = Binomial::new(shots, p)
            .map_err(|e| Error::Numerical(format!("binomial sampling failed: {e}")))?;
        let k = dist.sample(&mut rng);
        total += coeff.re * (2.0 * k as f64 / shots as f64 - 1.0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliString, PauliSum};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn staggered_ansatz_gate_and_parameter_totals() {
        let c = build_staggered_ansatz(8, 20).unwrap();
        assert_eq!(c.cnot_count(), 80);
        assert_eq!(c.n_params(), 168);
        let c0 = build_staggered_ansatz(8, 0).unwrap();
        assert_eq!(c0.cnot_count(), 0);
        assert_eq!(c0.n_params(), 8);
    }

    #[test]
    fn staggered_two_layers_match_the_published_pattern() {
        let c = build_staggered_ansatz(8, 2).unwrap();
        let cnots: Vec<(usize, usize)> = c
            .gates()
            .iter()
            .filter_map(|g| match g {
                Gate::Cnot { control, target } => Some((*control, *target)),
                _ => None,
            })
            .collect();
        assert_eq!(
            cnots,
            vec![(0, 1), (2, 3), (4, 5), (6, 7), (1, 2), (3, 4), (5, 6), (7, 0)]
        );
        // layer 1 Ry rank, 4 CNOTs, layer 2 Ry rank, 4 CNOTs, final rank
        assert_eq!(c.gates().len(), 8 + 4 + 8 + 4 + 8);
        assert_eq!(c.n_params(), 24);
    }

    #[test]
    fn chain_ansatz_gate_and_parameter_totals() {
        let c10 = build_chain_ansatz(8, 10).unwrap();
        assert_eq!(c10.cnot_count(), 70);
        assert_eq!(c10.n_params(), 80);
        let c4 = build_chain_ansatz(8, 4).unwrap();
        assert_eq!(c4.cnot_count(), 28);
        assert_eq!(c4.n_params(), 32);
        let c1 = build_chain_ansatz(8, 1).unwrap();
        assert_eq!(c1.cnot_count(), 7);
        assert_eq!(c1.n_params(), 8);
        assert!(build_chain_ansatz(8, 0).is_err());
        assert!(build_staggered_ansatz(7, 2).is_err());
    }

    #[test]
    fn zero_parameters_reduce_to_the_cnot_network() {
        let c = build_chain_ansatz(3, 1).unwrap();
        let params = vec![0.0; c.n_params()];
        // |100> (qubit 2 set): chain CNOTs (0,1),(1,2) leave it unchanged
        // (controls 0 and 1 are clear).
        let out = simulate_statevector(&c, &params, 0b100u64).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0b100].re, 1.0, epsilon = 1e-12);
        // |001>: CNOT(0,1) sets qubit 1, then CNOT(1,2) sets qubit 2.
        let out = simulate_statevector(&c, &params, 0b001u64).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0b111].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ry_pi_flips_a_single_qubit() {
        let mut c = Circuit::new(1);
        c.push(Gate::Ry { qubit: 0, param: 0 }).unwrap();
        let out = simulate_statevector(&c, &[std::f64::consts::PI], 0u64).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[1].re.abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amplitudes()[0].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn parameter_count_mismatch_rejected() {
        let c = build_chain_ansatz(2, 1).unwrap();
        assert!(simulate_statevector(&c, &[0.0], 0u64).is_err());
    }

    #[test]
    fn expectation_of_scaled_identity_is_the_scale() {
        let state = StateVector::basis(2, 1).unwrap();
        let h = QubitOperator::from_pauli(
            PauliSum::scalar(2, Complex64::new(0.75, 0.0)).unwrap(),
        );
        assert_abs_diff_eq!(expectation(&state, &h).unwrap(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn expectation_of_diagonal_operator_on_basis_state() {
        let mut op = crate::encode::SparseOp::zero(2);
        for (k, v) in [0.1, 0.2, 0.3, 0.4].iter().enumerate() {
            op.add_entry(k as u32, k as u32, Complex64::new(*v, 0.0)).unwrap();
        }
        let h = QubitOperator::from_sparse(op);
        let state = StateVector::basis(2, 2).unwrap();
        assert_abs_diff_eq!(expectation(&state, &h).unwrap(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn circuit_text_round_trip() {
        let c = build_staggered_ansatz(4, 2).unwrap();
        let parsed = Circuit::from_text(&c.to_text()).unwrap();
        assert_eq!(parsed, c);
    }

    #[test]
    fn state_prep_prefixes_x_gates() {
        let c = build_chain_ansatz(4, 1).unwrap();
        let prepped = c.with_state_prep(0b0101).unwrap();
        let xs: Vec<usize> = prepped
            .gates()
            .iter()
            .take_while(|g| matches!(g, Gate::X { .. }))
            .map(|g| match g {
                Gate::X { qubit } => *qubit,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(xs, vec![0, 2]);
        assert_eq!(prepped.n_params(), c.n_params());
    }

    #[test]
    fn sampled_expectation_is_reproducible_and_consistent() {
        let mut c = Circuit::new(2);
        c.push(Gate::Ry { qubit: 0, param: 0 }).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let state = simulate_statevector(&c, &[0.7], 0u64).unwrap();
        let mut sum = PauliSum::zero(2);
        sum.add_term(PauliString::from_text("ZZ").unwrap(), Complex64::new(1.0, 0.0)).unwrap();
        let h = QubitOperator::from_pauli(sum);
        let a = sampled_expectation(&state, &h, 4096, 17).unwrap();
        let b = sampled_expectation(&state, &h, 4096, 17).unwrap();
        assert_eq!(a, b);
        let exact = expectation(&state, &h).unwrap();
        assert!((a - exact).abs() < 0.1);
    }

    fn random_circuit(n_qubits: usize, seed: u64) -> (Circuit, Vec<f64>) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut c = Circuit::new(n_qubits);
        let mut params = Vec::new();
        for _ in 0..20 {
            if rng.gen_bool(0.6) {
                let q = rng.gen_range(0..n_qubits);
                c.push(Gate::Ry { qubit: q, param: params.len() }).unwrap();
                params.push(rng.gen_range(-3.0..3.0));
            } else {
                let a = rng.gen_range(0..n_qubits);
                let b = (a + rng.gen_range(1..n_qubits)) % n_qubits;
                c.push(Gate::Cnot { control: a, target: b }).unwrap();
            }
        }
        (c, params)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn simulation_preserves_norm(seed in 0u64..5000) {
            let (c, params) = random_circuit(3, seed);
            let out = simulate_statevector(&c, &params, 0u64).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn ry_cnot_circuits_keep_amplitudes_real(seed in 0u64..5000) {
            let (c, params) = random_circuit(4, seed);
            let out = simulate_statevector(&c, &params, 5u64).unwrap();
            for a in out.amplitudes() {
                prop_assert!(a.im.abs() < 1e-12);
            }
        }

        #[test]
        fn simulation_matches_dense_unitary_chain(seed in 0u64..2000) {
            use nalgebra::DMatrix;
            let (c, params) = random_circuit(3, seed);
            let dim = 8;
            // dense unitary product oracle
            let mut u = DMatrix::<Complex64>::identity(dim, dim);
            for gate in c.gates() {
                let mut g = DMatrix::<Complex64>::zeros(dim, dim);
                for col in 0..dim {
                    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                    amps[col] = Complex64::new(1.0, 0.0);
                    match *gate {
                        Gate::Ry { qubit, param } => apply_ry(&mut amps, qubit, params[param]),
                        Gate::Cnot { control, target } => apply_cnot(&mut amps, control, target),
                        Gate::X { qubit } => apply_x(&mut amps, qubit),
                    }
                    for row in 0..dim {
                        g[(row, col)] = amps[row];
                    }
                }
                u = g * u;
            }
            let init = 3usize;
            let out = simulate_statevector(&c, &params, init as u64).unwrap();
            for row in 0..dim {
                let expect = u[(row, init)];
                prop_assert!((out.amplitudes()[row] - expect).norm() < 1e-12);
            }
        }
    }
}
