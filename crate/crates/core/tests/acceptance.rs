//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`). Wall-clock caps are asserted in
//! release builds only; correctness is asserted always.
//!
//! Run with: `cargo test --release -p qeevqe-core --test acceptance -- --nocapture`

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;

use qeevqe_core::circuit::{
    build_chain_ansatz, build_staggered_ansatz, expectation, simulate_statevector,
};
use qeevqe_core::configspace::{enumerate_sector, excitation_apply, Configuration};
use qeevqe_core::encode::{
    jw_creation, jw_encode, qee_hamiltonian, qubit_counts, QubitOperator, SparseOp,
};
use qeevqe_core::fermion::{rank_candidate_sets, CandidateSet, IntegralTable};
use qeevqe_core::noise::{simulate_density, noisy_expectation, thermal_kraus, NoiseModel};
use qeevqe_core::oracle::{exact_ground, jw_sector_matrix, relative_energies};
use qeevqe_core::pauli::PauliSum;
use qeevqe_core::synthetic::{random_integral_table, scaled_to_sector_width, SyntheticSpec};
use qeevqe_core::units::{CHEMICAL_ACCURACY_HARTREE, HARTREE_TO_KCAL_PER_MOL};
use qeevqe_core::vqe::{
    hf_reference_state, layer_sweep, parameter_shift_gradient, run_vqe, AnsatzFamily,
    InitStrategy, OptimConfig,
};

struct Criterion {
    number: usize,
    name: &'static str,
    limit_secs: Option<f64>,
    start: Instant,
}

impl Criterion {
    fn start(number: usize, name: &'static str, limit_secs: Option<f64>) -> Self {
        Self { number, name, limit_secs, start: Instant::now() }
    }

    fn finish(self, pass: bool) {
        let elapsed = self.start.elapsed().as_secs_f64();
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "ACCEPTANCE {:02} {verdict} ({elapsed:.2}s) {}",
            self.number, self.name
        );
        assert!(pass, "criterion {:02} ({}) failed", self.number, self.name);
        if let Some(limit) = self.limit_secs {
            if cfg!(debug_assertions) {
                if elapsed > limit {
                    println!(
                        "ACCEPTANCE {:02} NOTE runtime {elapsed:.2}s over the {limit}s cap \
                         (enforced in release builds only)",
                        self.number
                    );
                }
            } else {
                assert!(
                    elapsed <= limit,
                    "criterion {:02} took {elapsed:.2}s, cap {limit}s",
                    self.number
                );
            }
        }
    }
}

#[test]
fn criterion_01_qubit_count_reproduction() {
    let c = Criterion::start(1, "qubit counts for a (4e, 6o) sector: JW 12, QEE 8", Some(1.0));
    let (jw, qee) = qubit_counts(12, 2, 2).unwrap();
    c.finish(jw == 12 && qee == 8);
}

#[test]
fn criterion_02_encoding_equivalence() {
    let c = Criterion::start(
        2,
        "QEE block spectrum equals JW sector spectrum, 200 random tables",
        Some(60.0),
    );
    let mut pass = true;
    for i in 0..200u64 {
        let n_spatial = [2usize, 3, 4][(i % 3) as usize];
        let n_so = 2 * n_spatial;
        // every S_z = 0 sector of this table size
        for n_pair in 0..=n_spatial {
            let t = random_integral_table(
                &SyntheticSpec::new(n_spatial, 2 * n_pair, 90_000 + i).with_scales(1.0, 0.4),
            )
            .unwrap();
            let set = enumerate_sector(n_so, n_pair, n_pair).unwrap();
            let qee = qee_hamiltonian(&t, &set).unwrap();
            let qee_eigs = exact_ground(&qee, true, Some(&set)).unwrap().eigenvalues;
            let jw = jw_encode(&t).unwrap().pauli_sum().unwrap();
            let sector = jw_sector_matrix(&jw, &set).unwrap();
            let (jw_eigs, _) = qeevqe_core::oracle::hermitian_eigen(&sector, 1e-10).unwrap();
            if qee_eigs.len() != jw_eigs.len()
                || qee_eigs
                    .iter()
                    .zip(&jw_eigs)
                    .any(|(a, b)| (a - b).abs() > 1e-10)
            {
                eprintln!("mismatch at table {i}, sector ({n_so}, {n_pair})");
                pass = false;
            }
        }
    }
    c.finish(pass);
}

#[test]
fn criterion_03_sign_rule_oracle() {
    let c = Criterion::start(
        3,
        "excitation signs match JW matrix elements exhaustively (N <= 6)",
        Some(30.0),
    );
    let mut pass = true;
    for n in 1..=6usize {
        // cache a_p^dag a_q matrices
        for p in 0..n {
            for q in 0..n {
                let op = jw_creation(n, p)
                    .unwrap()
                    .mul(&qeevqe_core::encode::jw_annihilation(n, q).unwrap())
                    .unwrap();
                let m = op.to_matrix().unwrap();
                for bits in 0..(1u64 << n) {
                    let config = Configuration::new(bits, n).unwrap();
                    match excitation_apply(&config, p, q).unwrap() {
                        Some((sign, out)) => {
                            let elem = m[(out.bits() as usize, bits as usize)];
                            if (elem.re - sign).abs() > 1e-12 || elem.im.abs() > 1e-12 {
                                pass = false;
                            }
                        }
                        None => {
                            let col_norm: f64 = (0..(1usize << n))
                                .map(|r| m[(r, bits as usize)].norm_sqr())
                                .sum();
                            if col_norm > 1e-24 {
                                pass = false;
                            }
                        }
                    }
                }
            }
        }
    }
    c.finish(pass);
}

#[test]
fn criterion_04_ansatz_bookkeeping() {
    let c = Criterion::start(4, "ansatz CNOT and parameter totals", Some(1.0));
    let staggered = build_staggered_ansatz(8, 20).unwrap();
    let chain10 = build_chain_ansatz(8, 10).unwrap();
    let chain4 = build_chain_ansatz(8, 4).unwrap();
    c.finish(
        staggered.cnot_count() == 80
            && staggered.n_params() == 168
            && chain10.cnot_count() == 70
            && chain10.n_params() == 80
            && chain4.cnot_count() == 28
            && chain4.n_params() == 32,
    );
}

/// Five synthetic (12, 2, 2) instances scaled to unit sector width; the
/// criterion-05/08/09 tests share this generator.
fn synthetic_instance(seed: u64) -> (IntegralTable, qeevqe_core::configspace::ConfigurationSet) {
    let set = enumerate_sector(12, 2, 2).unwrap();
    let raw = random_integral_table(&SyntheticSpec::new(6, 4, seed).with_scales(1.0, 0.15))
        .unwrap();
    let scaled = scaled_to_sector_width(&raw, &set, 1.0).unwrap();
    (scaled, set)
}

#[test]
fn criterion_05_noiseless_vqe_convergence() {
    let c = Criterion::start(
        5,
        "staggered L=20 VQE reaches chemical accuracy on >= 4 of 5 synthetic instances",
        Some(1200.0),
    );
    let mut hits = 0;
    for i in 0..5u64 {
        let (table, set) = synthetic_instance(1000 + i);
        let h = qee_hamiltonian(&table, &set).unwrap();
        let exact = exact_ground(&h, true, Some(&set)).unwrap().ground_energy();
        let prep = hf_reference_state(&set).unwrap();
        let results = layer_sweep(
            &h,
            AnsatzFamily::Staggered,
            &[20],
            prep,
            &InitStrategy::gaussian(500 + i),
            5,
            &OptimConfig::default(),
        )
        .unwrap();
        let err = results[0].energy_hartree - exact;
        println!("  instance {i}: error {err:.3e} Ha ({:.3} kcal/mol)", err * HARTREE_TO_KCAL_PER_MOL);
        assert!(err >= -1e-9, "variational bound violated: {err}");
        if err.abs() <= CHEMICAL_ACCURACY_HARTREE {
            hits += 1;
        }
    }
    println!("  {hits}/5 instances within chemical accuracy");
    c.finish(hits >= 4);
}

#[test]
fn criterion_06_hf_init_stagnation() {
    let c = Criterion::start(
        6,
        "HF init stays at a stationary start while Gaussian init escapes",
        Some(300.0),
    );
    // Diagonal Hamiltonian (h2 = 0, h1 diagonal) with orbital energies
    // rising toward low indices: the aufbau reference is a stationary
    // point of every Ry rotation but far from the ground configuration.
    let n = 12usize;
    let eps = [0.5, 0.4, 0.3, -0.1, -0.45, -0.5];
    let mut h1 = vec![0.0; n * n];
    for (i, e) in eps.iter().enumerate() {
        h1[(2 * i) * n + 2 * i] = *e;
        h1[(2 * i + 1) * n + 2 * i + 1] = *e;
    }
    let table = IntegralTable::new(n, 4, 0, h1, vec![0.0; n * n * n * n], 0.0).unwrap();
    let set = enumerate_sector(n, 2, 2).unwrap();
    let h = qee_hamiltonian(&table, &set).unwrap();
    let exact = exact_ground(&h, true, Some(&set)).unwrap().ground_energy();
    let prep = hf_reference_state(&set).unwrap();
    let circuit = build_chain_ansatz(set.qubit_count(), 4).unwrap();
    let cfg = OptimConfig::default();

    let hf = run_vqe(&h, &circuit, prep, &InitStrategy::HartreeFock, &cfg).unwrap();
    let e_initial = hf.history[0].1;
    let hf_flat = (hf.energy_hartree - e_initial).abs() < 1e-6;

    let gauss = layer_sweep(
        &h,
        AnsatzFamily::Chain,
        &[4],
        prep,
        &InitStrategy::gaussian(42),
        5,
        &cfg,
    )
    .unwrap();
    let escaped = gauss[0].energy_hartree < e_initial - 0.1;
    println!(
        "  HF start {e_initial:.6}, HF final {:.6}, Gaussian final {:.6}, exact {exact:.6}",
        hf.energy_hartree, gauss[0].energy_hartree
    );
    c.finish(hf_flat && escaped);
}

#[test]
fn criterion_07_noise_model_validity() {
    let c = Criterion::start(
        7,
        "thermal channels are complete, purity-monotone, identity at t=0",
        Some(10.0),
    );
    let mut pass = true;
    for model in [NoiseModel::calibration_primary(), NoiseModel::calibration_secondary()] {
        for q in 0..8 {
            for t_ns in [0.0, 50.0, 100.0, 200.0, 1000.0] {
                let k = thermal_kraus(model.t1_ms[q], model.t2_ms[q], t_ns).unwrap();
                let completeness = k.completeness();
                if (completeness - nalgebra::Matrix2::<Complex64>::identity()).norm() > 1e-12 {
                    pass = false;
                }
                if t_ns == 0.0 && !k.is_identity() {
                    pass = false;
                }
            }
        }
    }
    // purity monotonicity along a repeated-application trajectory
    let model = NoiseModel::default();
    let circuit = build_chain_ansatz(2, 1).unwrap();
    let params = vec![0.9, -0.4];
    let strong = NoiseModel {
        t1_ms: vec![Some(0.005), Some(0.004)],
        t2_ms: vec![Some(0.004), Some(0.003)],
        durations_ns: model.durations_ns,
        idle_noise: true,
    };
    let psi = simulate_statevector(&circuit, &params, 0u64).unwrap();
    let mut purity = 1.0;
    for reps in 1..=3 {
        let mut big = qeevqe_core::circuit::Circuit::new(2);
        for _ in 0..reps {
            for g in circuit.gates() {
                big.push(*g).unwrap();
            }
        }
        let p: Vec<f64> = params.iter().cycle().take(big.n_params()).copied().collect();
        let rho = simulate_density(&big, &p, &strong, 0).unwrap();
        if rho.purity() > purity + 1e-12 {
            pass = false;
        }
        purity = rho.purity();
    }
    let _ = psi;
    c.finish(pass);
}

#[test]
fn criterion_08_noisy_evaluation_pipeline() {
    let c = Criterion::start(
        8,
        "noisy evaluation at the noiseless optimum: raw+renormalized, bounded error",
        Some(600.0),
    );
    let (table, set) = synthetic_instance(2024);
    let h = qee_hamiltonian(&table, &set).unwrap();
    let exact = exact_ground(&h, true, Some(&set)).unwrap().ground_energy();
    let prep = hf_reference_state(&set).unwrap();
    let results = layer_sweep(
        &h,
        AnsatzFamily::Chain,
        &[4],
        prep,
        &InitStrategy::gaussian(77),
        5,
        &OptimConfig::default(),
    )
    .unwrap();
    let best = &results[0];
    let noiseless_err = (best.energy_hartree - exact).abs();

    let circuit = build_chain_ansatz(set.qubit_count(), 4)
        .unwrap()
        .with_state_prep(prep)
        .unwrap();
    let rho = simulate_density(&circuit, &best.params, &NoiseModel::default(), 0).unwrap();
    let (raw, renorm) = noisy_expectation(&rho, &h).unwrap();
    let noisy_err = (raw - exact).abs();
    let noisy_err_kcal = noisy_err * HARTREE_TO_KCAL_PER_MOL;
    println!(
        "  noiseless error {noiseless_err:.3e} Ha, noisy raw error {noisy_err:.3e} Ha \
         ({noisy_err_kcal:.3} kcal/mol), renormalized {renorm:.6}"
    );
    c.finish(raw.is_finite() && renorm.is_finite() && noisy_err > noiseless_err && noisy_err_kcal < 10.0);
}

#[test]
fn criterion_09_variational_bound() {
    let c = Criterion::start(9, "every VQE energy respects the variational bound", None);
    let mut pass = true;
    for i in 0..3u64 {
        let (table, set) = synthetic_instance(3000 + i);
        let h = qee_hamiltonian(&table, &set).unwrap();
        let exact = exact_ground(&h, true, Some(&set)).unwrap().ground_energy();
        let prep = hf_reference_state(&set).unwrap();
        for layers in [2usize, 6] {
            let results = layer_sweep(
                &h,
                AnsatzFamily::Chain,
                &[layers],
                prep,
                &InitStrategy::gaussian(7000 + i),
                2,
                &OptimConfig::default(),
            )
            .unwrap();
            for r in &results {
                if r.energy_hartree < exact - 1e-9 {
                    pass = false;
                }
                // the bound holds pointwise along the optimization history
                if r.history.iter().any(|&(_, e)| e < exact - 1e-9) {
                    pass = false;
                }
            }
        }
    }
    c.finish(pass);
}

#[test]
fn criterion_10_gradient_check() {
    let c = Criterion::start(
        10,
        "parameter-shift gradients match finite differences on 20 random instances",
        Some(60.0),
    );
    use rand::{Rng, SeedableRng};
    let mut pass = true;
    for i in 0..20u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4000 + i);
        let n_qubits = rng.gen_range(2..=6usize);
        let mut sum = PauliSum::zero(n_qubits);
        for _ in 0..8 {
            let mask = (1u64 << n_qubits) - 1;
            let p = qeevqe_core::pauli::PauliString::from_masks(
                n_qubits,
                rng.gen::<u64>() & mask,
                rng.gen::<u64>() & mask,
            )
            .unwrap();
            sum.add_term(p, Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).unwrap();
        }
        let h = QubitOperator::from_pauli(sum.simplify(1e-12));
        let layers = rng.gen_range(1..=3usize);
        let circuit = build_chain_ansatz(n_qubits, layers).unwrap();
        let params: Vec<f64> =
            (0..circuit.n_params()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let shift = parameter_shift_gradient(&h, &circuit, 0, &params).unwrap();
        let fd_step = 1e-5;
        for k in 0..params.len() {
            let mut probe = params.clone();
            probe[k] += fd_step;
            let plus =
                expectation(&simulate_statevector(&circuit, &probe, 0u64).unwrap(), &h).unwrap();
            probe[k] = params[k] - fd_step;
            let minus =
                expectation(&simulate_statevector(&circuit, &probe, 0u64).unwrap(), &h).unwrap();
            if (shift[k] - (plus - minus) / (2.0 * fd_step)).abs() > 1e-6 {
                pass = false;
            }
        }
    }
    c.finish(pass);
}

#[test]
fn criterion_11_active_set_ranking_reproduction() {
    let c = Criterion::start(
        11,
        "published candidate energies rank 14-19 (acetone) and 44-49 (Edaravone) first",
        Some(1.0),
    );
    let kcal = |pairs: &[(&str, f64)]| -> BTreeMap<String, f64> {
        pairs.iter().map(|&(l, v)| (l.to_string(), v)).collect()
    };

    // Acetone: (4e,6o)-and-larger candidate windows with their enol
    // energies relative to keto; reference is the full system.
    let acetone_reference = kcal(&[("keto", 0.0), ("enol", 24.070)]);
    let acetone_rows: Vec<(&str, usize, f64)> = vec![
        ("10-19", 10, 18.716),
        ("11-20", 10, 22.478),
        ("11-19", 9, 21.260),
        ("12-20", 9, 21.374),
        ("12-19", 8, 19.888),
        ("13-19", 7, 20.325),
        ("13-18", 6, 20.565),
        ("14-19", 6, 23.766),
    ];
    let acetone: Vec<CandidateSet> = acetone_rows
        .iter()
        .map(|&(label, n_mos, enol)| CandidateSet {
            label: label.to_string(),
            n_active_mos: n_mos,
            relative_kcal: kcal(&[("keto", 0.0), ("enol", enol)]),
        })
        .collect();
    let ranked = rank_candidate_sets(acetone, &acetone_reference).unwrap();
    let acetone_ok = ranked[0].candidate.label == "14-19"
        && (ranked[0].deviation_kcal - 0.304).abs() < 1e-9;

    let edaravone_reference = kcal(&[("keto", 0.0), ("enol", 13.726), ("amine", 25.947)]);
    let edaravone_rows: Vec<(&str, usize, f64, f64)> = vec![
        ("41-50", 10, -12.793, 4.904),
        ("41-49", 9, -12.959, 6.556),
        ("42-50", 9, -12.650, 23.293),
        ("42-49", 8, -12.874, 22.420),
        ("43-49", 7, 8.583, 23.892),
        ("43-48", 6, 5.667, 18.618),
        ("44-49", 6, 9.197, 25.398),
    ];
    let edaravone: Vec<CandidateSet> = edaravone_rows
        .iter()
        .map(|&(label, n_mos, enol, amine)| CandidateSet {
            label: label.to_string(),
            n_active_mos: n_mos,
            relative_kcal: kcal(&[("keto", 0.0), ("enol", enol), ("amine", amine)]),
        })
        .collect();
    let ranked = rank_candidate_sets(edaravone, &edaravone_reference).unwrap();
    let edaravone_ok = ranked[0].candidate.label == "44-49"
        && (ranked[0].deviation_kcal - 4.529).abs() < 1e-9;

    c.finish(acetone_ok && edaravone_ok);
}

#[test]
fn criterion_12_published_gaps_are_inputs_not_outputs() {
    let c = Criterion::start(
        12,
        "published energy gaps enter only as user-supplied format checks",
        None,
    );
    // The absolute active-space integrals behind the published 24.070 /
    // 13.726 / 25.947 kcal/mol gaps are not available, so those numbers
    // are never computed here. Format check: relative-energy reporting
    // reproduces a user-supplied gap exactly.
    let gap_kcal = 24.070;
    let e_keto = -191.65; // arbitrary anchor energy, Hartree
    let e_enol = e_keto + gap_kcal / HARTREE_TO_KCAL_PER_MOL;
    let mut energies = BTreeMap::new();
    energies.insert("keto".to_string(), e_keto);
    energies.insert("enol".to_string(), e_enol);
    let rel = relative_energies(&energies, "keto").unwrap();
    let ok = (rel["enol"] - gap_kcal).abs() < 1e-9 && rel["keto"] == 0.0;
    println!(
        "  note: absolute tautomer energies require unpublished molecular integrals; \
         reference gaps are report inputs only"
    );
    c.finish(ok);
}

// keep SparseOp referenced for the Pauli/sparse duality used above
#[allow(dead_code)]
fn _sparse_marker(op: SparseOp) -> usize {
    op.n_entries()
}
