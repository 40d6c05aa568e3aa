// Scratch probe for optimizer tuning on one synthetic instance.
use std::time::Instant;

use qeevqe_core::configspace::enumerate_sector;
use qeevqe_core::encode::qee_hamiltonian;
use qeevqe_core::oracle::exact_ground;
use qeevqe_core::synthetic::{random_integral_table, scaled_to_sector_width, SyntheticSpec};
use qeevqe_core::units::HARTREE_TO_KCAL_PER_MOL;
use qeevqe_core::vqe::{hf_reference_state, run_vqe, AnsatzFamily, InitStrategy, OptimConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let layers: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20);
    let restarts: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(5);
    let family = match args.get(4).map(String::as_str) {
        Some("chain") => AnsatzFamily::Chain,
        _ => AnsatzFamily::Staggered,
    };
    let off_diag: f64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(0.15);
    let two_body: f64 = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(0.1);

    let set = enumerate_sector(12, 2, 2).unwrap();
    let raw = random_integral_table(
        &SyntheticSpec::new(6, 4, seed).with_scales(1.0, two_body).with_off_diagonal(off_diag),
    )
    .unwrap();
    let table = scaled_to_sector_width(&raw, &set, 1.0).unwrap();
    let h = qee_hamiltonian(&table, &set).unwrap();
    let spectrum = exact_ground(&h, true, Some(&set)).unwrap();
    let exact = spectrum.ground_energy();
    let gap = spectrum.eigenvalues[1] - exact;
    let prep = hf_reference_state(&set).unwrap();
    println!("seed {seed}: exact {exact:.6}, first gap {gap:.4}, prep {prep}");

    let circuit = family.build(set.qubit_count(), layers).unwrap();
    println!(
        "{} L={layers}: {} params, {} CNOTs",
        family.name(),
        circuit.n_params(),
        circuit.cnot_count()
    );
    let cfg = OptimConfig::default();
    let mut best = f64::INFINITY;
    for r in 0..restarts {
        let t0 = Instant::now();
        let result = run_vqe(&h, &circuit, prep, &InitStrategy::gaussian(500 + seed + r), &cfg)
            .unwrap();
        let err = result.energy_hartree - exact;
        best = best.min(err);
        println!(
            "  restart {r}: err {err:.3e} Ha ({:.3} kcal/mol), {} direct evals, {} total, \
             converged {}, {:.1}s",
            err * HARTREE_TO_KCAL_PER_MOL,
            result.history.len(),
            result.evaluations,
            result.converged,
            t0.elapsed().as_secs_f64()
        );
    }
    println!("best error {best:.3e} Ha ({:.3} kcal/mol)", best * HARTREE_TO_KCAL_PER_MOL);
}
