//! Seeded synthetic integral tables for tests, benchmarks, and demos.
//!
//! Real active-space integrals are produced by external chemistry codes;
//! these generators stand in for them with random tensors that carry all
//! the required symmetries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::configspace::ConfigurationSet;
use crate::encode::qee_hamiltonian;
use crate::error::Result;
use crate::fermion::IntegralTable;
use crate::oracle::exact_ground;

/// Parameters for [`random_integral_table`].
///
/// The defaults mimic an active space expressed in natural orbitals:
/// sorted diagonal orbital energies dominate, with smaller off-diagonal
/// one-electron couplings and two-electron integrals.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub n_spatial: usize,
    pub n_electrons: usize,
    /// Magnitude of the (sorted) diagonal orbital energies.
    pub one_body_scale: f64,
    /// Magnitude of the off-diagonal one-electron couplings.
    pub off_diagonal_scale: f64,
    /// Magnitude of the two-electron integrals.
    pub two_body_scale: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n_spatial: usize, n_electrons: usize, seed: u64) -> Self {
        Self {
            n_spatial,
            n_electrons,
            one_body_scale: 1.0,
            off_diagonal_scale: 0.2,
            two_body_scale: 0.2,
            seed,
        }
    }

    pub fn with_scales(mut self, one_body: f64, two_body: f64) -> Self {
        self.one_body_scale = one_body;
        self.two_body_scale = two_body;
        self
    }

    pub fn with_off_diagonal(mut self, off_diagonal: f64) -> Self {
        self.off_diagonal_scale = off_diagonal;
        self
    }
}

/// Random integral table with symmetric one-electron and 8-fold-symmetric
/// two-electron spatial tensors, expanded to spin-orbitals.
///
/// The sorted diagonal splits into an occupied band (energies in
/// `[-1, -0.3] · one_body_scale`) and a virtual band (`[0.3, 1]`), like a
/// natural-orbital active space around the HOMO-LUMO gap; aufbau filling
/// of the low orbitals matches the energy order.
pub fn random_integral_table(spec: &SyntheticSpec) -> Result<IntegralTable> {
    let m = spec.n_spatial;
    let n_occ = (spec.n_electrons / 2).min(m);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut diag: Vec<f64> = (0..m)
        .map(|i| {
            let band = if i < n_occ { -1.0 } else { 1.0 };
            band * rng.gen_range(0.3..1.0) * spec.one_body_scale
        })
        .collect();
    diag.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut h = vec![0.0; m * m];
    for i in 0..m {
        h[i * m + i] = diag[i];
        for j in 0..i {
            let v = rng.gen_range(-1.0..1.0) * spec.off_diagonal_scale;
            h[i * m + j] = v;
            h[j * m + i] = v;
        }
    }
    let mut v4 = vec![0.0; m * m * m * m];
    for i in 0..m {
        for j in 0..=i {
            for k in 0..=i {
                let l_max = if k == i { j } else { k };
                for l in 0..=l_max {
                    let v = rng.gen_range(-1.0..1.0) * spec.two_body_scale;
                    for (w, x, y, z) in [
                        (i, j, k, l),
                        (j, i, k, l),
                        (i, j, l, k),
                        (j, i, l, k),
                        (k, l, i, j),
                        (l, k, i, j),
                        (k, l, j, i),
                        (l, k, j, i),
                    ] {
                        v4[((w * m + x) * m + y) * m + z] = v;
                    }
                }
            }
        }
    }
    IntegralTable::from_spatial(m, spec.n_electrons, 0, &h, &v4, rng.gen_range(-1.0..1.0))
}

/// Rescale a table so the exact spectrum of its sector Hamiltonian spans
/// `target_width` Hartree. The core energy scales along with the tensors.
pub fn scaled_to_sector_width(
    t: &IntegralTable,
    set: &ConfigurationSet,
    target_width: f64,
) -> Result<IntegralTable> {
    let h = qee_hamiltonian(t, set)?;
    let spectrum = exact_ground(&h, true, Some(set))?;
    let width = spectrum.eigenvalues.last().unwrap() - spectrum.eigenvalues[0];
    let factor = if width > 0.0 { target_width / width } else { 1.0 };
    let n = t.n_spin_orbitals();
    let h1: Vec<f64> = (0..n * n)
        .map(|i| t.h1(i / n, i % n) * factor)
        .collect();
    let mut h2 = vec![0.0; n * n * n * n];
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    h2[((p * n + q) * n + r) * n + s] = t.h2(p, q, r, s) * factor;
                }
            }
        }
    }
    IntegralTable::new(n, t.n_electrons(), t.ms2(), h1, h2, t.core_energy() * factor)
}
