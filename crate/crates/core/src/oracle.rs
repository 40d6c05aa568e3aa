//! Exact ground-state references: dense Hermitian diagonalization and
//! Jordan-Wigner sector projection.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::configspace::ConfigurationSet;
use crate::encode::QubitOperator;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::units::HARTREE_TO_KCAL_PER_MOL;

/// Eigenvalues (ascending) and normalized ground vector of a Hermitian
/// operator, possibly restricted to the encoded subspace.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub ground_vector: Vec<Complex64>,
    pub subspace_flag: bool,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Inputs with Hermiticity violations above `tol` are rejected rather than
/// silently symmetrized.
pub fn hermitian_eigen(
    m: &DMatrix<Complex64>,
    tol: f64,
) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let dim = m.nrows();
    if dim == 0 || m.ncols() != dim {
        return Err(Error::Dimension("eigendecomposition needs a square matrix".into()));
    }
    for i in 0..dim {
        for j in 0..=i {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                return Err(Error::Numerical(format!(
                    "matrix is not Hermitian at ({i}, {j})"
                )));
            }
        }
    }
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((eigenvalues, vectors))
}

/// Exact spectrum of an encoded operator.
///
/// With `restrict_to_encoded`, only the leading `|F|`-dimensional block is
/// diagonalized (`set` supplies `|F|`); otherwise the full `2^Q` matrix.
pub fn exact_ground(
    h: &QubitOperator,
    restrict_to_encoded: bool,
    set: Option<&ConfigurationSet>,
) -> Result<SpectrumResult> {
    let full = h.to_matrix()?;
    let m = if restrict_to_encoded {
        let set = set.ok_or(Error::Validation(
            "restricting to the encoded block requires the configuration set".into(),
        ))?;
        let d = set.len();
        if d > full.nrows() {
            return Err(Error::Dimension(format!(
                "encoded block of {d} exceeds operator dimension {}",
                full.nrows()
            )));
        }
        full.view((0, 0), (d, d)).into_owned()
    } else {
        full
    };
    let (eigenvalues, vectors) = hermitian_eigen(&m, 1e-10)?;
    let ground_vector = vectors.column(0).iter().copied().collect();
    Ok(SpectrumResult { eigenvalues, ground_vector, subspace_flag: restrict_to_encoded })
}

/// Project a Jordan-Wigner Pauli sum onto a configuration sector:
/// `M[k'][k] = <f_k' | H_jw | f_k>` in the canonical member order.
pub fn jw_sector_matrix(h_jw: &PauliSum, set: &ConfigurationSet) -> Result<DMatrix<Complex64>> {
    if h_jw.n_qubits() != set.n_spin_orbitals() {
        return Err(Error::Dimension(format!(
            "operator on {} qubits, sector on {} spin-orbitals",
            h_jw.n_qubits(),
            set.n_spin_orbitals()
        )));
    }
    let members = set.members();
    let dim = members.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (k, member) in members.iter().enumerate() {
        for (string, coeff) in h_jw.terms() {
            let (target, amp) = string.apply_to_basis(member.bits());
            let probe = crate::configspace::Configuration::new(target, set.n_spin_orbitals())?;
            if let Ok(k2) = crate::configspace::encode_index(set, &probe) {
                m[(k2, k)] += coeff * amp;
            }
        }
    }
    Ok(m)
}

/// Energies relative to an anchor label, converted to kcal/mol.
pub fn relative_energies(
    energies: &BTreeMap<String, f64>,
    anchor: &str,
) -> Result<BTreeMap<String, f64>> {
    let e0 = *energies
        .get(anchor)
        .ok_or_else(|| Error::Validation(format!("anchor '{anchor}' missing from energies")))?;
    Ok(energies
        .iter()
        .map(|(label, e)| (label.clone(), (e - e0) * HARTREE_TO_KCAL_PER_MOL))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::enumerate_sector;
    use crate::encode::{jw_encode, SparseOp};
    use crate::fermion::IntegralTable;
    use crate::pauli::{PauliString, PauliSum};
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_operator_spectrum_is_sorted_diagonal() {
        let mut op = SparseOp::zero(2);
        for (k, v) in [3.0, -1.0, 2.0, 0.5].iter().enumerate() {
            op.add_entry(k as u32, k as u32, Complex64::new(*v, 0.0)).unwrap();
        }
        let spec = exact_ground(&QubitOperator::from_sparse(op), false, None).unwrap();
        assert_eq!(spec.eigenvalues.len(), 4);
        let expect = [-1.0, 0.5, 2.0, 3.0];
        for (a, b) in spec.eigenvalues.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(spec.ground_vector[1].norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn random_pauli_sum_matches_dense_reference() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut sum = PauliSum::zero(3);
        for _ in 0..10 {
            let p = PauliString::from_masks(3, rng.gen_range(0..8), rng.gen_range(0..8)).unwrap();
            sum.add_term(p, Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).unwrap();
        }
        let m = sum.to_matrix().unwrap();
        let (vals, vecs) = hermitian_eigen(&m, 1e-10).unwrap();
        // reconstruct: M v = lambda v for each eigenpair
        for k in 0..8 {
            let v = vecs.column(k);
            let mv = &m * v;
            let lv = v * Complex64::new(vals[k], 0.0);
            assert!((mv - lv).norm() < 1e-10);
        }
        // ascending
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn non_hermitian_input_rejected() {
        let mut op = SparseOp::zero(1);
        op.add_entry(0, 1, Complex64::new(1.0, 0.0)).unwrap();
        let h = QubitOperator::from_sparse(op);
        assert!(matches!(exact_ground(&h, false, None), Err(Error::Numerical(_))));
    }

    #[test]
    fn identity_sum_projects_to_identity_sector_matrix() {
        let set = enumerate_sector(4, 1, 1).unwrap();
        let sum = PauliSum::scalar(4, Complex64::new(1.0, 0.0)).unwrap();
        let m = jw_sector_matrix(&sum, &set).unwrap();
        assert_eq!(m.nrows(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(m[(i, j)].re, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn total_number_operator_is_constant_on_the_sector() {
        // sum_p n_p = sum_p (I - Z_p) / 2 acts as (n_alpha + n_beta) I.
        let n = 6;
        let set = enumerate_sector(n, 2, 1).unwrap();
        let mut sum = PauliSum::zero(n);
        for p in 0..n {
            sum.add_term(PauliString::identity(n).unwrap(), Complex64::new(0.5, 0.0)).unwrap();
            sum.add_term(
                PauliString::single(n, p, crate::pauli::PauliLetter::Z).unwrap(),
                Complex64::new(-0.5, 0.0),
            )
            .unwrap();
        }
        let m = jw_sector_matrix(&sum, &set).unwrap();
        for i in 0..set.len() {
            for j in 0..set.len() {
                let expect = if i == j { 3.0 } else { 0.0 };
                assert_abs_diff_eq!(m[(i, j)].re, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn jw_spectrum_of_minimal_two_electron_table() {
        // One spatial orbital, h11 = -1, (11|11) = 0.5, core 0.7: the
        // doubly-occupied state sits at 2(-1) + 0.5 + 0.7 = -0.8.
        let t = IntegralTable::from_spatial(1, 2, 0, &[-1.0], &[0.5], 0.7).unwrap();
        let h = jw_encode(&t).unwrap();
        let m = h.pauli_sum().unwrap().to_matrix().unwrap();
        // |11> is basis index 3.
        assert_abs_diff_eq!(m[(3, 3)].re, -0.8, epsilon = 1e-12);
    }

    #[test]
    fn relative_energies_anchor_maps_to_zero() {
        let mut e = BTreeMap::new();
        e.insert("keto".to_string(), -189.53);
        e.insert("enol".to_string(), -189.49);
        let rel = relative_energies(&e, "keto").unwrap();
        assert_abs_diff_eq!(rel["keto"], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rel["enol"], 0.04 * HARTREE_TO_KCAL_PER_MOL, epsilon = 1e-9);
        assert!((rel["enol"] - 25.10).abs() < 0.01);
    }

    #[test]
    fn missing_anchor_is_a_validation_error() {
        let e = BTreeMap::new();
        assert!(matches!(relative_energies(&e, "keto"), Err(Error::Validation(_))));
    }
}
