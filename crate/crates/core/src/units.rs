//! Unit conversions used throughout the crate.

/// Conversion factor from Hartree to kcal/mol (CODATA-derived).
pub const HARTREE_TO_KCAL_PER_MOL: f64 = 627.509474;

/// Chemical accuracy, 1 kcal/mol expressed in Hartree (rounded up).
pub const CHEMICAL_ACCURACY_HARTREE: f64 = 1.6e-3;

/// Convert an energy in Hartree to kcal/mol.
pub fn hartree_to_kcal(e: f64) -> f64 {
    e * HARTREE_TO_KCAL_PER_MOL
}
