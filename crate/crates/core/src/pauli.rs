//! Exact symbolic algebra for Pauli strings and weighted Pauli sums.
//!
//! A Pauli string on `n` qubits is stored as a pair of bitmasks `(x, z)`:
//! qubit `q` carries X when only `x` has bit `q`, Z when only `z` does,
//! Y when both do, and I when neither does. Qubit 0 is the least
//! significant tensor factor in every matrix realization, matching the
//! little-endian bitstring indexing used for electronic configurations.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default simplification tolerance for coefficient magnitudes.
pub const SIMPLIFY_TOL: f64 = 1e-12;

/// Largest qubit count for which dense matrices are materialized.
pub const DEFAULT_MATRIX_CAP: usize = 14;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    /// The identity string on `n_qubits` qubits (all letters I).
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_masks(n_qubits, 0, 0)
    }

    /// Build from explicit X/Z bitmasks. Bit `q` of `x`/`z` refers to qubit `q`.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if n_qubits > 64 {
            return Err(Error::Resource(format!(
                "Pauli strings support at most 64 qubits, got {n_qubits}"
            )));
        }
        let valid = if n_qubits == 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        if x & !valid != 0 || z & !valid != 0 {
            return Err(Error::Dimension(format!(
                "mask bits outside the {n_qubits}-qubit register"
            )));
        }
        Ok(Self { n_qubits, x, z })
    }

    /// Build from per-qubit letters, `letters[q]` acting on qubit `q`.
    pub fn from_letters(letters: &[PauliLetter]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, &l) in letters.iter().enumerate() {
            match l {
                PauliLetter::I => {}
                PauliLetter::X => x |= 1 << q,
                PauliLetter::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                PauliLetter::Z => z |= 1 << q,
            }
        }
        Self::from_masks(letters.len(), x, z)
    }

    /// Parse a letter string written qubit `n-1` leftmost, e.g. `"IXZI"`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars().rev() {
            letters.push(match c {
                'I' => PauliLetter::I,
                'X' => PauliLetter::X,
                'Y' => PauliLetter::Y,
                'Z' => PauliLetter::Z,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unknown Pauli letter '{other}'"),
                    })
                }
            });
        }
        Self::from_letters(&letters)
    }

    /// Place a single non-identity letter on `qubit` of an `n_qubits` register.
    pub fn single(n_qubits: usize, qubit: usize, letter: PauliLetter) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::Dimension(format!(
                "qubit {qubit} outside a {n_qubits}-qubit register"
            )));
        }
        let mut letters = vec![PauliLetter::I; n_qubits];
        letters[qubit] = letter;
        Self::from_letters(&letters)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        PauliLetter::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Apply to the computational basis state `|j>`.
    ///
    /// Returns `(j', amp)` with `P |j> = amp |j'>`, where `j' = j XOR x` and
    /// `amp = i^{|Y|} (-1)^{popcount(z AND j)}`.
    pub fn apply_to_basis(&self, j: u64) -> (u64, Complex64) {
        let target = j ^ self.x;
        let i_pow = (self.x & self.z).count_ones() % 4;
        let sign = if (self.z & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        (target, i_to_power(i_pow) * sign)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.n_qubits).rev() {
            write!(f, "{}", self.letter(q).to_char())?;
        }
        Ok(())
    }
}

fn i_to_power(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Multiply two Pauli strings.
///
/// Returns the phase (one of ±1, ±i) and the product string such that
/// `matrix(a) · matrix(b) == phase · matrix(product)` exactly.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<(Complex64, PauliString)> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Dimension(format!(
            "cannot multiply Pauli strings on {} and {} qubits",
            a.n_qubits, b.n_qubits
        )));
    }
    let x = a.x ^ b.x;
    let z = a.z ^ b.z;
    // Per qubit, with P(x,z) = i^{xz} X^x Z^z and X^b Z^a reordering:
    // exponent of i accumulates |Y_a| + |Y_b| - |Y_ab| + 2*(z_a AND x_b).
    let exponent = (a.x & a.z).count_ones() + (b.x & b.z).count_ones()
        + 2 * (a.z & b.x).count_ones()
        + 3 * ((x & z).count_ones() % 4); // -1 == +3 (mod 4)
    let product = PauliString { n_qubits: a.n_qubits, x, z };
    Ok((i_to_power(exponent % 4), product))
}

/// A weighted sum of Pauli strings on a fixed qubit count.
///
/// Terms are kept in a sorted map so iteration order (and therefore every
/// accumulation and serialization order) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    /// The empty sum (zero operator) on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Self {
        Self { n_qubits, terms: BTreeMap::new() }
    }

    /// `c` times the identity.
    pub fn scalar(n_qubits: usize, c: Complex64) -> Result<Self> {
        let mut s = Self::zero(n_qubits);
        s.add_term(PauliString::identity(n_qubits)?, c)?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Add `c · s` to the sum, combining with an existing like term.
    pub fn add_term(&mut self, s: PauliString, c: Complex64) -> Result<()> {
        if s.n_qubits != self.n_qubits {
            return Err(Error::Dimension(format!(
                "term on {} qubits added to a {}-qubit sum",
                s.n_qubits, self.n_qubits
            )));
        }
        *self.terms.entry(s).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    /// Add another sum into this one.
    pub fn add_sum(&mut self, other: &PauliSum) -> Result<()> {
        for (s, c) in other.terms() {
            self.add_term(*s, *c)?;
        }
        Ok(())
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&mut self, c: Complex64) {
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    /// Operator product of two sums.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot multiply sums on {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        let mut out = PauliSum::zero(self.n_qubits);
        for (sa, ca) in self.terms() {
            for (sb, cb) in other.terms() {
                let (phase, prod) = pauli_mul(sa, sb)?;
                out.add_term(prod, ca * cb * phase)?;
            }
        }
        Ok(out)
    }

    /// Combine like terms and drop coefficients with magnitude `<= tol`.
    pub fn simplify(&self, tol: f64) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(s, c)| (*s, *c))
            .collect();
        PauliSum { n_qubits: self.n_qubits, terms }
    }

    /// True iff the operator is Hermitian, i.e. every coefficient has
    /// imaginary part of magnitude `<= tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Dense matrix realization of dimension `2^n_qubits`, subject to
    /// [`DEFAULT_MATRIX_CAP`].
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.to_matrix_capped(DEFAULT_MATRIX_CAP)
    }

    /// Dense matrix realization with an explicit qubit-count cap.
    pub fn to_matrix_capped(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > cap {
            return Err(Error::Resource(format!(
                "refusing to materialize a {}-qubit operator (cap {cap})",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (s, c) in self.terms() {
            for j in 0..dim {
                let (tgt, amp) = s.apply_to_basis(j as u64);
                m[(tgt as usize, j)] += c * amp;
            }
        }
        Ok(m)
    }

    /// Serialize as one term per line: `<re> <im> <letters, qubit n-1 first>`.
    /// Terms appear in the sorted order of the underlying map.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, c) in self.terms() {
            out.push_str(&format!("{:e} {:e} {}\n", c.re, c.im, s));
        }
        out
    }

    /// Parse the textual format written by [`PauliSum::to_text`].
    pub fn from_text(text: &str, n_qubits: usize) -> Result<Self> {
        let mut sum = PauliSum::zero(n_qubits);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse_err = |msg: &str| Error::Parse { line: idx + 1, msg: msg.to_string() };
            let re: f64 = parts
                .next()
                .ok_or_else(|| parse_err("missing real part"))?
                .parse()
                .map_err(|_| parse_err("bad real part"))?;
            let im: f64 = parts
                .next()
                .ok_or_else(|| parse_err("missing imaginary part"))?
                .parse()
                .map_err(|_| parse_err("bad imaginary part"))?;
            let letters = parts.next().unwrap_or("");
            if letters.len() != n_qubits {
                return Err(parse_err(&format!(
                    "expected {n_qubits} letters, got {}",
                    letters.len()
                )));
            }
            sum.add_term(PauliString::from_text(letters)?, Complex64::new(re, im))?;
        }
        Ok(sum)
    }
}
