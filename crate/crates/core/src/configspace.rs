//! Symmetry-sector configuration sets and the map onto qubit basis states.
//!
//! A configuration is an occupation bitstring over spin-orbitals, bit `i`
//! holding the occupation of spin-orbital `i` (even indices alpha, odd
//! beta). A sector fixes the alpha and beta electron counts; its members
//! are listed in ascending integer order, which defines the encoding map:
//! member `k` is encoded as qubit basis state `|k>`.

use std::fmt;

use crate::error::{Error, Result};

/// An occupation-number bitstring over `n_spin_orbitals` spin-orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    bits: u64,
    n_spin_orbitals: usize,
}

impl Configuration {
    pub fn new(bits: u64, n_spin_orbitals: usize) -> Result<Self> {
        if n_spin_orbitals > 64 {
            return Err(Error::Resource(format!(
                "configurations support at most 64 spin-orbitals, got {n_spin_orbitals}"
            )));
        }
        let valid = if n_spin_orbitals == 64 { u64::MAX } else { (1u64 << n_spin_orbitals) - 1 };
        if bits & !valid != 0 {
            return Err(Error::Validation(format!(
                "occupation bits outside {n_spin_orbitals} spin-orbitals"
            )));
        }
        Ok(Self { bits, n_spin_orbitals })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n_spin_orbitals(&self) -> usize {
        self.n_spin_orbitals
    }

    /// Occupation of spin-orbital `i`.
    pub fn occupied(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn electron_count(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

impl fmt::Display for Configuration {
    /// Little-endian bitstring with orbital 0 rightmost.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.n_spin_orbitals).rev() {
            write!(f, "{}", if self.occupied(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// The ordered set of all configurations in one (alpha, beta) sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationSet {
    n_spin_orbitals: usize,
    n_alpha: usize,
    n_beta: usize,
    members: Vec<Configuration>,
}

impl ConfigurationSet {
    pub fn n_spin_orbitals(&self) -> usize {
        self.n_spin_orbitals
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    pub fn members(&self) -> &[Configuration] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Qubits needed to index the members: `ceil(log2 |F|)`.
    pub fn qubit_count(&self) -> usize {
        let n = self.members.len();
        if n <= 1 {
            0
        } else {
            (usize::BITS - (n - 1).leading_zeros()) as usize
        }
    }
}

/// Bitmasks with `k` bits chosen from the positions listed in `slots`.
fn masks_choose(slots: &[usize], k: usize) -> Vec<u64> {
    fn rec(slots: &[usize], k: usize, start: usize, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..=slots.len().saturating_sub(k) {
            rec(slots, k - 1, i + 1, acc | (1u64 << slots[i]), out);
        }
    }
    let mut out = Vec::new();
    if k <= slots.len() {
        rec(slots, k, 0, 0, &mut out);
    }
    out
}

/// Enumerate the sector with `n_alpha` electrons in even spin-orbitals and
/// `n_beta` in odd ones, members sorted ascending as integers.
pub fn enumerate_sector(
    n_spin_orbitals: usize,
    n_alpha: usize,
    n_beta: usize,
) -> Result<ConfigurationSet> {
    if n_spin_orbitals == 0 || n_spin_orbitals % 2 != 0 {
        return Err(Error::Validation(format!(
            "spin-orbital count must be positive and even, got {n_spin_orbitals}"
        )));
    }
    let n_spatial = n_spin_orbitals / 2;
    if n_alpha > n_spatial || n_beta > n_spatial {
        return Err(Error::Validation(format!(
            "sector ({n_alpha}a, {n_beta}b) exceeds {n_spatial} spatial orbitals"
        )));
    }
    let even: Vec<usize> = (0..n_spin_orbitals).step_by(2).collect();
    let odd: Vec<usize> = (1..n_spin_orbitals).step_by(2).collect();
    let alpha_masks = masks_choose(&even, n_alpha);
    let beta_masks = masks_choose(&odd, n_beta);
    let mut members = Vec::with_capacity(alpha_masks.len() * beta_masks.len());
    for &a in &alpha_masks {
        for &b in &beta_masks {
            members.push(Configuration { bits: a | b, n_spin_orbitals });
        }
    }
    members.sort();
    Ok(ConfigurationSet { n_spin_orbitals, n_alpha, n_beta, members })
}

/// Apply the excitation operator `E_pq = a†_p a_q` to a configuration.
///
/// Returns `None` when the operator annihilates the state (`f_q = 0`, or
/// `f_p = 1` with `p != q`). For `p == q` this is the number operator. The
/// sign is the product of `(-1)^{f_i}` over orbitals strictly between `p`
/// and `q`.
pub fn excitation_apply(
    c: &Configuration,
    p: usize,
    q: usize,
) -> Result<Option<(f64, Configuration)>> {
    let n = c.n_spin_orbitals;
    if p >= n || q >= n {
        return Err(Error::Validation(format!(
            "orbital index out of range: ({p}, {q}) on {n} spin-orbitals"
        )));
    }
    if !c.occupied(q) {
        return Ok(None);
    }
    if p == q {
        return Ok(Some((1.0, *c)));
    }
    if c.occupied(p) {
        return Ok(None);
    }
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    let between = if hi - lo <= 1 {
        0
    } else {
        (c.bits >> (lo + 1) & ((1u64 << (hi - lo - 1)) - 1)).count_ones()
    };
    let sign = if between % 2 == 0 { 1.0 } else { -1.0 };
    let bits = (c.bits & !(1u64 << q)) | (1u64 << p);
    Ok(Some((sign, Configuration { bits, n_spin_orbitals: n })))
}

/// Position of `c` in the canonical member order of `set`.
pub fn encode_index(set: &ConfigurationSet, c: &Configuration) -> Result<usize> {
    set.members
        .binary_search(c)
        .map_err(|_| Error::Validation(format!("configuration {c} is not a member of the sector")))
}

/// Inverse of [`encode_index`].
pub fn decode_index(set: &ConfigurationSet, k: usize) -> Result<Configuration> {
    set.members
        .get(k)
        .copied()
        .ok_or_else(|| Error::Validation(format!("index {k} outside the {}-member set", set.len())))
}
