//! Electron-integral tables, second-quantized Hamiltonian forms, and
//! active-space reduction.
//!
//! Index conventions, fixed here because interchange formats leave them
//! implicit:
//!
//! - Spin-orbital `2i` is the alpha and `2i+1` the beta component of
//!   spatial orbital `i`.
//! - `h2[p][q][r][s]` multiplies `a†_p a†_q a_r a_s`, so in terms of the
//!   chemist-notation spatial integrals `(ij|kl)` read from FCIDUMP,
//!   `h2[p][q][r][s] = (sp(p) sp(s) | sp(q) sp(r))` whenever the spins of
//!   `p,s` match and the spins of `q,r` match, and zero otherwise.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// One- and two-electron integrals over spin-orbitals, plus the scalar
/// core energy. All energies in Hartree.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTable {
    n_spin_orbitals: usize,
    n_electrons: usize,
    ms2: i32,
    h1: Vec<f64>,
    h2: Vec<f64>,
    core_energy: f64,
}

impl IntegralTable {
    /// Build from spatial-orbital integrals: `h_spatial[i*m + j]` is the
    /// one-electron integral and `v_spatial[((i*m + j)*m + k)*m + l]` the
    /// chemist-notation `(ij|kl)`.
    pub fn from_spatial(
        n_spatial: usize,
        n_electrons: usize,
        ms2: i32,
        h_spatial: &[f64],
        v_spatial: &[f64],
        core_energy: f64,
    ) -> Result<Self> {
        let m = n_spatial;
        if h_spatial.len() != m * m || v_spatial.len() != m * m * m * m {
            return Err(Error::Dimension("spatial tensor sizes do not match NORB".into()));
        }
        let n = 2 * m;
        let mut h1 = vec![0.0; n * n];
        for p in 0..n {
            for q in 0..n {
                if p % 2 == q % 2 {
                    h1[p * n + q] = h_spatial[(p / 2) * m + q / 2];
                }
            }
        }
        let mut h2 = vec![0.0; n * n * n * n];
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if q % 2 != r % 2 {
                        continue;
                    }
                    for s in 0..n {
                        if p % 2 != s % 2 {
                            continue;
                        }
                        let (i, j, k, l) = (p / 2, s / 2, q / 2, r / 2);
                        h2[((p * n + q) * n + r) * n + s] = v_spatial[((i * m + j) * m + k) * m + l];
                    }
                }
            }
        }
        Self::new(n, n_electrons, ms2, h1, h2, core_energy)
    }

    /// Build directly from spin-orbital tensors.
    pub fn new(
        n_spin_orbitals: usize,
        n_electrons: usize,
        ms2: i32,
        h1: Vec<f64>,
        h2: Vec<f64>,
        core_energy: f64,
    ) -> Result<Self> {
        let n = n_spin_orbitals;
        if n == 0 || n % 2 != 0 {
            return Err(Error::Validation(format!(
                "spin-orbital count must be positive and even, got {n}"
            )));
        }
        if h1.len() != n * n || h2.len() != n * n * n * n {
            return Err(Error::Dimension("integral tensor sizes do not match".into()));
        }
        let t = Self { n_spin_orbitals, n_electrons, ms2, h1, h2, core_energy };
        t.check_symmetries(1e-10)?;
        Ok(t)
    }

    fn check_symmetries(&self, tol: f64) -> Result<()> {
        let n = self.n_spin_orbitals;
        for p in 0..n {
            for q in 0..p {
                if (self.h1(p, q) - self.h1(q, p)).abs() > tol {
                    return Err(Error::Validation(format!(
                        "h1 not symmetric at ({p}, {q})"
                    )));
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        if (self.h2(p, q, r, s) - self.h2(s, r, q, p)).abs() > tol {
                            return Err(Error::Validation(format!(
                                "h2 lacks Hermitian symmetry at ({p}, {q}, {r}, {s})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_spin_orbitals(&self) -> usize {
        self.n_spin_orbitals
    }

    pub fn n_spatial_orbitals(&self) -> usize {
        self.n_spin_orbitals / 2
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn ms2(&self) -> i32 {
        self.ms2
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    #[inline]
    pub fn h1(&self, p: usize, q: usize) -> f64 {
        self.h1[p * self.n_spin_orbitals + q]
    }

    #[inline]
    pub fn h2(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spin_orbitals;
        self.h2[((p * n + q) * n + r) * n + s]
    }

    /// Chemist-notation spatial integral `(ij|kl)`, recovered from the
    /// mixed-spin components of the spin-orbital tensor.
    pub fn spatial_two_electron(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.h2(2 * i, 2 * k + 1, 2 * l + 1, 2 * j)
    }

    /// Spatial one-electron integral `h_ij`.
    pub fn spatial_one_electron(&self, i: usize, j: usize) -> f64 {
        self.h1(2 * i, 2 * j)
    }
}

/// Partition of the spatial orbitals into frozen (doubly occupied),
/// removed (empty), and active sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSpaceSpec {
    pub frozen: Vec<usize>,
    pub removed: Vec<usize>,
    pub active: Vec<usize>,
}

impl ActiveSpaceSpec {
    pub fn new(mut frozen: Vec<usize>, mut removed: Vec<usize>, mut active: Vec<usize>) -> Self {
        frozen.sort_unstable();
        removed.sort_unstable();
        active.sort_unstable();
        Self { frozen, removed, active }
    }

    /// Identity spec: every orbital active.
    pub fn full(n_spatial: usize) -> Self {
        Self::new(Vec::new(), Vec::new(), (0..n_spatial).collect())
    }

    /// Check that the three sets partition `[0, n_spatial)`.
    pub fn validate(&self, n_spatial: usize) -> Result<()> {
        let mut seen = vec![false; n_spatial];
        for &i in self.frozen.iter().chain(&self.removed).chain(&self.active) {
            if i >= n_spatial {
                return Err(Error::Validation(format!(
                    "orbital {i} outside [0, {n_spatial})"
                )));
            }
            if seen[i] {
                return Err(Error::Validation(format!("orbital {i} listed twice")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Validation("orbital partition is incomplete".into()));
        }
        Ok(())
    }
}

/// Per-orbital natural-orbital data: `(index, eigenvalue, occupancy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyList {
    entries: Vec<(usize, f64, f64)>,
}

impl OccupancyList {
    pub fn new(entries: Vec<(usize, f64, f64)>) -> Result<Self> {
        // MP2 natural occupancies overshoot 2 by a few 1e-6 in practice.
        for &(i, _, occ) in &entries {
            if !(-1e-5..=2.0 + 1e-5).contains(&occ) {
                return Err(Error::Validation(format!(
                    "occupancy {occ} of orbital {i} outside [0, 2]"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(usize, f64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parse CSV rows `index,eigenvalue,occupancy`; a header line is skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if idx == 0 && fields.first().map_or(false, |f| f.parse::<usize>().is_err()) {
                continue; // header
            }
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected 3 comma-separated fields, got {}", fields.len()),
                });
            }
            let parse = |f: &str, what: &str| -> Result<f64> {
                f.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad {what}: '{f}'"),
                })
            };
            let orbital = fields[0].parse::<usize>().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad orbital index: '{}'", fields[0]),
            })?;
            entries.push((orbital, parse(fields[1], "eigenvalue")?, parse(fields[2], "occupancy")?));
        }
        Self::new(entries)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,occupancy\n");
        for &(i, e, o) in &self.entries {
            out.push_str(&format!("{i},{e:e},{o:e}\n"));
        }
        out
    }
}

const FLOAT_SIG_DIGITS: usize = 16; // 17 significant digits: 1 + 16 after the point

fn fortran_float(v: f64) -> String {
    format!("{:.*e}", FLOAT_SIG_DIGITS, v)
}

/// Parse an FCIDUMP file into spin-orbital integral tensors.
///
/// The header supplies `NORB`, `NELEC`, and optionally `MS2`; body lines are
/// `value i j k l` with 1-based spatial indices in chemist notation, all
/// eight index symmetries of a real two-electron tensor being implied.
/// `value i j 0 0` is a one-electron integral and `value 0 0 0 0` the core
/// energy.
pub fn parse_fcidump(text: &str) -> Result<IntegralTable> {
    let mut lines = text.lines().enumerate();

    // Header: runs from &FCI to &END (or a bare / or $END).
    let mut header = String::new();
    let mut body_start = 0;
    for (idx, line) in lines.by_ref() {
        let upper = line.to_uppercase();
        if idx == 0 && !upper.trim_start().starts_with("&FCI") {
            return Err(Error::Parse { line: 1, msg: "missing &FCI header".into() });
        }
        header.push_str(&upper);
        header.push(' ');
        if upper.contains("&END") || upper.contains("$END") || upper.trim() == "/" {
            body_start = idx + 1;
            break;
        }
    }
    if body_start == 0 {
        return Err(Error::Parse { line: 1, msg: "unterminated header (no &END)".into() });
    }

    let header_int = |key: &str| -> Result<Option<i64>> {
        let Some(pos) = header.find(key) else { return Ok(None) };
        let rest = &header[pos + key.len()..];
        let rest = rest.trim_start().strip_prefix('=').ok_or(Error::Parse {
            line: 1,
            msg: format!("malformed header entry for {key}"),
        })?;
        let token: String = rest
            .trim_start()
            .chars()
            .take_while(|c| c.is_ascii_digit() || *c == '-' || *c == '+')
            .collect();
        token
            .parse::<i64>()
            .map(Some)
            .map_err(|_| Error::Parse { line: 1, msg: format!("bad integer for {key}") })
    };

    let norb = header_int("NORB")?
        .ok_or(Error::Parse { line: 1, msg: "header lacks NORB".into() })? as usize;
    let nelec = header_int("NELEC")?
        .ok_or(Error::Parse { line: 1, msg: "header lacks NELEC".into() })? as usize;
    let ms2 = header_int("MS2")?.unwrap_or(0) as i32;
    if norb == 0 {
        return Err(Error::Validation("NORB must be positive".into()));
    }

    let m = norb;
    let mut h_spatial = vec![0.0; m * m];
    let mut v_spatial = vec![0.0; m * m * m * m];
    let mut core = 0.0;

    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let lineno = idx + 1;
        let value: f64 = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { line: lineno, msg: "bad value field".into() })?;
        let mut index = |what: &str| -> Result<usize> {
            parts
                .next()
                .ok_or(Error::Parse { line: lineno, msg: format!("missing index {what}") })?
                .parse()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad index {what}") })
        };
        let (i, j, k, l) = (index("i")?, index("j")?, index("k")?, index("l")?);
        if parts.next().is_some() {
            return Err(Error::Parse { line: lineno, msg: "trailing fields".into() });
        }
        for idx1 in [i, j, k, l] {
            if idx1 > m {
                return Err(Error::Validation(format!(
                    "orbital index {idx1} exceeds NORB={m} on line {lineno}"
                )));
            }
        }
        match (i, j, k, l) {
            (0, 0, 0, 0) => core = value,
            (i, j, 0, 0) if i > 0 && j > 0 => {
                let (a, b) = (i - 1, j - 1);
                h_spatial[a * m + b] = value;
                h_spatial[b * m + a] = value;
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (a, b, c, d) = (i - 1, j - 1, k - 1, l - 1);
                for (w, x, y, z) in [
                    (a, b, c, d),
                    (b, a, c, d),
                    (a, b, d, c),
                    (b, a, d, c),
                    (c, d, a, b),
                    (d, c, a, b),
                    (c, d, b, a),
                    (d, c, b, a),
                ] {
                    v_spatial[((w * m + x) * m + y) * m + z] = value;
                }
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unsupported index pattern ({i} {j} {k} {l})"),
                })
            }
        }
    }

    IntegralTable::from_spatial(m, nelec, ms2, &h_spatial, &v_spatial, core)
}

/// Serialize a table back to FCIDUMP. Numeric fields carry 17 significant
/// digits, so parse -> write -> parse reproduces the tensors bitwise.
pub fn write_fcidump(t: &IntegralTable) -> String {
    let m = t.n_spatial_orbitals();
    let mut out = format!(
        "&FCI NORB={m},NELEC={},MS2={},\n ORBSYM={}\n ISYM=1,\n&END\n",
        t.n_electrons(),
        t.ms2(),
        "1,".repeat(m)
    );
    // Unique two-electron entries under the 8-fold symmetry.
    for i in 0..m {
        for j in 0..=i {
            for k in 0..=i {
                let l_max = if k == i { j } else { k };
                for l in 0..=l_max {
                    let v = t.spatial_two_electron(i, j, k, l);
                    if v != 0.0 {
                        out.push_str(&format!(
                            "{} {} {} {} {}\n",
                            fortran_float(v),
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1
                        ));
                    }
                }
            }
        }
    }
    for i in 0..m {
        for j in 0..=i {
            let v = t.spatial_one_electron(i, j);
            if v != 0.0 {
                out.push_str(&format!("{} {} {} 0 0\n", fortran_float(v), i + 1, j + 1));
            }
        }
    }
    out.push_str(&format!("{} 0 0 0 0\n", fortran_float(t.core_energy())));
    out
}

/// Fold frozen orbitals into an effective core and drop removed orbitals.
///
/// The frozen spatial orbitals contribute a mean-field shift to the active
/// one-body integrals and a scalar to the core energy; the returned table
/// lives on the active spin-orbitals only, relabeled in ascending order.
pub fn freeze_reduce(t: &IntegralTable, spec: &ActiveSpaceSpec) -> Result<IntegralTable> {
    let m = t.n_spatial_orbitals();
    spec.validate(m)?;
    let active_electrons = t.n_electrons() as i64 - 2 * spec.frozen.len() as i64;
    if active_electrons < 0 {
        return Err(Error::Validation(format!(
            "freezing {} orbitals leaves {} electrons",
            spec.frozen.len(),
            active_electrons
        )));
    }

    // Frozen and active spin-orbital index lists.
    let frozen: Vec<usize> =
        spec.frozen.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
    let active: Vec<usize> =
        spec.active.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();

    let mut core = t.core_energy();
    for &i in &frozen {
        core += t.h1(i, i);
    }
    for &i in &frozen {
        for &j in &frozen {
            core += 0.5 * (t.h2(i, j, j, i) - t.h2(i, j, i, j));
        }
    }

    let n_new = active.len();
    let mut h1 = vec![0.0; n_new * n_new];
    for (a, &p) in active.iter().enumerate() {
        for (b, &s) in active.iter().enumerate() {
            let mut v = t.h1(p, s);
            for &i in &frozen {
                v += t.h2(p, i, i, s) - t.h2(p, i, s, i);
            }
            h1[a * n_new + b] = v;
        }
    }
    let mut h2 = vec![0.0; n_new * n_new * n_new * n_new];
    for (a, &p) in active.iter().enumerate() {
        for (b, &q) in active.iter().enumerate() {
            for (c, &r) in active.iter().enumerate() {
                for (d, &s) in active.iter().enumerate() {
                    h2[((a * n_new + b) * n_new + c) * n_new + d] = t.h2(p, q, r, s);
                }
            }
        }
    }

    IntegralTable::new(n_new, active_electrons as usize, t.ms2(), h1, h2, core)
}

/// Pick the `max_active_mos` orbitals whose occupancy is farthest from
/// both 0 and 2; remaining occupied-side orbitals are frozen and
/// virtual-side orbitals removed.
pub fn select_active_by_occupancy(
    occ: &OccupancyList,
    n_electrons: usize,
    max_active_mos: usize,
) -> Result<ActiveSpaceSpec> {
    if max_active_mos == 0 {
        return Err(Error::Validation("max_active_mos must be at least 1".into()));
    }
    let n = occ.len();
    if max_active_mos > n {
        return Err(Error::Validation(format!(
            "requested {max_active_mos} active orbitals from {n}"
        )));
    }
    let occupied = |o: f64| o >= 1.0;
    let n_occ = occ.entries().iter().filter(|&&(_, _, o)| occupied(o)).count();
    // Distance from the nearest integer occupancy, then proximity to the
    // occupied/virtual boundary as the degenerate tie-break.
    let fermi = n_occ as f64 - 0.5;
    let mut ranked: Vec<(usize, f64, f64)> = occ
        .entries()
        .iter()
        .map(|&(i, _, o)| (i, o.min(2.0 - o), (i as f64 - fermi).abs()))
        .collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then(a.2.partial_cmp(&b.2).unwrap())
            .then(a.0.cmp(&b.0))
    });
    let active: Vec<usize> = ranked[..max_active_mos].iter().map(|&(i, _, _)| i).collect();
    let in_active = |i: usize| active.contains(&i);
    let mut frozen = Vec::new();
    let mut removed = Vec::new();
    for &(i, _, o) in occ.entries() {
        if !in_active(i) {
            if occupied(o) {
                frozen.push(i);
            } else {
                removed.push(i);
            }
        }
    }
    let active_electrons = n_electrons as i64 - 2 * frozen.len() as i64;
    if active_electrons < 0 || active_electrons % 2 != 0 {
        return Err(Error::Validation(format!(
            "active space leaves an inconsistent electron count ({active_electrons})"
        )));
    }
    Ok(ActiveSpaceSpec::new(frozen, removed, active))
}

/// One candidate active-MO set with its per-tautomer relative energies
/// (kcal/mol, relative to a common anchor tautomer).
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub label: String,
    pub n_active_mos: usize,
    pub relative_kcal: BTreeMap<String, f64>,
}

/// A candidate with its max-norm deviation from the reference energies.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidate {
    pub candidate: CandidateSet,
    pub deviation_kcal: f64,
}

/// Order candidate active sets by max-norm deviation of their relative
/// energies from the reference (full-system) relative energies; ties break
/// toward fewer active orbitals.
pub fn rank_candidate_sets(
    candidates: Vec<CandidateSet>,
    reference: &BTreeMap<String, f64>,
) -> Result<Vec<RankedCandidate>> {
    if !reference.values().any(|v| v.abs() < 1e-9) {
        return Err(Error::Validation(
            "reference energies lack an anchor entry equal to 0".into(),
        ));
    }
    let ref_labels: Vec<&String> = reference.keys().collect();
    let mut ranked = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let labels: Vec<&String> = cand.relative_kcal.keys().collect();
        if labels != ref_labels {
            return Err(Error::Validation(format!(
                "candidate '{}' covers tautomers {labels:?}, reference covers {ref_labels:?}",
                cand.label
            )));
        }
        let deviation_kcal = cand
            .relative_kcal
            .iter()
            .map(|(label, v)| (v - reference[label]).abs())
            .fold(0.0_f64, f64::max);
        ranked.push(RankedCandidate { candidate: cand, deviation_kcal });
    }
    ranked.sort_by(|a, b| {
        a.deviation_kcal
            .partial_cmp(&b.deviation_kcal)
            .unwrap()
            .then(a.candidate.n_active_mos.cmp(&b.candidate.n_active_mos))
            .then(a.candidate.label.cmp(&b.candidate.label))
    });
    Ok(ranked)
}

/// The Hamiltonian rewritten over particle-conserving excitation operators:
/// `constant + sum linear[(p,s)] E_ps + sum quadratic[(p,r,q,s)] E_pr E_qs`,
/// with the Kronecker-delta correction already folded into the linear part.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationPolynomial {
    pub n_spin_orbitals: usize,
    pub constant: f64,
    pub linear: BTreeMap<(usize, usize), f64>,
    pub quadratic: BTreeMap<(usize, usize, usize, usize), f64>,
}

/// Rewrite `a†_p a†_q a_r a_s = δ_qr E_ps − E_pr E_qs` and collect terms.
pub fn to_excitation_form(t: &IntegralTable) -> ExcitationPolynomial {
    let n = t.n_spin_orbitals();
    let mut linear = BTreeMap::new();
    for p in 0..n {
        for s in 0..n {
            let mut v = t.h1(p, s);
            for q in 0..n {
                v += 0.5 * t.h2(p, q, q, s);
            }
            if v != 0.0 {
                linear.insert((p, s), v);
            }
        }
    }
    let mut quadratic = BTreeMap::new();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = t.h2(p, q, r, s);
                    if v != 0.0 {
                        *quadratic.entry((p, r, q, s)).or_insert(0.0) += -0.5 * v;
                    }
                }
            }
        }
    }
    quadratic.retain(|_, v| *v != 0.0);
    ExcitationPolynomial { n_spin_orbitals: n, constant: t.core_energy(), linear, quadratic }
}
