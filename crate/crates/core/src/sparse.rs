//! Selectable term lists, truncation, and the binary coefficient format.
//!
//! The block encoding selects among `L` unitaries, each a symmetrized sum of
//! Pauli products over electron-register pairs carrying one scalar
//! coefficient `a_l`. Assembly rescales the canonical expansion so that every
//! term enters with the uniform pair weight `N(N−1)`:
//!
//! * one-body term `(p,q)`:            `a = ω′_pq / (N−1)`
//! * two-body, factors equal:          `a = ω′ / 2`
//! * two-body, canonical off-diagonal: `a = ω′`
//!
//! which makes `N(N−1)·Σ|a_l|` reproduce the one-norm λ of the canonical
//! expansion. Keys pack four 16-bit register patterns `(p,q,r,s)` into a
//! `u64`; one-body terms occupy `(p,q,0,0)` (a slot no canonical two-body
//! term can reach), and the diagonal pipeline's interaction terms are pure-Z
//! pairs `(0,q,0,s)`.
//!
//! [`truncate`] drops the cheapest terms first: entries sorted by ascending
//! `|a|` (ties by key) are removed as long as the cumulative removed weight
//! `N(N−1)·Σ|a|` stays within the caller's budget. That weight bounds the
//! operator norm of the discarded part, and therefore — by eigenvalue
//! perturbation of Hermitian operators — how far any eigenvalue can move.
//!
//! Files carry a 16-byte header (magic `FQLCU1\0\0`, kind, `M`, electron
//! count), the scalar identity shift, then the sorted `(key, coefficient)`
//! records in little-endian form, so a write/read round trip is exact.

use crate::diagonal::DiagonalLcu;
use crate::error::{Error, Result};
use crate::pauli::CanonicalLcu;
use std::fs;
use std::io::Write as _;
use std::path::Path;

const MAGIC: &[u8; 8] = b"FQLCU1\0\0";

/// Which SELECT circuit the term list targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparseKind {
    /// General Pauli products on both registers of a pair.
    General,
    /// One-body products plus pure-Z interaction pairs.
    Diagonal,
}

impl SparseKind {
    /// Stable lowercase name, as printed by reports and accepted by the CLI.
    pub fn label(&self) -> &'static str {
        match self {
            SparseKind::General => "general",
            SparseKind::Diagonal => "diagonal",
        }
    }

    fn to_byte(self) -> u8 {
        match self {
            SparseKind::General => 0,
            SparseKind::Diagonal => 1,
        }
    }

    fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(SparseKind::General),
            1 => Some(SparseKind::Diagonal),
            _ => None,
        }
    }
}

/// Pack four register patterns into a sortable key: `p` in the highest lane,
/// so numeric order is lexicographic order on `(p, q, r, s)`.
pub fn pack_key(p: u16, q: u16, r: u16, s: u16) -> u64 {
    (p as u64) << 48 | (q as u64) << 32 | (r as u64) << 16 | s as u64
}

/// Inverse of [`pack_key`].
pub fn unpack_key(key: u64) -> (u16, u16, u16, u16) {
    (
        (key >> 48) as u16,
        (key >> 32) as u16,
        (key >> 16) as u16,
        key as u16,
    )
}

/// A selectable coefficient list with its block-encoding bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseLcu {
    pub kind: SparseKind,
    pub d: usize,
    /// Qubits per electron register, `log2 d`.
    pub m: u32,
    pub n_electrons: usize,
    /// Scalar energy shift carried outside the block encoding.
    pub identity_shift: f64,
    entries: Vec<(u64, f64)>,
    sum_abs: f64,
}

impl SparseLcu {
    fn from_parts(
        kind: SparseKind,
        d: usize,
        m: u32,
        n_electrons: usize,
        identity_shift: f64,
        mut entries: Vec<(u64, f64)>,
    ) -> Self {
        entries.sort_unstable_by_key(|(k, _)| *k);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0), "duplicate keys");
        let sum_abs = entries.iter().map(|(_, a)| a.abs()).sum();
        SparseLcu {
            kind,
            d,
            m,
            n_electrons,
            identity_shift,
            entries,
            sum_abs,
        }
    }

    /// Sorted `(key, coefficient)` records.
    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    /// Number of selectable terms `L`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ|a_l|` over the stored coefficients.
    pub fn sum_abs(&self) -> f64 {
        self.sum_abs
    }

    /// One-norm of the block-encoded operator, `N(N−1)·Σ|a_l|`.
    pub fn lambda(&self) -> f64 {
        let n = self.n_electrons as f64;
        n * (n - 1.0) * self.sum_abs
    }

    /// Serialize to the binary coefficient format.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut bytes = Vec::with_capacity(24 + 16 * self.entries.len());
        bytes.extend_from_slice(MAGIC);
        bytes.push(self.kind.to_byte());
        bytes.push(self.m as u8);
        bytes.extend_from_slice(&(self.n_electrons as u32).to_le_bytes());
        bytes.extend_from_slice(&[0u8; 2]); // reserved
        bytes.extend_from_slice(&self.identity_shift.to_le_bytes());
        for (key, a) in &self.entries {
            bytes.extend_from_slice(&key.to_le_bytes());
            bytes.extend_from_slice(&a.to_le_bytes());
        }
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&bytes).map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Deserialize and validate a coefficient file.
    pub fn read_binary(path: &Path) -> Result<Self> {
        let format_err = |message: String| Error::Format {
            path: path.to_path_buf(),
            message,
        };
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        if bytes.len() < 24 {
            return Err(format_err("file shorter than the fixed header".into()));
        }
        if &bytes[0..8] != MAGIC {
            return Err(format_err("bad magic; not a coefficient file".into()));
        }
        let kind = SparseKind::from_byte(bytes[8])
            .ok_or_else(|| format_err(format!("unknown kind byte {}", bytes[8])))?;
        let m = bytes[9] as u32;
        if !(1..=16).contains(&m) {
            return Err(format_err(format!("register width {m} out of range 1..=16")));
        }
        let d = 1usize << m;
        let n_electrons =
            u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
        if n_electrons < 2 {
            return Err(format_err(format!(
                "electron count {n_electrons} below the two-electron minimum"
            )));
        }
        let identity_shift = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
        if !identity_shift.is_finite() {
            return Err(format_err("identity shift is not finite".into()));
        }

        let body = &bytes[24..];
        if body.len() % 16 != 0 {
            return Err(format_err(format!(
                "trailing {} bytes do not form a whole record",
                body.len() % 16
            )));
        }
        let mut entries = Vec::with_capacity(body.len() / 16);
        let mut previous: Option<u64> = None;
        for (i, record) in body.chunks_exact(16).enumerate() {
            let key = u64::from_le_bytes(record[0..8].try_into().unwrap());
            let a = f64::from_le_bytes(record[8..16].try_into().unwrap());
            if let Some(prev) = previous {
                if key <= prev {
                    return Err(format_err(format!(
                        "record {i}: keys must be strictly increasing"
                    )));
                }
            }
            previous = Some(key);
            let (p, q, r, s) = unpack_key(key);
            for lane in [p, q, r, s] {
                if lane as usize >= d {
                    return Err(format_err(format!(
                        "record {i}: index {lane} outside dimension {d}"
                    )));
                }
            }
            if kind == SparseKind::Diagonal && !(r == 0 && (s == 0 || p == 0)) {
                return Err(format_err(format!(
                    "record {i}: key is not a one-body or pure-Z pair term"
                )));
            }
            if !a.is_finite() || a == 0.0 {
                return Err(format_err(format!(
                    "record {i}: coefficient must be finite and nonzero"
                )));
            }
            entries.push((key, a));
        }
        Ok(SparseLcu::from_parts(
            kind,
            d,
            m,
            n_electrons,
            identity_shift,
            entries,
        ))
    }
}

/// Rescale a canonical dense expansion into a selectable term list.
pub fn assemble_general(lcu: &CanonicalLcu) -> SparseLcu {
    let nm1 = (lcu.n_electrons - 1) as f64;
    let mut entries = Vec::with_capacity(lcu.one.len() + lcu.two.len());
    for (key, value) in &lcu.one {
        entries.push((pack_key(key.p, key.q, 0, 0), value / nm1));
    }
    for (key, value) in lcu.two.iter() {
        let a = if key.left() == key.right() { value / 2.0 } else { value };
        entries.push((pack_key(key.p, key.q, key.r, key.s), a));
    }
    SparseLcu::from_parts(
        SparseKind::General,
        lcu.d,
        lcu.m,
        lcu.n_electrons,
        lcu.identity_shift(),
        entries,
    )
}

/// Rescale a canonical diagonal expansion into a selectable term list.
pub fn assemble_diagonal(lcu: &DiagonalLcu) -> SparseLcu {
    let nm1 = (lcu.n_electrons - 1) as f64;
    let mut entries = Vec::with_capacity(lcu.one.len() + lcu.gamma.len());
    for (key, value) in &lcu.one {
        entries.push((pack_key(key.p, key.q, 0, 0), value / nm1));
    }
    for (&(q, s), value) in &lcu.gamma {
        let a = if q == s { value / 2.0 } else { *value };
        entries.push((pack_key(0, q, 0, s), a));
    }
    SparseLcu::from_parts(
        SparseKind::Diagonal,
        lcu.d,
        lcu.m,
        lcu.n_electrons,
        lcu.identity_shift(),
        entries,
    )
}

/// What a truncation pass removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport {
    pub removed_terms: usize,
    /// `N(N−1)·Σ|a|` over the removed terms — an upper bound on how far any
    /// eigenvalue of the represented operator can move.
    pub removed_weight: f64,
    pub budget: f64,
}

/// Remove the longest ascending-magnitude prefix of terms whose cumulative
/// weight `N(N−1)·Σ|a|` stays within `budget`. Ties in magnitude resolve in
/// key order, so the result is deterministic.
pub fn truncate(lcu: &SparseLcu, budget: f64) -> (SparseLcu, TruncationReport) {
    let n = lcu.n_electrons as f64;
    let pair_weight = n * (n - 1.0);

    let mut order: Vec<usize> = (0..lcu.entries.len()).collect();
    order.sort_unstable_by(|&i, &j| {
        let (ki, ai) = lcu.entries[i];
        let (kj, aj) = lcu.entries[j];
        ai.abs()
            .partial_cmp(&aj.abs())
            .unwrap()
            .then_with(|| ki.cmp(&kj))
    });

    let mut removed = vec![false; lcu.entries.len()];
    let mut removed_terms = 0;
    let mut removed_weight = 0.0;
    for index in order {
        let step = pair_weight * lcu.entries[index].1.abs();
        if removed_weight + step > budget {
            break;
        }
        removed_weight += step;
        removed[index] = true;
        removed_terms += 1;
    }

    let kept: Vec<(u64, f64)> = lcu
        .entries
        .iter()
        .zip(&removed)
        .filter(|(_, &gone)| !gone)
        .map(|(&e, _)| e)
        .collect();

    (
        SparseLcu::from_parts(
            lcu.kind,
            lcu.d,
            lcu.m,
            lcu.n_electrons,
            lcu.identity_shift,
            kept,
        ),
        TruncationReport {
            removed_terms,
            removed_weight,
            budget,
        },
    )
}
