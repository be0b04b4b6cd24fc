//! Pauli-product expansion of dense Hamiltonians.
//!
//! Every `D × D` one-body matrix expands exactly over the `D²` products
//! `S(p,q) = X^{p_1}Z^{q_1} ⊗ … ⊗ X^{p_M}Z^{q_M}` (one X/Z pair per qubit of
//! the register, indexed by the bit strings `p` and `q`):
//!
//! ```text
//! ω_pq = (1/D) Σ_a h[p⊕a][a] · (−1)^{popcount(a & q)}
//! ```
//!
//! i.e. a Walsh–Hadamard transform of each XOR-reindexed row. Two-body tensors
//! expand the same way over products `S(p,q) ⊗ S(r,s)` acting on a pair of
//! electron registers, via one length-`D²` transform per reindexed row pair.
//!
//! [`canonicalize`] folds the identity-factor terms of the two-body expansion
//! into the one-body coefficients (with the electron-count weights that the
//! first-quantized operator `Σ_i S^i` and `½ Σ_{i≠j} S^i ⊗ S^j` impose),
//! extracts the scalar identity shift, and keeps one representative per
//! exchange-symmetric pair of two-body terms. The induced one-norm of the
//! result is what the resource estimator consumes.
//!
//! Coefficients that vanish do so through exact floating-point cancellation
//! (values of equal magnitude meeting with opposite signs inside the
//! butterfly), so sparsity patterns are exact, not threshold-dependent:
//! `ω_pq = 0` whenever `popcount(p & q)` is odd, which caps the stored
//! one-body terms at `D(D+1)/2` and the canonical two-body terms at
//! `D(D+1)(D−1)(D+2)/8`.

use crate::error::{Error, Result};
use crate::exec;
use crate::fwht::fwht;
use crate::hamiltonian::{validate_dimension, GeneralHamiltonian, SquareMatrix, Tensor4};
use std::collections::BTreeMap;

/// Index of a one-register Pauli product `S(p,q)`: `p` selects the X factors,
/// `q` the Z factors, one bit per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliKey1 {
    pub p: u16,
    pub q: u16,
}

impl PauliKey1 {
    pub fn new(p: u16, q: u16) -> Self {
        PauliKey1 { p, q }
    }

    /// The identity product.
    pub fn identity() -> Self {
        PauliKey1 { p: 0, q: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.p == 0 && self.q == 0
    }
}

/// Index of a two-register product `S(p,q) ⊗ S(r,s)`. Ordering is
/// lexicographic in `(p, q, r, s)`; the canonical representative of an
/// exchange-symmetric pair is the one with `(p, q) ≤ (r, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliKey2 {
    pub p: u16,
    pub q: u16,
    pub r: u16,
    pub s: u16,
}

impl PauliKey2 {
    pub fn new(p: u16, q: u16, r: u16, s: u16) -> Self {
        PauliKey2 { p, q, r, s }
    }

    /// The key with the two register factors swapped.
    pub fn exchanged(&self) -> Self {
        PauliKey2 {
            p: self.r,
            q: self.s,
            r: self.p,
            s: self.q,
        }
    }

    /// First factor `(p, q)` as a tuple.
    pub fn left(&self) -> (u16, u16) {
        (self.p, self.q)
    }

    /// Second factor `(r, s)` as a tuple.
    pub fn right(&self) -> (u16, u16) {
        (self.r, self.s)
    }

    /// True when `(p, q) ≤ (r, s)`, i.e. this key is the stored
    /// representative of its exchange pair.
    pub fn is_canonical(&self) -> bool {
        self.left() <= self.right()
    }
}

/// One-body coefficients, keyed and iterated in lexicographic order.
pub type PauliMap1 = BTreeMap<PauliKey1, f64>;

/// Two-body coefficients as a sorted vector — at `D = 64` the raw expansion
/// holds about four million entries, where a tree map's pointer overhead
/// would hurt. Lookup is binary search.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PauliMap2 {
    entries: Vec<(PauliKey2, f64)>,
}

impl PauliMap2 {
    pub fn new() -> Self {
        PauliMap2 {
            entries: Vec::new(),
        }
    }

    /// Build from entries in any order; keys must be unique.
    pub fn from_entries(mut entries: Vec<(PauliKey2, f64)>) -> Self {
        entries.sort_unstable_by_key(|(k, _)| *k);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0), "duplicate keys");
        PauliMap2 { entries }
    }

    pub fn get(&self, key: PauliKey2) -> Option<f64> {
        self.entries
            .binary_search_by_key(&key, |(k, _)| *k)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliKey2, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Largest possible number of stored one-body terms at dimension `d`: the
/// count of index pairs with `popcount(p & q)` even.
pub fn max_one_body_terms(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Largest possible number of canonical two-body terms at dimension `d`:
/// pairs (unordered, identity-factor rows excluded) of per-register patterns.
pub fn max_two_body_terms(d: usize) -> usize {
    d * (d + 1) * (d - 1) * (d + 2) / 8
}

/// Expand a one-body matrix over Pauli products. Exact zeros are dropped, so
/// at most `d(d+1)/2` entries are returned.
pub fn decompose_one_body(h1: &SquareMatrix) -> Result<PauliMap1> {
    let d = h1.dim();
    validate_dimension(d)?;
    let scale = 1.0 / d as f64;
    let rows = exec::map_rows(d, |p| {
        let mut row: Vec<f64> = (0..d).map(|a| h1.get(p ^ a, a)).collect();
        fwht(&mut row);
        let mut out = Vec::new();
        for (q, &value) in row.iter().enumerate() {
            let omega = value * scale;
            if omega != 0.0 {
                out.push((PauliKey1::new(p as u16, q as u16), omega));
            }
        }
        out
    });
    Ok(rows.into_iter().flatten().collect())
}

/// Reconstruct the one-body matrix from its expansion (the transform is its
/// own inverse up to the `1/D` already applied). Testing aid.
pub fn inverse_one_body(map: &PauliMap1, d: usize) -> Result<SquareMatrix> {
    validate_dimension(d)?;
    let mut h1 = SquareMatrix::zeros(d);
    for p in 0..d {
        let mut row = vec![0.0; d];
        for (q, slot) in row.iter_mut().enumerate() {
            if let Some(v) = map.get(&PauliKey1::new(p as u16, q as u16)) {
                *slot = *v;
            }
        }
        fwht(&mut row);
        for (a, &value) in row.iter().enumerate() {
            h1.set(p ^ a, a, value);
        }
    }
    Ok(h1)
}

fn decompose_two_body_impl(h2: &Tensor4, sequential: bool) -> Result<PauliMap2> {
    let d = h2.dim();
    validate_dimension(d)?;
    let scale = 1.0 / (d as f64 * d as f64);

    // One transform per row pair (g, f); the exchange image (f, g) reuses the
    // same values so the two-fold symmetry of the output holds bit for bit
    // instead of up to transform rounding.
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|g| (g..d).map(move |f| (g, f)))
        .collect();

    let per_pair = |&(g, f): &(usize, usize)| -> Vec<(PauliKey2, f64)> {
        let mut row = vec![0.0; d * d];
        for q in 0..d {
            for s in 0..d {
                row[q * d + s] = h2.get(g ^ q, q, f ^ s, s);
            }
        }
        fwht(&mut row);
        let mut out = Vec::new();
        if g == f {
            // Diagonal row pair: (g,u,g,v) and (g,v,g,u) are exchange images
            // of each other; keep the u ≤ v value for both.
            for u in 0..d {
                for v in u..d {
                    let omega = row[u * d + v] * scale;
                    if omega != 0.0 {
                        out.push((PauliKey2::new(g as u16, u as u16, g as u16, v as u16), omega));
                        if u != v {
                            out.push((
                                PauliKey2::new(g as u16, v as u16, g as u16, u as u16),
                                omega,
                            ));
                        }
                    }
                }
            }
        } else {
            for u in 0..d {
                for v in 0..d {
                    let omega = row[u * d + v] * scale;
                    if omega != 0.0 {
                        out.push((PauliKey2::new(g as u16, u as u16, f as u16, v as u16), omega));
                        out.push((PauliKey2::new(f as u16, v as u16, g as u16, u as u16), omega));
                    }
                }
            }
        }
        out
    };

    let chunks = if sequential {
        exec::map_rows_seq(pairs.len(), |i| per_pair(&pairs[i]))
    } else {
        exec::map_rows(pairs.len(), |i| per_pair(&pairs[i]))
    };
    Ok(PauliMap2::from_entries(
        chunks.into_iter().flatten().collect(),
    ))
}

/// Expand a two-body tensor over products of Pauli pairs. The output is
/// exchange symmetric bit for bit (`ω_{pqrs} = ω_{rspq}`) for the symmetric
/// tensors produced by the generators and FCIDUMP loader. Runs row-parallel
/// when the `parallel` feature is enabled.
pub fn decompose_two_body(h2: &Tensor4) -> Result<PauliMap2> {
    decompose_two_body_impl(h2, false)
}

/// Single-threaded twin of [`decompose_two_body`] for the benchmark suite.
pub fn decompose_two_body_seq(h2: &Tensor4) -> Result<PauliMap2> {
    decompose_two_body_impl(h2, true)
}

/// Reconstruct the two-body tensor from its expansion. Testing aid; dense in
/// `D⁴`, intended for small dimensions.
pub fn inverse_two_body(map: &PauliMap2, d: usize) -> Result<Tensor4> {
    validate_dimension(d)?;
    let mut h2 = Tensor4::zeros(d);
    for g in 0..d {
        for f in 0..d {
            let mut row = vec![0.0; d * d];
            for u in 0..d {
                for v in 0..d {
                    if let Some(omega) =
                        map.get(PauliKey2::new(g as u16, u as u16, f as u16, v as u16))
                    {
                        row[u * d + v] = omega;
                    }
                }
            }
            fwht(&mut row);
            for q in 0..d {
                for s in 0..d {
                    h2.set(g ^ q, q, f ^ s, s, row[q * d + s]);
                }
            }
        }
    }
    Ok(h2)
}

/// The number-operator-free form of the expansion: identity-factor two-body
/// terms folded into the one-body coefficients, the scalar shift extracted,
/// and one stored representative per exchange pair.
#[derive(Debug, Clone)]
pub struct CanonicalLcu {
    pub d: usize,
    /// Qubits per electron register, `log2 d`.
    pub m: u32,
    pub n_electrons: usize,
    /// Corrected one-body coefficients ω′; the identity key is never present.
    pub one: PauliMap1,
    /// Two-body coefficients on canonical keys `(p,q) ≤ (r,s)`, neither factor
    /// the identity. The value is the symmetrized tensor coefficient, so an
    /// off-diagonal entry stands for itself and its exchange image.
    pub two: PauliMap2,
    /// Raw identity coefficients (ω_00, ω_0000) feeding the scalar shift.
    pub identity_terms: (f64, f64),
    /// Whether the raw two-body map was exchange symmetric bit for bit.
    pub exchange_symmetric: bool,
    /// Stored nonzero count of the raw two-body expansion (exchange images
    /// and identity-factor terms included), before canonicalization.
    pub raw_two_nnz: usize,
    /// Distinct two-body coefficients under exchange after identity-factor
    /// keys are folded away; for symmetric inputs at most
    /// `D(D+1)(D−1)(D+2)/8`.
    pub raw_two_unique: usize,
}

/// Headline numbers of a canonical expansion, as printed by reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcuSummary {
    pub d: usize,
    pub m: u32,
    pub n_electrons: usize,
    pub terms_one: usize,
    pub terms_two: usize,
    pub lambda_one: f64,
    pub lambda_two: f64,
    pub lambda_total: f64,
    pub identity_shift: f64,
}

impl CanonicalLcu {
    /// Scalar energy shift carried by the identity products:
    /// `N·ω_00 + ½N(N−1)·ω_0000`.
    pub fn identity_shift(&self) -> f64 {
        let n = self.n_electrons as f64;
        n * self.identity_terms.0 + 0.5 * n * (n - 1.0) * self.identity_terms.1
    }

    /// One-body contribution to the one-norm: `N · Σ|ω′_pq|`.
    pub fn lambda_one(&self) -> f64 {
        self.n_electrons as f64 * self.one.values().map(|v| v.abs()).sum::<f64>()
    }

    /// Two-body contribution: `½N(N−1) · Σ|ω′_pqrs|` over all index tuples,
    /// so each stored off-diagonal representative counts twice.
    pub fn lambda_two(&self) -> f64 {
        let n = self.n_electrons as f64;
        let sum: f64 = self
            .two
            .iter()
            .map(|(k, v)| if k.left() == k.right() { v.abs() } else { 2.0 * v.abs() })
            .sum();
        0.5 * n * (n - 1.0) * sum
    }

    /// Induced one-norm λ of the block-encoded operator (identity shift
    /// excluded).
    pub fn one_norm(&self) -> f64 {
        self.lambda_one() + self.lambda_two()
    }

    pub fn summary(&self) -> LcuSummary {
        LcuSummary {
            d: self.d,
            m: self.m,
            n_electrons: self.n_electrons,
            terms_one: self.one.len(),
            terms_two: self.two.len(),
            lambda_one: self.lambda_one(),
            lambda_two: self.lambda_two(),
            lambda_total: self.one_norm(),
            identity_shift: self.identity_shift(),
        }
    }
}

/// True when every entry's exchange image carries the identical bit pattern.
fn is_exchange_symmetric(two: &PauliMap2) -> bool {
    two.iter().all(|(k, v)| {
        two.get(k.exchanged())
            .is_some_and(|w| w.to_bits() == v.to_bits())
    })
}

/// Fold identity-factor terms and extract the canonical expansion.
///
/// For an exchange-symmetric input the one-body correction is
/// `ω′_pq = ω_pq + (N−1)·ω_{pq00}`; otherwise both identity-factor rows
/// contribute half each, `ω′_pq = ω_pq + ½(N−1)(ω_{pq00} + ω_{00pq})`.
pub fn canonicalize(
    one_raw: &PauliMap1,
    two_raw: &PauliMap2,
    d: usize,
    n_electrons: usize,
) -> Result<CanonicalLcu> {
    let m = validate_dimension(d)?;
    if n_electrons < 2 {
        return Err(Error::InvalidElectronCount {
            n: n_electrons,
            reason: "the canonical form folds pair terms and needs at least two electrons",
        });
    }
    let nm1 = (n_electrons - 1) as f64;
    let exchange_symmetric = is_exchange_symmetric(two_raw);
    // Distinct coefficients that survive canonicalization, one representative
    // per unordered key pair. Keys with an identity factor on either side are
    // folded into the one-body table or the scalar shift, so they are not
    // counted as loadable two-body data. With K = D(D+1)/2 nonzero patterns
    // per factor, symmetric inputs stay within (K−1)K/2.
    let raw_two_unique = two_raw
        .iter()
        .filter(|(k, _)| {
            k.left() != (0, 0)
                && k.right() != (0, 0)
                && (k.is_canonical() || two_raw.get(k.exchanged()).is_none())
        })
        .count();

    let identity_terms = (
        one_raw.get(&PauliKey1::identity()).copied().unwrap_or(0.0),
        two_raw
            .get(PauliKey2::new(0, 0, 0, 0))
            .unwrap_or(0.0),
    );

    let mut one: PauliMap1 = one_raw
        .iter()
        .filter(|(k, _)| !k.is_identity())
        .map(|(k, v)| (*k, *v))
        .collect();

    let mut fold = |p: u16, q: u16, amount: f64| {
        if amount != 0.0 {
            *one.entry(PauliKey1::new(p, q)).or_insert(0.0) += amount;
        }
    };
    for (key, value) in two_raw.iter() {
        let left_id = key.left() == (0, 0);
        let right_id = key.right() == (0, 0);
        if left_id && right_id {
            continue; // the identity shift, handled above
        }
        if exchange_symmetric {
            // Count each symmetric pair once, with the full weight.
            if right_id {
                fold(key.p, key.q, nm1 * value);
            }
        } else {
            if right_id {
                fold(key.p, key.q, 0.5 * nm1 * value);
            }
            if left_id {
                fold(key.r, key.s, 0.5 * nm1 * value);
            }
        }
    }
    one.retain(|_, v| *v != 0.0);

    let mut two_entries: Vec<(PauliKey2, f64)> = Vec::new();
    for (key, value) in two_raw.iter() {
        if key.left() == (0, 0) || key.right() == (0, 0) {
            continue;
        }
        let canonical = if key.is_canonical() {
            Some((key, two_raw.get(key.exchanged())))
        } else if two_raw.get(key.exchanged()).is_none() {
            // Orphan above the diagonal: its representative never appears in
            // the iteration, so emit it here.
            Some((key.exchanged(), None))
        } else {
            None
        };
        if let Some((rep, mirror)) = canonical {
            let folded = if rep.left() == rep.right() {
                value
            } else {
                0.5 * (value + mirror.unwrap_or(0.0))
            };
            if folded != 0.0 {
                two_entries.push((rep, folded));
            }
        }
    }
    let two = PauliMap2::from_entries(two_entries);

    Ok(CanonicalLcu {
        d,
        m,
        n_electrons,
        one,
        two,
        identity_terms,
        exchange_symmetric,
        raw_two_nnz: two_raw.len(),
        raw_two_unique,
    })
}

/// Full pipeline for a dense Hamiltonian: expand both parts and canonicalize.
pub fn decompose_general(h: &GeneralHamiltonian, n_electrons: usize) -> Result<CanonicalLcu> {
    let one_raw = decompose_one_body(&h.h1)?;
    let two_raw = decompose_two_body(&h.h2)?;
    canonicalize(&one_raw, &two_raw, h.d, n_electrons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::gen_random_dense;
    use proptest::prelude::*;

    fn map1(entries: &[((u16, u16), f64)]) -> PauliMap1 {
        entries
            .iter()
            .map(|&((p, q), v)| (PauliKey1::new(p, q), v))
            .collect()
    }

    fn map2(entries: &[((u16, u16, u16, u16), f64)]) -> PauliMap2 {
        PauliMap2::from_entries(
            entries
                .iter()
                .map(|&((p, q, r, s), v)| (PauliKey2::new(p, q, r, s), v))
                .collect(),
        )
    }

    #[test]
    fn one_body_two_by_two_hand_values() {
        // h = [[1, 2], [2, 3]]: ω_00 = (h00+h11)/2, ω_01 = (h00−h11)/2,
        // ω_10 = h01, ω_11 = 0 (the XY-like slot of a symmetric matrix).
        let h = SquareMatrix::from_fn(2, |p, q| [[1.0, 2.0], [2.0, 3.0]][p][q]);
        let map = decompose_one_body(&h).unwrap();
        assert_eq!(map.get(&PauliKey1::new(0, 0)), Some(&2.0));
        assert_eq!(map.get(&PauliKey1::new(0, 1)), Some(&-1.0));
        assert_eq!(map.get(&PauliKey1::new(1, 0)), Some(&2.0));
        assert_eq!(map.get(&PauliKey1::new(1, 1)), None);
        assert_eq!(map.len(), 3);
    }

    #[test]
    fn one_body_parity_sparsity_is_exact() {
        let h = gen_random_dense(8, 5).unwrap();
        let map = decompose_one_body(&h.h1).unwrap();
        for key in map.keys() {
            assert_eq!(
                (key.p & key.q).count_ones() % 2,
                0,
                "odd-parity coefficient survived at {key:?}"
            );
        }
        // A generic symmetric matrix fills every allowed slot.
        assert_eq!(map.len(), max_one_body_terms(8));
    }

    #[test]
    fn two_body_delta_tensor_is_pure_identity() {
        // h[p][q][r][s] = δ_pq δ_rs expands to the identity product alone.
        let d = 4;
        let mut h2 = Tensor4::zeros(d);
        for p in 0..d {
            for r in 0..d {
                h2.set(p, p, r, r, 1.0);
            }
        }
        let map = decompose_two_body(&h2).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map.get(PauliKey2::new(0, 0, 0, 0)), Some(1.0));
    }

    #[test]
    fn two_body_exchange_symmetry_is_bitwise() {
        let h = gen_random_dense(4, 9).unwrap();
        let map = decompose_two_body(&h.h2).unwrap();
        assert!(!map.is_empty());
        for (key, value) in map.iter() {
            let mirror = map.get(key.exchanged()).expect("missing exchange image");
            assert_eq!(mirror.to_bits(), value.to_bits());
        }
    }

    #[test]
    fn two_body_parallel_and_sequential_agree_bitwise() {
        let h = gen_random_dense(4, 12).unwrap();
        let a = decompose_two_body(&h.h2).unwrap();
        let b = decompose_two_body_seq(&h.h2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn term_count_bounds_are_tight_for_generic_input() {
        let h = gen_random_dense(4, 2).unwrap();
        let lcu = decompose_general(&h, 3).unwrap();
        assert_eq!(lcu.one.len(), max_one_body_terms(4) - 1); // identity removed
        assert_eq!(lcu.two.len(), max_two_body_terms(4));
        assert_eq!(max_two_body_terms(4), 45);
        assert_eq!(max_one_body_terms(4), 10);
        // Raw expansion: index symmetry within each pair zeroes every
        // coefficient with odd `popcount(p∧q)` or `popcount(r∧s)`, leaving
        // (D(D+1)/2)² = 100 stored entries. Folding away the 19 entries with
        // an identity factor leaves 81, which exchange pairs down to 45 —
        // exactly the canonical table for a symmetric tensor.
        assert_eq!(lcu.raw_two_nnz, 100);
        assert_eq!(lcu.raw_two_unique, 45);
    }

    #[test]
    fn canonicalize_hand_oracle() {
        // D = 2, N = 3, exchange-symmetric two-body map.
        let one = map1(&[((0, 0), 0.5), ((0, 1), 1.0), ((1, 0), -2.0)]);
        let two = map2(&[
            ((0, 0, 0, 0), 0.125),
            ((0, 1, 0, 0), 0.25),
            ((0, 0, 0, 1), 0.25),
            ((1, 0, 1, 0), 0.75),
            ((0, 1, 1, 1), -0.5),
            ((1, 1, 0, 1), -0.5),
        ]);
        let lcu = canonicalize(&one, &two, 2, 3).unwrap();
        assert!(lcu.exchange_symmetric);

        // ω′_01 = 1.0 + (N−1)·0.25 = 1.5; ω′_10 untouched; identity removed.
        assert_eq!(lcu.one.get(&PauliKey1::new(0, 1)), Some(&1.5));
        assert_eq!(lcu.one.get(&PauliKey1::new(1, 0)), Some(&-2.0));
        assert_eq!(lcu.one.len(), 2);

        // Surviving two-body terms: the self-paired (1,0,1,0) and the
        // canonical representative of {(0,1,1,1), (1,1,0,1)}.
        assert_eq!(lcu.two.len(), 2);
        assert_eq!(lcu.two.get(PauliKey2::new(1, 0, 1, 0)), Some(0.75));
        assert_eq!(lcu.two.get(PauliKey2::new(0, 1, 1, 1)), Some(-0.5));

        // Identity shift: 3·0.5 + 3·0.125 = 1.875.
        assert_eq!(lcu.identity_terms, (0.5, 0.125));
        assert_eq!(lcu.identity_shift(), 1.875);

        // λ₁ = 3·(1.5 + 2.0) = 10.5; λ₂ = 3·(0.75 + 2·0.5) = 5.25.
        assert_eq!(lcu.lambda_one(), 10.5);
        assert_eq!(lcu.lambda_two(), 5.25);
        assert_eq!(lcu.one_norm(), 15.75);

        let s = lcu.summary();
        assert_eq!(s.terms_one, 2);
        assert_eq!(s.terms_two, 2);
        assert_eq!(s.lambda_total, 15.75);
    }

    #[test]
    fn canonicalize_asymmetric_input_takes_half_from_each_side() {
        // Mirror entries deliberately unequal: the fold averages them.
        let one = map1(&[((0, 1), 1.0)]);
        let two = map2(&[((0, 1, 0, 0), 0.25), ((0, 0, 0, 1), 0.35)]);
        let lcu = canonicalize(&one, &two, 2, 3).unwrap();
        assert!(!lcu.exchange_symmetric);
        let got = *lcu.one.get(&PauliKey1::new(0, 1)).unwrap();
        assert!((got - 1.6).abs() < 1e-15, "got {got}");
        assert!(lcu.two.is_empty());
    }

    #[test]
    fn canonicalize_keeps_orphan_entries_above_the_diagonal() {
        // A lone (1,1,0,1) entry has no stored mirror; it must still surface
        // on the canonical key with half weight.
        let two = map2(&[((1, 1, 0, 1), -0.5)]);
        let lcu = canonicalize(&PauliMap1::new(), &two, 2, 2).unwrap();
        assert_eq!(lcu.two.get(PauliKey2::new(0, 1, 1, 1)), Some(-0.25));
        assert_eq!(lcu.two.len(), 1);
    }

    #[test]
    fn canonicalize_rejects_fewer_than_two_electrons() {
        let one = map1(&[((0, 1), 1.0)]);
        for n in [0, 1] {
            assert!(matches!(
                canonicalize(&one, &PauliMap2::new(), 2, n),
                Err(Error::InvalidElectronCount { .. })
            ));
        }
    }

    #[test]
    fn corrections_can_create_and_cancel_terms() {
        // No raw (1,0) one-body term, but a (1,0,0,0) fold creates one; the
        // raw (0,1) term is cancelled exactly by its fold.
        let one = map1(&[((0, 1), -0.5)]);
        let two = map2(&[
            ((1, 0, 0, 0), 1.0),
            ((0, 0, 1, 0), 1.0),
            ((0, 1, 0, 0), 0.25),
            ((0, 0, 0, 1), 0.25),
        ]);
        let lcu = canonicalize(&one, &two, 2, 3).unwrap();
        assert_eq!(lcu.one.get(&PauliKey1::new(1, 0)), Some(&2.0));
        assert_eq!(lcu.one.get(&PauliKey1::new(0, 1)), None);
        assert_eq!(lcu.one.len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn prop_one_body_round_trip(seed in 0u64..500, m in 1u32..4) {
            let d = 1usize << m;
            let h = gen_random_dense(d, seed).unwrap();
            let map = decompose_one_body(&h.h1).unwrap();
            let back = inverse_one_body(&map, d).unwrap();
            for p in 0..d {
                for q in 0..d {
                    prop_assert!((back.get(p, q) - h.h1.get(p, q)).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn prop_two_body_round_trip(seed in 0u64..500, m in 1u32..3) {
            let d = 1usize << m;
            let h = gen_random_dense(d, seed).unwrap();
            let map = decompose_two_body(&h.h2).unwrap();
            let back = inverse_two_body(&map, d).unwrap();
            for p in 0..d {
                for q in 0..d {
                    for r in 0..d {
                        for s in 0..d {
                            prop_assert!(
                                (back.get(p, q, r, s) - h.h2.get(p, q, r, s)).abs() < 1e-12
                            );
                        }
                    }
                }
            }
        }

        #[test]
        fn prop_two_body_parity_sparsity(seed in 0u64..500) {
            let h = gen_random_dense(4, seed).unwrap();
            let map = decompose_two_body(&h.h2).unwrap();
            for (key, _) in map.iter() {
                prop_assert_eq!((key.p & key.q).count_ones() % 2, 0);
                prop_assert_eq!((key.r & key.s).count_ones() % 2, 0);
            }
        }

        #[test]
        fn prop_canonical_term_counts_within_bounds(seed in 0u64..500, n in 2usize..6) {
            let d = 4;
            let h = gen_random_dense(d, seed).unwrap();
            let lcu = decompose_general(&h, n).unwrap();
            prop_assert!(lcu.one.len() <= max_one_body_terms(d) - 1);
            prop_assert!(lcu.two.len() <= max_two_body_terms(d));
            prop_assert!(lcu.one_norm() >= 0.0);
            // Canonical keys only, neither factor the identity.
            for (key, _) in lcu.two.iter() {
                prop_assert!(key.is_canonical());
                prop_assert!(key.left() != (0, 0) && key.right() != (0, 0));
            }
            prop_assert!(!lcu.one.contains_key(&PauliKey1::identity()));
        }
    }
}
