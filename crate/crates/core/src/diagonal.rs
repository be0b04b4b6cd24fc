//! Expansion of Hamiltonians whose two-body interaction is diagonal in the
//! computational basis.
//!
//! The interaction `½ Σ_{i≠j} V[p][r] |p⟩⟨p|_i |r⟩⟨r|_j` involves only
//! projectors, and a projector expands over Z strings alone:
//! `|p⟩⟨p| = (1/D) Σ_q (−1)^{popcount(p&q)} Z^q`. The two-body coefficients
//! therefore form a `D × D` matrix
//!
//! ```text
//! γ_qs = (1/D²) (H^{⊗M} V H^{⊗M})_qs
//! ```
//!
//! instead of a rank-four tensor — one Walsh–Hadamard transform over the
//! packed index computes all of them. The one-body part `T = t_kin + u_ext`
//! expands over general Pauli products exactly as in the dense pipeline.
//!
//! Canonicalization mirrors the general case: γ entries with a zero index
//! carry an identity factor and fold into the pure-Z one-body coefficients
//! (`ω′_{0q} = ω_{0q} + (N−1)·γ_{0q}`), γ_00 joins the scalar shift, and only
//! upper-triangle interaction keys `q ≤ s` are stored. For a diagonal
//! interaction embedded in a dense tensor the general pipeline produces the
//! same numbers bit for bit; this path just skips the `D⁴` work.

use crate::error::{Error, Result};
use crate::fwht::fwht;
use crate::hamiltonian::{validate_dimension, DiagonalHamiltonian};
use crate::pauli::{decompose_one_body, LcuSummary, PauliKey1, PauliMap1};
use std::collections::BTreeMap;

/// Canonical expansion of a diagonal-interaction Hamiltonian.
#[derive(Debug, Clone)]
pub struct DiagonalLcu {
    pub d: usize,
    /// Qubits per electron register, `log2 d`.
    pub m: u32,
    pub n_electrons: usize,
    /// Corrected one-body coefficients ω′; the identity key is never present.
    pub one: PauliMap1,
    /// Interaction coefficients γ on canonical Z-string keys
    /// `1 ≤ q ≤ s`; an off-diagonal entry stands for itself and its mirror.
    pub gamma: BTreeMap<(u16, u16), f64>,
    /// Raw identity coefficients (ω_00, γ_00) feeding the scalar shift.
    pub identity_terms: (f64, f64),
    /// Nonzero count of the full transformed interaction matrix (all `D²`
    /// ordered index pairs), before folding and canonicalization.
    pub raw_gamma_nnz: usize,
}

impl DiagonalLcu {
    /// Scalar energy shift: `N·ω_00 + ½N(N−1)·γ_00`.
    pub fn identity_shift(&self) -> f64 {
        let n = self.n_electrons as f64;
        n * self.identity_terms.0 + 0.5 * n * (n - 1.0) * self.identity_terms.1
    }

    /// One-body contribution to the one-norm: `N · Σ|ω′_pq|`.
    pub fn lambda_one(&self) -> f64 {
        self.n_electrons as f64 * self.one.values().map(|v| v.abs()).sum::<f64>()
    }

    /// Interaction contribution: `½N(N−1) · Σ_{q,s≥1}|γ_qs|` over ordered
    /// index pairs, so stored off-diagonal entries count twice.
    pub fn lambda_two(&self) -> f64 {
        let n = self.n_electrons as f64;
        let sum: f64 = self
            .gamma
            .iter()
            .map(|(&(q, s), v)| if q == s { v.abs() } else { 2.0 * v.abs() })
            .sum();
        0.5 * n * (n - 1.0) * sum
    }

    /// Induced one-norm λ (identity shift excluded).
    pub fn one_norm(&self) -> f64 {
        self.lambda_one() + self.lambda_two()
    }

    pub fn summary(&self) -> LcuSummary {
        LcuSummary {
            d: self.d,
            m: self.m,
            n_electrons: self.n_electrons,
            terms_one: self.one.len(),
            terms_two: self.gamma.len(),
            lambda_one: self.lambda_one(),
            lambda_two: self.lambda_two(),
            lambda_total: self.one_norm(),
            identity_shift: self.identity_shift(),
        }
    }
}

/// Attribution of the one-norm to its physical sources.
///
/// `lambda_one`/`lambda_two`/`lambda_total` describe the merged canonical
/// expansion; `lambda_t`, `lambda_u`, `lambda_v` weigh the kinetic, external,
/// and interaction inputs separately, each expanded on its own. The
/// pair-to-single fold `(N−1)γ_{0q}` is counted toward the interaction it
/// came from, so the merged norm obeys the triangle inequality
/// `lambda_total ≤ lambda_t + lambda_u + lambda_v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBreakdown {
    pub lambda_t: f64,
    pub lambda_u: f64,
    pub lambda_v: f64,
    pub lambda_one: f64,
    pub lambda_two: f64,
    pub lambda_total: f64,
}

/// Compute the per-source norm attribution for a diagonal-interaction
/// Hamiltonian and its expansion.
pub fn norm_breakdown(h: &DiagonalHamiltonian, lcu: &DiagonalLcu) -> Result<NormBreakdown> {
    let n = lcu.n_electrons as f64;
    let weight_one = |map: &PauliMap1| -> f64 {
        n * map
            .iter()
            .filter(|(k, _)| !k.is_identity())
            .map(|(_, v)| v.abs())
            .sum::<f64>()
    };
    let lambda_t = weight_one(&decompose_one_body(&h.t_kin)?);
    let lambda_u = weight_one(&decompose_one_body(&h.u_ext)?);
    // Every transformed interaction coefficient except γ_00 (packed index 0)
    // carries pair weight, including the row-0 entries folded into one-body
    // terms by the canonical form.
    let v_sum: f64 = gamma_matrix(h).iter().skip(1).map(|v| v.abs()).sum();
    let lambda_v = 0.5 * n * (n - 1.0) * v_sum;
    Ok(NormBreakdown {
        lambda_t,
        lambda_u,
        lambda_v,
        lambda_one: lcu.lambda_one(),
        lambda_two: lcu.lambda_two(),
        lambda_total: lcu.one_norm(),
    })
}

/// Number of selectable terms the state-preparation oracle must index: the
/// corrected one-body terms plus the canonical interaction terms. For a
/// generic dense instance this is exactly `D² − 1`.
pub fn count_diagonal_l(lcu: &DiagonalLcu) -> usize {
    lcu.one.len() + lcu.gamma.len()
}

/// Full transform of the interaction matrix: `(1/D²)·H^{⊗M} V H^{⊗M}`,
/// symmetrized bit for bit by copying the upper triangle onto the lower
/// (the two are equal mathematically for symmetric `V`; the copy removes the
/// last-ulp rounding split between row and column passes).
fn gamma_matrix(h: &DiagonalHamiltonian) -> Vec<f64> {
    let d = h.d;
    let mut w: Vec<f64> = Vec::with_capacity(d * d);
    for q in 0..d {
        w.extend_from_slice(h.v.row(q));
    }
    // A single length-D² pass over the packed index (q·D + s) transforms the
    // s bits first (each row) and the q bits after (each column).
    fwht(&mut w);
    let scale = 1.0 / (d as f64 * d as f64);
    for value in w.iter_mut() {
        *value *= scale;
    }
    for q in 0..d {
        for s in (q + 1)..d {
            w[s * d + q] = w[q * d + s];
        }
    }
    w
}

/// Expand and canonicalize a diagonal-interaction Hamiltonian.
pub fn decompose_diagonal(h: &DiagonalHamiltonian, n_electrons: usize) -> Result<DiagonalLcu> {
    let d = h.d;
    let m = validate_dimension(d)?;
    if n_electrons < 2 {
        return Err(Error::InvalidElectronCount {
            n: n_electrons,
            reason: "the canonical form folds pair terms and needs at least two electrons",
        });
    }
    let nm1 = (n_electrons - 1) as f64;

    let omega_raw = decompose_one_body(&h.t_total())?;
    let gamma_full = gamma_matrix(h);

    let identity_terms = (
        omega_raw.get(&PauliKey1::identity()).copied().unwrap_or(0.0),
        gamma_full[0],
    );

    let mut one: PauliMap1 = omega_raw
        .iter()
        .filter(|(k, _)| !k.is_identity())
        .map(|(k, v)| (*k, *v))
        .collect();
    for q in 1..d {
        let correction = nm1 * gamma_full[q]; // γ_{0q}, row 0
        if correction != 0.0 {
            *one.entry(PauliKey1::new(0, q as u16)).or_insert(0.0) += correction;
        }
    }
    one.retain(|_, v| *v != 0.0);

    let mut gamma = BTreeMap::new();
    for q in 1..d {
        for s in q..d {
            let value = gamma_full[q * d + s];
            if value != 0.0 {
                gamma.insert((q as u16, s as u16), value);
            }
        }
    }

    let raw_gamma_nnz = gamma_full.iter().filter(|v| **v != 0.0).count();

    Ok(DiagonalLcu {
        d,
        m,
        n_electrons,
        one,
        gamma,
        identity_terms,
        raw_gamma_nnz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{
        gen_random_diagonal, gen_ueg_dpw, CellSpec, GeneralHamiltonian, SquareMatrix, Tensor4,
    };
    use crate::pauli::{decompose_general, PauliKey2};
    use proptest::prelude::*;

    fn two_by_two(h: [[f64; 2]; 2]) -> SquareMatrix {
        SquareMatrix::from_fn(2, |p, q| h[p][q])
    }

    #[test]
    fn hand_oracle_two_by_two() {
        // T = [[1,2],[2,3]], V = [[4,1],[1,2]]:
        // ω = {(0,0): 2, (0,1): −1, (1,0): 2};
        // γ = (1/4)·HVH = [[2, 0.5], [0.5, 1]].
        let h = DiagonalHamiltonian::new(
            two_by_two([[1.0, 2.0], [2.0, 3.0]]),
            SquareMatrix::zeros(2),
            two_by_two([[4.0, 1.0], [1.0, 2.0]]),
        )
        .unwrap();

        let lcu = decompose_diagonal(&h, 2).unwrap();
        // ω′_01 = −1 + (N−1)·γ_01 = −0.5.
        assert_eq!(lcu.one.get(&PauliKey1::new(0, 1)), Some(&-0.5));
        assert_eq!(lcu.one.get(&PauliKey1::new(1, 0)), Some(&2.0));
        assert_eq!(lcu.one.len(), 2);
        assert_eq!(lcu.gamma.get(&(1, 1)), Some(&1.0));
        assert_eq!(lcu.gamma.len(), 1);
        assert_eq!(lcu.identity_terms, (2.0, 2.0));
        // shift = 2·2 + 1·2 = 6; λ₁ = 2·2.5 = 5; λ₂ = 1·1 = 1.
        assert_eq!(lcu.identity_shift(), 6.0);
        assert_eq!(lcu.lambda_one(), 5.0);
        assert_eq!(lcu.lambda_two(), 1.0);
        assert_eq!(lcu.one_norm(), 6.0);
        assert_eq!(count_diagonal_l(&lcu), 3);

        // Kinetic alone: ω^T = {2, −1, 2} → λ_T = 2·(1+2) = 6. No external
        // potential. Interaction: Σ_{(p,r)≠(0,0)}|γ| = 0.5+0.5+1 → λ_V = 2.
        let nb = norm_breakdown(&h, &lcu).unwrap();
        assert_eq!(nb.lambda_t, 6.0);
        assert_eq!(nb.lambda_u, 0.0);
        assert_eq!(nb.lambda_v, 2.0);
        assert_eq!(nb.lambda_one, 5.0);
        assert_eq!(nb.lambda_two, 1.0);
        assert_eq!(nb.lambda_total, 6.0);
        assert!(nb.lambda_total <= nb.lambda_t + nb.lambda_u + nb.lambda_v + 1e-12);

        // At N = 3 the fold cancels ω_01 exactly and the term disappears.
        let lcu3 = decompose_diagonal(&h, 3).unwrap();
        assert_eq!(lcu3.one.get(&PauliKey1::new(0, 1)), None);
        assert_eq!(count_diagonal_l(&lcu3), 2);
    }

    #[test]
    fn gamma_is_symmetric_bitwise() {
        let h = gen_random_diagonal(8, 21).unwrap();
        let g = gamma_matrix(&h);
        for q in 0..8 {
            for s in 0..8 {
                assert_eq!(g[q * 8 + s].to_bits(), g[s * 8 + q].to_bits());
            }
        }
    }

    #[test]
    fn generic_instance_fills_d_squared_minus_one_terms() {
        let h = gen_random_diagonal(4, 33).unwrap();
        let lcu = decompose_diagonal(&h, 3).unwrap();
        assert_eq!(count_diagonal_l(&lcu), 4 * 4 - 1);
    }

    #[test]
    fn rejects_fewer_than_two_electrons() {
        let h = gen_random_diagonal(2, 1).unwrap();
        assert!(matches!(
            decompose_diagonal(&h, 1),
            Err(Error::InvalidElectronCount { .. })
        ));
    }

    #[test]
    fn ueg_expansion_has_positive_norms() {
        let cell = CellSpec::ueg(4, 2.0, 2).unwrap();
        let h = gen_ueg_dpw(&cell).unwrap();
        let lcu = decompose_diagonal(&h, cell.n_electrons).unwrap();
        assert!(lcu.lambda_one() > 0.0);
        assert!(lcu.lambda_two() > 0.0);
        assert!(lcu.one_norm() >= lcu.lambda_two());

        // The jellium background has no external potential, so the
        // attribution gives it exactly zero weight; the merged norm never
        // exceeds the per-source sum.
        let nb = norm_breakdown(&h, &lcu).unwrap();
        assert_eq!(nb.lambda_u, 0.0);
        assert!(nb.lambda_t > 0.0);
        assert!(nb.lambda_v > 0.0);
        assert!(nb.lambda_total <= nb.lambda_t + nb.lambda_u + nb.lambda_v + 1e-12);
    }

    #[test]
    fn external_charges_contribute_to_the_attribution() {
        use crate::hamiltonian::{gen_material_dpw, PointCharge};
        let cell = CellSpec::with_volume(2, 8.0, 2).unwrap();
        let charges = [PointCharge {
            position: [0.0, 0.0, 0.0],
            charge: 2.0,
        }];
        let h = gen_material_dpw(&cell, &charges).unwrap();
        let lcu = decompose_diagonal(&h, 2).unwrap();
        let nb = norm_breakdown(&h, &lcu).unwrap();
        assert!(nb.lambda_u > 0.0);
        assert!(nb.lambda_total <= nb.lambda_t + nb.lambda_u + nb.lambda_v + 1e-12);
    }

    /// Embed the diagonal interaction into a dense tensor
    /// (`h_pqrs = δ_pq δ_rs V_pr`) and check the general pipeline produces
    /// identical coefficients — bit for bit, since both reduce to the same
    /// transform of `V` over the packed index.
    fn embed(h: &DiagonalHamiltonian) -> GeneralHamiltonian {
        let d = h.d;
        let mut h2 = Tensor4::zeros(d);
        for p in 0..d {
            for r in 0..d {
                h2.set(p, p, r, r, h.v.get(p, r));
            }
        }
        GeneralHamiltonian::new(h.t_total(), h2, 0.0).unwrap()
    }

    #[test]
    fn matches_general_pipeline_exactly() {
        let h = gen_random_diagonal(4, 7).unwrap();
        let diag = decompose_diagonal(&h, 3).unwrap();
        let dense = decompose_general(&embed(&h), 3).unwrap();

        assert_eq!(diag.one, dense.one);
        assert_eq!(diag.identity_terms.0.to_bits(), dense.identity_terms.0.to_bits());
        assert_eq!(diag.identity_terms.1.to_bits(), dense.identity_terms.1.to_bits());

        // Every dense two-body key is a pure-Z pair (0,q,0,s) with q ≤ s,
        // matching the stored γ triangle.
        assert_eq!(dense.two.len(), diag.gamma.len());
        for (key, value) in dense.two.iter() {
            assert_eq!(key.p, 0);
            assert_eq!(key.r, 0);
            let gamma = diag.gamma.get(&(key.q, key.s)).expect("missing γ key");
            assert_eq!(gamma.to_bits(), value.to_bits());
        }
        assert_eq!(diag.one_norm().to_bits(), dense.one_norm().to_bits());
        assert_eq!(
            diag.identity_shift().to_bits(),
            dense.identity_shift().to_bits()
        );
    }

    #[test]
    fn dense_equivalent_keys_are_pure_z() {
        let h = gen_random_diagonal(2, 2).unwrap();
        let dense = decompose_general(&embed(&h), 2).unwrap();
        assert_eq!(dense.two.get(PauliKey2::new(1, 0, 1, 0)), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn prop_matches_general_pipeline(seed in 0u64..300, n in 2usize..6, m in 1u32..3) {
            let d = 1usize << m;
            let h = gen_random_diagonal(d, seed).unwrap();
            let diag = decompose_diagonal(&h, n).unwrap();
            let dense = decompose_general(&embed(&h), n).unwrap();
            prop_assert_eq!(&diag.one, &dense.one);
            prop_assert_eq!(diag.gamma.len(), dense.two.len());
            prop_assert_eq!(diag.one_norm().to_bits(), dense.one_norm().to_bits());
            prop_assert_eq!(
                diag.identity_shift().to_bits(),
                dense.identity_shift().to_bits()
            );
        }

        #[test]
        fn prop_interaction_keys_canonical(seed in 0u64..300) {
            let h = gen_random_diagonal(4, seed).unwrap();
            let lcu = decompose_diagonal(&h, 2).unwrap();
            for (&(q, s), _) in &lcu.gamma {
                prop_assert!(q >= 1 && q <= s);
            }
            prop_assert!(!lcu.one.contains_key(&PauliKey1::identity()));
        }
    }
}
