//! Brute-force verification of decompositions on small instances.
//!
//! Every expansion this crate produces can be checked against the operator it
//! claims to represent by materializing both as dense matrices on the full
//! `N`-register Hilbert space. The register encoding assigns `M` qubits per
//! electron, register `i` occupying bits `[iM, (i+1)M)` of the global index,
//! and each term acts as a product of single-qubit factors with
//! `X^p Z^q` entries `(X^pZ^q)[row][col] = [row = col⊕p]·(−1)^{popcount(col∧q)}`
//! — so `XZ = [[0,−1],[1,0]]`, real throughout.
//!
//! The space is `2^{NM}`-dimensional, so verification is guarded at
//! [`MAX_VERIFY_QUBITS`] total qubits and meant for correctness checks, not
//! production sizes.

use crate::diagonal::{decompose_diagonal, DiagonalLcu};
use crate::error::{Error, Result};
use crate::hamiltonian::{DiagonalHamiltonian, GeneralHamiltonian};
use crate::pauli::{decompose_general, CanonicalLcu};
use crate::sparse::{assemble_diagonal, assemble_general, unpack_key, SparseLcu};
use nalgebra::DMatrix;

/// Largest total qubit count (`N·M`) the dense verifier will materialize.
pub const MAX_VERIFY_QUBITS: u32 = 12;

fn parity_sign(bits: usize) -> f64 {
    if bits.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Dense operator on `N` registers of `M` qubits each.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    n: usize,
    m: u32,
    mat: DMatrix<f64>,
}

impl DenseOperator {
    /// The zero operator on `n` registers of `m` qubits.
    pub fn zeros(n: usize, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameter {
                name: "registers",
                message: format!("need at least one register and one qubit, got n={n}, m={m}"),
            });
        }
        let qubits = n as u32 * m;
        if qubits > MAX_VERIFY_QUBITS {
            return Err(Error::SizeGuard {
                qubits: qubits as usize,
                max: MAX_VERIFY_QUBITS as usize,
            });
        }
        let dim = 1usize << qubits;
        Ok(DenseOperator {
            n,
            m,
            mat: DMatrix::zeros(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    fn register_dim(&self) -> usize {
        1 << self.m
    }

    fn register_of(&self, index: usize, i: usize) -> usize {
        (index >> (i * self.m as usize)) & (self.register_dim() - 1)
    }

    fn with_register(&self, index: usize, i: usize, value: usize) -> usize {
        let shift = i * self.m as usize;
        let mask = (self.register_dim() - 1) << shift;
        (index & !mask) | (value << shift)
    }

    /// Add `c·I`.
    pub fn add_identity(&mut self, c: f64) {
        for i in 0..self.dim() {
            self.mat[(i, i)] += c;
        }
    }

    /// Add `c · (X^p Z^q)` acting on register `i`.
    pub fn add_single_string(&mut self, i: usize, p: u16, q: u16, c: f64) {
        debug_assert!(i < self.n);
        let shift = i * self.m as usize;
        for col in 0..self.dim() {
            let row = col ^ ((p as usize) << shift);
            let sign = parity_sign(self.register_of(col, i) & q as usize);
            self.mat[(row, col)] += c * sign;
        }
    }

    /// Add `c · (X^p Z^q)_i ⊗ (X^r Z^s)_j` for distinct registers.
    pub fn add_pair_string(&mut self, i: usize, j: usize, p: u16, q: u16, r: u16, s: u16, c: f64) {
        debug_assert!(i < self.n && j < self.n && i != j);
        let shift_i = i * self.m as usize;
        let shift_j = j * self.m as usize;
        for col in 0..self.dim() {
            let row = col ^ ((p as usize) << shift_i) ^ ((r as usize) << shift_j);
            let sign = parity_sign(self.register_of(col, i) & q as usize)
                * parity_sign(self.register_of(col, j) & s as usize);
            self.mat[(row, col)] += c * sign;
        }
    }

    /// Largest absolute entry difference against another operator.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        let mut max = 0.0f64;
        for (a, b) in self.mat.iter().zip(other.mat.iter()) {
            max = max.max((a - b).abs());
        }
        max
    }

    /// Largest deviation from symmetry, `max |A − Aᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        let mut max = 0.0f64;
        for r in 0..self.dim() {
            for c in (r + 1)..self.dim() {
                max = max.max((self.mat[(r, c)] - self.mat[(c, r)]).abs());
            }
        }
        max
    }

    /// Eigenvalues in ascending order; errors when the operator is not
    /// symmetric to within `1e-9` of its largest entry.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let scale = self.mat.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        if self.asymmetry() > 1e-9 * scale {
            return Err(Error::InvalidParameter {
                name: "operator",
                message: "matrix is not symmetric; eigenvalue check is undefined".into(),
            });
        }
        let mut eigs: Vec<f64> = self
            .mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| a.total_cmp(b));
        Ok(eigs)
    }
}

/// Materialize a dense Hamiltonian directly from its tensors:
/// `core·I + Σ_i h⁽¹⁾_i + ½ Σ_{i≠j} h⁽²⁾_{ij}`.
pub fn build_general(h: &GeneralHamiltonian, n_electrons: usize) -> Result<DenseOperator> {
    let mut op = DenseOperator::zeros(n_electrons, h.m)?;
    op.add_identity(h.core_energy);
    let d = h.d;
    let dim = op.dim();
    for i in 0..n_electrons {
        for col in 0..dim {
            let q = op.register_of(col, i);
            for p in 0..d {
                let value = h.h1.get(p, q);
                if value != 0.0 {
                    let row = op.with_register(col, i, p);
                    op.mat[(row, col)] += value;
                }
            }
        }
    }
    for i in 0..n_electrons {
        for j in 0..n_electrons {
            if i == j {
                continue;
            }
            for col in 0..dim {
                let q = op.register_of(col, i);
                let s = op.register_of(col, j);
                for p in 0..d {
                    for r in 0..d {
                        let value = h.h2.get(p, q, r, s);
                        if value != 0.0 {
                            let row = op.with_register(op.with_register(col, i, p), j, r);
                            op.mat[(row, col)] += 0.5 * value;
                        }
                    }
                }
            }
        }
    }
    Ok(op)
}

/// Materialize a diagonal-interaction Hamiltonian directly:
/// `Σ_i (T+U)_i + ½ Σ_{i≠j} V[x_i][x_j]` with the interaction diagonal in the
/// computational basis.
pub fn build_diagonal(h: &DiagonalHamiltonian, n_electrons: usize) -> Result<DenseOperator> {
    let mut op = DenseOperator::zeros(n_electrons, h.m)?;
    let one_body = h.t_total();
    let d = h.d;
    let dim = op.dim();
    for i in 0..n_electrons {
        for col in 0..dim {
            let q = op.register_of(col, i);
            for p in 0..d {
                let value = one_body.get(p, q);
                if value != 0.0 {
                    let row = op.with_register(col, i, p);
                    op.mat[(row, col)] += value;
                }
            }
        }
    }
    for col in 0..dim {
        let mut acc = 0.0;
        for i in 0..n_electrons {
            for j in 0..n_electrons {
                if i != j {
                    acc += h.v.get(op.register_of(col, i), op.register_of(col, j));
                }
            }
        }
        op.mat[(col, col)] += 0.5 * acc;
    }
    Ok(op)
}

/// Rebuild the operator a canonical expansion encodes: the identity shift,
/// the corrected one-body terms summed over registers, and each stored
/// two-body representative (plus its implied exchange image) over ordered
/// register pairs at half weight.
pub fn reconstruct_canonical(lcu: &CanonicalLcu) -> Result<DenseOperator> {
    let n = lcu.n_electrons;
    let mut op = DenseOperator::zeros(n, lcu.m)?;
    op.add_identity(lcu.identity_shift());
    for i in 0..n {
        for (key, value) in lcu.one.iter() {
            op.add_single_string(i, key.p, key.q, *value);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for (key, value) in lcu.two.iter() {
                op.add_pair_string(i, j, key.p, key.q, key.r, key.s, 0.5 * value);
                if key.left() != key.right() {
                    op.add_pair_string(i, j, key.r, key.s, key.p, key.q, 0.5 * value);
                }
            }
        }
    }
    Ok(op)
}

/// Rebuild the operator a diagonal expansion encodes; interaction terms are
/// pure `Z`-strings on register pairs.
pub fn reconstruct_diagonal(lcu: &DiagonalLcu) -> Result<DenseOperator> {
    let n = lcu.n_electrons;
    let mut op = DenseOperator::zeros(n, lcu.m)?;
    op.add_identity(lcu.identity_shift());
    for i in 0..n {
        for (key, value) in lcu.one.iter() {
            op.add_single_string(i, key.p, key.q, *value);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for (&(q, s), &value) in lcu.gamma.iter() {
                op.add_pair_string(i, j, 0, q, 0, s, 0.5 * value);
                if q != s {
                    op.add_pair_string(i, j, 0, s, 0, q, 0.5 * value);
                }
            }
        }
    }
    Ok(op)
}

/// Rebuild the operator a selectable term list encodes:
/// `shift·I + Σ_{i≠j} Σ_l a_l P_l(i,j)` — exactly the sum PREP/SELECT walks.
pub fn reconstruct_sparse(s: &SparseLcu) -> Result<DenseOperator> {
    let n = s.n_electrons;
    let mut op = DenseOperator::zeros(n, s.m)?;
    op.add_identity(s.identity_shift);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for &(key, value) in s.entries() {
                let (p, q, r, ss) = unpack_key(key);
                op.add_pair_string(i, j, p, q, r, ss, value);
            }
        }
    }
    Ok(op)
}

/// Outcome of an end-to-end check of one instance.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub n_electrons: usize,
    pub m: u32,
    pub qubits: u32,
    pub dim: usize,
    /// Largest entry difference, direct operator vs canonical reconstruction.
    pub canonical_max_diff: f64,
    /// Largest entry difference, direct operator vs term-list reconstruction.
    pub sparse_max_diff: f64,
    pub ground_direct: f64,
    pub ground_reconstructed: f64,
    pub lambda: f64,
    /// Identity offset of the encoded operator (shift plus any core energy).
    pub shift: f64,
    /// Largest `|e − shift|` over the direct operator's eigenvalues.
    pub spectral_radius: f64,
    /// Whether every eigenvalue satisfies `|e − shift| ≤ λ`.
    pub spectral_bound_ok: bool,
    pub tolerance: f64,
    pub passed: bool,
}

fn finish_report(
    direct: &DenseOperator,
    canonical: &DenseOperator,
    sparse_rec: &DenseOperator,
    lambda: f64,
    shift: f64,
    n_electrons: usize,
    m: u32,
    tolerance: f64,
) -> Result<VerificationReport> {
    let canonical_max_diff = direct.max_abs_diff(canonical);
    let sparse_max_diff = direct.max_abs_diff(sparse_rec);
    let eig_direct = direct.eigenvalues()?;
    let eig_rec = sparse_rec.eigenvalues()?;
    let ground_direct = eig_direct[0];
    let ground_reconstructed = eig_rec[0];
    let slack = 1e-9 * (1.0 + lambda.abs() + shift.abs());
    let spectral_radius = eig_direct
        .iter()
        .map(|e| (e - shift).abs())
        .fold(0.0f64, f64::max);
    let spectral_bound_ok = spectral_radius <= lambda + slack;
    let passed = canonical_max_diff <= tolerance
        && sparse_max_diff <= tolerance
        && (ground_direct - ground_reconstructed).abs() <= tolerance
        && spectral_bound_ok;
    Ok(VerificationReport {
        n_electrons,
        m,
        qubits: n_electrons as u32 * m,
        dim: direct.dim(),
        canonical_max_diff,
        sparse_max_diff,
        ground_direct,
        ground_reconstructed,
        lambda,
        shift,
        spectral_radius,
        spectral_bound_ok,
        tolerance,
        passed,
    })
}

/// Decompose a dense Hamiltonian, reconstruct it from both the canonical and
/// the assembled term-list forms, and compare against the directly built
/// operator — entrywise and through ground-state eigenvalues.
pub fn verify_general(
    h: &GeneralHamiltonian,
    n_electrons: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    let direct = build_general(h, n_electrons)?;
    let lcu = decompose_general(h, n_electrons)?;
    let sparse = assemble_general(&lcu);
    let mut canonical_rec = reconstruct_canonical(&lcu)?;
    let mut sparse_rec = reconstruct_sparse(&sparse)?;
    // The expansion never encodes the scalar core energy; restore it so both
    // sides describe the same operator.
    canonical_rec.add_identity(h.core_energy);
    sparse_rec.add_identity(h.core_energy);
    finish_report(
        &direct,
        &canonical_rec,
        &sparse_rec,
        sparse.lambda(),
        lcu.identity_shift() + h.core_energy,
        n_electrons,
        h.m,
        tolerance,
    )
}

/// Diagonal-interaction twin of [`verify_general`].
pub fn verify_diagonal(
    h: &DiagonalHamiltonian,
    n_electrons: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    let direct = build_diagonal(h, n_electrons)?;
    let lcu = decompose_diagonal(h, n_electrons)?;
    let sparse = assemble_diagonal(&lcu);
    let canonical_rec = reconstruct_diagonal(&lcu)?;
    let sparse_rec = reconstruct_sparse(&sparse)?;
    finish_report(
        &direct,
        &canonical_rec,
        &sparse_rec,
        sparse.lambda(),
        lcu.identity_shift(),
        n_electrons,
        h.m,
        tolerance,
    )
}

/// Least-squares fit of `y = a·x^b` on log-log axes; returns `(b, a)`.
pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "fit",
            message: format!(
                "need at least two matched samples, got {} and {}",
                xs.len(),
                ys.len()
            ),
        });
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "fit",
            message: "power-law fit needs strictly positive finite samples".into(),
        });
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mean_x = lx.iter().sum::<f64>() / n;
    let mean_y = ly.iter().sum::<f64>() / n;
    let var: f64 = lx.iter().map(|x| (x - mean_x).powi(2)).sum();
    if var == 0.0 {
        return Err(Error::InvalidParameter {
            name: "fit",
            message: "all abscissae are equal; exponent is undefined".into(),
        });
    }
    let cov: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let b = cov / var;
    let a = (mean_y - b * mean_x).exp();
    Ok((b, a))
}
