//! Pauli linear-combination-of-unitaries decompositions of first-quantized
//! chemistry Hamiltonians, and the fault-tolerant resource costs of running
//! qubitized phase estimation on them.
//!
//! The pipeline runs in four stages:
//!
//! 1. **Sources** ([`hamiltonian`], [`fcidump`]): dense one-/two-body
//!    integrals from FCIDUMP files or seeded random draws, and
//!    diagonal-interaction (dual-plane-wave) instances for the uniform
//!    electron gas and point-charge materials.
//! 2. **Decomposition** ([`pauli`], [`diagonal`]): exact expansion of the
//!    integrals over products of X/Z bit-string operators via fast
//!    Walsh–Hadamard transforms, then canonicalization — number-operator
//!    removal, exchange deduplication, and the scalar shift.
//! 3. **Assembly** ([`sparse`]): the selectable term list with its packed
//!    binary format, one-norm bookkeeping, and coefficient truncation.
//! 4. **Costing** ([`estimator`]): Toffoli and logical-qubit counts for the
//!    full phase-estimation circuit — superposition preparation, QROAM data
//!    lookup, coherent alias sampling, SELECT, and the walk-operator
//!    reflection — under min-Toffoli or min-qubit lookup tradeoffs.
//!
//! [`verify`] closes the loop on small instances: it rebuilds the dense
//! operator from a decomposition and compares spectra against a direct
//! construction. [`report`] renders every stage as versioned text or CSV.
//!
//! Decompositions of independent rows run in parallel when the `parallel`
//! feature (on by default) is enabled; the `FQLCU_THREADS` environment
//! variable caps the worker count.

pub mod diagonal;
pub mod error;
pub mod estimator;
pub mod exec;
pub mod fcidump;
pub mod fwht;
pub mod hamiltonian;
pub mod pauli;
pub mod report;
pub mod sparse;
pub mod verify;

pub use diagonal::{decompose_diagonal, norm_breakdown, DiagonalLcu, NormBreakdown};
pub use error::{Error, Result};
pub use fcidump::Fcidump;
pub use hamiltonian::{
    gen_material_dpw, gen_random_dense, gen_random_diagonal, gen_ueg_dpw, CellSpec,
    DiagonalHamiltonian, GeneralHamiltonian, PointCharge, SquareMatrix, Tensor4,
};
pub use pauli::{decompose_general, CanonicalLcu, LcuSummary};
pub use sparse::{
    assemble_diagonal, assemble_general, truncate, SparseKind, SparseLcu, TruncationReport,
};
pub use estimator::{
    estimate, split_error_budget, BudgetScheme, CostParams, ErrorBudget, Mode, ResourceEstimate,
};
pub use verify::{verify_diagonal, verify_general, VerificationReport};
