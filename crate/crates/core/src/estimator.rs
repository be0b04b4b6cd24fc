//! Fault-tolerant cost model for qubitized phase estimation over a selectable
//! term list.
//!
//! The walk operator is costed element by element — equal-superposition
//! preparations, QROAM data lookup, coherent alias sampling, SELECT,
//! measurement-based uncomputation, and the reflection — in Toffolis and
//! logical qubits, all integer arithmetic. Phase estimation repeats the walk
//! `I = ⌈πλ/(2ε_QPE)⌉` times, so the total Toffoli count is the per-step sum
//! times `I`, while qubit counts add once. One-off costs (initial state
//! preparation, inverse QFT, the catalytic rotation state) are excluded.
//!
//! Two QROAM trade-off modes are supported: `min-T` picks the lookup width
//! κ₁ that minimizes Toffolis by exhaustive search over powers of two, and
//! `min-Qu` pins κ₁ = 1 to avoid the extra output copies; the uncompute
//! width κ₂ is Toffoli-optimized in both modes.
//!
//! Closed-form superposition costs degenerate for exact powers of two, where
//! comparators drop out: the term superposition becomes free (Hadamards
//! only), and the electron-pair superposition keeps only its equality test.
//! Negative formula values are clamped to zero in all cases.

use crate::error::{Error, Result};
use crate::sparse::{SparseKind, SparseLcu};
use std::f64::consts::PI;

/// QROAM trade-off selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Minimize Toffolis: exhaustive κ₁ search.
    MinT,
    /// Minimize logical qubits: κ₁ = 1, no extra lookup copies.
    MinQu,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::MinT => "min-t",
            Mode::MinQu => "min-qu",
        }
    }
}

/// How the total error budget is split between phase estimation, coefficient
/// truncation, and state-preparation rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetScheme {
    /// Molecular split: 10/16 QPE, 3/16 truncation, 3/16 preparation.
    Molecular,
    /// Dual-plane-wave split: 15.8/16 QPE, no truncation, 0.2/16 preparation.
    Dpw,
}

impl BudgetScheme {
    pub fn label(&self) -> &'static str {
        match self {
            BudgetScheme::Molecular => "molecular",
            BudgetScheme::Dpw => "dpw",
        }
    }
}

/// Error budget in Hartree. The parts always sum to `eps_tot` exactly: the
/// last share is computed by subtraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub eps_tot: f64,
    pub eps_qpe: f64,
    pub eps_trunc: f64,
    pub eps_prep: f64,
}

impl ErrorBudget {
    /// Assemble a budget from explicit parts; the total is their exact sum.
    pub fn from_parts(eps_qpe: f64, eps_trunc: f64, eps_prep: f64) -> Result<Self> {
        for (name, v) in [
            ("eps_qpe", eps_qpe),
            ("eps_trunc", eps_trunc),
            ("eps_prep", eps_prep),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("error share must be finite and non-negative, got {v}"),
                });
            }
        }
        Ok(ErrorBudget {
            eps_tot: eps_qpe + eps_trunc + eps_prep,
            eps_qpe,
            eps_trunc,
            eps_prep,
        })
    }
}

/// Split a total error budget by scheme; the sum of the three parts equals
/// `eps_tot` exactly because the final share is the residual.
pub fn split_error_budget(eps_tot: f64, scheme: BudgetScheme) -> Result<ErrorBudget> {
    if !(eps_tot > 0.0) || !eps_tot.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eps_tot",
            message: format!("total error budget must be positive, got {eps_tot}"),
        });
    }
    let (eps_qpe, eps_trunc) = match scheme {
        BudgetScheme::Molecular => (eps_tot * (10.0 / 16.0), eps_tot * (3.0 / 16.0)),
        BudgetScheme::Dpw => (eps_tot * (15.8 / 16.0), 0.0),
    };
    // Residual of the budget after the fixed shares. The grouping matters:
    // `eps_qpe + eps_trunc` is within a factor of two of `eps_tot`, so the
    // subtraction is exact (Sterbenz) and the three parts sum back to
    // `eps_tot` bit for bit.
    let eps_prep = eps_tot - (eps_qpe + eps_trunc);
    Ok(ErrorBudget {
        eps_tot,
        eps_qpe,
        eps_trunc,
        eps_prep,
    })
}

/// Estimator knobs. Unset optional fields are chosen automatically:
/// ℵ from the preparation budget, κ₁/κ₂ by the mode's trade-off search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub mode: Mode,
    pub budget: ErrorBudget,
    /// Rotation precision bits for the term superposition (default 8).
    pub b_l: u32,
    /// Rotation precision bits for the pair superposition (default 8).
    pub b_n: u32,
    /// Keep-probability bits for alias sampling; auto-selected when unset.
    pub aleph: Option<u32>,
    /// QROAM lookup width override (power of two).
    pub kappa1: Option<u64>,
    /// QROAM uncompute width override (power of two).
    pub kappa2: Option<u64>,
}

impl CostParams {
    pub fn new(mode: Mode, budget: ErrorBudget) -> Self {
        CostParams {
            mode,
            budget,
            b_l: 8,
            b_n: 8,
            aleph: None,
            kappa1: None,
            kappa2: None,
        }
    }
}

/// One circuit element: Toffolis per walk step and logical qubits held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostRow {
    pub label: &'static str,
    pub toffolis: u64,
    pub qubits: u64,
}

/// Complete cost breakdown for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceEstimate {
    pub rows: Vec<CostRow>,
    /// Walk-operator repetitions for phase estimation.
    pub i_repetitions: u64,
    /// Toffolis per walk step (sum of the row column).
    pub per_step_toffoli: u64,
    pub total_toffoli: u128,
    pub logical_qubits: u64,
    pub lambda: f64,
    pub l_terms: u64,
    pub m_bits: u64,
    pub aleph: u32,
    pub kappa1: u64,
    pub kappa2: u64,
    pub mode: Mode,
    pub kind: SparseKind,
    pub budget: ErrorBudget,
    pub n_electrons: usize,
    /// Basis dimension per electron, `2^m`.
    pub d: usize,
}

impl ResourceEstimate {
    /// Qubits per electron register, `log₂ d`.
    pub fn m_register(&self) -> u32 {
        ceil_log2(self.d as u64)
    }
}

/// ⌈log₂ x⌉ for x ≥ 1 (0 for x = 1).
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Largest power of two dividing x (the value, not the exponent).
pub fn eta(x: u64) -> u64 {
    debug_assert!(x > 0);
    x & x.wrapping_neg()
}

fn clamp_non_negative(v: i64) -> u64 {
    v.max(0) as u64
}

fn require_power_of_two(name: &'static str, v: u64) -> Result<()> {
    if v == 0 || !v.is_power_of_two() {
        return Err(Error::InvalidParameter {
            name,
            message: format!("must be a power of two at least 1, got {v}"),
        });
    }
    Ok(())
}

/// Toffolis and qubits to prepare (and amplify) an equal superposition over
/// `l` indices. Powers of two need only Hadamards on the ⌈log₂L⌉ index
/// qubits; otherwise the comparator/rotation circuit costs
/// `3⌈log₂L⌉ − 3η_L + 2b_L − 9` with `b_L + 2` ancillas.
pub fn equal_superposition_cost(l: u64, b_l: u32) -> Result<(u64, u64)> {
    if l == 0 {
        return Err(Error::InvalidParameter {
            name: "l_terms",
            message: "cannot prepare a superposition over zero terms".into(),
        });
    }
    if l.is_power_of_two() {
        return Ok((0, ceil_log2(l) as u64));
    }
    let toffolis = clamp_non_negative(
        3 * ceil_log2(l) as i64 - 3 * eta(l) as i64 + 2 * b_l as i64 - 9,
    );
    Ok((toffolis, b_l as u64 + 2))
}

/// Toffolis and qubits to prepare the superposition over ordered electron
/// pairs `i ≠ j`: `8⌈log₂N⌉ − 4η_N + 2b_N − 7` with `b_N + 2` ancillas.
/// For N an exact power of two the range comparators vanish and only the
/// equality test remains, `3⌈log₂N⌉ − η_N`.
pub fn pair_superposition_cost(n: u64, b_n: u32) -> Result<(u64, u64)> {
    if n < 2 {
        return Err(Error::InvalidElectronCount {
            n: n as usize,
            reason: "pair superposition needs at least two electrons",
        });
    }
    let toffolis = if n.is_power_of_two() {
        clamp_non_negative(3 * ceil_log2(n) as i64 - eta(n) as i64)
    } else {
        clamp_non_negative(
            8 * ceil_log2(n) as i64 - 4 * eta(n) as i64 + 2 * b_n as i64 - 7,
        )
    };
    Ok((toffolis, b_n as u64 + 2))
}

/// Rotation angle β ∈ [0, 2π) for the single-round amplitude amplification of
/// the pair superposition: cos(β/2) = (−1/2)/√(N(N−1)/2^{2⌈log₂N⌉}), which
/// makes the amplified angle satisfy cos α = −1/2, hence cos 3α = 1.
pub fn beta_angle(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidElectronCount {
            n: n as usize,
            reason: "amplification angle is defined for at least two electrons",
        });
    }
    let radicand = (n * (n - 1)) as f64 / 2f64.powi(2 * ceil_log2(n) as i32);
    let cos_half = -0.5 / radicand.sqrt();
    Ok(2.0 * cos_half.acos())
}

/// QROAM lookup cost for `l` entries of `m` output bits at width `kappa`:
/// `⌈L/κ⌉ + m(κ−1)` Toffolis, `mκ + ⌈log₂(L/κ)⌉` qubits.
pub fn qroam_cost(l: u64, m: u64, kappa: u64) -> Result<(u64, u64)> {
    require_power_of_two("kappa1", kappa)?;
    if l == 0 || m == 0 {
        return Err(Error::InvalidParameter {
            name: "qroam",
            message: format!("lookup needs l ≥ 1 and m ≥ 1, got l={l}, m={m}"),
        });
    }
    let toffolis = l.div_ceil(kappa) + m * (kappa - 1);
    let qubits = m * kappa + ceil_log2(l.div_ceil(kappa)) as u64;
    Ok((toffolis, qubits))
}

/// Measurement-based QROAM uncompute: `⌈L/κ⌉ + κ` Toffolis, no held qubits.
pub fn qroam_uncompute_cost(l: u64, kappa: u64) -> Result<u64> {
    require_power_of_two("kappa2", kappa)?;
    if l == 0 {
        return Err(Error::InvalidParameter {
            name: "qroam",
            message: "uncompute needs l ≥ 1".into(),
        });
    }
    Ok(l.div_ceil(kappa) + kappa)
}

/// Pick QROAM widths: κ₁ minimizes the lookup Toffolis (exhaustively over
/// powers of two up to 2^⌈log₂L⌉, ties to the smaller width) in `min-T` mode
/// and is pinned to 1 in `min-Qu` mode; κ₂ always minimizes the uncompute
/// cost.
pub fn optimize_kappa(l: u64, m: u64, mode: Mode) -> Result<(u64, u64)> {
    if l == 0 || m == 0 {
        return Err(Error::InvalidParameter {
            name: "qroam",
            message: format!("width search needs l ≥ 1 and m ≥ 1, got l={l}, m={m}"),
        });
    }
    let candidates = (0..=ceil_log2(l)).map(|e| 1u64 << e);
    let kappa1 = match mode {
        Mode::MinQu => 1,
        Mode::MinT => candidates
            .clone()
            .min_by_key(|&k| qroam_cost(l, m, k).expect("valid candidate").0)
            .unwrap(),
    };
    let kappa2 = candidates
        .min_by_key(|&k| qroam_uncompute_cost(l, k).expect("valid candidate"))
        .unwrap();
    Ok((kappa1, kappa2))
}

/// SELECT Toffolis: unary iteration over electrons plus the doubly-controlled
/// X/Z pairs on both registers, `2N + 4NM`; the diagonal variant's second
/// factor is pure Z and drops the controlled-X gates, `2N + 3NM`.
pub fn select_cost(n: u64, m: u64, kind: SparseKind) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidElectronCount {
            n: n as usize,
            reason: "SELECT iterates over at least two electrons",
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            message: "register width must be at least 1".into(),
        });
    }
    Ok(match kind {
        SparseKind::General => 2 * n + 4 * n * m,
        SparseKind::Diagonal => 2 * n + 3 * n * m,
    })
}

/// Coherent alias sampling Toffolis: `ℵ + ⌈(m−ℵ−2)/2⌉`.
pub fn alias_sampling_cost(m: u64, aleph: u32) -> Result<u64> {
    let aleph = aleph as u64;
    if m <= aleph + 2 {
        return Err(Error::InvalidParameter {
            name: "aleph",
            message: format!(
                "QROM output m={m} leaves no index bits beyond ℵ+2={}",
                aleph + 2
            ),
        });
    }
    Ok(aleph + (m - aleph - 2).div_ceil(2))
}

/// Walk-operator repetitions for phase estimation: `I = ⌈πλ/(2ε_QPE)⌉`.
pub fn qpe_iterations(lambda: f64, eps_qpe: f64) -> Result<u64> {
    if !(eps_qpe > 0.0) || !eps_qpe.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eps_qpe",
            message: format!("phase-estimation budget must be positive, got {eps_qpe}"),
        });
    }
    let raw = (PI * lambda / (2.0 * eps_qpe)).ceil();
    if !raw.is_finite() || raw >= 9.22e18 {
        return Err(Error::InvalidParameter {
            name: "eps_qpe",
            message: "repetition count overflows; budget too small for this one-norm".into(),
        });
    }
    Ok(raw.max(1.0) as u64)
}

/// Smallest keep-probability width with `λ·2^{−ℵ} ≤ ε_prep`: representing
/// every coefficient to relative precision 2^{−ℵ} perturbs the encoded
/// operator by at most λ·2^{−ℵ}.
pub fn choose_aleph(lambda: f64, eps_prep: f64) -> Result<u32> {
    if !(eps_prep > 0.0) || !eps_prep.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eps_prep",
            message: format!(
                "cannot auto-select keep-probability bits from a non-positive budget ({eps_prep}); set them explicitly"
            ),
        });
    }
    for aleph in 1..=128u32 {
        if lambda * 2f64.powi(-(aleph as i32)) <= eps_prep {
            return Ok(aleph);
        }
    }
    Err(Error::InvalidParameter {
        name: "eps_prep",
        message: "budget requires more than 128 keep-probability bits".into(),
    })
}

/// Evaluate the complete cost model for a term list.
pub fn estimate(s: &SparseLcu, params: &CostParams) -> Result<ResourceEstimate> {
    let lambda = s.lambda();
    if s.is_empty() || !(lambda > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let n = s.n_electrons as u64;
    let m_register = s.m as u64;
    let l = s.len() as u64;
    if params.b_l == 0 || params.b_n == 0 {
        return Err(Error::InvalidParameter {
            name: "b_l",
            message: "rotation precision bits must be at least 1".into(),
        });
    }

    let i_repetitions = qpe_iterations(lambda, params.budget.eps_qpe)?;

    let aleph = match params.aleph {
        Some(a) if a >= 1 => a,
        Some(_) => {
            return Err(Error::InvalidParameter {
                name: "aleph",
                message: "keep-probability bits must be at least 1".into(),
            })
        }
        None => choose_aleph(lambda, params.budget.eps_prep)?,
    };
    // QROM output bits: ℵ keep bits plus index/sign pairs for each register
    // pattern — four patterns in general, three when the interaction is
    // pure Z.
    let indices = match s.kind {
        SparseKind::General => 4,
        SparseKind::Diagonal => 3,
    };
    let m_bits = aleph as u64 + 2 * (indices * m_register + 1);

    let (kappa1_opt, kappa2_opt) = optimize_kappa(l, m_bits, params.mode)?;
    let kappa1 = match params.kappa1 {
        Some(k) => {
            require_power_of_two("kappa1", k)?;
            k
        }
        None => kappa1_opt,
    };
    let kappa2 = match params.kappa2 {
        Some(k) => {
            require_power_of_two("kappa2", k)?;
            k
        }
        None => kappa2_opt,
    };

    let (prep_l_toff, prep_l_qubits) = equal_superposition_cost(l, params.b_l)?;
    let (prep_n_toff, prep_n_qubits) = pair_superposition_cost(n, params.b_n)?;
    let (qroam_toff, qroam_qubits) = qroam_cost(l, m_bits, kappa1)?;
    let alias_toff = alias_sampling_cost(m_bits, aleph)?;
    let select_toff = select_cost(n, m_register, s.kind)?;
    let unprep_qroam_toff = qroam_uncompute_cost(l, kappa2)?;
    let reflection_toff =
        ceil_log2(l) as u64 + 2 * ceil_log2(n) as u64 + 2;
    let qpe_log = ceil_log2(i_repetitions + 1) as u64;

    let rows = vec![
        CostRow {
            label: "system register",
            toffolis: 0,
            qubits: n * m_register,
        },
        CostRow {
            label: "PREP equal superposition over terms",
            toffolis: prep_l_toff,
            qubits: prep_l_qubits,
        },
        CostRow {
            label: "PREP equal superposition over electron pairs",
            toffolis: prep_n_toff,
            qubits: prep_n_qubits,
        },
        CostRow {
            label: "PREP data lookup via QROAM",
            toffolis: qroam_toff,
            qubits: qroam_qubits,
        },
        CostRow {
            label: "PREP coherent alias sampling",
            toffolis: alias_toff,
            qubits: 0,
        },
        CostRow {
            label: "SELECT",
            toffolis: select_toff,
            qubits: 0,
        },
        CostRow {
            label: "UNPREP coherent alias sampling",
            toffolis: 0,
            qubits: 0,
        },
        CostRow {
            label: "UNPREP data lookup via QROAM",
            toffolis: unprep_qroam_toff,
            qubits: 0,
        },
        CostRow {
            label: "UNPREP equal superpositions",
            toffolis: prep_l_toff + prep_n_toff,
            qubits: 0,
        },
        CostRow {
            label: "reflection",
            toffolis: reflection_toff,
            qubits: 0,
        },
        CostRow {
            label: "QPE phase estimation ancillas",
            toffolis: 0,
            qubits: qpe_log,
        },
        CostRow {
            label: "QPE unary iteration over walk operator",
            toffolis: 1,
            qubits: qpe_log.saturating_sub(1),
        },
        CostRow {
            label: "QPE make reflection controlled",
            toffolis: 1,
            qubits: 0,
        },
    ];

    let per_step_toffoli: u64 = rows.iter().map(|r| r.toffolis).sum();
    let logical_qubits: u64 = rows.iter().map(|r| r.qubits).sum();
    let total_toffoli = per_step_toffoli as u128 * i_repetitions as u128;

    Ok(ResourceEstimate {
        rows,
        i_repetitions,
        per_step_toffoli,
        total_toffoli,
        logical_qubits,
        lambda,
        l_terms: l,
        m_bits,
        aleph,
        kappa1,
        kappa2,
        mode: params.mode,
        kind: s.kind,
        budget: params.budget,
        n_electrons: s.n_electrons,
        d: s.d,
    })
}
