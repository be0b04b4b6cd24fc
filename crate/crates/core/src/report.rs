//! Machine-readable renderings: keyed-text reports, coefficient dumps, and
//! scan CSV assembly.
//!
//! Every keyed-text report opens with the same versioned first line and every
//! CSV dump with a versioned `#` comment, so downstream scripts can detect
//! format drift. Floating-point values are printed with 17 significant
//! digits (lossless for doubles), and each rendering is a deterministic
//! function of its input, byte for byte.

use crate::diagonal::{DiagonalLcu, NormBreakdown};
use crate::estimator::ResourceEstimate;
use crate::pauli::CanonicalLcu;
use crate::sparse::{unpack_key, SparseKind, SparseLcu, TruncationReport};
use crate::verify::{power_law_fit, VerificationReport};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// First line of every keyed-text report.
pub const REPORT_VERSION_LINE: &str = "fqlcu_report,1";

fn fmt_f(v: f64) -> String {
    // Empty float sums produce −0.0; adding +0.0 normalizes the sign without
    // touching any other value, so reports never print "-0".
    format!("{:.16e}", v + 0.0)
}

/// Decomposition summary for a dense-kind expansion.
pub fn decompose_report_general(lcu: &CanonicalLcu) -> String {
    let mut out = String::new();
    let s = lcu.summary();
    out.push_str(REPORT_VERSION_LINE);
    out.push('\n');
    out.push_str("report_kind,decompose\n");
    out.push_str("kind,general\n");
    writeln!(out, "d,{}", s.d).unwrap();
    writeln!(out, "m,{}", s.m).unwrap();
    writeln!(out, "n_electrons,{}", s.n_electrons).unwrap();
    writeln!(out, "terms_one,{}", s.terms_one).unwrap();
    writeln!(out, "terms_two,{}", s.terms_two).unwrap();
    writeln!(out, "l_terms,{}", s.terms_one + s.terms_two).unwrap();
    writeln!(out, "raw_two_nnz,{}", lcu.raw_two_nnz).unwrap();
    writeln!(out, "nnz_two_unique,{}", lcu.raw_two_unique).unwrap();
    writeln!(out, "exchange_symmetric,{}", lcu.exchange_symmetric).unwrap();
    writeln!(out, "lambda_one,{}", fmt_f(s.lambda_one)).unwrap();
    writeln!(out, "lambda_two,{}", fmt_f(s.lambda_two)).unwrap();
    writeln!(out, "lambda_total,{}", fmt_f(s.lambda_total)).unwrap();
    writeln!(out, "identity_shift,{}", fmt_f(s.identity_shift)).unwrap();
    out
}

/// Decomposition summary for a diagonal-kind expansion, with the per-source
/// norm attribution.
pub fn decompose_report_diagonal(lcu: &DiagonalLcu, nb: &NormBreakdown) -> String {
    let mut out = String::new();
    let s = lcu.summary();
    out.push_str(REPORT_VERSION_LINE);
    out.push('\n');
    out.push_str("report_kind,decompose\n");
    out.push_str("kind,diagonal\n");
    writeln!(out, "d,{}", s.d).unwrap();
    writeln!(out, "m,{}", s.m).unwrap();
    writeln!(out, "n_electrons,{}", s.n_electrons).unwrap();
    writeln!(out, "terms_one,{}", s.terms_one).unwrap();
    writeln!(out, "terms_two,{}", s.terms_two).unwrap();
    writeln!(out, "l_terms,{}", s.terms_one + s.terms_two).unwrap();
    writeln!(out, "raw_gamma_nnz,{}", lcu.raw_gamma_nnz).unwrap();
    writeln!(out, "lambda_t,{}", fmt_f(nb.lambda_t)).unwrap();
    writeln!(out, "lambda_u,{}", fmt_f(nb.lambda_u)).unwrap();
    writeln!(out, "lambda_v,{}", fmt_f(nb.lambda_v)).unwrap();
    writeln!(out, "lambda_one,{}", fmt_f(s.lambda_one)).unwrap();
    writeln!(out, "lambda_two,{}", fmt_f(s.lambda_two)).unwrap();
    writeln!(out, "lambda_total,{}", fmt_f(s.lambda_total)).unwrap();
    writeln!(out, "identity_shift,{}", fmt_f(s.identity_shift)).unwrap();
    out
}

/// Coefficient dump: `p,q,value` one-body lines and `p,q,r,s,value` two-body
/// lines, canonical key order, full double precision.
pub fn coefficients_csv_general(lcu: &CanonicalLcu) -> String {
    let mut out = String::new();
    out.push_str("# fqlcu coefficients v1\n# kind,general\n");
    writeln!(out, "# d,{}", lcu.d).unwrap();
    writeln!(out, "# n_electrons,{}", lcu.n_electrons).unwrap();
    writeln!(out, "# identity_shift,{}", fmt_f(lcu.identity_shift())).unwrap();
    out.push_str("# one-body: p,q,value\n");
    for (key, value) in lcu.one.iter() {
        writeln!(out, "{},{},{}", key.p, key.q, fmt_f(*value)).unwrap();
    }
    out.push_str("# two-body: p,q,r,s,value\n");
    for (key, value) in lcu.two.iter() {
        writeln!(out, "{},{},{},{},{}", key.p, key.q, key.r, key.s, fmt_f(value)).unwrap();
    }
    out
}

/// Coefficient dump for the diagonal kind: interaction lines carry the two
/// `Z`-string indices only.
pub fn coefficients_csv_diagonal(lcu: &DiagonalLcu) -> String {
    let mut out = String::new();
    out.push_str("# fqlcu coefficients v1\n# kind,diagonal\n");
    writeln!(out, "# d,{}", lcu.d).unwrap();
    writeln!(out, "# n_electrons,{}", lcu.n_electrons).unwrap();
    writeln!(out, "# identity_shift,{}", fmt_f(lcu.identity_shift())).unwrap();
    out.push_str("# one-body: p,q,value\n");
    for (key, value) in lcu.one.iter() {
        writeln!(out, "{},{},{}", key.p, key.q, fmt_f(*value)).unwrap();
    }
    out.push_str("# interaction: p,r,value\n");
    for (&(q, s), value) in lcu.gamma.iter() {
        writeln!(out, "{},{},{}", q, s, fmt_f(*value)).unwrap();
    }
    out
}

/// Dump of an assembled term list, one line per selectable term.
pub fn term_list_csv(s: &SparseLcu) -> String {
    let mut out = String::new();
    out.push_str("# fqlcu terms v1\n");
    writeln!(out, "# kind,{}", s.kind.label()).unwrap();
    writeln!(out, "# d,{}", s.d).unwrap();
    writeln!(out, "# m,{}", s.m).unwrap();
    writeln!(out, "# n_electrons,{}", s.n_electrons).unwrap();
    writeln!(out, "# identity_shift,{}", fmt_f(s.identity_shift)).unwrap();
    out.push_str("# p,q,r,s,value\n");
    for &(key, value) in s.entries() {
        let (p, q, r, ss) = unpack_key(key);
        writeln!(out, "{},{},{},{},{}", p, q, r, ss, fmt_f(value)).unwrap();
    }
    out
}

/// Full cost-model report: inputs, derived quantities, one line per circuit
/// element, and the totals.
pub fn estimate_report(est: &ResourceEstimate, trunc: Option<&TruncationReport>) -> String {
    let mut out = String::new();
    out.push_str(REPORT_VERSION_LINE);
    out.push('\n');
    out.push_str("report_kind,estimate\n");
    writeln!(out, "kind,{}", est.kind.label()).unwrap();
    writeln!(out, "mode,{}", est.mode.label()).unwrap();
    writeln!(out, "n_electrons,{}", est.n_electrons).unwrap();
    writeln!(out, "m,{}", est.m_register()).unwrap();
    writeln!(out, "d,{}", est.d).unwrap();
    writeln!(out, "l_terms,{}", est.l_terms).unwrap();
    writeln!(out, "lambda,{}", fmt_f(est.lambda)).unwrap();
    writeln!(out, "eps_tot,{}", fmt_f(est.budget.eps_tot)).unwrap();
    writeln!(out, "eps_qpe,{}", fmt_f(est.budget.eps_qpe)).unwrap();
    writeln!(out, "eps_trunc,{}", fmt_f(est.budget.eps_trunc)).unwrap();
    writeln!(out, "eps_prep,{}", fmt_f(est.budget.eps_prep)).unwrap();
    writeln!(out, "aleph,{}", est.aleph).unwrap();
    writeln!(out, "m_bits,{}", est.m_bits).unwrap();
    writeln!(out, "kappa1,{}", est.kappa1).unwrap();
    writeln!(out, "kappa2,{}", est.kappa2).unwrap();
    writeln!(out, "iterations,{}", est.i_repetitions).unwrap();
    if let Some(t) = trunc {
        writeln!(out, "trunc_removed_terms,{}", t.removed_terms).unwrap();
        writeln!(out, "trunc_removed_weight,{}", fmt_f(t.removed_weight)).unwrap();
        writeln!(out, "trunc_budget,{}", fmt_f(t.budget)).unwrap();
    }
    for row in &est.rows {
        writeln!(out, "row,{},{},{}", row.label, row.toffolis, row.qubits).unwrap();
    }
    writeln!(out, "per_step_toffoli,{}", est.per_step_toffoli).unwrap();
    writeln!(out, "total_toffoli,{}", est.total_toffoli).unwrap();
    writeln!(out, "logical_qubits,{}", est.logical_qubits).unwrap();
    out
}

/// Single-row CSV form of an estimate, for aggregation across runs.
pub fn estimate_csv(est: &ResourceEstimate) -> String {
    let mut out = String::new();
    out.push_str("# fqlcu estimate v1\n");
    out.push_str(
        "# kind,mode,n,m,d,l_terms,lambda,aleph,m_bits,kappa1,kappa2,iterations,per_step_toffoli,total_toffoli,logical_qubits\n",
    );
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        est.kind.label(),
        est.mode.label(),
        est.n_electrons,
        est.m_register(),
        est.d,
        est.l_terms,
        fmt_f(est.lambda),
        est.aleph,
        est.m_bits,
        est.kappa1,
        est.kappa2,
        est.i_repetitions,
        est.per_step_toffoli,
        est.total_toffoli,
        est.logical_qubits
    )
    .unwrap();
    out
}

/// Verification outcome as a keyed report; one `check,…` line per invariant.
pub fn verify_report(r: &VerificationReport, kind: SparseKind) -> String {
    let mut out = String::new();
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    out.push_str(REPORT_VERSION_LINE);
    out.push('\n');
    out.push_str("report_kind,verify\n");
    writeln!(out, "kind,{}", kind.label()).unwrap();
    writeln!(out, "n_electrons,{}", r.n_electrons).unwrap();
    writeln!(out, "m,{}", r.m).unwrap();
    writeln!(out, "qubits,{}", r.qubits).unwrap();
    writeln!(out, "dim,{}", r.dim).unwrap();
    writeln!(out, "tolerance,{}", fmt_f(r.tolerance)).unwrap();
    writeln!(
        out,
        "check,canonical_reconstruction,{},{}",
        fmt_f(r.canonical_max_diff),
        verdict(r.canonical_max_diff <= r.tolerance)
    )
    .unwrap();
    writeln!(
        out,
        "check,term_list_reconstruction,{},{}",
        fmt_f(r.sparse_max_diff),
        verdict(r.sparse_max_diff <= r.tolerance)
    )
    .unwrap();
    let ground_diff = (r.ground_direct - r.ground_reconstructed).abs();
    writeln!(
        out,
        "check,ground_energy_agreement,{},{}",
        fmt_f(ground_diff),
        verdict(ground_diff <= r.tolerance)
    )
    .unwrap();
    writeln!(
        out,
        "check,spectral_bound,{},{}",
        fmt_f(r.spectral_radius),
        verdict(r.spectral_bound_ok)
    )
    .unwrap();
    writeln!(out, "ground_direct,{}", fmt_f(r.ground_direct)).unwrap();
    writeln!(out, "ground_reconstructed,{}", fmt_f(r.ground_reconstructed)).unwrap();
    writeln!(out, "lambda,{}", fmt_f(r.lambda)).unwrap();
    writeln!(out, "identity_shift,{}", fmt_f(r.shift)).unwrap();
    writeln!(out, "verdict,{}", verdict(r.passed)).unwrap();
    out
}

/// One scan measurement: a decomposition plus its cost estimate at one
/// basis dimension and seed.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub d: usize,
    pub seed: u64,
    pub lambda_one: f64,
    pub lambda_two: f64,
    /// Per-source norm attribution; present for diagonal-kind rows only.
    pub tuv: Option<(f64, f64, f64)>,
    /// Selectable terms in the assembled list.
    pub l_terms: usize,
    /// Stored nonzero coefficients of the raw pair-term expansion.
    pub nnz_two: usize,
    pub toffoli: u128,
    pub qubits: u64,
}

/// Fixed scan column set, versioned alongside the CSV header.
pub const SCAN_CSV_COLUMNS: &str =
    "d,seed,lambda_1,lambda_2,lambda_t,lambda_u,lambda_v,l_terms,nnz_two,toffoli,qubits";

/// Power-law exponents fitted per column over the final three dimensions
/// (rows averaged per dimension first). Returns `None` when fewer than two
/// distinct dimensions are present; a column entry is `None` when its values
/// do not support a fit (zero or absent).
#[allow(clippy::type_complexity)]
pub fn scan_exponents(rows: &[ScanRow]) -> Option<Vec<(&'static str, Option<(f64, f64)>)>> {
    let mut by_d: BTreeMap<usize, Vec<&ScanRow>> = BTreeMap::new();
    for row in rows {
        by_d.entry(row.d).or_default().push(row);
    }
    if by_d.len() < 2 {
        return None;
    }
    let ds: Vec<usize> = by_d.keys().copied().collect();
    let tail: Vec<usize> = ds[ds.len().saturating_sub(3)..].to_vec();
    let xs: Vec<f64> = tail.iter().map(|&d| d as f64).collect();

    let columns: Vec<(&'static str, fn(&ScanRow) -> f64)> = vec![
        ("lambda_1", |r| r.lambda_one),
        ("lambda_2", |r| r.lambda_two),
        ("lambda_t", |r| r.tuv.map_or(f64::NAN, |t| t.0)),
        ("lambda_u", |r| r.tuv.map_or(f64::NAN, |t| t.1)),
        ("lambda_v", |r| r.tuv.map_or(f64::NAN, |t| t.2)),
        ("l_terms", |r| r.l_terms as f64),
        ("nnz_two", |r| r.nnz_two as f64),
        ("toffoli", |r| r.toffoli as f64),
        ("qubits", |r| r.qubits as f64),
    ];
    Some(
        columns
            .into_iter()
            .map(|(name, f)| {
                let ys: Vec<f64> = tail
                    .iter()
                    .map(|d| {
                        let group = &by_d[d];
                        group.iter().map(|r| f(r)).sum::<f64>() / group.len() as f64
                    })
                    .collect();
                (name, power_law_fit(&xs, &ys).ok())
            })
            .collect(),
    )
}

/// Render scan rows as versioned CSV with the fitted-exponent block appended
/// as trailing comments.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::new();
    out.push_str("# fqlcu scan v1\n");
    writeln!(out, "# {SCAN_CSV_COLUMNS}").unwrap();
    for r in rows {
        let (t, u, v) = match r.tuv {
            Some((t, u, v)) => (fmt_f(t), fmt_f(u), fmt_f(v)),
            None => (String::new(), String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.d,
            r.seed,
            fmt_f(r.lambda_one),
            fmt_f(r.lambda_two),
            t,
            u,
            v,
            r.l_terms,
            r.nnz_two,
            r.toffoli,
            r.qubits
        )
        .unwrap();
    }
    match scan_exponents(rows) {
        None => out.push_str("# fit skipped: fewer than two distinct dimensions\n"),
        Some(fits) => {
            out.push_str("# power-law fit over the final three dimensions: column,exponent,prefactor\n");
            for (name, fit) in fits {
                match fit {
                    Some((exponent, prefactor)) => {
                        writeln!(out, "# fit,{},{},{}", name, fmt_f(exponent), fmt_f(prefactor))
                            .unwrap();
                    }
                    None => writeln!(out, "# fit,{name},skipped,").unwrap(),
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonal::{decompose_diagonal, norm_breakdown};
    use crate::estimator::{estimate, split_error_budget, BudgetScheme, CostParams, Mode};
    use crate::hamiltonian::{gen_random_dense, DiagonalHamiltonian, SquareMatrix};
    use crate::pauli::decompose_general;
    use crate::sparse::assemble_general;

    fn sample_estimate() -> ResourceEstimate {
        let h = gen_random_dense(4, 3).unwrap();
        let lcu = decompose_general(&h, 3).unwrap();
        let sparse = assemble_general(&lcu);
        let budget = split_error_budget(1e-2, BudgetScheme::Molecular).unwrap();
        estimate(&sparse, &CostParams::new(Mode::MinT, budget)).unwrap()
    }

    #[test]
    fn keyed_reports_start_with_the_version_line() {
        let h = gen_random_dense(4, 3).unwrap();
        let lcu = decompose_general(&h, 3).unwrap();
        let est = sample_estimate();
        for text in [
            decompose_report_general(&lcu),
            estimate_report(&est, None),
        ] {
            assert!(text.starts_with("fqlcu_report,1\n"), "{text}");
        }
    }

    #[test]
    fn estimate_report_carries_all_rows_and_totals() {
        let est = sample_estimate();
        let text = estimate_report(&est, None);
        assert_eq!(text.lines().filter(|l| l.starts_with("row,")).count(), 13);
        assert!(text.contains(&format!("total_toffoli,{}\n", est.total_toffoli)));
        assert!(text.contains(&format!("logical_qubits,{}\n", est.logical_qubits)));
        assert!(text.contains("mode,min-t\n"));
        // Rendering is deterministic.
        assert_eq!(text, estimate_report(&est, None));
    }

    #[test]
    fn diagonal_coefficient_dump_is_frozen() {
        // The worked 2×2 oracle: ω′ = {(0,1): −0.5, (1,0): 2}, γ_11 = 1,
        // shift 6 at N = 2.
        let h = DiagonalHamiltonian::new(
            SquareMatrix::from_fn(2, |p, q| [[1.0, 2.0], [2.0, 3.0]][p][q]),
            SquareMatrix::zeros(2),
            SquareMatrix::from_fn(2, |p, q| [[4.0, 1.0], [1.0, 2.0]][p][q]),
        )
        .unwrap();
        let lcu = decompose_diagonal(&h, 2).unwrap();
        let expected = "\
# fqlcu coefficients v1
# kind,diagonal
# d,2
# n_electrons,2
# identity_shift,6.0000000000000000e0
# one-body: p,q,value
0,1,-5.0000000000000000e-1
1,0,2.0000000000000000e0
# interaction: p,r,value
1,1,1.0000000000000000e0
";
        assert_eq!(coefficients_csv_diagonal(&lcu), expected);

        let nb = norm_breakdown(&h, &lcu).unwrap();
        let report = decompose_report_diagonal(&lcu, &nb);
        assert!(report.contains("lambda_u,0.0000000000000000e0\n"));
        assert!(report.contains("l_terms,3\n"));
    }

    #[test]
    fn term_list_dump_lists_every_entry() {
        let h = gen_random_dense(4, 5).unwrap();
        let lcu = decompose_general(&h, 2).unwrap();
        let sparse = assemble_general(&lcu);
        let text = term_list_csv(&sparse);
        let data_lines = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(data_lines, sparse.len());
        assert!(text.starts_with("# fqlcu terms v1\n"));
    }

    fn synthetic_row(d: usize, lambda_one: f64, nnz: usize) -> ScanRow {
        ScanRow {
            d,
            seed: 1,
            lambda_one,
            lambda_two: (d as f64).powi(3),
            tuv: Some(((d as f64).sqrt(), 0.0, 2.0 * d as f64)),
            l_terms: d * d,
            nnz_two: nnz,
            toffoli: (d * d * d) as u128,
            qubits: d as u64,
        }
    }

    #[test]
    fn exponent_fit_uses_only_the_final_three_dimensions() {
        // First point far off trend; fit must ignore it.
        let rows = vec![
            synthetic_row(8, 1e9, 1),
            synthetic_row(16, 2.0 * 16.0 * 16.0, 16usize.pow(4)),
            synthetic_row(32, 2.0 * 32.0 * 32.0, 32usize.pow(4)),
            synthetic_row(64, 2.0 * 64.0 * 64.0, 64usize.pow(4)),
        ];
        let fits = scan_exponents(&rows).unwrap();
        let get = |name: &str| {
            fits.iter()
                .find(|(n, _)| *n == name)
                .and_then(|(_, f)| *f)
                .unwrap()
        };
        assert!((get("lambda_1").0 - 2.0).abs() < 1e-9);
        assert!((get("lambda_1").1 - 2.0).abs() < 1e-9);
        assert!((get("nnz_two").0 - 4.0).abs() < 1e-9);
        assert!((get("toffoli").0 - 3.0).abs() < 1e-9);
        assert!((get("qubits").0 - 1.0).abs() < 1e-9);
        // λ_U is identically zero → unfittable → skipped.
        let lambda_u = fits.iter().find(|(n, _)| *n == "lambda_u").unwrap();
        assert!(lambda_u.1.is_none());
    }

    #[test]
    fn scan_csv_renders_rows_fits_and_skip_notes() {
        let rows = vec![
            synthetic_row(8, 2.0 * 64.0, 8usize.pow(4)),
            synthetic_row(16, 2.0 * 256.0, 16usize.pow(4)),
            synthetic_row(32, 2.0 * 1024.0, 32usize.pow(4)),
        ];
        let text = scan_csv(&rows);
        assert!(text.starts_with("# fqlcu scan v1\n"));
        assert!(text.contains(SCAN_CSV_COLUMNS));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
        assert!(text.contains("# fit,nnz_two,"));
        assert!(text.contains("# fit,lambda_u,skipped,"));
        assert_eq!(text, scan_csv(&rows));

        let single = scan_csv(&rows[..1]);
        assert!(single.contains("# fit skipped: fewer than two distinct dimensions"));
    }

    #[test]
    fn general_rows_leave_attribution_columns_empty() {
        let mut row = synthetic_row(8, 1.0, 10);
        row.tuv = None;
        let text = scan_csv(&[row]);
        let data = text.lines().find(|l| !l.starts_with('#')).unwrap();
        let fields: Vec<&str> = data.split(',').collect();
        assert_eq!(fields.len(), 11);
        assert_eq!(fields[4], "");
        assert_eq!(fields[5], "");
        assert_eq!(fields[6], "");
    }
}
