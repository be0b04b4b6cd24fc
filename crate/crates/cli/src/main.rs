//! Command-line front end: decompose Hamiltonians over Pauli products,
//! estimate fault-tolerant resources, sweep instance families, and verify
//! decompositions against dense reconstruction.
//!
//! Conventions: stdout carries data (keyed reports and CSV), stderr carries
//! diagnostics; identical invocations produce byte-identical output. Exit
//! codes: 0 success, 1 failed verification, 2 unreadable or invalid input,
//! 3 zero-norm instance, 4 dense-verification size guard. The
//! `FQLCU_THREADS` environment variable caps the worker pool.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqlcu_core::error::Error;
use fqlcu_core::estimator::{
    estimate, split_error_budget, BudgetScheme, CostParams, Mode, ResourceEstimate,
};
use fqlcu_core::hamiltonian::{
    gen_material_dpw, gen_random_dense, gen_random_diagonal, gen_ueg_dpw, CellSpec,
    DiagonalHamiltonian, GeneralHamiltonian, PointCharge,
};
use fqlcu_core::report::{self, ScanRow};
use fqlcu_core::sparse::{
    assemble_diagonal, assemble_general, truncate, SparseKind, SparseLcu,
};
use fqlcu_core::verify::{verify_diagonal, verify_general};
use fqlcu_core::{decompose_diagonal, decompose_general, fcidump, norm_breakdown};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "fqlcu",
    about = "Pauli LCU decompositions and qubitized phase-estimation costs \
             for first-quantized chemistry Hamiltonians",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decompose a Hamiltonian and print the expansion summary.
    Decompose(DecomposeArgs),
    /// Assemble the term list and print the full cost report.
    Estimate(EstimateArgs),
    /// Sweep an instance family and print one CSV row per instance.
    Scan(ScanArgs),
    /// Reconstruct the dense operator and check it against direct
    /// construction (small instances only).
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Minimize Toffoli count (wider QROAM lookups).
    MinT,
    /// Minimize logical qubits (serial lookups).
    MinQu,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::MinT => Mode::MinT,
            ModeArg::MinQu => Mode::MinQu,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    /// Follow the term-list kind: molecular for general, dpw for diagonal.
    Auto,
    /// 10/16 phase estimation, 3/16 truncation, residual preparation.
    Molecular,
    /// 15.8/16 phase estimation, no truncation share.
    Dpw,
}

impl SchemeArg {
    fn resolve(self, kind: SparseKind) -> BudgetScheme {
        match self {
            SchemeArg::Auto => match kind {
                SparseKind::General => BudgetScheme::Molecular,
                SparseKind::Diagonal => BudgetScheme::Dpw,
            },
            SchemeArg::Molecular => BudgetScheme::Molecular,
            SchemeArg::Dpw => BudgetScheme::Dpw,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SystemArg {
    /// Seeded random dense integrals; sweeps `--dims`.
    RandomDense,
    /// One row per `--fcidump` path.
    Fcidump,
    /// Uniform electron gas in the dual plane-wave basis; sweeps `--grids`.
    Ueg,
    /// UEG cell plus point charges; sweeps `--grids`.
    Material,
}

/// Input selection shared by decompose, estimate, and verify.
#[derive(Args, Debug)]
struct SourceArgs {
    /// Load general integrals from an FCIDUMP file.
    #[arg(long, value_name = "PATH")]
    fcidump: Option<PathBuf>,
    /// Seeded random source (implied when --dim is given).
    #[arg(long)]
    random: bool,
    /// Use the diagonal-interaction pipeline for random sources.
    #[arg(long)]
    diag: bool,
    /// Uniform electron gas in the dual plane-wave basis (needs --grid).
    #[arg(long)]
    ueg: bool,
    /// Material cell: UEG kinetic/Coulomb plus point charges (needs --grid
    /// and --charge).
    #[arg(long)]
    material: bool,
    /// Basis dimension per electron (power of two) for random sources.
    #[arg(long, value_name = "D")]
    dim: Option<usize>,
    /// Plane-wave grid side; the basis dimension is its cube.
    #[arg(long, value_name = "SIDE")]
    grid: Option<usize>,
    /// Electron count (default 2; FCIDUMP sources default to their NELEC).
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// RNG seed for random sources.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wigner-Seitz radius in Bohr for --ueg cells.
    #[arg(long, default_value_t = 5.0, value_name = "BOHR")]
    rs: f64,
    /// Cell volume in Bohr^3 (overrides the --rs-derived volume).
    #[arg(long, value_name = "BOHR3")]
    volume: Option<f64>,
    /// Point charge as Z@x,y,z in Bohr; repeatable.
    #[arg(long = "charge", value_name = "Z@X,Y,Z", value_parser = parse_charge)]
    charges: Vec<PointCharge>,
}

enum Source {
    General(GeneralHamiltonian, usize),
    Diagonal(DiagonalHamiltonian, usize),
}

fn invalid(name: &'static str, message: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        message: message.into(),
    }
}

fn parse_charge(raw: &str) -> Result<PointCharge, String> {
    let (z, pos) = raw
        .split_once('@')
        .ok_or_else(|| format!("expected Z@x,y,z, got {raw:?}"))?;
    let charge: f64 = z.trim().parse().map_err(|_| format!("bad charge {z:?}"))?;
    let coords: Vec<f64> = pos
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad coordinate {c:?}")))
        .collect::<Result<_, _>>()?;
    if coords.len() != 3 {
        return Err(format!("expected three coordinates, got {}", coords.len()));
    }
    Ok(PointCharge {
        position: [coords[0], coords[1], coords[2]],
        charge,
    })
}

impl SourceArgs {
    fn resolve(&self) -> Result<Source, Error> {
        if let Some(path) = &self.fcidump {
            let dump = fcidump::load(path)?;
            let n = self.n.unwrap_or(dump.n_electrons);
            return Ok(Source::General(dump.hamiltonian, n));
        }
        if self.ueg || self.material || self.grid.is_some() {
            let side = self
                .grid
                .ok_or_else(|| invalid("grid", "a plane-wave source needs --grid"))?;
            let n = self.n.unwrap_or(2);
            let cell = match self.volume {
                Some(v) => CellSpec::with_volume(n, v, side)?,
                None => CellSpec::ueg(n, self.rs, side)?,
            };
            let h = if self.material || !self.charges.is_empty() {
                if self.charges.is_empty() {
                    return Err(invalid("charge", "--material needs at least one --charge"));
                }
                gen_material_dpw(&cell, &self.charges)?
            } else {
                gen_ueg_dpw(&cell)?
            };
            return Ok(Source::Diagonal(h, n));
        }
        if let Some(d) = self.dim {
            let n = self.n.unwrap_or(2);
            return Ok(if self.diag {
                Source::Diagonal(gen_random_diagonal(d, self.seed)?, n)
            } else {
                Source::General(gen_random_dense(d, self.seed)?, n)
            });
        }
        Err(invalid(
            "source",
            "no input selected; pass --fcidump, --dim, --grid/--ueg, or --material",
        ))
    }
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Write the full coefficient dump as CSV.
    #[arg(long, value_name = "PATH")]
    coefficients: Option<PathBuf>,
    /// Write the assembled term list in the packed binary format.
    #[arg(long, value_name = "PATH")]
    binary: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Read an assembled term list (a `decompose --binary` file) instead of
    /// integrals.
    #[arg(long, value_name = "PATH")]
    terms: Option<PathBuf>,
    /// Total phase-estimation error budget in Hartree.
    #[arg(long, value_name = "HA", allow_negative_numbers = true)]
    eps_tot: f64,
    /// How to split the budget across circuit error sources.
    #[arg(long, value_enum, default_value_t = SchemeArg::Auto)]
    scheme: SchemeArg,
    /// Space/time trade-off for the QROAM lookups.
    #[arg(long, value_enum, default_value_t = ModeArg::MinT)]
    mode: ModeArg,
    /// Drop the smallest coefficients within this one-norm budget (Hartree)
    /// before costing.
    #[arg(long, value_name = "HA", allow_negative_numbers = true)]
    trunc_budget: Option<f64>,
    /// Rotation precision bits for the term superposition.
    #[arg(long, default_value_t = 8, value_name = "BITS")]
    b_l: u32,
    /// Rotation precision bits for the electron-pair superposition.
    #[arg(long, default_value_t = 8, value_name = "BITS")]
    b_n: u32,
    /// Keep-probability bits override (chosen from the budget when unset).
    #[arg(long, value_name = "BITS")]
    aleph: Option<u32>,
    /// QROAM lookup width override (power of two).
    #[arg(long, value_name = "K")]
    kappa1: Option<u64>,
    /// QROAM uncompute width override (power of two).
    #[arg(long, value_name = "K")]
    kappa2: Option<u64>,
    /// Emit the single-row CSV form instead of the keyed report.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Which family of instances to sweep.
    #[arg(long, value_enum)]
    system: SystemArg,
    /// Basis dimensions for random-dense (comma separated powers of two).
    #[arg(long, value_delimiter = ',', value_name = "D,...")]
    dims: Vec<usize>,
    /// Grid sides for ueg/material; the dimension is each side cubed.
    #[arg(long, value_delimiter = ',', value_name = "SIDE,...")]
    grids: Vec<usize>,
    /// Seeds for random-dense; one row per (dimension, seed).
    #[arg(long, value_delimiter = ',', default_value = "1", value_name = "S,...")]
    seeds: Vec<u64>,
    /// FCIDUMP paths for --system fcidump; one row each.
    #[arg(long = "fcidump", value_name = "PATH")]
    fcidumps: Vec<PathBuf>,
    /// Electron count (FCIDUMP rows default to their NELEC).
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// Wigner-Seitz radius in Bohr for ueg cells.
    #[arg(long, default_value_t = 5.0, value_name = "BOHR")]
    rs: f64,
    /// Cell volume in Bohr^3 (overrides the --rs-derived volume).
    #[arg(long, value_name = "BOHR3")]
    volume: Option<f64>,
    /// Point charge as Z@x,y,z in Bohr; repeatable (material only).
    #[arg(long = "charge", value_name = "Z@X,Y,Z", value_parser = parse_charge)]
    charges: Vec<PointCharge>,
    /// Total phase-estimation error budget in Hartree.
    #[arg(long, default_value_t = 1e-3, value_name = "HA", allow_negative_numbers = true)]
    eps_tot: f64,
    /// How to split the budget across circuit error sources.
    #[arg(long, value_enum, default_value_t = SchemeArg::Auto)]
    scheme: SchemeArg,
    /// Space/time trade-off for the QROAM lookups.
    #[arg(long, value_enum, default_value_t = ModeArg::MinT)]
    mode: ModeArg,
    /// Write the CSV to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Max-abs tolerance for reconstruction and spectrum agreement.
    #[arg(long, default_value_t = 1e-10, value_name = "TOL")]
    tol: f64,
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<u8, Error> {
    match args.source.resolve()? {
        Source::General(h, n) => {
            let lcu = decompose_general(&h, n)?;
            print!("{}", report::decompose_report_general(&lcu));
            if let Some(path) = &args.coefficients {
                fs::write(path, report::coefficients_csv_general(&lcu))
                    .map_err(|e| Error::io(path, e))?;
            }
            if let Some(path) = &args.binary {
                assemble_general(&lcu).write_binary(path)?;
            }
        }
        Source::Diagonal(h, n) => {
            let lcu = decompose_diagonal(&h, n)?;
            let nb = norm_breakdown(&h, &lcu)?;
            print!("{}", report::decompose_report_diagonal(&lcu, &nb));
            if let Some(path) = &args.coefficients {
                fs::write(path, report::coefficients_csv_diagonal(&lcu))
                    .map_err(|e| Error::io(path, e))?;
            }
            if let Some(path) = &args.binary {
                assemble_diagonal(&lcu).write_binary(path)?;
            }
        }
    }
    Ok(0)
}

fn cmd_estimate(args: &EstimateArgs) -> Result<u8, Error> {
    let sparse = match &args.terms {
        Some(path) => SparseLcu::read_binary(path)?,
        None => match args.source.resolve()? {
            Source::General(h, n) => assemble_general(&decompose_general(&h, n)?),
            Source::Diagonal(h, n) => assemble_diagonal(&decompose_diagonal(&h, n)?),
        },
    };
    let budget = split_error_budget(args.eps_tot, args.scheme.resolve(sparse.kind))?;
    let (sparse, trunc) = match args.trunc_budget {
        Some(b) => {
            let (kept, t) = truncate(&sparse, b);
            (kept, Some(t))
        }
        None => (sparse, None),
    };
    let params = CostParams {
        b_l: args.b_l,
        b_n: args.b_n,
        aleph: args.aleph,
        kappa1: args.kappa1,
        kappa2: args.kappa2,
        ..CostParams::new(args.mode.into(), budget)
    };
    let est = estimate(&sparse, &params)?;
    if args.csv {
        print!("{}", report::estimate_csv(&est));
    } else {
        print!("{}", report::estimate_report(&est, trunc.as_ref()));
    }
    Ok(0)
}

fn estimate_for_scan(sparse: &SparseLcu, args: &ScanArgs) -> Result<ResourceEstimate, Error> {
    let budget = split_error_budget(args.eps_tot, args.scheme.resolve(sparse.kind))?;
    estimate(sparse, &CostParams::new(args.mode.into(), budget))
}

fn cmd_scan(args: &ScanArgs) -> Result<u8, Error> {
    let mut rows: Vec<ScanRow> = Vec::new();
    match args.system {
        SystemArg::RandomDense => {
            if args.dims.is_empty() {
                return Err(invalid("dims", "--system random-dense needs --dims"));
            }
            let n = args.n.unwrap_or(2);
            for &d in &args.dims {
                for &seed in &args.seeds {
                    let h = gen_random_dense(d, seed)?;
                    let lcu = decompose_general(&h, n)?;
                    let sparse = assemble_general(&lcu);
                    let est = estimate_for_scan(&sparse, args)?;
                    rows.push(ScanRow {
                        d,
                        seed,
                        lambda_one: lcu.lambda_one(),
                        lambda_two: lcu.lambda_two(),
                        tuv: None,
                        l_terms: sparse.len(),
                        nnz_two: lcu.raw_two_nnz,
                        toffoli: est.total_toffoli,
                        qubits: est.logical_qubits,
                    });
                }
            }
        }
        SystemArg::Ueg | SystemArg::Material => {
            if args.grids.is_empty() {
                return Err(invalid("grids", "a plane-wave scan needs --grids"));
            }
            let material = matches!(args.system, SystemArg::Material);
            if material && args.charges.is_empty() {
                return Err(invalid("charge", "--system material needs at least one --charge"));
            }
            let n = args.n.unwrap_or(2);
            for &side in &args.grids {
                let cell = match args.volume {
                    Some(v) => CellSpec::with_volume(n, v, side)?,
                    None => CellSpec::ueg(n, args.rs, side)?,
                };
                let h = if material {
                    gen_material_dpw(&cell, &args.charges)?
                } else {
                    gen_ueg_dpw(&cell)?
                };
                let lcu = decompose_diagonal(&h, n)?;
                let nb = norm_breakdown(&h, &lcu)?;
                let sparse = assemble_diagonal(&lcu);
                let est = estimate_for_scan(&sparse, args)?;
                rows.push(ScanRow {
                    d: cell.d(),
                    // Plane-wave cells are deterministic; the seed column is
                    // fixed at zero.
                    seed: 0,
                    lambda_one: lcu.lambda_one(),
                    lambda_two: lcu.lambda_two(),
                    tuv: Some((nb.lambda_t, nb.lambda_u, nb.lambda_v)),
                    l_terms: sparse.len(),
                    nnz_two: lcu.raw_gamma_nnz,
                    toffoli: est.total_toffoli,
                    qubits: est.logical_qubits,
                });
            }
        }
        SystemArg::Fcidump => {
            if args.fcidumps.is_empty() {
                return Err(invalid("fcidump", "--system fcidump needs at least one --fcidump"));
            }
            for path in &args.fcidumps {
                let dump = fcidump::load(path)?;
                let n = args.n.unwrap_or(dump.n_electrons);
                let lcu = decompose_general(&dump.hamiltonian, n)?;
                let sparse = assemble_general(&lcu);
                let est = estimate_for_scan(&sparse, args)?;
                rows.push(ScanRow {
                    d: dump.hamiltonian.d,
                    seed: 0,
                    lambda_one: lcu.lambda_one(),
                    lambda_two: lcu.lambda_two(),
                    tuv: None,
                    l_terms: sparse.len(),
                    nnz_two: lcu.raw_two_nnz,
                    toffoli: est.total_toffoli,
                    qubits: est.logical_qubits,
                });
            }
        }
    }
    if report::scan_exponents(&rows).is_none() {
        eprintln!("warning: fit skipped: fewer than two distinct dimensions");
    }
    let text = report::scan_csv(&rows);
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Error> {
    let (result, kind) = match args.source.resolve()? {
        Source::General(h, n) => (verify_general(&h, n, args.tol)?, SparseKind::General),
        Source::Diagonal(h, n) => (verify_diagonal(&h, n, args.tol)?, SparseKind::Diagonal),
    };
    print!("{}", report::verify_report(&result, kind));
    Ok(if result.passed { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::Decompose(args) => cmd_decompose(args),
        Cmd::Estimate(args) => cmd_estimate(args),
        Cmd::Scan(args) => cmd_scan(args),
        Cmd::Verify(args) => cmd_verify(args),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::Format { .. }
        | Error::UnsupportedDimension { .. }
        | Error::InvalidElectronCount { .. }
        | Error::InvalidParameter { .. } => 2,
        Error::ZeroNorm => 3,
        Error::SizeGuard { .. } => 4,
    }
}

/// Apply the FQLCU_THREADS cap before any parallel work starts.
#[cfg(feature = "parallel")]
fn init_thread_pool() {
    let Ok(raw) = std::env::var("FQLCU_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(k) if k >= 1 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
                eprintln!("warning: could not apply FQLCU_THREADS={k}: {e}");
            }
        }
        _ => eprintln!("warning: ignoring FQLCU_THREADS={raw:?}: expected a positive integer"),
    }
}

#[cfg(not(feature = "parallel"))]
fn init_thread_pool() {}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
