//! Hamiltonian containers and model-system generators.
//!
//! Two shapes of input feed the decompositions:
//!
//! * [`GeneralHamiltonian`] — a one-body matrix plus a dense two-body tensor in
//!   chemists' index order, as produced by an FCIDUMP file or the random dense
//!   generator. All values are in Hartree.
//! * [`DiagonalHamiltonian`] — kinetic + external one-body matrices plus a
//!   two-body interaction that is diagonal in the chosen basis (a `D × D`
//!   matrix of pair energies), as produced by the dual-plane-wave generators.
//!
//! The basis dimension `D` must be a power of two so that each electron
//! register maps onto `M = log2 D` qubits.

use crate::error::{Error, Result};
use crate::exec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Largest supported basis dimension: indices must fit the 16-bit lanes of the
/// packed Pauli keys, i.e. `M` at most 16.
pub const MAX_DIMENSION: usize = 1 << 16;

/// Validate a basis dimension and return `M = log2 d`.
pub fn validate_dimension(d: usize) -> Result<u32> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "must be a power of two and at least 2",
        });
    }
    if d > MAX_DIMENSION {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "exceeds the 16-bit index range of the packed Pauli keys",
        });
    }
    Ok(d.trailing_zeros())
}

/// Dense row-major `d × d` matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    d: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// Zero matrix of dimension `d`.
    pub fn zeros(d: usize) -> Self {
        SquareMatrix {
            d,
            data: vec![0.0; d * d],
        }
    }

    /// Build entrywise from `f(row, col)`.
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SquareMatrix::zeros(d);
        for p in 0..d {
            for q in 0..d {
                m.data[p * d + q] = f(p, q);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.data[p * self.d + q]
    }

    #[inline]
    pub fn set(&mut self, p: usize, q: usize, value: f64) {
        self.data[p * self.d + q] = value;
    }

    #[inline]
    pub fn add(&mut self, p: usize, q: usize, value: f64) {
        self.data[p * self.d + q] += value;
    }

    pub fn row(&self, p: usize) -> &[f64] {
        &self.data[p * self.d..(p + 1) * self.d]
    }

    /// Entrywise sum with another matrix of the same dimension.
    pub fn plus(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.d, other.d, "dimension mismatch");
        SquareMatrix {
            d: self.d,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// True when the matrix equals its transpose bit for bit.
    pub fn is_symmetric(&self) -> bool {
        for p in 0..self.d {
            for q in (p + 1)..self.d {
                if self.get(p, q).to_bits() != self.get(q, p).to_bits() {
                    return false;
                }
            }
        }
        true
    }
}

/// Dense two-body tensor `h[p][q][r][s]` in chemists' order, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    d: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(d: usize) -> Self {
        Tensor4 {
            d,
            data: vec![0.0; d * d * d * d],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    fn idx(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.d + q) * self.d + r) * self.d + s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.idx(p, q, r, s)]
    }

    #[inline]
    pub fn set(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let i = self.idx(p, q, r, s);
        self.data[i] = value;
    }

    /// The eight images of an index quadruple under the real-orbital
    /// permutation symmetry (pq|rs) = (qp|rs) = (pq|sr) = (rs|pq) = ...
    pub fn eight_fold_images(
        p: usize,
        q: usize,
        r: usize,
        s: usize,
    ) -> [(usize, usize, usize, usize); 8] {
        [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ]
    }

    /// True when every entry equals all eight symmetry images bit for bit.
    pub fn is_eight_fold_symmetric(&self) -> bool {
        let d = self.d;
        for p in 0..d {
            for q in 0..d {
                for r in 0..d {
                    for s in 0..d {
                        let v = self.get(p, q, r, s).to_bits();
                        for (a, b, c, e) in Tensor4::eight_fold_images(p, q, r, s) {
                            if self.get(a, b, c, e).to_bits() != v {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// One-body matrix plus dense two-body tensor, the input of the general
/// (all-Pauli-strings) decomposition. `core_energy` is the scalar from an
/// FCIDUMP core record; it never enters the decomposition.
#[derive(Debug, Clone)]
pub struct GeneralHamiltonian {
    pub d: usize,
    /// Qubits per electron register, `log2 d`.
    pub m: u32,
    pub h1: SquareMatrix,
    pub h2: Tensor4,
    pub core_energy: f64,
}

impl GeneralHamiltonian {
    pub fn new(h1: SquareMatrix, h2: Tensor4, core_energy: f64) -> Result<Self> {
        let d = h1.dim();
        let m = validate_dimension(d)?;
        if h2.dim() != d {
            return Err(Error::InvalidParameter {
                name: "h2",
                message: format!("two-body dimension {} does not match h1 ({d})", h2.dim()),
            });
        }
        Ok(GeneralHamiltonian {
            d,
            m,
            h1,
            h2,
            core_energy,
        })
    }
}

/// Kinetic, external, and diagonal two-body parts of a Hamiltonian whose
/// interaction is diagonal in the basis (dual plane waves being the prime
/// example). All three matrices are symmetric; `v[p][r]` is the pair energy of
/// electrons occupying basis states `p` and `r`, entering the operator as
/// `(1/2) Σ_{i≠j} v[p][r] |p⟩⟨p|_i |r⟩⟨r|_j`.
#[derive(Debug, Clone)]
pub struct DiagonalHamiltonian {
    pub d: usize,
    /// Qubits per electron register, `log2 d`.
    pub m: u32,
    pub t_kin: SquareMatrix,
    pub u_ext: SquareMatrix,
    pub v: SquareMatrix,
}

impl DiagonalHamiltonian {
    pub fn new(t_kin: SquareMatrix, u_ext: SquareMatrix, v: SquareMatrix) -> Result<Self> {
        let d = t_kin.dim();
        let m = validate_dimension(d)?;
        for (name, mat) in [("t_kin", &t_kin), ("u_ext", &u_ext), ("v", &v)] {
            if mat.dim() != d {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("dimension {} does not match t_kin ({d})", mat.dim()),
                });
            }
            if !mat.is_symmetric() {
                return Err(Error::InvalidParameter {
                    name,
                    message: "matrix must be symmetric".into(),
                });
            }
        }
        Ok(DiagonalHamiltonian {
            d,
            m,
            t_kin,
            u_ext,
            v,
        })
    }

    /// Combined one-body matrix `T = t_kin + u_ext`.
    pub fn t_total(&self) -> SquareMatrix {
        self.t_kin.plus(&self.u_ext)
    }
}

/// Simulation cell for the dual-plane-wave generators: `grid_side` points per
/// axis (so `D = grid_side³` basis functions), `volume` in Bohr³.
#[derive(Debug, Clone, Copy)]
pub struct CellSpec {
    pub n_electrons: usize,
    /// Wigner–Seitz radius in Bohr (informational when `volume` is given
    /// directly).
    pub r_s: f64,
    /// Cell volume Ω in Bohr³.
    pub volume: f64,
    pub grid_side: usize,
}

impl CellSpec {
    /// Uniform-electron-gas cell: the volume follows from the Wigner–Seitz
    /// radius as Ω = (4π/3)·r_s³·N.
    pub fn ueg(n_electrons: usize, r_s: f64, grid_side: usize) -> Result<Self> {
        if r_s <= 0.0 || !r_s.is_finite() {
            return Err(Error::InvalidParameter {
                name: "r_s",
                message: format!("Wigner-Seitz radius must be positive, got {r_s}"),
            });
        }
        let volume = 4.0 * PI / 3.0 * r_s.powi(3) * n_electrons as f64;
        CellSpec {
            n_electrons,
            r_s,
            volume,
            grid_side,
        }
        .validated()
    }

    /// Cell specified by volume directly (material calculations).
    pub fn with_volume(n_electrons: usize, volume: f64, grid_side: usize) -> Result<Self> {
        if volume <= 0.0 || !volume.is_finite() {
            return Err(Error::InvalidParameter {
                name: "volume",
                message: format!("cell volume must be positive, got {volume}"),
            });
        }
        let r_s = (3.0 * volume / (4.0 * PI * n_electrons.max(1) as f64)).cbrt();
        CellSpec {
            n_electrons,
            r_s,
            volume,
            grid_side,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        if self.n_electrons == 0 {
            return Err(Error::InvalidElectronCount {
                n: 0,
                reason: "cell must contain at least one electron",
            });
        }
        if self.grid_side < 2 || !self.grid_side.is_power_of_two() {
            return Err(Error::InvalidParameter {
                name: "grid_side",
                message: format!(
                    "grid side must be a power of two and at least 2, got {}",
                    self.grid_side
                ),
            });
        }
        // D = side³ must stay within the key encoding.
        let d = self.d();
        if d > MAX_DIMENSION {
            return Err(Error::UnsupportedDimension {
                d,
                reason: "exceeds the 16-bit index range of the packed Pauli keys",
            });
        }
        Ok(self)
    }

    /// Number of basis functions, `grid_side³`.
    pub fn d(&self) -> usize {
        self.grid_side * self.grid_side * self.grid_side
    }
}

/// A classical point charge for the external potential of a material cell.
/// Position in Bohr, charge in units of e (nuclei are positive).
#[derive(Debug, Clone, Copy)]
pub struct PointCharge {
    pub position: [f64; 3],
    pub charge: f64,
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

/// Random dense general Hamiltonian with exact eight-fold two-body symmetry.
///
/// One independent value is drawn per symmetry orbit — uniform on (−1, 1) from
/// a ChaCha stream seeded with `seed` — and copied to every image, so the
/// symmetry holds bit for bit and the draw order (lexicographic over canonical
/// index tuples) is reproducible across platforms. At `d = 4` this makes
/// exactly 55 independent two-body values.
pub fn gen_random_dense(d: usize, seed: u64) -> Result<GeneralHamiltonian> {
    validate_dimension(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut h1 = SquareMatrix::zeros(d);
    for p in 0..d {
        for q in p..d {
            let v = rng.random_range(-1.0..1.0);
            h1.set(p, q, v);
            h1.set(q, p, v);
        }
    }

    let mut h2 = Tensor4::zeros(d);
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                for s in 0..d {
                    let images = Tensor4::eight_fold_images(p, q, r, s);
                    if (p, q, r, s) != *images.iter().min().unwrap() {
                        continue;
                    }
                    let v = rng.random_range(-1.0..1.0);
                    for (a, b, c, e) in images {
                        h2.set(a, b, c, e, v);
                    }
                }
            }
        }
    }

    GeneralHamiltonian::new(h1, h2, 0.0)
}

/// Random diagonal-interaction Hamiltonian: three independent symmetric
/// matrices (kinetic, external, pair energies) with entries uniform on (−1, 1).
/// Upper triangles are drawn row-major, kinetic first, so instances are
/// reproducible per seed.
pub fn gen_random_diagonal(d: usize, seed: u64) -> Result<DiagonalHamiltonian> {
    validate_dimension(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |d: usize| {
        let mut m = SquareMatrix::zeros(d);
        for p in 0..d {
            for q in p..d {
                let v = rng.random_range(-1.0..1.0);
                m.set(p, q, v);
                m.set(q, p, v);
            }
        }
        m
    };
    let t_kin = draw(d);
    let u_ext = draw(d);
    let v = draw(d);
    DiagonalHamiltonian::new(t_kin, u_ext, v)
}

// ---------------------------------------------------------------------------
// Dual-plane-wave generators
// ---------------------------------------------------------------------------

/// Cubic real-space/frequency grid backing the dual-plane-wave matrices.
///
/// Conventions:
/// * grid points indexed row-major, `p = (p1·side + p2)·side + p3`, at
///   positions `r_p = (Ω/D)^{1/3} · (p1, p2, p3)`;
/// * frequencies per axis follow the FFT layout symmetric about zero,
///   `ν = m` for `m ≤ (side−1)/2` and `ν = m − side` above it, with
///   `k_ν = 2π·ν / Ω^{1/3}`.
///
/// Lattice sums are evaluated on the wrapped displacement
/// `Δ = (p − q) mod side` per axis, which equals the literal
/// `cos(k_ν·(r_p − r_q))` sum since the wrap shifts each argument by a
/// multiple of 2π. Evaluating per displacement class (and mirroring classes
/// related by Δ ↔ −Δ, where cos is even) makes translation symmetry and
/// matrix symmetry exact in floating point, not just up to rounding.
struct DpwGrid {
    side: usize,
    d: usize,
    /// Signed frequency for each per-axis index.
    freq: Vec<i64>,
    /// |k|² for each frequency triple, indexed like grid points.
    k_squared: Vec<f64>,
}

impl DpwGrid {
    fn new(cell: &CellSpec) -> Self {
        let side = cell.grid_side;
        let d = cell.d();
        let box_len = cell.volume.cbrt();
        let freq: Vec<i64> = (0..side)
            .map(|m| {
                if m <= (side - 1) / 2 {
                    m as i64
                } else {
                    m as i64 - side as i64
                }
            })
            .collect();
        let unit = 2.0 * PI / box_len;
        let mut k_squared = Vec::with_capacity(d);
        for v1 in &freq {
            for v2 in &freq {
                for v3 in &freq {
                    let norm2 = (v1 * v1 + v2 * v2 + v3 * v3) as f64;
                    k_squared.push(unit * unit * norm2);
                }
            }
        }
        DpwGrid {
            side,
            d,
            freq,
            k_squared,
        }
    }

    fn axes(&self, p: usize) -> [usize; 3] {
        let n = self.side;
        [p / (n * n), (p / n) % n, p % n]
    }

    /// Displacement class index of the pair (p, q): per-axis (p − q) mod side.
    fn class(&self, p: usize, q: usize) -> usize {
        let n = self.side;
        let a = self.axes(p);
        let b = self.axes(q);
        let mut idx = 0;
        for axis in 0..3 {
            let delta = (a[axis] + n - b[axis]) % n;
            idx = idx * n + delta;
        }
        idx
    }

    /// Class of the negated displacement, `-Δ mod side` per axis.
    fn negated(&self, class: usize) -> usize {
        let n = self.side;
        let c = self.axes(class);
        let mut idx = 0;
        for axis in 0..3 {
            idx = idx * n + (n - c[axis]) % n;
        }
        idx
    }

    /// Σ_ν weight(|k_ν|²) · cos(2π ν·Δ / side) per displacement class, where
    /// `weight` returns `None` to drop a frequency (the ν = 0 term of the
    /// Coulomb sums). Classes related by negation share one evaluation.
    fn kernel_table(&self, sequential: bool, weight: impl Fn(f64) -> Option<f64> + Sync) -> Vec<f64> {
        let n = self.side;
        let evaluate = |class: usize| -> f64 {
            if class != class.min(self.negated(class)) {
                return 0.0; // filled from the canonical representative below
            }
            let delta = self.axes(class);
            let mut sum = 0.0;
            let mut nu_index = 0;
            for v1 in &self.freq {
                for v2 in &self.freq {
                    for v3 in &self.freq {
                        if let Some(w) = weight(self.k_squared[nu_index]) {
                            let dot = v1 * delta[0] as i64
                                + v2 * delta[1] as i64
                                + v3 * delta[2] as i64;
                            sum += w * (2.0 * PI * dot as f64 / n as f64).cos();
                        }
                        nu_index += 1;
                    }
                }
            }
            sum
        };
        let computed = if sequential {
            exec::map_rows_seq(self.d, evaluate)
        } else {
            exec::map_rows(self.d, evaluate)
        };
        let mut table = vec![0.0; self.d];
        for class in 0..self.d {
            let rep = class.min(self.negated(class));
            table[class] = computed[rep];
        }
        table
    }

    /// Expand a displacement-class table into the full symmetric matrix.
    fn matrix_from_table(&self, table: &[f64]) -> SquareMatrix {
        SquareMatrix::from_fn(self.d, |p, q| table[self.class(p, q)])
    }
}

fn gen_ueg_dpw_impl(cell: &CellSpec, sequential: bool) -> Result<DiagonalHamiltonian> {
    let cell = cell.validated()?;
    validate_dimension(cell.d())?;
    let grid = DpwGrid::new(&cell);
    let d = grid.d as f64;
    let omega = cell.volume;

    // T[p][q] = (1/D) Σ_ν (|k_ν|²/2) cos(k_ν·(r_p − r_q))
    let t_table = grid.kernel_table(sequential, |k2| Some(k2 / (2.0 * d)));
    // V[p][r] = (2π/Ω) Σ_{ν≠0} cos(k_ν·(r_p − r_r)) / |k_ν|²
    let v_table = grid.kernel_table(sequential, |k2| {
        if k2 == 0.0 {
            None
        } else {
            Some(2.0 * PI / (omega * k2))
        }
    });

    let t_kin = grid.matrix_from_table(&t_table);
    let v = grid.matrix_from_table(&v_table);
    let u_ext = SquareMatrix::zeros(grid.d);
    DiagonalHamiltonian::new(t_kin, u_ext, v)
}

/// Uniform electron gas on a dual-plane-wave grid: kinetic lattice sums plus
/// the diagonal Coulomb pair matrix, no external potential. Runs row-parallel
/// when the `parallel` feature is enabled.
pub fn gen_ueg_dpw(cell: &CellSpec) -> Result<DiagonalHamiltonian> {
    gen_ueg_dpw_impl(cell, false)
}

/// Single-threaded twin of [`gen_ueg_dpw`], used by the benchmark suite to
/// compare strategies within one build.
pub fn gen_ueg_dpw_seq(cell: &CellSpec) -> Result<DiagonalHamiltonian> {
    gen_ueg_dpw_impl(cell, true)
}

/// Material cell: the UEG kinetic and Coulomb matrices plus a diagonal
/// external potential from classical point charges,
/// `U[p][p] = −(4π/Ω) Σ_j ζ_j Σ_{ν≠0} cos(k_ν·(R_j − r_p)) / |k_ν|²`.
pub fn gen_material_dpw(cell: &CellSpec, charges: &[PointCharge]) -> Result<DiagonalHamiltonian> {
    let base = gen_ueg_dpw(cell)?;
    let cell = cell.validated()?;
    let grid = DpwGrid::new(&cell);
    let n = grid.side;
    let omega = cell.volume;
    let spacing = omega.cbrt() / n as f64;
    let unit = 2.0 * PI / omega.cbrt();

    let diag = exec::map_rows(grid.d, |p| {
        let ax = grid.axes(p);
        let r_p = [
            ax[0] as f64 * spacing,
            ax[1] as f64 * spacing,
            ax[2] as f64 * spacing,
        ];
        let mut total = 0.0;
        for charge in charges {
            let dx = [
                charge.position[0] - r_p[0],
                charge.position[1] - r_p[1],
                charge.position[2] - r_p[2],
            ];
            let mut sum = 0.0;
            let mut nu_index = 0;
            for v1 in &grid.freq {
                for v2 in &grid.freq {
                    for v3 in &grid.freq {
                        let k2 = grid.k_squared[nu_index];
                        nu_index += 1;
                        if k2 == 0.0 {
                            continue;
                        }
                        let arg =
                            unit * (*v1 as f64 * dx[0] + *v2 as f64 * dx[1] + *v3 as f64 * dx[2]);
                        sum += arg.cos() / k2;
                    }
                }
            }
            total += charge.charge * sum;
        }
        -4.0 * PI / omega * total
    });

    let mut u_ext = SquareMatrix::zeros(grid.d);
    for (p, value) in diag.into_iter().enumerate() {
        u_ext.set(p, p, value);
    }
    DiagonalHamiltonian::new(base.t_kin, u_ext, base.v)
}
