//! Error type shared by every module in the crate.

use std::path::PathBuf;
use thiserror::Error;

/// Everything that can go wrong between reading an input and printing an
/// estimate. Variants are deliberately coarse: callers mostly need to tell
/// "bad input" from "undefined quantity" from "refused for size".
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure, annotated with the file involved.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A text input (FCIDUMP, point-charge list) that could not be parsed.
    /// `line` is 1-based and counts every line of the file, header included.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A binary coefficient file with a bad magic string or truncated body.
    #[error("{path}: not a coefficient file: {message}")]
    Format { path: PathBuf, message: String },

    /// Basis dimension the decomposition cannot handle (not a power of two,
    /// zero, or too large for the key encoding).
    #[error("unsupported basis dimension {d}: {reason}")]
    UnsupportedDimension { d: usize, reason: &'static str },

    /// Electron count outside the domain of the requested operation.
    #[error("invalid electron count {n}: {reason}")]
    InvalidElectronCount { n: usize, reason: &'static str },

    /// The dense verifier refuses to materialize operators beyond a fixed
    /// qubit budget; everything above it belongs to the sparse pipeline.
    #[error("dense verification of {qubits} qubits exceeds the {max}-qubit guard")]
    SizeGuard { qubits: usize, max: usize },

    /// A cost-model or generator parameter outside its documented range.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// The LCU has one-norm zero: there is nothing to block-encode and the
    /// walk-operator cost model is undefined.
    #[error("LCU one-norm is zero; nothing to encode")]
    ZeroNorm,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wrap an I/O error with the path it occurred on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
