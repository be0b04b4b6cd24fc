//! FCIDUMP reading and writing.
//!
//! The accepted dialect is the common Fortran-namelist style: a header opened
//! by `&FCI` carrying `NORB=…`, `NELEC=…` (other keys are ignored), terminated
//! by `&END` or `/`, followed by one record per line:
//!
//! ```text
//! value  i  j  k  l
//! ```
//!
//! with 1-based orbital indices in chemists' order, so a record with all four
//! indices nonzero sets the two-body element (ij|kl), a record with `k = l = 0`
//! sets the one-body element h[i][j], and the all-zero record carries the core
//! energy. Values may use Fortran `D` exponents. Each record is unfolded onto
//! all eight permutation-symmetry images; a later duplicate overwrites an
//! earlier one.

use crate::error::{Error, Result};
use crate::hamiltonian::{GeneralHamiltonian, SquareMatrix, Tensor4};
use std::fs;
use std::io::Write as _;
use std::path::Path;

/// Parsed FCIDUMP contents: the Hamiltonian plus the electron count declared
/// in the header.
#[derive(Debug, Clone)]
pub struct Fcidump {
    pub hamiltonian: GeneralHamiltonian,
    pub n_electrons: usize,
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Load an FCIDUMP file into a dense Hamiltonian.
pub fn load(path: &Path) -> Result<Fcidump> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();

    // --- header ---------------------------------------------------------
    let mut header = String::new();
    let mut body_start = None;
    let mut saw_open = false;
    while let Some((i, line)) = lines.next() {
        let trimmed = line.trim();
        if !saw_open {
            if trimmed.is_empty() {
                continue;
            }
            if !trimmed.to_ascii_uppercase().starts_with("&FCI") {
                return Err(parse_err(path, i + 1, "expected header to open with &FCI"));
            }
            saw_open = true;
            // The terminator may share the opening line.
            header.push_str(&trimmed[4..]);
        } else {
            header.push_str(trimmed);
        }
        header.push(' ');
        let upper = header.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END").or_else(|| upper.find('/')) {
            header.truncate(pos);
            body_start = Some(i + 1);
            break;
        }
    }
    let body_start = body_start
        .ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            message: "header never terminated by &END or /".into(),
        })?;

    let mut norb = None;
    let mut nelec = None;
    for token in header.split(|c: char| c == ',' || c.is_whitespace()) {
        if let Some((key, value)) = token.split_once('=') {
            match key.trim().to_ascii_uppercase().as_str() {
                "NORB" => {
                    norb = Some(value.trim().parse::<usize>().map_err(|_| Error::Format {
                        path: path.to_path_buf(),
                        message: format!("NORB value {value:?} is not an integer"),
                    })?)
                }
                "NELEC" => {
                    nelec = Some(value.trim().parse::<usize>().map_err(|_| Error::Format {
                        path: path.to_path_buf(),
                        message: format!("NELEC value {value:?} is not an integer"),
                    })?)
                }
                _ => {}
            }
        }
    }
    let norb = norb.ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        message: "header is missing NORB".into(),
    })?;
    let n_electrons = nelec.ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        message: "header is missing NELEC".into(),
    })?;

    // Dimension rules are enforced by the Hamiltonian constructor, but check
    // up front so a bad NORB fails before any record parsing.
    crate::hamiltonian::validate_dimension(norb)?;

    // --- records ---------------------------------------------------------
    let mut h1 = SquareMatrix::zeros(norb);
    let mut h2 = Tensor4::zeros(norb);
    let mut core = 0.0;

    for (offset, line) in text.lines().skip(body_start).enumerate() {
        let line_no = body_start + offset + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 5 {
            return Err(parse_err(
                path,
                line_no,
                format!("expected `value i j k l`, found {} fields", tokens.len()),
            ));
        }
        let value: f64 = tokens[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad value {:?}", tokens[0])))?;
        let mut idx = [0usize; 4];
        for (k, token) in tokens[1..].iter().enumerate() {
            idx[k] = token
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad index {token:?}")))?;
            if idx[k] > norb {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("index {} exceeds NORB={norb}", idx[k]),
                ));
            }
        }
        match idx {
            [0, 0, 0, 0] => core = value,
            [i, j, 0, 0] if i > 0 && j > 0 => {
                h1.set(i - 1, j - 1, value);
                h1.set(j - 1, i - 1, value);
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                for (a, b, c, e) in Tensor4::eight_fold_images(i - 1, j - 1, k - 1, l - 1) {
                    h2.set(a, b, c, e, value);
                }
            }
            _ => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!(
                        "indices {} {} {} {} match neither a core, one-body, nor two-body record",
                        idx[0], idx[1], idx[2], idx[3]
                    ),
                ));
            }
        }
    }

    Ok(Fcidump {
        hamiltonian: GeneralHamiltonian::new(h1, h2, core)?,
        n_electrons,
    })
}

/// Write a Hamiltonian as an FCIDUMP file. Only canonical representatives of
/// each symmetry orbit are emitted (upper triangle for one-body records), and
/// exact zeros are skipped; values carry 17 significant digits so a
/// write/load round trip reproduces every coefficient exactly.
pub fn write(path: &Path, h: &GeneralHamiltonian, n_electrons: usize) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!(
        "&FCI NORB={},NELEC={},MS2=0,\n&END\n",
        h.d, n_electrons
    ));
    let d = h.d;
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                for s in 0..d {
                    let images = Tensor4::eight_fold_images(p, q, r, s);
                    if (p, q, r, s) != *images.iter().min().unwrap() {
                        continue;
                    }
                    let v = h.h2.get(p, q, r, s);
                    if v != 0.0 {
                        out.push_str(&format!(
                            "{:.16e} {} {} {} {}\n",
                            v,
                            p + 1,
                            q + 1,
                            r + 1,
                            s + 1
                        ));
                    }
                }
            }
        }
    }
    for p in 0..d {
        for q in p..d {
            let v = h.h1.get(p, q);
            if v != 0.0 {
                out.push_str(&format!("{:.16e} {} {} 0 0\n", v, p + 1, q + 1));
            }
        }
    }
    if h.core_energy != 0.0 {
        out.push_str(&format!("{:.16e} 0 0 0 0\n", h.core_energy));
    }

    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))?;
    Ok(())
}
