//! On-disk formats. Every complex number is an explicit `[re, im]` pair and
//! matrices are row-major nested arrays.

use std::io::{self, Write};
use std::path::Path;

use lueq::invariants::{AncillarySet, Tensor3};
use lueq::{ComplexMatrix, DensityMatrix};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub type Pair = [f64; 2];
pub type RawMatrix = Vec<Vec<Pair>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub matrix: RawMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub u: RawMatrix,
    pub w: RawMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AncillaryFile {
    pub rho: Vec<RawMatrix>,
    pub theta: Vec<RawMatrix>,
}

/// Writes floats as `d.dddddddddddddddde±x`: 17 significant digits, enough
/// to round-trip any `f64`.
pub struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write!(w, "{:.16e}", f64::from(v))
    }
}

pub fn to_json_string<S: Serialize>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn pair(z: Complex<f64>) -> Value {
    Value::from(vec![z.re, z.im])
}

pub fn raw(m: &ComplexMatrix<f64>) -> RawMatrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_value(m: &ComplexMatrix<f64>) -> Value {
    serde_json::to_value(raw(m)).expect("matrix serializes")
}

pub fn tensor_value(t: &Tensor3<f64>) -> Value {
    let n = t.size();
    Value::from(
        (0..n)
            .map(|i| {
                Value::from(
                    (0..n)
                        .map(|j| Value::from((0..n).map(|k| pair(t[(i, j, k)])).collect::<Vec<_>>()))
                        .collect::<Vec<_>>(),
                )
            })
            .collect::<Vec<_>>(),
    )
}

/// Rectangular matrix from nested pairs; ragged rows are a parse error.
pub fn cook(m: &RawMatrix, what: &str, path: &Path) -> Result<ComplexMatrix<f64>, CliError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(CliError::parse(path, format!("{what} is empty")));
    }
    if let Some(bad) = m.iter().position(|r| r.len() != cols) {
        return Err(CliError::parse(
            path,
            format!("{what} row {} has {} entries, expected {cols}", bad + 1, m[bad].len()),
        ));
    }
    let data = m.iter().flatten().map(|&[re, im]| Complex::new(re, im)).collect();
    ComplexMatrix::new(rows, cols, data).map_err(|e| CliError::parse(path, e.to_string()))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::parse(path, e.to_string()))
}

pub fn read_state(path: &Path) -> Result<DensityMatrix<f64>, CliError> {
    let file: StateFile = parse(path)?;
    let m = cook(&file.matrix, "matrix", path)?;
    lueq::validate_density(m, file.dim).map_err(|e| CliError::invalid(path, e))
}

pub fn read_witness(path: &Path) -> Result<(ComplexMatrix<f64>, ComplexMatrix<f64>), CliError> {
    let file: WitnessFile = parse(path)?;
    Ok((cook(&file.u, "u", path)?, cook(&file.w, "w", path)?))
}

pub fn read_ancillary(path: &Path) -> Result<AncillarySet<f64>, CliError> {
    let file: AncillaryFile = parse(path)?;
    let list = |ms: &[RawMatrix], what: &str| -> Result<Vec<ComplexMatrix<f64>>, CliError> {
        ms.iter()
            .enumerate()
            .map(|(i, m)| cook(m, &format!("{what}[{}]", i + 1), path))
            .collect()
    };
    Ok(AncillarySet {
        rhos: list(&file.rho, "rho")?,
        thetas: list(&file.theta, "theta")?,
    })
}

pub fn state_file(rho: &DensityMatrix<f64>) -> StateFile {
    StateFile {
        dim: rho.dim(),
        matrix: raw(rho.matrix()),
    }
}

pub fn witness_file(u: &ComplexMatrix<f64>, w: &ComplexMatrix<f64>) -> WitnessFile {
    WitnessFile { u: raw(u), w: raw(w) }
}

pub fn ancillary_file(set: &AncillarySet<f64>) -> AncillaryFile {
    AncillaryFile {
        rho: set.rhos.iter().map(raw).collect(),
        theta: set.thetas.iter().map(raw).collect(),
    }
}

/// Write to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
