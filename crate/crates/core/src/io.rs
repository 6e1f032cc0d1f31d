//! JSON file formats for matrices, representations and reports.
//!
//! Complex entries are `[re, im]` pairs, matrices are row-major nested arrays
//! with explicit dimensions, and weights are rational strings such as `"-1/3"`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cartan::{AlgebraId, Q, Weight, build_root_system};
use crate::linalg::CMat;
use crate::repspace::Representation;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("malformed JSON in {0}: {1}")]
    Json(String, serde_json::Error),
    #[error("bad file contents: {0}")]
    Format(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] crate::error::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixData {
    pub fn from_matrix(m: &CMat) -> Self {
        MatrixData {
            rows: m.nrows(),
            cols: m.ncols(),
            data: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMat, InputError> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(InputError::Format(format!(
                "matrix declared {}x{} does not match its data",
                self.rows, self.cols
            )));
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i][j];
            Complex64::new(re, im)
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub name: String,
    #[serde(flatten)]
    pub matrix: MatrixData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub algebra: String,
    pub q: f64,
    pub dim: usize,
    pub weights: Vec<Vec<String>>,
    pub parities: Vec<u8>,
    pub e: Vec<MatrixData>,
    pub f: Vec<MatrixData>,
    #[serde(default)]
    pub label: Option<String>,
}

impl RepFile {
    pub fn from_rep(rep: &Representation) -> Self {
        RepFile {
            algebra: rep.rs.algebra.name().to_string(),
            q: rep.q,
            dim: rep.dim(),
            weights: rep
                .weights
                .iter()
                .map(|w| w.0.iter().map(|c| c.to_string()).collect())
                .collect(),
            parities: rep.parities.clone(),
            e: rep.e.iter().map(MatrixData::from_matrix).collect(),
            f: rep.f.iter().map(MatrixData::from_matrix).collect(),
            label: Some(rep.label.clone()),
        }
    }

    /// Structural checks only; the relations are left to the validator.
    pub fn to_rep(&self) -> Result<Representation, InputError> {
        let id: AlgebraId = self.algebra.parse()?;
        let rs = Arc::new(build_root_system(id));
        let r = rs.rank;
        let bad = |m: String| Err(InputError::Format(m));
        if !(self.q > 0.0 && self.q < 1.0) {
            return bad(format!("q = {} outside (0, 1)", self.q));
        }
        if self.weights.len() != self.dim || self.parities.len() != self.dim {
            return bad(format!(
                "dim {} but {} weights and {} parities",
                self.dim,
                self.weights.len(),
                self.parities.len()
            ));
        }
        if self.parities.iter().any(|&p| p > 1) {
            return bad("parities must be 0 or 1".into());
        }
        if self.e.len() != r || self.f.len() != r {
            return bad(format!("{} needs {r} e and f matrices", id));
        }
        let mut weights = Vec::with_capacity(self.dim);
        for w in &self.weights {
            if w.len() != r {
                return bad(format!("weight of length {} for rank {r}", w.len()));
            }
            let c: Result<Vec<Q>, _> = w.iter().map(|s| s.trim().parse::<Q>()).collect();
            match c {
                Ok(c) => weights.push(Weight(c)),
                Err(_) => return bad(format!("unparsable weight {w:?}")),
            }
        }
        let mats = |ms: &[MatrixData]| -> Result<Vec<CMat>, InputError> {
            ms.iter()
                .map(|m| {
                    let x = m.to_matrix()?;
                    if x.nrows() != self.dim || x.ncols() != self.dim {
                        return Err(InputError::Format(format!(
                            "generator is {}x{}, expected {}x{}",
                            x.nrows(),
                            x.ncols(),
                            self.dim,
                            self.dim
                        )));
                    }
                    Ok(x)
                })
                .collect()
        };
        Ok(Representation {
            rs,
            q: self.q,
            weights,
            parities: self.parities.clone(),
            e: mats(&self.e)?,
            f: mats(&self.f)?,
            label: self.label.clone().unwrap_or_else(|| "file".into()),
        })
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| InputError::Io(name.clone(), e))?;
    serde_json::from_str(&text).map_err(|e| InputError::Json(name, e))
}

/// Write pretty JSON through a temporary file and a rename.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), InputError> {
    let name = path.display().to_string();
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| InputError::Json(name.clone(), e))?;
    text.push('\n');
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).map_err(|e| InputError::Io(name.clone(), e))?;
    fs::rename(&tmp, path).map_err(|e| InputError::Io(name, e))
}

pub fn read_rep(path: &Path) -> Result<Representation, InputError> {
    read_json::<RepFile>(path)?.to_rep()
}

pub fn write_rep(path: &Path, rep: &Representation) -> Result<(), InputError> {
    write_json(path, &RepFile::from_rep(rep))
}

pub fn write_matrix(path: &Path, name: &str, m: &CMat) -> Result<(), InputError> {
    write_json(
        path,
        &MatrixFile {
            name: name.to_string(),
            matrix: MatrixData::from_matrix(m),
        },
    )
}

pub fn read_matrix(path: &Path) -> Result<CMat, InputError> {
    read_json::<MatrixFile>(path)?.matrix.to_matrix()
}

/// Conventions every report depends on; their hash is embedded in reports.
pub const CONVENTIONS: &str = "\
form: A-series Cartan matrix; B2 sym [[4,-2],[-2,2]]; osp(1|2) (a|a)=1, roots {a odd, 2a even}
coproduct: De = e(x)q^t + 1(x)e; Df = f(x)1 + q^-t(x)f; Koszul sign (-1)^{deg b deg v}
root vectors: e_{b+c} = e_b e_c - q^-(b|c) e_c e_b; f_{b+c} = f_c f_b - q^(b|c) f_b f_c; interval-minimal pair
ordering: default slope order sum c_i(1-2^-i)/ht; index 1 = reversed when normal
R = K Rhat; K = q^(l1|l2); Rhat = prod over reversed order exp_qbar((-1)^deg (q-1/q) a^-1 e(x)f)
qbar = (-1)^deg q^-(a|a); 2b factors with b odd omitted; [n]_b = (1-b^n)/(1-b)
B = q^((h|h)-(mu|h)) on slot 2; F = prod_k B^k Rhat^-1 B^-k; R(mu) = F21^-1 R F12
shift: mu -> mu - c eta; cocycle and GNF use c = 2
GNF order: R23(mu-2h1) R13(mu) R12(mu-2h3) = R12(mu) R13(mu-2h2) R23(mu)
residual: max|L-R| / max(1, max|L|, max|R|)
closed form: x^2 = q^{s(mu|a)+t}, (s,t) = (-1,0)
";

pub fn ledger_hash() -> String {
    hex::encode(Sha256::digest(CONVENTIONS.as_bytes()))
}
