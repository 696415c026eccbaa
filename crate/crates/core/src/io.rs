//! File formats: fiducial JSON, coefficient-tensor JSON, and the G-tensor
//! CSV table. Floats are written with 15 significant digits in machine
//! formats and 3 significant digits in certificate summaries.

use serde::{Deserialize, Serialize};

use crate::cmatrix::{CMatrix, Complex64};
use crate::error::{Error, Result};
use crate::sic::Fiducial;
use crate::tensor::{expand_tensor, CoefficientTensor, GTensor};
use crate::wh::PrimeDim;

/// `{"d": <int>, "amplitudes": [[re, im], ...]}`
#[derive(Debug, Serialize, Deserialize)]
pub struct FiducialFile {
    pub d: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

pub fn fiducial_to_json(f: &Fiducial) -> String {
    let file = FiducialFile {
        d: f.dim().get(),
        amplitudes: f
            .amplitudes()
            .iter()
            .map(|z| [round_sig(z.re, 15), round_sig(z.im, 15)])
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("fiducial serializes")
}

/// `{"d":3, "F":[{"n":1, "rows":[[[re,im], ...], ...]}, ...], "seedOnly":false}`
#[derive(Debug, Serialize, Deserialize)]
pub struct TensorFile {
    pub d: usize,
    #[serde(rename = "F")]
    pub f: Vec<TensorBlock>,
    #[serde(rename = "seedOnly")]
    pub seed_only: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TensorBlock {
    pub n: usize,
    /// row x (x = 1..d²), then column y, then [re, im]
    pub rows: Vec<Vec<[f64; 2]>>,
}

pub fn tensor_to_json(t: &CoefficientTensor) -> String {
    let d = t.dim().get();
    let blocks = (1..d)
        .map(|n| {
            let m = t.matrix(n);
            TensorBlock {
                n,
                rows: (0..m.nrows())
                    .map(|i| {
                        (0..m.ncols())
                            .map(|j| {
                                let z = m[(i, j)];
                                [round_sig(z.re, 15), round_sig(z.im, 15)]
                            })
                            .collect()
                    })
                    .collect(),
            }
        })
        .collect();
    let file = TensorFile {
        d,
        f: blocks,
        seed_only: false,
    };
    serde_json::to_string_pretty(&file).expect("tensor serializes")
}

pub fn tensor_from_json(text: &str) -> Result<CoefficientTensor> {
    let file: TensorFile = serde_json::from_str(text)?;
    let d = PrimeDim::new(file.d)?;
    let dd = file.d;
    if file.f.len() != dd - 1 {
        return Err(Error::Consistency(format!(
            "expected {} coefficient blocks, got {}",
            dd - 1,
            file.f.len()
        )));
    }
    let mut blocks = file.f;
    blocks.sort_by_key(|b| b.n);
    for (i, b) in blocks.iter().enumerate() {
        if b.n != i + 1 {
            return Err(Error::Consistency(format!(
                "missing or duplicate block n = {}",
                i + 1
            )));
        }
        if b.rows.len() != dd * dd - 1 {
            return Err(Error::Consistency(format!(
                "block n = {} must have {} rows, got {}",
                b.n,
                dd * dd - 1,
                b.rows.len()
            )));
        }
    }
    if file.seed_only {
        let seeds: Vec<Vec<Complex64>> = blocks
            .iter()
            .map(|b| {
                b.rows
                    .iter()
                    .map(|row| {
                        let [re, im] = row.first().copied().unwrap_or([0.0, 0.0]);
                        Complex64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        return expand_tensor(&seeds, d);
    }
    let mats = blocks
        .iter()
        .map(|b| {
            for row in &b.rows {
                if row.len() != dd * dd {
                    return Err(Error::Consistency(format!(
                        "block n = {} rows must have {} entries",
                        b.n,
                        dd * dd
                    )));
                }
            }
            Ok(CMatrix::from_fn(dd * dd - 1, dd * dd, |i, j| {
                let [re, im] = b.rows[i][j];
                Complex64::new(re, im)
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    CoefficientTensor::from_matrices(d, mats)
}

/// CSV export of the real Bell-expression weights: one row per
/// `(x, y, α, β)`, 15 significant digits.
pub fn gtensor_to_csv(g: &GTensor) -> String {
    let dd = g.dim().get();
    let mut out = String::from("x,y,alpha,beta,g\n");
    for x in 1..dd * dd {
        for y in 0..dd * dd {
            for alpha in 0..dd {
                for beta in 0..dd {
                    out.push_str(&format!(
                        "{x},{y},{alpha},{beta},{:.14e}\n",
                        g.value(x, y, alpha, beta)
                    ));
                }
            }
        }
    }
    out
}

/// Round to `digits` significant digits (used before serializing floats).
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .unwrap_or(v)
}
