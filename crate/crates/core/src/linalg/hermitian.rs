use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{format_rational, parse_rational, rat_to_f64, rationalize, GaussRational};

/// Arithmetic mode of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Validated Hermitian matrix in one of the two arithmetic modes.
#[derive(Clone, Debug, PartialEq)]
pub enum HermitianMatrix {
    Exact(Matrix<GaussRational>),
    Float(Matrix<Complex64>),
}

pub const FLOAT_HERMITIAN_TOL: f64 = 1e-12;

impl HermitianMatrix {
    pub fn exact(m: Matrix<GaussRational>) -> Result<Self> {
        if m != m.conj_transpose() {
            let deviation = m.hermitian_deviation();
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HermitianMatrix::Exact(m))
    }

    pub fn float(m: Matrix<Complex64>) -> Result<Self> {
        if !m.rows().flatten().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        let deviation = m.hermitian_deviation();
        if deviation > FLOAT_HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HermitianMatrix::Float(m))
    }

    pub fn n(&self) -> usize {
        match self {
            HermitianMatrix::Exact(m) => m.n(),
            HermitianMatrix::Float(m) => m.n(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            HermitianMatrix::Exact(_) => Mode::Exact,
            HermitianMatrix::Float(_) => Mode::Float,
        }
    }

    pub fn to_float(&self) -> Matrix<Complex64> {
        match self {
            HermitianMatrix::Exact(m) => m.to_complex64(),
            HermitianMatrix::Float(m) => m.clone(),
        }
    }

    /// Converts to the requested mode; float entries are rationalized on the
    /// way to exact mode.
    pub fn with_mode(&self, mode: Mode) -> Self {
        match (self, mode) {
            (HermitianMatrix::Exact(_), Mode::Exact) | (HermitianMatrix::Float(_), Mode::Float) => self.clone(),
            (HermitianMatrix::Exact(m), Mode::Float) => HermitianMatrix::Float(m.to_complex64()),
            (HermitianMatrix::Float(m), Mode::Exact) => {
                // upper triangle is authoritative so the result is exactly Hermitian
                let q = Matrix::from_fn(m.n(), |i, j| {
                    let z = if i <= j { m[(i, j)] } else { m[(j, i)].conj() };
                    let im = if i == j { 0.0 } else { z.im };
                    GaussRational::new(rationalize(z.re), rationalize(im))
                });
                HermitianMatrix::Exact(q)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            HermitianMatrix::Exact(m) => {
                let entries: Vec<Value> = m
                    .rows()
                    .map(|row| {
                        row.iter()
                            .map(|z| json!([format_rational(&z.re), format_rational(&z.im)]))
                            .collect()
                    })
                    .collect();
                json!({"n": m.n(), "mode": "exact", "entries": entries})
            }
            HermitianMatrix::Float(m) => {
                let entries: Vec<Value> = m
                    .rows()
                    .map(|row| row.iter().map(|z| json!([z.re, z.im])).collect())
                    .collect();
                json!({"n": m.n(), "mode": "float", "entries": entries})
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let err = |msg: &str| Error::Parse(msg.to_string());
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| err("missing integer field \"n\""))? as usize;
        let mode = match v.get("mode").and_then(Value::as_str).unwrap_or("exact") {
            "exact" => Mode::Exact,
            "float" => Mode::Float,
            other => return Err(err(&format!("unknown mode {other:?}"))),
        };
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing array field \"entries\""))?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_array().ok_or_else(|| err("matrix row must be an array"))?;
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for cell in row {
                cells.push(parse_cell(cell)?);
            }
        }
        match mode {
            Mode::Exact => {
                let data = cells
                    .into_iter()
                    .map(|(re, im)| Ok(GaussRational::new(exact_part(&re)?, exact_part(&im)?)))
                    .collect::<Result<Vec<_>>>()?;
                HermitianMatrix::exact(Matrix::new(n, data)?)
            }
            Mode::Float => {
                let data = cells
                    .into_iter()
                    .map(|(re, im)| Ok(Complex64::new(float_part(&re)?, float_part(&im)?)))
                    .collect::<Result<Vec<_>>>()?;
                HermitianMatrix::float(Matrix::new(n, data)?)
            }
        }
    }
}

/// A cell is `[re, im]`, or a bare real value.
fn parse_cell(cell: &Value) -> Result<(Value, Value)> {
    match cell {
        Value::Array(parts) if parts.len() == 2 => Ok((parts[0].clone(), parts[1].clone())),
        Value::Array(_) => Err(Error::Parse("complex entry must be [re, im]".into())),
        other => Ok((other.clone(), Value::from(0))),
    }
}

fn exact_part(v: &Value) -> Result<num_rational::BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(x) => parse_rational(&x.to_string()),
        _ => Err(Error::Parse(format!("expected a number or string, got {v}"))),
    }
}

fn float_part(v: &Value) -> Result<f64> {
    match v {
        Value::Number(x) => x.as_f64().ok_or_else(|| Error::Parse(format!("bad number {x}"))),
        Value::String(s) => Ok(rat_to_f64(&parse_rational(s)?)),
        _ => Err(Error::Parse(format!("expected a number or string, got {v}"))),
    }
}
