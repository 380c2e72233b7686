//! JSON form of matrix tuples:
//!
//! ```json
//! {"n": 2, "m": 2, "matrices": [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]}
//! ```
//!
//! Each scalar is a JSON integer or a string `"p/q"`. Canonical output
//! writes integers that fit in `i64` as numbers and everything else as
//! strings.

use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{CoreError, Result};
use crate::matrix::{Matrix, MatrixTuple};
use crate::scalar::{format_scalar, parse_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    pub n: usize,
    pub m: usize,
    pub matrices: Vec<Vec<Vec<Value>>>,
}

fn scalar_to_json(s: &Scalar) -> Value {
    if s.is_integer() {
        if let Some(v) = s.numer().to_i64() {
            return Value::from(v);
        }
    }
    Value::from(format_scalar(s))
}

fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(num) => num
            .as_i64()
            .map(crate::scalar::int)
            .ok_or_else(|| CoreError::InvalidScalar(num.to_string())),
        Value::String(s) => parse_scalar(s),
        other => Err(CoreError::InvalidScalar(other.to_string())),
    }
}

impl TupleFile {
    pub fn from_tuple(a: &MatrixTuple) -> Self {
        TupleFile {
            n: a.n(),
            m: a.m(),
            matrices: a
                .matrices()
                .iter()
                .map(|mat| mat.rows().iter().map(|r| r.iter().map(scalar_to_json).collect()).collect())
                .collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<MatrixTuple> {
        if self.m == 0 || self.n == 0 {
            return Err(CoreError::Malformed("n and m must be positive".into()));
        }
        if self.matrices.len() != self.m {
            return Err(CoreError::Malformed(format!(
                "declared m={} but {} matrices given",
                self.m,
                self.matrices.len()
            )));
        }
        let mut mats = Vec::with_capacity(self.m);
        for (k, rows) in self.matrices.iter().enumerate() {
            if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                return Err(CoreError::Malformed(format!("matrix {} is not {}x{}", k + 1, self.n, self.n)));
            }
            let rows = rows
                .iter()
                .map(|r| r.iter().map(scalar_from_json).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            mats.push(Matrix::from_rows(rows)?);
        }
        MatrixTuple::new(mats)
    }
}

impl Serialize for MatrixTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TupleFile::from_tuple(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        TupleFile::deserialize(deserializer)?.to_tuple().map_err(D::Error::custom)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Value>> = self.rows().iter().map(|r| r.iter().map(scalar_to_json).collect()).collect();
        rows.serialize(serializer)
    }
}

/// Reads one tuple object or an array of them.
pub fn tuples_from_json(text: &str) -> Result<Vec<MatrixTuple>> {
    let value: Value = serde_json::from_str(text).map_err(|e| CoreError::Malformed(e.to_string()))?;
    let files: Vec<TupleFile> = match value {
        Value::Array(items) => items
            .into_iter()
            .map(serde_json::from_value)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CoreError::Malformed(e.to_string()))?,
        other => vec![serde_json::from_value(other).map_err(|e| CoreError::Malformed(e.to_string()))?],
    };
    files.iter().map(TupleFile::to_tuple).collect()
}

pub fn tuple_to_json(a: &MatrixTuple) -> String {
    serde_json::to_string(&TupleFile::from_tuple(a)).expect("tuple files serialize")
}
