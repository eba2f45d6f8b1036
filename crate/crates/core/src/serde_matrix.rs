//! JSON-friendly representation of complex matrices: a row-major list of
//! rows, each entry a `[re, im]` pair.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::qcore::{CMatrix, QState, C64};

pub type RawMatrix = Vec<Vec<[f64; 2]>>;

pub fn to_raw(m: &CMatrix) -> RawMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn from_raw(rows: &RawMatrix) -> Result<CMatrix, Error> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "row {bad} has {} entries, expected {ncols}",
            rows[bad].len()
        )));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// `serde(with = ...)` adapter for a single matrix.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_raw(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let raw = RawMatrix::deserialize(d)?;
        from_raw(&raw).map_err(serde::de::Error::custom)
    }
}

/// `serde(with = ...)` adapter for a list of matrices.
pub mod matrix_list {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[CMatrix], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(to_raw).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMatrix>, D::Error> {
        let raw = Vec::<RawMatrix>::deserialize(d)?;
        raw.iter()
            .map(from_raw)
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// On-disk form of a [`QState`].
#[derive(Serialize, Deserialize)]
pub struct RawState {
    pub dims: Vec<usize>,
    pub matrix: RawMatrix,
}

impl TryFrom<RawState> for QState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<QState, Error> {
        QState::new(raw.dims, from_raw(&raw.matrix)?)
    }
}

impl From<QState> for RawState {
    fn from(s: QState) -> RawState {
        RawState {
            dims: s.dims().to_vec(),
            matrix: to_raw(s.matrix()),
        }
    }
}
