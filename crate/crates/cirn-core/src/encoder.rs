//! The class-independent state: a 20x5 matrix with one row
//! `[h, s, x_c, y_c, area]` per detection, ranked by similarity to the
//! navigation target.
//!
//! No absolute class identity survives encoding — a detection contributes
//! only whether it *is* the target, how similar its class is to the
//! target, and where its box sits. Renaming every class while preserving
//! similarity-to-target leaves the output bit-identical.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::fmt;
use ndarray::Array2;

use crate::embed::{EmbedError, EmbeddingTable, TargetSimilarities};
use crate::sim::Detection;

pub const STATE_ROWS: usize = 20;
pub const STATE_COLS: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum EncodeError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

/// The 20x5 state matrix. Nonzero rows are sorted by `s` descending and
/// any all-zero padding forms a contiguous suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMatrix(Array2<f64>);

impl StateMatrix {
    pub fn zeros() -> Self {
        Self(Array2::zeros((STATE_ROWS, STATE_COLS)))
    }

    /// Wrap an existing 20x5 array; panics on any other shape.
    pub fn from_array(rows: Array2<f64>) -> Self {
        assert_eq!(rows.dim(), (STATE_ROWS, STATE_COLS), "state must be 20x5");
        Self(rows)
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn row(&self, i: usize) -> [f64; 5] {
        let r = self.0.row(i);
        [r[0], r[1], r[2], r[3], r[4]]
    }

    /// Bit-exact equality, the determinism currency of the encoder tests.
    pub fn bits_eq(&self, other: &Self) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl fmt::Display for StateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3}  {:>3} {:>9} {:>9} {:>9} {:>9}", "row", "h", "s", "x_c", "y_c", "area")?;
        for (i, row) in self.0.rows().into_iter().enumerate() {
            writeln!(
                f,
                "{:>3}  {:>3} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                i, row[0] as i64, row[1], row[2], row[3], row[4]
            )?;
        }
        Ok(())
    }
}

/// One detection scored against the target: the five state columns.
#[derive(Debug, Clone, Copy)]
struct ScoredRow {
    h: f64,
    s: f64,
    x_c: f64,
    y_c: f64,
    area: f64,
}

/// Sort key: s descending, then area descending, then x_c ascending, then
/// y_c ascending. The sort is stable, so rows whose whole key ties keep
/// detection-list order.
fn rank(a: &ScoredRow, b: &ScoredRow) -> core::cmp::Ordering {
    b.s.partial_cmp(&a.s)
        .unwrap()
        .then(b.area.partial_cmp(&a.area).unwrap())
        .then(a.x_c.partial_cmp(&b.x_c).unwrap())
        .then(a.y_c.partial_cmp(&b.y_c).unwrap())
}

/// Encode against precomputed similarity-to-target values (the per-step
/// hot path).
pub fn encode_with(
    detections: &[Detection],
    sims: &TargetSimilarities,
) -> Result<StateMatrix, EncodeError> {
    let mut rows = Vec::with_capacity(detections.len());
    for det in detections {
        let s = sims
            .get(&det.class_name)
            .ok_or_else(|| EncodeError::UnknownClass(det.class_name.clone()))?;
        rows.push(ScoredRow {
            h: if sims.is_target(&det.class_name) { 1.0 } else { 0.0 },
            s,
            x_c: det.x_c,
            y_c: det.y_c,
            area: det.area,
        });
    }
    rows.sort_by(rank);
    rows.truncate(STATE_ROWS);
    let mut state = StateMatrix::zeros();
    for (i, row) in rows.iter().enumerate() {
        let mut out = state.0.row_mut(i);
        out[0] = row.h;
        out[1] = row.s;
        out[2] = row.x_c;
        out[3] = row.y_c;
        out[4] = row.area;
    }
    Ok(state)
}

/// Encode detections for a target using the embedding table directly.
/// Every detection class and the target must resolve in the table.
pub fn encode(
    detections: &[Detection],
    target: &str,
    table: &EmbeddingTable,
) -> Result<StateMatrix, EncodeError> {
    let classes: Vec<&str> = detections.iter().map(|d| d.class_name.as_str()).collect();
    let sims = table
        .similarities_to(target, classes)
        .map_err(|err| match err {
            EmbedError::UnknownClass(name) => EncodeError::UnknownClass(name),
            other => EncodeError::UnknownClass(other.to_string()),
        })?;
    encode_with(detections, &sims)
}
