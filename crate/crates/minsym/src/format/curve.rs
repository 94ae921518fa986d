//! Accuracy curves as CSV with header `source,max_length,epoch,accuracy`.
//! Curves without training epochs use epoch 0.

use std::path::Path;

use minsym_core::analysis::EpochCurves;
use minsym_core::AccuracyCurve;
use serde::{Deserialize, Serialize};

use super::create;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub source: String,
    pub max_length: usize,
    pub epoch: u32,
    pub accuracy: f64,
}

pub fn write_curve(curve: &AccuracyCurve, path: &Path, force: bool) -> Result<()> {
    let out = create(path, force)?;
    let mut w = csv::Writer::from_writer(out);
    for (&l, &acc) in curve.points() {
        w.serialize(CurveRow { source: curve.source.clone(), max_length: l, epoch: 0, accuracy: acc })
            .map_err(|e| Error::io(path)(e.into()))?;
    }
    w.flush().map_err(Error::io(path))
}

pub fn read_curves(path: &Path) -> Result<EpochCurves> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::io(path)(e.into()))?;
    let mut curves = EpochCurves::default();
    for row in r.deserialize::<CurveRow>() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::malformed(path, line, e)
        })?;
        if curves.source.is_empty() {
            curves.source = row.source.clone();
        }
        curves.insert(row.max_length, row.epoch, row.accuracy).map_err(|e| Error::malformed(path, 0, e))?;
    }
    Ok(curves)
}
