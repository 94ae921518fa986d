//! Episode message logs: one JSON object per line.
//!
//! ```text
//! {"instance_id":17,"max_length":2,"symbols":[0,7],"chosen":5,"success":true}
//! ```
//! `chosen` is `null` when no candidate survived the message.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use minsym_core::EpisodeRecord;

use super::create;
use crate::error::{Error, Result};

pub fn write_message_log<'a>(
    records: impl IntoIterator<Item = &'a EpisodeRecord>,
    path: &Path,
    force: bool,
) -> Result<()> {
    let mut out = create(path, force)?;
    for rec in records {
        serde_json::to_writer(&mut out, rec).map_err(|e| Error::io(path)(e.into()))?;
        out.write_all(b"\n").map_err(Error::io(path))?;
    }
    out.flush().map_err(Error::io(path))
}

pub fn read_message_log(path: &Path) -> Result<Vec<EpisodeRecord>> {
    let file = File::open(path).map_err(Error::io(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(Error::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::malformed(path, i + 1, e))?);
    }
    Ok(out)
}
