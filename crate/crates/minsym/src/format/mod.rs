//! On-disk formats. See `FORMATS.md` at the repository root for the
//! byte-level description.

pub mod curve;
pub mod dataset;
pub mod instance;
pub mod log;
pub mod onehot;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use crate::error::{Error, Result};

/// Version written to every manifest and header.
pub const FORMAT_VERSION: u32 = 1;

pub(crate) fn create(path: &Path, force: bool) -> Result<BufWriter<File>> {
    if path.exists() && !force {
        return Err(Error::Exists(path.to_path_buf()));
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(Error::io(dir))?;
    }
    File::create(path).map(BufWriter::new).map_err(Error::io(path))
}

pub(crate) fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::Version { found, supported: FORMAT_VERSION });
    }
    Ok(())
}
