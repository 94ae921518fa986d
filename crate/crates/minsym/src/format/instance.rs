//! Single-instance JSON input for `minsym solve`.

use std::fs;
use std::path::Path;

use minsym_core::{AttributeSpace, GameInstance, ObjectVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    /// Values per attribute. Defaults to the largest value present plus one
    /// (at least 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_values: Option<usize>,
    pub target_index: usize,
    pub objects: Vec<Vec<u16>>,
}

impl InstanceFile {
    pub fn to_instance(&self) -> minsym_core::Result<GameInstance> {
        let num_attributes = self.objects.first().map_or(0, Vec::len);
        let observed = self.objects.iter().flatten().map(|&v| v as usize + 1).max().unwrap_or(0);
        let space = AttributeSpace::new(num_attributes, self.num_values.unwrap_or(observed.max(2)))?;
        let objects = self
            .objects
            .iter()
            .map(|o| ObjectVector::new(&space, o.clone()))
            .collect::<minsym_core::Result<Vec<_>>>()?;
        GameInstance::new(space, objects, self.target_index)
    }
}

pub fn read_instance(path: &Path) -> Result<GameInstance> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|e| Error::malformed(path, e.line(), e))?;
    file.to_instance().map_err(|e| Error::malformed(path, 0, e))
}
