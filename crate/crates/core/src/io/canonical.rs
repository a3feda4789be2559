//! Canonical JSON instance files.
//!
//! The layout mirrors [`JobInstance`] field for field: `n`, `kind` (one of
//! `TardinessTW`, `CommonDueET`, `PositionDependent`, `StartTimeDependent`,
//! `TspSeqDep`), `p`, and the optional arrays `r`, `d`, `w`, `alpha`, `beta`,
//! `p_pos`, `p_of_start`, `travel`. Job `j` (counting from 1) is stored at
//! array index `j - 1`. Only integers are allowed.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::instance::JobInstance;

pub fn from_json(text: &str) -> Result<JobInstance> {
    let inst: JobInstance = serde_json::from_str(text).map_err(|e| {
        Error::parse(e.column(), format!("line {}: {e}", e.line()))
    })?;
    inst.check()?;
    Ok(inst)
}

pub fn to_json(inst: &JobInstance) -> Result<String> {
    Ok(serde_json::to_string_pretty(inst)?)
}

pub fn read_canonical(path: &Path) -> Result<JobInstance> {
    from_json(&fs::read_to_string(path)?)
}

pub fn write_canonical(inst: &JobInstance, path: &Path) -> Result<()> {
    let mut text = to_json(inst)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
