//! Target files: best known objective values per instance.
//!
//! One instance per line: `id target [reference_bound reference_width]`.
//! Text after `#` is a comment. The optional columns hold previously
//! published bounds and diagram widths for comparison.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Target {
    pub value: i64,
    pub reference_bound: Option<i64>,
    pub reference_width: Option<usize>,
}

pub type Targets = BTreeMap<usize, Target>;

pub fn parse_targets(raw: &str) -> Result<Targets> {
    let mut out = Targets::new();
    let mut offset = 0;
    for (lineno, line) in raw.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        let here = offset;
        offset += fields.len();
        if fields.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::parse(here, format!("line {}: {msg}", lineno + 1));
        if !(fields.len() == 2 || fields.len() == 4) {
            return Err(bad("expected `id target` or `id target bound width`"));
        }
        let id: usize = fields[0].parse().map_err(|_| bad("bad instance id"))?;
        let value: i64 = fields[1].parse().map_err(|_| bad("bad target"))?;
        let (reference_bound, reference_width) = if fields.len() == 4 {
            (
                Some(fields[2].parse().map_err(|_| bad("bad reference bound"))?),
                Some(fields[3].parse().map_err(|_| bad("bad reference width"))?),
            )
        } else {
            (None, None)
        };
        let entry = Target {
            value,
            reference_bound,
            reference_width,
        };
        if out.insert(id, entry).is_some() {
            return Err(bad("duplicate instance id"));
        }
    }
    Ok(out)
}

pub fn read_targets(path: &Path) -> Result<Targets> {
    parse_targets(&fs::read_to_string(path)?)
}
