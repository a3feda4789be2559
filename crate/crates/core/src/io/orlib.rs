//! OR-Library scheduling files.
//!
//! Weighted tardiness files (`wt40.txt`, `wt50.txt`, `wt100.txt`) are a
//! stream of integers: for each instance, `n` durations, then `n` weights,
//! then `n` due dates. There is no header; the instance count is the token
//! count divided by `3n`.
//!
//! Common-due-date files (`sch10.txt` ... `sch200.txt`) start with the
//! instance count; each instance is its job count followed by one
//! `p alpha beta` row per job.

use crate::error::{Error, Result};
use crate::instance::JobInstance;

/// Instances read from one file, keyed by their 1-based position in it.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSet {
    pub name: String,
    pub instances: Vec<(usize, JobInstance)>,
    pub provenance: String,
}

impl InstanceSet {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&JobInstance> {
        self.instances.iter().find(|(i, _)| *i == id).map(|(_, inst)| inst)
    }
}

fn tokens(raw: &str) -> Result<Vec<i64>> {
    raw.split_whitespace()
        .enumerate()
        .map(|(k, tok)| {
            tok.parse::<i64>()
                .map_err(|_| Error::parse(k, format!("expected an integer, found {tok:?}")))
        })
        .collect()
}

pub fn parse_cpw(raw: &str, n: usize, name: &str) -> Result<InstanceSet> {
    if n == 0 {
        return Err(Error::parse(0, "job count must be positive"));
    }
    let toks = tokens(raw)?;
    if toks.is_empty() {
        return Err(Error::parse(0, "file is empty"));
    }
    let per = 3 * n;
    if toks.len() % per != 0 {
        let whole = toks.len() / per * per;
        return Err(Error::parse(
            whole,
            format!(
                "{} tokens is not a multiple of {per} (3 x {n} jobs); trailing partial instance",
                toks.len()
            ),
        ));
    }
    let instances = toks
        .chunks(per)
        .enumerate()
        .map(|(k, chunk)| {
            let inst = JobInstance::tardiness(
                chunk[..n].to_vec(),
                vec![0; n],
                chunk[2 * n..].to_vec(),
                chunk[n..2 * n].to_vec(),
            );
            (k + 1, inst)
        })
        .collect();
    Ok(InstanceSet {
        name: name.to_string(),
        instances,
        provenance: format!(
            "{name}: OR-Library weighted tardiness, {n} jobs; blocks p, w, d per instance; r = 0"
        ),
    })
}

pub fn parse_bf(raw: &str, name: &str) -> Result<InstanceSet> {
    let toks = tokens(raw)?;
    let Some(&count) = toks.first() else {
        return Err(Error::parse(0, "file is empty"));
    };
    if count < 0 {
        return Err(Error::parse(0, "negative instance count"));
    }
    let mut pos = 1;
    let mut instances = Vec::with_capacity(count as usize);
    for id in 1..=count as usize {
        let n = *toks
            .get(pos)
            .ok_or_else(|| Error::parse(pos, format!("instance {id}: missing job count")))?;
        if n <= 0 {
            return Err(Error::parse(pos, format!("instance {id}: job count must be positive")));
        }
        let n = n as usize;
        pos += 1;
        let rows = toks.get(pos..pos + 3 * n).ok_or_else(|| {
            Error::parse(
                toks.len(),
                format!("instance {id}: expected {n} rows of p alpha beta"),
            )
        })?;
        let col = |c: usize| rows.chunks(3).map(|r| r[c]).collect::<Vec<_>>();
        instances.push((id, JobInstance::common_due(col(0), col(1), col(2))));
        pos += 3 * n;
    }
    if pos != toks.len() {
        return Err(Error::parse(
            pos,
            format!("{} tokens left after {count} instances", toks.len() - pos),
        ));
    }
    Ok(InstanceSet {
        name: name.to_string(),
        instances,
        provenance: format!(
            "{name}: OR-Library common due date; count, then n and n rows of p alpha beta; d derived"
        ),
    })
}
