//! Type payloads for `realize`.
//!
//! ```json
//! {"constraints": [
//!     {"entries": [0, 5, 201], "bit": 1},
//!     {"canonical": {"level": 1, "vertex": 17}, "bit": 0}
//! ]}
//! ```
//!
//! A thread is either an explicit bond-consistent prefix starting at level 0,
//! or the canonical thread through a vertex of some level.

use anyhow::{bail, Result};
use cantorsat::{Constraint, ThreadPrefix, Tower};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypePayload {
    pub constraints: Vec<ConstraintSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    #[serde(default)]
    pub entries: Option<Vec<usize>>,
    #[serde(default)]
    pub canonical: Option<CanonicalSpec>,
    pub bit: u8,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalSpec {
    pub level: usize,
    pub vertex: usize,
}

impl TypePayload {
    /// Parses and checks the shape of a payload without looking at any tower.
    pub fn parse(text: &str) -> Result<Self> {
        let p: TypePayload = serde_json::from_str(text)?;
        for (i, c) in p.constraints.iter().enumerate() {
            if c.bit > 1 {
                bail!("constraint {i}: bit must be 0 or 1, got {}", c.bit);
            }
            match (&c.entries, &c.canonical) {
                (Some(e), None) if e.is_empty() => bail!("constraint {i}: empty entries"),
                (Some(_), None) | (None, Some(_)) => {}
                _ => bail!("constraint {i}: give exactly one of \"entries\" or \"canonical\""),
            }
        }
        Ok(p)
    }

    pub fn resolve(&self, tower: &Tower) -> Result<Vec<Constraint>> {
        self.constraints
            .iter()
            .map(|c| {
                let thread = match (&c.entries, &c.canonical) {
                    (Some(e), _) => ThreadPrefix::new(e.clone())?,
                    (_, Some(cs)) => tower.canonical_thread(cs.level, cs.vertex)?,
                    _ => unreachable!("checked in parse"),
                };
                Ok(Constraint::new(thread, c.bit == 1))
            })
            .collect()
    }
}
