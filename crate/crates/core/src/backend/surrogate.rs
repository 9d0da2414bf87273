//! Deterministic stand-in for the language model.
//!
//! Reads the Best rows back out of the examples table in the human message
//! and proposes their centroid: numeric cells are the Best mean plus
//! Gaussian jitter (sd = `jitter_frac` of the column range), symbolic cells
//! the Best mode. All randomness comes from the caller's rng.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::markdown::{self, MdTable};
use super::{BackendError, SynthesisBackend, SynthesisRequest, SyntheticRow};
use crate::data::{Cell, Kind};

/// Column of the examples table holding the Best/Rest tag.
pub const CLASS_COLUMN: &str = "class";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateBackend {
    pub jitter_frac: f64,
}

impl Default for SurrogateBackend {
    fn default() -> Self {
        SurrogateBackend { jitter_frac: 0.05 }
    }
}

fn examples_table(human: &str) -> Result<MdTable, BackendError> {
    markdown::tables(human)
        .into_iter()
        .find(|t| t.header.as_ref().is_some_and(|h| h.first().is_some_and(|c| c == CLASS_COLUMN)))
        .ok_or_else(|| BackendError::Prompt("no examples table with a class column".into()))
}

impl SynthesisBackend for SurrogateBackend {
    fn synthesize(&self, req: &SynthesisRequest, rng: &mut ChaCha8Rng) -> Result<SyntheticRow, BackendError> {
        let table = examples_table(&req.human)?;
        let header = table.header.as_ref().expect("examples table has a header");
        let best: Vec<&Vec<String>> = table.rows.iter().filter(|r| r.first().is_some_and(|c| c == "Best")).collect();
        if best.is_empty() {
            return Err(BackendError::Prompt("examples table has no Best rows".into()));
        }
        let mut cells = Vec::with_capacity(req.schema.len());
        for col in &req.schema {
            let idx = header
                .iter()
                .position(|h| *h == col.name)
                .ok_or_else(|| BackendError::Prompt(format!("column `{}` missing from examples", col.name)))?;
            let values = best.iter().map(|r| r.get(idx).map(String::as_str).unwrap_or(""));
            cells.push(match col.kind {
                Kind::Numeric => {
                    let nums: Vec<f64> = values
                        .map(|v| v.parse::<f64>().map_err(|_| BackendError::Prompt(format!("`{v}` in `{}`", col.name))))
                        .collect::<Result<_, _>>()?;
                    let mean = nums.iter().sum::<f64>() / nums.len() as f64;
                    let sd = self.jitter_frac * (col.hi - col.lo);
                    let noise = Normal::new(0.0, sd.max(0.0))
                        .map_err(|e| BackendError::Prompt(e.to_string()))?
                        .sample(rng);
                    Cell::Num(mean + noise)
                }
                Kind::Symbolic => {
                    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
                    for v in values {
                        *counts.entry(v).or_insert(0) += 1;
                    }
                    let top = counts.values().copied().max().unwrap_or(0);
                    let mode = counts.iter().find(|(_, &c)| c == top).map(|(v, _)| v.to_string()).unwrap_or_default();
                    Cell::Sym(mode)
                }
            });
        }
        Ok(SyntheticRow::conform(cells, &req.schema))
    }
}
