//! Hamiltonian weight audit of compiled programs.

use serde::{Deserialize, Serialize};

use super::PathProgram;
use crate::error::{Error, Result};
use crate::evolution::SegmentHamiltonian;

/// Time fractions at which each segment's Hamiltonian is expanded.
const AUDIT_POINTS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentWeight {
    pub label: String,
    pub weight: usize,
    /// Code blocks the segment acts on.
    pub blocks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightAudit {
    pub program: String,
    pub per_segment: Vec<SegmentWeight>,
    pub max_weight: usize,
    pub max_blocks: usize,
}

impl WeightAudit {
    pub fn check(&self, budget: usize) -> Result<()> {
        match self.per_segment.iter().find(|s| s.weight > budget) {
            Some(s) => Err(Error::WeightBudget {
                label: s.label.clone(),
                weight: s.weight,
                budget,
            }),
            None => Ok(()),
        }
    }
}

/// Largest support of any Pauli term of the instantaneous Hamiltonian,
/// control qubits included.
pub fn segment_weight(seg: &SegmentHamiltonian) -> usize {
    AUDIT_POINTS.iter().map(|&u| seg.expanded(u).weight()).max().unwrap_or(0)
}

pub fn weight_audit(program: &PathProgram) -> WeightAudit {
    let blocks = &program.group_before.blocks;
    let per_segment: Vec<SegmentWeight> = program
        .segments()
        .map(|seg| {
            let mut touched: Vec<usize> = seg.support().iter().filter_map(|&q| blocks.get(q).copied()).collect();
            touched.sort_unstable();
            touched.dedup();
            SegmentWeight {
                label: seg.label.clone(),
                weight: segment_weight(seg),
                blocks: touched.len(),
            }
        })
        .collect();
    WeightAudit {
        program: program.name.clone(),
        max_weight: per_segment.iter().map(|s| s.weight).max().unwrap_or(0),
        max_blocks: per_segment.iter().map(|s| s.blocks).max().unwrap_or(0),
        per_segment,
    }
}
