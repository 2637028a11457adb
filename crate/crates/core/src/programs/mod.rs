//! Compiled gate programs: ordered interpolation segments plus recorded
//! phase corrections, with the unitary they are meant to realize.

pub mod audit;
pub mod builder;
pub mod catalog;
pub mod toffoli;
pub mod verify;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::TrackedGroup;
use crate::error::Result;
use crate::evolution::{exact_adiabatic_transport, LocalUnitary, SegmentHamiltonian};
use crate::gates::Gate;
use crate::linalg::CMatrix;

pub use audit::{segment_weight, weight_audit, SegmentWeight, WeightAudit};
pub use builder::{compile, CnotForm, CompileOptions, GateSpec, ProgramBuilder};
pub use verify::{
    check_group_consistency, geometric_part, holonomy_cross_check, verify, verify_finite_time, FiniteTimeReport,
    Verification, VerifyMethod, VerifyOptions,
};

/// A gate applied after (or before) the geometric segments to remove a
/// known residual phase, e.g. `S^dagger` on a C-NOT control.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCorrection {
    pub gate: Gate,
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum ProgramStep {
    Segment(SegmentHamiltonian),
    Correction(PhaseCorrection),
}

/// One factor of the intended unitary; factors apply in list order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetFactor {
    pub qubits: Vec<usize>,
    #[serde(with = "complex_matrix")]
    pub matrix: CMatrix,
}

impl TargetFactor {
    pub fn local(&self) -> LocalUnitary {
        LocalUnitary {
            qubits: self.qubits.clone(),
            matrix: self.matrix.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathProgram {
    pub name: String,
    pub n_qubits: usize,
    pub steps: Vec<ProgramStep>,
    pub target: Vec<TargetFactor>,
    pub group_before: TrackedGroup,
    pub group_after: TrackedGroup,
}

impl PathProgram {
    pub fn empty(name: &str, group: &TrackedGroup) -> Self {
        PathProgram {
            name: name.to_string(),
            n_qubits: group.n_qubits,
            steps: Vec::new(),
            target: Vec::new(),
            group_before: group.clone(),
            group_after: group.clone(),
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = &SegmentHamiltonian> {
        self.steps.iter().filter_map(|s| match s {
            ProgramStep::Segment(seg) => Some(seg),
            ProgramStep::Correction(_) => None,
        })
    }

    pub fn phase_corrections(&self) -> impl Iterator<Item = &PhaseCorrection> {
        self.steps.iter().filter_map(|s| match s {
            ProgramStep::Correction(c) => Some(c),
            ProgramStep::Segment(_) => None,
        })
    }

    /// Every qubit touched by a step or by the target.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .steps
            .iter()
            .flat_map(|st| match st {
                ProgramStep::Segment(seg) => seg.support(),
                ProgramStep::Correction(c) => c.qubits.clone(),
            })
            .chain(self.target.iter().flat_map(|t| t.qubits.clone()))
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Exact adiabatic unitary of every step, in order. Segments are
    /// transported in parallel.
    pub fn realized(&self, with_corrections: bool) -> Result<Vec<LocalUnitary>> {
        self.steps
            .par_iter()
            .filter(|s| with_corrections || matches!(s, ProgramStep::Segment(_)))
            .map(|s| match s {
                ProgramStep::Segment(seg) => exact_adiabatic_transport(seg),
                ProgramStep::Correction(c) => Ok(LocalUnitary {
                    qubits: c.qubits.clone(),
                    matrix: c.gate.matrix(),
                }),
            })
            .collect()
    }

    pub fn target_factors(&self) -> Vec<LocalUnitary> {
        self.target.iter().map(TargetFactor::local).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: PathProgram = serde_json::from_str(text)?;
        for seg in p.segments() {
            seg.validate()?;
        }
        Ok(p)
    }
}

/// Complex matrices as row-major lists of `[re, im]` pairs.
pub mod complex_matrix {
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::{c, CMatrix};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(D::Error::custom("ragged matrix"));
        }
        Ok(CMatrix::from_fn(n, m, |r, k| c(rows[r][k][0], rows[r][k][1])))
    }
}
