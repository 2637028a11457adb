use thiserror::Error;

/// Errors raised anywhere in the compiler, simulator or checker.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse Pauli literal {literal:?}: {reason}")]
    PauliParse { literal: String, reason: String },

    #[error("qubit count mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid target {target:?} for {gate} on {n_qubits} qubits")]
    InvalidTarget {
        gate: String,
        target: Vec<usize>,
        n_qubits: usize,
    },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("no starting element acting as {desired} on qubit {qubit}")]
    NoStartingElement { qubit: usize, desired: char },

    #[error("segment {label}: interpolation endpoints must be Hermitian Pauli sums that anticommute")]
    Endpoints { label: String },

    #[error("segment {label}: eigenspace degeneracy broken (spread {spread:.3e})")]
    DegeneracyBroken { label: String, spread: f64 },

    #[error("segment {label}: level crossing or gap closing near s = {at:.4}")]
    GapClosed { label: String, at: f64 },

    #[error("transport did not converge: change {change:.3e} at {steps} steps")]
    NotConverged { change: f64, steps: usize },

    #[error("diabatic error {delta:.3e} too large to extract a geometric part")]
    TooDiabatic { delta: f64 },

    #[error("{what} needs {qubits} qubits, limit is {limit}")]
    DenseLimit {
        what: String,
        qubits: usize,
        limit: usize,
    },

    #[error("Hamiltonian weight {weight} exceeds budget {budget} in segment {label}")]
    WeightBudget {
        label: String,
        weight: usize,
        budget: usize,
    },

    #[error("invalid frame path: {0}")]
    InvalidPath(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
