//! Named target gates and their matrices.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, C64};
use crate::pauli::CliffordGate;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", content = "angle")]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    /// `diag(1, e^{i angle})`.
    Phase(f64),
    Cnot,
    Toffoli,
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::Cnot => 2,
            Gate::Toffoli => 3,
            _ => 1,
        }
    }

    pub fn clifford(self) -> Option<CliffordGate> {
        match self {
            Gate::X => Some(CliffordGate::X),
            Gate::Y => Some(CliffordGate::Y),
            Gate::Z => Some(CliffordGate::Z),
            Gate::H => Some(CliffordGate::H),
            Gate::S => Some(CliffordGate::S),
            Gate::Sdg => Some(CliffordGate::Sdg),
            Gate::Cnot => Some(CliffordGate::Cnot),
            _ => None,
        }
    }

    /// Diagonal phase angle for `S`, `T`, their inverses and `Phase`.
    pub fn phase_angle(self) -> Option<f64> {
        match self {
            Gate::I => Some(0.0),
            Gate::Z => Some(PI),
            Gate::S => Some(PI / 2.0),
            Gate::Sdg => Some(-PI / 2.0),
            Gate::T => Some(FRAC_PI_4),
            Gate::Tdg => Some(-FRAC_PI_4),
            Gate::Phase(a) => Some(a),
            _ => None,
        }
    }

    pub fn inverse(self) -> Gate {
        match self {
            Gate::S => Gate::Sdg,
            Gate::Sdg => Gate::S,
            Gate::T => Gate::Tdg,
            Gate::Tdg => Gate::T,
            Gate::Phase(a) => Gate::Phase(-a),
            g => g,
        }
    }

    pub fn matrix(self) -> CMatrix {
        if let Some(cl) = self.clifford() {
            return cl.matrix();
        }
        match self {
            Gate::I => crate::linalg::eye(2),
            Gate::Toffoli => {
                let mut m = crate::linalg::eye(8);
                m[(6, 6)] = C64::new(0.0, 0.0);
                m[(7, 7)] = C64::new(0.0, 0.0);
                m[(6, 7)] = c(1.0, 0.0);
                m[(7, 6)] = c(1.0, 0.0);
                m
            }
            g => {
                let a = g.phase_angle().expect("diagonal gate");
                let mut m = crate::linalg::eye(2);
                m[(1, 1)] = C64::from_polar(1.0, a);
                m
            }
        }
    }

    pub fn name(self) -> String {
        match self {
            Gate::Phase(a) => format!("P({a})"),
            g => format!("{g:?}").to_uppercase(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gate> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "i" | "id" => Gate::I,
            "x" => Gate::X,
            "y" => Gate::Y,
            "z" => Gate::Z,
            "h" => Gate::H,
            "s" => Gate::S,
            "sdg" | "s-dag" => Gate::Sdg,
            "t" | "pi8" => Gate::T,
            "tdg" | "t-dag" => Gate::Tdg,
            "cnot" | "cx" => Gate::Cnot,
            "toffoli" | "ccx" => Gate::Toffoli,
            other => return Err(Error::Unsupported(format!("gate {other:?}"))),
        })
    }
}
