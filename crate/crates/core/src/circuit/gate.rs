// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use ndarray::{array, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CircuitError;

/// Every gate the IR understands.
///
/// `Cx`, `Id`, `Rz`, `Sx` and `X` form the hardware basis; the rest are
/// lowered by [`crate::compiler::decompose_to_basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    X,
    Sx,
    Rz,
    Id,
    H,
    Cx,
    Swap,
    Crz,
    Crx,
    Cry,
    Cp,
    Rzz,
}

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::X,
        GateKind::Sx,
        GateKind::Rz,
        GateKind::Id,
        GateKind::H,
        GateKind::Cx,
        GateKind::Swap,
        GateKind::Crz,
        GateKind::Crx,
        GateKind::Cry,
        GateKind::Cp,
        GateKind::Rzz,
    ];

    /// Number of qubit operands.
    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::Sx | GateKind::Rz | GateKind::Id | GateKind::H => 1,
            _ => 2,
        }
    }

    /// Whether the gate carries a rotation angle.
    pub fn is_parametric(self) -> bool {
        matches!(
            self,
            GateKind::Rz
                | GateKind::Crz
                | GateKind::Crx
                | GateKind::Cry
                | GateKind::Cp
                | GateKind::Rzz
        )
    }

    /// Parametric two-qubit gates, the only ones the router may drop.
    pub fn is_prunable(self) -> bool {
        self.is_parametric() && self.arity() == 2
    }

    /// Member of the `{CX, ID, RZ, SX, X}` hardware basis.
    pub fn is_basis(self) -> bool {
        matches!(
            self,
            GateKind::Cx | GateKind::Id | GateKind::Rz | GateKind::Sx | GateKind::X
        )
    }

    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Sx => "sx",
            GateKind::Rz => "rz",
            GateKind::Id => "id",
            GateKind::H => "h",
            GateKind::Cx => "cx",
            GateKind::Swap => "swap",
            GateKind::Crz => "crz",
            GateKind::Crx => "crx",
            GateKind::Cry => "cry",
            GateKind::Cp => "cp",
            GateKind::Rzz => "rzz",
        }
    }

    /// Looks up an OpenQASM gate name. `cu1` is accepted as an alias of `cp`.
    pub fn from_qasm_name(name: &str) -> Option<GateKind> {
        let kind = match name {
            "x" => GateKind::X,
            "sx" => GateKind::Sx,
            "rz" => GateKind::Rz,
            "id" => GateKind::Id,
            "h" => GateKind::H,
            "cx" => GateKind::Cx,
            "swap" => GateKind::Swap,
            "crz" => GateKind::Crz,
            "crx" => GateKind::Crx,
            "cry" => GateKind::Cry,
            "cp" | "cu1" => GateKind::Cp,
            "rzz" => GateKind::Rzz,
            _ => return None,
        };
        Some(kind)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.qasm_name())
    }
}

/// A single gate application.
///
/// For controlled kinds `qubits()[0]` is the control and `qubits()[1]` the
/// target. Angles are stored in raw radians, never normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    qubits: [usize; 2],
    angle: Option<f64>,
}

impl Gate {
    /// Builds a gate, checking operand count, operand distinctness and that an
    /// angle is present exactly for parametric kinds. Width is checked when
    /// the gate is pushed into a [`super::Circuit`].
    pub fn new(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<Gate, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::WrongArity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(CircuitError::DuplicateQubit { kind, qubit: qubits[0] });
        }
        match (kind.is_parametric(), angle) {
            (true, None) => return Err(CircuitError::MissingAngle(kind)),
            (false, Some(_)) => return Err(CircuitError::UnexpectedAngle(kind)),
            (true, Some(theta)) if !theta.is_finite() => {
                return Err(CircuitError::NonFiniteAngle(kind))
            }
            _ => {}
        }
        let mut packed = [0; 2];
        packed[..qubits.len()].copy_from_slice(qubits);
        Ok(Gate { kind, qubits: packed, angle })
    }

    fn fixed1(kind: GateKind, q: usize) -> Gate {
        Gate { kind, qubits: [q, 0], angle: None }
    }

    fn param1(kind: GateKind, theta: f64, q: usize) -> Gate {
        Gate::new(kind, &[q], Some(theta)).expect("invalid gate")
    }

    fn two(kind: GateKind, a: usize, b: usize, angle: Option<f64>) -> Gate {
        Gate::new(kind, &[a, b], angle).expect("invalid gate")
    }

    pub fn x(q: usize) -> Gate {
        Gate::fixed1(GateKind::X, q)
    }

    pub fn sx(q: usize) -> Gate {
        Gate::fixed1(GateKind::Sx, q)
    }

    pub fn id(q: usize) -> Gate {
        Gate::fixed1(GateKind::Id, q)
    }

    pub fn h(q: usize) -> Gate {
        Gate::fixed1(GateKind::H, q)
    }

    /// # Panics
    /// The convenience constructors below panic on a non-finite angle or on
    /// identical operands; use [`Gate::new`] for fallible construction.
    pub fn rz(theta: f64, q: usize) -> Gate {
        Gate::param1(GateKind::Rz, theta, q)
    }

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cx, control, target, None)
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b, None)
    }

    pub fn crz(theta: f64, control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Crz, control, target, Some(theta))
    }

    pub fn crx(theta: f64, control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Crx, control, target, Some(theta))
    }

    pub fn cry(theta: f64, control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cry, control, target, Some(theta))
    }

    pub fn cp(theta: f64, control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cp, control, target, Some(theta))
    }

    pub fn rzz(theta: f64, a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Rzz, a, b, Some(theta))
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    /// Same gate with operands relabelled through `map`.
    pub fn remap(&self, mut map: impl FnMut(usize) -> usize) -> Gate {
        let mut g = *self;
        for q in &mut g.qubits[..self.kind.arity()] {
            *q = map(*q);
        }
        g
    }

    /// Gates implementing the inverse, in program order. Every kind inverts to
    /// itself with a negated angle except `SX`, whose inverse is `SX·X`.
    pub fn inverse_sequence(&self) -> Vec<Gate> {
        match self.kind {
            // SX² = X, so SX† = SX³.
            GateKind::Sx => vec![Gate::sx(self.qubits[0]), Gate::x(self.qubits[0])],
            _ => {
                let mut g = *self;
                g.angle = self.angle.map(|t| -t);
                vec![g]
            }
        }
    }

    /// Exact unitary of this gate.
    ///
    /// Two-qubit matrices are indexed by `2·b0 + b1`, where `b0` is the bit of
    /// `qubits()[0]` (the control) and `b1` the bit of `qubits()[1]`.
    pub fn unitary(&self) -> Array2<Complex64> {
        gate_unitary(self)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rz_matrix(theta: f64) -> Array2<Complex64> {
    let half = theta / 2.0;
    array![
        [Complex64::from_polar(1.0, -half), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, half)]
    ]
}

fn rx_matrix(theta: f64) -> Array2<Complex64> {
    let (s, co) = (theta / 2.0).sin_cos();
    array![[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

fn ry_matrix(theta: f64) -> Array2<Complex64> {
    let (s, co) = (theta / 2.0).sin_cos();
    array![[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

fn controlled(block: Array2<Complex64>) -> Array2<Complex64> {
    let mut m = Array2::<Complex64>::eye(4);
    for r in 0..2 {
        for col in 0..2 {
            m[[2 + r, 2 + col]] = block[[r, col]];
        }
    }
    m
}

/// Exact unitary for `gate` (2×2 or 4×4), see [`Gate::unitary`] for the
/// two-qubit index convention.
pub fn gate_unitary(gate: &Gate) -> Array2<Complex64> {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let theta = gate.angle.unwrap_or(0.0);
    match gate.kind {
        GateKind::X => array![[zero, one], [one, zero]],
        GateKind::Sx => array![[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::Rz => rz_matrix(theta),
        GateKind::Id => Array2::eye(2),
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            array![[h, h], [h, -h]]
        }
        GateKind::Cx => controlled(array![[zero, one], [one, zero]]),
        GateKind::Swap => array![
            [one, zero, zero, zero],
            [zero, zero, one, zero],
            [zero, one, zero, zero],
            [zero, zero, zero, one]
        ],
        GateKind::Crz => controlled(rz_matrix(theta)),
        GateKind::Crx => controlled(rx_matrix(theta)),
        GateKind::Cry => controlled(ry_matrix(theta)),
        GateKind::Cp => controlled(array![[one, zero], [zero, Complex64::from_polar(1.0, theta)]]),
        GateKind::Rzz => {
            let a = Complex64::from_polar(1.0, -theta / 2.0);
            let b = Complex64::from_polar(1.0, theta / 2.0);
            Array2::from_diag(&ndarray::arr1(&[a, b, b, a]))
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(theta) = self.angle {
            write!(f, "({theta:?})")?;
        }
        let qs: Vec<String> = self.qubits().iter().map(|q| format!("q[{q}]")).collect();
        write!(f, " {}", qs.join(","))
    }
}
