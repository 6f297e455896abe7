//! Boolean / threshold circuit IR.
//!
//! A [`Circuit`] is a topologically ordered gate list: every gate reads only
//! gates that precede it. Size counts every gate except INPUT and CONST.
//! Depth is the longest path from an INPUT/CONST gate to the output, counting
//! each non-input gate (NOT included) as one level.

mod compile;
mod formula;

pub use compile::{
    bounded_fanin_gadget_depth, compile_tree_to_bounded_fanin, compile_tree_to_threshold,
};
pub use formula::{
    build_alternating_formula, default_branching, lift_constants, rewrite_andor_to_maj3,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GateKind {
    Input { slot: usize },
    Const { value: bool },
    Not,
    And,
    Or,
    /// Fires iff `Σ weights[i]·inputs[i] ≥ theta`.
    Threshold { weights: Vec<i64>, theta: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    #[serde(flatten)]
    pub kind: GateKind,
    #[serde(default)]
    pub inputs: Vec<usize>,
}

impl Gate {
    pub fn input(slot: usize) -> Self {
        Gate {
            kind: GateKind::Input { slot },
            inputs: Vec::new(),
        }
    }

    pub fn constant(value: bool) -> Self {
        Gate {
            kind: GateKind::Const { value },
            inputs: Vec::new(),
        }
    }

    pub fn not(a: usize) -> Self {
        Gate {
            kind: GateKind::Not,
            inputs: vec![a],
        }
    }

    pub fn and(inputs: Vec<usize>) -> Self {
        Gate {
            kind: GateKind::And,
            inputs,
        }
    }

    pub fn or(inputs: Vec<usize>) -> Self {
        Gate {
            kind: GateKind::Or,
            inputs,
        }
    }

    pub fn threshold(inputs: Vec<usize>, weights: Vec<i64>, theta: i64) -> Self {
        Gate {
            kind: GateKind::Threshold { weights, theta },
            inputs,
        }
    }

    /// INPUT and CONST gates source values; they add no depth or size.
    pub fn is_source(&self) -> bool {
        matches!(self.kind, GateKind::Input { .. } | GateKind::Const { .. })
    }

    fn check(&self, id: usize, n_inputs: usize) -> Result<()> {
        let fanin = self.inputs.len();
        let err = |msg: String| Err(Error::Circuit(format!("gate {id}: {msg}")));
        match &self.kind {
            GateKind::Input { slot } => {
                if *slot >= n_inputs {
                    return err(format!("slot {slot} >= n_inputs {n_inputs}"));
                }
                if fanin != 0 {
                    return err("INPUT gate with inputs".into());
                }
            }
            GateKind::Const { .. } => {
                if fanin != 0 {
                    return err("CONST gate with inputs".into());
                }
            }
            GateKind::Not => {
                if fanin != 1 {
                    return err(format!("NOT needs exactly one input, got {fanin}"));
                }
            }
            GateKind::And | GateKind::Or => {
                if fanin == 0 {
                    return err("AND/OR with no inputs".into());
                }
            }
            GateKind::Threshold { weights, .. } => {
                if weights.len() != fanin {
                    return err(format!("{} weights for fanin {fanin}", weights.len()));
                }
            }
        }
        for &i in &self.inputs {
            if i >= id {
                return err(format!(
                    "input {i} does not precede the gate (dangling or cyclic reference)"
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub size: usize,
    pub depth: usize,
}

/// A validated, immutable circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitDocument", into = "CircuitDocument")]
pub struct Circuit {
    gates: Vec<Gate>,
    output: usize,
    n_inputs: usize,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>, output: usize, n_inputs: usize) -> Result<Self> {
        for (id, g) in gates.iter().enumerate() {
            g.check(id, n_inputs)?;
        }
        if output >= gates.len() {
            return Err(Error::Circuit(format!(
                "output {output} out of range ({} gates)",
                gates.len()
            )));
        }
        Ok(Circuit {
            gates,
            output,
            n_inputs,
        })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// Copy with gate `id` replaced, revalidated.
    pub fn with_gate(&self, id: usize, gate: Gate) -> Result<Self> {
        let mut gates = self.gates.clone();
        *gates
            .get_mut(id)
            .ok_or(Error::Index { index: id, len: self.gates.len() })? = gate;
        Circuit::new(gates, self.output, self.n_inputs)
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n_inputs {
            return Err(Error::Length {
                expected: self.n_inputs,
                got: x.len(),
            });
        }
        let mut val = vec![false; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            val[id] = match &g.kind {
                GateKind::Input { slot } => x[*slot],
                GateKind::Const { value } => *value,
                GateKind::Not => !val[g.inputs[0]],
                GateKind::And => g.inputs.iter().all(|&i| val[i]),
                GateKind::Or => g.inputs.iter().any(|&i| val[i]),
                GateKind::Threshold { weights, theta } => {
                    let s: i64 = g
                        .inputs
                        .iter()
                        .zip(weights)
                        .filter(|(&i, _)| val[i])
                        .map(|(_, &w)| w)
                        .sum();
                    s >= *theta
                }
            };
        }
        Ok(val[self.output])
    }

    /// Longest-path depth and non-source gate count, always recomputed.
    pub fn metrics(&self) -> CircuitMetrics {
        let mut depth = vec![0usize; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            if !g.is_source() {
                depth[id] = 1 + g.inputs.iter().map(|&i| depth[i]).max().unwrap_or(0);
            }
        }
        CircuitMetrics {
            size: self.gates.iter().filter(|g| !g.is_source()).count(),
            depth: depth[self.output],
        }
    }

    pub fn count_kind(&self, pred: impl Fn(&GateKind) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(&g.kind)).count()
    }

    /// Largest fanin over AND/OR gates (0 if there are none).
    pub fn max_andor_fanin(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.kind, GateKind::And | GateKind::Or))
            .map(|g| g.inputs.len())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn evaluate_circuit(c: &Circuit, x: &[bool]) -> Result<bool> {
    c.evaluate(x)
}

pub fn circuit_metrics(c: &Circuit) -> CircuitMetrics {
    c.metrics()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneViolation {
    pub gate: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneReport {
    pub monotone: bool,
    pub violation: Option<MonotoneViolation>,
}

/// Syntactic monotonicity: no NOT gate and no negative threshold weight.
pub fn check_monotone(c: &Circuit) -> MonotoneReport {
    for (id, g) in c.gates.iter().enumerate() {
        let reason = match &g.kind {
            GateKind::Not => Some("NOT gate".to_string()),
            GateKind::Threshold { weights, .. } => weights
                .iter()
                .position(|&w| w < 0)
                .map(|p| format!("negative threshold weight {} at position {p}", weights[p])),
            _ => None,
        };
        if let Some(reason) = reason {
            return MonotoneReport {
                monotone: false,
                violation: Some(MonotoneViolation { gate: id, reason }),
            };
        }
    }
    MonotoneReport {
        monotone: true,
        violation: None,
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitDocument {
    n_inputs: usize,
    output: usize,
    gates: Vec<Gate>,
    /// Written for readers; ignored and recomputed on load.
    #[serde(default, skip_deserializing)]
    metrics: Option<CircuitMetrics>,
}

impl From<Circuit> for CircuitDocument {
    fn from(c: Circuit) -> Self {
        let metrics = Some(c.metrics());
        CircuitDocument {
            n_inputs: c.n_inputs,
            output: c.output,
            gates: c.gates,
            metrics,
        }
    }
}

impl TryFrom<CircuitDocument> for Circuit {
    type Error = Error;

    fn try_from(doc: CircuitDocument) -> Result<Self> {
        Circuit::new(doc.gates, doc.output, doc.n_inputs)
    }
}
