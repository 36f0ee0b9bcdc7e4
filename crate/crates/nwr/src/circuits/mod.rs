//! Boolean circuit IR: validation, evaluation, and text serialization.
//!
//! A circuit is a DAG of AND/OR/NOT gates (fan-in at most 2) over named
//! inputs, with an ordered list of outputs that may reference gates or
//! inputs directly. Gate order in the `gates` list is arbitrary; only
//! acyclicity matters.

mod build;
mod parse;

pub use build::{action_bits, bits_for, compile_reduction1_payoff, random_circuit, Builder, Node};
pub use parse::{parse, parse_payoff, serialize, serialize_payoff};

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::And | GateKind::Or => 2,
            GateKind::Not => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub operands: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub name: String,
    pub inputs: Vec<String>,
    pub gates: Vec<Gate>,
    pub outputs: Vec<String>,
}

/// A truth assignment: one bit per circuit input, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn from_bits(bits: &[u8]) -> Self {
        Assignment(bits.iter().map(|&b| b != 0).collect())
    }
}

/// A structural violation found by [`Circuit::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    Arity { gate: String, kind: GateKind, got: usize },
    UndefinedOperand { gate: String, operand: String },
    UndefinedOutput(String),
    Cycle { gate: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate identifier `{id}`"),
            Violation::Arity { gate, kind, got } => write!(
                f,
                "{} arity: gate `{gate}` has {got} operands, expected {}",
                kind.name(),
                kind.arity()
            ),
            Violation::UndefinedOperand { gate, operand } => {
                write!(f, "gate `{gate}` references undefined id `{operand}`")
            }
            Violation::UndefinedOutput(id) => write!(f, "output references undefined id `{id}`"),
            Violation::Cycle { gate } => write!(f, "cycle at {gate}"),
        }
    }
}

impl Circuit {
    /// Gate count |C|.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Checks all structural invariants, returning every violation found.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let mut ids: HashMap<&str, usize> = HashMap::new();
        for (k, inp) in self.inputs.iter().enumerate() {
            if ids.insert(inp.as_str(), k).is_some() {
                violations.push(Violation::DuplicateId(inp.clone()));
            }
        }
        let n = self.inputs.len();
        for (k, g) in self.gates.iter().enumerate() {
            if ids.insert(g.id.as_str(), n + k).is_some() {
                violations.push(Violation::DuplicateId(g.id.clone()));
            }
        }
        for g in &self.gates {
            if g.operands.len() != g.kind.arity() {
                violations.push(Violation::Arity {
                    gate: g.id.clone(),
                    kind: g.kind,
                    got: g.operands.len(),
                });
            }
            for op in &g.operands {
                if !ids.contains_key(op.as_str()) {
                    violations.push(Violation::UndefinedOperand {
                        gate: g.id.clone(),
                        operand: op.clone(),
                    });
                }
            }
        }
        for out in &self.outputs {
            if !ids.contains_key(out.as_str()) {
                violations.push(Violation::UndefinedOutput(out.clone()));
            }
        }
        // Cycle check via Kahn's algorithm over gate-to-gate edges.
        let gate_index: HashMap<&str, usize> =
            self.gates.iter().enumerate().map(|(k, g)| (g.id.as_str(), k)).collect();
        let mut indeg = vec![0usize; self.gates.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (k, g) in self.gates.iter().enumerate() {
            for op in &g.operands {
                if let Some(&j) = gate_index.get(op.as_str()) {
                    indeg[k] += 1;
                    succ[j].push(k);
                }
            }
        }
        let mut queue: Vec<usize> = (0..self.gates.len()).filter(|&k| indeg[k] == 0).collect();
        let mut seen = 0;
        while let Some(k) = queue.pop() {
            seen += 1;
            for &j in &succ[k] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        if seen < self.gates.len() {
            for (k, g) in self.gates.iter().enumerate() {
                if indeg[k] > 0 {
                    violations.push(Violation::Cycle { gate: g.id.clone() });
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Resolves names and topologically orders gates for fast repeated
    /// evaluation. Fails if the circuit does not validate.
    pub fn compile(&self) -> Result<CompiledCircuit> {
        self.validate().map_err(|v| {
            Error::InvalidCircuit(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "))
        })?;
        let n = self.inputs.len();
        let mut ids: HashMap<&str, usize> = HashMap::new();
        for (k, inp) in self.inputs.iter().enumerate() {
            ids.insert(inp.as_str(), k);
        }
        for (k, g) in self.gates.iter().enumerate() {
            ids.insert(g.id.as_str(), n + k);
        }
        // Topological order over gates.
        let gate_index: HashMap<&str, usize> =
            self.gates.iter().enumerate().map(|(k, g)| (g.id.as_str(), k)).collect();
        let mut indeg = vec![0usize; self.gates.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (k, g) in self.gates.iter().enumerate() {
            for op in &g.operands {
                if let Some(&j) = gate_index.get(op.as_str()) {
                    indeg[k] += 1;
                    succ[j].push(k);
                }
            }
        }
        let mut queue: std::collections::VecDeque<usize> =
            (0..self.gates.len()).filter(|&k| indeg[k] == 0).collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(k) = queue.pop_front() {
            order.push(k);
            for &j in &succ[k] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        // Node slots: inputs first, then gates in declaration order.
        let ops = order
            .iter()
            .map(|&k| {
                let g = &self.gates[k];
                let a = ids[g.operands[0].as_str()];
                let b = if g.kind.arity() == 2 { ids[g.operands[1].as_str()] } else { a };
                CompiledOp { kind: g.kind, a, b, slot: n + k }
            })
            .collect();
        let outputs = self.outputs.iter().map(|o| ids[o.as_str()]).collect();
        Ok(CompiledCircuit { num_inputs: n, num_slots: n + self.gates.len(), ops, outputs })
    }

    /// Evaluates the circuit on `assignment`, returning the output bits in
    /// declaration order.
    pub fn eval(&self, assignment: &Assignment) -> Result<Vec<bool>> {
        self.compile()?.eval(assignment)
    }
}

#[derive(Debug, Clone)]
struct CompiledOp {
    kind: GateKind,
    a: usize,
    b: usize,
    slot: usize,
}

/// A name-resolved, topologically ordered circuit.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    num_inputs: usize,
    num_slots: usize,
    ops: Vec<CompiledOp>,
    outputs: Vec<usize>,
}

impl CompiledCircuit {
    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<Vec<bool>> {
        if assignment.0.len() != self.num_inputs {
            return Err(Error::AssignmentLength {
                got: assignment.0.len(),
                want: self.num_inputs,
            });
        }
        let mut slots = vec![false; self.num_slots];
        slots[..self.num_inputs].copy_from_slice(&assignment.0);
        for op in &self.ops {
            slots[op.slot] = match op.kind {
                GateKind::And => slots[op.a] && slots[op.b],
                GateKind::Or => slots[op.a] || slots[op.b],
                GateKind::Not => !slots[op.a],
            };
        }
        Ok(self.outputs.iter().map(|&o| slots[o]).collect())
    }
}

/// A circuit whose outputs encode a rational payoff: one sign bit, then
/// `num_bits` numerator magnitude bits, then `den_bits` denominator bits,
/// both little-endian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffCircuit {
    pub circuit: Circuit,
    pub num_bits: usize,
    pub den_bits: usize,
}

impl PayoffCircuit {
    pub fn new(circuit: Circuit, num_bits: usize, den_bits: usize) -> Result<Self> {
        let want = 1 + num_bits + den_bits;
        if circuit.outputs.len() != want {
            return Err(Error::InvalidInput(format!(
                "payoff circuit `{}` has {} outputs, header requires {want}",
                circuit.name,
                circuit.outputs.len()
            )));
        }
        Ok(PayoffCircuit { circuit, num_bits, den_bits })
    }

    /// Decodes output bits into a (numerator, denominator) pair.
    pub fn decode(&self, bits: &[bool]) -> Result<(i64, i64)> {
        let sign = bits[0];
        let mag = word_value(&bits[1..1 + self.num_bits]);
        let den = word_value(&bits[1 + self.num_bits..]);
        if den == 0 {
            return Err(Error::InvalidInput(format!(
                "payoff circuit `{}` produced a zero denominator",
                self.circuit.name
            )));
        }
        let num = if sign { -(mag as i64) } else { mag as i64 };
        Ok((num, den as i64))
    }
}

fn word_value(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0u64, |acc, (k, &b)| acc | ((b as u64) << k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gate(id: &str, kind: GateKind, ops: &[&str]) -> Gate {
        Gate { id: id.into(), kind, operands: ops.iter().map(|s| s.to_string()).collect() }
    }

    /// The running 6-gate example: 3 inputs, one output, depth 3.
    pub(crate) fn sample_circuit() -> Circuit {
        Circuit {
            name: "sample".into(),
            inputs: vec!["x1".into(), "x2".into(), "x3".into()],
            gates: vec![
                gate("g1", GateKind::And, &["x1", "x2"]),
                gate("g2", GateKind::Not, &["x3"]),
                gate("g3", GateKind::Or, &["x2", "x3"]),
                gate("g4", GateKind::And, &["g1", "g2"]),
                gate("g5", GateKind::Not, &["g3"]),
                gate("g6", GateKind::Or, &["g4", "g5"]),
            ],
            outputs: vec!["g6".into()],
        }
    }

    #[test]
    fn minimal_and_circuit_validates() {
        let c = Circuit {
            name: "c".into(),
            inputs: vec!["x1".into(), "x2".into()],
            gates: vec![gate("g1", GateKind::And, &["x1", "x2"])],
            outputs: vec!["g1".into()],
        };
        assert!(c.validate().is_ok());
    }

    #[test]
    fn self_reference_is_a_cycle() {
        let c = Circuit {
            name: "c".into(),
            inputs: vec!["x1".into()],
            gates: vec![gate("g1", GateKind::And, &["g1", "x1"])],
            outputs: vec!["g1".into()],
        };
        let violations = c.validate().unwrap_err();
        assert!(violations.iter().any(|v| matches!(v, Violation::Cycle { gate } if gate == "g1")));
    }

    #[test]
    fn two_gate_cycle_detected() {
        let c = Circuit {
            name: "c".into(),
            inputs: vec!["x1".into()],
            gates: vec![
                gate("g1", GateKind::And, &["g2", "x1"]),
                gate("g2", GateKind::Or, &["g1", "x1"]),
            ],
            outputs: vec!["g1".into()],
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn not_arity_violation() {
        let c = Circuit {
            name: "c".into(),
            inputs: vec!["x1".into(), "x2".into()],
            gates: vec![gate("g1", GateKind::Not, &["x1", "x2"])],
            outputs: vec!["g1".into()],
        };
        let violations = c.validate().unwrap_err();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::Arity { kind: GateKind::Not, .. })));
    }

    #[test]
    fn sample_circuit_evaluates_as_documented() {
        let c = sample_circuit();
        assert_eq!(c.size(), 6);
        assert_eq!(c.eval(&Assignment::from_bits(&[1, 1, 1])).unwrap(), vec![false]);
        assert_eq!(c.eval(&Assignment::from_bits(&[1, 1, 0])).unwrap(), vec![true]);
    }

    #[test]
    fn identity_output_references_input() {
        let c = Circuit {
            name: "id".into(),
            inputs: vec!["x1".into()],
            gates: vec![],
            outputs: vec!["x1".into()],
        };
        assert_eq!(c.eval(&Assignment::from_bits(&[0])).unwrap(), vec![false]);
        assert_eq!(c.eval(&Assignment::from_bits(&[1])).unwrap(), vec![true]);
    }

    #[test]
    fn gates_out_of_topological_order_still_evaluate() {
        let c = Circuit {
            name: "c".into(),
            inputs: vec!["x1".into()],
            gates: vec![
                gate("g2", GateKind::Not, &["g1"]),
                gate("g1", GateKind::Not, &["x1"]),
            ],
            outputs: vec!["g2".into()],
        };
        assert_eq!(c.eval(&Assignment::from_bits(&[1])).unwrap(), vec![true]);
    }

    #[test]
    fn length_mismatch_rejected() {
        let c = sample_circuit();
        assert!(matches!(
            c.eval(&Assignment::from_bits(&[1, 1])),
            Err(Error::AssignmentLength { got: 2, want: 3 })
        ));
    }

    /// Naive recursive evaluator, independent of the compiled path.
    fn naive_eval(c: &Circuit, bits: &[bool]) -> Vec<bool> {
        fn value(c: &Circuit, bits: &[bool], id: &str) -> bool {
            if let Some(k) = c.inputs.iter().position(|i| i == id) {
                return bits[k];
            }
            let g = c.gates.iter().find(|g| g.id == id).unwrap();
            match g.kind {
                GateKind::And => value(c, bits, &g.operands[0]) && value(c, bits, &g.operands[1]),
                GateKind::Or => value(c, bits, &g.operands[0]) || value(c, bits, &g.operands[1]),
                GateKind::Not => !value(c, bits, &g.operands[0]),
            }
        }
        c.outputs.iter().map(|o| value(c, bits, o)).collect()
    }

    #[test]
    fn eval_matches_naive_recursion_exhaustively() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..30 {
            let n = 1 + trial % 12;
            let max_gates = rng.gen_range(1..=12);
            let c = crate::circuits::build::random_circuit(&mut rng, n, max_gates);
            let compiled = c.compile().unwrap();
            for v in 0u32..(1 << n) {
                let bits: Vec<bool> = (0..n).map(|k| (v >> k) & 1 == 1).collect();
                assert_eq!(
                    compiled.eval(&Assignment(bits.clone())).unwrap(),
                    naive_eval(&c, &bits)
                );
            }
        }
    }
}
