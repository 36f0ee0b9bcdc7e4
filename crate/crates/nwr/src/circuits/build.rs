//! Circuit construction: a gate builder, arithmetic combinators, and the
//! compiler that turns a source circuit into per-player payoff circuits of
//! the CircuitSAT-to-NWR reduction.

use super::{Circuit, Gate, GateKind, PayoffCircuit};
use crate::error::{Error, Result};

/// A wire in a circuit under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Input(usize),
    Gate(usize),
}

/// Accumulates gates with structural sharing for constants.
pub struct Builder {
    num_inputs: usize,
    gates: Vec<(GateKind, Node, Node)>,
    const_false: Option<Node>,
    const_true: Option<Node>,
}

impl Builder {
    /// A builder over `num_inputs` input wires. At least one input is
    /// required so constants can be synthesized.
    pub fn new(num_inputs: usize) -> Self {
        assert!(num_inputs >= 1, "builder needs at least one input wire");
        Builder { num_inputs, gates: Vec::new(), const_false: None, const_true: None }
    }

    pub fn input(&self, k: usize) -> Node {
        assert!(k < self.num_inputs);
        Node::Input(k)
    }

    fn push(&mut self, kind: GateKind, a: Node, b: Node) -> Node {
        self.gates.push((kind, a, b));
        Node::Gate(self.gates.len() - 1)
    }

    pub fn not(&mut self, a: Node) -> Node {
        self.push(GateKind::Not, a, a)
    }

    pub fn and(&mut self, a: Node, b: Node) -> Node {
        self.push(GateKind::And, a, b)
    }

    pub fn or(&mut self, a: Node, b: Node) -> Node {
        self.push(GateKind::Or, a, b)
    }

    pub fn xor(&mut self, a: Node, b: Node) -> Node {
        let na = self.not(a);
        let nb = self.not(b);
        let l = self.and(a, nb);
        let r = self.and(na, b);
        self.or(l, r)
    }

    pub fn const_bit(&mut self, v: bool) -> Node {
        if v {
            if let Some(n) = self.const_true {
                return n;
            }
            let x = self.input(0);
            let nx = self.not(x);
            let n = self.or(x, nx);
            self.const_true = Some(n);
            n
        } else {
            if let Some(n) = self.const_false {
                return n;
            }
            let x = self.input(0);
            let nx = self.not(x);
            let n = self.and(x, nx);
            self.const_false = Some(n);
            n
        }
    }

    pub fn and_all(&mut self, nodes: &[Node]) -> Node {
        match nodes.split_first() {
            None => self.const_bit(true),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &n| self.and(acc, n)),
        }
    }

    pub fn or_all(&mut self, nodes: &[Node]) -> Node {
        match nodes.split_first() {
            None => self.const_bit(false),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &n| self.or(acc, n)),
        }
    }

    /// Little-endian constant word of the given width.
    pub fn const_word(&mut self, value: u64, width: usize) -> Vec<Node> {
        (0..width).map(|k| self.const_bit((value >> k) & 1 == 1)).collect()
    }

    /// Ripple-carry addition of two little-endian words; result width is
    /// `max(len) + 1`.
    pub fn add(&mut self, a: &[Node], b: &[Node]) -> Vec<Node> {
        let width = a.len().max(b.len());
        let zero = self.const_bit(false);
        let mut out = Vec::with_capacity(width + 1);
        let mut carry = zero;
        for k in 0..width {
            let x = a.get(k).copied().unwrap_or(zero);
            let y = b.get(k).copied().unwrap_or(zero);
            let xy = self.xor(x, y);
            let sum = self.xor(xy, carry);
            let c1 = self.and(x, y);
            let c2 = self.and(xy, carry);
            carry = self.or(c1, c2);
            out.push(sum);
        }
        out.push(carry);
        out
    }

    pub fn add_const(&mut self, a: &[Node], value: u64) -> Vec<Node> {
        let width = bits_for(value).max(1);
        let c = self.const_word(value, width);
        self.add(a, &c)
    }

    /// True iff the little-endian word equals the constant.
    pub fn eq_const(&mut self, word: &[Node], value: u64) -> Node {
        let literals: Vec<Node> = word
            .iter()
            .enumerate()
            .map(|(k, &bit)| if (value >> k) & 1 == 1 { bit } else { self.not(bit) })
            .collect();
        if value >> word.len() != 0 {
            return self.const_bit(false);
        }
        self.and_all(&literals)
    }

    /// Bitwise select: `sel ? a : b`, zero-extending the shorter word.
    pub fn mux_word(&mut self, sel: Node, a: &[Node], b: &[Node]) -> Vec<Node> {
        let width = a.len().max(b.len());
        let zero = self.const_bit(false);
        let nsel = self.not(sel);
        (0..width)
            .map(|k| {
                let x = a.get(k).copied().unwrap_or(zero);
                let y = b.get(k).copied().unwrap_or(zero);
                let l = self.and(sel, x);
                let r = self.and(nsel, y);
                self.or(l, r)
            })
            .collect()
    }

    /// Maps a word through an arbitrary function, realized as a
    /// multiplexer over all input values below `2^word.len()`.
    pub fn table_map(
        &mut self,
        word: &[Node],
        f: impl Fn(u64) -> u64,
        out_width: usize,
    ) -> Vec<Node> {
        assert!(word.len() <= 16, "table_map input too wide");
        let range = 1u64 << word.len();
        let selectors: Vec<Node> = (0..range).map(|v| self.eq_const(word, v)).collect();
        (0..out_width)
            .map(|bit| {
                let terms: Vec<Node> = (0..range)
                    .filter(|&v| (f(v) >> bit) & 1 == 1)
                    .map(|v| selectors[v as usize])
                    .collect();
                self.or_all(&terms)
            })
            .collect()
    }

    /// Inlines another circuit, mapping its inputs to the given wires.
    /// The embedded circuit must validate and its input count must match.
    pub fn embed(&mut self, sub: &Circuit, wires: &[Node]) -> Result<Vec<Node>> {
        if wires.len() != sub.inputs.len() {
            return Err(Error::InvalidInput(format!(
                "embed: {} wires for {} inputs",
                wires.len(),
                sub.inputs.len()
            )));
        }
        let compiled = sub.compile()?;
        let mut slots: Vec<Node> = vec![Node::Input(0); compiled.num_slots];
        slots[..wires.len()].copy_from_slice(wires);
        for op in &compiled.ops {
            let a = slots[op.a];
            let b = slots[op.b];
            slots[op.slot] = match op.kind {
                GateKind::And => self.and(a, b),
                GateKind::Or => self.or(a, b),
                GateKind::Not => self.not(a),
            };
        }
        Ok(compiled.outputs.iter().map(|&o| slots[o]).collect())
    }

    /// Emits a named [`Circuit`]. Gate ids are `g1, g2, ...`; input names
    /// must not collide with that scheme.
    pub fn finish(self, name: &str, input_names: Vec<String>, outputs: &[Node]) -> Circuit {
        assert_eq!(input_names.len(), self.num_inputs);
        let node_name = |n: Node| -> String {
            match n {
                Node::Input(k) => input_names[k].clone(),
                Node::Gate(k) => format!("g{}", k + 1),
            }
        };
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(k, &(kind, a, b))| Gate {
                id: format!("g{}", k + 1),
                kind,
                operands: if kind.arity() == 2 {
                    vec![node_name(a), node_name(b)]
                } else {
                    vec![node_name(a)]
                },
            })
            .collect();
        let outputs = outputs.iter().map(|&n| node_name(n)).collect();
        Circuit { name: name.to_string(), inputs: input_names, gates, outputs }
    }
}

/// Bits needed to represent `value` (at least 1).
pub fn bits_for(value: u64) -> usize {
    (64 - value.leading_zeros()).max(1) as usize
}

/// Bits per action for `m` actions: `ceil(log2 m)`.
pub fn action_bits(m: usize) -> usize {
    bits_for(m as u64 - 1)
}

/// Compiles the payoff of player `(i, l)` of the CircuitSAT-to-NWR
/// reduction into a payoff circuit over the `n*m*action_bits(m)` profile
/// bits. `i` and `l` are 1-based; `source` must validate and have a single
/// output. The output encodes the payoff as numerator/denominator with
/// denominator constant 1.
pub fn compile_reduction1_payoff(
    source: &Circuit,
    m: usize,
    i: usize,
    l: usize,
) -> Result<PayoffCircuit> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("m must be >= 2, got {m}")));
    }
    let n = source.inputs.len();
    if !(1..=n).contains(&i) || !(1..=m).contains(&l) {
        return Err(Error::IndexOutOfRange(format!(
            "(i, l) = ({i}, {l}) outside 1..={n} x 1..={m}"
        )));
    }
    if source.outputs.len() != 1 {
        return Err(Error::InvalidInput(format!(
            "source circuit must have one output, has {}",
            source.outputs.len()
        )));
    }

    let s = action_bits(m);
    let mut b = Builder::new(n * m * s);

    // Action word of reduced player (i', l'), both 0-based here.
    let word = |gi: usize, gl: usize| -> Vec<Node> {
        let base = (gi * m + gl) * s;
        (0..s).map(|k| Node::Input(base + k)).collect()
    };

    // Group unanimity and the induced truth assignment.
    let mut valid = Vec::with_capacity(n);
    let mut tau = Vec::with_capacity(n);
    for gi in 0..n {
        let eq0: Vec<Node> = (0..m)
            .map(|gl| {
                let w = word(gi, gl);
                b.eq_const(&w, 0)
            })
            .collect();
        let eq1: Vec<Node> = (0..m)
            .map(|gl| {
                let w = word(gi, gl);
                b.eq_const(&w, 1)
            })
            .collect();
        let all0 = b.and_all(&eq0);
        let all1 = b.and_all(&eq1);
        valid.push(b.or(all0, all1));
        tau.push(all1);
    }
    let sat = b.embed(source, &tau)?[0];
    let unanimous = b.and_all(&valid);
    let f = b.and(unanimous, sat);

    // Local term: (l + sum of group i's actions) mod m.
    let mut sum: Vec<Node> = b.const_word(l as u64, bits_for(l as u64));
    for gl in 0..m {
        let w = word(i - 1, gl);
        sum = b.add(&sum, &w);
    }
    let local = b.table_map(&sum, |v| v % m as u64, s);

    // Payoff: (m+1) * f + local, always non-negative.
    let num_bits = bits_for(2 * m as u64);
    let bumped = b.add_const(&local, (m + 1) as u64);
    let value = b.mux_word(f, &bumped, &local);

    let sign = b.const_bit(false);
    let zero = b.const_bit(false);
    let one = b.const_bit(true);
    let mut outputs = vec![sign];
    for k in 0..num_bits {
        outputs.push(value.get(k).copied().unwrap_or(zero));
    }
    outputs.push(one);

    let input_names: Vec<String> = (0..n)
        .flat_map(|gi| {
            (0..m).flat_map(move |gl| (0..s).map(move |k| format!("a{}_{}_b{}", gi + 1, gl + 1, k)))
        })
        .collect();
    let circuit = b.finish(&format!("u_{i}_{l}"), input_names, &outputs);
    PayoffCircuit::new(circuit, num_bits, 1)
}

/// A random valid circuit over `n` inputs; used by tests and fuzz sweeps.
pub fn random_circuit(rng: &mut impl rand::Rng, n: usize, max_gates: usize) -> Circuit {
    let inputs: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    let num_gates = rng.gen_range(1..=max_gates.max(1));
    let mut gates = Vec::with_capacity(num_gates);
    let pick = |rng: &mut dyn rand::RngCore, avail: usize| -> String {
        let k = (rng.next_u32() as usize) % avail;
        if k < n {
            format!("x{}", k + 1)
        } else {
            format!("g{}", k - n + 1)
        }
    };
    for k in 0..num_gates {
        let avail = n + k;
        let kind = match rng.gen_range(0..3) {
            0 => GateKind::And,
            1 => GateKind::Or,
            _ => GateKind::Not,
        };
        let operands = (0..kind.arity()).map(|_| pick(rng, avail)).collect();
        gates.push(Gate { id: format!("g{}", k + 1), kind, operands });
    }
    let out = format!("g{num_gates}");
    Circuit { name: "rand".into(), inputs, gates, outputs: vec![out] }
}
