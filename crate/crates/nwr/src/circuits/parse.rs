//! Text format for circuits.
//!
//! One declaration per line:
//!
//! ```text
//! circuit <name>
//! inputs <id>...
//! gate <id> = AND|OR|NOT <operand> [<operand>]
//! outputs <id>...
//! ```
//!
//! Comments start with `#`. Payoff circuits carry an extra first line
//! `payout num_bits=<k> den_bits=<k>`.

use super::{Circuit, Gate, GateKind, PayoffCircuit};
use crate::error::{ParseError, Result};
use std::collections::HashSet;

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn ident(tok: &str, line: usize) -> Result<String, ParseError> {
    if is_identifier(tok) {
        Ok(tok.to_string())
    } else {
        Err(ParseError::at(line, format!("invalid identifier `{tok}`")))
    }
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { iter: text.lines().enumerate() }
    }

    /// Next non-empty, non-comment line as (1-based line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (k, raw) in self.iter.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            return Some((k + 1, line.split_whitespace().collect()));
        }
        None
    }
}

/// Parses a plain circuit. Fails on syntax errors, duplicate identifiers,
/// and undefined references; acyclicity is left to [`Circuit::validate`].
pub fn parse(text: &str) -> Result<Circuit> {
    let (payout, circuit) = parse_inner(text)?;
    if payout.is_some() {
        return Err(ParseError::new("unexpected payout header in plain circuit").into());
    }
    Ok(circuit)
}

/// Parses a payoff circuit (with the `payout` header line).
pub fn parse_payoff(text: &str) -> Result<PayoffCircuit> {
    let (payout, circuit) = parse_inner(text)?;
    let (num_bits, den_bits) =
        payout.ok_or_else(|| ParseError::new("missing payout header line"))?;
    PayoffCircuit::new(circuit, num_bits, den_bits)
}

fn parse_inner(text: &str) -> Result<(Option<(usize, usize)>, Circuit)> {
    let mut lines = Lines::new(text);
    let (mut lno, mut toks) = lines
        .next_tokens()
        .ok_or_else(|| ParseError::new("empty circuit text"))?;

    let mut payout = None;
    if toks[0] == "payout" {
        let mut num_bits = None;
        let mut den_bits = None;
        for t in &toks[1..] {
            let (key, val) = t
                .split_once('=')
                .ok_or_else(|| ParseError::at(lno, format!("bad payout field `{t}`")))?;
            let v: usize = val
                .parse()
                .map_err(|_| ParseError::at(lno, format!("bad payout width `{val}`")))?;
            match key {
                "num_bits" => num_bits = Some(v),
                "den_bits" => den_bits = Some(v),
                _ => return Err(ParseError::at(lno, format!("unknown payout field `{key}`")).into()),
            }
        }
        payout = Some((
            num_bits.ok_or_else(|| ParseError::at(lno, "payout missing num_bits"))?,
            den_bits.ok_or_else(|| ParseError::at(lno, "payout missing den_bits"))?,
        ));
        (lno, toks) = lines
            .next_tokens()
            .ok_or_else(|| ParseError::new("missing circuit declaration"))?;
    }

    if toks.len() != 2 || toks[0] != "circuit" {
        return Err(ParseError::at(lno, "expected `circuit <name>`").into());
    }
    let name = ident(toks[1], lno)?;

    let (lno, toks) = lines
        .next_tokens()
        .ok_or_else(|| ParseError::new("missing inputs declaration"))?;
    if toks[0] != "inputs" {
        return Err(ParseError::at(lno, "expected `inputs <id>...`").into());
    }
    let mut seen: HashSet<String> = HashSet::new();
    let mut inputs = Vec::new();
    for t in &toks[1..] {
        let id = ident(t, lno)?;
        if !seen.insert(id.clone()) {
            return Err(ParseError::at(lno, format!("duplicate identifier `{id}`")).into());
        }
        inputs.push(id);
    }

    let mut gates: Vec<Gate> = Vec::new();
    let mut outputs: Option<Vec<String>> = None;
    while let Some((lno, toks)) = lines.next_tokens() {
        match toks[0] {
            "gate" => {
                if outputs.is_some() {
                    return Err(ParseError::at(lno, "gate after outputs").into());
                }
                if toks.len() < 5 || toks[2] != "=" {
                    return Err(
                        ParseError::at(lno, "expected `gate <id> = KIND <op> [<op>]`").into()
                    );
                }
                let id = ident(toks[1], lno)?;
                if !seen.insert(id.clone()) {
                    return Err(ParseError::at(lno, format!("duplicate identifier `{id}`")).into());
                }
                let kind = match toks[3] {
                    "AND" => GateKind::And,
                    "OR" => GateKind::Or,
                    "NOT" => GateKind::Not,
                    other => {
                        return Err(
                            ParseError::at(lno, format!("unknown gate kind `{other}`")).into()
                        )
                    }
                };
                let operands: Vec<String> =
                    toks[4..].iter().map(|t| ident(t, lno)).collect::<Result<_, _>>()?;
                if operands.len() != kind.arity() {
                    return Err(ParseError::at(
                        lno,
                        format!(
                            "{} takes {} operand(s), got {}",
                            kind.name(),
                            kind.arity(),
                            operands.len()
                        ),
                    )
                    .into());
                }
                gates.push(Gate { id, kind, operands });
            }
            "outputs" => {
                if outputs.is_some() {
                    return Err(ParseError::at(lno, "duplicate outputs declaration").into());
                }
                let outs: Vec<String> =
                    toks[1..].iter().map(|t| ident(t, lno)).collect::<Result<_, _>>()?;
                for o in &outs {
                    if !seen.contains(o) {
                        return Err(
                            ParseError::at(lno, format!("undefined reference `{o}`")).into()
                        );
                    }
                }
                outputs = Some(outs);
            }
            other => {
                return Err(ParseError::at(lno, format!("unexpected declaration `{other}`")).into())
            }
        }
    }
    let outputs = outputs.ok_or_else(|| ParseError::new("missing outputs declaration"))?;

    let circuit = Circuit { name, inputs, gates, outputs };
    // Undefined operand references are parse errors too.
    for g in &circuit.gates {
        for op in &g.operands {
            if !seen.contains(op) {
                return Err(ParseError::new(format!(
                    "gate `{}` references undefined id `{op}`",
                    g.id
                ))
                .into());
            }
        }
    }
    Ok((payout, circuit))
}

/// Canonical text form. `parse(serialize(c)) == c` and serialization is
/// idempotent through a parse round trip.
pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(&format!("circuit {}\n", c.name));
    out.push_str(&format!("inputs {}\n", c.inputs.join(" ")));
    for g in &c.gates {
        out.push_str(&format!("gate {} = {} {}\n", g.id, g.kind.name(), g.operands.join(" ")));
    }
    out.push_str(&format!("outputs {}\n", c.outputs.join(" ")));
    out
}

pub fn serialize_payoff(p: &PayoffCircuit) -> String {
    format!("payout num_bits={} den_bits={}\n{}", p.num_bits, p.den_bits, serialize(&p.circuit))
}
