//! Tree → circuit compilers.
//!
//! Bounded fanin: every internal node becomes a constant-size fanin-2 gadget.
//! `MAJ(3)` uses `(a∧b) ∨ (a∧c) ∨ (b∧c)` (5 gates, depth 3); other `MAJ(k)`
//! use a ripple-carry adder tree over the child bits followed by a comparison
//! against `⌊k/2⌋+1`; ALL/ANY become balanced fanin-2 AND/OR trees.
//!
//! Threshold: one unit-weight THRESHOLD gate per internal node.

use super::{Circuit, Gate};
use crate::trees::{NodeKind, NodeRule, PrereqTree};
use crate::{Error, Result};

/// Either a gate or a folded constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sig {
    Gate(usize),
    Const(bool),
}

#[derive(Default)]
struct Builder {
    gates: Vec<Gate>,
    consts: [Option<usize>; 2],
}

impl Builder {
    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    fn const_gate(&mut self, v: bool) -> usize {
        if let Some(id) = self.consts[v as usize] {
            return id;
        }
        let id = self.push(Gate::constant(v));
        self.consts[v as usize] = Some(id);
        id
    }

    fn materialize(&mut self, s: Sig) -> usize {
        match s {
            Sig::Gate(g) => g,
            Sig::Const(v) => self.const_gate(v),
        }
    }

    fn and2(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Const(false), _) | (_, Sig::Const(false)) => Sig::Const(false),
            (Sig::Const(true), x) | (x, Sig::Const(true)) => x,
            (Sig::Gate(x), Sig::Gate(y)) => Sig::Gate(self.push(Gate::and(vec![x, y]))),
        }
    }

    fn or2(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Const(true), _) | (_, Sig::Const(true)) => Sig::Const(true),
            (Sig::Const(false), x) | (x, Sig::Const(false)) => x,
            (Sig::Gate(x), Sig::Gate(y)) => Sig::Gate(self.push(Gate::or(vec![x, y]))),
        }
    }

    fn not(&mut self, a: Sig) -> Sig {
        match a {
            Sig::Const(v) => Sig::Const(!v),
            Sig::Gate(x) => Sig::Gate(self.push(Gate::not(x))),
        }
    }

    fn xor2(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Const(false), x) | (x, Sig::Const(false)) => x,
            (Sig::Const(true), x) | (x, Sig::Const(true)) => self.not(x),
            _ => {
                let either = self.or2(a, b);
                let both = self.and2(a, b);
                let nboth = self.not(both);
                self.and2(either, nboth)
            }
        }
    }

    /// Balanced fanin-2 reduction.
    fn reduce(&mut self, sigs: &[Sig], op: fn(&mut Self, Sig, Sig) -> Sig) -> Sig {
        match sigs.len() {
            0 => unreachable!("rules have at least one child"),
            1 => sigs[0],
            n => {
                let (l, r) = sigs.split_at(n.div_ceil(2));
                let l = self.reduce(l, op);
                let r = self.reduce(r, op);
                op(self, l, r)
            }
        }
    }

    /// Ripple-carry sum of two little-endian numbers.
    fn add(&mut self, a: &[Sig], b: &[Sig]) -> Vec<Sig> {
        let width = a.len().max(b.len());
        let mut out = Vec::with_capacity(width + 1);
        let mut carry = Sig::Const(false);
        for i in 0..width {
            let x = a.get(i).copied().unwrap_or(Sig::Const(false));
            let y = b.get(i).copied().unwrap_or(Sig::Const(false));
            let xy = self.xor2(x, y);
            out.push(self.xor2(xy, carry));
            let g = self.and2(x, y);
            let p = self.and2(xy, carry);
            carry = self.or2(g, p);
        }
        if carry != Sig::Const(false) {
            out.push(carry);
        }
        out
    }

    fn popcount(&mut self, bits: &[Sig]) -> Vec<Sig> {
        match bits.len() {
            0 => Vec::new(),
            1 => vec![bits[0]],
            n => {
                let (l, r) = bits.split_at(n.div_ceil(2));
                let l = self.popcount(l);
                let r = self.popcount(r);
                self.add(&l, &r)
            }
        }
    }

    /// `value(bits) >= t` for a constant `t`, scanning from the low bit.
    fn at_least(&mut self, bits: &[Sig], t: usize) -> Sig {
        if bits.len() < usize::BITS as usize && t >> bits.len() != 0 {
            return Sig::Const(false);
        }
        let mut ge = Sig::Const(true);
        for (i, &b) in bits.iter().enumerate() {
            ge = if (t >> i) & 1 == 1 {
                self.and2(b, ge)
            } else {
                self.or2(b, ge)
            };
        }
        ge
    }

    fn gadget(&mut self, rule: NodeRule, kids: &[Sig]) -> Sig {
        match rule {
            NodeRule::All => self.reduce(kids, Self::and2),
            NodeRule::Any => self.reduce(kids, Self::or2),
            NodeRule::Maj(3) => {
                let (a, b, c) = (kids[0], kids[1], kids[2]);
                let ab = self.and2(a, b);
                let ac = self.and2(a, c);
                let bc = self.and2(b, c);
                let l = self.or2(ab, ac);
                self.or2(l, bc)
            }
            NodeRule::Maj(k) => {
                let sum = self.popcount(kids);
                self.at_least(&sum, rule.threshold(k))
            }
        }
    }
}

fn source_layer(b: &mut Builder, tree: &PrereqTree) -> Vec<Sig> {
    for slot in 0..tree.input_count() {
        b.push(Gate::input(slot));
    }
    let mut sig = vec![Sig::Const(false); tree.node_count()];
    for (id, node) in tree.nodes().iter().enumerate() {
        match node.kind {
            NodeKind::Input { slot } => sig[id] = Sig::Gate(slot),
            NodeKind::Const(v) => sig[id] = Sig::Gate(b.const_gate(v)),
            NodeKind::Internal(_) => {}
        }
    }
    sig
}

/// Compiles to AND/OR/NOT gates of fanin at most 2.
pub fn compile_tree_to_bounded_fanin(tree: &PrereqTree) -> Result<Circuit> {
    let mut b = Builder::default();
    let mut sig = source_layer(&mut b, tree);
    let mut kids = Vec::new();
    for id in (0..tree.node_count()).rev() {
        let node = &tree.nodes()[id];
        if let NodeKind::Internal(rule) = node.kind {
            kids.clear();
            kids.extend(node.children.iter().map(|&c| sig[c]));
            sig[id] = b.gadget(rule, &kids);
        }
    }
    let out = b.materialize(sig[tree.root()]);
    Circuit::new(b.gates, out, tree.input_count())
}

/// Compiles to one unit-weight THRESHOLD gate per internal node.
pub fn compile_tree_to_threshold(tree: &PrereqTree) -> Result<Circuit> {
    let mut b = Builder::default();
    let mut sig = source_layer(&mut b, tree);
    for id in (0..tree.node_count()).rev() {
        let node = &tree.nodes()[id];
        if let NodeKind::Internal(rule) = node.kind {
            let fanin = node.children.len();
            let inputs: Vec<usize> = node.children.iter().map(|&c| b.materialize(sig[c])).collect();
            let theta = i64::try_from(rule.threshold(fanin))
                .map_err(|_| Error::Unsupported(format!("threshold of {rule} too large")))?;
            sig[id] = Sig::Gate(b.push(Gate::threshold(inputs, vec![1; fanin], theta)));
        }
    }
    let out = b.materialize(sig[tree.root()]);
    Circuit::new(b.gates, out, tree.input_count())
}

/// Depth of the bounded-fanin gadget for one node: the per-level constant
/// `c_k` in `depth ≤ c_k · d`.
pub fn bounded_fanin_gadget_depth(rule: NodeRule, fanin: usize) -> Result<usize> {
    rule.check_fanin(fanin)?;
    let mut b = Builder::default();
    let kids: Vec<Sig> = (0..fanin).map(|i| Sig::Gate(b.push(Gate::input(i)))).collect();
    let out = b.gadget(rule, &kids);
    let out = b.materialize(out);
    Ok(Circuit::new(b.gates, out, fanin)?.metrics().depth)
}
