//! Prerequisite (concept) trees.
//!
//! Nodes are stored in canonical level order: the root is node 0 and every
//! node's children carry strictly larger, consecutive ids, left to right.
//! Depth counts edges from the root (root at depth 0); leaves of a balanced
//! tree of depth `d` sit at depth `d`. Input slots are 0-based, so slot `i`
//! is the `i`-th input leaf in left-to-right order for every tree built here.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest node count any constructor will materialize.
pub const MAX_NODES: usize = 1 << 24;

/// Aggregation rule of an internal node.
///
/// `Maj(k)` fires iff at least `⌊k/2⌋ + 1` of its `k` children are 1. The
/// threshold is always derived from `k`, never stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRule {
    Maj(usize),
    All,
    Any,
}

impl NodeRule {
    /// Number of 1-children needed for the node to fire, given its fanin.
    pub fn threshold(&self, fanin: usize) -> usize {
        match *self {
            NodeRule::Maj(k) => k / 2 + 1,
            NodeRule::All => fanin,
            NodeRule::Any => 1,
        }
    }

    /// Checks that `fanin` children are acceptable for this rule.
    pub fn check_fanin(&self, fanin: usize) -> Result<()> {
        let ok = match *self {
            NodeRule::Maj(k) => k >= 1 && fanin == k,
            NodeRule::All | NodeRule::Any => fanin >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Arity {
                rule: self.to_string(),
                got: fanin,
            })
        }
    }

    /// Applies the rule to a count of 1-children out of `fanin`.
    ///
    /// All three rules are symmetric, so the count is all they depend on.
    pub fn fires(&self, ones: usize, fanin: usize) -> bool {
        ones >= self.threshold(fanin)
    }
}

impl std::fmt::Display for NodeRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeRule::Maj(k) => write!(f, "MAJ{k}"),
            NodeRule::All => write!(f, "ALL"),
            NodeRule::Any => write!(f, "ANY"),
        }
    }
}

/// Applies `rule` to the given child bits.
pub fn apply_rule(rule: NodeRule, child_bits: &[bool]) -> Result<bool> {
    rule.check_fanin(child_bits.len())?;
    let ones = child_bits.iter().filter(|&&b| b).count();
    Ok(rule.fires(ones, child_bits.len()))
}

/// ALL or ANY; the two gate kinds of an alternating tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    All,
    Any,
}

impl Connective {
    pub fn flip(self) -> Self {
        match self {
            Connective::All => Connective::Any,
            Connective::Any => Connective::All,
        }
    }

    pub fn rule(self) -> NodeRule {
        match self {
            Connective::All => NodeRule::All,
            Connective::Any => NodeRule::Any,
        }
    }

    /// Connective at `depth` when levels alternate starting from `self` at the root.
    pub fn at_depth(self, depth: usize) -> Self {
        if depth.is_multiple_of(2) {
            self
        } else {
            self.flip()
        }
    }
}

impl std::str::FromStr for Connective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" | "and" => Ok(Connective::All),
            "any" | "or" => Ok(Connective::Any),
            other => Err(Error::Config(format!("unknown connective {other:?}"))),
        }
    }
}

/// How rules are assigned to the levels of a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RuleSpec {
    /// Every internal node is `MAJ(k)` with `k` its fanin.
    Majority,
    All,
    Any,
    /// Levels alternate ALL/ANY starting with `root` at depth 0.
    Alternating { root: Connective },
    /// No per-level pattern (e.g. rewritten trees with constant leaves).
    Mixed,
}

impl RuleSpec {
    /// The rule an internal node at `depth` with `fanin` children must carry.
    /// `None` for [`RuleSpec::Mixed`].
    pub fn rule_at(&self, depth: usize, fanin: usize) -> Option<NodeRule> {
        match *self {
            RuleSpec::Majority => Some(NodeRule::Maj(fanin)),
            RuleSpec::All => Some(NodeRule::All),
            RuleSpec::Any => Some(NodeRule::Any),
            RuleSpec::Alternating { root } => Some(root.at_depth(depth).rule()),
            RuleSpec::Mixed => None,
        }
    }
}

impl std::str::FromStr for RuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maj" | "majority" => Ok(RuleSpec::Majority),
            "all" => Ok(RuleSpec::All),
            "any" => Ok(RuleSpec::Any),
            "alt-all" => Ok(RuleSpec::Alternating {
                root: Connective::All,
            }),
            "alt-any" => Ok(RuleSpec::Alternating {
                root: Connective::Any,
            }),
            other => Err(Error::Config(format!(
                "unknown rule spec {other:?} (expected maj, all, any, alt-all, alt-any)"
            ))),
        }
    }
}

/// Leaf or internal node payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Input { slot: usize },
    Const(bool),
    Internal(NodeRule),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Recursive description of a tree, flattened into a [`PrereqTree`] by
/// [`PrereqTree::from_shape`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeShape {
    Input(usize),
    Const(bool),
    Node(NodeRule, Vec<TreeShape>),
}

/// A validated prerequisite tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeDocument", into = "TreeDocument")]
pub struct PrereqTree {
    nodes: Vec<Node>,
    leaf_slots: Vec<usize>,
    depth: usize,
    arity: Option<usize>,
    rule_spec: RuleSpec,
}

/// Toggles for [`build_balanced_tree`].
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Permit `MAJ(k)` with `k < 3` or even `k`.
    pub allow_any_majority_arity: bool,
}

/// Builds a perfectly balanced `k`-ary tree of depth `d`.
pub fn build_balanced_tree(k: usize, d: usize, spec: RuleSpec) -> Result<PrereqTree> {
    build_balanced_tree_with(k, d, spec, BuildOptions::default())
}

pub fn build_balanced_tree_with(
    k: usize,
    d: usize,
    spec: RuleSpec,
    opts: BuildOptions,
) -> Result<PrereqTree> {
    if k < 1 {
        return Err(Error::Config("arity k must be at least 1".into()));
    }
    if spec == RuleSpec::Majority && !opts.allow_any_majority_arity && (k < 3 || k.is_multiple_of(2)) {
        return Err(Error::Config(format!(
            "MAJ trees need odd k >= 3 (got k={k}); enable allow_any_majority_arity to override"
        )));
    }
    if spec == RuleSpec::Mixed {
        return Err(Error::Config("a balanced tree needs a per-level rule spec".into()));
    }
    let mut tree = build_layered_tree(&vec![k; d], spec)?;
    tree.arity = Some(k);
    Ok(tree)
}

/// Builds a tree whose nodes at depth `i` all have `fanins[i]` children.
/// Leaves sit at depth `fanins.len()` and read slots left to right.
pub fn build_layered_tree(fanins: &[usize], spec: RuleSpec) -> Result<PrereqTree> {
    if spec == RuleSpec::Mixed {
        return Err(Error::Config("a layered tree needs a per-level rule spec".into()));
    }
    let mut total = 1usize;
    let mut width = 1usize;
    for &f in fanins {
        if f == 0 {
            return Err(Error::Config("fanin must be at least 1".into()));
        }
        width = width
            .checked_mul(f)
            .filter(|w| *w <= MAX_NODES)
            .ok_or_else(|| Error::SizeLimit(format!("fanins {fanins:?} exceed {MAX_NODES} nodes")))?;
        total += width;
    }
    if total > MAX_NODES {
        return Err(Error::SizeLimit(format!(
            "fanins {fanins:?} give {total} nodes (max {MAX_NODES})"
        )));
    }

    let mut nodes = Vec::with_capacity(total);
    let mut level_start = 0usize;
    let mut level_len = 1usize;
    for (depth, &fanin) in fanins.iter().enumerate() {
        let next_start = level_start + level_len;
        let rule = spec.rule_at(depth, fanin).expect("per-level spec");
        for j in 0..level_len {
            let first = next_start + j * fanin;
            nodes.push(Node {
                kind: NodeKind::Internal(rule),
                children: (first..first + fanin).collect(),
            });
        }
        level_start = next_start;
        level_len *= fanin;
    }
    nodes.extend((0..level_len).map(|slot| Node {
        kind: NodeKind::Input { slot },
        children: Vec::new(),
    }));
    debug_assert_eq!(nodes.len(), total);
    PrereqTree::from_nodes(nodes, spec)
}

/// `k^d`, with overflow reported as a size-limit error.
pub fn leaf_count(k: usize, d: usize) -> Result<usize> {
    u32::try_from(d)
        .ok()
        .and_then(|d| k.checked_pow(d))
        .ok_or_else(|| Error::SizeLimit(format!("{k}^{d} overflows")))
}

/// `(k^{d+1} - 1)/(k - 1)`, i.e. `1 + k + ... + k^d`.
pub fn balanced_node_count(k: usize, d: usize) -> Result<usize> {
    if k == 1 {
        return Ok(d + 1);
    }
    let top = leaf_count(k, d + 1)?;
    Ok((top - 1) / (k - 1))
}

impl PrereqTree {
    /// Flattens a recursive shape into canonical level order and validates it.
    pub fn from_shape(shape: &TreeShape, rule_spec: RuleSpec) -> Result<Self> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut queue: VecDeque<&TreeShape> = VecDeque::new();
        queue.push_back(shape);
        let mut next_id = 1usize;
        while let Some(s) = queue.pop_front() {
            if nodes.len() >= MAX_NODES {
                return Err(Error::SizeLimit(format!("more than {MAX_NODES} nodes")));
            }
            let node = match s {
                TreeShape::Input(slot) => Node {
                    kind: NodeKind::Input { slot: *slot },
                    children: Vec::new(),
                },
                TreeShape::Const(b) => Node {
                    kind: NodeKind::Const(*b),
                    children: Vec::new(),
                },
                TreeShape::Node(rule, kids) => {
                    let children = (next_id..next_id + kids.len()).collect();
                    next_id += kids.len();
                    queue.extend(kids.iter());
                    Node {
                        kind: NodeKind::Internal(*rule),
                        children,
                    }
                }
            };
            nodes.push(node);
        }
        Self::from_nodes(nodes, rule_spec)
    }

    /// Validates a raw node list (level order, root = 0) and derives depth,
    /// arity and the slot map.
    pub fn from_nodes(nodes: Vec<Node>, rule_spec: RuleSpec) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Tree("tree has no nodes".into()));
        }
        let len = nodes.len();
        let mut has_parent = vec![false; len];
        let mut node_depth = vec![0usize; len];
        let mut slots: Vec<Option<usize>> = Vec::new();
        let mut inputs = 0usize;

        for (id, node) in nodes.iter().enumerate() {
            if id > 0 && !has_parent[id] {
                return Err(Error::Tree(format!("node {id} has no parent")));
            }
            match node.kind {
                NodeKind::Internal(rule) => {
                    rule.check_fanin(node.children.len())
                        .map_err(|e| Error::Tree(format!("node {id}: {e}")))?;
                    if let Some(expected) = rule_spec.rule_at(node_depth[id], node.children.len()) {
                        if expected != rule {
                            return Err(Error::Tree(format!(
                                "node {id} carries {rule} but rule spec requires {expected}"
                            )));
                        }
                    }
                }
                NodeKind::Input { slot } => {
                    if !node.children.is_empty() {
                        return Err(Error::Tree(format!("leaf {id} has children")));
                    }
                    if slots.len() <= slot {
                        if slot >= len {
                            return Err(Error::Tree(format!("leaf {id} has slot {slot} >= node count")));
                        }
                        slots.resize(slot + 1, None);
                    }
                    if slots[slot].replace(id).is_some() {
                        return Err(Error::Tree(format!("slot {slot} used twice")));
                    }
                    inputs += 1;
                }
                NodeKind::Const(_) => {
                    if !node.children.is_empty() {
                        return Err(Error::Tree(format!("constant leaf {id} has children")));
                    }
                }
            }
            for &c in &node.children {
                if c <= id || c >= len {
                    return Err(Error::Tree(format!(
                        "node {id} has child {c}; children must follow their parent in level order"
                    )));
                }
                if std::mem::replace(&mut has_parent[c], true) {
                    return Err(Error::Tree(format!("node {c} has two parents")));
                }
                node_depth[c] = node_depth[id] + 1;
            }
        }
        if slots.len() != inputs {
            return Err(Error::Tree(format!(
                "input slots are not contiguous 0..{inputs}"
            )));
        }
        let leaf_slots: Vec<usize> = slots.into_iter().map(|s| s.expect("contiguous")).collect();

        let depth = node_depth.iter().copied().max().unwrap_or(0);
        let first = nodes[0].children.len();
        let balanced = nodes.iter().enumerate().all(|(id, n)| match n.kind {
            NodeKind::Internal(_) => n.children.len() == first,
            _ => node_depth[id] == depth,
        });
        let arity = if balanced && depth > 0 { Some(first) } else { None };

        Ok(PrereqTree {
            nodes,
            leaf_slots,
            depth,
            arity,
            rule_spec,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Result<&Node> {
        self.nodes.get(id).ok_or(Error::Index {
            index: id,
            len: self.nodes.len(),
        })
    }

    pub const fn root(&self) -> usize {
        0
    }

    /// Total node count `N`.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of input slots `n` (constant leaves excluded).
    pub fn input_count(&self) -> usize {
        self.leaf_slots.len()
    }

    pub fn internal_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Internal(_)))
            .count()
    }

    /// Node id of input slot `slot`.
    pub fn slot_node(&self, slot: usize) -> Option<usize> {
        self.leaf_slots.get(slot).copied()
    }

    pub fn leaf_slots(&self) -> &[usize] {
        &self.leaf_slots
    }

    /// Height of the root (longest root-to-leaf path in edges).
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Common fanin when the tree is perfectly balanced with depth ≥ 1.
    pub fn arity(&self) -> Option<usize> {
        self.arity
    }

    pub fn rule_spec(&self) -> RuleSpec {
        self.rule_spec
    }

    pub fn has_constants(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n.kind, NodeKind::Const(_)))
    }

    /// Per-node height above the leaves (leaves have height 0).
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            if let Some(m) = self.nodes[id].children.iter().map(|&c| h[c]).max() {
                h[id] = m + 1;
            }
        }
        h
    }

    /// Rebuilds the recursive shape of the subtree rooted at `id`.
    pub fn to_shape(&self) -> TreeShape {
        self.shape_of(self.root())
    }

    fn shape_of(&self, id: usize) -> TreeShape {
        let node = &self.nodes[id];
        match node.kind {
            NodeKind::Input { slot } => TreeShape::Input(slot),
            NodeKind::Const(b) => TreeShape::Const(b),
            NodeKind::Internal(rule) => {
                TreeShape::Node(rule, node.children.iter().map(|&c| self.shape_of(c)).collect())
            }
        }
    }

    /// Bottom-up evaluation with a value for every node.
    pub fn evaluate(&self, x: &Assignment) -> Result<EvalTrace> {
        if x.len() != self.input_count() {
            return Err(Error::Length {
                expected: self.input_count(),
                got: x.len(),
            });
        }
        let mut values = vec![false; self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            let node = &self.nodes[id];
            values[id] = match node.kind {
                NodeKind::Input { slot } => x.bits()[slot],
                NodeKind::Const(b) => b,
                NodeKind::Internal(rule) => {
                    let ones = node.children.iter().filter(|&&c| values[c]).count();
                    rule.fires(ones, node.children.len())
                }
            };
        }
        Ok(EvalTrace { values })
    }

    /// Root value only.
    pub fn evaluate_root(&self, x: &Assignment) -> Result<bool> {
        Ok(self.evaluate(x)?.root_value())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Free-function form of [`PrereqTree::evaluate`].
pub fn evaluate(tree: &PrereqTree, x: &Assignment) -> Result<EvalTrace> {
    tree.evaluate(x)
}

/// Input mastery bits indexed by slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    /// From 0/1 integers; anything nonzero counts as 1.
    pub fn from_01(bits: &[u8]) -> Self {
        Assignment(bits.iter().map(|&b| b != 0).collect())
    }

    /// Bit `i` of the assignment is bit `i` of `index`.
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment((0..n).map(|i| (index >> i) & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }
}

/// Per-node values from one evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalTrace {
    values: Vec<bool>,
}

impl EvalTrace {
    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn root_value(&self) -> bool {
        self.values[0]
    }

    pub fn value(&self, node: usize) -> Result<bool> {
        self.values.get(node).copied().ok_or(Error::Index {
            index: node,
            len: self.values.len(),
        })
    }
}

/// Value of the subtree rooted at `node_index`; the auxiliary label of the
/// separator that closes it.
pub fn subtree_value_at(trace: &EvalTrace, node_index: usize) -> Result<bool> {
    trace.value(node_index)
}

// ---------------------------------------------------------------------------
// JSON document form

#[derive(Serialize, Deserialize)]
struct TreeDocument {
    k: Option<usize>,
    d: usize,
    rule_spec: RuleSpec,
    nodes: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: usize,
    kind: NodeRecordKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule: Option<NodeRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slot: Option<usize>,
    #[serde(rename = "const", default, skip_serializing_if = "Option::is_none")]
    constant: Option<u8>,
    children: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum NodeRecordKind {
    Input,
    Const,
    Internal,
}

impl From<PrereqTree> for TreeDocument {
    fn from(t: PrereqTree) -> Self {
        let nodes = t
            .nodes
            .into_iter()
            .enumerate()
            .map(|(id, n)| {
                let (kind, rule, slot, constant) = match n.kind {
                    NodeKind::Input { slot } => (NodeRecordKind::Input, None, Some(slot), None),
                    NodeKind::Const(b) => (NodeRecordKind::Const, None, None, Some(b as u8)),
                    NodeKind::Internal(r) => (NodeRecordKind::Internal, Some(r), None, None),
                };
                NodeRecord {
                    id,
                    kind,
                    rule,
                    slot,
                    constant,
                    children: n.children,
                }
            })
            .collect();
        TreeDocument {
            k: t.arity,
            d: t.depth,
            rule_spec: t.rule_spec,
            nodes,
        }
    }
}

impl TryFrom<TreeDocument> for PrereqTree {
    type Error = Error;

    fn try_from(doc: TreeDocument) -> Result<Self> {
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        for (pos, rec) in doc.nodes.into_iter().enumerate() {
            if rec.id != pos {
                return Err(Error::Tree(format!("node at position {pos} has id {}", rec.id)));
            }
            let kind = match rec.kind {
                NodeRecordKind::Input => NodeKind::Input {
                    slot: rec
                        .slot
                        .ok_or_else(|| Error::Tree(format!("input node {pos} lacks a slot")))?,
                },
                NodeRecordKind::Const => match rec.constant {
                    Some(0) => NodeKind::Const(false),
                    Some(1) => NodeKind::Const(true),
                    _ => return Err(Error::Tree(format!("const node {pos} needs const 0 or 1"))),
                },
                NodeRecordKind::Internal => NodeKind::Internal(
                    rec.rule
                        .ok_or_else(|| Error::Tree(format!("internal node {pos} lacks a rule")))?,
                ),
            };
            nodes.push(Node {
                kind,
                children: rec.children,
            });
        }
        let mut tree = PrereqTree::from_nodes(nodes, doc.rule_spec)?;
        if tree.depth == 0 && tree.arity.is_none() {
            // a lone leaf carries no fanin of its own
            tree.arity = doc.k;
        }
        if tree.depth != doc.d || tree.arity != doc.k {
            return Err(Error::Tree(format!(
                "header says k={:?}, d={} but nodes give k={:?}, d={}",
                doc.k, doc.d, tree.arity, tree.depth
            )));
        }
        Ok(tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj3(d: usize) -> PrereqTree {
        build_balanced_tree(3, d, RuleSpec::Majority).unwrap()
    }

    #[test]
    fn balanced_counts() {
        let t = maj3(3);
        assert_eq!(t.input_count(), 27);
        assert_eq!(t.node_count(), 40);
        let t = maj3(0);
        assert_eq!((t.input_count(), t.node_count()), (1, 1));
        let t = maj3(6);
        assert_eq!((t.input_count(), t.node_count()), (729, 1093));
        assert_eq!(balanced_node_count(3, 6).unwrap(), 1093);
    }

    #[test]
    fn rejects_bad_arity() {
        assert!(build_balanced_tree(0, 2, RuleSpec::All).is_err());
        assert!(build_balanced_tree(2, 2, RuleSpec::Majority).is_err());
        assert!(build_balanced_tree(4, 2, RuleSpec::Majority).is_err());
        let opts = BuildOptions {
            allow_any_majority_arity: true,
        };
        let t = build_balanced_tree_with(4, 1, RuleSpec::Majority, opts).unwrap();
        // threshold 3 for k = 4
        let x = Assignment::from_01(&[1, 1, 0, 0]);
        assert!(!t.evaluate_root(&x).unwrap());
        assert!(t.evaluate_root(&Assignment::from_01(&[1, 1, 0, 1])).unwrap());
    }

    #[test]
    fn rule_application() {
        assert!(apply_rule(NodeRule::Maj(3), &[true, true, false]).unwrap());
        assert!(!apply_rule(NodeRule::Maj(4), &[true, true, false, false]).unwrap());
        assert!(apply_rule(NodeRule::All, &[true, true, true]).unwrap());
        assert!(!apply_rule(NodeRule::Any, &[false, false, false]).unwrap());
        assert!(matches!(
            apply_rule(NodeRule::Maj(3), &[true, false]),
            Err(Error::Arity { .. })
        ));
        assert!(apply_rule(NodeRule::All, &[]).is_err());
    }

    #[test]
    fn evaluate_small_trees() {
        let t = maj3(1);
        assert!(t.evaluate_root(&Assignment::from_01(&[1, 0, 1])).unwrap());

        let t = maj3(2);
        let tr = t
            .evaluate(&Assignment::from_01(&[1, 1, 0, 0, 0, 0, 1, 0, 1]))
            .unwrap();
        assert_eq!(&tr.values()[1..4], &[true, false, true]);
        assert!(tr.root_value());
        assert!(subtree_value_at(&tr, 1).unwrap());
        assert_eq!(subtree_value_at(&tr, 0).unwrap(), tr.root_value());
        assert!(subtree_value_at(&tr, 99).is_err());

        let alt = build_balanced_tree(
            3,
            2,
            RuleSpec::Alternating {
                root: Connective::All,
            },
        )
        .unwrap();
        let x = Assignment::from_01(&[0, 0, 0, 1, 0, 0, 0, 1, 0]);
        assert!(!alt.evaluate_root(&x).unwrap());

        assert!(matches!(
            t.evaluate(&Assignment::from_01(&[1, 0])),
            Err(Error::Length { expected: 9, got: 2 })
        ));
    }

    #[test]
    fn leaves_read_their_slot() {
        let t = maj3(2);
        let tr = t.evaluate(&Assignment::from_index(9, 0b000100000)).unwrap();
        for slot in 0..9 {
            let node = t.slot_node(slot).unwrap();
            assert_eq!(tr.value(node).unwrap(), slot == 5);
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let t = build_balanced_tree(
            3,
            2,
            RuleSpec::Alternating {
                root: Connective::Any,
            },
        )
        .unwrap();
        let s = t.to_json().unwrap();
        assert_eq!(PrereqTree::from_json(&s).unwrap(), t);

        // rule that contradicts the level pattern
        let bad = s.replacen("\"rule\": \"any\"", "\"rule\": \"all\"", 1);
        assert!(PrereqTree::from_json(&bad).is_err());
    }

    #[test]
    fn from_nodes_rejects_non_trees() {
        let leaf = |slot| Node {
            kind: NodeKind::Input { slot },
            children: vec![],
        };
        // node 2 unreachable
        let nodes = vec![
            Node {
                kind: NodeKind::Internal(NodeRule::Any),
                children: vec![1],
            },
            leaf(0),
            leaf(1),
        ];
        assert!(PrereqTree::from_nodes(nodes, RuleSpec::Mixed).is_err());
        // duplicate slot
        let nodes = vec![
            Node {
                kind: NodeKind::Internal(NodeRule::Any),
                children: vec![1, 2],
            },
            leaf(0),
            leaf(0),
        ];
        assert!(PrereqTree::from_nodes(nodes, RuleSpec::Mixed).is_err());
        // back edge
        let nodes = vec![
            Node {
                kind: NodeKind::Internal(NodeRule::Any),
                children: vec![1],
            },
            Node {
                kind: NodeKind::Internal(NodeRule::Any),
                children: vec![0],
            },
        ];
        assert!(PrereqTree::from_nodes(nodes, RuleSpec::Mixed).is_err());
    }

    #[test]
    fn shape_round_trip() {
        let t = build_balanced_tree(3, 3, RuleSpec::Majority).unwrap();
        let back = PrereqTree::from_shape(&t.to_shape(), RuleSpec::Majority).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.arity(), Some(3));
        assert_eq!(back.heights()[0], 3);
    }
}
