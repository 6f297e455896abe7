//! Alternating read-once ∧/∨ formulas and their ternary-majority rewrite.
//!
//! `MAJ3(a, b, 0) = a ∧ b` and `MAJ3(a, b, 1) = a ∨ b`, so every ALL/ANY
//! node of fanin 2 becomes a `MAJ(3)` node with one constant leaf. Wider
//! nodes are first split into balanced fanin-2 subtrees of the same kind.

use crate::trees::{build_layered_tree, Connective, NodeKind, NodeRule, PrereqTree, RuleSpec, TreeShape};
use crate::{Error, Result};

/// Depth-`t` alternating formula whose level-`i` nodes have `branching[i]`
/// children, with `root_kind` at the root. Leaves read distinct slots.
pub fn build_alternating_formula(
    t: usize,
    branching: &[usize],
    root_kind: Connective,
) -> Result<PrereqTree> {
    if branching.is_empty() {
        return Err(Error::Config("branching list is empty".into()));
    }
    if branching.len() != t {
        return Err(Error::Config(format!(
            "branching has {} levels, expected t={t}",
            branching.len()
        )));
    }
    if let Some(f) = branching.iter().find(|&&f| f < 2) {
        return Err(Error::Config(format!("fanin {f} < 2 in branching")));
    }
    build_layered_tree(branching, RuleSpec::Alternating { root: root_kind })
}

/// Uniform branching `⌈n^{1/t}⌉` (at least 2) for `t` levels.
pub fn default_branching(n: usize, t: usize) -> Result<Vec<usize>> {
    if t == 0 {
        return Err(Error::Config("t must be at least 1".into()));
    }
    let exp = u32::try_from(t).map_err(|_| Error::Config(format!("t={t} too large")))?;
    let mut b = 2usize;
    while b.checked_pow(exp).is_some_and(|p| p < n) {
        b += 1;
    }
    Ok(vec![b; t])
}

/// Rewrites an ALL/ANY tree into an equivalent pure `MAJ(3)` tree with
/// constant leaves (0 under former ALL nodes, 1 under former ANY nodes).
/// Slot numbering is preserved. Fanin-1 nodes collapse onto their child.
pub fn rewrite_andor_to_maj3(tree: &PrereqTree) -> Result<PrereqTree> {
    if let Some(node) = tree
        .nodes()
        .iter()
        .find(|n| matches!(n.kind, NodeKind::Internal(NodeRule::Maj(_))))
    {
        return Err(Error::Unsupported(format!(
            "tree already contains {:?} nodes",
            node.kind
        )));
    }
    let shape = rewrite_shape(tree.to_shape());
    PrereqTree::from_shape(&shape, RuleSpec::Majority)
}

fn rewrite_shape(shape: TreeShape) -> TreeShape {
    match shape {
        TreeShape::Node(rule, kids) => {
            let pad = match rule {
                NodeRule::All => false,
                NodeRule::Any => true,
                NodeRule::Maj(_) => unreachable!("checked by caller"),
            };
            let kids: Vec<TreeShape> = kids.into_iter().map(rewrite_shape).collect();
            pair_up(kids, pad)
        }
        leaf => leaf,
    }
}

fn pair_up(mut kids: Vec<TreeShape>, pad: bool) -> TreeShape {
    if kids.len() == 1 {
        return kids.pop().expect("one child");
    }
    let right = kids.split_off(kids.len().div_ceil(2));
    TreeShape::Node(
        NodeRule::Maj(3),
        vec![pair_up(kids, pad), pair_up(right, pad), TreeShape::Const(pad)],
    )
}

/// Turns every constant leaf into a fresh input slot numbered after the
/// existing ones. Returns the lifted tree and the values the new slots must
/// take to restrict it back to the original function.
pub fn lift_constants(tree: &PrereqTree) -> Result<(PrereqTree, Vec<bool>)> {
    let mut next = tree.input_count();
    let mut values = Vec::new();
    let shape = lift(tree.to_shape(), &mut next, &mut values);
    Ok((PrereqTree::from_shape(&shape, tree.rule_spec())?, values))
}

fn lift(shape: TreeShape, next: &mut usize, values: &mut Vec<bool>) -> TreeShape {
    match shape {
        TreeShape::Const(v) => {
            values.push(v);
            *next += 1;
            TreeShape::Input(*next - 1)
        }
        TreeShape::Node(rule, kids) => {
            TreeShape::Node(rule, kids.into_iter().map(|k| lift(k, next, values)).collect())
        }
        leaf => leaf,
    }
}
