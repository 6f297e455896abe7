//! Exhaustive equivalence suites and dataset audits.
//!
//! The reference evaluator here works directly on the leaf slice, splitting it
//! into equal contiguous blocks per level, and never touches the node arrays
//! of [`PrereqTree`].

use serde::Serialize;

use crate::analysis::{joint_distribution, DpLimits};
use crate::circuits::{
    bounded_fanin_gadget_depth, build_alternating_formula, check_monotone,
    compile_tree_to_bounded_fanin, compile_tree_to_threshold, lift_constants,
    rewrite_andor_to_maj3, Circuit,
};
use crate::datasets::{encode_flat, encode_scaffold, Example};
use crate::trees::{build_balanced_tree, Assignment, Connective, NodeRule, PrereqTree, RuleSpec};
use crate::{Error, Result};

/// Largest input count any exhaustive check will enumerate.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 20;

/// Evaluates a layered tree (level `i` has fanin `fanins[i]` and rule
/// `rule_at(i)`) on contiguous leaf blocks.
pub fn reference_eval(bits: &[bool], fanins: &[usize], rule_at: &dyn Fn(usize) -> NodeRule) -> bool {
    fn go(bits: &[bool], level: usize, fanins: &[usize], rule_at: &dyn Fn(usize) -> NodeRule) -> bool {
        if level == fanins.len() {
            return bits[0];
        }
        let block = bits.len() / fanins[level];
        let ones = bits
            .chunks(block)
            .filter(|c| go(c, level + 1, fanins, rule_at))
            .count();
        let rule = rule_at(level);
        let threshold = match rule {
            NodeRule::Maj(k) => k / 2 + 1,
            NodeRule::All => fanins[level],
            NodeRule::Any => 1,
        };
        ones >= threshold
    }
    go(bits, 0, fanins, rule_at)
}

fn spec_rule(spec: RuleSpec, k: usize) -> impl Fn(usize) -> NodeRule {
    move |depth| match spec {
        RuleSpec::Majority => NodeRule::Maj(k),
        RuleSpec::All => NodeRule::All,
        RuleSpec::Any => NodeRule::Any,
        RuleSpec::Alternating { root } => {
            if depth % 2 == 0 {
                root.rule()
            } else {
                root.flip().rule()
            }
        }
        RuleSpec::Mixed => unreachable!("reference needs a per-level spec"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub assignment: Vec<u8>,
    pub expected: bool,
    pub got: bool,
}

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits: String = self.assignment.iter().map(|b| char::from(b'0' + b)).collect();
        write!(f, "x={bits}: expected {}, got {}", self.expected as u8, self.got as u8)
    }
}

fn check_inputs(n: usize) -> Result<()> {
    if n > MAX_EXHAUSTIVE_INPUTS {
        return Err(Error::SizeLimit(format!(
            "{n} inputs is too many to enumerate (max {MAX_EXHAUSTIVE_INPUTS})"
        )));
    }
    Ok(())
}

/// First assignment on which `f` and `g` disagree.
pub fn find_disagreement(
    n: usize,
    mut f: impl FnMut(&Assignment) -> Result<bool>,
    mut g: impl FnMut(&Assignment) -> Result<bool>,
) -> Result<Option<Counterexample>> {
    check_inputs(n)?;
    for idx in 0..1u64 << n {
        let x = Assignment::from_index(n, idx);
        let (want, got) = (f(&x)?, g(&x)?);
        if want != got {
            return Ok(Some(Counterexample {
                assignment: x.bits().iter().map(|&b| b as u8).collect(),
                expected: want,
                got,
            }));
        }
    }
    Ok(None)
}

/// Exhaustively compares a circuit with the tree it claims to compute.
pub fn check_circuit_against_tree(tree: &PrereqTree, c: &Circuit) -> Result<Option<Counterexample>> {
    if c.n_inputs() != tree.input_count() {
        return Err(Error::Length {
            expected: tree.input_count(),
            got: c.n_inputs(),
        });
    }
    find_disagreement(tree.input_count(), |x| tree.evaluate_root(x), |x| c.evaluate(x.bits()))
}

/// An assignment and bit whose 0→1 flip drops the output from 1 to 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneFlip {
    pub assignment: Vec<u8>,
    pub bit: usize,
}

/// Semantic monotonicity by exhaustive single-bit flips.
pub fn check_semantic_monotone(
    n: usize,
    mut f: impl FnMut(&[bool]) -> Result<bool>,
) -> Result<Option<MonotoneFlip>> {
    check_inputs(n)?;
    for idx in 0..1u64 << n {
        let x = Assignment::from_index(n, idx).into_bits();
        if !f(&x)? {
            continue;
        }
        for bit in (0..n).filter(|&i| !x[i]) {
            let mut y = x.clone();
            y[bit] = true;
            if !f(&y)? {
                return Ok(Some(MonotoneFlip {
                    assignment: x.iter().map(|&b| b as u8).collect(),
                    bit,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: impl Into<String>, outcome: Result<std::result::Result<String, String>>) {
        let (passed, detail) = match outcome {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail,
        });
    }
}

/// Trees the small exhaustive suite covers: k=3, d ≤ 2 under every rule spec.
pub fn small_trees() -> Vec<(String, PrereqTree)> {
    let specs = [
        ("maj", RuleSpec::Majority),
        ("all", RuleSpec::All),
        ("any", RuleSpec::Any),
        ("alt-all", RuleSpec::Alternating { root: Connective::All }),
        ("alt-any", RuleSpec::Alternating { root: Connective::Any }),
    ];
    let mut out = Vec::new();
    for (name, spec) in specs {
        for d in 0..=2 {
            let t = build_balanced_tree(3, d, spec).expect("small trees build");
            out.push((format!("{name} k=3 d={d}"), t));
        }
    }
    out
}

/// Alternating formulas with at most 12 inputs used for the rewrite check.
pub fn small_formulas() -> Vec<(usize, Vec<usize>, Connective)> {
    vec![
        (1, vec![2], Connective::All),
        (1, vec![5], Connective::Any),
        (2, vec![2, 2], Connective::All),
        (2, vec![2, 2], Connective::Any),
        (2, vec![3, 4], Connective::All),
        (2, vec![4, 3], Connective::Any),
        (2, vec![2, 6], Connective::All),
        (3, vec![2, 2, 2], Connective::All),
        (3, vec![2, 2, 3], Connective::Any),
        (3, vec![3, 2, 2], Connective::All),
        (4, vec![2, 2, 2, 2], Connective::Any),
    ]
}

/// Tree ↔ reference, tree ↔ both compilers, DP ↔ enumeration, f_t ↔ g_t,
/// and semantic monotonicity of every syntactically monotone circuit.
pub fn run_small_exhaustive() -> SuiteReport {
    let mut report = SuiteReport::default();

    for (name, tree) in small_trees() {
        let k = 3;
        let fanins = vec![k; tree.depth()];
        let rule_at = spec_rule(tree.rule_spec(), k);
        report.record(format!("evaluate = reference [{name}]"), (|| {
            let ce = find_disagreement(
                tree.input_count(),
                |x| Ok(reference_eval(x.bits(), &fanins, &rule_at)),
                |x| tree.evaluate_root(x),
            )?;
            Ok(ce.map_or(Ok(format!("{} assignments", 1u64 << tree.input_count())), |c| Err(c.to_string())))
        })());

        report.record(format!("bounded-fanin compile [{name}]"), (|| {
            let c = compile_tree_to_bounded_fanin(&tree)?;
            if c.max_andor_fanin() > 2 {
                return Ok(Err(format!("fanin {} > 2", c.max_andor_fanin())));
            }
            let ck = match tree.rule_spec() {
                RuleSpec::Majority => bounded_fanin_gadget_depth(NodeRule::Maj(k), k)?,
                _ => bounded_fanin_gadget_depth(NodeRule::All, k)?,
            };
            let m = c.metrics();
            if m.depth > ck * tree.depth() {
                return Ok(Err(format!("depth {} > {ck}·{}", m.depth, tree.depth())));
            }
            Ok(match check_circuit_against_tree(&tree, &c)? {
                Some(ce) => Err(ce.to_string()),
                None => Ok(format!("depth {} size {}", m.depth, m.size)),
            })
        })());

        report.record(format!("threshold compile [{name}]"), (|| {
            let c = compile_tree_to_threshold(&tree)?;
            let m = c.metrics();
            if m.depth != tree.depth() {
                return Ok(Err(format!("depth {} != tree depth {}", m.depth, tree.depth())));
            }
            if !check_monotone(&c).monotone {
                return Ok(Err("threshold compile is not monotone".into()));
            }
            Ok(match check_circuit_against_tree(&tree, &c)? {
                Some(ce) => Err(ce.to_string()),
                None => Ok(format!("depth {} size {}", m.depth, m.size)),
            })
        })());

        report.record(format!("semantic monotonicity [{name}]"), (|| {
            for c in [compile_tree_to_threshold(&tree)?, compile_tree_to_bounded_fanin(&tree)?] {
                if !check_monotone(&c).monotone {
                    continue;
                }
                if let Some(flip) = check_semantic_monotone(c.n_inputs(), |x| c.evaluate(x))? {
                    return Ok(Err(format!("{flip:?}")));
                }
            }
            Ok(Ok("no 1→0 flips".into()))
        })());

        report.record(format!("DP = enumeration [{name}]"), dp_matches_enumeration(&tree, 0.5));
    }
    report.record("DP = enumeration [maj k=3 d=2 p=0.3]", (|| {
        dp_matches_enumeration(&build_balanced_tree(3, 2, RuleSpec::Majority)?, 0.3)
    })());

    for (t, branching, root) in small_formulas() {
        let name = format!("f_t = g_t [t={t} branching={branching:?} root={root:?}]");
        report.record(name, (|| {
            let f = build_alternating_formula(t, &branching, root)?;
            let g = rewrite_andor_to_maj3(&f)?;
            let (lifted, consts) = lift_constants(&g)?;
            let n = f.input_count();
            let rule_at = spec_rule(f.rule_spec(), 0);
            if let Some(ce) = find_disagreement(
                n,
                |x| Ok(reference_eval(x.bits(), &branching, &rule_at)),
                |x| g.evaluate_root(x),
            )? {
                return Ok(Err(format!("g_t: {ce}")));
            }
            if let Some(ce) = find_disagreement(
                n,
                |x| Ok(reference_eval(x.bits(), &branching, &rule_at)),
                |x| {
                    let mut bits = x.bits().to_vec();
                    bits.extend(&consts);
                    lifted.evaluate_root(&Assignment::new(bits))
                },
            )? {
                return Ok(Err(format!("restricted g_t: {ce}")));
            }
            Ok(Ok(format!("{n} inputs, {} constant leaves", consts.len())))
        })());
    }
    report
}

fn dp_matches_enumeration(tree: &PrereqTree, p: f64) -> Result<std::result::Result<String, String>> {
    let k = tree.arity().unwrap_or(3);
    let dist = joint_distribution(k, tree.depth(), p, tree.rule_spec(), DpLimits::default())?;
    let n = tree.input_count();
    let mut m0 = vec![0.0; n + 1];
    let mut m1 = vec![0.0; n + 1];
    for idx in 0..1u64 << n {
        let x = Assignment::from_index(n, idx);
        let s = x.ones();
        let w = p.powi(s as i32) * (1.0 - p).powi((n - s) as i32);
        if tree.evaluate_root(&x)? {
            m1[s] += w;
        } else {
            m0[s] += w;
        }
    }
    let worst = (0..=n)
        .map(|s| (dist.mass(false)[s] - m0[s]).abs().max((dist.mass(true)[s] - m1[s]).abs()))
        .fold(0.0f64, f64::max);
    Ok(if worst <= 1e-12 {
        Ok(format!("max |Δ| = {worst:.1e}"))
    } else {
        Err(format!("max |Δ| = {worst:.3e} > 1e-12"))
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_REPORTED_FAILURES: usize = 20;

/// Recomputes label, tokens and aux of every example from its leaves.
pub fn audit_examples(tree: &PrereqTree, examples: &[Example]) -> AuditReport {
    let mut report = AuditReport::default();
    for e in examples {
        report.checked += 1;
        if let Err(msg) = audit_one(tree, e) {
            if report.failures.len() < MAX_REPORTED_FAILURES {
                report.failures.push(format!("id {}: {msg}", e.id));
            }
        }
    }
    report
}

fn audit_one(tree: &PrereqTree, e: &Example) -> std::result::Result<(), String> {
    let orig = Assignment::new(e.original_leaves().map_err(|err| err.to_string())?);
    let trace = tree.evaluate(&orig).map_err(|err| err.to_string())?;
    if trace.root_value() != e.label {
        return Err(format!("label {} but tree gives {}", e.label as u8, trace.root_value() as u8));
    }
    let shown = Assignment::new(e.leaves.clone());
    if e.is_scaffold() {
        let (_, aux) = encode_scaffold(tree, &orig, &trace).map_err(|err| err.to_string())?;
        let shown_trace = tree.evaluate(&shown).map_err(|err| err.to_string())?;
        let (tokens, _) = encode_scaffold(tree, &shown, &shown_trace).map_err(|err| err.to_string())?;
        if tokens != e.tokens {
            return Err("scaffold tokens do not match leaves".into());
        }
        if aux != e.aux {
            return Err("aux labels do not match subtree values".into());
        }
    } else {
        if encode_flat(&shown) != e.tokens {
            return Err("flat tokens do not match leaves".into());
        }
        if !e.aux.is_empty() {
            return Err("flat example carries aux labels".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{Gate, GateKind};

    #[test]
    fn suite_passes() {
        let r = run_small_exhaustive();
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(r.checks.len() > 60);
    }

    #[test]
    fn off_by_one_threshold_is_caught() {
        let tree = build_balanced_tree(3, 2, RuleSpec::Majority).unwrap();
        let c = compile_tree_to_threshold(&tree).unwrap();
        let (id, gate) = c
            .gates()
            .iter()
            .enumerate()
            .find(|(_, g)| matches!(g.kind, GateKind::Threshold { .. }))
            .unwrap();
        let GateKind::Threshold { weights, theta } = &gate.kind else { unreachable!() };
        let bad = c
            .with_gate(id, Gate::threshold(gate.inputs.clone(), weights.clone(), theta + 1))
            .unwrap();
        let ce = check_circuit_against_tree(&tree, &bad).unwrap().expect("counterexample");
        let x = Assignment::from_01(&ce.assignment);
        assert_eq!(tree.evaluate_root(&x).unwrap(), ce.expected);
        assert_eq!(bad.evaluate(x.bits()).unwrap(), ce.got);
    }

    #[test]
    fn non_monotone_function_is_flagged() {
        let flip = check_semantic_monotone(2, |x| Ok(x[0] != x[1])).unwrap().unwrap();
        assert_eq!(flip.assignment, vec![1, 0]);
        assert_eq!(flip.bit, 1);
        assert!(check_semantic_monotone(3, |x| Ok(x.iter().filter(|&&b| b).count() >= 2))
            .unwrap()
            .is_none());
        assert!(check_semantic_monotone(30, |_| Ok(true)).is_err());
    }

    #[test]
    fn audit_catches_tampering() {
        let tree = build_balanced_tree(3, 2, RuleSpec::Majority).unwrap();
        let x = Assignment::from_01(&[1, 1, 0, 0, 0, 0, 1, 0, 1]);
        let e = crate::datasets::make_example(&tree, 0, x, crate::datasets::Encoding::Scaffold).unwrap();
        assert!(audit_examples(&tree, std::slice::from_ref(&e)).passed());

        let mut bad = e.clone();
        bad.label = !bad.label;
        assert!(!audit_examples(&tree, &[bad]).passed());

        let mut bad = e.clone();
        bad.aux[1].value = !bad.aux[1].value;
        assert!(!audit_examples(&tree, &[bad]).passed());

        let p = crate::datasets::permute_leaves(&e, 11).unwrap();
        assert!(audit_examples(&tree, &[p]).passed());
    }
}
