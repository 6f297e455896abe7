use ktree_core::datasets::{
    decode_flat, decode_scaffold, encode_flat, encode_scaffold, make_example, permute_leaves,
    Encoding, SEPARATOR_PREFIX,
};
use ktree_core::trees::{build_balanced_tree, Assignment, Connective, NodeKind, PrereqTree, RuleSpec};
use ktree_core::verify::{check_semantic_monotone, reference_eval};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = RuleSpec> {
    prop_oneof![
        Just(RuleSpec::Majority),
        Just(RuleSpec::All),
        Just(RuleSpec::Any),
        Just(RuleSpec::Alternating { root: Connective::All }),
        Just(RuleSpec::Alternating { root: Connective::Any }),
    ]
}

fn tree_and_bits(max_d: usize) -> impl Strategy<Value = (PrereqTree, Vec<bool>)> {
    (spec_strategy(), 0..=max_d).prop_flat_map(|(spec, d)| {
        let t = build_balanced_tree(3, d, spec).unwrap();
        let n = t.input_count();
        (Just(t), proptest::collection::vec(any::<bool>(), n))
    })
}

/// Evaluates the subtree rooted at `node` by plain recursion.
fn recursive_value(t: &PrereqTree, node: usize, x: &[bool]) -> bool {
    let n = t.node(node).unwrap();
    match n.kind {
        NodeKind::Input { slot } => x[slot],
        NodeKind::Const(v) => v,
        NodeKind::Internal(rule) => {
            let ones = n.children.iter().filter(|&&c| recursive_value(t, c, x)).count();
            rule.fires(ones, n.children.len())
        }
    }
}

/// Subtree roots in the order their closing separators are emitted, with heights.
fn post_order(t: &PrereqTree, node: usize, out: &mut Vec<(usize, usize)>) -> usize {
    let n = t.node(node).unwrap();
    if n.children.is_empty() {
        return 0;
    }
    let h = n.children.iter().map(|&c| post_order(t, c, out)).max().unwrap() + 1;
    out.push((node, h));
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trace_matches_recursion((t, bits) in tree_and_bits(5)) {
        let trace = t.evaluate(&Assignment::new(bits.clone())).unwrap();
        for id in 0..t.node_count() {
            prop_assert_eq!(trace.value(id).unwrap(), recursive_value(&t, id, &bits));
        }
        let d = t.depth();
        let spec = t.rule_spec();
        let fanins = vec![3; d];
        let rule_at = |depth: usize| spec.rule_at(depth, 3).unwrap();
        prop_assert_eq!(trace.root_value(), reference_eval(&bits, &fanins, &rule_at));
    }

    #[test]
    fn single_flip_never_lowers_root((t, bits) in tree_and_bits(6), bit in any::<prop::sample::Index>()) {
        let i = bit.index(bits.len());
        let mut lo = bits.clone();
        lo[i] = false;
        let mut hi = bits;
        hi[i] = true;
        let a = t.evaluate_root(&Assignment::new(lo)).unwrap();
        let b = t.evaluate_root(&Assignment::new(hi)).unwrap();
        prop_assert!(!a || b);
    }

    #[test]
    fn flat_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..100)) {
        let x = Assignment::new(bits);
        prop_assert_eq!(decode_flat(&encode_flat(&x)).unwrap(), x);
    }

    #[test]
    fn scaffold_round_trip_and_aux((t, bits) in tree_and_bits(5)) {
        let x = Assignment::new(bits.clone());
        let trace = t.evaluate(&x).unwrap();
        let (tokens, aux) = encode_scaffold(&t, &x, &trace).unwrap();
        prop_assert_eq!(decode_scaffold(&tokens).unwrap(), x);

        let d = t.depth();
        prop_assert_eq!(aux.len(), (3usize.pow(d as u32) - 1) / 2);
        prop_assert_eq!(tokens.len(), bits.len() + aux.len());

        let mut expected = Vec::new();
        post_order(&t, t.root(), &mut expected);
        prop_assert_eq!(expected.len(), aux.len());
        for (a, &(node, h)) in aux.iter().zip(&expected) {
            prop_assert_eq!(&tokens[a.pos], &format!("{SEPARATOR_PREFIX}{h}"));
            prop_assert_eq!(a.level, h);
            prop_assert_eq!(a.value, recursive_value(&t, node, &bits));
        }
        if let Some(last) = aux.last() {
            prop_assert_eq!(last.pos, tokens.len() - 1);
            prop_assert_eq!(last.value, trace.root_value());
        }
    }

    #[test]
    fn permutation_preserves_multiset(
        (t, bits) in tree_and_bits(4),
        seed in any::<u64>(),
        scaffold in any::<bool>(),
    ) {
        let enc = if scaffold { Encoding::Scaffold } else { Encoding::Flat };
        let e = make_example(&t, 7, Assignment::new(bits), enc).unwrap();
        let p = permute_leaves(&e, seed).unwrap();
        prop_assert_eq!(p.id, e.id);
        prop_assert_eq!(p.label, e.label);
        prop_assert_eq!(&p.aux, &e.aux);
        prop_assert_eq!(p.leaves.iter().filter(|&&b| b).count(), e.leaves.iter().filter(|&&b| b).count());
        prop_assert_eq!(p.tokens.len(), e.tokens.len());
        for (a, b) in e.tokens.iter().zip(&p.tokens) {
            let sa = a.starts_with(SEPARATOR_PREFIX);
            prop_assert_eq!(sa, b.starts_with(SEPARATOR_PREFIX));
            if sa {
                prop_assert_eq!(a, b);
            }
        }
        prop_assert_eq!(p.original_leaves().unwrap(), e.leaves.clone());
        let leaf_tokens: Vec<String> = p.tokens.iter().filter(|s| !s.starts_with(SEPARATOR_PREFIX)).cloned().collect();
        prop_assert_eq!(decode_flat(&leaf_tokens).unwrap().into_bits(), p.leaves.clone());
    }
}

#[test]
fn every_small_tree_is_monotone() {
    for spec in [
        RuleSpec::Majority,
        RuleSpec::All,
        RuleSpec::Any,
        RuleSpec::Alternating { root: Connective::All },
        RuleSpec::Alternating { root: Connective::Any },
    ] {
        for d in 0..=2 {
            let t = build_balanced_tree(3, d, spec).unwrap();
            let flip = check_semantic_monotone(t.input_count(), |x| {
                t.evaluate_root(&Assignment::new(x.to_vec()))
            })
            .unwrap();
            assert!(flip.is_none(), "{spec:?} d={d}: {flip:?}");
        }
    }
}
