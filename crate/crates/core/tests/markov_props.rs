//! Local-computation soundness: node marginals from all three
//! architectures against the brute-force oracle on randomly generated
//! Markov trees, plus the structural tree theorems.

use fcf_core::frame::cond_independent;
use fcf_core::markov::{
    collect, hugin, lauritzen_spiegelhalter, shenoy_shafer, verify_markov, MarkovTree, RunOptions,
};
use fcf_core::oracle::{global_combine, oracle_marginal, DEFAULT_CAP};
use fcf_core::FcfError;
use fcf_testkit as kit;
use kit::{rng, universe, FactorStyle};

fn random_trees(seed: u64, per_style: usize) -> Vec<MarkovTree> {
    let mut r = rng(seed);
    let mut trees = Vec::new();
    for i in 0..per_style {
        let style = if i % 2 == 0 {
            FactorStyle::Positive
        } else {
            FactorStyle::Tied
        };
        let u6 = universe(6);
        let u8 = universe(8);
        trees.push(kit::random_chain_tree(&mut r, &u6, 4, style));
        trees.push(kit::random_star_tree(&mut r, &u8, 4, style));
        let (_, mv) = kit::random_mv_tree(&mut r, 5, 4, style);
        trees.push(mv);
    }
    trees
}

#[test]
fn shenoy_shafer_matches_the_oracle_on_random_trees() {
    let trees = random_trees(0x31, 7);
    assert!(trees.len() >= 20);
    for (i, tree) in trees.iter().enumerate() {
        assert!(verify_markov(tree).unwrap(), "tree {i} not Markov");
        let global = global_combine(&tree.factors(), DEFAULT_CAP).unwrap();
        let out = shenoy_shafer(tree, &RunOptions::default()).unwrap();
        assert_eq!(out.messages_sent, 2 * (tree.len() - 1), "message count");
        for (id, marginal) in &out.by_node {
            let frame = &tree.node(id).unwrap().frame;
            let expected = oracle_marginal(&global, frame).unwrap();
            assert!(
                marginal.approx_eq(&expected),
                "tree {i} node {id}: local {:?} vs oracle {:?}",
                marginal.values(),
                expected.values()
            );
        }
    }
}

#[test]
fn division_architectures_agree_where_applicable() {
    let trees = random_trees(0x32, 7);
    let mut applied = 0usize;
    for tree in &trees {
        let ss = shenoy_shafer(tree, &RunOptions::default()).unwrap();
        match lauritzen_spiegelhalter(tree, &RunOptions::default()) {
            Ok(ls) => {
                applied += 1;
                for (id, marginal) in &ss.by_node {
                    assert!(ls.by_node[id].approx_eq(marginal), "ls differs at {id}");
                }
                let hg = hugin(tree, &RunOptions::default()).unwrap();
                let global = global_combine(&tree.factors(), DEFAULT_CAP).unwrap();
                for (id, marginal) in &ss.by_node {
                    assert!(
                        hg.marginals.by_node[id].approx_eq(marginal),
                        "hugin differs at {id}"
                    );
                }
                for ((a, b), separator) in &hg.separators {
                    let sep_frame = fcf_core::frame::meet(
                        &tree.node(a).unwrap().frame,
                        &tree.node(b).unwrap().frame,
                    )
                    .unwrap();
                    let expected = oracle_marginal(&global, &sep_frame).unwrap();
                    assert!(
                        separator.approx_eq(&expected),
                        "separator {a}-{b} differs from the oracle"
                    );
                }
            }
            Err(FcfError::NonCommutativeEdge(_, _)) => {}
            Err(other) => panic!("unexpected error: {other}"),
        }
    }
    assert!(applied >= 15, "too few commutative trees: {applied}");
}

#[test]
fn collect_marginal_matches_oracle_at_every_root() {
    let trees = random_trees(0x33, 3);
    for tree in &trees {
        let global = global_combine(&tree.factors(), DEFAULT_CAP).unwrap();
        for root in tree.node_ids() {
            let out = collect(
                tree,
                &RunOptions {
                    root: Some(root.clone()),
                    trust_tree: true,
                },
            )
            .unwrap();
            assert_eq!(out.messages.len(), tree.len() - 1);
            let expected =
                oracle_marginal(&global, &tree.node(root).unwrap().frame).unwrap();
            assert!(out.marginal.approx_eq(&expected));
        }
    }
}

#[test]
fn subtrees_of_markov_trees_are_markov() {
    for tree in random_trees(0x34, 2) {
        for (v, w) in tree.edges() {
            for (a, b) in [(&v, &w), (&w, &v)] {
                let sub = tree.subtree(a, b).unwrap();
                assert!(verify_markov(&sub).unwrap());
            }
        }
    }
}

#[test]
fn neighbor_subtree_independence() {
    for tree in random_trees(0x35, 2) {
        for (v, w) in tree.edges() {
            for (a, b) in [(&v, &w), (&w, &v)] {
                // the frame of a node is independent of the subtree beyond
                // a neighbor, given that neighbor's frame
                let subtree_frame = tree.subtree(a, b).unwrap().join_frame().unwrap();
                let node_frame = tree.node(a).unwrap().frame.clone();
                let given = tree.node(b).unwrap().frame.clone();
                assert!(cond_independent(&[node_frame, subtree_frame], &given).unwrap());
            }
        }
    }
}

/// Division architectures also cover adjacent frames that are
/// incomparable but commute (their meet is a proper coarsening of both).
#[test]
fn division_architectures_on_incomparable_commutative_pairs() {
    let fx = kit::e1();
    let pa = fcf_core::ProbPotential::new(fx.a.clone(), vec![2.0, 3.0]).unwrap();
    let pb = fcf_core::ProbPotential::new(fx.b.clone(), vec![5.0, 7.0]).unwrap();
    let tree = MarkovTree::new(
        [
            ("na".to_string(), fx.a.clone(), pa),
            ("nb".to_string(), fx.b.clone(), pb),
        ],
        [("na".to_string(), "nb".to_string())],
    )
    .unwrap();
    assert!(verify_markov(&tree).unwrap());
    let global = global_combine(&tree.factors(), DEFAULT_CAP).unwrap();
    let ls = lauritzen_spiegelhalter(&tree, &RunOptions::default()).unwrap();
    let hg = hugin(&tree, &RunOptions::default()).unwrap();
    let expected_a =
        fcf_core::ProbPotential::new(fx.a.clone(), vec![24.0, 36.0]).unwrap();
    let expected_b =
        fcf_core::ProbPotential::new(fx.b.clone(), vec![25.0, 35.0]).unwrap();
    assert!(ls.by_node["na"].approx_eq(&expected_a));
    assert!(ls.by_node["nb"].approx_eq(&expected_b));
    for (id, marginal) in &ls.by_node {
        let expected =
            oracle_marginal(&global, &tree.node(id).unwrap().frame).unwrap();
        assert!(marginal.approx_eq(&expected));
        assert!(hg.marginals.by_node[id].approx_eq(&expected));
    }
    // the separator lives on the meet (the bottom frame here) and holds
    // the total mass of the product
    let sep = &hg.separators[&("na".to_string(), "nb".to_string())];
    assert_eq!(sep.values(), &[60.0]);
}

/// Zero-valued factor entries drive the off-support branch of division:
/// inverses are zero off support and the distribute pass still restores
/// the exact marginals.
#[test]
fn division_architectures_with_zero_values() {
    let mut r = rng(0x38);
    let u = universe(6);
    for i in 0..20 {
        // chains and stars built from coarsenings keep adjacent pairs
        // commutative; factors here carry roughly a quarter zeros
        let frames = kit::random_coarsening_chain(&mut r, &u, 4);
        let nodes: Vec<(String, fcf_core::Frame, fcf_core::ProbPotential)> = frames
            .iter()
            .enumerate()
            .map(|(k, f)| (format!("c{k}"), f.clone(), kit::random_potential(&mut r, f)))
            .collect();
        let edges: Vec<(String, String)> = (1..frames.len())
            .map(|k| (format!("c{}", k - 1), format!("c{k}")))
            .collect();
        let tree = MarkovTree::new(nodes, edges).unwrap();
        let global = global_combine(&tree.factors(), DEFAULT_CAP).unwrap();
        let ss = shenoy_shafer(&tree, &RunOptions::default()).unwrap();
        let ls = lauritzen_spiegelhalter(&tree, &RunOptions::default()).unwrap();
        let hg = hugin(&tree, &RunOptions::default()).unwrap();
        for (id, marginal) in &ss.by_node {
            let expected =
                oracle_marginal(&global, &tree.node(id).unwrap().frame).unwrap();
            assert!(marginal.approx_eq(&expected), "ss {i} node {id}");
            assert!(ls.by_node[id].approx_eq(&expected), "ls {i} node {id}");
            assert!(hg.marginals.by_node[id].approx_eq(&expected), "hugin {i} node {id}");
        }
    }
}

/// Markov trees with a non-commutative adjacent pair: only Shenoy-Shafer
/// applies, and it must still reproduce the oracle.
#[test]
fn shenoy_shafer_handles_non_commutative_markov_trees() {
    let mut r = rng(0x37);
    let u = universe(5);
    let mut found = 0usize;
    for _ in 0..3000 {
        let f1 = kit::random_frame(&mut r, &u);
        let f2 = kit::random_frame(&mut r, &u);
        let f3 = kit::random_frame(&mut r, &u);
        let p1 = kit::random_positive_potential(&mut r, &f1);
        let p2 = kit::random_positive_potential(&mut r, &f2);
        let p3 = kit::random_positive_potential(&mut r, &f3);
        let tree = MarkovTree::new(
            [
                ("a".to_string(), f1.clone(), p1),
                ("b".to_string(), f2.clone(), p2),
                ("c".to_string(), f3.clone(), p3),
            ],
            [
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "c".to_string()),
            ],
        )
        .unwrap();
        if !verify_markov(&tree).unwrap() {
            continue;
        }
        let any_non_commutative = !fcf_core::frame::is_commutative_pair(&f1, &f2).unwrap()
            || !fcf_core::frame::is_commutative_pair(&f2, &f3).unwrap();
        if !any_non_commutative {
            continue;
        }
        found += 1;
        let global = global_combine(&tree.factors(), DEFAULT_CAP).unwrap();
        let ss = shenoy_shafer(&tree, &RunOptions::default()).unwrap();
        for (id, marginal) in &ss.by_node {
            let expected =
                oracle_marginal(&global, &tree.node(id).unwrap().frame).unwrap();
            assert!(marginal.approx_eq(&expected), "node {id} differs");
        }
        assert!(matches!(
            lauritzen_spiegelhalter(&tree, &RunOptions::default()),
            Err(FcfError::NonCommutativeEdge(_, _))
        ));
        if found >= 10 {
            break;
        }
    }
    assert!(found >= 5, "too few non-commutative Markov chains: {found}");
}

#[test]
fn runs_are_bit_identical() {
    let trees = random_trees(0x36, 1);
    for tree in &trees {
        let a = shenoy_shafer(tree, &RunOptions::default()).unwrap();
        let b = shenoy_shafer(tree, &RunOptions::default()).unwrap();
        for (id, m) in &a.by_node {
            assert_eq!(m.values(), b.by_node[id].values());
        }
    }
}
