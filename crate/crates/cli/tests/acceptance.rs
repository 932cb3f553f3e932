//! Acceptance suite: one test per release criterion, each printing a
//! PASS line on success. Run with `cargo test -p fcf-cli --test
//! acceptance -- --nocapture` to see the lines.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use fcf_core::approx::approx_eq;
use fcf_core::conditioning::{
    conditional, factorization_equivalences, support_indicator,
};
use fcf_core::frame::{cond_independent, join2, refines, ElemSet, Frame};
use fcf_core::markov::{
    hugin, lauritzen_spiegelhalter, shenoy_shafer, verify_markov, MarkovTree, RunOptions,
};
use fcf_core::maxprod::{max_transport, mpe};
use fcf_core::oracle::{global_combine, oracle_marginal, oracle_mpe, DEFAULT_CAP};
use fcf_core::{FcfError, ProbPotential, SetPotential};

use fcf_cli::{load_model, parse_model, run_query, serialize_model, CliError};

use fcf_testkit as kit;
use kit::{rng, universe, FactorStyle};

fn pass(n: u32, name: &str) {
    println!("criterion {n} ({name}): PASS");
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn assert_pot_eq(a: &ProbPotential, b: &ProbPotential, context: &str) {
    assert!(a.approx_eq(b), "{context}: {:?} vs {:?}", a.values(), b.values());
}

fn assert_sp_eq(a: &SetPotential, b: &SetPotential, context: &str) {
    assert!(a.approx_eq(b), "{context}");
}

/// Criterion 1: the axiom suites for the three algebras, 200 randomized
/// instances each, under 60 seconds.
#[test]
fn criterion_1_axiom_suites() {
    let started = Instant::now();
    let mut r = rng(0xac1);

    // set potentials under sum/product over universes of up to 8 atoms
    for i in 0..200 {
        let n = 2 + (i % 7); // universe sizes 2..=8
        let u = universe(n);
        let f1 = kit::random_frame(&mut r, &u);
        let f2 = kit::random_frame(&mut r, &u);
        let f3 = kit::random_frame(&mut r, &u);
        let m1 = kit::random_set_potential(&mut r, &f1, 4);
        let m2 = kit::random_set_potential(&mut r, &f2, 4);
        let m3 = kit::random_set_potential(&mut r, &f3, 4);

        // semigroup laws and labeling
        assert_sp_eq(
            &m1.combine(&m2).unwrap(),
            &m2.combine(&m1).unwrap(),
            "set combination commutativity",
        );
        assert_sp_eq(
            &m1.combine(&m2).unwrap().combine(&m3).unwrap(),
            &m1.combine(&m2.combine(&m3).unwrap()).unwrap(),
            "set combination associativity",
        );
        assert_eq!(
            m1.combine(&m2).unwrap().label(),
            &join2(&f1, &f2).unwrap()
        );
        assert_eq!(m1.transport(&f3).unwrap().label(), &f3);
        // unit and null laws
        assert_sp_eq(
            &m1.combine(&SetPotential::unit(f1.clone())).unwrap(),
            &m1,
            "unit law",
        );
        assert!(m1.combine(&SetPotential::null(f1.clone())).unwrap().is_null());
        assert_eq!(m1.transport(&f3).unwrap().is_null(), m1.is_null());
        assert_sp_eq(
            &m1.combine(&SetPotential::unit(f2.clone())).unwrap(),
            &m1.transport(&join2(&f1, &f2).unwrap()).unwrap(),
            "foreign unit is transport to the join",
        );
        assert_sp_eq(
            &SetPotential::unit(f1.clone())
                .combine(&SetPotential::unit(f2.clone()))
                .unwrap(),
            &SetPotential::unit(join2(&f1, &f2).unwrap()),
            "units multiply to the join unit",
        );
        // identity transport
        assert_sp_eq(&m1.transport(&f1).unwrap(), &m1, "identity transport");
        // transport and combination through a conditioner
        let (t1, t2, given) = kit::random_ci_triple(&mut r, &u);
        let m = kit::random_set_potential(&mut r, &t1, 4);
        assert_sp_eq(
            &m.transport(&t2).unwrap(),
            &m.transport(&given).unwrap().transport(&t2).unwrap(),
            "staged set transport",
        );
        let w1 = kit::random_set_potential(&mut r, &t1, 3);
        let w2 = kit::random_set_potential(&mut r, &t2, 3);
        assert_sp_eq(
            &w1.combine(&w2).unwrap().transport(&given).unwrap(),
            &w1.transport(&given)
                .unwrap()
                .combine(&w2.transport(&given).unwrap())
                .unwrap(),
            "set combination through a conditioner",
        );
    }

    // max/product potentials over the same universes
    for i in 0..200 {
        let n = 2 + (i % 7);
        let u = universe(n);
        let f1 = kit::random_frame(&mut r, &u);
        let p1 = kit::random_potential(&mut r, &f1);
        assert_pot_eq(&max_transport(&p1, &f1).unwrap(), &p1, "max identity");
        let (t1, t2, given) = kit::random_ci_triple(&mut r, &u);
        let p = kit::random_potential(&mut r, &t1);
        assert_pot_eq(
            &max_transport(&p, &t2).unwrap(),
            &max_transport(&max_transport(&p, &given).unwrap(), &t2).unwrap(),
            "staged max transport",
        );
        let q1 = kit::random_potential(&mut r, &t1);
        let q2 = kit::random_potential(&mut r, &t2);
        assert_pot_eq(
            &max_transport(&q1.combine(&q2).unwrap(), &given).unwrap(),
            &max_transport(&q1, &given)
                .unwrap()
                .combine(&max_transport(&q2, &given).unwrap())
                .unwrap(),
            "max transport of an independent combination",
        );
        // unit, null, labeling as in the sum case (combination is shared)
        assert_pot_eq(
            &p1.combine(&ProbPotential::unit(f1.clone())).unwrap(),
            &p1,
            "max unit",
        );
        assert!(p1.combine(&ProbPotential::zero(f1.clone())).unwrap().is_null());
        let f2 = kit::random_frame(&mut r, &u);
        assert_pot_eq(
            &max_transport(&ProbPotential::unit(f1.clone()), &f2).unwrap(),
            &ProbPotential::unit(f2),
            "max transport preserves units",
        );
    }

    // probability potentials on multivariate models of up to 4 binary
    // variables, with projection restricted to coarsenings
    for i in 0..200 {
        let nvars = 2 + (i % 3);
        let model = kit::random_binary_model(nvars);
        let s1 = kit::random_var_subset(&mut r, &model);
        let s2 = kit::random_var_subset(&mut r, &model);
        let to_frame = |s: &[String]| {
            model
                .frame(&s.iter().map(String::as_str).collect::<Vec<_>>())
                .unwrap()
        };
        let f1 = to_frame(&s1);
        let f2 = to_frame(&s2);
        let p1 = kit::random_potential(&mut r, &f1);
        let p2 = kit::random_potential(&mut r, &f2);
        let f3 = kit::random_frame(&mut r, model.universe());
        let p3 = kit::random_potential(&mut r, &f3);
        // semigroup and labeling
        assert_pot_eq(
            &p1.combine(&p2).unwrap(),
            &p2.combine(&p1).unwrap(),
            "potential commutativity",
        );
        assert_pot_eq(
            &p1.combine(&p2).unwrap().combine(&p3).unwrap(),
            &p1.combine(&p2.combine(&p3).unwrap()).unwrap(),
            "potential associativity",
        );
        assert_eq!(p1.combine(&p2).unwrap().label(), &join2(&f1, &f2).unwrap());
        // unit and null
        assert_pot_eq(
            &p1.combine(&ProbPotential::unit(f1.clone())).unwrap(),
            &p1,
            "unit law",
        );
        assert!(p1.combine(&ProbPotential::zero(f1.clone())).unwrap().is_null());
        // projection transitivity and null preservation on a chain
        let mid = kit::random_coarsening(&mut r, &f1);
        let low = kit::random_coarsening(&mut r, &mid);
        assert_pot_eq(
            &p1.transport(&low).unwrap(),
            &p1.transport(&mid).unwrap().transport(&low).unwrap(),
            "projection transitivity",
        );
        assert_eq!(p1.transport(&mid).unwrap().is_null(), p1.is_null());
        assert_eq!(p1.transport(&mid).unwrap().label(), &mid);
        // combination axiom through the meet
        let lhs = p1.combine(&p2).unwrap().transport(&f1).unwrap();
        let rhs = p1
            .combine(
                &p2.transport(&fcf_core::frame::meet(&f1, &f2).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_pot_eq(&lhs, &rhs, "combination axiom");
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "axiom suites took {elapsed:?}, budget is 60 s"
    );
    pass(1, "axiom suites");
}

/// Criterion 2: the likelihood map is a combination homomorphism on 200
/// random set-potential pairs.
#[test]
fn criterion_2_likelihood_homomorphism() {
    let mut r = rng(0xac2);
    for i in 0..200 {
        let n = 2 + (i % 7);
        let u = universe(n);
        let f1 = kit::random_frame(&mut r, &u);
        let f2 = kit::random_frame(&mut r, &u);
        let m1 = kit::random_set_potential(&mut r, &f1, 5);
        let m2 = kit::random_set_potential(&mut r, &f2, 5);
        let lhs = m1.combine(&m2).unwrap().likelihood();
        let rhs = m1.likelihood().combine(&m2.likelihood()).unwrap();
        assert_pot_eq(&lhs, &rhs, "likelihood homomorphism");
    }
    pass(2, "likelihood homomorphism");
}

/// Criterion 3: quasi-separoid laws and their n-ary extension, exhaustive
/// on four atoms and randomized on six; the multivariate closed form
/// matches exactly for up to three binary variables.
#[test]
fn criterion_3_separoid_laws() {
    // exhaustive over all partition triples of a 4-atom universe
    let u4 = universe(4);
    let frames = kit::all_frames(&u4);
    assert_eq!(frames.len(), 15);
    for t1 in &frames {
        for lam in &frames {
            assert!(cond_independent(&[t1.clone(), lam.clone()], lam).unwrap());
        }
    }
    for t1 in &frames {
        for t2 in &frames {
            for lam in &frames {
                let ci = cond_independent(&[t1.clone(), t2.clone()], lam).unwrap();
                assert_eq!(
                    ci,
                    cond_independent(&[t2.clone(), t1.clone()], lam).unwrap()
                );
                if !ci {
                    continue;
                }
                for coarser in &frames {
                    if refines(coarser, t2).unwrap() {
                        assert!(
                            cond_independent(&[t1.clone(), coarser.clone()], lam).unwrap()
                        );
                    }
                }
                assert!(cond_independent(
                    &[t1.clone(), join2(t2, lam).unwrap()],
                    lam
                )
                .unwrap());
            }
        }
    }
    // n-ary extension randomized on six atoms
    let mut r = rng(0xac3);
    let u6 = universe(6);
    let mut held = 0usize;
    for _ in 0..400 {
        let t1 = kit::random_frame(&mut r, &u6);
        let t2 = kit::random_frame(&mut r, &u6);
        let t3 = kit::random_frame(&mut r, &u6);
        let lam = kit::random_frame(&mut r, &u6);
        if !cond_independent(&[t1.clone(), t2.clone(), t3.clone()], &lam).unwrap() {
            continue;
        }
        held += 1;
        assert!(cond_independent(&[t3.clone(), t1.clone(), t2.clone()], &lam).unwrap());
        assert!(cond_independent(&[t1.clone(), t3.clone()], &lam).unwrap());
        let coarser = kit::random_coarsening(&mut r, &t1);
        assert!(cond_independent(&[coarser, t2.clone(), t3.clone()], &lam).unwrap());
        assert!(cond_independent(&[join2(&t1, &t2).unwrap(), t3.clone()], &lam).unwrap());
        assert!(cond_independent(
            &[join2(&t1, &lam).unwrap(), t2.clone(), t3.clone()],
            &lam
        )
        .unwrap());
    }
    assert!(held > 10, "too few independent families sampled");

    // closed form on all subset triples of three binary variables
    let model = kit::random_binary_model(3);
    let names = kit::model_vars(&model);
    let subsets: Vec<Vec<&str>> = (0..8u32)
        .map(|mask| {
            names
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, n)| n.as_str())
                .collect()
        })
        .collect();
    for s in &subsets {
        for t in &subsets {
            for q in &subsets {
                let closed = s.iter().filter(|v| t.contains(v)).all(|v| q.contains(v));
                let ci = cond_independent(
                    &[model.frame(s).unwrap(), model.frame(t).unwrap()],
                    &model.frame(q).unwrap(),
                )
                .unwrap();
                assert_eq!(ci, closed, "closed form mismatch: {s:?} {t:?} {q:?}");
            }
        }
    }
    pass(3, "separoid laws");
}

/// Criterion 4: Shenoy-Shafer marginals equal the oracle on at least 50
/// random verified Markov trees; the division architectures agree where
/// applicable; message counts are exactly 2(|V|-1).
#[test]
fn criterion_4_local_computation_soundness() {
    let mut r = rng(0xac4);
    let mut accepted = 0usize;
    let mut division_checked = 0usize;
    let mut attempts = 0usize;
    while accepted < 50 {
        attempts += 1;
        assert!(attempts < 500, "tree generation stalled");
        let style = if attempts.is_multiple_of(2) {
            FactorStyle::Positive
        } else {
            FactorStyle::Tied
        };
        let tree = match attempts % 4 {
            0 => kit::random_chain_tree(&mut r, &universe(8), 2 + attempts % 7, style),
            1 => kit::random_star_tree(&mut r, &universe(8), 1 + attempts % 7, style),
            2 => kit::random_mv_tree(&mut r, 5 + attempts % 3, 4, style).1,
            // larger instances: up to 13 binary variables, join frames
            // up to 8192 elements
            _ => kit::random_mv_tree(&mut r, 10 + attempts % 4, 5, style).1,
        };
        if tree.len() > 8 {
            continue;
        }
        let join_frame = tree.join_frame().unwrap();
        if join_frame.len() > 10_000 {
            continue;
        }
        assert!(verify_markov(&tree).unwrap(), "generated tree not Markov");
        accepted += 1;

        let global = global_combine(&tree.factors(), DEFAULT_CAP).unwrap();
        let ss = shenoy_shafer(&tree, &RunOptions::trusted()).unwrap();
        assert_eq!(ss.messages_sent, 2 * (tree.len() - 1), "message count");
        for (id, marginal) in &ss.by_node {
            let expected =
                oracle_marginal(&global, &tree.node(id).unwrap().frame).unwrap();
            assert_pot_eq(marginal, &expected, &format!("node {id}"));
        }
        match lauritzen_spiegelhalter(&tree, &RunOptions::trusted()) {
            Ok(ls) => {
                division_checked += 1;
                let hg = hugin(&tree, &RunOptions::trusted()).unwrap();
                for (id, marginal) in &ss.by_node {
                    assert_pot_eq(&ls.by_node[id], marginal, "ls agreement");
                    assert_pot_eq(&hg.marginals.by_node[id], marginal, "hugin agreement");
                }
            }
            Err(FcfError::NonCommutativeEdge(_, _)) => {}
            Err(other) => panic!("unexpected error: {other}"),
        }
    }
    assert!(accepted >= 50);
    assert!(division_checked >= 25, "too few commutative trees");
    pass(4, "local computation soundness");
}

/// Criterion 5: continuation and the six conditional identities on 100
/// random chain instances; the eight equivalence statements evaluate
/// identically, all true on products and all false after a 10%
/// perturbation.
#[test]
fn criterion_5_conditionals() {
    let mut r = rng(0xac5);
    for i in 0..100 {
        let n = 4 + (i % 5); // universes of 4..=8 atoms
        let u = universe(n);
        let chain = kit::random_coarsening_chain(&mut r, &u, 4);
        let (dp, theta, l1, l2) = (&chain[0], &chain[1], &chain[2], &chain[3]);
        let p = kit::random_potential(&mut r, dp);

        // continuation
        assert_pot_eq(
            &p.transport(theta).unwrap(),
            &conditional(&p, theta, l1)
                .unwrap()
                .combine(&p.transport(l1).unwrap())
                .unwrap(),
            "continuation",
        );
        // 1: the conditional's class dominates the projection's class
        let cond = conditional(&p, theta, l1).unwrap();
        let f_proj = support_indicator(&p.transport(l1).unwrap()).into_potential();
        let f_cond = support_indicator(&cond).into_potential();
        assert_pot_eq(
            &f_proj.combine(&f_cond).unwrap(),
            &f_cond,
            "support domination",
        );
        // 2: projecting the conditional to the conditioner
        assert_pot_eq(&cond.transport(l1).unwrap(), &f_proj, "projected conditional");
        // 3: chain decomposition
        assert_pot_eq(
            &conditional(&p, theta, l2).unwrap(),
            &conditional(&p, theta, l1)
                .unwrap()
                .combine(&conditional(&p, l1, l2).unwrap())
                .unwrap(),
            "chain decomposition",
        );
        // 4: projection of a conditional conditions the projection;
        // joining a coarsening of theta with l1 keeps l1 <= t1 <= theta
        let t_mid = kit::random_coarsening(&mut r, theta);
        let t1 = join2(&t_mid, l1).unwrap();
        assert_pot_eq(
            &conditional(&p, theta, l1).unwrap().transport(&t1).unwrap(),
            &conditional(&p, &t1, l1).unwrap(),
            "projected conditional equals conditional",
        );
        // 5: two-step stack projected to an intermediate frame
        assert_pot_eq(
            &conditional(&p, theta, l1)
                .unwrap()
                .combine(&conditional(&p, l1, l2).unwrap())
                .unwrap()
                .transport(&t1)
                .unwrap(),
            &conditional(&p, &t1, l2).unwrap(),
            "stacked conditionals",
        );
        // 6: a factor living on the conditioner contributes its indicator
        let q = kit::random_potential(&mut r, l1);
        let lhs = conditional(&p.transport(theta).unwrap().combine(&q).unwrap(), theta, l1)
            .unwrap();
        let rhs = conditional(&p, theta, l1)
            .unwrap()
            .combine(&support_indicator(&q).into_potential())
            .unwrap();
        assert_pot_eq(&lhs, &rhs, "factor on the conditioner");
    }

    // equivalence statements: unanimously true on products, unanimously
    // false after a 10% perturbation of one entry
    let fx = kit::e1();
    let model = kit::random_binary_model(3);
    let f = |vars: &[&str]| model.frame(vars).unwrap();
    let bottom_mv = model.frame::<&str>(&[]).unwrap();
    let cases = [
        (fx.a.clone(), fx.b.clone(), fx.bottom.clone()),
        (f(&["v0"]), f(&["v1"]), f(&["v2"])),
        (f(&["v0"]), f(&["v1"]), bottom_mv),
        (f(&["v0", "v2"]), f(&["v1", "v2"]), f(&["v2"])),
    ];
    for (t1, t2, given) in &cases {
        for _ in 0..25 {
            let q1 = kit::random_positive_potential(&mut r, &join2(t1, given).unwrap());
            let q2 = kit::random_positive_potential(&mut r, &join2(t2, given).unwrap());
            let p = q1.combine(&q2).unwrap();
            let report = factorization_equivalences(&p, t1, t2, given).unwrap();
            assert!(report.all_equal() && report.all_true(), "{report:?}");
            let mut values = p.values().to_vec();
            values[0] *= 1.1;
            let broken = ProbPotential::new(p.label().clone(), values).unwrap();
            let report = factorization_equivalences(&broken, t1, t2, given).unwrap();
            assert!(
                report.all_equal() && !report.all_true(),
                "perturbed report: {report:?}"
            );
        }
    }
    pass(5, "conditionals");
}

/// Criterion 6: most-probable-configuration value and full argmax set
/// equal the oracle on the fixtures and on 50 random trees; scaling one
/// factor rescales the value and leaves the configurations unchanged.
#[test]
fn criterion_6_most_probable_configurations() {
    // fixtures: the two-node product through a bottom hub, and the chain
    let fx = kit::e1();
    let pa = ProbPotential::new(fx.a.clone(), vec![2.0, 3.0]).unwrap();
    let pb = ProbPotential::new(fx.b.clone(), vec![5.0, 7.0]).unwrap();
    let star = MarkovTree::new(
        [
            (
                "c".to_string(),
                fx.bottom.clone(),
                ProbPotential::unit(fx.bottom.clone()),
            ),
            ("la".to_string(), fx.a.clone(), pa),
            ("lb".to_string(), fx.b.clone(), pb),
        ],
        [
            ("c".to_string(), "la".to_string()),
            ("c".to_string(), "lb".to_string()),
        ],
    )
    .unwrap();
    let out = mpe(&star, &RunOptions::default()).unwrap();
    assert!(approx_eq(out.value, 21.0));
    assert_eq!(out.configurations, ElemSet::from([3]));
    assert_eq!(out.frame, Frame::discrete(&fx.universe));

    let (_, t1) = kit::t1();
    let out = mpe(&t1, &RunOptions::default()).unwrap();
    let (value, argmax) = oracle_mpe(&global_combine(&t1.factors(), DEFAULT_CAP).unwrap());
    assert!(approx_eq(out.value, value));
    assert_eq!(out.configurations, argmax);
    assert_eq!(out.configurations.len(), 2, "both tied z values retained");

    // 50 random trees, half with forced ties
    let mut r = rng(0xac6);
    for i in 0..50 {
        let style = if i % 2 == 0 {
            FactorStyle::Positive
        } else {
            FactorStyle::Tied
        };
        let tree = match i % 3 {
            0 => kit::random_chain_tree(&mut r, &universe(7), 4, style),
            1 => kit::random_star_tree(&mut r, &universe(7), 4, style),
            _ => kit::random_mv_tree(&mut r, 5, 4, style).1,
        };
        let out = mpe(&tree, &RunOptions::trusted()).unwrap();
        let (value, argmax) =
            oracle_mpe(&global_combine(&tree.factors(), DEFAULT_CAP).unwrap());
        assert!(approx_eq(out.value, value), "tree {i}: value mismatch");
        assert_eq!(out.configurations, argmax, "tree {i}: argmax mismatch");

        // positive scaling of a single factor
        let scale_id = tree.node_ids().nth(i % tree.len()).unwrap().clone();
        let rebuilt = MarkovTree::new(
            tree.node_ids().map(|id| {
                let node = tree.node(id).unwrap();
                let factor = if *id == scale_id {
                    ProbPotential::new(
                        node.frame.clone(),
                        node.factor.values().iter().map(|v| v * 3.0).collect(),
                    )
                    .unwrap()
                } else {
                    node.factor.clone()
                };
                (id.clone(), node.frame.clone(), factor)
            }),
            tree.edges(),
        )
        .unwrap();
        let scaled = mpe(&rebuilt, &RunOptions::trusted()).unwrap();
        assert_eq!(scaled.configurations, out.configurations, "tree {i}: scaling");
        assert!(approx_eq(scaled.value, 3.0 * out.value));
    }
    pass(6, "most probable configurations");
}

/// Criterion 7: the induced mass assignment commutes with combination
/// (Dempster's rule) on 100 random pairs; contradictory pairs raise the
/// contradiction error, and the CLI exits with code 2.
#[test]
fn criterion_7_pas_dempster_consistency() {
    let mut r = rng(0xac7);
    for i in 0..100 {
        let n = 3 + (i % 6);
        let u = universe(n);
        let f1 = kit::random_frame(&mut r, &u);
        let f2 = kit::random_frame(&mut r, &u);
        let h1 = kit::random_pas(&mut r, &f1, 4, i % 2 == 0);
        let h2 = kit::random_pas(&mut r, &f2, 4, i % 3 == 0);
        let direct = h1.combine(&h2);
        let masses = h1
            .bpa()
            .as_set_potential()
            .combine(h2.bpa().as_set_potential())
            .unwrap()
            .normalize();
        match (direct, masses) {
            (Ok(combined), Ok(expected)) => {
                assert_sp_eq(
                    combined.bpa().as_set_potential(),
                    expected.as_set_potential(),
                    "Dempster consistency",
                );
            }
            (Err(FcfError::Contradiction(_)), Err(FcfError::Contradiction(_))) => {}
            (a, b) => panic!(
                "combination routes disagreed on contradiction: {:?} vs {:?}",
                a.is_ok(),
                b.is_ok()
            ),
        }
    }

    // contradiction surfaces as exit code 2 through the CLI
    let out = Command::new(env!("CARGO_BIN_EXE_fcf"))
        .args([
            "--model",
            fixture("e1.json").to_str().unwrap(),
            "combine",
            "DET1",
            "DET2",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("contradict"));
    pass(7, "argumentation/Dempster consistency");
}

/// Criterion 8: byte-identical output for repeated runs of every fixture
/// query, and model round-trip equality.
#[test]
fn criterion_8_cli_determinism() {
    let queries: &[(&str, &str)] = &[
        ("t1.json", "marginal --tree T1 --node v1"),
        ("t1.json", "marginal --tree T1 --node v2 --arch ls"),
        ("t1.json", "marginal --tree T1 --node v2 --arch hugin --trace"),
        ("t1.json", "marginal --tree T1 --node v1 --oracle --normalize"),
        ("t1.json", "mpe --tree T1 --oracle"),
        ("t1.json", "mpe --tree T1 --one"),
        ("t1.json", "check-ci XY YZ --given Y"),
        ("t1.json", "verify-tree T1"),
        ("e1.json", "combine pA pB --normalize"),
        ("e1.json", "combine PAS1 PAS2"),
        ("e1.json", "transport m1 TOP"),
        ("e1.json", "normalize pA"),
        ("e1.json", "support PAS1 a1"),
        ("e1.json", "plausibility m1 a1"),
        ("e1.json", "conditional prod --target TOP --given A"),
        ("e1.json", "condition pTOP mB1"),
        ("e1.json", "equiv-report prod --t1 A --t2 B --given E"),
        ("e1.json", "mpe --tree TB"),
        ("e1.json", "verify-tree TS"),
        ("e1.json", "check-ci A B --given E"),
    ];
    let bin = env!("CARGO_BIN_EXE_fcf");
    for (file, q) in queries {
        let model_arg = fixture(file);
        let run = || {
            Command::new(bin)
                .arg("--model")
                .arg(&model_arg)
                .args(q.split_whitespace())
                .output()
                .expect("binary runs")
        };
        let first = run();
        assert!(
            first.status.success(),
            "query {q:?} on {file} failed: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        let second = run();
        assert_eq!(
            first.stdout, second.stdout,
            "query {q:?} on {file} was not byte-identical"
        );
    }

    // in-process queries are deterministic too
    for (file, q) in queries {
        let model = load_model(&fixture(file)).unwrap();
        let args: Vec<&str> = q.split_whitespace().collect();
        assert_eq!(
            run_query(&model, &args).unwrap(),
            run_query(&model, &args).unwrap()
        );
    }

    // model round-trips reparse to an equal model
    for file in ["e1.json", "t1.json"] {
        let model = load_model(&fixture(file)).unwrap();
        let text = serialize_model(&model);
        let again = parse_model(&text)
            .map_err(|e: CliError| panic!("round trip failed: {e}"))
            .unwrap();
        assert_eq!(model.raw, again.raw);
    }
    pass(8, "CLI determinism");
}
