//! Shared fixtures and seeded random instance generators for the fcf
//! test suites. Everything is deterministic given the caller's seed.

pub use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use fcf_core::frame::{cond_independent, ElemSet};
use fcf_core::markov::{build_join_tree_multivariate, MarkovTree};
use fcf_core::pas::{Assumption, Pas};
use fcf_core::{Frame, MultivariateModel, ProbPotential, SetPotential, Universe};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// The four-atom fixture universe with its standard frames.
pub struct E1 {
    pub universe: Universe,
    pub a: Frame,
    pub b: Frame,
    pub c: Frame,
    pub top: Frame,
    pub bottom: Frame,
}

pub fn e1() -> E1 {
    let universe = Universe::new(["1", "2", "3", "4"]).unwrap();
    E1 {
        a: Frame::new(&universe, &[vec!["1", "2"], vec!["3", "4"]]).unwrap(),
        b: Frame::new(&universe, &[vec!["1", "3"], vec!["2", "4"]]).unwrap(),
        c: Frame::new(&universe, &[vec!["1"], vec!["2"], vec!["3", "4"]]).unwrap(),
        top: Frame::discrete(&universe),
        bottom: Frame::bottom(&universe),
        universe,
    }
}

/// The two-node chain over three binary variables with factors
/// (1,2,3,4) on {x,y} and (1,1,2,2) on {y,z}.
pub fn t1() -> (MultivariateModel, MarkovTree) {
    let model = MultivariateModel::new(vec![
        ("x", vec!["0", "1"]),
        ("y", vec!["0", "1"]),
        ("z", vec!["0", "1"]),
    ])
    .unwrap();
    let fxy = model.frame(&["x", "y"]).unwrap();
    let fyz = model.frame(&["y", "z"]).unwrap();
    let q1 = ProbPotential::new(fxy.clone(), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let q2 = ProbPotential::new(fyz.clone(), vec![1.0, 1.0, 2.0, 2.0]).unwrap();
    let tree = MarkovTree::new(
        [("v1".to_string(), fxy, q1), ("v2".to_string(), fyz, q2)],
        [("v1".to_string(), "v2".to_string())],
    )
    .unwrap();
    (model, tree)
}

/// A universe of `n` atoms named "1".."n".
pub fn universe(n: usize) -> Universe {
    Universe::new((1..=n).map(|i| i.to_string())).unwrap()
}

/// All partitions of `n` atoms as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn go(current: &mut Vec<u32>, i: usize, max_used: u32, out: &mut Vec<Vec<u32>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for label in 0..=max_used + 1 {
            current[i] = label;
            go(current, i + 1, max_used.max(label), out);
        }
    }
    if n > 0 {
        go(&mut current, 1, 0, &mut out);
    } else {
        out.push(current);
    }
    out
}

/// All frames over a universe, via [`all_partitions`].
pub fn all_frames(u: &Universe) -> Vec<Frame> {
    all_partitions(u.len())
        .into_iter()
        .map(|rgs| Frame::from_assignment(u, &rgs).unwrap())
        .collect()
}

/// A uniformly-ish random frame: atoms assigned to one of `k` labels with
/// `k` itself random.
pub fn random_frame(rng: &mut StdRng, u: &Universe) -> Frame {
    let k = rng.gen_range(1..=u.len() as u32);
    let assignment: Vec<u32> = (0..u.len()).map(|_| rng.gen_range(0..k)).collect();
    Frame::from_assignment(u, &assignment).unwrap()
}

/// A random coarsening of `frame`: blocks merged under a random relabeling.
pub fn random_coarsening(rng: &mut StdRng, frame: &Frame) -> Frame {
    let k = rng.gen_range(1..=frame.len() as u32);
    let merge: Vec<u32> = (0..frame.len()).map(|_| rng.gen_range(0..k)).collect();
    let assignment: Vec<u32> = (0..frame.universe().len() as u32)
        .map(|atom| merge[frame.element_of_atom(atom) as usize])
        .collect();
    Frame::from_assignment(frame.universe(), &assignment).unwrap()
}

/// A random chain `frames[0] >= frames[1] >= ...` headed by a random frame
/// (so later entries are coarsenings of earlier ones), length `len`.
pub fn random_coarsening_chain(rng: &mut StdRng, u: &Universe, len: usize) -> Vec<Frame> {
    let mut chain = Vec::with_capacity(len);
    let mut current = random_frame(rng, u);
    for _ in 0..len {
        chain.push(current.clone());
        current = random_coarsening(rng, &current);
    }
    chain
}

/// Random values in [0.1, 2.0], strictly positive.
pub fn random_positive_potential(rng: &mut StdRng, frame: &Frame) -> ProbPotential {
    let values = (0..frame.len()).map(|_| rng.gen_range(0.1..2.0)).collect();
    ProbPotential::new(frame.clone(), values).unwrap()
}

/// Random values in [0, 2) with roughly one zero in four.
pub fn random_potential(rng: &mut StdRng, frame: &Frame) -> ProbPotential {
    let values = (0..frame.len())
        .map(|_| {
            if rng.gen_bool(0.25) {
                0.0
            } else {
                rng.gen_range(0.1..2.0)
            }
        })
        .collect();
    ProbPotential::new(frame.clone(), values).unwrap()
}

/// Random small integer values in {1, 2, 3}, guaranteed to produce ties.
pub fn random_tied_potential(rng: &mut StdRng, frame: &Frame) -> ProbPotential {
    let values = (0..frame.len())
        .map(|_| rng.gen_range(1..=3) as f64)
        .collect();
    ProbPotential::new(frame.clone(), values).unwrap()
}

/// A uniformly random element of the frame.
pub fn random_element(rng: &mut StdRng, frame: &Frame) -> u32 {
    rng.gen_range(0..frame.len() as u32)
}

/// A random nonempty subset of the frame's elements.
pub fn random_subset(rng: &mut StdRng, frame: &Frame) -> ElemSet {
    loop {
        let s: ElemSet = (0..frame.len() as u32)
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// A random set potential with up to `max_focal` focal sets (possibly
/// including the empty set) and masses in (0, 1].
pub fn random_set_potential(rng: &mut StdRng, frame: &Frame, max_focal: usize) -> SetPotential {
    let count = rng.gen_range(1..=max_focal);
    let mut masses: Vec<(ElemSet, f64)> = Vec::with_capacity(count);
    for _ in 0..count {
        let set = if rng.gen_bool(0.1) {
            ElemSet::new()
        } else {
            random_subset(rng, frame)
        };
        masses.push((set, rng.gen_range(0.05..1.0)));
    }
    SetPotential::new(frame.clone(), masses).unwrap()
}

/// A random argumentation structure with up to `max_assumptions`
/// assumptions; precise when `precise` is set.
pub fn random_pas(rng: &mut StdRng, frame: &Frame, max_assumptions: usize, precise: bool) -> Pas {
    let count = rng.gen_range(1..=max_assumptions);
    let mut weights: Vec<f64> = (0..count).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let assumptions = weights
        .into_iter()
        .enumerate()
        .map(|(i, weight)| {
            let image = if precise {
                ElemSet::from([rng.gen_range(0..frame.len() as u32)])
            } else {
                random_subset(rng, frame)
            };
            Assumption {
                name: format!("w{i}"),
                weight,
                image,
            }
        })
        .collect();
    Pas::new(frame.clone(), assumptions).unwrap()
}

/// A random conditionally independent frame triple `(t1, t2, given)` over
/// `u`: a mix of rejection-sampled general triples and constructions that
/// hold by closure (both frames coarsenings of the conditioner, or the
/// conditioner equal to one side).
pub fn random_ci_triple(rng: &mut StdRng, u: &Universe) -> (Frame, Frame, Frame) {
    for _ in 0..50 {
        let t1 = random_frame(rng, u);
        let t2 = random_frame(rng, u);
        let given = random_frame(rng, u);
        if cond_independent(&[t1.clone(), t2.clone()], &given).unwrap() {
            return (t1, t2, given);
        }
    }
    // fall back to a construction that always satisfies independence
    let given = random_frame(rng, u);
    if rng.gen_bool(0.5) {
        let t1 = random_coarsening(rng, &given);
        let t2 = random_coarsening(rng, &given);
        (t1, t2, given)
    } else {
        let t1 = random_frame(rng, u);
        (t1, given.clone(), given)
    }
}

/// A random binary multivariate model with `nvars` variables named
/// v0, v1, ...
pub fn random_binary_model(nvars: usize) -> MultivariateModel {
    MultivariateModel::new(
        (0..nvars)
            .map(|i| (format!("v{i}"), vec!["0".to_string(), "1".to_string()]))
            .collect(),
    )
    .unwrap()
}

/// Variable names of the model in declaration order.
pub fn model_vars(model: &MultivariateModel) -> Vec<String> {
    model.variables().iter().map(|v| v.name.clone()).collect()
}

/// A random nonempty variable subset of the model.
pub fn random_var_subset(rng: &mut StdRng, model: &MultivariateModel) -> Vec<String> {
    let vars = model_vars(model);
    loop {
        let s: Vec<String> = vars.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// How factor values are drawn for random trees.
#[derive(Clone, Copy, Debug)]
pub enum FactorStyle {
    Positive,
    Tied,
}

fn draw_factor(rng: &mut StdRng, frame: &Frame, style: FactorStyle) -> ProbPotential {
    match style {
        FactorStyle::Positive => random_positive_potential(rng, frame),
        FactorStyle::Tied => random_tied_potential(rng, frame),
    }
}

/// A random join tree over a random binary model: random factors on
/// random variable subsets, assembled by bucket elimination with a random
/// order. Markov by construction.
pub fn random_mv_tree(
    rng: &mut StdRng,
    nvars: usize,
    nfactors: usize,
    style: FactorStyle,
) -> (MultivariateModel, MarkovTree) {
    let model = random_binary_model(nvars);
    let factors: Vec<ProbPotential> = (0..nfactors)
        .map(|_| {
            let subset = random_var_subset(rng, &model);
            let refs: Vec<&str> = subset.iter().map(String::as_str).collect();
            let frame = model.frame(&refs).unwrap();
            draw_factor(rng, &frame, style)
        })
        .collect();
    let mut order = model_vars(&model);
    // Fisher-Yates with the seeded rng
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let tree = build_join_tree_multivariate(&model, &factors, &refs).unwrap();
    (model, tree)
}

/// A random chain tree whose labels coarsen monotonically from head to
/// tail; such chains always satisfy the Markov property.
pub fn random_chain_tree(
    rng: &mut StdRng,
    u: &Universe,
    len: usize,
    style: FactorStyle,
) -> MarkovTree {
    let frames = random_coarsening_chain(rng, u, len);
    let nodes: Vec<(String, Frame, ProbPotential)> = frames
        .iter()
        .enumerate()
        .map(|(i, f)| (format!("c{i}"), f.clone(), draw_factor(rng, f, style)))
        .collect();
    let edges: Vec<(String, String)> = (1..len)
        .map(|i| (format!("c{}", i - 1), format!("c{i}")))
        .collect();
    MarkovTree::new(nodes, edges).unwrap()
}

/// A random star tree: a random center frame with leaves that coarsen it;
/// always Markov.
pub fn random_star_tree(
    rng: &mut StdRng,
    u: &Universe,
    leaves: usize,
    style: FactorStyle,
) -> MarkovTree {
    let center = random_frame(rng, u);
    let mut nodes = vec![(
        "hub".to_string(),
        center.clone(),
        draw_factor(rng, &center, style),
    )];
    let mut edges = Vec::new();
    for i in 0..leaves {
        let leaf = random_coarsening(rng, &center);
        nodes.push((format!("leaf{i}"), leaf.clone(), draw_factor(rng, &leaf, style)));
        edges.push(("hub".to_string(), format!("leaf{i}")));
    }
    MarkovTree::new(nodes, edges).unwrap()
}
