//! The max/product algebra on probability potentials and
//! most-probable-configuration search on Markov trees.
//!
//! Combination is the same as in the sum/product algebra; transport
//! maximizes over compatible elements instead of summing. The same
//! collect scheme therefore computes the maximum of a factor product by
//! local computation, and storing the per-edge argmax sets during collect
//! allows a backward pass to assemble the full set of maximizing
//! configurations, ties included.

use std::collections::{BTreeMap, BTreeSet};

use crate::approx::approx_eq;
use crate::error::{FcfError, Result};
use crate::frame::{ElemSet, Frame};
use crate::markov::{ensure_markov, schedule, MarkovTree, NodeId, RunOptions, TraceEntry};
use crate::probpot::ProbPotential;

/// Max-transport: the value at a target element is the maximum of `p` over
/// all compatible source elements. Every target element has a nonempty
/// compatible set, since blocks cover the universe.
pub fn max_transport(p: &ProbPotential, to: &Frame) -> Result<ProbPotential> {
    if !p.label().universe().same(to.universe()) {
        return Err(FcfError::UniverseMismatch);
    }
    let mut values = vec![f64::NEG_INFINITY; to.len()];
    for atom in 0..to.universe().len() as u32 {
        let target = to.element_of_atom(atom) as usize;
        let source = p.label().element_of_atom(atom);
        values[target] = values[target].max(p.value(source));
    }
    ProbPotential::new(to.clone(), values)
}

/// The solution of `p` relative to a target frame: per target element, the
/// set of compatible source elements attaining the maximum. Ties are all
/// retained.
#[derive(Clone, Debug)]
pub struct SolutionMap {
    source: Frame,
    target: Frame,
    sets: Vec<ElemSet>,
}

impl SolutionMap {
    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    /// Maximizers compatible with the given target element.
    pub fn set(&self, target_elem: u32) -> &ElemSet {
        &self.sets[target_elem as usize]
    }

    /// Union of the solution sets over a set of target elements.
    pub fn set_of(&self, target_elems: &ElemSet) -> ElemSet {
        target_elems
            .iter()
            .flat_map(|&e| self.sets[e as usize].iter().copied())
            .collect()
    }
}

/// Computes the solution map of `p` relative to `to`.
pub fn solution_sets(p: &ProbPotential, to: &Frame) -> Result<SolutionMap> {
    if !p.label().universe().same(to.universe()) {
        return Err(FcfError::UniverseMismatch);
    }
    // compatible pairs realized by atoms, grouped per target element
    let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    for atom in 0..to.universe().len() as u32 {
        pairs.insert((to.element_of_atom(atom), p.label().element_of_atom(atom)));
    }
    let mut best = vec![f64::NEG_INFINITY; to.len()];
    let mut sets = vec![ElemSet::new(); to.len()];
    for (target, source) in pairs {
        let v = p.value(source);
        let t = target as usize;
        if sets[t].is_empty() {
            best[t] = v;
            sets[t].insert(source);
        } else if approx_eq(v, best[t]) {
            sets[t].insert(source);
        } else if v > best[t] {
            best[t] = v;
            sets[t] = ElemSet::from([source]);
        }
    }
    Ok(SolutionMap {
        source: p.label().clone(),
        target: to.clone(),
        sets,
    })
}

/// The most probable configurations of a Markov-tree factor product.
#[derive(Clone, Debug)]
pub struct MpeOutcome {
    /// Maximum of the factor product over the join frame.
    pub value: f64,
    /// Join frame of all node labels.
    pub frame: Frame,
    /// Every element of the join frame attaining the maximum, ascending.
    pub configurations: ElemSet,
    /// Collect messages of the max/product pass, in schedule order.
    pub trace: Vec<TraceEntry>,
}

/// Runs max/product collect towards the root, then assembles the full
/// argmax set by walking the stored per-edge solution maps outward. Ties
/// are preserved end to end.
pub fn mpe(tree: &MarkovTree, opts: &RunOptions) -> Result<MpeOutcome> {
    ensure_markov(tree, opts)?;
    let sched = schedule(tree, opts.root.as_ref())?;
    let join_frame = tree.join_frame()?;

    // max-collect, storing the solution map per directed edge
    let mut stores: BTreeMap<NodeId, ProbPotential> = BTreeMap::new();
    let mut messages: BTreeMap<(NodeId, NodeId), ProbPotential> = BTreeMap::new();
    let mut solutions: BTreeMap<(NodeId, NodeId), SolutionMap> = BTreeMap::new();
    let mut trace = Vec::new();
    for v in &sched.collect_order {
        let mut store = tree.node(v).expect("scheduled node").factor.clone();
        for w in tree.neighbors_of(v) {
            if sched.parent.get(v) != Some(w) {
                store = store.combine(&messages[&(w.clone(), v.clone())])?;
            }
        }
        if let Some(p) = sched.parent.get(v) {
            let parent_frame = &tree.node(p).expect("parent").frame;
            let message = max_transport(&store, parent_frame)?;
            trace.push(TraceEntry {
                from: v.clone(),
                to: p.clone(),
                potential: message.clone(),
            });
            solutions.insert((v.clone(), p.clone()), solution_sets(&store, parent_frame)?);
            messages.insert((v.clone(), p.clone()), message);
        }
        stores.insert(v.clone(), store);
    }
    let root_store = &stores[&sched.root];
    let value = root_store
        .values()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);

    if value == 0.0 {
        // the product is identically zero, so every configuration attains
        // the maximum
        return Ok(MpeOutcome {
            value,
            configurations: join_frame.full_set(),
            frame: join_frame,
            trace,
        });
    }

    // root argmax set
    let root_choices: ElemSet = root_store
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| approx_eq(v, value))
        .map(|(e, _)| e as u32)
        .collect();

    // walk outward, splitting each partial configuration over the stored
    // solution sets; a partial keeps the chosen element per visited node
    // and the intersection of their blocks
    struct Partial {
        chosen: BTreeMap<NodeId, u32>,
        atoms: Vec<u32>,
    }
    let root_frame = &tree.node(&sched.root).expect("root").frame;
    let mut partials: Vec<Partial> = root_choices
        .iter()
        .map(|&e| Partial {
            chosen: BTreeMap::from([(sched.root.clone(), e)]),
            atoms: root_frame.block(e).to_vec(),
        })
        .collect();
    for v in &sched.distribute_order {
        let Some(parent) = sched.parent.get(v) else { continue };
        let sol = &solutions[&(v.clone(), parent.clone())];
        let v_frame = &tree.node(v).expect("node").frame;
        let mut next = Vec::with_capacity(partials.len());
        for partial in partials {
            let parent_elem = partial.chosen[parent];
            for &choice in sol.set(parent_elem) {
                let atoms = intersect_sorted(&partial.atoms, v_frame.block(choice));
                debug_assert!(!atoms.is_empty(), "assembled blocks must intersect");
                let mut chosen = partial.chosen.clone();
                chosen.insert(v.clone(), choice);
                next.push(Partial { chosen, atoms });
            }
        }
        partials = next;
    }
    let configurations: ElemSet = partials
        .iter()
        .map(|p| join_frame.element_of_atom(p.atoms[0]))
        .collect();
    Ok(MpeOutcome {
        value,
        frame: join_frame,
        configurations,
        trace,
    })
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
