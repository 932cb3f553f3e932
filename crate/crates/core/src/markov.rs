//! Markov trees over frames and the three local-computation
//! architectures for sum/product potentials.
//!
//! A Markov tree is a frame-labeled tree in which, at every node, the
//! joins of the subtree labels hanging off it are jointly conditionally
//! independent given the node's frame. Under that condition, inward
//! (collect) and outward (distribute) message passing computes every node
//! marginal of the factor product without ever leaving the node frames.
//!
//! Three architectures share one collect phase:
//!
//! - Shenoy-Shafer: messages live on the receiving node's frame, marginals
//!   recombine the node factor with all incoming messages;
//! - Lauritzen-Spiegelhalter: messages live on the meet of the adjacent
//!   frames and the sender divides each collect message out of its store;
//! - HUGIN: collect-message inverses are stored on the edges; after
//!   distribute, the edges hold the separator marginals.
//!
//! The division architectures require every adjacent label pair to be a
//! commutative pair (conditionally independent given its meet); they fail
//! with a structured error otherwise.
//!
//! Scheduling is deterministic: children are visited in ascending node-id
//! order, collect runs leaf-inward (post-order), distribute root-outward
//! (pre-order). Message computation for disjoint subtrees is independent
//! and could run concurrently; the sequential schedule used here fixes the
//! summation order, so results are reproducible bit for bit.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{FcfError, Result};
use crate::frame::{cond_independent, is_commutative_pair, join, meet, Frame};
use crate::multivariate::MultivariateModel;
use crate::probpot::ProbPotential;

pub type NodeId = String;

/// A labeled tree node: a frame and a factor living on exactly that frame.
#[derive(Clone, Debug)]
pub struct Node {
    pub frame: Frame,
    pub factor: ProbPotential,
}

/// A frame-labeled tree with one factor per node.
#[derive(Clone, Debug)]
pub struct MarkovTree {
    nodes: BTreeMap<NodeId, Node>,
    neighbors: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl MarkovTree {
    /// Validates node uniqueness, factor labels and tree shape
    /// (connected, acyclic).
    pub fn new(
        nodes: impl IntoIterator<Item = (NodeId, Frame, ProbPotential)>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<MarkovTree> {
        let mut node_map: BTreeMap<NodeId, Node> = BTreeMap::new();
        for (id, frame, factor) in nodes {
            if factor.label() != &frame {
                return Err(FcfError::FactorLabelMismatch(id));
            }
            if node_map
                .insert(id.clone(), Node { frame, factor })
                .is_some()
            {
                return Err(FcfError::DuplicateNode(id));
            }
        }
        if node_map.is_empty() {
            return Err(FcfError::EmptyTree);
        }
        let mut neighbors: BTreeMap<NodeId, BTreeSet<NodeId>> =
            node_map.keys().map(|id| (id.clone(), BTreeSet::new())).collect();
        let mut edge_count = 0usize;
        for (a, b) in edges {
            for id in [&a, &b] {
                if !node_map.contains_key(id) {
                    return Err(FcfError::UnknownNode(id.clone()));
                }
            }
            if a == b {
                return Err(FcfError::NotATree);
            }
            let inserted = neighbors.get_mut(&a).unwrap().insert(b.clone())
                && neighbors.get_mut(&b).unwrap().insert(a.clone());
            if !inserted {
                return Err(FcfError::NotATree); // duplicate edge
            }
            edge_count += 1;
        }
        if edge_count + 1 != node_map.len() {
            return Err(FcfError::NotATree);
        }
        let tree = MarkovTree {
            nodes: node_map,
            neighbors,
        };
        // edge count is right, so connectivity implies acyclicity
        let reachable = tree.subtree_nodes(tree.lowest_id(), None);
        if reachable.len() != tree.nodes.len() {
            return Err(FcfError::NotATree);
        }
        Ok(tree)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty trees
    }

    pub fn neighbors_of(&self, id: &str) -> impl Iterator<Item = &NodeId> {
        self.neighbors[id].iter()
    }

    /// Undirected edges with normalized (min, max) endpoints.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (a, ns) in &self.neighbors {
            for b in ns {
                if a < b {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// All factors in node order.
    pub fn factors(&self) -> Vec<ProbPotential> {
        self.nodes.values().map(|n| n.factor.clone()).collect()
    }

    /// The join of all node frames.
    pub fn join_frame(&self) -> Result<Frame> {
        let frames: Vec<Frame> = self.nodes.values().map(|n| n.frame.clone()).collect();
        join(&frames)
    }

    fn lowest_id(&self) -> &NodeId {
        self.nodes.keys().next().expect("tree is nonempty")
    }

    /// Nodes of the subtree containing `start` when `cut` is removed.
    fn subtree_nodes(&self, start: &NodeId, cut: Option<&NodeId>) -> Vec<NodeId> {
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if Some(v) == cut || !seen.insert(v) {
                continue;
            }
            stack.extend(self.neighbors[v].iter().filter(|w| Some(*w) != cut));
        }
        seen.into_iter().cloned().collect()
    }

    /// Join of the frames of the subtree containing `start`, cut at `cut`.
    fn subtree_label(&self, start: &NodeId, cut: Option<&NodeId>) -> Result<Frame> {
        let frames: Vec<Frame> = self
            .subtree_nodes(start, cut)
            .iter()
            .map(|id| self.nodes[id].frame.clone())
            .collect();
        join(&frames)
    }

    /// The subtree hanging off `v` towards `w`, as its own tree.
    pub fn subtree(&self, v: &NodeId, w: &NodeId) -> Result<MarkovTree> {
        let keep: BTreeSet<NodeId> = self.subtree_nodes(w, Some(v)).into_iter().collect();
        let nodes = keep
            .iter()
            .map(|id| {
                let n = &self.nodes[id];
                (id.clone(), n.frame.clone(), n.factor.clone())
            })
            .collect::<Vec<_>>();
        let edges = self
            .edges()
            .into_iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .collect::<Vec<_>>();
        MarkovTree::new(nodes, edges)
    }
}

/// First node violating the Markov property, if any.
pub fn find_markov_violation(tree: &MarkovTree) -> Result<Option<NodeId>> {
    for (v, node) in &tree.nodes {
        let branch_labels: Vec<Frame> = tree.neighbors[v]
            .iter()
            .map(|w| tree.subtree_label(w, Some(v)))
            .collect::<Result<_>>()?;
        if branch_labels.is_empty() {
            continue; // single node, vacuously Markov
        }
        if !cond_independent(&branch_labels, &node.frame)? {
            return Ok(Some(v.clone()));
        }
    }
    Ok(None)
}

/// True when every node's subtree labels are jointly conditionally
/// independent given the node's frame.
pub fn verify_markov(tree: &MarkovTree) -> Result<bool> {
    Ok(find_markov_violation(tree)?.is_none())
}

/// Options shared by the architectures: a caller-chosen root (default:
/// lowest node id) and an escape hatch skipping the Markov verification.
/// Skipping it on a non-Markov tree silently produces unsound marginals.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub root: Option<NodeId>,
    pub trust_tree: bool,
}

impl RunOptions {
    pub fn trusted() -> RunOptions {
        RunOptions {
            root: None,
            trust_tree: true,
        }
    }
}

/// One sent message, in schedule order.
#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub from: NodeId,
    pub to: NodeId,
    pub potential: ProbPotential,
}

/// Messages keyed by directed edge, each written exactly once.
#[derive(Clone, Debug, Default)]
pub struct MessageStore {
    messages: BTreeMap<(NodeId, NodeId), ProbPotential>,
}

impl MessageStore {
    pub fn get(&self, from: &str, to: &str) -> Option<&ProbPotential> {
        self.messages.get(&(from.to_string(), to.to_string()))
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    fn insert(&mut self, from: &NodeId, to: &NodeId, potential: ProbPotential) {
        let previous = self.messages.insert((from.clone(), to.clone()), potential);
        debug_assert!(previous.is_none(), "message {from}->{to} written twice");
    }
}

/// The rooted schedule: parents, post-order collect and pre-order
/// distribute sequences, children always in ascending id order.
pub(crate) struct Schedule {
    pub root: NodeId,
    pub parent: BTreeMap<NodeId, NodeId>,
    pub collect_order: Vec<NodeId>,
    pub distribute_order: Vec<NodeId>,
}

pub(crate) fn schedule(tree: &MarkovTree, root: Option<&NodeId>) -> Result<Schedule> {
    let root = match root {
        Some(r) => {
            if !tree.nodes.contains_key(r) {
                return Err(FcfError::UnknownNode(r.clone()));
            }
            r.clone()
        }
        None => tree.lowest_id().clone(),
    };
    let mut parent = BTreeMap::new();
    let mut pre = Vec::with_capacity(tree.len());
    let mut post = Vec::with_capacity(tree.len());
    // iterative DFS with explicit exit events for the post-order
    enum Ev<'a> {
        Enter(&'a NodeId, Option<&'a NodeId>),
        Exit(&'a NodeId),
    }
    let mut stack = vec![Ev::Enter(&root, None)];
    while let Some(ev) = stack.pop() {
        match ev {
            Ev::Enter(v, p) => {
                if let Some(p) = p {
                    parent.insert(v.clone(), p.clone());
                }
                pre.push(v.clone());
                stack.push(Ev::Exit(v));
                // push descending so ascending ids are entered first
                for w in tree.neighbors[v].iter().rev() {
                    if Some(w) != p {
                        stack.push(Ev::Enter(w, Some(v)));
                    }
                }
            }
            Ev::Exit(v) => post.push(v.clone()),
        }
    }
    Ok(Schedule {
        root,
        parent,
        collect_order: post,
        distribute_order: pre,
    })
}

pub(crate) fn ensure_markov(tree: &MarkovTree, opts: &RunOptions) -> Result<()> {
    if opts.trust_tree {
        return Ok(());
    }
    match find_markov_violation(tree)? {
        Some(node) => Err(FcfError::MarkovViolation(node)),
        None => Ok(()),
    }
}

fn ensure_commutative_edges(tree: &MarkovTree) -> Result<()> {
    for (a, b) in tree.edges() {
        if !is_commutative_pair(&tree.nodes[&a].frame, &tree.nodes[&b].frame)? {
            return Err(FcfError::NonCommutativeEdge(a, b));
        }
    }
    Ok(())
}

/// Result of the collect phase: the root marginal plus the inward
/// messages, reusable by a following distribute phase.
#[derive(Clone, Debug)]
pub struct CollectOutcome {
    pub root: NodeId,
    pub marginal: ProbPotential,
    pub messages: MessageStore,
    pub trace: Vec<TraceEntry>,
}

/// Inward pass of the Shenoy-Shafer architecture: every node sends the
/// transport of its combined store to its parent's frame; the root ends up
/// with the marginal of the full factor product on its own frame.
pub fn collect(tree: &MarkovTree, opts: &RunOptions) -> Result<CollectOutcome> {
    ensure_markov(tree, opts)?;
    let sched = schedule(tree, opts.root.as_ref())?;
    let mut messages = MessageStore::default();
    let mut trace = Vec::new();
    let marginal = run_collect(tree, &sched, &mut messages, &mut trace)?;
    Ok(CollectOutcome {
        root: sched.root,
        marginal,
        messages,
        trace,
    })
}

/// Collect phase shared by the sum/product architectures; messages are
/// transported to the receiver's frame. Returns the root store.
fn run_collect(
    tree: &MarkovTree,
    sched: &Schedule,
    messages: &mut MessageStore,
    trace: &mut Vec<TraceEntry>,
) -> Result<ProbPotential> {
    let mut stores: BTreeMap<&NodeId, ProbPotential> = BTreeMap::new();
    for v in &sched.collect_order {
        let mut store = tree.nodes[v].factor.clone();
        for w in &tree.neighbors[v] {
            if sched.parent.get(v) != Some(w) {
                store = store.combine(messages.get(w, v).expect("child message present"))?;
            }
        }
        if let Some(p) = sched.parent.get(v) {
            let message = store.transport(&tree.nodes[p].frame)?;
            trace.push(TraceEntry {
                from: v.clone(),
                to: p.clone(),
                potential: message.clone(),
            });
            messages.insert(v, p, message);
        }
        stores.insert(v, store);
    }
    Ok(stores.remove(&sched.root).expect("root processed last"))
}

/// All node marginals with message statistics.
#[derive(Clone, Debug)]
pub struct Marginals {
    pub root: NodeId,
    pub by_node: BTreeMap<NodeId, ProbPotential>,
    pub messages_sent: usize,
    pub trace: Vec<TraceEntry>,
}

/// The full Shenoy-Shafer architecture: collect towards the root, then
/// distribute outward; every node marginal is its factor combined with all
/// incoming messages. Sends exactly `2(|V|-1)` messages.
pub fn shenoy_shafer(tree: &MarkovTree, opts: &RunOptions) -> Result<Marginals> {
    ensure_markov(tree, opts)?;
    let sched = schedule(tree, opts.root.as_ref())?;
    let mut messages = MessageStore::default();
    let mut trace = Vec::new();
    run_collect(tree, &sched, &mut messages, &mut trace)?;
    // distribute: the outward message excludes what came in over the edge
    for v in &sched.distribute_order {
        for w in &tree.neighbors[v] {
            if sched.parent.get(v) == Some(w) {
                continue;
            }
            let mut store = tree.nodes[v].factor.clone();
            for u in &tree.neighbors[v] {
                if u != w {
                    store = store.combine(messages.get(u, v).expect("message present"))?;
                }
            }
            let message = store.transport(&tree.nodes[w].frame)?;
            trace.push(TraceEntry {
                from: v.clone(),
                to: w.clone(),
                potential: message.clone(),
            });
            messages.insert(v, w, message);
        }
    }
    let mut by_node = BTreeMap::new();
    for (v, node) in &tree.nodes {
        let mut marginal = node.factor.clone();
        for w in &tree.neighbors[v] {
            marginal = marginal.combine(messages.get(w, v).expect("message present"))?;
        }
        by_node.insert(v.clone(), marginal);
    }
    Ok(Marginals {
        root: sched.root,
        messages_sent: messages.len(),
        by_node,
        trace,
    })
}

/// Collect phase of the division architectures: messages live on the meet
/// of the adjacent frames. Returns per-node stores and per-edge inverse
/// collect messages (consumed differently by LS and HUGIN).
#[allow(clippy::type_complexity)]
fn run_collect_meet(
    tree: &MarkovTree,
    sched: &Schedule,
    trace: &mut Vec<TraceEntry>,
) -> Result<(
    BTreeMap<NodeId, ProbPotential>,
    BTreeMap<(NodeId, NodeId), ProbPotential>,
)> {
    let mut stores: BTreeMap<NodeId, ProbPotential> = BTreeMap::new();
    let mut messages: BTreeMap<(NodeId, NodeId), ProbPotential> = BTreeMap::new();
    let mut inverses: BTreeMap<(NodeId, NodeId), ProbPotential> = BTreeMap::new();
    for v in &sched.collect_order {
        let mut store = tree.nodes[v].factor.clone();
        for w in &tree.neighbors[v] {
            if sched.parent.get(v) != Some(w) {
                store = store.combine(&messages[&(w.clone(), v.clone())])?;
            }
        }
        if let Some(p) = sched.parent.get(v) {
            let separator = meet(&tree.nodes[v].frame, &tree.nodes[p].frame)?;
            let message = store.transport(&separator)?;
            trace.push(TraceEntry {
                from: v.clone(),
                to: p.clone(),
                potential: message.clone(),
            });
            inverses.insert(
                (v.clone(), p.clone()),
                crate::conditioning::inverse(&message),
            );
            messages.insert((v.clone(), p.clone()), message);
        }
        stores.insert(v.clone(), store);
    }
    Ok((stores, inverses))
}

/// Lauritzen-Spiegelhalter: after each collect message is sent it is
/// divided out of the sender's store; distribute messages are separator
/// projections of the finished marginals, combined straight into the
/// receivers. Node stores end up holding the marginals.
pub fn lauritzen_spiegelhalter(tree: &MarkovTree, opts: &RunOptions) -> Result<Marginals> {
    ensure_markov(tree, opts)?;
    ensure_commutative_edges(tree)?;
    let sched = schedule(tree, opts.root.as_ref())?;
    let mut trace = Vec::new();
    let (mut stores, inverses) = run_collect_meet(tree, &sched, &mut trace)?;
    let mut sent = tree.len() - 1;
    for ((v, _), inv) in &inverses {
        let divided = stores[v].combine(inv)?;
        stores.insert(v.clone(), divided);
    }
    for v in &sched.distribute_order {
        for w in &tree.neighbors[v] {
            if sched.parent.get(v) == Some(w) {
                continue;
            }
            let separator = meet(&tree.nodes[v].frame, &tree.nodes[w].frame)?;
            let message = stores[v].transport(&separator)?;
            trace.push(TraceEntry {
                from: v.clone(),
                to: w.clone(),
                potential: message.clone(),
            });
            sent += 1;
            let updated = stores[w].combine(&message)?;
            stores.insert(w.clone(), updated);
        }
    }
    Ok(Marginals {
        root: sched.root,
        by_node: stores,
        messages_sent: sent,
        trace,
    })
}

/// HUGIN results: node marginals plus the separator marginal stored on
/// each (normalized, undirected) edge.
#[derive(Clone, Debug)]
pub struct HuginOutcome {
    pub marginals: Marginals,
    pub separators: BTreeMap<(NodeId, NodeId), ProbPotential>,
}

/// HUGIN: collect-message inverses are stored on the edges instead of
/// divided out at the senders; each distribute message passes through its
/// edge (where the stored inverse cancels the collect contribution) and
/// replaces the edge store with the separator marginal.
pub fn hugin(tree: &MarkovTree, opts: &RunOptions) -> Result<HuginOutcome> {
    ensure_markov(tree, opts)?;
    ensure_commutative_edges(tree)?;
    let sched = schedule(tree, opts.root.as_ref())?;
    let mut trace = Vec::new();
    let (mut stores, inverses) = run_collect_meet(tree, &sched, &mut trace)?;
    let mut sent = tree.len() - 1;
    let mut separators: BTreeMap<(NodeId, NodeId), ProbPotential> = BTreeMap::new();
    for v in &sched.distribute_order {
        for w in &tree.neighbors[v] {
            if sched.parent.get(v) == Some(w) {
                continue;
            }
            let separator = meet(&tree.nodes[v].frame, &tree.nodes[w].frame)?;
            let message = stores[v].transport(&separator)?;
            trace.push(TraceEntry {
                from: v.clone(),
                to: w.clone(),
                potential: message.clone(),
            });
            sent += 1;
            let through_edge = message.combine(&inverses[&(w.clone(), v.clone())])?;
            let updated = stores[w].combine(&through_edge)?;
            stores.insert(w.clone(), updated);
            let edge = if v < w {
                (v.clone(), w.clone())
            } else {
                (w.clone(), v.clone())
            };
            separators.insert(edge, message);
        }
    }
    Ok(HuginOutcome {
        marginals: Marginals {
            root: sched.root,
            by_node: stores,
            messages_sent: sent,
            trace,
        },
        separators,
    })
}

/// Builds a join tree for multivariate factors by bucket elimination.
///
/// Every factor label must be the frame of some variable subset of the
/// model; the elimination order must list every model variable exactly
/// once. Cliques created during elimination become nodes (factors
/// vacuously extended onto them), residuals connect each clique to the
/// step absorbing it, non-maximal cliques are contracted into neighbors,
/// and disconnected components are joined through a bottom-frame node with
/// a unit factor.
pub fn build_join_tree_multivariate(
    model: &MultivariateModel,
    factors: &[ProbPotential],
    elimination: &[&str],
) -> Result<MarkovTree> {
    let var_count = model.variables().len();
    let mut order = Vec::with_capacity(elimination.len());
    for name in elimination {
        order.push(model.variable_index(name)?);
    }
    {
        let distinct: BTreeSet<usize> = order.iter().copied().collect();
        if distinct.len() != order.len() || distinct.len() != var_count {
            return Err(FcfError::Precondition(
                "elimination order must list every model variable exactly once".into(),
            ));
        }
    }
    // recover each factor's variable subset from its label
    let mut factor_vars: Vec<BTreeSet<usize>> = Vec::with_capacity(factors.len());
    for f in factors {
        factor_vars.push(variable_set_of(model, f.label())?);
    }

    struct Item {
        vars: BTreeSet<usize>,
        /// `Ok`: index of an original factor; `Err`: source node id of a
        /// residual.
        source: std::result::Result<usize, NodeId>,
    }
    let mut pool: Vec<Item> = factor_vars
        .iter()
        .enumerate()
        .filter(|(_, vars)| !vars.is_empty())
        .map(|(i, vars)| Item {
            vars: vars.clone(),
            source: Ok(i),
        })
        .collect();
    let bottom_factor_ids: Vec<usize> = factor_vars
        .iter()
        .enumerate()
        .filter(|(_, vars)| vars.is_empty())
        .map(|(i, _)| i)
        .collect();

    let mut nodes: BTreeMap<NodeId, (BTreeSet<usize>, ProbPotential)> = BTreeMap::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut next_node = 0usize;
    for &var in &order {
        let (gathered, rest): (Vec<Item>, Vec<Item>) =
            pool.into_iter().partition(|item| item.vars.contains(&var));
        pool = rest;
        if gathered.is_empty() {
            continue;
        }
        let clique: BTreeSet<usize> = gathered
            .iter()
            .flat_map(|item| item.vars.iter().copied())
            .collect();
        let clique_names: Vec<&str> = clique
            .iter()
            .map(|&vi| model.variables()[vi].name.as_str())
            .collect();
        let clique_frame = model.frame(&clique_names)?;
        let id = format!("n{next_node:03}");
        next_node += 1;
        let mut factor = ProbPotential::unit(clique_frame);
        for item in &gathered {
            match &item.source {
                Ok(fi) => factor = factor.combine(&factors[*fi])?,
                Err(from) => edges.push((from.clone(), id.clone())),
            }
        }
        let residual: BTreeSet<usize> = clique.iter().copied().filter(|&v| v != var).collect();
        if !residual.is_empty() {
            pool.push(Item {
                vars: residual,
                source: Err(id.clone()),
            });
        }
        nodes.insert(id, (clique, factor));
    }
    debug_assert!(pool.is_empty(), "all residuals absorbed by a full order");

    if nodes.is_empty() {
        // no factor mentions any variable: a single bottom node carries
        // whatever bottom-frame factors exist
        let bottom = Frame::bottom(model.universe());
        let mut factor = ProbPotential::unit(bottom.clone());
        for &fi in &bottom_factor_ids {
            factor = factor.combine(&factors[fi])?;
        }
        return MarkovTree::new([("n000".to_string(), bottom, factor)], []);
    }

    // contract non-maximal cliques into adjacent supersets
    let mut adjacency: BTreeMap<NodeId, BTreeSet<NodeId>> =
        nodes.keys().map(|id| (id.clone(), BTreeSet::new())).collect();
    for (a, b) in &edges {
        adjacency.get_mut(a).unwrap().insert(b.clone());
        adjacency.get_mut(b).unwrap().insert(a.clone());
    }
    loop {
        let mut contraction: Option<(NodeId, NodeId)> = None;
        'outer: for (id, (vars, _)) in &nodes {
            for other in &adjacency[id] {
                if vars.is_subset(&nodes[other].0) {
                    contraction = Some((id.clone(), other.clone()));
                    break 'outer;
                }
            }
        }
        let Some((small, host)) = contraction else { break };
        let (_, small_factor) = nodes.remove(&small).unwrap();
        let host_entry = nodes.get_mut(&host).unwrap();
        host_entry.1 = host_entry.1.combine(&small_factor)?;
        let small_neighbors = adjacency.remove(&small).unwrap();
        for n in &small_neighbors {
            let set = adjacency.get_mut(n).unwrap();
            set.remove(&small);
            if *n != host {
                set.insert(host.clone());
                adjacency.get_mut(&host).unwrap().insert(n.clone());
            }
        }
        adjacency.get_mut(&host).unwrap().remove(&small);
    }

    // connect remaining components (plus any bottom-frame factors) through
    // a bottom node
    let component_roots = components(&adjacency);
    let mut final_nodes: Vec<(NodeId, Frame, ProbPotential)> = Vec::new();
    for (id, (clique, factor)) in &nodes {
        let names: Vec<&str> = clique
            .iter()
            .map(|&vi| model.variables()[vi].name.as_str())
            .collect();
        final_nodes.push((id.clone(), model.frame(&names)?, factor.clone()));
    }
    let mut final_edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (id, ns) in &adjacency {
        for n in ns {
            if id < n {
                final_edges.push((id.clone(), n.clone()));
            }
        }
    }
    if component_roots.len() > 1 || !bottom_factor_ids.is_empty() {
        let bottom = Frame::bottom(model.universe());
        let mut factor = ProbPotential::unit(bottom.clone());
        for &fi in &bottom_factor_ids {
            factor = factor.combine(&factors[fi])?;
        }
        let glue = "n_glue".to_string();
        for root in &component_roots {
            final_edges.push((root.clone(), glue.clone()));
        }
        final_nodes.push((glue, bottom, factor));
    }
    MarkovTree::new(final_nodes, final_edges)
}

/// The variable subset whose frame equals `frame`, or an error when the
/// frame is not a frame of the model.
fn variable_set_of(model: &MultivariateModel, frame: &Frame) -> Result<BTreeSet<usize>> {
    if !frame.universe().same(model.universe()) {
        return Err(FcfError::UniverseMismatch);
    }
    let mut vars = BTreeSet::new();
    for vi in 0..model.variables().len() {
        let constant_per_block = frame.blocks().all(|block| {
            let d = model.digit(block[0], vi);
            block[1..].iter().all(|&a| model.digit(a, vi) == d)
        });
        if constant_per_block {
            vars.insert(vi);
        }
    }
    let names: Vec<&str> = vars
        .iter()
        .map(|&vi| model.variables()[vi].name.as_str())
        .collect();
    if &model.frame(&names)? != frame {
        return Err(FcfError::Precondition(
            "factor label is not a variable-subset frame of the model".into(),
        ));
    }
    Ok(vars)
}

fn components(adjacency: &BTreeMap<NodeId, BTreeSet<NodeId>>) -> Vec<NodeId> {
    let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
    let mut roots = Vec::new();
    for start in adjacency.keys() {
        if seen.contains(start) {
            continue;
        }
        roots.push(start.clone());
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(adjacency[v].iter());
            }
        }
    }
    roots
}
