//! Frames as partitions of a universe, together with the lattice and
//! transport operations of a family of compatible frames.
//!
//! A frame is a canonical partition: blocks are sorted internally and
//! ordered by their smallest atom, so frame equality is structural. The
//! order on frames is the refinement order: `coarse <= fine` when every
//! block of `fine` sits inside a block of `coarse`. Every pair of frames
//! over one universe has a join (blockwise intersection) and a meet
//! (connected components of block overlap), and an element of one frame is
//! compatible with an element of another exactly when their blocks
//! intersect.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{FcfError, Result};
use crate::universe::Universe;

/// A set of frame elements, kept sorted for deterministic iteration.
pub type ElemSet = BTreeSet<u32>;

/// A partition of a [`Universe`] into nonempty disjoint blocks.
///
/// Element `i` of the frame is block `i`; blocks are canonically ordered by
/// smallest contained atom. Cheap to clone.
#[derive(Clone)]
pub struct Frame {
    inner: Arc<Inner>,
}

struct Inner {
    universe: Universe,
    /// Canonical blocks: each sorted ascending, ordered by first atom.
    blocks: Vec<Vec<u32>>,
    /// Atom index -> index of the block containing it.
    atom_block: Vec<u32>,
}

impl Frame {
    /// Builds a frame from blocks of atom names, validating the partition
    /// conditions (nonempty, disjoint, covering).
    pub fn new<S: AsRef<str>>(universe: &Universe, blocks: &[Vec<S>]) -> Result<Frame> {
        let mut index_blocks = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut ids = Vec::with_capacity(block.len());
            for name in block {
                ids.push(universe.atom_index(name.as_ref())?);
            }
            index_blocks.push(ids);
        }
        Frame::from_blocks(universe, index_blocks)
    }

    /// Builds a frame from blocks of atom indices, validating the partition
    /// conditions.
    pub fn from_blocks(universe: &Universe, blocks: Vec<Vec<u32>>) -> Result<Frame> {
        let n = universe.len();
        let mut atom_block = vec![u32::MAX; n];
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(FcfError::EmptyBlock { index: bi });
            }
            for &a in block {
                if a as usize >= n {
                    return Err(FcfError::UnknownAtom(format!("#{a}")));
                }
                let prev = atom_block[a as usize];
                if prev != u32::MAX {
                    return Err(FcfError::OverlappingBlocks {
                        first: prev as usize,
                        second: bi,
                        atom: universe.atom(a).to_string(),
                    });
                }
                atom_block[a as usize] = bi as u32;
            }
        }
        if let Some(a) = atom_block.iter().position(|&b| b == u32::MAX) {
            return Err(FcfError::UncoveredAtom {
                atom: universe.atom(a as u32).to_string(),
            });
        }
        Ok(Frame::from_assignment_unchecked(universe, &atom_block))
    }

    /// Builds the canonical frame from a total atom -> block-label map.
    /// Labels are arbitrary; only the induced equivalence matters.
    pub fn from_assignment(universe: &Universe, assignment: &[u32]) -> Result<Frame> {
        if assignment.len() != universe.len() {
            return Err(FcfError::LengthMismatch {
                got: assignment.len(),
                want: universe.len(),
            });
        }
        Ok(Frame::from_assignment_unchecked(universe, assignment))
    }

    fn from_assignment_unchecked(universe: &Universe, assignment: &[u32]) -> Frame {
        // Relabel blocks by first appearance: atoms scanned in order, so
        // blocks come out sorted by smallest atom with atoms ascending.
        let mut relabel: HashMap<u32, u32> = HashMap::new();
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        let mut atom_block = vec![0u32; assignment.len()];
        for (a, &label) in assignment.iter().enumerate() {
            let bi = *relabel.entry(label).or_insert_with(|| {
                blocks.push(Vec::new());
                (blocks.len() - 1) as u32
            });
            blocks[bi as usize].push(a as u32);
            atom_block[a] = bi;
        }
        Frame {
            inner: Arc::new(Inner {
                universe: universe.clone(),
                blocks,
                atom_block,
            }),
        }
    }

    /// The absolutely coarsest frame `{U}` with a single element.
    pub fn bottom(universe: &Universe) -> Frame {
        Frame::from_assignment_unchecked(universe, &vec![0; universe.len()])
    }

    /// The partition into singletons, the finest frame over the universe.
    pub fn discrete(universe: &Universe) -> Frame {
        let assignment: Vec<u32> = (0..universe.len() as u32).collect();
        Frame::from_assignment_unchecked(universe, &assignment)
    }

    pub fn universe(&self) -> &Universe {
        &self.inner.universe
    }

    /// Number of frame elements.
    pub fn len(&self) -> usize {
        self.inner.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a partition of a nonempty universe has at least one block
    }

    /// The atoms of element `elem`, sorted ascending.
    pub fn block(&self, elem: u32) -> &[u32] {
        &self.inner.blocks[elem as usize]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[u32]> {
        self.inner.blocks.iter().map(Vec::as_slice)
    }

    /// The element whose block contains `atom`.
    pub fn element_of_atom(&self, atom: u32) -> u32 {
        self.inner.atom_block[atom as usize]
    }

    /// All element indices as a set.
    pub fn full_set(&self) -> ElemSet {
        (0..self.len() as u32).collect()
    }

    pub fn check_element(&self, elem: u32) -> Result<()> {
        if (elem as usize) < self.len() {
            Ok(())
        } else {
            Err(FcfError::ElementOutOfRange {
                index: elem as usize,
                len: self.len(),
            })
        }
    }

    pub fn check_subset(&self, s: &ElemSet) -> Result<()> {
        match s.iter().next_back() {
            Some(&max) => self.check_element(max),
            None => Ok(()),
        }
    }

    /// Renders an element as its atom set, e.g. `{1,2}`.
    pub fn element_label(&self, elem: u32) -> String {
        let names: Vec<&str> = self.block(elem).iter().map(|&a| self.universe().atom(a)).collect();
        format!("{{{}}}", names.join(","))
    }

    fn same_universe(&self, other: &Frame) -> Result<()> {
        if self.universe().same(other.universe()) {
            Ok(())
        } else {
            Err(FcfError::UniverseMismatch)
        }
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.universe == other.inner.universe
                && self.inner.blocks == other.inner.blocks)
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = (0..self.len() as u32).map(|e| self.element_label(e)).collect();
        write!(f, "{{{}}}", rendered.join(","))
    }
}

/// True when `coarse <= fine`: every block of `fine` is contained in a
/// block of `coarse`.
pub fn refines(coarse: &Frame, fine: &Frame) -> Result<bool> {
    coarse.same_universe(fine)?;
    for block in fine.blocks() {
        let target = coarse.element_of_atom(block[0]);
        if block[1..].iter().any(|&a| coarse.element_of_atom(a) != target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The refining map of `coarse <= fine`: element of `coarse` -> the fine
/// elements it splits into. The images partition the fine frame.
pub fn refining_map(coarse: &Frame, fine: &Frame) -> Result<Vec<ElemSet>> {
    if !refines(coarse, fine)? {
        return Err(FcfError::NotARefinement);
    }
    let mut map = vec![ElemSet::new(); coarse.len()];
    for elem in 0..fine.len() as u32 {
        let target = coarse.element_of_atom(fine.block(elem)[0]);
        map[target as usize].insert(elem);
    }
    Ok(map)
}

/// Saturation of a subset `s` of `fine` onto `coarse <= fine`: the coarse
/// elements whose refinement meets `s`.
pub fn saturation(fine: &Frame, s: &ElemSet, coarse: &Frame) -> Result<ElemSet> {
    if !refines(coarse, fine)? {
        return Err(FcfError::NotARefinement);
    }
    fine.check_subset(s)?;
    Ok(s.iter()
        .map(|&elem| coarse.element_of_atom(fine.block(elem)[0]))
        .collect())
}

/// Minimal common refinement: blocks are the nonempty intersections of one
/// block per input frame. Every join element decomposes uniquely into its
/// generators.
pub fn join(frames: &[Frame]) -> Result<Frame> {
    let first = frames
        .first()
        .ok_or_else(|| FcfError::Precondition("join needs at least one frame".into()))?;
    for f in &frames[1..] {
        first.same_universe(f)?;
    }
    if frames.len() == 1 {
        return Ok(first.clone());
    }
    let n = first.universe().len();
    // Group atoms by the tuple of containing blocks; first-appearance
    // relabeling yields the canonical order.
    let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut assignment = vec![0u32; n];
    let mut next = 0u32;
    for a in 0..n as u32 {
        let key: Vec<u32> = frames.iter().map(|f| f.element_of_atom(a)).collect();
        let label = *seen.entry(key).or_insert_with(|| {
            let l = next;
            next += 1;
            l
        });
        assignment[a as usize] = label;
    }
    Ok(Frame::from_assignment_unchecked(first.universe(), &assignment))
}

/// Binary join convenience.
pub fn join2(a: &Frame, b: &Frame) -> Result<Frame> {
    join(&[a.clone(), b.clone()])
}

/// Coarsest common coarsening: the finest partition both inputs refine,
/// computed as connected components of block overlap.
pub fn meet(a: &Frame, b: &Frame) -> Result<Frame> {
    a.same_universe(b)?;
    let n = a.universe().len();
    let mut dsu = Dsu::new(n);
    for frame in [a, b] {
        for block in frame.blocks() {
            for &atom in &block[1..] {
                dsu.union(block[0] as usize, atom as usize);
            }
        }
    }
    let assignment: Vec<u32> = (0..n).map(|i| dsu.find(i) as u32).collect();
    Ok(Frame::from_assignment_unchecked(a.universe(), &assignment))
}

/// True when the blocks of the two elements intersect, i.e. the elements
/// are jointly possible answers.
pub fn compatible(frame_a: &Frame, elem_a: u32, frame_b: &Frame, elem_b: u32) -> Result<bool> {
    frame_a.same_universe(frame_b)?;
    frame_a.check_element(elem_a)?;
    frame_b.check_element(elem_b)?;
    let (scan, scan_elem, other, other_elem) =
        if frame_a.block(elem_a).len() <= frame_b.block(elem_b).len() {
            (frame_a, elem_a, frame_b, elem_b)
        } else {
            (frame_b, elem_b, frame_a, elem_a)
        };
    Ok(scan
        .block(scan_elem)
        .iter()
        .any(|&atom| other.element_of_atom(atom) == other_elem))
}

/// Transport of a subset: all elements of `to` compatible with some element
/// of `s`. Coincides with saturation when `to <= from`.
pub fn transport_set(from: &Frame, s: &ElemSet, to: &Frame) -> Result<ElemSet> {
    from.same_universe(to)?;
    from.check_subset(s)?;
    let mut out = ElemSet::new();
    for &elem in s {
        for &atom in from.block(elem) {
            out.insert(to.element_of_atom(atom));
        }
    }
    Ok(out)
}

/// The compatible set `R` of a single element in another frame.
pub fn compatible_set(from: &Frame, elem: u32, to: &Frame) -> Result<ElemSet> {
    from.same_universe(to)?;
    from.check_element(elem)?;
    Ok(from
        .block(elem)
        .iter()
        .map(|&atom| to.element_of_atom(atom))
        .collect())
}

/// Conditional independence of `frames` given `given`: for every element
/// of `given`, the jointly compatible tuples factor into the product of the
/// per-frame compatible sets.
///
/// A tuple is jointly compatible with an element exactly when all blocks
/// share an atom, so both sides are counted in one scan over the atoms of
/// each conditioning block; cost is O(|universe| * n * log).
pub fn cond_independent(frames: &[Frame], given: &Frame) -> Result<bool> {
    if frames.is_empty() {
        return Err(FcfError::Precondition(
            "conditional independence needs at least one frame".into(),
        ));
    }
    for f in frames {
        f.same_universe(given)?;
    }
    for block in given.blocks() {
        let mut per_frame: Vec<ElemSet> = vec![ElemSet::new(); frames.len()];
        let mut joint: BTreeSet<Vec<u32>> = BTreeSet::new();
        for &atom in block {
            let tuple: Vec<u32> = frames.iter().map(|f| f.element_of_atom(atom)).collect();
            for (i, &e) in tuple.iter().enumerate() {
                per_frame[i].insert(e);
            }
            joint.insert(tuple);
        }
        let product: usize = per_frame.iter().map(ElemSet::len).product();
        if joint.len() != product {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the two frames are conditionally independent given their
/// meet; such pairs admit transport via projection to the meet followed by
/// vacuous extension.
pub fn is_commutative_pair(a: &Frame, b: &Frame) -> Result<bool> {
    let m = meet(a, b)?;
    cond_independent(&[a.clone(), b.clone()], &m)
}

/// A registry of named frames over one universe. Holds the bottom frame
/// under [`FrameRegistry::BOTTOM_ID`], memoizes joins, and optionally
/// auto-registers them.
pub struct FrameRegistry {
    universe: Universe,
    frames: BTreeMap<String, Frame>,
    auto_close: bool,
    join_memo: std::sync::Mutex<BTreeMap<(String, String), Frame>>,
}

impl FrameRegistry {
    pub const BOTTOM_ID: &'static str = "E";

    pub fn new(universe: Universe, auto_close: bool) -> FrameRegistry {
        let mut frames = BTreeMap::new();
        frames.insert(Self::BOTTOM_ID.to_string(), Frame::bottom(&universe));
        FrameRegistry {
            universe,
            frames,
            auto_close,
            join_memo: std::sync::Mutex::new(BTreeMap::new()),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn bottom(&self) -> &Frame {
        &self.frames[Self::BOTTOM_ID]
    }

    /// Registers a frame; re-registering an id is allowed only with an
    /// identical frame.
    pub fn register(&mut self, id: impl Into<String>, frame: Frame) -> Result<()> {
        if !frame.universe().same(&self.universe) {
            return Err(FcfError::UniverseMismatch);
        }
        let id = id.into();
        match self.frames.get(&id) {
            Some(existing) if *existing == frame => Ok(()),
            Some(_) => Err(FcfError::ConflictingFrameId(id)),
            None => {
                self.frames.insert(id, frame);
                Ok(())
            }
        }
    }

    pub fn get(&self, id: &str) -> Option<&Frame> {
        self.frames.get(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.frames.keys().map(String::as_str)
    }

    /// The join of two registered frames, memoized; with `auto_close` the
    /// result is also registered under `"<a>∨<b>"`.
    pub fn join_of(&mut self, a: &str, b: &str) -> Result<Frame> {
        let fa = self
            .frames
            .get(a)
            .ok_or_else(|| FcfError::UnknownFrameId(a.to_string()))?;
        let fb = self
            .frames
            .get(b)
            .ok_or_else(|| FcfError::UnknownFrameId(b.to_string()))?;
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        let joined = {
            let mut memo = self.join_memo.lock().expect("join memo poisoned");
            match memo.get(&key) {
                Some(f) => f.clone(),
                None => {
                    let f = join2(fa, fb)?;
                    memo.insert(key.clone(), f.clone());
                    f
                }
            }
        };
        if self.auto_close {
            self.register(format!("{}\u{2228}{}", key.0, key.1), joined.clone())?;
        }
        Ok(joined)
    }
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while cur != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb as u32;
        }
    }
}
