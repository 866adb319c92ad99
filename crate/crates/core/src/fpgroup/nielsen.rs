//! Nielsen-reduced generating sets of finitely generated subgroups of free
//! groups, computed from the folded subgroup graph.
//!
//! The words are glued into a rose at a base vertex and folded until the
//! graph is deterministic. A breadth-first spanning tree is geodesic, so the
//! Schreier generators read off the edges outside the tree form a
//! Nielsen-reduced free basis of the subgroup.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::presentation::GroupMorphism;
use super::word::{GroupWord, Syllable};
use crate::error::{Error, Result};

/// Edge label: generator index and direction.
type Label = (usize, i8);

#[derive(Default)]
struct Folder {
    parent: Vec<usize>,
    edges: Vec<BTreeMap<Label, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.edges.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn insert(&mut self, u: usize, label: Label, v: usize) {
        match self.edges[u].get(&label) {
            Some(&w) if w != v => self.pending.push((v, w)),
            Some(_) => {}
            None => {
                self.edges[u].insert(label, v);
            }
        }
    }

    fn add_edge(&mut self, u: usize, gen: usize, v: usize) {
        let (u, v) = (self.find(u), self.find(v));
        self.insert(u, (gen, 1), v);
        self.insert(v, (gen, -1), u);
        self.settle();
    }

    fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.edges[gone]);
            for (label, t) in moved {
                let t = self.find(t);
                match self.edges[keep].get(&label).copied() {
                    Some(w) => {
                        if self.find(w) != t {
                            self.pending.push((w, t));
                        }
                    }
                    None => {
                        self.edges[keep].insert(label, t);
                    }
                }
            }
        }
    }

    fn add_loop(&mut self, base: usize, word: &GroupWord) {
        let syl = word.syllables();
        if syl.is_empty() {
            return;
        }
        let mut cur = base;
        for (k, s) in syl.iter().enumerate() {
            let next = if k + 1 == syl.len() { base } else { self.add_vertex() };
            if s.exp > 0 {
                self.add_edge(cur, s.gen, next);
            } else {
                self.add_edge(next, s.gen, cur);
            }
            cur = next;
        }
    }
}

/// Folded graph of a subgroup with a geodesic spanning tree.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    rank: usize,
    /// `edges[v][(g, ±1)] = w`, on compact vertex ids; vertex 0 is the base.
    edges: Vec<BTreeMap<Label, usize>>,
    /// Basis index for each positively oriented edge outside the tree.
    basis_edge: BTreeMap<(usize, usize), usize>,
    basis: Vec<GroupWord>,
}

impl SubgroupGraph {
    pub fn new(words: &[GroupWord], rank: usize) -> Result<Self> {
        if let Some(g) = words.iter().filter_map(GroupWord::max_generator).find(|&g| g >= rank) {
            return Err(Error::invalid(format!("generator {g} outside the free group of rank {rank}")));
        }
        let mut f = Folder::default();
        let base = f.add_vertex();
        for w in words {
            f.add_loop(base, w);
        }
        // compact ids in BFS order from the base
        let root = f.find(base);
        let mut id = BTreeMap::new();
        let mut order = vec![root];
        id.insert(root, 0usize);
        let mut tree_path = vec![GroupWord::identity()];
        let mut tree_edges = std::collections::HashSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let out: Vec<(Label, usize)> = f.edges[u].iter().map(|(&l, &t)| (l, t)).collect();
            for (label, t) in out {
                let t = f.find(t);
                if let std::collections::btree_map::Entry::Vacant(slot) = id.entry(t) {
                    slot.insert(order.len());
                    order.push(t);
                    let step = GroupWord::new([Syllable { gen: label.0, exp: label.1 }]);
                    tree_path.push(tree_path[id[&u]].mul(&step));
                    tree_edges.insert((id[&u], label, id[&t]));
                    queue.push_back(t);
                }
            }
        }
        let mut edges = vec![BTreeMap::new(); order.len()];
        for (i, &v) in order.iter().enumerate() {
            let out: Vec<(Label, usize)> = f.edges[v].iter().map(|(&l, &t)| (l, t)).collect();
            for (label, t) in out {
                let t = f.find(t);
                edges[i].insert(label, id[&t]);
            }
        }
        let mut basis = Vec::new();
        let mut basis_edge = BTreeMap::new();
        for (u, out) in edges.iter().enumerate() {
            for (&(gen, exp), &v) in out {
                if exp < 0 {
                    continue;
                }
                let in_tree = tree_edges.contains(&(u, (gen, 1), v)) || tree_edges.contains(&(v, (gen, -1), u));
                if !in_tree {
                    basis_edge.insert((u, gen), basis.len());
                    basis.push(tree_path[u].mul(&GroupWord::generator(gen)).mul(&tree_path[v].inverse()));
                }
            }
        }
        Ok(SubgroupGraph { rank, edges, basis_edge, basis })
    }

    pub fn basis(&self) -> &[GroupWord] {
        &self.basis
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    /// Whether the subgroup is the whole free group: a single vertex carrying
    /// a loop for every generator.
    pub fn is_whole_group(&self) -> bool {
        self.edges.len() == 1 && (0..self.rank).all(|g| self.edges[0].contains_key(&(g, 1)))
    }

    /// Writes `word` in the basis (as a word over basis indices), or `None`
    /// when the word is not in the subgroup.
    pub fn express(&self, word: &GroupWord) -> Option<GroupWord> {
        let mut cur = 0usize;
        let mut out = Vec::new();
        for s in word.syllables() {
            let next = *self.edges[cur].get(&(s.gen, s.exp))?;
            let (u, v) = if s.exp > 0 { (cur, next) } else { (next, cur) };
            debug_assert_eq!(self.edges[u].get(&(s.gen, 1)), Some(&v));
            if let Some(&b) = self.basis_edge.get(&(u, s.gen)) {
                out.push(Syllable { gen: b, exp: s.exp });
            }
            cur = next;
        }
        (cur == 0).then(|| GroupWord::new(out))
    }

    pub fn contains(&self, word: &GroupWord) -> bool {
        self.express(word).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NielsenResult {
    pub reduced: Vec<GroupWord>,
    pub is_basis: bool,
}

/// Nielsen-reduced generating tuple of the subgroup generated by `tuple`, in
/// shortlex order with each word normalised so its inverse is not smaller.
pub fn nielsen_reduce(tuple: &[GroupWord], rank: usize) -> Result<NielsenResult> {
    let graph = SubgroupGraph::new(tuple, rank)?;
    let mut reduced: Vec<GroupWord> = graph
        .basis()
        .iter()
        .map(|w| {
            let inv = w.inverse();
            if shortlex_key(&inv) < shortlex_key(w) {
                inv
            } else {
                w.clone()
            }
        })
        .collect();
    reduced.sort_by_key(shortlex_key);
    let mut letters: Vec<usize> = reduced.iter().filter(|w| w.len() == 1).map(|w| w.syllables()[0].gen).collect();
    letters.sort_unstable();
    letters.dedup();
    let is_basis = reduced.len() == rank && letters.len() == rank;
    Ok(NielsenResult { reduced, is_basis })
}

fn shortlex_key(w: &GroupWord) -> (usize, Vec<usize>) {
    (w.len(), w.syllables().iter().map(|s| s.key()).collect())
}

/// Whether a morphism between free groups of equal rank is an automorphism.
pub fn is_free_automorphism(m: &GroupMorphism) -> Result<bool> {
    if !m.source().is_free() || !m.target().is_free() {
        return Err(Error::invalid("automorphism check needs free source and target"));
    }
    if m.source().rank() != m.target().rank() {
        return Err(Error::RankMismatch(format!(
            "source rank {} differs from target rank {}",
            m.source().rank(),
            m.target().rank()
        )));
    }
    Ok(nielsen_reduce(m.images(), m.target().rank())?.is_basis)
}
