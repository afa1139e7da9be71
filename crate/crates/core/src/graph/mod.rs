//! Small graphs and partially labeled graphs, canonical forms, and
//! exhaustive enumeration of isomorphism classes.
//!
//! A [`LabeledGraph`] on `n <= 8` vertices stores its upper-triangle
//! adjacency in one `u32`. Labeled vertices occupy positions `0..k` (labels
//! `1..=k`), unlabeled vertices follow. The adjacency sequence is read in
//! row-major pair order `(0,1), (0,2), .., (0,n-1), (1,2), ..`, with the first
//! pair stored in the most significant used bit, so integer order on the
//! bits equals lexicographic order on the sequence.

mod host;
mod notation;

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

pub use host::HostGraph;
pub use notation::{format_graph, parse_graph};

use crate::error::{Error, Result};

/// Largest vertex count a [`LabeledGraph`] may have.
pub const MAX_VERTICES: usize = 8;
/// Largest vertex count accepted by the enumeration routines.
pub const MAX_ENUMERATION: usize = 7;

/// A finite simple graph whose first `k` vertices carry labels `1..=k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    n: u8,
    k: u8,
    bits: u32,
}

/// An unlabeled graph (`k = 0`).
pub type Graph = LabeledGraph;
/// A fully labeled graph (`k = n`).
pub type TypeSigma = LabeledGraph;

/// Bijection on `0..n`; `image[i]` is the new position of vertex `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n as u8).collect() }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::InvalidGraph(format!("{image:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { image: image.into_iter().map(|i| i as u8).collect() })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    /// `self` after `other`: `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { image: other.image.iter().map(|&i| self.image[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation { image: inv }
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.image.iter().map(|&i| i as usize)
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `MASKS[n][u][v]`: the bit holding pair `{u, v}` in an `n`-vertex graph.
fn masks() -> &'static [[[u32; MAX_VERTICES]; MAX_VERTICES]; MAX_VERTICES + 1] {
    static MASKS: OnceLock<[[[u32; MAX_VERTICES]; MAX_VERTICES]; MAX_VERTICES + 1]> = OnceLock::new();
    MASKS.get_or_init(|| {
        let mut t = [[[0u32; MAX_VERTICES]; MAX_VERTICES]; MAX_VERTICES + 1];
        for (n, table) in t.iter_mut().enumerate() {
            let total = pair_count(n);
            let mut pos = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let bit = 1u32 << (total - 1 - pos);
                    table[i][j] = bit;
                    table[j][i] = bit;
                    pos += 1;
                }
            }
        }
        t
    })
}

#[inline]
fn mask(n: usize, u: usize, v: usize) -> u32 {
    masks()[n][u][v]
}

impl LabeledGraph {
    /// Edgeless graph on `n` vertices with `k` labels.
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { n, limit: MAX_VERTICES });
        }
        if k > n {
            return Err(Error::InvalidGraph(format!("{k} labels on {n} vertices")));
        }
        Ok(LabeledGraph { n: n as u8, k: k as u8, bits: 0 })
    }

    /// Builds a graph from 0-based edge endpoints. Loops and repeated edges
    /// are rejected.
    pub fn from_edges(n: usize, k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n, k)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            g.bits |= mask(n, u, v);
        }
        Ok(g)
    }

    pub(crate) fn from_raw(n: usize, k: usize, bits: u32) -> Self {
        debug_assert!(n <= MAX_VERTICES && k <= n);
        LabeledGraph { n: n as u8, k: k as u8, bits }
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, 0, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, 0, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Self::from_edges(n, 0, &edges)
    }

    /// Triangle with a pendant edge.
    pub fn paw() -> Self {
        Self::from_edges(4, 0, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap()
    }

    /// `K_{1,1,2}`: `K_4` minus one edge.
    pub fn k112() -> Self {
        Self::from_edges(4, 0, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    /// Star `K_{1,3}`.
    pub fn claw() -> Self {
        Self::from_edges(4, 0, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    /// Raw adjacency bits (see module docs for the layout).
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_type(&self) -> bool {
        self.k == self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.bits & mask(self.n(), u, v) != 0
    }

    pub fn with_edge(mut self, u: usize, v: usize, present: bool) -> Self {
        let m = mask(self.n(), u, v);
        if present {
            self.bits |= m;
        } else {
            self.bits &= !m;
        }
        self
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| self.has_edge(i, j))
    }

    /// All pairs `u < v` that are not edges.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !self.has_edge(i, j))
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n()).filter(|&u| self.has_edge(u, v)).count()
    }

    /// Same adjacency with a different label count.
    pub fn with_labels(self, k: usize) -> Result<Self> {
        if k > self.n() {
            return Err(Error::InvalidGraph(format!("{k} labels on {} vertices", self.n)));
        }
        Ok(LabeledGraph { k: k as u8, ..self })
    }

    /// Drops every label.
    pub fn unlabeled(self) -> Self {
        LabeledGraph { k: 0, ..self }
    }

    /// The fully labeled graph induced on the labeled vertices.
    pub fn labeled_part(&self) -> TypeSigma {
        self.induced(&(0..self.k()).collect::<Vec<_>>(), self.k())
    }

    /// Subgraph induced on `vertices` (in the given order) with `k` labels.
    pub fn induced(&self, vertices: &[usize], k: usize) -> Self {
        let m = vertices.len();
        let mut bits = 0;
        for a in 0..m {
            for b in a + 1..m {
                if self.has_edge(vertices[a], vertices[b]) {
                    bits |= mask(m, a, b);
                }
            }
        }
        LabeledGraph::from_raw(m, k, bits)
    }

    /// Appends one unlabeled vertex adjacent to the vertices in `neighbours`
    /// (bit `i` set means adjacent to vertex `i`).
    pub fn extended(&self, neighbours: u32) -> Result<Self> {
        let n = self.n();
        if n + 1 > MAX_VERTICES {
            return Err(Error::TooLarge { n: n + 1, limit: MAX_VERTICES });
        }
        let mut g = LabeledGraph::from_raw(n + 1, self.k(), 0);
        for (u, v) in self.edges() {
            g.bits |= mask(n + 1, u, v);
        }
        for u in 0..n {
            if neighbours >> u & 1 == 1 {
                g.bits |= mask(n + 1, u, n);
            }
        }
        Ok(g)
    }

    pub fn complement(&self) -> Self {
        let full = if pair_count(self.n()) == 0 { 0 } else { u32::MAX >> (32 - pair_count(self.n())) };
        LabeledGraph { bits: !self.bits & full, ..*self }
    }

    /// Relabels vertex `i` as `perm(i)`. Label counts are kept; callers that
    /// need label preservation must pass permutations fixing `0..k`.
    pub fn permuted(&self, perm: &Permutation) -> Self {
        assert_eq!(perm.len(), self.n(), "permutation size mismatch");
        let n = self.n();
        let mut bits = 0;
        for (u, v) in self.edges() {
            bits |= mask(n, perm.apply(u), perm.apply(v));
        }
        LabeledGraph { bits, ..*self }
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_graph(self))
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph({})", format_graph(self))
    }
}

/// All permutations of `0..m` (lexicographic order).
fn permutations(m: usize) -> &'static [[u8; MAX_VERTICES]] {
    static TABLES: OnceLock<Vec<Vec<[u8; MAX_VERTICES]>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        (0..=MAX_VERTICES)
            .map(|m| {
                let mut out = Vec::new();
                let mut cur: Vec<u8> = (0..m as u8).collect();
                loop {
                    let mut row = [0u8; MAX_VERTICES];
                    row[..m].copy_from_slice(&cur);
                    out.push(row);
                    // next lexicographic permutation
                    let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
                    let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
                    cur.swap(i - 1, j);
                    cur[i..].reverse();
                }
                out
            })
            .collect()
    });
    &tables[m]
}

/// Bits of `g` after sending unlabeled vertex `k + i` to `k + perm[i]`.
#[inline]
fn permuted_bits(n: usize, k: usize, edges: &[(u8, u8)], perm: &[u8; MAX_VERTICES]) -> u32 {
    let table = &masks()[n];
    let img = |v: u8| if (v as usize) < k { v as usize } else { k + perm[v as usize - k] as usize };
    edges.iter().fold(0, |acc, &(u, v)| acc | table[img(u)][img(v)])
}

type CanonEntry = (u32, [u8; MAX_VERTICES]);

thread_local! {
    static CANON_CACHE: RefCell<HashMap<(u8, u8, u32), CanonEntry>> = RefCell::new(HashMap::new());
}

fn canonical_uncached(g: &LabeledGraph) -> CanonEntry {
    let (n, k) = (g.n(), g.k());
    let edges: Vec<(u8, u8)> = g.edges().map(|(u, v)| (u as u8, v as u8)).collect();
    let mut best = (u32::MAX, [0u8; MAX_VERTICES]);
    for perm in permutations(n - k) {
        let bits = permuted_bits(n, k, &edges, perm);
        if bits < best.0 {
            best = (bits, *perm);
        }
    }
    best
}

/// Label-preserving canonical form: the lexicographically smallest adjacency
/// sequence over all permutations fixing `0..k` pointwise, plus a permutation
/// `p` with `g.permuted(&p) == canonical`.
pub fn canonical_form(g: &LabeledGraph) -> (LabeledGraph, Permutation) {
    let key = (g.n, g.k, g.bits);
    let (bits, perm) = CANON_CACHE.with(|c| {
        if let Some(hit) = c.borrow().get(&key) {
            return *hit;
        }
        let entry = canonical_uncached(g);
        c.borrow_mut().insert(key, entry);
        entry
    });
    let (n, k) = (g.n(), g.k());
    let image = (0..n).map(|v| if v < k { v as u8 } else { (k + perm[v - k] as usize) as u8 }).collect();
    (LabeledGraph { bits, ..*g }, Permutation { image })
}

/// Shorthand for the canonical graph alone.
pub fn canonical(g: &LabeledGraph) -> LabeledGraph {
    canonical_form(g).0
}

/// Equal size, equal label count, and equal (label-preserving) canonical forms.
pub fn is_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    g.n == h.n && g.k == h.k && g.edge_count() == h.edge_count() && canonical(g) == canonical(h)
}

/// Number of label-preserving automorphisms (all automorphisms when `k = 0`).
pub fn automorphism_count(g: &LabeledGraph) -> u64 {
    automorphisms(g).len() as u64
}

/// The label-preserving automorphisms of `g`.
pub fn automorphisms(g: &LabeledGraph) -> Vec<Permutation> {
    let (n, k) = (g.n(), g.k());
    let edges: Vec<(u8, u8)> = g.edges().map(|(u, v)| (u as u8, v as u8)).collect();
    permutations(n - k)
        .iter()
        .filter(|perm| permuted_bits(n, k, &edges, perm) == g.bits)
        .map(|perm| Permutation {
            image: (0..n).map(|v| if v < k { v as u8 } else { (k + perm[v - k] as usize) as u8 }).collect(),
        })
        .collect()
}

/// Canonical classes reached by adding one unlabeled vertex to each graph in
/// `layer` in every possible way.
fn augment(layer: &[LabeledGraph]) -> Result<Vec<LabeledGraph>> {
    let mut next = BTreeSet::new();
    for g in layer {
        for pattern in 0..(1u32 << g.n()) {
            next.insert(canonical(&g.extended(pattern)?));
        }
    }
    Ok(next.into_iter().collect())
}

/// All isomorphism classes of graphs on `n` vertices, canonical and in
/// ascending key order.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge { n, limit: MAX_ENUMERATION });
    }
    let mut layer = vec![LabeledGraph::from_raw(0, 0, 0)];
    for _ in 0..n {
        layer = augment(&layer)?;
    }
    Ok(layer)
}

/// All label-preserving classes of `m`-vertex graphs whose labeled part is
/// exactly `sigma`.
pub fn enumerate_flags(sigma: &TypeSigma, m: usize) -> Result<Vec<LabeledGraph>> {
    if !sigma.is_type() {
        return Err(Error::InvalidGraph(format!("{sigma} is not a type")));
    }
    if m < sigma.n() {
        return Err(Error::InvalidGraph(format!("flag size {m} below type size {}", sigma.n())));
    }
    if m > MAX_ENUMERATION {
        return Err(Error::TooLarge { n: m, limit: MAX_ENUMERATION });
    }
    let mut layer = vec![*sigma];
    for _ in sigma.n()..m {
        layer = augment(&layer)?;
    }
    Ok(layer)
}

/// Types on `k` vertices. Without deduplication every labeled graph on `k`
/// vertices is returned; with it, the first (by key) representative of each
/// unlabeled isomorphism class.
pub fn enumerate_types(k: usize, dedup: bool) -> Result<Vec<TypeSigma>> {
    if k > MAX_VERTICES {
        return Err(Error::TooLarge { n: k, limit: MAX_VERTICES });
    }
    let all = (0..(1u64 << pair_count(k))).map(|bits| LabeledGraph::from_raw(k, k, bits as u32));
    if !dedup {
        return Ok(all.collect());
    }
    let mut seen = BTreeSet::new();
    Ok(all.filter(|t| seen.insert(canonical(&t.unlabeled()))).collect())
}
