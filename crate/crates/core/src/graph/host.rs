use super::LabeledGraph;
use crate::error::{Error, Result};

/// Dense adjacency matrix for host graphs of any size (evaluation targets,
/// Paley graphs). Unlike [`LabeledGraph`] there is no size cap and no
/// canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HostGraph {
    n: usize,
    adj: Vec<bool>,
}

impl HostGraph {
    pub fn empty(n: usize) -> Self {
        HostGraph { n, adj: vec![false; n * n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidGraph(format!("bad edge ({u}, {v}) for {n} vertices")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if u != v {
            self.adj[u * self.n + v] = present;
            self.adj[v * self.n + u] = present;
        }
    }

    /// Vertex-disjoint union.
    pub fn disjoint_union(&self, other: &HostGraph) -> HostGraph {
        let mut g = HostGraph::empty(self.n + other.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if self.has_edge(u, v) {
                    g.set_edge(u, v, true);
                }
            }
        }
        for u in 0..other.n {
            for v in 0..other.n {
                if other.has_edge(u, v) {
                    g.set_edge(self.n + u, self.n + v, true);
                }
            }
        }
        g
    }

    /// Subgraph induced on `vertices`, as an unlabeled small graph.
    pub fn induced(&self, vertices: &[usize]) -> Result<LabeledGraph> {
        let mut g = LabeledGraph::empty(vertices.len(), 0)?;
        for a in 0..vertices.len() {
            for b in a + 1..vertices.len() {
                if self.has_edge(vertices[a], vertices[b]) {
                    g = g.with_edge(a, b, true);
                }
            }
        }
        Ok(g)
    }

    /// Quadratic-residue (Paley) graph on `Z_q` for a prime `q ≡ 1 (mod 4)`:
    /// `x ~ y` iff `x - y` is a nonzero square.
    pub fn paley(q: usize) -> Result<Self> {
        let is_prime = q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0);
        if !is_prime || q % 4 != 1 {
            return Err(Error::InvalidGraph(format!("Paley graph needs a prime q ≡ 1 mod 4, got {q}")));
        }
        let mut square = vec![false; q];
        for x in 1..q {
            square[x * x % q] = true;
        }
        let mut g = HostGraph::empty(q);
        for u in 0..q {
            for v in u + 1..q {
                if square[(v - u) % q] {
                    g.set_edge(u, v, true);
                }
            }
        }
        Ok(g)
    }
}

impl From<&LabeledGraph> for HostGraph {
    fn from(g: &LabeledGraph) -> Self {
        let mut h = HostGraph::empty(g.n());
        for (u, v) in g.edges() {
            h.set_edge(u, v, true);
        }
        h
    }
}
