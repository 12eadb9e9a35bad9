//! Simple undirected graphs, Cayley graphs over `PGL₂(q)`, complements and
//! perturbation by perfect matchings.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::projgroup::{self, ConnectionSet, GroupError, ProjMat, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge {{{0}, {1}}}")]
    ParallelEdge(usize, usize),
    #[error("bipartition does not cover every vertex")]
    BipartitionSize,
    #[error("edge {{{0}, {1}}} does not cross the bipartition")]
    EdgeWithinSide(usize, usize),
    #[error("connection set is not closed under inversion")]
    AsymmetricConnectionSet,
    #[error("connection set contains the identity")]
    IdentityInConnectionSet,
    #[error("product {0} is not an element of the vertex group")]
    NotInGroup(ProjMat),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is flagged bipartite; use the bipartite complement")]
    FlaggedBipartite,
    #[error("graph has no recorded bipartition")]
    NotBipartite,
    #[error("bipartition sides have sizes {0} and {1}")]
    UnequalSides(usize, usize),
    #[error("matching is not perfect: {edges} edges on {n} vertices")]
    NotPerfect { edges: usize, n: usize },
    #[error("matching covers vertex {0} twice")]
    OverlappingMatching(usize),
    #[error("matching edge {{{0}, {1}}} is not an edge of the graph")]
    EdgeMissing(usize, usize),
    #[error("matching edge {{{0}, {1}}} is already an edge of the graph")]
    EdgePresent(usize, usize),
    #[error("matching is on {matching} vertices but the graph has {graph}")]
    SizeMismatch { matching: usize, graph: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Side of a vertex in a two-coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    bipartition: Option<Vec<Side>>,
    labels: Option<Vec<ProjMat>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops and parallel edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::ParallelEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self {
            adjacency,
            bipartition: None,
            labels: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            bipartition: None,
            labels: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|u| (0..n).filter(|&v| v != u).collect())
            .collect();
        Self {
            adjacency,
            bipartition: None,
            labels: None,
        }
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle on n >= 3 vertices is simple")
    }

    /// Attaches a two-coloring, checking that every edge crosses it.
    pub fn with_bipartition(mut self, sides: Vec<Side>) -> Result<Self, GraphError> {
        if sides.len() != self.n() {
            return Err(GraphError::BipartitionSize);
        }
        for (u, v) in self.edges() {
            if sides[u] == sides[v] {
                return Err(GraphError::EdgeWithinSide(u, v));
            }
        }
        self.bipartition = Some(sides);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency
            .iter()
            .all(|nbrs| nbrs.len() == first)
            .then_some(first)
    }

    pub fn bipartition(&self) -> Option<&[Side]> {
        self.bipartition.as_deref()
    }

    pub fn is_bipartite_flagged(&self) -> bool {
        self.bipartition.is_some()
    }

    pub fn labels(&self) -> Option<&[ProjMat]> {
        self.labels.as_deref()
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.bfs_order(0).len() == self.n()
    }

    fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
        }
        order
    }

    fn from_adjacency_unchecked(adjacency: Vec<Vec<usize>>, bipartition: Option<Vec<Side>>) -> Self {
        Self {
            adjacency,
            bipartition,
            labels: None,
        }
    }

    fn side_sizes(&self) -> Option<(usize, usize)> {
        let sides = self.bipartition.as_ref()?;
        let left = sides.iter().filter(|&&s| s == Side::Left).count();
        Some((left, sides.len() - left))
    }
}

/// A set of pairwise vertex-disjoint edges on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Matching {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Matching {
    /// Normalizes each edge to `(min, max)` and sorts; rejects shared vertices.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut covered = vec![false; n];
        let mut out = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if std::mem::replace(&mut covered[w], true) {
                    return Err(GraphError::OverlappingMatching(w));
                }
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        Ok(Self { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_perfect(&self) -> bool {
        2 * self.edges.len() == self.n
    }

    /// The graph `(V, F)`.
    pub fn as_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges).expect("matching edges form a simple graph")
    }

    fn check_perfect_on(&self, g: &Graph) -> Result<(), GraphError> {
        if self.n != g.n() {
            return Err(GraphError::SizeMismatch {
                matching: self.n,
                graph: g.n(),
            });
        }
        if !self.is_perfect() {
            return Err(GraphError::NotPerfect {
                edges: self.edges.len(),
                n: self.n,
            });
        }
        Ok(())
    }
}

/// Cayley graph: `g_i ~ g_j` iff `g_i⁻¹ g_j ∈ S`. Vertex `i` is `group[i]`.
pub fn cayley_graph(group: &[ProjMat], connection: &[ProjMat]) -> Result<Graph, GraphError> {
    if connection.iter().any(ProjMat::is_identity) {
        return Err(GraphError::IdentityInConnectionSet);
    }
    if connection
        .iter()
        .any(|s| !connection.contains(&s.inverse()))
    {
        return Err(GraphError::AsymmetricConnectionSet);
    }
    let index: HashMap<ProjMat, usize> = group.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut adjacency = Vec::with_capacity(group.len());
    for g in group {
        let mut nbrs = Vec::with_capacity(connection.len());
        for s in connection {
            let h = g.mul(s);
            let j = *index.get(&h).ok_or(GraphError::NotInGroup(h))?;
            nbrs.push(j);
        }
        nbrs.sort_unstable();
        nbrs.dedup();
        adjacency.push(nbrs);
    }
    Ok(Graph {
        adjacency,
        bipartition: None,
        labels: Some(group.to_vec()),
    })
}

/// BFS two-coloring with vertex 0 on the left, or `None` if an odd cycle
/// exists.
pub fn detect_bipartition(g: &Graph) -> Result<Option<Vec<Side>>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let n = g.n();
    let mut side: Vec<Option<Side>> = vec![None; n];
    let mut queue = VecDeque::new();
    if n > 0 {
        side[0] = Some(Side::Left);
        queue.push_back(0);
    }
    while let Some(u) = queue.pop_front() {
        let su = side[u].expect("queued vertices are colored");
        for &v in g.neighbors(u) {
            match side[v] {
                None => {
                    side[v] = Some(su.other());
                    queue.push_back(v);
                }
                Some(sv) if sv == su => return Ok(None),
                Some(_) => {}
            }
        }
    }
    Ok(Some(side.into_iter().map(|s| s.expect("connected")).collect()))
}

pub fn complement(g: &Graph) -> Result<Graph, GraphError> {
    if g.is_bipartite_flagged() {
        return Err(GraphError::FlaggedBipartite);
    }
    let n = g.n();
    let adjacency = (0..n)
        .map(|u| {
            let nbrs = g.neighbors(u);
            (0..n)
                .filter(|&v| v != u && nbrs.binary_search(&v).is_err())
                .collect()
        })
        .collect();
    Ok(Graph::from_adjacency_unchecked(adjacency, None))
}

/// Swaps presence and absence of every edge across the recorded bipartition.
pub fn bipartite_complement(g: &Graph) -> Result<Graph, GraphError> {
    let sides = g.bipartition().ok_or(GraphError::NotBipartite)?;
    let (left, right) = g.side_sizes().expect("bipartition present");
    if left != right {
        return Err(GraphError::UnequalSides(left, right));
    }
    let n = g.n();
    let adjacency = (0..n)
        .map(|u| {
            let nbrs = g.neighbors(u);
            (0..n)
                .filter(|&v| sides[v] != sides[u] && nbrs.binary_search(&v).is_err())
                .collect()
        })
        .collect();
    let mut out = Graph::from_adjacency_unchecked(adjacency, Some(sides.to_vec()));
    out.labels = g.labels.clone();
    Ok(out)
}

/// `X - F` for a perfect matching `F ⊆ E`.
pub fn remove_matching(g: &Graph, f: &Matching) -> Result<Graph, GraphError> {
    f.check_perfect_on(g)?;
    if let Some(&(u, v)) = f.edges().iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(GraphError::EdgeMissing(u, v));
    }
    let mut adjacency = g.adjacency.clone();
    for &(u, v) in f.edges() {
        adjacency[u].retain(|&w| w != v);
        adjacency[v].retain(|&w| w != u);
    }
    let mut out = Graph::from_adjacency_unchecked(adjacency, g.bipartition.clone());
    out.labels = g.labels.clone();
    Ok(out)
}

/// `X + F` for a perfect matching `F` disjoint from `E`. The bipartition is
/// kept when every edge of `F` crosses it.
pub fn add_matching(g: &Graph, f: &Matching) -> Result<Graph, GraphError> {
    f.check_perfect_on(g)?;
    if let Some(&(u, v)) = f.edges().iter().find(|&&(u, v)| g.has_edge(u, v)) {
        return Err(GraphError::EdgePresent(u, v));
    }
    let mut adjacency = g.adjacency.clone();
    for &(u, v) in f.edges() {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
    }
    let bipartition = g
        .bipartition
        .as_ref()
        .filter(|sides| f.edges().iter().all(|&(u, v)| sides[u] != sides[v]))
        .cloned();
    let mut out = Graph::from_adjacency_unchecked(adjacency, bipartition);
    out.labels = g.labels.clone();
    Ok(out)
}

/// `X^{p,q}` with its construction data.
#[derive(Debug, Clone)]
pub struct LpsGraph {
    pub graph: Graph,
    pub connection: ConnectionSet,
    pub subgroup: Subgroup,
}

impl LpsGraph {
    pub fn p(&self) -> i64 {
        self.connection.p
    }

    pub fn q(&self) -> i64 {
        self.connection.q
    }
}

/// Builds `X^{p,q}`: the Cayley graph of `PSL₂(q)` when `p` is a square mod
/// `q`, of `PGL₂(q)` otherwise. The PGL case carries the bipartition by
/// determinant class (`PSL₂(q)` on the left). Fails if the result is
/// disconnected.
pub fn build_lps(p: i64, q: i64) -> Result<LpsGraph, GraphError> {
    let connection = projgroup::build_spq(p, q)?;
    let subgroup = connection.subgroup();
    let group = projgroup::enumerate_group(q, subgroup)?;
    let mut graph = cayley_graph(&group, &connection.elements)?;
    if !graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if subgroup == Subgroup::Pgl {
        let sides = group
            .iter()
            .map(|m| {
                if projgroup::psl_membership(m) {
                    Side::Left
                } else {
                    Side::Right
                }
            })
            .collect();
        graph = graph.with_bipartition(sides)?;
    }
    Ok(LpsGraph {
        graph,
        connection,
        subgroup,
    })
}
