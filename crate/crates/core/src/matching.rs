//! Perfect matchings of bipartite graphs by Hopcroft–Karp.
//!
//! The scan order of left vertices and of every adjacency list is permuted
//! by a ChaCha8 stream seeded from a [`MatchingSeed`], so different seeds
//! tend to land on different 1-factors while any fixed seed is reproducible.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Matching, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("graph has no recorded bipartition")]
    NotBipartite,
    #[error("bipartition sides have sizes {0} and {1}")]
    UnequalSides(usize, usize),
    /// `left_set` has fewer neighbors than members, so no perfect matching exists.
    #[error("Hall's condition fails: {} left vertices see only {} right vertices", left_set.len(), neighborhood.len())]
    HallViolation {
        left_set: Vec<usize>,
        neighborhood: Vec<usize>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct MatchingSeed(pub u64);

impl MatchingSeed {
    pub fn next(self) -> Self {
        Self(self.0.wrapping_add(1))
    }
}

const UNMATCHED: usize = usize::MAX;

struct HopcroftKarp<'a> {
    // left vertex index -> shuffled list of right vertex indices
    adj: &'a [Vec<usize>],
    left_order: &'a [usize],
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    dist: Vec<usize>,
}

impl HopcroftKarp<'_> {
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for &u in self.left_order {
            if self.match_left[u] == UNMATCHED {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                let w = self.match_right[v];
                if w == UNMATCHED {
                    found = true;
                } else if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        for idx in 0..self.adj[u].len() {
            let v = self.adj[u][idx];
            let w = self.match_right[v];
            let advance = w == UNMATCHED
                || (self.dist[w] == self.dist[u].wrapping_add(1) && self.dfs(w));
            if advance {
                self.match_left[u] = v;
                self.match_right[v] = u;
                return true;
            }
        }
        self.dist[u] = usize::MAX;
        false
    }

    fn run(&mut self) {
        while self.bfs() {
            for i in 0..self.left_order.len() {
                let u = self.left_order[i];
                if self.match_left[u] == UNMATCHED {
                    self.dfs(u);
                }
            }
        }
    }

    /// Left vertices reachable from `root` by alternating paths, and their
    /// neighborhood. After a maximum matching this is a Hall violator when
    /// `root` is unmatched.
    fn alternating_reach(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut left_seen = HashSet::from([root]);
        let mut right_seen = HashSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if right_seen.insert(v) {
                    let w = self.match_right[v];
                    if w != UNMATCHED && left_seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut left: Vec<_> = left_seen.into_iter().collect();
        let mut right: Vec<_> = right_seen.into_iter().collect();
        left.sort_unstable();
        right.sort_unstable();
        (left, right)
    }
}

/// A perfect matching of a bipartite graph with equal sides, found by
/// Hopcroft–Karp in `O(E·sqrt(V))`.
///
/// Fails with [`MatchingError::HallViolation`] naming a deficient set of
/// left vertices (graph indices) when no perfect matching exists. For a
/// `k`-regular bipartite graph with `k >= 1` this never happens.
pub fn perfect_matching_bipartite(g: &Graph, seed: MatchingSeed) -> Result<Matching, MatchingError> {
    let sides = g.bipartition().ok_or(MatchingError::NotBipartite)?;
    let left: Vec<usize> = (0..g.n()).filter(|&v| sides[v] == Side::Left).collect();
    let right: Vec<usize> = (0..g.n()).filter(|&v| sides[v] == Side::Right).collect();
    if left.len() != right.len() {
        return Err(MatchingError::UnequalSides(left.len(), right.len()));
    }
    let mut right_index = vec![UNMATCHED; g.n()];
    for (i, &v) in right.iter().enumerate() {
        right_index[v] = i;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut left_order: Vec<usize> = (0..left.len()).collect();
    left_order.shuffle(&mut rng);
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&u| {
            let mut nbrs: Vec<usize> = g.neighbors(u).iter().map(|&v| right_index[v]).collect();
            nbrs.shuffle(&mut rng);
            nbrs
        })
        .collect();

    let mut hk = HopcroftKarp {
        adj: &adj,
        left_order: &left_order,
        match_left: vec![UNMATCHED; left.len()],
        match_right: vec![UNMATCHED; right.len()],
        dist: vec![usize::MAX; left.len()],
    };
    hk.run();

    if let Some(root) = (0..left.len()).find(|&u| hk.match_left[u] == UNMATCHED) {
        let (l, r) = hk.alternating_reach(root);
        return Err(MatchingError::HallViolation {
            left_set: l.into_iter().map(|u| left[u]).collect(),
            neighborhood: r.into_iter().map(|v| right[v]).collect(),
        });
    }
    let edges = hk
        .match_left
        .iter()
        .enumerate()
        .map(|(u, &v)| (left[u], right[v]));
    Ok(Matching::new(g.n(), edges)?)
}

/// Result of [`sample_matchings`].
#[derive(Debug, Clone)]
pub struct MatchingSample {
    pub matchings: Vec<Matching>,
    /// Seed that produced each entry of `matchings`.
    pub seeds: Vec<MatchingSeed>,
    pub requested: usize,
    pub attempts: usize,
}

impl MatchingSample {
    pub fn is_complete(&self) -> bool {
        self.matchings.len() >= self.requested
    }
}

/// Up to `count` pairwise distinct perfect matchings from seeds
/// `base_seed, base_seed + 1, …`, giving up after `10 · count` attempts.
pub fn sample_matchings(
    g: &Graph,
    count: usize,
    base_seed: MatchingSeed,
) -> Result<MatchingSample, MatchingError> {
    let mut seen = HashSet::new();
    let mut sample = MatchingSample {
        matchings: Vec::with_capacity(count),
        seeds: Vec::with_capacity(count),
        requested: count,
        attempts: 0,
    };
    let mut seed = base_seed;
    while sample.matchings.len() < count && sample.attempts < 10 * count {
        let f = perfect_matching_bipartite(g, seed)?;
        sample.attempts += 1;
        if seen.insert(f.edges().to_vec()) {
            sample.matchings.push(f);
            sample.seeds.push(seed);
        }
        seed = seed.next();
    }
    Ok(sample)
}
