//! Exact maximum independent set by branch and bound.
//!
//! The search branches on the lowest-indexed undecided vertex, trying
//! "include" before "exclude", and prunes with a greedy clique cover of the
//! remaining candidates (an independent set takes at most one vertex per
//! clique). A greedy min-degree solution seeds the lower bound.
//!
//! Among maximum sets the one returned is the lexicographically smallest as a
//! sorted index list: include-first DFS reaches it first and later sets only
//! replace the incumbent when strictly larger.

#[derive(Clone, Debug, PartialEq, Eq)]
struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    fn empty(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn minus(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    n: usize,
    adjacency: Vec<VertexSet>,
}

impl ConflictGraph {
    pub fn new(n: usize) -> Self {
        ConflictGraph {
            n,
            adjacency: vec![VertexSet::empty(n); n],
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "self loop on {a}");
        self.adjacency[a].insert(b);
        self.adjacency[b].insert(a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| {
            vertices[i + 1..]
                .iter()
                .all(|&b| a != b && !self.has_edge(a, b))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisOutcome {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// False when the node budget ran out before the search finished.
    pub optimal: bool,
    pub nodes: u64,
}

struct Search<'g> {
    graph: &'g ConflictGraph,
    best: Option<Vec<usize>>,
    best_len: usize,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
}

impl Search<'_> {
    fn clique_cover_bound(&self, candidates: &VertexSet) -> usize {
        let mut rest = candidates.clone();
        let mut cliques = 0;
        while let Some(v) = rest.first() {
            cliques += 1;
            rest.remove(v);
            let mut extendable = rest.intersect(&self.graph.adjacency[v]);
            while let Some(u) = extendable.first() {
                rest.remove(u);
                extendable.remove(u);
                extendable = extendable.intersect(&self.graph.adjacency[u]);
            }
        }
        cliques
    }

    fn expand(&mut self, chosen: &mut Vec<usize>, candidates: VertexSet) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if let Some(limit) = self.budget {
            if self.nodes > limit {
                self.exhausted = true;
                return;
            }
        }
        if candidates.is_empty() {
            if chosen.len() > self.best_len {
                self.best_len = chosen.len();
                self.best = Some(chosen.clone());
            }
            return;
        }
        if chosen.len() + self.clique_cover_bound(&candidates) <= self.best_len {
            return;
        }
        let v = candidates.first().expect("non-empty");
        let mut without_v = candidates.clone();
        without_v.remove(v);

        chosen.push(v);
        self.expand(chosen, without_v.minus(&self.graph.adjacency[v]));
        chosen.pop();

        self.expand(chosen, without_v);
    }
}

/// Greedy independent set: repeatedly take the minimum-degree vertex of the
/// remaining graph (ties to the lower index).
pub fn greedy_independent_set(graph: &ConflictGraph) -> Vec<usize> {
    let mut rest = VertexSet::full(graph.n);
    let mut picked = Vec::new();
    while !rest.is_empty() {
        let v = rest
            .iter()
            .min_by_key(|&v| (graph.adjacency[v].intersect(&rest).len(), v))
            .expect("non-empty");
        picked.push(v);
        rest.remove(v);
        rest = rest.minus(&graph.adjacency[v]);
    }
    picked.sort_unstable();
    picked
}

/// Maximum independent set. With a `node_budget` the search may stop early;
/// the best set found so far is then returned with `optimal == false`.
pub fn maximum_independent_set(graph: &ConflictGraph, node_budget: Option<u64>) -> MisOutcome {
    let greedy = greedy_independent_set(graph);
    let mut search = Search {
        graph,
        best: None,
        // ties with the greedy size are still explored so the lexicographic
        // representative is found
        best_len: greedy.len().saturating_sub(1),
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    search.expand(&mut Vec::new(), VertexSet::full(graph.n));
    let optimal = !search.exhausted;
    let vertices = match search.best {
        Some(best) if best.len() >= greedy.len() => best,
        _ => greedy,
    };
    MisOutcome {
        vertices,
        optimal,
        nodes: search.nodes,
    }
}
