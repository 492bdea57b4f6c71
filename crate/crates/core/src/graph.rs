//! Interaction graphs and their self-loop-free adjacency matrices.
//!
//! Vertices are `0..n` in the Rust API. The JSON file format and every
//! human-facing output number them `1..=n`.

use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resampling cap for [`make_random_connected`].
pub const MAX_RANDOM_ATTEMPTS: usize = 10_000;

/// A directed or undirected graph without self-loops.
///
/// Undirected graphs store both orientations of every edge, so `has_edge(i, k)`
/// and `has_edge(k, i)` always agree for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::invalid("a graph needs at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for (i, k) in edges {
            if i >= n || k >= n {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) references a vertex outside 1..={n}",
                    i + 1,
                    k + 1
                )));
            }
            if i == k {
                return Err(Error::invalid(format!("self-loop at vertex {}", i + 1)));
            }
            set.insert((i, k));
            if !directed {
                set.insert((k, i));
            }
        }
        Ok(Self {
            n,
            directed,
            edges: set,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_edge(&self, i: usize, k: usize) -> bool {
        self.edges.contains(&(i, k))
    }

    /// Ordered pairs `(i, k)`; undirected edges appear in both orientations.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Edges listed once: both orientations for directed graphs, `i < k` for undirected.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let directed = self.directed;
        self.edges
            .iter()
            .copied()
            .filter(move |&(i, k)| directed || i < k)
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Out-neighbours of `i` (the agents whose opinions `i` observes).
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((i, 0)..(i + 1, 0)).map(|&(_, k)| k)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        let mut entries = vec![0.0; self.n * self.n];
        for &(i, k) in &self.edges {
            entries[i * self.n + k] = 1.0;
        }
        AdjacencyMatrix { n: self.n, entries }
    }

    /// Weak connectivity for directed graphs.
    pub fn is_connected(&self) -> bool {
        let mut undirected = vec![Vec::new(); self.n];
        for &(i, k) in &self.edges {
            undirected[i].push(k);
            undirected[k].push(i);
        }
        reach_count(&undirected, 0) == self.n
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.adjacency().is_strongly_connected()
    }

    /// Two-colouring of a connected undirected graph, with vertex 0 in the first set.
    ///
    /// Returns `Ok(None)` when an odd cycle exists.
    pub fn bipartition(&self) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        if self.directed {
            return Err(Error::invalid("bipartition requires an undirected graph"));
        }
        if !self.is_connected() {
            return Err(Error::invalid("bipartition requires a connected graph"));
        }
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        color[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let ci = color[i].expect("queued vertices are coloured");
            for k in self.neighbors(i) {
                match color[k] {
                    None => {
                        color[k] = Some(!ci);
                        queue.push_back(k);
                    }
                    Some(ck) if ck == ci => return Ok(None),
                    Some(_) => {}
                }
            }
        }
        let (mut first, mut second) = (Vec::new(), Vec::new());
        for (i, c) in color.into_iter().enumerate() {
            if c == Some(false) {
                first.push(i);
            } else {
                second.push(i);
            }
        }
        Ok(Some((first, second)))
    }

    /// The common degree `K` if the undirected graph is `K`-regular.
    pub fn regularity(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.n).all(|i| self.degree(i) == k).then_some(k)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            directed: self.directed,
            n: self.n,
            edges: self.edges().map(|(i, k)| [i + 1, k + 1]).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let mut edges = Vec::with_capacity(file.edges.len());
        for &[i, k] in &file.edges {
            if i == 0 || k == 0 {
                return Err(Error::invalid("graph files number vertices from 1"));
            }
            edges.push((i - 1, k - 1));
        }
        Self::new(file.n, file.directed, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// On-disk graph format: `{"directed": bool, "n": int, "edges": [[i, k], ...]}`, 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub directed: bool,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// Dense 0/1 adjacency matrix `Ā` with zero diagonal, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl AdjacencyMatrix {
    /// Builds a matrix from rows, checking that entries are 0/1 and the diagonal vanishes.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("empty adjacency matrix"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid("adjacency matrix must be square"));
            }
            for (k, &v) in row.iter().enumerate() {
                if v != 0.0 && v != 1.0 {
                    return Err(Error::invalid(format!("entry ({i}, {k}) is not 0 or 1")));
                }
                if i == k && v != 0.0 {
                    return Err(Error::invalid("adjacency diagonal must be zero"));
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.entries[i * self.n + k]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|k| self.get(i, k) == self.get(k, i)))
    }

    /// `Ā x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Āᵀ x`
    pub fn mul_vec_transposed(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let xi = x[i];
            if xi != 0.0 {
                for (o, a) in out.iter_mut().zip(self.row(i)) {
                    *o += a * xi;
                }
            }
        }
        out
    }

    pub fn is_strongly_connected(&self) -> bool {
        let forward: Vec<Vec<usize>> = (0..self.n)
            .map(|i| (0..self.n).filter(|&k| self.get(i, k) != 0.0).collect())
            .collect();
        let backward: Vec<Vec<usize>> = (0..self.n)
            .map(|k| (0..self.n).filter(|&i| self.get(i, k) != 0.0).collect())
            .collect();
        reach_count(&forward, 0) == self.n && reach_count(&backward, 0) == self.n
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reach_count(adj: &[Vec<usize>], start: usize) -> usize {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &k in &adj[i] {
            if !seen[k] {
                seen[k] = true;
                count += 1;
                stack.push(k);
            }
        }
    }
    count
}

fn require(n: usize, min: usize, family: &str) -> Result<()> {
    if n < min {
        return Err(Error::invalid(format!("{family} needs n >= {min}, got {n}")));
    }
    Ok(())
}

pub fn make_cycle(n: usize) -> Result<Graph> {
    require(n, 3, "cycle")?;
    Graph::new(n, false, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn make_path(n: usize) -> Result<Graph> {
    require(n, 2, "path")?;
    Graph::new(n, false, (0..n - 1).map(|i| (i, i + 1)))
}

/// Star with hub vertex 0.
pub fn make_star(n: usize) -> Result<Graph> {
    require(n, 2, "star")?;
    Graph::new(n, false, (1..n).map(|i| (0, i)))
}

/// Hub vertex 0 joined to an outer cycle on vertices `1..n`.
pub fn make_wheel(n: usize) -> Result<Graph> {
    require(n, 4, "wheel")?;
    let outer = n - 1;
    let rim = (0..outer).map(move |j| (1 + j, 1 + (j + 1) % outer));
    Graph::new(n, false, (1..n).map(|i| (0, i)).chain(rim))
}

pub fn make_complete(n: usize) -> Result<Graph> {
    require(n, 2, "complete graph")?;
    Graph::new(
        n,
        false,
        (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))),
    )
}

/// Full `branching`-ary tree of the given depth, numbered breadth-first from the root 0.
pub fn make_balanced_tree(branching: usize, depth: usize) -> Result<Graph> {
    require(branching, 2, "balanced tree branching")?;
    require(depth, 1, "balanced tree depth")?;
    let n = (0..=depth as u32).map(|l| branching.pow(l)).sum::<usize>();
    Graph::new(n, false, (1..n).map(|k| ((k - 1) / branching, k)))
}

/// Hypercube graph `Q_dim`; `dim = 3` is the cube, the smallest 3-regular bipartite example.
pub fn make_hypercube(dim: usize) -> Result<Graph> {
    require(dim, 1, "hypercube dimension")?;
    let n = 1usize << dim;
    Graph::new(
        n,
        false,
        (0..n).flat_map(|i| (0..dim).map(move |b| (i, i ^ (1 << b)))),
    )
}

/// Cycle on `n` vertices plus the `n/2` antipodal chords; `n = 8` is the Wagner graph.
pub fn make_mobius_ladder(n: usize) -> Result<Graph> {
    require(n, 6, "Möbius ladder")?;
    if n % 2 != 0 {
        return Err(Error::invalid(format!("Möbius ladder needs an even n, got {n}")));
    }
    let rim = (0..n).map(|i| (i, (i + 1) % n));
    Graph::new(n, false, rim.chain((0..n / 2).map(|i| (i, i + n / 2))))
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity by whole-graph resampling.
pub fn make_random_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("random graph needs at least one vertex"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("edge probability must lie in (0, 1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RANDOM_ATTEMPTS {
        let mut edges = Vec::new();
        for i in 0..n {
            for k in i + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((i, k));
                }
            }
        }
        let g = Graph::new(n, false, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_RANDOM_ATTEMPTS,
    })
}
