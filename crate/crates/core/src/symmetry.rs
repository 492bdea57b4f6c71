//! Graph automorphisms, vertex orbits and equivariance checks.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::PairReport;
use crate::dynamics::{opinion_rhs, ModelParams};
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, Graph};

/// Largest graph the automorphism search accepts.
pub const MAX_SEARCH_VERTICES: usize = 16;
/// Largest automorphism group that is enumerated in full.
pub const MAX_GROUP_ORDER: usize = 1 << 20;

/// A bijection `i ↦ ρ(i)` on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &j in &image {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::invalid("permutation image is not a bijection"));
            }
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// `P_ρ x`, i.e. `(P_ρ x)_{ρ(i)} = x_i`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for (i, &j) in self.0.iter().enumerate() {
            y[j] = x[i];
        }
        y
    }

    /// `ā_{ρ(i)ρ(k)} = ā_{ik}` for all `i, k`.
    pub fn is_automorphism(&self, a: &AdjacencyMatrix) -> bool {
        let n = self.len();
        n == a.dim()
            && (0..n).all(|i| (0..n).all(|k| a.get(self.0[i], self.0[k]) == a.get(i, k)))
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Stable colouring by iterated neighbourhood refinement, starting from degrees.
fn refine_colors(g: &Graph) -> Vec<usize> {
    let n = g.n_agents();
    let mut colors: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    let mut classes = usize::MAX;
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut nb: Vec<usize> = g.neighbors(i).map(|k| colors[k]).collect();
                nb.sort_unstable();
                (colors[i], nb)
            })
            .collect();
        let ids: BTreeMap<&(usize, Vec<usize>), usize> = signatures
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(id, sig)| (sig, id))
            .collect();
        let next: Vec<usize> = signatures.iter().map(|s| ids[s]).collect();
        let count = ids.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// The full automorphism group of an undirected graph, sorted lexicographically.
///
/// Backtracking over vertex images, restricted to matching refined colours and
/// pruned by adjacency consistency with every vertex already mapped.
pub fn automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    if g.is_directed() {
        return Err(Error::invalid("automorphism search supports undirected graphs only"));
    }
    let n = g.n_agents();
    if n > MAX_SEARCH_VERTICES {
        return Err(Error::SizeLimit {
            what: "automorphism search graph",
            size: n,
            limit: MAX_SEARCH_VERTICES,
        });
    }
    let colors = refine_colors(g);
    let class_size = |c: usize| colors.iter().filter(|&&x| x == c).count();

    // Visit order: BFS per component, seeded at the rarest colour.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let root = (0..n)
            .filter(|&i| !placed[i])
            .min_by_key(|&i| (class_size(colors[i]), i))
            .expect("unplaced vertex exists");
        placed[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in g.neighbors(v) {
                if !placed[w] {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let a = g.adjacency();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found = Vec::new();
    search(&a, &colors, &order, 0, &mut image, &mut used, &mut found)?;
    found.sort();
    Ok(found)
}

fn search(
    a: &AdjacencyMatrix,
    colors: &[usize],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
    found: &mut Vec<Permutation>,
) -> Result<()> {
    if depth == order.len() {
        if found.len() == MAX_GROUP_ORDER {
            return Err(Error::SizeLimit {
                what: "automorphism group",
                size: MAX_GROUP_ORDER + 1,
                limit: MAX_GROUP_ORDER,
            });
        }
        found.push(Permutation(image.to_vec()));
        return Ok(());
    }
    let v = order[depth];
    for c in 0..image.len() {
        if used[c] || colors[c] != colors[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&w| a.get(v, w) == a.get(c, image[w]));
        if !consistent {
            continue;
        }
        image[v] = c;
        used[c] = true;
        search(a, colors, order, depth + 1, image, used, found)?;
        used[c] = false;
        image[v] = usize::MAX;
    }
    Ok(())
}

/// Vertex orbits under a permutation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    /// Sorted classes, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn class_of(&self, i: usize) -> Option<&[usize]> {
        self.classes.iter().find(|c| c.contains(&i)).map(Vec::as_slice)
    }

    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|i| i + 1).collect())
            .collect()
    }
}

/// Orbit partition of `0..n` under `group`, which must be closed under composition.
pub fn orbits(group: &[Permutation], n: usize) -> Result<OrbitPartition> {
    if group.iter().any(|p| p.len() != n) {
        return Err(Error::invalid("permutation length does not match vertex count"));
    }
    check_closed(group, n)?;

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for p in group {
        for i in 0..n {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, p.image(i)));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    Ok(OrbitPartition {
        classes: classes.into_values().collect(),
    })
}

/// Verifies that `group` is a group by regenerating it from a greedy generating set.
fn check_closed(group: &[Permutation], n: usize) -> Result<()> {
    let set: HashSet<&Permutation> = group.iter().collect();
    let identity = Permutation::identity(n);
    if !set.contains(&identity) {
        return Err(Error::invalid("permutation set lacks the identity"));
    }
    let not_closed = || Error::invalid("permutation set is not closed under composition");
    let mut generators: Vec<&Permutation> = Vec::new();
    let mut generated: HashSet<Permutation> = HashSet::from([identity.clone()]);
    for p in group {
        if generated.contains(p) {
            continue;
        }
        generators.push(p);
        generated = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity.clone()]);
        while let Some(h) = queue.pop_front() {
            for s in &generators {
                let next = h.compose(s);
                if generated.contains(&next) {
                    continue;
                }
                if !set.contains(&next) {
                    return Err(not_closed());
                }
                generated.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    if generated.len() != set.len() {
        return Err(not_closed());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    /// Orbit-mates hold equal opinions.
    Agreement,
    /// Orbit-mates hold opinions of equal magnitude.
    Disagreement,
}

pub fn check_orbit_magnitudes(x: &[f64], op: &OrbitPartition, kind: PatternKind, tol: f64) -> Result<PairReport> {
    if op.classes.iter().flatten().any(|&i| i >= x.len()) {
        return Err(Error::invalid("orbit partition references agents outside the state"));
    }
    let mut violations = Vec::new();
    for class in &op.classes {
        for (j, &i) in class.iter().enumerate() {
            for &k in &class[j + 1..] {
                let gap = match kind {
                    PatternKind::Agreement => (x[i] - x[k]).abs(),
                    PatternKind::Disagreement => (x[i].abs() - x[k].abs()).abs(),
                };
                if gap > tol {
                    violations.push((i, k));
                }
            }
        }
    }
    Ok(PairReport {
        ok: violations.is_empty(),
        violations,
    })
}

/// Largest `‖P_ρ h(x) − h(P_ρ x)‖∞` over `samples` states drawn from `U(−1, 1)`,
/// for the unbiased opinion field `h` at fixed attention `u`.
pub fn check_equivariance(
    g: &Graph,
    p: &ModelParams,
    u: f64,
    rho: &Permutation,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !p.is_unbiased() {
        return Err(Error::invalid("equivariance holds only for zero bias"));
    }
    let n = g.n_agents();
    if rho.len() != n || p.bias.len() != n {
        return Err(Error::invalid("permutation, parameters and graph disagree in size"));
    }
    let a = g.adjacency();
    let uv = vec![u; n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lhs = rho.apply(&opinion_rhs(&x, &uv, p, &a)?);
        let rhs = opinion_rhs(&rho.apply(&x), &uv, p, &a)?;
        for (l, r) in lhs.iter().zip(&rhs) {
            worst = worst.max((l - r).abs());
        }
    }
    Ok(worst)
}
