#![allow(dead_code)]

use itertools::Itertools;
use nalgebra::DMatrix;
use opinet::graph::AdjacencyMatrix;
use opinet::Graph;

pub fn to_dmatrix(a: &AdjacencyMatrix) -> DMatrix<f64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, k| a.get(i, k))
}

/// Ascending eigenvalues of a symmetric matrix, by nalgebra.
pub fn reference_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn parity(perm: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for k in i + 1..perm.len() {
            if perm[i] > perm[k] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Determinant by the permutation expansion.
pub fn leibniz_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    (0..n)
        .permutations(n)
        .map(|p| parity(&p) * (0..n).map(|i| m[i][p[i]]).product::<f64>())
        .sum()
}

/// `det(A − λI)` by the permutation expansion.
pub fn char_poly_at(a: &AdjacencyMatrix, lambda: f64) -> f64 {
    let n = a.dim();
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|k| a.get(i, k) - if i == k { lambda } else { 0.0 }).collect())
        .collect();
    leibniz_det(&m)
}

/// All vertex permutations preserving adjacency, by exhaustive search.
pub fn brute_force_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n_agents();
    (0..n)
        .permutations(n)
        .filter(|p| {
            (0..n).all(|i| (0..n).all(|k| g.has_edge(i, k) == g.has_edge(p[i], p[k])))
        })
        .sorted()
        .collect()
}

/// Orbits as sorted classes ordered by smallest member, from brute-force permutations.
pub fn brute_force_orbits(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = perms.iter().map(|p| p[i]).sorted().dedup().collect();
        for &k in &class {
            seen[k] = true;
        }
        classes.push(class);
    }
    classes
}

/// Central-difference Jacobian of `f` at `x`.
pub fn fd_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[k] += h;
        xm[k] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for i in 0..n {
            j[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    j
}

pub fn triangle_count(g: &Graph) -> usize {
    let n = g.n_agents();
    (0..n)
        .tuple_combinations()
        .filter(|&(i, j, k)| g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k))
        .count()
}
