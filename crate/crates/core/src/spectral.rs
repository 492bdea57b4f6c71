//! Eigen-analysis of the adjacency matrix.
//!
//! Symmetric matrices go through a cyclic Jacobi solver; the Perron pair of a
//! (strongly) connected graph comes from power iteration on the shifted
//! matrix `Ā + N·I`, which is primitive and has the same eigenvectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{dot, AdjacencyMatrix};

/// Off-diagonal Frobenius norm, relative to the full norm, at which Jacobi stops.
pub const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Power iteration stops once successive unit iterates differ by less than this (max-norm).
pub const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 2_000_000;

/// Eigenvalue grouping tolerance, relative to `max(1, max |λ|)`.
pub const DEFAULT_GROUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Eigenpairs of a symmetric adjacency matrix, ascending by eigenvalue.
pub fn eig_symmetric(a: &AdjacencyMatrix) -> Result<Vec<EigenPair>> {
    if !a.is_symmetric() {
        return Err(Error::invalid("eig_symmetric needs a symmetric matrix"));
    }
    jacobi_eigen(a.as_slice(), a.dim())
}

/// Cyclic Jacobi eigen-decomposition of a dense symmetric `n × n` matrix given row-major.
///
/// Eigenvectors are orthonormal and sign-normalised so their largest-magnitude
/// entry is positive (ties go to the lowest index). Pairs are sorted ascending.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> Result<Vec<EigenPair>> {
    if matrix.len() != n * n {
        return Err(Error::invalid("matrix length does not match dimension"));
    }
    for i in 0..n {
        for k in i + 1..n {
            if (matrix[i * n + k] - matrix[k * n + i]).abs() > 1e-12 * (1.0 + matrix[i * n + k].abs()) {
                return Err(Error::invalid("jacobi_eigen needs a symmetric matrix"));
            }
        }
    }
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for k in 0..n {
                if i != k {
                    s += a[i * n + k] * a[i * n + k];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = norm == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NotConverged {
                what: "Jacobi eigen-solver",
                iterations: sweeps,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- A J
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                // A <- Jᵀ A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        converged = off(&a) <= JACOBI_TOL * norm;
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|j| {
            let mut vector: Vec<f64> = (0..n).map(|k| v[k * n + j]).collect();
            normalize_sign(&mut vector);
            EigenPair {
                value: a[j * n + j],
                vector,
            }
        })
        .collect();
    pairs.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(pairs)
}

/// Flips `v` so that its largest-magnitude entry is positive; near-ties resolve to the lowest index.
pub fn normalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-9))
        .expect("some entry attains the maximum");
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Perron root and positive unit eigenvectors of a (strongly) connected graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perron {
    pub lambda_max: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

pub fn perron(a: &AdjacencyMatrix) -> Result<Perron> {
    if !a.is_strongly_connected() {
        return Err(Error::invalid(
            "Perron pair requires a (strongly) connected graph",
        ));
    }
    let shift = a.dim() as f64;
    let right = power_iterate(|x| a.mul_vec(x), a.dim(), shift)?;
    let left = if a.is_symmetric() {
        right.clone()
    } else {
        power_iterate(|x| a.mul_vec_transposed(x), a.dim(), shift)?
    };
    let lambda_max = dot(&left, &a.mul_vec(&right)) / dot(&left, &right);
    Ok(Perron {
        lambda_max,
        right,
        left,
    })
}

fn power_iterate(apply: impl Fn(&[f64]) -> Vec<f64>, n: usize, shift: f64) -> Result<Vec<f64>> {
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..POWER_MAX_ITERS {
        let mut y = apply(&x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        let norm = dot(&y, &y).sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        let diff = y
            .iter()
            .zip(&x)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        x = y;
        if diff < POWER_TOL {
            return Ok(x);
        }
    }
    Err(Error::NotConverged {
        what: "power iteration",
        iterations: POWER_MAX_ITERS,
    })
}

/// Eigenvector centrality: the normalised positive left Perron vector.
pub fn centrality(a: &AdjacencyMatrix) -> Result<Vec<f64>> {
    Ok(perron(a)?.left)
}

/// Orthonormal basis of the eigenspace for every eigenvalue within `group_tol` of `lambda`.
///
/// An empty basis means no eigenvalue is that close.
pub fn eigenspace(a: &AdjacencyMatrix, lambda: f64, group_tol: f64) -> Result<Vec<Vec<f64>>> {
    Ok(basis_near(&eig_symmetric(a)?, lambda, group_tol))
}

fn basis_near(pairs: &[EigenPair], lambda: f64, tol: f64) -> Vec<Vec<f64>> {
    pairs
        .iter()
        .filter(|p| (p.value - lambda).abs() <= tol)
        .map(|p| p.vector.clone())
        .collect()
}

/// Spectral facts about an undirected graph used throughout the analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub mult_max: usize,
    pub mult_min: usize,
    pub basis_max: Vec<Vec<f64>>,
    pub basis_min: Vec<Vec<f64>>,
    /// Present only for connected graphs.
    pub centrality: Option<Vec<f64>>,
}

impl SpectralSummary {
    pub fn compute(a: &AdjacencyMatrix) -> Result<Self> {
        Self::with_group_tol(a, DEFAULT_GROUP_TOL)
    }

    /// `rel_tol` is scaled by `max(1, max |λ|)` before grouping.
    pub fn with_group_tol(a: &AdjacencyMatrix, rel_tol: f64) -> Result<Self> {
        let pairs = eig_symmetric(a)?;
        let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.value).collect();
        let lambda_min = eigenvalues[0];
        let lambda_max = eigenvalues[eigenvalues.len() - 1];
        let tol = rel_tol * lambda_min.abs().max(lambda_max.abs()).max(1.0);
        let basis_max = basis_near(&pairs, lambda_max, tol);
        let basis_min = basis_near(&pairs, lambda_min, tol);
        let centrality = if a.is_strongly_connected() {
            Some(centrality(a)?)
        } else {
            None
        };
        Ok(Self {
            lambda_max,
            lambda_min,
            mult_max: basis_max.len(),
            mult_min: basis_min.len(),
            basis_max,
            basis_min,
            centrality,
            eigenvalues,
        })
    }

    /// The λ_min-eigenvector when λ_min is simple.
    pub fn min_vector(&self) -> Option<&[f64]> {
        (self.mult_min == 1).then(|| self.basis_min[0].as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle, make_path, make_star, Graph};
    use std::f64::consts::PI;

    fn values(g: &Graph) -> Vec<f64> {
        eig_symmetric(&g.adjacency())
            .unwrap()
            .into_iter()
            .map(|p| p.value)
            .collect()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn cycle4_spectrum() {
        assert_close(&values(&make_cycle(4).unwrap()), &[-2.0, 0.0, 0.0, 2.0], 1e-12);
    }

    #[test]
    fn star5_spectrum() {
        assert_close(
            &values(&make_star(5).unwrap()),
            &[-2.0, 0.0, 0.0, 0.0, 2.0],
            1e-12,
        );
    }

    #[test]
    fn cycle5_lambda_min() {
        let v = values(&make_cycle(5).unwrap());
        assert!((v[0] - 2.0 * (4.0 * PI / 5.0).cos()).abs() < 1e-12);
        assert!((v[0] + 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric() {
        let g = Graph::new(3, true, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(eig_symmetric(&g.adjacency()).is_err());
    }

    #[test]
    fn sign_convention() {
        let a = make_cycle(4).unwrap().adjacency();
        let basis = eigenspace(&a, -2.0, 1e-8).unwrap();
        assert_eq!(basis.len(), 1);
        assert_close(&basis[0], &[0.5, -0.5, 0.5, -0.5], 1e-12);
    }

    #[test]
    fn perron_cycle6() {
        let p = perron(&make_cycle(6).unwrap().adjacency()).unwrap();
        assert!((p.lambda_max - 2.0).abs() < 1e-12);
        assert_close(&p.right, &[1.0 / 6f64.sqrt(); 6], 1e-11);
    }

    #[test]
    fn perron_star5() {
        let p = perron(&make_star(5).unwrap().adjacency()).unwrap();
        assert!((p.lambda_max - 2.0).abs() < 1e-10);
    }

    #[test]
    fn perron_directed_three_cycle() {
        let g = Graph::new(3, true, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = perron(&g.adjacency()).unwrap();
        assert!((p.lambda_max - 1.0).abs() < 1e-12);
        assert_close(&p.right, &[1.0 / 3f64.sqrt(); 3], 1e-11);
        assert_close(&p.left, &[1.0 / 3f64.sqrt(); 3], 1e-11);
    }

    #[test]
    fn perron_directed_left_differs_from_right() {
        // 0 <-> 1 -> 2 -> 0: strongly connected but not balanced.
        let g = Graph::new(3, true, [(0, 1), (1, 0), (1, 2), (2, 0)]).unwrap();
        let a = g.adjacency();
        let p = perron(&a).unwrap();
        let av = a.mul_vec(&p.right);
        let atw = a.mul_vec_transposed(&p.left);
        for i in 0..3 {
            assert!((av[i] - p.lambda_max * p.right[i]).abs() < 1e-9);
            assert!((atw[i] - p.lambda_max * p.left[i]).abs() < 1e-9);
        }
        assert!((p.left[0] - p.right[0]).abs() > 1e-3);
    }

    #[test]
    fn perron_requires_connectivity() {
        let g = Graph::new(4, false, [(0, 1), (2, 3)]).unwrap();
        assert!(perron(&g.adjacency()).is_err());
        let dir_path = Graph::new(3, true, [(0, 1), (1, 2)]).unwrap();
        assert!(centrality(&dir_path.adjacency()).is_err());
    }

    #[test]
    fn centrality_star_ratio() {
        let c = centrality(&make_star(5).unwrap().adjacency()).unwrap();
        assert!((c[0] / c[1] - 2.0).abs() < 1e-10);
        assert!((c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn centrality_cycle_uniform() {
        let c = centrality(&make_cycle(7).unwrap().adjacency()).unwrap();
        assert_close(&c, &[1.0 / 7f64.sqrt(); 7], 1e-10);
    }

    #[test]
    fn centrality_matches_right_vector_when_undirected() {
        let a = make_path(6).unwrap().adjacency();
        let pairs = eig_symmetric(&a).unwrap();
        let top = &pairs.last().unwrap().vector;
        assert_close(&centrality(&a).unwrap(), top, 1e-9);
    }

    #[test]
    fn cycle5_min_eigenspace_is_two_dimensional() {
        let a = make_cycle(5).unwrap().adjacency();
        let s = SpectralSummary::compute(&a).unwrap();
        assert_eq!(s.mult_min, 2);
        assert!(s.min_vector().is_none());
        assert_eq!(eigenspace(&a, s.lambda_min, 1e-8).unwrap().len(), 2);
    }

    #[test]
    fn empty_eigenspace_far_from_spectrum() {
        let a = make_cycle(4).unwrap().adjacency();
        assert!(eigenspace(&a, 1.0, 1e-8).unwrap().is_empty());
    }

    #[test]
    fn summary_of_disconnected_has_no_centrality() {
        let g = Graph::new(4, false, [(0, 1), (2, 3)]).unwrap();
        let s = SpectralSummary::compute(&g.adjacency()).unwrap();
        assert!(s.centrality.is_none());
        assert_eq!(s.mult_max, 2);
    }

    #[test]
    fn jacobi_on_general_symmetric() {
        let m = [4.0, 1.0, 2.0, 1.0, 3.0, 0.5, 2.0, 0.5, 1.0];
        let pairs = jacobi_eigen(&m, 3).unwrap();
        for p in &pairs {
            for i in 0..3 {
                let av: f64 = (0..3).map(|k| m[i * 3 + k] * p.vector[k]).sum();
                assert!((av - p.value * p.vector[i]).abs() < 1e-12);
            }
        }
        let trace: f64 = pairs.iter().map(|p| p.value).sum();
        assert!((trace - 8.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let pairs = jacobi_eigen(&[0.0; 4], 2).unwrap();
        assert!(pairs.iter().all(|p| p.value == 0.0));
    }
}
