//! Exact linear algebra over ℚ(φ): Gaussian elimination, primitivity and
//! Perron eigenvectors of non-negative matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::golden::{GoldenRational, PHI_F64};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix has a negative entry")]
    Negative,
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("Perron eigenvalue {0} is not in Q(phi)")]
    EigenvalueNotInField(String),
    #[error("Perron eigenspace has dimension {0}")]
    DegenerateEigenspace(usize),
}

pub type Matrix = Vec<Vec<GoldenRational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// A basis of the right nullspace.
pub fn nullspace(m: &Matrix) -> Vec<Vec<GoldenRational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GoldenRational::zero(); cols];
            v[f] = GoldenRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][f];
            }
            v
        })
        .collect()
}

/// Primitivity: some power of the zero pattern is strictly positive.
/// Wielandt's bound `(n−1)² + 1` limits the search.
pub fn is_primitive(m: &Matrix) -> bool {
    let n = m.len();
    let pattern: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|x| x.signum().is_gt()).collect()).collect();
    let mut power = pattern.clone();
    for _ in 0..=(n.saturating_sub(1)).pow(2) {
        if power.iter().all(|r| r.iter().all(|&b| b)) {
            return true;
        }
        power = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| power[i][k] && pattern[k][j])).collect())
            .collect();
    }
    false
}

fn to_f64_matrix(m: &Matrix) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(GoldenRational::to_f64).collect()).collect()
}

fn power_iteration(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * v[j]).sum()).collect();
        let s: f64 = w.iter().sum();
        lambda = s / v.iter().sum::<f64>();
        v = w.into_iter().map(|x| x / s).collect();
    }
    lambda
}

fn singular(m: &Matrix, lambda: &GoldenRational) -> bool {
    let mut a = m.clone();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = &row[i] - lambda;
    }
    rref(&mut a).len() < m.len()
}

/// Recovers the exact eigenvalue near `approx` as `(a + bφ)/d` with small
/// integers, confirmed by an exact singularity test.
fn exact_eigenvalue(m: &Matrix, approx: f64) -> Option<GoldenRational> {
    for d in 1..=60i64 {
        for b in -400..=400i64 {
            let a = (approx * d as f64 - b as f64 * PHI_F64).round();
            if ((a + b as f64 * PHI_F64) / d as f64 - approx).abs() > 1e-7 * approx.abs().max(1.0) {
                continue;
            }
            let q = |x: i64| BigRational::new(BigInt::from(x), BigInt::from(d));
            let cand = GoldenRational::new(q(a as i64), q(b));
            if singular(m, &cand) {
                return Some(cand);
            }
        }
    }
    None
}

/// The Perron eigenvalue and its right eigenvector normalized to sum 1.
pub fn perron_vector(m: &Matrix) -> Result<(GoldenRational, Vec<GoldenRational>), LinalgError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LinalgError::NotSquare);
    }
    if m.iter().flatten().any(|x| x.signum().is_lt()) {
        return Err(LinalgError::Negative);
    }
    if !is_primitive(m) {
        return Err(LinalgError::NotPrimitive);
    }
    let approx = power_iteration(&to_f64_matrix(m));
    let lambda = exact_eigenvalue(m, approx).ok_or_else(|| LinalgError::EigenvalueNotInField(format!("{approx:.9}")))?;
    let mut a = m.clone();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = &row[i] - &lambda;
    }
    let basis = nullspace(&a);
    if basis.len() != 1 {
        return Err(LinalgError::DegenerateEigenspace(basis.len()));
    }
    let v = &basis[0];
    let total = v.iter().fold(GoldenRational::zero(), |acc, x| &acc + x);
    let inv = total.inverse().expect("Perron vector has nonzero sum");
    Ok((lambda, v.iter().map(|x| x * &inv).collect()))
}

/// Float view of a ℚ(φ) vector, for reporting.
pub fn approx(v: &[GoldenRational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GoldenRational {
        GoldenRational::from_ints(a, b)
    }

    #[test]
    fn fibonacci_matrix() {
        let m = vec![vec![g(1, 0), g(1, 0)], vec![g(1, 0), g(0, 0)]];
        let (lambda, v) = perron_vector(&m).unwrap();
        assert_eq!(lambda, GoldenRational::phi());
        // v ∝ (φ, 1), normalized: (φ/φ², 1/φ²)
        assert_eq!(v[0], GoldenRational::phi().pow(-1).unwrap());
        assert_eq!(v[1], GoldenRational::phi().pow(-2).unwrap());
    }

    #[test]
    fn rejects_reducible() {
        let m = vec![vec![g(1, 0), g(1, 0)], vec![g(0, 0), g(1, 0)]];
        assert_eq!(perron_vector(&m), Err(LinalgError::NotPrimitive));
        let periodic = vec![vec![g(0, 0), g(1, 0)], vec![g(1, 0), g(0, 0)]];
        assert!(!is_primitive(&periodic));
    }

    #[test]
    fn rational_eigenvalue_with_denominator() {
        // [[1/2, 1/2], [1/2, 1/2]] has eigenvalue 1
        let h = GoldenRational::from_fractions(1, 2, 0, 1);
        let m = vec![vec![h.clone(), h.clone()], vec![h.clone(), h]];
        let (lambda, v) = perron_vector(&m).unwrap();
        assert_eq!(lambda, GoldenRational::one());
        assert_eq!(v, vec![GoldenRational::from_fractions(1, 2, 0, 1); 2]);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![g(1, 0), g(0, 1)], vec![g(0, 1), g(1, 1)]];
        // second row is φ × first row
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!((&(&m[0][0] * &v[0]) + &(&m[0][1] * &v[1])).is_zero());
    }
}
