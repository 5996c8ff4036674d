//! Test-only helpers: seeded random data and independent reference solvers.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::Matrix;

pub struct Lcg(ChaCha8Rng);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }
}

pub fn random_matrix(rng: &mut Lcg, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.normal()).collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

/// Random orthogonal matrix from modified Gram-Schmidt on Gaussian columns.
pub fn random_orthogonal(rng: &mut Lcg, d: usize) -> Matrix {
    let g = random_matrix(rng, d, d);
    let mut q: Vec<Vec<f64>> = Vec::new();
    for j in 0..d {
        let mut v = g.column(j);
        for _ in 0..2 {
            for b in &q {
                let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = libm::sqrt(v.iter().map(|x| x * x).sum());
        v.iter_mut().for_each(|x| *x /= n);
        q.push(v);
    }
    Matrix::from_rows(&q).unwrap().transpose()
}

/// Eigenvalues of a symmetric matrix by the classical two-sided Jacobi
/// method (largest off-diagonal pivot each step). Unsorted.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let mut a = a.clone();
    for _ in 0..100 * n * n {
        let (mut p, mut q, mut big) = (0, 1, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                if a[(i, j)].abs() > big {
                    big = a[(i, j)].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if big <= 1e-15 * a.frobenius_norm() {
            break;
        }
        let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
        let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
        let c = 1.0 / libm::sqrt(t * t + 1.0);
        let s = t * c;
        for k in 0..n {
            let (akp, akq) = (a[(k, p)], a[(k, q)]);
            a[(k, p)] = c * akp - s * akq;
            a[(k, q)] = s * akp + c * akq;
        }
        for k in 0..n {
            let (apk, aqk) = (a[(p, k)], a[(q, k)]);
            a[(p, k)] = c * apk - s * aqk;
            a[(q, k)] = s * apk + c * aqk;
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}
