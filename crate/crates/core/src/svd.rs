//! Singular value decomposition of square matrices by cyclic one-sided
//! (Hestenes) Jacobi rotations.
//!
//! The input's columns are orthogonalized pairwise by plane rotations that
//! are accumulated into `V`. Once all columns are mutually orthogonal the
//! column norms are the singular values and the normalized columns form `U`.
//! Outputs are canonicalized so that the same input always yields the same
//! bits: singular values sorted non-increasing (stable on ties), and the
//! largest-magnitude entry of every `U` column made nonnegative.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{dot, norm, Matrix};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_SWEEPS: usize = 60;

/// `M = U · diag(sigma) · Vt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub vt: Matrix,
    /// Number of Jacobi sweeps performed, including the final check sweep.
    pub sweeps: usize,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Matrix {
        let us = self.u.matmul(&Matrix::diagonal(&self.sigma)).expect("square");
        us.matmul(&self.vt).expect("square")
    }

    /// `U · Vt`, the orthogonal polar factor used for Procrustes.
    pub fn orthogonal_factor(&self) -> Matrix {
        self.u.matmul(&self.vt).expect("square")
    }
}

/// [`svd_square_with`] with the default tolerance and sweep limit.
pub fn svd_square(m: &Matrix) -> Result<SvdResult> {
    svd_square_with(m, DEFAULT_TOL, DEFAULT_MAX_SWEEPS)
}

/// Decomposes a square matrix.
///
/// Convergence is declared once every column pair satisfies
/// `|a_p · a_q| ≤ tol · |a_p| |a_q|`. The tolerance is floored at `d · ε`
/// since dot products of length `d` cannot be resolved more finely.
pub fn svd_square_with(m: &Matrix, tol: f64, max_sweeps: usize) -> Result<SvdResult> {
    let d = m.rows();
    if d != m.cols() {
        return Err(Error::DimensionMismatch { expected: d, found: m.cols() });
    }
    if d == 0 {
        return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
    }
    if let Some(pos) = m.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteValue { row: pos / d, col: pos % d });
    }
    let tol = tol.max(d as f64 * f64::EPSILON);

    // cols[j] is column j of the working matrix; v[j] is column j of V.
    let mut cols = m.transpose();
    let mut v = Matrix::identity(d);
    let negligible = f64::EPSILON * m.frobenius_norm();

    let mut sweeps = 0;
    loop {
        if sweeps == max_sweeps {
            let residual = off_diagonal_measure(&cols, negligible);
            return Err(Error::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..d.saturating_sub(1) {
            for q in p + 1..d {
                let alpha = dot(cols.row(p), cols.row(p));
                let beta = dot(cols.row(q), cols.row(q));
                let ap = libm::sqrt(alpha);
                let aq = libm::sqrt(beta);
                if ap <= negligible || aq <= negligible {
                    continue;
                }
                let gamma = dot(cols.row(p), cols.row(q));
                if gamma.abs() <= tol * ap * aq {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate_rows(&mut cols, p, q, c, s);
                rotate_rows(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let raw_sigma: Vec<f64> = cols.row_iter().map(norm).collect();
    let mut order: Vec<usize> = (0..d).collect();
    // stable, so equal singular values keep their column order
    order.sort_by(|&a, &b| raw_sigma[b].total_cmp(&raw_sigma[a]));

    let sigma: Vec<f64> = order.iter().map(|&j| raw_sigma[j]).collect();
    // Rows of `u_cols` and `vt` are the columns of U and V respectively.
    let mut u_cols = Matrix::zeros(d, d);
    let mut vt = Matrix::zeros(d, d);
    let mut rank = 0;
    for (k, &j) in order.iter().enumerate() {
        vt.row_mut(k).copy_from_slice(v.row(j));
        if sigma[k] > negligible {
            let s = sigma[k];
            for (u, a) in u_cols.row_mut(k).iter_mut().zip(cols.row(j)) {
                *u = a / s;
            }
            rank += 1;
        }
    }
    complete_basis(&mut u_cols, rank);

    for k in 0..d {
        let lead = u_cols.row(k).iter().enumerate().fold(0, |best, (i, x)| {
            if x.abs() > u_cols.row(k)[best].abs() {
                i
            } else {
                best
            }
        });
        if u_cols.row(k)[lead] < 0.0 {
            u_cols.row_mut(k).iter_mut().for_each(|x| *x = -*x);
            vt.row_mut(k).iter_mut().for_each(|x| *x = -*x);
        }
    }

    Ok(SvdResult { u: u_cols.transpose(), sigma, vt, sweeps })
}

fn rotate_rows(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let cols = m.cols();
    let data = m.as_mut_slice();
    let (head, tail) = data.split_at_mut(q * cols);
    let rp = &mut head[p * cols..(p + 1) * cols];
    let rq = &mut tail[..cols];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

fn off_diagonal_measure(cols: &Matrix, negligible: f64) -> f64 {
    let d = cols.rows();
    let mut worst: f64 = 0.0;
    for p in 0..d {
        for q in p + 1..d {
            let ap = norm(cols.row(p));
            let aq = norm(cols.row(q));
            if ap > negligible && aq > negligible {
                worst = worst.max(dot(cols.row(p), cols.row(q)).abs() / (ap * aq));
            }
        }
    }
    worst
}

/// Fills rows `rank..d` of `basis` with unit vectors orthogonal to rows
/// `0..rank` and to each other, drawn from the standard basis by
/// Gram-Schmidt (two passes).
fn complete_basis(basis: &mut Matrix, rank: usize) {
    let d = basis.rows();
    // Squared residuals of e_0..e_{d-1} sum to d - filled ≥ 1, so some
    // candidate always clears 1/sqrt(2d).
    let threshold = 1.0 / libm::sqrt(2.0 * d as f64);
    let mut candidate = 0;
    for k in rank..d {
        loop {
            assert!(candidate < d, "basis completion exhausted the standard basis");
            let mut w = vec![0.0; d];
            w[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for i in 0..k {
                    let proj = dot(&w, basis.row(i));
                    for (wi, bi) in w.iter_mut().zip(basis.row(i)) {
                        *wi -= proj * bi;
                    }
                }
            }
            let n = norm(&w);
            if n > threshold {
                for (b, wi) in basis.row_mut(k).iter_mut().zip(&w) {
                    *b = wi / n;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{random_matrix, symmetric_eigenvalues, Lcg};

    fn check_invariants(m: &Matrix, r: &SvdResult) {
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        assert!(r.reconstruct().max_abs_diff(m) <= 1e-10 * scale.max(1.0));
        assert!(r.u.orthogonality_error() <= 1e-10, "U not orthogonal");
        assert!(r.vt.transpose().orthogonality_error() <= 1e-10, "V not orthogonal");
        assert!(r.sigma.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.sigma.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn identity() {
        let m = Matrix::identity(3);
        let r = svd_square(&m).unwrap();
        assert_eq!(r.sigma, vec![1.0, 1.0, 1.0]);
        assert!(r.orthogonal_factor().max_abs_diff(&Matrix::identity(3)) < 1e-15);
    }

    #[test]
    fn diagonal_is_fixed_point() {
        let m = Matrix::diagonal(&[3.0, 2.0]);
        let r = svd_square(&m).unwrap();
        assert_eq!(r.sigma, vec![3.0, 2.0]);
        assert_eq!(r.u, Matrix::identity(2));
        assert_eq!(r.vt, Matrix::identity(2));
    }

    #[test]
    fn unsorted_diagonal_gets_permuted() {
        let m = Matrix::diagonal(&[1.0, -5.0, 2.0]);
        let r = svd_square(&m).unwrap();
        assert_eq!(r.sigma, vec![5.0, 2.0, 1.0]);
        check_invariants(&m, &r);
    }

    #[test]
    fn zero_and_rank_deficient() {
        let z = Matrix::zeros(3, 3);
        let r = svd_square(&z).unwrap();
        assert_eq!(r.sigma, vec![0.0; 3]);
        check_invariants(&z, &r);

        let rank1 = Matrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [-1.0, -2.0, -3.0]]).unwrap();
        let r = svd_square(&rank1).unwrap();
        check_invariants(&rank1, &r);
        assert!(r.sigma[1] < 1e-12 * r.sigma[0]);
    }

    #[test]
    fn one_by_one() {
        let r = svd_square(&Matrix::from_vec(1, 1, vec![-4.0]).unwrap()).unwrap();
        assert_eq!(r.sigma, vec![4.0]);
        assert_eq!(r.u.as_slice(), &[1.0]);
        assert_eq!(r.vt.as_slice(), &[-1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(svd_square(&Matrix::zeros(2, 3)), Err(Error::DimensionMismatch { .. })));
        let mut m = Matrix::identity(2);
        m[(1, 0)] = f64::INFINITY;
        assert!(matches!(svd_square(&m), Err(Error::NonFiniteValue { row: 1, col: 0 })));
    }

    #[test]
    fn sweep_limit_reports_residual() {
        let mut rng = Lcg::new(3);
        let m = random_matrix(&mut rng, 8, 8);
        match svd_square_with(&m, 1e-12, 1) {
            Err(Error::NoConvergence { sweeps: 1, residual }) => assert!(residual > 1e-12),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn singular_values_match_eigen_oracle() {
        let mut rng = Lcg::new(11);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 10, 10);
            let r = svd_square(&m).unwrap();
            check_invariants(&m, &r);
            let gram = m.transpose().matmul(&m).unwrap();
            let mut eig = symmetric_eigenvalues(&gram);
            eig.sort_by(|a, b| b.total_cmp(a));
            for (s, l) in r.sigma.iter().zip(&eig) {
                assert!((s - libm::sqrt(l.max(0.0))).abs() < 1e-8, "{s} vs {l}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let mut rng = Lcg::new(5);
        let m = random_matrix(&mut rng, 12, 12);
        assert_eq!(svd_square(&m).unwrap(), svd_square(&m).unwrap());
    }
}
