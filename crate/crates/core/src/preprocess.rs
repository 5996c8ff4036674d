//! Mean centering and row L2 normalization applied before alignment.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::matrix::{norm, Matrix};

/// Rows with a norm below this are treated as zero vectors.
pub const ZERO_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PreprocessMode {
    #[default]
    None,
    /// Subtract the per-dimension mean, then scale every row to unit length.
    CenterNormalize,
}

impl PreprocessMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PreprocessMode::None => "none",
            PreprocessMode::CenterNormalize => "center_normalize",
        }
    }

    /// Short tag used in condition names (`wiki-norm`, `wiki-unnorm`).
    pub fn condition_tag(self) -> &'static str {
        match self {
            PreprocessMode::None => "unnorm",
            PreprocessMode::CenterNormalize => "norm",
        }
    }
}

impl fmt::Display for PreprocessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PreprocessMode {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "none" => Ok(PreprocessMode::None),
            "center_normalize" | "center-normalize" => Ok(PreprocessMode::CenterNormalize),
            _ => Err(()),
        }
    }
}

/// Per-column means, accumulated sequentially in row order.
pub fn column_means(matrix: &Matrix) -> Vec<f64> {
    let mut sums = vec![0.0; matrix.cols()];
    for row in matrix.row_iter() {
        for (s, x) in sums.iter_mut().zip(row) {
            *s += x;
        }
    }
    let n = matrix.rows().max(1) as f64;
    sums.iter_mut().for_each(|s| *s /= n);
    sums
}

/// Subtracts each column's mean.
pub fn center(matrix: &Matrix) -> Matrix {
    let means = column_means(matrix);
    let mut out = matrix.clone();
    for i in 0..out.rows() {
        for (x, m) in out.row_mut(i).iter_mut().zip(&means) {
            *x -= m;
        }
    }
    out
}

/// Scales every row to unit Euclidean norm.
///
/// Fails with [`Error::ZeroVectorRow`] listing every row whose norm is below
/// [`ZERO_NORM`].
pub fn l2_normalize(matrix: &Matrix) -> Result<Matrix> {
    let norms: Vec<f64> = matrix.row_iter().map(norm).collect();
    let zero: Vec<usize> = norms.iter().enumerate().filter(|(_, &n)| n < ZERO_NORM).map(|(i, _)| i).collect();
    if !zero.is_empty() {
        return Err(Error::ZeroVectorRow { indices: zero });
    }
    let mut out = matrix.clone();
    for (i, n) in norms.into_iter().enumerate() {
        out.row_mut(i).iter_mut().for_each(|x| *x /= n);
    }
    Ok(out)
}

pub fn apply_mode(embedding: &Embedding, mode: PreprocessMode) -> Result<Embedding> {
    match mode {
        PreprocessMode::None => Ok(embedding.clone()),
        PreprocessMode::CenterNormalize => {
            let m = l2_normalize(&center(embedding.matrix()))?;
            embedding.with_matrix(m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn center_examples() {
        assert_eq!(center(&m(&[&[1.0, 1.0], &[3.0, 3.0]])), m(&[&[-1.0, -1.0], &[1.0, 1.0]]));
        assert_eq!(center(&m(&[&[5.0, 7.0]])), m(&[&[0.0, 0.0]]));
    }

    #[test]
    fn normalize_examples() {
        let r = l2_normalize(&m(&[&[3.0, 4.0]])).unwrap();
        assert!((r[(0, 0)] - 0.6).abs() < 1e-15 && (r[(0, 1)] - 0.8).abs() < 1e-15);
        let id = Matrix::identity(3);
        assert_eq!(l2_normalize(&id).unwrap(), id);
        assert_eq!(l2_normalize(&m(&[&[1.0, 0.0], &[0.0, 0.0]])), Err(Error::ZeroVectorRow { indices: vec![1] }));
    }

    #[test]
    fn apply_mode_examples() {
        let e = Embedding::from_pairs([("a", [1.0, 0.0]), ("b", [0.0, 1.0])]).unwrap();
        assert_eq!(apply_mode(&e, PreprocessMode::None).unwrap(), e);
        let n = apply_mode(&e, PreprocessMode::CenterNormalize).unwrap();
        let expect = m(&[&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], &[-FRAC_1_SQRT_2, FRAC_1_SQRT_2]]);
        assert!(n.matrix().max_abs_diff(&expect) < 1e-15);
        assert_eq!(n.vocab(), e.vocab());
    }

    #[test]
    fn row_equal_to_mean_is_rejected() {
        let e = Embedding::from_pairs([("a", [1.0, 1.0]), ("b", [2.0, 2.0]), ("c", [3.0, 3.0])]).unwrap();
        assert_eq!(apply_mode(&e, PreprocessMode::CenterNormalize).unwrap_err(), Error::ZeroVectorRow { indices: vec![1] });
    }

    #[test]
    fn mode_parses_both_spellings() {
        assert_eq!("center-normalize".parse(), Ok(PreprocessMode::CenterNormalize));
        assert_eq!("center_normalize".parse(), Ok(PreprocessMode::CenterNormalize));
        assert_eq!("none".parse(), Ok(PreprocessMode::None));
        assert!("norm".parse::<PreprocessMode>().is_err());
    }
}
