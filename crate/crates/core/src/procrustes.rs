//! Closed-form orthogonal Procrustes alignment.
//!
//! For anchors `X`, `Y` (both `d × m`, paired by column), the orthogonal `W`
//! minimizing `‖W·X − Y‖_F` is `U·Vᵀ` where `U·Σ·Vᵀ = SVD(Y·Xᵀ)`. Reflections
//! are allowed (`det W = −1` is not corrected) and no scale factor is fitted.

use alloc::string::String;

use crate::dictionary::AnchorMatrices;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::preprocess::PreprocessMode;
use crate::svd::{svd_square, SvdResult};

/// Maximum tolerated `max |(WᵀW − I)ᵢⱼ|` for an alignment map.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// `M = Y·Xᵀ` is flagged rank-deficient when `σ_min < RANK_TOL · σ_max`.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MapMeta {
    pub mode: PreprocessMode,
    pub anchors: usize,
    pub source_id: String,
    pub target_id: String,
    /// Set when the cross-covariance was rank-deficient; `W` is then one
    /// canonical choice among several optimal maps.
    pub degenerate: bool,
}

/// A `d × d` orthogonal matrix mapping source vectors into the target space.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentMap {
    w: Matrix,
    pub meta: MapMeta,
}

impl AlignmentMap {
    /// Wraps `w` after checking that it is square, finite and orthogonal.
    pub fn new(w: Matrix, meta: MapMeta) -> Result<Self> {
        if w.rows() != w.cols() {
            return Err(Error::DimensionMismatch { expected: w.rows(), found: w.cols() });
        }
        if w.rows() == 0 {
            return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
        }
        if let Some(pos) = w.as_slice().iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteValue { row: pos / w.cols(), col: pos % w.cols() });
        }
        let defect = w.orthogonality_error();
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { defect });
        }
        Ok(AlignmentMap { w, meta })
    }

    pub fn identity(d: usize) -> Self {
        AlignmentMap { w: Matrix::identity(d), meta: MapMeta::default() }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    /// `W · x`.
    pub fn map_vector(&self, x: &[f64]) -> Result<alloc::vec::Vec<f64>> {
        self.w.mul_vec(x)
    }
}

/// Solves for `W` and returns it together with the SVD of `Y·Xᵀ`.
pub fn solve_procrustes_with_svd(anchors: &AnchorMatrices) -> Result<(AlignmentMap, SvdResult)> {
    if anchors.x.shape() != anchors.y.shape() {
        return Err(Error::DimensionMismatch { expected: anchors.x.rows(), found: anchors.y.rows() });
    }
    let cross = anchors.y.matmul_transpose(&anchors.x)?;
    let svd = svd_square(&cross)?;
    let w = svd.orthogonal_factor();
    let d = svd.sigma.len();
    let degenerate = !(svd.sigma[d - 1] >= RANK_TOL * svd.sigma[0]) || svd.sigma[0] == 0.0;
    let meta = MapMeta { anchors: anchors.count(), degenerate, ..Default::default() };
    let map = AlignmentMap::new(w, meta)?;
    Ok((map, svd))
}

pub fn solve_procrustes(anchors: &AnchorMatrices) -> Result<AlignmentMap> {
    solve_procrustes_with_svd(anchors).map(|(m, _)| m)
}

/// Maps every row of `embedding` through `W`.
pub fn apply_map(map: &AlignmentMap, embedding: &Embedding) -> Result<Embedding> {
    if embedding.dim() != map.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim(), found: embedding.dim() });
    }
    let mapped = embedding.matrix().matmul_transpose(&map.w)?;
    embedding.with_matrix(mapped)
}

/// `‖W·X − Y‖_F` for anchor columns.
pub fn residual(w: &Matrix, anchors: &AnchorMatrices) -> f64 {
    w.matmul(&anchors.x).expect("shape").sub(&anchors.y).expect("shape").frobenius_norm()
}
