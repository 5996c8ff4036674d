//! Bilingual dictionaries and anchor matrices.

use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::embedding::{is_valid_token, Embedding};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Ordered `(source, target)` pairs. A source word may have several
/// translations, but each exact pair occurs once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BilingualDictionary {
    pairs: Vec<(String, String)>,
}

impl BilingualDictionary {
    /// Builds a dictionary, dropping exact duplicate pairs (first occurrence
    /// wins). Returns the dictionary and the number of duplicates removed.
    pub fn from_pairs<S: Into<String>, T: Into<String>>(pairs: impl IntoIterator<Item = (S, T)>) -> Result<(Self, usize)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut duplicates = 0;
        for (s, t) in pairs {
            let (s, t) = (s.into(), t.into());
            for tok in [&s, &t] {
                if tok.is_empty() {
                    return Err(Error::EmptyToken { index: out.len() + duplicates });
                }
                if !is_valid_token(tok) {
                    return Err(Error::InvalidToken { token: tok.clone() });
                }
            }
            if seen.insert((s.clone(), t.clone())) {
                out.push((s, t));
            } else {
                duplicates += 1;
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        Ok((BilingualDictionary { pairs: out }, duplicates))
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Source words with their translations, in order of first appearance.
    pub fn grouped(&self) -> Vec<(&str, Vec<&str>)> {
        let mut order: Vec<(&str, Vec<&str>)> = Vec::new();
        let mut slot = hashbrown::HashMap::new();
        for (s, t) in &self.pairs {
            let idx = *slot.entry(s.as_str()).or_insert_with(|| {
                order.push((s.as_str(), Vec::new()));
                order.len() - 1
            });
            order[idx].1.push(t.as_str());
        }
        order
    }
}

/// How many dictionary pairs survived vocabulary filtering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverageStats {
    pub total_pairs: usize,
    pub retained: usize,
    /// Pairs whose source token is missing (counted here even if the target
    /// is missing too).
    pub dropped_src_oov: usize,
    pub dropped_tgt_oov: usize,
}

/// Anchor vectors stored as columns: `x` and `y` are both `d × m`, and
/// column `j` of each comes from the same dictionary pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorMatrices {
    pub x: Matrix,
    pub y: Matrix,
    /// Indices into the dictionary of the retained pairs, one per column.
    pub pair_indices: Vec<usize>,
}

impl AnchorMatrices {
    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn count(&self) -> usize {
        self.x.cols()
    }

    /// Builds anchors from explicit `d × m` matrices.
    pub fn from_columns(x: Matrix, y: Matrix) -> Result<Self> {
        if x.shape() != y.shape() {
            return Err(Error::DimensionMismatch { expected: x.cols(), found: y.cols() });
        }
        if x.cols() == 0 || x.rows() == 0 {
            return Err(Error::NoAnchorsRetained { total: 0 });
        }
        let pair_indices = (0..x.cols()).collect();
        Ok(AnchorMatrices { x, y, pair_indices })
    }
}

pub fn build_anchors(dict: &BilingualDictionary, src: &Embedding, tgt: &Embedding) -> Result<(AnchorMatrices, CoverageStats)> {
    if src.dim() != tgt.dim() {
        return Err(Error::DimensionMismatch { expected: src.dim(), found: tgt.dim() });
    }
    if dict.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let mut stats = CoverageStats { total_pairs: dict.len(), ..Default::default() };
    let mut xs: Vec<&[f64]> = Vec::new();
    let mut ys: Vec<&[f64]> = Vec::new();
    let mut pair_indices = Vec::new();
    for (i, (s, t)) in dict.pairs().iter().enumerate() {
        match (src.vector(s), tgt.vector(t)) {
            (None, _) => stats.dropped_src_oov += 1,
            (Some(_), None) => stats.dropped_tgt_oov += 1,
            (Some(x), Some(y)) => {
                xs.push(x);
                ys.push(y);
                pair_indices.push(i);
            }
        }
    }
    stats.retained = xs.len();
    if xs.is_empty() {
        return Err(Error::NoAnchorsRetained { total: stats.total_pairs });
    }
    // rows-as-anchors, then transpose to the column layout
    let x = Matrix::from_rows(&xs)?.transpose();
    let y = Matrix::from_rows(&ys)?.transpose();
    Ok((AnchorMatrices { x, y, pair_indices }, stats))
}
