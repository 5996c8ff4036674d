//! Vocabularies and embedding matrices.
//!
//! Tokens are compared byte-for-byte. No Unicode normalization or case
//! folding is applied, so tone-marked and unmarked spellings stay distinct.

use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Returns true for tokens that may appear in a vocabulary: non-empty and
/// free of ASCII whitespace. Other Unicode code points (including non-ASCII
/// spaces found in some pretrained files) are kept as part of the token.
pub fn is_valid_token(token: &str) -> bool {
    !token.is_empty() && !token.bytes().any(|b| b.is_ascii_whitespace())
}

/// Ordered token list with a token → row index.
#[derive(Debug, Clone, Default)]
pub struct Vocab {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::EmptyToken { index: i });
            }
            if !is_valid_token(t) {
                return Err(Error::InvalidToken { token: t.clone() });
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::DuplicateToken { token: t.clone() });
            }
        }
        Ok(Vocab { tokens, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

impl PartialEq for Vocab {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens
    }
}

/// A vocabulary together with one row vector per token.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    vocab: Vocab,
    matrix: Matrix,
}

impl Embedding {
    /// Checks that the matrix is non-empty, finite and has one row per token.
    pub fn new(vocab: Vocab, matrix: Matrix) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::EmptyMatrix { rows: matrix.rows(), cols: matrix.cols() });
        }
        if vocab.len() != matrix.rows() {
            return Err(Error::DimensionMismatch { expected: vocab.len(), found: matrix.rows() });
        }
        if let Some(pos) = matrix.as_slice().iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteValue { row: pos / matrix.cols(), col: pos % matrix.cols() });
        }
        Ok(Embedding { vocab, matrix })
    }

    /// Convenience constructor from `(token, vector)` pairs.
    pub fn from_pairs<S: Into<String>, V: AsRef<[f64]>>(pairs: impl IntoIterator<Item = (S, V)>) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (t, v) in pairs {
            tokens.push(t.into());
            rows.push(v.as_ref().to_vec());
        }
        let matrix = Matrix::from_rows(&rows)?;
        Embedding::new(Vocab::new(tokens)?, matrix)
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    /// Vector of `token`, if present.
    pub fn vector(&self, token: &str) -> Option<&[f64]> {
        self.vocab.get(token).map(|i| self.matrix.row(i))
    }

    /// Replaces the matrix, keeping the vocabulary. Shape must be unchanged.
    pub fn with_matrix(&self, matrix: Matrix) -> Result<Self> {
        if matrix.shape() != self.matrix.shape() {
            return Err(Error::DimensionMismatch { expected: self.matrix.rows(), found: matrix.rows() });
        }
        Embedding::new(self.vocab.clone(), matrix)
    }

    pub fn into_parts(self) -> (Vocab, Matrix) {
        (self.vocab, self.matrix)
    }
}
