//! Numerical core for supervised cross-lingual word-embedding alignment.
//!
//! Two monolingual embedding spaces are aligned with an orthogonal map
//! fitted in closed form on bilingual dictionary anchors, words are
//! translated by cosine nearest-neighbor search in the aligned space, and
//! translation quality is scored as precision@k. PCA and exact t-SNE
//! projections support plotting the aligned spaces.
//!
//! The crate is `no_std` and needs only `alloc`; file formats and the CLI
//! live in the `lexalign` crate.

#![no_std]

extern crate alloc;

pub mod dictionary;
pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod matrix;
pub mod preprocess;
pub mod procrustes;
pub mod projection;
pub mod retrieval;
pub mod svd;

#[cfg(test)]
mod testing;

pub use dictionary::{build_anchors, AnchorMatrices, BilingualDictionary, CoverageStats};
pub use embedding::{Embedding, Vocab};
pub use error::{Error, Result};
pub use evaluation::{precision_at_k, EvalMeta, EvalReport, QueryOutcome};
pub use matrix::Matrix;
pub use preprocess::{apply_mode, center, l2_normalize, PreprocessMode};
pub use procrustes::{apply_map, solve_procrustes, AlignmentMap, MapMeta};
pub use projection::{pca_2d, tsne_2d, Lang, PointLabel, Projection2D, ProjectionMethod, TsneConfig};
pub use retrieval::{batch_translate, translate, QueryResult, Retriever, TranslationCandidate};
pub use svd::{svd_square, SvdResult};
