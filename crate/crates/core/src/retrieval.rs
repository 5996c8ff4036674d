//! Exact cosine nearest-neighbor translation.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::matrix::{dot, norm};
use crate::preprocess::ZERO_NORM;
use crate::procrustes::AlignmentMap;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TranslationCandidate {
    pub token: String,
    /// Row of the candidate in the target embedding.
    pub index: usize,
    /// Cosine similarity, clamped to `[-1, 1]`.
    pub score: f64,
    /// 1-based.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryResult {
    Oov,
    Candidates(Vec<TranslationCandidate>),
}

/// Better-first order: higher score, then lower target index.
#[inline]
fn better(a: (f64, usize), b: (f64, usize)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
}

/// Brute-force scanner over a target embedding with cached row norms.
#[derive(Debug, Clone)]
pub struct Retriever<'a> {
    target: &'a Embedding,
    norms: Vec<f64>,
}

impl<'a> Retriever<'a> {
    pub fn new(target: &'a Embedding) -> Self {
        let norms = target.matrix().row_iter().map(norm).collect();
        Retriever { target, norms }
    }

    pub fn target(&self) -> &Embedding {
        self.target
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidK);
        }
        if k > self.target.len() {
            return Err(Error::KTooLarge { k, max: self.target.len() });
        }
        Ok(())
    }

    /// Cosine similarity of `v` against every target row, in row order.
    /// Zero-norm rows and zero queries score 0.
    pub fn scores(&self, v: &[f64]) -> Vec<f64> {
        let qn = norm(v);
        self.target
            .matrix()
            .row_iter()
            .zip(&self.norms)
            .map(|(row, &tn)| {
                if qn < ZERO_NORM || tn < ZERO_NORM {
                    0.0
                } else {
                    (dot(v, row) / qn / tn).clamp(-1.0, 1.0)
                }
            })
            .collect()
    }

    /// Top `k` target rows for an already-mapped vector.
    pub fn nearest(&self, v: &[f64], k: usize) -> Result<Vec<TranslationCandidate>> {
        self.check_k(k)?;
        if v.len() != self.target.dim() {
            return Err(Error::DimensionMismatch { expected: self.target.dim(), found: v.len() });
        }
        let scores = self.scores(v);
        // sorted buffer of the best k seen so far
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        for (i, &s) in scores.iter().enumerate() {
            if best.len() == k && better((s, i), best[k - 1]) != Ordering::Less {
                continue;
            }
            let pos = best.partition_point(|&b| better(b, (s, i)) == Ordering::Less);
            best.insert(pos, (s, i));
            best.truncate(k);
        }
        Ok(best
            .into_iter()
            .enumerate()
            .map(|(r, (score, index))| TranslationCandidate {
                token: self.target.vocab().token(index).into(),
                index,
                score,
                rank: r + 1,
            })
            .collect())
    }

    pub fn translate(&self, query: &str, src: &Embedding, map: &AlignmentMap, k: usize) -> Result<Vec<TranslationCandidate>> {
        self.check_k(k)?;
        let x = src.vector(query).ok_or_else(|| Error::QueryOov { query: query.into() })?;
        let mapped = map.map_vector(x)?;
        self.nearest(&mapped, k)
    }
}

pub fn translate(query: &str, src: &Embedding, tgt: &Embedding, map: &AlignmentMap, k: usize) -> Result<Vec<TranslationCandidate>> {
    Retriever::new(tgt).translate(query, src, map, k)
}

/// Translates each query; out-of-vocabulary queries yield [`QueryResult::Oov`].
pub fn batch_translate<S: AsRef<str>>(
    queries: &[S],
    src: &Embedding,
    tgt: &Embedding,
    map: &AlignmentMap,
    k: usize,
) -> Result<Vec<QueryResult>> {
    let retriever = Retriever::new(tgt);
    retriever.check_k(k)?;
    queries
        .iter()
        .map(|q| match retriever.translate(q.as_ref(), src, map, k) {
            Ok(c) => Ok(QueryResult::Candidates(c)),
            Err(Error::QueryOov { .. }) => Ok(QueryResult::Oov),
            Err(e) => Err(e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{random_matrix, random_orthogonal, Lcg};
    use crate::embedding::Vocab;
    use crate::procrustes::{apply_map, MapMeta};
    use alloc::format;

    fn emb(rows: &[&[f64]]) -> Embedding {
        Embedding::from_pairs(rows.iter().enumerate().map(|(i, r)| (format!("w{i}"), r.to_vec()))).unwrap()
    }

    fn random_emb(rng: &mut Lcg, n: usize, d: usize, prefix: &str) -> Embedding {
        let tokens = (0..n).map(|i| format!("{prefix}{i}")).collect();
        Embedding::new(Vocab::new(tokens).unwrap(), random_matrix(rng, n, d)).unwrap()
    }

    #[test]
    fn self_retrieval() {
        let e = emb(&[&[1.0, 2.0], &[-1.0, 0.5], &[0.3, 0.3]]);
        let c = translate("w0", &e, &e, &AlignmentMap::identity(2), 1).unwrap();
        assert_eq!(c[0].token, "w0");
        assert_eq!(c[0].score, 1.0);
        assert_eq!(c[0].rank, 1);
    }

    #[test]
    fn basis_ranking() {
        let tgt = emb(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let r = Retriever::new(&tgt);
        let c = r.nearest(&[0.9, 0.1, 0.0], 3).unwrap();
        let toks: Vec<_> = c.iter().map(|c| c.token.as_str()).collect();
        assert_eq!(toks, ["w0", "w1", "w2"]);
        let n = libm::sqrt(0.82);
        assert!((c[0].score - 0.9 / n).abs() < 1e-15);
        assert!((c[1].score - 0.1 / n).abs() < 1e-15);
        assert_eq!(c[2].score, 0.0);
    }

    #[test]
    fn ties_break_by_index() {
        let tgt = emb(&[&[0.0, 1.0], &[1.0, 0.0], &[2.0, 0.0], &[1.0, 0.0]]);
        let c = Retriever::new(&tgt).nearest(&[1.0, 0.0], 4).unwrap();
        let idx: Vec<_> = c.iter().map(|c| c.index).collect();
        assert_eq!(idx, [1, 2, 3, 0]);
    }

    #[test]
    fn errors() {
        let e = emb(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let id = AlignmentMap::identity(2);
        assert_eq!(translate("zz", &e, &e, &id, 1).unwrap_err(), Error::QueryOov { query: "zz".into() });
        assert_eq!(translate("w0", &e, &e, &id, 3).unwrap_err(), Error::KTooLarge { k: 3, max: 2 });
        assert_eq!(translate("w0", &e, &e, &id, 0).unwrap_err(), Error::InvalidK);
        // k is validated before any query is looked at
        assert_eq!(batch_translate(&["zz"], &e, &e, &id, 3).unwrap_err(), Error::KTooLarge { k: 3, max: 2 });
    }

    #[test]
    fn batch_matches_single_calls() {
        let mut rng = Lcg::new(21);
        let src = random_emb(&mut rng, 40, 5, "s");
        let tgt = random_emb(&mut rng, 60, 5, "t");
        let map = AlignmentMap::new(random_orthogonal(&mut rng, 5), MapMeta::default()).unwrap();
        let empty: [&str; 0] = [];
        assert!(batch_translate(&empty, &src, &tgt, &map, 3).unwrap().is_empty());

        let queries: Vec<String> = (0..100).map(|_| format!("s{}", rng.below(50))).collect();
        let batch = batch_translate(&queries, &src, &tgt, &map, 7).unwrap();
        for (q, res) in queries.iter().zip(batch) {
            match translate(q, &src, &tgt, &map, 7) {
                Ok(c) => assert_eq!(res, QueryResult::Candidates(c)),
                Err(Error::QueryOov { .. }) => assert_eq!(res, QueryResult::Oov),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn naive_full_sort_agrees() {
        let mut rng = Lcg::new(4);
        let tgt = random_emb(&mut rng, 80, 6, "t");
        let r = Retriever::new(&tgt);
        for _ in 0..20 {
            let q: Vec<f64> = (0..6).map(|_| rng.normal()).collect();
            let scores = r.scores(&q);
            let mut all: Vec<usize> = (0..80).collect();
            all.sort_by(|&a, &b| better((scores[a], a), (scores[b], b)));
            let top: Vec<usize> = r.nearest(&q, 10).unwrap().iter().map(|c| c.index).collect();
            assert_eq!(top, all[..10]);
        }
    }

    #[test]
    fn rotation_equivariance() {
        let mut rng = Lcg::new(8);
        let src = random_emb(&mut rng, 20, 4, "s");
        let tgt = random_emb(&mut rng, 30, 4, "t");
        let w = random_orthogonal(&mut rng, 4);
        let extra = random_orthogonal(&mut rng, 4);
        let map = AlignmentMap::new(w.clone(), MapMeta::default()).unwrap();
        let composed = AlignmentMap::new(extra.matmul(&w).unwrap(), MapMeta::default()).unwrap();
        let extra_map = AlignmentMap::new(extra, MapMeta::default()).unwrap();
        let tgt_rot = apply_map(&extra_map, &tgt).unwrap();
        for i in 0..20 {
            let q = format!("s{i}");
            let a: Vec<_> = translate(&q, &src, &tgt, &map, 10).unwrap().into_iter().map(|c| c.index).collect();
            let b: Vec<_> = translate(&q, &src, &tgt_rot, &composed, 10).unwrap().into_iter().map(|c| c.index).collect();
            assert_eq!(a, b);
        }
    }
}
