//! Word-translation precision@k.
//!
//! Accounting is per source word: a source word with several gold
//! translations is one query, and it counts as correct at `k` when any of
//! its in-vocabulary translations is among the top `k` retrievals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dictionary::BilingualDictionary;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::preprocess::PreprocessMode;
use crate::procrustes::AlignmentMap;
use crate::retrieval::{Retriever, TranslationCandidate};

pub const DEFAULT_KS: [usize; 3] = [1, 5, 10];

pub const RETRIEVAL_METRIC: &str = "cosine";
pub const PREPROCESS_ORDER: &str = "center_then_l2_normalize";

/// `"{target_id}-{norm|unnorm}"`, e.g. `curated-norm`.
pub fn condition_name(target_id: &str, mode: PreprocessMode) -> String {
    format!("{target_id}-{}", mode.condition_tag())
}

/// Percentage rounded to two decimals, `round(10000·correct/total) / 100`.
pub fn percentage(correct: usize, total: usize) -> f64 {
    libm::round(10_000.0 * correct as f64 / total as f64) / 100.0
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalMeta {
    pub condition: String,
    pub source_id: String,
    pub target_id: String,
    pub mode: PreprocessMode,
    pub preprocess_order: String,
    pub retrieval_metric: String,
}

impl EvalMeta {
    /// Metadata derived from an alignment map's own metadata.
    pub fn from_map(map: &AlignmentMap) -> Self {
        EvalMeta {
            condition: condition_name(&map.meta.target_id, map.meta.mode),
            source_id: map.meta.source_id.clone(),
            target_id: map.meta.target_id.clone(),
            mode: map.meta.mode,
            preprocess_order: PREPROCESS_ORDER.into(),
            retrieval_metric: RETRIEVAL_METRIC.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QueryOutcome {
    pub source: String,
    /// Gold translations present in the target vocabulary.
    pub gold: Vec<String>,
    /// Best rank of any gold translation within the top `max(ks)`.
    pub hit_rank: Option<usize>,
    pub candidates: Vec<TranslationCandidate>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub ks: Vec<usize>,
    /// k → percentage with two decimals.
    pub precision: BTreeMap<usize, f64>,
    /// k → number of correct queries.
    pub correct: BTreeMap<usize, usize>,
    pub evaluated_queries: usize,
    /// Source words skipped because they, or all their gold translations,
    /// are out of vocabulary.
    pub skipped_oov: usize,
    /// Gold translations removed from otherwise evaluated queries.
    pub dropped_gold_oov: usize,
    pub per_query: Vec<QueryOutcome>,
    pub meta: EvalMeta,
}

impl EvalReport {
    pub fn precision_at(&self, k: usize) -> Option<f64> {
        self.precision.get(&k).copied()
    }
}

/// Sorts and dedups `ks`, rejecting zero and values above `max`.
pub fn normalize_ks(ks: &[usize], max: usize) -> Result<Vec<usize>> {
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    match (ks.first(), ks.last()) {
        (None, _) | (Some(0), _) => Err(Error::InvalidK),
        (_, Some(&k)) if k > max => Err(Error::KTooLarge { k, max }),
        _ => Ok(ks),
    }
}

pub fn precision_at_k(
    eval_dict: &BilingualDictionary,
    src: &Embedding,
    tgt: &Embedding,
    map: &AlignmentMap,
    ks: &[usize],
) -> Result<EvalReport> {
    if eval_dict.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    if src.dim() != map.dim() || tgt.dim() != map.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim(), found: if src.dim() != map.dim() { src.dim() } else { tgt.dim() } });
    }
    let ks = normalize_ks(ks, tgt.len())?;
    let max_k = *ks.last().expect("non-empty");
    let retriever = Retriever::new(tgt);

    let mut per_query = Vec::new();
    let mut skipped_oov = 0;
    let mut dropped_gold_oov = 0;
    for (source, golds) in eval_dict.grouped() {
        let Some(x) = src.vector(source) else {
            skipped_oov += 1;
            continue;
        };
        let gold_idx: Vec<usize> = golds.iter().filter_map(|g| tgt.vocab().get(g)).collect();
        if gold_idx.is_empty() {
            skipped_oov += 1;
            continue;
        }
        dropped_gold_oov += golds.len() - gold_idx.len();
        let candidates = retriever.nearest(&map.map_vector(x)?, max_k)?;
        let hit_rank = candidates.iter().find(|c| gold_idx.contains(&c.index)).map(|c| c.rank);
        per_query.push(QueryOutcome {
            source: source.into(),
            gold: gold_idx.iter().map(|&i| tgt.vocab().token(i).into()).collect(),
            hit_rank,
            candidates,
        });
    }

    let evaluated = per_query.len();
    if evaluated == 0 {
        return Err(Error::EmptyEvaluationSet { skipped: skipped_oov });
    }
    let mut precision = BTreeMap::new();
    let mut correct = BTreeMap::new();
    for &k in &ks {
        let c = per_query.iter().filter(|q| q.hit_rank.is_some_and(|r| r <= k)).count();
        correct.insert(k, c);
        precision.insert(k, percentage(c, evaluated));
    }
    Ok(EvalReport {
        ks,
        precision,
        correct,
        evaluated_queries: evaluated,
        skipped_oov,
        dropped_gold_oov,
        per_query,
        meta: EvalMeta::from_map(map),
    })
}
