//! End-to-end operations behind the CLI subcommands.
//!
//! Every function reads its inputs from disk and writes its outputs under
//! `RunConfig::out_dir`, so stages only share state through files.

use std::collections::HashSet;
use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use lexalign_core::evaluation::{condition_name, DEFAULT_KS};
use lexalign_core::{
    apply_map, apply_mode, batch_translate, build_anchors, pca_2d, precision_at_k, solve_procrustes, tsne_2d, AlignmentMap,
    CoverageStats, Embedding, EvalReport, Lang, Matrix, PointLabel, PreprocessMode, Projection2D, ProjectionMethod, QueryResult,
    TsneConfig,
};

use crate::dictfile::load_dictionary;
use crate::error::{Error, Result};
use crate::mapfile::{load_map, save_map};
use crate::plot::{render_scatter_svg, write_csv};
use crate::report::{save_report, write_table, ReportFormat};
use crate::vecfile::{load_vec, read_line, VecOptions};

pub const DEFAULT_TRANSLATE_K: usize = 10;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub src_emb: PathBuf,
    pub tgt_emb: PathBuf,
    pub train_dict: Option<PathBuf>,
    pub eval_dict: Option<PathBuf>,
    /// `None` means: `none` when aligning, the map's mode otherwise.
    pub mode: Option<PreprocessMode>,
    /// `None` means [1, 5, 10], dropping values above the target vocabulary size.
    pub ks: Option<Vec<usize>>,
    pub max_vocab_src: Option<usize>,
    pub max_vocab_tgt: Option<usize>,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Defaults to the source embedding's file stem.
    pub src_id: Option<String>,
    /// Defaults to the target embedding's file stem.
    pub tgt_id: Option<String>,
}

impl RunConfig {
    pub fn source_id(&self) -> String {
        self.src_id.clone().unwrap_or_else(|| file_stem(&self.src_emb))
    }

    pub fn target_id(&self) -> String {
        self.tgt_id.clone().unwrap_or_else(|| file_stem(&self.tgt_emb))
    }

    pub fn validate(&self) -> Result<()> {
        for (flag, path) in [("--src-emb", &self.src_emb), ("--tgt-emb", &self.tgt_emb), ("--out-dir", &self.out_dir)] {
            if path.as_os_str().is_empty() {
                return Err(Error::Usage(format!("{flag} must not be empty")));
            }
        }
        Ok(())
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    match path {
        Some(p) if !p.as_os_str().is_empty() => Ok(p),
        _ => Err(Error::Usage(format!("{flag} is required"))),
    }
}

fn resolve_mode(config: &RunConfig, map: &AlignmentMap) -> Result<PreprocessMode> {
    match config.mode {
        Some(requested) if requested != map.meta.mode => Err(Error::ModeMismatch { requested, recorded: map.meta.mode }),
        _ => Ok(map.meta.mode),
    }
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))
}

/// Loaded and preprocessed embedding pair.
#[derive(Debug, Clone)]
pub struct Spaces {
    pub src: Embedding,
    pub tgt: Embedding,
    pub warnings: Vec<String>,
}

pub fn load_spaces(config: &RunConfig, mode: PreprocessMode) -> Result<Spaces> {
    let mut warnings = Vec::new();
    let mut load = |path: &Path, max_vocab| -> Result<Embedding> {
        let parsed = load_vec(path, VecOptions { max_vocab, expected_dim: None })?;
        if parsed.duplicates > 0 {
            warnings.push(format!("{}: skipped {} duplicate tokens", path.display(), parsed.duplicates));
        }
        if parsed.truncated {
            warnings.push(format!(
                "{}: header declares {} rows, read {}",
                path.display(),
                parsed.declared_rows,
                parsed.embedding.len() + parsed.duplicates
            ));
        }
        Ok(apply_mode(&parsed.embedding, mode)?)
    };
    let src = load(&config.src_emb, config.max_vocab_src)?;
    let tgt = load(&config.tgt_emb, config.max_vocab_tgt)?;
    if src.dim() != tgt.dim() {
        return Err(lexalign_core::Error::DimensionMismatch { expected: src.dim(), found: tgt.dim() }.into());
    }
    Ok(Spaces { src, tgt, warnings })
}

#[derive(Debug, Clone)]
pub struct AlignOutcome {
    pub map: AlignmentMap,
    pub coverage: CoverageStats,
    pub duplicate_pairs: usize,
    pub map_path: PathBuf,
    pub warnings: Vec<String>,
}

/// Loads both embeddings, applies the preprocess mode, solves for the map
/// and writes it to `<out_dir>/<condition>.map`.
pub fn align(config: &RunConfig) -> Result<AlignOutcome> {
    config.validate()?;
    let train_path = require(&config.train_dict, "--train-dict")?;
    let mode = config.mode.unwrap_or_default();
    let dict = load_dictionary(train_path)?;
    let spaces = load_spaces(config, mode)?;
    let (anchors, coverage) = build_anchors(&dict.dictionary, &spaces.src, &spaces.tgt)?;
    let mut map = solve_procrustes(&anchors)?;
    map.meta.mode = mode;
    map.meta.source_id = config.source_id();
    map.meta.target_id = config.target_id();

    let mut warnings = spaces.warnings;
    if map.meta.degenerate {
        warnings.push("anchor cross-covariance is rank deficient; the map is not unique".into());
    }
    ensure_out_dir(&config.out_dir)?;
    let map_path = config.out_dir.join(format!("{}.map", condition_name(&map.meta.target_id, mode)));
    save_map(&map, &map_path)?;
    Ok(AlignOutcome { map, coverage, duplicate_pairs: dict.duplicates, map_path, warnings })
}

fn effective_ks(config: &RunConfig, vocab: usize, warnings: &mut Vec<String>) -> Vec<usize> {
    match &config.ks {
        Some(ks) => ks.clone(),
        None => {
            let ks: Vec<usize> = DEFAULT_KS.iter().copied().filter(|&k| k <= vocab).collect();
            if ks.len() < DEFAULT_KS.len() {
                warnings.push(format!("target vocabulary has {vocab} words; evaluating k in {ks:?}"));
            }
            ks
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvaluateOutcome {
    pub report: EvalReport,
    pub json_path: PathBuf,
    pub tsv_path: PathBuf,
    pub warnings: Vec<String>,
}

/// Evaluates an aligned pair in memory, without touching the file system.
pub fn evaluate_spaces(
    map: &AlignmentMap,
    spaces: &Spaces,
    eval_dict: &lexalign_core::BilingualDictionary,
    config: &RunConfig,
    warnings: &mut Vec<String>,
) -> Result<EvalReport> {
    let ks = effective_ks(config, spaces.tgt.len(), warnings);
    Ok(precision_at_k(eval_dict, &spaces.src, &spaces.tgt, map, &ks)?)
}

/// Evaluates a saved map and writes `<condition>.json` and `<condition>.tsv`.
pub fn evaluate(config: &RunConfig, map_path: &Path) -> Result<EvaluateOutcome> {
    config.validate()?;
    let eval_path = require(&config.eval_dict, "--eval-dict")?;
    let map = load_map(map_path)?;
    let mode = resolve_mode(config, &map)?;
    let dict = load_dictionary(eval_path)?;
    let spaces = load_spaces(config, mode)?;
    let mut warnings = spaces.warnings.clone();
    let report = evaluate_spaces(&map, &spaces, &dict.dictionary, config, &mut warnings)?;
    if report.skipped_oov > 0 {
        warnings.push(format!("skipped {} out-of-vocabulary source words", report.skipped_oov));
    }

    ensure_out_dir(&config.out_dir)?;
    let base = config.out_dir.join(&report.meta.condition);
    let json_path = base.with_extension("json");
    let tsv_path = base.with_extension("tsv");
    save_report(&report, &json_path, ReportFormat::Json)?;
    save_report(&report, &tsv_path, ReportFormat::Tsv)?;
    Ok(EvaluateOutcome { report, json_path, tsv_path, warnings })
}

/// Reads one query per line, skipping blank lines.
pub fn read_queries(path: &Path) -> Result<Vec<String>> {
    let file = fs::File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    let mut reader = std::io::BufReader::new(file);
    let mut buf = Vec::new();
    let mut out = Vec::new();
    let mut line_no = 0;
    while let Some(line) = {
        line_no += 1;
        read_line(&mut reader, &mut buf, line_no)?
    } {
        let q = line.trim();
        if !q.is_empty() {
            out.push(q.to_owned());
        }
    }
    Ok(out)
}

/// `query<TAB>rank<TAB>candidate<TAB>score` lines, or `query<TAB>OOV`.
pub fn format_translations(queries: &[String], results: &[QueryResult]) -> Vec<String> {
    let mut lines = Vec::new();
    for (q, r) in queries.iter().zip(results) {
        match r {
            QueryResult::Oov => lines.push(format!("{q}\tOOV")),
            QueryResult::Candidates(cands) => {
                for c in cands {
                    lines.push(format!("{q}\t{}\t{}\t{:.6}", c.rank, c.token, c.score));
                }
            }
        }
    }
    lines
}

pub fn translate(config: &RunConfig, map_path: &Path, queries: &[String], k: Option<usize>) -> Result<(Vec<String>, Vec<String>)> {
    config.validate()?;
    let map = load_map(map_path)?;
    let mode = resolve_mode(config, &map)?;
    let spaces = load_spaces(config, mode)?;
    let k = k.unwrap_or(DEFAULT_TRANSLATE_K.min(spaces.tgt.len()));
    let results = batch_translate(queries, &spaces.src, &spaces.tgt, &map, k)?;
    Ok((format_translations(queries, &results), spaces.warnings))
}

/// Token list file: one `src<TAB>token` or `tgt<TAB>token` per line. A bare
/// token is plotted on each side whose vocabulary contains it.
pub fn read_token_list<R: BufRead>(mut reader: R) -> Result<Vec<(Option<Lang>, String)>> {
    let mut buf = Vec::new();
    let mut out = Vec::new();
    let mut line_no = 0;
    while let Some(line) = {
        line_no += 1;
        read_line(&mut reader, &mut buf, line_no)?
    } {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entry = match line.split_once('\t') {
            Some(("src", t)) => (Some(Lang::Src), t.trim()),
            Some(("tgt", t)) => (Some(Lang::Tgt), t.trim()),
            Some(_) => return Err(Error::MalformedLine { line: line_no }),
            None => (None, line),
        };
        if !lexalign_core::embedding::is_valid_token(entry.1) {
            return Err(Error::MalformedLine { line: line_no });
        }
        out.push((entry.0, entry.1.to_owned()));
    }
    Ok(out)
}

/// Picks the plotted points: mapped source rows followed by target rows.
/// Tokens missing from their embedding are skipped.
pub fn plot_points(
    spaces: &Spaces,
    map: &AlignmentMap,
    selection: &[(Option<Lang>, String)],
) -> Result<(Matrix, Vec<PointLabel>)> {
    let mapped = apply_map(map, &spaces.src)?;
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut seen = HashSet::new();
    for side in [Lang::Src, Lang::Tgt] {
        let emb = if side == Lang::Src { &mapped } else { &spaces.tgt };
        for (lang, token) in selection {
            if lang.is_some_and(|l| l != side) || !seen.insert((side, token.as_str())) {
                continue;
            }
            if let Some(v) = emb.vector(token) {
                rows.push(v.to_vec());
                labels.push(PointLabel::new(token.clone(), side));
            }
        }
    }
    let matrix = if rows.is_empty() { Matrix::zeros(0, spaces.tgt.dim()) } else { Matrix::from_rows(&rows)? };
    Ok((matrix, labels))
}

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub method: ProjectionMethod,
    pub token_list: Option<PathBuf>,
    pub perplexity: Option<f64>,
    pub iterations: Option<usize>,
    pub labels: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { method: ProjectionMethod::Pca, token_list: None, perplexity: None, iterations: None, labels: true }
    }
}

#[derive(Debug, Clone)]
pub struct PlotOutcome {
    pub projection: Projection2D,
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
    pub warnings: Vec<String>,
}

/// Projects the selected tokens of both aligned spaces jointly and writes
/// `<condition>-<method>.csv` and `.svg`.
pub fn plot(config: &RunConfig, map_path: &Path, opts: &PlotOptions) -> Result<PlotOutcome> {
    config.validate()?;
    let map = load_map(map_path)?;
    let mode = resolve_mode(config, &map)?;
    let selection = match (&opts.token_list, &config.eval_dict) {
        (Some(path), _) => {
            let file = fs::File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
            read_token_list(std::io::BufReader::new(file))?
        }
        (None, Some(path)) => {
            let dict = load_dictionary(path)?;
            let mut sel: Vec<(Option<Lang>, String)> = Vec::new();
            for (s, golds) in dict.dictionary.grouped() {
                sel.push((Some(Lang::Src), s.to_owned()));
                sel.extend(golds.into_iter().map(|t| (Some(Lang::Tgt), t.to_owned())));
            }
            sel
        }
        (None, None) => return Err(Error::Usage("plot needs --eval-dict or --token-list".into())),
    };
    let spaces = load_spaces(config, mode)?;
    let mut warnings = spaces.warnings.clone();
    let (data, labels) = plot_points(&spaces, &map, &selection)?;
    let missing = selection.len().saturating_sub(labels.len());
    if missing > 0 && opts.token_list.is_some() {
        warnings.push(format!("{missing} listed tokens not plotted"));
    }
    let projection = match opts.method {
        ProjectionMethod::Pca => pca_2d(&data, &labels)?,
        ProjectionMethod::Tsne => {
            let tc = TsneConfig {
                perplexity: opts.perplexity,
                iterations: opts.iterations.unwrap_or(lexalign_core::projection::TSNE_DEFAULT_ITERATIONS),
                seed: config.seed,
            };
            tsne_2d(&data, &labels, &tc)?
        }
    };
    if projection.params.degenerate {
        warnings.push("plotted data has rank below 2; y coordinates are zero".into());
    }

    ensure_out_dir(&config.out_dir)?;
    let condition = condition_name(&map.meta.target_id, mode);
    let base = config.out_dir.join(format!("{condition}-{}", opts.method.as_str()));
    let csv_path = base.with_extension("csv");
    let svg_path = base.with_extension("svg");
    let mut csv_bytes = Vec::new();
    write_csv(&projection, &mut csv_bytes)?;
    fs::write(&csv_path, csv_bytes).map_err(|e| Error::io(format!("writing {}", csv_path.display()), e))?;
    let title = format!("{condition} ({})", opts.method.as_str());
    let svg = render_scatter_svg(&projection, &title, opts.labels);
    fs::write(&svg_path, svg).map_err(|e| Error::io(format!("writing {}", svg_path.display()), e))?;
    Ok(PlotOutcome { projection, csv_path, svg_path, warnings })
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub reports: Vec<EvalReport>,
    pub table_path: PathBuf,
    pub warnings: Vec<String>,
}

/// Aligns and evaluates every target under both preprocess modes, then
/// writes the merged `table.tsv`, one row per condition.
pub fn experiment(config: &RunConfig, targets: &[(String, PathBuf)]) -> Result<ExperimentOutcome> {
    if targets.is_empty() {
        return Err(Error::Usage("experiment needs at least one --tgt-emb".into()));
    }
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for (id, path) in targets {
        for mode in [PreprocessMode::None, PreprocessMode::CenterNormalize] {
            let run = RunConfig { tgt_emb: path.clone(), tgt_id: Some(id.clone()), mode: Some(mode), ..config.clone() };
            let aligned = align(&run)?;
            let evaluated = evaluate(&run, &aligned.map_path)?;
            warnings.extend(aligned.warnings);
            warnings.extend(evaluated.warnings);
            reports.push(evaluated.report);
        }
    }
    let table_path = config.out_dir.join("table.tsv");
    let mut bytes = Vec::new();
    write_table(&reports, &mut bytes)?;
    fs::write(&table_path, bytes).map_err(|e| Error::io(format!("writing {}", table_path.display()), e))?;
    Ok(ExperimentOutcome { reports, table_path, warnings })
}
