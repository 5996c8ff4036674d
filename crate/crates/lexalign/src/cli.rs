use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexalign_core::{PreprocessMode, ProjectionMethod};

use crate::error::{Error, Result};
use crate::pipeline::{self, PlotOptions, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "lexalign", version, about = "Align word embeddings with orthogonal Procrustes and evaluate translation precision")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the alignment map from a training dictionary.
    Align(AlignArgs),
    /// Compute precision@k of a saved map on an evaluation dictionary.
    Evaluate(EvaluateArgs),
    /// Print nearest target words for source queries.
    Translate(TranslateArgs),
    /// Project both aligned spaces to 2D and write CSV and SVG.
    Plot(PlotArgs),
    /// Align and evaluate every target under both preprocess modes.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    None,
    CenterNormalize,
}

impl From<ModeArg> for PreprocessMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::None => PreprocessMode::None,
            ModeArg::CenterNormalize => PreprocessMode::CenterNormalize,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Pca,
    Tsne,
}

impl From<MethodArg> for ProjectionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Pca => ProjectionMethod::Pca,
            MethodArg::Tsne => ProjectionMethod::Tsne,
        }
    }
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// Source embedding in .vec text format.
    #[arg(long)]
    pub src_emb: PathBuf,
    /// Target embedding in .vec text format.
    #[arg(long)]
    pub tgt_emb: PathBuf,
    /// Preprocessing applied to both embeddings.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Read at most this many source words.
    #[arg(long)]
    pub max_vocab_src: Option<usize>,
    /// Read at most this many target words.
    #[arg(long)]
    pub max_vocab_tgt: Option<usize>,
    /// Source identifier recorded in the map (default: file stem).
    #[arg(long)]
    pub src_id: Option<String>,
    /// Target identifier used in condition names (default: file stem).
    #[arg(long)]
    pub tgt_id: Option<String>,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub spaces: SpaceArgs,
    #[arg(long)]
    pub train_dict: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub spaces: SpaceArgs,
    #[arg(long)]
    pub eval_dict: PathBuf,
    #[arg(long)]
    pub map: PathBuf,
    /// Cutoff for precision@k; repeatable. Default: 1, 5, 10.
    #[arg(long = "k")]
    pub ks: Vec<usize>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub spaces: SpaceArgs,
    #[arg(long)]
    pub map: PathBuf,
    /// Number of candidates per query (default: 10, capped at the target vocabulary).
    #[arg(long)]
    pub k: Option<usize>,
    /// File with one query per line.
    #[arg(long)]
    pub query_file: Option<PathBuf>,
    pub queries: Vec<String>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub spaces: SpaceArgs,
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, value_enum, default_value = "pca")]
    pub method: MethodArg,
    /// Plot the words of this dictionary (both sides).
    #[arg(long)]
    pub eval_dict: Option<PathBuf>,
    /// Plot the tokens in this file instead of the dictionary words.
    #[arg(long)]
    pub token_list: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub perplexity: Option<f64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Never draw token labels.
    #[arg(long)]
    pub no_labels: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub src_emb: PathBuf,
    /// Target embedding as ID=PATH; repeatable.
    #[arg(long = "tgt-emb", value_parser = parse_target, required = true)]
    pub targets: Vec<(String, PathBuf)>,
    #[arg(long)]
    pub train_dict: PathBuf,
    #[arg(long)]
    pub eval_dict: PathBuf,
    #[arg(long = "k")]
    pub ks: Vec<usize>,
    #[arg(long)]
    pub max_vocab_src: Option<usize>,
    #[arg(long)]
    pub max_vocab_tgt: Option<usize>,
    #[arg(long)]
    pub src_id: Option<String>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

fn parse_target(s: &str) -> std::result::Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((id, path)) if !id.is_empty() && !path.is_empty() => Ok((id.to_owned(), PathBuf::from(path))),
        _ => Err(format!("expected ID=PATH, got {s:?}")),
    }
}

fn ks(v: Vec<usize>) -> Option<Vec<usize>> {
    (!v.is_empty()).then_some(v)
}

fn config(spaces: SpaceArgs, out_dir: PathBuf) -> RunConfig {
    RunConfig {
        src_emb: spaces.src_emb,
        tgt_emb: spaces.tgt_emb,
        mode: spaces.mode.map(Into::into),
        max_vocab_src: spaces.max_vocab_src,
        max_vocab_tgt: spaces.max_vocab_tgt,
        src_id: spaces.src_id,
        tgt_id: spaces.tgt_id,
        out_dir,
        ..RunConfig::default()
    }
}

fn warn(err: &mut dyn Write, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

/// Runs a parsed command, writing results to `out` and warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let io = |e| Error::io("writing to stdout", e);
    match cli.command {
        Command::Align(a) => {
            let cfg = RunConfig { train_dict: Some(a.train_dict), ..config(a.spaces, a.out_dir) };
            let o = pipeline::align(&cfg)?;
            warn(err, &o.warnings);
            let c = &o.coverage;
            writeln!(
                out,
                "pairs\t{}\nretained\t{}\ndropped_src_oov\t{}\ndropped_tgt_oov\t{}\nduplicate_pairs\t{}\nmap\t{}",
                c.total_pairs,
                c.retained,
                c.dropped_src_oov,
                c.dropped_tgt_oov,
                o.duplicate_pairs,
                o.map_path.display()
            )
            .map_err(io)?;
        }
        Command::Evaluate(a) => {
            let cfg = RunConfig { eval_dict: Some(a.eval_dict), ks: ks(a.ks), ..config(a.spaces, a.out_dir) };
            let o = pipeline::evaluate(&cfg, &a.map)?;
            warn(err, &o.warnings);
            crate::report::write_report(&o.report, &mut *out, crate::report::ReportFormat::Tsv)?;
        }
        Command::Translate(a) => {
            let mut queries = a.queries;
            if let Some(path) = &a.query_file {
                queries.extend(pipeline::read_queries(path)?);
            }
            if queries.is_empty() {
                return Err(Error::Usage("no queries given".into()));
            }
            let cfg = config(a.spaces, PathBuf::from("."));
            let (lines, warnings) = pipeline::translate(&cfg, &a.map, &queries, a.k)?;
            warn(err, &warnings);
            for line in lines {
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        Command::Plot(a) => {
            let cfg = RunConfig { eval_dict: a.eval_dict, seed: a.seed, ..config(a.spaces, a.out_dir) };
            let opts = PlotOptions {
                method: a.method.into(),
                token_list: a.token_list,
                perplexity: a.perplexity,
                iterations: a.iterations,
                labels: !a.no_labels,
            };
            let o = pipeline::plot(&cfg, &a.map, &opts)?;
            warn(err, &o.warnings);
            writeln!(out, "points\t{}\ncsv\t{}\nsvg\t{}", o.projection.points.len(), o.csv_path.display(), o.svg_path.display())
                .map_err(io)?;
        }
        Command::Experiment(a) => {
            let cfg = RunConfig {
                src_emb: a.src_emb,
                train_dict: Some(a.train_dict),
                eval_dict: Some(a.eval_dict),
                ks: ks(a.ks),
                max_vocab_src: a.max_vocab_src,
                max_vocab_tgt: a.max_vocab_tgt,
                src_id: a.src_id,
                out_dir: a.out_dir,
                ..RunConfig::default()
            };
            let o = pipeline::experiment(&cfg, &a.targets)?;
            warn(err, &o.warnings);
            crate::report::write_table(&o.reports, &mut *out)?;
        }
    }
    Ok(())
}
