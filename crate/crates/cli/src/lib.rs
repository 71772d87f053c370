//! `moviedesc` command line: pipeline stages over files plus the curation
//! HTTP server.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod error;
pub mod io;
pub mod serve;

pub use error::{CliError, CliResult};

use moviedesc::align::{DEFAULT_MIN_SCORE, DEFAULT_WINDOW};
use moviedesc::baselines::{DEFAULT_ALPHA, DEFAULT_K};
use moviedesc::corpus::DEFAULT_MIN_IOU;
use moviedesc::semantic::{SrSlot, MIN_COUNT_30};
use moviedesc::signal::DEFAULT_MIN_SEGMENT_S;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "moviedesc", version, about = "Build and evaluate aligned movie description corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdArg {
    Auto,
    Fixed(f64),
}

fn parse_threshold(s: &str) -> Result<ThresholdArg, String> {
    if s == "auto" {
        return Ok(ThresholdArg::Auto);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(ThresholdArg::Fixed(v)),
        _ => Err(format!("expected \"auto\" or a number, got {s:?}")),
    }
}

fn parse_method(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected NAME=FILE, got {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Text,
    Sense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WsdArg {
    /// Most frequent sense.
    Mfs,
    /// Gloss overlap with the clause.
    Context,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmoothingArg {
    None,
    AddOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Dvs,
    Script,
}

/// `--out FILE`; standard output when absent.
#[derive(Debug, Clone, Args)]
pub struct OutArg {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect narration intervals by comparing the narrated mix with the original track.
    Segment(SegmentArgs),
    /// Time script descriptions through subtitle anchors.
    AlignScript(AlignScriptArgs),
    /// Extract semantic-representation tuples from sentences.
    ParseSr(ParseSrArgs),
    /// Count slot labels and keep those above a minimum count.
    BuildVocab(BuildVocabArgs),
    /// Pair overlapping DVS and script snippets of a movie.
    Pair(PairArgs),
    /// Replace character names with someone/people.
    Anonymize(AnonymizeArgs),
    /// Corpus statistics per source.
    Stats(StatsArgs),
    /// Nearest-neighbour retrieval of training sentences.
    Nn(NnArgs),
    /// Visual-word tuples from detector scores and a DT codebook.
    Vwords(VwordsArgs),
    /// Estimate CRF pairwise potentials from training tuples.
    CrfFit(CrfFitArgs),
    /// MAP tuple per snippet from unary scores and a fitted model.
    CrfMap(CrfMapArgs),
    /// Generate sentences from tuples with a template bank.
    Gen(GenArgs),
    /// Write an SMT parallel corpus (tuple labels / sentence tokens).
    ExportSmt(ExportSmtArgs),
    /// Corpus BLEU@4.
    Bleu(BleuArgs),
    /// Write blinded human-ranking tasks.
    RankExport(RankExportArgs),
    /// Unblind judgments and report mean ranks.
    RankImport(RankImportArgs),
    /// Serve the curation API over HTTP.
    Serve(ServeArgs),
    /// Write the bundled synthetic movie to a directory.
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long)]
    pub mixed: PathBuf,
    #[arg(long)]
    pub original: PathBuf,
    /// `auto` (75th percentile of the curve) or an explicit value.
    #[arg(long, value_parser = parse_threshold, default_value = "auto")]
    pub threshold: ThresholdArg,
    #[arg(long, default_value_t = DEFAULT_MIN_SEGMENT_S)]
    pub min_segment_s: f64,
    /// Movie id; required to store snippets in a project.
    #[arg(long)]
    pub movie: Option<String>,
    /// Transcribed narration, one sentence per line, assigned to intervals in order.
    #[arg(long)]
    pub sentences: Option<PathBuf>,
    #[arg(long)]
    pub project: Option<PathBuf>,
    /// Also write the difference curve as JSON.
    #[arg(long)]
    pub curve_out: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct AlignScriptArgs {
    #[arg(long)]
    pub script: PathBuf,
    #[arg(long)]
    pub subtitles: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MIN_SCORE)]
    pub min_score: f64,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long)]
    pub movie: Option<String>,
    #[arg(long)]
    pub project: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ParseSrArgs {
    /// JSON lines `{"id", "sentence"}` or plain text, one sentence per line.
    #[arg(long, conflicts_with = "project")]
    pub input: Option<PathBuf>,
    /// Parse the kept snippets of a project instead.
    #[arg(long)]
    pub project: Option<PathBuf>,
    #[arg(long, value_enum, requires = "project")]
    pub source: Option<SourceArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "mfs")]
    pub wsd: WsdArg,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct BuildVocabArgs {
    /// SR records as written by parse-sr.
    #[arg(long)]
    pub tuples: PathBuf,
    #[arg(long)]
    pub slot: SrSlot,
    #[arg(long, default_value_t = MIN_COUNT_30)]
    pub min_count: usize,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub project: Option<PathBuf>,
    #[arg(long)]
    pub movie: String,
    #[arg(long, default_value_t = DEFAULT_MIN_IOU)]
    pub min_iou: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct AnonymizeArgs {
    /// Rewrite unlocked snippet sentences of this project in place.
    #[arg(long, conflicts_with = "input")]
    pub project: Option<PathBuf>,
    /// Anonymize a plain text file line by line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Character names, one per line.
    #[arg(long)]
    pub names: PathBuf,
    /// Person-noun pattern file replacing the bundled one.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub project: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct NnArgs {
    #[arg(long)]
    pub train_features: PathBuf,
    /// JSON lines `{"id", "sentence"}` keyed like the training features.
    #[arg(long)]
    pub train_sentences: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct VwordsArgs {
    /// DT features of the query snippets.
    #[arg(long)]
    pub dt: PathBuf,
    /// DT features the codebook is fitted on.
    #[arg(long)]
    pub train_features: PathBuf,
    /// `snippet_id,class,score` object detector scores.
    #[arg(long)]
    pub lsda: PathBuf,
    /// `snippet_id,class,score` scene scores.
    #[arg(long)]
    pub places: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub codebook_out: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct CrfFitArgs {
    #[arg(long)]
    pub tuples: PathBuf,
    #[arg(long, default_value_t = MIN_COUNT_30)]
    pub min_count: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct CrfMapArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// `snippet_id,node,label,score` files; repeated files are summed.
    #[arg(long, required = true)]
    pub unaries: Vec<PathBuf>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub unary_weight: f64,
    #[arg(long, default_value_t = 1.0)]
    pub pairwise_weight: f64,
    /// Ignore unary labels outside the model vocabulary instead of failing.
    #[arg(long)]
    pub drop_unknown: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// SR records of the training sentences.
    #[arg(long)]
    pub bank_tuples: PathBuf,
    /// Training sentences `{"id", "sentence"}`.
    #[arg(long)]
    pub bank_sentences: PathBuf,
    /// Tuples to verbalize (crf-map or parse-sr output).
    #[arg(long)]
    pub tuples: PathBuf,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ExportSmtArgs {
    #[arg(long)]
    pub tuples: PathBuf,
    #[arg(long)]
    pub sentences: PathBuf,
    #[arg(long)]
    pub out_src: PathBuf,
    #[arg(long)]
    pub out_tgt: PathBuf,
}

#[derive(Debug, Args)]
pub struct BleuArgs {
    /// Evaluation pairs as JSON lines or CSV.
    #[arg(long, conflicts_with_all = ["candidates", "references", "project"])]
    pub pairs: Option<PathBuf>,
    /// Candidate sentences `{"snippet_id", "sentence"}`.
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    /// Reference sentences `{"snippet_id", "sentence"}`, several lines per snippet allowed.
    #[arg(long, conflicts_with = "project")]
    pub references: Option<PathBuf>,
    /// Use the project's snippet sentences as references.
    #[arg(long)]
    pub project: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    pub smoothing: SmoothingArg,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct RankExportArgs {
    /// Snippet ids, one per line; defaults to the first method's snippets.
    #[arg(long)]
    pub snippets: Option<PathBuf>,
    /// `NAME=FILE` with `{"snippet_id", "sentence"}` lines; repeat per method.
    #[arg(long = "method", value_parser = parse_method, required = true)]
    pub methods: Vec<(String, PathBuf)>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct RankImportArgs {
    #[arg(long)]
    pub tasks: PathBuf,
    #[arg(long)]
    pub judgments: PathBuf,
    /// Mean ranks as JSON instead of the table.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub project: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion
                | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("moviedesc: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> CliResult<()> {
    use commands::*;
    match command {
        Command::Segment(a) => signal::segment(a),
        Command::AlignScript(a) => corpus::align_script(a),
        Command::ParseSr(a) => semantic::parse_sr(a),
        Command::BuildVocab(a) => semantic::build_vocab(a),
        Command::Pair(a) => corpus::pair(a),
        Command::Anonymize(a) => corpus::anonymize(a),
        Command::Stats(a) => corpus::stats(a),
        Command::Nn(a) => baselines::nn(a),
        Command::Vwords(a) => baselines::vwords(a),
        Command::CrfFit(a) => baselines::crf_fit(a),
        Command::CrfMap(a) => baselines::crf_map(a),
        Command::Gen(a) => baselines::gen(a),
        Command::ExportSmt(a) => baselines::export_smt(a),
        Command::Bleu(a) => evaluation::bleu(a),
        Command::RankExport(a) => evaluation::rank_export(a),
        Command::RankImport(a) => evaluation::rank_import(a),
        Command::Serve(a) => serve::serve(a),
        Command::Fixture(a) => signal::fixture(a),
    }
}
