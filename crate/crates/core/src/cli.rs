//! Command-line front end: `segment`, `synth` and `eval`.
//!
//! Result files are written to a temporary file in the target directory and
//! renamed into place, so a failed run leaves no partial output.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::coverage::{kgcvr_segment, CoverConfig, CoverFn, CoverReport, SketchParams};
use crate::error::{Error, Result};
use crate::eval::{evaluate, found_episodes, FoundEpisode};
use crate::segmentation::{
    approx_dp_segment, exact_dp_segment, post_process, DensestMode, DpStats, Mode, Segmentation,
};
use crate::synth::{generate, GroundTruth, SyntheticSpec};
use crate::temporal_graph::TemporalGraph;

pub const SEED_ENV: &str = "TEMPOGRAPH_SEED";

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::SelfLoop { .. }
        | Error::EmptyInput
        | Error::Io(_)
        | Error::Json(_) => EXIT_INPUT,
        Error::TooLarge { .. }
        | Error::InvalidParameter(_)
        | Error::Infeasible(_)
        | Error::NegativeGain { .. } => EXIT_INFEASIBLE,
        Error::Invariant(_) => EXIT_INVARIANT,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tempograph",
    version,
    about = "Densest episodes in temporal networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition the timeline of an edge list into k densest episodes.
    Segment(SegmentArgs),
    /// Generate a synthetic temporal network with planted communities.
    Synth(SynthArgs),
    /// Score a segment result against a ground-truth file.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Optimal,
    Kgapprox,
    Kgoptdp,
    Kgoptds,
    Kgcvr,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Optimal => Mode::Optimal,
            ModeArg::Kgapprox => Mode::KgApprox,
            ModeArg::Kgoptdp => Mode::KgOptDp,
            ModeArg::Kgoptds => Mode::KgOptDs,
            ModeArg::Kgcvr => Mode::KgCvr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverArg {
    Indicator,
    Sqrt,
}

impl From<CoverArg> for CoverFn {
    fn from(c: CoverArg) -> Self {
        match c {
            CoverArg::Indicator => CoverFn::Indicator,
            CoverArg::Sqrt => CoverFn::Sqrt,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SegmentArgs {
    /// Edge list: one `u v t` triple per line.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "kgapprox")]
    pub mode: ModeArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps_dp: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps_ds: f64,
    /// Coverage weight (kgcvr only).
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "indicator")]
    pub cover: CoverArg,
    /// Replace each episode's subgraph by the exact densest one.
    #[arg(long)]
    pub post_process: bool,
    /// Track selection counts with a count-min sketch (kgcvr only).
    #[arg(long)]
    pub sketch: bool,
    #[arg(long, default_value_t = 0.01)]
    pub cm_eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub cm_delta: f64,
    /// Falls back to the TEMPOGRAPH_SEED environment variable, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub timeline: usize,
    #[arg(long, default_value_t = 5)]
    pub communities: usize,
    #[arg(long, default_value_t = 8)]
    pub community_size: usize,
    #[arg(long, default_value_t = 5.0)]
    pub community_degree: f64,
    #[arg(long, default_value_t = 2.0)]
    pub background_degree: f64,
    #[arg(long, default_value_t = 100)]
    pub interval_len: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Edge-list output.
    #[arg(long)]
    pub edges: PathBuf,
    /// Ground-truth JSON output.
    #[arg(long)]
    pub truth: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// JSON produced by `segment`.
    pub found: PathBuf,
    /// JSON produced by `synth --truth`.
    pub truth: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Episode as written to result files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeOut {
    pub start: i64,
    pub end: i64,
    pub density: f64,
    pub score: f64,
    pub size: usize,
    pub nodes: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsOut {
    pub input: String,
    pub mode: Mode,
    pub k: usize,
    pub eps_dp: Option<f64>,
    pub eps_ds: Option<f64>,
    pub lambda: Option<f64>,
    pub cover: Option<String>,
    pub sketch: Option<SketchParams>,
    pub post_process: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub load_ms: f64,
    pub solve_ms: f64,
    pub post_process_ms: f64,
    pub total_ms: f64,
}

/// Document written by `segment`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentOutput {
    pub command: String,
    pub params: ParamsOut,
    pub graph: GraphSummary,
    pub episodes: Vec<EpisodeOut>,
    pub total_profit: f64,
    pub dp_value: f64,
    pub stats: DpStats,
    pub coverage: Option<CoverReport>,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub temporal_edges: usize,
    pub timestamps: usize,
}

/// Document written by `synth` next to the edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthOutput {
    pub command: String,
    pub spec: SyntheticSpec,
    pub truth: GroundTruth,
}

/// Document written by `eval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub command: String,
    #[serde(flatten)]
    pub report: crate::eval::EvalReport,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Explicit seed, else `TEMPOGRAPH_SEED`, else 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{SEED_ENV} is not an integer: '{v}'"))),
        Err(_) => Ok(0),
    }
}

/// Write `contents` to `path` atomically, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| Error::Io(e.error))?;
            Ok(())
        }
    }
}

fn run_solver(
    g: &TemporalGraph,
    a: &SegmentArgs,
    seed: u64,
) -> Result<(Segmentation, Option<CoverReport>, Option<SketchParams>)> {
    let mode: Mode = a.mode.into();
    if mode != Mode::KgCvr && (a.lambda != 0.0 || a.sketch) {
        return Err(Error::InvalidParameter(
            "--lambda and --sketch apply to kgcvr only".into(),
        ));
    }
    if mode == Mode::KgCvr && a.post_process {
        return Err(Error::InvalidParameter(
            "--post-process would discard the coverage-aware subgraphs of kgcvr".into(),
        ));
    }
    Ok(match mode {
        Mode::Optimal => (exact_dp_segment(g, a.k, DensestMode::Exact)?, None, None),
        Mode::KgOptDp => (
            exact_dp_segment(g, a.k, DensestMode::Incremental(a.eps_ds))?,
            None,
            None,
        ),
        Mode::KgOptDs => (
            approx_dp_segment(g, a.k, a.eps_dp, DensestMode::Exact)?,
            None,
            None,
        ),
        Mode::KgApprox => (
            approx_dp_segment(g, a.k, a.eps_dp, DensestMode::Incremental(a.eps_ds))?,
            None,
            None,
        ),
        Mode::KgCvr => {
            let sketch = if a.sketch {
                Some(SketchParams::from_error(a.cm_eps, a.cm_delta, seed)?)
            } else {
                None
            };
            let cfg = CoverConfig {
                w: a.cover.into(),
                lambda: a.lambda,
                sketch,
            };
            let (seg, rep) = kgcvr_segment(g, a.k, a.eps_dp, a.eps_ds, &cfg)?;
            (seg, Some(rep), sketch)
        }
    })
}

/// Build the `segment` result document.
pub fn segment(a: &SegmentArgs) -> Result<SegmentOutput> {
    let start = Instant::now();
    let seed = resolve_seed(a.seed)?;
    let g = TemporalGraph::read_edge_list(fs::File::open(&a.input)?)?;
    let load_ms = ms(start);

    let t = Instant::now();
    let (mut seg, coverage, sketch) = run_solver(&g, a, seed)?;
    let solve_ms = ms(t);

    let t = Instant::now();
    if a.post_process {
        seg = post_process(&g, &seg);
    }
    let post_process_ms = ms(t);
    seg.validate(&g)?;

    let episodes = found_episodes(&g, &seg)
        .into_iter()
        .zip(&seg.episodes)
        .map(|(f, e)| EpisodeOut {
            start: f.start,
            end: f.end,
            density: e.density,
            score: e.score,
            size: f.nodes.len(),
            nodes: f.nodes,
        })
        .collect();
    let mode: Mode = a.mode.into();
    let kgcvr = mode == Mode::KgCvr;
    Ok(SegmentOutput {
        command: "segment".into(),
        params: ParamsOut {
            input: a.input.display().to_string(),
            mode,
            k: a.k,
            eps_dp: seg.params.eps_dp,
            eps_ds: seg.params.eps_ds,
            lambda: kgcvr.then_some(a.lambda),
            cover: kgcvr.then(|| CoverFn::from(a.cover).name().to_string()),
            sketch,
            post_process: a.post_process,
            seed,
        },
        graph: GraphSummary {
            nodes: g.n(),
            temporal_edges: g.m(),
            timestamps: g.r(),
        },
        episodes,
        total_profit: seg.total_profit,
        dp_value: seg.dp_value,
        stats: seg.stats,
        coverage,
        timings: Timings {
            load_ms,
            solve_ms,
            post_process_ms,
            total_ms: ms(start),
        },
    })
}

/// One row per episode: `start,end,density,size,labels` (labels `;`-joined).
pub fn to_csv(out: &SegmentOutput) -> String {
    let mut s = String::from("start_raw,end_raw,density,size,nodes\n");
    for e in &out.episodes {
        let labels: Vec<String> = e.nodes.iter().map(i64::to_string).collect();
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            e.start,
            e.end,
            e.density,
            e.size,
            labels.join(";")
        ));
    }
    s
}

pub fn cmd_segment(a: &SegmentArgs) -> Result<()> {
    let out = segment(a)?;
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&out)? + "\n",
        Format::Csv => to_csv(&out),
    };
    write_output(a.output.as_deref(), &text)
}

pub fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n: a.n,
        timeline: a.timeline,
        communities: a.communities,
        community_size: a.community_size,
        community_degree: a.community_degree,
        background_degree: a.background_degree,
        interval_len: a.interval_len,
        seed: resolve_seed(a.seed)?,
    };
    let (g, truth) = generate(&spec)?;
    let doc = SynthOutput {
        command: "synth".into(),
        spec,
        truth,
    };
    write_output(Some(&a.edges), &g.to_edge_list())?;
    write_output(
        Some(&a.truth),
        &(serde_json::to_string_pretty(&doc)? + "\n"),
    )
}

pub fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let found: SegmentOutput = serde_json::from_reader(fs::File::open(&a.found)?)?;
    let truth: SynthOutput = serde_json::from_reader(fs::File::open(&a.truth)?)?;
    let episodes: Vec<FoundEpisode> = found
        .episodes
        .into_iter()
        .map(|e| FoundEpisode {
            start: e.start,
            end: e.end,
            nodes: e.nodes,
        })
        .collect();
    let doc = EvalOutput {
        command: "eval".into(),
        report: evaluate(&episodes, &truth.truth),
    };
    write_output(
        a.output.as_deref(),
        &(serde_json::to_string_pretty(&doc)? + "\n"),
    )
}

/// Parse `args`, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INFEASIBLE } else { 0 };
        }
    };
    let res = match &cli.command {
        Command::Segment(a) => cmd_segment(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Eval(a) => cmd_eval(a),
    };
    match res {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tempograph: {e}");
            exit_code(&e)
        }
    }
}
