use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use zonotopal::family::{fixed_size, generate_family};
use zonotopal::filtration::{
    graded_hilbert_by_rank, hilbert_sequence, EngineConfig, Labeling, Mode,
};
use zonotopal::graph::{HilbertSequence, Multigraph, DEFAULT_MAX_EDGES, HARD_MAX_EDGES};
use zonotopal::presentation::{
    deformed_relations, dimension_consistency, graded_relations, redundancy_filter,
    verify_relations, DEFAULT_MAX_VERTICES,
};
use zonotopal::series::{rat, PolySeries};
use zonotopal::strata::{
    check_scale_invariance, check_specialization, conjecture_report, sweep, ParameterPoint,
    Provenance, SweepConfig,
};
use zonotopal::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "zonotopal",
    version,
    about = "Filtered Hilbert sequences of deformed graphical zonotopal algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hilbert sequence of one graph for each --f.
    Hilbert(HilbertArgs),
    /// One row per (n, f) over a family and a range of sizes.
    Table(TableArgs),
    /// Check relations, dimensions and invariances; exit 4 if a required check fails.
    Verify(HilbertArgs),
    /// Group sampled parameters by Hilbert sequence.
    Sweep(SweepArgs),
    /// Evaluate recorded closed forms and recursions over a size range.
    Conjectures(TableArgs),
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// Refuse graphs with more edges than this.
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Whether --f is the series in the relations (as in the reference
    /// tables) or the one applied to the vertex flows.
    #[arg(long, value_enum, default_value_t = LabelingArg::Relation)]
    labeling: LabelingArg,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct GraphSource {
    /// Edge-list file.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Family token, e.g. chain, cycle, dn, leg:3.
    #[arg(long)]
    family: Option<String>,
    /// Vertex count; a range such as 3..13 for table and conjectures.
    #[arg(long)]
    n: Option<String>,
}

#[derive(Args)]
struct HilbertArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Series, e.g. "u+u^2" or "1,1,-1/2"; repeatable. Defaults to u.
    #[arg(long = "f")]
    fs: Vec<String>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long = "f")]
    fs: Vec<String>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Comma-separated degrees whose coefficients are sampled, e.g. 2,3.
    #[arg(long, default_value = "")]
    mask: String,
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Registry key for special loci; defaults to the family token.
    #[arg(long)]
    locus: Option<String>,
    /// Extra points, kept regardless of the mask.
    #[arg(long = "f")]
    fs: Vec<String>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Modular,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelingArg {
    Relation,
    Generator,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

impl EngineArgs {
    fn config(&self) -> Result<EngineConfig, Failure> {
        if self.max_edges > HARD_MAX_EDGES {
            return Err(Failure::input(format!(
                "--max-edges may not exceed {HARD_MAX_EDGES}"
            )));
        }
        Ok(EngineConfig {
            max_edges: self.max_edges,
            mode: match self.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Modular => Mode::Modular,
            },
            labeling: match self.labeling {
                LabelingArg::Relation => Labeling::Relation,
                LabelingArg::Generator => Labeling::Generator,
            },
            ..EngineConfig::default()
        })
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Inconsistent(_) => EXIT_INCONSISTENT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: EXIT_INCONSISTENT,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Output text plus whether a required check failed.
struct Outcome {
    text: String,
    failed: bool,
}

fn parse_n(text: &str) -> CliResult<usize> {
    text.trim()
        .parse()
        .map_err(|_| Failure::input(format!("--n expects a vertex count, got {text:?}")))
}

fn parse_range(text: &str) -> CliResult<RangeInclusive<usize>> {
    let text = text.trim();
    let range = if let Some((a, b)) = text.split_once("..=").or_else(|| text.split_once("..")) {
        parse_n(a)?..=parse_n(b)?
    } else {
        let n = parse_n(text)?;
        n..=n
    };
    if range.is_empty() {
        return Err(Failure::input(format!("empty range {text:?}")));
    }
    Ok(range)
}

fn parse_series(fs: &[String]) -> CliResult<Vec<(String, PolySeries)>> {
    if fs.is_empty() {
        return Ok(vec![("u".into(), PolySeries::identity())]);
    }
    fs.iter()
        .map(|s| Ok((s.clone(), PolySeries::parse(s)?)))
        .collect()
}

/// A graph plus the identifier used in reports.
fn load_graph(source: &GraphSource) -> CliResult<(String, Multigraph)> {
    match (&source.graph, &source.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Ok((path.display().to_string(), Multigraph::parse(&text)?))
        }
        (None, Some(family)) => {
            let n = match (&source.n, fixed_size(family)) {
                (Some(n), _) => parse_n(n)?,
                (None, Some(n)) => n,
                (None, None) => return Err(Failure::input("--family needs --n")),
            };
            Ok((format!("{family} {n}"), generate_family(family, n)?))
        }
        _ => Err(Failure::input("give exactly one of --graph or --family")),
    }
}

fn family_range(source: &GraphSource) -> CliResult<(String, RangeInclusive<usize>)> {
    let family = source
        .family
        .clone()
        .ok_or_else(|| Failure::input("this command needs --family"))?;
    let range = match (&source.n, fixed_size(&family)) {
        (Some(n), _) => parse_range(n)?,
        (None, Some(n)) => n..=n,
        (None, None) => return Err(Failure::input("--family needs --n")),
    };
    Ok((family, range))
}

fn joined(h: &HilbertSequence, sep: &str) -> String {
    h.entries()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

#[derive(Serialize)]
struct ResultJson {
    graph: String,
    f: String,
    hilbert: HilbertSequence,
    cumulative: Vec<u64>,
    total_dim: u64,
    forest_count: u64,
    /// Indices `k` with `h_k^2 < h_{k-1} h_{k+1}`.
    log_concavity_violations: Vec<usize>,
}

#[derive(Serialize)]
struct TableRowJson {
    n: usize,
    #[serde(flatten)]
    result: ResultJson,
}

fn cmd_hilbert(args: &HilbertArgs) -> CliResult<Outcome> {
    let config = args.engine.config()?;
    let (id, g) = load_graph(&args.source)?;
    let mut rows = Vec::new();
    for (_, f) in parse_series(&args.fs)? {
        let r = hilbert_sequence(&g, &f, &config)?;
        rows.push(ResultJson {
            graph: id.clone(),
            f: r.normalized_f,
            cumulative: r.cumulative_dims,
            total_dim: r.total_dim,
            forest_count: r.forest_count,
            log_concavity_violations: r.hilbert_sequence.log_concavity_violations(),
            hilbert: r.hilbert_sequence,
        });
    }
    let text = match args.engine.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Tsv => rows
            .iter()
            .map(|r| joined(&r.hilbert, " ") + "\n")
            .collect(),
    };
    Ok(Outcome {
        text,
        failed: false,
    })
}

fn cmd_table(args: &TableArgs) -> CliResult<Outcome> {
    let config = args.engine.config()?;
    let (family, range) = family_range(&args.source)?;
    let series = parse_series(&args.fs)?;
    let jobs: Vec<(usize, &(String, PolySeries))> = range
        .flat_map(|n| series.iter().map(move |f| (n, f)))
        .collect();
    let rows: Vec<TableRowJson> = jobs
        .par_iter()
        .map(|(n, (label, f))| -> CliResult<TableRowJson> {
            let g = generate_family(&family, *n)?;
            let r = hilbert_sequence(&g, f, &config)?;
            Ok(TableRowJson {
                n: *n,
                result: ResultJson {
                    graph: format!("{family} {n}"),
                    f: label.clone(),
                    cumulative: r.cumulative_dims,
                    total_dim: r.total_dim,
                    forest_count: r.forest_count,
                    log_concavity_violations: r.hilbert_sequence.log_concavity_violations(),
                    hilbert: r.hilbert_sequence,
                },
            })
        })
        .collect::<CliResult<_>>()?;
    let text = match args.engine.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Tsv => rows
            .iter()
            .map(|r| {
                format!(
                    "{}\t{}\t{}\n",
                    r.n,
                    r.result.f,
                    joined(&r.result.hilbert, "\t")
                )
            })
            .collect(),
    };
    Ok(Outcome {
        text,
        failed: false,
    })
}

#[derive(Serialize)]
struct Check {
    name: String,
    f: String,
    required: bool,
    passed: bool,
    detail: String,
}

fn cmd_verify(args: &HilbertArgs) -> CliResult<Outcome> {
    let config = args.engine.config()?;
    let (id, g) = load_graph(&args.source)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, f: &str, required: bool, passed: bool, detail: String| {
        checks.push(Check {
            name: name.into(),
            f: f.into(),
            required,
            passed,
            detail,
        })
    };

    let graded = g.graded_hilbert(config.max_edges)?;
    let by_rank = graded_hilbert_by_rank(&g, &config)?;
    push(
        "graded_oracle",
        "u",
        true,
        graded == by_rank,
        format!("deletion-contraction {graded}; elimination {by_rank}"),
    );
    let relations_fit = g.vertex_count() <= DEFAULT_MAX_VERTICES;
    if relations_fit {
        let rels = graded_relations(&g, DEFAULT_MAX_VERTICES)?;
        let report = verify_relations(&g, &PolySeries::identity(), &rels, &config)?;
        let bad = report.relations.iter().filter(|c| !c.verified).count();
        push(
            "graded_relations",
            "u",
            true,
            report.all_verified,
            format!("{} relations, {bad} nonzero", rels.len()),
        );
    }

    for (label, f) in parse_series(&args.fs)? {
        let dims = dimension_consistency(&g, &f, &config)?;
        push(
            "dimension",
            &label,
            true,
            dims.consistent,
            format!(
                "filtered {} graded {} forests {}",
                dims.filtered_total, dims.graded_total, dims.forest_count
            ),
        );
        if relations_fit {
            let rels = deformed_relations(&g, &f, config.labeling, DEFAULT_MAX_VERTICES)?;
            for (name, set) in [
                ("deformed_relations", rels.clone()),
                ("filtered_relations", redundancy_filter(&rels)),
            ] {
                let report = verify_relations(&g, &f, &set, &config)?;
                let bad = report.relations.iter().filter(|c| !c.verified).count();
                push(
                    name,
                    &label,
                    true,
                    report.all_verified,
                    format!("{} relations, {bad} nonzero", set.len()),
                );
            }
        }
        let scale = check_scale_invariance(&g, &f, &[rat(2, 1), rat(-1, 1), rat(1, 3)], &config)?;
        push(
            "scale_invariance",
            &label,
            true,
            scale.holds,
            format!("sequence {}", scale.hilbert),
        );

        let d = g.max_degree().max(1);
        let generic = ParameterPoint::from_series(&f, d, Provenance::Explicit)?;
        let graded_point =
            ParameterPoint::from_series(&PolySeries::identity(), d, Provenance::Explicit)?;
        let spec = check_specialization(&g, &generic, &graded_point, &config)?;
        push(
            "graded_is_minimal",
            &label,
            true,
            spec.holds,
            format!("{} <= {}", spec.special_hilbert, spec.generic_hilbert),
        );
    }

    let failed = checks.iter().any(|c| c.required && !c.passed);
    let text = match args.engine.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                graph: String,
                passed: bool,
                checks: &'a [Check],
            }
            serde_json::to_string_pretty(&Report {
                graph: id,
                passed: !failed,
                checks: &checks,
            })? + "\n"
        }
        Format::Tsv => checks
            .iter()
            .map(|c| {
                let status = if c.passed { "PASS" } else { "FAIL" };
                format!("{}\t{}\t{status}\t{}\n", c.name, c.f, c.detail)
            })
            .collect(),
    };
    Ok(Outcome { text, failed })
}

fn parse_mask(text: &str) -> CliResult<BTreeSet<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>().map_err(|_| {
                Failure::input(format!("--mask expects comma-separated degrees, got {s:?}"))
            })
        })
        .collect()
}

fn cmd_sweep(args: &SweepArgs) -> CliResult<Outcome> {
    let config = args.engine.config()?;
    let (_, g) = load_graph(&args.source)?;
    let mut sweep_config = SweepConfig::new(parse_mask(&args.mask)?, args.samples, args.seed);
    sweep_config.engine = config;
    sweep_config.locus = args.locus.clone().or_else(|| args.source.family.clone());
    sweep_config.extra = args
        .fs
        .iter()
        .map(|s| PolySeries::parse(s))
        .collect::<Result<_, _>>()?;
    let report = sweep(&g, &sweep_config)?;
    let text = match args.engine.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Tsv => report
            .strata
            .iter()
            .map(|s| {
                format!(
                    "{}\t{}\t{}\t{}\n",
                    joined(&s.hilbert_sequence, " "),
                    s.count,
                    if s.lex_max { "lex_max" } else { "-" },
                    s.representatives.join(",")
                )
            })
            .collect(),
    };
    Ok(Outcome {
        text,
        failed: false,
    })
}

fn cmd_conjectures(args: &TableArgs) -> CliResult<Outcome> {
    let config = args.engine.config()?;
    let (family, range) = family_range(&args.source)?;
    let f = match args.fs.as_slice() {
        [] => PolySeries::u_plus_powers(&[2]),
        [one] => PolySeries::parse(one)?,
        _ => return Err(Failure::input("conjectures takes a single --f")),
    };
    let report = conjecture_report(&family, &f, range, &config)?;
    let text = match args.engine.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Tsv => report
            .claims
            .iter()
            .map(|c| {
                let failures: Vec<String> = c
                    .checks
                    .iter()
                    .filter(|k| !k.holds)
                    .map(|k| format!("n={}: expected {} got {}", k.n, k.expected, k.actual))
                    .collect();
                let status = if c.holds { "PASS" } else { "FAIL" };
                format!(
                    "{}\t{status}\t{} sizes\t{}\n",
                    c.claim,
                    c.checks.len(),
                    failures.join("; ")
                )
            })
            .collect(),
    };
    // Conjectures are informational; failures never change the exit code.
    Ok(Outcome {
        text,
        failed: false,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Hilbert(a) => cmd_hilbert(a),
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Conjectures(a) => cmd_conjectures(a),
    };
    match outcome {
        Ok(o) => {
            print!("{}", o.text);
            if o.failed {
                ExitCode::from(EXIT_INCONSISTENT)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
