//! `ampcg`: command-line access to every stage of the AMP chain graph pipeline.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amp_chain::causal::{enumerate_adjusting_sets_with, AdjustLimits, Provenance};
use amp_chain::equivalence::{same_skeleton, triplexes, DEFAULT_MAX_EDGES};
use amp_chain::gaussian::{bound_effect, random_model, sample, Dataset, EffectBoundReport, ModelConfig};
use amp_chain::io::{
    graph_to_json, labeling_to_dot, labeling_to_json, marks_to_json, parse_graph, serialize_graph, to_dot,
};
use amp_chain::oracle::{run_cross_checks, Outcome};
use amp_chain::strong::accelerator_labels;
use amp_chain::transform::{class_by_merge_split, maximally_oriented, minimally_oriented, DEFAULT_MAX_CLASS};
use amp_chain::{
    enumerate_class, equivalent, essential_graph, label_graph, separated, AdjustMode, AdjustingSet, ChainGraph, Error,
    NodeSet, SeparationQuery, StrongEdgeSet, StrongLabeling,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ampcg", version, about = "Essential graphs, strong edges and effect bounds for AMP chain graphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest number of edges for which equivalence classes are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    MergeSplit,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Extreme {
    Min,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Class,
    Maxoriented,
    Superset,
}

impl From<Mode> for AdjustMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Class => AdjustMode::ClassEnum,
            Mode::Maxoriented => AdjustMode::MaxOriented,
            Mode::Superset => AdjustMode::Superset,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that a graph file describes a chain graph.
    Validate { graph: PathBuf },
    /// List chain components in topological order.
    Components { graph: PathBuf },
    /// Test whether X and Y are separated given Z.
    Sep {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        z: Vec<String>,
    },
    /// Test Markov equivalence of two graphs.
    Equiv { first: PathBuf, second: PathBuf },
    /// List every member of the equivalence class.
    Class {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Brute)]
        via: Via,
    },
    /// Build the essential graph.
    Eg { graph: PathBuf },
    /// Label the strong edges of the essential graph.
    Strong {
        graph: PathBuf,
        /// Only apply the fast rules, which may miss strong edges.
        #[arg(long)]
        rules_only: bool,
    },
    /// Minimally or maximally oriented members of the class.
    Minmax {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: Extreme,
    },
    /// Candidate adjusting sets for the effect of X.
    Adjust {
        graph: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value_t = Mode::Maxoriented)]
        mode: Mode,
    },
    /// Draw a dataset from a random linear Gaussian model on the graph.
    Sample {
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bound the effect of X on Y over the candidate adjusting sets.
    Bound {
        graph: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value_t = Mode::Maxoriented)]
        mode: Mode,
    },
    /// Run every brute-force cross-check on the graph.
    Oracle { graph: PathBuf },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("format {0} is not available for this command")]
    Unsupported(&'static str),
    #[error("{0} cross-checks failed")]
    ChecksFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Unsupported(_) | CliError::Lib(Error::Io(_)) => 1,
            CliError::Lib(Error::TooLarge { .. }) => 3,
            CliError::Lib(_) | CliError::ChecksFailed(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load(path: &Path) -> CliResult<ChainGraph> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    Ok(parse_graph(&text)?)
}

fn node_set(g: &ChainGraph, names: &[String]) -> CliResult<NodeSet> {
    Ok(g.node_set(names)?)
}

fn braces(names: Vec<String>) -> String {
    format!("{{{}}}", names.join(", "))
}

fn push_json(out: &mut String, v: &Value) {
    out.push_str(&serde_json::to_string_pretty(v).expect("JSON values serialize"));
    out.push('\n');
}

/// Writes a graph as text, JSON or DOT.
fn push_graph(out: &mut String, format: Format, g: &ChainGraph) {
    match format {
        Format::Text => out.push_str(&serialize_graph(g)),
        Format::Json => push_json(out, &graph_to_json(g)),
        Format::Dot => out.push_str(&to_dot(g, None)),
    }
}

fn no_dot(format: Format) -> CliResult<()> {
    match format {
        Format::Dot => Err(CliError::Unsupported("dot")),
        _ => Ok(()),
    }
}

fn run(cli: &Cli, out: &mut String) -> CliResult<()> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { graph } => {
            let g = load(graph)?;
            match format {
                Format::Text => writeln!(out, "valid chain graph: {} nodes, {} edges", g.n(), g.edge_count()).unwrap(),
                _ => push_graph(out, format, &g),
            }
        }
        Command::Components { graph } => {
            no_dot(format)?;
            let g = load(graph)?;
            let parts = g.chain_components();
            let comps: Vec<Vec<String>> = parts.components.iter().map(|&c| g.set_names(c)).collect();
            match format {
                Format::Json => push_json(out, &json!({ "components": comps })),
                _ => {
                    for c in comps {
                        writeln!(out, "{}", braces(c)).unwrap();
                    }
                }
            }
        }
        Command::Sep { graph, x, y, z } => {
            no_dot(format)?;
            let g = load(graph)?;
            let q = SeparationQuery::new(node_set(&g, x)?, node_set(&g, y)?, node_set(&g, z)?);
            let sep = separated(&g, &q)?;
            match format {
                Format::Json => push_json(out, &json!({ "x": x, "y": y, "z": z, "separated": sep })),
                _ => writeln!(out, "{}", if sep { "separated" } else { "not separated" }).unwrap(),
            }
        }
        Command::Equiv { first, second } => {
            no_dot(format)?;
            let (g, h) = (load(first)?, load(second)?);
            let eq = equivalent(&g, &h)?;
            let skeleton = g.names() == h.names() && same_skeleton(&g, &h);
            let triplex = g.names() == h.names() && triplexes(&g) == triplexes(&h);
            match format {
                Format::Json => {
                    push_json(out, &json!({ "equivalent": eq, "same_skeleton": skeleton, "same_triplexes": triplex }))
                }
                _ => writeln!(out, "{}", if eq { "equivalent" } else { "not equivalent" }).unwrap(),
            }
        }
        Command::Class { graph, via } => {
            let g = load(graph)?;
            let class = match via {
                Via::Brute => enumerate_class(&g, cli.max_edges)?,
                Via::MergeSplit => class_by_merge_split(&g, DEFAULT_MAX_CLASS)?,
            };
            match format {
                Format::Text => {
                    writeln!(out, "{} members", class.len()).unwrap();
                    for m in &class.members {
                        writeln!(out, "{m}").unwrap();
                    }
                }
                Format::Json => push_json(
                    out,
                    &json!({
                        "size": class.len(),
                        "members": class.members.iter().map(graph_to_json).collect::<Vec<_>>(),
                    }),
                ),
                Format::Dot => class.members.iter().for_each(|m| out.push_str(&to_dot(m, None))),
            }
        }
        Command::Eg { graph } => {
            let eg = essential_graph(&load(graph)?)?;
            match format {
                Format::Json => {
                    push_json(out, &json!({ "graph": graph_to_json(&eg.graph), "marks": marks_to_json(&eg.marks) }))
                }
                _ => push_graph(out, format, &eg.graph),
            }
        }
        Command::Strong { graph, rules_only } => {
            let g = load(graph)?;
            let labeling = if *rules_only { rule_labels(&g)? } else { label_graph(&g)? };
            match format {
                Format::Text => {
                    out.push_str(&serialize_graph(&labeling.graph));
                    let strong = labeling.strong.describe(labeling.graph.names());
                    writeln!(out, "{} strong edges", strong.len()).unwrap();
                    for s in strong {
                        writeln!(out, "strong {s}").unwrap();
                    }
                }
                Format::Json => push_json(out, &labeling_to_json(&labeling)),
                Format::Dot => out.push_str(&labeling_to_dot(&labeling)),
            }
        }
        Command::Minmax { graph, mode } => {
            let g = load(graph)?;
            let members = match mode {
                Extreme::Min => minimally_oriented(&g, DEFAULT_MAX_CLASS)?,
                Extreme::Max => vec![maximally_oriented(&g)?],
            };
            match format {
                Format::Text => members.iter().for_each(|m| writeln!(out, "{m}").unwrap()),
                Format::Json => {
                    push_json(out, &json!({ "members": members.iter().map(graph_to_json).collect::<Vec<_>>() }))
                }
                Format::Dot => members.iter().for_each(|m| out.push_str(&to_dot(m, None))),
            }
        }
        Command::Adjust { graph, x, mode } => {
            no_dot(format)?;
            let g = load(graph)?;
            let l = label_graph(&g)?;
            let target = g.node(x)?;
            let sets = enumerate_adjusting_sets_with(&l, target, (*mode).into(), limits(cli))?;
            match format {
                Format::Json => push_json(
                    out,
                    &json!({ "target": x, "sets": sets.iter().map(|a| set_json(&g, a)).collect::<Vec<_>>() }),
                ),
                _ => {
                    for a in &sets {
                        writeln!(out, "{}  ({})", braces(g.set_names(a.set)), provenance(&g, a.provenance)).unwrap();
                    }
                }
            }
        }
        Command::Sample { graph, n, out: path } => {
            no_dot(format)?;
            let g = load(graph)?;
            let model = random_model(&g, cli.seed, &ModelConfig::default());
            let data = sample(&model, *n, cli.seed);
            let file = File::create(path).map_err(|source| CliError::Read { path: path.clone(), source })?;
            data.write_csv(file)?;
            let coefs: Vec<(String, f64)> =
                model.coefficients().iter().map(|(&(a, b), &w)| (format!("{}->{}", g.name(a), g.name(b)), w)).collect();
            match format {
                Format::Json => push_json(
                    out,
                    &json!({
                        "rows": n,
                        "out": path.display().to_string(),
                        "coefficients": coefs.iter().map(|(e, w)| json!({ "edge": e, "weight": w })).collect::<Vec<_>>(),
                    }),
                ),
                _ => {
                    writeln!(out, "wrote {n} rows to {}", path.display()).unwrap();
                    for (e, w) in coefs {
                        writeln!(out, "coefficient {e} {w:.6}").unwrap();
                    }
                }
            }
        }
        Command::Bound { graph, data, x, y, mode } => {
            no_dot(format)?;
            let g = load(graph)?;
            let l = label_graph(&g)?;
            let file = File::open(data).map_err(|source| CliError::Read { path: data.clone(), source })?;
            let cov = Dataset::read_csv(BufReader::new(file))?.covariance_over(g.names())?;
            let report = bound_effect(&cov, &l, g.node(x)?, g.node(y)?, (*mode).into(), limits(cli))?;
            push_report(out, format, &g, x, y, &report);
        }
        Command::Oracle { graph } => {
            no_dot(format)?;
            let g = load(graph)?;
            let checks = run_cross_checks(&g, cli.max_edges);
            let failed = checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail(_))).count();
            match format {
                Format::Json => {
                    let rows: Vec<Value> = checks
                        .iter()
                        .map(|c| {
                            let (status, detail) = match &c.outcome {
                                Outcome::Pass => ("pass", None),
                                Outcome::Fail(d) => ("fail", Some(d)),
                                Outcome::Skipped(d) => ("skipped", Some(d)),
                            };
                            json!({ "check": c.name, "status": status, "detail": detail })
                        })
                        .collect();
                    push_json(out, &json!({ "checks": rows }));
                }
                _ => checks.iter().for_each(|c| writeln!(out, "{c}").unwrap()),
            }
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
        }
    }
    Ok(())
}

fn limits(cli: &Cli) -> AdjustLimits {
    AdjustLimits { max_edges: cli.max_edges, ..AdjustLimits::default() }
}

/// Double-blocked edges plus the directed edges the fast rules find.
fn rule_labels(g: &ChainGraph) -> CliResult<StrongLabeling> {
    let eg = essential_graph(g)?;
    let directed = accelerator_labels(&eg.marks, &Default::default());
    let undirected = eg.marks.edges().into_iter().filter(|&(a, b)| eg.marks.double_blocked(a, b)).collect();
    Ok(StrongLabeling { graph: eg.graph, strong: StrongEdgeSet { directed, undirected } })
}

fn provenance(g: &ChainGraph, p: Provenance) -> String {
    match p {
        Provenance::TrueGraph => "true graph".into(),
        Provenance::ClassMember => "class member".into(),
        Provenance::MaxOriented(s) => format!("maximally oriented, S = {}", braces(g.set_names(s))),
        Provenance::Superset => "superset".into(),
    }
}

fn set_json(g: &ChainGraph, a: &AdjustingSet) -> Value {
    json!({ "set": g.set_names(a.set), "provenance": provenance(g, a.provenance) })
}

fn push_report(out: &mut String, format: Format, g: &ChainGraph, x: &str, y: &str, r: &EffectBoundReport) {
    match format {
        Format::Json => push_json(
            out,
            &json!({
                "x": x,
                "y": y,
                "lower": r.lower,
                "upper": r.upper,
                "entries": r
                    .entries
                    .iter()
                    .map(|(a, e)| {
                        let mut v = set_json(g, a);
                        v["effect"] = json!(e);
                        v
                    })
                    .collect::<Vec<_>>(),
            }),
        ),
        _ => {
            writeln!(out, "effect of {x} on {y}").unwrap();
            for (a, e) in &r.entries {
                writeln!(out, "  {:<24} {e:>12.6}", braces(g.set_names(a.set))).unwrap();
            }
            writeln!(out, "bounds [{:.6}, {:.6}]", r.lower, r.upper).unwrap();
        }
    }
}
