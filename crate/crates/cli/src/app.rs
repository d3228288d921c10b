//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use chordcolor::counterexamples::{
    instance_c5, instance_ea, load_thesis_instance, plain_instance, verify, NamedInstance,
};
use chordcolor::diagram::conflict_graph_from_book;
use chordcolor::formula::{build_phi, Eval, Formula, NameStyle};
use chordcolor::generator::{gen_corpus, InstanceFile};
use chordcolor::solvers::coloring::{reconstruct_coloring, validate_coloring};
use chordcolor::solvers::unger::render_trace;
use chordcolor::solvers::{
    solve_chrono, solve_dpll_with_budget, solve_unger, Budget, ConflictChoice, JumpChoice, Outcome,
    SearchStats, UngerConfig, VariableOrder,
};
use chordcolor::subgraphs::{important_subgraphs, Filter, FilterVariant, DEFAULT_MAX_CYCLE};
use chordcolor::{ChordDiagram, CircleGraph, LevelRule, SpineInstance};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, Method};
use crate::plot::{scatter_svg, PlotSpec};
use crate::{exit, CliError};

/// Environment variable naming the default corpus directory for `bench`.
pub const CORPUS_ENV: &str = "CHORDCOLOR_CORPUS";

#[derive(Debug, Parser)]
#[command(
    name = "chordcolor",
    version,
    about = "Circle-graph 3-coloring via chord diagrams and SAT formulas"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn a spine-order instance into its conflict circle graph.
    Convert {
        input: PathBuf,
        /// Write the instance file here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the level of every chord.
    Levels {
        input: String,
        #[arg(long, value_enum, default_value_t = RuleArg::Longest)]
        rule: RuleArg,
    },
    /// List important subgraphs.
    Subgraphs {
        input: String,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Build the formula and print or export it.
    Formula {
        input: String,
        #[command(flatten)]
        filter: FilterArgs,
        /// Write DIMACS CNF to this file.
        #[arg(long)]
        dimacs: Option<PathBuf>,
        /// Keep duplicate clauses in the DIMACS output.
        #[arg(long)]
        raw: bool,
    },
    /// Run a solver on the formula.
    Solve(SolveArgs),
    /// Solve, reconstruct a coloring and validate it.
    Color(SolveArgs),
    /// Check a refutation instance.
    Verify {
        #[arg(value_enum)]
        instance: VerifyTarget,
        /// Instance file (required for `thesis`).
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        variant: Option<VariantArg>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Generate a seeded corpus of 3-colorable instances.
    Gen {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        nmin: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run solvers over a corpus and write one CSV record per run.
    Bench {
        #[arg(long, env = CORPUS_ENV)]
        corpus: PathBuf,
        /// Comma-separated subset of unger, chrono, dpll.
        #[arg(long, value_delimiter = ',', default_value = "unger,chrono,dpll")]
        methods: Vec<Method>,
        /// Seconds per run.
        #[arg(long, default_value_t = 10.0)]
        budget: f64,
        /// Assignment steps per run, in addition to the time limit.
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write 0 for elapsed_ms.
        #[arg(long)]
        no_time: bool,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Scatter plot of a bench CSV as SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value = "n")]
        x: String,
        #[arg(long, default_value = "leaves")]
        y: String,
        #[arg(long)]
        log_y: bool,
        /// Keep only these methods.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<Method>,
        #[arg(long)]
        title: Option<String>,
    },
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Ea)]
    variant: VariantArg,
    /// Longest cycle searched for.
    #[arg(long, default_value_t = DEFAULT_MAX_CYCLE)]
    max_cycle: usize,
}

#[derive(Debug, Args)]
struct SolveArgs {
    input: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Unger)]
    method: MethodArg,
    /// File listing variables in assignment order; unlisted ones follow.
    #[arg(long)]
    order: Option<PathBuf>,
    /// Seconds.
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Print the event trace (unger only).
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum)]
    conflict: Option<ConflictArg>,
    #[arg(long, value_enum)]
    jump: Option<JumpArg>,
    /// File of jump targets consumed one per jump.
    #[arg(long)]
    jump_script: Option<PathBuf>,
    /// Ignore the settings bundled with a builtin instance.
    #[arg(long)]
    plain: bool,
    #[command(flatten)]
    filter: FilterArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Longest,
    Shallowest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Ea,
    Thesis,
}

impl From<VariantArg> for FilterVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Ea => FilterVariant::ExtendedAbstract,
            VariantArg::Thesis => FilterVariant::Thesis,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Unger,
    Chrono,
    Dpll,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConflictArg {
    First,
    Last,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum JumpArg {
    Deepest,
    Shallowest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Ea,
    C5,
    Thesis,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Kv,
}

/// Runs the CLI with process stdout and stderr; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    // unlocked handles: worker threads may log while a command runs
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit::USAGE
        }
    }
}

/// An instance named on the command line with its bundled solver settings.
struct Input {
    graph: CircleGraph,
    named: Option<NamedInstance>,
}

fn load_input(arg: &str) -> Result<Input, CliError> {
    match arg {
        "builtin:ea" => {
            let inst = instance_ea();
            return Ok(Input {
                graph: inst.graph.clone(),
                named: Some(inst),
            });
        }
        "builtin:c5" => {
            let inst = instance_c5();
            return Ok(Input {
                graph: inst.graph.clone(),
                named: Some(inst),
            });
        }
        s if s.starts_with("builtin:") => {
            return Err(CliError::Usage(format!(
                "unknown builtin `{s}` (expected builtin:ea or builtin:c5)"
            )))
        }
        _ => {}
    }
    let path = Path::new(arg);
    let text = if path.exists() {
        fs::read_to_string(path)?
    } else if arg.split_whitespace().count() > 1 {
        arg.to_string()
    } else {
        return Err(CliError::Input(format!("no such file `{arg}`")));
    };
    Ok(Input {
        graph: parse_graph_text(&text)?,
        named: None,
    })
}

/// Instance file, a single diagram line, or an edge list (realized).
fn parse_graph_text(text: &str) -> Result<CircleGraph, CliError> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.len() == 1 {
        return Ok(ChordDiagram::parse(lines[0])?.to_graph());
    }
    let first_is_header = lines
        .first()
        .map(|l| l.split_whitespace().all(|t| t.parse::<u64>().is_ok()))
        .unwrap_or(false);
    if first_is_header {
        return Ok(InstanceFile::parse(text)?.graph);
    }
    let g = CircleGraph::parse_edge_list(text)?;
    Ok(plain_instance("input", g)?.graph)
}

fn diagram_of(g: &CircleGraph) -> Result<&ChordDiagram, CliError> {
    g.diagram()
        .ok_or_else(|| CliError::Input("graph has no chord diagram".into()))
}

fn phi_for(g: &CircleGraph, f: &FilterArgs) -> Result<(Formula, Vec<String>), CliError> {
    let d = diagram_of(g)?;
    let filter = Filter::new(f.variant.into());
    let imp = important_subgraphs(g, d, &filter, f.max_cycle)?;
    let mut notes = imp.warnings;
    notes.extend(filter.notes());
    Ok((build_phi(g, &imp.subgraphs)?, notes))
}

fn budget(secs: Option<f64>, nodes: Option<u64>) -> Result<Budget, CliError> {
    let time = match secs {
        Some(s) if !(s.is_finite() && s > 0.0) => {
            return Err(CliError::Usage(format!("budget must be positive, got {s}")))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    Ok(Budget { time, nodes })
}

fn names_in(text: &str) -> Vec<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .collect()
}

struct Solved {
    phi: Formula,
    stats: SearchStats,
    trace: Option<String>,
}

fn solve(args: &SolveArgs, err: &mut dyn Write) -> Result<(CircleGraph, Solved), CliError> {
    let input = load_input(&args.input)?;
    let (phi, notes) = phi_for(&input.graph, &args.filter)?;
    for n in notes {
        let _ = writeln!(err, "note: {n}");
    }
    let bundle = if args.plain {
        None
    } else {
        input.named.as_ref().and_then(|n| n.expected.unger.clone())
    };
    let order = match (&args.order, &bundle) {
        (Some(p), _) => VariableOrder::parse(&phi, &fs::read_to_string(p)?)?,
        (None, Some(b)) => VariableOrder::parse(&phi, &b.order)?,
        (None, None) => VariableOrder::table(&phi),
    };
    let budget = budget(args.budget, args.node_budget)?;
    let stats_trace = match args.method {
        MethodArg::Unger => {
            let conflict = match (args.conflict, &bundle) {
                (Some(ConflictArg::First), _) => ConflictChoice::First,
                (Some(ConflictArg::Last), _) => ConflictChoice::Last,
                (None, Some(b)) => b.conflict,
                (None, None) => ConflictChoice::First,
            };
            let script_text = match (&args.jump_script, &bundle, args.jump) {
                (Some(p), _, _) => Some(fs::read_to_string(p)?),
                (None, Some(b), None) => Some(b.script.clone()),
                _ => None,
            };
            let jump = match (script_text, args.jump) {
                (Some(t), _) => JumpChoice::Scripted(
                    names_in(&t)
                        .into_iter()
                        .map(|n| phi.var_by_name(n))
                        .collect::<Result<_, _>>()?,
                ),
                (None, Some(JumpArg::Shallowest)) => JumpChoice::Shallowest,
                (None, _) => JumpChoice::Deepest,
            };
            let cfg = UngerConfig {
                conflict,
                jump,
                trace: args.trace,
            };
            let run = solve_unger(&phi, &order, budget, &cfg)?;
            let trace = args.trace.then(|| render_trace(&phi, &run.trace));
            (run.stats, trace)
        }
        MethodArg::Chrono => (solve_chrono(&phi, &order, budget), None),
        MethodArg::Dpll => (solve_dpll_with_budget(&phi, budget), None),
    };
    if args.trace && !matches!(args.method, MethodArg::Unger) {
        let _ = writeln!(err, "note: --trace applies to the unger method only");
    }
    let (stats, trace) = stats_trace;
    if let Outcome::Sat(a) = &stats.outcome {
        if phi.eval(a) != Eval::Satisfied {
            return Err(CliError::Input(
                "solver returned an assignment that is not a model".into(),
            ));
        }
    }
    Ok((input.graph, Solved { phi, stats, trace }))
}

fn print_stats(out: &mut dyn Write, s: &SearchStats) -> std::io::Result<()> {
    writeln!(out, "outcome: {}", s.outcome.label())?;
    writeln!(out, "leaves: {}", s.leaves)?;
    writeln!(out, "jumps: {}", s.jumps)?;
    writeln!(out, "nodes: {}", s.nodes)?;
    writeln!(out, "elapsed_ms: {}", s.elapsed.as_millis())
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Convert { input, out: dest } => {
            let spine = SpineInstance::parse(&fs::read_to_string(&input)?)?;
            let file = InstanceFile {
                graph: conflict_graph_from_book(&spine),
                seed: 0,
                witness: None,
                expect: Vec::new(),
            };
            match dest {
                Some(p) => file.write(&p)?,
                None => write!(out, "{}", file.render())?,
            }
            Ok(exit::OK)
        }
        Command::Levels { input, rule } => {
            let g = load_input(&input)?.graph;
            let d = diagram_of(&g)?;
            let rule = match rule {
                RuleArg::Longest => LevelRule::LongestChain,
                RuleArg::Shallowest => LevelRule::ShallowestEncaser,
            };
            let lv = d.levels_with(rule);
            for l in 1..=lv.depth() {
                let names: Vec<&str> = lv.members(l).into_iter().map(|v| g.label(v)).collect();
                writeln!(out, "level {l}: {}", names.join(" "))?;
            }
            Ok(exit::OK)
        }
        Command::Subgraphs { input, filter } => {
            let g = load_input(&input)?.graph;
            let d = diagram_of(&g)?;
            let f = Filter::new(filter.variant.into());
            let imp = important_subgraphs(&g, d, &f, filter.max_cycle)?;
            for w in imp.warnings.iter().chain(f.notes().iter()) {
                writeln!(err, "note: {w}")?;
            }
            for h in &imp.subgraphs {
                writeln!(out, "{}", h.report_line(&g))?;
            }
            Ok(exit::OK)
        }
        Command::Formula {
            input,
            filter,
            dimacs,
            raw,
        } => {
            let g = load_input(&input)?.graph;
            let (phi, notes) = phi_for(&g, &filter)?;
            for n in notes {
                writeln!(err, "note: {n}")?;
            }
            match dimacs {
                Some(p) => {
                    let text = if raw {
                        phi.export_dimacs_raw()
                    } else {
                        phi.export_dimacs()
                    };
                    fs::write(&p, text)?;
                    writeln!(
                        out,
                        "wrote {} ({} variables, {} clause entries)",
                        p.display(),
                        phi.var_count(),
                        phi.clause_count()
                    )?;
                }
                None => {
                    writeln!(
                        out,
                        "# {} variables ({} pair), {} clauses",
                        phi.var_count(),
                        phi.pair_var_count(),
                        phi.clause_count()
                    )?;
                    for c in phi.clauses() {
                        writeln!(out, "{}", phi.render_clause(c, NameStyle::Full))?;
                    }
                }
            }
            Ok(exit::OK)
        }
        Command::Solve(args) => {
            let (_, s) = solve(&args, err)?;
            if let Some(t) = &s.trace {
                write!(out, "{t}")?;
            }
            print_stats(out, &s.stats)?;
            if let Outcome::Sat(a) = &s.stats.outcome {
                let trues: Vec<String> = s
                    .phi
                    .vars()
                    .iter()
                    .enumerate()
                    .filter(|&(v, _)| a.get(v as u32) == Some(true))
                    .map(|(v, _)| s.phi.var_name(v as u32, NameStyle::Full))
                    .collect();
                writeln!(out, "true: {}", trues.join(" "))?;
            }
            Ok(exit::OK)
        }
        Command::Color(args) => {
            let (g, s) = solve(&args, err)?;
            print_stats(out, &s.stats)?;
            let Outcome::Sat(a) = &s.stats.outcome else {
                writeln!(out, "coloring: none")?;
                return Ok(exit::NEGATIVE);
            };
            let rec = reconstruct_coloring(&g, &s.phi, a);
            if let Some(d) = &rec.diagnostic {
                writeln!(err, "note: {d}")?;
            }
            match rec.coloring {
                Some(c) if validate_coloring(&g, &c)? => {
                    let parts: Vec<String> = c
                        .iter()
                        .enumerate()
                        .map(|(v, k)| format!("{}:{k}", g.label(v)))
                        .collect();
                    writeln!(out, "coloring: {}", parts.join(" "))?;
                    Ok(exit::OK)
                }
                Some(_) => {
                    writeln!(out, "coloring: invalid")?;
                    Ok(exit::NEGATIVE)
                }
                None => {
                    writeln!(out, "coloring: none")?;
                    Ok(exit::NEGATIVE)
                }
            }
        }
        Command::Verify {
            instance,
            file,
            variant,
            format,
        } => {
            let inst = match (instance, &file) {
                (VerifyTarget::Ea, None) => instance_ea(),
                (VerifyTarget::C5, None) => instance_c5(),
                (VerifyTarget::Thesis, Some(p)) => load_thesis_instance(p)?,
                (VerifyTarget::Thesis, None) => {
                    return Err(CliError::Usage(
                        "verify thesis needs --file <instance>; no thesis data is bundled".into(),
                    ))
                }
                (_, Some(_)) => {
                    return Err(CliError::Usage(
                        "--file applies to `verify thesis` only".into(),
                    ))
                }
            };
            let variant = variant.map(Into::into).unwrap_or(inst.expected.variant);
            let report = verify(&inst, variant)?;
            match format {
                Format::Table => write!(out, "{report}")?,
                Format::Kv => write!(out, "{}", report.to_key_values())?,
            }
            Ok(if report.overall {
                exit::OK
            } else {
                exit::NEGATIVE
            })
        }
        Command::Gen {
            count,
            nmin,
            nmax,
            seed,
            out: dir,
        } => {
            if nmin > nmax {
                return Err(CliError::Usage(format!(
                    "--nmin {nmin} exceeds --nmax {nmax}"
                )));
            }
            let rows = gen_corpus(count, nmin, nmax, seed, &dir)?;
            writeln!(out, "wrote {} instances to {}", rows.len(), dir.display())?;
            Ok(exit::OK)
        }
        Command::Bench {
            corpus,
            methods,
            budget: secs,
            node_budget,
            csv: dest,
            no_time,
            filter,
        } => {
            if methods.is_empty() {
                return Err(CliError::Usage("--methods is empty".into()));
            }
            let cfg = BenchConfig {
                methods,
                budget: budget(Some(secs), node_budget)?,
                variant: filter.variant.into(),
                no_time,
            };
            let records = bench::run_bench_dir(&corpus, &cfg)?;
            match dest {
                Some(p) => bench::write_csv(fs::File::create(p)?, &records)?,
                None => bench::write_csv(&mut *out, &records)?,
            }
            write!(
                err,
                "{}",
                bench::render_summary(&bench::summarize(&records))
            )?;
            Ok(exit::OK)
        }
        Command::Plot {
            csv,
            svg,
            x,
            y,
            log_y,
            methods,
            title,
        } => {
            let mut records = bench::read_csv(&fs::read_to_string(&csv)?)?;
            if !methods.is_empty() {
                records.retain(|r| methods.contains(&r.method));
            }
            let spec = PlotSpec { x, y, log_y, title };
            fs::write(&svg, scatter_svg(&records, &spec)?)?;
            writeln!(out, "wrote {} ({} points)", svg.display(), records.len())?;
            Ok(exit::OK)
        }
    }
}
