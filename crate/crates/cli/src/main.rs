use clap::{Args, Parser, Subcommand, ValueEnum};
use nestcolor::coloring::{
    brute_force_color_with, compute_phi, list_color, verify_coloring, ColorSet, ListAssignment, DEFAULT_ORACLE_CAP,
};
use nestcolor::decomposition::CliqueSumDecomposition;
use nestcolor::gadgets::{make_gadget, make_pattern_gadget, verify_gadget, Pattern, PatternFamily};
use nestcolor::graph::{Graph, Vertex};
use nestcolor::io::{self, GraphInput};
use nestcolor::nest::{nest_reduce, paper_depth};
use nestcolor::pipeline::{solve_pipeline, Answer, KPolicy, PipelineError, SolveConfig};
use nestcolor::plane::PlaneGraph;
use nestcolor::reductions::{
    lift_apex, planar3sat_to_coloring, precolor_attach, quasiedge_replace, small_critical_graph, wheel_fill,
    CriticalGraphInput,
};
use nestcolor::treewidth::{decompose, decomposition_from_order, exact_order, validate_td};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

// stdout may be a closed pipe (`| head`); output errors are not failures
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "nestcolor", version, about = "List coloring of embedded graphs")]
struct Cli {
    /// Recorded in reports; every algorithm here is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Nest depth (`paper` or an integer); palette size for `gadget` and `lift`.
    #[arg(long, global = true, default_value = "paper", value_parser = parse_k)]
    k: KPolicy,
    /// Accept a fixed nest depth below the proven one.
    #[arg(long, global = true)]
    unsafe_k_ack: bool,
    /// Also run the exhaustive oracle; its verdict wins.
    #[arg(long, global = true)]
    cross_check: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_k(s: &str) -> Result<KPolicy, String> {
    if s == "paper" {
        return Ok(KPolicy::Paper);
    }
    s.parse().map(KPolicy::Fixed).map_err(|_| format!("expected `paper` or an integer, found `{s}`"))
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide list-colorability of an embedding or a pieces file.
    Solve {
        input: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Where to write the coloring of the reduced graph.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        min_list: usize,
        #[arg(long, default_value_t = 63)]
        max_list: usize,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
    /// Remove nest eggs from an embedding.
    Reduce {
        input: PathBuf,
        /// Vertices that must not be removed.
        #[arg(long)]
        x_file: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
        /// Removal log, one vertex per line.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Tree decomposition in PACE format.
    Tw {
        input: PathBuf,
        /// Exact width (at most 20 vertices).
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Colorings of X that extend to the whole graph.
    Phi {
        input: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Comma-separated vertex sequence.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<Vertex>,
    },
    /// Emit a gadget for a pattern family.
    Gadget {
        /// Excluded patterns, comma-separated (AAA, AAB, ABA, ABB, ABC).
        #[arg(long, value_delimiter = ',', conflicts_with = "index")]
        exclude: Vec<String>,
        /// Build the single-pattern gadget S_i instead.
        #[arg(long)]
        index: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Planar 3-SAT instance to a 5-coloring instance.
    Reduce3sat {
        input: PathBuf,
        /// Also decide 5-colorability and extract an assignment.
        #[arg(long)]
        solve: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Replace every edge of an embedding by the quasi-edge gadget.
    Quasiedge {
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Fill faces with wheels. Without `--lists`, first attach the critical graph at every vertex.
    Wheelfill {
        input: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
        #[command(flatten)]
        critical: CriticalArgs,
        #[command(flatten)]
        out: Out,
        #[arg(long)]
        lists_out: PathBuf,
    },
    /// Add `t` universal vertices.
    Lift {
        input: PathBuf,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Check a tree decomposition against a graph.
    VerifyTd {
        input: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Check the critical-graph contract.
    VerifyCritical {
        input: PathBuf,
        #[arg(long)]
        lists: PathBuf,
        #[arg(long)]
        x: Vertex,
    },
    /// Exhaustive list coloring.
    Oracle {
        input: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Out {
    /// Output file, stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CriticalArgs {
    /// Critical graph embedding; the built-in one when absent.
    #[arg(long, requires_all = ["critical_lists", "critical_x"])]
    critical: Option<PathBuf>,
    #[arg(long)]
    critical_lists: Option<PathBuf>,
    #[arg(long)]
    critical_x: Option<Vertex>,
}

enum Fail {
    Usage(String),
    Invariant(String),
}

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Usage(e.to_string())
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Usage(msg.into()))
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn parse<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, io::ParseError>) -> Result<T, Fail> {
    f(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn load_lists(path: &Option<PathBuf>, g: &Graph) -> Result<ListAssignment, Fail> {
    match path {
        Some(p) => parse(p, |t| io::parse_lists(t, g)),
        None => Ok(ListAssignment::uniform(g, ColorSet::range(5))),
    }
}

fn is_pieces(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("PIECE"))
}

fn load_decomposition(path: &Path) -> Result<CliqueSumDecomposition, Fail> {
    let text = read(path)?;
    let err = |e: io::ParseError| Fail::Usage(format!("{}: {e}", path.display()));
    let dec = if is_pieces(&text) {
        io::parse_pieces(&text).map_err(err)?
    } else {
        match io::parse_graph(&text).map_err(err)? {
            GraphInput::Plane(pg) => CliqueSumDecomposition::single(pg),
            GraphInput::Plain(_) => return usage(format!("{}: solve needs an embedding or a pieces file", path.display())),
        }
    };
    dec.validate().map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    Ok(dec)
}

fn fixed_k(k: KPolicy, what: &str) -> Result<usize, Fail> {
    match k {
        KPolicy::Fixed(k) => Ok(k),
        KPolicy::Paper => usage(format!("{what} needs an integer --k")),
    }
}

fn verdict(ok: bool) -> ExitCode {
    ExitCode::from(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Invariant(m)) => {
            eprintln!("invariant violated: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Fail> {
    let json = cli.format == Format::Json;
    match &cli.cmd {
        Cmd::Solve { input, lists, witness, min_list, max_list, oracle_cap } => {
            let dec = load_decomposition(input)?;
            let l = load_lists(lists, &dec.graph())?;
            let cfg = SolveConfig {
                k: cli.k,
                unsafe_k_ack: cli.unsafe_k_ack,
                min_list: *min_list,
                max_list: *max_list,
                cross_check: cli.cross_check,
                oracle_cap: *oracle_cap,
                seed: cli.seed,
                threads: cli.threads,
            };
            let r = solve_pipeline(&dec, &l, &cfg).map_err(|e| match e {
                PipelineError::Invariant(_) | PipelineError::Td(_) | PipelineError::Compose(_) => {
                    Fail::Invariant(e.to_string())
                }
                e => Fail::Usage(e.to_string()),
            })?;
            if let (Some(p), Some(w)) = (witness, &r.witness) {
                write_out(&Some(p.clone()), &io::write_witness(&nestcolor::coloring::Coloring(w.clone())))?;
            }
            if let Some(o) = &r.oracle {
                if !o.agrees {
                    eprintln!("warning: the oracle disagrees with the reduced instance; reporting the oracle verdict");
                }
            }
            if json {
                let mut v = serde_json::to_value(&r)?;
                v["witness_path"] = json!(witness.as_ref().filter(|_| r.witness.is_some()));
                outln!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                outln!("answer {}", if r.answer == Answer::Sat { "sat" } else { "unsat" });
                outln!("k {}", r.k);
                outln!("vertices {} reduced {}", r.vertices, r.reduced_vertices);
                for (i, p) in r.pieces.iter().enumerate() {
                    outln!(
                        "piece {i} removed {} width {} (reduced {} vortex {} apices {}){}",
                        p.removed.len(),
                        p.width,
                        p.reduced_width,
                        p.vortex_width,
                        p.apices,
                        if p.degenerate { " degenerate" } else { "" }
                    );
                }
                outln!("width {}", r.composed_width);
                if let Some(o) = &r.oracle {
                    outln!("oracle {:?} agrees {}", o.answer, o.agrees);
                }
                if let (Some(p), Some(_)) = (witness, &r.witness) {
                    outln!("witness {}", p.display());
                }
                let t = &r.timings;
                outln!(
                    "time reduce {:.1}ms decompose {:.1}ms dp {:.1}ms oracle {:.1}ms total {:.1}ms",
                    t.reduce_ms, t.decompose_ms, t.dp_ms, t.oracle_ms, t.total_ms
                );
            }
            Ok(verdict(r.answer == Answer::Sat))
        }
        Cmd::Reduce { input, x_file, out, log } => {
            let pg = parse(input, io::parse_plane)?;
            let x = match x_file {
                Some(p) => parse(p, io::parse_vertex_set)?,
                None => Vec::new(),
            };
            if let Some(&v) = x.iter().find(|&&v| !pg.graph().contains(v)) {
                return usage(format!("X names vertex {v}, which is not in the graph"));
            }
            let k = match cli.k {
                KPolicy::Paper => paper_depth(pg.num_vertices()),
                KPolicy::Fixed(k) => k,
            };
            let r = nest_reduce(&pg, &x, k);
            let removed: String = r.removed.iter().map(|v| format!("{v}\n")).collect();
            if json && out.output.is_none() {
                outln!("{}", json!({ "k": k, "removed": r.removed, "embedding": io::write_plane(&r.graph) }));
            } else {
                write_out(&out.output, &io::write_plane(&r.graph))?;
                if json {
                    outln!("{}", json!({ "k": k, "removed": r.removed }));
                }
            }
            match log {
                Some(p) => write_out(&Some(p.clone()), &removed)?,
                None if !json => eprint!("{removed}"),
                None => {}
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Tw { input, exact, out } => {
            let gi = parse(input, io::parse_graph)?;
            let g = gi.graph();
            let td = if *exact {
                if g.num_vertices() > 20 {
                    return usage("--exact is limited to 20 vertices");
                }
                decomposition_from_order(g, &exact_order(g).1)
            } else {
                decompose(g)
            };
            let w = validate_td(g, &td).map_err(|e| Fail::Invariant(e.to_string()))?;
            if json {
                write_out(&out.output, &format!("{}\n", json!({ "width": w, "bags": td.bags, "edges": td.edges })))?;
            } else {
                write_out(&out.output, &io::write_td(&td))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Phi { input, lists, x } => {
            let gi = parse(input, io::parse_graph)?;
            let l = load_lists(lists, gi.graph())?;
            let phi = compute_phi(gi.graph(), &l, x)?;
            if json {
                outln!("{}", json!({ "x": phi.x, "members": phi.members }));
            } else {
                for t in &phi.members {
                    outln!("{}", t.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
                }
            }
            Ok(verdict(!phi.members.is_empty()))
        }
        Cmd::Gadget { exclude, index, out } => {
            let k = fixed_k(cli.k, "gadget")?;
            let gi = match index {
                Some(i) => make_pattern_gadget(*i, k)?,
                None => {
                    let pats = exclude
                        .iter()
                        .map(|s| Pattern::parse(s).ok_or_else(|| Fail::Usage(format!("unknown pattern `{s}`"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    make_gadget(PatternFamily::excluding(k, &pats))?
                }
            };
            verify_gadget(&gi).map_err(|e| Fail::Invariant(e.to_string()))?;
            if json {
                let allowed: Vec<&str> = gi.family.allowed().iter().map(|p| p.name()).collect();
                let edges: Vec<_> = gi.graph.edges().collect();
                write_out(
                    &out.output,
                    &format!("{}\n", json!({ "k": k, "allowed": allowed, "x": gi.x, "edges": edges })),
                )?;
            } else {
                write_out(&out.output, &io::write_catalog(std::slice::from_ref(&gi)))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Reduce3sat { input, solve, out } => {
            let phi = parse(input, io::parse_cnf)?;
            let gphi = planar3sat_to_coloring(&phi)?;
            write_out(&out.output, &io::write_plain(&gphi.graph))?;
            if !solve {
                return Ok(ExitCode::SUCCESS);
            }
            let l = ListAssignment::uniform(&gphi.graph, ColorSet::range(gphi.k as _));
            let c = list_color(&gphi.graph, &l)?;
            let assignment = match &c {
                Some(c) => {
                    verify_coloring(&gphi.graph, &l, c).map_err(|e| Fail::Invariant(e.to_string()))?;
                    let a = gphi.extract_assignment(c);
                    if !phi.evaluate(&a) {
                        return Err(Fail::Invariant("extracted assignment does not satisfy the formula".into()));
                    }
                    Some(a)
                }
                None => None,
            };
            if cli.cross_check && phi.solve_by_enumeration().is_some() != assignment.is_some() {
                return Err(Fail::Invariant("coloring verdict differs from satisfiability".into()));
            }
            let bits = |a: &[bool]| a.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
            if json {
                eprintln!("{}", json!({ "satisfiable": assignment.is_some(), "assignment": assignment }));
            } else {
                match &assignment {
                    Some(a) => eprintln!("sat {}", bits(a)),
                    None => eprintln!("unsat"),
                }
            }
            Ok(verdict(assignment.is_some()))
        }
        Cmd::Quasiedge { input, out } => {
            let pg = parse(input, io::parse_plane)?;
            write_out(&out.output, &io::write_plane(&quasiedge_replace(&pg)))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Wheelfill { input, lists, critical, out, lists_out } => {
            let pg = parse(input, io::parse_plane)?;
            let (g2, l2): (PlaneGraph, ListAssignment) = match lists {
                Some(p) => {
                    let l = parse(p, |t| io::parse_lists(t, pg.graph()))?;
                    (pg, l)
                }
                None => {
                    let crit = load_critical(critical)?;
                    precolor_attach(&pg, &crit)?
                }
            };
            let (g3, l3) = wheel_fill(&g2, &l2)?;
            write_out(&out.output, &io::write_plane(&g3))?;
            write_out(&Some(lists_out.clone()), &io::write_lists(&l3))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Lift { input, t, out } => {
            let k = fixed_k(cli.k, "lift")?;
            let gi = parse(input, io::parse_graph)?;
            let (h, palette, added) = lift_apex(gi.graph(), k, *t);
            write_out(&out.output, &io::write_plain(&h))?;
            if json {
                eprintln!("{}", json!({ "palette": palette, "added": added }));
            } else {
                eprintln!("palette {palette}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyTd { input, td } => {
            let gi = parse(input, io::parse_graph)?;
            let td = parse(td, io::parse_td)?;
            let r = validate_td(gi.graph(), &td);
            match (&r, json) {
                (Ok(w), true) => outln!("{}", json!({ "valid": true, "width": w })),
                (Ok(w), false) => outln!("valid width {w}"),
                (Err(e), true) => outln!("{}", json!({ "valid": false, "violation": e.to_string() })),
                (Err(e), false) => outln!("invalid: {e}"),
            }
            Ok(verdict(r.is_ok()))
        }
        Cmd::VerifyCritical { input, lists, x } => {
            let crit = load_critical(&CriticalArgs {
                critical: Some(input.clone()),
                critical_lists: Some(lists.clone()),
                critical_x: Some(*x),
            })?;
            let r = crit.validate();
            match (&r, json) {
                (Ok(()), true) => outln!("{}", json!({ "valid": true })),
                (Ok(()), false) => outln!("valid"),
                (Err(e), true) => outln!("{}", json!({ "valid": false, "reason": e.to_string() })),
                (Err(e), false) => outln!("invalid: {e}"),
            }
            Ok(verdict(r.is_ok()))
        }
        Cmd::Oracle { input, lists, cap, witness } => {
            let gi = parse(input, io::parse_graph)?;
            let g = gi.graph();
            let l = load_lists(lists, g)?;
            let c = brute_force_color_with(g, &l, *cap)?;
            if let Some(c) = &c {
                verify_coloring(g, &l, c).map_err(|e| Fail::Invariant(e.to_string()))?;
                if witness.is_some() {
                    write_out(witness, &io::write_witness(c))?;
                }
            }
            if json {
                outln!("{}", json!({ "answer": if c.is_some() { "sat" } else { "unsat" } }));
            } else {
                outln!("{}", if c.is_some() { "sat" } else { "unsat" });
            }
            Ok(verdict(c.is_some()))
        }
    }
}

fn load_critical(a: &CriticalArgs) -> Result<CriticalGraphInput, Fail> {
    match (&a.critical, &a.critical_lists, a.critical_x) {
        (Some(p), Some(lp), Some(x)) => {
            let plane = parse(p, io::parse_plane)?;
            let lists = parse(lp, |t| io::parse_lists(t, plane.graph()))?;
            Ok(CriticalGraphInput { plane, lists, x })
        }
        _ => Ok(small_critical_graph()),
    }
}
