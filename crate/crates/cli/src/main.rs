use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use greenseq::bounds::{bounds_report, construct_mgs_from_cut, cuts, Cut};
use greenseq::catalog::Catalog;
use greenseq::exchange::{
    initial_seed, mgs_classes, mgs_length_extrema, mutation_chain, ExtExchangeMatrix, GreenSequence,
};
use greenseq::fho::{sequence_from_dims, verify_equivalence, VerifyOptions};
use greenseq::io::{parse_dims_sequence, parse_problem, parse_sequence, Problem};
use greenseq::rational::{format_point, format_rational, parse_point};
use greenseq::rep::DEFAULT_SUBMODULE_BUDGET;
use greenseq::walls::{crossing_sequence, random_generic_path, realize_sequence, CrossingRecord, GreenPath, WallSet};
use greenseq::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "greenseq", version, about = "Maximal green sequences, hom-orthogonal sequences and wall crossings")]
struct Cli {
    /// Override the field prime of the problem file.
    #[arg(long, global = true)]
    field_prime: Option<u32>,
    /// Override the search budget of the problem file.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Override the random seed of the problem file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Resampling cap for non-generic random bases.
    #[arg(long, global = true, default_value_t = 50)]
    retries: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MgsMode {
    Enumerate,
    Extrema,
    Classes,
}

#[derive(Subcommand)]
enum Command {
    /// Print the extended exchange matrices along a mutation sequence.
    Mutate {
        file: PathBuf,
        /// Vertex indices from 1, e.g. `3 2 3 1 3`.
        sequence: Vec<String>,
    },
    /// Enumerate maximal green sequences, their extremal lengths or classes.
    Mgs {
        file: PathBuf,
        #[arg(value_enum, default_value_t = MgsMode::Enumerate)]
        mode: MgsMode,
        /// Only keep sequences of maximal length (classes mode).
        #[arg(long)]
        max_only: bool,
        /// Build a maximal green sequence from a cut instead of enumerating.
        #[arg(long)]
        construct_max: bool,
        /// Arrow ids of the cut, comma separated; defaults to the cut with most C-modules.
        #[arg(long, value_delimiter = ',')]
        cut: Vec<String>,
    },
    /// Compare maximal green sequences, maximal FHO sequences and wall crossings.
    Verify {
        file: PathBuf,
        /// Random straight paths to sample.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Skip the linear-feasibility search for straight paths.
        #[arg(long)]
        no_line_search: bool,
    },
    /// Wall crossings of green paths.
    Walls {
        file: PathBuf,
        /// Base point `p/q,p/q,...` of the path `x + t 1`.
        #[arg(long, conflicts_with_all = ["random", "sequence"])]
        base: Option<String>,
        /// Number of random generic paths.
        #[arg(long, conflicts_with = "sequence")]
        random: Option<usize>,
        /// Search a base crossing these dimension vectors, e.g. `0,0,1; 0,1,1`.
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Lower and upper bounds on the maximal length.
    Bounds {
        file: PathBuf,
        /// Skip exhaustive enumeration of the extremal lengths.
        #[arg(long)]
        no_enumerate: bool,
    },
    /// List the indecomposable modules and their Hom table.
    Catalog { file: PathBuf },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

type Res<T> = Result<T, CliError>;

/// Text and JSON renderings of one result, plus whether it counts as a pass.
struct Output {
    text: String,
    json: Value,
    pass: bool,
}

fn load(cli: &Cli, path: &PathBuf) -> Res<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if let Some(obj) = value.as_object_mut() {
        if let Some(p) = cli.field_prime {
            obj.insert("field_prime".into(), json!(p));
        }
        if let Some(b) = cli.budget {
            obj.insert("search_budget".into(), json!(b));
        }
        if let Some(s) = cli.seed {
            obj.insert("rng_seed".into(), json!(s));
        }
    }
    parse_problem(&value.to_string()).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn one_based(ks: &[usize]) -> Vec<usize> {
    ks.iter().map(|k| k + 1).collect()
}

fn fmt_vec(v: &[i64]) -> String {
    format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

fn fmt_matrix(m: &ExtExchangeMatrix) -> String {
    let rows = m.rows();
    let width = rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    let mut s = String::new();
    for (i, r) in rows.iter().enumerate() {
        if i == m.n() {
            let _ = writeln!(s, "  {}", "-".repeat((width + 1) * m.n() - 1));
        }
        let cells: Vec<String> = r.iter().map(|v| format!("{v:>width$}")).collect();
        let _ = writeln!(s, "  {}", cells.join(" "));
    }
    s
}

fn cmd_mutate(p: &Problem, sequence: &[String]) -> Res<Output> {
    let n = p.qp.vertex_count();
    let ks = parse_sequence(&sequence.join(" "), n).map_err(|e| CliError::Usage(e.to_string()))?;
    let chain = mutation_chain(&initial_seed(p.qp.quiver())?, &ks)?;
    let mut text = String::new();
    let mut mats = Vec::new();
    for (step, m) in chain.iter().enumerate() {
        let at = step.checked_sub(1).map(|i| ks[i] + 1);
        let green = one_based(&m.green_vertices());
        match at {
            None => {
                let _ = writeln!(text, "initial seed, green {green:?}");
            }
            Some(k) => {
                let _ = writeln!(text, "after mu_{k}, green {green:?}");
            }
        }
        text.push_str(&fmt_matrix(m));
        mats.push(json!({"step": step, "mutated_at": at, "b": m.b_matrix(), "c": m.c_matrix(), "green": green}));
    }
    let maximal = chain.last().is_some_and(|m| m.green_vertices().is_empty());
    let _ = writeln!(text, "maximal: {maximal}");
    Ok(Output { text, json: json!({"sequence": one_based(&ks), "matrices": mats, "maximal": maximal}), pass: true })
}

fn seq_json(g: &GreenSequence) -> Value {
    json!({"indices": one_based(&g.indices), "c_vectors": g.c_vectors, "length": g.len()})
}

fn seq_text(g: &GreenSequence) -> String {
    let cs: Vec<String> = g.c_vectors.iter().map(|c| fmt_vec(c)).collect();
    format!("{:>3}  {:?}  {}", g.len(), one_based(&g.indices), cs.join(" "))
}

fn cmd_mgs(p: &Problem, mode: MgsMode, max_only: bool, construct: bool, cut_ids: &[String]) -> Res<Output> {
    let seed = initial_seed(p.qp.quiver())?;
    let budget = p.file.search_budget;
    if construct {
        let cat = p.catalog()?;
        let cut = if cut_ids.is_empty() {
            let mut best: Option<(usize, Cut)> = None;
            for c in cuts(&p.qp)? {
                if let Ok(g) = construct_mgs_from_cut(&p.qp, &c, &cat) {
                    if best.as_ref().map_or(true, |(l, _)| g.len() > *l) {
                        best = Some((g.len(), c));
                    }
                }
            }
            best.ok_or_else(|| CliError::Failed("no cut yields a maximal green sequence".into()))?.1
        } else {
            let ids: Vec<&str> = cut_ids.iter().map(String::as_str).collect();
            Cut::by_ids(&p.qp, &ids).map_err(|e| CliError::Usage(e.to_string()))?
        };
        let g = construct_mgs_from_cut(&p.qp, &cut, &cat)?;
        let text = format!("cut {}\n{}\n", cut.deleted_ids.join(","), seq_text(&g));
        return Ok(Output { text, json: json!({"cut": cut.deleted_ids, "sequence": seq_json(&g)}), pass: true });
    }
    let (all, complete) = match greenseq::exchange::maximal_green_sequences(&seed, budget) {
        Ok(all) => (all, true),
        Err(Error::GreenBudgetExceeded { found, .. }) => (*found, false),
        Err(e) => return Err(e.into()),
    };
    let mut text = String::new();
    if !complete {
        let _ = writeln!(text, "budget of {budget} nodes exhausted; partial results");
    }
    let json = match mode {
        MgsMode::Enumerate => {
            for g in &all {
                let _ = writeln!(text, "{}", seq_text(g));
            }
            let _ = writeln!(text, "{} sequences", all.len());
            json!({"complete": complete, "count": all.len(), "sequences": all.iter().map(seq_json).collect::<Vec<_>>()})
        }
        MgsMode::Extrema => {
            let (min, max) = if complete {
                mgs_length_extrema(&seed, budget)?
            } else {
                (all.iter().map(|g| g.len()).min().unwrap_or(0), all.iter().map(|g| g.len()).max().unwrap_or(0))
            };
            let _ = writeln!(text, "min {min}\nmax {max}\ncount {}", all.len());
            json!({"complete": complete, "min": min, "max": max, "count": all.len()})
        }
        MgsMode::Classes => {
            let max = all.iter().map(|g| g.len()).max().unwrap_or(0);
            let kept: Vec<GreenSequence> = all.into_iter().filter(|g| !max_only || g.len() == max).collect();
            let classes = mgs_classes(&kept);
            let mut out = Vec::new();
            for (key, members) in &classes {
                let len = key.len();
                let cs: Vec<String> = key.iter().map(|c| fmt_vec(c)).collect();
                let _ = writeln!(text, "{len:>3}  {:>5} sequences  {}", members.len(), cs.join(" "));
                out.push(json!({"length": len, "size": members.len(), "c_vectors": key}));
            }
            let _ = writeln!(text, "{} classes", classes.len());
            json!({"complete": complete, "count": classes.len(), "classes": out})
        }
    };
    Ok(Output { text, json, pass: complete })
}

fn cmd_verify(p: &Problem, cli: &Cli, samples: usize, no_line_search: bool) -> Res<Output> {
    let cat = p.catalog()?;
    let opts = VerifyOptions {
        samples,
        seed: p.file.rng_seed,
        budget: p.file.search_budget,
        submodule_budget: DEFAULT_SUBMODULE_BUDGET,
        retries: cli.retries,
        line_search: !no_line_search,
    };
    let r = verify_equivalence(&p.qp, &cat, &opts)?;
    let min = r.mgs.iter().map(Vec::len).min().unwrap_or(0);
    let max = r.mgs.iter().map(Vec::len).max().unwrap_or(0);
    let total = r.fho.len();
    let mut text = String::new();
    let _ = writeln!(text, "maximal green sequences   {:>6}", r.mgs.len());
    let _ = writeln!(text, "maximal FHO sequences     {total:>6}");
    let _ = writeln!(text, "sampled crossing orders   {:>6}  ({} paths)", r.sampled.len(), r.samples);
    let _ = writeln!(text, "realized by straight path {:>6}", r.line_realized);
    let _ = writeln!(text, "no straight path          {:>6}", r.line_unrealizable.len());
    let _ = writeln!(text, "realized by green path    {:>6}", r.polygonal_realized);
    let _ = writeln!(text, "lengths                   {min}..{max}");
    if let Some(o) = &r.offending {
        let _ = writeln!(text, "offending sequence        {}", o.iter().map(|c| fmt_vec(c)).collect::<Vec<_>>().join(" "));
    }
    let _ = writeln!(text, "{}", if r.passed { "PASS" } else { "FAIL" });
    let json = json!({
        "passed": r.passed,
        "mgs_equals_fho": r.mgs_equals_fho,
        "crossings_are_fho": r.crossings_are_fho,
        "paths_cover": r.paths_cover,
        "mgs_count": r.mgs.len(),
        "fho_count": total,
        "samples": r.samples,
        "sampled_count": r.sampled.len(),
        "line_realized": r.line_realized,
        "line_unrealizable": r.line_unrealizable,
        "line_unknown": r.line_unknown,
        "polygonal_realized": r.polygonal_realized,
        "extrema": [min, max],
        "offending": r.offending,
    });
    Ok(Output { text, json, pass: r.passed })
}

#[derive(Serialize)]
struct CrossingJson {
    t: String,
    module: String,
    dims: Vec<i64>,
    interior: bool,
}

fn crossings_json(base: &[greenseq::rational::Q], c: &[CrossingRecord]) -> Value {
    let records: Vec<CrossingJson> = c
        .iter()
        .map(|r| CrossingJson { t: format_rational(&r.time), module: r.name.clone(), dims: r.dims.clone(), interior: r.interior })
        .collect();
    json!({"base": format_point(base), "crossings": records})
}

fn crossings_text(base: &[greenseq::rational::Q], c: &[CrossingRecord]) -> String {
    let mut s = format!("base {}\n", format_point(base).join(","));
    let width = c.iter().map(|r| format_rational(&r.time).len()).max().unwrap_or(1);
    for r in c {
        let _ = writeln!(s, "  t = {:>width$}  {:<12} {}", format_rational(&r.time), r.name, fmt_vec(&r.dims));
    }
    s
}

fn cmd_walls(p: &Problem, cli: &Cli, base: Option<&str>, random: Option<usize>, sequence: Option<&str>) -> Res<Output> {
    let cat = p.catalog()?;
    let walls = WallSet::new(&cat, DEFAULT_SUBMODULE_BUDGET)?;
    let n = p.qp.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(p.file.rng_seed);
    let mut paths: Vec<(GreenPath, Vec<CrossingRecord>)> = Vec::new();
    if let Some(b) = base {
        let x = parse_point(b).map_err(|e| CliError::Usage(e.to_string()))?;
        if x.len() != n {
            return Err(CliError::Usage(format!("base has {} coordinates for {n} vertices", x.len())));
        }
        let path = GreenPath::new(x);
        let c = crossing_sequence(&path, &walls)?;
        paths.push((path, c));
    } else if let Some(s) = sequence {
        let dims = parse_dims_sequence(s, n).map_err(|e| CliError::Usage(e.to_string()))?;
        let seq = sequence_from_dims(&cat, &dims).map_err(|e| CliError::Usage(e.to_string()))?;
        match realize_sequence(&walls, &seq, &mut rng, cli.retries)? {
            Some(found) => paths.push(found),
            None => return Err(CliError::Failed("no straight green path crosses these walls in this order".into())),
        }
    } else {
        for _ in 0..random.unwrap_or(1) {
            paths.push(random_generic_path(&walls, &mut rng, cli.retries)?);
        }
    }
    let text = paths.iter().map(|(p, c)| crossings_text(&p.base, c)).collect::<Vec<_>>().join("\n");
    let json = Value::Array(paths.iter().map(|(p, c)| crossings_json(&p.base, c)).collect());
    Ok(Output { text, json, pass: true })
}

fn cmd_bounds(p: &Problem, no_enumerate: bool) -> Res<Output> {
    let cat = p.catalog()?;
    let budget = if no_enumerate { None } else { Some(p.file.search_budget) };
    let r = bounds_report(&p.qp, &cat, budget)?;
    let opt = |x: Option<usize>| x.map_or("unknown".to_string(), |v| v.to_string());
    let mut text = String::new();
    let _ = writeln!(text, "vertices {}  potential cycles {}  indecomposables {}", r.n, r.k, r.indec_count);
    let _ = writeln!(text, "min length {}  max length {}", opt(r.min_len), opt(r.max_len));
    let width = r.cuts.iter().map(|c| c.deleted.join(",").len()).max().unwrap_or(3).max(3);
    let _ = writeln!(text, "{:<width$}  tilted  C-modules  MGS", "cut");
    for c in &r.cuts {
        let _ = writeln!(text, "{:<width$}  {:<6}  {:>9}  {:>3}", c.deleted.join(","), c.tilted, c.c_modules, opt(c.mgs_len));
    }
    for (name, v) in &r.upper_bounds {
        let _ = writeln!(text, "upper bound {v:>4}  {name}");
    }
    let _ = writeln!(text, "disjoint Hom cycles {}", r.hom_cycles.len());
    for c in &r.hom_cycles {
        let _ = writeln!(text, "  {}", c.join(" -> "));
    }
    let _ = writeln!(text, "lower bound {}  upper bound {}", r.lower_bound, r.upper_bound);
    let _ = writeln!(text, "achieved {}  certified {}  conjecture {}", opt(r.achieved), r.certified, r.conjecture.map_or("unknown".into(), |c| c.to_string()));
    let json = serde_json::to_value(&r).map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(Output { text, json, pass: true })
}

fn cmd_catalog(p: &Problem) -> Res<Output> {
    let cat: Catalog = p.catalog()?;
    let q = p.qp.quiver();
    let mut text = String::new();
    let width = (0..cat.len()).map(|i| cat.entry(i).name.len()).max().unwrap_or(4).max(4);
    let mut entries = Vec::new();
    for i in 0..cat.len() {
        let e = cat.entry(i);
        let string = e.string.as_ref().map(|w| w.display(q));
        let _ = writeln!(
            text,
            "{i:>3}  {:<width$}  {:<12}  schurian {:<5}  {}",
            e.name,
            fmt_vec(&cat.dims(i)),
            cat.is_schurian(i),
            string.clone().unwrap_or_default()
        );
        entries.push(json!({"name": e.name, "dims": cat.dims(i), "schurian": cat.is_schurian(i), "string": string}));
    }
    let _ = writeln!(text, "Hom dimensions (row -> column):");
    for row in cat.hom_table() {
        let _ = writeln!(text, "  {}", row.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(" "));
    }
    let json = json!({"heuristic": cat.is_heuristic(), "modules": entries, "hom": cat.hom_table()});
    Ok(Output { text, json, pass: true })
}

fn run(cli: &Cli) -> Res<Output> {
    match &cli.command {
        Command::Mutate { file, sequence } => cmd_mutate(&load(cli, file)?, sequence),
        Command::Mgs { file, mode, max_only, construct_max, cut } => {
            cmd_mgs(&load(cli, file)?, *mode, *max_only, *construct_max, cut)
        }
        Command::Verify { file, samples, no_line_search } => cmd_verify(&load(cli, file)?, cli, *samples, *no_line_search),
        Command::Walls { file, base, random, sequence } => {
            cmd_walls(&load(cli, file)?, cli, base.as_deref(), *random, sequence.as_deref())
        }
        Command::Bounds { file, no_enumerate } => cmd_bounds(&load(cli, file)?, *no_enumerate),
        Command::Catalog { file } => cmd_catalog(&load(cli, file)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
