use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use submod_core::catalog::{self, default_catalog, export_cayley, parse_cayley, parse_perm};
use submod_core::formations::{self, in_class};
use submod_core::lattice::DEFAULT_SUBGROUP_BUDGET;
use submod_core::report::{self, Format};
use submod_core::{
    run_catalog, ChainCertificate, Formation, GroupContext, GroupTable, Manifest, Suite, VerifyOptions,
};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("unknown predicate `{0}` (expected modular, submodular, p-subnormal, subnormal, residual, b-operator, siding, class)")]
    UnknownPredicate(String),
    #[error("bad subgroup generators: {0}")]
    BadSubgroupSpec(String),
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
    #[error(transparent)]
    Lattice(#[from] submod_core::LatticeError),
    #[error(transparent)]
    Formation(#[from] submod_core::FormationError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {reason}")]
    Io { path: String, reason: String },
}

/// `println!` that exits quietly when the reader closes the pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

macro_rules! emit {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

#[derive(Parser)]
#[command(name = "submod", version, about = "Subgroup lattices, submodularity and formations of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the default catalog.
    Catalog {
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Summarise a group: order, primes, lattice size, characteristic subgroups, classes.
    Describe {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Evaluate one predicate. Exit code 0 = holds, 1 = fails, 2 = error.
    #[command(override_usage = "submod check <GROUP> <PREDICATE> [OPTIONS]\n       submod check --from-cayley <FILE> <PREDICATE> [OPTIONS]")]
    Check {
        #[command(flatten)]
        files: FileSource,
        /// `[GROUP] PREDICATE`; the group is omitted with --from-cayley/--from-perm.
        /// Predicates: modular, submodular, p-subnormal, subnormal, residual, b-operator, siding, class
        #[arg(num_args = 1..=2, required = true, value_name = "ARG")]
        args: Vec<String>,
        /// generators of the subgroup H (element indices)
        #[arg(long, value_delimiter = ',')]
        gens: Option<Vec<usize>>,
        /// generators of the ambient subgroup K (default: the whole group)
        #[arg(long, value_delimiter = ',')]
        in_gens: Option<Vec<usize>>,
        /// formation code for `residual` and `class` (Ab, N, U, A, D, S, Z, C, Ab1, U1, A1, NA, NA1, N2)
        #[arg(long)]
        formation: Option<String>,
    },
    /// Run the verification suites over a manifest. Exit 0 iff no counterexamples and no catalog errors.
    Verify {
        /// use the built-in catalog
        #[arg(long, conflicts_with = "manifest")]
        default: bool,
        /// manifest file, one `LABEL = builder(args)` per line
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// run every suite (or pick some with --suites)
        #[arg(long, conflicts_with = "suites")]
        all_suites: bool,
        /// comma-separated suites or check ids, e.g. T1,T2 or P-SUP(5)
        #[arg(long)]
        suites: Option<String>,
        /// json, csv or md
        #[arg(long, default_value = "json")]
        format: String,
        /// write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// worker threads (0 = one per core)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// omit per-group timings so reports are byte-reproducible
        #[arg(long)]
        no_timings: bool,
        /// keep every record, not only counterexamples
        #[arg(long)]
        store_vacuous: bool,
        /// give up on a group whose lattice exceeds this many subgroups
        #[arg(long, default_value_t = DEFAULT_SUBGROUP_BUDGET)]
        budget: usize,
    },
    /// Write a group as a Cayley table file.
    Export {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GroupSource {
    /// catalog label or builder expression, e.g. F5 or semidirect(5,4,2)
    group: Option<String>,
    #[command(flatten)]
    files: FileSource,
}

#[derive(Args, Clone)]
struct FileSource {
    #[arg(long, conflicts_with = "from_perm")]
    from_cayley: Option<PathBuf>,
    #[arg(long)]
    from_perm: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| {
        CliError::Catalog(catalog::CatalogError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    })
}

impl GroupSource {
    fn load(&self) -> Result<GroupTable, CliError> {
        match (&self.group, &self.files.from_cayley, &self.files.from_perm) {
            (Some(sel), None, None) => Ok(catalog::resolve(sel)?),
            (None, Some(p), None) => Ok(parse_cayley(&read(p)?)?),
            (None, None, Some(p)) => Ok(parse_perm(&read(p)?)?),
            _ => Err(CliError::Usage(
                "give exactly one of a group selector, --from-cayley or --from-perm".into(),
            )),
        }
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            reason: e.to_string(),
        }),
        None => {
            emit!("{text}");
            Ok(())
        }
    }
}

fn text_or_json(format: &str) -> Result<bool, CliError> {
    match format {
        "text" => Ok(false),
        "json" => Ok(true),
        other => Err(CliError::Usage(format!("unknown format `{other}` (text or json)"))),
    }
}

fn cmd_catalog(format: &str) -> Result<ExitCode, CliError> {
    let json = text_or_json(format)?;
    let m = default_catalog();
    let mut rows = Vec::new();
    for e in m.entries.iter().flatten() {
        let order = e.build().map(|g| g.order()).ok();
        rows.push((e.label.clone(), e.builder.to_string(), order));
    }
    if json {
        let v: Vec<_> = rows
            .iter()
            .map(|(l, b, o)| json!({"label": l, "builder": b, "order": o}))
            .collect();
        out!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        for (l, b, o) in rows {
            out!("{l:<12} {:>5}  {b}", o.map(|o| o.to_string()).unwrap_or_default());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn subgroup_json(ctx: &GroupContext, idx: usize) -> serde_json::Value {
    let l = ctx.lattice();
    json!({"order": l.order_of(idx), "generators": l.generators(idx)})
}

fn subgroup_text(ctx: &GroupContext, idx: usize) -> String {
    let l = ctx.lattice();
    format!("order {} gens {:?}", l.order_of(idx), l.generators(idx))
}

fn cmd_describe(source: &GroupSource, format: &str) -> Result<ExitCode, CliError> {
    let json = text_or_json(format)?;
    let ctx = GroupContext::new(source.load()?)?;
    let l = ctx.lattice();
    let g = ctx.group();
    let fitting = l.fitting()?;
    let center = l.index_of(&g.center()).expect("center is a subgroup");
    let items = [
        ("fitting", fitting),
        ("frattini", l.frattini()),
        ("derived", l.derived()),
        ("center", center),
    ];
    let classes: Vec<(Formation, bool)> = Formation::ALL.iter().map(|&f| (f, in_class(&ctx, f))).collect();
    if json {
        let mut v = json!({
            "label": g.label(),
            "order": g.order(),
            "primes": g.prime_divisors(),
            "exponent": g.exponent(),
            "subgroups": l.len(),
            "normal_subgroups": l.normal_subgroups().len(),
            "siding": formations::is_siding(&ctx),
        });
        for (name, idx) in items {
            v[name] = subgroup_json(&ctx, idx);
        }
        v["classes"] = classes
            .iter()
            .map(|(f, b)| (f.code().to_string(), json!(b)))
            .collect::<serde_json::Map<_, _>>()
            .into();
        out!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        out!("group      {}", g.label());
        out!("order      {}", g.order());
        out!("primes     {:?}", g.prime_divisors());
        out!("exponent   {}", g.exponent());
        out!("subgroups  {} ({} normal)", l.len(), l.normal_subgroups().len());
        for (name, idx) in items {
            out!("{name:<10} {}", subgroup_text(&ctx, idx));
        }
        out!("siding     {}", yes_no(formations::is_siding(&ctx)));
        for (f, b) in classes {
            out!("class {:<4} {:<4} {}", f.code(), f.symbol(), yes_no(b));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn subgroup_from_gens(ctx: &GroupContext, gens: &[usize], what: &str) -> Result<usize, CliError> {
    let n = ctx.order();
    if let Some(&bad) = gens.iter().find(|&&x| x >= n) {
        return Err(CliError::BadSubgroupSpec(format!(
            "{what}: element {bad} out of range (group order {n})"
        )));
    }
    Ok(ctx.lattice().generated(gens))
}

fn print_chain(ctx: &GroupContext, cert: &ChainCertificate) {
    out!("chain:");
    for &i in &cert.chain {
        out!("  {}", subgroup_text(ctx, i));
    }
}

fn verdict(holds: bool) -> ExitCode {
    out!("{}", yes_no(holds));
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn formation_arg(f: &Option<String>) -> Result<Formation, CliError> {
    match f {
        Some(s) => Ok(s.parse()?),
        None => Err(CliError::Usage("--formation is required for this predicate".into())),
    }
}

fn cmd_check(
    source: &GroupSource,
    predicate: &str,
    gens: &Option<Vec<usize>>,
    in_gens: &Option<Vec<usize>>,
    formation: &Option<String>,
) -> Result<ExitCode, CliError> {
    let ctx: Arc<GroupContext> = GroupContext::new(source.load()?)?;
    let l = ctx.lattice();
    let k = match in_gens {
        Some(gs) => subgroup_from_gens(&ctx, gs, "--in-gens")?,
        None => l.top(),
    };
    let h = || -> Result<usize, CliError> {
        let gs = gens
            .as_ref()
            .ok_or_else(|| CliError::BadSubgroupSpec("--gens is required for this predicate".into()))?;
        let h = subgroup_from_gens(&ctx, gs, "--gens")?;
        if !l.leq(h, k) {
            return Err(CliError::BadSubgroupSpec("H is not contained in K".into()));
        }
        Ok(h)
    };
    // predicates about the group K itself run on its subgroup context
    let kctx = || ctx.sub(k).context.clone();
    match predicate {
        "modular" => {
            let h = h()?;
            Ok(verdict(ctx.is_modular_in(h, k).expect("h ≤ k")))
        }
        "submodular" | "p-subnormal" => {
            let h = h()?;
            let cert = if predicate == "submodular" {
                ctx.is_submodular(h, k)
            } else {
                ctx.is_p_subnormal(h, k)
            }
            .expect("h ≤ k");
            let code = verdict(cert.is_some());
            if let Some(c) = cert {
                print_chain(&ctx, &c);
            }
            Ok(code)
        }
        "subnormal" => {
            let h = h()?;
            let kc = ctx.sub(k);
            let local = kc.lattice_map.iter().position(|&x| x == h).expect("h ≤ k");
            Ok(verdict(kc.context.subnormal(local)))
        }
        "residual" => {
            let f = formation_arg(formation)?;
            let sc = ctx.sub(k);
            let r = formations::residual(&sc.context, f)?;
            let idx = sc.lattice_map[r.residual];
            out!("{}", subgroup_text(&ctx, idx));
            out!("nilpotent {}", yes_no(l.is_nilpotent_subgroup(idx)));
            Ok(ExitCode::SUCCESS)
        }
        "b-operator" => {
            let sc = ctx.sub(k);
            let idx = sc.lattice_map[formations::b_operator(&sc.context)];
            out!("{}", subgroup_text(&ctx, idx));
            Ok(ExitCode::SUCCESS)
        }
        "siding" => Ok(verdict(formations::is_siding(&kctx()))),
        "class" => {
            let f = formation_arg(formation)?;
            Ok(verdict(in_class(&kctx(), f)))
        }
        other => Err(CliError::UnknownPredicate(other.to_string())),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    default: bool,
    manifest: &Option<PathBuf>,
    all_suites: bool,
    suites: &Option<String>,
    format: &str,
    out: &Option<PathBuf>,
    jobs: usize,
    no_timings: bool,
    store_vacuous: bool,
    budget: usize,
) -> Result<ExitCode, CliError> {
    let format: Format = format.parse().map_err(CliError::Usage)?;
    let m = match (default, manifest) {
        (true, None) => default_catalog(),
        (false, Some(p)) => Manifest::from_file(p)?,
        _ => return Err(CliError::Usage("give exactly one of --default or --manifest".into())),
    };
    let checks = match (all_suites, suites) {
        (true, None) => Suite::all_checks(),
        (false, Some(s)) => Suite::parse_selection(s).map_err(CliError::Usage)?,
        _ => return Err(CliError::Usage("give exactly one of --all-suites or --suites".into())),
    };
    let opts = VerifyOptions {
        checks,
        store_all: store_vacuous,
        jobs,
        timings: !no_timings,
        budget,
    };
    let report = run_catalog(&m, &opts);
    write_out(out.as_deref(), &report::render(&report, format))?;
    let bad = report.counterexample_count() + report.error_count();
    eprintln!(
        "{} groups, {} counterexamples, {} catalog errors",
        report.groups.len(),
        report.counterexample_count(),
        report.error_count()
    );
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Catalog { format } => cmd_catalog(format),
        Command::Describe { source, format } => cmd_describe(source, format),
        Command::Check {
            files,
            args,
            gens,
            in_gens,
            formation,
        } => {
            let (group, predicate) = match args.as_slice() {
                [p] => (None, p),
                [g, p] => (Some(g.clone()), p),
                _ => unreachable!("clap enforces 1..=2 arguments"),
            };
            let source = GroupSource {
                group,
                files: files.clone(),
            };
            cmd_check(&source, predicate, gens, in_gens, formation)
        }
        Command::Verify {
            default,
            manifest,
            all_suites,
            suites,
            format,
            out,
            jobs,
            no_timings,
            store_vacuous,
            budget,
        } => cmd_verify(
            *default,
            manifest,
            *all_suites,
            suites,
            format,
            out,
            *jobs,
            *no_timings,
            *store_vacuous,
            *budget,
        ),
        Command::Export { source, out } => {
            let g = source.load()?;
            write_out(out.as_deref(), &export_cayley(&g))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
