use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use pagraph::harness::{self, ExperimentSpec, Format};
use pagraph::{make_family, observe, Error, MultiGraph, ObserveConfig};

#[derive(Parser)]
#[command(name = "pagraph", version, about = "Preferential attachment graphs driven by edge-step functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow one graph and write its edge dump.
    Generate(CommonArgs),
    /// Measure a dumped graph.
    Observe {
        /// Dump written by `generate`.
        file: PathBuf,
        #[arg(long)]
        exact_diameter_cap: Option<usize>,
    },
    /// Collapse one tree per replicate against `--family` and `--family2`.
    Couple(CommonArgs),
    /// Run the grid of families and horizons.
    Sweep(CommonArgs),
    /// Run a verification suite.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Family descriptor; repeatable, `{a,b}` expands to a grid.
    #[arg(long)]
    family: Vec<String>,
    #[arg(long)]
    family2: Option<String>,
    /// Horizons: `1000`, `100,1000` or `1e4..1e6`.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    reps: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    exact_diameter_cap: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Flat `key=value` file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Settings merged from the config file and the flags; flags win.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let file = match path {
            Some(p) => harness::read_config(p)?,
            None => BTreeMap::new(),
        };
        const KNOWN: &[&str] = &[
            "family",
            "family2",
            "t",
            "reps",
            "seed",
            "out",
            "format",
            "exact-diameter-cap",
            "jobs",
        ];
        if let Some(k) = file.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(Error::InvalidSpec(format!("unknown config key `{k}`")).into());
        }
        Ok(Self { file })
    }

    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidSpec(format!("bad value `{raw}` for `{key}`")).into()),
            None => Ok(None),
        }
    }
}

fn build_spec(a: CommonArgs) -> anyhow::Result<ExperimentSpec> {
    let cfg = Settings::load(a.config.as_deref())?;
    let patterns = if a.family.is_empty() {
        cfg.file
            .get("family")
            .map(|f| f.split_whitespace().map(String::from).collect())
            .unwrap_or_default()
    } else {
        a.family
    };
    let mut families = Vec::new();
    for p in &patterns {
        families.extend(harness::expand_braces(p)?);
    }
    let horizons = match cfg.get(a.t, "t")? {
        Some(t) => harness::parse_horizons(&t)?,
        None => return Err(Error::InvalidSpec("`--t` is required".into()).into()),
    };
    let seed = cfg
        .get(a.seed, "seed")?
        .ok_or_else(|| Error::InvalidSpec("`--seed` is required".into()))?;
    let reps = cfg.get(a.reps, "reps")?.unwrap_or(1);
    let mut spec = ExperimentSpec::new(String::new(), horizons, reps, seed);
    spec.families = families;
    spec.family2 = cfg.get(a.family2, "family2")?;
    spec.out = cfg.get(a.out, "out")?;
    spec.format = cfg.get::<Format>(a.format.map(|f| f.parse()).transpose()?, "format")?.unwrap_or_default();
    if let Some(cap) = cfg.get(a.exact_diameter_cap, "exact-diameter-cap")? {
        spec.exact_diameter_cap = cap;
    }
    spec.jobs = cfg.get(a.jobs, "jobs")?.unwrap_or(1);
    spec.validate()?;
    Ok(spec)
}

fn emit(spec: &ExperimentSpec, records: &[harness::RunRecord]) -> anyhow::Result<()> {
    match &spec.out {
        Some(path) => harness::persist(path, records, spec.format)?,
        None => harness::write_records(io::stdout().lock(), records, spec.format)?,
    }
    Ok(())
}

fn generate(a: CommonArgs) -> anyhow::Result<()> {
    let spec = build_spec(a)?;
    if spec.families.len() != 1 || spec.horizons.len() != 1 {
        return Err(Error::InvalidSpec("generate takes one family and one horizon".into()).into());
    }
    let f = make_family(&spec.families[0])?;
    let g = MultiGraph::evolve(&f, spec.horizons[0], spec.seed);
    match &spec.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            g.write_dump(&mut w, spec.seed, f.name())
                .and_then(|_| w.flush())
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        None => g.write_dump(io::stdout().lock(), spec.seed, f.name())?,
    }
    Ok(())
}

fn observe_file(file: &Path, cap: Option<usize>) -> anyhow::Result<()> {
    let r = File::open(file).with_context(|| format!("cannot open {}", file.display()))?;
    let (header, g) = MultiGraph::read_dump(BufReader::new(r))
        .with_context(|| format!("cannot parse {}", file.display()))?;
    let mut cfg = ObserveConfig::default();
    if let Some(cap) = cap {
        cfg.exact_diameter_cap = cap;
    }
    let report = observe(&g, &cfg)?;
    let out = serde_json::json!({
        "family": header.family,
        "seed": header.seed,
        "report": report,
    });
    writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(&out)?)?;
    Ok(())
}

fn verify(suite: &str) -> anyhow::Result<bool> {
    let mut stdout = io::stdout().lock();
    let results = harness::run_suite(suite, |r| {
        let _ = writeln!(stdout, "{r}").and_then(|_| stdout.flush());
    })?;
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(stdout, "{} of {} criteria passed", results.len() - failed, results.len())?;
    Ok(failed == 0)
}

fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Generate(a) => generate(a)?,
        Command::Observe {
            file,
            exact_diameter_cap,
        } => observe_file(&file, exact_diameter_cap)?,
        Command::Couple(a) => {
            let spec = build_spec(a)?;
            if spec.family2.is_none() {
                bail!(Error::InvalidSpec("couple needs `--family2`".into()));
            }
            emit(&spec, &harness::run(&spec)?)?;
        }
        Command::Sweep(a) => {
            let spec = build_spec(a)?;
            emit(&spec, &harness::sweep(&spec)?)?;
        }
        Command::Verify { suite } => return verify(&suite),
    }
    Ok(true)
}

/// Bad input from the user, as opposed to a failure while running.
fn is_usage(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::InvalidParameter { .. }
                | Error::UnknownFamily(_)
                | Error::MalformedDescriptor { .. }
                | Error::InvalidSpec(_)
                | Error::EmptyGrid
                | Error::UnknownSuite(_)
                | Error::Parse { .. }
        )
    )
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // a closed pipe (`pagraph ... | head`) is not a failure
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
