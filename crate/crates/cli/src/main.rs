//! `ifem`: solve, sweep and compare the benchmark interface problems.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ifem_core::norms::ConvergenceReport;
use ifem_core::output::{compare_table, markdown_table, write_csv, write_fields, write_manifest, Manifest};
use ifem_core::study::{run_convergence, run_level, LevelFailure, LevelSolution, TableFormat};
use ifem_core::{Error, ErrorKind, Method, RunConfig, Scheme};

#[derive(Parser, Debug)]
#[command(name = "ifem", version, about = "Immersed finite element convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a single refinement level and report its errors.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Refinement level; 2^n intervals per side.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Sweep a range of levels and emit the convergence table.
    Converge {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
    },
    /// Run the plain and modified schemes and emit both tables.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
    },
}

#[derive(Args, Debug)]
struct Range {
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cubic, corner or ellipse.
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    scheme: Option<Scheme>,
    /// Consistency flavour: -1 symmetric, 0 incomplete, 1 nonsymmetric.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<i32>,
    #[arg(long)]
    sigma0: Option<f64>,
    #[arg(long)]
    beta_minus: Option<f64>,
    #[arg(long)]
    beta_plus: Option<f64>,
    /// auto, cg, nonsym or direct.
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Table format: csv or md.
    #[arg(long, value_parser = parse_format)]
    format: Option<TableFormat>,
    /// Table destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Vertex field dump of the finest level.
    #[arg(long)]
    fields: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown method `{s}`"))
}

fn parse_format(s: &str) -> Result<TableFormat, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown format `{s}`"))
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(path) => serde_json::from_reader(io::BufReader::new(File::open(path)?))?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.case {
            c.case = v.clone();
        }
        if let Some(v) = self.scheme {
            c.scheme = v;
        }
        if let Some(v) = self.eps {
            c.epsilon = v;
        }
        if let Some(v) = self.sigma0 {
            c.sigma0 = v;
        }
        if self.beta_minus.is_some() {
            c.beta_minus = self.beta_minus;
        }
        if self.beta_plus.is_some() {
            c.beta_plus = self.beta_plus;
        }
        if let Some(v) = self.method {
            c.method = v;
        }
        if let Some(v) = self.tol {
            c.tol = v;
        }
        if self.max_iter.is_some() {
            c.max_iter = self.max_iter;
        }
        if let Some(v) = self.format {
            c.output.format = v;
        }
        if self.out.is_some() {
            c.output.out = self.out.clone();
        }
        if self.fields.is_some() {
            c.output.fields = self.fields.clone();
        }
        if self.manifest.is_some() {
            c.output.manifest = self.manifest.clone();
        }
        Ok(c)
    }
}

impl Range {
    fn apply(&self, c: &mut RunConfig) {
        if let Some(v) = self.n_min {
            c.n_min = v;
        }
        if let Some(v) = self.n_max {
            c.n_max = v;
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn emit(path: Option<&Path>, text: &[u8]) -> Result<(), Error> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text)?;
            w.flush()?;
        }
        None => io::stdout().write_all(text)?,
    }
    Ok(())
}

fn table(report: &ConvergenceReport, config: &RunConfig) -> Result<Vec<u8>, Error> {
    match config.output.format {
        TableFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(report, &mut buf)?;
            Ok(buf)
        }
        TableFormat::Md => Ok(markdown_table(report, &config.scheme.to_string()).into_bytes()),
    }
}

fn dump_fields(config: &RunConfig, finest: Option<&LevelSolution>) -> Result<(), Error> {
    if let (Some(path), Some(level)) = (&config.output.fields, finest) {
        let case = config.case()?;
        let mut w = create(path)?;
        write_fields(&mut w, &level.mesh, &level.cut_mesh, &level.solve.solution, &case)?;
        w.flush()?;
    }
    Ok(())
}

fn dump_manifest(manifest: &Manifest, path: Option<&Path>) -> Result<(), Error> {
    if let Some(path) = path {
        let mut w = create(path)?;
        write_manifest(manifest, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

/// Exit status of the first failed level, if any.
fn failure_status(failures: &[LevelFailure]) -> ExitCode {
    for f in failures {
        eprintln!("level {} failed ({}): {}", f.n, f.kind, f.message);
    }
    match failures.first().map(|f| f.kind.as_str()) {
        None => ExitCode::SUCCESS,
        Some("geometry") => ExitCode::from(3),
        Some("solver") => ExitCode::from(2),
        Some(_) => ExitCode::from(1),
    }
}

fn exit_code(e: &Error) -> ExitCode {
    match e.kind() {
        ErrorKind::Solver => ExitCode::from(2),
        ErrorKind::Geometry => ExitCode::from(3),
        ErrorKind::Input | ErrorKind::Io => ExitCode::from(1),
    }
}

fn solve(common: &Common, n: Option<u32>) -> Result<ExitCode, Error> {
    let mut config = common.config()?;
    if let Some(n) = n {
        config.n_min = n;
        config.n_max = n;
    }
    config.validate()?;
    let case = config.case()?;
    let level = run_level(&case, config.n_max, &config)?;
    eprintln!(
        "n={} dofs={} solver={:?} iterations={} residual={:.3e}",
        level.report.n, level.report.dofs, level.diagnostics.solver, level.report.iters, level.diagnostics.residual
    );
    let report = ConvergenceReport::new(vec![level.report]);
    emit(config.output.out.as_deref(), &table(&report, &config)?)?;
    dump_fields(&config, Some(&level.solution))?;
    dump_manifest(
        &Manifest::new(&config, &[level.diagnostics], &[]),
        config.output.manifest.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn converge(common: &Common, range: &Range) -> Result<ExitCode, Error> {
    let mut config = common.config()?;
    range.apply(&mut config);
    let outcome = run_convergence(&config)?;
    emit(config.output.out.as_deref(), &table(&outcome.report, &config)?)?;
    dump_fields(&config, outcome.finest.as_ref())?;
    dump_manifest(
        &Manifest::new(&config, &outcome.diagnostics, &outcome.failures),
        config.output.manifest.as_deref(),
    )?;
    Ok(failure_status(&outcome.failures))
}

fn compare(common: &Common, range: &Range) -> Result<ExitCode, Error> {
    let mut base = common.config()?;
    range.apply(&mut base);
    let run = |scheme: Scheme| {
        let config = RunConfig { scheme, ..base.clone() };
        run_convergence(&config).map(|o| (config, o))
    };
    let (ifem_config, ifem) = run(Scheme::Ifem)?;
    let (mod_config, modified) = run(Scheme::Modified)?;

    let text = match base.output.format {
        TableFormat::Md => compare_table(&ifem.report, &modified.report).into_bytes(),
        TableFormat::Csv => {
            // the fixed schema with a leading scheme column
            let mut out = Vec::new();
            for (k, (name, report)) in [("ifem", &ifem.report), ("modified", &modified.report)]
                .into_iter()
                .enumerate()
            {
                let mut buf = Vec::new();
                write_csv(report, &mut buf)?;
                let text = String::from_utf8(buf).expect("csv output is utf-8");
                for (i, line) in text.lines().enumerate() {
                    if i == 0 {
                        if k == 0 {
                            writeln!(out, "scheme,{line}")?;
                        }
                    } else {
                        writeln!(out, "{name},{line}")?;
                    }
                }
            }
            out
        }
    };
    emit(base.output.out.as_deref(), &text)?;
    dump_fields(&mod_config, modified.finest.as_ref())?;
    if let Some(path) = &base.output.manifest {
        let manifests = serde_json::json!({
            "ifem": Manifest::new(&ifem_config, &ifem.diagnostics, &ifem.failures),
            "modified": Manifest::new(&mod_config, &modified.diagnostics, &modified.failures),
        });
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &manifests)?;
        w.flush()?;
    }
    let failures: Vec<LevelFailure> = ifem.failures.into_iter().chain(modified.failures).collect();
    Ok(failure_status(&failures))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Solve { common, n } => solve(common, *n),
        Command::Converge { common, range } => converge(common, range),
        Command::Compare { common, range } => compare(common, range),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
