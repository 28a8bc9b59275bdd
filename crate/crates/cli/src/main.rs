use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use rankcauchy::extension::{certify, solve, CertifyConfig, HypothesisRecord, Verdict};
use rankcauchy::io::{load, obj_mesh, rulings_csv, samples_csv, LoadedProblem};
use rankcauchy::nullity::check_hypotheses_on_grid;

const EXIT_IO: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_DIMS: u8 = 3;

#[derive(Parser)]
#[command(name = "rankcauchy", version, about = "Rank-s submanifolds through prescribed Cauchy data")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses on the grid.
    Check(Common),
    /// Write rulings.csv and samples.csv.
    Solve(Common),
    /// Run every check and write certificate.json.
    Verify(Common),
    /// Write mesh.obj for a surface in R^3.
    ExportObj(Common),
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON).
    path: PathBuf,
    /// Grid points per chart axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Relative tolerance of the hypothesis checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Half-width of the sampled ruling interval.
    #[arg(long)]
    bmax: Option<f64>,
    /// Samples per ruling axis.
    #[arg(long)]
    bpoints: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Suppress the progress summary on stdout.
    #[arg(long)]
    quiet: bool,
    /// Replace X_1 by X_1 + EPS * phi(E_1, N*) (negative control).
    #[arg(long, value_name = "EPS")]
    perturb: Option<f64>,
}

impl Common {
    fn config(&self, loaded: &LoadedProblem) -> CertifyConfig {
        let mut c = loaded.config();
        if let Some(g) = self.grid {
            c.grid = g;
        }
        if let Some(t) = self.tol {
            c.tolerances.hypothesis = t;
        }
        if let Some(b) = self.bmax {
            c.b_max = Some(b);
        }
        if let Some(b) = self.bpoints {
            c.b_points = b;
        }
        c.perturbation = self.perturb.or(c.perturbation);
        c
    }

    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn run(cmd: &Command) -> Result<u8> {
    match cmd {
        Command::Check(c) => cmd_check(c),
        Command::Solve(c) => cmd_solve(c),
        Command::Verify(c) => cmd_verify(c),
        Command::ExportObj(c) => cmd_export_obj(c),
    }
}

fn load_problem(path: &Path) -> Result<LoadedProblem> {
    load(path).with_context(|| format!("loading {}", path.display()))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn fmt_point(a: &[f64]) -> String {
    let parts: Vec<String> = a.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn report_verdict(c: &Common, v: &Verdict) {
    match v {
        Verdict::Certified => c.say("verdict: certified"),
        Verdict::Failed { reason, point, detail, .. } => {
            eprintln!("failed: {} at a = {}: {}", reason.name(), fmt_point(point), detail)
        }
    }
}

fn cmd_check(c: &Common) -> Result<u8> {
    let loaded = load_problem(&c.path)?;
    let cfg = c.config(&loaded);
    let problem = &loaded.problem;
    let grid = problem.domain().grid(cfg.grid);
    let hyps: Vec<HypothesisRecord> = check_hypotheses_on_grid::<f64>(problem, &grid, cfg.tolerances.hypothesis)
        .iter()
        .map(HypothesisRecord::from)
        .collect();
    let d = problem.dims();
    c.say(format!("dims (s, m, c) = ({}, {}, {}); {} grid points", d.s, d.m, d.c, grid.len()));

    let mut ok = true;
    if let Some(h) = hyps.iter().find(|h| h.error.is_some()) {
        ok = false;
        eprintln!("frame: fail at a = {}: {}", fmt_point(&h.a), h.error.as_deref().unwrap_or(""));
    }
    let valid: Vec<&HypothesisRecord> = hyps.iter().filter(|h| h.error.is_none()).collect();
    if let Some(w) = valid.iter().min_by(|x, y| x.condition_ratio().total_cmp(&y.condition_ratio())) {
        let pass = valid.iter().all(|h| h.nonsingular);
        ok &= pass;
        let line = format!(
            "nonsingularity: {} (worst a = {}, sigma_min = {:e}, sigma_max = {:e})",
            if pass { "pass" } else { "fail" },
            fmt_point(&w.a),
            w.sigma_min.unwrap_or(0.0),
            w.sigma_max.unwrap_or(0.0)
        );
        if pass { c.say(line) } else { eprintln!("{line}") }
    }
    if let Some(w) = valid.iter().max_by_key(|h| h.excess_rank.unwrap_or(0)) {
        let pass = valid.iter().all(|h| h.solvable);
        ok &= pass;
        let line = format!(
            "solvability: {} (worst a = {}, rank = {}, excess_rank = {})",
            if pass { "pass" } else { "fail" },
            fmt_point(&w.a),
            w.rank.unwrap_or(0),
            w.excess_rank.unwrap_or(0)
        );
        if pass { c.say(line) } else { eprintln!("{line}") }
    }
    Ok(if ok { 0 } else { EXIT_HYPOTHESIS })
}

fn cmd_solve(c: &Common) -> Result<u8> {
    let loaded = load_problem(&c.path)?;
    let cfg = c.config(&loaded);
    match solve(&loaded.problem, &cfg) {
        Ok(sol) => {
            let r = write(&c.out, "rulings.csv", &rulings_csv(&loaded.problem, &sol))?;
            let s = write(&c.out, "samples.csv", &samples_csv(&loaded.problem, &sol))?;
            c.say(format!("b_max = {:e}", sol.b_max));
            c.say(format!("wrote {} and {}", r.display(), s.display()));
            Ok(0)
        }
        Err(v) => {
            report_verdict(c, &v);
            Ok(EXIT_HYPOTHESIS)
        }
    }
}

fn cmd_verify(c: &Common) -> Result<u8> {
    let loaded = load_problem(&c.path)?;
    let cfg = c.config(&loaded);
    let cert = certify(&loaded.problem, &cfg);
    let mut json = serde_json::to_string_pretty(&cert).context("serializing certificate")?;
    json.push('\n');
    let path = write(&c.out, "certificate.json", &json)?;
    report_verdict(c, &cert.verdict);
    c.say(format!("wrote {}", path.display()));
    Ok(if cert.verdict.is_certified() { 0 } else { EXIT_HYPOTHESIS })
}

fn cmd_export_obj(c: &Common) -> Result<u8> {
    let loaded = load_problem(&c.path)?;
    let d = loaded.problem.dims();
    if d.m != 2 || d.c != 1 {
        eprintln!("export-obj needs a surface in R^3 (m = 2, c = 1), got m = {}, c = {}", d.m, d.c);
        return Ok(EXIT_DIMS);
    }
    let cfg = c.config(&loaded);
    match solve(&loaded.problem, &cfg) {
        Ok(sol) => {
            let mesh = obj_mesh(&loaded.problem, &sol)?;
            let path = write(&c.out, "mesh.obj", &mesh)?;
            c.say(format!("wrote {}", path.display()));
            Ok(0)
        }
        Err(v) => {
            report_verdict(c, &v);
            Ok(EXIT_HYPOTHESIS)
        }
    }
}
