use std::fmt;
use std::io::{self, Write};

use limitshape::diagrams::{Dimension, Partition, Rectangle};
use limitshape::partitions1d::{self, DistinctPartitionSampler};
use limitshape::rng::{substream, SEED_ENV};
use limitshape::sampler::{self, Tableau};
use limitshape::stats::{self, Suite, Tier, TrialReport};
use limitshape::surfaces;
use limitshape::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::output::{fmt_num, header_line, sink};
use crate::{Cli, Command, Format, SuiteArg, TierArg};

/// Largest tableau (in cells) the samplers will build for one run.
pub const MAX_SAMPLE_CELLS: usize = 4_000_000;
/// Largest number of rows `contour-data` and `level-curve` will emit.
pub const MAX_OUTPUT_ROWS: usize = 4_000_000;

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Io(io::Error),
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::BudgetExceeded(_)) => 3,
            CliError::Lib(_) | CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::VerifyFailed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::VerifyFailed(k) => write!(f, "{k} report(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Everything that determines a run's output. Logged to stderr, and
/// repeated in the CSV header line.
#[derive(Serialize, Default)]
struct RunConfig {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suite: Option<SuiteArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tier: Option<TierArg>,
    seed: Option<u64>,
    #[serde(skip_serializing_if = "str::is_empty")]
    seed_source: &'static str,
    format: Option<Format>,
    output: Option<String>,
    jobs: usize,
    no_header: bool,
}

impl RunConfig {
    fn json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    fn log(&self) {
        eprintln!("limitshape: config {}", self.json());
    }
}

/// `--seed`, else `$LIMITSHAPE_SEED`, else a fresh random seed (or none,
/// when the caller has its own default).
fn resolve_seed(flag: Option<u64>, random_default: bool) -> Result<(Option<u64>, &'static str)> {
    if let Some(s) = flag {
        return Ok((Some(s), "flag"));
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        let s = v
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?;
        return Ok((Some(s), "env"));
    }
    if random_default {
        Ok((Some(rand::random::<u64>()), "random"))
    } else {
        Ok((None, "fixtures"))
    }
}

fn pick_format(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = cli.format.unwrap_or(default);
    if !allowed.contains(&f) {
        return Err(CliError::Usage(format!("format {f:?} is not available for this command")));
    }
    Ok(f)
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidParameter(format!("theta = {theta} must lie in (0, 1]")).into());
    }
    Ok(())
}

fn check_cells(cells: usize, what: &str) -> Result<()> {
    if cells > MAX_SAMPLE_CELLS {
        return Err(Error::BudgetExceeded(format!("{what} has {cells} cells, limit {MAX_SAMPLE_CELLS}")).into());
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    let mut cfg = RunConfig {
        jobs: cli.jobs,
        no_header: cli.no_header,
        output: cli.output.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    match &cli.command {
        Command::Dim { square, shape, exact_threshold } => {
            cfg.command = "dim";
            let parts = match square {
                Some(n) => vec![*n; *n],
                None => shape.clone(),
            };
            cfg.shape = Some(parts.clone());
            cfg.format = Some(pick_format(cli, Format::Text, &[Format::Text, Format::Json])?);
            cfg.log();
            dim(cli, &cfg, parts, *exact_threshold)
        }
        Command::SampleTableau { n, theta } => {
            cfg.command = "sample-tableau";
            (cfg.n, cfg.theta) = (Some(*n), Some(*theta));
            cfg.format = Some(pick_format(cli, Format::Json, &[Format::Json, Format::Csv])?);
            (cfg.seed, cfg.seed_source) = resolve_seed(cli.seed, true)?;
            cfg.log();
            sample_tableau(cli, &cfg, *n, *theta)
        }
        Command::SamplePp { n, m } => {
            cfg.command = "sample-pp";
            (cfg.n, cfg.m) = (Some(*n), Some(*m));
            cfg.format = Some(pick_format(cli, Format::Json, &[Format::Json, Format::Csv])?);
            (cfg.seed, cfg.seed_source) = resolve_seed(cli.seed, true)?;
            cfg.log();
            sample_pp(cli, &cfg, *n, *m)
        }
        Command::Surface { x, y, theta, pp } => {
            cfg.command = if *pp { "surface-pp" } else { "surface" };
            (cfg.x, cfg.y, cfg.theta) = (Some(*x), Some(*y), Some(*theta));
            cfg.format = Some(pick_format(cli, Format::Text, &[Format::Text, Format::Json])?);
            cfg.log();
            surface(cli, *x, *y, *theta, *pp)
        }
        Command::LevelCurve { alpha, theta, grid } => {
            cfg.command = "level-curve";
            (cfg.alpha, cfg.theta, cfg.grid) = (Some(*alpha), Some(*theta), Some(*grid));
            cfg.format = Some(pick_format(cli, Format::Csv, &[Format::Csv, Format::Json])?);
            cfg.log();
            level_curve(cli, &cfg, *alpha, *theta, *grid)
        }
        Command::ContourData { n, trials } => {
            cfg.command = "contour-data";
            (cfg.n, cfg.trials) = (Some(*n), Some(*trials));
            cfg.format = Some(pick_format(cli, Format::Csv, &[Format::Csv])?);
            (cfg.seed, cfg.seed_source) = resolve_seed(cli.seed, true)?;
            cfg.log();
            contour_data(cli, &cfg, *n, *trials)
        }
        Command::Verify { suite, tier, full } => {
            cfg.command = "verify";
            let tier = if *full { TierArg::Full } else { *tier };
            (cfg.suite, cfg.tier) = (Some(*suite), Some(tier));
            cfg.format = Some(pick_format(cli, Format::Json, &[Format::Json, Format::Csv])?);
            (cfg.seed, cfg.seed_source) = resolve_seed(cli.seed, false)?;
            cfg.log();
            verify(cli, &cfg, *suite, tier)
        }
    }
}

fn dim(cli: &Cli, cfg: &RunConfig, parts: Vec<usize>, threshold: usize) -> Result<()> {
    let l = Partition::new(parts)?;
    let d = l.dimension_auto(threshold);
    let mut out = sink(cli.output.as_deref())?;
    match (cfg.format, &d) {
        (Some(Format::Json), Dimension::Exact(v)) => {
            let j = json!({ "shape": l.parts(), "size": l.size(), "dimension": v.to_string(), "ln_dimension": d.ln() });
            writeln!(out, "{j}")?;
        }
        (Some(Format::Json), Dimension::Log(ln)) => {
            let j = json!({ "shape": l.parts(), "size": l.size(), "dimension": null, "ln_dimension": ln });
            writeln!(out, "{j}")?;
        }
        (_, Dimension::Exact(v)) => writeln!(out, "{v}")?,
        (_, Dimension::Log(ln)) => writeln!(out, "exp({})", fmt_num(*ln))?,
    }
    out.flush()?;
    Ok(())
}

fn rectangle(n: usize, theta: f64) -> Result<Rectangle> {
    check_theta(theta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()).into());
    }
    let cols = (theta * n as f64).round() as usize;
    if cols == 0 {
        return Err(Error::InvalidParameter(format!("theta * n = {} rounds to no columns", theta * n as f64)).into());
    }
    check_cells(n.saturating_mul(cols), "the rectangle")?;
    Ok(Rectangle::new(n, cols))
}

fn write_csv_rows<T: ToString>(out: &mut dyn Write, rows: &[Vec<T>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn sample_tableau(cli: &Cli, cfg: &RunConfig, n: usize, theta: f64) -> Result<()> {
    let rect = rectangle(n, theta)?;
    let seed = cfg.seed.expect("sampling commands always have a seed");
    let t = sampler::sample_rectangular_tableau(rect, &mut substream(seed, 0))?;
    eprintln!("limitshape: sampled {}x{} tableau, ln d = {:.6}", rect.rows, rect.cols, t.shape().log_dimension());
    let mut out = sink(cli.output.as_deref())?;
    if cfg.format == Some(Format::Csv) {
        if !cli.no_header {
            writeln!(out, "{}", header_line(&cfg.json()))?;
        }
        write_csv_rows(&mut out, t.rows())?;
    } else {
        let j = json!({ "rows": rect.rows, "cols": rect.cols, "seed": seed, "tableau": t });
        writeln!(out, "{j}")?;
    }
    out.flush()?;
    Ok(())
}

fn sample_pp(cli: &Cli, cfg: &RunConfig, n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()).into());
    }
    let seed = cfg.seed.expect("sampling commands always have a seed");
    let parts = DistinctPartitionSampler::new(m, n * n)?;
    let pp = partitions1d::sample_plane_partition_with(&parts, Rectangle::square(n), &mut substream(seed, 0))?;
    let ratio = partitions1d::distinct_fraction(m, n * n)?;
    eprintln!(
        "limitshape: q/p = {ratio:.6} ({} counts)",
        if parts.is_exact() { "exact" } else { "floating-point" }
    );
    let mut out = sink(cli.output.as_deref())?;
    if cfg.format == Some(Format::Csv) {
        if !cli.no_header {
            writeln!(out, "{}", header_line(&cfg.json()))?;
        }
        write_csv_rows(&mut out, pp.rows())?;
    } else {
        let j = json!({
            "n": n,
            "m": m,
            "seed": seed,
            "distinct_fraction": ratio,
            "exact_counts": parts.is_exact(),
            "plane_partition": pp,
        });
        writeln!(out, "{j}")?;
    }
    out.flush()?;
    Ok(())
}

fn surface(cli: &Cli, x: f64, y: f64, theta: f64, pp: bool) -> Result<()> {
    check_theta(theta)?;
    let (value, capped) = if pp {
        let c = surfaces::plane_partition_surface(theta, x, y)?;
        (c.value, c.capped)
    } else if theta == 1.0 {
        (surfaces::limit_surface_l(x, y)?, false)
    } else {
        (surfaces::rect_surface_l(theta, x, y)?, false)
    };
    let mut out = sink(cli.output.as_deref())?;
    if cli.format == Some(Format::Json) {
        let name = if pp { "M" } else { "L" };
        writeln!(out, "{}", json!({ "surface": name, "x": x, "y": y, "theta": theta, "value": value, "capped": capped }))?;
    } else {
        writeln!(out, "{}", fmt_num(value))?;
    }
    out.flush()?;
    Ok(())
}

fn level_curve(cli: &Cli, cfg: &RunConfig, alpha: f64, theta: f64, grid: usize) -> Result<()> {
    check_theta(theta)?;
    if grid == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()).into());
    }
    if grid >= MAX_OUTPUT_ROWS {
        return Err(Error::BudgetExceeded(format!("N = {grid}, limit {MAX_OUTPUT_ROWS}")).into());
    }
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = (-theta * half, half);
    let mut pts = Vec::with_capacity(grid + 1);
    for i in 0..=grid {
        let u = if i == grid { b } else { a + (b - a) * i as f64 / grid as f64 };
        let v = if theta == 1.0 {
            surfaces::g_tilde(alpha, u)?
        } else {
            surfaces::rect_level_curve_extended(theta, alpha, u)?
        };
        pts.push((u, v));
    }
    let mut out = sink(cli.output.as_deref())?;
    if cfg.format == Some(Format::Json) {
        let us: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let vs: Vec<f64> = pts.iter().map(|p| p.1).collect();
        writeln!(out, "{}", json!({ "alpha": alpha, "theta": theta, "u": us, "v": vs }))?;
    } else {
        if !cli.no_header {
            writeln!(out, "{}", header_line(&cfg.json()))?;
        }
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["u", "v", "x", "y"])?;
        for (u, v) in pts {
            let (x, y) = surfaces::RotatedPoint { u, v }.to_xy();
            w.write_record([u, v, x, y].map(|z| z.to_string()))?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(())
}

fn contour_data(cli: &Cli, cfg: &RunConfig, n: usize, trials: usize) -> Result<()> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidParameter("n and trials must be positive".into()).into());
    }
    check_cells(n.saturating_mul(n), "the square")?;
    let rows = n.saturating_mul(n).saturating_mul(trials);
    if rows > MAX_OUTPUT_ROWS {
        return Err(Error::BudgetExceeded(format!("{rows} output rows, limit {MAX_OUTPUT_ROWS}")).into());
    }
    let seed = cfg.seed.expect("sampling commands always have a seed");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (tableaux, l) = pool.install(|| -> Result<(Vec<Tableau>, Vec<f64>)> {
        let tableaux = (0..trials)
            .into_par_iter()
            .map(|t| sampler::sample_square_tableau(n, &mut substream(seed, t as u64)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let l = (0..n * n)
            .into_par_iter()
            .map(|c| surfaces::limit_surface_l((c / n + 1) as f64 / n as f64, (c % n + 1) as f64 / n as f64))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok((tableaux, l))
    })?;
    let mut out = sink(cli.output.as_deref())?;
    if !cli.no_header {
        writeln!(out, "{}", header_line(&cfg.json()))?;
    }
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["trial", "i", "j", "x", "y", "s", "l"])?;
    let nn = (n * n) as f64;
    for (t, tab) in tableaux.iter().enumerate() {
        for (i, row) in tab.rows().iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                w.write_record([
                    t.to_string(),
                    (i + 1).to_string(),
                    (j + 1).to_string(),
                    ((i + 1) as f64 / n as f64).to_string(),
                    ((j + 1) as f64 / n as f64).to_string(),
                    (e as f64 / nn).to_string(),
                    l[i * n + j].to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    drop(w);
    out.flush()?;
    Ok(())
}

fn verify(cli: &Cli, cfg: &RunConfig, suite: SuiteArg, tier: TierArg) -> Result<()> {
    let suite = match suite {
        SuiteArg::Exact => Suite::Exact,
        SuiteArg::Variational => Suite::Variational,
        SuiteArg::Montecarlo => Suite::MonteCarlo,
        SuiteArg::All => Suite::All,
    };
    let tier = match tier {
        TierArg::Small => Tier::Small,
        TierArg::Full => Tier::Full,
    };
    let mut reports = stats::run_suite(suite, tier, cfg.seed, cli.jobs)?;
    if cli.no_header {
        for r in &mut reports {
            r.runtime_ms = None;
        }
    }
    // Failing reports go last so that they end up at the bottom of a log.
    let (passed, failed): (Vec<TrialReport>, Vec<TrialReport>) = reports.into_iter().partition(|r| r.pass);
    let mut out = sink(cli.output.as_deref())?;
    if cfg.format == Some(Format::Csv) {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record([
            "theorem", "n", "alpha", "theta", "m", "trials", "seed", "statistic", "threshold", "direction", "pass",
            "runtime_ms",
        ])?;
        for r in passed.iter().chain(&failed) {
            let opt = |v: Option<String>| v.unwrap_or_default();
            let p = &r.params;
            let dir = serde_json::to_value(r.direction)?;
            w.write_record([
                r.theorem.clone(),
                opt(p.n.map(|v| v.to_string())),
                opt(p.alpha.map(|v| v.to_string())),
                opt(p.theta.map(|v| v.to_string())),
                opt(p.m.map(|v| v.to_string())),
                opt(p.trials.map(|v| v.to_string())),
                p.seed.to_string(),
                r.statistic.to_string(),
                r.threshold.to_string(),
                dir.as_str().unwrap_or_default().to_string(),
                r.pass.to_string(),
                opt(r.runtime_ms.map(|v| v.to_string())),
            ])?;
        }
        w.flush()?;
    } else {
        for r in passed.iter().chain(&failed) {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
    }
    out.flush()?;
    eprintln!("limitshape: {}/{} reports pass", passed.len(), passed.len() + failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(failed.len()))
    }
}
