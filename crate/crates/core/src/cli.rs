//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver failure (the failing
//! stage is named), and for `verify` the number of failed checks capped at 125.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::geometry::{AnnularDomain, BetaSpec, DomainConfig, Outline};
use crate::mesh::{build_mesh, read_mesh, write_mesh, Mesh, MeshParams};
use crate::plot::{fit_loglog_slope, LinePlot, Scale, Series};
use crate::radial_oracle::{
    q_shell, shell_bc_residuals, sigma_beta_shell, sigma_dirichlet_shell, small_beta_slope, ShellSpec,
};
use crate::spectral::Discretization;
use crate::verify::{
    default_suite, eigenfunction_convergence, fixture, radius_sweep, shell_validation, sweep_beta, ConvergenceTable,
    Report, Study, SuiteOutput,
};

#[derive(Debug, Parser)]
#[command(
    name = "steklov-robin",
    version,
    about = "First Steklov-Robin eigenvalue on annular domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form shell values.
    Oracle {
        /// Space dimension (>= 2).
        #[arg(short = 'n', long, default_value_t = 2)]
        n: u32,
        #[arg(short = 'r', long)]
        r: f64,
        #[arg(short = 'R', long = "outer")]
        outer: f64,
        #[arg(short = 'b', long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Solve all four eigenvalue problems on one domain.
    Solve {
        #[command(flatten)]
        input: DomainArgs,
        /// Use this mesh file instead of generating one.
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a certification suite.
    Verify {
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value = "verify-out")]
        out: PathBuf,
    },
    /// Sweep the weight (`--beta lo:hi:n`, geometric) or the hole radius (`--radius r1,r2,..`).
    Sweep {
        #[command(flatten)]
        input: DomainArgs,
        #[arg(long, conflicts_with = "radius", required_unless_present = "radius")]
        beta: Option<String>,
        #[arg(long)]
        radius: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Refinement study on a shell against the closed forms.
    Convergence {
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value = "shell12.json")]
        domain: String,
        /// Cells of the coarsest level as `n_radial,n_angular`.
        #[arg(long, default_value = "5,64")]
        base: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Write the generated mesh of a domain.
    Mesh {
        #[command(flatten)]
        input: DomainArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DomainArgs {
    /// Domain JSON file, or the name of a shipped fixture.
    #[arg(long, default_value = "shell12.json")]
    pub domain: String,
    #[arg(long, default_value_t = 16)]
    pub n_radial: usize,
    #[arg(long, default_value_t = 128)]
    pub n_angular: usize,
    #[arg(long, default_value_t = 2)]
    pub neck_layers: usize,
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
}

impl DomainArgs {
    fn params(&self) -> MeshParams {
        MeshParams {
            n_radial: self.n_radial,
            n_angular: self.n_angular,
            neck_layers: self.neck_layers,
            refine: self.refine,
        }
    }
}

/// Failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError {
            code: 2,
            message: e.to_string(),
        }
    }

    fn stage(stage: &str, e: impl std::fmt::Display) -> Self {
        CliError {
            code: 3,
            message: format!("stage '{stage}' failed: {e}"),
        }
    }
}

/// Input errors map to 2, everything else to 3 with the stage named.
fn classify(stage: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::Parameter(_)
        | Error::Geometry(_)
        | Error::UnsupportedOutline(_)
        | Error::Resolution(_)
        | Error::Parse { .. }
        | Error::Weight(_)
        | Error::Config(_)
        | Error::Json(_) => CliError::input(e),
        other => CliError::stage(stage, other),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the command, prints errors, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: Command) -> CliResult<i32> {
    match command {
        Command::Oracle { n, r, outer, beta } => cmd_oracle(n, r, outer, beta).map(|text| {
            print!("{text}");
            0
        }),
        Command::Solve { input, mesh, out } => cmd_solve(&input, mesh.as_deref(), &out),
        Command::Verify { suite, out } => cmd_verify(&suite, &out),
        Command::Sweep {
            input,
            beta,
            radius,
            out,
        } => cmd_sweep(&input, beta.as_deref(), radius.as_deref(), &out),
        Command::Convergence {
            levels,
            domain,
            base,
            out,
        } => cmd_convergence(levels, &domain, &base, &out),
        Command::Mesh { input, out } => cmd_mesh(&input, &out),
    }
}

/// Loads a domain file, falling back to a shipped fixture of that name.
pub fn load_config(name: &str) -> CliResult<DomainConfig> {
    let path = Path::new(name);
    if path.exists() {
        DomainConfig::load(path).map_err(classify("load domain"))
    } else {
        fixture(name).map_err(|_| CliError::input(format!("no domain file or fixture named '{name}'")))
    }
}

fn load(input: &DomainArgs) -> CliResult<(AnnularDomain, BetaSpec)> {
    load_config(&input.domain)?.build().map_err(classify("load domain"))
}

/// Writes through a temporary file so a reader never sees partial output.
fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::stage("write output", e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| CliError::stage("write output", e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::stage("write output", e))
}

fn csv_table<R: Serialize>(rows: &[R]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::stage("write table", e))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::stage("write table", e))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn svg(plot: LinePlot) -> CliResult<String> {
    plot.to_svg().map_err(|e| CliError::stage("plot", e))
}

pub fn cmd_oracle(n: u32, r: f64, outer: f64, beta: f64) -> CliResult<String> {
    let spec = ShellSpec::new(n, r, outer).map_err(CliError::input)?;
    let c = classify("oracle");
    let sigma = sigma_beta_shell(&spec, beta).map_err(&c)?;
    let sd = sigma_dirichlet_shell(&spec).map_err(&c)?;
    let q = q_shell(&spec).map_err(&c)?;
    let (inner_res, outer_res) = shell_bc_residuals(&spec, beta).map_err(&c)?;
    let slope = small_beta_slope(&spec).map_err(&c)?;
    let mut s = String::new();
    let _ = writeln!(s, "shell A({r},{outer}) in dimension {n}, beta = {beta}");
    let _ = writeln!(s, "sigma_beta         {sigma:.7}");
    let _ = writeln!(s, "sigma_D            {sd:.7}");
    let _ = writeln!(s, "q                  {q:.7}");
    let _ = writeln!(s, "robin residual     {inner_res:.3e}");
    let _ = writeln!(s, "steklov residual   {outer_res:.3e}");
    let _ = writeln!(s, "small-beta slope   {slope:.7}");
    if n >= 3 {
        let _ = writeln!(
            s,
            "note: the commonly printed n>=3 closed form is corrected here (see the oracle chapter of the guide)"
        );
    }
    Ok(s)
}

#[derive(Debug, Serialize)]
struct SolveSummary {
    domain: String,
    beta: String,
    h: f64,
    dofs: usize,
    sigma_beta: f64,
    sigma_beta_residual: f64,
    sigma_beta_gap: Option<f64>,
    sigma_dirichlet: f64,
    mu1: f64,
    q_beta: f64,
    weight_norm: f64,
    outer_perimeter: f64,
}

fn solve_summary(label: &str, disc: &Discretization, beta: &BetaSpec) -> CliResult<(SolveSummary, Vec<f64>)> {
    let robin = disc.robin(beta).map_err(classify("robin solve"))?;
    let summary = SolveSummary {
        domain: label.to_string(),
        beta: beta.label(),
        h: disc.h(),
        dofs: disc.num_dofs(),
        sigma_beta: robin.value,
        sigma_beta_residual: robin.residual,
        sigma_beta_gap: robin.gap,
        sigma_dirichlet: disc.dirichlet().map_err(classify("dirichlet solve"))?.value,
        mu1: disc.mu1().map_err(classify("mu1 solve"))?.value,
        q_beta: disc.q_beta(beta).map_err(classify("q solve"))?.value,
        weight_norm: disc.weight_norm(beta).map_err(classify("assembly"))?,
        outer_perimeter: disc.outer_perimeter(),
    };
    Ok((summary, robin.vector))
}

pub fn cmd_solve(input: &DomainArgs, mesh_path: Option<&Path>, out: &Path) -> CliResult<i32> {
    let (domain, beta) = load(input)?;
    let mesh: Mesh = match mesh_path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            read_mesh(&text).map_err(classify("read mesh"))?
        }
        None => build_mesh(&domain, &input.params()).map_err(classify("mesh"))?,
    };
    let disc = Discretization::new(mesh).map_err(classify("assembly"))?;
    let (summary, vector) = solve_summary(&input.domain, &disc, &beta)?;
    let mut eig = String::from("x,y,u\n");
    for (p, u) in disc.mesh.vertices.iter().zip(&vector) {
        let _ = writeln!(eig, "{:?},{:?},{:?}", p[0], p[1], u);
    }
    write_atomic(&out.join("eigenvector.csv"), &eig)?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_atomic(&out.join("solve.json"), &json)?;
    println!("sigma_beta = {:.10}", summary.sigma_beta);
    println!("sigma_D    = {:.10}", summary.sigma_dirichlet);
    println!("mu1        = {:.10}", summary.mu1);
    println!("q_beta     = {:.10}", summary.q_beta);
    Ok(0)
}

fn convergence_plot(table: &ConvergenceTable) -> CliResult<(String, f64)> {
    let pts: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.h, r.sigma_err.abs())).collect();
    let slope = fit_loglog_slope(&pts).map_err(|e| CliError::stage("fit order", e))?;
    let dpts: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.h, r.sigma_d_err.abs())).collect();
    let plot = LinePlot::new("relative eigenvalue error", "h", "error", Scale::Log, Scale::Log)
        .with_series(Series::new("sigma_beta", pts))
        .with_series(Series::new("sigma_D", dpts))
        .with_annotation(format!("fitted slope {slope:.2}"));
    Ok((svg(plot)?, slope))
}

fn write_suite_outputs(output: &SuiteOutput, out: &Path) -> CliResult<()> {
    let csv = output
        .report
        .to_csv_string()
        .map_err(|e| CliError::stage("write report", e))?;
    write_atomic(&out.join("report.csv"), &csv)?;
    write_atomic(&out.join("report.json"), &output.report.to_json())?;

    let mut sigma = LinePlot::new(
        "sigma_beta against beta",
        "beta",
        "sigma_beta",
        Scale::Log,
        Scale::Linear,
    );
    for (label, rows) in &output.sweeps {
        sigma = sigma.with_series(Series::new(label, rows.iter().map(|r| (r.beta, r.sigma)).collect()));
    }
    write_atomic(&out.join("sigma_vs_beta.svg"), &svg(sigma)?)?;
    let mut dist = LinePlot::new(
        "H1 distance to the Dirichlet eigenfunction",
        "beta",
        "distance",
        Scale::Log,
        Scale::Log,
    );
    for (label, rows) in &output.distances {
        dist = dist.with_series(Series::new(label, rows.iter().map(|r| (r.beta, r.distance)).collect()));
    }
    write_atomic(&out.join("h1_distance_vs_beta.svg"), &svg(dist)?)?;
    let mut rad = LinePlot::new(
        "sigma_beta against hole radius",
        "r",
        "sigma_beta",
        Scale::Linear,
        Scale::Linear,
    );
    for (label, rows) in &output.radius {
        rad = rad.with_series(Series::new(label, rows.iter().map(|r| (r.r, r.sigma)).collect()));
    }
    write_atomic(&out.join("sigma_vs_r.svg"), &svg(rad)?)?;
    let (conv, _) = convergence_plot(&output.convergence)?;
    write_atomic(&out.join("error_vs_h.svg"), &conv)?;
    Ok(())
}

pub fn cmd_verify(suite: &str, out: &Path) -> CliResult<i32> {
    if suite != "default" {
        return Err(CliError::input(format!("unknown suite '{suite}' (available: default)")));
    }
    let output = default_suite().map_err(classify("verify"))?;
    write_suite_outputs(&output, out)?;
    let failures = output.report.failures();
    for r in output.report.records.iter().filter(|r| !r.passed()) {
        eprintln!(
            "FAIL {} [{} beta={}] lhs={:e} rhs={:e}",
            r.name, r.provenance.domain, r.provenance.beta, r.lhs, r.rhs
        );
    }
    println!("{} checks, {} failed", output.report.records.len(), failures);
    Ok(failures.min(125) as i32)
}

/// `lo:hi:n`, geometric.
pub fn parse_beta_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::input(format!("beta grid '{spec}' is not of the form lo:hi:n"));
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(CliError::input(format!(
            "beta grid needs 0 < lo < hi and n >= 2, got '{spec}'"
        )));
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect())
}

fn parse_list(spec: &str) -> CliResult<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("cannot parse '{s}' as a number")))
        })
        .collect()
}

pub fn cmd_sweep(input: &DomainArgs, beta: Option<&str>, radius: Option<&str>, out: &Path) -> CliResult<i32> {
    let (domain, weight) = load(input)?;
    if let Some(spec) = beta {
        let grid = parse_beta_grid(spec)?;
        let mesh = build_mesh(&domain, &input.params()).map_err(classify("mesh"))?;
        let study = Study::new(input.domain.clone(), mesh).map_err(classify("assembly"))?;
        let (rows, mut records) = sweep_beta(&study, &grid).map_err(classify("beta sweep"))?;
        let (dist, recs) = eigenfunction_convergence(&study, &grid).map_err(classify("eigenfunction distances"))?;
        records.extend(recs);
        write_atomic(&out.join("sweep.csv"), &csv_table(&rows)?)?;
        write_atomic(&out.join("distance.csv"), &csv_table(&dist)?)?;
        let report = Report::new(records);
        write_atomic(
            &out.join("sweep_checks.csv"),
            &report.to_csv_string().map_err(|e| CliError::stage("write report", e))?,
        )?;
        let plot = LinePlot::new(
            "sigma_beta against beta",
            "beta",
            "sigma_beta",
            Scale::Log,
            Scale::Linear,
        )
        .with_series(Series::new(
            &input.domain,
            rows.iter().map(|r| (r.beta, r.sigma)).collect(),
        ));
        write_atomic(&out.join("sigma_vs_beta.svg"), &svg(plot)?)?;
        let plot = LinePlot::new(
            "H1 distance to the Dirichlet eigenfunction",
            "beta",
            "distance",
            Scale::Log,
            Scale::Log,
        )
        .with_series(Series::new(
            &input.domain,
            dist.iter().map(|r| (r.beta, r.distance)).collect(),
        ));
        write_atomic(&out.join("h1_distance_vs_beta.svg"), &svg(plot)?)?;
        for r in &rows {
            println!("{:e} {:.10}", r.beta, r.sigma);
        }
    } else if let Some(spec) = radius {
        let r_list = parse_list(spec)?;
        let Some(b) = weight.as_constant() else {
            return Err(CliError::input("radius sweeps use a constant weight"));
        };
        let outline = match &domain.outline {
            Outline::Radial(o) => o.clone(),
            other => {
                return Err(CliError::input(format!(
                    "radius sweeps need a radial outline, got {}",
                    other.kind()
                )))
            }
        };
        let (rows, records) = radius_sweep(&outline, &input.domain, b, &r_list, input.n_radial, input.n_angular)
            .map_err(classify("radius sweep"))?;
        write_atomic(&out.join("radius.csv"), &csv_table(&rows)?)?;
        let report = Report::new(records);
        write_atomic(
            &out.join("radius_checks.csv"),
            &report.to_csv_string().map_err(|e| CliError::stage("write report", e))?,
        )?;
        let plot = LinePlot::new(
            "sigma_beta against hole radius",
            "r",
            "sigma_beta",
            Scale::Linear,
            Scale::Linear,
        )
        .with_series(Series::new("FEM", rows.iter().map(|r| (r.r, r.sigma)).collect()))
        .with_series(Series::new(
            "shell A(r,R_m)",
            rows.iter().map(|r| (r.r, r.shell_sigma)).collect(),
        ));
        write_atomic(&out.join("sigma_vs_r.svg"), &svg(plot)?)?;
        for r in &rows {
            println!("{} {:.10} {:.10}", r.r, r.sigma, r.shell_sigma);
        }
    }
    Ok(0)
}

pub fn cmd_convergence(levels: usize, domain: &str, base: &str, out: &Path) -> CliResult<i32> {
    let (dom, beta) = load_config(domain)?.build().map_err(classify("load domain"))?;
    let outer = match &dom.outline {
        Outline::Radial(o) if o.is_circle() => o.a0,
        _ => return Err(CliError::input("convergence studies need a circular outline (a shell)")),
    };
    let Some(b) = beta.as_constant() else {
        return Err(CliError::input("convergence studies use a constant weight"));
    };
    let cells = parse_list(base)?;
    let [nr, na] = cells[..] else {
        return Err(CliError::input("--base must be n_radial,n_angular"));
    };
    if nr < 1.0 || na < 1.0 || nr.fract() != 0.0 || na.fract() != 0.0 {
        return Err(CliError::input("--base must hold two positive integers"));
    }
    let (table, records) = shell_validation(dom.hole_radius, outer, levels, b, (nr as usize, na as usize))
        .map_err(classify("convergence"))?;
    write_atomic(&out.join("convergence.csv"), &csv_table(&table.rows)?)?;
    let report = Report::new(records);
    write_atomic(
        &out.join("convergence_checks.csv"),
        &report.to_csv_string().map_err(|e| CliError::stage("write report", e))?,
    )?;
    let (plot, slope) = convergence_plot(&table)?;
    write_atomic(&out.join("error_vs_h.svg"), &plot)?;
    for r in &table.rows {
        println!(
            "level {} h {:.5} sigma_err {:.3e} sigma_d_err {:.3e} q_err {:.3e}",
            r.level, r.h, r.sigma_err, r.sigma_d_err, r.q_err
        );
    }
    let fmt = |o: Vec<f64>| o.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    println!("order sigma_beta: {}", fmt(table.sigma_orders()));
    println!("order sigma_D:    {}", fmt(table.sigma_d_orders()));
    println!("fitted order (least squares, sigma_beta): {slope:.3}");
    Ok(0)
}

pub fn cmd_mesh(input: &DomainArgs, out: &Path) -> CliResult<i32> {
    let (domain, _) = load(input)?;
    let mesh = build_mesh(&domain, &input.params()).map_err(classify("mesh"))?;
    write_atomic(out, &write_mesh(&mesh))?;
    println!(
        "{} vertices, {} triangles, h = {:.5}",
        mesh.num_vertices(),
        mesh.triangles.len(),
        mesh.h()
    );
    Ok(0)
}
