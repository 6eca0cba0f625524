//! Command-line front end. Every subcommand writes a table as CSV (header
//! row first) or as JSON `{"meta": {...}, "rows": [...]}`.
//!
//! Exit codes: 0 on success, 2 for invalid usage, 3 for numerical failure.

use crate::equilibrium::{
    density_vx_cardano, density_vx_explicit, equilibrium_minimize, solution_vx_explicit,
    variational_residual, EquilibriumSolution, ExternalField, LinearField, MinimizeOptions,
    PolynomialField,
};
use crate::error::Error;
use crate::finiten::hard_edge_convergence;
use crate::kernel::{kernel_diag_limit, kernel_integral_matched, kernel_meijer};
use crate::meijer::{g303_series, mb_loop, GParams303, SectorPoint};
use crate::mp::{rel_diff, Precision};
use crate::rhframe::invariant_suite;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::{Complex, Float};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Significant digits written for high-precision values.
const OUTPUT_DIGITS: usize = 20;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "hardedge",
    version,
    about = "Hard-edge kernels, model RH problems and equilibrium measures"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by all subcommands.
#[derive(Args, Debug, Serialize)]
pub struct RunConfig {
    /// Working precision in decimal digits; defaults to MB_PRECISION or 50.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Limiting hard-edge kernel on a grid of points.
    Kernel(KernelArgs),
    /// Equilibrium density for V(x) = x by the closed form and the cubic.
    Density(DensityArgs),
    /// Equilibrium measure by energy minimization or the closed form.
    Eqsolve(EqsolveArgs),
    /// Scaled finite-n kernel against the limiting kernel.
    Converge(ConvergeArgs),
    /// Meijer G-function G^{m,0}_{0,3} by residue series and loop integral.
    Meijer(MeijerArgs),
    /// Identity suite of the model Riemann-Hilbert matrices.
    Rhcheck(RhcheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum KernelRoute {
    Integral,
    Meijer,
    Both,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// `a:b:k` for k equally spaced points from a to b, or a single value.
    #[arg(long)]
    pub x_grid: String,
    #[arg(long)]
    pub y_grid: String,
    #[arg(long, value_enum, default_value_t = KernelRoute::Both)]
    pub route: KernelRoute,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum DensityRoute {
    Explicit,
    Cardano,
    Both,
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    /// External field; only `laguerre` has closed-form routes.
    #[arg(long, default_value = "laguerre")]
    pub v: String,
    #[arg(long, value_enum, default_value_t = DensityRoute::Both)]
    pub route: DensityRoute,
    /// Number of sample points, at cell midpoints of (0, 27/8).
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum EqRoute {
    Minimize,
    Explicit,
}

#[derive(Args, Debug, Serialize)]
pub struct EqsolveArgs {
    /// `laguerre` or comma-separated polynomial coefficients `c0,c1,...`.
    #[arg(long, default_value = "laguerre")]
    pub v: String,
    #[arg(long, value_enum, default_value_t = EqRoute::Minimize)]
    pub route: EqRoute,
    #[arg(long, default_value_t = 2000)]
    pub cells: usize,
    /// Right end of the discretization interval.
    #[arg(long, default_value_t = 6.0)]
    pub upper: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct ConvergeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    /// Comma-separated ascending sizes.
    #[arg(long, default_value = "4,8,16,32")]
    pub ns: String,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MeijerRoute {
    Series,
    Loop,
    Both,
}

#[derive(Args, Debug, Serialize)]
pub struct MeijerArgs {
    /// Number of gamma factors in the numerator, 1 to 3.
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Comma-separated parameters `b1,b2,b3`.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Grid of moduli, `a:b:k` or a single value.
    #[arg(long)]
    pub modulus: String,
    /// Argument of z on the principal sheet.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub arg: String,
    /// Sheet index k; the argument used is `arg + 2πk`.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub sheet: i32,
    #[arg(long, value_enum, default_value_t = MeijerRoute::Both)]
    pub route: MeijerRoute,
}

#[derive(Args, Debug, Serialize)]
pub struct RhcheckArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
}

/// A failure mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical {
        operation: &'static str,
        source: Error,
    },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical { operation, source } => write!(f, "{operation} failed: {source}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical { .. } => EXIT_NUMERICAL,
        }
    }
}

fn numerical(operation: &'static str) -> impl Fn(Error) -> CliError {
    move |source| CliError::Numerical { operation, source }
}

/// A rendered table: named columns of preformatted cells.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, meta: serde_json::Value) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({ "meta": meta, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("tables serialize");
        s.push('\n');
        s
    }
}

/// Outcome of a subcommand: the table plus whether its checks passed.
pub struct Outcome {
    pub table: Table,
    pub ok: bool,
    pub summary: Option<String>,
}

fn fmt_real(v: &Float) -> String {
    format!("{:.*e}", OUTPUT_DIGITS - 1, v)
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.6e}")
}

fn resolve_precision(run: &RunConfig) -> Result<Precision, CliError> {
    match run.precision {
        Some(d) => Precision::new(d).map_err(|e| CliError::Usage(e.to_string())),
        None => Precision::from_env().map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn parse_real(s: &str, what: &str, prec: Precision) -> Result<Float, CliError> {
    prec.parse(s)
        .map_err(|_| CliError::Usage(format!("{what}: cannot parse {s:?} as a number")))
}

fn parse_alpha(s: &str, prec: Precision) -> Result<Float, CliError> {
    let a = parse_real(s, "--alpha", prec)?;
    if !(a > -1) {
        return Err(CliError::Usage(format!(
            "--alpha must satisfy α > -1, got {s}"
        )));
    }
    Ok(a)
}

/// Parses `a:b:k` (k points from a to b inclusive) or a single value.
pub fn parse_grid(s: &str, what: &str, prec: Precision) -> Result<Vec<Float>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![parse_real(v, what, prec)?]),
        [a, b, k] => {
            let a = parse_real(a, what, prec)?;
            let b = parse_real(b, what, prec)?;
            let k: usize = k.trim().parse().map_err(|_| {
                CliError::Usage(format!("{what}: point count {k:?} is not an integer"))
            })?;
            if k == 0 {
                return Err(CliError::Usage(format!(
                    "{what}: a grid needs at least one point"
                )));
            }
            if k == 1 {
                return Ok(vec![a]);
            }
            let step = Float::with_val(prec.bits(), &b - &a) / (k - 1) as u32;
            Ok((0..k)
                .map(|i| {
                    if i == k - 1 {
                        b.clone()
                    } else {
                        Float::with_val(prec.bits(), &step * i as u32) + &a
                    }
                })
                .collect())
        }
        _ => Err(CliError::Usage(format!(
            "{what}: expected a:b:k or a single value, got {s:?}"
        ))),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{what}: cannot parse {t:?}")))
        })
        .collect()
}

fn parse_field(v: &str) -> Result<Box<dyn ExternalField>, CliError> {
    if v.eq_ignore_ascii_case("laguerre") || v == "x" {
        return Ok(Box::new(LinearField));
    }
    let coeffs: Vec<f64> = parse_list(v, "--v")?;
    PolynomialField::new(coeffs)
        .map(|f| Box::new(f) as Box<dyn ExternalField>)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_kernel(a: &KernelArgs, prec: Precision) -> Result<Outcome, CliError> {
    let alpha = parse_alpha(&a.alpha, prec)?;
    let xs = parse_grid(&a.x_grid, "--x-grid", prec)?;
    let ys = parse_grid(&a.y_grid, "--y-grid", prec)?;
    if xs.iter().chain(&ys).any(|v| !(*v > 0)) {
        return Err(CliError::Usage("kernel grids must be positive".into()));
    }
    let pairs: Vec<(Float, Float)> = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let rows: Vec<Result<Vec<String>, CliError>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let diagonal = x == y;
            let integral = match a.route {
                KernelRoute::Meijer => None,
                _ => Some(
                    kernel_integral_matched(&alpha, x, y, prec)
                        .map_err(numerical("kernel_integral"))?,
                ),
            };
            let meijer = match a.route {
                KernelRoute::Integral => None,
                _ if diagonal => Some(
                    kernel_diag_limit(&alpha, x, prec).map_err(numerical("kernel_diag_limit"))?,
                ),
                _ => Some(kernel_meijer(&alpha, x, y, prec).map_err(numerical("kernel_meijer"))?),
            };
            let mut row = vec![fmt_real(x), fmt_real(y)];
            row.extend(integral.iter().map(fmt_real));
            row.extend(meijer.iter().map(fmt_real));
            if let (Some(i), Some(m)) = (&integral, &meijer) {
                row.push(if diagonal {
                    String::new()
                } else {
                    fmt_f64(rel_diff(
                        &Complex::with_val(prec.bits(), m),
                        &Complex::with_val(prec.bits(), i),
                    ))
                });
            }
            Ok(row)
        })
        .collect();
    let columns: &[&str] = match a.route {
        KernelRoute::Integral => &["x", "y", "integral"],
        KernelRoute::Meijer => &["x", "y", "meijer"],
        KernelRoute::Both => &["x", "y", "integral", "meijer", "rel_diff"],
    };
    let mut table = Table::new(columns);
    for r in rows {
        table.rows.push(r?);
    }
    let summary = (a.route == KernelRoute::Both).then(|| {
        let worst = table
            .rows
            .iter()
            .filter_map(|r| r[4].parse::<f64>().ok())
            .fold(0.0, f64::max);
        format!("max rel_diff {worst:.3e}")
    });
    Ok(Outcome {
        table,
        ok: true,
        summary,
    })
}

fn cmd_density(a: &DensityArgs, prec: Precision) -> Result<Outcome, CliError> {
    if !a.v.eq_ignore_ascii_case("laguerre") {
        return Err(CliError::Usage(
            "density has closed forms only for --v laguerre".into(),
        ));
    }
    if a.grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let q = prec.real(27) / 8u32;
    let points: Vec<Float> = (0..a.grid)
        .map(|k| Float::with_val(prec.bits(), &q * (2 * k + 1) as u32) / (2 * a.grid) as u32)
        .collect();
    let rows: Vec<Result<Vec<String>, CliError>> = points
        .par_iter()
        .map(|s| {
            let mut row = vec![fmt_real(s)];
            let e = match a.route {
                DensityRoute::Cardano => None,
                _ => Some(density_vx_explicit(s, prec).map_err(numerical("density_vx_explicit"))?),
            };
            let c = match a.route {
                DensityRoute::Explicit => None,
                _ => Some(density_vx_cardano(s, prec).map_err(numerical("density_vx_cardano"))?),
            };
            row.extend(e.iter().map(fmt_real));
            row.extend(c.iter().map(fmt_real));
            if let (Some(e), Some(c)) = (&e, &c) {
                row.push(fmt_f64(Float::with_val(prec.bits(), e - c).abs().to_f64()));
            }
            Ok(row)
        })
        .collect();
    let columns: &[&str] = match a.route {
        DensityRoute::Explicit => &["s", "explicit"],
        DensityRoute::Cardano => &["s", "cardano"],
        DensityRoute::Both => &["s", "explicit", "cardano", "abs_diff"],
    };
    let mut table = Table::new(columns);
    for r in rows {
        table.rows.push(r?);
    }
    let summary = (a.route == DensityRoute::Both).then(|| {
        let worst = table
            .rows
            .iter()
            .filter_map(|r| r[3].parse::<f64>().ok())
            .fold(0.0, f64::max);
        format!("max |explicit - cardano| {worst:.3e}")
    });
    Ok(Outcome {
        table,
        ok: true,
        summary,
    })
}

fn cmd_eqsolve(a: &EqsolveArgs, prec: Precision) -> Result<Outcome, CliError> {
    let field = parse_field(&a.v)?;
    let sol: EquilibriumSolution = match a.route {
        EqRoute::Explicit => {
            if field.name() != "x" {
                return Err(CliError::Usage(
                    "--route explicit needs --v laguerre".into(),
                ));
            }
            solution_vx_explicit(a.cells, prec).map_err(numerical("solution_vx_explicit"))?
        }
        EqRoute::Minimize => {
            let opts = MinimizeOptions {
                upper: a.upper,
                cells: a.cells,
                ..MinimizeOptions::default()
            };
            equilibrium_minimize(field.as_ref(), &opts, prec)
                .map_err(numerical("equilibrium_minimize"))?
        }
    };
    let resid = variational_residual(&sol, field.as_ref());
    let mut table = Table::new(&["left", "right", "node", "weight", "density"]);
    let densities = sol.mu.cell_densities();
    for (i, w) in sol.mu.weights.iter().enumerate() {
        table.rows.push(vec![
            fmt_real(&sol.mu.edges[i]),
            fmt_real(&sol.mu.edges[i + 1]),
            fmt_real(&sol.mu.nodes[i]),
            fmt_real(w),
            fmt_f64(densities[i]),
        ]);
    }
    let summary =
        format!(
        "q {} ell {} c0 {} c1 {} c_v {} iterations {} equality_dev {:.3e} inequality_max {:.3e}{}",
        sol.q.to_f64(),
        sol.ell.to_f64(),
        sol.c0.to_f64(),
        sol.c1.to_f64(),
        sol.c_v.to_f64(),
        sol.iterations,
        resid.equality_dev,
        resid.inequality_max,
        sol.warnings.iter().map(|w| format!("; warning: {w}")).collect::<String>()
    );
    Ok(Outcome {
        table,
        ok: true,
        summary: Some(summary),
    })
}

fn cmd_converge(a: &ConvergeArgs, prec: Precision) -> Result<Outcome, CliError> {
    let alpha = parse_alpha(&a.alpha, prec)?;
    let x = parse_real(&a.x, "--x", prec)?;
    let y = parse_real(&a.y, "--y", prec)?;
    if !(x > 0) || !(y > 0) || x == y {
        return Err(CliError::Usage(
            "--x and --y must be positive and distinct".into(),
        ));
    }
    let ns: Vec<usize> = parse_list(&a.ns, "--ns")?;
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(
            "--ns must be positive and strictly ascending".into(),
        ));
    }
    let rows = hard_edge_convergence(&alpha, &x, &y, &ns, prec)
        .map_err(numerical("hard_edge_convergence"))?;
    let mut table = Table::new(&["n", "scaled_kernel", "limit_kernel", "rel_err"]);
    for r in &rows {
        table.rows.push(vec![
            r.n.to_string(),
            fmt_real(&r.scaled_kernel),
            fmt_real(&r.limit_kernel),
            fmt_f64(r.rel_err),
        ]);
    }
    let monotone = rows.windows(2).all(|w| w[1].rel_err < w[0].rel_err);
    let summary = format!("rel_err strictly decreasing: {monotone}");
    Ok(Outcome {
        table,
        ok: true,
        summary: Some(summary),
    })
}

fn cmd_meijer(a: &MeijerArgs, prec: Precision) -> Result<Outcome, CliError> {
    let b: Vec<String> = a.b.split(',').map(|s| s.trim().to_string()).collect();
    if b.len() != 3 {
        return Err(CliError::Usage(
            "--b needs three comma-separated values".into(),
        ));
    }
    let bs = [
        parse_real(&b[0], "--b", prec)?,
        parse_real(&b[1], "--b", prec)?,
        parse_real(&b[2], "--b", prec)?,
    ];
    let params = GParams303::new(a.m, bs).map_err(|e| CliError::Usage(e.to_string()))?;
    let moduli = parse_grid(&a.modulus, "--modulus", prec)?;
    if moduli.iter().any(|r| !(*r > 0)) {
        return Err(CliError::Usage("--modulus must be positive".into()));
    }
    let arg = parse_real(&a.arg, "--arg", prec)? + prec.pi() * 2i32 * a.sheet;
    let rows: Vec<Result<Vec<String>, CliError>> = moduli
        .par_iter()
        .map(|r| {
            let z = SectorPoint::new(r.clone(), arg.clone())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let series = match a.route {
                MeijerRoute::Loop => None,
                _ => Some(g303_series(&params, &z, prec).map_err(numerical("g303_series"))?),
            };
            let looped = match a.route {
                MeijerRoute::Series => None,
                _ => Some(mb_loop(&params, &z, prec).map_err(numerical("mb_loop"))?),
            };
            let mut row = vec![fmt_real(r), fmt_real(&arg)];
            for v in series.iter().chain(&looped) {
                row.push(fmt_real(v.real()));
                row.push(fmt_real(v.imag()));
            }
            if let (Some(s), Some(l)) = (&series, &looped) {
                row.push(fmt_f64(rel_diff(s, l)));
            }
            Ok(row)
        })
        .collect();
    let columns: &[&str] = match a.route {
        MeijerRoute::Series => &["modulus", "argument", "series_re", "series_im"],
        MeijerRoute::Loop => &["modulus", "argument", "loop_re", "loop_im"],
        MeijerRoute::Both => &[
            "modulus",
            "argument",
            "series_re",
            "series_im",
            "loop_re",
            "loop_im",
            "rel_diff",
        ],
    };
    let mut table = Table::new(columns);
    for r in rows {
        table.rows.push(r?);
    }
    Ok(Outcome {
        table,
        ok: true,
        summary: None,
    })
}

fn cmd_rhcheck(a: &RhcheckArgs, prec: Precision) -> Result<Outcome, CliError> {
    let alpha = parse_alpha(&a.alpha, prec)?;
    let checks = invariant_suite(&alpha, prec).map_err(numerical("invariant_suite"))?;
    let mut table = Table::new(&["check", "residual", "tolerance", "status"]);
    let mut ok = true;
    for c in &checks {
        ok &= c.passed();
        table.rows.push(vec![
            c.name.clone(),
            fmt_f64(c.residual),
            fmt_f64(c.tolerance),
            if c.passed() { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    Ok(Outcome {
        table,
        ok,
        summary: Some(format!("{} checks, {failed} failed", checks.len())),
    })
}

/// Runs a parsed command and returns its rendered output.
pub fn execute(cli: &Cli) -> Result<(String, Outcome), CliError> {
    let prec = resolve_precision(&cli.run)?;
    let outcome = match &cli.command {
        Command::Kernel(a) => cmd_kernel(a, prec),
        Command::Density(a) => cmd_density(a, prec),
        Command::Eqsolve(a) => cmd_eqsolve(a, prec),
        Command::Converge(a) => cmd_converge(a, prec),
        Command::Meijer(a) => cmd_meijer(a, prec),
        Command::Rhcheck(a) => cmd_rhcheck(a, prec),
    }?;
    let text = match cli.run.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => {
            let meta = serde_json::json!({
                "flags": serde_json::to_value(cli).expect("flags serialize"),
                "precision": prec.digits(),
                "version": env!("CARGO_PKG_VERSION"),
                "summary": outcome.summary,
            });
            outcome.table.to_json(meta)
        }
    };
    Ok((text, outcome))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, outcome)) => {
            let written = match &cli.run.output {
                Some(path) => std::fs::write(path, &text),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("cannot write output: {e}");
                return EXIT_USAGE;
            }
            if let Some(s) = &outcome.summary {
                eprintln!("{s}");
            }
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hardedge").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn grid_syntax() {
        let p = Precision::new(30).unwrap();
        let g = parse_grid("0.2:3:5", "g", p).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[4], p.parse("3").unwrap());
        assert!((g[1].to_f64() - 0.9).abs() < 1e-25);
        assert_eq!(parse_grid("1", "g", p).unwrap().len(), 1);
        assert!(parse_grid("1:2", "g", p).is_err());
        assert!(parse_grid("1:2:x", "g", p).is_err());
    }

    #[test]
    fn invalid_alpha_is_a_usage_error() {
        let cli = parse(&[
            "kernel", "--alpha", "-1.5", "--x-grid", "1", "--y-grid", "2",
        ]);
        let err = execute(&cli).err().unwrap();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.to_string().contains("α > -1"));
    }

    #[test]
    fn unknown_flags_exit_with_usage_code() {
        assert_eq!(run(["hardedge", "kernel", "--bogus"]), EXIT_USAGE);
        assert_eq!(
            run(["hardedge", "--precision", "10", "rhcheck", "--alpha", "0"]),
            EXIT_USAGE
        );
    }

    #[test]
    fn diagonal_kernel_value() {
        let cli = parse(&[
            "--precision",
            "30",
            "kernel",
            "--alpha",
            "0",
            "--x-grid",
            "1",
            "--y-grid",
            "1",
            "--route",
            "integral",
        ]);
        let (text, _) = execute(&cli).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "x,y,integral");
    }

    #[test]
    fn density_routes_agree() {
        let cli = parse(&["--precision", "30", "density", "--grid", "40"]);
        let (text, _) = execute(&cli).unwrap();
        let worst = text
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
            .fold(0.0, f64::max);
        assert!(worst < 1e-12);
    }

    #[test]
    fn json_is_self_describing_and_deterministic() {
        let args = [
            "--precision",
            "30",
            "--format",
            "json",
            "density",
            "--grid",
            "3",
        ];
        let (a, _) = execute(&parse(&args)).unwrap();
        let (b, _) = execute(&parse(&args)).unwrap();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["meta"]["precision"], 30);
        assert_eq!(v["rows"].as_array().unwrap().len(), 3);
        assert!(v["meta"]["flags"]["command"]["density"]["grid"] == 3);
    }

    #[test]
    fn rhcheck_reports_every_identity() {
        let cli = parse(&["--precision", "40", "rhcheck", "--alpha", "0.3"]);
        let (text, outcome) = execute(&cli).unwrap();
        assert!(outcome.ok, "{text}");
        assert!(text.contains("det arg=") && text.contains("phi jump") && text.contains("inverse"));
    }
}
