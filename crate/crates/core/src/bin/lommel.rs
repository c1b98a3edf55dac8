//! Command line front end: function values, integrals, bounds, grid
//! verification and table reproduction.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lommel::bounds::{evaluate_bound, BoundKind, BoundOptions};
use lommel::integral::{
    integral, integral_closed_form_beta1, integral_gamma_series, integral_quadrature, IntegralSpec,
    QUADRATURE_TOLERANCE, SERIES_MAX_TERMS,
};
use lommel::lommel::{lommel_t, lommel_t_tilde, struve_l, LommelParams};
use lommel::verify::{
    asymptotic_suite, compare_table, run_grid_verification, table_csv, GridConfig, TableSpec,
};

/// Default output directory for `--out` relative paths and for reports.
const OUT_DIR_ENV: &str = "LOMMEL_OUT_DIR";

#[derive(Parser)]
#[command(name = "lommel", version, about = "Modified Lommel functions, weighted integrals and their bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    /// normalised t̃_{μ,ν}
    Tilde,
    /// unnormalised t_{μ,ν}
    T,
    /// modified Struve L_ν (uses --nu only)
    Struve,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Auto,
    Quadrature,
    Series,
    ClosedForm,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; relative paths resolve against $LOMMEL_OUT_DIR when set.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate t̃_{μ,ν}(x), t_{μ,ν}(x) or L_ν(x).
    Eval {
        #[arg(long, value_enum, default_value = "tilde")]
        function: Function,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        x: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the weighted integral by one route.
    Integral {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
        /// Relative tolerance for the quadrature route.
        #[arg(long, default_value_t = QUADRATURE_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate one bound next to the reference integral.
    Bound {
        /// Bound tag, e.g. LB_SERIES.
        #[arg(long)]
        kind: String,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        xstar: Option<f64>,
        /// Truncation index of the series lower bound.
        #[arg(long = "K")]
        k: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Check every bound over a parameter grid; exits 1 on any violation.
    Verify {
        /// Relative margin tolerance.
        #[arg(long, default_value_t = lommel::verify::DEFAULT_MARGIN_TOLERANCE)]
        tol: f64,
        /// Restrict to these bound tags (repeatable).
        #[arg(long)]
        kind: Vec<String>,
        /// Use quadrature for every reference integral.
        #[arg(long)]
        quadrature_reference: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce table 1 (1 − L/F) or 2 (U/F − 1); exits 1 on golden mismatches.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Small- and large-x limit checks; exits 1 on failures.
    Asymptotics {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Serialize)]
struct ValueRecord {
    function: &'static str,
    mu: f64,
    nu: f64,
    x: f64,
    value: f64,
    abs_error_estimate: f64,
    terms: usize,
}

#[derive(Serialize)]
struct IntegralRecord {
    mu: f64,
    nu: f64,
    beta: f64,
    x: f64,
    route: &'static str,
    value: f64,
    abs_error_estimate: f64,
    terms_or_evals: usize,
}

#[derive(Serialize)]
struct BoundRecord {
    kind: BoundKind,
    side: &'static str,
    in_domain: bool,
    xstar: Option<f64>,
    mu: f64,
    nu: f64,
    beta: f64,
    x: f64,
    value: f64,
    normalized: f64,
}

fn resolve(out: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if out.is_relative() => Path::new(&dir).join(out),
        _ => out.to_path_buf(),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => {
            let path = resolve(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| format!("{}: {e}", parent.display()))?;
            }
            fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Default file for report-style commands when only the env var is set.
fn default_out(out: Option<PathBuf>, name: &str) -> Option<PathBuf> {
    out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(|_| PathBuf::from(name)))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn render<T: Serialize>(record: &T, header: &[&str], row: Vec<String>, format: Format) -> String {
    match format {
        Format::Json => json(record),
        Format::Csv => {
            let head: Vec<String> = header.iter().map(|h| h.to_string()).collect();
            csv_line(&head) + &csv_line(&row)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Eval { function, mu, nu, x, output } => {
            let (name, mu, r) = match function {
                Function::Tilde => ("tilde", mu, lommel_t_tilde(LommelParams::new(mu, nu), x)),
                Function::T => ("t", mu, lommel_t(LommelParams::new(mu, nu), x)),
                Function::Struve => ("struve", nu, struve_l(nu, x)),
            };
            let r = r.map_err(|e| e.to_string())?;
            let rec = ValueRecord {
                function: name,
                mu,
                nu,
                x,
                value: r.value,
                abs_error_estimate: r.abs_error_estimate,
                terms: r.terms_or_evals,
            };
            let row = vec![
                name.to_string(),
                mu.to_string(),
                nu.to_string(),
                x.to_string(),
                format!("{:e}", r.value),
                format!("{:e}", r.abs_error_estimate),
                r.terms_or_evals.to_string(),
            ];
            let text = render(&rec, &["function", "mu", "nu", "x", "value", "abs_error_estimate", "terms"], row, output.format);
            emit(&text, output.out.as_deref())?;
            Ok(true)
        }
        Command::Integral { mu, nu, beta, x, route, tol, output } => {
            let spec = IntegralSpec::new(mu, nu, beta, x).map_err(|e| e.to_string())?;
            let (name, r) = match route {
                RouteArg::Auto => ("auto", integral(&spec)),
                RouteArg::Quadrature => ("quadrature", integral_quadrature(&spec, tol)),
                RouteArg::Series => (
                    "gamma-series",
                    integral_gamma_series(&spec, SERIES_MAX_TERMS).map(|(r, _)| r),
                ),
                RouteArg::ClosedForm => {
                    if beta != 1.0 {
                        return Err("the closed form needs --beta 1".into());
                    }
                    let v = integral_closed_form_beta1(mu, nu, x).map_err(|e| e.to_string())?;
                    ("closed-form", Ok(lommel::EvalResult { value: v, abs_error_estimate: f64::NAN, terms_or_evals: 0 }))
                }
            };
            let r = r.map_err(|e| e.to_string())?;
            let rec = IntegralRecord {
                mu,
                nu,
                beta,
                x,
                route: name,
                value: r.value,
                abs_error_estimate: r.abs_error_estimate,
                terms_or_evals: r.terms_or_evals,
            };
            let row = vec![
                mu.to_string(),
                nu.to_string(),
                beta.to_string(),
                x.to_string(),
                name.to_string(),
                format!("{:e}", r.value),
                format!("{:e}", r.abs_error_estimate),
                r.terms_or_evals.to_string(),
            ];
            let header = ["mu", "nu", "beta", "x", "route", "value", "abs_error_estimate", "terms_or_evals"];
            emit(&render(&rec, &header, row, output.format), output.out.as_deref())?;
            Ok(true)
        }
        Command::Bound { kind, mu, nu, beta, x, xstar, k, output } => {
            let kind = BoundKind::from_tag(&kind).ok_or_else(|| format!("unknown bound kind {kind:?}"))?;
            let spec = IntegralSpec::new(mu, nu, beta, x).map_err(|e| e.to_string())?;
            let opts = BoundOptions { xstar, truncation_k: k };
            let b = evaluate_bound(kind, &spec, &opts).map_err(|e| e.to_string())?;
            let rec = BoundRecord {
                kind,
                side: match b.side {
                    lommel::bounds::Side::Upper => "upper",
                    lommel::bounds::Side::Lower => "lower",
                },
                in_domain: b.in_domain,
                xstar: b.xstar,
                mu,
                nu,
                beta,
                x,
                value: b.value,
                normalized: b.normalized,
            };
            let row = vec![
                kind.tag().to_string(),
                rec.side.to_string(),
                b.in_domain.to_string(),
                b.xstar.map_or(String::new(), |s| s.to_string()),
                mu.to_string(),
                nu.to_string(),
                beta.to_string(),
                x.to_string(),
                format!("{:e}", b.value),
                format!("{:e}", b.normalized),
            ];
            let header = ["kind", "side", "in_domain", "xstar", "mu", "nu", "beta", "x", "value", "normalized"];
            emit(&render(&rec, &header, row, output.format), output.out.as_deref())?;
            Ok(true)
        }
        Command::Verify { tol, kind, quadrature_reference, output } => {
            let kinds = kind
                .iter()
                .map(|t| BoundKind::from_tag(t).ok_or_else(|| format!("unknown bound kind {t:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = GridConfig {
                tolerance: tol,
                kinds,
                quadrature_reference,
                ..GridConfig::default()
            };
            let report = run_grid_verification(&cfg).map_err(|e| e.to_string())?;
            let s = &report.summary;
            eprintln!(
                "verify: {} cases, {} violations, {} errors, max negative margin {:e}",
                s.cases, s.violations, s.errors, s.max_negative_margin
            );
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => {
                    let mut t = csv_line(&["kind", "mu", "nu", "beta", "x", "bound", "reference", "margin", "violation"].map(String::from));
                    for r in &report.records {
                        t += &csv_line(&[
                            r.kind.tag().to_string(),
                            r.spec.mu.to_string(),
                            r.spec.nu.to_string(),
                            r.spec.beta.to_string(),
                            r.spec.x.to_string(),
                            format!("{:e}", r.bound),
                            format!("{:e}", r.reference),
                            format!("{:e}", r.margin),
                            r.violation.to_string(),
                        ]);
                    }
                    t
                }
            };
            let ext = if output.format == Format::Json { "json" } else { "csv" };
            emit(&text, default_out(output.out, &format!("verify_report.{ext}")).as_deref())?;
            Ok(report.passed())
        }
        Command::Table { id, format, out } => {
            let table = TableSpec::from_id(id).expect("range-checked by clap");
            let cmp = compare_table(table).map_err(|e| e.to_string())?;
            for c in cmp.cells.iter().filter(|c| !c.pass) {
                eprintln!(
                    "table {id}: (μ={}, ν={}, β={}) x={}: computed {:.4}, printed {:.4}",
                    c.spec.mu, c.spec.nu, c.spec.beta, c.spec.x, c.rounded, c.printed
                );
            }
            eprintln!("table {id}: {} of {} cells outside tolerance", cmp.mismatches, cmp.cells.len());
            let text = match format {
                Format::Csv => {
                    let values: Vec<Vec<f64>> = cmp
                        .cells
                        .chunks(lommel::verify::TABLE_X.len())
                        .map(|row| row.iter().map(|c| c.computed).collect())
                        .collect();
                    table_csv(&values)
                }
                Format::Json => json(&cmp),
            };
            let ext = if format == Format::Json { "json" } else { "csv" };
            emit(&text, default_out(out, &format!("table{id}.{ext}")).as_deref())?;
            Ok(cmp.mismatches == 0)
        }
        Command::Asymptotics { output } => {
            let report = asymptotic_suite();
            for c in &report.checks {
                eprintln!(
                    "{} {}: (μ={}, ν={}, β={}, x={}) computed {:.6e}, target {:.6e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.spec.mu,
                    c.spec.nu,
                    c.spec.beta,
                    c.spec.x,
                    c.computed,
                    c.target
                );
            }
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => {
                    let mut t = csv_line(&["check", "mu", "nu", "beta", "x", "computed", "target", "rel_tolerance", "pass"].map(String::from));
                    for c in &report.checks {
                        t += &csv_line(&[
                            c.name.clone(),
                            c.spec.mu.to_string(),
                            c.spec.nu.to_string(),
                            c.spec.beta.to_string(),
                            c.spec.x.to_string(),
                            format!("{:e}", c.computed),
                            format!("{:e}", c.target),
                            c.rel_tolerance.to_string(),
                            c.pass.to_string(),
                        ]);
                    }
                    t
                }
            };
            emit(&text, output.out.as_deref())?;
            Ok(report.failures == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli);
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
