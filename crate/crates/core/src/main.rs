use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flagherm::curvature::curvature_report;
use flagherm::exact::{parse_rational, render_exact, Q};
use flagherm::flagspace::{builtin_space, FlagSpace};
use flagherm::hermitian::{make_acs, make_metric, make_symbolic_metric, AlmostComplexStructure, SymbolicMetric};
use flagherm::parse::{parse_assignments, parse_poly_list, parse_signs};
use flagherm::render::{self, Render, CSV_HEADER};
use flagherm::reproduce::{self, TARGETS};
use flagherm::solver::solve_klsc;
use flagherm::Error;

#[derive(Parser)]
#[command(name = "flagherm", version, about = "Invariant almost Hermitian geometry on generalized flag manifolds")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Significant digits for irrational and decimal renderings.
    #[arg(long, default_value_t = render::DEFAULT_PRECISION, global = true)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in spaces.
    Spaces,
    /// Norms, curvatures and class of one structure.
    Report {
        space: String,
        /// Per-summand values: rationals, or polynomials for a symbolic family.
        #[arg(long)]
        metric: String,
        #[arg(long, allow_hyphen_values = true)]
        acs: String,
        /// Evaluate s₂ at this t as well.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Solve 2s₁ − s = 0 along a metric family.
    Solve {
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        acs: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        var: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Tabulate curvatures along a family.
    Sweep {
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        acs: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        var: String,
        /// `a:b` with 0 < a < b.
        #[arg(long)]
        range: String,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Values of the other family parameters, `y=1,z=2`.
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Recompute the published results.
    Reproduce {
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

enum Failure {
    Usage(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_space(name: &str) -> Result<Arc<FlagSpace>, Failure> {
    Ok(Arc::new(builtin_space(name)?))
}

fn load_acs(fs: &Arc<FlagSpace>, text: &str) -> Result<AlmostComplexStructure, Failure> {
    Ok(make_acs(fs.clone(), &parse_signs(text)?)?)
}

fn load_family(fs: &Arc<FlagSpace>, text: &str) -> Result<SymbolicMetric, Failure> {
    Ok(make_symbolic_metric(fs.clone(), parse_poly_list(text)?)?)
}

fn emit(out: &mut impl Write, text: &str) {
    // a closed pipe is not an error worth reporting
    let _ = out.write_all(text.as_bytes());
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn csv_text(rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn run(cli: Cli) -> Result<(), Failure> {
    let sig = cli.precision.max(1);
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Spaces => match cli.format {
            Format::Json => emit(&mut out, &pretty(&render::spaces_json())),
            Format::Text => emit(&mut out, &render::spaces_text()),
            Format::Csv => return Err(Failure::Usage("spaces has no CSV form".into())),
        },
        Command::Report { space, metric, acs, t } => {
            let fs = load_space(&space)?;
            let j = load_acs(&fs, &acs)?;
            let t = t.map(|t| parse_rational(&t)).transpose()?;
            let entries = parse_poly_list(&metric)?;
            if entries.iter().all(|e| e.is_constant()) {
                let values: Vec<Q> = entries.iter().map(|e| e.constant_value().unwrap_or_default()).collect();
                let g = make_metric(fs, values)?;
                let r = curvature_report(&g, &j)?;
                match cli.format {
                    Format::Text => emit(&mut out, &render::report_text(&g, &j, &r, t.as_ref(), sig)),
                    Format::Json => emit(&mut out, &pretty(&render::report_json(&g, &j, &r, t.as_ref(), sig))),
                    Format::Csv => emit(&mut out, &csv_text(&[render::csv_row("", &r, sig)])),
                }
            } else {
                let g = make_symbolic_metric(fs, entries)?;
                let r = curvature_report(&g, &j)?;
                match cli.format {
                    Format::Text => emit(&mut out, &render::report_text(&g, &j, &r, t.as_ref(), sig)),
                    Format::Json => emit(&mut out, &pretty(&render::report_json(&g, &j, &r, t.as_ref(), sig))),
                    Format::Csv => return Err(Failure::Usage("CSV needs a numeric metric".into())),
                }
            }
        }
        Command::Solve { space, acs, family, var, tol } => {
            let fs = load_space(&space)?;
            let j = load_acs(&fs, &acs)?;
            let g = load_family(&fs, &family)?;
            let sol = solve_klsc(&g, &j, &var, tol)?;
            match cli.format {
                Format::Text => emit(&mut out, &render::solution_text(&sol, sig)),
                Format::Json => {
                    let r = curvature_report(&g, &j)?;
                    let mut v = render::report_json(&g, &j, &r, None, sig);
                    v["solutions"] = render::solution_json(&sol, sig);
                    emit(&mut out, &pretty(&v));
                }
                Format::Csv => return Err(Failure::Usage("solve has no CSV form".into())),
            }
        }
        Command::Sweep { space, acs, family, var, range, steps, set } => {
            let fs = load_space(&space)?;
            let j = load_acs(&fs, &acs)?;
            let g = load_family(&fs, &family)?;
            let (a, b) = range
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("range must be a:b, got {range:?}")))?;
            let (a, b) = (parse_rational(a.trim())?, parse_rational(b.trim())?);
            if a >= b || steps < 2 {
                return Err(Failure::Usage("empty range: need a < b and at least 2 steps".into()));
            }
            let mut point: BTreeMap<String, Q> = parse_assignments(&set)?.into_iter().collect();
            let mut rows = Vec::with_capacity(steps);
            let mut json_rows = Vec::with_capacity(steps);
            for i in 0..steps {
                let x = &a + (&b - &a) * Q::from_integer(i.into()) / Q::from_integer((steps - 1).into());
                point.insert(var.clone(), x.clone());
                let r = curvature_report(&g.at(&point)?, &j)?;
                rows.push(render::csv_row(&render_exact(&x), &r, sig));
                json_rows.push(json!({
                    "var": x.to_json(sig),
                    "s": r.s.to_json(sig),
                    "s1": r.s1.to_json(sig),
                    "s2_at_0": r.s2.c.to_json(sig),
                    "sJ": r.s_j.to_json(sig),
                    "defect": r.defect.to_json(sig),
                    "gh_class": r.gh_class.code(),
                }));
            }
            match cli.format {
                Format::Csv => emit(&mut out, &csv_text(&rows)),
                Format::Json => emit(&mut out, &pretty(&json!({
                    "space": space,
                    "acs": acs,
                    "family": family,
                    "var": var,
                    "rows": json_rows,
                }))),
                Format::Text => {
                    let mut t = format!("{:<14}{:<20}{:<20}{:<20}{:<20}{:<20}{}\n", "var", "s", "s1", "s2_at_0", "sJ", "defect", "gh_class");
                    for r in &rows {
                        t.push_str(&format!("{:<14}{:<20}{:<20}{:<20}{:<20}{:<20}{}\n", r[0], r[1], r[2], r[3], r[4], r[5], r[6]));
                    }
                    emit(&mut out, &t);
                }
            }
        }
        Command::Reproduce { target, all } => {
            let targets: Vec<String> = match (target, all) {
                (Some(t), false) => vec![t],
                (None, true) => TARGETS.iter().map(|s| s.to_string()).collect(),
                _ => return Err(Failure::Usage("give exactly one of --target or --all".into())),
            };
            let mut reports = Vec::new();
            for t in &targets {
                reports.push(reproduce::run(t)?);
            }
            match cli.format {
                Format::Json => {
                    let v = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
                    emit(&mut out, &pretty(&v));
                }
                Format::Text => {
                    for r in &reports {
                        emit(&mut out, &r.text());
                    }
                }
                Format::Csv => return Err(Failure::Usage("reproduce has no CSV form".into())),
            }
            if reports.iter().any(|r| !r.overall) {
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch) => ExitCode::from(3),
    }
}
