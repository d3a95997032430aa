use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use explicit_pnt::bounds::{parse_log_x, AsymptoticBound, ExactAnchor, Kind, Partition, StepBoundTable, StepRow, DEFAULT_R};
use explicit_pnt::conversions::{
    dominates, mu_asymp, mu_num, nu_asymp, psi_to_theta_asymp, psi_to_theta_num, theta_to_pi_asymp, AnchorDiscrepancy, PrimePowerConstants,
};
use explicit_pnt::numerics::{Dir, Enclosure, Rounding, XReal, DEFAULT_PRECISION};
use explicit_pnt::oracle::{buthe_envelope, crossing_anchor, crossing_point, envelope_decreasing, verify_pointwise, PrimeStore};
use explicit_pnt::tables_io::{
    emit_report, load_table_column, regenerate_pi_table, regenerated_table_file, targets_from_table, AnchorFile, RegenOptions, RegenTarget, Report,
    ReportRow, TableFile,
};
use rug::Float;

/// Certified conversions between explicit error bounds for ψ, θ and π.
///
/// Every abscissa is given as `log x`, either a decimal or `ln(X)`.
#[derive(Parser, Debug)]
#[command(name = "epnt", version)]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "EPNT_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Anchors file; the shipped anchors are used when absent.
    #[arg(long, global = true, env = "EPNT_ANCHORS")]
    anchors: Option<PathBuf>,
    /// Significant digits to print.
    #[arg(long, global = true, default_value_t = 6)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert an asymptotic bound between ψ, θ and π.
    ConvertAsymp {
        #[arg(value_enum)]
        route: Route,
        #[command(flatten)]
        curve: Curve,
        /// Anchor name for routes ending in π.
        #[arg(long, default_value = "crossing")]
        anchor: String,
        /// Where the π bound should start; the anchor's `log x₀` by default.
        #[arg(long)]
        log_x1: Option<String>,
    },
    /// ε_θ,num(x₀) from ε_ψ,num(x₀).
    ConvertNum {
        #[arg(long)]
        eps_psi: String,
        #[arg(long)]
        log_x0: String,
    },
    /// μ_asymp or μ_num.
    Mu {
        #[command(subcommand)]
        which: MuCommand,
    },
    /// Check that a step table lies below an asymptotic curve.
    VerifyDominates {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        column: Option<String>,
        #[command(flatten)]
        curve: Curve,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Extra leading row `log_x,eps`, for example `ln(2),0.4298`.
        #[arg(long)]
        prefix_row: Option<String>,
    },
    /// |π(x) − Li(x)| ≤ 0.4298 x/log x: pointwise up to the sieve limit,
    /// then through the decreasing envelope.
    VerifyWeak {
        #[arg(long, default_value_t = 100_000_000)]
        limit: u64,
        #[arg(long, default_value = "0.4298")]
        constant: String,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Regenerate numerical π rows from a θ table and an anchor.
    Regenerate {
        #[arg(long)]
        theta_table: PathBuf,
        /// Printed π table to compare against.
        #[arg(long)]
        printed: Option<PathBuf>,
        /// Comma-separated `log x` rows; all printed rows by default.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<String>,
        #[arg(long, default_value = "1e15")]
        anchor: String,
        #[arg(long, default_value_t = 64)]
        refinement: u32,
        /// Use only the θ step table, without the asymptotic θ curve in between rows.
        #[arg(long)]
        no_theta_curve: bool,
        /// Write the regenerated rows as a table file.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write a JSON summary.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// The point in (37, 41) where the anchor discrepancy vanishes.
    CrossingPoint,
    /// Evaluate a bound.
    Eval {
        #[command(subcommand)]
        which: EvalCommand,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Route {
    PsiToTheta,
    ThetaToPi,
    PsiToPi,
}

#[derive(Subcommand, Debug)]
enum MuCommand {
    Asymp {
        #[command(flatten)]
        curve: Curve,
        #[arg(long, default_value = "crossing")]
        anchor: String,
        #[arg(long)]
        log_x1: String,
    },
    Num {
        #[arg(long, default_value = "1e15")]
        anchor: String,
        #[arg(long)]
        theta_table: PathBuf,
        #[arg(long)]
        log_x1: String,
        /// `inf` for x₂ = ∞.
        #[arg(long, default_value = "inf")]
        log_x2: String,
        #[arg(long, default_value_t = 1)]
        refinement: u32,
    },
}

#[derive(Subcommand, Debug)]
enum EvalCommand {
    Asymp {
        #[command(flatten)]
        curve: Curve,
        #[arg(long)]
        log_x: String,
    },
    Step {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        column: Option<String>,
        #[arg(long)]
        log_x: String,
    },
}

/// `A (log x/R)^B exp(−C √(log x/R))`.
#[derive(Args, Debug, Clone)]
struct Curve {
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long = "C")]
    c: String,
    #[arg(long = "R", default_value = DEFAULT_R)]
    r: String,
    /// Where the bound starts to hold.
    #[arg(long, default_value = "ln(2)")]
    log_x0: String,
}

impl Curve {
    fn bound(&self, kind: Kind, prec: u32) -> explicit_pnt::Result<AsymptoticBound> {
        AsymptoticBound::parse(kind, &self.a, &self.b, &self.c, &self.r, &self.log_x0, prec)
    }
}

fn show(x: &XReal, sig: usize) -> String {
    let dir = match x.rounding() {
        Rounding::Up => " (rounded up)",
        Rounding::Down => " (rounded down)",
        Rounding::Exact => "",
    };
    let v = x.to_f64().abs();
    let text = if (1e-3..1e6).contains(&v) {
        let int_digits = v.log10().floor() as i64 + 1;
        x.to_fixed((sig as i64 - int_digits).max(0) as usize)
    } else {
        x.to_sci(sig)
    };
    format!("{text}{dir}")
}

fn short(e: &Enclosure) -> String {
    format!("{}", e.mid().to_f64())
}

struct Ctx {
    prec: u32,
    digits: usize,
    anchors: AnchorFile,
}

impl Ctx {
    fn anchor(&self, name: &str) -> explicit_pnt::Result<ExactAnchor> {
        self.anchors.get(name)?.to_anchor(self.prec)
    }

    fn up(&self, e: &Enclosure) -> String {
        show(&e.upper(), self.digits)
    }

    fn down(&self, e: &Enclosure) -> String {
        show(&e.lower(), self.digits)
    }
}

fn table_column(path: &PathBuf, column: Option<&str>, prec: u32) -> explicit_pnt::Result<StepBoundTable> {
    match column {
        Some(c) => load_table_column(path, c, prec),
        None => TableFile::read(path)?.step_table(0, prec),
    }
}

fn run(cli: Cli) -> explicit_pnt::Result<bool> {
    let anchors = match &cli.anchors {
        Some(p) => AnchorFile::read(p)?,
        None => AnchorFile::builtin(),
    };
    let ctx = Ctx { prec: cli.precision, digits: cli.digits, anchors };
    let prec = ctx.prec;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::ConvertAsymp { route, curve, anchor, log_x1 } => {
            let theta = match route {
                Route::PsiToTheta | Route::PsiToPi => {
                    let psi = curve.bound(Kind::Psi, prec)?;
                    let consts = PrimePowerConstants::calibrated(prec);
                    let nu = nu_asymp(&psi, &consts, psi.log_x0(), prec)?;
                    let theta = psi_to_theta_asymp(&psi, &consts, prec)?;
                    writeln!(out, "nu_asymp = {}", ctx.up(&nu))?;
                    writeln!(out, "A_theta = {}", ctx.up(theta.a()))?;
                    theta
                }
                Route::ThetaToPi => curve.bound(Kind::Theta, prec)?,
            };
            if let Route::ThetaToPi | Route::PsiToPi = route {
                let anchor = ctx.anchor(&anchor)?;
                let l1 = match &log_x1 {
                    Some(s) => parse_log_x(s, prec)?,
                    None => anchor.log_x0.clone(),
                };
                let disc = AnchorDiscrepancy::from_anchor(&anchor, prec)?;
                let mu = mu_asymp(&theta, &disc, &l1, prec)?;
                let pi = theta_to_pi_asymp(&theta, &disc, &l1, prec)?;
                writeln!(out, "mu_asymp = {}", ctx.up(&mu.total))?;
                writeln!(out, "A_pi = {}", ctx.up(pi.a()))?;
                writeln!(out, "valid for log x >= {}", ctx.down(&l1))?;
            }
            Ok(true)
        }
        Command::ConvertNum { eps_psi, log_x0 } => {
            let eps = Enclosure::from_decimal(&eps_psi, prec)?;
            let v = psi_to_theta_num(&eps, &parse_log_x(&log_x0, prec)?, prec)?;
            writeln!(out, "eps_theta = {}", show(&v, ctx.digits))?;
            Ok(true)
        }
        Command::Mu { which: MuCommand::Asymp { curve, anchor, log_x1 } } => {
            let theta = curve.bound(Kind::Theta, prec)?;
            let disc = AnchorDiscrepancy::from_anchor(&ctx.anchor(&anchor)?, prec)?;
            let mu = mu_asymp(&theta, &disc, &parse_log_x(&log_x1, prec)?, prec)?;
            writeln!(out, "discrepancy term = {}", ctx.up(&mu.discrepancy_term))?;
            writeln!(out, "dawson term = {}", ctx.up(&mu.dawson_term))?;
            writeln!(out, "mu_asymp = {}", ctx.up(&mu.total))?;
            Ok(true)
        }
        Command::Mu { which: MuCommand::Num { anchor, theta_table, log_x1, log_x2, refinement } } => {
            let anchor = ctx.anchor(&anchor)?;
            let table = TableFile::read(&theta_table)?.step_table(0, prec)?;
            let l1 = parse_log_x(&log_x1, prec)?;
            let l2 = match log_x2.trim() {
                "inf" | "infinity" | "∞" => None,
                s => Some(parse_log_x(s, prec)?),
            };
            let rows: Vec<Enclosure> = table.rows().iter().map(|r| r.log_x.clone()).collect();
            let part = Partition::from_grid(&anchor.log_x0, &l1, &rows, refinement)?;
            let disc = AnchorDiscrepancy::from_anchor(&anchor, prec)?;
            let mu = mu_num(&disc, &table, &part, &l1, l2.as_ref(), prec)?;
            writeln!(out, "discrepancy term = {}", ctx.up(&mu.discrepancy_term))?;
            writeln!(out, "sum term = {}", ctx.up(&mu.sum_term))?;
            writeln!(out, "tail term = {} ({:?})", ctx.up(&mu.tail_term), mu.branch)?;
            writeln!(out, "mu_num = {}", ctx.up(&mu.total))?;
            Ok(true)
        }
        Command::VerifyDominates { table, column, curve, from, to, prefix_row } => {
            let mut t = table_column(&table, column.as_deref(), prec)?;
            if let Some(row) = prefix_row {
                let (l, e) = row
                    .split_once(',')
                    .ok_or_else(|| explicit_pnt::Error::Invalid(format!("--prefix-row needs `log_x,eps`, got `{row}`")))?;
                let eps = Float::with_val_round(prec, Float::parse(e.trim()).map_err(|e| explicit_pnt::Error::Invalid(e.to_string()))?, rug::float::Round::Up).0;
                let mut rows = vec![StepRow::new(parse_log_x(l.trim(), prec)?, eps, "prefix row")];
                rows.extend(t.rows().iter().cloned());
                t = StepBoundTable::new(t.kind(), rows)?;
            }
            let c = curve.bound(t.kind(), prec)?;
            let rep = dominates(&t, &c, &parse_log_x(&from, prec)?, &parse_log_x(&to, prec)?, prec)?;
            let mut report = Report::new("step table against curve", &["row log_x", "span end", "step", "curve min", "ok"]);
            if let Some((lo, hi)) = &rep.uncovered_prefix {
                report.push(ReportRow { cells: vec![short(lo), short(hi), "-".into(), "-".into(), "uncovered".into()], ok: false });
            }
            for v in &rep.violations {
                report.push(ReportRow {
                    cells: vec![short(&v.span_lo), short(&v.span_hi), v.step.to_sci(5), v.curve_min.to_sci(5), "NO".into()],
                    ok: false,
                });
            }
            emit_report(&report, &mut out, None)?;
            writeln!(out, "rows checked: {}", rep.rows_checked)?;
            writeln!(out, "left endpoints only: {}", if rep.left_endpoint_holds { "holds" } else { "fails" })?;
            writeln!(out, "dominance: {}", if rep.holds { "holds" } else { "fails" })?;
            Ok(rep.holds)
        }
        Command::VerifyWeak { limit, constant, cache, grid } => {
            let store = match &cache {
                Some(p) => PrimeStore::with_cache(limit, p)?,
                None => PrimeStore::new(limit)?,
            };
            let c = Enclosure::from_decimal(&constant, 128)?;
            let bound = move |_: &Enclosure| Ok(c.clone());
            let rep = verify_pointwise(&store, Kind::Pi, &bound, limit)?;
            writeln!(out, "gaps checked: {}", rep.gaps_checked)?;
            writeln!(out, "max E_pi <= {:.6}", rep.max_error)?;
            writeln!(out, "violations: {}", rep.violations.len())?;
            for v in rep.violations.iter().take(10) {
                writeln!(out, "  [{}, {}]: error <= {:.6e}, bound >= {:.6e}", v.lo, v.hi, v.error_sup, v.bound_inf)?;
            }
            let env = buthe_envelope(&Enclosure::from_u64(97, prec).ln()?, prec)?;
            let env_ok = env.value() <= Enclosure::from_decimal(&constant, prec)?.lo();
            let dec = envelope_decreasing(&Float::with_val(prec, 97), &Float::with_val(prec, Float::parse("1e19").unwrap()), grid, prec)?;
            writeln!(out, "envelope(97) = {}", show(&env, ctx.digits))?;
            writeln!(out, "envelope decreasing on [97, 1e19]: {dec}")?;
            Ok(rep.holds() && env_ok && dec)
        }
        Command::Regenerate { theta_table, printed, rows, anchor, refinement, no_theta_curve, output, summary } => {
            let theta = TableFile::read(&theta_table)?.step_table(0, prec)?;
            let anchor = ctx.anchor(&anchor)?;
            let printed_file = printed.as_ref().map(TableFile::read).transpose()?;
            let mut targets = match &printed_file {
                Some(f) => targets_from_table(f, 0),
                None => vec![],
            };
            if !rows.is_empty() {
                targets = rows
                    .iter()
                    .map(|r| {
                        let p = printed_file.as_ref().and_then(|f| f.rows.iter().find(|x| x.log_x == *r)).map(|x| x.values[0].as_str());
                        RegenTarget::new(r.trim(), p)
                    })
                    .collect();
            }
            let curve = if no_theta_curve {
                None
            } else {
                Some(AsymptoticBound::parse(Kind::Theta, "121.0961", "3/2", "2", DEFAULT_R, "ln(2)", prec)?)
            };
            let regen = regenerate_pi_table(&theta, &anchor, &targets, &RegenOptions { refinement, theta_asymptotic: curve, prec })?;
            let report = regen.report(&format!("numerical pi bounds, anchor {}, refinement {refinement}", anchor.name));
            emit_report(&report, &mut out, summary.as_deref())?;
            if let Some(path) = output {
                std::fs::write(path, regenerated_table_file(&regen, "regenerated", 5)?.format())?;
            }
            Ok(report.passed())
        }
        Command::CrossingPoint => {
            let x = crossing_point(prec)?;
            let a = crossing_anchor(prec)?;
            writeln!(out, "x0 in [{}, {}]", show(&x.lower(), 15), show(&x.upper(), 15))?;
            writeln!(out, "anchor x0 = {}", show(&a.x0.upper(), 21))?;
            writeln!(out, "pi = {}, theta = {}, Li = {}", a.pi, ctx.up(&a.theta), ctx.up(&a.li))?;
            Ok(true)
        }
        Command::Eval { which: EvalCommand::Asymp { curve, log_x } } => {
            let c = curve.bound(Kind::Pi, prec)?;
            let v = c.eval_asymp(&parse_log_x(&log_x, prec)?, Dir::Up, prec)?;
            writeln!(out, "{}", show(&v, ctx.digits))?;
            Ok(true)
        }
        Command::Eval { which: EvalCommand::Step { table, column, log_x } } => {
            let t = table_column(&table, column.as_deref(), prec)?;
            let v = t.eval_step(&parse_log_x(&log_x, prec)?)?;
            writeln!(out, "{}", show(&v, ctx.digits))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
