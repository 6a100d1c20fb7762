use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use tresor_core::breakeven::{seasonal_solvency, simulate_cash_days, solvency_threshold, SalesSchedule};
use tresor_core::leverage::{curve_data, rupture_matrix, CurveRequest, LeverageBasis, TreasuryLeverage};
use tresor_core::surplus::{caf_surplus, surplus_accounts};
use tresor_core::transfer::operating_cash_surplus;
use tresor_core::waterfall::{fcf_waterfall, waterfall_inputs};
use tresor_core::{Error, Money};

use crate::error::CliError;
use crate::input::{read_ledger, read_scenario, Ledger, Scenario};
use crate::render::{self, Style, Table};
use crate::report::{self, LeverageFigures, Report};

#[derive(Debug, Parser)]
#[command(
    name = "tresor",
    version,
    about = "Cash break-even, treasury leverage and operating cash surplus reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Emit exact rationals (`n/d`) instead of amounts rounded to 2 decimals.
    #[arg(long, global = true)]
    pub raw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Liquidity threshold (seuil de liquidité) and solvency threshold
    /// (seuil de solvabilité) of one or more scenarios.
    Breakeven(BreakevenArgs),
    /// Replay a scenario's cash flows day by day, or month by month for
    /// seasonal activity.
    Simulate(SimulateArgs),
    /// Treasury leverage (effet de levier de trésorerie) at one volume.
    Leverage(LeverageArgs),
    /// Elasticity and liquidity indifference curves (courbes d'indifférence)
    /// as (x, value) pairs.
    Curves(CurvesArgs),
    /// Surplus account (comptes de surplus) between period n and n+1.
    Surplus(PeriodArgs),
    /// Operating cash surplus table (surplus de trésorerie d'exploitation),
    /// rows I to VI, for period n.
    CashTable(PeriodArgs),
    /// Free-cash-flow waterfall and financing table.
    Waterfall(PeriodArgs),
    /// Check ledgers and scenarios without computing anything.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct BreakevenArgs {
    /// Scenario file; repeat for a batch run.
    #[arg(long = "scenario", required = true)]
    pub scenarios: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Length of the day-level replay.
    #[arg(long, default_value_t = 720)]
    pub horizon_days: u32,
    /// Include the cumulative cash of every day.
    #[arg(long)]
    pub daily: bool,
    /// Monthly series from the seasonal weights instead of the day-level replay.
    #[arg(long)]
    pub monthly: bool,
    #[arg(long, default_value_t = 24)]
    pub horizon_months: u32,
}

fn parse_money(text: &str) -> Result<Money, String> {
    text.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Basis {
    /// Total fixed charges (levier d'exploitation, liquidité à terme).
    #[default]
    Term,
    /// Cash fixed charges only (liquidité immédiate).
    Immediate,
}

impl From<Basis> for LeverageBasis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Term => LeverageBasis::Term,
            Basis::Immediate => LeverageBasis::Immediate,
        }
    }
}

#[derive(Debug, Args)]
pub struct LeverSource {
    /// Fixed charges F.
    #[arg(long = "F", value_parser = parse_money, required_unless_present = "scenario")]
    pub fixed: Option<Money>,
    /// Unit margin m.
    #[arg(long = "m", value_parser = parse_money, required_unless_present = "scenario")]
    pub margin: Option<Money>,
    /// Take F and m from a scenario's cost structure instead.
    #[arg(long, conflicts_with_all = ["fixed", "margin"])]
    pub scenario: Option<PathBuf>,
    /// Which fixed charges stand for F when reading a scenario.
    #[arg(long, value_enum, default_value_t = Basis::Term)]
    pub basis: Basis,
}

#[derive(Debug, Args)]
pub struct LeverageArgs {
    #[command(flatten)]
    pub source: LeverSource,
    /// Production volume Q.
    #[arg(long = "Q", value_parser = parse_money)]
    pub volume: Money,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    Volume,
    Margin,
    Indifference,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub source: LeverSource,
    /// Volume at which the margin elasticity is drawn.
    #[arg(long = "Q", value_parser = parse_money)]
    pub volume: Money,
    /// Comma-separated volumes; defaults to a log grid around F/m.
    #[arg(long, value_parser = parse_money, value_delimiter = ',')]
    pub volume_grid: Option<Vec<Money>>,
    /// Comma-separated margins; defaults to a log grid around F/Q.
    #[arg(long, value_parser = parse_money, value_delimiter = ',')]
    pub margin_grid: Option<Vec<Money>>,
    /// Fixed-charge levels of the indifference curves; defaults to F.
    #[arg(long, value_parser = parse_money, value_delimiter = ',')]
    pub indifference: Option<Vec<Money>>,
    /// Curve written to standard output in CSV or text format.
    #[arg(long, value_enum)]
    pub curve: Option<Curve>,
    /// Write every curve as its own CSV file into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    /// JSON ledger file, or a directory of CSV files.
    #[arg(long)]
    pub ledger: PathBuf,
    /// Period n; defaults to the first period the report can be built for.
    #[arg(long)]
    pub period: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub ledger: Vec<PathBuf>,
    #[arg(long)]
    pub scenario: Vec<PathBuf>,
}

/// Runs a command and returns what it prints on standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let style = if cli.raw { Style::Raw } else { Style::Rounded };
    let reports = match &cli.command {
        Command::Breakeven(args) => breakeven(args, style)?,
        Command::Simulate(args) => vec![simulate(args, style)?],
        Command::Leverage(args) => vec![leverage(args, style)?],
        Command::Curves(args) => return curves(args, cli.format, style),
        Command::Surplus(args) => vec![surplus(args, style)?],
        Command::CashTable(args) => vec![cash_table(args, style)?],
        Command::Waterfall(args) => vec![waterfall(args, style)?],
        Command::Validate(args) => vec![validate(args)?],
    };
    Ok(emit(&reports, cli.format, style))
}

fn emit(reports: &[Report], format: Format, style: Style) -> String {
    match format {
        Format::Text => {
            let tables: Vec<Table> = reports.iter().flat_map(|r| r.tables.clone()).collect();
            render::text(&tables, style)
        }
        Format::Csv => {
            let tables: Vec<Table> = reports.iter().flat_map(|r| r.tables.clone()).collect();
            render::csv(&tables, style)
        }
        Format::Json => {
            let doc = match reports {
                [one] => one.json.clone(),
                many => serde_json::Value::Array(many.iter().map(|r| r.json.clone()).collect()),
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            out.push('\n');
            out
        }
    }
}

/// Scenarios are independent, so a batch computes them in parallel; output
/// keeps the command-line order.
fn breakeven(args: &BreakevenArgs, style: Style) -> Result<Vec<Report>, CliError> {
    let scenarios = args
        .scenarios
        .iter()
        .map(|p| read_scenario(p))
        .collect::<Result<Vec<_>, _>>()?;
    let results: Vec<Result<Report, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|s| {
                scope.spawn(move || {
                    let r = solvency_threshold(&s.cost_structure, &s.profile)?;
                    Ok(report::breakeven(&s.name, &r, style))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

fn simulate(args: &SimulateArgs, style: Style) -> Result<Report, CliError> {
    let s = read_scenario(&args.scenario)?;
    if args.monthly {
        let series = seasonal_solvency(&s.cost_structure, &s.profile, args.horizon_months)?;
        return Ok(report::seasonal(&s.name, &series, style));
    }
    let months = args.horizon_days.div_ceil(30) + 1;
    let schedule = SalesSchedule::from_profile(&s.profile, months);
    let sim = simulate_cash_days(&s.cost_structure, &s.profile, &schedule, args.horizon_days)?;
    Ok(report::simulation(&s.name, &sim, args.daily, style))
}

fn lever(source: &LeverSource) -> Result<(TreasuryLeverage, Option<Scenario>), CliError> {
    match (&source.scenario, &source.fixed, &source.margin) {
        (Some(path), _, _) => {
            let s = read_scenario(path)?;
            let lev = TreasuryLeverage::from_cost_structure(&s.cost_structure, source.basis.into());
            Ok((lev, Some(s)))
        }
        (None, Some(f), Some(m)) => Ok((TreasuryLeverage::new(f.clone(), m.clone()), None)),
        _ => Err(CliError::Parse("give --F and --m, or --scenario".into())),
    }
}

/// Keeps poles and similar conditions as gaps rather than failures.
fn defined(r: Result<Money, Error>) -> Result<Option<Money>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::AtCriticalProduction | Error::AtCriticalMargin | Error::ZeroProduction) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn leverage(args: &LeverageArgs, style: Style) -> Result<Report, CliError> {
    let (lev, scenario) = lever(&args.source)?;
    let q = &args.volume;
    let figures = LeverageFigures {
        virtual_treasury: lev.virtual_treasury(q),
        volume_elasticity: defined(lev.elasticity_wrt_volume(q))?,
        margin_elasticity: defined(lev.elasticity_wrt_margin(&lev.margin, q))?,
        critical_production: defined(lev.critical_production())?,
        critical_margin: defined(lev.critical_margin(q))?,
        volume: q.clone(),
        leverage: lev,
    };
    let matrix = match &scenario {
        Some(s) => Some(rupture_matrix(&s.cost_structure, q, &s.cost_structure.unit_margin())?),
        None => None,
    };
    Ok(report::leverage(&figures, matrix.as_ref(), style))
}

fn curves(args: &CurvesArgs, format: Format, style: Style) -> Result<String, CliError> {
    let (lev, _) = lever(&args.source)?;
    let request = CurveRequest {
        indifference_levels: args.indifference.clone().unwrap_or_else(|| vec![lev.fixed.clone()]),
        leverage: lev,
        volume: args.volume.clone(),
        volume_grid: args.volume_grid.clone(),
        margin_grid: args.margin_grid.clone(),
    };
    let data = curve_data(&request)?;
    let report = report::curves(&data, style);

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
        let mut written = Vec::new();
        for (i, table) in report.tables.iter().enumerate() {
            let name = match i {
                0 => "volume_elasticity.csv".to_string(),
                1 => "margin_elasticity.csv".to_string(),
                n => format!("indifference_{}.csv", n - 1),
            };
            let path = dir.join(&name);
            fs::write(&path, render::csv(std::slice::from_ref(table), style)).map_err(|e| output_error(&path, e))?;
            written.push(format!("{}\n", path.display()));
        }
        return Ok(written.concat());
    }
    let picked = |curve: Curve| -> Vec<Table> {
        match curve {
            Curve::Volume => vec![report.tables[0].clone()],
            Curve::Margin => vec![report.tables[1].clone()],
            Curve::Indifference => report.tables[2..].to_vec(),
        }
    };
    Ok(match (format, args.curve) {
        (Format::Json, _) => emit(std::slice::from_ref(&report), format, style),
        (Format::Csv, curve) => render::csv(&picked(curve.unwrap_or(Curve::Volume)), style),
        (Format::Text, Some(curve)) => render::text(&picked(curve), style),
        (Format::Text, None) => render::text(&report.tables, style),
    })
}

fn output_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Output {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}

fn period_or(ledger: &Ledger, requested: Option<u32>, offset: u32) -> u32 {
    requested.unwrap_or(ledger.ledger.first_period() + offset)
}

fn surplus(args: &PeriodArgs, style: Style) -> Result<Report, CliError> {
    let l = read_ledger(&args.ledger)?;
    let n = period_or(&l, args.period, 0);
    let (base, next) = (l.ledger.account(n)?, l.ledger.account(n + 1)?);
    let r = surplus_accounts(base, next)?;
    let caf = caf_surplus(base, next)?;
    Ok(report::surplus(&r, &caf, style))
}

fn cash_table(args: &PeriodArgs, style: Style) -> Result<Report, CliError> {
    let l = read_ledger(&args.ledger)?;
    let n = period_or(&l, args.period, 1);
    let table = operating_cash_surplus(&l.ledger, n)?;
    Ok(report::cash_table(&table, style))
}

fn waterfall(args: &PeriodArgs, style: Style) -> Result<Report, CliError> {
    let l = read_ledger(&args.ledger)?;
    let n = period_or(&l, args.period, 1);
    let inputs = waterfall_inputs(&l.ledger, &l.financing)?;
    let w = fcf_waterfall(&inputs)?;
    report::waterfall(&w, n, style).ok_or(CliError::Core(Error::UnknownPeriod(n)))
}

fn validate(args: &ValidateArgs) -> Result<Report, CliError> {
    if args.ledger.is_empty() && args.scenario.is_empty() {
        return Err(CliError::Parse("nothing to validate: give --ledger or --scenario".into()));
    }
    let mut t = Table::new("Validation", &["file", "status"]);
    let mut checked = Vec::new();
    for path in &args.ledger {
        let l = read_ledger(path)?;
        let status = format!(
            "ok: periods {}..={}, {} stocks",
            l.ledger.first_period(),
            l.ledger.last_period(),
            l.ledger.stocks().len()
        );
        t.row(vec![path.display().to_string().into(), status.clone().into()]);
        checked.push(serde_json::json!({"file": path.display().to_string(), "status": status}));
    }
    for path in &args.scenario {
        let s = read_scenario(path)?;
        let status = format!("ok: scenario {}", s.name);
        t.row(vec![path.display().to_string().into(), status.clone().into()]);
        checked.push(serde_json::json!({"file": path.display().to_string(), "status": status}));
    }
    Ok(Report {
        tables: vec![t],
        json: serde_json::json!({"valid": true, "files": checked}),
    })
}
