//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 check failure
//! (`project --check` found a breach, `audit --strict` found an Error),
//! 3 internal error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use capplan::analysis::{dcf_project, edge_scan_width, inflation_sensitivity, peak_nominal_shortfall, required_opening_real, DiscountMode};
use capplan::audit::Severity;
use capplan::history::{cash_drag, check_identities, parse_sheets, reconstruct_profit, roce, ProfitComponents};
use capplan::projection::{project, scenario_set, IncomeScenario, ScenarioLabel};
use capplan::report::{emit_report, HistoryReport, Report, ReportFormat};
use capplan::{audit_model, parse_model_file, Model, Money, Rate};

#[derive(Parser)]
#[command(name = "capplan", version, about = "Long-horizon capital replacement cash planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Year-by-year real and inflated balances
    Project {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true, value_parser = money)]
        opening: Option<Money>,
        /// Exit with status 2 if any scenario breaches the safety floor
        #[arg(long)]
        check: bool,
    },
    /// Opening cash each scenario needs to stay above the safety floor
    Solve {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Peak nominal shortfall against the inflated safety floor
    Shortfall {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true, value_parser = money)]
        opening: Option<Money>,
        /// One row per year instead of the peak
        #[arg(long)]
        per_year: bool,
    },
    /// Effect of moving each recurring event by a year
    EdgeScan {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true, value_parser = money)]
        opening: Option<Money>,
        /// Largest shift, in years, applied to period and offset
        #[arg(long, default_value_t = 1)]
        width: u32,
    },
    /// Both cash-required metrics over a grid of inflation rates
    Sensitivity {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true, value_parser = money)]
        opening: Option<Money>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_parser = rate, default_value = "0.02,0.03")]
        inflation_grid: Vec<Rate>,
    },
    /// Discounted cash flow projection
    Dcf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true, value_parser = money)]
        opening: Option<Money>,
        #[arg(long, value_parser = rate, default_value = "0.06")]
        discount: Rate,
        #[arg(long, value_parser = ["proper", "signflip"], default_value = "proper")]
        mode: String,
    },
    /// Balance-sheet identities, profit reconstruction, return on capital and cash drag
    History(HistoryArgs),
    /// Rule-based review of a model
    Audit {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = ["csv", "text"], default_value = "csv")]
        format: String,
        /// Historical profit per annum to compare central income against
        #[arg(long, allow_negative_numbers = true, value_parser = money)]
        historical_per_annum: Option<Money>,
        /// Exit with status 2 if any finding has Error severity
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_parser = ["low", "central", "high", "all"], default_value = "all")]
    income: String,
    #[arg(long, value_parser = ["csv", "text"], default_value = "csv")]
    format: String,
    /// Replace the central income; low and high follow the multipliers
    #[arg(long, allow_negative_numbers = true, value_parser = money)]
    income_override: Option<Money>,
    /// Switch a named option on (repeatable)
    #[arg(long)]
    enable_option: Vec<String>,
    /// Switch a named option off (repeatable)
    #[arg(long)]
    disable_option: Vec<String>,
}

#[derive(Args)]
struct HistoryArgs {
    #[arg(long)]
    sheets: PathBuf,
    #[arg(long, value_parser = ["csv", "text"], default_value = "csv")]
    format: String,
    #[arg(long, allow_negative_numbers = true, value_parser = money, default_value = "25000")]
    ie_movement: Money,
    #[arg(long, allow_negative_numbers = true, value_parser = money, default_value = "126000")]
    depreciation: Money,
    #[arg(long, allow_negative_numbers = true, value_parser = money, default_value = "150000")]
    residual_value: Money,
    #[arg(long, allow_negative_numbers = true, value_parser = money, default_value = "60000")]
    uncapitalised: Money,
    #[arg(long, default_value_t = 20)]
    period_years: u32,
    #[arg(long, value_parser = money, default_value = "201000")]
    roce_start: Money,
    #[arg(long, value_parser = money, default_value = "574000")]
    roce_end: Money,
    #[arg(long, default_value_t = 20)]
    roce_years: u32,
    #[arg(long, allow_negative_numbers = true, value_parser = rate, default_value = "0.02")]
    roce_inflation: Rate,
    #[arg(long, value_parser = money, default_value = "133000")]
    cash: Money,
    #[arg(long, allow_negative_numbers = true, value_parser = rate, default_value = "0.028")]
    cash_rate: Rate,
    #[arg(long, default_value_t = 15)]
    cash_years: u32,
}

fn money(s: &str) -> Result<Money, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not an amount"))?;
    Money::new(v).map_err(|e| e.to_string())
}

fn rate(s: &str) -> Result<Rate, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a rate"))?;
    Rate::new(v).map_err(|e| e.to_string())
}

fn format_of(s: &str) -> ReportFormat {
    s.parse().expect("restricted by clap")
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

struct Outcome {
    output: String,
    check_failed: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            output,
            check_failed: false,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model, Failure> {
    parse_model_file(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

impl ModelArgs {
    fn load(&self) -> Result<Model, Failure> {
        let mut model = load_model(&self.model)?;
        if let Some(income) = self.income_override {
            model.income_central = income;
        }
        for (names, enabled) in [(&self.enable_option, true), (&self.disable_option, false)] {
            for name in names {
                if !model.set_option(name, enabled) {
                    return Err(Failure::input(format!("no option named {name:?}")));
                }
            }
        }
        Ok(model)
    }

    fn scenarios(&self, model: &Model) -> Vec<IncomeScenario> {
        let all = scenario_set(model);
        match self.income.as_str() {
            "all" => all.to_vec(),
            label => vec![all[label.parse::<ScenarioLabel>().expect("restricted by clap") as usize]],
        }
    }

    fn format(&self) -> ReportFormat {
        format_of(&self.format)
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Project { model: args, opening, check } => {
            let model = args.load()?;
            let results: Vec<_> = args.scenarios(&model).into_iter().map(|s| project(&model, s, opening)).collect();
            Ok(Outcome {
                output: emit_report(Report::Projection(&results), args.format()),
                check_failed: check && results.iter().any(|r| r.any_breach()),
            })
        }
        Command::Solve { model: args } => {
            let model = args.load()?;
            let items: Vec<_> = args
                .scenarios(&model)
                .into_iter()
                .map(|s| (s, required_opening_real(&model, s)))
                .collect();
            Ok(Outcome::ok(emit_report(Report::Solve(&items), args.format())))
        }
        Command::Shortfall { model: args, opening, per_year } => {
            let model = args.load()?;
            let opening = opening.unwrap_or(model.opening_balance);
            let reports: Vec<_> = args
                .scenarios(&model)
                .into_iter()
                .map(|s| peak_nominal_shortfall(&model, s, opening))
                .collect();
            Ok(Outcome::ok(emit_report(Report::Shortfall { reports: &reports, per_year }, args.format())))
        }
        Command::EdgeScan { model: args, opening, width } => {
            let model = args.load()?;
            let opening = opening.unwrap_or(model.opening_balance);
            let mut effects = Vec::new();
            for s in args.scenarios(&model) {
                effects.extend(edge_scan_width(&model, s, opening, width));
            }
            Ok(Outcome::ok(emit_report(Report::Edges(&effects), args.format())))
        }
        Command::Sensitivity { model: args, opening, inflation_grid } => {
            let model = args.load()?;
            let opening = opening.unwrap_or(model.opening_balance);
            let labels: Vec<_> = args.scenarios(&model).iter().map(|s| s.label).collect();
            let rows = inflation_sensitivity(&model, &inflation_grid, &labels, opening);
            Ok(Outcome::ok(emit_report(Report::Sensitivity(&rows), args.format())))
        }
        Command::Dcf { model: args, opening, discount, mode } => {
            let model = args.load()?;
            let opening = opening.unwrap_or(model.opening_balance);
            let mode = match mode.as_str() {
                "proper" => DiscountMode::Proper(discount),
                _ => DiscountMode::SignFlipHack(discount),
            };
            let results: Vec<_> = args
                .scenarios(&model)
                .into_iter()
                .map(|s| dcf_project(&model, s, opening, mode))
                .collect();
            Ok(Outcome::ok(emit_report(Report::Dcf(&results), args.format())))
        }
        Command::History(h) => {
            let text = read(&h.sheets)?;
            let sheets =
                parse_sheets(text.as_bytes()).map_err(|e| Failure::input(format!("{}: {e}", h.sheets.display())))?;
            let identity_findings = sheets.iter().flat_map(check_identities).collect();
            let components = ProfitComponents {
                ie_movement: h.ie_movement,
                cumulative_depreciation: h.depreciation,
                residual_asset_value: h.residual_value,
                uncapitalised_property: h.uncapitalised,
            };
            let profit = reconstruct_profit(components, h.period_years).map_err(|e| Failure::input(e.to_string()))?;
            let roce_result =
                roce(h.roce_start, h.roce_end, h.roce_years, h.roce_inflation).map_err(|e| Failure::input(e.to_string()))?;
            let report = HistoryReport {
                sheets,
                identity_findings,
                profit,
                roce_start: h.roce_start,
                roce_end: h.roce_end,
                roce_years: h.roce_years,
                roce_inflation: h.roce_inflation,
                roce: roce_result,
                cash: h.cash,
                cash_rate: h.cash_rate,
                cash_years: h.cash_years,
                cash_drag: cash_drag(h.cash, h.cash_rate, h.cash_years),
            };
            Ok(Outcome::ok(emit_report(Report::History(&report), format_of(&h.format))))
        }
        Command::Audit {
            model,
            format,
            historical_per_annum,
            strict,
        } => {
            let model = load_model(&model)?;
            let diags = audit_model(&model, historical_per_annum);
            Ok(Outcome {
                output: emit_report(Report::Diagnostics(&diags), format_of(&format)),
                check_failed: strict && diags.iter().any(|d| d.severity == Severity::Error),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match std::panic::catch_unwind(|| run(cli.command)) {
        Ok(outcome) => outcome,
        Err(_) => return ExitCode::from(3),
    };
    match outcome {
        Ok(outcome) => {
            let mut stdout = io::stdout().lock();
            if let Err(e) = stdout.write_all(outcome.output.as_bytes()).and_then(|()| stdout.flush()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("capplan: writing output: {e}");
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(if outcome.check_failed { 2 } else { 0 })
        }
        Err(failure) => {
            eprintln!("capplan: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
