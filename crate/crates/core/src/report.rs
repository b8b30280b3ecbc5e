//! CSV and text rendering for every analysis result.
//!
//! CSV output is byte-stable: rows come out in a fixed order, amounts are
//! whole pounds rounded half away from zero and rates carry six decimals.
//!
//! Projection CSV columns are
//! `year,scenario,real_balance,nominal_balance,nominal_safety,breach`, one row
//! per year per scenario, years ascending and scenarios low, central, high
//! within a year.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::analysis::{DiscountMode, EdgeEffect, SensitivityRow, ShortfallReport};
use crate::audit::{format_citations, Diagnostic, STRATEGY_NOTE};
use crate::history::{BalanceSheetYear, ProfitReconstruction, Roce};
use crate::money_time::{Money, Rate, Year};
use crate::projection::{Basis, IncomeScenario, ProjectionResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

/// Everything the `history` subcommand computes.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryReport {
    pub sheets: Vec<BalanceSheetYear>,
    pub identity_findings: Vec<Diagnostic>,
    pub profit: ProfitReconstruction,
    pub roce_start: Money,
    pub roce_end: Money,
    pub roce_years: u32,
    pub roce_inflation: Rate,
    pub roce: Roce,
    pub cash: Money,
    pub cash_rate: Rate,
    pub cash_years: u32,
    pub cash_drag: Money,
}

/// A renderable result.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Projection(&'a [ProjectionResult]),
    /// Required opening cash per scenario.
    Solve(&'a [(IncomeScenario, Money)]),
    Shortfall {
        reports: &'a [ShortfallReport],
        per_year: bool,
    },
    Edges(&'a [EdgeEffect]),
    Sensitivity(&'a [SensitivityRow]),
    Dcf(&'a [ProjectionResult]),
    Diagnostics(&'a [Diagnostic]),
    History(&'a HistoryReport),
}

pub fn emit_report(report: Report<'_>, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let rows = csv_rows(report);
            let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            for row in rows {
                writer.write_record(&row).expect("writing to memory");
            }
            String::from_utf8(writer.into_inner().expect("flush to memory")).expect("utf-8 input")
        }
        ReportFormat::Text => text(report),
    }
}

fn whole(m: Money) -> String {
    m.rounded().to_string()
}

fn six(x: f64) -> String {
    format!("{x:.6}")
}

fn opt_year(y: Option<Year>) -> String {
    y.map(|y| y.to_string()).unwrap_or_default()
}

fn row<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

fn sorted(results: &[ProjectionResult]) -> Vec<&ProjectionResult> {
    let mut refs: Vec<_> = results.iter().collect();
    refs.sort_by_key(|r| r.scenario.label);
    refs
}

/// `(year, scenario, record)` in year-major order.
fn year_major(results: &[ProjectionResult]) -> Vec<(&ProjectionResult, usize)> {
    let refs = sorted(results);
    let years = refs.iter().map(|r| r.records.len()).max().unwrap_or(0);
    (0..years)
        .flat_map(|i| refs.iter().filter(move |r| i < r.records.len()).map(move |r| (*r, i)))
        .collect()
}

fn csv_rows(report: Report<'_>) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    match report {
        Report::Projection(results) => {
            rows.push(row(["year", "scenario", "real_balance", "nominal_balance", "nominal_safety", "breach"]));
            for (result, i) in year_major(results) {
                let r = &result.records[i];
                rows.push(vec![
                    r.year.to_string(),
                    result.scenario.label.to_string(),
                    whole(r.real_balance),
                    whole(r.nominal_balance),
                    whole(r.nominal_safety),
                    r.breach.to_string(),
                ]);
            }
        }
        Report::Solve(items) => {
            rows.push(row(["scenario", "annual_income", "required_opening_real"]));
            for (scenario, required) in items {
                rows.push(vec![
                    scenario.label.to_string(),
                    whole(scenario.annual_income),
                    whole(*required),
                ]);
            }
        }
        Report::Shortfall { reports, per_year: false } => {
            rows.push(row(["scenario", "opening", "peak_nominal_shortfall", "binding_year"]));
            for r in reports {
                rows.push(vec![
                    r.scenario.label.to_string(),
                    whole(r.opening),
                    whole(r.peak_nominal_shortfall),
                    opt_year(r.binding_year),
                ]);
            }
        }
        Report::Shortfall { reports, per_year: true } => {
            rows.push(row(["scenario", "year", "nominal_shortfall"]));
            for r in reports {
                for (year, shortfall) in &r.per_year {
                    rows.push(vec![r.scenario.label.to_string(), year.to_string(), whole(*shortfall)]);
                }
            }
        }
        Report::Edges(effects) => {
            rows.push(row([
                "asset",
                "event",
                "perturbation",
                "delta_required_real",
                "delta_peak_nominal",
                "events_entering",
                "events_leaving",
            ]));
            for e in effects {
                rows.push(vec![
                    e.asset.clone(),
                    e.event.clone(),
                    e.perturbation.to_string(),
                    whole(e.delta_required_real),
                    whole(e.delta_peak_nominal),
                    e.events_entering.to_string(),
                    e.events_leaving.to_string(),
                ]);
            }
        }
        Report::Sensitivity(items) => {
            rows.push(row([
                "inflation",
                "scenario",
                "required_opening_real",
                "peak_nominal_shortfall",
                "binding_year",
            ]));
            for s in items {
                rows.push(vec![
                    six(s.inflation.value()),
                    s.scenario.to_string(),
                    whole(s.required_opening_real),
                    whole(s.peak_nominal_shortfall),
                    opt_year(s.binding_year),
                ]);
            }
        }
        Report::Dcf(results) => {
            rows.push(row([
                "year",
                "scenario",
                "mode",
                "rate",
                "factor",
                "real_balance",
                "discounted_balance",
                "safety",
                "breach",
            ]));
            for (result, i) in year_major(results) {
                let r = &result.records[i];
                let (mode, rate, factor) = match result.basis {
                    Basis::Discounted(mode) => (mode.name(), mode.rate().value(), mode.factor(i as u32)),
                    Basis::Inflated(rate) => ("inflated", rate.value(), crate::money_time::growth_factor(rate, i as u32)),
                };
                rows.push(vec![
                    r.year.to_string(),
                    result.scenario.label.to_string(),
                    mode.to_string(),
                    six(rate),
                    six(factor),
                    whole(r.real_balance),
                    whole(r.nominal_balance),
                    whole(r.nominal_safety),
                    r.breach.to_string(),
                ]);
            }
        }
        Report::Diagnostics(diags) => {
            rows.push(row(["rule", "severity", "subject", "message", "citing"]));
            for d in diags {
                rows.push(vec![
                    d.rule.to_string(),
                    d.severity.to_string(),
                    d.subject.clone(),
                    d.message.clone(),
                    format_citations(&d.citing),
                ]);
            }
        }
        Report::History(h) => {
            rows.push(row(["section", "item", "value"]));
            for sheet in &h.sheets {
                let year = opt_year(sheet.year);
                let findings: Vec<_> = h
                    .identity_findings
                    .iter()
                    .filter(|d| d.subject == year)
                    .collect();
                rows.push(vec!["total_assets".into(), year.clone(), whole(sheet.total_assets())]);
                if findings.is_empty() {
                    rows.push(vec!["identity".into(), year.clone(), "ok".into()]);
                }
                for d in findings {
                    rows.push(vec!["identity".into(), year.clone(), format!("{} {}: {}", d.rule, d.severity, d.message)]);
                }
            }
            let p = &h.profit;
            for (item, value) in [
                ("ie_movement", whole(p.components.ie_movement)),
                ("cumulative_depreciation", whole(p.components.cumulative_depreciation)),
                ("residual_asset_value", whole(p.components.residual_asset_value)),
                ("uncapitalised_property", whole(p.components.uncapitalised_property)),
                ("period_years", p.period_years.to_string()),
                ("total", whole(p.total)),
                ("per_annum", whole(p.per_annum)),
            ] {
                rows.push(vec!["profit".into(), item.into(), value]);
            }
            for (item, value) in [
                ("start_funds", whole(h.roce_start)),
                ("end_funds_adjusted", whole(h.roce_end)),
                ("years", h.roce_years.to_string()),
                ("inflation", six(h.roce_inflation.value())),
                ("ratio", six(h.roce.ratio)),
                ("nominal_annual", six(h.roce.nominal_annual.value())),
                ("real_annual", six(h.roce.real_annual.value())),
            ] {
                rows.push(vec!["roce".into(), item.into(), value]);
            }
            for (item, value) in [
                ("cash", whole(h.cash)),
                ("real_loss_rate", six(h.cash_rate.value())),
                ("years", h.cash_years.to_string()),
                ("loss", whole(h.cash_drag)),
            ] {
                rows.push(vec!["cash_drag".into(), item.into(), value]);
            }
        }
    }
    rows
}

fn text(report: Report<'_>) -> String {
    let mut out = String::new();
    let w = &mut out;
    match report {
        Report::Projection(results) | Report::Dcf(results) => {
            let dcf = matches!(report, Report::Dcf(_));
            for result in sorted(results) {
                let heading = match result.basis {
                    Basis::Inflated(rate) => format!("inflated at {rate}"),
                    Basis::Discounted(DiscountMode::Proper(d)) => format!("discounted at {d}"),
                    Basis::Discounted(DiscountMode::SignFlipHack(r)) => {
                        format!("sign-flip: inflation entered as -{r}")
                    }
                };
                let _ = writeln!(
                    w,
                    "{} income {} per annum, {}",
                    result.scenario.label, result.scenario.annual_income, heading
                );
                let (second, third) = if dcf { ("discounted", "safety") } else { ("nominal", "nominal safety") };
                let _ = writeln!(w, "{:>6} {:>14} {:>14} {:>14}  breach", "year", "real", second, third);
                for r in &result.records {
                    let _ = writeln!(
                        w,
                        "{:>6} {:>14} {:>14} {:>14}  {}",
                        r.year,
                        r.real_balance.to_string(),
                        r.nominal_balance.to_string(),
                        r.nominal_safety.to_string(),
                        if r.breach { "BREACH" } else { "-" }
                    );
                }
                match result.first_breach_year {
                    Some(y) => {
                        let _ = writeln!(w, "first breach: {y}\n");
                    }
                    None => {
                        let _ = writeln!(w, "no breach\n");
                    }
                }
            }
        }
        Report::Solve(items) => {
            for (scenario, required) in items {
                let _ = writeln!(
                    w,
                    "{}: income {} per annum needs opening cash of {} (base-year money)",
                    scenario.label, scenario.annual_income, required
                );
            }
        }
        Report::Shortfall { reports, per_year } => {
            for r in reports {
                match r.binding_year {
                    Some(y) => {
                        let _ = writeln!(
                            w,
                            "{}: opening {} leaves a peak nominal shortfall of {} in {}",
                            r.scenario.label, r.opening, r.peak_nominal_shortfall, y
                        );
                    }
                    None => {
                        let _ = writeln!(w, "{}: opening {} never falls short", r.scenario.label, r.opening);
                    }
                }
                if per_year {
                    for (year, shortfall) in &r.per_year {
                        let _ = writeln!(w, "  {year} {shortfall}");
                    }
                }
            }
        }
        Report::Edges(effects) => {
            for e in effects {
                let _ = writeln!(
                    w,
                    "{}/{} {}: peak nominal {}, required real {} (+{} / -{} occurrences)",
                    e.asset,
                    e.event,
                    e.perturbation,
                    e.delta_peak_nominal,
                    e.delta_required_real,
                    e.events_entering,
                    e.events_leaving
                );
            }
        }
        Report::Sensitivity(items) => {
            for s in items {
                let _ = writeln!(
                    w,
                    "inflation {} {}: required opening {}, peak nominal shortfall {}{}",
                    s.inflation,
                    s.scenario,
                    s.required_opening_real,
                    s.peak_nominal_shortfall,
                    s.binding_year.map(|y| format!(" in {y}")).unwrap_or_default()
                );
            }
        }
        Report::Diagnostics(diags) => {
            for d in diags {
                let _ = writeln!(w, "{} {}: {}", d.rule, d.severity, d.message);
            }
            let _ = writeln!(w, "{STRATEGY_NOTE}");
        }
        Report::History(h) => {
            for sheet in &h.sheets {
                let year = opt_year(sheet.year);
                let findings: Vec<_> = h.identity_findings.iter().filter(|d| d.subject == year).collect();
                let status = if findings.is_empty() { "identities hold" } else { "identity failures" };
                let _ = writeln!(w, "{year}: total assets {}, {status}", sheet.total_assets());
                for d in findings {
                    let _ = writeln!(w, "  {} {}: {}", d.rule, d.severity, d.message);
                }
            }
            let p = &h.profit;
            let _ = writeln!(
                w,
                "profit before depreciation over {} years: {} ({} per annum)",
                p.period_years, p.total, p.per_annum
            );
            let _ = writeln!(
                w,
                "return on capital: {} -> {} over {} years = {:.1}%, {} nominal, {} real at {} inflation",
                h.roce_start,
                h.roce_end,
                h.roce_years,
                h.roce.ratio * 100.0,
                h.roce.nominal_annual,
                h.roce.real_annual,
                h.roce_inflation
            );
            let _ = writeln!(
                w,
                "cash drag: {} held {} years at {} real = {} lost",
                h.cash, h.cash_years, h.cash_rate, h.cash_drag
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::{Cited, RuleId, Severity};

    #[test]
    fn empty_edge_list_is_header_only() {
        let csv = emit_report(Report::Edges(&[]), ReportFormat::Csv);
        assert_eq!(
            csv,
            "asset,event,perturbation,delta_required_real,delta_peak_nominal,events_entering,events_leaving\n"
        );
    }

    #[test]
    fn diagnostics_text_lines() {
        let d = Diagnostic {
            rule: RuleId::R5,
            severity: Severity::Warning,
            subject: String::new(),
            message: "low, really".into(),
            citing: vec![("inflation".into(), Cited::Rate(Rate::new(0.02).unwrap()))],
        };
        let text = emit_report(Report::Diagnostics(std::slice::from_ref(&d)), ReportFormat::Text);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("R5 Warning: low, really"));
        assert_eq!(lines.next(), Some(STRATEGY_NOTE));
        let csv = emit_report(Report::Diagnostics(&[d]), ReportFormat::Csv);
        assert_eq!(
            csv.lines().nth(1),
            Some("R5,Warning,,\"low, really\",inflation=rate:0.02")
        );
    }
}
