//! Stress tests and valuation on top of the projection engine.
//!
//! Two "cash required" metrics are exposed:
//!
//! * [`required_opening_real`] is the least opening balance that keeps the
//!   base-year track at or above the safety floor in every year.
//! * [`peak_nominal_shortfall`] is the worst single-year gap between the
//!   inflated safety floor and the inflated balance, for a given opening.
//!   Because it is measured on the inflated row, a late expense counts at its
//!   inflated size, which is what makes horizon truncation so visible.
//!
//! [`dcf_project`] re-runs a model with discounting, either properly with
//! `(1 + d)^-n` or by feeding `-d` in as an inflation rate, which yields
//! `(1 - d)^n` and systematically over-discounts.

use std::fmt;

use rayon::prelude::*;

use crate::money_time::{discount_factor, growth_factor, Money, Rate, Year};
use crate::projection::{
    inflate, project_flows, real_track, scenario_set, Basis, IncomeScenario, ProjectionResult, ScenarioLabel,
    YearRecord,
};
use crate::schedule::{expand_event, yearly_flows, Model, RecurringEvent, YearlyFlows};

/// Least opening balance for which no year breaches the safety floor.
///
/// Closed form: `max(0, safety - min_t cumulative_net(t))` where the
/// cumulative net flow includes year `t` itself.
pub fn required_opening_real(model: &Model, scenario: IncomeScenario) -> Money {
    required_from_flows(model, &yearly_flows(model), scenario.annual_income)
}

fn required_from_flows(model: &Model, flows: &YearlyFlows, income: Money) -> Money {
    let lowest = real_track(flows, income, Money::ZERO)
        .into_iter()
        .reduce(Money::min)
        .unwrap_or(Money::ZERO);
    (model.safety_balance - lowest).max(Money::ZERO)
}

/// Worst inflated shortfall against the inflated safety floor.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortfallReport {
    pub scenario: IncomeScenario,
    pub opening: Money,
    pub peak_nominal_shortfall: Money,
    /// Earliest year attaining the peak; `None` when there is no shortfall.
    pub binding_year: Option<Year>,
    pub per_year: Vec<(Year, Money)>,
}

pub fn peak_nominal_shortfall(model: &Model, scenario: IncomeScenario, opening: Money) -> ShortfallReport {
    shortfall_from_flows(model, &yearly_flows(model), scenario, opening)
}

fn shortfall_from_flows(
    model: &Model,
    flows: &YearlyFlows,
    scenario: IncomeScenario,
    opening: Money,
) -> ShortfallReport {
    let projection = project_flows(model, flows, scenario, opening);
    let per_year: Vec<(Year, Money)> = projection
        .records
        .iter()
        .map(|r| (r.year, (r.nominal_safety - r.nominal_balance).max(Money::ZERO)))
        .collect();
    let mut peak = Money::ZERO;
    let mut binding_year = None;
    for &(year, shortfall) in &per_year {
        if shortfall > peak {
            peak = shortfall;
            binding_year = Some(year);
        }
    }
    ShortfallReport {
        scenario,
        opening,
        peak_nominal_shortfall: peak,
        binding_year,
        per_year,
    }
}

/// A one-parameter change to a recurring event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    Period { from: u32, to: u32 },
    Offset { from: u32, to: u32 },
}

impl Perturbation {
    fn apply(self, event: &RecurringEvent) -> RecurringEvent {
        let mut changed = event.clone();
        match self {
            Perturbation::Period { to, .. } => changed.period_years = to,
            Perturbation::Offset { to, .. } => changed.offset_years = to,
        }
        changed
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Perturbation::Period { from, to } => write!(f, "period {from} -> {to}"),
            Perturbation::Offset { from, to } => write!(f, "offset {from} -> {to}"),
        }
    }
}

/// Effect of one perturbation, as perturbed minus base.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeEffect {
    pub asset: String,
    pub event: String,
    pub perturbation: Perturbation,
    pub delta_required_real: Money,
    pub delta_peak_nominal: Money,
    pub events_entering: usize,
    pub events_leaving: usize,
}

/// Perturbs every recurring event's period and offset by one year each way.
pub fn edge_scan(model: &Model, scenario: IncomeScenario, opening: Money) -> Vec<EdgeEffect> {
    edge_scan_width(model, scenario, opening, 1)
}

/// As [`edge_scan`], perturbing by every step from 1 to `width` years.
/// Perturbations that would make an event invalid are skipped. The result is
/// sorted by `|delta_peak_nominal|`, largest first; ties keep scan order.
pub fn edge_scan_width(model: &Model, scenario: IncomeScenario, opening: Money, width: u32) -> Vec<EdgeEffect> {
    let base_flows = yearly_flows(model);
    let base_required = required_from_flows(model, &base_flows, scenario.annual_income);
    let base_peak = shortfall_from_flows(model, &base_flows, scenario, opening).peak_nominal_shortfall;
    let horizon = model.horizon;

    let mut effects = Vec::new();
    for asset in &model.assets {
        for event in &asset.events {
            let base_count = event.occurrence_count(horizon.len());
            let without = subtract_event(&base_flows, event);
            for perturbation in perturbations(event, width) {
                let changed = perturbation.apply(event);
                let flows = add_event(&without, &changed);
                let required = required_from_flows(model, &flows, scenario.annual_income);
                let peak = shortfall_from_flows(model, &flows, scenario, opening).peak_nominal_shortfall;
                let count = changed.occurrence_count(horizon.len());
                effects.push(EdgeEffect {
                    asset: asset.name.clone(),
                    event: event.label.clone(),
                    perturbation,
                    delta_required_real: required - base_required,
                    delta_peak_nominal: peak - base_peak,
                    events_entering: count.saturating_sub(base_count),
                    events_leaving: base_count.saturating_sub(count),
                });
            }
        }
    }
    effects.sort_by(|a, b| {
        b.delta_peak_nominal
            .amount()
            .abs()
            .total_cmp(&a.delta_peak_nominal.amount().abs())
    });
    effects
}

fn perturbations(event: &RecurringEvent, width: u32) -> Vec<Perturbation> {
    let (period, offset) = (event.period_years, event.offset_years);
    let mut out = Vec::new();
    for step in 1..=width {
        if period > step {
            out.push(Perturbation::Period { from: period, to: period - step });
        }
        out.push(Perturbation::Period { from: period, to: period + step });
        if offset >= step {
            out.push(Perturbation::Offset { from: offset, to: offset - step });
        }
        out.push(Perturbation::Offset { from: offset, to: offset + step });
    }
    out
}

fn subtract_event(flows: &YearlyFlows, event: &RecurringEvent) -> YearlyFlows {
    let mut out = flows.clone();
    for (year, amount) in expand_event(event, flows.horizon()) {
        out.add(year, -amount);
    }
    out
}

fn add_event(flows: &YearlyFlows, event: &RecurringEvent) -> YearlyFlows {
    let mut out = flows.clone();
    for (year, amount) in expand_event(event, flows.horizon()) {
        out.add(year, amount);
    }
    out
}

/// Net present value at `base_year` of signed yearly flows.
pub fn npv(flows: &[(Year, Money)], base_year: Year, discount: Rate) -> Money {
    flows
        .iter()
        .map(|&(year, amount)| {
            debug_assert!(year >= base_year, "flow in {year} precedes base year {base_year}");
            amount * (1.0 + discount.value()).powi(-year.since(base_year))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscountMode {
    /// Discount each year's flow by `(1 + d)^-n`.
    Proper(Rate),
    /// Enter `-r` as the inflation rate, giving `(1 - r)^n`.
    SignFlipHack(Rate),
}

impl DiscountMode {
    pub fn rate(self) -> Rate {
        match self {
            DiscountMode::Proper(r) | DiscountMode::SignFlipHack(r) => r,
        }
    }

    /// Weight applied to amounts `years` after the base year.
    pub fn factor(self, years: u32) -> f64 {
        match self {
            DiscountMode::Proper(d) => discount_factor(d, years),
            DiscountMode::SignFlipHack(r) => (1.0 - r.value()).powi(years as i32),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DiscountMode::Proper(_) => "proper",
            DiscountMode::SignFlipHack(_) => "signflip",
        }
    }
}

/// Discounted projection.
///
/// In the returned records `real_balance` is always the undiscounted
/// base-year track. For [`DiscountMode::Proper`], `nominal_balance` is the
/// opening balance plus the cumulative discounted net flows and
/// `nominal_safety` is the un-inflated safety floor, since present values are
/// already in base-year money. For [`DiscountMode::SignFlipHack`] the nominal
/// row is the ordinary inflated row computed at inflation `-r`, exactly what
/// the spreadsheet trick produces.
pub fn dcf_project(model: &Model, scenario: IncomeScenario, opening: Money, mode: DiscountMode) -> ProjectionResult {
    let flows = yearly_flows(model);
    let real = real_track(&flows, scenario.annual_income, opening);
    let records = match mode {
        DiscountMode::Proper(_) => {
            let mut balance = opening;
            flows
                .iter()
                .zip(real)
                .enumerate()
                .map(|(n, ((year, expense), real_balance))| {
                    balance += (scenario.annual_income - expense) * mode.factor(n as u32);
                    YearRecord {
                        year,
                        real_balance,
                        nominal_balance: balance,
                        nominal_safety: model.safety_balance,
                        breach: balance < model.safety_balance,
                    }
                })
                .collect()
        }
        DiscountMode::SignFlipHack(r) => {
            let negated = Rate::new(-r.value()).expect("sign-flip rate must be below 1");
            inflate(model, &flows, &real, negated)
        }
    };
    ProjectionResult::from_records(scenario, Basis::Discounted(mode), records)
}

/// One point of an inflation sensitivity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityRow {
    pub inflation: Rate,
    pub scenario: ScenarioLabel,
    pub required_opening_real: Money,
    pub peak_nominal_shortfall: Money,
    pub binding_year: Option<Year>,
}

/// Re-evaluates both cash-required metrics at each inflation rate, for the
/// requested scenarios. Rows are ordered by grid position, then scenario.
pub fn inflation_sensitivity(
    model: &Model,
    grid: &[Rate],
    labels: &[ScenarioLabel],
    opening: Money,
) -> Vec<SensitivityRow> {
    let flows = yearly_flows(model);
    let scenarios = scenario_set(model);
    grid.par_iter()
        .map(|&inflation| {
            let mut variant = model.clone();
            variant.inflation = inflation;
            labels
                .iter()
                .map(|&label| {
                    let scenario = scenarios[label as usize];
                    let report = shortfall_from_flows(&variant, &flows, scenario, opening);
                    SensitivityRow {
                        inflation,
                        scenario: label,
                        required_opening_real: required_from_flows(&variant, &flows, scenario.annual_income),
                        peak_nominal_shortfall: report.peak_nominal_shortfall,
                        binding_year: report.binding_year,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Growth factor of the inflated row at `year`; exposed for reports.
pub fn inflation_factor(model: &Model, year: Year) -> f64 {
    growth_factor(model.inflation, year.since(model.horizon.start()).max(0) as u32)
}
