//! The annual cash-flow engine.
//!
//! Balances are carried forward in base-year money: each year, including the
//! first, the opening balance is credited with the scenario income and debited
//! with that year's expenses in a single year-end posting. A separate nominal
//! row inflates every carried-forward balance, and the safety floor, by
//! `(1 + inflation)^(year - start)`. Negative balances are kept as they are.

use std::fmt;
use std::str::FromStr;

use crate::analysis::DiscountMode;
use crate::money_time::{growth_factor, Money, Rate, Year};
use crate::schedule::{yearly_flows, Model, YearlyFlows};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScenarioLabel {
    Low,
    Central,
    High,
}

impl ScenarioLabel {
    pub const ALL: [ScenarioLabel; 3] = [ScenarioLabel::Low, ScenarioLabel::Central, ScenarioLabel::High];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioLabel::Low => "low",
            ScenarioLabel::Central => "central",
            ScenarioLabel::High => "high",
        }
    }
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "low" => Ok(ScenarioLabel::Low),
            "central" => Ok(ScenarioLabel::Central),
            "high" => Ok(ScenarioLabel::High),
            other => Err(format!("unknown income scenario {other:?}")),
        }
    }
}

/// A constant per-annum income in base-year money.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncomeScenario {
    pub label: ScenarioLabel,
    pub annual_income: Money,
}

impl IncomeScenario {
    pub fn new(label: ScenarioLabel, annual_income: Money) -> Self {
        IncomeScenario { label, annual_income }
    }
}

/// Low, central and high income scenarios from the model's multipliers.
pub fn scenario_set(model: &Model) -> [IncomeScenario; 3] {
    let central = model.income_central;
    [
        IncomeScenario::new(ScenarioLabel::Low, central * model.income_low_mult),
        IncomeScenario::new(ScenarioLabel::Central, central),
        IncomeScenario::new(ScenarioLabel::High, central * model.income_high_mult),
    ]
}

pub fn scenario(model: &Model, label: ScenarioLabel) -> IncomeScenario {
    scenario_set(model)[label as usize]
}

/// How the comparison row of a [`ProjectionResult`] was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    /// `nominal_*` fields inflate the real track at this rate.
    Inflated(Rate),
    /// `nominal_*` fields hold the discounted balance and its safety floor.
    Discounted(DiscountMode),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearRecord {
    pub year: Year,
    pub real_balance: Money,
    pub nominal_balance: Money,
    pub nominal_safety: Money,
    pub breach: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub scenario: IncomeScenario,
    pub basis: Basis,
    pub records: Vec<YearRecord>,
    pub first_breach_year: Option<Year>,
}

impl ProjectionResult {
    pub(crate) fn from_records(scenario: IncomeScenario, basis: Basis, records: Vec<YearRecord>) -> Self {
        let first_breach_year = records.iter().find(|r| r.breach).map(|r| r.year);
        ProjectionResult {
            scenario,
            basis,
            records,
            first_breach_year,
        }
    }

    pub fn record(&self, year: Year) -> Option<&YearRecord> {
        self.records.iter().find(|r| r.year == year)
    }

    pub fn last(&self) -> &YearRecord {
        self.records.last().expect("horizon has at least one year")
    }

    pub fn any_breach(&self) -> bool {
        self.first_breach_year.is_some()
    }
}

/// Base-year balances after each year's posting, starting from `opening`.
pub(crate) fn real_track(flows: &YearlyFlows, income: Money, opening: Money) -> Vec<Money> {
    flows
        .as_slice()
        .iter()
        .scan(opening, |balance, expense| {
            *balance += income - *expense;
            Some(*balance)
        })
        .collect()
}

/// Inflates a real track and the safety floor at `inflation`, flagging
/// breaches on the real track.
pub(crate) fn inflate(
    model: &Model,
    flows: &YearlyFlows,
    real: &[Money],
    inflation: Rate,
) -> Vec<YearRecord> {
    flows
        .horizon()
        .years()
        .zip(real)
        .enumerate()
        .map(|(n, (year, &real_balance))| {
            let factor = growth_factor(inflation, n as u32);
            YearRecord {
                year,
                real_balance,
                nominal_balance: real_balance * factor,
                nominal_safety: model.safety_balance * factor,
                breach: real_balance < model.safety_balance,
            }
        })
        .collect()
}

/// Runs the model for one income scenario. `opening_override` replaces the
/// model's opening balance when given.
pub fn project(model: &Model, scenario: IncomeScenario, opening_override: Option<Money>) -> ProjectionResult {
    let flows = yearly_flows(model);
    project_flows(model, &flows, scenario, opening_override.unwrap_or(model.opening_balance))
}

pub(crate) fn project_flows(
    model: &Model,
    flows: &YearlyFlows,
    scenario: IncomeScenario,
    opening: Money,
) -> ProjectionResult {
    let real = real_track(flows, scenario.annual_income, opening);
    let records = inflate(model, flows, &real, model.inflation);
    ProjectionResult::from_records(scenario, Basis::Inflated(model.inflation), records)
}
