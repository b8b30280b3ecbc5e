//! Maintenance and replacement schedules and their expansion into yearly
//! expense flows.
//!
//! A recurring event first falls `offset_years` after the horizon start and
//! then every `period_years`. Occurrences past the horizon end are dropped
//! without notice; the audit module is what reports that truncation.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::money_time::{Horizon, Money, Rate, Year};

/// A periodic expense, in base-year money.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurringEvent {
    pub label: String,
    pub amount: Money,
    /// Years after the horizon start to the first occurrence.
    pub offset_years: u32,
    /// Years between subsequent occurrences.
    pub period_years: u32,
}

impl RecurringEvent {
    pub fn new(label: impl Into<String>, amount: Money, offset_years: u32, period_years: u32) -> Result<Self> {
        let event = RecurringEvent {
            label: label.into(),
            amount,
            offset_years,
            period_years,
        };
        event.validate()?;
        Ok(event)
    }

    pub fn validate(&self) -> Result<()> {
        if self.amount.is_negative() {
            return Err(Error::Negative {
                what: "event amount",
                value: self.amount.amount(),
            });
        }
        if self.period_years == 0 {
            return Err(Error::ZeroPeriod);
        }
        Ok(())
    }

    /// Occurrences inside a horizon of `horizon_len` years.
    pub fn occurrence_count(&self, horizon_len: usize) -> usize {
        let offset = self.offset_years as usize;
        if offset >= horizon_len {
            0
        } else {
            (horizon_len - 1 - offset) / self.period_years as usize + 1
        }
    }
}

/// A single expense in a given year.
#[derive(Debug, Clone, PartialEq)]
pub struct OneOffEvent {
    pub label: String,
    pub amount: Money,
    pub year: Year,
}

/// The events belonging to one asset, plus its current fair market value.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetSchedule {
    pub name: String,
    pub events: Vec<RecurringEvent>,
    pub market_value: Money,
}

impl AssetSchedule {
    pub fn new(name: impl Into<String>, events: Vec<RecurringEvent>) -> Self {
        AssetSchedule {
            name: name.into(),
            events,
            market_value: Money::ZERO,
        }
    }

    pub fn with_market_value(mut self, value: Money) -> Self {
        self.market_value = value;
        self
    }
}

/// A switchable expense, e.g. buying an additional asset.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionToggle {
    pub name: String,
    pub amount: Money,
    pub year: Year,
    pub enabled: bool,
}

/// A complete planning scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub horizon: Horizon,
    pub opening_balance: Money,
    pub inflation: Rate,
    /// Minimum cash floor, in base-year money.
    pub safety_balance: Money,
    /// Central per-annum income, in base-year money.
    pub income_central: Money,
    pub income_low_mult: f64,
    pub income_high_mult: f64,
    pub assets: Vec<AssetSchedule>,
    pub oneoffs: Vec<OneOffEvent>,
    pub options: Vec<OptionToggle>,
}

impl Model {
    pub const DEFAULT_LOW_MULT: f64 = 0.5;
    pub const DEFAULT_HIGH_MULT: f64 = 1.5;

    /// A model with no assets, one-offs or options.
    pub fn empty(horizon: Horizon) -> Self {
        Model {
            horizon,
            opening_balance: Money::ZERO,
            inflation: Rate::ZERO,
            safety_balance: Money::ZERO,
            income_central: Money::ZERO,
            income_low_mult: Self::DEFAULT_LOW_MULT,
            income_high_mult: Self::DEFAULT_HIGH_MULT,
            assets: Vec::new(),
            oneoffs: Vec::new(),
            options: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.safety_balance.is_negative() {
            return Err(Error::Negative {
                what: "safety balance",
                value: self.safety_balance.amount(),
            });
        }
        let (low, high) = (self.income_low_mult, self.income_high_mult);
        if !(low.is_finite() && high.is_finite() && low <= 1.0 && 1.0 <= high) {
            return Err(Error::BadMultipliers { low, high });
        }
        let mut names = HashSet::new();
        for asset in &self.assets {
            if asset.name.is_empty() {
                return Err(Error::EmptyAssetName);
            }
            if !names.insert(asset.name.as_str()) {
                return Err(Error::DuplicateAsset(asset.name.clone()));
            }
            if asset.market_value.is_negative() {
                return Err(Error::Negative {
                    what: "market value",
                    value: asset.market_value.amount(),
                });
            }
            for event in &asset.events {
                event.validate()?;
            }
        }
        for oneoff in &self.oneoffs {
            self.check_in_horizon(format!("one-off {:?}", oneoff.label), oneoff.year)?;
            if oneoff.amount.is_negative() {
                return Err(Error::Negative {
                    what: "one-off amount",
                    value: oneoff.amount.amount(),
                });
            }
        }
        for option in &self.options {
            self.check_in_horizon(format!("option {:?}", option.name), option.year)?;
            if option.amount.is_negative() {
                return Err(Error::Negative {
                    what: "option amount",
                    value: option.amount.amount(),
                });
            }
        }
        Ok(())
    }

    fn check_in_horizon(&self, what: String, year: Year) -> Result<()> {
        if self.horizon.contains(year) {
            Ok(())
        } else {
            Err(Error::OutsideHorizon {
                what,
                year: year.value(),
                start: self.horizon.start().value(),
                end: self.horizon.end().value(),
            })
        }
    }

    pub fn asset(&self, name: &str) -> Option<&AssetSchedule> {
        self.assets.iter().find(|a| a.name == name)
    }

    pub fn asset_mut(&mut self, name: &str) -> Option<&mut AssetSchedule> {
        self.assets.iter_mut().find(|a| a.name == name)
    }

    pub fn set_option(&mut self, name: &str, enabled: bool) -> bool {
        match self.options.iter_mut().find(|o| o.name == name) {
            Some(option) => {
                option.enabled = enabled;
                true
            }
            None => false,
        }
    }
}

/// Years in which `event` falls inside `horizon`, ascending, each carrying
/// the event amount.
pub fn expand_event(event: &RecurringEvent, horizon: &Horizon) -> Vec<(Year, Money)> {
    let count = event.occurrence_count(horizon.len());
    (0..count)
        .filter_map(|k| horizon.year_at(event.offset_years as usize + k * event.period_years as usize))
        .map(|year| (year, event.amount))
        .collect()
}

/// Total expense per horizon year, in base-year money.
#[derive(Debug, Clone, PartialEq)]
pub struct YearlyFlows {
    horizon: Horizon,
    expense: Vec<Money>,
}

impl YearlyFlows {
    pub fn zeros(horizon: Horizon) -> Self {
        YearlyFlows {
            horizon,
            expense: vec![Money::ZERO; horizon.len()],
        }
    }

    pub fn horizon(&self) -> &Horizon {
        &self.horizon
    }

    /// Expense in `year`; zero outside the horizon.
    pub fn get(&self, year: Year) -> Money {
        self.horizon
            .index_of(year)
            .map_or(Money::ZERO, |i| self.expense[i])
    }

    /// Expenses indexed from the horizon start.
    pub fn as_slice(&self) -> &[Money] {
        &self.expense
    }

    pub fn iter(&self) -> impl Iterator<Item = (Year, Money)> + '_ {
        self.horizon.years().zip(self.expense.iter().copied())
    }

    pub fn total(&self) -> Money {
        self.expense.iter().sum()
    }

    pub(crate) fn add(&mut self, year: Year, amount: Money) {
        if let Some(i) = self.horizon.index_of(year) {
            self.expense[i] += amount;
        }
    }
}

/// Sums every expanded recurring event, one-off and enabled option per year.
pub fn yearly_flows(model: &Model) -> YearlyFlows {
    let mut flows = YearlyFlows::zeros(model.horizon);
    for event in model.assets.iter().flat_map(|a| &a.events) {
        for (year, amount) in expand_event(event, &model.horizon) {
            flows.add(year, amount);
        }
    }
    for oneoff in &model.oneoffs {
        flows.add(oneoff.year, oneoff.amount);
    }
    for option in model.options.iter().filter(|o| o.enabled) {
        flows.add(option.year, option.amount);
    }
    flows
}
