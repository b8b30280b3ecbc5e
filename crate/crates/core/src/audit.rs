//! Machine-checkable review findings over a [`Model`].
//!
//! | rule | fires when                                                        | severity |
//! |------|-------------------------------------------------------------------|----------|
//! | R1   | inflation is negative (sign-flipped discounting)                  | Warning  |
//! | R2   | shifting an event by a year moves a cash-required metric a lot    | Warning  |
//! | R3   | an asset has a market value but no sale proceeds are modelled     | Warning  |
//! | R4   | central income is off from historical profit by a factor of two   | Error    |
//! | R5   | inflation is below the long-run floor                             | Warning  |
//!
//! R2 is evaluated on the expense-only stress case (no income, no opening
//! cash), where both cash-required metrics measure what it takes to fund the
//! schedule itself.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{edge_scan, peak_nominal_shortfall, required_opening_real};
use crate::money_time::{Money, Rate};
use crate::projection::{IncomeScenario, ScenarioLabel};
use crate::schedule::{expand_event, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    /// Total assets equal shareholders' funds plus long-term creditors.
    I1,
    /// Reserves sum to shareholders' funds.
    I2,
    /// Stated total assets match the computed total.
    I3,
    /// Stated net current assets match the computed magnitude.
    I4,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::I1 => "I1",
            RuleId::I2 => "I2",
            RuleId::I3 => "I3",
            RuleId::I4 => "I4",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "Warning",
            Severity::Error => "Error",
        })
    }
}

/// A value quoted by a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cited {
    Money(Money),
    Rate(Rate),
    Ratio(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub rule: RuleId,
    pub severity: Severity,
    /// Asset name, balance-sheet year, or empty for model-wide findings.
    pub subject: String,
    pub message: String,
    pub citing: Vec<(String, Cited)>,
}

/// `name=kind:value` pairs joined by `;`. Values use the shortest exact
/// decimal form so they parse back bit-for-bit.
pub fn format_citations(citing: &[(String, Cited)]) -> String {
    citing
        .iter()
        .map(|(name, value)| match value {
            Cited::Money(m) => format!("{name}=money:{}", m.amount()),
            Cited::Rate(r) => format!("{name}=rate:{}", r.value()),
            Cited::Ratio(x) => format!("{name}=ratio:{x}"),
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_citations(text: &str) -> Result<Vec<(String, Cited)>, String> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|pair| {
            let (name, rest) = pair.split_once('=').ok_or_else(|| format!("missing '=' in {pair:?}"))?;
            let (kind, value) = rest.split_once(':').ok_or_else(|| format!("missing ':' in {pair:?}"))?;
            let number = f64::from_str(value).map_err(|e| format!("{value:?}: {e}"))?;
            let cited = match kind {
                "money" => Cited::Money(Money::new(number).map_err(|e| e.to_string())?),
                "rate" => Cited::Rate(Rate::new(number).map_err(|e| e.to_string())?),
                "ratio" => Cited::Ratio(number),
                other => return Err(format!("unknown citation kind {other:?}")),
            };
            Ok((name.to_string(), cited))
        })
        .collect()
}

/// Attached to every audit report: management can postpone, reduce or avoid
/// capital actions, and the model only ever plays out a single replacement
/// strategy. Neither can be checked mechanically.
pub const STRATEGY_NOTE: &str = "note: the schedule assumes every asset is run to end of life and replaced like-for-like; \
options to postpone, reduce or avoid capital spending, or to sell and upgrade early, are not modelled";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    /// Absolute floor of the R2 threshold.
    pub edge_floor: Money,
    /// Fraction of the base metric used for the R2 threshold.
    pub edge_fraction: f64,
    /// R4 fires at or beyond this factor either way.
    pub divergence_factor: f64,
    /// R5 fires below this inflation rate.
    pub inflation_floor: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            edge_floor: Money::pounds(10_000),
            edge_fraction: 0.05,
            divergence_factor: 2.0,
            inflation_floor: 0.025,
        }
    }
}

pub fn audit_model(model: &Model, historical_per_annum: Option<Money>) -> Vec<Diagnostic> {
    audit_model_with(model, historical_per_annum, &AuditConfig::default())
}

/// Runs every rule; the result is sorted by rule id, then subject.
pub fn audit_model_with(model: &Model, historical_per_annum: Option<Money>, config: &AuditConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let inflation = model.inflation.value();

    if inflation < 0.0 {
        out.push(Diagnostic {
            rule: RuleId::R1,
            severity: Severity::Warning,
            subject: String::new(),
            message: format!(
                "inflation {} is negative: the inflated row now discounts by (1 - r)^n, not (1 + r)^-n",
                model.inflation
            ),
            citing: vec![("inflation".into(), Cited::Rate(model.inflation))],
        });
    }

    out.extend(edge_findings(model, config));

    for asset in model.assets.iter().filter(|a| a.market_value > Money::ZERO) {
        out.push(Diagnostic {
            rule: RuleId::R3,
            severity: Severity::Warning,
            subject: asset.name.clone(),
            message: format!(
                "{} has a market value of {} but no sale proceeds are modelled",
                asset.name, asset.market_value
            ),
            citing: vec![("market_value".into(), Cited::Money(asset.market_value))],
        });
    }

    if let Some(historical) = historical_per_annum {
        if let Some(ratio) = divergence(model.income_central, historical) {
            if ratio >= config.divergence_factor {
                out.push(Diagnostic {
                    rule: RuleId::R4,
                    severity: Severity::Error,
                    subject: String::new(),
                    message: format!(
                        "central income {} differs from historical {} per annum by a factor of {:.2}",
                        model.income_central, historical, ratio
                    ),
                    citing: vec![
                        ("income_central".into(), Cited::Money(model.income_central)),
                        ("historical_per_annum".into(), Cited::Money(historical)),
                        ("factor".into(), Cited::Ratio(ratio)),
                    ],
                });
            }
        }
    }

    if inflation < config.inflation_floor {
        let floor = Rate::new(config.inflation_floor).unwrap_or(Rate::ZERO);
        out.push(Diagnostic {
            rule: RuleId::R5,
            severity: Severity::Warning,
            subject: String::new(),
            message: format!(
                "inflation {} is below the long-run floor of {}; cash requirements are understated",
                model.inflation, floor
            ),
            citing: vec![
                ("inflation".into(), Cited::Rate(model.inflation)),
                ("floor".into(), Cited::Rate(floor)),
            ],
        });
    }

    out.sort_by(|a, b| (a.rule, &a.subject).cmp(&(b.rule, &b.subject)));
    out
}

/// `max(h/c, c/h)`; `None` when both are zero.
fn divergence(central: Money, historical: Money) -> Option<f64> {
    let (c, h) = (central.amount().abs(), historical.amount().abs());
    match (c == 0.0, h == 0.0) {
        (true, true) => None,
        (true, false) | (false, true) => Some(f64::INFINITY),
        (false, false) => Some((h / c).max(c / h)),
    }
}

fn edge_findings(model: &Model, config: &AuditConfig) -> Vec<Diagnostic> {
    let stress = IncomeScenario::new(ScenarioLabel::Central, Money::ZERO);
    let base_peak = peak_nominal_shortfall(model, stress, Money::ZERO).peak_nominal_shortfall;
    let base_required = required_opening_real(model, stress);
    let nominal_threshold = config.edge_floor.max(base_peak * config.edge_fraction);
    let real_threshold = config.edge_floor.max(base_required * config.edge_fraction);
    let effects = edge_scan(model, stress, Money::ZERO);

    let mut out = Vec::new();
    for asset in &model.assets {
        for event in &asset.events {
            // effects are already ordered by |delta_peak_nominal|
            let worst = effects.iter().find(|e| {
                e.asset == asset.name
                    && e.event == event.label
                    && (e.delta_peak_nominal.abs() >= nominal_threshold
                        || e.delta_required_real.abs() >= real_threshold)
            });
            let Some(effect) = worst else { continue };
            let last = expand_event(event, &model.horizon)
                .last()
                .map_or_else(|| "none".to_string(), |(y, _)| y.to_string());
            out.push(Diagnostic {
                rule: RuleId::R2,
                severity: Severity::Warning,
                subject: asset.name.clone(),
                message: format!(
                    "{}/{} (last occurrence {}): {} changes peak nominal shortfall by {} and required opening cash by {}; the horizon edge truncates this schedule",
                    asset.name,
                    event.label,
                    last,
                    effect.perturbation,
                    effect.delta_peak_nominal,
                    effect.delta_required_real
                ),
                citing: vec![
                    ("delta_peak_nominal".into(), Cited::Money(effect.delta_peak_nominal)),
                    ("delta_required_real".into(), Cited::Money(effect.delta_required_real)),
                    ("nominal_threshold".into(), Cited::Money(nominal_threshold)),
                    ("real_threshold".into(), Cited::Money(real_threshold)),
                ],
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::money_time::{Horizon, Year};
    use crate::schedule::{AssetSchedule, RecurringEvent};
    use proptest::prelude::*;

    fn horizon() -> Horizon {
        Horizon::new(Year::new(2016).unwrap(), Year::new(2050).unwrap()).unwrap()
    }

    fn demo_model() -> Model {
        let mut model = Model::empty(horizon());
        model.opening_balance = Money::pounds(110_000);
        model.inflation = Rate::new(0.02).unwrap();
        model.safety_balance = Money::pounds(30_000);
        model.income_central = Money::pounds(8_000);
        model.assets.push(
            AssetSchedule::new(
                "asset-one",
                vec![
                    RecurringEvent::new("refurbish", Money::pounds(18_000), 4, 30).unwrap(),
                    RecurringEvent::new("replace", Money::pounds(50_000), 24, 24).unwrap(),
                ],
            )
            .with_market_value(Money::pounds(150_000)),
        );
        model
    }

    fn rules(diags: &[Diagnostic]) -> Vec<RuleId> {
        diags.iter().map(|d| d.rule).collect()
    }

    #[test]
    fn demo_configuration() {
        let diags = audit_model(&demo_model(), Some(Money::pounds(18_050)));
        assert_eq!(rules(&diags), vec![RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5]);
        assert!(diags[0].message.contains("refurbish"));
        assert!(diags[0].message.contains("2050"));
        assert_eq!(diags[2].severity, Severity::Error);
        assert_eq!(diags[2].citing[2], ("factor".to_string(), Cited::Ratio(18_050.0 / 8_000.0)));
    }

    #[test]
    fn sign_flip_fires_r1() {
        let mut model = demo_model();
        model.inflation = Rate::new(-0.06).unwrap();
        let diags = audit_model(&model, Some(Money::pounds(18_050)));
        assert_eq!(diags[0].rule, RuleId::R1);
        assert_eq!(
            rules(&diags),
            vec![RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5]
        );
    }

    #[test]
    fn clean_model_is_clean() {
        let mut model = Model::empty(horizon());
        model.inflation = Rate::new(0.03).unwrap();
        assert!(audit_model(&model, None).is_empty());
    }

    #[test]
    fn divergence_is_symmetric() {
        let mut model = Model::empty(horizon());
        model.inflation = Rate::new(0.03).unwrap();
        model.income_central = Money::pounds(10_000);
        let over = audit_model(&model, Some(Money::pounds(20_000)));
        let under = audit_model(&model, Some(Money::pounds(5_000)));
        assert_eq!(rules(&over), vec![RuleId::R4]);
        assert_eq!(rules(&under), vec![RuleId::R4]);
        assert!(audit_model(&model, Some(Money::pounds(19_999))).is_empty());
        model.income_central = Money::ZERO;
        assert!(audit_model(&model, Some(Money::ZERO)).is_empty());
        assert_eq!(rules(&audit_model(&model, Some(Money::pounds(1)))), vec![RuleId::R4]);
    }

    #[test]
    fn diagnostics_sorted_by_asset() {
        let mut model = demo_model();
        let mut other = model.assets[0].clone();
        other.name = "a-first".into();
        model.assets.push(other);
        let diags = audit_model(&model, None);
        let r3: Vec<_> = diags.iter().filter(|d| d.rule == RuleId::R3).map(|d| d.subject.as_str()).collect();
        assert_eq!(r3, vec!["a-first", "asset-one"]);
    }

    #[test]
    fn citations_round_trip_examples() {
        let diags = audit_model(&demo_model(), Some(Money::pounds(18_050)));
        for d in diags {
            assert_eq!(parse_citations(&format_citations(&d.citing)).unwrap(), d.citing);
        }
        assert_eq!(parse_citations("").unwrap(), vec![]);
        assert!(parse_citations("x=weird:1").is_err());
    }

    proptest! {
        #[test]
        fn citations_round_trip(m in -1e9f64..1e9, r in -0.99f64..5.0, x in 0.0f64..1e6) {
            let citing = vec![
                ("a".to_string(), Cited::Money(Money::new(m).unwrap())),
                ("b".to_string(), Cited::Rate(Rate::new(r).unwrap())),
                ("c".to_string(), Cited::Ratio(x)),
            ];
            prop_assert_eq!(parse_citations(&format_citations(&citing)).unwrap(), citing);
        }
    }
}
