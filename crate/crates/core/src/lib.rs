//! Long-horizon capital asset cash-flow planning, with the analyses needed
//! to audit such a plan: required-cash goal seek, inflation sensitivity,
//! horizon edge effects, discounted cash flow, historical return on capital
//! and rule-based diagnostics.

pub mod analysis;
pub mod audit;
pub mod error;
pub mod history;
pub mod model_file;
pub mod money_time;
pub mod projection;
pub mod report;
pub mod schedule;

pub use analysis::{
    dcf_project, edge_scan, edge_scan_width, inflation_sensitivity, npv, peak_nominal_shortfall,
    required_opening_real, DiscountMode, EdgeEffect, Perturbation, SensitivityRow, ShortfallReport,
};
pub use audit::{audit_model, audit_model_with, AuditConfig, Cited, Diagnostic, RuleId, Severity};
pub use error::{Error, Result};
pub use history::{
    cash_drag, check_identities, parse_sheets, reconstruct_profit, roce, BalanceSheetYear, ProfitComponents,
    ProfitReconstruction, Roce,
};
pub use model_file::{parse_model_file, serialize_model, ParseError};
pub use money_time::{
    annualized_growth, discount_factor, growth_factor, nominal_rate, real_rate, Horizon, Money, MoneyConvention,
    Rate, Year,
};
pub use projection::{project, scenario, scenario_set, IncomeScenario, ProjectionResult, ScenarioLabel, YearRecord};
pub use report::{emit_report, HistoryReport, Report, ReportFormat};
pub use schedule::{expand_event, yearly_flows, AssetSchedule, Model, OneOffEvent, OptionToggle, RecurringEvent};
