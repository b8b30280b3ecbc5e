//! Historical statutory accounts: identity checks, profit reconstruction,
//! return on capital employed and the cost of holding idle cash.

use std::io::Read;

use thiserror::Error;

use crate::audit::{Cited, Diagnostic, RuleId, Severity};
use crate::error::Error as DomainError;
use crate::money_time::{annualized_growth, growth_factor, real_rate, Money, Rate, Year};

/// Balance sheets are published rounded, so identities hold only to this.
pub const IDENTITY_TOLERANCE: Money = Money::pounds(1_000);

/// One year of balance-sheet data. Absent entries count as zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BalanceSheetYear {
    pub year: Option<Year>,
    pub tangible_assets: Option<Money>,
    pub stock: Option<Money>,
    pub debtors: Option<Money>,
    pub cash: Option<Money>,
    pub creditors_one_year: Option<Money>,
    pub creditors_long: Option<Money>,
    pub ie_reserve: Option<Money>,
    pub capital_reserve: Option<Money>,
    pub shareholders_funds: Option<Money>,
    /// As printed; published tables often drop the sign of a net liability.
    pub stated_net_current: Option<Money>,
    pub stated_total_assets: Option<Money>,
}

fn val(m: Option<Money>) -> Money {
    m.unwrap_or(Money::ZERO)
}

impl BalanceSheetYear {
    pub fn net_current(&self) -> Money {
        val(self.stock) + val(self.debtors) + val(self.cash) - val(self.creditors_one_year)
    }

    pub fn total_assets(&self) -> Money {
        val(self.tangible_assets) + self.net_current()
    }

    fn subject(&self) -> String {
        self.year.map(|y| y.to_string()).unwrap_or_default()
    }
}

fn identity(
    sheet: &BalanceSheetYear,
    rule: RuleId,
    (left_name, left): (&str, Money),
    (right_name, right): (&str, Money),
) -> Option<Diagnostic> {
    let gap = left - right;
    if gap.abs() <= IDENTITY_TOLERANCE {
        return None;
    }
    Some(Diagnostic {
        rule,
        severity: Severity::Error,
        subject: sheet.subject(),
        message: format!(
            "{}: {left_name} {left} != {right_name} {right} (gap {gap})",
            sheet.subject()
        ),
        citing: vec![
            (left_name.replace(' ', "_"), Cited::Money(left)),
            (right_name.replace(' ', "_"), Cited::Money(right)),
            ("gap".into(), Cited::Money(gap)),
        ],
    })
}

/// One diagnostic per accounting identity that fails by more than
/// [`IDENTITY_TOLERANCE`].
pub fn check_identities(sheet: &BalanceSheetYear) -> Vec<Diagnostic> {
    let total = sheet.total_assets();
    let mut out = Vec::new();
    out.extend(identity(
        sheet,
        RuleId::I1,
        ("total assets", total),
        (
            "funds plus long creditors",
            val(sheet.shareholders_funds) + val(sheet.creditors_long),
        ),
    ));
    out.extend(identity(
        sheet,
        RuleId::I2,
        ("reserves", val(sheet.ie_reserve) + val(sheet.capital_reserve)),
        ("shareholders funds", val(sheet.shareholders_funds)),
    ));
    if let Some(stated) = sheet.stated_total_assets {
        out.extend(identity(sheet, RuleId::I3, ("stated total assets", stated), ("computed total assets", total)));
    }
    if let Some(stated) = sheet.stated_net_current {
        out.extend(identity(
            sheet,
            RuleId::I4,
            ("stated net current", stated.abs()),
            ("computed net current", sheet.net_current().abs()),
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProfitComponents {
    /// Movement on the income and expenditure reserve over the period.
    pub ie_movement: Money,
    pub cumulative_depreciation: Money,
    /// Market value of fully depreciated assets.
    pub residual_asset_value: Money,
    /// Improvements expensed rather than capitalised.
    pub uncapitalised_property: Money,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfitReconstruction {
    pub components: ProfitComponents,
    pub period_years: u32,
    pub total: Money,
    pub per_annum: Money,
}

/// Profit before depreciation over `period_years`.
pub fn reconstruct_profit(components: ProfitComponents, period_years: u32) -> Result<ProfitReconstruction, DomainError> {
    if period_years == 0 {
        return Err(DomainError::ZeroYears);
    }
    let total = components.ie_movement
        + components.cumulative_depreciation
        + components.residual_asset_value
        + components.uncapitalised_property;
    Ok(ProfitReconstruction {
        components,
        period_years,
        total,
        per_annum: total / period_years as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roce {
    pub ratio: f64,
    pub nominal_annual: Rate,
    pub real_annual: Rate,
}

/// Growth of (adjusted) shareholders' funds, annualised nominal and real.
pub fn roce(start_funds: Money, end_funds_adjusted: Money, years: u32, inflation: Rate) -> Result<Roce, DomainError> {
    let nominal_annual = annualized_growth(start_funds, end_funds_adjusted, years)?;
    Ok(Roce {
        ratio: end_funds_adjusted / start_funds,
        nominal_annual,
        real_annual: real_rate(nominal_annual, inflation),
    })
}

/// Opportunity loss on idle cash that could have earned `real_loss_rate`:
/// `cash * ((1 + r)^years - 1)`.
///
/// The erosion form `cash * (1 - (1 + i)^-years)` is smaller (about £48k
/// against £68k for £133k over 15 years at 2.8%) and is not used here.
pub fn cash_drag(cash: Money, real_loss_rate: Rate, years: u32) -> Money {
    cash * (growth_factor(real_loss_rate, years) - 1.0)
}

#[derive(Debug, Error)]
pub enum SheetsError {
    #[error("line {line}: {source}")]
    Csv { line: u64, source: csv::Error },
    #[error("sheets table is empty")]
    Empty,
    #[error("line {line}: bad year column {token:?}")]
    BadYear { line: u64, token: String },
    #[error("line {line}: unknown field {token:?}")]
    UnknownField { line: u64, token: String },
    #[error("line {line}: field {field:?} appears twice")]
    DuplicateField { line: u64, field: String },
    #[error("line {line}, column {column}: {token:?} is not an amount")]
    BadAmount { line: u64, column: usize, token: String },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RowWidth { line: u64, expected: usize, found: usize },
}

/// Lowercase, runs of anything else collapsed to `_`.
fn normalise(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

fn field_slot<'a>(sheet: &'a mut BalanceSheetYear, field: &str) -> Option<&'a mut Option<Money>> {
    Some(match field {
        "tangible_assets" => &mut sheet.tangible_assets,
        "stock" => &mut sheet.stock,
        "debtors" => &mut sheet.debtors,
        "cash" => &mut sheet.cash,
        "one_year" | "creditors_one_year" => &mut sheet.creditors_one_year,
        "more_than_one_year" | "creditors_long" => &mut sheet.creditors_long,
        "income_and_expenditure" | "ie_reserve" => &mut sheet.ie_reserve,
        "capital_reserve" => &mut sheet.capital_reserve,
        "shareholders_funds" => &mut sheet.shareholders_funds,
        "net_current_assets_liabilities" | "net_current" => &mut sheet.stated_net_current,
        "total_assets" => &mut sheet.stated_total_assets,
        _ => return None,
    })
}

fn parse_amount(token: &str) -> Option<f64> {
    let cleaned: String = token.chars().filter(|c| !matches!(c, '£' | ',' | ' ')).collect();
    cleaned.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a column-per-year table: a header `field,<year>,<year>,...`
/// followed by one row per field. Labels are normalised to snake_case, so
/// `Tangible Assets` and `tangible_assets` are the same row. Blank cells are
/// absent values; `#` starts a comment line.
pub fn parse_sheets<R: Read>(input: R) -> Result<Vec<BalanceSheetYear>, SheetsError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|source| SheetsError::Csv { line: 1, source })?,
        None => return Err(SheetsError::Empty),
    };
    let header_line = header.position().map_or(1, |p| p.line());
    let mut sheets = header
        .iter()
        .skip(1)
        .map(|token| {
            let year = token
                .parse::<i32>()
                .ok()
                .and_then(|y| Year::new(y).ok())
                .ok_or_else(|| SheetsError::BadYear {
                    line: header_line,
                    token: token.to_string(),
                })?;
            Ok(BalanceSheetYear {
                year: Some(year),
                ..Default::default()
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut seen = std::collections::HashSet::new();
    for record in records {
        let line = reader_line(&record);
        let record = record.map_err(|source| SheetsError::Csv { line, source })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = normalise(&record[0]);
        if record.len() > sheets.len() + 1 {
            return Err(SheetsError::RowWidth {
                line,
                expected: sheets.len() + 1,
                found: record.len(),
            });
        }
        if field_slot(&mut BalanceSheetYear::default(), &field).is_none() {
            return Err(SheetsError::UnknownField {
                line,
                token: record[0].to_string(),
            });
        }
        if !seen.insert(field.clone()) {
            return Err(SheetsError::DuplicateField { line, field });
        }
        for (i, cell) in record.iter().enumerate().skip(1) {
            if cell.is_empty() {
                continue;
            }
            let amount = parse_amount(cell).ok_or_else(|| SheetsError::BadAmount {
                line,
                column: i + 1,
                token: cell.to_string(),
            })?;
            let slot = field_slot(&mut sheets[i - 1], &field).expect("field checked above");
            *slot = Some(Money::new(amount).expect("finite"));
        }
    }
    Ok(sheets)
}

fn reader_line(record: &Result<csv::StringRecord, csv::Error>) -> u64 {
    match record {
        Ok(r) => r.position().map_or(0, |p| p.line()),
        Err(e) => e.position().map_or(0, |p| p.line()),
    }
}
