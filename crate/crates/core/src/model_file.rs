//! The plain-text model file.
//!
//! ```text
//! # comment
//! [model]
//! horizon_start = 2016
//! horizon_end = 2050
//! opening_balance = 110000
//! inflation = 0.02
//! safety_balance = 30000
//! income_central = 8000
//! income_low_mult = 0.5        # optional, default 0.5
//! income_high_mult = 1.5       # optional, default 1.5
//!
//! [asset "asset-one"]
//! market_value = 150000        # optional, default 0
//! event "refurbish" amount=18000 offset=4 period=30
//!
//! [oneoff "roof"]
//! amount = 5000
//! year = 2018
//!
//! [option "new-asset"]
//! amount = 40000
//! year = 2016
//! enabled = false
//! ```
//!
//! Amounts are whole pounds, rates are decimals. Names are double-quoted and
//! may use `\"` and `\\`. Unknown sections and keys are errors.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::money_time::{Horizon, Money, Rate, Year};
use crate::schedule::{AssetSchedule, Model, OneOffEvent, OptionToggle, RecurringEvent};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind} (at {token:?})")]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unknown section")]
    UnknownSection,
    #[error("unknown key")]
    UnknownKey,
    #[error("key given twice")]
    DuplicateKey,
    #[error("second [model] section")]
    DuplicateModel,
    #[error("duplicate asset name")]
    DuplicateAsset,
    #[error("missing [model] section")]
    MissingModel,
    #[error("missing required key {0}")]
    MissingKey(&'static str),
    #[error("not a whole-pound amount")]
    NotAnAmount,
    #[error("not a number")]
    NotANumber,
    #[error("not a non-negative whole number")]
    NotACount,
    #[error("not true or false")]
    NotABool,
    #[error("line outside any section")]
    OutsideSection,
    #[error("malformed line: {0}")]
    Malformed(&'static str),
    #[error("year outside horizon")]
    OutsideHorizon,
    #[error("{0}")]
    Invalid(String),
}

fn err(line: usize, token: &str, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line,
        token: token.to_string(),
        kind,
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Word(String),
    Quoted(String),
}

impl Token {
    fn text(&self) -> &str {
        match self {
            Token::Word(s) | Token::Quoted(s) => s,
        }
    }
}

/// Splits on whitespace, keeping quoted strings whole and dropping a trailing
/// `#` comment. `=` and brackets are left inside words.
fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            break;
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some(e @ ('"' | '\\')) => s.push(e),
                        _ => return Err(err(line_no, line, ParseErrorKind::Malformed("bad escape in quoted name"))),
                    },
                    Some(ch) => s.push(ch),
                    None => return Err(err(line_no, line, ParseErrorKind::Malformed("unterminated quote"))),
                }
            }
            tokens.push(Token::Quoted(s));
        } else {
            let mut s = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() || ch == '"' || ch == '#' {
                    break;
                }
                s.push(ch);
                chars.next();
            }
            tokens.push(Token::Word(s));
        }
    }
    Ok(tokens)
}

/// Splits `key = value`, `key=value` or `key =value` token runs.
fn key_value(line_no: usize, tokens: &[Token]) -> Result<(String, String), ParseError> {
    let joined: Vec<&str> = tokens
        .iter()
        .map(|t| match t {
            Token::Word(w) => Ok(w.as_str()),
            Token::Quoted(q) => Err(err(line_no, q, ParseErrorKind::Malformed("unexpected quoted value"))),
        })
        .collect::<Result<_, _>>()?;
    let text = joined.join(" ");
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| err(line_no, &text, ParseErrorKind::Malformed("expected key = value")))?;
    let (key, value) = (key.trim(), value.trim());
    if key.is_empty() || value.is_empty() || value.contains(char::is_whitespace) {
        return Err(err(line_no, &text, ParseErrorKind::Malformed("expected key = value")));
    }
    Ok((key.to_string(), value.to_string()))
}

fn parse_amount(line: usize, token: &str) -> Result<Money, ParseError> {
    token
        .parse::<i64>()
        .map(Money::pounds)
        .map_err(|_| err(line, token, ParseErrorKind::NotAnAmount))
}

fn parse_nonneg_amount(line: usize, token: &str) -> Result<Money, ParseError> {
    let amount = parse_amount(line, token)?;
    if amount.is_negative() {
        return Err(err(line, token, ParseErrorKind::Invalid("amount must not be negative".into())));
    }
    Ok(amount)
}

fn parse_number(line: usize, token: &str) -> Result<f64, ParseError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| err(line, token, ParseErrorKind::NotANumber))
}

fn parse_rate(line: usize, token: &str) -> Result<Rate, ParseError> {
    Rate::new(parse_number(line, token)?).map_err(|e| err(line, token, ParseErrorKind::Invalid(e.to_string())))
}

fn parse_count(line: usize, token: &str) -> Result<u32, ParseError> {
    token
        .parse::<u32>()
        .map_err(|_| err(line, token, ParseErrorKind::NotACount))
}

fn parse_year(line: usize, token: &str) -> Result<Year, ParseError> {
    let raw = token
        .parse::<i32>()
        .map_err(|_| err(line, token, ParseErrorKind::NotANumber))?;
    Year::new(raw).map_err(|e| err(line, token, ParseErrorKind::Invalid(e.to_string())))
}

fn parse_bool(line: usize, token: &str) -> Result<bool, ParseError> {
    match token {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(err(line, token, ParseErrorKind::NotABool)),
    }
}

#[derive(Default)]
struct ModelKeys {
    line: usize,
    horizon_start: Option<Year>,
    horizon_end: Option<Year>,
    opening_balance: Option<Money>,
    inflation: Option<Rate>,
    safety_balance: Option<Money>,
    income_central: Option<Money>,
    income_low_mult: Option<f64>,
    income_high_mult: Option<f64>,
}

/// A `[oneoff]` or `[option]` section being filled in.
struct Dated {
    line: usize,
    name: String,
    amount: Option<Money>,
    year: Option<Year>,
    enabled: Option<bool>,
}

impl Dated {
    fn new(line: usize, name: String) -> Self {
        Dated {
            line,
            name,
            amount: None,
            year: None,
            enabled: None,
        }
    }
}

enum Section {
    Model,
    Asset(usize),
    OneOff(usize),
    Option(usize),
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(err(line, key, ParseErrorKind::DuplicateKey));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses a model file into a validated [`Model`].
pub fn parse_model_file(text: &str) -> Result<Model, ParseError> {
    let mut keys: Option<ModelKeys> = None;
    let mut assets: Vec<(AssetSchedule, Option<Money>)> = Vec::new();
    let mut oneoffs: Vec<Dated> = Vec::new();
    let mut options: Vec<Dated> = Vec::new();
    let mut asset_names = HashSet::new();
    let mut section: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(line, raw)?;
        let Some(first) = tokens.first() else { continue };

        if let Token::Word(w) = first {
            if w.starts_with('[') {
                section = Some(parse_header(line, raw, &tokens, &mut keys, &mut assets, &mut asset_names, &mut oneoffs, &mut options)?);
                continue;
            }
        }

        let Some(current) = &section else {
            return Err(err(line, first.text(), ParseErrorKind::OutsideSection));
        };
        match current {
            Section::Model => {
                let (key, value) = key_value(line, &tokens)?;
                let m = keys.as_mut().expect("model section open");
                match key.as_str() {
                    "horizon_start" => set_once(&mut m.horizon_start, parse_year(line, &value)?, line, &key)?,
                    "horizon_end" => set_once(&mut m.horizon_end, parse_year(line, &value)?, line, &key)?,
                    "opening_balance" => set_once(&mut m.opening_balance, parse_amount(line, &value)?, line, &key)?,
                    "inflation" => set_once(&mut m.inflation, parse_rate(line, &value)?, line, &key)?,
                    "safety_balance" => {
                        set_once(&mut m.safety_balance, parse_nonneg_amount(line, &value)?, line, &key)?
                    }
                    "income_central" => set_once(&mut m.income_central, parse_amount(line, &value)?, line, &key)?,
                    "income_low_mult" => set_once(&mut m.income_low_mult, parse_number(line, &value)?, line, &key)?,
                    "income_high_mult" => {
                        set_once(&mut m.income_high_mult, parse_number(line, &value)?, line, &key)?
                    }
                    _ => return Err(err(line, &key, ParseErrorKind::UnknownKey)),
                }
            }
            Section::Asset(i) => {
                let (asset, market_value) = &mut assets[*i];
                if let Token::Word(w) = first {
                    if w == "event" {
                        asset.events.push(parse_event(line, &tokens)?);
                        continue;
                    }
                }
                let (key, value) = key_value(line, &tokens)?;
                match key.as_str() {
                    "market_value" => set_once(market_value, parse_nonneg_amount(line, &value)?, line, &key)?,
                    _ => return Err(err(line, &key, ParseErrorKind::UnknownKey)),
                }
            }
            Section::OneOff(i) => {
                let (key, value) = key_value(line, &tokens)?;
                let o = &mut oneoffs[*i];
                match key.as_str() {
                    "amount" => set_once(&mut o.amount, parse_nonneg_amount(line, &value)?, line, &key)?,
                    "year" => set_once(&mut o.year, parse_year(line, &value)?, line, &key)?,
                    _ => return Err(err(line, &key, ParseErrorKind::UnknownKey)),
                }
            }
            Section::Option(i) => {
                let (key, value) = key_value(line, &tokens)?;
                let o = &mut options[*i];
                match key.as_str() {
                    "amount" => set_once(&mut o.amount, parse_nonneg_amount(line, &value)?, line, &key)?,
                    "year" => set_once(&mut o.year, parse_year(line, &value)?, line, &key)?,
                    "enabled" => set_once(&mut o.enabled, parse_bool(line, &value)?, line, &key)?,
                    _ => return Err(err(line, &key, ParseErrorKind::UnknownKey)),
                }
            }
        }
    }

    let keys = keys.ok_or_else(|| err(0, "", ParseErrorKind::MissingModel))?;
    let at = keys.line;
    let missing = |name: &'static str| err(at, "[model]", ParseErrorKind::MissingKey(name));
    let start = keys.horizon_start.ok_or_else(|| missing("horizon_start"))?;
    let end = keys.horizon_end.ok_or_else(|| missing("horizon_end"))?;
    let horizon = Horizon::new(start, end).map_err(|e| err(at, "[model]", ParseErrorKind::Invalid(e.to_string())))?;

    let mut model = Model::empty(horizon);
    model.opening_balance = keys.opening_balance.ok_or_else(|| missing("opening_balance"))?;
    model.inflation = keys.inflation.ok_or_else(|| missing("inflation"))?;
    model.safety_balance = keys.safety_balance.ok_or_else(|| missing("safety_balance"))?;
    model.income_central = keys.income_central.ok_or_else(|| missing("income_central"))?;
    model.income_low_mult = keys.income_low_mult.unwrap_or(Model::DEFAULT_LOW_MULT);
    model.income_high_mult = keys.income_high_mult.unwrap_or(Model::DEFAULT_HIGH_MULT);

    model.assets = assets
        .into_iter()
        .map(|(asset, mv)| asset.with_market_value(mv.unwrap_or(Money::ZERO)))
        .collect();

    for o in oneoffs {
        let amount = o.amount.ok_or_else(|| err(o.line, &o.name, ParseErrorKind::MissingKey("amount")))?;
        let year = o.year.ok_or_else(|| err(o.line, &o.name, ParseErrorKind::MissingKey("year")))?;
        if !horizon.contains(year) {
            return Err(err(o.line, &year.to_string(), ParseErrorKind::OutsideHorizon));
        }
        model.oneoffs.push(OneOffEvent {
            label: o.name,
            amount,
            year,
        });
    }
    for o in options {
        let amount = o.amount.ok_or_else(|| err(o.line, &o.name, ParseErrorKind::MissingKey("amount")))?;
        let year = o.year.ok_or_else(|| err(o.line, &o.name, ParseErrorKind::MissingKey("year")))?;
        let enabled = o.enabled.ok_or_else(|| err(o.line, &o.name, ParseErrorKind::MissingKey("enabled")))?;
        if !horizon.contains(year) {
            return Err(err(o.line, &year.to_string(), ParseErrorKind::OutsideHorizon));
        }
        model.options.push(OptionToggle {
            name: o.name,
            amount,
            year,
            enabled,
        });
    }

    model
        .validate()
        .map_err(|e| err(at, "[model]", ParseErrorKind::Invalid(e.to_string())))?;
    Ok(model)
}

#[allow(clippy::too_many_arguments)]
fn parse_header(
    line: usize,
    raw: &str,
    tokens: &[Token],
    keys: &mut Option<ModelKeys>,
    assets: &mut Vec<(AssetSchedule, Option<Money>)>,
    asset_names: &mut HashSet<String>,
    oneoffs: &mut Vec<Dated>,
    options: &mut Vec<Dated>,
) -> Result<Section, ParseError> {
    match tokens {
        [Token::Word(w)] if w == "[model]" => {
            if keys.is_some() {
                return Err(err(line, w, ParseErrorKind::DuplicateModel));
            }
            *keys = Some(ModelKeys {
                line,
                ..Default::default()
            });
            Ok(Section::Model)
        }
        [Token::Word(open), Token::Quoted(name), Token::Word(close)] if close == "]" => {
            let kind = open
                .strip_prefix('[')
                .ok_or_else(|| err(line, open, ParseErrorKind::Malformed("bad section header")))?;
            if name.is_empty() {
                return Err(err(line, raw.trim(), ParseErrorKind::Malformed("empty section name")));
            }
            match kind {
                "asset" => {
                    if !asset_names.insert(name.clone()) {
                        return Err(err(line, name, ParseErrorKind::DuplicateAsset));
                    }
                    assets.push((AssetSchedule::new(name.clone(), Vec::new()), None));
                    Ok(Section::Asset(assets.len() - 1))
                }
                "oneoff" => {
                    oneoffs.push(Dated::new(line, name.clone()));
                    Ok(Section::OneOff(oneoffs.len() - 1))
                }
                "option" => {
                    options.push(Dated::new(line, name.clone()));
                    Ok(Section::Option(options.len() - 1))
                }
                _ => Err(err(line, kind, ParseErrorKind::UnknownSection)),
            }
        }
        _ => Err(err(line, raw.trim(), ParseErrorKind::UnknownSection)),
    }
}

fn parse_event(line: usize, tokens: &[Token]) -> Result<RecurringEvent, ParseError> {
    let label = match tokens.get(1) {
        Some(Token::Quoted(label)) => label.clone(),
        Some(other) => return Err(err(line, other.text(), ParseErrorKind::Malformed("event needs a quoted label"))),
        None => return Err(err(line, "event", ParseErrorKind::Malformed("event needs a quoted label"))),
    };
    let (mut amount, mut offset, mut period) = (None, None, None);
    for token in &tokens[2..] {
        let Token::Word(word) = token else {
            return Err(err(line, token.text(), ParseErrorKind::Malformed("unexpected quoted value")));
        };
        let (key, value) = word
            .split_once('=')
            .ok_or_else(|| err(line, word, ParseErrorKind::Malformed("expected key=value")))?;
        match key {
            "amount" => set_once(&mut amount, parse_nonneg_amount(line, value)?, line, key)?,
            "offset" => set_once(&mut offset, parse_count(line, value)?, line, key)?,
            "period" => {
                let p = parse_count(line, value)?;
                if p == 0 {
                    return Err(err(line, value, ParseErrorKind::Invalid("period must be at least 1".into())));
                }
                set_once(&mut period, p, line, key)?
            }
            _ => return Err(err(line, key, ParseErrorKind::UnknownKey)),
        }
    }
    Ok(RecurringEvent {
        label: label.clone(),
        amount: amount.ok_or_else(|| err(line, &label, ParseErrorKind::MissingKey("amount")))?,
        offset_years: offset.ok_or_else(|| err(line, &label, ParseErrorKind::MissingKey("offset")))?,
        period_years: period.ok_or_else(|| err(line, &label, ParseErrorKind::MissingKey("period")))?,
    })
}

struct Quoted<'a>(&'a str);

impl fmt::Display for Quoted<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('"')?;
        for c in self.0.chars() {
            if matches!(c, '"' | '\\') {
                f.write_char('\\')?;
            }
            f.write_char(c)?;
        }
        f.write_char('"')
    }
}

/// Writes `model` in the file format. Amounts are written as whole pounds.
pub fn serialize_model(model: &Model) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "[model]");
    let _ = writeln!(w, "horizon_start = {}", model.horizon.start());
    let _ = writeln!(w, "horizon_end = {}", model.horizon.end());
    let _ = writeln!(w, "opening_balance = {}", model.opening_balance.rounded());
    let _ = writeln!(w, "inflation = {}", model.inflation.value());
    let _ = writeln!(w, "safety_balance = {}", model.safety_balance.rounded());
    let _ = writeln!(w, "income_central = {}", model.income_central.rounded());
    let _ = writeln!(w, "income_low_mult = {}", model.income_low_mult);
    let _ = writeln!(w, "income_high_mult = {}", model.income_high_mult);
    for asset in &model.assets {
        let _ = writeln!(w, "\n[asset {}]", Quoted(&asset.name));
        let _ = writeln!(w, "market_value = {}", asset.market_value.rounded());
        for e in &asset.events {
            let _ = writeln!(
                w,
                "event {} amount={} offset={} period={}",
                Quoted(&e.label),
                e.amount.rounded(),
                e.offset_years,
                e.period_years
            );
        }
    }
    for o in &model.oneoffs {
        let _ = writeln!(w, "\n[oneoff {}]", Quoted(&o.label));
        let _ = writeln!(w, "amount = {}", o.amount.rounded());
        let _ = writeln!(w, "year = {}", o.year);
    }
    for o in &model.options {
        let _ = writeln!(w, "\n[option {}]", Quoted(&o.name));
        let _ = writeln!(w, "amount = {}", o.amount.rounded());
        let _ = writeln!(w, "year = {}", o.year);
        let _ = writeln!(w, "enabled = {}", o.enabled);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const DEMO: &str = include_str!("../../../demo/paper_partial.model");

    #[test]
    fn demo_parses() {
        let model = parse_model_file(DEMO).unwrap();
        assert_eq!(model.horizon.start().value(), 2016);
        assert_eq!(model.horizon.end().value(), 2050);
        assert_eq!(model.opening_balance, Money::pounds(110_000));
        assert_eq!(model.inflation.value(), 0.02);
        assert_eq!(model.safety_balance, Money::pounds(30_000));
        assert_eq!(model.income_central, Money::pounds(8_000));
        let asset = model.asset("asset-one").unwrap();
        assert_eq!(asset.market_value, Money::pounds(150_000));
        assert_eq!(asset.events.len(), 2);
        assert_eq!(asset.events[0], RecurringEvent::new("refurbish", Money::pounds(18_000), 4, 30).unwrap());
        assert_eq!(asset.events[1], RecurringEvent::new("replace", Money::pounds(50_000), 24, 24).unwrap());
        assert_eq!(model.options.len(), 1);
        assert!(!model.options[0].enabled);
    }

    #[test]
    fn demo_round_trips() {
        let model = parse_model_file(DEMO).unwrap();
        assert_eq!(parse_model_file(&serialize_model(&model)).unwrap(), model);
    }

    fn minimal(extra: &str) -> String {
        format!(
            "[model]\nhorizon_start = 2016\nhorizon_end = 2050\nopening_balance = 0\ninflation = 0.02\n\
             safety_balance = 0\nincome_central = 0\n{extra}"
        )
    }

    #[test]
    fn duplicate_asset_reported_at_second_definition() {
        let text = minimal("[asset \"asset-one\"]\n[asset \"asset-one\"]\n");
        let e = parse_model_file(&text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateAsset);
        assert_eq!(e.line, 9);
        assert_eq!(e.token, "asset-one");
    }

    #[test]
    fn negative_inflation_is_accepted() {
        let text = DEMO.replace("inflation = 0.02", "inflation = -0.06");
        assert_eq!(parse_model_file(&text).unwrap().inflation.value(), -0.06);
    }

    #[test]
    fn errors_name_line_and_token() {
        let e = parse_model_file(&minimal("colour = red\n")).unwrap_err();
        assert_eq!((e.line, e.kind, e.token.as_str()), (8, ParseErrorKind::UnknownKey, "colour"));

        let e = parse_model_file(&minimal("[budget]\n")).unwrap_err();
        assert_eq!((e.line, e.kind), (8, ParseErrorKind::UnknownSection));

        let e = parse_model_file(&minimal("[asset \"a\"]\nevent \"x\" amount=lots offset=1 period=2\n")).unwrap_err();
        assert_eq!((e.line, e.kind, e.token.as_str()), (9, ParseErrorKind::NotAnAmount, "lots"));

        let e = parse_model_file(&minimal("[oneoff \"roof\"]\namount = 5000\nyear = 2051\n")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::OutsideHorizon);
        assert_eq!(e.token, "2051");

        let e = parse_model_file("horizon_start = 2016\n").unwrap_err();
        assert_eq!((e.line, e.kind), (1, ParseErrorKind::OutsideSection));

        let e = parse_model_file("# nothing\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingModel);

        let e = parse_model_file(&minimal("inflation = 0.03\n")).unwrap_err();
        assert_eq!((e.line, e.kind), (8, ParseErrorKind::DuplicateKey));
    }

    #[test]
    fn quoted_names_keep_escapes_and_hashes() {
        let text = minimal("[asset \"roof \\\"north\\\" #2\"]  # trailing\nevent \"a b\" amount=1 offset=0 period=1\n");
        let model = parse_model_file(&text).unwrap();
        assert_eq!(model.assets[0].name, "roof \"north\" #2");
        assert_eq!(model.assets[0].events[0].label, "a b");
        assert_eq!(parse_model_file(&serialize_model(&model)).unwrap(), model);
    }

    fn arb_model() -> impl Strategy<Value = Model> {
        let event = ("[a-z \"\\\\#]{1,8}", 0i64..200_000, 0u32..40, 1u32..40)
            .prop_map(|(l, a, o, p)| RecurringEvent::new(l, Money::pounds(a), o, p).unwrap());
        let asset = ("[a-z0-9-]{1,6}", 0i64..500_000, prop::collection::vec(event, 0..4));
        (
            1990i32..2100,
            0i32..60,
            -500_000i64..500_000,
            -0.5f64..0.5,
            0i64..100_000,
            -50_000i64..50_000,
            0.0f64..1.0,
            1.0f64..3.0,
            prop::collection::vec(asset, 0..4),
            prop::collection::vec((0i64..90_000, 0i32..60, any::<bool>()), 0..3),
        )
            .prop_map(|(start, len, opening, infl, safety, income, low, high, assets, dated)| {
                let horizon =
                    Horizon::new(Year::new(start).unwrap(), Year::new(start + len).unwrap()).unwrap();
                let mut model = Model::empty(horizon);
                model.opening_balance = Money::pounds(opening);
                model.inflation = Rate::new(infl).unwrap();
                model.safety_balance = Money::pounds(safety);
                model.income_central = Money::pounds(income);
                model.income_low_mult = low;
                model.income_high_mult = high;
                for (i, (name, mv, events)) in assets.into_iter().enumerate() {
                    model.assets.push(
                        AssetSchedule::new(format!("{name}{i}"), events).with_market_value(Money::pounds(mv)),
                    );
                }
                for (i, (amount, offset, enabled)) in dated.into_iter().enumerate() {
                    let year = Year::new(start + offset.min(len)).unwrap();
                    model.oneoffs.push(OneOffEvent {
                        label: format!("one-off {i}"),
                        amount: Money::pounds(amount),
                        year,
                    });
                    model.options.push(OptionToggle {
                        name: format!("option {i}"),
                        amount: Money::pounds(amount),
                        year,
                        enabled,
                    });
                }
                model
            })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(model in arb_model()) {
            let text = serialize_model(&model);
            prop_assert_eq!(parse_model_file(&text).unwrap(), model);
        }
    }
}
