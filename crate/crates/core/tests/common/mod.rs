#![allow(dead_code)]

use std::path::PathBuf;

use capplan::{AssetSchedule, Horizon, Model, Money, OneOffEvent, OptionToggle, Rate, RecurringEvent, Year};
use rand::Rng;

pub fn demo_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../demo").join(name)
}

pub fn demo_model() -> Model {
    let text = std::fs::read_to_string(demo_path("paper_partial.model")).unwrap();
    capplan::parse_model_file(&text).unwrap()
}

/// Up to `max_assets` assets with up to four events each, horizons of at
/// most 60 years, plus a few one-offs and options.
pub fn random_model<R: Rng>(rng: &mut R, max_assets: usize) -> Model {
    let start = rng.gen_range(1950..2100);
    let len = rng.gen_range(1..=60);
    let horizon = Horizon::new(Year::new(start).unwrap(), Year::new(start + len - 1).unwrap()).unwrap();
    let mut model = Model::empty(horizon);
    model.opening_balance = Money::pounds(rng.gen_range(0..300_000));
    model.inflation = Rate::new(rng.gen_range(0.0..0.08)).unwrap();
    model.safety_balance = Money::pounds(rng.gen_range(0..60_000));
    model.income_central = Money::pounds(rng.gen_range(0..30_000));
    for a in 0..rng.gen_range(0..=max_assets) {
        let events = (0..rng.gen_range(0..=4))
            .map(|e| {
                RecurringEvent::new(
                    format!("e{e}"),
                    Money::pounds(rng.gen_range(0..120_000)),
                    rng.gen_range(0..70),
                    rng.gen_range(1..40),
                )
                .unwrap()
            })
            .collect();
        model.assets.push(AssetSchedule::new(format!("a{a}"), events));
    }
    for i in 0..rng.gen_range(0..3) {
        let year = Year::new(start + rng.gen_range(0..len)).unwrap();
        model.oneoffs.push(OneOffEvent {
            label: format!("o{i}"),
            amount: Money::pounds(rng.gen_range(0..50_000)),
            year,
        });
    }
    for i in 0..rng.gen_range(0..2) {
        let year = Year::new(start + rng.gen_range(0..len)).unwrap();
        model.options.push(OptionToggle {
            name: format!("p{i}"),
            amount: Money::pounds(rng.gen_range(0..50_000)),
            year,
            enabled: rng.gen_bool(0.5),
        });
    }
    model
}

/// Expenses per horizon year, worked out directly from the event
/// definitions without going through the library's expansion.
pub fn oracle_expenses(model: &Model) -> Vec<f64> {
    let start = model.horizon.start().value();
    let len = (model.horizon.end().value() - start + 1) as usize;
    let mut out = vec![0.0; len];
    for asset in &model.assets {
        for e in &asset.events {
            for (i, slot) in out.iter_mut().enumerate() {
                let i = i as u32;
                if i >= e.offset_years && (i - e.offset_years).is_multiple_of(e.period_years) {
                    *slot += e.amount.amount();
                }
            }
        }
    }
    for o in &model.oneoffs {
        out[(o.year.value() - start) as usize] += o.amount.amount();
    }
    for o in model.options.iter().filter(|o| o.enabled) {
        out[(o.year.value() - start) as usize] += o.amount.amount();
    }
    out
}

fn stays_above(expenses: &[f64], income: f64, opening: f64, safety: f64) -> bool {
    let mut balance = opening;
    expenses.iter().all(|x| {
        balance += income - x;
        balance >= safety
    })
}

/// Smallest non-negative opening cash keeping every year at or above the
/// safety floor, found by bisection.
pub fn bisection_required(model: &Model, income: f64) -> f64 {
    let expenses = oracle_expenses(model);
    let safety = model.safety_balance.amount();
    if stays_above(&expenses, income, 0.0, safety) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, safety + expenses.iter().sum::<f64>() + income.abs() * expenses.len() as f64 + 1.0);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if stays_above(&expenses, income, mid, safety) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
