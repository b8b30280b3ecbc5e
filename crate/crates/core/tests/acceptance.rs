//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use capplan::analysis::{dcf_project, edge_scan, peak_nominal_shortfall, required_opening_real, DiscountMode, Perturbation};
use capplan::history::{cash_drag, check_identities, parse_sheets, reconstruct_profit, roce, ProfitComponents};
use capplan::projection::{scenario_set, IncomeScenario, ScenarioLabel};
use capplan::{audit_model, yearly_flows, Money, Rate, RuleId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bisection_required, demo_model, demo_path, random_model};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn rate(r: f64) -> Rate {
    Rate::new(r).unwrap()
}

fn table2_components() -> ProfitComponents {
    ProfitComponents {
        ie_movement: Money::pounds(25_000),
        cumulative_depreciation: Money::pounds(126_000),
        residual_asset_value: Money::pounds(150_000),
        uncapitalised_property: Money::pounds(60_000),
    }
}

fn profit_reconstruction() -> Outcome {
    let r = reconstruct_profit(table2_components(), 20).unwrap();
    let runs = 1_000;
    let started = Instant::now();
    for _ in 0..runs {
        std::hint::black_box(reconstruct_profit(std::hint::black_box(table2_components()), 20).unwrap());
    }
    let per_call = started.elapsed() / runs;
    let exact = r.total == Money::pounds(361_000) && r.per_annum == Money::pounds(18_050);
    check(
        exact && per_call < Duration::from_millis(1),
        format!("total {}, per annum {}, {per_call:?} per call", r.total, r.per_annum),
        format!("total {}, per annum {}, {per_call:?} per call", r.total, r.per_annum),
    )
}

fn balance_sheet_identities() -> Outcome {
    let text = std::fs::read_to_string(demo_path("table1.sheets")).unwrap();
    let sheets = parse_sheets(text.as_bytes()).map_err(|e| e.to_string())?;
    let findings: Vec<_> = sheets.iter().flat_map(check_identities).collect();
    check(
        sheets.len() == 4 && findings.is_empty(),
        format!("{} columns, no findings", sheets.len()),
        format!("{} columns, findings {:?}", sheets.len(), findings),
    )
}

fn return_on_capital() -> Outcome {
    let r = roce(Money::pounds(201_000), Money::pounds(574_000), 20, rate(0.02)).unwrap();
    let ratio_pct = r.ratio * 100.0;
    let nominal_pct = r.nominal_annual.value() * 100.0;
    let msg = format!("ratio {ratio_pct:.2}%, nominal {nominal_pct:.3}% pa");
    check((ratio_pct - 285.0).abs() <= 1.0 && (nominal_pct - 5.4).abs() <= 0.1, msg.clone(), msg)
}

fn idle_cash() -> Outcome {
    let loss = cash_drag(Money::pounds(133_000), rate(0.028), 15);
    let msg = format!("loss {loss}");
    check((loss.amount() - 68_300.0).abs() <= 1_000.0, msg.clone(), msg)
}

fn horizon_edge() -> Outcome {
    let model = demo_model();
    let stress = IncomeScenario::new(ScenarioLabel::Central, Money::ZERO);
    let effects = edge_scan(&model, stress, Money::ZERO);
    let effect = effects
        .iter()
        .find(|e| e.event == "refurbish" && e.perturbation == Perturbation::Period { from: 30, to: 31 })
        .ok_or("no refurbish period 30 -> 31 row")?;
    let delta = effect.delta_peak_nominal.amount();
    let msg = format!("delta peak nominal {delta:.2}");
    check((delta + 35_294.0).abs() <= 50.0, msg.clone(), msg)
}

fn schedule_expansion() -> Outcome {
    let model = demo_model();
    let got: BTreeMap<i32, Money> = yearly_flows(&model)
        .iter()
        .filter(|(_, m)| *m != Money::ZERO)
        .map(|(y, m)| (y.value(), m))
        .collect();
    let want: BTreeMap<i32, Money> =
        [(2020, 18_000), (2040, 50_000), (2050, 18_000)].into_iter().map(|(y, m)| (y, Money::pounds(m))).collect();
    let show = |m: &BTreeMap<i32, Money>| m.iter().map(|(y, a)| format!("{y} {a}")).collect::<Vec<_>>().join(", ");
    check(got == want, show(&got), format!("got {}, want {}", show(&got), show(&want)))
}

fn scenarios() -> Outcome {
    let incomes: Vec<Money> = scenario_set(&demo_model()).iter().map(|s| s.annual_income).collect();
    let want = vec![Money::pounds(4_000), Money::pounds(8_000), Money::pounds(12_000)];
    let msg = incomes.iter().map(Money::to_string).collect::<Vec<_>>().join(" / ");
    check(incomes == want, msg.clone(), msg)
}

fn discount_gap() -> Outcome {
    let proper = DiscountMode::Proper(rate(0.06)).factor(24);
    let hack = DiscountMode::SignFlipHack(rate(0.06)).factor(24);
    let factors_ok = (proper - 0.2470).abs() <= 1e-4 && (hack - 0.2265).abs() <= 1e-4;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut violations = 0;
    for _ in 0..1_000 {
        let d = rate(rng.gen_range(0.001..0.5));
        let n = rng.gen_range(0..=100);
        if DiscountMode::SignFlipHack(d).factor(n) > DiscountMode::Proper(d).factor(n) {
            violations += 1;
        }
    }
    let msg = format!("proper {proper:.6}, sign-flip {hack:.6}, {violations} of 1000 pairs with hack > proper");
    check(factors_ok && violations == 0, msg.clone(), msg)
}

fn dcf_health() -> Outcome {
    let model = demo_model();
    let s = IncomeScenario::new(ScenarioLabel::Central, Money::pounds(18_000));
    let result = dcf_project(&model, s, Money::pounds(110_000), DiscountMode::Proper(rate(0.06)));
    let end = result.last().nominal_balance;
    let msg = format!("end {end}, first breach {:?}", result.first_breach_year);
    check(
        !result.any_breach() && (end.amount() - 357_500.0).abs() <= 500.0,
        msg.clone(),
        msg,
    )
}

fn bisection_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let started = Instant::now();
    let models = 600;
    let mut worst = 0.0f64;
    for _ in 0..models {
        let model = random_model(&mut rng, 10);
        let label = ScenarioLabel::ALL[rng.gen_range(0..3)];
        let s = scenario_set(&model)[label as usize];
        let got = required_opening_real(&model, s).amount();
        let want = bisection_required(&model, s.annual_income.amount());
        worst = worst.max((got - want).abs());
    }
    let elapsed = started.elapsed();
    let msg = format!("{models} models, worst gap £{worst:.6}, {elapsed:?}");
    check(worst <= 0.01 && elapsed < Duration::from_secs(10), msg.clone(), msg)
}

fn scaling_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut compared, mut worst) = (0, 0.0f64);
    for _ in 0..2_000 {
        let mut model = random_model(&mut rng, 6);
        model.opening_balance = Money::ZERO;
        let s = IncomeScenario::new(ScenarioLabel::Central, Money::pounds(rng.gen_range(0..10_000)));
        model.inflation = rate(0.02);
        let at2 = peak_nominal_shortfall(&model, s, Money::ZERO);
        model.inflation = rate(0.03);
        let at3 = peak_nominal_shortfall(&model, s, Money::ZERO);
        let (Some(t2), Some(t3)) = (at2.binding_year, at3.binding_year) else { continue };
        if t2 != t3 {
            continue;
        }
        let n = t2.since(model.horizon.start());
        let expected = (1.03f64 / 1.02).powi(n);
        let ratio = at3.peak_nominal_shortfall / at2.peak_nominal_shortfall;
        worst = worst.max((ratio / expected - 1.0).abs());
        compared += 1;
    }
    let msg = format!("{compared} models with a shared binding year, worst relative error {worst:.2e}");
    check(compared >= 500 && worst <= 1e-9, msg.clone(), msg)
}

fn audit_regression() -> Outcome {
    let historical = reconstruct_profit(table2_components(), 20).unwrap().per_annum;
    let mut model = demo_model();
    let rules = |m: &capplan::Model| audit_model(m, Some(historical)).iter().map(|d| d.rule).collect::<Vec<_>>();
    let base = rules(&model);
    model.inflation = rate(-0.06);
    let hack = rules(&model);
    let msg = format!("configured {base:?}, sign-flipped {hack:?}");
    check(
        base == [RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5]
            && hack == [RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5],
        msg.clone(),
        msg,
    )
}

fn cli_determinism() -> Outcome {
    let model = demo_path("paper_partial.model");
    let sheets = demo_path("table1.sheets");
    let model = model.to_str().unwrap();
    let sheets = sheets.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["project", "--model", model],
        vec!["solve", "--model", model],
        vec!["shortfall", "--model", model, "--opening", "0"],
        vec!["edge-scan", "--model", model, "--opening", "0", "--income-override", "0"],
        vec!["sensitivity", "--model", model, "--inflation-grid", "0.01,0.02,0.03,0.04"],
        vec!["dcf", "--model", model, "--discount", "0.06"],
        vec!["dcf", "--model", model, "--discount", "0.06", "--mode", "signflip"],
        vec!["history", "--sheets", sheets],
        vec!["audit", "--model", model, "--historical-per-annum", "18050"],
    ];
    for args in &invocations {
        let run = || Command::new(env!("CARGO_BIN_EXE_capplan")).args(args).output().unwrap();
        let (a, b) = (run(), run());
        if !a.status.success() || a.stdout.is_empty() || a.stdout != b.stdout {
            return Err(format!("{} differs or failed ({})", args[0], a.status));
        }
    }
    Ok(format!("{} invocations byte-identical", invocations.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("profit reconstruction", profit_reconstruction),
        ("balance sheet identities", balance_sheet_identities),
        ("return on capital", return_on_capital),
        ("idle cash loss", idle_cash),
        ("horizon edge effect", horizon_edge),
        ("schedule expansion", schedule_expansion),
        ("income scenarios", scenarios),
        ("discounting gap", discount_gap),
        ("discounted health", dcf_health),
        ("bisection oracle", bisection_oracle),
        ("inflation scaling law", scaling_law),
        ("audit regression", audit_regression),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
