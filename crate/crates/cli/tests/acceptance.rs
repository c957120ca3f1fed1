//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Runs against the library for the checks themselves and against the
//! built `dendrite` binary where the command line is the thing under test.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use dendrite_core::rational::frac;
use dendrite_core::separation::{
    case_bound_check, verify_case_bounds, verify_separation, CaseKind,
};
use dendrite_core::suite::{run_check, Check, RunConfig};
use dendrite_core::ternary::{digits_to_string, enumerate_tuples};
use dendrite_core::{DigitStream, Outcome, Point2, Rational, System, Word};

const BIN: &str = env!("CARGO_BIN_EXE_dendrite");

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let spent = start.elapsed();
    ensure(spent < limit, || {
        format!("took {spent:.2?}, limit {limit:?}")
    })?;
    Ok(spent)
}

fn dendrite(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(BIN)
        .args(args)
        .output()
        .map_err(|e| format!("cannot run {BIN}: {e}"))?;
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), stdout))
}

fn system(h: Rational) -> Result<System, String> {
    RunConfig {
        h,
        ..RunConfig::default()
    }
    .system()
    .map_err(|e| e.to_string())
}

fn check(config: &RunConfig, which: Check) -> Result<dendrite_core::VerificationReport, String> {
    let r = run_check(config, which).map_err(|e| e.to_string())?;
    ensure(r.result == Outcome::Pass, || {
        format!("{which} {}: {:?}", r.result, r.failures)
    })?;
    Ok(r)
}

fn digit_prefix() -> Verdict {
    let start = Instant::now();
    let (code, out) = dendrite(&["c-digits", "--count", "6"])?;
    ensure(code == 0 && out.trim() == "110200", || {
        format!("c-digits printed {:?} (exit {code})", out.trim())
    })?;
    let digits = DigitStream::canonical()
        .c_digits(10_000)
        .map_err(|e| e.to_string())?;
    let text = digits_to_string(&digits);
    let tuples = enumerate_tuples(6);
    for t in &tuples {
        let needle = digits_to_string(t);
        ensure(text.contains(&needle), || format!("{needle} missing"))?;
    }
    let spent = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "110200; {} tuples found ({spent:.2?})",
        tuples.len()
    ))
}

fn separation() -> Verdict {
    let start = Instant::now();
    let s = system(frac(2, 9))?;
    ensure(s.c().start() == 128, || "start precision is not 128".into())?;
    let r = verify_separation(&s, 8).map_err(|e| e.to_string())?;
    let spent = within(start, Duration::from_secs(60))?;
    ensure(r.items_checked == 9840, || {
        format!("{} words", r.items_checked)
    })?;
    ensure(r.result == Outcome::Pass, || format!("{:?}", r.failures))?;
    // margins are scaled-gap lower bound minus h²
    let m = r.min_margin.clone().ok_or("no margin")?;
    ensure(m > frac(0, 1), || format!("min margin {m}"))?;
    Ok(format!(
        "9840 words, min gap - 4/81 = {:.6} ({spent:.2?})",
        dendrite_core::rational::to_f64(&m)
    ))
}

fn case_bounds() -> Verdict {
    let s = system(frac(2, 9))?;
    let one = case_bound_check(&s, &"1".parse().unwrap()).map_err(|e| e.to_string())?;
    ensure(
        one.case.kind == CaseKind::One && one.bound == frac(4, 81) && one.holds,
        || format!("word 1: {one:?}"),
    )?;
    let eleven = case_bound_check(&s, &"11".parse().unwrap()).map_err(|e| e.to_string())?;
    ensure(
        eleven.case.kind == CaseKind::OneOne && eleven.bound == frac(2, 9) && eleven.holds,
        || format!("word 11: {eleven:?}"),
    )?;
    let r = verify_case_bounds(&s, 10).map_err(|e| e.to_string())?;
    ensure(r.result == Outcome::Pass, || format!("{:?}", r.failures))?;
    Ok(format!(
        "1 and 11 hold; {} required words to depth 10 hold",
        r.detail("required_words").unwrap_or("?")
    ))
}

fn disjointness() -> Verdict {
    let start = Instant::now();
    let mut config = RunConfig::default();
    config.set_depth(Check::Disjoint, 5);
    let r = check(&config, Check::Disjoint)?;
    let spent = within(start, Duration::from_secs(60))?;
    ensure(
        r.detail("triangles") == Some("364") && r.items_checked == 364 * 363 / 2,
        || {
            format!(
                "{} triangles, {} pairs",
                r.detail("triangles").unwrap_or("?"),
                r.items_checked
            )
        },
    )?;
    Ok(format!(
        "{} pairs, both strategies Disjoint ({spent:.2?})",
        r.items_checked
    ))
}

fn open_set() -> Verdict {
    let mut config = RunConfig::default();
    config.set_depth(Check::Osc, 3);
    let r = check(&config, Check::Osc)?;
    ensure(r.detail("hull_overlaps") == Some("1h"), || {
        format!("hull overlaps {:?}", r.detail("hull_overlaps"))
    })?;
    Ok(format!(
        "{} items; only first-level hull overlap is 1h, its images stay disjoint",
        r.items_checked
    ))
}

fn one_point() -> Verdict {
    let mut config = RunConfig::default();
    config.set_depth(Check::OnePoint, 6);
    let r = check(&config, Check::OnePoint)?;
    let expected = Point2::c_on_axis().to_string();
    ensure(r.detail("point_1h") == Some(expected.as_str()), || {
        format!("point_1h = {:?}", r.detail("point_1h"))
    })?;
    for n in 2..=6 {
        ensure(r.detail(&format!("witnesses_1h_{n}")).is_some(), || {
            format!("no 1h witnesses at depth {n}")
        })?;
    }
    let slack = r.min_margin.clone().ok_or("no shrink margin")?;
    ensure(slack >= frac(0, 1), || format!("shrink slack {slack}"))?;
    Ok(format!(
        "1h witnesses share {expected}; diameters halve per level"
    ))
}

fn tree() -> Verdict {
    let start = Instant::now();
    let mut config = RunConfig::default();
    config.set_depth(Check::Tree, 5);
    let r = check(&config, Check::Tree)?;
    let spent = within(start, Duration::from_secs(60))?;
    let want: Vec<String> = (1..=5u32).map(|n| (4u64.pow(n) - 1).to_string()).collect();
    ensure(r.detail("edges") == Some(want.join(",").as_str()), || {
        format!("edges {:?}", r.detail("edges"))
    })?;
    ensure(r.detail("depth1_edges") == Some("0-1,1-2,1-h"), || {
        format!("depth-1 edges {:?}", r.detail("depth1_edges"))
    })?;
    Ok(format!("edges {} ({spent:.2?})", want.join(",")))
}

fn density() -> Verdict {
    let mut config = RunConfig::default();
    config.set_depth(Check::Density, 6);
    let r = check(&config, Check::Density)?;
    ensure(
        r.items_checked == 64
            && r.detail("distinct_shifts") == Some("64")
            && r.detail("distinct_prefixes") == Some("64"),
        || format!("{} targets, details {:?}", r.items_checked, r.details),
    )?;
    Ok(format!(
        "64 targets certified within 3^-6, max shift {}",
        r.detail("max_shift").unwrap_or("?")
    ))
}

fn negative_control() -> Verdict {
    let s = system(frac(1, 3))?;
    let r = verify_separation(&s, 8).map_err(|e| e.to_string())?;
    ensure(r.result == Outcome::Fail, || format!("result {}", r.result))?;
    let m = r.min_margin.clone().ok_or("no margin")?;
    ensure(m < frac(0, 1), || format!("min margin {m} is not negative"))?;
    let worst = r.detail("min_word").unwrap_or("?").to_string();
    ensure(worst.parse::<Word>().is_ok(), || "no witness word".into())?;
    let first = r.failures[0]
        .split(" scaled_gap")
        .next()
        .unwrap_or_default();
    Ok(format!(
        "{} failing words, first: {first}",
        r.failures.len()
    ))
}

fn determinism() -> Verdict {
    let (code_a, a) = dendrite(&["verify", "all"])?;
    let (code_b, b) = dendrite(&["verify", "all"])?;
    ensure(code_a == 0 && code_b == 0, || {
        format!("exits {code_a}, {code_b}")
    })?;
    ensure(a == b, || "documents differ".into())?;
    ensure(a.starts_with("dendrite-report v1\n"), || {
        "bad header".into()
    })?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("digit prefix", digit_prefix),
        ("separation at h=2/9", separation),
        ("case bounds", case_bounds),
        ("pairwise disjointness", disjointness),
        ("open set condition", open_set),
        ("one-point intersection", one_point),
        ("dendrite adjacency", tree),
        ("post-critical density", density),
        ("negative control h=1/3", negative_control),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(note) => println!("PASS {:>2} {name}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
