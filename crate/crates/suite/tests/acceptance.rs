//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! line per criterion and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lp_certify::series::{section, CoefficientSequence, FamilySpec};
use lp_certify::zeros::locate_zeros;
use lp_certify::Precision;
use lp_certify_cli::{run_with_env, validate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 0x1A6_2EE5;

struct Verdict {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

/// One pass over the criteria; `outputs` collects every JSON document produced.
#[derive(Default)]
struct Suite {
    outputs: Vec<String>,
    verdicts: Vec<Verdict>,
    timed: bool,
}

impl Suite {
    fn cli(&mut self, args: &[&str]) -> (i32, Value) {
        let mut argv = vec!["lp-certify"];
        argv.extend_from_slice(args);
        let out = run_with_env(argv, None);
        let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: not JSON ({e})"));
        validate(&v).unwrap_or_else(|e| panic!("{args:?}: schema violation: {e}"));
        self.outputs.push(out.stdout);
        (out.code, v)
    }

    fn record(&mut self, id: u32, title: &'static str, pass: bool, detail: String) {
        self.verdicts.push(Verdict { id, title, pass, detail });
    }

    fn within(&self, elapsed: Duration, limit: Duration) -> bool {
        !self.timed || elapsed <= limit
    }
}

fn quotients(q: &[f64]) -> String {
    serde_json::json!({"family": "quotients", "a0": 1.0, "a1": 1.0, "q": q}).to_string()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn q_infinity(s: &mut Suite) {
    let t = Instant::now();
    let (code, v) = s.cli(&["constants", "q-inf", "--tol", "1e-6"]);
    let elapsed = t.elapsed();
    let value = f(&v["result"]["value"]);
    let pass = code == 0 && (value - 3.233_636_66).abs() <= 1e-6 && s.within(elapsed, Duration::from_secs(30));
    s.record(1, "q_inf reproduction", pass, format!("q_inf = {value:.10}, {:.1} s", elapsed.as_secs_f64()));
}

fn section_constants(s: &mut Suite) {
    let t = Instant::now();
    let (code, v) = s.cli(&["constants", "c-n", "--n", "2..3", "--tol", "1e-8"]);
    let consts = v["result"]["constants"].as_array().cloned().unwrap_or_default();
    let c = |i: usize| consts.get(i).map(|x| f(&x["c_n"]["value"])).unwrap_or(f64::NAN);
    let (c2, c3) = (c(0), c(1));
    let values_ok = code == 0 && (c2 - 4.0).abs() <= 1e-8 && (c3 - 3.0).abs() <= 1e-8;

    let (code, v) = s.cli(&["constants", "interleaving", "--n-max", "12", "--tol", "1e-9"]);
    let elapsed = t.elapsed();
    let relations: Vec<Value> = v["result"]["relations"]
        .as_array()
        .map(|rs| rs.iter().filter(|r| !r["name"].as_str().unwrap_or("").starts_with('|')).cloned().collect())
        .unwrap_or_default();
    // c_2 > c_4 > ... > c_12 > q_inf > c_11 > ... > c_3
    let order_holds = code == 0 && relations.len() == 11 && relations.iter().all(|r| r["status"] == "holds");
    let thin: Vec<String> = relations
        .iter()
        .filter(|r| !(f(&r["margin_lower"]) > 1e-6))
        .map(|r| format!("{} ({:.1e})", r["name"].as_str().unwrap_or("?"), f(&r["margin"])))
        .collect();
    let fast = s.within(elapsed, Duration::from_secs(300));
    let pass = values_ok && order_holds && thin.is_empty() && fast;
    let detail = format!(
        "c_2 = {c2:.10}, c_3 = {c3:.10}, order {}, margins <= 1e-6: [{}], {:.0} s",
        if order_holds { "holds" } else { "broken" },
        thin.join(", "),
        elapsed.as_secs_f64()
    );
    s.record(2, "section constants and interleaving", pass, detail);
}

fn hutchinson_regime(s: &mut Suite) {
    let q4 = quotients(&[4.0]);
    let seq = CoefficientSequence::new(&FamilySpec::parse(&q4).unwrap(), Precision::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for degree in [8usize, 16, 32, 64] {
        let d = degree.to_string();
        let (code, v) = s.cli(&["zeros", "--function", &q4, "--degree", &d, "--real-tol", "1e-8"]);
        let roots = v["result"]["roots"].as_array().cloned().unwrap_or_default();
        let ok = code == 0
            && v["result"]["count_real"] == degree
            && roots.len() == degree
            && roots.iter().all(|r| r["class"] == "real-negative" && r["simple"] == true);
        if !ok {
            failures.push(format!("truncation {degree}"));
        }
        for _ in 0..5 {
            let m = rng.gen_range(0..degree);
            let n = rng.gen_range(m + 1..=degree);
            let rep = section(&seq, m, n).and_then(|p| locate_zeros(&p, 1e-8));
            match rep {
                Ok(rep) => {
                    s.outputs.push(serde_json::to_string(&rep).unwrap());
                    if !(rep.all_real() && rep.count_unresolved == 0) {
                        failures.push(format!("section ({m}, {n})"));
                    }
                }
                Err(e) => failures.push(format!("section ({m}, {n}): {e}")),
            }
        }
    }
    let detail = if failures.is_empty() { "degrees 8, 16, 32, 64 and 20 sections".into() } else { failures.join(", ") };
    s.record(3, "Hutchinson regime", failures.is_empty(), detail);
}

fn disk_counts(s: &mut Suite) {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for a2 in [3.3, 4.0, 9.0] {
        let func = quotients(&[a2]);
        let (code, v) = s.cli(&["zeros", "--function", &func, "--degree", "12", "--disks", "4..12"]);
        let disks = v["result"]["disk_counts"].as_array().cloned().unwrap_or_default();
        if code != 0 || disks.len() != 9 {
            failures.push(format!("q = {a2}: exit {code}, {} disks", disks.len()));
        }
        for d in &disks {
            worst = worst.max(f(&d["residual"]));
            if d["count"] != d["j"] || !(f(&d["residual"]) <= 1e-6) {
                failures.push(format!("q = {a2}, j = {}: count {}", d["j"], d["count"]));
            }
        }
    }
    let detail = if failures.is_empty() { format!("27 disks, worst residual {worst:.1e}") } else { failures.join(", ") };
    s.record(4, "disk counts", failures.is_empty(), detail);
}

fn quartic_grid(s: &mut Suite) {
    let (code, v) = s.cli(&["verify-inequalities"]);
    let grid = v["result"]["quartic"].as_array().cloned().unwrap_or_default();
    let bad: Vec<String> = grid
        .iter()
        .filter(|p| !(p["unit_disk_count"] == 2 && f(&p["value_at_one"]) > 0.0))
        .map(|p| {
            format!(
                "({}, {}): {} inside, {} on the circle, psi(1) = {:.3}",
                p["q_j"], p["q_j1"], p["unit_disk_count"], p["circle_zeros"], f(&p["value_at_one"])
            )
        })
        .collect();
    let pass = code == 0 && grid.len() == 25 && bad.is_empty();
    let detail = if bad.is_empty() { "25/25 grid points".into() } else { format!("{}/25 grid points fail: {}", bad.len(), bad.join("; ")) };
    s.record(5, "quartic grid", pass, detail);
}

fn sign_alternation(s: &mut Suite) {
    let mut failures = Vec::new();
    for a2 in [3.5, 4.0] {
        let func = quotients(&[a2]);
        let (code, v) = s.cli(&["zeros", "--function", &func, "--degree", "8", "--alternation", "25"]);
        let alt = &v["result"]["alternation"];
        let rows = alt["rows"].as_array().cloned().unwrap_or_default();
        let ks: Vec<u64> = rows.iter().filter_map(|r| r["k"].as_u64()).collect();
        let certified = rows.iter().all(|r| {
            let k = r["k"].as_i64().unwrap_or(0);
            r["status"] == "CERTIFIED" && r["sign"].as_i64() == Some(if k % 2 == 0 { 1 } else { -1 })
        });
        if code != 0 || alt["outcome"] != "PASS" || ks != (2..=25).collect::<Vec<u64>>() || !certified {
            failures.push(format!("q = {a2}"));
        }
    }
    let detail = if failures.is_empty() { "k = 2..25 certified for q = 3.5, 4".into() } else { failures.join(", ") };
    s.record(6, "sign alternation", failures.is_empty(), detail);
}

fn end_to_end(s: &mut Suite) {
    let mut agree = 0;
    let mut wrong = Vec::new();
    for (a2, expected) in [(3.5, "PASS"), (3.3, "PASS"), (4.0, "PASS"), (3.0, "FAIL"), (3.1, "FAIL"), (3.2, "FAIL")] {
        let (_, v) = s.cli(&["test", "--criterion", "mthm1", "--function", &quotients(&[a2])]);
        if v["status"] == expected {
            agree += 1;
        } else {
            wrong.push(format!("q = {a2}: {}", v["status"]));
        }
    }
    let detail = if wrong.is_empty() { format!("{agree}/6 agree") } else { format!("{agree}/6 agree; {}", wrong.join(", ")) };
    s.record(7, "criterion versus ground truth", agree == 6, detail);
}

fn root_bounds(s: &mut Suite) {
    let (code, v) = s.cli(&["constants", "roots"]);
    let polys = v["result"]["polynomials"].as_array().cloned().unwrap_or_default();
    let by_id = |id: &str| polys.iter().find(|p| p["poly_id"] == id).cloned().unwrap_or(Value::Null);
    let mut failures = Vec::new();
    let mut found = Vec::new();
    for (id, bound) in [("deg11", 1.47), ("quintic_A", 1.73051), ("quintic_B", 1.8521)] {
        let p = by_id(id);
        let root = f(&p["largest_root"]);
        found.push(format!("{id} {root:.7}"));
        if !(root < bound && f(&p["residual"]) <= 1e-9) {
            failures.push(format!("{id}: root {root}, residual {}", p["residual"]));
        }
    }
    let g = by_id("quartic_g");
    let (x, y) = (f(&g["minimum_nonnegative"][0]), f(&g["minimum_nonnegative"][1]));
    if !((x - 1.5).abs() <= 1e-12 && (y - 5.0 / 16.0).abs() <= 1e-12) {
        failures.push(format!("quartic_g minimum ({x}, {y})"));
    }
    let pass = code == 0 && failures.is_empty();
    let detail = if failures.is_empty() { format!("{}; g(3/2) = 5/16", found.join(", ")) } else { failures.join(", ") };
    s.record(8, "root bounds", pass, detail);
}

fn necessary_soundness(s: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let (mut passes, mut counterexamples) = (0, Vec::new());
    for _ in 0..200 {
        let len = rng.gen_range(1..=8);
        let mut q: Vec<f64> = (0..len).map(|_| rng.gen_range(3.0..=6.0)).collect();
        q.sort_by(f64::total_cmp);
        let func = quotients(&q);
        let (_, v) = s.cli(&["test", "--criterion", "mthm1", "--function", &func]);
        if v["status"] != "PASS" {
            continue;
        }
        passes += 1;
        for c in ["lemma12", "theoremD"] {
            let (_, w) = s.cli(&["test", "--criterion", c, "--function", &func]);
            if w["status"] != "PASS" {
                counterexamples.push(format!("{c} {} on {func}", w["status"]));
            }
        }
    }
    let detail = format!("{passes}/200 families pass the criterion, {} counterexamples {}", counterexamples.len(), counterexamples.join("; "));
    s.record(9, "necessary-condition soundness", counterexamples.is_empty(), detail.trim_end().into());
}

fn census_stabilizes(s: &mut Suite) {
    let linear = r#"{"family":"quotients","a0":1,"a1":1,"rule":{"kind":"linear-capped","intercept":2.52,"slope":0.05,"cap":6}}"#;
    let mut failures = Vec::new();
    let mut tails = Vec::new();
    for (name, func) in [("q = 2.6", quotients(&[2.6])), ("linear", linear.to_string())] {
        let (code, v) = s.cli(&["census", "--function", &func, "--j-range", "6..14"]);
        let rows = v["result"]["rows"].as_array().cloned().unwrap_or_default();
        let counts: Vec<i64> = rows.iter().filter_map(|r| r["nonreal"].as_i64()).collect();
        let stable = counts.len() == 9 && counts[5..].iter().all(|&c| c == counts[8]);
        tails.push(format!("{name}: {counts:?}"));
        if code != 0 || !stable {
            failures.push(name);
        }
    }
    s.record(10, "census stabilization", failures.is_empty(), tails.join(", "));
}

fn run_suite(timed: bool) -> Suite {
    let mut s = Suite { timed, ..Suite::default() };
    q_infinity(&mut s);
    section_constants(&mut s);
    hutchinson_regime(&mut s);
    disk_counts(&mut s);
    quartic_grid(&mut s);
    sign_alternation(&mut s);
    end_to_end(&mut s);
    root_bounds(&mut s);
    necessary_soundness(&mut s);
    census_stabilizes(&mut s);
    s
}

fn main() -> ExitCode {
    let first = run_suite(true);
    let second = run_suite(false);
    let differing = first.outputs.iter().zip(&second.outputs).filter(|(a, b)| a != b).count();
    let identical = first.outputs.len() == second.outputs.len() && differing == 0;

    let mut verdicts = first.verdicts;
    verdicts.push(Verdict {
        id: 11,
        title: "determinism",
        pass: identical,
        detail: format!("{} JSON outputs, {differing} differ", first.outputs.len()),
    });
    for v in &verdicts {
        println!("criterion {:>2} {} {}: {}", v.id, if v.pass { "PASS" } else { "FAIL" }, v.title, v.detail);
    }
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.pass).map(|v| v.id).collect();
    println!("acceptance: {} of {} criteria pass", verdicts.len() - failed.len(), verdicts.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
