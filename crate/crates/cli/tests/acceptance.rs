//! One line per acceptance criterion; fails if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use qprivacy::channels::{apply, ChannelKind, ChannelSpec};
use qprivacy::measures::{coherent_information, concurrence, discord, eof};
use qprivacy::states::named_state;
use qprivacy::tensor::DimSignature;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Run {
    code: i32,
    stdout: String,
    records: Vec<Value>,
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.display().to_string()
}

fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qprivacy")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    let records = if args.contains(&"records") {
        stdout.lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
    } else {
        Vec::new()
    };
    Run { code: out.status.code().unwrap_or(-1), stdout, records }
}

fn records(args: &[&str]) -> Result<Vec<Value>, String> {
    let mut full = args.to_vec();
    full.extend(["--format", "records"]);
    let r = cli(&full);
    if r.code != 0 {
        return Err(format!("`{}` exited {}", args.join(" "), r.code));
    }
    Ok(r.records)
}

fn inequalities<'a>(recs: &'a [Value], check: &'a str) -> impl Iterator<Item = &'a Value> + 'a {
    recs.iter().filter(move |r| r["kind"] == "inequality" && r["check"] == check)
}

fn f(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key} in {v}"))
}

/// Largest `left - right` over a check; `count` records found.
fn worst(recs: &[Value], check: &str) -> (usize, f64) {
    inequalities(recs, check).fold((0, f64::NEG_INFINITY), |(n, w), r| (n + 1, w.max(f(r, "left") - f(r, "right"))))
}

fn expect_le(recs: &[Value], check: &str, trials: usize, bound: f64) -> Result<f64, String> {
    let (n, w) = worst(recs, check);
    if n < trials {
        return Err(format!("{check}: {n} records, expected {trials}"));
    }
    if w > bound {
        return Err(format!("{check}: worst left-right {w:e} > {bound:e}"));
    }
    Ok(w)
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for dims in ["2,2,2", "2,3,2"] {
        let recs = records(&["verify", "--dims", dims, "--trials", "1000", "--seed", "1", "--checks", "ssa,weak-monotonicity"])?;
        let a = expect_le(&recs, "ssa", 1000, 1e-8)?;
        let b = expect_le(&recs, "weak-monotonicity", 1000, 1e-8)?;
        notes.push(format!("{dims}: worst ssa {a:.2e}, wm {b:.2e}"));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("{}; {secs:.1} s", notes.join("; ")))
}

fn criterion2() -> Outcome {
    let recs = records(&["verify", "--dims", "2,2", "--trials", "500", "--seed", "2", "--checks", "holevo-identity"])?;
    let w = expect_le(&recs, "holevo-identity", 500, 1e-8)?;
    Ok(format!("max |chi_Q' - chi_E' - I_c| = {w:.2e} over 500 pairs"))
}

fn criterion3() -> Outcome {
    let recs = records(&["verify", "--dims", "2,2,2", "--env-dim", "2", "--trials", "1000", "--seed", "3", "--checks", "theorem1"])?;
    let w = expect_le(&recs, "theorem1", 1000, 1e-8)?;
    let ghz = records(&["compute", "--scenario", &fixture("ghz_identity.scn")])?;
    let sum = inequalities(&ghz, "theorem1").map(|r| f(r, "left")).next().ok_or("no theorem1 record for GHZ")?;
    if sum.abs() > 1e-8 {
        return Err(format!("GHZ sum {sum:e}"));
    }
    Ok(format!("max P_B + P_C = {w:.2e}; GHZ sum = {sum:.1e}"))
}

fn criterion4() -> Outcome {
    let recs = records(&["verify", "--dims", "2,2,2,2", "--trials", "200", "--seed", "4", "--checks", "multiparty"])?;
    let w = expect_le(&recs, "multiparty", 200, 1e-8)?;
    let (n, _) = worst(&recs, "multiparty-conditional");
    let min_cond = inequalities(&recs, "multiparty-conditional").map(|r| f(r, "right")).fold(f64::INFINITY, f64::min);
    if n < 200 || min_cond < -1e-8 {
        return Err(format!("sum S(A|B_i) reached {min_cond:e} over {n} records"));
    }
    Ok(format!("max sum P_min = {w:.2e}; min sum S(A|B_i) = {min_cond:.3}"))
}

fn criterion5() -> Outcome {
    let recs = records(&["verify", "--trials", "1000", "--seed", "5", "--checks", "theorem2"])?;
    let w = expect_le(&recs, "theorem2-coherent", 1000, 1e-8)?;
    Ok(format!("max I_c(A>B) + I_c(A>C) - I_c(A>BC) = {w:.2e}"))
}

fn criterion6() -> Outcome {
    let recs = records(&["verify", "--trials", "500", "--seed", "6", "--checks", "theorem3"])?;
    let mut parts = Vec::new();
    for check in ["theorem3", "theorem3-koashi-winter", "theorem3-discord-chain", "theorem3-discord-bound"] {
        let w = expect_le(&recs, check, 500, 1e-6)?;
        parts.push(format!("{check} {w:.2e}"));
    }
    Ok(parts.join(", "))
}

fn criterion7() -> Outcome {
    let mut notes = Vec::new();
    for channel in ["depolarizing", "amplitude-damping"] {
        let recs = records(&["sweep", "--channel", channel, "--range", "0:1:0.05"])?;
        let rows: Vec<&Value> = recs.iter().filter(|r| r["kind"] == "sweep").collect();
        if rows.len() != 21 {
            return Err(format!("{channel}: {} rows", rows.len()));
        }
        for check in ["coherent-eve", "privacy-eve", "disturbance-privacy"] {
            expect_le(&recs, check, 21, 1e-8)?;
        }
        if channel == "amplitude-damping" {
            let mid = rows.iter().find(|r| (f(r, "param") - 0.5).abs() < 1e-12).ok_or("no gamma=0.5 row")?;
            let ic = f(mid, "coherent_info");
            if ic.abs() > 1e-8 {
                return Err(format!("I_c at gamma 0.5 = {ic:e}"));
            }
            notes.push(format!("I_c(gamma=0.5) = {ic:.1e}"));
        }
    }
    Ok(format!("42 rows, three trade-offs pass; {}", notes.join("")))
}

fn criterion8() -> Outcome {
    let two = DimSignature::qubits(2).unwrap();
    let bell = named_state("bell", &two).unwrap().density();
    let w = named_state("w", &DimSignature::qubits(3).unwrap()).unwrap().reduced(&[0, 1]).unwrap();
    let dep = ChannelSpec::new(ChannelKind::Depolarizing, 1.0).unwrap().build();
    let ic = coherent_information(&apply(&dep, &bell, 1).unwrap(), &[0], &[1]).unwrap();
    let e = |x: qprivacy::Result<f64>| x.map_err(|e| e.to_string());
    let checks = [
        ("E_f(bell)", e(eof(&bell))?, 1.0, 1e-9),
        ("C(bell)", e(concurrence(&bell))?, 1.0, 1e-9),
        ("C(W_AB)", e(concurrence(&w))?, 2.0 / 3.0, 1e-9),
        ("I_c(depolarized bell)", ic, -1.0, 1e-9),
        ("discord(bell)", e(discord(&bell))?, 1.0, 1e-4),
    ];
    for (name, got, want, tol) in &checks {
        if (got - want).abs() > *tol {
            return Err(format!("{name} = {got} (want {want})"));
        }
    }
    let bd = cli(&["compute", "--scenario", &fixture("bell_depolarizing.scn"), "--format", "records"]);
    let leg = bd.records.iter().find(|r| r["kind"] == "leg").ok_or("no leg record")?;
    if (f(leg, "coherent_info") - 1.0).abs() > 1e-9 {
        return Err(format!("bell_depolarizing I_c = {}", leg["coherent_info"]));
    }
    Ok("E_f, C, C(W), I_c, discord all within tolerance".into())
}

fn criterion9() -> Outcome {
    let recs = records(&["verify", "--dims", "2,2", "--trials", "500", "--seed", "9", "--checks", "disturbance"])?;
    let lo = expect_le(&recs, "disturbance-lower", 500, 1e-8)?;
    let hi = expect_le(&recs, "disturbance-upper", 500, 1e-8)?;
    let mono = expect_le(&recs, "disturbance-monotone", 500, 1e-8)?;
    Ok(format!("worst: lower {lo:.2e}, upper {hi:.2e}, monotone {mono:.2e}"))
}

fn criterion10() -> Outcome {
    let args = ["verify", "--seed", "42", "--trials", "50", "--format", "records"];
    let a = cli(&args);
    let b = cli(&args);
    if a.code != 0 || a.stdout != b.stdout || a.stdout.is_empty() {
        return Err(format!("verify --seed 42: exit {}, identical = {}", a.code, a.stdout == b.stdout));
    }
    let fail = cli(&["verify", "--seed", "42", "--trials", "20", "--tolerance", "0", "--checks", "holevo-identity"]);
    if fail.code != 1 {
        return Err(format!("zero-tolerance run exited {}", fail.code));
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("r.jsonl");
    let out_s = out.display().to_string();
    let bad = cli(&["verify", "--tolerance", "-1", "--out", &out_s]);
    if bad.code != 2 || out.exists() {
        return Err(format!("tolerance -1 exited {} (file written: {})", bad.code, out.exists()));
    }
    let usage = cli(&["verify", "--no-such-flag"]);
    if usage.code != 2 {
        return Err(format!("unknown flag exited {}", usage.code));
    }
    Ok("identical output for seed 42; exit codes 0, 1, 2 as documented".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("entropy inequalities on 2x2x2 and 2x3x2", criterion1),
        ("holevo difference equals coherent information", criterion2),
        ("two-receiver privacy exclusion", criterion3),
        ("multiparty privacy sum", criterion4),
        ("coherent information chain", criterion5),
        ("entanglement plus privacy bound", criterion6),
        ("trade-off sweeps", criterion7),
        ("closed-form fixtures", criterion8),
        ("disturbance bounds", criterion9),
        ("determinism and exit codes", criterion10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("criterion {:>2} [PRIMARY] PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                println!("criterion {:>2} [PRIMARY] FAIL  {name}: {msg}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
