use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use waring_core::rank::{real_rank_search, Rigor};
use waring_core::rat::{parse_rat, pow2};
use waring_core::rng::SeededRng;

fn waring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(args)
        .env_remove("WARING_SEED")
        .output()
        .expect("run waring")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn rank_of_xy() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "xy.json", r#"{"degree": 2, "coefficients": ["0/1", "1/1", "0/1"]}"#);
    let o = waring(&["rank", &f]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["payload"]["kind"], "rank");
    assert_eq!(doc["payload"]["body"]["rank"], 2);
    assert_eq!(doc["schema_version"], "1.0");
}

#[test]
fn exact_only_on_x2y2() {
    let o = waring(&["rank", "--exact-only", "-e", "x^2*y^2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["payload"]["body"]["rank"], 4);
    assert_eq!(json(&o)["payload"]["body"]["rigor"], "EXACT");
}

#[test]
fn exact_only_shortfall_exits_3() {
    // the first seeded nonic whose rank needs a search over a large piece
    let f = (0..)
        .map(|k| SeededRng::split(9, k).dense_form(9, 10))
        .find(|f| real_rank_search(f).unwrap().rigor != Rigor::Exact)
        .unwrap();
    let expr = f.to_expr();
    let arg = format!("--expr={expr}");
    let o = waring(&["rank", "--exact-only", &arg]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert_eq!(json(&o)["payload"]["body"]["rigor"], "EMPIRICAL");
    assert_eq!(code(&waring(&["rank", &arg])), 0);
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", r#"{"degree": 2, "coefficients": ["1/0", "1/1", "0/1"]}"#);
    let o = waring(&["rank", &f]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("1/0"), "{}", stderr(&o));
    let f = write(&dir, "unreduced.json", r#"{"degree": 1, "coefficients": ["2/4", "1/1"]}"#);
    assert_eq!(code(&waring(&["rank", &f])), 2);
    assert_eq!(code(&waring(&["rank", "-e", "x - x"])), 2);
    assert_eq!(code(&waring(&["rank", "-e", "x + 1"])), 2);
    assert_eq!(code(&waring(&["rank", "/nonexistent/form.json"])), 2);
    assert_eq!(code(&waring(&["frobnicate"])), 2);
}

#[test]
fn witness_certify_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("w.json");
    let o = waring(&["witness", "-d", "6", "-m", "4", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("degree  3"));
    let o = waring(&["certify", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    // deterministic for a fixed seed, also through the environment
    let again = Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(["witness", "-d", "6", "-m", "4"])
        .env("WARING_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&again.stdout).trim(), fs::read_to_string(&out).unwrap().trim());
}

#[test]
fn base_only_chain() {
    let o = waring(&["witness", "-d", "2", "-m", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["payload"]["body"]["steps"].as_array().unwrap().len(), 0);
}

#[test]
fn inadmissible_witness_exits_2() {
    let o = waring(&["witness", "-d", "6", "-m", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("4 <= m <= 6"), "{}", stderr(&o));
}

fn tamper(path: &Path, edit: impl FnOnce(&mut Value)) {
    let mut v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    edit(&mut v);
    fs::write(path, serde_json::to_string(&v).unwrap()).unwrap();
}

#[test]
fn certify_failures() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("w.json");
    assert_eq!(code(&waring(&["witness", "-d", "5", "-m", "4", "--out", out.to_str().unwrap()])), 0);
    let text = fs::read_to_string(&out).unwrap();

    // one coefficient of the hyperbolic form s altered, in the chain and in
    // the final certificate
    for path in [&["witness"][..], &["certificate", "witness"]] {
        fs::write(&out, &text).unwrap();
        tamper(&out, |v| {
            let mut node = &mut v["payload"]["body"];
            for key in path {
                node = &mut node[*key];
            }
            node["coeffs"][0] = Value::from("7/1");
        });
        let o = waring(&["certify", out.to_str().unwrap()]);
        assert_eq!(code(&o), 1);
        let msg = stderr(&o);
        assert!(msg.contains("hyperbolicity") || msg.contains("membership"), "{msg}");
    }

    // provenance edits are caught by the digest
    fs::write(&out, &text).unwrap();
    tamper(&out, |v| v["subject"]["provenance"]["generator"] = Value::from("someone else"));
    let o = waring(&["certify", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("digest"));

    // unknown schema major
    fs::write(&out, &text).unwrap();
    tamper(&out, |v| v["schema_version"] = Value::from("2.0"));
    assert_eq!(code(&waring(&["certify", out.to_str().unwrap()])), 1);

    // truncated
    fs::write(&out, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&waring(&["certify", out.to_str().unwrap()])), 2);
}

#[test]
fn decompose_quarter_identity() {
    let o = waring(&["decompose", "-e", "x*y"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dec = &json(&o)["payload"]["body"]["decomposition"];
    assert_eq!(dec["exact"], true);
    let mut coeffs: Vec<String> = dec["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coeff"].as_str().unwrap().to_string())
        .collect();
    coeffs.sort();
    assert_eq!(coeffs.len(), 2);
    // quarter identity up to the scaling of the linear forms
    let total: Vec<f64> = coeffs
        .iter()
        .map(|c| {
            let (n, d) = c.split_once('/').unwrap();
            n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
        })
        .collect();
    assert!(total[0] < 0.0 && total[1] > 0.0);
}

#[test]
fn decompose_x2y2_exact() {
    let dir = TempDir::new().unwrap();
    let o = waring(&["decompose", "-e", "x^2y^2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let dec = &v["payload"]["body"]["decomposition"];
    assert_eq!(dec["terms"].as_array().unwrap().len(), 4);
    assert_eq!(dec["residual"], "0/1");
    let p = write(&dir, "d.json", &String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&waring(&["certify", &p])), 0);
}

fn below_two_to_minus(residual: &str, bits: i64) -> bool {
    parse_rat(residual).unwrap() < pow2(-bits)
}

#[test]
fn decompose_numeric_degree_five() {
    // s = x (x^2 - 2y^2)(x^2 - 3y^2) has irrational roots and only touches
    // x^5, x^3 y^2, x y^4, so it kills x^4 y + 2 x^2 y^3 - y^5
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.txt", "x*(x^2-2y^2)*(x^2-3y^2)");
    let o = waring(&["decompose", "-e", "x^4y + 2x^2y^3 - y^5", "--apolar-witness", &s]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dec = json(&o)["payload"]["body"]["decomposition"].clone();
    assert_eq!(dec["exact"], false);
    assert_eq!(dec["precision_bits"], 128);
    assert!(below_two_to_minus(dec["residual"].as_str().unwrap(), 100));
    let p = write(&dir, "d.json", &String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&waring(&["certify", &p])), 0);

    // a random quintic with the witness from its rank search
    let o = waring(&["decompose", "-e", "3x^5 - 2x^4y + x^3y^2 + 7x^2y^3 - x y^4 + 4y^5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dec = json(&o)["payload"]["body"]["decomposition"].clone();
    assert!(below_two_to_minus(dec["residual"].as_str().unwrap(), 100));
    let p = write(&dir, "r.json", &String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&waring(&["certify", &p])), 0);
}

#[test]
fn non_hyperbolic_witness_exits_2() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.txt", "x^2 + y^2");
    let o = waring(&["decompose", "-e", "x^3 - 3x*y^2", "--apolar-witness", &s]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not hyperbolic"), "{}", stderr(&o));
}

#[test]
fn atlas_small() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("a2");
    let o = waring(&["atlas", "--dmax", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let files: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "summary.json")
        .collect();
    assert_eq!(files, vec!["d02_m02.json".to_string()]);

    let out = dir.path().join("a5");
    let o = waring(&["atlas", "--dmax", "5", "--seed", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary: Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let entries = summary["entries"].as_array().unwrap();
    // sum over d = 2..5 of (d - floor((d+2)/2) + 1)
    assert_eq!(entries.len(), 1 + 2 + 2 + 3);
    let counted: u64 = summary["by_rigor"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(counted, 8);
    for e in entries {
        let p = out.join(e["file"].as_str().unwrap());
        assert_eq!(code(&waring(&["certify", p.to_str().unwrap()])), 0);
    }
}

#[test]
fn perturb_witness_four_three() {
    let dir = TempDir::new().unwrap();
    let w = dir.path().join("w.json");
    assert_eq!(code(&waring(&["witness", "-d", "4", "-m", "3", "--out", w.to_str().unwrap()])), 0);
    let rep = dir.path().join("p.json");
    let o = waring(&[
        "perturb",
        "--input",
        w.to_str().unwrap(),
        "--radius",
        "1/1000",
        "--trials",
        "25",
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "rank 3 in 25/25");
    assert_eq!(code(&waring(&["certify", rep.to_str().unwrap()])), 0);
}
