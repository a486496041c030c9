use std::process::Command;

use cluster_sing::cli::run;
use serde_json::Value;

fn call(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cluster-sing").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &str) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{args}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn seed_with_principal_coefficients() {
    let v = json("seed --type A --n 3 --coeffs principal");
    assert_eq!(v["m"], 6);
    assert_eq!(v["vars"][3], "c1");
    assert_eq!(v["entries"][3], serde_json::json!([1, 0, 0]));
}

#[test]
fn mutate_reports_the_exchange_relation() {
    let v = json("mutate --type A --n 3 -k 2");
    assert_eq!(v["relations"].as_array().unwrap().len(), 1);
    assert_eq!(v["seed"]["vars"][1], "x2'");
    let rel = v["relations"][0].as_str().unwrap();
    assert!(rel.contains("x2'") && rel.contains("c2"), "{rel}");
}

#[test]
fn present_and_reduce() {
    let v = json("present --type G2");
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
    let v = json("reduce --type D --n 4");
    assert_eq!(v["verification"]["passed"], true);
    assert_eq!(v["expected_fiber_dim"], 4);
}

#[test]
fn classify_examples() {
    let v = json("classify --type A --n 3 --p 5 --eta 2,1,3");
    assert_eq!(v["summary"], "isolated A1 at origin");
    let v = json("classify --type F4 --p 7 --eta 1,1,1,1");
    assert_eq!(v["summary"], "regular");
    let (code, out, _) = call("classify --type A --n 3 --p 5 --eta 2,1,3 --format text");
    assert_eq!(code, 0);
    assert!(out.starts_with("A3 over F_5 at eta = (2, 1, 3): isolated A1 at origin"));
}

#[test]
fn stratify_lists_strata() {
    let v = json("stratify --type C --n 3 --p 2");
    assert_eq!(v["strata"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_g2_over_f3() {
    let (code, out, err) = call("verify --type G2 --p 3");
    assert_eq!(code, 0);
    assert_eq!(err.trim(), "4/4 eta agree");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"], "4/4 eta agree");
}

#[test]
fn classify_output_replays_through_verify() {
    let v = json("classify --type B --n 3 --p 3 --eta 1,2,2");
    let eta: Vec<String> = v["eta"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    let (code, _, err) = call(&format!("verify --type B --n 3 --p 3 --eta {}", eta.join(",")));
    assert_eq!(code, 0, "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(call("classify --type A --n 3 --p 5 --eta 2,0,3").0, 2);
    assert_eq!(call("classify --type A --n 3 --p 4 --eta 1,1,1").0, 2);
    assert_eq!(call("classify --type Q --n 3 --p 5 --eta 1,1,1").0, 2);
    assert_eq!(call("frobnicate").0, 2);
    assert_eq!(call("verify --type A --n 3 --p 5 --budget 10").0, 3);
}

#[test]
fn output_is_byte_stable() {
    let a = call("stratify --type D --n 4 --p 3").1;
    let b = call("stratify --type D --n 4 --p 3").1;
    assert_eq!(a, b);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_cluster-sing"))
        .args(["classify", "--type", "G2", "--p", "3", "--eta", "1,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"]["kind"], "isolated_hypersurface");
    assert_eq!(v["verdict"]["singularity"], "A2");
}
