use std::path::Path;
use std::process::{Command, Output};

use ortholat::equidist::{run_sweep, EquidistConfig};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ortholat"));
    c.env_remove("ORTHOLAT_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/report.v1.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn json_report(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    v
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&run(&["ball-volume", "--kind", "so21", "--p", "5", "--l", "2"])), "37");
    assert_eq!(stdout(&run(&["choose-prime", "--D", "60"])), "13");
    let o = run(&["sphere", "--d", "4", "--D", "8"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("0 points") && s.contains("8 divides"), "{s}");
}

#[test]
fn every_command_matches_the_schema() {
    let cases: &[&[&str]] = &[
        &["sphere", "--d", "5", "--D", "6", "--points"],
        &["sphere", "--d", "4", "--D", "8"],
        &["shape", "--v", "1,1,1,2"],
        &["shape", "--d", "4", "--D", "7"],
        &["choose-prime", "--D", "1000"],
        &["classify-form", "--v", "1,1,1,2", "--samples", "10"],
        &["classify-form", "--gram", "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1", "--p", "13", "--M", "5", "--samples", "10"],
        &["cartan", "--kind", "so31", "--p", "5", "--m", "2", "--samples", "2"],
        &["cartan", "--kind", "sl2", "--p", "13", "--m", "3"],
        &["cartan", "--kind", "so21", "--p", "5", "--matrix", "1/25,0,0;0,25,0;0,0,1"],
        &["ball-volume", "--kind", "so22", "--p", "5", "--l", "1", "--sphere"],
        &["tree-cosets", "--kind", "so21", "--p", "5", "--l", "2"],
        &["lie", "verify", "--p", "17"],
        &["hecke", "classes", "--d", "4", "--D", "7", "--p", "5", "--kmax", "0"],
        &["hecke", "related", "--v", "0,1,2,4", "--w", "2,2,2,3", "--p", "5"],
        &["hecke", "stabilizer", "--v", "1,1,1,2", "--p", "5", "--kmax", "0"],
        &["equidist", "run", "--dmin", "100", "--dmax", "400", "--samples", "6"],
    ];
    for args in cases {
        let v = json_report(args);
        assert_eq!(v["header"]["seed"], 1);
        assert!(v["header"]["config"].is_object());
    }
}

#[test]
fn reports_echo_the_library() {
    let v = json_report(&["cartan", "--kind", "so21", "--p", "5", "--matrix", "1/25,0,0;0,25,0;0,0,1"]);
    assert_eq!(v["result"]["trials"][0]["m"], 2);
    assert_eq!(v["result"]["trials"][0]["reassembles"], true);

    let v = json_report(&["classify-form", "--gram", "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,2", "--p", "5", "--M", "5"]);
    assert_eq!(v["result"]["kind"], "QUASI_SPLIT");
    assert_eq!(v["result"]["eta"], 2);

    let v = json_report(&["equidist", "run", "--dmin", "100", "--dmax", "400", "--samples", "6", "--seed", "9"]);
    let cfg = EquidistConfig { dmin: 100, dmax: 400, samples: 6, seed: 9, ..EquidistConfig::default() };
    let lib = serde_json::to_value(run_sweep(&cfg).unwrap()).unwrap();
    assert_close(&v["result"], &lib, "result");
}

// Separate builds of the library may round the last bit differently.
fn assert_close(a: &Value, b: &Value, path: &str) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) if x.is_f64() || y.is_f64() => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0), "{path}: {x} vs {y}");
        }
        (Value::Array(xs), Value::Array(ys)) => {
            assert_eq!(xs.len(), ys.len(), "{path}");
            for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
                assert_close(x, y, &format!("{path}[{i}]"));
            }
        }
        (Value::Object(xs), Value::Object(ys)) => {
            assert_eq!(xs.len(), ys.len(), "{path}");
            for (k, x) in xs {
                assert_close(x, &ys[k], &format!("{path}.{k}"));
            }
        }
        _ => assert_eq!(a, b, "{path}"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["choose-prime", "--D", "60", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sphere", "--d", "7", "--D", "3"]).status.code(), Some(2));
    // p ≡ 3 mod 4 is refused
    assert_eq!(run(&["classify-form", "--v", "1,1,1,2", "--p", "7"]).status.code(), Some(2));
    assert_eq!(run(&["hecke", "classes", "--d", "4", "--D", "7", "--p", "7"]).status.code(), Some(2));
    // a decomposition that needs more digits than the context carries
    let o = run(&["cartan", "--kind", "so21", "--p", "5", "--matrix", "1/25,0,0;0,25,0;0,0,1", "--N", "0"]);
    assert!(matches!(o.status.code(), Some(0) | Some(3)), "{:?}", o.status);
    assert_eq!(run(&["cartan", "--kind", "so21", "--p", "5", "--m", "40", "--N", "4"]).status.code(), Some(3));
}

#[test]
fn files_and_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("classes.csv");
    let out = dir.path().join("r.json");
    let o = bin()
        .args(["hecke", "classes", "--d", "4", "--D", "21", "--p", "5", "--kmax", "0", "--csv"])
        .arg(&csv)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("class,representative,size"));
    let sizes: Vec<usize> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(sizes.iter().sum::<usize>(), 256);
    assert_eq!(sizes.len(), 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["header"]["command"], "hecke");

    let o = bin().args(["choose-prime", "--D", "60"]).env("ORTHOLAT_OUT_DIR", dir.path()).output().unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("choose-prime.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["p"], 13);

    // commands without a series refuse --csv
    let o = bin().args(["choose-prime", "--D", "60", "--csv"]).arg(dir.path().join("x.csv")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn threads_do_not_change_reports() {
    let a = json_report(&["equidist", "run", "--dmin", "200", "--dmax", "900", "--samples", "5", "--threads", "1"]);
    let b = json_report(&["equidist", "run", "--dmin", "200", "--dmax", "900", "--samples", "5", "--threads", "3"]);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(b["header"]["threads"], 3);
}
