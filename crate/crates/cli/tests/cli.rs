use std::path::PathBuf;
use std::process::{Command, Output};

fn lorentz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorentz")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lorentz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const TWO_STEP: &str = r#"{"kind":"step","pieces":[{"a":0.0,"b":1.0,"value":2.0},{"a":1.0,"b":2.0,"value":1.0}]}"#;

#[test]
fn constants_row() {
    let o = lorentz(&["constants", "--p", "2", "--s", "4"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "p,s,p_prime,s_prime,alpha,c_ps,char_norm,char_dual\n\
         2.000000,4.000000,2.000000,1.333333,0.333333,1.139754,0.840896,0.737788\n"
    );
}

#[test]
fn constants_grid() {
    let o = lorentz(&["constants", "--p", "1.5,2,4", "--s", "2,4,inf", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let f = |k: &str| r[k].as_f64().unwrap();
        assert!((f("char_norm") - f("c_ps") * f("char_dual")).abs() < 1e-12, "{r}");
        if r["s"] == r["p"] {
            assert!((f("c_ps") - 1.0).abs() < 1e-15);
        }
    }
    let weak = rows.iter().find(|r| r["p"] == 2.0 && r["s"] == "inf").unwrap();
    assert_eq!((weak["s_prime"].as_f64(), weak["alpha"].as_f64(), weak["c_ps"].as_f64()), (Some(1.0), Some(0.5), Some(2.0)));
}

#[test]
fn dual_weak_space() {
    let f = write_tmp("two.json", TWO_STEP);
    let o = lorentz(&["dual", "--p", "2", "--s", "inf", "-f", f.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.060660).abs() < 1e-6);
    assert_eq!(v["branch"], "sup_s_infinity");
}

#[test]
fn norm_and_level() {
    let f = write_tmp("two.json", TWO_STEP);
    let path = f.to_str().unwrap();
    let o = lorentz(&["norm", "--p", "2", "--s", "2", "-f", path]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // ||f||_{2,2} = ||f||_2 = sqrt(5)
    assert!((v["norm"]["value"].as_f64().unwrap() - 5f64.sqrt()).abs() < 1e-12);
    assert!(v["maximal"]["value"].as_f64().unwrap() > 5f64.sqrt());

    let o = lorentz(&["level", "--p", "2", "--s", "4", "-f", path, "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("a,b,slope\n"));
}

#[test]
fn decompose_writes_output_file() {
    let f = write_tmp("chi.json", r#"{"kind":"step","pieces":[{"a":0,"b":1,"value":1}]}"#);
    let out = f.with_file_name("cert.json");
    let o = lorentz(&["decompose", "--p", "2", "--s", "4", "--epsilon", "0.1", "-f", f.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let parts = v["parts"].as_array().unwrap();
    assert_eq!(parts.len() as u64, v["N"].as_u64().unwrap());
    assert!(v["upper"].as_f64().unwrap() - v["lower"].as_f64().unwrap() <= 0.4 + 1e-9);
}

#[test]
fn malformed_input_exits_2_naming_field() {
    let f = write_tmp("bad.json", r#"{"kind":"step","pieces":[{"a":0.0,"b":1.0}]}"#);
    let o = lorentz(&["norm", "--p", "2", "--s", "4", "-f", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("value"), "{err}");

    let f = write_tmp("neg.json", r#"{"kind":"step","pieces":[{"a":0.0,"b":1.0,"value":-1.0}]}"#);
    let o = lorentz(&["norm", "--p", "2", "--s", "4", "-f", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = lorentz(&["constants", "--p", "0.5", "--s", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let a = lorentz(&["verify", "--trials", "10", "--seed", "42"]);
    let b = lorentz(&["verify", "--trials", "10", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().skip(1).all(|l| l.contains(",PASS,")));
}

#[test]
fn verify_list_matches_run() {
    let list = stdout(&lorentz(&["verify", "--list"]));
    let run = stdout(&lorentz(&["verify", "--trials", "2"]));
    let names = |s: &str| s.lines().skip(1).map(|l| l.split(',').next().unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(names(&list), names(&run));
    assert!(names(&list).len() >= 30);
}

#[test]
fn emitted_functions_reload() {
    let f = write_tmp("chi2.json", r#"{"kind":"step","pieces":[{"a":0,"b":1,"value":1}]}"#);
    let o = lorentz(&["dual", "--p", "2", "--s", "4", "-f", f.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let witness = serde_json::to_string(&v["witness"]).unwrap();
    let g = write_tmp("witness.json", &witness);
    let o = lorentz(&["norm", "--p", "2", "--s", "4", "-f", g.to_str().unwrap()]);
    assert!(o.status.success());
}
