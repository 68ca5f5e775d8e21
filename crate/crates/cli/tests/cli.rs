use gwa_rep_cli::job::{Backend, PresentationSource, PresetSpec};
use gwa_rep_cli::{CommandKind, JobSpec, OutputFormat};
use gwa_rep::wmodule::DescriptorSpec;
use serde_json::Value;
use std::collections::BTreeSet;
use std::process::Command;

fn gwa(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gwa-rep")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn gwa_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = gwa(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}")))
}

const CUTS: [&str; 9] = ["--preset", "cuts", "--seed", "0,0", "--kind", "wf", "--word", "xxyy", "--f"];

#[test]
fn cuts_orbit() {
    let (code, v) = gwa_json(&["orbit", "--preset", "cuts", "--seed", "0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["period"], 2);
    assert_eq!(v["breaks"], serde_json::json!([0, 1]));
    assert_eq!(v["real"], true);
    assert_eq!(v["symmetric"], true);
}

#[test]
fn decide_pu_on_and_off_the_set() {
    let yes = ["decide-pu", "--preset", "cuts", "--kind", "wf", "--word", "xxyy", "--f", "a1 + a2*x + x^2", "--a1", "1", "--a2", "1"];
    let (code, v) = gwa_json(&yes);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["decision"], "Yes");
    assert_eq!(v["verdict"]["theorem"], "Thm 5.14");

    // a1 = 2 breaks a1 = 1/conj(a1).
    let (_, v) = gwa_json(&["decide-pu", "--preset", "cuts", "--kind", "wf", "--word", "xxyy", "--f", "a1 + a2*x + x^2", "--a1", "2", "--a2", "1"]);
    assert_eq!(v["verdict"]["decision"], "No");

    // a non-self-sharp word
    let (_, v) = gwa_json(&["decide-pu", "--preset", "cuts", "--kind", "wf", "--word", "xxxy", "--f", "1 + x"]);
    assert_eq!(v["verdict"]["decision"], "No");
    assert_eq!(v["verdict"]["theorem"], "Cor. 5.12");
}

#[test]
fn diagram_matches_worked_example() {
    let mut args = vec!["diagram"];
    args.extend(CUTS);
    args.extend(["a1 + a2*x + x^2", "--a1", "1", "--a2", "1", "--relaxed"]);
    let (code, v) = gwa_json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["x_arrows"], 5);
    assert_eq!(v["y_arrows"], 4);
    let got: BTreeSet<(String, String, String)> = v["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["op"].as_str().unwrap().into(), a["from"][1].as_str().unwrap().into(), a["to"][1].as_str().unwrap().into()))
        .collect();
    let want: BTreeSet<(String, String, String)> = [
        ("X", "e11", "e21"),
        ("X", "e12", "e22"),
        ("X", "e41", "e12"),
        ("X", "e42", "e11"),
        ("X", "e42", "e12"),
        ("Y", "e31", "e21"),
        ("Y", "e32", "e22"),
        ("Y", "e41", "e31"),
        ("Y", "e42", "e32"),
    ]
    .iter()
    .map(|(o, f, t)| (o.to_string(), f.to_string(), t.to_string()))
    .collect();
    assert_eq!(got, want);

    args.extend(["--format", "dot"]);
    let (code, dot) = gwa(&args);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 9);
}

#[test]
fn dual_and_iso_find_witnesses() {
    let mut args = vec!["dual"];
    args.extend(CUTS);
    args.extend(["a1 + a2*x + x^2", "--a1", "zeta(8)^2", "--a2", "zeta(8)", "--relaxed"]);
    let (code, v) = gwa_json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["verified"]["result"], "found");
    assert_eq!(v["dual_descriptor"]["word"], "xxyy");
    args[0] = "iso";
    let (_, v) = gwa_json(&args);
    assert_eq!(v["search"]["result"], "found");
}

#[test]
fn forms_and_signatures() {
    let (code, v) = gwa_json(&["signature", "--preset", "usl2", "--seed", "4,0", "--kind", "supp", "--lo", "-4", "--hi", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["signature"], serde_json::json!({"plus": 5, "minus": 0, "zero": 0}));

    let (_, v) = gwa_json(&["gram", "--preset", "kleinian", "--t", "H^2-2*H+5", "--kind", "omega", "--window", "-4,4", "--lambda", "-3"]);
    assert_eq!(v["source"], "closed_form");
    assert_eq!(v["admissible"], true);

    let mut args = vec!["signature"];
    args.extend(CUTS);
    args.extend(["a1 + a2*x + x^2", "--a1", "zeta(8)^2", "--a2", "zeta(8)", "--relaxed"]);
    let (_, v) = gwa_json(&args);
    assert_eq!(v["source"], "isomorphism");
    let s = &v["signature"];
    assert_eq!(s["plus"].as_u64().unwrap() + s["minus"].as_u64().unwrap() + s["zero"].as_u64().unwrap(), 8);
}

#[test]
fn exit_codes() {
    let (code, v) = gwa_json(&["orbit", "--preset", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "spec");

    let (code, v) = gwa_json(&["build", "--preset", "cuts", "--seed", "0,0", "--kind", "wf", "--word", "xyy", "--f", "1 + x"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "module");

    let (code, v) = gwa_json(&["decide-pu", "--preset", "uqsl2", "--q", "i", "--mu", "1", "--alpha", "2", "--kind", "f", "--f", "x"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "descriptor");

    let (code, _) = gwa(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn sweep_is_order_stable() {
    let args = [
        "sweep", "--command", "decide-pu", "--preset", "uqsl2", "--q", "i", "--mu", "1", "--alpha", "2", "--kind", "f", "--f", "x - a",
        "--sweep", "a=1/4..1:4",
    ];
    let (code, v) = gwa_json(&args);
    assert_eq!(code, 0, "{v}");
    let rows = v.as_array().unwrap();
    let params: Vec<&str> = rows.iter().map(|r| r["params"]["a"].as_str().unwrap()).collect();
    assert_eq!(params, ["1/4", "1/2", "3/4", "1"]);
    // ξ = 4 here, so only |a|^2 = 1/4 is self-dual.
    let decisions: Vec<&str> = rows.iter().map(|r| r["output"]["verdict"]["decision"].as_str().unwrap()).collect();
    assert_eq!(decisions, ["No", "Yes", "No", "No"]);
}

#[test]
fn paper_check_single_criteria() {
    let (code, out) = gwa(&["paper-check", "--only", "5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l.starts_with("5 ") && l.contains("PASS")), "{out}");
    let (code, out) = gwa(&["paper-check", "--only", "6", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["passed"], true);
}

#[test]
fn job_spec_round_trips() {
    let job = JobSpec {
        command: CommandKind::DecidePu,
        presentation: PresentationSource::Preset(PresetSpec { name: "uqsl2".into(), q: Some("i".into()), ..Default::default() }),
        seed: Some("mu, alpha".into()),
        max_steps: Some(32),
        params: [("mu", "1"), ("alpha", "2"), ("a", "1/2")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        descriptor: Some(DescriptorSpec::F { f: "x - a".into() }),
        window: Some([-3, 3]),
        lambda: Some("-1".into()),
        backend: Backend::Exact,
        format: OutputFormat::Pretty,
        ..Default::default()
    };
    let t = job.to_toml().unwrap();
    assert_eq!(JobSpec::from_toml(&t).unwrap(), job);
    assert_eq!(JobSpec::from_json(&job.to_json()).unwrap(), job);

    let supp = JobSpec { descriptor: Some(DescriptorSpec::Supp { lo: Some(-2), hi: None, ix: vec![] }), ..Default::default() };
    assert_eq!(JobSpec::from_toml(&supp.to_toml().unwrap()).unwrap(), supp);
    assert!(JobSpec::from_toml("command = 3").is_err());
}

#[test]
fn job_file_drives_a_run() {
    let dir = std::env::temp_dir().join(format!("gwa-rep-job-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.toml");
    std::fs::write(
        &path,
        r#"
command = "decide-pu"
seed = "mu, alpha"

[presentation.preset]
name = "uqsl2"
q = "i"

[params]
mu = "1"
alpha = "2"
a = "1/2"

[descriptor]
kind = "f"
f = "x - a"
"#,
    )
    .unwrap();
    let (code, v) = gwa_json(&["decide-pu", "--job", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdict"]["decision"], "Yes");
    // flags override the file
    let (_, v) = gwa_json(&["decide-pu", "--job", path.to_str().unwrap(), "--a", "1"]);
    assert_eq!(v["verdict"]["decision"], "No");
    std::fs::remove_dir_all(&dir).ok();
}
