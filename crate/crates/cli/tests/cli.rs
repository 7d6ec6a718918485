use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Runs the binary in the fixture directory and parses the JSON report.
fn run(args: &[&str]) -> (i32, Value) {
    let o = Command::new(env!("CARGO_BIN_EXE_stackcoh")).current_dir(fixtures()).args(args).args(["--format", "json"]).output().unwrap();
    let report: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    let code = o.status.code().unwrap();
    assert_eq!(report["exit_code"], code, "{args:?}");
    (code, report)
}

#[test]
fn z2_cohomology_table() {
    let o = Command::new(env!("CARGO_BIN_EXE_stackcoh"))
        .current_dir(fixtures())
        .args(["cohomology", "z2.json", "--coeff", "Z", "--max-degree", "4"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let table = String::from_utf8(o.stdout).unwrap();
    let groups: Vec<&str> = table.lines().skip(3).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(groups, ["Z", "0", "Z/2", "0", "Z/2"]);
    let (_, report) = run(&["cohomology", "z2.json", "--max-degree", "4"]);
    assert_eq!(report["result"]["degrees"][2]["group"], serde_json::json!({"rank": 0, "torsion": [2]}));
}

#[test]
fn v4_dd_class_is_nonzero_torsion() {
    let (code, report) = run(&["dd-class", "v4_sigma.json"]);
    assert_eq!(code, 0);
    let class = &report["result"]["class"];
    assert_eq!(class["zero"], false);
    assert_eq!(class["group"]["rank"], 0);
    assert_eq!(class["coordinates"], serde_json::json!([1]));
}

#[test]
fn triangle_refinement_is_all_iso() {
    let (code, report) = run(&["morita-verify", "circle_refinement.json"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["all_iso"], true);
    let degrees = report["result"]["degrees"].as_array().unwrap();
    assert!(degrees.iter().all(|d| d["verdict"] == "Iso" && d["coarse"] == d["fine"]));
    let ranks: Vec<u64> = degrees.iter().map(|d| d["coarse"]["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 1, 0, 0]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["realize-bundle", "sphere_half_area.json"]).0, 2);
    let (code, report) = run(&["realize-bundle", "sphere_half_area.json"]);
    assert_eq!((code, report["error"]["kind"].as_str()), (2, Some("NotIntegral")));
    let (code, report) = run(&["morita-validate", "v4_to_z2.json"]);
    assert_eq!(code, 2);
    assert!(!report["error"]["details"].as_array().unwrap().is_empty());
    let (code, report) = run(&["cohomology", "sphere_facets.json", "--cell-cap", "10"]);
    assert_eq!(code, 3);
    assert_eq!(report["error"]["details"]["cap"], 10);
    assert_eq!(run(&["cohomology", "missing.json"]).0, 1);
    assert_eq!(run(&["tensor", "v4_sigma.json"]).0, 1);
    assert_eq!(run(&["chern", "z2.json"]).0, 1);
}

#[test]
fn schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let cases = [
        write("kind.json", r#"{"kind": "sheaf"}"#),
        write("version.json", r#"{"kind": "groupoid", "version": 2, "builtin": "Z2"}"#),
        write("field.json", r#"{"kind": "groupoid", "builtin": "Z2", "colour": "red"}"#),
        write(
            "float.json",
            r#"{"kind": "cochain", "space": {"kind": "groupoid", "builtin": "Z2"}, "bidegree": [2, 0], "values": [{"cell": ["1", "1"], "value": 0.5}]}"#,
        ),
        write(
            "cell.json",
            r#"{"kind": "cochain", "space": {"kind": "groupoid", "builtin": "Z2"}, "bidegree": [2, 0], "values": [{"cell": ["1", "7"], "value": 1}]}"#,
        ),
        write("json.json", "{"),
    ];
    for p in &cases {
        assert_eq!(run(&["validate", p]).0, 1, "{p}");
    }
}

#[test]
fn circle_values_round_trip_through_documents() {
    let dir = tempfile::tempdir().unwrap();
    let (_, report) = run(&["enumerate-extensions", "v4.json", "--fiber-order", "2"]);
    let classes = report["result"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    for (i, c) in classes.iter().enumerate() {
        let p = dir.path().join(format!("sigma{i}.json"));
        std::fs::write(&p, serde_json::to_string(&c["cocycle"]).unwrap()).unwrap();
        let (code, dd) = run(&["dd-class", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(dd["result"]["class"], c["dd_class"]);
    }
}

#[test]
fn bundle_commands_agree() {
    let (_, chern) = run(&["chern", "sphere_bundle.json"]);
    assert_eq!(chern["result"]["class"]["coordinates"], serde_json::json!([1]));
    let (_, curv) = run(&["pseudo-curvature", "sphere_bundle.json", "sphere_connection.json"]);
    assert_eq!(curv["result"]["matches_chern"], true);
    let (_, pair) = run(&["pair", "sphere_half_area.json"]);
    assert_eq!(pair["result"]["integral"], false);
    assert_eq!(pair["result"]["fundamental"], "1/2");
    let (_, integrality) = run(&["integrality", "sphere_half_area.json"]);
    assert_eq!(integrality["result"]["integral"], false);
}

#[test]
fn holonomy_and_gerbes() {
    let (_, h) = run(&["holonomy", "circle_half_flat.json", "--loop", "0,1,2,0"]);
    assert_eq!(h["result"]["loop"]["holonomy"], "1/2 mod 1");
    assert_eq!(h["result"]["holonomy_free"], false);
    let (_, flat) = run(&["flat-check", "v4_sigma.json", "v4_a.json", "v4_b.json"]);
    assert_eq!(flat["result"]["flat"], true);
    let (_, t) = run(&["tensor", "v4_sigma.json", "v4_sigma.json"]);
    assert_eq!(t["result"]["dd_class"]["zero"], true);
    let (_, e) = run(&["extension-build", "v4_sigma.json"]);
    assert_eq!((e["result"]["arrows"].as_u64(), e["result"]["abelian"].as_bool()), (Some(8), Some(false)));
    let (_, c) = run(&["extension-cocycle", "v4_extension.json"]);
    assert_eq!(c["result"]["dd_class"]["zero"], false);
}

#[test]
fn jobs_match_direct_runs() {
    let (_, job) = run(&["run", "job_z2_cohomology.json"]);
    let (_, direct) = run(&["cohomology", "z2.json", "--coeff", "Z", "--max-degree", "4"]);
    assert_eq!(job, direct);
}

#[test]
fn fixtures_conform_to_schemas() {
    let schemas = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
    let mut seen = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let kind = doc["kind"].as_str().unwrap();
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(schemas.join(format!("{kind}.v1.json"))).unwrap()).unwrap();
        let validator = jsonschema::validator_for(&schema).unwrap();
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", path.display());
        seen += 1;
    }
    assert!(seen >= 20);
}

#[test]
fn reports_conform_to_their_own_input_schema() {
    // cochain documents written by the CLI read back under the cochain schema
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/cochain.v1.json")).unwrap())
            .unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let (_, r) = run(&["realize-bundle", "sphere_area.json"]);
    for key in ["bundle", "connection", "circle_values"] {
        assert!(validator.is_valid(&r["result"][key]), "{key}");
    }
}
