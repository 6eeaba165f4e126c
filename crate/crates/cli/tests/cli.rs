use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn ratmap(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ratmap")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write_map(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn strip_timings(mut v: Value) -> Value {
    v["timings_ms"] = Value::Object(Default::default());
    v
}

/// Object keys and requiredness against the schema; enough to catch a
/// renamed or undocumented field.
fn check_shape(root: &Value, schema: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = match schema.get("$ref").and_then(Value::as_str) {
        Some(r) => &root["$defs"][r.trim_start_matches("#/$defs/")],
        None => schema,
    };
    match v {
        Value::Object(map) => {
            let props = schema.get("properties").and_then(Value::as_object);
            for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
                if !map.contains_key(key.as_str().unwrap()) {
                    errors.push(format!("{path}: missing {key}"));
                }
            }
            for (k, child) in map {
                match props.and_then(|p| p.get(k)) {
                    Some(s) => check_shape(root, s, child, &format!("{path}.{k}"), errors),
                    None if props.is_some() => errors.push(format!("{path}: undeclared {k}")),
                    None => {}
                }
            }
        }
        Value::Array(items) => {
            if let Some(s) = schema.get("items") {
                for (i, child) in items.iter().enumerate() {
                    check_shape(root, s, child, &format!("{path}[{i}]"), errors);
                }
            }
        }
        _ => {}
    }
}

#[test]
fn quintic_report_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let map = repo("examples_maps/quintic.map");
    let (code, stdout, stderr) =
        ratmap(&["analyze", map.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    let got: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(repo("docs/report.schema.json")).unwrap()).unwrap();
    let mut errors = Vec::new();
    check_shape(&schema, &schema, &got, "", &mut errors);
    assert!(errors.is_empty(), "{errors:?}");
    let golden: Value = serde_json::from_str(
        &std::fs::read_to_string(repo("crates/cli/tests/golden/quintic.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(strip_timings(got), strip_timings(golden));
}

#[test]
fn not_generically_finite_exits_2_without_fibers() {
    let map = repo("examples_maps/projection.map");
    let (code, stdout, _) = ratmap(&["analyze", map.to_str().unwrap(), "--json", "-"]);
    assert_eq!(code, 2);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["status"], "hypothesis_failure");
    assert!(doc.get("fibers").is_none());
    let (code, _, stderr) = ratmap(&["fibers", map.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not generically finite"), "{stderr}");
}

#[test]
fn common_factor_is_a_hypothesis_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(&dir, "m.map", "field = QQ\nsource = X0, X1, X2\nf0 = X0^2\nf1 = X0*X1\nf2 = X0*X2\nf3 = X0*X1 + X0*X2\n");
    let (code, stdout, _) = ratmap(&["analyze", &f, "--json", "-"]);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["input"]["removed_factor"], "X0");
    assert_eq!(doc["hypotheses"]["gcd_one"], false);
    assert_eq!(code, 2);
}

#[test]
fn constant_map_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(&dir, "m.map", "field = GF 7\nsource = X0, X1, X2\nf0 = X0\nf1 = 2*X0\nf2 = 3*X0\n");
    let (code, _, stderr) = ratmap(&["fibers", &f]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn irrational_fiber_points_exit_3() {
    // On the lines X0 = ±√2 X2 every form restricts to a multiple of X1 X2^2,
    // with factor 1 or ±√2; the two fibers sit over conjugate irrational points.
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(
        &dir,
        "m.map",
        "field = QQ\nsource = X0, X1, X2\nf0 = X1*X2^2\nf1 = X0*X1*X2\nf2 = X1*X2^2 + X0*(X0^2 - 2*X2^2)\nf3 = X0*X1*X2 + X1*(X0^2 - 2*X2^2)\n",
    );
    let (code, stdout, _) = ratmap(&["analyze", &f, "--json", "-"]);
    assert_eq!(code, 3);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["status"], "incomplete");
    let fibers = &doc["fibers"];
    assert_eq!(fibers["complete"], false);
    assert_eq!(fibers["records"].as_array().unwrap().len(), 2);
    let passes = fibers["candidate_passes"].as_array().unwrap();
    assert_eq!(passes[1]["residual_degree"], 2);
    assert_eq!(passes[1]["splits"], false);
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(&dir, "bad.map", "field = QQ\nsource = X0, X1, X2\nf0 = X0 + Y1\n");
    let (code, _, stderr) = ratmap(&["image", &f]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 3, column 11"), "{stderr}");
}

#[test]
fn image_of_the_quadratic_transformation_is_the_plane() {
    let map = repo("examples_maps/cremona.map");
    let (code, stdout, _) = ratmap(&["image", map.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("image dimension 2"), "{stdout}");
}

#[test]
fn cohomology_of_a_base_point_free_map_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(&dir, "m.map", "field = QQ\nsource = X0, X1, X2\nf0 = X0^2\nf1 = X1^2\nf2 = X2^2\nf3 = X0*X1\n");
    let (code, stdout, _) = ratmap(&["cohomology", &f, "--mu", "-2", "--s-max", "4"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("stable value 0"), "{stdout}");
}

#[test]
fn bounds_on_the_quadratic_transformation() {
    let map = repo("examples_maps/cremona.map");
    let (code, stdout, _) = ratmap(&["bounds", map.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("s = 2: sum deg h_y = 3 <= indeg = 3 (sd = 4): Holds"), "{stdout}");
}
