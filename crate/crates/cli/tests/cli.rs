//! Subcommand behavior: outputs, file handling, JSON envelopes, exit codes.

use std::path::PathBuf;

use forkplex_cli::run_captured;

fn catalog(stem: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../catalog")
        .join(format!("{stem}.fork"))
        .to_str()
        .unwrap()
        .to_string()
}

fn temp_file(name: &str, content: &str) -> String {
    let dir = std::env::temp_dir().join(format!("forkplex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn width_of_the_t3_fixture() {
    let (code, out, _) = run_captured(&["width", &catalog("t3_untelescoped")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "2,2");
}

#[test]
fn compare_the_reference_multisets() {
    // Chains realizing the two reference multisets.
    let m2 = temp_file(
        "m2.fork",
        "fork a1 side A grip s1:5\n\
         fork b1 side B grip s1:5 tines u:3\n\
         fork a2 side A grip s2:3 tines u:3\n\
         fork b2 side B grip s2:3 tines v:2\n\
         fork a3 side A grip s3:2 tines v:2\n\
         fork b3 side B grip s3:2 tines w:2\n\
         fork a4 side A grip s4:2 tines w:2\n\
         fork b4 side B grip s4:2 tines x:2\n\
         fork a5 side A grip s5:2 tines x:2\n\
         fork b5 side B grip s5:2 tines y:1\n\
         fork a6 side A grip s6:1 tines y:1\n\
         fork b6 side B grip s6:1\n",
    );
    let m1 = temp_file(
        "m1.fork",
        "fork a1 side A grip s1:5\n\
         fork b1 side B grip s1:5 tines u:4\n\
         fork a2 side A grip s2:4 tines u:4\n\
         fork b2 side B grip s2:4 tines v:1\n\
         fork a3 side A grip s3:1 tines v:1\n\
         fork b3 side B grip s3:1 tines w:1\n\
         fork a4 side A grip s4:1 tines w:1\n\
         fork b4 side B grip s4:1\n",
    );
    let (code, out, _) = run_captured(&["width", &m2]);
    assert_eq!((code, out.trim()), (0, "5,3,2,2,2,1"));
    let (code, out, _) = run_captured(&["width", &m1]);
    assert_eq!((code, out.trim()), (0, "5,4,1,1"));
    let (code, out, _) = run_captured(&["compare", &m2, &m1]);
    assert_eq!((code, out.trim()), (0, "<"));
    let (code, out, _) = run_captured(&["compare", &m1, &m2]);
    assert_eq!((code, out.trim()), (0, ">"));
    let (code, out, _) = run_captured(&["compare", &m1, &m1]);
    assert_eq!((code, out.trim()), (0, "="));
}

#[test]
fn validate_reports_summary() {
    let (code, out, _) = run_captured(&["validate", &catalog("ball2")]);
    assert_eq!(code, 0);
    assert!(out.contains("2 forks"));
    assert!(out.contains("width 0"));
    assert!(out.contains("euler 1"));
}

#[test]
fn apply_writes_the_result() {
    let input = temp_file(
        "bundle.fork",
        "fork fa side A grip S:3\nfork fb side B grip S:3\n",
    );
    let output = temp_file("reduced.fork", "");
    let (code, out, _) = run_captured(&[
        "apply",
        &input,
        "--move",
        "weakreduce grip=S case=NU a=1 b=1",
        "-o",
        &output,
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "{3} -> {2,2} LESS");
    let written = std::fs::read_to_string(&output).unwrap();
    let expected = std::fs::read_to_string(catalog("t3_untelescoped")).unwrap();
    assert_eq!(written, expected);
}

#[test]
fn apply_rejects_inapplicable_moves() {
    let (code, _, err) = run_captured(&[
        "apply",
        &catalog("product_type_i_g2"),
        "--move",
        "destabilize grip=s0",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("invalid"), "stderr: {err}");
    let (code, _, _) = run_captured(&["apply", &catalog("ball1"), "--move", "explode grip=x"]);
    assert_eq!(code, 2);
}

#[test]
fn search_follows_recorded_assertions() {
    let input = temp_file(
        "asserted.fork",
        "fork fa side A grip S:3\nfork fb side B grip S:3\nassert S \"weakly-reducible NU 1 1\"\n",
    );
    let (code, out, _) = run_captured(&["search", &input]);
    assert_eq!(code, 0);
    assert!(out.contains("width 2,2 after 1 moves"), "got: {out}");

    let (code, out, _) = run_captured(&["search", &input, "--json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(value["format"], 1);
    assert_eq!(value["width"], serde_json::json!([2, 2]));
    assert_eq!(value["trace"].as_array().unwrap().len(), 1);

    let (code, out, _) = run_captured(&["brute", &input]);
    assert_eq!(code, 0);
    assert!(out.contains("min width 2,2"), "got: {out}");
}

#[test]
fn render_produces_dot_and_svg() {
    let (code, out, _) = run_captured(&["render", &catalog("product_type_i_g2")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    let (code, out, _) = run_captured(&["render", &catalog("ball1"), "--format", "svg"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<svg"));
    let (code, _, _) = run_captured(&["render", &catalog("ball1"), "--format", "png"]);
    assert_eq!(code, 2);
}

#[test]
fn catalog_round_trips_through_files() {
    let out_path = temp_file("t3_again.fork", "");
    let (code, _, _) = run_captured(&["catalog", "t3-untelescoped", "-o", &out_path]);
    assert_eq!(code, 0);
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        std::fs::read_to_string(catalog("t3_untelescoped")).unwrap()
    );
    let (code, _, err) = run_captured(&["catalog", "product-type-i"]);
    assert_eq!(code, 2, "missing --genus is a usage error: {err}");
    let (code, _, _) = run_captured(&["catalog", "circle-bundle", "--genus", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn json_envelopes_carry_the_format_version() {
    for args in [
        vec!["width", &*catalog("ball1"), "--json"],
        vec!["validate", &*catalog("ball1"), "--json"],
        vec!["catalog", "ball1", "--json"],
        vec!["render", &*catalog("ball1"), "--json"],
    ] {
        let (code, out, _) = run_captured(&args);
        assert_eq!(code, 0, "{args:?}");
        let value: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(value["format"], 1, "{args:?}");
    }
}

#[test]
fn missing_files_and_bad_usage_exit_2() {
    assert_eq!(run_captured(&["width"]).0, 2);
    assert_eq!(run_captured(&["width", "/no/such/file.fork"]).0, 2);
    assert_eq!(run_captured(&["compare", &catalog("ball1")]).0, 2);
    assert_eq!(run_captured(&[]).0, 2);
    assert_eq!(run_captured(&["help"]).0, 0);
}
