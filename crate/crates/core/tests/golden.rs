//! Golden-file checks for the shipped catalog fixtures.

use std::path::PathBuf;

use forkplex::catalog::{build_catalog, fixture_entries};
use forkplex::io::{format_complex, parse_complex};

fn fixture_path(stem: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../catalog")
        .join(format!("{stem}.fork"))
}

#[test]
fn fixtures_match_the_builders_byte_for_byte() {
    for (stem, key) in fixture_entries() {
        let expected = format_complex(&build_catalog(key).unwrap());
        let on_disk = std::fs::read_to_string(fixture_path(stem))
            .unwrap_or_else(|e| panic!("missing fixture {stem}: {e}"));
        assert_eq!(on_disk, expected, "fixture {stem} drifted");
    }
}

#[test]
fn fixtures_parse_back_to_the_catalog_entries() {
    for (stem, key) in fixture_entries() {
        let text = std::fs::read_to_string(fixture_path(stem)).unwrap();
        let parsed = parse_complex(&text).unwrap();
        let built = build_catalog(key).unwrap();
        assert_eq!(
            parsed.complex().canonical_form(),
            built.complex().canonical_form(),
            "fixture {stem}"
        );
        assert_eq!(format_complex(&parsed), text, "fixture {stem} not byte-stable");
    }
}
