//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its timing (visible under `--nocapture`).
//!
//! Run with: `cargo test -p forkplex-cli --test acceptance -- --nocapture`

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use forkplex::catalog::{build_catalog, fixture_entries, CatalogKey};
use forkplex::gen;
use forkplex::io::{format_complex, parse_complex, parse_dot, render_dot};
use forkplex::search::{brute_force_min_width, thin_search, AssertionSet, SearchBudget};
use forkplex::{
    apply_move, check_exact, compare_width, Genus, Move, Vertex, WidthMultiset,
};

fn w(values: &[u32]) -> WidthMultiset {
    WidthMultiset::from(values)
}

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn report(criterion: &str, start: Instant) {
    println!("criterion {criterion}: PASS ({:.2?})", start.elapsed());
}

/// Criterion 1: the width order reproduces the two reference comparisons
/// exactly, and the order axioms hold on 1000 random multisets against the
/// sentinel-padding oracle, in under a second.
#[test]
fn criterion_1_width_order() {
    let start = Instant::now();
    assert_eq!(
        compare_width(&w(&[5, 3, 2, 2, 2, 1]), &w(&[5, 4, 1, 1])),
        Ordering::Less
    );
    assert_eq!(
        compare_width(&w(&[3, 1, 0, 0]), &w(&[3, 1, 0, 0, 0])),
        Ordering::Less
    );

    fn oracle(a: &[u32], b: &[u32]) -> Ordering {
        let arrange = |values: &[u32], len: usize| {
            let mut v: Vec<i64> = values.iter().map(|&x| i64::from(x)).collect();
            v.sort_unstable_by(|x, y| y.cmp(x));
            v.resize(len, -1);
            v
        };
        let len = a.len().max(b.len());
        arrange(a, len).cmp(&arrange(b, len))
    }

    let mut rng = gen::Rng::new(0x01de2);
    let random_multiset = |rng: &mut gen::Rng| -> Vec<u32> {
        let len = rng.below(8) as usize;
        (0..len).map(|_| rng.below(9) as u32).collect()
    };
    let sets: Vec<Vec<u32>> = (0..1000).map(|_| random_multiset(&mut rng)).collect();
    for (i, a) in sets.iter().enumerate() {
        let wa = w(a);
        // Agreement with the oracle and antisymmetry / totality.
        for b in sets.iter().skip(i).take(20) {
            let wb = w(b);
            let fwd = compare_width(&wa, &wb);
            assert_eq!(fwd, oracle(a, b));
            assert_eq!(compare_width(&wb, &wa), fwd.reverse());
            if fwd == Ordering::Equal {
                assert_eq!(wa, wb);
            }
        }
    }
    // Transitivity on consecutive triples.
    for window in sets.windows(3) {
        let (x, y, z) = (w(&window[0]), w(&window[1]), w(&window[2]));
        if compare_width(&x, &y) != Ordering::Greater
            && compare_width(&y, &z) != Ordering::Greater
        {
            assert_ne!(compare_width(&x, &z), Ordering::Greater);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "too slow: {:?}", start.elapsed());
    report("1 (width order fixtures and axioms)", start);
}

/// Criterion 2: every catalog entry validates, is exact, and has the
/// documented width, with the genus-parameterized families swept over
/// g = 1..6; the two-step untelescoping carries genus-4 pieces first and
/// genus-2 pieces second. Under a second.
#[test]
fn criterion_2_catalog_regression() {
    let start = Instant::now();
    assert_eq!(build_catalog(CatalogKey::Ball1).unwrap().width(), w(&[0]));
    assert_eq!(build_catalog(CatalogKey::Ball2).unwrap().width(), w(&[0]));
    for g in 1..=6u32 {
        assert_eq!(
            build_catalog(CatalogKey::ProductTypeI(Genus(g))).unwrap().width(),
            w(&[g])
        );
        assert_eq!(
            build_catalog(CatalogKey::ProductTypeII(Genus(g))).unwrap().width(),
            w(&[2 * g])
        );
        assert_eq!(
            build_catalog(CatalogKey::CircleBundleTrivial(Genus(g))).unwrap().width(),
            w(&[2 * g + 1])
        );
    }
    assert_eq!(
        build_catalog(CatalogKey::T3Untelescoped).unwrap().width(),
        w(&[2, 2])
    );
    let a = build_catalog(CatalogKey::F2S1UntelescopedA).unwrap();
    assert_eq!(a.width(), w(&[4, 4]));
    // First untelescoping: the outer pieces are genus-four handlebodies.
    for fork in ["A1", "B2"] {
        let id = a.complex().fork_by_name(fork).unwrap();
        let body = a.complex().induced_body(id);
        assert!(body.is_handlebody());
        assert_eq!(body.plus_genus(), Genus(4));
    }
    for key in [CatalogKey::F2S1UntelescopedB, CatalogKey::F2S1UntelescopedC] {
        let gs = build_catalog(key).unwrap();
        assert_eq!(gs.width(), w(&[2, 2, 2, 2]));
        // Second untelescoping: every splitting surface has genus two.
        for fid in gs.complex().fork_ids() {
            assert_eq!(gs.complex().induced_body(fid).plus_genus(), Genus(2));
        }
        // Exactness (already enforced on construction; re-checked).
        assert!(check_exact(gs.complex()).is_ok());
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "too slow: {:?}", start.elapsed());
    report("2 (catalog regression)", start);
}

/// Expected Euler delta of a move: relabeling a boundary grip swaps the
/// underlying manifold, every other rewrite preserves it.
fn expected_euler_delta(gs: &forkplex::GeneralizedSplitting, mv: &Move) -> i64 {
    match mv {
        Move::Stabilize { grip } | Move::Destabilize { grip } => {
            let id = gs.complex().node_by_name(grip).unwrap();
            if gs.complex().is_interior(id) {
                0
            } else if matches!(mv, Move::Stabilize { .. }) {
                -1
            } else {
                1
            }
        }
        _ => 0,
    }
}

/// Criterion 3: the complex Euler characteristic is conserved exactly by
/// every manifold-preserving move, on every catalog entry and on 1000
/// random valid moves over random complexes of at most 10 forks; the
/// catalog values are 1 for balls, 2-2g for products, 0 for circle bundles.
#[test]
fn criterion_3_euler_conservation() {
    let start = Instant::now();
    assert_eq!(build_catalog(CatalogKey::Ball1).unwrap().complex().complex_euler(), 1);
    assert_eq!(build_catalog(CatalogKey::Ball2).unwrap().complex().complex_euler(), 1);
    for g in 1..=6u32 {
        let expected = 2 - 2 * i64::from(g);
        assert_eq!(
            build_catalog(CatalogKey::ProductTypeI(Genus(g))).unwrap().complex().complex_euler(),
            expected
        );
        assert_eq!(
            build_catalog(CatalogKey::ProductTypeII(Genus(g))).unwrap().complex().complex_euler(),
            expected
        );
        assert_eq!(
            build_catalog(CatalogKey::CircleBundleTrivial(Genus(g)))
                .unwrap()
                .complex()
                .complex_euler(),
            0
        );
    }
    for key in [
        CatalogKey::T3Untelescoped,
        CatalogKey::F2S1UntelescopedA,
        CatalogKey::F2S1UntelescopedB,
        CatalogKey::F2S1UntelescopedC,
    ] {
        assert_eq!(build_catalog(key).unwrap().complex().complex_euler(), 0);
    }

    // Every applicable move on every catalog entry.
    let mut catalog_moves = 0;
    for (_, key) in fixture_entries() {
        let gs = build_catalog(key).unwrap();
        let before = gs.complex().complex_euler();
        for em in forkplex::enumerate_moves(&gs, &AssertionSet::new()) {
            if let Ok(report) = apply_move(&gs, &em.mv) {
                assert_eq!(
                    report.result.complex().complex_euler(),
                    before + expected_euler_delta(&gs, &em.mv),
                    "{key} / {}",
                    em.mv
                );
                catalog_moves += 1;
            }
        }
    }
    assert!(catalog_moves > 20, "only {catalog_moves} catalog moves exercised");

    // 1000 random valid moves.
    let instances = gen::move_instances(0xe51e5, 10, 1000);
    for (gs, mv) in &instances {
        let before = gs.complex().complex_euler();
        let report = apply_move(gs, mv).expect("generated moves apply");
        assert_eq!(
            report.result.complex().complex_euler(),
            before + expected_euler_delta(gs, mv),
            "{mv}"
        );
    }
    report("3 (Euler characteristic conservation)", start);
}

/// Criterion 4: weak-reduce then amalgamate and stabilize then destabilize
/// are identities on canonical forms, for every NN/NU instance with g <= 6
/// and for the untelescoped fixtures.
#[test]
fn criterion_4_round_trips() {
    let start = Instant::now();

    let closed = |g: u32| {
        let text = format!("fork fa side A grip S:{g}\nfork fb side B grip S:{g}\n");
        parse_complex(&text).unwrap()
    };
    let amalgamation_of = |gs: &forkplex::GeneralizedSplitting| -> Move {
        forkplex::enumerate_moves(gs, &AssertionSet::new())
            .into_iter()
            .find(|m| matches!(m.mv, Move::Amalgamate { .. }))
            .expect("amalgamation available")
            .mv
    };

    for g in 2..=6u32 {
        let gs = closed(g);
        let key = gs.complex().canonical_form();
        let mut specs = vec![format!("weakreduce grip=S case=NN")];
        for a in 0..=(g - 1) / 2 {
            specs.push(format!("weakreduce grip=S case=NU a={a} b={}", g - 1 - a));
        }
        for spec in specs {
            let mv = forkplex::io::parse_move(&spec).unwrap();
            let reduced = apply_move(&gs, &mv).unwrap();
            let back = apply_move(&reduced.result, &amalgamation_of(&reduced.result)).unwrap();
            assert_eq!(back.result.complex().canonical_form(), key, "{spec}");
        }
        // Stabilize / destabilize round trip.
        let up = apply_move(&gs, &Move::Stabilize { grip: "S".into() }).unwrap();
        let down = apply_move(&up.result, &Move::Destabilize { grip: "S".into() }).unwrap();
        assert_eq!(down.result.complex().canonical_form(), key);
    }

    for (key, bundle_genus) in [
        (CatalogKey::T3Untelescoped, 1u32),
        (CatalogKey::F2S1UntelescopedA, 2),
    ] {
        let gs = build_catalog(key).unwrap();
        let back = apply_move(&gs, &amalgamation_of(&gs)).unwrap();
        let bundle = build_catalog(CatalogKey::CircleBundleTrivial(Genus(bundle_genus))).unwrap();
        assert_eq!(
            back.result.complex().canonical_form(),
            bundle.complex().canonical_form()
        );
        // ... and reducing the bundle again restores the untelescoped form.
        let grip = back
            .result
            .complex()
            .nodes()
            .iter()
            .find(|n| n.kind == forkplex::NodeKind::Grip)
            .unwrap()
            .name
            .clone();
        let lower = bundle_genus; // a + b = 2g, split evenly
        let spec = format!(
            "weakreduce grip={grip} case=NU a={lower} b={}",
            2 * bundle_genus - lower
        );
        let reduced = apply_move(&back.result, &forkplex::io::parse_move(&spec).unwrap()).unwrap();
        assert_eq!(
            reduced.result.complex().canonical_form(),
            gs.complex().canonical_form()
        );
        // Stabilize / destabilize on a fixture grip.
        let grip = gs
            .complex()
            .nodes()
            .iter()
            .find(|n| n.kind == forkplex::NodeKind::Grip)
            .unwrap()
            .name
            .clone();
        let up = apply_move(&gs, &Move::Stabilize { grip: grip.clone() }).unwrap();
        let down = apply_move(&up.result, &Move::Destabilize { grip }).unwrap();
        assert_eq!(
            down.result.complex().canonical_form(),
            gs.complex().canonical_form()
        );
    }
    report("4 (round trips on canonical forms)", start);
}

/// Criterion 5: on 1000 random well-formed complexes the solver agrees with
/// the independent pinned-path checker; every accepted assignment passes
/// the strict-edge audit; every injected two-fork cycle is rejected with a
/// cycle witness. Under five seconds.
#[test]
fn criterion_5_exactness_solver() {
    let start = Instant::now();

    fn oracle_feasible(complex: &forkplex::ForkComplex) -> bool {
        let digraph = complex.exactness_digraph();
        let mut indegree: std::collections::BTreeMap<Vertex, usize> =
            digraph.vertices().iter().map(|&v| (v, 0)).collect();
        for (_, v) in digraph.edges() {
            *indegree.get_mut(&v).unwrap() += 1;
        }
        let mut queue: Vec<Vertex> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&v, _)| v)
            .collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for &u in digraph.successors(v) {
                let d = indegree.get_mut(&u).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(u);
                }
            }
        }
        if removed != digraph.vertices().len() {
            return false;
        }
        let (lower, upper) = complex.boundary_partition();
        let pin = |v: Vertex| match v {
            Vertex::Node(id) if lower.contains(&id) => Some(0u8),
            Vertex::Node(id) if upper.contains(&id) => Some(1),
            _ => None,
        };
        for &startv in digraph.vertices() {
            let Some(pin_start) = pin(startv) else { continue };
            let mut stack = vec![startv];
            let mut seen = BTreeSet::new();
            while let Some(v) = stack.pop() {
                for &u in digraph.successors(v) {
                    if seen.insert(u) {
                        if pin(u).is_some_and(|p| p <= pin_start) {
                            return false;
                        }
                        stack.push(u);
                    }
                }
            }
        }
        true
    }

    let mut accepted = 0;
    for seed in 0..1000u64 {
        let complex = if seed % 2 == 0 {
            gen::random_complex(seed, 9)
        } else {
            gen::random_complex_loopy(seed, 9)
        };
        match check_exact(&complex) {
            Ok(levels) => {
                accepted += 1;
                assert!(oracle_feasible(&complex), "seed {seed}: oracle disagrees");
                let digraph = complex.exactness_digraph();
                for (u, v) in digraph.edges() {
                    assert!(levels.level(u) < levels.level(v), "seed {seed}");
                }
            }
            Err(_) => {
                assert!(!oracle_feasible(&complex), "seed {seed}: oracle disagrees");
            }
        }
    }
    assert!(accepted >= 500, "mix too skewed: {accepted} feasible");

    for seed in 0..200u64 {
        let complex = gen::complex_with_injected_cycle(seed, 6);
        match check_exact(&complex) {
            Err(forkplex::Infeasibility::Cycle(cycle)) => assert!(cycle.len() >= 2),
            other => panic!("seed {seed}: expected cycle witness, got {other:?}"),
        }
    }
    assert!(start.elapsed().as_secs_f64() < 5.0, "too slow: {:?}", start.elapsed());
    report("5 (exactness solver vs oracle)", start);
}

/// Criterion 6: every permitted width-decreasing move application in the
/// corpus strictly lowers the width, and the three-torus pipeline runs
/// {3} -> {2,2} -> {3} with the amalgamation restoring the original form.
#[test]
fn criterion_6_monotonicity() {
    let start = Instant::now();

    let mut decreasing_applications = 0;
    let mut corpus: Vec<forkplex::GeneralizedSplitting> = fixture_entries()
        .iter()
        .map(|(_, key)| build_catalog(*key).unwrap())
        .collect();
    for seed in 0..60u64 {
        corpus.push(gen::random_splitting(seed, 8));
    }
    for gs in &corpus {
        let assertions = gen::random_assertions(0xdec0 ^ gs.width().len() as u64, gs);
        for em in forkplex::enumerate_moves(gs, &assertions) {
            if !(em.satisfied && em.decreasing) {
                continue;
            }
            if let Ok(report) = apply_move(gs, &em.mv) {
                assert_eq!(
                    compare_width(&report.new_width, &report.old_width),
                    Ordering::Less,
                    "{}",
                    em.mv
                );
                decreasing_applications += 1;
            }
        }
    }
    assert!(
        decreasing_applications > 30,
        "only {decreasing_applications} decreasing applications exercised"
    );

    // The three-torus pipeline.
    let bundle = build_catalog(CatalogKey::CircleBundleTrivial(Genus(1))).unwrap();
    assert_eq!(bundle.width(), w(&[3]));
    let grip = bundle.complex().nodes()[0].name.clone();
    let reduced = apply_move(
        &bundle,
        &forkplex::io::parse_move(&format!("weakreduce grip={grip} case=NU a=1 b=1")).unwrap(),
    )
    .unwrap();
    assert_eq!(reduced.new_width, w(&[2, 2]));
    assert_eq!(reduced.ordering, Ordering::Less);
    let t3 = build_catalog(CatalogKey::T3Untelescoped).unwrap();
    assert_eq!(
        reduced.result.complex().canonical_form(),
        t3.complex().canonical_form()
    );
    let amalg = forkplex::enumerate_moves(&reduced.result, &AssertionSet::new())
        .into_iter()
        .find(|m| matches!(m.mv, Move::Amalgamate { .. }))
        .unwrap();
    let back = apply_move(&reduced.result, &amalg.mv).unwrap();
    assert_eq!(back.new_width, w(&[3]));
    assert_eq!(back.ordering, Ordering::Greater);
    assert_eq!(
        back.result.complex().canonical_form(),
        bundle.complex().canonical_form()
    );
    report("6 (monotonicity and the T3 pipeline)", start);
}

/// Criterion 7: the best-first search and the brute-force closure agree on
/// every catalog entry and on 200 random complexes of at most 8 forks, and
/// the genus-3 circle-bundle splitting reaches {2,2} in one move. Under a
/// minute in total.
#[test]
fn criterion_7_search_oracle_equivalence() {
    let start = Instant::now();
    let budget = SearchBudget {
        max_depth: 12,
        max_states: 4000,
        allow_nondecreasing: false,
    };

    for (_, key) in fixture_entries() {
        let gs = build_catalog(key).unwrap();
        let assertions = AssertionSet::from_splitting(&gs);
        let searched = thin_search(&gs, &budget, &assertions);
        let brute = brute_force_min_width(&gs, &budget, &assertions);
        assert!(!searched.budget_exhausted && !brute.budget_exhausted, "{key}");
        assert_eq!(searched.width, brute.min_width, "{key}");
    }

    for seed in 0..200u64 {
        let gs = gen::random_splitting(seed.wrapping_mul(7919), 8);
        let assertions = gen::random_assertions(seed, &gs);
        let searched = thin_search(&gs, &budget, &assertions);
        let brute = brute_force_min_width(&gs, &budget, &assertions);
        if searched.budget_exhausted || brute.budget_exhausted {
            continue; // equality is only claimed for exhausted closures
        }
        assert_eq!(searched.width, brute.min_width, "seed {seed}");
        assert!(searched.width <= gs.width(), "seed {seed}");
        assert_eq!(searched.width == gs.width(), searched.trace.is_empty());
    }

    // One asserted reduction takes the trivial bundle splitting to {2,2}.
    let bundle = build_catalog(CatalogKey::CircleBundleTrivial(Genus(1))).unwrap();
    let mut assertions = AssertionSet::new();
    assertions.grant(&bundle.complex().nodes()[0].name, "weakly-reducible NU 1 1");
    let searched = thin_search(&bundle, &budget, &assertions);
    assert_eq!(searched.width, w(&[2, 2]));
    assert_eq!(searched.trace.len(), 1);
    assert!(start.elapsed().as_secs_f64() < 60.0, "too slow: {:?}", start.elapsed());
    report("7 (search agrees with the brute-force oracle)", start);
}

/// Criterion 8: parse/format is byte-stable on every fixture, the DOT
/// output parses and its edge set equals the exactness digraph, a 10k-argv
/// fuzz run never crashes, and the documented exit codes are observed.
#[test]
fn criterion_8_io_and_cli() {
    let start = Instant::now();

    for (stem, key) in fixture_entries() {
        let path = catalog_dir().join(format!("{stem}.fork"));
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = parse_complex(&text).unwrap();
        assert_eq!(format_complex(&parsed), text, "fixture {stem} not byte-stable");
        let built = build_catalog(key).unwrap();
        assert_eq!(
            parsed.complex().canonical_form(),
            built.complex().canonical_form()
        );

        let dot = render_dot(parsed.complex()).unwrap();
        let graph = parse_dot(&dot).unwrap_or_else(|e| panic!("fixture {stem}: {e}"));
        let digraph = parsed.complex().exactness_digraph();
        assert_eq!(graph.edges.len(), digraph.edge_count(), "fixture {stem}");
        // Edge sets are equal, not just equinumerous.
        let names: std::collections::BTreeMap<String, Vertex> = {
            let (node_names, _) = forkplex::io::canonical_names(parsed.complex());
            let order = parsed.complex().canonical_order();
            let mut map = std::collections::BTreeMap::new();
            for (i, &fid) in order.forks.iter().enumerate() {
                map.insert(format!("r{i}"), Vertex::Root(fid));
            }
            for (id, name) in node_names {
                map.insert(name, Vertex::Node(id));
            }
            map
        };
        for (u, v) in &graph.edges {
            let edge = (names[u], names[v]);
            assert!(
                digraph.edges().any(|(a, b)| (a, b) == edge),
                "fixture {stem}: rendered edge {u} -> {v} not in the digraph"
            );
        }
    }

    // Fuzz the argv surface; the driver asserts the exit-code contract.
    let codes = forkplex_cli::fuzz_run(10_000, 0xf022);
    assert!(codes.contains(&2), "fuzz never hit a usage error");

    // Documented exit codes on real invocations.
    let t3 = catalog_dir().join("t3_untelescoped.fork");
    let t3 = t3.to_str().unwrap();
    let (code, out, _) = forkplex_cli::run_captured(&["width", t3]);
    assert_eq!((code, out.trim()), (0, "2,2"));

    let dir = std::env::temp_dir().join(format!("forkplex-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad_domain = dir.join("overflow.fork");
    std::fs::write(&bad_domain, "fork f1 side A grip G:1 tines a:1,b:1\n").unwrap();
    let (code, _, err) = forkplex_cli::run_captured(&["validate", bad_domain.to_str().unwrap()]);
    assert_eq!(code, 1, "domain rejection must exit 1: {err}");

    let bad_syntax = dir.join("syntax.fork");
    std::fs::write(&bad_syntax, "fork f1 smirk A grip G:1\n").unwrap();
    let (code, _, _) = forkplex_cli::run_captured(&["validate", bad_syntax.to_str().unwrap()]);
    assert_eq!(code, 2, "syntax errors must exit 2");

    let (code, _, _) = forkplex_cli::run_captured(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _, _) = forkplex_cli::run_captured(&["width", t3, "--bogus-flag"]);
    assert_eq!(code, 2);

    std::fs::remove_dir_all(&dir).ok();
    report("8 (io round trips, DOT, CLI fuzz, exit codes)", start);
}
