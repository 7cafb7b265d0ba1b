//! Command-line front end. `run_cli` is a pure function over argv and the
//! output streams so the whole surface is testable (and fuzzable) in
//! process.
//!
//! Exit codes: 0 on success, 1 when the input is rejected on domain grounds
//! (invalid or inexact complexes, inapplicable moves), 2 on usage and
//! syntax errors.

use std::collections::BTreeSet;
use std::io::Write;

use serde_json::json;

use forkplex::catalog::{build_catalog, key_by_name};
use forkplex::io::{format_complex, parse_complex, parse_move, render_dot, render_svg};
use forkplex::search::{brute_force_min_width, thin_search, AssertionSet, SearchBudget};
use forkplex::{apply_move, compare_width, Genus, GeneralizedSplitting};

pub const USAGE: &str = "\
usage: forkplex <command> [args]

commands:
  validate FILE                       check a fork-complex document
  width FILE                          print the width multiset
  compare FILE1 FILE2                 print `<`, `=` or `>` for the widths
  apply FILE --move SPEC [-o FILE]    apply one move and print the report
  search FILE [--max-depth N] [--max-states N] [--allow-nondecreasing]
                                      best-first width search over recorded
                                      assertions
  render FILE [--format dot|svg]      draw the exactness diagram
  catalog NAME [--genus G] [-o FILE]  write a catalog entry
  brute FILE [budget flags]           exhaustive minimum width (small inputs)

Any command accepts --json for machine-readable output.
Exit codes: 0 ok, 1 domain rejection, 2 usage or syntax error.";

const FORMAT_VERSION: u32 = 1;

struct Ctx<'a> {
    json: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit_json(&mut self, value: serde_json::Value) -> i32 {
        let mut object = value;
        if let Some(map) = object.as_object_mut() {
            map.insert("format".to_string(), json!(FORMAT_VERSION));
        }
        let _ = writeln!(self.out, "{object}");
        0
    }

    fn usage_error(&mut self, message: &str) -> i32 {
        let _ = writeln!(self.err, "error: {message}");
        let _ = writeln!(self.err, "{USAGE}");
        2
    }

    fn domain_error(&mut self, message: &str) -> i32 {
        if self.json {
            let _ = writeln!(
                self.out,
                "{}",
                json!({ "format": FORMAT_VERSION, "error": message })
            );
        }
        let _ = writeln!(self.err, "error: {message}");
        1
    }
}

fn read_splitting(ctx: &mut Ctx, path: &str) -> Result<GeneralizedSplitting, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => return Err(ctx.usage_error(&format!("cannot read `{path}`: {e}"))),
    };
    match parse_complex(&text) {
        Ok(gs) => Ok(gs),
        Err(e) => {
            use forkplex::io::ParseErrorKind as K;
            let code = match e.kind {
                K::Invalid(_) | K::NotExact(_) => 1,
                _ => 2,
            };
            let _ = writeln!(ctx.err, "error: {path}:{e}");
            if ctx.json && code == 1 {
                let _ = writeln!(
                    ctx.out,
                    "{}",
                    json!({ "format": FORMAT_VERSION, "error": e.to_string() })
                );
            }
            Err(code)
        }
    }
}

fn write_or_print(ctx: &mut Ctx, target: Option<&str>, content: &str) -> Result<(), i32> {
    match target {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| ctx.usage_error(&format!("cannot write `{path}`: {e}"))),
        None => {
            let _ = write!(ctx.out, "{content}");
            Ok(())
        }
    }
}

/// Options shared by several subcommands, parsed from the tail of argv.
#[derive(Default)]
struct Flags {
    positional: Vec<String>,
    move_spec: Option<String>,
    output: Option<String>,
    format: Option<String>,
    genus: Option<u32>,
    max_depth: Option<u32>,
    max_states: Option<u32>,
    allow_nondecreasing: bool,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut take_value = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("{name} needs a value"))
        };
        match arg.as_str() {
            "--move" => flags.move_spec = Some(take_value("--move")?),
            "-o" | "--output" => flags.output = Some(take_value("-o")?),
            "--format" => flags.format = Some(take_value("--format")?),
            "--genus" => {
                let raw = take_value("--genus")?;
                let value: u32 = raw.parse().map_err(|_| format!("bad genus `{raw}`"))?;
                if value > forkplex::io::MAX_GENUS {
                    return Err(format!("genus `{raw}` is out of range"));
                }
                flags.genus = Some(value);
            }
            "--max-depth" => {
                let raw = take_value("--max-depth")?;
                flags.max_depth = Some(raw.parse().map_err(|_| format!("bad depth `{raw}`"))?);
            }
            "--max-states" => {
                let raw = take_value("--max-states")?;
                flags.max_states =
                    Some(raw.parse().map_err(|_| format!("bad state bound `{raw}`"))?);
            }
            "--allow-nondecreasing" => flags.allow_nondecreasing = true,
            "--json" => {}
            other if other.starts_with("--") && other.len() > 2 => {
                return Err(format!("unknown flag `{other}`"))
            }
            other => flags.positional.push(other.to_string()),
        }
    }
    Ok(flags)
}

fn budget_of(flags: &Flags) -> SearchBudget {
    let defaults = SearchBudget::default();
    SearchBudget {
        max_depth: flags.max_depth.unwrap_or(defaults.max_depth),
        max_states: flags.max_states.unwrap_or(defaults.max_states).max(1),
        allow_nondecreasing: flags.allow_nondecreasing,
    }
}

fn width_json(width: &forkplex::WidthMultiset) -> serde_json::Value {
    json!(width.entries().iter().map(|g| g.0).collect::<Vec<_>>())
}

/// Runs one invocation; never panics on any argv.
pub fn run_cli(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let json = args.iter().any(|a| a == "--json");
    let mut ctx = Ctx { json, out, err };
    let Some(command) = args.first() else {
        return ctx.usage_error("a command is required");
    };
    let flags = match parse_flags(&args[1..]) {
        Ok(flags) => flags,
        Err(message) => return ctx.usage_error(&message),
    };

    match command.as_str() {
        "help" | "--help" | "-h" => {
            let _ = writeln!(ctx.out, "{USAGE}");
            0
        }
        "validate" => {
            let [path] = flags.positional.as_slice() else {
                return ctx.usage_error("validate takes exactly one file");
            };
            let gs = match read_splitting(&mut ctx, path) {
                Ok(gs) => gs,
                Err(code) => return code,
            };
            if ctx.json {
                ctx.emit_json(json!({
                    "valid": true,
                    "forks": gs.complex().forks().len(),
                    "width": width_json(&gs.width()),
                    "euler": gs.complex().complex_euler(),
                }))
            } else {
                let _ = writeln!(
                    ctx.out,
                    "ok: {} forks, width {}, euler {}",
                    gs.complex().forks().len(),
                    gs.width(),
                    gs.complex().complex_euler()
                );
                0
            }
        }
        "width" => {
            let [path] = flags.positional.as_slice() else {
                return ctx.usage_error("width takes exactly one file");
            };
            let gs = match read_splitting(&mut ctx, path) {
                Ok(gs) => gs,
                Err(code) => return code,
            };
            if ctx.json {
                ctx.emit_json(json!({ "width": width_json(&gs.width()) }))
            } else {
                let _ = writeln!(ctx.out, "{}", gs.width());
                0
            }
        }
        "compare" => {
            let [p1, p2] = flags.positional.as_slice() else {
                return ctx.usage_error("compare takes exactly two files");
            };
            let (a, b) = match (read_splitting(&mut ctx, p1), read_splitting(&mut ctx, p2)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            let symbol = match compare_width(&a.width(), &b.width()) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            if ctx.json {
                ctx.emit_json(json!({
                    "left": width_json(&a.width()),
                    "right": width_json(&b.width()),
                    "ordering": symbol,
                }))
            } else {
                let _ = writeln!(ctx.out, "{symbol}");
                0
            }
        }
        "apply" => {
            let [path] = flags.positional.as_slice() else {
                return ctx.usage_error("apply takes exactly one file");
            };
            let Some(spec) = flags.move_spec.as_deref() else {
                return ctx.usage_error("apply needs --move SPEC");
            };
            let mv = match parse_move(spec) {
                Ok(mv) => mv,
                Err(e) => return ctx.usage_error(&format!("bad move spec: {e}")),
            };
            let gs = match read_splitting(&mut ctx, path) {
                Ok(gs) => gs,
                Err(code) => return code,
            };
            let report = match apply_move(&gs, &mv) {
                Ok(report) => report,
                Err(e) => return ctx.domain_error(&e.to_string()),
            };
            let document = format_complex(&report.result);
            if ctx.json {
                let code = ctx.emit_json(json!({
                    "move": mv.to_string(),
                    "old_width": width_json(&report.old_width),
                    "new_width": width_json(&report.new_width),
                    "ordering": format!("{:?}", report.ordering),
                    "euler": report.euler,
                    "result": document,
                }));
                if let Some(target) = flags.output.as_deref() {
                    if let Err(code) = write_or_print(&mut ctx, Some(target), &document) {
                        return code;
                    }
                }
                code
            } else {
                let _ = writeln!(ctx.out, "{report}");
                match flags.output.as_deref() {
                    Some(target) => {
                        if let Err(code) = write_or_print(&mut ctx, Some(target), &document) {
                            return code;
                        }
                    }
                    None => {
                        let _ = write!(ctx.out, "{document}");
                    }
                }
                0
            }
        }
        "search" | "brute" => {
            let [path] = flags.positional.as_slice() else {
                return ctx.usage_error("search takes exactly one file");
            };
            let gs = match read_splitting(&mut ctx, path) {
                Ok(gs) => gs,
                Err(code) => return code,
            };
            let budget = budget_of(&flags);
            let assertions = AssertionSet::from_splitting(&gs);
            if command == "brute" {
                let result = brute_force_min_width(&gs, &budget, &assertions);
                if ctx.json {
                    return ctx.emit_json(json!({
                        "min_width": width_json(&result.min_width),
                        "budget_exhausted": result.budget_exhausted,
                        "states": result.states_visited,
                    }));
                }
                let _ = writeln!(
                    ctx.out,
                    "min width {} ({} states{})",
                    result.min_width,
                    result.states_visited,
                    if result.budget_exhausted {
                        ", budget exhausted"
                    } else {
                        ""
                    }
                );
                return 0;
            }
            let result = thin_search(&gs, &budget, &assertions);
            let document = format_complex(&result.splitting);
            if ctx.json {
                ctx.emit_json(json!({
                    "width": width_json(&result.width),
                    "trace": result
                        .trace
                        .iter()
                        .map(|s| json!({
                            "move": s.mv.to_string(),
                            "width": width_json(&s.width_after),
                        }))
                        .collect::<Vec<_>>(),
                    "budget_exhausted": result.budget_exhausted,
                    "states": result.states_visited,
                    "result": document,
                }))
            } else {
                for step in &result.trace {
                    let _ = writeln!(ctx.out, "{step}");
                }
                let _ = writeln!(
                    ctx.out,
                    "width {} after {} moves ({} states{})",
                    result.width,
                    result.trace.len(),
                    result.states_visited,
                    if result.budget_exhausted {
                        ", budget exhausted"
                    } else {
                        ""
                    }
                );
                let _ = write!(ctx.out, "{document}");
                0
            }
        }
        "render" => {
            let [path] = flags.positional.as_slice() else {
                return ctx.usage_error("render takes exactly one file");
            };
            let gs = match read_splitting(&mut ctx, path) {
                Ok(gs) => gs,
                Err(code) => return code,
            };
            let format = flags.format.as_deref().unwrap_or("dot");
            let rendered = match format {
                "dot" => render_dot(gs.complex()),
                "svg" => render_svg(gs.complex()),
                other => return ctx.usage_error(&format!("unknown render format `{other}`")),
            };
            let rendered = match rendered {
                Ok(text) => text,
                Err(e) => return ctx.domain_error(&e.to_string()),
            };
            if ctx.json {
                ctx.emit_json(json!({ "kind": format, "output": rendered }))
            } else {
                match write_or_print(&mut ctx, flags.output.as_deref(), &rendered) {
                    Ok(()) => 0,
                    Err(code) => code,
                }
            }
        }
        "catalog" => {
            let [name] = flags.positional.as_slice() else {
                return ctx.usage_error("catalog takes exactly one entry name");
            };
            let key = match key_by_name(name, flags.genus.map(Genus)) {
                Ok(key) => key,
                Err(e) => return ctx.usage_error(&e.to_string()),
            };
            let gs = match build_catalog(key) {
                Ok(gs) => gs,
                Err(e) => return ctx.usage_error(&e.to_string()),
            };
            let document = format_complex(&gs);
            if ctx.json {
                ctx.emit_json(json!({
                    "entry": key.to_string(),
                    "width": width_json(&gs.width()),
                    "document": document,
                }))
            } else {
                match write_or_print(&mut ctx, flags.output.as_deref(), &document) {
                    Ok(()) => 0,
                    Err(code) => code,
                }
            }
        }
        other => ctx.usage_error(&format!("unknown command `{other}`")),
    }
}

/// Convenience for tests: run with string args, capture both streams.
pub fn run_captured(args: &[&str]) -> (i32, String, String) {
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(&owned, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

/// Vocabulary for the argv fuzzer; mixes valid commands, flags, file names
/// and garbage.
pub fn fuzz_vocabulary() -> Vec<&'static str> {
    vec![
        "validate",
        "width",
        "compare",
        "apply",
        "search",
        "brute",
        "render",
        "catalog",
        "help",
        "--json",
        "--move",
        "--format",
        "dot",
        "svg",
        "--genus",
        "--max-depth",
        "--max-states",
        "--allow-nondecreasing",
        "ball1",
        "t3-untelescoped",
        "2",
        "-1",
        "x.fork",
        "",
        "stabilize grip=G",
        "grip=G",
        "--",
        "weakreduce",
        "🜛",
        "fork",
        "--bogus",
    ]
}

/// Deterministic argv fuzz driver; asserts the exit-code contract and
/// returns the set of codes seen. Panics propagate to the caller, which is
/// the point.
pub fn fuzz_run(iterations: u32, seed: u64) -> BTreeSet<i32> {
    let vocabulary = fuzz_vocabulary();
    let mut rng = forkplex::gen::Rng::new(seed);
    let mut seen = BTreeSet::new();
    for _ in 0..iterations {
        let len = rng.below(5) as usize;
        let args: Vec<String> = (0..len)
            .map(|_| {
                let word = vocabulary[rng.below(vocabulary.len() as u64) as usize];
                if rng.chance(10) {
                    format!("{word}{}", rng.below(1000))
                } else {
                    word.to_string()
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(&args, &mut out, &mut err);
        assert!(
            code == 0 || code == 1 || code == 2,
            "exit code {code} out of contract for argv {args:?}"
        );
        seen.insert(code);
    }
    seen
}
