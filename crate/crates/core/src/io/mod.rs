//! Text formats: the fork-complex document language, the canonical printer,
//! DOT and SVG renderers, and the one-line move script syntax.
//!
//! A document is line oriented, one declaration per line, `#` starting a
//! comment:
//!
//! ```text
//! fork f1 side A grip G:2 tines a:2
//! fork f2 side B grip G:2 tines b:2
//! assert G "weakly-reducible NU 1 1"
//! ```
//!
//! A node name appearing in one A-side slot and one B-side slot of the same
//! kind is interior; appearing once, boundary. The genus annotations at all
//! occurrences must agree.

mod dot;
mod format;
mod movespec;
mod parse;

pub use dot::{parse_dot, render_dot, render_svg, DotGraph, RenderError};
pub use format::{canonical_names, format_complex};
pub use movespec::{parse_move, MoveSpecError};
pub use parse::{parse_complex, ParseError, ParseErrorKind, MAX_GENUS};
