//! A combinatorial engine for generalized Heegaard splittings of compact
//! orientable 3-manifolds, modelled as exact fork complexes.
//!
//! The crate represents a splitting as a connected complex of A-side and
//! B-side forks glued tine-to-tine and grip-to-grip, with a genus label on
//! every tine and grip. On top of that model it provides:
//!
//! * genus arithmetic for compression bodies ([`body`]);
//! * well-formedness and exactness checking with deterministic rational
//!   level assignments ([`complex`], [`exact`]);
//! * the width multiset and its total order ([`width`]);
//! * canonical forms for isomorphism hashing ([`canon`]);
//! * the width-changing rewrites with machine-checked audits ([`moves`]);
//! * worked reference splittings ([`catalog`]);
//! * move enumeration and width search ([`search`]);
//! * a line-oriented text format, DOT/SVG rendering and move scripts
//!   ([`io`]).
//!
//! # Example
//!
//! The trivial splitting of the three-torus has width `{3}`; one weak
//! reduction untelescopes it into two genus-2 splittings sharing two torus
//! tines, and amalgamation folds it back:
//!
//! ```
//! use forkplex::catalog::{build_catalog, CatalogKey};
//! use forkplex::io::parse_move;
//! use forkplex::{apply_move, Genus, WidthMultiset};
//!
//! let bundle = build_catalog(CatalogKey::CircleBundleTrivial(Genus(1)))?;
//! assert_eq!(bundle.width(), WidthMultiset::from(&[3][..]));
//!
//! let reduce = parse_move("weakreduce grip=S case=NU a=1 b=1")?;
//! let report = apply_move(&bundle, &reduce)?;
//! assert_eq!(report.new_width, WidthMultiset::from(&[2, 2][..]));
//!
//! let t3 = build_catalog(CatalogKey::T3Untelescoped)?;
//! assert_eq!(
//!     report.result.complex().canonical_form(),
//!     t3.complex().canonical_form(),
//! );
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod body;
pub mod canon;
pub mod catalog;
pub mod complex;
pub mod exact;
pub mod gen;
pub mod io;
pub mod moves;
pub mod search;
pub mod width;

pub use body::{
    surger_genus, tube_genera, BodyClass, BodyError, CompressionBody, Genus, GenusMultiset,
    SurgeryKind, TubeAttachment,
};
pub use canon::{CanonicalForm, CanonicalOrder};
pub use catalog::{build_catalog, CatalogError, CatalogKey};
pub use complex::{
    ComplexBuilder, ComplexError, Fork, ForkComplex, ForkId, GeneralizedSplitting, GripSplitting,
    Node, NodeId, NodeKind, Side,
};
pub use exact::{check_exact, ExactnessDigraph, Infeasibility, Level, LevelAssignment, Vertex};
pub use moves::{
    apply_move, Move, MoveError, MoveReport, TineAssignment, TrivialElimVariant,
    WeakReductionData, WrCase, WrShape,
};
pub use search::{
    brute_force_min_width, enumerate_moves, thin_search, AssertionSet, BruteForceResult,
    EnumeratedMove, SearchBudget, SearchResult, TraceStep,
};
pub use width::{compare_width, WidthMultiset};

#[cfg(test)]
mod thread_safety {
    // Everything is an immutable value; sharing across threads needs no
    // coordination.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::CompressionBody>();
        assert_send_sync::<crate::ForkComplex>();
        assert_send_sync::<crate::GeneralizedSplitting>();
        assert_send_sync::<crate::WidthMultiset>();
        assert_send_sync::<crate::CanonicalForm>();
        assert_send_sync::<crate::LevelAssignment>();
        assert_send_sync::<crate::Move>();
        assert_send_sync::<crate::MoveReport>();
    }
}
