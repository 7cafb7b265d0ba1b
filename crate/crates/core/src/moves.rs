//! The width-changing rewrites: stabilization and its inverse, the four
//! weak-reduction cases, amalgamation, and the two elimination moves.
//!
//! Every move is a formal rewrite on the labeled complex. Topological side
//! conditions (essential disks exist, a sphere bounds a ball, a splitting is
//! stabilized) are supplied by the caller and recorded, never decided.
//! Each application is audited after the fact: the result must pass the
//! well-formedness and exactness checks, the Euler characteristic must land
//! on its expected value, and the recomputed width must match the move's
//! declared delta. Audit failures surface as [`MoveError::ChiMismatch`] or
//! [`MoveError::AuditFailed`]; both mean a bug in this module, never bad
//! user input.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::body::{
    surger_genus, tube_genera, BodyError, CompressionBody, Genus, GenusMultiset, SurgeryKind,
    TubeAttachment,
};
use crate::complex::{
    ComplexBuilder, ComplexError, ForkComplex, ForkId, GeneralizedSplitting, NodeId, NodeKind,
    Side,
};
use crate::width::{compare_width, WidthMultiset};

/// Which of the two weakly-reducing disks separates the splitting surface.
/// The tags follow the shape of the pair `(first disk, second disk)`:
/// both boundaries non-separating with non-separating union (`Nn`), union
/// separating (`Nu`), second disk separating (`NsSep`), both separating
/// (`Ss`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WrCase {
    Nn,
    Nu { a: Genus, b: Genus },
    NsSep { a: Genus, b: Genus },
    Ss { k: Genus, g1: Genus, g2: Genus },
}

impl WrCase {
    pub fn tag(&self) -> &'static str {
        match self {
            WrCase::Nn => "NN",
            WrCase::Nu { .. } => "NU",
            WrCase::NsSep { .. } => "NSsep",
            WrCase::Ss { .. } => "SS",
        }
    }

    /// Whether the rewrite is guaranteed to strictly lower the width.
    pub fn strictly_decreasing(&self) -> bool {
        match *self {
            WrCase::Nn | WrCase::Nu { .. } => true,
            WrCase::NsSep { b, .. } => b.0 >= 1,
            WrCase::Ss { g1, .. } => g1.0 >= 1,
        }
    }
}

/// Selects between the two admissible rewirings of the replacement chain.
/// `Chain` keeps the lower new splitting adjacent to the original A side;
/// `Split` is the dual wiring with the two new grips exchanged. The two
/// coincide for the symmetric cases `Nn` and `Nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum WrShape {
    #[default]
    Chain,
    Split,
}

/// Routing of the original tines among the four replacement forks. Tines
/// named in `a_mid` move from the old A-side fork to the inner A-side fork;
/// tines in `b_mid` move from the old B-side fork to the inner B-side fork.
/// Everything else stays with the outer forks.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct TineAssignment {
    pub a_mid: BTreeSet<String>,
    pub b_mid: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeakReductionData {
    pub grip: String,
    pub case: WrCase,
    pub shape: WrShape,
    pub tines: TineAssignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TrivialElimVariant {
    BoundaryGrip,
    InteriorMerge,
}

/// One rewrite step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    Stabilize { grip: String },
    Destabilize { grip: String },
    WeakReduce(WeakReductionData),
    Amalgamate { grips: (String, String), shared: BTreeSet<String> },
    EliminateSphereTine { tine: String, ball: BTreeSet<String> },
    EliminateTrivialFork { fork: String, variant: TrivialElimVariant },
}

impl fmt::Display for Move {
    /// Prints the move in the script syntax accepted by the move parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(set: &BTreeSet<String>) -> String {
            set.iter().cloned().collect::<Vec<_>>().join(",")
        }
        match self {
            Move::Stabilize { grip } => write!(f, "stabilize grip={grip}"),
            Move::Destabilize { grip } => write!(f, "destabilize grip={grip}"),
            Move::WeakReduce(data) => {
                write!(f, "weakreduce grip={} case={}", data.grip, data.case.tag())?;
                match data.case {
                    WrCase::Nn => {}
                    WrCase::Nu { a, b } | WrCase::NsSep { a, b } => write!(f, " a={a} b={b}")?,
                    WrCase::Ss { k, g1, g2 } => write!(f, " k={k} g1={g1} g2={g2}")?,
                }
                if data.shape == WrShape::Split {
                    write!(f, " shape=split")?;
                }
                if !data.tines.a_mid.is_empty() {
                    write!(f, " amid={}", join(&data.tines.a_mid))?;
                }
                if !data.tines.b_mid.is_empty() {
                    write!(f, " bmid={}", join(&data.tines.b_mid))?;
                }
                Ok(())
            }
            Move::Amalgamate { grips, shared } => write!(
                f,
                "amalgamate grips={},{} tines={}",
                grips.0,
                grips.1,
                join(shared)
            ),
            Move::EliminateSphereTine { tine, ball } => {
                write!(f, "elimsphere tine={tine} ball={}", join(ball))
            }
            Move::EliminateTrivialFork { fork, variant } => write!(
                f,
                "elimtrivial fork={fork} variant={}",
                match variant {
                    TrivialElimVariant::BoundaryGrip => "boundary",
                    TrivialElimVariant::InteriorMerge => "interior",
                }
            ),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown fork `{0}`")]
    UnknownFork(String),
    #[error("grip `{grip}` already has genus 0")]
    GenusUnderflow { grip: String },
    #[error("fork `{fork}` would become invalid: {source}")]
    BodyInvalid { fork: String, source: BodyError },
    #[error("case equation violated: {reason}")]
    CaseEquationViolated { reason: String },
    #[error("node `{0}` is not interior")]
    NotInterior(String),
    #[error("fork `{0}` induces a trivial compression body")]
    TrivialBody(String),
    #[error("tine `{0}` is not assignable in this reduction")]
    BadTineAssignment(String),
    #[error("grips are not adjacent: {reason}")]
    NotAdjacent { reason: String },
    #[error("the four forks do not form a weak-reduction image: {reason}")]
    PatternUnrecognized { reason: String },
    #[error("tine `{0}` is not a sphere")]
    NotASphere(String),
    #[error("the selected subcomplex is not a ball side: {reason}")]
    NotABall { reason: String },
    #[error("removing the subcomplex disconnects the complex")]
    Disconnects,
    #[error("fork `{0}` does not induce a trivial compression body")]
    NotTrivial(String),
    #[error("wrong shape for this elimination: {reason}")]
    WrongShape { reason: String },
    #[error("required user assertion `{assertion}` is not recorded on `{node}`")]
    AssertionMissing { node: String, assertion: String },
    #[error("Euler characteristic changed from {before} to {after} (expected {expected})")]
    ChiMismatch { before: i64, after: i64, expected: i64 },
    #[error("post-move audit failed: {reason}")]
    AuditFailed { reason: String },
}

/// Report of a successful application.
#[derive(Debug, Clone)]
pub struct MoveReport {
    pub result: GeneralizedSplitting,
    pub old_width: WidthMultiset,
    pub new_width: WidthMultiset,
    pub ordering: Ordering,
    pub euler: i64,
}

impl fmt::Display for MoveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = match self.ordering {
            Ordering::Less => "LESS",
            Ordering::Equal => "EQUAL",
            Ordering::Greater => "GREATER",
        };
        write!(
            f,
            "{{{}}} -> {{{}}} {}",
            self.old_width, self.new_width, word
        )
    }
}

/// Editable name-level view of a complex; resolved back through the
/// validator when the rewrite is assembled.
#[derive(Debug, Clone)]
struct Sketch {
    nodes: Vec<(String, NodeKind, Genus)>,
    forks: Vec<(String, Side, String, Vec<String>)>,
}

impl Sketch {
    fn of(complex: &ForkComplex) -> Sketch {
        Sketch {
            nodes: complex
                .nodes()
                .iter()
                .map(|n| (n.name.clone(), n.kind, n.label))
                .collect(),
            forks: complex
                .forks()
                .iter()
                .map(|f| {
                    (
                        f.name.clone(),
                        f.side,
                        complex.node(f.grip).name.clone(),
                        f.tines
                            .iter()
                            .map(|&t| complex.node(t).name.clone())
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    fn fresh_name(&self, base: &str) -> String {
        let used: BTreeSet<&str> = self
            .nodes
            .iter()
            .map(|(n, _, _)| n.as_str())
            .chain(self.forks.iter().map(|(n, _, _, _)| n.as_str()))
            .collect();
        if !used.contains(base) {
            return base.to_string();
        }
        for i in 2.. {
            let candidate = format!("{base}_{i}");
            if !used.contains(candidate.as_str()) {
                return candidate;
            }
        }
        unreachable!()
    }

    fn add_node(&mut self, base: &str, kind: NodeKind, label: Genus) -> String {
        let name = self.fresh_name(base);
        self.nodes.push((name.clone(), kind, label));
        name
    }

    fn add_fork(&mut self, base: &str, side: Side, grip: String, tines: Vec<String>) {
        let name = self.fresh_name(base);
        self.forks.push((name, side, grip, tines));
    }

    fn remove_fork(&mut self, name: &str) {
        self.forks.retain(|(n, _, _, _)| n != name);
    }

    fn remove_node(&mut self, name: &str) {
        self.nodes.retain(|(n, _, _)| n != name);
    }

    fn set_label(&mut self, name: &str, label: Genus) {
        let node = self
            .nodes
            .iter_mut()
            .find(|(n, _, _)| n == name)
            .expect("sketch node");
        node.2 = label;
    }

    fn build(self) -> Result<ForkComplex, ComplexError> {
        let mut builder = ComplexBuilder::new();
        let mut ids = std::collections::BTreeMap::new();
        for (name, kind, label) in &self.nodes {
            ids.insert(name.clone(), builder.node(name.clone(), *kind, *label));
        }
        for (name, side, grip, tines) in self.forks {
            let grip = *ids
                .get(&grip)
                .ok_or_else(|| ComplexError::UnknownNode(grip.clone()))?;
            let tines = tines
                .iter()
                .map(|t| {
                    ids.get(t)
                        .copied()
                        .ok_or_else(|| ComplexError::UnknownNode(t.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            builder.fork(name, side, grip, tines);
        }
        builder.build()
    }
}

/// How to blame an exactness failure of the rewritten complex.
#[derive(Debug, Clone, Copy)]
enum CycleBlame {
    /// Structurally impossible for this move; a failure is a bug.
    Bug,
    /// The input was not a recognizable weak-reduction image.
    Pattern,
    /// The merge closed a constraint loop; the shape was wrong.
    Shape,
}

struct Rewrite {
    sketch: Sketch,
    removed: WidthMultiset,
    added: WidthMultiset,
    /// Expected change of the complex Euler characteristic (nonzero only
    /// for boundary-grip stabilizations, which alter the manifold).
    chi_delta: i64,
    /// Required comparison of new vs. old width, audited after the fact.
    expect: Option<Ordering>,
    blame: CycleBlame,
}

fn width_of(values: &[Genus]) -> WidthMultiset {
    values.iter().copied().collect()
}

fn resolve_grip(gs: &GeneralizedSplitting, name: &str) -> Result<NodeId, MoveError> {
    gs.complex()
        .node_by_name(name)
        .filter(|&id| gs.complex().node(id).kind == NodeKind::Grip)
        .ok_or_else(|| MoveError::UnknownNode(name.to_string()))
}

fn plan_stabilize(gs: &GeneralizedSplitting, grip: &str, up: bool) -> Result<Rewrite, MoveError> {
    let id = resolve_grip(gs, grip)?;
    let complex = gs.complex();
    let g = complex.node(id).label;
    let new_label = if up {
        Genus(g.0 + 1)
    } else {
        if g.0 == 0 {
            return Err(MoveError::GenusUnderflow {
                grip: grip.to_string(),
            });
        }
        Genus(g.0 - 1)
    };
    if !up {
        let usage = complex.usage(id);
        for fid in [usage.a_fork, usage.b_fork].into_iter().flatten() {
            let fork = complex.fork(fid);
            let minus: GenusMultiset = fork.tines.iter().map(|&t| complex.node(t).label).collect();
            if let Err(source) = CompressionBody::new(new_label, minus) {
                return Err(MoveError::BodyInvalid {
                    fork: fork.name.clone(),
                    source,
                });
            }
        }
    }
    let mut sketch = Sketch::of(complex);
    sketch.set_label(grip, new_label);
    let boundary = !complex.is_interior(id);
    Ok(Rewrite {
        sketch,
        removed: width_of(&[g]),
        added: width_of(&[new_label]),
        // A boundary grip is a manifold boundary component; relabeling it
        // swaps in a different manifold, so the characteristic moves by one.
        chi_delta: if boundary { if up { -1 } else { 1 } } else { 0 },
        expect: Some(if up { Ordering::Greater } else { Ordering::Less }),
        blame: CycleBlame::Bug,
    })
}

fn plan_weak_reduce(
    gs: &GeneralizedSplitting,
    data: &WeakReductionData,
) -> Result<Rewrite, MoveError> {
    let complex = gs.complex();
    let grip_id = resolve_grip(gs, &data.grip)?;
    let usage = complex.usage(grip_id);
    let (Some(fa_id), Some(fb_id)) = (usage.a_fork, usage.b_fork) else {
        return Err(MoveError::NotInterior(data.grip.clone()));
    };
    for fid in [fa_id, fb_id] {
        if complex.induced_body(fid).is_trivial() {
            return Err(MoveError::TrivialBody(complex.fork(fid).name.clone()));
        }
    }
    let g = complex.node(grip_id).label;

    // Closed-form grip labels and new interior tines, per case.
    let eq = |ok: bool, reason: String| {
        if ok {
            Ok(())
        } else {
            Err(MoveError::CaseEquationViolated { reason })
        }
    };
    let (lo, hi, new_tines): (Genus, Genus, Vec<Genus>) = match data.case {
        WrCase::Nn => {
            eq(g.0 >= 2, format!("NN needs grip genus >= 2, got {g}"))?;
            (Genus(g.0 - 1), Genus(g.0 - 1), vec![Genus(g.0 - 2)])
        }
        WrCase::Nu { a, b } => {
            eq(
                g.0 >= 1 && a.0 + b.0 == g.0 - 1,
                format!("NU needs a+b = g-1, got {a}+{b} vs g={g}"),
            )?;
            (Genus(g.0 - 1), Genus(g.0 - 1), vec![a, b])
        }
        WrCase::NsSep { a, b } => {
            eq(
                g.0 >= 1 && a.0 + b.0 == g.0 - 1,
                format!("NSsep needs a+b = g-1, got {a}+{b} vs g={g}"),
            )?;
            (Genus(g.0 - 1), Genus(a.0 + 1), vec![a])
        }
        WrCase::Ss { k, g1, g2 } => {
            eq(
                g1.0 + g2.0 == k.0 && k.0 < g.0,
                format!("SS needs g1+g2 = k <= g-1, got k={k} g1={g1} g2={g2} vs g={g}"),
            )?;
            (k, Genus(g.0 - g1.0), vec![g2])
        }
    };

    // Independent route through the surgery and tubing primitives; the two
    // computations must agree on the new grip labels.
    let routed = route_grips(g, data.case).map_err(|e| MoveError::CaseEquationViolated {
        reason: e.to_string(),
    })?;
    assert_eq!(
        routed,
        (lo, hi),
        "closed-form and surgery-route grip labels disagree"
    );

    let (lo, hi) = match data.shape {
        WrShape::Chain => (lo, hi),
        WrShape::Split => (hi, lo),
    };

    let fa = complex.fork(fa_id).clone();
    let fb = complex.fork(fb_id).clone();
    let tine_names = |fork: &crate::complex::Fork| -> Vec<String> {
        fork.tines
            .iter()
            .map(|&t| complex.node(t).name.clone())
            .collect()
    };
    let a_tines = tine_names(&fa);
    let b_tines = tine_names(&fb);
    for name in &data.tines.a_mid {
        if !a_tines.contains(name) {
            return Err(MoveError::BadTineAssignment(name.clone()));
        }
    }
    for name in &data.tines.b_mid {
        if !b_tines.contains(name) {
            return Err(MoveError::BadTineAssignment(name.clone()));
        }
    }

    let mut sketch = Sketch::of(complex);
    sketch.remove_fork(&fa.name);
    sketch.remove_fork(&fb.name);
    sketch.remove_node(&data.grip);
    let lo_grip = sketch.add_node(&format!("{}_1", data.grip), NodeKind::Grip, lo);
    let hi_grip = sketch.add_node(&format!("{}_2", data.grip), NodeKind::Grip, hi);
    let mut middle = Vec::new();
    for (i, &t) in new_tines.iter().enumerate() {
        middle.push(sketch.add_node(&format!("{}_t{}", data.grip, i + 1), NodeKind::Tine, t));
    }

    let a_outer: Vec<String> = a_tines
        .iter()
        .filter(|n| !data.tines.a_mid.contains(*n))
        .cloned()
        .collect();
    let b_outer: Vec<String> = b_tines
        .iter()
        .filter(|n| !data.tines.b_mid.contains(*n))
        .cloned()
        .collect();
    let mut b_inner: Vec<String> = middle.clone();
    b_inner.extend(data.tines.b_mid.iter().cloned());
    let mut a_inner: Vec<String> = middle.clone();
    a_inner.extend(data.tines.a_mid.iter().cloned());

    sketch.add_fork(&format!("{}_1", fa.name), Side::A, lo_grip.clone(), a_outer);
    sketch.add_fork(&format!("{}_1", fb.name), Side::B, lo_grip, b_inner);
    sketch.add_fork(&format!("{}_2", fa.name), Side::A, hi_grip.clone(), a_inner);
    sketch.add_fork(&format!("{}_2", fb.name), Side::B, hi_grip, b_outer);

    let expect = data.case.strictly_decreasing().then_some(Ordering::Less);
    Ok(Rewrite {
        sketch,
        removed: width_of(&[g]),
        added: width_of(&[lo, hi]),
        chi_delta: 0,
        expect,
        blame: CycleBlame::Bug,
    })
}

/// Recomputes the two new grip labels of a weak reduction by surgering the
/// splitting surface along the two disks and tubing the pieces back up.
fn route_grips(g: Genus, case: WrCase) -> Result<(Genus, Genus), BodyError> {
    let single = |ms: &GenusMultiset| ms.as_slice()[0];
    match case {
        WrCase::Nn => {
            let first = surger_genus(g, SurgeryKind::NonSeparating)?;
            let lo = single(&first);
            let cut = surger_genus(lo, SurgeryKind::NonSeparating)?;
            let hi = single(&tube_genera(&cut, TubeAttachment::SelfTube(single(&cut)))?);
            Ok((lo, hi))
        }
        WrCase::Nu { a, b } => {
            let first = surger_genus(g, SurgeryKind::NonSeparating)?;
            let lo = single(&first);
            let cut = surger_genus(lo, SurgeryKind::Separating(a, b))?;
            let hi = single(&tube_genera(&cut, TubeAttachment::JoinTube(a, b))?);
            Ok((lo, hi))
        }
        WrCase::NsSep { a, b } => {
            let first = surger_genus(g, SurgeryKind::NonSeparating)?;
            let lo = single(&first);
            let cut = surger_genus(lo, SurgeryKind::Separating(a, b))?;
            let mut kept = cut.clone();
            kept.remove_one(b);
            let hi = single(&tube_genera(&kept, TubeAttachment::SelfTube(a))?);
            Ok((lo, hi))
        }
        WrCase::Ss { k, g1, g2 } => {
            let split = surger_genus(g, SurgeryKind::Separating(k, Genus(g.0 - k.0)))?;
            let rest = Genus(g.0 - k.0);
            let _ = surger_genus(k, SurgeryKind::Separating(g1, g2))?;
            let joined = tube_genera(
                &GenusMultiset::new(vec![rest, g2]),
                TubeAttachment::JoinTube(rest, g2),
            )?;
            debug_assert!(split.contains(k));
            Ok((k, single(&joined)))
        }
    }
}

fn plan_amalgamate(
    gs: &GeneralizedSplitting,
    grips: &(String, String),
    shared: &BTreeSet<String>,
) -> Result<Rewrite, MoveError> {
    let complex = gs.complex();
    let n1 = resolve_grip(gs, &grips.0)?;
    let n2 = resolve_grip(gs, &grips.1)?;
    if n1 == n2 {
        return Err(MoveError::NotAdjacent {
            reason: "the two grips must be distinct".to_string(),
        });
    }
    let u1 = complex.usage(n1);
    let u2 = complex.usage(n2);
    let (Some(a1_id), Some(b1_id)) = (u1.a_fork, u1.b_fork) else {
        return Err(MoveError::NotAdjacent {
            reason: format!("grip `{}` is not interior", grips.0),
        });
    };
    let (Some(a2_id), Some(b2_id)) = (u2.a_fork, u2.b_fork) else {
        return Err(MoveError::NotAdjacent {
            reason: format!("grip `{}` is not interior", grips.1),
        });
    };
    let names = |fid: ForkId| -> BTreeSet<String> {
        complex
            .fork(fid)
            .tines
            .iter()
            .map(|&t| complex.node(t).name.clone())
            .collect()
    };
    let b1_tines = names(b1_id);
    let a2_tines = names(a2_id);
    let actual: BTreeSet<String> = b1_tines.intersection(&a2_tines).cloned().collect();
    if actual.is_empty() {
        return Err(MoveError::NotAdjacent {
            reason: format!(
                "the B fork at `{}` and the A fork at `{}` share no tines",
                grips.0, grips.1
            ),
        });
    }
    if actual != *shared {
        return Err(MoveError::PatternUnrecognized {
            reason: format!(
                "shared tines are {:?}, move named {:?}",
                actual, shared
            ),
        });
    }

    let g1 = complex.node(n1).label;
    let g2 = complex.node(n2).label;
    let shared_sum: u64 = shared
        .iter()
        .map(|n| u64::from(complex.node(complex.node_by_name(n).unwrap()).label.0))
        .sum();
    let h = i64::from(g1.0) + i64::from(g2.0) - shared_sum as i64 + shared.len() as i64 - 1;
    assert!(h >= 0, "amalgamated genus cannot be negative on valid input");
    let h = Genus(h as u32);

    let a1 = names(a1_id);
    let b2 = names(b2_id);
    let merged_a: Vec<String> = a1
        .iter()
        .cloned()
        .chain(a2_tines.difference(shared).cloned())
        .collect();
    let merged_b: Vec<String> = b2
        .iter()
        .cloned()
        .chain(b1_tines.difference(shared).cloned())
        .collect();
    if merged_a.iter().any(|t| merged_b.contains(t)) {
        return Err(MoveError::PatternUnrecognized {
            reason: "the amalgamated forks would share a tine".to_string(),
        });
    }

    let mut sketch = Sketch::of(complex);
    for fid in [a1_id, b1_id, a2_id, b2_id] {
        let name = complex.fork(fid).name.clone();
        sketch.remove_fork(&name);
    }
    sketch.remove_node(&grips.0);
    sketch.remove_node(&grips.1);
    for t in shared {
        sketch.remove_node(t);
    }
    let grip = sketch.add_node(&format!("{}_{}", grips.0, grips.1), NodeKind::Grip, h);
    sketch.add_fork("amalg_a", Side::A, grip.clone(), merged_a);
    sketch.add_fork("amalg_b", Side::B, grip, merged_b);

    Ok(Rewrite {
        sketch,
        removed: width_of(&[g1, g2]),
        added: width_of(&[h]),
        chi_delta: 0,
        expect: None,
        blame: CycleBlame::Pattern,
    })
}

fn plan_eliminate_sphere(
    gs: &GeneralizedSplitting,
    tine: &str,
    ball: &BTreeSet<String>,
) -> Result<Rewrite, MoveError> {
    let complex = gs.complex();
    let t_id = complex
        .node_by_name(tine)
        .filter(|&id| complex.node(id).kind == NodeKind::Tine)
        .ok_or_else(|| MoveError::UnknownNode(tine.to_string()))?;
    if complex.node(t_id).label != Genus(0) {
        return Err(MoveError::NotASphere(tine.to_string()));
    }
    if !gs.has_assertion(tine, "bounds a ball") {
        return Err(MoveError::AssertionMissing {
            node: tine.to_string(),
            assertion: "bounds a ball".to_string(),
        });
    }
    let usage = complex.usage(t_id);
    let (Some(fa), Some(fb)) = (usage.a_fork, usage.b_fork) else {
        return Err(MoveError::NotABall {
            reason: "the tine lies on the manifold boundary".to_string(),
        });
    };
    if ball.is_empty() {
        return Err(MoveError::NotABall {
            reason: "the ball side must contain at least one fork".to_string(),
        });
    }
    let mut region = BTreeSet::new();
    for name in ball {
        region.insert(
            complex
                .fork_by_name(name)
                .ok_or_else(|| MoveError::UnknownFork(name.clone()))?,
        );
    }
    let survivor = match (region.contains(&fa), region.contains(&fb)) {
        (true, false) => fb,
        (false, true) => fa,
        _ => {
            return Err(MoveError::NotABall {
                reason: "exactly one fork at the sphere tine must lie in the ball side"
                    .to_string(),
            })
        }
    };

    // The region's frontier must be exactly the sphere tine, and the region
    // may not touch the manifold boundary.
    let mut region_nodes: BTreeSet<NodeId> = BTreeSet::new();
    for &fid in &region {
        let fork = complex.fork(fid);
        region_nodes.insert(fork.grip);
        region_nodes.extend(fork.tines.iter().copied());
    }
    for &nid in &region_nodes {
        if nid == t_id {
            continue;
        }
        let u = complex.usage(nid);
        let refs: Vec<ForkId> = [u.a_fork, u.b_fork].into_iter().flatten().collect();
        if refs.iter().any(|f| !region.contains(f)) {
            return Err(MoveError::NotABall {
                reason: format!(
                    "node `{}` crosses the region frontier",
                    complex.node(nid).name
                ),
            });
        }
        if refs.len() == 1 {
            return Err(MoveError::NotABall {
                reason: format!(
                    "node `{}` lies on the manifold boundary",
                    complex.node(nid).name
                ),
            });
        }
    }

    // Euler characteristic of the claimed ball (frontier sphere excluded).
    let region_chi: i64 = region
        .iter()
        .map(|&f| complex.induced_body(f).euler())
        .sum::<i64>()
        - region_nodes
            .iter()
            .filter(|&&n| n != t_id)
            .map(|&n| complex.node(n).label.surface_euler())
            .sum::<i64>();
    if region_chi != 1 {
        return Err(MoveError::NotABall {
            reason: format!("the region has Euler characteristic {region_chi}, a ball has 1"),
        });
    }

    let removed: WidthMultiset = region_nodes
        .iter()
        .filter(|&&n| complex.node(n).kind == NodeKind::Grip)
        .map(|&n| complex.node(n).label)
        .collect();

    let mut sketch = Sketch::of(complex);
    for &fid in &region {
        let name = complex.fork(fid).name.clone();
        sketch.remove_fork(&name);
    }
    for &nid in &region_nodes {
        sketch.remove_node(&complex.node(nid).name);
    }
    // Cap off the ball: drop the sphere from the surviving fork's tines.
    let survivor_name = complex.fork(survivor).name.clone();
    for (name, _, _, tines) in &mut sketch.forks {
        if *name == survivor_name {
            tines.retain(|t| t != tine);
        }
    }

    Ok(Rewrite {
        sketch,
        removed,
        added: WidthMultiset::empty(),
        chi_delta: 0,
        expect: Some(Ordering::Less),
        blame: CycleBlame::Bug,
    })
}

fn plan_eliminate_trivial(
    gs: &GeneralizedSplitting,
    fork: &str,
    variant: TrivialElimVariant,
) -> Result<Rewrite, MoveError> {
    let complex = gs.complex();
    let fid = complex
        .fork_by_name(fork)
        .ok_or_else(|| MoveError::UnknownFork(fork.to_string()))?;
    let body = complex.induced_body(fid);
    if !body.is_trivial() {
        return Err(MoveError::NotTrivial(fork.to_string()));
    }
    let data = complex.fork(fid).clone();
    debug_assert_eq!(data.tines.len(), 1, "trivial bodies are 1-forks");
    let tine = data.tines[0];
    let grip = data.grip;
    let grip_label = complex.node(grip).label;

    match variant {
        TrivialElimVariant::BoundaryGrip => {
            if complex.is_interior(grip) {
                return Err(MoveError::WrongShape {
                    reason: "the grip must lie on the manifold boundary".to_string(),
                });
            }
            if !complex.is_interior(tine) {
                return Err(MoveError::WrongShape {
                    reason: "the tine must be glued to an adjacent fork".to_string(),
                });
            }
            let mut sketch = Sketch::of(complex);
            sketch.remove_fork(&data.name);
            sketch.remove_node(&complex.node(grip).name);
            Ok(Rewrite {
                sketch,
                removed: width_of(&[grip_label]),
                added: WidthMultiset::empty(),
                chi_delta: 0,
                expect: Some(Ordering::Less),
                blame: CycleBlame::Bug,
            })
        }
        TrivialElimVariant::InteriorMerge => {
            let grip_usage = complex.usage(grip);
            let tine_usage = complex.usage(tine);
            if !(grip_usage.is_interior() && tine_usage.is_interior()) {
                return Err(MoveError::WrongShape {
                    reason: "both ends of the fork must be interior".to_string(),
                });
            }
            let other = |u: crate::complex::NodeUsage| match data.side {
                Side::A => u.b_fork.unwrap(),
                Side::B => u.a_fork.unwrap(),
            };
            let fg = other(grip_usage); // neighbor across the grip
            let ft = other(tine_usage); // neighbor across the tine
            if fg == ft {
                return Err(MoveError::WrongShape {
                    reason: "the fork is glued to a single neighbor on both ends".to_string(),
                });
            }
            // The neighbor across the tine keeps its grip; the collar and
            // the grip-side neighbor fold into its minus boundary.
            let ft_fork = complex.fork(ft).clone();
            let fg_fork = complex.fork(fg).clone();
            debug_assert_eq!(ft_fork.side, fg_fork.side);
            let merged_grip = complex.node(ft_fork.grip).name.clone();
            let mut merged_tines: Vec<String> = ft_fork
                .tines
                .iter()
                .filter(|&&t| t != tine)
                .map(|&t| complex.node(t).name.clone())
                .collect();
            merged_tines.extend(fg_fork.tines.iter().map(|&t| complex.node(t).name.clone()));

            let mut sketch = Sketch::of(complex);
            sketch.remove_fork(&data.name);
            sketch.remove_fork(&ft_fork.name);
            sketch.remove_fork(&fg_fork.name);
            sketch.remove_node(&complex.node(grip).name);
            sketch.remove_node(&complex.node(tine).name);
            sketch.add_fork(&format!("{}_m", ft_fork.name), ft_fork.side, merged_grip, merged_tines);
            Ok(Rewrite {
                sketch,
                removed: width_of(&[grip_label]),
                added: WidthMultiset::empty(),
                chi_delta: 0,
                expect: Some(Ordering::Less),
                blame: CycleBlame::Shape,
            })
        }
    }
}

/// Dispatches a move, rebuilds the complex, and audits the result: the
/// rewritten complex must validate and stay exact, the Euler characteristic
/// must land on its expected value, the recomputed width must equal the
/// declared delta, and the width comparison must match the move's contract.
pub fn apply_move(gs: &GeneralizedSplitting, mv: &Move) -> Result<MoveReport, MoveError> {
    let plan = match mv {
        Move::Stabilize { grip } => plan_stabilize(gs, grip, true)?,
        Move::Destabilize { grip } => plan_stabilize(gs, grip, false)?,
        Move::WeakReduce(data) => plan_weak_reduce(gs, data)?,
        Move::Amalgamate { grips, shared } => plan_amalgamate(gs, grips, shared)?,
        Move::EliminateSphereTine { tine, ball } => plan_eliminate_sphere(gs, tine, ball)?,
        Move::EliminateTrivialFork { fork, variant } => {
            plan_eliminate_trivial(gs, fork, *variant)?
        }
    };

    let complex = plan.sketch.build().map_err(|err| match err {
        ComplexError::BodyInvalid { fork, source } => MoveError::BodyInvalid { fork, source },
        ComplexError::Disconnected { .. } => MoveError::Disconnects,
        other => MoveError::AuditFailed {
            reason: format!("rewritten complex failed validation: {other}"),
        },
    })?;
    let assertions = gs.retained_assertions(&complex);
    let result =
        GeneralizedSplitting::with_assertions(complex, assertions).map_err(|inf| match plan.blame
        {
            CycleBlame::Pattern => MoveError::PatternUnrecognized {
                reason: format!("result is not exact: {inf}"),
            },
            CycleBlame::Shape => MoveError::WrongShape {
                reason: format!("result is not exact: {inf}"),
            },
            CycleBlame::Bug => MoveError::AuditFailed {
                reason: format!("result is not exact: {inf}"),
            },
        })?;

    let old_width = gs.width();
    let new_width = result.width();
    let before = gs.complex().complex_euler();
    let after = result.complex().complex_euler();
    if after != before + plan.chi_delta {
        return Err(MoveError::ChiMismatch {
            before,
            after,
            expected: before + plan.chi_delta,
        });
    }
    let declared = old_width
        .checked_remove(&plan.removed)
        .map(|w| w.merged(&plan.added));
    if declared.as_ref() != Some(&new_width) {
        return Err(MoveError::AuditFailed {
            reason: format!(
                "declared width delta -{} +{} does not reproduce {new_width}",
                plan.removed, plan.added
            ),
        });
    }
    let ordering = compare_width(&new_width, &old_width);
    if let Some(expected) = plan.expect {
        if ordering != expected {
            return Err(MoveError::AuditFailed {
                reason: format!(
                    "width moved {ordering:?}, move requires {expected:?} ({old_width} -> {new_width})"
                ),
            });
        }
    }
    Ok(MoveReport {
        result,
        old_width,
        new_width,
        ordering,
        euler: after,
    })
}

pub fn stabilize(gs: &GeneralizedSplitting, grip: &str) -> Result<MoveReport, MoveError> {
    apply_move(gs, &Move::Stabilize { grip: grip.to_string() })
}

pub fn destabilize(gs: &GeneralizedSplitting, grip: &str) -> Result<MoveReport, MoveError> {
    apply_move(gs, &Move::Destabilize { grip: grip.to_string() })
}

pub fn weak_reduce(
    gs: &GeneralizedSplitting,
    data: WeakReductionData,
) -> Result<MoveReport, MoveError> {
    apply_move(gs, &Move::WeakReduce(data))
}

pub fn amalgamate(
    gs: &GeneralizedSplitting,
    grips: (String, String),
    shared: BTreeSet<String>,
) -> Result<MoveReport, MoveError> {
    apply_move(gs, &Move::Amalgamate { grips, shared })
}

pub fn eliminate_sphere_tine(
    gs: &GeneralizedSplitting,
    tine: &str,
    ball: BTreeSet<String>,
) -> Result<MoveReport, MoveError> {
    apply_move(
        gs,
        &Move::EliminateSphereTine {
            tine: tine.to_string(),
            ball,
        },
    )
}

pub fn eliminate_trivial_fork(
    gs: &GeneralizedSplitting,
    fork: &str,
    variant: TrivialElimVariant,
) -> Result<MoveReport, MoveError> {
    apply_move(
        gs,
        &Move::EliminateTrivialFork {
            fork: fork.to_string(),
            variant,
        },
    )
}
