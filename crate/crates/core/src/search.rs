//! Move enumeration and search for move-minimal splittings.
//!
//! "Thin" in the strict sense quantifies over every splitting of the same
//! manifold and is not computable from genus data. What the search finds is
//! a splitting to which no *permitted* width-decreasing move applies, where
//! permission comes from recorded user assertions. That relative notion is
//! the one exported here; nothing in this module claims more.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use std::fmt;

use crate::body::Genus;
use crate::canon::CanonicalForm;
use crate::complex::{ForkComplex, GeneralizedSplitting, NodeId, NodeKind};
use crate::moves::{
    apply_move, Move, TineAssignment, TrivialElimVariant, WeakReductionData, WrCase, WrShape,
};
use crate::width::WidthMultiset;

/// Hard bounds for a search run. Searches are deterministic given a budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum trace length.
    pub max_depth: u32,
    /// Maximum number of distinct states (canonical forms) visited.
    pub max_states: u32,
    /// Whether non-decreasing moves (stabilize, most amalgamations) may be
    /// interleaved; only the brute-force closure honors this.
    pub allow_nondecreasing: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 16,
            max_states: 10_000,
            allow_nondecreasing: false,
        }
    }
}

/// Claims granted to the search, keyed by node name. Recorded assertions on
/// the splitting itself are honored too; this set adds to them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssertionSet {
    claims: BTreeMap<String, BTreeSet<String>>,
}

impl AssertionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Seeds the set with the assertions already recorded on a splitting.
    pub fn from_splitting(gs: &GeneralizedSplitting) -> Self {
        AssertionSet {
            claims: gs.assertions().clone(),
        }
    }

    pub fn grant(&mut self, node: &str, claim: impl Into<String>) -> &mut Self {
        self.claims
            .entry(node.to_string())
            .or_default()
            .insert(claim.into());
        self
    }

    pub fn permits(&self, node: &str, claim: &str) -> bool {
        self.claims
            .get(node)
            .is_some_and(|set| set.contains(claim))
    }
}

/// The canonical claim string a move needs, if any.
pub fn required_claim(mv: &Move) -> Option<(String, String)> {
    match mv {
        Move::Stabilize { .. }
        | Move::Amalgamate { .. }
        | Move::EliminateTrivialFork { .. } => None,
        Move::Destabilize { grip } => Some((grip.clone(), "stabilized".to_string())),
        Move::WeakReduce(data) => {
            let claim = match data.case {
                WrCase::Nn => "weakly-reducible NN".to_string(),
                WrCase::Nu { a, b } => format!("weakly-reducible NU {a} {b}"),
                WrCase::NsSep { a, b } => format!("weakly-reducible NSsep {a} {b}"),
                WrCase::Ss { k, g1, g2 } => format!("weakly-reducible SS {k} {g1} {g2}"),
            };
            Some((data.grip.clone(), claim))
        }
        Move::EliminateSphereTine { tine, .. } => {
            Some((tine.clone(), "bounds a ball".to_string()))
        }
    }
}

/// A structurally applicable move, with its assertion requirement and the
/// projected width comparison.
#[derive(Debug, Clone)]
pub struct EnumeratedMove {
    pub mv: Move,
    /// The (node, claim) pair the move needs, when it rests on a
    /// topological fact the engine cannot decide.
    pub requires: Option<(String, String)>,
    /// Whether the requirement is met by the supplied assertions (true when
    /// there is no requirement).
    pub satisfied: bool,
    /// Whether the projected width strictly decreases.
    pub decreasing: bool,
}

fn projected_decreasing(
    width: &WidthMultiset,
    removed: &WidthMultiset,
    added: &WidthMultiset,
) -> bool {
    match width.checked_remove(removed) {
        Some(rest) => rest.merged(added) < *width,
        None => false,
    }
}

/// Enumerates every structurally applicable move in canonical order: grips
/// ascending by canonical index with stabilize, destabilize, then the
/// weak-reduction cases (NN < NU < NSsep < SS, genus parameters ascending),
/// followed by amalgamations, sphere-tine eliminations and trivial-fork
/// eliminations. Moves resting on unsupplied assertions are still listed,
/// with `satisfied = false`.
pub fn enumerate_moves(gs: &GeneralizedSplitting, assertions: &AssertionSet) -> Vec<EnumeratedMove> {
    let complex = gs.complex();
    let order = complex.canonical_order();
    let width = gs.width();
    let mut out = Vec::new();
    let mut push = |mv: Move, removed: &WidthMultiset, added: &WidthMultiset| {
        let requires = required_claim(&mv);
        let satisfied = requires.as_ref().is_none_or(|(node, claim)| {
            assertions.permits(node, claim) || gs.has_assertion(node, claim)
        });
        let decreasing = projected_decreasing(&width, removed, added);
        out.push(EnumeratedMove {
            mv,
            requires,
            satisfied,
            decreasing,
        });
    };

    let canonical_grips: Vec<NodeId> = order
        .nodes
        .iter()
        .copied()
        .filter(|&id| complex.node(id).kind == NodeKind::Grip)
        .collect();

    for &grip_id in &canonical_grips {
        let grip = complex.node(grip_id);
        let name = grip.name.clone();
        let g = grip.label;
        let one = |v: Genus| WidthMultiset::new(vec![v]);

        push(
            Move::Stabilize { grip: name.clone() },
            &one(g),
            &one(Genus(g.0 + 1)),
        );

        if g.0 >= 1 && destabilize_keeps_bodies_valid(complex, grip_id) {
            push(
                Move::Destabilize { grip: name.clone() },
                &one(g),
                &one(Genus(g.0 - 1)),
            );
        }

        if complex.is_interior(grip_id) {
            for (case, lo, hi) in weak_reduce_cases(g) {
                for shape in weak_reduce_shapes(case) {
                    let (lo, hi) = match shape {
                        WrShape::Chain => (lo, hi),
                        WrShape::Split => (hi, lo),
                    };
                    for tines in tine_assignments(complex, grip_id, case, lo, hi) {
                        push(
                            Move::WeakReduce(WeakReductionData {
                                grip: name.clone(),
                                case,
                                shape,
                                tines,
                            }),
                            &one(g),
                            &WidthMultiset::new(vec![lo, hi]),
                        );
                    }
                }
            }
        }
    }

    // Amalgamations of adjacent splittings.
    for &n1 in &canonical_grips {
        for &n2 in &canonical_grips {
            if n1 == n2 {
                continue;
            }
            let (u1, u2) = (complex.usage(n1), complex.usage(n2));
            let (Some(b1), Some(a2)) = (u1.b_fork, u2.a_fork) else {
                continue;
            };
            if !u1.is_interior() || !u2.is_interior() {
                continue;
            }
            let shared: BTreeSet<String> = complex
                .fork(b1)
                .tines
                .iter()
                .filter(|t| complex.fork(a2).tines.contains(t))
                .map(|&t| complex.node(t).name.clone())
                .collect();
            if shared.is_empty() {
                continue;
            }
            let g1 = complex.node(n1).label;
            let g2 = complex.node(n2).label;
            let shared_sum: u32 = shared
                .iter()
                .map(|t| complex.node(complex.node_by_name(t).unwrap()).label.0)
                .sum();
            let h = Genus(g1.0 + g2.0 - shared_sum + shared.len() as u32 - 1);
            push(
                Move::Amalgamate {
                    grips: (
                        complex.node(n1).name.clone(),
                        complex.node(n2).name.clone(),
                    ),
                    shared,
                },
                &WidthMultiset::new(vec![g1, g2]),
                &WidthMultiset::new(vec![h]),
            );
        }
    }

    // Sphere-tine eliminations.
    for &tine_id in order
        .nodes
        .iter()
        .filter(|&&id| complex.node(id).kind == NodeKind::Tine)
    {
        if complex.node(tine_id).label != Genus(0) || !complex.is_interior(tine_id) {
            continue;
        }
        for ball in ball_sides(complex, tine_id) {
            let removed: WidthMultiset = ball_grip_labels(complex, &ball);
            push(
                Move::EliminateSphereTine {
                    tine: complex.node(tine_id).name.clone(),
                    ball: ball
                        .iter()
                        .map(|&f| complex.fork(f).name.clone())
                        .collect(),
                },
                &removed,
                &WidthMultiset::empty(),
            );
        }
    }

    // Trivial-fork eliminations.
    for &fork_id in &order.forks {
        let body = complex.induced_body(fork_id);
        if !body.is_trivial() {
            continue;
        }
        let fork = complex.fork(fork_id);
        let grip_label = complex.node(fork.grip).label;
        let tine_id = fork.tines[0];
        let grip_interior = complex.is_interior(fork.grip);
        let tine_interior = complex.is_interior(tine_id);
        let removed = WidthMultiset::new(vec![grip_label]);
        if !grip_interior && tine_interior {
            push(
                Move::EliminateTrivialFork {
                    fork: fork.name.clone(),
                    variant: TrivialElimVariant::BoundaryGrip,
                },
                &removed,
                &WidthMultiset::empty(),
            );
        }
        if grip_interior && tine_interior {
            let grip_partner = match fork.side {
                crate::complex::Side::A => complex.usage(fork.grip).b_fork,
                crate::complex::Side::B => complex.usage(fork.grip).a_fork,
            };
            let tine_partner = match fork.side {
                crate::complex::Side::A => complex.usage(tine_id).b_fork,
                crate::complex::Side::B => complex.usage(tine_id).a_fork,
            };
            if grip_partner != tine_partner {
                push(
                    Move::EliminateTrivialFork {
                        fork: fork.name.clone(),
                        variant: TrivialElimVariant::InteriorMerge,
                    },
                    &removed,
                    &WidthMultiset::empty(),
                );
            }
        }
    }

    out
}

fn destabilize_keeps_bodies_valid(complex: &ForkComplex, grip: NodeId) -> bool {
    let lowered = u64::from(complex.node(grip).label.0) - 1;
    let usage = complex.usage(grip);
    [usage.a_fork, usage.b_fork]
        .into_iter()
        .flatten()
        .all(|fid| {
            let sum: u64 = complex
                .fork(fid)
                .tines
                .iter()
                .map(|&t| u64::from(complex.node(t).label.0))
                .sum();
            sum <= lowered
        })
}

/// All case parameterizations admissible at a grip of genus `g`, with the
/// closed-form new grip labels `(lo, hi)` of the chain shape.
fn weak_reduce_cases(g: Genus) -> Vec<(WrCase, Genus, Genus)> {
    let mut cases = Vec::new();
    if g.0 >= 2 {
        cases.push((WrCase::Nn, Genus(g.0 - 1), Genus(g.0 - 1)));
    }
    if g.0 >= 1 {
        let lower = g.0 - 1;
        for a in 0..=lower / 2 {
            cases.push((
                WrCase::Nu {
                    a: Genus(a),
                    b: Genus(lower - a),
                },
                Genus(g.0 - 1),
                Genus(g.0 - 1),
            ));
        }
        for a in 0..=lower {
            cases.push((
                WrCase::NsSep {
                    a: Genus(a),
                    b: Genus(lower - a),
                },
                Genus(g.0 - 1),
                Genus(a + 1),
            ));
        }
        for k in 0..=lower {
            for g1 in 0..=k {
                cases.push((
                    WrCase::Ss {
                        k: Genus(k),
                        g1: Genus(g1),
                        g2: Genus(k - g1),
                    },
                    Genus(k),
                    Genus(g.0 - g1),
                ));
            }
        }
    }
    cases
}

fn weak_reduce_shapes(case: WrCase) -> Vec<WrShape> {
    match case {
        // The dual wiring only differs when the two new grips differ.
        WrCase::Nn | WrCase::Nu { .. } => vec![WrShape::Chain],
        WrCase::NsSep { .. } | WrCase::Ss { .. } => vec![WrShape::Chain, WrShape::Split],
    }
}

/// Enumerates tine routings: the default outer routing always, plus every
/// subset routing that keeps all four bodies arithmetically valid. Caps the
/// subset search at six movable tines per side.
fn tine_assignments(
    complex: &ForkComplex,
    grip: NodeId,
    case: WrCase,
    lo: Genus,
    hi: Genus,
) -> Vec<TineAssignment> {
    let usage = complex.usage(grip);
    let (Some(fa), Some(fb)) = (usage.a_fork, usage.b_fork) else {
        return vec![TineAssignment::default()];
    };
    let tines_of = |fid| -> Vec<(String, u64)> {
        complex
            .fork(fid)
            .tines
            .iter()
            .map(|&t| {
                (
                    complex.node(t).name.clone(),
                    u64::from(complex.node(t).label.0),
                )
            })
            .collect()
    };
    let a_tines = tines_of(fa);
    let b_tines = tines_of(fb);
    // Total genus of the fresh interior tines glued between the middle
    // forks (the NSsep case absorbs its b side, leaving one tine of genus a).
    let new_sum: u64 = match case {
        WrCase::Nn => u64::from(complex.node(grip).label.0) - 2,
        WrCase::Nu { a, b } => u64::from(a.0) + u64::from(b.0),
        WrCase::NsSep { a, .. } => u64::from(a.0),
        WrCase::Ss { g2, .. } => u64::from(g2.0),
    };

    let mut result = vec![TineAssignment::default()];
    if a_tines.len() > 6 || b_tines.len() > 6 {
        return result;
    }
    let a_total: u64 = a_tines.iter().map(|(_, g)| g).sum();
    let b_total: u64 = b_tines.iter().map(|(_, g)| g).sum();
    for a_mask in 0u32..(1 << a_tines.len()) {
        for b_mask in 0u32..(1 << b_tines.len()) {
            if a_mask == 0 && b_mask == 0 {
                continue; // the default is already in
            }
            let a_mid_sum: u64 = a_tines
                .iter()
                .enumerate()
                .filter(|(i, _)| a_mask & (1 << i) != 0)
                .map(|(_, (_, g))| g)
                .sum();
            let b_mid_sum: u64 = b_tines
                .iter()
                .enumerate()
                .filter(|(i, _)| b_mask & (1 << i) != 0)
                .map(|(_, (_, g))| g)
                .sum();
            let ok = (a_total - a_mid_sum) <= u64::from(lo.0)
                && new_sum + b_mid_sum <= u64::from(lo.0)
                && new_sum + a_mid_sum <= u64::from(hi.0)
                && (b_total - b_mid_sum) <= u64::from(hi.0);
            if !ok {
                continue;
            }
            result.push(TineAssignment {
                a_mid: a_tines
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| a_mask & (1 << i) != 0)
                    .map(|(_, (n, _))| n.clone())
                    .collect(),
                b_mid: b_tines
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| b_mask & (1 << i) != 0)
                    .map(|(_, (n, _))| n.clone())
                    .collect(),
            });
        }
    }
    result
}

/// The (up to two) fork sets that qualify structurally as the ball side of
/// a sphere tine: closed under gluings away from the tine, free of boundary
/// nodes, of ball Euler characteristic, and removable without
/// disconnecting.
pub(crate) fn ball_sides(complex: &ForkComplex, tine: NodeId) -> Vec<BTreeSet<crate::complex::ForkId>> {
    use crate::complex::ForkId;
    let usage = complex.usage(tine);
    let (Some(fa), Some(fb)) = (usage.a_fork, usage.b_fork) else {
        return Vec::new();
    };
    let mut sides = Vec::new();
    'side: for (inside, survivor) in [(fa, fb), (fb, fa)] {
        // Closure from `inside` without crossing the sphere tine.
        let mut region: BTreeSet<ForkId> = BTreeSet::new();
        let mut queue = VecDeque::from([inside]);
        region.insert(inside);
        while let Some(fid) = queue.pop_front() {
            let fork = complex.fork(fid);
            for node in std::iter::once(fork.grip).chain(fork.tines.iter().copied()) {
                if node == tine {
                    continue;
                }
                let u = complex.usage(node);
                for next in [u.a_fork, u.b_fork].into_iter().flatten() {
                    if region.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        if region.contains(&survivor) {
            continue; // a loop runs around the sphere; no ball side here
        }
        let mut region_nodes: BTreeSet<NodeId> = BTreeSet::new();
        for &fid in &region {
            let fork = complex.fork(fid);
            region_nodes.insert(fork.grip);
            region_nodes.extend(fork.tines.iter().copied());
        }
        let mut chi: i64 = region.iter().map(|&f| complex.induced_body(f).euler()).sum();
        for &n in &region_nodes {
            if n == tine {
                continue;
            }
            if !complex.is_interior(n) {
                continue 'side; // touches the manifold boundary
            }
            chi -= complex.node(n).label.surface_euler();
        }
        if chi != 1 {
            continue;
        }
        // The remainder must stay connected.
        let outside: Vec<ForkId> = complex.fork_ids().filter(|f| !region.contains(f)).collect();
        if !forks_connected(complex, &outside, tine) {
            continue;
        }
        sides.push(region);
    }
    sides
}

fn forks_connected(complex: &ForkComplex, forks: &[crate::complex::ForkId], skip_node: NodeId) -> bool {
    let Some(&start) = forks.first() else {
        return false;
    };
    let set: BTreeSet<_> = forks.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(fid) = queue.pop_front() {
        let fork = complex.fork(fid);
        for node in std::iter::once(fork.grip).chain(fork.tines.iter().copied()) {
            if node == skip_node {
                continue;
            }
            let u = complex.usage(node);
            for next in [u.a_fork, u.b_fork].into_iter().flatten() {
                if set.contains(&next) && seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.len() == set.len()
}

fn ball_grip_labels(
    complex: &ForkComplex,
    region: &BTreeSet<crate::complex::ForkId>,
) -> WidthMultiset {
    let mut grips: BTreeSet<NodeId> = BTreeSet::new();
    for &fid in region {
        grips.insert(complex.fork(fid).grip);
    }
    grips.iter().map(|&n| complex.node(n).label).collect()
}

/// One applied step of a search trace.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub mv: Move,
    pub width_after: WidthMultiset,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {{{}}}", self.mv, self.width_after)
    }
}

/// Result of [`thin_search`].
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub splitting: GeneralizedSplitting,
    pub width: WidthMultiset,
    pub trace: Vec<TraceStep>,
    pub budget_exhausted: bool,
    pub states_visited: u32,
}

/// Result of [`brute_force_min_width`].
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub min_width: WidthMultiset,
    pub budget_exhausted: bool,
    pub states_visited: u32,
}

struct StateData {
    gs: GeneralizedSplitting,
    trace: Vec<TraceStep>,
}

/// Best-first search over permitted width-decreasing moves. Returns the
/// minimal terminal state reached within budget: a splitting to which no
/// permitted decreasing move applies. Ties break by shorter trace, then by
/// canonical form. Within budget the search exhausts the decreasing
/// closure, so the result width is its true minimum; when the budget stops
/// it early the best state so far is returned with `budget_exhausted` set.
pub fn thin_search(
    gs: &GeneralizedSplitting,
    budget: &SearchBudget,
    assertions: &AssertionSet,
) -> SearchResult {
    let mut arena: Vec<StateData> = Vec::new();
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut heap: BinaryHeap<Reverse<(WidthMultiset, u32, CanonicalForm, usize)>> =
        BinaryHeap::new();
    let mut exhausted = false;

    let root_key = gs.complex().canonical_form();
    seen.insert(root_key.clone());
    arena.push(StateData {
        gs: gs.clone(),
        trace: Vec::new(),
    });
    heap.push(Reverse((gs.width(), 0, root_key, 0)));

    let mut best_terminal: Option<usize> = None;
    let mut best_terminal_key: Option<(WidthMultiset, u32, CanonicalForm)> = None;
    let mut best_any: usize = 0;
    let mut best_any_key = (gs.width(), 0u32, gs.complex().canonical_form());

    while let Some(Reverse((width, depth, canon, index))) = heap.pop() {
        let key = (width.clone(), depth, canon.clone());
        if key < best_any_key {
            best_any_key = key;
            best_any = index;
        }

        if depth >= budget.max_depth {
            // Cannot expand; unknown whether it is terminal.
            exhausted = true;
            continue;
        }

        let state_gs = arena[index].gs.clone();
        let moves = enumerate_moves(&state_gs, assertions);
        let mut advanced = false;
        for em in moves {
            if !(em.satisfied && em.decreasing) {
                continue;
            }
            let Ok(report) = apply_move(&state_gs, &em.mv) else {
                continue;
            };
            advanced = true;
            let child_key = report.result.complex().canonical_form();
            if seen.contains(&child_key) {
                continue;
            }
            if seen.len() as u32 >= budget.max_states {
                exhausted = true;
                break;
            }
            seen.insert(child_key.clone());
            let mut trace = arena[index].trace.clone();
            trace.push(TraceStep {
                mv: em.mv.clone(),
                width_after: report.new_width.clone(),
            });
            arena.push(StateData {
                gs: report.result,
                trace,
            });
            heap.push(Reverse((
                report.new_width,
                depth + 1,
                child_key,
                arena.len() - 1,
            )));
        }
        if !advanced {
            let key = (width, depth, canon);
            if best_terminal_key.as_ref().is_none_or(|k| key < *k) {
                best_terminal_key = Some(key);
                best_terminal = Some(index);
            }
        }
    }

    let chosen = best_terminal.unwrap_or(best_any);
    if best_terminal.is_none() {
        exhausted = true;
    }
    let state = &arena[chosen];
    SearchResult {
        splitting: state.gs.clone(),
        width: state.gs.width(),
        trace: state.trace.clone(),
        budget_exhausted: exhausted,
        states_visited: seen.len() as u32,
    }
}

/// Exhaustive breadth-first closure over every permitted move (including
/// the non-decreasing ones when the budget allows them), deduplicated by
/// canonical form; returns the minimum width reached.
pub fn brute_force_min_width(
    gs: &GeneralizedSplitting,
    budget: &SearchBudget,
    assertions: &AssertionSet,
) -> BruteForceResult {
    let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut queue: VecDeque<(GeneralizedSplitting, u32)> = VecDeque::new();
    let mut exhausted = false;
    let mut min_width = gs.width();

    seen.insert(gs.complex().canonical_form());
    queue.push_back((gs.clone(), 0));

    while let Some((state, depth)) = queue.pop_front() {
        let width = state.width();
        if width < min_width {
            min_width = width;
        }
        if depth >= budget.max_depth {
            exhausted = true;
            continue;
        }
        for em in enumerate_moves(&state, assertions) {
            if !em.satisfied {
                continue;
            }
            if !em.decreasing && !budget.allow_nondecreasing {
                continue;
            }
            let Ok(report) = apply_move(&state, &em.mv) else {
                continue;
            };
            let key = report.result.complex().canonical_form();
            if seen.contains(&key) {
                continue;
            }
            if seen.len() as u32 >= budget.max_states {
                exhausted = true;
                break;
            }
            seen.insert(key);
            queue.push_back((report.result, depth + 1));
        }
    }

    BruteForceResult {
        min_width,
        budget_exhausted: exhausted,
        states_visited: seen.len() as u32,
    }
}
