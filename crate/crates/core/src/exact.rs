//! Exactness of fork complexes via strict level assignments.
//!
//! Exactness asks for a real-valued function on the vertices that vanishes
//! on the lower boundary class, is 1 on the upper one, strictly increases
//! along every A-side 1-simplex and strictly decreases along every B-side
//! 1-simplex in its standard orientation. Flipping the B simplices turns
//! this into one digraph in which each edge is a strict `<` constraint:
//!
//! * A-fork: every tine feeds the root, the root feeds the grip;
//! * B-fork: the grip feeds the root, the root feeds every tine.
//!
//! Feasibility reduces to the digraph being acyclic with no directed path
//! between pinned vertices of non-increasing pinned value. On success the
//! solver fixes a deterministic rational assignment: pinned values exact,
//! interior vertices layered by longest path and scaled into the open unit
//! interval.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::complex::{ForkComplex, ForkId, NodeId, Side};

/// A vertex of the constraint digraph: fork roots plus tine/grip nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Root(ForkId),
    Node(NodeId),
}

/// The strict-constraint digraph of a complex. Edge `u -> v` encodes
/// `level(u) < level(v)`.
#[derive(Debug, Clone)]
pub struct ExactnessDigraph {
    vertices: Vec<Vertex>,
    edges: BTreeMap<Vertex, Vec<Vertex>>,
}

impl ExactnessDigraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        self.edges.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges
            .iter()
            .flat_map(|(&u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }
}

impl ForkComplex {
    /// Builds the exactness digraph following the orientation rules above.
    pub fn exactness_digraph(&self) -> ExactnessDigraph {
        let mut vertices: Vec<Vertex> = self.fork_ids().map(Vertex::Root).collect();
        vertices.extend(self.node_ids().map(Vertex::Node));
        vertices.sort_unstable();
        let mut edges: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        let mut add = |u: Vertex, v: Vertex| edges.entry(u).or_default().push(v);
        for fid in self.fork_ids() {
            let fork = self.fork(fid);
            let root = Vertex::Root(fid);
            let grip = Vertex::Node(fork.grip);
            match fork.side {
                Side::A => {
                    for &t in &fork.tines {
                        add(Vertex::Node(t), root);
                    }
                    add(root, grip);
                }
                Side::B => {
                    add(grip, root);
                    for &t in &fork.tines {
                        add(root, Vertex::Node(t));
                    }
                }
            }
        }
        for targets in edges.values_mut() {
            targets.sort_unstable();
        }
        ExactnessDigraph { vertices, edges }
    }
}

/// An exact rational in lowest terms; all levels live in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    num: u64,
    den: u64,
}

impl Level {
    pub fn new(num: u64, den: u64) -> Level {
        assert!(den != 0, "level denominator must be nonzero");
        let g = gcd(num, den);
        Level {
            num: num / g,
            den: den / g,
        }
    }

    pub const ZERO: Level = Level { num: 0, den: 1 };
    pub const ONE: Level = Level { num: 1, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = u128::from(self.num) * u128::from(other.den);
        let rhs = u128::from(other.num) * u128::from(self.den);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The deterministic witness of exactness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAssignment {
    levels: BTreeMap<Vertex, Level>,
}

impl LevelAssignment {
    pub fn level(&self, v: Vertex) -> Level {
        self.levels[&v]
    }

    pub fn get(&self, v: Vertex) -> Option<Level> {
        self.levels.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Level)> + '_ {
        self.levels.iter().map(|(&v, &l)| (v, l))
    }
}

/// Why a complex admits no strict level function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Infeasibility {
    /// A directed cycle (listed in order; the last vertex feeds the first).
    Cycle(Vec<Vertex>),
    /// A directed path between pinned vertices whose pinned values do not
    /// strictly increase.
    PinnedPath { path: Vec<Vertex> },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::Cycle(cycle) => {
                write!(f, "constraint cycle:")?;
                for v in cycle {
                    write!(f, " {v:?}")?;
                }
                Ok(())
            }
            Infeasibility::PinnedPath { path } => {
                write!(f, "pinned levels forced to decrease along:")?;
                for v in path {
                    write!(f, " {v:?}")?;
                }
                Ok(())
            }
        }
    }
}

/// Decides exactness of a well-formed complex and, when feasible, returns
/// the canonical rational level assignment.
pub fn check_exact(complex: &ForkComplex) -> Result<LevelAssignment, Infeasibility> {
    let digraph = complex.exactness_digraph();
    let (lower, upper) = complex.boundary_partition();
    let mut pins: BTreeMap<Vertex, Level> = BTreeMap::new();
    for &n in &lower {
        pins.insert(Vertex::Node(n), Level::ZERO);
    }
    for &n in &upper {
        pins.insert(Vertex::Node(n), Level::ONE);
    }

    if let Some(cycle) = find_cycle(&digraph) {
        return Err(Infeasibility::Cycle(cycle));
    }
    if let Some(path) = pinned_violation(&digraph, &pins) {
        return Err(Infeasibility::PinnedPath { path });
    }

    // Longest-path layering of the interior vertices.
    let interior: Vec<Vertex> = digraph
        .vertices()
        .iter()
        .copied()
        .filter(|v| !pins.contains_key(v))
        .collect();
    let interior_set: BTreeSet<Vertex> = interior.iter().copied().collect();
    let mut indegree: BTreeMap<Vertex, usize> = interior.iter().map(|&v| (v, 0)).collect();
    for (u, v) in digraph.edges() {
        if interior_set.contains(&u) && interior_set.contains(&v) {
            *indegree.get_mut(&v).unwrap() += 1;
        }
    }
    let mut layer: BTreeMap<Vertex, u64> = interior.iter().map(|&v| (v, 0)).collect();
    let mut queue: VecDeque<Vertex> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&v, _)| v)
        .collect();
    let mut max_layer = 0;
    while let Some(u) = queue.pop_front() {
        let lu = layer[&u];
        max_layer = max_layer.max(lu);
        for &v in digraph.successors(u) {
            if !interior_set.contains(&v) {
                continue;
            }
            let lv = layer.get_mut(&v).unwrap();
            *lv = (*lv).max(lu + 1);
            let d = indegree.get_mut(&v).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(v);
            }
        }
    }

    let mut levels = pins;
    let den = max_layer + 2;
    for v in interior {
        levels.insert(v, Level::new(1 + layer[&v], den));
    }
    let assignment = LevelAssignment { levels };

    // Independent audit of the produced certificate.
    audit(&digraph, &lower, &upper, &assignment);
    Ok(assignment)
}

/// Every accepted assignment is re-verified against the raw definition:
/// exact boundary pins and strict growth along every edge. A failure here is
/// a solver bug and is surfaced immediately.
fn audit(
    digraph: &ExactnessDigraph,
    lower: &BTreeSet<NodeId>,
    upper: &BTreeSet<NodeId>,
    assignment: &LevelAssignment,
) {
    for &n in lower {
        assert_eq!(assignment.level(Vertex::Node(n)), Level::ZERO);
    }
    for &n in upper {
        assert_eq!(assignment.level(Vertex::Node(n)), Level::ONE);
    }
    for (u, v) in digraph.edges() {
        assert!(
            assignment.level(u) < assignment.level(v),
            "level audit failed on edge {u:?} -> {v:?}"
        );
    }
}

fn find_cycle(digraph: &ExactnessDigraph) -> Option<Vec<Vertex>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color: BTreeMap<Vertex, Color> = digraph
        .vertices()
        .iter()
        .map(|&v| (v, Color::White))
        .collect();
    let mut stack: Vec<Vertex> = Vec::new();

    fn visit(
        digraph: &ExactnessDigraph,
        v: Vertex,
        color: &mut BTreeMap<Vertex, Color>,
        stack: &mut Vec<Vertex>,
    ) -> Option<Vec<Vertex>> {
        color.insert(v, Color::Gray);
        stack.push(v);
        for &w in digraph.successors(v) {
            match color[&w] {
                Color::Gray => {
                    let start = stack.iter().position(|&x| x == w).unwrap();
                    return Some(stack[start..].to_vec());
                }
                Color::White => {
                    if let Some(cycle) = visit(digraph, w, color, stack) {
                        return Some(cycle);
                    }
                }
                Color::Black => {}
            }
        }
        stack.pop();
        color.insert(v, Color::Black);
        None
    }

    for &v in digraph.vertices() {
        if color[&v] == Color::White {
            if let Some(cycle) = visit(digraph, v, &mut color, &mut stack) {
                return Some(cycle);
            }
        }
    }
    None
}

/// Finds a directed path from a pinned vertex to a pinned vertex of
/// equal-or-lower pinned value, if any exists.
fn pinned_violation(
    digraph: &ExactnessDigraph,
    pins: &BTreeMap<Vertex, Level>,
) -> Option<Vec<Vertex>> {
    for (&start, &pin_start) in pins {
        let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in digraph.successors(u) {
                if parent.contains_key(&v) {
                    continue;
                }
                parent.insert(v, u);
                if let Some(&pin_v) = pins.get(&v) {
                    if pin_v <= pin_start {
                        let mut path = vec![v];
                        let mut cur = v;
                        while cur != start {
                            cur = parent[&cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                }
                queue.push_back(v);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::Genus;
    use crate::complex::{ComplexBuilder, NodeKind};

    fn level(num: u64, den: u64) -> Level {
        Level::new(num, den)
    }

    #[test]
    fn product_levels() {
        let mut b = ComplexBuilder::new();
        let a = b.node("a", NodeKind::Tine, Genus(2));
        let g = b.node("G", NodeKind::Grip, Genus(2));
        let bt = b.node("b", NodeKind::Tine, Genus(2));
        let fa = b.fork("f1", Side::A, g, vec![a]);
        let fb = b.fork("f2", Side::B, g, vec![bt]);
        let c = b.build().unwrap();
        let levels = check_exact(&c).unwrap();
        assert_eq!(levels.level(Vertex::Node(a)), Level::ZERO);
        assert_eq!(levels.level(Vertex::Root(fa)), level(1, 4));
        assert_eq!(levels.level(Vertex::Node(g)), level(2, 4));
        assert_eq!(levels.level(Vertex::Root(fb)), level(3, 4));
        assert_eq!(levels.level(Vertex::Node(bt)), Level::ONE);
    }

    #[test]
    fn capped_ball_levels() {
        // A 0-fork whose grip is shared with a B 1-fork; the free B-tine is
        // the single upper-boundary node.
        let mut b = ComplexBuilder::new();
        let g = b.node("G", NodeKind::Grip, Genus(0));
        let m = b.node("m", NodeKind::Tine, Genus(0));
        let f1 = b.fork("f1", Side::A, g, vec![]);
        let f2 = b.fork("f2", Side::B, g, vec![m]);
        let c = b.build().unwrap();
        let (lower, upper) = c.boundary_partition();
        assert!(lower.is_empty());
        assert_eq!(upper.len(), 1);
        let levels = check_exact(&c).unwrap();
        assert_eq!(levels.level(Vertex::Root(f1)), level(1, 4));
        assert_eq!(levels.level(Vertex::Node(g)), level(2, 4));
        assert_eq!(levels.level(Vertex::Root(f2)), level(3, 4));
        assert_eq!(levels.level(Vertex::Node(m)), Level::ONE);
    }

    #[test]
    fn two_fork_cycle_is_rejected_with_witness() {
        // Gluing the same pair of forks along both a grip and a tine closes
        // the constraint graph on itself.
        let mut b = ComplexBuilder::new();
        let g = b.node("G", NodeKind::Grip, Genus(2));
        let t = b.node("t", NodeKind::Tine, Genus(1));
        b.fork("f1", Side::A, g, vec![t]);
        b.fork("f2", Side::B, g, vec![t]);
        let c = b.build().unwrap();
        match check_exact(&c) {
            Err(Infeasibility::Cycle(cycle)) => {
                assert_eq!(cycle.len(), 4);
                assert!(cycle.contains(&Vertex::Node(g)));
                assert!(cycle.contains(&Vertex::Node(t)));
            }
            other => panic!("expected a cycle witness, got {other:?}"),
        }
    }

    #[test]
    fn boundary_nodes_are_sources_and_sinks() {
        let mut b = ComplexBuilder::new();
        let a = b.node("a", NodeKind::Tine, Genus(1));
        let g = b.node("G", NodeKind::Grip, Genus(2));
        let t = b.node("t", NodeKind::Tine, Genus(1));
        b.fork("f1", Side::A, g, vec![a]);
        b.fork("f2", Side::B, g, vec![t]);
        let c = b.build().unwrap();
        let digraph = c.exactness_digraph();
        let (lower, upper) = c.boundary_partition();
        for &n in &lower {
            let v = Vertex::Node(n);
            assert!(digraph.edges().all(|(_, w)| w != v), "lower node has in-edge");
        }
        for &n in &upper {
            let v = Vertex::Node(n);
            assert!(digraph.successors(v).is_empty(), "upper node has out-edge");
        }
    }
}
