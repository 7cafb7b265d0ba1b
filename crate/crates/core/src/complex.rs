//! Fork complexes: construction, well-formedness, boundary partition, width
//! and the induced splitting data at a grip.
//!
//! A fork is a star with one root joining a grip and any number of tines; it
//! stands for a compression body (grip = plus boundary, tines = minus
//! components). A fork complex glues finitely many A-side and B-side forks
//! by sharing nodes: a node referenced by one A-fork slot and one B-fork
//! slot of the same kind is interior, a node referenced once is boundary.
//! Gluings never pair two forks of the same side.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::body::{BodyError, CompressionBody, Genus, GenusMultiset};
use crate::exact::{check_exact, Infeasibility, LevelAssignment};
use crate::width::WidthMultiset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ForkId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Tine,
    Grip,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Tine => write!(f, "tine"),
            NodeKind::Grip => write!(f, "grip"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// A tine or grip vertex carrying a genus label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
    pub label: Genus,
}

/// One fork: a root (implicit), a grip and `n >= 0` tines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fork {
    pub name: String,
    pub side: Side,
    pub grip: NodeId,
    pub tines: Vec<NodeId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("a fork complex needs at least one fork")]
    Empty,
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("fork `{fork}` uses node `{node}` as a {expected}, but it is a {actual}")]
    KindMismatch {
        fork: String,
        node: String,
        expected: NodeKind,
        actual: NodeKind,
    },
    #[error("node `{node}` is used by more than one side-{side} fork slot")]
    DoubleGluing { node: String, side: Side },
    #[error("fork `{fork}` induces an invalid compression body: {source}")]
    BodyInvalid { fork: String, source: BodyError },
    #[error("the complex is not connected (`{detached}` is unreachable from `{root}`)")]
    Disconnected { root: String, detached: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown fork `{0}`")]
    UnknownFork(String),
}

/// Which forks reference a node, split by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeUsage {
    pub a_fork: Option<ForkId>,
    pub b_fork: Option<ForkId>,
}

impl NodeUsage {
    pub fn is_interior(&self) -> bool {
        self.a_fork.is_some() && self.b_fork.is_some()
    }

    /// The side that references the node, for boundary nodes.
    pub fn single_side(&self) -> Option<Side> {
        match (self.a_fork, self.b_fork) {
            (Some(_), None) => Some(Side::A),
            (None, Some(_)) => Some(Side::B),
            _ => None,
        }
    }
}

/// A validated, connected fork complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkComplex {
    nodes: Vec<Node>,
    forks: Vec<Fork>,
    usage: Vec<NodeUsage>,
}

/// Unvalidated staging area for building a complex.
#[derive(Debug, Default, Clone)]
pub struct ComplexBuilder {
    nodes: Vec<Node>,
    forks: Vec<Fork>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, name: impl Into<String>, kind: NodeKind, label: Genus) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node {
            name: name.into(),
            kind,
            label,
        });
        id
    }

    pub fn fork(
        &mut self,
        name: impl Into<String>,
        side: Side,
        grip: NodeId,
        tines: Vec<NodeId>,
    ) -> ForkId {
        let id = ForkId(self.forks.len() as u32);
        self.forks.push(Fork {
            name: name.into(),
            side,
            grip,
            tines,
        });
        id
    }

    /// Runs the full well-formedness check and freezes the complex.
    pub fn build(self) -> Result<ForkComplex, ComplexError> {
        ForkComplex::validate(self.nodes, self.forks)
    }
}

impl ForkComplex {
    /// Accepts the data iff names are unique, every slot kind-matches its
    /// node, no node is used twice on one side, each fork induces a valid
    /// compression body, and the underlying 1-complex is connected.
    pub fn validate(nodes: Vec<Node>, forks: Vec<Fork>) -> Result<Self, ComplexError> {
        if forks.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut seen = BTreeSet::new();
        for name in nodes.iter().map(|n| &n.name).chain(forks.iter().map(|f| &f.name)) {
            if !seen.insert(name.clone()) {
                return Err(ComplexError::DuplicateName(name.clone()));
            }
        }

        let mut usage = vec![NodeUsage::default(); nodes.len()];
        for (fi, fork) in forks.iter().enumerate() {
            let fid = ForkId(fi as u32);
            for (slot_kind, node_id) in std::iter::once((NodeKind::Grip, fork.grip))
                .chain(fork.tines.iter().map(|&t| (NodeKind::Tine, t)))
            {
                let node = nodes
                    .get(node_id.0 as usize)
                    .ok_or_else(|| ComplexError::UnknownNode(format!("#{}", node_id.0)))?;
                if node.kind != slot_kind {
                    return Err(ComplexError::KindMismatch {
                        fork: fork.name.clone(),
                        node: node.name.clone(),
                        expected: slot_kind,
                        actual: node.kind,
                    });
                }
                let slot = match fork.side {
                    Side::A => &mut usage[node_id.0 as usize].a_fork,
                    Side::B => &mut usage[node_id.0 as usize].b_fork,
                };
                if slot.is_some() {
                    return Err(ComplexError::DoubleGluing {
                        node: node.name.clone(),
                        side: fork.side,
                    });
                }
                *slot = Some(fid);
            }
        }

        for (ni, u) in usage.iter().enumerate() {
            if u.a_fork.is_none() && u.b_fork.is_none() {
                return Err(ComplexError::Disconnected {
                    root: forks[0].name.clone(),
                    detached: nodes[ni].name.clone(),
                });
            }
        }

        for fork in &forks {
            let minus: GenusMultiset = fork
                .tines
                .iter()
                .map(|&t| nodes[t.0 as usize].label)
                .collect();
            let plus = nodes[fork.grip.0 as usize].label;
            if let Err(source) = CompressionBody::new(plus, minus) {
                return Err(ComplexError::BodyInvalid {
                    fork: fork.name.clone(),
                    source,
                });
            }
        }

        // Connectivity over the bipartite fork/node incidence graph.
        let mut fork_seen = vec![false; forks.len()];
        let mut node_seen = vec![false; nodes.len()];
        let mut queue = VecDeque::from([ForkId(0)]);
        fork_seen[0] = true;
        while let Some(fid) = queue.pop_front() {
            let fork = &forks[fid.0 as usize];
            for node_id in std::iter::once(fork.grip).chain(fork.tines.iter().copied()) {
                if !node_seen[node_id.0 as usize] {
                    node_seen[node_id.0 as usize] = true;
                    let u = usage[node_id.0 as usize];
                    for next in [u.a_fork, u.b_fork].into_iter().flatten() {
                        if !fork_seen[next.0 as usize] {
                            fork_seen[next.0 as usize] = true;
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        if let Some(fi) = fork_seen.iter().position(|&s| !s) {
            return Err(ComplexError::Disconnected {
                root: forks[0].name.clone(),
                detached: forks[fi].name.clone(),
            });
        }

        Ok(ForkComplex {
            nodes,
            forks,
            usage,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn forks(&self) -> &[Fork] {
        &self.forks
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0 as usize]
    }

    pub fn fork(&self, id: ForkId) -> &Fork {
        &self.forks[id.0 as usize]
    }

    pub fn usage(&self, id: NodeId) -> NodeUsage {
        self.usage[id.0 as usize]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn fork_ids(&self) -> impl Iterator<Item = ForkId> {
        (0..self.forks.len() as u32).map(ForkId)
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .map(|i| NodeId(i as u32))
    }

    pub fn fork_by_name(&self, name: &str) -> Option<ForkId> {
        self.forks
            .iter()
            .position(|f| f.name == name)
            .map(|i| ForkId(i as u32))
    }

    pub fn is_interior(&self, id: NodeId) -> bool {
        self.usage(id).is_interior()
    }

    /// The compression body a fork stands for.
    pub fn induced_body(&self, id: ForkId) -> CompressionBody {
        let fork = self.fork(id);
        let minus: GenusMultiset = fork.tines.iter().map(|&t| self.node(t).label).collect();
        CompressionBody::new(self.node(fork.grip).label, minus)
            .expect("validated complexes only hold valid bodies")
    }

    /// Splits boundary nodes into the two manifold-boundary classes:
    /// unglued A-tines and unglued B-grips land in the first set, unglued
    /// B-tines and unglued A-grips in the second.
    pub fn boundary_partition(&self) -> (BTreeSet<NodeId>, BTreeSet<NodeId>) {
        let mut lower = BTreeSet::new();
        let mut upper = BTreeSet::new();
        for id in self.node_ids() {
            let Some(side) = self.usage(id).single_side() else {
                continue;
            };
            let kind = self.node(id).kind;
            match (kind, side) {
                (NodeKind::Tine, Side::A) | (NodeKind::Grip, Side::B) => {
                    lower.insert(id);
                }
                (NodeKind::Tine, Side::B) | (NodeKind::Grip, Side::A) => {
                    upper.insert(id);
                }
            }
        }
        (lower, upper)
    }

    /// Multiset of grip labels, each grip node counted once.
    pub fn width(&self) -> WidthMultiset {
        self.node_ids()
            .filter(|&id| self.node(id).kind == NodeKind::Grip)
            .map(|id| self.node(id).label)
            .collect()
    }

    /// Euler characteristic of the glued-up manifold: the bodies' total,
    /// corrected by one surface term per interior node.
    pub fn complex_euler(&self) -> i64 {
        let bodies: i64 = self.fork_ids().map(|f| self.induced_body(f).euler()).sum();
        let interior: i64 = self
            .node_ids()
            .filter(|&id| self.is_interior(id))
            .map(|id| self.node(id).label.surface_euler())
            .sum();
        bodies - interior
    }

    /// The splitting seen at a grip: both incident bodies when the grip is
    /// interior, or the single incident body when it lies on the boundary.
    pub fn splitting_at_grip(&self, name: &str) -> Result<GripSplitting, ComplexError> {
        let id = self
            .node_by_name(name)
            .filter(|&id| self.node(id).kind == NodeKind::Grip)
            .ok_or_else(|| ComplexError::UnknownNode(name.to_string()))?;
        let u = self.usage(id);
        match (u.a_fork, u.b_fork) {
            (Some(a), Some(b)) => Ok(GripSplitting::Interior(
                self.induced_body(a),
                self.induced_body(b),
            )),
            (Some(f), None) | (None, Some(f)) => Ok(GripSplitting::Boundary(self.induced_body(f))),
            (None, None) => unreachable!("validated complexes have no orphan nodes"),
        }
    }
}

/// Result of [`ForkComplex::splitting_at_grip`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GripSplitting {
    /// Interior grip: the A-side and B-side bodies, in that order.
    Interior(CompressionBody, CompressionBody),
    /// Boundary grip: the single incident body.
    Boundary(CompressionBody),
}

/// A fork complex together with its exactness certificate and any free-form
/// user assertions about the underlying topology (facts such as "bounds a
/// ball" that cannot be decided from genus data and are recorded, never
/// decided).
#[derive(Debug, Clone)]
pub struct GeneralizedSplitting {
    complex: ForkComplex,
    assertions: BTreeMap<String, BTreeSet<String>>,
}

impl GeneralizedSplitting {
    /// Wraps a well-formed complex, requiring exactness.
    pub fn new(complex: ForkComplex) -> Result<Self, Infeasibility> {
        check_exact(&complex)?;
        Ok(GeneralizedSplitting {
            complex,
            assertions: BTreeMap::new(),
        })
    }

    pub fn with_assertions(
        complex: ForkComplex,
        assertions: BTreeMap<String, BTreeSet<String>>,
    ) -> Result<Self, Infeasibility> {
        let mut gs = Self::new(complex)?;
        gs.assertions = assertions;
        Ok(gs)
    }

    pub fn complex(&self) -> &ForkComplex {
        &self.complex
    }

    pub fn assertions(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.assertions
    }

    /// Records a user assertion on a named node.
    pub fn assert_node(&mut self, node: &str, claim: impl Into<String>) -> Result<(), ComplexError> {
        if self.complex.node_by_name(node).is_none() {
            return Err(ComplexError::UnknownNode(node.to_string()));
        }
        self.assertions
            .entry(node.to_string())
            .or_default()
            .insert(claim.into());
        Ok(())
    }

    pub fn node_assertions(&self, node: &str) -> impl Iterator<Item = &str> {
        self.assertions
            .get(node)
            .into_iter()
            .flat_map(|set| set.iter().map(String::as_str))
    }

    pub fn has_assertion(&self, node: &str, claim: &str) -> bool {
        self.assertions
            .get(node)
            .is_some_and(|set| set.contains(claim))
    }

    pub fn width(&self) -> WidthMultiset {
        self.complex.width()
    }

    /// The deterministic level assignment; splittings are exact by
    /// construction.
    pub fn levels(&self) -> LevelAssignment {
        check_exact(&self.complex).expect("splittings are exact by construction")
    }

    /// Drops assertions about nodes that no longer exist (used after moves).
    pub(crate) fn retained_assertions(
        &self,
        complex: &ForkComplex,
    ) -> BTreeMap<String, BTreeSet<String>> {
        self.assertions
            .iter()
            .filter(|(name, _)| complex.node_by_name(name).is_some())
            .map(|(name, set)| (name.clone(), set.clone()))
            .collect()
    }
}

impl PartialEq for GeneralizedSplitting {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex && self.assertions == other.assertions
    }
}

impl Eq for GeneralizedSplitting {}
