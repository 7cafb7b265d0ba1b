//! Deterministic generators for random complexes and move instances, shared
//! by the test suites and benchmarks. Everything is seeded; no global
//! randomness.


use crate::body::Genus;
use crate::complex::{
    ComplexBuilder, ForkComplex, GeneralizedSplitting, NodeKind, Side,
};
use crate::moves::{apply_move, Move};
use crate::search::{enumerate_moves, AssertionSet};

/// SplitMix64; small, portable, and good enough for test data.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.below(100) < percent
    }
}

#[derive(Debug, Clone)]
struct ProtoFork {
    side: Side,
    grip: usize,
    tines: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Proto {
    // (kind, label slot filled in at the end)
    nodes: Vec<(NodeKind, Genus)>,
    forks: Vec<ProtoFork>,
}

impl Proto {
    fn node(&mut self, kind: NodeKind) -> usize {
        self.nodes.push((kind, Genus(0)));
        self.nodes.len() - 1
    }

    /// Labels tines randomly and grips high enough for every incident body.
    fn assign_labels(&mut self, rng: &mut Rng) {
        for i in 0..self.nodes.len() {
            if self.nodes[i].0 == NodeKind::Tine {
                self.nodes[i].1 = Genus(rng.below(3) as u32);
            }
        }
        for i in 0..self.nodes.len() {
            if self.nodes[i].0 != NodeKind::Grip {
                continue;
            }
            let mut needed = 0u32;
            for fork in &self.forks {
                if fork.grip == i {
                    let sum: u32 = fork.tines.iter().map(|&t| self.nodes[t].1 .0).sum();
                    needed = needed.max(sum);
                }
            }
            self.nodes[i].1 = Genus(needed + rng.below(3) as u32);
        }
    }

    fn build(&self) -> ForkComplex {
        let mut b = ComplexBuilder::new();
        let ids: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &(kind, label))| {
                let prefix = match kind {
                    NodeKind::Grip => "s",
                    NodeKind::Tine => "t",
                };
                b.node(format!("{prefix}{i}"), kind, label)
            })
            .collect();
        for (i, fork) in self.forks.iter().enumerate() {
            b.fork(
                format!("f{i}"),
                fork.side,
                ids[fork.grip],
                fork.tines.iter().map(|&t| ids[t]).collect(),
            );
        }
        b.build().expect("generated complexes are well-formed")
    }
}

fn random_proto(rng: &mut Rng, max_forks: usize) -> Proto {
    let mut proto = Proto {
        nodes: Vec::new(),
        forks: Vec::new(),
    };
    let fork_count = 1 + rng.below(max_forks.max(1) as u64) as usize;
    let first_side = if rng.chance(50) { Side::A } else { Side::B };
    let grip = proto.node(NodeKind::Grip);
    let mut first = ProtoFork {
        side: first_side,
        grip,
        tines: Vec::new(),
    };
    for _ in 0..rng.below(3) {
        let t = proto.node(NodeKind::Tine);
        first.tines.push(t);
    }
    proto.forks.push(first);

    for _ in 1..fork_count {
        let anchor = rng.below(proto.forks.len() as u64) as usize;
        let side = proto.forks[anchor].side.opposite();
        let anchor_grip = proto.forks[anchor].grip;
        let grip_taken = proto
            .forks
            .iter()
            .any(|f| f.side == side && f.grip == anchor_grip);
        let mut fork = if !grip_taken && rng.chance(40) {
            // Share the grip with the anchor fork.
            ProtoFork {
                side,
                grip: anchor_grip,
                tines: Vec::new(),
            }
        } else {
            // Glue along one or two fresh tines.
            let mut tines = Vec::new();
            for _ in 0..=rng.below(2) {
                let t = proto.node(NodeKind::Tine);
                proto.forks[anchor].tines.push(t);
                tines.push(t);
            }
            let grip = proto.node(NodeKind::Grip);
            ProtoFork { side, grip, tines }
        };
        for _ in 0..rng.below(3) {
            let t = proto.node(NodeKind::Tine);
            fork.tines.push(t);
        }
        proto.forks.push(fork);
    }
    proto
}

/// A random well-formed complex whose fork adjacency is a tree; such
/// complexes are always exact.
pub fn random_complex(seed: u64, max_forks: usize) -> ForkComplex {
    let mut rng = Rng::new(seed);
    let mut proto = random_proto(&mut rng, max_forks);
    proto.assign_labels(&mut rng);
    proto.build()
}

/// A random well-formed complex with a few extra gluings merged in; the
/// constraint digraph may or may not stay acyclic.
pub fn random_complex_loopy(seed: u64, max_forks: usize) -> ForkComplex {
    let mut rng = Rng::new(seed);
    let mut proto = random_proto(&mut rng, max_forks);

    for _ in 0..2 {
        // Merge two single-use tines referenced from opposite sides.
        let mut open: Vec<(usize, usize, Side)> = Vec::new(); // (node, fork, side)
        for (fi, fork) in proto.forks.iter().enumerate() {
            for &t in &fork.tines {
                let uses = proto
                    .forks
                    .iter()
                    .flat_map(|f| f.tines.iter())
                    .filter(|&&x| x == t)
                    .count();
                if uses == 1 {
                    open.push((t, fi, fork.side));
                }
            }
        }
        if open.len() < 2 {
            break;
        }
        let pick = rng.below(open.len() as u64) as usize;
        let (keep, _, keep_side) = open[pick];
        let partners: Vec<_> = open
            .iter()
            .filter(|&&(n, _, s)| s != keep_side && n != keep)
            .collect();
        if partners.is_empty() {
            continue;
        }
        let &&(drop, drop_fork, _) = &partners[rng.below(partners.len() as u64) as usize];
        let fork = &mut proto.forks[drop_fork];
        for t in &mut fork.tines {
            if *t == drop {
                *t = keep;
            }
        }
    }
    proto.assign_labels(&mut rng);
    normalize_nodes(&mut proto);
    proto.build()
}

/// A random complex that definitely contains a two-fork constraint cycle:
/// an A-fork and B-fork pair sharing both their grip and a tine.
pub fn complex_with_injected_cycle(seed: u64, max_forks: usize) -> ForkComplex {
    let mut rng = Rng::new(seed);
    let mut proto = random_proto(&mut rng, max_forks);
    let anchor = rng.below(proto.forks.len() as u64) as usize;
    let anchor_side = proto.forks[anchor].side;

    // Bridge tine from the anchor into the new pair.
    let bridge = proto.node(NodeKind::Tine);
    proto.forks[anchor].tines.push(bridge);
    let shared_grip = proto.node(NodeKind::Grip);
    let shared_tine = proto.node(NodeKind::Tine);
    let pair_first = ProtoFork {
        side: anchor_side.opposite(),
        grip: shared_grip,
        tines: vec![shared_tine, bridge],
    };
    let pair_second = ProtoFork {
        side: anchor_side,
        grip: shared_grip,
        tines: vec![shared_tine],
    };
    proto.forks.push(pair_first);
    proto.forks.push(pair_second);
    proto.assign_labels(&mut rng);
    proto.build()
}

/// Merging tines can leave gaps in node usage; drop nodes nothing uses.
fn normalize_nodes(proto: &mut Proto) {
    let mut used = vec![false; proto.nodes.len()];
    for fork in &proto.forks {
        used[fork.grip] = true;
        for &t in &fork.tines {
            used[t] = true;
        }
    }
    let mut remap = vec![usize::MAX; proto.nodes.len()];
    let mut next = 0;
    for i in 0..proto.nodes.len() {
        if used[i] {
            remap[i] = next;
            next += 1;
        }
    }
    let old = std::mem::take(&mut proto.nodes);
    proto.nodes = old
        .into_iter()
        .enumerate()
        .filter(|(i, _)| used[*i])
        .map(|(_, n)| n)
        .collect();
    for fork in &mut proto.forks {
        fork.grip = remap[fork.grip];
        for t in &mut fork.tines {
            *t = remap[*t];
        }
    }
}

/// A random exact splitting (tree-shaped complex).
pub fn random_splitting(seed: u64, max_forks: usize) -> GeneralizedSplitting {
    GeneralizedSplitting::new(random_complex(seed, max_forks))
        .expect("tree complexes are always exact")
}

/// Grafts a capped-ball appendage onto a random fork: a sphere tine leading
/// to a handlebody-plus-collar pair. The pair is a valid ball side for
/// sphere-tine elimination whatever its grip label.
fn graft_ball(rng: &mut Rng, proto: &mut Proto) {
    let anchor = rng.below(proto.forks.len() as u64) as usize;
    let sphere = proto.node(NodeKind::Tine);
    proto.forks[anchor].tines.push(sphere);
    let grip = proto.node(NodeKind::Grip);
    let anchor_side = proto.forks[anchor].side;
    proto.forks.push(ProtoFork {
        side: anchor_side.opposite(),
        grip,
        tines: vec![sphere],
    });
    proto.forks.push(ProtoFork {
        side: anchor_side,
        grip,
        tines: Vec::new(),
    });
}

/// A random exact splitting guaranteed to contain a sphere tine with a
/// qualifying ball side (the sphere label is forced to zero after label
/// assignment, which `assign_labels` already produces for fresh tines only
/// sometimes, so it is pinned here).
pub fn random_splitting_with_ball(seed: u64, max_forks: usize) -> (GeneralizedSplitting, String) {
    let mut rng = Rng::new(seed);
    let mut proto = random_proto(&mut rng, max_forks);
    graft_ball(&mut rng, &mut proto);
    proto.assign_labels(&mut rng);
    let sphere_index = proto
        .forks
        .last()
        .map(|_| proto.forks[proto.forks.len() - 2].tines[0])
        .unwrap();
    proto.nodes[sphere_index].1 = Genus(0);
    let complex = proto.build();
    let name = complex.nodes()[sphere_index].name.clone();
    let gs = GeneralizedSplitting::new(complex).expect("grafted trees stay exact");
    (gs, name)
}

/// A random splitting together with a valid move on it. The splitting
/// carries whatever user assertions the move needs. Returns `None` when the
/// seeded attempt fails; callers iterate seeds.
pub fn random_move_instance(seed: u64, max_forks: usize) -> Option<(GeneralizedSplitting, Move)> {
    let mut rng = Rng::new(seed ^ 0x5eed);
    let mut gs = if seed.is_multiple_of(4) {
        random_splitting_with_ball(seed, max_forks.saturating_sub(2).max(1)).0
    } else {
        random_splitting(seed, max_forks)
    };

    // Grant the topological claims the structural moves would need.
    let names: Vec<(String, NodeKind, Genus)> = gs
        .complex()
        .nodes()
        .iter()
        .map(|n| (n.name.clone(), n.kind, n.label))
        .collect();
    for (name, kind, label) in &names {
        match kind {
            NodeKind::Grip => {
                gs.assert_node(name, "stabilized").unwrap();
                let id = gs.complex().node_by_name(name).unwrap();
                if gs.complex().is_interior(id) && label.0 >= 2 {
                    gs.assert_node(name, "weakly-reducible NN").unwrap();
                    let lower = label.0 - 1;
                    gs.assert_node(name, format!("weakly-reducible NU {} {}", lower / 2, lower - lower / 2))
                        .unwrap();
                    gs.assert_node(name, format!("weakly-reducible NSsep {} {}", lower - 1, 1))
                        .unwrap();
                }
            }
            NodeKind::Tine => {
                if label.0 == 0 {
                    gs.assert_node(name, "bounds a ball").unwrap();
                }
            }
        }
    }

    let assertions = AssertionSet::from_splitting(&gs);
    let moves = enumerate_moves(&gs, &assertions);
    let usable: Vec<&crate::search::EnumeratedMove> =
        moves.iter().filter(|m| m.satisfied).collect();
    if usable.is_empty() {
        return None;
    }
    let start = rng.below(usable.len() as u64) as usize;
    for offset in 0..usable.len() {
        let candidate = usable[(start + offset) % usable.len()];
        if apply_move(&gs, &candidate.mv).is_ok() {
            return Some((gs, candidate.mv.clone()));
        }
    }
    None
}

/// Collects `count` valid move instances by scanning seeds from `seed`.
pub fn move_instances(
    seed: u64,
    max_forks: usize,
    count: usize,
) -> Vec<(GeneralizedSplitting, Move)> {
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        if let Some(instance) = random_move_instance(s, max_forks) {
            out.push(instance);
        }
        s = s.wrapping_add(1);
    }
    out
}

/// Random assertion grants for search-equivalence tests: enables a
/// deterministic subset of the structurally available claims.
pub fn random_assertions(seed: u64, gs: &GeneralizedSplitting) -> AssertionSet {
    let mut rng = Rng::new(seed ^ 0x00a5_5e47);
    let mut set = AssertionSet::from_splitting(gs);
    for node in gs.complex().nodes() {
        match node.kind {
            NodeKind::Grip => {
                if rng.chance(30) {
                    set.grant(&node.name, "stabilized");
                }
                let id = gs.complex().node_by_name(&node.name).unwrap();
                if gs.complex().is_interior(id) && node.label.0 >= 2 && rng.chance(40) {
                    set.grant(&node.name, "weakly-reducible NN");
                    if rng.chance(50) {
                        let lower = node.label.0 - 1;
                        set.grant(
                            &node.name,
                            format!("weakly-reducible NU {} {}", lower / 2, lower - lower / 2),
                        );

                    }
                }
            }
            NodeKind::Tine => {
                if node.label.0 == 0 && rng.chance(50) {
                    set.grant(&node.name, "bounds a ball");
                }
            }
        }
    }
    set
}
