//! Canonical forms of fork complexes.
//!
//! Two complexes have equal canonical forms exactly when some relabeling of
//! nodes and forks carries one onto the other. The form is the
//! lexicographically minimal token encoding over all admissible labelings,
//! found by iterative color refinement with backtracking over the remaining
//! ties. The complexes handled here are small (tens of forks), so the
//! backtracking stays shallow.

use std::collections::BTreeMap;

use crate::complex::{ForkComplex, ForkId, NodeId, NodeKind, Side};

/// Opaque canonical key; equality is isomorphism, ordering is arbitrary but
/// total and stable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u32>);

/// The labeling that realizes the canonical form.
#[derive(Debug, Clone)]
pub struct CanonicalOrder {
    /// Forks in canonical order.
    pub forks: Vec<ForkId>,
    /// Nodes in canonical numbering order.
    pub nodes: Vec<NodeId>,
}

impl ForkComplex {
    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonicalize().0
    }

    pub fn canonical_order(&self) -> CanonicalOrder {
        self.canonicalize().1
    }

    fn canonicalize(&self) -> (CanonicalForm, CanonicalOrder) {
        let colors = refine_colors(self);
        let mut starts: Vec<ForkId> = self.fork_ids().collect();
        let min_color = starts.iter().map(|&f| colors.fork[f.0 as usize]).min().unwrap();
        starts.retain(|&f| colors.fork[f.0 as usize] == min_color);

        let mut best: Option<(Vec<u32>, Vec<ForkId>, Vec<NodeId>)> = None;
        for start in starts {
            let state = EncodeState::new(self, &colors, start);
            state.run(&mut best);
        }
        let (tokens, forks, nodes) = best.expect("complexes have at least one fork");
        (CanonicalForm(tokens), CanonicalOrder { forks, nodes })
    }
}

struct Colors {
    node: Vec<u32>,
    fork: Vec<u32>,
}

/// Weisfeiler–Leman style refinement over the bipartite incidence structure.
fn refine_colors(complex: &ForkComplex) -> Colors {
    let mut node: Vec<u32> = complex
        .node_ids()
        .map(|id| {
            let n = complex.node(id);
            let class = match (complex.usage(id).a_fork, complex.usage(id).b_fork) {
                (Some(_), Some(_)) => 2u32,
                (Some(_), None) => 0,
                (None, Some(_)) => 1,
                (None, None) => unreachable!("orphan node in validated complex"),
            };
            dict_key(&[kind_token(n.kind), n.label.0, class])
        })
        .collect();
    let mut fork: Vec<u32> = complex
        .fork_ids()
        .map(|id| {
            let f = complex.fork(id);
            let mut sig = vec![side_token(f.side), complex.node(f.grip).label.0];
            let mut tines: Vec<u32> = f.tines.iter().map(|&t| complex.node(t).label.0).collect();
            tines.sort_unstable();
            sig.extend(tines);
            dict_key(&sig)
        })
        .collect();
    compact(&mut node);
    compact(&mut fork);

    loop {
        let mut node_sigs: Vec<Vec<u32>> = Vec::with_capacity(node.len());
        for id in complex.node_ids() {
            let u = complex.usage(id);
            let mut refs: Vec<u32> = [u.a_fork, u.b_fork]
                .into_iter()
                .flatten()
                .map(|f| fork[f.0 as usize])
                .collect();
            refs.sort_unstable();
            let mut sig = vec![node[id.0 as usize]];
            sig.extend(refs);
            node_sigs.push(sig);
        }
        let mut fork_sigs: Vec<Vec<u32>> = Vec::with_capacity(fork.len());
        for id in complex.fork_ids() {
            let f = complex.fork(id);
            let mut tines: Vec<u32> = f.tines.iter().map(|&t| node[t.0 as usize]).collect();
            tines.sort_unstable();
            let mut sig = vec![fork[id.0 as usize], node[f.grip.0 as usize]];
            sig.extend(tines);
            fork_sigs.push(sig);
        }
        let new_node = recolor(&node_sigs);
        let new_fork = recolor(&fork_sigs);
        let stable = distinct(&new_node) == distinct(&node) && distinct(&new_fork) == distinct(&fork);
        node = new_node;
        fork = new_fork;
        if stable {
            return Colors { node, fork };
        }
    }
}

fn kind_token(kind: NodeKind) -> u32 {
    match kind {
        NodeKind::Tine => 0,
        NodeKind::Grip => 1,
    }
}

fn side_token(side: Side) -> u32 {
    match side {
        Side::A => 0,
        Side::B => 1,
    }
}

/// Hashes a signature into a u32 deterministically (FNV-1a folded); used only
/// for the initial coloring, which `compact` then renumbers by value.
fn dict_key(sig: &[u32]) -> u32 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &x in sig {
        for byte in x.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    (h ^ (h >> 32)) as u32
}

fn recolor(sigs: &[Vec<u32>]) -> Vec<u32> {
    let mut dict: BTreeMap<&[u32], u32> = BTreeMap::new();
    for sig in sigs {
        let next = dict.len() as u32;
        dict.entry(sig.as_slice()).or_insert(next);
    }
    // Renumber in sorted signature order so colors depend only on values.
    let mut ordered: Vec<&[u32]> = dict.keys().copied().collect();
    ordered.sort_unstable();
    let ranks: BTreeMap<&[u32], u32> = ordered
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i as u32))
        .collect();
    sigs.iter().map(|s| ranks[s.as_slice()]).collect()
}

fn compact(colors: &mut [u32]) {
    let mut values: Vec<u32> = colors.to_vec();
    values.sort_unstable();
    values.dedup();
    for c in colors.iter_mut() {
        *c = values.binary_search(c).unwrap() as u32;
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut values: Vec<u32> = colors.to_vec();
    values.sort_unstable();
    values.dedup();
    values.len()
}

#[derive(Clone)]
struct EncodeState<'a> {
    complex: &'a ForkComplex,
    colors: &'a Colors,
    tokens: Vec<u32>,
    fork_order: Vec<ForkId>,
    fork_index: Vec<Option<u32>>,
    node_order: Vec<NodeId>,
    node_index: Vec<Option<u32>>,
    queue: Vec<ForkId>,
    next_in_queue: usize,
}

impl<'a> EncodeState<'a> {
    fn new(complex: &'a ForkComplex, colors: &'a Colors, start: ForkId) -> Self {
        let mut state = EncodeState {
            complex,
            colors,
            tokens: Vec::new(),
            fork_order: Vec::new(),
            fork_index: vec![None; complex.forks().len()],
            node_order: Vec::new(),
            node_index: vec![None; complex.nodes().len()],
            queue: Vec::new(),
            next_in_queue: 0,
        };
        state.enqueue(start);
        state
    }

    fn enqueue(&mut self, fork: ForkId) {
        if self.fork_index[fork.0 as usize].is_none() {
            self.fork_index[fork.0 as usize] = Some(self.fork_order.len() as u32);
            self.fork_order.push(fork);
            self.queue.push(fork);
        }
    }

    fn assign_node(&mut self, node: NodeId) -> u32 {
        match self.node_index[node.0 as usize] {
            Some(idx) => idx,
            None => {
                let idx = self.node_order.len() as u32;
                self.node_index[node.0 as usize] = Some(idx);
                self.node_order.push(node);
                // Discover the partner fork across the gluing.
                let u = self.complex.usage(node);
                for fork in [u.a_fork, u.b_fork].into_iter().flatten() {
                    self.enqueue(fork);
                }
                idx
            }
        }
    }

    /// Expands the next queued fork, branching over tie orders among its
    /// not-yet-numbered tines; leaves the minimal completed encoding in
    /// `best`.
    fn run(mut self, best: &mut Option<(Vec<u32>, Vec<ForkId>, Vec<NodeId>)>) {
        loop {
            if let Some((best_tokens, _, _)) = best {
                if self.tokens.as_slice() > &best_tokens[..self.tokens.len().min(best_tokens.len())]
                {
                    return; // already worse than the incumbent
                }
            }
            let Some(&fork_id) = self.queue.get(self.next_in_queue) else {
                break;
            };
            self.next_in_queue += 1;
            let fork = self.complex.fork(fork_id);
            self.tokens.push(side_token(fork.side));
            let grip_idx = self.assign_node(fork.grip);
            self.tokens.push(grip_idx);
            self.tokens.push(self.complex.node(fork.grip).label.0);
            self.tokens.push(fork.tines.len() as u32);

            // Already-numbered tines first in index order; fresh tines in
            // (label, color) order. Equal fresh tines are真 ties: branch.
            let mut assigned: Vec<(u32, NodeId)> = Vec::new();
            let mut fresh: Vec<NodeId> = Vec::new();
            for &t in &fork.tines {
                match self.node_index[t.0 as usize] {
                    Some(idx) => assigned.push((idx, t)),
                    None => fresh.push(t),
                }
            }
            assigned.sort_unstable();
            fresh.sort_unstable_by_key(|&t| {
                (
                    self.complex.node(t).label.0,
                    self.colors.node[t.0 as usize],
                    t,
                )
            });
            for (idx, t) in assigned {
                self.tokens.push(idx);
                self.tokens.push(self.complex.node(t).label.0);
            }
            let groups = tie_groups(&fresh, |&t| {
                (
                    self.complex.node(t).label.0,
                    self.colors.node[t.0 as usize],
                )
            });
            if groups.iter().all(|g| g.len() == 1) {
                for t in fresh {
                    let idx = self.assign_node(t);
                    self.tokens.push(idx);
                    self.tokens.push(self.complex.node(t).label.0);
                }
            } else {
                for ordering in orderings(&groups) {
                    let mut branch = self.clone();
                    for t in ordering {
                        let idx = branch.assign_node(t);
                        branch.tokens.push(idx);
                        branch.tokens.push(branch.complex.node(t).label.0);
                    }
                    branch.run(best);
                }
                return;
            }
        }
        debug_assert_eq!(self.fork_order.len(), self.complex.forks().len());
        let candidate = (self.tokens, self.fork_order, self.node_order);
        let better = match best {
            None => true,
            Some((tokens, _, _)) => candidate.0 < *tokens,
        };
        if better {
            *best = Some(candidate);
        }
    }
}

fn tie_groups<K: Ord>(items: &[NodeId], key: impl Fn(&NodeId) -> K) -> Vec<Vec<NodeId>> {
    let mut groups: Vec<Vec<NodeId>> = Vec::new();
    for &item in items {
        match groups.last_mut() {
            Some(group) if key(&group[0]) == key(&item) => group.push(item),
            _ => groups.push(vec![item]),
        }
    }
    groups
}

/// All interleavings that permute within tie groups but keep group order.
fn orderings(groups: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    let mut result: Vec<Vec<NodeId>> = vec![Vec::new()];
    for group in groups {
        let perms = permutations(group);
        result = result
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |perm| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(perm);
                    v
                })
            })
            .collect();
    }
    result
}

fn permutations(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
