//! Genus-level algebra of compression bodies.
//!
//! A compression body is described here purely by the genus of its plus
//! boundary together with the multiset of genera of its minus-boundary
//! components. That collapse is deliberate: every rewrite implemented in
//! [`crate::moves`] only ever needs genus arithmetic, and the flat
//! description stays canonical and hashable.
//!
//! Validity is `sum(minus_genera) <= plus_genus`. Sketch: the body is built
//! from (plus surface) x [0,1] by 2-handle surgeries, and a single surgery
//! either lowers the genus of one component by one (non-separating curve) or
//! splits one component of genus `a+b` into components of genera `a` and `b`
//! (separating curve). Either way the total minus genus never increases, so
//! the inequality is necessary; conversely any target multiset with
//! `sum <= plus` is reached by splitting off each component and compressing
//! the remainder to a capped sphere, so it is sufficient.

use std::fmt;

use thiserror::Error;

/// Genus of a closed orientable surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Genus(pub u32);

impl Genus {
    /// Euler characteristic `2 - 2g` of the closed surface.
    pub fn surface_euler(self) -> i64 {
        2 - 2 * i64::from(self.0)
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for Genus {
    fn from(value: u32) -> Self {
        Genus(value)
    }
}

/// Multiset of genera, kept sorted ascending so that equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GenusMultiset(Vec<Genus>);

impl GenusMultiset {
    pub fn new(mut entries: Vec<Genus>) -> Self {
        entries.sort_unstable();
        GenusMultiset(entries)
    }

    pub fn empty() -> Self {
        GenusMultiset(Vec::new())
    }

    pub fn iter(&self) -> impl Iterator<Item = Genus> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|g| u64::from(g.0)).sum()
    }

    pub fn contains(&self, g: Genus) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn insert(&mut self, g: Genus) {
        let at = self.0.partition_point(|x| *x <= g);
        self.0.insert(at, g);
    }

    /// Removes one occurrence of `g`; false if absent.
    pub fn remove_one(&mut self, g: Genus) -> bool {
        match self.0.binary_search(&g) {
            Ok(at) => {
                self.0.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    pub fn as_slice(&self) -> &[Genus] {
        &self.0
    }
}

impl FromIterator<Genus> for GenusMultiset {
    fn from_iter<T: IntoIterator<Item = Genus>>(iter: T) -> Self {
        GenusMultiset::new(iter.into_iter().collect())
    }
}

impl fmt::Display for GenusMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BodyError {
    #[error("minus-boundary genera sum to {minus_sum}, exceeding plus genus {plus}")]
    GenusOverflow { plus: Genus, minus_sum: u64 },
    #[error("a genus-0 surface carries no essential curve to surger along")]
    NoEssentialCurve,
    #[error("separating split {a}+{b} does not add up to the surface genus {genus}")]
    BadSplit { a: Genus, b: Genus, genus: Genus },
    #[error("no component of genus {0} in the multiset")]
    MissingComponent(Genus),
}

/// Classification flags of a compression body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BodyClass {
    /// Minus boundary empty.
    pub handlebody: bool,
    /// Product over its (single) minus component.
    pub trivial: bool,
    /// Minus boundary contains a sphere.
    pub reducible: bool,
}

/// Boundary description of a compression body: the plus-boundary genus and
/// the genera of the minus-boundary components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressionBody {
    plus_genus: Genus,
    minus_genera: GenusMultiset,
}

impl CompressionBody {
    /// Validates the boundary data; the only rejection is a minus-genus total
    /// larger than the plus genus.
    pub fn new(plus_genus: Genus, minus_genera: GenusMultiset) -> Result<Self, BodyError> {
        let minus_sum = minus_genera.sum();
        if minus_sum > u64::from(plus_genus.0) {
            return Err(BodyError::GenusOverflow {
                plus: plus_genus,
                minus_sum,
            });
        }
        Ok(CompressionBody {
            plus_genus,
            minus_genera,
        })
    }

    pub fn plus_genus(&self) -> Genus {
        self.plus_genus
    }

    pub fn minus_genera(&self) -> &GenusMultiset {
        &self.minus_genera
    }

    pub fn is_handlebody(&self) -> bool {
        self.minus_genera.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.minus_genera.len() == 1 && self.minus_genera.as_slice()[0] == self.plus_genus
    }

    pub fn is_reducible(&self) -> bool {
        self.minus_genera.contains(Genus(0))
    }

    pub fn classify(&self) -> BodyClass {
        BodyClass {
            handlebody: self.is_handlebody(),
            trivial: self.is_trivial(),
            reducible: self.is_reducible(),
        }
    }

    /// Number of disks in a minimal complete meridian system.
    ///
    /// Cutting a handlebody along a minimal system leaves a ball, so the
    /// count is the full plus genus. Otherwise the cut leaves one product
    /// piece per minus component: one disk per surplus plus-genus plus one
    /// disk joining each extra component.
    pub fn minimal_meridian_count(&self) -> u32 {
        if self.is_handlebody() {
            self.plus_genus.0
        } else {
            let surplus = u64::from(self.plus_genus.0) - self.minus_genera.sum();
            let joins = self.minus_genera.len() as u64 - 1;
            u32::try_from(surplus + joins).expect("meridian count fits in u32")
        }
    }

    /// Euler characteristic of the body: `(1 - g+) + sum(1 - g_i)`, which is
    /// half the Euler characteristic of the full boundary.
    pub fn euler(&self) -> i64 {
        let plus = 1 - i64::from(self.plus_genus.0);
        let minus: i64 = self
            .minus_genera
            .iter()
            .map(|g| 1 - i64::from(g.0))
            .sum();
        plus + minus
    }
}

impl fmt::Display for CompressionBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.plus_genus, self.minus_genera)
    }
}

/// The two kinds of curve a surgery can run along. A separating split is an
/// unordered pair of genera summing to the surface genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurgeryKind {
    NonSeparating,
    Separating(Genus, Genus),
}

/// Surgers a closed genus-`g` surface along a single curve, returning the
/// genera of the resulting components.
pub fn surger_genus(g: Genus, kind: SurgeryKind) -> Result<GenusMultiset, BodyError> {
    match kind {
        SurgeryKind::NonSeparating => {
            if g.0 == 0 {
                Err(BodyError::NoEssentialCurve)
            } else {
                Ok(GenusMultiset::new(vec![Genus(g.0 - 1)]))
            }
        }
        SurgeryKind::Separating(a, b) => {
            if u64::from(a.0) + u64::from(b.0) != u64::from(g.0) {
                Err(BodyError::BadSplit { a, b, genus: g })
            } else {
                Ok(GenusMultiset::new(vec![a, b]))
            }
        }
    }
}

/// Attachment data for a 1-handle (tube) on a disjoint union of surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TubeAttachment {
    /// Both feet on the same component.
    SelfTube(Genus),
    /// Feet on two distinct components (the entries must be distinct
    /// occurrences, not distinct values).
    JoinTube(Genus, Genus),
}

/// Attaches a tube to a multiset of surface components. A self tube raises
/// one component's genus by one; a join tube merges two components into one
/// of the summed genus.
pub fn tube_genera(
    components: &GenusMultiset,
    attachment: TubeAttachment,
) -> Result<GenusMultiset, BodyError> {
    let mut out = components.clone();
    match attachment {
        TubeAttachment::SelfTube(g) => {
            if !out.remove_one(g) {
                return Err(BodyError::MissingComponent(g));
            }
            out.insert(Genus(g.0 + 1));
        }
        TubeAttachment::JoinTube(a, b) => {
            if !out.remove_one(a) {
                return Err(BodyError::MissingComponent(a));
            }
            if !out.remove_one(b) {
                return Err(BodyError::MissingComponent(b));
            }
            out.insert(Genus(a.0 + b.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(values: &[u32]) -> GenusMultiset {
        values.iter().map(|&v| Genus(v)).collect()
    }

    fn body(plus: u32, minus: &[u32]) -> CompressionBody {
        CompressionBody::new(Genus(plus), ms(minus)).unwrap()
    }

    #[test]
    fn validity() {
        assert!(CompressionBody::new(Genus(0), ms(&[])).is_ok());
        assert!(CompressionBody::new(Genus(2), ms(&[1, 1])).is_ok());
        assert_eq!(
            CompressionBody::new(Genus(1), ms(&[1, 1])),
            Err(BodyError::GenusOverflow {
                plus: Genus(1),
                minus_sum: 2
            })
        );
    }

    #[test]
    fn classification() {
        let c = body(3, &[]).classify();
        assert!(c.handlebody && !c.trivial && !c.reducible);
        assert!(body(2, &[2]).classify().trivial);
        assert!(body(2, &[0]).classify().reducible);
        // A capped-off ball is a handlebody but not a product.
        assert!(!body(0, &[]).is_trivial());
    }

    #[test]
    fn meridian_counts() {
        assert_eq!(body(3, &[]).minimal_meridian_count(), 3);
        assert_eq!(body(2, &[2]).minimal_meridian_count(), 0);
        assert_eq!(body(2, &[1, 1]).minimal_meridian_count(), 1);
        assert_eq!(body(0, &[]).minimal_meridian_count(), 0);
    }

    #[test]
    fn meridian_count_zero_means_trivial_or_ball() {
        for plus in 0..6u32 {
            for minus in [&[][..], &[0][..], &[1][..], &[plus][..], &[1, 1][..]] {
                let Ok(b) = CompressionBody::new(Genus(plus), ms(minus)) else {
                    continue;
                };
                let zero = b.minimal_meridian_count() == 0;
                let trivial_or_ball = b.is_trivial() || (b.is_handlebody() && plus == 0);
                assert_eq!(zero, trivial_or_ball, "body {b}");
            }
        }
    }

    #[test]
    fn euler_values() {
        assert_eq!(body(3, &[]).euler(), -2);
        assert_eq!(body(2, &[2]).euler(), -2);
        assert_eq!(body(2, &[1]).euler(), -1);
        // Equals half the boundary Euler characteristic, exactly.
        let b = body(4, &[1, 2]);
        let boundary: i64 = b.plus_genus().surface_euler()
            + b.minus_genera().iter().map(Genus::surface_euler).sum::<i64>();
        assert_eq!(b.euler() * 2, boundary);
    }

    #[test]
    fn surgery() {
        assert_eq!(
            surger_genus(Genus(3), SurgeryKind::NonSeparating).unwrap(),
            ms(&[2])
        );
        assert_eq!(
            surger_genus(Genus(2), SurgeryKind::Separating(Genus(1), Genus(1))).unwrap(),
            ms(&[1, 1])
        );
        assert_eq!(
            surger_genus(Genus(1), SurgeryKind::NonSeparating).unwrap(),
            ms(&[0])
        );
        assert_eq!(
            surger_genus(Genus(0), SurgeryKind::NonSeparating),
            Err(BodyError::NoEssentialCurve)
        );
        assert_eq!(
            surger_genus(Genus(3), SurgeryKind::Separating(Genus(1), Genus(1))),
            Err(BodyError::BadSplit {
                a: Genus(1),
                b: Genus(1),
                genus: Genus(3)
            })
        );
    }

    #[test]
    fn tubing() {
        assert_eq!(
            tube_genera(&ms(&[1, 1]), TubeAttachment::JoinTube(Genus(1), Genus(1))).unwrap(),
            ms(&[2])
        );
        assert_eq!(
            tube_genera(&ms(&[2]), TubeAttachment::SelfTube(Genus(2))).unwrap(),
            ms(&[3])
        );
        assert_eq!(
            tube_genera(&ms(&[0, 0]), TubeAttachment::JoinTube(Genus(0), Genus(0))).unwrap(),
            ms(&[0])
        );
        assert_eq!(
            tube_genera(&ms(&[1]), TubeAttachment::SelfTube(Genus(2))),
            Err(BodyError::MissingComponent(Genus(2)))
        );
        assert_eq!(
            tube_genera(&ms(&[1]), TubeAttachment::JoinTube(Genus(1), Genus(1))),
            Err(BodyError::MissingComponent(Genus(1)))
        );
    }

    #[test]
    fn surger_then_tube_is_identity() {
        for g in 1..8u32 {
            let cut = surger_genus(Genus(g), SurgeryKind::NonSeparating).unwrap();
            assert_eq!(
                tube_genera(&cut, TubeAttachment::SelfTube(Genus(g - 1))).unwrap(),
                ms(&[g])
            );
            for a in 0..=g {
                let b = g - a;
                let cut =
                    surger_genus(Genus(g), SurgeryKind::Separating(Genus(a), Genus(b))).unwrap();
                assert_eq!(
                    tube_genera(&cut, TubeAttachment::JoinTube(Genus(a), Genus(b))).unwrap(),
                    ms(&[g])
                );
            }
        }
    }

    #[test]
    fn surgery_raises_euler_by_two() {
        for g in 1..8u32 {
            let before = Genus(g).surface_euler();
            for kind in [
                SurgeryKind::NonSeparating,
                SurgeryKind::Separating(Genus(0), Genus(g)),
                SurgeryKind::Separating(Genus(g / 2), Genus(g - g / 2)),
            ] {
                let after: i64 = surger_genus(Genus(g), kind)
                    .unwrap()
                    .iter()
                    .map(Genus::surface_euler)
                    .sum();
                assert_eq!(after, before + 2);
            }
        }
    }
}
