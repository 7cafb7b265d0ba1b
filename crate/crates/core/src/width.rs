//! Width multisets under the non-increasing lexicographic total order.

use std::cmp::Ordering;
use std::fmt;

use crate::body::Genus;

/// A finite multiset of genera, compared by arranging both sides in
/// non-increasing order and comparing lexicographically; when one arranged
/// tuple is a proper prefix of the other, the shorter one is smaller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WidthMultiset(Vec<Genus>);

impl WidthMultiset {
    pub fn new(mut entries: Vec<Genus>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        WidthMultiset(entries)
    }

    pub fn empty() -> Self {
        WidthMultiset(Vec::new())
    }

    /// Entries in non-increasing order.
    pub fn entries(&self) -> &[Genus] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Removes every entry of `other` (with multiplicity); `None` if some
    /// entry is missing.
    pub fn checked_remove(&self, other: &WidthMultiset) -> Option<WidthMultiset> {
        let mut rest = self.0.clone();
        for g in other.entries() {
            let at = rest.iter().position(|x| x == g)?;
            rest.remove(at);
        }
        Some(WidthMultiset::new(rest))
    }

    /// Multiset union.
    pub fn merged(&self, other: &WidthMultiset) -> WidthMultiset {
        let mut all = self.0.clone();
        all.extend_from_slice(&other.0);
        WidthMultiset::new(all)
    }
}

impl FromIterator<Genus> for WidthMultiset {
    fn from_iter<T: IntoIterator<Item = Genus>>(iter: T) -> Self {
        WidthMultiset::new(iter.into_iter().collect())
    }
}

impl From<&[u32]> for WidthMultiset {
    fn from(values: &[u32]) -> Self {
        values.iter().map(|&v| Genus(v)).collect()
    }
}

impl Ord for WidthMultiset {
    fn cmp(&self, other: &Self) -> Ordering {
        // Entries are stored non-increasing, so slice comparison is exactly
        // the order we want: entrywise, with a proper prefix ranking smaller.
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for WidthMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WidthMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Three-way comparison in the width order.
pub fn compare_width(a: &WidthMultiset, b: &WidthMultiset) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(values: &[u32]) -> WidthMultiset {
        WidthMultiset::from(values)
    }

    #[test]
    fn order_fixtures() {
        assert_eq!(
            compare_width(&w(&[5, 3, 2, 2, 2, 1]), &w(&[5, 4, 1, 1])),
            Ordering::Less
        );
        assert_eq!(
            compare_width(&w(&[3, 1, 0, 0]), &w(&[3, 1, 0, 0, 0])),
            Ordering::Less
        );
        assert_eq!(compare_width(&w(&[]), &w(&[0])), Ordering::Less);
        assert_eq!(compare_width(&w(&[2, 2]), &w(&[2, 2])), Ordering::Equal);
        assert_eq!(compare_width(&w(&[3]), &w(&[2, 2])), Ordering::Greater);
    }

    #[test]
    fn input_order_is_irrelevant() {
        assert_eq!(w(&[1, 3, 2]), w(&[3, 2, 1]));
        assert_eq!(w(&[1, 3, 2]).entries(), &[Genus(3), Genus(2), Genus(1)]);
    }

    #[test]
    fn delta_arithmetic() {
        let full = w(&[3, 2, 2]);
        assert_eq!(full.checked_remove(&w(&[2])), Some(w(&[3, 2])));
        assert_eq!(full.checked_remove(&w(&[4])), None);
        assert_eq!(w(&[3]).merged(&w(&[2, 2])), w(&[3, 2, 2]));
    }

    #[test]
    fn display() {
        assert_eq!(w(&[2, 2]).to_string(), "2,2");
        assert_eq!(w(&[]).to_string(), "-");
    }
}
