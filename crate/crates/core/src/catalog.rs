//! Named constructors for the reference splittings used as regression
//! fixtures throughout the crate.
//!
//! The entries cover both splittings of the 3-ball, the two product
//! splittings of a closed surface, the trivial splitting of a surface times
//! a circle, and the untelescoped splittings of the three-torus and of a
//! genus-two surface times a circle.

use std::fmt;

use thiserror::Error;

use crate::body::Genus;
use crate::complex::{ComplexBuilder, GeneralizedSplitting, NodeKind, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogKey {
    /// The 3-ball as a single handlebody fork.
    Ball1,
    /// The 3-ball as handlebody plus a capped product collar.
    Ball2,
    /// Surface x interval split along a parallel copy of the surface.
    ProductTypeI(Genus),
    /// Surface x interval split along the double of the surface.
    ProductTypeII(Genus),
    /// Trivial splitting of (genus-g surface) x circle.
    CircleBundleTrivial(Genus),
    /// The three-torus after one weak reduction: two genus-2 splittings
    /// sharing two torus tines.
    T3Untelescoped,
    /// First untelescoping of F_2 x S^1: two genus-4 splittings sharing two
    /// genus-2 tines.
    F2S1UntelescopedA,
    /// Second untelescoping of F_2 x S^1: four genus-2 splittings in a
    /// chain with torus tine groups of sizes 2, 1, 2.
    F2S1UntelescopedB,
    /// The rewired second untelescoping: four genus-2 splittings arranged
    /// as a tree over five torus tines.
    F2S1UntelescopedC,
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKey::Ball1 => write!(f, "ball1"),
            CatalogKey::Ball2 => write!(f, "ball2"),
            CatalogKey::ProductTypeI(g) => write!(f, "product-type-i(g={g})"),
            CatalogKey::ProductTypeII(g) => write!(f, "product-type-ii(g={g})"),
            CatalogKey::CircleBundleTrivial(g) => write!(f, "circle-bundle(g={g})"),
            CatalogKey::T3Untelescoped => write!(f, "t3-untelescoped"),
            CatalogKey::F2S1UntelescopedA => write!(f, "f2s1-untelescoped-a"),
            CatalogKey::F2S1UntelescopedB => write!(f, "f2s1-untelescoped-b"),
            CatalogKey::F2S1UntelescopedC => write!(f, "f2s1-untelescoped-c"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("bad parameter for `{key}`: {reason}")]
    BadParameter { key: String, reason: String },
}

pub fn build_catalog(key: CatalogKey) -> Result<GeneralizedSplitting, CatalogError> {
    let mut b = ComplexBuilder::new();
    match key {
        CatalogKey::Ball1 => {
            let m = b.node("m", NodeKind::Grip, Genus(0));
            b.fork("f1", Side::A, m, vec![]);
        }
        CatalogKey::Ball2 => {
            let g = b.node("G", NodeKind::Grip, Genus(0));
            let m = b.node("m", NodeKind::Tine, Genus(0));
            b.fork("f1", Side::A, g, vec![]);
            b.fork("f2", Side::B, g, vec![m]);
        }
        CatalogKey::ProductTypeI(g) => {
            let a = b.node("a", NodeKind::Tine, g);
            let grip = b.node("G", NodeKind::Grip, g);
            let bt = b.node("b", NodeKind::Tine, g);
            b.fork("f1", Side::A, grip, vec![a]);
            b.fork("f2", Side::B, grip, vec![bt]);
        }
        CatalogKey::ProductTypeII(g) => {
            let a = b.node("a", NodeKind::Tine, g);
            let bt = b.node("b", NodeKind::Tine, g);
            let grip = b.node("G", NodeKind::Grip, Genus(2 * g.0));
            b.fork("f1", Side::A, grip, vec![a, bt]);
            b.fork("f2", Side::B, grip, vec![]);
        }
        CatalogKey::CircleBundleTrivial(g) => {
            if g.0 < 1 {
                return Err(CatalogError::BadParameter {
                    key: key.to_string(),
                    reason: "circle bundles need genus >= 1".to_string(),
                });
            }
            // Drilling a vertical arc out of the product half gives a
            // handlebody of genus 2g; the return handle adds one more.
            let grip = b.node("S", NodeKind::Grip, Genus(2 * g.0 + 1));
            b.fork("fa", Side::A, grip, vec![]);
            b.fork("fb", Side::B, grip, vec![]);
        }
        CatalogKey::T3Untelescoped => {
            chain_of_splittings(&mut b, &[2, 2], &[&[1, 1]]);
        }
        CatalogKey::F2S1UntelescopedA => {
            chain_of_splittings(&mut b, &[4, 4], &[&[2, 2]]);
        }
        CatalogKey::F2S1UntelescopedB => {
            chain_of_splittings(&mut b, &[2, 2, 2, 2], &[&[1, 1], &[1], &[1, 1]]);
        }
        CatalogKey::F2S1UntelescopedC => {
            // Same eight bodies as the chain form, rewired as a tree: the
            // first splitting feeds both single-tine middle splittings,
            // which in turn feed the last one.
            let s1 = b.node("S1", NodeKind::Grip, Genus(2));
            let s2 = b.node("S2", NodeKind::Grip, Genus(2));
            let s3 = b.node("S3", NodeKind::Grip, Genus(2));
            let s4 = b.node("S4", NodeKind::Grip, Genus(2));
            let u = b.node("u", NodeKind::Tine, Genus(1));
            let v = b.node("v", NodeKind::Tine, Genus(1));
            let w = b.node("w", NodeKind::Tine, Genus(1));
            let x = b.node("x", NodeKind::Tine, Genus(1));
            let y = b.node("y", NodeKind::Tine, Genus(1));
            b.fork("A1", Side::A, s1, vec![]);
            b.fork("B1", Side::B, s1, vec![u, v]);
            b.fork("A3", Side::A, s3, vec![u]);
            b.fork("B3", Side::B, s3, vec![w, x]);
            b.fork("A2", Side::A, s2, vec![v, w]);
            b.fork("B2", Side::B, s2, vec![y]);
            b.fork("A4", Side::A, s4, vec![x, y]);
            b.fork("B4", Side::B, s4, vec![]);
        }
    }
    let complex = b
        .build()
        .expect("catalog constructions are well-formed by construction");
    Ok(GeneralizedSplitting::new(complex).expect("catalog constructions are exact"))
}

/// Builds a closed chain of splittings: handlebody forks at both ends,
/// interior grips labeled by `grips`, and the i-th tine group glued between
/// the B fork of splitting i and the A fork of splitting i+1.
fn chain_of_splittings(b: &mut ComplexBuilder, grips: &[u32], tine_groups: &[&[u32]]) {
    assert_eq!(grips.len(), tine_groups.len() + 1);
    let grip_ids: Vec<_> = grips
        .iter()
        .enumerate()
        .map(|(i, &g)| b.node(format!("S{}", i + 1), NodeKind::Grip, Genus(g)))
        .collect();
    let tine_ids: Vec<Vec<_>> = tine_groups
        .iter()
        .enumerate()
        .map(|(i, group)| {
            group
                .iter()
                .enumerate()
                .map(|(j, &t)| b.node(format!("t{}_{}", i + 1, j + 1), NodeKind::Tine, Genus(t)))
                .collect()
        })
        .collect();
    for (i, &grip) in grip_ids.iter().enumerate() {
        let below: Vec<_> = if i == 0 { vec![] } else { tine_ids[i - 1].clone() };
        let above: Vec<_> = if i == grips.len() - 1 {
            vec![]
        } else {
            tine_ids[i].clone()
        };
        b.fork(format!("A{}", i + 1), Side::A, grip, below);
        b.fork(format!("B{}", i + 1), Side::B, grip, above);
    }
}

/// The fixture set shipped under `catalog/`, with stable file stems.
pub fn fixture_entries() -> Vec<(&'static str, CatalogKey)> {
    vec![
        ("ball1", CatalogKey::Ball1),
        ("ball2", CatalogKey::Ball2),
        ("product_type_i_g2", CatalogKey::ProductTypeI(Genus(2))),
        ("product_type_ii_g2", CatalogKey::ProductTypeII(Genus(2))),
        ("circle_bundle_g1", CatalogKey::CircleBundleTrivial(Genus(1))),
        ("t3_untelescoped", CatalogKey::T3Untelescoped),
        ("f2s1_untelescoped_a", CatalogKey::F2S1UntelescopedA),
        ("f2s1_untelescoped_b", CatalogKey::F2S1UntelescopedB),
        ("f2s1_untelescoped_c", CatalogKey::F2S1UntelescopedC),
    ]
}

/// Parses a catalog name as used by the command line, e.g. `ball1`,
/// `product-type-i`, `t3-untelescoped`. Parameterized entries take the
/// genus separately.
pub fn key_by_name(name: &str, genus: Option<Genus>) -> Result<CatalogKey, CatalogError> {
    let need_genus = |key: &str| CatalogError::BadParameter {
        key: key.to_string(),
        reason: "this entry needs --genus".to_string(),
    };
    match name {
        "ball1" => Ok(CatalogKey::Ball1),
        "ball2" => Ok(CatalogKey::Ball2),
        "product-type-i" => Ok(CatalogKey::ProductTypeI(
            genus.ok_or_else(|| need_genus(name))?,
        )),
        "product-type-ii" => Ok(CatalogKey::ProductTypeII(
            genus.ok_or_else(|| need_genus(name))?,
        )),
        "circle-bundle" => Ok(CatalogKey::CircleBundleTrivial(
            genus.ok_or_else(|| need_genus(name))?,
        )),
        "t3-untelescoped" => Ok(CatalogKey::T3Untelescoped),
        "f2s1-untelescoped-a" => Ok(CatalogKey::F2S1UntelescopedA),
        "f2s1-untelescoped-b" => Ok(CatalogKey::F2S1UntelescopedB),
        "f2s1-untelescoped-c" => Ok(CatalogKey::F2S1UntelescopedC),
        other => Err(CatalogError::BadParameter {
            key: other.to_string(),
            reason: "unknown catalog entry".to_string(),
        }),
    }
}
