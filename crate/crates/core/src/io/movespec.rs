//! One-line move scripts, e.g.
//!
//! ```text
//! stabilize grip=G
//! weakreduce grip=S case=NU a=1 b=1
//! weakreduce grip=S case=SS k=2 g1=2 g2=0 bmid=u shape=split
//! amalgamate grips=S1,S2 tines=u,v
//! elimsphere tine=t ball=f1,f2
//! elimtrivial fork=f1 variant=interior
//! ```
//!
//! [`crate::moves::Move`]'s `Display` prints this syntax back.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::body::Genus;
use crate::moves::{
    Move, TineAssignment, TrivialElimVariant, WeakReductionData, WrCase, WrShape,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveSpecError {
    #[error("unknown move verb `{0}`")]
    UnknownVerb(String),
    #[error("expected key=value, got `{0}`")]
    BadPair(String),
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("bad value for `{key}`: {reason}")]
    BadValue { key: String, reason: String },
    #[error("unexpected key `{0}` for this move")]
    UnexpectedKey(String),
    #[error("empty move specification")]
    Empty,
}

struct Pairs {
    map: BTreeMap<String, String>,
}

impl Pairs {
    fn take(&mut self, key: &'static str) -> Result<String, MoveSpecError> {
        self.map.remove(key).ok_or(MoveSpecError::Missing(key))
    }

    fn take_opt(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn take_genus(&mut self, key: &'static str) -> Result<Genus, MoveSpecError> {
        let raw = self.take(key)?;
        raw.parse::<u32>()
            .map(Genus)
            .map_err(|_| MoveSpecError::BadValue {
                key: key.to_string(),
                reason: format!("`{raw}` is not a genus"),
            })
    }

    fn finish(self) -> Result<(), MoveSpecError> {
        match self.map.into_keys().next() {
            Some(key) => Err(MoveSpecError::UnexpectedKey(key)),
            None => Ok(()),
        }
    }
}

fn name_set(raw: &str) -> BTreeSet<String> {
    raw.split(',')
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Parses one move script line.
pub fn parse_move(spec: &str) -> Result<Move, MoveSpecError> {
    let mut words = spec.split_whitespace();
    let verb = words.next().ok_or(MoveSpecError::Empty)?;
    let mut map = BTreeMap::new();
    for word in words {
        let (key, value) = word
            .split_once('=')
            .ok_or_else(|| MoveSpecError::BadPair(word.to_string()))?;
        map.insert(key.to_string(), value.to_string());
    }
    let mut pairs = Pairs { map };

    let mv = match verb {
        "stabilize" => Move::Stabilize {
            grip: pairs.take("grip")?,
        },
        "destabilize" => Move::Destabilize {
            grip: pairs.take("grip")?,
        },
        "weakreduce" => {
            let grip = pairs.take("grip")?;
            let case_word = pairs.take("case")?;
            let case = match case_word.as_str() {
                "NN" => WrCase::Nn,
                "NU" => WrCase::Nu {
                    a: pairs.take_genus("a")?,
                    b: pairs.take_genus("b")?,
                },
                "NSsep" => WrCase::NsSep {
                    a: pairs.take_genus("a")?,
                    b: pairs.take_genus("b")?,
                },
                "SS" => WrCase::Ss {
                    k: pairs.take_genus("k")?,
                    g1: pairs.take_genus("g1")?,
                    g2: pairs.take_genus("g2")?,
                },
                other => {
                    return Err(MoveSpecError::BadValue {
                        key: "case".to_string(),
                        reason: format!("`{other}` is not one of NN, NU, NSsep, SS"),
                    })
                }
            };
            let shape = match pairs.take_opt("shape").as_deref() {
                None | Some("chain") => WrShape::Chain,
                Some("split") => WrShape::Split,
                Some(other) => {
                    return Err(MoveSpecError::BadValue {
                        key: "shape".to_string(),
                        reason: format!("`{other}` is not `chain` or `split`"),
                    })
                }
            };
            let tines = TineAssignment {
                a_mid: pairs.take_opt("amid").map(|s| name_set(&s)).unwrap_or_default(),
                b_mid: pairs.take_opt("bmid").map(|s| name_set(&s)).unwrap_or_default(),
            };
            Move::WeakReduce(WeakReductionData {
                grip,
                case,
                shape,
                tines,
            })
        }
        "amalgamate" => {
            let grips_raw = pairs.take("grips")?;
            let (g1, g2) = grips_raw
                .split_once(',')
                .ok_or_else(|| MoveSpecError::BadValue {
                    key: "grips".to_string(),
                    reason: "expected two comma-separated grips".to_string(),
                })?;
            Move::Amalgamate {
                grips: (g1.to_string(), g2.to_string()),
                shared: name_set(&pairs.take("tines")?),
            }
        }
        "elimsphere" => Move::EliminateSphereTine {
            tine: pairs.take("tine")?,
            ball: name_set(&pairs.take("ball")?),
        },
        "elimtrivial" => {
            let fork = pairs.take("fork")?;
            let variant = match pairs.take("variant")?.as_str() {
                "boundary" => TrivialElimVariant::BoundaryGrip,
                "interior" => TrivialElimVariant::InteriorMerge,
                other => {
                    return Err(MoveSpecError::BadValue {
                        key: "variant".to_string(),
                        reason: format!("`{other}` is not `boundary` or `interior`"),
                    })
                }
            };
            Move::EliminateTrivialFork { fork, variant }
        }
        other => return Err(MoveSpecError::UnknownVerb(other.to_string())),
    };
    pairs.finish()?;
    Ok(mv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_display() {
        let specs = [
            "stabilize grip=G",
            "destabilize grip=G",
            "weakreduce grip=S case=NN",
            "weakreduce grip=S case=NU a=1 b=1",
            "weakreduce grip=S case=NSsep a=0 b=2 shape=split",
            "weakreduce grip=S case=SS k=2 g1=2 g2=0 bmid=u",
            "amalgamate grips=S1,S2 tines=u,v",
            "elimsphere tine=t ball=f1,f2",
            "elimtrivial fork=f1 variant=interior",
        ];
        for spec in specs {
            let mv = parse_move(spec).unwrap();
            let printed = mv.to_string();
            assert_eq!(parse_move(&printed).unwrap(), mv, "spec `{spec}` vs `{printed}`");
        }
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(matches!(parse_move(""), Err(MoveSpecError::Empty)));
        assert!(matches!(
            parse_move("explode grip=G"),
            Err(MoveSpecError::UnknownVerb(_))
        ));
        assert!(matches!(
            parse_move("stabilize"),
            Err(MoveSpecError::Missing("grip"))
        ));
        assert!(matches!(
            parse_move("stabilize grip=G extra=1"),
            Err(MoveSpecError::UnexpectedKey(_))
        ));
        assert!(matches!(
            parse_move("weakreduce grip=S case=XX"),
            Err(MoveSpecError::BadValue { .. })
        ));
    }
}
