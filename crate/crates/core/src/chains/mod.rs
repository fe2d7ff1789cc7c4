//! Chains of transpositions: sequences `t(v_1), …, t(v_m)` of distinct
//! elements of `D` where exactly the consecutive ones fail to commute.

mod embedding;
mod search;
mod witness;
mod witt;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formspace::FormSpace;
use crate::gf::Scalar;
use crate::transpositions::{canonical_rep, in_class_codes, is_canonical, ClassElement, ClassSpec};
use crate::vector::Vector;

pub use embedding::{chain_to_sn_embedding, SnEmbeddingReport};
pub use search::{max_chain, max_chain_from_prefix, SearchOptions, SearchOutcome, SymmetryMode, DEFAULT_NODE_BUDGET};
pub use witness::{paper_witness_chain, repaired_witness_chain, WitnessCase, WitnessFamily, WitnessValidation};
pub use witt::{witt_extend, PartialIsometry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    spec: ClassSpec,
    elems: Vec<ClassElement>,
}

impl Chain {
    /// Validates `vs` as a chain and stores canonical representatives.
    pub fn new(space: &FormSpace, spec: ClassSpec, vs: &[Vector]) -> Result<Chain> {
        let check = is_chain(space, spec, vs)?;
        if let Some(v) = check.violation {
            return Err(Error::CheckFailed { clause: "chain".into(), detail: v.to_string() });
        }
        let elems = vs.iter().map(|v| ClassElement::new(space, spec, v)).collect::<Result<Vec<_>>>()?;
        Ok(Chain { spec, elems })
    }

    pub(crate) fn from_reps_unchecked(spec: ClassSpec, reps: Vec<Vector>) -> Chain {
        let elems = reps
            .into_iter()
            .map(|rep| {
                debug_assert!(is_canonical(&rep));
                ClassElement::from_rep_unchecked(rep)
            })
            .collect();
        Chain { spec, elems }
    }

    pub fn spec(&self) -> ClassSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[ClassElement] {
        &self.elems
    }

    pub fn vectors(&self) -> Vec<Vector> {
        self.elems.iter().map(|e| e.rep().clone()).collect()
    }
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elems.iter().map(|e| e.rep()))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|e| e.rep().to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The first way in which a vector list fails to be a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainViolation {
    NotInClass { index: usize },
    Duplicate { first: usize, second: usize },
    AdjacentCommute { index: usize },
    DistantNonCommute { first: usize, second: usize },
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based positions, as in hand-written chains
        match self {
            ChainViolation::NotInClass { index } => write!(f, "element {} is not in D", index + 1),
            ChainViolation::Duplicate { first, second } => {
                write!(f, "elements {} and {} give the same transposition", first + 1, second + 1)
            }
            ChainViolation::AdjacentCommute { index } => {
                write!(f, "neighbours {} and {} are orthogonal", index + 1, index + 2)
            }
            ChainViolation::DistantNonCommute { first, second } => {
                write!(f, "elements {} and {} are not adjacent but not orthogonal", first + 1, second + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub length: usize,
    pub violation: Option<ChainViolation>,
}

impl ChainCheck {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn is_chain(space: &FormSpace, spec: ClassSpec, vs: &[Vector]) -> Result<ChainCheck> {
    spec.check_space(space)?;
    for v in vs {
        space.check_vector(v)?;
    }
    let violation = first_violation(space, spec, vs);
    Ok(ChainCheck { length: vs.len(), violation })
}

fn first_violation(space: &FormSpace, spec: ClassSpec, vs: &[Vector]) -> Option<ChainViolation> {
    if let Some(index) = vs.iter().position(|v| !in_class_codes(space, spec, v.coords())) {
        return Some(ChainViolation::NotInClass { index });
    }
    let reps: Vec<Vector> = vs.iter().map(|v| canonical_rep(v).expect("class vectors are nonzero")).collect();
    for j in 0..reps.len() {
        for i in 0..j {
            if reps[i] == reps[j] {
                return Some(ChainViolation::Duplicate { first: i, second: j });
            }
            let orthogonal = space.bilinear_codes(vs[i].coords(), vs[j].coords()) == 0;
            if j == i + 1 && orthogonal {
                return Some(ChainViolation::AdjacentCommute { index: i });
            }
            if j > i + 1 && !orthogonal {
                return Some(ChainViolation::DistantNonCommute { first: i, second: j });
            }
        }
    }
    None
}

/// Canonical class vectors that extend `chain` to a longer chain, in
/// lexicographic order.
pub fn extend_candidates(space: &FormSpace, spec: ClassSpec, chain: &Chain) -> Result<Vec<Vector>> {
    spec.check_space(space)?;
    if chain.spec != spec {
        return Err(Error::Config("chain belongs to a different class".into()));
    }
    let vs = chain.vectors();
    let Some(last) = vs.last() else {
        return crate::transpositions::class_representatives(space, spec);
    };
    let zero = Scalar::zero(space.field());
    let constraints: Vec<(Vector, Scalar)> = vs[..vs.len() - 1].iter().map(|c| (c.clone(), zero)).collect();
    let Some(sol) = space.solve_linear(&constraints)? else {
        return Ok(Vec::new());
    };
    let mut out: Vec<Vector> = sol
        .iter()
        .filter(|x| {
            is_canonical(x)
                && space.bilinear_codes(x.coords(), last.coords()) != 0
                && in_class_codes(space, spec, x.coords())
                && !vs.contains(x)
        })
        .collect();
    out.sort();
    Ok(out)
}
