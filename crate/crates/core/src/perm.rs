//! Symmetric-group bookkeeping for checking representations `S_n → GL(V)`.
//!
//! A representation is given by the images `s_1, …, s_{n-1}` of the adjacent
//! transpositions `(i, i+1)`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Outcome of checking the type-A Coxeter relations on generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub involutions: bool,
    pub braid: bool,
    pub commuting: bool,
}

impl RelationCheck {
    pub fn all(&self) -> bool {
        self.involutions && self.braid && self.commuting
    }
}

/// `s_i² = 1`, `(s_i s_{i+1})³ = 1`, `(s_i s_j)² = 1` for `|i - j| ≥ 2`.
pub fn coxeter_relations(gens: &[Matrix]) -> RelationCheck {
    let square_is_id = |m: &Matrix| m.mul(m).is_identity();
    let involutions = gens.iter().all(square_is_id);
    let braid = gens.windows(2).all(|w| {
        let p = w[0].mul(&w[1]);
        p.mul(&p).mul(&p).is_identity()
    });
    let mut commuting = true;
    for i in 0..gens.len() {
        for j in i + 2..gens.len() {
            commuting &= square_is_id(&gens[i].mul(&gens[j]));
        }
    }
    RelationCheck { involutions, braid, commuting }
}

/// The normal-subgroup argument: the kernel of `S_n → G` is `1`, `A_n`,
/// `S_n` or (for `n = 4`) the Klein group, and each nontrivial option kills
/// one of the tested elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCheck {
    pub first_nontrivial: bool,
    pub first_two_distinct: bool,
    /// Only tested when `n = 4`.
    pub klein_nontrivial: Option<bool>,
}

impl KernelCheck {
    pub fn faithful(&self) -> bool {
        self.first_nontrivial && self.first_two_distinct && self.klein_nontrivial.unwrap_or(true)
    }
}

/// Assumes the Coxeter relations hold.
pub fn kernel_check(gens: &[Matrix]) -> KernelCheck {
    let n = gens.len() + 1;
    let first_nontrivial = gens.first().is_some_and(|g| !g.is_identity());
    let first_two_distinct = gens.len() < 2 || gens[0] != gens[1];
    let klein_nontrivial = (n == 4).then(|| !gens[0].mul(&gens[2]).is_identity());
    KernelCheck { first_nontrivial, first_two_distinct, klein_nontrivial }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityCheck {
    pub group_order: u64,
    pub distinct_images: u64,
}

impl InjectivityCheck {
    pub fn injective(&self) -> bool {
        self.group_order == self.distinct_images
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Walks all of `S_n` from the identity, right-multiplying by adjacent
/// transpositions, and counts distinct matrix images. Requires the Coxeter
/// relations so that the image of each permutation is well defined.
pub fn full_injectivity(gens: &[Matrix], limit: usize) -> Result<InjectivityCheck> {
    let n = gens.len() + 1;
    if n > limit {
        return Err(Error::OutOfRange(format!("S_{n} is larger than the enumeration limit S_{limit}")));
    }
    let first = gens.first().ok_or_else(|| Error::Config("no generators".into()))?;
    let dim = first.rows();
    let identity: Vec<u8> = (0..n as u8).collect();
    let mut seen: HashMap<Vec<u8>, Matrix> = HashMap::new();
    let mut images: HashSet<Matrix> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = Matrix::identity(first.field(), dim);
    images.insert(id.clone());
    seen.insert(identity.clone(), id);
    queue.push_back(identity);
    while let Some(p) = queue.pop_front() {
        let m = seen[&p].clone();
        for (i, g) in gens.iter().enumerate() {
            let mut q = p.clone();
            q.swap(i, i + 1);
            if seen.contains_key(&q) {
                continue;
            }
            let img = m.mul(g);
            images.insert(img.clone());
            seen.insert(q.clone(), img);
            queue.push_back(q);
        }
    }
    Ok(InjectivityCheck { group_order: seen.len() as u64, distinct_images: images.len() as u64 })
}

/// Image of an arbitrary permutation (given as the list `i ↦ p[i]`), via a
/// bubble-sort word in the adjacent transpositions.
pub fn image_of(perm: &[usize], gens: &[Matrix]) -> Matrix {
    let n = perm.len();
    assert_eq!(n, gens.len() + 1);
    let mut p = perm.to_vec();
    let mut word = Vec::new();
    // sort p by adjacent swaps; p = s_{k1} ∘ … and we record the swaps
    for i in 0..n {
        for j in (i + 1..n).rev() {
            if p[j - 1] > p[j] {
                p.swap(j - 1, j);
                word.push(j - 1);
            }
        }
    }
    let mut m = Matrix::identity(gens[0].field(), gens[0].rows());
    for &k in word.iter().rev() {
        m = m.mul(&gens[k]);
    }
    m
}
