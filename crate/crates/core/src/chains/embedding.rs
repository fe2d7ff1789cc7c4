use serde::Serialize;

use super::Chain;
use crate::error::{Error, Result};
use crate::formspace::FormSpace;
use crate::matrix::Matrix;
use crate::perm::{coxeter_relations, full_injectivity, kernel_check, InjectivityCheck, KernelCheck, RelationCheck};
use crate::transpositions::element_matrix;

/// `S_{m+1} → G` given by sending `(i, i+1)` to the `i`-th chain element.
#[derive(Clone, Debug, Serialize)]
pub struct SnEmbeddingReport {
    /// The `m + 1` of `S_{m+1}`.
    pub degree: usize,
    #[serde(skip)]
    pub generators: Vec<Matrix>,
    pub relations: RelationCheck,
    pub kernel: KernelCheck,
    /// Present when full enumeration was requested and `degree` is within
    /// the limit.
    pub injectivity: Option<InjectivityCheck>,
}

impl SnEmbeddingReport {
    pub fn faithful(&self) -> bool {
        self.relations.all() && self.kernel.faithful() && self.injectivity.as_ref().is_none_or(|c| c.injective())
    }
}

/// Builds and checks the representation of `S_{m+1}` generated by a chain of
/// length `m`. With `enumerate_up_to = Some(k)`, all `(m+1)!` images are
/// listed when `m + 1 ≤ k`.
pub fn chain_to_sn_embedding(
    space: &FormSpace,
    chain: &Chain,
    enumerate_up_to: Option<usize>,
) -> Result<SnEmbeddingReport> {
    if chain.is_empty() {
        return Err(Error::Config("empty chain".into()));
    }
    let generators =
        chain.elems().iter().map(|e| element_matrix(space, chain.spec(), e)).collect::<Result<Vec<_>>>()?;
    let relations = coxeter_relations(&generators);
    if !relations.all() {
        return Err(Error::Contract(format!("chain generators fail the Coxeter relations: {relations:?}")));
    }
    let kernel = kernel_check(&generators);
    let degree = generators.len() + 1;
    let injectivity = match enumerate_up_to {
        Some(k) if degree <= k => Some(full_injectivity(&generators, k)?),
        _ => None,
    };
    Ok(SnEmbeddingReport { degree, generators, relations, kernel, injectivity })
}
