use serde::Serialize;

use crate::error::{Error, Result};
use crate::formspace::FormSpace;
use crate::matrix::{rank_of, Echelon, Matrix};
use crate::vector::Vector;

/// A linear map given on a basis `u_i ↦ w_i` that preserves the form (and
/// the quadratic form where there is one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialIsometry {
    domain: Vec<Vector>,
    images: Vec<Vector>,
}

impl PartialIsometry {
    pub fn new(space: &FormSpace, domain: Vec<Vector>, images: Vec<Vector>) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(Error::Config("domain and image lists differ in length".into()));
        }
        for v in domain.iter().chain(&images) {
            space.check_vector(v)?;
        }
        let f = space.field();
        if rank_of(f, space.dim(), &domain) != domain.len() || rank_of(f, space.dim(), &images) != images.len() {
            return Err(Error::Config("partial isometry needs independent domain and image bases".into()));
        }
        for i in 0..domain.len() {
            for j in 0..domain.len() {
                if space.bilinear_codes(domain[i].coords(), domain[j].coords())
                    != space.bilinear_codes(images[i].coords(), images[j].coords())
                {
                    return Err(Error::Config(format!(
                        "map does not preserve the form on pair ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if space.quadratic_code(domain[i].coords()) != space.quadratic_code(images[i].coords()) {
                return Err(Error::Config(format!("map does not preserve Q on basis vector {}", i + 1)));
            }
        }
        Ok(PartialIsometry { domain, images })
    }

    pub fn domain(&self) -> &[Vector] {
        &self.domain
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }
}

/// Extends a partial isometry of a nondegenerate space to the whole space.
///
/// Each standard basis vector `x` outside the current domain is sent to the
/// lexicographically first `y` outside the current image with the required
/// inner products against the domain basis and with `Q(y) = Q(x)`. Witt's
/// lemma guarantees such a `y` exists at every step.
pub fn witt_extend(space: &FormSpace, partial: &PartialIsometry) -> Result<Matrix> {
    if !space.is_nondegenerate() {
        return Err(Error::Degenerate("isometry extension needs a nondegenerate form".into()));
    }
    let f = space.field();
    let n = space.dim();
    let mut us = partial.domain.clone();
    let mut ws = partial.images.clone();
    let mut dom = Echelon::new(f, n);
    let mut img = Echelon::new(f, n);
    for (u, w) in us.iter().zip(&ws) {
        dom.insert(u);
        img.insert(w);
    }
    for j in 0..n {
        let x = space.basis_vector(j);
        if dom.contains(&x) {
            continue;
        }
        // (y, w_i) = (x, u_i) for every pair so far
        let rows: Vec<Vec<u8>> = ws.iter().map(|w| space.dual_row(w)).collect();
        let rhs: Vec<u8> = us.iter().map(|u| space.bilinear_codes(x.coords(), u.coords())).collect();
        let target_q = space.quadratic_code(x.coords());
        let sol = crate::matrix::solve_system(f, &rows, &rhs, n)
            .ok_or_else(|| Error::Contract("inner-product constraints are inconsistent".into()))?;
        let y = sol
            .iter()
            .find(|y| space.quadratic_code(y.coords()) == target_q && !img.contains(y))
            .ok_or_else(|| Error::Contract(format!("no image for basis vector {}", j + 1)))?;
        dom.insert(&x);
        img.insert(&y);
        us.push(x);
        ws.push(y);
    }
    let b = Matrix::from_columns(f, &us);
    let y = Matrix::from_columns(f, &ws);
    let t = y.mul(&b.inverse()?);
    if !space.is_isometry(&t) {
        return Err(Error::Contract("extended map is not an isometry".into()));
    }
    for (u, w) in partial.domain.iter().zip(&partial.images) {
        if &t.mul_vec(u) != w {
            return Err(Error::Contract("extended map does not restrict to the partial map".into()));
        }
    }
    Ok(t)
}
