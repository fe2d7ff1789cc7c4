//! The class `D` of transvections / reflections `t(v)` of a form space.
//!
//! Symplectic, unitary and orthogonal F2 classes use `t(v): w ↦ w + (w, v) v`.
//! With the unitary form linear in its first slot this is the F4-linear
//! transvection; over F2 the two slots agree. Over F3, `t(v)` is the
//! reflection `w ↦ w - (w, v) Q(v)^{-1} v`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formspace::{FormKind, FormSpace, Sign};
use crate::matrix::Matrix;
use crate::vector::Vector;

/// Default cap for [`product_order`].
pub const ORDER_CAP: u32 = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassSpec {
    /// All nonzero vectors.
    Symplectic,
    /// Nonzero singular vectors, `(v, v) = 0`.
    Unitary,
    /// Non-singular vectors, `Q(v) = 1`.
    OrthogonalF2,
    /// Vectors with `Q(v) = π`.
    OrthogonalF3 { pi: Sign },
}

impl ClassSpec {
    pub fn kind(self) -> FormKind {
        match self {
            ClassSpec::Symplectic => FormKind::Symplectic,
            ClassSpec::Unitary => FormKind::Unitary,
            ClassSpec::OrthogonalF2 => FormKind::OrthogonalF2,
            ClassSpec::OrthogonalF3 { .. } => FormKind::OrthogonalF3,
        }
    }

    pub fn check_space(self, space: &FormSpace) -> Result<()> {
        if space.kind() != self.kind() {
            return Err(Error::Config(format!("class {self:?} does not live in a {:?} space", space.kind())));
        }
        Ok(())
    }
}

pub(crate) fn in_class_codes(space: &FormSpace, spec: ClassSpec, v: &[u8]) -> bool {
    if v.iter().all(|&c| c == 0) {
        return false;
    }
    match spec {
        ClassSpec::Symplectic => true,
        ClassSpec::Unitary => space.bilinear_codes(v, v) == 0,
        // a radical vector gives the identity map, not a transposition
        ClassSpec::OrthogonalF2 => space.quadratic_code(v) == 1 && !is_radical(space, v),
        ClassSpec::OrthogonalF3 { pi } => space.quadratic_code(v) == pi.f3_code(),
    }
}

fn is_radical(space: &FormSpace, v: &[u8]) -> bool {
    let f = space.field();
    (0..space.dim()).all(|i| space.gram().row(i).iter().zip(v).fold(0, |acc, (&g, &c)| f.add(acc, f.mul(g, c))) == 0)
}

pub fn in_class_d(space: &FormSpace, spec: ClassSpec, v: &Vector) -> bool {
    spec.kind() == space.kind() && space.check_vector(v).is_ok() && in_class_codes(space, spec, v.coords())
}

/// `c·v` with `c` the inverse of the first nonzero coordinate.
pub fn canonical_rep(v: &Vector) -> Result<Vector> {
    let (_, lead) = v.first_nonzero().ok_or_else(|| Error::Domain("zero vector has no representative".into()))?;
    Ok(v.scale_code(v.field().inv(lead)))
}

pub fn is_canonical(v: &Vector) -> bool {
    v.first_nonzero().is_some_and(|(_, c)| c == 1)
}

/// A transposition `t(v)`, stored by its canonical vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassElement {
    rep: Vector,
}

impl ClassElement {
    pub fn new(space: &FormSpace, spec: ClassSpec, v: &Vector) -> Result<Self> {
        spec.check_space(space)?;
        space.check_vector(v)?;
        if !in_class_codes(space, spec, v.coords()) {
            return Err(Error::NotInClass(v.to_string()));
        }
        Ok(ClassElement { rep: canonical_rep(v)? })
    }

    pub(crate) fn from_rep_unchecked(rep: Vector) -> Self {
        ClassElement { rep }
    }

    pub fn rep(&self) -> &Vector {
        &self.rep
    }
}

fn require_class(space: &FormSpace, spec: ClassSpec, v: &Vector) -> Result<()> {
    spec.check_space(space)?;
    space.check_vector(v)?;
    if !in_class_codes(space, spec, v.coords()) {
        return Err(Error::NotInClass(v.to_string()));
    }
    Ok(())
}

/// Image of `w` under `t(v)`.
pub fn apply_transposition(space: &FormSpace, spec: ClassSpec, v: &Vector, w: &Vector) -> Result<Vector> {
    require_class(space, spec, v)?;
    space.check_vector(w)?;
    Ok(apply_unchecked(space, spec, v, w))
}

fn apply_unchecked(space: &FormSpace, spec: ClassSpec, v: &Vector, w: &Vector) -> Vector {
    let f = space.field();
    let wv = space.bilinear_codes(w.coords(), v.coords());
    let coeff = match spec {
        ClassSpec::OrthogonalF3 { pi } => f.neg(f.mul(wv, f.inv(pi.f3_code()))),
        _ => wv,
    };
    let mut out = w.clone();
    out.axpy_code(coeff, v);
    out
}

pub fn matrix_of(space: &FormSpace, spec: ClassSpec, v: &Vector) -> Result<Matrix> {
    require_class(space, spec, v)?;
    let cols: Vec<Vector> = (0..space.dim()).map(|i| apply_unchecked(space, spec, v, &space.basis_vector(i))).collect();
    Ok(Matrix::from_columns(space.field(), &cols))
}

pub fn element_matrix(space: &FormSpace, spec: ClassSpec, e: &ClassElement) -> Result<Matrix> {
    matrix_of(space, spec, &e.rep)
}

pub fn commutes(space: &FormSpace, a: &ClassElement, b: &ClassElement) -> Result<bool> {
    Ok(a == b || space.bilinear(&a.rep, &b.rep)?.is_zero())
}

/// Order of the product of the given transpositions, capped at `cap`.
pub fn product_order(space: &FormSpace, spec: ClassSpec, elems: &[ClassElement], cap: u32) -> Result<u32> {
    if elems.is_empty() {
        return Err(Error::Config("product of an empty list".into()));
    }
    let mut prod = Matrix::identity(space.field(), space.dim());
    for e in elems {
        prod = prod.mul(&element_matrix(space, spec, e)?);
    }
    prod.order(cap)
}

/// All canonical representatives of `D`, in lexicographic order.
pub fn class_representatives(space: &FormSpace, spec: ClassSpec) -> Result<Vec<Vector>> {
    spec.check_space(space)?;
    let q = space.field().order() as f64;
    if q.powi(space.dim() as i32) > 2e7 {
        return Err(Error::Unsupported(format!(
            "space of dimension {} over {} is too large to enumerate",
            space.dim(),
            space.field()
        )));
    }
    Ok(Vector::all(space.field(), space.dim())
        .filter(|v| is_canonical(v) && in_class_codes(space, spec, v.coords()))
        .collect())
}
