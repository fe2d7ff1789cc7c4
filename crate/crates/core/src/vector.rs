//! Coordinate vectors over F2, F3, F4 in a fixed basis.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldId, Scalar};

/// A coordinate vector. Equality, hashing and ordering are by field and then
/// lexicographically by coordinate codes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Vector {
    field: FieldId,
    coords: Vec<u8>,
}

impl Vector {
    pub fn zero(field: FieldId, dim: usize) -> Self {
        Vector { field, coords: vec![0; dim] }
    }

    pub fn unit(field: FieldId, dim: usize, index: usize) -> Self {
        let mut v = Self::zero(field, dim);
        v.coords[index] = 1;
        v
    }

    pub fn from_codes(field: FieldId, coords: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = coords.iter().find(|&&c| !field.is_valid_code(c)) {
            return Err(Error::Domain(format!("code {bad} is not an element of {field}")));
        }
        Ok(Vector { field, coords })
    }

    pub(crate) fn from_codes_unchecked(field: FieldId, coords: Vec<u8>) -> Self {
        debug_assert!(coords.iter().all(|&c| field.is_valid_code(c)));
        Vector { field, coords }
    }

    pub fn from_scalars(field: FieldId, scalars: &[Scalar]) -> Result<Self> {
        if let Some(s) = scalars.iter().find(|s| s.field() != field) {
            return Err(Error::Domain(format!("scalar over {} in a {field} vector", s.field())));
        }
        Ok(Vector { field, coords: scalars.iter().map(|s| s.code()).collect() })
    }

    /// Builds `Σ c·e_i` from `(index, code)` terms with 1-based indices, the
    /// way basis vectors are numbered in hand calculations. Repeated indices
    /// accumulate.
    pub fn from_terms(field: FieldId, dim: usize, terms: &[(usize, u8)]) -> Self {
        let mut coords = vec![0; dim];
        for &(i, c) in terms {
            assert!((1..=dim).contains(&i), "basis index {i} out of range 1..={dim}");
            coords[i - 1] = field.add(coords[i - 1], c);
        }
        Vector { field, coords }
    }

    /// Sum of the basis vectors with the given 1-based indices.
    pub fn sum_of(field: FieldId, dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let terms: Vec<(usize, u8)> = indices.into_iter().map(|i| (i, 1)).collect();
        Self::from_terms(field, dim, &terms)
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> Scalar {
        Scalar::new(self.field, self.coords[i]).expect("valid code by construction")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn first_nonzero(&self) -> Option<(usize, u8)> {
        self.coords.iter().copied().enumerate().find(|&(_, c)| c != 0)
    }

    fn check_compatible(&self, other: &Vector) {
        assert_eq!(self.field, other.field, "mixed-field vectors");
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
    }

    pub fn add(&self, other: &Vector) -> Vector {
        self.check_compatible(other);
        let f = self.field;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect();
        Vector { field: f, coords }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.check_compatible(other);
        let f = self.field;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.sub(a, b)).collect();
        Vector { field: f, coords }
    }

    pub fn scale_code(&self, c: u8) -> Vector {
        let f = self.field;
        Vector { field: f, coords: self.coords.iter().map(|&a| f.mul(c, a)).collect() }
    }

    pub fn scale(&self, c: Scalar) -> Vector {
        assert_eq!(c.field(), self.field, "mixed-field scaling");
        self.scale_code(c.code())
    }

    /// `self + c·other`, in place.
    pub fn axpy_code(&mut self, c: u8, other: &Vector) {
        self.check_compatible(other);
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.coords.iter_mut().zip(&other.coords) {
            *a = f.add(*a, f.mul(c, b));
        }
    }

    pub fn neg(&self) -> Vector {
        self.scale_code(self.field.neg(1))
    }

    /// Coordinate-wise conjugation (nontrivial only over F4).
    pub fn conj(&self) -> Vector {
        let f = self.field;
        Vector { field: f, coords: self.coords.iter().map(|&a| f.conj(a)).collect() }
    }

    /// All vectors of the given dimension, in lexicographic code order.
    pub fn all(field: FieldId, dim: usize) -> impl Iterator<Item = Vector> {
        let q = field.order() as u64;
        let total = q.checked_pow(dim as u32).expect("space too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut coords = vec![0u8; dim];
            for slot in coords.iter_mut().rev() {
                *slot = (idx % q) as u8;
                idx /= q;
            }
            Vector { field, coords }
        })
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, &c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(self.field.symbol(c))?;
        }
        f.write_str(")")
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
