//! Arithmetic in the fields with 2, 3 and 4 elements.
//!
//! Elements are stored as small integer codes. For F4 the codes are
//! `0, 1, 2 = α, 3 = ᾱ` where `α² = ᾱ = α + 1`; with this encoding addition
//! is XOR and conjugation (the Frobenius `x ↦ x²`) swaps codes 2 and 3.
//!
//! The hot paths (form evaluation, row reduction, matrix products) work on raw
//! `u8` codes through [`FieldId`]; [`Scalar`] is the checked, self-describing
//! wrapper used at API boundaries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const F4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const F4_INV: [u8; 4] = [0, 1, 3, 2];
const F4_CONJ: [u8; 4] = [0, 1, 3, 2];

/// One of the three supported fields.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldId {
    F2,
    F3,
    F4,
}

impl FieldId {
    pub const fn order(self) -> u8 {
        match self {
            FieldId::F2 => 2,
            FieldId::F3 => 3,
            FieldId::F4 => 4,
        }
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        match self {
            FieldId::F2 | FieldId::F4 => a ^ b,
            FieldId::F3 => {
                let s = a + b;
                if s >= 3 {
                    s - 3
                } else {
                    s
                }
            }
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        match self {
            FieldId::F2 | FieldId::F4 => a,
            FieldId::F3 => {
                if a == 0 {
                    0
                } else {
                    3 - a
                }
            }
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        match self {
            FieldId::F2 => a & b,
            FieldId::F3 => (a * b) % 3,
            FieldId::F4 => F4_MUL[a as usize][b as usize],
        }
    }

    /// Inverse of a nonzero code. Callers guarantee `a != 0`.
    #[inline]
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(a != 0, "inverse of zero");
        match self {
            FieldId::F2 => 1,
            FieldId::F3 => a, // 1·1 = 1, 2·2 = 4 = 1
            FieldId::F4 => F4_INV[a as usize],
        }
    }

    #[inline]
    pub fn conj(self, a: u8) -> u8 {
        match self {
            FieldId::F4 => F4_CONJ[a as usize],
            _ => a,
        }
    }

    pub fn is_valid_code(self, code: u8) -> bool {
        code < self.order()
    }

    /// Codes in the documented order: 0, 1, then the rest ascending.
    pub fn codes(self) -> std::ops::Range<u8> {
        0..self.order()
    }

    pub fn enumerate_scalars(self) -> Vec<Scalar> {
        self.codes().map(|code| Scalar { field: self, code }).collect()
    }

    /// Nonzero codes, ascending.
    pub fn units(self) -> std::ops::Range<u8> {
        1..self.order()
    }

    pub fn symbol(self, code: u8) -> &'static str {
        match (self, code) {
            (_, 0) => "0",
            (_, 1) => "1",
            (FieldId::F3, 2) => "2",
            (FieldId::F4, 2) => "α",
            (FieldId::F4, 3) => "ᾱ",
            _ => "?",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldId::F2 => "F2",
            FieldId::F3 => "F3",
            FieldId::F4 => "F4",
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A field element tagged with its field.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Scalar {
    field: FieldId,
    code: u8,
}

impl Scalar {
    pub fn new(field: FieldId, code: u8) -> Result<Self> {
        if field.is_valid_code(code) {
            Ok(Scalar { field, code })
        } else {
            Err(Error::Domain(format!("code {code} is not an element of {field}")))
        }
    }

    pub fn zero(field: FieldId) -> Self {
        Scalar { field, code: 0 }
    }

    pub fn one(field: FieldId) -> Self {
        Scalar { field, code: 1 }
    }

    /// The generator α of F4 (code 2).
    pub fn alpha() -> Self {
        Scalar { field: FieldId::F4, code: 2 }
    }

    pub fn field(self) -> FieldId {
        self.field
    }

    pub fn code(self) -> u8 {
        self.code
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }

    /// Image under the order-2 automorphism of F4; identity on F2 and F3.
    pub fn conjugate(self) -> Self {
        Scalar { field: self.field, code: self.field.conj(self.code) }
    }

    pub fn inverse(self) -> Result<Self> {
        if self.code == 0 {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        Ok(Scalar { field: self.field, code: self.field.inv(self.code) })
    }

    fn same_field(self, other: Self) -> FieldId {
        assert_eq!(self.field, other.field, "mixed-field arithmetic");
        self.field
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let f = self.same_field(rhs);
        Scalar { field: f, code: f.add(self.code, rhs.code) }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        let f = self.same_field(rhs);
        Scalar { field: f, code: f.sub(self.code, rhs.code) }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let f = self.same_field(rhs);
        Scalar { field: f, code: f.mul(self.code, rhs.code) }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field, code: self.field.neg(self.code) }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.field.symbol(self.code))
    }
}

/// Packs an F2 coordinate list (codes 0/1, at most 64 entries) into a word.
#[inline]
pub fn pack_f2(codes: &[u8]) -> u64 {
    debug_assert!(codes.len() <= 64);
    codes.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (u64::from(c & 1) << i))
}

/// Dot product of two packed F2 vectors.
#[inline]
pub fn dot_f2(a: u64, b: u64) -> u8 {
    ((a & b).count_ones() & 1) as u8
}
