//! Symplectic, unitary and orthogonal spaces over the small fields.
//!
//! Every space carries its defining basis; vectors are coordinate lists in
//! that basis. The unitary form is linear in the first argument and
//! conjugate-linear in the second: `(u, w) = Σ u_i g_ij conj(w_j)`.
//!
//! Orthogonal spaces over F2 carry a quadratic form `Q` given by its values on
//! the basis together with the polar (alternating) form:
//! `Q(x) = Σ x_i Q(b_i) + Σ_{i<j} x_i x_j (b_i, b_j)`. Over F3 the quadratic
//! form is `Q(v) = 2(v, v) = -(v, v)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{pack_f2, FieldId, Scalar};
use crate::matrix::{rank_of, solve_system, AffineSolution, Echelon, Matrix};
use crate::vector::Vector;

/// A sign `+` / `-`, used for orthogonal types, discriminants and the
/// reflection class over F3.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// The element of F3 this sign names: `+ ↦ 1`, `- ↦ 2`.
    pub fn f3_code(self) -> u8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => 2,
        }
    }

    pub fn from_f3_code(code: u8) -> Option<Sign> {
        match code {
            1 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            _ => Err(Error::Config(format!("expected + or -, got `{s}`"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    Symplectic,
    Unitary,
    OrthogonalF2,
    OrthogonalF3,
}

impl FormKind {
    pub fn field(self) -> FieldId {
        match self {
            FormKind::Symplectic | FormKind::OrthogonalF2 => FieldId::F2,
            FormKind::Unitary => FieldId::F4,
            FormKind::OrthogonalF3 => FieldId::F3,
        }
    }
}

/// Standard bases used by the hand calculations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisPreset {
    /// Hyperbolic pairs: `(v1,v2) = (v3,v4) = … = 1`, all other products 0.
    SymplecticPairs,
    /// Permutation-module form `(w_i, w_j) = 1` for `i ≠ j`.
    AllOnesOffDiagonal,
    UnitaryOrthonormal,
    /// `diag(1, …, 1)` or `diag(1, …, 1, -1)`.
    F3Diagonal {
        last_negative: bool,
    },
    /// Hyperbolic pairs with `Q(v_i) = 1` for `i < n` and `Q(v_n)` chosen so
    /// the space has type `eps`. In odd dimension a radical vector with
    /// `Q = 1` is appended to a type-`eps` space of one dimension less.
    F2Hyperbolic {
        eps: Sign,
    },
    /// All-ones polar form with `Q(w_i) = q` for `i < n` and `Q(w_n) = q_last`.
    F2AllOnes {
        q: u8,
        q_last: u8,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSpace {
    kind: FormKind,
    dim: usize,
    gram: Matrix,
    /// `Q(b_i)` for orthogonal spaces over F2.
    qdiag: Option<Vec<u8>>,
}

pub fn make_space(kind: FormKind, dim: usize, preset: &BasisPreset) -> Result<FormSpace> {
    if dim == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    let field = kind.field();
    let mismatch = || Error::Config(format!("preset {preset:?} is not compatible with {kind:?}"));
    if kind == FormKind::Symplectic && dim % 2 != 0 {
        return Err(Error::Config(format!("symplectic space needs even dimension, got {dim}")));
    }
    let mut gram = Matrix::zeros(field, dim, dim);
    let mut qdiag = None;
    match (kind, preset) {
        (FormKind::Symplectic, BasisPreset::SymplecticPairs) => {
            for k in (0..dim - 1).step_by(2) {
                gram.set(k, k + 1, 1);
                gram.set(k + 1, k, 1);
            }
        }
        (FormKind::Symplectic, BasisPreset::AllOnesOffDiagonal) => all_ones(&mut gram),
        (FormKind::Unitary, BasisPreset::UnitaryOrthonormal) => gram = Matrix::identity(field, dim),
        (FormKind::OrthogonalF3, BasisPreset::F3Diagonal { last_negative }) => {
            gram = Matrix::identity(field, dim);
            if *last_negative {
                gram.set(dim - 1, dim - 1, 2);
            }
        }
        (FormKind::OrthogonalF2, BasisPreset::F2Hyperbolic { eps }) => {
            let even = dim - dim % 2;
            let mut q = vec![1u8; dim];
            for k in (0..even.saturating_sub(1)).step_by(2) {
                gram.set(k, k + 1, 1);
                gram.set(k + 1, k, 1);
            }
            if even >= 2 {
                // k anisotropic planes have type (-)^k; the last pair is
                // anisotropic exactly when it must flip the parity.
                let anisotropic_last = (even % 4 == 0) != (*eps == Sign::Minus);
                q[even - 1] = u8::from(anisotropic_last);
            } else if *eps == Sign::Minus {
                return Err(Error::Config("a 1-dimensional orthogonal space has no type".into()));
            }
            qdiag = Some(q);
        }
        (FormKind::OrthogonalF2, BasisPreset::F2AllOnes { q, q_last }) => {
            if *q > 1 || *q_last > 1 {
                return Err(Error::Config("quadratic values over F2 must be 0 or 1".into()));
            }
            all_ones(&mut gram);
            let mut qd = vec![*q; dim];
            qd[dim - 1] = *q_last;
            qdiag = Some(qd);
        }
        _ => return Err(mismatch()),
    }
    FormSpace::new(kind, gram, qdiag)
}

fn all_ones(gram: &mut Matrix) {
    let n = gram.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gram.set(i, j, 1);
            }
        }
    }
}

impl FormSpace {
    /// Builds a space from an explicit Gram matrix, validating the symmetry
    /// law of `kind`.
    pub fn new(kind: FormKind, gram: Matrix, qdiag: Option<Vec<u8>>) -> Result<Self> {
        let field = kind.field();
        if gram.field() != field || !gram.is_square() {
            return Err(Error::Config("gram must be square over the kind's field".into()));
        }
        let n = gram.rows();
        for i in 0..n {
            for j in 0..n {
                let ok = match kind {
                    FormKind::Symplectic | FormKind::OrthogonalF2 => {
                        gram.get(i, j) == gram.get(j, i) && (i != j || gram.get(i, i) == 0)
                    }
                    FormKind::Unitary => gram.get(j, i) == field.conj(gram.get(i, j)),
                    FormKind::OrthogonalF3 => gram.get(i, j) == gram.get(j, i),
                };
                if !ok {
                    return Err(Error::Config(format!("gram violates the {kind:?} symmetry law at ({i},{j})")));
                }
            }
        }
        match (kind, &qdiag) {
            (FormKind::OrthogonalF2, Some(q)) if q.len() == n && q.iter().all(|&x| x <= 1) => {}
            (FormKind::OrthogonalF2, _) => {
                return Err(Error::Config("orthogonal F2 space needs one quadratic value per basis vector".into()))
            }
            (_, None) => {}
            (_, Some(_)) => return Err(Error::Config("quadratic values only apply to orthogonal F2 spaces".into())),
        }
        Ok(FormSpace { kind, dim: n, gram, qdiag })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn field(&self) -> FieldId {
        self.kind.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn qdiag(&self) -> Option<&[u8]> {
        self.qdiag.as_deref()
    }

    pub fn has_quadratic_form(&self) -> bool {
        self.kind != FormKind::Symplectic
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.field(), self.dim, i)
    }

    pub fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.field() != self.field() {
            return Err(Error::Config(format!("{} vector in a {} space", v.field(), self.field())));
        }
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        Ok(())
    }

    /// `G · conj(w)`: the linear functional `x ↦ (x, w)` as a coefficient row.
    pub fn dual_row(&self, w: &Vector) -> Vec<u8> {
        let f = self.field();
        (0..self.dim)
            .map(|i| self.gram.row(i).iter().zip(w.coords()).fold(0, |acc, (&g, &c)| f.add(acc, f.mul(g, f.conj(c)))))
            .collect()
    }

    #[inline]
    pub(crate) fn bilinear_codes(&self, u: &[u8], w: &[u8]) -> u8 {
        let f = self.field();
        let mut acc = 0;
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = self.gram.row(i);
            let mut s = 0;
            for (&g, &c) in row.iter().zip(w) {
                if g != 0 && c != 0 {
                    s = f.add(s, f.mul(g, f.conj(c)));
                }
            }
            acc = f.add(acc, f.mul(a, s));
        }
        acc
    }

    pub fn bilinear(&self, u: &Vector, w: &Vector) -> Result<Scalar> {
        self.check_vector(u)?;
        self.check_vector(w)?;
        Scalar::new(self.field(), self.bilinear_codes(u.coords(), w.coords()))
    }

    /// Quadratic form; for unitary spaces the norm `(v, v)`.
    pub fn quadratic(&self, v: &Vector) -> Result<Scalar> {
        self.check_vector(v)?;
        let f = self.field();
        let code = match self.kind {
            FormKind::Symplectic => return Err(Error::Unsupported("symplectic spaces carry no quadratic form".into())),
            FormKind::OrthogonalF2 => self.quadratic_f2(v.coords()),
            FormKind::OrthogonalF3 => f.neg(self.bilinear_codes(v.coords(), v.coords())),
            FormKind::Unitary => self.bilinear_codes(v.coords(), v.coords()),
        };
        Scalar::new(f, code)
    }

    pub(crate) fn quadratic_code(&self, v: &[u8]) -> u8 {
        let f = self.field();
        match self.kind {
            FormKind::OrthogonalF2 => self.quadratic_f2(v),
            FormKind::OrthogonalF3 => f.neg(self.bilinear_codes(v, v)),
            FormKind::Unitary => self.bilinear_codes(v, v),
            FormKind::Symplectic => 0,
        }
    }

    fn quadratic_f2(&self, v: &[u8]) -> u8 {
        let q = self.qdiag.as_ref().expect("orthogonal F2 space has quadratic values");
        let mut acc = 0u8;
        for i in 0..self.dim {
            if v[i] == 0 {
                continue;
            }
            acc ^= q[i];
            let row = self.gram.row(i);
            for j in i + 1..self.dim {
                acc ^= v[j] & row[j];
            }
        }
        acc
    }

    /// All `x` with `(x, c_i) = s_i` for every constraint.
    pub fn solve_linear(&self, constraints: &[(Vector, Scalar)]) -> Result<Option<AffineSolution>> {
        let mut rows = Vec::with_capacity(constraints.len());
        let mut rhs = Vec::with_capacity(constraints.len());
        for (c, s) in constraints {
            self.check_vector(c)?;
            if s.field() != self.field() {
                return Err(Error::Config("constraint value over the wrong field".into()));
            }
            rows.push(self.dual_row(c));
            rhs.push(s.code());
        }
        Ok(solve_system(self.field(), &rows, &rhs, self.dim))
    }

    /// Basis of `{x : (x, v) = 0}`.
    pub fn perp(&self, v: &Vector) -> Result<Subspace> {
        let zero = Scalar::zero(self.field());
        let sol = self.solve_linear(&[(v.clone(), zero)])?.expect("homogeneous system is consistent");
        Ok(Subspace { field: self.field(), dim: self.dim, basis: sol.kernel })
    }

    pub fn full_subspace(&self) -> Subspace {
        Subspace { field: self.field(), dim: self.dim, basis: (0..self.dim).map(|i| self.basis_vector(i)).collect() }
    }

    /// Radical of the form restricted to `sub`.
    pub fn radical(&self, sub: &Subspace) -> Result<Subspace> {
        for b in &sub.basis {
            self.check_vector(b)?;
        }
        let k = sub.basis.len();
        // unknowns a_k with Σ_k a_k (b_k, b_l) = 0 for every l
        let rows: Vec<Vec<u8>> = (0..k)
            .map(|l| (0..k).map(|kk| self.bilinear_codes(sub.basis[kk].coords(), sub.basis[l].coords())).collect())
            .collect();
        let sol = solve_system(self.field(), &rows, &vec![0; k], k).expect("homogeneous system is consistent");
        let basis = sol
            .kernel
            .iter()
            .map(|coeffs| {
                let mut x = Vector::zero(self.field(), self.dim);
                for (c, b) in coeffs.coords().iter().zip(&sub.basis) {
                    x.axpy_code(*c, b);
                }
                x
            })
            .collect();
        Ok(Subspace { field: self.field(), dim: self.dim, basis })
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.dim
    }

    /// Checks that `m` is an invertible map preserving the form (and `Q` for
    /// orthogonal F2 spaces).
    pub fn is_isometry(&self, m: &Matrix) -> bool {
        if m.field() != self.field() || m.rows() != self.dim || m.cols() != self.dim {
            return false;
        }
        let cols = m.columns();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.bilinear_codes(cols[i].coords(), cols[j].coords()) != self.gram.get(i, j) {
                    return false;
                }
            }
        }
        if let Some(q) = &self.qdiag {
            if cols.iter().zip(q).any(|(c, &qi)| self.quadratic_f2(c.coords()) != qi) {
                return false;
            }
        }
        m.determinant() != 0
    }

    /// Type `ε` of an even-dimensional nondegenerate orthogonal space over F2,
    /// from the number of nonzero singular vectors
    /// `2^(n-1) + ε 2^(n/2-1) - 1`.
    pub fn orthogonal_type_f2(&self) -> Result<Sign> {
        if self.kind != FormKind::OrthogonalF2 {
            return Err(Error::Unsupported("type ε is defined for orthogonal F2 spaces".into()));
        }
        let n = self.dim;
        if n % 2 != 0 {
            return Err(Error::Degenerate(format!("odd dimension {n} has no type")));
        }
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate("polar form is degenerate".into()));
        }
        if n > 24 {
            return Err(Error::Unsupported(format!("dimension {n} too large to count singular vectors")));
        }
        let count = self.count_singular_f2();
        let base = 1u64 << (n - 1);
        let delta = 1u64 << (n / 2 - 1);
        if count == base + delta - 1 {
            Ok(Sign::Plus)
        } else if count == base - delta - 1 {
            Ok(Sign::Minus)
        } else {
            Err(Error::Contract(format!("{count} singular vectors matches neither type in dimension {n}")))
        }
    }

    fn count_singular_f2(&self) -> u64 {
        let n = self.dim;
        let q = self.qdiag.as_ref().expect("orthogonal F2");
        let rows: Vec<u64> = (0..n).map(|i| pack_f2(self.gram.row(i))).collect();
        let qmask = pack_f2(q);
        let mut count = 0;
        for x in 1u64..(1u64 << n) {
            // Σ_{i<j} x_i x_j g_ij = Σ_i x_i |x ∧ row_i ∧ (bits above i)|
            let mut acc = (x & qmask).count_ones();
            let mut bits = x;
            while bits != 0 {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                acc += (x & rows[i as usize] & !((2u64 << i) - 1)).count_ones();
            }
            if acc & 1 == 0 {
                count += 1;
            }
        }
        count
    }

    /// Discriminant of a nondegenerate orthogonal space over F3: the sign of
    /// `det(gram)`.
    pub fn discriminant_f3(&self) -> Result<Sign> {
        if self.kind != FormKind::OrthogonalF3 {
            return Err(Error::Unsupported("discriminant is defined for orthogonal F3 spaces".into()));
        }
        Sign::from_f3_code(self.gram.determinant()).ok_or_else(|| Error::Degenerate("Gram matrix is singular".into()))
    }

    /// `W' = v^⊥` divided by `<r>`, where `r` lies in the radical of `W'`.
    pub fn perp_quotient(&self, v: &Vector, r: &Vector) -> Result<QuotientSpace> {
        self.check_vector(v)?;
        self.check_vector(r)?;
        let f = self.field();
        if r.is_zero() {
            return Err(Error::InvalidQuotient("cannot divide by the zero vector".into()));
        }
        let w_prime = self.perp(v)?;
        if self.bilinear_codes(r.coords(), v.coords()) != 0 {
            return Err(Error::InvalidQuotient(format!("{r} is not orthogonal to {v}")));
        }
        for y in &w_prime.basis {
            if self.bilinear_codes(r.coords(), y.coords()) != 0 || self.bilinear_codes(y.coords(), r.coords()) != 0 {
                return Err(Error::InvalidQuotient(format!("{r} is not in the radical of the perp of {v}")));
            }
        }
        if self.has_quadratic_form() && self.quadratic_code(r.coords()) != 0 {
            return Err(Error::InvalidQuotient(format!("{r} is not singular")));
        }
        let mut ech = Echelon::new(f, self.dim);
        ech.insert(r);
        let lifts: Vec<Vector> = w_prime.basis.iter().filter(|b| ech.insert(b)).cloned().collect();
        let m = lifts.len();
        debug_assert_eq!(m + 1, w_prime.basis.len());

        // full basis [r, lifts.., completion..] to read off quotient coordinates
        let mut full = vec![r.clone()];
        full.extend(lifts.iter().cloned());
        let mut ech_full = Echelon::new(f, self.dim);
        for b in &full {
            ech_full.insert(b);
        }
        for i in 0..self.dim {
            let e = self.basis_vector(i);
            if ech_full.insert(&e) {
                full.push(e);
            }
        }
        let change = Matrix::from_columns(f, &full).inverse()?;

        let mut gram = Matrix::zeros(f, m, m);
        for i in 0..m {
            for j in 0..m {
                gram.set(i, j, self.bilinear_codes(lifts[i].coords(), lifts[j].coords()));
            }
        }
        let qdiag = (self.kind == FormKind::OrthogonalF2)
            .then(|| lifts.iter().map(|e| self.quadratic_f2(e.coords())).collect());
        let induced = FormSpace::new(self.kind, gram, qdiag)?;
        Ok(QuotientSpace {
            parent: self.clone(),
            constraint: v.clone(),
            modded: r.clone(),
            perp_dim: w_prime.basis.len(),
            induced,
            lifts,
            change,
        })
    }
}

impl fmt::Display for FormSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} space of dimension {} over {}", self.kind, self.dim, self.field())
    }
}

/// A subspace given by a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subspace {
    field: FieldId,
    dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Fails if the vectors are linearly dependent.
    pub fn new(space: &FormSpace, basis: Vec<Vector>) -> Result<Self> {
        for b in &basis {
            space.check_vector(b)?;
        }
        if rank_of(space.field(), space.dim(), &basis) != basis.len() {
            return Err(Error::Config("subspace basis is linearly dependent".into()));
        }
        Ok(Subspace { field: space.field(), dim: space.dim(), basis })
    }

    /// The span of arbitrary vectors (a maximal independent subset is kept).
    pub fn span(space: &FormSpace, vectors: &[Vector]) -> Result<Self> {
        let mut ech = Echelon::new(space.field(), space.dim());
        let mut basis = Vec::new();
        for v in vectors {
            space.check_vector(v)?;
            if ech.insert(v) {
                basis.push(v.clone());
            }
        }
        Ok(Subspace { field: space.field(), dim: space.dim(), basis })
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let mut ech = Echelon::new(self.field, self.dim);
        for b in &self.basis {
            ech.insert(b);
        }
        ech.contains(v)
    }
}

/// The induced space `v^⊥ / <r>` with maps to and from parent coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientSpace {
    parent: FormSpace,
    constraint: Vector,
    modded: Vector,
    perp_dim: usize,
    induced: FormSpace,
    /// Parent vectors whose images form the induced basis.
    lifts: Vec<Vector>,
    /// Inverse of the parent basis change `[r, lifts.., completion..]`.
    #[serde(skip)]
    change: Matrix,
}

impl QuotientSpace {
    pub fn parent(&self) -> &FormSpace {
        &self.parent
    }

    pub fn induced(&self) -> &FormSpace {
        &self.induced
    }

    pub fn constraint(&self) -> &Vector {
        &self.constraint
    }

    pub fn modded(&self) -> &Vector {
        &self.modded
    }

    pub fn perp_dim(&self) -> usize {
        self.perp_dim
    }

    pub fn lifts(&self) -> &[Vector] {
        &self.lifts
    }

    pub fn in_perp(&self, x: &Vector) -> bool {
        self.parent.bilinear_codes(x.coords(), self.constraint.coords()) == 0
    }

    /// Image of a vector of `v^⊥` in the quotient.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        self.parent.check_vector(x)?;
        if !self.in_perp(x) {
            return Err(Error::InvalidQuotient(format!("{x} is not orthogonal to {}", self.constraint)));
        }
        let coords = self.change.mul_vec(x);
        let m = self.lifts.len();
        Ok(Vector::from_codes_unchecked(self.parent.field(), coords.coords()[1..=m].to_vec()))
    }

    /// The canonical lift of a quotient vector.
    pub fn section(&self, y: &Vector) -> Result<Vector> {
        self.induced.check_vector(y)?;
        let mut x = Vector::zero(self.parent.field(), self.parent.dim());
        for (c, e) in y.coords().iter().zip(&self.lifts) {
            x.axpy_code(*c, e);
        }
        Ok(x)
    }

    /// Matrix of the map induced on the quotient by a parent map that fixes
    /// `<v>` and `<r>`.
    pub fn induced_action(&self, a: &Matrix) -> Result<Matrix> {
        let image_r = a.mul_vec(&self.modded);
        if rank_of(self.parent.field(), self.parent.dim(), &[self.modded.clone(), image_r]) != 1 {
            return Err(Error::InvalidQuotient("map does not preserve the modded line".into()));
        }
        let cols = self.lifts.iter().map(|e| self.project(&a.mul_vec(e))).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.parent.field(), &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f3(codes: &[u8]) -> Vector {
        Vector::from_codes(FieldId::F3, codes.to_vec()).unwrap()
    }

    fn random_vector(rng: &mut ChaCha8Rng, field: FieldId, dim: usize) -> Vector {
        let coords = (0..dim).map(|_| rng.random_range(0..field.order())).collect();
        Vector::from_codes(field, coords).unwrap()
    }

    #[test]
    fn symplectic_pairs_gram() {
        let s = make_space(FormKind::Symplectic, 4, &BasisPreset::SymplecticPairs).unwrap();
        let one = Scalar::one(FieldId::F2);
        assert_eq!(s.bilinear(&s.basis_vector(0), &s.basis_vector(1)).unwrap(), one);
        assert_eq!(s.bilinear(&s.basis_vector(2), &s.basis_vector(3)).unwrap(), one);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert!(s.bilinear(&s.basis_vector(i), &s.basis_vector(j)).unwrap().is_zero());
        }
    }

    #[test]
    fn presets_match_hand_bases() {
        let o = make_space(FormKind::OrthogonalF3, 3, &BasisPreset::F3Diagonal { last_negative: false }).unwrap();
        assert!(o.gram().is_identity());
        let a = make_space(FormKind::Symplectic, 4, &BasisPreset::AllOnesOffDiagonal).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a.gram().get(i, j), u8::from(i != j));
            }
        }
    }

    #[test]
    fn preset_configuration_errors() {
        assert!(make_space(FormKind::Symplectic, 3, &BasisPreset::SymplecticPairs).is_err());
        assert!(make_space(FormKind::Unitary, 3, &BasisPreset::SymplecticPairs).is_err());
        assert!(make_space(FormKind::OrthogonalF3, 0, &BasisPreset::F3Diagonal { last_negative: false }).is_err());
    }

    #[test]
    fn bilinear_examples() {
        let u = make_space(FormKind::Unitary, 2, &BasisPreset::UnitaryOrthonormal).unwrap();
        let v1 = u.basis_vector(0);
        let av1 = v1.scale(Scalar::alpha());
        assert_eq!(u.bilinear(&av1, &v1).unwrap(), Scalar::alpha());
        // conjugate-linear in the second slot
        assert_eq!(u.bilinear(&v1, &av1).unwrap(), Scalar::alpha().conjugate());
        let zero = Vector::zero(FieldId::F4, 2);
        assert!(u.bilinear(&v1, &zero).unwrap().is_zero());
        assert!(u.bilinear(&v1, &Vector::zero(FieldId::F4, 3)).is_err());
    }

    #[test]
    fn quadratic_examples() {
        let o = make_space(FormKind::OrthogonalF3, 3, &BasisPreset::F3Diagonal { last_negative: false }).unwrap();
        assert_eq!(o.quadratic(&f3(&[1, 2, 0])).unwrap(), Scalar::one(FieldId::F3));

        let gram = Matrix::from_rows(FieldId::F2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let h = FormSpace::new(FormKind::OrthogonalF2, gram, Some(vec![0, 0])).unwrap();
        let w = Vector::sum_of(FieldId::F2, 2, [1, 2]);
        assert_eq!(h.quadratic(&w).unwrap(), Scalar::one(FieldId::F2));

        let u = make_space(FormKind::Unitary, 3, &BasisPreset::UnitaryOrthonormal).unwrap();
        let s = Vector::sum_of(FieldId::F4, 3, [1, 2, 3]);
        assert_eq!(u.quadratic(&s).unwrap(), Scalar::one(FieldId::F4));

        let sp = make_space(FormKind::Symplectic, 2, &BasisPreset::SymplecticPairs).unwrap();
        assert!(matches!(sp.quadratic(&sp.basis_vector(0)), Err(Error::Unsupported(_))));
    }

    fn all_presets(max_dim: usize) -> Vec<FormSpace> {
        let mut out = Vec::new();
        for n in 1..=max_dim {
            if n % 2 == 0 {
                out.push(make_space(FormKind::Symplectic, n, &BasisPreset::SymplecticPairs).unwrap());
                out.push(make_space(FormKind::Symplectic, n, &BasisPreset::AllOnesOffDiagonal).unwrap());
            }
            out.push(make_space(FormKind::Unitary, n, &BasisPreset::UnitaryOrthonormal).unwrap());
            for last_negative in [false, true] {
                out.push(make_space(FormKind::OrthogonalF3, n, &BasisPreset::F3Diagonal { last_negative }).unwrap());
            }
            for eps in [Sign::Plus, Sign::Minus] {
                if let Ok(s) = make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2Hyperbolic { eps }) {
                    out.push(s);
                }
            }
            for (q, q_last) in [(0, 0), (1, 1), (0, 1)] {
                out.push(make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2AllOnes { q, q_last }).unwrap());
            }
        }
        out
    }

    #[test]
    fn symmetry_laws_on_basis_pairs() {
        for s in all_presets(6) {
            let f = s.field();
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    let a = s.bilinear(&s.basis_vector(i), &s.basis_vector(j)).unwrap().code();
                    let b = s.bilinear(&s.basis_vector(j), &s.basis_vector(i)).unwrap().code();
                    match s.kind() {
                        FormKind::Unitary => assert_eq!(a, f.conj(b)),
                        _ => assert_eq!(a, b),
                    }
                    if i == j && matches!(s.kind(), FormKind::Symplectic | FormKind::OrthogonalF2) {
                        assert_eq!(a, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn polar_identity_by_enumeration() {
        for s in all_presets(6).into_iter().filter(|s| s.kind() == FormKind::OrthogonalF2) {
            let all: Vec<Vector> = Vector::all(FieldId::F2, s.dim()).collect();
            for u in &all {
                for w in &all {
                    let lhs = s.quadratic(&u.add(w)).unwrap();
                    let rhs = s.quadratic(u).unwrap() + s.quadratic(w).unwrap() + s.bilinear(u, w).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn f3_quadratic_is_minus_norm() {
        let s = make_space(FormKind::OrthogonalF3, 4, &BasisPreset::F3Diagonal { last_negative: true }).unwrap();
        for v in Vector::all(FieldId::F3, 4) {
            let two = Scalar::new(FieldId::F3, 2).unwrap();
            assert_eq!(s.quadratic(&v).unwrap(), two * s.bilinear(&v, &v).unwrap());
        }
    }

    #[test]
    fn solve_linear_examples() {
        let s = make_space(FormKind::Symplectic, 4, &BasisPreset::SymplecticPairs).unwrap();
        let zero = Scalar::zero(FieldId::F2);
        let one = Scalar::one(FieldId::F2);
        let free = s.solve_linear(&[]).unwrap().unwrap();
        assert_eq!(free.kernel.len(), 4);

        let c = |idx: &[usize]| Vector::sum_of(FieldId::F2, 4, idx.iter().copied());
        let sol = s.solve_linear(&[(c(&[1, 2]), zero), (c(&[2, 3]), zero), (c(&[3, 4]), zero)]).unwrap().unwrap();
        let nonzero: Vec<Vector> = sol.iter().filter(|x| !x.is_zero()).collect();
        assert_eq!(nonzero, vec![c(&[1, 2, 3, 4])]);

        let v = c(&[1]);
        assert!(s.solve_linear(&[(v.clone(), zero), (v, one)]).unwrap().is_none());
    }

    #[test]
    fn radical_examples() {
        let s = make_space(FormKind::Symplectic, 8, &BasisPreset::AllOnesOffDiagonal).unwrap();
        let all = Vector::sum_of(FieldId::F2, 8, 1..=8);
        let w_prime = s.perp(&all).unwrap();
        let rad = s.radical(&w_prime).unwrap();
        assert_eq!(rad.dim(), 1);
        assert!(rad.contains(&all));

        assert_eq!(s.radical(&s.full_subspace()).unwrap().dim(), 0);

        let sp2 = make_space(FormKind::Symplectic, 2, &BasisPreset::SymplecticPairs).unwrap();
        let line = Subspace::new(&sp2, vec![sp2.basis_vector(0)]).unwrap();
        assert_eq!(sp2.radical(&line).unwrap().basis(), line.basis());
    }

    #[test]
    fn perp_quotient_dimensions() {
        let sp = make_space(FormKind::Symplectic, 8, &BasisPreset::AllOnesOffDiagonal).unwrap();
        let all = Vector::sum_of(FieldId::F2, 8, 1..=8);
        let q = sp.perp_quotient(&all, &all).unwrap();
        assert_eq!(q.induced().dim(), 6);
        assert_eq!(q.induced().kind(), FormKind::Symplectic);
        assert!(q.induced().is_nondegenerate());

        let u = make_space(FormKind::Unitary, 8, &BasisPreset::UnitaryOrthonormal).unwrap();
        let all4 = Vector::sum_of(FieldId::F4, 8, 1..=8);
        let qu = u.perp_quotient(&all4, &all4).unwrap();
        assert_eq!(qu.induced().dim(), 6);
        assert!(qu.induced().is_nondegenerate());

        let o = make_space(FormKind::OrthogonalF2, 8, &BasisPreset::F2AllOnes { q: 0, q_last: 0 }).unwrap();
        let qo = o.perp_quotient(&all, &all).unwrap();
        assert_eq!(qo.induced().dim(), 6);
        assert_eq!(qo.induced().orthogonal_type_f2().unwrap(), Sign::Plus);
    }

    #[test]
    fn perp_quotient_rejects_bad_input() {
        let sp = make_space(FormKind::Symplectic, 4, &BasisPreset::SymplecticPairs).unwrap();
        let v = sp.basis_vector(0);
        // v2 is not orthogonal to v1
        assert!(matches!(sp.perp_quotient(&v, &sp.basis_vector(1)), Err(Error::InvalidQuotient(_))));
        // v3 is orthogonal to v1 but not in the radical of v1^⊥
        assert!(matches!(sp.perp_quotient(&v, &sp.basis_vector(2)), Err(Error::InvalidQuotient(_))));
        assert!(sp.perp_quotient(&v, &Vector::zero(FieldId::F2, 4)).is_err());
        // all-ones with Q(w_i) = 1 in dim 4: Q(sum) = 4 + 6 = 0, fine; with dim 6: 6 + 15 = 1
        let o = make_space(FormKind::OrthogonalF2, 6, &BasisPreset::F2AllOnes { q: 0, q_last: 0 }).unwrap();
        let all = Vector::sum_of(FieldId::F2, 6, 1..=6);
        assert!(matches!(o.perp_quotient(&all, &all), Err(Error::InvalidQuotient(_))));
    }

    #[test]
    fn quotient_form_is_lift_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cases = vec![
            (
                make_space(FormKind::Symplectic, 8, &BasisPreset::AllOnesOffDiagonal).unwrap(),
                Vector::sum_of(FieldId::F2, 8, 1..=8),
            ),
            (
                make_space(FormKind::Unitary, 6, &BasisPreset::UnitaryOrthonormal).unwrap(),
                Vector::sum_of(FieldId::F4, 6, 1..=6),
            ),
            (
                make_space(FormKind::OrthogonalF2, 8, &BasisPreset::F2AllOnes { q: 0, q_last: 0 }).unwrap(),
                Vector::sum_of(FieldId::F2, 8, 1..=8),
            ),
            (
                make_space(FormKind::OrthogonalF3, 6, &BasisPreset::F3Diagonal { last_negative: false }).unwrap(),
                Vector::sum_of(FieldId::F3, 6, 1..=6),
            ),
        ];
        for (space, v) in cases {
            let q = space.perp_quotient(&v, &v).unwrap();
            let f = space.field();
            for _ in 0..100 {
                let y1 = random_vector(&mut rng, f, q.induced().dim());
                let y2 = random_vector(&mut rng, f, q.induced().dim());
                let c1 = rng.random_range(0..f.order());
                let c2 = rng.random_range(0..f.order());
                let mut x1 = q.section(&y1).unwrap();
                x1.axpy_code(c1, &v);
                let mut x2 = q.section(&y2).unwrap();
                x2.axpy_code(c2, &v);
                let induced = q.induced().bilinear(&y1, &y2).unwrap();
                assert_eq!(space.bilinear(&x1, &x2).unwrap(), induced);
                if space.has_quadratic_form() {
                    assert_eq!(space.quadratic(&x1).unwrap(), q.induced().quadratic(&y1).unwrap());
                }
                assert_eq!(q.project(&x1).unwrap(), y1);
            }
        }
    }

    #[test]
    fn orthogonal_type_examples() {
        let gram = Matrix::from_rows(FieldId::F2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let aniso = FormSpace::new(FormKind::OrthogonalF2, gram.clone(), Some(vec![1, 1])).unwrap();
        assert_eq!(aniso.orthogonal_type_f2().unwrap(), Sign::Minus);
        let hyper = FormSpace::new(FormKind::OrthogonalF2, gram, Some(vec![0, 0])).unwrap();
        assert_eq!(hyper.orthogonal_type_f2().unwrap(), Sign::Plus);

        let o12 = make_space(FormKind::OrthogonalF2, 12, &BasisPreset::F2AllOnes { q: 0, q_last: 0 }).unwrap();
        let all = Vector::sum_of(FieldId::F2, 12, 1..=12);
        let q = o12.perp_quotient(&all, &all).unwrap();
        assert_eq!(q.induced().orthogonal_type_f2().unwrap(), Sign::Minus);

        let odd = make_space(FormKind::OrthogonalF2, 3, &BasisPreset::F2Hyperbolic { eps: Sign::Plus }).unwrap();
        assert!(matches!(odd.orthogonal_type_f2(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn orthogonal_sums_of_planes_alternate_type() {
        // hyperbolic (+) and anisotropic (-) planes; types multiply
        for planes in 1..=4usize {
            for aniso_mask in 0..(1u32 << planes) {
                let n = 2 * planes;
                let mut rows = vec![vec![0u8; n]; n];
                let mut q = vec![0u8; n];
                for k in 0..planes {
                    rows[2 * k][2 * k + 1] = 1;
                    rows[2 * k + 1][2 * k] = 1;
                    if aniso_mask >> k & 1 == 1 {
                        q[2 * k] = 1;
                        q[2 * k + 1] = 1;
                    }
                }
                let s = FormSpace::new(FormKind::OrthogonalF2, Matrix::from_rows(FieldId::F2, &rows).unwrap(), Some(q))
                    .unwrap();
                let expected = if aniso_mask.count_ones() % 2 == 0 { Sign::Plus } else { Sign::Minus };
                assert_eq!(s.orthogonal_type_f2().unwrap(), expected);
            }
        }
    }

    #[test]
    fn hyperbolic_preset_has_requested_type() {
        for n in (2..=12).step_by(2) {
            for eps in [Sign::Plus, Sign::Minus] {
                let s = make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2Hyperbolic { eps }).unwrap();
                assert_eq!(s.orthogonal_type_f2().unwrap(), eps, "n={n}");
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let plus = make_space(FormKind::OrthogonalF3, 4, &BasisPreset::F3Diagonal { last_negative: false }).unwrap();
        assert_eq!(plus.discriminant_f3().unwrap(), Sign::Plus);
        let minus = make_space(FormKind::OrthogonalF3, 4, &BasisPreset::F3Diagonal { last_negative: true }).unwrap();
        assert_eq!(minus.discriminant_f3().unwrap(), Sign::Minus);
        let singular = FormSpace::new(
            FormKind::OrthogonalF3,
            Matrix::from_rows(FieldId::F3, &[vec![1, 1], vec![1, 1]]).unwrap(),
            None,
        )
        .unwrap();
        assert!(matches!(singular.discriminant_f3(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn discriminant_is_basis_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for last_negative in [false, true] {
            let s = make_space(FormKind::OrthogonalF3, 4, &BasisPreset::F3Diagonal { last_negative }).unwrap();
            let mu = s.discriminant_f3().unwrap();
            let mut done = 0;
            while done < 50 {
                let cols: Vec<Vector> = (0..4).map(|_| random_vector(&mut rng, FieldId::F3, 4)).collect();
                let p = Matrix::from_columns(FieldId::F3, &cols);
                if p.determinant() == 0 {
                    continue;
                }
                let g2 = p.transpose().mul(s.gram()).mul(&p);
                let t = FormSpace::new(FormKind::OrthogonalF3, g2, None).unwrap();
                assert_eq!(t.discriminant_f3().unwrap(), mu);
                done += 1;
            }
        }
    }
}
