//! Permutation-module embeddings `S_n → G`.
//!
//! `S_n` permutes a basis `w_1, …, w_n` of an ambient space `W`. Where the
//! construction divides out, the action is restricted to `W' = v^⊥` and
//! pushed down to `W' / <v>`. The transposition `(i, i+1)` acts as the
//! class element `t(w_i ± w_{i+1})`.

use std::fmt;

use serde::Serialize;

use crate::chains::{chain_to_sn_embedding, is_chain};
use crate::error::{Error, Result};
use crate::formspace::{make_space, BasisPreset, FormKind, FormSpace, QuotientSpace, Sign};
use crate::gf::FieldId;
use crate::matrix::Matrix;
use crate::perm::{coxeter_relations, full_injectivity, kernel_check, InjectivityCheck, KernelCheck, RelationCheck};
use crate::phi::{normalize_spec, oracle_options, phi_search, GroupSpec};
use crate::transpositions::{in_class_d, matrix_of, ClassSpec};
use crate::vector::Vector;

/// Largest `n` for which the `n!` images are enumerated.
pub const FULL_ENUMERATION_LIMIT: usize = 7;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingTarget {
    /// Symplectic, all-ones form, divided by `w_1 + … + w_n`.
    Sp,
    /// Unitary, orthonormal basis, divided by `w_1 + … + w_n`.
    U,
    /// F3, `n + 1` dimensional, landing in `PO^{+,+}(n-1)`.
    Po3a,
    /// F3, `n` dimensional, landing in `PO^{-,+}(n-2)`.
    Po3b,
    /// F2 orthogonal, depending on `n mod 4`.
    O2,
}

impl std::str::FromStr for EmbeddingTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sp" => Ok(EmbeddingTarget::Sp),
            "u" => Ok(EmbeddingTarget::U),
            "po3a" => Ok(EmbeddingTarget::Po3a),
            "po3b" => Ok(EmbeddingTarget::Po3b),
            "o2" => Ok(EmbeddingTarget::O2),
            _ => Err(Error::Config(format!("unknown embedding target `{s}`"))),
        }
    }
}

impl fmt::Display for EmbeddingTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EmbeddingTarget::Sp => "sp",
            EmbeddingTarget::U => "u",
            EmbeddingTarget::Po3a => "po3a",
            EmbeddingTarget::Po3b => "po3b",
            EmbeddingTarget::O2 => "o2",
        };
        f.write_str(s)
    }
}

pub const ALL_TARGETS: [EmbeddingTarget; 5] =
    [EmbeddingTarget::Sp, EmbeddingTarget::U, EmbeddingTarget::Po3a, EmbeddingTarget::Po3b, EmbeddingTarget::O2];

/// Whether the construction is defined for `n`.
pub fn admissible(n: usize, target: EmbeddingTarget) -> bool {
    n >= 5
        && match target {
            EmbeddingTarget::Sp | EmbeddingTarget::U => n % 2 == 0,
            EmbeddingTarget::Po3a => n % 3 != 2,
            EmbeddingTarget::Po3b => n % 3 == 0,
            EmbeddingTarget::O2 => n % 4 != 3,
        }
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub n: usize,
    pub construction: EmbeddingTarget,
    /// Which preset was used when a construction has several.
    pub variant: String,
    pub target: GroupSpec,
    #[serde(skip)]
    pub ambient: FormSpace,
    #[serde(skip)]
    pub quotient: Option<QuotientSpace>,
    /// The space `S_n` acts on: the quotient, or the ambient space.
    #[serde(skip)]
    pub space: FormSpace,
    pub class: ClassSpec,
    /// Coordinate swaps `w_i ↔ w_{i+1}` on the ambient space.
    #[serde(skip)]
    pub ambient_generators: Vec<Matrix>,
    /// Images of `(i, i+1)` on `space`.
    #[serde(skip)]
    pub generators: Vec<Matrix>,
    /// `w_i ± w_{i+1}` in `space` coordinates.
    pub class_vectors: Vec<Vector>,
}

fn swap_matrix(field: FieldId, dim: usize, i: usize) -> Matrix {
    let mut m = Matrix::identity(field, dim);
    m.set(i, i, 0);
    m.set(i + 1, i + 1, 0);
    m.set(i, i + 1, 1);
    m.set(i + 1, i, 1);
    m
}

struct Blueprint {
    variant: String,
    ambient: FormSpace,
    /// `None` when the action is on the ambient space itself.
    modded: Option<Vector>,
    class: ClassSpec,
    /// `w_i - w_{i+1}` instead of `w_i + w_{i+1}`.
    minus: bool,
    /// Claimed target, with the F2 type left open where the construction
    /// does not name it.
    target: GroupSpec,
}

fn blueprints(n: usize, target: EmbeddingTarget) -> Result<Vec<Blueprint>> {
    if !admissible(n, target) {
        return Err(Error::OutOfRange(format!("construction {target} is not defined for n = {n}")));
    }
    let all = |field, dim, range: std::ops::RangeInclusive<usize>| Vector::sum_of(field, dim, range);
    let one = |variant: &str, ambient: FormSpace, modded, class, minus, target| {
        Ok(vec![Blueprint { variant: variant.into(), ambient, modded, class, minus, target }])
    };
    match target {
        EmbeddingTarget::Sp => one(
            "all-ones form",
            make_space(FormKind::Symplectic, n, &BasisPreset::AllOnesOffDiagonal)?,
            Some(all(FieldId::F2, n, 1..=n)),
            ClassSpec::Symplectic,
            false,
            GroupSpec::Symplectic { n: n - 2 },
        ),
        EmbeddingTarget::U => one(
            "orthonormal",
            make_space(FormKind::Unitary, n, &BasisPreset::UnitaryOrthonormal)?,
            Some(all(FieldId::F4, n, 1..=n)),
            ClassSpec::Unitary,
            false,
            GroupSpec::Unitary { n: n - 2 },
        ),
        EmbeddingTarget::Po3a => {
            // Q(w_i) = -1 for i ≤ n, Q(w_{n+1}) = 1
            let w = make_space(FormKind::OrthogonalF3, n + 1, &BasisPreset::F3Diagonal { last_negative: true })?;
            let v = if n % 3 == 0 { all(FieldId::F3, n + 1, 1..=n) } else { all(FieldId::F3, n + 1, 1..=n + 1) };
            one(
                if n % 3 == 0 { "v = w_1+…+w_n" } else { "v = w_1+…+w_{n+1}" },
                w,
                Some(v),
                ClassSpec::OrthogonalF3 { pi: Sign::Plus },
                true,
                GroupSpec::OrthogonalF3 { n: n - 1, mu: Sign::Plus, pi: Sign::Plus },
            )
        }
        EmbeddingTarget::Po3b => one(
            "orthonormal",
            make_space(FormKind::OrthogonalF3, n, &BasisPreset::F3Diagonal { last_negative: false })?,
            Some(all(FieldId::F3, n, 1..=n)),
            ClassSpec::OrthogonalF3 { pi: Sign::Plus },
            true,
            GroupSpec::OrthogonalF3 { n: n - 2, mu: Sign::Minus, pi: Sign::Plus },
        ),
        EmbeddingTarget::O2 => match n % 4 {
            0 => {
                let eps = if n % 8 == 4 { Sign::Minus } else { Sign::Plus };
                one(
                    "Q(w_i) = 0",
                    make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2AllOnes { q: 0, q_last: 0 })?,
                    Some(all(FieldId::F2, n, 1..=n)),
                    ClassSpec::OrthogonalF2,
                    false,
                    GroupSpec::OrthogonalF2 { n: n - 2, eps },
                )
            }
            2 => [0u8, 1]
                .into_iter()
                .map(|q| {
                    let ambient = make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2AllOnes { q, q_last: q })?;
                    let eps = ambient.orthogonal_type_f2()?;
                    Ok(Blueprint {
                        variant: format!("Q(w_i) = {q}"),
                        ambient,
                        modded: None,
                        class: ClassSpec::OrthogonalF2,
                        minus: false,
                        target: GroupSpec::OrthogonalF2 { n, eps },
                    })
                })
                .collect(),
            _ => {
                // Q(w_1 + … + w_{n+1}) must vanish, which forces the two
                // values below; the type of the quotient is whatever it is
                [(0u8, 1u8), (1, 0)]
                    .into_iter()
                    .map(|(q, q_last)| {
                        let ambient = make_space(FormKind::OrthogonalF2, n + 1, &BasisPreset::F2AllOnes { q, q_last })?;
                        let v = all(FieldId::F2, n + 1, 1..=n + 1);
                        let quotient = ambient.perp_quotient(&v, &v)?;
                        let eps = quotient.induced().orthogonal_type_f2()?;
                        Ok(Blueprint {
                            variant: format!("Q(w_i) = {q}, Q(w_{{n+1}}) = {q_last}"),
                            ambient,
                            modded: Some(v),
                            class: ClassSpec::OrthogonalF2,
                            minus: false,
                            target: GroupSpec::OrthogonalF2 { n: n - 1, eps },
                        })
                    })
                    .collect()
            }
        },
    }
}

fn build(n: usize, construction: EmbeddingTarget, bp: Blueprint) -> Result<EmbeddingReport> {
    let f = bp.ambient.field();
    let dim = bp.ambient.dim();
    let ambient_generators: Vec<Matrix> = (0..n - 1).map(|i| swap_matrix(f, dim, i)).collect();
    let raw: Vec<Vector> =
        (1..n).map(|i| Vector::from_terms(f, dim, &[(i, 1), (i + 1, if bp.minus { f.neg(1) } else { 1 })])).collect();
    let (space, quotient, generators, class_vectors) = match &bp.modded {
        Some(v) => {
            let q = bp.ambient.perp_quotient(v, v)?;
            let gens = ambient_generators.iter().map(|g| q.induced_action(g)).collect::<Result<Vec<_>>>()?;
            let vs = raw.iter().map(|x| q.project(x)).collect::<Result<Vec<_>>>()?;
            (q.induced().clone(), Some(q), gens, vs)
        }
        None => (bp.ambient.clone(), None, ambient_generators.clone(), raw),
    };
    Ok(EmbeddingReport {
        n,
        construction,
        variant: bp.variant,
        target: bp.target,
        ambient: bp.ambient,
        quotient,
        space,
        class: bp.class,
        ambient_generators,
        generators,
        class_vectors,
    })
}

/// Builds every variant of a construction for `n`. Most constructions have
/// one; orthogonal F2 with `n ≡ 1, 2 (mod 4)` has two.
pub fn embed_symmetric(n: usize, target: EmbeddingTarget) -> Result<Vec<EmbeddingReport>> {
    blueprints(n, target)?.into_iter().map(|bp| build(n, target, bp)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingChecks {
    pub clauses: Vec<ClauseResult>,
    pub relations: RelationCheck,
    pub kernel: KernelCheck,
    pub injectivity: Option<InjectivityCheck>,
}

impl EmbeddingChecks {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.clauses.iter().filter(|c| !c.passed).map(|c| c.clause).collect()
    }

    pub fn into_result(self) -> Result<EmbeddingChecks> {
        match self.clauses.iter().find(|c| !c.passed) {
            Some(c) => Err(Error::CheckFailed { clause: c.clause.into(), detail: c.detail.clone() }),
            None => Ok(self),
        }
    }
}

/// Re-runs every check on a report. With `full_injectivity`, all `n!`
/// images are listed when `n` is at most [`FULL_ENUMERATION_LIMIT`].
pub fn verify_embedding(report: &EmbeddingReport, full_injectivity_check: bool) -> Result<EmbeddingChecks> {
    let space = &report.space;
    let gens = &report.generators;
    if gens.len() + 1 != report.n || report.class_vectors.len() != gens.len() {
        return Err(Error::Config("report has the wrong number of generators".into()));
    }
    let mut clauses = Vec::new();
    let mut push = |clause, passed, detail: String| clauses.push(ClauseResult { clause, passed, detail });

    let bad_iso: Vec<usize> = (0..gens.len()).filter(|&i| !space.is_isometry(&gens[i])).map(|i| i + 1).collect();
    push("form", bad_iso.is_empty(), format!("generators not preserving the form: {bad_iso:?}"));

    let relations = coxeter_relations(gens);
    push("relations", relations.all(), format!("{relations:?}"));

    let mut bad_d = Vec::new();
    for (i, (g, v)) in gens.iter().zip(&report.class_vectors).enumerate() {
        let ok = in_class_d(space, report.class, v) && matrix_of(space, report.class, v).is_ok_and(|m| &m == g);
        if !ok {
            bad_d.push(i + 1);
        }
    }
    let chain = is_chain(space, report.class, &report.class_vectors)?;
    push(
        "class",
        bad_d.is_empty() && chain.is_valid(),
        format!("generators that are not t(w_i ± w_(i+1)) in D: {bad_d:?}; chain: {:?}", chain.violation),
    );

    let kernel = kernel_check(gens);
    let injectivity = if full_injectivity_check && report.n <= FULL_ENUMERATION_LIMIT && relations.all() {
        Some(full_injectivity(gens, FULL_ENUMERATION_LIMIT)?)
    } else {
        None
    };
    let faithful = kernel.faithful() && injectivity.as_ref().is_none_or(|c| c.injective());
    push("faithfulness", faithful, format!("{kernel:?} {injectivity:?}"));

    let (type_ok, detail) = type_check(report);
    push("type", type_ok, detail);

    Ok(EmbeddingChecks { clauses, relations, kernel, injectivity })
}

fn type_check(report: &EmbeddingReport) -> (bool, String) {
    let space = &report.space;
    let dim_ok = space.dim() == report.target.dim() && space.is_nondegenerate();
    let detail = format!("acting space has dimension {} (target {})", space.dim(), report.target);
    let inner = match report.target {
        GroupSpec::OrthogonalF2 { eps, .. } => match space.orthogonal_type_f2() {
            Ok(t) => (t == eps, format!("type {t}, claimed {eps}")),
            Err(e) => (false, e.to_string()),
        },
        GroupSpec::OrthogonalF3 { mu, pi, .. } => match space.discriminant_f3() {
            Ok(d) => {
                (d == mu && report.class == ClassSpec::OrthogonalF3 { pi }, format!("discriminant {d}, claimed {mu}"))
            }
            Err(e) => (false, e.to_string()),
        },
        _ => (true, String::new()),
    };
    (dim_ok && inner.0, format!("{detail}; {}", inner.1))
}

/// Gram matrix of the first F3 construction in the basis used by hand:
/// `w_1 - w_i` (`i = 2..n`) when `n ≡ 1 (mod 3)`, and `w_1 - w_i`
/// (`i = 2..n-1`) followed by `w_{n+1}` when `n ≡ 0 (mod 3)`.
#[derive(Clone, Debug, Serialize)]
pub struct GramAnalysis {
    pub n: usize,
    pub gram: Matrix,
    pub determinant: u8,
    pub rank_minus_identity: usize,
    pub square_of_minus_identity_is_zero: bool,
    /// The listed vectors stay independent in the quotient.
    pub basis_of_quotient: bool,
}

impl GramAnalysis {
    /// The identities claimed for this residue.
    pub fn matches_claim(&self) -> bool {
        let shape = if self.n % 3 == 1 { self.square_of_minus_identity_is_zero } else { self.rank_minus_identity == 2 };
        shape && self.determinant == 1 && self.basis_of_quotient
    }
}

pub fn f3_gram_analysis(n: usize) -> Result<GramAnalysis> {
    let report = embed_symmetric(n, EmbeddingTarget::Po3a)?.remove(0);
    let f = FieldId::F3;
    let dim = n + 1;
    let mut basis: Vec<Vector> = Vec::new();
    let upto = if n % 3 == 1 { n } else { n - 1 };
    for i in 2..=upto {
        basis.push(Vector::from_terms(f, dim, &[(1, 1), (i, 2)]));
    }
    if n % 3 == 0 {
        basis.push(Vector::unit(f, dim, n));
    }
    let w = &report.ambient;
    let k = basis.len();
    let mut gram = Matrix::zeros(f, k, k);
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, w.bilinear(&basis[i], &basis[j])?.code());
        }
    }
    let q = report.quotient.as_ref().expect("first F3 construction divides out");
    let projected = basis.iter().map(|b| q.project(b)).collect::<Result<Vec<_>>>()?;
    let basis_of_quotient = k == q.induced().dim() && crate::matrix::rank_of(f, k, &projected) == k;
    let a_minus_i = gram.sub(&Matrix::identity(f, k));
    Ok(GramAnalysis {
        n,
        determinant: gram.determinant(),
        rank_minus_identity: a_minus_i.rank(),
        square_of_minus_identity_is_zero: a_minus_i.mul(&a_minus_i).is_zero(),
        basis_of_quotient,
        gram,
    })
}

/// A way `S_φ` was found inside the group.
#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub spec: GroupSpec,
    pub phi_search: usize,
    /// Permutation-module constructions of `S_φ` landing in the spec.
    pub constructions: Vec<String>,
    /// Whether the search witness chain gives a faithful `S_φ`.
    pub chain_embedding: bool,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.chain_embedding || !self.constructions.is_empty()
    }
}

/// Checks that `S_φ`, with `φ` from the search, sits inside the group: by a
/// permutation-module construction when one lands in the (normalized) spec,
/// and by the representation generated by the search witness.
pub fn embedding_phi_consistency(spec: GroupSpec) -> Result<ConsistencyReport> {
    let norm = normalize_spec(spec);
    let (phi, outcome) = phi_search(norm, &oracle_options())?;
    let mut constructions = Vec::new();
    for target in ALL_TARGETS {
        if !admissible(phi, target) {
            continue;
        }
        for report in embed_symmetric(phi, target)? {
            if normalize_spec(report.target) == norm && verify_embedding(&report, false)?.passed() {
                constructions.push(format!("{target} n={phi} ({})", report.variant));
            }
        }
    }
    let chain_embedding = match outcome {
        Some(o) if o.max_length > 0 => {
            let (space, _) = crate::phi::realize(norm)?;
            chain_to_sn_embedding(&space, &o.witness, None)?.faithful()
        }
        _ => false,
    };
    Ok(ConsistencyReport { spec, phi_search: phi, constructions, chain_embedding })
}
