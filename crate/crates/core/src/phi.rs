//! Group families, the closed-form values of `φ`, and the search oracle.
//!
//! `φ(G)` is the largest `n` with `S_n ≤ G` and transpositions of `S_n`
//! landing in `D`. Two sets of closed forms are kept apart: the per-family
//! propositions, and the summary theorem that restates them. They disagree in
//! a few small cases, and the search decides.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chains::{max_chain, Chain, SearchOptions, SymmetryMode};
use crate::error::{Error, Result};
use crate::formspace::{make_space, BasisPreset, FormKind, FormSpace, Sign};
use crate::transpositions::ClassSpec;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    Symmetric {
        n: usize,
    },
    Symplectic {
        n: usize,
    },
    Unitary {
        n: usize,
    },
    OrthogonalF2 {
        n: usize,
        eps: Sign,
    },
    /// Projective orthogonal group over F3: `mu` is the type of the space,
    /// `pi` the value `Q(v) = π` picking the reflection class.
    OrthogonalF3 {
        n: usize,
        mu: Sign,
        pi: Sign,
    },
    /// Fischer's sporadic groups `Fi22`, `Fi23`, `Fi24`.
    Fischer {
        n: usize,
    },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupSpec::Symmetric { n } => write!(f, "S({n})"),
            GroupSpec::Symplectic { n } => write!(f, "Sp({n})"),
            GroupSpec::Unitary { n } => write!(f, "U({n})"),
            GroupSpec::OrthogonalF2 { n, eps } => write!(f, "O{eps}({n},2)"),
            GroupSpec::OrthogonalF3 { n, mu, pi } => write!(f, "PO{mu}{pi}({n},3)"),
            GroupSpec::Fischer { n } => write!(f, "Fi{n}"),
        }
    }
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::OutOfRange(format!("{self}: {why}")));
        match *self {
            GroupSpec::Symmetric { n } | GroupSpec::Unitary { n } | GroupSpec::OrthogonalF3 { n, .. } if n < 1 => {
                bad("dimension must be at least 1")
            }
            GroupSpec::Symplectic { n } if n < 2 || n % 2 != 0 => bad("needs even dimension ≥ 2"),
            GroupSpec::OrthogonalF2 { n, .. } if n < 2 => bad("needs dimension ≥ 2"),
            GroupSpec::Fischer { n } if !(22..=24).contains(&n) => bad("Fischer groups are Fi22, Fi23, Fi24"),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            GroupSpec::Symmetric { n }
            | GroupSpec::Symplectic { n }
            | GroupSpec::Unitary { n }
            | GroupSpec::OrthogonalF2 { n, .. }
            | GroupSpec::OrthogonalF3 { n, .. }
            | GroupSpec::Fischer { n } => n,
        }
    }

    /// Groups given by a form space, as opposed to `S_n` and the sporadics.
    pub fn is_classical(&self) -> bool {
        !matches!(self, GroupSpec::Symmetric { .. } | GroupSpec::Fischer { .. })
    }
}

/// Rewrites a spec into its representative under the standard isomorphisms:
/// odd-dimensional `O(n, 2)` is `Sp(n-1)`, and over F3 the reflection class is
/// moved to `π = +` (flipping `μ` too in odd dimension).
pub fn normalize_spec(spec: GroupSpec) -> GroupSpec {
    match spec {
        GroupSpec::OrthogonalF2 { n, .. } if n % 2 == 1 => GroupSpec::Symplectic { n: n - 1 },
        GroupSpec::OrthogonalF3 { n, mu, pi: Sign::Minus } => {
            let mu = if n % 2 == 1 { mu.flip() } else { mu };
            GroupSpec::OrthogonalF3 { n, mu, pi: Sign::Plus }
        }
        other => other,
    }
}

/// The preset space and class the search runs on. The spec is realized as
/// given, without normalizing.
pub fn realize(spec: GroupSpec) -> Result<(FormSpace, ClassSpec)> {
    spec.validate()?;
    match spec {
        GroupSpec::Symplectic { n } => {
            Ok((make_space(FormKind::Symplectic, n, &BasisPreset::SymplecticPairs)?, ClassSpec::Symplectic))
        }
        GroupSpec::Unitary { n } => {
            Ok((make_space(FormKind::Unitary, n, &BasisPreset::UnitaryOrthonormal)?, ClassSpec::Unitary))
        }
        GroupSpec::OrthogonalF2 { n, eps } => {
            Ok((make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2Hyperbolic { eps })?, ClassSpec::OrthogonalF2))
        }
        GroupSpec::OrthogonalF3 { n, mu, pi } => Ok((
            make_space(FormKind::OrthogonalF3, n, &BasisPreset::F3Diagonal { last_negative: mu == Sign::Minus })?,
            ClassSpec::OrthogonalF3 { pi },
        )),
        GroupSpec::Symmetric { .. } | GroupSpec::Fischer { .. } => {
            Err(Error::Unsupported(format!("{spec} has no form space")))
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaSource {
    /// The per-family propositions.
    Propositions,
    /// The summary theorem at the end.
    Conclusion,
}

impl FormulaSource {
    pub fn tag(self) -> &'static str {
        match self {
            FormulaSource::Propositions => "formula-props",
            FormulaSource::Conclusion => "formula-conclusion",
        }
    }
}

/// Closed-form `φ`. The spec is normalized first.
pub fn phi_formula(spec: GroupSpec, source: FormulaSource) -> Result<usize> {
    spec.validate()?;
    let props = source == FormulaSource::Propositions;
    Ok(match normalize_spec(spec) {
        GroupSpec::Symmetric { n } => n,
        GroupSpec::Symplectic { n } => {
            if n == 2 {
                3
            } else {
                n + 2
            }
        }
        GroupSpec::Unitary { n } => match n {
            1..=3 if props => [1, 3, 3][n - 1],
            1..=3 => n,
            _ if n % 2 == 1 => n + 1,
            _ => n + 2,
        },
        GroupSpec::OrthogonalF3 { n, mu: Sign::Plus, .. } => match n {
            1 | 2 if props => n,
            _ if n % 3 == 1 => n,
            _ => n + 1,
        },
        GroupSpec::OrthogonalF3 { n, .. } => match (n, n % 3) {
            (1..=3, _) if props => 2,
            (_, 1) => n + 2,
            (_, 2) if props => n + 1,
            (_, 2) => n,
            _ if props => n,
            _ => n + 1,
        },
        GroupSpec::OrthogonalF2 { n, eps: Sign::Plus } => match n {
            2 => 2,
            4 => 3,
            _ if n % 4 == 0 => n + 1,
            _ if n % 8 == 2 => n,
            _ => n + 2,
        },
        GroupSpec::OrthogonalF2 { n, eps: Sign::Minus } => match n {
            2 => 3,
            _ if n % 4 == 0 => n + 1,
            _ if n % 8 == 6 => n,
            _ => n + 2,
        },
        GroupSpec::Fischer { n } => {
            if n == 22 {
                10
            } else {
                12
            }
        }
    })
}

/// Formula values and the search value for one spec.
#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub spec: GroupSpec,
    pub normalized: GroupSpec,
    pub phi_proposition: usize,
    pub phi_conclusion: usize,
    pub phi_search: Option<usize>,
    pub witness: Option<Chain>,
    pub nodes_explored: Option<u64>,
    pub symmetry: Option<SymmetryMode>,
}

impl PhiReport {
    pub fn sources_agree(&self) -> bool {
        self.phi_proposition == self.phi_conclusion
    }

    pub fn search_matches_propositions(&self) -> Option<bool> {
        self.phi_search.map(|s| s == self.phi_proposition)
    }

    pub fn search_matches_conclusion(&self) -> Option<bool> {
        self.phi_search.map(|s| s == self.phi_conclusion)
    }

    /// Any two of the three values differ.
    pub fn is_discrepancy(&self) -> bool {
        !self.sources_agree() || self.search_matches_propositions() == Some(false)
    }
}

/// Options used by the oracle: orbit reduction, where every skipped subtree
/// is backed by a verified isometry.
pub fn oracle_options() -> SearchOptions {
    SearchOptions::with_symmetry(SymmetryMode::Orbit)
}

/// `φ` by exhaustive search on the realized spec (not normalized), with the
/// outcome of the search. `S_n` returns `n` without searching.
pub fn phi_search(spec: GroupSpec, options: &SearchOptions) -> Result<(usize, Option<crate::chains::SearchOutcome>)> {
    spec.validate()?;
    match spec {
        GroupSpec::Symmetric { n } => Ok((n, None)),
        GroupSpec::Fischer { .. } => {
            Err(Error::Unsupported(format!("{spec}: no chain search inside the sporadic groups")))
        }
        _ => {
            let (space, class) = realize(spec)?;
            let out = max_chain(&space, class, options)?;
            Ok((out.max_length + 1, Some(out)))
        }
    }
}

pub fn phi_bruteforce(spec: GroupSpec) -> Result<PhiReport> {
    phi_bruteforce_with(spec, &oracle_options())
}

/// Normalizes, searches the normalized spec and fills in both formulas.
pub fn phi_bruteforce_with(spec: GroupSpec, options: &SearchOptions) -> Result<PhiReport> {
    let normalized = normalize_spec(spec);
    let (value, outcome) = phi_search(normalized, options)?;
    Ok(PhiReport {
        spec,
        normalized,
        phi_proposition: phi_formula(spec, FormulaSource::Propositions)?,
        phi_conclusion: phi_formula(spec, FormulaSource::Conclusion)?,
        phi_search: Some(value),
        nodes_explored: outcome.as_ref().map(|o| o.nodes_explored),
        symmetry: outcome.as_ref().map(|o| o.symmetry),
        witness: outcome.map(|o| o.witness),
    })
}

/// Formula values only.
pub fn phi_formulas(spec: GroupSpec) -> Result<PhiReport> {
    Ok(PhiReport {
        spec,
        normalized: normalize_spec(spec),
        phi_proposition: phi_formula(spec, FormulaSource::Propositions)?,
        phi_conclusion: phi_formula(spec, FormulaSource::Conclusion)?,
        phi_search: None,
        witness: None,
        nodes_explored: None,
        symmetry: None,
    })
}

/// Normalized classical specs of dimension at most `max_dim`, in a fixed
/// order.
pub fn classical_specs(max_dim: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for n in (2..=max_dim).step_by(2) {
        out.push(GroupSpec::Symplectic { n });
    }
    for n in 1..=max_dim {
        out.push(GroupSpec::Unitary { n });
    }
    for n in (2..=max_dim).step_by(2) {
        for eps in [Sign::Plus, Sign::Minus] {
            out.push(GroupSpec::OrthogonalF2 { n, eps });
        }
    }
    for n in 1..=max_dim {
        for mu in [Sign::Plus, Sign::Minus] {
            out.push(GroupSpec::OrthogonalF3 { n, mu, pi: Sign::Plus });
        }
    }
    out
}

/// Specs in `classical_specs(max_dim)` where the two formula sources differ.
pub fn documented_conflicts(max_dim: usize) -> Vec<GroupSpec> {
    classical_specs(max_dim)
        .into_iter()
        .filter(|&s| phi_formula(s, FormulaSource::Propositions).ok() != phi_formula(s, FormulaSource::Conclusion).ok())
        .collect()
}

/// One spec where the propositions, the summary theorem and the search do
/// not all agree. The search value wins.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyRecord {
    pub spec: GroupSpec,
    pub phi_proposition: usize,
    pub phi_conclusion: usize,
    pub phi_search: usize,
    pub winner: usize,
    /// Which formula sources the search sided with.
    pub search_agrees_with: Vec<FormulaSource>,
}

impl DiscrepancyRecord {
    pub fn from_report(r: &PhiReport) -> Option<DiscrepancyRecord> {
        let s = r.phi_search?;
        if !r.is_discrepancy() {
            return None;
        }
        let mut agrees = Vec::new();
        if s == r.phi_proposition {
            agrees.push(FormulaSource::Propositions);
        }
        if s == r.phi_conclusion {
            agrees.push(FormulaSource::Conclusion);
        }
        Some(DiscrepancyRecord {
            spec: r.spec,
            phi_proposition: r.phi_proposition,
            phi_conclusion: r.phi_conclusion,
            phi_search: s,
            winner: s,
            search_agrees_with: agrees,
        })
    }
}

/// Oracle reports for every normalized classical spec up to `max_dim`.
pub fn phi_table(max_dim: usize, options: &SearchOptions) -> Result<Vec<PhiReport>> {
    classical_specs(max_dim).into_iter().map(|s| phi_bruteforce_with(s, options)).collect()
}

pub fn discrepancy_report(max_dim: usize) -> Result<Vec<DiscrepancyRecord>> {
    Ok(phi_table(max_dim, &oracle_options())?.iter().filter_map(DiscrepancyRecord::from_report).collect())
}

/// Keeps the specs with `φ ≤ 12`, using the propositions' value except where
/// a discrepancy record supplies the search value.
#[derive(Clone, Debug, Serialize)]
pub struct FilterReport {
    pub kept: Vec<GroupSpec>,
    pub rejected: Vec<GroupSpec>,
    /// Specs whose value came from a discrepancy record, with both values.
    pub corrections: Vec<(GroupSpec, usize, usize)>,
}

pub const FISCHER_BOUND: usize = 12;

pub fn fischer_filter(specs: &[GroupSpec], records: &[DiscrepancyRecord]) -> Result<FilterReport> {
    let mut out = FilterReport { kept: Vec::new(), rejected: Vec::new(), corrections: Vec::new() };
    for &spec in specs {
        let formula = phi_formula(spec, FormulaSource::Propositions)?;
        let norm = normalize_spec(spec);
        let value = match records.iter().find(|r| normalize_spec(r.spec) == norm) {
            Some(r) => {
                if r.winner != formula {
                    out.corrections.push((spec, formula, r.winner));
                }
                r.winner
            }
            None => formula,
        };
        if value <= FISCHER_BOUND {
            out.kept.push(spec);
        } else {
            out.rejected.push(spec);
        }
    }
    Ok(out)
}

/// Every spec the filter is run over: `S_n`, the classical families up to
/// `max_dim` in all sign combinations, and the three sporadics.
pub fn filter_universe(max_dim: usize) -> Vec<GroupSpec> {
    let mut out: Vec<GroupSpec> = (1..=max_dim).map(|n| GroupSpec::Symmetric { n }).collect();
    out.extend((2..=max_dim).step_by(2).map(|n| GroupSpec::Symplectic { n }));
    out.extend((1..=max_dim).map(|n| GroupSpec::Unitary { n }));
    for n in 2..=max_dim {
        for eps in [Sign::Plus, Sign::Minus] {
            out.push(GroupSpec::OrthogonalF2 { n, eps });
        }
    }
    for n in 1..=max_dim {
        for mu in [Sign::Plus, Sign::Minus] {
            for pi in [Sign::Plus, Sign::Minus] {
                out.push(GroupSpec::OrthogonalF3 { n, mu, pi });
            }
        }
    }
    out.extend([22, 23, 24].map(|n| GroupSpec::Fischer { n }));
    out
}
