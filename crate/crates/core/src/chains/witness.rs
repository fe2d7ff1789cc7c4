//! The explicit chains written out in the hand proofs, transcribed in the
//! bases those proofs use.

use serde::{Deserialize, Serialize};

use super::{is_chain, ChainCheck};
use crate::error::{Error, Result};
use crate::formspace::{make_space, BasisPreset, FormKind, FormSpace, Sign};
use crate::gf::FieldId;
use crate::transpositions::ClassSpec;
use crate::vector::Vector;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessFamily {
    Sp,
    U,
    /// Orthogonal F3 with `μ = +`, `π = +`.
    Po3Plus,
    /// Orthogonal F3 with `μ = -`, `π = +`.
    Po3Minus,
    /// Orthogonal F2 of type `+`.
    O2Plus,
}

impl std::str::FromStr for WitnessFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sp" => Ok(WitnessFamily::Sp),
            "u" => Ok(WitnessFamily::U),
            "po3-plus" | "po3+" => Ok(WitnessFamily::Po3Plus),
            "po3-minus" | "po3-" => Ok(WitnessFamily::Po3Minus),
            "o2-plus" | "o2+" => Ok(WitnessFamily::O2Plus),
            _ => Err(Error::Config(format!("unknown witness family `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessCase {
    pub family: WitnessFamily,
    pub n: usize,
    /// Which written case of the proof this is, e.g. `n ≡ 2 (mod 3)`.
    pub case: String,
    pub repaired: bool,
    #[serde(skip)]
    pub space: FormSpace,
    pub spec: ClassSpec,
    pub vectors: Vec<Vector>,
    pub claimed_length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessValidation {
    pub check: ChainCheck,
    pub claimed_length: usize,
    pub length_matches: bool,
}

impl WitnessValidation {
    pub fn passes(&self) -> bool {
        self.check.is_valid() && self.length_matches
    }
}

impl WitnessCase {
    pub fn validate(&self) -> Result<WitnessValidation> {
        let check = is_chain(&self.space, self.spec, &self.vectors)?;
        Ok(WitnessValidation {
            length_matches: check.length == self.claimed_length,
            claimed_length: self.claimed_length,
            check,
        })
    }
}

fn sum(field: FieldId, n: usize, idx: impl IntoIterator<Item = usize>) -> Vector {
    Vector::sum_of(field, n, idx)
}

fn terms(field: FieldId, n: usize, t: &[(usize, u8)]) -> Vector {
    Vector::from_terms(field, n, t)
}

/// `v_a - v_b` over F3.
fn diff(n: usize, a: usize, b: usize) -> Vector {
    terms(FieldId::F3, n, &[(a, 1), (b, 2)])
}

/// The chain exactly as written in the proof for this family and dimension.
pub fn paper_witness_chain(family: WitnessFamily, n: usize) -> Result<WitnessCase> {
    let unsupported =
        |why: &str| Err(Error::Unsupported(format!("no written chain for {family:?} with n = {n}: {why}")));
    match family {
        WitnessFamily::Sp => {
            if n < 4 || n % 2 != 0 {
                return unsupported("needs even n ≥ 4");
            }
            let f = FieldId::F2;
            let space = make_space(FormKind::Symplectic, n, &BasisPreset::SymplecticPairs)?;
            let mut vs: Vec<Vector> = (1..n).map(|i| sum(f, n, [i, i + 1])).collect();
            vs.push(sum(f, n, (1..=n - 2).chain([n])));
            vs.push(sum(f, n, 1..=n));
            Ok(WitnessCase {
                family,
                n,
                case: "2n ≥ 4".into(),
                repaired: false,
                space,
                spec: ClassSpec::Symplectic,
                vectors: vs,
                claimed_length: n + 1,
            })
        }
        WitnessFamily::U => {
            if n < 4 {
                return unsupported("needs n ≥ 4");
            }
            let f = FieldId::F4;
            let space = make_space(FormKind::Unitary, n, &BasisPreset::UnitaryOrthonormal)?;
            let mut vs: Vec<Vector> = (1..n).map(|i| sum(f, n, [i, i + 1])).collect();
            let (case, claimed) = if n % 2 == 1 {
                vs.push(sum(f, n, 1..n));
                ("n odd", n)
            } else {
                let mut t: Vec<(usize, u8)> = (1..n).map(|i| (i, 1)).collect();
                t.push((n, 2)); // α v_n
                vs.push(terms(f, n, &t));
                vs.push(sum(f, n, 1..=n));
                ("n even", n + 1)
            };
            Ok(WitnessCase {
                family,
                n,
                case: case.into(),
                repaired: false,
                space,
                spec: ClassSpec::Unitary,
                vectors: vs,
                claimed_length: claimed,
            })
        }
        WitnessFamily::Po3Plus => {
            if n < 3 {
                return unsupported("needs n ≥ 3");
            }
            let f = FieldId::F3;
            let space = make_space(FormKind::OrthogonalF3, n, &BasisPreset::F3Diagonal { last_negative: false })?;
            let mut vs: Vec<Vector> = (1..n).map(|i| diff(n, i, i + 1)).collect();
            let claimed = match n % 3 {
                0 => {
                    vs.push(sum(f, n, 1..n));
                    n
                }
                1 => n - 1,
                _ => {
                    let mut t: Vec<(usize, u8)> = (1..n).map(|i| (i, 1)).collect();
                    t.push((n, 2));
                    vs.push(terms(f, n, &t));
                    n
                }
            };
            Ok(WitnessCase {
                family,
                n,
                case: format!("n ≡ {} (mod 3)", n % 3),
                repaired: false,
                space,
                spec: ClassSpec::OrthogonalF3 { pi: Sign::Plus },
                vectors: vs,
                claimed_length: claimed,
            })
        }
        WitnessFamily::Po3Minus => {
            if n < 4 || (n % 3 == 2 && n < 5) || (n % 3 == 0 && n < 6) {
                return unsupported("needs n ≥ 4, 5, 6 for n ≡ 1, 2, 0 (mod 3)");
            }
            let f = FieldId::F3;
            let space = make_space(FormKind::OrthogonalF3, n, &BasisPreset::F3Diagonal { last_negative: true })?;
            let mut vs: Vec<Vector> = (1..n - 1).map(|i| diff(n, i, i + 1)).collect();
            let head: Vec<(usize, u8)> = (1..=n - 2).map(|i| (i, 1)).collect();
            let with = |extra: &[(usize, u8)]| {
                let mut t = head.clone();
                t.extend_from_slice(extra);
                terms(f, n, &t)
            };
            let claimed = match n % 3 {
                1 => {
                    vs.push(with(&[(n - 1, 2), (n, 1)]));
                    vs.push(with(&[(n - 1, 1), (n, 2)]));
                    vs.push(sum(f, n, 1..=n));
                    n + 1
                }
                2 => {
                    vs.push(with(&[(n, 1)]));
                    // the proof shows the chain continues by v_n and stops there
                    vs.push(sum(f, n, [n]));
                    n
                }
                _ => {
                    vs.push(with(&[(n - 1, 2)]));
                    n - 1
                }
            };
            Ok(WitnessCase {
                family,
                n,
                case: format!("n ≡ {} (mod 3)", n % 3),
                repaired: false,
                space,
                spec: ClassSpec::OrthogonalF3 { pi: Sign::Plus },
                vectors: vs,
                claimed_length: claimed,
            })
        }
        WitnessFamily::O2Plus => {
            if n < 6 || n % 2 != 0 {
                return unsupported("needs even n ≥ 6");
            }
            let f = FieldId::F2;
            let space = make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2Hyperbolic { eps: Sign::Plus })?;
            // v_i + v_{i+1}, with v_{n-1} added for even i, up to v_{n-3} + v_{n-2}
            let mut vs: Vec<Vector> = (1..=n - 3)
                .map(|i| {
                    let mut idx = vec![i, i + 1];
                    if i % 2 == 0 {
                        idx.push(n - 1);
                    }
                    sum(f, n, idx)
                })
                .collect();
            // (v_a + v_{a+1}) + (v_{a+4} + v_{a+5}) + … , always starting at a
            let pair_run = |start: usize, upto: usize| -> Vec<usize> {
                let mut idx = vec![start, start + 1];
                let mut a = start + 4;
                while a + 1 <= upto {
                    idx.extend([a, a + 1]);
                    a += 4;
                }
                idx
            };
            let head = 1..=n - 4;
            let claimed = match n % 8 {
                0 => {
                    vs.push(sum(f, n, head.clone().chain([n - 2])));
                    vs.push(sum(f, n, pair_run(1, n - 2).into_iter().chain([n])));
                    vs.push(sum(f, n, [n - 1]));
                    n
                }
                2 => {
                    vs.push(sum(f, n, head.clone().chain([n - 2, n - 1])));
                    vs.push(sum(f, n, 1..n));
                    n - 1
                }
                4 => {
                    vs.push(sum(f, n, head.clone().chain([n - 2])));
                    vs.push(sum(f, n, 1..=n - 2));
                    vs.push(sum(f, n, pair_run(3, n - 4).into_iter().chain([n])));
                    n
                }
                _ => {
                    vs.push(sum(f, n, head.clone().chain([n - 2, n - 1])));
                    vs.push(sum(f, n, 1..n));
                    vs.push(sum(f, n, pair_run(3, n - 4).into_iter().chain([n])));
                    vs.push(sum(f, n, [n - 1]));
                    n + 1
                }
            };
            Ok(WitnessCase {
                family,
                n,
                case: format!("n ≡ {} (mod 8)", n % 8),
                repaired: false,
                space,
                spec: ClassSpec::OrthogonalF2,
                vectors: vs,
                claimed_length: claimed,
            })
        }
    }
}

/// A corrected chain for cases where the written one is not a chain.
///
/// Symplectic: `v_2, v_1, v_2+v_4, v_3, v_4+v_6, v_5, …, v_{2n-2}+v_{2n},
/// v_{2n-1}, v_{2n}` has the claimed length `2n + 1`.
pub fn repaired_witness_chain(family: WitnessFamily, n: usize) -> Result<WitnessCase> {
    match family {
        WitnessFamily::Sp if n >= 4 && n % 2 == 0 => {
            let f = FieldId::F2;
            let space = make_space(FormKind::Symplectic, n, &BasisPreset::SymplecticPairs)?;
            let mut vs = vec![sum(f, n, [2])];
            for k in 1..n / 2 {
                vs.push(sum(f, n, [2 * k - 1]));
                vs.push(sum(f, n, [2 * k, 2 * k + 2]));
            }
            vs.push(sum(f, n, [n - 1]));
            vs.push(sum(f, n, [n]));
            Ok(WitnessCase {
                family,
                n,
                case: "2n ≥ 4".into(),
                repaired: true,
                space,
                spec: ClassSpec::Symplectic,
                vectors: vs,
                claimed_length: n + 1,
            })
        }
        _ => Err(Error::Unsupported(format!("no repaired chain for {family:?} with n = {n}"))),
    }
}
