#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use symsub::chains::{extend_candidates, Chain};
use symsub::matrix::rank_of;
use symsub::transpositions::{class_representatives, matrix_of};
use symsub::{make_space, BasisPreset, ClassSpec, FormKind, FormSpace, Matrix, Sign, Vector};

/// Every preset space of dimension at most `max_dim` with its class. Unitary
/// spaces stop at `max_unitary`.
pub fn presets(max_dim: usize, max_unitary: usize) -> Vec<(FormSpace, ClassSpec)> {
    let mut out = Vec::new();
    for n in 1..=max_dim {
        if n % 2 == 0 {
            out.push((
                make_space(FormKind::Symplectic, n, &BasisPreset::SymplecticPairs).unwrap(),
                ClassSpec::Symplectic,
            ));
        }
        if n <= max_unitary {
            out.push((make_space(FormKind::Unitary, n, &BasisPreset::UnitaryOrthonormal).unwrap(), ClassSpec::Unitary));
        }
        if n >= 2 {
            for eps in [Sign::Plus, Sign::Minus] {
                out.push((
                    make_space(FormKind::OrthogonalF2, n, &BasisPreset::F2Hyperbolic { eps }).unwrap(),
                    ClassSpec::OrthogonalF2,
                ));
            }
        }
        for last_negative in [false, true] {
            for pi in [Sign::Plus, Sign::Minus] {
                out.push((
                    make_space(FormKind::OrthogonalF3, n, &BasisPreset::F3Diagonal { last_negative }).unwrap(),
                    ClassSpec::OrthogonalF3 { pi },
                ));
            }
        }
    }
    out
}

/// Grows a chain by random admissible extensions until none is left; returns
/// every intermediate chain.
pub fn random_walk(space: &FormSpace, spec: ClassSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<Vector>> {
    let mut nodes = Vec::new();
    let mut chain = Chain::new(space, spec, &[]).unwrap();
    loop {
        let cands = extend_candidates(space, spec, &chain).unwrap();
        let Some(next) = cands.choose(rng) else { break };
        let mut vs = chain.vectors();
        vs.push(next.clone());
        nodes.push(vs.clone());
        chain = Chain::new(space, spec, &vs).unwrap();
    }
    nodes
}

pub fn is_independent(space: &FormSpace, vs: &[Vector]) -> bool {
    rank_of(space.field(), space.dim(), vs) == vs.len()
}

/// Product of random class elements.
pub fn random_isometry(space: &FormSpace, spec: ClassSpec, rng: &mut ChaCha8Rng) -> Matrix {
    let reps = class_representatives(space, spec).unwrap();
    let mut m = Matrix::identity(space.field(), space.dim());
    for _ in 0..12 {
        let v = reps.choose(rng).unwrap();
        m = m.mul(&matrix_of(space, spec, v).unwrap());
    }
    m
}

pub fn random_independent(space: &FormSpace, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    let f = space.field();
    let mut out: Vec<Vector> = Vec::new();
    while out.len() < k {
        let coords: Vec<u8> = (0..space.dim()).map(|_| rng.random_range(0..f.order())).collect();
        out.push(Vector::from_codes(f, coords).unwrap());
        if !is_independent(space, &out) {
            out.pop();
        }
    }
    out
}
