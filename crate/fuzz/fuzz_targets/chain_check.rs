#![no_main]
use libfuzzer_sys::fuzz_target;

use symsub::chains::{extend_candidates, is_chain, Chain};
use symsub::{make_space, BasisPreset, ClassSpec, FieldId, FormKind, Sign, Vector};

fuzz_target!(|data: &[u8]| {
    let [kind, dim, rest @ ..] = data else { return };
    let dim = 1 + (*dim as usize) % 5;
    let (space, spec) = match kind % 5 {
        0 if dim % 2 == 0 => (make_space(FormKind::Symplectic, dim, &BasisPreset::SymplecticPairs), ClassSpec::Symplectic),
        1 => (make_space(FormKind::Unitary, dim, &BasisPreset::UnitaryOrthonormal), ClassSpec::Unitary),
        2 if dim >= 2 => (
            make_space(FormKind::OrthogonalF2, dim, &BasisPreset::F2Hyperbolic { eps: Sign::Plus }),
            ClassSpec::OrthogonalF2,
        ),
        3 => (
            make_space(FormKind::OrthogonalF3, dim, &BasisPreset::F3Diagonal { last_negative: false }),
            ClassSpec::OrthogonalF3 { pi: Sign::Plus },
        ),
        4 => (
            make_space(FormKind::OrthogonalF3, dim, &BasisPreset::F3Diagonal { last_negative: true }),
            ClassSpec::OrthogonalF3 { pi: Sign::Minus },
        ),
        _ => return,
    };
    let Ok(space) = space else { return };
    let f: FieldId = space.field();
    let vectors: Vec<Vector> = rest
        .chunks(dim)
        .filter(|c| c.len() == dim)
        .take(8)
        .filter_map(|c| Vector::from_codes(f, c.iter().map(|x| x % f.order()).collect()).ok())
        .collect();
    let check = is_chain(&space, spec, &vectors).expect("is_chain on valid vectors");
    if check.is_valid() {
        let chain = Chain::new(&space, spec, &vectors).expect("valid chain rejected");
        for v in extend_candidates(&space, spec, &chain).expect("candidates") {
            let mut longer = vectors.clone();
            longer.push(v);
            assert!(is_chain(&space, spec, &longer).unwrap().is_valid());
        }
    }
});
