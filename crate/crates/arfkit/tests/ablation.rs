//! Generator-set ablation: dropping the boundary-interaction twists from
//! the generator list must break the classification on a surface with
//! both a handle and mixed boundary, while the full set verifies.

use arfkit::arf_calculus::{twist_generators, Twist};
use arfkit::orbits::census_with_generators;
use arfkit::{Modulus, SurfaceSignature};

#[test]
fn boundary_interaction_twists_are_essential() {
    let sig = SurfaceSignature::new(1, 1, 1);
    let m = Modulus::new(4).unwrap();

    let full = twist_generators(sig);
    assert!(full.iter().any(|t| matches!(t, Twist::T3 { .. })));
    let complete = census_with_generators(m, sig, &full, None).unwrap();
    assert!(complete.checks.partition);
    assert!(complete.checks.soundness);
    assert!(complete.checks.completeness);

    let ablated: Vec<Twist> = full
        .iter()
        .copied()
        .filter(|t| !matches!(t, Twist::T3 { .. }))
        .collect();
    let broken = census_with_generators(m, sig, &ablated, None).unwrap();
    // The coarser action still partitions the space and types stay
    // constant on orbits, but orbits no longer match types one-to-one.
    assert!(broken.checks.partition);
    assert!(broken.checks.soundness);
    assert!(!broken.checks.completeness);
    assert!(broken.orbits.len() > complete.orbits.len());
}
