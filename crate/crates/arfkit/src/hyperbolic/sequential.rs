//! Sequential sets of isometries: generator tuples whose fixed points are
//! arranged in consecutive blocks around the boundary circle, the decision
//! procedure for that property, and constructors for small surface types.

use super::moebius::{
    compose, element_info, inverse, make_hyperbolic, make_parabolic, BoundaryPoint, ElementInfo,
    MoebiusElement,
};
use super::KernelError;
use crate::core_types::SurfaceSignature;

const INF: BoundaryPoint = BoundaryPoint::Infinity;

fn fin(x: f64) -> BoundaryPoint {
    BoundaryPoint::Finite(x)
}

/// Classification with the ambiguity band reported as `DegenerateElement`,
/// the error the sequential-set checks promise for borderline inputs.
fn classify(g: &MoebiusElement) -> Result<ElementInfo, KernelError> {
    element_info(g).map_err(|e| match e {
        KernelError::Degenerate { .. } => KernelError::DegenerateElement,
        other => other,
    })
}

/// The squared threshold governing when two hyperbolic generators with
/// multipliers `l1`, `l2` admit a third closing generator: the closing
/// element is parabolic exactly at the threshold and hyperbolic above it.
pub fn fg1_threshold(l1: f64, l2: f64) -> f64 {
    let (s1, s2) = (l1.sqrt(), l2.sqrt());
    let q = (s1 + s2) / (1.0 + s1 * s2);
    q * q
}

/// The threshold for a hyperbolic generator with multiplier `l1` paired
/// with a parabolic: the product of the parabolic's parameter and fixed
/// point must reach this value for the closing element to degenerate to a
/// parabolic.
pub fn fg2_threshold(l1: f64) -> f64 {
    let s = l1.sqrt();
    (s + 1.0) / (s - 1.0)
}

struct Block {
    min: f64,
    max: f64,
}

/// Fixed points, positivity, and block extent of one conjugated element;
/// `None` when the element is unusable in this chart (fixed point at
/// infinity, wrong class, or negatively oriented).
fn block_of(info: &ElementInfo) -> Option<Block> {
    match info {
        ElementInfo::Hyperbolic {
            attracting: BoundaryPoint::Finite(a),
            repelling: BoundaryPoint::Finite(r),
            ..
        } => {
            // Positive orientation: attracting point left of repelling.
            if a < r {
                Some(Block { min: *a, max: *r })
            } else {
                None
            }
        }
        ElementInfo::Parabolic {
            fixed: BoundaryPoint::Finite(f),
            lambda,
        } => {
            if *lambda > 0.0 {
                Some(Block { min: *f, max: *f })
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Whether the whole triple becomes positive with strictly increasing
/// fixed-point blocks after moving one boundary gap to infinity.
fn triple_ordered_in_gap(
    triple: &[&MoebiusElement; 3],
    conjugator: Option<&MoebiusElement>,
) -> Result<bool, KernelError> {
    let mut prev_max = f64::NEG_INFINITY;
    for elem in triple {
        let moved = match conjugator {
            Some(q) => compose(&compose(q, elem), &inverse(q)),
            None => **elem,
        };
        let info = classify(&moved)?;
        let Some(block) = block_of(&info) else {
            return Ok(false);
        };
        if block.min <= prev_max {
            return Ok(false);
        }
        prev_max = block.max;
    }
    Ok(true)
}

/// Decides whether (left, middle, right) is a sequential triple: all three
/// hyperbolic or parabolic with pairwise distinct fixed points, and some
/// arc of the boundary circle sees their fixed-point blocks in order with
/// every element positively oriented.
fn short_triple_check(
    left: &MoebiusElement,
    middle: &MoebiusElement,
    right: &MoebiusElement,
) -> Result<bool, KernelError> {
    let triple = [left, middle, right];
    let mut fps: Vec<f64> = Vec::with_capacity(6);
    for elem in &triple {
        match classify(elem)? {
            ElementInfo::Hyperbolic {
                attracting,
                repelling,
                ..
            } => {
                fps.push(attracting.circle_angle());
                fps.push(repelling.circle_angle());
            }
            ElementInfo::Parabolic { fixed, .. } => fps.push(fixed.circle_angle()),
            ElementInfo::Identity | ElementInfo::Elliptic { .. } => return Ok(false),
        }
    }
    // Distinct fixed points across the whole triple.
    for i in 0..fps.len() {
        for j in (i + 1)..fps.len() {
            let diff = fps[i] - fps[j];
            let two_pi = 2.0 * std::f64::consts::PI;
            if (diff - two_pi * (diff / two_pi).round()).abs() < 1e-9 {
                return Ok(false);
            }
        }
    }
    fps.sort_by(f64::total_cmp);
    // Try every gap between circularly adjacent fixed points: move its
    // midpoint to infinity and test the resulting linear order.
    let n = fps.len();
    for k in 0..n {
        let lo = fps[k];
        let hi = if k + 1 < n {
            fps[k + 1]
        } else {
            fps[0] + 2.0 * std::f64::consts::PI
        };
        let contains_infinity = lo < std::f64::consts::PI && hi > std::f64::consts::PI;
        let conjugator = if contains_infinity {
            None
        } else {
            let mid = (lo + hi) / 2.0;
            let wrapped = if mid > std::f64::consts::PI {
                mid - 2.0 * std::f64::consts::PI
            } else {
                mid
            };
            let x = (wrapped / 2.0).tan();
            Some(MoebiusElement::from_raw(0.0, -1.0, 1.0, -x))
        };
        if triple_ordered_in_gap(&triple, conjugator.as_ref())? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Decides whether `elements` is a sequential set for the given surface:
/// handle generators A_i, B_i (hyperbolic), then one generator per hole
/// (hyperbolic) and per puncture (parabolic), satisfying the surface
/// relation, with the genus-reduced list
/// (A_1, B_1 A_1^-1 B_1^-1, ..., boundary generators) sequentially ordered
/// at every split point.
///
/// Wrong arity, broken relation, wrong class counts, or a failed ordering
/// return false; elements inside the classification ambiguity band raise
/// `DegenerateElement`.
pub fn is_sequential_set(
    elements: &[MoebiusElement],
    sig: SurfaceSignature,
) -> Result<bool, KernelError> {
    let g = sig.genus as usize;
    let n = sig.boundary_count() as usize;
    if elements.len() != 2 * g + n {
        return Ok(false);
    }
    for i in 0..g {
        if !matches!(
            classify(&elements[2 * i + 1])?,
            ElementInfo::Hyperbolic { .. }
        ) {
            return Ok(false);
        }
    }
    let mut reduced: Vec<MoebiusElement> = Vec::with_capacity(2 * g + n);
    for i in 0..g {
        let a = &elements[2 * i];
        let b = &elements[2 * i + 1];
        reduced.push(*a);
        reduced.push(compose(&compose(b, &inverse(a)), &inverse(b)));
    }
    reduced.extend_from_slice(&elements[2 * g..]);

    let relator = reduced
        .iter()
        .fold(MoebiusElement::identity(), |acc, e| compose(&acc, e));
    if relator.sup_distance(&MoebiusElement::identity()) > 1e-8 {
        return Ok(false);
    }

    let (mut hyperbolic, mut parabolic) = (0usize, 0usize);
    for e in &reduced {
        match classify(e)? {
            ElementInfo::Hyperbolic { .. } => hyperbolic += 1,
            ElementInfo::Parabolic { .. } => parabolic += 1,
            _ => return Ok(false),
        }
    }
    if hyperbolic != 2 * g + sig.holes as usize || parabolic != sig.punctures as usize {
        return Ok(false);
    }

    let len = reduced.len();
    for j in 1..=len.saturating_sub(2) {
        let prefix = reduced[..j]
            .iter()
            .fold(MoebiusElement::identity(), |acc, e| compose(&acc, e));
        let suffix = reduced[j + 1..]
            .iter()
            .fold(MoebiusElement::identity(), |acc, e| compose(&acc, e));
        if !short_triple_check(&prefix, &reduced[j], &suffix)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rebuilds an almost-parabolic element (trace within 1e-6 of 2) as an
/// exact parabolic with the same fixed point and parameter.
fn snap_parabolic(g: &MoebiusElement) -> Result<MoebiusElement, KernelError> {
    let [[a, b], [c, d]] = g.matrix();
    let t = a + d;
    if (t - 2.0).abs() > 1e-6 {
        return Err(KernelError::OutOfValidityRegion(format!(
            "trace {t} is not within snapping distance of a parabolic"
        )));
    }
    let snapped = if c.abs() > 1e-9 {
        make_parabolic(fin((a - d) / (2.0 * c)), -c)?
    } else {
        make_parabolic(INF, b)?
    };
    if snapped.sup_distance(g) > 1e-6 {
        return Err(KernelError::OutOfValidityRegion(
            "snapped parabolic strays from the input".into(),
        ));
    }
    Ok(snapped)
}

fn commutator(a: &MoebiusElement, b: &MoebiusElement) -> MoebiusElement {
    compose(&compose(a, b), &compose(&inverse(a), &inverse(b)))
}

fn params_or<const N: usize>(params: &[f64], defaults: [f64; N]) -> Result<[f64; N], KernelError> {
    if params.is_empty() {
        return Ok(defaults);
    }
    if params.len() != N {
        return Err(KernelError::OutOfValidityRegion(format!(
            "expected {} parameters, got {}",
            N,
            params.len()
        )));
    }
    let mut out = defaults;
    out.copy_from_slice(params);
    Ok(out)
}

fn validated(
    elements: Vec<MoebiusElement>,
    sig: SurfaceSignature,
) -> Result<Vec<MoebiusElement>, KernelError> {
    if is_sequential_set(&elements, sig)? {
        Ok(elements)
    } else {
        Err(KernelError::OutOfValidityRegion(
            "constructed elements do not form a sequential set".into(),
        ))
    }
}

/// Orientation search shared by the genus-1 families: tries the four
/// inversion patterns of (a, b), recomputing the closing generator each
/// time.
fn genus_one_family(
    a: MoebiusElement,
    b: MoebiusElement,
    sig: SurfaceSignature,
    close: impl Fn(&MoebiusElement) -> Result<MoebiusElement, KernelError>,
) -> Result<Vec<MoebiusElement>, KernelError> {
    for (flip_a, flip_b) in [(false, false), (false, true), (true, false), (true, true)] {
        let aa = if flip_a { inverse(&a) } else { a };
        let bb = if flip_b { inverse(&b) } else { b };
        let Ok(c) = close(&commutator(&aa, &bb)) else {
            continue;
        };
        if is_sequential_set(&[aa, bb, c], sig)? {
            return Ok(vec![aa, bb, c]);
        }
    }
    Err(KernelError::OrientationSearchFailed)
}

/// Builds a sequential set for one of the six supported small surfaces,
/// from explicit parameters or family defaults (empty slice). Other
/// signatures return `NotCovered`; parameters outside the region where the
/// recipe closes up return `OutOfValidityRegion`.
///
/// Families and parameters:
///
/// * (0,3,0) `[l1, l2, alpha, beta]`, default `[4, 4, 0.8, 1]`;
/// * (0,2,1) `[l1, l2, beta]`, default `[4, 4, 1]` (the second fixed point
///   is placed exactly at the parabolic threshold);
/// * (0,1,2) `[l1, l2]`, default `[4, 4]`;
/// * (0,0,3) `[l1, alpha]`, default `[1, 1]` (the second parameter is
///   4 / l1, making the closing element parabolic for every alpha);
/// * (1,1,0) `[l]`, default `[9]`, requires l > 3 + 2 sqrt(2);
/// * (1,0,1) `[l]`, default `[3 + 2 sqrt(2)]`, the commutator trace must
///   sit within 1e-6 of the parabolic value.
pub fn build_sequential_set(
    sig: SurfaceSignature,
    params: &[f64],
) -> Result<Vec<MoebiusElement>, KernelError> {
    let key = (sig.genus, sig.holes, sig.punctures);
    match key {
        (0, 3, 0) => {
            let [l1, l2, alpha, beta] = params_or(params, [4.0, 4.0, 0.8, 1.0])?;
            let c1 = make_hyperbolic(INF, fin(0.0), l1)?;
            let c2 = make_hyperbolic(fin(alpha), fin(beta), l2)?;
            let c3 = inverse(&compose(&c1, &c2));
            validated(vec![c1, c2, c3], sig)
        }
        (0, 2, 1) => {
            let [l1, l2, beta] = params_or(params, [4.0, 4.0, 1.0])?;
            let alpha = fg1_threshold(l1, l2) * beta;
            let c1 = make_hyperbolic(INF, fin(0.0), l1)?;
            let c2 = make_hyperbolic(fin(alpha), fin(beta), l2)?;
            let c3 = snap_parabolic(&inverse(&compose(&c1, &c2)))?;
            validated(vec![c1, c2, c3], sig)
        }
        (0, 1, 2) => {
            let [l1, l2] = params_or(params, [4.0, 4.0])?;
            let alpha = fg2_threshold(l1) / l2;
            let c1 = make_hyperbolic(INF, fin(0.0), l1)?;
            let c2 = make_parabolic(fin(alpha), l2)?;
            let c3 = snap_parabolic(&inverse(&compose(&c1, &c2)))?;
            validated(vec![c1, c2, c3], sig)
        }
        (0, 0, 3) => {
            let [l1, alpha] = params_or(params, [1.0, 1.0])?;
            let c1 = make_parabolic(INF, l1)?;
            let c2 = make_parabolic(fin(alpha), 4.0 / l1)?;
            let c3 = snap_parabolic(&inverse(&compose(&c1, &c2)))?;
            validated(vec![c1, c2, c3], sig)
        }
        (1, 1, 0) => {
            let [l] = params_or(params, [9.0])?;
            let threshold = 3.0 + 2.0 * 2.0_f64.sqrt();
            let in_region = l.is_finite() && l > threshold + 1e-6;
            if !in_region {
                return Err(KernelError::OutOfValidityRegion(format!(
                    "multiplier {l} must exceed {threshold}"
                )));
            }
            let a = make_hyperbolic(INF, fin(0.0), l)?;
            let b = make_hyperbolic(fin(-1.0), fin(1.0), l)?;
            genus_one_family(a, b, sig, |comm| Ok(inverse(comm)))
        }
        (1, 0, 1) => {
            let [l] = params_or(params, [3.0 + 2.0 * 2.0_f64.sqrt()])?;
            let a = make_hyperbolic(INF, fin(0.0), l)?;
            let b = make_hyperbolic(fin(-1.0), fin(1.0), l)?;
            genus_one_family(a, b, sig, |comm| snap_parabolic(&inverse(comm)))
        }
        _ => Err(KernelError::NotCovered),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sig(g: u32, h: u32, p: u32) -> SurfaceSignature {
        SurfaceSignature::new(g, h, p)
    }

    #[test]
    fn thresholds() {
        assert_relative_eq!(fg1_threshold(4.0, 4.0), 0.64);
        assert_relative_eq!(fg2_threshold(4.0), 3.0);
    }

    #[test]
    fn three_holed_sphere_family() {
        let c1 = make_hyperbolic(INF, fin(0.0), 4.0).unwrap();
        let make = |alpha: f64| {
            let c2 = make_hyperbolic(fin(alpha), fin(1.0), 4.0).unwrap();
            let c3 = inverse(&compose(&c1, &c2));
            [c1, c2, c3]
        };
        // Above the threshold 0.64 the triple closes hyperbolically.
        assert!(is_sequential_set(&make(0.8), sig(0, 3, 0)).unwrap());
        // Below it the closing element is elliptic: not sequential.
        assert!(!is_sequential_set(&make(0.5), sig(0, 3, 0)).unwrap());
        // At the threshold the closing element is parabolic, so the set
        // has one puncture, not three holes.
        let boundary = make(0.64);
        assert!(!is_sequential_set(&boundary, sig(0, 3, 0)).unwrap());
        // Wrong arity is a plain false.
        assert!(!is_sequential_set(&boundary[..2], sig(0, 3, 0)).unwrap());
    }

    #[test]
    fn builders_produce_sequential_sets() {
        for (g, h, p) in [
            (0, 3, 0),
            (0, 2, 1),
            (0, 1, 2),
            (0, 0, 3),
            (1, 1, 0),
            (1, 0, 1),
        ] {
            let s = sig(g, h, p);
            let elements = build_sequential_set(s, &[]).unwrap();
            assert_eq!(elements.len(), (2 * g + h + p) as usize);
            assert!(is_sequential_set(&elements, s).unwrap(), "({g},{h},{p})");
        }
    }

    #[test]
    fn cusp_family_matches_reference_elements() {
        let elements = build_sequential_set(sig(0, 0, 3), &[]).unwrap();
        assert_eq!(elements[0].matrix(), [[1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(elements[1].matrix(), [[-3.0, 4.0], [-4.0, 5.0]]);
        match element_info(&elements[2]).unwrap() {
            ElementInfo::Parabolic { .. } => {}
            other => panic!("closing element should be parabolic, got {other:?}"),
        }
    }

    #[test]
    fn torus_family_validity_region() {
        assert!(build_sequential_set(sig(1, 1, 0), &[]).is_ok());
        assert!(build_sequential_set(sig(1, 1, 0), &[7.0]).is_ok());
        assert!(matches!(
            build_sequential_set(sig(1, 1, 0), &[5.0]),
            Err(KernelError::OutOfValidityRegion(_))
        ));
        // Commutator trace at the default parameter.
        let elements = build_sequential_set(sig(1, 1, 0), &[9.0]).unwrap();
        let comm = inverse(&elements[2]);
        assert_relative_eq!(comm.trace(), 862.0 / 81.0, epsilon = 1e-10);
    }

    #[test]
    fn cusped_torus_family_is_parabolic_at_the_corner() {
        let elements = build_sequential_set(sig(1, 0, 1), &[]).unwrap();
        match element_info(&elements[2]).unwrap() {
            ElementInfo::Parabolic { .. } => {}
            other => panic!("closing element should be parabolic, got {other:?}"),
        }
        // Away from the corner the commutator is not parabolic.
        assert!(build_sequential_set(sig(1, 0, 1), &[9.0]).is_err());
    }

    #[test]
    fn unsupported_signatures_and_arities() {
        assert_eq!(
            build_sequential_set(sig(2, 0, 0), &[]),
            Err(KernelError::NotCovered)
        );
        assert!(matches!(
            build_sequential_set(sig(0, 3, 0), &[4.0]),
            Err(KernelError::OutOfValidityRegion(_))
        ));
    }

    #[test]
    fn misordered_sets_are_rejected() {
        // Swapping two generators of a valid set breaks the cyclic order.
        let elements = build_sequential_set(sig(0, 3, 0), &[]).unwrap();
        let swapped = [elements[1], elements[0], elements[2]];
        assert!(!is_sequential_set(&swapped, sig(0, 3, 0)).unwrap());
    }
}
