//! Lifts of isometries to the universal covering group: level arithmetic in
//! the argument charts, products computed by numerical path tracking, the
//! closed-form level-jump rules, and verification of lifted surface-group
//! relations.

use super::moebius::{
    compose, element_info, inverse, parabolic_entries, principal_argument, tau_entries,
    BoundaryPoint, ElementInfo, MoebiusElement,
};
use super::KernelError;
use crate::core_types::{Modulus, SurfaceSignature};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Margin around chart boundaries inside which level assignment is refused.
const CHART_MARGIN: f64 = 1e-9;

/// Largest per-step argument change accepted during path tracking.
const MAX_STEP_ARG: f64 = std::f64::consts::FRAC_PI_4;

/// Consecutive step halvings allowed before tracking gives up.
const MAX_HALVINGS: u32 = 40;

/// Largest discrepancy tolerated between the tracked argument and the
/// argument of the recomposed product when snapping to the exact fiber.
const SNAP_TOLERANCE: f64 = 0.1;

/// An element of the universal covering group: a base isometry together
/// with a real argument that refines the principal argument of the base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedElement {
    base: MoebiusElement,
    arg: f64,
}

impl LiftedElement {
    /// Wraps a base and an explicit argument. The argument must be
    /// congruent to the principal argument of the base modulo 2 pi; this is
    /// not checked here.
    pub fn with_arg(base: MoebiusElement, arg: f64) -> Self {
        LiftedElement { base, arg }
    }

    /// The underlying isometry.
    pub fn base(&self) -> &MoebiusElement {
        &self.base
    }

    /// The lifted argument.
    pub fn arg(&self) -> f64 {
        self.arg
    }

    /// The inverse lift: inverting the base negates the argument exactly
    /// (the off-diagonal difference changes sign while the trace is
    /// unchanged).
    pub fn inverse(&self) -> LiftedElement {
        LiftedElement {
            base: inverse(&self.base),
            arg: -self.arg,
        }
    }
}

/// The lift of an isometry at the given level: the argument is the
/// principal argument shifted by 2 pi times the level. The level-1 lift of
/// the identity has argument exactly 2 pi.
pub fn lift(g: &MoebiusElement, level: i64) -> LiftedElement {
    LiftedElement {
        base: *g,
        arg: principal_argument(g) + TWO_PI * level as f64,
    }
}

/// The level (chart index) of a lift: the integer k with argument in
/// (-pi + 2 pi k, pi + 2 pi k). Arguments within 1e-9 of a chart boundary
/// are refused with `ChartBoundary`.
pub fn level_of(lifted: &LiftedElement) -> Result<i64, KernelError> {
    let k = (lifted.arg / TWO_PI).round();
    let residual = lifted.arg - TWO_PI * k;
    if std::f64::consts::PI - residual.abs() <= CHART_MARGIN {
        return Err(KernelError::ChartBoundary {
            arg: lifted.arg,
            tol: CHART_MARGIN,
        });
    }
    Ok(k as i64)
}

/// The level reduced into 0..m.
pub fn level_mod(lifted: &LiftedElement, m: Modulus) -> Result<u32, KernelError> {
    Ok(m.reduce(level_of(lifted)?))
}

/// A straight-line canonical path from the identity to a hyperbolic or
/// parabolic element, reconstructed from its extracted invariants. Along
/// every such path the trace stays at least 2, so the path's own lifted
/// argument stays inside the principal chart.
enum CanonicalPath {
    Constant,
    Hyperbolic {
        att: BoundaryPoint,
        rep: BoundaryPoint,
        lambda: f64,
    },
    Parabolic {
        fixed: BoundaryPoint,
        lambda: f64,
    },
}

impl CanonicalPath {
    fn for_element(info: &ElementInfo) -> Result<CanonicalPath, KernelError> {
        match info {
            ElementInfo::Identity => Ok(CanonicalPath::Constant),
            ElementInfo::Hyperbolic {
                attracting,
                repelling,
                lambda,
            } => Ok(CanonicalPath::Hyperbolic {
                att: *attracting,
                rep: *repelling,
                lambda: *lambda,
            }),
            ElementInfo::Parabolic { fixed, lambda } => Ok(CanonicalPath::Parabolic {
                fixed: *fixed,
                lambda: *lambda,
            }),
            ElementInfo::Elliptic { .. } => Err(KernelError::EllipticUnsupported),
        }
    }

    /// Raw (non-normalized) matrix at path time t in [0, 1]; t = 0 is
    /// exactly the identity.
    fn at(&self, t: f64) -> [[f64; 2]; 2] {
        match *self {
            CanonicalPath::Constant => [[1.0, 0.0], [0.0, 1.0]],
            CanonicalPath::Hyperbolic { att, rep, lambda } => {
                tau_entries(att, rep, 1.0 + t * (lambda - 1.0))
            }
            CanonicalPath::Parabolic { fixed, lambda } => parabolic_entries(fixed, t * lambda),
        }
    }
}

/// The complex number (trace) + i (lower-by-upper off-diagonal difference)
/// whose half-argument tracks the rotation part of a matrix. It never
/// vanishes on matrices of determinant 1.
fn u_number(m: &[[f64; 2]; 2]) -> (f64, f64) {
    (m[0][0] + m[1][1], m[0][1] - m[1][0])
}

fn mat_mul(x: &[[f64; 2]; 2], y: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

/// Argument of the quotient u_next / u_prev, in (-pi, pi].
fn arg_quotient(prev: (f64, f64), next: (f64, f64)) -> f64 {
    let dot = next.0 * prev.0 + next.1 * prev.1;
    let cross = next.1 * prev.0 - next.0 * prev.1;
    cross.atan2(dot)
}

/// The product of two lifts, computed by tracking the argument of the base
/// product along a canonical path to the right factor.
///
/// The right factor must be hyperbolic, parabolic, or the identity
/// (`EllipticUnsupported` otherwise); the left factor may be anything with
/// a known argument. The returned argument is snapped onto the exact fiber
/// over the composed base, so level arithmetic downstream is exact.
pub fn lifted_product(
    g1: &LiftedElement,
    g2: &LiftedElement,
) -> Result<LiftedElement, KernelError> {
    let info2 = element_info(&g2.base)?;
    let path = CanonicalPath::for_element(&info2)?;
    let m1 = g1.base.matrix();

    let mut theta = g1.arg;
    let mut t = 0.0_f64;
    let mut u_prev = u_number(&mat_mul(&m1, &path.at(0.0)));
    let mut step = 1.0_f64;
    let mut halvings = 0u32;
    let mut guard = 0u32;
    while t < 1.0 {
        guard += 1;
        if guard > 4_000_000 {
            return Err(KernelError::PathThroughDegeneracy);
        }
        let t_next = if step >= 1.0 - t { 1.0 } else { t + step };
        let u_next = u_number(&mat_mul(&m1, &path.at(t_next)));
        let delta = arg_quotient(u_prev, u_next);
        if 2.0 * delta.abs() >= MAX_STEP_ARG {
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(KernelError::PathThroughDegeneracy);
            }
            step = (t_next - t) / 2.0;
            continue;
        }
        theta += 2.0 * delta;
        t = t_next;
        u_prev = u_next;
        step = (step * 2.0).min(1.0);
        halvings = 0;
    }

    // The canonical path carries the principal argument of the right base;
    // whatever extra full turns the right lift carries commute to the end.
    let psi2 = principal_argument(&g2.base);
    let tracked = theta + (g2.arg - psi2);

    // Snap onto the fiber over the recomposed base: the tracked value may
    // have accumulated rounding, but its chart index is trustworthy.
    let base = compose(&g1.base, &g2.base);
    let psi = principal_argument(&base);
    let turns = ((tracked - psi) / TWO_PI).round();
    let snapped = psi + TWO_PI * turns;
    if (snapped - tracked).abs() > SNAP_TOLERANCE {
        return Err(KernelError::PathThroughDegeneracy);
    }
    Ok(LiftedElement { base, arg: snapped })
}

fn finite_nonzero(p: BoundaryPoint) -> Result<f64, KernelError> {
    match p {
        BoundaryPoint::Finite(x) if x != 0.0 && x.is_finite() => Ok(x),
        _ => Err(KernelError::SharedFixedPoint),
    }
}

/// The conjugator moving a hyperbolic element to the form with attracting
/// fixed point at infinity and repelling fixed point at 0.
fn hyperbolic_normalizer(att: BoundaryPoint, rep: BoundaryPoint) -> MoebiusElement {
    match (att, rep) {
        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => {
            if q > p {
                MoebiusElement::from_raw(1.0, -q, 1.0, -p)
            } else {
                MoebiusElement::from_raw(-1.0, q, 1.0, -p)
            }
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(q)) => {
            MoebiusElement::from_raw(1.0, -q, 0.0, 1.0)
        }
        (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => {
            MoebiusElement::from_raw(0.0, -1.0, 1.0, -p)
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {
            unreachable!("hyperbolic fixed points are distinct")
        }
    }
}

fn conjugate(q: &MoebiusElement, g: &MoebiusElement) -> MoebiusElement {
    compose(&compose(q, g), &inverse(q))
}

fn shares_fixed_point(fps1: &[BoundaryPoint], fps2: &[BoundaryPoint]) -> bool {
    fps1.iter()
        .any(|p| fps2.iter().any(|q| p.circle_distance(*q) < CHART_MARGIN))
}

/// The level jump of a product of level-0 lifts, from fixed-point data
/// alone.
///
/// Covered configurations (all other class combinations return
/// `NotCovered`, shared fixed points return `SharedFixedPoint`):
///
/// * hyperbolic x hyperbolic: after moving the left factor to the
///   (infinity, 0) form, the right factor has fixed points alpha, beta and
///   the jump is +1 when 0 < r beta < alpha < beta, -1 when
///   beta < alpha <= r beta < 0, else 0, where
///   r = (lambda1 + lambda2) / (1 + lambda1 lambda2);
/// * hyperbolic x parabolic with alpha > 0 and lambda2 > 0 in the moved
///   chart: +1 once lambda2 alpha exceeds (lambda1 + 1) / (lambda1 - 1),
///   else 0;
/// * parabolic x parabolic, both positive, right fixed point finite after
///   moving the left one to infinity: +1 once lambda1 lambda2 exceeds 2,
///   else 0.
pub fn product_jump_closed_form(
    g1: &MoebiusElement,
    g2: &MoebiusElement,
) -> Result<i64, KernelError> {
    let info1 = element_info(g1)?;
    let info2 = element_info(g2)?;
    match (&info1, &info2) {
        (
            ElementInfo::Hyperbolic {
                attracting: a1,
                repelling: r1,
                lambda: l1,
            },
            ElementInfo::Hyperbolic {
                attracting: a2,
                repelling: r2,
                lambda: l2,
            },
        ) => {
            if shares_fixed_point(&[*a1, *r1], &[*a2, *r2]) {
                return Err(KernelError::SharedFixedPoint);
            }
            let q = hyperbolic_normalizer(*a1, *r1);
            let alpha = finite_nonzero(q.apply_boundary(*a2))?;
            let beta = finite_nonzero(q.apply_boundary(*r2))?;
            let r = (l1 + l2) / (1.0 + l1 * l2);
            if 0.0 < r * beta && r * beta < alpha && alpha < beta {
                Ok(1)
            } else if beta < alpha && alpha <= r * beta && r * beta < 0.0 {
                Ok(-1)
            } else {
                Ok(0)
            }
        }
        (
            ElementInfo::Hyperbolic {
                attracting: a1,
                repelling: r1,
                lambda: l1,
            },
            ElementInfo::Parabolic { fixed: f2, .. },
        ) => {
            if shares_fixed_point(&[*a1, *r1], &[*f2]) {
                return Err(KernelError::SharedFixedPoint);
            }
            // The factor is already known to be parabolic, so read the
            // conjugated data off directly instead of re-classifying a
            // matrix that carries conjugation round-off.
            let q = hyperbolic_normalizer(*a1, *r1);
            let moved = conjugate(&q, g2);
            let alpha = finite_nonzero(q.apply_boundary(*f2))?;
            let l2 = -moved.matrix()[1][0];
            if alpha <= 0.0 || l2 <= 0.0 {
                return Err(KernelError::NotCovered);
            }
            let bound = (l1 + 1.0) / (l1 - 1.0);
            Ok(if l2 * alpha <= bound { 0 } else { 1 })
        }
        (
            ElementInfo::Parabolic {
                fixed: f1,
                lambda: raw_l1,
            },
            ElementInfo::Parabolic { fixed: f2, .. },
        ) => {
            if shares_fixed_point(&[*f1], &[*f2]) {
                return Err(KernelError::SharedFixedPoint);
            }
            // Move the first fixed point to infinity; both factors are
            // known parabolic, so take the conjugated parameters straight
            // from the matrices (translation length for the factor fixing
            // infinity, lower-left entry for the finite one).
            let (l1, q) = match *f1 {
                BoundaryPoint::Infinity => (*raw_l1, MoebiusElement::identity()),
                BoundaryPoint::Finite(p) => {
                    let q = MoebiusElement::from_raw(0.0, -1.0, 1.0, -p);
                    (conjugate(&q, g1).matrix()[0][1], q)
                }
            };
            if q.apply_boundary(*f2).is_infinite() {
                return Err(KernelError::SharedFixedPoint);
            }
            let l2 = -conjugate(&q, g2).matrix()[1][0];
            if l1 <= 0.0 || l2 <= 0.0 {
                return Err(KernelError::NotCovered);
            }
            Ok(if l1 * l2 <= 2.0 { 0 } else { 1 })
        }
        _ => Err(KernelError::NotCovered),
    }
}

/// Verifies a lifted surface-group relation: lifts each generator at its
/// level, evaluates the relator (handle commutators followed by the
/// boundary generators) by path-tracked products, and reports whether the
/// total winding vanishes modulo m.
///
/// `elements` holds A_1, B_1, ..., A_g, B_g, then the boundary generators;
/// `levels` gives one level per element in the same order.
pub fn check_lift_relation(
    sig: SurfaceSignature,
    elements: &[MoebiusElement],
    levels: &[i64],
    m: Modulus,
) -> Result<bool, KernelError> {
    let g = sig.genus as usize;
    let n = sig.boundary_count() as usize;
    let expected = 2 * g + n;
    if elements.len() != expected {
        return Err(KernelError::LevelCountMismatch {
            expected,
            got: elements.len(),
        });
    }
    if levels.len() != expected {
        return Err(KernelError::LevelCountMismatch {
            expected,
            got: levels.len(),
        });
    }
    let lifts: Vec<LiftedElement> = elements
        .iter()
        .zip(levels)
        .map(|(e, &l)| lift(e, l))
        .collect();
    let mut factors: Vec<LiftedElement> = Vec::with_capacity(4 * g + n);
    for i in 0..g {
        factors.push(lifts[2 * i]);
        factors.push(lifts[2 * i + 1]);
        factors.push(lifts[2 * i].inverse());
        factors.push(lifts[2 * i + 1].inverse());
    }
    factors.extend_from_slice(&lifts[2 * g..]);

    let mut acc = factors[0];
    for f in &factors[1..] {
        acc = lifted_product(&acc, f)?;
    }

    let defect = acc.base().sup_distance(&MoebiusElement::identity());
    if defect > 1e-8 {
        return Err(KernelError::RelatorNotIdentity { defect });
    }
    let winding = acc.arg() / TWO_PI;
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.01 {
        return Err(KernelError::WindingNotIntegral { winding, tol: 0.01 });
    }
    let total = rounded as i64;
    // Handle levels cancel inside commutators, and each boundary level adds
    // a full turn, so the winding is the boundary level sum minus
    // (2 - 2g) - n.
    let boundary_level_sum: i64 = levels[2 * g..].iter().sum();
    debug_assert_eq!(
        total,
        boundary_level_sum - ((2 - 2 * g as i64) - n as i64),
        "winding disagrees with the level sum"
    );
    Ok(total.rem_euclid(m.value() as i64) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::moebius::{make_elliptic, make_hyperbolic, make_parabolic};
    use approx::assert_relative_eq;

    const INF: BoundaryPoint = BoundaryPoint::Infinity;

    fn fin(x: f64) -> BoundaryPoint {
        BoundaryPoint::Finite(x)
    }

    fn m(v: u32) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn level_chart_examples() {
        let id = MoebiusElement::identity();
        assert_relative_eq!(lift(&id, 1).arg(), TWO_PI);
        assert_eq!(level_of(&lift(&id, 1)).unwrap(), 1);
        assert_eq!(level_of(&lift(&id, 0)).unwrap(), 0);
        assert_eq!(level_of(&lift(&id, -3)).unwrap(), -3);
        assert_eq!(level_mod(&lift(&id, -3), m(4)).unwrap(), 1);

        // Argument -5.9 sits in chart -1.
        let g = make_elliptic(0.0, 1.0, -(TWO_PI - 5.9)).unwrap();
        let lifted = lift(&g, -1);
        assert_relative_eq!(lifted.arg(), -5.9, epsilon = 1e-12);
        assert_eq!(level_of(&lifted).unwrap(), -1);

        // Arguments at odd multiples of pi are chart boundaries.
        let half_turn = make_elliptic(0.0, 1.0, std::f64::consts::PI).unwrap();
        assert!(matches!(
            level_of(&lift(&half_turn, 0)),
            Err(KernelError::ChartBoundary { .. })
        ));
    }

    #[test]
    fn lifted_inverse_negates_argument() {
        let g = make_parabolic(fin(1.0), 4.0).unwrap();
        let lifted = lift(&g, 2);
        let inv = lifted.inverse();
        assert_eq!(inv.arg(), -lifted.arg());
        assert_relative_eq!(
            principal_argument(inv.base()),
            -principal_argument(&g),
            epsilon = 1e-15
        );
    }

    #[test]
    fn parabolic_pair_product_jumps_one_level() {
        let a = make_parabolic(INF, 1.0).unwrap();
        let b = make_parabolic(fin(1.0), 4.0).unwrap();
        let product = lifted_product(&lift(&a, 0), &lift(&b, 0)).unwrap();
        assert_eq!(level_of(&product).unwrap(), 1);
        assert_eq!(product_jump_closed_form(&a, &b).unwrap(), 1);
        // The base product has trace -2; the stored representative is
        // sign-normalized.
        assert_eq!(product.base().matrix(), [[7.0, -9.0], [4.0, -5.0]]);
    }

    #[test]
    fn product_argument_is_additive_up_to_jump() {
        // Left lift levels shift the product level one-for-one.
        let a = make_hyperbolic(INF, fin(0.0), 2.0).unwrap();
        let b = make_hyperbolic(fin(0.9), fin(1.0), 2.0).unwrap();
        for k in [-2i64, 0, 3] {
            for l in [-1i64, 0, 2] {
                let p = lifted_product(&lift(&a, k), &lift(&b, l)).unwrap();
                let p00 = lifted_product(&lift(&a, 0), &lift(&b, 0)).unwrap();
                assert_eq!(level_of(&p).unwrap(), level_of(&p00).unwrap() + k + l);
            }
        }
    }

    #[test]
    fn closed_form_hyperbolic_examples() {
        let a = make_hyperbolic(INF, fin(0.0), 2.0).unwrap();
        let plus = make_hyperbolic(fin(0.9), fin(1.0), 2.0).unwrap();
        let zero = make_hyperbolic(fin(0.5), fin(1.0), 2.0).unwrap();
        assert_eq!(product_jump_closed_form(&a, &plus).unwrap(), 1);
        assert_eq!(product_jump_closed_form(&a, &zero).unwrap(), 0);

        // Oracle agreement on both.
        for b in [&plus, &zero] {
            let oracle = level_of(&lifted_product(&lift(&a, 0), &lift(b, 0)).unwrap()).unwrap();
            assert_eq!(oracle, product_jump_closed_form(&a, b).unwrap());
        }
    }

    #[test]
    fn closed_form_rejects_uncovered_configurations() {
        let h = make_hyperbolic(INF, fin(0.0), 2.0).unwrap();
        let p = make_parabolic(fin(1.0), 1.0).unwrap();
        let e = make_elliptic(0.0, 1.0, 1.0).unwrap();
        // Parabolic on the left of a hyperbolic is not covered.
        assert_eq!(
            product_jump_closed_form(&p, &h),
            Err(KernelError::NotCovered)
        );
        assert_eq!(
            product_jump_closed_form(&e, &h),
            Err(KernelError::NotCovered)
        );
        assert_eq!(
            product_jump_closed_form(&h, &e),
            Err(KernelError::NotCovered)
        );
        // Shared fixed point.
        let p0 = make_parabolic(fin(0.0), 1.0).unwrap();
        assert_eq!(
            product_jump_closed_form(&h, &p0),
            Err(KernelError::SharedFixedPoint)
        );
        // Elliptic right factors cannot be path-lifted.
        assert_eq!(
            lifted_product(&lift(&h, 0), &lift(&e, 0)),
            Err(KernelError::EllipticUnsupported)
        );
    }

    #[test]
    fn identity_factors_add_levels() {
        let g = make_hyperbolic(fin(-1.0), fin(1.0), 4.0).unwrap();
        let id = MoebiusElement::identity();
        let p = lifted_product(&lift(&g, 1), &lift(&id, 2)).unwrap();
        assert_eq!(level_of(&p).unwrap(), 3);
        assert_relative_eq!(
            p.arg(),
            principal_argument(&g) + 3.0 * TWO_PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn relation_check_on_a_three_cusp_sphere() {
        let sig = SurfaceSignature::new(0, 0, 3);
        let c1 = make_parabolic(INF, 1.0).unwrap();
        let c2 = make_parabolic(fin(1.0), 4.0).unwrap();
        let c3 = inverse(&compose(&c1, &c2));
        let elements = [c1, c2, c3];
        // Winding with all levels zero is 1, so levels (0, 0, l) satisfy
        // the relation mod 3 exactly when l = -1 mod 3.
        for l in -4..=4i64 {
            let ok = check_lift_relation(sig, &elements, &[0, 0, l], m(3)).unwrap();
            assert_eq!(ok, (l + 1).rem_euclid(3) == 0, "level {l}");
        }
        // Arity errors.
        assert!(matches!(
            check_lift_relation(sig, &elements, &[0, 0], m(3)),
            Err(KernelError::LevelCountMismatch {
                expected: 3,
                got: 2
            })
        ));
        assert!(matches!(
            check_lift_relation(sig, &elements[..2], &[0, 0], m(3)),
            Err(KernelError::LevelCountMismatch {
                expected: 3,
                got: 2
            })
        ));
        // A broken relator is reported, not misjudged.
        let broken = [c1, c2, c2];
        assert!(matches!(
            check_lift_relation(sig, &broken, &[0, 0, 0], m(3)),
            Err(KernelError::RelatorNotIdentity { .. })
        ));
    }
}
