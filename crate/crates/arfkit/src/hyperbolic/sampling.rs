//! Randomized generators for level-arithmetic testing: pairs of isometries
//! drawn from regimes with a known level jump, plus a general element
//! sampler. Every pair is conjugated by a random hyperbolic element so
//! that downstream code never sees the normalized chart the pair was
//! drawn in; the expected jump is invariant under that conjugation.

use rand::Rng;

use super::moebius::{
    compose, element_info, inverse, make_elliptic, make_hyperbolic, make_parabolic, BoundaryPoint,
    ElementInfo, MoebiusElement,
};

const INF: BoundaryPoint = BoundaryPoint::Infinity;

fn fin(x: f64) -> BoundaryPoint {
    BoundaryPoint::Finite(x)
}

/// A sampling regime: the classes of the two factors and the level jump
/// their product realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpRegime {
    /// Two hyperbolics whose product climbs one level.
    HypHypPlus,
    /// Two hyperbolics whose product descends one level.
    HypHypMinus,
    /// Two hyperbolics whose product stays on the base level.
    HypHypZero,
    /// Hyperbolic times parabolic, staying on the base level.
    HypParZero,
    /// Hyperbolic times parabolic, climbing one level.
    HypParPlus,
    /// Two parabolics, staying on the base level.
    ParParZero,
    /// Two parabolics, climbing one level.
    ParParPlus,
}

impl JumpRegime {
    pub const ALL: [JumpRegime; 7] = [
        JumpRegime::HypHypPlus,
        JumpRegime::HypHypMinus,
        JumpRegime::HypHypZero,
        JumpRegime::HypParZero,
        JumpRegime::HypParPlus,
        JumpRegime::ParParZero,
        JumpRegime::ParParPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JumpRegime::HypHypPlus => "hyp-hyp-plus",
            JumpRegime::HypHypMinus => "hyp-hyp-minus",
            JumpRegime::HypHypZero => "hyp-hyp-zero",
            JumpRegime::HypParZero => "hyp-par-zero",
            JumpRegime::HypParPlus => "hyp-par-plus",
            JumpRegime::ParParZero => "par-par-zero",
            JumpRegime::ParParPlus => "par-par-plus",
        }
    }

    pub fn expected_jump(self) -> i64 {
        match self {
            JumpRegime::HypHypPlus | JumpRegime::HypParPlus | JumpRegime::ParParPlus => 1,
            JumpRegime::HypHypMinus => -1,
            _ => 0,
        }
    }
}

/// One candidate pair in the normalized chart (first factor's data pinned
/// at infinity / zero), or `None` when the draw landed too close to a
/// decision boundary and must be retried.
fn draw_in_chart<R: Rng + ?Sized>(
    regime: JumpRegime,
    rng: &mut R,
) -> Option<(MoebiusElement, MoebiusElement)> {
    match regime {
        JumpRegime::HypHypPlus | JumpRegime::HypHypMinus | JumpRegime::HypHypZero => {
            let l1 = rng.random_range(1.2..8.0);
            let l2 = rng.random_range(1.2..8.0);
            // Position of the repelling-side decision boundary relative
            // to beta, always strictly inside (0, 1) for l1, l2 > 1.
            let r = (l1 + l2) / (1.0 + l1 * l2);
            let (alpha, beta): (f64, f64) = match regime {
                JumpRegime::HypHypPlus => {
                    let beta = rng.random_range(0.2..4.0);
                    (beta * (r + (1.0 - r) * rng.random_range(0.05..0.95)), beta)
                }
                JumpRegime::HypHypMinus => {
                    let beta = -rng.random_range(0.2..4.0);
                    (
                        beta + (r * beta - beta) * rng.random_range(0.05..0.95),
                        beta,
                    )
                }
                _ => {
                    let sign = |rng: &mut R| if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    let alpha = sign(rng) * rng.random_range(0.2..4.0);
                    let beta = sign(rng) * rng.random_range(0.2..4.0);
                    let (lo, hi) = if beta > 0.0 {
                        (r * beta, beta)
                    } else {
                        (beta, r * beta)
                    };
                    if alpha > lo - 0.05 && alpha < hi + 0.05 {
                        return None;
                    }
                    (alpha, beta)
                }
            };
            if (alpha - beta).abs() < 1e-3 {
                return None;
            }
            let a = make_hyperbolic(INF, fin(0.0), l1).ok()?;
            let b = make_hyperbolic(fin(alpha), fin(beta), l2).ok()?;
            Some((a, b))
        }
        JumpRegime::HypParZero | JumpRegime::HypParPlus => {
            let l1 = rng.random_range(1.2..8.0);
            let alpha = rng.random_range(0.2..4.0);
            let bound = (l1 + 1.0) / (l1 - 1.0);
            let factor = if regime == JumpRegime::HypParZero {
                rng.random_range(0.05..0.95)
            } else {
                rng.random_range(1.05..4.0)
            };
            let l2 = bound / alpha * factor;
            let a = make_hyperbolic(INF, fin(0.0), l1).ok()?;
            let b = make_parabolic(fin(alpha), l2).ok()?;
            Some((a, b))
        }
        JumpRegime::ParParZero | JumpRegime::ParParPlus => {
            let l1 = rng.random_range(0.1..2.0);
            let alpha = rng.random_range(-3.0..3.0);
            let factor = if regime == JumpRegime::ParParZero {
                rng.random_range(0.05..0.95)
            } else {
                rng.random_range(1.05..6.0)
            };
            let l2 = 2.0 / l1 * factor;
            let a = make_parabolic(INF, l1).ok()?;
            let b = make_parabolic(fin(alpha), l2).ok()?;
            Some((a, b))
        }
    }
}

/// Conjugates an exactly-classified element by rebuilding it from its
/// mapped fixed-point data, so the result sits exactly on its class
/// instead of carrying matrix-conjugation round-off. `None` when the
/// mapped data degenerates (e.g. both axis endpoints collide numerically).
fn conjugate_on_class(q: &MoebiusElement, g: &MoebiusElement) -> Option<MoebiusElement> {
    match element_info(g).ok()? {
        ElementInfo::Hyperbolic {
            attracting,
            repelling,
            lambda,
        } => make_hyperbolic(
            q.apply_boundary(attracting),
            q.apply_boundary(repelling),
            lambda,
        )
        .ok(),
        ElementInfo::Parabolic { fixed, .. } => {
            let moved = compose(&compose(q, g), &inverse(q));
            let mapped = q.apply_boundary(fixed);
            let l = match mapped {
                BoundaryPoint::Infinity => moved.matrix()[0][1],
                BoundaryPoint::Finite(_) => -moved.matrix()[1][0],
            };
            make_parabolic(mapped, l).ok()
        }
        _ => None,
    }
}

/// Largest matrix entry allowed after conjugation: keeps the pair well
/// conditioned for path tracking and classification downstream.
const ENTRY_CAP: f64 = 1e4;

fn tame(g: &MoebiusElement) -> bool {
    g.matrix().iter().flatten().all(|e| e.abs() <= ENTRY_CAP)
}

/// Samples a pair of isometries realizing the regime's level jump,
/// conjugated into general position. Returns the pair and the expected
/// jump of their product relative to base-level lifts.
///
/// Draws are rejected until the product's trace is at least 0.05 away
/// from zero, so the product never sits on a level-chart boundary.
pub fn sample_pair<R: Rng + ?Sized>(
    regime: JumpRegime,
    rng: &mut R,
) -> (MoebiusElement, MoebiusElement, i64) {
    loop {
        let Some((a, b)) = draw_in_chart(regime, rng) else {
            continue;
        };
        if compose(&a, &b).trace().abs() < 0.05 {
            continue;
        }
        let p: f64 = rng.random_range(-3.0..3.0);
        let q: f64 = rng.random_range(-3.0..3.0);
        if (p - q).abs() < 0.1 {
            continue;
        }
        let mu = rng.random_range(1.5..5.0);
        let Ok(conj) = make_hyperbolic(fin(p), fin(q), mu) else {
            continue;
        };
        let Some(a) = conjugate_on_class(&conj, &a) else {
            continue;
        };
        let Some(b) = conjugate_on_class(&conj, &b) else {
            continue;
        };
        if !tame(&a) || !tame(&b) || compose(&a, &b).trace().abs() < 0.04 {
            continue;
        }
        return (a, b, regime.expected_jump());
    }
}

/// Samples a single isometry of random class (hyperbolic, parabolic, or
/// elliptic) whose trace is bounded away from zero, so its principal
/// argument is well inside the level chart.
pub fn sample_element<R: Rng + ?Sized>(rng: &mut R) -> MoebiusElement {
    loop {
        let candidate = match rng.random_range(0..3) {
            0 => {
                let p: f64 = rng.random_range(-3.0..3.0);
                let q: f64 = rng.random_range(-3.0..3.0);
                if (p - q).abs() < 0.1 {
                    continue;
                }
                let l = rng.random_range(1.2..9.0);
                if rng.random_range(0..4) == 0 {
                    make_hyperbolic(INF, fin(q), l)
                } else {
                    make_hyperbolic(fin(p), fin(q), l)
                }
            }
            1 => {
                let magnitude = rng.random_range(0.1..3.0);
                let l = if rng.random_bool(0.5) {
                    magnitude
                } else {
                    -magnitude
                };
                if rng.random_range(0..4) == 0 {
                    make_parabolic(INF, l)
                } else {
                    make_parabolic(fin(rng.random_range(-3.0..3.0)), l)
                }
            }
            _ => {
                let x = rng.random_range(-2.0..2.0);
                let y = rng.random_range(0.3..3.0);
                let magnitude = rng.random_range(0.1..std::f64::consts::PI - 0.1);
                let angle = if rng.random_bool(0.5) {
                    magnitude
                } else {
                    -magnitude
                };
                make_elliptic(x, y, angle)
            }
        };
        match candidate {
            Ok(g) if g.trace().abs() > 0.05 => return g,
            _ => continue,
        }
    }
}
