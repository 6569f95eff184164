//! Orientation-preserving isometries of the upper half-plane as normalized
//! 2x2 real matrices, with constructors for the three conjugacy classes,
//! classification with invariant extraction, and the principal argument.

use super::KernelError;

/// A point of the boundary circle R union {infinity} of the upper
/// half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    /// A real boundary point.
    Finite(f64),
    /// The point at infinity.
    Infinity,
}

impl BoundaryPoint {
    /// True for the point at infinity.
    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// The angle coordinate 2 atan(x) on the boundary circle, with infinity
    /// at pi. Monotone in x, so circular order of boundary points is angle
    /// order.
    pub fn circle_angle(self) -> f64 {
        match self {
            BoundaryPoint::Finite(x) => 2.0 * x.atan(),
            BoundaryPoint::Infinity => std::f64::consts::PI,
        }
    }

    /// Distance between two boundary points along the angle coordinate.
    pub fn circle_distance(self, other: BoundaryPoint) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let diff = self.circle_angle() - other.circle_angle();
        let wrapped = diff - two_pi * (diff / two_pi).round();
        wrapped.abs()
    }
}

impl std::fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// An orientation-preserving isometry of the upper half-plane, stored as
/// the matrix representative with determinant 1 and non-negative trace
/// (ties at trace 0 broken by the sign of the lower-left entry).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusElement {
    mat: [[f64; 2]; 2],
}

/// How far the determinant may drift from 1 before renormalization; within
/// the band the entries are kept bit-exact, which preserves engineered
/// traces such as the exact 2 of parabolic constructors.
const DET_TOLERANCE: f64 = 1e-12;

/// Half-width of the identity snap zone and the inner parabolic snap zone.
const EXACT_TOLERANCE: f64 = 1e-12;

/// Outer edge of the classification ambiguity band around trace 2.
const DEGENERACY_BAND: f64 = 1e-9;

impl MoebiusElement {
    /// The identity isometry.
    pub fn identity() -> Self {
        MoebiusElement {
            mat: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    pub(crate) fn from_raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        let det = a * d - b * c;
        debug_assert!(
            det.is_finite() && det > 0.0,
            "matrix must have positive determinant"
        );
        let (mut a, mut b, mut c, mut d) = (a, b, c, d);
        // The determinant of an honestly unimodular matrix carries rounding
        // error proportional to the square of the entry scale, so the
        // renormalization criterion must be relative: rescaling an exactly
        // constructed representative would perturb engineered traces.
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs()).max(1.0);
        if (det - 1.0).abs() > DET_TOLERANCE * scale * scale {
            let s = det.sqrt().recip();
            a *= s;
            b *= s;
            c *= s;
            d *= s;
        }
        let t = a + d;
        let flip = if t != 0.0 {
            t < 0.0
        } else if c != 0.0 {
            c < 0.0
        } else {
            a < 0.0
        };
        if flip {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        MoebiusElement {
            mat: [[a, b], [c, d]],
        }
    }

    /// The normalized matrix representative `[[a, b], [c, d]]`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.mat
    }

    /// Trace of the normalized representative (always >= 0).
    pub fn trace(&self) -> f64 {
        self.mat[0][0] + self.mat[1][1]
    }

    /// Largest entrywise distance between the representatives.
    pub fn sup_distance(&self, other: &MoebiusElement) -> f64 {
        let mut max: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                max = max.max((self.mat[i][j] - other.mat[i][j]).abs());
            }
        }
        max
    }

    /// The image of a boundary point under the isometry's boundary action.
    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let [[a, b], [c, d]] = self.mat;
        match p {
            BoundaryPoint::Infinity => {
                if c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(a / c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let denom = c * x + d;
                if denom == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((a * x + b) / denom)
                }
            }
        }
    }
}

fn require_finite(value: f64, what: &str) -> Result<(), KernelError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(KernelError::DegenerateParameters(format!(
            "{what} must be finite, got {value}"
        )))
    }
}

/// Raw matrix of the canonical hyperbolic form, without normalization.
/// Callers guarantee distinct fixed points and lambda > 0; at lambda = 1
/// the entries are exactly the identity, which makes this usable as a path
/// from the identity to the element.
pub(crate) fn tau_entries(att: BoundaryPoint, rep: BoundaryPoint, lambda: f64) -> [[f64; 2]; 2] {
    let s = lambda.sqrt();
    match (att, rep) {
        (BoundaryPoint::Finite(alpha), BoundaryPoint::Finite(beta)) => {
            let k = ((alpha - beta) * s).recip();
            [
                [
                    k * (lambda * alpha - beta),
                    k * (-(lambda - 1.0) * alpha * beta),
                ],
                [k * (lambda - 1.0), k * (alpha - lambda * beta)],
            ]
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(beta)) => {
            [[lambda / s, -(lambda - 1.0) * beta / s], [0.0, 1.0 / s]]
        }
        (BoundaryPoint::Finite(alpha), BoundaryPoint::Infinity) => {
            [[1.0 / s, (lambda - 1.0) * alpha / s], [0.0, lambda / s]]
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {
            unreachable!("hyperbolic fixed points are distinct")
        }
    }
}

/// Raw matrix of the canonical parabolic form, without normalization. The
/// trace is bit-exactly 2, and lambda = 0 gives exactly the identity.
pub(crate) fn parabolic_entries(fixed: BoundaryPoint, lambda: f64) -> [[f64; 2]; 2] {
    match fixed {
        BoundaryPoint::Infinity => [[1.0, lambda], [0.0, 1.0]],
        BoundaryPoint::Finite(alpha) => {
            let a = 1.0 - lambda * alpha;
            [[a, lambda * alpha * alpha], [-lambda, 2.0 - a]]
        }
    }
}

/// The isometry with attracting fixed point `att`, repelling fixed point
/// `rep`, and translation multiplier `lambda > 1` along the axis from `rep`
/// to `att`. Values 0 < lambda < 1 are accepted and swap the roles of the
/// two points; lambda = 1 would give the identity and is rejected.
pub fn make_hyperbolic(
    att: BoundaryPoint,
    rep: BoundaryPoint,
    lambda: f64,
) -> Result<MoebiusElement, KernelError> {
    require_finite(lambda, "lambda")?;
    if lambda <= 0.0 {
        return Err(KernelError::DegenerateParameters(format!(
            "hyperbolic multiplier must be positive, got {lambda}"
        )));
    }
    if lambda == 1.0 {
        return Err(KernelError::DegenerateParameters(
            "hyperbolic multiplier 1 gives the identity".into(),
        ));
    }
    match (att, rep) {
        (BoundaryPoint::Finite(alpha), BoundaryPoint::Finite(beta)) => {
            require_finite(alpha, "attracting fixed point")?;
            require_finite(beta, "repelling fixed point")?;
            if alpha == beta {
                return Err(KernelError::DegenerateParameters(
                    "fixed points must be distinct".into(),
                ));
            }
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(beta)) => {
            require_finite(beta, "repelling fixed point")?;
        }
        (BoundaryPoint::Finite(alpha), BoundaryPoint::Infinity) => {
            require_finite(alpha, "attracting fixed point")?;
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {
            return Err(KernelError::DegenerateParameters(
                "fixed points must be distinct".into(),
            ))
        }
    }
    let [[a, b], [c, d]] = tau_entries(att, rep, lambda);
    Ok(MoebiusElement::from_raw(a, b, c, d))
}

/// The parabolic isometry with the given fixed point and parameter
/// `lambda != 0`; positive lambda gives the positively oriented parabolic.
/// The trace of the representative is exactly 2.
pub fn make_parabolic(fixed: BoundaryPoint, lambda: f64) -> Result<MoebiusElement, KernelError> {
    require_finite(lambda, "lambda")?;
    if lambda == 0.0 {
        return Err(KernelError::DegenerateParameters(
            "parabolic parameter 0 gives the identity".into(),
        ));
    }
    if let BoundaryPoint::Finite(alpha) = fixed {
        require_finite(alpha, "fixed point")?;
    }
    let [[a, b], [c, d]] = parabolic_entries(fixed, lambda);
    Ok(MoebiusElement::from_raw(a, b, c, d))
}

/// The rotation by `angle` about the interior point x + iy (y > 0).
pub fn make_elliptic(x: f64, y: f64, angle: f64) -> Result<MoebiusElement, KernelError> {
    require_finite(x, "fixed point x")?;
    require_finite(y, "fixed point y")?;
    require_finite(angle, "angle")?;
    if y <= 0.0 {
        return Err(KernelError::DegenerateParameters(format!(
            "fixed point must lie in the upper half-plane, got y = {y}"
        )));
    }
    let (sin, cos) = (angle / 2.0).sin_cos();
    // Conjugate the rotation about i by the map sending i to x + iy.
    let r = y.sqrt();
    let (p, q, s) = (r, x / r, 1.0 / r);
    // T R T^{-1} with T = [[p, q], [0, s]], T^{-1} = [[s, -q], [0, p]]
    // (det(T) = p s = 1).
    let a = (p * cos + q * sin) * s;
    let b = -(p * cos + q * sin) * q + (-p * sin + q * cos) * p;
    let c = s * sin * s;
    let d = -s * sin * q + s * cos * p;
    Ok(MoebiusElement::from_raw(a, b, c, d))
}

/// The product g1 g2 (apply g2 first).
pub fn compose(g1: &MoebiusElement, g2: &MoebiusElement) -> MoebiusElement {
    let [[a1, b1], [c1, d1]] = g1.matrix();
    let [[a2, b2], [c2, d2]] = g2.matrix();
    MoebiusElement::from_raw(
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
    )
}

/// The inverse isometry.
pub fn inverse(g: &MoebiusElement) -> MoebiusElement {
    let [[a, b], [c, d]] = g.matrix();
    MoebiusElement::from_raw(d, -b, -c, a)
}

/// Classification of an isometry together with its class invariants.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementInfo {
    /// The identity (representative within 1e-12 of the identity matrix).
    Identity,
    /// Two boundary fixed points; `lambda > 1` is the translation
    /// multiplier (the square of the dominant eigenvalue).
    Hyperbolic {
        attracting: BoundaryPoint,
        repelling: BoundaryPoint,
        lambda: f64,
    },
    /// One boundary fixed point; `lambda` is the parameter recovering the
    /// element via `make_parabolic`.
    Parabolic { fixed: BoundaryPoint, lambda: f64 },
    /// One interior fixed point x + iy and a rotation angle in [-pi, pi].
    Elliptic { x: f64, y: f64, angle: f64 },
}

impl ElementInfo {
    /// Short class name for diagnostics.
    pub fn class_name(&self) -> &'static str {
        match self {
            ElementInfo::Identity => "identity",
            ElementInfo::Hyperbolic { .. } => "hyperbolic",
            ElementInfo::Parabolic { .. } => "parabolic",
            ElementInfo::Elliptic { .. } => "elliptic",
        }
    }
}

/// Classifies an isometry and extracts its invariants.
///
/// The representative is compared to the identity first (snap zone 1e-12);
/// then the trace decides: within 1e-12 of 2 the element is treated as
/// parabolic, between 1e-12 and 1e-9 from 2 classification is refused with
/// `Degenerate`, above it is hyperbolic and below elliptic.
pub fn element_info(g: &MoebiusElement) -> Result<ElementInfo, KernelError> {
    let [[a, b], [c, d]] = g.matrix();
    let id_dist = g.sup_distance(&MoebiusElement::identity());
    if id_dist <= EXACT_TOLERANCE {
        return Ok(ElementInfo::Identity);
    }
    let t = a + d;
    let dev = (t - 2.0).abs();
    if dev <= EXACT_TOLERANCE {
        if c != 0.0 {
            return Ok(ElementInfo::Parabolic {
                fixed: BoundaryPoint::Finite((a - d) / (2.0 * c)),
                lambda: -c,
            });
        }
        return Ok(ElementInfo::Parabolic {
            fixed: BoundaryPoint::Infinity,
            lambda: b,
        });
    }
    if dev <= DEGENERACY_BAND {
        return Err(KernelError::Degenerate { trace: t });
    }
    if t > 2.0 {
        let mu = (t + (t * t - 4.0).sqrt()) / 2.0;
        let lambda = mu * mu;
        if c != 0.0 {
            // The eigenvector for eigenvalue mu is (z, 1) with c z + d = mu;
            // the dominant eigenvalue marks the attracting fixed point.
            let attracting = BoundaryPoint::Finite((mu - d) / c);
            let repelling = BoundaryPoint::Finite((1.0 / mu - d) / c);
            Ok(ElementInfo::Hyperbolic {
                attracting,
                repelling,
                lambda,
            })
        } else {
            let finite = BoundaryPoint::Finite(b / (d - a));
            if a > d {
                Ok(ElementInfo::Hyperbolic {
                    attracting: BoundaryPoint::Infinity,
                    repelling: finite,
                    lambda,
                })
            } else {
                Ok(ElementInfo::Hyperbolic {
                    attracting: finite,
                    repelling: BoundaryPoint::Infinity,
                    lambda,
                })
            }
        }
    } else {
        // 0 <= t < 2: a rotation. cos(angle/2) = t/2, and the sign of the
        // lower-left entry is the sign of sin(angle/2).
        let half_cos = t / 2.0;
        let half_sin_abs = (1.0 - half_cos * half_cos).max(0.0).sqrt();
        let half_sin = if c >= 0.0 {
            half_sin_abs
        } else {
            -half_sin_abs
        };
        let angle = 2.0 * half_sin.atan2(half_cos);
        let disc = (4.0 - t * t).max(0.0).sqrt();
        let x = (a - d) / (2.0 * c);
        let y = disc / (2.0 * c.abs());
        Ok(ElementInfo::Elliptic { x, y, angle })
    }
}

/// The principal argument of an isometry: 2 atan2(b - c, a + d) of the
/// normalized representative, in [-pi, pi]. The extremes +-pi occur only
/// for rotations of trace 0.
pub fn principal_argument(g: &MoebiusElement) -> f64 {
    let [[a, b], [c, d]] = g.matrix();
    2.0 * (b - c).atan2(a + d)
}

/// Whether the axes of two hyperbolic isometries cross in the upper
/// half-plane, decided by strict interleaving of the fixed-point pairs on
/// the boundary circle.
///
/// Errors: `DegenerateElement` when either element is not hyperbolic,
/// `SharedFixedPoint` when fixed points coincide within 1e-9 in the angle
/// coordinate, `Degenerate` passed through from classification.
pub fn axes_intersect(g1: &MoebiusElement, g2: &MoebiusElement) -> Result<bool, KernelError> {
    let fixed_pair = |g: &MoebiusElement| -> Result<(f64, f64), KernelError> {
        match element_info(g)? {
            ElementInfo::Hyperbolic {
                attracting,
                repelling,
                ..
            } => Ok((attracting.circle_angle(), repelling.circle_angle())),
            _ => Err(KernelError::DegenerateElement),
        }
    };
    let (a1, r1) = fixed_pair(g1)?;
    let (a2, r2) = fixed_pair(g2)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let close = |u: f64, v: f64| {
        let diff = u - v;
        (diff - two_pi * (diff / two_pi).round()).abs() < 1e-9
    };
    if close(a1, a2) || close(a1, r2) || close(r1, a2) || close(r1, r2) {
        return Err(KernelError::SharedFixedPoint);
    }
    // Walk the circle from a1 to r1; the axes cross exactly when one
    // endpoint of the other axis is inside that arc and one is outside.
    let inside = |theta: f64| {
        let span = (r1 - a1).rem_euclid(two_pi);
        let offset = (theta - a1).rem_euclid(two_pi);
        offset > 0.0 && offset < span
    };
    Ok(inside(a2) != inside(r2))
}
