//! Foundational value types: moduli, surface signatures, Arf value tuples,
//! topological types, and the counting / boundary-sum formulas.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced by the combinatorial half of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    /// Moduli must be at least 2.
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u32),
    /// The signature does not admit a hyperbolic structure.
    #[error(
        "invalid signature (g={genus}, l_h={holes}, l_p={punctures}): no hyperbolic structure"
    )]
    InvalidSignature {
        genus: u32,
        holes: u32,
        punctures: u32,
    },
    /// The requested quantity is only defined for surfaces with boundary.
    #[error("closed surface: boundary-sum target is undefined when l_h + l_p = 0")]
    ClosedSurface,
    /// A closed surface carries value tuples only when m divides 2g - 2.
    #[error(
        "closed surface of genus {genus} admits no value tuples mod {m} (m does not divide 2g-2)"
    )]
    ClosedSurfaceInadmissible { genus: u32, m: u32 },
    /// The boundary values do not sum to the required residue.
    #[error("boundary values sum to {got} mod {m}, expected {expected}")]
    SumConstraintViolated { expected: u32, got: u32, m: u32 },
    /// A value list has the wrong length for the signature.
    #[error("{what}: expected {expected} values, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// A residue is outside 0..m.
    #[error("residue {value} out of range for modulus {m}")]
    ResidueOutOfRange { value: u32, m: u32 },
    /// Two arguments disagree on modulus or signature.
    #[error("mismatched modulus or signature between arguments")]
    MismatchedSignature,
    /// A twist refers to a handle or boundary index that does not exist.
    #[error("index {index} out of range for {what} (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    /// The full enumeration would exceed the configured cap.
    #[error("state space of size {size} exceeds cap {cap}")]
    StateSpaceTooLarge { size: u128, cap: u128 },
    /// A serialized census report could not be parsed.
    #[error("malformed census report: {0}")]
    ReportFormat(String),
}

/// The modulus m >= 2 of the value group Z_m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    /// Creates a modulus; `m` must be at least 2.
    pub fn new(m: u32) -> Result<Self, CoreError> {
        if m < 2 {
            return Err(CoreError::InvalidModulus(m));
        }
        Ok(Modulus(m))
    }

    /// The numeric value of the modulus.
    pub fn value(self) -> u32 {
        self.0
    }

    /// Reduces an integer to its canonical residue in `0..m`.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }
}

impl TryFrom<u32> for Modulus {
    type Error = CoreError;
    fn try_from(m: u32) -> Result<Self, CoreError> {
        Modulus::new(m)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The topological signature (g, l_h, l_p) of a surface: genus, number of
/// holes (boundary contours), number of punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfaceSignature {
    /// Genus g.
    #[serde(rename = "g")]
    pub genus: u32,
    /// Hole count l_h.
    #[serde(rename = "l_h")]
    pub holes: u32,
    /// Puncture count l_p.
    #[serde(rename = "l_p")]
    pub punctures: u32,
}

impl SurfaceSignature {
    /// Creates a signature from (g, l_h, l_p).
    pub fn new(genus: u32, holes: u32, punctures: u32) -> Self {
        SurfaceSignature {
            genus,
            holes,
            punctures,
        }
    }

    /// The number n = g + l_h + l_p of standard generators minus g
    /// (handles contribute a_i, b_i; boundary contours contribute c_i).
    pub fn n(&self) -> u32 {
        self.genus + self.holes + self.punctures
    }

    /// Total number of boundary contours l_h + l_p.
    pub fn boundary_count(&self) -> u32 {
        self.holes + self.punctures
    }

    /// True when the surface has no holes and no punctures.
    pub fn is_closed(&self) -> bool {
        self.holes == 0 && self.punctures == 0
    }

    /// Number of entries in a flat value tuple: 2g + l_h + l_p.
    pub fn value_len(&self) -> usize {
        (2 * self.genus + self.holes + self.punctures) as usize
    }
}

impl std::fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.genus, self.holes, self.punctures)
    }
}

/// True iff the signature admits a hyperbolic structure (negative Euler
/// characteristic): closed surfaces need g >= 2, surfaces with boundary
/// need 2g + l_h + l_p >= 3.
pub fn validate_signature(sig: SurfaceSignature) -> bool {
    if sig.is_closed() {
        sig.genus >= 2
    } else {
        2 * sig.genus + sig.holes + sig.punctures >= 3
    }
}

/// Dimension 6g + 3 l_h + 2 l_p - 6 of the deformation space of hyperbolic
/// structures with the given signature.
pub fn teich_dimension(sig: SurfaceSignature) -> Result<i64, CoreError> {
    if !validate_signature(sig) {
        return Err(CoreError::InvalidSignature {
            genus: sig.genus,
            holes: sig.holes,
            punctures: sig.punctures,
        });
    }
    Ok(6 * sig.genus as i64 + 3 * sig.holes as i64 + 2 * sig.punctures as i64 - 6)
}

/// The residue mod m that the boundary values of every value tuple must sum
/// to: (2 - 2g) - (l_h + l_p). Defined only for surfaces with boundary.
pub fn boundary_sum_target(sig: SurfaceSignature, m: Modulus) -> Result<u32, CoreError> {
    if sig.is_closed() {
        return Err(CoreError::ClosedSurface);
    }
    let target = (2 - 2 * sig.genus as i64) - sig.boundary_count() as i64;
    Ok(m.reduce(target))
}

/// Number of distinct value tuples for the signature: m^(2g + l_h + l_p - 1)
/// for surfaces with boundary; m^(2g) for closed surfaces when m divides
/// 2g - 2, and 0 otherwise.
pub fn arf_count(sig: SurfaceSignature, m: Modulus) -> Result<u128, CoreError> {
    if !validate_signature(sig) {
        return Err(CoreError::InvalidSignature {
            genus: sig.genus,
            holes: sig.holes,
            punctures: sig.punctures,
        });
    }
    let m_val = m.value() as u128;
    if sig.is_closed() {
        if (2 * sig.genus as i64 - 2).rem_euclid(m.value() as i64) == 0 {
            Ok(m_val.pow(2 * sig.genus))
        } else {
            Ok(0)
        }
    } else {
        Ok(m_val.pow(2 * sig.genus + sig.boundary_count() - 1))
    }
}

/// The values of an m-Arf function on a standard basis, stored as canonical
/// residues in `0..m`.
///
/// Flat layout: `alpha_1, beta_1, ..., alpha_g, beta_g`, then the hole
/// values, then the puncture values. Tuples with boundary satisfy the
/// boundary-sum constraint; closed tuples exist only when m divides 2g - 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArfBasisValues {
    m: Modulus,
    sig: SurfaceSignature,
    values: Vec<u32>,
}

impl ArfBasisValues {
    /// Builds a tuple from an already-validated flat value vector.
    pub(crate) fn from_flat_unchecked(m: Modulus, sig: SurfaceSignature, values: Vec<u32>) -> Self {
        debug_assert_eq!(values.len(), sig.value_len());
        debug_assert!(values.iter().all(|&v| v < m.value()));
        ArfBasisValues { m, sig, values }
    }

    /// The modulus.
    pub fn modulus(&self) -> Modulus {
        self.m
    }

    /// The surface signature.
    pub fn signature(&self) -> SurfaceSignature {
        self.sig
    }

    /// The flat value vector: handles interleaved (alpha_i, beta_i), then
    /// hole values, then puncture values.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Value alpha_i on the i-th handle (0-based).
    pub fn alpha(&self, i: usize) -> u32 {
        self.values[2 * i]
    }

    /// Value beta_i on the i-th handle (0-based).
    pub fn beta(&self, i: usize) -> u32 {
        self.values[2 * i + 1]
    }

    /// The hole values.
    pub fn gamma_holes(&self) -> &[u32] {
        let start = 2 * self.sig.genus as usize;
        &self.values[start..start + self.sig.holes as usize]
    }

    /// The puncture values.
    pub fn gamma_punctures(&self) -> &[u32] {
        let start = (2 * self.sig.genus + self.sig.holes) as usize;
        &self.values[start..]
    }

    /// All boundary values, holes first.
    pub fn boundary_values(&self) -> &[u32] {
        &self.values[2 * self.sig.genus as usize..]
    }
}

impl std::fmt::Display for ArfBasisValues {
    /// Colon-separated flat values, e.g. `0:1:1:1` (the encoding used in
    /// CSV reports).
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(":"))
    }
}

/// The topological type of a value tuple: genus, the delta invariant, and the
/// counts of boundary values in each residue class (holes and punctures
/// separately).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArfType {
    /// Genus g.
    #[serde(rename = "g")]
    pub genus: u32,
    /// The delta invariant: 0 or 1 for g > 1; a divisor of m (in 1..=m) for
    /// g = 1; 0 by convention for g = 0.
    pub delta: u32,
    /// n_h[j] = number of hole values equal to j, for j in 0..m.
    pub n_h: Vec<u32>,
    /// n_p[j] = number of puncture values equal to j, for j in 0..m.
    pub n_p: Vec<u32>,
}

/// A linear functional on first homology with Z_m coefficients, recorded by
/// its values on the handle classes (interleaved a_i, b_i) and the boundary
/// classes. Boundary values sum to 0 mod m because the boundary classes sum
/// to zero in homology.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearFunctional {
    m: Modulus,
    sig: SurfaceSignature,
    handle_values: Vec<u32>,
    boundary_values: Vec<u32>,
}

impl LinearFunctional {
    /// Creates a functional, checking lengths, residue ranges, and the
    /// boundary-sum-zero invariant.
    pub fn new(
        m: Modulus,
        sig: SurfaceSignature,
        handle_values: Vec<u32>,
        boundary_values: Vec<u32>,
    ) -> Result<Self, CoreError> {
        if handle_values.len() != 2 * sig.genus as usize {
            return Err(CoreError::LengthMismatch {
                what: "handle values",
                expected: 2 * sig.genus as usize,
                got: handle_values.len(),
            });
        }
        if boundary_values.len() != sig.boundary_count() as usize {
            return Err(CoreError::LengthMismatch {
                what: "boundary values",
                expected: sig.boundary_count() as usize,
                got: boundary_values.len(),
            });
        }
        for &v in handle_values.iter().chain(boundary_values.iter()) {
            if v >= m.value() {
                return Err(CoreError::ResidueOutOfRange {
                    value: v,
                    m: m.value(),
                });
            }
        }
        let sum: i64 = boundary_values.iter().map(|&v| v as i64).sum();
        if m.reduce(sum) != 0 {
            return Err(CoreError::SumConstraintViolated {
                expected: 0,
                got: m.reduce(sum),
                m: m.value(),
            });
        }
        Ok(LinearFunctional {
            m,
            sig,
            handle_values,
            boundary_values,
        })
    }

    /// The zero functional.
    pub fn zero(m: Modulus, sig: SurfaceSignature) -> Self {
        LinearFunctional {
            m,
            sig,
            handle_values: vec![0; 2 * sig.genus as usize],
            boundary_values: vec![0; sig.boundary_count() as usize],
        }
    }

    /// The modulus.
    pub fn modulus(&self) -> Modulus {
        self.m
    }

    /// The surface signature.
    pub fn signature(&self) -> SurfaceSignature {
        self.sig
    }

    /// Values on the handle classes, interleaved (a_i, b_i).
    pub fn handle_values(&self) -> &[u32] {
        &self.handle_values
    }

    /// Values on the boundary classes, holes first.
    pub fn boundary_values(&self) -> &[u32] {
        &self.boundary_values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(g: u32, h: u32, p: u32) -> SurfaceSignature {
        SurfaceSignature::new(g, h, p)
    }

    fn m(v: u32) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn modulus_rejects_small_values() {
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(1).is_err());
        assert_eq!(Modulus::new(2).unwrap().value(), 2);
    }

    #[test]
    fn signature_gate() {
        assert!(validate_signature(sig(0, 3, 0)));
        assert!(!validate_signature(sig(1, 0, 0)));
        assert!(validate_signature(sig(2, 0, 0)));
        // Three boundary contours on a sphere are enough.
        assert!(validate_signature(sig(0, 0, 3)));
        assert!(!validate_signature(sig(0, 0, 2)));
        assert!(!validate_signature(sig(0, 2, 0)));
        assert!(validate_signature(sig(1, 1, 0)));
        assert!(validate_signature(sig(1, 0, 1)));
        assert!(!validate_signature(sig(0, 0, 0)));
    }

    #[test]
    fn teich_dimension_values() {
        assert_eq!(teich_dimension(sig(2, 0, 0)).unwrap(), 6);
        assert_eq!(teich_dimension(sig(0, 3, 0)).unwrap(), 3);
        assert_eq!(teich_dimension(sig(1, 1, 1)).unwrap(), 5);
        assert_eq!(teich_dimension(sig(0, 0, 3)).unwrap(), 0);
        assert!(teich_dimension(sig(1, 0, 0)).is_err());
    }

    #[test]
    fn boundary_sum_target_values() {
        assert_eq!(boundary_sum_target(sig(0, 0, 3), m(5)).unwrap(), 4);
        assert_eq!(boundary_sum_target(sig(1, 1, 0), m(6)).unwrap(), 5);
        assert_eq!(boundary_sum_target(sig(2, 0, 1), m(2)).unwrap(), 1);
        assert_eq!(
            boundary_sum_target(sig(2, 0, 0), m(2)),
            Err(CoreError::ClosedSurface)
        );
    }

    #[test]
    fn arf_count_values() {
        assert_eq!(arf_count(sig(1, 1, 0), m(3)).unwrap(), 9);
        assert_eq!(arf_count(sig(2, 0, 0), m(2)).unwrap(), 16);
        assert_eq!(arf_count(sig(2, 0, 0), m(3)).unwrap(), 0);
        assert_eq!(arf_count(sig(2, 0, 0), m(4)).unwrap(), 0);
        assert_eq!(arf_count(sig(0, 0, 3), m(2)).unwrap(), 4);
        assert_eq!(arf_count(sig(3, 0, 0), m(2)).unwrap(), 64);
        assert!(arf_count(sig(1, 0, 0), m(2)).is_err());
    }

    #[test]
    fn functional_boundary_sum_zero_enforced() {
        assert!(LinearFunctional::new(m(3), sig(1, 1, 0), vec![1, 2], vec![0]).is_ok());
        assert!(LinearFunctional::new(m(3), sig(1, 1, 0), vec![1, 2], vec![1]).is_err());
        assert!(LinearFunctional::new(m(3), sig(0, 0, 3), vec![], vec![1, 2, 0]).is_ok());
        assert!(LinearFunctional::new(m(3), sig(0, 0, 3), vec![], vec![1, 1, 0]).is_err());
    }

    #[test]
    fn modulus_serde_round_trip() {
        let j = serde_json::to_string(&m(4)).unwrap();
        assert_eq!(j, "4");
        let back: Modulus = serde_json::from_str(&j).unwrap();
        assert_eq!(back, m(4));
        assert!(serde_json::from_str::<Modulus>("1").is_err());
    }

    #[test]
    fn signature_serde_field_names() {
        let j = serde_json::to_string(&sig(1, 2, 3)).unwrap();
        assert_eq!(j, r#"{"g":1,"l_h":2,"l_p":3}"#);
    }
}
