//! Construction and enumeration of value tuples, the affine structure given
//! by linear functionals, and the induced Dehn-twist action on tuples.

use crate::core_types::{
    arf_count, boundary_sum_target, validate_signature, ArfBasisValues, CoreError,
    LinearFunctional, Modulus, SurfaceSignature,
};

/// One generator of the induced mapping-class-group action on value tuples.
///
/// Handle indices are 0-based. `HoleSwap { first: k }` transposes the hole
/// values at positions k and k+1 (and similarly for punctures); swaps never
/// cross the hole/puncture divide because homeomorphisms preserve it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Twist {
    /// alpha_i := alpha_i +/- beta_i.
    T1a { handle: usize, positive: bool },
    /// beta_i := beta_i +/- alpha_i.
    T1b { handle: usize, positive: bool },
    /// Acts on two handles i < j: with the plus direction,
    /// beta_i := beta_i - alpha_i - alpha_j - 1 and
    /// beta_j := beta_j - alpha_j - alpha_i - 1; minus adds instead.
    T2 {
        first: usize,
        second: usize,
        positive: bool,
    },
    /// Mixes the last handle with the first boundary value gamma: plus maps
    /// (alpha_g, beta_g) to (-beta_g, alpha_g - gamma - 1); minus is its
    /// inverse. Requires g >= 1 and at least one boundary contour.
    T3 { positive: bool },
    /// Swaps the value pairs of two handles.
    T4 { first: usize, second: usize },
    /// Negates both values of a handle: (alpha, beta) := (-alpha, -beta).
    T5a { handle: usize },
    /// Quarter rotation of a handle's value pair: plus maps (alpha, beta) to
    /// (-beta, alpha); minus is its inverse.
    T5b { handle: usize, positive: bool },
    /// Transposes adjacent hole values at positions first, first + 1.
    HoleSwap { first: usize },
    /// Transposes adjacent puncture values at positions first, first + 1.
    PunctureSwap { first: usize },
}

impl std::fmt::Display for Twist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn sign(positive: bool) -> char {
            if positive {
                '+'
            } else {
                '-'
            }
        }
        match self {
            Twist::T1a { handle, positive } => write!(f, "T1a{}({})", sign(*positive), handle),
            Twist::T1b { handle, positive } => write!(f, "T1b{}({})", sign(*positive), handle),
            Twist::T2 {
                first,
                second,
                positive,
            } => {
                write!(f, "T2{}({},{})", sign(*positive), first, second)
            }
            Twist::T3 { positive } => write!(f, "T3{}", sign(*positive)),
            Twist::T4 { first, second } => write!(f, "T4({},{})", first, second),
            Twist::T5a { handle } => write!(f, "T5a({})", handle),
            Twist::T5b { handle, positive } => write!(f, "T5b{}({})", sign(*positive), handle),
            Twist::HoleSwap { first } => write!(f, "Hswap({},{})", first, first + 1),
            Twist::PunctureSwap { first } => write!(f, "Pswap({},{})", first, first + 1),
        }
    }
}

/// A composable sequence of twists, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwistWord {
    /// The twists, in application order.
    pub twists: Vec<Twist>,
}

impl TwistWord {
    /// The empty word.
    pub fn new() -> Self {
        TwistWord { twists: Vec::new() }
    }

    /// Appends one twist.
    pub fn push(&mut self, t: Twist) {
        self.twists.push(t);
    }

    /// Number of twists in the word.
    pub fn len(&self) -> usize {
        self.twists.len()
    }

    /// True when the word is empty.
    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }
}

impl std::fmt::Display for TwistWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twists.is_empty() {
            return write!(f, "(empty)");
        }
        let parts: Vec<String> = self.twists.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Builds a validated value tuple from separate alpha/beta/hole/puncture
/// lists (alpha and beta each of length g).
///
/// Checks the signature gate, lengths, residue ranges, the boundary-sum
/// constraint for surfaces with boundary, and the divisibility condition
/// m | 2g - 2 for closed surfaces.
pub fn new_arf(
    m: Modulus,
    sig: SurfaceSignature,
    alpha: &[u32],
    beta: &[u32],
    gamma_holes: &[u32],
    gamma_punctures: &[u32],
) -> Result<ArfBasisValues, CoreError> {
    if !validate_signature(sig) {
        return Err(CoreError::InvalidSignature {
            genus: sig.genus,
            holes: sig.holes,
            punctures: sig.punctures,
        });
    }
    let g = sig.genus as usize;
    if alpha.len() != g {
        return Err(CoreError::LengthMismatch {
            what: "alpha values",
            expected: g,
            got: alpha.len(),
        });
    }
    if beta.len() != g {
        return Err(CoreError::LengthMismatch {
            what: "beta values",
            expected: g,
            got: beta.len(),
        });
    }
    if gamma_holes.len() != sig.holes as usize {
        return Err(CoreError::LengthMismatch {
            what: "hole values",
            expected: sig.holes as usize,
            got: gamma_holes.len(),
        });
    }
    if gamma_punctures.len() != sig.punctures as usize {
        return Err(CoreError::LengthMismatch {
            what: "puncture values",
            expected: sig.punctures as usize,
            got: gamma_punctures.len(),
        });
    }
    let mut values = Vec::with_capacity(sig.value_len());
    for i in 0..g {
        values.push(alpha[i]);
        values.push(beta[i]);
    }
    values.extend_from_slice(gamma_holes);
    values.extend_from_slice(gamma_punctures);
    from_flat(m, sig, values)
}

/// Builds a validated value tuple from a flat vector (handles interleaved,
/// then holes, then punctures).
pub fn from_flat(
    m: Modulus,
    sig: SurfaceSignature,
    values: Vec<u32>,
) -> Result<ArfBasisValues, CoreError> {
    if !validate_signature(sig) {
        return Err(CoreError::InvalidSignature {
            genus: sig.genus,
            holes: sig.holes,
            punctures: sig.punctures,
        });
    }
    if values.len() != sig.value_len() {
        return Err(CoreError::LengthMismatch {
            what: "flat values",
            expected: sig.value_len(),
            got: values.len(),
        });
    }
    for &v in &values {
        if v >= m.value() {
            return Err(CoreError::ResidueOutOfRange {
                value: v,
                m: m.value(),
            });
        }
    }
    if sig.is_closed() {
        if (2 * sig.genus as i64 - 2).rem_euclid(m.value() as i64) != 0 {
            return Err(CoreError::ClosedSurfaceInadmissible {
                genus: sig.genus,
                m: m.value(),
            });
        }
    } else {
        let target = boundary_sum_target(sig, m)?;
        let sum: i64 = values[2 * sig.genus as usize..]
            .iter()
            .map(|&v| v as i64)
            .sum();
        let got = m.reduce(sum);
        if got != target {
            return Err(CoreError::SumConstraintViolated {
                expected: target,
                got,
                m: m.value(),
            });
        }
    }
    Ok(ArfBasisValues::from_flat_unchecked(m, sig, values))
}

/// Enumerates every value tuple for (sig, m) in lexicographic order over the
/// flat layout. For surfaces with boundary the last boundary value is
/// determined by the sum constraint; for closed surfaces the enumeration is
/// empty unless m divides 2g - 2.
pub fn enumerate_arfs(m: Modulus, sig: SurfaceSignature) -> Result<Vec<ArfBasisValues>, CoreError> {
    let count = arf_count(sig, m)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let total_len = sig.value_len();
    let free_len = if sig.is_closed() {
        total_len
    } else {
        total_len - 1
    };
    let target = if sig.is_closed() {
        0
    } else {
        boundary_sum_target(sig, m)?
    };
    let mut out = Vec::with_capacity(count as usize);
    let mut free = vec![0u32; free_len];
    loop {
        let mut values = free.clone();
        if !sig.is_closed() {
            let boundary_prefix: i64 = free[2 * sig.genus as usize..]
                .iter()
                .map(|&v| v as i64)
                .sum();
            let last = m.reduce(target as i64 - boundary_prefix);
            values.push(last);
        }
        out.push(ArfBasisValues::from_flat_unchecked(m, sig, values));
        // Odometer increment in lexicographic order.
        let mut pos = free_len;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            free[pos] += 1;
            if free[pos] < m.value() {
                break;
            }
            free[pos] = 0;
        }
    }
}

/// The generator list for the twist action on value tuples of the given
/// signature, closed under inverses: T1a/T1b/T5a/T5b per handle, T2/T4 per
/// handle pair, T3 when the surface has both a handle and a boundary
/// contour, and adjacent transpositions within the hole block and within the
/// puncture block.
pub fn twist_generators(sig: SurfaceSignature) -> Vec<Twist> {
    let g = sig.genus as usize;
    let mut out = Vec::new();
    for i in 0..g {
        out.push(Twist::T1a {
            handle: i,
            positive: true,
        });
        out.push(Twist::T1a {
            handle: i,
            positive: false,
        });
        out.push(Twist::T1b {
            handle: i,
            positive: true,
        });
        out.push(Twist::T1b {
            handle: i,
            positive: false,
        });
        out.push(Twist::T5a { handle: i });
        out.push(Twist::T5b {
            handle: i,
            positive: true,
        });
        out.push(Twist::T5b {
            handle: i,
            positive: false,
        });
    }
    for i in 0..g {
        for j in (i + 1)..g {
            out.push(Twist::T2 {
                first: i,
                second: j,
                positive: true,
            });
            out.push(Twist::T2 {
                first: i,
                second: j,
                positive: false,
            });
            out.push(Twist::T4 {
                first: i,
                second: j,
            });
        }
    }
    if g >= 1 && sig.boundary_count() > 0 {
        out.push(Twist::T3 { positive: true });
        out.push(Twist::T3 { positive: false });
    }
    for k in 0..sig.holes.saturating_sub(1) as usize {
        out.push(Twist::HoleSwap { first: k });
    }
    for k in 0..sig.punctures.saturating_sub(1) as usize {
        out.push(Twist::PunctureSwap { first: k });
    }
    out
}

/// Applies one twist to a value tuple.
pub fn apply_twist(arf: &ArfBasisValues, twist: &Twist) -> Result<ArfBasisValues, CoreError> {
    let m = arf.modulus();
    let sig = arf.signature();
    let g = sig.genus as usize;
    let mut v: Vec<i64> = arf.values().iter().map(|&x| x as i64).collect();

    let check_handle = |i: usize| -> Result<(), CoreError> {
        if i >= g {
            Err(CoreError::IndexOutOfRange {
                what: "handle",
                index: i,
                limit: g,
            })
        } else {
            Ok(())
        }
    };

    match *twist {
        Twist::T1a { handle, positive } => {
            check_handle(handle)?;
            let (a, b) = (v[2 * handle], v[2 * handle + 1]);
            v[2 * handle] = if positive { a + b } else { a - b };
        }
        Twist::T1b { handle, positive } => {
            check_handle(handle)?;
            let (a, b) = (v[2 * handle], v[2 * handle + 1]);
            v[2 * handle + 1] = if positive { b + a } else { b - a };
        }
        Twist::T2 {
            first,
            second,
            positive,
        } => {
            check_handle(first)?;
            check_handle(second)?;
            if first == second {
                return Err(CoreError::IndexOutOfRange {
                    what: "distinct handle pair",
                    index: second,
                    limit: g,
                });
            }
            let (ai, aj) = (v[2 * first], v[2 * second]);
            let shift = ai + aj + 1;
            if positive {
                v[2 * first + 1] -= shift;
                v[2 * second + 1] -= shift;
            } else {
                v[2 * first + 1] += shift;
                v[2 * second + 1] += shift;
            }
        }
        Twist::T3 { positive } => {
            if g == 0 || sig.boundary_count() == 0 {
                return Err(CoreError::IndexOutOfRange {
                    what: "T3 (needs a handle and a boundary contour)",
                    index: 0,
                    limit: 0,
                });
            }
            let gamma = v[2 * g]; // first boundary value (first hole, else first puncture)
            let (a, b) = (v[2 * (g - 1)], v[2 * (g - 1) + 1]);
            if positive {
                v[2 * (g - 1)] = -b;
                v[2 * (g - 1) + 1] = a - gamma - 1;
            } else {
                v[2 * (g - 1)] = b + gamma + 1;
                v[2 * (g - 1) + 1] = -a;
            }
        }
        Twist::T4 { first, second } => {
            check_handle(first)?;
            check_handle(second)?;
            if first == second {
                return Err(CoreError::IndexOutOfRange {
                    what: "distinct handle pair",
                    index: second,
                    limit: g,
                });
            }
            v.swap(2 * first, 2 * second);
            v.swap(2 * first + 1, 2 * second + 1);
        }
        Twist::T5a { handle } => {
            check_handle(handle)?;
            v[2 * handle] = -v[2 * handle];
            v[2 * handle + 1] = -v[2 * handle + 1];
        }
        Twist::T5b { handle, positive } => {
            check_handle(handle)?;
            let (a, b) = (v[2 * handle], v[2 * handle + 1]);
            if positive {
                v[2 * handle] = -b;
                v[2 * handle + 1] = a;
            } else {
                v[2 * handle] = b;
                v[2 * handle + 1] = -a;
            }
        }
        Twist::HoleSwap { first } => {
            let lh = sig.holes as usize;
            if first + 1 >= lh {
                return Err(CoreError::IndexOutOfRange {
                    what: "adjacent hole pair",
                    index: first,
                    limit: lh,
                });
            }
            v.swap(2 * g + first, 2 * g + first + 1);
        }
        Twist::PunctureSwap { first } => {
            let lp = sig.punctures as usize;
            if first + 1 >= lp {
                return Err(CoreError::IndexOutOfRange {
                    what: "adjacent puncture pair",
                    index: first,
                    limit: lp,
                });
            }
            let base = 2 * g + sig.holes as usize;
            v.swap(base + first, base + first + 1);
        }
    }

    let values: Vec<u32> = v.into_iter().map(|x| m.reduce(x)).collect();
    Ok(ArfBasisValues::from_flat_unchecked(m, sig, values))
}

/// Applies a twist word left to right.
pub fn apply_word(arf: &ArfBasisValues, word: &TwistWord) -> Result<ArfBasisValues, CoreError> {
    let mut current = arf.clone();
    for t in &word.twists {
        current = apply_twist(&current, t)?;
    }
    Ok(current)
}

/// The inverse of a generator, again a single generator.
pub fn invert_twist(twist: &Twist) -> Twist {
    match *twist {
        Twist::T1a { handle, positive } => Twist::T1a {
            handle,
            positive: !positive,
        },
        Twist::T1b { handle, positive } => Twist::T1b {
            handle,
            positive: !positive,
        },
        Twist::T2 {
            first,
            second,
            positive,
        } => Twist::T2 {
            first,
            second,
            positive: !positive,
        },
        Twist::T3 { positive } => Twist::T3 {
            positive: !positive,
        },
        Twist::T4 { first, second } => Twist::T4 { first, second },
        Twist::T5a { handle } => Twist::T5a { handle },
        Twist::T5b { handle, positive } => Twist::T5b {
            handle,
            positive: !positive,
        },
        Twist::HoleSwap { first } => Twist::HoleSwap { first },
        Twist::PunctureSwap { first } => Twist::PunctureSwap { first },
    }
}

/// Adds a linear functional to a value tuple componentwise (the affine
/// structure on the set of tuples).
pub fn add_functional(
    arf: &ArfBasisValues,
    f: &LinearFunctional,
) -> Result<ArfBasisValues, CoreError> {
    if arf.modulus() != f.modulus() || arf.signature() != f.signature() {
        return Err(CoreError::MismatchedSignature);
    }
    let m = arf.modulus();
    let g2 = 2 * arf.signature().genus as usize;
    let mut values = Vec::with_capacity(arf.values().len());
    for (i, &v) in arf.values().iter().enumerate() {
        let add = if i < g2 {
            f.handle_values()[i]
        } else {
            f.boundary_values()[i - g2]
        };
        values.push(m.reduce(v as i64 + add as i64));
    }
    Ok(ArfBasisValues::from_flat_unchecked(
        m,
        arf.signature(),
        values,
    ))
}

/// The componentwise difference of two value tuples, as a linear functional;
/// `add_functional(arf2, difference(arf1, arf2)) == arf1`.
pub fn difference(
    arf1: &ArfBasisValues,
    arf2: &ArfBasisValues,
) -> Result<LinearFunctional, CoreError> {
    if arf1.modulus() != arf2.modulus() || arf1.signature() != arf2.signature() {
        return Err(CoreError::MismatchedSignature);
    }
    let m = arf1.modulus();
    let g2 = 2 * arf1.signature().genus as usize;
    let diff: Vec<u32> = arf1
        .values()
        .iter()
        .zip(arf2.values())
        .map(|(&a, &b)| m.reduce(a as i64 - b as i64))
        .collect();
    LinearFunctional::new(
        m,
        arf1.signature(),
        diff[..g2].to_vec(),
        diff[g2..].to_vec(),
    )
}
