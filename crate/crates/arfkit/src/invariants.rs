//! Twist-invariants of value tuples (the delta invariant and the full type),
//! the realizability test and enumeration for types, and reduction of a
//! tuple to its normal form by an explicit twist word.

use crate::arf_calculus::{apply_twist, apply_word, Twist, TwistWord};
use crate::core_types::{
    validate_signature, ArfBasisValues, ArfType, CoreError, Modulus, SurfaceSignature,
};
use num_integer::Integer;

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// The delta invariant of a value tuple.
///
/// * genus 0: always 0;
/// * genus 1: gcd of m, both handle values, and gamma + 1 for every boundary
///   value gamma (so a divisor of m, equal to m when all arguments vanish);
/// * genus >= 2: 0 for odd m; for even m it is 0 whenever some boundary
///   value is even, and otherwise the parity of
///   sum_i (1 - alpha_i)(1 - beta_i).
pub fn arf_invariant_delta(arf: &ArfBasisValues) -> u32 {
    let m = arf.modulus().value() as u64;
    let g = arf.signature().genus;
    match g {
        0 => 0,
        1 => {
            let mut d = m;
            d = gcd_u64(d, arf.alpha(0) as u64);
            d = gcd_u64(d, arf.beta(0) as u64);
            for &gamma in arf.boundary_values() {
                d = gcd_u64(d, gamma as u64 + 1);
            }
            d as u32
        }
        _ => {
            if m % 2 == 1 {
                return 0;
            }
            if arf.boundary_values().iter().any(|&gamma| gamma % 2 == 0) {
                return 0;
            }
            let mut sum = 0u32;
            for i in 0..g as usize {
                // (1 - v) mod 2 == (1 + v) mod 2 for residues v.
                sum += ((1 + arf.alpha(i)) % 2) * ((1 + arf.beta(i)) % 2);
            }
            sum % 2
        }
    }
}

/// The type of a value tuple: genus, delta invariant, and the histograms of
/// hole and puncture values.
pub fn type_of(arf: &ArfBasisValues) -> ArfType {
    let m = arf.modulus().value() as usize;
    let sig = arf.signature();
    let mut n_h = vec![0u32; m];
    let mut n_p = vec![0u32; m];
    for &gamma in arf.gamma_holes() {
        n_h[gamma as usize] += 1;
    }
    for &gamma in arf.gamma_punctures() {
        n_p[gamma as usize] += 1;
    }
    ArfType {
        genus: sig.genus,
        delta: arf_invariant_delta(arf),
        n_h,
        n_p,
    }
}

/// Whether a type is realized by some value tuple on the given surface.
///
/// Checks shape consistency (histogram lengths m, histogram totals matching
/// the signature, matching genus), the degree condition
/// sum_j j (n_h[j] + n_p[j]) == (2 - 2g) - (l_h + l_p) mod m, and the
/// genus-dependent constraint on delta:
///
/// * genus 0: delta == 0;
/// * genus 1: delta >= 1, delta | m, and delta | j + 1 for every occupied
///   histogram slot j;
/// * genus >= 2: delta <= 1, with delta == 0 forced when m is odd or when
///   some even slot is occupied.
pub fn is_realizable_type(ty: &ArfType, sig: SurfaceSignature, m: Modulus) -> bool {
    if !validate_signature(sig) {
        return false;
    }
    let mv = m.value();
    if ty.genus != sig.genus
        || ty.n_h.len() != mv as usize
        || ty.n_p.len() != mv as usize
        || ty.n_h.iter().sum::<u32>() != sig.holes
        || ty.n_p.iter().sum::<u32>() != sig.punctures
    {
        return false;
    }

    // Degree condition.
    let weighted: i64 = (0..mv as usize)
        .map(|j| j as i64 * (ty.n_h[j] as i64 + ty.n_p[j] as i64))
        .sum();
    let target = (2 - 2 * sig.genus as i64) - sig.boundary_count() as i64;
    if m.reduce(weighted) != m.reduce(target) {
        return false;
    }

    match sig.genus {
        0 => ty.delta == 0,
        1 => {
            if ty.delta == 0 || !mv.is_multiple_of(ty.delta) {
                return false;
            }
            (0..mv as usize)
                .filter(|&j| ty.n_h[j] + ty.n_p[j] != 0)
                .all(|j| (j as u32 + 1).is_multiple_of(ty.delta))
        }
        _ => {
            if ty.delta > 1 {
                return false;
            }
            if ty.delta == 1 {
                if mv % 2 == 1 {
                    return false;
                }
                let even_slot_occupied = (0..mv as usize)
                    .step_by(2)
                    .any(|j| ty.n_h[j] + ty.n_p[j] != 0);
                if even_slot_occupied {
                    return false;
                }
            }
            true
        }
    }
}

/// All non-negative integer vectors of length `parts` summing to `total`,
/// in lexicographic order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; parts];
    fn rec(total: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == current.len() {
            current[pos] = total;
            out.push(current.clone());
            return;
        }
        for v in 0..=total {
            current[pos] = v;
            rec(total - v, pos + 1, current, out);
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, 0, &mut current, &mut out);
    out
}

/// Enumerates every realizable type for the given surface and modulus, in
/// increasing order.
pub fn enumerate_realizable_types(
    sig: SurfaceSignature,
    m: Modulus,
) -> Result<Vec<ArfType>, CoreError> {
    if !validate_signature(sig) {
        return Err(CoreError::InvalidSignature {
            genus: sig.genus,
            holes: sig.holes,
            punctures: sig.punctures,
        });
    }
    let deltas: Vec<u32> = match sig.genus {
        0 => vec![0],
        1 => (1..=m.value())
            .filter(|d| m.value().is_multiple_of(*d))
            .collect(),
        _ => vec![0, 1],
    };
    let hole_histograms = compositions(sig.holes, m.value() as usize);
    let puncture_histograms = compositions(sig.punctures, m.value() as usize);
    let mut out = Vec::new();
    for &delta in &deltas {
        for n_h in &hole_histograms {
            for n_p in &puncture_histograms {
                let ty = ArfType {
                    genus: sig.genus,
                    delta,
                    n_h: n_h.clone(),
                    n_p: n_p.clone(),
                };
                if is_realizable_type(&ty, sig, m) {
                    out.push(ty);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Reduces a value tuple to its normal form, returning the normal form
/// together with a twist word that maps the input to it.
///
/// Normal forms: for genus 0 both boundary blocks sorted ascending; for
/// genus 1 the handle pair is (delta mod m, 0); for genus >= 2 the handle
/// pairs are (0, xi), (1, 1), ..., (1, 1) where xi = 0 exactly when
/// delta = 1. Boundary blocks are always sorted ascending.
pub fn normalize(arf: &ArfBasisValues) -> (ArfBasisValues, TwistWord) {
    let mut state = NormalizeState {
        current: arf.clone(),
        word: TwistWord::new(),
    };
    let sig = arf.signature();
    match sig.genus {
        0 => {}
        1 => normalize_genus_one(&mut state),
        _ => normalize_higher_genus(&mut state),
    }
    state.sort_boundary_blocks();
    let NormalizeState { current, word } = state;
    debug_assert_eq!(apply_word(arf, &word).unwrap(), current);
    (current, word)
}

struct NormalizeState {
    current: ArfBasisValues,
    word: TwistWord,
}

impl NormalizeState {
    fn apply(&mut self, t: Twist) {
        self.current = apply_twist(&self.current, &t).expect("normalize emitted a valid twist");
        self.word.push(t);
    }

    fn alpha(&self, i: usize) -> u32 {
        self.current.alpha(i)
    }

    fn beta(&self, i: usize) -> u32 {
        self.current.beta(i)
    }

    fn m(&self) -> u32 {
        self.current.modulus().value()
    }

    /// Subtractive Euclid on one handle, ending at (x, 0). With
    /// `inject_modulus` a handle value that does not divide m is pushed back
    /// into the loop as (a, m - a), so the endpoint satisfies x | m or
    /// x == 0 and gcd(m, x) == gcd(m, alpha, beta).
    fn euclid_handle(&mut self, i: usize, inject_modulus: bool) {
        loop {
            let (a, b) = (self.alpha(i), self.beta(i));
            if b == 0 {
                if a == 0 || !inject_modulus || self.m().is_multiple_of(a) {
                    return;
                }
                // beta := beta - alpha == m - a, re-entering the loop.
                self.apply(Twist::T1b {
                    handle: i,
                    positive: false,
                });
            } else if a == 0 {
                self.apply(Twist::T5b {
                    handle: i,
                    positive: false,
                });
            } else if a >= b {
                self.apply(Twist::T1a {
                    handle: i,
                    positive: false,
                });
            } else {
                self.apply(Twist::T1b {
                    handle: i,
                    positive: false,
                });
            }
        }
    }

    /// The composite move subtracting 2 from beta_i, valid while
    /// alpha_i == alpha_j == 0.
    fn subtract_two(&mut self, i: usize, j: usize) {
        debug_assert_eq!(self.alpha(i), 0);
        debug_assert_eq!(self.alpha(j), 0);
        self.apply(Twist::T2 {
            first: i.min(j),
            second: i.max(j),
            positive: true,
        });
        self.apply(Twist::T5a { handle: j });
        self.apply(Twist::T2 {
            first: i.min(j),
            second: i.max(j),
            positive: true,
        });
        self.apply(Twist::T5a { handle: j });
    }

    /// Sorts the hole block and the puncture block ascending by recorded
    /// adjacent transpositions.
    fn sort_boundary_blocks(&mut self) {
        let sig = self.current.signature();
        let lh = sig.holes as usize;
        let lp = sig.punctures as usize;
        for pass in 0..lh.saturating_sub(1) {
            for k in 0..lh - 1 - pass {
                if self.current.gamma_holes()[k] > self.current.gamma_holes()[k + 1] {
                    self.apply(Twist::HoleSwap { first: k });
                }
            }
        }
        for pass in 0..lp.saturating_sub(1) {
            for k in 0..lp - 1 - pass {
                if self.current.gamma_punctures()[k] > self.current.gamma_punctures()[k + 1] {
                    self.apply(Twist::PunctureSwap { first: k });
                }
            }
        }
    }

    /// Index range of the boundary block T3 reads from (holes when present,
    /// else punctures), as (length, swap constructor).
    fn front_block(&self) -> (usize, fn(usize) -> Twist) {
        let sig = self.current.signature();
        if sig.holes > 0 {
            (sig.holes as usize, |k| Twist::HoleSwap { first: k })
        } else {
            (sig.punctures as usize, |k| Twist::PunctureSwap { first: k })
        }
    }

    fn front_block_value(&self, k: usize) -> u32 {
        let sig = self.current.signature();
        if sig.holes > 0 {
            self.current.gamma_holes()[k]
        } else {
            self.current.gamma_punctures()[k]
        }
    }
}

fn normalize_genus_one(st: &mut NormalizeState) {
    let m = st.m() as i64;
    st.euclid_handle(0, true);
    if st.current.signature().boundary_count() == 0 {
        return;
    }
    let (block_len, swap) = st.front_block();
    for idx in 0..block_len {
        // Bring value idx to the front of the block so T3 reads it.
        for t in (0..idx).rev() {
            st.apply(swap(t));
        }
        let x = st.alpha(0) as i64;
        let e = st.front_block_value(0) as i64 + 1;
        let gcd_mx = if x == 0 {
            m
        } else {
            gcd_u64(m as u64, x as u64) as i64
        };
        let h = gcd_u64(gcd_mx as u64, e as u64) as i64;
        // One fold move maps the handle (x, 0) to (x - e, 0); k folds reach
        // gcd(m, x - k e) == gcd(m, x, e) for some k in 0..m.
        let k = (0..m)
            .find(|&k| {
                let t = (x - k * e).rem_euclid(m);
                let g = if t == 0 {
                    m
                } else {
                    gcd_u64(m as u64, t as u64) as i64
                };
                g == h
            })
            .expect("a fold count reaching the joint gcd always exists");
        for _ in 0..k {
            st.apply(Twist::T3 { positive: true });
            st.apply(Twist::T5b {
                handle: 0,
                positive: false,
            });
        }
        st.euclid_handle(0, true);
        // Undo the block rotation.
        for t in 0..idx {
            st.apply(swap(t));
        }
    }
}

fn normalize_higher_genus(st: &mut NormalizeState) {
    let g = st.current.signature().genus as usize;
    let m = st.m();

    // Stage A: each handle to (0, x_i).
    for i in 0..g {
        st.euclid_handle(i, false);
        st.apply(Twist::T5b {
            handle: i,
            positive: true,
        });
    }

    // Stage B: shift each beta_i down by twos.
    let partner = |i: usize| if i == 0 { 1 } else { 0 };
    if m % 2 == 1 {
        for i in 0..g {
            while st.beta(i) != 1 {
                st.subtract_two(i, partner(i));
            }
        }
    } else {
        for i in 0..g {
            let target = st.beta(i) % 2;
            while st.beta(i) != target {
                st.subtract_two(i, partner(i));
            }
        }
        let zeros: Vec<usize> = (0..g).filter(|&i| st.beta(i) == 0).collect();
        for pair in zeros.chunks(2) {
            if let [i, j] = *pair {
                // Both handles are (0, 0); the shift adds 1 to both betas.
                st.apply(Twist::T2 {
                    first: i,
                    second: j,
                    positive: false,
                });
            }
        }
        if zeros.len() % 2 == 1 {
            let k = *zeros.last().unwrap();
            if k != 0 {
                st.apply(Twist::T4 {
                    first: 0,
                    second: k,
                });
            }
            upgrade_leftover_with_even_boundary(st, g);
        }
    }

    // Stage C: every handle past the first from (0, 1) to (1, 1).
    for i in 1..g {
        debug_assert_eq!((st.alpha(i), st.beta(i)), (0, 1));
        st.apply(Twist::T1a {
            handle: i,
            positive: true,
        });
    }
}

/// With an even value in the T3-visible boundary block, the leftover (0, 0)
/// handle can be rewritten to (0, 1): move the even value to the block
/// front, move the handle to the last slot, apply T3+ to produce an odd
/// beta, and shift it down to 1.
fn upgrade_leftover_with_even_boundary(st: &mut NormalizeState, g: usize) {
    if st.current.signature().boundary_count() == 0 {
        return;
    }
    let (block_len, swap) = st.front_block();
    let even_idx = (0..block_len).find(|&k| st.front_block_value(k).is_multiple_of(2));
    let Some(idx) = even_idx else { return };
    for t in (0..idx).rev() {
        st.apply(swap(t));
    }
    st.apply(Twist::T4 {
        first: 0,
        second: g - 1,
    });
    // (0, 0) on the last handle becomes (0, -gamma - 1), odd since gamma and
    // m are even.
    st.apply(Twist::T3 { positive: true });
    while st.beta(g - 1) != 1 {
        st.subtract_two(g - 1, 0);
    }
    for t in 0..idx {
        st.apply(swap(t));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arf_calculus::{enumerate_arfs, new_arf};

    fn sig(g: u32, h: u32, p: u32) -> SurfaceSignature {
        SurfaceSignature::new(g, h, p)
    }

    fn m(v: u32) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn delta_examples() {
        let a = new_arf(m(6), sig(1, 1, 0), &[2], &[4], &[5], &[]).unwrap();
        assert_eq!(arf_invariant_delta(&a), 2);

        let a = new_arf(m(2), sig(2, 0, 0), &[0, 1], &[0, 1], &[], &[]).unwrap();
        assert_eq!(arf_invariant_delta(&a), 1);

        let a = new_arf(m(2), sig(0, 0, 3), &[], &[], &[], &[0, 1, 0]).unwrap();
        assert_eq!(arf_invariant_delta(&a), 0);

        // Odd modulus, higher genus: always 0.
        let a = new_arf(m(3), sig(2, 1, 0), &[1, 2], &[2, 1], &[0], &[]).unwrap();
        assert_eq!(arf_invariant_delta(&a), 0);

        // All handle and boundary arguments zero at genus 1: gcd defaults
        // to m itself.
        let a = new_arf(m(4), sig(1, 1, 0), &[0], &[0], &[3], &[]).unwrap();
        assert_eq!(arf_invariant_delta(&a), 4);
    }

    #[test]
    fn realizable_type_counts() {
        let tys = enumerate_realizable_types(sig(2, 0, 0), m(2)).unwrap();
        assert_eq!(tys.len(), 2);
        assert_eq!(tys.iter().map(|t| t.delta).collect::<Vec<_>>(), vec![0, 1]);

        let tys = enumerate_realizable_types(sig(0, 0, 3), m(2)).unwrap();
        assert_eq!(tys.len(), 2);
        let histograms: Vec<&[u32]> = tys.iter().map(|t| t.n_p.as_slice()).collect();
        assert!(histograms.contains(&&[0, 3][..]));
        assert!(histograms.contains(&&[2, 1][..]));

        let tys = enumerate_realizable_types(sig(1, 1, 0), m(3)).unwrap();
        assert_eq!(tys.iter().map(|t| t.delta).collect::<Vec<_>>(), vec![1, 3]);
        for t in &tys {
            assert_eq!(t.n_h, vec![0, 0, 1]);
        }

        // Closed surface with m not dividing 2g - 2: no realizable types.
        assert!(enumerate_realizable_types(sig(2, 0, 0), m(3))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn every_enumerated_tuple_has_realizable_type() {
        for (g, h, p, mv) in [
            (0, 0, 3, 2),
            (1, 1, 0, 3),
            (1, 1, 1, 4),
            (2, 0, 0, 2),
            (2, 1, 0, 3),
        ] {
            let s = sig(g, h, p);
            let mm = m(mv);
            for a in enumerate_arfs(mm, s).unwrap() {
                let ty = type_of(&a);
                assert!(is_realizable_type(&ty, s, mm), "type of {a} at {s} m={mv}");
            }
        }
    }

    #[test]
    fn shape_mismatches_are_rejected() {
        let ty = ArfType {
            genus: 1,
            delta: 1,
            n_h: vec![0, 0, 1],
            n_p: vec![0, 0, 0],
        };
        assert!(is_realizable_type(&ty, sig(1, 1, 0), m(3)));
        // Wrong genus.
        let bad = ArfType {
            genus: 2,
            ..ty.clone()
        };
        assert!(!is_realizable_type(&bad, sig(1, 1, 0), m(3)));
        // Histogram length differs from m.
        let bad = ArfType {
            n_h: vec![0, 1],
            ..ty.clone()
        };
        assert!(!is_realizable_type(&bad, sig(1, 1, 0), m(3)));
        // Histogram total differs from the hole count.
        let bad = ArfType {
            n_h: vec![0, 0, 2],
            ..ty.clone()
        };
        assert!(!is_realizable_type(&bad, sig(1, 1, 0), m(3)));
        // Degree condition violated.
        let bad = ArfType {
            n_h: vec![0, 1, 0],
            ..ty
        };
        assert!(!is_realizable_type(&bad, sig(1, 1, 0), m(3)));
    }

    #[test]
    fn normalize_pinned_examples() {
        // Genus 1, m = 6: handle (2, 4), boundary 5 reduces to (2, 0).
        let a = new_arf(m(6), sig(1, 1, 0), &[2], &[4], &[5], &[]).unwrap();
        let (n, w) = normalize(&a);
        assert_eq!(n.values(), &[2, 0, 5]);
        assert_eq!(apply_word(&a, &w).unwrap(), n);

        // Genus 2, m = 3 with one hole: handles reduce to (0, 1), (1, 1).
        let a = new_arf(m(3), sig(2, 1, 0), &[2, 0], &[2, 1], &[0], &[]).unwrap();
        let (n, _) = normalize(&a);
        assert_eq!(n.values(), &[0, 1, 1, 1, 0]);

        // Closed genus 2, m = 2.
        let a = new_arf(m(2), sig(2, 0, 0), &[1, 1], &[1, 1], &[], &[]).unwrap();
        let (n, _) = normalize(&a);
        assert_eq!(n.values(), &[0, 1, 1, 1]);
        let a = new_arf(m(2), sig(2, 0, 0), &[0, 1], &[0, 1], &[], &[]).unwrap();
        let (n, _) = normalize(&a);
        assert_eq!(n.values(), &[0, 0, 1, 1]);

        // Genus 0: blocks are sorted.
        let a = new_arf(m(3), sig(0, 0, 3), &[], &[], &[], &[2, 0, 0]).unwrap();
        let (n, _) = normalize(&a);
        assert_eq!(n.values(), &[0, 0, 2]);
    }

    #[test]
    fn normalize_pattern_and_invariants_exhaustive() {
        for (g, h, p, mv) in [
            (0, 0, 3, 4),
            (0, 2, 1, 3),
            (1, 1, 0, 6),
            (1, 1, 1, 4),
            (2, 0, 0, 2),
            (2, 1, 0, 4),
            (2, 0, 1, 2),
        ] {
            let s = sig(g, h, p);
            let mm = m(mv);
            for a in enumerate_arfs(mm, s).unwrap() {
                let (n, w) = normalize(&a);
                assert_eq!(apply_word(&a, &w).unwrap(), n, "witness word at {s} m={mv}");
                assert_eq!(type_of(&n), type_of(&a), "type preserved at {s} m={mv}");
                let delta = arf_invariant_delta(&a);
                match g {
                    0 => {}
                    1 => {
                        assert_eq!(n.alpha(0), delta % mv);
                        assert_eq!(n.beta(0), 0);
                    }
                    _ => {
                        assert_eq!(n.alpha(0), 0);
                        assert_eq!(n.beta(0), if delta == 1 { 0 } else { 1 });
                        for i in 1..g as usize {
                            assert_eq!((n.alpha(i), n.beta(i)), (1, 1));
                        }
                    }
                }
                let mut holes = n.gamma_holes().to_vec();
                holes.sort_unstable();
                assert_eq!(n.gamma_holes(), &holes[..]);
                let mut punct = n.gamma_punctures().to_vec();
                punct.sort_unstable();
                assert_eq!(n.gamma_punctures(), &punct[..]);
            }
        }
    }

    #[test]
    fn equal_normal_forms_exactly_for_equal_types() {
        // Tuples of equal type share a normal form; distinct types give
        // distinct normal forms.
        let s = sig(1, 1, 1);
        let mm = m(4);
        use std::collections::BTreeMap;
        let mut by_type: BTreeMap<ArfType, std::collections::BTreeSet<ArfBasisValues>> =
            BTreeMap::new();
        for a in enumerate_arfs(mm, s).unwrap() {
            by_type
                .entry(type_of(&a))
                .or_default()
                .insert(normalize(&a).0);
        }
        let mut seen_forms = std::collections::BTreeSet::new();
        for (ty, forms) in by_type {
            assert_eq!(forms.len(), 1, "type {ty:?} produced multiple normal forms");
            assert!(seen_forms.insert(forms.into_iter().next().unwrap()));
        }
    }
}
