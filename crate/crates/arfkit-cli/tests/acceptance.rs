//! Acceptance suite: ten end-to-end checks of the toolkit, one test per
//! criterion, each printing a single PASS/FAIL line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use arfkit::arf_calculus::{apply_word, enumerate_arfs};
use arfkit::hyperbolic::{
    build_sequential_set, check_lift_relation, level_of, lift, lifted_product, make_hyperbolic,
    make_parabolic, product_jump_closed_form, sample_pair, BoundaryPoint, JumpRegime,
};
use arfkit::invariants::{arf_invariant_delta, enumerate_realizable_types, normalize, type_of};
use arfkit::orbits::{component_census, orbit_of, verify_classification};
use arfkit::{arf_count, Modulus, SurfaceSignature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INF: BoundaryPoint = BoundaryPoint::Infinity;

fn fin(x: f64) -> BoundaryPoint {
    BoundaryPoint::Finite(x)
}

const GRID_SIGNATURES: [(u32, u32, u32); 10] = [
    (0, 0, 3),
    (0, 1, 2),
    (0, 2, 1),
    (0, 3, 0),
    (1, 1, 0),
    (1, 0, 1),
    (1, 1, 1),
    (2, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
];

fn grid() -> Vec<(Modulus, SurfaceSignature)> {
    let mut cells = Vec::new();
    for m in [2u32, 3, 4] {
        for (g, h, p) in GRID_SIGNATURES {
            cells.push((Modulus::new(m).unwrap(), SurfaceSignature::new(g, h, p)));
        }
    }
    cells
}

fn report(n: u32, ok: bool) {
    println!("criterion {n:02}: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n:02} failed");
}

fn mat_mul(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
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

/// Raw inverse of a unimodular matrix, without representative
/// normalization.
fn mat_inv(x: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

/// Enumeration sizes match the counting formula on the whole grid within
/// one second.
#[test]
fn criterion_01() {
    let start = Instant::now();
    let mut ok = true;
    for (m, sig) in grid() {
        let count = arf_count(sig, m).unwrap();
        let listed = enumerate_arfs(m, sig).unwrap();
        ok &= listed.len() as u128 == count;
    }
    ok &= start.elapsed() < Duration::from_secs(1);
    report(1, ok);
}

/// The orbit classification verifies on all thirty grid cells within a
/// minute.
#[test]
fn criterion_02() {
    let start = Instant::now();
    let mut ok = true;
    for (m, sig) in grid() {
        let (verified, diagnostics) = verify_classification(m, sig, None).unwrap();
        if !verified {
            eprintln!("cell m={} {:?} failed: {:?}", m.value(), sig, diagnostics);
        }
        ok &= verified;
    }
    ok &= start.elapsed() < Duration::from_secs(60);
    report(2, ok);
}

/// Closed surfaces modulo 2: genus two splits 16 tuples into orbits of
/// sizes 10 and 6, genus three splits 64 into 36 and 28.
#[test]
fn criterion_03() {
    let m = Modulus::new(2).unwrap();
    let mut ok = true;
    for (genus, expected_total, expected_sizes) in
        [(2u32, 16u64, vec![6u64, 10]), (3, 64, vec![28, 36])]
    {
        let report_ = component_census(m, SurfaceSignature::new(genus, 0, 0), None).unwrap();
        let mut sizes: Vec<u64> = report_.orbits.iter().map(|o| o.size).collect();
        sizes.sort_unstable();
        ok &= report_.total == expected_total;
        ok &= sizes == expected_sizes;
        ok &= report_.checks.all();
    }
    report(3, ok);
}

/// The degree condition characterizes realizable types exactly: on every
/// grid cell the enumerated realizable types coincide with the types
/// actually attained by tuples.
#[test]
fn criterion_04() {
    let mut ok = true;
    for (m, sig) in grid() {
        let realizable: BTreeSet<_> = enumerate_realizable_types(sig, m)
            .unwrap()
            .into_iter()
            .collect();
        let attained: BTreeSet<_> = enumerate_arfs(m, sig)
            .unwrap()
            .iter()
            .map(type_of)
            .collect();
        ok &= realizable == attained;
    }
    report(4, ok);
}

/// Closed-form level jumps agree exactly with the path-tracking oracle on
/// a thousand seeded samples from each of the seven regimes, with no
/// chart-boundary errors, within thirty seconds.
#[test]
fn criterion_05() {
    let start = Instant::now();
    let mut ok = true;
    for (index, regime) in JumpRegime::ALL.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
        for _ in 0..1000 {
            let (a, b, expected) = sample_pair(*regime, &mut rng);
            let closed = product_jump_closed_form(&a, &b);
            let tracked = lifted_product(&lift(&a, 0), &lift(&b, 0)).and_then(|p| level_of(&p));
            ok &= closed.as_ref().ok() == Some(&expected);
            ok &= tracked.as_ref().ok() == Some(&expected);
        }
    }
    ok &= start.elapsed() < Duration::from_secs(30);
    report(5, ok);
}

/// The product of the two standard cusp generators has raw trace exactly
/// -2 (verified by hand multiplication) and climbs one level.
#[test]
fn criterion_06() {
    let mut ok = true;
    let p_inf = make_parabolic(INF, 1.0).unwrap();
    let p_one = make_parabolic(fin(1.0), 4.0).unwrap();
    ok &= p_inf.matrix() == [[1.0, 1.0], [0.0, 1.0]];
    ok &= p_one.matrix() == [[-3.0, 4.0], [-4.0, 5.0]];
    let raw = mat_mul(p_inf.matrix(), p_one.matrix());
    ok &= (raw[0][0] + raw[1][1] + 2.0).abs() <= 1e-12;
    ok &= product_jump_closed_form(&p_inf, &p_one) == Ok(1);
    let lifted = lifted_product(&lift(&p_inf, 0), &lift(&p_one, 0)).unwrap();
    ok &= level_of(&lifted) == Ok(1);
    report(6, ok);
}

/// The path-tracked relation check matches the level-sum closed form for
/// every level vector in [-m, m]^3 over all six construction families and
/// moduli 2, 3, 4, 6, within a minute.
#[test]
fn criterion_07() {
    let start = Instant::now();
    let mut ok = true;
    for (g, h, p) in [
        (0u32, 3u32, 0u32),
        (0, 2, 1),
        (0, 1, 2),
        (0, 0, 3),
        (1, 1, 0),
        (1, 0, 1),
    ] {
        let sig = SurfaceSignature::new(g, h, p);
        let elements = build_sequential_set(sig, &[]).unwrap();
        let boundary_start = 2 * g as usize;
        let target = (2 - 2 * g as i64) - (h + p) as i64;
        for m_value in [2i64, 3, 4, 6] {
            let m = Modulus::new(m_value as u32).unwrap();
            for l0 in -m_value..=m_value {
                for l1 in -m_value..=m_value {
                    for l2 in -m_value..=m_value {
                        let levels = [l0, l1, l2];
                        let winding: i64 = levels[boundary_start..].iter().sum::<i64>() - target;
                        let expected = winding.rem_euclid(m_value) == 0;
                        let verdict = check_lift_relation(sig, &elements, &levels, m).unwrap();
                        ok &= verdict == expected;
                    }
                }
            }
        }
    }
    ok &= start.elapsed() < Duration::from_secs(60);
    report(7, ok);
}

/// Normalization is exhaustively correct on the grid: the returned word
/// witnesses the normal form, the type is preserved, the normal form
/// matches the genus pattern, and it lies in the twist orbit of the
/// input.
#[test]
fn criterion_08() {
    let mut ok = true;
    for (m, sig) in grid() {
        let all = enumerate_arfs(m, sig).unwrap();
        let g = sig.genus as usize;
        // Orbit ids by sweeping representatives in order.
        let mut orbit_id: BTreeMap<_, usize> = BTreeMap::new();
        let mut next_id = 0;
        for arf in &all {
            if !orbit_id.contains_key(arf) {
                for member in orbit_of(arf, None).unwrap() {
                    orbit_id.insert(member, next_id);
                }
                next_id += 1;
            }
        }
        for arf in &all {
            let (nf, word) = normalize(arf);
            ok &= apply_word(arf, &word).unwrap() == nf;
            ok &= type_of(&nf) == type_of(arf);
            ok &= orbit_id[&nf] == orbit_id[arf];
            // Genus pattern of the handle values.
            let values = nf.values();
            let delta = arf_invariant_delta(&nf);
            match g {
                0 => {}
                1 => {
                    ok &= values[0] == delta % m.value();
                    ok &= values[1] == 0;
                }
                _ => {
                    let xi = if delta == 1 { 0 } else { 1 };
                    ok &= values[0] == 0 && values[1] == xi;
                    for handle in 1..g {
                        ok &= values[2 * handle] == 1 && values[2 * handle + 1] == 1;
                    }
                }
            }
            // Boundary blocks sorted ascending.
            let holes = &values[2 * g..2 * g + sig.holes as usize];
            let punctures = &values[2 * g + sig.holes as usize..];
            ok &= holes.windows(2).all(|w| w[0] <= w[1]);
            ok &= punctures.windows(2).all(|w| w[0] <= w[1]);
        }
    }
    report(8, ok);
}

/// Commutator traces of the torus construction: raw trace -2 at the
/// parabolic corner multiplier 3 + 2 sqrt(2), and -862/81 at multiplier 9.
#[test]
fn criterion_09() {
    let mut ok = true;
    let raw_commutator_trace = |l: f64| {
        let a = make_hyperbolic(INF, fin(0.0), l).unwrap().matrix();
        let b = make_hyperbolic(fin(-1.0), fin(1.0), l).unwrap().matrix();
        let comm = mat_mul(mat_mul(a, b), mat_mul(mat_inv(a), mat_inv(b)));
        comm[0][0] + comm[1][1]
    };
    let corner = 3.0 + 2.0 * 2.0_f64.sqrt();
    ok &= (raw_commutator_trace(corner) + 2.0).abs() < 1e-8;
    ok &= (raw_commutator_trace(9.0) + 862.0 / 81.0).abs() < 1e-10;
    report(9, ok);
}

/// The census and verify commands are deterministic: reruns give
/// byte-identical output and exit successfully.
#[test]
fn criterion_10() {
    let bin = env!("CARGO_BIN_EXE_arfkit");
    let mut ok = true;
    let runs: [&[&str]; 4] = [
        &["census", "--m", "2", "--signature", "2,0,0"],
        &[
            "census",
            "--m",
            "3",
            "--signature",
            "1,1,0",
            "--format",
            "csv",
        ],
        &["verify"],
        &[
            "verify",
            "--m",
            "2,4",
            "--signature",
            "1,1,1",
            "--format",
            "csv",
        ],
    ];
    for args in runs {
        let first = Command::new(bin).args(args).output().unwrap();
        let second = Command::new(bin).args(args).output().unwrap();
        ok &= first.status.success() && second.status.success();
        ok &= !first.stdout.is_empty();
        ok &= first.stdout == second.stdout;
    }
    report(10, ok);
}
