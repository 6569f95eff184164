//! Orbit computation for the twist action, the census of connected
//! components of the value-tuple space, and its serialized report forms.

use crate::arf_calculus::{apply_twist, enumerate_arfs, from_flat, twist_generators, Twist};
use crate::core_types::{arf_count, ArfBasisValues, ArfType, CoreError, Modulus, SurfaceSignature};
use crate::invariants::{enumerate_realizable_types, type_of};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Default bound on the number of tuples a single orbit/census call may
/// touch.
pub const DEFAULT_ORBIT_CAP: u128 = 10_000_000;

/// The orbit of one value tuple under the full twist-generator action,
/// computed by breadth-first closure.
///
/// Fails with `StateSpaceTooLarge` when the ambient tuple space already
/// exceeds `cap` (default ten million), without starting the search.
pub fn orbit_of(
    arf: &ArfBasisValues,
    cap: Option<u128>,
) -> Result<BTreeSet<ArfBasisValues>, CoreError> {
    let cap = cap.unwrap_or(DEFAULT_ORBIT_CAP);
    let size = arf_count(arf.signature(), arf.modulus())?;
    if size > cap {
        return Err(CoreError::StateSpaceTooLarge { size, cap });
    }
    bfs_orbit(arf, &twist_generators(arf.signature()))
}

fn bfs_orbit(
    start: &ArfBasisValues,
    generators: &[Twist],
) -> Result<BTreeSet<ArfBasisValues>, CoreError> {
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier = VecDeque::new();
    frontier.push_back(start.clone());
    while let Some(a) = frontier.pop_front() {
        for t in generators {
            let next = apply_twist(&a, t)?;
            if seen.insert(next.clone()) {
                frontier.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// The three verification checks recorded in a census report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusChecks {
    /// The orbits cover every tuple exactly once.
    pub partition: bool,
    /// The type is constant on every orbit.
    pub soundness: bool,
    /// Orbits correspond one-to-one with the realizable types.
    pub completeness: bool,
}

impl CensusChecks {
    /// True when all three checks pass.
    pub fn all(&self) -> bool {
        self.partition && self.soundness && self.completeness
    }
}

/// One orbit in a census: its type, its size, and its lexicographically
/// least member (encoded as colon-separated values).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    /// The common type of the orbit's members.
    #[serde(rename = "type")]
    pub arf_type: ArfType,
    /// Number of tuples in the orbit.
    pub size: u64,
    /// The least member in the enumeration order.
    pub representative: String,
}

/// The full orbit census of a tuple space, with verification checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    /// The surface the census was computed for.
    pub signature: SurfaceSignature,
    /// The modulus of the value group.
    pub m: Modulus,
    /// Total number of tuples.
    pub total: u64,
    /// The orbits in order of their representatives.
    pub orbits: Vec<OrbitRecord>,
    /// Verification results.
    pub checks: CensusChecks,
}

fn census_impl(
    m: Modulus,
    sig: SurfaceSignature,
    generators: &[Twist],
    cap: Option<u128>,
) -> Result<(CensusReport, Vec<String>), CoreError> {
    let cap = cap.unwrap_or(DEFAULT_ORBIT_CAP);
    let size = arf_count(sig, m)?;
    if size > cap {
        return Err(CoreError::StateSpaceTooLarge { size, cap });
    }
    let all = enumerate_arfs(m, sig)?;
    let mut diagnostics = Vec::new();
    let mut seen: BTreeSet<ArfBasisValues> = BTreeSet::new();
    let mut orbits = Vec::new();
    let mut orbit_types = Vec::new();
    let mut partition = true;
    let mut soundness = true;

    for a in &all {
        if seen.contains(a) {
            continue;
        }
        let orbit = bfs_orbit(a, generators)?;
        let ty = type_of(a);
        for member in &orbit {
            if type_of(member) != ty {
                soundness = false;
                diagnostics.push(format!(
                    "orbit of {a} contains {member}, which has a different type"
                ));
            }
            if seen.contains(member) {
                partition = false;
                diagnostics.push(format!("{member} lies in more than one computed orbit"));
            }
        }
        seen.extend(orbit.iter().cloned());
        orbits.push(OrbitRecord {
            arf_type: ty.clone(),
            size: orbit.len() as u64,
            representative: a.to_string(),
        });
        orbit_types.push(ty);
    }
    if seen.len() != all.len() {
        partition = false;
        diagnostics.push(format!(
            "orbits cover {} of {} tuples",
            seen.len(),
            all.len()
        ));
    }

    let realizable: BTreeSet<ArfType> = enumerate_realizable_types(sig, m)?.into_iter().collect();
    let mut type_multiplicity: BTreeMap<&ArfType, u32> = BTreeMap::new();
    for ty in &orbit_types {
        *type_multiplicity.entry(ty).or_insert(0) += 1;
    }
    let mut completeness = true;
    for (ty, count) in &type_multiplicity {
        if *count > 1 {
            completeness = false;
            diagnostics.push(format!("type {ty:?} is shared by {count} distinct orbits"));
        }
        if !realizable.contains(*ty) {
            completeness = false;
            diagnostics.push(format!(
                "orbit type {ty:?} is not in the realizable enumeration"
            ));
        }
    }
    for ty in &realizable {
        if !type_multiplicity.contains_key(ty) {
            completeness = false;
            diagnostics.push(format!(
                "realizable type {ty:?} is not realized by any orbit"
            ));
        }
    }

    let report = CensusReport {
        signature: sig,
        m,
        total: all.len() as u64,
        orbits,
        checks: CensusChecks {
            partition,
            soundness,
            completeness,
        },
    };
    Ok((report, diagnostics))
}

/// Census of the twist action generated by an explicit generator list
/// (useful for ablation experiments on the generator set).
pub fn census_with_generators(
    m: Modulus,
    sig: SurfaceSignature,
    generators: &[Twist],
    cap: Option<u128>,
) -> Result<CensusReport, CoreError> {
    census_impl(m, sig, generators, cap).map(|(report, _)| report)
}

/// Census of the full twist action for the given surface and modulus.
pub fn component_census(
    m: Modulus,
    sig: SurfaceSignature,
    cap: Option<u128>,
) -> Result<CensusReport, CoreError> {
    census_with_generators(m, sig, &twist_generators(sig), cap)
}

/// Runs the census and reports whether orbits partition the tuple space,
/// carry constant types, and biject with the realizable types. The second
/// component lists human-readable counterexamples when the verdict is
/// false.
pub fn verify_classification(
    m: Modulus,
    sig: SurfaceSignature,
    cap: Option<u128>,
) -> Result<(bool, Vec<String>), CoreError> {
    let (report, diagnostics) = census_impl(m, sig, &twist_generators(sig), cap)?;
    Ok((report.checks.all(), diagnostics))
}

impl CensusReport {
    /// Pretty-printed JSON with a fixed field order and a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("census report serializes");
        s.push('\n');
        s
    }

    /// CSV with one row per orbit and columns
    /// `g,l_h,l_p,m,delta,n_h_0..n_h_{m-1},n_p_0..n_p_{m-1},size,representative`.
    pub fn to_csv_string(&self) -> String {
        let m = self.m.value() as usize;
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = ["g", "l_h", "l_p", "m", "delta"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for j in 0..m {
            header.push(format!("n_h_{j}"));
        }
        for j in 0..m {
            header.push(format!("n_p_{j}"));
        }
        header.push("size".into());
        header.push("representative".into());
        wtr.write_record(&header).expect("csv header writes");
        for o in &self.orbits {
            let mut row = vec![
                self.signature.genus.to_string(),
                self.signature.holes.to_string(),
                self.signature.punctures.to_string(),
                self.m.value().to_string(),
                o.arf_type.delta.to_string(),
            ];
            row.extend(o.arf_type.n_h.iter().map(|v| v.to_string()));
            row.extend(o.arf_type.n_p.iter().map(|v| v.to_string()));
            row.push(o.size.to_string());
            row.push(o.representative.clone());
            wtr.write_record(&row).expect("csv row writes");
        }
        String::from_utf8(wtr.into_inner().expect("csv buffer flushes"))
            .expect("csv output is utf-8")
    }

    /// Parses a census back from its CSV form (at least one orbit row is
    /// required, since the surface and modulus are read from the rows).
    ///
    /// The check flags are not stored in CSV; `partition` and
    /// `completeness` are recomputed from the rows, while `soundness`
    /// cannot be refuted from a summary and is reported as true.
    pub fn from_csv_str(s: &str) -> Result<CensusReport, CoreError> {
        let bad = |detail: String| CoreError::ReportFormat(detail);
        let mut rdr = csv::Reader::from_reader(s.as_bytes());
        let header = rdr
            .headers()
            .map_err(|e| bad(format!("unreadable header: {e}")))?
            .clone();
        if header.len() < 8 || (header.len() - 7) % 2 != 0 {
            return Err(bad(format!("unexpected column count {}", header.len())));
        }
        let m_cols = (header.len() - 7) / 2;

        let parse_u32 = |field: &str, what: &str| -> Result<u32, CoreError> {
            field
                .parse::<u32>()
                .map_err(|_| bad(format!("bad {what} value {field:?}")))
        };

        let mut sig_m: Option<(SurfaceSignature, Modulus)> = None;
        let mut orbits = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| bad(format!("unreadable row: {e}")))?;
            if record.len() != header.len() {
                return Err(bad(format!(
                    "row with {} fields, expected {}",
                    record.len(),
                    header.len()
                )));
            }
            let g = parse_u32(&record[0], "genus")?;
            let lh = parse_u32(&record[1], "hole count")?;
            let lp = parse_u32(&record[2], "puncture count")?;
            let mv = parse_u32(&record[3], "modulus")?;
            if mv as usize != m_cols {
                return Err(bad(format!(
                    "modulus {mv} does not match {m_cols} histogram columns"
                )));
            }
            let row_sig = SurfaceSignature::new(g, lh, lp);
            let row_m = Modulus::new(mv)?;
            match sig_m {
                None => sig_m = Some((row_sig, row_m)),
                Some(pair) if pair == (row_sig, row_m) => {}
                Some(_) => return Err(bad("rows disagree on surface or modulus".into())),
            }
            let delta = parse_u32(&record[4], "delta")?;
            let mut n_h = Vec::with_capacity(m_cols);
            let mut n_p = Vec::with_capacity(m_cols);
            for j in 0..m_cols {
                n_h.push(parse_u32(&record[5 + j], "hole histogram")?);
            }
            for j in 0..m_cols {
                n_p.push(parse_u32(&record[5 + m_cols + j], "puncture histogram")?);
            }
            let size = record[5 + 2 * m_cols]
                .parse::<u64>()
                .map_err(|_| bad(format!("bad size value {:?}", &record[5 + 2 * m_cols])))?;
            let rep_field = &record[6 + 2 * m_cols];
            let values: Vec<u32> = rep_field
                .split(':')
                .map(|p| parse_u32(p, "representative"))
                .collect::<Result<_, _>>()?;
            // Validates length, residues, and the sum constraint.
            from_flat(row_m, row_sig, values)?;
            orbits.push(OrbitRecord {
                arf_type: ArfType {
                    genus: g,
                    delta,
                    n_h,
                    n_p,
                },
                size,
                representative: rep_field.to_string(),
            });
        }
        let Some((sig, m)) = sig_m else {
            return Err(bad("no orbit rows".into()));
        };

        let total = arf_count(sig, m)? as u64;
        let partition = orbits.iter().map(|o| o.size).sum::<u64>() == total;
        let realizable: BTreeSet<ArfType> =
            enumerate_realizable_types(sig, m)?.into_iter().collect();
        let types: Vec<&ArfType> = orbits.iter().map(|o| &o.arf_type).collect();
        let distinct: BTreeSet<&ArfType> = types.iter().copied().collect();
        let completeness = distinct.len() == types.len()
            && distinct
                .iter()
                .map(|t| (*t).clone())
                .collect::<BTreeSet<_>>()
                == realizable;
        Ok(CensusReport {
            signature: sig,
            m,
            total,
            orbits,
            checks: CensusChecks {
                partition,
                soundness: true,
                completeness,
            },
        })
    }
}
