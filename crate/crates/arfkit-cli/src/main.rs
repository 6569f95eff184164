//! Command-line interface to the arfkit toolkit: tuple enumeration and
//! census commands, invariant and normal-form queries, and the
//! hyperbolic-geometry verification commands.
//!
//! Exit codes: 0 on success, 1 when a verification verdict is false,
//! 2 on usage or input errors. All data goes to stdout (or `--out`);
//! diagnostics go to stderr. Output is deterministic for fixed arguments
//! and seed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arfkit::arf_calculus::{enumerate_arfs, from_flat};
use arfkit::hyperbolic::{
    build_sequential_set, check_lift_relation, level_of, lift, lifted_product,
    product_jump_closed_form, sample_pair, JumpRegime, KernelError,
};
use arfkit::invariants::{arf_invariant_delta, enumerate_realizable_types, normalize};
use arfkit::orbits::{component_census, verify_classification};
use arfkit::{arf_count, validate_signature, ArfType, Modulus, SurfaceSignature};

/// The default verification grid: every supported small surface.
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

#[derive(Parser)]
#[command(
    name = "arfkit",
    version,
    about = "Arf tuple census and covering-level toolkit"
)]
struct Cli {
    /// Output format for data commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write data to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized verification commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on the tuple-space size for orbit searches.
    #[arg(long, global = true)]
    cap: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Number of value tuples for a surface and modulus.
    Count {
        #[arg(long, value_parser = parse_modulus)]
        m: Modulus,
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
    },
    /// List every value tuple in lexicographic order.
    Enumerate {
        #[arg(long, value_parser = parse_modulus)]
        m: Modulus,
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
    },
    /// List the realizable types for a surface and modulus.
    Types {
        #[arg(long, value_parser = parse_modulus)]
        m: Modulus,
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
    },
    /// Orbit census of the twist action, with verification checks.
    Census {
        #[arg(long, value_parser = parse_modulus)]
        m: Modulus,
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
    },
    /// Verify the orbit classification over a grid of surfaces.
    Verify {
        /// Moduli to verify, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4", value_parser = parse_modulus)]
        m: Vec<Modulus>,
        /// Verify a single surface instead of the default grid.
        #[arg(long, value_parser = parse_signature)]
        signature: Option<SurfaceSignature>,
    },
    /// Normal form of a value tuple with the twist word reaching it.
    Normalize {
        #[arg(long, value_parser = parse_modulus)]
        m: Modulus,
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
        /// Tuple values, comma separated.
        #[arg(long, value_delimiter = ',')]
        values: Vec<u32>,
    },
    /// The delta invariant of a value tuple.
    Delta {
        #[arg(long, value_parser = parse_modulus)]
        m: Modulus,
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
        #[arg(long, value_delimiter = ',')]
        values: Vec<u32>,
    },
    /// Check the closed-form level jumps against path tracking on seeded
    /// random pairs from every jump regime.
    VerifyLevelLemmas {
        /// Samples per regime.
        #[arg(long, default_value_t = 1000)]
        samples: u32,
    },
    /// Build a sequential generator set and report it.
    CheckSequential {
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
        /// Family parameters; defaults when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
    },
    /// Check a lifted surface-group relation at the given levels.
    CheckLift {
        #[arg(long, value_parser = parse_modulus)]
        m: Modulus,
        #[arg(long, value_parser = parse_signature)]
        signature: SurfaceSignature,
        /// One level per generator, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        levels: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
    },
}

fn parse_modulus(s: &str) -> Result<Modulus, String> {
    let v: u32 = s.parse().map_err(|_| format!("invalid modulus '{s}'"))?;
    Modulus::new(v).map_err(|e| e.to_string())
}

fn parse_signature(s: &str) -> Result<SurfaceSignature, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected g,l_h,l_p, got '{s}'"));
    }
    let mut nums = [0u32; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid number '{part}'"))?;
    }
    let sig = SurfaceSignature::new(nums[0], nums[1], nums[2]);
    if !validate_signature(sig) {
        return Err(format!(
            "signature {s} does not carry a hyperbolic structure"
        ));
    }
    Ok(sig)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, data: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, data).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{data}"),
    }
    Ok(())
}

fn signature_fields(sig: SurfaceSignature) -> (u32, u32, u32) {
    (sig.genus, sig.holes, sig.punctures)
}

fn types_csv(types: &[ArfType], m: Modulus) -> String {
    let mut header = String::from("g,delta");
    for j in 0..m.value() {
        let _ = write!(header, ",n_h_{j}");
    }
    for j in 0..m.value() {
        let _ = write!(header, ",n_p_{j}");
    }
    let mut out = header + "\n";
    for t in types {
        let _ = write!(out, "{},{}", t.genus, t.delta);
        for v in t.n_h.iter().chain(&t.n_p) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Count { m, signature } => {
            let count = arf_count(signature, m)?;
            emit(&cli.out, &format!("{count}\n"))?;
            Ok(true)
        }
        Command::Enumerate { m, signature } => {
            let tuples: Vec<String> = enumerate_arfs(m, signature)?
                .iter()
                .map(|a| a.to_string())
                .collect();
            let data = match cli.format {
                Format::Json => serde_json::to_string_pretty(&tuples)? + "\n",
                Format::Csv => {
                    let mut s = String::from("values\n");
                    for t in &tuples {
                        s.push_str(t);
                        s.push('\n');
                    }
                    s
                }
            };
            emit(&cli.out, &data)?;
            Ok(true)
        }
        Command::Types { m, signature } => {
            let types = enumerate_realizable_types(signature, m)?;
            let data = match cli.format {
                Format::Json => serde_json::to_string_pretty(&types)? + "\n",
                Format::Csv => types_csv(&types, m),
            };
            emit(&cli.out, &data)?;
            Ok(true)
        }
        Command::Census { m, signature } => {
            let report = component_census(m, signature, cli.cap)?;
            let data = match cli.format {
                Format::Json => report.to_json_string(),
                Format::Csv => report.to_csv_string(),
            };
            emit(&cli.out, &data)?;
            Ok(report.checks.all())
        }
        Command::Verify { m, signature } => {
            let signatures: Vec<SurfaceSignature> = match signature {
                Some(sig) => vec![sig],
                None => GRID_SIGNATURES
                    .iter()
                    .map(|&(g, h, p)| SurfaceSignature::new(g, h, p))
                    .collect(),
            };
            let mut rows = Vec::new();
            let mut all = true;
            for &modulus in &m {
                for &sig in &signatures {
                    let (ok, diagnostics) = verify_classification(modulus, sig, cli.cap)?;
                    for d in diagnostics {
                        eprintln!("{d}");
                    }
                    all &= ok;
                    rows.push((modulus, sig, ok));
                }
            }
            let data = match cli.format {
                Format::Json => {
                    let cells: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(modulus, sig, ok)| {
                            serde_json::json!({
                                "m": modulus.value(),
                                "signature": sig,
                                "verified": ok,
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&serde_json::json!({
                        "cells": cells,
                        "all": all,
                    }))? + "\n"
                }
                Format::Csv => {
                    let mut s = String::from("m,g,l_h,l_p,verified\n");
                    for (modulus, sig, ok) in &rows {
                        let (g, h, p) = signature_fields(*sig);
                        let _ = writeln!(s, "{},{g},{h},{p},{ok}", modulus.value());
                    }
                    s
                }
            };
            emit(&cli.out, &data)?;
            Ok(all)
        }
        Command::Normalize {
            m,
            signature,
            values,
        } => {
            let arf = from_flat(m, signature, values)?;
            let (normal_form, word) = normalize(&arf);
            let words: Vec<String> = word.twists.iter().map(|t| t.to_string()).collect();
            let data = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "input": arf.to_string(),
                        "normal_form": normal_form.to_string(),
                        "word": words,
                    }))? + "\n"
                }
                Format::Csv => {
                    format!(
                        "input,normal_form,word\n{},{},{}\n",
                        arf,
                        normal_form,
                        words.join(" ")
                    )
                }
            };
            emit(&cli.out, &data)?;
            Ok(true)
        }
        Command::Delta {
            m,
            signature,
            values,
        } => {
            let arf = from_flat(m, signature, values)?;
            emit(&cli.out, &format!("{}\n", arf_invariant_delta(&arf)))?;
            Ok(true)
        }
        Command::VerifyLevelLemmas { samples } => {
            let mut all = true;
            let mut rows = Vec::new();
            for (index, regime) in JumpRegime::ALL.iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed ^ index as u64);
                let expected = regime.expected_jump();
                let mut agreements = 0u32;
                for _ in 0..samples {
                    let (a, b, jump) = sample_pair(*regime, &mut rng);
                    let closed = product_jump_closed_form(&a, &b);
                    let tracked =
                        lifted_product(&lift(&a, 0), &lift(&b, 0)).and_then(|p| level_of(&p));
                    if closed.ok() == Some(jump) && tracked.ok() == Some(jump) && jump == expected {
                        agreements += 1;
                    }
                }
                all &= agreements == samples;
                rows.push((regime.name(), expected, agreements));
            }
            let data = match cli.format {
                Format::Json => {
                    let regimes: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(name, expected, agreements)| {
                            serde_json::json!({
                                "regime": name,
                                "expected_jump": expected,
                                "samples": samples,
                                "agreements": agreements,
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&serde_json::json!({
                        "regimes": regimes,
                        "all": all,
                    }))? + "\n"
                }
                Format::Csv => {
                    let mut s = String::from("regime,expected_jump,samples,agreements\n");
                    for (name, expected, agreements) in &rows {
                        let _ = writeln!(s, "{name},{expected},{samples},{agreements}");
                    }
                    s
                }
            };
            emit(&cli.out, &data)?;
            Ok(all)
        }
        Command::CheckSequential { signature, params } => {
            match build_sequential_set(signature, &params) {
                Ok(elements) => {
                    let matrices: Vec<[[f64; 2]; 2]> =
                        elements.iter().map(|e| e.matrix()).collect();
                    let data = match cli.format {
                        Format::Json => {
                            serde_json::to_string_pretty(&serde_json::json!({
                                "signature": signature,
                                "sequential": true,
                                "elements": matrices,
                            }))? + "\n"
                        }
                        Format::Csv => {
                            let mut s = String::from("a,b,c,d\n");
                            for [[a, b], [c, d]] in &matrices {
                                let _ = writeln!(s, "{a},{b},{c},{d}");
                            }
                            s
                        }
                    };
                    emit(&cli.out, &data)?;
                    Ok(true)
                }
                Err(
                    e
                    @ (KernelError::OutOfValidityRegion(_) | KernelError::OrientationSearchFailed),
                ) => {
                    eprintln!("not sequential: {e}");
                    Ok(false)
                }
                Err(e) => Err(anyhow!(e)),
            }
        }
        Command::CheckLift {
            m,
            signature,
            levels,
            params,
        } => {
            let elements = build_sequential_set(signature, &params)?;
            let verdict = check_lift_relation(signature, &elements, &levels, m)?;
            let data = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "signature": signature,
                        "m": m.value(),
                        "levels": levels,
                        "admissible": verdict,
                    }))? + "\n"
                }
                Format::Csv => format!("admissible\n{verdict}\n"),
            };
            emit(&cli.out, &data)?;
            Ok(verdict)
        }
    }
}
