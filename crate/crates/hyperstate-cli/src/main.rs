//! Command-line front end: builds hypergraph states, computes entanglement
//! measures, runs the classification sweeps, decides LP/LU equivalence,
//! emits stabilizer inequalities, and verifies the stabilizer lemmas.

use clap::{Parser, Subcommand};
use hyperstate::classify::{
    enumerate_classes, enumerate_uniform_classes, fingerprint, lp_equivalent, ClassInvariants,
    OrbitRecord,
};
use hyperstate::entanglement::{
    biseparable_overlap, genuine_negativity, geometric_measure, schmidt, Bipartition, GeoConfig,
};
use hyperstate::luequiv::{lu_equivalent_generic, DecisionMethod, Verdict};
use hyperstate::nonclassical::{
    admissible, binomial, classical_bound_terms, local_hv_max, mermin_operator, quantum_value,
    z_expansion,
};
use hyperstate::rng::SplitMix64;
use hyperstate::stabilizer::{check_stabilized, projector_check, verify_lemma1, verify_lemma2};
use hyperstate::statevec::build_state;
use hyperstate::Hypergraph;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hyperstate", version, about = "Hypergraph-state toolbox")]
struct Cli {
    /// Worker threads (0 = automatic; HYPERSTATE_THREADS as fallback).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a hypergraph state and dump its amplitudes.
    Build {
        #[arg(long = "in")]
        input: PathBuf,
        /// Print the amplitude table to stdout.
        #[arg(long)]
        amplitudes: bool,
        /// Write a JSON state dump.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entanglement measures of a hypergraph state.
    Measures {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 256)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Enumerate equivalence classes.
    Classify {
        /// Full sweep over all hypergraphs on n qubits (n <= 4).
        #[arg(long)]
        n: Option<usize>,
        /// k-uniform sweep, written n:k (e.g. 6:3).
        #[arg(long)]
        uniform: Option<String>,
        /// Keep only classes with maximally mixed single-qubit reductions.
        #[arg(long)]
        mixed: bool,
        /// Write the class table with fingerprints (.json or .csv).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Decide local-unitary equivalence of two hypergraph states.
    LuCheck {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Decide local-Pauli + permutation equivalence of two hypergraphs.
    LpCheck {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Build and evaluate the stabilizer inequality for (n, k).
    Inequality {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Write the parity certificate as JSON.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Verify the stabilizer rewrite lemmas and random-state identities.
    VerifyLemmas {
        /// Exhaustive sweep size (2 <= n <= 5).
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = if cli.threads > 0 {
        cli.threads
    } else {
        std::env::var("HYPERSTATE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    };
    if threads > 0 {
        // Ignore the error if a pool already exists (tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let trimmed = text.trim();
    let parsed = if trimmed.starts_with('{') {
        Hypergraph::parse_json(trimmed)
    } else {
        let line = trimmed
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| format!("{}: empty input", path.display()))?;
        Hypergraph::parse_text(line)
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

/// Rounds to 12 significant digits for stable, readable reports.
fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn bits_string(x: usize, n: usize) -> String {
    (0..n)
        .map(|i| if x & (1 << i) != 0 { '1' } else { '0' })
        .collect()
}

fn fingerprint_json(p: &ClassInvariants) -> Value {
    json!({
        "single_qubit_max_eigs": p.single_qubit_max_eigs.iter().map(|&x| sig12(x)).collect::<Vec<_>>(),
        "two_qubit_max_eigs": p.two_qubit_max_eigs.iter().map(|&x| sig12(x)).collect::<Vec<_>>(),
        "alpha_BS": sig12(p.alpha_bs),
        "N_gen": sig12(p.genuine_neg),
        "E_G": sig12(p.e_g),
    })
}

fn record_json(r: &OrbitRecord, p: Option<&ClassInvariants>) -> Value {
    let mut v = json!({
        "representative": r.representative.edge_vertex_lists(),
        "orbit_size": r.orbit_size,
        "max_cardinality": r.max_cardinality,
        "connected": r.connected,
    });
    if let Some(p) = p {
        v["fingerprint"] = fingerprint_json(p);
    }
    v
}

fn run(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Build {
            input,
            amplitudes,
            out,
        } => {
            let h = read_hypergraph(&input)?;
            let s = build_state(&h).map_err(|e| e.to_string())?;
            let echo_only = !amplitudes && out.is_none();
            if amplitudes {
                for (x, a) in s.amps().iter().enumerate() {
                    println!(
                        "|{}>  {:+.12}  {:+.12}",
                        bits_string(x, s.n()),
                        a.re,
                        a.im
                    );
                }
            }
            if let Some(path) = out {
                let dump = json!({
                    "n": s.n(),
                    "amplitudes": s
                        .amps()
                        .iter()
                        .map(|a| vec![sig12(a.re), sig12(a.im)])
                        .collect::<Vec<_>>(),
                });
                std::fs::write(&path, serde_json::to_string_pretty(&dump).unwrap())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if echo_only {
                println!("{}", h.to_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Measures {
            input,
            json: as_json,
            restarts,
            seed,
        } => {
            let h = read_hypergraph(&input)?;
            let s = build_state(&h).map_err(|e| e.to_string())?;
            let cfg = GeoConfig {
                restarts,
                seed,
                ..GeoConfig::default()
            };
            let e_g = geometric_measure(&s, &cfg).map_err(|e| e.to_string())?.value;
            let alpha_s = biseparable_overlap(&s).map_err(|e| e.to_string())?;
            let n_gen = genuine_negativity(&s).map_err(|e| e.to_string())?;
            let mut spectra = Vec::new();
            for cut in Bipartition::all(s.n()) {
                let lams = schmidt(&s, cut).map_err(|e| e.to_string())?;
                spectra.push((bits_string(cut.mask() as usize, s.n()), lams));
            }
            if as_json {
                let v = json!({
                    "E_G": sig12(e_g),
                    "alpha_S": sig12(alpha_s),
                    "N_gen": sig12(n_gen),
                    "spectra": spectra
                        .iter()
                        .map(|(cut, lams)| {
                            json!({
                                "cut": cut,
                                "schmidt_values": lams.iter().map(|&x| sig12(x)).collect::<Vec<_>>(),
                            })
                        })
                        .collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("E_G     = {:.12}", sig12(e_g));
                println!("alpha_S = {:.12}", sig12(alpha_s));
                println!("N_gen   = {:.12}", sig12(n_gen));
                for (cut, lams) in &spectra {
                    let joined = lams
                        .iter()
                        .map(|x| format!("{:.12}", sig12(*x)))
                        .collect::<Vec<_>>()
                        .join(" ");
                    println!("cut {cut}: {joined}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify {
            n,
            uniform,
            mixed,
            out,
            restarts,
            seed,
        } => {
            let records: Vec<OrbitRecord>;
            match (n, &uniform) {
                (Some(n), None) => {
                    let all = enumerate_classes(n).map_err(|e| e.to_string())?;
                    let main: Vec<&OrbitRecord> = all
                        .iter()
                        .filter(|r| r.max_cardinality >= 3 && r.connected)
                        .collect();
                    let graphs = all
                        .iter()
                        .filter(|r| r.max_cardinality == 2 && r.connected)
                        .count();
                    println!(
                        "{} classes (max cardinality >= 3, connected); {} connected graph-state classes",
                        main.len(),
                        graphs
                    );
                    records = main.into_iter().cloned().collect();
                }
                (None, Some(spec)) => {
                    let (un, uk) = spec
                        .split_once(':')
                        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                        .ok_or_else(|| format!("--uniform expects n:k, got {spec}"))?;
                    records = enumerate_uniform_classes(un, uk, mixed).map_err(|e| e.to_string())?;
                    println!(
                        "{} permutation-orbit classes of {uk}-uniform hypergraphs on {un} qubits{}",
                        records.len(),
                        if mixed {
                            " with maximally mixed single-qubit reductions"
                        } else {
                            ""
                        }
                    );
                }
                _ => return Err("pass exactly one of --n or --uniform n:k".into()),
            }
            for (i, r) in records.iter().enumerate() {
                println!(
                    "class {:2}: orbit size {:4}, representative {}",
                    i + 1,
                    r.orbit_size,
                    r.representative.to_text()
                );
            }
            if let Some(path) = out {
                let cfg = GeoConfig {
                    restarts,
                    seed,
                    ..GeoConfig::default()
                };
                let prints: Vec<ClassInvariants> = records
                    .par_iter()
                    .map(|r| fingerprint(&r.representative, &cfg))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                let is_csv = path.extension().is_some_and(|e| e == "csv");
                if is_csv {
                    let mut text = String::new();
                    let ns = records[0].representative.n();
                    let singles: Vec<String> =
                        (1..=ns).map(|i| format!("rho_{i}_max")).collect();
                    let twos: Vec<String> = (0..prints[0].two_qubit_max_eigs.len())
                        .map(|i| format!("rho2_{}_max", i + 1))
                        .collect();
                    writeln!(
                        text,
                        "class,E_G,{},{},alpha_BS,N_gen",
                        singles.join(","),
                        twos.join(",")
                    )
                    .unwrap();
                    for (i, p) in prints.iter().enumerate() {
                        let s1 = p
                            .single_qubit_max_eigs
                            .iter()
                            .map(|&x| format!("{:.12}", sig12(x)))
                            .collect::<Vec<_>>()
                            .join(",");
                        let s2 = p
                            .two_qubit_max_eigs
                            .iter()
                            .map(|&x| format!("{:.12}", sig12(x)))
                            .collect::<Vec<_>>()
                            .join(",");
                        writeln!(
                            text,
                            "{},{:.12},{s1},{s2},{:.12},{:.12}",
                            i + 1,
                            sig12(p.e_g),
                            sig12(p.alpha_bs),
                            sig12(p.genuine_neg)
                        )
                        .unwrap();
                    }
                    std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
                } else {
                    let v = Value::Array(
                        records
                            .iter()
                            .zip(&prints)
                            .map(|(r, p)| record_json(r, Some(p)))
                            .collect(),
                    );
                    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap())
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::LuCheck { a, b } => {
            let ha = read_hypergraph(&a)?;
            let hb = read_hypergraph(&b)?;
            let d = hyperstate::luequiv::hypergraph_lu_decision(&ha, &hb)
                .map_err(|e| e.to_string())?;
            let verdict = match d.verdict {
                Verdict::Equivalent => "equivalent",
                Verdict::Inequivalent => "inequivalent",
                Verdict::Inconclusive => "inconclusive",
            };
            let method = match d.method {
                DecisionMethod::Theorem4 => "combinatorial (generic LME)",
                DecisionMethod::StandardForm => "standard form",
            };
            println!("verdict: {verdict}");
            println!("method: {method}");
            if d.verdict == Verdict::Equivalent {
                // Single-qubit witnesses exist when no qubit permutation is
                // needed; recover them from the standard forms.
                let sa = build_state(&ha).map_err(|e| e.to_string())?;
                let sb = build_state(&hb).map_err(|e| e.to_string())?;
                if let Ok(gen) = lu_equivalent_generic(&sa, &sb) {
                    if let Some(ws) = gen.witnesses {
                        for (i, u) in ws.iter().enumerate() {
                            let m = u.m;
                            println!(
                                "U_{}: [[{:+.12}{:+.12}i, {:+.12}{:+.12}i], [{:+.12}{:+.12}i, {:+.12}{:+.12}i]]",
                                i + 1,
                                m[0][0].re, m[0][0].im,
                                m[0][1].re, m[0][1].im,
                                m[1][0].re, m[1][0].im,
                                m[1][1].re, m[1][1].im,
                            );
                        }
                    } else {
                        println!("witnesses: require a qubit permutation");
                    }
                } else {
                    println!("witnesses: require a qubit permutation");
                }
            }
            Ok(match d.verdict {
                Verdict::Inconclusive => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            })
        }
        Cmd::LpCheck { a, b } => {
            let ha = read_hypergraph(&a)?;
            let hb = read_hypergraph(&b)?;
            let eq = lp_equivalent(&ha, &hb).map_err(|e| e.to_string())?;
            println!("lp-equivalent: {eq}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Inequality { n, k, certificate } => {
            let cert = admissible(n, k).map_err(|e| e.to_string())?;
            for c in &cert.checks {
                println!(
                    "C({}, {}) = {} ({})",
                    n - c.alpha,
                    k - c.alpha,
                    c.binomial,
                    if c.odd { "odd" } else { "even" }
                );
            }
            println!("admissible: {}", cert.admissible);
            if let Some(path) = &certificate {
                let v = json!({
                    "n": n,
                    "k": k,
                    "admissible": cert.admissible,
                    "checks": cert
                        .checks
                        .iter()
                        .map(|c| json!({
                            "alpha": c.alpha,
                            "binomial": c.binomial.to_string(),
                            "odd": c.odd,
                        }))
                        .collect::<Vec<_>>(),
                });
                std::fs::write(path, serde_json::to_string_pretty(&v).unwrap())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if !cert.admissible {
                return Err(format!("({n}, {k}) is not admissible"));
            }
            if binomial(n, k) > 100_000 {
                return Err(format!("({n}, {k}) is too large for operator construction"));
            }
            let spec = mermin_operator(n, k).map_err(|e| e.to_string())?;
            println!(
                "terms: {} generators (each with {} diagonal factors) + 1 product term",
                n,
                spec.terms[0].diag_edges().len()
            );
            if n <= 7 {
                let q = quantum_value(&spec).map_err(|e| e.to_string())?;
                println!("quantum value: {:.12} (dense)", sig12(q));
            } else {
                println!("quantum value: {} (symbolic, n + 1)", n + 1);
            }
            let bound = classical_bound_terms(n).map_err(|e| e.to_string())?;
            println!("noncontextual bound: {bound}");
            if 2 * n <= 26 {
                let lhv = local_hv_max(&spec).map_err(|e| e.to_string())?;
                println!("local-assignment maximum: {lhv}");
            } else {
                println!("local-assignment maximum: skipped (2^(2n) sweep too large)");
            }
            if n <= 7 {
                let map = z_expansion(&spec.hypergraph, 0).map_err(|e| e.to_string())?;
                println!("Z expansion of the first generator's diagonal part:");
                for (mask, c) in &map {
                    let verts: Vec<String> = (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| format!("Z_{}", i + 1))
                        .collect();
                    let label = if verts.is_empty() {
                        "1".to_string()
                    } else {
                        verts.join(" ")
                    };
                    println!("  {:>6}/{:<6} {}", c.num, 1u64 << c.log2_den, label);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyLemmas { n, samples, seed } => {
            if !(2..=5).contains(&n) {
                return Err(format!("exhaustive lemma sweep needs 2 <= n <= 5, got {n}"));
            }
            let mut ok = true;
            let mut l1 = true;
            let mut l2 = true;
            for e in 1u32..1 << n {
                for kv in 0..n {
                    if e & (1 << kv) != 0 {
                        l1 &= verify_lemma1(n, e, kv).map_err(|x| x.to_string())?;
                    }
                }
                let mut kset = e;
                loop {
                    l2 &= verify_lemma2(n, e, kset).map_err(|x| x.to_string())?;
                    if kset == 0 {
                        break;
                    }
                    kset = (kset - 1) & e;
                }
            }
            println!(
                "lemma 1 (X conjugation), n = {n}, all (e, k): {}",
                if l1 { "PASS" } else { "FAIL" }
            );
            println!(
                "lemma 2 (C_e past X^K), n = {n}, all (e, K): {}",
                if l2 { "PASS" } else { "FAIL" }
            );
            ok &= l1 && l2;
            let mut rng = SplitMix64::new(seed);
            let mut stabilized = true;
            let mut projector = true;
            for _ in 0..samples {
                let hn = 2 + (rng.next_below(4)) as usize;
                let edge_count = rng.next_below(6) as usize;
                let mut h = Hypergraph::new(hn, &[]).unwrap();
                for _ in 0..edge_count {
                    let e = 1 + rng.next_below((1 << hn) - 1) as u32;
                    h.toggle_edge(e);
                }
                stabilized &= check_stabilized(&h).map_err(|x| x.to_string())?;
                projector &= projector_check(&h).map_err(|x| x.to_string())? < 1e-12;
            }
            println!(
                "stabilizer fixes the state on {samples} random hypergraphs: {}",
                if stabilized { "PASS" } else { "FAIL" }
            );
            println!(
                "projector identity < 1e-12 on {samples} random hypergraphs: {}",
                if projector { "PASS" } else { "FAIL" }
            );
            ok &= stabilized && projector;
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Err("lemma verification failed".into())
            }
        }
    }
}
