//! Command-line interface: triangulate, verify, h-vector reporting, dicing,
//! flagness checks, and corpus sweeps.

use clap::{Args, Parser, Subcommand};
use polytri::io::{
    matroid_from_value, parse_input, report_to_value, triangulation_from_value,
    triangulation_to_value, InputKind,
};
use polytri::verifier::{self, FlagStatus};
use polytri::{genperm, triangulate, Error};
use serde_json::{json, Value};
use std::process::ExitCode;

const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_RETRY_CAP: u8 = 4;

#[derive(Parser)]
#[command(name = "polytri", about = "Exact regular unimodular triangulations of matroid polytopes and generalized permutahedra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BuildOpts {
    /// Input JSON file (matroid or submodular function)
    input: String,
    /// Triangulate the independence polytope instead of the base polytope
    #[arg(long)]
    independence: bool,
    /// Seed for the functional schedule
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial value of the moment-curve parameter t
    #[arg(long)]
    t_start: Option<i64>,
    /// Output path (stdout when omitted)
    #[arg(long, short)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certified regular unimodular triangulation
    Triangulate(BuildOpts),
    /// Verify a triangulation file
    Verify {
        file: String,
        /// Treat a missing regularity certificate as a warning, not a failure
        #[arg(long)]
        allow_uncertified: bool,
    },
    /// Report the h-vector (= h*-vector) of the triangulated input
    Hstar(BuildOpts),
    /// Dice a generalized permutahedron into matroid-polytope cells
    Dice {
        /// Submodular-function JSON file
        input: String,
        #[arg(long, short)]
        output: Option<String>,
    },
    /// Flagness status of a triangulation file
    Flagcheck { file: String },
    /// Sweep a list of matroids, emitting a CSV summary
    Corpus {
        /// JSON array of matroid descriptions (optionally {"name","matroid"})
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (default: POLYTRI_THREADS or all cores)
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, short)]
        output: Option<String>,
    },
}

fn read_file(path: &str) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {path}: {e}");
        ExitCode::from(EXIT_INVALID_INPUT)
    })
}

fn write_output(path: &Option<String>, v: &Value) -> ExitCode {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text + "\n") {
                eprintln!("error: cannot write {p}: {e}");
                return ExitCode::from(EXIT_INVALID_INPUT);
            }
            ExitCode::SUCCESS
        }
        None => {
            println!("{text}");
            ExitCode::SUCCESS
        }
    }
}

fn build_error_code(e: &Error) -> u8 {
    match e {
        Error::RetryCapExceeded(_) | Error::EpsilonCapExceeded(_) => EXIT_RETRY_CAP,
        _ => EXIT_INVALID_INPUT,
    }
}

fn build(opts: &BuildOpts) -> Result<triangulate::BuiltTriangulation, ExitCode> {
    let text = read_file(&opts.input)?;
    let built = if opts.independence {
        // independence polytopes need a matroid: accept a matroid file or
        // the matroid_rank submodular shorthand
        let v: Value = serde_json::from_str(&text).map_err(|e| {
            eprintln!("error: JSON parse: {e}");
            ExitCode::from(EXIT_INVALID_INPUT)
        })?;
        let mv = v.get("matroid_rank").unwrap_or(&v);
        let m = matroid_from_value(mv).map_err(|e| {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID_INPUT)
        })?;
        genperm::triangulate_independence_polytope(&m, opts.seed, opts.t_start)
    } else {
        match parse_input(&text) {
            Ok(InputKind::Matroid(m)) => {
                triangulate::triangulate_base_polytope(&m, opts.seed, opts.t_start)
            }
            Ok(InputKind::Submodular(f)) => genperm::triangulate_genperm(&f, opts.seed, opts.t_start),
            Err(e) => {
                eprintln!("error: {e}");
                return Err(ExitCode::from(EXIT_INVALID_INPUT));
            }
        }
    };
    built.map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(build_error_code(&e))
    })
}

fn cmd_triangulate(opts: &BuildOpts) -> ExitCode {
    let built = match build(opts) {
        Ok(b) => b,
        Err(c) => return c,
    };
    let report = verifier::verify(&built.tri);
    if !report.all_pass(false) {
        eprintln!("error: built triangulation failed verification: {:?}", report.failures);
        return ExitCode::from(EXIT_VERIFICATION);
    }
    write_output(&opts.output, &triangulation_to_value(&built))
}

fn cmd_hstar(opts: &BuildOpts) -> ExitCode {
    let built = match build(opts) {
        Ok(b) => b,
        Err(c) => return c,
    };
    let report = verifier::verify(&built.tri);
    if !report.all_pass(false) {
        eprintln!("error: triangulation failed verification");
        return ExitCode::from(EXIT_VERIFICATION);
    }
    write_output(
        &opts.output,
        &json!({
            "h_vector": report.h_vector,
            "volume": report.volume.to_string(),
            "cells": report.cells,
        }),
    )
}

fn cmd_verify(file: &str, allow_uncertified: bool) -> ExitCode {
    let text = match read_file(file) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let v: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: JSON parse: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let built = match triangulation_from_value(&v) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let report = verifier::verify(&built.tri);
    let code = if report.all_pass(allow_uncertified) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFICATION)
    };
    let out = write_output(&None, &report_to_value(&report));
    if out != ExitCode::SUCCESS {
        return out;
    }
    code
}

fn cmd_dice(input: &str, output: &Option<String>) -> ExitCode {
    let text = match read_file(input) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let f = match parse_input(&text) {
        Ok(InputKind::Submodular(f)) => f,
        Ok(InputKind::Matroid(m)) => genperm::SubmodularFunction::from_matroid_rank(&m),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let sub = match genperm::dice(&f) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    write_output(
        output,
        &json!({
            "points": sub.base.points,
            "cells": sub.cell_sets(),
        }),
    )
}

fn cmd_flagcheck(file: &str) -> ExitCode {
    let text = match read_file(file) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let v: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: JSON parse: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let built = match triangulation_from_value(&v) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let status = verifier::flagness(&built.tri.cell_sets());
    let out = match status {
        FlagStatus::Flag => json!({"flag_status": "flag"}),
        FlagStatus::NotFlag(w) => json!({"flag_status": {"not_flag": w}}),
        FlagStatus::NotComputed => json!({"flag_status": "not_computed"}),
    };
    write_output(&None, &out)
}

fn cmd_corpus(input: &str, seed: u64, threads: Option<usize>, output: &Option<String>) -> ExitCode {
    let text = match read_file(input) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let v: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: JSON parse: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let entries = match v.as_array() {
        Some(a) => a.clone(),
        None => {
            eprintln!("error: corpus input must be a JSON array");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let threads = threads
        .or_else(|| {
            std::env::var("POLYTRI_THREADS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    use rayon::prelude::*;
    let rows: Vec<String> = pool.install(|| {
        entries
            .par_iter()
            .enumerate()
            .map(|(idx, entry)| {
                let (name, mv) = match entry.get("matroid") {
                    Some(m) => (
                        entry
                            .get("name")
                            .and_then(Value::as_str)
                            .map(str::to_string)
                            .unwrap_or_else(|| format!("row{idx}")),
                        m.clone(),
                    ),
                    None => (format!("row{idx}"), entry.clone()),
                };
                let started = std::time::Instant::now();
                let m = match matroid_from_value(&mv) {
                    Ok(m) => m,
                    Err(e) => return format!("{name},,,,,,error: {e},"),
                };
                match triangulate::triangulate_base_polytope(&m, seed, None) {
                    Ok(built) => {
                        let report = verifier::verify(&built.tri);
                        let status = if report.all_pass(false) {
                            match &report.flag_status {
                                FlagStatus::Flag => "flag".to_string(),
                                FlagStatus::NotFlag(_) => "not_flag".to_string(),
                                FlagStatus::NotComputed => "not_computed".to_string(),
                            }
                        } else {
                            "verification_failed".to_string()
                        };
                        let hv: Vec<String> =
                            report.h_vector.iter().map(|h| h.to_string()).collect();
                        format!(
                            "{name},{},{},{},{},\"{}\",{},{}",
                            m.n(),
                            m.bases().len(),
                            report.cells,
                            report.volume,
                            hv.join(" "),
                            status,
                            started.elapsed().as_millis(),
                        )
                    }
                    Err(e) => format!("{name},{},{},,,,error: {e},", m.n(), m.bases().len()),
                }
            })
            .collect()
    });
    let mut csv = String::from("matroid,n,bases,cells,volume,h_vector,flag_status,wall_ms\n");
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    match output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &csv) {
                eprintln!("error: cannot write {p}: {e}");
                return ExitCode::from(EXIT_INVALID_INPUT);
            }
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Triangulate(opts) => cmd_triangulate(opts),
        Command::Hstar(opts) => cmd_hstar(opts),
        Command::Verify {
            file,
            allow_uncertified,
        } => cmd_verify(file, *allow_uncertified),
        Command::Dice { input, output } => cmd_dice(input, output),
        Command::Flagcheck { file } => cmd_flagcheck(file),
        Command::Corpus {
            input,
            seed,
            threads,
            output,
        } => cmd_corpus(input, *seed, *threads, output),
    }
}
