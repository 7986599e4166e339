//! Command-line front end. One thin binary dispatching onto the library.
//!
//! Exit codes: 0 clean, 1 validation flags, 2 usage errors, 3 numeric
//! failures.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::asympt::{
    c_s_conjectured, ddu_leading, ddv_bounds_prop1, ddv_upper_pointwise, ddv_upper_prop2,
    tilde_u_leading, u_leading, w_log, w_s, CsValue,
};
use crate::catalog::MagicCatalog;
use crate::concavity::{convexity_sets, second_diff};
use crate::error::{Error, Result};
use crate::exact::{exact_ddv, exact_v, find_critical_s, square_pyramid_height, CriticalTarget};
use crate::io::{
    format_f64, read_configuration, read_energy_table, write_configuration, write_energy_table,
};
use crate::minimize::{multi_start, scan, MinimizeOptions};
use crate::nets::net_energy_curve;
use crate::table::EnergyTable;
use crate::validate::validate;

#[derive(Parser)]
#[command(
    name = "riesz-sphere",
    version,
    about = "Minimal average standardized Riesz pair-energies on the unit sphere"
)]
pub struct Cli {
    /// Defaults file with key=value lines (keys: seed, restarts, tol, max_iters)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multi-start minimization at fixed N and s
    Minimize {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Gradient tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Write the best configuration here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a one-row energy table here
        #[arg(long)]
        energy_out: Option<PathBuf>,
    },
    /// Scan a range of N at fixed s into an energy table
    Scan {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form minimal energy and second difference at small N
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Second differences, convexity sets, and magic comparison of a table
    Analyze {
        #[arg(long)]
        table: PathBuf,
        /// Sign tolerance for the convexity partition
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every necessary criterion against a table (exit 1 on any flag)
    Validate {
        #[arg(long)]
        table: PathBuf,
        /// Companion tables at other exponents
        #[arg(long = "companion-s")]
        companion_s: Vec<PathBuf>,
    },
    /// Second-derivative bound report at one N
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        table: PathBuf,
        /// Optional configuration for the pointwise bound
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Continuum constants and conjectured expansion values
    Asympt {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        n: usize,
    },
    /// Lifted Sobol' net prefix energies
    Nets {
        #[arg(long)]
        count: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Drop the index-0 point (it lifts to the north pole)
        #[arg(long)]
        skip_zero: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical exponents of the small-N theory
    Critical {
        #[arg(long, value_enum)]
        which: CriticalName,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CriticalName {
    S1_3,
    S1_4,
    S1_6,
    SDagger,
}

#[derive(Default)]
struct ConfigDefaults {
    seed: Option<u64>,
    restarts: Option<usize>,
    tol: Option<f64>,
    max_iters: Option<usize>,
}

fn load_defaults(path: Option<&Path>) -> Result<ConfigDefaults> {
    let mut d = ConfigDefaults::default();
    let Some(path) = path else { return Ok(d) };
    let text = fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("config line {line:?} is not key=value")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let parse = |key: &str| -> Result<Option<f64>> {
        map.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Format(format!("config key {key} has bad value {v:?}")))
            })
            .transpose()
    };
    d.seed = parse("seed")?.map(|v| v as u64);
    d.restarts = parse("restarts")?.map(|v| v as usize);
    d.tol = parse("tol")?;
    d.max_iters = parse("max_iters")?.map(|v| v as usize);
    Ok(d)
}

fn options_for(
    n: usize,
    defaults: &ConfigDefaults,
    restarts: Option<usize>,
    seed: Option<u64>,
    tol: Option<f64>,
) -> MinimizeOptions {
    let mut opts = MinimizeOptions::for_n(n, seed.or(defaults.seed).unwrap_or(0));
    if let Some(r) = restarts.or(defaults.restarts) {
        opts.restarts = r;
    }
    if let Some(t) = tol.or(defaults.tol) {
        opts.grad_tol = t;
    }
    if let Some(m) = defaults.max_iters {
        opts.max_iters = m;
    }
    opts
}

fn emit_table(table: &EnergyTable, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_energy_table(table, path),
        None => {
            for (&n, row) in table.rows() {
                println!("{n} {}", format_f64(row.v));
            }
            Ok(())
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let defaults = load_defaults(cli.config.as_deref())?;
    match cli.command {
        Command::Minimize { n, s, restarts, seed, tol, out, energy_out } => {
            let opts = options_for(n, &defaults, restarts, seed, tol);
            let (best, pool) = multi_start(s, n, &opts)?;
            println!(
                "N={n} s={s} v={} grad_norm={:.3e} iterations={} restart={} pool: \
                 attempted={} failed={} distinct={}",
                format_f64(best.energy),
                best.grad_norm,
                best.iterations,
                best.restart_index,
                pool.attempted,
                pool.failed,
                pool.distinct_minima
            );
            if let Some(path) = out {
                write_configuration(&best.config, &path)?;
            }
            if let Some(path) = energy_out {
                let mut t = EnergyTable::new(s);
                t.insert(n, best.energy, &format!("computed(seed={},restarts={})", opts.seed, opts.restarts));
                write_energy_table(&t, &path)?;
            }
            Ok(0)
        }
        Command::Scan { n_min, n_max, s, restarts, seed, tol, out } => {
            let opts = options_for(n_max.max(2), &defaults, restarts, seed, tol);
            let outcome = scan(s, n_min, n_max, &opts)?;
            for (n, why) in &outcome.failures {
                eprintln!("N={n}: row failed: {why}");
            }
            emit_table(&outcome.table, out.as_deref())?;
            Ok(0)
        }
        Command::Exact { n, s } => {
            let (v, window) = exact_v(n, s)?;
            println!("v_{s}({n}) = {} [window: {window}]", format_f64(v));
            match exact_ddv(n, s) {
                Ok((dd, tag)) => println!("ddv_{s}({n}) = {} [{tag}]", format_f64(dd)),
                Err(e) => println!("ddv_{s}({n}): unavailable ({e})"),
            }
            Ok(0)
        }
        Command::Analyze { table, tol, out } => {
            let t = read_energy_table(&table)?;
            let report = convexity_sets(&t, tol.unwrap_or(0.0))?;
            match out {
                Some(path) => {
                    let mut text = String::from("N,ddv,class\n");
                    for &(n, dd) in &report.ddv {
                        let class = if report.c_plus.contains(&n) {
                            "+"
                        } else if report.c_minus.contains(&n) {
                            "-"
                        } else {
                            "0"
                        };
                        text.push_str(&format!("{n},{},{class}\n", format_f64(dd)));
                    }
                    fs::write(path, text)?;
                }
                None => {
                    for &(n, dd) in &report.ddv {
                        println!("{n} {}", format_f64(dd));
                    }
                }
            }
            eprintln!(
                "interior [{}, {}]: {} concave, {} linear, {} convex",
                report.interior.0,
                report.interior.1,
                report.c_minus.len(),
                report.c_zero.len(),
                report.c_plus.len()
            );
            if !report.c_plus.is_empty() {
                let list: Vec<String> = report.c_plus.iter().map(|n| n.to_string()).collect();
                eprintln!("convexity points: {{{}}}", list.join(", "));
            }
            if let Ok(reference) = MagicCatalog::embedded().c_plus(t.s()) {
                let (lo, hi) = report.interior;
                let expected: Vec<usize> =
                    reference.iter().copied().filter(|&n| n >= lo && n <= hi).collect();
                eprintln!("embedded experimental set on the same range: {expected:?}");
            }
            Ok(0)
        }
        Command::Validate { table, companion_s } => {
            let t = read_energy_table(&table)?;
            let companions = companion_s
                .iter()
                .map(|p| read_energy_table(p))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&EnergyTable> = companions.iter().collect();
            let report = validate(&t, &refs)?;
            for note in &report.catalog_notes {
                println!("note: {note}");
            }
            let mut flagged = 0usize;
            for row in &report.rows {
                if !row.consistent() {
                    flagged += 1;
                    for f in &row.flags {
                        println!("flag N={}: {}", row.n, f);
                    }
                }
            }
            if flagged == 0 {
                println!("consistent: all rows pass every necessary criterion");
                Ok(0)
            } else {
                println!("flagged: {flagged} row(s) fail a necessary criterion");
                Ok(1)
            }
        }
        Command::Bounds { n, s, table, points } => {
            let t = read_energy_table(&table)?;
            let v_n = t.require(n)?;
            let observed = second_diff(&t, n).ok();
            let rep = ddv_bounds_prop1(s, n, v_n, observed)?;
            println!(
                "two-sided bound at N={n}: {} <= ddv <= {}",
                format_f64(rep.lower),
                format_f64(rep.upper)
            );
            match observed {
                Some(dd) => println!(
                    "observed second difference: {} ({})",
                    format_f64(dd),
                    if rep.satisfied { "contained" } else { "VIOLATED" }
                ),
                None => println!("observed second difference: unavailable (need rows N-1, N, N+1)"),
            }
            if let Ok(v_prev) = t.require(n - 1) {
                let upper2 = ddv_upper_prop2(s, n, v_prev)?;
                println!("one-sided upper bound from v(N-1): {}", format_f64(upper2));
                if v_n >= v_prev && upper2 < rep.upper {
                    println!("note: the one-sided bound is the tighter upper bound here");
                }
            }
            if let Some(path) = points {
                let c = read_configuration(&path)?;
                let pw = ddv_upper_pointwise(s, &c)?;
                println!("pointwise upper bound from the configuration: {}", format_f64(pw));
            }
            let contained = rep.satisfied;
            Ok(if contained { 0 } else { 1 })
        }
        Command::Asympt { s, n } => {
            match w_s(s) {
                Ok(w) => println!("W_s = {}", format_f64(w)),
                Err(_) => println!("W_s: simple pole at s = 2"),
            }
            println!("W_log = {}", format_f64(w_log()));
            match u_leading(s, n) {
                Ok(l) => println!(
                    "u_leading(N={n}) = {}{}",
                    format_f64(l.value),
                    if l.cs_term_included { "" } else { " (C_s term omitted: no value available)" }
                ),
                Err(e) => println!("u_leading: unavailable ({e})"),
            }
            match ddu_leading(s, n) {
                Ok(l) => println!(
                    "ddu_leading(N={n}) = {}{}",
                    format_f64(l.value),
                    if l.cs_term_included { "" } else { " (C_s term omitted)" }
                ),
                Err(e) => println!("ddu_leading: unavailable ({e})"),
            }
            match tilde_u_leading(s, n, 0.0) {
                Ok(t) => println!("re-adjusted subtraction at N={n}: {}", format_f64(-t)),
                Err(e) => println!("re-adjusted branch: unavailable ({e})"),
            }
            match c_s_conjectured(s) {
                Ok(CsValue::Value(v)) => println!("C_s = {}", format_f64(v)),
                Ok(CsValue::NegativeSignOnly) => {
                    println!("C_s: negative on (0, 2) (sign diagnostic only)")
                }
                Err(e) => println!("C_s: unavailable ({e})"),
            }
            Ok(0)
        }
        Command::Nets { count, s, skip_zero, out } => {
            let (table, infinite) = net_energy_curve(s, count, skip_zero)?;
            for n in &infinite {
                eprintln!("N={n}: prefix energy is infinite (coincident pair, s >= 0)");
            }
            emit_table(&table, out.as_deref())?;
            Ok(0)
        }
        Command::Critical { which, tol } => {
            let tol = tol.unwrap_or(1e-9);
            let target = match which {
                CriticalName::S1_3 => CriticalTarget::S1Of3,
                CriticalName::S1_4 => CriticalTarget::S1Of4,
                CriticalName::S1_6 => CriticalTarget::S1Of6,
                CriticalName::SDagger => CriticalTarget::SDagger,
            };
            let value = find_critical_s(target, tol)?;
            println!("{}", format_f64(value));
            if matches!(which, CriticalName::SDagger) {
                let z = square_pyramid_height(value, 1e-13)?;
                println!("square pyramid height at the crossover: h = {}", format_f64(1.0 - z));
            }
            Ok(0)
        }
    }
}
