//! Command-line front end. Every command prints a deterministic report in
//! `text`, `json` or (where a series exists) `csv` form.
//!
//! Exit codes: 0 success, 2 bad input or violated precondition, 3 a size
//! cap was hit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::format_rational;
use crate::audit::{goe_report, AuditConfig};
use crate::bset::{classify, density_bounds, tautness_audit, BSet, BSetKind, DensityMethod};
use crate::caps::Caps;
use crate::codes::{apply_code, apply_to_finite_config, consistency_check, is_monotone, Code};
use crate::constructions::{crt_counterexample, shifted_copies};
use crate::error::{Error, Result};
use crate::sieve::{
    self, entropy_estimate, eta_window, language_blocks, language_for_subshift, mirsky_frequency, EntropyConfig,
    Source, Word,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "bfree", version, about = "B-free sequences, admissible languages and sliding block code audits")]
pub struct Cli {
    /// Output format (default text).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// key=value file supplying caps and any option not given on the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct BArgs {
    /// Inline spec (`explicit:2,3`, `prime_powers:k=2`) or a B-set file.
    #[arg(long)]
    pub bset: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Primitivity, coprimality, thinness and Erdős status.
    Classify {
        #[command(flatten)]
        b: BArgs,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Exact density of a truncation with tail bounds.
    Density {
        #[command(flatten)]
        b: BArgs,
        /// Number of elements in the truncation B_K.
        #[arg(long)]
        k: Option<usize>,
        /// `ie` or `sieve`.
        #[arg(long)]
        method: Option<String>,
    },
    /// Does removing any element of B_K raise the density?
    Taut {
        #[command(flatten)]
        b: BArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        method: Option<String>,
    },
    /// η on a window `a:z`.
    Eta {
        #[command(flatten)]
        b: BArgs,
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Language table of length n.
    Lang {
        #[command(flatten)]
        b: BArgs,
        #[arg(long)]
        n: Option<usize>,
        /// `admissible`, `eta:N`, `hered`, `hered:N`.
        #[arg(long)]
        source: Option<String>,
        /// Also write the compact bitset file here.
        #[arg(long)]
        bitset: Option<PathBuf>,
    },
    /// Mirsky frequency of a block for B_K.
    Freq {
        #[command(flatten)]
        b: BArgs,
        #[arg(long)]
        block: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Block-growth entropy estimates over the hereditary closure.
    Entropy {
        #[command(flatten)]
        b: BArgs,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        window: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Sliding block codes.
    Ca {
        #[command(subcommand)]
        command: CaCommand,
    },
    /// Randomized property checks against brute-force oracles.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct CodeArgs {
    /// Code file, or a builtin name (`identity`, `shift:2`, `and_mask:0,1`, ...).
    #[arg(long)]
    pub code: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CaCommand {
    /// Apply a code to a word (`--finite` treats it as a zero-extended configuration).
    Apply {
        #[command(flatten)]
        c: CodeArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        finite: bool,
    },
    /// Monotone witness set and canonical element.
    Witness {
        #[command(flatten)]
        c: CodeArgs,
    },
    /// Blocks of length n+2ℓ whose image leaves the length-n language.
    Consistency {
        #[command(flatten)]
        c: CodeArgs,
        #[command(flatten)]
        b: BArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        source: Option<String>,
    },
    /// Shifted-copies word w_u.
    ConstructWu {
        #[arg(long)]
        u: String,
        #[arg(long)]
        b0: u64,
        #[command(flatten)]
        b: BArgs,
    },
    /// CRT configuration for a code without monotone witness.
    Counterexample {
        #[command(flatten)]
        c: CodeArgs,
        #[command(flatten)]
        b: BArgs,
    },
    /// Full audit report.
    Audit {
        #[command(flatten)]
        c: CodeArgs,
        #[command(flatten)]
        b: BArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "N")]
        big_n: Option<u64>,
        #[arg(long)]
        window: Option<u64>,
        /// Also write the multiplicity series as CSV here.
        #[arg(long)]
        series_csv: Option<PathBuf>,
    },
}

/// Caps plus the key=value settings of a config file.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub caps: Caps,
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::MalformedSpec(format!("config line {line:?}")))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            let num = |v: &str| -> Result<u64> {
                let n = parse_u64(v)?;
                if n == 0 {
                    return Err(Error::MalformedSpec(format!("cap {k} must be positive")));
                }
                Ok(n)
            };
            match k.as_str() {
                "period_cap" => cfg.caps.period = num(&v)?,
                "table_cap" => cfg.caps.table = num(&v)? as usize,
                "subset_cap" => cfg.caps.subsets = num(&v)? as usize,
                "dense_window" => cfg.caps.dense_window = num(&v)? as usize,
                "sample_window" => cfg.caps.sample_window = num(&v)?,
                "configuration_cap" => cfg.caps.configurations = num(&v)? as usize,
                _ => {
                    cfg.values.insert(k, v);
                }
            }
        }
        Ok(cfg)
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn num<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s
                .parse()
                .map_err(|_| Error::MalformedSpec(format!("config {key}={s:?}"))),
            None => Ok(default),
        }
    }

    fn text(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.get(key).map(str::to_string))
    }

    fn bset(&self, b: &BArgs) -> Result<BSet> {
        let spec = self
            .text(b.bset.clone(), "bset")
            .ok_or_else(|| Error::MalformedSpec("--bset is required".into()))?;
        let mut set = load_bset(&spec)?;
        if let Some(e) = self.get("enumeration_bound") {
            set = set.with_enumeration_bound(parse_u64(e)?);
        }
        Ok(set)
    }

    fn code(&self, c: &CodeArgs) -> Result<Code> {
        let spec = self
            .text(c.code.clone(), "code")
            .ok_or_else(|| Error::MalformedSpec("--code is required".into()))?;
        load_code(&spec)
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    let s = s.trim().replace('_', "");
    let bad = || Error::MalformedSpec(format!("not a number: {s:?}"));
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        return base.checked_pow(exp).ok_or(Error::Overflow);
    }
    s.parse().map_err(|_| bad())
}

/// A B-set from an existing file, else from an inline spec.
pub fn load_bset(spec: &str) -> Result<BSet> {
    let path = Path::new(spec);
    if path.is_file() {
        BSet::parse(&std::fs::read_to_string(path)?)
    } else {
        BSet::parse(spec)
    }
}

/// A code from an existing file, else a builtin name.
pub fn load_code(spec: &str) -> Result<Code> {
    let path = Path::new(spec);
    if path.is_file() {
        Code::parse_file(&std::fs::read_to_string(path)?)
    } else {
        Code::builtin(spec)
    }
}

fn default_k(b: &BSet) -> usize {
    match b.kind() {
        BSetKind::Explicit(v) => v.len(),
        BSetKind::PrimePowers { .. } => 6,
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

struct Out {
    format: Format,
    buf: String,
}

impl Out {
    fn emit<T: Serialize>(&mut self, report: &T, text: impl FnOnce() -> String, csv: Option<String>) -> Result<()> {
        let s = match self.format {
            Format::Json => json(report),
            Format::Text => text(),
            Format::Csv => csv.ok_or_else(|| Error::MalformedSpec("csv output is not available for this command".into()))?,
        };
        self.buf.push_str(&s);
        if !s.ends_with('\n') {
            self.buf.push('\n');
        }
        Ok(())
    }
}

/// Parse and run; the report is written to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::MalformedSpec(e.to_string()))?;
    execute(cli, out)
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::parse(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    let format = match (cli.format, cfg.get("format")) {
        (Some(f), _) => f,
        (None, Some(s)) => Format::from_str(s, true).map_err(|_| Error::MalformedSpec(format!("format {s:?}")))?,
        (None, None) => Format::Text,
    };
    let caps = cfg.caps;
    let mut o = Out {
        format,
        buf: String::new(),
    };
    match cli.command {
        Command::Classify { b, bound } => {
            let set = cfg.bset(&b)?;
            let r = classify(&set, cfg.num(bound, "bound", 10_000)?);
            o.emit(
                &r,
                || {
                    format!(
                        "primitive={}\npairwise_coprime={}\nthin_tail={}\ninfinite={}\nerdos_candidate={}\nthin_partial_sum={}\n",
                        r.primitive,
                        r.pairwise_coprime,
                        r.thin_tail,
                        r.infinite_kind,
                        r.erdos_candidate,
                        format_rational(&r.thin_partial_sum)
                    )
                },
                None,
            )?;
        }
        Command::Density { b, k, method } => {
            let set = cfg.bset(&b)?;
            let k = cfg.num(k, "k", default_k(&set))?;
            let method: DensityMethod = cfg.text(method, "method").as_deref().unwrap_or("sieve").parse()?;
            let r = density_bounds(&set, k, method, &caps)?;
            o.emit(&r, || r.to_string(), None)?;
        }
        Command::Taut { b, k, method } => {
            let set = cfg.bset(&b)?;
            let k = cfg.num(k, "k", default_k(&set))?;
            let method: DensityMethod = cfg.text(method, "method").as_deref().unwrap_or("sieve").parse()?;
            let r = tautness_audit(&set.first(k)?, method, &caps)?;
            o.emit(
                &r,
                || {
                    let mut s = format!("density {}\n", format_rational(&r.density));
                    for e in &r.entries {
                        let _ = writeln!(
                            s,
                            "without {}: {} ({})",
                            e.b,
                            format_rational(&e.density_without),
                            if e.strict { "strict" } else { "not strict" }
                        );
                    }
                    let _ = write!(s, "all strict: {}", r.all_strict);
                    s
                },
                None,
            )?;
        }
        Command::Eta { b, range } => {
            let set = cfg.bset(&b)?;
            let range = cfg.text(range, "range").unwrap_or_else(|| "0:63".into());
            let (a, z) = range
                .split_once(':')
                .and_then(|(a, z)| Some((a.trim().parse::<i64>().ok()?, z.trim().parse::<i64>().ok()?)))
                .ok_or_else(|| Error::MalformedSpec(format!("range {range:?}, expected a:z")))?;
            let w = eta_window(&set, a, z)?;
            o.emit(&w, || w.to_string(), None)?;
        }
        Command::Lang { b, n, source, bitset } => {
            let set = cfg.bset(&b)?;
            let n = cfg.num(n, "n", 8)?;
            let table = match cfg.text(source, "source") {
                Some(s) => language_blocks(&set, n, &s.parse::<Source>()?, &caps)?,
                None => language_for_subshift(&set, n, sieve::DEFAULT_ETA_WINDOW, &caps)?,
            };
            if let Some(path) = bitset {
                std::fs::write(path, table.to_bitset()?)?;
            }
            o.emit(
                &table,
                || {
                    let mut v = Vec::new();
                    let _ = table.write_text(&mut v);
                    String::from_utf8(v).unwrap_or_default()
                },
                None,
            )?;
        }
        Command::Freq { b, block: blk, k } => {
            let set = cfg.bset(&b)?;
            let k = cfg.num(k, "k", default_k(&set))?;
            let r = mirsky_frequency(&blk, &set.first(k)?, &caps)?;
            o.emit(&r, || format_rational(&r.frequency), None)?;
        }
        Command::Entropy { b, nmax, window, k } => {
            let set = cfg.bset(&b)?;
            let config = EntropyConfig {
                window: cfg.num(window, "window", EntropyConfig::default().window)?,
                truncation: cfg.num(
                    k,
                    "k",
                    match set.kind() {
                        BSetKind::Explicit(v) => v.len(),
                        _ => EntropyConfig::default().truncation,
                    },
                )?,
            };
            let r = entropy_estimate(&set, cfg.num(nmax, "nmax", 12)?, &config, &caps)?;
            let csv = {
                let mut s = String::from("n,blocks,estimate\n");
                for p in &r.series {
                    let _ = writeln!(s, "{},{},{}", p.n, p.blocks, crate::arith::sig12(p.estimate));
                }
                s
            };
            o.emit(
                &r,
                || {
                    let mut s = String::new();
                    for p in &r.series {
                        let _ = writeln!(s, "e({}) = {} ({} blocks)", p.n, crate::arith::sig12(p.estimate), p.blocks);
                    }
                    let _ = write!(
                        s,
                        "d = {}; e(n_max) - d = {}",
                        format_rational(&r.density.frequency),
                        crate::arith::sig12(r.final_gap)
                    );
                    s
                },
                Some(csv),
            )?;
        }
        Command::Ca { command } => run_ca(command, &cfg, &caps, &mut o)?,
        Command::Selftest { seed, cases } => {
            let r = selftest(cfg.num(seed, "seed", 0)?, cfg.num(cases, "cases", 50)?, &caps);
            o.emit(
                &r,
                || {
                    let mut s = String::new();
                    for c in &r.checks {
                        let _ = writeln!(s, "{}: {}/{} passed", c.name, c.passed, c.cases);
                    }
                    let _ = write!(s, "seed {} {}", r.seed, if r.all_passed { "ok" } else { "FAILED" });
                    s
                },
                None,
            )?;
            if !r.all_passed {
                out.write_all(o.buf.as_bytes())?;
                return Err(Error::PostconditionFailed(format!("selftest failed for seed {}", r.seed)));
            }
        }
    }
    out.write_all(o.buf.as_bytes())?;
    Ok(())
}

fn run_ca(command: CaCommand, cfg: &RunConfig, caps: &Caps, o: &mut Out) -> Result<()> {
    match command {
        CaCommand::Apply { c, word, finite } => {
            let code = cfg.code(&c)?;
            let w: Word = word.parse()?;
            let img = if finite {
                apply_to_finite_config(&code, &w)?
            } else {
                apply_code(&code, &w)?
            };
            o.emit(&img, || img.to_string(), None)
        }
        CaCommand::Witness { c } => {
            let code = cfg.code(&c)?;
            let v = is_monotone(&code);
            o.emit(&v, || v.witness.to_string(), None)
        }
        CaCommand::Consistency { c, b, n, source } => {
            let code = cfg.code(&c)?;
            let set = cfg.bset(&b)?;
            let n = cfg.num(n, "n", 4)?;
            let (lin, lout) = match cfg.text(source, "source") {
                Some(s) => {
                    let s: Source = s.parse()?;
                    (
                        language_blocks(&set, n + code.window() - 1, &s, caps)?,
                        language_blocks(&set, n, &s, caps)?,
                    )
                }
                None => (
                    language_for_subshift(&set, n + code.window() - 1, sieve::DEFAULT_ETA_WINDOW, caps)?,
                    language_for_subshift(&set, n, sieve::DEFAULT_ETA_WINDOW, caps)?,
                ),
            };
            let v = consistency_check(&code, &lin, &lout)?;
            o.emit(
                &v,
                || {
                    if v.is_empty() {
                        "no violations".into()
                    } else {
                        v.iter().map(|x| format!("{} -> {}", x.input, x.image)).collect::<Vec<_>>().join("\n")
                    }
                },
                None,
            )
        }
        CaCommand::ConstructWu { u, b0, b } => {
            let set = cfg.bset(&b)?;
            let r = shifted_copies(&u.parse()?, b0, &set)?;
            o.emit(&r, || r.to_string(), None)
        }
        CaCommand::Counterexample { c, b } => {
            let code = cfg.code(&c)?;
            let set = cfg.bset(&b)?;
            let r = crt_counterexample(&code, &set)?;
            o.emit(&r, || r.to_string(), None)
        }
        CaCommand::Audit {
            c,
            b,
            n,
            big_n,
            window,
            series_csv,
        } => {
            let code = cfg.code(&c)?;
            let set = cfg.bset(&b)?;
            let d = AuditConfig::default();
            let n = cfg.num(n, "n", d.n)?;
            let config = AuditConfig {
                n,
                big_n: cfg.num(big_n, "N", d.big_n)?,
                eta_window: cfg.num(window, "window", d.eta_window)?,
                multiplicity_n: n,
            };
            let r = goe_report(&code, &set, &config, caps)?;
            let csv = r.multiplicity.as_ref().map(|m| m.to_csv());
            if let (Some(path), Some(text)) = (series_csv, &csv) {
                std::fs::write(path, text)?;
            }
            o.emit(&r, || r.to_string(), csv)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestCheck {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
    pub all_passed: bool,
}

/// Seeded property checks, each against an independent brute-force oracle.
pub fn selftest(seed: u64, cases: usize, caps: &Caps) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let mut record = |name: &str, results: Vec<std::result::Result<(), String>>| {
        checks.push(SelftestCheck {
            name: name.into(),
            cases: results.len(),
            passed: results.iter().filter(|r| r.is_ok()).count(),
            first_failure: results.into_iter().find_map(|r| r.err()),
        });
    };

    // inclusion-exclusion against the period sieve
    let results = (0..cases)
        .map(|_| {
            let size = rng.gen_range(1..=5);
            let bk: Vec<u64> = (0..size).map(|_| rng.gen_range(2..=40)).collect();
            let ie = crate::bset::density_exact(&bk, DensityMethod::InclusionExclusion, caps).map_err(|e| e.to_string())?;
            let sv = crate::bset::density_exact(&bk, DensityMethod::PeriodSieve, caps).map_err(|e| e.to_string())?;
            if ie == sv {
                Ok(())
            } else {
                Err(format!("{bk:?}: {} vs {}", format_rational(&ie), format_rational(&sv)))
            }
        })
        .collect();
    record("density_ie_vs_sieve", results);

    // admissibility against direct residue counting, and translation invariance
    let squares = BSet::prime_squares();
    let results = (0..cases)
        .map(|_| {
            let len = rng.gen_range(1..=14usize);
            let v = rng.gen_range(0..1u64 << len);
            let w = Word::from_block(v, len, rng.gen_range(-50..50));
            let brute = [4u64, 9].iter().all(|&m| {
                let hit: std::collections::BTreeSet<i64> = w.support().iter().map(|s| s.rem_euclid(m as i64)).collect();
                (hit.len() as u64) < m
            });
            let t = rng.gen_range(-100..100);
            if sieve::is_admissible(&w, &squares) != brute {
                Err(format!("admissibility of {w}"))
            } else if !sieve::translation_invariance_check(&w, t, &squares) {
                Err(format!("translation of {w} by {t}"))
            } else {
                Ok(())
            }
        })
        .collect();
    record("admissibility", results);

    // shifted copies postconditions
    let results = (0..cases.min(30))
        .map(|_| {
            let b0 = [9u64, 25, 49][rng.gen_range(0..3)];
            let len = rng.gen_range(1..=((b0 - 1) / 2).min(6) as usize);
            let mut v = rng.gen_range(1..1u64 << len);
            if !sieve::is_admissible(&Word::from_block(v, len, 0), &squares) {
                v = 1;
            }
            let u = Word::from_block(v, len, 0);
            match shifted_copies(&u, b0, &squares) {
                Ok(r) if r.checks.all() && r.support.len() == r.n_u * (b0 as usize - r.n_u) => Ok(()),
                Ok(_) => Err(format!("support size for {u}")),
                Err(e) => Err(format!("{u} b0={b0}: {e}")),
            }
        })
        .collect();
    record("shifted_copies", results);

    // monotone witness soundness on random words
    let results = (0..cases)
        .map(|_| {
            let radius = rng.gen_range(0..=2usize);
            let l = 2 * radius + 1;
            let ones: Vec<u64> = (0..1u64 << l).filter(|_| rng.gen_bool(0.3)).collect();
            let code = Code::from_ones(radius, ones).map_err(|e| e.to_string())?;
            let wit = is_monotone(&code).witness;
            let len = rng.gen_range(l..=16);
            let w = Word::from_block(rng.gen_range(0..1u64 << len), len, 0);
            let img = apply_code(&code, &w).map_err(|e| e.to_string())?;
            for &t in &wit.set {
                if wit.all_zero_code {
                    continue;
                }
                if let Some(&s) = img.support().iter().find(|&&s| !w.bit(s + t)) {
                    return Err(format!("{} on {w}: 1 at {s} but no 1 at {}", code.name(), s + t));
                }
            }
            Ok(())
        })
        .collect();
    record("monotone_witness", results);

    let all_passed = checks.iter().all(|c| c.passed == c.cases);
    SelftestReport {
        seed,
        checks,
        all_passed,
    }
}

/// Process entry point; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_cap_exceeded() {
        3
    } else {
        2
    }
}
