use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prsbox::bounds::{kloosterman_bounds, walsh_bounds, BoundReport, TAU_REL};
use prsbox::character::AdditiveCharacter;
use prsbox::field::FieldContext;
use prsbox::sbox::FamilyDescriptor;
use prsbox::selftest::run_selftest;
use prsbox::spectra::{
    parse_kloosterman_descriptor, tau_abs, walsh_spectrum_with, KloostermanSum, SpectrumMode, SpectrumReport,
};
use prsbox::sweep::{
    csv_string, emit_csv, emit_json, figure_presets, json_string, parse_range, run_sweep, SweepConfig, SweepMode,
    SweepOutcome,
};

#[derive(Parser)]
#[command(name = "prsbox", version, about = "Walsh and Kloosterman spectra of power residue S-boxes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a family grid over a prime range and certify every case maximum.
    Sweep(SweepArgs),
    /// Full spectrum and bounds for one family at one prime.
    Check(CheckArgs),
    /// Reduced against exhaustive enumeration on small primes.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Reduced,
    Brute,
    Cross,
}

impl From<Mode> for SweepMode {
    fn from(m: Mode) -> SweepMode {
        match m {
            Mode::Reduced => SweepMode::Reduced,
            Mode::Brute => SweepMode::BruteForce,
            Mode::Cross => SweepMode::Cross,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Both,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// One of kloosterman, inverse, small_d, gkrs.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// Flat `key = value` sweep description.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Prime range `lo:hi`, overriding the preset or config.
    #[arg(long)]
    primes: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Character twist c in psi(x) = exp(2 pi i c x / p).
    #[arg(long)]
    twist: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed for random T tables.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest prime for exhaustive enumeration.
    #[arg(long)]
    brute_cap: Option<u64>,
    /// Output directory; without it the CSV or JSON goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Family descriptor such as `inverse:m=4`, `grendel:d=3`, `grassi:dp=3:dm=5`
    /// or `kloosterman:m=4:e=1`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    twist: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "reduced")]
    mode: Mode,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Check(args) => check(args),
        Command::Selftest => selftest(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn sweep(args: SweepArgs) -> Result<bool> {
    let (mut cfg, name) = match (&args.preset, &args.config) {
        (Some(p), _) => (figure_presets(p)?, p.clone()),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg = SweepConfig::parse(&text).with_context(|| format!("in {}", path.display()))?;
            let stem = path.file_stem().map_or("sweep".into(), |s| s.to_string_lossy().into_owned());
            (cfg, stem)
        }
        (None, None) => bail!("either --preset or --config is required"),
    };
    if let Some(r) = &args.primes {
        cfg.primes = parse_range(r)?;
    }
    if let Some(m) = args.mode {
        cfg.mode = m.into();
    }
    if let Some(t) = args.twist {
        cfg.twist = t;
    }
    if let Some(w) = args.workers {
        cfg.workers = Some(w);
    }
    if let Some(s) = args.seed {
        cfg = cfg.with_seed(s);
    }
    if let Some(c) = args.brute_cap {
        cfg.brute_cap = c;
    }
    if args.out.is_none() && args.format == Format::Both {
        bail!("--format both needs --out");
    }

    let outcome = run_sweep(&cfg)?;
    report_to_stderr(&outcome);
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            if args.format != Format::Json {
                let path = dir.join(format!("{name}.csv"));
                emit_csv(&outcome.rows, cfg.seed, &path)?;
                eprintln!("wrote {}", path.display());
            }
            if args.format != Format::Csv {
                let path = dir.join(format!("{name}.summary.json"));
                emit_json(&outcome.summary, &path)?;
                eprintln!("wrote {}", path.display());
            }
        }
        None if args.format == Format::Json => println!("{}", json_string(&outcome.summary)?),
        None => print!("{}", csv_string(&outcome.rows, cfg.seed)?),
    }
    Ok(outcome.summary.passed())
}

fn report_to_stderr(outcome: &SweepOutcome) {
    let s = &outcome.summary;
    eprintln!(
        "pairs {} evaluated {} skipped {} | rows {} certified {} violations {} non-informative {}",
        s.pairs, s.evaluated, s.skipped, s.rows, s.certified, s.violations, s.non_informative
    );
    let mut reasons: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for k in &s.skips {
        *reasons.entry((k.family.as_str(), k.reason.as_str())).or_default() += 1;
    }
    for ((family, reason), n) in reasons {
        eprintln!("skipped {n} x {family}: {reason}");
    }
    for n in &s.notices {
        eprintln!("notice: {n}");
    }
    for m in &s.mismatches {
        eprintln!("mismatch: {m}");
    }
    for (family, f) in &s.families {
        eprintln!(
            "{family}: max ratio {:.6} at p = {}, m = {}{}",
            f.max_ratio,
            f.max_ratio_p,
            f.max_ratio_m,
            f.max_ratio_case.map_or(String::new(), |c| format!(", {c}"))
        );
    }
    for r in outcome.rows.iter().filter(|r| r.violated) {
        eprintln!(
            "VIOLATION {} p={} m={} d={} {}: {} > {}",
            r.family, r.p, r.m, r.d_spec, r.case, r.max_abs, r.effective_bound
        );
    }
}

#[derive(Serialize)]
struct CaseVerdict {
    case: String,
    max_abs: f64,
    witness_a: u64,
    witness_b: u64,
    bound: f64,
    effective_bound: f64,
    formula: &'static str,
    informative: bool,
    violated: bool,
}

#[derive(Serialize)]
struct CheckReport {
    spectrum: SpectrumReport,
    bounds: BoundReport,
    verdicts: Vec<CaseVerdict>,
    correlation: f64,
}

fn check(args: CheckArgs) -> Result<bool> {
    let ctx = FieldContext::new(args.p)?;
    let chi = AdditiveCharacter::new(args.p, args.twist)?;
    let mode = match args.mode {
        Mode::Reduced => SpectrumMode::Reduced,
        Mode::Brute => SpectrumMode::BruteForce,
        Mode::Cross => bail!("check runs a single enumeration; use reduced or brute"),
    };
    let (spectrum, bounds) = if let Some((m, e)) = parse_kloosterman_descriptor(&args.family)? {
        let ks = KloostermanSum::new(&ctx, m, e)?;
        (ks.spectrum_with(&chi, mode, u64::MAX)?, kloosterman_bounds(args.p, m, e)?)
    } else {
        let desc = FamilyDescriptor::parse(&args.family, args.seed)?;
        let spec = desc.instantiate(&ctx)?;
        let mut spectrum = walsh_spectrum_with(&spec, &chi, &ctx, mode, u64::MAX)?;
        spectrum.family = desc.label();
        let mut bounds = walsh_bounds(&spec, &ctx)?;
        bounds.family = desc.label();
        (spectrum, bounds)
    };
    let tau = tau_abs(args.p);
    let verdicts: Vec<CaseVerdict> = spectrum
        .cases()
        .filter_map(|(case, cm)| {
            let b = bounds.get(case)?;
            Some(CaseVerdict {
                case: case.to_string(),
                max_abs: cm.max_abs,
                witness_a: cm.a.value(),
                witness_b: cm.b.value(),
                bound: b.raw,
                effective_bound: b.effective,
                formula: b.formula.as_str(),
                informative: b.informative,
                violated: b.violated_by(cm.max_abs, tau, TAU_REL),
            })
        })
        .collect();
    let ok = verdicts.iter().all(|v| !v.violated);
    let report = CheckReport { correlation: spectrum.correlation_max(), spectrum, bounds, verdicts };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ok)
}

fn selftest() -> Result<bool> {
    let report = run_selftest()?;
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", report.checks.len());
    Ok(failed == 0)
}
