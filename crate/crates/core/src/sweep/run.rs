use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bounds::{kloosterman_bounds, walsh_bounds, BoundCase, BoundReport, Formula, TAU_REL};
use crate::character::AdditiveCharacter;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::spectra::{tau_abs, walsh_spectrum_with, KloostermanSum, SpectrumMode, SpectrumReport};

use super::config::{Instance, SweepConfig, SweepMode};
use super::sieve::sieve_primes;

/// Agreement required between reduced and exhaustive maxima in cross mode.
pub const CROSS_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub p: u64,
    pub m: u64,
    pub d_spec: String,
    pub case: BoundCase,
    pub max_abs: f64,
    pub witness_a: u64,
    pub witness_b: u64,
    /// The formula's value, before capping at the trivial bound.
    pub bound: f64,
    /// `max_abs / max(bound, tau_abs)`.
    pub ratio: f64,
    /// `bound < p`: the bound says more than the size of the field.
    pub informative: bool,
    pub effective_bound: f64,
    pub formula: Formula,
    pub violated: bool,
    #[serde(skip)]
    pub(crate) d_key: (u8, u64, u64),
}

impl SweepRow {
    fn key(&self) -> (&str, u64, u64, (u8, u64, u64), BoundCase) {
        (&self.family, self.p, self.m, self.d_key, self.case)
    }
}

/// A `(prime, instance)` pair that was not evaluated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Skip {
    pub family: String,
    pub p: u64,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FamilySummary {
    pub rows: usize,
    pub violations: usize,
    pub non_informative: usize,
    /// Largest ratio over every case except `both_zero`.
    pub max_ratio: f64,
    pub max_ratio_p: u64,
    pub max_ratio_m: u64,
    pub max_ratio_case: Option<BoundCase>,
    /// Largest mixed-case ratio for each `m`.
    pub mixed_ratio_by_m: BTreeMap<u64, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub mode: SweepMode,
    pub seed: u64,
    pub twist: u64,
    pub primes: (u64, u64),
    /// Grid size: primes times instances.
    pub pairs: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub rows: usize,
    pub certified: usize,
    pub violations: usize,
    pub non_informative: usize,
    pub cross_mismatches: usize,
    pub families: BTreeMap<String, FamilySummary>,
    pub notices: BTreeSet<String>,
    pub mismatches: Vec<String>,
    pub skips: Vec<Skip>,
}

impl SweepSummary {
    /// True when no bound is violated and cross mode found no disagreement.
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.cross_mismatches == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

struct JobOutput {
    rows: Vec<SweepRow>,
    notice: Option<String>,
    mismatches: Vec<String>,
}

type JobResult = std::result::Result<JobOutput, String>;

/// Runs every `(prime, instance)` pair of the config. Output order depends
/// only on the config, never on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let primes = sieve_primes(cfg.primes.0, cfg.primes.1);
    let mut instances: Vec<Instance> = cfg.families.iter().flat_map(|f| f.instances()).collect();
    let mut seen = BTreeSet::new();
    instances.retain(|i| seen.insert(i.clone()));

    let jobs: Vec<(usize, u64)> =
        instances.iter().enumerate().flat_map(|(i, _)| primes.iter().map(move |&p| (i, p))).collect();
    let results = execute(cfg.workers, jobs.len(), |k| {
        let (i, p) = jobs[k];
        run_job(cfg, &instances[i], p)
    })?;

    let mut rows = Vec::new();
    let mut skips = Vec::new();
    let mut notices = BTreeSet::new();
    let mut mismatches = Vec::new();
    let mut evaluated = 0;
    for (&(i, p), result) in jobs.iter().zip(results) {
        match result {
            Ok(out) => {
                evaluated += 1;
                rows.extend(out.rows);
                notices.extend(out.notice);
                mismatches.extend(out.mismatches);
            }
            Err(reason) => skips.push(Skip { family: instances[i].label(), p, reason }),
        }
    }
    rows.sort_by(|x, y| x.key().cmp(&y.key()));
    skips.sort();

    let mut families: BTreeMap<String, FamilySummary> = BTreeMap::new();
    for r in &rows {
        let f = families.entry(r.family.clone()).or_default();
        f.rows += 1;
        f.violations += r.violated as usize;
        f.non_informative += !r.informative as usize;
        if r.case != BoundCase::BothZero && r.ratio > f.max_ratio {
            f.max_ratio = r.ratio;
            f.max_ratio_p = r.p;
            f.max_ratio_m = r.m;
            f.max_ratio_case = Some(r.case);
        }
        if matches!(r.case, BoundCase::Mixed | BoundCase::MixedDegenerate) {
            let e = f.mixed_ratio_by_m.entry(r.m).or_insert(0.0);
            *e = e.max(r.ratio);
        }
    }
    let violations = rows.iter().filter(|r| r.violated).count();
    let summary = SweepSummary {
        mode: cfg.mode,
        seed: cfg.seed,
        twist: cfg.twist,
        primes: cfg.primes,
        pairs: jobs.len(),
        evaluated,
        skipped: skips.len(),
        rows: rows.len(),
        certified: rows.len() - violations,
        violations,
        non_informative: rows.iter().filter(|r| !r.informative).count(),
        cross_mismatches: mismatches.len(),
        families,
        notices,
        mismatches,
        skips,
    };
    Ok(SweepOutcome { rows, summary })
}

#[cfg(feature = "parallel")]
fn execute<T, F>(workers: Option<usize>, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..n).into_par_iter().map(f).collect()))
}

#[cfg(not(feature = "parallel"))]
fn execute<T, F>(_workers: Option<usize>, n: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> T,
{
    Ok((0..n).map(f).collect())
}

fn run_job(cfg: &SweepConfig, instance: &Instance, p: u64) -> JobResult {
    let skip = |e: Error| e.to_string();
    let ctx = FieldContext::new(p).map_err(skip)?;
    let twist = cfg.twist % p;
    if twist == 0 {
        return Err(format!("twist {} vanishes mod {p}", cfg.twist));
    }
    let chi = AdditiveCharacter::new(p, twist).map_err(skip)?;
    let exhaustive = matches!(cfg.mode, SweepMode::BruteForce | SweepMode::Cross);
    if exhaustive && p > cfg.brute_cap {
        return Err(format!("exhaustive enumeration is capped at p <= {}", cfg.brute_cap));
    }
    let (bounds, d_key, reduced, brute) = match instance {
        Instance::Kloosterman { m, e } => {
            if (p - 1) % m != 0 {
                return Err(format!("m = {m} does not divide p - 1"));
            }
            let ks = KloostermanSum::new(&ctx, *m, *e).map_err(skip)?;
            let run = |mode| ks.spectrum_with(&chi, mode, cfg.brute_cap).map_err(skip);
            let bounds = kloosterman_bounds(p, *m, *e).map_err(skip)?;
            let (red, bf) = spectra(cfg.mode, run)?;
            (bounds, (0, *e, 0), red, bf)
        }
        Instance::Walsh(desc) => {
            let m = desc.m();
            if (p - 1) % m != 0 {
                return Err(format!("m = {m} does not divide p - 1"));
            }
            let spec = desc.instantiate(&ctx).map_err(skip)?;
            let bounds = walsh_bounds(&spec, &ctx).map_err(skip)?;
            let run = |mode| walsh_spectrum_with(&spec, &chi, &ctx, mode, cfg.brute_cap).map_err(skip);
            let (red, bf) = spectra(cfg.mode, run)?;
            (bounds, spec.sort_key(), red, bf)
        }
    };
    let family = instance.label();
    let mut mismatches = Vec::new();
    if let (Some(r), Some(b)) = (&reduced, &brute) {
        for case in BoundCase::ALL {
            let (x, y) = (r.get(case).map(|c| c.max_abs), b.get(case).map(|c| c.max_abs));
            let agree = match (x, y) {
                (Some(x), Some(y)) => (x - y).abs() <= CROSS_TOLERANCE,
                (None, None) => true,
                _ => false,
            };
            if !agree {
                mismatches.push(format!("{family} p={p} {case}: reduced {x:?} vs exhaustive {y:?}"));
            }
        }
    }
    let report = reduced.or(brute).expect("at least one enumeration ran");
    let rows = rows_for(&family, &report, &bounds, d_key)?;
    Ok(JobOutput { rows, notice: report.notice.clone(), mismatches })
}

fn spectra<F>(mode: SweepMode, run: F) -> std::result::Result<(Option<SpectrumReport>, Option<SpectrumReport>), String>
where
    F: Fn(SpectrumMode) -> std::result::Result<SpectrumReport, String>,
{
    Ok(match mode {
        SweepMode::Reduced => (Some(run(SpectrumMode::Reduced)?), None),
        SweepMode::BruteForce => (None, Some(run(SpectrumMode::BruteForce)?)),
        SweepMode::Cross => (Some(run(SpectrumMode::Reduced)?), Some(run(SpectrumMode::BruteForce)?)),
    })
}

fn rows_for(
    family: &str,
    report: &SpectrumReport,
    bounds: &BoundReport,
    d_key: (u8, u64, u64),
) -> std::result::Result<Vec<SweepRow>, String> {
    let p = report.p;
    let tau = tau_abs(p);
    report
        .cases()
        .map(|(case, cm)| {
            let b = bounds.get(case).ok_or_else(|| format!("no bound for case {case}"))?;
            Ok(SweepRow {
                family: family.to_string(),
                p,
                m: report.m,
                d_spec: report.d_spec.clone(),
                case,
                max_abs: cm.max_abs,
                witness_a: cm.a.value(),
                witness_b: cm.b.value(),
                bound: b.raw,
                ratio: b.ratio(cm.max_abs, tau),
                informative: b.raw < p as f64,
                effective_bound: b.effective,
                formula: b.formula,
                violated: b.violated_by(cm.max_abs, tau, TAU_REL),
                d_key,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::config::{FamilyGrid, FamilyKind};
    use super::*;
    use crate::sbox::TableMode;

    fn config(mode: SweepMode, workers: Option<usize>) -> SweepConfig {
        let klo = FamilyGrid { m: vec![2, 4], ..FamilyGrid::new("k", FamilyKind::Kloosterman) };
        let inv = FamilyGrid {
            m: vec![2, 3],
            tables: vec![TableMode::Identity, TableMode::Random { seed: 3, draw: 0 }],
            ..FamilyGrid::new("i", FamilyKind::Inverse)
        };
        let lin = FamilyGrid { d: vec![1, 2], m: vec![2, 4], ..FamilyGrid::new("l", FamilyKind::PowerResidue) };
        let gk = FamilyGrid { pairs: vec![(3, 5)], ..FamilyGrid::new("g", FamilyKind::Grassi) };
        SweepConfig { primes: (3, 61), families: vec![klo, inv, lin, gk], mode, workers, seed: 3, ..Default::default() }
    }

    #[test]
    fn cross_mode_agrees_and_certifies() {
        let out = run_sweep(&config(SweepMode::Cross, None)).unwrap();
        let s = &out.summary;
        assert_eq!(s.cross_mismatches, 0, "{:?}", s.mismatches);
        assert_eq!(s.violations, 0);
        assert!(s.passed());
        assert_eq!(s.evaluated + s.skipped, s.pairs);
        assert!(s.skips.iter().any(|k| k.reason.contains("does not divide")));
        assert!(!s.notices.is_empty());
        let mut sorted = out.rows.clone();
        sorted.sort_by(|x, y| x.key().cmp(&y.key()));
        assert_eq!(sorted, out.rows);
    }

    #[test]
    fn kloosterman_example_row() {
        let cfg = SweepConfig {
            primes: (7, 7),
            families: vec![FamilyGrid { m: vec![2], ..FamilyGrid::new("k", FamilyKind::Kloosterman) }],
            ..Default::default()
        };
        let out = run_sweep(&cfg).unwrap();
        let mixed = out.rows.iter().find(|r| r.case == BoundCase::Mixed).unwrap();
        assert_eq!((mixed.family.as_str(), mixed.p, mixed.m, mixed.d_spec.as_str()), ("kloosterman", 7, 2, "-"));
        assert!((mixed.bound - 5.291_502_622_129).abs() < 1e-12);
        assert!(mixed.informative);
        assert!(!mixed.violated);
        assert_eq!(out.rows.len(), 4);
    }

    #[test]
    fn worker_count_does_not_change_rows() {
        let a = run_sweep(&config(SweepMode::Reduced, Some(1))).unwrap();
        let b = run_sweep(&config(SweepMode::Reduced, Some(3))).unwrap();
        assert_eq!(a, b);
    }
}
