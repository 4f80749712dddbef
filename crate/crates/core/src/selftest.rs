//! Oracle-equivalence suite: reduced enumeration against exhaustive
//! enumeration on small primes, plus reference maxima from an independent
//! complex-exponential evaluation.

use serde::Serialize;

use crate::bounds::BoundCase;
use crate::character::AdditiveCharacter;
use crate::error::Result;
use crate::field::FieldContext;
use crate::sbox::{FamilyDescriptor, SBoxSpec, TableMode};
use crate::spectra::{walsh_point, walsh_spectrum, KloostermanSum, SpectrumMode, SpectrumReport};

pub const SELFTEST_PRIMES: [u64; 5] = [7, 11, 13, 31, 61];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(SelftestCheck { name, passed, detail });
    }
}

/// Largest disagreement between two reports over all case maxima, or
/// `None` if the reports cover different cases.
pub fn max_case_difference(x: &SpectrumReport, y: &SpectrumReport) -> Option<f64> {
    let mut worst = 0.0f64;
    for case in BoundCase::ALL {
        match (x.get(case), y.get(case)) {
            (Some(a), Some(b)) => worst = worst.max((a.max_abs - b.max_abs).abs()),
            (None, None) => {}
            _ => return None,
        }
    }
    Some(worst)
}

fn walsh_instances(p: u64) -> Vec<FamilyDescriptor> {
    let mut out = Vec::new();
    for m in [2u64, 3, 4, 5, 6].into_iter().filter(|m| (p - 1) % m == 0) {
        for table in [TableMode::Identity, TableMode::Random { seed: 1, draw: 0 }] {
            out.push(FamilyDescriptor::Inverse { m, table: table.clone() });
            out.push(FamilyDescriptor::PowerResidue { d: 1, m, table: table.clone() });
            out.push(FamilyDescriptor::PowerResidue { d: 3, m, table: table.clone() });
            out.push(FamilyDescriptor::ScaledInverse { e: 2, m, table });
        }
    }
    out.push(FamilyDescriptor::Grassi { d_plus: 3, d_minus: 5 });
    out
}

/// `|W(a, b)|` over all `a != 0`, sorted, against the `a = 1` row repeated
/// `p - 1` times; for `T = id` the two multisets coincide.
fn row_multiset_matches(spec: &SBoxSpec, chi: &AdditiveCharacter, ctx: &FieldContext) -> Result<bool> {
    let p = ctx.p();
    let key = |v: f64| (v * 1e6).round() as i64;
    let mut row = Vec::new();
    for c in 0..p {
        row.push(key(walsh_point(spec, ctx.elem(1), ctx.elem(c), chi, ctx)?.abs));
    }
    let mut repeated: Vec<i64> = row.iter().flat_map(|&v| std::iter::repeat_n(v, p as usize - 1)).collect();
    let mut all = Vec::new();
    for a in 1..p {
        for b in 0..p {
            all.push(key(walsh_point(spec, ctx.elem(a), ctx.elem(b), chi, ctx)?.abs));
        }
    }
    repeated.sort_unstable();
    all.sort_unstable();
    Ok(repeated == all)
}

pub fn run_selftest() -> Result<SelftestReport> {
    let mut report = SelftestReport::default();
    for p in SELFTEST_PRIMES {
        let ctx = FieldContext::new(p)?;
        let chi = AdditiveCharacter::fundamental(p)?;

        let mut worst = 0.0f64;
        let mut ok = true;
        let mut count = 0;
        for m in (1..p).filter(|m| (p - 1) % m == 0) {
            for e in [1, 2] {
                let k = KloostermanSum::new(&ctx, m, e)?;
                let red = k.spectrum(&chi, SpectrumMode::Reduced)?;
                let bf = k.spectrum(&chi, SpectrumMode::BruteForce)?;
                match max_case_difference(&red, &bf) {
                    Some(d) => worst = worst.max(d),
                    None => ok = false,
                }
                count += 1;
            }
        }
        report.push(
            format!("kloosterman reduced = exhaustive, p = {p}"),
            ok && worst <= 1e-6,
            format!("{count} subgroup sums, max difference {worst:.3e}"),
        );

        let mut worst = 0.0f64;
        let mut ok = true;
        let mut count = 0;
        for desc in walsh_instances(p) {
            let spec = match desc.instantiate(&ctx) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let red = walsh_spectrum(&spec, &chi, &ctx, SpectrumMode::Reduced)?;
            let bf = walsh_spectrum(&spec, &chi, &ctx, SpectrumMode::BruteForce)?;
            match max_case_difference(&red, &bf) {
                Some(d) => worst = worst.max(d),
                None => ok = false,
            }
            count += 1;
        }
        report.push(
            format!("walsh reduced = exhaustive, p = {p}"),
            ok && worst <= 1e-6,
            format!("{count} S-boxes, max difference {worst:.3e}"),
        );

        if p <= 31 {
            let spec = FamilyDescriptor::Inverse { m: 2, table: TableMode::Identity }.instantiate(&ctx)?;
            let same = row_multiset_matches(&spec, &chi, &ctx)?;
            report.push(format!("reduced row multiset, p = {p}"), same, "inverse, m = 2, T = id".into());
        }
    }

    // reference maxima from a direct complex-exponential enumeration over all pairs
    let reference: [(&str, u64, BoundCase, f64); 4] = [
        ("power_residue:d=3:m=2", 31, BoundCase::Mixed, 8.686_979_032_946_525),
        ("power_residue:d=3:m=2", 31, BoundCase::BOnly, 16.798_743_219_470_07),
        ("inverse:m=2", 13, BoundCase::Mixed, 7.754_405_707_945_914_5),
        ("grassi:dp=3:dm=5", 13, BoundCase::Mixed, 9.284_244_398_741_688),
    ];
    for (desc, p, case, expected) in reference {
        let ctx = FieldContext::new(p)?;
        let chi = AdditiveCharacter::fundamental(p)?;
        let spec = FamilyDescriptor::parse(desc, 0)?.instantiate(&ctx)?;
        let got = walsh_spectrum(&spec, &chi, &ctx, SpectrumMode::Reduced)?.get(case).map_or(f64::NAN, |c| c.max_abs);
        report.push(
            format!("reference {desc}, p = {p}, {case}"),
            (got - expected).abs() < 1e-9,
            format!("{got:.12} vs {expected:.12}"),
        );
    }
    for (p, m, expected) in [(7u64, 2u64, 2.737_509_672_573_767), (13, 4, 2.922_639_920_108_675)] {
        let ctx = FieldContext::new(p)?;
        let chi = AdditiveCharacter::fundamental(p)?;
        let got = KloostermanSum::classic(&ctx, m)?
            .spectrum(&chi, SpectrumMode::Reduced)?
            .mixed
            .map_or(f64::NAN, |c| c.max_abs);
        report.push(
            format!("reference kloosterman, p = {p}, m = {m}"),
            (got - expected).abs() < 1e-9,
            format!("{got:.12} vs {expected:.12}"),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let r = run_selftest().unwrap();
        assert!(r.passed(), "{:#?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert!(r.checks.len() >= 16);
    }
}
