//! Walsh spectra of S-boxes and Kloosterman sums over multiplicative subgroups.
//!
//! Single points go through [`ArgumentHistogram`](crate::character::ArgumentHistogram)
//! and [`char_sum`](crate::character::char_sum). Whole spectra are enumerated
//! row by row: along a row one of the two coefficients steps through `F_p`, so
//! every argument is updated with one modular addition and the sum is a run of
//! table lookups.

mod engine;
mod identities;
mod kloosterman;
mod walsh;

use serde::Serialize;

pub use identities::{
    efficient_spectrum_residual, kloosterman_orbit_residual, reduction_identity_check, ReductionResiduals,
};
pub use kloosterman::{kloosterman_point, kloosterman_spectrum, parse_kloosterman_descriptor, KloostermanSum};
pub use walsh::{walsh_point, walsh_point_restricted, walsh_spectrum, walsh_spectrum_with, PointMap};

use crate::bounds::BoundCase;
use crate::character::Complex;
use crate::field::FieldElement;

/// Largest prime the exhaustive `(a, b)` enumeration accepts by default.
pub const DEFAULT_BRUTE_CAP: u64 = 1 << 12;

/// Largest modulus for which whole spectra are enumerated (arguments are `u32`).
pub const MAX_SPECTRUM_MODULUS: u64 = 1 << 31;

/// Equality and zero checks use `1e-6 * max(1, p)`.
pub fn tau_abs(p: u64) -> f64 {
    1e-6 * (p.max(1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub a: FieldElement,
    pub b: FieldElement,
    pub value: Complex,
    pub abs: f64,
}

impl SpectrumEntry {
    pub fn new(a: FieldElement, b: FieldElement, value: Complex) -> Self {
        SpectrumEntry { a, b, value, abs: value.abs() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    /// Orbit reductions: only representative `(a, b)` pairs are summed.
    Reduced,
    /// Every pair `(a, b)`, every sum evaluated on its own.
    BruteForce,
    /// Every pair `(a, b)`; for each `b` the whole `a` axis comes from one DFT.
    Dft,
}

/// Maximum of `|W|` (or `|K|`) over one case class, with the pair attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CaseMax {
    pub max_abs: f64,
    pub a: FieldElement,
    pub b: FieldElement,
    pub value: Complex,
}

/// For `d = 1`: the mixed case split by whether `-a/b` is a value of `T`,
/// which is exactly when one coset contributes a constant sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ImageSplit {
    pub outside_image: Option<CaseMax>,
    pub inside_image: Option<CaseMax>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub family: String,
    pub p: u64,
    pub m: u64,
    pub d_spec: String,
    /// Size of the summation domain: `p` for Walsh sums, `|G|` for Kloosterman sums.
    pub domain: u64,
    pub mode: SpectrumMode,
    pub both_zero: Option<CaseMax>,
    pub a_only: Option<CaseMax>,
    pub b_only: Option<CaseMax>,
    /// For `d = 1` only the pairs with `-a/b` outside `N_0`.
    pub mixed: Option<CaseMax>,
    /// `d = 1` only: pairs with `-a/b` in `N_0`.
    pub mixed_degenerate: Option<CaseMax>,
    pub image_split: Option<ImageSplit>,
    /// Number of character sums evaluated.
    pub sums: u64,
    pub notice: Option<String>,
}

impl SpectrumReport {
    pub fn get(&self, case: BoundCase) -> Option<&CaseMax> {
        match case {
            BoundCase::BothZero => self.both_zero.as_ref(),
            BoundCase::AOnly => self.a_only.as_ref(),
            BoundCase::BOnly => self.b_only.as_ref(),
            BoundCase::Mixed => self.mixed.as_ref(),
            BoundCase::MixedDegenerate => self.mixed_degenerate.as_ref(),
        }
    }

    pub fn cases(&self) -> impl Iterator<Item = (BoundCase, &CaseMax)> {
        BoundCase::ALL.into_iter().filter_map(|c| self.get(c).map(|m| (c, m)))
    }

    /// Largest value over all pairs with `a * b != 0`.
    pub fn mixed_overall(&self) -> f64 {
        [self.mixed, self.mixed_degenerate].iter().flatten().map(|c| c.max_abs).fold(0.0, f64::max)
    }

    pub fn correlation_max(&self) -> f64 {
        correlation(self)
    }
}

/// Mixed-case maximum divided by `p`.
pub fn correlation(report: &SpectrumReport) -> f64 {
    report.mixed_overall() / report.p as f64
}

/// Running per-case maxima; the first pair reaching a maximum is kept.
#[derive(Clone, Debug, Default)]
pub(crate) struct CaseAccumulator {
    slots: [Option<CaseMax>; 5],
    outside: Option<CaseMax>,
    inside: Option<CaseMax>,
    pub sums: u64,
}

fn offer(slot: &mut Option<CaseMax>, a: FieldElement, b: FieldElement, value: Complex) {
    let abs = value.abs();
    match slot {
        Some(cur) if cur.max_abs >= abs => {}
        _ => *slot = Some(CaseMax { max_abs: abs, a, b, value }),
    }
}

impl CaseAccumulator {
    pub fn offer(&mut self, case: BoundCase, a: FieldElement, b: FieldElement, value: Complex) {
        offer(&mut self.slots[case as usize], a, b, value);
    }

    pub fn offer_image(&mut self, inside: bool, a: FieldElement, b: FieldElement, value: Complex) {
        let slot = if inside { &mut self.inside } else { &mut self.outside };
        offer(slot, a, b, value);
    }

    pub fn finish(self, header: ReportHeader, with_image_split: bool) -> SpectrumReport {
        let [both_zero, a_only, b_only, mixed, mixed_degenerate] = self.slots;
        SpectrumReport {
            family: header.family,
            p: header.p,
            m: header.m,
            d_spec: header.d_spec,
            domain: header.domain,
            mode: header.mode,
            both_zero,
            a_only,
            b_only,
            mixed,
            mixed_degenerate,
            image_split: with_image_split
                .then_some(ImageSplit { outside_image: self.outside, inside_image: self.inside }),
            sums: self.sums,
            notice: header.notice,
        }
    }
}

pub(crate) struct ReportHeader {
    pub family: String,
    pub p: u64,
    pub m: u64,
    pub d_spec: String,
    pub domain: u64,
    pub mode: SpectrumMode,
    pub notice: Option<String>,
}
