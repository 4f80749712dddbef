//! WebAssembly front end for the spectrum engine. Every export returns a JSON
//! string; the pure functions underneath are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use prsbox::bounds::{kloosterman_bounds, walsh_bounds, BoundCase, BoundReport};
use prsbox::character::AdditiveCharacter;
use prsbox::field::FieldContext;
use prsbox::sbox::FamilyDescriptor;
use prsbox::spectra::{
    parse_kloosterman_descriptor, tau_abs, walsh_spectrum, KloostermanSum, SpectrumMode, SpectrumReport,
};
use prsbox::sweep::sieve_primes;

/// Largest prime for which the full `p x p` heat map is returned.
pub const GRID_LIMIT: u64 = 257;
/// Upper end of the prime range accepted by [`ratio_curve`].
pub const CURVE_LIMIT: u64 = 2048;

type DemoResult<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[derive(Serialize)]
pub struct CaseRow {
    pub case: &'static str,
    pub max_abs: f64,
    pub a: u64,
    pub b: u64,
    pub bound: f64,
    pub formula: &'static str,
    pub ratio: f64,
}

#[derive(Serialize)]
pub struct Profile {
    pub family: String,
    pub p: u64,
    pub m: u64,
    pub cases: Vec<CaseRow>,
    pub correlation: f64,
    /// Row-major `|value(a, b)|`, `a` down and `b` across, or empty above [`GRID_LIMIT`].
    pub grid: Vec<f32>,
}

#[derive(Serialize)]
pub struct CurvePoint {
    pub p: u64,
    pub max_abs: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Serialize)]
pub struct Curve {
    pub family: String,
    pub case: &'static str,
    pub points: Vec<CurvePoint>,
    pub skipped: Vec<u64>,
}

fn case_rows(spectrum: &SpectrumReport, bounds: &BoundReport) -> Vec<CaseRow> {
    let tau = tau_abs(spectrum.p);
    spectrum
        .cases()
        .filter_map(|(case, cm)| {
            let b = bounds.get(case)?;
            Some(CaseRow {
                case: case.as_str(),
                max_abs: cm.max_abs,
                a: cm.a.value(),
                b: cm.b.value(),
                bound: b.raw,
                formula: b.formula.as_str(),
                ratio: b.ratio(cm.max_abs, tau),
            })
        })
        .collect()
}

fn grid(p: u64, f: impl Fn(u64, u64) -> f64) -> Vec<f32> {
    if p > GRID_LIMIT {
        return Vec::new();
    }
    (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).map(|(a, b)| f(a, b) as f32).collect()
}

pub fn walsh_profile_json(family: &str, p: u64, seed: u64) -> DemoResult<Profile> {
    let ctx = FieldContext::new(p).map_err(err)?;
    let chi = AdditiveCharacter::fundamental(p).map_err(err)?;
    let desc = FamilyDescriptor::parse(family, seed).map_err(err)?;
    let spec = desc.instantiate(&ctx).map_err(err)?;
    let spectrum = walsh_spectrum(&spec, &chi, &ctx, SpectrumMode::Reduced).map_err(err)?;
    let bounds = walsh_bounds(&spec, &ctx).map_err(err)?;
    let sbox = spec.table(&ctx).map_err(err)?;
    let grid = grid(p, |a, b| {
        let (mut re, mut im) = (0.0, 0.0);
        for (x, &s) in sbox.iter().enumerate() {
            let v = chi.eval((a * x as u64 + b * s) % p);
            re += v.re;
            im += v.im;
        }
        re.hypot(im)
    });
    Ok(Profile {
        family: desc.label(),
        p,
        m: spec.m(),
        cases: case_rows(&spectrum, &bounds),
        correlation: spectrum.correlation_max(),
        grid,
    })
}

pub fn kloosterman_profile_json(p: u64, m: u64, e: u64) -> DemoResult<Profile> {
    let ctx = FieldContext::new(p).map_err(err)?;
    let chi = AdditiveCharacter::fundamental(p).map_err(err)?;
    let sum = KloostermanSum::new(&ctx, m, e).map_err(err)?;
    let spectrum = sum.spectrum(&chi, SpectrumMode::Reduced).map_err(err)?;
    let bounds = kloosterman_bounds(p, m, e).map_err(err)?;
    let grid = grid(p, |a, b| sum.point(ctx.elem(a), ctx.elem(b), &chi).map_or(f64::NAN, |v| v.abs));
    Ok(Profile {
        family: spectrum.family.clone(),
        p,
        m,
        cases: case_rows(&spectrum, &bounds),
        correlation: spectrum.correlation_max(),
        grid,
    })
}

fn max_and_bound(family: &str, p: u64, case: BoundCase, seed: u64) -> prsbox::Result<Option<(f64, f64)>> {
    let ctx = FieldContext::new(p)?;
    let chi = AdditiveCharacter::fundamental(p)?;
    let (spectrum, bounds) = match parse_kloosterman_descriptor(family)? {
        Some((m, e)) => {
            if (p - 1) % m != 0 {
                return Ok(None);
            }
            (KloostermanSum::new(&ctx, m, e)?.spectrum(&chi, SpectrumMode::Reduced)?, kloosterman_bounds(p, m, e)?)
        }
        None => {
            let spec = FamilyDescriptor::parse(family, seed)?.instantiate(&ctx)?;
            (walsh_spectrum(&spec, &chi, &ctx, SpectrumMode::Reduced)?, walsh_bounds(&spec, &ctx)?)
        }
    };
    Ok(spectrum.get(case).zip(bounds.get(case)).map(|(c, b)| (c.max_abs, b.raw)))
}

/// Case maximum against its bound for every prime in `lo..=hi`; primes where
/// the family is undefined are listed in `skipped`.
pub fn ratio_curve_json(family: &str, lo: u64, hi: u64, case: &str) -> DemoResult<Curve> {
    if hi > CURVE_LIMIT {
        return Err(format!("the demo stops at p = {CURVE_LIMIT}"));
    }
    let case =
        BoundCase::ALL.into_iter().find(|c| c.as_str() == case).ok_or_else(|| format!("unknown case `{case}`"))?;
    // surface descriptor errors once instead of skipping every prime
    if parse_kloosterman_descriptor(family).map_err(err)?.is_none() {
        FamilyDescriptor::parse(family, 0).map_err(err)?;
    }
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for p in sieve_primes(lo.max(3), hi) {
        match max_and_bound(family, p, case, 0) {
            Ok(Some((max_abs, bound))) => {
                points.push(CurvePoint { p, max_abs, bound, ratio: max_abs / bound.max(tau_abs(p)) })
            }
            _ => skipped.push(p),
        }
    }
    Ok(Curve { family: family.to_string(), case: case.as_str(), points, skipped })
}

fn to_js<T: Serialize>(r: DemoResult<T>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(err)).map_err(|e| JsValue::from_str(&e))
}

/// Case maxima, bounds and the `|W(a, b)|` heat map of an S-box family at `p`.
#[wasm_bindgen]
pub fn walsh_profile(family: &str, p: u32, seed: u32) -> Result<String, JsValue> {
    to_js(walsh_profile_json(family, p.into(), seed.into()))
}

/// Case maxima, bounds and the `|K(a, b)|` heat map over the index-`m` subgroup.
#[wasm_bindgen]
pub fn kloosterman_profile(p: u32, m: u32, e: u32) -> Result<String, JsValue> {
    to_js(kloosterman_profile_json(p.into(), m.into(), e.into()))
}

#[wasm_bindgen]
pub fn ratio_curve(family: &str, lo: u32, hi: u32, case: &str) -> Result<String, JsValue> {
    to_js(ratio_curve_json(family, lo.into(), hi.into(), case))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walsh_grid_matches_case_maxima() {
        let prof = walsh_profile_json("inverse:m=2", 13, 0).unwrap();
        assert_eq!(prof.grid.len(), 169);
        assert_eq!(prof.grid[0], 13.0);
        let mixed = prof.cases.iter().find(|c| c.case == "mixed").unwrap();
        assert!((mixed.max_abs - 7.7544057079459145).abs() < 1e-9);
        let grid_max =
            (1..13).flat_map(|a| (1..13).map(move |b| (a, b))).map(|(a, b)| prof.grid[a * 13 + b]).fold(0f32, f32::max);
        assert!((grid_max as f64 - mixed.max_abs).abs() < 1e-4);
        assert!(mixed.ratio < 1.0);
    }

    #[test]
    fn kloosterman_profile_values() {
        let prof = kloosterman_profile_json(7, 2, 1).unwrap();
        let mixed = prof.cases.iter().find(|c| c.case == "mixed").unwrap();
        assert!((mixed.max_abs - 2.737509672573767).abs() < 1e-12);
        assert!((mixed.bound - 2.0 * 7f64.sqrt()).abs() < 1e-12);
        assert_eq!(prof.grid[0], 3.0);
        assert!(kloosterman_profile_json(7, 4, 1).is_err());
    }

    #[test]
    fn curve_skips_undefined_primes() {
        let c = ratio_curve_json("kloosterman:m=4", 3, 60, "mixed").unwrap();
        assert!(c.points.iter().all(|pt| pt.p % 4 == 1 && pt.ratio <= 1.0));
        assert!(c.skipped.contains(&7) && c.skipped.contains(&3));
        let g = ratio_curve_json("grassi:dp=3:dm=5", 3, 100, "mixed").unwrap();
        assert!(g.skipped.contains(&5));
        assert!(!g.points.is_empty());
        assert!(ratio_curve_json("inverse:m=2", 3, 5000, "mixed").is_err());
        assert!(ratio_curve_json("nonsense", 3, 50, "mixed").is_err());
        assert!(ratio_curve_json("inverse:m=2", 3, 50, "sideways").is_err());
    }

    #[test]
    fn json_strings() {
        let s = to_js(ratio_curve_json("inverse:m=2", 3, 30, "b_only")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["case"], "b_only");
    }
}
