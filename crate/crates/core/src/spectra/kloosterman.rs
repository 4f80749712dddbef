use crate::bounds::BoundCase;
use crate::character::{char_sum, AdditiveCharacter, ArgumentHistogram, Complex};
use crate::error::{Error, Result};
use crate::field::{gcd, mod_inv, mod_mul, mod_pow, FieldContext, FieldElement, Subgroup};
use crate::sbox::split_descriptor;

use super::engine::{check_modulus, for_each_row, row_scan};
use super::{CaseAccumulator, ReportHeader, SpectrumEntry, SpectrumMode, SpectrumReport, DEFAULT_BRUTE_CAP};

/// `(m, e)` from `kloosterman:m=<m>[:e=<e>]`; `None` for any other family.
pub fn parse_kloosterman_descriptor(desc: &str) -> Result<Option<(u64, u64)>> {
    let (name, params) = split_descriptor(desc)?;
    if name != "kloosterman" {
        return Ok(None);
    }
    let int = |k: &str| -> Result<Option<u64>> {
        params.get(k).map(|v| v.parse().map_err(|_| Error::param(format!("bad integer `{v}` for {k}")))).transpose()
    };
    if let Some(k) = params.keys().find(|k| *k != "m" && *k != "e") {
        return Err(Error::param(format!("unknown kloosterman parameter `{k}`")));
    }
    let m = int("m")?.ok_or_else(|| Error::param("kloosterman needs m"))?;
    Ok(Some((m, int("e")?.unwrap_or(1))))
}

/// `K_e(G, a, b) = sum_{x in G} psi(a x + b x^-e)` over `G = N_0` of index `m`.
#[derive(Clone, Debug)]
pub struct KloostermanSum {
    group: Subgroup,
    e: u64,
    /// `x^-e` for each element `x` of the group, in the group's order.
    inv_pow: Vec<u64>,
}

impl KloostermanSum {
    pub fn new(ctx: &FieldContext, m: u64, e: u64) -> Result<Self> {
        Self::over(Subgroup::new(ctx, m)?, e)
    }

    /// The classic sum, `e = 1`.
    pub fn classic(ctx: &FieldContext, m: u64) -> Result<Self> {
        Self::new(ctx, m, 1)
    }

    pub fn over(group: Subgroup, e: u64) -> Result<Self> {
        if e == 0 {
            return Err(Error::param("Kloosterman exponent must be at least 1"));
        }
        let p = group.ctx().p();
        let inv_pow =
            group.elements().iter().map(|&x| mod_inv(x, p).map(|y| mod_pow(y, e, p))).collect::<Result<_>>()?;
        Ok(KloostermanSum { group, e, inv_pow })
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn m(&self) -> u64 {
        self.group.index()
    }

    pub fn point(&self, a: FieldElement, b: FieldElement, chi: &AdditiveCharacter) -> Result<SpectrumEntry> {
        let p = self.group.ctx().p();
        let hist = ArgumentHistogram::from_arguments(
            p,
            self.group
                .elements()
                .iter()
                .zip(&self.inv_pow)
                .map(|(&x, &y)| (mod_mul(a.value(), x, p) + mod_mul(b.value(), y, p)) % p),
        );
        Ok(SpectrumEntry::new(a, b, char_sum(&hist, chi)?))
    }

    pub fn spectrum(&self, chi: &AdditiveCharacter, mode: SpectrumMode) -> Result<SpectrumReport> {
        self.spectrum_with(chi, mode, DEFAULT_BRUTE_CAP)
    }

    /// Per-case maxima. `Reduced` uses `K(a, b) = K(g^r, b g^(k m e))` for
    /// `a = g^(k m + r)`, so only the rows `a = g^0, ..., g^(m-1)` are summed.
    /// The `a = 0` row needs one `b` per coset of `G^e`. Witnesses are given in
    /// those reduced coordinates.
    pub fn spectrum_with(&self, chi: &AdditiveCharacter, mode: SpectrumMode, brute_cap: u64) -> Result<SpectrumReport> {
        let ctx = self.group.ctx();
        let p = ctx.p();
        check_modulus(p)?;
        if chi.p() != p {
            return Err(Error::ModulusMismatch { expected: p, found: chi.p() });
        }
        if mode != SpectrumMode::Reduced && p > brute_cap {
            return Err(Error::param(format!("exhaustive enumeration is capped at p <= {brute_cap}, got {p}")));
        }
        let xs: Vec<u32> = self.group.elements().iter().map(|&x| x as u32).collect();
        let ys: Vec<u32> = self.inv_pow.iter().map(|&y| y as u32).collect();
        let m = self.m();
        let g = ctx.generator();
        let mut acc = CaseAccumulator::default();
        let (rows, notice): (Vec<u64>, _) = match mode {
            SpectrumMode::Reduced => ((0..m).map(|r| mod_pow(g, r, p)).collect(), None),
            SpectrumMode::BruteForce => ((0..p).collect(), None),
            SpectrumMode::Dft => {
                ((0..p).collect(), Some("no DFT path for Kloosterman sums; every pair summed directly".into()))
            }
        };
        let zeros = vec![0u32; xs.len()];
        // a = 0 row
        if mode == SpectrumMode::Reduced {
            let reps = gcd(((m as u128 * self.e as u128) % (p as u128 - 1)) as u64, p - 1);
            let row_b: Vec<u64> = std::iter::once(0).chain((0..reps).map(|i| mod_pow(g, i, p))).collect();
            for b in row_b {
                let args: Vec<u32> = ys.iter().map(|&y| mod_mul(b, y as u64, p) as u32).collect();
                offer(&mut acc, 0, b, chi.sum_reduced(&args));
                acc.sums += 1;
            }
        } else {
            for (b, v) in row_scan(&zeros, &ys, 0, p, chi).into_iter().enumerate() {
                offer(&mut acc, 0, b as u64, v);
            }
            acc.sums += p;
        }
        for_each_row(
            rows.len(),
            |i| {
                let a = rows[i];
                let base: Vec<u32> = xs.iter().map(|&x| mod_mul(a, x as u64, p) as u32).collect();
                row_scan(&base, &ys, 0, p, chi)
            },
            |i, row| {
                let a = rows[i];
                if a != 0 {
                    for (b, v) in row.into_iter().enumerate() {
                        offer(&mut acc, a, b as u64, v);
                    }
                    acc.sums += p;
                }
            },
        );
        let header = ReportHeader {
            family: if self.e == 1 { "kloosterman".into() } else { format!("kloosterman_e{}", self.e) },
            p,
            m,
            d_spec: if self.e == 1 { "-".into() } else { self.e.to_string() },
            domain: self.group.order(),
            mode: if mode == SpectrumMode::Dft { SpectrumMode::BruteForce } else { mode },
            notice,
        };
        Ok(acc.finish(header, false))
    }
}

fn offer(acc: &mut CaseAccumulator, a: u64, b: u64, value: Complex) {
    let case = match (a, b) {
        (0, 0) => BoundCase::BothZero,
        (_, 0) => BoundCase::AOnly,
        (0, _) => BoundCase::BOnly,
        _ => BoundCase::Mixed,
    };
    acc.offer(case, FieldElement::from_reduced(a), FieldElement::from_reduced(b), value);
}

/// Classic Kloosterman sum `sum_{x in G} psi(a x + b / x)`.
pub fn kloosterman_point(
    group: &Subgroup,
    a: FieldElement,
    b: FieldElement,
    chi: &AdditiveCharacter,
) -> Result<SpectrumEntry> {
    KloostermanSum::over(group.clone(), 1)?.point(a, b, chi)
}

/// Reduced-mode spectrum of the classic sum over `group`.
pub fn kloosterman_spectrum(group: &Subgroup, chi: &AdditiveCharacter) -> Result<SpectrumReport> {
    KloostermanSum::over(group.clone(), 1)?.spectrum(chi, SpectrumMode::Reduced)
}
