use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::bounds::BoundCase;
use crate::character::{char_sum, AdditiveCharacter, ArgumentHistogram, Complex};
use crate::error::{Error, Result};
use crate::field::{gcd, mod_inv, mod_mul, mod_pow, FieldContext, FieldElement};
use crate::sbox::{ExponentSpec, ResidueTable, SBoxSpec};

use super::engine::{check_modulus, for_each_row, row_scan, PowerTables};
use super::{CaseAccumulator, ReportHeader, SpectrumEntry, SpectrumMode, SpectrumReport, DEFAULT_BRUTE_CAP};

/// `W_S(psi, a, b) = sum_{x in F_p} psi(a x + b S(x))`.
pub fn walsh_point(
    spec: &SBoxSpec,
    a: FieldElement,
    b: FieldElement,
    chi: &AdditiveCharacter,
    ctx: &FieldContext,
) -> Result<SpectrumEntry> {
    let table = spec.table(ctx)?;
    let p = ctx.p();
    let hist = ArgumentHistogram::from_arguments(
        p,
        (0..p).map(|x| (mod_mul(a.value(), x, p) + mod_mul(b.value(), table[x as usize], p)) % p),
    );
    Ok(SpectrumEntry::new(a, b, char_sum(&hist, chi)?))
}

/// The function summed by [`walsh_point_restricted`].
#[derive(Clone, Copy, Debug)]
pub enum PointMap<'a> {
    Monomial(u64),
    SBox(&'a SBoxSpec),
}

/// `sum_{x in X} psi(a x + b f(x))` for an arbitrary domain `X`.
pub fn walsh_point_restricted(
    f: PointMap<'_>,
    domain: &[u64],
    a: FieldElement,
    b: FieldElement,
    chi: &AdditiveCharacter,
    ctx: &FieldContext,
) -> Result<SpectrumEntry> {
    let p = ctx.p();
    let mut hist = ArgumentHistogram::new(p);
    for &x in domain {
        let x = ctx.elem(x);
        let fx = match f {
            PointMap::Monomial(d) => ctx.pow(x, d),
            PointMap::SBox(spec) => spec.eval(ctx, x)?,
        };
        hist.push(ctx.add(ctx.mul(a, x), ctx.mul(b, fx)).value());
    }
    Ok(SpectrumEntry::new(a, b, char_sum(&hist, chi)?))
}

pub fn walsh_spectrum(
    spec: &SBoxSpec,
    chi: &AdditiveCharacter,
    ctx: &FieldContext,
    mode: SpectrumMode,
) -> Result<SpectrumReport> {
    walsh_spectrum_with(spec, chi, ctx, mode, DEFAULT_BRUTE_CAP)
}

/// Per-case maxima of the Walsh spectrum.
///
/// `Reduced` uses `W_S(a, b) = W_{S_r}(1, b a^-d)` for `a` in `N_r`, where
/// `S_r` carries `T` rotated by `r`; rotations that agree up to a scalar
/// share one row, so `T = id` needs a single `a = 1` row. The `a = 0` row
/// only needs one `b` per coset of `{t^d : t in N_0}`. On the two-exponent
/// family no reduction applies and every pair is enumerated by DFT.
///
/// For `d = 1` the mixed case is split by `-a/b in N_0` and independently by
/// `-a/b in T(mu_m)`.
pub fn walsh_spectrum_with(
    spec: &SBoxSpec,
    chi: &AdditiveCharacter,
    ctx: &FieldContext,
    mode: SpectrumMode,
    brute_cap: u64,
) -> Result<SpectrumReport> {
    spec.validate(ctx)?;
    let p = ctx.p();
    check_modulus(p)?;
    if chi.p() != p {
        return Err(Error::ModulusMismatch { expected: p, found: chi.p() });
    }
    let (mode, notice) = match (mode, spec) {
        (SpectrumMode::Reduced, SBoxSpec::TwoExponentLegendre { .. }) => (
            SpectrumMode::Dft,
            Some("no orbit reduction for the two-exponent family; all pairs enumerated by DFT".to_string()),
        ),
        (m, _) => (m, None),
    };
    if mode == SpectrumMode::BruteForce && p > brute_cap {
        return Err(Error::param(format!("brute-force enumeration is capped at p <= {brute_cap}, got {p}")));
    }
    let header = ReportHeader {
        family: match spec {
            SBoxSpec::PowerResidue { .. } => "power_residue".into(),
            SBoxSpec::TwoExponentLegendre { .. } => "grassi".into(),
        },
        p,
        m: spec.m(),
        d_spec: spec.d_label(),
        domain: p,
        mode,
        notice,
    };
    let degenerate = Degeneracy::for_spec(spec, ctx);
    let s: Vec<u32> = spec.table(ctx)?.into_iter().map(|v| v as u32).collect();
    let mut acc = CaseAccumulator::default();
    match (mode, spec) {
        (SpectrumMode::Reduced, SBoxSpec::PowerResidue { exponent, m, table }) => {
            reduced(&mut acc, &s, *exponent, *m, table, chi, ctx, degenerate.as_ref())?
        }
        (SpectrumMode::BruteForce, _) => brute_force(&mut acc, &s, chi, degenerate.as_ref()),
        (SpectrumMode::Dft, _) => dft(&mut acc, &s, chi, degenerate.as_ref()),
        (SpectrumMode::Reduced, SBoxSpec::TwoExponentLegendre { .. }) => unreachable!(),
    }
    Ok(acc.finish(header, degenerate.is_some()))
}

/// Classification data for the `d = 1` split.
struct Degeneracy {
    m: u64,
    pw: PowerTables,
    neg_one_log: u64,
    image: Vec<bool>,
}

impl Degeneracy {
    fn for_spec(spec: &SBoxSpec, ctx: &FieldContext) -> Option<Self> {
        match spec {
            SBoxSpec::PowerResidue { exponent: ExponentSpec::Literal(1), m, table } => {
                let p = ctx.p();
                let pw = PowerTables::new(p, ctx.generator());
                let mut image = vec![false; p as usize];
                for &t in table.entries() {
                    image[(t % p) as usize] = true;
                }
                Some(Degeneracy { m: *m, neg_one_log: pw.log(p - 1), pw, image })
            }
            _ => None,
        }
    }

    /// `(-a/b in N_0, -a/b in T(mu_m))` for `a b != 0`.
    fn classify(&self, a: u64, b: u64) -> (bool, bool) {
        let n = self.pw.exp.len() as u64;
        let k = (self.neg_one_log + self.pw.log(a) + n - self.pw.log(b)) % n;
        (k % self.m == 0, self.image[self.pw.pow(k) as usize])
    }
}

fn offer(acc: &mut CaseAccumulator, a: u64, b: u64, value: Complex, degenerate: Option<&Degeneracy>) {
    let (fa, fb) = (FieldElement::from_reduced(a), FieldElement::from_reduced(b));
    let case = match (a, b) {
        (0, 0) => BoundCase::BothZero,
        (_, 0) => BoundCase::AOnly,
        (0, _) => BoundCase::BOnly,
        _ => match degenerate {
            Some(deg) => {
                let (in_subgroup, in_image) = deg.classify(a, b);
                acc.offer_image(in_image, fa, fb, value);
                if in_subgroup {
                    BoundCase::MixedDegenerate
                } else {
                    BoundCase::Mixed
                }
            }
            None => BoundCase::Mixed,
        },
    };
    acc.offer(case, fa, fb, value);
}

#[allow(clippy::too_many_arguments)]
fn reduced(
    acc: &mut CaseAccumulator,
    s: &[u32],
    exponent: ExponentSpec,
    m: u64,
    table: &ResidueTable,
    chi: &AdditiveCharacter,
    ctx: &FieldContext,
    degenerate: Option<&Degeneracy>,
) -> Result<()> {
    let p = ctx.p();
    let g = ctx.generator();
    let d = exponent.effective(p);
    let zeros = vec![0u32; p as usize];

    // a = 0 row: W(0, b) = W(0, b t^d) for t in N_0
    offer(acc, 0, 0, row_scan(&zeros, s, 0, 1, chi)[0], degenerate);
    let reps = gcd(((m as u128 * d as u128) % (p as u128 - 1)) as u64, p - 1);
    for i in 0..reps {
        let b = mod_pow(g, i, p);
        let args: Vec<u32> = s.iter().map(|&v| mod_mul(b, v as u64, p) as u32).collect();
        offer(acc, 0, b, chi.sum_reduced(&args), degenerate);
    }
    acc.sums += 1 + reps;

    // a != 0: one row W_{S_r}(1, .) per class of rotations equal up to a scalar
    let mut canon: Vec<ResidueTable> = Vec::new();
    let mut members: Vec<Vec<(u64, u64)>> = Vec::new();
    for r in 0..m {
        let rotated = table.rotated(r);
        match canon.iter().enumerate().find_map(|(k, t)| scalar_ratio(&rotated, t, ctx).map(|l| (k, l))) {
            Some((k, lambda)) => members[k].push((r, lambda)),
            None => {
                canon.push(rotated);
                members.push(vec![(r, 1)]);
            }
        }
    }
    let s_rows: Vec<Vec<u32>> = canon
        .iter()
        .map(|t| {
            SBoxSpec::power_residue(exponent, m, t.clone())
                .table(ctx)
                .map(|v| v.into_iter().map(|x| x as u32).collect())
        })
        .collect::<Result<_>>()?;
    let xs: Vec<u32> = (0..p as u32).collect();
    let mut a_only_done = false;
    for_each_row(
        canon.len(),
        |k| row_scan(&xs, &s_rows[k], 0, p, chi),
        |k, row| {
            if !a_only_done {
                offer(acc, 1, 0, row[0], degenerate);
                a_only_done = true;
            }
            acc.sums += p;
            for &(r, lambda) in &members[k] {
                let a = mod_pow(g, r, p);
                let a_pow_d = mod_pow(a, d, p);
                for c in 1..p {
                    offer(acc, a, mod_mul(c, a_pow_d, p), row[mod_mul(lambda, c, p) as usize], degenerate);
                }
            }
        },
    );
    Ok(())
}

/// `lambda` with `t = lambda * base` entrywise, if there is one.
fn scalar_ratio(t: &ResidueTable, base: &ResidueTable, ctx: &FieldContext) -> Option<u64> {
    let p = ctx.p();
    let lambda = mod_mul(t.get(0), mod_inv(base.get(0), p).ok()?, p);
    t.entries().iter().zip(base.entries()).all(|(&x, &y)| mod_mul(lambda, y, p) == x % p).then_some(lambda)
}

fn brute_force(acc: &mut CaseAccumulator, s: &[u32], chi: &AdditiveCharacter, degenerate: Option<&Degeneracy>) {
    let p = chi.p();
    for_each_row(
        p as usize,
        |a| {
            let base: Vec<u32> = (0..p).map(|x| mod_mul(a as u64, x, p) as u32).collect();
            row_scan(&base, s, 0, p, chi)
        },
        |a, row| {
            for (b, value) in row.into_iter().enumerate() {
                offer(acc, a as u64, b as u64, value, degenerate);
            }
            acc.sums += p;
        },
    );
}

fn dft(acc: &mut CaseAccumulator, s: &[u32], chi: &AdditiveCharacter, degenerate: Option<&Degeneracy>) {
    let p = chi.p();
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(p as usize);
    let (re, im) = (chi.re_table(), chi.im_table());
    let twist = chi.twist();
    for_each_row(
        p as usize,
        |b| {
            let mut buf: Vec<Complex64> = s
                .iter()
                .map(|&v| {
                    let t = mod_mul(b as u64, v as u64, p) as usize;
                    Complex64::new(re[t], im[t])
                })
                .collect();
            fft.process(&mut buf);
            buf
        },
        |b, buf| {
            for a in 0..p {
                let w = buf[mod_mul(twist, a, p) as usize];
                offer(acc, a, b as u64, Complex::new(w.re, w.im), degenerate);
            }
            acc.sums += p;
        },
    );
}
