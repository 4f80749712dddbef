//! Closed-form upper bounds on `|W_S|` and `|K|`, per case class.
//!
//! Every bound is evaluated in double precision from integer inputs. A bound
//! at or above the trivial value (`p` for Walsh sums, `|G|` for Kloosterman
//! sums) is kept as computed, capped in [`Bound::effective`], and marked as
//! not informative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd, FieldContext};
use crate::sbox::{ExponentSpec, SBoxSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    BothZero = 0,
    AOnly = 1,
    BOnly = 2,
    Mixed = 3,
    /// `d = 1` only: `a b != 0` with `-a/b in N_0`.
    MixedDegenerate = 4,
}

impl BoundCase {
    pub const ALL: [BoundCase; 5] =
        [BoundCase::BothZero, BoundCase::AOnly, BoundCase::BOnly, BoundCase::Mixed, BoundCase::MixedDegenerate];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundCase::BothZero => "both_zero",
            BoundCase::AOnly => "a_only",
            BoundCase::BOnly => "b_only",
            BoundCase::Mixed => "mixed",
            BoundCase::MixedDegenerate => "mixed_degenerate",
        }
    }
}

impl std::fmt::Display for BoundCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn sqrt(p: u64) -> f64 {
    (p as f64).sqrt()
}

fn check_order(p: u64, order: u64) -> Result<()> {
    if order == 0 || (p - 1) % order != 0 {
        return Err(Error::param(format!("{order} is not a subgroup order of F_{p}^*")));
    }
    Ok(())
}

fn check_index(p: u64, m: u64) -> Result<()> {
    if m == 0 || (p - 1) % m != 0 {
        return Err(Error::param(format!("m = {m} does not divide p - 1 = {}", p - 1)));
    }
    Ok(())
}

/// Kloosterman sums over a subgroup `G`: `|G|`, `|G|/(p-1) + (1 - |G|/(p-1)) sqrt p`
/// on either axis, `2 sqrt p` when `a b != 0`.
pub fn kloosterman_bound(p: u64, order: u64, case: BoundCase) -> Result<f64> {
    kloosterman_e_bound(p, order, 1, case)
}

/// Kloosterman sums with `x^-e`: the `b`-axis term grows to `(e - |G|/(p-1)) sqrt p`,
/// the mixed term to `(e + 1) sqrt p`.
pub fn kloosterman_e_bound(p: u64, order: u64, e: u64, case: BoundCase) -> Result<f64> {
    check_order(p, order)?;
    if e == 0 {
        return Err(Error::param("e must be at least 1"));
    }
    let ratio = order as f64 / (p - 1) as f64;
    Ok(match case {
        BoundCase::BothZero => order as f64,
        BoundCase::AOnly => ratio + (1.0 - ratio) * sqrt(p),
        BoundCase::BOnly => ratio + (e as f64 - ratio) * sqrt(p),
        BoundCase::Mixed | BoundCase::MixedDegenerate => (e + 1) as f64 * sqrt(p),
    })
}

/// `d = p - 2`: `p; 0; (m - 1) sqrt p + 2; 2 m sqrt p + 1`.
pub fn walsh_bound_inverse(p: u64, m: u64, case: BoundCase) -> Result<f64> {
    check_index(p, m)?;
    let m = m as f64;
    Ok(match case {
        BoundCase::BothZero => p as f64,
        BoundCase::AOnly => 0.0,
        BoundCase::BOnly => (m - 1.0) * sqrt(p) + 2.0,
        BoundCase::Mixed | BoundCase::MixedDegenerate => 2.0 * m * sqrt(p) + 1.0,
    })
}

/// `d = e (p - 2)`: `p; 0; (e m - 1) sqrt p + 2; (e + 1) m sqrt p`.
pub fn walsh_bound_scaled_inverse(p: u64, m: u64, e: u64, case: BoundCase) -> Result<f64> {
    check_index(p, m)?;
    if e == 0 {
        return Err(Error::param("e must be at least 1"));
    }
    let (m, e) = (m as f64, e as f64);
    Ok(match case {
        BoundCase::BothZero => p as f64,
        BoundCase::AOnly => 0.0,
        BoundCase::BOnly => (e * m - 1.0) * sqrt(p) + 2.0,
        BoundCase::Mixed | BoundCase::MixedDegenerate => (e + 1.0) * m * sqrt(p),
    })
}

/// `1 < d m < p`, `gcd(d, p) = 1`: `(d m - 1) sqrt p + 2` off the axes and on the `b` axis.
pub fn walsh_bound_general(p: u64, m: u64, d: u64, case: BoundCase) -> Result<f64> {
    check_index(p, m)?;
    let dm = d.checked_mul(m).ok_or_else(|| Error::param("d m overflows"))?;
    if dm <= 1 || dm >= p {
        return Err(Error::param(format!("needs 1 < d m < p, got d m = {dm}, p = {p}")));
    }
    if gcd(d, p) != 1 {
        return Err(Error::param(format!("needs gcd(d, p) = 1, got d = {d}, p = {p}")));
    }
    Ok(match case {
        BoundCase::BothZero => p as f64,
        BoundCase::AOnly => 0.0,
        BoundCase::BOnly | BoundCase::Mixed | BoundCase::MixedDegenerate => (dm - 1) as f64 * sqrt(p) + 2.0,
    })
}

/// The `d m` condition under which the general bound is below `p`.
pub fn general_bound_is_informative(p: u64, m: u64, d: u64) -> bool {
    ((d * m) as f64) < sqrt(p)
}

/// `d = 1` with injective `T`: `(m - 1) sqrt p + 2` unless `-a/b in N_0`, then
/// `(p - 1)/m + (m - 2 + 1/m) sqrt p + 2 - 1/m`.
pub fn walsh_bound_d1(p: u64, m: u64, case: BoundCase) -> Result<f64> {
    check_index(p, m)?;
    let mf = m as f64;
    Ok(match case {
        BoundCase::BothZero => p as f64,
        BoundCase::AOnly => 0.0,
        BoundCase::BOnly | BoundCase::Mixed => (mf - 1.0) * sqrt(p) + 2.0,
        BoundCase::MixedDegenerate => (p - 1) as f64 / mf + (mf - 2.0 + 1.0 / mf) * sqrt(p) + 2.0 - 1.0 / mf,
    })
}

/// Two-exponent Legendre S-box: `(d+ + d- - 1) sqrt p + 2` off the `a` axis.
pub fn grassi_bound(p: u64, d_plus: u64, d_minus: u64, case: BoundCase) -> Result<f64> {
    if p % 2 == 0 {
        return Err(Error::param("needs an odd prime"));
    }
    if d_plus < 2 || d_minus < 2 {
        return Err(Error::param("needs d+, d- > 1"));
    }
    if gcd(d_plus, p) != 1 || gcd(d_minus, p) != 1 {
        return Err(Error::param(format!("needs gcd(d+ d-, p) = 1 for p = {p}")));
    }
    if 2 * d_plus >= p || 2 * d_minus >= p {
        return Err(Error::param(format!("needs 2 d+- < p, got p = {p}")));
    }
    Ok(match case {
        BoundCase::BothZero => p as f64,
        BoundCase::AOnly => 0.0,
        BoundCase::BOnly | BoundCase::Mixed | BoundCase::MixedDegenerate => {
            (d_plus + d_minus - 1) as f64 * sqrt(p) + 2.0
        }
    })
}

/// `|sum_x psi(f(x))| <= (deg f - 1) sqrt p` for `gcd(deg f, p) = 1`.
pub fn weil_bound_polynomial(deg_f: u64, p: u64) -> Result<f64> {
    if deg_f == 0 || gcd(deg_f, p) != 1 {
        return Err(Error::param(format!("needs gcd(deg f, p) = 1, got deg f = {deg_f}")));
    }
    Ok((deg_f - 1) as f64 * sqrt(p))
}

/// Rational arguments `F/G` where `G` has `s` distinct roots:
/// `(max(deg F, deg G) + s* - 2) sqrt p + delta`, with `s* = s, delta = 1` when
/// `deg F <= deg G` and `s* = s + 1, delta = 0` otherwise.
pub fn weil_bound_rational(deg_f: u64, deg_g: u64, s: u64, p: u64) -> f64 {
    let (s_star, delta) = if deg_f <= deg_g { (s, 1.0) } else { (s + 1, 0.0) };
    (deg_f.max(deg_g) + s_star) as f64 * sqrt(p) - 2.0 * sqrt(p) + delta
}

/// Reference values for comparison columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceBounds {
    /// Conjectured mixed Kloosterman bound `4 sqrt p`.
    pub conjecture: f64,
    /// Proven mixed Kloosterman bound `2 sqrt p`.
    pub kloosterman: f64,
    /// Inverse family with `m = 2^n`: maximal correlation `2^(n+2) / sqrt p`.
    pub polocolo_correlation: f64,
}

pub fn conjecture_and_corr_bounds(p: u64, n: u32) -> ReferenceBounds {
    ReferenceBounds {
        conjecture: 4.0 * sqrt(p),
        kloosterman: 2.0 * sqrt(p),
        polocolo_correlation: (1u64 << (n + 2)) as f64 / sqrt(p),
    }
}

/// `(x^d chi_2)` correlation bound `2 d / sqrt p` (`p > 3`).
pub fn legendre_power_correlation_bound(p: u64, d: u64) -> f64 {
    2.0 * d as f64 / sqrt(p)
}

/// `x chi_2(x)` correlation bound `1/2 + 1/(2 sqrt p) + 1/p`.
pub fn legendre_linear_correlation_bound(p: u64) -> f64 {
    0.5 + 0.5 / sqrt(p) + 1.0 / p as f64
}

/// Two-exponent Legendre correlation bound `(d+ + d-) / sqrt p` (`p > 5`).
pub fn grassi_correlation_bound(p: u64, d_plus: u64, d_minus: u64) -> f64 {
    (d_plus + d_minus) as f64 / sqrt(p)
}

/// Which result a bound value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Trivial,
    AdditiveOrthogonality,
    Permutation,
    KloostermanSubgroup,
    KloostermanScaled,
    WalshInverse,
    WalshScaledInverse,
    WalshGeneral,
    WalshLinear,
    /// `d = 1`, `T` injective but `T(mu_m)` not inside `N_0`: every mixed pair
    /// gets the degenerate value, since at most one coset sum is constant.
    WalshLinearImage,
    Grassi,
}

impl Formula {
    pub fn as_str(self) -> &'static str {
        match self {
            Formula::Trivial => "trivial",
            Formula::AdditiveOrthogonality => "orthogonality",
            Formula::Permutation => "permutation",
            Formula::KloostermanSubgroup => "kloosterman_subgroup",
            Formula::KloostermanScaled => "kloosterman_scaled",
            Formula::WalshInverse => "walsh_inverse",
            Formula::WalshScaledInverse => "walsh_scaled_inverse",
            Formula::WalshGeneral => "walsh_general",
            Formula::WalshLinear => "walsh_linear",
            Formula::WalshLinearImage => "walsh_linear_image",
            Formula::Grassi => "grassi",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bound {
    /// The formula's value.
    pub raw: f64,
    /// `min(raw, trivial)`.
    pub effective: f64,
    pub trivial: f64,
    pub formula: Formula,
    /// `raw < trivial`.
    pub informative: bool,
}

impl Bound {
    pub fn new(raw: f64, trivial: f64, formula: Formula) -> Self {
        Bound { raw, effective: raw.min(trivial), trivial, formula, informative: raw < trivial }
    }

    /// Whether `value` exceeds the effective bound beyond `tau_abs` and a relative `tau_rel`.
    pub fn violated_by(&self, value: f64, tau_abs: f64, tau_rel: f64) -> bool {
        value > self.effective * (1.0 + tau_rel) + tau_abs
    }

    /// `value / raw`, with `raw` floored at `tau_abs` so zero bounds give finite ratios.
    pub fn ratio(&self, value: f64, tau_abs: f64) -> f64 {
        value / self.raw.max(tau_abs)
    }
}

/// Relative slack on bound checks; covers float rounding only.
pub const TAU_REL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub family: String,
    pub p: u64,
    pub both_zero: Bound,
    pub a_only: Bound,
    pub b_only: Bound,
    pub mixed: Bound,
    /// `d = 1` power residue S-boxes only.
    pub mixed_degenerate: Option<Bound>,
}

impl BoundReport {
    pub fn get(&self, case: BoundCase) -> Option<&Bound> {
        match case {
            BoundCase::BothZero => Some(&self.both_zero),
            BoundCase::AOnly => Some(&self.a_only),
            BoundCase::BOnly => Some(&self.b_only),
            BoundCase::Mixed => Some(&self.mixed),
            BoundCase::MixedDegenerate => self.mixed_degenerate.as_ref(),
        }
    }
}

/// Bounds for the classic (`e = 1`) or scaled Kloosterman sum over the index-`m` subgroup.
pub fn kloosterman_bounds(p: u64, m: u64, e: u64) -> Result<BoundReport> {
    check_index(p, m)?;
    let order = (p - 1) / m;
    let trivial = order as f64;
    let formula = if e == 1 { Formula::KloostermanSubgroup } else { Formula::KloostermanScaled };
    let b = |case| kloosterman_e_bound(p, order, e, case).map(|v| Bound::new(v, trivial, formula));
    Ok(BoundReport {
        family: if e == 1 { "kloosterman".into() } else { format!("kloosterman_e{e}") },
        p,
        both_zero: Bound::new(trivial, trivial, Formula::Trivial),
        a_only: b(BoundCase::AOnly)?,
        b_only: b(BoundCase::BOnly)?,
        mixed: b(BoundCase::Mixed)?,
        mixed_degenerate: None,
    })
}

/// Picks the result whose hypotheses the spec satisfies. Specs outside every
/// hypothesis are rejected so that the caller can log the skip.
///
/// For `d = 1`: non-injective tables are rejected; injective tables with
/// `T(mu_m)` inside `N_0` get the split formulas, any other injective table
/// gets the degenerate value on every mixed pair. A verified permutation
/// has `W(0, b) = 0`.
pub fn walsh_bounds(spec: &SBoxSpec, ctx: &FieldContext) -> Result<BoundReport> {
    spec.validate(ctx)?;
    let p = ctx.p();
    let trivial = p as f64;
    let bound = |v: f64, f| Bound::new(v, trivial, f);
    let (b_only, mixed, mixed_degenerate) = match spec {
        SBoxSpec::PowerResidue { exponent, m, table } => {
            let m = *m;
            let d = exponent.effective(p);
            match *exponent {
                ExponentSpec::Inverse | ExponentSpec::ScaledInverse(1) => (
                    bound(walsh_bound_inverse(p, m, BoundCase::BOnly)?, Formula::WalshInverse),
                    bound(walsh_bound_inverse(p, m, BoundCase::Mixed)?, Formula::WalshInverse),
                    None,
                ),
                // p = 3 makes d = 1 and d = p - 2 coincide; the spectrum splits on d = 1
                ExponentSpec::Literal(1) => {
                    if !table.is_injective() {
                        return Err(Error::param("d = 1 bounds need an injective table"));
                    }
                    let group = ctx.subgroup(m)?;
                    let inside = table.entries().iter().all(|&t| group.contains(ctx.elem(t)));
                    let b_only = bound(walsh_bound_d1(p, m, BoundCase::BOnly)?, Formula::WalshLinear);
                    let degenerate = walsh_bound_d1(p, m, BoundCase::MixedDegenerate)?;
                    if inside {
                        let mixed = bound(walsh_bound_d1(p, m, BoundCase::Mixed)?, Formula::WalshLinear);
                        (b_only, mixed, Some(bound(degenerate, Formula::WalshLinear)))
                    } else {
                        let both = bound(degenerate, Formula::WalshLinearImage);
                        (b_only, both, Some(both))
                    }
                }
                ExponentSpec::Literal(l) if l == p - 2 => (
                    bound(walsh_bound_inverse(p, m, BoundCase::BOnly)?, Formula::WalshInverse),
                    bound(walsh_bound_inverse(p, m, BoundCase::Mixed)?, Formula::WalshInverse),
                    None,
                ),
                ExponentSpec::ScaledInverse(e) => (
                    bound(walsh_bound_scaled_inverse(p, m, e, BoundCase::BOnly)?, Formula::WalshScaledInverse),
                    bound(walsh_bound_scaled_inverse(p, m, e, BoundCase::Mixed)?, Formula::WalshScaledInverse),
                    None,
                ),
                ExponentSpec::Literal(_) => (
                    bound(walsh_bound_general(p, m, d, BoundCase::BOnly)?, Formula::WalshGeneral),
                    bound(walsh_bound_general(p, m, d, BoundCase::Mixed)?, Formula::WalshGeneral),
                    None,
                ),
            }
        }
        SBoxSpec::TwoExponentLegendre { d_plus, d_minus } => (
            bound(grassi_bound(p, *d_plus, *d_minus, BoundCase::BOnly)?, Formula::Grassi),
            bound(grassi_bound(p, *d_plus, *d_minus, BoundCase::Mixed)?, Formula::Grassi),
            None,
        ),
    };
    let b_only = if spec.is_permutation(ctx)?.bijective { bound(0.0, Formula::Permutation) } else { b_only };
    Ok(BoundReport {
        family: spec.d_label(),
        p,
        both_zero: bound(trivial, Formula::Trivial),
        a_only: bound(0.0, Formula::AdditiveOrthogonality),
        b_only,
        mixed,
        mixed_degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;
    use crate::sbox::FamilyDescriptor;
    use proptest::prelude::*;

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-9 * y.abs().max(1.0)
    }

    #[test]
    fn kloosterman_examples() {
        assert!(close(kloosterman_bound(1009, 504, BoundCase::Mixed).unwrap(), 2.0 * 1009f64.sqrt()));
        assert!((kloosterman_bound(1009, 504, BoundCase::Mixed).unwrap() - 63.5295).abs() < 1e-4);
        assert_eq!(kloosterman_bound(13, 3, BoundCase::BothZero).unwrap(), 3.0);
        assert!(close(kloosterman_bound(13, 3, BoundCase::AOnly).unwrap(), 2.954_163_456_597_991_7));
        assert!(kloosterman_bound(13, 5, BoundCase::Mixed).is_err());
        assert!((kloosterman_e_bound(1009, 504, 2, BoundCase::Mixed).unwrap() - 95.2943).abs() < 1e-4);
        assert_eq!(kloosterman_e_bound(13, 4, 3, BoundCase::BothZero).unwrap(), 4.0);
    }

    #[test]
    fn walsh_examples() {
        assert_eq!(walsh_bound_inverse(13, 4, BoundCase::AOnly).unwrap(), 0.0);
        assert_eq!(walsh_bound_inverse(13, 4, BoundCase::BothZero).unwrap(), 13.0);
        assert!((walsh_bound_inverse(1021, 4, BoundCase::Mixed).unwrap() - 256.6247).abs() < 1e-4);
        assert!((walsh_bound_scaled_inverse(1021, 2, 2, BoundCase::Mixed).unwrap() - 191.7185).abs() < 1e-4);
        assert_eq!(walsh_bound_scaled_inverse(1021, 2, 2, BoundCase::AOnly).unwrap(), 0.0);
        assert!(walsh_bound_scaled_inverse(13, 4, 5, BoundCase::Mixed).unwrap() >= 13.0);
        assert!((walsh_bound_general(1021, 2, 3, BoundCase::Mixed).unwrap() - 161.7655).abs() < 1e-4);
        assert_eq!(walsh_bound_general(1021, 2, 3, BoundCase::AOnly).unwrap(), 0.0);
        assert!(walsh_bound_general(13, 4, 4, BoundCase::Mixed).is_err());
        assert!(walsh_bound_general(13, 2, 13, BoundCase::Mixed).is_err());
        assert!(!general_bound_is_informative(1021, 4, 8));
        assert!(general_bound_is_informative(1021, 2, 3));
        assert!((walsh_bound_d1(1021, 4, BoundCase::Mixed).unwrap() - 97.8593).abs() < 1e-4);
        assert_eq!(walsh_bound_d1(1021, 4, BoundCase::AOnly).unwrap(), 0.0);
        assert!((grassi_bound(1009, 3, 5, BoundCase::Mixed).unwrap() - 224.3533).abs() < 1e-4);
        assert!((grassi_bound(1009, 5, 7, BoundCase::Mixed).unwrap() - 351.4124).abs() < 1e-4);
        assert_eq!(grassi_bound(1009, 5, 7, BoundCase::BothZero).unwrap(), 1009.0);
        assert!(grassi_bound(11, 3, 7, BoundCase::Mixed).is_err());
    }

    #[test]
    fn linear_degenerate_matches_legendre_form() {
        for p in (5..=257u64).filter(|&p| is_prime(p)) {
            let v = walsh_bound_d1(p, 2, BoundCase::MixedDegenerate).unwrap();
            assert!((v - ((p as f64).sqrt() + p as f64) / 2.0 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn weil_examples() {
        assert!((weil_bound_polynomial(2, 1009).unwrap() - 31.7648).abs() < 1e-4);
        assert_eq!(weil_bound_polynomial(1, 1009).unwrap(), 0.0);
        assert!(weil_bound_polynomial(7, 7).is_err());
        // the lifted Kloosterman argument (a x^(2k) + b) / x^k, one pole, scaled by 1/k
        for (p, k) in [(13u64, 4u64), (1009, 8), (2017, 16)] {
            let v = weil_bound_rational(2 * k, k, 1, p) / k as f64;
            assert!(close(v, 2.0 * (p as f64).sqrt()));
        }
        assert!(close(weil_bound_rational(1, 2, 2, 101), 2.0 * 101f64.sqrt() + 1.0));
    }

    #[test]
    fn reference_examples() {
        let r = conjecture_and_corr_bounds(1009, 2);
        assert!((r.conjecture - 127.059).abs() < 1e-3);
        assert!(r.kloosterman <= r.conjecture);
        assert!(close(r.polocolo_correlation, 16.0 / 1009f64.sqrt()));
        assert!(close(grassi_correlation_bound(101, 3, 5), 8.0 / 101f64.sqrt()));
        assert!(legendre_linear_correlation_bound(101) < 0.7);
        assert!(close(legendre_power_correlation_bound(101, 3), 0.6 / 101f64.sqrt() * 10.0));
    }

    #[test]
    fn monotone_in_p() {
        let primes: Vec<u64> = (3..2048).filter(|&p| is_prime(p) && (p - 1) % 4 == 0).collect();
        for w in primes.windows(2) {
            let (p, q) = (w[0], w[1]);
            assert!(
                kloosterman_bound(p, (p - 1) / 4, BoundCase::Mixed).unwrap()
                    <= kloosterman_bound(q, (q - 1) / 4, BoundCase::Mixed).unwrap()
            );
            assert!(
                walsh_bound_inverse(p, 4, BoundCase::Mixed).unwrap()
                    <= walsh_bound_inverse(q, 4, BoundCase::Mixed).unwrap()
            );
            assert!(
                walsh_bound_d1(p, 4, BoundCase::MixedDegenerate).unwrap()
                    <= walsh_bound_d1(q, 4, BoundCase::MixedDegenerate).unwrap()
            );
            if p > 20 {
                assert!(
                    walsh_bound_general(p, 4, 3, BoundCase::Mixed).unwrap()
                        <= walsh_bound_general(q, 4, 3, BoundCase::Mixed).unwrap()
                );
            }
        }
    }

    proptest! {
        #[test]
        fn scaled_kloosterman_specializes(idx in 0usize..200, pick in 0usize..64) {
            let primes: Vec<u64> = (3..4000).filter(|&p| is_prime(p)).collect();
            let p = primes[idx % primes.len()];
            let divisors: Vec<u64> = (1..p).filter(|d| (p - 1) % d == 0).collect();
            let order = divisors[pick % divisors.len()];
            for case in BoundCase::ALL {
                prop_assert_eq!(kloosterman_e_bound(p, order, 1, case).unwrap(), kloosterman_bound(p, order, case).unwrap());
            }
        }
    }

    #[test]
    fn report_selection() {
        let ctx = FieldContext::new(13).unwrap();
        let spec = FamilyDescriptor::parse("inverse:m=2", 0).unwrap().instantiate(&ctx).unwrap();
        let r = walsh_bounds(&spec, &ctx).unwrap();
        assert_eq!(r.mixed.formula, Formula::WalshInverse);
        assert_eq!(r.b_only.formula, Formula::Permutation);
        assert_eq!(r.both_zero.raw, 13.0);
        assert!(!r.mixed.informative);
        assert_eq!(r.mixed.effective, 13.0);

        let grendel = FamilyDescriptor::Grendel { d: 1 }.instantiate(&ctx).unwrap();
        let r = walsh_bounds(&grendel, &ctx).unwrap();
        assert_eq!(r.mixed.formula, Formula::WalshLinear);
        assert!(r.mixed_degenerate.is_some());

        // T = id with m = 2 and p = 3 mod 4: -1 is not a square
        let ctx = FieldContext::new(11).unwrap();
        let grendel = FamilyDescriptor::Grendel { d: 1 }.instantiate(&ctx).unwrap();
        assert_eq!(walsh_bounds(&grendel, &ctx).unwrap().mixed.formula, Formula::WalshLinearImage);

        let k = kloosterman_bounds(7, 2, 1).unwrap();
        assert!(close(k.mixed.raw, 5.291_502_622_129_181));
        assert_eq!(k.mixed.effective, 3.0);
        assert!(k.mixed.violated_by(3.1, 1e-6, TAU_REL));
        assert!(!k.mixed.violated_by(3.0, 1e-6, TAU_REL));
        assert_eq!(Bound::new(0.0, 7.0, Formula::Permutation).ratio(0.0, 7e-6), 0.0);
    }
}
