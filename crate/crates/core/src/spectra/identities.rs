//! Numerical residuals of the substitution identities behind the reduced
//! enumerations.

use serde::Serialize;

use crate::character::{char_sum, AdditiveCharacter, ArgumentHistogram, Complex};
use crate::error::{Error, Result};
use crate::field::{mod_inv, mod_mul, mod_pow, FieldContext, FieldElement, Subgroup};
use crate::sbox::SBoxSpec;

use super::kloosterman::KloostermanSum;
use super::walsh::walsh_point;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionResiduals {
    /// `|K(G, a, b) - |G|/(p-1) sum_{x != 0} psi(a x^m + b x^-m)|`.
    pub kloosterman: f64,
    /// `|sum_{x in G} psi(a x + b x^d) - |G|/(p-1) sum_{x != 0} psi(a x^m + b x^(m d))|`.
    pub walsh: f64,
}

fn sum_over(p: u64, args: impl IntoIterator<Item = u64>, chi: &AdditiveCharacter) -> Result<Complex> {
    char_sum(&ArgumentHistogram::from_arguments(p, args), chi)
}

/// Both sides of the lift from a subgroup `G` of index `m` to all of `F_p^*`
/// through `x -> x^m`, for the Kloosterman sum and for the monomial `x^d`.
pub fn reduction_identity_check(
    group: &Subgroup,
    chi: &AdditiveCharacter,
    a: FieldElement,
    b: FieldElement,
    d: u64,
) -> Result<ReductionResiduals> {
    let p = group.ctx().p();
    let m = group.index();
    let (a, b) = (a.value(), b.value());
    let scale = group.order() as f64 / (p - 1) as f64;
    let g = group.elements();

    let k_lhs = sum_over(p, g.iter().map(|&x| (mod_mul(a, x, p) + mod_mul(b, mod_inv(x, p).unwrap(), p)) % p), chi)?;
    let k_rhs = sum_over(
        p,
        (1..p).map(|x| {
            let y = mod_pow(x, m, p);
            (mod_mul(a, y, p) + mod_mul(b, mod_inv(y, p).unwrap(), p)) % p
        }),
        chi,
    )?
    .scale(scale);

    let w_lhs = sum_over(p, g.iter().map(|&x| (mod_mul(a, x, p) + mod_mul(b, mod_pow(x, d, p), p)) % p), chi)?;
    let w_rhs = sum_over(
        p,
        (1..p).map(|x| {
            let y = mod_pow(x, m, p);
            (mod_mul(a, y, p) + mod_mul(b, mod_pow(y, d, p), p)) % p
        }),
        chi,
    )?
    .scale(scale);

    Ok(ReductionResiduals { kloosterman: k_lhs.dist(k_rhs), walsh: w_lhs.dist(w_rhs) })
}

/// `|K(a, b) - K(g^r, b g^(k m e))|` where `a = g^(k m + r)`, `0 <= r < m`.
pub fn kloosterman_orbit_residual(
    sum: &KloostermanSum,
    chi: &AdditiveCharacter,
    a: FieldElement,
    b: FieldElement,
) -> Result<f64> {
    let ctx = sum.group().ctx();
    if a.is_zero() {
        return Err(Error::param("orbit identity needs a != 0"));
    }
    let p = ctx.p();
    let m = sum.m();
    let log = discrete_log(ctx, a.value());
    let (k, r) = (log / m, log % m);
    let shift = mod_pow(ctx.generator(), (k * m) % (p - 1), p);
    let b2 = mod_mul(b.value(), mod_pow(shift, sum.exponent(), p), p);
    let lhs = sum.point(a, b, chi)?;
    let rhs = sum.point(ctx.gen_pow(r), ctx.elem(b2), chi)?;
    Ok(lhs.value.dist(rhs.value))
}

fn discrete_log(ctx: &FieldContext, x: u64) -> u64 {
    let p = ctx.p();
    let mut y = 1;
    for k in 0..p - 1 {
        if y == x {
            return k;
        }
        y = mod_mul(y, ctx.generator(), p);
    }
    unreachable!("nonzero residues are powers of a primitive root")
}

/// `|W(a, b) - W(1, b a^-d T(chi_m(a^-1)))|` for a spec whose table is
/// multiplicative, `T(y z) = T(y) T(z)` on `mu_m` (for example `T = id`).
pub fn efficient_spectrum_residual(
    spec: &SBoxSpec,
    chi: &AdditiveCharacter,
    ctx: &FieldContext,
    a: FieldElement,
    b: FieldElement,
) -> Result<f64> {
    let SBoxSpec::PowerResidue { exponent, m, table } = spec else {
        return Err(Error::param("the efficient-spectrum identity needs a power residue S-box"));
    };
    let p = ctx.p();
    let t = table.entries();
    let m = *m as usize;
    let multiplicative = (0..m).all(|i| (0..m).all(|j| t[(i + j) % m] % p == mod_mul(t[i], t[j], p)));
    if !multiplicative {
        return Err(Error::param("the efficient-spectrum identity needs a multiplicative table"));
    }
    let a_inv = ctx.inv(a)?;
    let r = ctx.coset_index(a_inv, m as u64)?;
    let d = exponent.effective(p);
    let b2 = mod_mul(mod_mul(b.value(), mod_pow(a_inv.value(), d, p), p), t[r as usize], p);
    let lhs = walsh_point(spec, a, b, chi, ctx)?;
    let rhs = walsh_point(spec, FieldElement::ONE, ctx.elem(b2), chi, ctx)?;
    Ok(lhs.value.dist(rhs.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbox::FamilyDescriptor;

    #[test]
    fn lift_examples() {
        for (p, m, a, b) in [(7u64, 2u64, 1u64, 1u64), (13, 4, 2, 5), (31, 1, 4, 9)] {
            let ctx = FieldContext::new(p).unwrap();
            let g = ctx.subgroup(m).unwrap();
            let chi = AdditiveCharacter::fundamental(p).unwrap();
            let r = reduction_identity_check(&g, &chi, ctx.elem(a), ctx.elem(b), 3).unwrap();
            assert!(r.kloosterman < 1e-9 && r.walsh < 1e-9, "{r:?}");
        }
        let g = FieldContext::new(13).unwrap().subgroup(4).unwrap();
        assert_eq!(g.elements(), &[1, 3, 9]);
    }

    #[test]
    fn orbit_identity() {
        for (p, m) in [(13u64, 4u64), (31, 3), (61, 6)] {
            let ctx = FieldContext::new(p).unwrap();
            let chi = AdditiveCharacter::fundamental(p).unwrap();
            for e in [1, 2, 3] {
                let k = KloostermanSum::new(&ctx, m, e).unwrap();
                for a in 1..p {
                    let r = kloosterman_orbit_residual(&k, &chi, ctx.elem(a), ctx.elem(7)).unwrap();
                    assert!(r < 1e-9 * p as f64);
                }
            }
        }
    }

    #[test]
    fn efficient_spectrum_identity() {
        let ctx = FieldContext::new(61).unwrap();
        let chi = AdditiveCharacter::fundamental(61).unwrap();
        for desc in ["inverse:m=4", "power_residue:d=3:m=6", "grendel:d=5", "scaled_inverse:e=2:m=3"] {
            let spec = FamilyDescriptor::parse(desc, 0).unwrap().instantiate(&ctx).unwrap();
            for a in [1u64, 2, 17, 60] {
                let r = efficient_spectrum_residual(&spec, &chi, &ctx, ctx.elem(a), ctx.elem(11)).unwrap();
                assert!(r < 1e-9 * 61.0, "{desc} a={a}");
            }
        }
        let shallue = FamilyDescriptor::parse("shallue:m=2:a=3", 0).unwrap().instantiate(&ctx).unwrap();
        assert!(efficient_spectrum_residual(&shallue, &chi, &ctx, ctx.elem(2), ctx.elem(1)).is_err());
    }
}
