//! Arithmetic in prime fields `F_p`, primitive roots, power residue maps and the
//! multiplicative subgroups `<g^m>` together with their cosets `g^r <g^m>`.
//!
//! Moduli are 64-bit; every product goes through a 128-bit intermediate so no
//! operation here can overflow.

use serde::Serialize;

use crate::error::{Error, Result};

#[inline]
pub fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `x^e mod p` by square-and-multiply. `x^0 = 1` for every `x`, including zero.
pub fn mod_pow(x: u64, mut e: u64, p: u64) -> u64 {
    if p == 1 {
        return 0;
    }
    let mut base = x % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse by the extended Euclidean algorithm.
pub fn mod_inv(x: u64, p: u64) -> Result<u64> {
    let x = x % p;
    if x == 0 {
        return Err(Error::ZeroInverse);
    }
    let (mut r0, mut r1) = (p as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::param(format!("{x} is not invertible modulo {p}")));
    }
    Ok(t0.rem_euclid(p as i128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` in ascending order, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f.saturating_mul(f) <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A canonical residue in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Caller guarantees `v < p`.
    pub(crate) fn from_reduced(v: u64) -> FieldElement {
        FieldElement(v)
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A prime field together with a certified primitive root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldContext {
    p: u64,
    g: u64,
    factors: Vec<u64>,
}

/// Smallest positive primitive root of `p`, with `p - 1` factored.
pub fn find_generator(p: u64) -> Result<FieldContext> {
    FieldContext::new(p)
}

impl FieldContext {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 {
            return Err(Error::param(format!("modulus must be at least 3, got {p}")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factors = distinct_prime_factors(p - 1);
        let g = (2..p).find(|&g| has_full_order(g, p, &factors)).expect("every prime has a primitive root");
        Ok(FieldContext { p, g, factors })
    }

    /// Uses a caller-chosen generator after checking its order.
    pub fn with_generator(p: u64, g: u64) -> Result<Self> {
        let mut ctx = FieldContext::new(p)?;
        let g = g % p;
        if g == 0 || !has_full_order(g, p, &ctx.factors) {
            return Err(Error::param(format!("{g} is not a primitive root of {p}")));
        }
        ctx.g = g;
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement(v % self.p)
    }

    /// Lifts a signed integer, so `elem_signed(-1) = p - 1`.
    pub fn elem_signed(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u64)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(((a.0 as u128 + b.0 as u128) % self.p as u128) as u64)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.p - a.0)
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(mod_mul(a.0, b.0, self.p))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(mod_pow(a.0, e, self.p))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        mod_inv(a.0, self.p).map(FieldElement)
    }

    pub fn gen_pow(&self, k: u64) -> FieldElement {
        FieldElement(mod_pow(self.g, k % (self.p - 1), self.p))
    }

    pub fn check_index(&self, m: u64) -> Result<()> {
        if m == 0 || (self.p - 1) % m != 0 {
            return Err(Error::param(format!("index {m} does not divide p - 1 = {}", self.p - 1)));
        }
        Ok(())
    }

    /// The `m`-th power residue `x^((p-1)/m)`; zero maps to zero.
    pub fn power_residue(&self, x: FieldElement, m: u64) -> Result<FieldElement> {
        self.check_index(m)?;
        if x.is_zero() {
            return Ok(FieldElement::ZERO);
        }
        Ok(self.pow(x, (self.p - 1) / m))
    }

    /// Primitive `m`-th root of unity `omega = g^((p-1)/m)`, so that
    /// `power_residue(g^k) = omega^(k mod m)`.
    pub fn residue_root(&self, m: u64) -> Result<FieldElement> {
        self.check_index(m)?;
        Ok(self.gen_pow((self.p - 1) / m))
    }

    /// The shift `r` with `x` in `N_r = g^r <g^m>`.
    pub fn coset_index(&self, x: FieldElement, m: u64) -> Result<u64> {
        let y = self.power_residue(x, m)?;
        if y.is_zero() {
            return Err(Error::param("zero lies in no coset"));
        }
        let omega = self.residue_root(m)?;
        let mut cur = FieldElement::ONE;
        for r in 0..m {
            if cur == y {
                return Ok(r);
            }
            cur = self.mul(cur, omega);
        }
        unreachable!("power residues lie in the order-m subgroup")
    }

    pub fn subgroup(&self, m: u64) -> Result<Subgroup> {
        Subgroup::new(self, m)
    }
}

fn has_full_order(g: u64, p: u64, factors: &[u64]) -> bool {
    factors.iter().all(|&l| mod_pow(g, (p - 1) / l, p) != 1)
}

/// Discrete logarithms to the base `g` for every nonzero residue.
#[derive(Clone, Debug)]
pub struct LogTable {
    log: Vec<u32>,
}

impl LogTable {
    pub fn new(ctx: &FieldContext) -> Self {
        let p = ctx.p() as usize;
        let mut log = vec![u32::MAX; p];
        let mut x = 1u64;
        for k in 0..(p - 1) {
            log[x as usize] = k as u32;
            x = mod_mul(x, ctx.generator(), ctx.p());
        }
        LogTable { log }
    }

    /// `None` for zero.
    pub fn log(&self, x: u64) -> Option<u64> {
        match self.log[x as usize] {
            u32::MAX => None,
            k => Some(k as u64),
        }
    }
}

/// The index-`m` subgroup `N_0 = <g^m>` of order `(p-1)/m`.
#[derive(Clone, Debug, Serialize)]
pub struct Subgroup {
    #[serde(skip)]
    ctx: FieldContext,
    m: u64,
    elements: Vec<u64>,
}

impl Subgroup {
    pub fn new(ctx: &FieldContext, m: u64) -> Result<Self> {
        ctx.check_index(m)?;
        let order = (ctx.p() - 1) / m;
        let step = ctx.gen_pow(m).value();
        let mut elements = Vec::with_capacity(order as usize);
        let mut x = 1u64;
        for _ in 0..order {
            elements.push(x);
            x = mod_mul(x, step, ctx.p());
        }
        elements.sort_unstable();
        Ok(Subgroup { ctx: ctx.clone(), m, elements })
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn index(&self) -> u64 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Ascending residues.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        self.elements.binary_search(&x.value()).is_ok()
    }

    pub fn coset(&self, r: u64) -> Result<Coset> {
        if r >= self.m {
            return Err(Error::param(format!("coset shift {r} out of range 0..{}", self.m)));
        }
        let shift = self.ctx.gen_pow(r).value();
        let elements = self.elements.iter().map(|&y| mod_mul(shift, y, self.ctx.p())).collect();
        Ok(Coset { r, elements })
    }

    pub fn cosets(&self) -> impl Iterator<Item = Coset> + '_ {
        (0..self.m).map(|r| self.coset(r).expect("shift in range"))
    }
}

/// `N_r = g^r N_0`, listed as `g^r * y` for `y` in ascending `N_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coset {
    pub r: u64,
    pub elements: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(3, 3, 7), 6);
        assert_eq!(mod_pow(2, 8, 11), 3);
        assert_eq!(mod_pow(5, 1, 13), 5);
        assert_eq!(mod_pow(0, 0, 13), 1);
        assert_eq!(mod_pow(0, 5, 13), 0);
    }

    #[test]
    fn mod_inv_examples() {
        assert_eq!(mod_inv(2, 7), Ok(4));
        assert_eq!(mod_inv(1, 101), Ok(1));
        assert_eq!(mod_inv(0, 7), Err(Error::ZeroInverse));
        assert_eq!(Error::ZeroInverse.to_string(), "no inverse of zero");
    }

    #[test]
    fn generators() {
        assert_eq!(find_generator(7).unwrap().generator(), 3);
        assert_eq!(find_generator(11).unwrap().generator(), 2);
        assert_eq!(find_generator(13).unwrap().generator(), 2);
        assert_eq!(find_generator(13).unwrap().factors(), &[2, 3]);
        assert_eq!(find_generator(15), Err(Error::NotPrime(15)));
        assert!(find_generator(2).is_err());
    }

    fn brute_order(g: u64, p: u64) -> u64 {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    }

    #[test]
    fn generator_is_smallest_primitive_root() {
        for p in (3..400u64).filter(|&p| is_prime(p)) {
            let ctx = find_generator(p).unwrap();
            let g = ctx.generator();
            assert_eq!(brute_order(g, p), p - 1, "p = {p}");
            for h in 2..g {
                assert!(brute_order(h, p) < p - 1);
            }
            assert_eq!(find_generator(p).unwrap(), ctx);
        }
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn power_residue_examples() {
        let f7 = FieldContext::new(7).unwrap();
        assert_eq!(f7.power_residue(f7.elem(3), 2).unwrap().value(), 6);
        assert_eq!(f7.power_residue(FieldElement::ZERO, 3).unwrap(), FieldElement::ZERO);
        let f13 = FieldContext::new(13).unwrap();
        assert_eq!(f13.power_residue(f13.elem(2), 4).unwrap().value(), 8);
        assert!(f13.power_residue(f13.elem(2), 5).is_err());
    }

    #[test]
    fn subgroup_examples() {
        let f13 = FieldContext::new(13).unwrap();
        assert_eq!(f13.subgroup(4).unwrap().elements(), &[1, 3, 9]);
        assert_eq!(f13.subgroup(1).unwrap().elements(), &(1..13).collect::<Vec<_>>()[..]);
        let f7 = FieldContext::new(7).unwrap();
        let squares = f7.subgroup(2).unwrap();
        assert_eq!(squares.elements(), &[1, 2, 4]);
        assert!(f7.subgroup(4).is_err());

        assert_eq!(squares.coset(1).unwrap().elements, vec![3, 6, 5]);
        assert_eq!(squares.coset(0).unwrap().elements, vec![1, 2, 4]);
        assert!(squares.coset(2).is_err());
    }

    #[test]
    fn coset_index_matches_construction() {
        let ctx = FieldContext::new(61).unwrap();
        for m in [2, 3, 4, 5, 6, 10, 12] {
            let sub = ctx.subgroup(m).unwrap();
            for coset in sub.cosets() {
                for &x in &coset.elements {
                    assert_eq!(ctx.coset_index(ctx.elem(x), m).unwrap(), coset.r);
                }
            }
        }
    }

    #[test]
    fn structure_for_small_primes() {
        for p in (3..=257u64).filter(|&p| is_prime(p)) {
            let ctx = FieldContext::new(p).unwrap();
            let logs = LogTable::new(&ctx);
            for x in 1..p {
                assert_eq!(mod_pow(x, p - 1, p), 1);
                assert_eq!(ctx.gen_pow(logs.log(x).unwrap()).value(), x);
            }
            for m in (1..p).filter(|m| (p - 1) % m == 0) {
                let sub = ctx.subgroup(m).unwrap();
                assert_eq!(sub.order(), (p - 1) / m);
                assert!(sub.contains(FieldElement::ONE));
                for &x in sub.elements() {
                    let xe = ctx.elem(x);
                    assert!(sub.contains(ctx.inv(xe).unwrap()));
                    for &y in sub.elements().iter().take(8) {
                        assert!(sub.contains(ctx.mul(xe, ctx.elem(y))));
                    }
                }

                // every value of the order-m subgroup has exactly (p-1)/m preimages
                let mut preimages = std::collections::BTreeMap::new();
                for x in 1..p {
                    *preimages.entry(ctx.power_residue(ctx.elem(x), m).unwrap()).or_insert(0u64) += 1;
                }
                assert_eq!(preimages.len() as u64, m);
                assert!(preimages.values().all(|&c| c == (p - 1) / m));

                let mut seen = vec![false; p as usize];
                seen[0] = true;
                for coset in sub.cosets() {
                    assert_eq!(coset.elements.len() as u64, (p - 1) / m);
                    for &x in &coset.elements {
                        assert!(!seen[x as usize], "cosets overlap at {x}");
                        seen[x as usize] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_round_trips(x in 1u64..1_000_000_006) {
            let p = 1_000_000_007;
            let y = mod_inv(x, p).unwrap();
            prop_assert_eq!(mod_mul(x, y, p), 1);
        }

        #[test]
        fn fermat_little_theorem(x in 1u64..u64::MAX) {
            let p = 18446744073709551557u64;
            let x = x % p;
            prop_assume!(x != 0);
            prop_assert_eq!(mod_pow(x, p - 1, p), 1);
        }
    }
}
