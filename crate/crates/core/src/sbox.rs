//! Power residue S-boxes `S(x) = x^d * T(x^((p-1)/m))` and the two-exponent
//! Legendre blend, plus the named instances found in the literature.
//!
//! `T` is stored by coset shift: `entries[r] = T(omega^r)` with
//! `omega = g^((p-1)/m)`, which is the value `T` takes on all of `N_r = g^r <g^m>`.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd, mod_mul, mod_pow, FieldContext, FieldElement};

/// The exponent `d` of a power residue S-box. `Inverse` and `ScaledInverse`
/// stay symbolic until a prime is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ExponentSpec {
    Literal(u64),
    /// `d = p - 2`, i.e. `x^-1` on nonzero inputs.
    Inverse,
    /// `d = e (p - 2)`, i.e. `x^-e` on nonzero inputs.
    ScaledInverse(u64),
}

impl ExponentSpec {
    /// Exponent applied to nonzero inputs, reduced modulo `p - 1` for the
    /// symbolic variants.
    pub fn effective(self, p: u64) -> u64 {
        match self {
            ExponentSpec::Literal(d) => d,
            ExponentSpec::Inverse => p - 2,
            ExponentSpec::ScaledInverse(e) => mod_mul(e % (p - 1), p - 2, p - 1),
        }
    }

    pub fn label(self) -> String {
        match self {
            ExponentSpec::Literal(d) => d.to_string(),
            ExponentSpec::Inverse => "inv".to_string(),
            ExponentSpec::ScaledInverse(e) => format!("inv*{e}"),
        }
    }

    /// Total order used to sort sweep rows: literals first, by value.
    pub fn sort_key(self) -> (u8, u64) {
        match self {
            ExponentSpec::Literal(d) => (0, d),
            ExponentSpec::Inverse => (1, 1),
            ExponentSpec::ScaledInverse(e) => (1, e),
        }
    }
}

/// Values of `T` on the order-`m` subgroup, indexed by coset shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ResidueTable {
    entries: Vec<u64>,
}

impl ResidueTable {
    pub fn new(entries: Vec<u64>) -> Self {
        ResidueTable { entries }
    }

    /// `entries[r] = f(omega^r)`.
    pub fn from_fn(ctx: &FieldContext, m: u64, f: impl Fn(FieldElement) -> FieldElement) -> Result<Self> {
        let omega = ctx.residue_root(m)?;
        let mut y = FieldElement::ONE;
        let mut entries = Vec::with_capacity(m as usize);
        for _ in 0..m {
            entries.push(f(y).value());
            y = ctx.mul(y, omega);
        }
        Ok(ResidueTable { entries })
    }

    pub fn identity(ctx: &FieldContext, m: u64) -> Result<Self> {
        Self::from_fn(ctx, m, |y| y)
    }

    /// `T(y) = y + a`.
    pub fn shifted(ctx: &FieldContext, m: u64, a: FieldElement) -> Result<Self> {
        Self::from_fn(ctx, m, |y| ctx.add(y, a))
    }

    /// A uniformly random injective assignment of nonzero residues.
    pub fn random(ctx: &FieldContext, m: u64, rng: &mut ChaCha8Rng) -> Result<Self> {
        ctx.check_index(m)?;
        let picks = sample(rng, (ctx.p() - 1) as usize, m as usize);
        Ok(ResidueTable { entries: picks.into_iter().map(|v| v as u64 + 1).collect() })
    }

    pub fn m(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, r: u64) -> u64 {
        self.entries[r as usize]
    }

    /// `T_r(omega^j) = T(omega^(j - r))`.
    pub fn rotated(&self, r: u64) -> ResidueTable {
        let m = self.entries.len();
        let r = r as usize % m;
        ResidueTable { entries: (0..m).map(|j| self.entries[(j + m - r) % m]).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.entries.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    pub fn validate(&self, m: u64, p: u64) -> Result<()> {
        validate_t(self, m, p)
    }
}

/// Checks that the table has exactly `m` entries, all nonzero residues mod `p`.
pub fn validate_t(t: &ResidueTable, m: u64, p: u64) -> Result<()> {
    if t.m() != m {
        return Err(Error::ResidueTable {
            index: t.entries.len().min(m as usize),
            reason: format!("table has {} entries, index m = {m}", t.m()),
        });
    }
    for (index, &v) in t.entries.iter().enumerate() {
        if v % p == 0 {
            return Err(Error::ResidueTable { index, reason: "T must be nonzero on the subgroup".into() });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SBoxSpec {
    PowerResidue { exponent: ExponentSpec, m: u64, table: ResidueTable },
    TwoExponentLegendre { d_plus: u64, d_minus: u64 },
}

impl SBoxSpec {
    pub fn power_residue(exponent: ExponentSpec, m: u64, table: ResidueTable) -> Self {
        SBoxSpec::PowerResidue { exponent, m, table }
    }

    pub fn validate(&self, ctx: &FieldContext) -> Result<()> {
        match self {
            SBoxSpec::PowerResidue { exponent, m, table } => {
                ctx.check_index(*m)?;
                table.validate(*m, ctx.p())?;
                match *exponent {
                    ExponentSpec::Literal(0) => Err(Error::param("exponent must be at least 1")),
                    ExponentSpec::ScaledInverse(0) => Err(Error::param("inverse scale must be at least 1")),
                    _ => Ok(()),
                }
            }
            SBoxSpec::TwoExponentLegendre { d_plus, d_minus } => {
                if ctx.p() % 2 == 0 {
                    return Err(Error::param("two-exponent Legendre S-box needs an odd prime"));
                }
                if *d_plus == 0 || *d_minus == 0 {
                    return Err(Error::param("exponents must be at least 1"));
                }
                if mod_mul(*d_plus, *d_minus, ctx.p()) == 0 {
                    return Err(Error::param(format!("gcd(d+ * d-, {}) != 1", ctx.p())));
                }
                Ok(())
            }
        }
    }

    pub fn m(&self) -> u64 {
        match self {
            SBoxSpec::PowerResidue { m, .. } => *m,
            SBoxSpec::TwoExponentLegendre { .. } => 2,
        }
    }

    pub fn d_label(&self) -> String {
        match self {
            SBoxSpec::PowerResidue { exponent, .. } => exponent.label(),
            SBoxSpec::TwoExponentLegendre { d_plus, d_minus } => format!("{d_plus}/{d_minus}"),
        }
    }

    pub fn sort_key(&self) -> (u8, u64, u64) {
        match self {
            SBoxSpec::PowerResidue { exponent, .. } => {
                let (k, v) = exponent.sort_key();
                (k, v, 0)
            }
            SBoxSpec::TwoExponentLegendre { d_plus, d_minus } => (2, *d_plus, *d_minus),
        }
    }

    /// Pointwise evaluation straight from the defining formula.
    pub fn eval(&self, ctx: &FieldContext, x: FieldElement) -> Result<FieldElement> {
        self.validate(ctx)?;
        if x.is_zero() {
            return Ok(FieldElement::ZERO);
        }
        match self {
            SBoxSpec::PowerResidue { exponent, m, table } => {
                let r = ctx.coset_index(x, *m)?;
                let t = ctx.elem(table.get(r));
                Ok(ctx.mul(ctx.pow(x, exponent.effective(ctx.p())), t))
            }
            SBoxSpec::TwoExponentLegendre { d_plus, d_minus } => {
                let chi = ctx.power_residue(x, 2)?;
                let one = FieldElement::ONE;
                let plus = ctx.mul(ctx.pow(x, *d_plus), ctx.add(one, chi));
                let minus = ctx.mul(ctx.pow(x, *d_minus), ctx.sub(one, chi));
                let half = ctx.inv(ctx.elem(2))?;
                Ok(ctx.mul(ctx.add(plus, minus), half))
            }
        }
    }

    /// `table[x] = S(x)` for every `x` in `F_p`, built by walking powers of `g`.
    pub fn table(&self, ctx: &FieldContext) -> Result<Vec<u64>> {
        self.validate(ctx)?;
        let p = ctx.p();
        let g = ctx.generator();
        let mut out = vec![0u64; p as usize];
        let (d_sq, d_nsq, m, entries): (u64, u64, u64, Vec<u64>) = match self {
            SBoxSpec::PowerResidue { exponent, m, table } => {
                let d = exponent.effective(p);
                (d, d, *m, table.entries().to_vec())
            }
            // squares are N_0 and non-squares N_1 with T = 1 on both
            SBoxSpec::TwoExponentLegendre { d_plus, d_minus } => (*d_plus, *d_minus, 2, vec![1, 1]),
        };
        let step_sq = mod_pow(g, d_sq, p);
        let step_nsq = mod_pow(g, d_nsq, p);
        let (mut x, mut y_sq, mut y_nsq) = (1u64, 1u64, 1u64);
        for k in 0..(p - 1) {
            let r = k % m;
            let y = if d_sq == d_nsq || r == 0 { y_sq } else { y_nsq };
            out[x as usize] = mod_mul(y, entries[r as usize], p);
            x = mod_mul(x, g, p);
            y_sq = mod_mul(y_sq, step_sq, p);
            y_nsq = mod_mul(y_nsq, step_nsq, p);
        }
        Ok(out)
    }

    /// Exhaustive bijectivity, together with the closed-form criterion where
    /// one is known.
    pub fn is_permutation(&self, ctx: &FieldContext) -> Result<PermutationCheck> {
        let table = self.table(ctx)?;
        let mut seen = vec![false; table.len()];
        let mut bijective = true;
        for &y in &table {
            if std::mem::replace(&mut seen[y as usize], true) {
                bijective = false;
                break;
            }
        }
        let p = ctx.p();
        let criterion = match self {
            SBoxSpec::PowerResidue { exponent: ExponentSpec::Literal(d), m: 2, table }
                if table.entries() == [1, p - 1] =>
            {
                let holds = gcd(d + (p - 1) / 2, p - 1) == 1;
                assert_eq!(holds, bijective, "x^(d + (p-1)/2) is a permutation iff the gcd is 1");
                Some(GcdCriterion { holds, exact: true })
            }
            SBoxSpec::TwoExponentLegendre { d_plus, d_minus } => {
                let holds = gcd(*d_plus, p - 1) == 1 && gcd(*d_minus, p - 1) == 1;
                assert!(!holds || bijective, "coprime exponents give a permutation");
                Some(GcdCriterion { holds, exact: false })
            }
            _ => None,
        };
        Ok(PermutationCheck { bijective, criterion })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationCheck {
    pub bijective: bool,
    pub criterion: Option<GcdCriterion>,
}

/// `exact` marks an iff-criterion; otherwise `holds` is only sufficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GcdCriterion {
    pub holds: bool,
    pub exact: bool,
}

/// How the `T` table of a family is chosen once the prime is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TableMode {
    Identity,
    Shifted(i64),
    /// `draw` distinguishes several tables drawn for the same `(p, m)`.
    Random {
        seed: u64,
        draw: u32,
    },
    Explicit(Vec<u64>),
}

impl TableMode {
    pub fn label(&self) -> String {
        match self {
            TableMode::Identity => "id".into(),
            TableMode::Shifted(a) => format!("shift({a})"),
            TableMode::Random { draw, .. } => format!("rand{draw}"),
            TableMode::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                format!("t({})", parts.join(";"))
            }
        }
    }

    pub fn build(&self, ctx: &FieldContext, m: u64) -> Result<ResidueTable> {
        match self {
            TableMode::Identity => ResidueTable::identity(ctx, m),
            TableMode::Shifted(a) => ResidueTable::shifted(ctx, m, ctx.elem_signed(*a)),
            TableMode::Random { seed, draw } => {
                let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(*seed, ctx.p(), m, *draw));
                ResidueTable::random(ctx, m, &mut rng)
            }
            TableMode::Explicit(v) => Ok(ResidueTable::new(v.iter().map(|x| x % ctx.p()).collect())),
        }
    }
}

/// Seed for one `(p, m, draw)` instance; independent of scheduling order.
pub fn instance_seed(seed: u64, p: u64, m: u64, draw: u32) -> u64 {
    let mut h = seed;
    for v in [p, m, draw as u64] {
        h = splitmix64(h ^ v);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A prime-independent S-box family: a name plus integer parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyDescriptor {
    /// `x^d T(chi_m(x))` with a literal exponent.
    PowerResidue {
        d: u64,
        m: u64,
        table: TableMode,
    },
    /// `x^(p-2) T(chi_m(x))`.
    Inverse {
        m: u64,
        table: TableMode,
    },
    /// `x^(e(p-2)) T(chi_m(x))`.
    ScaledInverse {
        e: u64,
        m: u64,
        table: TableMode,
    },
    /// Inverse family with `m = 2^n`.
    Polocolo {
        n: u32,
        table: TableMode,
    },
    /// `x^d chi_2(x)`.
    Grendel {
        d: u64,
    },
    /// `x (chi_m(x) + a)`.
    Shallue {
        m: u64,
        a: i64,
    },
    /// `x^d (chi_2(x) + a)`.
    ShiftedLegendre {
        d: u64,
        a: i64,
    },
    Grassi {
        d_plus: u64,
        d_minus: u64,
    },
}

pub const FAMILY_NAMES: [&str; 8] =
    ["power_residue", "inverse", "scaled_inverse", "polocolo", "grendel", "shallue", "shifted_legendre", "grassi"];

impl FamilyDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyDescriptor::PowerResidue { .. } => "power_residue",
            FamilyDescriptor::Inverse { .. } => "inverse",
            FamilyDescriptor::ScaledInverse { .. } => "scaled_inverse",
            FamilyDescriptor::Polocolo { .. } => "polocolo",
            FamilyDescriptor::Grendel { .. } => "grendel",
            FamilyDescriptor::Shallue { .. } => "shallue",
            FamilyDescriptor::ShiftedLegendre { .. } => "shifted_legendre",
            FamilyDescriptor::Grassi { .. } => "grassi",
        }
    }

    /// Name plus table tag, the `family` column of sweep output.
    pub fn label(&self) -> String {
        match self {
            FamilyDescriptor::PowerResidue { table, .. }
            | FamilyDescriptor::Inverse { table, .. }
            | FamilyDescriptor::ScaledInverse { table, .. }
            | FamilyDescriptor::Polocolo { table, .. } => format!("{}:{}", self.name(), table.label()),
            FamilyDescriptor::Shallue { a, .. } | FamilyDescriptor::ShiftedLegendre { a, .. } => {
                format!("{}:a={a}", self.name())
            }
            _ => self.name().to_string(),
        }
    }

    pub fn m(&self) -> u64 {
        match self {
            FamilyDescriptor::PowerResidue { m, .. }
            | FamilyDescriptor::Inverse { m, .. }
            | FamilyDescriptor::ScaledInverse { m, .. }
            | FamilyDescriptor::Shallue { m, .. } => *m,
            FamilyDescriptor::Polocolo { n, .. } => 1u64 << n,
            FamilyDescriptor::Grendel { .. }
            | FamilyDescriptor::ShiftedLegendre { .. }
            | FamilyDescriptor::Grassi { .. } => 2,
        }
    }

    /// Binds the family to a prime.
    pub fn instantiate(&self, ctx: &FieldContext) -> Result<SBoxSpec> {
        let spec = match self {
            FamilyDescriptor::PowerResidue { d, m, table } => {
                SBoxSpec::power_residue(ExponentSpec::Literal(*d), *m, table_for(table, ctx, *m)?)
            }
            FamilyDescriptor::Inverse { m, table } => {
                SBoxSpec::power_residue(ExponentSpec::Inverse, *m, table_for(table, ctx, *m)?)
            }
            FamilyDescriptor::ScaledInverse { e, m, table } => {
                SBoxSpec::power_residue(ExponentSpec::ScaledInverse(*e), *m, table_for(table, ctx, *m)?)
            }
            FamilyDescriptor::Polocolo { n, table } => {
                if *n == 0 || *n > 62 {
                    return Err(Error::param("polocolo needs m = 2^n with n >= 1"));
                }
                let m = 1u64 << n;
                SBoxSpec::power_residue(ExponentSpec::Inverse, m, table_for(table, ctx, m)?)
            }
            FamilyDescriptor::Grendel { d } => {
                SBoxSpec::power_residue(ExponentSpec::Literal(*d), 2, ResidueTable::identity(ctx, 2)?)
            }
            FamilyDescriptor::Shallue { m, a } => {
                let a = ctx.elem_signed(*a);
                ctx.check_index(*m)?;
                if a.is_zero() || ctx.pow(a, *m) == FieldElement::ONE {
                    return Err(Error::param(format!("a = {a} lies in the image of the residue symbol")));
                }
                SBoxSpec::power_residue(ExponentSpec::Literal(1), *m, ResidueTable::shifted(ctx, *m, a)?)
            }
            FamilyDescriptor::ShiftedLegendre { d, a } => {
                let a = ctx.elem_signed(*a);
                if a == FieldElement::ONE || a == ctx.elem_signed(-1) {
                    return Err(Error::param("shifted Legendre S-box needs a outside {1, -1}"));
                }
                SBoxSpec::power_residue(ExponentSpec::Literal(*d), 2, ResidueTable::shifted(ctx, 2, a)?)
            }
            FamilyDescriptor::Grassi { d_plus, d_minus } => {
                SBoxSpec::TwoExponentLegendre { d_plus: *d_plus, d_minus: *d_minus }
            }
        };
        spec.validate(ctx)?;
        Ok(spec)
    }

    /// Parses `name:key=value:...`, e.g. `inverse:m=4:t=rand`,
    /// `grassi:dp=3:dm=5` or `power_residue:d=3:m=4:t=1,2,3,4`.
    ///
    /// Table values: `id`, `shift(<a>)`, `rand` / `rand<k>` (drawn with
    /// `seed`), or an explicit comma-separated list of residues indexed by
    /// coset shift.
    pub fn parse(desc: &str, seed: u64) -> Result<Self> {
        let (name, params) = split_descriptor(desc)?;
        let get = |k: &str| params.get(k).map(String::as_str);
        let int = |k: &str| -> Result<u64> {
            let v = get(k).ok_or_else(|| Error::param(format!("{name} needs parameter {k}")))?;
            v.parse().map_err(|_| Error::param(format!("{k} = {v} is not an unsigned integer")))
        };
        let signed = |k: &str| -> Result<i64> {
            let v = get(k).ok_or_else(|| Error::param(format!("{name} needs parameter {k}")))?;
            v.parse().map_err(|_| Error::param(format!("{k} = {v} is not an integer")))
        };
        let table = || parse_table_mode(get("t").unwrap_or("id"), seed);
        let desc = match name.as_str() {
            "power_residue" => FamilyDescriptor::PowerResidue { d: int("d")?, m: int("m")?, table: table()? },
            "inverse" => FamilyDescriptor::Inverse { m: int("m")?, table: table()? },
            "scaled_inverse" => FamilyDescriptor::ScaledInverse { e: int("e")?, m: int("m")?, table: table()? },
            "polocolo" => {
                let n = match (get("n"), get("m")) {
                    (Some(_), _) => int("n")? as u32,
                    (None, Some(_)) => {
                        let m = int("m")?;
                        if !m.is_power_of_two() || m < 2 {
                            return Err(Error::param(format!("polocolo needs m a power of two, got {m}")));
                        }
                        m.trailing_zeros()
                    }
                    (None, None) => return Err(Error::param("polocolo needs n or m")),
                };
                FamilyDescriptor::Polocolo { n, table: table()? }
            }
            "grendel" => FamilyDescriptor::Grendel { d: int("d")? },
            "shallue" => FamilyDescriptor::Shallue { m: int("m")?, a: signed("a")? },
            "shifted_legendre" => FamilyDescriptor::ShiftedLegendre { d: int("d")?, a: signed("a")? },
            "grassi" | "grassi_two_exponent" => FamilyDescriptor::Grassi { d_plus: int("dp")?, d_minus: int("dm")? },
            other => {
                return Err(Error::param(format!(
                    "unknown family {other}; expected one of {}",
                    FAMILY_NAMES.join(", ")
                )))
            }
        };
        Ok(desc)
    }
}

/// Builds a named family directly for one prime.
pub fn make_named_family(name: &str, params: &[(&str, &str)], ctx: &FieldContext) -> Result<SBoxSpec> {
    let mut desc = name.to_string();
    for (k, v) in params {
        desc.push(':');
        desc.push_str(k);
        desc.push('=');
        desc.push_str(v);
    }
    FamilyDescriptor::parse(&desc, 0)?.instantiate(ctx)
}

fn table_for(mode: &TableMode, ctx: &FieldContext, m: u64) -> Result<ResidueTable> {
    ctx.check_index(m)?;
    mode.build(ctx, m)
}

pub(crate) fn split_descriptor(desc: &str) -> Result<(String, BTreeMap<String, String>)> {
    let mut parts = desc.trim().split(':');
    let name = parts.next().unwrap_or_default().trim().to_ascii_lowercase();
    if name.is_empty() {
        return Err(Error::param("empty family descriptor"));
    }
    let mut params = BTreeMap::new();
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::param(format!("expected key=value in descriptor, got `{part}`")))?;
        params.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
    }
    Ok((name, params))
}

pub fn parse_table_mode(v: &str, seed: u64) -> Result<TableMode> {
    let v = v.trim();
    if v == "id" || v == "identity" {
        return Ok(TableMode::Identity);
    }
    if let Some(rest) = v.strip_prefix("rand") {
        let draw = rest.trim_start_matches(['(', ':']).trim_end_matches(')');
        let draw = if draw.is_empty() {
            0
        } else {
            draw.parse().map_err(|_| Error::param(format!("bad random table tag `{v}`")))?
        };
        return Ok(TableMode::Random { seed, draw });
    }
    if let Some(rest) = v.strip_prefix("shift") {
        let a = rest.trim_start_matches('(').trim_end_matches(')');
        return a.parse().map(TableMode::Shifted).map_err(|_| Error::param(format!("bad shift `{v}`")));
    }
    let entries: std::result::Result<Vec<u64>, _> = v.split([',', ';']).map(|s| s.trim().parse::<u64>()).collect();
    entries.map(TableMode::Explicit).map_err(|_| Error::param(format!("bad table `{v}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;

    fn ctx(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f7 = ctx(7);
        let polocolo_like = SBoxSpec::power_residue(ExponentSpec::Inverse, 2, ResidueTable::identity(&f7, 2).unwrap());
        assert_eq!(polocolo_like.eval(&f7, f7.elem(3)).unwrap().value(), 2);
        assert_eq!(polocolo_like.eval(&f7, FieldElement::ZERO).unwrap(), FieldElement::ZERO);

        let grassi = SBoxSpec::TwoExponentLegendre { d_plus: 3, d_minus: 5 };
        assert_eq!(grassi.eval(&f7, f7.elem(3)).unwrap().value(), 5);
        assert_eq!(grassi.eval(&f7, f7.elem(2)).unwrap().value(), 1);
        assert_eq!(grassi.eval(&f7, FieldElement::ZERO).unwrap(), FieldElement::ZERO);
    }

    #[test]
    fn table_examples() {
        let f11 = ctx(11);
        let grendel = FamilyDescriptor::Grendel { d: 2 }.instantiate(&f11).unwrap();
        let expected: Vec<u64> = (0..11).map(|x| mod_pow(x, 7, 11)).collect();
        assert_eq!(grendel.table(&f11).unwrap(), expected);

        let ident = SBoxSpec::power_residue(ExponentSpec::Literal(1), 1, ResidueTable::new(vec![1]));
        assert_eq!(ident.table(&f11).unwrap(), (0..11).collect::<Vec<_>>());
        assert!(ident.is_permutation(&f11).unwrap().bijective);
    }

    #[test]
    fn table_agrees_with_pointwise_formula() {
        for p in [3, 5, 7, 11, 13, 31, 61, 97] {
            let c = ctx(p);
            let mut specs = vec![SBoxSpec::TwoExponentLegendre { d_plus: 3, d_minus: 5 }];
            for m in (1..p).filter(|m| (p - 1) % m == 0) {
                for exponent in [
                    ExponentSpec::Literal(1),
                    ExponentSpec::Literal(3),
                    ExponentSpec::Inverse,
                    ExponentSpec::ScaledInverse(2),
                ] {
                    specs.push(SBoxSpec::power_residue(exponent, m, ResidueTable::identity(&c, m).unwrap()));
                    let mut rng = ChaCha8Rng::seed_from_u64(p * 31 + m);
                    specs.push(SBoxSpec::power_residue(exponent, m, ResidueTable::random(&c, m, &mut rng).unwrap()));
                }
            }
            for spec in specs {
                if spec.validate(&c).is_err() {
                    continue;
                }
                let table = spec.table(&c).unwrap();
                assert_eq!(table[0], 0);
                for x in 0..p {
                    assert_eq!(table[x as usize], spec.eval(&c, c.elem(x)).unwrap().value(), "{spec:?} at {x} mod {p}");
                }
            }
        }
    }

    #[test]
    fn scaled_inverse_is_a_negative_power() {
        let c = ctx(31);
        let spec = SBoxSpec::power_residue(ExponentSpec::ScaledInverse(3), 1, ResidueTable::new(vec![1]));
        for x in 1..31 {
            let inv = c.inv(c.elem(x)).unwrap();
            assert_eq!(spec.eval(&c, c.elem(x)).unwrap(), c.pow(inv, 3));
        }
    }

    #[test]
    fn grendel_permutation_examples() {
        let f11 = ctx(11);
        let ok = FamilyDescriptor::Grendel { d: 2 }.instantiate(&f11).unwrap().is_permutation(&f11).unwrap();
        assert!(ok.bijective);
        assert_eq!(ok.criterion, Some(GcdCriterion { holds: true, exact: true }));
        let bad = FamilyDescriptor::Grendel { d: 3 }.instantiate(&f11).unwrap().is_permutation(&f11).unwrap();
        assert!(!bad.bijective);
        assert_eq!(bad.criterion, Some(GcdCriterion { holds: false, exact: true }));
    }

    #[test]
    fn grendel_gcd_criterion_is_exact() {
        for p in (3..=257u64).filter(|&p| is_prime(p)) {
            let c = ctx(p);
            for d in 1..=7 {
                // the assertion inside is_permutation compares both routes
                let check = FamilyDescriptor::Grendel { d }.instantiate(&c).unwrap().is_permutation(&c).unwrap();
                assert_eq!(check.criterion.unwrap().holds, check.bijective);
            }
        }
    }

    #[test]
    fn coprime_two_exponent_blends_are_permutations() {
        for p in (5..=257u64).filter(|&p| is_prime(p)) {
            let c = ctx(p);
            for (dp, dm) in [(3, 5), (5, 7), (3, 7), (7, 11)] {
                let spec = SBoxSpec::TwoExponentLegendre { d_plus: dp, d_minus: dm };
                if spec.validate(&c).is_err() {
                    continue;
                }
                let check = spec.is_permutation(&c).unwrap();
                if gcd(dp, p - 1) == 1 && gcd(dm, p - 1) == 1 {
                    assert!(check.bijective, "({dp},{dm}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn validate_t_examples() {
        assert!(validate_t(&ResidueTable::new(vec![1, 1, 1]), 3, 7).is_ok());
        let err = validate_t(&ResidueTable::new(vec![1, 0, 3]), 3, 7).unwrap_err();
        assert!(matches!(err, Error::ResidueTable { index: 1, .. }));
        let f7 = ctx(7);
        let id = ResidueTable::identity(&f7, 2).unwrap();
        assert_eq!(id.entries(), &[1, 6]);
        assert!(validate_t(&id, 2, 7).is_ok());
        assert!(validate_t(&id, 3, 7).is_err());
    }

    #[test]
    fn named_families() {
        let f11 = ctx(11);
        assert_eq!(
            make_named_family("grendel", &[("d", "2")], &f11).unwrap(),
            SBoxSpec::power_residue(ExponentSpec::Literal(2), 2, ResidueTable::new(vec![1, 10]))
        );
        assert!(make_named_family("shifted_legendre", &[("d", "3"), ("a", "1")], &f11).is_err());
        assert!(make_named_family("shifted_legendre", &[("d", "3"), ("a", "-1")], &f11).is_err());
        assert!(make_named_family("shifted_legendre", &[("d", "3"), ("a", "2")], &f11).is_ok());
        assert!(make_named_family("shallue", &[("m", "2"), ("a", "10")], &f11).is_err());
        assert!(make_named_family("shallue", &[("m", "2"), ("a", "0")], &f11).is_err());
        let shallue = make_named_family("shallue", &[("m", "2"), ("a", "3")], &f11).unwrap();
        assert_eq!(shallue, SBoxSpec::power_residue(ExponentSpec::Literal(1), 2, ResidueTable::new(vec![4, 2])));

        let f7 = ctx(7);
        assert_eq!(
            make_named_family("polocolo", &[("n", "1")], &f7).unwrap(),
            SBoxSpec::power_residue(ExponentSpec::Inverse, 2, ResidueTable::new(vec![1, 6]))
        );
        assert!(make_named_family("polocolo", &[("m", "6")], &ctx(13)).is_err());
        assert!(make_named_family("polocolo", &[("n", "2")], &f7).is_err());
        assert!(matches!(
            make_named_family("scaled_inverse", &[("e", "2"), ("m", "2")], &f7).unwrap(),
            SBoxSpec::PowerResidue { exponent: ExponentSpec::ScaledInverse(2), m: 2, .. }
        ));
        assert!(make_named_family("grassi_two_exponent", &[("dp", "3"), ("dm", "5")], &f7).is_ok());
        assert!(make_named_family("nope", &[], &f7).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(
            FamilyDescriptor::parse("inverse:m=4:t=rand2", 9).unwrap(),
            FamilyDescriptor::Inverse { m: 4, table: TableMode::Random { seed: 9, draw: 2 } }
        );
        assert_eq!(
            FamilyDescriptor::parse("power_residue:d=3:m=4:t=1,2,3,4", 0).unwrap(),
            FamilyDescriptor::PowerResidue { d: 3, m: 4, table: TableMode::Explicit(vec![1, 2, 3, 4]) }
        );
        assert_eq!(
            FamilyDescriptor::parse("polocolo:m=8", 0).unwrap(),
            FamilyDescriptor::Polocolo { n: 3, table: TableMode::Identity }
        );
        assert!(FamilyDescriptor::parse("inverse", 0).is_err());
        assert!(FamilyDescriptor::parse("inverse:m", 0).is_err());
    }

    #[test]
    fn random_tables_are_reproducible_and_injective() {
        let c = ctx(257);
        let mode = TableMode::Random { seed: 42, draw: 1 };
        let a = mode.build(&c, 16).unwrap();
        assert_eq!(a, mode.build(&c, 16).unwrap());
        assert!(a.is_injective());
        assert!(a.validate(16, 257).is_ok());
        assert_ne!(a, TableMode::Random { seed: 42, draw: 2 }.build(&c, 16).unwrap());
    }

    #[test]
    fn rotation() {
        let t = ResidueTable::new(vec![1, 2, 3, 4]);
        assert_eq!(t.rotated(1).entries(), &[4, 1, 2, 3]);
        assert_eq!(t.rotated(4), t);
    }
}
