use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sbox::{parse_table_mode, FamilyDescriptor, TableMode};
use crate::spectra::DEFAULT_BRUTE_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Reduced,
    BruteForce,
    /// Reduced and exhaustive enumeration side by side; maxima must agree.
    Cross,
}

impl std::str::FromStr for SweepMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "reduced" => Ok(SweepMode::Reduced),
            "brute" | "brute_force" => Ok(SweepMode::BruteForce),
            "cross" | "cross_check" => Ok(SweepMode::Cross),
            other => Err(Error::param(format!("unknown mode `{other}`; expected reduced, brute or cross"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Kloosterman,
    PowerResidue,
    Inverse,
    ScaledInverse,
    Polocolo,
    Grendel,
    Shallue,
    ShiftedLegendre,
    Grassi,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "kloosterman" => FamilyKind::Kloosterman,
            "power_residue" => FamilyKind::PowerResidue,
            "inverse" => FamilyKind::Inverse,
            "scaled_inverse" => FamilyKind::ScaledInverse,
            "polocolo" => FamilyKind::Polocolo,
            "grendel" => FamilyKind::Grendel,
            "shallue" => FamilyKind::Shallue,
            "shifted_legendre" => FamilyKind::ShiftedLegendre,
            "grassi" | "grassi_two_exponent" => FamilyKind::Grassi,
            other => return Err(Error::param(format!("unknown family kind `{other}`"))),
        })
    }
}

/// One family with its parameter grid; the grid is the cartesian product of
/// the lists the kind uses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyGrid {
    pub label: String,
    pub kind: FamilyKind,
    pub m: Vec<u64>,
    pub d: Vec<u64>,
    pub e: Vec<u64>,
    pub n: Vec<u32>,
    pub a: Vec<i64>,
    /// `(d+, d-)` pairs of the two-exponent family.
    pub pairs: Vec<(u64, u64)>,
    pub tables: Vec<TableMode>,
}

impl FamilyGrid {
    pub fn new(label: &str, kind: FamilyKind) -> Self {
        FamilyGrid {
            label: label.to_string(),
            kind,
            m: Vec::new(),
            d: Vec::new(),
            e: Vec::new(),
            n: Vec::new(),
            a: Vec::new(),
            pairs: Vec::new(),
            tables: vec![TableMode::Identity],
        }
    }

    fn require<T>(&self, name: &str, v: &[T]) -> Result<()> {
        if v.is_empty() {
            return Err(Error::param(format!("family {} needs a non-empty {name} list", self.label)));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            FamilyKind::Kloosterman => self.require("m", &self.m),
            FamilyKind::PowerResidue => self.require("m", &self.m).and(self.require("d", &self.d)),
            FamilyKind::Inverse => self.require("m", &self.m),
            FamilyKind::ScaledInverse => self.require("m", &self.m).and(self.require("e", &self.e)),
            FamilyKind::Polocolo => self.require("n", &self.n),
            FamilyKind::Grendel => self.require("d", &self.d),
            FamilyKind::Shallue => self.require("m", &self.m).and(self.require("a", &self.a)),
            FamilyKind::ShiftedLegendre => self.require("d", &self.d).and(self.require("a", &self.a)),
            FamilyKind::Grassi => self.require("pairs", &self.pairs),
        }?;
        self.require("t", &self.tables)
    }

    /// All prime-independent instances of the grid.
    pub fn instances(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        let t = &self.tables;
        match self.kind {
            FamilyKind::Kloosterman => {
                let es = if self.e.is_empty() { vec![1] } else { self.e.clone() };
                for &m in &self.m {
                    for &e in &es {
                        out.push(Instance::Kloosterman { m, e });
                    }
                }
            }
            FamilyKind::PowerResidue => {
                for &d in &self.d {
                    for &m in &self.m {
                        for table in t {
                            out.push(Instance::Walsh(FamilyDescriptor::PowerResidue { d, m, table: table.clone() }));
                        }
                    }
                }
            }
            FamilyKind::Inverse => {
                for &m in &self.m {
                    for table in t {
                        out.push(Instance::Walsh(FamilyDescriptor::Inverse { m, table: table.clone() }));
                    }
                }
            }
            FamilyKind::ScaledInverse => {
                for &e in &self.e {
                    for &m in &self.m {
                        for table in t {
                            out.push(Instance::Walsh(FamilyDescriptor::ScaledInverse { e, m, table: table.clone() }));
                        }
                    }
                }
            }
            FamilyKind::Polocolo => {
                for &n in &self.n {
                    for table in t {
                        out.push(Instance::Walsh(FamilyDescriptor::Polocolo { n, table: table.clone() }));
                    }
                }
            }
            FamilyKind::Grendel => {
                out.extend(self.d.iter().map(|&d| Instance::Walsh(FamilyDescriptor::Grendel { d })));
            }
            FamilyKind::Shallue => {
                for &m in &self.m {
                    for &a in &self.a {
                        out.push(Instance::Walsh(FamilyDescriptor::Shallue { m, a }));
                    }
                }
            }
            FamilyKind::ShiftedLegendre => {
                for &d in &self.d {
                    for &a in &self.a {
                        out.push(Instance::Walsh(FamilyDescriptor::ShiftedLegendre { d, a }));
                    }
                }
            }
            FamilyKind::Grassi => {
                out.extend(
                    self.pairs
                        .iter()
                        .map(|&(d_plus, d_minus)| Instance::Walsh(FamilyDescriptor::Grassi { d_plus, d_minus })),
                );
            }
        }
        out
    }
}

/// A prime-independent unit of work.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Instance {
    Kloosterman { m: u64, e: u64 },
    Walsh(FamilyDescriptor),
}

impl Instance {
    /// The `family` column.
    pub fn label(&self) -> String {
        match self {
            Instance::Kloosterman { e: 1, .. } => "kloosterman".into(),
            Instance::Kloosterman { e, .. } => format!("kloosterman_e{e}"),
            Instance::Walsh(desc) => desc.label(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub primes: (u64, u64),
    pub families: Vec<FamilyGrid>,
    pub mode: SweepMode,
    /// Character twist `c` of `psi(x) = exp(2 pi i c x / p)`, reduced mod each `p`.
    pub twist: u64,
    /// `None` uses every available core.
    pub workers: Option<usize>,
    pub seed: u64,
    pub brute_cap: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            primes: (3, 3),
            families: Vec::new(),
            mode: SweepMode::Reduced,
            twist: 1,
            workers: None,
            seed: 0,
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.primes;
        if lo < 3 {
            return Err(Error::param(format!("prime range must start at 3 or above, got {lo}")));
        }
        if hi < lo || hi > 1 << 32 {
            return Err(Error::param(format!("bad prime range {lo}:{hi}")));
        }
        if self.families.is_empty() {
            return Err(Error::param("no families configured"));
        }
        if self.workers == Some(0) {
            return Err(Error::param("workers must be at least 1"));
        }
        for f in &self.families {
            f.validate()?;
        }
        Ok(())
    }

    /// Re-seeds every random table of the grid.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        for f in &mut self.families {
            for t in &mut f.tables {
                if let TableMode::Random { seed: s, .. } = t {
                    *s = seed;
                }
            }
        }
        self
    }

    /// Parses the flat `key = value` format:
    ///
    /// ```text
    /// primes   = 3:257
    /// mode     = reduced
    /// seed     = 7
    /// families = klo, inv
    /// klo.kind = kloosterman
    /// klo.m    = 2, 4
    /// inv.kind = inverse
    /// inv.m    = 2, 4
    /// inv.t    = id, rand0, rand1
    /// ```
    ///
    /// `#` starts a comment. Family keys are `kind`, `m`, `d`, `e`, `n`, `a`,
    /// `pairs` (as `3/5, 5/7`) and `t` (`id`, `rand<k>`, `shift(<a>)`, or an
    /// explicit table `1;6`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut top: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut fam: BTreeMap<String, BTreeMap<String, (usize, String)>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config { line: line_no, msg: format!("expected `key = value`, got `{line}`") })?;
            let (k, v) = (k.trim().to_ascii_lowercase(), v.trim().to_string());
            let dup = match k.split_once('.') {
                Some((label, key)) => {
                    fam.entry(label.to_string()).or_default().insert(key.to_string(), (line_no, v)).is_some()
                }
                None => top.insert(k.clone(), (line_no, v)).is_some(),
            };
            if dup {
                return Err(Error::Config { line: line_no, msg: format!("duplicate key `{k}`") });
            }
        }

        let mut cfg = SweepConfig::default();
        let known = ["primes", "families", "mode", "twist", "workers", "seed", "brute_cap"];
        for (k, (line, _)) in &top {
            if !known.contains(&k.as_str()) {
                return Err(Error::Config { line: *line, msg: format!("unknown key `{k}`") });
            }
        }
        let at = |line: usize| move |e: Error| Error::Config { line, msg: e.to_string() };
        if let Some((line, v)) = top.get("primes") {
            cfg.primes = parse_range(v).map_err(at(*line))?;
        } else {
            return Err(Error::Config { line: 0, msg: "missing `primes`".into() });
        }
        if let Some((line, v)) = top.get("mode") {
            cfg.mode = v.parse().map_err(at(*line))?;
        }
        if let Some((line, v)) = top.get("twist") {
            cfg.twist = parse_num(v).map_err(at(*line))?;
        }
        if let Some((line, v)) = top.get("workers") {
            cfg.workers = Some(parse_num::<usize>(v).map_err(at(*line))?);
        }
        if let Some((line, v)) = top.get("seed") {
            cfg.seed = parse_num(v).map_err(at(*line))?;
        }
        if let Some((line, v)) = top.get("brute_cap") {
            cfg.brute_cap = parse_num(v).map_err(at(*line))?;
        }
        let (fline, labels) =
            top.get("families").ok_or_else(|| Error::Config { line: 0, msg: "missing `families`".into() })?;
        for label in split_list(labels) {
            let keys = fam
                .remove(&label)
                .ok_or_else(|| Error::Config { line: *fline, msg: format!("family `{label}` has no keys") })?;
            cfg.families.push(parse_family(&label, &keys, cfg.seed)?);
        }
        if let Some((label, keys)) = fam.into_iter().next() {
            let line = keys.values().map(|(l, _)| *l).min().unwrap_or(0);
            return Err(Error::Config { line, msg: format!("family `{label}` is not listed in `families`") });
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_family(label: &str, keys: &BTreeMap<String, (usize, String)>, seed: u64) -> Result<FamilyGrid> {
    let (kline, kind) = keys
        .get("kind")
        .ok_or_else(|| Error::Config { line: 0, msg: format!("family `{label}` needs `{label}.kind`") })?;
    let at = |line: usize| move |e: Error| Error::Config { line, msg: e.to_string() };
    let mut grid = FamilyGrid::new(label, kind.parse().map_err(at(*kline))?);
    for (key, (line, v)) in keys {
        let line = *line;
        match key.as_str() {
            "kind" => {}
            "m" => grid.m = parse_nums(v).map_err(at(line))?,
            "d" => grid.d = parse_nums(v).map_err(at(line))?,
            "e" => grid.e = parse_nums(v).map_err(at(line))?,
            "n" => grid.n = parse_nums(v).map_err(at(line))?,
            "a" => grid.a = parse_nums(v).map_err(at(line))?,
            "pairs" => {
                grid.pairs = split_list(v)
                    .iter()
                    .map(|p| {
                        let (x, y) =
                            p.split_once('/').ok_or_else(|| Error::param(format!("expected d+/d-, got `{p}`")))?;
                        Ok((parse_num(x)?, parse_num(y)?))
                    })
                    .collect::<Result<_>>()
                    .map_err(at(line))?
            }
            "t" => {
                grid.tables =
                    split_list(v).iter().map(|t| parse_table_mode(t, seed)).collect::<Result<_>>().map_err(at(line))?
            }
            other => return Err(Error::Config { line, msg: format!("unknown family key `{label}.{other}`") }),
        }
    }
    Ok(grid)
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn parse_num<T: std::str::FromStr>(v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::param(format!("`{}` is not a valid number", v.trim())))
}

fn parse_nums<T: std::str::FromStr>(v: &str) -> Result<Vec<T>> {
    split_list(v).iter().map(|s| parse_num(s)).collect()
}

/// `lo:hi`, inclusive.
pub fn parse_range(v: &str) -> Result<(u64, u64)> {
    let (lo, hi) = v.split_once(':').ok_or_else(|| Error::param(format!("expected lo:hi, got `{v}`")))?;
    Ok((parse_num(lo)?, parse_num(hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "
        # two families
        primes = 3:61
        mode = cross
        seed = 9
        workers = 2
        families = klo, inv, gk
        klo.kind = kloosterman
        klo.m = 2, 4
        inv.kind = inverse
        inv.m = 2
        inv.t = id, rand1
        gk.kind = grassi
        gk.pairs = 3/5, 5/7
    ";

    #[test]
    fn parses_example() {
        let cfg = SweepConfig::parse(EXAMPLE).unwrap();
        assert_eq!(cfg.primes, (3, 61));
        assert_eq!(cfg.mode, SweepMode::Cross);
        assert_eq!(cfg.workers, Some(2));
        assert_eq!(cfg.families.len(), 3);
        assert_eq!(cfg.families[0].instances().len(), 2);
        assert_eq!(cfg.families[1].tables, vec![TableMode::Identity, TableMode::Random { seed: 9, draw: 1 }]);
        assert_eq!(cfg.families[2].pairs, vec![(3, 5), (5, 7)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "primes = 3:61\nfamilies = k\nk.kind = kloosterman\nk.m = 2, x\n";
        match SweepConfig::parse(bad) {
            Err(Error::Config { line: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(SweepConfig::parse("primes = 3:61\nfamilies = k\nk.kind = kloosterman").is_err());
        assert!(SweepConfig::parse("primes = 3:61\nfamilies = k\nk.kind = nope\nk.m = 2").is_err());
        assert!(SweepConfig::parse("primes = 2:61\nfamilies = k\nk.kind = kloosterman\nk.m = 2").is_err());
        assert!(SweepConfig::parse("primes = 3:61\nfamilies = k\nk.kind = kloosterman\nk.m = 2\nz.m = 3").is_err());
        assert!(SweepConfig::parse("primes = 3:61\nfoo = 1").is_err());
    }
}
