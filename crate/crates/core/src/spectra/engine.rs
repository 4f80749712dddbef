use crate::character::{AdditiveCharacter, Complex};
use crate::error::{Error, Result};

use super::MAX_SPECTRUM_MODULUS;

pub(crate) fn check_modulus(p: u64) -> Result<()> {
    if p >= MAX_SPECTRUM_MODULUS {
        return Err(Error::param(format!("spectrum enumeration needs p < 2^31, got {p}")));
    }
    Ok(())
}

/// Sums `psi(base[x] + c * step[x])` for `c = first, first + 1, ...`, `count`
/// values of `c` in total. Entries of `base` and `step` must be reduced mod `p`.
pub(crate) fn row_scan(base: &[u32], step: &[u32], first: u64, count: u64, chi: &AdditiveCharacter) -> Vec<Complex> {
    debug_assert_eq!(base.len(), step.len());
    let p = chi.p() as u32;
    let first = (first % p as u64) as u32;
    let mut cur: Vec<u32> =
        base.iter().zip(step).map(|(&b, &s)| ((b as u64 + first as u64 * s as u64) % p as u64) as u32).collect();
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        out.push(chi.sum_reduced(&cur));
        for (c, &s) in cur.iter_mut().zip(step) {
            let v = *c + s;
            *c = if v >= p { v - p } else { v };
        }
    }
    out
}

/// Rows handed to the worker pool at once; bounds the memory held by finished rows.
pub(crate) const ROW_CHUNK: usize = 32;

/// Evaluates `f` on `0..count` and folds the results in index order.
/// Evaluation runs on the rayon pool when the `parallel` feature is on.
pub(crate) fn for_each_row<T, F, G>(count: usize, f: F, mut fold: G)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    G: FnMut(usize, T),
{
    let mut start = 0;
    while start < count {
        let end = (start + ROW_CHUNK).min(count);
        #[cfg(feature = "parallel")]
        let rows: Vec<T> = {
            use rayon::prelude::*;
            (start..end).into_par_iter().map(&f).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<T> = (start..end).map(&f).collect();
        for (i, row) in rows.into_iter().enumerate() {
            fold(start + i, row);
        }
        start = end;
    }
}

/// `g^0, g^1, ..., g^(p-2)` and the reverse map.
pub(crate) struct PowerTables {
    pub exp: Vec<u32>,
    pub log: Vec<u32>,
}

impl PowerTables {
    pub fn new(p: u64, g: u64) -> Self {
        let n = p as usize;
        let mut exp = vec![0u32; n - 1];
        let mut log = vec![u32::MAX; n];
        let mut x = 1u64;
        for (k, e) in exp.iter_mut().enumerate() {
            *e = x as u32;
            log[x as usize] = k as u32;
            x = x * g % p;
        }
        PowerTables { exp, log }
    }

    pub fn pow(&self, k: u64) -> u64 {
        self.exp[(k % self.exp.len() as u64) as usize] as u64
    }

    pub fn log(&self, x: u64) -> u64 {
        self.log[x as usize] as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_scan_matches_direct_sums() {
        let p = 31u64;
        let chi = AdditiveCharacter::new(p, 3).unwrap();
        let base: Vec<u32> = (0..p as u32).map(|x| x * 7 % 31).collect();
        let step: Vec<u32> = (0..p as u32).map(|x| x * x % 31).collect();
        let row = row_scan(&base, &step, 5, 40, &chi);
        assert_eq!(row.len(), 40);
        for (i, v) in row.iter().enumerate() {
            let c = 5 + i as u64;
            let direct =
                (0..p as usize).fold(Complex::ZERO, |acc, x| acc + chi.eval(base[x] as u64 + c * step[x] as u64));
            assert!(v.dist(direct) < 1e-10);
        }
    }

    #[test]
    fn rows_fold_in_order() {
        let mut seen = Vec::new();
        for_each_row(100, |i| i * i, |i, v| seen.push((i, v)));
        assert_eq!(seen, (0..100).map(|i| (i, i * i)).collect::<Vec<_>>());
    }

    #[test]
    fn power_tables_invert() {
        let t = PowerTables::new(13, 2);
        for x in 1..13 {
            assert_eq!(t.pow(t.log(x)), x);
        }
        assert_eq!(t.pow(12), 1);
    }
}
