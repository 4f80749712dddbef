//! Additive characters `psi_c(x) = exp(2 pi i c x / p)` and exact-count
//! evaluation of character sums.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::mod_mul;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn dist(self, other: Complex) -> f64 {
        Complex::new(self.re - other.re, self.im - other.im).abs()
    }

    pub fn scale(self, s: f64) -> Complex {
        Complex::new(self.re * s, self.im * s)
    }
}

impl std::ops::Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl std::ops::Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        Complex::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

/// A nontrivial additive character of `F_p` with its unit-circle table.
#[derive(Clone, Debug)]
pub struct AdditiveCharacter {
    p: u64,
    twist: u64,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl AdditiveCharacter {
    pub fn new(p: u64, twist: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::param("character modulus must be at least 2"));
        }
        if twist % p == 0 {
            return Err(Error::param("twist must be nonzero, the trivial character is excluded"));
        }
        let n = p as usize;
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        let pf = p as f64;
        for k in 0..n {
            let t = mod_mul(k as u64, twist % p, p);
            // fold to the angle of smallest magnitude before calling sin/cos
            let (s, c) = if 2 * t <= p {
                (TAU * t as f64 / pf).sin_cos()
            } else {
                let (s, c) = (TAU * (p - t) as f64 / pf).sin_cos();
                (-s, c)
            };
            re[k] = c;
            im[k] = s;
        }
        re[0] = 1.0;
        im[0] = 0.0;
        Ok(AdditiveCharacter { p, twist: twist % p, re, im })
    }

    /// The fundamental character `psi_1`.
    pub fn fundamental(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn twist(&self) -> u64 {
        self.twist
    }

    #[inline]
    pub fn eval(&self, t: u64) -> Complex {
        let t = (t % self.p) as usize;
        Complex::new(self.re[t], self.im[t])
    }

    pub fn re_table(&self) -> &[f64] {
        &self.re
    }

    pub fn im_table(&self) -> &[f64] {
        &self.im
    }

    /// `sum_k psi(args[k])` by table lookup; every argument must be reduced.
    #[inline]
    pub fn sum_reduced(&self, args: &[u32]) -> Complex {
        let (mut re, mut im) = (0.0, 0.0);
        for &t in args {
            re += self.re[t as usize];
            im += self.im[t as usize];
        }
        Complex::new(re, im)
    }
}

/// `counts[t] = #{x in the domain : argument(x) = t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgumentHistogram {
    p: u64,
    counts: Vec<u64>,
}

impl ArgumentHistogram {
    pub fn new(p: u64) -> Self {
        ArgumentHistogram { p, counts: vec![0; p as usize] }
    }

    pub fn from_arguments(p: u64, args: impl IntoIterator<Item = u64>) -> Self {
        let mut h = Self::new(p);
        for t in args {
            h.push(t);
        }
        h
    }

    pub fn push(&mut self, t: u64) {
        self.counts[(t % self.p) as usize] += 1;
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `sum_t counts[t] psi(t)`: integer counts, then one length-`p` dot product.
pub fn char_sum(hist: &ArgumentHistogram, chi: &AdditiveCharacter) -> Result<Complex> {
    if hist.p != chi.p {
        return Err(Error::ModulusMismatch { expected: chi.p, found: hist.p });
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (t, &c) in hist.counts.iter().enumerate() {
        if c != 0 {
            let c = c as f64;
            re += c * chi.re[t];
            im += c * chi.im[t];
        }
    }
    Ok(Complex::new(re, im))
}
