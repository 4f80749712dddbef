/// All primes in `[lo, hi]`, ascending, by a segmented sieve of Eratosthenes.
pub fn sieve_primes(lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if hi < lo {
        return Vec::new();
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let small = simple_sieve(root);
    let mut out = Vec::new();
    const SEGMENT: u64 = 1 << 16;
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start + SEGMENT - 1);
        let mut composite = vec![false; (end - start + 1) as usize];
        for &q in &small {
            if q * q > end {
                break;
            }
            let first = (q * q).max(start.div_ceil(q) * q);
            let mut k = first;
            while k <= end {
                composite[(k - start) as usize] = true;
                k += q;
            }
        }
        out.extend(composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| start + i as u64));
        start = end + 1;
    }
    out
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}
