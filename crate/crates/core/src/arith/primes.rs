//! Prime generation: a bit sieve for dense ranges, a windowed segmented
//! stream for unbounded ascending enumeration, and deterministic
//! Miller-Rabin for 64-bit integers.

use crate::error::Error;

/// Hard cap on `primes_up_to`; a full sieve above this would not fit the
/// memory budget (the bitmap alone is `limit/16` bytes).
pub const SIEVE_BUDGET: u64 = 1 << 32;

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>, Error> {
    primes_up_to_with_budget(limit, SIEVE_BUDGET)
}

pub fn primes_up_to_with_budget(limit: u64, budget: u64) -> Result<Vec<u64>, Error> {
    if limit > budget {
        return Err(Error::SieveBudget { limit, budget });
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    // Bitmap over odd numbers; bit i represents 2i+1.
    let n_odd = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; n_odd];
    composite[0] = true; // 1
    let mut p = 3u64;
    while p * p <= limit {
        if !composite[(p / 2) as usize] {
            let mut m = p * p;
            while m <= limit {
                composite[(m / 2) as usize] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    Ok(primes)
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (x / (x.ln() - 1.1)) as usize + 16
}

/// Sieve the half-open window `[lo, hi)` given base primes covering
/// `sqrt(hi)`; pushes primes into `out` in ascending order.
fn sieve_window(lo: u64, hi: u64, base: &[u64], out: &mut Vec<u64>) {
    debug_assert!(lo >= 2);
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut start = p.max(lo.div_ceil(p)) * p;
        if start < p * p {
            start = p * p;
        }
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    for (i, &c) in composite.iter().enumerate() {
        let n = lo + i as u64;
        if !c && n >= 2 {
            // base primes inside the window are not marked; keep them
            out.push(n);
        }
    }
}

/// Unbounded ascending stream of primes strictly greater than `start`,
/// produced by a windowed sieve with on-demand base-prime growth.
pub struct PrimeStream {
    base: Vec<u64>,
    base_limit: u64,
    window: Vec<u64>,
    pos: usize,
    next_lo: u64,
    window_len: u64,
}

impl PrimeStream {
    pub fn above(start: u64) -> Self {
        PrimeStream {
            base: Vec::new(),
            base_limit: 1,
            window: Vec::new(),
            pos: 0,
            next_lo: start + 1,
            window_len: 1 << 20,
        }
    }

    fn refill(&mut self) {
        let lo = self.next_lo.max(2);
        let hi = lo + self.window_len;
        if self.base_limit * self.base_limit < hi {
            let need = (hi as f64).sqrt() as u64 + 2;
            self.base = primes_up_to_with_budget(need, u64::MAX).expect("base sieve");
            self.base_limit = need;
        }
        self.window.clear();
        sieve_window(lo, hi, &self.base, &mut self.window);
        self.pos = 0;
        self.next_lo = hi;
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.window.len() {
            self.refill();
        }
        let p = self.window[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Deterministic Miller-Rabin for `u64` (7 fixed bases, exact for the
/// whole range; no error probability to document).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mont = Montgomery::new(n);
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    // This base set is a known deterministic witness set for all n < 2^64.
    for &a in &[2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        if !mont.strong_probable_prime(a, d, s) {
            return false;
        }
    }
    true
}

/// Checks that every element of an ascending `u64` slice is prime, by
/// re-sieving the covered range. Returns the first composite, if any.
/// Much faster than per-element Miller-Rabin when the set is dense.
pub fn first_composite_sieved(sorted: &[u64]) -> Option<u64> {
    if sorted.is_empty() {
        return None;
    }
    debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
    let max = *sorted.last().unwrap();
    let need = (max as f64).sqrt() as u64 + 2;
    let base = primes_up_to_with_budget(need, u64::MAX).expect("base sieve");
    let window_len: u64 = 1 << 22;
    let mut idx = 0usize;
    let mut lo = sorted[0].max(2);
    let mut window = Vec::new();
    while idx < sorted.len() {
        let hi = (lo + window_len).min(max + 1);
        window.clear();
        sieve_window(lo, hi, &base, &mut window);
        let mut w = 0usize;
        while idx < sorted.len() && sorted[idx] < hi {
            let target = sorted[idx];
            while w < window.len() && window[w] < target {
                w += 1;
            }
            if w >= window.len() || window[w] != target {
                return Some(target);
            }
            idx += 1;
        }
        lo = hi;
    }
    None
}

/// Montgomery arithmetic modulo an odd u64.
struct Montgomery {
    n: u64,
    n_inv: u64, // -n^{-1} mod 2^64
    r2: u64,    // 2^128 mod n
}

impl Montgomery {
    fn new(n: u64) -> Self {
        debug_assert!(n & 1 == 1);
        // Newton iteration for the inverse of n mod 2^64.
        let mut inv = n;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let n_inv = inv.wrapping_neg();
        // 2^128 mod n, i.e. the Montgomery form of 2^64
        let r2 = (u128::MAX % n as u128 + 1) % n as u128;
        Montgomery {
            n,
            n_inv,
            r2: r2 as u64,
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_inv);
        let mn = m as u128 * self.n as u128;
        // low halves of t and m*n cancel mod 2^64; carry is 1 unless both are 0
        let carry = (t as u64 != 0) as u128;
        let t2 = (t >> 64) + (mn >> 64) + carry;
        let t2 = if t2 >= self.n as u128 {
            t2 - self.n as u128
        } else {
            t2
        };
        t2 as u64
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn strong_probable_prime(&self, a: u64, d: u64, s: u32) -> bool {
        let one = self.redc(self.r2 as u128); // 1 in Montgomery form
        let minus_one = self.n - one;
        let a_m = self.mul(a, self.r2);
        // a^d by square and multiply
        let mut x = one;
        let mut base = a_m;
        let mut e = d;
        while e > 0 {
            if e & 1 == 1 {
                x = self.mul(x, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        if x == one || x == minus_one {
            return true;
        }
        for _ in 1..s {
            x = self.mul(x, x);
            if x == minus_one {
                return true;
            }
        }
        false
    }
}
