//! Closed-form count of multiples of a prime power in a window of k
//! consecutive integers; the count never strays from k/p^t by more
//! than 1.

/// Number of i in [0, k-1] with p^t dividing m+i, in O(1).
pub fn multiples_in_window(m: u64, k: u64, p: u64, t: u32) -> u64 {
    assert!(k >= 1 && m >= 1 && p >= 2 && t >= 1);
    let pt = (p as u128).checked_pow(t);
    let Some(pt) = pt else {
        return 0; // p^t overflows 128 bits, far beyond the window
    };
    let last = (m + k - 1) as u128;
    let first = (m - 1) as u128;
    (last / pt - first / pt) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(m: u64, k: u64, p: u64, t: u32) -> u64 {
        let pt = (p as u128).pow(t);
        (0..k)
            .filter(|&i| ((m + i) as u128).is_multiple_of(pt))
            .count() as u64
    }

    #[test]
    fn textbook_counts() {
        assert_eq!(multiples_in_window(1, 10, 2, 1), 5);
        assert_eq!(multiples_in_window(7, 3, 3, 2), 1); // only 9
        assert_eq!(multiples_in_window(10, 5, 7, 1), 1); // only 14
        assert_eq!(multiples_in_window(1, 3, 5, 9), 0);
    }

    #[test]
    fn matches_bruteforce_and_error_bound() {
        let mut seed = 0x243f6a8885a308d3u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        let primes = [2u64, 3, 5, 7, 11, 13, 31, 101];
        for _ in 0..20_000 {
            let m = next() % 1_000_000 + 1;
            let k = next() % 500 + 1;
            let p = primes[(next() % primes.len() as u64) as usize];
            let t = (next() % 4 + 1) as u32;
            let got = multiples_in_window(m, k, p, t);
            assert_eq!(got, oracle(m, k, p, t));
            // |count - k/p^t| <= 1
            let expected = k as f64 / (p as f64).powi(t as i32);
            assert!((got as f64 - expected).abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn huge_prime_power_gives_zero() {
        assert_eq!(multiples_in_window(1, 1000, 2, 127), 0);
        assert_eq!(multiples_in_window(1, 1000, 3, 90), 0);
    }
}
