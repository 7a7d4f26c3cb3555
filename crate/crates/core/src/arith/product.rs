//! Balanced big-integer products. Multiplying millions of word-sized
//! factors one by one is quadratic; a binary-counter accumulator keeps
//! operand sizes matched so GMP's subquadratic multiplication applies.

use rayon::join;
use rug::{Assign, Integer};

/// Streaming product with balanced intermediate sizes; push factors in
/// any order, then `finish`.
pub struct ProductAccumulator {
    // (level, partial product); level k holds a product of ~2^k pushes
    stack: Vec<(u32, Integer)>,
    pending: u128,
    pending_count: u32,
}

impl ProductAccumulator {
    pub fn new() -> Self {
        ProductAccumulator {
            stack: Vec::new(),
            pending: 1,
            pending_count: 0,
        }
    }

    pub fn push_u64(&mut self, v: u64) {
        // batch word factors in u128 before touching the big stack
        match self.pending.checked_mul(v as u128) {
            Some(p) => {
                self.pending = p;
                self.pending_count += 1;
            }
            None => {
                let flushed = Integer::from(self.pending);
                self.push_level(0, flushed);
                self.pending = v as u128;
                self.pending_count = 1;
            }
        }
    }

    pub fn push(&mut self, v: Integer) {
        self.flush_pending();
        self.push_level(0, v);
    }

    fn flush_pending(&mut self) {
        if self.pending_count > 0 {
            let flushed = Integer::from(self.pending);
            self.push_level(0, flushed);
            self.pending = 1;
            self.pending_count = 0;
        }
    }

    fn push_level(&mut self, mut level: u32, mut v: Integer) {
        while let Some(&(top_level, _)) = self.stack.last() {
            if top_level != level {
                break;
            }
            let (_, top) = self.stack.pop().unwrap();
            v *= top;
            level += 1;
        }
        self.stack.push((level, v));
    }

    pub fn finish(mut self) -> Integer {
        self.flush_pending();
        let mut acc = Integer::from(1);
        // smallest partials sit on top; multiply upward in size
        while let Some((_, v)) = self.stack.pop() {
            acc *= v;
        }
        acc
    }
}

impl Default for ProductAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

/// Product of `f(x)` over a slice, split recursively for rayon. The
/// result is exact, so the split shape cannot affect the value.
pub fn balanced_product_map<F>(vals: &[u64], f: &F) -> Integer
where
    F: Fn(u64) -> u64 + Sync,
{
    const SERIAL_CHUNK: usize = 1 << 14;
    if vals.len() <= SERIAL_CHUNK {
        let mut acc = ProductAccumulator::new();
        for &v in vals {
            acc.push_u64(f(v));
        }
        return acc.finish();
    }
    let mid = vals.len() / 2;
    let (l, r) = join(
        || balanced_product_map(&vals[..mid], f),
        || balanced_product_map(&vals[mid..], f),
    );
    l * r
}

pub fn product_of(vals: &[u64]) -> Integer {
    balanced_product_map(vals, &|v| v)
}

/// In-place assign helper used where an `Integer` is reused.
pub fn assign_product_of(target: &mut Integer, vals: &[u64]) {
    target.assign(product_of(vals));
}
