//! Segmented sieve of Eratosthenes.

use crate::set::IntegerSource;

const SEGMENT: u64 = 1 << 18;

/// Primes up to `limit` by a plain sieve.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Ascending primes `>= start`, sieved one segment at a time.
pub struct PrimeStream {
    base: Vec<u64>,
    base_limit: u64,
    lo: u64,
    buf: Vec<u64>,
    pos: usize,
    done: bool,
}

impl PrimeStream {
    pub fn new(start: u64) -> Self {
        PrimeStream {
            base: Vec::new(),
            base_limit: 1,
            lo: start.max(2),
            buf: Vec::new(),
            pos: 0,
            done: false,
        }
    }

    fn refill(&mut self) {
        let lo = self.lo;
        let hi = lo.saturating_add(SEGMENT).min(u64::MAX - 1);
        if hi <= lo {
            self.done = true;
            return;
        }
        let root = crate::numeric::integer_root(hi, 2) + 1;
        if root > self.base_limit {
            let limit = root.max(self.base_limit * 2).min(u32::MAX as u64);
            self.base = small_primes(limit);
            self.base_limit = limit;
        }
        let mut composite = vec![false; (hi - lo) as usize];
        for &p in &self.base {
            if p.saturating_mul(p) >= hi {
                break;
            }
            let first = (p * p).max(lo.div_ceil(p) * p);
            let mut m = first;
            while m < hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        self.buf.clear();
        self.buf.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| lo + i as u64)
                .filter(|&x| x >= 2),
        );
        self.pos = 0;
        self.lo = hi;
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.buf.len() {
            if self.done {
                return None;
            }
            self.refill();
        }
        self.pos += 1;
        Some(self.buf[self.pos - 1])
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Primes;

impl IntegerSource for Primes {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        Box::new(PrimeStream::new(start))
    }

    fn membership(&self, n: u64) -> Option<bool> {
        Some(is_prime(n))
    }
}
