//! Prime-field arithmetic, primitive roots, base-p digits and Pascal's
//! triangle modulo a prime.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest prime accepted by [`PrimeContext::new`]. The fundamental domain is
/// stored eagerly, so memory grows like p^2.
pub const MAX_CONTEXT_PRIME: u64 = 8192;

/// Default bound on brute-force row oracles.
pub const DEFAULT_ORACLE_LIMIT: u64 = 10_000;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as witnesses are
/// sufficient for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least primitive root of the prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let factors = distinct_prime_factors(order);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Base-p expansion, least-significant digit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    base: u64,
    digits: Vec<u64>,
}

impl DigitString {
    pub fn from_u64(mut n: u64, base: u64) -> Self {
        assert!(base >= 2, "digit base must be at least 2");
        if n == 0 {
            return Self {
                base,
                digits: vec![0],
            };
        }
        let mut digits = Vec::new();
        while n > 0 {
            digits.push(n % base);
            n /= base;
        }
        Self { base, digits }
    }

    pub fn from_biguint(n: &BigUint, base: u64) -> Self {
        assert!(base >= 2, "digit base must be at least 2");
        if let Some(small) = n.to_u64() {
            return Self::from_u64(small, base);
        }
        // Peel off the largest power of the base that fits in a u64 at a time.
        let mut chunk_len = 0u32;
        let mut chunk = 1u64;
        while let Some(next) = chunk.checked_mul(base) {
            chunk = next;
            chunk_len += 1;
        }
        let chunk_big = BigUint::from(chunk);
        let mut rest = n.clone();
        let mut digits = Vec::new();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&chunk_big);
            let mut r = r.to_u64().expect("remainder below a u64 chunk");
            rest = q;
            for _ in 0..chunk_len {
                digits.push(r % base);
                r /= base;
                if rest.is_zero() && r == 0 {
                    break;
                }
            }
        }
        while digits.len() > 1 && *digits.last().unwrap() == 0 {
            digits.pop();
        }
        Self { base, digits }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> BigUint {
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * self.base + d)
    }
}

pub fn to_digits(n: u64, p: u64) -> DigitString {
    DigitString::from_u64(n, p)
}

/// A prime together with everything derived from it once: the least
/// primitive root, discrete logarithms and the first p rows of Pascal's
/// triangle mod p.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    g: u64,
    dlog: Vec<u32>,
    powers: Vec<u32>,
    // Row n occupies fd[n(n+1)/2 ..= n(n+1)/2 + n].
    fd: Vec<u16>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_CONTEXT_PRIME {
            return Err(Error::ContextTooLarge {
                p,
                max: MAX_CONTEXT_PRIME,
            });
        }
        let g = least_primitive_root(p);
        let order = (p - 1) as usize;

        let mut dlog = vec![u32::MAX; p as usize];
        let mut powers = Vec::with_capacity(order);
        let mut x = 1u64;
        for e in 0..order {
            dlog[x as usize] = e as u32;
            powers.push(x as u32);
            x = mul_mod(x, g, p);
        }

        let pu = p as usize;
        let mut fd = vec![0u16; pu * (pu + 1) / 2];
        for n in 0..pu {
            let off = n * (n + 1) / 2;
            fd[off] = 1;
            fd[off + n] = 1;
            let prev = n.saturating_sub(1) * n / 2;
            for m in 1..n {
                let s = fd[prev + m - 1] as u64 + fd[prev + m] as u64;
                fd[off + m] = (s % p) as u16;
            }
        }

        Ok(Self {
            p,
            g,
            dlog,
            powers,
            fd,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The least primitive root.
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Order of the unit group, p - 1.
    pub fn order(&self) -> usize {
        (self.p - 1) as usize
    }

    /// Discrete log base g of a nonzero residue, `None` for multiples of p.
    pub fn dlog(&self, r: u64) -> Option<u32> {
        let r = r % self.p;
        (r != 0).then(|| self.dlog[r as usize])
    }

    /// g^e mod p.
    pub fn power(&self, e: u64) -> u64 {
        self.powers[(e % (self.p - 1)) as usize] as u64
    }

    /// Row `n < p` of the fundamental domain.
    pub fn fd_row(&self, n: usize) -> &[u16] {
        assert!(
            n < self.p as usize,
            "row {n} outside the fundamental domain"
        );
        let off = n * (n + 1) / 2;
        &self.fd[off..=off + n]
    }

    /// C(n, m) mod p for n, m < p, zero when m > n.
    pub fn small_binom(&self, n: u64, m: u64) -> u64 {
        if m > n {
            0
        } else {
            self.fd_row(n as usize)[m as usize] as u64
        }
    }
}

pub fn make_context(p: u64) -> Result<PrimeContext> {
    PrimeContext::new(p)
}

/// C(n, m) mod p via Lucas' theorem.
pub fn lucas_binom(mut n: u64, mut m: u64, ctx: &PrimeContext) -> u64 {
    let p = ctx.p();
    let mut acc = 1u64;
    while m > 0 {
        let (nd, md) = (n % p, m % p);
        if md > nd {
            return 0;
        }
        acc = acc * ctx.small_binom(nd, md) % p;
        n /= p;
        m /= p;
    }
    acc
}

/// Rows of Pascal's triangle mod p produced by the additive recurrence.
pub struct PascalRows {
    p: u32,
    row: Vec<u32>,
    started: bool,
}

impl PascalRows {
    pub fn new(p: u64) -> Self {
        Self {
            p: p as u32,
            row: vec![1],
            started: false,
        }
    }

    /// Advance to the next row and return it.
    pub fn next_row(&mut self) -> &[u32] {
        if self.started {
            self.row.push(0);
            for m in (1..self.row.len()).rev() {
                let s = self.row[m] + self.row[m - 1];
                self.row[m] = if s >= self.p { s - self.p } else { s };
            }
        }
        self.started = true;
        &self.row
    }
}

/// Row n of Pascal's triangle mod p, computed by the additive recurrence.
/// This is a brute-force oracle and refuses rows past `limit`.
pub fn row_mod_p(n: u64, ctx: &PrimeContext, limit: u64) -> Result<Vec<u32>> {
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "row index",
            value: n as u128,
            limit: limit as u128,
        });
    }
    let mut rows = PascalRows::new(ctx.p());
    for _ in 0..n {
        rows.next_row();
    }
    Ok(rows.next_row().to_vec())
}
