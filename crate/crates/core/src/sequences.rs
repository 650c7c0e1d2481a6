//! Character-twisted row sums `T_χ(n) = Σ_j χ(C(n, j))`, their prefix sums
//! `φ_χ(n) = Σ_{u<n} T_χ(u)`, and residue occurrence counts.
//!
//! Everything beyond the first p rows is obtained from the fundamental
//! domain through base-p digits: `T_χ` is multiplicative over digits and
//! `φ_χ` follows the two-part recursion
//! `φ(m p^k) = φ(m) φ(p^k)`, `φ(m p^k + n) = φ(m p^k) + T(m) φ(n)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{DigitString, PascalRows, PrimeContext};
use crate::characters::{group, Character};
use crate::cycint::{Coeff, CycInt, RootTable};
use crate::error::{Error, Result};

/// Exact `T_χ(b)` for `b < p` and `φ_χ(b)` for `b ≤ p`.
#[derive(Debug, Clone)]
pub struct FundamentalTables {
    chi: Character,
    t: Vec<CycInt>,
    phi: Vec<CycInt>,
}

impl FundamentalTables {
    pub fn build(chi: &Character) -> Self {
        let ctx = chi.ctx();
        let p = ctx.p() as usize;
        let n = chi.order();
        let mut t = Vec::with_capacity(p);
        for b in 0..p {
            let mut acc = CycInt::zero(n);
            for &v in ctx.fd_row(b) {
                let d = ctx.dlog(v as u64).expect("fundamental domain has no zeros");
                acc.bump(chi.exponent_of_dlog(d) as usize);
            }
            t.push(acc);
        }
        let mut phi = Vec::with_capacity(p + 1);
        phi.push(CycInt::zero(n));
        for b in 0..p {
            let next = &phi[b] + &t[b];
            phi.push(next);
        }
        Self {
            chi: chi.clone(),
            t,
            phi,
        }
    }

    pub fn chi(&self) -> &Character {
        &self.chi
    }

    pub fn p(&self) -> u64 {
        self.chi.p()
    }

    pub fn order(&self) -> usize {
        self.chi.order()
    }

    /// `T_χ(b)` for a single digit `b < p`.
    pub fn t(&self, b: usize) -> &CycInt {
        &self.t[b]
    }

    /// `φ_χ(b)` for `b ≤ p`.
    pub fn phi(&self, b: usize) -> &CycInt {
        &self.phi[b]
    }

    /// `φ_χ(p)`, the sum over the whole fundamental domain.
    pub fn phi_p(&self) -> &CycInt {
        &self.phi[self.p() as usize]
    }

    pub fn t_table(&self) -> &[CycInt] {
        &self.t
    }

    pub fn phi_table(&self) -> &[CycInt] {
        &self.phi
    }

    /// `T_χ(n)` as the product of single-digit row sums.
    pub fn t_chi(&self, n: u64) -> CycInt {
        let p = self.p();
        let mut n = n;
        let mut acc = self.t[(n % p) as usize].clone();
        n /= p;
        while n > 0 {
            acc = &acc * &self.t[(n % p) as usize];
            n /= p;
        }
        acc
    }

    pub fn t_chi_digits<T: Coeff>(&self, digits: &DigitString) -> CycInt<T> {
        debug_assert_eq!(digits.base(), self.p());
        let mut acc = CycInt::<T>::one(self.order());
        for &d in digits.digits() {
            acc = &acc * &self.t[d as usize].to_generic();
        }
        acc
    }

    /// `φ_χ(n)` by the digit recursion, most significant digit first.
    pub fn phi_chi(&self, n: u64) -> CycInt {
        if n == 0 {
            return CycInt::zero(self.order());
        }
        let p = self.p();
        let mut digits = Vec::new();
        let mut m = n;
        while m > 0 {
            digits.push((m % p) as usize);
            m /= p;
        }
        let mut big_phi = CycInt::zero(self.order());
        let mut big_t = CycInt::one(self.order());
        let phi_p = self.phi_p();
        for &d in digits.iter().rev() {
            let next_phi = &(&big_phi * phi_p) + &(&big_t * &self.phi[d]);
            big_t = &big_t * &self.t[d];
            big_phi = next_phi;
        }
        big_phi
    }

    pub fn phi_chi_digits<T: Coeff>(&self, digits: &DigitString) -> CycInt<T> {
        self.t_phi_digits(digits).1
    }

    /// `(T_χ(n), φ_χ(n))` from a single pass over the digits.
    pub fn t_phi_digits<T: Coeff>(&self, digits: &DigitString) -> (CycInt<T>, CycInt<T>) {
        debug_assert_eq!(digits.base(), self.p());
        let n = self.order();
        let phi_p: CycInt<T> = self.phi_p().to_generic();
        let mut big_phi = CycInt::<T>::zero(n);
        let mut big_t = CycInt::<T>::one(n);
        for &d in digits.digits().iter().rev() {
            let d = d as usize;
            let next_phi = &(&big_phi * &phi_p) + &(&big_t * &self.phi[d].to_generic());
            big_t = &big_t * &self.t[d].to_generic();
            big_phi = next_phi;
        }
        (big_t, big_phi)
    }
}

pub fn build_tables(chi: &Character) -> FundamentalTables {
    FundamentalTables::build(chi)
}

/// Occurrence counts indexed by residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<u128>,
}

impl CountVector {
    pub fn zeros(p: u64) -> Self {
        Self {
            counts: vec![0; p as usize],
        }
    }

    pub fn from_counts(counts: Vec<u128>) -> Self {
        Self { counts }
    }

    pub fn get(&self, r: u64) -> u128 {
        self.counts[(r % self.counts.len() as u64) as usize]
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }
}

/// `a_n(r)` for every residue r.
///
/// Row n is the digitwise product of fundamental-domain rows, so its residue
/// histogram is the multiplicative convolution of per-digit histograms. The
/// cost is O(len_p(n) · p^2) regardless of how many entries the row holds.
pub fn a_row(n: u64, ctx: &PrimeContext) -> CountVector {
    let p = ctx.p();
    let mut dist = vec![0u128; p as usize];
    dist[1 % p as usize] = 1;
    if p == 2 {
        // Every entry of a row mod 2 with admissible digits is 1.
        let mut m = n;
        let mut count = 1u128;
        loop {
            count *= (m % 2 + 1) as u128;
            m /= 2;
            if m == 0 {
                break;
            }
        }
        let mut out = CountVector::zeros(2);
        out.counts[1] = count;
        out.counts[0] = n as u128 + 1 - count;
        return out;
    }
    let mut m = n;
    loop {
        let d = (m % p) as usize;
        let mut next = vec![0u128; p as usize];
        for (r, &c) in dist.iter().enumerate() {
            if c == 0 || r == 0 {
                continue;
            }
            for &v in ctx.fd_row(d) {
                next[(r as u64 * v as u64 % p) as usize] += c;
            }
        }
        dist = next;
        m /= p;
        if m == 0 {
            break;
        }
    }
    let nonzero: u128 = dist.iter().sum();
    dist[0] = n as u128 + 1 - nonzero;
    CountVector { counts: dist }
}

/// `A_n(r)` for every residue by scanning the first n rows directly.
pub fn a_count_bruteforce(n: u64, ctx: &PrimeContext, limit: u64) -> Result<CountVector> {
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "row count",
            value: n as u128,
            limit: limit as u128,
        });
    }
    let mut out = CountVector::zeros(ctx.p());
    let mut rows = PascalRows::new(ctx.p());
    for _ in 0..n {
        for &v in rows.next_row() {
            out.counts[v as usize] += 1;
        }
    }
    Ok(out)
}

/// Tables for every character of one prime.
#[derive(Debug, Clone)]
pub struct PrimeTables {
    ctx: Arc<PrimeContext>,
    tables: Vec<FundamentalTables>,
    roots: RootTable,
}

impl PrimeTables {
    pub fn build(ctx: &Arc<PrimeContext>) -> Self {
        let tables = group(ctx)
            .par_iter()
            .map(FundamentalTables::build)
            .collect();
        Self {
            ctx: Arc::clone(ctx),
            tables,
            roots: RootTable::new(ctx.order()),
        }
    }

    pub fn ctx(&self) -> &Arc<PrimeContext> {
        &self.ctx
    }

    pub fn tables(&self) -> &[FundamentalTables] {
        &self.tables
    }

    pub fn get(&self, k: u64) -> &FundamentalTables {
        &self.tables[k as usize]
    }

    pub fn roots(&self) -> &RootTable {
        &self.roots
    }

    /// `φ_χ(n)` for every character, in index order.
    pub fn phi_all(&self, n: u64) -> Vec<CycInt> {
        self.tables.iter().map(|t| t.phi_chi(n)).collect()
    }

    /// `A_n(r)` through the explicit formula `(1/(p-1)) Σ_χ χ̄(r) φ_χ(n)`.
    pub fn a_count_formula(&self, n: u64, r: u64) -> Result<u128> {
        let phis = self.phi_all(n);
        self.a_count_from_phis(n, r, &phis)
    }

    /// `A_n(r)` for r in 1..p from one set of `φ_χ(n)` values.
    pub fn a_counts_formula(&self, n: u64) -> Result<Vec<u128>> {
        let phis = self.phi_all(n);
        (1..self.ctx.p())
            .map(|r| self.a_count_from_phis(n, r, &phis))
            .collect()
    }

    pub fn a_count_from_phis(&self, n: u64, r: u64, phis: &[CycInt]) -> Result<u128> {
        let p = self.ctx.p();
        if r == 0 || r >= p {
            return Err(Error::ResidueOutOfRange { p, r });
        }
        let order = self.ctx.order();
        let d = self.ctx.dlog(r).expect("nonzero residue") as i64;
        // Σ_χ χ̄(r) φ_χ(n), exactly.
        let mut sum = CycInt::zero(order);
        for (k, phi) in phis.iter().enumerate() {
            let shifted = phi.shift_mul(-(k as i64) * d);
            sum = &sum + &shifted;
        }

        let denom = (p - 1) as f64;
        let z = sum.embed_with(&self.roots) / denom;
        let err = 8.0 * order as f64 * f64::EPSILON * sum.l1_norm() / denom;
        if err < 1e-7 {
            let rounded = z.re.round();
            if z.im.abs() < 1e-6 && (z.re - rounded).abs() < 1e-6 && rounded >= 0.0 {
                return Ok(rounded as u128);
            }
        }
        exact_count(&sum, p, n, r)
    }
}

/// Escalation path: reduce the exact sum and read off the constant term.
fn exact_count(sum: &CycInt, p: u64, n: u64, r: u64) -> Result<u128> {
    let canon = sum.canonical();
    let violation = |detail: String| Error::IntegralityViolation {
        n: n.to_string(),
        r,
        detail,
    };
    if canon[1..].iter().any(|c| !c.is_zero()) {
        return Err(violation("sum is not a rational integer".into()));
    }
    let c = &canon[0];
    let den = BigInt::from(p - 1);
    if c.is_negative() || !(c % &den).is_zero() {
        return Err(violation(format!(
            "constant term {c} not divisible by {den}"
        )));
    }
    (c / den)
        .to_u128()
        .ok_or_else(|| violation("count exceeds u128".into()))
}

pub fn a_count_formula(n: u64, r: u64, all: &PrimeTables) -> Result<u128> {
    all.a_count_formula(n, r)
}
