//! Exact elements of Z[zeta_N] stored as length-N coefficient vectors.
//!
//! The representation is deliberately not canonical: sums of roots of
//! unity accumulate as plain coefficient bumps, and the cyclotomic
//! relations are only applied when deciding equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// In-place `acc += a * b`, avoiding temporaries for big integers.
pub trait MulAcc {
    fn mul_acc(&mut self, a: &Self, b: &Self);
}

impl MulAcc for i128 {
    #[inline]
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl MulAcc for BigInt {
    #[inline]
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

/// Integer coefficient type usable inside a [`CycInt`].
pub trait Coeff:
    Clone
    + MulAcc
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Signed
    + ToPrimitive
    + From<i128>
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: Clone
        + MulAcc
        + fmt::Debug
        + fmt::Display
        + PartialEq
        + Signed
        + ToPrimitive
        + From<i128>
        + Send
        + Sync
        + 'static
{
}

/// `Σ coeffs[j] · ζ^j` with `ζ = e^{2πi/N}`.
///
/// Counts of nonzero Pascal entries bound every coefficient produced by the
/// row-sum machinery, so `i128` is exact for all `u64` row indices. `BigInt`
/// is used for the unbounded paths.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt<T = i128> {
    coeffs: Vec<T>,
}

impl<T: Coeff> CycInt<T> {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Self {
            coeffs: vec![T::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, T::one())
    }

    /// `c · ζ^e`.
    pub fn monomial(order: usize, e: usize, c: T) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[e % order] = c;
        out
    }

    /// Integer constant `c · ζ^0`.
    pub fn constant(order: usize, c: i128) -> Self {
        Self::monomial(order, 0, T::from(c))
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "cyclotomic order must be positive");
        Self { coeffs }
    }

    /// Builds `Σ c ζ^e` from sparse `(e, c)` pairs; exponents wrap mod `order`.
    pub fn from_terms(order: usize, terms: &[(i64, i128)]) -> Self {
        let mut out = Self::zero(order);
        for &(e, c) in terms {
            let idx = e.rem_euclid(order as i64) as usize;
            out.coeffs[idx] = out.coeffs[idx].clone() + T::from(c);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Adds one copy of `ζ^e`.
    #[inline]
    pub fn bump(&mut self, e: usize) {
        let n = self.coeffs.len();
        let c = &mut self.coeffs[e % n];
        *c = c.clone() + T::one();
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Cyclic convolution, the product in Z[x]/(x^N - 1).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = if i + j >= n { i + j - n } else { i + j };
                out[k].mul_acc(a, b);
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplication by `ζ^e`: a cyclic shift of the coefficients.
    pub fn shift_mul(&self, e: i64) -> Self {
        let n = self.order() as i64;
        let e = e.rem_euclid(n) as usize;
        let mut out = vec![T::zero(); self.order()];
        for (j, c) in self.coeffs.iter().enumerate() {
            let k = (j + e) % self.order();
            out[k] = c.clone();
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Complex conjugate: `ζ^j ↦ ζ^{-j}`.
    pub fn conj(&self) -> Self {
        let n = self.order();
        let mut out = vec![T::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[(n - j) % n] = c.clone();
        }
        Self { coeffs: out }
    }

    /// `a · ā`, the exact squared modulus as an element of Z[ζ].
    pub fn norm_sq(&self) -> Self {
        self.try_mul(&self.conj()).expect("same order")
    }

    /// Sum of absolute coefficient values, as an f64 upper bound.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    pub fn to_bigint(&self) -> CycInt<BigInt> {
        CycInt {
            coeffs: self.coeffs.iter().map(coeff_to_bigint).collect(),
        }
    }

    /// Evaluation at `ζ = e^{2πi/N}` in double precision.
    pub fn embed(&self) -> Complex64 {
        self.embed_with(&RootTable::new(self.order()))
    }

    pub fn embed_with(&self, roots: &RootTable) -> Complex64 {
        debug_assert_eq!(roots.order(), self.order());
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, z) in self.coeffs.iter().zip(&roots.roots) {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::NAN);
            acc += z * c;
        }
        acc
    }

    /// Evaluation at `ζ` with `bits` of working precision. Returns
    /// `(re, im)`.
    pub fn embed_prec(&self, bits: usize) -> (BigFloat, BigFloat) {
        let mut cc = Consts::new().expect("astro-float constants");
        let rm = RoundingMode::ToEven;
        let n = self.order();
        // Powers of ζ by repeated multiplication lose at most ~N ulps.
        let guard = bits + 32 + 2 * (usize::BITS - n.leading_zeros()) as usize;
        let angle = cc
            .pi(guard, rm)
            .mul(&BigFloat::from_i64(2, guard), guard, rm)
            .div(&BigFloat::from_u64(n as u64, guard), guard, rm);
        let (zr, zi) = (angle.cos(guard, rm, &mut cc), angle.sin(guard, rm, &mut cc));
        let mut wr = BigFloat::from_i64(1, guard);
        let mut wi = BigFloat::from_i64(0, guard);
        let mut re = BigFloat::from_i64(0, guard);
        let mut im = BigFloat::from_i64(0, guard);
        for c in &self.coeffs {
            if !c.is_zero() {
                let cf = coeff_to_bigfloat(c, guard, &mut cc);
                re = re.add(&cf.mul(&wr, guard, rm), guard, rm);
                im = im.add(&cf.mul(&wi, guard, rm), guard, rm);
            }
            let nr = wr
                .mul(&zr, guard, rm)
                .sub(&wi.mul(&zi, guard, rm), guard, rm);
            wi = wr
                .mul(&zi, guard, rm)
                .add(&wi.mul(&zr, guard, rm), guard, rm);
            wr = nr;
        }
        (re, im)
    }

    /// Canonical form: the remainder modulo the N-th cyclotomic polynomial,
    /// of length φ(N).
    pub fn canonical(&self) -> Vec<BigInt> {
        let phi = cyclotomic_polynomial(self.order());
        reduce_mod_monic(self.coeffs.iter().map(coeff_to_bigint).collect(), &phi)
    }

    /// Exact test for `self == 0` in Z[ζ].
    pub fn is_zero_exact(&self) -> bool {
        self.is_zero_vector() || self.canonical().iter().all(Zero::is_zero)
    }

    /// Exact equality in Z[ζ].
    pub fn exact_eq(&self, other: &Self) -> Result<bool> {
        self.check_order(other)?;
        if self.coeffs == other.coeffs {
            return Ok(true);
        }
        Ok(self.try_sub(other)?.is_zero_exact())
    }

    /// Sparse rendering `c0 + c1*z^1 - c4*z^4`, with `z = zeta_N`.
    pub fn to_sparse_string(&self) -> String {
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if j == 0 {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{mag}*z^{j}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl CycInt<i128> {
    pub fn to_generic<T: Coeff>(&self) -> CycInt<T> {
        CycInt {
            coeffs: self.coeffs.iter().map(|&c| T::from(c)).collect(),
        }
    }
}

impl<T: Coeff> fmt::Debug for CycInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[N={}]({})", self.order(), self.to_sparse_string())
    }
}

impl<T: Coeff> fmt::Display for CycInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sparse_string())
    }
}

// Operator forms panic on order mismatch; use the `try_*` methods when the
// orders are not known to agree.
impl<T: Coeff> Add for &CycInt<T> {
    type Output = CycInt<T>;
    fn add(self, rhs: Self) -> CycInt<T> {
        self.try_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl<T: Coeff> Sub for &CycInt<T> {
    type Output = CycInt<T>;
    fn sub(self, rhs: Self) -> CycInt<T> {
        self.try_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl<T: Coeff> Mul for &CycInt<T> {
    type Output = CycInt<T>;
    fn mul(self, rhs: Self) -> CycInt<T> {
        self.try_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl<T: Coeff> Neg for &CycInt<T> {
    type Output = CycInt<T>;
    fn neg(self) -> CycInt<T> {
        CycInt {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

/// Precomputed `e^{2πij/N}` for j in 0..N.
#[derive(Debug, Clone)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(order: usize) -> Self {
        let roots = (0..order)
            .map(|j| {
                // Reduce by symmetry so every angle is computed in [0, π/4].
                let (s, c) = unit_sin_cos(j, order);
                Complex64::new(c, s)
            })
            .collect();
        Self { roots }
    }

    pub fn order(&self) -> usize {
        self.roots.len()
    }

    pub fn root(&self, j: usize) -> Complex64 {
        self.roots[j % self.roots.len()]
    }
}

/// `(sin, cos)` of `2πj/n`, evaluated on an argument folded into [0, π/4].
fn unit_sin_cos(j: usize, n: usize) -> (f64, f64) {
    let j = j % n;
    // Work in units of 1/(8n) of a full turn.
    let t = 8 * j;
    let octant = t / n;
    let rem = (t % n) as f64 / n as f64; // fraction of an octant
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    let (a, b) = if octant % 2 == 0 {
        let x = rem * quarter_pi;
        (x.sin(), x.cos())
    } else {
        let x = (1.0 - rem) * quarter_pi;
        (x.cos(), x.sin())
    };
    // (a, b) = (sin, cos) of the angle reduced into the first quadrant.
    match octant / 2 {
        0 => (a, b),
        1 => (b, -a),
        2 => (-a, -b),
        _ => (-b, a),
    }
}

fn coeff_to_bigint<T: Coeff>(c: &T) -> BigInt {
    if let Some(v) = c.to_i128() {
        BigInt::from(v)
    } else {
        c.to_string()
            .parse()
            .expect("integer coefficient renders as decimal")
    }
}

fn coeff_to_bigfloat<T: Coeff>(c: &T, bits: usize, cc: &mut Consts) -> BigFloat {
    match c.to_i128() {
        Some(v) => BigFloat::from_i128(v, bits),
        None => BigFloat::parse(&c.to_string(), Radix::Dec, bits, RoundingMode::ToEven, cc),
    }
}

/// Nearest double to a wide float (infinite when out of range).
pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    let mut cc = Consts::new().expect("astro-float constants");
    x.format(Radix::Dec, RoundingMode::ToEven, &mut cc)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(f64::NAN)
}

/// `ln sqrt(re^2 + im^2)` computed at `bits` of precision; `-inf` for zero.
pub fn ln_modulus(re: &BigFloat, im: &BigFloat, bits: usize) -> f64 {
    let mut cc = Consts::new().expect("astro-float constants");
    let rm = RoundingMode::ToEven;
    let sq = re.mul(re, bits, rm).add(&im.mul(im, bits, rm), bits, rm);
    if sq.is_zero() {
        return f64::NEG_INFINITY;
    }
    bigfloat_to_f64(&sq.ln(bits, rm, &mut cc)) / 2.0
}

/// Coefficients (lowest degree first) of the n-th cyclotomic polynomial,
/// via `Φ_n = Π_{d|n} (x^d - 1)^{μ(n/d)}`.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut poly = vec![BigInt::from(1)];
    // Multiply first so every division is exact.
    for &d in &divisors {
        if mobius(n / d) == 1 {
            poly = mul_x_pow_minus_one(&poly, d);
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            poly = div_x_pow_minus_one(&poly, d);
        }
    }
    // The product above yields (-1)^k Φ_n for some k; normalize to monic.
    if poly.last().is_some_and(|c| c.is_negative()) {
        poly.iter_mut().for_each(|c| *c = -c.clone());
    }
    poly
}

fn mobius(mut n: usize) -> i32 {
    let mut sign = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn mul_x_pow_minus_one(poly: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); poly.len() + d];
    for (i, c) in poly.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_x_pow_minus_one(poly: &[BigInt], d: usize) -> Vec<BigInt> {
    // poly = q · (x^d - 1); recover q from the top down.
    let deg = poly.len() - 1;
    let qlen = deg + 1 - d;
    let mut q = vec![BigInt::zero(); qlen];
    let mut rem: Vec<BigInt> = poly.to_vec();
    for i in (0..qlen).rev() {
        let c = rem[i + d].clone();
        rem[i + d] -= &c;
        rem[i] += &c;
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn reduce_mod_monic(mut a: Vec<BigInt>, m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    if a.len() <= dm {
        a.resize(dm, BigInt::zero());
        return a;
    }
    for i in (dm..a.len()).rev() {
        if a[i].is_zero() {
            continue;
        }
        let c = a[i].clone();
        for (j, mj) in m.iter().enumerate() {
            a[i - dm + j] -= &c * mj;
        }
    }
    a.truncate(dm);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |v: Vec<BigInt>| {
            v.into_iter()
                .map(|c| c.to_i64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(to_i(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of magnitude 2.
        let c105 = to_i(cyclotomic_polynomial(105));
        assert_eq!(c105.len(), 49);
        assert_eq!(c105.iter().map(|c| c.abs()).max(), Some(2));
    }

    #[test]
    fn full_root_sum_vanishes() {
        for n in 2..40 {
            let all = CycInt::<i128>::from_coeffs(vec![1; n]);
            assert!(all.embed().norm() < 1e-12, "N={n}");
            assert!(all.is_zero_exact(), "N={n}");
        }
        let one = CycInt::<i128>::from_coeffs(vec![1]);
        assert!(!one.is_zero_exact());
    }

    #[test]
    fn shift_is_root_multiplication() {
        let n = 36;
        let a = CycInt::<i128>::monomial(n, 5, 1);
        let b = CycInt::<i128>::monomial(n, 34, 1);
        assert_eq!(&a * &b, CycInt::monomial(n, 3, 1));
        assert_eq!(a.shift_mul(34), CycInt::monomial(n, 3, 1));
        assert_eq!(a.shift_mul(-6), CycInt::monomial(n, 35, 1));
        let z = CycInt::<i128>::zero(n);
        assert_eq!(&a + &z, a);
    }

    #[test]
    fn order_mismatch() {
        let a = CycInt::<i128>::one(4);
        let b = CycInt::<i128>::one(6);
        assert_eq!(a.try_add(&b), Err(Error::OrderMismatch(4, 6)));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn relations_are_detected() {
        // ζ_4^2 = -1.
        let a = CycInt::<i128>::monomial(4, 2, 1);
        let b = CycInt::<i128>::constant(4, -1);
        assert!(a.exact_eq(&b).unwrap());
        // ζ_6 - ζ_6^2 = 1.
        let c = CycInt::<i128>::from_terms(6, &[(1, 1), (2, -1)]);
        assert!(c.exact_eq(&CycInt::one(6)).unwrap());
        assert!(!c.exact_eq(&CycInt::zero(6)).unwrap());
    }

    #[test]
    fn precise_embedding_agrees_with_double() {
        let a = CycInt::<i128>::from_terms(36, &[(10, 33), (8, -3), (6, -8), (4, -21), (2, -18)]);
        let z = a.embed();
        let (re, im) = a.embed_prec(256);
        let mut cc = Consts::new().unwrap();
        let re_s = re
            .format(Radix::Dec, RoundingMode::ToEven, &mut cc)
            .unwrap();
        let im_s = im
            .format(Radix::Dec, RoundingMode::ToEven, &mut cc)
            .unwrap();
        let re_f: f64 = re_s.parse().unwrap();
        let im_f: f64 = im_s.parse().unwrap();
        assert!((re_f - z.re).abs() < 1e-12, "{re_s}");
        assert!((im_f - z.im).abs() < 1e-12, "{im_s}");
    }

    #[test]
    fn bigint_coefficients() {
        let big: BigInt = "1000000000000000000000000000000000000000000"
            .parse()
            .unwrap();
        let a = CycInt::<BigInt>::monomial(6, 1, big.clone());
        let sq = &a * &a;
        assert_eq!(sq.coeffs()[2], &big * &big);
        assert_eq!(a.conj().coeffs()[5], big);
    }
}
