//! Numeric diagnostics for the growth of `φ_χ`: the exponents θ_χ and ρ_χ,
//! the α_k maxima behind the `O(n^{θ_χ})` bound, the normalized function
//! ψ_χ, geometric growth along repunit-like indices for row-dominant
//! characters, the bounds on `|φ_χ(p)|` and convergence of `A_n(r)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{DigitString, PrimeContext};
use crate::characters::Character;
use crate::classification::{classify, Verdict};
use crate::compare::PrecisionPolicy;
use crate::cycint::{CycInt, RootTable};
use crate::error::{Error, Result};
use crate::report::fmt_sig;
use crate::sequences::{FundamentalTables, PrimeTables};

/// Default cap on the number of φ evaluations in a sweep.
pub const DEFAULT_SWEEP_CAP: u64 = 10_000_000;

/// Below this magnitude `φ_χ(p)` is checked exactly for zero.
const ZERO_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthProfile {
    pub p: u64,
    pub k: u64,
    /// `log_p φ_χ(p)`, principal branch.
    pub theta: Complex64,
    /// `max_b Re log_p T_χ(b)` over b with `T_χ(b) ≠ 0`.
    pub rho: f64,
    pub rho_b: usize,
    pub max_t_abs: f64,
    pub phi_p_abs: f64,
    /// `max_b |T_χ(b)| / |φ_χ(p)|`.
    pub q: f64,
    /// `-log_p q` clamped to at most 1; `None` when `q ≥ 1`.
    pub omega: Option<f64>,
}

fn is_exact_zero(value: &CycInt, approx: Complex64) -> bool {
    approx.norm() < ZERO_GUARD && value.is_zero_exact()
}

pub fn growth_profile(tables: &FundamentalTables) -> Result<GrowthProfile> {
    let chi = tables.chi();
    let p = chi.p();
    let ln_p = (p as f64).ln();
    let roots = RootTable::new(tables.order());

    let phi_p = tables.phi_p().embed_with(&roots);
    if is_exact_zero(tables.phi_p(), phi_p) {
        return Err(Error::UndefinedTheta { p, k: chi.k() });
    }
    let theta = phi_p.ln() / ln_p;

    let mut rho = f64::NEG_INFINITY;
    let mut rho_b = 0;
    let mut max_t_abs = 0.0f64;
    for (b, t) in tables.t_table().iter().enumerate() {
        let z = t.embed_with(&roots);
        if is_exact_zero(t, z) {
            continue;
        }
        let abs = z.norm();
        let re_log = abs.ln() / ln_p;
        if re_log > rho {
            rho = re_log;
            rho_b = b;
        }
        max_t_abs = max_t_abs.max(abs);
    }

    let phi_p_abs = phi_p.norm();
    let q = max_t_abs / phi_p_abs;
    let omega = (q < 1.0).then(|| (-(q.ln()) / ln_p).min(1.0));
    Ok(GrowthProfile {
        p,
        k: chi.k(),
        theta,
        rho,
        rho_b,
        max_t_abs,
        phi_p_abs,
        q,
        omega,
    })
}

/// Walks `n, n+1, ...` keeping `φ_χ(n)` exact.
struct PhiWalker<'a> {
    tables: &'a FundamentalTables,
    n: u64,
    phi: CycInt,
    prefix: u64,
    t_prefix: CycInt,
}

impl<'a> PhiWalker<'a> {
    fn new(tables: &'a FundamentalTables, start: u64) -> Self {
        let p = tables.p();
        Self {
            tables,
            n: start,
            phi: tables.phi_chi(start),
            prefix: start / p,
            t_prefix: tables.t_chi(start / p),
        }
    }

    fn phi(&self) -> &CycInt {
        &self.phi
    }

    /// `φ(n+1) = φ(n) + T(n)`, with `T(n) = T(n / p) · T(n mod p)`.
    fn advance(&mut self) {
        let p = self.tables.p();
        let q = self.n / p;
        if q != self.prefix {
            self.prefix = q;
            self.t_prefix = self.tables.t_chi(q);
        }
        let t_n = &self.t_prefix * self.tables.t((self.n % p) as usize);
        self.phi = &self.phi + &t_n;
        self.n += 1;
    }
}

fn check_sweep_size(p: u64, k_max: u32, cap: u64) -> Result<u64> {
    let top = (p as u128).checked_pow(k_max).unwrap_or(u128::MAX);
    if top > cap as u128 {
        return Err(Error::LimitExceeded {
            what: "sweep size p^k_max",
            value: top,
            limit: cap as u128,
        });
    }
    Ok(top as u64)
}

/// For k = 1..=k_max, the maximum of `|φ_χ(n)| / n^s` over
/// `p^{k-1} < n ≤ p^k`, with the maximizing n (smallest on ties).
pub fn normalized_maxima(
    tables: &FundamentalTables,
    s: f64,
    k_max: u32,
    cap: u64,
) -> Result<Vec<(f64, u64)>> {
    let p = tables.p();
    let top = check_sweep_size(p, k_max, cap)?;
    let roots = RootTable::new(tables.order());

    // Level boundaries: level k covers (p^{k-1}, p^k]; level 1 starts at n = 2.
    let mut bounds = vec![1u64];
    for k in 1..=k_max {
        bounds.push(p.pow(k));
    }
    let chunk = 1u64 << 14;
    let starts: Vec<u64> = (2..=top).step_by(chunk as usize).collect();
    let partials: Vec<Vec<(f64, u64)>> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk - 1).min(top);
            let mut best = vec![(f64::NEG_INFINITY, 0u64); k_max as usize];
            let mut walker = PhiWalker::new(tables, start);
            let mut level = bounds.partition_point(|&b| b < start) - 1;
            for n in start..=end {
                if n > bounds[level + 1] {
                    level += 1;
                }
                let v = walker.phi().embed_with(&roots).norm() / (n as f64).powf(s);
                let slot = &mut best[level];
                if v > slot.0 {
                    *slot = (v, n);
                }
                if n < end {
                    walker.advance();
                }
            }
            best
        })
        .collect();

    let mut out = vec![(f64::NEG_INFINITY, 0u64); k_max as usize];
    for part in partials {
        for (slot, cand) in out.iter_mut().zip(part) {
            if cand.0 > slot.0 || (cand.0 == slot.0 && cand.1 < slot.1) {
                *slot = cand;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaSequence {
    pub p: u64,
    pub k: u64,
    pub theta: Complex64,
    pub q: f64,
    pub phi_p_abs: f64,
    /// `alphas[i]` is α_{i+1}.
    pub alphas: Vec<f64>,
    pub argmax: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRow {
    pub k: u32,
    pub alpha: f64,
    /// `α_{k+1} - α_k`, absent for the last row.
    pub delta: Option<f64>,
    /// `|φ_χ(p)| · α_1 · q^k`, absent for the last row.
    pub bound_delta: Option<f64>,
}

pub const ALPHA_HEADER: [&str; 4] = ["k", "alpha_k", "delta", "bound_delta"];

impl AlphaSequence {
    pub fn rows(&self) -> Vec<AlphaRow> {
        let a1 = self.alphas.first().copied().unwrap_or(f64::NAN);
        (0..self.alphas.len())
            .map(|i| {
                let k = i as u32 + 1;
                let next = self.alphas.get(i + 1);
                AlphaRow {
                    k,
                    alpha: self.alphas[i],
                    delta: next.map(|a| a - self.alphas[i]),
                    bound_delta: next.map(|_| self.phi_p_abs * a1 * self.q.powi(k as i32)),
                }
            })
            .collect()
    }
}

impl AlphaRow {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            fmt_sig(self.alpha),
            self.delta.map(fmt_sig).unwrap_or_default(),
            self.bound_delta.map(fmt_sig).unwrap_or_default(),
        ]
    }
}

/// α_k = max `|φ_χ(n) / n^{θ_χ}|` over `p^{k-1} < n ≤ p^k`.
pub fn alpha_sequence(tables: &FundamentalTables, k_max: u32, cap: u64) -> Result<AlphaSequence> {
    let profile = growth_profile(tables)?;
    let maxima = normalized_maxima(tables, profile.theta.re, k_max, cap)?;
    Ok(AlphaSequence {
        p: profile.p,
        k: profile.k,
        theta: profile.theta,
        q: profile.q,
        phi_p_abs: profile.phi_p_abs,
        alphas: maxima.iter().map(|m| m.0).collect(),
        argmax: maxima.iter().map(|m| m.1).collect(),
    })
}

/// `n^θ = e^{θ ln n}` for real `n > 0`.
pub fn real_pow_complex(n: f64, theta: Complex64) -> Complex64 {
    (theta * n.ln()).exp()
}

/// `ψ_χ(x)` at `x = numerator / p^j`, evaluated at the integer numerator
/// since `ψ(p x) = ψ(x)`.
pub fn psi(tables: &FundamentalTables, numerator: u64, _j: u32) -> Result<Complex64> {
    let profile = growth_profile(tables)?;
    Ok(psi_at(tables, numerator, profile.theta))
}

pub fn psi_at(tables: &FundamentalTables, n: u64, theta: Complex64) -> Complex64 {
    tables.phi_chi(n).embed() / real_pow_complex(n as f64, theta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityRow {
    pub level: u32,
    pub h: f64,
    pub max_delta: f64,
}

pub const PSI_HEADER: [&str; 3] = ["b", "h", "max_delta"];

impl ContinuityRow {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.level.to_string(),
            fmt_sig(self.h),
            fmt_sig(self.max_delta),
        ]
    }
}

/// For each level b, the largest `|ψ(x + h) - ψ(x)|` over the grid
/// `x ∈ [1, p)` with step `h = p^{-b}`.
pub fn psi_continuity(
    tables: &FundamentalTables,
    levels: std::ops::RangeInclusive<u32>,
    cap: u64,
) -> Result<Vec<ContinuityRow>> {
    let profile = growth_profile(tables)?;
    let p = tables.p();
    let roots = RootTable::new(tables.order());
    levels
        .map(|b| {
            let lo = p.pow(b);
            let hi = check_sweep_size(p, b + 1, cap)?;
            let mut walker = PhiWalker::new(tables, lo);
            let psi_of = |w: &PhiWalker, n: u64| {
                w.phi().embed_with(&roots) / real_pow_complex(n as f64, profile.theta)
            };
            let mut prev = psi_of(&walker, lo);
            let mut max_delta = 0.0f64;
            for n in lo + 1..=hi {
                walker.advance();
                let cur = psi_of(&walker, n);
                max_delta = max_delta.max((cur - prev).norm());
                prev = cur;
            }
            Ok(ContinuityRow {
                level: b,
                h: (p as f64).powi(-(b as i32)),
                max_delta,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRow {
    pub k: u32,
    /// `n_k = b (p^k - 1) / (p - 1)`, decimal.
    pub n_k: String,
    /// `|φ_χ(n_k + 1)| / (n_k + 1)^{Re θ}`.
    pub ratio_next: f64,
    /// `|φ_χ(n_k)| / n_k^{Re θ}`.
    pub ratio_at: f64,
}

pub const WITNESS_HEADER: [&str; 4] = ["k", "n_k", "ratio_next", "ratio_at"];

impl WitnessRow {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            self.n_k.clone(),
            fmt_sig(self.ratio_next),
            fmt_sig(self.ratio_at),
        ]
    }
}

/// `ln |x|` for an exact cyclotomic integer, evaluated with enough bits to
/// survive cancellation between large coefficients.
fn ln_abs_precise(x: &CycInt<BigInt>) -> f64 {
    let l1 = x.l1_norm();
    let bits = 96 + l1.max(1.0).log2().ceil() as usize;
    let (re, im) = x.embed_prec(bits);
    crate::cycint::ln_modulus(&re, &im, bits)
}

fn ln_biguint_digits(d: &DigitString) -> f64 {
    // Leading digits carry all the precision an f64 can hold.
    let p = d.base() as f64;
    let digits = d.digits();
    let take = digits.len().min(24);
    let mut mantissa = 0.0f64;
    for &dig in digits.iter().rev().take(take) {
        mantissa = mantissa * p + dig as f64;
    }
    mantissa.ln() + (digits.len() - take) as f64 * p.ln()
}

/// Growth of `φ_χ` along `n_k = b + b p + ... + b p^{k-1}` for a
/// row-dominant character with witness b.
pub fn row_dominant_witness(
    tables: &FundamentalTables,
    policy: &PrecisionPolicy,
    k_max: u32,
) -> Result<(usize, Vec<WitnessRow>)> {
    let chi = tables.chi();
    let rec = classify(tables, policy);
    let b = match (rec.verdict, rec.witness) {
        (Verdict::RowDominant, Some(b)) => b,
        _ => {
            return Err(Error::NotRowDominant {
                p: chi.p(),
                k: chi.k(),
            })
        }
    };
    let profile = growth_profile(tables)?;
    let p = chi.p();
    let re_theta = profile.theta.re;
    let rows = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let n_k = DigitString::from_biguint(&repunit(p, b as u64, k), p);
            let next = DigitString::from_biguint(&(n_k.value() + 1u32), p);
            let phi_at: CycInt<BigInt> = tables.phi_chi_digits(&n_k);
            let phi_next: CycInt<BigInt> = tables.phi_chi_digits(&next);
            let ratio = |phi: &CycInt<BigInt>, n: &DigitString| {
                (ln_abs_precise(phi) - re_theta * ln_biguint_digits(n)).exp()
            };
            WitnessRow {
                k,
                n_k: n_k.value().to_string(),
                ratio_next: ratio(&phi_next, &next),
                ratio_at: ratio(&phi_at, &n_k),
            }
        })
        .collect();
    Ok((b, rows))
}

fn repunit(p: u64, b: u64, k: u32) -> num_bigint::BigUint {
    let mut acc = num_bigint::BigUint::from(0u32);
    for _ in 0..k {
        acc = acc * p + b;
    }
    acc
}

/// Growth witness for a non-row-regular character: maxima of
/// `|φ_χ(n)| / n^{ρ_χ + ε}` per level `(p^{k-1}, p^k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoWitness {
    pub p: u64,
    pub k: u64,
    pub rho: f64,
    pub eps: f64,
    /// Whether `|φ_χ(p)| ≤ p^{ρ_χ + ε}`, the hypothesis the bound relies on.
    pub hypothesis_holds: bool,
    pub level_maxima: Vec<f64>,
    /// Largest ratio seen over the whole sweep.
    pub constant: f64,
}

pub fn rho_witness(
    tables: &FundamentalTables,
    eps: f64,
    k_max: u32,
    cap: u64,
) -> Result<RhoWitness> {
    let profile = growth_profile(tables)?;
    let s = profile.rho + eps;
    let maxima = normalized_maxima(tables, s, k_max, cap)?;
    let level_maxima: Vec<f64> = maxima.iter().map(|m| m.0).collect();
    Ok(RhoWitness {
        p: profile.p,
        k: profile.k,
        rho: profile.rho,
        eps,
        hypothesis_holds: profile.phi_p_abs <= (profile.p as f64).powf(s),
        constant: level_maxima
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max),
        level_maxima,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: u64,
    /// `p(p+1)/2`.
    pub trivial: f64,
    /// The Weil-based bound with exact `⌊√p⌋`.
    pub weil: f64,
    /// `(p^2 - p√p + 5p - √p) / 2`.
    pub weil_simple: f64,
    pub max_abs_phi: f64,
    pub max_abs_phi_k: u64,
    /// Number of `(χ, n)` column sums checked against `n√p`.
    pub columns_checked: usize,
    /// Largest `|Σ_m χ(C(m, n))| / (n√p)` over the checked columns.
    pub worst_column_ratio: f64,
}

pub const BOUNDS_HEADER: [&str; 5] = ["p", "trivial", "weil", "weil_simple", "max_abs_phi"];

impl BoundReport {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            fmt_sig(self.trivial),
            fmt_sig(self.weil),
            fmt_sig(self.weil_simple),
            fmt_sig(self.max_abs_phi),
        ]
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// The Weil-based bound on `|φ_χ(p)|`, term order as in its closed form.
pub fn weil_bound(p: u64) -> f64 {
    let pf = p as f64;
    let r = pf.sqrt();
    let s = isqrt(p) as f64;
    (pf * pf - 2.0 * pf * s + r * s * s + pf + r * s + s * s - 2.0 * r + s) / 2.0
}

pub fn weil_simple_bound(p: u64) -> f64 {
    let pf = p as f64;
    let r = pf.sqrt();
    (pf * pf - pf * r + 5.0 * pf - r) / 2.0
}

/// `Σ_{m<p} χ(C(m, n))` for a column `n < p`.
pub fn column_sum(chi: &Character, n: u64) -> CycInt {
    let ctx = chi.ctx();
    let mut acc = CycInt::zero(chi.order());
    for m in n..ctx.p() {
        let v = ctx.small_binom(m, n);
        let d = ctx.dlog(v).expect("fundamental domain has no zeros");
        acc.bump(chi.exponent_of_dlog(d) as usize);
    }
    acc
}

pub fn bound_report(ctx: &Arc<PrimeContext>) -> Result<BoundReport> {
    let p = ctx.p();
    if p < 3 {
        return Err(Error::InvalidArgument(format!(
            "bound report needs p >= 3, got {p}"
        )));
    }
    let roots = RootTable::new(ctx.order());
    let s = isqrt(p);
    let sqrt_p = (p as f64).sqrt();
    let per_char: Vec<Result<(f64, u64, usize, f64)>> = (1..p - 1)
        .into_par_iter()
        .map(|k| {
            let chi = Character::new(Arc::clone(ctx), k)?;
            let t = FundamentalTables::build(&chi);
            let abs_phi = t.phi_p().embed_with(&roots).norm();
            let mut worst = 0.0f64;
            let mut checked = 0;
            for n in 2..=s {
                let sum = column_sum(&chi, n).embed_with(&roots).norm();
                let bound = n as f64 * sqrt_p;
                if sum > bound * (1.0 + 1e-12) {
                    return Err(Error::WeilViolation {
                        p,
                        k,
                        n,
                        value: sum,
                        bound,
                    });
                }
                worst = worst.max(sum / bound);
                checked += 1;
            }
            Ok((abs_phi, k, checked, worst))
        })
        .collect();

    let mut max_abs_phi = 0.0f64;
    let mut max_k = 0;
    let mut columns_checked = 0;
    let mut worst_column_ratio = 0.0f64;
    for item in per_char {
        let (abs_phi, k, checked, worst) = item?;
        if abs_phi > max_abs_phi {
            max_abs_phi = abs_phi;
            max_k = k;
        }
        columns_checked += checked;
        worst_column_ratio = worst_column_ratio.max(worst);
    }
    Ok(BoundReport {
        p,
        trivial: (p * (p + 1) / 2) as f64,
        weil: weil_bound(p),
        weil_simple: weil_simple_bound(p),
        max_abs_phi,
        max_abs_phi_k: max_k,
        columns_checked,
        worst_column_ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarthetaReport {
    pub p: u64,
    pub eps: f64,
    /// `max(max_{χ≠χ0} Re θ_χ, 1 + ε)`.
    pub vartheta: f64,
    pub max_re_theta: f64,
    /// `max_{χ≠χ0} ρ_χ + ε`, the exponent used for non-row-regular characters.
    pub max_rho_plus_eps: f64,
    /// `log_p(p(p+1)/2)`.
    pub principal_exponent: f64,
    pub undefined: Vec<u64>,
}

pub fn vartheta(all: &PrimeTables, eps: f64) -> Result<VarthetaReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {eps}"
        )));
    }
    let p = all.ctx().p();
    let mut max_re_theta = f64::NEG_INFINITY;
    let mut max_rho = f64::NEG_INFINITY;
    let mut undefined = Vec::new();
    for t in all.tables().iter().skip(1) {
        match growth_profile(t) {
            Ok(g) => {
                max_re_theta = max_re_theta.max(g.theta.re);
                max_rho = max_rho.max(g.rho);
            }
            Err(Error::UndefinedTheta { k, .. }) => undefined.push(k),
            Err(e) => return Err(e),
        }
    }
    let pf = p as f64;
    Ok(VarthetaReport {
        p,
        eps,
        vartheta: max_re_theta.max(1.0 + eps),
        max_re_theta,
        max_rho_plus_eps: max_rho + eps,
        principal_exponent: (pf * (pf + 1.0) / 2.0).ln() / pf.ln(),
        undefined,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub k: u32,
    pub n: u64,
    pub a: u128,
    pub phi: u128,
    /// `A_n(r) (p - 1) / φ_p(n)`.
    pub ratio: f64,
}

pub const RATIO_HEADER: [&str; 5] = ["k", "n", "A", "phi", "ratio"];

impl RatioRow {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            self.n.to_string(),
            self.a.to_string(),
            self.phi.to_string(),
            fmt_sig(self.ratio),
        ]
    }
}

/// How the row index grows with k along a convergence ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ladder {
    /// n = p^k.
    PrimePower,
    /// n = ⌊c · p^k⌋.
    Scaled(f64),
}

impl Ladder {
    pub fn index(&self, p: u64, k: u32) -> u64 {
        let pk = p.pow(k);
        match *self {
            Self::PrimePower => pk,
            Self::Scaled(c) => (c * pk as f64).floor() as u64,
        }
    }
}

/// `A_n(r) (p - 1) / φ_p(n)` along a ladder of row indices, with A from
/// the explicit formula.
pub fn convergence_ratio(
    all: &PrimeTables,
    r: u64,
    k_max: u32,
    ladder: Ladder,
) -> Result<Vec<RatioRow>> {
    let p = all.ctx().p();
    if r == 0 || r >= p {
        return Err(Error::ResidueOutOfRange { p, r });
    }
    (0..=k_max)
        .map(|k| {
            let n = ladder.index(p, k);
            let a = all.a_count_formula(n, r)?;
            let phi = all.get(0).phi_chi(n).coeffs().iter().sum::<i128>() as u128;
            let ratio = if phi == 0 {
                f64::NAN
            } else {
                a as f64 * (p - 1) as f64 / phi as f64
            };
            Ok(RatioRow {
                k,
                n,
                a,
                phi,
                ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_context;
    use crate::characters::{character, group};

    fn ctx(p: u64) -> Arc<PrimeContext> {
        Arc::new(make_context(p).unwrap())
    }

    fn tables(p: u64, k: u64) -> FundamentalTables {
        FundamentalTables::build(&character(&ctx(p), k).unwrap())
    }

    #[test]
    fn principal_profiles() {
        let g = growth_profile(&tables(2, 0)).unwrap();
        assert!((g.theta.re - 3f64.log2()).abs() < 1e-12);
        assert!(g.theta.im.abs() < 1e-12);
        for p in [3u64, 5, 7, 37] {
            let g = growth_profile(&tables(p, 0)).unwrap();
            let pf = p as f64;
            assert!((g.q - 2.0 / (pf + 1.0)).abs() < 1e-12);
            let omega = ((pf + 1.0) / 2.0).ln() / pf.ln();
            assert!((g.omega.unwrap() - omega.min(1.0)).abs() < 1e-12);
            assert!((g.rho - 1.0).abs() < 1e-12);
            assert_eq!(g.rho_b, p as usize - 1);
        }
    }

    #[test]
    fn p37_profile() {
        let g = growth_profile(&tables(37, 10)).unwrap();
        assert!((g.rho - 1.0).abs() < 1e-12);
        assert_eq!(g.rho_b, 36);
        assert!(g.q > 1.0);
        assert_eq!(g.omega, None);
    }

    #[test]
    fn rho_at_most_one() {
        for p in [3u64, 5, 7, 11, 13, 37] {
            for chi in group(&ctx(p)) {
                let g = growth_profile(&FundamentalTables::build(&chi)).unwrap();
                assert!(g.rho <= 1.0 + 1e-12);
                assert!(g.theta.im > -std::f64::consts::PI && g.theta.im <= std::f64::consts::PI);
            }
        }
    }

    #[test]
    fn prime_powers_normalize_to_one() {
        for p in [3u64, 5, 7] {
            for chi in group(&ctx(p)) {
                let t = FundamentalTables::build(&chi);
                let g = growth_profile(&t).unwrap();
                for k in 1..=6 {
                    let n = p.pow(k);
                    let v = psi_at(&t, n, g.theta);
                    assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-9, "p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn psi_scale_invariance() {
        let t = tables(7, 2);
        let g = growth_profile(&t).unwrap();
        for n in [1u64, 2, 3, 10, 48, 100, 2024] {
            let a = psi_at(&t, n, g.theta);
            let b = psi_at(&t, 7 * n, g.theta);
            let c = psi_at(&t, 49 * n, g.theta);
            assert!((a - b).norm() < 1e-9 && (a - c).norm() < 1e-9);
            assert_eq!(psi(&t, 7 * n, 1).unwrap(), b);
        }
    }

    #[test]
    fn alpha_brackets_small() {
        let t = tables(5, 0);
        let seq = alpha_sequence(&t, 6, DEFAULT_SWEEP_CAP).unwrap();
        assert!(seq.alphas[0] >= 1.0 - 1e-12);
        for row in seq.rows() {
            if let (Some(d), Some(b)) = (row.delta, row.bound_delta) {
                assert!(d >= -1e-12 && d < b, "{row:?}");
            }
        }
        assert!(matches!(
            alpha_sequence(&t, 11, DEFAULT_SWEEP_CAP),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn maxima_match_direct_evaluation() {
        let t = tables(3, 1);
        let s = 1.3;
        let got = normalized_maxima(&t, s, 9, DEFAULT_SWEEP_CAP).unwrap();
        for (i, &(v, n)) in got.iter().enumerate() {
            let k = i as u32 + 1;
            let lo = 3u64.pow(k - 1) + 1;
            let hi = 3u64.pow(k);
            let mut best = (f64::NEG_INFINITY, 0);
            for m in lo.max(2)..=hi {
                let x = t.phi_chi(m).embed().norm() / (m as f64).powf(s);
                if x > best.0 {
                    best = (x, m);
                }
            }
            assert_eq!(n, best.1);
            assert!((v - best.0).abs() < 1e-12 * best.0.max(1.0));
        }
    }

    #[test]
    fn witness_growth() {
        let policy = PrecisionPolicy::default();
        let t = tables(37, 10);
        let (b, rows) = row_dominant_witness(&t, &policy, 12).unwrap();
        assert_eq!(b, 36);
        assert_eq!(rows[0].n_k, "36");
        // n_k + 1 = 37^k, where the normalized value is exactly 1.
        for r in &rows {
            assert!((r.ratio_next - 1.0).abs() < 1e-9, "{r:?}");
        }
        for w in rows.windows(2).skip(1) {
            assert!(w[1].ratio_at > w[0].ratio_at);
        }
        assert!(matches!(
            row_dominant_witness(&tables(37, 1), &policy, 4),
            Err(Error::NotRowDominant { .. })
        ));
    }

    #[test]
    fn bound_reports() {
        let r7 = bound_report(&ctx(7)).unwrap();
        assert_eq!(r7.trivial, 28.0);
        let r37 = bound_report(&ctx(37)).unwrap();
        let root = 37f64.sqrt();
        let simple = (1369.0 - 37.0 * root + 185.0 - root) / 2.0;
        assert!((r37.weil_simple - simple).abs() < 1e-9);
        assert!(r37.max_abs_phi >= 33.877);
        assert!(r37.max_abs_phi < r37.trivial);
        assert!(r37.max_abs_phi <= r37.weil);
        assert!(r37.weil < r37.weil_simple);
        assert_eq!(r37.columns_checked, 35 * 5);
        assert!(bound_report(&ctx(2)).is_err());
    }

    #[test]
    fn weil_closed_form_matches_its_sum() {
        // p + Σ_{n=2}^{s} n√p + Σ_{n=s+1}^{p-1} (p - n), summed term by term.
        for p in [3u64, 5, 7, 11, 37, 101, 199] {
            let s = isqrt(p);
            let r = (p as f64).sqrt();
            let mut total = p as f64;
            for n in 2..=s {
                total += n as f64 * r;
            }
            for n in s + 1..p {
                total += (p - n) as f64;
            }
            assert!((total - weil_bound(p)).abs() < 1e-9 * total, "p={p}");
        }
    }

    #[test]
    fn vartheta_bounds() {
        let all = PrimeTables::build(&ctx(37));
        let v = vartheta(&all, 0.01).unwrap();
        assert!(v.vartheta >= 1.01);
        assert!(v.vartheta < v.principal_exponent);
        let mut manual = f64::NEG_INFINITY;
        for t in all.tables().iter().skip(1) {
            manual = manual.max(growth_profile(t).unwrap().theta.re);
        }
        assert_eq!(v.max_re_theta, manual);
        assert!(vartheta(&all, 0.0).is_err());
    }

    #[test]
    fn ratio_table() {
        let all = PrimeTables::build(&ctx(5));
        let rows = convergence_ratio(&all, 1, 3, Ladder::PrimePower).unwrap();
        assert_eq!((rows[0].n, rows[0].a, rows[0].phi), (1, 1, 1));
        assert_eq!(rows[0].ratio, 4.0);
        let rows2 = convergence_ratio(&all, 2, 3, Ladder::PrimePower).unwrap();
        assert_eq!(rows2[0].ratio, 0.0);
        for k in 0..=3u32 {
            let n = 5u64.pow(k);
            let total: u128 = (1..5)
                .map(|r| convergence_ratio(&all, r, 3, Ladder::PrimePower).unwrap()[k as usize].a)
                .sum();
            assert_eq!(total, all.get(0).phi_chi(n).coeffs()[0] as u128);
        }
    }
}
