//! Deciding `|a|` vs `|b|` for cyclotomic integers.
//!
//! Double precision settles almost every comparison. Near-ties escalate to
//! wider floats on the exact difference `a·ā - b·b̄`, and if that is still
//! inconclusive the difference is reduced modulo the cyclotomic polynomial
//! to test for a genuine tie.

use std::cmp::Ordering;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::cycint::{Coeff, CycInt, RootTable};

/// Environment variable holding a comma-separated ladder of precisions in
/// bits, e.g. `128,256,512`. An optional `tol=<x>` entry overrides the
/// double-precision escalation threshold.
pub const PRECISION_ENV: &str = "PASCALCHAR_PRECISION";

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionPolicy {
    /// Relative gap below which a double-precision verdict is not trusted.
    pub double_tol: f64,
    /// Extended precisions tried in order after double precision.
    pub ladder_bits: Vec<usize>,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            double_tol: 1e-9,
            ladder_bits: vec![128, 256],
        }
    }
}

impl PrecisionPolicy {
    /// Parses a ladder specification such as `"tol=1e-12,128,256,1024"`.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let mut policy = Self {
            ladder_bits: Vec::new(),
            ..Self::default()
        };
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some(tol) = item.strip_prefix("tol=") {
                policy.double_tol = tol.parse().map_err(|_| format!("bad tolerance {tol:?}"))?;
                if !(policy.double_tol > 0.0) {
                    return Err(format!("tolerance must be positive, got {tol}"));
                }
            } else {
                let bits: usize = item
                    .parse()
                    .map_err(|_| format!("bad precision {item:?}"))?;
                if bits < 64 {
                    return Err(format!("ladder precision {bits} is below 64 bits"));
                }
                policy.ladder_bits.push(bits);
            }
        }
        if policy.ladder_bits.is_empty() {
            policy.ladder_bits = Self::default().ladder_bits;
        }
        Ok(policy)
    }

    /// The default policy, overridden by [`PRECISION_ENV`] when set.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(PRECISION_ENV) {
            Ok(spec) => Self::parse(&spec),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn describe(&self) -> String {
        let bits: Vec<String> = self.ladder_bits.iter().map(|b| b.to_string()).collect();
        format!("tol={:e},{}", self.double_tol, bits.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum AbsOrdering {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl AbsOrdering {
    pub fn reverse(self) -> Self {
        match self {
            Self::Less => Self::Greater,
            Self::Greater => Self::Less,
            other => other,
        }
    }
}

impl From<Ordering> for AbsOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Self::Less,
            Ordering::Equal => Self::Equal,
            Ordering::Greater => Self::Greater,
        }
    }
}

/// Compares `|a|` with `|b|`.
pub fn abs_compare<T: Coeff>(
    a: &CycInt<T>,
    b: &CycInt<T>,
    policy: &PrecisionPolicy,
) -> AbsOrdering {
    let roots = RootTable::new(a.order());
    abs_compare_with(a, b, policy, &roots)
}

pub fn abs_compare_with<T: Coeff>(
    a: &CycInt<T>,
    b: &CycInt<T>,
    policy: &PrecisionPolicy,
    roots: &RootTable,
) -> AbsOrdering {
    assert_eq!(a.order(), b.order(), "cyclotomic order mismatch");
    if a == b {
        return AbsOrdering::Equal;
    }
    let n = a.order() as f64;
    let (ma, mb) = (a.embed_with(roots).norm(), b.embed_with(roots).norm());
    // Rounding in the embedding is at most a few ulps per term.
    let float_err = 8.0 * n * f64::EPSILON * (a.l1_norm() + b.l1_norm());
    let threshold = float_err.max(policy.double_tol * ma.max(mb).max(1.0));
    if ma.is_finite() && mb.is_finite() && (ma - mb).abs() > threshold {
        return if ma > mb {
            AbsOrdering::Greater
        } else {
            AbsOrdering::Less
        };
    }

    let diff = {
        let (a, b) = (a.to_bigint(), b.to_bigint());
        &a.norm_sq() - &b.norm_sq()
    };
    if diff.is_zero_vector() {
        return AbsOrdering::Equal;
    }
    let l1 = diff.l1_norm();
    for &bits in &policy.ladder_bits {
        let (re, _) = diff.embed_prec(bits);
        if let Some(sign) = decided_sign(&re, l1, diff.order(), bits) {
            return sign.into();
        }
    }
    if diff.is_zero_exact() {
        AbsOrdering::Equal
    } else {
        AbsOrdering::Undecided
    }
}

/// Sign of `value` if it clearly exceeds the evaluation error at `bits`.
fn decided_sign(value: &BigFloat, l1: f64, order: usize, bits: usize) -> Option<Ordering> {
    if value.is_zero() {
        return None;
    }
    // |value| >= 2^(exponent-1); error <= l1 * order * 2^(-bits+8).
    let err_log2 = l1.max(1.0).log2() + (order as f64).log2() - bits as f64 + 8.0;
    let val_log2 = value.exponent()? as f64 - 1.0;
    if val_log2 > err_log2 {
        Some(if value.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    } else {
        None
    }
}

/// Exact zero test of `|a|^2 - |b|^2`, skipping floating point entirely.
pub fn abs_equal_exact<T: Coeff>(a: &CycInt<T>, b: &CycInt<T>) -> bool {
    let (a, b): (CycInt<BigInt>, CycInt<BigInt>) = (a.to_bigint(), b.to_bigint());
    let d = &a.norm_sq() - &b.norm_sq();
    d.coeffs().iter().all(Zero::is_zero) || d.is_zero_exact()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(order: usize, terms: &[(i64, i128)]) -> CycInt {
        CycInt::from_terms(order, terms)
    }

    #[test]
    fn trivial_cases() {
        let p = PrecisionPolicy::default();
        assert_eq!(
            abs_compare(&c(36, &[(0, 37)]), &c(36, &[(0, 36)]), &p),
            AbsOrdering::Greater
        );
        assert_eq!(
            abs_compare(&c(36, &[(0, 36)]), &c(36, &[(0, 37)]), &p),
            AbsOrdering::Less
        );
        let a = c(36, &[(3, 5), (7, -2)]);
        assert_eq!(abs_compare(&a, &a, &p), AbsOrdering::Equal);
    }

    #[test]
    fn ties_with_different_representations() {
        let p = PrecisionPolicy::default();
        // |ζ^5| = |1| and |1 + ζ_6^2| = |ζ_6| = 1.
        assert_eq!(
            abs_compare(&c(12, &[(5, 1)]), &c(12, &[(0, 1)]), &p),
            AbsOrdering::Equal
        );
        assert_eq!(
            abs_compare(&c(6, &[(0, 1), (2, 1)]), &c(6, &[(0, 1)]), &p),
            AbsOrdering::Equal
        );
        // |2 ζ^3 - ζ^9| vs 3 in order 12: ζ^9 = -ζ^3 so the left side is 3.
        assert_eq!(
            abs_compare(&c(12, &[(3, 2), (9, -1)]), &c(12, &[(0, 3)]), &p),
            AbsOrdering::Equal
        );
    }

    #[test]
    fn near_ties_escalate() {
        // |a| and |b| differ by ~1e-11 relative; double precision must defer.
        let policy = PrecisionPolicy::default();
        let big = 1_000_000_000_000i128;
        let a = c(4, &[(0, big), (1, 1)]);
        let b = c(4, &[(0, big)]);
        assert_eq!(abs_compare(&a, &b, &policy), AbsOrdering::Greater);
        assert_eq!(abs_compare(&b, &a, &policy), AbsOrdering::Less);
    }

    #[test]
    fn exhausted_ladder_still_finds_exact_tie() {
        let policy = PrecisionPolicy {
            double_tol: 1e-9,
            ladder_bits: vec![],
        };
        assert_eq!(
            abs_compare(&c(6, &[(0, 1), (2, 1)]), &c(6, &[(1, 1)]), &policy),
            AbsOrdering::Equal
        );
    }

    #[test]
    fn policy_parsing() {
        let p = PrecisionPolicy::parse("tol=1e-12, 128, 512").unwrap();
        assert_eq!(p.double_tol, 1e-12);
        assert_eq!(p.ladder_bits, vec![128, 512]);
        assert!(PrecisionPolicy::parse("32").is_err());
        assert!(PrecisionPolicy::parse("abc").is_err());
        assert_eq!(
            PrecisionPolicy::parse("").unwrap(),
            PrecisionPolicy::default()
        );
    }
}
