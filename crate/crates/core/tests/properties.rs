use std::sync::Arc;

use pascalchar::compare::{abs_compare, AbsOrdering, PrecisionPolicy};
use pascalchar::{character, make_context, CycInt, FundamentalTables, PrimeContext, PrimeTables};
use proptest::prelude::*;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 37, 47];

fn ctx(p: u64) -> Arc<PrimeContext> {
    Arc::new(make_context(p).unwrap())
}

/// C(n, m) mod p by Lucas' theorem with factorials computed on the fly.
fn binom_mod(mut n: u64, mut m: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || m > 0 {
        let (a, b) = (n % p, m % p);
        if b > a {
            return 0;
        }
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..b {
            num = num * ((a - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        // den^{-1} by Fermat.
        let mut inv = 1u64;
        let (mut base, mut e) = (den, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc = acc * (num * inv % p) % p;
        n /= p;
        m /= p;
    }
    acc
}

/// Discrete log table by repeated multiplication with the context's generator.
fn dlogs(c: &PrimeContext) -> Vec<Option<usize>> {
    let p = c.p();
    let mut out = vec![None; p as usize];
    let mut x = 1u64;
    for e in 0..p - 1 {
        out[x as usize] = Some(e as usize);
        x = x * c.generator() % p;
    }
    out
}

/// `Σ_j χ_k(C(n, j))` by direct summation over the row.
fn t_oracle(n: u64, k: u64, c: &PrimeContext) -> CycInt {
    let p = c.p();
    let order = c.order();
    let logs = dlogs(c);
    let mut acc = CycInt::zero(order);
    for j in 0..=n {
        if let Some(d) = logs[binom_mod(n, j, p) as usize] {
            acc.bump((k as usize * d) % order);
        }
    }
    acc
}

fn prime_and_k() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (Just(p), 0..p - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_sum_matches_oracle((p, k) in prime_and_k(), n in 0u64..3000) {
        let c = ctx(p);
        let t = FundamentalTables::build(&character(&c, k).unwrap());
        prop_assert!(t.t_chi(n).exact_eq(&t_oracle(n, k, &c)).unwrap());
    }

    #[test]
    fn partial_sums_step_by_row_sums((p, k) in prime_and_k(), n in 0u64..1_000_000) {
        let c = ctx(p);
        let t = FundamentalTables::build(&character(&c, k).unwrap());
        let step = &t.phi_chi(n + 1) - &t.phi_chi(n);
        prop_assert_eq!(step, t.t_chi(n));
    }

    #[test]
    fn digit_recursions((p, k) in prime_and_k(), n in 0u64..100_000, d_seed in 0u64..1000) {
        let c = ctx(p);
        let t = FundamentalTables::build(&character(&c, k).unwrap());
        let d = d_seed % p;
        let m = n * p + d;
        prop_assert_eq!(t.t_chi(m), &t.t_chi(n) * t.t(d as usize));
        let expected = &(&t.phi_chi(n) * t.phi_p()) + &(&t.t_chi(n) * t.phi(d as usize));
        prop_assert_eq!(t.phi_chi(m), expected);
        // φ(p^j n) = φ(p)^j φ(n).
        prop_assert_eq!(t.phi_chi(n * p * p), &(&t.phi_chi(n) * t.phi_p()) * t.phi_p());
    }

    #[test]
    fn digit_bound((p, k) in prime_and_k(), n in 1u64..10_000_000) {
        let c = ctx(p);
        let t = FundamentalTables::build(&character(&c, k).unwrap());
        let m = t.t_table().iter().map(|x| x.embed().norm()).fold(0.0, f64::max);
        let len = pascalchar::to_digits(n, p).len() as i32;
        prop_assert!(t.t_chi(n).embed().norm() <= m.powi(len) * (1.0 + 1e-9));
    }

    #[test]
    fn counts_match_brute_force(p in prop::sample::select(vec![3u64, 5, 7, 13]), n in 1u64..600) {
        let c = ctx(p);
        let all = PrimeTables::build(&c);
        let mut counts = vec![0u128; p as usize];
        for row in 0..n {
            for j in 0..=row {
                counts[binom_mod(row, j, p) as usize] += 1;
            }
        }
        for r in 1..p {
            prop_assert_eq!(all.a_count_formula(n, r).unwrap(), counts[r as usize]);
        }
    }

    #[test]
    fn abs_compare_is_antisymmetric(
        a in prop::collection::vec(-50i128..50, 12),
        b in prop::collection::vec(-50i128..50, 12),
        shift in 0i64..12,
    ) {
        let policy = PrecisionPolicy::default();
        let (a, b) = (CycInt::from_coeffs(a), CycInt::from_coeffs(b));
        let ab = abs_compare(&a, &b, &policy);
        prop_assert_ne!(ab, AbsOrdering::Undecided);
        prop_assert_eq!(ab, abs_compare(&b, &a, &policy).reverse());
        // Multiplying by a root of unity preserves the modulus.
        prop_assert_eq!(abs_compare(&a, &a.shift_mul(shift), &policy), AbsOrdering::Equal);
        prop_assert_eq!(abs_compare(&a.conj(), &a, &policy), AbsOrdering::Equal);
    }
}

#[test]
fn row_sums_of_conjugates_are_conjugate() {
    for p in [5u64, 7, 11, 37] {
        let c = ctx(p);
        for k in 0..p - 1 {
            let chi = character(&c, k).unwrap();
            let t = FundamentalTables::build(&chi);
            let tb = FundamentalTables::build(&chi.conjugate());
            for n in [1u64, 17, 123, 4321] {
                assert_eq!(t.phi_chi(n).conj(), tb.phi_chi(n));
            }
        }
    }
}
