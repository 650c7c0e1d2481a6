//! Row-regular / row-dominant classification and whole-prime sweeps.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, PrimeContext};
use crate::characters::{Character, Parity};
use crate::compare::{abs_compare_with, AbsOrdering, PrecisionPolicy};
use crate::cycint::{CycInt, RootTable};
use crate::error::Result;
use crate::report::fmt_sig;
use crate::sequences::FundamentalTables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    RowRegular,
    RowDominant,
    /// A proven tie `|T_χ(b)| = |φ_χ(p)|` with no strict excess.
    Boundary,
    /// Precision exhausted without an exact tie.
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RowRegular => "row-regular",
            Self::RowDominant => "row-dominant",
            Self::Boundary => "boundary",
            Self::Undecided => "undecided",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationRecord {
    pub p: u64,
    pub k: u64,
    pub paper_label: String,
    pub parity: Parity,
    pub phi_p: CycInt,
    pub phi_p_value: Complex64,
    /// Index b maximizing |T_χ(b)| (smallest such b on ties).
    pub max_t_b: usize,
    pub max_t: CycInt,
    pub max_t_abs: f64,
    pub verdict: Verdict,
    /// The b that decided a non-regular verdict.
    pub witness: Option<usize>,
}

pub const CSV_HEADER: [&str; 10] = [
    "p",
    "k",
    "paper_label",
    "parity",
    "re_phi",
    "im_phi",
    "abs_phi",
    "max_T_b",
    "max_T_abs",
    "verdict",
];

impl ClassificationRecord {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.k.to_string(),
            self.paper_label.clone(),
            self.parity.to_string(),
            fmt_sig(self.phi_p_value.re),
            fmt_sig(self.phi_p_value.im),
            fmt_sig(self.phi_p_value.norm()),
            self.max_t_b.to_string(),
            fmt_sig(self.max_t_abs),
            self.verdict.to_string(),
        ]
    }

    pub fn is_row_regular(&self) -> bool {
        self.verdict == Verdict::RowRegular
    }
}

pub fn classify(tables: &FundamentalTables, policy: &PrecisionPolicy) -> ClassificationRecord {
    let roots = RootTable::new(tables.order());
    classify_with(tables, policy, &roots)
}

pub fn classify_with(
    tables: &FundamentalTables,
    policy: &PrecisionPolicy,
    roots: &RootTable,
) -> ClassificationRecord {
    let chi = tables.chi();
    let phi_p = tables.phi_p();

    let mut max_b = 0;
    for b in 1..tables.t_table().len() {
        if abs_compare_with(tables.t(b), tables.t(max_b), policy, roots) == AbsOrdering::Greater {
            max_b = b;
        }
    }

    let mut greater = None;
    let mut equal = None;
    let mut undecided = None;
    for (b, t) in tables.t_table().iter().enumerate() {
        match abs_compare_with(t, phi_p, policy, roots) {
            AbsOrdering::Less => {}
            AbsOrdering::Greater => {
                greater.get_or_insert(b);
            }
            AbsOrdering::Equal => {
                equal.get_or_insert(b);
            }
            AbsOrdering::Undecided => {
                undecided.get_or_insert(b);
            }
        }
    }
    let (verdict, witness) = if greater.is_some() {
        // The largest row sum is the strongest witness; it is necessarily
        // one of the strict excesses.
        (Verdict::RowDominant, Some(max_b))
    } else if undecided.is_some() {
        (Verdict::Undecided, undecided)
    } else if equal.is_some() {
        (Verdict::Boundary, equal)
    } else {
        (Verdict::RowRegular, None)
    };

    ClassificationRecord {
        p: chi.p(),
        k: chi.k(),
        paper_label: chi.paper_label(),
        parity: chi.parity(),
        phi_p: phi_p.clone(),
        phi_p_value: phi_p.embed_with(roots),
        max_t_b: max_b,
        max_t: tables.t(max_b).clone(),
        max_t_abs: tables.t(max_b).embed_with(roots).norm(),
        verdict,
        witness,
    }
}

pub fn classify_character(chi: &Character, policy: &PrecisionPolicy) -> ClassificationRecord {
    classify(&FundamentalTables::build(chi), policy)
}

/// Worker-pool configuration for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parallelism {
    pub jobs: usize,
}

impl Default for Parallelism {
    fn default() -> Self {
        Self { jobs: 1 }
    }
}

impl Parallelism {
    pub fn new(jobs: usize) -> Self {
        Self { jobs: jobs.max(1) }
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .expect("thread pool")
            .install(f)
    }
}

pub fn primes_up_to(max: u64) -> Vec<u64> {
    (2..=max).filter(|&n| is_prime(n)).collect()
}

fn contexts(p_min: u64, p_max: u64) -> Result<Vec<Arc<PrimeContext>>> {
    primes_up_to(p_max)
        .into_par_iter()
        .filter(|&p| p >= p_min)
        .map(|p| PrimeContext::new(p).map(Arc::new))
        .collect()
}

/// All non-row-regular characters of primes up to `p_max`, one per
/// conjugate pair (the smaller index), ordered by `(p, k)`.
pub fn scan(
    p_max: u64,
    parallelism: Parallelism,
    policy: &PrecisionPolicy,
) -> Result<Vec<ClassificationRecord>> {
    parallelism.install(|| {
        let ctxs = contexts(2, p_max)?;
        let items: Vec<(Arc<PrimeContext>, u64)> = ctxs
            .iter()
            .flat_map(|ctx| {
                let n = ctx.p() - 1;
                (0..n)
                    .filter(move |&k| k <= (n - k) % n)
                    .map(move |k| (Arc::clone(ctx), k))
            })
            .collect();
        let mut out: Vec<ClassificationRecord> = items
            .par_iter()
            .filter_map(|(ctx, k)| {
                let chi = Character::new(Arc::clone(ctx), *k).expect("k in range");
                let rec = classify_character(&chi, policy);
                (!rec.is_row_regular()).then_some(rec)
            })
            .collect();
        out.sort_by_key(|r| (r.p, r.k));
        Ok(out)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub p: u64,
    pub k: u64,
    pub parity: Parity,
    /// `φ_χ(p) / p`.
    pub z: Complex64,
}

pub const SCATTER_HEADER: [&str; 5] = ["p", "k", "parity", "re", "im"];

impl ScatterPoint {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.k.to_string(),
            self.parity.to_string(),
            fmt_sig(self.z.re),
            fmt_sig(self.z.im),
        ]
    }
}

/// `φ_χ(p)/p` for every nonprincipal character of every prime `3 ≤ p ≤ p_max`.
pub fn fundamental_scatter(p_max: u64, parallelism: Parallelism) -> Result<Vec<ScatterPoint>> {
    parallelism.install(|| {
        let ctxs = contexts(3, p_max)?;
        let items: Vec<(Arc<PrimeContext>, u64)> = ctxs
            .iter()
            .flat_map(|ctx| (1..ctx.p() - 1).map(move |k| (Arc::clone(ctx), k)))
            .collect();
        let mut out: Vec<ScatterPoint> = items
            .par_iter()
            .map(|(ctx, k)| {
                let chi = Character::new(Arc::clone(ctx), *k).expect("k in range");
                let t = FundamentalTables::build(&chi);
                ScatterPoint {
                    p: chi.p(),
                    k: chi.k(),
                    parity: chi.parity(),
                    z: t.phi_p().embed() / chi.p() as f64,
                }
            })
            .collect();
        out.sort_by_key(|s| (s.p, s.k));
        Ok(out)
    })
}

/// Means of `φ_χ(p)` over the even nonprincipal and the odd characters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanReport {
    pub p: u64,
    pub even_count: usize,
    pub odd_count: usize,
    pub mu_even: Complex64,
    pub mu_odd: Complex64,
    pub ratio_even: Complex64,
    pub ratio_odd: Complex64,
}

pub const MEANS_HEADER: [&str; 9] = [
    "p",
    "even_count",
    "odd_count",
    "re_mu_even",
    "im_mu_even",
    "re_mu_odd",
    "im_mu_odd",
    "ratio_even",
    "ratio_odd",
];

impl MeanReport {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.even_count.to_string(),
            self.odd_count.to_string(),
            fmt_sig(self.mu_even.re),
            fmt_sig(self.mu_even.im),
            fmt_sig(self.mu_odd.re),
            fmt_sig(self.mu_odd.im),
            fmt_sig(self.ratio_even.re),
            fmt_sig(self.ratio_odd.re),
        ]
    }
}

pub fn mean_report(ctx: &Arc<PrimeContext>) -> MeanReport {
    let n = ctx.order();
    let mut even = CycInt::zero(n);
    let mut odd = CycInt::zero(n);
    let (mut ne, mut no) = (0usize, 0usize);
    for k in 1..ctx.p() - 1 {
        let chi = Character::new(Arc::clone(ctx), k).expect("k in range");
        let t = FundamentalTables::build(&chi);
        match chi.parity() {
            Parity::Even => {
                even = &even + t.phi_p();
                ne += 1;
            }
            Parity::Odd => {
                odd = &odd + t.phi_p();
                no += 1;
            }
        }
    }
    let p = ctx.p() as f64;
    let mean = |sum: &CycInt, count: usize| {
        if count == 0 {
            Complex64::new(f64::NAN, f64::NAN)
        } else {
            sum.embed() / count as f64
        }
    };
    let mu_even = mean(&even, ne);
    let mu_odd = mean(&odd, no);
    MeanReport {
        p: ctx.p(),
        even_count: ne,
        odd_count: no,
        mu_even,
        mu_odd,
        ratio_even: mu_even / p,
        ratio_odd: mu_odd / p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_context, DEFAULT_ORACLE_LIMIT};
    use crate::characters::{character, group};
    use crate::sequences::a_count_bruteforce;

    fn ctx(p: u64) -> Arc<PrimeContext> {
        Arc::new(make_context(p).unwrap())
    }

    #[test]
    fn p37_is_row_dominant() {
        let c = ctx(37);
        let policy = PrecisionPolicy::default();
        let rec = classify_character(&character(&c, 10).unwrap(), &policy);
        assert_eq!(rec.verdict, Verdict::RowDominant);
        assert_eq!(rec.witness, Some(36));
        assert_eq!(rec.max_t_b, 36);
        assert!((rec.max_t_abs - 37.0).abs() < 1e-12);
        assert!((rec.phi_p_value.norm() - 33.877).abs() < 1e-3);

        let bar = classify_character(&character(&c, 26).unwrap(), &policy);
        assert_eq!(bar.verdict, Verdict::RowDominant);
        assert!((bar.phi_p_value - rec.phi_p_value.conj()).norm() < 1e-9);
    }

    #[test]
    fn principal_is_row_regular() {
        let policy = PrecisionPolicy::default();
        for p in [2, 3, 5, 37, 101] {
            let rec = classify_character(&character(&ctx(p), 0).unwrap(), &policy);
            assert_eq!(rec.verdict, Verdict::RowRegular, "p={p}");
            assert_eq!(rec.witness, None);
        }
    }

    #[test]
    fn conjugates_share_verdicts() {
        let policy = PrecisionPolicy::default();
        for p in [5, 7, 11, 37, 47] {
            let c = ctx(p);
            for chi in group(&c) {
                let a = classify_character(&chi, &policy);
                let b = classify_character(&chi.conjugate(), &policy);
                assert_eq!(a.verdict, b.verdict);
                assert!(a.phi_p.conj().exact_eq(&b.phi_p).unwrap());
            }
        }
    }

    #[test]
    fn small_scans() {
        let policy = PrecisionPolicy::default();
        assert!(scan(31, Parallelism::new(2), &policy).unwrap().is_empty());
        let hits = scan(40, Parallelism::new(2), &policy).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!((hits[0].p, hits[0].k), (37, 10));
        assert_eq!(hits[0].paper_label, "chi(2)=e^{20 pi i/36}");
        assert!(scan(2, Parallelism::default(), &policy).unwrap().is_empty());
    }

    #[test]
    fn scan_is_deterministic_across_jobs() {
        let policy = PrecisionPolicy::default();
        let a = scan(110, Parallelism::new(1), &policy).unwrap();
        let b = scan(110, Parallelism::new(4), &policy).unwrap();
        let rows = |v: &[ClassificationRecord]| v.iter().map(|r| r.csv_row()).collect::<Vec<_>>();
        assert_eq!(rows(&a), rows(&b));
    }

    #[test]
    fn scatter_p3() {
        let pts = fundamental_scatter(3, Parallelism::default()).unwrap();
        assert_eq!(pts.len(), 1);
        // Rows 0..2 mod 3 are [1], [1, 1], [1, 2, 1]: five ones and one 2,
        // so φ = 5 + χ(2) = 4.
        assert!(
            (pts[0].z - Complex64::new(4.0 / 3.0, 0.0)).norm() < 1e-12,
            "{:?}",
            pts[0]
        );
    }

    #[test]
    fn scatter_counts_and_disk() {
        let pts = fundamental_scatter(60, Parallelism::new(2)).unwrap();
        let expected: u64 = primes_up_to(60)
            .iter()
            .filter(|&&p| p > 2)
            .map(|p| p - 2)
            .sum();
        assert_eq!(pts.len() as u64, expected);
        for s in &pts {
            assert!(s.z.norm() < (s.p + 1) as f64 / 2.0);
        }
    }

    #[test]
    fn means() {
        let c = ctx(5);
        let m = mean_report(&c);
        assert_eq!((m.even_count, m.odd_count), (1, 2));
        // Direct computation from the three nonprincipal characters.
        let mut even = Complex64::new(0.0, 0.0);
        let mut odd = Complex64::new(0.0, 0.0);
        for chi in group(&c).into_iter().skip(1) {
            let v = FundamentalTables::build(&chi).phi_p().embed();
            match chi.parity() {
                Parity::Even => even += v,
                Parity::Odd => odd += v / 2.0,
            }
        }
        assert!((m.mu_even - even).norm() < 1e-12);
        assert!((m.mu_odd - odd).norm() < 1e-12);

        for p in [5u64, 7, 11, 13, 37] {
            let c = ctx(p);
            let m = mean_report(&c);
            assert_eq!(m.even_count as u64, (p - 3) / 2);
            assert_eq!(m.odd_count as u64, (p - 1) / 2);
            // Σ_{χ≠χ0} φ_χ(p) = (p-1) A_p(1) - p(p+1)/2.
            let total = m.mu_even * m.even_count as f64 + m.mu_odd * m.odd_count as f64;
            let a1 = a_count_bruteforce(p, &c, DEFAULT_ORACLE_LIMIT)
                .unwrap()
                .get(1) as f64;
            let expected = (p - 1) as f64 * a1 - (p * (p + 1) / 2) as f64;
            assert!(
                (total.re - expected).abs() < 1e-8 && total.im.abs() < 1e-8,
                "p={p}"
            );
        }
    }

    #[test]
    fn single_digit_row_sums_are_at_most_p() {
        let policy = PrecisionPolicy::default();
        for p in primes_up_to(200) {
            let c = ctx(p);
            for chi in group(&c) {
                let t = FundamentalTables::build(&chi);
                let bound = CycInt::constant(c.order(), p as i128);
                for b in 0..p as usize {
                    let ord = crate::compare::abs_compare(t.t(b), &bound, &policy);
                    assert_ne!(ord, AbsOrdering::Greater, "p={p} k={} b={b}", chi.k());
                    if b + 1 < p as usize {
                        assert_eq!(ord, AbsOrdering::Less, "p={p} k={} b={b}", chi.k());
                    }
                }
            }
        }
    }
}
