//! Character-twisted row sums of Pascal's triangle modulo a prime.
//!
//! For a Dirichlet character χ mod p the crate computes
//! `T_χ(n) = Σ_j χ(C(n, j))` and `φ_χ(n) = Σ_{u<n} T_χ(u)` exactly in
//! `Z[ζ_{p-1}]`, counts residues in the triangle through the character
//! expansion, classifies characters by how their single-digit row sums
//! compare with `φ_χ(p)`, and provides numeric diagnostics for the growth
//! of these sequences together with a random model of the first p rows.

pub mod arith;
pub mod bounds;
pub mod characters;
pub mod classification;
pub mod compare;
pub mod cycint;
pub mod error;
pub mod model;
pub mod report;
pub mod sequences;

pub use arith::{lucas_binom, make_context, row_mod_p, to_digits, DigitString, PrimeContext};
pub use bounds::{
    alpha_sequence, bound_report, convergence_ratio, growth_profile, psi, psi_continuity,
    row_dominant_witness, vartheta, AlphaSequence, BoundReport, GrowthProfile, Ladder,
};
pub use characters::{character, group, Character, Parity, UnityOrZero};
pub use classification::{
    classify, fundamental_scatter, mean_report, scan, ClassificationRecord, MeanReport,
    Parallelism, ScatterPoint, Verdict,
};
pub use compare::{abs_compare, AbsOrdering, PrecisionPolicy};
pub use cycint::{CycInt, RootTable};
pub use error::{Error, Result};
pub use model::{
    closed_form_char, closed_form_y, run_model, sample_domain, ModelConfig, ModelStats, ModelTarget,
};
pub use sequences::{
    a_count_bruteforce, a_row, build_tables, CountVector, FundamentalTables, PrimeTables,
};
