use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {p} exceeds the supported context size (max {max})")]
    ContextTooLarge { p: u64, max: u64 },

    #[error("character index {k} out of range for modulus {p} (need 0 <= k < {})", .p - 1)]
    IndexOutOfRange { p: u64, k: u64 },

    #[error("residue {r} out of range for modulus {p}")]
    ResidueOutOfRange { p: u64, r: u64 },

    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("{what} exceeds limit ({value} > {limit})")]
    LimitExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("explicit formula did not produce an integer for A_{n}({r}): {detail}")]
    IntegralityViolation { n: String, r: u64, detail: String },

    #[error("theta undefined: |phi(p)| is zero for p={p} k={k}")]
    UndefinedTheta { p: u64, k: u64 },

    #[error("character p={p} k={k} is not row-dominant")]
    NotRowDominant { p: u64, k: u64 },

    #[error("Weil bound violated for p={p} k={k} column n={n}: |S|={value} > {bound}")]
    WeilViolation {
        p: u64,
        k: u64,
        n: u64,
        value: f64,
        bound: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
