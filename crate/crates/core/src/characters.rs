//! Dirichlet characters modulo a prime, indexed by the exponent `k` with
//! `χ(g) = ζ^k`, `g` the least primitive root and `ζ = e^{2πi/(p-1)}`.

use std::fmt;
use std::sync::Arc;

use crate::arith::PrimeContext;
use crate::cycint::{Coeff, CycInt};
use crate::error::{Error, Result};

/// Value of a character: zero or a root of unity `ζ^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnityOrZero {
    Zero,
    Exponent(u32),
}

impl UnityOrZero {
    pub fn mul(self, other: Self, order: usize) -> Self {
        match (self, other) {
            (Self::Exponent(a), Self::Exponent(b)) => {
                Self::Exponent(((a as u64 + b as u64) % order as u64) as u32)
            }
            _ => Self::Zero,
        }
    }

    pub fn exponent(self) -> Option<u32> {
        match self {
            Self::Zero => None,
            Self::Exponent(e) => Some(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Even => "even",
            Self::Odd => "odd",
        })
    }
}

#[derive(Clone)]
pub struct Character {
    ctx: Arc<PrimeContext>,
    k: u64,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character(p={}, k={})", self.p(), self.k)
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.k == other.k
    }
}

impl Eq for Character {}

impl Character {
    pub fn new(ctx: Arc<PrimeContext>, k: u64) -> Result<Self> {
        let p = ctx.p();
        if k >= p - 1 {
            return Err(Error::IndexOutOfRange { p, k });
        }
        Ok(Self { ctx, k })
    }

    pub fn ctx(&self) -> &Arc<PrimeContext> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Order of the value group, p - 1.
    pub fn order(&self) -> usize {
        self.ctx.order()
    }

    pub fn is_principal(&self) -> bool {
        self.k == 0
    }

    /// χ(r) for any integer r.
    pub fn eval(&self, r: i64) -> UnityOrZero {
        let p = self.p() as i64;
        let r = r.rem_euclid(p) as u64;
        match self.ctx.dlog(r) {
            None => UnityOrZero::Zero,
            Some(d) => UnityOrZero::Exponent(self.exponent_of_dlog(d)),
        }
    }

    /// Exponent of χ(g^d).
    #[inline]
    pub fn exponent_of_dlog(&self, d: u32) -> u32 {
        ((self.k * d as u64) % (self.p() - 1)) as u32
    }

    /// χ(r) as an exact cyclotomic integer.
    pub fn value<T: Coeff>(&self, r: i64) -> CycInt<T> {
        match self.eval(r) {
            UnityOrZero::Zero => CycInt::zero(self.order()),
            UnityOrZero::Exponent(e) => CycInt::monomial(self.order(), e as usize, T::one()),
        }
    }

    pub fn conjugate(&self) -> Self {
        let n = self.p() - 1;
        Self {
            ctx: Arc::clone(&self.ctx),
            k: (n - self.k) % n,
        }
    }

    /// χ(-1) = ζ^{k(p-1)/2}, which is ±1.
    pub fn parity(&self) -> Parity {
        let n = self.p() - 1;
        if (self.k * (n / 2)) % n == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Smaller index of the conjugate pair `{k, p-1-k}`.
    pub fn pair_representative(&self) -> u64 {
        self.k.min(self.conjugate().k)
    }

    /// `p=<p> k=<k> (chi(g)=zeta^k, g=<g>)`.
    pub fn name(&self) -> String {
        format!(
            "p={} k={} (chi(g)=zeta^{}, g={})",
            self.p(),
            self.k,
            self.k,
            self.ctx.generator()
        )
    }

    /// Label in the form `chi(g)=e^{2k pi i/(p-1)}`.
    pub fn paper_label(&self) -> String {
        format!(
            "chi({})=e^{{{} pi i/{}}}",
            self.ctx.generator(),
            2 * self.k,
            self.p() - 1
        )
    }
}

pub fn character(ctx: &Arc<PrimeContext>, k: u64) -> Result<Character> {
    Character::new(Arc::clone(ctx), k)
}

/// All p - 1 characters in index order.
pub fn group(ctx: &Arc<PrimeContext>) -> Vec<Character> {
    (0..ctx.p() - 1)
        .map(|k| Character {
            ctx: Arc::clone(ctx),
            k,
        })
        .collect()
}
