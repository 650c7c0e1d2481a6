//! A random model of the fundamental domain: rows `0..p` of Pascal's
//! triangle mod p with interior entries replaced by independent uniform
//! nonzero residues (respecting the symmetry `C(n, m) = C(n, n - m)`).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime;
use crate::characters::Parity;
use crate::error::{Error, Result};

/// Smallest trial count accepted by [`run_model`].
pub const MIN_SAMPLES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RngAlgorithm {
    /// ChaCha with 8 rounds; trial `t` uses stream `t` of the seeded key.
    ChaCha8,
}

impl fmt::Display for RngAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("chacha8")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    pub p: u64,
    pub samples: u64,
    pub seed: u64,
    pub rng: RngAlgorithm,
}

impl ModelConfig {
    pub fn new(p: u64, samples: u64, seed: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p <= 3 {
            return Err(Error::InvalidArgument(format!(
                "the model needs p > 3 (no interior for p = {p})"
            )));
        }
        Ok(Self {
            p,
            samples,
            seed,
            rng: RngAlgorithm::ChaCha8,
        })
    }

    fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }
}

/// One synthetic fundamental domain; `rows[n][m]` for `0 ≤ m ≤ n < p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticDomain {
    p: u64,
    rows: Vec<Vec<u32>>,
}

impl SyntheticDomain {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn get(&self, n: usize, m: usize) -> u32 {
        self.rows[n][m]
    }

    /// Rows 2..=p-2, columns 1..n-1.
    pub fn is_interior(&self, n: usize, m: usize) -> bool {
        n >= 2 && n + 2 <= self.p as usize && m >= 1 && m < n
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, row)| row.iter().enumerate().map(move |(m, &v)| (n, m, v)))
    }

    pub fn interior_count(&self, r: u64) -> u64 {
        self.cells()
            .filter(|&(n, m, v)| self.is_interior(n, m) && v as u64 == r)
            .count() as u64
    }

    pub fn border_count(&self, r: u64) -> u64 {
        self.cells()
            .filter(|&(n, m, v)| !self.is_interior(n, m) && v as u64 == r)
            .count() as u64
    }

    pub fn total_count(&self, r: u64) -> u64 {
        self.cells().filter(|&(_, _, v)| v as u64 == r).count() as u64
    }

    /// Sum of `χ(X)` over the domain for a character model in which an
    /// interior residue x stands for the root `ζ^{x-1}`, and deterministic
    /// cells take the values of a character of the given parity.
    pub fn char_sum(&self, parity: Parity, roots: &[Complex64]) -> Complex64 {
        let p = self.p as u32;
        self.cells()
            .map(|(n, m, v)| {
                if self.is_interior(n, m) {
                    roots[(v - 1) as usize]
                } else if v == p - 1 && parity == Parity::Odd {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .sum()
    }
}

/// Draws one synthetic domain: interior values uniform on `1..p-1` for
/// `m ≤ n/2`, mirrored to `n - m`; ones on rows 0 and 1 and on the borders;
/// row p-1 alternates `1, p-1`.
pub fn sample_domain<R: Rng>(p: u64, rng: &mut R) -> SyntheticDomain {
    let p32 = p as u32;
    let mut rows = Vec::with_capacity(p as usize);
    for n in 0..p as usize {
        let mut row = vec![1u32; n + 1];
        if n as u64 == p - 1 {
            for (m, x) in row.iter_mut().enumerate() {
                *x = if m % 2 == 0 { 1 } else { p32 - 1 };
            }
        } else if n >= 2 {
            for m in 1..=n / 2 {
                let x = rng.gen_range(1..p32);
                row[m] = x;
                row[n - m] = x;
            }
        }
        rows.push(row);
    }
    SyntheticDomain { p, rows }
}

/// The domain for trial `trial` of a configuration.
pub fn sample_trial(cfg: &ModelConfig, trial: u64) -> SyntheticDomain {
    sample_domain(cfg.p, &mut cfg.trial_rng(trial))
}

/// Number of interior cells, `(p-3)(p-2)/2`.
pub fn interior_cells(p: u64) -> u64 {
    (p - 3) * (p - 2) / 2
}

/// Mean and variance of the interior count of a fixed residue.
pub fn closed_form_y(p: u64) -> Result<(f64, f64)> {
    check_p(p)?;
    let p = p as i128;
    let mean = ratio(p * p - 5 * p + 6, 2 * p - 2);
    let var = ratio(
        2 * p * p * p - 15 * p * p + 37 * p - 30,
        2 * p * p - 4 * p + 2,
    );
    Ok((mean, var))
}

/// Heuristic mean and variance of `φ_χ(p)` under the character model.
pub fn closed_form_char(p: u64, parity: Parity) -> Result<(f64, f64)> {
    check_p(p)?;
    let pi = p as i128;
    let mean = match parity {
        Parity::Even => 3 * pi,
        Parity::Odd => 2 * pi + 1,
    } as f64;
    Ok((mean, ratio(2 * pi * pi - 11 * pi + 15, 2)))
}

/// Constant added to the interior count to get `A_p(r)`, obtained by
/// counting the deterministic cells of the domain.
pub fn border_constant(p: u64, r: u64) -> u64 {
    let bottom_ones = (p + 1) / 2;
    let bottom_minus = (p - 1) / 2;
    // Rows 0 and 1, then two border cells on rows 2..=p-2.
    let ones_above = 3 + 2 * (p - 3);
    if r == 1 {
        ones_above + bottom_ones
    } else if r == p - 1 {
        bottom_minus
    } else {
        0
    }
}

/// The same constant as usually quoted: `2p - 1 + (p+1)/2` for r = 1 and
/// `(p-1)/2` for r = -1.
pub fn quoted_border_constant(p: u64, r: u64) -> f64 {
    let pf = p as f64;
    if r == 1 {
        2.0 * pf - 1.0 + (pf + 1.0) / 2.0
    } else if r == p - 1 {
        (pf - 1.0) / 2.0
    } else {
        0.0
    }
}

/// Deterministic part of `φ_χ(p)` counted on the domain.
pub fn char_border_constant(p: u64, parity: Parity) -> f64 {
    let above = 3 + 2 * (p - 3);
    let bottom = match parity {
        Parity::Even => p,
        Parity::Odd => 1,
    };
    (above + bottom) as f64
}

fn ratio(num: i128, den: i128) -> f64 {
    num as f64 / den as f64
}

fn check_p(p: u64) -> Result<()> {
    if p <= 3 {
        return Err(Error::InvalidArgument(format!(
            "the model needs p > 3, got {p}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTarget {
    /// Interior count of residue r.
    YCount(u64),
    /// `φ_χ(p)` for a model character of the given parity.
    YChar(Parity),
    /// Full count `A_p(r)` over the domain.
    ApCount(u64),
}

impl fmt::Display for ModelTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::YCount(r) => write!(f, "Ycount:{r}"),
            Self::YChar(parity) => write!(f, "Ychar:{parity}"),
            Self::ApCount(r) => write!(f, "Ap:{r}"),
        }
    }
}

impl FromStr for ModelTarget {
    type Err = Error;

    /// `Ycount:<r>`, `Ychar:even|odd` or `Ap:<r>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad model target {s:?}"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind.to_ascii_lowercase().as_str() {
            "ycount" => Ok(Self::YCount(arg.parse().map_err(|_| bad())?)),
            "ap" => Ok(Self::ApCount(arg.parse().map_err(|_| bad())?)),
            "ychar" => match arg {
                "even" => Ok(Self::YChar(Parity::Even)),
                "odd" => Ok(Self::YChar(Parity::Odd)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelStats {
    pub target: String,
    pub p: u64,
    pub samples: u64,
    pub seed: u64,
    pub rng: String,
    /// Real part of the sample mean.
    pub mc_mean: f64,
    /// Imaginary part of the sample mean (zero for counts).
    pub mc_mean_im: f64,
    /// Unbiased sample variance, `Σ |x - mean|^2 / (n - 1)`.
    pub mc_var: f64,
    pub cf_mean: f64,
    pub cf_var: f64,
    /// `|mc_mean - cf_mean| / sqrt(cf_var / samples)`.
    pub z_score: f64,
    /// Mean using the commonly quoted border constants, where they differ
    /// from direct counting.
    pub paper_mean: Option<f64>,
}

pub fn run_model(cfg: &ModelConfig, target: ModelTarget) -> Result<ModelStats> {
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            cfg.samples
        )));
    }
    let p = cfg.p;
    let (y_mean, y_var) = closed_form_y(p)?;
    let (cf_mean, cf_var, paper_mean) = match target {
        ModelTarget::YCount(r) | ModelTarget::ApCount(r) if r == 0 || r >= p => {
            return Err(Error::ResidueOutOfRange { p, r })
        }
        ModelTarget::YCount(_) => (y_mean, y_var, None),
        ModelTarget::ApCount(r) => (
            y_mean + border_constant(p, r) as f64,
            y_var,
            Some(y_mean + quoted_border_constant(p, r)),
        ),
        ModelTarget::YChar(parity) => {
            let (quoted, var) = closed_form_char(p, parity)?;
            (char_border_constant(p, parity), var, Some(quoted))
        }
    };

    let roots: Vec<Complex64> = (0..p - 1)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / (p - 1) as f64))
        .collect();
    let values: Vec<Complex64> = (0..cfg.samples)
        .into_par_iter()
        .map(|trial| {
            let d = sample_trial(cfg, trial);
            match target {
                ModelTarget::YCount(r) => Complex64::new(d.interior_count(r) as f64, 0.0),
                ModelTarget::ApCount(r) => Complex64::new(d.total_count(r) as f64, 0.0),
                ModelTarget::YChar(parity) => d.char_sum(parity, &roots),
            }
        })
        .collect();

    let n = values.len() as f64;
    let mean = values.iter().sum::<Complex64>() / n;
    let mc_var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
    let z_score = (mean - Complex64::new(cf_mean, 0.0)).norm() / (cf_var / n).sqrt();
    Ok(ModelStats {
        target: target.to_string(),
        p,
        samples: cfg.samples,
        seed: cfg.seed,
        rng: cfg.rng.to_string(),
        mc_mean: mean.re,
        mc_mean_im: mean.im,
        mc_var,
        cf_mean,
        cf_var,
        z_score,
        paper_mean,
    })
}
