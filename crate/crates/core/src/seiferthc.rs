//! Seifert invariants, contact homology generator tables for periodic open
//! books, and growth-rate classification of counting functions.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::padyn::Parity;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeifertError {
    #[error("fiber {index} has alpha = 0")]
    ZeroAlpha { index: usize },
    #[error("all twist coefficients k_i/n must be positive for the generator table; binding {index} has k/n = {coefficient}")]
    NonPositiveTwist { index: usize, coefficient: String },
    #[error("binding {index}: gcd(k, n) = gcd({k}, {n}) is not 1")]
    NotCoprime { index: usize, k: i64, n: u32 },
    #[error("order n must be positive")]
    ZeroOrder,
    #[error("interior orbifold order {index} is {order}; orders must be at least 2")]
    BadInteriorOrder { index: usize, order: u32 },
    #[error("binding_count {count} does not match the {twists} twists")]
    BindingCount { count: u32, twists: usize },
    #[error("need at least one binding component")]
    NoBinding,
    #[error("action cap {cap} exceeds the limit {limit}")]
    CapExceeded { cap: String, limit: u64 },
    #[error("growth classification needs at least {need} positive samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("samples must be nondecreasing; N drops at L = {at}")]
    Decreasing { at: u64 },
    #[error("sample L values must be strictly increasing at index {index}")]
    UnsortedSamples { index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberInvariant {
    pub alpha: i64,
    pub beta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeifertInvariants {
    #[serde(default)]
    pub base_genus: u32,
    pub fibers: Vec<FiberInvariant>,
}

/// `e(M) = sum beta_i / alpha_i`.
pub fn euler_number(inv: &SeifertInvariants) -> Result<Rational, SeifertError> {
    inv.fibers
        .iter()
        .enumerate()
        .try_fold(Rational::zero(), |acc, (index, f)| {
            if f.alpha == 0 {
                return Err(SeifertError::ZeroAlpha { index });
            }
            Ok(acc + rational::ratio(f.beta, f.alpha))
        })
}

/// Lisca–Matić: an `S^1`-invariant transverse contact structure exists iff `e(M) < 0`.
pub fn admits_invariant_transverse(inv: &SeifertInvariants) -> Result<bool, SeifertError> {
    Ok(euler_number(inv)?.is_negative())
}

/// Periodic monodromy of order `n` on a page whose quotient orbifold has
/// genus `orbifold_genus` and interior cone points of the given orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicOpenBookData {
    pub orbifold_genus: u32,
    #[serde(default)]
    pub interior_orders: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding_count: Option<u32>,
    pub order: u32,
    pub twists: Vec<i64>,
}

impl PeriodicOpenBookData {
    pub fn validate(&self) -> Result<(), SeifertError> {
        if self.order == 0 {
            return Err(SeifertError::ZeroOrder);
        }
        if self.twists.is_empty() {
            return Err(SeifertError::NoBinding);
        }
        if let Some(count) = self.binding_count {
            if count as usize != self.twists.len() {
                return Err(SeifertError::BindingCount {
                    count,
                    twists: self.twists.len(),
                });
            }
        }
        for (index, &order) in self.interior_orders.iter().enumerate() {
            if order < 2 {
                return Err(SeifertError::BadInteriorOrder { index, order });
            }
        }
        for (index, &k) in self.twists.iter().enumerate() {
            let n = self.order;
            if k.gcd(&(n as i64)) != 1 {
                return Err(SeifertError::NotCoprime { index, k, n });
            }
            if k <= 0 {
                return Err(SeifertError::NonPositiveTwist {
                    index,
                    coefficient: rational::format_rational(&rational::ratio(k, n as i64)),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSource {
    RegularFiber { multiplicity: u64, morse_index: u8 },
    SingularFiber { order: u32, cover: u64 },
    BindingFiber { binding: usize, cover: u64 },
}

/// One Reeb orbit generator. Actions are in units of the regular fiber period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    #[serde(with = "rational::serde_str")]
    pub action: Rational,
    #[serde(flatten)]
    pub source: GeneratorSource,
    pub parity: Parity,
    pub dim_s_t: u8,
    /// `|gamma|` with the Conley–Zehnder index `mu` left symbolic.
    pub grading: String,
}

fn record(action: Rational, source: GeneratorSource) -> GeneratorRecord {
    let (dim_s_t, index, parity) = match source {
        GeneratorSource::RegularFiber { morse_index, .. } => {
            let parity = if morse_index % 2 == 0 {
                Parity::Even
            } else {
                Parity::Odd
            };
            (3, morse_index, parity)
        }
        _ => (1, 0, Parity::Even),
    };
    GeneratorRecord {
        action,
        source,
        parity,
        dim_s_t,
        grading: format!("mu - {dim_s_t}/2 + {index} - 1"),
    }
}

/// Generators of action at most `cap` for the Morse–Bott Reeb flow of the
/// `S^1`-invariant contact form. Regular fibers of multiplicity `m`
/// contribute one generator per Morse critical point on the closed base,
/// singular fibers of order `s` their `q`-fold covers with `s` not dividing `q`,
/// and each binding component its `q`-fold covers with `n` not dividing `q`.
pub fn hc_generators(
    data: &PeriodicOpenBookData,
    cap: &Rational,
) -> Result<Vec<GeneratorRecord>, SeifertError> {
    data.validate()?;
    let limit = |period: u64| -> u64 {
        let top = cap * Rational::from_integer(BigInt::from(period));
        rational::floor(&top).to_u64().unwrap_or(0)
    };
    let mut out = Vec::new();
    for m in 1..=limit(1) {
        let action = Rational::from_integer(BigInt::from(m));
        let betti = [(0u8, 1u32), (1, 2 * data.orbifold_genus), (2, 1)];
        for (morse_index, count) in betti {
            for _ in 0..count {
                out.push(record(
                    action.clone(),
                    GeneratorSource::RegularFiber {
                        multiplicity: m,
                        morse_index,
                    },
                ));
            }
        }
    }
    for &s in &data.interior_orders {
        for q in (1..=limit(s as u64)).filter(|q| q % s as u64 != 0) {
            let action = Rational::new(BigInt::from(q), BigInt::from(s));
            out.push(record(
                action,
                GeneratorSource::SingularFiber { order: s, cover: q },
            ));
        }
    }
    let n = data.order as u64;
    for binding in 0..data.twists.len() {
        for q in (1..=limit(n)).filter(|q| q % n != 0) {
            let action = Rational::new(BigInt::from(q), BigInt::from(n));
            out.push(record(
                action,
                GeneratorSource::BindingFiber { binding, cover: q },
            ));
        }
    }
    out.sort_by(|a, b| a.action.cmp(&b.action).then(a.source.cmp(&b.source)));
    Ok(out)
}

/// `N(L)` at one sample point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSample {
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "N")]
    pub n: u128,
}

/// `N(L) = #{records with action < L}` for `L = 1..=cap`.
pub fn growth_function(records: &[GeneratorRecord], cap: u64) -> Vec<GrowthSample> {
    let mut actions: Vec<&Rational> = records.iter().map(|r| &r.action).collect();
    actions.sort();
    (1..=cap)
        .map(|l| {
            let bound = Rational::from_integer(BigInt::from(l));
            GrowthSample {
                l,
                n: actions.partition_point(|a| **a < bound) as u128,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelExample {
    /// Standard tight `S^3`: two simple elliptic orbits of unit action.
    S3,
    /// Unit cotangent bundle of `T^2`: orbits indexed by nonzero lattice vectors.
    T3,
    /// Cyclically reduced cyclic words in the free group of rank `2g`, a proxy
    /// (an overcount) for closed geodesics on a genus-`g` surface.
    SurfaceGroupWords { genus: u32 },
}

impl ModelExample {
    pub fn default_cap(&self) -> u64 {
        match self {
            ModelExample::SurfaceGroupWords { .. } => 20,
            _ => 10_000,
        }
    }
}

/// Cyclically reduced words of length `n` in a free group of rank `r`.
fn cyclically_reduced(r: u64, n: u32) -> BigUint {
    let base = BigUint::from(2 * r - 1).pow(n);
    let parity = if n.is_multiple_of(2) {
        BigUint::from(2 * (r - 1))
    } else {
        BigUint::zero()
    };
    base + BigUint::one() + parity
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// Conjugacy classes of cyclically reduced words of length exactly `n`,
/// by Burnside over the rotations.
fn cyclic_words(r: u64, n: u32) -> BigUint {
    let total: BigUint = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigUint::from(euler_phi(n / d)) * cyclically_reduced(r, d))
        .sum();
    total / BigUint::from(n)
}

/// `N(L)` for `L = 1..=cap` in one of the model examples.
pub fn model_counting(
    example: ModelExample,
    cap: u64,
    limit: u64,
) -> Result<Vec<GrowthSample>, SeifertError> {
    if cap > limit {
        return Err(SeifertError::CapExceeded {
            cap: cap.to_string(),
            limit,
        });
    }
    let overflow = || SeifertError::CapExceeded {
        cap: cap.to_string(),
        limit: cap.saturating_sub(1),
    };
    match example {
        ModelExample::S3 => Ok((1..=cap)
            .map(|l| GrowthSample {
                l,
                n: 2 * l as u128,
            })
            .collect()),
        ModelExample::T3 => Ok((1..=cap)
            .map(|l| {
                let r2 = (l as i128) * (l as i128);
                let mut points: u128 = 0;
                for m in -(l as i128)..=(l as i128) {
                    let rest = r2 - m * m;
                    let span = (rest as f64).sqrt() as i128;
                    // correct the float root in either direction
                    let span = (span - 1..=span + 1)
                        .filter(|y| y * y <= rest)
                        .max()
                        .unwrap_or(0);
                    points += (2 * span + 1) as u128;
                }
                GrowthSample {
                    l,
                    n: 2 * (points - 1),
                }
            })
            .collect()),
        ModelExample::SurfaceGroupWords { genus } => {
            let r = 2 * genus as u64;
            let mut total = BigUint::zero();
            let mut out = Vec::with_capacity(cap as usize);
            for l in 1..=cap {
                if r > 0 {
                    total += cyclic_words(r, l as u32);
                }
                out.push(GrowthSample {
                    l,
                    n: total.to_u128().ok_or_else(overflow)?,
                });
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GrowthClass {
    Linear,
    Polynomial { degree: u32 },
    Exponential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub class: GrowthClass,
    pub loglog_slope: f64,
    pub loglog_residual: f64,
    pub semilog_slope: f64,
    pub semilog_residual: f64,
    pub samples_used: usize,
}

pub const MIN_GROWTH_SAMPLES: usize = 8;

/// Least squares `y = a + b x`; returns `(b, sum of squared residuals)`.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let res = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a - b * x).powi(2))
        .sum();
    (b, res)
}

/// Compares a fit of `ln N` against `ln L` (polynomial) with one against `L`
/// (exponential), over samples with `L, N > 0`.
pub fn classify_growth(
    samples: &[GrowthSample],
    threshold: f64,
) -> Result<GrowthFit, SeifertError> {
    for (i, w) in samples.windows(2).enumerate() {
        if w[1].l <= w[0].l {
            return Err(SeifertError::UnsortedSamples { index: i + 1 });
        }
        if w[1].n < w[0].n {
            return Err(SeifertError::Decreasing { at: w[1].l });
        }
    }
    let used: Vec<&GrowthSample> = samples.iter().filter(|s| s.l > 0 && s.n > 0).collect();
    if used.len() < MIN_GROWTH_SAMPLES {
        return Err(SeifertError::TooFewSamples {
            need: MIN_GROWTH_SAMPLES,
            got: used.len(),
        });
    }
    let ls: Vec<f64> = used.iter().map(|s| s.l as f64).collect();
    let log_l: Vec<f64> = ls.iter().map(|l| l.ln()).collect();
    let log_n: Vec<f64> = used.iter().map(|s| (s.n as f64).ln()).collect();
    let (loglog_slope, loglog_residual) = fit_line(&log_l, &log_n);
    let (semilog_slope, semilog_residual) = fit_line(&ls, &log_n);
    let class = if semilog_residual < loglog_residual && semilog_slope >= threshold {
        GrowthClass::Exponential
    } else {
        match loglog_slope.round().max(0.0) as u32 {
            1 => GrowthClass::Linear,
            degree => GrowthClass::Polynomial { degree },
        }
    };
    Ok(GrowthFit {
        class,
        loglog_slope,
        loglog_residual,
        semilog_slope,
        semilog_residual,
        samples_used: used.len(),
    })
}
