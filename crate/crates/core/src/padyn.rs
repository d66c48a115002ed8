//! Markov transition graphs of pseudo-Anosov maps: dilatation bounds, orbit
//! counts with parity, Lefschetz sums, and exponential growth certificates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PadynError {
    #[error("matrix must have at least one vertex")]
    Empty,
    #[error("edge {index} references vertex outside 0..{size}")]
    VertexOutOfRange { index: usize, size: usize },
    #[error("edge {index}: signs must be +1 or -1")]
    BadSign { index: usize },
    #[error("edge {index}: needs `signs` or `count`")]
    MissingMultiplicity { index: usize },
    #[error("edge {index}: `count` ({count}) does not match the {signs} listed signs")]
    CountMismatch {
        index: usize,
        count: u64,
        signs: usize,
    },
    #[error("edge signs are required for parity and Lefschetz computations")]
    MissingSigns,
    #[error("transition graph is not strongly connected")]
    NotStronglyConnected,
    #[error("transition matrix is zero")]
    Degenerate,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("no exponential growth: dilatation lower bound {lo} gives rate {rate} <= 0")]
    NoGrowth { lo: String, rate: String },
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("orbit enumeration exceeded {0} closed walks")]
    EnumerationCap(u64),
}

/// One directed edge group between rectangles, as written in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEdge {
    pub from: usize,
    pub to: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    size: usize,
    edges: Vec<MatrixEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Edge {
    from: usize,
    to: usize,
    sign: Option<i8>,
}

/// Transition graph of a Markov partition. Parallel edges are kept
/// individually so that each carries its own sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct SignedTransitionMatrix {
    size: usize,
    edges: Vec<Edge>,
    strongly_connected: bool,
}

impl TryFrom<MatrixDoc> for SignedTransitionMatrix {
    type Error = PadynError;

    fn try_from(doc: MatrixDoc) -> Result<Self, PadynError> {
        SignedTransitionMatrix::new(doc.size, doc.edges)
    }
}

impl From<SignedTransitionMatrix> for MatrixDoc {
    fn from(m: SignedTransitionMatrix) -> Self {
        let mut edges: Vec<MatrixEdge> = Vec::new();
        for e in &m.edges {
            match edges.last_mut() {
                Some(last) if last.from == e.from && last.to == e.to => {
                    match (&mut last.signs, e.sign) {
                        (Some(signs), Some(s)) => signs.push(s),
                        _ => *last.count.get_or_insert(0) += 1,
                    }
                }
                _ => edges.push(MatrixEdge {
                    from: e.from,
                    to: e.to,
                    signs: e.sign.map(|s| vec![s]),
                    count: if e.sign.is_some() { None } else { Some(1) },
                }),
            }
        }
        MatrixDoc {
            size: m.size,
            edges,
        }
    }
}

impl SignedTransitionMatrix {
    pub fn new(size: usize, groups: Vec<MatrixEdge>) -> Result<Self, PadynError> {
        if size == 0 {
            return Err(PadynError::Empty);
        }
        let mut edges = Vec::new();
        for (index, g) in groups.into_iter().enumerate() {
            if g.from >= size || g.to >= size {
                return Err(PadynError::VertexOutOfRange { index, size });
            }
            match (g.signs, g.count) {
                (Some(signs), count) => {
                    if let Some(count) = count {
                        if count as usize != signs.len() {
                            return Err(PadynError::CountMismatch {
                                index,
                                count,
                                signs: signs.len(),
                            });
                        }
                    }
                    for s in signs {
                        if s != 1 && s != -1 {
                            return Err(PadynError::BadSign { index });
                        }
                        edges.push(Edge {
                            from: g.from,
                            to: g.to,
                            sign: Some(s),
                        });
                    }
                }
                (None, Some(count)) => {
                    edges.extend((0..count).map(|_| Edge {
                        from: g.from,
                        to: g.to,
                        sign: None,
                    }));
                }
                (None, None) => return Err(PadynError::MissingMultiplicity { index }),
            }
        }
        edges.sort_by_key(|e| (e.from, e.to, std::cmp::Reverse(e.sign)));
        let strongly_connected = strongly_connected(size, &edges);
        Ok(SignedTransitionMatrix {
            size,
            edges,
            strongly_connected,
        })
    }

    /// All-positive signs on the given multiplicity matrix.
    pub fn from_multiplicities(rows: &[Vec<u64>]) -> Result<Self, PadynError> {
        let groups = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(move |(j, &c)| MatrixEdge {
                        from: i,
                        to: j,
                        signs: Some(vec![1; c as usize]),
                        count: None,
                    })
            })
            .collect();
        SignedTransitionMatrix::new(rows.len(), groups)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected
    }

    pub fn is_signed(&self) -> bool {
        self.edges.iter().all(|e| e.sign.is_some())
    }

    pub fn multiplicities(&self) -> Vec<Vec<BigInt>> {
        let mut a = vec![vec![BigInt::zero(); self.size]; self.size];
        for e in &self.edges {
            a[e.from][e.to] += 1;
        }
        a
    }

    /// Entry `(i, j)` is (#positive) - (#negative) edges from `i` to `j`.
    pub fn signed_matrix(&self) -> Result<Vec<Vec<BigInt>>, PadynError> {
        let mut a = vec![vec![BigInt::zero(); self.size]; self.size];
        for e in &self.edges {
            a[e.from][e.to] += e.sign.ok_or(PadynError::MissingSigns)?;
        }
        Ok(a)
    }
}

fn strongly_connected(size: usize, edges: &[Edge]) -> bool {
    let reach = |forward: bool| {
        let mut seen = vec![false; size];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in edges {
                let (a, b) = if forward {
                    (e.from, e.to)
                } else {
                    (e.to, e.from)
                };
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

type Matrix = Vec<Vec<BigInt>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

fn trace(a: &Matrix) -> BigInt {
    (0..a.len()).map(|i| &a[i][i]).sum()
}

/// `tr(A^m)` for `m = 1..=m_max`.
fn power_traces(a: &Matrix, m_max: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(m_max as usize);
    let mut p = a.clone();
    for m in 1..=m_max {
        if m > 1 {
            p = mat_mul(&p, a);
        }
        out.push(trace(&p));
    }
    out
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Certified bracket `lo <= lambda <= hi` on the Perron root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilatationBounds {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
    pub iterations: u32,
}

const DILATATION_MAX_ITERATIONS: u32 = 100_000;

/// Collatz–Wielandt bounds `min (Av)_i/v_i <= lambda <= max (Av)_i/v_i`,
/// valid for every positive `v`. `v` is power-iterated with `A + I`, which is
/// primitive whenever `A` is irreducible, and rescaled to 64-bit integers
/// each round. Stops when `hi - lo <= tol` or after a fixed iteration budget.
pub fn dilatation(
    m: &SignedTransitionMatrix,
    tol: &Rational,
) -> Result<DilatationBounds, PadynError> {
    if !tol.is_positive() {
        return Err(PadynError::BadTolerance);
    }
    if m.edges.is_empty() {
        return Err(PadynError::Degenerate);
    }
    if !m.strongly_connected {
        return Err(PadynError::NotStronglyConnected);
    }
    let a = m.multiplicities();
    let n = m.size;
    let scale = BigInt::one() << 64;
    let mut v = vec![BigInt::one(); n];
    let mut best: Option<(Rational, Rational)> = None;
    for iterations in 1..=DILATATION_MAX_ITERATIONS {
        let av: Vec<BigInt> = (0..n)
            .map(|i| (0..n).map(|j| &a[i][j] * &v[j]).sum())
            .collect();
        let ratios = (0..n).map(|i| Rational::new(av[i].clone(), v[i].clone()));
        let lo = ratios.clone().min().expect("nonempty");
        let hi = ratios.max().expect("nonempty");
        let (blo, bhi) = match best.take() {
            Some((blo, bhi)) => (blo.max(lo), bhi.min(hi)),
            None => (lo, hi),
        };
        if &bhi - &blo <= *tol || iterations == DILATATION_MAX_ITERATIONS {
            return Ok(DilatationBounds {
                lo: blo,
                hi: bhi,
                iterations,
            });
        }
        best = Some((blo, bhi));
        let w: Vec<BigInt> = (0..n).map(|i| &av[i] + &v[i]).collect();
        let top = w.iter().max().expect("nonempty").clone();
        v = w
            .iter()
            .map(|x| {
                let t: BigInt = x * &scale;
                (t / &top).max(BigInt::one())
            })
            .collect();
    }
    unreachable!()
}

/// `tr(A^m)`: fixed points of the `m`-th iterate away from singularities.
pub fn periodic_points(m: &SignedTransitionMatrix, period: u32) -> BigInt {
    if period == 0 {
        return BigInt::from(m.size);
    }
    power_traces(&m.multiplicities(), period)
        .pop()
        .expect("period >= 1")
}

fn simple_from_traces(traces: &[BigInt], period: u32) -> BigInt {
    let total: BigInt = divisors(period)
        .into_iter()
        .map(|d| BigInt::from(mobius(period / d)) * &traces[d as usize - 1])
        .sum();
    let (q, r) = (&total / period, &total % period);
    assert!(
        r.is_zero() && !q.is_negative(),
        "Moebius inversion produced {total}/{period}"
    );
    q
}

/// Orbits of least period exactly `period`.
pub fn simple_orbit_count(m: &SignedTransitionMatrix, period: u32) -> BigInt {
    assert!(period >= 1, "period must be at least 1");
    let traces = power_traces(&m.multiplicities(), period);
    simple_from_traces(&traces, period)
}

/// Per-period orbit statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub period: u32,
    /// `tr(A^m)`.
    #[serde(with = "rational::serde_big")]
    pub periodic_points: BigInt,
    /// `tr(A_±^m)`, absent without signs.
    #[serde(with = "rational::serde_opt_big")]
    pub signed_trace: Option<BigInt>,
    /// Primitive orbits of least period `m`.
    #[serde(with = "rational::serde_big")]
    pub simple: BigInt,
    #[serde(with = "rational::serde_opt_big")]
    pub simple_even: Option<BigInt>,
    #[serde(with = "rational::serde_opt_big")]
    pub simple_odd: Option<BigInt>,
    /// Orbit classes of period `m` including multiple covers.
    #[serde(with = "rational::serde_big")]
    pub classes: BigInt,
    #[serde(with = "rational::serde_opt_big")]
    pub good: Option<BigInt>,
    #[serde(with = "rational::serde_opt_big")]
    pub lefschetz: Option<BigInt>,
}

/// Counts for `m = 1..=m_max`. Signed columns are filled when every edge has a sign.
///
/// Writing `p+(d)`, `p-(d)` for primitive orbits of least period `d` with edge
/// sign product `+1`, `-1`, the `m`-fold closed walks split as
/// `(tr A^m - tr A_±^m)/2 = sum over d | m with m/d odd of d p-(d)`, which
/// is solved for `p-(m)` recursively.
pub fn orbit_census(m: &SignedTransitionMatrix, m_max: u32) -> Vec<CensusRow> {
    let traces = power_traces(&m.multiplicities(), m_max);
    let signed = m.signed_matrix().ok().map(|a| power_traces(&a, m_max));
    let mut simple = Vec::with_capacity(m_max as usize);
    let mut odd: Vec<BigInt> = Vec::with_capacity(m_max as usize);
    let mut rows = Vec::with_capacity(m_max as usize);
    for period in 1..=m_max {
        let idx = period as usize - 1;
        simple.push(simple_from_traces(&traces, period));
        let divs = divisors(period);
        let classes: BigInt = divs.iter().map(|&d| &simple[d as usize - 1]).sum();
        let mut row = CensusRow {
            period,
            periodic_points: traces[idx].clone(),
            signed_trace: None,
            simple: simple[idx].clone(),
            simple_even: None,
            simple_odd: None,
            classes,
            good: None,
            lefschetz: None,
        };
        if let Some(st) = &signed {
            let negative_walks: BigInt = (&traces[idx] - &st[idx]) / 2;
            let lower: BigInt = divs
                .iter()
                .filter(|&&d| d < period && (period / d) % 2 == 1)
                .map(|&d| BigInt::from(d) * &odd[d as usize - 1])
                .sum();
            let p_odd = (negative_walks - lower) / period;
            odd.push(p_odd.clone());
            let good: BigInt = divs
                .iter()
                .map(|&d| {
                    let s = &simple[d as usize - 1];
                    if (period / d) % 2 == 1 {
                        s.clone()
                    } else {
                        s - &odd[d as usize - 1]
                    }
                })
                .sum();
            row.signed_trace = Some(st[idx].clone());
            row.simple_even = Some(&simple[idx] - &p_odd);
            row.simple_odd = Some(p_odd);
            row.good = Some(good);
            row.lefschetz = Some(-st[idx].clone());
        }
        rows.push(row);
    }
    rows
}

/// Orbit classes of period `m` that are good: all except even covers of
/// primitive orbits with sign `-1`.
pub fn good_orbit_count(m: &SignedTransitionMatrix, period: u32) -> Result<BigInt, PadynError> {
    if period == 0 {
        return Err(PadynError::ZeroPeriod);
    }
    if !m.is_signed() {
        return Err(PadynError::MissingSigns);
    }
    Ok(orbit_census(m, period)
        .pop()
        .and_then(|r| r.good)
        .expect("signed census"))
}

/// `-tr(A_±^m)`.
pub fn lefschetz_sum(m: &SignedTransitionMatrix, period: u32) -> Result<BigInt, PadynError> {
    if period == 0 {
        return Err(PadynError::ZeroPeriod);
    }
    let a = m.signed_matrix()?;
    Ok(-power_traces(&a, period).pop().expect("period >= 1"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// A periodic orbit, as a cyclic edge word of the transition graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitClass {
    /// Vertices visited, starting from the least rotation of the edge word.
    pub cycle: Vec<usize>,
    pub least_period: u32,
    /// Product of the edge signs over the full period.
    pub sign: i8,
    /// Parity of the primitive orbit.
    pub parity: Parity,
    pub cover_degree: u32,
}

impl OrbitClass {
    pub fn is_good(&self) -> bool {
        !(self.parity == Parity::Odd && self.cover_degree.is_multiple_of(2))
    }
}

fn least_rotation(word: &[usize]) -> Vec<usize> {
    (0..word.len())
        .map(|r| {
            word[r..]
                .iter()
                .chain(&word[..r])
                .copied()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

fn least_period(word: &[usize]) -> usize {
    let n = word.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| word[i] == word[(i + d) % n]))
        .unwrap_or(n)
}

/// Every orbit class of period `period` by exhaustive search over closed
/// edge walks. Returns an error past `cap` walks.
pub fn enumerate_orbit_classes(
    m: &SignedTransitionMatrix,
    period: u32,
    cap: u64,
) -> Result<Vec<OrbitClass>, PadynError> {
    if period == 0 {
        return Err(PadynError::ZeroPeriod);
    }
    let out_edges: Vec<Vec<usize>> = (0..m.size)
        .map(|v| {
            (0..m.edges.len())
                .filter(|&i| m.edges[i].from == v)
                .collect()
        })
        .collect();
    let mut words = BTreeSet::new();
    let mut walks = 0u64;
    let mut path: Vec<usize> = Vec::with_capacity(period as usize);
    fn dfs(
        m: &SignedTransitionMatrix,
        out: &[Vec<usize>],
        start: usize,
        at: usize,
        left: u32,
        path: &mut Vec<usize>,
        words: &mut BTreeSet<Vec<usize>>,
        walks: &mut u64,
        cap: u64,
    ) -> Result<(), PadynError> {
        if left == 0 {
            if at == start {
                *walks += 1;
                if *walks > cap {
                    return Err(PadynError::EnumerationCap(cap));
                }
                words.insert(least_rotation(path));
            }
            return Ok(());
        }
        for &e in &out[at] {
            path.push(e);
            dfs(
                m,
                out,
                start,
                m.edges[e].to,
                left - 1,
                path,
                words,
                walks,
                cap,
            )?;
            path.pop();
        }
        Ok(())
    }
    for start in 0..m.size {
        dfs(
            m, &out_edges, start, start, period, &mut path, &mut words, &mut walks, cap,
        )?;
    }
    Ok(words
        .into_iter()
        .map(|w| {
            let d = least_period(&w);
            let primitive_sign: i8 = w[..d]
                .iter()
                .map(|&e| m.edges[e].sign.unwrap_or(1))
                .product();
            let cover_degree = (w.len() / d) as u32;
            let sign = if cover_degree.is_multiple_of(2) {
                1
            } else {
                primitive_sign
            };
            OrbitClass {
                cycle: w.iter().map(|&e| m.edges[e].from).collect(),
                least_period: d as u32,
                sign,
                parity: if primitive_sign > 0 {
                    Parity::Even
                } else {
                    Parity::Odd
                },
                cover_degree,
            }
        })
        .collect())
}

/// `ln n` for large positive integers.
pub(crate) fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap_or(f64::NAN).ln()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub period: u32,
    #[serde(with = "rational::serde_big")]
    pub periodic_points: BigInt,
    #[serde(with = "rational::serde_big")]
    pub simple: BigInt,
    #[serde(with = "rational::serde_opt_big")]
    pub good: Option<BigInt>,
    /// `A e^{B m}`.
    pub bound: f64,
}

/// `count(m) >= A e^{B m}` for `1 <= m <= m_max`, for periodic points and,
/// where every count is positive, for simple and good orbits. The constants
/// are fitted at `b_upper`, so they hold for every exponent up to it,
/// including `ln lambda - slack`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub dilatation: DilatationBounds,
    #[serde(with = "rational::serde_str")]
    pub a_const: Rational,
    #[serde(with = "rational::serde_str")]
    pub b_const: Rational,
    #[serde(with = "rational::serde_str")]
    pub b_upper: Rational,
    #[serde(with = "rational::serde_opt_str")]
    pub a_simple: Option<Rational>,
    #[serde(with = "rational::serde_opt_str")]
    pub a_good: Option<Rational>,
    pub table: Vec<CertificateRow>,
}

const CERT_BITS: u32 = 48;

/// Certified growth exponents `ln lo - slack` rounded down and
/// `ln hi - slack` rounded up, from the dilatation interval `[lo, hi]`.
fn rate(
    m: &SignedTransitionMatrix,
    slack: f64,
) -> Result<(DilatationBounds, Rational, Rational), PadynError> {
    let bounds = dilatation(m, &rational::ratio(1, 1_000_000_000))?;
    let rate = rational::to_f64(&bounds.lo).ln() - slack;
    if !(rate > 0.0) {
        return Err(PadynError::NoGrowth {
            lo: rational::format_rational(&bounds.lo),
            rate: format!("{rate:.6}"),
        });
    }
    let upper = rational::to_f64(&bounds.hi).ln() - slack;
    let b = rational::round_down(&Rational::from_float(rate).expect("finite"), CERT_BITS);
    let b_upper = rational::round_up(&Rational::from_float(upper).expect("finite"), CERT_BITS);
    Ok((bounds, b, b_upper))
}

/// Largest `A` (rounded down) with `count(m) >= A e^{B m}` on the table, or
/// `None` when some count is zero.
fn fit_constant<'a>(counts: impl Iterator<Item = (u32, &'a BigInt)>, b: f64) -> Option<Rational> {
    let mut log_min = f64::INFINITY;
    for (m, c) in counts {
        if !c.is_positive() {
            return None;
        }
        log_min = log_min.min(ln_big(c) - b * m as f64);
    }
    let a = (log_min.exp() * (1.0 - 1e-12)).min(f64::MAX);
    let a = rational::round_down(&Rational::from_float(a)?, CERT_BITS);
    a.is_positive().then_some(a)
}

pub fn growth_certificate(
    m: &SignedTransitionMatrix,
    m_max: u32,
    slack: f64,
) -> Result<GrowthCertificate, PadynError> {
    if m_max == 0 {
        return Err(PadynError::ZeroPeriod);
    }
    let (dilatation, b_const, b_upper) = rate(m, slack)?;
    let b = rational::to_f64(&b_upper);
    let census = orbit_census(m, m_max);
    let a_const = fit_constant(census.iter().map(|r| (r.period, &r.periodic_points)), b)
        .expect("strongly connected with lambda > 1 has periodic points of every large period");
    let a_simple = fit_constant(census.iter().map(|r| (r.period, &r.simple)), b);
    let a_good = if m.is_signed() {
        fit_constant(
            census
                .iter()
                .map(|r| (r.period, r.good.as_ref().expect("signed"))),
            b,
        )
    } else {
        None
    };
    let af = rational::to_f64(&a_const);
    let table = census
        .into_iter()
        .map(|r| CertificateRow {
            period: r.period,
            bound: af * (rational::to_f64(&b_const) * r.period as f64).exp(),
            periodic_points: r.periodic_points,
            simple: r.simple,
            good: r.good,
        })
        .collect();
    Ok(GrowthCertificate {
        dilatation,
        a_const,
        b_const,
        b_upper,
        a_simple,
        a_good,
        table,
    })
}

/// Good-orbit counts per open-book filtration level, each a lower bound on
/// contact homology generators at that level, with a fitted `c1 e^{c2 m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HcRow {
    pub period: u32,
    #[serde(with = "rational::serde_big")]
    pub good: BigInt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HcLowerBound {
    pub table: Vec<HcRow>,
    #[serde(with = "rational::serde_opt_str")]
    pub c1: Option<Rational>,
    #[serde(with = "rational::serde_opt_str")]
    pub c2: Option<Rational>,
}

pub fn hc_growth_lower_bound(
    m: &SignedTransitionMatrix,
    m_max: u32,
    slack: f64,
) -> Result<HcLowerBound, PadynError> {
    if !m.is_signed() {
        return Err(PadynError::MissingSigns);
    }
    let table: Vec<HcRow> = orbit_census(m, m_max)
        .into_iter()
        .map(|r| HcRow {
            period: r.period,
            good: r.good.expect("signed"),
        })
        .collect();
    let fit = rate(m, slack).ok().and_then(|(_, c2, upper)| {
        let c1 = fit_constant(
            table.iter().map(|r| (r.period, &r.good)),
            rational::to_f64(&upper),
        )?;
        Some((c1, c2))
    });
    let (c1, c2) = match fit {
        Some((c1, c2)) => (Some(c1), Some(c2)),
        None => (None, None),
    };
    Ok(HcLowerBound { table, c1, c2 })
}
