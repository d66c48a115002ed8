//! Piecewise-linear lifts of circle homeomorphisms and exact rotation numbers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, floor, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("a circle map needs at least one breakpoint")]
    Empty,
    #[error("breakpoint {index} has x outside [0, 1)")]
    OutOfPeriod { index: usize },
    #[error("breakpoint x values are not strictly increasing at index {index}")]
    NotSorted { index: usize },
    #[error("map is not strictly increasing at breakpoint {index}")]
    NotMonotone { index: usize },
    #[error("map is not strictly increasing across the period boundary: f(x0) + 1 <= f(x_last)")]
    NotMonotoneAcrossPeriod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Breakpoint {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    breakpoints: Vec<Breakpoint>,
}

/// A strictly increasing PL map `f` on `R` with `f(x + 1) = f(x) + 1`,
/// stored by its breakpoints over one period. The first breakpoint is
/// always at `x = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MapDoc", into = "MapDoc")]
pub struct CircleMapLift {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl TryFrom<MapDoc> for CircleMapLift {
    type Error = MapError;

    fn try_from(doc: MapDoc) -> Result<Self, MapError> {
        CircleMapLift::new(doc.breakpoints.into_iter().map(|b| (b.x, b.y)).collect())
    }
}

impl From<CircleMapLift> for MapDoc {
    fn from(f: CircleMapLift) -> Self {
        MapDoc {
            breakpoints: f
                .xs
                .into_iter()
                .zip(f.ys)
                .map(|(x, y)| Breakpoint { x, y })
                .collect(),
        }
    }
}

impl CircleMapLift {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, MapError> {
        if points.is_empty() {
            return Err(MapError::Empty);
        }
        for (index, (x, _)) in points.iter().enumerate() {
            if *x < Rational::zero() || *x >= Rational::one() {
                return Err(MapError::OutOfPeriod { index });
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(MapError::NotSorted { index: i + 1 });
            }
            if w[1].1 <= w[0].1 {
                return Err(MapError::NotMonotone { index: i + 1 });
            }
        }
        let (x0, y0) = points[0].clone();
        let (xl, yl) = points[points.len() - 1].clone();
        if &y0 + Rational::one() <= yl {
            return Err(MapError::NotMonotoneAcrossPeriod);
        }
        let (mut xs, mut ys): (Vec<_>, Vec<_>) = points.into_iter().unzip();
        if !x0.is_zero() {
            // interpolate f(0) on the segment wrapping from x_last - 1 to x0
            let (xa, ya) = (&xl - Rational::one(), &yl - Rational::one());
            let f0 = &ya + (-&xa) * (&y0 - &ya) / (&x0 - &xa);
            xs.insert(0, Rational::zero());
            ys.insert(0, f0);
        }
        Ok(CircleMapLift { xs, ys })
    }

    pub fn rigid(shift: Rational) -> Self {
        CircleMapLift {
            xs: vec![Rational::zero()],
            ys: vec![shift],
        }
    }

    pub fn identity() -> Self {
        CircleMapLift::rigid(Rational::zero())
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    fn segment_end(&self, idx: usize) -> (Rational, Rational) {
        match (self.xs.get(idx + 1), self.ys.get(idx + 1)) {
            (Some(x), Some(y)) => (x.clone(), y.clone()),
            _ => (Rational::one(), &self.ys[0] + Rational::one()),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let k = floor(x);
        let r = x - Rational::from_integer(k.clone());
        let idx = self.xs.partition_point(|b| *b <= r) - 1;
        let (nx, ny) = self.segment_end(idx);
        let (bx, by) = (&self.xs[idx], &self.ys[idx]);
        by + (&r - bx) * (&ny - by) / (&nx - bx) + Rational::from_integer(k)
    }

    pub fn eval_inverse(&self, y: &Rational) -> Rational {
        let k = floor(&(y - &self.ys[0]));
        let r = y - Rational::from_integer(k.clone());
        let idx = self.ys.partition_point(|b| *b <= r) - 1;
        let (nx, ny) = self.segment_end(idx);
        let (bx, by) = (&self.xs[idx], &self.ys[idx]);
        bx + (&r - by) * (&nx - bx) / (&ny - by) + Rational::from_integer(k)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CircleMapLift) -> CircleMapLift {
        let mut xs: Vec<Rational> = inner.xs.clone();
        for b in &self.xs {
            let t = inner.eval_inverse(b);
            xs.push(&t - Rational::from_integer(floor(&t)));
        }
        xs.sort();
        xs.dedup();
        let points = xs.into_iter().map(|x| {
            let y = self.eval(&inner.eval(&x));
            (x, y)
        });
        CircleMapLift::new(points.collect()).expect("composition of increasing lifts")
    }

    pub fn inverse(&self) -> CircleMapLift {
        let mut points: Vec<(Rational, Rational)> = self
            .xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| {
                let k = Rational::from_integer(floor(y));
                (y - &k, x - &k)
            })
            .collect();
        points.sort();
        CircleMapLift::new(points).expect("inverse of an increasing lift")
    }

    /// `f + c`; pointwise above `f` when `c > 0`.
    pub fn shifted(&self, c: &Rational) -> CircleMapLift {
        CircleMapLift {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y + c).collect(),
        }
    }

    /// `f^n(x)`.
    pub fn iterate(&self, x: &Rational, n: u64) -> Rational {
        (0..n).fold(x.clone(), |acc, _| self.eval(&acc))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotationOptions {
    /// Largest denominator tried for an exact answer.
    pub max_denominator: u64,
    /// Iterations for the interval fallback.
    pub iterations: u64,
}

impl Default for RotationOptions {
    fn default() -> Self {
        RotationOptions {
            max_denominator: 1000,
            iterations: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotationNumber {
    /// `f^q(x) - x - p` takes a value `<= 0` at `below` and `>= 0` at `above`,
    /// so it vanishes somewhere.
    Exact {
        #[serde(with = "rational::serde_str")]
        value: Rational,
        #[serde(with = "rational::serde_str")]
        below: Rational,
        #[serde(with = "rational::serde_str")]
        above: Rational,
    },
    Interval {
        #[serde(with = "rational::serde_str")]
        lo: Rational,
        #[serde(with = "rational::serde_str")]
        hi: Rational,
        iterations: u64,
    },
}

impl RotationNumber {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            RotationNumber::Exact { value, .. } => Some(value),
            RotationNumber::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (&Rational, &Rational) {
        match self {
            RotationNumber::Exact { value, .. } => (value, value),
            RotationNumber::Interval { lo, hi, .. } => (lo, hi),
        }
    }
}

enum Verdict {
    /// Rotation number is strictly greater than the candidate.
    Above,
    Below,
    Hit {
        below: Rational,
        above: Rational,
    },
}

/// Compares the rotation number with `p/q` from the sign of
/// `g(x) = f^q(x) - x - p`. `g` is periodic and PL with breakpoints at the
/// backward orbits `f^-j(b)`, `0 <= j < q`, of the breakpoints `b` of `f`,
/// so its extremes are among those points.
fn compare(f: &CircleMapLift, p: &BigInt, q: u64) -> Verdict {
    let p = Rational::from_integer(p.clone());
    let mut min: Option<(Rational, Rational)> = None;
    let mut max: Option<(Rational, Rational)> = None;
    for b in &f.xs {
        let mut forward = Vec::with_capacity(q as usize + 1);
        forward.push(b.clone());
        for k in 0..q as usize {
            let next = f.eval(&forward[k]);
            forward.push(next);
        }
        let mut back = b.clone();
        for j in 0..q as usize {
            if j > 0 {
                back = f.eval_inverse(&back);
            }
            let g = &forward[q as usize - j] - &back - &p;
            if min.as_ref().is_none_or(|(m, _)| g < *m) {
                min = Some((g.clone(), back.clone()));
            }
            if max.as_ref().is_none_or(|(m, _)| g > *m) {
                max = Some((g, back.clone()));
            }
            let (lo, hi) = (&min.as_ref().unwrap().0, &max.as_ref().unwrap().0);
            if rational::sign(lo) <= 0 && rational::sign(hi) >= 0 {
                return Verdict::Hit {
                    below: min.unwrap().1,
                    above: max.unwrap().1,
                };
            }
        }
    }
    let (lo, _) = min.expect("at least one breakpoint");
    if rational::sign(&lo) > 0 {
        Verdict::Above
    } else {
        Verdict::Below
    }
}

/// `f` on dyadic fixed-point numbers `m / 2^bits`, rounded in a chosen
/// direction. Each segment is `y = (a x + b) / d` with integer coefficients.
struct Fixed {
    bits: u32,
    segs: Vec<Seg>,
}

struct Seg {
    /// start of the segment as `xn / xd`, with `xn` pre-shifted by `bits`
    xn: BigInt,
    xd: BigInt,
    a: BigInt,
    /// `b << bits`
    b: BigInt,
    d: BigInt,
}

impl Fixed {
    fn new(f: &CircleMapLift, bits: u32) -> Fixed {
        let segs = (0..f.xs.len())
            .map(|i| {
                let (nx, ny) = f.segment_end(i);
                let (bx, by) = (&f.xs[i], &f.ys[i]);
                let slope = (&ny - by) / (&nx - bx);
                let c = by - bx * &slope;
                Seg {
                    xn: bx.numer() << bits,
                    xd: bx.denom().clone(),
                    a: slope.numer() * c.denom(),
                    b: (c.numer() * slope.denom()) << bits,
                    d: slope.denom() * c.denom(),
                }
            })
            .collect();
        Fixed { bits, segs }
    }

    fn from_rational(&self, x: &Rational, up: bool) -> BigInt {
        let (q, r) = (x.numer() << self.bits).div_mod_floor(x.denom());
        if up && !r.is_zero() {
            q + 1
        } else {
            q
        }
    }

    fn to_rational(&self, m: &BigInt) -> Rational {
        Rational::new(m.clone(), BigInt::one() << self.bits)
    }

    fn eval(&self, m: &BigInt, up: bool) -> BigInt {
        let k = m >> self.bits;
        let r = m - (&k << self.bits);
        let idx = self.segs.partition_point(|s| s.xn <= &r * &s.xd) - 1;
        let s = &self.segs[idx];
        let (q, rem) = (&s.a * &r + &s.b).div_mod_floor(&s.d);
        let q = if up && !rem.is_zero() { q + 1 } else { q };
        q + (k << self.bits)
    }

    /// Outward-rounded image of `[lo, hi]`.
    fn step(&self, (lo, hi): &(BigInt, BigInt)) -> (BigInt, BigInt) {
        (self.eval(lo, false), self.eval(hi, true))
    }
}

/// [`compare`] in interval arithmetic. `None` when the rounding error hides
/// the sign pattern.
fn compare_fixed(
    f: &CircleMapLift,
    fwd: &Fixed,
    back: &Fixed,
    p: &BigInt,
    q: u64,
) -> Option<Verdict> {
    let p = p << fwd.bits;
    let q = q as usize;
    let (mut all_pos, mut all_neg) = (true, true);
    let (mut neg, mut pos): (Option<BigInt>, Option<BigInt>) = (None, None);
    for b in &f.xs {
        let start = (fwd.from_rational(b, false), fwd.from_rational(b, true));
        let mut forward = Vec::with_capacity(q + 1);
        forward.push(start.clone());
        for k in 0..q {
            let next = fwd.step(&forward[k]);
            forward.push(next);
        }
        let mut pre = start;
        for j in 0..q {
            if j > 0 {
                pre = back.step(&pre);
            }
            let (flo, fhi) = &forward[q - j];
            let glo = flo - &pre.1 - &p;
            let ghi = fhi - &pre.0 - &p;
            all_pos &= glo.is_positive();
            all_neg &= ghi.is_negative();
            if ghi.is_negative() && neg.is_none() {
                neg = Some(pre.0.clone());
            }
            if glo.is_positive() && pos.is_none() {
                pos = Some(pre.1.clone());
            }
        }
    }
    if all_pos {
        return Some(Verdict::Above);
    }
    if all_neg {
        return Some(Verdict::Below);
    }
    // certify g at the dyadic endpoints themselves
    let g_bounds = |m: &BigInt| {
        let mut x = (m.clone(), m.clone());
        for _ in 0..q {
            x = fwd.step(&x);
        }
        (&x.0 - m - &p, &x.1 - m - &p)
    };
    let below = neg.filter(|m| !g_bounds(m).1.is_positive())?;
    let above = pos.filter(|m| !g_bounds(m).0.is_negative())?;
    Some(Verdict::Hit {
        below: fwd.to_rational(&below),
        above: fwd.to_rational(&above),
    })
}

#[derive(Clone, Copy)]
struct Frac {
    num: i128,
    den: u64,
}

impl Frac {
    fn add(self, other: Frac, k: u64) -> Frac {
        Frac {
            num: self.num + k as i128 * other.num,
            den: self.den + k * other.den,
        }
    }
}

/// Rotation number of `f`, exact when it is `p/q` with `q <= max_denominator`.
///
/// Descends the Stern–Brocot tree, deciding each candidate exactly with
/// [`compare`]; consecutive moves in one direction are galloped so the number
/// of candidates grows like the square of the continued-fraction depth rather
/// than the denominator. If no candidate hits, the last Stern–Brocot bracket
/// is intersected with the interval from `iterations` outward-rounded
/// iterates of `0`.
pub fn rotation_number(f: &CircleMapLift, opts: RotationOptions) -> RotationNumber {
    let max_q = opts.max_denominator.max(1);
    let exact = |frac: Frac, below: Rational, above: Rational| RotationNumber::Exact {
        value: Rational::new(BigInt::from(frac.num), BigInt::from(frac.den)),
        below,
        above,
    };

    // |f(0) - rho| < 1
    let mut a: i128 = i128::try_from(floor(&f.ys[0])).expect("map offset fits in i128") - 1;
    loop {
        match compare(f, &BigInt::from(a + 1), 1) {
            Verdict::Hit { below, above } => {
                return exact(Frac { num: a + 1, den: 1 }, below, above)
            }
            Verdict::Above => a += 1,
            Verdict::Below => break,
        }
    }
    let mut left = Frac { num: a, den: 1 };
    let mut right = Frac { num: a + 1, den: 1 };
    let inverse = f.inverse();
    let precisions: Vec<(Fixed, Fixed)> = [128, 512]
        .into_iter()
        .map(|bits| (Fixed::new(f, bits), Fixed::new(&inverse, bits)))
        .collect();
    let decide = |c: Frac| {
        let p = BigInt::from(c.num);
        precisions
            .iter()
            .find_map(|(fwd, back)| compare_fixed(f, fwd, back, &p, c.den))
            .unwrap_or_else(|| compare(f, &p, c.den))
    };

    while left.den + right.den <= max_q {
        let toward_right = match decide(left.add(right, 1)) {
            Verdict::Hit { below, above } => return exact(left.add(right, 1), below, above),
            Verdict::Above => true,
            Verdict::Below => false,
        };
        // move the bracket end `from` toward `to` by the largest k keeping the verdict
        let (from, to) = if toward_right {
            (left, right)
        } else {
            (right, left)
        };
        let kmax = (max_q - from.den) / to.den;
        let same = |v: &Verdict| {
            matches!(
                (v, toward_right),
                (Verdict::Above, true) | (Verdict::Below, false)
            )
        };
        let mut good = 1u64;
        let mut bad: Option<u64> = None;
        while good < kmax {
            let next = (good * 2).min(kmax);
            match decide(from.add(to, next)) {
                Verdict::Hit { below, above } => return exact(from.add(to, next), below, above),
                ref v if same(v) => good = next,
                _ => {
                    bad = Some(next);
                    break;
                }
            }
        }
        if let Some(mut bad) = bad {
            while bad - good > 1 {
                let mid = good + (bad - good) / 2;
                match decide(from.add(to, mid)) {
                    Verdict::Hit { below, above } => return exact(from.add(to, mid), below, above),
                    ref v if same(v) => good = mid,
                    _ => bad = mid,
                }
            }
        }
        if toward_right {
            left = from.add(to, good);
        } else {
            right = from.add(to, good);
        }
    }

    let as_rat = |c: Frac| Rational::new(BigInt::from(c.num), BigInt::from(c.den));
    let (mut lo, mut hi) = (as_rat(left), as_rat(right));
    if opts.iterations > 0 {
        let (ilo, ihi) = iteration_bounds(f, opts.iterations);
        lo = lo.max(ilo);
        hi = hi.min(ihi);
    }
    RotationNumber::Interval {
        lo,
        hi,
        iterations: opts.iterations,
    }
}

/// `rho` lies within `(f^n(0) - 1)/n .. (f^n(0) + 1)/n`; `f^n(0)` is tracked
/// between outward-rounded dyadic bounds to keep the numbers small.
fn iteration_bounds(f: &CircleMapLift, n: u64) -> (Rational, Rational) {
    let fixed = Fixed::new(f, 64);
    let mut x = (BigInt::zero(), BigInt::zero());
    for _ in 0..n {
        x = fixed.step(&x);
    }
    let n = Rational::from_integer(BigInt::from(n));
    (
        (fixed.to_rational(&x.0) - Rational::one()) / &n,
        (fixed.to_rational(&x.1) + Rational::one()) / &n,
    )
}

impl PartialOrd for RotationNumber {
    /// Ordered only when the bounds are disjoint or both are equal exact values.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a_lo, a_hi) = self.bounds();
        let (b_lo, b_hi) = other.bounds();
        if a_lo == a_hi && b_lo == b_hi && a_lo == b_lo {
            Some(Ordering::Equal)
        } else if a_hi < b_lo {
            Some(Ordering::Less)
        } else if b_hi < a_lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}
