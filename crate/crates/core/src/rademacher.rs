//! Rademacher functions: turn counts on tessellations and signed prong-crossing
//! counts for pseudo-Anosov maps.
//!
//! The tessellation version assigns `3 - 6i/s` to a traversal of an `s`-gon
//! that leaves `i` sides counterclockwise from where it entered (so `+1`/`-1`
//! on triangles). The pseudo-Anosov version works on [`CrossingWord`]s: each
//! maximal run of `k` same-lift crossings contributes `k - sgn(k)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{int, ratio, Rational};
use crate::surface::{join_paths, reduce_path, traversals, PathError, TessPath, Tessellation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("polygon size {s} is below 2")]
    PolygonTooSmall { s: usize },
    #[error("side offset {i} is outside 1..={} for a {s}-gon", .s - 1)]
    OffsetOutOfRange { s: usize, i: usize },
}

/// Value of one traversal of an `s`-gon leaving `i` sides counterclockwise
/// from the entry side.
pub fn phi_step(s: usize, i: usize) -> Result<Rational, StepError> {
    if s < 2 {
        return Err(StepError::PolygonTooSmall { s });
    }
    if i == 0 || i >= s {
        return Err(StepError::OffsetOutOfRange { s, i });
    }
    Ok(int(3) - ratio(6 * i as i64, s as i64))
}

/// Rademacher value of the reduced form of `path`.
pub fn phi_path(tess: &Tessellation, path: &TessPath) -> Result<Rational, PathError> {
    let reduced = reduce_path(tess, path)?;
    let mut total = Rational::zero();
    for t in traversals(tess, &reduced)? {
        let i = t.offset();
        if i != 0 {
            total += phi_step(t.size, i).expect("validated polygon size");
        }
    }
    Ok(total)
}

/// `phi(p1) + phi(p2) - phi(p1 p2)`; one of `-3, 0, 3`.
pub fn phi_defect(
    tess: &Tessellation,
    p1: &TessPath,
    p2: &TessPath,
) -> Result<Rational, PathError> {
    let joined = join_paths(tess, p1, p2)?;
    Ok(phi_path(tess, p1)? + phi_path(tess, p2)? - phi_path(tess, &joined)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be 1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value() as i8
    }
}

/// A signed crossing of the prong fan of one boundary lift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Letter {
    pub lift: String,
    pub sign: Sign,
    /// Set when the arc starts or ends on this prong.
    #[serde(default)]
    pub endpoint: bool,
}

impl Letter {
    pub fn new(lift: impl Into<String>, sign: Sign) -> Self {
        Letter {
            lift: lift.into(),
            sign,
            endpoint: false,
        }
    }

    pub fn at_endpoint(mut self) -> Self {
        self.endpoint = true;
        self
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.lift == other.lift && self.sign != other.sign
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingWord {
    pub letters: Vec<Letter>,
}

impl CrossingWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        CrossingWord { letters }
    }

    /// Reverse traversal: order reversed, every sign flipped.
    pub fn inverse(&self) -> CrossingWord {
        CrossingWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    lift: l.lift.clone(),
                    sign: l.sign.flip(),
                    endpoint: l.endpoint,
                })
                .collect(),
        }
    }

    /// Concatenation; endpoint flags at the junction become interior.
    pub fn concat(&self, other: &CrossingWord) -> CrossingWord {
        let mut letters = self.letters.clone();
        if let Some(l) = letters.last_mut() {
            l.endpoint = false;
        }
        let start = letters.len();
        letters.extend(other.letters.iter().cloned());
        if start > 0 && start < letters.len() {
            letters[start].endpoint = false;
        }
        CrossingWord { letters }
    }

    /// Cancels adjacent opposite-sign letters on the same lift.
    pub fn reduced(&self) -> CrossingWord {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if stack.last().is_some_and(|top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l.clone());
            }
        }
        CrossingWord { letters: stack }
    }

    /// Signed counts of the maximal same-lift runs.
    pub fn runs(&self) -> Vec<(&str, i64)> {
        let mut out: Vec<(&str, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((lift, k)) if *lift == l.lift => *k += l.sign.value(),
                _ => out.push((&l.lift, l.sign.value())),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("endpoint flag on interior letter {index}")]
    InteriorEndpoint { index: usize },
    #[error("crossings of boundary lift `{lift}` do not form one contiguous run")]
    NonContiguous { lift: String },
}

fn check_word(word: &CrossingWord) -> Result<CrossingWord, WordError> {
    let n = word.letters.len();
    if let Some(index) = word
        .letters
        .iter()
        .enumerate()
        .position(|(i, l)| l.endpoint && i != 0 && i + 1 != n)
    {
        return Err(WordError::InteriorEndpoint { index });
    }
    let reduced = word.reduced();
    let mut seen = std::collections::HashSet::new();
    for (lift, _) in reduced.runs() {
        if !seen.insert(lift) {
            return Err(WordError::NonContiguous {
                lift: lift.to_string(),
            });
        }
    }
    Ok(reduced)
}

/// Signed prong-interval count of a crossing word.
pub fn pa_phi(word: &CrossingWord) -> Result<i64, WordError> {
    let reduced = check_word(word)?;
    Ok(reduced.runs().iter().map(|&(_, k)| k - k.signum()).sum())
}

/// `pa_phi(w1) + pa_phi(w2) - pa_phi(w1 w2)`; one of `-1, 0, 1`.
pub fn pa_phi_defect(w1: &CrossingWord, w2: &CrossingWord) -> Result<i64, WordError> {
    let joined = w1.concat(w2);
    Ok(pa_phi(w1)? + pa_phi(w2)? - pa_phi(&joined)?)
}

/// Seeded random inputs for the quasimorphism checks.
pub mod fuzz {
    use rand::Rng;
    use serde::Serialize;

    use super::*;
    use crate::surface::{Crossing, Side};

    /// Non-backtracking walk of `steps` polygon traversals after `start`.
    pub fn walk_from<R: Rng>(
        tess: &Tessellation,
        start: Crossing,
        steps: usize,
        rng: &mut R,
    ) -> Vec<Crossing> {
        let mut out = vec![start];
        let mut cur = start;
        for _ in 0..steps {
            let (p, entry) = tess.slot(cur.arc, cur.enter).expect("valid tessellation");
            let sides = &tess.polygons()[p].sides;
            let mut k = rng.gen_range(0..sides.len() - 1);
            if k >= entry {
                k += 1;
            }
            let s = sides[k];
            cur = Crossing::new(s.arc, s.side.opposite());
            out.push(cur);
        }
        out
    }

    pub fn random_crossing<R: Rng>(tess: &Tessellation, rng: &mut R) -> Crossing {
        let side = if rng.gen_bool(0.5) {
            Side::Left
        } else {
            Side::Right
        };
        Crossing::new(rng.gen_range(0..tess.arc_count()), side)
    }

    /// Random reduced path with up to `max_steps` traversals.
    pub fn random_path<R: Rng>(tess: &Tessellation, max_steps: usize, rng: &mut R) -> TessPath {
        let start = random_crossing(tess, rng);
        let steps = rng.gen_range(0..=max_steps);
        TessPath::new(walk_from(tess, start, steps, rng))
    }

    /// A reduced path starting on the arc where `p1` ends. Half the time it
    /// turns back and retraces part of `p1` before diverging.
    pub fn random_continuation<R: Rng>(
        tess: &Tessellation,
        p1: &TessPath,
        max_steps: usize,
        rng: &mut R,
    ) -> TessPath {
        let end = *p1.crossings.last().expect("nonempty path");
        if rng.gen_bool(0.5) {
            let steps = rng.gen_range(0..=max_steps);
            return TessPath::new(walk_from(tess, end, steps, rng));
        }
        let back = p1.reversed();
        let retrace = rng.gen_range(1..=back.len());
        let mut crossings = back.crossings[..retrace].to_vec();
        let steps = rng.gen_range(0..=max_steps);
        let tail = walk_from(tess, *crossings.last().unwrap(), steps, rng);
        crossings.extend_from_slice(&tail[1..]);
        TessPath::new(crossings)
    }

    fn random_run<R: Rng>(lift: String, rng: &mut R) -> Vec<Letter> {
        let sign = if rng.gen_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        (0..rng.gen_range(1..=4))
            .map(|_| Letter::new(lift.clone(), sign))
            .collect()
    }

    /// Random reduced word of fresh lifts `prefix0, prefix1, ...`.
    pub fn random_word<R: Rng>(prefix: &str, max_runs: usize, rng: &mut R) -> CrossingWord {
        let mut letters = Vec::new();
        for r in 0..rng.gen_range(0..=max_runs) {
            letters.extend(random_run(format!("{prefix}{r}"), rng));
        }
        if let (Some(first), true) = (letters.first_mut(), rng.gen_bool(0.2)) {
            first.endpoint = true;
        }
        CrossingWord::new(letters)
    }

    /// A word whose concatenation with `w1` stays contiguous: it either
    /// extends the last run, cancels part of `w1`'s tail, or starts fresh.
    pub fn random_partner<R: Rng>(
        w1: &CrossingWord,
        prefix: &str,
        max_runs: usize,
        rng: &mut R,
    ) -> CrossingWord {
        let mut head: Vec<Letter> = Vec::new();
        match (w1.letters.last(), rng.gen_range(0..3)) {
            (Some(last), 0) => {
                let n = rng.gen_range(1..=3);
                head.extend((0..n).map(|_| Letter::new(last.lift.clone(), last.sign)));
            }
            (Some(_), 1) => {
                let inv = w1.inverse();
                let take = rng.gen_range(1..=inv.letters.len());
                head.extend(
                    inv.letters[..take]
                        .iter()
                        .map(|l| Letter::new(l.lift.clone(), l.sign)),
                );
            }
            _ => {}
        }
        let tail = random_word(prefix, max_runs, rng);
        head.extend(tail.letters.into_iter().map(|mut l| {
            l.endpoint = false;
            l
        }));
        CrossingWord::new(head)
    }

    #[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
    pub struct FuzzSummary {
        pub path_pairs: usize,
        pub defect_counts: [usize; 3],
        pub defect_violations: usize,
        pub antisymmetry_violations: usize,
        pub word_pairs: usize,
        pub word_defect_counts: [usize; 3],
        pub word_defect_violations: usize,
        pub word_antisymmetry_violations: usize,
    }

    impl FuzzSummary {
        pub fn clean(&self) -> bool {
            self.defect_violations == 0
                && self.antisymmetry_violations == 0
                && self.word_defect_violations == 0
                && self.word_antisymmetry_violations == 0
        }
    }

    /// Checks the defect bound and antisymmetry on `pairs` random path pairs
    /// and `pairs` random word pairs.
    pub fn quasimorphism_fuzz<R: Rng>(
        tess: &Tessellation,
        pairs: usize,
        rng: &mut R,
    ) -> FuzzSummary {
        let mut s = FuzzSummary {
            path_pairs: pairs,
            word_pairs: pairs,
            ..Default::default()
        };
        for _ in 0..pairs {
            let p1 = random_path(tess, 12, rng);
            let p2 = random_continuation(tess, &p1, 12, rng);
            let d = phi_defect(tess, &p1, &p2).expect("generated pair is composable");
            match [int(-3), int(0), int(3)].iter().position(|v| *v == d) {
                Some(k) => s.defect_counts[k] += 1,
                None => s.defect_violations += 1,
            }
            let f = phi_path(tess, &p1).unwrap();
            if phi_path(tess, &p1.reversed()).unwrap() != -f {
                s.antisymmetry_violations += 1;
            }

            let w1 = random_word("a", 5, rng);
            let w2 = random_partner(&w1, "b", 5, rng);
            let d = pa_phi_defect(&w1, &w2).expect("generated words are contiguous");
            match d {
                -1..=1 => s.word_defect_counts[(d + 1) as usize] += 1,
                _ => s.word_defect_violations += 1,
            }
            if pa_phi(&w1.inverse()).unwrap() != -pa_phi(&w1).unwrap() {
                s.word_antisymmetry_violations += 1;
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;
    use crate::surface::{Crossing, Side};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use Side::{Left as L, Right as R};

    fn path(cs: &[(usize, Side)]) -> TessPath {
        TessPath::new(cs.iter().map(|&(a, s)| Crossing::new(a, s)).collect())
    }

    fn word(letters: &[(&str, i8)]) -> CrossingWord {
        CrossingWord::new(
            letters.iter()
                .map(|&(l, s)| Letter::new(l, Sign::try_from(s).unwrap()))
                .collect(),
        )
    }

    #[test]
    fn step_values() {
        assert_eq!(phi_step(3, 1).unwrap(), int(1));
        assert_eq!(phi_step(3, 2).unwrap(), int(-1));
        assert_eq!(phi_step(2, 1).unwrap(), int(0));
        let sept: Vec<Rational> = (1..7).map(|i| phi_step(7, i).unwrap()).collect();
        let expect: Vec<Rational> = [15, 9, 3, -3, -9, -15]
            .iter()
            .map(|&p| ratio(p, 7))
            .collect();
        assert_eq!(sept, expect);
        assert_eq!(
            phi_step(3, 0),
            Err(StepError::OffsetOutOfRange { s: 3, i: 0 })
        );
        assert_eq!(
            phi_step(3, 3),
            Err(StepError::OffsetOutOfRange { s: 3, i: 3 })
        );
        assert_eq!(phi_step(1, 1), Err(StepError::PolygonTooSmall { s: 1 }));
    }

    #[test]
    fn empty_and_trivial_paths() {
        let t = pair_of_pants();
        assert_eq!(phi_path(&t, &TessPath::default()).unwrap(), int(0));
        assert_eq!(phi_path(&t, &path(&[(0, L)])).unwrap(), int(0));
    }

    #[test]
    fn triangle_counterclockwise_defect_is_three() {
        let t = pair_of_pants();
        let p1 = path(&[(0, L), (1, R)]);
        let p2 = path(&[(1, L), (2, R)]);
        assert_eq!(phi_path(&t, &p1).unwrap(), int(1));
        assert_eq!(phi_path(&t, &p2).unwrap(), int(1));
        assert_eq!(phi_defect(&t, &p1, &p2).unwrap(), int(3));
        // clockwise: reverse order
        assert_eq!(
            phi_defect(&t, &p2.reversed(), &p1.reversed()).unwrap(),
            int(-3)
        );
    }

    #[test]
    fn defect_with_own_reverse_is_zero() {
        let t = genus_two();
        let p = TessPath::new(fuzz::walk_from(
            &t,
            Crossing::new(0, L),
            6,
            &mut ChaCha8Rng::seed_from_u64(3),
        ));
        assert_eq!(phi_defect(&t, &p, &p.reversed()).unwrap(), int(0));
    }

    #[test]
    fn figure_word_evaluates_to_one() {
        let w = word(&[("d1", 1), ("d1", 1), ("d1", 1), ("d2", -1), ("d2", -1)]);
        assert_eq!(pa_phi(&w).unwrap(), 1);
    }

    #[test]
    fn boundary_loop_words() {
        for n in 1..8 {
            let off: Vec<(&str, i8)> = vec![("d", 1); n];
            assert_eq!(pa_phi(&word(&off)).unwrap(), n as i64 - 1);
            let mut on = word(&vec![("d", 1); n + 1]);
            on.letters[0].endpoint = true;
            on.letters[n].endpoint = true;
            assert_eq!(pa_phi(&on).unwrap(), n as i64);
        }
    }

    #[test]
    fn word_defects() {
        let w1 = word(&[("d", 1)]);
        assert_eq!(pa_phi_defect(&w1, &w1).unwrap(), -1);
        let w = word(&[("a", 1), ("a", 1), ("b", -1), ("c", 1)]);
        assert_eq!(pa_phi_defect(&w, &w.inverse()).unwrap(), 0);
    }

    #[test]
    fn word_errors() {
        let w = word(&[("a", 1), ("b", 1), ("a", 1)]);
        assert_eq!(
            pa_phi(&w),
            Err(WordError::NonContiguous { lift: "a".into() })
        );
        // contiguity restored by cancellation
        assert_eq!(
            pa_phi(&word(&[("a", 1), ("b", 1), ("b", -1), ("a", 1)])).unwrap(),
            1
        );
        let mut w = word(&[("a", 1), ("a", 1), ("a", 1)]);
        w.letters[1].endpoint = true;
        assert_eq!(pa_phi(&w), Err(WordError::InteriorEndpoint { index: 1 }));
    }

    #[test]
    fn word_json() {
        let w: CrossingWord = serde_json::from_str(
            r#"{"letters":[{"lift":"d1","sign":1},{"lift":"d1","sign":-1,"endpoint":true}]}"#,
        )
        .unwrap();
        assert_eq!(w.letters[1].sign, Sign::Minus);
        assert!(
            serde_json::from_str::<CrossingWord>(r#"{"letters":[{"lift":"d","sign":2}]}"#).is_err()
        );
    }

    #[test]
    fn heptagon_offsets() {
        let t = heptagon_pair();
        // enter P0 through arc 0, leave through arc i: offset i
        for i in 1..7 {
            let p = path(&[(0, L), (i, R)]);
            assert_eq!(phi_path(&t, &p).unwrap(), phi_step(7, i).unwrap());
        }
    }
}
