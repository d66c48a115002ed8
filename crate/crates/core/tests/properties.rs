use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use obook_core::monodromy::{rotation_number, CircleMapLift, RotationNumber, RotationOptions};
use obook_core::padyn::{
    dilatation, enumerate_orbit_classes, lefschetz_sum, orbit_census, MatrixEdge,
    SignedTransitionMatrix,
};
use obook_core::rademacher::{fuzz, pa_phi, pa_phi_defect, phi_defect, phi_path};
use obook_core::rational::{int, ratio, Rational};
use obook_core::seiferthc::{
    euler_number, growth_function, hc_generators, FiberInvariant, PeriodicOpenBookData,
    SeifertInvariants,
};
use obook_core::surface::{
    automorphism_apply, check_automorphism, fixtures, join_paths, reduce_path, validate, ArcImage,
    Crossing, Relabeling, TessPath, Tessellation,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tessellations() -> Vec<Tessellation> {
    vec![
        fixtures::pair_of_pants(),
        fixtures::holed_torus(),
        fixtures::genus_two(),
        fixtures::heptagon_pair(),
    ]
}

/// Walk that may turn back through the side it entered, producing unreduced paths.
fn backtracking_path(tess: &Tessellation, steps: usize, rng: &mut ChaCha8Rng) -> TessPath {
    let mut cur = fuzz::random_crossing(tess, rng);
    let mut out = vec![cur];
    for _ in 0..steps {
        let (p, _) = tess.slot(cur.arc, cur.enter).unwrap();
        let sides = &tess.polygons()[p].sides;
        let s = sides[rng.gen_range(0..sides.len())];
        cur = Crossing::new(s.arc, s.side.opposite());
        out.push(cur);
    }
    TessPath::new(out)
}

/// Repeatedly deletes the first (or last) cancelling adjacent pair.
fn reduce_by_deletion(path: &TessPath, from_left: bool) -> Vec<Crossing> {
    let mut c = path.crossings.clone();
    loop {
        let pairs: Vec<usize> = (0..c.len().saturating_sub(1))
            .filter(|&i| c[i + 1] == c[i].reversed())
            .collect();
        let pick = if from_left {
            pairs.first()
        } else {
            pairs.last()
        };
        match pick {
            Some(&i) => {
                c.drain(i..i + 2);
            }
            None => return c,
        }
    }
}

/// Every orientation-preserving relabeling, by brute force over arc
/// permutations, flips and polygon permutations.
fn all_automorphisms(tess: &Tessellation) -> Vec<Relabeling> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let arcs = tess.arc_count();
    let mut out = Vec::new();
    for ap in perms(arcs) {
        for flips in 0..(1u32 << arcs) {
            for pp in perms(tess.polygons().len()) {
                let g = Relabeling {
                    arcs: (0..arcs)
                        .map(|a| ArcImage {
                            arc: ap[a],
                            flip: flips >> a & 1 == 1,
                        })
                        .collect(),
                    polygons: pp,
                };
                if check_automorphism(tess, &g).is_ok() {
                    out.push(g);
                }
            }
        }
    }
    out
}

#[test]
fn fixtures_satisfy_euler_identity() {
    for t in tessellations() {
        assert!(validate(&t).is_empty());
        let sig = t.signature();
        assert_eq!(
            t.polygons().len() as i64 - t.arc_count() as i64,
            sig.euler_characteristic()
        );
        assert_eq!(t.boundary_cycles(), sig.boundary_components as usize);
    }
}

#[test]
fn pants_has_six_automorphisms() {
    let t = fixtures::pair_of_pants();
    assert_eq!(all_automorphisms(&t).len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_is_confluent_and_idempotent(seed in any::<u64>(), which in 0usize..4, steps in 0usize..30) {
        let t = &tessellations()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = backtracking_path(t, steps, &mut rng);
        let r = reduce_path(t, &p).unwrap();
        prop_assert_eq!(&r.crossings, &reduce_by_deletion(&p, true));
        prop_assert_eq!(&r.crossings, &reduce_by_deletion(&p, false));
        prop_assert_eq!(reduce_path(t, &r).unwrap(), r.clone());
        let mut there_and_back = p.crossings.clone();
        there_and_back.extend(p.reversed().crossings);
        prop_assert!(reduce_path(t, &TessPath::new(there_and_back)).unwrap().is_empty());
    }

    #[test]
    fn phi_is_an_antisymmetric_quasimorphism(seed in any::<u64>(), which in 0usize..4) {
        let t = &tessellations()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p1 = fuzz::random_path(t, 15, &mut rng);
        let p2 = fuzz::random_continuation(t, &p1, 15, &mut rng);
        let d = phi_defect(t, &p1, &p2).unwrap();
        prop_assert!(d == int(-3) || d == int(0) || d == int(3), "defect {}", d);
        prop_assert_eq!(phi_path(t, &p1.reversed()).unwrap(), -phi_path(t, &p1).unwrap());
    }

    #[test]
    fn phi_is_invariant_under_automorphisms(seed in any::<u64>()) {
        let t = fixtures::pair_of_pants();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = fuzz::random_path(&t, 12, &mut rng);
        for g in all_automorphisms(&t) {
            let q = automorphism_apply(&t, &g, &p).unwrap();
            prop_assert_eq!(phi_path(&t, &q).unwrap(), phi_path(&t, &p).unwrap());
        }
    }

    #[test]
    fn conjugation_moves_phi_by_at_most_six(seed in any::<u64>(), which in 0usize..3) {
        let t = &tessellations()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = fuzz::random_path(t, 8, &mut rng);
        let end = *q.crossings.last().unwrap();
        // a loop p from q's last arc back to it
        let p = (0..200).find_map(|_| {
            let w = fuzz::walk_from(t, end, rng.gen_range(1..12), &mut rng);
            (w.last().unwrap().arc == end.arc).then(|| TessPath::new(w))
        });
        if let Some(p) = p {
            let qp = join_paths(t, &q, &p).unwrap();
            let qpq = join_paths(t, &qp, &q.reversed()).unwrap();
            let diff = phi_path(t, &qpq).unwrap() - phi_path(t, &p).unwrap();
            prop_assert!(diff <= int(6) && diff >= int(-6), "diff {}", diff);
        }
    }

    #[test]
    fn word_defect_is_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w1 = fuzz::random_word("a", 6, &mut rng);
        let w2 = fuzz::random_partner(&w1, "b", 6, &mut rng);
        let d = pa_phi_defect(&w1, &w2).unwrap();
        prop_assert!((-1..=1).contains(&d));
        prop_assert_eq!(pa_phi(&w1.inverse()).unwrap(), -pa_phi(&w1).unwrap());
    }
}

fn random_pl(rng: &mut ChaCha8Rng, pieces: usize) -> CircleMapLift {
    let mut xs: BTreeSet<i64> = BTreeSet::new();
    xs.insert(0);
    while xs.len() < pieces {
        xs.insert(rng.gen_range(1..60));
    }
    let mut ys: Vec<i64> = Vec::new();
    let start = rng.gen_range(0..60);
    let mut y = start;
    for _ in 0..pieces {
        ys.push(y);
        y += rng.gen_range(1..=60 / pieces as i64);
    }
    let pts = xs
        .into_iter()
        .zip(ys)
        .map(|(x, y)| (ratio(x, 60), ratio(y, 60)))
        .collect();
    CircleMapLift::new(pts).unwrap()
}

fn quick(q: u64) -> RotationOptions {
    RotationOptions {
        max_denominator: q,
        iterations: 500,
    }
}

fn overlaps(a: &RotationNumber, b: &RotationNumber) -> bool {
    let (alo, ahi) = a.bounds();
    let (blo, bhi) = b.bounds();
    alo <= bhi && blo <= ahi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rigid_rotations_are_exact(p in -3000i64..3000, q in 1i64..=1000) {
        let f = CircleMapLift::rigid(ratio(p, q));
        let rho = rotation_number(&f, RotationOptions::default());
        prop_assert_eq!(rho.exact(), Some(&ratio(p, q)));
        let rho2 = rotation_number(&f.compose(&f), RotationOptions::default());
        if ratio(2 * p, q).denom() <= &BigInt::from(1000) {
            prop_assert_eq!(rho2.exact(), Some(&ratio(2 * p, q)));
        }
    }

    #[test]
    fn conjugacy_invariance(seed in any::<u64>(), p in 0i64..7, q in 1i64..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_pl(&mut rng, 3);
        let base = CircleMapLift::rigid(ratio(p, q));
        let f = g.compose(&base).compose(&g.inverse());
        let h = random_pl(&mut rng, 2);
        let conj = h.compose(&f).compose(&h.inverse());
        let a = rotation_number(&f, quick(20));
        let b = rotation_number(&conj, quick(20));
        prop_assert_eq!(a.exact(), Some(&ratio(p, q)));
        prop_assert_eq!(b.exact(), Some(&ratio(p, q)));
        // generic maps: the certified answers must be compatible
        let r = random_pl(&mut rng, 3);
        let a = rotation_number(&r, quick(12));
        let b = rotation_number(&h.compose(&r).compose(&h.inverse()), quick(12));
        prop_assert!(overlaps(&a, &b), "{:?} vs {:?}", a, b);
    }

    #[test]
    fn monotone_in_the_map(seed in any::<u64>(), c in 0i64..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_pl(&mut rng, 3);
        let g = f.shifted(&ratio(c, 40));
        let (a, b) = (rotation_number(&f, quick(12)), rotation_number(&g, quick(12)));
        prop_assert!(a.bounds().0 <= b.bounds().1);
        // iterate law on an exact case
        if let Some(v) = a.exact() {
            let ff = rotation_number(&f.compose(&f), quick(24));
            prop_assert_eq!(ff.exact(), Some(&(v * int(2))));
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> SignedTransitionMatrix {
    let l = rng.gen_range(1..=4);
    let mut edges = Vec::new();
    for i in 0..l {
        for j in 0..l {
            let count = rng.gen_range(0..=2);
            if count > 0 {
                let signs = (0..count)
                    .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                    .collect();
                edges.push(MatrixEdge {
                    from: i,
                    to: j,
                    signs: Some(signs),
                    count: None,
                });
            }
        }
    }
    SignedTransitionMatrix::new(l, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn census_matches_cycle_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng);
        for row in orbit_census(&m, 6) {
            let classes = enumerate_orbit_classes(&m, row.period, 1 << 22).unwrap();
            let simple = classes.iter().filter(|c| c.cover_degree == 1).count();
            let good = classes.iter().filter(|c| c.is_good()).count();
            prop_assert_eq!(&row.simple, &BigInt::from(simple));
            prop_assert_eq!(row.good.clone(), Some(BigInt::from(good)));
            prop_assert!(BigInt::from(good) <= row.classes);
        }
    }

    #[test]
    fn mobius_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng);
        let census = orbit_census(&m, 20);
        for row in &census {
            let total: BigInt = census
                .iter()
                .filter(|r| row.period % r.period == 0)
                .map(|r| BigInt::from(r.period) * &r.simple)
                .sum();
            prop_assert_eq!(&total, &row.periodic_points);
            prop_assert!(row.simple >= BigInt::zero());
        }
    }

    #[test]
    fn unsigned_lefschetz_is_minus_trace(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<u64>> = {
            let l = rng.gen_range(1..=4);
            (0..l).map(|_| (0..l).map(|_| rng.gen_range(0..=2)).collect()).collect()
        };
        let m = SignedTransitionMatrix::from_multiplicities(&rows).unwrap();
        for (row, period) in orbit_census(&m, 8).iter().zip(1..) {
            prop_assert_eq!(lefschetz_sum(&m, period).unwrap(), -row.periodic_points.clone());
        }
    }

    #[test]
    fn dilatation_bounds_traces(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng);
        if let Ok(d) = dilatation(&m, &ratio(1, 1_000_000)) {
            let tr30 = Rational::from_integer(orbit_census(&m, 30).pop().unwrap().periodic_points);
            let lo30 = num_traits::pow(d.lo.clone(), 30);
            prop_assert!(lo30 <= tr30 * int(m.size() as i64));
        }
    }

    #[test]
    fn euler_number_is_additive(a in proptest::collection::vec((1i64..30, -30i64..30), 0..6),
                                b in proptest::collection::vec((1i64..30, -30i64..30), 0..6)) {
        let inv = |v: &[(i64, i64)]| SeifertInvariants {
            base_genus: 0,
            fibers: v.iter().map(|&(alpha, beta)| FiberInvariant { alpha, beta }).collect(),
        };
        let joined: Vec<_> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(
            euler_number(&inv(&joined)).unwrap(),
            euler_number(&inv(&a)).unwrap() + euler_number(&inv(&b)).unwrap()
        );
    }

    #[test]
    fn growth_function_is_monotone_and_additive(genus in 0u32..3, n in 1u32..6, s in 2u32..5, cap in 1i64..8) {
        let data = |orders: Vec<u32>| PeriodicOpenBookData {
            orbifold_genus: genus,
            interior_orders: orders,
            binding_count: None,
            order: n,
            twists: vec![1],
        };
        let a = hc_generators(&data(vec![]), &int(cap)).unwrap();
        let b = hc_generators(&data(vec![s]), &int(cap)).unwrap();
        let extra: Vec<_> = b.iter().filter(|r| !a.contains(r)).cloned().collect();
        let (ga, gb, ge) = (growth_function(&a, cap as u64), growth_function(&b, cap as u64), growth_function(&extra, cap as u64));
        for i in 0..cap as usize {
            prop_assert_eq!(gb[i].n, ga[i].n + ge[i].n);
            if i > 0 {
                prop_assert!(gb[i].n >= gb[i - 1].n);
            }
        }
    }
}
