//! One line per acceptance criterion. Runs without the test harness so the
//! lines always show up in `cargo test` output.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use obook_core::monodromy::{
    classify_contact, fdtc, rotation_number, CircleMapLift, ClassificationReport, MonodromyClass,
    OpenBookDescriptor, RotationOptions, Tightness, Weinstein,
};
use obook_core::padyn::{
    dilatation, good_orbit_count, growth_certificate, hc_growth_lower_bound, periodic_points,
    simple_orbit_count, MatrixEdge, SignedTransitionMatrix,
};
use obook_core::rademacher::{fuzz, pa_phi, phi_step, CrossingWord, Letter, Sign};
use obook_core::rational::{int, ratio, to_f64, Rational};
use obook_core::seiferthc::{
    admits_invariant_transverse, classify_growth, euler_number, model_counting, FiberInvariant,
    GrowthClass, ModelExample, SeifertInvariants,
};
use obook_core::surface::{fixtures, SurfaceSignature};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed < budget
}

fn c1() -> Outcome {
    let start = Instant::now();
    let seven: Vec<Rational> = (1..7).map(|i| phi_step(7, i).unwrap()).collect();
    let two = phi_step(2, 1).unwrap();
    let three: Vec<Rational> = (1..3).map(|i| phi_step(3, i).unwrap()).collect();
    let elapsed = start.elapsed();
    let want: Vec<Rational> = [15, 9, 3, -3, -9, -15]
        .iter()
        .map(|&k| ratio(k, 7))
        .collect();
    let pass = seven == want
        && two == int(0)
        && three.iter().all(|v| *v == int(1) || *v == int(-1))
        && within(elapsed, Duration::from_millis(1));
    check(
        pass,
        format!(
            "phi(7, 1..6) = {:?} in {elapsed:?}",
            seven.iter().map(|v| v.to_string()).collect::<Vec<_>>()
        ),
    )
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, t) in [
        ("pants", fixtures::pair_of_pants()),
        ("torus", fixtures::holed_torus()),
        ("genus2", fixtures::genus_two()),
    ] {
        let s = fuzz::quasimorphism_fuzz(&t, 10_000, &mut rng);
        pass &= s.clean() && s.path_pairs == 10_000 && s.word_pairs == 10_000;
        detail.push(format!(
            "{name} path {:?} word {:?} violations {}",
            s.defect_counts,
            s.word_defect_counts,
            s.defect_violations
                + s.antisymmetry_violations
                + s.word_defect_violations
                + s.word_antisymmetry_violations
        ));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, Duration::from_secs(10));
    check(pass, format!("{}; {elapsed:?}", detail.join("; ")))
}

fn word(runs: &[(&str, i64)]) -> CrossingWord {
    let mut letters = Vec::new();
    for &(lift, k) in runs {
        let sign = if k > 0 { Sign::Plus } else { Sign::Minus };
        letters.extend((0..k.abs()).map(|_| Letter::new(lift, sign)));
    }
    CrossingWord::new(letters)
}

fn c3() -> Outcome {
    let figure = pa_phi(&word(&[("d1", 3), ("d2", -2)])).unwrap();
    let mut loops = true;
    for n in 1..=8i64 {
        let off = pa_phi(&word(&[("d", n)])).unwrap();
        let mut on = word(&[("d", n + 1)]);
        let last = on.letters.len() - 1;
        on.letters[0].endpoint = true;
        on.letters[last].endpoint = true;
        loops &= off == n - 1 && pa_phi(&on).unwrap() == n;
    }
    check(
        figure == 1 && loops,
        format!("figure word Phi = {figure}; boundary loops n and n-1 for n <= 8: {loops}"),
    )
}

fn c4() -> Outcome {
    let start = Instant::now();
    let opts = RotationOptions {
        max_denominator: 1000,
        iterations: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    for _ in 0..100 {
        let q: i64 = rng.gen_range(1..=1000);
        let p: i64 = rng.gen_range(-2 * q..=2 * q);
        let rho = ratio(p, q);
        let f = CircleMapLift::rigid(rho.clone());
        let r1 = rotation_number(&f, opts);
        let r2 = rotation_number(&f.compose(&f), opts);
        if r1.exact() != Some(&rho) || r2.exact() != Some(&(&rho * int(2))) {
            bad.push(format!("{p}/{q}"));
        }
    }
    let map: CircleMapLift =
        serde_json::from_str(&std::fs::read_to_string(data("three_cycle_map.json")).unwrap())
            .unwrap();
    let cycle = rotation_number(&map, opts);
    let elapsed = start.elapsed();
    let pass = bad.is_empty()
        && cycle.exact() == Some(&ratio(1, 3))
        && within(elapsed, Duration::from_secs(5));
    check(pass, format!("100 rigid p/q exact and rho(f^2) = 2 rho(f), failures {bad:?}; 3-cycle map {:?}; {elapsed:?}", cycle.exact().map(|v| v.to_string())))
}

fn book(periodic: bool, coeffs: &[(u32, i64)]) -> OpenBookDescriptor {
    let coefficients = coeffs
        .iter()
        .enumerate()
        .map(|(i, &(n, k))| fdtc(i, n, k, None, RotationOptions::default()).unwrap())
        .collect();
    let class = if periodic {
        MonodromyClass::Periodic {
            order: 6,
            coefficients,
        }
    } else {
        MonodromyClass::PseudoAnosov { coefficients }
    };
    OpenBookDescriptor {
        page: SurfaceSignature {
            genus: 1,
            boundary_components: coeffs.len() as u32,
        },
        word: vec![],
        class,
    }
}

fn c5() -> Outcome {
    use Tightness::*;
    use Weinstein::*;
    type Row = (
        &'static str,
        bool,
        &'static [(u32, i64)],
        Tightness,
        Option<bool>,
        Weinstein,
    );
    let table: [Row; 9] = [
        (
            "periodic c=(0,0)",
            true,
            &[(1, 0), (1, 0)],
            Tight,
            Some(true),
            Holds,
        ),
        ("periodic c=1/2", true, &[(2, 1)], Tight, Some(true), Holds),
        (
            "periodic c=-1/3",
            true,
            &[(3, -1)],
            Overtwisted,
            Some(false),
            Holds,
        ),
        ("pA c=0", false, &[(3, 0)], Overtwisted, Some(false), Holds),
        (
            "pA c=-1/4",
            false,
            &[(4, -1)],
            Overtwisted,
            Some(false),
            Holds,
        ),
        ("pA c=1/5", false, &[(5, 1)], Undetermined, None, Open),
        ("pA c=2/5", false, &[(5, 2)], UniversallyTight, None, Open),
        ("pA c=3/5", false, &[(5, 3)], UniversallyTight, None, Holds),
        (
            "pA c=(1/5,2/7)",
            false,
            &[(5, 1), (7, 2)],
            Undetermined,
            None,
            Open,
        ),
    ];
    let mut wrong = Vec::new();
    for (name, periodic, coeffs, tight, stein, weinstein) in table {
        let r: ClassificationReport = classify_contact(&book(periodic, coeffs)).unwrap();
        let rv = coeffs
            .iter()
            .all(|&(_, k)| if periodic { k >= 0 } else { k > 0 });
        if (r.tightness, r.stein_fillable, r.weinstein, r.right_veering)
            != (tight, stein, weinstein, rv)
        {
            wrong.push(format!("{name}: {r:?}"));
        }
    }
    check(wrong.is_empty(), format!("9 cases, mismatches {wrong:?}"))
}

/// Primitive closed edge walks of length `d`, split by edge-sign product.
fn brute_primitive(edges: &[(usize, usize, i8)], d: usize) -> (u64, u64) {
    let mut walk = Vec::with_capacity(d);
    let (mut plus, mut minus) = (0u64, 0u64);
    fn rec(
        edges: &[(usize, usize, i8)],
        d: usize,
        walk: &mut Vec<usize>,
        plus: &mut u64,
        minus: &mut u64,
    ) {
        if walk.len() == d {
            if edges[walk[d - 1]].1 != edges[walk[0]].0 {
                return;
            }
            let primitive = (1..d)
                .all(|r| !d.is_multiple_of(r) || (0..d).any(|i| walk[i] != walk[(i + r) % d]));
            if primitive {
                let sign: i8 = walk.iter().map(|&e| edges[e].2).product();
                if sign > 0 {
                    *plus += 1;
                } else {
                    *minus += 1;
                }
            }
            return;
        }
        for (e, &(from, _, _)) in edges.iter().enumerate() {
            if walk.last().is_none_or(|&l| edges[l].1 == from) {
                walk.push(e);
                rec(edges, d, walk, plus, minus);
                walk.pop();
            }
        }
    }
    rec(edges, d, &mut walk, &mut plus, &mut minus);
    (plus / d as u64, minus / d as u64)
}

fn trace_power(a: &[Vec<u64>], m: u32) -> BigInt {
    let l = a.len();
    let mut p: Vec<Vec<BigInt>> = (0..l)
        .map(|i| (0..l).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    for _ in 0..m {
        p = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| (0..l).map(|k| &p[i][k] * a[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    (0..l).map(|i| p[i][i].clone()).sum()
}

fn c6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    let mut mobius_bad = 0;
    for _ in 0..200 {
        let l = rng.gen_range(1..=4);
        let a: Vec<Vec<u64>> = (0..l)
            .map(|_| (0..l).map(|_| rng.gen_range(0..=2)).collect())
            .collect();
        let mut groups = Vec::new();
        let mut edges = Vec::new();
        for i in 0..l {
            for j in 0..l {
                if a[i][j] > 0 {
                    let signs: Vec<i8> = (0..a[i][j])
                        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                        .collect();
                    edges.extend(signs.iter().map(|&s| (i, j, s)));
                    groups.push(MatrixEdge {
                        from: i,
                        to: j,
                        signs: Some(signs),
                        count: None,
                    });
                }
            }
        }
        if groups.is_empty() {
            continue;
        }
        let m = SignedTransitionMatrix::new(l, groups).unwrap();
        let prim: Vec<(u64, u64)> = (1..=8).map(|d| brute_primitive(&edges, d)).collect();
        for period in 1..=8u32 {
            let (plus, minus) = prim[period as usize - 1];
            let mut good = 0u64;
            for d in (1..=period).filter(|d| period % d == 0) {
                let (p, n) = prim[d as usize - 1];
                good += if (period / d) % 2 == 1 { p + n } else { p };
            }
            if simple_orbit_count(&m, period) != BigInt::from(plus + minus)
                || good_orbit_count(&m, period).unwrap() != BigInt::from(good)
            {
                mismatches += 1;
            }
        }
        for period in 1..=20u32 {
            let sum: BigInt = (1..=period)
                .filter(|d| period % d == 0)
                .map(|d| simple_orbit_count(&m, d) * d)
                .sum();
            let tr = trace_power(&a, period);
            if sum != tr || periodic_points(&m, period) != tr {
                mobius_bad += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && mobius_bad == 0 && within(elapsed, Duration::from_secs(60));
    check(pass, format!("200 matrices: count mismatches {mismatches}, Mobius failures {mobius_bad}; {elapsed:?}"))
}

fn cat_map(signed: bool) -> SignedTransitionMatrix {
    let rows = [[2u64, 1], [1, 1]];
    let groups = (0..2)
        .flat_map(|i| {
            (0..2).map(move |j| MatrixEdge {
                from: i,
                to: j,
                signs: signed.then(|| vec![1; rows[i][j] as usize]),
                count: (!signed).then_some(rows[i][j]),
            })
        })
        .collect();
    SignedTransitionMatrix::new(2, groups).unwrap()
}

fn c7() -> Outcome {
    let start = Instant::now();
    let m = cat_map(false);
    let tol = ratio(1, 1_000_000_000);
    let b = dilatation(&m, &tol).unwrap();
    // (3 + sqrt 5)/2 is the root of x^2 - 3x + 1 above 3/2, where the quadratic increases
    let quad = |x: &Rational| x * x - x * int(3) + int(1);
    let contains = b.lo > ratio(3, 2) && quad(&b.lo) <= int(0) && quad(&b.hi) >= int(0);
    let width = &b.hi - &b.lo;
    let cert = growth_certificate(&m, 30, 0.01).unwrap();
    let lambda = (3.0 + 5f64.sqrt()) / 2.0;
    let a = to_f64(&cert.a_const);
    let holds = (1..=30).all(|k| {
        let tr = to_f64(&Rational::from_integer(periodic_points(&m, k)));
        tr >= a * ((lambda.ln() - 0.01) * k as f64).exp()
    });
    let elapsed = start.elapsed();
    let pass =
        contains && width <= tol && a >= 0.9 && holds && within(elapsed, Duration::from_secs(1));
    check(
        pass,
        format!(
            "interval [{:.12}, {:.12}] width {:.1e} contains lambda: {contains}; A_const {a:.4}, bound holds for m <= 30: {holds}; {elapsed:?}",
            to_f64(&b.lo),
            to_f64(&b.hi),
            to_f64(&width)
        ),
    )
}

fn c8() -> Outcome {
    let brieskorn = SeifertInvariants {
        base_genus: 0,
        fibers: [(2, 1), (3, 1), (5, 1)]
            .iter()
            .map(|&(alpha, beta)| FiberInvariant { alpha, beta })
            .collect(),
    };
    let e = euler_number(&brieskorn).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree = 0;
    for _ in 0..20 {
        let fibers: Vec<FiberInvariant> = (0..rng.gen_range(1..=6))
            .map(|_| FiberInvariant {
                alpha: rng.gen_range(2..=12),
                beta: rng.gen_range(-12..=12),
            })
            .collect();
        // sign of the sum over a common denominator
        let lcm = fibers.iter().fold(1i128, |l, f| {
            let a = f.alpha as i128;
            let (mut x, mut y) = (l, a);
            while y != 0 {
                (x, y) = (y, x % y);
            }
            l / x * a
        });
        let numerator: i128 = fibers
            .iter()
            .map(|f| f.beta as i128 * (lcm / f.alpha as i128))
            .sum();
        let inv = SeifertInvariants {
            base_genus: rng.gen_range(0..3),
            fibers,
        };
        if admits_invariant_transverse(&inv).unwrap() == (numerator < 0) {
            agree += 1;
        }
    }
    check(
        e == ratio(31, 30) && agree == 20,
        format!("e(2,3,5) = {e}; criterion agrees on {agree}/20 random lists"),
    )
}

fn c9() -> Outcome {
    let start = Instant::now();
    let fit = |example: ModelExample, cap: u64| {
        let samples = model_counting(example, cap, example.default_cap()).unwrap();
        classify_growth(&samples, 0.1).unwrap().class
    };
    let s3 = fit(ModelExample::S3, 50);
    let t3 = fit(ModelExample::T3, 50);
    let words = fit(ModelExample::SurfaceGroupWords { genus: 2 }, 14);
    let elapsed = start.elapsed();
    let pass = s3 == GrowthClass::Linear
        && t3 == GrowthClass::Polynomial { degree: 2 }
        && words == GrowthClass::Exponential
        && within(elapsed, Duration::from_secs(30));
    check(
        pass,
        format!("S3 {s3:?}, T3 {t3:?}, words(g=2) {words:?}; {elapsed:?}"),
    )
}

fn c10() -> Outcome {
    let hc = hc_growth_lower_bound(&cat_map(true), 25, 0.01).unwrap();
    let target = 2.6f64.ln() - 0.05;
    let c2 = hc.c2.as_ref().map(to_f64);
    let c1 = hc.c1.as_ref().map(to_f64);
    let fits = match (c1, c2) {
        (Some(c1), Some(c2)) => hc.table.iter().all(|r| {
            to_f64(&Rational::from_integer(r.good.clone())) >= c1 * (c2 * r.period as f64).exp()
        }),
        _ => false,
    };
    let pass = c2.is_some_and(|c| c >= target) && fits;
    check(
        pass,
        format!("c1 {c1:?}, c2 {c2:?} >= {target:.4}; good(m) >= c1 e^(c2 m) for m <= 25: {fits}"),
    )
}

fn c11() -> Outcome {
    let d = |n: &str| data(n).display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["phi".into(), "fuzz".into(), "--pairs".into(), "2000".into()],
        vec!["rotnum".into(), "--map".into(), d("three_cycle_map.json")],
        vec!["classify".into(), "--book".into(), d("pa_two_fifths.json")],
        vec![
            "orbits".into(),
            "--matrix".into(),
            d("mixed_matrix.json"),
            "--signed".into(),
            "--certificate".into(),
        ],
        vec![
            "seifert".into(),
            "hc".into(),
            "--data".into(),
            d("binding_pob.json"),
        ],
        vec![
            "growth".into(),
            "model".into(),
            "--example".into(),
            "words".into(),
        ],
        vec![
            "--output".into(),
            "text".into(),
            "phi".into(),
            "step".into(),
            "--sides".into(),
            "9".into(),
        ],
    ];
    let mut same = 0;
    for args in &runs {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_obook"))
                .args(["--seed", "17"])
                .args(args)
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        if a.status.success() && a.stdout == b.stdout && a.stderr == b.stderr {
            same += 1;
        }
    }
    check(
        same == runs.len(),
        format!(
            "{same}/{} invocations byte-identical across two runs with --seed 17",
            runs.len()
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let o = f();
        println!(
            "criterion {n:>2} {} {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
