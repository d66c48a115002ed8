use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use obook_core::monodromy::{
    classify_contact, fdtc, right_veering, rotation_number, stabilize, BookDoc, CircleMapLift,
    HandleAttachment, MapDoc, MonodromyClass, OpenBookDescriptor, RotationOptions,
};
use obook_core::padyn::{
    dilatation, growth_certificate, hc_growth_lower_bound, orbit_census, MatrixDoc,
    SignedTransitionMatrix,
};
use obook_core::rademacher::{
    fuzz, pa_phi, pa_phi_defect, phi_defect, phi_path, phi_step, CrossingWord,
};
use obook_core::rational::{format_rational, int, parse_rational};
use obook_core::seiferthc::{
    admits_invariant_transverse, classify_growth, euler_number, growth_function, hc_generators,
    model_counting, GeneratorSource, GrowthSample, ModelExample, PeriodicOpenBookData,
    SeifertInvariants, MIN_GROWTH_SAMPLES,
};
use obook_core::surface::{fixtures, reduce_path, traversals, TessPath, Tessellation};

use crate::report::{domain, CliError};
use crate::{usage, Command, Ctx, GrowthCommand, ModelArg, Outcome, PhiCommand, SeifertCommand};

const FUZZ_PAIR_LIMIT: usize = 10_000_000;
const PERIOD_LIMIT: u32 = 5_000;
const ITERATION_LIMIT: u64 = 100_000_000;
const HC_ACTION_LIMIT: u64 = 10_000;

const SINGULAR_CAVEAT: &str =
    "orbits through singular points of the invariant foliations are not modeled; \
their Lefschetz contributions carry an unquantified multiplicity";
const WORD_PROXY_CAVEAT: &str =
    "cyclically reduced cyclic words in a free group overcount conjugacy classes \
of the surface group; the counts are an exponential lower-bound proxy for closed geodesics";
const SYMBOLIC_MU: &str = "Conley-Zehnder indices are symbolic; only gradings mod 2 are computed";

fn ok(command: &str, results: Value) -> Result<Outcome, CliError> {
    Ok(Outcome {
        command: command.to_string(),
        results,
        warnings: Vec::new(),
        failure: None,
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

pub fn dispatch(command: Command, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match command {
        Command::Phi(c) => phi(c, ctx),
        Command::Rotnum {
            map,
            max_den,
            iterations,
        } => {
            let f = load_map(ctx, &map)?;
            let opts = rotation_options(max_den, iterations)?;
            let rho = rotation_number(&f, opts);
            ok(
                "rotnum",
                json!({
                    "rotation_number": rho,
                    "max_denominator": max_den,
                    "iterations": iterations,
                    "breakpoints": f.len(),
                }),
            )
        }
        Command::Fdtc {
            prongs,
            shift,
            boundary,
            map,
            max_den,
            iterations,
        } => {
            let lift = map.map(|m| load_map(ctx, &m)).transpose()?;
            let opts = rotation_options(max_den, iterations)?;
            let r = fdtc(boundary, prongs, shift, lift.as_ref(), opts).map_err(domain)?;
            ok(
                "fdtc",
                json!({
                    "record": r,
                    "fractional_part": format_rational(&r.fractional_part()),
                    "lift_checked": lift.is_some(),
                }),
            )
        }
        Command::Classify { book } => {
            let book = load_book(ctx, &book)?;
            let report = classify_contact(&book).map_err(domain)?;
            let coefficients = match &book.class {
                MonodromyClass::Periodic { coefficients, .. }
                | MonodromyClass::PseudoAnosov { coefficients } => to_value(coefficients),
                _ => Value::Array(vec![]),
            };
            ok(
                "classify",
                json!({
                    "class": book.class.name(),
                    "page": {"genus": book.page.genus, "boundary": book.page.boundary_components},
                    "coefficients": coefficients,
                    "right_veering": right_veering(&book).map_err(domain)?,
                    "classification": report,
                }),
            )
        }
        Command::Stabilize {
            book,
            negative,
            handle,
        } => {
            let handle = parse_handle(&handle)?;
            let book = load_book(ctx, &book)?;
            let out = stabilize(&book, !negative, handle).map_err(domain)?;
            ok(
                "stabilize",
                json!({
                    "positive": !negative,
                    "handle": handle,
                    "euler_characteristic_before": book.page.euler_characteristic(),
                    "euler_characteristic_after": out.page.euler_characteristic(),
                    "word_length": out.word.len(),
                    "book": out,
                }),
            )
        }
        Command::Orbits {
            matrix,
            max_period,
            signed,
            certificate,
            slack,
            tol,
        } => orbits(ctx, &matrix, max_period, signed, certificate, slack, &tol),
        Command::Seifert(c) => seifert(c, ctx),
        Command::Growth(c) => growth(c, ctx),
    }
}

fn rotation_options(max_den: u64, iterations: u64) -> Result<RotationOptions, CliError> {
    if max_den == 0 {
        return Err(usage("--max-den must be at least 1"));
    }
    if iterations > ITERATION_LIMIT {
        return Err(CliError::Cap(format!(
            "--iterations {iterations} exceeds the limit {ITERATION_LIMIT}"
        )));
    }
    Ok(RotationOptions {
        max_denominator: max_den,
        iterations,
    })
}

fn load_map(ctx: &mut Ctx, path: &std::path::Path) -> Result<CircleMapLift, CliError> {
    let doc: MapDoc = ctx.inputs.load(path)?;
    CircleMapLift::try_from(doc).map_err(domain)
}

fn load_book(ctx: &mut Ctx, path: &std::path::Path) -> Result<OpenBookDescriptor, CliError> {
    let doc: BookDoc = ctx.inputs.load(path)?;
    OpenBookDescriptor::try_from(doc).map_err(domain)
}

fn load_tessellation(ctx: &mut Ctx, path: &std::path::Path) -> Result<Tessellation, CliError> {
    let t: Tessellation = ctx.inputs.load(path)?;
    t.into_validated().map_err(domain)
}

fn parse_handle(s: &str) -> Result<HandleAttachment, CliError> {
    let bad = || usage(format!("--handle `{s}`: expected same:I or connect:I:J"));
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<u32>().map_err(|_| bad());
    match parts.as_slice() {
        ["same", i] => Ok(HandleAttachment::SameComponent(num(i)?)),
        ["connect", i, j] => Ok(HandleAttachment::Connecting(num(i)?, num(j)?)),
        _ => Err(bad()),
    }
}

fn phi(command: PhiCommand, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match command {
        PhiCommand::Step { sides } => {
            let rows: Vec<Value> = (1..sides.max(1))
                .map(|i| phi_step(sides, i).map(|v| json!({"i": i, "phi": format_rational(&v)})))
                .collect::<Result<_, _>>()
                .map_err(domain)?;
            if sides < 2 {
                return Err(domain(phi_step(sides, 1).unwrap_err()));
            }
            ok("phi step", json!({"sides": sides, "steps": rows}))
        }
        PhiCommand::Eval { tessellation, path } => {
            let tess = load_tessellation(ctx, &tessellation)?;
            let path: TessPath = ctx.inputs.load(&path)?;
            let value = phi_path(&tess, &path).map_err(domain)?;
            let reduced = reduce_path(&tess, &path).map_err(domain)?;
            let steps: Vec<Value> = traversals(&tess, &reduced)
                .map_err(domain)?
                .into_iter()
                .map(|t| {
                    let i = t.offset();
                    let v = if i == 0 {
                        int(0)
                    } else {
                        phi_step(t.size, i).expect("valid step")
                    };
                    json!({
                        "polygon": tess.polygons()[t.polygon].id,
                        "sides": t.size,
                        "offset": i,
                        "phi": format_rational(&v),
                    })
                })
                .collect();
            ok(
                "phi eval",
                json!({
                    "phi": format_rational(&value),
                    "input_length": path.len(),
                    "reduced": reduced,
                    "traversals": steps,
                }),
            )
        }
        PhiCommand::Pa { word } => {
            let w: CrossingWord = ctx.inputs.load(&word)?;
            let v = pa_phi(&w).map_err(domain)?;
            let runs: Vec<Value> = w
                .reduced()
                .runs()
                .into_iter()
                .map(|(lift, k)| json!({"lift": lift, "run": k}))
                .collect();
            ok(
                "phi pa",
                json!({"phi": format_rational(&int(v)), "runs": runs}),
            )
        }
        PhiCommand::Defect {
            tessellation,
            path,
            path2,
            word,
            word2,
        } => match (tessellation, path, path2, word, word2) {
            (Some(t), Some(p1), Some(p2), None, None) => {
                let tess = load_tessellation(ctx, &t)?;
                let p1: TessPath = ctx.inputs.load(&p1)?;
                let p2: TessPath = ctx.inputs.load(&p2)?;
                let d = phi_defect(&tess, &p1, &p2).map_err(domain)?;
                ok("phi defect", json!({"defect": format_rational(&d)}))
            }
            (None, None, None, Some(w1), Some(w2)) => {
                let w1: CrossingWord = ctx.inputs.load(&w1)?;
                let w2: CrossingWord = ctx.inputs.load(&w2)?;
                let d = pa_phi_defect(&w1, &w2).map_err(domain)?;
                ok("phi defect", json!({"defect": format_rational(&int(d))}))
            }
            _ => Err(usage(
                "phi defect takes --tessellation --path --path2, or --word --word2",
            )),
        },
        PhiCommand::Fuzz {
            pairs,
            tessellation,
        } => {
            if pairs > FUZZ_PAIR_LIMIT {
                return Err(CliError::Cap(format!(
                    "--pairs {pairs} exceeds the limit {FUZZ_PAIR_LIMIT}"
                )));
            }
            let named: Vec<(String, Tessellation)> = match tessellation {
                Some(path) => {
                    let t = load_tessellation(ctx, &path)?;
                    vec![(path.display().to_string(), t)]
                }
                None => vec![
                    ("pair_of_pants".into(), fixtures::pair_of_pants()),
                    ("holed_torus".into(), fixtures::holed_torus()),
                    ("genus_two".into(), fixtures::genus_two()),
                ],
            };
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut clean = true;
            let runs: Vec<Value> = named
                .iter()
                .map(|(name, t)| {
                    let summary = fuzz::quasimorphism_fuzz(t, pairs, &mut rng);
                    clean &= summary.clean();
                    json!({"tessellation": name, "summary": summary})
                })
                .collect();
            Ok(Outcome {
                command: "phi fuzz".into(),
                results: json!({"seed": ctx.seed, "pairs": pairs, "clean": clean, "runs": runs}),
                warnings: Vec::new(),
                failure: (!clean).then(|| "quasimorphism checks found violations".to_string()),
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn orbits(
    ctx: &mut Ctx,
    matrix: &std::path::Path,
    max_period: u32,
    signed: bool,
    certificate: bool,
    slack: f64,
    tol: &str,
) -> Result<Outcome, CliError> {
    if max_period == 0 {
        return Err(usage("--max-period must be at least 1"));
    }
    if max_period > PERIOD_LIMIT {
        return Err(CliError::Cap(format!(
            "--max-period {max_period} exceeds the limit {PERIOD_LIMIT}"
        )));
    }
    if !(slack > 0.0) || !slack.is_finite() {
        return Err(usage("--slack must be a positive number"));
    }
    let tol = parse_rational(tol).map_err(|e| usage(format!("--tol: {e}")))?;
    let doc: MatrixDoc = ctx.inputs.load(matrix)?;
    let m = SignedTransitionMatrix::try_from(doc).map_err(domain)?;
    if signed && !m.is_signed() {
        return Err(domain(obook_core::padyn::PadynError::MissingSigns));
    }
    let mut warnings = Vec::new();
    let bounds = match dilatation(&m, &tol) {
        Ok(b) => {
            if &b.hi - &b.lo > tol {
                warnings.push(format!(
                    "dilatation interval did not reach the tolerance after {} iterations",
                    b.iterations
                ));
            }
            if b.hi <= int(1) {
                warnings.push(
                    "Perron root is at most 1; the graph has no exponential orbit growth".into(),
                );
            }
            Some(b)
        }
        Err(e) => {
            warnings.push(format!("dilatation not certified: {e}"));
            None
        }
    };
    let table: Vec<Value> = orbit_census(&m, max_period)
        .into_iter()
        .map(|row| {
            let mut v = to_value(&row);
            if !signed {
                let obj = v.as_object_mut().expect("row is an object");
                for key in [
                    "signed_trace",
                    "simple_even",
                    "simple_odd",
                    "good",
                    "lefschetz",
                ] {
                    obj.remove(key);
                }
            }
            v
        })
        .collect();
    let mut results = json!({
        "size": m.size(),
        "edges": m.edge_count(),
        "strongly_connected": m.is_strongly_connected(),
        "signed": signed,
        "dilatation": bounds,
        "table": table,
    });
    if signed {
        warnings.push(SINGULAR_CAVEAT.into());
    }
    if certificate {
        let cert = growth_certificate(&m, max_period, slack).map_err(domain)?;
        results["certificate"] = to_value(&cert);
        if cert.a_simple.is_none() {
            warnings.push("some simple-orbit count is zero; no simple-orbit constant".into());
        }
        if signed {
            let hc = hc_growth_lower_bound(&m, max_period, slack).map_err(domain)?;
            results["hc_lower_bound"] = to_value(&hc);
        }
    }
    Ok(Outcome {
        command: "orbits".into(),
        results,
        warnings,
        failure: None,
    })
}

fn seifert(command: SeifertCommand, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match command {
        SeifertCommand::Euler { inv } => {
            let inv: SeifertInvariants = ctx.inputs.load(&inv)?;
            let e = euler_number(&inv).map_err(domain)?;
            ok(
                "seifert euler",
                json!({
                    "euler_number": format_rational(&e),
                    "admits_invariant_transverse": admits_invariant_transverse(&inv).map_err(domain)?,
                }),
            )
        }
        SeifertCommand::Hc { data } => {
            let cap = ctx.cap.unwrap_or(10);
            if cap > HC_ACTION_LIMIT {
                return Err(CliError::Cap(format!(
                    "--cap {cap} exceeds the limit {HC_ACTION_LIMIT}"
                )));
            }
            let data: PeriodicOpenBookData = ctx.inputs.load(&data)?;
            let records = hc_generators(&data, &int(cap as i64)).map_err(domain)?;
            let count = |f: &dyn Fn(&GeneratorSource) -> bool| {
                records.iter().filter(|r| f(&r.source)).count()
            };
            let summary = json!({
                "regular": count(&|s| matches!(s, GeneratorSource::RegularFiber { .. })),
                "singular": count(&|s| matches!(s, GeneratorSource::SingularFiber { .. })),
                "binding": count(&|s| matches!(s, GeneratorSource::BindingFiber { .. })),
                "even": records.iter().filter(|r| r.parity == obook_core::padyn::Parity::Even).count(),
                "odd": records.iter().filter(|r| r.parity == obook_core::padyn::Parity::Odd).count(),
            });
            Ok(Outcome {
                command: "seifert hc".into(),
                results: json!({
                    "action_cap": format_rational(&int(cap as i64)),
                    "summary": summary,
                    "growth": growth_function(&records, cap),
                    "records": records,
                }),
                warnings: vec![SYMBOLIC_MU.into()],
                failure: None,
            })
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrowthTable {
    samples: Vec<GrowthSample>,
}

fn growth(command: GrowthCommand, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match command {
        GrowthCommand::Classify { table, threshold } => {
            let t: GrowthTable = ctx.inputs.load(&table)?;
            let fit = classify_growth(&t.samples, threshold).map_err(domain)?;
            ok(
                "growth classify",
                json!({"threshold": threshold, "fit": fit}),
            )
        }
        GrowthCommand::Model { example, genus } => {
            let model = match example {
                ModelArg::S3 => ModelExample::S3,
                ModelArg::T3 => ModelExample::T3,
                ModelArg::Words => ModelExample::SurfaceGroupWords { genus },
            };
            let cap = ctx.cap.unwrap_or(match model {
                ModelExample::SurfaceGroupWords { .. } => 14,
                _ => 50,
            });
            let samples = model_counting(model, cap, model.default_cap())
                .map_err(|e| CliError::Cap(e.to_string()))?;
            let fit = if samples.iter().filter(|s| s.n > 0).count() >= MIN_GROWTH_SAMPLES {
                Some(classify_growth(&samples, 0.1).map_err(domain)?)
            } else {
                None
            };
            let mut warnings = Vec::new();
            if matches!(model, ModelExample::SurfaceGroupWords { .. }) {
                warnings.push(WORD_PROXY_CAVEAT.into());
            }
            if fit.is_none() {
                warnings.push(format!(
                    "fewer than {MIN_GROWTH_SAMPLES} positive samples; growth not classified"
                ));
            }
            let total = samples
                .last()
                .map(|s| BigInt::from(s.n))
                .unwrap_or_default();
            Ok(Outcome {
                command: "growth model".into(),
                results: json!({
                    "model": model,
                    "cap": cap,
                    "total": total.to_string(),
                    "samples": samples,
                    "fit": fit,
                }),
                warnings,
                failure: None,
            })
        }
    }
}
