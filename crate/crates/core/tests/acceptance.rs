//! Acceptance suite: one PASS/FAIL line per criterion. Set `DPD_SEED` to
//! replay a run; the seed in use is printed first.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use common::*;
use dpd_core::cli::{run_command, Options};
use dpd_core::fibers::{classify_real_fiber, fiber_report, RealFiberType};
use dpd_core::normalize::{canonical_pair, normalize_to_model, replay, Move};
use dpd_core::pair::pair_determinant;
use dpd_core::sections::{section_generator, sigma_on_section, verify_presentation, Generator};
use dpd_core::syntax::{parse_expr, parse_pair};
use dpd_core::topology::{classify_real_locus, real_image, Bound, ImageComponent, ModelType, RealImage, TopologyVerdict};
use dpd_core::torsor::{norm_equation, NormObstruction, NormOutcome};
use dpd_core::divisor::is_regular_on;
use dpd_core::{CurvePoint, DpdPair, GaussianRational, QDivisor, RationalFunction, RealCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn pair(text: &str) -> DpdPair {
    parse_pair(text).expect("fixture parses").pair().expect("fixture is valid")
}

fn on_line(d: &str, h: &str) -> DpdPair {
    pair(&format!("curve: P1 minus [inf]\nD: {d}\nh: {h}\n"))
}

fn table_one() -> Check {
    let fixtures = [
        (pair("curve: P1 minus [i, -i]\nD: 0\nh: 1\n"), ModelType::Torus),
        (on_line("0", "1 - z^2"), ModelType::Sphere),
        (on_line("1/2*[-1]", "1 - z^2"), ModelType::RP2),
        (on_line("1/2*[-1] + 1/2*[1]", "1 - z^2"), ModelType::KleinBottle),
    ];
    for (p, model) in &fixtures {
        let verdict = classify_real_locus(p).map_err(|e| e.to_string())?;
        ensure!(verdict == TopologyVerdict::Model(*model), "{p:?} classified as {verdict}, expected {model}");
        let report = run_command("classify", &[p.to_string()], &Options::default());
        ensure!(report.verdict == model.to_string() && report.exit_code() == 0, "CLI verdict {}", report.verdict);
    }
    Ok("Torus, Sphere, RP2, KleinBottle".into())
}

fn intro_example() -> Check {
    let p = on_line("1/2*[-1] + 1/2*[1]", "1 - z^2");
    ensure!(p.is_regular(), "not regular");
    let closed = |x| Bound { point: pt(x, 0), closed: true };
    let expected = RealImage::Components(vec![ImageComponent { lower: closed(-1), upper: closed(1) }]);
    let image = real_image(&p).map_err(|e| e.to_string())?;
    ensure!(image == expected, "image {image}");
    for x in [-1, 1] {
        let fiber = classify_real_fiber(&p, &pt(x, 0)).map_err(|e| e.to_string())?;
        ensure!(fiber == RealFiberType::ExceptionalMu2, "fiber over {x} is {fiber}");
    }
    Ok(format!("image {image}, endpoint fibers ExceptionalMu2"))
}

fn fiber_fixtures() -> Check {
    let samples: Vec<CurvePoint> = (-12..=12).map(|k| CurvePoint::real(q(k, 4))).collect();

    let plus = on_line("0", "z^2 + 1");
    let report = fiber_report(&plus).map_err(|e| e.to_string())?;
    ensure!(report.real_points().count() == 0, "special real points for eps = +1");
    ensure!(report.arcs.iter().all(|a| a.fiber == RealFiberType::TorsorRealCircle), "arcs {:?}", report.arcs);
    for x in &samples {
        let fiber = classify_real_fiber(&plus, x).map_err(|e| e.to_string())?;
        ensure!(fiber == RealFiberType::TorsorRealCircle, "eps = +1: fiber over {x} is {fiber}");
    }

    let minus = on_line("0", "z^2 - 1");
    let report = fiber_report(&minus).map_err(|e| e.to_string())?;
    let specials: Vec<_> = report.real_points().map(|e| (e.point.clone(), e.fiber)).collect();
    ensure!(
        specials == vec![(pt(-1, 0), RealFiberType::TwoLinesFixedPoint), (pt(1, 0), RealFiberType::TwoLinesFixedPoint)],
        "special points {specials:?}"
    );
    for x in &samples {
        let v = x.real_value().unwrap().clone();
        let expected = if v.clone() * v.clone() < q(1, 1) {
            RealFiberType::TorsorEmptyReal
        } else if v.clone() * v == q(1, 1) {
            RealFiberType::TwoLinesFixedPoint
        } else {
            RealFiberType::TorsorRealCircle
        };
        let fiber = classify_real_fiber(&minus, x).map_err(|e| e.to_string())?;
        ensure!(fiber == expected, "eps = -1: fiber over {x} is {fiber}, expected {expected}");
    }
    for arc in &report.arcs {
        let inside = arc.from == Some(pt(-1, 0)) && arc.to == Some(pt(1, 0));
        let expected = if inside { RealFiberType::TorsorEmptyReal } else { RealFiberType::TorsorRealCircle };
        ensure!(arc.fiber == expected, "arc {:?}..{:?} has {}", arc.from, arc.to, arc.fiber);
    }
    let verdict = classify_real_locus(&minus).map_err(|e| e.to_string())?;
    ensure!(matches!(verdict, TopologyVerdict::NonCompactOrNotConnected(_)), "eps = -1 classified as {verdict}");
    Ok("eps = +1 all TorsorRealCircle; eps = -1 matches, NonCompactOrNotConnected".into())
}

fn smoothness() -> Check {
    let equality = on_line("-1/2*[0]", "1/z");
    ensure!(equality.is_regular(), "(-1/2[0], 1/z) not regular");
    let bad = on_line("1/3*[0]", "z");
    let w = bad.regularity_witness().ok_or("(1/3[0], z) accepted as regular")?;
    ensure!(w.point == pt(0, 0) && w.d_plus == q(1, 3) && w.d_minus == q(-2, 3), "witness {w:?}");
    let det = pair_determinant(&w.d_plus, &w.d_minus);
    ensure!(det == 9.into(), "determinant {det}");
    Ok("equality case regular; witness (1/3, -2/3), determinant 9".into())
}

fn norm_suite(rng: &mut ChaCha8Rng) -> Check {
    let h = |s: &str| parse_expr(s).unwrap().eval_closed().unwrap();
    match norm_equation(&h("z^2 + 1")).map_err(|e| e.to_string())? {
        NormOutcome::Trivial(w) => {
            ensure!(w.g == h("1 + i*z") && w.lambda == q(1, 1), "witness {w}");
            ensure!(w.verify(&h("z^2 + 1")), "witness does not verify");
        }
        other => return Err(format!("z^2 + 1: {other:?}")),
    }
    let odd = norm_equation(&h("z^2 - 1")).map_err(|e| e.to_string())?;
    ensure!(matches!(odd, NormOutcome::Nontrivial(NormObstruction::OddOrderAt(_))), "z^2 - 1: {odd:?}");
    let negative = norm_equation(&h("-1")).map_err(|e| e.to_string())?;
    ensure!(negative == NormOutcome::Nontrivial(NormObstruction::NegativeSign), "-1: {negative:?}");

    let rounds = 1000;
    for k in 0..rounds {
        let t = random_twist(rng, 3);
        let target = (&t.f * &t.f.conj()).scale(&GaussianRational::real(t.lambda.clone()));
        match norm_equation(&target).map_err(|e| format!("round {k}: {e}"))? {
            NormOutcome::Trivial(w) => ensure!(w.verify(&target), "round {k}: witness {w} fails for {target:?}"),
            other => return Err(format!("round {k}: {other:?} for lambda·g·τg with g = {:?}", t.f)),
        }
    }
    Ok(format!("three fixtures, {rounds} round-trips"))
}

fn real_probe_points(a: &DpdPair, b: &DpdPair) -> BTreeSet<CurvePoint> {
    let mut points: BTreeSet<CurvePoint> = (-6..=6).map(|x| pt(x, 0)).collect();
    points.insert(CurvePoint::real(q(1, 2)));
    points.insert(CurvePoint::Infinity);
    for p in [a, b] {
        points.extend(p.special_points().into_iter().filter(CurvePoint::is_real));
        if let Ok(report) = fiber_report(p) {
            points.extend(report.arcs.iter().map(|arc| CurvePoint::real(arc.sample.clone())));
        }
    }
    points.retain(|p| a.curve().contains(p));
    points
}

fn twist_invariance(rng: &mut ChaCha8Rng) -> Check {
    let cases = 500;
    let mut regular = 0;
    for k in 0..cases {
        let regular_only = rng.gen_bool(0.7);
        let p = random_pair(rng, regular_only);
        let t = random_twist(rng, 3);
        let twisted = p.twist(&t).map_err(|e| format!("case {k}: twist of a valid pair fails: {e}"))?;
        ensure!(
            DpdPair::new(twisted.curve().clone(), twisted.d().clone(), twisted.h().clone()).is_ok(),
            "case {k}: twisted pair invalid"
        );
        ensure!(p.is_regular() == twisted.is_regular(), "case {k}: regularity changes for {p} under {t:?}");
        regular += usize::from(p.is_regular());
        for x in real_probe_points(&p, &twisted) {
            let (before, after) = (classify_real_fiber(&p, &x), classify_real_fiber(&twisted, &x));
            ensure!(before == after, "case {k}: fiber over {x} changes {before:?} -> {after:?} for\n{p}");
        }
        let (before, after) = (classify_real_locus(&p), classify_real_locus(&twisted));
        ensure!(before == after, "case {k}: verdict changes {before:?} -> {after:?} for\n{p}");
    }
    Ok(format!("{cases} pairs ({regular} regular), zero counterexamples"))
}

fn graded_suite() -> Check {
    let mut checked = 0;
    for model in ModelType::ALL {
        let p = canonical_pair(model);
        for n in -6..=6 {
            let gn = section_generator(&p, n);
            for m in -6..=6 {
                let ratio = &(&gn * &section_generator(&p, m)) / &section_generator(&p, n + m);
                ensure!(is_regular_on(&ratio, p.curve()), "{model}: g_{n}·g_{m}/g_{} not regular", n + m);
                checked += 1;
            }
            let regular = [lin(2, 0), lin(0, 1), lin(0, 1).inv().unwrap(), &lin(2, 0) / &real_poly(&[1, 0, 1])];
            let units = regular.into_iter().filter(|a| is_regular_on(a, p.curve()));
            for f in std::iter::once(gn.clone()).chain(units.map(|a| &gn * &a)) {
                let image = sigma_on_section(&p, n, &f).map_err(|e| format!("{model}, n = {n}: {e}"))?;
                let back = sigma_on_section(&p, -n, &image).map_err(|e| format!("{model}, n = {}: {e}", -n))?;
                ensure!(back == f, "{model}: sigma is not an involution in degree {n}");
            }
        }
    }
    let gen = |name: &str, degree, value| Generator { name: name.into(), degree, value };
    let rel = |a: &str, b: &str| (parse_expr(a).unwrap(), parse_expr(b).unwrap());

    let h = real_poly(&[0, 1]);
    let reducible = DpdPair::new(RealCurve::affine_line(), QDivisor::zero(), h.clone()).map_err(|e| e.to_string())?;
    verify_presentation(&reducible, &[gen("x", 1, RationalFunction::one()), gen("y", -1, h)], &[rel("x*y", "h")])
        .map_err(|e| format!("x·y = h: {e}"))?;

    let klein = canonical_pair(ModelType::KleinBottle);
    let w = real_poly(&[1, 0, -1]);
    let gens = [gen("x", 2, w.inv().unwrap()), gen("y", -1, w)];
    verify_presentation(&klein, &gens, &[rel("x*y^2", "1 - z^2")]).map_err(|e| format!("x·y² = 1 - z²: {e}"))?;
    Ok(format!("{checked} products regular, sigma involutive, both presentations verified"))
}

fn random_move(rng: &mut ChaCha8Rng, p: &DpdPair) -> Move {
    let upper = |p: &CurvePoint| BTreeSet::from([p.clone(), p.conj()]);
    match rng.gen_range(0..8) {
        0 | 1 => Move::Twist(random_twist(rng, 1)),
        2 => Move::Reparametrize(random_mobius(rng)),
        3 => Move::RestrictNonReal(upper(&pt(rng.gen_range(-3..4), rng.gen_range(1..3)))),
        4 => {
            let removed: Vec<_> = p.curve().removed().iter().filter(|c| c.is_upper()).cloned().collect();
            match removed.get(rng.gen_range(0..removed.len().max(1))) {
                Some(c) => Move::ExtendNonReal(upper(c)),
                None => Move::FlipSign,
            }
        }
        5 => {
            let real: Vec<_> = p.curve().real_punctures().cloned().collect();
            match real.get(rng.gen_range(0..real.len().max(1))) {
                Some(c) => Move::ExtendEmptyFiber(c.clone()),
                None => Move::FlipSign,
            }
        }
        6 => {
            let mut real: Vec<_> = p.special_points().into_iter().filter(CurvePoint::is_real).collect();
            real.push(pt(rng.gen_range(-3..4), 0));
            Move::LocalReduce(real[rng.gen_range(0..real.len())].clone())
        }
        _ => Move::FlipSign,
    }
}

fn normalization_round_trip(rng: &mut ChaCha8Rng) -> Check {
    let per_model = 100;
    let (mut applied, mut through_infinity) = (0, 0);
    for model in ModelType::ALL {
        let canonical = canonical_pair(model);
        let verdict = TopologyVerdict::Model(model);
        for k in 0..per_model {
            let length = rng.gen_range(1..=6);
            let (mut p, mut moves) = (canonical.clone(), Vec::new());
            let mut attempts = 0;
            while moves.len() < length && attempts < 100 {
                attempts += 1;
                let mv = random_move(rng, &p);
                let Ok(next) = mv.apply(&p) else { continue };
                let v = classify_real_locus(&next).map_err(|e| format!("{model} #{k}: after {mv}: {e}"))?;
                ensure!(v == verdict, "{model} #{k}: verdict {v} after moves {moves:?} then {mv}");
                p = next;
                moves.push(mv);
            }
            applied += moves.len();
            through_infinity += usize::from(p.curve().contains(&CurvePoint::Infinity));
            let n = normalize_to_model(&p).map_err(|e| format!("{model} #{k}: {e} for\n{p}after {moves:?}"))?;
            ensure!(n.model == model, "{model} #{k}: normalized to {}", n.model);
            ensure!(n.canonical == canonical, "{model} #{k}: canonical pair\n{}", n.canonical);
            let replayed = replay(&p, &n.moves).map_err(|e| format!("{model} #{k}: replay: {e}"))?;
            ensure!(replayed == canonical, "{model} #{k}: move log does not replay to the canonical pair");
        }
    }
    Ok(format!("{} sequences, {applied} moves, {through_infinity} ending with inf on the curve", 4 * per_model))
}

struct Fixture {
    dir: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).expect("temporary directory");
        Fixture { dir }
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, text).expect("write fixture");
        path.to_string_lossy().into_owned()
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn cli_contract(rng: &mut ChaCha8Rng) -> Check {
    // Parse/print round trip, with the lines shuffled and decorated.
    let documents = 300;
    for k in 0..documents {
        let p = random_pair(rng, false);
        let text = p.to_string();
        let parsed = parse_pair(&text).map_err(|e| format!("document {k}: {e}\n{text}"))?;
        let back = parsed.pair().map_err(|e| format!("document {k}: {e}\n{text}"))?;
        ensure!(back == p && back.to_string() == text, "document {k} does not round-trip:\n{text}");
        let mut lines: Vec<String> = text.lines().map(|l| l.replacen(':', " :  ", 1)).collect();
        lines.rotate_left(rng.gen_range(0..3));
        let noisy = format!("# document {k}\n\n{}\n", lines.join("  # note\n"));
        let reparsed = parse_pair(&noisy).map_err(|e| format!("document {k}: {e}\n{noisy}"))?;
        ensure!(reparsed.pair().ok() == Some(p.clone()), "document {k}: decorated form differs:\n{noisy}");
    }

    // Exit codes of the binary, and every JSON report against the schema.
    let fx = Fixture::new();
    let klein = fx.file("klein.dpd", "curve: P1 minus [inf]\nD: 1/2*[-1] + 1/2*[1]\nh: 1 - z^2\n");
    let sphere = fx.file("sphere.dpd", "curve: P1 minus [inf]\nh: 1 - z^2\n");
    let sphere4 = fx.file("sphere4.dpd", "curve: P1 minus [inf]\nh: 4 - 4*z^2\n");
    let plane = fx.file("plane.dpd", "curve: P1 minus [inf]\nh: z^2 - 1\n");
    let invalid = fx.file("invalid.dpd", "curve: P1 minus [inf]\nD: [0]\nh: z\n");
    let singular = fx.file("singular.dpd", "curve: P1 minus [inf]\nD: 1/3*[0]\nh: z\n");
    let syntax = fx.file("syntax.dpd", "curve: P1 minus [inf]\nh: 1 - z^\n");
    let trivial = fx.file("trivial.dpd", "curve: P1 minus [inf]\nD: [i]\nh: z^2 + 1\n");
    let odd = fx.file("odd.dpd", "curve: P1 minus [inf, 1, -1]\nh: z^2 - 1\n");
    let missing = fx.dir.join("missing.dpd").to_string_lossy().into_owned();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["validate", &klein], 0),
        (vec!["validate", &invalid], 1),
        (vec!["validate", &syntax], 2),
        (vec!["smooth", &klein], 0),
        (vec!["smooth", &singular], 1),
        (vec!["fibers", &klein], 0),
        (vec!["fibers", &klein, "--at", "-1"], 0),
        (vec!["fibers", &singular], 2),
        (vec!["classify", &klein], 0),
        (vec!["classify", &plane], 1),
        (vec!["normalize", &sphere4], 0),
        (vec!["normalize", &plane], 1),
        (vec!["sections", &klein, "-m", "-1"], 0),
        (vec!["torsor", &trivial], 0),
        (vec!["torsor", &odd], 1),
        (vec!["torsor", &plane], 2),
        (vec!["torsor", "--at", "-2"], 1),
        (vec!["torsor", "--at", "3"], 0),
        (vec!["equiv", &sphere, &sphere4, "--lambda", "4"], 0),
        (vec!["equiv", &sphere, &sphere4, "--lambda", "1/4"], 1),
        (vec!["equiv", &sphere, &sphere4, "--lambda", "-4"], 2),
        (vec!["classify", &missing], 2),
        (vec!["classify"], 2),
        (vec!["frobnicate", &klein], 2),
    ];
    for (args, code) in &cases {
        for json in [false, true] {
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_dpd"));
            cmd.args(args).env("DPD_COLOR", "0");
            if json {
                cmd.arg("--json");
            }
            let out = cmd.output().map_err(|e| format!("cannot run dpd: {e}"))?;
            let status = out.status.code();
            ensure!(status == Some(*code), "dpd {args:?} (json: {json}) exited {status:?}, expected {code}");
            let stdout = String::from_utf8_lossy(&out.stdout);
            if json {
                if let Some(e) = schema_errors(&stdout) {
                    return Err(format!("dpd {args:?}: schema violation: {e}\n{stdout}"));
                }
            } else {
                ensure!(!stdout.contains('\x1b'), "dpd {args:?}: ANSI styling with DPD_COLOR=0");
            }
        }
    }
    let usage = Command::new(env!("CARGO_BIN_EXE_dpd")).output().map_err(|e| e.to_string())?;
    ensure!(usage.status.code() == Some(2), "usage error exited {:?}", usage.status.code());

    let mut reports = 0;
    for _ in 0..60 {
        let regular_only = rng.gen_bool(0.7);
        let doc = random_pair(rng, regular_only).to_string();
        for command in ["validate", "smooth", "fibers", "classify", "normalize", "sections"] {
            let report = run_command(command, std::slice::from_ref(&doc), &Options::default());
            if let Some(e) = schema_errors(&report.to_json()) {
                return Err(format!("{command}: schema violation: {e}\n{doc}"));
            }
            reports += 1;
        }
    }
    Ok(format!("{documents} round-trips, {} exit codes, {reports} random reports validated", cases.len() + 1))
}

fn main() {
    let seed: u64 = std::env::var("DPD_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_917);
    println!("acceptance seed {seed}");
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
    let criteria: Vec<Criterion> = vec![
        ("table of models", Box::new(table_one)),
        ("intro example", Box::new(intro_example)),
        ("fiber fixtures", Box::new(fiber_fixtures)),
        ("smoothness criterion", Box::new(smoothness)),
        ("norm equation", Box::new(move || norm_suite(&mut rng(5)))),
        ("twist invariance", Box::new(move || twist_invariance(&mut rng(6)))),
        ("graded algebra", Box::new(graded_suite)),
        ("normalization round trip", Box::new(move || normalization_round_trip(&mut rng(8)))),
        ("command-line contract", Box::new(move || cli_contract(&mut rng(9)))),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|panic| Err(format!("panicked: {}", panic_message(&panic))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {reason}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn panic_message(panic: &Box<dyn std::any::Any + Send>) -> String {
    panic
        .downcast_ref::<String>()
        .cloned()
        .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
