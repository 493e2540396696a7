//! Command dispatch for the `dpd` binary. Each command takes pair documents
//! (already read into memory) and flags, and returns a [`Report`] whose
//! outcome fixes the exit code: 0 affirmative, 1 negative, 2 error.

use serde_json::json;

use crate::divisor::{principal_divisor, QDivisor};
use crate::error::Error;
use crate::fibers::{chart, classify_conjugate_fiber, classify_real_fiber, fiber_report};
use crate::mobius::Mobius;
use crate::normalize::{normalize_to_model, verify_equivalence};
use crate::pair::DpdPair;
use crate::report::{fiber_report_json, render_diagram, ErrorInfo, Outcome, Report};
use crate::sections::{piece_divisor, section_generator, sigma_on_section};
use crate::syntax::{parse_expr, parse_pair, parse_point, parse_rational, print_ratfn, PairDocument};
use crate::topology::{classify_report, image_of, TopologyVerdict};
use crate::torsor::{torsor_iso, torsor_over_point, torsor_pair_validate, NormWitness, TorsorIso};
use crate::{Rational, RationalFunction};

pub const COMMANDS: [&str; 8] = ["validate", "smooth", "fibers", "classify", "normalize", "sections", "torsor", "equiv"];

/// Flags shared by the commands; each command reads the ones it uses.
#[derive(Clone, Default, Debug)]
pub struct Options {
    pub at: Option<String>,
    pub m: Option<i64>,
    pub f: Option<String>,
    pub psi: Option<String>,
    pub lambda: Option<String>,
}

type CliResult<T> = std::result::Result<T, ErrorInfo>;

pub fn run_command(name: &str, documents: &[String], opts: &Options) -> Report {
    let result = match name {
        "validate" => validate(documents),
        "smooth" => smooth(documents),
        "fibers" => fibers(documents, opts),
        "classify" => classify(documents),
        "normalize" => normalize(documents),
        "sections" => sections(documents, opts),
        "torsor" => torsor(documents, opts),
        "equiv" => equiv(documents, opts),
        _ => Err(ErrorInfo::new(
            "UnknownCommand",
            format!("unknown command `{name}`; expected one of {}", COMMANDS.join(", ")),
        )),
    };
    result.unwrap_or_else(|e| Report::failure(name, e))
}

fn usage(message: impl Into<String>) -> ErrorInfo {
    ErrorInfo::new("UsageError", message)
}

fn single(documents: &[String]) -> CliResult<PairDocument> {
    match documents {
        [text] => parse_pair(text).map_err(|e| ErrorInfo::from(&e)),
        _ => Err(usage(format!("expected one pair document, got {}", documents.len()))),
    }
}

fn pair_of(doc: &PairDocument) -> CliResult<DpdPair> {
    doc.pair().map_err(|e| ErrorInfo::from(&e))
}

fn module<T>(r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| ErrorInfo::from(&e))
}

fn flag_expr(src: &str) -> CliResult<RationalFunction> {
    parse_expr(src).and_then(|e| e.eval_closed()).map_err(|e| ErrorInfo::from(&e))
}

fn flag_rational(src: &str) -> CliResult<Rational> {
    parse_rational(src).map_err(|e| ErrorInfo::from(&e))
}

fn pair_json(pair: &DpdPair) -> serde_json::Value {
    json!({
        "curve": pair.curve().to_string(),
        "D": pair.d().to_string(),
        "h": print_ratfn(pair.h()),
        "kind": format!("{:?}", pair.curve().kind()),
    })
}

fn validate(documents: &[String]) -> CliResult<Report> {
    let doc = single(documents)?;
    match doc.pair() {
        Ok(pair) => {
            let mut r = Report::new("validate", Outcome::Affirmative, "valid")
                .line("curve", pair.curve())
                .line("D", pair.d())
                .line("h", print_ratfn(pair.h()))
                .line("D_minus", pair.d_minus());
            let mut details = pair_json(&pair);
            details["D_minus"] = json!(pair.d_minus().to_string());
            r.details = details;
            Ok(r)
        }
        Err(Error::ValidityViolation(p)) => {
            let mut r = Report::new("validate", Outcome::Negative, "invalid")
                .line("violation", format!("D + tau*D <= div(h) fails at {p}"));
            r.details = json!({"violation": p.to_string()});
            Ok(r)
        }
        Err(e) => Err(ErrorInfo::from(&e)),
    }
}

fn smooth(documents: &[String]) -> CliResult<Report> {
    let pair = pair_of(&single(documents)?)?;
    Ok(match pair.regularity_witness() {
        None => Report::new("smooth", Outcome::Affirmative, "regular"),
        Some(w) => {
            let det = crate::pair::pair_determinant(&w.d_plus, &w.d_minus);
            let mut r = Report::new("smooth", Outcome::Negative, "not regular")
                .line("witness", format!("{} with (D+, D-) = ({}, {}), determinant {det}", w.point, w.d_plus, w.d_minus));
            r.details = json!({"witness": {
                "point": w.point.to_string(),
                "d_plus": w.d_plus.to_string(),
                "d_minus": w.d_minus.to_string(),
                "determinant": det.to_string(),
            }});
            r
        }
    })
}

fn fibers(documents: &[String], opts: &Options) -> CliResult<Report> {
    let pair = pair_of(&single(documents)?)?;
    if let Some(at) = &opts.at {
        let c = parse_point(at).map_err(|e| ErrorInfo::from(&e))?;
        let (verdict, kind) = if c.is_real() {
            (module(classify_real_fiber(&pair, &c))?.to_string(), "real")
        } else {
            (module(classify_conjugate_fiber(&pair, &c))?.to_string(), "conjugate pair")
        };
        let mut r = Report::new("fibers", Outcome::Affirmative, verdict.clone()).line("point", &c).line("chart", chart(&c));
        r.details = json!({"point": c.to_string(), "kind": kind, "fiber": verdict, "chart": chart(&c)});
        return Ok(r);
    }
    let report = module(fiber_report(&pair))?;
    let mut r = Report::new("fibers", Outcome::Affirmative, "report");
    for e in report.real_points() {
        r = r.line(&format!("point {}", e.point), format!("{} (chart {})", e.fiber, chart(&e.point)));
    }
    for a in &report.arcs {
        let end = |p: &Option<crate::CurvePoint>| p.as_ref().map_or("*".to_string(), ToString::to_string);
        r = r.line(&format!("arc {} .. {}", end(&a.from), end(&a.to)), format!("{} (sample {})", a.fiber, a.sample));
    }
    for p in &report.pairs {
        r = r.line(&format!("pair {}, {}", p.point, p.point.conj()), p.fiber);
    }
    r.details = fiber_report_json(&report);
    r.diagram = Some(render_diagram(&report));
    Ok(r)
}

fn classify(documents: &[String]) -> CliResult<Report> {
    let pair = pair_of(&single(documents)?)?;
    let report = module(fiber_report(&pair))?;
    let verdict = classify_report(&report);
    let image = image_of(&report);
    let (outcome, headline) = match &verdict {
        TopologyVerdict::Model(m) => (Outcome::Affirmative, m.to_string()),
        other => (Outcome::Negative, other.tag().to_string()),
    };
    let mut r = Report::new("classify", outcome, headline);
    let mut details = json!({"verdict": verdict.tag(), "image": image.to_string()});
    match &verdict {
        TopologyVerdict::Model(m) => {
            r = r.line("row", m.row_name());
            details["model"] = json!(m.to_string());
            details["row"] = json!(m.row_name());
        }
        TopologyVerdict::NonCompactOrNotConnected(reason) | TopologyVerdict::Undetermined(reason) => {
            r = r.line("reason", reason);
            details["reason"] = json!(reason);
        }
        TopologyVerdict::EmptyRealLocus => {}
    }
    r = r.line("image", &image);
    r.details = details;
    r.diagram = Some(render_diagram(&report));
    Ok(r)
}

fn normalize(documents: &[String]) -> CliResult<Report> {
    let pair = pair_of(&single(documents)?)?;
    match normalize_to_model(&pair) {
        Ok(n) => {
            let mut r = Report::new("normalize", Outcome::Affirmative, n.model.to_string())
                .line("row", n.model.row_name())
                .line("canonical", n.canonical.to_string().trim_end());
            r.details = json!({"model": n.model.to_string(), "row": n.model.row_name(), "canonical": pair_json(&n.canonical)});
            r.moves = Some(n.moves);
            Ok(r)
        }
        Err(Error::NotAModel(reason)) => {
            let mut r = Report::new("normalize", Outcome::Negative, "NotAModel").line("reason", &reason);
            r.details = json!({"reason": reason});
            Ok(r)
        }
        Err(e) => Err(ErrorInfo::from(&e)),
    }
}

fn sections(documents: &[String], opts: &Options) -> CliResult<Report> {
    let pair = pair_of(&single(documents)?)?;
    let m = opts.m.unwrap_or(1);
    let g = section_generator(&pair, m);
    let image = module(sigma_on_section(&pair, m, &g))?;
    let back = module(sigma_on_section(&pair, -m, &image))?;
    if back != g {
        return Err(ErrorInfo::from(&Error::InvariantBroken(format!("sigma is not an involution in degree {m}"))));
    }
    let e = piece_divisor(&pair, m);
    let mut r = Report::new("sections", Outcome::Affirmative, format!("g_{m} = {}", print_ratfn(&g)))
        .line("piece divisor", &e)
        .line("sigma image", print_ratfn(&image));
    r.details = json!({
        "degree": m,
        "piece_divisor": e.to_string(),
        "generator": print_ratfn(&g),
        "sigma_image": print_ratfn(&image),
    });
    Ok(r)
}

fn torsor(documents: &[String], opts: &Options) -> CliResult<Report> {
    if let (Some(at), []) = (&opts.at, documents) {
        let c = flag_rational(at)?;
        return Ok(match module(torsor_over_point(&c))? {
            crate::torsor::PointTorsor::CircleTorsor(w) => {
                let mut r = Report::new("torsor", Outcome::Affirmative, "CircleTorsor").line("witness", &w);
                r.details = json!({"witness": {"g": print_ratfn(&w.g), "lambda": w.lambda.to_string(), "verified": true}});
                r
            }
            crate::torsor::PointTorsor::HatCircleTorsor => Report::new("torsor", Outcome::Negative, "HatCircleTorsor"),
        });
    }
    let doc = single(documents)?;
    let t = module(torsor_pair_validate(doc.curve.clone(), doc.d.clone(), doc.h.clone()))?;
    let trivial = module(torsor_pair_validate(doc.curve.clone(), QDivisor::zero(), RationalFunction::one()))?;
    match module(torsor_iso(&t, &trivial))? {
        TorsorIso::Isomorphic(iso) => {
            // 0 = E + div(f) and 1 = λ·f·τ*f·h, so h = λ⁻¹·g·τ*g with g = 1/f and div(g) = E.
            let w = NormWitness { g: iso.f.inv().expect("nonzero"), lambda: iso.lambda.recip() };
            let verified = w.verify(t.h()) && module(principal_divisor(&w.g, t.curve()))? == *t.e();
            if !verified {
                return Err(ErrorInfo::from(&Error::InvariantBroken("torsor witness fails".into())));
            }
            let mut r = Report::new("torsor", Outcome::Affirmative, "Trivial").line("witness", &w);
            r.details = json!({"witness": {"g": print_ratfn(&w.g), "lambda": w.lambda.to_string(), "verified": true}});
            Ok(r)
        }
        TorsorIso::NotIsomorphic(obstruction) => {
            let mut r = Report::new("torsor", Outcome::Negative, "Nontrivial").line("obstruction", &obstruction);
            r.details = json!({"obstruction": obstruction.to_string()});
            Ok(r)
        }
    }
}

fn equiv(documents: &[String], opts: &Options) -> CliResult<Report> {
    let [a, b] = documents else {
        return Err(usage(format!("expected two pair documents, got {}", documents.len())));
    };
    let p1 = pair_of(&parse_pair(a).map_err(|e| ErrorInfo::from(&e))?)?;
    let p2 = pair_of(&parse_pair(b).map_err(|e| ErrorInfo::from(&e))?)?;
    let f = flag_expr(opts.f.as_deref().unwrap_or("1"))?;
    let psi = module(Mobius::from_ratfn(&flag_expr(opts.psi.as_deref().unwrap_or("z"))?))?;
    let lambda = flag_rational(opts.lambda.as_deref().unwrap_or("1"))?;
    let ok = module(verify_equivalence(&p1, &p2, &psi, &f, &lambda))?;
    let (outcome, verdict) = if ok { (Outcome::Affirmative, "equivalent") } else { (Outcome::Negative, "not equivalent") };
    let mut r = Report::new("equiv", outcome, verdict)
        .line("psi", format!("z -> {psi}"))
        .line("f", print_ratfn(&f))
        .line("lambda", &lambda);
    r.details = json!({"psi": psi.to_string(), "f": print_ratfn(&f), "lambda": lambda.to_string(), "verified": ok});
    Ok(r)
}
