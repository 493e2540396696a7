//! Random inputs shared by the integration tests: valid pairs built from
//! local data, twists and real Möbius maps.
#![allow(dead_code)]

use dpd_core::poly::Poly;
use dpd_core::{CurvePoint, DpdPair, GaussianRational, Mobius, QDivisor, Rational, RationalFunction, RealCurve, TwistData};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn gq(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(q(re, 1), q(im, 1))
}

pub fn pt(re: i64, im: i64) -> CurvePoint {
    CurvePoint::Finite(gq(re, im))
}

pub fn lin(re: i64, im: i64) -> RationalFunction {
    RationalFunction::from_poly(Poly::linear(gq(re, im)))
}

pub fn real_poly(cs: &[i64]) -> RationalFunction {
    RationalFunction::from_poly(Poly::new(cs.iter().map(|&c| gq(c, 0)).collect()))
}

/// `(z − p)(z − p̄)`.
fn conj_pair(re: i64, im: i64) -> RationalFunction {
    &lin(re, im) * &lin(re, -im)
}

/// Local data `(2·D(x), ord_x h)` at a real point. The first five give
/// regular points; the rest are valid but usually not regular.
const LOCAL: [(i64, i64, i64); 9] =
    [(1, 1, 1), (-1, 1, -1), (0, 1, 1), (0, 1, -1), (2, 1, 2), (1, 1, 3), (0, 1, 2), (2, 3, 1), (-4, 3, -1)];

fn local(rng: &mut impl Rng, regular_only: bool) -> (Rational, i64) {
    let (n, d, e) = if regular_only { LOCAL[rng.gen_range(0..5)] } else { *LOCAL.choose(rng).unwrap() };
    (q(n, d), e)
}

/// A valid pair on an affine-line or circle-type curve, then twisted and
/// reparametrized at random.
pub fn random_pair(rng: &mut impl Rng, regular_only: bool) -> DpdPair {
    loop {
        if let Some(pair) = try_random_pair(rng, regular_only) {
            if !regular_only || pair.is_regular() {
                return pair;
            }
        }
    }
}

fn try_random_pair(rng: &mut impl Rng, regular_only: bool) -> Option<DpdPair> {
    let circle = rng.gen_bool(0.3);
    let mut removed = vec![];
    let mut h = if rng.gen_bool(0.5) { real_poly(&[-1]) } else { real_poly(&[rng.gen_range(1..4)]) };
    let mut d = QDivisor::zero();
    let mut degree = 0i64;

    if circle {
        removed.extend([pt(0, 1), pt(0, -1)]);
    } else {
        removed.push(CurvePoint::Infinity);
        if rng.gen_bool(0.25) {
            let r = if rng.gen_bool(0.5) { 5 } else { -5 };
            removed.push(pt(r, 0));
            h = &h * &lin(r, 0).pow(rng.gen_range(-1..2));
        }
    }
    if rng.gen_bool(0.25) {
        let (a, b) = (rng.gen_range(-2..3), rng.gen_range(2..4));
        removed.extend([pt(a, b), pt(a, -b)]);
        let e = rng.gen_range(-1..2);
        h = &h * &conj_pair(a, b).pow(e);
        degree += 2 * e;
    }

    let mut xs: Vec<i64> = (-3..4).collect();
    xs.shuffle(rng);
    for &x in xs.iter().take(rng.gen_range(0..4)) {
        let (twice_d, e) = local(rng, regular_only);
        d = &d + &QDivisor::point(pt(x, 0), twice_d / q(2, 1));
        h = &h * &lin(x, 0).pow(e);
        degree += e;
    }
    if rng.gen_bool(0.3) {
        let (a, b) = (rng.gen_range(-2..3), 1);
        let (k1, k2) = (rng.gen_range(-1..2), rng.gen_range(-1..2));
        let m = (k1 + k2).max(0) + rng.gen_range(0..2);
        d = &d + &QDivisor::from_integral([(pt(a, b), k1), (pt(a, -b), k2)]);
        h = &h * &conj_pair(a, b).pow(m);
        degree += 2 * m;
    }
    if circle {
        // Poles or zeros at ±i fix the order at infinity.
        let (twice_d, mut e) = local(rng, regular_only);
        if (e + degree) % 2 != 0 {
            e += 1;
        }
        d = &d + &QDivisor::point(CurvePoint::Infinity, twice_d / q(2, 1));
        h = &h * &conj_pair(0, 1).pow(-(e + degree) / 2);
    }

    let mut pair = DpdPair::new(RealCurve::new(removed).ok()?, d, h).ok()?;
    if rng.gen_bool(0.5) {
        pair = pair.twist(&random_twist(rng, 2)).ok()?;
    }
    if rng.gen_bool(0.25) {
        pair = pair.pullback(&random_mobius(rng)).ok()?;
    }
    Some(pair)
}

/// `λ·c·∏(z − pₖ)^{eₖ}` with small Gaussian `c`, `pₖ`.
pub fn random_twist(rng: &mut impl Rng, max_factors: usize) -> TwistData {
    let mut c = gq(0, 0);
    while c == gq(0, 0) {
        c = gq(rng.gen_range(-2..3), rng.gen_range(-2..3));
    }
    let mut f = RationalFunction::constant(c);
    for _ in 0..rng.gen_range(0..=max_factors) {
        f = &f * &lin(rng.gen_range(-3..4), rng.gen_range(-2..3)).pow(rng.gen_range(-2..3));
    }
    TwistData::new(f, q(rng.gen_range(1..6), rng.gen_range(1..6))).expect("nonzero f, positive λ")
}

/// `z ↦ (az + b)/(cz + d)` with small integer coefficients.
pub fn random_mobius(rng: &mut impl Rng) -> Mobius {
    loop {
        let [a, b, c, d] = [(); 4].map(|_| q(rng.gen_range(-3..4), 1));
        if let Ok(m) = Mobius::new(a, b, c, d) {
            return m;
        }
    }
}

/// The shipped report schema, compiled once.
pub fn schema() -> &'static jsonschema::JSONSchema {
    static SCHEMA: std::sync::OnceLock<jsonschema::JSONSchema> = std::sync::OnceLock::new();
    SCHEMA.get_or_init(|| {
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json"))
            .expect("schema file");
        let value: &'static serde_json::Value = Box::leak(Box::new(serde_json::from_str(&text).expect("schema JSON")));
        jsonschema::JSONSchema::compile(value).expect("schema compiles")
    })
}

/// Schema violations of a JSON report, joined into one message.
pub fn schema_errors(json: &str) -> Option<String> {
    let value: serde_json::Value = match serde_json::from_str(json) {
        Ok(v) => v,
        Err(e) => return Some(format!("not JSON: {e}")),
    };
    let errors: Vec<String> = match schema().validate(&value) {
        Ok(()) => return None,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    Some(errors.join("; "))
}
