//! Moves between pairs with birationally diffeomorphic real loci, reduction
//! of a model pair to its canonical form, and replay of equivalence
//! certificates.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::curve::{CurveKind, CurvePoint, RealCurve};
use crate::divisor::{principal_divisor, QDivisor};
use crate::error::{Error, Result};
use crate::mobius::Mobius;
use crate::pair::{DpdPair, TwistData};
use crate::poly::Poly;
use crate::syntax::print_ratfn;
use crate::topology::{classify_real_locus, classify_report, image_of, ModelType, RealImage, TopologyVerdict};
use crate::fibers::fiber_report;
use crate::{GaussianRational, Rational, RationalFunction};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Move {
    Twist(TwistData),
    RestrictNonReal(BTreeSet<CurvePoint>),
    ExtendNonReal(BTreeSet<CurvePoint>),
    /// Adds back a removed real point over which the fiber has no real points.
    ExtendEmptyFiber(CurvePoint),
    /// Pullback along `ψ`, a map from the new curve to the old one.
    Reparametrize(Mobius),
    LocalReduce(CurvePoint),
    /// Pullback along `z ↦ −z`.
    FlipSign,
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::Twist(_) => "Twist",
            Move::RestrictNonReal(_) => "RestrictNonReal",
            Move::ExtendNonReal(_) => "ExtendNonReal",
            Move::ExtendEmptyFiber(_) => "ExtendEmptyFiber",
            Move::Reparametrize(_) => "Reparametrize",
            Move::LocalReduce(_) => "LocalReduce",
            Move::FlipSign => "FlipSign",
        }
    }

    pub fn apply(&self, pair: &DpdPair) -> Result<DpdPair> {
        match self {
            Move::Twist(t) => pair.twist(t),
            Move::RestrictNonReal(points) => pair.restrict(points),
            Move::ExtendNonReal(points) => pair.extend(points),
            Move::ExtendEmptyFiber(c) => pair.extend_empty_fiber(c),
            Move::Reparametrize(psi) => pair.pullback(psi),
            Move::LocalReduce(c) => Ok(pair.local_reduce(c)?.0),
            Move::FlipSign => pair.pullback(&flip()),
        }
    }

    /// The move with its exact parameters, printed in the input grammar.
    pub fn to_json(&self) -> serde_json::Value {
        let points = |ps: &BTreeSet<CurvePoint>| ps.iter().map(ToString::to_string).collect::<Vec<_>>();
        match self {
            Move::Twist(t) => json!({"move": self.name(), "f": print_ratfn(&t.f), "lambda": t.lambda.to_string()}),
            Move::RestrictNonReal(ps) | Move::ExtendNonReal(ps) => json!({"move": self.name(), "points": points(ps)}),
            Move::ExtendEmptyFiber(c) | Move::LocalReduce(c) => json!({"move": self.name(), "point": c.to_string()}),
            Move::Reparametrize(psi) => json!({"move": self.name(), "psi": psi.to_string()}),
            Move::FlipSign => json!({"move": self.name()}),
        }
    }
}

impl Serialize for Move {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let points = |ps: &BTreeSet<CurvePoint>| ps.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        match self {
            Move::Twist(t) => write!(f, "Twist(f = {}, lambda = {})", print_ratfn(&t.f), t.lambda),
            Move::RestrictNonReal(ps) | Move::ExtendNonReal(ps) => write!(f, "{}([{}])", self.name(), points(ps)),
            Move::ExtendEmptyFiber(c) | Move::LocalReduce(c) => write!(f, "{}({c})", self.name()),
            Move::Reparametrize(psi) => write!(f, "Reparametrize(z -> {psi})"),
            Move::FlipSign => f.write_str("FlipSign"),
        }
    }
}

fn flip() -> Mobius {
    Mobius::scaling(-Rational::one()).expect("invertible")
}

/// Applies the moves in order.
pub fn replay(pair: &DpdPair, moves: &[Move]) -> Result<DpdPair> {
    moves.iter().try_fold(pair.clone(), |p, m| m.apply(&p))
}

/// The canonical pair of a model.
pub fn canonical_pair(model: ModelType) -> DpdPair {
    let real = |x: i64| CurvePoint::real(Rational::from_integer(x.into()));
    let half = Rational::new(1.into(), 2.into());
    let one_minus_z2 = RationalFunction::from_poly(Poly::new(vec![
        GaussianRational::one(),
        GaussianRational::zero(),
        -GaussianRational::one(),
    ]));
    let (curve, d, h) = match model {
        ModelType::Torus => (RealCurve::circle(), QDivisor::zero(), RationalFunction::one()),
        ModelType::Sphere => (RealCurve::affine_line(), QDivisor::zero(), one_minus_z2),
        ModelType::RP2 => (RealCurve::affine_line(), QDivisor::point(real(-1), half), one_minus_z2),
        ModelType::KleinBottle => (
            RealCurve::affine_line(),
            QDivisor::new([(real(-1), half.clone()), (real(1), half)]),
            one_minus_z2,
        ),
    };
    DpdPair::new(curve, d, h).expect("canonical pairs are valid")
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Normalization {
    pub model: ModelType,
    pub moves: Vec<Move>,
    pub canonical: DpdPair,
}

struct Log {
    pair: DpdPair,
    moves: Vec<Move>,
    verdict: TopologyVerdict,
}

impl Log {
    fn push(&mut self, m: Move) -> Result<()> {
        let next = m.apply(&self.pair)?;
        let verdict = classify_real_locus(&next)?;
        if verdict != self.verdict {
            return Err(Error::InvariantBroken(format!("{m} changed the verdict {} into {verdict}", self.verdict)));
        }
        self.pair = next;
        self.moves.push(m);
        Ok(())
    }

    fn twist(&mut self, t: TwistData) -> Result<()> {
        if t.is_identity() {
            return Ok(());
        }
        self.push(Move::Twist(t))
    }
}

/// `(z − c)^{−k}` for every finite zero or pole `c` of `h` of order `k`,
/// taking one point of each conjugate pair and halving the order at real
/// points, skipping `keep`. Twisting by it leaves `h` without finite zeros
/// or poles outside `keep`.
fn clearing_function(pair: &DpdPair, keep: &[CurvePoint]) -> Result<RationalFunction> {
    let mut f = RationalFunction::one();
    for (p, k) in pair.h_data() {
        let Some(x) = p.finite() else { continue };
        if keep.contains(p) {
            continue;
        }
        let factor = RationalFunction::from_poly(Poly::linear(x.clone()));
        if p.is_real() {
            if k % 2 != 0 {
                return Err(Error::InvariantBroken(format!("odd order of h at {p} outside the exceptional points")));
            }
            f = &f * &factor.pow(-k / 2);
        } else if p.is_upper() {
            f = &f * &factor.pow(-k);
        }
    }
    Ok(f)
}

fn non_real_support(d: &QDivisor) -> BTreeSet<CurvePoint> {
    d.support().into_iter().filter(|p| !p.is_real()).flat_map(|p| [p.conj(), p]).collect()
}

fn removed_non_real(curve: &RealCurve, skip: &[CurvePoint]) -> BTreeSet<CurvePoint> {
    curve.removed().iter().filter(|p| !p.is_real() && !skip.contains(p)).cloned().collect()
}

/// The positive constant `κ` with `h = κ·target`.
fn constant_ratio(h: &RationalFunction, target: &RationalFunction) -> Result<Rational> {
    let ratio = h / target;
    match ratio.as_constant() {
        Some(c) if c.im.is_zero() && c.re.is_positive() => Ok(c.re),
        _ => Err(Error::InvariantBroken(format!("h = {} is not a positive multiple of {}", print_ratfn(h), print_ratfn(target)))),
    }
}

/// Reduces a pair whose real locus is one of the four models to the
/// canonical pair of that model. Every move is replayed and checked to keep
/// the classification, and the result is compared with the canonical pair.
pub fn normalize_to_model(pair: &DpdPair) -> Result<Normalization> {
    let report = fiber_report(pair)?;
    let verdict = classify_report(&report);
    let model = verdict.model().ok_or_else(|| Error::NotAModel(verdict.to_string()))?;
    let mut log = Log { pair: pair.clone(), moves: Vec::new(), verdict };
    let canonical = canonical_pair(model);
    let real = |x: i64| CurvePoint::real(Rational::from_integer(x.into()));
    let ends = [real(-1), real(1)];

    if model == ModelType::Torus {
        let f = clearing_function(&log.pair, &[])?;
        log.twist(TwistData::function(f)?)?;
        let i = CurvePoint::Finite(GaussianRational::i());
        let mut remove = non_real_support(log.pair.d());
        remove.extend([i.conj(), i.clone()].into_iter().filter(|p| log.pair.curve().contains(p)));
        if !remove.is_empty() {
            log.push(Move::RestrictNonReal(remove))?;
        }
        let extra = removed_non_real(log.pair.curve(), &[i.clone(), i.conj()]);
        if !extra.is_empty() {
            log.push(Move::ExtendNonReal(extra))?;
        }
    } else {
        let RealImage::Components(components) = image_of(&report) else {
            return Err(Error::InvariantBroken("a compact interval model without an interval image".into()));
        };
        let (a, b) = (&components[0].lower.point, &components[0].upper.point);
        // Infinity when it is removed, so that images in A¹ only move affinely.
        let puncture = pair.curve().real_punctures().last().expect("interval-type curves have a real puncture");
        let psi = Mobius::sending([&ends[0], &ends[1], &CurvePoint::Infinity], [a, b, puncture])?;
        if !psi.is_identity() {
            log.push(Move::Reparametrize(psi))?;
        }
        let f = clearing_function(&log.pair, &ends)?;
        log.twist(TwistData::function(f)?)?;
        let remove = non_real_support(log.pair.d());
        if !remove.is_empty() {
            log.push(Move::RestrictNonReal(remove))?;
        }
        let extra = removed_non_real(log.pair.curve(), &[]);
        if !extra.is_empty() {
            log.push(Move::ExtendNonReal(extra))?;
        }
        let punctures: Vec<CurvePoint> = log.pair.curve().real_punctures().filter(|p| !p.is_infinity()).cloned().collect();
        for c in punctures {
            log.push(Move::ExtendEmptyFiber(c))?;
        }
        for c in &ends {
            if !log.pair.d().get(c).floor().is_zero() {
                log.push(Move::LocalReduce(c.clone()))?;
            }
        }
        if log.pair.d().get(&ends[0]) < log.pair.d().get(&ends[1]) {
            log.push(Move::FlipSign)?;
        }
    }
    let kappa = constant_ratio(log.pair.h(), canonical.h())?;
    log.twist(TwistData::scalar(kappa.recip())?)?;

    if log.pair != canonical {
        return Err(Error::InvariantBroken(format!("normalization ended at\n{}instead of\n{canonical}", log.pair)));
    }
    debug_assert_eq!(canonical.curve().kind() == CurveKind::CircleType, model == ModelType::Torus);
    Ok(Normalization { model, moves: log.moves, canonical })
}

/// Checks the certificate `ψ*D₂ = D₁ + div(f)|_{C₁}` and
/// `ψ*h₂ = λ·f·τ*f·h₁` for `ψ: C₁ → C₂`.
pub fn verify_equivalence(
    pair1: &DpdPair,
    pair2: &DpdPair,
    psi: &Mobius,
    f: &RationalFunction,
    lambda: &Rational,
) -> Result<bool> {
    let t = TwistData::new(f.clone(), lambda.clone())?;
    if psi.pullback_curve(pair2.curve()) != *pair1.curve() {
        return Err(Error::CurveMismatch);
    }
    let d_ok = psi.pullback_divisor(pair2.d()) == pair1.d() + &principal_divisor(&t.f, pair1.curve())?;
    let h1 = (&(&t.f * &t.f.conj()) * pair1.h()).scale(&GaussianRational::real(t.lambda));
    Ok(d_ok && psi.pullback_fn(pair2.h()) == h1)
}
