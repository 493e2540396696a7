//! Fibers of the quotient morphism over real points and over conjugate pairs
//! of non-real points.

use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::curve::{CurveKind, CurvePoint};
use crate::error::{Error, Result};
use crate::pair::DpdPair;
use crate::scalar::rational_sign;
use crate::{GaussianRational, Rational};

/// The fiber over a real point: a torsor with or without real points
/// (case a), a multiplicity-2 fiber with real locus a circle of `μ₂`-orbits
/// (case b), or two lines crossing at a real fixed point (case c).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum RealFiberType {
    TorsorRealCircle,
    TorsorEmptyReal,
    ExceptionalMu2,
    TwoLinesFixedPoint,
}

impl RealFiberType {
    pub fn has_real_points(self) -> bool {
        self != RealFiberType::TorsorEmptyReal
    }

    /// Whether `h` changes sign across the point.
    pub fn is_exceptional(self) -> bool {
        matches!(self, RealFiberType::ExceptionalMu2 | RealFiberType::TwoLinesFixedPoint)
    }

    /// Diagram letter: `b` for the `μ₂` case, `c` for the fixed point.
    pub fn letter(self) -> char {
        match self {
            RealFiberType::TorsorRealCircle => 'o',
            RealFiberType::TorsorEmptyReal => '.',
            RealFiberType::ExceptionalMu2 => 'b',
            RealFiberType::TwoLinesFixedPoint => 'c',
        }
    }
}

impl fmt::Display for RealFiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The fiber over a pair of conjugate non-real points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum ConjFiberType {
    PrincipalPair,
    ExceptionalPairMultM(u64),
    TwoLinesPair,
}

impl fmt::Display for ConjFiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjFiberType::ExceptionalPairMultM(m) => write!(f, "ExceptionalPairMultM({m})"),
            other => fmt::Debug::fmt(other, f),
        }
    }
}

/// Local coordinate used at a point: `z − c`, or `w = 1/z` at infinity.
pub fn chart(c: &CurvePoint) -> &'static str {
    if c.is_infinity() {
        "w = 1/z"
    } else {
        "z"
    }
}

/// With `δ = ⌊D(c)⌋`, `r = D(c) − δ` and `e = ord_c h − 2δ`, regularity
/// leaves `(r, e) ∈ {(0, 0), (½, 1), (0, 1)}`.
pub fn classify_real_fiber(pair: &DpdPair, c: &CurvePoint) -> Result<RealFiberType> {
    if !c.is_real() {
        return Err(Error::NonRealPoint(c.clone()));
    }
    if !pair.curve().contains(c) {
        return Err(Error::PointNotOnCurve(c.clone()));
    }
    if pair.regularity_at(c).is_some() {
        return Err(Error::NotRegular(c.clone()));
    }
    let d = pair.d().get(c);
    let delta = d.floor();
    let r = &d - &delta;
    let e = Rational::from_integer(pair.ord_h(c).into()) - &delta * Rational::from_integer(2.into());
    let half = Rational::new(1.into(), 2.into());
    if r.is_zero() && e.is_zero() {
        return Ok(if pair.reduced_sign(c) > 0 {
            RealFiberType::TorsorRealCircle
        } else {
            RealFiberType::TorsorEmptyReal
        });
    }
    if e == Rational::from_integer(1.into()) {
        if r == half {
            return Ok(RealFiberType::ExceptionalMu2);
        }
        if r.is_zero() {
            return Ok(RealFiberType::TwoLinesFixedPoint);
        }
    }
    Err(Error::InvariantBroken(format!("regular pair with (r, e) = ({r}, {e}) at {c}")))
}

pub fn classify_conjugate_fiber(pair: &DpdPair, q: &CurvePoint) -> Result<ConjFiberType> {
    if q.is_real() {
        return Err(Error::RealPoint(q.clone()));
    }
    if !pair.curve().contains(q) {
        return Err(Error::PointNotOnCurve(q.clone()));
    }
    if pair.regularity_at(q).is_some() {
        return Err(Error::NotRegular(q.clone()));
    }
    let d = pair.d().get(q);
    let sum = &d + pair.d().get(&q.conj());
    if sum < Rational::from_integer(pair.ord_h(q).into()) {
        return Ok(ConjFiberType::TwoLinesPair);
    }
    if d.is_integer() {
        Ok(ConjFiberType::PrincipalPair)
    } else {
        let m = d.denom().to_u64().expect("denominator fits in u64");
        Ok(ConjFiberType::ExceptionalPairMultM(m))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealFiberEntry {
    pub point: CurvePoint,
    pub fiber: RealFiberType,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjFiberEntry {
    /// The member of the pair in the upper half-plane.
    pub point: CurvePoint,
    pub fiber: ConjFiberType,
}

/// A maximal open arc of the real circle `P¹(R)` between consecutive cut
/// points (special real points and real punctures), traversed in increasing
/// direction. `from = to = None` is the whole circle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArcEntry {
    pub from: Option<CurvePoint>,
    pub to: Option<CurvePoint>,
    pub sample: Rational,
    pub fiber: RealFiberType,
}

impl ArcEntry {
    /// Whether the arc passes through infinity.
    pub fn wraps(&self) -> bool {
        match (&self.from, &self.to) {
            (None, _) | (_, None) => true,
            (Some(a), Some(b)) => b <= a,
        }
    }
}

/// One element of the cyclic decomposition of `P¹(R)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Cut {
    Special(RealFiberEntry),
    Puncture(CurvePoint),
}

impl Cut {
    pub fn point(&self) -> &CurvePoint {
        match self {
            Cut::Special(e) => &e.point,
            Cut::Puncture(p) => p,
        }
    }
}

/// Fibers of a regular pair: special real points, special conjugate pairs,
/// and the generic fiber of every arc between cut points. `cuts[k]` is
/// followed by `arcs[k]`, cyclically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberReport {
    pub kind: CurveKind,
    pub cuts: Vec<Cut>,
    pub arcs: Vec<ArcEntry>,
    pub pairs: Vec<ConjFiberEntry>,
}

impl FiberReport {
    pub fn real_points(&self) -> impl Iterator<Item = &RealFiberEntry> {
        self.cuts.iter().filter_map(|c| match c {
            Cut::Special(e) => Some(e),
            Cut::Puncture(_) => None,
        })
    }

    pub fn fiber_at(&self, p: &CurvePoint) -> Option<RealFiberType> {
        self.real_points().find(|e| &e.point == p).map(|e| e.fiber)
    }
}

fn arc_sample(from: Option<&CurvePoint>, to: Option<&CurvePoint>) -> Rational {
    let one = Rational::from_integer(1.into());
    match (from.and_then(CurvePoint::real_value), to.and_then(CurvePoint::real_value)) {
        (Some(a), Some(b)) if a < b => (a + b) / Rational::from_integer(2.into()),
        (Some(a), _) => a + one,
        (None, Some(b)) => b - one,
        (None, None) => Rational::zero(),
    }
}

pub fn fiber_report(pair: &DpdPair) -> Result<FiberReport> {
    pair.require_regular()?;
    let special = pair.special_points();
    let mut cut_points: Vec<CurvePoint> = special.iter().filter(|p| p.is_real()).cloned().collect();
    cut_points.extend(pair.curve().real_punctures().cloned());
    cut_points.sort();

    let mut cuts = Vec::new();
    for p in &cut_points {
        cuts.push(if pair.curve().contains(p) {
            Cut::Special(RealFiberEntry { point: p.clone(), fiber: classify_real_fiber(pair, p)? })
        } else {
            Cut::Puncture(p.clone())
        });
    }

    let n = cut_points.len();
    let mut arcs = Vec::new();
    for k in 0..n.max(1) {
        let from = cut_points.get(k);
        let to = if n == 0 { None } else { cut_points.get((k + 1) % n) };
        let sample = arc_sample(from, to);
        let value = pair.h().eval(&GaussianRational::real(sample.clone())).expect("no pole off the cut points");
        let fiber = if rational_sign(&value.re) > 0 {
            RealFiberType::TorsorRealCircle
        } else {
            RealFiberType::TorsorEmptyReal
        };
        arcs.push(ArcEntry { from: from.cloned(), to: to.cloned(), sample, fiber });
    }

    // Sign-change law: the generic verdict flips exactly across b and c points.
    for k in 0..n {
        if let Cut::Special(entry) = &cuts[k] {
            let before = &arcs[(k + n - 1) % n];
            let after = &arcs[k];
            if (before.fiber != after.fiber) != entry.fiber.is_exceptional() {
                return Err(Error::InvariantBroken(format!("sign-change law fails at {}", entry.point)));
            }
        }
    }

    let mut pairs = Vec::new();
    for q in special.iter().filter(|p| p.is_upper()) {
        pairs.push(ConjFiberEntry { point: q.clone(), fiber: classify_conjugate_fiber(pair, q)? });
    }
    Ok(FiberReport { kind: pair.curve().kind(), cuts, arcs, pairs })
}

/// The parity obstruction behind cases b and c: the order of `h` at `c`
/// after removing the even part `2⌊D(c)⌋`.
pub fn reduced_order(pair: &DpdPair, c: &CurvePoint) -> i64 {
    let delta = pair.d().get(c).floor().to_integer();
    let delta: i64 = delta.try_into().expect("divisor coefficient fits in i64");
    pair.ord_h(c) - 2 * delta
}

/// Whether the reduced order at `c` is odd.
pub fn odd_reduced_order(pair: &DpdPair, c: &CurvePoint) -> bool {
    reduced_order(pair, c).is_odd()
}
