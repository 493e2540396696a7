//! Circle torsors over the base curve. A torsor is an integral divisor `E`
//! and a real function `h` with `E + τ*E = div(h)` on the curve; two are
//! isomorphic when a function `f` shifts `E` by `div(f)` and `h` by the norm
//! `λ·f·τ*f`. Everything reduces to the norm equation `h = λ·g·τ*g`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::curve::{CurvePoint, RealCurve};
use crate::divisor::{divisor_data, function_with_divisor, principal_divisor, QDivisor};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::{ser_display, ser_ratfn};
use crate::syntax::print_ratfn;
use crate::{GaussianRational, Rational, RationalFunction};

/// `λ` and `g` with `h = λ·g·τ*g`. `λ > 0` stands for `α²` with `α` real.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NormWitness {
    #[serde(serialize_with = "ser_ratfn")]
    pub g: RationalFunction,
    #[serde(serialize_with = "ser_display")]
    pub lambda: Rational,
}

impl NormWitness {
    /// `λ·g·τ*g`.
    pub fn norm(&self) -> RationalFunction {
        (&self.g * &self.g.conj()).scale(&GaussianRational::real(self.lambda.clone()))
    }

    pub fn verify(&self, h: &RationalFunction) -> bool {
        self.lambda.is_positive() && !self.g.is_zero() && self.norm() == *h
    }
}

impl fmt::Display for NormWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g = {}, lambda = {}", print_ratfn(&self.g), self.lambda)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NormObstruction {
    /// Real points where `h` has odd order.
    OddOrderAt(Vec<CurvePoint>),
    /// All real orders are even but `h` is negative on the real line.
    NegativeSign,
}

impl fmt::Display for NormObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormObstruction::OddOrderAt(ps) => {
                let ps: Vec<String> = ps.iter().map(ToString::to_string).collect();
                write!(f, "OddOrderAt({})", ps.join(", "))
            }
            NormObstruction::NegativeSign => f.write_str("NegativeSign"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NormOutcome {
    Trivial(NormWitness),
    Nontrivial(NormObstruction),
}

impl NormOutcome {
    pub fn is_trivial(&self) -> bool {
        matches!(self, NormOutcome::Trivial(_))
    }
}

/// `1 − z/c`, or `z` for `c = 0`.
fn unit_factor(c: &GaussianRational) -> RationalFunction {
    let lin = RationalFunction::from_poly(Poly::linear(c.clone()));
    if c.is_zero() {
        lin
    } else {
        lin.scale(&-c.inv().expect("nonzero"))
    }
}

/// Decides `h = λ·g·τ*g` with `g ∈ Q(i)(z)` and `λ > 0`. Solvable exactly
/// when every real zero or pole of `h` (on all of `P¹(R)`) has even order
/// and `h` is positive on the real line. The witness takes `(1 − z/q)^k`
/// for each upper zero `q` of order `k` and half the order at real zeros.
pub fn norm_equation(h: &RationalFunction) -> Result<NormOutcome> {
    if h.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !h.is_real() {
        return Err(Error::NotReal);
    }
    let data = divisor_data(h)?;
    let odd: Vec<CurvePoint> = data.iter().filter(|(p, k)| p.is_real() && k % 2 != 0).map(|(p, _)| p.clone()).collect();
    if !odd.is_empty() {
        return Ok(NormOutcome::Nontrivial(NormObstruction::OddOrderAt(odd)));
    }
    let mut g = RationalFunction::one();
    for (p, k) in &data {
        let Some(c) = p.finite() else { continue };
        if p.is_real() {
            g = &g * &unit_factor(c).pow(k / 2);
        } else if p.is_upper() {
            g = &g * &unit_factor(c).pow(*k);
        }
    }
    let ratio = h / &(&g * &g.conj());
    let lambda = match ratio.as_constant() {
        Some(c) if c.im.is_zero() => c.re,
        _ => return Err(Error::InvariantBroken(format!("h / g·τ*g = {} is not a real constant", print_ratfn(&ratio)))),
    };
    if !lambda.is_positive() {
        return Ok(NormOutcome::Nontrivial(NormObstruction::NegativeSign));
    }
    let witness = NormWitness { g, lambda };
    if !witness.verify(h) {
        return Err(Error::InvariantBroken(format!("norm witness {witness} fails")));
    }
    Ok(NormOutcome::Trivial(witness))
}

/// The two torsors over a real point: `x·τ*x = c`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointTorsor {
    CircleTorsor(NormWitness),
    HatCircleTorsor,
}

pub fn torsor_over_point(c: &Rational) -> Result<PointTorsor> {
    if c.is_zero() {
        return Err(Error::ZeroScalar);
    }
    Ok(if c.is_positive() {
        PointTorsor::CircleTorsor(NormWitness { g: RationalFunction::one(), lambda: c.clone() })
    } else {
        PointTorsor::HatCircleTorsor
    })
}

/// A validated torsor pair `(E, h)` on a curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsorPair {
    curve: RealCurve,
    e: QDivisor,
    h: RationalFunction,
}

impl TorsorPair {
    pub fn curve(&self) -> &RealCurve {
        &self.curve
    }

    pub fn e(&self) -> &QDivisor {
        &self.e
    }

    pub fn h(&self) -> &RationalFunction {
        &self.h
    }
}

impl fmt::Display for TorsorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "curve: {}", self.curve)?;
        writeln!(f, "D: {}", self.e)?;
        writeln!(f, "h: {}", print_ratfn(&self.h))
    }
}

/// Accepts `(E, h)` when `E` is integral on the curve and
/// `E + τ*E = div(h)|_C`.
pub fn torsor_pair_validate(curve: RealCurve, e: QDivisor, h: RationalFunction) -> Result<TorsorPair> {
    curve.validate()?;
    if h.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !h.is_real() {
        return Err(Error::NotReal);
    }
    for (p, r) in e.iter() {
        if !curve.contains(p) {
            return Err(Error::PointNotOnCurve(p.clone()));
        }
        if !r.is_integer() {
            return Err(Error::NonIntegralDivisor(p.clone()));
        }
    }
    let lhs = &e + &e.pullback_tau();
    let rhs = principal_divisor(&h, &curve)?;
    if let Some(p) = lhs.support().union(&rhs.support()).find(|p| lhs.get(p) != rhs.get(p)) {
        return Err(Error::TorsorConstraintViolation(p.clone()));
    }
    Ok(TorsorPair { curve, e, h })
}

/// `f` and `λ` with `E₂ = E₁ + div(f)|_C` and `h₂ = λ·f·τ*f·h₁`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IsoWitness {
    #[serde(serialize_with = "ser_ratfn")]
    pub f: RationalFunction,
    #[serde(serialize_with = "ser_display")]
    pub lambda: Rational,
}

impl IsoWitness {
    pub fn verify(&self, t1: &TorsorPair, t2: &TorsorPair) -> Result<bool> {
        if self.f.is_zero() || !self.lambda.is_positive() || t1.curve != t2.curve {
            return Ok(false);
        }
        let shift = principal_divisor(&self.f, &t1.curve)?;
        let norm = NormWitness { g: self.f.clone(), lambda: self.lambda.clone() }.norm();
        Ok(t2.e == &t1.e + &shift && t2.h == &norm * &t1.h)
    }

    pub fn inverse(&self) -> IsoWitness {
        IsoWitness { f: self.f.inv().expect("nonzero"), lambda: self.lambda.recip() }
    }

    /// The witness for `t1 → t3` from `self: t1 → t2` and `then: t2 → t3`.
    pub fn then(&self, then: &IsoWitness) -> IsoWitness {
        IsoWitness { f: &self.f * &then.f, lambda: &self.lambda * &then.lambda }
    }
}

impl fmt::Display for IsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f = {}, lambda = {}", print_ratfn(&self.f), self.lambda)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TorsorIso {
    Isomorphic(IsoWitness),
    NotIsomorphic(NormObstruction),
}

/// Decides whether two torsor pairs on the same curve are isomorphic.
pub fn torsor_iso(t1: &TorsorPair, t2: &TorsorPair) -> Result<TorsorIso> {
    if t1.curve != t2.curve {
        return Err(Error::CurveMismatch);
    }
    let f0 = function_with_divisor(&(&t2.e - &t1.e), &t1.curve)?;
    let u = &t2.h / &(&(&f0 * &f0.conj()) * &t1.h);
    match norm_equation(&u)? {
        NormOutcome::Nontrivial(obstruction) => Ok(TorsorIso::NotIsomorphic(obstruction)),
        NormOutcome::Trivial(w) => {
            let iso = IsoWitness { f: &f0 * &w.g, lambda: w.lambda };
            if !iso.verify(t1, t2)? {
                return Err(Error::InvariantBroken(format!("isomorphism witness {iso} fails")));
            }
            Ok(TorsorIso::Isomorphic(iso))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibers::tests::arb_regular_pair;
    use crate::fibers::{classify_real_fiber, RealFiberType};
    use crate::pair::tests::{gq, lin, pt, q, real_poly};
    use proptest::prelude::*;

    fn trivial(h: &RationalFunction) -> NormWitness {
        match norm_equation(h).unwrap() {
            NormOutcome::Trivial(w) => w,
            other => panic!("expected a trivial torsor, got {other:?}"),
        }
    }

    #[test]
    fn norm_examples() {
        let w = trivial(&real_poly(&[1, 0, 1]));
        assert_eq!(w.g, RationalFunction::from_poly(Poly::new(vec![gq(1, 0), gq(0, 1)])));
        assert_eq!(w.lambda, q(1, 1));
        assert_eq!(
            norm_equation(&real_poly(&[-1, 0, 1])).unwrap(),
            NormOutcome::Nontrivial(NormObstruction::OddOrderAt(vec![pt(-1, 0), pt(1, 0)]))
        );
        assert_eq!(norm_equation(&real_poly(&[-1])).unwrap(), NormOutcome::Nontrivial(NormObstruction::NegativeSign));
        assert_eq!(trivial(&real_poly(&[1])), NormWitness { g: RationalFunction::one(), lambda: q(1, 1) });
        // z is a unit on P¹ \ {0, ∞} but still not a norm.
        assert!(!norm_equation(&real_poly(&[0, 1])).unwrap().is_trivial());
        // −(z − 1)² is negative on the whole line.
        assert_eq!(
            norm_equation(&real_poly(&[-1, 2, -1])).unwrap(),
            NormOutcome::Nontrivial(NormObstruction::NegativeSign)
        );
        let w = trivial(&(&real_poly(&[0, 0, 3]) / &real_poly(&[4, 0, 1])));
        assert_eq!(w.lambda, q(3, 4));
        assert_eq!(norm_equation(&lin(0, 1)), Err(Error::NotReal));
    }

    #[test]
    fn point_torsors() {
        assert!(matches!(torsor_over_point(&q(1, 1)), Ok(PointTorsor::CircleTorsor(_))));
        assert_eq!(torsor_over_point(&q(-1, 1)), Ok(PointTorsor::HatCircleTorsor));
        assert_eq!(
            torsor_over_point(&q(4, 1)),
            Ok(PointTorsor::CircleTorsor(NormWitness { g: RationalFunction::one(), lambda: q(4, 1) }))
        );
        assert_eq!(torsor_over_point(&q(0, 1)), Err(Error::ZeroScalar));
    }

    #[test]
    fn validation() {
        let a1 = RealCurve::affine_line;
        let i = pt(0, 1);
        assert!(torsor_pair_validate(a1(), QDivisor::point(i.clone(), q(1, 1)), real_poly(&[1, 0, 1])).is_ok());
        assert!(torsor_pair_validate(a1(), QDivisor::zero(), real_poly(&[1])).is_ok());
        assert_eq!(
            torsor_pair_validate(a1(), QDivisor::zero(), real_poly(&[0, 1])),
            Err(Error::TorsorConstraintViolation(pt(0, 0)))
        );
        assert_eq!(
            torsor_pair_validate(a1(), QDivisor::point(i.clone(), q(-1, 1)), real_poly(&[1, 0, 1])),
            Err(Error::TorsorConstraintViolation(pt(0, 1)))
        );
        assert_eq!(
            torsor_pair_validate(a1(), QDivisor::point(pt(0, 0), q(1, 2)), real_poly(&[0, 1])),
            Err(Error::NonIntegralDivisor(pt(0, 0)))
        );
    }

    #[test]
    fn iso_examples() {
        let a1 = RealCurve::affine_line;
        let t = |e: QDivisor, h: RationalFunction| torsor_pair_validate(a1(), e, h).unwrap();
        let base = t(QDivisor::zero(), real_poly(&[1]));
        match torsor_iso(&base, &t(QDivisor::zero(), real_poly(&[4]))).unwrap() {
            TorsorIso::Isomorphic(w) => assert_eq!(w.lambda, q(4, 1)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            torsor_iso(&base, &t(QDivisor::zero(), real_poly(&[-1]))).unwrap(),
            TorsorIso::NotIsomorphic(NormObstruction::NegativeSign)
        );
        let shifted = t(QDivisor::point(pt(0, 1), q(1, 1)), real_poly(&[1, 0, 1]));
        match torsor_iso(&shifted, &base).unwrap() {
            TorsorIso::Isomorphic(w) => {
                // f = u/(1 + iz) for a constant u with u·ū = 1 (here u = i).
                let u = (&w.f * &RationalFunction::from_poly(Poly::new(vec![gq(1, 0), gq(0, 1)]))).as_constant().unwrap();
                assert_eq!(u.norm(), q(1, 1));
                assert_eq!(w.lambda, q(1, 1));
                assert!(w.verify(&shifted, &base).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let other_curve = torsor_pair_validate(RealCurve::circle(), QDivisor::zero(), real_poly(&[1])).unwrap();
        assert_eq!(torsor_iso(&base, &other_curve), Err(Error::CurveMismatch));
    }

    fn arb_split() -> impl Strategy<Value = RationalFunction> {
        proptest::collection::vec((-3i64..4, -3i64..4, -2i64..3), 0..4)
            .prop_map(|fs| fs.into_iter().fold(RationalFunction::one(), |acc, (a, b, k)| &acc * &lin(a, b).pow(k)))
    }

    /// Torsors on `P¹ \ {∞, 0, ±i}`; the class is `(sign, parity of k)`
    /// for `h = ±λ·g·τ*g·z^k`.
    fn arb_torsor() -> impl Strategy<Value = (TorsorPair, bool, bool)> {
        (arb_split(), any::<bool>(), any::<bool>(), 1i64..9, 1i64..5).prop_map(|(g, negative, odd, n, d)| {
            let curve = RealCurve::new([CurvePoint::Infinity, pt(0, 0), pt(0, 1), pt(0, -1)]).unwrap();
            let sign = if negative { -1 } else { 1 };
            let mut h = NormWitness { g: g.clone(), lambda: q(n, d) }.norm().scale(&gq(sign, 0));
            if odd {
                h = &h * &real_poly(&[0, 1]);
            }
            let e = principal_divisor(&g, &curve).unwrap();
            (torsor_pair_validate(curve, e, h).unwrap(), negative, odd)
        })
    }

    fn iso(t1: &TorsorPair, t2: &TorsorPair) -> Option<IsoWitness> {
        match torsor_iso(t1, t2).unwrap() {
            TorsorIso::Isomorphic(w) => Some(w),
            TorsorIso::NotIsomorphic(_) => None,
        }
    }

    proptest! {
        #[test]
        fn norms_are_recognized(g in arb_split(), n in 1i64..50, d in 1i64..50) {
            prop_assume!(!g.is_zero());
            let h = NormWitness { g, lambda: q(n, d) }.norm();
            let w = trivial(&h);
            prop_assert!(w.verify(&h));
        }

        #[test]
        fn isomorphism_is_an_equivalence(a in arb_torsor(), b in arb_torsor(), c in arb_torsor()) {
            let (t1, s1, o1) = a;
            let (t2, s2, o2) = b;
            let (t3, _, _) = c;
            let w11 = iso(&t1, &t1);
            prop_assert!(w11.is_some());
            let w12 = iso(&t1, &t2);
            prop_assert_eq!(w12.is_some(), (s1, o1) == (s2, o2));
            if let Some(w) = &w12 {
                prop_assert!(w.inverse().verify(&t2, &t1).unwrap());
                prop_assert!(iso(&t2, &t1).is_some());
                if let Some(w23) = iso(&t2, &t3) {
                    prop_assert!(w.then(&w23).verify(&t1, &t3).unwrap());
                    prop_assert!(iso(&t1, &t3).is_some());
                }
            }
        }

        #[test]
        fn exceptional_fibers_carry_nontrivial_local_torsors(pair in arb_regular_pair(), x in -3i64..4) {
            let c = pt(x, 0);
            let fiber = classify_real_fiber(&pair, &c).unwrap();
            if matches!(fiber, RealFiberType::ExceptionalMu2 | RealFiberType::TwoLinesFixedPoint) {
                let local = lin(x, 0).pow(pair.ord_h(&c));
                let NormOutcome::Nontrivial(NormObstruction::OddOrderAt(points)) = norm_equation(&local).unwrap() else {
                    return Err(TestCaseError::fail("local factor at an exceptional fiber is a norm"));
                };
                prop_assert!(points.contains(&c));
            }
        }
    }
}
