//! Real Möbius transformations `w ↦ (a·w + b)/(c·w + d)` with rational
//! coefficients, used as reparametrizations `ψ: C₁ → C₂` of the base curve.

use std::fmt;

use num_traits::{One, Zero};

use crate::curve::{CurvePoint, RealCurve};
use crate::divisor::QDivisor;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::{GaussianRational, Rational, RationalFunction};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mobius {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::NotMobius);
        }
        Ok(Mobius { a, b, c, d }.normalized())
    }

    pub fn identity() -> Self {
        Mobius { a: Rational::one(), b: Rational::zero(), c: Rational::zero(), d: Rational::one() }
    }

    /// `w ↦ k·w`.
    pub fn scaling(k: Rational) -> Result<Self> {
        Mobius::new(k, Rational::zero(), Rational::zero(), Rational::one())
    }

    /// `w ↦ 1/w`, the chart at infinity.
    pub fn inversion() -> Self {
        Mobius { a: Rational::zero(), b: Rational::one(), c: Rational::one(), d: Rational::zero() }
    }

    /// The map sending `from[k]` to `to[k]` for three distinct real points each.
    pub fn sending(from: [&CurvePoint; 3], to: [&CurvePoint; 3]) -> Result<Self> {
        let source = Mobius::from_standard(from)?;
        let target = Mobius::from_standard(to)?;
        Ok(target.compose(&source.inverse()))
    }

    /// The map sending `∞, 0, 1` to the three given real points.
    fn from_standard(points: [&CurvePoint; 3]) -> Result<Self> {
        let vector = |p: &CurvePoint| -> Result<(Rational, Rational)> {
            match p {
                CurvePoint::Infinity => Ok((Rational::one(), Rational::zero())),
                CurvePoint::Finite(_) => {
                    let x = p.real_value().ok_or(Error::NotMobius)?;
                    Ok((x.clone(), Rational::one()))
                }
            }
        };
        let (x1, y1) = vector(points[0])?;
        let (x2, y2) = vector(points[1])?;
        let (x3, y3) = vector(points[2])?;
        // Solve α·v1 + β·v2 = v3.
        let det = &x1 * &y2 - &x2 * &y1;
        if det.is_zero() {
            return Err(Error::NotMobius);
        }
        let alpha = (&x3 * &y2 - &x2 * &y3) / &det;
        let beta = (&x1 * &y3 - &x3 * &y1) / &det;
        Mobius::new(&alpha * &x1, &beta * &x2, &alpha * &y1, &beta * &y2)
    }

    /// Recognises a rational function of the form `(a·z + b)/(c·z + d)` with
    /// real coefficients and `ad − bc ≠ 0`.
    pub fn from_ratfn(f: &RationalFunction) -> Result<Self> {
        if !f.is_real() || f.num().degree().unwrap_or(0) > 1 || f.den().degree().unwrap_or(0) > 1 {
            return Err(Error::NotMobius);
        }
        let re = |p: &Poly<GaussianRational>, k| p.coeff(k).re;
        Mobius::new(re(f.num(), 1), re(f.num(), 0), re(f.den(), 1), re(f.den(), 0))
    }

    /// Scales the coefficients so the first nonzero of `c, d` is one.
    fn normalized(self) -> Self {
        let k = if !self.c.is_zero() { self.c.clone() } else { self.d.clone() };
        if k.is_one() {
            return self;
        }
        Mobius { a: &self.a / &k, b: &self.b / &k, c: &self.c / &k, d: &self.d / &k }
    }

    pub fn coefficients(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Mobius::identity()
    }

    pub fn inverse(&self) -> Self {
        Mobius { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }.normalized()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Mobius) -> Self {
        Mobius {
            a: &self.a * &inner.a + &self.b * &inner.c,
            b: &self.a * &inner.b + &self.b * &inner.d,
            c: &self.c * &inner.a + &self.d * &inner.c,
            d: &self.c * &inner.b + &self.d * &inner.d,
        }
        .normalized()
    }

    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        let g = |r: &Rational| GaussianRational::real(r.clone());
        match p {
            CurvePoint::Infinity if self.c.is_zero() => CurvePoint::Infinity,
            CurvePoint::Infinity => CurvePoint::real(&self.a / &self.c),
            CurvePoint::Finite(x) => {
                let den = g(&self.c) * x.clone() + g(&self.d);
                if den.is_zero() {
                    CurvePoint::Infinity
                } else {
                    CurvePoint::Finite((g(&self.a) * x.clone() + g(&self.b)) / den)
                }
            }
        }
    }

    pub fn as_ratfn(&self) -> RationalFunction {
        let lin = |s: &Rational, t: &Rational| {
            Poly::new(vec![GaussianRational::real(t.clone()), GaussianRational::real(s.clone())])
        };
        RationalFunction::new(lin(&self.a, &self.b), lin(&self.c, &self.d)).expect("invertible map")
    }

    /// `f ∘ ψ`.
    pub fn pullback_fn(&self, f: &RationalFunction) -> RationalFunction {
        f.compose(&self.as_ratfn()).expect("composition with an invertible map")
    }

    /// `ψ*D`: the coefficient at `p` is `D(ψ(p))`.
    pub fn pullback_divisor(&self, d: &QDivisor) -> QDivisor {
        let inv = self.inverse();
        d.map_points(|p| inv.apply(p))
    }

    /// `ψ⁻¹(C)`, as a curve with removed set `ψ⁻¹(S)`.
    pub fn pullback_curve(&self, curve: &RealCurve) -> RealCurve {
        let inv = self.inverse();
        RealCurve::new(curve.removed().iter().map(|p| inv.apply(p)))
            .expect("real maps preserve conjugation-stable sets")
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_ratfn(&self.as_ratfn()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn real(n: i64) -> CurvePoint {
        CurvePoint::real(q(n, 1))
    }

    #[test]
    fn three_point_construction() {
        let psi = Mobius::sending(
            [&real(-1), &real(1), &CurvePoint::Infinity],
            [&real(2), &real(5), &real(0)],
        )
        .unwrap();
        assert_eq!(psi.apply(&real(-1)), real(2));
        assert_eq!(psi.apply(&real(1)), real(5));
        assert_eq!(psi.apply(&CurvePoint::Infinity), real(0));
        assert_eq!(psi.compose(&psi.inverse()), Mobius::identity());
    }

    #[test]
    fn rejects_degenerate_maps() {
        assert_eq!(Mobius::new(q(1, 1), q(2, 1), q(2, 1), q(4, 1)), Err(Error::NotMobius));
        let i = CurvePoint::Finite(GaussianRational::i());
        assert!(Mobius::sending([&real(0), &real(1), &i], [&real(0), &real(1), &real(2)]).is_err());
    }

    #[test]
    fn pullbacks() {
        let psi = Mobius::scaling(q(2, 1)).unwrap();
        let h = RationalFunction::from_poly(Poly::new(vec![
            GaussianRational::real(q(4, 1)),
            GaussianRational::zero(),
            GaussianRational::real(q(-1, 1)),
        ]));
        let expected = RationalFunction::from_poly(Poly::new(vec![
            GaussianRational::real(q(4, 1)),
            GaussianRational::zero(),
            GaussianRational::real(q(-4, 1)),
        ]));
        assert_eq!(psi.pullback_fn(&h), expected);
        let d = QDivisor::point(real(2), q(1, 2));
        assert_eq!(psi.pullback_divisor(&d), QDivisor::point(real(1), q(1, 2)));
        let curve = RealCurve::new([real(4), CurvePoint::Infinity]).unwrap();
        assert_eq!(psi.pullback_curve(&curve), RealCurve::new([real(2), CurvePoint::Infinity]).unwrap());
    }

    #[test]
    fn inversion_moves_infinity_to_zero() {
        let chart = Mobius::inversion();
        assert_eq!(chart.apply(&real(0)), CurvePoint::Infinity);
        assert_eq!(chart.apply(&CurvePoint::Infinity), real(0));
        assert_eq!(chart.inverse(), chart);
    }

    #[test]
    fn recognises_expressions() {
        let f = Mobius::scaling(q(3, 1)).unwrap().as_ratfn();
        assert_eq!(Mobius::from_ratfn(&f).unwrap(), Mobius::scaling(q(3, 1)).unwrap());
        let square = &f * &f;
        assert_eq!(Mobius::from_ratfn(&square), Err(Error::NotMobius));
    }
}
