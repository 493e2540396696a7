//! Weil Q-divisors on `P¹` and divisors of rational functions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::curve::{CurvePoint, RealCurve};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::poly_gaussian_roots;
use crate::{GaussianRational, Polynomial, Rational, RationalFunction};

/// `ord_p f`, with `ord_∞ f = deg(den) − deg(num)`.
pub fn order_at(f: &RationalFunction, p: &CurvePoint) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    Ok(match p {
        CurvePoint::Finite(c) => f.order_at_finite(c),
        CurvePoint::Infinity => f.order_at_infinity(),
    })
}

/// Every point of `P¹` where `f` has a zero or pole, with its order, in
/// point order. The orders sum to zero.
pub fn divisor_data(f: &RationalFunction) -> Result<Vec<(CurvePoint, i64)>> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut out: Vec<(CurvePoint, i64)> = Vec::new();
    for (r, m) in poly_gaussian_roots(f.num())? {
        out.push((CurvePoint::Finite(r), m as i64));
    }
    for (r, m) in poly_gaussian_roots(f.den())? {
        out.push((CurvePoint::Finite(r), -(m as i64)));
    }
    let at_infinity = f.order_at_infinity();
    if at_infinity != 0 {
        out.push((CurvePoint::Infinity, at_infinity));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `div(h)` restricted to the points of `curve`.
pub fn principal_divisor(h: &RationalFunction, curve: &RealCurve) -> Result<QDivisor> {
    Ok(QDivisor::from_integral(
        divisor_data(h)?.into_iter().filter(|(p, _)| curve.contains(p)),
    ))
}

/// The value at `p` of `f / t^{ord_p f}` for the local parameter `t = z − c`
/// (or `1/z` at infinity): the first nonzero Taylor coefficient of `f`.
pub fn leading_value(f: &RationalFunction, p: &CurvePoint) -> Result<GaussianRational> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match p {
        CurvePoint::Infinity => Ok(f.num().lead() / f.den().lead()),
        CurvePoint::Finite(c) => {
            let strip = |poly: &Polynomial| {
                let lin = Poly::linear(c.clone());
                let mut q = poly.clone();
                while let Some(next) = q.div_exact(&lin) {
                    q = next;
                }
                q.eval(c)
            };
            Ok(strip(f.num()) / strip(f.den()))
        }
    }
}

/// Whether `f` is a regular function on `curve`: every finite pole lies in
/// the removed set, and `f` is bounded at infinity when infinity is on the
/// curve. Decided without factoring: the denominator must divide a power of
/// `∏ (z − s)` over finite removed `s`.
pub fn is_regular_on(f: &RationalFunction, curve: &RealCurve) -> bool {
    if f.is_zero() {
        return true;
    }
    if curve.contains(&CurvePoint::Infinity) && f.order_at_infinity() < 0 {
        return false;
    }
    let removed = curve
        .removed()
        .iter()
        .filter_map(CurvePoint::finite)
        .fold(Polynomial::one(), |acc, s| &acc * &Poly::linear(s.clone()));
    let mut den = f.den().clone();
    loop {
        if den.is_constant() {
            return true;
        }
        let g = den.gcd(&removed);
        if g.is_constant() {
            return false;
        }
        den = den.div_rem(&g).0;
    }
}

/// A function `f` with `div(f)|_C = e` for an integral divisor `e` on the
/// curve: `∏ (z − c)^{e(c)}` over finite `c`, corrected by a power of
/// `z − s₀` (the curve's anchor) when infinity lies on the curve.
pub fn function_with_divisor(e: &QDivisor, curve: &RealCurve) -> Result<RationalFunction> {
    let mut f = RationalFunction::one();
    let mut total: i64 = 0;
    for (p, r) in e.iter() {
        if !r.is_integer() {
            return Err(Error::NonIntegralDivisor(p.clone()));
        }
        if !curve.contains(p) {
            return Err(Error::PointNotOnCurve(p.clone()));
        }
        let k = coefficient_i64(r);
        total += k;
        if let CurvePoint::Finite(c) = p {
            f = &f * &RationalFunction::from_poly(Poly::linear(c.clone())).pow(k);
        }
    }
    if curve.contains(&CurvePoint::Infinity) && total != 0 {
        let s0 = curve.anchor().expect("a curve through infinity removes a finite point");
        f = &f * &RationalFunction::from_poly(Poly::linear(s0.clone())).pow(-total);
    }
    Ok(f)
}

pub(crate) fn coefficient_i64(r: &Rational) -> i64 {
    r.to_integer().try_into().expect("divisor coefficient fits in i64")
}

/// A finite formal sum `Σ D(p){p}` with rational coefficients; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QDivisor {
    terms: BTreeMap<CurvePoint, Rational>,
}

impl QDivisor {
    pub fn zero() -> Self {
        QDivisor::default()
    }

    /// Sums repeated points and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (CurvePoint, Rational)>) -> Self {
        let mut out = QDivisor::zero();
        for (p, r) in terms {
            out.add_at(p, r);
        }
        out
    }

    pub fn from_integral(terms: impl IntoIterator<Item = (CurvePoint, i64)>) -> Self {
        QDivisor::new(terms.into_iter().map(|(p, k)| (p, Rational::from_integer(k.into()))))
    }

    pub fn point(p: CurvePoint, coefficient: Rational) -> Self {
        QDivisor::new([(p, coefficient)])
    }

    fn add_at(&mut self, p: CurvePoint, r: Rational) {
        if r.is_zero() {
            return;
        }
        let sum = self.get(&p) + r;
        if sum.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, sum);
        }
    }

    pub fn get(&self, p: &CurvePoint) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CurvePoint, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> BTreeSet<CurvePoint> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|r| r.is_integer())
    }

    /// Sum of the coefficients.
    pub fn degree(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, r| acc + r)
    }

    /// `τ*D`: the coefficient at `p` becomes `D(p̄)`.
    pub fn pullback_tau(&self) -> Self {
        QDivisor { terms: self.terms.iter().map(|(p, r)| (p.conj(), r.clone())).collect() }
    }

    /// Pointwise `self ≤ other`.
    pub fn leq(&self, other: &QDivisor) -> bool {
        self.terms.keys().chain(other.terms.keys()).all(|p| self.get(p) <= other.get(p))
    }

    pub fn floor(&self) -> Self {
        QDivisor::new(self.terms.iter().map(|(p, r)| (p.clone(), r.floor())))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QDivisor::new(self.terms.iter().map(|(p, r)| (p.clone(), r * k)))
    }

    /// Keeps the terms whose point satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(&CurvePoint) -> bool) -> Self {
        QDivisor {
            terms: self.terms.iter().filter(|(p, _)| keep(p)).map(|(p, r)| (p.clone(), r.clone())).collect(),
        }
    }

    /// Relabels points through `map` (used for pullbacks along Möbius maps).
    pub fn map_points(&self, map: impl Fn(&CurvePoint) -> CurvePoint) -> Self {
        QDivisor::new(self.terms.iter().map(|(p, r)| (map(p), r.clone())))
    }
}

impl Add for &QDivisor {
    type Output = QDivisor;
    fn add(self, rhs: &QDivisor) -> QDivisor {
        let mut out = self.clone();
        for (p, r) in &rhs.terms {
            out.add_at(p.clone(), r.clone());
        }
        out
    }
}

impl Sub for &QDivisor {
    type Output = QDivisor;
    fn sub(self, rhs: &QDivisor) -> QDivisor {
        self + &-rhs
    }
}

impl Neg for &QDivisor {
    type Output = QDivisor;
    fn neg(self) -> QDivisor {
        QDivisor { terms: self.terms.iter().map(|(p, r)| (p.clone(), -r.clone())).collect() }
    }
}

impl fmt::Display for QDivisor {
    /// `1/2*[-1] + 1/2*[1]`, `-[i]`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (p, r)) in self.terms.iter().enumerate() {
            let sign = if r.is_negative() { "-" } else { "+" };
            match (k, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let magnitude = r.abs();
            if magnitude.is_one() {
                write!(f, "[{p}]")?;
            } else {
                write!(f, "{magnitude}*[{p}]")?;
            }
        }
        Ok(())
    }
}
