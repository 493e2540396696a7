//! Real DPD-pairs `(D, h)` on a curve `C = P¹ \ S`: validity, regularity,
//! and the moves that preserve the associated surface up to equivariant
//! isomorphism or birational diffeomorphism.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::curve::{CurvePoint, RealCurve};
use crate::divisor::{divisor_data, leading_value, principal_divisor, QDivisor};
use crate::error::{Error, Result};
use crate::mobius::Mobius;
use crate::poly::Poly;
use crate::scalar::rational_sign;
use crate::{GaussianRational, Rational, RationalFunction};

/// `|p₁q₂ − p₂q₁|` for `r₁ = p₁/q₁`, `r₂ = p₂/q₂` in lowest terms.
pub fn pair_determinant(r1: &Rational, r2: &Rational) -> BigInt {
    (r1.numer() * r2.denom() - r2.numer() * r1.denom()).abs()
}

/// `r₁, r₂` form a regular pair when `|p₁q₂ − p₂q₁| = 1`.
pub fn regular_pair(r1: &Rational, r2: &Rational) -> bool {
    pair_determinant(r1, r2).is_one()
}

/// A twist `(D, h) ↦ (D + div(f)|_C, λ·f·τ*f·h)` with `λ > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistData {
    pub f: RationalFunction,
    pub lambda: Rational,
}

impl TwistData {
    pub fn new(f: RationalFunction, lambda: Rational) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if !lambda.is_positive() {
            return Err(Error::NonPositiveScalar);
        }
        Ok(TwistData { f, lambda })
    }

    pub fn identity() -> Self {
        TwistData { f: RationalFunction::one(), lambda: Rational::one() }
    }

    pub fn function(f: RationalFunction) -> Result<Self> {
        TwistData::new(f, Rational::one())
    }

    pub fn scalar(lambda: Rational) -> Result<Self> {
        TwistData::new(RationalFunction::one(), lambda)
    }

    /// The twist equal to applying `self` and then `then`.
    pub fn then(&self, then: &TwistData) -> TwistData {
        TwistData { f: &self.f * &then.f, lambda: &self.lambda * &then.lambda }
    }

    pub fn inverse(&self) -> TwistData {
        TwistData { f: self.f.inv().expect("nonzero"), lambda: self.lambda.recip() }
    }

    pub fn is_identity(&self) -> bool {
        self.f == RationalFunction::one() && self.lambda.is_one()
    }
}

/// The point where regularity fails, with `D₊(c) = D(c)` and
/// `D₋(c) = D(τc) − ord_c h`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RegularityWitness {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub point: CurvePoint,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub d_plus: Rational,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub d_minus: Rational,
}

/// A validated real DPD-pair. The zero/pole data of `h` over all of `P¹`
/// is computed once at construction.
#[derive(Clone, Debug)]
pub struct DpdPair {
    curve: RealCurve,
    d: QDivisor,
    h: RationalFunction,
    h_data: Vec<(CurvePoint, i64)>,
}

impl PartialEq for DpdPair {
    fn eq(&self, other: &Self) -> bool {
        self.curve == other.curve && self.d == other.d && self.h == other.h
    }
}

impl Eq for DpdPair {}

impl DpdPair {
    /// Checks `h ≠ 0` real, `supp D ⊆ C`, and `D + τ*D ≤ div(h)` on `C`.
    pub fn new(curve: RealCurve, d: QDivisor, h: RationalFunction) -> Result<Self> {
        curve.validate()?;
        if h.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if !h.is_real() {
            return Err(Error::NotReal);
        }
        if let Some(p) = d.support().into_iter().find(|p| !curve.contains(p)) {
            return Err(Error::PointNotOnCurve(p));
        }
        let h_data = divisor_data(&h)?;
        let pair = DpdPair { curve, d, h, h_data };
        if let Some(p) = pair.special_points().into_iter().find(|p| {
            pair.d.get(p) + pair.d.get(&p.conj()) > Rational::from_integer(pair.ord_h(p).into())
        }) {
            return Err(Error::ValidityViolation(p));
        }
        Ok(pair)
    }

    pub fn curve(&self) -> &RealCurve {
        &self.curve
    }

    pub fn d(&self) -> &QDivisor {
        &self.d
    }

    pub fn h(&self) -> &RationalFunction {
        &self.h
    }

    /// Zeros and poles of `h` on all of `P¹`.
    pub fn h_data(&self) -> &[(CurvePoint, i64)] {
        &self.h_data
    }

    pub fn ord_h(&self, p: &CurvePoint) -> i64 {
        self.h_data.iter().find(|(q, _)| q == p).map_or(0, |(_, k)| *k)
    }

    /// `div(h)|_C`.
    pub fn h_divisor(&self) -> QDivisor {
        QDivisor::from_integral(self.h_data.iter().filter(|(p, _)| self.curve.contains(p)).cloned())
    }

    /// Curve points in `supp D ∪ supp τ*D ∪ supp div(h)`, in point order.
    pub fn special_points(&self) -> BTreeSet<CurvePoint> {
        let mut out: BTreeSet<CurvePoint> = BTreeSet::new();
        for p in self.d.support() {
            out.insert(p.conj());
            out.insert(p);
        }
        out.extend(self.h_data.iter().map(|(p, _)| p.clone()));
        out.retain(|p| self.curve.contains(p));
        out
    }

    /// `D₋ = τ*D − div(h)|_C`.
    pub fn d_minus(&self) -> QDivisor {
        &self.d.pullback_tau() - &self.h_divisor()
    }

    /// `None` when the pair is regular at `p`. A point with
    /// `D(p) + D(τp) < ord_p h` is regular when `D₊(p)` and `−D₋(p)` form a
    /// regular pair; with equality there is no condition.
    pub fn regularity_at(&self, p: &CurvePoint) -> Option<RegularityWitness> {
        let ord = Rational::from_integer(self.ord_h(p).into());
        let d_plus = self.d.get(p);
        let d_tau = self.d.get(&p.conj());
        if &d_plus + &d_tau == ord {
            return None;
        }
        let d_minus = d_tau - ord;
        (!regular_pair(&d_plus, &-d_minus.clone())).then(|| RegularityWitness {
            point: p.clone(),
            d_plus,
            d_minus,
        })
    }

    /// The first point (in point order) where regularity fails.
    pub fn regularity_witness(&self) -> Option<RegularityWitness> {
        self.special_points().iter().find_map(|p| self.regularity_at(p))
    }

    pub fn is_regular(&self) -> bool {
        self.regularity_witness().is_none()
    }

    pub fn require_regular(&self) -> Result<()> {
        match self.regularity_witness() {
            Some(w) => Err(Error::NotRegular(w.point)),
            None => Ok(()),
        }
    }

    pub fn twist(&self, t: &TwistData) -> Result<DpdPair> {
        let t = TwistData::new(t.f.clone(), t.lambda.clone())?;
        let d = &self.d + &principal_divisor(&t.f, &self.curve)?;
        let h = (&(&t.f * &t.f.conj()) * &self.h).scale(&GaussianRational::real(t.lambda));
        DpdPair::new(self.curve.clone(), d, h)
    }

    /// Twists by `(z − c)^{−⌊D(c)⌋}` so that `D(c) ∈ [0, 1)`.
    pub fn local_reduce(&self, c: &CurvePoint) -> Result<(DpdPair, TwistData)> {
        let x = match c {
            CurvePoint::Infinity => return Err(Error::InfinityUnsupported),
            CurvePoint::Finite(_) if !c.is_real() => return Err(Error::NonRealPoint(c.clone())),
            CurvePoint::Finite(x) => x,
        };
        if !self.curve.contains(c) {
            return Err(Error::PointNotOnCurve(c.clone()));
        }
        let delta = self.d.get(c).floor().to_integer();
        let k: i64 = (-delta).try_into().expect("divisor coefficient fits in i64");
        let t = TwistData::function(RationalFunction::from_poly(Poly::linear(x.clone())).pow(k))?;
        Ok((self.twist(&t)?, t))
    }

    fn check_non_real_set(points: &BTreeSet<CurvePoint>) -> Result<()> {
        if let Some(p) = points.iter().find(|p| p.is_real()) {
            return Err(Error::RealPointRemoval(p.clone()));
        }
        if let Some(p) = points.iter().find(|p| !points.contains(&p.conj())) {
            return Err(Error::NotConjugationStable(p.clone()));
        }
        Ok(())
    }

    /// Removes conjugate pairs of non-real points from the curve.
    pub fn restrict(&self, points: &BTreeSet<CurvePoint>) -> Result<DpdPair> {
        DpdPair::check_non_real_set(points)?;
        if let Some(p) = points.iter().find(|p| !self.curve.contains(p)) {
            return Err(Error::PointNotOnCurve(p.clone()));
        }
        let curve = self.curve.with_removed(points)?;
        let d = self.d.restrict(|p| !points.contains(p));
        Ok(DpdPair { curve, d, h: self.h.clone(), h_data: self.h_data.clone() })
    }

    /// Adds removed conjugate pairs back with `D = 0` there; needs `ord h = 0`.
    pub fn extend(&self, points: &BTreeSet<CurvePoint>) -> Result<DpdPair> {
        DpdPair::check_non_real_set(points)?;
        if let Some(p) = points.iter().find(|p| self.curve.contains(p)) {
            return Err(Error::NotRemoved(p.clone()));
        }
        if let Some(p) = points.iter().find(|p| self.ord_h(p) != 0) {
            return Err(Error::ExtensionObstruction(p.clone()));
        }
        let curve = self.curve.without_removed(points)?;
        Ok(DpdPair { curve, d: self.d.clone(), h: self.h.clone(), h_data: self.h_data.clone() })
    }

    /// Adds a removed real point `c` back with `D(c) = 0`, allowed when
    /// `ord_c h = 0` and `h(c) < 0`: the new fiber has no real points, so the
    /// real locus of the surface is unchanged. The last real puncture is
    /// kept, so the base stays interval-type.
    pub fn extend_empty_fiber(&self, c: &CurvePoint) -> Result<DpdPair> {
        if !c.is_real() {
            return Err(Error::NonRealPoint(c.clone()));
        }
        if self.curve.contains(c) {
            return Err(Error::NotRemoved(c.clone()));
        }
        if self.curve.real_punctures().count() == 1 {
            return Err(Error::LastRealPuncture(c.clone()));
        }
        if self.ord_h(c) != 0 {
            return Err(Error::ExtensionObstruction(c.clone()));
        }
        if leading_value(&self.h, c)?.re.is_positive() {
            return Err(Error::RealFiberExtension(c.clone()));
        }
        let curve = self.curve.without_removed(&BTreeSet::from([c.clone()]))?;
        Ok(DpdPair { curve, d: self.d.clone(), h: self.h.clone(), h_data: self.h_data.clone() })
    }

    /// The pair `(ψ⁻¹(C), ψ*D, h∘ψ)` for `ψ: ψ⁻¹(C) → C`.
    pub fn pullback(&self, psi: &Mobius) -> Result<DpdPair> {
        DpdPair::new(psi.pullback_curve(&self.curve), psi.pullback_divisor(&self.d), psi.pullback_fn(&self.h))
    }

    /// Sign of `h/(z−c)^{ord_c h}` at a real point `c`.
    pub fn reduced_sign(&self, c: &CurvePoint) -> i8 {
        let v = leading_value(&self.h, c).expect("h is nonzero");
        rational_sign(&v.re)
    }
}

impl fmt::Display for DpdPair {
    /// The pair document: one `key: value` line per field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "curve: {}", self.curve)?;
        writeln!(f, "D: {}", self.d)?;
        writeln!(f, "h: {}", crate::syntax::print_ratfn(&self.h))
    }
}
