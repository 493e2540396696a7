//! Smooth rational real affine curves `C = P¹ \ S` in the coordinate `z`,
//! with the standard conjugation `z ↦ z̄`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{point_cmp, Conj};
use crate::{GaussianRational, Rational};

/// A closed point of `P¹` over `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CurvePoint {
    Finite(GaussianRational),
    Infinity,
}

impl CurvePoint {
    pub fn real(x: Rational) -> Self {
        CurvePoint::Finite(GaussianRational::real(x))
    }

    pub fn conj(&self) -> Self {
        match self {
            CurvePoint::Finite(c) => CurvePoint::Finite(c.conj()),
            CurvePoint::Infinity => CurvePoint::Infinity,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            CurvePoint::Finite(c) => c.im.is_zero(),
            CurvePoint::Infinity => true,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn finite(&self) -> Option<&GaussianRational> {
        match self {
            CurvePoint::Finite(c) => Some(c),
            CurvePoint::Infinity => None,
        }
    }

    /// The rational coordinate of a real finite point.
    pub fn real_value(&self) -> Option<&Rational> {
        self.finite().filter(|c| c.im.is_zero()).map(|c| &c.re)
    }

    /// True for the member of a non-real conjugate pair with positive imaginary part.
    pub fn is_upper(&self) -> bool {
        self.finite().is_some_and(|c| c.im > Rational::zero())
    }
}

impl Ord for CurvePoint {
    /// Finite points in [`point_cmp`] order, then infinity.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CurvePoint::Finite(a), CurvePoint::Finite(b)) => point_cmp(a, b),
            (CurvePoint::Finite(_), CurvePoint::Infinity) => Ordering::Less,
            (CurvePoint::Infinity, CurvePoint::Finite(_)) => Ordering::Greater,
            (CurvePoint::Infinity, CurvePoint::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for CurvePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Finite(c) => write!(f, "{c}"),
            CurvePoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Whether the real locus of the curve is an open subset of a line or the
/// whole circle `P¹(R)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurveKind {
    IntervalType,
    CircleType,
}

/// `P¹` minus a nonempty conjugation-stable finite set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RealCurve {
    removed: BTreeSet<CurvePoint>,
}

impl RealCurve {
    pub fn new(removed: impl IntoIterator<Item = CurvePoint>) -> Result<Self> {
        let curve = RealCurve { removed: removed.into_iter().collect() };
        curve.validate()?;
        Ok(curve)
    }

    /// `A¹ = P¹ \ {∞}`.
    pub fn affine_line() -> Self {
        RealCurve { removed: BTreeSet::from([CurvePoint::Infinity]) }
    }

    /// `P¹ \ {i, −i}`, whose real locus is the full circle.
    pub fn circle() -> Self {
        let i = GaussianRational::i();
        RealCurve {
            removed: BTreeSet::from([CurvePoint::Finite(i.conj()), CurvePoint::Finite(i)]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.removed.is_empty() {
            return Err(Error::EmptyRemovedSet);
        }
        if let Some(p) = self.removed.iter().find(|p| !self.removed.contains(&p.conj())) {
            return Err(Error::NotConjugationStable(p.clone()));
        }
        Ok(())
    }

    pub fn removed(&self) -> &BTreeSet<CurvePoint> {
        &self.removed
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        !self.removed.contains(p)
    }

    pub fn kind(&self) -> CurveKind {
        if self.removed.iter().any(CurvePoint::is_real) {
            CurveKind::IntervalType
        } else {
            CurveKind::CircleType
        }
    }

    /// Real removed points, in point order.
    pub fn real_punctures(&self) -> impl Iterator<Item = &CurvePoint> {
        self.removed.iter().filter(|p| p.is_real())
    }

    /// The smallest finite removed point, used as the correction point of
    /// section generators.
    pub fn anchor(&self) -> Option<&GaussianRational> {
        self.removed.iter().find_map(CurvePoint::finite)
    }

    /// Same curve with more points removed (no stability check).
    pub(crate) fn with_removed(&self, extra: &BTreeSet<CurvePoint>) -> Result<Self> {
        RealCurve::new(self.removed.union(extra).cloned())
    }

    /// Same curve with points added back.
    pub(crate) fn without_removed(&self, points: &BTreeSet<CurvePoint>) -> Result<Self> {
        RealCurve::new(self.removed.difference(points).cloned())
    }
}

impl fmt::Display for RealCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("P1 minus [")?;
        for (k, p) in self.removed.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}
