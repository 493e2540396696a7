use thiserror::Error;

use crate::curve::CurvePoint;
use crate::GaussianRational;

/// Every failure a library operation can report. The variant name is the
/// stable tag surfaced by the CLI (see [`Error::tag`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the function has a pole at {0}")]
    PoleAtPoint(GaussianRational),
    #[error("the zero function has no divisor")]
    ZeroFunction,
    #[error("a zero or pole lies outside Q(i)")]
    NonGaussianRoots,
    #[error("the removed point set is empty, so the curve is not affine")]
    EmptyRemovedSet,
    #[error("the point set is not stable under conjugation: {0} lacks its conjugate")]
    NotConjugationStable(CurvePoint),
    #[error("h has a non-real coefficient")]
    NotReal,
    #[error("D + τ*D ≤ div(h) fails at {0}")]
    ValidityViolation(CurvePoint),
    #[error("{0} is not a point of the curve")]
    PointNotOnCurve(CurvePoint),
    #[error("the point at infinity must be moved by a reparametrization first")]
    InfinityUnsupported,
    #[error("{0} is real; removing it changes the real locus")]
    RealPointRemoval(CurvePoint),
    #[error("{0} is not a real point")]
    NonRealPoint(CurvePoint),
    #[error("{0} is a real point; expected a non-real point")]
    RealPoint(CurvePoint),
    #[error("cannot extend over {0}: ord(h) is nonzero there")]
    ExtensionObstruction(CurvePoint),
    #[error("cannot extend over {0}: the fiber there would have real points")]
    RealFiberExtension(CurvePoint),
    #[error("cannot extend over {0}: it is the last real puncture, and the base would become circle-type")]
    LastRealPuncture(CurvePoint),
    #[error("{0} is not a removed point of the curve")]
    NotRemoved(CurvePoint),
    #[error("the function does not lie in the graded piece of degree {0}")]
    NotInPiece(i64),
    #[error("relation {0} does not hold")]
    RelationFails(usize),
    #[error("relation {0} cannot be evaluated: {1}")]
    InvalidRelation(usize, String),
    #[error("the pair is not regular at {0}")]
    NotRegular(CurvePoint),
    #[error("the real locus is not one of the four compact models ({0})")]
    NotAModel(String),
    #[error("the curves do not match")]
    CurveMismatch,
    #[error("the scalar must be nonzero")]
    ZeroScalar,
    #[error("the scalar must be positive")]
    NonPositiveScalar,
    #[error("E + τ*E = div(h) fails at {0}")]
    TorsorConstraintViolation(CurvePoint),
    #[error("the divisor is not integral at {0}")]
    NonIntegralDivisor(CurvePoint),
    #[error("the map is not an invertible Möbius transformation with rational coefficients")]
    NotMobius,
    #[error("internal invariant broken: {0}")]
    InvariantBroken(String),
}

impl Error {
    pub fn tag(&self) -> &'static str {
        match self {
            Error::PoleAtPoint(_) => "PoleAtPoint",
            Error::ZeroFunction => "ZeroFunction",
            Error::NonGaussianRoots => "NonGaussianRoots",
            Error::EmptyRemovedSet => "EmptyRemovedSet",
            Error::NotConjugationStable(_) => "NotConjugationStable",
            Error::NotReal => "NotReal",
            Error::ValidityViolation(_) => "ValidityViolation",
            Error::PointNotOnCurve(_) => "PointNotOnCurve",
            Error::InfinityUnsupported => "InfinityUnsupported",
            Error::RealPointRemoval(_) => "RealPointRemoval",
            Error::NonRealPoint(_) => "NonRealPoint",
            Error::RealPoint(_) => "RealPoint",
            Error::ExtensionObstruction(_) => "ExtensionObstruction",
            Error::RealFiberExtension(_) => "RealFiberExtension",
            Error::LastRealPuncture(_) => "LastRealPuncture",
            Error::NotRemoved(_) => "NotRemoved",
            Error::NotInPiece(_) => "NotInPiece",
            Error::RelationFails(_) => "RelationFails",
            Error::InvalidRelation(..) => "InvalidRelation",
            Error::NotRegular(_) => "NotRegular",
            Error::NotAModel(_) => "NotAModel",
            Error::CurveMismatch => "CurveMismatch",
            Error::ZeroScalar => "ZeroScalar",
            Error::NonPositiveScalar => "NonPositiveScalar",
            Error::TorsorConstraintViolation(_) => "TorsorConstraintViolation",
            Error::NonIntegralDivisor(_) => "NonIntegralDivisor",
            Error::NotMobius => "NotMobius",
            Error::InvariantBroken(_) => "InvariantBroken",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
