//! The image of the real locus in the base curve and the classification of
//! compact real loci into the four rational models: torus, sphere, real
//! projective plane and Klein bottle.

use std::fmt;

use serde::Serialize;

use crate::curve::{CurveKind, CurvePoint};
use crate::error::Result;
use crate::fibers::{fiber_report, Cut, FiberReport, RealFiberType};
use crate::pair::DpdPair;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum ModelType {
    Torus,
    Sphere,
    RP2,
    KleinBottle,
}

impl ModelType {
    pub const ALL: [ModelType; 4] = [ModelType::Torus, ModelType::Sphere, ModelType::RP2, ModelType::KleinBottle];

    /// The row of the table of models: the compact surface and its rational
    /// affine model.
    pub fn row_name(self) -> &'static str {
        match self {
            ModelType::Torus => "torus S1 x S1: (0, 1) on P1 minus [i, -i]",
            ModelType::Sphere => "sphere S2: (0, 1 - z^2) on A1",
            ModelType::RP2 => "real projective plane RP2: (1/2*[-1], 1 - z^2) on A1",
            ModelType::KleinBottle => "Klein bottle K: (1/2*[-1] + 1/2*[1], 1 - z^2) on A1",
        }
    }
}

impl fmt::Display for ModelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TopologyVerdict {
    Model(ModelType),
    EmptyRealLocus,
    NonCompactOrNotConnected(String),
    Undetermined(String),
}

impl TopologyVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            TopologyVerdict::Model(_) => "Model",
            TopologyVerdict::EmptyRealLocus => "EmptyRealLocus",
            TopologyVerdict::NonCompactOrNotConnected(_) => "NonCompactOrNotConnected",
            TopologyVerdict::Undetermined(_) => "Undetermined",
        }
    }

    pub fn model(&self) -> Option<ModelType> {
        match self {
            TopologyVerdict::Model(m) => Some(*m),
            _ => None,
        }
    }
}

impl fmt::Display for TopologyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyVerdict::Model(m) => write!(f, "{m}"),
            TopologyVerdict::EmptyRealLocus => f.write_str("EmptyRealLocus"),
            TopologyVerdict::NonCompactOrNotConnected(reason) => write!(f, "NonCompactOrNotConnected ({reason})"),
            TopologyVerdict::Undetermined(reason) => write!(f, "Undetermined ({reason})"),
        }
    }
}

/// An end of an image component: closed at a point of the curve, open at a
/// puncture.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bound {
    pub point: CurvePoint,
    pub closed: bool,
}

/// A connected piece of the image, running from `lower` to `upper` in the
/// increasing direction of `P¹(R)` (possibly through infinity).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ImageComponent {
    pub lower: Bound,
    pub upper: Bound,
}

impl fmt::Display for ImageComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower.closed { '[' } else { '(' };
        let close = if self.upper.closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lower.point, self.upper.point)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RealImage {
    Empty,
    FullCircle,
    Components(Vec<ImageComponent>),
}

impl fmt::Display for RealImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealImage::Empty => f.write_str("empty"),
            RealImage::FullCircle => f.write_str("full circle"),
            RealImage::Components(cs) => {
                let parts: Vec<String> = cs.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" u "))
            }
        }
    }
}

/// The image of the real locus: the points and arcs whose fibers have real
/// points, grouped into connected components.
pub fn real_image(pair: &DpdPair) -> Result<RealImage> {
    Ok(image_of(&fiber_report(pair)?))
}

pub fn image_of(report: &FiberReport) -> RealImage {
    let n = report.cuts.len();
    if n == 0 {
        return if report.arcs[0].fiber == RealFiberType::TorsorRealCircle {
            RealImage::FullCircle
        } else {
            RealImage::Empty
        };
    }
    // Elements 2k are cuts, 2k + 1 the arc after cut k.
    let inside = |j: usize| -> bool {
        if j.is_multiple_of(2) {
            matches!(&report.cuts[j / 2], Cut::Special(e) if e.fiber.has_real_points())
        } else {
            report.arcs[j / 2].fiber == RealFiberType::TorsorRealCircle
        }
    };
    let total = 2 * n;
    let Some(start) = (0..total).find(|&j| !inside(j)) else {
        return RealImage::FullCircle;
    };
    let bound_before = |j: usize| -> Bound {
        if j.is_multiple_of(2) {
            Bound { point: report.cuts[j / 2].point().clone(), closed: true }
        } else {
            Bound { point: report.cuts[j / 2].point().clone(), closed: false }
        }
    };
    let bound_after = |j: usize| -> Bound {
        if j.is_multiple_of(2) {
            Bound { point: report.cuts[j / 2].point().clone(), closed: true }
        } else {
            Bound { point: report.cuts[(j / 2 + 1) % n].point().clone(), closed: false }
        }
    };
    let mut components = Vec::new();
    let mut run: Option<usize> = None;
    for step in 1..=total {
        let j = (start + step) % total;
        match (inside(j), run) {
            (true, None) => run = Some(j),
            (false, Some(first)) => {
                let last = (j + total - 1) % total;
                components.push(ImageComponent { lower: bound_before(first), upper: bound_after(last) });
                run = None;
            }
            _ => {}
        }
    }
    if components.is_empty() {
        RealImage::Empty
    } else {
        components.sort_by(|a, b| a.lower.point.cmp(&b.lower.point));
        RealImage::Components(components)
    }
}

pub fn classify_real_locus(pair: &DpdPair) -> Result<TopologyVerdict> {
    let report = fiber_report(pair)?;
    Ok(classify_report(&report))
}

pub fn classify_report(report: &FiberReport) -> TopologyVerdict {
    use TopologyVerdict::*;
    let components = match image_of(report) {
        RealImage::Empty => return EmptyRealLocus,
        RealImage::FullCircle => {
            return match report.kind {
                CurveKind::CircleType => Model(ModelType::Torus),
                CurveKind::IntervalType => Undetermined("full image on an interval-type base".into()),
            }
        }
        RealImage::Components(cs) => cs,
    };
    if components.len() > 1 {
        let parts: Vec<String> = components.iter().map(ToString::to_string).collect();
        return NonCompactOrNotConnected(format!("the real image has {} components: {}", components.len(), parts.join(" u ")));
    }
    let c = &components[0];
    for end in [&c.lower, &c.upper] {
        if !end.closed {
            return NonCompactOrNotConnected(format!("the real image {c} runs into the puncture {}", end.point));
        }
    }
    if report.kind == CurveKind::CircleType {
        return Undetermined(format!("the real image {c} is a proper arc of a circle-type base"));
    }
    if c.lower.point == c.upper.point {
        return Undetermined(format!("the real image {c} is a single point"));
    }
    let ends = (report.fiber_at(&c.lower.point), report.fiber_at(&c.upper.point));
    use RealFiberType::{ExceptionalMu2 as B, TwoLinesFixedPoint as C};
    match ends {
        (Some(C), Some(C)) => Model(ModelType::Sphere),
        (Some(B), Some(B)) => Model(ModelType::KleinBottle),
        (Some(B), Some(C)) | (Some(C), Some(B)) => Model(ModelType::RP2),
        _ => Undetermined(format!("the ends of {c} are not exceptional fibers")),
    }
}
