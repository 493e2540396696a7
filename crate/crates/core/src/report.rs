//! Serializable reports: the JSON document shared by all commands, the text
//! rendering, and the ASCII interval diagram of a fiber report.

use std::fmt::{Display, Write as _};

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::curve::CurveKind;
use crate::error::Error;
use crate::fibers::{chart, Cut, FiberReport, RealFiberType};
use crate::normalize::Move;
use crate::syntax::{print_ratfn, ParseError};
use crate::RationalFunction;

pub(crate) fn ser_display<T: Display, S: Serializer>(value: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub(crate) fn ser_ratfn<S: Serializer>(f: &RationalFunction, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&print_ratfn(f))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Affirmative,
    Negative,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Affirmative => 0,
            Outcome::Negative => 1,
            Outcome::Error => 2,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ErrorInfo {
    pub tag: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl ErrorInfo {
    pub fn new(tag: &str, message: impl Into<String>) -> Self {
        ErrorInfo { tag: tag.into(), message: message.into(), line: None, column: None }
    }
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo::new(e.tag(), e.to_string())
    }
}

impl From<&ParseError> for ErrorInfo {
    fn from(e: &ParseError) -> Self {
        ErrorInfo { tag: e.tag().into(), message: e.message.clone(), line: Some(e.line), column: Some(e.column) }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub outcome: Outcome,
    pub verdict: String,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moves: Option<Vec<Move>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    /// `key: value` lines for the text rendering.
    #[serde(skip)]
    pub lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str, outcome: Outcome, verdict: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            outcome,
            verdict: verdict.into(),
            details: json!({}),
            moves: None,
            diagram: None,
            error: None,
            lines: Vec::new(),
        }
    }

    pub fn failure(command: &str, error: ErrorInfo) -> Self {
        let mut r = Report::new(command, Outcome::Error, error.tag.clone());
        r.error = Some(error);
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn line(mut self, key: &str, value: impl Display) -> Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The human-readable form. `color` wraps the verdict in ANSI styling.
    pub fn render_text(&self, color: bool) -> String {
        let mut out = String::new();
        let verdict = if color {
            let code = match self.outcome {
                Outcome::Affirmative => "32",
                Outcome::Negative => "33",
                Outcome::Error => "31",
            };
            format!("\x1b[1;{code}m{}\x1b[0m", self.verdict)
        } else {
            self.verdict.clone()
        };
        let _ = writeln!(out, "{}: {verdict}", self.command);
        if let Some(e) = &self.error {
            match (e.line, e.column) {
                (Some(l), Some(c)) => {
                    let _ = writeln!(out, "  {l}:{c}: {}", e.message);
                }
                _ => {
                    let _ = writeln!(out, "  {}", e.message);
                }
            }
        }
        for (k, v) in &self.lines {
            let mut rows = v.lines();
            let _ = writeln!(out, "  {k}: {}", rows.next().unwrap_or(""));
            for row in rows {
                let _ = writeln!(out, "    {row}");
            }
        }
        if let Some(moves) = &self.moves {
            let _ = writeln!(out, "  moves:");
            if moves.is_empty() {
                let _ = writeln!(out, "    (none)");
            }
            for (k, m) in moves.iter().enumerate() {
                let _ = writeln!(out, "    {}. {m}", k + 1);
            }
        }
        if let Some(d) = &self.diagram {
            let _ = writeln!(out);
            for row in d.lines() {
                let _ = writeln!(out, "  {row}");
            }
        }
        out
    }
}

/// The fiber report as JSON.
pub fn fiber_report_json(report: &FiberReport) -> Value {
    let points: Vec<Value> = report
        .real_points()
        .map(|e| json!({"point": e.point.to_string(), "fiber": e.fiber.to_string(), "chart": chart(&e.point)}))
        .collect();
    let punctures: Vec<String> = report
        .cuts
        .iter()
        .filter_map(|c| match c {
            Cut::Puncture(p) => Some(p.to_string()),
            Cut::Special(_) => None,
        })
        .collect();
    let arcs: Vec<Value> = report
        .arcs
        .iter()
        .map(|a| {
            json!({
                "from": a.from.as_ref().map(ToString::to_string),
                "to": a.to.as_ref().map(ToString::to_string),
                "sample": a.sample.to_string(),
                "fiber": a.fiber.to_string(),
            })
        })
        .collect();
    let pairs: Vec<Value> =
        report.pairs.iter().map(|p| json!({"point": p.point.to_string(), "fiber": p.fiber.to_string()})).collect();
    json!({"kind": format!("{:?}", report.kind), "points": points, "punctures": punctures, "arcs": arcs, "pairs": pairs})
}

const ARC_WIDTH: usize = 13;

/// A one-line picture of the real circle of the base: arcs whose fibers are
/// circles drawn as `[=====]`, empty arcs shaded with `-`, and each cut
/// point tagged `b` (μ₂-orbit), `c` (fixed point), `o` / `.` (torsor with /
/// without real points) or `x` (puncture). A second line labels the cuts.
/// Interval-type bases are cut open at a puncture (infinity when removed);
/// circle-type bases wrap around, marked `~` at both ends.
pub fn render_diagram(report: &FiberReport) -> String {
    let n = report.cuts.len();
    let cut_in = |k: usize| matches!(&report.cuts[k], Cut::Special(e) if e.fiber.has_real_points());
    let arc_in = |k: usize| report.arcs[k].fiber == RealFiberType::TorsorRealCircle;
    let arc = |k: usize| -> String {
        if n == 0 {
            let fill = if arc_in(0) { '=' } else { '-' };
            return std::iter::repeat_n(fill, ARC_WIDTH).collect();
        }
        if !arc_in(k) {
            return "-".repeat(ARC_WIDTH);
        }
        let (prev, next) = ((k + n - 1) % n, (k + 1) % n);
        let left = match (cut_in(k), arc_in(prev)) {
            (false, _) => '(',
            (true, true) => '=',
            (true, false) => '[',
        };
        let right = match (cut_in(next), arc_in(next)) {
            (false, _) => ')',
            (true, true) => '=',
            (true, false) => ']',
        };
        format!("{left}{}{right}", "=".repeat(ARC_WIDTH - 2))
    };
    let letter = |k: usize| match &report.cuts[k] {
        Cut::Special(e) => e.fiber.letter(),
        Cut::Puncture(_) => 'x',
    };

    let mut axis = String::new();
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut put_cut = |axis: &mut String, k: usize| {
        labels.push((axis.chars().count(), report.cuts[k].point().to_string()));
        axis.push(letter(k));
    };
    match report.kind {
        CurveKind::CircleType => {
            axis.push('~');
            if n == 0 {
                axis.push_str(&arc(0));
            }
            for k in 0..n {
                put_cut(&mut axis, k);
                axis.push_str(&arc(k));
            }
            axis.push('~');
        }
        CurveKind::IntervalType => {
            let split = (0..n)
                .rev()
                .find(|&k| matches!(report.cuts[k], Cut::Puncture(_)))
                .expect("interval-type bases have a real puncture");
            axis.push_str(&arc(split));
            for step in 1..n {
                let k = (split + step) % n;
                put_cut(&mut axis, k);
                axis.push_str(&arc(k));
            }
        }
    }
    let mut ticks = String::new();
    for (column, label) in labels {
        let at = column.max(ticks.chars().count() + usize::from(!ticks.is_empty()));
        while ticks.chars().count() < at {
            ticks.push(' ');
        }
        ticks.push_str(&label);
    }
    format!("{axis}\n{ticks}")
}
