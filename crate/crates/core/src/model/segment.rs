// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed subinterval `[a, b]` of `[0, 1]`, or the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SegmentRepr", into = "SegmentRepr")]
pub struct Segment {
    bounds: Option<(f64, f64)>,
}

impl Segment {
    pub const EMPTY: Segment = Segment { bounds: None };

    /// `[a, b]` with `0 ≤ a ≤ b ≤ 1`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a < 0.0 || b > 1.0 || a > b {
            return Err(Error::param(format!(
                "segment endpoints must satisfy 0 <= a <= b <= 1, got [{a}, {b}]"
            )));
        }
        Ok(Segment {
            bounds: Some((a, b)),
        })
    }

    /// `[0, theta]`, the anchored segments of the change-point class.
    pub fn anchored(theta: f64) -> Result<Self> {
        Segment::new(0.0, theta)
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn a(&self) -> Option<f64> {
        self.bounds.map(|(a, _)| a)
    }

    pub fn b(&self) -> Option<f64> {
        self.bounds.map(|(_, b)| b)
    }

    /// Lebesgue measure, `b - a` or 0.
    pub fn measure(&self) -> f64 {
        self.bounds.map_or(0.0, |(a, b)| b - a)
    }

    pub fn midpoint(&self) -> Option<f64> {
        self.bounds.map(|(a, b)| 0.5 * (a + b))
    }

    /// Closed-interval membership.
    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        match self.bounds {
            Some((a, b)) => a <= x && x <= b,
            None => false,
        }
    }

    pub fn intersection(&self, other: &Segment) -> Segment {
        match (self.bounds, other.bounds) {
            (Some((a1, b1)), Some((a2, b2))) => {
                let a = a1.max(a2);
                let b = b1.min(b2);
                if a <= b {
                    Segment {
                        bounds: Some((a, b)),
                    }
                } else {
                    Segment::EMPTY
                }
            }
            _ => Segment::EMPTY,
        }
    }
}

impl Default for Segment {
    fn default() -> Self {
        Segment::EMPTY
    }
}

impl std::fmt::Display for Segment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.bounds {
            Some((a, b)) => write!(f, "[{a}, {b}]"),
            None => f.write_str("∅"),
        }
    }
}

/// Nikodym distance `|g1 △ g2| = |g1| + |g2| - 2|g1 ∩ g2|`.
pub fn sym_diff_measure(g1: &Segment, g2: &Segment) -> f64 {
    let d = g1.measure() + g2.measure() - 2.0 * g1.intersection(g2).measure();
    d.max(0.0)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentRepr {
    #[serde(default)]
    empty: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
}

impl TryFrom<SegmentRepr> for Segment {
    type Error = Error;

    fn try_from(r: SegmentRepr) -> Result<Self> {
        match (r.empty, r.a, r.b) {
            (true, None, None) => Ok(Segment::EMPTY),
            (true, _, _) => Err(Error::param("an empty segment cannot carry endpoints")),
            (false, Some(a), Some(b)) => Segment::new(a, b),
            (false, _, _) => Err(Error::param(
                "a segment needs both `a` and `b`, or `empty = true`",
            )),
        }
    }
}

impl From<Segment> for SegmentRepr {
    fn from(s: Segment) -> Self {
        SegmentRepr {
            empty: s.is_empty(),
            a: s.a(),
            b: s.b(),
        }
    }
}
