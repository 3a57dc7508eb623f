//! Invertible affine lines `y = slope * x + intercept` and their algebra.
//!
//! A [`Line`] is always non-horizontal and non-vertical, i.e. an invertible
//! affine map of the real line. Lines compare and hash by their reduced
//! `(slope, intercept)`, and order by slope then intercept.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawLine")]
pub struct Line {
    slope: Rational,
    intercept: Rational,
}

#[derive(Deserialize)]
struct RawLine {
    slope: Rational,
    intercept: Rational,
}

impl TryFrom<RawLine> for Line {
    type Error = Error;
    fn try_from(raw: RawLine) -> Result<Self> {
        Line::new(raw.slope, raw.intercept)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointR {
    pub x: Rational,
    pub y: Rational,
}

impl PointR {
    pub fn new(x: Rational, y: Rational) -> Self {
        PointR { x, y }
    }
}

impl fmt::Debug for PointR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Fixed-point structure of an affine map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    /// `slope != 1`: the single point `(x0, x0)`.
    Unique(PointR),
    /// The identity line fixes every point.
    Every,
    /// A nonzero translation fixes nothing.
    None,
}

impl Line {
    pub fn new(slope: Rational, intercept: Rational) -> Result<Self> {
        if slope.is_zero() {
            return Err(Error::ZeroSlope);
        }
        Ok(Line { slope, intercept })
    }

    /// The identity map `y = x`.
    pub fn identity() -> Self {
        Line {
            slope: Rational::one(),
            intercept: Rational::zero(),
        }
    }

    /// Line through two points with distinct x and distinct y coordinates.
    pub fn through(p: &PointR, r: &PointR) -> Result<Self> {
        let dx = &r.x - &p.x;
        let dy = &r.y - &p.y;
        if dx.is_zero() {
            return Err(Error::Precondition("vertical line".into()));
        }
        let slope = dy.checked_div(&dx)?;
        let intercept = &p.y - &slope * &p.x;
        Line::new(slope, intercept)
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn intercept(&self) -> &Rational {
        &self.intercept
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    /// `x` with `self.eval(x) == y`.
    pub fn solve(&self, y: &Rational) -> Rational {
        (y - &self.intercept) / &self.slope
    }

    pub fn contains(&self, p: &PointR) -> bool {
        self.eval(&p.x) == p.y
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.intercept.is_zero()
    }

    /// `y = x/slope - intercept/slope`.
    pub fn invert(&self) -> Line {
        let inv = self.slope.recip().expect("slope is nonzero");
        let intercept = -(&self.intercept * &inv);
        Line {
            slope: inv,
            intercept,
        }
    }

    /// Functional composition `self ∘ inner`.
    pub fn compose(&self, inner: &Line) -> Line {
        Line {
            slope: &self.slope * &inner.slope,
            intercept: &self.slope * &inner.intercept + &self.intercept,
        }
    }

    /// The star product `self⁻¹ ∘ other`, computed in closed form:
    /// slope `λ₂/λ₁`, intercept `(b₂ − b₁)/λ₁`.
    pub fn star(&self, other: &Line) -> Line {
        Line {
            slope: &other.slope / &self.slope,
            intercept: (&other.intercept - &self.intercept) / &self.slope,
        }
    }

    pub fn fixed_point(&self) -> FixedPoint {
        if self.slope.is_one() {
            if self.intercept.is_zero() {
                FixedPoint::Every
            } else {
                FixedPoint::None
            }
        } else {
            let x0 = &self.intercept / (Rational::one() - &self.slope);
            FixedPoint::Unique(PointR::new(x0.clone(), x0))
        }
    }

    /// Intersection of two distinct lines; `Ok(None)` when parallel.
    pub fn intersect(&self, other: &Line) -> Result<Option<PointR>> {
        if self.slope == other.slope {
            if self.intercept == other.intercept {
                return Err(Error::SameLine);
            }
            return Ok(None);
        }
        let x = (&other.intercept - &self.intercept) / (&self.slope - &other.slope);
        let y = self.eval(&x);
        Ok(Some(PointR::new(x, y)))
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.slope, self.intercept)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y = {}x + {}", self.slope, self.intercept)
    }
}

/// Shorthand for tests and examples. Panics on a zero slope.
pub fn line(slope: Rational, intercept: Rational) -> Line {
    Line::new(slope, intercept).expect("nonzero slope")
}
