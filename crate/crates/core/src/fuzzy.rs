//! Exact piecewise-linear fuzzy sets.
//!
//! Every set produced by the engine (terms, clipped conclusions, aggregates)
//! is a [`PiecewiseLinearSet`]: membership is linear between breakpoints and
//! constant outside them. Clipping and union insert the exact intersection
//! points, so the centroid of any aggregate is computed in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower bound of every score universe used by the tool.
pub const SCORE_MIN: f64 = 0.0;
/// Upper bound of every score universe used by the tool.
pub const SCORE_MAX: f64 = 50.0;

/// Absolute tolerance for breakpoint comparison and normalization.
pub const EPS: f64 = 1e-9;

/// Membership function `f(x; a, b, c, d)` with flat shoulders on degenerate ramps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trapezoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Trapezoid {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let ordered = a <= b && b <= c && c <= d;
        if !ordered || a >= d || ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidTrapezoid { a, b, c, d });
        }
        Ok(Trapezoid { a, b, c, d })
    }

    /// Breakpoint representation padded out to `[lo, hi]`.
    pub fn to_set_on(&self, lo: f64, hi: f64) -> Result<PiecewiseLinearSet> {
        let Trapezoid { a, b, c, d } = *self;
        let mut pts = Vec::with_capacity(6);
        if a == b {
            pts.push((a, 1.0));
        } else {
            pts.push((a, 0.0));
            pts.push((b, 1.0));
        }
        if c == d {
            pts.push((d, 1.0));
        } else {
            pts.push((c, 1.0));
            pts.push((d, 0.0));
        }
        let (first_x, first_mu) = pts[0];
        if lo < first_x {
            pts.insert(0, (lo, first_mu));
        }
        let (last_x, last_mu) = pts[pts.len() - 1];
        if hi > last_x {
            pts.push((hi, last_mu));
        }
        PiecewiseLinearSet::new(pts)
    }
}

/// Direct evaluation of the trapezoid formula.
///
/// A degenerate left ramp (`a == b`) is a shoulder: membership stays 1 at and
/// below `a`. Likewise `c == d` keeps membership 1 at and above `d`.
pub fn trapezoid_membership(x: f64, t: &Trapezoid) -> f64 {
    let Trapezoid { a, b, c, d } = *t;
    if x < a {
        if a == b {
            1.0
        } else {
            0.0
        }
    } else if x < b {
        (x - a) / (b - a)
    } else if x <= c {
        1.0
    } else if x < d {
        (d - x) / (d - c)
    } else if c == d {
        1.0
    } else {
        0.0
    }
}

/// A fuzzy set given by ordered `(x, mu)` breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PiecewiseLinearSet {
    points: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for PiecewiseLinearSet {
    type Error = Error;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self> {
        PiecewiseLinearSet::new(points)
    }
}

impl From<PiecewiseLinearSet> for Vec<(f64, f64)> {
    fn from(set: PiecewiseLinearSet) -> Self {
        set.points
    }
}

impl PiecewiseLinearSet {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSet(
                "at least two breakpoints required".into(),
            ));
        }
        for (i, &(x, mu)) in points.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidSet(format!(
                    "breakpoint {i} has non-finite x"
                )));
            }
            if !(0.0..=1.0).contains(&mu) {
                return Err(Error::InvalidSet(format!(
                    "breakpoint {i} has membership {mu} outside [0, 1]"
                )));
            }
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidSet(
                "breakpoints must be strictly increasing in x".into(),
            ));
        }
        Ok(PiecewiseLinearSet { points })
    }

    /// The all-zero set on `[lo, hi]`.
    pub fn zero(lo: f64, hi: f64) -> Self {
        PiecewiseLinearSet {
            points: vec![(lo, 0.0), (hi, 0.0)],
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// `(first x, last x)`.
    pub fn hull(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    pub fn membership(&self, x: f64) -> f64 {
        let pts = &self.points;
        let (x0, mu0) = pts[0];
        let (xn, mun) = pts[pts.len() - 1];
        if x <= x0 {
            return mu0;
        }
        if x >= xn {
            return mun;
        }
        // first index with breakpoint x strictly greater than `x`
        let hi = pts.partition_point(|p| p.0 <= x);
        let (xa, ya) = pts[hi - 1];
        if xa == x {
            return ya;
        }
        let (xb, yb) = pts[hi];
        ya + (yb - ya) * (x - xa) / (xb - xa)
    }

    pub fn is_zero(&self) -> bool {
        self.points.iter().all(|p| p.1 <= EPS)
    }

    /// Pointwise `min(mu(x), alpha)`.
    pub fn clip(&self, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidDegree(alpha));
        }
        let mut out = Vec::with_capacity(self.points.len() * 2);
        for (i, &(x, mu)) in self.points.iter().enumerate() {
            if i > 0 {
                let (px, pmu) = self.points[i - 1];
                if (pmu - alpha) * (mu - alpha) < 0.0 {
                    let t = (alpha - pmu) / (mu - pmu);
                    out.push((px + t * (x - px), alpha));
                }
            }
            out.push((x, mu.min(alpha)));
        }
        Ok(normalize(out))
    }

    /// Pointwise maximum of two sets.
    pub fn union(&self, other: &Self) -> Self {
        let mut xs: Vec<f64> = self
            .points
            .iter()
            .chain(other.points.iter())
            .map(|p| p.0)
            .collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|b, a| (*b - *a).abs() <= EPS);

        let mut out = Vec::with_capacity(xs.len() * 2);
        let mut prev: Option<(f64, f64)> = None;
        for &x in &xs {
            let diff = self.membership(x) - other.membership(x);
            if let Some((px, pdiff)) = prev {
                if pdiff * diff < 0.0 {
                    let cx = px + (x - px) * pdiff / (pdiff - diff);
                    out.push((cx, self.membership(cx).max(other.membership(cx))));
                }
            }
            out.push((x, self.membership(x).max(other.membership(x))));
            prev = Some((x, diff));
        }
        normalize(out)
    }

    /// Total area `∫ mu dx` over the breakpoint hull.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| {
                let ((x1, y1), (x2, y2)) = (w[0], w[1]);
                (x2 - x1) * (y1 + y2) / 2.0
            })
            .sum()
    }

    /// Exact centre of gravity, integrated segment by segment.
    pub fn centroid(&self) -> Result<f64> {
        let mut area = 0.0;
        let mut moment = 0.0;
        for w in self.points.windows(2) {
            let ((x1, y1), (x2, y2)) = (w[0], w[1]);
            let dx = x2 - x1;
            area += dx * (y1 + y2) / 2.0;
            moment += dx * (x1 * (2.0 * y1 + y2) + x2 * (y1 + 2.0 * y2)) / 6.0;
        }
        if area <= 0.0 {
            return Err(Error::EmptySet);
        }
        Ok(moment / area)
    }

    /// Breakpoint-wise comparison with absolute tolerance on `x` and `mu`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(p, q)| (p.0 - q.0).abs() <= tol && (p.1 - q.1).abs() <= tol)
    }
}

/// Free-function form of [`PiecewiseLinearSet::clip`].
pub fn clip(s: &PiecewiseLinearSet, alpha: f64) -> Result<PiecewiseLinearSet> {
    s.clip(alpha)
}

/// Free-function form of [`PiecewiseLinearSet::union`].
pub fn union(s1: &PiecewiseLinearSet, s2: &PiecewiseLinearSet) -> PiecewiseLinearSet {
    s1.union(s2)
}

/// Free-function form of [`PiecewiseLinearSet::centroid`].
pub fn centroid(s: &PiecewiseLinearSet) -> Result<f64> {
    s.centroid()
}

// Merges near-coincident x values and drops collinear interior breakpoints.
fn normalize(points: Vec<(f64, f64)>) -> PiecewiseLinearSet {
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for (x, mu) in points {
        let mu = mu.clamp(0.0, 1.0);
        match merged.last_mut() {
            Some(last) if (x - last.0).abs() <= EPS => last.1 = last.1.max(mu),
            _ => merged.push((x, mu)),
        }
    }
    if merged.len() < 2 {
        let (x, mu) = merged[0];
        return PiecewiseLinearSet {
            points: vec![(x, mu), (x + EPS * 2.0, mu)],
        };
    }

    let mut out: Vec<(f64, f64)> = Vec::with_capacity(merged.len());
    for (i, &p) in merged.iter().enumerate() {
        if i == 0 || i == merged.len() - 1 {
            out.push(p);
            continue;
        }
        let (ax, ay) = out[out.len() - 1];
        let (bx, by) = merged[i + 1];
        let interp = ay + (by - ay) * (p.0 - ax) / (bx - ax);
        if (interp - p.1).abs() > EPS {
            out.push(p);
        }
    }
    PiecewiseLinearSet { points: out }
}

/// A named term of a linguistic variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: String,
    pub trapezoid: Trapezoid,
    pub set: PiecewiseLinearSet,
}

/// A variable whose values are words, each backed by a fuzzy set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinguisticVariable {
    pub name: String,
    pub universe: (f64, f64),
    pub terms: Vec<Term>,
}

impl LinguisticVariable {
    pub fn new(name: &str, universe: (f64, f64), terms: &[(&str, Trapezoid)]) -> Result<Self> {
        let (lo, hi) = universe;
        let mut built = Vec::with_capacity(terms.len());
        for (term, t) in terms {
            if t.a < lo || t.d > hi {
                return Err(Error::InvalidSet(format!(
                    "term `{term}` support [{}, {}] leaves universe [{lo}, {hi}]",
                    t.a, t.d
                )));
            }
            built.push(Term {
                name: term.to_string(),
                trapezoid: *t,
                set: t.to_set_on(lo, hi)?,
            });
        }
        Ok(LinguisticVariable {
            name: name.to_string(),
            universe,
            terms: built,
        })
    }

    pub fn term(&self, name: &str) -> Result<&Term> {
        self.terms
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::UnknownTerm {
                variable: self.name.clone(),
                term: name.to_string(),
            })
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name == name)
    }

    pub fn membership(&self, term: &str, x: f64) -> Result<f64> {
        Ok(self.term(term)?.set.membership(x))
    }

    /// Membership of `x` in every term, in term order.
    pub fn fuzzify(&self, x: f64) -> Vec<f64> {
        self.terms.iter().map(|t| t.set.membership(x)).collect()
    }

    pub fn check_in_universe(&self, x: f64) -> Result<()> {
        let (min, max) = self.universe;
        if x.is_finite() && (min..=max).contains(&x) {
            Ok(())
        } else {
            Err(Error::InputOutOfRange { value: x, min, max })
        }
    }
}

fn trap(a: f64, b: f64, c: f64, d: f64) -> Trapezoid {
    Trapezoid::new(a, b, c, d).expect("built-in trapezoid is well formed")
}

/// The answer variable: No / Partial / Yes on `[0, 50]`.
pub fn make_input_variable() -> LinguisticVariable {
    LinguisticVariable::new(
        "answer",
        (SCORE_MIN, SCORE_MAX),
        &[
            ("No", trap(0.0, 0.0, 16.5, 21.5)),
            ("Partial", trap(16.5, 21.5, 33.0, 38.0)),
            ("Yes", trap(33.0, 38.0, 50.0, 50.0)),
        ],
    )
    .expect("built-in input variable is well formed")
}

/// The maturity variable: Very Low … Very High on `[0, 50]`.
pub fn make_output_variable() -> LinguisticVariable {
    LinguisticVariable::new(
        "maturity",
        (SCORE_MIN, SCORE_MAX),
        &[
            ("Very Low", trap(0.0, 0.0, 10.0, 15.0)),
            ("Low", trap(10.0, 15.0, 20.0, 25.0)),
            ("Medium", trap(20.0, 25.0, 30.0, 35.0)),
            ("High", trap(30.0, 35.0, 40.0, 45.0)),
            ("Very High", trap(40.0, 45.0, 50.0, 50.0)),
        ],
    )
    .expect("built-in output variable is well formed")
}
