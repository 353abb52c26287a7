//! Canonical cyclic polygons, lifted angular coordinates, central angles and
//! the linear-time convexity classifier.
//!
//! A cyclic polygon is first mapped onto the unit circle with its first
//! vertex at `(1, 0)`. Each vertex then receives a lifted angle `sigma[i]`
//! with `sigma[0] = 0` and every step in the half-open interval `(-pi, pi]`.
//! The steps are the central angles; their sum divided by `2 pi` is the
//! winding number. Convexity is read off the signs of the central angles
//! and the winding number alone.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for concyclicity, vertex distinctness and sign decisions.
pub const EPS_GEOM: f64 = 1e-9;

/// Default tolerance for the integrality of the winding number.
pub const EPS_WINDING: f64 = 1e-6;

/// Numerical tolerances shared by every stage of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub geom: f64,
    pub winding: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            geom: EPS_GEOM,
            winding: EPS_WINDING,
        }
    }
}

impl Tolerance {
    pub fn with_geom(geom: f64) -> Self {
        Tolerance {
            geom,
            ..Tolerance::default()
        }
    }
}

/// A point of the plane with finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vertex {
    pub(crate) x: f64,
    pub(crate) y: f64,
}

impl Vertex {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Vertex { x, y })
        } else {
            Err(Error::NonFiniteCoordinate { x, y })
        }
    }

    /// Builds a vertex from values the caller already knows to be finite.
    pub(crate) const fn at(x: f64, y: f64) -> Self {
        Vertex { x, y }
    }

    /// The point `(cos angle, sin angle)` of the unit circle.
    pub fn on_unit_circle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Vertex { x: c, y: s }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub(crate) fn sub(self, other: Vertex) -> Vertex {
        Vertex::at(self.x - other.x, self.y - other.y)
    }

    pub(crate) fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub(crate) fn dot(self, other: Vertex) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub(crate) fn cross(self, other: Vertex) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn distance(self, other: Vertex) -> f64 {
        self.sub(other).norm()
    }
}

impl TryFrom<[f64; 2]> for Vertex {
    type Error = Error;

    fn try_from([x, y]: [f64; 2]) -> Result<Self> {
        Vertex::new(x, y)
    }
}

impl From<Vertex> for [f64; 2] {
    fn from(v: Vertex) -> Self {
        [v.x, v.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    center: Vertex,
    radius: f64,
}

impl Circle {
    pub fn new(center: Vertex, radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(Circle { center, radius })
        } else {
            Err(Error::InvalidRadius(radius))
        }
    }

    pub fn unit() -> Self {
        Circle {
            center: Vertex::at(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn center(&self) -> Vertex {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// An ordinary cyclic polygon on the unit circle with `vertices[0] = (1, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPolygon {
    vertices: Vec<Vertex>,
    source_circle: Circle,
}

impl CanonicalPolygon {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The circumcircle of the raw input this polygon was derived from.
    pub fn source_circle(&self) -> Circle {
        self.source_circle
    }
}

/// Lifted angular coordinates `sigma[0..=n]`, `sigma[0] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSequence {
    sigma: Vec<f64>,
}

impl SigmaSequence {
    /// Validates an explicit lifted sequence of length `n + 1`.
    pub fn from_values(sigma: Vec<f64>, tol: Tolerance) -> Result<Self> {
        if sigma.len() < 4 {
            return Err(Error::TooFewVertices(sigma.len().saturating_sub(1)));
        }
        if sigma[0] != 0.0 {
            return Err(Error::Parse(format!("sigma[0] must be 0, got {}", sigma[0])));
        }
        for (i, pair) in sigma.windows(2).enumerate() {
            let step = pair[1] - pair[0];
            if !(step > -PI && step <= PI) {
                return Err(Error::AngleOutOfRange { index: i, value: step });
            }
        }
        let turns = sigma[sigma.len() - 1] / TAU;
        if (turns - turns.round()).abs() > tol.winding {
            return Err(Error::NonIntegerWinding(turns));
        }
        Ok(SigmaSequence { sigma })
    }

    pub fn values(&self) -> &[f64] {
        &self.sigma
    }

    /// Number of polygon vertices (`sigma` has one more entry).
    pub fn n(&self) -> usize {
        self.sigma.len() - 1
    }

    pub fn get(&self, i: usize) -> f64 {
        self.sigma[i]
    }
}

/// Central angles `thetas[0..n]` in `(-pi, pi]` and the integer winding number.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleProfile {
    thetas: Vec<f64>,
    winding: i64,
}

impl AngleProfile {
    /// Validates a list of central angles and derives the winding number.
    pub fn new(thetas: Vec<f64>, tol: Tolerance) -> Result<Self> {
        if thetas.len() < 3 {
            return Err(Error::TooFewVertices(thetas.len()));
        }
        for (index, &value) in thetas.iter().enumerate() {
            if !(value > -PI && value <= PI) {
                return Err(Error::AngleOutOfRange { index, value });
            }
            if value.abs() <= tol.geom {
                return Err(Error::ZeroAngle { index, value });
            }
        }
        let turns = thetas.iter().sum::<f64>() / TAU;
        let winding = turns.round();
        if (turns - winding).abs() > tol.winding {
            return Err(Error::NonIntegerWinding(turns));
        }
        Ok(AngleProfile {
            thetas,
            winding: winding as i64,
        })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Partial sums of the central angles.
    pub fn sigma(&self) -> SigmaSequence {
        let mut sigma = Vec::with_capacity(self.thetas.len() + 1);
        let mut acc = 0.0;
        sigma.push(acc);
        for &theta in &self.thetas {
            acc += theta;
            sigma.push(acc);
        }
        SigmaSequence { sigma }
    }

    /// Profile of the polygon relabelled to start at vertex `shift`.
    pub fn shifted(&self, shift: usize) -> AngleProfile {
        let n = self.thetas.len();
        let thetas = (0..n).map(|k| self.thetas[(k + shift) % n]).collect();
        AngleProfile {
            thetas,
            winding: self.winding,
        }
    }

    /// Profile of the re-oriented polygon `(V[n-1], ..., V[0])`.
    ///
    /// Every edge is traversed backwards, so its central angle is negated,
    /// except that an angle of exactly `pi` stays `pi`.
    pub fn reversed(&self) -> AngleProfile {
        let n = self.thetas.len();
        let thetas: Vec<f64> = (0..n)
            .map(|k| reverse_angle(self.thetas[(2 * n - 2 - k) % n]))
            .collect();
        let winding = (thetas.iter().sum::<f64>() / TAU).round() as i64;
        AngleProfile { thetas, winding }
    }

    /// Elementwise negation, used by the generators to mirror a profile.
    pub(crate) fn negated(&self) -> AngleProfile {
        AngleProfile {
            thetas: self.thetas.iter().map(|t| -t).collect(),
            winding: -self.winding,
        }
    }
}

fn reverse_angle(theta: f64) -> f64 {
    if theta >= PI {
        PI
    } else {
        -theta
    }
}

/// Which sufficient condition for convexity a profile satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// `w = 1` and every angle positive.
    AllPositive,
    /// `w = -1` and every angle negative.
    AllNegative,
    /// `w = 0` and exactly the angle at `index` is negative.
    OneNegative { index: usize },
    /// `w = 0` and exactly the angle at `index` is positive.
    OnePositive { index: usize },
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::AllPositive => "I",
            Condition::AllNegative => "II",
            Condition::OneNegative { .. } => "III",
            Condition::OnePositive { .. } => "IV",
        }
    }

    pub fn distinguished_index(&self) -> Option<usize> {
        match *self {
            Condition::OneNegative { index } | Condition::OnePositive { index } => Some(index),
            _ => None,
        }
    }
}

/// Why a profile fails every convexity condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alternative {
    /// All angles positive but `w != 1`.
    AllPositiveWinding,
    /// All angles negative but `w != -1`.
    AllNegativeWinding,
    /// Exactly one negative angle but `w != 0`.
    OneNegativeWinding,
    /// Exactly one positive angle but `w != 0`.
    OnePositiveWinding,
    /// At least two positive and at least two negative angles.
    MixedSigns,
}

impl Alternative {
    pub fn label(&self) -> &'static str {
        match self {
            Alternative::AllPositiveWinding => "A1",
            Alternative::AllNegativeWinding => "A2",
            Alternative::OneNegativeWinding => "A3",
            Alternative::OnePositiveWinding => "A4",
            Alternative::MixedSigns => "A5",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConvexityVerdict {
    Convex(Condition),
    NonConvex(Alternative),
}

impl ConvexityVerdict {
    pub fn is_convex(&self) -> bool {
        matches!(self, ConvexityVerdict::Convex(_))
    }

    pub fn condition(&self) -> Option<Condition> {
        match *self {
            ConvexityVerdict::Convex(c) => Some(c),
            ConvexityVerdict::NonConvex(_) => None,
        }
    }

    pub fn alternative(&self) -> Option<Alternative> {
        match *self {
            ConvexityVerdict::Convex(_) => None,
            ConvexityVerdict::NonConvex(a) => Some(a),
        }
    }

    /// Index of the lone negative (III) or lone positive (IV) angle.
    pub fn distinguished_index(&self) -> Option<usize> {
        self.condition().and_then(|c| c.distinguished_index())
    }

    pub fn label(&self) -> &'static str {
        match self {
            ConvexityVerdict::Convex(c) => c.label(),
            ConvexityVerdict::NonConvex(a) => a.label(),
        }
    }
}

impl fmt::Display for ConvexityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexityVerdict::Convex(c) => write!(f, "convex ({})", c.label()),
            ConvexityVerdict::NonConvex(a) => write!(f, "non-convex ({})", a.label()),
        }
    }
}

/// Circle through the input vertices.
///
/// The circle is seeded from a well-spread triple: the first vertex, the
/// vertex farthest from it, and the vertex farthest from the line through
/// those two. Every vertex must then lie on the circle within
/// `tol.geom * (1 + radius)`; otherwise the worst offender is reported.
pub fn fit_circumcircle(raw: &[Vertex], tol: Tolerance) -> Result<Circle> {
    if raw.len() < 3 {
        return Err(Error::TooFewVertices(raw.len()));
    }
    let a = raw[0];
    let (b, chord) = raw
        .iter()
        .map(|&v| (v, v.distance(a)))
        .fold((a, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let ab = b.sub(a);
    let (c, area) = raw
        .iter()
        .map(|&v| (v, ab.cross(v.sub(a)).abs()))
        .fold((a, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if chord == 0.0 || area <= tol.geom * chord * chord {
        return Err(Error::CollinearSeed);
    }

    let center = circumcenter(a, b, c);
    let radius = center.distance(a);
    let circle = Circle::new(center, radius)?;

    let limit = tol.geom * (1.0 + radius);
    let worst = raw
        .iter()
        .enumerate()
        .map(|(i, v)| (i, (v.distance(center) - radius).abs()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if worst.1 > limit {
        return Err(Error::NotConcyclic {
            index: worst.0,
            deviation: worst.1,
        });
    }
    Ok(circle)
}

fn circumcenter(a: Vertex, b: Vertex, c: Vertex) -> Vertex {
    let ab = b.sub(a);
    let ac = c.sub(a);
    let d = 2.0 * ab.cross(ac);
    let ab2 = ab.dot(ab);
    let ac2 = ac.dot(ac);
    let ux = (ac.y * ab2 - ab.y * ac2) / d;
    let uy = (ab.x * ac2 - ac.x * ab2) / d;
    Vertex::at(a.x + ux, a.y + uy)
}

/// Maps raw cyclic vertices onto the unit circle with the first at `(1, 0)`.
pub fn canonicalize(raw: &[Vertex], tol: Tolerance) -> Result<CanonicalPolygon> {
    let circle = fit_circumcircle(raw, tol)?;
    let center = circle.center();
    let unit: Vec<Vertex> = raw
        .iter()
        .map(|v| {
            let d = v.sub(center);
            let len = d.norm();
            Vertex::at(d.x / len, d.y / len)
        })
        .collect();
    let first = unit[0];
    let mut vertices: Vec<Vertex> = unit
        .iter()
        .map(|u| Vertex::at(u.x * first.x + u.y * first.y, u.y * first.x - u.x * first.y))
        .collect();
    vertices[0] = Vertex::at(1.0, 0.0);

    let polar: Vec<f64> = vertices.iter().map(|v| v.y.atan2(v.x)).collect();
    if let Some((i, j)) = closest_pair_on_circle(&polar, |i, j| vertices[i].distance(vertices[j]) <= tol.geom) {
        return Err(Error::DuplicateVertices {
            first: i.min(j),
            second: i.max(j),
        });
    }

    Ok(CanonicalPolygon {
        vertices,
        source_circle: circle,
    })
}

/// Sorts points of a circle by polar angle and returns the first pair of
/// angular neighbours (including the wrap-around pair) accepted by `close`.
fn closest_pair_on_circle(polar: &[f64], close: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..polar.len()).collect();
    order.sort_by(|&a, &b| polar[a].total_cmp(&polar[b]));
    let wrap = (order[order.len() - 1], order[0]);
    order
        .windows(2)
        .map(|w| (w[0], w[1]))
        .chain(std::iter::once(wrap))
        .find(|&(i, j)| close(i, j))
}

/// Signed angle from `from` to `to` (both on the unit circle) in `(-pi, pi]`.
pub fn principal_step(from: Vertex, to: Vertex) -> f64 {
    let step = from.cross(to).atan2(from.dot(to));
    // atan2 returns -pi on the negative side of the branch cut.
    if step <= -PI {
        PI
    } else {
        step
    }
}

pub fn lift_sigma(poly: &CanonicalPolygon) -> SigmaSequence {
    let n = poly.len();
    let mut sigma = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    sigma.push(acc);
    for i in 0..n {
        acc += principal_step(poly.vertices[i], poly.vertices[(i + 1) % n]);
        sigma.push(acc);
    }
    SigmaSequence { sigma }
}

pub fn central_angles(sigma: &SigmaSequence, tol: Tolerance) -> Result<AngleProfile> {
    let thetas = sigma.values().windows(2).map(|w| w[1] - w[0]).collect();
    AngleProfile::new(thetas, tol)
}

/// Decides convexity from the signs of the central angles and the winding
/// number in a single pass.
pub fn classify_by_angles(profile: &AngleProfile) -> ConvexityVerdict {
    let n = profile.len();
    let mut positive = 0usize;
    let mut last_positive = 0usize;
    let mut last_negative = 0usize;
    for (i, &theta) in profile.thetas().iter().enumerate() {
        if theta > 0.0 {
            positive += 1;
            last_positive = i;
        } else {
            last_negative = i;
        }
    }
    let negative = n - positive;
    let w = profile.winding();

    use Alternative::*;
    use ConvexityVerdict::{Convex, NonConvex};
    if negative == 0 {
        if w == 1 {
            Convex(Condition::AllPositive)
        } else {
            NonConvex(AllPositiveWinding)
        }
    } else if positive == 0 {
        if w == -1 {
            Convex(Condition::AllNegative)
        } else {
            NonConvex(AllNegativeWinding)
        }
    } else if negative == 1 {
        if w == 0 {
            Convex(Condition::OneNegative { index: last_negative })
        } else {
            NonConvex(OneNegativeWinding)
        }
    } else if positive == 1 {
        if w == 0 {
            Convex(Condition::OnePositive { index: last_positive })
        } else {
            NonConvex(OnePositiveWinding)
        }
    } else {
        NonConvex(MixedSigns)
    }
}

/// Vertices `(cos sigma[i], sin sigma[i])` realizing the profile.
pub fn profile_to_vertices(profile: &AngleProfile, tol: Tolerance) -> Result<CanonicalPolygon> {
    let sigma = profile.sigma();
    let n = profile.len();
    let reduced: Vec<f64> = sigma.values()[..n].iter().map(|s| s.rem_euclid(TAU)).collect();
    let gap_ok = |i: usize, j: usize| {
        let gap = (reduced[i] - reduced[j]).abs();
        gap.min(TAU - gap) <= tol.geom
    };
    if let Some((i, j)) = closest_pair_on_circle(&reduced, gap_ok) {
        return Err(Error::DegenerateProfile {
            first: i.min(j),
            second: i.max(j),
        });
    }
    let mut vertices: Vec<Vertex> = sigma.values()[..n].iter().map(|&s| Vertex::on_unit_circle(s)).collect();
    vertices[0] = Vertex::at(1.0, 0.0);
    Ok(CanonicalPolygon {
        vertices,
        source_circle: Circle::unit(),
    })
}

/// Full pipeline from raw coordinates to a verdict.
pub fn analyze_vertices(raw: &[Vertex], tol: Tolerance) -> Result<Analysis> {
    let polygon = canonicalize(raw, tol)?;
    let sigma = lift_sigma(&polygon);
    let profile = central_angles(&sigma, tol)?;
    let verdict = classify_by_angles(&profile);
    Ok(Analysis {
        polygon,
        sigma,
        profile,
        verdict,
    })
}

/// Pipeline from a central-angle profile to a verdict; no circle fitting.
pub fn analyze_profile(profile: AngleProfile, tol: Tolerance) -> Result<Analysis> {
    let polygon = profile_to_vertices(&profile, tol)?;
    let sigma = profile.sigma();
    let verdict = classify_by_angles(&profile);
    Ok(Analysis {
        polygon,
        sigma,
        profile,
        verdict,
    })
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub polygon: CanonicalPolygon,
    pub sigma: SigmaSequence,
    pub profile: AngleProfile,
    pub verdict: ConvexityVerdict,
}
