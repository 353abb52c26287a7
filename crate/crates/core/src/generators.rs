//! Seeded random profiles for every convexity condition and every failure
//! alternative, and placement of profiles on arbitrary circles.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::angles::{
    classify_by_angles, Alternative, AngleProfile, Circle, Condition, ConvexityVerdict, Tolerance, Vertex,
};
use crate::error::{Error, Result};

/// Smallest angle magnitude and vertex gap in generated profiles.
pub const DELTA_MIN: f64 = 1e-4;

const MAX_ATTEMPTS: usize = 1000;

const ANGLE_MAX: f64 = PI - DELTA_MIN;

/// A requested verdict class: one of the four convexity conditions or one
/// of the five failure alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    AllPositive,
    AllNegative,
    OneNegative,
    OnePositive,
    AllPositiveWinding,
    AllNegativeWinding,
    OneNegativeWinding,
    OnePositiveWinding,
    MixedSigns,
}

impl Target {
    pub const ALL: [Target; 9] = [
        Target::AllPositive,
        Target::AllNegative,
        Target::OneNegative,
        Target::OnePositive,
        Target::AllPositiveWinding,
        Target::AllNegativeWinding,
        Target::OneNegativeWinding,
        Target::OnePositiveWinding,
        Target::MixedSigns,
    ];

    pub const CONVEX: [Target; 4] = [
        Target::AllPositive,
        Target::AllNegative,
        Target::OneNegative,
        Target::OnePositive,
    ];

    pub const NON_CONVEX: [Target; 5] = [
        Target::AllPositiveWinding,
        Target::AllNegativeWinding,
        Target::OneNegativeWinding,
        Target::OnePositiveWinding,
        Target::MixedSigns,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Target::AllPositive => "I",
            Target::AllNegative => "II",
            Target::OneNegative => "III",
            Target::OnePositive => "IV",
            Target::AllPositiveWinding => "A1",
            Target::AllNegativeWinding => "A2",
            Target::OneNegativeWinding => "A3",
            Target::OnePositiveWinding => "A4",
            Target::MixedSigns => "A5",
        }
    }

    pub fn is_convex(&self) -> bool {
        Target::CONVEX.contains(self)
    }

    /// Smallest vertex count for which the class is non-empty.
    pub fn min_vertices(&self) -> usize {
        match self {
            Target::AllPositiveWinding | Target::AllNegativeWinding => 5,
            Target::OneNegativeWinding | Target::OnePositiveWinding | Target::MixedSigns => 4,
            _ => 3,
        }
    }

    pub fn matches(&self, verdict: &ConvexityVerdict) -> bool {
        verdict.label() == self.label()
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown class {s:?}; expected one of I, II, III, IV, A1..A5")))
    }
}

impl From<Condition> for Target {
    fn from(c: Condition) -> Self {
        match c {
            Condition::AllPositive => Target::AllPositive,
            Condition::AllNegative => Target::AllNegative,
            Condition::OneNegative { .. } => Target::OneNegative,
            Condition::OnePositive { .. } => Target::OnePositive,
        }
    }
}

impl From<Alternative> for Target {
    fn from(a: Alternative) -> Self {
        match a {
            Alternative::AllPositiveWinding => Target::AllPositiveWinding,
            Alternative::AllNegativeWinding => Target::AllNegativeWinding,
            Alternative::OneNegativeWinding => Target::OneNegativeWinding,
            Alternative::OnePositiveWinding => Target::OnePositiveWinding,
            Alternative::MixedSigns => Target::MixedSigns,
        }
    }
}

impl From<ConvexityVerdict> for Target {
    fn from(v: ConvexityVerdict) -> Self {
        match v {
            ConvexityVerdict::Convex(c) => c.into(),
            ConvexityVerdict::NonConvex(a) => a.into(),
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` values in `(lo, hi)` summing to `total`, or `None` if the draw
/// falls outside the box.
///
/// Draws a flat Dirichlet partition of the slack above `lo` (or below `hi`
/// when the mean is in the upper half of the box), then sets the last value
/// to close the sum.
fn bounded_partition(rng: &mut impl Rng, count: usize, total: f64, lo: f64, hi: f64) -> Option<Vec<f64>> {
    let weights: Vec<f64> = (0..count).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let norm: f64 = weights.iter().sum();
    let from_below = total / count as f64 <= (lo + hi) / 2.0;
    let mut values: Vec<f64> = if from_below {
        let slack = total - count as f64 * lo;
        weights.iter().map(|w| lo + slack * w / norm).collect()
    } else {
        let slack = count as f64 * hi - total;
        weights.iter().map(|w| hi - slack * w / norm).collect()
    };
    let head: f64 = values[..count - 1].iter().sum();
    values[count - 1] = total - head;
    values.iter().all(|&v| v > lo && v < hi).then_some(values)
}

/// Smallest circular gap between the partial sums of the profile.
pub fn min_vertex_gap(thetas: &[f64]) -> f64 {
    let mut positions: Vec<f64> = thetas
        .iter()
        .scan(0.0, |acc, t| {
            let here = *acc;
            *acc += t;
            Some(here.rem_euclid(TAU))
        })
        .collect();
    positions.sort_by(f64::total_cmp);
    let wrap = TAU - positions[positions.len() - 1] + positions[0];
    positions.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min)
}

fn accept(thetas: Vec<f64>, target: Target) -> Option<AngleProfile> {
    if thetas.iter().any(|t| t.abs() < DELTA_MIN || t.abs() > ANGLE_MAX) {
        return None;
    }
    if min_vertex_gap(&thetas) < DELTA_MIN {
        return None;
    }
    let profile = AngleProfile::new(thetas, Tolerance::default()).ok()?;
    target.matches(&classify_by_angles(&profile)).then_some(profile)
}

fn retry(
    target: Target,
    n: usize,
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Option<Vec<f64>>,
) -> Result<AngleProfile> {
    if n < target.min_vertices() {
        return Err(unsatisfiable(target, n, 0));
    }
    let mut rng = rng_for(seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(profile) = draw(&mut rng).and_then(|t| accept(t, target)) {
            return Ok(profile);
        }
    }
    Err(unsatisfiable(target, n, MAX_ATTEMPTS))
}

fn unsatisfiable(target: Target, n: usize, attempts: usize) -> Error {
    Error::Unsatisfiable {
        label: target.label().to_string(),
        n,
        attempts,
    }
}

fn negated(target: Target, n: usize, seed: u64, base: Target) -> Result<AngleProfile> {
    let profile = generate(base, n, seed)?.negated();
    // ANGLE_MAX keeps every angle off pi, so negation stays in range
    debug_assert!(target.matches(&classify_by_angles(&profile)));
    Ok(profile)
}

/// Thetas with exactly one negative angle at a random position; the
/// positive ones sum to `positive_total`.
fn one_negative(rng: &mut ChaCha8Rng, n: usize, positive_total: f64, negative: f64) -> Option<Vec<f64>> {
    let mut thetas = bounded_partition(rng, n - 1, positive_total, DELTA_MIN, ANGLE_MAX)?;
    thetas.push(negative);
    let r = rng.random_range(0..n);
    thetas.rotate_right(r);
    Some(thetas)
}

/// Profile satisfying the requested convexity condition; deterministic per seed.
pub fn gen_convex_profile(target: Target, n: usize, seed: u64) -> Result<AngleProfile> {
    if !target.is_convex() {
        return Err(Error::Parse(format!("{target} is not a convexity condition")));
    }
    generate(target, n, seed)
}

/// Profile failing every convexity condition in the requested way.
pub fn gen_nonconvex_profile(target: Target, n: usize, seed: u64) -> Result<AngleProfile> {
    if target.is_convex() {
        return Err(Error::Parse(format!("{target} is a convexity condition")));
    }
    generate(target, n, seed)
}

/// Profile of any class.
pub fn generate(target: Target, n: usize, seed: u64) -> Result<AngleProfile> {
    match target {
        Target::AllPositive => retry(target, n, seed, |rng| {
            bounded_partition(rng, n, TAU, DELTA_MIN, ANGLE_MAX)
        }),
        Target::AllNegative => negated(target, n, seed, Target::AllPositive),
        Target::OneNegative => retry(target, n, seed, |rng| {
            let lo = (n - 1) as f64 * DELTA_MIN;
            if lo >= ANGLE_MAX {
                return None;
            }
            let span = rng.random_range(lo..ANGLE_MAX);
            let mut thetas = bounded_partition(rng, n - 1, span, DELTA_MIN, ANGLE_MAX)?;
            let closing = -thetas.iter().sum::<f64>();
            thetas.push(closing);
            let r = rng.random_range(0..n);
            thetas.rotate_right(r);
            Some(thetas)
        }),
        Target::OnePositive => negated(target, n, seed, Target::OneNegative),
        Target::AllPositiveWinding => retry(target, n, seed, |rng| {
            let max_w = ((n as f64 * (ANGLE_MAX - 0.1)) / TAU).floor() as i64;
            let w = rng.random_range(2..=max_w.max(2));
            bounded_partition(rng, n, TAU * w as f64, DELTA_MIN, ANGLE_MAX)
        }),
        Target::AllNegativeWinding => negated(target, n, seed, Target::AllPositiveWinding),
        Target::OneNegativeWinding => retry(target, n, seed, |rng| {
            let room = (n - 1) as f64 * (ANGLE_MAX - 0.05);
            let max_w = ((room - DELTA_MIN) / TAU).floor().max(1.0) as i64;
            let w = rng.random_range(1..=max_w);
            let upper = (room - TAU * w as f64).min(ANGLE_MAX);
            if upper <= DELTA_MIN {
                return None;
            }
            let negative = rng.random_range(DELTA_MIN..upper);
            one_negative(rng, n, TAU * w as f64 + negative, -negative)
        }),
        Target::OnePositiveWinding => negated(target, n, seed, Target::OneNegativeWinding),
        Target::MixedSigns => retry(target, n, seed, |rng| {
            let mut thetas: Vec<f64> = (0..n - 1)
                .map(|_| {
                    let magnitude = rng.random_range(DELTA_MIN..ANGLE_MAX);
                    if rng.random_bool(0.5) {
                        magnitude
                    } else {
                        -magnitude
                    }
                })
                .collect();
            let head: f64 = thetas.iter().sum();
            let w = (head / TAU).round();
            thetas.push(TAU * w - head);
            let r = rng.random_range(0..n);
            thetas.rotate_right(r);
            Some(thetas)
        }),
    }
}

/// Condition-I profile for large `n`, where the `DELTA_MIN` floor cannot
/// hold (it caps condition I at about 62 800 vertices). Each angle is
/// `2 pi / n` scaled by a factor in `[0.5, 1.5)`, renormalised, with the
/// last angle closing the sum exactly.
pub fn gen_dense_convex(n: usize, seed: u64) -> Result<AngleProfile> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let mut rng = rng_for(seed);
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let norm: f64 = weights.iter().sum();
    let mut thetas: Vec<f64> = weights.iter().map(|w| TAU * w / norm).collect();
    let head: f64 = thetas[..n - 1].iter().sum();
    thetas[n - 1] = TAU - head;
    AngleProfile::new(thetas, Tolerance::default())
}

/// Raw vertices of the profile on `circle`, rotated by `rotation` radians.
pub fn gen_vertices_on_circle(profile: &AngleProfile, circle: Circle, rotation: f64) -> Vec<Vertex> {
    let (c, r) = (circle.center(), circle.radius());
    profile.sigma().values()[..profile.len()]
        .iter()
        .map(|&s| {
            let (sin, cos) = (s + rotation).sin_cos();
            Vertex::at(c.x() + r * cos, c.y() + r * sin)
        })
        .collect()
}

/// A random circle and rotation for end-to-end placement tests.
pub fn random_placement(rng: &mut impl Rng) -> (Circle, f64) {
    let center = Vertex::at(rng.random_range(-100.0..100.0), rng.random_range(-100.0..100.0));
    let radius = 10f64.powf(rng.random_range(-2.0..3.0));
    let rotation = rng.random_range(0.0..TAU);
    (Circle::new(center, radius).expect("positive radius"), rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{canonicalize, profile_to_vertices};
    use approx::assert_abs_diff_eq;

    #[test]
    fn dense_profiles_are_condition_i() {
        for n in [3, 1000, 200_000] {
            let p = gen_dense_convex(n, 5).unwrap();
            assert_eq!(classify_by_angles(&p), ConvexityVerdict::Convex(Condition::AllPositive));
            assert!(p.thetas().iter().all(|&t| t > PI / n as f64 * 0.9));
        }
    }

    #[test]
    fn every_target_is_generated_with_its_label() {
        for target in Target::ALL {
            for n in target.min_vertices()..=12 {
                for seed in 0..20 {
                    let p = generate(target, n, seed).unwrap();
                    assert_eq!(p.len(), n);
                    assert!(target.matches(&classify_by_angles(&p)), "{target} n={n} seed={seed}");
                    assert!(min_vertex_gap(p.thetas()) >= DELTA_MIN);
                }
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        for target in Target::ALL {
            assert_eq!(generate(target, 7, 42).unwrap(), generate(target, 7, 42).unwrap());
        }
        assert_ne!(
            generate(Target::MixedSigns, 7, 1).unwrap(),
            generate(Target::MixedSigns, 7, 2).unwrap()
        );
    }

    #[test]
    fn negative_classes_mirror_positive_ones() {
        let i = gen_convex_profile(Target::AllPositive, 6, 9).unwrap();
        let ii = gen_convex_profile(Target::AllNegative, 6, 9).unwrap();
        for (a, b) in i.thetas().iter().zip(ii.thetas()) {
            assert_eq!(*a, -*b);
        }
        assert_eq!(ii.winding(), -1);
    }

    #[test]
    fn one_negative_triangle() {
        let p = gen_convex_profile(Target::OneNegative, 3, 5).unwrap();
        assert_eq!(p.winding(), 0);
        assert_eq!(p.thetas().iter().filter(|t| **t < 0.0).count(), 1);
    }

    #[test]
    fn winding_of_generated_alternatives() {
        for seed in 0..10 {
            let a1 = gen_nonconvex_profile(Target::AllPositiveWinding, 5, seed).unwrap();
            assert_eq!(a1.winding(), 2);
            assert_abs_diff_eq!(a1.thetas().iter().sum::<f64>(), 4.0 * PI, epsilon = 5.0 * 1e-9);
            let a3 = gen_nonconvex_profile(Target::OneNegativeWinding, 4, seed).unwrap();
            assert_eq!(a3.winding(), 1);
            let a5 = gen_nonconvex_profile(Target::MixedSigns, 4, seed).unwrap();
            assert!(a5.thetas().iter().filter(|t| **t > 0.0).count() == 2);
        }
    }

    #[test]
    fn impossible_requests_fail() {
        assert!(matches!(
            generate(Target::AllPositiveWinding, 4, 0),
            Err(Error::Unsatisfiable { .. })
        ));
        assert!(matches!(
            generate(Target::MixedSigns, 3, 0),
            Err(Error::Unsatisfiable { .. })
        ));
        assert!(gen_convex_profile(Target::MixedSigns, 5, 0).is_err());
        assert!(gen_nonconvex_profile(Target::AllPositive, 5, 0).is_err());
    }

    #[test]
    fn placement_round_trips() {
        let p = generate(Target::MixedSigns, 8, 3).unwrap();
        let tol = Tolerance::default();
        let unit = gen_vertices_on_circle(&p, Circle::unit(), 0.0);
        let canon = profile_to_vertices(&p, tol).unwrap();
        for (a, b) in unit.iter().zip(canon.vertices()) {
            assert_abs_diff_eq!(a.x(), b.x(), epsilon = 1e-15);
            assert_abs_diff_eq!(a.y(), b.y(), epsilon = 1e-15);
        }
        let circle = Circle::new(Vertex::new(3.0, -2.0).unwrap(), 7.0).unwrap();
        let placed = gen_vertices_on_circle(&p, circle, 1.1);
        let back = canonicalize(&placed, tol).unwrap();
        for (a, b) in back.vertices().iter().zip(canon.vertices()) {
            assert_abs_diff_eq!(a.x(), b.x(), epsilon = 1e-9);
            assert_abs_diff_eq!(a.y(), b.y(), epsilon = 1e-9);
        }
        assert_abs_diff_eq!(back.source_circle().radius(), 7.0, epsilon = 1e-9);
    }

    #[test]
    fn square_profile_on_any_circle_is_square() {
        let p = AngleProfile::new(vec![PI / 2.0; 4], Tolerance::default()).unwrap();
        let circle = Circle::new(Vertex::new(-5.0, 2.0).unwrap(), 0.3).unwrap();
        let pts = gen_vertices_on_circle(&p, circle, 0.4);
        for k in 0..4 {
            let (a, b, c) = (pts[k], pts[(k + 1) % 4], pts[(k + 2) % 4]);
            let dot = (a.x() - b.x()) * (c.x() - b.x()) + (a.y() - b.y()) * (c.y() - b.y());
            assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn target_parsing() {
        assert_eq!("iii".parse::<Target>().unwrap(), Target::OneNegative);
        assert_eq!("A5".parse::<Target>().unwrap(), Target::MixedSigns);
        assert!("A6".parse::<Target>().is_err());
    }
}
