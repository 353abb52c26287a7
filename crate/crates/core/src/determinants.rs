//! Orientation determinants of triples of circle points.
//!
//! `delta(a, b, c)` is the determinant of the rows `(1, x, y)` of the three
//! points; its sign tells on which side of the chord `b c` the point `a`
//! lies. A cyclic polygon is convex exactly when, for every edge, all the
//! remaining vertices give determinants of one strict sign.

use serde::Serialize;

use crate::angles::{
    classify_by_angles, AngleProfile, CanonicalPolygon, ConvexityVerdict, SigmaSequence, Tolerance, Vertex,
};
use crate::error::{Error, Result};

/// A determinant together with the vertex indices of its rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaValue {
    pub value: f64,
    pub indices: (usize, usize, usize),
}

/// `det [[1, a], [1, b], [1, c]]`, twice the signed area of `a b c`.
#[inline]
pub fn delta(a: Vertex, b: Vertex, c: Vertex) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

#[inline]
pub(crate) fn succ(i: usize, n: usize) -> usize {
    if i + 1 == n {
        0
    } else {
        i + 1
    }
}

/// Determinant of the unit-circle points at lifted angles `alpha, beta, gamma`.
pub fn delta_determinant(sigma: &SigmaSequence, alpha: usize, beta: usize, gamma: usize) -> DeltaValue {
    let p = |k: usize| Vertex::on_unit_circle(sigma.get(k));
    DeltaValue {
        value: delta(p(alpha), p(beta), p(gamma)),
        indices: (alpha, beta, gamma),
    }
}

/// `4 sin(theta_i / 2) sin((sigma_j - sigma_i) / 2) sin((sigma_j - sigma_{i+1}) / 2)`.
///
/// Uses the lifted `sigma_{i+1}` (so `sigma_n` for the closing edge), which
/// makes it equal to `delta_determinant(sigma, j, i, i (+) 1)` for every edge.
pub fn delta_product(profile: &AngleProfile, sigma: &SigmaSequence, j: usize, i: usize) -> DeltaValue {
    let n = profile.len();
    product_form(profile, sigma, j, i, sigma.get(i + 1), succ(i, n))
}

/// The product form evaluated with the wrapped index `sigma_{i (+) 1}`.
///
/// For the closing edge `i = n - 1` this uses `sigma_0` instead of
/// `sigma_n = sigma_0 + 2 pi w`, so it differs from the determinant by the
/// factor `(-1)^w`; on every other edge the two forms coincide.
pub fn delta_product_wrapped(profile: &AngleProfile, sigma: &SigmaSequence, j: usize, i: usize) -> DeltaValue {
    let next = succ(i, profile.len());
    product_form(profile, sigma, j, i, sigma.get(next), next)
}

fn product_form(
    profile: &AngleProfile,
    sigma: &SigmaSequence,
    j: usize,
    i: usize,
    sigma_next: f64,
    next: usize,
) -> DeltaValue {
    let theta = profile.thetas()[i];
    let sj = sigma.get(j);
    let value = 4.0 * (theta / 2.0).sin() * ((sj - sigma.get(i)) / 2.0).sin() * ((sj - sigma_next) / 2.0).sin();
    DeltaValue {
        value,
        indices: (j, i, next),
    }
}

/// Whether `V[alpha]` and `V[beta]` lie strictly in one open half-plane of
/// the line through `V[i]` and `V[j]`.
pub fn same_strict_side(
    poly: &CanonicalPolygon,
    alpha: usize,
    beta: usize,
    i: usize,
    j: usize,
    tol: Tolerance,
) -> Result<bool> {
    let (vi, vj) = (poly.vertex(i), poly.vertex(j));
    if vi.distance(vj) <= tol.geom {
        return Err(Error::DegenerateEdge { first: i, second: j });
    }
    let da = delta(poly.vertex(alpha), vi, vj);
    let db = delta(poly.vertex(beta), vi, vj);
    Ok(da.abs() > tol.geom && db.abs() > tol.geom && (da > 0.0) == (db > 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scan {
    /// Evaluate every determinant.
    #[default]
    Full,
    /// Stop at the first edge with mixed signs.
    EarlyExit,
}

/// Sign counts of `delta(V[j], V[i], V[i (+) 1])` over the off-edge vertices `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeSigns {
    pub positive: usize,
    pub negative: usize,
    pub min_abs: f64,
    pub first_positive: Option<usize>,
    pub first_negative: Option<usize>,
}

impl EdgeSigns {
    pub fn is_uniform(&self) -> bool {
        self.positive == 0 || self.negative == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminantClassification {
    pub is_convex: bool,
    /// Per-edge summaries; shorter than `n` after an early exit.
    pub edges: Vec<EdgeSigns>,
    /// Smallest `|delta|` seen.
    pub min_margin: f64,
}

impl DeterminantClassification {
    /// Edge, positive vertex and negative vertex of the first sign clash.
    pub fn first_clash(&self) -> Option<(usize, usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .find_map(|(i, e)| match (e.first_positive, e.first_negative) {
                (Some(p), Some(q)) => Some((i, p, q)),
                _ => None,
            })
    }

    /// The labelled verdict of the angle classifier, provided both routes
    /// agree on convexity.
    pub fn verdict(&self, profile: &AngleProfile) -> Option<ConvexityVerdict> {
        let verdict = classify_by_angles(profile);
        (verdict.is_convex() == self.is_convex).then_some(verdict)
    }
}

/// Quadratic-time convexity test from the determinant signs of every edge.
pub fn classify_by_determinants(
    poly: &CanonicalPolygon,
    tol: Tolerance,
    scan: Scan,
) -> Result<DeterminantClassification> {
    let n = poly.len();
    let vs = poly.vertices();
    let mut edges = Vec::with_capacity(n);
    let mut min_margin = f64::INFINITY;
    let mut is_convex = true;
    for i in 0..n {
        let k = succ(i, n);
        let (a, b) = (vs[i], vs[k]);
        let mut signs = EdgeSigns {
            positive: 0,
            negative: 0,
            min_abs: f64::INFINITY,
            first_positive: None,
            first_negative: None,
        };
        for (j, &v) in vs.iter().enumerate() {
            if j == i || j == k {
                continue;
            }
            let value = delta(v, a, b);
            let abs = value.abs();
            if abs <= tol.geom {
                return Err(Error::MarginalSign { j, i, k, value });
            }
            signs.min_abs = signs.min_abs.min(abs);
            if value > 0.0 {
                signs.positive += 1;
                signs.first_positive.get_or_insert(j);
            } else {
                signs.negative += 1;
                signs.first_negative.get_or_insert(j);
            }
        }
        min_margin = min_margin.min(signs.min_abs);
        let uniform = signs.is_uniform();
        edges.push(signs);
        if !uniform {
            is_convex = false;
            if scan == Scan::EarlyExit {
                break;
            }
        }
    }
    Ok(DeterminantClassification {
        is_convex,
        edges,
        min_margin,
    })
}

/// Full table `table[i][j] = delta(V[j], V[i], V[i (+) 1])`, `None` on the edge itself.
pub fn delta_table(poly: &CanonicalPolygon) -> Vec<Vec<Option<f64>>> {
    let n = poly.len();
    let vs = poly.vertices();
    (0..n)
        .map(|i| {
            let k = succ(i, n);
            (0..n)
                .map(|j| (j != i && j != k).then(|| delta(vs[j], vs[i], vs[k])))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignLemmaReport {
    /// Sign every determinant should have: `+1` or `-1`.
    pub expected_sign: i8,
    pub evaluated: usize,
    /// Determinants with the wrong sign by more than the tolerance.
    pub violations: usize,
    /// Determinants within the tolerance of zero; their sign is not judged.
    pub marginal: usize,
    /// Smallest `expected_sign * delta`; negative when some sign is wrong.
    pub min_margin: f64,
    pub first_violation: Option<(usize, usize)>,
}

impl SignLemmaReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates every `delta(j, i, i (+) 1)` of a convex profile and checks they
/// are all strictly positive (conditions I and III) or all strictly negative
/// (II and IV). Values within `tol.geom` of zero are counted as marginal
/// rather than as violations.
pub fn check_sign_lemma(profile: &AngleProfile, tol: Tolerance) -> Result<SignLemmaReport> {
    let expected_sign: i8 = match classify_by_angles(profile) {
        ConvexityVerdict::Convex(c) => match c.label() {
            "I" | "III" => 1,
            _ => -1,
        },
        ConvexityVerdict::NonConvex(_) => return Err(Error::NotApplicable),
    };
    let sigma = profile.sigma();
    let n = profile.len();
    let mut report = SignLemmaReport {
        expected_sign,
        evaluated: 0,
        violations: 0,
        marginal: 0,
        min_margin: f64::INFINITY,
        first_violation: None,
    };
    for i in 0..n {
        let k = succ(i, n);
        for j in (0..n).filter(|&j| j != i && j != k) {
            let margin = f64::from(expected_sign) * delta_determinant(&sigma, j, i, k).value;
            report.evaluated += 1;
            report.min_margin = report.min_margin.min(margin);
            if margin < -tol.geom {
                report.violations += 1;
                report.first_violation.get_or_insert((j, i));
            } else if margin <= tol.geom {
                report.marginal += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{canonicalize, profile_to_vertices};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn profile(thetas: &[f64]) -> AngleProfile {
        AngleProfile::new(thetas.to_vec(), tol()).unwrap()
    }

    fn raw(points: &[(f64, f64)]) -> Vec<Vertex> {
        points.iter().map(|&(x, y)| Vertex::new(x, y).unwrap()).collect()
    }

    fn square_sigma() -> SigmaSequence {
        SigmaSequence::from_values(vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, TAU], tol()).unwrap()
    }

    #[test]
    fn determinant_examples() {
        let s = square_sigma();
        assert_eq!(delta_determinant(&s, 1, 1, 2).value, 0.0);
        let d = delta_determinant(&s, 0, 1, 2);
        assert_abs_diff_eq!(d.value, 2.0, epsilon = 1e-15);
        assert_eq!(d.indices, (0, 1, 2));
        assert_eq!(delta_determinant(&s, 0, 2, 1).value, -d.value);
    }

    #[test]
    fn product_examples() {
        let s = square_sigma();
        let p = profile(&[FRAC_PI_2; 4]);
        let prod = delta_product(&p, &s, 2, 0);
        assert_abs_diff_eq!(prod.value, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(prod.value, delta_determinant(&s, 2, 0, 1).value, epsilon = 1e-15);
        assert_eq!(delta_product(&p, &s, 0, 0).value, 0.0);
    }

    #[test]
    fn product_sign_follows_edge_direction() {
        // same chord traversed in both directions: V1 at 0.4 -> V2 at 1.3 and back
        let fwd = profile(&[0.4, 0.9, 2.0, TAU - 3.3]);
        let bwd = profile(&[1.3, -0.9, 2.9, TAU - 3.3]);
        let (sf, sb) = (fwd.sigma(), bwd.sigma());
        // vertex at sigma = 3.3 is index 3 in both
        let pf = delta_product(&fwd, &sf, 3, 1).value;
        let pb = delta_product(&bwd, &sb, 3, 1).value;
        assert!(pf * pb < 0.0);
        assert_abs_diff_eq!(pf, -pb, epsilon = 1e-12);
        assert_abs_diff_eq!(pf, delta_determinant(&sf, 3, 1, 2).value, epsilon = 1e-12);
        assert_abs_diff_eq!(pb, delta_determinant(&sb, 3, 1, 2).value, epsilon = 1e-12);
    }

    #[test]
    fn wrapped_product_carries_winding_parity() {
        let p = profile(&[FRAC_PI_2; 4]);
        let s = p.sigma();
        let direct = delta_determinant(&s, 1, 3, 0).value;
        assert_abs_diff_eq!(delta_product(&p, &s, 1, 3).value, direct, epsilon = 1e-14);
        assert_abs_diff_eq!(delta_product_wrapped(&p, &s, 1, 3).value, -direct, epsilon = 1e-14);
    }

    #[test]
    fn same_side_examples() {
        let sq = canonicalize(&raw(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]), tol()).unwrap();
        assert!(same_strict_side(&sq, 1, 2, 0, 3, tol()).unwrap());
        // V1 above and V3 below the diameter V0 V2
        assert!(!same_strict_side(&sq, 1, 3, 0, 2, tol()).unwrap());
        // V2 is on the line through V0 and V2 itself
        assert!(!same_strict_side(&sq, 2, 1, 0, 2, tol()).unwrap());
        assert_eq!(
            same_strict_side(&sq, 1, 2, 3, 3, tol()),
            Err(Error::DegenerateEdge { first: 3, second: 3 })
        );
    }

    #[test]
    fn square_orders() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let convex = canonicalize(&raw(&pts), tol()).unwrap();
        assert!(classify_by_determinants(&convex, tol(), Scan::Full).unwrap().is_convex);
        let crossed = canonicalize(&raw(&[pts[0], pts[2], pts[1], pts[3]]), tol()).unwrap();
        let c = classify_by_determinants(&crossed, tol(), Scan::Full).unwrap();
        assert!(!c.is_convex);
        assert!(c.first_clash().is_some());
        assert_eq!(c.edges.len(), 4);
        let early = classify_by_determinants(&crossed, tol(), Scan::EarlyExit).unwrap();
        assert!(!early.is_convex);
        assert_eq!(early.edges.len(), 1);
    }

    #[test]
    fn every_triangle_is_convex() {
        let tri = profile_to_vertices(&profile(&[2.0, -0.5, -1.5]), tol()).unwrap();
        let c = classify_by_determinants(&tri, tol(), Scan::Full).unwrap();
        assert!(c.is_convex);
        assert!(c.edges.iter().all(|e| e.positive + e.negative == 1));
    }

    #[test]
    fn verdict_is_delegated() {
        let p = profile(&[0.5, 0.5, -1.0]);
        let poly = profile_to_vertices(&p, tol()).unwrap();
        let c = classify_by_determinants(&poly, tol(), Scan::Full).unwrap();
        assert_eq!(c.verdict(&p), Some(classify_by_angles(&p)));
    }

    #[test]
    fn marginal_sign_is_surfaced() {
        let loose = Tolerance::with_geom(1e-12);
        let p = AngleProfile::new(vec![1e-10, 2.0, 2.0, TAU - 4.0 - 1e-10], loose).unwrap();
        let poly = profile_to_vertices(&p, loose).unwrap();
        assert!(matches!(
            classify_by_determinants(&poly, tol(), Scan::Full),
            Err(Error::MarginalSign { .. })
        ));
    }

    #[test]
    fn sign_check_examples() {
        let sq = check_sign_lemma(&profile(&[FRAC_PI_2; 4]), tol()).unwrap();
        assert!(sq.passed());
        assert_eq!(sq.evaluated, 8);
        assert_abs_diff_eq!(sq.min_margin, 2.0, epsilon = 1e-14);

        let rev = check_sign_lemma(&profile(&[-FRAC_PI_2; 4]), tol()).unwrap();
        assert!(rev.passed());
        assert_eq!(rev.expected_sign, -1);

        let tri = check_sign_lemma(&profile(&[0.5, 0.5, -1.0]), tol()).unwrap();
        assert!(tri.passed());
        assert_eq!(tri.expected_sign, 1);
        assert_eq!(tri.evaluated, 3);

        let sliver = check_sign_lemma(&profile(&[1e-5, 1e-5, -2e-5]), tol()).unwrap();
        assert_eq!((sliver.marginal, sliver.violations), (3, 0));
        assert!(sliver.passed());

        assert_eq!(
            check_sign_lemma(&profile(&[-0.4, 0.7, -0.4, 0.1]), tol()),
            Err(Error::NotApplicable)
        );
    }

    #[test]
    fn delta_table_matches_classifier() {
        let poly = profile_to_vertices(&profile(&[FRAC_PI_2; 4]), tol()).unwrap();
        let table = delta_table(&poly);
        assert_eq!(table[0][0], None);
        assert_eq!(table[0][1], None);
        assert_abs_diff_eq!(table[0][2].unwrap(), 2.0, epsilon = 1e-15);
        assert_eq!(table[3][0], None);
    }

    /// Side of the line `p q` from an explicit unit normal.
    fn normal_side(p: Vertex, q: Vertex, r: Vertex) -> f64 {
        let (dx, dy) = (q.x() - p.x(), q.y() - p.y());
        let len = dx.hypot(dy);
        (-dy / len) * (r.x() - p.x()) + (dx / len) * (r.y() - p.y())
    }

    proptest! {
        #[test]
        fn antisymmetry(a in -10.0..10.0f64, b in -10.0..10.0f64, c in -10.0..10.0f64) {
            let (pa, pb, pc) = (Vertex::on_unit_circle(a), Vertex::on_unit_circle(b), Vertex::on_unit_circle(c));
            let d = delta(pa, pb, pc);
            prop_assert!((delta(pb, pa, pc) + d).abs() <= 1e-15);
            prop_assert!((delta(pa, pc, pb) + d).abs() <= 1e-15);
        }

        #[test]
        fn same_side_matches_normal_test(angles in proptest::collection::vec(0.0..TAU, 4)) {
            let pts: Vec<Vertex> = angles.iter().map(|&a| Vertex::on_unit_circle(a)).collect();
            let poly = match canonicalize(&pts, tol()) {
                Ok(p) => p,
                Err(_) => return Ok(()),
            };
            let vs = poly.vertices();
            let sa = normal_side(vs[0], vs[1], vs[2]);
            let sb = normal_side(vs[0], vs[1], vs[3]);
            prop_assume!(sa.abs() > 1e-6 && sb.abs() > 1e-6);
            prop_assert_eq!(same_strict_side(&poly, 2, 3, 0, 1, tol()).unwrap(), sa * sb > 0.0);
        }
    }
}
