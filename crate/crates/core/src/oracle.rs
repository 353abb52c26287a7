//! Ground-truth convexity checks that do not use central angles or the
//! determinant module: a hull-boundary check and an edge half-plane check.

use crate::angles::{CanonicalPolygon, Tolerance, Vertex};
use crate::error::{Error, Result};

/// True iff every pair of vertices is more than `tol.geom` apart.
pub fn is_ordinary(raw: &[Vertex], tol: Tolerance) -> bool {
    raw.iter()
        .enumerate()
        .all(|(i, a)| raw[i + 1..].iter().all(|b| a.distance(*b) > tol.geom))
}

fn turn(o: Vertex, a: Vertex, b: Vertex) -> f64 {
    (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x())
}

/// Indices of the extreme points in counterclockwise order (monotone chain).
///
/// Collinear boundary points are dropped. The hull starts at the
/// lexicographically smallest point.
pub fn convex_hull(points: &[Vertex]) -> Result<Vec<usize>> {
    if points.len() < 3 {
        return Err(Error::TooFewVertices(points.len()));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x().total_cmp(&q.x()).then(p.y().total_cmp(&q.y()))
    });
    order.dedup_by(|a, b| points[*a] == points[*b]);

    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    // lower chain
    for &idx in &order {
        while hull.len() >= 2 && turn(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[idx]) <= 0.0 {
            hull.pop();
        }
        hull.push(idx);
    }
    // upper chain
    let lower_len = hull.len() + 1;
    for &idx in order.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && turn(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[idx]) <= 0.0
        {
            hull.pop();
        }
        hull.push(idx);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::AllCollinear);
    }
    Ok(hull)
}

/// Twice the signed area enclosed by the points in the given order.
pub fn signed_area2(points: &[Vertex], order: &[usize]) -> f64 {
    let n = order.len();
    (0..n)
        .map(|k| {
            let (a, b) = (points[order[k]], points[order[(k + 1) % n]]);
            a.x() * b.y() - a.y() * b.x()
        })
        .sum()
}

/// Convexity as "the edges are exactly the hull boundary".
///
/// Every vertex of an ordinary cyclic polygon is extreme, so the edges
/// cover the hull boundary exactly when the vertex sequence is a cyclic
/// rotation of the hull order or of its reverse.
pub fn is_convex_by_hull(poly: &CanonicalPolygon) -> bool {
    let n = poly.len();
    let hull = match convex_hull(poly.vertices()) {
        Ok(h) if h.len() == n => h,
        _ => return false,
    };
    let Some(start) = hull.iter().position(|&h| h == 0) else {
        return false;
    };
    let forward = (0..n).all(|k| hull[(start + k) % n] == k);
    let backward = (0..n).all(|k| hull[(start + n - k) % n] == k);
    forward || backward
}

/// Convexity as "strictly to one side of every edge", from edge normals.
pub fn is_convex_by_halfplanes(poly: &CanonicalPolygon, tol: Tolerance) -> Result<bool> {
    let vs = poly.vertices();
    let n = vs.len();
    let mut convex = true;
    for edge in 0..n {
        let next = (edge + 1) % n;
        let (a, b) = (vs[edge], vs[next]);
        let (dx, dy) = (b.x() - a.x(), b.y() - a.y());
        let len = dx.hypot(dy);
        if len <= tol.geom {
            return Err(Error::DegenerateEdge {
                first: edge,
                second: next,
            });
        }
        let normal = (-dy / len, dx / len);
        let mut side = 0.0f64;
        for (vertex, v) in vs.iter().enumerate() {
            if vertex == edge || vertex == next {
                continue;
            }
            let offset = normal.0 * (v.x() - a.x()) + normal.1 * (v.y() - a.y());
            if offset.abs() <= tol.geom {
                return Err(Error::MarginalOffset { edge, vertex, offset });
            }
            if side == 0.0 {
                side = offset.signum();
            } else if side != offset.signum() {
                convex = false;
            }
        }
    }
    Ok(convex)
}
