//! Non-convexity certificates.
//!
//! A profile failing every convexity condition can be shifted and possibly
//! re-oriented until one of three forbidden sign patterns appears at its
//! start. From there an interval witness `(i, j, k, p, q)` places two lifted
//! vertex angles on opposite arcs of edge `i`, which forces
//! `delta(j, i, i+1) * delta(k, i, i+1) < 0`: the polygon is not to one side
//! of that edge.

use std::f64::consts::TAU;
use std::fmt;

use serde::Serialize;

use crate::angles::{classify_by_angles, Alternative, AngleProfile, ConvexityVerdict, SigmaSequence, Tolerance};
use crate::determinants::{delta_determinant, succ, DeltaValue};
use crate::error::{Error, Result};

/// Forbidden sign patterns at the start of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pattern {
    /// `theta[0..=m]` all positive with sum above `2 pi`.
    LongPositiveRun { m: usize },
    /// `theta[0] < 0`, `theta[1..=m] > 0`, `theta[m + 1] < 0`, `2 <= m <= n - 2`.
    EnclosedPositiveRun { m: usize },
    /// Signs `-, +, -, +` in the first four angles.
    Alternating,
}

impl Pattern {
    pub fn label(&self) -> &'static str {
        match self {
            Pattern::LongPositiveRun { .. } => "P1",
            Pattern::EnclosedPositiveRun { .. } => "P2",
            Pattern::Alternating => "P3",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::LongPositiveRun { m } | Pattern::EnclosedPositiveRun { m } => {
                write!(f, "{} (m = {m})", self.label())
            }
            Pattern::Alternating => f.write_str(self.label()),
        }
    }
}

/// First pattern matching at offset 0: P1 with the smallest `m`, then P2, then P3.
pub fn detect_pattern(thetas: &[f64], tol: Tolerance) -> Option<Pattern> {
    let n = thetas.len();
    let mut acc = 0.0;
    for (m, &t) in thetas.iter().enumerate() {
        if t <= 0.0 {
            break;
        }
        acc += t;
        if acc > TAU + tol.geom {
            return Some(Pattern::LongPositiveRun { m });
        }
    }

    if n >= 4 && thetas[0] < 0.0 {
        let run = thetas[1..].iter().take_while(|&&t| t > 0.0).count();
        if run >= 2 && run + 1 < n && thetas[run + 1] < 0.0 {
            return Some(Pattern::EnclosedPositiveRun { m: run });
        }
        if thetas[1] > 0.0 && thetas[2] < 0.0 && thetas[3] > 0.0 {
            return Some(Pattern::Alternating);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReductionRoute {
    /// Found by following the alternative-by-alternative case analysis.
    CaseAnalysis,
    /// Found by trying every shift and orientation.
    ExhaustiveSearch,
}

/// A relabelling of the polygon under which a forbidden pattern appears.
///
/// The relabelled polygon is obtained by first reversing the vertex order
/// (when `reversed`) and then starting at vertex `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub shift: usize,
    pub reversed: bool,
    pub pattern: Pattern,
    pub route: ReductionRoute,
}

impl Reduction {
    pub fn apply(&self, profile: &AngleProfile) -> AngleProfile {
        transform(profile, self.shift, self.reversed)
    }

    /// Index in the original polygon of vertex `k` of the relabelled one.
    pub fn original_index(&self, k: usize, n: usize) -> usize {
        let shifted = (k + self.shift) % n;
        if self.reversed {
            n - 1 - shifted
        } else {
            shifted
        }
    }
}

fn transform(profile: &AngleProfile, shift: usize, reversed: bool) -> AngleProfile {
    if reversed {
        profile.reversed().shifted(shift)
    } else {
        profile.shifted(shift)
    }
}

/// Tries every shift and orientation, unreversed shifts first.
pub fn search_reduction(profile: &AngleProfile, tol: Tolerance) -> Option<Reduction> {
    let n = profile.len();
    [false, true].into_iter().find_map(|reversed| {
        let base = if reversed { profile.reversed() } else { profile.clone() };
        (0..n).find_map(|shift| {
            detect_pattern(base.shifted(shift).thetas(), tol).map(|pattern| Reduction {
                shift,
                reversed,
                pattern,
                route: ReductionRoute::ExhaustiveSearch,
            })
        })
    })
}

/// Relabels a non-convex profile so that a forbidden pattern starts at 0.
pub fn find_pattern_reduction(profile: &AngleProfile, tol: Tolerance) -> Result<Reduction> {
    let alternative = match classify_by_angles(profile) {
        ConvexityVerdict::NonConvex(a) => a,
        ConvexityVerdict::Convex(_) => return Err(Error::NotApplicable),
    };
    let candidate = match alternative {
        Alternative::AllPositiveWinding => Some((0, false)),
        Alternative::AllNegativeWinding => Some((0, true)),
        Alternative::OneNegativeWinding => after_lone_negative(profile).map(|s| (s, false)),
        Alternative::OnePositiveWinding => after_lone_negative(&profile.reversed()).map(|s| (s, true)),
        Alternative::MixedSigns => mixed_sign_shift(profile)
            .map(|s| (s, false))
            .or_else(|| mixed_sign_shift(&profile.reversed()).map(|s| (s, true))),
    };
    let by_cases = candidate.and_then(|(shift, reversed)| {
        detect_pattern(transform(profile, shift, reversed).thetas(), tol).map(|pattern| Reduction {
            shift,
            reversed,
            pattern,
            route: ReductionRoute::CaseAnalysis,
        })
    });
    by_cases
        .or_else(|| search_reduction(profile, tol))
        .ok_or(Error::NoReduction)
}

/// Shift that moves the only negative angle to the last position.
fn after_lone_negative(profile: &AngleProfile) -> Option<usize> {
    let mut negatives = profile.thetas().iter().enumerate().filter(|(_, &t)| t < 0.0);
    match (negatives.next(), negatives.next()) {
        (Some((k, _)), None) => Some((k + 1) % profile.len()),
        _ => None,
    }
}

/// Maximal runs of equal sign, taken cyclically, as `(start, length, positive)`.
fn cyclic_runs(thetas: &[f64]) -> Vec<(usize, usize, bool)> {
    let n = thetas.len();
    let positive = |i: usize| thetas[i % n] > 0.0;
    let Some(start) = (0..n).find(|&i| positive(i) != positive(i + n - 1)) else {
        return vec![(0, n, positive(0))];
    };
    let mut runs = Vec::new();
    let mut i = start;
    while i < start + n {
        let sign = positive(i);
        let len = (i..start + n).take_while(|&k| positive(k) == sign).count();
        runs.push((i % n, len, sign));
        i += len;
    }
    runs
}

/// Shift for a mixed-sign profile: just before a positive run of length at
/// least 2 (giving P2), or at a negative angle when all signs alternate
/// (giving P3).
fn mixed_sign_shift(profile: &AngleProfile) -> Option<usize> {
    let n = profile.len();
    let runs = cyclic_runs(profile.thetas());
    if runs.len() < 2 {
        return None;
    }
    if runs.iter().all(|&(_, len, _)| len == 1) {
        return runs.iter().find(|r| !r.2).map(|r| r.0);
    }
    runs.iter()
        .find(|&&(_, len, positive)| positive && len >= 2)
        .map(|&(start, _, _)| (start + n - 1) % n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessVariant {
    /// `sigma_j + 2 pi p` in `(sigma_i, sigma_{i+1})` and
    /// `sigma_k + 2 pi q` in `(sigma_{i+1}, sigma_i + 2 pi)`.
    Forward,
    /// `sigma_j + 2 pi p` in `(sigma_{i+1}, sigma_i)` and
    /// `sigma_k + 2 pi q` in `(sigma_i, sigma_{i+1} + 2 pi)`.
    Backward,
}

/// Interval witness: vertices `j` and `k` sit on opposite arcs of edge `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub p: i32,
    pub q: i32,
    pub variant: WitnessVariant,
}

impl Witness {
    /// Smallest distance of the two shifted angles to the ends of their
    /// intervals; negative when a membership fails.
    pub fn margin(&self, sigma: &SigmaSequence) -> f64 {
        let (lo, hi) = (sigma.get(self.i), sigma.get(self.i + 1));
        let sj = sigma.get(self.j) + TAU * f64::from(self.p);
        let sk = sigma.get(self.k) + TAU * f64::from(self.q);
        match self.variant {
            WitnessVariant::Forward => inside(sj, lo, hi).min(inside(sk, hi, lo + TAU)),
            WitnessVariant::Backward => inside(sj, hi, lo).min(inside(sk, lo, hi + TAU)),
        }
    }

    pub fn holds(&self, sigma: &SigmaSequence, tol: Tolerance) -> bool {
        self.margin(sigma) > tol.geom
    }
}

fn inside(x: f64, lo: f64, hi: f64) -> f64 {
    (x - lo).min(hi - x)
}

const SHIFTS: std::ops::RangeInclusive<i32> = -2..=2;

/// Brute-force search over `i, j, k` and shifts `p, q` in `-2..=2`,
/// returning the witness with the largest membership margin.
pub fn find_interval_witness(sigma: &SigmaSequence, tol: Tolerance) -> Result<Witness> {
    let n = sigma.n();
    let vals = sigma.values();
    let best_in = |lo: f64, hi: f64| {
        (0..n)
            .flat_map(|idx| SHIFTS.map(move |s| (idx, s)))
            .map(|(idx, s)| (idx, s, inside(vals[idx] + TAU * f64::from(s), lo, hi)))
            .fold((0, 0, f64::NEG_INFINITY), |a, b| if b.2 > a.2 { b } else { a })
    };
    let mut best: Option<(Witness, f64)> = None;
    for i in 0..n {
        let (lo, hi) = (vals[i], vals[i + 1]);
        for variant in [WitnessVariant::Forward, WitnessVariant::Backward] {
            let ((j, p, mj), (k, q, mk)) = match variant {
                WitnessVariant::Forward => (best_in(lo, hi), best_in(hi, lo + TAU)),
                WitnessVariant::Backward => (best_in(hi, lo), best_in(lo, hi + TAU)),
            };
            let margin = mj.min(mk);
            if best.as_ref().is_none_or(|b| margin > b.1) {
                best = Some((Witness { i, j, k, p, q, variant }, margin));
            }
        }
    }
    match best {
        Some((w, margin)) if margin > tol.geom => Ok(w),
        _ => Err(Error::NoWitness),
    }
}

/// `delta(j, i, i (+) 1)` and `delta(k, i, i (+) 1)` for a witness.
pub fn witness_deltas(sigma: &SigmaSequence, witness: &Witness) -> (DeltaValue, DeltaValue) {
    let next = succ(witness.i, sigma.n());
    (
        delta_determinant(sigma, witness.j, witness.i, next),
        delta_determinant(sigma, witness.k, witness.i, next),
    )
}

/// True when the witness's two determinants have a strictly negative product.
pub fn verify_witness_negativity(sigma: &SigmaSequence, witness: &Witness, tol: Tolerance) -> bool {
    let (dj, dk) = witness_deltas(sigma, witness);
    dj.value * dk.value < -(tol.geom * tol.geom)
}

/// Complete non-convexity certificate for a profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub reduction: Reduction,
    /// Central angles of the relabelled polygon.
    pub thetas: Vec<f64>,
    pub witness: Witness,
    pub delta_j: DeltaValue,
    pub delta_k: DeltaValue,
    pub product: f64,
    pub negative: bool,
}

impl Certificate {
    /// The witness edge and the two opposite vertices, in original indices.
    pub fn original_indices(&self) -> (usize, usize, usize) {
        let n = self.thetas.len();
        let map = |k| self.reduction.original_index(k, n);
        (map(self.witness.i), map(self.witness.j), map(self.witness.k))
    }
}

/// Reduction, witness search and negativity check in sequence.
pub fn certify_non_convexity(profile: &AngleProfile, tol: Tolerance) -> Result<Certificate> {
    let reduction = find_pattern_reduction(profile, tol)?;
    let relabelled = reduction.apply(profile);
    let sigma = relabelled.sigma();
    let witness = find_interval_witness(&sigma, tol)?;
    let (delta_j, delta_k) = witness_deltas(&sigma, &witness);
    Ok(Certificate {
        reduction,
        thetas: relabelled.thetas().to_vec(),
        witness,
        delta_j,
        delta_k,
        product: delta_j.value * delta_k.value,
        negative: verify_witness_negativity(&sigma, &witness, tol),
    })
}
