//! Timing of the three convexity checks on condition-I instances.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::angles::{classify_by_angles, profile_to_vertices, Tolerance};
use crate::determinants::{classify_by_determinants, Scan};
use crate::error::Result;
use crate::generators::gen_dense_convex;
use crate::oracle::is_convex_by_hull;

/// Batches run at least this long, so short calls are timed in bulk.
const MIN_BATCH: Duration = Duration::from_millis(5);

/// Median time per call over `samples` batches.
pub fn time_per_call<T>(samples: usize, mut f: impl FnMut() -> T) -> Duration {
    let mut iters = 1u32;
    loop {
        let start = Instant::now();
        for _ in 0..iters {
            black_box(f());
        }
        if start.elapsed() >= MIN_BATCH || iters >= 1 << 20 {
            break;
        }
        iters *= 2;
    }
    let mut times: Vec<Duration> = (0..samples.max(1))
        .map(|_| {
            let start = Instant::now();
            for _ in 0..iters {
                black_box(f());
            }
            start.elapsed() / iters
        })
        .collect();
    times.sort();
    times[times.len() / 2]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub angles: Duration,
    /// `None` above the determinant size limit.
    pub determinants: Option<Duration>,
    pub hull: Duration,
}

impl BenchRow {
    /// How many times faster the angle classifier is than the determinant one.
    pub fn speedup(&self) -> Option<f64> {
        self.determinants.map(|d| d.as_secs_f64() / self.angles.as_secs_f64())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub reps: usize,
    pub seed: u64,
    /// Largest `n` for the quadratic determinant classifier.
    pub determinant_limit: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            reps: 5,
            seed: 0,
            determinant_limit: 10_000,
        }
    }
}

pub fn bench_one(n: usize, cfg: &BenchConfig) -> Result<BenchRow> {
    let tol = Tolerance::default();
    let profile = gen_dense_convex(n, cfg.seed)?;
    let poly = profile_to_vertices(&profile, tol)?;
    let angles = time_per_call(cfg.reps, || classify_by_angles(&profile));
    // Dense instances have determinants below the default threshold, which
    // would stop the scan at the first one; a zero threshold times the full
    // evaluation.
    let exact = Tolerance::with_geom(0.0);
    let determinants = (n <= cfg.determinant_limit).then(|| {
        time_per_call(cfg.reps, || {
            classify_by_determinants(&poly, exact, Scan::Full).map(|d| d.is_convex)
        })
    });
    let hull = time_per_call(cfg.reps, || is_convex_by_hull(&poly));
    Ok(BenchRow {
        n,
        angles,
        determinants,
        hull,
    })
}

pub fn bench(ns: &[usize], cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    ns.iter().map(|&n| bench_one(n, cfg)).collect()
}

fn micros(d: Duration) -> f64 {
    d.as_secs_f64() * 1e6
}

pub fn to_table(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:>9} {:>14} {:>16} {:>14} {:>10}\n",
        "n", "angles_us", "determinants_us", "hull_us", "speedup"
    );
    for r in rows {
        let det = r.determinants.map_or("-".to_string(), |d| format!("{:.3}", micros(d)));
        let speedup = r.speedup().map_or("-".to_string(), |x| format!("{x:.0}x"));
        let _ = writeln!(
            s,
            "{:>9} {:>14.3} {:>16} {:>14.3} {:>10}",
            r.n,
            micros(r.angles),
            det,
            micros(r.hull),
            speedup
        );
    }
    s
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("n,angles_us,determinants_us,hull_us\n");
    for r in rows {
        let det = r.determinants.map_or(String::new(), |d| format!("{:.3}", micros(d)));
        let _ = writeln!(s, "{},{:.3},{},{:.3}", r.n, micros(r.angles), det, micros(r.hull));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_a_row_per_size() {
        let cfg = BenchConfig {
            reps: 1,
            determinant_limit: 50,
            ..BenchConfig::default()
        };
        let rows = bench(&[10, 100], &cfg).unwrap();
        assert!(rows[0].determinants.is_some());
        assert!(rows[1].determinants.is_none());
        assert_eq!(to_table(&rows).lines().count(), 3);
        let csv = to_csv(&rows);
        assert!(csv.lines().nth(2).unwrap().starts_with("100,"));
        assert!(csv.lines().nth(2).unwrap().contains(",,"));
    }
}
