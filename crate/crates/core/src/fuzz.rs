//! Differential fuzzing: every generated instance goes through the raw
//! coordinate pipeline and is judged by the angle classifier, the
//! determinant classifier and both hull oracles. Non-convex instances also
//! run the reduction, witness and negativity chain; convex ones run the
//! determinant sign check.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use crate::angles::{analyze_vertices, Analysis, Tolerance, Vertex};
use crate::determinants::{check_sign_lemma, classify_by_determinants, Scan};
use crate::error::{Error, Result};
use crate::generators::{gen_vertices_on_circle, generate, random_placement, rng_for, Target};
use crate::io::json_vertex_list;
use crate::oracle::{is_convex_by_halfplanes, is_convex_by_hull};
use crate::patterns::certify_non_convexity;

/// Every label a clean run should hit at least once.
pub const COVERAGE_LABELS: [&str; 12] = ["I", "II", "III", "IV", "A1", "A2", "A3", "A4", "A5", "P1", "P2", "P3"];

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    pub threads: usize,
    pub tol: Tolerance,
    /// Delete vertices from disagreeing instances while they still disagree.
    pub shrink: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            count: 10_000,
            n_min: 3,
            n_max: 12,
            seed: 0,
            threads: 1,
            tol: Tolerance::default(),
            shrink: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub angles: bool,
    pub determinants: bool,
    pub hull: bool,
    pub halfplanes: bool,
}

impl Verdicts {
    pub fn agree(&self) -> bool {
        let a = self.angles;
        a == self.determinants && a == self.hull && a == self.halfplanes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Judgement {
    Agreed(Verdicts),
    Disagreed(Verdicts),
    /// A decisive quantity fell within tolerance of zero.
    Marginal(Error),
    /// The pipeline rejected the instance outright.
    Rejected(Error),
}

/// Run the four convexity checks on raw coordinates.
pub fn judge(raw: &[Vertex], tol: Tolerance) -> (Option<Analysis>, Judgement) {
    let analysis = match analyze_vertices(raw, tol) {
        Ok(a) => a,
        Err(e) => return (None, Judgement::Rejected(e)),
    };
    let poly = &analysis.polygon;
    let determinants = match classify_by_determinants(poly, tol, Scan::Full) {
        Ok(d) => d.is_convex,
        Err(e @ Error::MarginalSign { .. }) => return (Some(analysis), Judgement::Marginal(e)),
        Err(e) => return (Some(analysis), Judgement::Rejected(e)),
    };
    let halfplanes = match is_convex_by_halfplanes(poly, tol) {
        Ok(h) => h,
        Err(e @ Error::MarginalOffset { .. }) => return (Some(analysis), Judgement::Marginal(e)),
        Err(e) => return (Some(analysis), Judgement::Rejected(e)),
    };
    let verdicts = Verdicts {
        angles: analysis.verdict.is_convex(),
        determinants,
        hull: is_convex_by_hull(poly),
        halfplanes,
    };
    let judgement = if verdicts.agree() {
        Judgement::Agreed(verdicts)
    } else {
        Judgement::Disagreed(verdicts)
    };
    (Some(analysis), judgement)
}

/// Greedily drop vertices while `still_failing` holds, down to a triangle.
pub fn shrink(raw: &[Vertex], mut still_failing: impl FnMut(&[Vertex]) -> bool) -> Vec<Vertex> {
    let mut current = raw.to_vec();
    'outer: while current.len() > 3 {
        for skip in 0..current.len() {
            let candidate: Vec<Vertex> = current
                .iter()
                .enumerate()
                .filter_map(|(i, v)| (i != skip).then_some(*v))
                .collect();
            if still_failing(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        break;
    }
    current
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    /// The four convexity checks disagree.
    Disagreement,
    /// The recovered label differs from the generated one.
    LabelMismatch,
    /// The pipeline rejected a generated instance.
    Rejected,
    /// Reduction, witness or negativity failed on a non-convex instance.
    ChainFailure,
    /// A determinant has the wrong sign on a convex instance.
    SignViolation,
    /// The generator gave up.
    GenerationFailure,
}

/// A failing instance, serialisable as a reproduction file that
/// `classify` accepts directly.
#[derive(Debug, Clone, Serialize)]
pub struct Problem {
    pub kind: ProblemKind,
    pub index: usize,
    pub seed: u64,
    pub target: &'static str,
    pub detail: String,
    pub vertices: Vec<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shrunk_vertices: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub instances: usize,
    pub agreed_convex: usize,
    pub agreed_non_convex: usize,
    pub marginal: usize,
    pub disagreements: usize,
    pub certificates: usize,
    pub sign_checks: usize,
    /// Smallest determinant margin seen by the sign check.
    pub min_sign_margin: f64,
    pub coverage: BTreeMap<&'static str, usize>,
    pub problems: Vec<Problem>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Default for FuzzSummary {
    fn default() -> Self {
        FuzzSummary {
            instances: 0,
            agreed_convex: 0,
            agreed_non_convex: 0,
            marginal: 0,
            disagreements: 0,
            certificates: 0,
            sign_checks: 0,
            min_sign_margin: f64::INFINITY,
            coverage: COVERAGE_LABELS.iter().map(|&l| (l, 0)).collect(),
            problems: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }
}

impl FuzzSummary {
    fn merge(&mut self, other: FuzzSummary) {
        self.instances += other.instances;
        self.agreed_convex += other.agreed_convex;
        self.agreed_non_convex += other.agreed_non_convex;
        self.marginal += other.marginal;
        self.disagreements += other.disagreements;
        self.certificates += other.certificates;
        self.sign_checks += other.sign_checks;
        self.min_sign_margin = self.min_sign_margin.min(other.min_sign_margin);
        for (label, count) in other.coverage {
            *self.coverage.entry(label).or_default() += count;
        }
        self.problems.extend(other.problems);
    }

    pub fn non_marginal(&self) -> usize {
        self.instances - self.marginal
    }

    pub fn missing_coverage(&self) -> Vec<&'static str> {
        self.coverage.iter().filter(|(_, &c)| c == 0).map(|(&l, _)| l).collect()
    }

    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn report(&self) -> String {
        let mut lines = vec![
            format!("instances        {}", self.instances),
            format!(
                "agreed           {} ({} convex, {} non-convex)",
                self.agreed_convex + self.agreed_non_convex,
                self.agreed_convex,
                self.agreed_non_convex
            ),
            format!("marginal         {}", self.marginal),
            format!("disagreements    {}", self.disagreements),
            format!("certificates     {}", self.certificates),
            format!(
                "sign checks      {} (min margin {:.3e})",
                self.sign_checks, self.min_sign_margin
            ),
        ];
        let coverage: Vec<String> = self.coverage.iter().map(|(l, c)| format!("{l}={c}")).collect();
        lines.push(format!("coverage         {}", coverage.join(" ")));
        lines.push(format!("problems         {}", self.problems.len()));
        lines.push(format!("elapsed          {:.2?}", self.elapsed));
        lines.join("\n")
    }
}

fn instance_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

/// Round-robin over the targets; falls back to a convex target when the
/// vertex range is too small for the scheduled one.
fn schedule(index: usize, cfg: &FuzzConfig) -> Target {
    let target = Target::ALL[index % Target::ALL.len()];
    if target.min_vertices() <= cfg.n_max {
        target
    } else {
        Target::CONVEX[index % Target::CONVEX.len()]
    }
}

fn run_instance(index: usize, cfg: &FuzzConfig, out: &mut FuzzSummary) {
    let tol = cfg.tol;
    let seed = instance_seed(cfg.seed, index);
    let target = schedule(index, cfg);
    let mut rng = rng_for(seed ^ 0x5851_f42d_4c95_7f2d);
    let n = rng.random_range(cfg.n_min.max(target.min_vertices())..=cfg.n_max);
    out.instances += 1;

    let problem = |kind, detail: String, vertices: Vec<Vertex>| Problem {
        kind,
        index,
        seed,
        target: target.label(),
        detail,
        vertices,
        shrunk_vertices: None,
    };

    let profile = match generate(target, n, seed) {
        Ok(p) => p,
        Err(e) => {
            out.problems
                .push(problem(ProblemKind::GenerationFailure, e.to_string(), Vec::new()));
            return;
        }
    };
    let (circle, rotation) = random_placement(&mut rng);
    let raw = gen_vertices_on_circle(&profile, circle, rotation);

    let (analysis, judgement) = judge(&raw, tol);
    let verdicts = match judgement {
        Judgement::Agreed(v) => v,
        Judgement::Marginal(_) => {
            out.marginal += 1;
            return;
        }
        Judgement::Rejected(e) => {
            out.problems.push(problem(ProblemKind::Rejected, e.to_string(), raw));
            return;
        }
        Judgement::Disagreed(v) => {
            out.disagreements += 1;
            let mut p = problem(ProblemKind::Disagreement, format!("{v:?}"), raw.clone());
            if cfg.shrink {
                let shrunk = shrink(&raw, |c| matches!(judge(c, tol).1, Judgement::Disagreed(_)));
                p.shrunk_vertices = Some(shrunk);
            }
            out.problems.push(p);
            return;
        }
    };
    let analysis = analysis.expect("agreed instances carry an analysis");
    let verdict = analysis.verdict;
    *out.coverage.entry(verdict.label()).or_default() += 1;
    if verdicts.angles {
        out.agreed_convex += 1;
    } else {
        out.agreed_non_convex += 1;
    }
    if !target.matches(&verdict) {
        let detail = format!("generated {}, recovered {}", target.label(), verdict.label());
        out.problems.push(problem(ProblemKind::LabelMismatch, detail, raw));
        return;
    }

    if verdict.is_convex() {
        match check_sign_lemma(&analysis.profile, tol) {
            Ok(report) if report.passed() => {
                out.sign_checks += 1;
                out.min_sign_margin = out.min_sign_margin.min(report.min_margin);
            }
            Ok(report) => {
                let detail = format!("{} violations, first {:?}", report.violations, report.first_violation);
                out.problems.push(problem(ProblemKind::SignViolation, detail, raw));
            }
            Err(e) => out
                .problems
                .push(problem(ProblemKind::SignViolation, e.to_string(), raw)),
        }
    } else {
        match certify_non_convexity(&analysis.profile, tol) {
            Ok(cert) if cert.negative => {
                out.certificates += 1;
                *out.coverage.entry(cert.reduction.pattern.label()).or_default() += 1;
            }
            Ok(cert) => {
                let detail = format!("witness product {:e} is not negative", cert.product);
                out.problems.push(problem(ProblemKind::ChainFailure, detail, raw));
            }
            Err(e) => out
                .problems
                .push(problem(ProblemKind::ChainFailure, e.to_string(), raw)),
        }
    }
}

/// Run `cfg.count` instances, split into contiguous seed ranges across
/// `cfg.threads` workers. The summary does not depend on the thread count.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    if cfg.n_min < 3 {
        return Err(Error::TooFewVertices(cfg.n_min));
    }
    if cfg.n_max < cfg.n_min {
        return Err(Error::Parse(format!(
            "empty vertex range {}..={}",
            cfg.n_min, cfg.n_max
        )));
    }
    let start = Instant::now();
    let threads = cfg.threads.clamp(1, cfg.count.max(1));
    let chunk = cfg.count.div_ceil(threads);
    let parts: Vec<FuzzSummary> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let range = (t * chunk)..((t + 1) * chunk).min(cfg.count);
                scope.spawn(move || {
                    let mut part = FuzzSummary::default();
                    for index in range {
                        run_instance(index, cfg, &mut part);
                    }
                    part
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fuzz worker panicked"))
            .collect()
    });
    let mut summary = FuzzSummary::default();
    for part in parts {
        summary.merge(part);
    }
    summary.elapsed = start.elapsed();
    Ok(summary)
}

/// The problem as a JSON object whose `vertices` key `classify` reads;
/// coordinates keep 17 significant digits.
fn reproduction_json(p: &Problem, kind: &str) -> String {
    let text = |s: &str| serde_json::Value::from(s).to_string();
    let mut out = format!(
        "{{\n  \"kind\": {},\n  \"index\": {},\n  \"seed\": {},\n  \"target\": {},\n  \"detail\": {},\n  \"vertices\": {}",
        text(kind),
        p.index,
        p.seed,
        text(p.target),
        text(&p.detail),
        json_vertex_list(&p.vertices, "  ")
    );
    if let Some(shrunk) = &p.shrunk_vertices {
        out.push_str(&format!(",\n  \"shrunk_vertices\": {}", json_vertex_list(shrunk, "  ")));
    }
    out.push_str("\n}\n");
    out
}

/// Write one JSON reproduction file per problem into `dir`.
pub fn write_reproductions(summary: &FuzzSummary, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    if summary.problems.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(dir)?;
    summary
        .problems
        .iter()
        .map(|p| {
            let kind = serde_json::to_value(p.kind).map_err(std::io::Error::other)?;
            let kind = kind.as_str().unwrap_or("problem");
            let path = dir.join(format!("{kind}-{}.json", p.seed));
            std::fs::write(&path, reproduction_json(p, kind))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_covers_every_label() {
        let cfg = FuzzConfig {
            count: 900,
            ..FuzzConfig::default()
        };
        let s = run_fuzz(&cfg).unwrap();
        assert!(s.is_clean(), "{:?}", s.problems.first());
        assert_eq!(s.instances, 900);
        assert_eq!(s.missing_coverage(), Vec::<&str>::new());
    }

    #[test]
    fn thread_count_does_not_change_the_summary() {
        let one = run_fuzz(&FuzzConfig {
            count: 200,
            seed: 7,
            ..FuzzConfig::default()
        })
        .unwrap();
        let four = run_fuzz(&FuzzConfig {
            count: 200,
            seed: 7,
            threads: 4,
            ..FuzzConfig::default()
        })
        .unwrap();
        assert_eq!(one.coverage, four.coverage);
        assert_eq!(one.agreed_convex, four.agreed_convex);
        assert_eq!(one.marginal, four.marginal);
    }

    #[test]
    fn triangles_only_falls_back_to_convex_targets() {
        let s = run_fuzz(&FuzzConfig {
            count: 40,
            n_min: 3,
            n_max: 3,
            ..FuzzConfig::default()
        })
        .unwrap();
        assert!(s.is_clean());
        assert_eq!(s.agreed_non_convex, 0);
    }

    #[test]
    fn bad_ranges_are_rejected() {
        assert!(run_fuzz(&FuzzConfig {
            n_min: 2,
            ..FuzzConfig::default()
        })
        .is_err());
        assert!(run_fuzz(&FuzzConfig {
            n_min: 6,
            n_max: 5,
            ..FuzzConfig::default()
        })
        .is_err());
    }

    #[test]
    fn reproduction_files_parse_back() {
        let raw: Vec<Vertex> = (0..4).map(|k| Vertex::on_unit_circle(0.1 + f64::from(k))).collect();
        let p = Problem {
            kind: ProblemKind::Disagreement,
            index: 3,
            seed: 42,
            target: "A5",
            detail: "quote \" here".into(),
            vertices: raw.clone(),
            shrunk_vertices: Some(raw[..3].to_vec()),
        };
        let summary = FuzzSummary {
            problems: vec![p],
            ..FuzzSummary::default()
        };
        let dir = std::env::temp_dir().join(format!("cyclogon-repro-{}", std::process::id()));
        let paths = write_reproductions(&summary, &dir).unwrap();
        assert_eq!(paths.len(), 1);
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let back = crate::io::parse_json(&text).unwrap();
        assert_eq!(back, crate::io::PolygonInput::Vertices(raw));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn shrink_keeps_the_failure() {
        let raw: Vec<Vertex> = (0..8).map(|k| Vertex::on_unit_circle(f64::from(k))).collect();
        // "fails" while vertex 5 is present
        let target = raw[5];
        let out = shrink(&raw, |c| c.contains(&target));
        assert_eq!(out.len(), 3);
        assert!(out.contains(&target));
    }
}
