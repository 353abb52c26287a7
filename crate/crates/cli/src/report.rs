//! Plain-text and machine-readable renderings of command results.

use std::fmt::Write as _;

use serde_json::json;

use cyclogon::bench::BenchRow;
use cyclogon::determinants::{classify_by_determinants, delta_table, Scan};
use cyclogon::fuzz::FuzzSummary;
use cyclogon::patterns::{certify_non_convexity, Certificate, ReductionRoute, WitnessVariant};
use cyclogon::{Analysis, Condition, Tolerance};

/// `convex (III), w=0, negative index 2`
pub fn headline(a: &Analysis) -> String {
    let mut s = format!("{}, w={}", a.verdict, a.profile.winding());
    match a.verdict.condition() {
        Some(Condition::OneNegative { index }) => {
            let _ = write!(s, ", negative index {index}");
        }
        Some(Condition::OnePositive { index }) => {
            let _ = write!(s, ", positive index {index}");
        }
        _ => {}
    }
    s
}

fn number_list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn classification(a: &Analysis, tol: Tolerance, explain: bool) -> String {
    let mut s = format!("{}\nthetas: {}\n", headline(a), number_list(a.profile.thetas()));
    if !explain {
        return s;
    }
    if a.verdict.is_convex() {
        s.push_str(&sign_table(a, tol));
    } else {
        match certify_non_convexity(&a.profile, tol) {
            Ok(c) => s.push_str(&certificate(&c)),
            Err(e) => {
                let _ = writeln!(s, "no certificate: {e}");
            }
        }
    }
    s
}

/// One row per edge `i -> i+1`, one column per vertex: `+`, `-`, `0` for
/// a determinant within tolerance, `.` for the edge's own endpoints.
fn sign_table(a: &Analysis, tol: Tolerance) -> String {
    let n = a.polygon.len();
    let width = (n - 1).to_string().len();
    let mut s = String::from("determinant signs D(j, i, i+1), rows i, columns j:\n");
    for (i, row) in delta_table(&a.polygon).iter().enumerate() {
        let cells: String = row
            .iter()
            .map(|d| match d {
                None => '.',
                Some(v) if *v > tol.geom => '+',
                Some(v) if *v < -tol.geom => '-',
                Some(_) => '0',
            })
            .collect();
        let _ = writeln!(s, "  {i:>width$} -> {:>width$}  {cells}", (i + 1) % n);
    }
    match classify_by_determinants(&a.polygon, tol, Scan::Full) {
        Ok(d) => {
            let _ = writeln!(s, "every edge uniform: {}, min |D| = {:e}", d.is_convex, d.min_margin);
        }
        Err(e) => {
            let _ = writeln!(s, "determinant verdict unavailable: {e}");
        }
    }
    s
}

pub fn certificate(c: &Certificate) -> String {
    let r = &c.reduction;
    let w = &c.witness;
    let route = match r.route {
        ReductionRoute::CaseAnalysis => "case analysis",
        ReductionRoute::ExhaustiveSearch => "exhaustive search",
    };
    let variant = match w.variant {
        WitnessVariant::Forward => "or1",
        WitnessVariant::Backward => "or2",
    };
    let (oi, oj, ok) = c.original_indices();
    let mut s = String::new();
    let _ = writeln!(s, "reduction: shift {}, reversed {} ({route})", r.shift, r.reversed);
    let _ = writeln!(s, "relabelled thetas: {}", number_list(&c.thetas));
    let _ = writeln!(s, "pattern: {}", r.pattern);
    let _ = writeln!(
        s,
        "witness ({variant}): edge {} -> {}, j = {} (p = {}), k = {} (q = {})",
        w.i,
        (w.i + 1) % c.thetas.len(),
        w.j,
        w.p,
        w.k,
        w.q
    );
    let _ = writeln!(s, "in original labels: edge {oi}, vertices {oj} and {ok}");
    let (dj, dk) = (c.delta_j, c.delta_k);
    let _ = writeln!(
        s,
        "D({}, {}, {}) = {:e}",
        dj.indices.0, dj.indices.1, dj.indices.2, dj.value
    );
    let _ = writeln!(
        s,
        "D({}, {}, {}) = {:e}",
        dk.indices.0, dk.indices.1, dk.indices.2, dk.value
    );
    let _ = writeln!(
        s,
        "product = {:e} ({})",
        c.product,
        if c.negative { "negative" } else { "NOT negative" }
    );
    s
}

pub fn fuzz_json(s: &FuzzSummary) -> String {
    let mut v = serde_json::to_value(s).expect("summary serialises");
    v["elapsed_seconds"] = json!(s.elapsed.as_secs_f64());
    serde_json::to_string_pretty(&v).expect("value serialises")
}

pub fn fuzz_csv(s: &FuzzSummary) -> String {
    let mut head = String::from("instances,agreed_convex,agreed_non_convex,marginal,disagreements,problems");
    let mut row = format!(
        "{},{},{},{},{},{}",
        s.instances,
        s.agreed_convex,
        s.agreed_non_convex,
        s.marginal,
        s.disagreements,
        s.problems.len()
    );
    for (label, count) in &s.coverage {
        let _ = write!(head, ",{label}");
        let _ = write!(row, ",{count}");
    }
    format!("{head}\n{row}\n")
}

pub fn bench_json(rows: &[BenchRow]) -> String {
    let us = |d: std::time::Duration| d.as_secs_f64() * 1e6;
    let rows: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "angles_us": us(r.angles),
                "determinants_us": r.determinants.map(us),
                "hull_us": us(r.hull),
            })
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("rows serialise")
}
