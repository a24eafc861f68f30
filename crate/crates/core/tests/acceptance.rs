//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! The 256 -> 512 degradation pair of criterion 5 needs a level-10 solve and only
//! runs with `IFEM_LONG_RUN=1`.

use std::process::ExitCode;
use std::time::Instant;

use ifem_core::assembly::{apply_dirichlet, assemble, boundary_values, SchemeParams};
use ifem_core::basis::{build_bases, immersed_p1, vertex_sides, LocalBasis};
use ifem_core::cases::{builtin_case_with, straight_line};
use ifem_core::interface::cut_from_parameters;
use ifem_core::mesh::signed_area;
use ifem_core::norms::{compute_eoc, ConvergenceReport, Norm};
use ifem_core::quadrature::{cut_rule, segment_rule, split_segment_rule, triangle_rule};
use ifem_core::study::{run_convergence, run_level, solve_level, ConvergenceOutcome, RunConfig};
use ifem_core::{CutMesh, Method, Point, Rect, Scheme, Side, SolverOptions, StructuredMesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn sweep(config: RunConfig) -> ConvergenceOutcome {
    let out = run_convergence(&config).expect("valid configuration");
    for f in &out.failures {
        println!("    level {} failed: {}", f.n, f.message);
    }
    out
}

fn config(case: &str, beta: Option<(f64, f64)>, scheme: Scheme, levels: (u32, u32)) -> RunConfig {
    RunConfig {
        case: case.into(),
        scheme,
        beta_minus: beta.map(|b| b.0),
        beta_plus: beta.map(|b| b.1),
        n_min: levels.0,
        n_max: levels.1,
        ..Default::default()
    }
}

/// Checks that every EOC at the listed rows lies in `[lo, hi]`.
fn window(
    report: &ConvergenceReport,
    norm: Norm,
    rows: impl IntoIterator<Item = u32>,
    lo: f64,
    hi: f64,
) -> (bool, String) {
    let mut ok = true;
    let mut text = Vec::new();
    for n in rows {
        match report.eoc_at(n, norm) {
            Some(e) => {
                ok &= (lo..=hi).contains(&e);
                text.push(format!("{e:.3}"));
            }
            None => {
                ok = false;
                text.push("n/a".into());
            }
        }
    }
    (ok, format!("{norm:?} [{}] in [{lo}, {hi}]", text.join(", ")))
}

fn windows(report: &ConvergenceReport, rows: std::ops::RangeInclusive<u32>, checks: &[(Norm, f64, f64)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(norm, lo, hi) in checks {
        let (ok, text) = window(report, norm, rows.clone(), lo, hi);
        pass &= ok;
        parts.push(text);
    }
    Verdict::new(pass, parts.join("; "))
}

/// Soft comparison of error magnitudes against reference values; reported, never gating.
fn magnitudes(label: &str, report: &ConvergenceReport, reference: &RefTable) {
    let mut worst = 1.0f64;
    for r in &report.rows {
        if let Some(row) = reference.rows.iter().find(|row| row.0 == r.inv_h) {
            for (k, norm) in [Norm::L2, Norm::H1, Norm::Linf].into_iter().enumerate() {
                let ratio = r.get(norm) / row.1[k];
                worst = worst.max(ratio.max(1.0 / ratio));
            }
        }
    }
    let tag = if worst <= 3.0 { "within" } else { "OUTSIDE" };
    println!("    INFO {label}: error magnitudes {tag} a factor 3 of the reference table (worst ratio {worst:.2})");
}

const ORDER_WINDOWS: [(Norm, f64, f64); 3] = [(Norm::L2, 1.85, 2.15), (Norm::H1, 0.90, 1.10), (Norm::Linf, 1.7, 2.1)];

fn criterion_1(out: &ConvergenceOutcome, seconds: f64) -> Verdict {
    let v = windows(&out.report, 6..=9, &ORDER_WINDOWS);
    magnitudes("cubic 1/10", &out.report, &REFERENCE[1]);
    let fast = seconds <= 300.0;
    Verdict::new(
        v.pass && fast && out.failures.is_empty(),
        format!("{}; sweep n=5..9 took {seconds:.1} s (limit 300 s)", v.detail),
    )
}

fn criterion_2() -> Verdict {
    let out = sweep(config("cubic", Some((1.0, 1000.0)), Scheme::Modified, (5, 9)));
    magnitudes("cubic 1/1000", &out.report, &REFERENCE[3]);
    windows(&out.report, 6..=9, &ORDER_WINDOWS)
}

fn criterion_3() -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for (beta, reference) in [((1.0, 10.0), &REFERENCE[5]), ((10.0, 1.0), &REFERENCE[7])] {
        let out = sweep(config("corner", Some(beta), Scheme::Modified, (5, 9)));
        magnitudes(&format!("corner {}/{}", beta.0, beta.1), &out.report, reference);
        let v = windows(&out.report, 6..=9, &[(Norm::L2, 1.85, 2.15), (Norm::H1, 0.90, 1.10)]);
        pass &= v.pass;
        detail.push(format!("beta-={} beta+={}: {}", beta.0, beta.1, v.detail));
    }
    Verdict::new(pass, detail.join(" | "))
}

fn criterion_4() -> Verdict {
    let out = sweep(config("ellipse", None, Scheme::Modified, (5, 9)));
    magnitudes("ellipse", &out.report, &REFERENCE[9]);
    windows(
        &out.report,
        9..=9,
        &[(Norm::L2, 1.85, f64::INFINITY), (Norm::H1, 0.90, f64::INFINITY)],
    )
}

fn criterion_5(modified: &ConvergenceOutcome) -> (Verdict, ConvergenceOutcome) {
    let ifem = sweep(config("cubic", None, Scheme::Ifem, (8, 9)));
    magnitudes("cubic 1/10 plain", &ifem.report, &REFERENCE[0]);
    let (mut pass, mut detail) = window(&ifem.report, Norm::L2, [9], f64::NEG_INFINITY, 1.75);
    detail = format!("plain 128->256 {detail}");
    if std::env::var("IFEM_LONG_RUN").is_ok_and(|v| v == "1") {
        let plain = sweep(config("cubic", None, Scheme::Ifem, (9, 10)));
        let modi = sweep(config("cubic", None, Scheme::Modified, (9, 10)));
        let (a, ta) = window(&plain.report, Norm::L2, [10], f64::NEG_INFINITY, 1.5);
        let (b, tb) = window(&modi.report, Norm::L2, [10], 1.9, f64::INFINITY);
        pass &= a && b;
        detail.push_str(&format!("; 256->512 plain {ta}, modified {tb}"));
    } else {
        let (_, tm) = window(&modified.report, Norm::L2, [9], f64::NEG_INFINITY, f64::INFINITY);
        detail.push_str(&format!(
            "; modified 128->256 {tm}; 256->512 pair skipped (IFEM_LONG_RUN=1)"
        ));
    }
    (Verdict::new(pass, detail), ifem)
}

fn criterion_6() -> Verdict {
    let case = straight_line(0.31, 1.0, 10.0);
    let config = RunConfig::default();
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [4, 6] {
        let level = run_level(&case, n, &config).expect("patch level solves");
        let s = &level.solution;
        let err = s
            .mesh
            .vertices
            .iter()
            .zip(&s.solve.solution)
            .map(|(p, x)| (case.exact(p) - x).abs())
            .fold(0.0, f64::max);
        pass &= err <= 1e-8;
        detail.push(format!("n={n}: max vertex error {err:.2e}"));
    }
    Verdict::new(pass, format!("{} (limit 1e-8)", detail.join(", ")))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [0.0f64; 4];
    for _ in 0..10_000 {
        let h = 2f64.powi(-rng.gen_range(1..11));
        let x0 = rng.gen_range(-1.0..1.0);
        let y0 = rng.gen_range(-1.0..1.0);
        let pts = if rng.gen_bool(0.5) {
            [Point::new(x0, y0), Point::new(x0 + h, y0), Point::new(x0 + h, y0 + h)]
        } else {
            [Point::new(x0, y0), Point::new(x0 + h, y0 + h), Point::new(x0, y0 + h)]
        };
        let lone = rng.gen_range(0..3);
        let side = if rng.gen_bool(0.5) { Side::Plus } else { Side::Minus };
        let cut = cut_from_parameters(
            pts,
            lone,
            side,
            rng.gen_range(1e-3..1.0 - 1e-3),
            rng.gen_range(1e-3..1.0 - 1e-3),
        );
        let ratio = 10f64.powf(rng.gen_range(-3.0..=3.0));
        let imm = immersed_p1(&pts, &cut, ratio, 1.0, 0).expect("admissible cut");
        let sides = vertex_sides(&cut);
        let basis = LocalBasis::Immersed(Box::new(imm.clone()));
        let scale = (pts[1] - pts[0]).norm().max((pts[2] - pts[0]).norm());
        let n = cut.chord_normal;
        let bmax = imm.beta_plus.max(imm.beta_minus);
        for i in 0..3 {
            // flux jump across the chord, relative to the gradient scale 1/h
            let jump = imm.beta_plus * basis.eval_grad(i, Side::Plus).dot(&n)
                - imm.beta_minus * basis.eval_grad(i, Side::Minus).dot(&n);
            worst[0] = worst[0].max(jump.abs() * scale / bmax);
            for q in [cut.d.point, cut.e.point] {
                worst[1] = worst[1].max((basis.eval(i, &q, Side::Plus) - basis.eval(i, &q, Side::Minus)).abs());
            }
            for (j, p) in pts.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst[2] = worst[2].max((basis.eval(i, p, sides[j]) - expect).abs());
            }
        }
        // partition of unity at random points of both pieces
        for side in [Side::Plus, Side::Minus] {
            let poly = cut.piece(side);
            for _ in 0..3 {
                let (a, b) = (rng.gen::<f64>(), rng.gen::<f64>());
                let (a, b) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
                let k = rng.gen_range(1..poly.len() - 1);
                let p = poly[0] + a * (poly[k] - poly[0]) + b * (poly[k + 1] - poly[0]);
                let sum: f64 = (0..3).map(|i| basis.eval(i, &p, side)).sum();
                let grad = (0..3).map(|i| basis.eval_grad(i, side)).sum::<ifem_core::Vector>();
                worst[3] = worst[3].max((sum - 1.0).abs()).max(grad.norm() * scale);
            }
        }
    }
    Verdict::new(
        worst.iter().all(|&w| w <= 1e-12),
        format!(
            "10^4 cuts, beta ratio in [1e-3, 1e3]: flux {:.1e}, D/E continuity {:.1e}, nodal {:.1e}, partition of unity {:.1e} (limit 1e-12)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

/// Coefficients of `(c0 l0 + c1 l1 + c2 l2)^k` by barycentric exponent triple.
fn barycentric_power(c: [f64; 3], k: usize) -> Vec<([usize; 3], f64)> {
    let mut terms = vec![([0; 3], 1.0)];
    for _ in 0..k {
        let mut next: Vec<([usize; 3], f64)> = Vec::new();
        for (e, w) in &terms {
            for m in 0..3 {
                let mut f = *e;
                f[m] += 1;
                match next.iter_mut().find(|(g, _)| *g == f) {
                    Some(t) => t.1 += w * c[m],
                    None => next.push((f, w * c[m])),
                }
            }
        }
        terms = next;
    }
    terms
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Exact integral of `x^i y^j` over a triangle, via
/// `int l0^a l1^b l2^c = 2|T| a! b! c! / (a + b + c + 2)!`.
/// Every term is positive for triangles in the first quadrant, so there is no cancellation.
fn exact_moment(t: &[Point; 3], i: usize, j: usize) -> f64 {
    let xs = barycentric_power([t[0].x, t[1].x, t[2].x], i);
    let ys = barycentric_power([t[0].y, t[1].y, t[2].y], j);
    let area = signed_area(t);
    let mut total = 0.0;
    for (ex, wx) in &xs {
        for (ey, wy) in &ys {
            let e = [ex[0] + ey[0], ex[1] + ey[1], ex[2] + ey[2]];
            let num: f64 = e.iter().map(|&k| factorial(k)).product();
            total += wx * wy * num / factorial(e.iter().sum::<usize>() + 2);
        }
    }
    2.0 * area * total
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tri_err = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let mut t = [0; 3].map(|_| Point::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)));
        if signed_area(&t) < 0.0 {
            t.swap(1, 2);
        }
        if signed_area(&t) < 1e-2 {
            continue;
        }
        done += 1;
        for d in [1, 2, 4, 6] {
            let rule = triangle_rule(&t, d).expect("supported degree");
            for i in 0..=d {
                for j in 0..=d - i {
                    let exact = exact_moment(&t, i, j);
                    let q = rule.integrate(|p| p.x.powi(i as i32) * p.y.powi(j as i32));
                    tri_err = tri_err.max((q - exact).abs() / exact);
                }
            }
        }
    }
    let mut seg_err = 0.0f64;
    for _ in 0..100 {
        let p0 = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let p1 = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let len = (p1 - p0).norm();
        let bp = rng.gen_range(0.05..0.95);
        let along = |p: &Point| (p - p0).dot(&(p1 - p0)) / (len * len);
        for npts in 1..=3 {
            for k in 0..2 * npts {
                let exact = len / (k + 1) as f64;
                let q = segment_rule(&p0, &p1, npts)
                    .unwrap()
                    .integrate(|p| along(p).powi(k as i32));
                let qs = split_segment_rule(&p0, &p1, bp, npts)
                    .unwrap()
                    .integrate(|p| along(p).powi(k as i32));
                seg_err = seg_err.max((q - exact).abs() / exact).max((qs - exact).abs() / exact);
            }
        }
    }
    let mut area_err = 0.0f64;
    let reference = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
    for _ in 0..1000 {
        let side = if rng.gen_bool(0.5) { Side::Plus } else { Side::Minus };
        let cut = cut_from_parameters(
            reference,
            rng.gen_range(0..3),
            side,
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
        );
        area_err = area_err.max((cut.area_plus + cut.area_minus - 0.5).abs() / 0.5);
        for d in [1, 2, 4, 6] {
            let (p, m) = cut_rule(&cut, d).unwrap();
            area_err = area_err.max((p.total_weight() + m.total_weight() - 0.5).abs() / 0.5);
        }
    }
    Verdict::new(
        tri_err <= 1e-13 && seg_err <= 1e-13 && area_err <= 1e-13,
        format!("triangle moments {tri_err:.1e}, segment moments {seg_err:.1e}, cut area additivity {area_err:.1e} (limit 1e-13)"),
    )
}

fn criterion_9(modified: &ConvergenceOutcome, plain: &ConvergenceOutcome) -> Verdict {
    let case = builtin_case_with("cubic", None, None).unwrap();
    let mut pass = true;
    let mut notes = Vec::new();
    let mut worst_asym = 0.0f64;
    for n in 3..=7 {
        let mesh = StructuredMesh::uniform(Rect::square(-1.0, 1.0).unwrap(), n).unwrap();
        let cm = CutMesh::build(&mesh, &case.interface).unwrap();
        let bases = build_bases(&mesh, &cm, &case.beta).unwrap();
        let mut dofs = Vec::new();
        for params in [SchemeParams::default(), SchemeParams::ifem()] {
            let mut sys = assemble(&mesh, &cm, &bases, &case.beta, &case.f, &params).unwrap();
            if params.scheme == Scheme::Modified {
                worst_asym = worst_asym.max(sys.matrix.asymmetry() / sys.matrix.max_abs());
                apply_dirichlet(&mut sys, &boundary_values(&mesh, &cm, &case.u));
                worst_asym = worst_asym.max(sys.matrix.asymmetry() / sys.matrix.max_abs());
            }
            dofs.push(sys.dofs());
        }
        if dofs[0] != mesh.num_vertices() || dofs[1] != mesh.num_vertices() {
            pass = false;
            notes.push(format!("n={n}: dofs {dofs:?} vs {} vertices", mesh.num_vertices()));
        }
    }
    pass &= worst_asym <= 1e-12;

    // CG on every level up to 9; levels 5..9 come from the criterion 1 sweep
    let mut cg = Vec::new();
    let solver = SolverOptions {
        method: Method::Cg,
        tol: 1e-10,
        max_iter: None,
    };
    for n in 3..=4 {
        let s = solve_level(&case, n, &SchemeParams::default(), &solver).expect("cg converges");
        let dofs = s.mesh.num_vertices();
        pass &= s.solve.iterations <= dofs && s.solve.residual <= 1e-10;
        cg.push(format!("{}/{}", s.solve.iterations, dofs));
    }
    for (r, d) in modified.report.rows.iter().zip(&modified.diagnostics) {
        pass &= d.solver == Method::Cg && r.iters <= r.dofs && d.residual <= 1e-10;
        cg.push(format!("{}/{}", r.iters, r.dofs));
    }
    pass &= modified.report.rows.len() == 5;
    for r in &plain.report.rows {
        let same = modified.report.row(r.n).is_some_and(|m| m.dofs == r.dofs);
        pass &= same;
        if !same {
            notes.push(format!("n={}: plain and modified dof counts differ", r.n));
        }
    }
    Verdict::new(
        pass,
        format!(
            "asymmetry/max|a| {worst_asym:.1e} (limit 1e-12); cg iterations/dofs n=3..9 [{}]; dofs = vertices for both schemes{}",
            cg.join(", "),
            if notes.is_empty() { String::new() } else { format!(" ({})", notes.join("; ")) }
        ),
    )
}

fn criterion_10() -> Verdict {
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut bad = Vec::new();
    for table in &REFERENCE {
        for w in table.rows.windows(2) {
            let (coarse, fine) = (&w[0], &w[1]);
            for k in 0..3 {
                let printed = fine.2[k].expect("order printed for refined rows");
                let eoc = compute_eoc(coarse.1[k], fine.1[k]).expect("positive errors");
                let diff = (eoc - printed).abs();
                worst = worst.max(diff);
                checked += 1;
                if diff > 0.002 {
                    bad.push(format!("{} {} 1/h={} col {k}", table.case, table.scheme, fine.0));
                }
            }
        }
    }
    let example = compute_eoc(5.286e-5, 1.328e-5).unwrap();
    let pass = bad.is_empty() && (example - 1.993).abs() <= 0.002;
    Verdict::new(
        pass,
        format!(
            "{checked} printed orders reproduced, worst deviation {worst:.4} (limit 0.002); 128->256 modified L2 -> {example:.3}{}",
            if bad.is_empty() { String::new() } else { format!("; mismatches: {}", bad.join(", ")) }
        ),
    )
}

fn criterion_11() -> Verdict {
    let mut c = config("cubic", None, Scheme::Modified, (5, 8));
    c.sigma0 = 0.0;
    c.epsilon = 0;
    let out = sweep(c);
    windows(&out.report, 6..=8, &[(Norm::L2, 1.8, f64::INFINITY)])
}

fn main() -> ExitCode {
    let mut verdicts: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut record = |id: u32, name: &'static str, v: Verdict| {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id:>2} ({name}): {}", v.detail);
        verdicts.push((id, name, v));
    };

    let start = Instant::now();
    let cubic = sweep(config("cubic", None, Scheme::Modified, (5, 9)));
    let seconds = start.elapsed().as_secs_f64();
    record(1, "cubic 1/10 orders", criterion_1(&cubic, seconds));
    record(2, "cubic 1/1000 orders", criterion_2());
    record(3, "corner orders", criterion_3());
    record(4, "ellipse orders", criterion_4());
    let (v5, plain) = criterion_5(&cubic);
    record(5, "degradation contrast", v5);
    record(6, "patch test", criterion_6());
    record(7, "immersed basis constraints", criterion_7());
    record(8, "quadrature exactness", criterion_8());
    record(9, "matrix structure", criterion_9(&cubic, &plain));
    record(10, "order utility", criterion_10());
    record(11, "penalty-free robustness", criterion_11());

    let failed: Vec<String> = verdicts.iter().filter(|v| !v.2.pass).map(|v| v.0.to_string()).collect();
    println!(
        "{} of {} criteria passed",
        verdicts.len() - failed.len(),
        verdicts.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}

/// Published error tables: per case, plain scheme then modified scheme, rows
/// `(1/h, [L2, broken H1, Linf], [orders])`. Four misprinted entries are
/// corrected: the plain cubic 1/10 row at 1/h=32 (L2 `8.9002-4`, H1 off by a
/// factor 10) and the plain corner 1/10 H1 rows at 1/h=16, 32, 64 (exponent -3
/// for -2). The printed orders fix the intended values.
struct RefTable {
    case: &'static str,
    scheme: &'static str,
    rows: [(f64, [f64; 3], [Option<f64>; 3]); 7],
}

const REFERENCE: [RefTable; 10] = [
    RefTable {
        case: "cubic 1/10",
        scheme: "ifem",
        rows: [
            (8.0, [1.344e-2, 3.315e-1, 2.761e-2], [None, None, None]),
            (
                16.0,
                [3.453e-3, 1.709e-1, 8.715e-3],
                [Some(1.961), Some(0.955), Some(1.663)],
            ),
            (
                32.0,
                [8.900e-4, 8.727e-2, 3.069e-3],
                [Some(1.956), Some(0.970), Some(1.506)],
            ),
            (
                64.0,
                [2.161e-4, 4.507e-2, 1.295e-3],
                [Some(2.043), Some(0.953), Some(1.245)],
            ),
            (
                128.0,
                [5.541e-5, 2.347e-2, 5.786e-4],
                [Some(1.963), Some(0.941), Some(1.162)],
            ),
            (
                256.0,
                [1.851e-5, 1.288e-2, 3.598e-4],
                [Some(1.582), Some(0.865), Some(0.686)],
            ),
            (
                512.0,
                [8.193e-6, 7.297e-3, 1.776e-4],
                [Some(1.176), Some(0.820), Some(1.018)],
            ),
        ],
    },
    RefTable {
        case: "cubic 1/10",
        scheme: "modified",
        rows: [
            (8.0, [1.233e-2, 3.306e-1, 2.345e-2], [None, None, None]),
            (
                16.0,
                [3.260e-3, 1.694e-1, 6.765e-3],
                [Some(1.919), Some(0.965), Some(1.793)],
            ),
            (
                32.0,
                [8.269e-4, 8.554e-2, 1.775e-3],
                [Some(1.979), Some(0.986), Some(1.931)],
            ),
            (
                64.0,
                [2.094e-4, 4.300e-2, 4.621e-4],
                [Some(1.982), Some(0.992), Some(1.941)],
            ),
            (
                128.0,
                [5.286e-5, 2.156e-2, 1.185e-4],
                [Some(1.986), Some(0.996), Some(1.964)],
            ),
            (
                256.0,
                [1.328e-5, 1.078e-2, 2.991e-5],
                [Some(1.993), Some(0.999), Some(1.986)],
            ),
            (
                512.0,
                [3.308e-6, 5.399e-3, 7.557e-6],
                [Some(2.005), Some(0.998), Some(1.985)],
            ),
        ],
    },
    RefTable {
        case: "cubic 1/1000",
        scheme: "ifem",
        rows: [
            (8.0, [1.923e-2, 3.530e-1, 5.617e-2], [None, None, None]),
            (
                16.0,
                [4.002e-3, 1.716e-1, 1.470e-2],
                [Some(2.264), Some(1.040), Some(1.934)],
            ),
            (
                32.0,
                [9.196e-4, 8.453e-2, 3.854e-3],
                [Some(2.122), Some(1.022), Some(1.932)],
            ),
            (
                64.0,
                [2.291e-4, 4.221e-2, 1.288e-3],
                [Some(2.005), Some(1.002), Some(1.582)],
            ),
            (
                128.0,
                [5.408e-5, 2.105e-2, 2.836e-4],
                [Some(2.083), Some(1.004), Some(2.183)],
            ),
            (
                256.0,
                [1.337e-5, 1.056e-2, 1.159e-4],
                [Some(2.016), Some(0.995), Some(1.291)],
            ),
            (
                512.0,
                [3.336e-6, 5.304e-3, 5.258e-5],
                [Some(2.002), Some(0.994), Some(1.141)],
            ),
        ],
    },
    RefTable {
        case: "cubic 1/1000",
        scheme: "modified",
        rows: [
            (8.0, [1.266e-2, 3.216e-1, 2.470e-2], [None, None, None]),
            (
                16.0,
                [3.205e-3, 1.643e-1, 6.836e-3],
                [Some(1.982), Some(0.969), Some(1.854)],
            ),
            (
                32.0,
                [8.163e-4, 8.293e-2, 1.784e-3],
                [Some(1.973), Some(0.986), Some(1.938)],
            ),
            (
                64.0,
                [2.068e-4, 4.172e-2, 4.642e-4],
                [Some(1.981), Some(0.991), Some(1.943)],
            ),
            (
                128.0,
                [5.199e-5, 2.093e-2, 1.185e-4],
                [Some(1.992), Some(0.996), Some(1.970)],
            ),
            (
                256.0,
                [1.302e-5, 1.048e-2, 3.009e-5],
                [Some(1.998), Some(0.998), Some(1.977)],
            ),
            (
                512.0,
                [3.259e-6, 5.243e-3, 7.564e-6],
                [Some(1.998), Some(0.999), Some(1.992)],
            ),
        ],
    },
    RefTable {
        case: "corner 1/10",
        scheme: "ifem",
        rows: [
            (8.0, [3.359e-3, 7.958e-2, 1.036e-2], [None, None, None]),
            (
                16.0,
                [9.014e-4, 4.185e-2, 4.118e-3],
                [Some(1.898), Some(0.927), Some(1.332)],
            ),
            (
                32.0,
                [2.219e-4, 2.161e-2, 1.958e-3],
                [Some(2.022), Some(0.954), Some(1.073)],
            ),
            (
                64.0,
                [5.686e-5, 1.197e-2, 9.568e-4],
                [Some(1.965), Some(0.852), Some(1.033)],
            ),
            (
                128.0,
                [1.463e-5, 6.573e-3, 5.063e-4],
                [Some(1.958), Some(0.865), Some(0.918)],
            ),
            (
                256.0,
                [6.070e-6, 3.967e-3, 2.462e-4],
                [Some(1.269), Some(0.728), Some(1.040)],
            ),
            (
                512.0,
                [2.942e-6, 2.439e-3, 1.241e-4],
                [Some(1.045), Some(0.702), Some(0.988)],
            ),
        ],
    },
    RefTable {
        case: "corner 1/10",
        scheme: "modified",
        rows: [
            (8.0, [3.056e-3, 7.817e-2, 9.005e-3], [None, None, None]),
            (
                16.0,
                [7.441e-4, 3.956e-2, 2.316e-3],
                [Some(2.038), Some(0.983), Some(1.959)],
            ),
            (
                32.0,
                [1.930e-4, 1.990e-2, 6.221e-4],
                [Some(1.947), Some(0.991), Some(1.896)],
            ),
            (
                64.0,
                [4.716e-5, 1.000e-2, 1.608e-4],
                [Some(2.033), Some(0.993), Some(1.952)],
            ),
            (
                128.0,
                [1.216e-5, 5.015e-3, 4.090e-5],
                [Some(1.956), Some(0.996), Some(1.975)],
            ),
            (
                256.0,
                [3.010e-6, 2.510e-3, 1.031e-5],
                [Some(2.014), Some(0.999), Some(1.989)],
            ),
            (
                512.0,
                [7.621e-7, 1.256e-3, 2.633e-6],
                [Some(1.982), Some(0.999), Some(1.968)],
            ),
        ],
    },
    RefTable {
        case: "corner 10/1",
        scheme: "ifem",
        rows: [
            (8.0, [1.238e-2, 3.013e-1, 1.613e-2], [None, None, None]),
            (
                16.0,
                [3.159e-3, 1.513e-1, 4.327e-3],
                [Some(1.971), Some(0.994), Some(1.899)],
            ),
            (
                32.0,
                [7.949e-4, 7.572e-2, 1.174e-3],
                [Some(1.991), Some(0.998), Some(1.882)],
            ),
            (
                64.0,
                [2.030e-4, 3.821e-2, 7.475e-4],
                [Some(1.969), Some(0.987), Some(0.651)],
            ),
            (
                128.0,
                [5.366e-5, 1.933e-2, 4.704e-4],
                [Some(1.920), Some(0.983), Some(0.668)],
            ),
            (
                256.0,
                [1.528e-5, 9.919e-3, 2.452e-4],
                [Some(1.812), Some(0.963), Some(0.940)],
            ),
            (
                512.0,
                [4.898e-6, 5.155e-3, 1.199e-4],
                [Some(1.642), Some(0.944), Some(1.033)],
            ),
        ],
    },
    RefTable {
        case: "corner 10/1",
        scheme: "modified",
        rows: [
            (8.0, [1.238e-2, 3.010e-1, 1.610e-2], [None, None, None]),
            (
                16.0,
                [3.094e-3, 1.507e-1, 4.107e-3],
                [Some(2.000), Some(0.998), Some(1.971)],
            ),
            (
                32.0,
                [7.787e-4, 7.543e-2, 1.037e-3],
                [Some(1.990), Some(0.999), Some(1.986)],
            ),
            (
                64.0,
                [1.947e-4, 3.773e-2, 2.605e-4],
                [Some(2.000), Some(0.999), Some(1.993)],
            ),
            (
                128.0,
                [4.876e-5, 1.887e-2, 6.528e-5],
                [Some(1.998), Some(1.000), Some(1.997)],
            ),
            (
                256.0,
                [1.219e-5, 9.435e-3, 1.634e-5],
                [Some(2.000), Some(1.000), Some(1.998)],
            ),
            (
                512.0,
                [3.051e-6, 4.718e-3, 4.087e-6],
                [Some(1.998), Some(1.000), Some(1.999)],
            ),
        ],
    },
    RefTable {
        case: "ellipse",
        scheme: "ifem",
        rows: [
            (8.0, [8.550e-2, 1.585e0, 2.415e-1], [None, None, None]),
            (
                16.0,
                [2.931e-2, 9.840e-1, 1.025e-1],
                [Some(1.544), Some(0.688), Some(1.237)],
            ),
            (
                32.0,
                [7.954e-3, 5.538e-1, 4.174e-2],
                [Some(1.882), Some(0.829), Some(1.295)],
            ),
            (
                64.0,
                [2.002e-3, 3.033e-1, 1.568e-2],
                [Some(1.990), Some(0.869), Some(1.413)],
            ),
            (
                128.0,
                [4.825e-4, 1.665e-1, 8.471e-3],
                [Some(2.053), Some(0.865), Some(0.888)],
            ),
            (
                256.0,
                [1.206e-4, 8.948e-2, 4.393e-3],
                [Some(2.000), Some(0.896), Some(0.947)],
            ),
            (
                512.0,
                [3.461e-5, 5.063e-2, 2.132e-3],
                [Some(1.802), Some(0.822), Some(1.043)],
            ),
        ],
    },
    RefTable {
        case: "ellipse",
        scheme: "modified",
        rows: [
            (8.0, [8.652e-2, 1.572e0, 2.150e-1], [None, None, None]),
            (
                16.0,
                [2.867e-2, 9.704e-1, 9.448e-2],
                [Some(1.593), Some(0.696), Some(1.187)],
            ),
            (
                32.0,
                [8.049e-3, 5.368e-1, 3.656e-2],
                [Some(1.833), Some(0.854), Some(1.370)],
            ),
            (
                64.0,
                [2.195e-3, 2.889e-1, 1.097e-2],
                [Some(1.874), Some(0.894), Some(1.736)],
            ),
            (
                128.0,
                [5.585e-4, 1.485e-1, 3.055e-3],
                [Some(1.975), Some(0.959), Some(1.845)],
            ),
            (
                256.0,
                [1.437e-4, 7.550e-2, 8.386e-4],
                [Some(1.958), Some(0.976), Some(1.865)],
            ),
            (
                512.0,
                [3.649e-5, 3.809e-2, 2.209e-4],
                [Some(1.978), Some(0.987), Some(1.925)],
            ),
        ],
    },
];
