//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness and exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bowditch::bqtree::{bq_test, vertex_at, Address, BqVerdict};
use bowditch::carrier::{minimal_carrier, trace_axes};
use bowditch::charvar::{neighbor_trace, realize, Slot, TraceTriple};
use bowditch::fermat::{
    fermat_point_triangle, fermat_point_triple, steiner_tree, GeodesicTriple, SteinerKind, Triangle,
};
use bowditch::hyp3::{
    common_perpendicular_feet, complex_distance, cosine_rule_residuals, cross_ratio,
    dist_point_geodesic, geodesic_distance, hexagon_of_triple, pi_rotation, translation_lengths,
    ExtendedComplex, Geodesic, H3Point, Isometry,
};
use bowditch::lorentz::{self, Lv};
use bowditch::presets::{run_preset, PlanarConfiguration};
use bowditch::scan::{run_scan, ScanMode, ScanSpec, VerdictClass};
use bowditch::{Complex64, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances.
const ROTATION_SQUARE_TOL: f64 = 1e-10;
const CROSS_RATIO_TOL: f64 = 1e-9;
const TRACE_LENGTH_TOL: f64 = 1e-10;
const COSINE_RULE_TOL: f64 = 1e-8;
const FRICKE_TOL: f64 = 1e-9;
const CONVEXITY_SLACK: f64 = 1e-10;
const FERMAT_ORACLE_TOL: f64 = 1e-6;
const PROBE_MARGIN: f64 = -1e-6;
const STEINER_TIE_TOL: f64 = 1e-6;
const JUNCTION_TOL: f64 = 1e-6;
const CARRIER_DOUBLING_TOL: f64 = 1e-9;
const CONJUGATION_TOL: f64 = 1e-8;
const TWO_PI_3: f64 = 2.0 * PI / 3.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_complex(r: &mut ChaCha8Rng, size: f64) -> Complex64 {
    c(r.gen_range(-size..size), r.gen_range(-size..size))
}

fn rand_isometry(r: &mut ChaCha8Rng) -> Isometry {
    loop {
        let m = [0; 4].map(|_| rand_complex(r, 2.0));
        let det = m[0] * m[3] - m[1] * m[2];
        if det.norm() > 0.2 {
            return Isometry::normalized(m[0], m[1], m[2], m[3]).unwrap();
        }
    }
}

fn rand_geodesic(r: &mut ChaCha8Rng) -> Geodesic {
    loop {
        let a = ExtendedComplex::Finite(rand_complex(r, 3.0));
        let b = if r.gen_bool(0.1) {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::Finite(rand_complex(r, 3.0))
        };
        if a.chordal(&b) < 0.05 {
            continue;
        }
        if let Ok(g) = Geodesic::new(a, b) {
            return g;
        }
    }
}

fn rand_point(r: &mut ChaCha8Rng) -> H3Point {
    H3Point::new(
        r.gen_range(-2.0..2.0),
        r.gen_range(-2.0..2.0),
        r.gen_range(0.3..3.0),
    )
    .unwrap()
}

fn rand_triple(r: &mut ChaCha8Rng, tol: &Tolerance) -> GeodesicTriple {
    loop {
        let g = [0; 3].map(|_| rand_geodesic(r));
        if let Ok(t) = GeodesicTriple::new(g[0], g[1], g[2], tol) {
            // Keep the pairwise distances in a range where probing is meaningful.
            let far = (0..3)
                .any(|i| geodesic_distance(&g[i], &g[(i + 1) % 3], tol).map_or(true, |d| d > 4.0));
            if !far {
                return t;
            }
        }
    }
}

/// Point at fraction `t` of the segment from `p` to `q`.
fn along(p: &Lv, q: &Lv, t: f64) -> Lv {
    let d = lorentz::dist(p, q);
    lorentz::exp(p, &lorentz::toward(p, q).scale(t * d))
}

fn sum_to_lines(p: &H3Point, lines: &[Geodesic; 3]) -> f64 {
    lines.iter().map(|g| dist_point_geodesic(p, g).0).sum()
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn identities() -> Outcome {
    let start = Instant::now();
    let tol = Tolerance::default();
    let mut r = rng(1);
    let n = 1000;

    let mut rot = 0.0f64;
    for _ in 0..n {
        let m = pi_rotation(&rand_geodesic(&mut r));
        rot = rot.max((m * m).max_diff(&(-Isometry::identity())));
    }
    if rot >= ROTATION_SQUARE_TOL {
        return Err(format!("pi-rotation square residual {rot:.2e}"));
    }

    // Double-cross built in normal position: g2 is g1 pushed by t and turned by β
    // along (0, ∞), then everything is moved by a random isometry.
    let mut cr_err = 0.0f64;
    for _ in 0..n {
        let w = loop {
            let w = rand_complex(&mut r, 2.0);
            if w.norm() > 0.1 {
                break w;
            }
        };
        let l = c(r.gen_range(-2.0..2.0), r.gen_range(-3.0..3.0));
        let m = rand_isometry(&mut r);
        let mv = |u: Complex64| m.apply_boundary(&ExtendedComplex::Finite(u));
        let axis = Geodesic::new(
            mv(c(0.0, 0.0)),
            m.apply_boundary(&ExtendedComplex::Infinity),
        )
        .unwrap();
        let g1 = Geodesic::new(mv(-w), mv(w)).unwrap();
        let w2 = w * l.exp();
        let g2 = Geodesic::new(mv(-w2), mv(w2)).unwrap();
        let d = complex_distance(&axis, &g1, &g2, &tol).map_err(|e| e.to_string())?;
        let cr = cross_ratio(&g1.end, &g2.end, &axis.end, &axis.start).unwrap();
        let lhs = d.as_complex().exp();
        cr_err = cr_err
            .max((lhs - cr).norm())
            .max((lhs - l.exp()).norm() / l.exp().norm());
    }
    if cr_err >= CROSS_RATIO_TOL {
        return Err(format!("exp(l) vs cross ratio residual {cr_err:.2e}"));
    }

    let mut tl = 0.0f64;
    for _ in 0..n {
        let m = rand_isometry(&mut r);
        let l = translation_lengths(&m, &tol).map_err(|e| e.to_string())?;
        let v = -2.0 * (l.as_complex() / 2.0).cosh();
        let tr = m.trace();
        tl = tl.max((v - tr).norm().min((v + tr).norm()) / tr.norm().max(1.0));
    }
    if tl >= TRACE_LENGTH_TOL {
        return Err(format!("trace-length residual {tl:.2e}"));
    }

    let mut cosine = 0.0f64;
    let mut hexagons = 0;
    while hexagons < n {
        let g = [0; 3].map(|_| rand_geodesic(&mut r));
        let Ok(h) = hexagon_of_triple(&g[0], &g[1], &g[2], &tol) else {
            continue;
        };
        hexagons += 1;
        let rots = h.sides.map(|s| pi_rotation(&s));
        for signs in 0..64u32 {
            let flipped: [Isometry; 6] = std::array::from_fn(|k| {
                if signs >> k & 1 == 1 {
                    -rots[k]
                } else {
                    rots[k]
                }
            });
            cosine = cosine.max(worst(cosine_rule_residuals(&flipped)));
        }
    }
    if cosine >= COSINE_RULE_TOL {
        return Err(format!("cosine rule residual {cosine:.2e}"));
    }

    let mut fricke = 0.0f64;
    for k in 0..n {
        let (xi, eta) = if k % 2 == 0 {
            (rand_isometry(&mut r), rand_isometry(&mut r))
        } else {
            let t = TraceTriple::new(
                rand_complex(&mut r, 3.0),
                rand_complex(&mut r, 3.0),
                rand_complex(&mut r, 3.0),
            );
            let Ok(p) = realize(&t, &tol) else { continue };
            (p.xi, p.eta)
        };
        let (x, y, z) = (xi.trace(), eta.trace(), (xi * eta).trace());
        let comm = (xi * eta * xi.inverse() * eta.inverse()).trace();
        let scale = (x * x).norm() + (y * y).norm() + (z * z).norm() + (x * y * z).norm();
        fricke =
            fricke.max((comm - (x * x + y * y + z * z - x * y * z - 2.0)).norm() / scale.max(1.0));
    }
    if fricke >= FRICKE_TOL {
        return Err(format!("Fricke residual {fricke:.2e}"));
    }
    within(Duration::from_secs(10), start.elapsed())?;
    Ok(format!(
        "rotation {rot:.1e}, cross ratio {cr_err:.1e}, trace-length {tl:.1e}, cosine rule {cosine:.1e} (64 sign choices), Fricke {fricke:.1e}"
    ))
}

fn convexity() -> Outcome {
    let tol = Tolerance::default();
    let mut r = rng(2);
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let p = [0; 4].map(|_| Lv::from_point(&rand_point(&mut r)));
        for t in [0.25, 0.5, 0.75] {
            let a = along(&p[0], &p[1], t);
            let b = along(&p[3], &p[2], t);
            let lhs = lorentz::dist(&a, &b);
            let rhs = (1.0 - t) * lorentz::dist(&p[0], &p[3]) + t * lorentz::dist(&p[1], &p[2]);
            worst_gap = worst_gap.max(lhs - rhs);
        }
    }
    if worst_gap > CONVEXITY_SLACK {
        return Err(format!(
            "interpolation inequality violated by {worst_gap:.2e}"
        ));
    }
    let mut worst_mid = f64::NEG_INFINITY;
    for _ in 0..200 {
        let triple = rand_triple(&mut r, &tol);
        let lines = triple.geodesics();
        for _ in 0..5 {
            let (p, q) = (rand_point(&mut r), rand_point(&mut r));
            let m = along(&Lv::from_point(&p), &Lv::from_point(&q), 0.5).to_point();
            let gap =
                sum_to_lines(&m, lines) - 0.5 * (sum_to_lines(&p, lines) + sum_to_lines(&q, lines));
            worst_mid = worst_mid.max(gap);
        }
    }
    if worst_mid > CONVEXITY_SLACK {
        return Err(format!("midpoint convexity violated by {worst_mid:.2e}"));
    }
    Ok(format!(
        "interpolation excess {worst_gap:.1e}, midpoint excess {worst_mid:.1e}"
    ))
}

/// Brute-force minimum of the distance sum over the filled triangle: a
/// barycentric grid on the hyperboloid, then three finer grids spanning two cells around the best point.
fn triangle_oracle(v: [H3Point; 3]) -> f64 {
    let raw = v.map(|p| Lv::from_point(&p));
    let centre = raw[0].add(&raw[1]).add(&raw[2]).to_hyperboloid();
    // Affine chart of the Klein model seen from the centroid.
    let lv = raw.map(|q| q.scale(-1.0 / q.dot(&centre)));
    let value = |a: f64, b: f64| -> f64 {
        let g = 1.0 - a - b;
        if a < 0.0 || b < 0.0 || g < 0.0 {
            return f64::INFINITY;
        }
        let p = lv[0]
            .scale(a)
            .add(&lv[1].scale(b))
            .add(&lv[2].scale(g))
            .to_hyperboloid();
        raw.iter().map(|q| lorentz::dist(&p, q)).sum()
    };
    let n = 200;
    let mut step = 1.0 / n as f64;
    let (mut best, mut at) = (f64::INFINITY, (0.0, 0.0));
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (a, b) = (i as f64 * step, j as f64 * step);
            let v = value(a, b);
            if v < best {
                best = v;
                at = (a, b);
            }
        }
    }
    for _ in 0..3 {
        let (ca, cb) = at;
        let fine = step / 10.0;
        for i in -20..=20 {
            for j in -20..=20 {
                let (a, b) = (ca + i as f64 * fine, cb + j as f64 * fine);
                let v = value(a, b);
                if v < best {
                    best = v;
                    at = (a, b);
                }
            }
        }
        step = fine;
    }
    best
}

fn fermat_oracles() -> Outcome {
    let start = Instant::now();
    let tol = Tolerance::default();
    let mut r = rng(3);
    let mut tri_err = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let v = [0; 3].map(|_| rand_point(&mut r));
        let Ok(tr) = Triangle::new(v[0], v[1], v[2]) else {
            continue;
        };
        done += 1;
        let f = fermat_point_triangle(&tr);
        let o = triangle_oracle(v);
        tri_err = tri_err.max((f.value - o).abs());
    }
    if tri_err >= FERMAT_ORACLE_TOL {
        return Err(format!("triangle oracle mismatch {tri_err:.2e}"));
    }

    let mut margin = f64::INFINITY;
    for _ in 0..50 {
        let triple = rand_triple(&mut r, &tol);
        let lines = triple.geodesics();
        let f = fermat_point_triple(&triple, &tol).map_err(|e| e.to_string())?;
        let best = sum_to_lines(&f.point, lines);
        // Probes: points of the hull of the six hexagon corners pushed off by up
        // to one unit, plus a cloud around the computed minimizer.
        let mut corners = Vec::new();
        for i in 0..3 {
            let (a, b) = common_perpendicular_feet(&lines[i], &lines[(i + 1) % 3], &tol)
                .map_err(|e| e.to_string())?;
            corners.push(Lv::from_point(&a));
            corners.push(Lv::from_point(&b));
        }
        let centre = Lv::from_point(&f.point);
        for k in 0..10_000 {
            let (base, radius) = if k % 2 == 0 {
                let mut sum = Lv([0.0; 4]);
                for q in &corners {
                    sum = sum.add(&q.scale(r.gen_range(0.0..1.0)));
                }
                (sum.to_hyperboloid(), 1.0)
            } else {
                (centre, 0.05)
            };
            let basis = lorentz::tangent_basis(&base);
            let mut v = Lv([0.0; 4]);
            for e in &basis {
                v = v.add(&e.scale(r.gen_range(-1.0..1.0)));
            }
            let len = v.space_norm();
            if len > 0.0 {
                v = v.scale(radius * r.gen_range(0.0..1.0) / len);
            }
            let probe = lorentz::exp(&base, &v).to_point();
            margin = margin.min(sum_to_lines(&probe, lines) - best);
        }
    }
    if margin < PROBE_MARGIN {
        return Err(format!("a probe beats the Fermat point by {:.2e}", -margin));
    }
    within(Duration::from_secs(60), start.elapsed())?;
    Ok(format!(
        "triangle oracle gap {tri_err:.1e}, worst probe margin {margin:.1e}, {:.1?}",
        start.elapsed()
    ))
}

/// Three geodesics in one plane: the third is the vertical line, the other two
/// are at distance `a` from it and `2a` from each other, on opposite sides.
fn a_a_2a(a: f64) -> [Geodesic; 3] {
    let real = ExtendedComplex::real;
    let t = (a / 2.0).tanh();
    let cosh_between = ((2.0 * a).cosh() + a.cosh().powi(2)) / a.sinh().powi(2);
    let s = cosh_between.acosh().exp();
    [
        Geodesic::new(real(t), real(1.0 / t)).unwrap(),
        Geodesic::new(real(s * t), real(s / t)).unwrap(),
        Geodesic::new(real(0.0), ExtendedComplex::Infinity).unwrap(),
    ]
}

fn steiner_classification() -> Outcome {
    let tol = Tolerance::default();
    let a = 0.5;
    let g = a_a_2a(a);
    let d = [
        geodesic_distance(&g[0], &g[2], &tol).unwrap(),
        geodesic_distance(&g[1], &g[2], &tol).unwrap(),
        geodesic_distance(&g[0], &g[1], &tol).unwrap(),
    ];
    if (d[0] - a).abs() > 1e-12 || (d[1] - a).abs() > 1e-12 || (d[2] - 2.0 * a).abs() > 1e-12 {
        return Err(format!("fixture distances {d:?}"));
    }
    let triple = GeodesicTriple::new(g[0], g[1], g[2], &tol).map_err(|e| e.to_string())?;
    let trees = steiner_tree(&triple, &tol).map_err(|e| e.to_string())?;
    if trees.len() != 2 {
        return Err(format!("{} Steiner trees", trees.len()));
    }
    let tripods = trees.iter().filter(|t| t.is_tripod()).count();
    if tripods != 1 {
        return Err(format!("{tripods} tripods among the two trees"));
    }
    let gap = (trees[0].steiner_length - trees[1].steiner_length).abs();
    if gap >= STEINER_TIE_TOL {
        return Err(format!("lengths differ by {gap:.2e}"));
    }
    let mut junction = 0.0f64;
    for t in &trees {
        if let SteinerKind::AxisPath { .. } = t.kind {
            junction = junction.max(worst(
                t.junction_angles.iter().map(|x| (x - TWO_PI_3).abs()),
            ));
        }
    }
    if junction >= JUNCTION_TOL {
        return Err(format!("junction angle off by {junction:.2e}"));
    }
    Ok(format!(
        "lengths {:.9} / {:.9}, junction error {junction:.1e}",
        trees[0].steiner_length, trees[1].steiner_length
    ))
}

fn bq_fixtures() -> Outcome {
    let start = Instant::now();
    let tol = Tolerance::default();
    let cap = 30;
    let verdict =
        |x: Complex64, y: Complex64, z: Complex64| bq_test(&TraceTriple::new(x, y, z), cap, &tol);
    let r = |v: f64| c(v, 0.0);
    if !verdict(r(3.0), r(3.0), r(3.0)).is_accept() {
        return Err("(3,3,3) not accepted".into());
    }
    if !matches!(
        verdict(r(1.0), r(5.0), r(5.0)),
        BqVerdict::RejectElliptic { .. }
    ) {
        return Err("(1,5,5) not rejected as elliptic".into());
    }
    if verdict(r(2.0), r(2.0), r(2.0)) != BqVerdict::RejectReducible {
        return Err("(2,2,2) not rejected as reducible".into());
    }
    let open = verdict(c(0.5, 0.1), r(5.0), r(5.0));
    if !matches!(
        open,
        BqVerdict::RejectElliptic { .. } | BqVerdict::Indeterminate { .. }
    ) {
        return Err("(0.5+0.1i,5,5) accepted".into());
    }

    // Exhaustive enumeration: every trace real and at least 3, and the smallest
    // trace created at each depth strictly larger than at the previous one.
    let mut layer = vec![(TraceTriple::real(3.0, 3.0, 3.0), None::<Slot>)];
    let mut previous_min = 3.0;
    for depth in 1..=12 {
        let mut next = Vec::with_capacity(layer.len() * 2);
        let mut min_new = f64::INFINITY;
        for (t, last) in &layer {
            for s in Slot::ALL {
                if Some(s) == *last {
                    continue;
                }
                let n = neighbor_trace(t, s);
                for v in n.as_array() {
                    if v.im.abs() > 1e-9 * v.norm().max(1.0) || v.re < 3.0 {
                        return Err(format!("trace {v} at depth {depth}"));
                    }
                }
                min_new = min_new.min(n.get(s).re);
                next.push((n, Some(s)));
            }
        }
        if min_new <= previous_min {
            return Err(format!(
                "depth {depth} minimum {min_new} not above {previous_min}"
            ));
        }
        previous_min = min_new;
        layer = next;
    }
    within(Duration::from_secs(30), start.elapsed())?;
    Ok(format!(
        "fixtures as expected, {} vertices at depth 12, smallest new trace there {previous_min}",
        layer.len()
    ))
}

/// Distances of the hexagon sides on the three axes from the ideal limits:
/// `cosh → 1` on the axis of the newest slot and `cosh → −1` on the other two.
fn convergence_error(t: &TraceTriple, newest: Slot, tol: &Tolerance) -> Result<f64, String> {
    let triple = trace_axes(t, tol).map_err(|e| e.to_string())?;
    let sides = &triple.hexagon().side_lengths;
    Ok(worst(Slot::ALL.map(|s| {
        let ch = sides[2 * s.index()].as_complex().cosh();
        let target = if s == newest { 1.0 } else { -1.0 };
        (ch - target).norm()
    })))
}

fn convergence() -> Outcome {
    let tol = Tolerance::default();
    let root = TraceTriple::real(3.0, 3.0, 3.0);
    let mut report = Vec::new();
    for path in ["CACACACACA", "CBCBCBCBCB", "ABABABABAB"] {
        let mut errs = [0.0; 2];
        for (k, depth) in [5, 10].into_iter().enumerate() {
            let a = Address::parse(&path[..depth]).map_err(|e| e.to_string())?;
            let newest = *a.moves().last().unwrap();
            let v = vertex_at(&root, &a);
            errs[k] = convergence_error(&v.traces, newest, &tol)?;
        }
        if errs[1] >= 0.1 * errs[0] || errs[1].is_nan() {
            return Err(format!(
                "{path}: depth 10 error {:.2e} vs depth 5 {:.2e}",
                errs[1], errs[0]
            ));
        }
        report.push(format!("{path} {:.1e}->{:.1e}", errs[0], errs[1]));
    }
    Ok(report.join(", "))
}

fn main_pipeline() -> Outcome {
    let start = Instant::now();
    let tol = Tolerance::default();
    let rep = realize(&TraceTriple::real(3.0, 3.0, 3.0), &tol).map_err(|e| e.to_string())?;
    let base = minimal_carrier(&rep, 30, &tol).map_err(|e| e.to_string())?;
    within(Duration::from_secs(120), start.elapsed())?;
    if base.is_empty() {
        return Err("no minimal carrier".into());
    }
    for g in &base {
        let gap = (g.total_length - 2.0 * g.source.steiner_length).abs();
        if gap >= CARRIER_DOUBLING_TOL {
            return Err(format!(
                "total differs from twice the Steiner length by {gap:.2e}"
            ));
        }
        match g.sink_margin {
            Some(m) if m > 0.0 => {}
            other => return Err(format!("sink margin {other:?} at {}", g.vertex_address)),
        }
    }
    let lengths = |gs: &[bowditch::carrier::CarrierGraph]| -> Vec<f64> {
        gs.iter().map(|g| g.total_length).collect()
    };
    let reference = lengths(&base);
    let mut r = rng(7);
    let mut drift = 0.0f64;
    for _ in 0..20 {
        let g = rand_isometry(&mut r);
        let moved = minimal_carrier(&rep.conjugate_by(&g), 30, &tol).map_err(|e| e.to_string())?;
        let l = lengths(&moved);
        if l.len() != reference.len() {
            return Err(format!(
                "{} carriers after conjugation, {} before",
                l.len(),
                reference.len()
            ));
        }
        drift = drift.max(worst(l.iter().zip(&reference).map(|(a, b)| (a - b).abs())));
    }
    if drift >= CONJUGATION_TOL {
        return Err(format!("lengths drift by {drift:.2e} under conjugation"));
    }
    Ok(format!(
        "{} minimal carrier(s) of total {:.9}, conjugation drift {drift:.1e}",
        base.len(),
        reference[0]
    ))
}

fn presets() -> Outcome {
    let tol = Tolerance::default();
    let limit = Duration::from_secs(60);
    let start = Instant::now();
    let torus = run_preset("punctured-torus", 30, &tol).map_err(|e| e.to_string())?;
    within(limit, start.elapsed())?;
    if !torus.root.orthogonal_to_common_plane {
        return Err("torus axes not orthogonal to a common plane".into());
    }
    let n = torus.minimal_carriers.len();
    if !(1..=2).contains(&n) {
        return Err(format!("torus has {n} minimal carriers"));
    }
    let start = Instant::now();
    let sphere = run_preset("three-holed-sphere", 30, &tol).map_err(|e| e.to_string())?;
    within(limit, start.elapsed())?;
    if sphere.winning.configuration != Some(PlanarConfiguration::NonSeparating) {
        return Err(format!(
            "sphere configuration {:?}",
            sphere.winning.configuration
        ));
    }
    Ok(format!(
        "torus {n} minimal carrier(s), sphere non-separating"
    ))
}

fn scan() -> Outcome {
    let spec = ScanSpec {
        mode: ScanMode::Diagonal {
            re: (2.5, 3.5),
            im: (0.0, 0.0),
        },
        width: 64,
        height: 1,
        depth_cap: 30,
        tol: Tolerance::default(),
    };
    let first = run_scan(&spec).map_err(|e| e.to_string())?;
    let second = run_scan(&spec).map_err(|e| e.to_string())?;
    if first.pgm_bytes() != second.pgm_bytes() {
        return Err("PGM output differs between runs".into());
    }
    let mut accepted = 0;
    for cell in first
        .cells
        .iter()
        .filter(|c| c.verdict == VerdictClass::Accept)
    {
        accepted += 1;
        if !bq_test(&cell.traces, spec.depth_cap, &spec.tol).is_accept() {
            return Err(format!("column {} not accepted on its own", cell.col));
        }
    }
    Ok(format!(
        "identical PGM, {accepted} accepted pixels re-verified"
    ))
}

fn run(index: usize, name: &str, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) => {
            println!("PASS {index} {name} ({elapsed:.1?}): {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL {index} {name} ({elapsed:.1?}): {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("algebraic identities", identities),
        ("convexity", convexity),
        ("Fermat oracles", fermat_oracles),
        ("Steiner classification", steiner_classification),
        ("Q-condition fixtures", bq_fixtures),
        ("hexagon convergence", convergence),
        ("minimal carrier pipeline", main_pipeline),
        ("preset configurations", presets),
        ("scan determinism", scan),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        if !run(k + 1, name, f) {
            failed += 1;
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
