//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use polypar::exact::{frac, int, Matrix};
use polypar::face;
use polypar::pairs::{self, PairKind};
use polypar::preserve::{self, Operator};
use polypar::sampling;
use polypar::suites::{self, SuiteConfig};
use polypar::sums::{self, DirectSum, SumPoint};
use polypar::{catalog, PolyhedralSpace, Vector};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn v(values: &[i64]) -> Vector {
    Vector::from_ints(values)
}

fn rows(rows: &[&[i64]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
}

fn l1_3() -> Arc<PolyhedralSpace> {
    Arc::new(catalog::l1(3))
}

fn c1a() -> Outcome {
    let s = catalog::linf(2);
    let checks = [
        pairs::is_parallel_direct(&s, &v(&[1, 0]), &v(&[1, 1])) == Ok(true),
        pairs::is_parallel_direct(&s, &v(&[1, 0]), &v(&[0, 1])) == Ok(false),
        pairs::is_tea_direct(&s, &v(&[1, 1]), &v(&[1, -1])) == Ok(true),
        pairs::is_tea_direct(&s, &v(&[1, 0]), &Vector::new(vec![int(1), frac(1, 2)])) == Ok(true),
    ];
    outcome(checks.iter().all(|&c| c), format!("{checks:?}"))
}

fn c1b() -> Outcome {
    let op = Operator::on(l1_3(), rows(&[&[1, 0, -1], &[0, 0, 0], &[1, 0, -1]])).unwrap();
    let par = preserve::preserves_parallel(&op);
    let tea = preserve::preserves_tea(&op);
    let (a, b) = (v(&[2, 1, 1]), v(&[1, 1, 2]));
    let cx_matches = tea
        .counterexample
        .as_ref()
        .is_some_and(|c| (c.x == a && c.y == b) || (c.x == b && c.y == a));
    let third = Vector::new(vec![frac(1, 3); 3]);
    let facet = face::minimal_face(op.domain(), &third).unwrap();
    let simplex = {
        let mut e = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        e.sort();
        e
    };
    let interior =
        facet.vertex_set == simplex && face::in_relative_interior(op.domain(), &facet, &third);
    let ok = par.preserves
        && op.rank() == 1
        && !tea.preserves
        && cx_matches
        && tea.counterexample_verifies(&op)
        && op.apply(&third).is_zero()
        && interior;
    let cx = tea
        .counterexample
        .as_ref()
        .map(|c| format!("({}),({})", c.x, c.y));
    outcome(
        ok,
        format!(
            "parallel {} tea {} counterexample {cx:?}",
            par.preserves, tea.preserves
        ),
    )
}

fn c1c() -> Outcome {
    let op = Operator::on(l1_3(), rows(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]])).unwrap();
    let s = op.domain();
    let par = preserve::preserves_parallel(&op).preserves;
    let k1 = s.smoothness_order(&v(&[1, 1, 1])).unwrap();
    let k2 = s.smoothness_order(&v(&[1, 0, 1])).unwrap();
    outcome(
        par && k1 == 1 && k2 == 2,
        format!("parallel {par}, orders {k1}, {k2}"),
    )
}

fn c1d() -> Outcome {
    let s = catalog::l1(3);
    let k1 = s.smoothness_order(&v(&[1, 0, 0])).unwrap();
    let k2 = s.smoothness_order(&v(&[1, 2, 0])).unwrap();
    outcome(k1 == 3 && k2 == 2, format!("orders {k1}, {k2}"))
}

fn c1e() -> Outcome {
    let sum = DirectSum::l1(&catalog::l1(2), &catalog::l1(2)).unwrap();
    let z1 = SumPoint::new(v(&[1, 0]), v(&[0, 1]));
    let z2 = SumPoint::new(
        Vector::new(vec![frac(1, 2), frac(1, 2)]),
        Vector::new(vec![frac(1, 2), frac(-1, 2)]),
    );
    let components = pairs::is_parallel_direct(sum.left(), &z1.left, &z2.left).unwrap()
        && pairs::is_parallel_direct(sum.right(), &z1.right, &z2.right).unwrap();
    let (a, b) = (z1.to_vector(), z2.to_vector());
    let s = sum.space();
    let norms = [
        s.norm(&(&a + &b)).unwrap(),
        s.norm(&(&a - &b)).unwrap(),
        s.norm(&a).unwrap(),
        s.norm(&b).unwrap(),
    ];
    let parallel = pairs::is_parallel_direct(s, &a, &b).unwrap();
    let rule = sums::l1_sum_pair_rules(&sum, &z1, &z2, PairKind::Parallel).unwrap();
    let ok = components && norms == [int(3), int(3), int(2), int(2)] && !parallel && !rule.holds;
    let shown: Vec<String> = norms.iter().map(|n| n.to_string()).collect();
    outcome(
        ok,
        format!(
            "component pairs parallel {components}, norms {}, parallel {parallel}",
            shown.join(", ")
        ),
    )
}

fn c1f() -> Outcome {
    let l1 = catalog::l1(2);
    let z1 = SumPoint::new(v(&[1, 0]), v(&[3, 0]));
    let z2 = SumPoint::new(v(&[2, 0]), v(&[1, 0]));
    let left_tea = pairs::is_tea_direct(&l1, &z1.left, &z2.left).unwrap();
    let right_tea = pairs::is_tea_direct(&l1, &z1.right, &z2.right).unwrap();
    let mut ok = left_tea && right_tea;
    let mut detail = format!("component TEA {left_tea}/{right_tea};");
    for p in [1.5, 2.0, 3.0] {
        let verdict =
            sums::p_sum_pair_test(&l1, &l1, p, &z1, &z2, PairKind::Parallel, 1e-9).unwrap();
        ok &= !verdict.holds && verdict.is_numeric();
        detail.push_str(&format!(" p={p}: {verdict};"));
    }
    outcome(ok, detail)
}

fn c1() -> Vec<(&'static str, Outcome)> {
    let start = Instant::now();
    let mut out = vec![
        ("1a", c1a()),
        ("1b", c1b()),
        ("1c", c1c()),
        ("1d", c1d()),
        ("1e", c1e()),
        ("1f", c1f()),
    ];
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        for (_, o) in &mut out {
            o.ok = false;
            o.detail
                .push_str(&format!(" (criterion 1 took {elapsed:?}, limit 1 s)"));
        }
    }
    out
}

fn c2() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (k, name) in ["l1:2", "l1:3", "linf:2", "linf:3", "hexagon"]
        .iter()
        .enumerate()
    {
        let space = catalog::parse_space(name).unwrap();
        let mut rng = sampling::rng(sampling::derive_seed(20_000, k as u64));
        let start = Instant::now();
        let mut disagreements = 0;
        let mut positives = 0;
        for _ in 0..10_000 {
            let x = sampling::structured_vector(&mut rng, space.dim());
            let y = if rng.gen_range(0..4) == 0 {
                x.scale(&sampling::rational(&mut rng))
            } else {
                sampling::structured_vector(&mut rng, space.dim())
            };
            if y.is_zero() {
                continue;
            }
            for kind in [PairKind::Tea, PairKind::Parallel] {
                let direct = pairs::pair_direct(&space, &x, &y, kind).unwrap();
                let functional = pairs::pair_functional(&space, &x, &y, kind).unwrap();
                disagreements += (direct != functional.holds) as usize;
                positives += direct as usize;
            }
        }
        let elapsed = start.elapsed();
        ok &= disagreements == 0 && elapsed < Duration::from_secs(10);
        detail.push(format!(
            "{name}: {disagreements} disagreements, {positives} positives, {elapsed:.2?}"
        ));
    }
    outcome(ok, detail.join("; "))
}

/// Independent integer oracle for the facet criterion: explicit facet
/// lists of the ℓ₁ and ℓ∞ cubes, norms in `i128`.
mod oracle {
    use super::*;

    #[derive(Clone, Copy)]
    pub enum Norm {
        L1,
        Linf,
    }

    pub fn norm(kind: Norm, x: &[i128; 3]) -> i128 {
        match kind {
            Norm::L1 => x.iter().map(|a| a.abs()).sum(),
            Norm::Linf => x.iter().map(|a| a.abs()).max().unwrap(),
        }
    }

    pub fn tea(kind: Norm, x: &[i128; 3], y: &[i128; 3]) -> bool {
        let s = [x[0] + y[0], x[1] + y[1], x[2] + y[2]];
        norm(kind, &s) == norm(kind, x) + norm(kind, y)
    }

    pub fn vertices(kind: Norm) -> Vec<[i128; 3]> {
        match kind {
            Norm::L1 => (0..3)
                .flat_map(|i| {
                    [1, -1].map(|s| {
                        let mut v = [0; 3];
                        v[i] = s;
                        v
                    })
                })
                .collect(),
            Norm::Linf => (0..8)
                .map(|m| [0, 1, 2].map(|i| if m >> i & 1 == 1 { -1 } else { 1 }))
                .collect(),
        }
    }

    pub fn facets(kind: Norm) -> Vec<Vec<[i128; 3]>> {
        match kind {
            Norm::L1 => (0..8)
                .map(|m| {
                    (0..3)
                        .map(|i| {
                            let mut v = [0; 3];
                            v[i] = if m >> i & 1 == 1 { -1 } else { 1 };
                            v
                        })
                        .collect()
                })
                .collect(),
            Norm::Linf => (0..3)
                .flat_map(|i| {
                    [1, -1].map(|s| {
                        vertices(Norm::Linf)
                            .into_iter()
                            .filter(|v| v[i] == s)
                            .collect()
                    })
                })
                .collect(),
        }
    }

    /// The matrix scaled by the lcm of its denominators, as integers.
    pub fn integer_matrix(m: &Matrix) -> [[i128; 3]; 3] {
        let mut scale = 1i128;
        for i in 0..3 {
            for j in 0..3 {
                let d = i128::try_from(m.get(i, j).denom()).unwrap();
                scale = scale / gcd(scale, d) * d;
            }
        }
        [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| {
                let e = m.get(i, j);
                let n = i128::try_from(e.numer()).unwrap();
                let d = i128::try_from(e.denom()).unwrap();
                n * (scale / d)
            })
        })
    }

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    fn apply(m: &[[i128; 3]; 3], x: &[i128; 3]) -> [i128; 3] {
        [0, 1, 2].map(|i| (0..3).map(|j| m[i][j] * x[j]).sum())
    }

    fn combine(points: &[[i128; 3]], weights: &[i128]) -> [i128; 3] {
        let mut out = [0; 3];
        for (p, w) in points.iter().zip(weights) {
            for k in 0..3 {
                out[k] += w * p[k];
            }
        }
        out
    }

    /// Whether every TEA pair among the vertices, and `samples` random
    /// pairs from facet cones, has TEA images.
    pub fn preserves_tea(
        kind: Norm,
        m: &Matrix,
        rng: &mut sampling::SampleRng,
        samples: usize,
    ) -> bool {
        let t = integer_matrix(m);
        let verts = vertices(kind);
        for a in &verts {
            for b in &verts {
                if tea(kind, a, b) && !tea(kind, &apply(&t, a), &apply(&t, b)) {
                    return false;
                }
            }
        }
        let facets = facets(kind);
        for _ in 0..samples {
            let f = &facets[rng.gen_range(0..facets.len())];
            let mut draw = || loop {
                let w: Vec<i128> = f.iter().map(|_| rng.gen_range(0..10)).collect();
                if w.iter().any(|&x| x > 0) {
                    return combine(f, &w);
                }
            };
            let (x, y) = (draw(), draw());
            assert!(tea(kind, &x, &y), "facet-cone points must be TEA");
            if !tea(kind, &apply(&t, &x), &apply(&t, &y)) {
                return false;
            }
        }
        true
    }
}

fn c3() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (k, (name, kind)) in [("l1:3", oracle::Norm::L1), ("linf:3", oracle::Norm::Linf)]
        .into_iter()
        .enumerate()
    {
        let space = Arc::new(catalog::parse_space(name).unwrap());
        let mut rng = sampling::rng(sampling::derive_seed(30_000, k as u64));
        let corpus = sampling::operator_corpus(&mut rng, 3, 3, 200);
        let mut disagreements = 0;
        let mut preservers = 0;
        for m in corpus {
            let op = Operator::on(space.clone(), m.clone()).unwrap();
            let report = preserve::preserves_tea(&op);
            let brute = oracle::preserves_tea(kind, &m, &mut rng, 10_000);
            if report.preserves != brute
                || (!report.preserves && !report.counterexample_verifies(&op))
            {
                disagreements += 1;
            }
            preservers += report.preserves as usize;
        }
        ok &= disagreements == 0 && preservers > 0;
        detail.push(format!(
            "{name}: 200 operators, {preservers} preservers, {disagreements} disagreements"
        ));
    }
    outcome(ok, detail.join("; "))
}

fn run_suites(names: &[&str]) -> Outcome {
    let config = SuiteConfig::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for name in names {
        for report in suites::run_suite(name, &config).unwrap() {
            ok &= report.passed();
            let checked: usize = report.properties.iter().map(|p| p.checked).sum();
            let failed: usize = report.properties.iter().map(|p| p.failures).sum();
            detail.push(format!("{name} {checked}/{failed}"));
            if !report.passed() {
                eprint!("{report}");
            }
        }
    }
    outcome(ok, format!("suite checked/failed: {}", detail.join(", ")))
}

fn c4() -> Outcome {
    run_suites(&[
        "prop210",
        "corchar",
        "thm-intn0",
        "distinct",
        "cardpreserve",
        "pcara",
    ])
}

fn sphere_point(space: &PolyhedralSpace, rng: &mut sampling::SampleRng) -> Vector {
    let x = sampling::vector(rng, space.dim());
    let n = space.norm(&x).unwrap();
    x.scale(&n.recip())
}

fn c5() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    let spaces = [
        (catalog::l1(2), true),
        (catalog::l1(3), true),
        (catalog::linf(2), true),
        (catalog::linf(3), true),
        (catalog::hexagon(), false),
    ];
    for (k, (space, expected)) in spaces.iter().enumerate() {
        let index_one = pairs::has_numerical_index_one(space);
        let mut rng = sampling::rng(sampling::derive_seed(50_000, k as u64));
        let mut targets: Vec<Vector> = space.primal_vertices().to_vec();
        targets.extend((0..1000).map(|_| sphere_point(space, &mut rng)));
        let formulation = space.primal_vertices().iter().all(|v| {
            targets
                .iter()
                .all(|y| pairs::is_parallel_direct(space, v, y).unwrap())
        });
        ok &= index_one == *expected && formulation == index_one;
        detail.push(format!("{}: {index_one}/{formulation}", space.name()));
    }
    outcome(
        ok,
        format!("index one / parallel formulation: {}", detail.join(", ")),
    )
}

fn c6() -> Outcome {
    let space = l1_3();
    let mut ops: Vec<Operator> = sampling::all_signed_permutations(3)
        .into_iter()
        .map(|m| Operator::on(space.clone(), m).unwrap())
        .collect();
    let mut rng = sampling::rng(60_000);
    while ops.len() < 100 {
        let m = sampling::bijective_matrix(&mut rng, 3);
        let op = Operator::on(space.clone(), m.clone()).unwrap();
        let norm = preserve::operator_norm(&op);
        ops.push(Operator::on(space.clone(), m.scale(&norm.recip())).unwrap());
    }
    let mut holds = 0;
    let mut isometries = 0;
    for op in &ops {
        holds += (preserve::isometry_characterization_check(op) == Ok(true)) as usize;
        isometries += (preserve::is_isometry(op) == Ok(true)) as usize;
    }
    let dominance = preserve::vertex_support_dominance(&space);
    outcome(
        holds == ops.len() && isometries >= 48 && dominance,
        format!(
            "{holds}/{} characterizations hold, {isometries} isometries, dominance {dominance}",
            ops.len()
        ),
    )
}

fn c7() -> Outcome {
    let mut failures = Vec::new();
    let spaces = suites::all_catalog_spaces();
    for space in &spaces {
        let polar = space.polar().unwrap();
        let mut signed: Vec<Vector> = space.signed_duals().map(|f| space.functional(f)).collect();
        signed.sort();
        let back = polar.polar().unwrap();
        if polar.primal_vertices() != signed.as_slice()
            || back.primal_vertices() != space.primal_vertices()
        {
            failures.push(space.name().to_string());
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} spaces, failures {failures:?}", spaces.len()),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = c1();
    type Check = (&'static str, fn() -> Outcome);
    let rest: [Check; 6] = [
        ("2", c2),
        ("3", c3),
        ("4", c4),
        ("5", c5),
        ("6", c6),
        ("7", c7),
    ];
    for (id, f) in rest {
        let start = Instant::now();
        let mut o = f();
        o.detail.push_str(&format!(" [{:.2?}]", start.elapsed()));
        results.push((id, o));
    }
    let mut all = true;
    for (id, o) in &results {
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("{mark} {id}: {}", o.detail);
        all &= o.ok;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
