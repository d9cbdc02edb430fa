//! Named property suites that exercise the decision procedures against
//! each other and against the structural laws of preservers.
//!
//! Each suite is a list of properties; a property counts its checks and
//! its failures and keeps the first failure for the report.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::catalog;
use crate::error::{Error, Result};
use crate::exact::{frac, int, Matrix, Rational, Vector};
use crate::face;
use crate::pairs::{self, PairKind};
use crate::preserve::{self, Operator};
use crate::sampling::{self, SampleRng};
use crate::search;
use crate::space::PolyhedralSpace;
use crate::sums::{self, DirectSum, SumPoint};

pub const SUITES: &[&str] = &[
    "prop21",
    "prop210",
    "corchar",
    "facet-oracle",
    "thm-intn0",
    "distinct",
    "cardpreserve",
    "pcara",
    "index-one",
    "isometry",
    "bipolar",
    "sums",
    "eps",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyResult {
    fn new(name: impl Into<String>) -> Self {
        PropertyResult {
            name: name.into(),
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn absorb(&mut self, checks: Vec<(bool, String)>) {
        for (ok, detail) in checks {
            self.check(ok, || detail);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "suite {} (seed {}): {verdict}", self.suite, self.seed)?;
        for p in &self.properties {
            let mark = if p.passed() { "ok  " } else { "FAIL" };
            writeln!(
                f,
                "  {mark} {} [{} checked, {} failed]",
                p.name, p.checked, p.failures
            )?;
            if let Some(d) = &p.first_failure {
                writeln!(f, "       first failure: {d}")?;
            }
        }
        Ok(())
    }
}

/// Seed and sample-size settings. `scale` multiplies every random sample
/// count (clamped below at one sample).
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 2024,
            scale: 1.0,
        }
    }
}

impl SuiteConfig {
    fn n(&self, base: usize) -> usize {
        ((base as f64 * self.scale).round() as usize).max(1)
    }

    fn rng(&self, stream: u64) -> SampleRng {
        sampling::rng(sampling::derive_seed(self.seed, stream))
    }
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, config)).collect();
    }
    Ok(vec![run_one(name, config)?])
}

fn run_one(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    let properties = match name {
        "prop21" => prop21(config),
        "prop210" => prop210(config),
        "corchar" => corchar(config),
        "facet-oracle" => facet_oracle(config),
        "thm-intn0" => thm_intn0(config),
        "distinct" => distinct(config),
        "cardpreserve" => cardpreserve(config),
        "pcara" => pcara(config),
        "index-one" => index_one(config),
        "isometry" => isometry(config),
        "bipolar" => bipolar(),
        "sums" => sums_suite(config),
        "eps" => eps_suite(config),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        seed: config.seed,
        properties,
    })
}

/// The five spaces used by the pair and preserver suites.
pub fn core_spaces() -> Vec<Arc<PolyhedralSpace>> {
    ["l1:2", "l1:3", "linf:2", "linf:3", "hexagon"]
        .iter()
        .map(|n| Arc::new(catalog::parse_space(n).expect("catalog entry")))
        .collect()
}

fn random_pairs(rng: &mut SampleRng, dim: usize, count: usize) -> Vec<(Vector, Vector)> {
    (0..count)
        .map(|_| {
            (
                sampling::structured_vector(rng, dim),
                sampling::structured_vector(rng, dim),
            )
        })
        .collect()
}

fn nonzero_rational(rng: &mut SampleRng) -> Rational {
    loop {
        let r = sampling::rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn prop21(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut tea = PropertyResult::new("direct and functional TEA verdicts agree");
    let mut par = PropertyResult::new("direct and functional parallel verdicts agree");
    let mut witness = PropertyResult::new("witness functionals support both vectors");
    let mut sym = PropertyResult::new("parallelism is symmetric and homogeneous");
    let mut dep = PropertyResult::new("linearly dependent vectors are parallel");
    let mut rigid = PropertyResult::new("smooth points have non-collinear parallel partners");

    for (k, space) in core_spaces().iter().enumerate() {
        let mut rng = config.rng(k as u64);
        let pairs_in = random_pairs(&mut rng, space.dim(), config.n(10_000));
        let scalars: Vec<(Rational, Rational)> = (0..pairs_in.len())
            .map(|_| (nonzero_rational(&mut rng), nonzero_rational(&mut rng)))
            .collect();
        let results: Vec<[(bool, String); 5]> = pairs_in
            .par_iter()
            .zip(scalars.par_iter())
            .map(|((x, y), (r, s))| {
                let ctx = || format!("{}: x=({x}) y=({y})", space.name());
                let td = pairs::is_tea_direct(space, x, y).unwrap();
                let tf = pairs::is_tea_functional(space, x, y).unwrap();
                let pd = pairs::is_parallel_direct(space, x, y).unwrap();
                let pf = pairs::is_parallel_functional(space, x, y).unwrap();
                let witness_ok = [&tf, &pf].iter().all(|v| {
                    if !v.holds {
                        return true;
                    }
                    let f = v.witness_functional.unwrap();
                    let lambda = Rational::from_integer(v.witness_sign.unwrap().into());
                    space.apply(f, x) == space.norm_unchecked(x)
                        && space.apply(f, &y.scale(&lambda)) == space.norm_unchecked(y)
                });
                let homog = pairs::is_parallel_direct(space, y, x).unwrap() == pd
                    && pairs::is_parallel_direct(space, &x.scale(r), &y.scale(s)).unwrap() == pd;
                let dependent = pairs::is_parallel_direct(space, x, &x.scale(r)).unwrap();
                [
                    (td == tf.holds, ctx()),
                    (pd == pf.holds, ctx()),
                    (witness_ok, ctx()),
                    (homog, format!("{} r={r} s={s}", ctx())),
                    (dependent, ctx()),
                ]
            })
            .collect();
        for [a, b, c, d, e] in results {
            tea.absorb(vec![a]);
            par.absorb(vec![b]);
            witness.absorb(vec![c]);
            sym.absorb(vec![d]);
            dep.absorb(vec![e]);
        }

        // a smooth point is a facet relative-interior point; the facet holds
        // other points parallel to it, so smoothness alone does not force
        // collinearity (no smooth point of a polytope of dimension >= 2 is
        // exposed)
        for facet in space.facets() {
            let u = facet.barycenter();
            let partner = &facet.vertex_set[0];
            rigid.check(
                space.smoothness_order(&u).unwrap() == 1
                    && pairs::is_parallel_direct(space, &u, partner).unwrap()
                    && crate::exact::rank_of(&[u.clone(), partner.clone()], space.dim()) == 2,
                || format!("{}: facet barycenter ({u})", space.name()),
            );
        }
    }

    let mut trans = PropertyResult::new("parallelism is not transitive in linf:2");
    let linf = catalog::linf(2);
    let (a, b, c) = (
        Vector::from_ints(&[1, 0]),
        Vector::from_ints(&[1, 1]),
        Vector::from_ints(&[0, 1]),
    );
    trans.check(
        pairs::is_parallel_direct(&linf, &a, &b).unwrap()
            && pairs::is_parallel_direct(&linf, &b, &c).unwrap()
            && !pairs::is_parallel_direct(&linf, &a, &c).unwrap(),
        || "(1,0) ~ (1,1) ~ (0,1) but (1,0) !~ (0,1) expected".to_string(),
    );
    vec![tea, par, witness, sym, dep, trans, rigid]
}

/// Square operator corpus on each core space, plus rectangular operators
/// between core spaces of different dimensions.
fn operator_corpus(config: &SuiteConfig, per_pair: usize) -> Vec<Operator> {
    let spaces = core_spaces();
    let mut ops = Vec::new();
    let mut stream = 100;
    for d in &spaces {
        for c in &spaces {
            let square = d.dim() == c.dim();
            if !square && !Arc::ptr_eq(d, &spaces[0]) && !Arc::ptr_eq(c, &spaces[0]) {
                continue;
            }
            let mut rng = config.rng(stream);
            stream += 1;
            for m in sampling::operator_corpus(&mut rng, c.dim(), d.dim(), per_pair) {
                ops.push(Operator::new(d.clone(), c.clone(), m).expect("shapes match"));
            }
        }
    }
    let l1 = spaces[1].clone();
    for rows in [
        &[&[1i64, 0, -1][..], &[0, 0, 0], &[1, 0, -1]][..],
        &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]],
        &[&[1, 0, 0], &[2, 0, 0], &[0, 0, 1]],
        &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]],
    ] {
        ops.push(Operator::on(l1.clone(), Matrix::from_int_rows(rows)).unwrap());
    }
    ops
}

fn prop210(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut implication = PropertyResult::new("TEA preservation implies parallel preservation");
    let mut rank_one = PropertyResult::new("rank <= 1 operators preserve parallel pairs");
    let mut cx = PropertyResult::new("every negative verdict carries a verified counterexample");
    let mut separation = PropertyResult::new("rank-one separation witness on l1:3");

    let ops = operator_corpus(config, config.n(60));
    let results: Vec<[(bool, String); 3]> = ops
        .par_iter()
        .map(|op| {
            let ctx = || {
                format!(
                    "{} -> {}: {}",
                    op.domain().name(),
                    op.codomain().name(),
                    op.matrix().inline()
                )
            };
            let tea = preserve::preserves_tea(op);
            let par = preserve::preserves_parallel(op);
            let verified = (tea.preserves || tea.counterexample_verifies(op))
                && (par.preserves || par.counterexample_verifies(op));
            [
                (!tea.preserves || par.preserves, ctx()),
                (op.rank() > 1 || par.preserves, ctx()),
                (verified, ctx()),
            ]
        })
        .collect();
    for [a, b, c] in results {
        implication.absorb(vec![a]);
        rank_one.absorb(vec![b]);
        cx.absorb(vec![c]);
    }
    let t = Operator::on(
        Arc::new(catalog::l1(3)),
        Matrix::from_int_rows(&[&[1, 0, -1], &[0, 0, 0], &[1, 0, -1]]),
    )
    .unwrap();
    separation.check(
        preserve::preserves_parallel(&t).preserves && !preserve::preserves_tea(&t).preserves,
        || "T(x,y,z) = (x-z, 0, x-z) should preserve parallel but not TEA pairs".to_string(),
    );
    vec![implication, rank_one, cx, separation]
}

/// Random bijective operators on `space`: dense or sparse nonsingular
/// matrices, with every fourth one a signed permutation times a positive
/// diagonal.
fn bijective_corpus(
    rng: &mut SampleRng,
    space: &Arc<PolyhedralSpace>,
    count: usize,
) -> Vec<Operator> {
    let n = space.dim();
    (0..count)
        .map(|i| {
            let m = if i % 4 == 0 {
                sampling::signed_permutation(rng, n)
                    .mul(&sampling::positive_diagonal(rng, n))
                    .expect("square")
            } else {
                sampling::bijective_matrix(rng, n)
            };
            Operator::on(space.clone(), m).expect("square")
        })
        .collect()
}

fn corchar(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut equiv = PropertyResult::new("bijective operators: TEA and parallel verdicts agree");
    let mut rank2 =
        PropertyResult::new("rank >= 2: parallel non-preservers have verified counterexamples");
    for (k, space) in core_spaces().iter().enumerate() {
        let mut rng = config.rng(200 + k as u64);
        let ops = bijective_corpus(&mut rng, space, config.n(200));
        let results: Vec<(bool, String)> = ops
            .par_iter()
            .map(|op| {
                let tea = preserve::preserves_tea(op).preserves;
                let par = preserve::preserves_parallel(op).preserves;
                (
                    tea == par,
                    format!("{}: {}", space.name(), op.matrix().inline()),
                )
            })
            .collect();
        equiv.absorb(results);
    }
    let ops = operator_corpus(config, config.n(40));
    let results: Vec<(bool, String)> = ops
        .par_iter()
        .filter(|op| op.rank() >= 2)
        .map(|op| {
            let par = preserve::preserves_parallel(op);
            (
                par.preserves || par.counterexample_verifies(op),
                format!(
                    "{} -> {}: {}",
                    op.domain().name(),
                    op.codomain().name(),
                    op.matrix().inline()
                ),
            )
        })
        .collect();
    rank2.absorb(results);
    vec![equiv, rank2]
}

/// Brute-force TEA preservation: all vertex pairs of every facet plus
/// `samples` random pairs from facet cones, checked with the direct norm
/// identity.
pub fn brute_force_tea(op: &Operator, rng: &mut SampleRng, samples: usize) -> bool {
    let dom = op.domain();
    let cod = op.codomain();
    let facets = dom.facets();
    for f in &facets {
        for a in &f.vertex_set {
            for b in &f.vertex_set {
                if !pairs::tea_direct(cod, &op.apply(a), &op.apply(b)) {
                    return false;
                }
            }
        }
    }
    for _ in 0..samples {
        let f = facets[rng.gen_range(0..facets.len())];
        let a = sampling::face_point(rng, &f.vertex_set)
            .scale(&frac(rng.gen_range(1..=5), rng.gen_range(1..=5)));
        let b = sampling::face_point(rng, &f.vertex_set);
        if !pairs::tea_direct(cod, &op.apply(&a), &op.apply(&b)) {
            return false;
        }
    }
    true
}

fn facet_oracle(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut agree = PropertyResult::new("facet certificates agree with brute-force pair checks");
    let mut sound = PropertyResult::new("certificates attain the norm on facet-cone samples");
    for (k, name) in ["l1:3", "linf:3"].iter().enumerate() {
        let space = Arc::new(catalog::parse_space(name).unwrap());
        let mut rng = config.rng(300 + k as u64);
        let mats = sampling::operator_corpus(&mut rng, 3, 3, config.n(200));
        let seeds: Vec<u64> = (0..mats.len()).map(|_| rng.gen()).collect();
        let results: Vec<[(bool, String); 2]> = mats
            .into_par_iter()
            .zip(seeds)
            .map(|(m, s)| {
                let op = Operator::on(space.clone(), m).unwrap();
                let mut r = sampling::rng(s);
                let report = preserve::preserves_tea(&op);
                let brute = brute_force_tea(&op, &mut r, 2000);
                let mut cert_ok = true;
                for (f, cert) in &report.facet_certificates {
                    if let preserve::FacetCertificate::Common(g) = cert {
                        let facet = space.facet(*f);
                        for _ in 0..20 {
                            let x = sampling::face_point(&mut r, &facet.vertex_set);
                            let tx = op.apply(&x);
                            cert_ok &=
                                op.codomain().apply(*g, &tx) == op.codomain().norm_unchecked(&tx);
                        }
                    }
                }
                let ctx = format!("{name}: {}", op.matrix().inline());
                [(report.preserves == brute, ctx.clone()), (cert_ok, ctx)]
            })
            .collect();
        for [a, b] in results {
            agree.absorb(vec![a]);
            sound.absorb(vec![b]);
        }
    }
    vec![agree, sound]
}

fn thm_intn0(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut dichotomy =
        PropertyResult::new("certified faces: T(F) = 0 or no kernel point in Int_r F");
    let mut smooth =
        PropertyResult::new("TEA preservers of rank p: no k-smooth kernel points for k < p");
    let mut example =
        PropertyResult::new("rank-one example: kernel meets Int_r of an uncertified facet");
    let ops = operator_corpus(config, config.n(60));
    let results: Vec<Vec<(bool, String)>> = ops
        .par_iter()
        .map(|op| {
            let ctx = || {
                format!(
                    "{} -> {}: {}",
                    op.domain().name(),
                    op.codomain().name(),
                    op.matrix().inline()
                )
            };
            let mut out = Vec::new();
            if preserve::preserves_tea(op).preserves {
                out.push((preserve::kernel_face_check(op).is_empty(), ctx()));
                out.push((preserve::rank_smooth_kernel_check(op) == Ok(true), ctx()));
            }
            out
        })
        .collect();
    for r in results {
        let mut it = r.into_iter();
        if let (Some(a), Some(b)) = (it.next(), it.next()) {
            dichotomy.absorb(vec![a]);
            smooth.absorb(vec![b]);
        }
    }
    let l1 = Arc::new(catalog::l1(3));
    let t = Operator::on(
        l1.clone(),
        Matrix::from_int_rows(&[&[1, 0, -1], &[0, 0, 0], &[1, 0, -1]]),
    )
    .unwrap();
    let facet = l1.facet(l1.find_functional(&Vector::from_ints(&[1, 1, 1])).unwrap());
    let u = Vector::new(vec![frac(1, 3); 3]);
    example.check(
        t.apply(&u).is_zero()
            && face::in_relative_interior(&l1, facet, &u)
            && !preserve::preserves_tea_on_face(&t, facet)
            && preserve::kernel_face_check(&t).is_empty(),
        || "T(1/3,1/3,1/3) = 0 inside co{e1,e2,e3}".to_string(),
    );
    vec![dichotomy, smooth, example]
}

fn distinct(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut law = PropertyResult::new("bijective preservers X -> Y have |Ext B_X*| >= |Ext B_Y*|");
    let mut none = PropertyResult::new("no bijective preserver linf:2 -> hexagon in random search");
    let dims: [&[&str]; 2] = [&["l1:2", "linf:2", "hexagon"], &["l1:3", "linf:3"]];
    let mut stream = 400;
    for group in dims {
        for d in group {
            for c in group {
                let dom = Arc::new(catalog::parse_space(d).unwrap());
                let cod = Arc::new(catalog::parse_space(c).unwrap());
                let mut rng = config.rng(stream);
                stream += 1;
                let n = dom.dim();
                let mats: Vec<Matrix> = (0..config.n(200))
                    .map(|i| {
                        if i % 2 == 0 {
                            sampling::signed_permutation(&mut rng, n)
                        } else {
                            sampling::bijective_matrix(&mut rng, n)
                        }
                    })
                    .collect();
                let results: Vec<Option<(bool, String)>> = mats
                    .into_par_iter()
                    .map(|m| {
                        let op = Operator::new(dom.clone(), cod.clone(), m).unwrap();
                        if !preserve::preserves_parallel(&op).preserves {
                            return None;
                        }
                        Some((
                            preserve::count_law_check(&op) == Ok(true),
                            format!("{d} -> {c}: {}", op.matrix().inline()),
                        ))
                    })
                    .collect();
                law.absorb(results.into_iter().flatten().collect());
            }
        }
    }
    let summary = search::search_preservers(
        Arc::new(catalog::linf(2)),
        Arc::new(catalog::hexagon()),
        config.n(20_000),
        config.seed,
    );
    none.check(summary.bijective_preservers() == 0, || summary.to_string());
    none.check(summary.violations.is_empty(), || {
        summary.violations.join("; ")
    });
    vec![law, none]
}

fn cardpreserve(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut count = PropertyResult::new("signed permutations keep |Ext J(x)| = |Ext J(Tx)|");
    let mut nonsmooth =
        PropertyResult::new("bijective preservers keep smooth and non-smooth points apart");
    let mut cones = PropertyResult::new("bijective preservers map smooth cones into smooth cones");
    for (k, name) in ["l1:3", "linf:3"].iter().enumerate() {
        let space = Arc::new(catalog::parse_space(name).unwrap());
        let mut rng = config.rng(500 + k as u64);
        let ops: Vec<(Operator, u64)> = (0..config.n(100))
            .map(|_| {
                let m = sampling::signed_permutation(&mut rng, 3);
                (Operator::on(space.clone(), m).unwrap(), rng.gen())
            })
            .collect();
        let results: Vec<(bool, String)> = ops
            .par_iter()
            .map(|(op, s)| {
                (
                    preserve::support_count_law(op, 200, *s) == Ok(true),
                    format!("{name}: {}", op.matrix().inline()),
                )
            })
            .collect();
        count.absorb(results);
    }
    for (k, space) in core_spaces().iter().enumerate() {
        let mut rng = config.rng(520 + k as u64);
        let ops = bijective_corpus(&mut rng, space, config.n(100));
        let seeds: Vec<u64> = (0..ops.len()).map(|_| rng.gen()).collect();
        let results: Vec<Option<[(bool, String); 2]>> = ops
            .par_iter()
            .zip(seeds)
            .map(|(op, s)| {
                if !preserve::preserves_parallel(op).preserves {
                    return None;
                }
                let dom = op.domain();
                let mut r = sampling::rng(s);
                let mut points: Vec<Vector> = dom.facets().iter().map(|f| f.barycenter()).collect();
                points.extend(dom.primal_vertices().iter().cloned());
                points.extend((0..100).map(|_| sampling::structured_vector(&mut r, dom.dim())));
                let ok = points.iter().all(|x| {
                    (dom.smoothness_order(x).unwrap() == 1)
                        == (op.codomain().smoothness_order(&op.apply(x)).unwrap() == 1)
                });
                let ctx = format!("{}: {}", dom.name(), op.matrix().inline());
                Some([
                    (ok, ctx.clone()),
                    (preserve::facet_image_map(op, 10, s).is_ok(), ctx),
                ])
            })
            .collect();
        for [a, b] in results.into_iter().flatten() {
            nonsmooth.absorb(vec![a]);
            cones.absorb(vec![b]);
        }
    }
    vec![count, nonsmooth, cones]
}

/// Every catalog space plus two composite sums.
pub fn all_catalog_spaces() -> Vec<PolyhedralSpace> {
    let mut out: Vec<PolyhedralSpace> = catalog::catalog_names()
        .iter()
        .map(|n| catalog::parse_space(n).unwrap())
        .collect();
    out.push(catalog::parse_space("l1(hexagon,linf:2)").unwrap());
    out.push(catalog::parse_space("linf(l1:2,hexagon)").unwrap());
    out
}

fn pcara(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut prop =
        PropertyResult::new("relative-interior decomposition postconditions on every face");
    let mut rng = config.rng(600);
    for space in all_catalog_spaces() {
        for f in space.all_faces().iter().filter(|f| f.dim >= 1) {
            let mut points = vec![f.barycenter()];
            points.extend(
                (0..config.n(2)).map(|_| sampling::interior_point(&mut rng, &f.vertex_set)),
            );
            for x in points {
                let ok = face::decompose_interior_point(&space, f, &x)
                    .map(|pts| face::validate_decomposition(&space, f, &x, &pts))
                    .unwrap_or(false);
                prop.check(ok, || {
                    format!("{}: face {:?} at ({x})", space.name(), f.active)
                });
            }
        }
    }
    vec![prop]
}

/// Points of the unit sphere: facet and face barycenters and `samples`
/// normalized random vectors.
fn sphere_points(space: &PolyhedralSpace, rng: &mut SampleRng, samples: usize) -> Vec<Vector> {
    let mut pts: Vec<Vector> = space.all_faces().iter().map(|f| f.barycenter()).collect();
    for _ in 0..samples {
        let v = sampling::structured_vector(rng, space.dim());
        let n = space.norm_unchecked(&v);
        pts.push(v.scale(&n.recip()));
    }
    pts
}

fn index_one(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut expected =
        PropertyResult::new("index one for l1:n, linf:n (n = 2, 3), not for hexagon");
    let mut cross =
        PropertyResult::new("index one iff every vertex is parallel to every sphere point");
    for (k, space) in core_spaces().iter().enumerate() {
        let lhs = pairs::has_numerical_index_one(space);
        expected.check(lhs == (space.name() != "hexagon"), || {
            space.name().to_string()
        });
        let mut rng = config.rng(700 + k as u64);
        let mut targets: Vec<Vector> = space.primal_vertices().to_vec();
        targets.extend(sphere_points(space, &mut rng, config.n(1000)));
        let rhs = space.primal_vertices().iter().all(|v| {
            targets
                .iter()
                .all(|y| pairs::is_parallel_direct(space, v, y).unwrap())
        });
        cross.check(lhs == rhs, || {
            format!(
                "{}: index-one {lhs}, parallel formulation {rhs}",
                space.name()
            )
        });
    }
    vec![expected, cross]
}

fn isometry(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut harness =
        PropertyResult::new("isometry iff bijective parallel preserver with equal vertex norms");
    let mut perms = PropertyResult::new("signed permutations of l1:3 are isometries");
    let mut dominance =
        PropertyResult::new("vertex support dominance: true for l1:3, false for prism-ball");
    let l1 = Arc::new(catalog::l1(3));
    let mut ops: Vec<Operator> = sampling::all_signed_permutations(3)
        .into_iter()
        .map(|m| Operator::on(l1.clone(), m).unwrap())
        .collect();
    for op in &ops {
        perms.check(preserve::is_isometry(op) == Ok(true), || {
            op.matrix().inline()
        });
    }
    let mut rng = config.rng(800);
    let extra = config.n(100).saturating_sub(ops.len()).max(1);
    for op in bijective_corpus(&mut rng, &l1, extra) {
        let norm = preserve::operator_norm(&op);
        ops.push(Operator::on(l1.clone(), op.matrix().scale(&norm.recip())).unwrap());
    }
    let results: Vec<(bool, String)> = ops
        .par_iter()
        .map(|op| {
            (
                preserve::isometry_characterization_check(op) == Ok(true),
                op.matrix().inline(),
            )
        })
        .collect();
    harness.absorb(results);
    dominance.check(preserve::vertex_support_dominance(&l1), || {
        "l1:3".to_string()
    });
    dominance.check(
        !preserve::vertex_support_dominance(&catalog::prism_ball()),
        || "prism-ball".to_string(),
    );
    vec![harness, perms, dominance]
}

fn bipolar() -> Vec<PropertyResult> {
    let mut prop = PropertyResult::new("polar of the polar has the same unit ball");
    let mut duals = PropertyResult::new("polar vertices are the signed dual vertices");
    for space in all_catalog_spaces() {
        let polar = space.polar().unwrap();
        let mut signed: Vec<Vector> = space.signed_duals().map(|f| space.functional(f)).collect();
        signed.sort();
        duals.check(polar.primal_vertices() == signed.as_slice(), || {
            space.name().to_string()
        });
        let back = polar.polar().unwrap();
        prop.check(back.primal_vertices() == space.primal_vertices(), || {
            space.name().to_string()
        });
    }
    vec![prop, duals]
}

/// A component pair with zero components and dependent components mixed
/// in, so that every rule branch is exercised.
fn sum_component(rng: &mut SampleRng, dim: usize, other: &Vector) -> Vector {
    match rng.gen_range(0..6) {
        0 => Vector::zeros(dim),
        1 if other.dim() == dim && !other.is_zero() => other.scale(&nonzero_rational(rng)),
        _ => sampling::structured_vector(rng, dim),
    }
}

fn random_sum_pair(rng: &mut SampleRng, left: usize, right: usize) -> (SumPoint, SumPoint) {
    loop {
        let x1 = sum_component(rng, left, &Vector::zeros(0));
        let y1 = sum_component(rng, right, &Vector::zeros(0));
        let x2 = sum_component(rng, left, &x1);
        let y2 = sum_component(rng, right, &y1);
        let z1 = SumPoint::new(x1, y1);
        let z2 = SumPoint::new(x2, y2);
        if !z1.is_zero() && !z2.is_zero() {
            return (z1, z2);
        }
    }
}

fn sums_suite(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut l1_rules = PropertyResult::new("l1-sum rules agree with the sum norm");
    let mut linf_rules = PropertyResult::new("linf-sum rules agree with the sum norm");
    let mut necessity = PropertyResult::new("numeric p-sum pairs have exact component pairs");
    let mut structural =
        PropertyResult::new("structural p-sum verdicts agree with the numeric evaluator");
    let factors = ["l1:2", "linf:2", "hexagon"];
    let mut stream = 900;
    for a in factors {
        for b in factors {
            let x = catalog::parse_space(a).unwrap();
            let y = catalog::parse_space(b).unwrap();
            let l1 = DirectSum::l1(&x, &y).unwrap();
            let linf = DirectSum::linf(&x, &y).unwrap();
            let mut rng = config.rng(stream);
            stream += 1;
            let cases: Vec<(SumPoint, SumPoint)> = (0..config.n(2_000))
                .map(|_| random_sum_pair(&mut rng, x.dim(), y.dim()))
                .collect();
            let results: Vec<[bool; 4]> = cases
                .par_iter()
                .map(|(z1, z2)| {
                    let (v1, v2) = (z1.to_vector(), z2.to_vector());
                    let mut rules = [true; 2];
                    for (slot, sum) in [&l1, &linf].into_iter().enumerate() {
                        for kind in [PairKind::Tea, PairKind::Parallel] {
                            let rule = if slot == 0 {
                                sums::l1_sum_pair_rules(sum, z1, z2, kind)
                            } else {
                                sums::linf_sum_pair_rules(sum, z1, z2, kind)
                            }
                            .unwrap();
                            let direct = pairs::pair_direct(sum.space(), &v1, &v2, kind).unwrap();
                            let witness_ok = !rule.holds
                                || rule.witness_functional.is_some_and(|f| {
                                    let lambda = Rational::from_integer(
                                        rule.witness_sign.unwrap_or(1).into(),
                                    );
                                    let b = v2.scale(&lambda);
                                    sum.space().apply(f, &v1) == sum.space().norm_unchecked(&v1)
                                        && sum.space().apply(f, &b)
                                            == sum.space().norm_unchecked(&b)
                                });
                            rules[slot] &= rule.holds == direct && witness_ok;
                        }
                    }
                    let nonzero = !(z1.left.is_zero()
                        || z1.right.is_zero()
                        || z2.left.is_zero()
                        || z2.right.is_zero());
                    let mut nec = true;
                    let mut agree = true;
                    for p in [1.5, 2.0, 3.0] {
                        for kind in [PairKind::Tea, PairKind::Parallel] {
                            let numeric = sums::p_sum_numeric(&x, &y, p, z1, z2, kind, 1e-9);
                            if nonzero && numeric.holds {
                                nec &= pairs::pair_direct(&x, &z1.left, &z2.left, kind).unwrap()
                                    && pairs::pair_direct(&y, &z1.right, &z2.right, kind).unwrap();
                            }
                            let verdict =
                                sums::p_sum_pair_test(&x, &y, p, z1, z2, kind, 1e-9).unwrap();
                            if !verdict.is_numeric() {
                                agree &= verdict.holds == numeric.holds;
                            }
                        }
                    }
                    [rules[0], rules[1], nec, agree]
                })
                .collect();
            for ((z1, z2), flags) in cases.iter().zip(results) {
                let detail = || format!("{a} + {b}: z1={z1} z2={z2}");
                for (prop, ok) in [
                    &mut l1_rules,
                    &mut linf_rules,
                    &mut necessity,
                    &mut structural,
                ]
                .into_iter()
                .zip(flags)
                {
                    prop.check(ok, detail);
                }
            }
        }
    }
    vec![l1_rules, linf_rules, necessity, structural]
}

fn eps_suite(config: &SuiteConfig) -> Vec<PropertyResult> {
    let mut zero = PropertyResult::new("0-orthogonality is Birkhoff-James orthogonality");
    let mut implication =
        PropertyResult::new("sampled eps-orthogonality preservers preserve TEA pairs");
    let eps = frac(1, 100);
    for (k, space) in core_spaces().iter().enumerate() {
        let mut rng = config.rng(1000 + k as u64);
        let cases = random_pairs(&mut rng, space.dim(), config.n(1000));
        let results: Vec<(bool, String)> = cases
            .par_iter()
            .map(|(x, y)| {
                (
                    pairs::is_eps_orthogonal(space, x, y, &int(0)).unwrap()
                        == pairs::is_bj_orthogonal(space, x, y).unwrap(),
                    format!("{}: x=({x}) y=({y})", space.name()),
                )
            })
            .collect();
        zero.absorb(results);
    }
    let spaces: Vec<Arc<PolyhedralSpace>> =
        core_spaces().into_iter().filter(|s| s.dim() == 2).collect();
    let mut ops = Vec::new();
    for (k, d) in spaces.iter().enumerate() {
        for c in &spaces {
            let mut rng = config.rng(1100 + k as u64);
            for m in sampling::operator_corpus(&mut rng, 2, 2, config.n(30)) {
                ops.push(Operator::new(d.clone(), c.clone(), m).unwrap());
            }
        }
    }
    let results: Vec<Option<(bool, String)>> = ops
        .par_iter()
        .enumerate()
        .map(|(i, op)| {
            let keeps =
                preserve::preserves_eps_orthogonality_sampled(op, &eps, 12, i as u64).unwrap();
            keeps.then(|| {
                (
                    preserve::preserves_tea(op).preserves,
                    format!(
                        "{} -> {}: {}",
                        op.domain().name(),
                        op.codomain().name(),
                        op.matrix().inline()
                    ),
                )
            })
        })
        .collect();
    implication.absorb(results.into_iter().flatten().collect());
    if implication.checked == 0 {
        implication.first_failure = None;
    }
    vec![zero, implication]
}
