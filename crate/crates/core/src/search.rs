//! Randomized search for preservers between two spaces, with every
//! sampled operator also checked against the structural laws a preserver
//! must satisfy.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::exact::Matrix;
use crate::preserve::{self, Operator};
use crate::sampling::{self, SampleRng};
use crate::space::PolyhedralSpace;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankTally {
    pub sampled: usize,
    pub tea_preservers: usize,
    pub parallel_preservers: usize,
    pub bijective_preservers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSummary {
    pub domain: String,
    pub codomain: String,
    pub trials: usize,
    pub seed: u64,
    pub by_rank: BTreeMap<usize, RankTally>,
    /// Operators breaking a law that every preserver must obey.
    pub violations: Vec<String>,
}

impl SearchSummary {
    pub fn bijective_preservers(&self) -> usize {
        self.by_rank.values().map(|t| t.bijective_preservers).sum()
    }
}

impl fmt::Display for SearchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "search {} -> {}", self.domain, self.codomain)?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(
            f,
            "rank  sampled  tea-preservers  parallel-preservers  bijective-preservers"
        )?;
        for (rank, t) in &self.by_rank {
            writeln!(
                f,
                "{rank:>4}  {:>7}  {:>14}  {:>19}  {:>20}",
                t.sampled, t.tea_preservers, t.parallel_preservers, t.bijective_preservers
            )?;
        }
        writeln!(f, "bijective preservers: {}", self.bijective_preservers())?;
        writeln!(f, "invariant violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// A rational matrix with entries `p/q`, `q <= 3`, in `[-3, 3]`: dense,
/// sparse over `{-1, 0, 1}`, or a rank-one outer product.
pub fn sample_search_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> Matrix {
    match rng.gen_range(0..4) {
        0 | 1 => sampling::matrix(rng, rows, cols),
        2 => sampling::sparse_matrix(rng, rows, cols),
        _ => {
            let u = sampling::sparse_matrix(rng, rows, 1);
            let v = sampling::matrix(rng, 1, cols);
            u.mul(&v).expect("outer product")
        }
    }
}

struct TrialOutcome {
    rank: usize,
    tea: bool,
    parallel: bool,
    bijective: bool,
    violations: Vec<String>,
}

fn classify(op: &Operator) -> TrialOutcome {
    let tea = preserve::preserves_tea(op);
    let par = preserve::preserves_parallel(op);
    let bijective = op.is_bijective();
    let mut violations = Vec::new();
    let mut flag = |law: &str| violations.push(format!("{law}: {}", op.matrix().inline()));

    if tea.preserves && !par.preserves {
        flag("TEA preserver that does not preserve parallel pairs");
    }
    if op.rank() <= 1 && !par.preserves {
        flag("rank <= 1 operator that does not preserve parallel pairs");
    }
    if bijective && tea.preserves != par.preserves {
        flag("bijective operator with differing TEA and parallel verdicts");
    }
    if !tea.preserves && !tea.counterexample_verifies(op) {
        flag("TEA non-preserver without a verified counterexample");
    }
    if !par.preserves && !par.counterexample_verifies(op) {
        flag("parallel non-preserver without a verified counterexample");
    }
    if tea.preserves && !preserve::kernel_face_check(op).is_empty() {
        flag("TEA preserver with a kernel point inside a nonvanishing face");
    }
    if bijective && par.preserves && preserve::count_law_check(op) != Ok(true) {
        flag("bijective preserver onto a space with more dual vertices");
    }
    TrialOutcome {
        rank: op.rank(),
        tea: tea.preserves,
        parallel: par.preserves,
        bijective,
        violations,
    }
}

/// Samples `trials` operators `domain -> codomain`. Trial `i` uses a seed
/// derived from `(seed, i)`, so the summary does not depend on scheduling.
pub fn search_preservers(
    domain: Arc<PolyhedralSpace>,
    codomain: Arc<PolyhedralSpace>,
    trials: usize,
    seed: u64,
) -> SearchSummary {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::rng(sampling::derive_seed(seed, i as u64));
            let m = sample_search_matrix(&mut rng, codomain.dim(), domain.dim());
            let op = Operator::new(domain.clone(), codomain.clone(), m).expect("shapes match");
            classify(&op)
        })
        .collect();

    let mut by_rank: BTreeMap<usize, RankTally> = BTreeMap::new();
    let mut violations = Vec::new();
    for o in outcomes {
        let t = by_rank.entry(o.rank).or_default();
        t.sampled += 1;
        t.tea_preservers += o.tea as usize;
        t.parallel_preservers += o.parallel as usize;
        t.bijective_preservers += (o.bijective && o.parallel) as usize;
        violations.extend(o.violations);
    }
    SearchSummary {
        domain: domain.name().to_string(),
        codomain: codomain.name().to_string(),
        trials,
        seed,
        by_rank,
        violations,
    }
}
