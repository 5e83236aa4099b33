//! Exhaustive and seeded invariant suites behind `zsram check`. Each suite can run with
//! a deliberate fault so the harness itself is tested.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::abelian::{
    egz_witness, enumerate_subgroups, generated_bound_check, groups_up_to, kneser_check, psi_with_representatives,
    AbelianGroup, ElementSet, FiniteAbelianGroup, QuotientGroup, SubgroupLattice,
};
use crate::colouring::{EdgeColouring, VertexColouring};
use crate::error::{Error, Result};
use crate::graphs::{extract_blueprints, generate, plan_violations, Graph};
use crate::realization::{evaluate_function, Realization};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Kneser,
    Psi,
    Algebra2,
    Egz,
    Blueprints,
    Realization,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Kneser,
        Suite::Psi,
        Suite::Algebra2,
        Suite::Egz,
        Suite::Blueprints,
        Suite::Realization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kneser => "kneser",
            Suite::Psi => "psi",
            Suite::Algebra2 => "algebra2",
            Suite::Egz => "egz",
            Suite::Blueprints => "blueprints",
            Suite::Realization => "realization",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s || (s == "realization-oracle" && *x == Suite::Realization))
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Size caps; `None` means the suite default.
#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub max_order: Option<u32>,
    pub max_x: Option<usize>,
    /// Random cases on top of the exhaustive part.
    pub random_cases: Option<usize>,
    pub instances: Option<usize>,
    pub vertices: Option<usize>,
    pub seed: u64,
    /// Corrupt the computation under test; the suite must then report violations.
    pub fault: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: u64,
    /// At most a handful of counterexamples, with the total count.
    pub violations: Vec<String>,
    pub violation_count: u64,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const KEEP: usize = 5;

struct Tally {
    cases: u64,
    count: u64,
    kept: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            count: 0,
            kept: Vec::new(),
        }
    }

    fn case(&mut self, problem: Option<String>) {
        self.cases += 1;
        if let Some(p) = problem {
            self.count += 1;
            if self.kept.len() < KEEP {
                self.kept.push(p);
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.count += other.count;
        for p in other.kept {
            if self.kept.len() < KEEP {
                self.kept.push(p);
            }
        }
        self
    }
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteReport> {
    let started = Instant::now();
    let tally = match suite {
        Suite::Kneser => kneser_suite(params.max_order.unwrap_or(8), params.fault)?,
        Suite::Psi => psi_suite(params.max_order.unwrap_or(16), params.fault)?,
        Suite::Algebra2 => algebra2_suite(
            params.max_order.unwrap_or(16),
            params.max_x.unwrap_or(3),
            params.random_cases.unwrap_or(10_000),
            params.seed,
            params.fault,
        )?,
        Suite::Egz => egz_suite(params.random_cases.unwrap_or(100_000), params.seed, params.fault)?,
        Suite::Blueprints => blueprint_suite(
            params.instances.unwrap_or(20),
            params.vertices.unwrap_or(3000),
            params.seed,
            params.fault,
        )?,
        Suite::Realization => realization_suite(params.instances.unwrap_or(200), params.seed, params.fault)?,
    };
    Ok(SuiteReport {
        suite,
        cases: tally.cases,
        violations: tally.kept,
        violation_count: tally.count,
        elapsed: started.elapsed(),
    })
}

/// Every nonempty pair `A, B` in every group of order at most `max_order`.
fn kneser_suite(max_order: u32, fault: bool) -> Result<Tally> {
    let mut tally = Tally::new();
    for group in groups_up_to(max_order) {
        let lattice = SubgroupLattice::new(&group)?;
        let n = group.order();
        let masks = 1u64 << n;
        let part = (1..masks)
            .into_par_iter()
            .map(|a| {
                let mut t = Tally::new();
                let sa = ElementSet::from_mask(n, a);
                for b in 1..masks {
                    let sb = ElementSet::from_mask(n, b);
                    let r = kneser_check(&lattice, &sa, &sb).expect("nonempty sets");
                    let ok = if fault {
                        r.sum_size >= sa.len() + sb.len()
                    } else {
                        r.holds()
                    };
                    t.case((!ok).then(|| {
                        format!(
                            "{group}: A = {:?}, B = {:?}, |A+B| = {}",
                            sa.labels(&group),
                            sb.labels(&group),
                            r.sum_size
                        )
                    }));
                }
                t
            })
            .reduce(Tally::new, Tally::merge);
        tally = tally.merge(part);
    }
    Ok(tally)
}

/// Every `H′ ≤ Γ` and every `H ≤ Γ/H′`: the lift has order `|H|·|H′|`, is a subgroup, and
/// does not depend on the chosen representatives.
fn psi_suite(max_order: u32, fault: bool) -> Result<Tally> {
    let mut tally = Tally::new();
    for group in groups_up_to(max_order) {
        for inner in enumerate_subgroups(&group)? {
            let q = QuotientGroup::new(&group, &inner)?;
            for sub in enumerate_subgroups(&q)? {
                let canonical: Vec<usize> = sub.members().iter().map(|x| q.representative(x)).collect();
                let lift = |reps: &[usize]| -> Result<ElementSet> {
                    let mut m = psi_with_representatives(&sub, &q, reps)?.members().clone();
                    if fault && m.len() > 1 {
                        let last = m.iter().last().expect("nonempty");
                        m.remove(last);
                    }
                    Ok(m)
                };
                let base = lift(&canonical)?;
                let mut problem = None;
                if base.len() != sub.order() * inner.order() {
                    problem = Some(format!(
                        "{group}: lift of order-{} subgroup over |H′| = {} has {} elements",
                        sub.order(),
                        inner.order(),
                        base.len()
                    ));
                } else if base.iter().any(|a| base.iter().any(|b| !base.contains(group.sub(a, b)))) {
                    problem = Some(format!("{group}: lift is not closed"));
                } else {
                    // every other choice of representatives, shifted by the last element of H′
                    let shift = inner.elements().last().copied().unwrap_or(0);
                    let other: Vec<usize> = canonical.iter().map(|&r| group.add(r, shift)).collect();
                    if lift(&other)? != base {
                        problem = Some(format!("{group}: lift depends on the representatives"));
                    }
                }
                tally.case(problem);
            }
        }
    }
    Ok(tally)
}

/// `|⟨X⟩|·K ≤ |Γ|·κ^|X|` for every κ dividing the exponent: all `|X| ≤ max_x`, plus random
/// four-element sets.
fn algebra2_suite(max_order: u32, max_x: usize, random: usize, seed: u64, fault: bool) -> Result<Tally> {
    let mut tally = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let check = |group: &AbelianGroup, kappa: u64, x: &[usize]| -> Option<String> {
        let r = generated_bound_check(group, kappa, x).expect("κ ≥ 1");
        let ok = if fault {
            let distinct = x.iter().collect::<BTreeSet<_>>().len();
            let rhs = num_bigint::BigUint::from(group.order())
                * num_bigint::BigUint::from(kappa).pow(distinct.saturating_sub(1) as u32);
            r.lhs <= rhs
        } else {
            r.holds
        };
        (!ok).then(|| format!("{group}, κ = {kappa}, X = {x:?}"))
    };
    let groups = groups_up_to(max_order);
    for group in &groups {
        let exp = group.exponent();
        for kappa in (1..=exp).filter(|k| exp % k == 0) {
            for size in 0..=max_x {
                for x in (0..group.order()).combinations(size) {
                    tally.case(check(group, kappa, &x));
                }
            }
        }
    }
    for _ in 0..random {
        let group = &groups[rng.gen_range(0..groups.len())];
        let exp = group.exponent();
        let divisors: Vec<u64> = (1..=exp).filter(|k| exp.is_multiple_of(*k)).collect();
        let kappa = divisors[rng.gen_range(0..divisors.len())];
        let x: Vec<usize> = (0..4).map(|_| rng.gen_range(0..group.order())).collect();
        tally.case(check(group, kappa, &x));
    }
    Ok(tally)
}

/// All `4⁷` sequences for `m = 4`, then random sequences of length `2m − 1` for `m = 5, 6`.
fn egz_suite(random: usize, seed: u64, fault: bool) -> Result<Tally> {
    let verify = |m: u32, seq: &[u32]| -> Option<String> {
        let w = match egz_witness(m, seq) {
            Ok(Some(w)) => w,
            _ => return Some(format!("m = {m}: no witness for {seq:?}")),
        };
        let sum: u32 = w.iter().map(|&i| seq[i]).sum();
        let target = if fault { 1 } else { 0 };
        let distinct = w.iter().collect::<BTreeSet<_>>().len() == w.len();
        (w.len() != m as usize || !distinct || sum % m != target).then(|| format!("m = {m}: bad witness {w:?} for {seq:?}"))
    };
    let mut tally = Tally::new();
    let m = 4u32;
    let len = 2 * m as usize - 1;
    let total = (m as u64).pow(len as u32);
    let exhaustive = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let mut seq = vec![0u32; len];
            for s in seq.iter_mut() {
                *s = (code % m as u64) as u32;
                code /= m as u64;
            }
            let mut t = Tally::new();
            t.case(verify(m, &seq));
            t
        })
        .reduce(Tally::new, Tally::merge);
    tally = tally.merge(exhaustive);
    for m in [5u32, 6] {
        let part = (0..random)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 40) ^ i as u64);
                let seq: Vec<u32> = (0..2 * m - 1).map(|_| rng.gen_range(0..m)).collect();
                let mut t = Tally::new();
                t.case(verify(m, &seq));
                t
            })
            .reduce(Tally::new, Tally::merge);
        tally = tally.merge(part);
    }
    Ok(tally)
}

/// Random 3-regular graphs; each plan must satisfy every partition clause.
fn blueprint_suite(instances: usize, vertices: usize, seed: u64, fault: bool) -> Result<Tally> {
    let results: Vec<Result<Option<String>>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let graph = generate::random_regular(3, vertices, s)?;
            let mut plan = extract_blueprints(&graph)?;
            if fault {
                plan.parts.pop();
            }
            let problems = plan_violations(&graph, &plan);
            Ok((!problems.is_empty()).then(|| format!("seed {s}: {}", problems.iter().take(3).join("; "))))
        })
        .collect();
    let mut tally = Tally::new();
    for r in results {
        tally.case(r?);
    }
    Ok(tally)
}

/// Chained realizations of up to four grids of width at most three, compared with full
/// enumeration of their families.
fn realization_suite(instances: usize, seed: u64, fault: bool) -> Result<Tally> {
    let results: Vec<Result<Option<String>>> = (0..instances)
        .into_par_iter()
        .map(|i| realization_instance(seed.wrapping_add(i as u64), fault))
        .collect();
    let mut tally = Tally::new();
    for r in results {
        tally.case(r?);
    }
    Ok(tally)
}

/// Target graph: `k` paths `a−x−y−b` with free middle `x, y`, plus edges between the
/// pinned ends of consecutive paths.
pub fn realization_instance(seed: u64, fault: bool) -> Result<Option<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = ["Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z2xZ4"];
    let group: AbelianGroup = groups[rng.gen_range(0..groups.len())].parse()?;
    let k = rng.gen_range(1..=4usize);
    let mut edges = Vec::new();
    for j in 0..k {
        let b = 4 * j;
        edges.extend([(b, b + 1), (b + 1, b + 2), (b + 2, b + 3)]);
        if j > 0 && rng.gen_bool(0.5) {
            edges.push((b - 1, b));
        }
    }
    let graph = Graph::new(4 * k, edges)?;
    let t = 10 * k;
    let c = EdgeColouring::random(&group, t, &mut rng);
    let vc = VertexColouring::from_values(&group, (0..t).map(|_| rng.gen_range(0..group.order())).collect())?;
    let mut family = Realization::empty(&group);
    for j in 0..k {
        let p = 10 * j;
        let w1 = rng.gen_range(1..=3);
        let w2 = rng.gen_range(1..=3);
        let piece = Realization::with_free_pair(
            &graph,
            &c,
            &vc,
            [(4 * j, p), (4 * j + 3, p + 1)],
            [4 * j + 1, 4 * j + 2],
            (p + 2..p + 2 + w1).collect(),
            (p + 5..p + 5 + w2).collect(),
        )?;
        family = family.oplus(&piece, &graph, &c)?;
    }
    let free = family.free();
    let mut brute = BTreeSet::new();
    for cells in family.grids().iter().map(|g| 0..g.cells()).multi_cartesian_product() {
        let map: BTreeMap<usize, usize> = family.resolve(&cells).function.into_iter().collect();
        let mut v = evaluate_function(&graph, &c, &vc, &map, &free);
        if fault {
            v = group.add(v, 1 % group.order());
        }
        brute.insert(v);
    }
    let values: BTreeSet<usize> = family.value_set().iter().collect();
    if values != brute {
        return Ok(Some(format!("seed {seed}: value set {values:?} but enumeration gives {brute:?}")));
    }
    for &target in &values {
        let Some(choice) = family.extract_function(target) else {
            return Ok(Some(format!("seed {seed}: {target} not extracted")));
        };
        let map: BTreeMap<usize, usize> = choice.function.into_iter().collect();
        let got = evaluate_function(&graph, &c, &vc, &map, &free);
        if got != target {
            return Ok(Some(format!("seed {seed}: extracted member evaluates to {got}, not {target}")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> SuiteParams {
        let mut p = SuiteParams::default();
        match suite {
            Suite::Kneser => p.max_order = Some(4),
            Suite::Psi | Suite::Algebra2 => {
                p.max_order = Some(8);
                p.random_cases = Some(100);
            }
            Suite::Egz => p.random_cases = Some(200),
            Suite::Blueprints => {
                p.instances = Some(2);
                p.vertices = Some(200);
            }
            Suite::Realization => p.instances = Some(20),
        }
        p
    }

    #[test]
    fn suites_pass_and_faults_are_caught() {
        for suite in Suite::ALL {
            let mut p = small(suite);
            let clean = run_suite(suite, &p).unwrap();
            assert!(clean.passed(), "{suite}: {:?}", clean.violations);
            assert!(clean.cases > 0);
            p.fault = true;
            let broken = run_suite(suite, &p).unwrap();
            assert!(!broken.passed(), "{suite} missed the injected fault");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("realization-oracle".parse::<Suite>().unwrap(), Suite::Realization);
        assert!("nope".parse::<Suite>().is_err());
    }
}
