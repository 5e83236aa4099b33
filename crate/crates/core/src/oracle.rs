//! Brute-force ground truth: zero-sum copy search, exhaustive colouring checks and exact
//! zero-sum Ramsey numbers on small instances. Nothing here touches the engine.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{AbelianGroup, FiniteAbelianGroup};
use crate::colouring::EdgeColouring;
use crate::error::{validation, Result};
use crate::graphs::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_colourings: Option<u128>,
    /// Backtracking nodes per copy search.
    pub max_injections: Option<u64>,
    pub time_cap: Option<Duration>,
    /// Examine only colourings that are lexicographically least in their orbit under
    /// vertex permutations.
    pub symmetry_pruning: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_colourings: Some(1 << 24),
            max_injections: None,
            time_cap: None,
            symmetry_pruning: false,
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget {
            max_colourings: None,
            ..Default::default()
        }
    }

    pub fn with_pruning(mut self, on: bool) -> Self {
        self.symmetry_pruning = on;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CopySearch {
    Found(Vec<usize>),
    Absent,
    Truncated { nodes: u64 },
}

impl CopySearch {
    pub fn found(&self) -> Option<&[usize]> {
        match self {
            CopySearch::Found(f) => Some(f),
            _ => None,
        }
    }
}

/// Target vertices by descending degree, preferring vertices adjacent to those already
/// scheduled; ties go to the smaller index.
pub fn search_order(graph: &Graph) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (links[a] > 0, graph.degree(a), links[a])
                    .cmp(&(links[b] > 0, graph.degree(b), links[b]))
                    .then(b.cmp(&a))
            })
            .expect("a vertex remains");
        placed[next] = true;
        for &u in graph.neighbours(next) {
            links[u] += 1;
        }
        order.push(next);
    }
    order
}

struct Schedule {
    order: Vec<usize>,
    /// For each step, the positions of earlier-scheduled neighbours.
    back: Vec<Vec<usize>>,
}

impl Schedule {
    fn new(graph: &Graph) -> Self {
        let order = search_order(graph);
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut b: Vec<usize> = graph.neighbours(v).iter().map(|&u| pos[u]).filter(|&p| p < i).collect();
                b.sort_unstable();
                b
            })
            .collect();
        Schedule { order, back }
    }
}

struct Backtrack<'a, G> {
    schedule: &'a Schedule,
    colouring: &'a EdgeColouring<G>,
    images: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    cap: Option<u64>,
}

impl<G: FiniteAbelianGroup> Backtrack<'_, G> {
    /// Zero-sum search; returns `Some(true)` on success, `None` on truncation.
    fn zero_sum(&mut self, step: usize, partial: usize) -> Option<bool> {
        let g = self.colouring.group();
        if step == self.schedule.order.len() {
            return Some(partial == g.zero());
        }
        for p in 0..self.colouring.t() {
            if self.used[p] {
                continue;
            }
            self.nodes += 1;
            if self.cap.is_some_and(|c| self.nodes > c) {
                return None;
            }
            let mut acc = partial;
            for &b in &self.schedule.back[step] {
                acc = g.add(acc, self.colouring.get(self.images[b], p));
            }
            let last = step + 1 == self.schedule.order.len();
            if last && acc != g.zero() {
                continue;
            }
            self.used[p] = true;
            self.images.push(p);
            let r = self.zero_sum(step + 1, acc);
            if r != Some(false) {
                return r;
            }
            self.images.pop();
            self.used[p] = false;
        }
        Some(false)
    }

    fn monochromatic(&mut self, step: usize, colour: Option<usize>) -> Option<bool> {
        if step == self.schedule.order.len() {
            return Some(true);
        }
        for p in 0..self.colouring.t() {
            if self.used[p] {
                continue;
            }
            self.nodes += 1;
            if self.cap.is_some_and(|c| self.nodes > c) {
                return None;
            }
            let mut col = colour;
            let ok = self.schedule.back[step].iter().all(|&b| {
                let x = self.colouring.get(self.images[b], p);
                *col.get_or_insert(x) == x
            });
            if !ok {
                continue;
            }
            self.used[p] = true;
            self.images.push(p);
            let r = self.monochromatic(step + 1, col);
            if r != Some(false) {
                return r;
            }
            self.images.pop();
            self.used[p] = false;
        }
        Some(false)
    }
}

fn run_search<G: FiniteAbelianGroup>(
    graph: &Graph,
    schedule: &Schedule,
    c: &EdgeColouring<G>,
    cap: Option<u64>,
    mono: bool,
) -> CopySearch {
    if c.t() < graph.vertex_count() {
        return CopySearch::Absent;
    }
    let mut bt = Backtrack {
        schedule,
        colouring: c,
        images: Vec::with_capacity(graph.vertex_count()),
        used: vec![false; c.t()],
        nodes: 0,
        cap,
    };
    let r = if mono {
        bt.monochromatic(0, None)
    } else {
        bt.zero_sum(0, c.group().zero())
    };
    match r {
        None => CopySearch::Truncated { nodes: bt.nodes },
        Some(false) => CopySearch::Absent,
        Some(true) => {
            let mut f = vec![0; graph.vertex_count()];
            for (i, &v) in schedule.order.iter().enumerate() {
                f[v] = bt.images[i];
            }
            CopySearch::Found(f)
        }
    }
}

/// Least zero-sum injection in search order: the images of the vertices of
/// [`search_order`], read in that order, are lexicographically minimal.
pub fn find_zero_sum_copy<G: FiniteAbelianGroup>(
    graph: &Graph,
    c: &EdgeColouring<G>,
    budget: &SearchBudget,
) -> CopySearch {
    run_search(graph, &Schedule::new(graph), c, budget.max_injections, false)
}

pub fn find_monochromatic_copy<G: FiniteAbelianGroup>(
    graph: &Graph,
    c: &EdgeColouring<G>,
    budget: &SearchBudget,
) -> CopySearch {
    run_search(graph, &Schedule::new(graph), c, budget.max_injections, true)
}

/// `Σ_{xy∈E(G)} c(f(x)f(y))`.
pub fn copy_sum<G: FiniteAbelianGroup>(graph: &Graph, c: &EdgeColouring<G>, f: &[usize]) -> Result<usize> {
    if f.len() != graph.vertex_count() {
        return validation("injection does not cover the graph");
    }
    let mut sorted = f.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.last().is_some_and(|&m| m >= c.t()) {
        return validation("not an injection into the pool");
    }
    let g = c.group();
    Ok(g.sum(graph.edges().iter().map(|&(x, y)| c.get(f[x], f[y]))))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ColouringSweep<G> {
    /// Every colouring has a copy.
    AllHave { examined: u128 },
    /// The lexicographically least colouring without one.
    Counterexample { colouring: EdgeColouring<G>, examined: u128 },
    Truncated { examined: u128 },
}

impl<G> ColouringSweep<G> {
    pub fn examined(&self) -> u128 {
        match self {
            ColouringSweep::AllHave { examined }
            | ColouringSweep::Counterexample { examined, .. }
            | ColouringSweep::Truncated { examined } => *examined,
        }
    }
}

fn decode(mut index: u128, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = (index % base as u128) as usize;
        index /= base as u128;
    }
    digits
}

fn increment(digits: &mut [usize], base: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return;
        }
        *d = 0;
    }
}

fn permutations(t: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut p: Vec<usize> = (0..t).collect();
    fn rec(k: usize, p: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            all.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, all);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut all);
    all.retain(|q| q.iter().enumerate().any(|(i, &x)| i != x));
    all
}

fn tri(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

/// True when no vertex relabelling gives a lexicographically smaller array.
fn is_canonical(values: &[usize], t: usize, perms: &[Vec<usize>]) -> bool {
    'perm: for p in perms {
        for v in 1..t {
            for u in 0..v {
                let here = values[tri(u, v)];
                let there = values[tri(p[u], p[v])];
                match there.cmp(&here) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => continue 'perm,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
    }
    true
}

enum Shard {
    Clean(u128),
    Witness(Vec<usize>, u128),
    Cut(u128),
}

/// Sweeps all colourings of `K_t` over `group` in lexicographic order of the triangular
/// edge array, looking for one without a copy accepted by `mono`/zero-sum search.
fn sweep(
    graph: &Graph,
    group: &AbelianGroup,
    t: usize,
    budget: &SearchBudget,
    mono: bool,
) -> ColouringSweep<AbelianGroup> {
    let edges = t * t.saturating_sub(1) / 2;
    let base = group.order();
    if t < graph.vertex_count() {
        return ColouringSweep::Counterexample {
            colouring: EdgeColouring::constant(group, t, 0),
            examined: 1,
        };
    }
    let total = (base as u128).checked_pow(edges as u32);
    let limit = match (total, budget.max_colourings) {
        (Some(n), Some(cap)) => n.min(cap),
        (Some(n), None) => n,
        (None, Some(cap)) => cap,
        (None, None) => u128::MAX,
    };
    let complete = total.is_some_and(|n| n <= limit);
    let started = Instant::now();
    let schedule = Schedule::new(graph);
    let perms = if budget.symmetry_pruning { permutations(t) } else { Vec::new() };

    const BLOCK: u128 = 1 << 14;
    let shards = rayon::current_num_threads().max(1) * 4;
    let mut examined = 0u128;
    let mut start = 0u128;
    while start < limit {
        if budget.time_cap.is_some_and(|cap| started.elapsed() > cap) {
            return ColouringSweep::Truncated { examined };
        }
        let span = (BLOCK * shards as u128).min(limit - start);
        let per = span.div_ceil(shards as u128);
        let results: Vec<Shard> = (0..shards)
            .into_par_iter()
            .map(|s| {
                let lo = start + per * s as u128;
                let hi = (lo + per).min(start + span);
                if lo >= hi {
                    return Shard::Clean(0);
                }
                let mut digits = decode(lo, base, edges);
                let mut seen = 0u128;
                for _ in lo..hi {
                    if !budget.symmetry_pruning || is_canonical(&digits, t, &perms) {
                        seen += 1;
                        let c = EdgeColouring::from_values(group, t, digits.clone()).expect("digits lie in the group");
                        match run_search(graph, &schedule, &c, budget.max_injections, mono) {
                            CopySearch::Found(_) => {}
                            CopySearch::Absent => return Shard::Witness(digits, seen),
                            CopySearch::Truncated { .. } => return Shard::Cut(seen),
                        }
                    }
                    increment(&mut digits, base);
                }
                Shard::Clean(seen)
            })
            .collect();
        for r in results {
            match r {
                Shard::Clean(n) => examined += n,
                Shard::Witness(digits, n) => {
                    return ColouringSweep::Counterexample {
                        colouring: EdgeColouring::from_values(group, t, digits).expect("digits lie in the group"),
                        examined: examined + n,
                    }
                }
                Shard::Cut(n) => return ColouringSweep::Truncated { examined: examined + n },
            }
        }
        start += span;
    }
    if complete {
        ColouringSweep::AllHave { examined }
    } else {
        ColouringSweep::Truncated { examined }
    }
}

/// Whether every colouring of `K_t` by `group` contains a zero-sum copy of `graph`.
pub fn all_colorings_have_zero_sum(
    graph: &Graph,
    group: &AbelianGroup,
    t: usize,
    budget: &SearchBudget,
) -> ColouringSweep<AbelianGroup> {
    sweep(graph, group, t, budget, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RamseyOutcome {
    Exact { value: usize },
    /// No `t ≤ t_max` works; the number exceeds `t_max`.
    Above { t_max: usize },
    /// Search was cut at `t`; the number is at least `lower`.
    Truncated { lower: usize, at: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct RamseyReport {
    pub outcome: RamseyOutcome,
    pub colourings_examined: u128,
    pub runtime: Duration,
}

/// Smallest `t ≤ t_max` such that every colouring of `K_t` has a zero-sum copy.
pub fn ramsey_number(graph: &Graph, group: &AbelianGroup, t_max: usize, budget: &SearchBudget) -> Result<RamseyReport> {
    if !graph.edge_count().is_multiple_of(group.order()) {
        return validation(format!(
            "|{group}| = {} does not divide e(G) = {}",
            group.order(),
            graph.edge_count()
        ));
    }
    ramsey_by(graph, t_max, |t| all_colorings_have_zero_sum(graph, group, t, budget))
}

fn ramsey_by(
    graph: &Graph,
    t_max: usize,
    mut sweep_at: impl FnMut(usize) -> ColouringSweep<AbelianGroup>,
) -> Result<RamseyReport> {
    let started = Instant::now();
    let mut examined = 0;
    for t in graph.vertex_count().max(1)..=t_max {
        let r = sweep_at(t);
        examined += r.examined();
        let outcome = match r {
            ColouringSweep::AllHave { .. } => RamseyOutcome::Exact { value: t },
            ColouringSweep::Counterexample { .. } => continue,
            ColouringSweep::Truncated { .. } => RamseyOutcome::Truncated { lower: t, at: t },
        };
        return Ok(RamseyReport {
            outcome,
            colourings_examined: examined,
            runtime: started.elapsed(),
        });
    }
    Ok(RamseyReport {
        outcome: RamseyOutcome::Above { t_max },
        colourings_examined: examined,
        runtime: started.elapsed(),
    })
}

/// Smallest `t ≤ t_max` such that every `r`-colouring of `K_t` has a monochromatic copy.
pub fn multicolour_ramsey(graph: &Graph, colours: u32, t_max: usize, budget: &SearchBudget) -> Result<RamseyReport> {
    let palette = AbelianGroup::cyclic(colours.max(1))?;
    ramsey_by(graph, t_max, |t| sweep(graph, &palette, t, budget, true))
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessSearch {
    Found(EdgeColouring<AbelianGroup>),
    Absent,
    Truncated,
}

/// A colouring of `K_t` with no zero-sum copy: constant colourings first (non-zero
/// elements ascending, then zero), then the lexicographically least from a full sweep.
pub fn lower_bound_witness(graph: &Graph, group: &AbelianGroup, t: usize, budget: &SearchBudget) -> WitnessSearch {
    let schedule = Schedule::new(graph);
    for g in (1..group.order()).chain([0]) {
        let c = EdgeColouring::constant(group, t, g);
        let miss = if t < graph.vertex_count() {
            true
        } else if group.scalar_mul(graph.edge_count() as i64, g) != group.zero() {
            // every copy sums to e(G)·g
            true
        } else {
            match run_search(graph, &schedule, &c, budget.max_injections, false) {
                CopySearch::Absent => true,
                CopySearch::Found(_) => false,
                CopySearch::Truncated { .. } => return WitnessSearch::Truncated,
            }
        };
        if miss {
            return WitnessSearch::Found(c);
        }
    }
    match all_colorings_have_zero_sum(graph, group, t, budget) {
        ColouringSweep::AllHave { .. } => WitnessSearch::Absent,
        ColouringSweep::Counterexample { colouring, .. } => WitnessSearch::Found(colouring),
        ColouringSweep::Truncated { .. } => WitnessSearch::Truncated,
    }
}

/// `graph,group,t,verdict,runtime,colorings_examined`.
pub fn csv_row(graph_name: &str, group: &AbelianGroup, t_max: usize, report: &RamseyReport) -> String {
    let verdict = match report.outcome {
        RamseyOutcome::Exact { value } => value.to_string(),
        RamseyOutcome::Above { t_max } => format!(">{t_max}"),
        RamseyOutcome::Truncated { lower, .. } => format!(">={lower}"),
    };
    format!(
        "{graph_name},{group},{t_max},{verdict},{:.6},{}",
        report.runtime.as_secs_f64(),
        report.colourings_examined
    )
}

pub const CSV_HEADER: &str = "graph,group,t,verdict,runtime,colorings_examined";
