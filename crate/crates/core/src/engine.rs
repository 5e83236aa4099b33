//! The embedding procedure: tuple selection, quotient rounds of gadget realizations, the
//! leftover embedding, and recovery of a zero-sum injection.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::abelian::{
    find_coset_in, psi, AbelianGroup, FiniteAbelianGroup, QuotientGroup, Subgroup, SubgroupLattice,
};
use crate::colouring::{
    check_gadget, find_gadget, is_well_behaved, normalize_t, project_colouring, shift_colouring,
    BundleSizes, EdgeColouring, GadgetContext, GadgetRequest, GadgetSearch, GadgetShape,
    VertexColouring, WellBehavedParams, WellBehavedTuple, DEFAULT_CANDIDATE_CAP,
};
use crate::error::{validation, Result};
use crate::graphs::{extract_blueprints, BlueprintPair, BlueprintPlan, Graph, PartKind};
use crate::realization::{realize_from_gadget, Realization, Realizer};

/// Extra phase-0 candidates, produced from the original colouring and `κ`.
pub type TupleGenerator =
    Arc<dyn Fn(&EdgeColouring<AbelianGroup>, u64) -> Vec<WellBehavedTuple> + Send + Sync>;

#[derive(Clone)]
pub struct EngineConfig {
    pub alpha: u64,
    pub beta: u64,
    pub candidate_cap: u64,
    /// Multiplicity used in every round instead of the phase rule.
    pub lambda_override: Option<usize>,
    /// Classes smaller than this are dropped after each gadget; defaults to `2Δ²`.
    pub class_threshold: Option<usize>,
    pub strict_telemetry: bool,
    pub generator: Option<TupleGenerator>,
    /// Set when α, β or λ differ from the values derived from Δ.
    pub scaled: bool,
}

impl fmt::Debug for EngineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EngineConfig")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("candidate_cap", &self.candidate_cap)
            .field("lambda_override", &self.lambda_override)
            .field("class_threshold", &self.class_threshold)
            .field("strict_telemetry", &self.strict_telemetry)
            .field("generator", &self.generator.is_some())
            .field("scaled", &self.scaled)
            .finish()
    }
}

impl EngineConfig {
    /// `α = 10Δ⁶`, `β = 2α`.
    pub fn for_degree(delta: usize) -> Self {
        let alpha = 10 * (delta.max(1) as u64).pow(6);
        EngineConfig {
            alpha,
            beta: 2 * alpha,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            lambda_override: None,
            class_threshold: None,
            strict_telemetry: false,
            generator: None,
            scaled: false,
        }
    }

    /// Desk-scale parameters; flagged as scaled in every result.
    pub fn scaled(alpha: u64, beta: u64) -> Self {
        EngineConfig {
            alpha,
            beta,
            scaled: true,
            ..Self::for_degree(1)
        }
    }

    pub fn with_lambda(mut self, lambda: usize) -> Self {
        self.lambda_override = Some(lambda);
        self.scaled = true;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.candidate_cap = cap;
        self
    }

    pub fn strict(mut self, on: bool) -> Self {
        self.strict_telemetry = on;
        self
    }

    pub fn with_generator(mut self, generator: TupleGenerator) -> Self {
        self.generator = Some(generator);
        self
    }

    pub fn with_class_threshold(mut self, threshold: usize) -> Self {
        self.class_threshold = Some(threshold);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    BlueprintsExhausted,
    NoGadget,
    SearchTruncated,
    PoolExhausted,
    TargetUnreachable,
    TelemetryViolation,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureKind::BlueprintsExhausted => "blueprints_exhausted",
            FailureKind::NoGadget => "no_gadget",
            FailureKind::SearchTruncated => "search_truncated",
            FailureKind::PoolExhausted => "pool_exhausted",
            FailureKind::TargetUnreachable => "target_unreachable",
            FailureKind::TelemetryViolation => "telemetry_violation",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EmbedStatus {
    Success,
    Failed {
        reason: FailureKind,
        round: usize,
        detail: String,
    },
}

/// One quotient round.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub gamma_order: usize,
    pub h_order: usize,
    pub lambda: usize,
    pub lambda_effective: usize,
    pub pairs_used: usize,
    pub vertices_used: usize,
    pub coset_rep: String,
    /// `|H′|` after the round.
    pub subgroup_size: usize,
    pub pair_budget: f64,
    pub vertex_budget: usize,
    pub within_budget: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Large subgroup: one colour class, multiplicity β.
    One,
    /// Small subgroup: all large classes, multiplicity 2.
    Two,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbedResult {
    #[serde(flatten)]
    pub status: EmbedStatus,
    /// `injection[v]` is the pool vertex of target vertex `v`.
    pub injection: Option<Vec<usize>>,
    pub certificate: Option<String>,
    #[serde(skip)]
    pub certificate_index: Option<usize>,
    pub rounds: Vec<RoundRecord>,
    pub notes: Vec<String>,
    pub phase: Option<Phase>,
    pub sigma: Option<usize>,
    pub scaled: bool,
}

impl EmbedResult {
    pub fn is_success(&self) -> bool {
        self.status == EmbedStatus::Success
    }

    pub fn failure(&self) -> Option<FailureKind> {
        match &self.status {
            EmbedStatus::Failed { reason, .. } => Some(*reason),
            EmbedStatus::Success => None,
        }
    }

    /// One JSON object per round.
    pub fn transcript_jsonl(&self) -> String {
        self.rounds
            .iter()
            .map(|r| serde_json::to_string(r).expect("round records serialize"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub struct Failure {
    pub reason: FailureKind,
    pub detail: String,
}

fn fail<T>(reason: FailureKind, detail: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure {
        reason,
        detail: detail.into(),
    })
}

fn phase_params(graph: &Graph, group: &AbelianGroup, ambient: usize, cfg: &EngineConfig) -> WellBehavedParams {
    WellBehavedParams {
        ambient,
        n: group.order(),
        delta: graph.max_degree(),
        alpha: cfg.alpha,
        beta: cfg.beta,
    }
}

/// Picks the smallest valid candidate (trivial tuple first, so it wins ties), moves the
/// largest colour class to colour 0 and merges colours sharing a coset.
pub fn phase0(
    c0: &EdgeColouring<AbelianGroup>,
    kappa: u64,
    params: &WellBehavedParams,
    cfg: &EngineConfig,
) -> WellBehavedTuple {
    let mut candidates = vec![WellBehavedTuple::trivial(c0.group(), c0.t())];
    if let Some(gen) = &cfg.generator {
        candidates.extend(gen(c0, kappa));
    }
    let mut best: Option<WellBehavedTuple> = None;
    for cand in candidates {
        let valid = cand.group().moduli() == c0.group().moduli()
            && is_well_behaved(c0, &cand, kappa, params).map(|r| r.holds()).unwrap_or(false);
        if valid && best.as_ref().is_none_or(|b| cand.size() < b.size()) {
            best = Some(cand);
        }
    }
    let merged = normalize_t(&best.expect("the trivial tuple is always valid"));
    let largest = merged
        .values
        .iter()
        .copied()
        .max_by(|&a, &b| merged.class(a).len().cmp(&merged.class(b).len()).then(b.cmp(&a)))
        .unwrap_or(0);
    merged.translate(largest)
}

/// Starting pool and phase for a tuple.
pub fn phase_pool(tuple: &WellBehavedTuple, n: usize, alpha: u64, threshold: usize) -> (Phase, Vec<usize>) {
    if tuple.size() as u64 * alpha >= n as u64 {
        (Phase::One, tuple.class(0))
    } else {
        let pool = tuple
            .values
            .iter()
            .flat_map(|&t| {
                let class = tuple.class(t);
                if class.len() >= threshold {
                    class
                } else {
                    Vec::new()
                }
            })
            .collect::<std::collections::BTreeSet<usize>>()
            .into_iter()
            .collect();
        (Phase::Two, pool)
    }
}

/// Everything a run of the main loop needs.
pub struct EngineInput<'a> {
    pub graph: &'a Graph,
    pub plan: &'a BlueprintPlan,
    pub original: &'a EdgeColouring<AbelianGroup>,
    /// Shifted colouring `c₀ − s − 𝒞(x) − 𝒞(y)`.
    pub colouring: &'a EdgeColouring<AbelianGroup>,
    pub vertex_colouring: &'a VertexColouring<AbelianGroup>,
    pub subgroup: &'a Subgroup<AbelianGroup>,
    pub shift: usize,
    pub pool: Vec<usize>,
}

pub struct FinderOutput {
    pub coset_rep: usize,
    pub subgroup: Subgroup<QuotientGroup<AbelianGroup>>,
    pub pool: Vec<usize>,
    pub realization: Realization<AbelianGroup>,
    pub pairs_used: usize,
}

fn oriented(pair: &BlueprintPair, reversed: bool) -> BlueprintPair {
    if reversed {
        BlueprintPair {
            first: pair.second.clone(),
            second: pair.first.clone(),
        }
    } else {
        pair.clone()
    }
}

fn bundle_sizes(plan: &BlueprintPlan, pair: &BlueprintPair) -> BundleSizes {
    let size = |vs: Vec<usize>| -> Vec<usize> { vs.iter().map(|&u| plan.part_containing(u).len() - 1).collect() };
    BundleSizes {
        d1: size(pair.first_only()),
        d2: size(pair.second_only()),
        m: size(pair.common()),
    }
}

fn class_threshold(graph: &Graph, cfg: &EngineConfig) -> usize {
    cfg.class_threshold
        .unwrap_or(2 * graph.max_degree() * graph.max_degree())
}

fn drop_small_classes(pool: &mut Vec<usize>, vc: &VertexColouring<AbelianGroup>, threshold: usize) {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in pool.iter() {
        *counts.entry(vc.get(v)).or_default() += 1;
    }
    pool.retain(|&v| counts[&vc.get(v)] >= threshold);
}

/// Realizes pairs one at a time until the chained value set contains a coset of a
/// nontrivial subgroup of the round group, then returns the largest such coset.
pub fn realization_finder(
    input: &EngineInput<'_>,
    cfg: &EngineConfig,
    quotient: &QuotientGroup<AbelianGroup>,
    lattice: &SubgroupLattice<QuotientGroup<AbelianGroup>>,
    lambda: usize,
    queue: &mut VecDeque<usize>,
    mut pool: Vec<usize>,
) -> std::result::Result<FinderOutput, (Failure, usize)> {
    let graph = input.graph;
    let threshold = class_threshold(graph, cfg);
    let round_colouring = project_colouring(input.colouring, quotient);
    let ctx = GadgetContext::projected(&round_colouring, input.vertex_colouring, |g| quotient.project(g));
    let realizer = Realizer {
        graph,
        plan: input.plan,
        colouring: input.colouring,
        vertex_colouring: input.vertex_colouring,
    };
    let mut family = Realization::empty(input.colouring.group());
    let mut pairs_used = 0;
    loop {
        let values = family.value_set_in(quotient);
        if let Some(coset) = find_coset_in(lattice, &values) {
            return Ok(FinderOutput {
                coset_rep: coset.representative(),
                subgroup: coset.subgroup().clone(),
                pool,
                realization: family,
                pairs_used,
            });
        }
        let Some(index) = queue.pop_front() else {
            return Err((
                Failure {
                    reason: FailureKind::BlueprintsExhausted,
                    detail: format!("value set of size {} holds no coset", values.len()),
                },
                pairs_used,
            ));
        };
        pairs_used += 1;
        let pair = &input.plan.pairs[index];
        let (d1, d2, m) = pair.kind();
        let mut forms = vec![
            (d1, GadgetShape::Star { d1, d2, m }, false),
            (d2, GadgetShape::Star { d1: d2, d2: d1, m }, true),
        ];
        forms.sort_by_key(|f| f.0);
        forms.push((d1.max(d2), GadgetShape::Pair { d1, d2, m }, false));
        let mut truncated = false;
        let mut found = None;
        for (_, shape, reversed) in forms {
            let target = oriented(pair, reversed);
            let request = GadgetRequest::new(shape, lambda)
                .with_bundles(bundle_sizes(input.plan, &target))
                .with_cap(cfg.candidate_cap);
            match find_gadget(&pool, &ctx, &request) {
                Ok(GadgetSearch::Found(g)) => {
                    found = Some((g, target, request));
                    break;
                }
                Ok(GadgetSearch::Truncated { .. }) => truncated = true,
                Ok(GadgetSearch::Absent { .. }) => {}
                Err(e) => {
                    return Err((
                        Failure {
                            reason: FailureKind::NoGadget,
                            detail: e.to_string(),
                        },
                        pairs_used,
                    ))
                }
            }
        }
        let Some((gadget, target, request)) = found else {
            let reason = if truncated {
                FailureKind::SearchTruncated
            } else {
                FailureKind::NoGadget
            };
            return Err((
                Failure {
                    reason,
                    detail: format!("pair {index} of type {:?} at multiplicity {lambda}", pair.kind()),
                },
                pairs_used,
            ));
        };
        if let Err(e) = check_gadget(
            &pool,
            &round_colouring,
            ctx.terms(),
            ctx.classes(),
            &gadget,
            &request.bundles,
        ) {
            panic!("gadget search returned an invalid gadget: {e}");
        }
        let piece = realize_from_gadget(&realizer, &target, &gadget)
            .and_then(|p| family.oplus(&p, graph, input.colouring).map(|f| (p, f)));
        let (piece, chained) = match piece {
            Ok(x) => x,
            Err(e) => panic!("realization of a verified gadget failed: {e}"),
        };
        assert!(
            piece.value_set_in(quotient).len() >= lambda,
            "fresh realization has fewer than λ values"
        );
        family = chained;
        let used: std::collections::BTreeSet<usize> = gadget.vertices().into_iter().collect();
        pool.retain(|v| !used.contains(v));
        drop_small_classes(&mut pool, input.vertex_colouring, threshold);
    }
}

fn pair_budget(m: usize, h: usize, lambda: usize) -> f64 {
    let freed = (m - m / h) as f64;
    freed / (lambda.saturating_sub(1).max(1)) as f64 + 1.0
}

/// The main loop followed by the leftover embedding and extraction of a zero-sum member.
pub fn embedding_algorithm(input: &EngineInput<'_>, cfg: &EngineConfig) -> EmbedResult {
    let mut result = EmbedResult {
        status: EmbedStatus::Success,
        injection: None,
        certificate: None,
        certificate_index: None,
        rounds: Vec::new(),
        notes: vec!["assumed: no monochromatic copy of the target graph".into()],
        phase: None,
        sigma: Some(input.subgroup.order()),
        scaled: cfg.scaled,
    };
    match run_rounds(input, cfg, &mut result) {
        Ok(()) => {}
        Err((f, round)) => {
            result.status = EmbedStatus::Failed {
                reason: f.reason,
                round,
                detail: f.detail,
            };
        }
    }
    result
}

fn run_rounds(
    input: &EngineInput<'_>,
    cfg: &EngineConfig,
    result: &mut EmbedResult,
) -> std::result::Result<(), (Failure, usize)> {
    let graph = input.graph;
    let group = input.colouring.group().clone();
    let n = group.order();
    let delta = graph.max_degree();
    let gamma = input.subgroup;
    let mut divisor = Subgroup::trivial(&group);
    let mut queue: VecDeque<usize> = (0..input.plan.pairs.len()).collect();
    let mut pool = input.pool.clone();
    let mut family = Realization::empty(&group);
    let mut round = 0usize;

    loop {
        let m = gamma.order() / divisor.order();
        if m <= 1 {
            break;
        }
        round += 1;
        let nominal = cfg.lambda_override.unwrap_or(if m as u64 * cfg.alpha >= n as u64 {
            cfg.beta as usize
        } else {
            2
        });
        let lambda = nominal.min(m);
        let quotient = QuotientGroup::new(&group, &divisor).expect("divisor is a subgroup");
        let lattice = SubgroupLattice::new(&quotient).map_err(|e| {
            (
                Failure {
                    reason: FailureKind::SearchTruncated,
                    detail: e.to_string(),
                },
                round,
            )
        })?;
        let before = pool.len();
        let out = realization_finder(input, cfg, &quotient, &lattice, lambda, &mut queue, pool)
            .map_err(|(f, _)| (f, round))?;
        let h = out.subgroup.order();
        assert!(h > 1, "found coset belongs to a nontrivial subgroup");
        let next = psi(&out.subgroup, &quotient).expect("lifted subgroup");
        assert!(next.is_subgroup_of(gamma), "found subgroup lies inside the working subgroup");
        let vertices_used = before - out.pool.len();
        let pb = pair_budget(m, h, nominal);
        let vb = 7 * delta.pow(3) * (m - m / h);
        let within = (out.pairs_used as f64) <= pb + 1e-9 && vertices_used <= vb;
        result.rounds.push(RoundRecord {
            round,
            gamma_order: m,
            h_order: h,
            lambda: nominal,
            lambda_effective: lambda,
            pairs_used: out.pairs_used,
            vertices_used,
            coset_rep: quotient.label(out.coset_rep),
            subgroup_size: next.order(),
            pair_budget: pb,
            vertex_budget: vb,
            within_budget: within,
        });
        if !within {
            let detail = format!(
                "round {round}: {} pairs (budget {pb:.3}), {vertices_used} vertices (budget {vb})",
                out.pairs_used
            );
            if cfg.strict_telemetry && !cfg.scaled {
                return fail(FailureKind::TelemetryViolation, detail).map_err(|f| (f, round));
            }
            result.notes.push(format!("budget exceeded: {detail}"));
        }
        family = family
            .oplus(&out.realization, graph, input.colouring)
            .expect("rounds use disjoint pairs and pool vertices");
        pool = out.pool;
        divisor = next;
    }
    if result.rounds.is_empty() {
        result.notes.push("working subgroup is trivial; only the leftover embedding runs".into());
    }

    // leftover parts
    let used: std::collections::BTreeSet<usize> = (0..input.plan.pairs.len())
        .filter(|i| !queue.contains(i))
        .collect();
    let leftover: Vec<&Vec<usize>> = input
        .plan
        .parts
        .iter()
        .zip(&input.plan.kinds)
        .filter(|(_, kind)| match kind {
            PartKind::Block { .. } | PartKind::Leftover => true,
            PartKind::Bundle { pair, .. } | PartKind::Free { pair } => !used.contains(pair),
        })
        .map(|(p, _)| p)
        .collect();
    let vc = input.vertex_colouring;
    for part in leftover {
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &v in &pool {
            classes.entry(vc.get(v)).or_default().push(v);
        }
        let best = classes
            .iter()
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
            .map(|(_, vs)| vs.clone())
            .unwrap_or_default();
        if best.len() < part.len() {
            return fail(
                FailureKind::PoolExhausted,
                format!("part of size {} but largest class has {}", part.len(), best.len()),
            )
            .map_err(|f| (f, round));
        }
        let mut sorted = part.clone();
        sorted.sort_unstable();
        let image = &best[..sorted.len()];
        let piece = Realization::singleton(graph, input.colouring, sorted.iter().copied().zip(image.iter().copied()))
            .expect("leftover images are fresh");
        family = family
            .oplus(&piece, graph, input.colouring)
            .expect("leftover parts are disjoint from everything embedded");
        pool.retain(|v| !image.contains(v));
    }
    assert_eq!(family.domain().len(), graph.vertex_count(), "every vertex is embedded");

    // constant terms: e(G)·s plus degree-weighted colours of all pinned vertices
    let mut offset = group.scalar_mul(graph.edge_count() as i64, input.shift);
    for (&v, &p) in family.fixed() {
        offset = group.add(offset, group.scalar_mul(graph.degree(v) as i64, vc.get(p)));
    }
    let target = group.neg(offset);
    let Some(choice) = family.extract_function(target) else {
        return fail(
            FailureKind::TargetUnreachable,
            format!("{} is not among {} attainable values", group.label(target), family.value_set().len()),
        )
        .map_err(|f| (f, round));
    };
    let mut injection = vec![usize::MAX; graph.vertex_count()];
    for (v, p) in choice.function {
        injection[v] = p;
    }
    let cert = certify(&injection, graph, input.original).expect("resolved function is an injection");
    result.injection = Some(injection);
    result.certificate = Some(group.label(cert));
    result.certificate_index = Some(cert);
    Ok(())
}

/// `Σ_{xy∈E(G)} c₀(f(x)f(y))` from the colouring and the injection alone.
pub fn certify<G: FiniteAbelianGroup>(f: &[usize], graph: &Graph, c0: &EdgeColouring<G>) -> Result<usize> {
    if f.len() != graph.vertex_count() {
        return validation(format!("injection covers {} of {} vertices", f.len(), graph.vertex_count()));
    }
    let mut seen = vec![false; c0.t()];
    for &p in f {
        if p >= c0.t() {
            return validation(format!("image {p} outside the pool"));
        }
        if std::mem::replace(&mut seen[p], true) {
            return validation(format!("pool vertex {p} used twice"));
        }
    }
    let g = c0.group();
    Ok(graph
        .edges()
        .iter()
        .fold(g.zero(), |acc, &(x, y)| g.add(acc, c0.get(f[x], f[y]))))
}

/// Full pipeline: blueprints, tuple selection, shift, main loop.
pub fn embed(graph: &Graph, c0: &EdgeColouring<AbelianGroup>, cfg: &EngineConfig) -> Result<EmbedResult> {
    if c0.t() < graph.vertex_count() {
        return validation(format!(
            "pool of {} cannot hold {} vertices",
            c0.t(),
            graph.vertex_count()
        ));
    }
    let plan = extract_blueprints(graph)?;
    let params = phase_params(graph, c0.group(), c0.t(), cfg);
    let tuple = phase0(c0, plan.kappa, &params, cfg);
    let threshold = class_threshold(graph, cfg);
    let (phase, pool) = phase_pool(&tuple, c0.group().order(), cfg.alpha, threshold);
    let shifted = shift_colouring(c0, tuple.shift, &tuple.colours)?;
    let input = EngineInput {
        graph,
        plan: &plan,
        original: c0,
        colouring: &shifted,
        vertex_colouring: &tuple.colours,
        subgroup: &tuple.subgroup,
        shift: tuple.shift,
        pool,
    };
    let mut result = embedding_algorithm(&input, cfg);
    result.phase = Some(phase);
    let bound = required_pool_size(graph.max_degree(), graph.edge_count());
    if !bound.is_guaranteed(c0.t(), None) {
        result.notes.push("outside guaranteed regime".into());
    }
    Ok(result)
}

/// Pool size under which the construction is proven to succeed, with the multicolour
/// Ramsey factor left symbolic.
#[derive(Clone, Debug, Serialize)]
pub struct PoolBound {
    pub delta: usize,
    pub n: usize,
    pub alpha: u64,
    pub beta: u64,
    /// Number of colours fed to the multicolour Ramsey factor, `200Δ¹²`.
    pub colours: u128,
    /// `log₁₀ Δ^{42Δ⁶}`.
    pub log10_degree_factor: f64,
    pub formula: String,
}

impl PoolBound {
    /// A run is inside the proven regime only with a known Ramsey factor `c_prime` and
    /// `pool ≥ Δ^{42Δ⁶}·c_prime·n`.
    pub fn is_guaranteed(&self, pool: usize, c_prime: Option<f64>) -> bool {
        match c_prime {
            None => false,
            Some(cp) => {
                (pool as f64).log10() >= self.log10_degree_factor + cp.log10() + (self.n.max(1) as f64).log10()
            }
        }
    }
}

pub fn required_pool_size(delta: usize, n: usize) -> PoolBound {
    let d = delta.max(1) as u64;
    let alpha = 10 * d.pow(6);
    let exponent = 42 * d.pow(6);
    PoolBound {
        delta,
        n,
        alpha,
        beta: 2 * alpha,
        colours: 200 * (d as u128).pow(12),
        log10_degree_factor: exponent as f64 * (d as f64).log10(),
        formula: format!("{d}^{exponent} * C'(r = {}, {d}) * {n}", 200 * (d as u128).pow(12)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::planted_colouring;
    use crate::graphs::generate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(moduli: &[u32]) -> AbelianGroup {
        AbelianGroup::new(moduli.to_vec()).unwrap()
    }

    #[test]
    fn pool_bound_examples() {
        let b = required_pool_size(2, 4);
        assert_eq!((b.alpha, b.beta, b.colours), (640, 1280, 200 * 4096));
        let b = required_pool_size(1, 1);
        assert_eq!((b.alpha, b.beta), (10, 20));
        assert!(!b.is_guaranteed(1_000_000, None));
    }

    #[test]
    fn certify_examples() {
        let c4 = generate::cycle(4).unwrap();
        let g = z(&[2]);
        let zero = EdgeColouring::constant(&g, 5, 0);
        assert_eq!(certify(&[0, 1, 2, 3], &c4, &zero).unwrap(), 0);
        let one = EdgeColouring::constant(&g, 5, 1);
        assert_eq!(certify(&[4, 2, 0, 1], &c4, &one).unwrap(), 0);
        assert!(certify(&[0, 0, 1, 2], &c4, &one).is_err());
        assert!(certify(&[0, 1, 2], &c4, &one).is_err());
    }

    #[test]
    fn trivial_group_uses_only_leftovers() {
        let graph = generate::cycle(4).unwrap();
        let g = AbelianGroup::trivial();
        let c0 = EdgeColouring::constant(&g, 6, 0);
        let r = embed(&graph, &c0, &EngineConfig::for_degree(2)).unwrap();
        assert!(r.is_success(), "{:?}", r.status);
        assert!(r.rounds.is_empty());
        assert_eq!(r.certificate_index, Some(0));
    }

    #[test]
    fn planted_c4_over_z2() {
        let graph = generate::cycle(4).unwrap();
        let g = z(&[2]);
        let mut successes = 0;
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (c0, _) = planted_colouring(&g, 12, &graph, &mut rng).unwrap();
            let r = embed(&graph, &c0, &EngineConfig::for_degree(2)).unwrap();
            if r.is_success() {
                successes += 1;
                let f = r.injection.as_ref().unwrap();
                assert_eq!(certify(f, &graph, &c0).unwrap(), 0);
                assert_eq!(r.rounds.len(), 1);
                assert!(r.rounds[0].within_budget);
            }
        }
        assert!(successes > 0);
    }

    #[test]
    fn monochromatic_pool_has_no_gadget() {
        let graph = generate::cycle(4).unwrap();
        let g = z(&[2]);
        let c0 = EdgeColouring::constant(&g, 12, 1);
        let r = embed(&graph, &c0, &EngineConfig::for_degree(2)).unwrap();
        assert_eq!(r.failure(), Some(FailureKind::NoGadget));
    }

    #[test]
    fn small_pool_exhausts() {
        let graph = generate::matching(3).unwrap();
        let g = AbelianGroup::trivial();
        let c0 = EdgeColouring::constant(&g, 6, 0);
        assert!(embed(&graph, &c0, &EngineConfig::for_degree(1)).unwrap().is_success());
        let c0 = EdgeColouring::constant(&g, 5, 0);
        assert!(embed(&graph, &c0, &EngineConfig::for_degree(1)).is_err());
        // after the one gadget the remaining colour classes fall below 2Δ² and are dropped
        let graph = generate::cycle(6).unwrap();
        let g = z(&[2]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c0 = EdgeColouring::random(&g, 6, &mut rng);
        let r = embed(&graph, &c0, &EngineConfig::for_degree(2)).unwrap();
        assert_eq!(r.failure(), Some(FailureKind::PoolExhausted), "{:?}", r.status);
    }

    #[test]
    fn phase0_prefers_smaller_valid_candidates() {
        let g = z(&[4]);
        let graph = generate::cycle(4).unwrap();
        let c0 = EdgeColouring::from_fn(&g, 8, |u, v| if (u + v) % 2 == 0 { 0 } else { 2 });
        let params = phase_params(&graph, &g, 8, &EngineConfig::for_degree(2));
        let half = crate::abelian::generated_subgroup(&g, [2]).unwrap();
        let good = WellBehavedTuple {
            subgroup: half.clone(),
            ..WellBehavedTuple::trivial(&g, 8)
        };
        let bad = WellBehavedTuple {
            subgroup: Subgroup::trivial(&g),
            ..WellBehavedTuple::trivial(&g, 8)
        };
        let gen: TupleGenerator = Arc::new(move |_, _| vec![bad.clone(), good.clone()]);
        let cfg = EngineConfig::for_degree(2).with_generator(gen);
        let t = phase0(&c0, 2, &params, &cfg);
        assert_eq!(t.size(), 2);
        let t = phase0(&c0, 2, &params, &EngineConfig::for_degree(2));
        assert_eq!(t.size(), 4);
        assert_eq!(t.values, vec![0]);
    }

    #[test]
    fn deterministic_transcripts() {
        let graph = generate::cycle(8).unwrap();
        let g = z(&[4]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (c0, _) = planted_colouring(&g, 60, &graph, &mut rng).unwrap();
        let cfg = EngineConfig::scaled(10, 20).with_lambda(2);
        let a = embed(&graph, &c0, &cfg).unwrap();
        let b = embed(&graph, &c0, &cfg).unwrap();
        assert_eq!(a.transcript_jsonl(), b.transcript_jsonl());
        assert_eq!(a.injection, b.injection);
        if a.is_success() {
            assert_eq!(certify(a.injection.as_ref().unwrap(), &graph, &c0).unwrap(), 0);
        }
    }
}
