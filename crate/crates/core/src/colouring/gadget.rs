use itertools::Itertools;
use serde::Serialize;

use super::{star_sum, EdgeColouring, VertexColouring};
use crate::abelian::FiniteAbelianGroup;
use crate::error::{validation, Result};

/// Default ceiling on examined candidate tuples.
pub const DEFAULT_CANDIDATE_CAP: u64 = 10_000_000;

/// Edge colouring plus the two views of the vertex colouring a gadget needs: the
/// additive term in the edge group, and the class label bundles must agree on.
pub struct GadgetContext<'a, B> {
    colouring: &'a EdgeColouring<B>,
    terms: Vec<usize>,
    classes: &'a [usize],
}

impl<'a, B: FiniteAbelianGroup> GadgetContext<'a, B> {
    pub fn new(colouring: &'a EdgeColouring<B>, vc: &'a VertexColouring<B>) -> Self {
        GadgetContext {
            colouring,
            terms: vc.values().to_vec(),
            classes: vc.values(),
        }
    }

    /// Vertex labels live in a larger group and are pushed into the edge group by `proj`.
    pub fn projected<G: FiniteAbelianGroup>(
        colouring: &'a EdgeColouring<B>,
        vc: &'a VertexColouring<G>,
        proj: impl Fn(usize) -> usize,
    ) -> Self {
        GadgetContext {
            colouring,
            terms: vc.values().iter().map(|&g| proj(g)).collect(),
            classes: vc.values(),
        }
    }

    pub fn colouring(&self) -> &EdgeColouring<B> {
        self.colouring
    }

    pub fn term(&self, v: usize) -> usize {
        self.terms[v]
    }

    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    pub fn class(&self, v: usize) -> usize {
        self.classes[v]
    }

    pub fn classes(&self) -> &[usize] {
        self.classes
    }
}

/// Block sizes of the two free vertices and their common neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum GadgetShape {
    /// Both sides may vary.
    Pair { d1: usize, d2: usize, m: usize },
    /// The second side is a single vertex; its far neighbours do not affect values.
    Star { d1: usize, d2: usize, m: usize },
}

impl GadgetShape {
    pub fn degrees(&self) -> (usize, usize, usize) {
        match *self {
            GadgetShape::Pair { d1, d2, m } | GadgetShape::Star { d1, d2, m } => (d1, d2, m),
        }
    }

    /// `(|D₁|, |D₂|, |M|)`.
    pub fn block_sizes(&self) -> (usize, usize, usize) {
        let (d1, d2, m) = self.degrees();
        (d1 - m - 1, d2 - m - 1, m)
    }
}

/// Requested bundle size for each slot of `D₁`, `D₂`, `M` (in ascending vertex order).
/// Empty vectors mean no bundles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BundleSizes {
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
    pub m: Vec<usize>,
}

impl BundleSizes {
    pub fn none() -> Self {
        Self::default()
    }

    fn get(&self, block: usize, slot: usize) -> usize {
        let v = match block {
            0 => &self.d1,
            1 => &self.d2,
            _ => &self.m,
        };
        v.get(slot).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct GadgetRequest {
    pub shape: GadgetShape,
    pub lambda: usize,
    pub bundles: BundleSizes,
    pub cap: u64,
}

impl GadgetRequest {
    pub fn new(shape: GadgetShape, lambda: usize) -> Self {
        GadgetRequest {
            shape,
            lambda,
            bundles: BundleSizes::none(),
            cap: DEFAULT_CANDIDATE_CAP,
        }
    }

    pub fn with_bundles(mut self, bundles: BundleSizes) -> Self {
        self.bundles = bundles;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }
}

/// Vertex sets of a gadget inside the pool.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gadget {
    pub shape: GadgetShape,
    pub lambda: usize,
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
    pub m: Vec<usize>,
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub bundles_d1: Vec<Vec<usize>>,
    pub bundles_d2: Vec<Vec<usize>>,
    pub bundles_m: Vec<Vec<usize>>,
}

impl Gadget {
    pub fn vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .d1
            .iter()
            .chain(&self.d2)
            .chain(&self.m)
            .chain(&self.x1)
            .chain(&self.x2)
            .chain(self.bundles_d1.iter().flatten())
            .chain(self.bundles_d2.iter().flatten())
            .chain(self.bundles_m.iter().flatten())
            .copied()
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug)]
pub enum GadgetSearch {
    Found(Gadget),
    /// No candidate in the search order worked.
    Absent { examined: u64 },
    /// The candidate cap was hit first.
    Truncated { examined: u64 },
}

impl GadgetSearch {
    pub fn found(self) -> Option<Gadget> {
        match self {
            GadgetSearch::Found(g) => Some(g),
            _ => None,
        }
    }
}

fn is_flat<B: FiniteAbelianGroup>(ctx: &GadgetContext<'_, B>, pool: &[usize]) -> bool {
    let c = ctx.colouring();
    let first_term = pool.first().map(|&v| ctx.term(v));
    if pool.iter().any(|&v| Some(ctx.term(v)) != first_term) {
        return false;
    }
    if pool.len() < 2 {
        return true;
    }
    let first = c.get(pool[0], pool[1]);
    pool.iter()
        .tuple_combinations()
        .all(|(&u, &v)| c.get(u, v) == first)
}

struct Search<'s, 'a, B> {
    ctx: &'s GadgetContext<'a, B>,
    pool: &'s [usize],
    request: &'s GadgetRequest,
    used: Vec<bool>,
    stamp: Vec<u64>,
    round: u64,
    examined: u64,
}

enum Step {
    Next,
    Done(Gadget),
    Stop,
}

impl<'s, 'a, B: FiniteAbelianGroup> Search<'s, 'a, B> {
    fn free(&self) -> Vec<usize> {
        self.pool.iter().copied().filter(|&v| !self.used[v]).collect()
    }

    fn mark(&mut self, vs: &[usize], on: bool) {
        for &v in vs {
            self.used[v] = on;
        }
    }

    fn bump(&mut self) -> bool {
        self.examined += 1;
        self.round += 1;
        self.examined <= self.request.cap
    }

    /// `Σ_{u∈S} c(uv) + d·𝒞(v)` for every candidate `v`.
    fn side_base(&self, side: &[usize], d: usize, v: usize) -> usize {
        let g = self.ctx.colouring().group();
        let c = self.ctx.colouring();
        let mut acc = g.scalar_mul(d as i64, self.ctx.term(v));
        for &u in side {
            acc = g.add(acc, c.get(u, v));
        }
        acc
    }

    fn fill_bundles(&self, blocks: [&[usize]; 3], extra_used: &[usize]) -> Option<[Vec<Vec<usize>>; 3]> {
        let mut taken = self.used.clone();
        for &v in extra_used {
            taken[v] = true;
        }
        let mut out: [Vec<Vec<usize>>; 3] = Default::default();
        for (b, block) in blocks.iter().enumerate() {
            for (slot, &anchor) in block.iter().enumerate() {
                let need = self.request.bundles.get(b, slot);
                let class = self.ctx.class(anchor);
                let mut chosen = Vec::with_capacity(need);
                for &w in self.pool {
                    if chosen.len() == need {
                        break;
                    }
                    if !taken[w] && self.ctx.class(w) == class {
                        chosen.push(w);
                    }
                }
                if chosen.len() < need {
                    return None;
                }
                for &w in &chosen {
                    taken[w] = true;
                }
                out[b].push(chosen);
            }
        }
        Some(out)
    }

    fn star(&mut self, d1_set: &[usize], m_set: &[usize]) -> Step {
        let (d1, d2, _) = self.request.shape.degrees();
        let (_, n2, _) = self.request.shape.block_sizes();
        let lambda = self.request.lambda;
        let side: Vec<usize> = d1_set.iter().chain(m_set).copied().collect();
        let rest = self.free();
        let base: Vec<usize> = rest.iter().map(|&v| self.side_base(&side, d1, v)).collect();
        let g = self.ctx.colouring().group().clone();
        let c = self.ctx.colouring();
        for (wi, &w) in rest.iter().enumerate() {
            if !self.bump() {
                return Step::Stop;
            }
            let mut x1 = Vec::new();
            let mut distinct = 0usize;
            for (vi, &v) in rest.iter().enumerate() {
                if vi == wi {
                    continue;
                }
                let val = g.add(base[vi], c.get(v, w));
                if self.stamp[val] != self.round {
                    self.stamp[val] = self.round;
                    distinct += 1;
                    x1.push(v);
                    if distinct == lambda {
                        break;
                    }
                }
            }
            if distinct < lambda {
                continue;
            }
            let mut in_gadget = x1.clone();
            in_gadget.push(w);
            let d2_set: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|v| !in_gadget.contains(v))
                .take(n2)
                .collect();
            if d2_set.len() < n2 {
                continue;
            }
            in_gadget.extend(&d2_set);
            if let Some([b1, b2, bm]) = self.fill_bundles([d1_set, &d2_set, m_set], &in_gadget) {
                return Step::Done(Gadget {
                    shape: self.request.shape,
                    lambda,
                    d1: d1_set.to_vec(),
                    d2: d2_set,
                    m: m_set.to_vec(),
                    x1,
                    x2: vec![w],
                    bundles_d1: b1,
                    bundles_d2: b2,
                    bundles_m: bm,
                });
            }
            // far side of degree d2 only enters through its bundles
            let _ = d2;
        }
        Step::Next
    }

    fn pair(&mut self, d1_set: &[usize], d2_set: &[usize], m_set: &[usize]) -> Step {
        let (d1, d2, _) = self.request.shape.degrees();
        let lambda = self.request.lambda;
        let side1: Vec<usize> = d1_set.iter().chain(m_set).copied().collect();
        let side2: Vec<usize> = d2_set.iter().chain(m_set).copied().collect();
        let rest = self.free();
        let base1: Vec<usize> = rest.iter().map(|&v| self.side_base(&side1, d1, v)).collect();
        let base2: Vec<usize> = rest.iter().map(|&v| self.side_base(&side2, d2, v)).collect();
        let g = self.ctx.colouring().group().clone();
        let c = self.ctx.colouring();
        let value = |i: usize, j: usize| g.add(g.add(base1[i], base2[j]), c.get(rest[i], rest[j]));
        for seed in 0..rest.len() {
            if !self.bump() {
                return Step::Stop;
            }
            let mut member = vec![false; rest.len()];
            member[seed] = true;
            let mut x1: Vec<usize> = Vec::new();
            let mut x2: Vec<usize> = vec![seed];
            let mut distinct = 0usize;
            for i in 0..rest.len() {
                if distinct >= lambda || x1.len() == lambda {
                    break;
                }
                if member[i] {
                    continue;
                }
                let val = value(i, seed);
                if self.stamp[val] != self.round {
                    self.stamp[val] = self.round;
                    distinct += 1;
                    x1.push(i);
                    member[i] = true;
                }
            }
            for j in 0..rest.len() {
                if distinct >= lambda || x2.len() == lambda {
                    break;
                }
                if member[j] {
                    continue;
                }
                let fresh: Vec<usize> = x1.iter().map(|&i| value(i, j)).collect();
                let mut added = false;
                for val in fresh {
                    if self.stamp[val] != self.round {
                        self.stamp[val] = self.round;
                        distinct += 1;
                        added = true;
                    }
                }
                if added {
                    x2.push(j);
                    member[j] = true;
                }
            }
            if distinct < lambda || x1.is_empty() {
                continue;
            }
            let x1v: Vec<usize> = x1.iter().map(|&i| rest[i]).collect();
            let x2v: Vec<usize> = x2.iter().map(|&j| rest[j]).collect();
            let mut in_gadget = x1v.clone();
            in_gadget.extend(&x2v);
            if let Some([b1, b2, bm]) = self.fill_bundles([d1_set, d2_set, m_set], &in_gadget) {
                let mut x1s = x1v;
                let mut x2s = x2v;
                x1s.sort_unstable();
                x2s.sort_unstable();
                return Step::Done(Gadget {
                    shape: self.request.shape,
                    lambda,
                    d1: d1_set.to_vec(),
                    d2: d2_set.to_vec(),
                    m: m_set.to_vec(),
                    x1: x1s,
                    x2: x2s,
                    bundles_d1: b1,
                    bundles_d2: b2,
                    bundles_m: bm,
                });
            }
        }
        Step::Next
    }
}

/// Deterministic search over `M`, then `D₁`, then `D₂` in ascending combination order,
/// growing the free sides greedily by keeping a vertex only when it adds a new value.
pub fn find_gadget<B: FiniteAbelianGroup>(
    pool: &[usize],
    ctx: &GadgetContext<'_, B>,
    request: &GadgetRequest,
) -> Result<GadgetSearch> {
    let (d1, d2, m) = request.shape.degrees();
    if request.lambda == 0 {
        return validation("multiplicity must be at least 1");
    }
    if d1 < m + 1 || d2 < m + 1 {
        return validation(format!("degrees ({d1},{d2}) are too small for m = {m}"));
    }
    let t = ctx.colouring().t();
    if let Some(&v) = pool.iter().find(|&&v| v >= t) {
        return validation(format!("pool vertex {v} outside a colouring on {t}"));
    }
    let (n1, n2, nm) = request.shape.block_sizes();
    for (name, got, want) in [
        ("D1", request.bundles.d1.len(), n1),
        ("D2", request.bundles.d2.len(), n2),
        ("M", request.bundles.m.len(), nm),
    ] {
        if got != 0 && got != want {
            return validation(format!("{name} bundle list has {got} entries, expected {want}"));
        }
    }
    let mut pool: Vec<usize> = pool.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if request.lambda >= 2 && is_flat(ctx, &pool) {
        return Ok(GadgetSearch::Absent { examined: 0 });
    }

    let mut search = Search {
        ctx,
        pool: &pool,
        request,
        used: vec![false; t],
        stamp: vec![0; ctx.colouring().group().order()],
        round: 0,
        examined: 0,
    };
    let star = matches!(request.shape, GadgetShape::Star { .. });
    for m_set in pool.iter().copied().combinations(nm) {
        search.mark(&m_set, true);
        for d1_set in search.free().into_iter().combinations(n1) {
            search.mark(&d1_set, true);
            let step = if star {
                search.star(&d1_set, &m_set)
            } else {
                let mut inner = Step::Next;
                for d2_set in search.free().into_iter().combinations(n2) {
                    search.mark(&d2_set, true);
                    inner = search.pair(&d1_set, &d2_set, &m_set);
                    search.mark(&d2_set, false);
                    if !matches!(inner, Step::Next) {
                        break;
                    }
                }
                inner
            };
            search.mark(&d1_set, false);
            match step {
                Step::Next => {}
                Step::Done(g) => return Ok(GadgetSearch::Found(g)),
                Step::Stop => {
                    return Ok(GadgetSearch::Truncated {
                        examined: search.examined - 1,
                    })
                }
            }
        }
        search.mark(&m_set, false);
    }
    Ok(GadgetSearch::Absent {
        examined: search.examined,
    })
}

/// A `(d, λ)` gadget: one far vertex, no far-side neighbours.
pub fn find_simple_gadget<B: FiniteAbelianGroup>(
    pool: &[usize],
    ctx: &GadgetContext<'_, B>,
    d: usize,
    lambda: usize,
    bundles: Vec<usize>,
    cap: u64,
) -> Result<GadgetSearch> {
    if d == 0 {
        return validation("a simple gadget needs d ≥ 1");
    }
    let request = GadgetRequest::new(GadgetShape::Star { d1: d, d2: 1, m: 0 }, lambda)
        .with_bundles(BundleSizes {
            d1: bundles,
            ..BundleSizes::default()
        })
        .with_cap(cap);
    find_gadget(pool, ctx, &request)
}

/// Independent verification of the three gadget conditions; returns the value set size.
///
/// The host graph is complete, so the bipartite-completeness condition reduces to the
/// blocks being disjoint subsets of the pool.
pub fn check_gadget<B: FiniteAbelianGroup>(
    pool: &[usize],
    c: &EdgeColouring<B>,
    terms: &[usize],
    classes: &[usize],
    gadget: &Gadget,
    bundles: &BundleSizes,
) -> std::result::Result<usize, String> {
    let (d1, d2, m) = gadget.shape.degrees();
    if gadget.d1.len() + gadget.m.len() + 1 != d1 {
        return Err(format!("|D1| + |M| + 1 = {} but d1 = {d1}", gadget.d1.len() + gadget.m.len() + 1));
    }
    if gadget.d2.len() + gadget.m.len() + 1 != d2 {
        return Err(format!("|D2| + |M| + 1 = {} but d2 = {d2}", gadget.d2.len() + gadget.m.len() + 1));
    }
    if gadget.m.len() != m {
        return Err(format!("|M| = {} but m = {m}", gadget.m.len()));
    }
    if gadget.x1.is_empty() || gadget.x2.is_empty() {
        return Err("empty free side".into());
    }
    if gadget.x1.len() > gadget.lambda || gadget.x2.len() > gadget.lambda {
        return Err("free side larger than λ".into());
    }
    if let GadgetShape::Star { .. } = gadget.shape {
        if gadget.x2.len() != 1 {
            return Err("star gadget with more than one far vertex".into());
        }
    }
    let mut all: Vec<usize> = Vec::new();
    all.extend(&gadget.d1);
    all.extend(&gadget.d2);
    all.extend(&gadget.m);
    all.extend(&gadget.x1);
    all.extend(&gadget.x2);
    for b in gadget.bundles_d1.iter().chain(&gadget.bundles_d2).chain(&gadget.bundles_m) {
        all.extend(b);
    }
    let n = all.len();
    all.sort_unstable();
    all.dedup();
    if all.len() != n {
        return Err("gadget blocks overlap".into());
    }
    if let Some(v) = all.iter().find(|v| !pool.contains(v)) {
        return Err(format!("vertex {v} is not in the pool"));
    }
    let groups = [
        (&gadget.d1, &gadget.bundles_d1, &bundles.d1),
        (&gadget.d2, &gadget.bundles_d2, &bundles.d2),
        (&gadget.m, &gadget.bundles_m, &bundles.m),
    ];
    for (anchors, sets, sizes) in groups {
        if sets.len() != anchors.len() {
            return Err("bundle list does not match its block".into());
        }
        for (i, (&a, set)) in anchors.iter().zip(sets.iter()).enumerate() {
            let want = sizes.get(i).copied().unwrap_or(0);
            if set.len() != want {
                return Err(format!("bundle of {a} has size {} not {want}", set.len()));
            }
            if let Some(w) = set.iter().find(|&&w| classes[w] != classes[a]) {
                return Err(format!("bundle vertex {w} has a different class from {a}"));
            }
        }
    }
    let g = c.group();
    let left: Vec<usize> = gadget.d1.iter().chain(&gadget.m).copied().collect();
    let right: Vec<usize> = gadget.d2.iter().chain(&gadget.m).copied().collect();
    let mut seen = std::collections::BTreeSet::new();
    for &v1 in &gadget.x1 {
        for &v2 in &gadget.x2 {
            let s = star_sum(c, &left, v1, v2, &right).map_err(|e| e.to_string())?;
            let extra = g.add(
                g.scalar_mul(d1 as i64, terms[v1]),
                g.scalar_mul(d2 as i64, terms[v2]),
            );
            seen.insert(g.add(s, extra));
        }
    }
    if seen.len() < gadget.lambda {
        return Err(format!("only {} distinct values, need {}", seen.len(), gadget.lambda));
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::AbelianGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(m: u32) -> AbelianGroup {
        AbelianGroup::cyclic(m).unwrap()
    }

    /// Every way of placing a star gadget: `(D₁∪M, w′, X₁)` with any X₁; returns the best
    /// achievable number of values.
    fn brute_star_values(c: &EdgeColouring<AbelianGroup>, terms: &[usize], pool: &[usize], d: usize) -> usize {
        let g = c.group();
        let mut best = 0;
        for side in pool.iter().copied().combinations(d - 1) {
            for &w in pool.iter().filter(|v| !side.contains(v)) {
                let vals: std::collections::BTreeSet<usize> = pool
                    .iter()
                    .filter(|v| !side.contains(v) && **v != w)
                    .map(|&v| {
                        let s = star_sum(c, &side, v, w, &[]).unwrap();
                        g.add(g.add(s, g.scalar_mul(d as i64, terms[v])), terms[w])
                    })
                    .collect();
                best = best.max(vals.len());
            }
        }
        best
    }

    #[test]
    fn monochromatic_is_absent() {
        let g = z(3);
        let c = EdgeColouring::constant(&g, 9, 1);
        let vc = VertexColouring::zero(&g, 9);
        let ctx = GadgetContext::new(&c, &vc);
        let pool: Vec<usize> = (0..9).collect();
        for shape in [
            GadgetShape::Pair { d1: 2, d2: 2, m: 0 },
            GadgetShape::Star { d1: 3, d2: 2, m: 1 },
        ] {
            let r = find_gadget(&pool, &ctx, &GadgetRequest::new(shape, 2)).unwrap();
            assert!(matches!(r, GadgetSearch::Absent { .. }));
        }
        let r = find_simple_gadget(&pool, &ctx, 2, 2, vec![], DEFAULT_CANDIDATE_CAP).unwrap();
        assert!(matches!(r, GadgetSearch::Absent { .. }));
    }

    #[test]
    fn multiplicity_one_always_found() {
        let g = z(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = EdgeColouring::random(&g, 6, &mut rng);
        let vc = VertexColouring::zero(&g, 6);
        let ctx = GadgetContext::new(&c, &vc);
        let pool: Vec<usize> = (0..6).collect();
        let r = find_gadget(&pool, &ctx, &GadgetRequest::new(GadgetShape::Pair { d1: 3, d2: 3, m: 1 }, 1))
            .unwrap();
        let gadget = r.found().unwrap();
        check_gadget(&pool, &c, vc.values(), vc.values(), &gadget, &BundleSizes::none()).unwrap();
        assert!(find_simple_gadget(&pool[..4], &ctx, 3, 1, vec![], 100).unwrap().found().is_some());
    }

    #[test]
    fn crafted_z2_pair_gadget() {
        let g = z(2);
        let mut c = EdgeColouring::constant(&g, 6, 0);
        c.set(0, 3, 1);
        let vc = VertexColouring::zero(&g, 6);
        let ctx = GadgetContext::new(&c, &vc);
        let pool: Vec<usize> = (0..6).collect();
        let gadget = find_gadget(&pool, &ctx, &GadgetRequest::new(GadgetShape::Pair { d1: 2, d2: 2, m: 0 }, 2))
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(gadget.d1, vec![0]);
        assert_eq!(gadget.x1, vec![3, 4]);
        assert_eq!(
            check_gadget(&pool, &c, vc.values(), vc.values(), &gadget, &BundleSizes::none()),
            Ok(2)
        );
    }

    #[test]
    fn simple_gadget_on_two_valued_stars() {
        let g = z(2);
        let mut c = EdgeColouring::constant(&g, 5, 0);
        c.set(1, 4, 1);
        let vc = VertexColouring::zero(&g, 5);
        let ctx = GadgetContext::new(&c, &vc);
        let pool: Vec<usize> = (0..5).collect();
        let gadget = find_simple_gadget(&pool, &ctx, 2, 2, vec![], DEFAULT_CANDIDATE_CAP)
            .unwrap()
            .found()
            .unwrap();
        assert!(gadget.d2.is_empty());
        check_gadget(&pool, &c, vc.values(), vc.values(), &gadget, &BundleSizes::none()).unwrap();
    }

    #[test]
    fn star_search_is_exact_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..60 {
            let g = z(3);
            let t = 6;
            // sparse colourings so that absence actually occurs
            let c = EdgeColouring::from_fn(&g, t, |_, _| {
                if rand::Rng::gen_bool(&mut rng, 0.15) {
                    rand::Rng::gen_range(&mut rng, 1..3)
                } else {
                    0
                }
            });
            let vc = VertexColouring::zero(&g, t);
            let ctx = GadgetContext::new(&c, &vc);
            let pool: Vec<usize> = (0..t).collect();
            for lambda in 2..=3 {
                let r = find_simple_gadget(&pool, &ctx, 2, lambda, vec![], DEFAULT_CANDIDATE_CAP).unwrap();
                let best = brute_star_values(&c, vc.values(), &pool, 2);
                match r {
                    GadgetSearch::Found(gadget) => {
                        assert!(best >= lambda, "trial {trial}");
                        check_gadget(&pool, &c, vc.values(), vc.values(), &gadget, &BundleSizes::none())
                            .unwrap();
                    }
                    GadgetSearch::Absent { .. } => assert!(best < lambda, "trial {trial}"),
                    GadgetSearch::Truncated { .. } => panic!("unexpected truncation"),
                }
            }
        }
    }

    #[test]
    fn bundles_follow_classes() {
        let g = z(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = 16;
        let c = EdgeColouring::random(&g, t, &mut rng);
        let vc = VertexColouring::from_values(&g, (0..t).map(|v| 2 * (v % 2)).collect()).unwrap();
        let ctx = GadgetContext::new(&c, &vc);
        let pool: Vec<usize> = (0..t).collect();
        let bundles = BundleSizes {
            d1: vec![1, 1],
            d2: vec![1],
            m: vec![1],
        };
        let req = GadgetRequest::new(GadgetShape::Pair { d1: 4, d2: 3, m: 1 }, 2).with_bundles(bundles.clone());
        let gadget = find_gadget(&pool, &ctx, &req).unwrap().found().unwrap();
        check_gadget(&pool, &c, vc.values(), vc.values(), &gadget, &bundles).unwrap();
    }

    #[test]
    fn truncation_is_reported() {
        let g = z(2);
        let mut c = EdgeColouring::constant(&g, 8, 0);
        // one odd edge far from the early candidates; demand three values in Z2
        c.set(6, 7, 1);
        let vc = VertexColouring::zero(&g, 8);
        let ctx = GadgetContext::new(&c, &vc);
        let pool: Vec<usize> = (0..8).collect();
        let req = GadgetRequest::new(GadgetShape::Pair { d1: 2, d2: 2, m: 0 }, 3).with_cap(5);
        assert!(matches!(find_gadget(&pool, &ctx, &req).unwrap(), GadgetSearch::Truncated { .. }));
    }

    #[test]
    fn checker_rejects_tampering() {
        let g = z(2);
        let mut c = EdgeColouring::constant(&g, 6, 0);
        c.set(0, 3, 1);
        let vc = VertexColouring::zero(&g, 6);
        let ctx = GadgetContext::new(&c, &vc);
        let pool: Vec<usize> = (0..6).collect();
        let mut gadget = find_gadget(&pool, &ctx, &GadgetRequest::new(GadgetShape::Pair { d1: 2, d2: 2, m: 0 }, 2))
            .unwrap()
            .found()
            .unwrap();
        gadget.x1 = vec![4, 5];
        assert!(check_gadget(&pool, &c, vc.values(), vc.values(), &gadget, &BundleSizes::none()).is_err());
    }
}
