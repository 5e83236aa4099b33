use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::{kappa_of, Graph};
use crate::abelian::gcd;
use crate::error::{Error, Result};

/// A closed neighbourhood `N̄(free)` with its centre marked free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blueprint {
    pub free: usize,
    /// `N(free)`, sorted.
    pub fixed: Vec<usize>,
}

impl Blueprint {
    pub fn of(graph: &Graph, v: usize) -> Self {
        Blueprint {
            free: v,
            fixed: graph.neighbours(v).to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.fixed.len()
    }
}

/// Two blueprints whose free vertices are adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlueprintPair {
    pub first: Blueprint,
    pub second: Blueprint,
}

impl BlueprintPair {
    pub fn new(graph: &Graph, x: usize, y: usize) -> Result<Self> {
        if !graph.has_edge(x, y) {
            return Err(Error::Validation(format!("free vertices {x},{y} are not adjacent")));
        }
        Ok(BlueprintPair {
            first: Blueprint::of(graph, x),
            second: Blueprint::of(graph, y),
        })
    }

    pub fn free_vertices(&self) -> [usize; 2] {
        [self.first.free, self.second.free]
    }

    pub fn d1(&self) -> usize {
        self.first.degree()
    }

    pub fn d2(&self) -> usize {
        self.second.degree()
    }

    /// Common neighbours of the two free vertices.
    pub fn common(&self) -> Vec<usize> {
        self.first
            .fixed
            .iter()
            .copied()
            .filter(|v| self.second.fixed.binary_search(v).is_ok())
            .collect()
    }

    pub fn m(&self) -> usize {
        self.common().len()
    }

    /// `(d₁, d₂, m)`.
    pub fn kind(&self) -> (usize, usize, usize) {
        (self.d1(), self.d2(), self.m())
    }

    /// Neighbours of the first free vertex only (excluding the second free vertex).
    pub fn first_only(&self) -> Vec<usize> {
        self.first
            .fixed
            .iter()
            .copied()
            .filter(|&v| v != self.second.free && self.second.fixed.binary_search(&v).is_err())
            .collect()
    }

    pub fn second_only(&self) -> Vec<usize> {
        self.second
            .fixed
            .iter()
            .copied()
            .filter(|&v| v != self.first.free && self.first.fixed.binary_search(&v).is_err())
            .collect()
    }

    /// Fixed vertices of the pair, sorted.
    pub fn zeta(&self) -> Vec<usize> {
        let free = self.free_vertices();
        let set: BTreeSet<usize> = self
            .first
            .fixed
            .iter()
            .chain(&self.second.fixed)
            .copied()
            .filter(|v| !free.contains(v))
            .collect();
        set.into_iter().collect()
    }

    /// All vertices of both blueprints, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut set: BTreeSet<usize> = self.zeta().into_iter().collect();
        set.extend(self.free_vertices());
        set.into_iter().collect()
    }
}

/// One pair per edge whose endpoint-degree gcd equals `kappa_prime`, in edge order.
pub fn candidate_pairs(graph: &Graph, kappa_prime: u64) -> Vec<BlueprintPair> {
    let pairs: Vec<BlueprintPair> = graph
        .edges()
        .iter()
        .filter(|&&(x, y)| gcd(graph.degree(x) as u64, graph.degree(y) as u64) == kappa_prime)
        .map(|&(x, y)| BlueprintPair::new(graph, x, y).expect("edge endpoints are adjacent"))
        .collect();
    if let Ok((most_common, _)) = kappa_of(graph) {
        if most_common == kappa_prime {
            assert!(
                pairs.len() * graph.max_degree() >= graph.edge_count(),
                "the most common gcd class has at least e/Δ edges"
            );
        }
    }
    pairs
}

/// Greedy scan keeping pairs whose vertex sets avoid everything kept so far.
pub fn maximal_nonoverlapping(pairs: &[BlueprintPair]) -> Vec<BlueprintPair> {
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut kept = Vec::new();
    for p in pairs {
        let vs = p.vertices();
        if vs.iter().all(|v| !used.contains(v)) {
            used.extend(vs);
            kept.push(p.clone());
        }
    }
    kept
}

/// What a part of the vertex partition is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartKind {
    /// Bundle grown around a fixed vertex of a kept pair.
    Bundle { anchor: usize, pair: usize },
    /// κ consecutive vertices of one degree class.
    Block { degree: usize },
    /// Remainder of all degree classes.
    Leftover,
    /// Singleton of a free vertex of a kept pair.
    Free { pair: usize },
}

/// Kept blueprint pairs plus a vertex partition with degree sums divisible by κ.
#[derive(Clone, Debug, Serialize)]
pub struct BlueprintPlan {
    pub pairs: Vec<BlueprintPair>,
    pub parts: Vec<Vec<usize>>,
    pub kinds: Vec<PartKind>,
    pub part_of: Vec<usize>,
    pub kappa: u64,
    pub kappa_prime: u64,
}

impl BlueprintPlan {
    pub fn part_containing(&self, v: usize) -> &[usize] {
        &self.parts[self.part_of[v]]
    }

    /// Blocks and the leftover part, in partition order.
    pub fn unassigned_parts(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.parts
            .iter()
            .zip(&self.kinds)
            .filter(|(_, k)| matches!(k, PartKind::Block { .. } | PartKind::Leftover))
            .map(|(p, _)| p.as_slice())
    }
}

/// Runs the pair selection and partition procedure, then verifies the result.
pub fn extract_blueprints(graph: &Graph) -> Result<BlueprintPlan> {
    let (kappa_prime, kappa) = kappa_of(graph)?;
    let k = kappa as usize;
    let degrees = graph.degrees();
    let max_deg = graph.max_degree();

    let mut queue: VecDeque<BlueprintPair> =
        maximal_nonoverlapping(&candidate_pairs(graph, kappa_prime)).into();
    let mut pools: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); max_deg + 1];
    for v in 0..graph.vertex_count() {
        pools[degrees[v]].insert(v);
    }

    let mut kept: Vec<BlueprintPair> = Vec::new();
    let mut bundles: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    while let Some(pair) = queue.pop_front() {
        let zeta = pair.zeta();
        let mut taken: BTreeSet<usize> = zeta.iter().copied().collect();
        let mut chosen: Vec<(usize, Vec<usize>)> = Vec::with_capacity(zeta.len());
        let mut short = false;
        for &v in &zeta {
            let d = degrees[v];
            if d.is_multiple_of(k) {
                chosen.push((v, vec![v]));
                continue;
            }
            let extra: Vec<usize> = pools[d]
                .iter()
                .copied()
                .filter(|u| !taken.contains(u))
                .take(k - 1)
                .collect();
            if extra.len() < k - 1 {
                short = true;
                break;
            }
            taken.extend(extra.iter().copied());
            let mut part = vec![v];
            part.extend(extra);
            part.sort_unstable();
            chosen.push((v, part));
        }
        if short {
            continue;
        }
        let mut added: BTreeSet<usize> = BTreeSet::new();
        for (_, part) in &chosen {
            for &u in part {
                pools[degrees[u]].remove(&u);
                added.insert(u);
            }
        }
        queue.retain(|other| other.vertices().iter().all(|u| !added.contains(u)));
        let idx = kept.len();
        kept.push(pair);
        bundles.extend(chosen.into_iter().map(|(v, part)| (idx, v, part)));
    }

    for p in &kept {
        for x in p.free_vertices() {
            pools[degrees[x]].remove(&x);
        }
    }

    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut kinds: Vec<PartKind> = Vec::new();
    for (pair, anchor, part) in bundles {
        parts.push(part);
        kinds.push(PartKind::Bundle { anchor, pair });
    }
    let mut leftover: Vec<usize> = Vec::new();
    for (d, pool) in pools.iter().enumerate() {
        let ids: Vec<usize> = pool.iter().copied().collect();
        let full = ids.len() / k * k;
        for block in ids[..full].chunks(k) {
            parts.push(block.to_vec());
            kinds.push(PartKind::Block { degree: d });
        }
        leftover.extend_from_slice(&ids[full..]);
    }
    if !leftover.is_empty() {
        leftover.sort_unstable();
        parts.push(leftover);
        kinds.push(PartKind::Leftover);
    }
    for (i, p) in kept.iter().enumerate() {
        for x in p.free_vertices() {
            parts.push(vec![x]);
            kinds.push(PartKind::Free { pair: i });
        }
    }

    let mut part_of = vec![usize::MAX; graph.vertex_count()];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }
    let plan = BlueprintPlan {
        pairs: kept,
        parts,
        kinds,
        part_of,
        kappa,
        kappa_prime,
    };
    let problems = plan_violations(graph, &plan);
    if !problems.is_empty() {
        return Err(Error::Structural(format!(
            "blueprint plan violates its invariants: {}",
            problems.join("; ")
        )));
    }
    Ok(plan)
}

/// Checks the five partition clauses plus pair disjointness; returns one message per failure.
///
/// The size bound on the number of pairs is only checked when `e ≥ 2Δ⁷`. With `Δ = 1`
/// the part-size bound reads `|π| ≤ 1`.
pub fn plan_violations(graph: &Graph, plan: &BlueprintPlan) -> Vec<String> {
    let mut out = Vec::new();
    let n = graph.edge_count() as u128;
    let delta = graph.max_degree() as u128;
    let kappa = plan.kappa;

    // (i)
    if n >= 2 * delta.pow(7) && (plan.pairs.len() as u128) * 5 * delta.pow(6) < n {
        out.push(format!(
            "(i) only {} pairs for e = {n}, Δ = {delta}",
            plan.pairs.len()
        ));
    }
    // (ii)
    for (i, p) in plan.pairs.iter().enumerate() {
        let g = gcd(gcd(p.d1() as u64, p.d2() as u64), n as u64);
        if g != kappa {
            out.push(format!("(ii) pair {i} has gcd {g} instead of {kappa}"));
        }
        for x in p.free_vertices() {
            if !(graph.degree(x) as u64).is_multiple_of(kappa) {
                out.push(format!("free vertex {x} has degree not divisible by κ"));
            }
        }
    }
    // (iii) and covering
    let mut seen = vec![0usize; graph.vertex_count()];
    for (i, part) in plan.parts.iter().enumerate() {
        let sum: usize = part.iter().map(|&v| graph.degree(v)).sum();
        if !(sum as u64).is_multiple_of(kappa) {
            out.push(format!("(iii) part {i} has degree sum {sum}"));
        }
        for &v in part {
            seen[v] += 1;
            if plan.part_of.get(v) != Some(&i) {
                out.push(format!("part lookup for {v} is wrong"));
            }
        }
        // (v)
        let cap = if delta <= 1 { 1 } else { delta * delta - 1 };
        if part.len() as u128 > cap {
            out.push(format!("(v) part {i} has size {}", part.len()));
        }
        if let PartKind::Block { .. } = plan.kinds[i] {
            if part.len() as u64 != kappa {
                out.push(format!("(v) block {i} has size {}", part.len()));
            }
        }
        if let PartKind::Bundle { .. } = plan.kinds[i] {
            if part.len() != 1 && part.len() as u64 != kappa {
                out.push(format!("(v) bundle {i} has size {}", part.len()));
            }
        }
    }
    // (iv)
    if let Some(v) = seen.iter().position(|&c| c != 1) {
        out.push(format!("(iv) vertex {v} lies in {} parts", seen[v]));
    }
    let mut owner = vec![usize::MAX; graph.vertex_count()];
    for (i, p) in plan.pairs.iter().enumerate() {
        for v in p.vertices() {
            if owner[v] != usize::MAX {
                out.push(format!("pairs {} and {i} overlap at {v}", owner[v]));
            }
            owner[v] = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate;

    #[test]
    fn pair_structure() {
        let g = generate::complete(4).unwrap();
        let p = BlueprintPair::new(&g, 0, 1).unwrap();
        assert_eq!(p.kind(), (3, 3, 2));
        assert_eq!(p.zeta(), vec![2, 3]);
        assert_eq!(p.common(), vec![2, 3]);
        assert!(p.first_only().is_empty());
        assert_eq!(p.vertices(), vec![0, 1, 2, 3]);
        assert!(BlueprintPair::new(&generate::cycle(4).unwrap(), 0, 2).is_err());
    }

    #[test]
    fn candidate_examples() {
        let c4 = generate::cycle(4).unwrap();
        assert_eq!(candidate_pairs(&c4, 2).len(), 4);
        assert_eq!(candidate_pairs(&generate::star(3).unwrap(), 1).len(), 3);
        // triangle with a pendant: only edge 01 joins two degree-2 vertices
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(candidate_pairs(&g, 2).len(), 1);
    }

    #[test]
    fn nonoverlapping_examples() {
        let c4 = generate::cycle(4).unwrap();
        assert_eq!(maximal_nonoverlapping(&candidate_pairs(&c4, 2)).len(), 1);
        let two = generate::matching(2).unwrap();
        assert_eq!(maximal_nonoverlapping(&candidate_pairs(&two, 1)).len(), 2);
        assert!(maximal_nonoverlapping(&[]).is_empty());
    }

    #[test]
    fn c4_plan() {
        let plan = extract_blueprints(&generate::cycle(4).unwrap()).unwrap();
        assert_eq!(plan.pairs.len(), 1);
        assert_eq!(plan.parts.len(), 4);
        assert_eq!(plan.pairs[0].free_vertices(), [0, 1]);
        let bundles: Vec<_> = plan
            .parts
            .iter()
            .zip(&plan.kinds)
            .filter(|(_, k)| matches!(k, PartKind::Bundle { .. }))
            .map(|(p, _)| p.clone())
            .collect();
        assert_eq!(bundles, vec![vec![2], vec![3]]);
    }

    #[test]
    fn star_plan_has_singleton_bundles() {
        let plan = extract_blueprints(&generate::star(3).unwrap()).unwrap();
        assert_eq!(plan.kappa, 1);
        assert!(plan.parts.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn bundles_grow_for_odd_degree_fixed_vertices() {
        // C12 with pendants on vertices 0 and 6: e = 14, κ′ = 2, κ = 2
        let mut edges: Vec<(usize, usize)> = (0..12).map(|i| (i, (i + 1) % 12)).collect();
        edges.push((0, 12));
        edges.push((6, 13));
        let g = Graph::new(14, edges).unwrap();
        let plan = extract_blueprints(&g).unwrap();
        assert_eq!((plan.kappa_prime, plan.kappa), (2, 2));
        assert!(plan_violations(&g, &plan).is_empty());
        assert!(plan
            .parts
            .iter()
            .zip(&plan.kinds)
            .any(|(p, k)| matches!(k, PartKind::Bundle { .. }) && p.len() == 2));
    }

    #[test]
    fn isolated_vertices_are_tolerated() {
        let g = generate::cycle(4)
            .unwrap()
            .disjoint_union(&Graph::new(3, []).unwrap());
        let plan = extract_blueprints(&g).unwrap();
        assert!(plan_violations(&g, &plan).is_empty());
    }

    #[test]
    fn deterministic() {
        let g = generate::random_regular(3, 200, 11).unwrap();
        let a = extract_blueprints(&g).unwrap();
        let b = extract_blueprints(&g).unwrap();
        assert_eq!(a.parts, b.parts);
        assert_eq!(a.pairs, b.pairs);
    }
}
