//! Families of embeddings represented as a constant part plus independent free-vertex grids.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::abelian::{sumset, ElementSet, FiniteAbelianGroup, QuotientGroup};
use crate::colouring::{EdgeColouring, Gadget, VertexColouring};
use crate::error::{structural, validation, Result};
use crate::graphs::{BlueprintPair, BlueprintPlan, Graph};

/// Value table of one realized pair: entry `(i, j)` is `c(f)` for the function sending the
/// two free vertices to `x1[i]` and `x2[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub free: [usize; 2],
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    /// Row-major over `x1 × x2`.
    pub table: Vec<usize>,
}

impl Grid {
    pub fn cells(&self) -> usize {
        self.table.len()
    }

    pub fn cell(&self, k: usize) -> (usize, usize) {
        (self.x1[k / self.x2.len()], self.x2[k % self.x2.len()])
    }

    fn value_set(&self, order: usize) -> ElementSet {
        ElementSet::from_elements(order, self.table.iter().copied())
    }
}

/// Shared inputs for building realizations: the target graph, its plan, and the
/// colourings the values are measured in.
pub struct Realizer<'a, G> {
    pub graph: &'a Graph,
    pub plan: &'a BlueprintPlan,
    pub colouring: &'a EdgeColouring<G>,
    pub vertex_colouring: &'a VertexColouring<G>,
}

/// A family `F`: a fixed injection on part of the domain and one grid per realized pair.
#[derive(Clone, Debug, Serialize)]
pub struct Realization<G> {
    #[serde(skip)]
    group: G,
    /// Target-graph vertex to pool vertex, constant over the family.
    fixed: BTreeMap<usize, usize>,
    grids: Vec<Grid>,
    /// Constant added to every grid combination.
    base_offset: usize,
}

/// One member of a family: a cell per grid, resolved to an explicit injection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedChoice {
    pub cells: Vec<usize>,
    /// `(target-graph vertex, pool vertex)` sorted by the first entry.
    pub function: Vec<(usize, usize)>,
}

/// `c(h)`: degree-weighted vertex colours on `free`, plus every target edge inside the
/// domain of `h`.
pub fn evaluate_function<G: FiniteAbelianGroup>(
    graph: &Graph,
    c: &EdgeColouring<G>,
    vc: &VertexColouring<G>,
    map: &BTreeMap<usize, usize>,
    free: &[usize],
) -> usize {
    let g = c.group();
    let mut acc = g.zero();
    for &u in free {
        acc = g.add(acc, g.scalar_mul(graph.degree(u) as i64, vc.get(map[&u])));
    }
    for &(x, y) in graph.edges() {
        if let (Some(&a), Some(&b)) = (map.get(&x), map.get(&y)) {
            acc = g.add(acc, c.get(a, b));
        }
    }
    acc
}

impl<G: FiniteAbelianGroup> Realization<G> {
    /// `∅`, the identity for `⊕`.
    pub fn empty(group: &G) -> Self {
        Realization {
            group: group.clone(),
            fixed: BTreeMap::new(),
            grids: Vec::new(),
            base_offset: group.zero(),
        }
    }

    /// `{f}` for an injection given as `(target vertex, pool vertex)` pairs.
    pub fn singleton(
        graph: &Graph,
        c: &EdgeColouring<G>,
        assignment: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let fixed = Self::checked_map(graph, c.t(), assignment)?;
        let g = c.group();
        let mut base = g.zero();
        for &(x, y) in graph.edges() {
            if let (Some(&a), Some(&b)) = (fixed.get(&x), fixed.get(&y)) {
                base = g.add(base, c.get(a, b));
            }
        }
        Ok(Realization {
            group: g.clone(),
            fixed,
            grids: Vec::new(),
            base_offset: base,
        })
    }

    fn checked_map(
        graph: &Graph,
        t: usize,
        assignment: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<BTreeMap<usize, usize>> {
        let mut fixed = BTreeMap::new();
        let mut image = BTreeSet::new();
        for (u, p) in assignment {
            if u >= graph.vertex_count() || p >= t {
                return validation(format!("assignment {u} -> {p} out of range"));
            }
            if fixed.insert(u, p).is_some() {
                return structural(format!("vertex {u} assigned twice"));
            }
            if !image.insert(p) {
                return structural(format!("pool vertex {p} used twice"));
            }
        }
        Ok(fixed)
    }

    /// Family over one free pair ranging over `x1 × x2` with everything else pinned by
    /// `fixed`. Every neighbour of a free vertex must lie in the domain.
    pub fn with_free_pair(
        graph: &Graph,
        c: &EdgeColouring<G>,
        vc: &VertexColouring<G>,
        fixed: impl IntoIterator<Item = (usize, usize)>,
        free: [usize; 2],
        x1: Vec<usize>,
        x2: Vec<usize>,
    ) -> Result<Self> {
        let fixed = Self::checked_map(graph, c.t(), fixed)?;
        if free[0] == free[1] || free.iter().any(|u| fixed.contains_key(u) || *u >= graph.vertex_count()) {
            return structural("free vertices must be distinct and outside the fixed part");
        }
        if x1.is_empty() || x2.is_empty() {
            return structural("free vertex with no images");
        }
        let used: BTreeSet<usize> = fixed.values().copied().collect();
        let mut seen = BTreeSet::new();
        for &p in x1.iter().chain(&x2) {
            if p >= c.t() || used.contains(&p) || !seen.insert(p) {
                return structural(format!("free image {p} collides with another image"));
            }
        }
        for &u in &free {
            if let Some(w) = graph
                .neighbours(u)
                .iter()
                .find(|w| !fixed.contains_key(w) && !free.contains(w))
            {
                return structural(format!("free vertex {u} has neighbour {w} outside the domain"));
            }
        }
        let mut table = Vec::with_capacity(x1.len() * x2.len());
        let mut map = fixed.clone();
        for &a in &x1 {
            for &b in &x2 {
                map.insert(free[0], a);
                map.insert(free[1], b);
                table.push(evaluate_function(graph, c, vc, &map, &free));
            }
        }
        Ok(Realization {
            group: c.group().clone(),
            fixed,
            grids: vec![Grid { free, x1, x2, table }],
            base_offset: c.group().zero(),
        })
    }

    pub fn fixed(&self) -> &BTreeMap<usize, usize> {
        &self.fixed
    }

    pub fn grids(&self) -> &[Grid] {
        &self.grids
    }

    pub fn base_offset(&self) -> usize {
        self.base_offset
    }

    /// Free vertices `ι(F)`.
    pub fn free(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.grids.iter().flat_map(|g| g.free).collect();
        out.sort_unstable();
        out
    }

    /// Domain `V_F`, sorted.
    pub fn domain(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.fixed.keys().copied().chain(self.free()).collect();
        out.sort_unstable();
        out
    }

    /// Every pool vertex any member can use.
    pub fn image(&self) -> BTreeSet<usize> {
        self.fixed
            .values()
            .copied()
            .chain(self.grids.iter().flat_map(|g| g.x1.iter().chain(&g.x2).copied()))
            .collect()
    }

    /// Number of members as a float (it multiplies across grids).
    pub fn family_size(&self) -> f64 {
        self.grids.iter().map(|g| g.cells() as f64).product()
    }

    /// `F ⊕ F′`. The constant across the cut is the colour sum of target edges between
    /// the two domains, all of which join fixed vertices.
    pub fn oplus(&self, other: &Realization<G>, graph: &Graph, c: &EdgeColouring<G>) -> Result<Self> {
        let mine: BTreeSet<usize> = self.domain().into_iter().collect();
        let theirs: BTreeSet<usize> = other.domain().into_iter().collect();
        if let Some(v) = mine.intersection(&theirs).next() {
            return structural(format!("domains overlap at vertex {v}"));
        }
        if let Some(p) = self.image().intersection(&other.image()).next() {
            return structural(format!("images overlap at pool vertex {p}"));
        }
        let g = c.group();
        let mut cross = g.zero();
        for &(x, y) in graph.edges() {
            let (a, b) = if mine.contains(&x) && theirs.contains(&y) {
                (x, y)
            } else if mine.contains(&y) && theirs.contains(&x) {
                (y, x)
            } else {
                continue;
            };
            match (self.fixed.get(&a), other.fixed.get(&b)) {
                (Some(&p), Some(&q)) => cross = g.add(cross, c.get(p, q)),
                _ => return structural(format!("edge ({x},{y}) across the cut touches a free vertex")),
            }
        }
        let mut fixed = self.fixed.clone();
        fixed.extend(other.fixed.iter().map(|(&k, &v)| (k, v)));
        let mut grids = self.grids.clone();
        grids.extend(other.grids.iter().cloned());
        Ok(Realization {
            group: self.group.clone(),
            fixed,
            grids,
            base_offset: g.sum([self.base_offset, other.base_offset, cross]),
        })
    }

    /// `c(F)` as base offset plus the iterated sumset of grid value sets.
    pub fn value_set(&self) -> ElementSet {
        let order = self.group.order();
        let mut acc = ElementSet::from_elements(order, [self.base_offset]);
        for grid in &self.grids {
            acc = sumset(&self.group, &acc, &grid.value_set(order));
        }
        acc
    }

    /// `c(F)` pushed into a quotient of the value group.
    pub fn value_set_in(&self, q: &QuotientGroup<G>) -> ElementSet {
        let order = q.order();
        let mut acc = ElementSet::from_elements(order, [q.project(self.base_offset)]);
        for grid in &self.grids {
            let vals = ElementSet::from_elements(order, grid.table.iter().map(|&v| q.project(v)));
            acc = sumset(q, &acc, &vals);
        }
        acc
    }

    /// Lexicographically least cell sequence reaching `target`, or `None` if `target`
    /// is not a value of the family.
    pub fn extract_function(&self, target: usize) -> Option<EmbedChoice> {
        let g = &self.group;
        let order = g.order();
        // reach[k]: sums attainable by grids k.. onwards
        let mut reach = vec![ElementSet::from_elements(order, [g.zero()]); self.grids.len() + 1];
        for k in (0..self.grids.len()).rev() {
            reach[k] = sumset(g, &reach[k + 1], &self.grids[k].value_set(order));
        }
        let mut need = g.sub(target, self.base_offset);
        if !reach[0].contains(need) {
            return None;
        }
        let mut cells = Vec::with_capacity(self.grids.len());
        for (k, grid) in self.grids.iter().enumerate() {
            let pick = (0..grid.cells())
                .find(|&i| reach[k + 1].contains(g.sub(need, grid.table[i])))
                .expect("reachable remainder has a witness cell");
            need = g.sub(need, grid.table[pick]);
            cells.push(pick);
        }
        let choice = self.resolve(&cells);
        assert!(
            choice.function.windows(2).all(|w| w[0].0 < w[1].0),
            "resolved function has a repeated vertex"
        );
        let mut images: Vec<usize> = choice.function.iter().map(|&(_, p)| p).collect();
        images.sort_unstable();
        assert!(images.windows(2).all(|w| w[0] != w[1]), "resolved function is not injective");
        Some(choice)
    }

    /// The member selected by one cell per grid.
    pub fn resolve(&self, cells: &[usize]) -> EmbedChoice {
        assert_eq!(cells.len(), self.grids.len());
        let mut map = self.fixed.clone();
        for (grid, &k) in self.grids.iter().zip(cells) {
            let (a, b) = grid.cell(k);
            map.insert(grid.free[0], a);
            map.insert(grid.free[1], b);
        }
        EmbedChoice {
            cells: cells.to_vec(),
            function: map.into_iter().collect(),
        }
    }
}

/// Builds the family of a blueprint pair from a gadget whose first side matches the
/// pair's first blueprint: fixed vertices go to `D₁`, `D₂`, `M` in sorted order, bundle
/// companions to the anchor's bundle, and the free pair ranges over `X₁ × X₂`.
pub fn realize_from_gadget<G: FiniteAbelianGroup>(
    ctx: &Realizer<'_, G>,
    pair: &BlueprintPair,
    gadget: &Gadget,
) -> Result<Realization<G>> {
    let (d1, d2, m) = gadget.shape.degrees();
    if (d1, d2, m) != pair.kind() {
        return structural(format!(
            "gadget type ({d1},{d2},{m}) does not match pair type {:?}",
            pair.kind()
        ));
    }
    let blocks = [
        (pair.first_only(), &gadget.d1, &gadget.bundles_d1),
        (pair.second_only(), &gadget.d2, &gadget.bundles_d2),
        (pair.common(), &gadget.m, &gadget.bundles_m),
    ];
    let mut assignment: Vec<(usize, usize)> = Vec::new();
    for (zeta_part, anchors, bundles) in blocks {
        if zeta_part.len() != anchors.len() || bundles.len() != anchors.len() {
            return structural("gadget blocks do not match the fixed vertices of the pair");
        }
        for ((&u, &a), bundle) in zeta_part.iter().zip(anchors.iter()).zip(bundles.iter()) {
            let part = ctx.plan.part_containing(u);
            if part.len() != bundle.len() + 1 {
                return structural(format!(
                    "bundle of {a} has {} vertices, part of {u} needs {}",
                    bundle.len(),
                    part.len() - 1
                ));
            }
            assignment.push((u, a));
            let mut companions: Vec<usize> = part.iter().copied().filter(|&w| w != u).collect();
            companions.sort_unstable();
            let mut targets = bundle.clone();
            targets.sort_unstable();
            assignment.extend(companions.into_iter().zip(targets));
        }
    }
    Realization::with_free_pair(
        ctx.graph,
        ctx.colouring,
        ctx.vertex_colouring,
        assignment,
        pair.free_vertices(),
        gadget.x1.clone(),
        gadget.x2.clone(),
    )
}
