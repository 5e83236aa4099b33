use std::collections::HashMap;

use crate::abelian::gcd;
use crate::error::{validation, Result};

/// Simple undirected graph on `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    /// `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return validation(format!("loop at vertex {u}"));
            }
            if u >= vertex_count || v >= vertex_count {
                return validation(format!(
                    "edge ({u},{v}) outside a graph on {vertex_count} vertices"
                ));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return validation(format!("repeated edge ({},{})", w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &list {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(Graph {
            vertex_count,
            edges: list,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted neighbours.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// `N(v) ∪ {v}`, sorted.
    pub fn closed_neighbourhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adjacency[v].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }

    /// Disjoint union, with `other` renumbered after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::new(self.vertex_count + other.vertex_count, edges).expect("disjoint union is simple")
    }
}

/// `(κ′, κ)`: the most common endpoint-degree gcd over edges (smallest on ties)
/// and its gcd with the edge count.
pub fn kappa_of(graph: &Graph) -> Result<(u64, u64)> {
    if graph.edge_count() == 0 {
        return validation("κ is undefined for a graph without edges");
    }
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &(u, v) in graph.edges() {
        *counts
            .entry(gcd(graph.degree(u) as u64, graph.degree(v) as u64))
            .or_default() += 1;
    }
    let (&kappa_prime, _) = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .expect("at least one edge");
    Ok((kappa_prime, gcd(graph.edge_count() as u64, kappa_prime)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::generate;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn basic_queries() {
        let g = generate::cycle(4).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(g.max_degree(), 2);
        assert!(g.has_edge(3, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.closed_neighbourhood(2), vec![1, 2, 3]);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_of(&generate::cycle(4).unwrap()).unwrap(), (2, 2));
        assert_eq!(kappa_of(&generate::star(3).unwrap()).unwrap(), (1, 1));
        assert_eq!(kappa_of(&generate::complete(4).unwrap()).unwrap(), (3, 3));
        assert!(kappa_of(&Graph::new(3, []).unwrap()).is_err());
    }

    #[test]
    fn kappa_tie_takes_smallest() {
        // P3 ∪ K2: every edge has gcd 1
        let g = Graph::new(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(kappa_of(&g).unwrap(), (1, 1));
        // C4 ∪ P3: four edges of gcd 2, two of gcd 1
        let g = generate::cycle(4)
            .unwrap()
            .disjoint_union(&Graph::new(3, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(kappa_of(&g).unwrap(), (2, 2));
        // K3 ∪ K1,3: three edges of gcd 2, three of gcd 1 -> tie -> 1
        let g = generate::complete(3)
            .unwrap()
            .disjoint_union(&generate::star(3).unwrap());
        assert_eq!(kappa_of(&g).unwrap(), (1, 1));
    }
}
