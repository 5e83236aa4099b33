use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{validation, Result};

pub fn cycle(k: usize) -> Result<Graph> {
    if k < 3 {
        return validation("a cycle needs at least 3 vertices");
    }
    Graph::new(k, (0..k).map(|i| (i, (i + 1) % k)))
}

pub fn path(k: usize) -> Result<Graph> {
    if k < 2 {
        return validation("a path needs at least 2 vertices");
    }
    Graph::new(k, (1..k).map(|i| (i - 1, i)))
}

pub fn complete(k: usize) -> Result<Graph> {
    if k < 2 {
        return validation("a complete graph needs at least 2 vertices");
    }
    Graph::new(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))))
}

/// `k` disjoint edges.
pub fn matching(k: usize) -> Result<Graph> {
    if k < 1 {
        return validation("a matching needs at least one edge");
    }
    Graph::new(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1)))
}

/// `K_{1,k}` with centre 0.
pub fn star(k: usize) -> Result<Graph> {
    if k < 1 {
        return validation("a star needs at least one leaf");
    }
    Graph::new(k + 1, (1..=k).map(|i| (0, i)))
}

/// Uniform-ish random `d`-regular graph on `n` vertices: configuration model with
/// restarts until the pairing is simple.
pub fn random_regular(d: usize, n: usize, seed: u64) -> Result<Graph> {
    if d >= n {
        return validation(format!("degree {d} is too large for {n} vertices"));
    }
    if (d * n) % 2 == 1 {
        return validation(format!("d·n = {} is odd", d * n));
    }
    if d == 0 {
        return Graph::new(n, []);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut attempt = 0usize;
    loop {
        attempt += 1;
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        assert!(attempt < 1_000_000, "pairing model failed to produce a simple graph");
        return Graph::new(n, edges);
    }
}
