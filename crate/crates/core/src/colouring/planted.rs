use rand::seq::SliceRandom;
use rand::Rng;

use super::EdgeColouring;
use crate::abelian::FiniteAbelianGroup;
use crate::error::{validation, Result};
use crate::graphs::Graph;

/// Uniform random colouring of `K_t` with one zero-sum copy of `graph` planted at a
/// random injection. Returns the colouring and the injection.
pub fn planted_colouring<G: FiniteAbelianGroup, R: Rng>(
    group: &G,
    t: usize,
    graph: &Graph,
    rng: &mut R,
) -> Result<(EdgeColouring<G>, Vec<usize>)> {
    if graph.vertex_count() > t {
        return validation(format!("{} vertices do not fit in a pool of {t}", graph.vertex_count()));
    }
    let mut c = EdgeColouring::random(group, t, rng);
    let mut pool: Vec<usize> = (0..t).collect();
    pool.shuffle(rng);
    let image: Vec<usize> = pool[..graph.vertex_count()].to_vec();
    if let Some((&(u0, v0), rest)) = graph.edges().split_first() {
        let others = group.sum(rest.iter().map(|&(u, v)| c.get(image[u], image[v])));
        c.set(image[u0], image[v0], group.neg(others));
    }
    Ok((c, image))
}
