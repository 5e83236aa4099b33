use rand::Rng;

use crate::abelian::{FiniteAbelianGroup, QuotientGroup, Subgroup};
use crate::error::{structural, validation, Result};

#[inline]
fn tri(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

/// Symmetric colouring of the pairs of `0..t` by elements of a group.
#[derive(Clone, Debug)]
pub struct EdgeColouring<G> {
    group: G,
    t: usize,
    values: Vec<u32>,
}

impl<G: FiniteAbelianGroup> EdgeColouring<G> {
    pub fn constant(group: &G, t: usize, value: usize) -> Self {
        EdgeColouring {
            group: group.clone(),
            t,
            values: vec![value as u32; t * t.saturating_sub(1) / 2],
        }
    }

    pub fn from_fn(group: &G, t: usize, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        let mut values = Vec::with_capacity(t * t.saturating_sub(1) / 2);
        for v in 1..t {
            for u in 0..v {
                values.push(f(u, v) as u32);
            }
        }
        EdgeColouring {
            group: group.clone(),
            t,
            values,
        }
    }

    /// Colours in triangular order `(0,1), (0,2), (1,2), (0,3), ...`.
    pub fn from_values(group: &G, t: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != t * t.saturating_sub(1) / 2 {
            return validation(format!("expected {} edge colours", t * t.saturating_sub(1) / 2));
        }
        if let Some(&bad) = values.iter().find(|&&g| g >= group.order()) {
            return validation(format!("colour index {bad} outside the group"));
        }
        Ok(EdgeColouring {
            group: group.clone(),
            t,
            values: values.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub fn random<R: Rng>(group: &G, t: usize, rng: &mut R) -> Self {
        let order = group.order();
        Self::from_fn(group, t, |_, _| rng.gen_range(0..order))
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    /// Number of vertices of the coloured complete graph.
    pub fn t(&self) -> usize {
        self.t
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> usize {
        debug_assert!(u != v && u < self.t && v < self.t);
        self.values[tri(u, v)] as usize
    }

    pub fn set(&mut self, u: usize, v: usize, value: usize) {
        assert!(u != v && u < self.t && v < self.t, "pair ({u},{v}) outside the colouring");
        self.values[tri(u, v)] = value as u32;
    }

    /// Colours in triangular order.
    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().map(|&x| x as usize)
    }

    pub fn map<H: FiniteAbelianGroup>(&self, group: &H, f: impl Fn(usize) -> usize) -> EdgeColouring<H> {
        EdgeColouring {
            group: group.clone(),
            t: self.t,
            values: self.values.iter().map(|&x| f(x as usize) as u32).collect(),
        }
    }

    /// Restriction to the first `t` vertices.
    pub fn truncate(&self, t: usize) -> Self {
        assert!(t <= self.t);
        EdgeColouring {
            group: self.group.clone(),
            t,
            values: self.values[..t * t.saturating_sub(1) / 2].to_vec(),
        }
    }
}

impl<G> PartialEq for EdgeColouring<G> {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t && self.values == other.values
    }
}

/// Group-valued labels on the vertices `0..t`.
#[derive(Clone, Debug)]
pub struct VertexColouring<G> {
    group: G,
    values: Vec<usize>,
}

impl<G: FiniteAbelianGroup> VertexColouring<G> {
    pub fn zero(group: &G, t: usize) -> Self {
        VertexColouring {
            group: group.clone(),
            values: vec![group.zero(); t],
        }
    }

    pub fn from_values(group: &G, values: Vec<usize>) -> Result<Self> {
        if values.iter().any(|&g| g >= group.order()) {
            return validation("vertex colour outside the group");
        }
        Ok(VertexColouring {
            group: group.clone(),
            values,
        })
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> usize {
        self.values[v]
    }

    pub fn set(&mut self, v: usize, value: usize) {
        self.values[v] = value;
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// `c(xy) + Σ_{u∈U} c(uy) + Σ_{v∈V} c(xv)`.
pub fn star_sum<G: FiniteAbelianGroup>(
    c: &EdgeColouring<G>,
    us: &[usize],
    y: usize,
    x: usize,
    vs: &[usize],
) -> Result<usize> {
    let t = c.t();
    if x == y {
        return validation("star centre edge needs two distinct vertices");
    }
    if let Some(&bad) = us.iter().chain(vs).chain([&x, &y]).find(|&&w| w >= t) {
        return validation(format!("vertex {bad} outside a pool of {t}"));
    }
    if us.contains(&y) || vs.contains(&x) {
        return validation("star leaves must differ from their centre");
    }
    let g = c.group();
    let mut acc = c.get(x, y);
    for &u in us {
        acc = g.add(acc, c.get(u, y));
    }
    for &v in vs {
        acc = g.add(acc, c.get(x, v));
    }
    Ok(acc)
}

/// `c(xy) = c₀(xy) − s − 𝒞(x) − 𝒞(y)`.
pub fn shift_colouring<G: FiniteAbelianGroup>(
    c0: &EdgeColouring<G>,
    s: usize,
    vc: &VertexColouring<G>,
) -> Result<EdgeColouring<G>> {
    if vc.len() < c0.t() {
        return structural("vertex colouring does not cover the pool");
    }
    let g = c0.group();
    Ok(EdgeColouring::from_fn(g, c0.t(), |u, v| {
        g.sub(g.sub(g.sub(c0.get(u, v), s), vc.get(u)), vc.get(v))
    }))
}

/// Inverse of [`shift_colouring`]: `c₀(xy) = c(xy) + s + 𝒞(x) + 𝒞(y)`.
pub fn unshift_colouring<G: FiniteAbelianGroup>(
    c: &EdgeColouring<G>,
    s: usize,
    vc: &VertexColouring<G>,
) -> Result<EdgeColouring<G>> {
    if vc.len() < c.t() {
        return structural("vertex colouring does not cover the pool");
    }
    let g = c.group();
    Ok(EdgeColouring::from_fn(g, c.t(), |u, v| {
        g.sum([c.get(u, v), s, vc.get(u), vc.get(v)])
    }))
}

/// Colour values pushed through `Γ → Γ/H`.
pub fn quotient_colouring<G: FiniteAbelianGroup>(
    c: &EdgeColouring<G>,
    h: &Subgroup<G>,
) -> Result<EdgeColouring<QuotientGroup<G>>> {
    let q = QuotientGroup::new(c.group(), h)?;
    Ok(project_colouring(c, &q))
}

pub fn project_colouring<G: FiniteAbelianGroup>(
    c: &EdgeColouring<G>,
    q: &QuotientGroup<G>,
) -> EdgeColouring<QuotientGroup<G>> {
    c.map(q, |x| q.project(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{generated_subgroup, psi, AbelianGroup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(m: &[u32]) -> AbelianGroup {
        AbelianGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn triangular_layout() {
        let g = z(&[7]);
        let c = EdgeColouring::from_fn(&g, 5, |u, v| (u + 2 * v) % 7);
        for u in 0..5 {
            for v in 0..5 {
                if u < v {
                    assert_eq!(c.get(u, v), (u + 2 * v) % 7);
                    assert_eq!(c.get(v, u), c.get(u, v));
                }
            }
        }
        assert_eq!(c.values().count(), 10);
    }

    #[test]
    fn star_sum_examples() {
        let z3 = z(&[3]);
        let c = EdgeColouring::constant(&z3, 4, 1);
        assert_eq!(star_sum(&c, &[], 0, 1, &[]).unwrap(), 1);
        assert_eq!(star_sum(&c, &[2], 0, 1, &[3]).unwrap(), 0);
        let zero = EdgeColouring::constant(&z3, 4, 0);
        assert_eq!(star_sum(&zero, &[2, 3], 0, 1, &[]).unwrap(), 0);
        assert!(star_sum(&c, &[], 0, 0, &[]).is_err());
        assert!(star_sum(&c, &[7], 0, 1, &[]).is_err());
    }

    #[test]
    fn shift_examples() {
        let z4 = z(&[4]);
        let c0 = EdgeColouring::constant(&z4, 3, 3);
        let vc = VertexColouring::from_values(&z4, vec![1, 2, 0]).unwrap();
        let c = shift_colouring(&c0, 1, &vc).unwrap();
        assert_eq!(c.get(0, 1), 3);
        let same = shift_colouring(&c0, 0, &VertexColouring::zero(&z4, 3)).unwrap();
        assert_eq!(same, c0);
        let flat = shift_colouring(&c0, 3, &VertexColouring::zero(&z4, 3)).unwrap();
        assert!(flat.values().all(|x| x == 0));
    }

    #[test]
    fn shift_round_trip_exhaustive_small() {
        let g = z(&[2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in 2..=12 {
            let c0 = EdgeColouring::random(&g, t, &mut rng);
            let vc = VertexColouring::from_values(&g, (0..t).map(|i| (i * 5) % 6).collect()).unwrap();
            for s in 0..6 {
                let back = unshift_colouring(&shift_colouring(&c0, s, &vc).unwrap(), s, &vc).unwrap();
                assert_eq!(back, c0);
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let z4 = z(&[4]);
        let c = EdgeColouring::from_fn(&z4, 4, |u, v| (u + v) % 4);
        let same = quotient_colouring(&c, &Subgroup::trivial(&z4)).unwrap();
        assert!(c.values().zip(same.values()).all(|(a, b)| a == b));
        let flat = quotient_colouring(&c, &Subgroup::whole(&z4)).unwrap();
        assert!(flat.values().all(|x| x == 0));
        assert_eq!(flat.group().order(), 1);
        let h = generated_subgroup(&z4, [2]).unwrap();
        let half = quotient_colouring(&c, &h).unwrap();
        for (a, b) in c.values().zip(half.values()) {
            assert_eq!(b, a % 2);
        }
    }

    #[test]
    fn double_quotient_matches_lift() {
        let g = z(&[2, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = EdgeColouring::random(&g, 7, &mut rng);
        let inner = generated_subgroup(&g, [4]).unwrap();
        let q1 = QuotientGroup::new(&g, &inner).unwrap();
        let c1 = project_colouring(&c, &q1);
        for outer in crate::abelian::enumerate_subgroups(&q1).unwrap() {
            let c2 = quotient_colouring(&c1, &outer).unwrap();
            let lifted = psi(&outer, &q1).unwrap();
            let direct = quotient_colouring(&c, &lifted).unwrap();
            let q2 = QuotientGroup::new(&q1, &outer).unwrap();
            let qd = QuotientGroup::new(&g, &lifted).unwrap();
            // canonical isomorphism: a coset of ψ maps to the double coset of its representative
            for (a, b) in c2.values().zip(direct.values()) {
                assert_eq!(a, q2.project(q1.project(qd.representative(b))));
            }
        }
    }
}
