use num_bigint::BigInt;
use serde::Serialize;

use super::{EdgeColouring, VertexColouring};
use crate::abelian::{AbelianGroup, FiniteAbelianGroup, Subgroup};
use crate::error::{validation, Result};

/// `(R, Γ′, T, 𝒞, s)`: the colouring agrees with `s + 𝒞(x) + 𝒞(y)` modulo `Γ′` on `R`.
#[derive(Clone, Debug)]
pub struct WellBehavedTuple {
    /// Sorted pool vertices.
    pub pool: Vec<usize>,
    pub subgroup: Subgroup<AbelianGroup>,
    /// Sorted colour values.
    pub values: Vec<usize>,
    /// Vertex colours over the ambient pool; only entries in `pool` matter.
    pub colours: VertexColouring<AbelianGroup>,
    pub shift: usize,
}

impl WellBehavedTuple {
    /// `(R₀, Γ₀, {0}, 0, 0)`.
    pub fn trivial(group: &AbelianGroup, ambient: usize) -> Self {
        WellBehavedTuple {
            pool: (0..ambient).collect(),
            subgroup: Subgroup::whole(group),
            values: vec![group.zero()],
            colours: VertexColouring::zero(group, ambient),
            shift: group.zero(),
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        self.subgroup.group()
    }

    /// `σ = |Γ′|`.
    pub fn size(&self) -> usize {
        self.subgroup.order()
    }

    /// `(R, Γ′, T − r, 𝒞 − r, s + 2r)`, which satisfies the same clauses.
    pub fn translate(&self, r: usize) -> Self {
        let g = self.group();
        let mut values: Vec<usize> = self.values.iter().map(|&t| g.sub(t, r)).collect();
        values.sort_unstable();
        values.dedup();
        let mut colours = self.colours.clone();
        for &v in &self.pool {
            colours.set(v, g.sub(colours.get(v), r));
        }
        WellBehavedTuple {
            pool: self.pool.clone(),
            subgroup: self.subgroup.clone(),
            values,
            colours,
            shift: g.add(self.shift, g.scalar_mul(2, r)),
        }
    }

    /// Vertices of `R` with colour `value`.
    pub fn class(&self, value: usize) -> Vec<usize> {
        self.pool
            .iter()
            .copied()
            .filter(|&v| self.colours.get(v) == value)
            .collect()
    }
}

/// Sizes entering the pool-size clause.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WellBehavedParams {
    pub ambient: usize,
    pub n: usize,
    pub delta: usize,
    pub alpha: u64,
    pub beta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellBehavedReport {
    /// First pair of `R` breaking the congruence.
    pub congruence_violation: Option<(usize, usize)>,
    /// A vertex of `R` coloured outside `T`.
    pub colour_outside_values: Option<usize>,
    /// A value `t` with `κt ∉ Γ′`.
    pub order_violation: Option<usize>,
    /// Whether `|Γ′| ≥ n/α`, selecting the first pool-size bound.
    pub large_subgroup: bool,
    pub pool_size_ok: bool,
}

impl WellBehavedReport {
    pub fn congruence(&self) -> bool {
        self.congruence_violation.is_none()
    }

    pub fn orders(&self) -> bool {
        self.order_violation.is_none() && self.colour_outside_values.is_none()
    }

    pub fn holds(&self) -> bool {
        self.congruence() && self.orders() && self.pool_size_ok
    }
}

fn congruence_violation(
    c0: &EdgeColouring<AbelianGroup>,
    tuple: &WellBehavedTuple,
) -> Option<(usize, usize)> {
    let g = tuple.group();
    for (i, &x) in tuple.pool.iter().enumerate() {
        for &y in &tuple.pool[i + 1..] {
            let rest = g.sub(
                g.sub(g.sub(c0.get(x, y), tuple.shift), tuple.colours.get(x)),
                tuple.colours.get(y),
            );
            if !tuple.subgroup.contains(rest) {
                return Some((x, y));
            }
        }
    }
    None
}

fn pool_size_ok(pool: usize, sigma: usize, p: &WellBehavedParams) -> (bool, bool) {
    let big = |x: u64| BigInt::from(x);
    let d = p.delta as u64;
    let n = big(p.n as u64);
    let sigma_b = big(sigma as u64);
    let r = big(pool as u64);
    let loss = big(14 * d * d * d) * (&n - &sigma_b);
    let large = &sigma_b * big(p.alpha) >= n;
    if large {
        (true, r >= big(p.ambient as u64) - loss)
    } else {
        // multiply through by αβ^{2Δ}·σ
        let shrink = big(p.alpha) * num_bigint::BigInt::from(p.beta).pow(2 * p.delta as u32);
        let lhs = &r * &shrink * &sigma_b;
        let rhs = big(p.ambient as u64) * &sigma_b
            - &loss * &shrink * &sigma_b
            - big(6 * d * d) * &n * &shrink;
        (false, lhs >= rhs)
    }
}

/// Evaluates the three defining clauses.
pub fn is_well_behaved(
    c0: &EdgeColouring<AbelianGroup>,
    tuple: &WellBehavedTuple,
    kappa: u64,
    params: &WellBehavedParams,
) -> Result<WellBehavedReport> {
    let g = tuple.group();
    if c0.group().moduli() != g.moduli() {
        return validation("tuple and colouring use different groups");
    }
    if let Some(&v) = tuple.pool.iter().find(|&&v| v >= c0.t() || v >= tuple.colours.len()) {
        return validation(format!("pool vertex {v} outside the colouring"));
    }
    let colour_outside_values = tuple
        .pool
        .iter()
        .copied()
        .find(|&v| tuple.values.binary_search(&tuple.colours.get(v)).is_err());
    let order_violation = tuple
        .values
        .iter()
        .copied()
        .find(|&t| !tuple.subgroup.contains(g.scalar_mul(kappa as i64, t)));
    let (large_subgroup, pool_size_ok) = pool_size_ok(tuple.pool.len(), tuple.size(), params);
    Ok(WellBehavedReport {
        congruence_violation: congruence_violation(c0, tuple),
        colour_outside_values,
        order_violation,
        large_subgroup,
        pool_size_ok,
    })
}

/// Merges colours lying in one coset of `Γ′` onto the smallest value of `T` in that coset.
pub fn normalize_t(tuple: &WellBehavedTuple) -> WellBehavedTuple {
    let g = tuple.group();
    let canon = |v: usize| {
        tuple
            .values
            .iter()
            .copied()
            .filter(|&t| tuple.subgroup.contains(g.sub(v, t)))
            .min()
            .unwrap_or(v)
    };
    let mut values: Vec<usize> = tuple.values.iter().map(|&t| canon(t)).collect();
    values.sort_unstable();
    values.dedup();
    let mut colours = tuple.colours.clone();
    for &v in &tuple.pool {
        colours.set(v, canon(colours.get(v)));
    }
    assert!(
        values.len() * tuple.size() <= g.order(),
        "merged colours occupy distinct cosets"
    );
    WellBehavedTuple {
        pool: tuple.pool.clone(),
        subgroup: tuple.subgroup.clone(),
        values,
        colours,
        shift: tuple.shift,
    }
}
