use num_bigint::BigUint;

use super::{generated_subgroup, Coset, ElementSet, FiniteAbelianGroup, Subgroup, SubgroupLattice};
use crate::error::{validation, Result};

/// `{a + b : a ∈ A, b ∈ B}`.
pub fn sumset<G: FiniteAbelianGroup>(group: &G, a: &ElementSet, b: &ElementSet) -> ElementSet {
    let mut out = ElementSet::empty(group.order());
    for x in a.iter() {
        for y in b.iter() {
            out.insert(group.add(x, y));
        }
    }
    out
}

/// Which disjuncts of the Kneser alternative hold for a pair of sets.
#[derive(Clone, Debug)]
pub struct KneserReport<G> {
    pub sum_size: usize,
    /// `min(|Γ|, |A| + |B| − 1)`.
    pub cardinality_floor: usize,
    pub cardinality: bool,
    /// Largest nontrivial coset inside `A + B`, if any.
    pub coset: Option<Coset<G>>,
}

impl<G> KneserReport<G> {
    pub fn holds(&self) -> bool {
        self.cardinality || self.coset.is_some()
    }
}

pub fn kneser_check<G: FiniteAbelianGroup>(
    lattice: &SubgroupLattice<G>,
    a: &ElementSet,
    b: &ElementSet,
) -> Result<KneserReport<G>> {
    if a.is_empty() || b.is_empty() {
        return validation("kneser_check needs two nonempty sets");
    }
    let group = lattice.group();
    let sum = sumset(group, a, b);
    let floor = group.order().min(a.len() + b.len() - 1);
    Ok(KneserReport {
        sum_size: sum.len(),
        cardinality_floor: floor,
        cardinality: sum.len() >= floor,
        coset: find_coset_in(lattice, &sum),
    })
}

/// A coset `a + H ⊆ S` of a nontrivial subgroup of maximum order. Ties go to the
/// earlier subgroup in enumeration order, then to the smallest representative.
pub fn find_coset_in<G: FiniteAbelianGroup>(
    lattice: &SubgroupLattice<G>,
    s: &ElementSet,
) -> Option<Coset<G>> {
    let group = lattice.group();
    let subs = lattice.subgroups();
    let mut best: Option<Coset<G>> = None;
    for h in subs.iter() {
        if h.is_trivial() || h.order() > s.len() {
            continue;
        }
        if let Some(found) = &best {
            if h.order() <= found.subgroup().order() {
                continue;
            }
        }
        let fits = s
            .iter()
            .find(|&a| h.members().iter().all(|x| s.contains(group.add(a, x))));
        if let Some(a) = fits {
            best = Some(Coset::new(a, h.clone()));
        }
    }
    best
}

/// `|{g : κg = 0}|`, with "order κ" in the weak sense.
pub fn order_kappa_count<G: FiniteAbelianGroup>(group: &G, kappa: u64) -> usize {
    (0..group.order())
        .filter(|&g| group.scalar_mul(kappa as i64, g) == group.zero())
        .count()
}

/// Both sides of `|⟨X⟩| · K ≤ |Γ| · κ^|X|` where `K` counts elements killed by κ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedBoundReport {
    pub generated_order: usize,
    pub kappa_count: usize,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

pub fn generated_bound_check<G: FiniteAbelianGroup>(
    group: &G,
    kappa: u64,
    x: &[usize],
) -> Result<GeneratedBoundReport> {
    if kappa == 0 {
        return validation("κ must be at least 1");
    }
    let generated_order = generated_subgroup(group, x.iter().copied())?.order();
    let kappa_count = order_kappa_count(group, kappa);
    let mut distinct = x.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let lhs = BigUint::from(generated_order) * BigUint::from(kappa_count);
    let rhs = BigUint::from(group.order()) * BigUint::from(kappa).pow(distinct.len() as u32);
    Ok(GeneratedBoundReport {
        generated_order,
        kappa_count,
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// `(r + H) + B`, the lifting step used after each quotient round.
pub fn coset_plus_covering<G: FiniteAbelianGroup>(
    group: &G,
    r: usize,
    h: &Subgroup<G>,
    b: &ElementSet,
) -> ElementSet {
    sumset(group, &h.members().translate(group, r), b)
}
