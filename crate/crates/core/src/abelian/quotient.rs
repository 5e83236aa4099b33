use std::fmt;
use std::sync::Arc;

use super::{ElementSet, FiniteAbelianGroup, Subgroup};
use crate::error::{structural, Result};

struct QuotientData<G> {
    parent: G,
    divisor: Subgroup<G>,
    /// Smallest element of each coset, ascending; position = coset index.
    reps: Vec<usize>,
    /// Parent element -> coset index.
    projection: Vec<usize>,
}

/// `parent / divisor`, with cosets indexed in order of their canonical representative.
pub struct QuotientGroup<G>(Arc<QuotientData<G>>);

impl<G> Clone for QuotientGroup<G> {
    fn clone(&self) -> Self {
        QuotientGroup(Arc::clone(&self.0))
    }
}

impl<G: FiniteAbelianGroup> fmt::Debug for QuotientGroup<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Quotient({:?} / order {})",
            self.0.parent,
            self.0.divisor.order()
        )
    }
}

impl<G: FiniteAbelianGroup> QuotientGroup<G> {
    pub fn new(parent: &G, divisor: &Subgroup<G>) -> Result<Self> {
        if divisor.members().universe() != parent.order() {
            return structural("divisor is not a subgroup of the parent group");
        }
        let n = parent.order();
        let mut projection = vec![usize::MAX; n];
        let mut reps = Vec::with_capacity(n / divisor.order());
        for g in 0..n {
            if projection[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for h in divisor.members().iter() {
                let x = parent.add(g, h);
                if projection[x] != usize::MAX {
                    return structural("divisor is not closed under addition");
                }
                projection[x] = idx;
            }
        }
        Ok(QuotientGroup(Arc::new(QuotientData {
            parent: parent.clone(),
            divisor: divisor.clone(),
            reps,
            projection,
        })))
    }

    pub fn parent(&self) -> &G {
        &self.0.parent
    }

    pub fn divisor(&self) -> &Subgroup<G> {
        &self.0.divisor
    }

    /// Coset index of a parent element.
    pub fn project(&self, g: usize) -> usize {
        self.0.projection[g]
    }

    /// Canonical (smallest) representative of coset `q`.
    pub fn representative(&self, q: usize) -> usize {
        self.0.reps[q]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.0.reps
    }

    /// Parent elements of coset `q`.
    pub fn coset_elements(&self, q: usize) -> ElementSet {
        self.0.divisor.members().translate(&self.0.parent, self.0.reps[q])
    }

    pub fn project_set(&self, s: &ElementSet) -> ElementSet {
        ElementSet::from_elements(self.order(), s.iter().map(|g| self.project(g)))
    }

    /// Full preimage of a set of cosets.
    pub fn preimage(&self, s: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.0.parent.order());
        for q in s.iter() {
            out.union_with(&self.coset_elements(q));
        }
        out
    }
}

impl<G: FiniteAbelianGroup> FiniteAbelianGroup for QuotientGroup<G> {
    fn order(&self) -> usize {
        self.0.reps.len()
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let d = &self.0;
        d.projection[d.parent.add(d.reps[a], d.reps[b])]
    }

    fn neg(&self, a: usize) -> usize {
        let d = &self.0;
        d.projection[d.parent.neg(d.reps[a])]
    }

    fn label(&self, a: usize) -> String {
        self.0.parent.label(self.0.reps[a])
    }
}

/// Lift of `sub ≤ parent/H′` back to the parent: the union of its cosets of H′.
pub fn psi<G: FiniteAbelianGroup>(
    sub: &Subgroup<QuotientGroup<G>>,
    quotient: &QuotientGroup<G>,
) -> Result<Subgroup<G>> {
    let reps: Vec<usize> = sub.members().iter().map(|q| quotient.representative(q)).collect();
    psi_with_representatives(sub, quotient, &reps)
}

/// Same as [`psi`] but with caller-chosen coset representatives, one per member of `sub`
/// in ascending coset order.
pub fn psi_with_representatives<G: FiniteAbelianGroup>(
    sub: &Subgroup<QuotientGroup<G>>,
    quotient: &QuotientGroup<G>,
    reps: &[usize],
) -> Result<Subgroup<G>> {
    if sub.members().universe() != quotient.order() {
        return structural("subgroup does not belong to this quotient");
    }
    if reps.len() != sub.order() {
        return structural("need exactly one representative per coset");
    }
    let parent = quotient.parent();
    let inner = quotient.divisor();
    let mut out = ElementSet::empty(parent.order());
    for (q, &a) in sub.members().iter().zip(reps) {
        if a >= parent.order() || quotient.project(a) != q {
            return structural(format!("{} does not represent coset {q}", parent.label(a)));
        }
        for h in inner.members().iter() {
            out.insert(parent.add(a, h));
        }
    }
    Ok(Subgroup::from_members_unchecked(parent, out))
}
