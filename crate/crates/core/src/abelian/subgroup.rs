use std::collections::HashSet;

use super::{ElementSet, FiniteAbelianGroup};
use crate::error::{structural, Error, Result};

/// Default ceiling on the group order for subgroup enumeration.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// A subgroup stored as its explicit element set.
#[derive(Clone, Debug)]
pub struct Subgroup<G> {
    group: G,
    members: ElementSet,
}

impl<G: FiniteAbelianGroup> Subgroup<G> {
    /// Wraps `members` after checking the subgroup axioms and Lagrange.
    pub fn from_members(group: &G, members: ElementSet) -> Result<Self> {
        if members.universe() != group.order() {
            return structural("element set is over a different group");
        }
        if !members.contains(group.zero()) {
            return structural("subgroup candidate does not contain zero");
        }
        for a in members.iter() {
            if !members.contains(group.neg(a)) {
                return structural(format!("not closed under negation at {}", group.label(a)));
            }
            for b in members.iter() {
                if !members.contains(group.add(a, b)) {
                    return structural(format!(
                        "not closed under addition at {} + {}",
                        group.label(a),
                        group.label(b)
                    ));
                }
            }
        }
        if !group.order().is_multiple_of(members.len()) {
            return structural("subgroup size does not divide the group order");
        }
        Ok(Subgroup {
            group: group.clone(),
            members,
        })
    }

    pub(crate) fn from_members_unchecked(group: &G, members: ElementSet) -> Self {
        debug_assert!(members.contains(group.zero()));
        Subgroup {
            group: group.clone(),
            members,
        }
    }

    pub fn trivial(group: &G) -> Self {
        Self::from_members_unchecked(group, ElementSet::from_elements(group.order(), [group.zero()]))
    }

    pub fn whole(group: &G) -> Self {
        Self::from_members_unchecked(group, ElementSet::full(group.order()))
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.group.order()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    /// `self + ⟨g⟩`.
    pub fn join_element(&self, g: usize) -> Self {
        let group = &self.group;
        let mut members = self.members.clone();
        let mut step = g;
        while !self.members.contains(step) {
            for h in self.members.iter() {
                members.insert(group.add(step, h));
            }
            step = group.add(step, g);
        }
        Self::from_members_unchecked(group, members)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup<G>) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl<G> PartialEq for Subgroup<G> {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl<G> Eq for Subgroup<G> {}

/// Smallest subgroup containing `generators`; `⟨∅⟩ = {0}`.
pub fn generated_subgroup<G: FiniteAbelianGroup>(
    group: &G,
    generators: impl IntoIterator<Item = usize>,
) -> Result<Subgroup<G>> {
    let mut sub = Subgroup::trivial(group);
    for g in generators {
        if g >= group.order() {
            return Err(Error::Structural(format!(
                "element index {g} outside a group of order {}",
                group.order()
            )));
        }
        if !sub.contains(g) {
            sub = sub.join_element(g);
        }
    }
    Ok(sub)
}

/// Every subgroup exactly once, ordered by size and then by sorted element list.
pub fn enumerate_subgroups<G: FiniteAbelianGroup>(group: &G) -> Result<Vec<Subgroup<G>>> {
    enumerate_subgroups_capped(group, DEFAULT_ORDER_CAP)
}

pub fn enumerate_subgroups_capped<G: FiniteAbelianGroup>(
    group: &G,
    cap: usize,
) -> Result<Vec<Subgroup<G>>> {
    if group.order() > cap {
        return Err(Error::Capacity {
            what: "group order",
            actual: group.order(),
            cap,
        });
    }
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let mut found = Vec::new();
    let mut frontier = vec![Subgroup::trivial(group)];
    seen.insert(frontier[0].members.clone());
    while let Some(sub) = frontier.pop() {
        // S + ⟨g⟩ depends only on the coset g + S, so one representative per coset suffices
        let mut covered = sub.members.clone();
        for g in 0..group.order() {
            if covered.contains(g) {
                continue;
            }
            for h in sub.members.iter() {
                covered.insert(group.add(g, h));
            }
            let bigger = sub.join_element(g);
            if seen.insert(bigger.members.clone()) {
                frontier.push(bigger);
            }
        }
        found.push(sub);
    }
    found.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members.lex_cmp(&b.members))
    });
    Ok(found)
}

/// Enumerated subgroups of one group, kept for repeated coset searches.
#[derive(Clone, Debug)]
pub struct SubgroupLattice<G> {
    group: G,
    subgroups: Vec<Subgroup<G>>,
}

impl<G: FiniteAbelianGroup> SubgroupLattice<G> {
    pub fn new(group: &G) -> Result<Self> {
        Self::with_cap(group, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(group: &G, cap: usize) -> Result<Self> {
        Ok(SubgroupLattice {
            group: group.clone(),
            subgroups: enumerate_subgroups_capped(group, cap)?,
        })
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    /// In enumeration order.
    pub fn subgroups(&self) -> &[Subgroup<G>] {
        &self.subgroups
    }
}

/// `representative + subgroup`.
#[derive(Clone, Debug)]
pub struct Coset<G> {
    representative: usize,
    subgroup: Subgroup<G>,
}

impl<G: FiniteAbelianGroup> Coset<G> {
    pub fn new(representative: usize, subgroup: Subgroup<G>) -> Self {
        Coset {
            representative,
            subgroup,
        }
    }

    pub fn representative(&self) -> usize {
        self.representative
    }

    pub fn subgroup(&self) -> &Subgroup<G> {
        &self.subgroup
    }

    pub fn contains(&self, g: usize) -> bool {
        let group = self.subgroup.group();
        self.subgroup.contains(group.sub(g, self.representative))
    }

    pub fn elements(&self) -> ElementSet {
        self.subgroup
            .members()
            .translate(self.subgroup.group(), self.representative)
    }
}

impl<G: FiniteAbelianGroup> PartialEq for Coset<G> {
    fn eq(&self, other: &Self) -> bool {
        self.subgroup == other.subgroup && self.contains(other.representative)
    }
}
