use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{validation, Error, Result};

/// Arithmetic on a finite abelian group whose elements are identified by
/// indices `0..order()`.
///
/// Index `0` is always the identity, and index order coincides with the
/// lexicographic order of the canonical element labels, so "smallest element"
/// and "smallest index" mean the same thing everywhere in the crate.
pub trait FiniteAbelianGroup: Clone + fmt::Debug + Send + Sync {
    fn order(&self) -> usize;
    fn add(&self, a: usize, b: usize) -> usize;
    fn neg(&self, a: usize) -> usize;
    /// Human readable label of an element.
    fn label(&self, a: usize) -> String;

    fn zero(&self) -> usize {
        0
    }

    fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k·a` for any integer `k`; negative multiples go through `neg`.
    fn scalar_mul(&self, k: i64, a: usize) -> usize {
        let mut base = if k < 0 { self.neg(a) } else { a };
        let mut k = k.unsigned_abs();
        let mut acc = self.zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Sum of an iterator of elements.
    fn sum<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.zero(), |acc, x| self.add(acc, x))
    }
}

/// Element of an [`AbelianGroup`] written as a residue tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    residues: SmallVec<[u32; 4]>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u32] {
        &self.residues
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct GroupData {
    moduli: Vec<u32>,
    // strides[i] = product of moduli[i+1..]
    strides: Vec<usize>,
    order: usize,
}

/// `Z_{m1} × … × Z_{mk}`, kept exactly as written (not canonicalized).
///
/// The empty factor list is the trivial group. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup(Arc<GroupData>);

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AbelianGroup {
    /// Builds `Z_{m1} × … × Z_{mk}`; every modulus must be at least 2.
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return validation(format!("cyclic factor order {m} is below 2"));
        }
        let mut strides = vec![1usize; moduli.len()];
        let mut order: usize = 1;
        for i in (0..moduli.len()).rev() {
            strides[i] = order;
            order = order
                .checked_mul(moduli[i] as usize)
                .ok_or_else(|| Error::Validation("group order overflows".into()))?;
        }
        Ok(AbelianGroup(Arc::new(GroupData {
            moduli,
            strides,
            order,
        })))
    }

    pub fn cyclic(m: u32) -> Result<Self> {
        if m == 1 {
            return Self::new(vec![]);
        }
        Self::new(vec![m])
    }

    pub fn trivial() -> Self {
        Self::new(vec![]).expect("empty factor list is valid")
    }

    pub fn moduli(&self) -> &[u32] {
        &self.0.moduli
    }

    pub fn rank(&self) -> usize {
        self.0.moduli.len()
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.0
            .moduli
            .iter()
            .fold(1u64, |acc, &m| acc / gcd(acc, m as u64) * m as u64)
    }

    pub fn element(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.0.order);
        let residues = self
            .0
            .moduli
            .iter()
            .zip(&self.0.strides)
            .map(|(&m, &s)| ((index / s) % m as usize) as u32)
            .collect();
        GroupElement { residues }
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(g
            .residues
            .iter()
            .zip(&self.0.strides)
            .map(|(&r, &s)| r as usize * s)
            .sum())
    }

    /// Reduces arbitrary integers into an element.
    pub fn element_from(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.rank() {
            return validation(format!(
                "element has {} components, group {} has {}",
                residues.len(),
                self,
                self.rank()
            ));
        }
        let residues = residues
            .iter()
            .zip(&self.0.moduli)
            .map(|(&r, &m)| r.rem_euclid(m as i64) as u32)
            .collect();
        Ok(GroupElement { residues })
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.residues.len() != self.rank() {
            return Err(Error::Structural(format!(
                "element {g} does not belong to {self}"
            )));
        }
        for (&r, &m) in g.residues.iter().zip(&self.0.moduli) {
            if r >= m {
                return Err(Error::Structural(format!(
                    "residue {r} of {g} is not reduced modulo {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn zero_element(&self) -> GroupElement {
        self.element(0)
    }

    pub fn add_elements(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        let residues = g
            .residues
            .iter()
            .zip(&h.residues)
            .zip(&self.0.moduli)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn neg_element(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.0.moduli)
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn scalar_mul_element(&self, k: i64, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.0.moduli)
            .map(|(&a, &m)| {
                let m = m as i64;
                ((k.rem_euclid(m) * a as i64) % m) as u32
            })
            .collect();
        Ok(GroupElement { residues })
    }

    /// Parses `"(1,3)"` (or `"1,3"`, or `"()"` for the trivial group).
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body)
            .trim();
        let parts: Vec<i64> = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad residue {p:?} in element {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        if parts.len() != self.rank() {
            return Err(Error::Parse(format!(
                "element {s:?} has {} components, group {self} has {}",
                parts.len(),
                self.rank()
            )));
        }
        for (&r, &m) in parts.iter().zip(self.moduli()) {
            if r < 0 || r >= m as i64 {
                return Err(Error::Parse(format!(
                    "residue {r} in {s:?} out of range for modulus {m}"
                )));
            }
        }
        self.element_from(&parts)
    }

    /// Additive order of `g`, the least `t ≥ 1` with `t·g = 0`.
    pub fn element_order(&self, index: usize) -> u64 {
        self.element(index)
            .residues
            .iter()
            .zip(&self.0.moduli)
            .fold(1u64, |acc, (&r, &m)| {
                let ord = m as u64 / gcd(r as u64, m as u64);
                acc / gcd(acc, ord) * ord
            })
    }
}

impl FiniteAbelianGroup for AbelianGroup {
    fn order(&self) -> usize {
        self.0.order
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&m, &s) in self.0.moduli.iter().zip(&self.0.strides) {
            let m = m as usize;
            let x = (a / s) % m;
            let y = (b / s) % m;
            let z = x + y;
            out += if z >= m { z - m } else { z } * s;
        }
        out
    }

    fn neg(&self, a: usize) -> usize {
        let mut out = 0;
        for (&m, &s) in self.0.moduli.iter().zip(&self.0.strides) {
            let m = m as usize;
            let x = (a / s) % m;
            out += ((m - x) % m) * s;
        }
        out
    }

    fn label(&self, a: usize) -> String {
        self.element(a).to_string()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.moduli.is_empty() {
            return write!(f, "Z1");
        }
        for (i, m) in self.0.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Accepts `"Z2xZ4"`; `"Z1"` factors are dropped, so `"Z1"` is trivial.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty group literal".into()));
        }
        let mut moduli = Vec::new();
        for factor in s.split(['x', 'X', '×']) {
            let digits = factor
                .trim()
                .strip_prefix('Z')
                .ok_or_else(|| Error::Parse(format!("bad cyclic factor {factor:?} in {s:?}")))?;
            let m: u32 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad cyclic factor {factor:?} in {s:?}")))?;
            match m {
                0 => return Err(Error::Parse(format!("cyclic factor Z0 in {s:?}"))),
                1 => {}
                m => moduli.push(m),
            }
        }
        AbelianGroup::new(moduli)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn prime_factorization(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Canonical isomorphic group `Z_{m1} × … × Z_{mk}` with `m1 | m2 | … | mk`.
pub fn invariant_factors(moduli: &[u32]) -> Result<AbelianGroup> {
    if let Some(m) = moduli.iter().find(|&&m| m < 2) {
        return validation(format!("cyclic factor order {m} is below 2"));
    }
    // prime -> exponents of its cyclic p-parts across all factors
    let mut parts: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &m in moduli {
        for (p, e) in prime_factorization(m as u64) {
            parts.entry(p).or_default().push(e);
        }
    }
    let k = parts.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; k];
    for (p, mut exps) in parts {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        // largest powers go to the last (largest) invariant factor
        for (j, e) in exps.into_iter().enumerate() {
            factors[k - 1 - j] *= p.pow(e);
        }
    }
    let factors = factors
        .into_iter()
        .map(|f| {
            u32::try_from(f).map_err(|_| Error::Validation("invariant factor overflows u32".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    AbelianGroup::new(factors)
}

fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=n.min(max)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

/// Every abelian group of order `n` up to isomorphism, in invariant-factor form.
pub fn groups_of_order(n: u32) -> Vec<AbelianGroup> {
    if n == 0 {
        return Vec::new();
    }
    let mut choices: Vec<Vec<Vec<u64>>> = Vec::new();
    for (p, a) in prime_factorization(n as u64) {
        let mut ps = Vec::new();
        partitions(a, a, &mut Vec::new(), &mut ps);
        choices.push(
            ps.into_iter()
                .map(|part| part.into_iter().map(|e| p.pow(e)).collect())
                .collect(),
        );
    }
    let mut out = Vec::new();
    for combo in itertools::Itertools::multi_cartesian_product(choices.iter().map(|c| c.iter())) {
        let moduli: Vec<u32> = combo.iter().flat_map(|v| v.iter().map(|&x| x as u32)).collect();
        out.push(invariant_factors(&moduli).expect("prime powers are valid moduli"));
    }
    if out.is_empty() {
        out.push(AbelianGroup::trivial());
    }
    out.sort_by(|a, b| a.moduli().cmp(b.moduli()));
    out
}

/// All groups of order `1..=max_order`.
pub fn groups_up_to(max_order: u32) -> Vec<AbelianGroup> {
    (1..=max_order).flat_map(groups_of_order).collect()
}
