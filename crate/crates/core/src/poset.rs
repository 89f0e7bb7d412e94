//! Finite posets with small integer element ids.
//!
//! Every simplicial set handled by this crate is a subcomplex of the nerve of one of
//! these. The common ambients are linear orders `[n]`, Boolean lattices on `n` bits
//! (elements are the bitmasks themselves) and products `P x [1]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PosetRepr", into = "PosetRepr")]
pub struct Poset {
    elements: Vec<u32>,
    index: BTreeMap<u32, usize>,
    // row-major, leq[a * len + b] iff elements[a] <= elements[b]
    leq: Vec<bool>,
}

/// Wire form: elements plus the covering relation of the Hasse diagram.
#[derive(Serialize, Deserialize)]
struct PosetRepr {
    elements: Vec<u32>,
    covers: Vec<(u32, u32)>,
}

impl TryFrom<PosetRepr> for Poset {
    type Error = Error;

    fn try_from(r: PosetRepr) -> Result<Self> {
        Poset::from_generating_pairs(r.elements, r.covers)
    }
}

impl From<Poset> for PosetRepr {
    fn from(p: Poset) -> Self {
        PosetRepr {
            covers: p.covers(),
            elements: p.elements,
        }
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.elements)
            .field("covers", &self.covers())
            .finish()
    }
}

impl Poset {
    /// Builds a poset from an explicit `<=` relation, given as pairs `(a, b)` meaning `a <= b`.
    ///
    /// The relation must already be reflexive, antisymmetric and transitive.
    pub fn new(elements: Vec<u32>, leq_pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut poset = Self::bare(elements)?;
        for (a, b) in leq_pairs {
            poset.set(a, b)?;
        }
        poset.check_axioms(true)?;
        Ok(poset)
    }

    /// Builds the reflexive-transitive closure of a generating relation and checks antisymmetry.
    pub fn from_generating_pairs(elements: Vec<u32>, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut poset = Self::bare(elements)?;
        let len = poset.len();
        for i in 0..len {
            poset.leq[i * len + i] = true;
        }
        for (a, b) in pairs {
            poset.set(a, b)?;
        }
        // Warshall
        for k in 0..len {
            for i in 0..len {
                if !poset.leq[i * len + k] {
                    continue;
                }
                for j in 0..len {
                    if poset.leq[k * len + j] {
                        poset.leq[i * len + j] = true;
                    }
                }
            }
        }
        poset.check_axioms(false)?;
        Ok(poset)
    }

    fn bare(elements: Vec<u32>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, &e) in elements.iter().enumerate() {
            if index.insert(e, i).is_some() {
                return Err(Error::DuplicateElement(e));
            }
        }
        let len = elements.len();
        Ok(Poset {
            elements,
            index,
            leq: vec![false; len * len],
        })
    }

    fn set(&mut self, a: u32, b: u32) -> Result<()> {
        let ia = self.position(a)?;
        let ib = self.position(b)?;
        let len = self.len();
        self.leq[ia * len + ib] = true;
        Ok(())
    }

    fn check_axioms(&self, check_closure: bool) -> Result<()> {
        let len = self.len();
        let at = |i: usize, j: usize| self.leq[i * len + j];
        for i in 0..len {
            if !at(i, i) {
                return Err(Error::BadOrder("reflexive"));
            }
            for j in 0..len {
                if i != j && at(i, j) && at(j, i) {
                    return Err(Error::BadOrder("antisymmetric"));
                }
                if check_closure && at(i, j) {
                    for k in 0..len {
                        if at(j, k) && !at(i, k) {
                            return Err(Error::BadOrder("transitive"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The linear order `0 < 1 < ... < n`.
    pub fn linear(n: u32) -> Self {
        Self::linear_on((0..=n).collect())
    }

    /// A linear order on the given ids, in the order listed.
    pub fn linear_on(ids: Vec<u32>) -> Self {
        let pairs: Vec<_> = ids.windows(2).map(|w| (w[0], w[1])).collect();
        Self::from_generating_pairs(ids, pairs).expect("a list of distinct ids is a linear order")
    }

    /// Subsets of an `n`-element set ordered by inclusion, encoded as bitmasks.
    pub fn boolean(n: u32) -> Self {
        assert!(n < 16, "Boolean lattice on {n} bits is out of scope");
        let elements: Vec<u32> = (0..1u32 << n).collect();
        let mut pairs = Vec::new();
        for &a in &elements {
            for bit in 0..n {
                if a & (1 << bit) == 0 {
                    pairs.push((a, a | (1 << bit)));
                }
            }
        }
        Self::from_generating_pairs(elements, pairs).expect("Boolean lattice is a poset")
    }

    /// The product `self x [1]`, with `(p, t)` encoded as `2 * p + t`.
    pub fn times_interval(&self) -> Self {
        let elements: Vec<u32> = self
            .elements
            .iter()
            .flat_map(|&p| [prism_id(p, 0), prism_id(p, 1)])
            .collect();
        let mut pairs = Vec::new();
        for &p in &self.elements {
            pairs.push((prism_id(p, 0), prism_id(p, 1)));
        }
        for (a, b) in self.covers() {
            pairs.push((prism_id(a, 0), prism_id(b, 0)));
            pairs.push((prism_id(a, 1), prism_id(b, 1)));
        }
        Self::from_generating_pairs(elements, pairs).expect("product of posets is a poset")
    }

    /// Relabels every element through `f`, which must be injective.
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> Result<Self> {
        let elements: Vec<u32> = self.elements.iter().map(|&e| f(e)).collect();
        let pairs: Vec<_> = self.covers().into_iter().map(|(a, b)| (f(a), f(b))).collect();
        Self::from_generating_pairs(elements, pairs)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, e: u32) -> bool {
        self.index.contains_key(&e)
    }

    pub fn position(&self, e: u32) -> Result<usize> {
        self.index.get(&e).copied().ok_or(Error::UnknownElement(e))
    }

    /// `a <= b`; unknown elements compare as unrelated.
    pub fn leq(&self, a: u32, b: u32) -> bool {
        match (self.index.get(&a), self.index.get(&b)) {
            (Some(&i), Some(&j)) => self.leq[i * self.len() + j],
            _ => false,
        }
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        a != b && self.leq(a, b)
    }

    /// Covering pairs `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for &a in &self.elements {
            for &b in &self.elements {
                if self.lt(a, b) && !self.elements.iter().any(|&c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements strictly above `a`, in element-list order.
    pub fn strictly_above(&self, a: u32) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied().filter(move |&b| self.lt(a, b))
    }
}

pub fn prism_id(p: u32, t: u32) -> u32 {
    2 * p + t
}

pub fn prism_coords(id: u32) -> (u32, u32) {
    (id / 2, id % 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_order_is_total() {
        let p = Poset::linear(3);
        assert!(p.leq(0, 3) && p.leq(1, 2) && !p.leq(2, 1));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn boolean_lattice_order_is_inclusion() {
        let p = Poset::boolean(3);
        assert!(p.leq(0b001, 0b011));
        assert!(!p.leq(0b001, 0b110));
        assert_eq!(p.covers().len(), 12);
    }

    #[test]
    fn rejects_non_transitive_relation() {
        let err = Poset::new(vec![0, 1, 2], [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap_err();
        assert_eq!(err, Error::BadOrder("transitive"));
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert_eq!(
            Poset::from_generating_pairs(vec![0, 1], [(0, 1), (1, 0)]).unwrap_err(),
            Error::BadOrder("antisymmetric")
        );
        assert_eq!(Poset::linear_on(vec![3, 4]).len(), 2);
        assert!(matches!(Poset::new(vec![1, 1], []), Err(Error::DuplicateElement(1))));
    }

    #[test]
    fn prism_product_order() {
        let p = Poset::linear(1).times_interval();
        assert!(p.leq(prism_id(0, 0), prism_id(1, 1)));
        assert!(!p.leq(prism_id(0, 1), prism_id(1, 0)));
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn serde_round_trip_keeps_order() {
        let p = Poset::boolean(2);
        let s = serde_json::to_string(&p).unwrap();
        let q: Poset = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
