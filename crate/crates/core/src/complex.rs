//! Nondegenerate simplices as chains, and downward-closed sets of them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

/// A nondegenerate simplex of a nerve: a strictly increasing sequence of poset elements.
///
/// Ordering is lexicographic on the vertex sequence, which is also the candidate order
/// used by certificate search outside of cubes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chain(Vec<u32>);

impl Chain {
    /// Wraps a vertex list without checking it against any poset.
    pub fn new(vertices: Vec<u32>) -> Self {
        Chain(vertices)
    }

    pub fn from_slice(vertices: &[u32]) -> Self {
        Chain(vertices.to_vec())
    }

    /// The chain whose vertices are the set bits of `mask`, in increasing order.
    pub fn from_mask(mask: u64) -> Self {
        Chain((0..64).filter(|b| mask >> b & 1 == 1).collect())
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> u32 {
        self.0.len() as u32 - 1
    }

    pub fn first(&self) -> u32 {
        self.0[0]
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("chains are nonempty")
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    /// Vertex bitmask; only meaningful when every vertex id is below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | 1u64 << v)
    }

    pub fn is_chain_in(&self, poset: &Poset) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|&v| poset.contains(v))
            && self.0.windows(2).all(|w| poset.lt(w[0], w[1]))
    }

    /// `d_i`: delete the vertex in position `i`.
    pub fn face(&self, i: usize) -> Chain {
        let mut v = self.0.clone();
        v.remove(i);
        Chain(v)
    }

    /// The subchain picking the positions whose bits are set in `positions`.
    pub fn select(&self, positions: u64) -> Chain {
        Chain(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| positions >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect(),
        )
    }

    /// Every nonempty subchain, including `self`.
    pub fn subchains(&self) -> impl Iterator<Item = Chain> + '_ {
        let len = self.0.len();
        assert!(len < 64);
        (1u64..1 << len).map(move |p| self.select(p))
    }

    pub fn is_subchain_of(&self, other: &Chain) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    /// Position of each vertex of `self` inside `outer`, or `None` if not a subchain.
    pub fn positions_in(&self, outer: &Chain) -> Option<Vec<u32>> {
        self.0
            .iter()
            .map(|v| outer.0.iter().position(|w| w == v).map(|p| p as u32))
            .collect()
    }

    /// Image of an index chain (vertex ids are positions `0..=dim`) under `outer`.
    pub fn map_through(&self, outer: &Chain) -> Chain {
        Chain(self.0.iter().map(|&i| outer.0[i as usize]).collect())
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("<"))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain({self})")
    }
}

impl From<Vec<u32>> for Chain {
    fn from(v: Vec<u32>) -> Self {
        Chain(v)
    }
}

/// A downward-closed set of chains in the nerve of a finite poset.
#[derive(Clone)]
pub struct Complex {
    ambient: Arc<Poset>,
    cells: BTreeSet<Chain>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.cells == other.cells
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex").field("facets", &self.facets()).finish()
    }
}

impl Complex {
    pub fn empty(ambient: Arc<Poset>) -> Self {
        Complex {
            ambient,
            cells: BTreeSet::new(),
        }
    }

    /// The smallest complex containing every generator.
    pub fn close(ambient: Arc<Poset>, generators: impl IntoIterator<Item = Chain>) -> Result<Self> {
        let mut out = Self::empty(ambient);
        for g in generators {
            if !g.is_chain_in(&out.ambient) {
                return Err(Error::NotAChain(g));
            }
            out.insert_closure(&g);
        }
        Ok(out)
    }

    /// Accepts an explicit cell set, checking chains and downward closure.
    pub fn from_cells(ambient: Arc<Poset>, cells: impl IntoIterator<Item = Chain>) -> Result<Self> {
        let cells: BTreeSet<Chain> = cells.into_iter().collect();
        for c in &cells {
            if !c.is_chain_in(&ambient) {
                return Err(Error::NotAChain(c.clone()));
            }
            for i in 0..c.len() {
                if c.len() > 1 && !cells.contains(&c.face(i)) {
                    return Err(Error::NotSubcomplex(c.face(i)));
                }
            }
        }
        Ok(Complex { ambient, cells })
    }

    /// Every strictly increasing chain of `poset`.
    pub fn nerve(poset: Arc<Poset>) -> Self {
        let mut cells = BTreeSet::new();
        let mut stack: Vec<Vec<u32>> = poset.elements().iter().map(|&e| vec![e]).collect();
        while let Some(c) = stack.pop() {
            let top = *c.last().unwrap();
            for next in poset.strictly_above(top) {
                let mut d = c.clone();
                d.push(next);
                stack.push(d);
            }
            cells.insert(Chain(c));
        }
        Complex { ambient: poset, cells }
    }

    pub(crate) fn insert_closure(&mut self, c: &Chain) {
        if self.cells.contains(c) {
            return;
        }
        for s in c.subchains() {
            self.cells.insert(s);
        }
    }

    /// Adds the closure of `c`; `c` must be a chain of the ambient.
    pub fn add_closure(&mut self, c: &Chain) -> Result<()> {
        if !c.is_chain_in(&self.ambient) {
            return Err(Error::NotAChain(c.clone()));
        }
        self.insert_closure(c);
        Ok(())
    }

    pub fn ambient(&self) -> &Arc<Poset> {
        &self.ambient
    }

    pub fn same_ambient(&self, other: &Complex) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient
    }

    pub fn cells(&self) -> &BTreeSet<Chain> {
        &self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = &Chain> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &Chain) -> bool {
        self.cells.contains(c)
    }

    pub fn cells_of_dim(&self, d: u32) -> impl Iterator<Item = &Chain> {
        self.cells.iter().filter(move |c| c.dim() == d)
    }

    pub fn max_dim(&self) -> Option<u32> {
        self.cells.iter().map(Chain::dim).max()
    }

    /// Cells that are not a proper face of another cell.
    pub fn facets(&self) -> Vec<Chain> {
        let mut out: Vec<Chain> = Vec::new();
        let mut by_dim: Vec<&Chain> = self.cells.iter().collect();
        by_dim.sort_by_key(|c| std::cmp::Reverse(c.len()));
        for c in by_dim {
            if !out.iter().any(|f| c.is_subchain_of(f)) {
                out.push(c.clone());
            }
        }
        out.sort();
        out
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.same_ambient(other) && self.cells.is_subset(&other.cells)
    }

    fn check_ambient(&self, other: &Complex) -> Result<()> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn union(&self, other: &Complex) -> Result<Complex> {
        self.check_ambient(other)?;
        Ok(Complex {
            ambient: self.ambient.clone(),
            cells: self.cells.union(&other.cells).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Complex) -> Result<Complex> {
        self.check_ambient(other)?;
        Ok(Complex {
            ambient: self.ambient.clone(),
            cells: self.cells.intersection(&other.cells).cloned().collect(),
        })
    }

    /// Cells of `closure(c)` that are present here.
    pub fn restricted_to(&self, c: &Chain) -> Vec<Chain> {
        c.subchains().filter(|s| self.cells.contains(s)).collect()
    }

    /// The full subcomplex on a set of vertices: every cell all of whose vertices lie in `vertices`.
    pub fn full_on(&self, vertices: &BTreeSet<u32>) -> Complex {
        Complex {
            ambient: self.ambient.clone(),
            cells: self
                .cells
                .iter()
                .filter(|c| c.vertices().iter().all(|v| vertices.contains(v)))
                .cloned()
                .collect(),
        }
    }
}

fn linear(n: u32) -> Arc<Poset> {
    Arc::new(Poset::linear(n))
}

/// `Δ^n` as the nerve of `[n]`.
pub fn standard_simplex(n: u32) -> Complex {
    Complex::nerve(linear(n))
}

fn check_index(index: u32, n: u32) -> Result<()> {
    if index > n {
        Err(Error::OutOfRange { index, dim: n })
    } else {
        Ok(())
    }
}

fn top(n: u32) -> Chain {
    Chain((0..=n).collect())
}

/// `∂Δ^n`: every face of `Δ^n` except the top cell.
pub fn boundary(n: u32) -> Complex {
    let faces = (0..=n as usize).map(|i| top(n).face(i)).filter(|c| !c.is_empty());
    Complex::close(linear(n), faces).expect("faces of the top simplex are chains")
}

/// `Λ^n_i`: the union of the faces `d_j Δ^n` for `j != i`.
pub fn horn(n: u32, i: u32) -> Result<Complex> {
    check_index(i, n)?;
    generalized_horn(n, &(0..=n).filter(|&j| j != i).collect())
}

/// `Λ^n_T`: the union of the faces `d_t Δ^n` for `t` in `faces`.
pub fn generalized_horn(n: u32, faces: &BTreeSet<u32>) -> Result<Complex> {
    if faces.is_empty() {
        return Err(Error::Invalid("generalized horn needs a nonempty face set".into()));
    }
    for &t in faces {
        check_index(t, n)?;
    }
    let gens = faces.iter().map(|&t| top(n).face(t as usize)).filter(|c| !c.is_empty());
    Complex::close(linear(n), gens)
}

/// `Δ^m ⋆ Δ^n ≅ Δ^{m+n+1}` with the index map of the second factor.
#[derive(Clone, Debug)]
pub struct Join {
    pub complex: Complex,
    pub m: u32,
    pub n: u32,
}

impl Join {
    pub fn first(&self, i: u32) -> u32 {
        assert!(i <= self.m);
        i
    }

    pub fn second(&self, i: u32) -> u32 {
        assert!(i <= self.n);
        self.m + 1 + i
    }
}

pub fn join_linear(m: u32, n: u32) -> Join {
    Join {
        complex: standard_simplex(m + n + 1),
        m,
        n,
    }
}
