//! Families of subsets `A ⊆ P([n])` and the subcomplexes `S^A = ⋃_{S ∈ A} Δ^{[n] ∖ S}` they name.
//!
//! Subsets are bitmasks over `[n]` with `n < 63`. A family may live over a ground set
//! `T ⊆ [n]` (after restriction); its complex is then a subcomplex of `Δ^T ⊆ Δ^n`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{Chain, Complex};
use crate::decorated::DecoratedComplex;
use crate::error::{Error, Result};
use crate::poset::Poset;

pub fn mask_of(elements: impl IntoIterator<Item = u32>) -> u64 {
    elements.into_iter().fold(0, |m, e| m | 1u64 << e)
}

pub fn elements_of(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

fn full_mask(n: u32) -> u64 {
    if n >= 63 {
        u64::MAX
    } else {
        (1u64 << (n + 1)) - 1
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct SubsetFamily {
    n: u32,
    ground: u64,
    members: BTreeSet<u64>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ground: Option<Vec<u32>>,
    members: Vec<Vec<u32>>,
}

impl TryFrom<FamilyRepr> for SubsetFamily {
    type Error = Error;

    fn try_from(r: FamilyRepr) -> Result<Self> {
        let members = r.members.into_iter().map(mask_of);
        match r.ground {
            None => SubsetFamily::new(r.n, members),
            Some(g) => SubsetFamily::over(r.n, mask_of(g), members),
        }
    }
}

impl From<SubsetFamily> for FamilyRepr {
    fn from(f: SubsetFamily) -> Self {
        FamilyRepr {
            n: f.n,
            ground: (f.ground != full_mask(f.n)).then(|| elements_of(f.ground)),
            members: f.members.iter().map(|&m| elements_of(m)).collect(),
        }
    }
}

impl fmt::Debug for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .members
            .iter()
            .map(|&m| {
                let e: Vec<String> = elements_of(m).iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", e.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl SubsetFamily {
    /// A family over the whole of `[n]`.
    pub fn new(n: u32, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::over(n, full_mask(n), members)
    }

    /// A family over the ground set `ground ⊆ [n]`; members must lie inside it.
    pub fn over(n: u32, ground: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n >= 63 {
            return Err(Error::Invalid(format!("n = {n} is too large for bitmask families")));
        }
        if ground & !full_mask(n) != 0 {
            return Err(Error::Invalid("ground set is not a subset of [n]".into()));
        }
        let members: BTreeSet<u64> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|&&m| m & !ground != 0) {
            return Err(Error::Invalid(format!(
                "member {:?} is not a subset of the ground set",
                elements_of(*bad)
            )));
        }
        Ok(SubsetFamily { n, ground, members })
    }

    /// Convenience constructor from explicit element lists.
    pub fn from_lists(n: u32, members: &[&[u32]]) -> Result<Self> {
        Self::new(n, members.iter().map(|m| mask_of(m.iter().copied())))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ground(&self) -> u64 {
        self.ground
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Is the vertex set `x` a simplex of `S^A`? True iff `x ⊆ ground` misses some member.
    pub fn contains_simplex(&self, x: u64) -> bool {
        x & !self.ground == 0 && self.members.iter().any(|&s| s & x == 0)
    }

    pub fn face_set(&self) -> FaceSet {
        FaceSet::from_predicate(self.n, |x| self.contains_simplex(x))
    }

    /// Renames the elements through `f`, which must be strictly increasing on the ground set.
    pub fn map_elements(&self, n: u32, f: impl Fn(u32) -> u32) -> Result<Self> {
        let map = |m: u64| mask_of(elements_of(m).into_iter().map(&f));
        Self::over(n, map(self.ground), self.members.iter().map(|&m| map(m)))
    }
}

fn check_same_n(a: &SubsetFamily, b: &SubsetFamily) -> Result<()> {
    if a.n != b.n || a.ground != b.ground {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    Ok(())
}

/// A set of nonempty vertex subsets of `[n]`, stored as one bit per mask.
#[derive(Clone, PartialEq, Eq)]
pub struct FaceSet {
    n: u32,
    bits: Vec<u64>,
}

impl fmt::Debug for FaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FaceSet")
            .field("n", &self.n)
            .field("len", &self.len())
            .finish()
    }
}

impl FaceSet {
    pub fn empty(n: u32) -> Self {
        assert!(n < 24, "face sets are limited to n < 24");
        let words = (1usize << (n + 1)).div_ceil(64);
        FaceSet {
            n,
            bits: vec![0; words],
        }
    }

    pub fn from_predicate(n: u32, mut keep: impl FnMut(u64) -> bool) -> Self {
        let mut out = Self::empty(n);
        for x in 1..1u64 << (n + 1) {
            if keep(x) {
                out.insert(x);
            }
        }
        out
    }

    /// Every face of `Δ^n` lying in `c`; `c` must live over `[n]` (ids are positions).
    pub fn from_complex(n: u32, c: &Complex) -> Self {
        let mut out = Self::empty(n);
        for cell in c.iter() {
            out.insert(cell.mask());
        }
        out
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn insert(&mut self, x: u64) {
        self.bits[(x / 64) as usize] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: u64) -> bool {
        x != 0 && x < 1 << (self.n + 1) && self.bits[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (1u64..1 << (self.n + 1)).filter(|&x| self.contains(x))
    }

    /// Materializes the faces as a complex over the linear order `[n]`.
    pub fn to_complex(&self) -> Complex {
        let ambient = Arc::new(Poset::linear(self.n));
        Complex::from_cells(ambient, self.iter().map(Chain::from_mask))
            .expect("face sets built from families are downward closed")
    }
}

/// `S^A` as a complex over the linear order `[n]`.
pub fn s_complex(a: &SubsetFamily) -> Complex {
    a.face_set().to_complex()
}

/// Keeps only the inclusion-minimal members.
pub fn minimize(a: &SubsetFamily) -> SubsetFamily {
    let members = a
        .members
        .iter()
        .copied()
        .filter(|&s| !a.members.iter().any(|&t| t != s && t & s == t))
        .collect();
    SubsetFamily {
        n: a.n,
        ground: a.ground,
        members,
    }
}

/// `A ∼ A'`: both name the same subcomplex.
pub fn equivalent(a: &SubsetFamily, b: &SubsetFamily) -> Result<bool> {
    check_same_n(a, b)?;
    Ok(a.face_set() == b.face_set())
}

/// `A|T = {S ∩ T}`, a family over `T`.
pub fn restrict_family(a: &SubsetFamily, t: u64) -> Result<SubsetFamily> {
    if t & !a.ground != 0 {
        return Err(Error::Invalid("restriction set is not inside the ground set".into()));
    }
    SubsetFamily::over(a.n, t, a.members.iter().map(|&s| s & t))
}

/// `A ∪ {ground ∖ T}`, naming `S^A ∪ Δ^T`.
pub fn add_face(a: &SubsetFamily, t: u64) -> Result<SubsetFamily> {
    if t & !a.ground != 0 {
        return Err(Error::Invalid("added face is not inside the ground set".into()));
    }
    let mut members = a.members.clone();
    members.insert(a.ground & !t);
    SubsetFamily::over(a.n, a.ground, members)
}

/// A transversal of a disjoint family, with the element picked from each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasalSet {
    pub set: u64,
    pub choices: Vec<(u64, u32)>,
}

impl BasalSet {
    pub fn elements(&self) -> Vec<u32> {
        elements_of(self.set)
    }
}

fn pairwise_disjoint(a: &SubsetFamily) -> bool {
    let mut seen = 0u64;
    for &s in &a.members {
        if seen & s != 0 {
            return false;
        }
        seen |= s;
    }
    true
}

/// All sets taking exactly one element from each member and nothing else.
///
/// Members must be pairwise disjoint. Supersets adding elements outside `⋃A` are also
/// basal in the literal sense, but every condition quantified over basal sets here is
/// monotone, so the transversals are the binding cases.
pub fn basal_sets(a: &SubsetFamily) -> Result<Vec<BasalSet>> {
    if !pairwise_disjoint(a) {
        return Err(Error::NotDisjoint);
    }
    let mut out = vec![BasalSet {
        set: 0,
        choices: Vec::new(),
    }];
    for &s in &a.members {
        let mut next = Vec::with_capacity(out.len() * s.count_ones() as usize);
        for partial in &out {
            for e in elements_of(s) {
                let mut b = partial.clone();
                b.set |= 1 << e;
                b.choices.push((s, e));
                next.push(b);
            }
        }
        out = next;
    }
    Ok(out)
}

fn ground_bounds(a: &SubsetFamily) -> Option<(u32, u32)> {
    if a.ground == 0 {
        return None;
    }
    Some((a.ground.trailing_zeros(), 63 - a.ground.leading_zeros()))
}

/// Inner dullness: returns the valid pivot points, or `None` if there are none.
///
/// Pivots range over ground elements strictly between the least and greatest ground element.
pub fn is_inner_dull(a: &SubsetFamily) -> Option<Vec<u32>> {
    if a.members.contains(&0) || !pairwise_disjoint(a) {
        return None;
    }
    let (lo, hi) = ground_bounds(a)?;
    let used = a.members.iter().fold(0, |m, &s| m | s);
    let basal = basal_sets(a).ok()?;
    let pivots: Vec<u32> = elements_of(a.ground)
        .into_iter()
        .filter(|&i| lo < i && i < hi && used >> i & 1 == 0)
        .filter(|&i| {
            basal.iter().all(|x| {
                let below = x.set & ((1u64 << i) - 1);
                let above = x.set >> (i + 1);
                below != 0 && above != 0
            })
        })
        .collect();
    (!pivots.is_empty()).then_some(pivots)
}

/// Right dullness; the pivot is the greatest ground element.
pub fn is_right_dull(a: &SubsetFamily) -> bool {
    let Some((_, hi)) = ground_bounds(a) else {
        return false;
    };
    !a.members.is_empty()
        && !a.members.contains(&0)
        && a.members.iter().all(|&s| s >> hi & 1 == 0)
        && pairwise_disjoint(a)
}

/// `ℓ^X < i < u^X`: the neighbours of `i` in `X`.
pub fn adjacent_around(x: u64, i: u32) -> Option<(u32, u32)> {
    let below = x & ((1u64 << i) - 1);
    let above = x & !((1u64 << (i + 1)) - 1);
    if below == 0 || above == 0 {
        return None;
    }
    Some((63 - below.leading_zeros(), above.trailing_zeros()))
}

fn check_decorated_simplex(a: &SubsetFamily, x: &DecoratedComplex) -> Result<()> {
    if a.ground != full_mask(a.n) {
        return Err(Error::Invalid("pivot hypotheses need a family over all of [n]".into()));
    }
    if **x.ambient() != Poset::linear(a.n) || x.complex().len() != (1usize << (a.n + 1)) - 1 {
        return Err(Error::Invalid("decoration must live on the full simplex Δ^n".into()));
    }
    Ok(())
}

/// Conditions of the pivot trick for an inner dull family with pivot `i`, checked exhaustively.
pub fn pivot_hypotheses(a: &SubsetFamily, i: u32, x: &DecoratedComplex) -> Result<bool> {
    check_decorated_simplex(a, x)?;
    match is_inner_dull(a) {
        Some(p) if p.contains(&i) => {}
        _ => return Err(Error::NotDull("inner")),
    }
    let faces = a.face_set();
    let pivot = 1u64 << i;
    for e in x.marked() {
        if e.mask() & pivot == 0 && !faces.contains(e.mask()) {
            return Ok(false);
        }
    }
    for t in x.scaled() {
        let m = t.mask();
        if m & pivot != 0 || faces.contains(m) {
            continue;
        }
        let v = t.vertices();
        if !(v[0] < i && i < v[2]) {
            return Ok(false);
        }
        let mut with_pivot = v.to_vec();
        with_pivot.push(i);
        with_pivot.sort_unstable();
        if !x.is_fully_scaled(&with_pivot) {
            return Ok(false);
        }
    }
    for b in basal_sets(a)? {
        let (l, u) = adjacent_around(b.set, i).ok_or(Error::NotDull("inner"))?;
        for r in l..i {
            for s in i + 1..=u {
                if !x.is_scaled(r, i, s) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Conditions of the right-anodyne pivot trick (pivot `n`), checked exhaustively.
pub fn right_pivot_hypotheses(a: &SubsetFamily, x: &DecoratedComplex) -> Result<bool> {
    check_decorated_simplex(a, x)?;
    if !is_right_dull(a) {
        return Err(Error::NotDull("right"));
    }
    let n = a.n;
    let faces = a.face_set();
    let pivot = 1u64 << n;
    for e in x.marked() {
        if e.mask() & pivot == 0 && !faces.contains(e.mask()) {
            return Ok(false);
        }
    }
    for t in x.scaled() {
        let m = t.mask();
        if m & pivot != 0 || faces.contains(m) {
            continue;
        }
        let v = t.vertices();
        let mut with_pivot = v.to_vec();
        with_pivot.push(n);
        if !x.is_fully_scaled(&with_pivot) || !x.is_marked(v[2], n) {
            return Ok(false);
        }
    }
    for z in basal_sets(a)? {
        let min = z.set.trailing_zeros();
        let max = 63 - z.set.leading_zeros();
        for r in 0..=min {
            for s in max..n {
                if !x.is_scaled(r, s, n) || !x.is_marked(s, n) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
