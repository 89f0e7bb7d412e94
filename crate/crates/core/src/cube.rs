//! The cube `C^n = (Δ^1)^n` as the nerve of the Boolean lattice on `n` bits.
//!
//! Coordinate `j` (1-based) is bit `j - 1`. Top simplices correspond to permutations
//! through `φ(τ) = (a^{τ(1)}, …, a^{τ(n)})`, whose `k`-th vertex has bit `j - 1` set iff
//! `τ(j) ≤ k`. The left box `LC^n` leaves out the face where coordinate `n` is 1.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::certify::{Certificate, FillStep, RuleId};
use crate::complex::{generalized_horn, Chain, Complex};
use crate::decorated::{DecoratedComplex, Regime};
use crate::error::{Error, Result};
use crate::poset::{prism_id, Poset};

/// Largest cube dimension handled with `u64` vertex sets.
pub const MAX_CUBE_DIM: u32 = 6;

/// A permutation of `{1, …, n}` written as its image tuple `(τ(1), …, τ(n))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len() as u32;
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x == 0 || x > n || seen[(x - 1) as usize] {
                return Err(Error::BadPermutation(images));
            }
            seen[(x - 1) as usize] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: u32) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn n(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `τ(j)` for `1 ≤ j ≤ n`.
    pub fn at(&self, j: u32) -> u32 {
        self.0[(j - 1) as usize]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (j, &x) in self.0.iter().enumerate() {
            inv[(x - 1) as usize] = j as u32 + 1;
        }
        Permutation(inv)
    }

    /// The cube order: compare inverses lexicographically.
    pub fn order_cmp(&self, other: &Permutation) -> Ordering {
        self.inverse().0.cmp(&other.inverse().0)
    }

    /// Every permutation of `{1, …, n}`, sorted by the cube order.
    pub fn all(n: u32) -> Vec<Permutation> {
        // Lexicographic enumeration of inverses is the cube order.
        let mut out = Vec::new();
        let mut current: Vec<u32> = (1..=n).collect();
        loop {
            out.push(Permutation(current.clone()).inverse());
            if !next_lex(&mut current) {
                break;
            }
        }
        out
    }

    /// The largest permutation filled by inner horns, `(2, …, n, 1)`.
    pub fn cycle(n: u32) -> Self {
        Permutation((2..=n).chain([1]).collect())
    }
}

fn next_lex(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("a larger element exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn perm_less(a: &Permutation, b: &Permutation) -> bool {
    a.order_cmp(b) == Ordering::Less
}

/// A simplex `(a^{t_1}, …, a^{t_n}) : Δ^dim → C^n`; entries lie in `0..=dim + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepTuple {
    pub dim: u32,
    pub sup: Vec<u32>,
}

impl StepTuple {
    pub fn from_perm(tau: &Permutation) -> Self {
        StepTuple {
            dim: tau.n(),
            sup: tau.images().to_vec(),
        }
    }

    /// `d_i`: every superscript above `i` drops by one.
    pub fn face(&self, i: u32) -> Result<StepTuple> {
        if i > self.dim || self.dim == 0 {
            return Err(Error::OutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        Ok(StepTuple {
            dim: self.dim - 1,
            sup: self.sup.iter().map(|&t| if t > i { t - 1 } else { t }).collect(),
        })
    }

    /// Vertex `k` has bit `j - 1` set iff `t_j ≤ k`; repeats mean the simplex is degenerate.
    pub fn vertices(&self) -> Vec<u32> {
        (0..=self.dim)
            .map(|k| {
                self.sup
                    .iter()
                    .enumerate()
                    .filter(|(_, &t)| t <= k)
                    .fold(0, |m, (j, _)| m | 1 << j)
            })
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.vertices().windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for StepTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sup.iter().map(|t| format!("a^{t}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn phi(tau: &Permutation) -> Chain {
    Chain::new(StepTuple::from_perm(tau).vertices())
}

/// Inverse of `phi` on top-dimensional chains of `C^n`.
pub fn perm_of(chain: &Chain, n: u32) -> Result<Permutation> {
    let v = chain.vertices();
    if v.len() != n as usize + 1 || v[0] != 0 || v[n as usize] != (1 << n) - 1 {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: chain.dim(),
        });
    }
    let mut images = vec![0; n as usize];
    for k in 1..=n as usize {
        let added = v[k] & !v[k - 1];
        if added.count_ones() != 1 || v[k - 1] & !v[k] != 0 {
            return Err(Error::NotAChain(chain.clone()));
        }
        images[added.trailing_zeros() as usize] = k as u32;
    }
    Permutation::new(images)
}

pub fn cube(n: u32) -> Arc<Poset> {
    Arc::new(Poset::boolean(n))
}

/// `Some(n)` when `p` is the Boolean lattice on `n ≤ MAX_CUBE_DIM` bits.
pub fn boolean_rank(p: &Poset) -> Option<u32> {
    let len = p.len();
    if !len.is_power_of_two() {
        return None;
    }
    let n = len.trailing_zeros();
    if n > MAX_CUBE_DIM || p.elements().iter().enumerate().any(|(i, &e)| e != i as u32) {
        return None;
    }
    let ok = (0..len as u32).all(|a| (0..len as u32).all(|b| p.leq(a, b) == (a & b == a)));
    ok.then_some(n)
}

fn vertex_set(vertices: &[u32]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | 1u64 << v)
}

/// Sorts chains of `C^n` by the first top simplex, in the cube order, that contains them.
pub struct ChainOrderKey {
    tops: Vec<u64>,
}

impl ChainOrderKey {
    pub fn new(n: u32) -> Self {
        ChainOrderKey {
            tops: Permutation::all(n)
                .iter()
                .map(|t| vertex_set(phi(t).vertices()))
                .collect(),
        }
    }

    pub fn rank(&self, c: &Chain) -> usize {
        let s = vertex_set(c.vertices());
        self.tops.iter().position(|&t| s & !t == 0).unwrap_or(usize::MAX)
    }
}

/// A chain lies in the face `x_i = j` iff every vertex has coordinate `i` equal to `j`.
fn in_face(vertices: &[u32], i: u32, j: u32) -> bool {
    vertices.iter().all(|&v| v >> (i - 1) & 1 == j)
}

pub fn in_boundary(n: u32, vertices: &[u32]) -> bool {
    (1..=n).any(|i| in_face(vertices, i, 0) || in_face(vertices, i, 1))
}

pub fn in_left_box(n: u32, vertices: &[u32]) -> bool {
    (1..=n).any(|i| in_face(vertices, i, 0) || (i < n && in_face(vertices, i, 1)))
}

fn filter_nerve(n: u32, keep: impl Fn(&[u32]) -> bool) -> Complex {
    let full = Complex::nerve(cube(n));
    let cells: Vec<Chain> = full.iter().filter(|c| keep(c.vertices())).cloned().collect();
    Complex::from_cells(full.ambient().clone(), cells).expect("faces of the cube form a subcomplex")
}

pub fn cube_complex(n: u32) -> Complex {
    Complex::nerve(cube(n))
}

pub fn boundary_complex(n: u32) -> Complex {
    filter_nerve(n, |v| in_boundary(n, v))
}

pub fn left_box(n: u32) -> Complex {
    filter_nerve(n, |v| in_left_box(n, v))
}

/// `LC^n` together with every top simplex whose spine does not start with the edge `0 → e_n`.
pub fn j_complex(n: u32) -> Complex {
    let tops: Vec<u64> = Permutation::all(n)
        .iter()
        .filter(|t| t.at(n) != 1)
        .map(|t| vertex_set(phi(t).vertices()))
        .collect();
    filter_nerve(n, |v| {
        let s = vertex_set(v);
        in_left_box(n, v) || tops.iter().any(|&t| s & !t == 0)
    })
}

/// The edge `(0, …, 0) → (0, …, 0, 1)`.
pub fn initial_edge(n: u32) -> Chain {
    Chain::new(vec![0, 1 << (n - 1)])
}

/// A growing union of `LC^n` (or `J^n`) and attached top simplices, tested by vertex sets.
struct CubeState {
    n: u32,
    base_j: bool,
    tops: Vec<u64>,
    j_tops: Vec<u64>,
}

impl CubeState {
    fn new(n: u32, base_j: bool) -> Self {
        let j_tops = if base_j {
            Permutation::all(n)
                .iter()
                .filter(|t| t.at(n) != 1)
                .map(|t| vertex_set(phi(t).vertices()))
                .collect()
        } else {
            Vec::new()
        };
        CubeState {
            n,
            base_j,
            tops: Vec::new(),
            j_tops,
        }
    }

    fn contains(&self, vertices: &[u32]) -> bool {
        let s = vertex_set(vertices);
        in_left_box(self.n, vertices)
            || (self.base_j && self.j_tops.iter().any(|&t| s & !t == 0))
            || self.tops.iter().any(|&t| s & !t == 0)
    }

    /// The face set `T` with `state ∩ φ(τ) = Λ^n_T`, or an error if it is not of that form.
    fn horn_faces(&self, tau: &Permutation) -> Result<BTreeSet<u32>> {
        let n = self.n;
        let top = phi(tau);
        let present: Vec<bool> = (0..1u64 << (n + 1))
            .map(|p| p != 0 && self.contains(top.select(p).vertices()))
            .collect();
        let all = (1u64 << (n + 1)) - 1;
        let t: BTreeSet<u32> = (0..=n).filter(|&i| present[(all & !(1 << i)) as usize]).collect();
        for p in 1..=all {
            let in_horn = t.iter().any(|&i| p >> i & 1 == 0);
            if in_horn != present[p as usize] {
                return Err(Error::NotHornShaped);
            }
        }
        Ok(t)
    }

    fn attach(&mut self, tau: &Permutation) {
        self.tops.push(vertex_set(phi(tau).vertices()));
    }
}

fn check_dim(n: u32, min: u32) -> Result<()> {
    if n < min || n > MAX_CUBE_DIM {
        return Err(Error::OutOfRange {
            index: n,
            dim: MAX_CUBE_DIM,
        });
    }
    Ok(())
}

/// `B_τ = (LC^n ∪ ⋃_{τ' < τ} φ(τ')) ∩ φ(τ)`, returned as a complex in positions of `φ(τ)`
/// together with the face set `T` such that `B_τ = Λ^n_T`.
pub fn b_tau(n: u32, tau: &Permutation) -> Result<(Complex, BTreeSet<u32>)> {
    check_dim(n, 1)?;
    if tau.n() != n || !perm_less(tau, &Permutation::cycle(n)) {
        return Err(Error::Invalid(format!("{tau} is not below (2,…,n,1)")));
    }
    let mut state = CubeState::new(n, false);
    for prev in Permutation::all(n).iter().take_while(|p| perm_less(p, tau)) {
        state.attach(prev);
    }
    let t = state.horn_faces(tau)?;
    Ok((generalized_horn(n, &t)?, t))
}

/// Faces `d_i φ(τ)` predicted to lie in `LC^n`: always `n`, and `0` iff `τ(n) ≠ 1`.
pub fn lc_membership_faces(tau: &Permutation) -> BTreeSet<u32> {
    let n = tau.n();
    let mut out = BTreeSet::from([n]);
    if tau.at(n) != 1 {
        out.insert(0);
    }
    out
}

/// The same set computed by testing each face against `LC^n` directly.
pub fn lc_membership_faces_direct(tau: &Permutation) -> BTreeSet<u32> {
    let n = tau.n();
    let top = phi(tau);
    (0..=n)
        .filter(|&i| in_left_box(n, top.face(i as usize).vertices()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HornSetKind {
    /// `{0, n} ⊆ T ⊊ [n]`, filled by inner horns.
    Inner,
    /// `{1, n} ⊆ T`, `0 ∉ T`, with `{0, 1}` marked, finished by a left marked horn.
    Marked,
}

fn check_horn_set(n: u32, t: &BTreeSet<u32>, kind: HornSetKind) -> Result<()> {
    let ok = match kind {
        HornSetKind::Inner => n >= 2 && t.contains(&0) && t.contains(&n) && t.len() <= n as usize,
        HornSetKind::Marked => n >= 1 && t.contains(&1) && t.contains(&n) && !t.contains(&0),
    };
    if !ok || t.iter().any(|&x| x > n) {
        return Err(Error::Invalid(format!(
            "face set {t:?} does not suit {kind:?} filling of Δ^{n}"
        )));
    }
    Ok(())
}

/// Steps filling `Λ^n_T ⊆ Δ^n`, with chains given in positions `0..=n`.
///
/// Missing inner faces are filled first, in increasing order and recursively; the last
/// step attaches the top simplex along an inner horn (or a left marked horn).
pub fn horn_set_steps(n: u32, t: &BTreeSet<u32>, kind: HornSetKind) -> Result<Vec<FillStep>> {
    check_horn_set(n, t, kind)?;
    let top = Chain::new((0..=n).collect());
    let missing: Vec<u32> = (1..n).filter(|i| !t.contains(i)).collect();
    let (to_fill, last) = match kind {
        HornSetKind::Inner => {
            let (&m, rest) = missing.split_last().expect("T is proper");
            (rest.to_vec(), RuleId::InnerHorn { n, i: m })
        }
        HornSetKind::Marked => (
            missing.iter().copied().filter(|&i| i >= 2).collect(),
            RuleId::LeftMarkedHorn { n },
        ),
    };
    let mut present = t.clone();
    let mut steps = Vec::new();
    for i in to_fill {
        let face = top.face(i as usize);
        let sub_t: BTreeSet<u32> = present
            .iter()
            .filter(|&&x| x != i)
            .map(|&x| if x < i { x } else { x - 1 })
            .collect();
        for s in horn_set_steps(n - 1, &sub_t, kind)? {
            steps.push(s.map_through(&face));
        }
        present.insert(i);
    }
    steps.push(FillStep::new(last, top));
    Ok(steps)
}

/// `Λ^n_T ⊆ Δ^n` as a stand-alone certificate (plain, or marked with `{0, 1}` marked).
pub fn horn_set_certificate(n: u32, t: &BTreeSet<u32>, kind: HornSetKind) -> Result<Certificate> {
    let steps = horn_set_steps(n, t, kind)?;
    let start = generalized_horn(n, t)?;
    let target = crate::complex::standard_simplex(n);
    let (regime, marked) = match kind {
        HornSetKind::Inner => (Regime::Plain, vec![]),
        HornSetKind::Marked => (Regime::Marked, vec![Chain::new(vec![0, 1])]),
    };
    let start_marked: Vec<Chain> = marked.iter().filter(|e| start.contains(e)).cloned().collect();
    let start = Complex::from_cells(target.ambient().clone(), start.cells().iter().cloned())?;
    Certificate::new(
        regime,
        DecoratedComplex::new(start, start_marked, [], regime)?,
        DecoratedComplex::new(target, marked, [], regime)?,
        steps,
    )
}

fn filling_steps(n: u32, state: &mut CubeState, taus: &[Permutation], kind: HornSetKind) -> Result<Vec<FillStep>> {
    let mut steps = Vec::new();
    for tau in taus {
        let t = state.horn_faces(tau)?;
        check_horn_set(n, &t, kind).map_err(|_| {
            Error::Falsified(format!(
                "intersection for {tau} is Λ^{n}_{t:?}, not of the required form"
            ))
        })?;
        let top = phi(tau);
        steps.extend(horn_set_steps(n, &t, kind)?.iter().map(|s| s.map_through(&top)));
        state.attach(tau);
    }
    Ok(steps)
}

fn inner_steps(n: u32) -> Result<Vec<FillStep>> {
    let taus: Vec<Permutation> = Permutation::all(n).into_iter().filter(|t| t.at(n) != 1).collect();
    filling_steps(n, &mut CubeState::new(n, false), &taus, HornSetKind::Inner)
}

fn tail_steps(n: u32) -> Result<Vec<FillStep>> {
    let taus: Vec<Permutation> = Permutation::all(n).into_iter().filter(|t| t.at(n) == 1).collect();
    filling_steps(n, &mut CubeState::new(n, true), &taus, HornSetKind::Marked)
}

/// `LC^n ↪ J^n` by inner horns, attaching `φ(τ)` for `τ < (2, …, n, 1)` in the cube order.
pub fn inner_filtration(n: u32) -> Result<Certificate> {
    check_dim(n, 2)?;
    Certificate::new(
        Regime::Plain,
        DecoratedComplex::flat(left_box(n), Regime::Plain),
        DecoratedComplex::flat(j_complex(n), Regime::Plain),
        inner_steps(n)?,
    )
}

fn with_initial_edge(c: Complex, n: u32) -> Result<DecoratedComplex> {
    let e = Some(initial_edge(n)).filter(|e| c.contains(e));
    DecoratedComplex::new(c, e, [], Regime::Marked)
}

/// `J^n ↪ C^n` with the initial edge marked, attaching the remaining `φ(τ)` (those with
/// `τ(n) = 1`) in the cube order through left marked horns.
pub fn marked_tail(n: u32) -> Result<Certificate> {
    check_dim(n, 1)?;
    Certificate::new(
        Regime::Marked,
        with_initial_edge(j_complex(n), n)?,
        with_initial_edge(cube_complex(n), n)?,
        tail_steps(n)?,
    )
}

/// The whole filling `LC^n ↪ C^n`, in the marked regime with the initial edge marked.
pub fn cube_fill(n: u32) -> Result<Certificate> {
    check_dim(n, 1)?;
    let mut steps = if n >= 2 { inner_steps(n)? } else { Vec::new() };
    steps.extend(tail_steps(n)?);
    Certificate::new(
        Regime::Marked,
        with_initial_edge(left_box(n), n)?,
        with_initial_edge(cube_complex(n), n)?,
        steps,
    )
}

/// The prism steps over one cell `σ` of `K ∖ K'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrismAttachment {
    pub cell: Chain,
    pub steps: Vec<FillStep>,
}

fn lift(c: &Chain, t: u32) -> Chain {
    Chain::new(c.vertices().iter().map(|&v| prism_id(v, t)).collect())
}

/// `σ_j = (σ_0, 0) … (σ_j, 0), (σ_j, 1) … (σ_k, 1)`.
pub fn prism_simplex(sigma: &Chain, j: usize) -> Chain {
    let v = sigma.vertices();
    let mut out: Vec<u32> = v[..=j].iter().map(|&x| prism_id(x, 0)).collect();
    out.extend(v[j..].iter().map(|&x| prism_id(x, 1)));
    Chain::new(out)
}

fn vertical_edges<'a>(k: &'a Complex) -> impl Iterator<Item = Chain> + 'a {
    k.cells_of_dim(0)
        .map(|v| Chain::new(vec![prism_id(v.first(), 0), prism_id(v.first(), 1)]))
}

fn prism_of(product: &Arc<Poset>, k: &Complex) -> Result<Complex> {
    let gens = k
        .facets()
        .into_iter()
        .flat_map(|s| (0..s.len()).map(move |j| prism_simplex(&s, j)));
    Complex::close(product.clone(), gens)
}

/// Cell-by-cell decomposition of `(K × {0}) ∪ (K' × Δ^1) ↪ K × Δ^1`, in increasing dimension.
///
/// For each `k`-cell `σ` the prism simplices `σ_k, …, σ_0` are attached in that order:
/// `σ_j` along `Λ^{k+1}_j` (inner for `j ≥ 1`), and `σ_0` along a left marked horn
/// through the vertical edge over `σ_0`.
pub fn prism_cells(k: &Complex, k_sub: &Complex) -> Result<Vec<PrismAttachment>> {
    if !k_sub.is_subcomplex_of(k) {
        return Err(Error::Invalid("K' is not a subcomplex of K".into()));
    }
    let mut cells: Vec<&Chain> = k.iter().filter(|c| !k_sub.contains(c)).collect();
    cells.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(cells
        .into_iter()
        .map(|sigma| {
            let d = sigma.dim();
            let steps = (0..=d)
                .rev()
                .map(|j| {
                    let rule = if j >= 1 {
                        RuleId::InnerHorn { n: d + 1, i: j }
                    } else {
                        RuleId::LeftMarkedHorn { n: d + 1 }
                    };
                    FillStep::new(rule, prism_simplex(sigma, j as usize))
                })
                .collect();
            PrismAttachment {
                cell: sigma.clone(),
                steps,
            }
        })
        .collect())
}

/// The prism decomposition as one marked certificate, vertical edges marked.
pub fn prism_certificate(k: &Complex, k_sub: &Complex) -> Result<Certificate> {
    let attachments = prism_cells(k, k_sub)?;
    let product = Arc::new(k.ambient().times_interval());
    let mut start_gens: Vec<Chain> = k.iter().map(|c| lift(c, 0)).collect();
    start_gens.extend(prism_of(&product, k_sub)?.cells().iter().cloned());
    let start = Complex::close(product.clone(), start_gens)?;
    let target = prism_of(&product, k)?;
    let start = DecoratedComplex::new(start, vertical_edges(k_sub), [], Regime::Marked)?;
    let target = DecoratedComplex::new(target, vertical_edges(k), [], Regime::Marked)?;
    let steps = attachments.into_iter().flat_map(|a| a.steps).collect();
    Certificate::new(Regime::Marked, start, target, steps)
}
