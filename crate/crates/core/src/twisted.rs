//! The decorated join `Q(Δ^n) = Δ^n ⋆ (Δ^n)^op ≅ Δ^{2n+1}` and what is built from it: the
//! marking ♥, the subobjects `R`, `J`, the filtration `M^n_k`, the certificate for `v_n`,
//! and brute-force simplices of `Tw(X)`.
//!
//! Vertices of `Δ^{2n+1}` are `0..=n` followed by `n̄, …, 0̄`, where `ī = 2n + 1 - i`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::certify::{apply_step, local_view, Certificate, FillStep, RuleId};
use crate::complex::{Chain, Complex};
use crate::decorated::{DecoratedComplex, Regime};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::subset::{self, SubsetFamily};

/// Default largest `n` for [`v_certificate`].
pub const DEFAULT_VN_BOUND: u32 = 4;

pub fn bar(n: u32, i: u32) -> u32 {
    2 * n + 1 - i
}

/// Human label of vertex `v` of `Δ^{2n+1}`: `3` or `3̄`.
pub fn label(n: u32, v: u32) -> String {
    if v <= n {
        v.to_string()
    } else {
        format!("{}\u{304}", bar(n, v))
    }
}

/// Whether the nondegenerate triangle `a < b < c` of `Δ^{2n+1}` carries the † scaling.
pub fn is_dagger(n: u32, a: u32, b: u32, c: u32) -> bool {
    let op = |v: u32| v > n;
    if !op(c) || op(a) && op(b) {
        // Entirely in Δ^n, or entirely in the op part.
        return true;
    }
    if !op(b) {
        // {i < j ≤ k̄}: j ≤ k with k̄ = c.
        return bar(n, c) >= b;
    }
    // {k, j̄, ī} with i < j ≤ k: b = j̄, c = ī, a = k.
    bar(n, b) <= a
}

pub fn dagger_triangles(n: u32) -> BTreeSet<Chain> {
    let top = 2 * n + 1;
    let mut out = BTreeSet::new();
    for a in 0..=top {
        for b in a + 1..=top {
            for c in b + 1..=top {
                if is_dagger(n, a, b, c) {
                    out.insert(Chain::new(vec![a, b, c]));
                }
            }
        }
    }
    out
}

/// ♥: every edge with both ends in the op part.
pub fn heart_edges(n: u32) -> BTreeSet<Chain> {
    let top = 2 * n + 1;
    (n + 1..=top)
        .flat_map(|a| (a + 1..=top).map(move |b| Chain::new(vec![a, b])))
        .collect()
}

fn linear(n: u32) -> Arc<Poset> {
    Arc::new(Poset::linear(n))
}

fn simplex_on(ambient: &Arc<Poset>, vertices: impl IntoIterator<Item = u32>) -> Complex {
    Complex::close(ambient.clone(), [Chain::new(vertices.into_iter().collect())])
        .expect("subsets of a linear order are chains")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSimplex {
    pub n: u32,
    /// Whether ♥ is included, making this `R(Δ^n)` rather than `Q(Δ^n)`.
    pub heart: bool,
    pub decorated: DecoratedComplex,
}

impl QSimplex {
    pub fn bar(&self, i: u32) -> u32 {
        bar(self.n, i)
    }

    pub fn label(&self, v: u32) -> String {
        label(self.n, v)
    }
}

fn build_q(n: u32, heart: bool) -> QSimplex {
    let marked = if heart { heart_edges(n) } else { BTreeSet::new() };
    let decorated = DecoratedComplex::new(
        Complex::nerve(linear(2 * n + 1)),
        marked,
        dagger_triangles(n),
        Regime::MarkedScaled,
    )
    .expect("† and ♥ are cells of the simplex");
    QSimplex { n, heart, decorated }
}

/// `Q(Δ^n)`: the simplex with † and no marking.
pub fn q(n: u32) -> QSimplex {
    build_q(n, false)
}

/// `R(Δ^n)`: the simplex with ♥ and †.
pub fn r(n: u32) -> DecoratedComplex {
    build_q(n, true).decorated
}

/// `J(Δ^n)`: `R(Δ^n)` restricted to `Δ^{0, …, n, 0̄}`.
pub fn j(n: u32) -> DecoratedComplex {
    let full = r(n);
    let sub = simplex_on(full.ambient(), (0..=n).chain([2 * n + 1]));
    full.restrict(&sub).expect("a face of the simplex")
}

/// `M^n_0 ⊆ M^n_1 ⊆ … ⊆ M^n_n`.
#[derive(Clone, Debug)]
pub struct MFiltration {
    pub n: u32,
    pub stages: Vec<Complex>,
}

fn m_stage(n: u32, k: u32) -> Complex {
    let ambient = linear(2 * n + 1);
    let top = 2 * n + 1;
    let mut gens = vec![
        Chain::new((0..=n).chain([top]).collect()),
        Chain::new((n + 1..=top).collect()),
    ];
    for l in 1..=k {
        gens.push(Chain::new((0..=top).filter(|&v| v != l && v != bar(n, l)).collect()));
    }
    Complex::close(ambient, gens).expect("subsets of a linear order are chains")
}

pub fn m_filtration(n: u32) -> MFiltration {
    MFiltration {
        n,
        stages: (0..=n).map(|k| m_stage(n, k)).collect(),
    }
}

/// The family `A` with `S^A` equal to the part of `state` inside `σ`, in positions of `σ`.
pub fn local_family(state: &DecoratedComplex, sigma: &Chain) -> Result<SubsetFamily> {
    let d = sigma.dim();
    let full = (1u64 << (d + 1)) - 1;
    let local = local_view(state, sigma);
    SubsetFamily::new(d, local.complex().facets().iter().map(|f| full & !f.mask()))
}

/// Right horn steps filling `Δ^{n}` from its last vertex: every simplex through `n`, by
/// increasing dimension.
fn cone_steps(n: u32) -> Vec<FillStep> {
    let mut steps = Vec::new();
    for d in 1..=n {
        for mask in 0u64..1 << n {
            if mask.count_ones() == d {
                let mut v = subset::elements_of(mask);
                v.push(n);
                steps.push(FillStep::new(RuleId::RightHorn { n: d }, Chain::new(v)));
            }
        }
    }
    steps
}

struct Planner<'a> {
    state: DecoratedComplex,
    target: &'a DecoratedComplex,
    steps: Vec<FillStep>,
}

impl Planner<'_> {
    fn push(&mut self, step: FillStep) -> Result<()> {
        match apply_step(&self.state, &step, self.target, Regime::MarkedScaled) {
            Ok(next) => {
                self.state = next;
                self.steps.push(step);
                Ok(())
            }
            Err(reason) => Err(Error::Falsified(format!(
                "{} on {}: {reason}",
                step.rule, step.attached
            ))),
        }
    }

    /// Attaches `σ` by a pivot trick, trying `preferred` first, then every other inner pivot,
    /// then the right-anodyne version.
    fn pivot(&mut self, sigma: Chain, preferred: Option<u32>) -> Result<()> {
        let family = local_family(&self.state, &sigma)?;
        let mut pivots = subset::is_inner_dull(&family).unwrap_or_default();
        if let Some(p) = preferred.filter(|p| pivots.contains(p)) {
            pivots.retain(|&x| x != p);
            pivots.insert(0, p);
        }
        let mut rules: Vec<RuleId> = pivots
            .into_iter()
            .map(|pivot| RuleId::PivotTrick {
                family: family.clone(),
                pivot,
            })
            .collect();
        if subset::is_right_dull(&family) {
            rules.push(RuleId::RightPivotTrick { family: family.clone() });
        }
        for rule in rules {
            let step = FillStep::new(rule, sigma.clone());
            if let Ok(next) = apply_step(&self.state, &step, self.target, Regime::MarkedScaled) {
                self.state = next;
                self.steps.push(step);
                return Ok(());
            }
        }
        Err(Error::Falsified(format!(
            "no pivot trick attaches {sigma} over the family {family}"
        )))
    }
}

/// Steps for `i^n_n : M^n_n ↪ Δ^{2n+1}`.
fn top_steps(n: u32, planner: &mut Planner) -> Result<()> {
    let top = 2 * n + 1;
    let b = |i: u32| bar(n, i);
    let ch = |v: Vec<u32>| {
        let mut v = v;
        v.sort_unstable();
        Chain::new(v)
    };
    if n == 1 {
        planner.push(FillStep::new(RuleId::OuterMsHorn { n: 2 }, Chain::new(vec![1, 2, 3])))?;
        planner.push(FillStep::new(
            RuleId::InnerHorn { n: 2, i: 1 },
            Chain::new(vec![0, 1, 2]),
        ))?;
        planner.push(FillStep::new(
            RuleId::InnerHorn { n: 3, i: 1 },
            Chain::new(vec![0, 1, 2, 3]),
        ))?;
        return Ok(());
    }
    let op: Vec<u32> = (n + 1..=top).collect();
    for k in (2..=n).rev() {
        let sigma = ch((k..=n).chain(op.iter().copied()).collect());
        let pivot = sigma.vertices().iter().position(|&v| v == b(n)).map(|p| p as u32);
        planner.pivot(sigma, pivot)?;
    }
    for m in (2..=n).rev() {
        let sigma = ch((0..=n).chain((m..=n).map(b)).chain([top]).collect());
        planner.pivot(sigma, None)?;
    }
    planner.pivot(ch((1..=n).chain(op.iter().copied()).collect()), None)?;
    planner.pivot(Chain::new((0..=top).collect()), Some(2))?;
    Ok(())
}

/// Steps for `j^n_k = i^n_n ∘ … ∘ i^n_k : M^n_k ↪ Δ^{2n+1}`.
fn j_steps(n: u32, k: u32, memo: &mut HashMap<(u32, u32), Vec<FillStep>>) -> Result<Vec<FillStep>> {
    if let Some(s) = memo.get(&(n, k)) {
        return Ok(s.clone());
    }
    let target = r(n);
    let start = target.restrict(&m_stage(n, k))?;
    let mut planner = Planner {
        state: start,
        target: &target,
        steps: Vec::new(),
    };
    if n > 0 {
        for l in k + 1..=n {
            // i^n_{l-1} adds the face missing l and l̄, which is j^{n-1}_{l-1} up to relabeling.
            let face = Chain::new((0..=2 * n + 1).filter(|&v| v != l && v != bar(n, l)).collect());
            for s in j_steps(n - 1, l - 1, memo)? {
                planner.push(s.map_through(&face))?;
            }
        }
        top_steps(n, &mut planner)?;
    }
    let steps = planner.steps;
    memo.insert((n, k), steps.clone());
    Ok(steps)
}

/// `v_n : J(Δ^n) ↪ R(Δ^n)` as a marked-scaled certificate.
///
/// One sharp right step adds the op part `Δ^{n̄, …, 0̄}`; the rest fills
/// `M^n_0 ↪ Δ^{2n+1}` face by face, recursing into lower `n`, and finally through the
/// four groups of pivot-trick steps. Every step is checked as it is generated, so a
/// hypothesis that fails surfaces as [`Error::Falsified`].
pub fn v_certificate(n: u32) -> Result<Certificate> {
    v_certificate_bounded(n, DEFAULT_VN_BOUND)
}

pub fn v_certificate_bounded(n: u32, bound: u32) -> Result<Certificate> {
    if n > bound {
        return Err(Error::OutOfRange { index: n, dim: bound });
    }
    let start = j(n);
    let target = r(n);
    let mut steps = Vec::new();
    if n > 0 {
        let op = Chain::new((n + 1..=2 * n + 1).collect());
        steps.push(FillStep::new(RuleId::SharpRight { steps: cone_steps(n) }, op));
    }
    steps.extend(j_steps(n, 0, &mut HashMap::new())?);
    Certificate::new(Regime::MarkedScaled, start, target, steps)
}

/// The family of a pivot step written in vertex labels instead of positions.
pub fn family_in_vertices(step: &FillStep) -> Option<Result<SubsetFamily>> {
    let family = match &step.rule {
        RuleId::PivotTrick { family, .. } | RuleId::RightPivotTrick { family } => family,
        _ => return None,
    };
    let v = step.attached.vertices().to_vec();
    let top = *v.last()?;
    Some(family.map_elements(top, |p| v[p as usize]))
}

/// `J(Δ^n)` differs from the flat simplex on `{0, …, n, 0̄}` only by scaling the triangles of
/// `Δ^{0, …, n}`, all of which lie in the left horn; redoing that pushout gives `J(Δ^n)` back.
pub fn pushout_decoration_check(n: u32) -> bool {
    let jn = j(n);
    let top = 2 * n + 1;
    let vertices: Vec<u32> = (0..=n).chain([top]).collect();
    let underlying = simplex_on(jn.ambient(), vertices.iter().copied());
    if jn.complex() != &underlying || !jn.marked().is_empty() {
        return false;
    }
    let base_triangles: BTreeSet<Chain> = Complex::nerve(linear(n))
        .cells_of_dim(2)
        .map(|c| Chain::new(c.vertices().to_vec()))
        .collect();
    if jn.scaled() != &base_triangles {
        return false;
    }
    // Λ_0 on {0, …, n, 0̄}: a simplex lies in it iff it misses a vertex other than 0.
    let in_left_horn = |c: &Chain| vertices[1..].iter().any(|v| !c.contains(*v));
    if !jn.scaled().iter().all(in_left_horn) {
        return false;
    }
    let flat = DecoratedComplex::flat(underlying, Regime::MarkedScaled);
    let glued = DecoratedComplex::new(
        flat.complex().clone(),
        flat.marked().iter().cloned(),
        flat.scaled().iter().cloned().chain(base_triangles),
        Regime::MarkedScaled,
    );
    glued.map(|g| g == jn).unwrap_or(false)
}

/// A map `Q(Δ^n) → X`, recorded by the images of the `2n + 2` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwSimplex {
    pub n: u32,
    pub images: Vec<u32>,
}

impl TwSimplex {
    /// The `i`-th face: drop positions `i` and `ī`.
    pub fn face(&self, i: u32) -> Result<TwSimplex> {
        if self.n == 0 || i > self.n {
            return Err(Error::OutOfRange { index: i, dim: self.n });
        }
        let b = bar(self.n, i);
        let images = self
            .images
            .iter()
            .enumerate()
            .filter(|&(p, _)| p as u32 != i && p as u32 != b)
            .map(|(_, &x)| x)
            .collect();
        Ok(TwSimplex { n: self.n - 1, images })
    }
}

impl fmt::Display for TwSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

fn dedup(images: &[u32]) -> Vec<u32> {
    let mut v = images.to_vec();
    v.dedup();
    v
}

/// Whether the vertex sequence defines a map `Q(Δ^n) → X`.
pub fn is_tw_simplex(x: &DecoratedComplex, n: u32, images: &[u32], dagger: &BTreeSet<Chain>) -> bool {
    let p = x.ambient();
    if images.len() != 2 * n as usize + 2 || !images.windows(2).all(|w| p.leq(w[0], w[1])) {
        return false;
    }
    if !x.complex().contains(&Chain::new(dedup(images))) {
        return false;
    }
    dagger.iter().all(|t| {
        let v = t.vertices();
        x.is_scaled(images[v[0] as usize], images[v[1] as usize], images[v[2] as usize])
    })
}

/// Every `n`-simplex of `Tw(X)`, in lexicographic order of vertex sequences.
pub fn tw_enumerate(x: &DecoratedComplex, n: u32) -> Vec<TwSimplex> {
    struct Walk<'a> {
        x: &'a DecoratedComplex,
        elements: Vec<u32>,
        len: usize,
        n: u32,
        dagger: BTreeSet<Chain>,
    }
    impl Walk<'_> {
        fn rec(&self, seq: &mut Vec<u32>, out: &mut Vec<TwSimplex>) {
            if seq.len() == self.len {
                if is_tw_simplex(self.x, self.n, seq, &self.dagger) {
                    out.push(TwSimplex {
                        n: self.n,
                        images: seq.clone(),
                    });
                }
                return;
            }
            for &e in &self.elements {
                if seq.last().is_none_or(|&l| self.x.ambient().leq(l, e)) {
                    seq.push(e);
                    if self.x.complex().contains(&Chain::new(dedup(seq))) {
                        self.rec(seq, out);
                    }
                    seq.pop();
                }
            }
        }
    }
    let mut elements = x.ambient().elements().to_vec();
    elements.sort_unstable();
    let walk = Walk {
        x,
        elements,
        len: 2 * n as usize + 2,
        n,
        dagger: dagger_triangles(n),
    };
    let mut out = Vec::new();
    walk.rec(&mut Vec::with_capacity(walk.len), &mut out);
    out
}

/// Whether every triangle of the `Δ^3` adjoint to the edge `e` lands scaled in `X`.
pub fn is_fully_scaled_edge(x: &DecoratedComplex, e: &TwSimplex) -> Result<bool> {
    if e.n != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: e.n,
        });
    }
    Ok(x.is_fully_scaled(&e.images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::replay;

    #[test]
    fn q1_scaling() {
        let got: Vec<Vec<u32>> = dagger_triangles(1).iter().map(|c| c.vertices().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn j_has_no_marking() {
        for n in 0..4 {
            assert!(j(n).marked().is_empty());
        }
        assert_eq!(r(0).complex().len(), 3);
        assert!(r(0).marked().is_empty());
    }

    #[test]
    fn filtration_is_strict() {
        let m = m_filtration(3);
        for w in m.stages.windows(2) {
            assert!(w[0].is_subcomplex_of(&w[1]) && w[0].len() < w[1].len());
        }
    }

    #[test]
    fn small_v_certificates_replay() {
        assert!(v_certificate(0).unwrap().steps.is_empty());
        let c1 = v_certificate(1).unwrap();
        assert_eq!(c1.steps.len(), 4);
        let rep = replay(&c1);
        assert!(rep.ok, "{rep}");
        let rep = replay(&v_certificate(2).unwrap());
        assert!(rep.ok, "{rep}");
    }

    #[test]
    fn pushout_check_small() {
        assert!((1..=4).all(pushout_decoration_check));
    }

    #[test]
    fn tw_of_an_edge() {
        let x = DecoratedComplex::flat(Complex::nerve(linear(1)), Regime::MarkedScaled);
        let got: Vec<String> = tw_enumerate(&x, 0).iter().map(|s| s.to_string()).collect();
        assert_eq!(got, ["0 0", "0 1", "1 1"]);
    }
}
