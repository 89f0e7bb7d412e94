//! Generator rules, single-step recognition, certificate replay and a small search.
//!
//! A step attaches the closure of one chain `σ` of the target. It is accepted when the
//! part of the current complex inside `closure(σ)`, read through `σ ≅ [dim σ]`, is the
//! domain of the named rule. The new state adds `closure(σ)` together with the rule's
//! codomain decorations, and every step must stay inside the target.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{Chain, Complex};
use crate::decorated::{match_linear, DecoratedComplex, DecorationMatch, Regime, Template};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::subset::{self, SubsetFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "params", rename_all = "kebab-case")]
pub enum RuleId {
    /// `Λ^n_i ⊆ Δ^n`, `0 < i < n`; in the marked-scaled regime `{i-1, i, i+1}` is scaled.
    InnerHorn { n: u32, i: u32 },
    /// `Λ^n_n ⊆ Δ^n` with `{n-1, n}` marked and `{0, n-1, n}` scaled.
    OuterMsHorn { n: u32 },
    /// `Λ^n_0 ⊆ Δ^n` with `{0, 1}` marked.
    LeftMarkedHorn { n: u32 },
    /// `Λ^n_n ⊆ Δ^n`, undecorated.
    RightHorn { n: u32 },
    /// `S^A ⊆ Δ^n` for an inner dull family, positions relative to the attached chain.
    PivotTrick { family: SubsetFamily, pivot: u32 },
    /// `S^A ⊆ Δ^n` for a right dull family.
    RightPivotTrick { family: SubsetFamily },
    /// A right anodyne inclusion, witnessed by `steps`, with every edge and triangle decorated.
    SharpRight { steps: Vec<FillStep> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trust {
    Primitive,
    CitedLemma,
}

impl RuleId {
    pub fn inner_horn(n: u32, i: u32) -> Result<Self> {
        let r = RuleId::InnerHorn { n, i };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RuleId::InnerHorn { n, i } => {
                if n < 2 || i == 0 || i >= n {
                    return Err(Error::OutOfRange { index: i, dim: n });
                }
            }
            RuleId::OuterMsHorn { n } | RuleId::LeftMarkedHorn { n } | RuleId::RightHorn { n } => {
                if n == 0 {
                    return Err(Error::OutOfRange { index: 0, dim: 0 });
                }
            }
            RuleId::PivotTrick { ref family, pivot } => {
                if !subset::is_inner_dull(family).is_some_and(|p| p.contains(&pivot)) {
                    return Err(Error::NotDull("inner"));
                }
            }
            RuleId::RightPivotTrick { ref family } => {
                if !subset::is_right_dull(family) {
                    return Err(Error::NotDull("right"));
                }
            }
            RuleId::SharpRight { .. } => {}
        }
        Ok(())
    }

    pub fn trust(&self) -> Trust {
        match self {
            RuleId::PivotTrick { .. } | RuleId::RightPivotTrick { .. } | RuleId::SharpRight { .. } => Trust::CitedLemma,
            _ => Trust::Primitive,
        }
    }

    pub fn allowed_in(&self, regime: Regime) -> bool {
        match self {
            RuleId::InnerHorn { .. } => true,
            RuleId::RightHorn { .. } => regime == Regime::Plain,
            RuleId::LeftMarkedHorn { .. } => regime == Regime::Marked,
            RuleId::OuterMsHorn { .. }
            | RuleId::PivotTrick { .. }
            | RuleId::RightPivotTrick { .. }
            | RuleId::SharpRight { .. } => regime == Regime::MarkedScaled,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RuleId::InnerHorn { .. } => "inner-horn",
            RuleId::OuterMsHorn { .. } => "outer-ms-horn",
            RuleId::LeftMarkedHorn { .. } => "left-marked-horn",
            RuleId::RightHorn { .. } => "right-horn",
            RuleId::PivotTrick { .. } => "pivot-trick",
            RuleId::RightPivotTrick { .. } => "right-pivot-trick",
            RuleId::SharpRight { .. } => "sharp-right",
        }
    }

    /// The decorated horn inclusion for the horn rules; `None` for macro rules.
    pub fn template(&self, regime: Regime) -> Result<Option<Template>> {
        self.validate()?;
        let ms = regime == Regime::MarkedScaled;
        let all_but = |n: u32, k: u32| -> BTreeSet<u32> { (0..=n).filter(|&j| j != k).collect() };
        let t = match *self {
            RuleId::InnerHorn { n, i } => {
                let scaled = if ms { vec![vec![i - 1, i, i + 1]] } else { vec![] };
                Template::horn_shaped(n, &all_but(n, i), &[], &scaled, regime)?
            }
            RuleId::OuterMsHorn { n } => {
                Template::horn_shaped(n, &all_but(n, n), &[vec![n - 1, n]], &[vec![0, n - 1, n]], regime)?
            }
            RuleId::LeftMarkedHorn { n } => Template::horn_shaped(n, &all_but(n, 0), &[vec![0, 1]], &[], regime)?,
            RuleId::RightHorn { n } => Template::horn_shaped(n, &all_but(n, n), &[], &[], regime)?,
            _ => return Ok(None),
        };
        Ok(Some(t))
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::InnerHorn { n, i } => write!(f, "inner-horn(n={n}, i={i})"),
            RuleId::OuterMsHorn { n } => write!(f, "outer-ms-horn(n={n})"),
            RuleId::LeftMarkedHorn { n } => write!(f, "left-marked-horn(n={n})"),
            RuleId::RightHorn { n } => write!(f, "right-horn(n={n})"),
            RuleId::PivotTrick { family, pivot } => write!(f, "pivot-trick({family}, pivot={pivot})"),
            RuleId::RightPivotTrick { family } => write!(f, "right-pivot-trick({family})"),
            RuleId::SharpRight { steps } => write!(f, "sharp-right({} sub-steps)", steps.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillStep {
    #[serde(flatten)]
    pub rule: RuleId,
    pub attached: Chain,
    pub trust: Trust,
}

impl FillStep {
    pub fn new(rule: RuleId, attached: Chain) -> Self {
        let trust = rule.trust();
        FillStep { rule, attached, trust }
    }

    /// Reads `attached` as positions in `outer` and substitutes the vertices of `outer`.
    pub fn map_through(&self, outer: &Chain) -> FillStep {
        FillStep {
            rule: self.rule.clone(),
            attached: self.attached.map_through(outer),
            trust: self.trust,
        }
    }

    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> FillStep {
        FillStep {
            rule: self.rule.clone(),
            attached: Chain::new(self.attached.vertices().iter().map(|&v| f(v)).collect()),
            trust: self.trust,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub regime: Regime,
    pub start: DecoratedComplex,
    pub target: DecoratedComplex,
    pub steps: Vec<FillStep>,
}

#[derive(Serialize, Deserialize)]
struct DecoratedRepr {
    cells: Vec<Chain>,
    #[serde(default)]
    marked: Vec<Chain>,
    #[serde(default)]
    scaled: Vec<Chain>,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    regime: Regime,
    ambient: Poset,
    start: DecoratedRepr,
    target: DecoratedRepr,
    steps: Vec<FillStep>,
}

impl DecoratedRepr {
    fn of(x: &DecoratedComplex) -> Self {
        DecoratedRepr {
            cells: x.complex().facets(),
            marked: x.marked().iter().cloned().collect(),
            scaled: x.scaled().iter().cloned().collect(),
        }
    }

    fn build(self, ambient: &Arc<Poset>, regime: Regime) -> Result<DecoratedComplex> {
        let c = Complex::close(ambient.clone(), self.cells)?;
        DecoratedComplex::new(c, self.marked, self.scaled, regime)
    }
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateRepr {
            regime: self.regime,
            ambient: (**self.start.ambient()).clone(),
            start: DecoratedRepr::of(&self.start),
            target: DecoratedRepr::of(&self.target),
            steps: self.steps.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CertificateRepr::deserialize(d)?;
        let ambient = Arc::new(r.ambient);
        let start = r.start.build(&ambient, r.regime).map_err(serde::de::Error::custom)?;
        let target = r.target.build(&ambient, r.regime).map_err(serde::de::Error::custom)?;
        Ok(Certificate {
            regime: r.regime,
            start,
            target,
            steps: r.steps,
        })
    }
}

impl Certificate {
    pub fn new(
        regime: Regime,
        start: DecoratedComplex,
        target: DecoratedComplex,
        steps: Vec<FillStep>,
    ) -> Result<Self> {
        if !start.complex().same_ambient(target.complex()) {
            return Err(Error::AmbientMismatch);
        }
        Ok(Certificate {
            regime,
            start: start.with_regime(regime)?,
            target: target.with_regime(regime)?,
            steps,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Index of the offending step; `steps.len()` when all steps pass but the end state is wrong.
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub ok: bool,
    pub steps_checked: usize,
    pub failure: Option<Failure>,
    pub fully_primitive: bool,
    pub inner_only: bool,
    pub cited_steps: usize,
    pub final_cells: usize,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "ok: {} steps, {} cells, {}",
                self.steps_checked,
                self.final_cells,
                if self.fully_primitive {
                    "fully primitive"
                } else {
                    "uses cited lemmas"
                }
            )?,
            Some(fail) => write!(f, "FAILED at step {}: {}", fail.index, fail.reason)?,
        }
        if self.cited_steps > 0 && self.failure.is_none() {
            write!(f, " ({} cited-lemma steps)", self.cited_steps)?;
        }
        Ok(())
    }
}

fn linear_arc(n: u32) -> Arc<Poset> {
    Arc::new(Poset::linear(n))
}

/// `x ∩ closure(sigma)` relabeled onto `[dim sigma]`.
pub fn local_view(x: &DecoratedComplex, sigma: &Chain) -> DecoratedComplex {
    let to_pos = |c: &Chain| Chain::new(c.positions_in(sigma).expect("subchain of sigma"));
    let cells: Vec<Chain> = x.complex().restricted_to(sigma).iter().map(to_pos).collect();
    let ambient = linear_arc(sigma.dim());
    let complex = Complex::from_cells(ambient, cells).expect("restriction of a complex is a complex");
    let marked: Vec<Chain> = x
        .marked()
        .iter()
        .filter(|e| e.is_subchain_of(sigma))
        .map(to_pos)
        .collect();
    let scaled: Vec<Chain> = x
        .scaled()
        .iter()
        .filter(|t| t.is_subchain_of(sigma))
        .map(to_pos)
        .collect();
    DecoratedComplex::new(complex, marked, scaled, x.regime()).expect("restricted decorations are valid")
}

fn is_subset_of_target(x: &DecoratedComplex, target: &DecoratedComplex) -> Option<String> {
    if let Some(c) = x.complex().iter().find(|c| !target.complex().contains(c)) {
        return Some(format!("cell {c} is not in the target"));
    }
    if let Some(e) = x.marked().iter().find(|e| !target.marked().contains(*e)) {
        return Some(format!("edge {e} is marked but not marked in the target"));
    }
    if let Some(t) = x.scaled().iter().find(|t| !target.scaled().contains(*t)) {
        return Some(format!("triangle {t} is scaled but not scaled in the target"));
    }
    None
}

/// Adds `closure(sigma)` and the given decorations (in positions of `sigma`).
fn push_out(
    current: &DecoratedComplex,
    sigma: &Chain,
    marked: impl IntoIterator<Item = Chain>,
    scaled: impl IntoIterator<Item = Chain>,
) -> DecoratedComplex {
    let mut next = current.clone();
    let (complex, m, s) = next.parts_mut();
    complex.insert_closure(sigma);
    m.extend(marked.into_iter().map(|c| c.map_through(sigma)));
    s.extend(scaled.into_iter().map(|c| c.map_through(sigma)));
    next
}

fn describe_mismatch(local: &Complex, expected: &Complex) -> String {
    let missing = expected.iter().filter(|c| !local.contains(c)).count();
    let extra: Vec<&Chain> = local.iter().filter(|c| !expected.contains(c)).collect();
    match (missing, extra.first()) {
        (0, Some(c)) => format!(
            "intersection has {} extra cells, e.g. {c} in local positions",
            extra.len()
        ),
        (m, _) => format!("intersection lacks {m} cells of the rule's domain"),
    }
}

/// Applies one step to `current`, or explains why the step is not a pushout of its rule.
pub fn apply_step(
    current: &DecoratedComplex,
    step: &FillStep,
    target: &DecoratedComplex,
    regime: Regime,
) -> std::result::Result<DecoratedComplex, String> {
    let sigma = &step.attached;
    if step.trust != step.rule.trust() {
        return Err(format!(
            "step claims trust {:?} but {} is {:?}",
            step.trust,
            step.rule.name(),
            step.rule.trust()
        ));
    }
    if !step.rule.allowed_in(regime) {
        return Err(format!(
            "rule {} is not available in the {regime} regime",
            step.rule.name()
        ));
    }
    step.rule.validate().map_err(|e| format!("malformed rule: {e}"))?;
    if sigma.is_empty() || !sigma.is_chain_in(current.ambient()) {
        return Err(format!("attached {sigma} is not a chain of the ambient poset"));
    }
    if !target.complex().contains(sigma) {
        return Err(format!("attached {sigma} is not a cell of the target"));
    }
    if current.complex().contains(sigma) {
        return Err(format!("attached {sigma} is already present"));
    }
    let next = match &step.rule {
        RuleId::PivotTrick { family, .. } | RuleId::RightPivotTrick { family } => {
            apply_pivot(current, sigma, &step.rule, family, target)?
        }
        RuleId::SharpRight { steps } => apply_sharp_right(current, sigma, steps, target)?,
        rule => {
            let template = rule.template(regime).map_err(|e| e.to_string())?.expect("horn rule");
            if sigma.dim() != template.dim {
                return Err(format!("{rule} needs a {}-chain, got {sigma}", template.dim));
            }
            let ok = match_linear(current, sigma, &template, DecorationMatch::Contains).map_err(|e| e.to_string())?;
            if !ok {
                let local = local_view(current, sigma);
                let reason = if local.complex().cells() != template.domain.complex().cells() {
                    describe_mismatch(local.complex(), template.domain.complex())
                } else {
                    "the rule's domain decorations are missing".to_string()
                };
                return Err(format!("{rule} does not apply to {sigma}: {reason}"));
            }
            push_out(
                current,
                sigma,
                template.codomain.marked().iter().cloned(),
                template.codomain.scaled().iter().cloned(),
            )
        }
    };
    if let Some(reason) = is_subset_of_target(&next, target) {
        return Err(format!("after attaching {sigma}: {reason}"));
    }
    Ok(next)
}

fn apply_pivot(
    current: &DecoratedComplex,
    sigma: &Chain,
    rule: &RuleId,
    family: &SubsetFamily,
    target: &DecoratedComplex,
) -> std::result::Result<DecoratedComplex, String> {
    if family.n() != sigma.dim() {
        return Err(format!(
            "family lives on [{}] but {sigma} has dimension {}",
            family.n(),
            sigma.dim()
        ));
    }
    let local = local_view(current, sigma);
    let expected = subset::s_complex(family);
    if local.complex().cells() != expected.cells() {
        return Err(format!(
            "intersection with {sigma} is not S^A for A = {family}: {}",
            describe_mismatch(local.complex(), &expected)
        ));
    }
    let goal = local_view(target, sigma);
    let holds = match rule {
        RuleId::PivotTrick { pivot, .. } => subset::pivot_hypotheses(family, *pivot, &goal),
        _ => subset::right_pivot_hypotheses(family, &goal),
    }
    .map_err(|e| e.to_string())?;
    if !holds {
        return Err(format!("hypotheses of {} fail on {sigma}", rule.name()));
    }
    let missing_marked = goal
        .marked()
        .iter()
        .find(|e| local.complex().contains(e) && !local.marked().contains(*e));
    let missing_scaled = goal
        .scaled()
        .iter()
        .find(|t| local.complex().contains(t) && !local.scaled().contains(*t));
    if let Some(c) = missing_marked.or(missing_scaled) {
        return Err(format!(
            "domain decoration {} is absent from the current complex",
            c.map_through(sigma)
        ));
    }
    Ok(push_out(
        current,
        sigma,
        goal.marked().iter().cloned(),
        goal.scaled().iter().cloned(),
    ))
}

fn apply_sharp_right(
    current: &DecoratedComplex,
    sigma: &Chain,
    steps: &[FillStep],
    target: &DecoratedComplex,
) -> std::result::Result<DecoratedComplex, String> {
    let local = local_view(current, sigma);
    let n = sigma.dim();
    let all_edges: Vec<Chain> = (0..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| Chain::new(vec![a, b])))
        .collect();
    let all_triangles: Vec<Chain> = (0..=n)
        .flat_map(|a| (a + 1..=n).flat_map(move |b| (b + 1..=n).map(move |c| Chain::new(vec![a, b, c]))))
        .collect();
    let goal = local_view(target, sigma);
    if let Some(e) = all_edges.iter().find(|e| !goal.marked().contains(*e)) {
        return Err(format!(
            "target is not sharp on {sigma}: edge {} unmarked",
            e.map_through(sigma)
        ));
    }
    if let Some(t) = all_triangles.iter().find(|t| !goal.scaled().contains(*t)) {
        return Err(format!(
            "target is not sharp on {sigma}: triangle {} unscaled",
            t.map_through(sigma)
        ));
    }
    let unsharp = local
        .complex()
        .iter()
        .find(|c| (c.dim() == 1 && !local.marked().contains(*c)) || (c.dim() == 2 && !local.scaled().contains(*c)));
    if let Some(c) = unsharp {
        return Err(format!(
            "intersection with {sigma} is not sharp at {}",
            c.map_through(sigma)
        ));
    }
    if steps
        .iter()
        .any(|s| !matches!(s.rule, RuleId::InnerHorn { .. } | RuleId::RightHorn { .. }))
    {
        return Err("sharp-right sub-steps must be inner or right horns".into());
    }
    let sub = Certificate {
        regime: Regime::Plain,
        start: DecoratedComplex::flat(local.complex().clone(), Regime::Plain),
        target: DecoratedComplex::flat(Complex::nerve(linear_arc(n)), Regime::Plain),
        steps: steps.to_vec(),
    };
    let report = replay(&sub);
    if let Some(f) = report.failure {
        return Err(format!(
            "right anodyne sub-certificate fails at sub-step {}: {}",
            f.index, f.reason
        ));
    }
    Ok(push_out(current, sigma, all_edges, all_triangles))
}

/// Whether `step` is accepted from `current` on the way to `target`.
pub fn recognize(current: &DecoratedComplex, step: &FillStep, target: &DecoratedComplex, regime: Regime) -> bool {
    apply_step(current, step, target, regime).is_ok()
}

fn same_state(a: &DecoratedComplex, b: &DecoratedComplex) -> bool {
    a.complex() == b.complex() && a.decorations() == b.decorations()
}

/// Replays every step in order.
pub fn replay(cert: &Certificate) -> Report {
    let fully_primitive = cert.steps.iter().all(|s| s.rule.trust() == Trust::Primitive);
    let inner_only = cert.steps.iter().all(|s| matches!(s.rule, RuleId::InnerHorn { .. }));
    let cited_steps = cert
        .steps
        .iter()
        .filter(|s| s.rule.trust() == Trust::CitedLemma)
        .count();
    let mut report = Report {
        ok: false,
        steps_checked: 0,
        failure: None,
        fully_primitive,
        inner_only,
        cited_steps,
        final_cells: cert.start.complex().len(),
    };
    let fail = |mut r: Report, index: usize, reason: String| {
        r.failure = Some(Failure { index, reason });
        r
    };
    if !cert.start.complex().same_ambient(cert.target.complex()) {
        return fail(report, 0, "start and target live over different posets".into());
    }
    if let Some(reason) = is_subset_of_target(&cert.start, &cert.target) {
        return fail(report, 0, format!("start is not contained in the target: {reason}"));
    }
    let mut state = cert.start.clone();
    for (k, step) in cert.steps.iter().enumerate() {
        match apply_step(&state, step, &cert.target, cert.regime) {
            Ok(next) => state = next,
            Err(reason) => return fail(report, k, reason),
        }
        report.steps_checked = k + 1;
        report.final_cells = state.complex().len();
    }
    if !same_state(&state, &cert.target) {
        let missing = cert.target.complex().len() - state.complex().len();
        let reason = if missing > 0 {
            format!("{missing} target cells were never attached")
        } else {
            "final decorations differ from the target".to_string()
        };
        return fail(report, cert.steps.len(), reason);
    }
    report.ok = true;
    report
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Maximum number of explored states.
    pub budget: usize,
    /// Use inner horns only (no right or outer horns).
    pub inner_only: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 100_000,
            inner_only: false,
        }
    }
}

/// Orders candidate chains: by the cube order on top simplices when the ambient is a
/// Boolean lattice, lexicographically otherwise.
fn candidate_order(target: &DecoratedComplex, start: &DecoratedComplex) -> Vec<Chain> {
    let mut cands: Vec<Chain> = target
        .complex()
        .iter()
        .filter(|c| c.dim() >= 1 && !start.complex().contains(c))
        .cloned()
        .collect();
    if let Some(n) = crate::cube::boolean_rank(target.ambient()) {
        let key = crate::cube::ChainOrderKey::new(n);
        cands.sort_by_cached_key(|c| (key.rank(c), c.clone()));
    }
    cands
}

fn horn_rules(dim: u32, missing: u32, regime: Regime, inner_only: bool) -> Option<RuleId> {
    if missing > 0 && missing < dim {
        return Some(RuleId::InnerHorn { n: dim, i: missing });
    }
    if inner_only {
        return None;
    }
    match (regime, missing == dim) {
        (Regime::Plain, true) => Some(RuleId::RightHorn { n: dim }),
        (Regime::MarkedScaled, true) => Some(RuleId::OuterMsHorn { n: dim }),
        (Regime::Marked, false) => Some(RuleId::LeftMarkedHorn { n: dim }),
        _ => None,
    }
}

struct Searcher<'a> {
    target: &'a DecoratedComplex,
    regime: Regime,
    opts: SearchOptions,
    candidates: Vec<Chain>,
    index: HashMap<Chain, usize>,
    failed: HashSet<Vec<u64>>,
    visited: usize,
}

impl Searcher<'_> {
    fn key(&self, x: &DecoratedComplex) -> Vec<u64> {
        let words = self.index.len() / 64 + 1;
        let mut key = vec![0u64; 3 * words];
        let mut set = |part: usize, c: &Chain| {
            if let Some(&i) = self.index.get(c) {
                key[part * words + i / 64] |= 1 << (i % 64);
            }
        };
        for c in x.complex().iter() {
            set(0, c);
        }
        for c in x.marked() {
            set(1, c);
        }
        for c in x.scaled() {
            set(2, c);
        }
        key
    }

    /// A state whose new cells lack target decorations can never reach the target.
    fn decorations_complete_on(&self, x: &DecoratedComplex, sigma: &Chain) -> bool {
        sigma.subchains().all(|c| match c.dim() {
            1 => !self.target.marked().contains(&c) || x.marked().contains(&c),
            2 => !self.target.scaled().contains(&c) || x.scaled().contains(&c),
            _ => true,
        })
    }

    fn dfs(&mut self, state: &DecoratedComplex, path: &mut Vec<FillStep>) -> Option<bool> {
        if same_state(state, self.target) {
            return Some(true);
        }
        let key = self.key(state);
        if self.failed.contains(&key) {
            return Some(false);
        }
        self.visited += 1;
        if self.visited > self.opts.budget {
            return None;
        }
        for ci in 0..self.candidates.len() {
            let sigma = &self.candidates[ci];
            if state.complex().contains(sigma) {
                continue;
            }
            let dim = sigma.dim();
            let missing: Vec<u32> = (0..=dim)
                .filter(|&i| !state.complex().contains(&sigma.face(i as usize)))
                .collect();
            if missing.len() != 1 {
                continue;
            }
            let Some(rule) = horn_rules(dim, missing[0], self.regime, self.opts.inner_only) else {
                continue;
            };
            let step = FillStep::new(rule, sigma.clone());
            let Ok(next) = apply_step(state, &step, self.target, self.regime) else {
                continue;
            };
            if !self.decorations_complete_on(&next, sigma) {
                continue;
            }
            path.push(step);
            match self.dfs(&next, path) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    path.pop();
                }
            }
        }
        self.failed.insert(key);
        Some(false)
    }
}

/// Depth-first search for a certificate made of horn steps, exploring candidate chains in
/// the documented order and remembering states already known to fail.
///
/// Returns `Ok(None)` when the budget runs out or no certificate exists.
pub fn search(
    start: &DecoratedComplex,
    target: &DecoratedComplex,
    regime: Regime,
    opts: SearchOptions,
) -> Result<Option<Certificate>> {
    if !start.complex().is_subcomplex_of(target.complex()) {
        return Err(Error::Invalid("search needs start ⊆ target".into()));
    }
    let start = start.clone().with_regime(regime)?;
    let target = target.clone().with_regime(regime)?;
    let candidates = candidate_order(&target, &start);
    let index = target
        .complex()
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut s = Searcher {
        target: &target,
        regime,
        opts,
        candidates,
        index,
        failed: HashSet::new(),
        visited: 0,
    };
    let mut path = Vec::new();
    match s.dfs(&start, &mut path) {
        Some(true) => Ok(Some(Certificate::new(regime, start.clone(), target.clone(), path)?)),
        _ => Ok(None),
    }
}
