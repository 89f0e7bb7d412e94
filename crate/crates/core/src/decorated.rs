//! Markings (distinguished edges) and scalings (distinguished triangles) on complexes.
//!
//! Only nondegenerate cells are stored. Degenerate edges and triangles count as decorated
//! without being listed, so a triangle given by three vertices with a repeat is always scaled.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{Chain, Complex};
use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Plain,
    Marked,
    MarkedScaled,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Plain => "plain",
            Regime::Marked => "marked",
            Regime::MarkedScaled => "marked-scaled",
        }
    }

    pub fn allows_marking(self) -> bool {
        self != Regime::Plain
    }

    pub fn allows_scaling(self) -> bool {
        self == Regime::MarkedScaled
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Regime::Plain),
            "marked" => Ok(Regime::Marked),
            "marked-scaled" | "ms" => Ok(Regime::MarkedScaled),
            other => Err(Error::Invalid(format!("unknown regime {other:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct DecoratedComplex {
    complex: Complex,
    marked: BTreeSet<Chain>,
    scaled: BTreeSet<Chain>,
    regime: Regime,
}

impl fmt::Debug for DecoratedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecoratedComplex")
            .field("regime", &self.regime)
            .field("facets", &self.complex.facets())
            .field("marked", &self.marked)
            .field("scaled", &self.scaled)
            .finish()
    }
}

impl DecoratedComplex {
    pub fn new(
        complex: Complex,
        marked: impl IntoIterator<Item = Chain>,
        scaled: impl IntoIterator<Item = Chain>,
        regime: Regime,
    ) -> Result<Self> {
        let marked: BTreeSet<Chain> = marked.into_iter().collect();
        let scaled: BTreeSet<Chain> = scaled.into_iter().collect();
        if !marked.is_empty() && !regime.allows_marking() {
            return Err(Error::RegimeViolation(regime.name(), "marked edges"));
        }
        if !scaled.is_empty() && !regime.allows_scaling() {
            return Err(Error::RegimeViolation(regime.name(), "scaled triangles"));
        }
        for e in &marked {
            if e.dim() != 1 || !complex.contains(e) {
                return Err(Error::BadDecoration(e.clone()));
            }
        }
        for t in &scaled {
            if t.dim() != 2 || !complex.contains(t) {
                return Err(Error::BadDecoration(t.clone()));
            }
        }
        Ok(DecoratedComplex {
            complex,
            marked,
            scaled,
            regime,
        })
    }

    /// No decorations beyond the implicit degenerate ones.
    pub fn flat(complex: Complex, regime: Regime) -> Self {
        DecoratedComplex {
            complex,
            marked: BTreeSet::new(),
            scaled: BTreeSet::new(),
            regime,
        }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn ambient(&self) -> &Arc<Poset> {
        self.complex.ambient()
    }

    pub fn marked(&self) -> &BTreeSet<Chain> {
        &self.marked
    }

    pub fn scaled(&self) -> &BTreeSet<Chain> {
        &self.scaled
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn with_regime(mut self, regime: Regime) -> Result<Self> {
        if (!self.marked.is_empty() && !regime.allows_marking())
            || (!self.scaled.is_empty() && !regime.allows_scaling())
        {
            return Err(Error::RegimeViolation(regime.name(), "existing decorations"));
        }
        self.regime = regime;
        Ok(self)
    }

    /// Whether the edge `a -> b` is marked; `a == b` is degenerate and always marked.
    pub fn is_marked(&self, a: u32, b: u32) -> bool {
        a == b || self.marked.contains(&Chain::new(vec![a, b]))
    }

    /// Whether the triangle `a <= b <= c` is scaled; repeats make it degenerate, hence scaled.
    pub fn is_scaled(&self, a: u32, b: u32, c: u32) -> bool {
        a == b || b == c || a == c || self.scaled.contains(&Chain::new(vec![a, b, c]))
    }

    /// Whether every triangle of the simplex on `vertices` (listed in order) is scaled.
    pub fn is_fully_scaled(&self, vertices: &[u32]) -> bool {
        let n = vertices.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.is_scaled(vertices[i], vertices[j], vertices[k]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Cells of `sub` with decorations intersected.
    pub fn restrict(&self, sub: &Complex) -> Result<DecoratedComplex> {
        if !sub.same_ambient(&self.complex) {
            return Err(Error::AmbientMismatch);
        }
        if let Some(missing) = sub.iter().find(|c| !self.complex.contains(c)) {
            return Err(Error::NotSubcomplex(missing.clone()));
        }
        Ok(DecoratedComplex {
            marked: self.marked.iter().filter(|e| sub.contains(e)).cloned().collect(),
            scaled: self.scaled.iter().filter(|t| sub.contains(t)).cloned().collect(),
            complex: sub.clone(),
            regime: self.regime,
        })
    }

    /// Decoration sets as a pair, for comparisons that ignore the regime tag.
    pub fn decorations(&self) -> (&BTreeSet<Chain>, &BTreeSet<Chain>) {
        (&self.marked, &self.scaled)
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Complex, &mut BTreeSet<Chain>, &mut BTreeSet<Chain>) {
        (&mut self.complex, &mut self.marked, &mut self.scaled)
    }
}

/// A generating inclusion `domain ⊆ codomain` of decorated subcomplexes of `Δ^dim`.
#[derive(Clone, Debug)]
pub struct Template {
    pub dim: u32,
    pub domain: DecoratedComplex,
    pub codomain: DecoratedComplex,
}

impl Template {
    /// Builds a template on `Δ^dim` from the horn faces in the domain and decoration lists
    /// given as index chains. Decorations on cells outside the domain only go to the codomain.
    pub fn horn_shaped(
        dim: u32,
        domain_faces: &BTreeSet<u32>,
        marked: &[Vec<u32>],
        scaled: &[Vec<u32>],
        regime: Regime,
    ) -> Result<Self> {
        let full = crate::complex::standard_simplex(dim);
        let domain = if domain_faces.is_empty() {
            Complex::empty(full.ambient().clone())
        } else {
            let h = crate::complex::generalized_horn(dim, domain_faces)?;
            Complex::from_cells(full.ambient().clone(), h.cells().iter().cloned())?
        };
        let keep = |list: &[Vec<u32>], d: u32| -> Vec<Chain> {
            list.iter()
                .map(|v| Chain::new(v.clone()))
                .filter(|c| c.len() as u32 == d + 1 && c.vertices().windows(2).all(|w| w[0] < w[1]))
                .collect()
        };
        let m = keep(marked, 1);
        let s = keep(scaled, 2);
        let codomain = DecoratedComplex::new(full, m.clone(), s.clone(), regime)?;
        let domain = DecoratedComplex::new(
            domain.clone(),
            m.into_iter().filter(|c| domain.contains(c)),
            s.into_iter().filter(|c| domain.contains(c)),
            regime,
        )?;
        Ok(Template { dim, domain, codomain })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecorationMatch {
    /// Decorations must coincide after relabeling.
    Exact,
    /// The template's decorations must be present; extra ones are allowed.
    Contains,
}

/// Relabels cells of `closure(sigma)` by vertex position in `sigma`.
fn relabel(cells: impl Iterator<Item = Chain>, sigma: &Chain) -> BTreeSet<Chain> {
    cells
        .map(|c| Chain::new(c.positions_in(sigma).expect("cell lies in closure of sigma")))
        .collect()
}

/// Does `x ∩ closure(sigma)`, read through the unique order isomorphism `sigma ≅ [dim]`,
/// coincide with the template's domain?
///
/// Cells must agree exactly; decorations are compared according to `mode`.
pub fn match_linear(x: &DecoratedComplex, sigma: &Chain, template: &Template, mode: DecorationMatch) -> Result<bool> {
    if sigma.dim() != template.dim {
        return Err(Error::DimensionMismatch {
            expected: template.dim,
            found: sigma.dim(),
        });
    }
    if !sigma.is_chain_in(x.ambient()) {
        return Err(Error::NotAChain(sigma.clone()));
    }
    let sub = x.complex().restricted_to(sigma);
    let cells = relabel(sub.iter().cloned(), sigma);
    if &cells != template.domain.complex().cells() {
        return Ok(false);
    }
    let marked = relabel(sub.iter().filter(|c| x.marked().contains(*c)).cloned(), sigma);
    let scaled = relabel(sub.iter().filter(|c| x.scaled().contains(*c)).cloned(), sigma);
    let ok = match mode {
        DecorationMatch::Exact => &marked == template.domain.marked() && &scaled == template.domain.scaled(),
        DecorationMatch::Contains => {
            template.domain.marked().is_subset(&marked) && template.domain.scaled().is_subset(&scaled)
        }
    };
    Ok(ok)
}
