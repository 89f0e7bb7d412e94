//! Line-oriented text format for decorated complexes.
//!
//! ```text
//! // comment lines start with two slashes; blank lines are ignored
//! #ambient linear 3          (or: boolean N | prism N | elements 0,1,2 followed by #order)
//! #order                     (only with "elements": one generating pair "a,b" per line, a < b)
//! 0,1
//! #regime marked-scaled      (optional: plain | marked | marked-scaled; inferred otherwise)
//! #cells
//! 0,1,2
//! 1,3
//! #mark
//! 0,1
//! #scale
//! 0,1,2
//! ```
//!
//! Every line under `#cells` is a chain given as comma-separated element ids in increasing
//! order. The complex is the downward closure of the listed chains, so listing facets is
//! enough; the writer lists every cell. `#mark` lists edges and `#scale` lists triangles;
//! both must be cells of the complex.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::complex::{Chain, Complex};
use crate::decorated::{DecoratedComplex, Regime};
use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Order,
    Cells,
    Mark,
    Scale,
}

fn parse_ids(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split(',')
        .map(|t| {
            t.trim().parse::<u32>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad element id {t:?}: {e}"),
            })
        })
        .collect()
}

fn parse_ambient(words: &[&str], lineno: usize) -> Result<(Option<Poset>, Option<Vec<u32>>)> {
    let err = |msg: &str| Error::Parse {
        line: lineno,
        msg: msg.to_string(),
    };
    let num = |w: Option<&&str>| -> Result<u32> {
        w.ok_or_else(|| err("missing size"))?
            .parse::<u32>()
            .map_err(|_| err("bad size"))
    };
    match words.first().copied() {
        Some("linear") => Ok((Some(Poset::linear(num(words.get(1))?)), None)),
        Some("boolean") => {
            let n = num(words.get(1))?;
            if n >= 16 {
                return Err(err("boolean lattice too large"));
            }
            Ok((Some(Poset::boolean(n)), None))
        }
        Some("prism") => Ok((Some(Poset::linear(num(words.get(1))?).times_interval()), None)),
        Some("elements") => {
            let ids = parse_ids(words.get(1).ok_or_else(|| err("missing element list"))?, lineno)?;
            Ok((None, Some(ids)))
        }
        _ => Err(err("unknown ambient kind")),
    }
}

/// Parses the text format into a decorated complex.
pub fn parse(input: &str) -> Result<DecoratedComplex> {
    let mut section = Section::None;
    let mut poset: Option<Poset> = None;
    let mut elements: Option<Vec<u32>> = None;
    let mut order = Vec::new();
    let mut regime: Option<Regime> = None;
    let mut cells = Vec::new();
    let mut marks = Vec::new();
    let mut scales = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let words: Vec<&str> = header.split_whitespace().collect();
            match words.first().copied() {
                Some("ambient") => {
                    let (p, e) = parse_ambient(&words[1..], lineno)?;
                    poset = p;
                    elements = e;
                    section = Section::None;
                }
                Some("order") => section = Section::Order,
                Some("regime") => {
                    let name = words.get(1).ok_or(Error::Parse {
                        line: lineno,
                        msg: "missing regime".into(),
                    })?;
                    regime = Some(name.parse().map_err(|e: Error| Error::Parse {
                        line: lineno,
                        msg: e.to_string(),
                    })?);
                }
                Some("cells") => section = Section::Cells,
                Some("mark") => section = Section::Mark,
                Some("scale") => section = Section::Scale,
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unknown section {line:?}"),
                    })
                }
            }
            continue;
        }
        let ids = parse_ids(line, lineno)?;
        match section {
            Section::None => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "data line outside of a section".into(),
                })
            }
            Section::Order => {
                if ids.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "order lines are pairs".into(),
                    });
                }
                order.push((ids[0], ids[1]));
            }
            Section::Cells => cells.push(Chain::new(ids)),
            Section::Mark => marks.push(Chain::new(ids)),
            Section::Scale => scales.push(Chain::new(ids)),
        }
    }

    let poset = match (poset, elements) {
        (Some(p), _) => p,
        (None, Some(e)) => Poset::from_generating_pairs(e, order)?,
        (None, None) => {
            return Err(Error::Parse {
                line: 0,
                msg: "missing #ambient header".into(),
            })
        }
    };
    let complex = Complex::close(Arc::new(poset), cells)?;
    let regime = regime.unwrap_or(if !scales.is_empty() {
        Regime::MarkedScaled
    } else if !marks.is_empty() {
        Regime::Marked
    } else {
        Regime::Plain
    });
    DecoratedComplex::new(complex, marks, scales, regime)
}

fn ambient_header(p: &Poset) -> String {
    let n = p.len();
    if n >= 1 && *p == Poset::linear(n as u32 - 1) {
        return format!("#ambient linear {}\n", n - 1);
    }
    if n.is_power_of_two() && n <= 1 << 15 {
        let bits = n.trailing_zeros();
        if *p == Poset::boolean(bits) {
            return format!("#ambient boolean {bits}\n");
        }
    }
    if n >= 2 && n.is_multiple_of(2) && *p == Poset::linear(n as u32 / 2 - 1).times_interval() {
        return format!("#ambient prism {}\n", n / 2 - 1);
    }
    let ids: Vec<String> = p.elements().iter().map(|e| e.to_string()).collect();
    let mut s = format!("#ambient elements {}\n#order\n", ids.join(","));
    for (a, b) in p.covers() {
        let _ = writeln!(s, "{a},{b}");
    }
    s
}

fn chain_line(c: &Chain) -> String {
    let ids: Vec<String> = c.vertices().iter().map(|v| v.to_string()).collect();
    ids.join(",")
}

/// Writes every cell, then the decorations, in sorted order.
pub fn write(x: &DecoratedComplex) -> String {
    let mut s = ambient_header(x.ambient());
    let _ = writeln!(s, "#regime {}", x.regime());
    s.push_str("#cells\n");
    for c in x.complex().iter() {
        let _ = writeln!(s, "{}", chain_line(c));
    }
    if !x.marked().is_empty() {
        s.push_str("#mark\n");
        for c in x.marked() {
            let _ = writeln!(s, "{}", chain_line(c));
        }
    }
    if !x.scaled().is_empty() {
        s.push_str("#scale\n");
        for c in x.scaled() {
            let _ = writeln!(s, "{}", chain_line(c));
        }
    }
    s
}

/// Writes a plain complex (no decorations) in the same format.
pub fn write_complex(c: &Complex) -> String {
    write(&DecoratedComplex::flat(c.clone(), Regime::Plain))
}

/// Cells sorted by dimension then lexicographically; handy for human-facing listings.
pub fn cells_by_dim(c: &Complex) -> Vec<Chain> {
    let mut v: Vec<Chain> = c.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::standard_simplex;

    #[test]
    fn parses_horn_with_decorations() {
        let x = parse("#ambient linear 2\n#cells\n0,1\n1,2\n#mark\n0,1\n").unwrap();
        assert_eq!(x.complex().len(), 5);
        assert_eq!(x.regime(), Regime::Marked);
        assert!(x.is_marked(0, 1));
    }

    #[test]
    fn round_trip_preserves_everything() {
        let c = Complex::nerve(Arc::new(Poset::boolean(2)));
        let x = DecoratedComplex::new(
            c,
            [Chain::new(vec![0, 1])],
            [Chain::new(vec![0, 1, 3])],
            Regime::MarkedScaled,
        )
        .unwrap();
        assert_eq!(parse(&write(&x)).unwrap(), x);
        let odd = Complex::nerve(Arc::new(Poset::linear_on(vec![7, 3, 5])));
        let back = parse(&write_complex(&odd)).unwrap();
        assert_eq!(back.complex(), &odd);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("#cells\n0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("#ambient linear 1\n0,1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse("#ambient linear 1\n#cells\n1,0\n").is_err());
        assert!(parse("#ambient linear 2\n#cells\n0,1\n#scale\n0,1,2\n").is_err());
        assert!(parse("#ambient weird 2\n").is_err());
    }

    #[test]
    fn listing_order() {
        let v = cells_by_dim(&standard_simplex(1));
        assert_eq!(v[2], Chain::new(vec![0, 1]));
    }
}
