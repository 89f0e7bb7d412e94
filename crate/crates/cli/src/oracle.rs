//! Brute-force cell-set checks for the subset calculus.

use std::collections::BTreeSet;

use anodyne::subset::{add_face, minimize, restrict_family, s_complex};
use anodyne::SubsetFamily;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Faces of `Δ^n` spanned by the complement of some member.
fn cells_by_definition(n: u32, members: &[u64]) -> BTreeSet<u64> {
    let full = (1u64 << (n + 1)) - 1;
    (1..=full)
        .filter(|&x| members.iter().any(|&s| x & !(full & !s) == 0))
        .collect()
}

fn cells_of(a: &SubsetFamily) -> BTreeSet<u64> {
    s_complex(a).iter().map(|c| c.mask()).collect()
}

fn faces_of(t: u64) -> impl Iterator<Item = u64> {
    (1..=t).filter(move |x| x & !t == 0)
}

/// Checks the minimize, restrict, add-face and disjointness identities for `A` and `T`.
pub fn check_family(n: u32, members: &[u64], t: u64) -> Result<(), String> {
    let a = SubsetFamily::new(n, members.iter().copied()).map_err(|e| e.to_string())?;
    let expected = cells_by_definition(n, members);
    let err = |what: &str| Err(format!("{what} fails for A = {a}, T = {t:#b}"));
    if cells_of(&a) != expected {
        return err("S^A");
    }
    let m = minimize(&a);
    let antichain = m
        .members()
        .iter()
        .all(|&s| m.members().iter().all(|&u| s == u || s & u != s));
    if cells_of(&m) != expected || !antichain || !m.members().is_subset(a.members()) {
        return err("minimize");
    }
    let restricted = restrict_family(&a, t).map_err(|e| e.to_string())?;
    let within: BTreeSet<u64> = expected.iter().copied().filter(|x| x & !t == 0).collect();
    if cells_of(&restricted) != within {
        return err("restriction");
    }
    let added = add_face(&a, t).map_err(|e| e.to_string())?;
    let union: BTreeSet<u64> = expected.iter().copied().chain(faces_of(t)).collect();
    if cells_of(&added) != union {
        return err("adding a face");
    }
    let distinct: BTreeSet<u64> = members.iter().copied().collect();
    let disjoint = distinct.iter().all(|&s| distinct.iter().all(|&u| s == u || s & u == 0));
    if disjoint {
        let full = (1u64 << (n + 1)) - 1;
        let missing = (1..=full).find(|&x| (x.count_ones() as usize) < distinct.len() && !expected.contains(&x));
        if missing.is_some() {
            return err("the disjointness lemma");
        }
    }
    Ok(())
}

/// Random families of up to five members over `[n]`, each with a random face `T`.
pub fn fuzz_subsets(n: u32, trials: usize, seed: u64) -> Result<usize, String> {
    if n > 12 {
        return Err(format!("n = {n} is too large for brute force"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = 1u64 << (n + 1);
    for _ in 0..trials {
        let k = rng.gen_range(0..=5);
        let members: Vec<u64> = (0..k).map(|_| rng.gen_range(0..full)).collect();
        let t = rng.gen_range(0..full);
        check_family(n, &members, t)?;
    }
    Ok(trials)
}

/// Every family of at most `max_size` distinct subsets of `[n]`. Each family is checked
/// against one face `T`, cycling through all faces as the enumeration proceeds.
pub fn exhaustive_subsets(n: u32, max_size: usize) -> Result<usize, String> {
    let subsets: Vec<u64> = (0..1u64 << (n + 1)).collect();
    let mut count = 0usize;
    let mut stack: Vec<(usize, Vec<u64>)> = vec![(0, Vec::new())];
    while let Some((next, chosen)) = stack.pop() {
        let t = subsets[count % subsets.len()];
        check_family(n, &chosen, t)?;
        count += 1;
        if chosen.len() < max_size {
            for (i, &s) in subsets.iter().enumerate().skip(next) {
                let mut more = chosen.clone();
                more.push(s);
                stack.push((i + 1, more));
            }
        }
    }
    Ok(count)
}
