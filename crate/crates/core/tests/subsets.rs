use std::collections::BTreeSet;

use anodyne::complex::standard_simplex;
use anodyne::subset::{
    add_face, basal_sets, equivalent, is_inner_dull, is_right_dull, mask_of, minimize, pivot_hypotheses,
    restrict_family, right_pivot_hypotheses, s_complex,
};
use anodyne::{Chain, DecoratedComplex, Regime, SubsetFamily};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `S^A` as vertex sets, straight from the definition: `X ⊆ [n] ∖ S` for some member `S`.
fn cells_oracle(n: u32, members: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    for s in members {
        let face: Vec<u32> = (0..=n).filter(|v| !s.contains(v)).collect();
        for m in 1u32..1 << face.len() {
            out.insert((0..face.len()).filter(|i| m >> i & 1 == 1).map(|i| face[i]).collect());
        }
    }
    out
}

fn cells_of(a: &SubsetFamily) -> BTreeSet<Vec<u32>> {
    s_complex(a).iter().map(|c| c.vertices().to_vec()).collect()
}

fn lists(a: &SubsetFamily) -> Vec<Vec<u32>> {
    a.members()
        .iter()
        .map(|&m| (0..64).filter(|b| m >> b & 1 == 1).collect())
        .collect()
}

fn fam(n: u32, members: &[&[u32]]) -> SubsetFamily {
    SubsetFamily::from_lists(n, members).unwrap()
}

fn simplex_cells(t: &[u32]) -> BTreeSet<Vec<u32>> {
    cells_oracle(*t.iter().max().unwrap_or(&0), &[vec![]])
        .into_iter()
        .filter(|c| c.iter().all(|v| t.contains(v)))
        .collect()
}

fn check_identities(a: &SubsetFamily, t: u64) -> Result<(), String> {
    let n = a.n();
    let full = cells_of(a);
    if full != cells_oracle(n, &lists(a)) {
        return Err(format!("S^A differs from the definition for {a}"));
    }
    if cells_of(&minimize(a)) != full || !equivalent(a, &minimize(a)).unwrap() {
        return Err(format!("minimize changes S^A for {a}"));
    }
    let t_list: Vec<u32> = (0..=n).filter(|b| t >> b & 1 == 1).collect();
    let delta_t: BTreeSet<Vec<u32>> = (1u64..1 << (n + 1))
        .filter(|m| m & !t == 0)
        .map(|m| (0..=n).filter(|b| m >> b & 1 == 1).collect())
        .collect();
    let restricted = cells_of(&restrict_family(a, t).unwrap());
    let expected: BTreeSet<Vec<u32>> = full.intersection(&delta_t).cloned().collect();
    if restricted != expected {
        return Err(format!("restriction to {t_list:?} fails for {a}"));
    }
    let added = cells_of(&add_face(a, t).unwrap());
    let expected: BTreeSet<Vec<u32>> = full.union(&delta_t).cloned().collect();
    if added != expected {
        return Err(format!("adding the face {t_list:?} fails for {a}"));
    }
    let members = lists(a);
    let disjoint = members
        .iter()
        .enumerate()
        .all(|(i, s)| members[i + 1..].iter().all(|u| s.iter().all(|x| !u.contains(x))));
    if disjoint {
        let bound = members.len() as i64 - 1;
        for m in 1u64..1 << (n + 1) {
            let cell: Vec<u32> = (0..=n).filter(|b| m >> b & 1 == 1).collect();
            if (cell.len() as i64 - 1) < bound && !full.contains(&cell) {
                return Err(format!("{cell:?} missing from S^A for disjoint {a}"));
            }
        }
    }
    Ok(())
}

#[test]
fn worked_example() {
    let a = fam(2, &[&[2], &[1, 2]]);
    assert_eq!(minimize(&a), fam(2, &[&[2]]));
    assert!(equivalent(&a, &fam(2, &[&[2]])).unwrap());
    assert_eq!(cells_of(&a), simplex_cells(&[0, 1]));
    assert!(s_complex(&fam(3, &[])).is_empty());
    assert_eq!(s_complex(&fam(3, &[&[]])), standard_simplex(3));
    assert!(minimize(&fam(3, &[])).is_empty());
    assert!(equivalent(&a, &fam(3, &[])).is_err());
}

#[test]
fn restriction_and_face_trivia() {
    let a = fam(4, &[&[1, 3], &[0]]);
    assert_eq!(restrict_family(&a, 0b11111).unwrap(), a);
    assert_eq!(add_face(&fam(3, &[]), 0b1111).unwrap(), fam(3, &[&[]]));
}

#[test]
fn exhaustive_small_families() {
    // Every family of at most five nonempty-or-empty subsets of [n], n ≤ 3, plus every
    // family of at most three subsets of [4].
    for n in 0..=4u32 {
        let subsets: Vec<u64> = (0..1u64 << (n + 1)).collect();
        let max_size = if n <= 2 {
            5
        } else if n == 3 {
            3
        } else {
            2
        };
        let mut stack: Vec<(usize, Vec<u64>)> = vec![(0, vec![])];
        while let Some((start, chosen)) = stack.pop() {
            let a = SubsetFamily::new(n, chosen.iter().copied()).unwrap();
            for t in [0u64, 0b1, (1u64 << (n + 1)) - 1, 0b101 & ((1u64 << (n + 1)) - 1)] {
                check_identities(&a, t).unwrap();
            }
            if chosen.len() < max_size {
                for (i, &s) in subsets.iter().enumerate().skip(start) {
                    let mut next = chosen.clone();
                    next.push(s);
                    stack.push((i + 1, next));
                }
            }
        }
    }
}

#[test]
fn seeded_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 5..=8u32 {
        for _ in 0..250 {
            let k = rng.gen_range(0..6);
            let members: Vec<u64> = (0..k).map(|_| rng.gen_range(0..1u64 << (n + 1))).collect();
            let a = SubsetFamily::new(n, members).unwrap();
            let t = rng.gen_range(0..1u64 << (n + 1));
            check_identities(&a, t).unwrap();
        }
    }
}

#[test]
fn basal_set_examples() {
    let a = fam(4, &[&[1], &[3]]);
    let b = basal_sets(&a).unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].elements(), vec![1, 3]);
    assert!(basal_sets(&fam(3, &[&[1, 2], &[2]])).is_err());
    let c = fam(6, &[&[0, 1], &[2, 3, 4], &[6]]);
    let all = basal_sets(&c).unwrap();
    assert_eq!(all.len(), 6);
    for x in &all {
        for &m in c.members() {
            assert_eq!((x.set & m).count_ones(), 1);
        }
    }
}

#[test]
fn dullness_examples() {
    assert_eq!(is_inner_dull(&fam(2, &[&[0], &[2]])), Some(vec![1]));
    assert_eq!(is_inner_dull(&fam(2, &[&[0], &[2], &[]])), None);
    assert_eq!(is_inner_dull(&fam(3, &[&[0], &[1, 2]])), None);
    assert!(is_right_dull(&fam(3, &[&[0], &[1, 2]])));
    assert!(!is_right_dull(&fam(3, &[&[0], &[3]])));
    assert!(!is_right_dull(&fam(3, &[])));
}

/// The n = 2 instance of the first pivot step: A' = {{2}, {1̄}} inside {2, 2̄, 1̄, 0̄}.
#[test]
fn first_pivot_instance() {
    let r2 = anodyne::twisted::r(2);
    let sigma = Chain::new(vec![2, 3, 4, 5]);
    let local = anodyne::certify::local_view(&r2, &sigma);
    let a = fam(3, &[&[0], &[2]]);
    assert_eq!(is_inner_dull(&a), Some(vec![1]));
    assert_eq!(basal_sets(&a).unwrap()[0].elements(), vec![0, 2]);
    // The only marked edge avoiding the pivot is 1̄ → 0̄, which lies in S^{A'}.
    let faces = a.face_set();
    let avoiding: Vec<&Chain> = local.marked().iter().filter(|e| !e.contains(1)).collect();
    assert_eq!(avoiding, vec![&Chain::new(vec![2, 3])]);
    assert!(faces.contains(mask_of([2, 3])));
    // {2 < 1̄ < 0̄} is the only scaled triangle avoiding the pivot outside S^{A'}.
    let outside: Vec<&Chain> = local
        .scaled()
        .iter()
        .filter(|t| !t.contains(1) && !faces.contains(t.mask()))
        .collect();
    assert_eq!(outside, vec![&Chain::new(vec![0, 2, 3])]);
    assert!(local.is_fully_scaled(&[0, 1, 2, 3]));
    assert!(pivot_hypotheses(&a, 1, &local).unwrap());
    assert!(pivot_oracle(3, &lists(&a), 1, &local));
}

/// The three conditions of the pivot trick, written out over vertex lists.
fn pivot_oracle(n: u32, members: &[Vec<u32>], i: u32, x: &DecoratedComplex) -> bool {
    let in_s = |v: &[u32]| members.iter().any(|s| v.iter().all(|e| !s.contains(e)));
    let scaled = |a: u32, b: u32, c: u32| a == b || b == c || x.scaled().contains(&Chain::new(vec![a, b, c]));
    for e in x.marked() {
        let v = e.vertices();
        if !v.contains(&i) && !in_s(v) {
            return false;
        }
    }
    for t in x.scaled() {
        let v = t.vertices();
        if in_s(v) || v.contains(&i) {
            continue;
        }
        if !(v[0] < i && i < v[2]) {
            return false;
        }
        let mut w = v.to_vec();
        w.push(i);
        w.sort();
        for drop in 0..4 {
            let tri: Vec<u32> = (0..4).filter(|&k| k != drop).map(|k| w[k]).collect();
            if !scaled(tri[0], tri[1], tri[2]) {
                return false;
            }
        }
    }
    // Transversals by brute force over all subsets of [n].
    for m in 0u64..1 << (n + 1) {
        let xset: Vec<u32> = (0..=n).filter(|b| m >> b & 1 == 1).collect();
        let transversal = members
            .iter()
            .all(|s| s.iter().filter(|e| xset.contains(e)).count() == 1)
            && xset.iter().all(|e| members.iter().any(|s| s.contains(e)));
        if !transversal {
            continue;
        }
        let l = *xset.iter().filter(|&&e| e < i).max().unwrap();
        let u = *xset.iter().filter(|&&e| e > i).min().unwrap();
        for r in l..i {
            for s in i + 1..=u {
                if !scaled(r, i, s) {
                    return false;
                }
            }
        }
    }
    true
}

fn right_pivot_oracle(n: u32, members: &[Vec<u32>], x: &DecoratedComplex) -> bool {
    let in_s = |v: &[u32]| members.iter().any(|s| v.iter().all(|e| !s.contains(e)));
    let scaled = |a: u32, b: u32, c: u32| a == b || b == c || x.scaled().contains(&Chain::new(vec![a, b, c]));
    let marked = |a: u32, b: u32| a == b || x.marked().contains(&Chain::new(vec![a, b]));
    for e in x.marked() {
        if !e.contains(n) && !in_s(e.vertices()) {
            return false;
        }
    }
    for t in x.scaled() {
        let v = t.vertices();
        if v.contains(&n) || in_s(v) {
            continue;
        }
        let all = scaled(v[0], v[1], n) && scaled(v[0], v[2], n) && scaled(v[1], v[2], n);
        if !all || !marked(v[2], n) {
            return false;
        }
    }
    for m in 0u64..1 << (n + 1) {
        let z: Vec<u32> = (0..=n).filter(|b| m >> b & 1 == 1).collect();
        let transversal = members.iter().all(|s| s.iter().filter(|e| z.contains(e)).count() == 1)
            && z.iter().all(|e| members.iter().any(|s| s.contains(e)));
        if !transversal {
            continue;
        }
        let (lo, hi) = (z[0], *z.last().unwrap());
        for r in 0..=lo {
            for s in hi..n {
                if !scaled(r, s, n) || !marked(s, n) {
                    return false;
                }
            }
        }
    }
    true
}

fn random_decoration(rng: &mut ChaCha8Rng, n: u32) -> DecoratedComplex {
    let full = standard_simplex(n);
    let edges: Vec<Chain> = full.cells_of_dim(1).filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let tris: Vec<Chain> = full.cells_of_dim(2).filter(|_| rng.gen_bool(0.7)).cloned().collect();
    DecoratedComplex::new(full, edges, tris, Regime::MarkedScaled).unwrap()
}

/// A disjoint family avoiding `avoid`, made of random pieces of [n].
fn random_disjoint(rng: &mut ChaCha8Rng, n: u32, avoid: u32) -> SubsetFamily {
    let mut owner = vec![None; n as usize + 1];
    for v in 0..=n {
        if v != avoid && rng.gen_bool(0.7) {
            owner[v as usize] = Some(rng.gen_range(0..3));
        }
    }
    let members = (0..3)
        .map(|k| mask_of((0..=n).filter(|&v| owner[v as usize] == Some(k))))
        .filter(|&m| m != 0);
    SubsetFamily::new(n, members).unwrap()
}

#[test]
fn pivot_hypotheses_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = (0, 0);
    for _ in 0..3000 {
        let n = rng.gen_range(2..=5);
        let i = rng.gen_range(1..n);
        let a = random_disjoint(&mut rng, n, i);
        let x = random_decoration(&mut rng, n);
        if is_inner_dull(&a).is_some_and(|p| p.contains(&i)) {
            assert_eq!(
                pivot_hypotheses(&a, i, &x).unwrap(),
                pivot_oracle(n, &lists(&a), i, &x),
                "{a} pivot {i}"
            );
            checked.0 += 1;
        } else {
            assert!(pivot_hypotheses(&a, i, &x).is_err());
        }
        let b = random_disjoint(&mut rng, n, n);
        if is_right_dull(&b) {
            assert_eq!(
                right_pivot_hypotheses(&b, &x).unwrap(),
                right_pivot_oracle(n, &lists(&b), &x),
                "{b}"
            );
            checked.1 += 1;
        }
    }
    assert!(checked.0 > 100 && checked.1 > 100, "{checked:?}");
}

#[test]
fn minimal_pivot_counterexample() {
    // A = {{0}, {3}} on [3], pivot 1: the triangle {0, 2, 3} is outside S^A and avoids the
    // pivot; with only it scaled, {0, 1, 2, 3} is not fully scaled.
    let a = fam(3, &[&[0], &[3]]);
    let x = DecoratedComplex::new(
        standard_simplex(3),
        [],
        [Chain::new(vec![0, 2, 3])],
        Regime::MarkedScaled,
    )
    .unwrap();
    assert!(!pivot_hypotheses(&a, 1, &x).unwrap());
    assert!(!pivot_oracle(3, &lists(&a), 1, &x));
}

proptest! {
    #[test]
    fn minimize_keeps_the_complex(n in 0u32..7, members in prop::collection::vec(0u64..128, 0..6)) {
        let a = SubsetFamily::new(n, members.into_iter().map(|m| m & ((1 << (n + 1)) - 1))).unwrap();
        prop_assert!(equivalent(&a, &minimize(&a)).unwrap());
        prop_assert!(minimize(&a).members().is_subset(a.members()));
    }

    #[test]
    fn basal_count_is_product(sizes in prop::collection::vec(1usize..4, 0..4)) {
        let mut next = 0u32;
        let members: Vec<u64> = sizes.iter().map(|&s| {
            let m = mask_of(next..next + s as u32);
            next += s as u32;
            m
        }).collect();
        let n = next.max(1);
        let a = SubsetFamily::new(n, members).unwrap();
        let expected: usize = a.members().iter().map(|m| m.count_ones() as usize).product();
        prop_assert_eq!(basal_sets(&a).unwrap().len(), expected);
    }
}
