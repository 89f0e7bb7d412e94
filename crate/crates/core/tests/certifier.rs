use std::collections::BTreeSet;
use std::sync::Arc;

use anodyne::certify::{apply_step, recognize, replay, search, SearchOptions};
use anodyne::complex::{boundary, generalized_horn, horn, standard_simplex};
use anodyne::{Certificate, Chain, Complex, DecoratedComplex, FillStep, Poset, Regime, RuleId, Trust};
use proptest::prelude::*;

fn flat(c: Complex, r: Regime) -> DecoratedComplex {
    DecoratedComplex::flat(c, r)
}

fn faces(n: u32, mask: u64) -> BTreeSet<u32> {
    (0..=n).filter(|b| mask >> b & 1 == 1).collect()
}

#[test]
fn generator_examples() {
    let scaled_target = DecoratedComplex::new(
        standard_simplex(2),
        [],
        [Chain::new(vec![0, 1, 2])],
        Regime::MarkedScaled,
    )
    .unwrap();
    let step = FillStep::new(RuleId::InnerHorn { n: 2, i: 1 }, Chain::new(vec![0, 1, 2]));
    assert!(recognize(
        &flat(horn(2, 1).unwrap(), Regime::MarkedScaled),
        &step,
        &scaled_target,
        Regime::MarkedScaled
    ));

    let marked_target =
        DecoratedComplex::new(standard_simplex(1), [Chain::new(vec![0, 1])], [], Regime::MarkedScaled).unwrap();
    let a2 = FillStep::new(RuleId::OuterMsHorn { n: 1 }, Chain::new(vec![0, 1]));
    assert!(recognize(
        &flat(horn(1, 1).unwrap(), Regime::MarkedScaled),
        &a2,
        &marked_target,
        Regime::MarkedScaled
    ));
    // The outer horn on the wrong side does not match.
    assert!(!recognize(
        &flat(horn(1, 0).unwrap(), Regime::MarkedScaled),
        &a2,
        &marked_target,
        Regime::MarkedScaled
    ));

    assert!(RuleId::inner_horn(3, 0).is_err());
    assert_eq!(RuleId::InnerHorn { n: 3, i: 1 }.trust(), Trust::Primitive);
    assert_eq!(RuleId::SharpRight { steps: vec![] }.trust(), Trust::CitedLemma);
}

#[test]
fn rules_respect_regimes() {
    let target = flat(standard_simplex(2), Regime::Plain);
    let right = FillStep::new(RuleId::RightHorn { n: 2 }, Chain::new(vec![0, 1, 2]));
    assert!(recognize(
        &flat(horn(2, 2).unwrap(), Regime::Plain),
        &right,
        &target,
        Regime::Plain
    ));
    let ms_target = flat(standard_simplex(2), Regime::MarkedScaled);
    assert!(!recognize(
        &flat(horn(2, 2).unwrap(), Regime::MarkedScaled),
        &right,
        &ms_target,
        Regime::MarkedScaled
    ));
}

#[test]
fn the_first_twisted_step() {
    // The n = 1 base case: attach {1, 1̄, 0̄} along an outer horn with {1̄, 0̄} marked.
    let r1 = anodyne::twisted::r(1);
    let mut start = anodyne::twisted::j(1);
    let sharp = FillStep::new(
        RuleId::SharpRight {
            steps: vec![FillStep::new(RuleId::RightHorn { n: 1 }, Chain::new(vec![0, 1]))],
        },
        Chain::new(vec![2, 3]),
    );
    start = apply_step(&start, &sharp, &r1, Regime::MarkedScaled).unwrap();
    assert!(start.is_marked(2, 3));
    let outer = FillStep::new(RuleId::OuterMsHorn { n: 2 }, Chain::new(vec![1, 2, 3]));
    let next = apply_step(&start, &outer, &r1, Regime::MarkedScaled).unwrap();
    assert!(next.is_scaled(1, 2, 3));
}

#[test]
fn search_examples() {
    let target = flat(standard_simplex(2), Regime::Plain);
    let one = search(
        &flat(horn(2, 1).unwrap(), Regime::Plain),
        &target,
        Regime::Plain,
        SearchOptions::default(),
    )
    .unwrap()
    .unwrap();
    assert_eq!(one.steps.len(), 1);
    let inner_only = SearchOptions {
        inner_only: true,
        ..Default::default()
    };
    assert!(
        search(&flat(boundary(2), Regime::Plain), &target, Regime::Plain, inner_only)
            .unwrap()
            .is_none()
    );
    let start = flat(generalized_horn(4, &faces(4, 0b10001)).unwrap(), Regime::Plain);
    let cert = search(
        &start,
        &flat(standard_simplex(4), Regime::Plain),
        Regime::Plain,
        inner_only,
    )
    .unwrap()
    .unwrap();
    assert!(replay(&cert).ok);
    let tiny = SearchOptions {
        budget: 1,
        inner_only: true,
    };
    assert!(
        search(&start, &flat(standard_simplex(4), Regime::Plain), Regime::Plain, tiny)
            .unwrap()
            .is_none()
    );
}

#[test]
fn searched_horn_fillings_for_every_face_set() {
    let inner_only = SearchOptions {
        inner_only: true,
        ..Default::default()
    };
    for n in 2..=6u32 {
        let target = flat(standard_simplex(n), Regime::Plain);
        for m in 0u64..1 << (n + 1) {
            let t = faces(n, m);
            if t.contains(&0) && t.contains(&n) && t.len() <= n as usize {
                let start = flat(generalized_horn(n, &t).unwrap(), Regime::Plain);
                let cert = search(&start, &target, Regime::Plain, inner_only)
                    .unwrap()
                    .expect("fillable");
                let r = replay(&cert);
                assert!(r.ok && r.inner_only, "n={n} T={t:?}: {r}");
            }
        }
    }
    for n in 1..=6u32 {
        let edge = Chain::new(vec![0, 1]);
        let target = DecoratedComplex::new(standard_simplex(n), [edge.clone()], [], Regime::Marked).unwrap();
        for m in 0u64..1 << (n + 1) {
            let t = faces(n, m);
            if t.contains(&1) && t.contains(&n) && !t.contains(&0) {
                let h = generalized_horn(n, &t).unwrap();
                let marks: Vec<Chain> = [edge.clone()].into_iter().filter(|e| h.contains(e)).collect();
                let start = DecoratedComplex::new(h, marks, [], Regime::Marked).unwrap();
                let cert = search(&start, &target, Regime::Marked, SearchOptions::default())
                    .unwrap()
                    .expect("fillable");
                assert!(replay(&cert).ok, "n={n} T={t:?}");
            }
        }
    }
}

#[test]
fn mutated_certificates_report_the_right_step() {
    let t = faces(4, 0b10001);
    let start = flat(generalized_horn(4, &t).unwrap(), Regime::Plain);
    let target = flat(standard_simplex(4), Regime::Plain);
    let cert = search(&start, &target, Regime::Plain, SearchOptions::default())
        .unwrap()
        .unwrap();
    assert!(cert.steps.len() >= 2);
    let mut swapped = cert.clone();
    swapped.steps.swap(0, 1);
    assert_eq!(replay(&swapped).failure.unwrap().index, 0);
    let mut truncated = cert.clone();
    truncated.steps.pop();
    assert_eq!(replay(&truncated).failure.unwrap().index, truncated.steps.len());
    let mut bad_trust = cert.clone();
    bad_trust.steps[0].trust = Trust::CitedLemma;
    assert_eq!(replay(&bad_trust).failure.unwrap().index, 0);
}

#[test]
fn json_format_is_stable() {
    let cert = anodyne::twisted::v_certificate(1).unwrap();
    let json = cert.to_json();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["regime", "ambient", "start", "target", "steps"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    assert_eq!(value["steps"][0]["rule"], "sharp-right");
    assert_eq!(value["steps"][1]["params"]["n"], 2);
    assert_eq!(Certificate::from_json(&json).unwrap(), cert);
    assert!(Certificate::from_json("{").is_err());
}

fn relabel(x: &DecoratedComplex, f: &dyn Fn(u32) -> u32, p: &Arc<Poset>) -> DecoratedComplex {
    let m = |c: &Chain| Chain::new(c.vertices().iter().map(|&v| f(v)).collect());
    let complex = Complex::from_cells(p.clone(), x.complex().iter().map(m)).unwrap();
    DecoratedComplex::new(complex, x.marked().iter().map(m), x.scaled().iter().map(m), x.regime()).unwrap()
}

fn arb_pair(n: u32) -> impl Strategy<Value = (Complex, Complex)> {
    (
        prop::collection::vec(1u64..(1 << (n + 1)), 1..5),
        prop::collection::vec(1u64..(1 << (n + 1)), 0..3),
    )
        .prop_map(move |(small, extra)| {
            let p = Arc::new(Poset::linear(n));
            let a = Complex::close(p.clone(), small.iter().map(|&m| Chain::from_mask(m))).unwrap();
            let b = Complex::close(p, small.iter().chain(extra.iter()).map(|&m| Chain::from_mask(m))).unwrap();
            (a, b)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn found_certificates_replay((a, b) in (2u32..6).prop_flat_map(arb_pair)) {
        let opts = SearchOptions { budget: 2_000, inner_only: false };
        if let Some(cert) = search(&flat(a.clone(), Regime::Plain), &flat(b.clone(), Regime::Plain), Regime::Plain, opts).unwrap() {
            let r = replay(&cert);
            prop_assert!(r.ok, "{}", r);
            // Each primitive step strictly grows the complex.
            let mut state = cert.start.clone();
            for s in &cert.steps {
                let next = apply_step(&state, s, &cert.target, Regime::Plain).unwrap();
                prop_assert!(next.complex().len() > state.complex().len());
                state = next;
            }
        }
    }

    #[test]
    fn replay_ignores_element_names(n in 2u32..5, shift in 1u32..9) {
        let t: BTreeSet<u32> = [0, n].into_iter().collect();
        let start = flat(generalized_horn(n, &t).unwrap(), Regime::Plain);
        let target = flat(standard_simplex(n), Regime::Plain);
        let cert = search(&start, &target, Regime::Plain, SearchOptions::default()).unwrap().unwrap();
        let f = move |v: u32| shift + 2 * v;
        let p = Arc::new(Poset::linear(n).relabel(f).unwrap());
        let moved = Certificate::new(
            Regime::Plain,
            relabel(&cert.start, &f, &p),
            relabel(&cert.target, &f, &p),
            cert.steps.iter().map(|s| s.relabel(f)).collect(),
        ).unwrap();
        prop_assert_eq!(replay(&moved).ok, replay(&cert).ok);
        let mut broken = moved.clone();
        broken.steps.reverse();
        prop_assert_eq!(replay(&broken).failure.map(|f| f.index), {
            let mut b = cert.clone();
            b.steps.reverse();
            replay(&b).failure.map(|f| f.index)
        });
    }
}
