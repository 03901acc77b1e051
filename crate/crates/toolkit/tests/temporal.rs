use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use star_toolkit::temporal::*;

fn iv(a: f64, b: f64) -> Interval<f64> {
    Interval::new(a, b).unwrap()
}

/// Endpoints drawn from a small lattice so equalities occur often.
fn lattice_interval() -> impl Strategy<Value = Interval<f64>> {
    (0i32..8, 0i32..8).prop_map(|(a, b)| {
        let (s, e) = if a <= b { (a, b) } else { (b, a) };
        iv(s as f64 * 0.5, e as f64 * 0.5)
    })
}

#[test]
fn exactly_one_relation_over_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100_000 {
        let mut draw = || {
            let a = rng.gen_range(0..10) as f64;
            let b = rng.gen_range(0..10) as f64;
            iv(a.min(b), a.max(b))
        };
        let (a, b) = (draw(), draw());
        let holding: Vec<_> = AllenRelation::ALL.into_iter().filter(|r| r.holds(&a, &b)).collect();
        assert_eq!(holding.len(), 1, "{a:?} {b:?} {holding:?}");
        assert_eq!(classify_allen(&a, &b), holding[0]);
    }
}

proptest! {
    #[test]
    fn converse_pairs(a in lattice_interval(), b in lattice_interval()) {
        for r in AllenRelation::ALL {
            prop_assert_eq!(r.holds(&a, &b), r.converse().holds(&b, &a));
        }
        prop_assert_eq!(classify_allen(&a, &b).converse(), classify_allen(&b, &a));
    }

    #[test]
    fn canonical_form_is_idempotent(set in prop::collection::vec(lattice_interval(), 0..8)) {
        let c = canonicalize(&set);
        prop_assert_eq!(canonicalize(&c), c.clone());
        for w in c.windows(2) {
            prop_assert!(w[0].end() < w[1].start());
        }
    }

    #[test]
    fn set_ops_match_point_sampling(
        a in prop::collection::vec(lattice_interval(), 0..5),
        b in prop::collection::vec(lattice_interval(), 0..5),
    ) {
        // membership oracle on a 0.01 grid, skipping lattice points where
        // closure can legitimately differ from the raw set operation
        let member = |set: &[Interval<f64>], x: f64| set.iter().any(|i| i.contains_value(x));
        for op in [SetOp::Union, SetOp::Intersection, SetOp::Difference] {
            let out = interval_set(op, &a, &b);
            for k in 0..=400 {
                let x = k as f64 * 0.01;
                if k % 50 == 0 {
                    continue;
                }
                let expect = match op {
                    SetOp::Union => member(&a, x) || member(&b, x),
                    SetOp::Intersection => member(&a, x) && member(&b, x),
                    SetOp::Difference => member(&a, x) && !member(&b, x),
                };
                prop_assert_eq!(member(&out, x), expect, "{:?} at {}", op, x);
            }
        }
    }

    #[test]
    fn constant_series_forecast(c in -100.0f64..100.0, len in 4usize..40, h in 0usize..12) {
        let s = Series::new(vec![c; len]);
        let f = forecast(&s, h).unwrap();
        prop_assert_eq!(f.len(), h);
        for v in f {
            prop_assert!((v - c).abs() <= 1e-9 * (1.0 + c.abs()));
        }
    }
}

#[test]
fn case_b_during_is_false_and_classified_overlaps() {
    let a = iv(1.577, 10.761);
    let b = iv(6.5003, 11.8556);
    assert!(!allen_relation(AllenRelation::During, &a, &b));
    assert!(!allen_relation_by_name("allen_during", &a, &b).unwrap());
    assert_eq!(classify_allen(&a, &b), AllenRelation::Overlaps);
}

#[test]
fn shared_start_is_not_overlap() {
    let a = iv(1.0, 3.0);
    let b = iv(1.0, 2.5);
    assert!(!allen_relation(AllenRelation::Overlaps, &a, &b));
    assert_eq!(classify_allen(&a, &b), AllenRelation::StartedBy);
    assert!(allen_relation(AllenRelation::Equals, &a, &a));
    assert_eq!(classify_allen(&iv(1.0, 2.0), &iv(3.0, 4.0)), AllenRelation::Before);
}

#[test]
fn point_intervals() {
    let p = iv(2.0, 2.0);
    assert_eq!(classify_allen(&p, &iv(2.0, 5.0)), AllenRelation::Starts);
    assert_eq!(classify_allen(&p, &iv(0.0, 2.0)), AllenRelation::Finishes);
    assert_eq!(classify_allen(&p, &iv(0.0, 5.0)), AllenRelation::During);
    assert_eq!(classify_allen(&p, &p), AllenRelation::Equals);
    assert_eq!(classify_allen(&p, &iv(3.0, 3.0)), AllenRelation::Before);
}

#[test]
fn unknown_relation_name() {
    assert!(allen_relation_by_name("beside", &iv(0.0, 1.0), &iv(0.0, 1.0)).is_err());
}

#[test]
fn period_inference_and_recursive_forecast() {
    // 12-point period-4 cycle, hand computed
    let vals: Vec<f64> = [10.0, 20.0, 30.0, 40.0].repeat(3);
    let s = Series::new(vals);
    let f = forecast(&s, 4).unwrap();
    let mut ext = [10.0, 20.0, 30.0, 40.0].repeat(3);
    for _ in 0..4 {
        let n = ext.len();
        let next = 0.5 * (ext[n - 4] + ext[n - 4..].iter().sum::<f64>() / 4.0);
        ext.push(next);
    }
    assert_eq!(f, ext[12..].to_vec());
    assert_eq!(f[0], 0.5 * (10.0 + 25.0));
}

#[test]
fn interval_serde_round_trip() {
    let i = iv(1.5, 2.5);
    let text = serde_json::to_string(&i).unwrap();
    assert_eq!(text, "[1.5,2.5]");
    assert_eq!(serde_json::from_str::<Interval<f64>>(&text).unwrap(), i);
    assert!(serde_json::from_str::<Interval<f64>>("[3.0,1.0]").is_err());
}
