use apsets::*;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = SetFamily> {
    prop_oneof![
        (2u32..5).prop_map(|k| SetFamily::Kfree { k }),
        (2u64..30)
            .prop_filter("not a square", |r| {
                let s = (*r as f64).sqrt() as u64;
                s * s != *r
            })
            .prop_map(|r| SetFamily::Beatty { r }),
        (1u64..12, proptest::collection::vec(0u64..12, 0..6)).prop_map(|(q, res)| {
            let mut residues: Vec<u64> = res.into_iter().map(|r| r % q).collect();
            residues.sort();
            residues.dedup();
            SetFamily::Periodic { q, residues }
        }),
        (2u64..40).prop_map(|bound| SetFamily::Sifted { bound }),
        Just(SetFamily::Full),
    ]
}

fn arcs() -> impl Strategy<Value = ArcSystem> {
    proptest::collection::vec((-1.5f64..1.5, 0.0f64..0.3), 0..8).prop_map(|v| {
        ArcSystem::from_intervals(v.into_iter().map(|(a, w)| (a, a + w)))
    })
}

fn bits(max_x: u64) -> impl Strategy<Value = IntegerSet> {
    (1..=max_x)
        .prop_flat_map(|x| proptest::collection::vec(any::<bool>(), x as usize))
        .prop_map(|v| {
            IntegerSet::from_members(
                v.len() as u64,
                v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64 + 1),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generators_are_prefix_consistent(f in family(), y in 1u64..3000, extra in 0u64..3000) {
        let big = f.generate(y + extra).unwrap();
        let small = f.generate(y).unwrap();
        prop_assert_eq!(big.truncate(y).unwrap(), small);
    }

    #[test]
    fn serialization_round_trips(s in bits(700)) {
        prop_assert_eq!(IntegerSet::from_bytes(&s.to_bytes()).unwrap(), s.clone());
        prop_assert_eq!(IntegerSet::from_text(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn normalize_is_idempotent(a in arcs()) {
        prop_assert!(a.is_normalized());
        prop_assert_eq!(a.normalize(), a.clone());
        let m = a.measure() + a.complement().measure();
        prop_assert!((m - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a.measure()));
    }

    #[test]
    fn union_and_intersection_measures(a in arcs(), b in arcs()) {
        let lhs = a.union(&b).measure() + intersect_arcs(&a, &b).measure();
        prop_assert!((lhs - a.measure() - b.measure()).abs() < 1e-12);
        prop_assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn energy_is_additive_and_reflection_symmetric(s in bits(1500), a in arcs()) {
        let ac = autocorrelation(&s).unwrap();
        let c0 = s.count() as f64;
        let ea = energy_on_arcs(&ac, &a).unwrap();
        let ec = energy_on_arcs(&ac, &a.complement()).unwrap();
        prop_assert!((ea + ec - c0).abs() <= 1e-9 * c0.max(1.0));
        let er = energy_on_arcs(&ac, &a.reflect()).unwrap();
        prop_assert!((ea - er).abs() <= 1e-9 * c0.max(1.0));
        prop_assert!(ea >= 0.0 && ea <= c0);
    }

    #[test]
    fn parseval(s in bits(3000)) {
        let e = energy_on_arcs(&autocorrelation(&s).unwrap(), &ArcSystem::full()).unwrap();
        prop_assert!((e - s.count() as f64).abs() <= 1e-9 * (s.count() as f64).max(1.0));
    }

    #[test]
    fn rep_count_symmetric_and_total(a in bits(800), b in bits(800)) {
        let ab = rep_count(&a, &b).unwrap();
        let ba = rep_count(&b, &a).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab.total(), a.count() * b.count());
    }

    #[test]
    fn bessel_holds(s in bits(2000), qs in proptest::collection::vec(1u64..12, 1..6)) {
        let cands: Vec<Frequency> = qs
            .iter()
            .flat_map(|&q| (0..q).map(move |a| Frequency::rational(a as i64, q)))
            .chain([Frequency::real(0.123456789), Frequency::real(1.0 / 2f64.sqrt())])
            .collect();
        let est = spectrum_scan(&s, &cands, 1e-15).unwrap();
        prop_assert!(est.mass() <= s.density() + 1e-9);
    }

    #[test]
    fn extremality_partial_sums_nondecreasing(s in bits(2500)) {
        prop_assume!(!s.is_empty() && s.limit() >= 100);
        let q = (s.limit() as f64).sqrt() as u64;
        let c = extremality_sum(&s, q.min(20)).unwrap();
        prop_assert!(c.partial_sums().windows(2).all(|w| w[1] >= w[0]));
        // Bessel in the rational direction
        prop_assert!(c.total() <= 1.0 / c.rho() * (1.0 + 1e-9));
    }

    #[test]
    fn local_densities_sum_to_density(s in bits(2000), q in 1u64..40) {
        prop_assume!(q <= s.limit());
        let t = local_densities(&s, q).unwrap();
        let total: f64 = t.values().iter().sum();
        prop_assert!((total - s.density()).abs() < 1e-12);
    }
}

#[test]
fn squarefree_concentration_is_monotone() {
    let x = 100_000;
    let sf = gen_kfree(2, x).unwrap();
    let ac = autocorrelation(&sf).unwrap();
    let r: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
        .iter()
        .map(|&q| minor_arc_ratio_from(&ac, &farey_major_arcs(x, q).unwrap()).unwrap())
        .collect();
    for w in r.windows(2) {
        assert!(w[1] <= w[0] * 1.05, "{r:?}");
    }
}

#[test]
fn full_set_ratio_bound() {
    let x = 50_000;
    let full = IntegerSet::full(x).unwrap();
    let ac = autocorrelation(&full).unwrap();
    for q in [1.0, 3.0, 8.0, 30.0] {
        let r = minor_arc_ratio_from(&ac, &farey_major_arcs(x, q).unwrap()).unwrap();
        assert!(r <= 1.0 / q);
    }
}
