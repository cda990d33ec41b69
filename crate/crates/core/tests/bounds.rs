use proptest::prelude::*;
use spreadlab_core::bounds::*;
use spreadlab_core::exact::Exact;

fn q(a: i64, b: i64) -> Exact {
    Exact::ratio(a, b)
}

fn params(n: i64, k: i64, s: Exact, t: Exact) -> BoundParams {
    BoundParams::new(n, k, s, t).unwrap()
}

fn val(b: Bound) -> Exact {
    b.as_value().cloned().unwrap_or_else(|| panic!("expected a value, got {b:?}"))
}

/// The defining inequality, checked in floating point with a margin.
fn k0_by_scan(n: i64) -> i64 {
    (1..64)
        .find(|&k| 7.0 / 3.0 * 2f64.powi(k as i32 - 2) + k as f64 >= n as f64 - 1e-12)
        .unwrap()
}

#[test]
fn k0_table() {
    for (n, k0) in [(2, 1), (3, 2), (7, 3), (8, 4), (14, 5)] {
        assert_eq!(compute_k0(n), k0, "n = {n}");
    }
    for n in 2..200 {
        assert_eq!(compute_k0(n), k0_by_scan(n), "n = {n}");
    }
}

#[test]
fn tabulated_values() {
    assert_eq!(val(bound_spread_main(&params(7, 4, q(7, 2), q(12, 1)))), q(13, 2));
    assert_eq!(val(bound_spread_general(&params(7, 4, q(7, 2), q(10, 1)), 3)), q(11, 2));
    assert_eq!(val(bound_spread_main(&params(8, 5, q(9, 2), q(15, 1)))), q(15, 2));
    assert!(!bound_spread_main(&params(7, 3, q(5, 2), q(12, 1))).is_applicable());
    assert_eq!(val(bound_spread_hyperplane(3, &q(3, 2), &q(2, 1))), q(5, 2));
    assert_eq!(val(bound_spread_hyperplane(4, &q(3, 2), &q(1, 1))), q(3, 2));
    assert_eq!(val(bound_hera(&params(4, 2, q(3, 2), q(4, 1)))), q(17, 6));
    assert_eq!(val(bound_hera(&params(4, 2, q(2, 1), q(6, 1)))), q(4, 1));
    assert_eq!(alpha_affine_step(7, 4, 3, &q(12, 1)).unwrap(), q(12, 1));
    assert_eq!(alpha_affine_step(4, 3, 1, &q(3, 1)).unwrap(), q(6, 1));
    let ff = ff_bound_exponents(3, 1, &q(1, 2)).unwrap();
    assert_eq!(ff.zhang_upper, q(2, 1));
}

#[test]
fn survey_entries() {
    let r = bound_survey(&params(2, 1, q(1, 2), q(1, 1)));
    let rw = r.entry("ren_wang").unwrap();
    assert_eq!(rw.bound.as_value(), Some(&q(5, 4)));

    let r = bound_survey(&params(3, 2, q(3, 2), q(2, 1)));
    assert_eq!(r.entry("dabrowski_orponen_villa").unwrap().bound.as_value(), Some(&q(7, 4)));

    let r = bound_survey(&params(4, 2, q(2, 1), q(6, 1)));
    assert_eq!(r.entry("oberlin_falconer_mattila").unwrap().bound, Bound::PositiveMeasure);
    assert!(r.positive_measure);

    // Decreasing in t below s = n-1.
    let lo = bound_dov(&params(3, 2, q(3, 2), q(2, 1)));
    let hi = bound_dov(&params(3, 2, q(3, 2), q(3, 1)));
    assert!(val(hi) < val(lo));

    // DOV is inapplicable exactly at t = 1.
    let r = bound_survey(&params(3, 2, q(3, 2), q(1, 1)));
    assert!(!r.entry("dabrowski_orponen_villa").unwrap().applicable);
}

#[test]
fn general_class_flags_spread_only_bounds() {
    let p = params(7, 4, q(7, 2), q(12, 1));
    let r = bound_survey_for(&p, SetClass::General);
    for e in r.entries.iter().filter(|e| e.spread_only) {
        assert!(!e.applicable, "{} should be gated", e.name);
    }
}

/// Valid `(n, k, s, t)` with `n` in `lo..hi`, all on a small rational grid.
fn valid_params(lo: i64, hi: i64) -> impl Strategy<Value = BoundParams> {
    (lo..hi)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, k)| (Just(n), Just(k), rational_in(0, k), 0..=(k + 1) * (n - k) * 4))
        .prop_map(|(n, k, s, t4)| params(n, k, s, q(t4, 4)))
}

fn rational_in(lo: i64, hi: i64) -> impl Strategy<Value = Exact> {
    // Values (lo, hi] on a grid of denominator up to 6.
    (1i64..=6).prop_flat_map(move |d| (lo * d + 1..=hi * d).prop_map(move |a| q(a, d)))
}

proptest! {
    #[test]
    fn sharp_at_full_grassmannian(n in 3i64..12, kf in 0.0f64..1.0, sf in 0.0f64..1.0) {
        let k0 = compute_k0(n);
        prop_assume!(k0 < n - 1);
        let k = k0 + 1 + ((n - 1 - (k0 + 1)) as f64 * kf).round() as i64;
        let s = Exact::int(k0) + Exact::from_f64(((k - k0) as f64 * sf * 64.0).round().max(1.0) / 64.0).unwrap();
        prop_assume!(s <= Exact::int(k));
        let t = Exact::int(k * (n - k));
        let b = val(bound_spread_main(&params(n, k, s.clone(), t)));
        prop_assert_eq!(b, Exact::int(n - k) + s);
    }

    #[test]
    fn hyperplane_is_general_with_k0_one(n in 3i64..10, sf in 0.0f64..1.0, tf in 0.0f64..1.0) {
        let s = Exact::from_f64(1.0 + ((n - 2) as f64 * sf * 48.0).round().max(1.0) / 48.0).unwrap();
        let t = Exact::from_f64(((n - 1) as f64 * tf * 48.0).round().max(1.0) / 48.0).unwrap();
        let direct = bound_spread_hyperplane(n, &s, &t);
        let general = bound_spread_general(&params(n, n - 1, s, t), 1);
        prop_assert_eq!(direct, general);
    }

    #[test]
    fn hyperplane_sharp_example(n in 4i64..12, s in rational_in(1, 10)) {
        prop_assume!(s <= Exact::int(n - 1));
        let t = n - 1 - s.ceil();
        prop_assume!(t > 0);
        let b = val(bound_spread_hyperplane(n, &s, &Exact::int(t)));
        prop_assert_eq!(b, s);
    }

    #[test]
    fn monotone_in_t_and_s(p in valid_params(2, 9), dt in rational_in(0, 2), ds in rational_in(0, 1)) {
        let tmax = Exact::int((p.k + 1) * (p.n - p.k));
        let pt = params(p.n, p.k, p.s.clone(), (&p.t + &dt).min(tmax));
        let ps = params(p.n, p.k, (&p.s + &ds).min(Exact::int(p.k)), p.t.clone());
        let formulas: [fn(&BoundParams) -> Bound; 7] = [
            bound_spread_main, bound_hera, bound_oberlin, bound_hkm,
            bound_dov, bound_ren_wang, bound_hyperplane_corollary,
        ];
        for (i, f) in formulas.into_iter().enumerate() {
            // The hyperplane integrability bound carries a `-(t-1)` term and
            // decreases in `t` whenever `s < n-1`; only its `s` direction is monotone.
            let targets: &[&BoundParams] = if i == 4 { &[&ps] } else { &[&pt, &ps] };
            for &q2 in targets {
                if let (Some(a), Some(b)) = (f(&p).as_value().cloned(), f(q2).as_value().cloned()) {
                    prop_assert!(a <= b, "{:?} -> {:?}: {} > {}", p, q2, a, b);
                }
            }
        }
    }

    #[test]
    fn best_is_max_of_entries(p in valid_params(2, 8)) {
        let r = bound_survey(&p);
        let max = r.entries.iter()
            .filter(|e| e.applicable)
            .filter_map(|e| e.bound.as_value().cloned())
            .max();
        prop_assert_eq!(r.best.map(|b| b.value), max);
    }

    #[test]
    fn ff_exponent_consistency(n in 2i64..9, k in 1i64..8, s in rational_in(0, 1)) {
        prop_assume!(k < n);
        let r = ff_bound_exponents(n, k, &s).unwrap();
        prop_assert!(r.zhang_upper >= r.pair_counting);
        prop_assert_eq!(r.polynomial_method, &s * n);
        prop_assert_eq!(r.ddl_lower, Exact::int(n - k) + s);
    }
}
