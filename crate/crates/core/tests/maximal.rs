use spreadlab_core::grassmann::{haar_sample, min_rotation, Subspace, Vector};
use spreadlab_core::maximal::{
    kakeya_maximal, kakeya_maximal_centered, level_for, maximal_lp_norm, random_tube_union, scaling_scan,
    tube_average, MaximalField, TubeSpec,
};

#[test]
fn unit_ball_maximal_is_one() {
    let delta = 0.05;
    let f = MaximalField::indicator_ball(2, level_for(delta), &[0.0, 0.0], 1.0).unwrap();
    for i in 0..20 {
        let u = haar_sample(2, 1, 500 + i).unwrap();
        let m = kakeya_maximal(&f, &u, delta, delta / 2.0).unwrap();
        assert!((m - 1.0).abs() <= 1e-12, "direction {i}: {m}");
    }
    let norm = maximal_lp_norm(&f, 1, delta, 2.0, 4, 3).unwrap();
    assert!((norm - 1.0).abs() <= 1e-12);
}

#[test]
fn slabs_in_three_dimensions() {
    let delta = 0.125;
    let f = MaximalField::indicator_ball(3, level_for(delta), &[0.0; 3], 1.0).unwrap();
    let u = haar_sample(3, 2, 1).unwrap();
    assert!((kakeya_maximal(&f, &u, delta, delta / 2.0).unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn monotone_and_bounded() {
    let delta = 0.0625;
    let level = level_for(delta);
    let g = random_tube_union(2, 1, 12, delta, level, 8).unwrap();
    let f = MaximalField::from_fn(2, level, |x| if x[0] > 0.0 { 1.0 } else { 0.0 }).unwrap();
    // f·g ≤ g pointwise
    let fg = MaximalField::from_fn(2, level, |x| {
        let h = (-(level as f64)).exp2();
        let side = 1i64 << (level + 1);
        let i = ((x[0] + 1.0) / h).floor() as i64;
        let j = ((x[1] + 1.0) / h).floor() as i64;
        let gv = g.values()[(i * side + j) as usize];
        if x[0] > 0.0 { gv } else { 0.0 }
    })
    .unwrap();
    for s in 0..6 {
        let u = haar_sample(2, 1, 70 + s).unwrap();
        let a = kakeya_maximal(&fg, &u, delta, delta / 2.0).unwrap();
        let b = kakeya_maximal(&g, &u, delta, delta / 2.0).unwrap();
        let c = kakeya_maximal(&f, &u, delta, delta / 2.0).unwrap();
        assert!(a <= b + 1e-12 && a <= c + 1e-12);
        for m in [a, b, c] {
            assert!((0.0..=1.0).contains(&m));
        }
    }
    let norm = maximal_lp_norm(&g, 1, delta, 3.0, 4, 1).unwrap();
    assert!(norm <= g.sup() + 1e-12);
}

#[test]
fn translation_covariance() {
    let delta = 0.0625;
    let level = level_for(delta);
    let grid_err = (-(level as f64) + 2.0).exp2();
    let c = [0.1, -0.2];
    for (i, v) in [[0.13, 0.07], [-0.21, 0.3], [0.0, -0.17]].iter().enumerate() {
        let f = MaximalField::indicator_ball(2, level, &c, 0.35).unwrap();
        let g = MaximalField::indicator_ball(2, level, &[c[0] + v[0], c[1] + v[1]], 0.35).unwrap();
        let u = haar_sample(2, 1, 40 + i as u64).unwrap();
        let a = kakeya_maximal(&f, &u, delta, delta / 2.0).unwrap();
        let b = kakeya_maximal_centered(&g, &u, delta, delta / 2.0, &Vector::from_vec(v.to_vec())).unwrap();
        assert!((a - b).abs() <= grid_err, "{a} vs {b}");
    }
}

#[test]
fn rotation_covariance() {
    let delta = 0.0625;
    let level = level_for(delta);
    let grid_err = (-(level as f64) + 2.0).exp2();
    let c = Vector::from_vec(vec![0.3, 0.1]);
    let f = MaximalField::indicator_ball(2, level, c.as_slice(), 0.3).unwrap();
    let u = Subspace::coordinate(2, &[0]).unwrap();
    let base = kakeya_maximal(&f, &u, delta, delta / 2.0).unwrap();
    for i in 0..10 {
        let v = haar_sample(2, 1, 900 + i).unwrap();
        let r = min_rotation(&u, &v).unwrap();
        let rc = r.apply(&c);
        let g = MaximalField::indicator_ball(2, level, rc.as_slice(), 0.3).unwrap();
        let m = kakeya_maximal(&g, &r.apply_subspace(&u), delta, delta / 2.0).unwrap();
        assert!((m - base).abs() <= grid_err, "rotation {i}: {m} vs {base}");
    }
}

#[test]
fn refinement_stability() {
    let delta = 0.0625;
    for center in [[0.0, 0.0], [0.6, 0.4], [0.9, 0.0], [0.7, -0.7]] {
        let u = Subspace::from_vectors(&[vec![0.6, 0.8]]).unwrap();
        let t = TubeSpec::new(u, Vector::from_vec(center.to_vec()), delta).unwrap();
        let l = level_for(delta);
        let coarse = tube_average(&MaximalField::indicator_ball(2, l, &[0.0, 0.0], 1.0).unwrap(), &t).unwrap();
        let fine = tube_average(&MaximalField::indicator_ball(2, l + 1, &[0.0, 0.0], 1.0).unwrap(), &t).unwrap();
        assert!((coarse - fine).abs() <= 0.1 * coarse.max(fine), "{coarse} vs {fine}");
    }
}

#[test]
fn scaling_table_is_reported() {
    let rows = scaling_scan(2, 10, &[0.25, 0.125], 2.0, 2, 4).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.norm > 0.0 && r.norm <= 1.0));
}
