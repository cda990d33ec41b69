use proptest::prelude::*;
use spreadlab_core::bounds::bound_spread_hyperplane;
use spreadlab_core::dimension::cantor::cantor_grid;
use spreadlab_core::dimension::examples::{sharp_hyperplane_example, slicing_product_example};
use spreadlab_core::dimension::{
    best_slice_dimension, box_count, default_family_range, embed_member, estimate_cloud_dimension,
    estimate_dimension, family_dimension, FamilyMember, GridSet,
};
use spreadlab_core::exact::Exact;
use spreadlab_core::grassmann::{grass_distance, haar_sample, Subspace};

#[test]
fn product_of_cantor_and_interval() {
    let g = cantor_grid(2, 3, &[vec![0, 2], vec![0, 1, 2]], 6).unwrap();
    let est = estimate_dimension(&g, 5, g.level()).unwrap();
    assert!((est.slope - 1.6309).abs() < 0.1, "{est:?}");
}

#[test]
fn sharp_example_family_and_identity() {
    let ex = sharp_hyperplane_example(4, 1.5, 5).unwrap();
    let members: Vec<FamilyMember> =
        ex.family.flats.iter().map(|w| FamilyMember::Linear(w.direction().clone())).collect();
    let (lo, hi) = default_family_range(members.len());
    let est = family_dimension(&members, lo, hi).unwrap();
    assert!((est.slope - ex.family_dim as f64).abs() < 0.15, "{est:?}");
    let t = Exact::int(ex.family_dim);
    let b = bound_spread_hyperplane(4, &ex.achieved, &t);
    assert_eq!(b.as_value().unwrap(), &ex.achieved);
}

#[test]
fn slicing_product_dimension_and_slices() {
    let ex = slicing_product_example(2, 1, 2f64.ln() / 3f64.ln(), 7).unwrap();
    let g = &ex.grid;
    let est = estimate_dimension(g, 5, g.level()).unwrap();
    assert!((est.slope - ex.achieved.to_f64()).abs() < 0.1, "{est:?}");

    let s = ex.achieved_s.to_f64();
    let mut hits = 0;
    for i in 0..20 {
        let u = haar_sample(2, 1, 900 + i).unwrap();
        let d = best_slice_dimension(g, &u, 2, g.cell_side(), 4, g.level() - 2, i).unwrap();
        if d >= s - 0.15 {
            hits += 1;
        }
    }
    assert_eq!(hits, 20, "every direction should have a full-dimensional slice");
}

#[test]
fn projector_embedding_is_norm_equivalent() {
    for i in 0..1000u64 {
        let n = 2 + (i % 5) as usize;
        let k = 1 + (i as usize / 5) % (n - 1);
        let u = haar_sample(n, k, 2 * i).unwrap();
        let v = haar_sample(n, k, 2 * i + 1).unwrap();
        let d = grass_distance(&u, &v).unwrap();
        let diff = u.projector() - v.projector();
        let max_entry = diff.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(max_entry <= d + 1e-9);
        assert!(d <= n as f64 * max_entry + 1e-9);
    }
}

#[test]
fn cloud_of_segment_is_one_dimensional() {
    let pts: Vec<Vec<f64>> = (0..4096).map(|i| vec![i as f64 / 4095.0, 0.5, 2.0 * i as f64 / 4095.0]).collect();
    let est = estimate_cloud_dimension(&pts, 2, 9).unwrap();
    assert!((est.slope - 1.0).abs() < 0.05, "{est:?}");
    let lin = FamilyMember::Linear(Subspace::full(3).unwrap());
    assert_eq!(embed_member(&lin).len(), 6);
}

fn arb_grid() -> impl Strategy<Value = GridSet> {
    (1usize..=3, 1u32..=6).prop_flat_map(|(n, level)| {
        let side = 1u32 << level;
        prop::collection::vec(prop::collection::vec(0..side, n), 1..200)
            .prop_map(move |cells| GridSet::from_cells(n, level, cells).unwrap())
    })
}

proptest! {
    #[test]
    fn downsampling_consistency(g in arb_grid()) {
        for l in 1..=g.level() {
            let fine = box_count(&g, l).unwrap();
            let coarse = box_count(&g, l - 1).unwrap();
            prop_assert!(coarse <= fine);
            prop_assert!(fine <= (1u64 << g.n()) * coarse);
        }
    }

    #[test]
    fn slope_in_range(g in arb_grid()) {
        prop_assume!(g.level() >= 2);
        let est = estimate_dimension(&g, 1, g.level()).unwrap();
        prop_assert!(est.slope >= 0.0 && est.slope <= g.n() as f64);
        prop_assert!(est.r2 >= 0.0 && est.r2 <= 1.0);
    }

    #[test]
    fn cantor_products_add(a in 0usize..3, b in 0usize..3) {
        let pats = [vec![0u32], vec![0, 2], vec![0, 1, 2]];
        let depth = 6;
        let pa = cantor_grid(1, 3, &[pats[a].clone()], depth).unwrap();
        let pb = cantor_grid(1, 3, &[pats[b].clone()], depth).unwrap();
        let ab = cantor_grid(2, 3, &[pats[a].clone(), pats[b].clone()], depth).unwrap();
        let lo = 4;
        let hi = ab.level();
        let da = estimate_dimension(&pa, lo, hi).unwrap().slope;
        let db = estimate_dimension(&pb, lo, hi).unwrap().slope;
        let dab = estimate_dimension(&ab, lo, hi).unwrap().slope;
        prop_assert!((dab - da - db).abs() <= 0.1, "{} vs {} + {}", dab, da, db);
    }
}
