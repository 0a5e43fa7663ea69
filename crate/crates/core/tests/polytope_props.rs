use proptest::prelude::*;

use pwldepth::depth::Bounds;
use pwldepth::geom::{convex_hull, faces, graph, minkowski_sum_all, Polytope};
use pwldepth::polydepth::{
    cyclic, depth_bounds, depth_bounds_with, depth_upper_vertex_split, generic_zonotope,
    is_zonotope, polygon_decompose, realize, zonotope, zonotope_vertex_count, BoundsOptions,
    Provenance,
};
use pwldepth::rational::{ceil_log2, int};
use pwldepth::sample::Sampler;
use pwldepth::verify::random_polytope_expr;
use pwldepth::Point;

fn polytope(max_dim: usize, max_pts: usize) -> impl Strategy<Value = Polytope> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, n), 1..=max_pts)
            .prop_map(|vs| convex_hull(&vs.iter().map(|v| Point::from_ints(v)).collect::<Vec<_>>()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vertex_split_realizes(p in polytope(4, 8)) {
        let (d, e) = depth_upper_vertex_split(&p);
        prop_assert_eq!(e.structural_depth(), d);
        prop_assert_eq!(realize(&e).unwrap(), p);
    }

    #[test]
    fn bounds_are_sound_for_construction_trees(seed in any::<u64>(), n in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let e = random_polytope_expr(&mut s, n, 3);
        let p = realize(&e).unwrap();
        prop_assume!(p.num_vertices() <= 40);
        let d = e.structural_depth();
        prop_assert!(depth_bounds(&p).lower <= d);
        let tagged = depth_bounds_with(&p, &Provenance::FromExpr(e), &BoundsOptions::default());
        prop_assert!(tagged.lower <= d && tagged.upper <= d);
    }

    #[test]
    fn faces_respect_the_upper_bound(p in polytope(3, 8)) {
        let u = depth_bounds(&p).upper;
        for k in 0..=p.intrinsic_dim() {
            for f in faces(&p, k).unwrap() {
                prop_assert!(depth_bounds(&f).lower <= u);
            }
        }
    }

    #[test]
    fn zonotopes_have_depth_one(seed in any::<u64>(), n in 1usize..=3, p in 1usize..=4) {
        let mut s = Sampler::new(seed);
        let gens: Vec<Point> = (0..p).map(|_| s.int_point(n, -3, 3)).collect();
        let z = zonotope(&gens).unwrap().polytope;
        let recovered = is_zonotope(&z).unwrap();
        prop_assert_eq!(minkowski_sum_all(
            &recovered.iter().map(|g| convex_hull(&[Point::zeros(n), g.clone()]).unwrap()).collect::<Vec<_>>()
        ).map(|q| q.eq_up_to_translation(&z)).unwrap_or(recovered.is_empty()), true);
        let expected = if z.num_vertices() == 1 { Bounds::exact(0) } else { Bounds::exact(1) };
        prop_assert_eq!(depth_bounds(&z).bounds(), expected);
    }

    #[test]
    fn polygons_resum(p in polytope(2, 12)) {
        prop_assume!(p.intrinsic_dim() == 2);
        let parts = polygon_decompose(&p).unwrap();
        prop_assert!(minkowski_sum_all(&parts).unwrap().eq_up_to_translation(&p));
        prop_assert!(depth_bounds(&p).upper <= 2);
    }

    #[test]
    fn neighborly_polytopes_are_exact(params in prop::collection::btree_set(-6i64..=6, 5..=8)) {
        let ts: Vec<_> = params.into_iter().map(int).collect();
        let c = cyclic(4, &ts).unwrap().polytope;
        prop_assert!(graph(&c).is_complete());
        let m = ceil_log2(ts.len()) as usize;
        prop_assert_eq!(depth_bounds(&c).bounds(), Bounds::exact(m));
    }
}

#[test]
fn generic_zonotope_counts() {
    for n in 1..=3 {
        for p in n..=6 {
            let z = generic_zonotope(n, p, 3).unwrap();
            assert_eq!(
                z.polytope.num_vertices() as u128,
                zonotope_vertex_count(n, p).unwrap(),
                "n = {n}, p = {p}"
            );
        }
    }
}
