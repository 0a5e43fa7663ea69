use proptest::prelude::*;

use pwldepth::geom::{
    affine_image, convex_hull, faces, graph, max_clique, minkowski_sum, Polytope,
};
use pwldepth::matrix::Matrix;
use pwldepth::polydepth::zonotope;
use pwldepth::rational::int;
use pwldepth::Point;

fn points(n: usize, max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), 1..=max)
        .prop_map(|vs| vs.iter().map(|v| Point::from_ints(v)).collect())
}

fn polytope(max_dim: usize, max_pts: usize) -> impl Strategy<Value = Polytope> {
    (1..=max_dim).prop_flat_map(move |n| points(n, max_pts).prop_map(|ps| convex_hull(&ps).unwrap()))
}

fn pair(max_dim: usize, max_pts: usize) -> impl Strategy<Value = (Polytope, Polytope)> {
    (1..=max_dim).prop_flat_map(move |n| {
        (points(n, max_pts), points(n, max_pts))
            .prop_map(|(a, b)| (convex_hull(&a).unwrap(), convex_hull(&b).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_is_idempotent(p in polytope(4, 9)) {
        prop_assert_eq!(convex_hull(p.vertices()).unwrap(), p);
    }

    #[test]
    fn minkowski_vertices_are_vertex_sums((p, q) in pair(3, 6)) {
        let s = minkowski_sum(&p, &q).unwrap();
        for v in s.vertices() {
            let found = p.vertices().iter().any(|a| q.vertices().iter().any(|b| &(a + b) == v));
            prop_assert!(found, "vertex {} is not a vertex sum", v);
        }
    }

    #[test]
    fn affine_image_distributes_over_sums(
        (p, q) in pair(3, 5),
        entries in prop::collection::vec(-3i64..=3, 9),
        shift in prop::collection::vec(-3i64..=3, 3),
    ) {
        let n = p.dim();
        let rows: Vec<Vec<_>> = (0..2).map(|i| (0..n).map(|j| int(entries[i * 3 + j])).collect()).collect();
        let m = Matrix::from_rows(rows, n).unwrap();
        let c = Point::from_ints(&shift[..2]);
        let lhs = affine_image(&minkowski_sum(&p, &q).unwrap(), &m, &c).unwrap();
        let rhs = minkowski_sum(
            &affine_image(&p, &m, &c).unwrap(),
            &affine_image(&q, &m, &Point::zeros(2)).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pseudoinverse_is_right_inverse(
        rows in 1usize..=6,
        extra in 0usize..=2,
        entries in prop::collection::vec(-5i64..=5, 48),
    ) {
        let cols = (rows + extra).min(6).max(rows);
        let data: Vec<Vec<_>> = (0..rows)
            .map(|i| (0..cols).map(|j| int(entries[i * cols + j])).collect())
            .collect();
        let a = Matrix::from_rows(data, cols).unwrap();
        prop_assume!(a.rank() == rows);
        let pinv = a.pseudoinverse_full_row_rank().unwrap();
        prop_assert!(a.mul(&pinv).unwrap().is_identity());
    }

    #[test]
    fn one_faces_match_graph(p in polytope(4, 9)) {
        prop_assume!(p.intrinsic_dim() >= 1);
        let mut from_faces: Vec<(usize, usize)> = faces(&p, 1)
            .unwrap()
            .iter()
            .map(|e| {
                let i = p.vertices().iter().position(|v| *v == e.vertices()[0]).unwrap();
                let j = p.vertices().iter().position(|v| *v == e.vertices()[1]).unwrap();
                (i.min(j), i.max(j))
            })
            .collect();
        from_faces.sort();
        prop_assert_eq!(from_faces, graph(&p).edges());
    }

    #[test]
    fn zonotope_graphs_have_no_triangles(gens in points(3, 5)) {
        prop_assume!(gens.iter().all(|g| !g.is_zero()));
        let z = zonotope(&gens).unwrap().polytope;
        prop_assert!(max_clique(&graph(&z)).len() <= 2);
    }

    #[test]
    fn cliques_survive_in_some_summand((q, r) in pair(3, 6)) {
        let p = minkowski_sum(&q, &r).unwrap();
        let k = max_clique(&graph(&p)).len();
        prop_assume!(k >= 3);
        let best = max_clique(&graph(&q)).len().max(max_clique(&graph(&r)).len());
        prop_assert!(best >= k);
    }
}
