use proptest::prelude::*;

use pwldepth::cpwl::{evaluate, AffineFn, CpwlExpr, MaxAffine};
use pwldepth::matrix::Matrix;
use pwldepth::rational::{ceil_log2, Rational};
use pwldepth::relu::{
    compile_expr, compile_max_tree, depth_bound, eval_net, net_compose_affine, net_max_pair,
    net_scale, net_sum, ReluNetwork,
};
use pwldepth::sample::Sampler;
use pwldepth::Point;

fn random_expr(s: &mut Sampler, n: usize, depth: usize) -> CpwlExpr {
    if depth == 0 || s.int(0, 3) == 0 {
        return CpwlExpr::affine(AffineFn::new(s.int_point(n, -3, 3), s.rational(-2, 2)));
    }
    let k = s.int(1, 3) as usize;
    let kids: Vec<CpwlExpr> = (0..k).map(|_| random_expr(s, n, depth - 1)).collect();
    match s.int(0, 3) {
        0 => CpwlExpr::sum(kids),
        1 => CpwlExpr::scale(s.rational(-3, 3), kids.into_iter().next().unwrap()),
        2 => {
            let m = Matrix::from_points(&(0..n).map(|_| s.int_point(n, -2, 2)).collect::<Vec<_>>(), n).unwrap();
            CpwlExpr::compose(kids.into_iter().next().unwrap(), m, s.int_point(n, -2, 2))
        }
        _ => CpwlExpr::max(kids),
    }
}

fn agree(a: &ReluNetwork, f: impl Fn(&Point) -> Rational, pts: &[Point]) -> bool {
    pts.iter().all(|x| eval_net(a, x).unwrap() == f(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compiled_expressions_agree(seed in any::<u64>(), n in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let f = random_expr(&mut s, n, 3);
        let net = compile_expr(&f).unwrap();
        prop_assert_eq!(net.hidden_depth(), depth_bound(&f).unwrap());
        let pts = s.points(n, 60);
        prop_assert!(agree(&net, |x| evaluate(&f, x).unwrap(), &pts));
    }

    #[test]
    fn combinator_depths(seed in any::<u64>(), n in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let a = compile_expr(&random_expr(&mut s, n, 3)).unwrap();
        let b = compile_expr(&random_expr(&mut s, n, 2)).unwrap();
        let (da, db) = (a.hidden_depth(), b.hidden_depth());
        prop_assert_eq!(net_sum(&a, &b).unwrap().hidden_depth(), da.max(db));
        prop_assert_eq!(net_max_pair(&a, &b).unwrap().hidden_depth(), da.max(db) + 1);
        prop_assert_eq!(net_scale(&s.rational(-3, 3), &a).hidden_depth(), da);
        let m = Matrix::from_points(&(0..n).map(|_| s.int_point(n, -2, 2)).collect::<Vec<_>>(), n).unwrap();
        prop_assert_eq!(net_compose_affine(&a, &m, &s.int_point(n, -1, 1)).unwrap().hidden_depth(), da);

        let deeper = a.deepen();
        prop_assert_eq!(deeper.hidden_depth(), da + 1);
        let pts = s.points(n, 40);
        prop_assert!(agree(&deeper, |x| eval_net(&a, x).unwrap(), &pts));
        let sum = net_sum(&a, &b).unwrap();
        prop_assert!(agree(&sum, |x| eval_net(&a, x).unwrap() + eval_net(&b, x).unwrap(), &pts));
        let mx = net_max_pair(&a, &b).unwrap();
        prop_assert!(agree(&mx, |x| eval_net(&a, x).unwrap().max(eval_net(&b, x).unwrap()), &pts));
    }

    #[test]
    fn max_tree_shape(seed in any::<u64>(), n in 1usize..=4, p in 1usize..=12) {
        let mut s = Sampler::new(seed);
        let ls: Vec<AffineFn> = (0..p).map(|_| AffineFn::new(s.int_point(n, -4, 4), s.rational(-2, 2))).collect();
        let net = compile_max_tree(&ls).unwrap();
        prop_assert_eq!(net.hidden_depth(), ceil_log2(p) as usize);
        let mut k = p;
        for w in net.hidden_widths() {
            prop_assert!(w <= 3 * k.div_ceil(2));
            k = k.div_ceil(2);
        }
        let m = MaxAffine::new(ls).unwrap();
        let pts = s.points(n, 60);
        prop_assert!(agree(&net, |x| m.eval(x), &pts));
    }
}
