use dglap::graph::{enumerate_directed, Graph};
use dglap::invariants::{bernardi, potts};
use dglap::poly::{ratio, Monomial};
use dglap::space::{b_operator, det_minor, laplace, vertex_subsets, DirectedVector};
use dglap::{DirectedGraph, Guards, MultiPoly, UndirectedGraph, VarSet};
use proptest::prelude::*;

fn poly(vars: VarSet) -> impl Strategy<Value = MultiPoly> {
    let arity = vars.arity();
    prop::collection::vec(
        (prop::collection::vec(0u32..4, arity), -20i64..=20, 1i64..=6),
        0..6,
    )
    .prop_map(move |terms| {
        let mut p = MultiPoly::zero(vars);
        for (exps, num, den) in terms {
            p.add_term(Monomial::new(&exps), ratio(num, den));
        }
        p
    })
}

fn directed(max_n: usize, max_k: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_n, 0..=max_k).prop_flat_map(|(n, k)| {
        let size = DirectedGraph::space_size(n, k).unwrap();
        (0..size).prop_map(move |r| DirectedGraph::unrank(n, k, r).unwrap())
    })
}

fn undirected(max_n: usize, max_k: usize) -> impl Strategy<Value = UndirectedGraph> {
    (1..=max_n, 0..=max_k).prop_flat_map(|(n, k)| {
        let size = UndirectedGraph::space_size(n, k).unwrap();
        (0..size).prop_map(move |r| UndirectedGraph::unrank(n, k, r).unwrap())
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(VarSet::QYZ), b in poly(VarSet::QYZ), c in poly(VarSet::QYZ)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(VarSet::QYZ), a.clone());
    }

    #[test]
    fn shift_round_trip(a in poly(VarSet::QYZ)) {
        prop_assert_eq!(a.shift_yz().unwrap().unshift_yz().unwrap(), a.clone());
        prop_assert_eq!(a.swap_yz().unwrap().swap_yz().unwrap(), a);
    }

    #[test]
    fn truncations_reassemble(a in poly(VarSet::QYZ)) {
        let mut sum = MultiPoly::zero(VarSet::QYZ);
        for k in 0..=a.top_degree_max() as usize {
            sum = &sum + &a.truncate_top(k);
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn text_and_json_round_trip(a in poly(VarSet::QV)) {
        prop_assert_eq!(MultiPoly::parse(&a.to_string(), VarSet::QV).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<MultiPoly>(&json).unwrap(), a);
    }

    #[test]
    fn directed_rank_round_trip(g in directed(5, 4)) {
        prop_assert_eq!(DirectedGraph::unrank(g.n(), g.k(), g.rank()).unwrap(), g.clone());
        prop_assert_eq!(g.to_string().parse::<DirectedGraph>().unwrap(), g);
    }

    #[test]
    fn undirected_rank_round_trip(g in undirected(5, 4)) {
        prop_assert_eq!(UndirectedGraph::unrank(g.n(), g.k(), g.rank()).unwrap(), g.clone());
        prop_assert_eq!(g.to_string().parse::<UndirectedGraph>().unwrap(), g);
    }

    #[test]
    fn reversal_swaps_y_and_z(g in directed(3, 3)) {
        let guards = Guards::default();
        let b = bernardi(&g, &guards).unwrap();
        prop_assert_eq!(bernardi(&g.reverse(), &guards).unwrap(), b.swap_yz().unwrap());
    }

    #[test]
    fn potts_is_orientation_free(g in undirected(3, 3), flips in any::<u64>()) {
        let guards = Guards::default();
        let lifted = g.lift(flips & ((1 << g.k()) - 1));
        prop_assert_eq!(lifted.forget(), g.clone());
        prop_assert_eq!(potts(&lifted.forget(), &guards).unwrap(), potts(&g, &guards).unwrap());
    }

    #[test]
    fn b_operator_is_linear(
        i in 1usize..=2,
        terms in prop::collection::vec((0u64..81, -5i64..=5, -5i64..=5), 0..12),
        alpha in -4i64..=4,
        beta in -4i64..=4,
    ) {
        let (mut u, mut v) = (DirectedVector::new(3, 2), DirectedVector::new(3, 2));
        for (r, a, b) in terms {
            let g = DirectedGraph::unrank(3, 2, r).unwrap();
            u.add_term(&g, MultiPoly::int(VarSet::Q, a)).unwrap();
            v.add_term(&g, MultiPoly::int(VarSet::Q, b)).unwrap();
        }
        let (alpha, beta) = (ratio(alpha, 1), ratio(beta, 1));
        let combined = u.scale_rational(&alpha).try_add(&v.scale_rational(&beta)).unwrap();
        let separate = b_operator(i, &u).unwrap().scale_rational(&alpha)
            .try_add(&b_operator(i, &v).unwrap().scale_rational(&beta)).unwrap();
        prop_assert_eq!(b_operator(i, &combined).unwrap(), separate);
    }
}

#[test]
fn laplace_image_is_loopless() {
    let guards = Guards::default();
    for g in enumerate_directed(3, 3, &guards).unwrap() {
        let mut v = DirectedVector::new(3, 3);
        v.add_term(&g, MultiPoly::one(VarSet::Q)).unwrap();
        for (h, _) in laplace(&v).terms() {
            assert!(h.is_loopless(), "{g} maps onto {h}");
        }
    }
}

#[test]
fn laplace_preserves_sinks_of_minors() {
    let guards = Guards::default();
    for k in 0..=3 {
        for subset in vertex_subsets(3) {
            let image = laplace(&det_minor(3, k, &subset, &guards).unwrap());
            for (h, _) in image.terms() {
                assert_eq!(h.sinks(), subset, "k={k}: {h}");
            }
        }
    }
}

#[test]
fn b_operators_commute_on_three_edges() {
    let guards = Guards::default();
    for g in enumerate_directed(2, 3, &guards).unwrap() {
        let mut v = DirectedVector::new(2, 3);
        v.add_term(&g, MultiPoly::one(VarSet::Q)).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let ij = b_operator(i, &b_operator(j, &v).unwrap()).unwrap();
            let ji = b_operator(j, &b_operator(i, &v).unwrap()).unwrap();
            assert_eq!(ij, ji, "{g}: B{i} and B{j}");
        }
    }
}
