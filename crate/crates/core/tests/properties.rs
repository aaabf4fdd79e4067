use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simplicial_walk::complex::{clique_complex, sphere_triangulation, OrientedSimplex, SimpleGraph, SimplicialComplex};
use simplicial_walk::graph::{conjugation_deviation, DuplicationSetting};
use simplicial_walk::search::{build_search_operator, deformed_graph, gamma_star, run_search, MarkedFace};
use simplicial_walk::walk::{build_grover_sqw, distribution, evolve, grover, PairSpace, StateVector};

fn random_unit_state(dim: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = StateVector::new(
        (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    );
    v.normalized()
}

fn relabeled(complex: &SimplicialComplex, perm: &[usize]) -> SimplicialComplex {
    SimplicialComplex::from_facets(
        complex
            .facets()
            .iter()
            .map(|f| f.vertices().iter().map(|&v| perm[v]).collect::<Vec<_>>()),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn walk_preserves_norm(n in 2usize..6, seed in any::<u64>()) {
        let ps = PairSpace::new(&sphere_triangulation(n).unwrap()).unwrap();
        let u = build_grover_sqw(&ps).unwrap();
        let psi = random_unit_state(ps.len(), seed);
        let out = u.apply(&psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_is_normalized(n in 2usize..6, steps in 0usize..40, seed in any::<u64>()) {
        let ps = PairSpace::new(&sphere_triangulation(n).unwrap()).unwrap();
        let u = build_grover_sqw(&ps).unwrap();
        let psi = evolve(&u, &random_unit_state(ps.len(), seed), steps).unwrap();
        let mu = distribution(&psi, &ps).unwrap();
        prop_assert!((mu.values().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(mu.values().all(|&m| m >= 0.0));
    }

    #[test]
    fn evolution_is_a_semigroup(a in 0usize..30, b in 0usize..30, seed in any::<u64>()) {
        let ps = PairSpace::new(&sphere_triangulation(3).unwrap()).unwrap();
        let u = build_grover_sqw(&ps).unwrap();
        let psi = random_unit_state(ps.len(), seed);
        let joint = evolve(&u, &psi, a + b).unwrap();
        let split = evolve(&u, &evolve(&u, &psi, a).unwrap(), b).unwrap();
        prop_assert!(joint.max_abs_diff(&split) < 1e-12);
    }

    #[test]
    fn grover_is_an_involution(m in 1usize..=8) {
        let g = grover(m).unwrap();
        let sq = &g * &g;
        for r in 0..m {
            for c in 0..m {
                let want = if r == c { 1.0 } else { 0.0 };
                prop_assert!((sq[(r, c)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn faces_do_not_depend_on_the_representative(k in 3usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w: Vec<usize> = (0..k).map(|i| 10 * i + rng.gen_range(0..10)).collect();
        w.shuffle(&mut rng);
        let s = OrientedSimplex::from_ordering(&w).unwrap();
        // an even permutation: two transpositions
        let mut v = w.clone();
        v.swap(0, 1);
        v.swap(1, 2);
        let t = OrientedSimplex::from_ordering(&v).unwrap();
        prop_assert_eq!(&s, &t);
        prop_assert_eq!(s.induced_primary_faces().unwrap(), t.induced_primary_faces().unwrap());
        // an odd one flips the class
        let mut odd = w.clone();
        odd.swap(0, k - 1);
        prop_assert_eq!(OrientedSimplex::from_ordering(&odd).unwrap(), s.opposite());
    }

    #[test]
    fn clique_complex_facets_are_maximal_cliques(vertices in 2usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize)> = (0..vertices)
            .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let g = SimpleGraph::new(vertices, edges).unwrap();
        let x = clique_complex(&g).unwrap();
        for f in x.facets() {
            let vs = f.vertices();
            for a in 0..vs.len() {
                for b in a + 1..vs.len() {
                    prop_assert!(g.has_edge(vs[a], vs[b]));
                }
            }
            for extra in 0..vertices {
                if f.position_of(extra).is_none() {
                    prop_assert!(!vs.iter().all(|&v| g.has_edge(v, extra)));
                }
            }
        }
        prop_assert_eq!(x.count(1), g.edge_count());
    }

    #[test]
    fn relabeled_spheres_stay_orientable(n in 2usize..6, seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..n + 2).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let s = relabeled(&sphere_triangulation(n).unwrap(), &perm);
        let o = s.find_orientation().unwrap();
        prop_assert!(o.assignment().unwrap().is_valid(&s).unwrap());
    }

    #[test]
    fn search_trace_is_invariant_under_relabeling(n in 2usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sphere_triangulation(n).unwrap();
        let m = MarkedFace::from_facets(&s, 0, 1).unwrap();
        let mut perm: Vec<usize> = (0..n + 2).collect();
        perm.shuffle(&mut rng);
        let s2 = relabeled(&s, &perm);
        let face2 = simplicial_walk::complex::Simplex::new(m.face().vertices().iter().map(|&v| perm[v]));
        let m2 = MarkedFace::from_face(&s2, &face2).unwrap();
        let t_max = 3 * (n + 2);
        let a = run_search(&s, &m, t_max).unwrap();
        let b = run_search(&s2, &m2, t_max).unwrap();
        prop_assert_eq!(a.t_f, b.t_f);
        for (x, y) in a.p_f.iter().zip(&b.p_f) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn search_operator_conjugacy_for_any_marked_pair(n in 2usize..4, i in 0usize..5, j in 0usize..5) {
        prop_assume!(i != j && i < n + 2 && j < n + 2);
        let s = sphere_triangulation(n).unwrap();
        let setting = DuplicationSetting::new(&s).unwrap();
        let m = MarkedFace::from_facets(&s, i, j).unwrap();
        let u = build_search_operator(&setting.pair_space, Some(&m)).unwrap();
        let g = deformed_graph(&s, &m).unwrap();
        prop_assert!(conjugation_deviation(&u, &gamma_star(&g).unwrap(), &setting.w).unwrap() < 1e-12);
    }

    #[test]
    fn intertwiner_preserves_norm(n in 2usize..5, seed in any::<u64>()) {
        let setting = DuplicationSetting::new(&sphere_triangulation(n).unwrap()).unwrap();
        let psi = random_unit_state(setting.w.dim(), seed);
        let there = setting.w.apply(&psi).unwrap();
        prop_assert!((there.norm() - 1.0).abs() < 1e-12);
        prop_assert_eq!(setting.w.apply_inverse(&there).unwrap(), psi);
    }
}

#[test]
fn norm_drift_over_ten_thousand_steps() {
    let ps = PairSpace::new(&sphere_triangulation(4).unwrap()).unwrap();
    let u = build_grover_sqw(&ps).unwrap();
    let psi = evolve(&u, &random_unit_state(ps.len(), 7), 10_000).unwrap();
    assert!((psi.norm() - 1.0).abs() < 1e-10);

    let s = sphere_triangulation(10).unwrap();
    let m = MarkedFace::from_facets(&s, 3, 7).unwrap();
    let g = gamma_star(&deformed_graph(&s, &m).unwrap()).unwrap();
    let phi = evolve(&g, &random_unit_state(g.dim(), 9), 10_000).unwrap();
    assert!((phi.norm() - 1.0).abs() < 1e-10);
}
