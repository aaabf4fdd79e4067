//! Marked-face search: the perturbed walk U_*, the deformed duplication graph
//! G_*, the reduced walk Γ̂_* = Ĉ Ŝ_*, and the finding-probability trace.

use crate::complex::{sphere_triangulation, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::{associated_graph, coin_stage, duplication, shift_stage, DirectedMultigraph};
use crate::walk::{build_sqw, evolve_with, BlockUnitary, LocalUnitary, PairSpace, StateVector};

/// The marked (n−1)-simplex τ_* and its two cofacets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedFace {
    face: Simplex,
    face_index: usize,
    cofacets: (usize, usize),
}

impl MarkedFace {
    /// τ_* = |σ_i| ∩ |σ_j| for two adjacent facets.
    pub fn from_facets(complex: &SimplicialComplex, i: usize, j: usize) -> Result<Self> {
        let count = complex.facets().len();
        for index in [i, j] {
            if index >= count {
                return Err(Error::FacetIndex { index, count });
            }
        }
        if i == j {
            return Err(Error::NotAdjacent(i, j));
        }
        let face = complex.facets()[i].intersection(&complex.facets()[j]);
        if face.len() != complex.dim() {
            return Err(Error::NotAdjacent(i, j));
        }
        Self::from_face(complex, &face)
    }

    pub fn from_face(complex: &SimplicialComplex, face: &Simplex) -> Result<Self> {
        let inc = complex.primary_faces()?;
        let found = inc
            .faces()
            .iter()
            .enumerate()
            .find(|(_, f)| f.support(complex) == *face);
        let (face_index, pf) = found.ok_or_else(|| Error::NotInComplex(face.clone()))?;
        match pf.cofacets() {
            [(a, _), (b, _)] => Ok(MarkedFace {
                face: face.clone(),
                face_index,
                cofacets: (*a, *b),
            }),
            other => Err(Error::MarkedCofaceCount {
                face: face.clone(),
                cofaces: other.len(),
            }),
        }
    }

    pub fn face(&self) -> &Simplex {
        &self.face
    }

    /// Position of τ_* in the complex's primary-face order.
    pub fn face_index(&self) -> usize {
        self.face_index
    }

    /// (|σ_*|, |σ_*′|), smaller facet index first.
    pub fn cofacets(&self) -> (usize, usize) {
        self.cofacets
    }
}

/// U_* = F̂ ∘ Ê_*: flips on unmarked E blocks, −I on the marked ones, and
/// grover(n+1) on every F block. With no mark this is the plain walk.
pub fn build_search_operator(ps: &PairSpace, marked: Option<&MarkedFace>) -> Result<BlockUnitary> {
    let e: Vec<LocalUnitary> = ps
        .e_keys()
        .iter()
        .zip(ps.e_blocks())
        .map(|(&(face, _), block)| match marked {
            Some(m) if m.face_index == face => LocalUnitary::minus_identity(),
            _ => LocalUnitary::Grover(block.len()),
        })
        .collect();
    let f: Vec<LocalUnitary> = ps.f_blocks().iter().map(|b| LocalUnitary::Grover(b.len())).collect();
    build_sqw(ps, &e, &f)
}

/// The four arcs of D∘G_a(K) crossing τ_*:
/// φσ*′→σ*, σ*→φσ*′, φσ*→σ*′, σ*′→φσ*.
pub fn marked_arcs(dup: &DirectedMultigraph, marked: &MarkedFace) -> Result<[usize; 4]> {
    let m = dup.vertex_count() / 2;
    let (i, j) = marked.cofacets;
    let find = |o: usize, t: usize| {
        dup.find_arc(o, t)
            .ok_or_else(|| Error::MalformedGraph(format!("no arc {o} -> {t}")))
    };
    Ok([find(m + j, i)?, find(i, m + j)?, find(m + i, j)?, find(j, m + i)?])
}

/// G_*: D∘G_a(K) with the four arcs across τ_* turned into self loops at
/// their termini σ*, φσ*′, σ*′, φσ*. Arc indices are those of D∘G_a(K).
pub fn deformed_graph(complex: &SimplicialComplex, marked: &MarkedFace) -> Result<DirectedMultigraph> {
    let boundary = complex.boundary_faces()?.len();
    if boundary > 0 {
        return Err(Error::HasBoundary(boundary));
    }
    let mut g = duplication(&associated_graph(complex)?)?;
    let arcs = marked_arcs(&g, marked)?;
    g.rewire_as_loops(&arcs)?;
    Ok(g)
}

/// Γ̂_* = Ĉ Ŝ_* with Grover coins of size deg u at every vertex.
pub fn gamma_star(graph: &DirectedMultigraph) -> Result<BlockUnitary> {
    BlockUnitary::new(graph.arc_count(), vec![shift_stage(graph), coin_stage(graph, None)?])
}

/// ψ_IN: all amplitudes 1/√dim.
pub fn uniform_state(dim: usize) -> StateVector {
    StateVector::uniform(dim)
}

/// First t ≥ 1 with p(t−1) < p(t) ≥ p(t+1).
pub fn first_local_maximum(p: &[f64]) -> Option<usize> {
    (1..p.len().saturating_sub(1)).find(|&t| p[t] > p[t - 1] && p[t] >= p[t + 1])
}

/// Finding-probability trace of a search run.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrace {
    pub n: usize,
    /// Number of (n−1)-simplices.
    pub face_count: usize,
    pub marked: (usize, usize),
    /// p_f(t) for t = 0..=t_max.
    pub p_f: Vec<f64>,
    /// |ψ_t(a)|² on each loop arc, in arc order, for every t.
    pub loop_probabilities: Vec<Vec<f64>>,
    /// Terminus of each loop arc.
    pub loop_vertices: Vec<usize>,
    pub t_f: usize,
    /// max_t |‖ψ_t‖² − 1|.
    pub max_norm_drift: f64,
}

impl SearchTrace {
    pub fn t_max(&self) -> usize {
        self.p_f.len() - 1
    }

    pub fn p_at_tf(&self) -> f64 {
        self.p_f[self.t_f]
    }

    pub fn loops_at_tf(&self) -> &[f64] {
        &self.loop_probabilities[self.t_f]
    }
}

/// Evolves ψ_IN under Γ̂_* for `t_max` steps and locates t_f.
pub fn run_search(complex: &SimplicialComplex, marked: &MarkedFace, t_max: usize) -> Result<SearchTrace> {
    let g = deformed_graph(complex, marked)?;
    let gamma = gamma_star(&g)?;
    let loops = g.self_loops();
    let loop_vertices = loops.iter().map(|&a| g.arcs()[a].terminus).collect();
    let mut p_f = Vec::with_capacity(t_max + 1);
    let mut loop_probabilities = Vec::with_capacity(t_max + 1);
    let mut drift: f64 = 0.0;
    evolve_with(&gamma, &uniform_state(g.arc_count()), t_max, |_, v| {
        let probs: Vec<f64> = loops.iter().map(|&a| v[a].norm_sqr()).collect();
        p_f.push(probs.iter().sum());
        loop_probabilities.push(probs);
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        drift = drift.max((norm - 1.0).abs());
    })?;
    let t_f = first_local_maximum(&p_f).ok_or(Error::NoLocalMaximum(t_max))?;
    Ok(SearchTrace {
        n: complex.dim(),
        face_count: complex.primary_faces()?.faces().len(),
        marked: marked.cofacets,
        p_f,
        loop_probabilities,
        loop_vertices,
        t_f,
        max_norm_drift: drift,
    })
}

/// Search on the sphere triangulation of dimension `n` with τ_* = |σ_i| ∩ |σ_j|.
/// `t_max` defaults to ⌈2·predicted t_f⌉.
pub fn run_sphere_search(n: usize, i: usize, j: usize, t_max: Option<usize>) -> Result<SearchTrace> {
    let complex = sphere_triangulation(n)?;
    let marked = MarkedFace::from_facets(&complex, i, j)?;
    let t_max = match t_max {
        Some(t) => t,
        None => default_t_max(n)?,
    };
    run_search(&complex, &marked, t_max)
}

/// ⌈2·predicted t_f(n)⌉.
pub fn default_t_max(n: usize) -> Result<usize> {
    Ok((2.0 * crate::spectral::predicted_tf(n)?).ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{coined_walk, conjugation_deviation, DuplicationSetting};
    use crate::walk::{build_grover_sqw, distribution};

    #[test]
    fn marked_face_resolution() {
        let s = sphere_triangulation(3).unwrap();
        let m = MarkedFace::from_facets(&s, 1, 3).unwrap();
        // facet i omits vertex 4 - i
        assert_eq!(m.face(), &Simplex::new([0, 2, 4]));
        assert_eq!(m.cofacets(), (1, 3));
        assert_eq!(MarkedFace::from_face(&s, &Simplex::new([0, 2, 4])).unwrap(), m);
        assert_eq!(MarkedFace::from_facets(&s, 2, 2).unwrap_err(), Error::NotAdjacent(2, 2));
        assert_eq!(
            MarkedFace::from_facets(&s, 0, 9).unwrap_err(),
            Error::FacetIndex { index: 9, count: 5 }
        );
        assert_eq!(
            MarkedFace::from_face(&s, &Simplex::new([0, 1, 9])).unwrap_err(),
            Error::NotInComplex(Simplex::new([0, 1, 9]))
        );
        let tri = SimplicialComplex::from_facets([[0, 1, 2]]).unwrap();
        assert!(matches!(
            MarkedFace::from_face(&tri, &Simplex::new([0, 1])),
            Err(Error::MarkedCofaceCount { cofaces: 1, .. })
        ));
    }

    #[test]
    fn unmarked_operator_is_the_plain_walk() {
        let ps = PairSpace::new(&sphere_triangulation(3).unwrap()).unwrap();
        assert_eq!(build_search_operator(&ps, None).unwrap(), build_grover_sqw(&ps).unwrap());
    }

    #[test]
    fn marked_blocks_are_minus_identity() {
        let s = sphere_triangulation(2).unwrap();
        let ps = PairSpace::new(&s).unwrap();
        let m = MarkedFace::from_facets(&s, 0, 1).unwrap();
        let u = build_search_operator(&ps, Some(&m)).unwrap();
        let e_stage = &u.stages()[0];
        let mut marked = 0;
        if let crate::walk::Stage::Blocks(blocks) = e_stage {
            for (k, (_, coin)) in blocks.iter().enumerate() {
                if ps.e_keys()[k].0 == m.face_index() {
                    assert_eq!(*coin, LocalUnitary::minus_identity());
                    marked += 1;
                } else {
                    assert_eq!(*coin, LocalUnitary::flip());
                }
            }
        }
        assert_eq!(marked, 2);
        let psi = StateVector::basis(ps.len(), 3);
        assert!((u.apply(&psi).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deformed_graph_shape() {
        for n in 2..=6 {
            let s = sphere_triangulation(n).unwrap();
            let m = MarkedFace::from_facets(&s, 0, 1).unwrap();
            let g = deformed_graph(&s, &m).unwrap();
            assert_eq!(g.vertex_count(), 2 * (n + 2));
            assert_eq!(g.arc_count(), 2 * (n + 1) * (n + 2));
            assert_eq!(g.self_loops().len(), 4);
            for v in 0..g.vertex_count() {
                assert_eq!(g.in_degree(v), n + 1);
                assert_eq!(g.out_degree(v), n + 1);
            }
        }
    }

    #[test]
    fn loops_sit_at_the_marked_facets_and_their_copies() {
        let s = sphere_triangulation(4).unwrap();
        let m = MarkedFace::from_facets(&s, 2, 4).unwrap();
        let g = deformed_graph(&s, &m).unwrap();
        let mut at: Vec<usize> = g.self_loops().iter().map(|&a| g.arcs()[a].terminus).collect();
        at.sort_unstable();
        assert_eq!(at, vec![2, 4, 8, 10]);
    }

    #[test]
    fn unmarked_gamma_star_matches_transposed_coined_walk() {
        let s = sphere_triangulation(3).unwrap();
        let d = duplication(&associated_graph(&s).unwrap()).unwrap();
        let a = gamma_star(&d).unwrap().to_dense();
        let b = coined_walk(&d, None).unwrap().transpose().to_dense();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn search_operator_is_conjugate_to_gamma_star() {
        for n in 2..=3 {
            let s = sphere_triangulation(n).unwrap();
            let setting = DuplicationSetting::new(&s).unwrap();
            for (i, j) in [(0, 1), (1, 3)] {
                let m = MarkedFace::from_facets(&s, i, j).unwrap();
                let u = build_search_operator(&setting.pair_space, Some(&m)).unwrap();
                let g = deformed_graph(&s, &m).unwrap();
                let dev = conjugation_deviation(&u, &gamma_star(&g).unwrap(), &setting.w).unwrap();
                assert!(dev < 1e-12, "n = {n}: {dev}");
            }
        }
    }

    #[test]
    fn uniform_state_entries() {
        let psi = uniform_state(24);
        let expected = 1.0 / (2.0 * 6f64.sqrt());
        assert!(psi.amplitudes().iter().all(|a| (a.re - expected).abs() < 1e-15 && a.im == 0.0));
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn initial_finding_probability_is_one_over_n() {
        for n in 2..=6 {
            let t = run_sphere_search(n, 0, 1, Some(20)).unwrap();
            let big_n = ((n + 1) * (n + 2) / 2) as f64;
            assert!((t.p_f[0] - 1.0 / big_n).abs() < 1e-14);
            assert_eq!(t.face_count as f64, big_n);
            assert!(t.max_norm_drift < 1e-12);
        }
    }

    #[test]
    fn finding_probability_equals_marked_face_mass() {
        // p_f on arcs equals μ(τ_*) for the pair-space evolution of U_*
        let s = sphere_triangulation(3).unwrap();
        let m = MarkedFace::from_facets(&s, 0, 2).unwrap();
        let ps = PairSpace::new(&s).unwrap();
        let u = build_search_operator(&ps, Some(&m)).unwrap();
        let trace = run_search(&s, &m, 12).unwrap();
        let mut psi = uniform_state(ps.len());
        for t in 0..=12 {
            let mu = distribution(&psi, &ps).unwrap();
            assert!((mu[m.face()] - trace.p_f[t]).abs() < 1e-12);
            psi = u.apply(&psi).unwrap();
        }
    }

    #[test]
    fn local_maximum_detection() {
        assert_eq!(first_local_maximum(&[0.1, 0.2, 0.3, 0.2]), Some(2));
        assert_eq!(first_local_maximum(&[0.1, 0.3, 0.3, 0.2]), Some(1));
        assert_eq!(first_local_maximum(&[0.1, 0.2, 0.3]), None);
        assert_eq!(first_local_maximum(&[0.3, 0.2, 0.1, 0.4, 0.0]), Some(3));
    }

    #[test]
    fn too_short_a_run_is_reported() {
        assert_eq!(run_sphere_search(20, 0, 1, Some(3)).unwrap_err(), Error::NoLocalMaximum(3));
    }

    #[test]
    fn boundary_is_rejected() {
        let glued = SimplicialComplex::from_facets([[0, 1, 2], [1, 2, 3]]).unwrap();
        let m = MarkedFace::from_facets(&glued, 0, 1).unwrap();
        assert_eq!(deformed_graph(&glued, &m).unwrap_err(), Error::HasBoundary(4));
    }
}
