//! Simplicial quantum walks on oriented simplicial complexes.
//!
//! The crate builds the walk on pairs of facets and their induced primary
//! faces, relates it to coined Grover walks on duplication graphs, and
//! runs the marked-face search on sphere triangulations together with the
//! spectral analysis that predicts its running time.

pub mod complex;
pub mod error;
pub mod graph;
pub mod search;
pub mod spectral;
pub mod walk;

pub use complex::{
    clique_complex, sphere_triangulation, Obstruction, Orientability, OrientationAssignment,
    OrientedSimplex, Parity, Sign, SimpleGraph, Simplex, SimplicialComplex,
};
pub use error::{Error, Result};
pub use walk::{
    build_grover_sqw, build_sqw, distribution, evolve, face_distribution, grover, BlockUnitary,
    LocalUnitary, PairSpace, Stage, StateVector,
};
pub use graph::{
    associated_graph, attach_bunches, coined_walk, duplication, induced_bipartite, intertwiner_w,
    subdivision, verify_equivalence, verify_isomorphism, DirectedMultigraph, Intertwiner, VertexTag,
};
pub use search::{
    build_search_operator, deformed_graph, gamma_star, run_search, run_sphere_search,
    uniform_state, MarkedFace, SearchTrace,
};
pub use spectral::{
    discriminant, eigen_check, lift_partial, mu1_closed_form, overlaps, predicted_tf,
    spectral_map_check, symmetric_eigen, Discriminant, EigenCheck, Overlaps, SpectralMapReport,
};
