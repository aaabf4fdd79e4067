//! Graphs derived from a complex and the unitary equivalences between the
//! simplicial walk, bipartite walks, and coined walks.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::Serialize;

use crate::complex::{Orientability, OrientationAssignment, Parity, Sign, SimpleGraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::walk::{build_grover_sqw, BlockUnitary, LocalUnitary, PairSpace, Stage, StateVector};

/// What a vertex stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VertexTag {
    /// An original vertex (a facet, for graphs built from a complex).
    Plain(usize),
    /// The copy φ(u) in a duplication graph.
    Copy(usize),
    /// The subdivision vertex of the edge between two vertex ids.
    Edge(usize, usize),
    /// A pendant vertex standing for a boundary face.
    Bunch { anchor: usize, face: usize },
    /// An E_τ block of a pair space.
    FaceBlock(usize),
    /// An F_σ block of a pair space.
    FacetBlock(usize),
}

/// A directed arc. Parallel arcs between the same endpoints are told apart
/// by `multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub origin: usize,
    pub terminus: usize,
    pub multiplicity: usize,
    pub self_loop: bool,
}

/// A directed multigraph whose arcs come in inverse pairs, except for self
/// loops, which have no inverse and satisfy t(a) = o(a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedMultigraph {
    tags: Vec<VertexTag>,
    arcs: Vec<Arc>,
    inverse: Vec<Option<usize>>,
}

#[derive(Serialize)]
struct EdgeListView<'a> {
    vertices: &'a [VertexTag],
    edges: Vec<[usize; 2]>,
    self_loops: Vec<usize>,
}

impl DirectedMultigraph {
    /// Symmetric arc set of an undirected multigraph without loops. Arcs are
    /// ordered by (origin, terminus, multiplicity).
    pub fn from_edges(tags: Vec<VertexTag>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = tags.len();
        let mut raw = Vec::with_capacity(2 * edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::MalformedGraph(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::MalformedGraph(format!("loop at {u} in an undirected edge list")));
            }
            raw.push((u, v));
            raw.push((v, u));
        }
        raw.sort_unstable();
        let mut arcs = Vec::with_capacity(raw.len());
        for (k, &(o, t)) in raw.iter().enumerate() {
            let multiplicity = if k > 0 && raw[k - 1] == (o, t) {
                arcs.last().map_or(0, |a: &Arc| a.multiplicity + 1)
            } else {
                0
            };
            arcs.push(Arc {
                origin: o,
                terminus: t,
                multiplicity,
                self_loop: false,
            });
        }
        let mut g = DirectedMultigraph {
            tags,
            arcs,
            inverse: Vec::new(),
        };
        g.rebuild_inverse();
        Ok(g)
    }

    pub fn from_simple(graph: &SimpleGraph) -> Self {
        let tags = (0..graph.vertex_count()).map(VertexTag::Plain).collect();
        let edges: Vec<(usize, usize)> = graph.edges().collect();
        Self::from_edges(tags, &edges).expect("simple graphs have valid edges")
    }

    fn rebuild_inverse(&mut self) {
        let index: HashMap<(usize, usize, usize), usize> = self
            .arcs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.self_loop)
            .map(|(i, a)| ((a.origin, a.terminus, a.multiplicity), i))
            .collect();
        self.inverse = self
            .arcs
            .iter()
            .map(|a| {
                if a.self_loop {
                    None
                } else {
                    index.get(&(a.terminus, a.origin, a.multiplicity)).copied()
                }
            })
            .collect();
    }

    /// Turns each listed arc into a self loop at its terminus. Arc indices are
    /// kept; the former inverses of the rewired arcs must be rewired too.
    pub fn rewire_as_loops(&mut self, arcs: &[usize]) -> Result<()> {
        for &a in arcs {
            if a >= self.arcs.len() {
                return Err(Error::MalformedGraph(format!("no arc {a}")));
            }
            let arc = &mut self.arcs[a];
            arc.origin = arc.terminus;
            arc.self_loop = true;
        }
        self.rebuild_inverse();
        if let Some(a) = (0..self.arcs.len()).find(|&a| !self.arcs[a].self_loop && self.inverse[a].is_none()) {
            return Err(Error::MalformedGraph(format!("arc {a} lost its inverse")));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.tags.len()
    }

    pub fn tags(&self) -> &[VertexTag] {
        &self.tags
    }

    pub fn tag(&self, v: usize) -> VertexTag {
        self.tags[v]
    }

    pub fn vertex_of(&self, tag: VertexTag) -> Option<usize> {
        self.tags.iter().position(|&t| t == tag)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// ā, or `None` for a self loop.
    pub fn inverse(&self, a: usize) -> Option<usize> {
        self.inverse[a]
    }

    pub fn find_arc(&self, origin: usize, terminus: usize) -> Option<usize> {
        self.arcs
            .binary_search_by(|a| (a.origin, a.terminus).cmp(&(origin, terminus)))
            .ok()
            .or_else(|| {
                self.arcs
                    .iter()
                    .position(|a| a.origin == origin && a.terminus == terminus)
            })
    }

    pub fn self_loops(&self) -> Vec<usize> {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].self_loop).collect()
    }

    /// Arc indices grouped by terminus, one list per vertex.
    pub fn terminus_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.tags.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            blocks[a.terminus].push(i);
        }
        blocks
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.terminus == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.origin == v).count()
    }

    /// One `(origin, terminus)` per inverse pair, taken from the arc with the
    /// smaller index. Self loops are excluded.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .enumerate()
            .filter(|(i, a)| !a.self_loop && self.inverse[*i].is_some_and(|j| j > *i))
            .map(|(_, a)| (a.origin, a.terminus))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_simple(&self) -> bool {
        self.arcs.iter().all(|a| a.multiplicity == 0 && !a.self_loop)
    }

    /// Two-colours the graph if possible (self loops make it non-bipartite).
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        if self.arcs.iter().any(|a| a.self_loop) {
            return None;
        }
        let mut adj = vec![Vec::new(); self.tags.len()];
        for a in &self.arcs {
            adj[a.origin].push(a.terminus);
        }
        let mut colour: Vec<Option<bool>> = vec![None; self.tags.len()];
        for s in 0..self.tags.len() {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = colour[u].expect("coloured before push");
                for &v in &adj[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.expect("all coloured")).collect())
    }

    /// Edge list JSON: `{"vertices": [...], "edges": [[u, v], ...], "self_loops": [v, ...]}`.
    pub fn to_edge_list_json(&self) -> String {
        let view = EdgeListView {
            vertices: &self.tags,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            self_loops: self.self_loops().into_iter().map(|a| self.arcs[a].terminus).collect(),
        };
        serde_json::to_string(&view).expect("edge lists always serialize")
    }
}

/// G_∩: X_E (one vertex per E_τ block) followed by X_F (one per F_σ block),
/// with one edge F_σE_τ per pair.
pub fn induced_bipartite(ps: &PairSpace) -> DirectedMultigraph {
    let ne = ps.e_blocks().len();
    let tags = (0..ne)
        .map(VertexTag::FaceBlock)
        .chain((0..ps.f_blocks().len()).map(VertexTag::FacetBlock))
        .collect();
    let edges: Vec<(usize, usize)> = (0..ps.len()).map(|i| (ps.e_block_of(i), ne + f_block_of(ps, i))).collect();
    DirectedMultigraph::from_edges(tags, &edges).expect("pair indices are in range")
}

fn f_block_of(ps: &PairSpace, i: usize) -> usize {
    i / (ps.dim() + 1)
}

/// G_a: one vertex per facet, joined when two facets share a primary face.
pub fn associated_graph(complex: &SimplicialComplex) -> Result<DirectedMultigraph> {
    let inc = complex.primary_faces()?;
    let mut edges: Vec<(usize, usize)> = inc.adjacent_pairs().into_iter().map(|(i, j, _)| (i, j)).collect();
    edges.dedup();
    let tags = (0..complex.facets().len()).map(VertexTag::Plain).collect();
    DirectedMultigraph::from_edges(tags, &edges)
}

/// D(G) on V ⊔ φ(V): vertex `u` keeps its id, φ(u) is `|V| + u`, and each
/// edge uv becomes uφ(v) and vφ(u).
pub fn duplication(graph: &DirectedMultigraph) -> Result<DirectedMultigraph> {
    if !graph.is_simple() {
        return Err(Error::MalformedGraph("duplication needs a simple graph".into()));
    }
    let m = graph.vertex_count();
    let tags = (0..m).map(VertexTag::Plain).chain((0..m).map(VertexTag::Copy)).collect();
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .into_iter()
        .flat_map(|(u, v)| [(u, m + v), (v, m + u)])
        .collect();
    DirectedMultigraph::from_edges(tags, &edges)
}

/// S(G): original vertices keep their ids and tags, then one vertex per edge
/// (in [`DirectedMultigraph::edges`] order) joined to both endpoints.
pub fn subdivision(graph: &DirectedMultigraph) -> Result<DirectedMultigraph> {
    if graph.arcs().iter().any(|a| a.self_loop) {
        return Err(Error::MalformedGraph("subdivision of a graph with self loops".into()));
    }
    let base = graph.vertex_count();
    let mut tags = graph.tags().to_vec();
    let mut edges = Vec::new();
    for (k, (u, v)) in graph.edges().into_iter().enumerate() {
        tags.push(VertexTag::Edge(u, v));
        edges.push((u, base + k));
        edges.push((v, base + k));
    }
    DirectedMultigraph::from_edges(tags, &edges)
}

/// The "• B_{n−1}" operation: for every boundary face of facet i, one
/// pendant vertex at Plain(i) and one at Copy(i).
pub fn attach_bunches(graph: &DirectedMultigraph, complex: &SimplicialComplex) -> Result<DirectedMultigraph> {
    let inc = complex.primary_faces()?;
    let mut tags = graph.tags().to_vec();
    let mut edges = graph.edges();
    for (f, face) in inc.faces().iter().enumerate() {
        if face.coface_count() != 1 {
            continue;
        }
        let facet = face.cofacets()[0].0;
        for tag in [VertexTag::Plain(facet), VertexTag::Copy(facet)] {
            let anchor = graph
                .vertex_of(tag)
                .ok_or_else(|| Error::MalformedGraph(format!("no vertex tagged {tag:?}")))?;
            tags.push(VertexTag::Bunch { anchor, face: f });
            edges.push((anchor, tags.len() - 1));
        }
    }
    DirectedMultigraph::from_edges(tags, &edges)
}

/// A signed index bijection: `(Wψ)[target[i]] = phase[i]·ψ[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Intertwiner {
    target: Vec<usize>,
    phase: Vec<f64>,
}

impl Intertwiner {
    pub fn new(target: Vec<usize>, phase: Vec<f64>) -> Result<Self> {
        let n = target.len();
        let mut seen = vec![false; n];
        for &t in &target {
            if t >= n || seen[t] {
                return Err(Error::NotAPartition(n));
            }
            seen[t] = true;
        }
        if phase.len() != n || phase.iter().any(|p| (p.abs() - 1.0).abs() > 1e-12) {
            return Err(Error::NotAPartition(n));
        }
        Ok(Intertwiner { target, phase })
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.check(psi)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, a) in psi.amplitudes().iter().enumerate() {
            out[self.target[i]] = a * self.phase[i];
        }
        Ok(StateVector::new(out))
    }

    pub fn apply_inverse(&self, phi: &StateVector) -> Result<StateVector> {
        self.check(phi)?;
        let out = (0..self.dim())
            .map(|i| phi.amplitudes()[self.target[i]] * self.phase[i])
            .collect();
        Ok(StateVector::new(out))
    }

    fn check(&self, psi: &StateVector) -> Result<()> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        Ok(())
    }
}

/// Result of the constructive isomorphism check.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub holds: bool,
    /// `xi[v]` is the G_∩ vertex assigned to vertex `v` of S∘D∘G_a(K) • B.
    pub xi: Vec<usize>,
    pub source: DirectedMultigraph,
    pub target: DirectedMultigraph,
}

fn orientation_of(complex: &SimplicialComplex) -> Result<OrientationAssignment> {
    match complex.find_orientation()? {
        Orientability::Orientable(a) => Ok(a),
        Orientability::NonOrientable(_) => Err(Error::NotOrientable),
    }
}

fn parity_of(orientation: &OrientationAssignment, facet: usize, sign: Sign) -> Parity {
    let p = orientation.parities()[facet];
    match sign {
        Sign::Plus => p,
        Sign::Minus => p.flip(),
    }
}

fn parity_slot(p: Parity) -> usize {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

/// Sorted position, within facet `i`, of the vertex missing from facet `j`.
fn omitted_position(complex: &SimplicialComplex, i: usize, j: usize) -> Result<usize> {
    let (a, b) = (&complex.facets()[i], &complex.facets()[j]);
    let missing: Vec<usize> = (0..a.len()).filter(|&p| b.position_of(a.vertices()[p]).is_none()).collect();
    match missing.as_slice() {
        [p] if a.len() == b.len() => Ok(*p),
        _ => Err(Error::NotAdjacent(i, j)),
    }
}

/// Builds ξ: S∘D∘G_a(K) • B_{n−1} → G_∩(K^{n,n−1}) for an orientable,
/// strongly connected complex and checks that it is a graph isomorphism.
pub fn verify_isomorphism(complex: &SimplicialComplex) -> Result<Isomorphism> {
    let orientation = orientation_of(complex)?;
    verify_isomorphism_with(complex, &orientation)
}

pub fn verify_isomorphism_with(complex: &SimplicialComplex, orientation: &OrientationAssignment) -> Result<Isomorphism> {
    if !orientation.is_valid(complex)? {
        return Err(Error::NotOrientable);
    }
    let ps = PairSpace::new(complex)?;
    let target = induced_bipartite(&ps);
    let source = attach_bunches(&subdivision(&duplication(&associated_graph(complex)?)?)?, complex)?;
    let ne = ps.e_blocks().len();
    let e_lookup: HashMap<(usize, Parity), usize> =
        ps.e_keys().iter().enumerate().map(|(b, &k)| (k, b)).collect();
    let inc = ps.incidence();
    let facet_vertex = |tag: VertexTag| -> Option<(usize, Sign)> {
        match tag {
            VertexTag::Plain(i) => Some((i, Sign::Plus)),
            VertexTag::Copy(i) => Some((i, Sign::Minus)),
            _ => None,
        }
    };
    // E block of the face dropping `pos` from facet i, oriented by (|σ_i|, sign).
    let face_block = |i: usize, sign: Sign, pos: usize| -> Result<usize> {
        let key = (
            inc.face_of(i, pos),
            parity_of(orientation, i, sign).compose(Parity::from_transpositions(pos)),
        );
        e_lookup
            .get(&key)
            .copied()
            .ok_or_else(|| Error::MalformedGraph(format!("no E block for {key:?}")))
    };
    let mut xi = Vec::with_capacity(source.vertex_count());
    for &tag in source.tags() {
        let image = match tag {
            VertexTag::Plain(_) | VertexTag::Copy(_) => {
                let (i, sign) = facet_vertex(tag).expect("facet tag");
                ne + 2 * i + parity_slot(parity_of(orientation, i, sign))
            }
            VertexTag::Edge(u, v) => {
                let (i, si) = facet_vertex(source.tag(u))
                    .ok_or_else(|| Error::MalformedGraph(format!("edge vertex on {u}")))?;
                let (j, _) = facet_vertex(source.tag(v))
                    .ok_or_else(|| Error::MalformedGraph(format!("edge vertex on {v}")))?;
                face_block(i, si, omitted_position(complex, i, j)?)?
            }
            VertexTag::Bunch { anchor, face } => {
                let (i, sign) = facet_vertex(source.tag(anchor))
                    .ok_or_else(|| Error::MalformedGraph(format!("bunch anchored at {anchor}")))?;
                let pos = inc.faces()[face].cofacets()[0].1;
                face_block(i, sign, pos)?
            }
            other => return Err(Error::MalformedGraph(format!("unexpected vertex {other:?}"))),
        };
        xi.push(image);
    }
    let bijective = xi.len() == target.vertex_count() && {
        let mut seen = vec![false; xi.len()];
        xi.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
    };
    let normalize = |(u, v): (usize, usize)| (u.min(v), u.max(v));
    let mut mapped: Vec<(usize, usize)> = source.edges().into_iter().map(|(u, v)| normalize((xi[u], xi[v]))).collect();
    let mut expected: Vec<(usize, usize)> = target.edges().into_iter().map(normalize).collect();
    mapped.sort_unstable();
    expected.sort_unstable();
    Ok(Isomorphism {
        holds: bijective && mapped == expected,
        xi,
        source,
        target,
    })
}

/// The shift: (Sψ)(a) = ψ(ā), and −ψ(a) on self loops.
pub fn shift_stage(graph: &DirectedMultigraph) -> Stage {
    let source = (0..graph.arc_count()).map(|a| graph.inverse(a).unwrap_or(a)).collect();
    let sign = (0..graph.arc_count())
        .map(|a| if graph.inverse(a).is_some() { 1.0 } else { -1.0 })
        .collect();
    Stage::SignedPermutation { source, sign }
}

/// The coin: local unitaries on arcs grouped by terminus. Default is
/// grover(deg u) at every vertex.
pub fn coin_stage(graph: &DirectedMultigraph, coins: Option<&[LocalUnitary]>) -> Result<Stage> {
    let blocks = graph.terminus_blocks();
    if let Some(c) = coins {
        if c.len() != blocks.len() {
            return Err(Error::CoinCountMismatch {
                expected: blocks.len(),
                actual: c.len(),
            });
        }
    }
    Ok(Stage::Blocks(
        blocks
            .into_iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(u, b)| {
                let coin = coins.map_or(LocalUnitary::Grover(b.len()), |c| c[u].clone());
                (b, coin)
            })
            .collect(),
    ))
}

/// Γ̂ = Ŝ Ĉ on ℓ²(A).
pub fn coined_walk(graph: &DirectedMultigraph, coins: Option<&[LocalUnitary]>) -> Result<BlockUnitary> {
    BlockUnitary::new(graph.arc_count(), vec![coin_stage(graph, coins)?, shift_stage(graph)])
}

/// W: ℓ²(K^{n,n−1}) → ℓ²(A(D∘G_a(K))).
///
/// An arc into Plain(i) from Copy(j) carries ((|σ_i|,+), τ) and an arc into
/// Copy(i) from Plain(j) carries ((|σ_i|,−), τ'), where τ, τ' are the faces
/// of the shared (n−1)-simplex induced by those oriented facets.
pub fn intertwiner_w(ps: &PairSpace, orientation: &OrientationAssignment, dup: &DirectedMultigraph) -> Result<Intertwiner> {
    let complex = ps.complex();
    let boundary = complex.boundary_faces()?.len();
    if boundary > 0 {
        return Err(Error::HasBoundary(boundary));
    }
    if !orientation.is_valid(complex)? {
        return Err(Error::NotOrientable);
    }
    if dup.arc_count() != ps.len() {
        return Err(Error::DimensionMismatch {
            expected: ps.len(),
            actual: dup.arc_count(),
        });
    }
    let mut target = vec![usize::MAX; ps.len()];
    for (a, arc) in dup.arcs().iter().enumerate() {
        let (i, sign, j) = match (dup.tag(arc.terminus), dup.tag(arc.origin)) {
            (VertexTag::Plain(i), VertexTag::Copy(j)) => (i, Sign::Plus, j),
            (VertexTag::Copy(i), VertexTag::Plain(j)) => (i, Sign::Minus, j),
            (t, o) => return Err(Error::MalformedGraph(format!("arc {o:?} -> {t:?} in a duplication graph"))),
        };
        let pos = omitted_position(complex, i, j)?;
        let pair = ps.index_of(i, parity_of(orientation, i, sign), pos);
        if target[pair] != usize::MAX {
            return Err(Error::NotAPartition(ps.len()));
        }
        target[pair] = a;
    }
    Intertwiner::new(target, vec![1.0; ps.len()])
}

/// Everything needed to compare the simplicial walk with the coined walk on
/// the duplication graph of a boundaryless orientable complex.
#[derive(Clone, Debug)]
pub struct DuplicationSetting {
    pub pair_space: PairSpace,
    pub orientation: OrientationAssignment,
    pub duplication: DirectedMultigraph,
    pub w: Intertwiner,
}

impl DuplicationSetting {
    pub fn new(complex: &SimplicialComplex) -> Result<Self> {
        let orientation = orientation_of(complex)?;
        let pair_space = PairSpace::new(complex)?;
        let duplication = duplication(&associated_graph(complex)?)?;
        let w = intertwiner_w(&pair_space, &orientation, &duplication)?;
        Ok(DuplicationSetting {
            pair_space,
            orientation,
            duplication,
            w,
        })
    }
}

/// max over basis vectors e_i of max |(A e_i) − (W⁻¹ B W e_i)|.
pub fn conjugation_deviation(a: &BlockUnitary, b: &BlockUnitary, w: &Intertwiner) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..a.dim() {
        let e = StateVector::basis(a.dim(), i);
        let lhs = a.apply(&e)?;
        let rhs = w.apply_inverse(&b.apply(&w.apply(&e)?)?)?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Max elementwise deviation between Û and W⁻¹ Γᵀ W, both Grover driven.
pub fn verify_equivalence(complex: &SimplicialComplex) -> Result<f64> {
    let setting = DuplicationSetting::new(complex)?;
    let u = build_grover_sqw(&setting.pair_space)?;
    let gamma_t = coined_walk(&setting.duplication, None)?.transpose();
    conjugation_deviation(&u, &gamma_t, &setting.w)
}

/// Grover bipartite walk B′ = F′ ∘ E′ on the edges of a bipartite graph,
/// with E′ grouping edges by their `left` endpoint and F′ by the other.
pub fn bipartite_walk(edges: &[(usize, usize)], left: &[bool]) -> Result<BlockUnitary> {
    let mut x: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut y: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &(u, v)) in edges.iter().enumerate() {
        let (l, r) = match (left[u], left[v]) {
            (true, false) => (u, v),
            (false, true) => (v, u),
            _ => return Err(Error::MalformedGraph(format!("edge ({u}, {v}) is not across the bipartition"))),
        };
        x.entry(l).or_default().push(k);
        y.entry(r).or_default().push(k);
    }
    let stage = |m: BTreeMap<usize, Vec<usize>>| {
        Stage::Blocks(
            m.into_values()
                .map(|b| {
                    let g = LocalUnitary::Grover(b.len());
                    (b, g)
                })
                .collect(),
        )
    };
    BlockUnitary::new(edges.len(), vec![stage(x), stage(y)])
}

/// Deviation between Û and U_η⁻¹ B′ U_η, with B′ the Grover bipartite walk on
/// G_∩ and U_η sending a pair to its edge.
pub fn verify_bipartite_equivalence(ps: &PairSpace) -> Result<f64> {
    let g = induced_bipartite(ps);
    let ne = ps.e_blocks().len();
    let edges = g.edges();
    let left: Vec<bool> = (0..g.vertex_count()).map(|v| v < ne).collect();
    let b = bipartite_walk(&edges, &left)?;
    let edge_index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let target = (0..ps.len())
        .map(|i| edge_index[&(ps.e_block_of(i), ne + f_block_of(ps, i))])
        .collect();
    let eta = Intertwiner::new(target, vec![1.0; ps.len()])?;
    conjugation_deviation(&build_grover_sqw(ps)?, &b, &eta)
}

/// Deviation between the Grover coined walk Γ̂ on `graph` and V⁻¹ B̂ V, with
/// B̂ the bipartite walk on S(G) (Grover at original vertices, flip at
/// subdivision vertices) and (Vψ)(ue) = ψ(a) for t(a) = u, |a| = e.
pub fn verify_subdivision_equivalence(graph: &DirectedMultigraph) -> Result<f64> {
    let s = subdivision(graph)?;
    let base = graph.vertex_count();
    let edges = s.edges();
    let left: Vec<bool> = (0..s.vertex_count()).map(|v| v < base).collect();
    let b = bipartite_walk(&edges, &left)?;
    let edge_vertex: HashMap<(usize, usize), usize> = graph
        .edges()
        .into_iter()
        .enumerate()
        .flat_map(|(k, (u, v))| [((u, v), base + k), ((v, u), base + k)])
        .collect();
    let s_edge: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let target = graph
        .arcs()
        .iter()
        .map(|a| {
            let e = edge_vertex[&(a.origin, a.terminus)];
            s_edge[&(a.terminus, e)]
        })
        .collect();
    let v = Intertwiner::new(target, vec![1.0; graph.arc_count()])?;
    conjugation_deviation(&coined_walk(graph, None)?, &b, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{sphere_triangulation, SimpleGraph};
    use nalgebra::DMatrix;

    fn glued_triangles() -> SimplicialComplex {
        SimplicialComplex::from_facets([[0, 1, 2], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn induced_bipartite_counts() {
        let ps = PairSpace::new(&sphere_triangulation(2).unwrap()).unwrap();
        let g = induced_bipartite(&ps);
        assert_eq!(g.vertex_count(), 20);
        assert_eq!(g.edge_count(), 24);
        assert!(g.bipartition().is_some());
        for n in 2..=5 {
            let ps = PairSpace::new(&sphere_triangulation(n).unwrap()).unwrap();
            let g = induced_bipartite(&ps);
            assert_eq!(g.edge_count(), ps.len());
            let ne = ps.e_blocks().len();
            for v in ne..g.vertex_count() {
                assert_eq!(g.in_degree(v), n + 1);
            }
        }
    }

    #[test]
    fn associated_graph_examples() {
        for n in 2..=6 {
            let g = associated_graph(&sphere_triangulation(n).unwrap()).unwrap();
            assert_eq!(g, DirectedMultigraph::from_simple(&SimpleGraph::complete(n + 2)));
        }
        let g = associated_graph(&glued_triangles()).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn duplication_examples() {
        let k2 = DirectedMultigraph::from_simple(&SimpleGraph::complete(2));
        let d = duplication(&k2).unwrap();
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.edges(), vec![(0, 3), (1, 2)]);
        for k in 3..=8 {
            let g = DirectedMultigraph::from_simple(&SimpleGraph::complete(k));
            let d = duplication(&g).unwrap();
            assert_eq!(d.vertex_count(), 2 * k);
            assert_eq!(d.arc_count(), 4 * g.edge_count());
            assert!(d.bipartition().is_some());
        }
        let c5 = DirectedMultigraph::from_simple(&SimpleGraph::cycle(5).unwrap());
        assert!(c5.bipartition().is_none());
        assert!(duplication(&c5).unwrap().bipartition().is_some());
    }

    #[test]
    fn subdivision_examples() {
        let tri = DirectedMultigraph::from_simple(&SimpleGraph::complete(3));
        let s = subdivision(&tri).unwrap();
        assert_eq!(s.vertex_count(), 6);
        assert_eq!(s.edge_count(), 6);
        for v in 0..6 {
            assert_eq!(s.in_degree(v), 2);
        }
        let k5 = DirectedMultigraph::from_simple(&SimpleGraph::complete(5));
        let s = subdivision(&k5).unwrap();
        assert_eq!(s.vertex_count(), 5 + 10);
        assert_eq!(s.edge_count(), 20);
        assert!((5..15).all(|v| s.in_degree(v) == 2));
    }

    #[test]
    fn bunches() {
        let sphere = sphere_triangulation(3).unwrap();
        let sdg = subdivision(&duplication(&associated_graph(&sphere).unwrap()).unwrap()).unwrap();
        assert_eq!(attach_bunches(&sdg, &sphere).unwrap(), sdg);

        let glued = glued_triangles();
        let sdg = subdivision(&duplication(&associated_graph(&glued).unwrap()).unwrap()).unwrap();
        let b = attach_bunches(&sdg, &glued).unwrap();
        assert_eq!(b.vertex_count(), sdg.vertex_count() + 8);
        for tag in [VertexTag::Plain(0), VertexTag::Copy(0), VertexTag::Plain(1), VertexTag::Copy(1)] {
            let v = b.vertex_of(tag).unwrap();
            let pendant = b.tags().iter().filter(|t| matches!(t, VertexTag::Bunch { anchor, .. } if *anchor == v)).count();
            assert_eq!(pendant, 2);
        }

        let single = SimplicialComplex::from_facets([[0, 1, 2]]).unwrap();
        let sdg = subdivision(&duplication(&associated_graph(&single).unwrap()).unwrap()).unwrap();
        let b = attach_bunches(&sdg, &single).unwrap();
        assert_eq!(b.vertex_count(), 2 + 6);
        assert_eq!(b.in_degree(0), 3);
        assert_eq!(b.in_degree(1), 3);
    }

    #[test]
    fn isomorphism_holds() {
        for n in 2..=5 {
            let iso = verify_isomorphism(&sphere_triangulation(n).unwrap()).unwrap();
            assert!(iso.holds, "n = {n}");
        }
        let iso = verify_isomorphism(&glued_triangles()).unwrap();
        assert!(iso.holds);
        // bunch vertices land on E blocks of boundary faces
        let ps = PairSpace::new(&glued_triangles()).unwrap();
        for (v, tag) in iso.source.tags().iter().enumerate() {
            if let VertexTag::Bunch { face, .. } = tag {
                assert_eq!(ps.e_keys()[iso.xi[v]].0, *face);
            }
        }
    }

    #[test]
    fn a_wrong_orientation_breaks_the_isomorphism() {
        let s = sphere_triangulation(2).unwrap();
        let mut p = s.find_orientation().unwrap().assignment().unwrap().parities().to_vec();
        p[0] = p[0].flip();
        let bad = OrientationAssignment::from_parities(p);
        assert_eq!(verify_isomorphism_with(&s, &bad).unwrap_err(), Error::NotOrientable);
    }

    #[test]
    fn non_orientable_rejected() {
        let mobius = SimplicialComplex::from_facets([
            [0, 1, 3],
            [1, 3, 4],
            [1, 2, 4],
            [2, 4, 5],
            [2, 3, 5],
            [0, 3, 5],
        ])
        .unwrap();
        assert_eq!(verify_isomorphism(&mobius).unwrap_err(), Error::NotOrientable);
        assert_eq!(verify_equivalence(&mobius).unwrap_err(), Error::NotOrientable);
    }

    #[test]
    fn coined_walk_examples() {
        let k2 = DirectedMultigraph::from_simple(&SimpleGraph::complete(2));
        let g = coined_walk(&k2, None).unwrap().to_dense();
        assert_eq!(g[(0, 1)].re, 1.0);
        assert_eq!(g[(1, 0)].re, 1.0);
        assert_eq!(g[(0, 0)].re, 0.0);

        let tri = DirectedMultigraph::from_simple(&SimpleGraph::complete(3));
        let g = coined_walk(&tri, None).unwrap().to_dense();
        let id = DMatrix::identity(6, 6);
        assert!((g.adjoint() * &g - &id).norm() < 1e-12);
        assert!((g - id).norm() > 1.0);
    }

    #[test]
    fn transpose_of_coined_walk_is_unitary() {
        let d = duplication(&DirectedMultigraph::from_simple(&SimpleGraph::complete(5))).unwrap();
        let g = coined_walk(&d, None).unwrap();
        let gt = g.transpose().to_dense();
        let id = DMatrix::identity(d.arc_count(), d.arc_count());
        assert!((gt.adjoint() * &gt - id).norm() < 1e-12);
        assert!((gt - g.to_dense().transpose()).norm() < 1e-14);
    }

    #[test]
    fn w_is_a_bijection() {
        let setting = DuplicationSetting::new(&sphere_triangulation(2).unwrap()).unwrap();
        assert_eq!(setting.w.dim(), 24);
        let psi = StateVector::new((0..24).map(|i| Complex64::new(i as f64, -(i as f64) / 3.0)).collect());
        let there = setting.w.apply(&psi).unwrap();
        assert!((there.norm() - psi.norm()).abs() < 1e-12);
        assert_eq!(setting.w.apply_inverse(&there).unwrap(), psi);
    }

    #[test]
    fn w_rejects_boundary() {
        let glued = glued_triangles();
        let o = glued.find_orientation().unwrap().assignment().unwrap().clone();
        let ps = PairSpace::new(&glued).unwrap();
        let d = duplication(&associated_graph(&glued).unwrap()).unwrap();
        assert_eq!(intertwiner_w(&ps, &o, &d).unwrap_err(), Error::HasBoundary(4));
    }

    #[test]
    fn simplicial_walk_is_conjugate_to_transposed_coined_walk() {
        for n in 2..=4 {
            let dev = verify_equivalence(&sphere_triangulation(n).unwrap()).unwrap();
            assert!(dev < 1e-12, "n = {n}: {dev}");
        }
    }

    #[test]
    fn untransposed_coined_walk_does_not_match() {
        let setting = DuplicationSetting::new(&sphere_triangulation(2).unwrap()).unwrap();
        let u = build_grover_sqw(&setting.pair_space).unwrap();
        let gamma = coined_walk(&setting.duplication, None).unwrap();
        assert!(conjugation_deviation(&u, &gamma, &setting.w).unwrap() > 0.1);
    }

    #[test]
    fn bipartite_equivalence() {
        for n in 2..=3 {
            let ps = PairSpace::new(&sphere_triangulation(n).unwrap()).unwrap();
            assert!(verify_bipartite_equivalence(&ps).unwrap() < 1e-12);
        }
        let ps = PairSpace::new(&glued_triangles()).unwrap();
        assert!(verify_bipartite_equivalence(&ps).unwrap() < 1e-12);
    }

    #[test]
    fn subdivision_equivalence() {
        for g in [
            SimpleGraph::complete(4),
            SimpleGraph::cycle(5).unwrap(),
            SimpleGraph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap(),
        ] {
            let dg = DirectedMultigraph::from_simple(&g);
            assert!(verify_subdivision_equivalence(&dg).unwrap() < 1e-12);
        }
    }

    #[test]
    fn edge_list_json() {
        let g = DirectedMultigraph::from_simple(&SimpleGraph::complete(3));
        let v: serde_json::Value = serde_json::from_str(&g.to_edge_list_json()).unwrap();
        assert_eq!(v["edges"], serde_json::json!([[0, 1], [0, 2], [1, 2]]));
        assert_eq!(v["vertices"][0], serde_json::json!({"Plain": 0}));
    }
}
