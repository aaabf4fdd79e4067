//! Simplicial complexes and oriented-simplex combinatorics.
//!
//! A complex is stored by its maximal facets; lower-dimensional faces are
//! enumerated on demand. This keeps complexes such as the n-skeleton of an
//! (n+1)-simplex tractable for n in the hundreds, where the full face
//! closure would be astronomically large.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unoriented simplex: a nonempty, sorted set of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts and deduplicates the given vertices.
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension (number of vertices minus one). Panics on the empty simplex.
    pub fn dim(&self) -> usize {
        assert!(!self.0.is_empty(), "the empty simplex has no dimension");
        self.0.len() - 1
    }

    /// The primary face obtained by dropping the vertex at sorted position `pos`.
    pub fn without_position(&self, pos: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(pos);
        Simplex(v)
    }

    pub fn position_of(&self, vertex: usize) -> Option<usize> {
        self.0.binary_search(&vertex).ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(
            self.0
                .iter()
                .copied()
                .filter(|v| other.0.binary_search(v).is_ok())
                .collect(),
        )
    }

    /// All faces with `k + 1` vertices, in lexicographic order.
    pub fn faces_of_dim(&self, k: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        if k + 1 > self.0.len() {
            return out;
        }
        let mut idx: Vec<usize> = (0..=k).collect();
        loop {
            out.push(Simplex(idx.iter().map(|&i| self.0[i]).collect()));
            // advance the combination
            let n = self.0.len();
            let mut i = k + 1;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] != i + n - (k + 1) {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            idx[i] += 1;
            for j in i + 1..=k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "|")
    }
}

/// Parity of a vertex ordering relative to the sorted order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_transpositions(count: usize) -> Self {
        if count % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Composition of parities (XOR).
    pub fn compose(self, other: Parity) -> Self {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// An oriented simplex ⟨w₀…w_κ⟩, i.e. an ordering up to even permutations.
///
/// Stored as the sorted vertex set plus the parity of the defining ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedSimplex {
    support: Simplex,
    parity: Parity,
}

impl OrientedSimplex {
    pub fn new(support: Simplex, parity: Parity) -> Self {
        OrientedSimplex { support, parity }
    }

    /// Canonicalizes an ordering of distinct vertices.
    pub fn from_ordering(ordering: &[usize]) -> Result<Self> {
        if ordering.is_empty() {
            return Err(Error::EmptyFacet(0));
        }
        let mut perm: Vec<usize> = (0..ordering.len()).collect();
        perm.sort_unstable_by_key(|&i| ordering[i]);
        if perm.windows(2).any(|w| ordering[w[0]] == ordering[w[1]]) {
            return Err(Error::RepeatedVertex(ordering.to_vec()));
        }
        // parity of a permutation = (length - #cycles) mod 2
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
        let support = Simplex(perm.iter().map(|&i| ordering[i]).collect());
        Ok(OrientedSimplex {
            support,
            parity: Parity::from_transpositions(perm.len() - cycles),
        })
    }

    pub fn support(&self) -> &Simplex {
        &self.support
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn opposite(&self) -> Self {
        OrientedSimplex {
            support: self.support.clone(),
            parity: self.parity.flip(),
        }
    }

    /// One ordering in the class: sorted for even parity, sorted with the
    /// first two vertices swapped for odd parity.
    pub fn representative(&self) -> Vec<usize> {
        let mut v = self.support.0.clone();
        if self.parity == Parity::Odd {
            v.swap(0, 1);
        }
        v
    }

    /// The induced orientation on the primary face that drops the vertex at
    /// sorted position `pos`.
    pub fn induced_face(&self, pos: usize) -> OrientedSimplex {
        OrientedSimplex {
            support: self.support.without_position(pos),
            parity: self.parity.compose(Parity::from_transpositions(pos)),
        }
    }

    /// The induced directed primary faces, ordered by the sorted position of
    /// the dropped vertex.
    ///
    /// Each face is what remains after deleting the leading letter of some
    /// even-permutation representative. For a 1-simplex the only even
    /// permutation is the identity, so ⟨w₀w₁⟩ induces just ⟨w₁⟩.
    pub fn induced_primary_faces(&self) -> Result<Vec<OrientedSimplex>> {
        let n = self.support.len().saturating_sub(1);
        match n {
            0 => Err(Error::DimensionTooLow {
                required: 1,
                actual: 0,
            }),
            1 => {
                let rep = self.representative();
                Ok(vec![OrientedSimplex::from_ordering(&rep[1..])?])
            }
            _ => Ok((0..=n).map(|pos| self.induced_face(pos)).collect()),
        }
    }

    /// Whether `face` is an induced directed primary face (σ ▷ τ).
    pub fn induces(&self, face: &OrientedSimplex) -> bool {
        match self.induced_primary_faces() {
            Ok(faces) => faces.contains(face),
            Err(_) => false,
        }
    }
}

impl fmt::Display for OrientedSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, v) in self.representative().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "⟩")
    }
}

/// A simple undirected graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    /// Validates the edge list: endpoints in range, no self loops. Duplicate
    /// edges (in either direction) are merged.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::MalformedGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::MalformedGraph(format!("self loop at {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(SimpleGraph {
            vertex_count,
            edges: set,
        })
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v)));
        SimpleGraph::new(k, edges).expect("complete graph is well formed")
    }

    pub fn cycle(k: usize) -> Result<Self> {
        SimpleGraph::new(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == u {
                    Some(b)
                } else if b == u {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        adj
    }
}

/// On-disk representation of a complex: `{ "facets": [[int, ...], ...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub facets: Vec<Vec<usize>>,
}

/// A primary face of a pure complex together with its cofacets.
///
/// The face is stored by reference as `(facet index, sorted position of the
/// omitted vertex)` pairs; [`PrimaryFace::support`] materializes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryFace {
    cofacets: Vec<(usize, usize)>,
}

impl PrimaryFace {
    /// `(facet index, omitted position)` for every cofacet, sorted by facet.
    pub fn cofacets(&self) -> &[(usize, usize)] {
        &self.cofacets
    }

    pub fn coface_count(&self) -> usize {
        self.cofacets.len()
    }

    pub fn support(&self, complex: &SimplicialComplex) -> Simplex {
        let (f, pos) = self.cofacets[0];
        complex.facets[f].without_position(pos)
    }
}

/// Facet/primary-face incidence of a pure complex.
#[derive(Clone, Debug)]
pub struct FaceIncidence {
    faces: Vec<PrimaryFace>,
    /// `by_facet[f][pos]` = index into `faces` of the face dropping `pos`.
    by_facet: Vec<Vec<usize>>,
}

impl FaceIncidence {
    /// Primary faces in lexicographic order of their supports.
    pub fn faces(&self) -> &[PrimaryFace] {
        &self.faces
    }

    pub fn face_of(&self, facet: usize, pos: usize) -> usize {
        self.by_facet[facet][pos]
    }

    /// Facet pairs `(i, j)`, `i < j`, sharing a primary face, with that face.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (fi, face) in self.faces.iter().enumerate() {
            let c = &face.cofacets;
            for a in 0..c.len() {
                for b in a + 1..c.len() {
                    out.push((c[a].0.min(c[b].0), c[a].0.max(c[b].0), fi));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Obstruction returned when no orientation exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// A primary face with more than two cofacets.
    Junction { face: Simplex, cofacets: Vec<usize> },
    /// A closed chain of adjacent facets along which the induced orientations
    /// cannot all be made opposite.
    Cycle(Vec<usize>),
}

/// Sign label of an oriented facet under an orientation assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// A global orientation: for each facet, the parity of the class labelled `+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationAssignment {
    plus_parity: Vec<Parity>,
}

impl OrientationAssignment {
    pub fn from_parities(plus_parity: Vec<Parity>) -> Self {
        OrientationAssignment { plus_parity }
    }

    pub fn parities(&self) -> &[Parity] {
        &self.plus_parity
    }

    pub fn negated(&self) -> Self {
        OrientationAssignment {
            plus_parity: self.plus_parity.iter().map(|p| p.flip()).collect(),
        }
    }

    /// The oriented facet `(|σ_i|, sign)`.
    pub fn oriented_facet(&self, complex: &SimplicialComplex, facet: usize, sign: Sign) -> OrientedSimplex {
        let parity = match sign {
            Sign::Plus => self.plus_parity[facet],
            Sign::Minus => self.plus_parity[facet].flip(),
        };
        OrientedSimplex::new(complex.facets[facet].clone(), parity)
    }

    /// Label of an oriented facet, or `None` if its support is not a facet.
    pub fn label(&self, complex: &SimplicialComplex, sigma: &OrientedSimplex) -> Option<(usize, Sign)> {
        let i = complex.facet_index(sigma.support())?;
        let sign = if sigma.parity() == self.plus_parity[i] {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Some((i, sign))
    }

    /// Checks that every adjacent facet pair is non-contradicted.
    pub fn is_valid(&self, complex: &SimplicialComplex) -> Result<bool> {
        if self.plus_parity.len() != complex.facets.len() {
            return Ok(false);
        }
        let inc = complex.primary_faces()?;
        for face in inc.faces() {
            let c = face.cofacets();
            for a in 0..c.len() {
                for b in a + 1..c.len() {
                    let (i, pi) = c[a];
                    let (j, pj) = c[b];
                    let ei = self.plus_parity[i].compose(Parity::from_transpositions(pi));
                    let ej = self.plus_parity[j].compose(Parity::from_transpositions(pj));
                    if ei == ej {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Outcome of [`SimplicialComplex::find_orientation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientability {
    Orientable(OrientationAssignment),
    NonOrientable(Obstruction),
}

impl Orientability {
    pub fn assignment(&self) -> Option<&OrientationAssignment> {
        match self {
            Orientability::Orientable(a) => Some(a),
            Orientability::NonOrientable(_) => None,
        }
    }
}

/// A finite abstract simplicial complex, stored by its maximal facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: Vec<Simplex>,
    dim: usize,
}

impl SimplicialComplex {
    /// Face closure of the given vertex sets. Non-maximal inputs are absorbed.
    pub fn from_facets<I, F>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = usize>,
    {
        let mut simplices = Vec::new();
        for (i, f) in facets.into_iter().enumerate() {
            let s = Simplex::new(f);
            if s.is_empty() {
                return Err(Error::EmptyFacet(i));
            }
            simplices.push(s);
        }
        if simplices.is_empty() {
            return Err(Error::EmptyFacetList);
        }
        simplices.sort_unstable();
        simplices.dedup();
        // drop simplices contained in a strictly larger one
        let mut by_size = simplices.clone();
        by_size.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut maximal: Vec<Simplex> = Vec::new();
        for s in by_size {
            if !maximal.iter().any(|m| m.len() > s.len() && s.is_face_of(m)) {
                maximal.push(s);
            }
        }
        maximal.sort_unstable();
        let dim = maximal.iter().map(Simplex::dim).max().unwrap_or(0);
        Ok(SimplicialComplex { facets: maximal, dim })
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        Self::from_facets(file.facets.iter().cloned())
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            facets: self.facets.iter().map(|s| s.vertices().to_vec()).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("facet lists always serialize")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::Io(e.to_string()))
    }

    /// Maximal simplices in lexicographic order.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_index(&self, s: &Simplex) -> Option<usize> {
        self.facets.binary_search(s).ok()
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.dim() == self.dim)
    }

    fn require_pure(&self) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            let dims: BTreeSet<usize> = self.facets.iter().map(Simplex::dim).collect();
            Err(Error::NotPure(dims.into_iter().collect()))
        }
    }

    /// The set K_k of k-simplices, sorted.
    pub fn simplices(&self, k: usize) -> Vec<Simplex> {
        let set: BTreeSet<Simplex> = self.facets.iter().flat_map(|f| f.faces_of_dim(k)).collect();
        set.into_iter().collect()
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        !s.is_empty() && self.facets.iter().any(|f| s.is_face_of(f))
    }

    /// Sorted vertex ids.
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.facets.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        set.into_iter().collect()
    }

    /// The 1-skeleton as a graph on `0..=max vertex id`.
    pub fn one_skeleton(&self) -> SimpleGraph {
        let count = self.vertices().last().map_or(0, |v| v + 1);
        let edges: Vec<(usize, usize)> = self
            .simplices(1)
            .into_iter()
            .map(|e| (e.vertices()[0], e.vertices()[1]))
            .collect();
        SimpleGraph::new(count, edges).expect("edges of a complex are well formed")
    }

    /// The m-skeleton K^(m): all simplices of dimension at most m.
    pub fn skeleton(&self, m: usize) -> Result<Self> {
        if m > self.dim {
            return Err(Error::SkeletonOutOfRange {
                requested: m,
                dim: self.dim,
            });
        }
        let mut facets = BTreeSet::new();
        for f in &self.facets {
            if f.dim() <= m {
                facets.insert(f.clone());
            } else {
                facets.extend(f.faces_of_dim(m));
            }
        }
        Ok(SimplicialComplex {
            facets: facets.into_iter().collect(),
            dim: m,
        })
    }

    /// Primary faces of a pure complex with their cofacets.
    pub fn primary_faces(&self) -> Result<FaceIncidence> {
        self.require_pure()?;
        if self.dim == 0 {
            return Err(Error::DimensionTooLow {
                required: 1,
                actual: 0,
            });
        }
        let n = self.dim;
        let vertex_hash = |v: usize| {
            let mut h = DefaultHasher::new();
            v.hash(&mut h);
            h.finish()
        };
        let mut buckets: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
        for (fi, f) in self.facets.iter().enumerate() {
            let hashes: Vec<u64> = f.vertices().iter().map(|&v| vertex_hash(v)).collect();
            let total = hashes.iter().fold(0u64, |acc, h| acc ^ h);
            for pos in 0..=n {
                buckets.entry(total ^ hashes[pos]).or_default().push((fi, pos));
            }
        }
        let same_face = |a: (usize, usize), b: (usize, usize)| {
            face_iter(&self.facets[a.0], a.1).eq(face_iter(&self.facets[b.0], b.1))
        };
        let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
        for (_, refs) in buckets {
            let mut local: Vec<Vec<(usize, usize)>> = Vec::new();
            for r in refs {
                match local.iter_mut().find(|g| same_face(g[0], r)) {
                    Some(g) => g.push(r),
                    None => local.push(vec![r]),
                }
            }
            groups.extend(local);
        }
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort_by(|a, b| {
            face_iter(&self.facets[a[0].0], a[0].1).cmp(face_iter(&self.facets[b[0].0], b[0].1))
        });
        let mut by_facet = vec![vec![usize::MAX; n + 1]; self.facets.len()];
        for (gi, g) in groups.iter().enumerate() {
            for &(f, pos) in g {
                by_facet[f][pos] = gi;
            }
        }
        Ok(FaceIncidence {
            faces: groups.into_iter().map(|cofacets| PrimaryFace { cofacets }).collect(),
            by_facet,
        })
    }

    /// Whether the facet-adjacency graph (shared primary faces) is connected.
    /// Non-pure complexes are reported as an error.
    pub fn is_strongly_connected(&self) -> Result<bool> {
        self.require_pure()?;
        if self.facets.len() == 1 {
            return Ok(true);
        }
        if self.dim == 0 {
            return Ok(false);
        }
        let inc = self.primary_faces()?;
        let mut parent: Vec<usize> = (0..self.facets.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (i, j, _) in inc.adjacent_pairs() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        Ok((0..self.facets.len()).all(|i| find(&mut parent, i) == root))
    }

    /// (n−1)-simplices with exactly one coface.
    pub fn boundary_faces(&self) -> Result<Vec<Simplex>> {
        let inc = self.primary_faces()?;
        Ok(inc
            .faces()
            .iter()
            .filter(|f| f.coface_count() == 1)
            .map(|f| f.support(self))
            .collect())
    }

    /// Searches for a global orientation by breadth-first sign propagation
    /// over the facet-adjacency graph.
    pub fn find_orientation(&self) -> Result<Orientability> {
        self.require_pure()?;
        if self.dim == 0 {
            return Err(Error::DimensionTooLow {
                required: 1,
                actual: 0,
            });
        }
        if !self.is_strongly_connected()? {
            return Err(Error::NotStronglyConnected);
        }
        let inc = self.primary_faces()?;
        if let Some(j) = inc.faces().iter().find(|f| f.coface_count() > 2) {
            return Ok(Orientability::NonOrientable(Obstruction::Junction {
                face: j.support(self),
                cofacets: j.cofacets().iter().map(|c| c.0).collect(),
            }));
        }
        // neighbours with the relative position parity of the shared face
        let mut adj: Vec<Vec<(usize, Parity)>> = vec![Vec::new(); self.facets.len()];
        for face in inc.faces() {
            if let [(i, pi), (j, pj)] = face.cofacets() {
                let rel = Parity::from_transpositions(pi + pj);
                adj[*i].push((*j, rel));
                adj[*j].push((*i, rel));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        // non-contradiction: s_j = flip(s_i ∘ rel)
        let mut sign: Vec<Option<Parity>> = vec![None; self.facets.len()];
        let mut parent: Vec<usize> = (0..self.facets.len()).collect();
        let mut depth = vec![0usize; self.facets.len()];
        sign[0] = Some(Parity::Even);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let su = sign[u].expect("queued facets are signed");
            for &(v, rel) in &adj[u] {
                let want = su.compose(rel).flip();
                match sign[v] {
                    None => {
                        sign[v] = Some(want);
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(sv) if sv != want => {
                        return Ok(Orientability::NonOrientable(Obstruction::Cycle(tree_cycle(
                            &parent, &depth, u, v,
                        ))));
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(Orientability::Orientable(OrientationAssignment {
            plus_parity: sign.into_iter().map(|s| s.expect("strongly connected")).collect(),
        }))
    }

    /// Number of k-simplices for every k, for small complexes.
    pub fn f_vector(&self) -> BTreeMap<usize, usize> {
        (0..=self.dim).map(|k| (k, self.count(k))).collect()
    }
}

fn face_iter(facet: &Simplex, pos: usize) -> impl Iterator<Item = usize> + '_ {
    facet
        .vertices()
        .iter()
        .enumerate()
        .filter(move |(i, _)| *i != pos)
        .map(|(_, &v)| v)
}

/// Cycle through the BFS tree closed by the non-tree edge `u`–`v`.
fn tree_cycle(parent: &[usize], depth: &[usize], u: usize, v: usize) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Clique complex X(G): one simplex per complete subgraph.
pub fn clique_complex(graph: &SimpleGraph) -> Result<SimplicialComplex> {
    if graph.vertex_count() == 0 {
        return Err(Error::EmptyFacetList);
    }
    let adj = graph.adjacency();
    let mut cliques = Vec::new();
    bron_kerbosch(
        &adj,
        Vec::new(),
        (0..graph.vertex_count()).collect(),
        BTreeSet::new(),
        &mut cliques,
    );
    SimplicialComplex::from_facets(cliques)
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&&u| adj[u].intersection(&p).count())
        .copied()
        .expect("p or x is nonempty");
    let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.intersection(&adj[v]).copied().collect();
        let x2 = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.remove(&v);
        x.insert(v);
    }
}

/// X(K_{n+2})^(n): the boundary of an (n+1)-simplex, a triangulation of Sⁿ.
///
/// Facet `i` (lexicographic order) omits vertex `n + 1 - i`.
pub fn sphere_triangulation(n: usize) -> Result<SimplicialComplex> {
    if n < 2 {
        return Err(Error::SphereDimension(n));
    }
    let m = n + 2;
    let facets = (0..m).rev().map(|omit| (0..m).filter(move |&v| v != omit));
    SimplicialComplex::from_facets(facets)
}
