//! The pair space of facets and induced primary faces, block unitaries, and
//! the two-step simplicial walk Û = F̂ ∘ Ê.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::complex::{FaceIncidence, OrientedSimplex, Parity, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

/// A complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector {
            amplitudes: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// The standard basis vector e_i.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amplitudes[i] = Complex64::new(1.0, 0.0);
        v
    }

    /// Equal amplitudes 1/√dim.
    pub fn uniform(dim: usize) -> Self {
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector {
            amplitudes: vec![a; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self, other⟩, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, c: Complex64) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    pub fn normalized(&self) -> StateVector {
        self.scaled(Complex64::new(1.0 / self.norm(), 0.0))
    }

    /// Largest elementwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// One element of K^{n,n-1}: an oriented facet and the face obtained by
/// dropping the vertex at sorted position `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pair {
    pub facet: usize,
    pub parity: Parity,
    pub pos: usize,
}

/// The space K^{n,n-1} of facet/face pairs σ ▷ τ with its E and F blocks.
///
/// Pairs are indexed by (σ, τ) in canonical order: facets lexicographically,
/// even class before odd, then faces lexicographically.
#[derive(Clone, Debug)]
pub struct PairSpace {
    complex: SimplicialComplex,
    incidence: FaceIncidence,
    n: usize,
    pairs: Vec<Pair>,
    e_keys: Vec<(usize, Parity)>,
    e_blocks: Vec<Vec<usize>>,
    e_block_of: Vec<usize>,
    f_blocks: Vec<Vec<usize>>,
}

fn parity_index(p: Parity) -> usize {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

impl PairSpace {
    /// Builds the pair space of a pure complex of dimension at least two.
    pub fn new(complex: &SimplicialComplex) -> Result<Self> {
        let incidence = complex.primary_faces()?;
        let n = complex.dim();
        if n < 2 {
            return Err(Error::DimensionTooLow { required: 2, actual: n });
        }
        let mut pairs = Vec::with_capacity(2 * (n + 1) * complex.facets().len());
        for facet in 0..complex.facets().len() {
            for parity in [Parity::Even, Parity::Odd] {
                for pos in (0..=n).rev() {
                    pairs.push(Pair { facet, parity, pos });
                }
            }
        }
        let mut grouped: BTreeMap<(usize, Parity), Vec<usize>> = BTreeMap::new();
        for (idx, p) in pairs.iter().enumerate() {
            let face = incidence.face_of(p.facet, p.pos);
            let tau_parity = p.parity.compose(Parity::from_transpositions(p.pos));
            grouped.entry((face, tau_parity)).or_default().push(idx);
        }
        let mut e_block_of = vec![0; pairs.len()];
        let mut e_keys = Vec::with_capacity(grouped.len());
        let mut e_blocks = Vec::with_capacity(grouped.len());
        for (b, (key, members)) in grouped.into_iter().enumerate() {
            for &i in &members {
                e_block_of[i] = b;
            }
            e_keys.push(key);
            e_blocks.push(members);
        }
        let f_blocks = (0..2 * complex.facets().len())
            .map(|b| (b * (n + 1)..(b + 1) * (n + 1)).collect())
            .collect();
        Ok(PairSpace {
            complex: complex.clone(),
            incidence,
            n,
            pairs,
            e_keys,
            e_blocks,
            e_block_of,
            f_blocks,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn incidence(&self) -> &FaceIncidence {
        &self.incidence
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Index of the pair ((|σ_facet|, parity), face dropping `pos`).
    pub fn index_of(&self, facet: usize, parity: Parity, pos: usize) -> usize {
        (2 * facet + parity_index(parity)) * (self.n + 1) + (self.n - pos)
    }

    pub fn sigma(&self, i: usize) -> OrientedSimplex {
        let p = self.pairs[i];
        OrientedSimplex::new(self.complex.facets()[p.facet].clone(), p.parity)
    }

    pub fn tau(&self, i: usize) -> OrientedSimplex {
        self.sigma(i).induced_face(self.pairs[i].pos)
    }

    /// Index of the unoriented face |τ| in the face incidence.
    pub fn face_index(&self, i: usize) -> usize {
        let p = self.pairs[i];
        self.incidence.face_of(p.facet, p.pos)
    }

    /// The E_τ blocks, ordered by (|τ|, orientation class).
    pub fn e_blocks(&self) -> &[Vec<usize>] {
        &self.e_blocks
    }

    /// `(face index, parity)` of each E block.
    pub fn e_keys(&self) -> &[(usize, Parity)] {
        &self.e_keys
    }

    pub fn e_block_of(&self, i: usize) -> usize {
        self.e_block_of[i]
    }

    /// The F_σ blocks; block `2k` is (|σ_k|, even), block `2k+1` is (|σ_k|, odd).
    pub fn f_blocks(&self) -> &[Vec<usize>] {
        &self.f_blocks
    }

    /// Number of oriented facets #⟨K_n⟩.
    pub fn oriented_facet_count(&self) -> usize {
        self.f_blocks.len()
    }

    /// Number of oriented (n−1)-simplices #⟨K_{n-1}⟩.
    pub fn oriented_face_count(&self) -> usize {
        2 * self.incidence.faces().len()
    }
}

/// A local unitary acting on one block of indices.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalUnitary {
    /// (2/m)J_m − I_m.
    Grover(usize),
    /// c·I on a block of any size.
    Scalar(Complex64),
    Dense(DMatrix<Complex64>),
}

impl LocalUnitary {
    pub fn flip() -> Self {
        LocalUnitary::Grover(2)
    }

    pub fn minus_identity() -> Self {
        LocalUnitary::Scalar(Complex64::new(-1.0, 0.0))
    }

    /// Fixed size, or `None` for scalars.
    pub fn size(&self) -> Option<usize> {
        match self {
            LocalUnitary::Grover(m) => Some(*m),
            LocalUnitary::Scalar(_) => None,
            LocalUnitary::Dense(m) => Some(m.nrows()),
        }
    }

    pub fn transpose(&self) -> Self {
        match self {
            LocalUnitary::Dense(m) => LocalUnitary::Dense(m.transpose()),
            other => other.clone(),
        }
    }

    /// ‖M*M − I‖_F, for a block of size `m`.
    pub fn unitarity_deviation(&self, m: usize) -> f64 {
        match self {
            LocalUnitary::Grover(_) => 0.0,
            LocalUnitary::Scalar(c) => (c.norm_sqr() - 1.0).abs() * (m as f64).sqrt(),
            LocalUnitary::Dense(u) => {
                let prod = u.adjoint() * u;
                (prod - DMatrix::<Complex64>::identity(u.nrows(), u.ncols())).norm()
            }
        }
    }

    fn apply_block(&self, idx: &[usize], v: &mut [Complex64], buf: &mut Vec<Complex64>) {
        match self {
            LocalUnitary::Grover(m) => {
                let s: Complex64 = idx.iter().map(|&i| v[i]).sum();
                let c = s * (2.0 / *m as f64);
                for &i in idx {
                    v[i] = c - v[i];
                }
            }
            LocalUnitary::Scalar(c) => {
                for &i in idx {
                    v[i] *= c;
                }
            }
            LocalUnitary::Dense(u) => {
                buf.clear();
                buf.extend(idx.iter().map(|&i| v[i]));
                for (r, &i) in idx.iter().enumerate() {
                    v[i] = (0..idx.len()).map(|c| u[(r, c)] * buf[c]).sum();
                }
            }
        }
    }
}

/// Dense real Grover matrix (2/m)J_m − I_m.
pub fn grover(m: usize) -> Result<DMatrix<f64>> {
    if m == 0 {
        return Err(Error::ZeroSizeGrover);
    }
    let off = 2.0 / m as f64;
    Ok(DMatrix::from_fn(m, m, |r, c| if r == c { off - 1.0 } else { off }))
}

/// One factor of a [`BlockUnitary`].
#[derive(Clone, Debug, PartialEq)]
pub enum Stage {
    /// Direct sum of local unitaries on disjoint index blocks.
    Blocks(Vec<(Vec<usize>, LocalUnitary)>),
    /// `out[i] = sign[i] * in[source[i]]`.
    SignedPermutation { source: Vec<usize>, sign: Vec<f64> },
}

impl Stage {
    fn transpose(&self) -> Stage {
        match self {
            Stage::Blocks(blocks) => {
                Stage::Blocks(blocks.iter().map(|(i, u)| (i.clone(), u.transpose())).collect())
            }
            Stage::SignedPermutation { source, sign } => {
                // Pᵀ: out[source[i]] = sign[i] * in[i]
                let mut inv = vec![0; source.len()];
                let mut s = vec![0.0; source.len()];
                for (i, &j) in source.iter().enumerate() {
                    inv[j] = i;
                    s[j] = sign[i];
                }
                Stage::SignedPermutation { source: inv, sign: s }
            }
        }
    }
}

/// A product of structured unitary stages on ℓ²({0..dim}).
///
/// Stages are applied in order: the first stage acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockUnitary {
    dim: usize,
    stages: Vec<Stage>,
}

impl BlockUnitary {
    /// Validates that every block stage partitions the index set, that every
    /// local unitary fits its block and is unitary, and that permutations are
    /// bijections with unit signs.
    pub fn new(dim: usize, stages: Vec<Stage>) -> Result<Self> {
        for stage in &stages {
            match stage {
                Stage::Blocks(blocks) => {
                    let mut seen = vec![false; dim];
                    for (b, (idx, u)) in blocks.iter().enumerate() {
                        if let Some(s) = u.size() {
                            if s != idx.len() {
                                return Err(Error::BlockSizeMismatch {
                                    block: b,
                                    coin: s,
                                    expected: idx.len(),
                                });
                            }
                        }
                        if let LocalUnitary::Dense(m) = u {
                            if m.nrows() != m.ncols() {
                                return Err(Error::NotSquare {
                                    rows: m.nrows(),
                                    cols: m.ncols(),
                                });
                            }
                        }
                        let dev = u.unitarity_deviation(idx.len());
                        if dev > UNITARY_TOL {
                            return Err(Error::NotUnitary { block: b, deviation: dev });
                        }
                        for &i in idx {
                            if i >= dim || seen[i] {
                                return Err(Error::NotAPartition(dim));
                            }
                            seen[i] = true;
                        }
                    }
                    if seen.iter().any(|s| !s) {
                        return Err(Error::NotAPartition(dim));
                    }
                }
                Stage::SignedPermutation { source, sign } => {
                    if source.len() != dim || sign.len() != dim {
                        return Err(Error::NotAPartition(dim));
                    }
                    let mut seen = vec![false; dim];
                    for &j in source {
                        if j >= dim || seen[j] {
                            return Err(Error::NotAPartition(dim));
                        }
                        seen[j] = true;
                    }
                    if let Some(b) = sign.iter().position(|s| (s.abs() - 1.0).abs() > UNITARY_TOL) {
                        return Err(Error::NotUnitary {
                            block: b,
                            deviation: (sign[b].abs() - 1.0).abs(),
                        });
                    }
                }
            }
        }
        Ok(BlockUnitary { dim, stages })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// The transpose, built by reversing the stages and transposing each.
    pub fn transpose(&self) -> BlockUnitary {
        BlockUnitary {
            dim: self.dim,
            stages: self.stages.iter().rev().map(Stage::transpose).collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &BlockUnitary) -> Result<BlockUnitary> {
        if self.dim != next.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: next.dim,
            });
        }
        let mut stages = self.stages.clone();
        stages.extend(next.stages.iter().cloned());
        Ok(BlockUnitary { dim: self.dim, stages })
    }

    fn check_dim(&self, psi: &StateVector) -> Result<()> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: psi.dim(),
            });
        }
        Ok(())
    }

    fn apply_raw(&self, v: &mut Vec<Complex64>, scratch: &mut Vec<Complex64>, buf: &mut Vec<Complex64>) {
        for stage in &self.stages {
            match stage {
                Stage::Blocks(blocks) => {
                    for (idx, u) in blocks {
                        u.apply_block(idx, v, buf);
                    }
                }
                Stage::SignedPermutation { source, sign } => {
                    scratch.clear();
                    scratch.extend(source.iter().zip(sign).map(|(&j, &s)| v[j] * s));
                    std::mem::swap(v, scratch);
                }
            }
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.check_dim(psi)?;
        let mut v = psi.amplitudes.clone();
        self.apply_raw(&mut v, &mut Vec::with_capacity(self.dim), &mut Vec::new());
        Ok(StateVector::new(v))
    }

    /// Assembles the dense matrix. Intended for small test oracles.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for c in 0..self.dim {
            let col = self
                .apply(&StateVector::basis(self.dim, c))
                .expect("basis vector has the right dimension");
            for (r, a) in col.amplitudes.iter().enumerate() {
                m[(r, c)] = *a;
            }
        }
        m
    }
}

/// Û = F̂ ∘ Ê with explicit coins, one per E block and one per F block, in
/// the block order of the pair space.
pub fn build_sqw(ps: &PairSpace, e_coins: &[LocalUnitary], f_coins: &[LocalUnitary]) -> Result<BlockUnitary> {
    if e_coins.len() != ps.e_blocks().len() {
        return Err(Error::CoinCountMismatch {
            expected: ps.e_blocks().len(),
            actual: e_coins.len(),
        });
    }
    if f_coins.len() != ps.f_blocks().len() {
        return Err(Error::CoinCountMismatch {
            expected: ps.f_blocks().len(),
            actual: f_coins.len(),
        });
    }
    let e = Stage::Blocks(ps.e_blocks().iter().cloned().zip(e_coins.iter().cloned()).collect());
    let f = Stage::Blocks(ps.f_blocks().iter().cloned().zip(f_coins.iter().cloned()).collect());
    BlockUnitary::new(ps.len(), vec![e, f])
}

/// Grover coins on every block: the flip on interior E blocks, I₁ on
/// boundary ones, and grover(n+1) on every F block.
pub fn build_grover_sqw(ps: &PairSpace) -> Result<BlockUnitary> {
    let e: Vec<LocalUnitary> = ps.e_blocks().iter().map(|b| LocalUnitary::Grover(b.len())).collect();
    let f: Vec<LocalUnitary> = ps.f_blocks().iter().map(|b| LocalUnitary::Grover(b.len())).collect();
    build_sqw(ps, &e, &f)
}

/// ψ_t = U^t ψ, applied blockwise without forming U.
pub fn evolve(u: &BlockUnitary, psi: &StateVector, steps: usize) -> Result<StateVector> {
    u.check_dim(psi)?;
    let mut v = psi.amplitudes.clone();
    let mut scratch = Vec::with_capacity(u.dim);
    let mut buf = Vec::new();
    for _ in 0..steps {
        u.apply_raw(&mut v, &mut scratch, &mut buf);
    }
    Ok(StateVector::new(v))
}

/// Iterates U, calling `observe(t, ψ_t)` for t = 0..=steps.
pub fn evolve_with<F>(u: &BlockUnitary, psi: &StateVector, steps: usize, mut observe: F) -> Result<StateVector>
where
    F: FnMut(usize, &[Complex64]),
{
    u.check_dim(psi)?;
    let mut v = psi.amplitudes.clone();
    let mut scratch = Vec::with_capacity(u.dim);
    let mut buf = Vec::new();
    observe(0, &v);
    for t in 1..=steps {
        u.apply_raw(&mut v, &mut scratch, &mut buf);
        observe(t, &v);
    }
    Ok(StateVector::new(v))
}

/// μ(|τ|) indexed by the face order of the pair space's incidence.
pub fn face_distribution(psi: &StateVector, ps: &PairSpace) -> Result<Vec<f64>> {
    if psi.dim() != ps.len() {
        return Err(Error::DimensionMismatch {
            expected: ps.len(),
            actual: psi.dim(),
        });
    }
    let total = psi.norm_sqr();
    if (total - 1.0).abs() > 1e-10 {
        log::warn!("distribution of a state with squared norm {total}; normalizing");
    }
    let mut mu = vec![0.0; ps.incidence().faces().len()];
    for (i, a) in psi.amplitudes().iter().enumerate() {
        mu[ps.face_index(i)] += a.norm_sqr();
    }
    for m in &mut mu {
        *m /= total;
    }
    Ok(mu)
}

/// μ(|τ|) keyed by the unoriented (n−1)-simplex.
pub fn distribution(psi: &StateVector, ps: &PairSpace) -> Result<BTreeMap<Simplex, f64>> {
    let mu = face_distribution(psi, ps)?;
    let complex = ps.complex();
    Ok(ps
        .incidence()
        .faces()
        .iter()
        .zip(mu)
        .map(|(f, m)| (f.support(complex), m))
        .collect())
}
