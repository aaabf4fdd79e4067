//! The discriminant T_* of the search walk, its top eigenpair, the lift to
//! eigenvectors of Γ̂_*, and the overlap and stopping-time predictions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::complex::sphere_triangulation;
use crate::error::{Error, Result};
use crate::graph::DirectedMultigraph;
use crate::search::{deformed_graph, gamma_star, uniform_state, MarkedFace};
use crate::walk::StateVector;

/// Largest arc count for which the dense Γ̂_* spectrum is computed.
pub const DENSE_ARC_LIMIT: usize = 264;

/// (T_* f)(u) = Σ_{t(a)=u} q(a) f(o(a)), q = ±1/deg, negative on self loops.
#[derive(Clone, Debug, PartialEq)]
pub struct Discriminant {
    pub degree: usize,
    pub matrix: DMatrix<f64>,
    /// Vertices carrying a self loop, ascending.
    pub loop_vertices: Vec<usize>,
}

pub fn discriminant(graph: &DirectedMultigraph) -> Result<Discriminant> {
    let nv = graph.vertex_count();
    let degree = graph.terminus_blocks().first().map_or(0, Vec::len);
    if graph.terminus_blocks().iter().any(|b| b.len() != degree) || degree == 0 {
        return Err(Error::NotRegular);
    }
    let q = 1.0 / degree as f64;
    let mut matrix = DMatrix::zeros(nv, nv);
    let mut loop_vertices = Vec::new();
    for a in graph.arcs() {
        if a.self_loop {
            matrix[(a.terminus, a.origin)] -= q;
            loop_vertices.push(a.terminus);
        } else {
            matrix[(a.terminus, a.origin)] += q;
        }
    }
    loop_vertices.sort_unstable();
    Ok(Discriminant {
        degree,
        matrix,
        loop_vertices,
    })
}

/// The top eigenpair of T_* on the sphere triangulation, in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormEigen {
    pub n: usize,
    pub mu1: f64,
    /// 1 − μ₁, evaluated without cancellation.
    pub one_minus_mu1: f64,
    pub eta: f64,
    pub f1_norm_sqr: f64,
}

impl ClosedFormEigen {
    /// f₁: η at the loop vertices, 1 elsewhere.
    pub fn vector(&self, loop_vertices: &[usize]) -> DVector<f64> {
        let mut f = DVector::from_element(2 * (self.n + 2), 1.0);
        for &v in loop_vertices {
            f[v] = self.eta;
        }
        f
    }

    /// The layout for marked cofacets (0, 1): [η, η, 1, …, 1, η, η, 1, …, 1].
    pub fn default_vector(&self) -> DVector<f64> {
        let m = self.n + 2;
        self.vector(&[0, 1, m, m + 1])
    }

    pub fn sin_theta1(&self) -> f64 {
        (self.one_minus_mu1 * (1.0 + self.mu1)).sqrt()
    }

    /// θ₁ = arccos μ₁, via atan2 so that small angles keep full precision.
    pub fn theta1(&self) -> f64 {
        self.sin_theta1().atan2(self.mu1)
    }
}

pub fn mu1_closed_form(n: usize) -> Result<ClosedFormEigen> {
    if n < 2 {
        return Err(Error::DimensionTooLow { required: 2, actual: n });
    }
    let nf = n as f64;
    let root = (nf * (nf + 8.0)).sqrt();
    Ok(ClosedFormEigen {
        n,
        mu1: (nf - 2.0 + root) / (2.0 * (nf + 1.0)),
        one_minus_mu1: 8.0 / ((nf + 1.0) * (nf + 4.0 + root)),
        eta: (root - nf) / 4.0,
        f1_norm_sqr: nf / 2.0 * (nf + 8.0 - root),
    })
}

/// π / (2θ₁).
pub fn predicted_tf(n: usize) -> Result<f64> {
    Ok(PI / (2.0 * mu1_closed_form(n)?.theta1()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DVector<f64>,
    /// ‖A v − λ v‖.
    pub residual: f64,
}

/// Full eigendecomposition of a real symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: DMatrix<f64>,
}

impl SymmetricEigen {
    pub fn pair(&self, k: usize, matrix: &DMatrix<f64>) -> EigenPair {
        let v = self.vectors.column(k).into_owned();
        let residual = (matrix * &v - &v * self.values[k]).norm();
        EigenPair {
            value: self.values[k],
            vector: v,
            residual,
        }
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below 1e-12 (relative to ‖A‖_F when that exceeds one).
pub fn symmetric_eigen(matrix: &DMatrix<f64>) -> Result<SymmetricEigen> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let scale = matrix.norm().max(1.0);
    let asym = (matrix - matrix.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let n = rows;
    let mut a = matrix.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let off = |a: &DMatrix<f64>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) >= 1e-12 * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen { values, vectors })
}

/// ∂*_θ f, normalized: f(o(a)) − e^{iθ} f(t(a)) on ordinary arcs and
/// −(1 + e^{iθ}) f(o(a)) on self loops.
pub fn lift_partial(theta: f64, f: &DVector<f64>, graph: &DirectedMultigraph) -> Result<StateVector> {
    if theta.sin().abs() < 1e-12 {
        return Err(Error::DegenerateAngle(theta));
    }
    if f.len() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            actual: f.len(),
        });
    }
    let z = Complex64::from_polar(1.0, theta);
    let amps: Vec<Complex64> = graph
        .arcs()
        .iter()
        .map(|a| {
            if a.self_loop {
                -(1.0 + z) * f[a.origin]
            } else {
                f[a.origin] - z * f[a.terminus]
            }
        })
        .collect();
    let v = StateVector::new(amps);
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::ZeroLift);
    }
    Ok(v.scaled(Complex64::new(1.0 / norm, 0.0)))
}

/// Comparison of σ(T_*) lifted through j(z) = (z + z⁻¹)/2 with the dense
/// spectrum of Γ̂_*.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMapReport {
    pub discriminant_eigenvalues: Vec<f64>,
    pub unitary_eigenvalues: Vec<Complex64>,
    /// Largest distance from some e^{±i arccos λ}, |λ| < 1, to the nearest
    /// unitary eigenvalue.
    pub max_match_error: f64,
    pub matched: usize,
    pub max_modulus_deviation: f64,
    pub contains_plus_one: bool,
    pub contains_minus_one: bool,
}

pub fn spectral_map_check(graph: &DirectedMultigraph) -> Result<SpectralMapReport> {
    if graph.arc_count() > DENSE_ARC_LIMIT {
        return Err(Error::TooLarge(graph.arc_count(), DENSE_ARC_LIMIT));
    }
    let t = discriminant(graph)?;
    let lambdas = symmetric_eigen(&t.matrix)?.values;
    let dense = gamma_star(graph)?.to_dense().map(|z| z.re);
    let schur = nalgebra::Schur::try_new(dense, 1e-15, 100_000).ok_or(Error::NoConvergence(100_000))?;
    let spectrum: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    let nearest = |z: Complex64| spectrum.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for &l in &lambdas {
        if l.abs() < 1.0 - 1e-9 {
            let theta = l.acos();
            for s in [theta, -theta] {
                worst = worst.max(nearest(Complex64::from_polar(1.0, s)));
            }
            matched += 1;
        }
    }
    Ok(SpectralMapReport {
        discriminant_eigenvalues: lambdas,
        max_match_error: worst,
        matched,
        max_modulus_deviation: spectrum.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max),
        contains_plus_one: nearest(Complex64::new(1.0, 0.0)) < 1e-8,
        contains_minus_one: nearest(Complex64::new(-1.0, 0.0)) < 1e-8,
        unitary_eigenvalues: spectrum,
    })
}

/// Closed form against the Jacobi eigensolve for the sphere of dimension n,
/// marked cofacets (0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCheck {
    pub n: usize,
    pub mu1_closed: f64,
    pub mu1_numeric: f64,
    /// |⟨f₁, v⟩| / (‖f₁‖‖v‖).
    pub alignment: f64,
    /// ‖T_* f₁ − μ₁ f₁‖ / ‖f₁‖.
    pub closed_residual: f64,
    /// ‖T_* v − λ v‖ for the numeric top pair.
    pub numeric_residual: f64,
    pub f1_norm_sqr_closed: f64,
    pub f1_norm_sqr_summed: f64,
    /// The whole numeric spectrum, descending.
    pub spectrum: Vec<f64>,
}

impl EigenCheck {
    pub fn passes(&self) -> bool {
        (self.mu1_closed - self.mu1_numeric).abs() < 1e-10
            && self.alignment > 1.0 - 1e-10
            && self.closed_residual < 1e-10
            && (self.f1_norm_sqr_closed - self.f1_norm_sqr_summed).abs() < 1e-10 * self.f1_norm_sqr_closed
    }
}

/// The deformed graph for the sphere of dimension n with τ_* = |σ_i| ∩ |σ_j|.
pub fn sphere_search_graph(n: usize, i: usize, j: usize) -> Result<DirectedMultigraph> {
    let s = sphere_triangulation(n)?;
    let m = MarkedFace::from_facets(&s, i, j)?;
    deformed_graph(&s, &m)
}

pub fn eigen_check(n: usize) -> Result<EigenCheck> {
    let closed = mu1_closed_form(n)?;
    let g = sphere_search_graph(n, 0, 1)?;
    let t = discriminant(&g)?;
    let eig = symmetric_eigen(&t.matrix)?;
    let top = eig.pair(0, &t.matrix);
    let f1 = closed.vector(&t.loop_vertices);
    let alignment = f1.dot(&top.vector).abs() / (f1.norm() * top.vector.norm());
    Ok(EigenCheck {
        n,
        mu1_closed: closed.mu1,
        mu1_numeric: top.value,
        alignment,
        closed_residual: (&t.matrix * &f1 - &f1 * closed.mu1).norm() / f1.norm(),
        numeric_residual: top.residual,
        f1_norm_sqr_closed: closed.f1_norm_sqr,
        f1_norm_sqr_summed: f1.iter().map(|x| x * x).sum(),
        spectrum: eig.values,
    })
}

/// Overlaps of the initial and target states with β± = (α₊ ± α₋)/√2,
/// α± = ∂*_{±θ₁} f₁.
#[derive(Clone, Debug, PartialEq)]
pub struct Overlaps {
    pub n: usize,
    /// ⟨ψ_IN, β₋⟩.
    pub psi_in_beta_minus: Complex64,
    /// ⟨ψ_Tar, β₊⟩.
    pub psi_tar_beta_plus: Complex64,
    /// |⟨β₊, β₋⟩|.
    pub beta_overlap: f64,
    /// max ‖Γ̂_* α± − e^{±iθ₁} α±‖.
    pub lift_residual: f64,
}

pub fn overlaps(n: usize) -> Result<Overlaps> {
    let closed = mu1_closed_form(n)?;
    let g = sphere_search_graph(n, 0, 1)?;
    let loops = g.self_loops();
    let f1 = closed.vector(&discriminant(&g)?.loop_vertices);
    let theta = closed.theta1();
    let gamma = gamma_star(&g)?;
    let mut lift_residual: f64 = 0.0;
    let mut alpha = Vec::new();
    for s in [theta, -theta] {
        let a = lift_partial(s, &f1, &g)?;
        let image = gamma.apply(&a)?;
        let expected = a.scaled(Complex64::from_polar(1.0, s));
        lift_residual = lift_residual.max(
            image
                .amplitudes()
                .iter()
                .zip(expected.amplitudes())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt(),
        );
        alpha.push(a);
    }
    let r = 1.0 / 2f64.sqrt();
    let combine = |sign: f64| {
        StateVector::new(
            alpha[0]
                .amplitudes()
                .iter()
                .zip(alpha[1].amplitudes())
                .map(|(p, m)| (p + m * sign) * r)
                .collect(),
        )
    };
    let beta_plus = combine(1.0);
    let beta_minus = combine(-1.0);
    let psi_in = uniform_state(g.arc_count());
    let mut tar = vec![Complex64::new(0.0, 0.0); g.arc_count()];
    for &a in &loops {
        tar[a] = Complex64::new(0.5, 0.0);
    }
    let psi_tar = StateVector::new(tar);
    Ok(Overlaps {
        n,
        psi_in_beta_minus: psi_in.inner(&beta_minus),
        psi_tar_beta_plus: psi_tar.inner(&beta_plus),
        beta_overlap: beta_plus.inner(&beta_minus).norm(),
        lift_residual,
    })
}
