//! Free spinless fermions on a lattice: the one-particle Hamiltonian, the
//! Slater-determinant ground state at fixed filling, and pairwise concurrence
//! evaluated through Wick factorization of the one-particle density matrix.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Relative Fermi-level gap below which a filling is flagged as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Maximum accepted eigen-residual, relative to the spectral norm.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// One hopping integral per lattice edge. Doubles as the GA chromosome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hoppings(Vec<f64>);

pub type Chromosome = Hoppings;

impl Hoppings {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(Hoppings(values))
    }

    pub fn uniform(n_edges: usize, t: f64) -> Self {
        Hoppings(vec![t; n_edges])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Same hoppings multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Hoppings(self.0.iter().map(|t| t * factor).collect())
    }
}

impl std::ops::Index<usize> for Hoppings {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// `H_ij = H_ji = t_e` for every edge `e = (i, j)`, zero elsewhere.
pub fn assemble_hamiltonian(lattice: &Lattice, hoppings: &Hoppings) -> Result<DMatrix<f64>> {
    if hoppings.len() != lattice.n_edges() {
        return Err(Error::LengthMismatch {
            expected: lattice.n_edges(),
            got: hoppings.len(),
        });
    }
    let n = lattice.n_sites();
    let mut h = DMatrix::zeros(n, n);
    for (&(i, j), &t) in lattice.edges().iter().zip(hoppings.as_slice()) {
        h[(i, j)] = t;
        h[(j, i)] = t;
    }
    Ok(h)
}

/// Sorted eigenpairs of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`, first nonzero entry positive.
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// Full symmetric eigendecomposition, ascending and stably sorted.
///
/// Only the residuals of the first `check` eigenpairs are verified.
pub fn symmetric_spectrum(h: &DMatrix<f64>, check: usize) -> Result<Spectrum> {
    let n = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let sign = match v.iter().find(|x| x.abs() > 1e-12) {
            Some(&x) if x < 0.0 => -1.0,
            _ => 1.0,
        };
        vectors.set_column(col, &(v * sign));
    }
    let spectrum = Spectrum { values, vectors };

    let scale = spectrum.spectral_norm();
    let check = check.min(n);
    if check > 0 {
        let occ = spectrum.vectors.columns(0, check);
        let hv = h * occ;
        let mut residual: f64 = 0.0;
        for k in 0..check {
            let r = hv.column(k) - occ.column(k) * spectrum.values[k];
            residual = residual.max(r.norm());
        }
        if residual > RESIDUAL_TOL * scale {
            return Err(Error::EigenNonConvergence { residual });
        }
    }
    Ok(spectrum)
}

/// Ground-state one-particle density matrix `γ_ij = <c†_j c_i>`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub gamma: DMatrix<f64>,
    /// All orbitals as columns, ascending in energy; the first `filling` are occupied.
    pub orbitals: DMatrix<f64>,
    pub filling: usize,
    /// Set when the `n`-th and `(n+1)`-th orbital energies coincide, so the
    /// occupied subspace is not unique.
    pub degenerate: bool,
    /// `ε_{n+1} − ε_n`; infinite for an empty or full band.
    pub fermi_gap: f64,
}

impl DensityMatrix {
    pub fn n_sites(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.gamma.trace()
    }
}

/// Fills the `n` lowest orbitals. Degenerate Fermi levels are occupied in
/// sorted order and flagged.
pub fn ground_state_density_matrix(h: &DMatrix<f64>, n: usize) -> Result<DensityMatrix> {
    let n_sites = h.nrows();
    if n > n_sites {
        return Err(Error::FillingOutOfRange { n, n_sites });
    }
    let spectrum = symmetric_spectrum(h, n)?;
    Ok(density_from_spectrum(spectrum, n))
}

pub(crate) fn density_from_spectrum(spectrum: Spectrum, n: usize) -> DensityMatrix {
    let n_sites = spectrum.values.len();
    let tol = DEGENERACY_TOL * spectrum.spectral_norm().max(1.0);
    let mut spectrum = spectrum;
    if 0 < n && n < n_sites && spectrum.values[n] - spectrum.values[n - 1] < tol {
        let mut lo = n - 1;
        while lo > 0 && spectrum.values[lo] - spectrum.values[lo - 1] < tol {
            lo -= 1;
        }
        let mut hi = n + 1;
        while hi < n_sites && spectrum.values[hi] - spectrum.values[hi - 1] < tol {
            hi += 1;
        }
        canonicalize_shell(&mut spectrum.vectors, lo..hi, 2 * n > n_sites);
    }
    // sum over the smaller orbital set; a full band is exactly the identity
    let gamma = if 2 * n <= n_sites {
        let occ = spectrum.vectors.columns(0, n);
        occ * occ.transpose()
    } else {
        let empty = spectrum.vectors.columns(n, n_sites - n);
        DMatrix::identity(n_sites, n_sites) - empty * empty.transpose()
    };
    let fermi_gap = if n == 0 || n == n_sites {
        f64::INFINITY
    } else {
        spectrum.values[n] - spectrum.values[n - 1]
    };
    let degenerate = fermi_gap < tol;
    DensityMatrix {
        gamma,
        orbitals: spectrum.vectors,
        filling: n,
        degenerate,
        fermi_gap,
    }
}

/// Replaces the columns `shell` of a degenerate level by a basis that depends
/// only on the subspace: Gram-Schmidt over the projector's columns taken in
/// site order. With `reversed` the basis fills the shell from its top, so
/// holes above half filling take the same states particles take below it.
fn canonicalize_shell(vectors: &mut DMatrix<f64>, shell: std::ops::Range<usize>, reversed: bool) {
    let dim = shell.len();
    let block = vectors.columns(shell.start, dim).into_owned();
    let projector = &block * block.transpose();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(dim);
    for s in 0..projector.ncols() {
        if basis.len() == dim {
            break;
        }
        let mut w = projector.column(s).into_owned();
        for _ in 0..2 {
            for g in &basis {
                let c = g.dot(&w);
                w.axpy(-c, g, 1.0);
            }
        }
        let norm = w.norm();
        if norm * norm > 1e-8 {
            basis.push(w / norm);
        }
    }
    if basis.len() == dim {
        for (k, g) in basis.iter().enumerate() {
            let col = if reversed {
                shell.end - 1 - k
            } else {
                shell.start + k
            };
            vectors.set_column(col, g);
        }
    }
}

/// The two-site reduced density-matrix entries `v`, `y`, `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlators {
    /// Probability that both sites are empty.
    pub v: f64,
    /// `<n_i n_j>`, both sites occupied.
    pub y: f64,
    /// `<c†_j c_i>`.
    pub z: f64,
}

impl Correlators {
    pub fn concurrence(&self) -> f64 {
        (2.0 * (self.z.abs() - (self.v * self.y).sqrt())).clamp(0.0, 1.0)
    }
}

fn check_pair(n_sites: usize, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::SameSite(i));
    }
    for index in [i, j] {
        if index >= n_sites {
            return Err(Error::SiteOutOfRange { index, n_sites });
        }
    }
    Ok(())
}

pub fn correlators(dm: &DensityMatrix, i: usize, j: usize) -> Result<Correlators> {
    check_pair(dm.n_sites(), i, j)?;
    Ok(correlators_unchecked(dm, i, j))
}

/// Gram determinant `|a|²|b|² − (a·b)²` of rows `i` and `j` restricted to
/// orbital columns `cols`, evaluated as `|a|² |b⊥|²` with `b⊥` the part of
/// `b` orthogonal to `a` (projected out twice) to avoid the cancellation.
fn gram_determinant(
    orbitals: &DMatrix<f64>,
    i: usize,
    j: usize,
    cols: std::ops::Range<usize>,
) -> f64 {
    let a: Vec<f64> = cols.clone().map(|k| orbitals[(i, k)]).collect();
    let mut b: Vec<f64> = cols.map(|k| orbitals[(j, k)]).collect();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    if aa == 0.0 {
        return 0.0;
    }
    for _ in 0..2 {
        let c = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / aa;
        for (y, x) in b.iter_mut().zip(&a) {
            *y -= c * x;
        }
    }
    aa * b.iter().map(|y| y * y).sum::<f64>()
}

fn correlators_unchecked(dm: &DensityMatrix, i: usize, j: usize) -> Correlators {
    let n = dm.filling;
    let n_sites = dm.n_sites();
    // Wick: <n_i n_j> = γ_ii γ_jj − γ_ij², and for holes
    // <(1 − n_i)(1 − n_j)> = (1 − γ_ii)(1 − γ_jj) − γ_ij².
    let y = gram_determinant(&dm.orbitals, i, j, 0..n).min(1.0);
    let v = gram_determinant(&dm.orbitals, i, j, n..n_sites).min(1.0);
    Correlators {
        v,
        y,
        z: dm.gamma[(i, j)],
    }
}

pub fn concurrence(dm: &DensityMatrix, i: usize, j: usize) -> Result<f64> {
    Ok(correlators(dm, i, j)?.concurrence())
}

/// Concurrence of a bond with bond order `γ` at half filling on a
/// particle-hole symmetric structure, where `<n_i> = 1/2`.
pub fn half_filling_concurrence(gamma_ij: f64) -> f64 {
    2.0 * (gamma_ij.abs() + gamma_ij * gamma_ij - 0.25).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceReport {
    /// Concurrence of each lattice edge, in edge order.
    pub per_bond: Vec<f64>,
    /// Average over ordered nearest-neighbor pairs.
    pub c_nn: f64,
    /// `n / N`.
    pub filling_fraction: f64,
    pub degenerate: bool,
}

/// Average nearest-neighbor concurrence. Each edge counts once per direction
/// and the sum is normalized by the total degree, `zN` on a regular lattice.
pub fn nn_concurrence(lattice: &Lattice, dm: &DensityMatrix) -> Result<ConcurrenceReport> {
    if dm.n_sites() != lattice.n_sites() {
        return Err(Error::LengthMismatch {
            expected: lattice.n_sites(),
            got: dm.n_sites(),
        });
    }
    let per_bond: Vec<f64> = lattice
        .edges()
        .iter()
        .map(|&(i, j)| correlators_unchecked(dm, i, j).concurrence())
        .collect();
    let total_degree = 2 * lattice.n_edges();
    let c_nn = if total_degree == 0 {
        0.0
    } else {
        2.0 * per_bond.iter().sum::<f64>() / total_degree as f64
    };
    Ok(ConcurrenceReport {
        per_bond,
        c_nn,
        filling_fraction: dm.filling as f64 / lattice.n_sites() as f64,
        degenerate: dm.degenerate,
    })
}

/// Hamiltonian, ground state and concurrence report in one call.
pub fn evaluate(lattice: &Lattice, hoppings: &Hoppings, n: usize) -> Result<ConcurrenceReport> {
    let h = assemble_hamiltonian(lattice, hoppings)?;
    let dm = ground_state_density_matrix(&h, n)?;
    nn_concurrence(lattice, &dm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondClass {
    Weak,
    Medium,
    Strong,
}

/// Weak below `|t| = 1`, strong from `|t| = 3`.
pub fn bond_class(t: f64) -> BondClass {
    let a = t.abs();
    if a > 5.0 {
        log::warn!("hopping {t} outside [-5, 5], classed as strong");
    }
    if a < 1.0 {
        BondClass::Weak
    } else if a < 3.0 {
        BondClass::Medium
    } else {
        BondClass::Strong
    }
}
