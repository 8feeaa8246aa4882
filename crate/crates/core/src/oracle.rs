//! Brute-force many-body reference for small lattices.
//!
//! The Hamiltonian is built directly in the occupation-number basis and
//! diagonalized with a dense cyclic Jacobi solver. Nothing here goes through
//! the one-particle density matrix, so it checks the Wick route in
//! [`crate::fermion`] independently.
//!
//! Sign convention: a basis state with occupied sites `s_1 < s_2 < ...` is
//! `c†_{s_1} c†_{s_2} ... |0>`. Moving an operator on site `k` into place
//! passes every occupied site below `k`, so `c_k` and `c†_k` pick up
//! `(-1)^{#occupied sites < k}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fermion::{
    assemble_hamiltonian, correlators, ground_state_density_matrix, Correlators, Hoppings,
};
use crate::lattice::Lattice;

pub const MAX_SITES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    n_sites: usize,
    n_particles: usize,
    states: Vec<u32>,
}

impl FockBasis {
    pub fn new(n_sites: usize, n_particles: usize) -> Result<Self> {
        if n_sites > MAX_SITES || n_particles > n_sites {
            return Err(Error::OracleTooLarge {
                sites: n_sites,
                particles: n_particles,
            });
        }
        let states = (0u32..(1u32 << n_sites))
            .filter(|s| s.count_ones() as usize == n_particles)
            .collect();
        Ok(FockBasis {
            n_sites,
            n_particles,
            states,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// Bitmasks in increasing order; bit `k` is the occupation of site `k`.
    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: u32) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

#[inline]
fn parity_below(state: u32, site: usize) -> f64 {
    let below = state & ((1u32 << site) - 1);
    if below.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `c_site |state>` as `(new state, sign)`, or `None` when the site is empty.
pub fn annihilate(state: u32, site: usize) -> Option<(u32, f64)> {
    (state >> site & 1 == 1).then(|| (state & !(1 << site), parity_below(state, site)))
}

/// `c†_site |state>`, or `None` when the site is occupied.
pub fn create(state: u32, site: usize) -> Option<(u32, f64)> {
    (state >> site & 1 == 0).then(|| (state | (1 << site), parity_below(state, site)))
}

/// `c†_i c_j |state>`.
pub fn hop(state: u32, i: usize, j: usize) -> Option<(u32, f64)> {
    let (s1, a) = annihilate(state, j)?;
    let (s2, b) = create(s1, i)?;
    Some((s2, a * b))
}

#[derive(Debug, Clone)]
pub struct ManyBodyState {
    pub basis: FockBasis,
    pub amplitudes: Vec<f64>,
    pub energy: f64,
    /// Gap to the first excited many-body level.
    pub gap: f64,
    pub degenerate: bool,
}

/// Dense many-body Hamiltonian `Σ_e t_e (c†_i c_j + c†_j c_i)`, row-major.
pub fn many_body_hamiltonian(
    lattice: &Lattice,
    hoppings: &Hoppings,
    basis: &FockBasis,
) -> Result<Vec<f64>> {
    if hoppings.len() != lattice.n_edges() {
        return Err(Error::LengthMismatch {
            expected: lattice.n_edges(),
            got: hoppings.len(),
        });
    }
    let dim = basis.len();
    let mut h = vec![0.0; dim * dim];
    for (col, &s) in basis.states().iter().enumerate() {
        for (&(i, j), &t) in lattice.edges().iter().zip(hoppings.as_slice()) {
            for (a, b) in [(i, j), (j, i)] {
                if let Some((s2, sign)) = hop(s, a, b) {
                    let row = basis.index_of(s2).expect("hop conserves particle number");
                    h[row * dim + col] += t * sign;
                }
            }
        }
    }
    Ok(h)
}

pub fn many_body_ground_state(
    lattice: &Lattice,
    hoppings: &Hoppings,
    n: usize,
) -> Result<ManyBodyState> {
    if lattice.n_sites() > MAX_SITES {
        return Err(Error::OracleTooLarge {
            sites: lattice.n_sites(),
            particles: n,
        });
    }
    if n > lattice.n_sites() {
        return Err(Error::FillingOutOfRange {
            n,
            n_sites: lattice.n_sites(),
        });
    }
    let basis = FockBasis::new(lattice.n_sites(), n)?;
    let dim = basis.len();
    let h = many_body_hamiltonian(lattice, hoppings, &basis)?;
    let (values, vectors) = jacobi_eigen(h, dim);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let k0 = order[0];
    let energy = values[k0];
    let gap = order
        .get(1)
        .map_or(f64::INFINITY, |&k1| values[k1] - energy);
    let scale = values.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let mut amplitudes: Vec<f64> = (0..dim).map(|r| vectors[r * dim + k0]).collect();
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    let sign = match amplitudes.iter().find(|a| a.abs() > 1e-12) {
        Some(&a) if a < 0.0 => -1.0,
        _ => 1.0,
    };
    for a in &mut amplitudes {
        *a *= sign / norm;
    }
    Ok(ManyBodyState {
        basis,
        amplitudes,
        energy,
        gap,
        degenerate: gap < 1e-10 * scale,
    })
}

/// Cyclic Jacobi eigensolver for a dense symmetric row-major matrix.
/// Returns unsorted eigenvalues and the eigenvector matrix (columns).
pub fn jacobi_eigen(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    (values, v)
}

fn check_sites(basis: &FockBasis, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::SameSite(i));
    }
    for index in [i, j] {
        if index >= basis.n_sites() {
            return Err(Error::SiteOutOfRange {
                index,
                n_sites: basis.n_sites(),
            });
        }
    }
    Ok(())
}

/// `<n_i>` as a literal expectation value.
pub fn occupation(state: &ManyBodyState, i: usize) -> f64 {
    state
        .basis
        .states()
        .iter()
        .zip(&state.amplitudes)
        .filter(|(s, _)| *s >> i & 1 == 1)
        .map(|(_, a)| a * a)
        .sum()
}

/// `v`, `y`, `z` summed over basis states, with `z = <c†_j c_i>`.
pub fn oracle_correlators(state: &ManyBodyState, i: usize, j: usize) -> Result<Correlators> {
    check_sites(&state.basis, i, j)?;
    let mut both_empty = 0.0;
    let mut both_full = 0.0;
    let mut z = 0.0;
    for (&s, &a) in state.basis.states().iter().zip(&state.amplitudes) {
        let p = a * a;
        match (s >> i & 1 == 1, s >> j & 1 == 1) {
            (false, false) => both_empty += p,
            (true, true) => both_full += p,
            _ => {}
        }
        if let Some((s2, sign)) = hop(s, j, i) {
            let k = state.basis.index_of(s2).expect("same particle number");
            z += state.amplitudes[k] * sign * a;
        }
    }
    Ok(Correlators {
        v: both_empty,
        y: both_full,
        z,
    })
}

pub fn oracle_concurrence(state: &ManyBodyState, i: usize, j: usize) -> Result<f64> {
    let c = oracle_correlators(state, i, j)?;
    Ok(2.0 * (c.z.abs() - (c.v * c.y).max(0.0).sqrt()).max(0.0))
}

/// Largest absolute differences between the Wick route and the many-body
/// reference over all site pairs of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleComparison {
    pub v: f64,
    pub y: f64,
    pub z: f64,
    pub concurrence: f64,
    /// Either side saw a degenerate ground state.
    pub degenerate: bool,
}

impl OracleComparison {
    pub fn max(&self) -> f64 {
        self.v.max(self.y).max(self.z).max(self.concurrence)
    }
}

pub fn compare_with_oracle(
    lattice: &Lattice,
    hoppings: &Hoppings,
    n: usize,
) -> Result<OracleComparison> {
    let h = assemble_hamiltonian(lattice, hoppings)?;
    let dm = ground_state_density_matrix(&h, n)?;
    let state = many_body_ground_state(lattice, hoppings, n)?;
    let mut out = OracleComparison {
        degenerate: dm.degenerate || state.degenerate,
        ..OracleComparison::default()
    };
    for i in 0..lattice.n_sites() {
        for j in 0..lattice.n_sites() {
            if i == j {
                continue;
            }
            let w = correlators(&dm, i, j)?;
            let o = oracle_correlators(&state, i, j)?;
            out.v = out.v.max((w.v - o.v).abs());
            out.y = out.y.max((w.y - o.y).abs());
            out.z = out.z.max((w.z - o.z).abs());
            let dc = (w.concurrence() - oracle_concurrence(&state, i, j)?).abs();
            out.concurrence = out.concurrence.max(dc);
        }
    }
    Ok(out)
}

/// A random connected graph on `3..=max_sites` sites (a ring plus random
/// chords), hoppings uniform in `[-5, 0]` and a random filling.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_sites: usize,
) -> Result<(Lattice, Hoppings, usize)> {
    let n_sites = rng.gen_range(3..=max_sites.max(3));
    let mut edges: Vec<(usize, usize)> = (0..n_sites).map(|i| (i, (i + 1) % n_sites)).collect();
    for i in 0..n_sites {
        for j in i + 2..n_sites {
            if (i, j) != (0, n_sites - 1) && rng.gen_bool(0.25) {
                edges.push((i, j));
            }
        }
    }
    let lattice = Lattice::new(format!("random-{n_sites}"), n_sites, edges, None)?;
    let hoppings = Hoppings::new(
        (0..lattice.n_edges())
            .map(|_| rng.gen_range(-5.0..=0.0))
            .collect(),
    )?;
    let n = rng.gen_range(0..=n_sites);
    Ok((lattice, hoppings, n))
}

#[derive(Debug, Clone)]
pub struct OracleCase {
    pub lattice: String,
    pub n_sites: usize,
    pub filling: usize,
    pub comparison: OracleComparison,
}

/// `trials` random non-degenerate instances compared against the oracle.
/// Degenerate draws are discarded and redrawn.
pub fn random_equivalence(trials: usize, seed: u64, max_sites: usize) -> Result<Vec<OracleCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(trials);
    while cases.len() < trials {
        let (lattice, hoppings, n) = random_instance(&mut rng, max_sites)?;
        let comparison = compare_with_oracle(&lattice, &hoppings, n)?;
        if comparison.degenerate {
            continue;
        }
        cases.push(OracleCase {
            lattice: lattice.name().to_string(),
            n_sites: lattice.n_sites(),
            filling: n,
            comparison,
        });
    }
    Ok(cases)
}
