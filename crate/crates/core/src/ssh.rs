//! Half-filled dimerized chain with alternating hoppings `1 + α` (strong) and
//! `1 − α` (weak), in momentum space.
//!
//! Bond orders are Brillouin-zone averages over `n_cells` momenta. The grid is
//! chosen closed-shell: periodic for odd `n_cells`, half-shifted
//! (antiperiodic) for even `n_cells`, so `k = π` never appears and the
//! uniform chain has no half-filled zero mode. [`real_space_chain`] builds the
//! matching finite ring.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{half_filling_concurrence, Hoppings};
use crate::lattice::Lattice;

/// Momentum points standing in for the thermodynamic limit.
pub const DEFAULT_CELLS: usize = 4096;
/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

fn check_cells(n_cells: usize) -> Result<()> {
    if n_cells < 2 {
        return Err(Error::InvalidSize(format!(
            "need n_cells >= 2, got {n_cells}"
        )));
    }
    Ok(())
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h <= 1e-2) {
        return Err(Error::InvalidStep(h));
    }
    Ok(())
}

/// Cosines of the closed-shell momentum grid.
pub fn momentum_cosines(n_cells: usize) -> Vec<f64> {
    let shift = if n_cells.is_multiple_of(2) { 0.5 } else { 0.0 };
    (0..n_cells)
        .map(|m| (2.0 * PI * (m as f64 + shift) / n_cells as f64).cos())
        .collect()
}

/// Bond orders and their first two α-derivatives, analytic per momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondOrderJet {
    pub strong: [f64; 3],
    pub weak: [f64; 3],
}

fn jet_unchecked(alpha: f64, cosines: &[f64]) -> BondOrderJet {
    let (t1, t2) = (1.0 + alpha, 1.0 - alpha);
    let d = t1 - t2;
    let mut strong = [0.0; 3];
    let mut weak = [0.0; 3];
    for &c in cosines {
        let f = (t1 * t1 + t2 * t2 + 2.0 * t1 * t2 * c).sqrt();
        let f1 = d * (1.0 - c) / f;
        let f2 = (1.0 - c) * (2.0 * f - d * f1) / (f * f);
        // g = num / |f|, with num linear in α
        let terms = [(t1 + t2 * c, 1.0 - c), (t2 + t1 * c, c - 1.0)];
        for ((num, num1), acc) in terms.into_iter().zip([&mut strong, &mut weak]) {
            acc[0] += num / f;
            acc[1] += num1 / f - num * f1 / (f * f);
            acc[2] +=
                -2.0 * num1 * f1 / (f * f) - num * f2 / (f * f) + 2.0 * num * f1 * f1 / (f * f * f);
        }
    }
    let norm = 2.0 * cosines.len() as f64;
    for x in strong.iter_mut().chain(weak.iter_mut()) {
        *x /= norm;
    }
    if t2 == 0.0 {
        // isolated dimers: the weak bond carries no coherence at all
        weak[0] = 0.0;
    }
    BondOrderJet { strong, weak }
}

pub fn bond_order_jet(alpha: f64, n_cells: usize) -> Result<BondOrderJet> {
    check_alpha(alpha)?;
    check_cells(n_cells)?;
    Ok(jet_unchecked(alpha, &momentum_cosines(n_cells)))
}

/// Half-filled ground-state bond orders `(γ_strong, γ_weak)`.
pub fn ssh_bond_orders(alpha: f64, n_cells: usize) -> Result<(f64, f64)> {
    let jet = bond_order_jet(alpha, n_cells)?;
    Ok((jet.strong[0], jet.weak[0]))
}

/// `(C_strong, C_weak)` from the half-filling closed form.
pub fn dimerized_concurrences(alpha: f64, n_cells: usize) -> Result<(f64, f64)> {
    let (gs, gw) = ssh_bond_orders(alpha, n_cells)?;
    Ok((half_filling_concurrence(gs), half_filling_concurrence(gw)))
}

/// Energy per site, `−(1 + α) γ_strong − (1 − α) γ_weak`.
pub fn energy_per_site(alpha: f64, n_cells: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_cells(n_cells)?;
    Ok(energy_unchecked(alpha, &momentum_cosines(n_cells)))
}

/// Valid on `[-1, 1]`: negative α swaps the roles of the two bonds, and the
/// energy is even in α.
fn energy_unchecked(alpha: f64, cosines: &[f64]) -> f64 {
    let jet = jet_unchecked(alpha, cosines);
    -(1.0 + alpha) * jet.strong[0] - (1.0 - alpha) * jet.weak[0]
}

/// First and second derivative of `f` on `[lo, 1]`: central differences in
/// the interior, second-order one-sided stencils where `α ± h` leaves the
/// interval.
fn finite_differences<F>(f: F, alpha: f64, h: f64, lo: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if alpha - h >= lo && alpha + h <= 1.0 {
        let (fm, f0, fp) = (f(alpha - h)?, f(alpha)?, f(alpha + h)?);
        return Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)));
    }
    let s = if alpha - h < lo { 1.0 } else { -1.0 };
    let p = |k: f64| f(alpha + s * k * h);
    let (f0, f1, f2, f3) = (p(0.0)?, p(1.0)?, p(2.0)?, p(3.0)?);
    let d1 = s * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
    let d2 = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
    Ok((d1, d2))
}

/// `dC/dα` for both bonds by finite differences and by the chain rule
/// `2 (1 + 2γ) dγ/dα` (zero wherever the concurrence is clamped to zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceSlopes {
    pub numeric: (f64, f64),
    pub chain_rule: (f64, f64),
}

pub fn concurrence_derivatives(alpha: f64, n_cells: usize, h: f64) -> Result<ConcurrenceSlopes> {
    check_alpha(alpha)?;
    check_cells(n_cells)?;
    check_step(h)?;
    let (ds, _) = finite_differences(|a| Ok(dimerized_concurrences(a, n_cells)?.0), alpha, h, 0.0)?;
    let (dw, _) = finite_differences(|a| Ok(dimerized_concurrences(a, n_cells)?.1), alpha, h, 0.0)?;
    let jet = bond_order_jet(alpha, n_cells)?;
    let chain = |g: [f64; 3]| {
        if g[0] + g[0] * g[0] - 0.25 > 0.0 {
            2.0 * (1.0 + 2.0 * g[0]) * g[1]
        } else {
            0.0
        }
    };
    Ok(ConcurrenceSlopes {
        numeric: (ds, dw),
        chain_rule: (chain(jet.strong), chain(jet.weak)),
    })
}

/// Energy per site and its α-derivatives. `first`/`second` are finite
/// differences of the energy; the `*_expansion` fields rebuild them from
/// analytic bond-order derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDerivatives {
    pub energy: f64,
    pub first: f64,
    pub second: f64,
    pub first_expansion: f64,
    pub second_expansion: f64,
}

pub fn energy_derivatives(alpha: f64, n_cells: usize, h: f64) -> Result<EnergyDerivatives> {
    check_alpha(alpha)?;
    check_cells(n_cells)?;
    check_step(h)?;
    let cosines = momentum_cosines(n_cells);
    let energy = energy_unchecked(alpha, &cosines);
    let (first, second) =
        finite_differences(|a| Ok(energy_unchecked(a, &cosines)), alpha, h, -1.0)?;
    let BondOrderJet { strong: s, weak: w } = bond_order_jet(alpha, n_cells)?;
    let (tp, tm) = (1.0 + alpha, 1.0 - alpha);
    Ok(EnergyDerivatives {
        energy,
        first,
        second,
        first_expansion: -tp * s[1] - tm * w[1] - s[0] + w[0],
        second_expansion: -tp * s[2] - tm * w[2] - 2.0 * s[1] + 2.0 * w[1],
    })
}

/// The α at which the weak-bond concurrence reaches zero, i.e. where
/// `γ_weak + γ_weak² = 1/4`, by bisection to within `tol`.
pub fn locate_weak_bond_vanishing(n_cells: usize, tol: f64) -> Result<f64> {
    check_cells(n_cells)?;
    if tol.is_nan() || tol < 1e-6 {
        return Err(Error::InvalidStep(tol));
    }
    let cosines = momentum_cosines(n_cells);
    let f = |a: f64| {
        let g = jet_unchecked(a, &cosines).weak[0];
        g + g * g - 0.25
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let (flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketFailure { lo, hi });
    }
    // bisect well below tol; the extra steps are cheap
    while hi - lo > tol * 1e-3 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerizedPoint {
    pub alpha: f64,
    pub gamma_strong: f64,
    pub gamma_weak: f64,
    pub c_strong: f64,
    pub c_weak: f64,
    pub e_gs: f64,
}

pub fn dimerized_point(alpha: f64, n_cells: usize) -> Result<DimerizedPoint> {
    let (gs, gw) = ssh_bond_orders(alpha, n_cells)?;
    Ok(DimerizedPoint {
        alpha,
        gamma_strong: gs,
        gamma_weak: gw,
        c_strong: half_filling_concurrence(gs),
        c_weak: half_filling_concurrence(gw),
        e_gs: -(1.0 + alpha) * gs - (1.0 - alpha) * gw,
    })
}

/// One row of the α sweep, as written to CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SshRow {
    pub alpha: f64,
    pub gamma_strong: f64,
    pub gamma_weak: f64,
    pub c_strong: f64,
    pub c_weak: f64,
    pub dc_strong: f64,
    pub dc_weak: f64,
    pub energy: f64,
    pub d_energy: f64,
    pub d2_energy: f64,
}

pub fn ssh_sweep(alphas: &[f64], n_cells: usize, h: f64) -> Result<Vec<SshRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let p = dimerized_point(alpha, n_cells)?;
            let slopes = concurrence_derivatives(alpha, n_cells, h)?;
            let e = energy_derivatives(alpha, n_cells, h)?;
            Ok(SshRow {
                alpha,
                gamma_strong: p.gamma_strong,
                gamma_weak: p.gamma_weak,
                c_strong: p.c_strong,
                c_weak: p.c_weak,
                dc_strong: slopes.numeric.0,
                dc_weak: slopes.numeric.1,
                energy: e.energy,
                d_energy: e.first,
                d2_energy: e.second,
            })
        })
        .collect()
}

/// Ring of `2 n_cells` sites whose half-filled ground state matches
/// [`ssh_bond_orders`]: edge `k` joins sites `k` and `k + 1`, even edges
/// strong (`−(1 + α)`), odd edges weak (`−(1 − α)`). For even `n_cells` the
/// closing bond changes sign (antiperiodic boundary).
pub fn real_space_chain(alpha: f64, n_cells: usize) -> Result<(Lattice, Hoppings)> {
    check_alpha(alpha)?;
    check_cells(n_cells)?;
    let n = 2 * n_cells;
    let lattice = crate::lattice::build_ring(n)?;
    let mut t: Vec<f64> = (0..n)
        .map(|e| {
            if e % 2 == 0 {
                -(1.0 + alpha)
            } else {
                -(1.0 - alpha)
            }
        })
        .collect();
    if n_cells.is_multiple_of(2) {
        t[n - 1] = -t[n - 1];
    }
    Ok((lattice, Hoppings::new(t)?))
}
