//! One-body observables of the evolved product state `prod_s c_s^dag |0>`.
//!
//! Every quantity follows from the two-point function
//! `<c_a^dag c_b>(t) = sum_s conj(f_s^a) f_s^b` over the initially filled
//! sender sites, which is the same for fermions and bosons.

use num_complex::Complex64;
use serde::Serialize;

use crate::amplitudes::{grid, golden_max, Propagator};
use crate::chain::{ChainSpec, Tridiagonal};
use crate::error::{Error, Result};

/// Amplitudes `f_s^j(t)` for every sender `s` (rows) and site `j`.
fn sender_rows(prop: &Propagator, t: f64) -> Vec<Vec<Complex64>> {
    let ph = prop.phases(t);
    (0..prop.n_s())
        .map(|s| (0..prop.len()).map(|j| prop.amplitude_with(&ph, t, s, j)).collect())
        .collect()
}

fn correlation(rows: &[Vec<Complex64>], a: usize, b: usize) -> Complex64 {
    rows.iter().map(|r| r[a].conj() * r[b]).sum()
}

/// `<n_j(t)>` at one site.
pub fn occupation(prop: &Propagator, t: f64, site: usize) -> Result<f64> {
    if site >= prop.len() {
        return Err(Error::SiteOutOfRange {
            index: site + 1,
            len: prop.len(),
        });
    }
    Ok(occupations(prop, t)[site])
}

/// `<n_j(t)>` at every site.
pub fn occupations(prop: &Propagator, t: f64) -> Vec<f64> {
    let rows = sender_rows(prop, t);
    (0..prop.len())
        .map(|j| rows.iter().map(|r| r[j].norm_sqr()).sum())
        .collect()
}

/// Receiver magnetization `||F_s^r||_F^2 - n_r/2` (all spins down gives
/// `-n_r/2`).
pub fn magnetization_receiver(prop: &Propagator, t: f64) -> f64 {
    prop.sr_submatrix_at(t).frobenius_sq() - prop.n_s() as f64 / 2.0
}

fn receiver_start(prop: &Propagator) -> usize {
    prop.len() - prop.n_s()
}

/// `sum_i <c_{i+1}^dag c_i + h.c.>/2` over the bonds inside the receiver
/// block, i.e. `sum (conj(f_s^i) f_s^{i+1} + c.c.)`.
pub fn interaction_energy(prop: &Propagator, t: f64) -> f64 {
    let rows = sender_rows(prop, t);
    (receiver_start(prop)..prop.len() - 1)
        .map(|i| 2.0 * correlation(&rows, i, i + 1).re)
        .sum()
}

/// Energy exchanged by switching the two weak links off at `t`:
/// `tr[H_1 (rho(0) - rho(t))]` with `H_1` the `j0` links. The `rho(0)`
/// term vanishes for the product initial state.
pub fn switching_energy(prop: &Propagator, j0: f64, t: f64) -> f64 {
    let rows = sender_rows(prop, t);
    let n_s = prop.n_s();
    let links = [n_s - 1, receiver_start(prop) - 1];
    let h1: f64 = links
        .iter()
        .map(|&i| 0.5 * j0 * 2.0 * correlation(&rows, i, i + 1).re)
        .sum();
    -h1
}

/// Total `<H>` over the whole chain for the given single-particle matrix.
pub fn total_energy(prop: &Propagator, a: &Tridiagonal, t: f64) -> f64 {
    let rows = sender_rows(prop, t);
    let onsite: f64 = (0..prop.len()).map(|i| a.diag[i] * correlation(&rows, i, i).re).sum();
    let hop: f64 = (0..prop.len() - 1)
        .map(|i| a.off[i] * 2.0 * correlation(&rows, i, i + 1).re)
        .sum();
    onsite + hop
}

/// Battery energy split into its one-body (field) and two-body (hopping)
/// parts, spin convention `S^z = n - 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BatteryEnergy {
    pub e_b: f64,
    pub e_onsite: f64,
    pub e_hop: f64,
}

pub fn battery_energy(prop: &Propagator, spec: &ChainSpec, t: f64) -> BatteryEnergy {
    let rows = sender_rows(prop, t);
    let n_b = prop.n_s();
    let start = receiver_start(prop);
    let filled: f64 = (start..prop.len()).map(|j| correlation(&rows, j, j).re).sum();
    let e_onsite = spec.h * (filled - n_b as f64 / 2.0);
    let e_i: f64 = (start..prop.len() - 1)
        .map(|i| 2.0 * correlation(&rows, i, i + 1).re)
        .sum();
    let e_hop = 0.5 * spec.j * e_i;
    BatteryEnergy {
        e_b: e_onsite + e_hop,
        e_onsite,
        e_hop,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub times: Vec<f64>,
    pub e_b: Vec<f64>,
    pub e_onsite: Vec<f64>,
    pub e_hop: Vec<f64>,
    /// `E_B(t)/t`; zero at `t = 0`.
    pub p_s: Vec<f64>,
    /// Switching energy at every grid time.
    pub de_sw: Vec<f64>,
    pub e_bar: f64,
    pub tau_bar: f64,
    pub p_tilde: f64,
    pub tau_tilde: f64,
    /// `E_bar / tau_bar`.
    pub p_bar: f64,
}

impl BatteryReport {
    pub fn max_abs_e_hop(&self) -> f64 {
        self.e_hop.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_switching(&self) -> f64 {
        self.de_sw.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Charging figures of merit on a strictly increasing grid. Maxima are
/// attributed to the earliest grid time attaining them.
pub fn battery_metrics(prop: &Propagator, spec: &ChainSpec, times: &[f64]) -> Result<BatteryReport> {
    use rayon::prelude::*;
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) || times[0] < 0.0 {
        return Err(Error::InvalidArgument("battery grid must be non-negative and strictly increasing".into()));
    }
    if spec.h <= 1.0 {
        log::warn!("battery field h={} does not make the charged state the top level", spec.h);
    }
    let rows: Vec<(BatteryEnergy, f64)> = times
        .par_iter()
        .map(|&t| (battery_energy(prop, spec, t), switching_energy(prop, spec.j0, t)))
        .collect();
    let e_b: Vec<f64> = rows.iter().map(|r| r.0.e_b).collect();
    let p_s: Vec<f64> = times
        .iter()
        .zip(&e_b)
        .map(|(&t, &e)| if t > 0.0 { e / t } else { 0.0 })
        .collect();
    let first_max = |v: &[f64], skip_zero_time: bool| {
        let mut best: Option<usize> = None;
        for (i, x) in v.iter().enumerate() {
            if skip_zero_time && times[i] == 0.0 {
                continue;
            }
            if best.is_none_or(|b| *x > v[b]) {
                best = Some(i);
            }
        }
        best
    };
    let ib = first_max(&e_b, false).expect("non-empty grid");
    let ip = first_max(&p_s, true).unwrap_or(ib);
    Ok(BatteryReport {
        e_bar: e_b[ib],
        tau_bar: times[ib],
        p_tilde: p_s[ip],
        tau_tilde: times[ip],
        p_bar: if times[ib] > 0.0 { e_b[ib] / times[ib] } else { 0.0 },
        e_onsite: rows.iter().map(|r| r.0.e_onsite).collect(),
        e_hop: rows.iter().map(|r| r.0.e_hop).collect(),
        de_sw: rows.iter().map(|r| r.1).collect(),
        times: times.to_vec(),
        e_b,
        p_s,
    })
}

/// Sampling grid for the battery: uniform steps of `pi / (20 fast)` over
/// `[0, t_max]`, with the neighbourhoods of the energy and power maxima
/// refined by golden section so that their extrema are grid points.
pub fn battery_grid(prop: &Propagator, spec: &ChainSpec, fast: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(fast > 0.0 && t_max > 0.0) {
        return Err(Error::InvalidArgument("battery grid needs positive scale and t_max".into()));
    }
    let step = std::f64::consts::PI / (20.0 * fast);
    let mut times = grid(0.0, t_max, step);
    let energy = |t: f64| Ok(battery_energy(prop, spec, t).e_b);
    let power = |t: f64| Ok(if t > 0.0 { battery_energy(prop, spec, t).e_b / t } else { f64::NEG_INFINITY });
    let coarse = battery_metrics(prop, spec, &times)?;
    let (t_e, _) = golden_max(&energy, (coarse.tau_bar - step).max(0.0), coarse.tau_bar + step)?;
    let (t_p, _) = golden_max(&power, (coarse.tau_tilde - step).max(step * 1e-3), coarse.tau_tilde + step)?;
    for t in [t_e, t_p] {
        if let Err(pos) = times.binary_search_by(|x| x.total_cmp(&t)) {
            times.insert(pos, t);
        }
    }
    Ok(times)
}
