//! Heat traces of truncated spectra and numerical extraction of the small-t
//! coefficients.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::hk_coeff::{BoundaryCondition, CoefficientSet, CoefficientSource, FieldKind};
use crate::numeric::CompensatedSum;
use crate::spectrum::{box_pform_spectrum, heat_tail_bound, ModeList};

/// Relative truncation target used when no tolerance is given.
pub const DEFAULT_TRACE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub k: f64,
    pub bound: f64,
}

pub(crate) fn partial_trace(m: &ModeList, t: f64) -> f64 {
    let mut sum = CompensatedSum::new();
    for mode in &m.modes {
        sum.add(mode.multiplicity as f64 * (-t * mode.omega * mode.omega).exp());
    }
    sum.value()
}

/// Truncation bound at t; zero for a list without tail model, which is then
/// taken to be the complete spectrum.
fn trace_bound(m: &ModeList, t: f64) -> Result<f64> {
    match m.tail {
        Some(_) => heat_tail_bound(m, t),
        None => Ok(0.0),
    }
}

/// Smallest t at which the truncation bound is at most `rel_tol` times the trace.
pub fn minimal_usable_t(m: &ModeList, rel_tol: f64) -> Result<f64> {
    let ok = |t: f64| -> Result<bool> { Ok(trace_bound(m, t)? <= rel_tol * partial_trace(m, t)) };
    let mut hi = 1.0;
    while !ok(hi)? {
        hi *= 4.0;
        if hi > 1e12 {
            return Err(Error::InsufficientSpectrum { reason: "truncation bound never drops below tolerance".into() });
        }
    }
    let mut lo = hi;
    while ok(lo)? && lo > 1e-14 {
        lo /= 4.0;
    }
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// K(t) with its truncation bound; refuses when the bound exceeds
/// `rel_tol`·K(t).
pub fn heat_trace_sample(m: &ModeList, t: f64, rel_tol: f64) -> Result<TraceSample> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Numerical(format!("heat trace needs t > 0, got {t}")));
    }
    let k = partial_trace(m, t);
    let bound = trace_bound(m, t)?;
    if bound > rel_tol * k {
        let t_min = minimal_usable_t(m, rel_tol)?;
        return Err(Error::InsufficientSpectrum {
            reason: format!("truncation bound {bound:.3e} at t = {t}; smallest usable t is {t_min:.6e}"),
        });
    }
    Ok(TraceSample { t, k, bound })
}

/// K(t) = Σ mult · e^{−tω²}.
pub fn heat_trace(m: &ModeList, t: f64) -> Result<f64> {
    heat_trace_sample(m, t, DEFAULT_TRACE_TOL).map(|s| s.k)
}

/// Samples at the given times, evaluated in parallel and returned in input order.
pub fn heat_trace_curve(m: &ModeList, ts: &[f64], rel_tol: f64) -> Result<Vec<TraceSample>> {
    ts.par_iter().map(|&t| heat_trace_sample(m, t, rel_tol)).collect()
}

/// K(Δ_1) − K(Δ_0) on a box.
pub fn em_heat_trace(g: &Geometry, bc: BoundaryCondition, t: f64) -> Result<f64> {
    let lengths = match g {
        Geometry::Box { .. } | Geometry::Interval { .. } => g.side_lengths().unwrap(),
        _ => return Err(Error::Unsupported("electromagnetic heat trace needs a box geometry".into())),
    };
    if !(t > 0.0) {
        return Err(Error::Numerical(format!("heat trace needs t > 0, got {t}")));
    }
    // e^{−tΩ²} ≤ e^{−50} with the polynomial envelope still well below 1e-14
    let omega_max = (60.0 / t).sqrt();
    let one = box_pform_spectrum(&lengths, 1, bc, omega_max)?;
    let zero = box_pform_spectrum(&lengths, 0, bc, omega_max)?;
    Ok(heat_trace_sample(&one, t, 1e-12)?.k - heat_trace_sample(&zero, t, 1e-12)?.k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extraction {
    pub dim: usize,
    /// (c_n, jackknife uncertainty) for n = 0..=n_max
    pub values: Vec<(f64, f64)>,
    pub t_min: f64,
    pub t_max: f64,
    /// RMS relative residual of the full fit
    pub residual: f64,
    pub condition: f64,
}

impl Extraction {
    pub fn into_set(&self, field: FieldKind, bc: BoundaryCondition) -> CoefficientSet {
        let mut set = CoefficientSet::new(self.dim, field, bc);
        for (n, &(v, u)) in self.values.iter().enumerate() {
            set.insert(n, v, u, CoefficientSource::Extracted);
        }
        set
    }
}

/// Fit window. `None` for either end picks the default.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Window {
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
}

const JACKKNIFE_BLOCKS: usize = 8;
const MAX_CONDITION: f64 = 1e10;

/// Least-squares fit of K(t)·t^{D/2} on t^{n/2}, n = 0..=n_max. Returns the
/// coefficients and the scaled condition number.
fn fit(samples: &[(f64, f64)], dim: usize, n_max: usize) -> Result<(Vec<f64>, f64)> {
    let cols = n_max + 1;
    if samples.len() < cols {
        return Err(Error::WindowTooNarrow { condition: f64::INFINITY });
    }
    let a = DMatrix::from_fn(samples.len(), cols, |i, j| samples[i].0.powf(0.5 * j as f64));
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|&(t, k)| k * t.powf(0.5 * dim as f64)));
    // equilibrate columns so the condition number reflects the window
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let mut scaled = a.clone();
    for (j, n) in norms.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / n);
    }
    let svd = scaled.svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(Error::WindowTooNarrow { condition });
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(((0..cols).map(|j| x[j] / norms[j]).collect(), condition))
}

/// Default window: t_min where the truncation bound falls below 1e-10·K,
/// t_max where √t reaches ℓ·10^{−3/(n_max+1)} with ℓ = vol(M)/vol(∂M)
/// estimated from the tail model.
pub fn default_window(m: &ModeList, n_max: usize) -> Result<(f64, f64)> {
    let tail = m.tail_model()?;
    let t_min = minimal_usable_t(m, DEFAULT_TRACE_TOL)?;
    let ell = if tail.c1 != 0.0 {
        (tail.c0 / tail.c1).abs() * std::f64::consts::PI.sqrt() / 2.0
    } else {
        // no boundary term: a quarter of the side of the cube with that volume
        0.25 * (tail.c0.abs() * (4.0 * std::f64::consts::PI).powf(0.5 * tail.dim as f64)).powf(1.0 / tail.dim as f64)
    };
    let t_max = (ell * 10f64.powf(-3.0 / (n_max as f64 + 1.0))).powi(2);
    Ok((t_min, t_max))
}

/// Extract c_0..c_{n_max} from a mode list.
pub fn extract_coefficients(m: &ModeList, n_max: usize, window: Window) -> Result<Extraction> {
    let (t_min, t_max) = match (window.t_min, window.t_max) {
        (Some(a), Some(b)) => (a, b),
        (a, b) => {
            let (da, db) = default_window(m, n_max)?;
            (a.unwrap_or(da), b.unwrap_or(db))
        }
    };
    let n = window.samples.unwrap_or(96);
    let ts = log_grid(t_min, t_max, n)?;
    let samples = heat_trace_curve(m, &ts, DEFAULT_TRACE_TOL)?;
    extract_from_samples(&samples.iter().map(|s| (s.t, s.k)).collect::<Vec<_>>(), m.dim, n_max)
}

/// Extract from an arbitrary trace function sampled on [t_min, t_max].
pub fn extract_from_trace<F: Fn(f64) -> Result<f64> + Sync>(
    trace: F,
    dim: usize,
    n_max: usize,
    t_min: f64,
    t_max: f64,
    samples: usize,
) -> Result<Extraction> {
    let ts = log_grid(t_min, t_max, samples)?;
    let values: Vec<(f64, f64)> = ts.par_iter().map(|&t| trace(t).map(|k| (t, k))).collect::<Result<_>>()?;
    extract_from_samples(&values, dim, n_max)
}

fn log_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && n >= 2) {
        return Err(Error::WindowTooNarrow { condition: f64::INFINITY });
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let mut ts: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    ts[0] = t_min;
    ts[n - 1] = t_max;
    Ok(ts)
}

pub fn extract_from_samples(samples: &[(f64, f64)], dim: usize, n_max: usize) -> Result<Extraction> {
    let (coeffs, condition) = fit(samples, dim, n_max)?;
    // jackknife: drop one contiguous block at a time
    let blocks = JACKKNIFE_BLOCKS;
    let size = samples.len() / blocks;
    let mut replicas = Vec::with_capacity(blocks);
    if size > 0 {
        for b in 0..blocks {
            let kept: Vec<(f64, f64)> = samples
                .iter()
                .enumerate()
                .filter(|(i, _)| *i / size != b)
                .map(|(_, s)| *s)
                .collect();
            replicas.push(fit(&kept, dim, n_max)?.0);
        }
    }
    let values = (0..=n_max)
        .map(|j| {
            if replicas.is_empty() {
                return (coeffs[j], f64::NAN);
            }
            let mean = replicas.iter().map(|r| r[j]).sum::<f64>() / blocks as f64;
            let var = replicas.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() * (blocks as f64 - 1.0)
                / blocks as f64;
            (coeffs[j], var.sqrt())
        })
        .collect();
    let residual = (samples
        .iter()
        .map(|&(t, k)| {
            let model: f64 = coeffs.iter().enumerate().map(|(j, c)| c * t.powf(0.5 * (j as f64 - dim as f64))).sum();
            ((model - k) / k).powi(2)
        })
        .sum::<f64>()
        / samples.len() as f64)
        .sqrt();
    Ok(Extraction {
        dim,
        values,
        t_min: samples.first().map_or(0.0, |s| s.0),
        t_max: samples.last().map_or(0.0, |s| s.0),
        residual,
        condition,
    })
}
