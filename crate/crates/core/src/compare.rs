//! Statistics bridging the exact side (weight measures) and the Monte Carlo
//! side (sampled spectra): mixed power-sum moments with standard errors,
//! sorted-coordinate 1-D Wasserstein diagnostics, and pass/fail reports.
//!
//! The W1 diagnostic compares the marginal law of each sorted coordinate and
//! averages over coordinates. It is a pseudometric on W-invariant laws and a
//! desk-scale surrogate for weak convergence, not a proof of it.

use num::ToPrimitive;
use serde::Serialize;

use crate::decompose::{moments_power_sums_f64, WeightMeasure};
use crate::{Error, Result};

/// Provenance carried alongside sampled spectra.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumMeta {
    pub seed: u64,
    pub description: String,
}

/// A collection of sampled spectra; every vector is sorted non-increasing.
#[derive(Debug, Clone)]
pub struct EmpiricalSpectrum {
    d: usize,
    samples: Vec<Vec<f64>>,
    pub meta: SpectrumMeta,
}

impl EmpiricalSpectrum {
    pub fn new(d: usize, meta: SpectrumMeta) -> Self {
        assert!(d >= 1);
        Self {
            d,
            samples: Vec::new(),
            meta,
        }
    }

    pub fn from_samples(d: usize, samples: Vec<Vec<f64>>, meta: SpectrumMeta) -> Self {
        let mut s = Self::new(d, meta);
        for v in samples {
            s.push(v);
        }
        s
    }

    /// Adds one spectrum, sorting it into the chamber (non-increasing).
    pub fn push(&mut self, mut v: Vec<f64>) {
        assert_eq!(v.len(), self.d, "spectrum length must match rank");
        assert!(v.iter().all(|x| x.is_finite()));
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        self.samples.push(v);
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// Shifts every coordinate by a constant (used by negative controls).
    pub fn shifted(&self, c: f64) -> EmpiricalSpectrum {
        let samples = self
            .samples
            .iter()
            .map(|v| v.iter().map(|x| x + c).collect())
            .collect();
        EmpiricalSpectrum {
            d: self.d,
            samples,
            meta: self.meta.clone(),
        }
    }
}

/// Sample mean and standard error of prod_j p_{k_j}(spectrum) over the samples.
pub fn power_sums_empirical(s: &EmpiricalSpectrum, ks: &[u32]) -> Result<(f64, f64)> {
    let n = s.len();
    if n < 2 {
        return Err(Error::NotEnoughSamples(n));
    }
    let values: Vec<f64> = s
        .samples
        .iter()
        .map(|v| {
            let mut term = 1.0;
            for &k in ks {
                term *= v.iter().map(|x| x.powi(k as i32)).sum::<f64>();
            }
            term
        })
        .collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    let se = (ss / ((n - 1) as f64 * n as f64)).sqrt();
    Ok((mean, se))
}

/// Per-coordinate discrete marginals: (value, weight) lists sorted by value,
/// weights summing to one. Both empirical spectra and exact weight measures
/// (after rescaling) reduce to this form.
#[derive(Debug, Clone)]
pub struct CoordinateLaws {
    d: usize,
    coords: Vec<Vec<(f64, f64)>>,
}

impl CoordinateLaws {
    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn coordinate(&self, i: usize) -> &[(f64, f64)] {
        &self.coords[i]
    }

    pub fn from_empirical(s: &EmpiricalSpectrum) -> Self {
        assert!(!s.is_empty(), "empirical law needs samples");
        let w = 1.0 / s.len() as f64;
        let mut coords = vec![Vec::with_capacity(s.len()); s.rank()];
        for v in s.samples() {
            for (i, &x) in v.iter().enumerate() {
                coords[i].push((x, w));
            }
        }
        for c in coords.iter_mut() {
            c.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        }
        Self {
            d: s.rank(),
            coords,
        }
    }

    /// Exact measure rescaled by `scale` and optionally shifted by `shift`
    /// in every coordinate.
    pub fn from_measure(m: &WeightMeasure, scale: f64, shift: f64) -> Self {
        let d = m.rank();
        let mut coords = vec![Vec::with_capacity(m.len()); d];
        for (w, e) in m.entries() {
            let p = e.probability.to_f64().expect("probability fits in f64");
            for (i, lam) in w.entries().iter().enumerate() {
                let x = scale * lam.to_f64().expect("entry fits in f64") + shift;
                coords[i].push((x, p));
            }
        }
        for c in coords.iter_mut() {
            c.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        }
        Self { d, coords }
    }
}

/// Exact 1-D Wasserstein-1 distance between two discrete laws given as sorted
/// (value, weight) lists, by quantile coupling.
pub fn w1_discrete(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    debug_assert!(!a.is_empty() && !b.is_empty());
    let wa_total: f64 = a.iter().map(|x| x.1).sum();
    let wb_total: f64 = b.iter().map(|x| x.1).sum();
    let (mut i, mut j) = (0usize, 0usize);
    let mut wa = a[0].1 / wa_total;
    let mut wb = b[0].1 / wb_total;
    let mut acc = 0.0;
    loop {
        let m = wa.min(wb);
        acc += m * (a[i].0 - b[j].0).abs();
        wa -= m;
        wb -= m;
        if wa <= 0.0 {
            i += 1;
            if i >= a.len() {
                break;
            }
            wa = a[i].1 / wa_total;
        }
        if wb <= 0.0 {
            j += 1;
            if j >= b.len() {
                break;
            }
            wb = b[j].1 / wb_total;
        }
    }
    acc
}

/// Exact W1 between a discrete law and Uniform[lo, hi], by integrating the
/// quantile-function gap in closed form on each constancy segment.
pub fn w1_discrete_vs_uniform(points: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
    assert!(hi > lo, "uniform interval must be nondegenerate");
    let total: f64 = points.iter().map(|x| x.1).sum();
    let mut sorted: Vec<(f64, f64)> = points.iter().map(|&(v, w)| (v, w / total)).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let b = hi - lo;
    // Antiderivative of (lo + b u - v) in u.
    let anti = |u: f64, v: f64| (lo - v) * u + 0.5 * b * u * u;
    let mut acc = 0.0;
    let mut u0 = 0.0;
    for &(v, w) in &sorted {
        let u1 = (u0 + w).min(1.0);
        let ustar = (v - lo) / b;
        if ustar > u0 && ustar < u1 {
            acc += (anti(ustar, v) - anti(u0, v)).abs();
            acc += (anti(u1, v) - anti(ustar, v)).abs();
        } else {
            acc += (anti(u1, v) - anti(u0, v)).abs();
        }
        u0 = u1;
    }
    acc
}

/// Mean over sorted coordinates of the 1-D W1 distance between the marginals.
pub fn wasserstein1_sorted(a: &CoordinateLaws, b: &CoordinateLaws) -> Result<f64> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch {
            expected: a.rank(),
            got: b.rank(),
        });
    }
    let d = a.rank();
    let total: f64 = (0..d)
        .map(|i| w1_discrete(a.coordinate(i), b.coordinate(i)))
        .sum();
    Ok(total / d as f64)
}

/// One moment comparison: pass iff |estimate - reference| <= tolerance + 3 se.
#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub ks: Vec<u32>,
    pub reference: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl MomentRow {
    pub fn evaluate(
        ks: Vec<u32>,
        reference: f64,
        estimate: f64,
        std_error: f64,
        tolerance: f64,
    ) -> Self {
        let pass = (estimate - reference).abs() <= tolerance + 3.0 * std_error;
        Self {
            ks,
            reference,
            estimate,
            std_error,
            tolerance,
            pass,
        }
    }
}

/// The W1 diagnostic row of a report.
#[derive(Debug, Clone, Serialize)]
pub struct W1Row {
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl W1Row {
    pub fn evaluate(value: f64, tolerance: f64) -> Self {
        Self {
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

/// Moment comparison rows plus the W1 diagnostic and an overall verdict.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
    pub w1: Option<W1Row>,
    pub pass: bool,
}

impl MomentReport {
    pub fn new(rows: Vec<MomentRow>, w1: Option<W1Row>) -> Self {
        let pass = rows.iter().all(|r| r.pass) && w1.as_ref().is_none_or(|w| w.pass);
        Self { rows, w1, pass }
    }
}

/// Uniform tolerances for [`compare_report`].
#[derive(Debug, Clone, Copy)]
pub struct CompareTolerances {
    /// Analytic tolerance added to 3 s.e. in each moment row.
    pub moment_abs: f64,
    /// Bound on the averaged sorted-coordinate W1 distance.
    pub w1: f64,
}

/// Compares the rescaled exact measure against sampled spectra: one row per
/// moment index tuple plus the W1 diagnostic row.
pub fn compare_report(
    exact: &WeightMeasure,
    eps: f64,
    spectra: &EmpiricalSpectrum,
    moment_list: &[Vec<u32>],
    tolerances: &CompareTolerances,
) -> Result<MomentReport> {
    if exact.rank() != spectra.rank() {
        return Err(Error::RankMismatch {
            expected: exact.rank(),
            got: spectra.rank(),
        });
    }
    let mut rows = Vec::with_capacity(moment_list.len());
    for ks in moment_list {
        let reference = moments_power_sums_f64(exact, ks, eps, None);
        let (estimate, se) = power_sums_empirical(spectra, ks)?;
        rows.push(MomentRow::evaluate(
            ks.clone(),
            reference,
            estimate,
            se,
            tolerances.moment_abs,
        ));
    }
    let w1_val = wasserstein1_sorted(
        &CoordinateLaws::from_measure(exact, eps, 0.0),
        &CoordinateLaws::from_empirical(spectra),
    )?;
    Ok(MomentReport::new(
        rows,
        Some(W1Row::evaluate(w1_val, tolerances.w1)),
    ))
}
