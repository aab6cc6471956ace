//! Dyadic histograms and the finite-level L^q spectrum.
//!
//! Cells follow the half-open convention [j 2^-k, (j+1) 2^-k) with boundary
//! atoms assigned to the right cell, and all logarithms are base 2.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Cdf1D, Measure, SelfSimilarMeasure};
use crate::error::{Error, Result};
use crate::exact::{Rat, Scalar};
use crate::ifs::chaos_game;

/// Default cap on histogram cells / cylinders per build.
pub const CELL_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HistogramMode {
    Exact,
    CylinderApprox { error: f64 },
    MonteCarlo { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DyadicHistogram {
    pub level: u32,
    pub cells: BTreeMap<Vec<i64>, Scalar>,
    pub mode: HistogramMode,
}

impl DyadicHistogram {
    pub fn total_mass(&self) -> f64 {
        self.cells.values().map(|m| m.to_f64()).sum()
    }

    pub fn error_bound(&self) -> f64 {
        match &self.mode {
            HistogramMode::CylinderApprox { error } => *error,
            _ => 0.0,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell,mass\n");
        for (idx, mass) in &self.cells {
            let cell = idx
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!("{cell},{mass}\n"));
        }
        out
    }
}

/// Level-k cells covering the translate I + x of a level-k cell I: at most
/// two consecutive indices (the structural fact behind the convolution
/// lemma's 2^q constant).
pub fn translated_cell_cover(j: i64, k: u32, x: f64) -> (i64, i64) {
    let s = x * (1u64 << k) as f64;
    let lo = (j as f64 + s).floor() as i64;
    let hi_val = (j + 1) as f64 + s;
    // the right endpoint is exclusive, so a translate landing exactly on a
    // boundary does not spill into the next cell
    let hi = if hi_val.fract() == 0.0 {
        hi_val as i64 - 1
    } else {
        hi_val.floor() as i64
    };
    assert!(hi - lo <= 1, "translated cell must fit in two cells");
    (lo, hi)
}

fn discrete_histogram(mu: &super::DiscreteMeasure, k: u32) -> DyadicHistogram {
    let mut cells: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
    for (pos, w) in mu.atoms() {
        let idx: Vec<i64> = pos.iter().map(|x| x.dyadic_cell(k)).collect();
        cells
            .entry(idx)
            .and_modify(|m| *m = m.clone() + w.clone())
            .or_insert_with(|| w.clone());
    }
    DyadicHistogram {
        level: k,
        cells,
        mode: HistogramMode::Exact,
    }
}

fn exact_selfsimilar_histogram(
    mu: &SelfSimilarMeasure,
    k: u32,
    budget: u128,
) -> Result<Option<DyadicHistogram>> {
    let mut cdf = match Cdf1D::new(mu) {
        Some(c) => c,
        None => return Ok(None),
    };
    let (a, b) = cdf.hull().clone();
    let pow = Rat::from_integer(num_bigint::BigInt::one() << k);
    let j_lo = (a.clone() * pow.clone()).floor().to_integer();
    let j_hi = (b.clone() * pow.clone()).floor().to_integer();
    let span: num_bigint::BigInt = (&j_hi - &j_lo) + 1;
    let span_u: u128 = match TryInto::<i64>::try_into(span.clone()) {
        Ok(v) if v > 0 => v as u128,
        _ => u128::MAX,
    };
    if span_u > budget {
        return Err(Error::Budget {
            what: "histogram cells",
            needed: span_u,
            cap: budget,
            largest_feasible_n: None,
        });
    }
    let mut cells = BTreeMap::new();
    let mut j = j_lo;
    let mut prev = match cdf.eval(&(Rat::from_integer(j.clone()) / pow.clone())) {
        Some(v) => v,
        None => return Ok(None),
    };
    while j <= j_hi {
        let right = Rat::from_integer(&j + 1) / pow.clone();
        let next = match cdf.eval(&right) {
            Some(v) => v,
            None => return Ok(None),
        };
        let mass = next.clone() - prev;
        if !mass.is_zero() {
            let idx: i64 = j.clone().try_into().map_err(|_| {
                Error::Domain("cell index exceeds i64".into())
            })?;
            cells.insert(vec![idx], Scalar::from_rat(mass));
        }
        prev = next;
        j += 1;
    }
    Ok(Some(DyadicHistogram {
        level: k,
        cells,
        mode: HistogramMode::Exact,
    }))
}

fn cylinder_histogram(mu: &SelfSimilarMeasure, k: u32, budget: u128) -> Result<DyadicHistogram> {
    let m = mu.dim();
    let base_diam = mu.support_hull.diameter();
    let target = 0.5f64.powi(k as i32);
    let mut cells: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
    let mut error = 0.0f64;
    let weights = mu.wifs.weights_f64();
    // stack of (accumulated map or None for the root, mass)
    let mut stack: Vec<(Option<crate::ifs::Similarity>, f64)> = vec![(None, 1.0)];
    let mut visited: u128 = 0;
    while let Some((sim, mass)) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Err(Error::Budget {
                what: "cylinders",
                needed: visited,
                cap: budget,
                largest_feasible_n: None,
            });
        }
        let (ratio, poly) = match &sim {
            Some(s) => (
                s.ratio_f64(),
                mu.support_hull
                    .transform(s.ratio_f64(), &s.orthogonal, &s.translation_f64()),
            ),
            None => (1.0, mu.support_hull.clone()),
        };
        if ratio * base_diam <= target || base_diam == 0.0 {
            let mut lo = vec![f64::INFINITY; m];
            let mut hi = vec![f64::NEG_INFINITY; m];
            for v in &poly.vertices {
                for i in 0..m {
                    lo[i] = lo[i].min(v[i]);
                    hi[i] = hi[i].max(v[i]);
                }
            }
            let scale = (1u64 << k) as f64;
            let idx: Vec<i64> = (0..m)
                .map(|i| ((lo[i] + hi[i]) * 0.5 * scale).floor() as i64)
                .collect();
            let straddles = (0..m).any(|i| {
                (lo[i] * scale).floor() as i64 != (hi[i] * scale).floor() as i64
            });
            if straddles {
                error += mass;
            }
            cells
                .entry(idx)
                .and_modify(|c| *c = c.clone() + Scalar::from_f64(mass))
                .or_insert_with(|| Scalar::from_f64(mass));
        } else {
            for (h, w) in mu.wifs.ifs.maps().iter().zip(&weights) {
                let child = match &sim {
                    Some(s) => s.compose_with(h),
                    None => h.clone(),
                };
                stack.push((Some(child), mass * w));
            }
        }
    }
    Ok(DyadicHistogram {
        level: k,
        cells,
        mode: HistogramMode::CylinderApprox { error },
    })
}

/// Level-k dyadic histogram. Exact for discrete measures and for rational
/// 1D self-similar measures (via the CDF engine); cylinder midpoint
/// assignment with a recorded straddling-mass error bound otherwise.
pub fn dyadic_histogram(mu: &Measure, k: u32, budget: u128) -> Result<DyadicHistogram> {
    match mu {
        Measure::Discrete(d) => Ok(discrete_histogram(d, k)),
        Measure::SelfSimilar(s) => {
            if let Some(h) = exact_selfsimilar_histogram(s, k, budget)? {
                Ok(h)
            } else {
                cylinder_histogram(s, k, budget)
            }
        }
        Measure::Mixture(mix) => {
            let mut cells: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
            let mut all_exact = true;
            let mut error = 0.0;
            for (c, w) in &mix.components {
                let h = dyadic_histogram(c, k, budget)?;
                match h.mode {
                    HistogramMode::Exact => {}
                    HistogramMode::CylinderApprox { error: e } => {
                        all_exact = false;
                        error += w.to_f64() * e;
                    }
                    HistogramMode::MonteCarlo { .. } => all_exact = false,
                }
                for (idx, mass) in h.cells {
                    let add = w.clone() * mass;
                    cells
                        .entry(idx)
                        .and_modify(|m| *m = m.clone() + add.clone())
                        .or_insert(add);
                }
            }
            Ok(DyadicHistogram {
                level: k,
                cells,
                mode: if all_exact {
                    HistogramMode::Exact
                } else {
                    HistogramMode::CylinderApprox { error }
                },
            })
        }
    }
}

/// Monte Carlo histogram oracle from chaos-game samples.
pub fn monte_carlo_histogram(
    mu: &SelfSimilarMeasure,
    k: u32,
    count: usize,
    seed: u64,
) -> Result<DyadicHistogram> {
    let cloud = chaos_game(&mu.wifs, count, seed)?;
    let scale = (1u64 << k) as f64;
    let w = 1.0 / count as f64;
    let mut cells: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
    for p in &cloud.points {
        let idx: Vec<i64> = p.iter().map(|x| (x * scale).floor() as i64).collect();
        cells
            .entry(idx)
            .and_modify(|m| *m = m.clone() + Scalar::from_f64(w))
            .or_insert_with(|| Scalar::from_f64(w));
    }
    Ok(DyadicHistogram {
        level: k,
        cells,
        mode: HistogramMode::MonteCarlo { count, seed },
    })
}

/// tau_k = -log2(sum_I mu(I)^q) / k, the finite-level L^q exponent.
pub fn lq_tau_k(h: &DyadicHistogram, q: f64) -> Result<f64> {
    if q <= 1.0 {
        return Err(Error::Domain(format!("q = {q} must exceed 1")));
    }
    if h.level == 0 {
        return Err(Error::Domain("level must be >= 1".into()));
    }
    let k = h.level as f64;
    let masses: Vec<&Scalar> = h.cells.values().collect();
    // equal-mass shortcut keeps powers of two bit-exact (Lebesgue case)
    if masses.iter().all(|m| *m == masses[0]) {
        let n = masses.len() as f64;
        return Ok(-(n.log2() + q * masses[0].to_f64().log2()) / k);
    }
    let int_q = q.fract() == 0.0 && q < 32.0;
    if int_q && masses.iter().all(|m| m.is_exact()) {
        let mut sum = Rat::zero();
        for m in &masses {
            sum += m.as_rat().unwrap().pow(q as i32);
        }
        let sum_f = Scalar::from_rat(sum).to_f64();
        return Ok(-sum_f.log2() / k);
    }
    let sum: f64 = masses.iter().map(|m| m.to_f64().powf(q)).sum();
    Ok(-sum.log2() / k)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LqReport {
    /// (k, tau_k / (q - 1)) for k = 1..k_max.
    pub sequence: Vec<(u32, f64)>,
    /// Least-squares slope of -log2 sum over the top half of levels,
    /// divided by q - 1. An estimate of the liminf, never the liminf.
    pub extrapolated: f64,
    pub error_note: String,
}

pub fn lq_dimension_estimate(
    mu: &Measure,
    q: f64,
    k_max: u32,
    budget: u128,
) -> Result<LqReport> {
    if q <= 1.0 {
        return Err(Error::Domain(format!("q = {q} must exceed 1")));
    }
    if k_max < 4 {
        return Err(Error::Domain("k_max must be >= 4".into()));
    }
    let mut sequence = Vec::with_capacity(k_max as usize);
    let mut s_values = Vec::with_capacity(k_max as usize);
    let mut max_err = 0.0f64;
    for k in 1..=k_max {
        let h = dyadic_histogram(mu, k, budget)?;
        max_err = max_err.max(h.error_bound());
        let tau = lq_tau_k(&h, q)?;
        sequence.push((k, tau / (q - 1.0)));
        s_values.push(tau * k as f64);
    }
    let first = sequence[0].1;
    let constant = sequence.iter().all(|&(_, v)| v == first);
    let extrapolated = if constant {
        first
    } else {
        let half = (k_max / 2) as usize;
        let xs: Vec<f64> = (half + 1..=k_max as usize).map(|k| k as f64).collect();
        let ys: Vec<f64> = s_values[half..].to_vec();
        least_squares_slope(&xs, &ys) / (q - 1.0)
    };
    let error_note = if constant {
        "constant sequence; finite-level value reported verbatim".to_string()
    } else {
        format!(
            "slope extrapolation over levels {}..{}; histogram error <= {:.3e}; \
             finite-level estimate of a liminf, not the limit",
            k_max / 2 + 1,
            k_max,
            max_err
        )
    };
    Ok(LqReport {
        sequence,
        extrapolated,
        error_note,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}
