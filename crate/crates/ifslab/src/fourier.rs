//! Fourier transforms of measures and Rajchman-decay probing.
//!
//! mu_hat(xi) = integral of e^{-2 pi i xi . x} d mu(x). Discrete measures are
//! exact finite sums; homogeneous 1D self-similar measures use the truncated
//! product from the invariance relation mu_hat(xi) = g(xi) mu_hat(c xi) with
//! g(xi) = sum_j p_j e^{-2 pi i xi d_j}, carrying an explicit tail bound.
//! Decay verdicts are grid-relative observations, never claims about the
//! limit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, Measure, SelfSimilarMeasure};

/// Tail magnitudes below this count as observed decay.
pub const DECAY_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierSample {
    pub frequency: Vec<f64>,
    pub value: Complex64,
    /// 0 for exact discrete sums; the product-tail bound otherwise.
    pub truncation_error: f64,
}

pub fn fourier_discrete(mu: &DiscreteMeasure, xi: &[f64]) -> FourierSample {
    let mut value = Complex64::new(0.0, 0.0);
    for (pos, w) in mu.atoms() {
        let phase: f64 = pos
            .iter()
            .zip(xi)
            .map(|(x, f)| x.to_f64() * f)
            .sum::<f64>();
        value += Complex64::from_polar(w.to_f64(), -2.0 * PI * phase);
    }
    FourierSample {
        frequency: xi.to_vec(),
        value,
        truncation_error: 0.0,
    }
}

/// Common contraction ratio when every map shares it and none reverses
/// orientation.
fn homogeneous_ratio_1d(mu: &SelfSimilarMeasure) -> Option<f64> {
    if mu.dim() != 1 {
        return None;
    }
    let maps = mu.wifs.ifs.maps();
    let c = maps[0].ratio_f64();
    for h in maps {
        if (h.ratio_f64() - c).abs() > 1e-12 || h.orthogonal.matrix().at(0, 0) < 0.0 {
            return None;
        }
    }
    Some(c)
}

/// Truncated product mu_hat(xi) ~= prod_{t<n} g(c^t xi). The dropped factor
/// mu_hat(c^n xi) differs from 1 by at most 2 pi |xi| c^n max|d| / (1 - c),
/// the support radius of the system around the origin.
pub fn fourier_selfsimilar(
    mu: &SelfSimilarMeasure,
    xi: f64,
    n_terms: u32,
) -> Result<FourierSample> {
    if n_terms == 0 {
        return Err(Error::Domain("n_terms must be >= 1".into()));
    }
    let c = homogeneous_ratio_1d(mu).ok_or_else(|| {
        Error::Unsupported(
            "Fourier product needs a homogeneous orientation-preserving 1D system".into(),
        )
    })?;
    let weights = mu.wifs.weights_f64();
    let ds: Vec<f64> = mu
        .wifs
        .ifs
        .maps()
        .iter()
        .map(|h| h.translation[0].to_f64())
        .collect();
    let mut value = Complex64::new(1.0, 0.0);
    let mut scale = xi;
    for _ in 0..n_terms {
        let mut g = Complex64::new(0.0, 0.0);
        for (p, d) in weights.iter().zip(&ds) {
            g += Complex64::from_polar(*p, -2.0 * PI * scale * d);
        }
        value *= g;
        scale *= c;
    }
    let max_d = ds.iter().fold(0.0f64, |a, d| a.max(d.abs()));
    let truncation_error = 2.0 * PI * xi.abs() * c.powi(n_terms as i32) * max_d / (1.0 - c);
    Ok(FourierSample {
        frequency: vec![xi],
        value,
        truncation_error,
    })
}

/// Transform of any supported 1D measure at scalar frequency xi.
pub fn fourier_eval(mu: &Measure, xi: f64, n_terms: u32) -> Result<FourierSample> {
    match mu {
        Measure::Discrete(d) => Ok(fourier_discrete(d, &[xi])),
        Measure::SelfSimilar(s) => fourier_selfsimilar(s, xi, n_terms),
        Measure::Mixture(mix) => {
            let mut value = Complex64::new(0.0, 0.0);
            let mut err = 0.0;
            for (c, w) in &mix.components {
                let s = fourier_eval(c, xi, n_terms)?;
                let wf = w.to_f64();
                value += s.value * wf;
                err += wf * s.truncation_error;
            }
            Ok(FourierSample {
                frequency: vec![xi],
                value,
                truncation_error: err,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayVerdict {
    DecayObserved,
    NoDecayObserved,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport {
    pub frequencies: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Log-log slope of the per-octave maximum magnitude over the tail
    /// half; an envelope exponent, robust to oscillation zeros.
    pub fitted_exponent: Option<f64>,
    pub verdict: DecayVerdict,
    pub max_truncation_error: f64,
}

impl DecayReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi,magnitude\n");
        for (f, m) in self.frequencies.iter().zip(&self.magnitudes) {
            out.push_str(&format!("{f},{m}\n"));
        }
        out
    }
}

/// Geometric grid 2^{j/4} up to xi_max, with the resonant powers of 1/c
/// mixed in for homogeneous self-similar measures (decay fails exactly
/// there when it fails).
pub fn default_grid(mu: &Measure, xi_max: f64) -> Vec<f64> {
    let mut grid: Vec<f64> = Vec::new();
    let mut j = 0;
    loop {
        let xi = 2f64.powf(j as f64 / 4.0);
        if xi > xi_max {
            break;
        }
        grid.push(xi);
        j += 1;
    }
    if let Measure::SelfSimilar(s) = mu {
        if let Some(c) = homogeneous_ratio_1d(s) {
            let mut xi = 1.0 / c;
            while xi <= xi_max {
                grid.push(xi);
                xi /= c;
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    grid
}

fn octave_envelope_slope(freqs: &[f64], mags: &[f64]) -> Option<f64> {
    let mut best: std::collections::BTreeMap<i64, (f64, f64)> = std::collections::BTreeMap::new();
    for (f, m) in freqs.iter().zip(mags) {
        if *f <= 0.0 {
            continue;
        }
        let oct = f.log2().floor() as i64;
        let e = best.entry(oct).or_insert((*f, *m));
        if *m > e.1 {
            *e = (*f, *m);
        }
    }
    let pts: Vec<(f64, f64)> = best
        .values()
        .filter(|(_, m)| *m > 0.0)
        .map(|(f, m)| (f.log2(), m.log2()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

/// Sample |mu_hat| along an increasing grid and report what was observed.
/// DecayObserved: the tail-quarter maximum sits below the threshold.
/// NoDecayObserved: magnitudes in the tail half keep returning above half
/// the starting magnitude. Everything else is Inconclusive.
pub fn decay_probe(mu: &Measure, grid: &[f64]) -> Result<DecayReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("frequency grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[1].abs() <= w[0].abs()) {
        return Err(Error::InvalidInput("grid must increase in |xi|".into()));
    }
    let n_terms = 80;
    let mut magnitudes = Vec::with_capacity(grid.len());
    let mut max_err = 0.0f64;
    for &xi in grid {
        let s = fourier_eval(mu, xi, n_terms)?;
        magnitudes.push(s.value.norm());
        max_err = max_err.max(s.truncation_error);
    }
    let n = grid.len();
    let tail_q = &magnitudes[n - (n / 4).max(1)..];
    let tail_h = &magnitudes[n / 2..];
    let start = magnitudes[0];
    let verdict = if tail_q.iter().all(|m| *m < DECAY_THRESHOLD + max_err) {
        DecayVerdict::DecayObserved
    } else {
        let above = tail_h.iter().filter(|m| **m >= 0.5 * start).count();
        if start > DECAY_THRESHOLD && above >= (tail_h.len() / 4).max(2).min(tail_h.len()) {
            DecayVerdict::NoDecayObserved
        } else {
            DecayVerdict::Inconclusive
        }
    };
    let half_f = &grid[n / 2..];
    let fitted_exponent = octave_envelope_slope(half_f, tail_h);
    Ok(DecayReport {
        frequencies: grid.to_vec(),
        magnitudes,
        fitted_exponent,
        verdict,
        max_truncation_error: max_err,
    })
}

/// Max over xi_set of |(mu * nu)^(xi) - mu_hat(xi) nu_hat(xi)|, with the
/// convolution computed first and transformed independently.
pub fn check_convolution_identity(
    mu: &Measure,
    nu: &Measure,
    xi_set: &[f64],
) -> Result<f64> {
    let n_terms = 80;
    let conv: Measure = match (mu, nu) {
        (Measure::Discrete(a), Measure::Discrete(b)) => {
            Measure::Discrete(crate::measure::convolve(a, b)?)
        }
        (Measure::SelfSimilar(s), Measure::Discrete(d))
        | (Measure::Discrete(d), Measure::SelfSimilar(s)) => {
            Measure::Mixture(crate::measure::convolve_with_discrete(s, d)?)
        }
        _ => {
            return Err(Error::Unsupported(
                "convolution identity needs discrete/discrete or discrete/self-similar".into(),
            ))
        }
    };
    let mut worst = 0.0f64;
    for &xi in xi_set {
        let a = fourier_eval(mu, xi, n_terms)?;
        let b = fourier_eval(nu, xi, n_terms)?;
        let c = fourier_eval(&conv, xi, n_terms)?;
        worst = worst.max((c.value - a.value * b.value).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Scalar};
    use crate::measure::{cantor_measure, lebesgue_surrogate, scale_measure};

    fn sc(n: i64, d: i64) -> Scalar {
        Scalar::from_rat(rat(n, d))
    }

    fn coin() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![
            (vec![sc(0, 1)], sc(1, 2)),
            (vec![sc(1, 1)], sc(1, 2)),
        ])
        .unwrap()
    }

    fn random_discrete(rng: &mut crate::ifs::ChaosRng, n: usize) -> DiscreteMeasure {
        let raw: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.next_f64() * 2.0 - 1.0, rng.next_f64() + 0.05))
            .collect();
        let total: f64 = raw.iter().map(|(_, w)| w).sum();
        DiscreteMeasure::new(
            raw.into_iter()
                .map(|(x, w)| (vec![Scalar::from_f64(x)], Scalar::from_f64(w / total)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn dirac_is_flat_and_zero_frequency_is_one() {
        let d = DiscreteMeasure::dirac(vec![sc(0, 1)]);
        for xi in [0.0, 0.5, 3.7, -12.0] {
            let s = fourier_discrete(&d, &[xi]);
            assert!((s.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let mut rng = crate::ifs::ChaosRng::new(3);
        let m = random_discrete(&mut rng, 7);
        assert!((fourier_discrete(&m, &[0.0]).value.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coin_vanishes_at_half() {
        // 1/2 (1 + e^{-pi i}) = 0
        let s = fourier_discrete(&coin(), &[0.5]);
        assert!(s.value.norm() < 1e-15);
    }

    #[test]
    fn conjugate_symmetry_and_boundedness() {
        let mut rng = crate::ifs::ChaosRng::new(9);
        let m = random_discrete(&mut rng, 6);
        for _ in 0..30 {
            let xi = rng.next_f64() * 40.0 - 20.0;
            let plus = fourier_discrete(&m, &[xi]);
            let minus = fourier_discrete(&m, &[-xi]);
            assert!((plus.value - minus.value.conj()).norm() < 1e-12);
            assert!(plus.value.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn lebesgue_product_matches_closed_form() {
        // uniform on [0,1]: mu_hat(xi) = (1 - e^{-2 pi i xi}) / (2 pi i xi)
        let mu = lebesgue_surrogate();
        for xi in [0.3f64, 1.0, 1.7, 8.25] {
            let s = fourier_selfsimilar(&mu, xi, 60).unwrap();
            let denom = Complex64::new(0.0, 2.0 * PI * xi);
            let exact = (Complex64::new(1.0, 0.0)
                - Complex64::from_polar(1.0, -2.0 * PI * xi))
                / denom;
            assert!(
                (s.value - exact).norm() < s.truncation_error + 1e-12,
                "xi = {xi}: {} vs {}",
                s.value,
                exact
            );
        }
        // mu_hat(1) = 0 for the uniform measure
        let s1 = fourier_selfsimilar(&mu, 1.0, 60).unwrap();
        assert!(s1.value.norm() <= s1.truncation_error + 1e-12);
    }

    #[test]
    fn selfsimilar_at_zero_is_one_and_rejects_inhomogeneous() {
        let s = fourier_selfsimilar(&cantor_measure(), 0.0, 10).unwrap();
        assert!((s.value.norm() - 1.0).abs() < 1e-15);
        use crate::geometry::OrthoMatrix;
        use crate::ifs::{canonicalize, ArithmeticMode, WeightedIFS, IFS};
        let maps = vec![
            canonicalize(sc(1, 3), OrthoMatrix::identity(1), vec![Scalar::zero()]).unwrap(),
            canonicalize(sc(1, 2), OrthoMatrix::identity(1), vec![sc(1, 2)]).unwrap(),
        ];
        let ifs = IFS::new(maps, ArithmeticMode::Exact).unwrap();
        let mu = SelfSimilarMeasure::new(WeightedIFS::uniform(ifs).unwrap()).unwrap();
        assert!(fourier_selfsimilar(&mu, 1.0, 10).is_err());
    }

    #[test]
    fn cantor_magnitude_constant_on_powers_of_three() {
        // mu_hat(3^k) = mu_hat(1): every extra factor g(3^t) = 1 exactly
        let mu = cantor_measure();
        let base = fourier_selfsimilar(&mu, 1.0, 90).unwrap().value.norm();
        assert!(base > 0.2, "|mu_hat(1)| = {base}");
        for k in 1..=8 {
            let s = fourier_selfsimilar(&mu, 3f64.powi(k), 90).unwrap();
            assert!(
                (s.value.norm() - base).abs() < s.truncation_error + 1e-9,
                "k = {k}: {} vs {base}",
                s.value.norm()
            );
        }
    }

    #[test]
    fn lebesgue_decay_observed_with_envelope_exponent() {
        let mu = Measure::SelfSimilar(lebesgue_surrogate());
        let grid = default_grid(&mu, 1000.0);
        let report = decay_probe(&mu, &grid).unwrap();
        assert_eq!(report.verdict, DecayVerdict::DecayObserved);
        let slope = report.fitted_exponent.unwrap();
        assert!((slope + 1.0).abs() < 0.2, "envelope slope {slope}");
    }

    #[test]
    fn atomic_measure_shows_no_decay() {
        // integer frequencies: both atoms have integer positions, |mu_hat| = 1
        let grid: Vec<f64> = (1..=64).map(|k| k as f64).collect();
        let report = decay_probe(&Measure::Discrete(coin()), &grid).unwrap();
        assert_eq!(report.verdict, DecayVerdict::NoDecayObserved);
    }

    #[test]
    fn cantor_no_decay_along_resonant_grid() {
        let grid: Vec<f64> = (0..=12).map(|k| 3f64.powi(k)).collect();
        let report = decay_probe(&Measure::SelfSimilar(cantor_measure()), &grid).unwrap();
        assert_eq!(report.verdict, DecayVerdict::NoDecayObserved);
    }

    #[test]
    fn convolution_identity_exact_for_discrete_pairs() {
        let a = Measure::Discrete(DiscreteMeasure::dirac(vec![sc(2, 7)]));
        let b = Measure::Discrete(DiscreteMeasure::dirac(vec![sc(-1, 3)]));
        let err = check_convolution_identity(&a, &b, &[0.1, 1.0, 17.3]).unwrap();
        assert!(err < 1e-14);

        let mut rng = crate::ifs::ChaosRng::new(41);
        for _ in 0..5 {
            let m = Measure::Discrete(random_discrete(&mut rng, 10));
            let n = Measure::Discrete(random_discrete(&mut rng, 10));
            let xis: Vec<f64> = (0..100).map(|_| rng.next_f64() * 50.0 - 25.0).collect();
            assert!(check_convolution_identity(&m, &n, &xis).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn convolution_identity_mixed_path_within_truncation() {
        let d = coin();
        let s = cantor_measure();
        let err = check_convolution_identity(
            &Measure::SelfSimilar(s.clone()),
            &Measure::Discrete(d),
            &[0.5, 2.0, 9.0],
        )
        .unwrap();
        // components of the mixture evaluate through conjugated systems;
        // agreement is limited only by the two truncation tails
        let bound = fourier_selfsimilar(&s, 9.0, 80).unwrap().truncation_error;
        assert!(err <= 2.0 * bound + 1e-9, "err = {err}");
    }

    #[test]
    fn scaled_measure_reindexes_frequency() {
        // nu(D) = mu(beta D) => nu_hat(xi) = mu_hat(xi / beta)
        let mut rng = crate::ifs::ChaosRng::new(13);
        let m = random_discrete(&mut rng, 8);
        let beta = sc(3, 2);
        let scaled = scale_measure(&Measure::Discrete(m.clone()), &beta).unwrap();
        for xi in [0.4f64, 1.0, 6.6] {
            let lhs = fourier_eval(&scaled, xi, 1).unwrap().value;
            let rhs = fourier_discrete(&m, &[xi / 1.5]).value;
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn boundedness_transfer_on_grid() {
        // |(mu * nu)^| <= |mu_hat| sup |nu_hat| pointwise
        let mu = cantor_measure();
        let nu = coin();
        let conv = crate::measure::convolve_with_discrete(&mu, &nu).unwrap();
        let sup_nu = 1.0; // probability measure
        for xi in [0.3f64, 1.5, 4.0, 27.0] {
            let c = fourier_eval(&Measure::Mixture(conv.clone()), xi, 80).unwrap();
            let m = fourier_selfsimilar(&mu, xi, 80).unwrap();
            assert!(
                c.value.norm()
                    <= m.value.norm() * sup_nu + c.truncation_error + m.truncation_error + 1e-12
            );
        }
    }

    #[test]
    fn decay_report_csv_and_grid_validation() {
        let grid = vec![1.0, 2.0, 4.0, 8.0];
        let report = decay_probe(&Measure::Discrete(coin()), &grid).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("xi,magnitude\n"));
        assert_eq!(csv.lines().count(), 5);
        assert!(decay_probe(&Measure::Discrete(coin()), &[2.0, 1.0]).is_err());
        assert!(decay_probe(&Measure::Discrete(coin()), &[]).is_err());
    }
}
