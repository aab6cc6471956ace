//! Constructive dimension-preserving approximation: quantization to finite
//! atom sets, the smoothing-by-convolution construction nu * lambda_1, and
//! greedy epsilon-nets for point clouds.

use serde::{Deserialize, Serialize};

use super::{
    convolve_with_discrete, dl_distance, dyadic_histogram, lq_dimension_estimate,
    template_measure, DiscreteMeasure, Measure, MixtureMeasure, SelfSimilarMeasure, CELL_BUDGET,
};
use crate::error::{Error, Result};
use crate::exact::{rat, Scalar};
use crate::geometry::PointCloud;
use crate::ifs::{product_ifs, WeightedIFS};

/// Smallest k with sqrt(m) * 2^-k <= eps: level-k cells have diameter <= eps.
fn quantize_level(m: usize, eps: f64) -> u32 {
    let k = ((m as f64).sqrt() / eps).log2().ceil();
    k.max(0.0).min(40.0) as u32
}

fn cell_center(idx: &[i64], k: u32) -> Vec<Scalar> {
    idx.iter()
        .map(|&j| Scalar::from_rat(rat(2 * j + 1, 2i64 << k)))
        .collect()
}

/// Collapse mu onto a dyadic grid of cell diameter <= eps; the result is
/// within d_L <= eps/2 since no mass moves further than half a cell.
/// Cells holding a single original atom keep it in place, so a discrete
/// measure with eps below its atom spacing comes back unchanged.
pub fn quantize(mu: &Measure, eps: &Scalar) -> Result<DiscreteMeasure> {
    let eps_f = eps.to_f64();
    if eps_f <= 0.0 {
        return Err(Error::Domain(format!("eps = {eps_f} must be positive")));
    }
    let m = mu.dim();
    let k = quantize_level(m, eps_f);
    match mu {
        Measure::Discrete(d) => {
            let mut by_cell: std::collections::BTreeMap<Vec<i64>, Vec<usize>> =
                std::collections::BTreeMap::new();
            for (i, (pos, _)) in d.atoms().iter().enumerate() {
                let idx: Vec<i64> = pos.iter().map(|x| x.dyadic_cell(k)).collect();
                by_cell.entry(idx).or_default().push(i);
            }
            let mut atoms = Vec::with_capacity(by_cell.len());
            for (idx, members) in by_cell {
                if members.len() == 1 {
                    atoms.push(d.atoms()[members[0]].clone());
                } else {
                    let mut w = Scalar::zero();
                    for &i in &members {
                        w = w + d.atoms()[i].1.clone();
                    }
                    atoms.push((cell_center(&idx, k), w));
                }
            }
            DiscreteMeasure::new(atoms)
        }
        _ => {
            let h = dyadic_histogram(mu, k.max(1), CELL_BUDGET)?;
            let exact = matches!(h.mode, super::HistogramMode::Exact);
            let total = h.total_mass();
            let mut atoms = Vec::with_capacity(h.cells.len());
            for (idx, mass) in &h.cells {
                let w = if exact {
                    mass.clone()
                } else {
                    // approximate cylinder masses: renormalize float drift
                    Scalar::from_f64(mass.to_f64() / total)
                };
                atoms.push((cell_center(idx, k.max(1)), w));
            }
            DiscreteMeasure::new(atoms)
        }
    }
}

/// What the smoothing construction actually achieved, with both the
/// measured quantities and the bounds they must satisfy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproxCertificate {
    pub epsilon: f64,
    pub beta: f64,
    pub quantization_level: u32,
    /// d_L(mu, nu); computable exactly only when mu is discrete.
    pub dl_mu_nu: Option<f64>,
    pub dl_mu_nu_bound: f64,
    /// d_L(nu, nu * lambda_1), measured through a fine quantization of the
    /// result (slack for the fine grid included).
    pub dl_nu_result: f64,
    pub dl_nu_result_bound: f64,
    /// max-norm radius of support(lambda_1).
    pub support_radius: f64,
    pub support_radius_bound: f64,
    pub support_ok: bool,
    /// result support inside the eps-fattening of support(mu).
    pub support_within_fattening: bool,
    /// slope estimates of the L^2 dimension, result vs bare template.
    pub dim_template: f64,
    pub dim_result: f64,
    pub dim_gap: f64,
}

/// 1D template for beta <= 1, two-factor product for 1 < beta <= 2 (each
/// factor carries beta/2).
fn build_template(m: usize, beta: f64) -> Result<SelfSimilarMeasure> {
    match m {
        1 => template_measure(beta),
        2 => {
            let f = template_measure(beta / 2.0)?;
            let ifs = product_ifs(&f.wifs.ifs, &f.wifs.ifs)?;
            SelfSimilarMeasure::new(WeightedIFS::uniform(ifs)?)
        }
        _ => Err(Error::UnsupportedDimension(m)),
    }
}

/// nu * lambda_1 with lambda_1(D) = lambda(8 sqrt(m) diam(K) D / eps).
/// The template hull is [0,1]^m, so 8 sqrt(m) diam(K) = 8m exactly and the
/// scale factor stays rational for rational eps.
pub fn approximate_measure(
    mu: &Measure,
    eps: &Scalar,
    beta: f64,
) -> Result<(MixtureMeasure, ApproxCertificate)> {
    let m = mu.dim();
    let eps_f = eps.to_f64();
    if eps_f <= 0.0 {
        return Err(Error::Domain(format!("eps = {eps_f} must be positive")));
    }
    if !(beta > 0.0 && beta <= m as f64) {
        return Err(Error::Domain(format!("beta = {beta} outside (0, {m}]")));
    }
    let nu = quantize(mu, eps)?;
    let lambda = build_template(m, beta)?;
    let (hull_lo, hull_hi) = {
        let (lo, hi) = Measure::SelfSimilar(lambda.clone()).support_bounds();
        (lo, hi)
    };
    for i in 0..m {
        debug_assert!(hull_lo[i].abs() < 1e-9 && (hull_hi[i] - 1.0).abs() < 1e-9);
    }
    let factor = Scalar::from_rat(rat(8 * m as i64, 1)) / eps.clone();
    let lambda1 = lambda.scale(&factor)?;

    let (l1_lo, l1_hi) = Measure::SelfSimilar(lambda1.clone()).support_bounds();
    let support_radius = (0..m)
        .map(|i| l1_lo[i].abs().max(l1_hi[i].abs()))
        .fold(0.0f64, f64::max);
    let support_radius_bound = eps_f / (4.0 * (m as f64).sqrt());
    let support_ok = support_radius <= support_radius_bound + 1e-12;

    let result = convolve_with_discrete(&lambda1, &nu)?;
    let result_m = Measure::Mixture(result.clone());

    let dl_mu_nu = match mu {
        Measure::Discrete(d) => Some(dl_distance(d, &nu)?),
        _ => None,
    };
    let fine_eps = eps / &Scalar::from_rat(rat(16, 1));
    let fine = quantize(&result_m, &fine_eps)?;
    let dl_nu_result = dl_distance(&nu, &fine)? + fine_eps.to_f64() / 2.0;
    let dl_nu_result_bound = eps_f / 4.0;

    let (mu_lo, mu_hi) = mu.support_bounds();
    let (r_lo, r_hi) = result_m.support_bounds();
    let support_within_fattening = (0..m)
        .all(|i| r_lo[i] >= mu_lo[i] - eps_f - 1e-9 && r_hi[i] <= mu_hi[i] + eps_f + 1e-9);

    let k_dim = if m == 1 { 14 } else { 8 };
    let dim_template =
        lq_dimension_estimate(&Measure::SelfSimilar(lambda), 2.0, k_dim, CELL_BUDGET)?.extrapolated;
    let dim_result = lq_dimension_estimate(&result_m, 2.0, k_dim, CELL_BUDGET)?.extrapolated;

    let certificate = ApproxCertificate {
        epsilon: eps_f,
        beta,
        quantization_level: quantize_level(m, eps_f),
        dl_mu_nu,
        dl_mu_nu_bound: eps_f / 2.0,
        dl_nu_result,
        dl_nu_result_bound,
        support_radius,
        support_radius_bound,
        support_ok,
        support_within_fattening,
        dim_template,
        dim_result,
        dim_gap: (dim_result - dim_template).abs(),
    };
    Ok((result, certificate))
}

/// Greedy eps-net F of E: every point of E is within eps of F and F is a
/// subset of E, so the Hausdorff distance is at most eps.
pub fn approximate_set(e: &PointCloud, eps: f64) -> Result<PointCloud> {
    if eps <= 0.0 {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    let mut centers: Vec<Vec<f64>> = Vec::new();
    for p in &e.points {
        if centers
            .iter()
            .all(|c| crate::geometry::dist2(c, p) > eps)
        {
            centers.push(p.clone());
        }
    }
    PointCloud::with_resolution(centers, e.resolution + eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hausdorff_distance;
    use crate::measure::{cantor_measure, lebesgue_surrogate};

    fn sc(n: i64, d: i64) -> Scalar {
        Scalar::from_rat(rat(n, d))
    }

    #[test]
    fn quantize_keeps_separated_discrete_measure() {
        let coin = DiscreteMeasure::new(vec![
            (vec![sc(0, 1)], sc(1, 2)),
            (vec![sc(1, 1)], sc(1, 2)),
        ])
        .unwrap();
        let q = quantize(&Measure::Discrete(coin.clone()), &sc(1, 10)).unwrap();
        assert_eq!(q, coin);
        // dirac anywhere comes back exactly
        let d = DiscreteMeasure::dirac(vec![sc(1, 3)]);
        let qd = quantize(&Measure::Discrete(d.clone()), &sc(1, 100)).unwrap();
        assert_eq!(qd, d);
    }

    #[test]
    fn quantize_merges_into_cell_centers() {
        let pair = DiscreteMeasure::new(vec![
            (vec![sc(1, 100)], sc(1, 2)),
            (vec![sc(2, 100)], sc(1, 2)),
        ])
        .unwrap();
        // eps = 1/2 -> level 1 cells; both atoms sit in [0, 1/2)
        let q = quantize(&Measure::Discrete(pair), &sc(1, 2)).unwrap();
        assert_eq!(q.atoms(), &[(vec![sc(1, 4)], Scalar::one())]);
    }

    #[test]
    fn quantize_lebesgue_uniform_atoms() {
        let mu = Measure::SelfSimilar(lebesgue_surrogate());
        let q = quantize(&mu, &sc(1, 8)).unwrap();
        assert_eq!(q.atoms().len(), 8);
        for (_, w) in q.atoms() {
            assert_eq!(*w, sc(1, 8));
        }
        // d_L <= eps/2 against a finer quantization (which is itself within
        // eps/32 of mu)
        let fine = quantize(&mu, &sc(1, 128)).unwrap();
        let d = dl_distance(&q, &fine).unwrap();
        assert!(d <= 0.5 / 8.0 + 1.0 / 256.0, "d_L = {d}");
    }

    #[test]
    fn quantize_cantor_masses_are_exact() {
        let q = quantize(&Measure::SelfSimilar(cantor_measure()), &sc(1, 4)).unwrap();
        let total: f64 = q.atoms().iter().map(|(_, w)| w.to_f64()).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(q.atoms().iter().all(|(_, w)| w.is_exact()));
    }

    #[test]
    fn smoothing_dirac_stays_close() {
        let mu = Measure::Discrete(DiscreteMeasure::dirac(vec![Scalar::zero()]));
        let (result, cert) = approximate_measure(&mu, &sc(1, 10), 1.0).unwrap();
        assert_eq!(cert.dl_mu_nu, Some(0.0));
        assert!(cert.support_ok, "radius {}", cert.support_radius);
        assert!(
            cert.dl_nu_result <= cert.dl_nu_result_bound,
            "{} > {}",
            cert.dl_nu_result,
            cert.dl_nu_result_bound
        );
        assert!(cert.dl_mu_nu.unwrap() + cert.dl_nu_result < 0.1);
        assert!(cert.support_within_fattening);
        // a single smeared copy of the scaled Lebesgue template
        assert_eq!(result.components.len(), 1);
        // smoothing with beta = 1 keeps full dimension
        assert!((cert.dim_result - 1.0).abs() < 0.05, "{}", cert.dim_result);
    }

    #[test]
    fn smoothing_cantor_hits_target_dimension() {
        let mu = Measure::SelfSimilar(cantor_measure());
        let (_, cert) = approximate_measure(&mu, &sc(1, 20), 0.5).unwrap();
        assert!(cert.support_ok);
        assert!(cert.dl_nu_result <= cert.dl_nu_result_bound);
        assert!(cert.support_within_fattening);
        assert!(
            cert.dim_gap < 0.05,
            "result {} vs template {}",
            cert.dim_result,
            cert.dim_template
        );
    }

    #[test]
    fn net_of_small_cloud_is_single_point() {
        let e = PointCloud::exact(vec![vec![0.0, 0.0], vec![0.01, 0.0]]).unwrap();
        let f = approximate_set(&e, 1.0).unwrap();
        assert_eq!(f.points.len(), 1);
    }

    #[test]
    fn net_covers_random_clouds() {
        let mut rng = crate::ifs::ChaosRng::new(5);
        for _ in 0..20 {
            let pts: Vec<Vec<f64>> = (0..40)
                .map(|_| vec![rng.next_f64(), rng.next_f64()])
                .collect();
            let e = PointCloud::exact(pts).unwrap();
            let f = approximate_set(&e, 0.1).unwrap();
            assert!(hausdorff_distance(&e, &f).unwrap() <= 0.1);
        }
    }

    #[test]
    fn net_of_cantor_cloud_obeys_covering_bound() {
        let e = crate::ifs::attractor_points(&crate::corpus::cantor(), 10).unwrap();
        let f = approximate_set(&e, 0.01).unwrap();
        assert!(hausdorff_distance(&e, &f).unwrap() <= 0.01);
        // covering-number sanity: about (1/eps)^{log2/log3} centers
        let bound = 3.0 * (1.0f64 / 0.01).powf(0.64);
        assert!((f.points.len() as f64) <= bound, "{}", f.points.len());
    }
}
