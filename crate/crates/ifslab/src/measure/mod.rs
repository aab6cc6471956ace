//! Compactly supported probability measures: discrete atom sets, invariant
//! measures of weighted IFSs, and finite mixtures of translated/scaled
//! copies, together with their dyadic L^q machinery.

mod approx;
mod cdf;
mod histogram;
mod transport;

pub use approx::{approximate_measure, approximate_set, quantize, ApproxCertificate};
pub use cdf::Cdf1D;
pub use histogram::{
    dyadic_histogram, lq_dimension_estimate, lq_tau_k, monte_carlo_histogram,
    translated_cell_cover, DyadicHistogram, HistogramMode, LqReport, CELL_BUDGET,
};
pub use transport::{dl_distance, ATOM_BUDGET};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Scalar};
use crate::geometry::{dist2, OrthoMatrix, Polytope};
use crate::ifs::{attractor_hull, canonicalize, ArithmeticMode, Similarity, WeightedIFS, IFS};

/// Finitely many weighted atoms; weights positive and normalized,
/// positions distinct (coincident input atoms are merged).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<(Vec<Scalar>, Scalar)>,
}

fn cmp_positions(a: &[Scalar], b: &[Scalar]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(Vec<Scalar>, Scalar)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("measure needs at least one atom".into()));
        }
        let m = atoms[0].0.len();
        if atoms.iter().any(|(p, _)| p.len() != m) {
            return Err(Error::DimensionMismatch(m, 0));
        }
        if atoms.iter().any(|(_, w)| w.to_f64() <= 0.0) {
            return Err(Error::InvalidInput("atom weights must be positive".into()));
        }
        let mut sorted = atoms;
        sorted.sort_by(|a, b| cmp_positions(&a.0, &b.0));
        let mut merged: Vec<(Vec<Scalar>, Scalar)> = Vec::with_capacity(sorted.len());
        for (p, w) in sorted {
            match merged.last_mut() {
                Some((lp, lw)) if cmp_positions(lp, &p) == std::cmp::Ordering::Equal => {
                    *lw = lw.clone() + w;
                }
                _ => merged.push((p, w)),
            }
        }
        let total: f64 = merged.iter().map(|(_, w)| w.to_f64()).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "atom weights sum to {total}, expected 1"
            )));
        }
        Ok(DiscreteMeasure { atoms: merged })
    }

    pub fn dirac(position: Vec<Scalar>) -> Self {
        DiscreteMeasure {
            atoms: vec![(position, Scalar::one())],
        }
    }

    pub fn atoms(&self) -> &[(Vec<Scalar>, Scalar)] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].0.len()
    }

    pub fn translate(&self, t: &[Scalar]) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|(p, w)| {
                    (
                        p.iter().zip(t).map(|(x, s)| x + s).collect(),
                        w.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Pushforward under x -> x / beta.
    pub fn scale(&self, beta: &Scalar) -> Result<DiscreteMeasure> {
        if beta.is_zero() {
            return Err(Error::Domain("scale factor must be nonzero".into()));
        }
        Ok(DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|(p, w)| (p.iter().map(|x| x / beta).collect(), w.clone()))
                .collect(),
        })
    }
}

/// Invariant measure of a weighted IFS, carried with an enclosing hull.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfSimilarMeasure {
    pub wifs: WeightedIFS,
    pub support_hull: Polytope,
}

impl SelfSimilarMeasure {
    pub fn new(wifs: WeightedIFS) -> Result<Self> {
        let support_hull = attractor_hull(&wifs.ifs, 1e-12)?;
        Ok(SelfSimilarMeasure { wifs, support_hull })
    }

    pub fn dim(&self) -> usize {
        self.wifs.ifs.dim()
    }

    /// Conjugate every map by x -> x + t: translation a + t - cU t.
    pub fn translate(&self, t: &[Scalar]) -> SelfSimilarMeasure {
        let maps: Vec<Similarity> = self
            .wifs
            .ifs
            .maps()
            .iter()
            .map(|h| {
                let cut = h.apply_scalar(t);
                let translation = h
                    .translation
                    .iter()
                    .zip(t)
                    .zip(h.translation.iter().zip(cut.iter()))
                    .map(|((a, ti), (_, cuti))| a.clone() + ti.clone() - (cuti - a))
                    .collect();
                Similarity {
                    ratio: h.ratio.clone(),
                    orthogonal: h.orthogonal.clone(),
                    translation,
                }
            })
            .collect();
        let mode = self.wifs.ifs.mode;
        let ifs = IFS::new(maps, mode).expect("conjugation preserves validity");
        let tf: Vec<f64> = t.iter().map(|s| s.to_f64()).collect();
        let support_hull = Polytope {
            vertices: self
                .support_hull
                .vertices
                .iter()
                .map(|v| v.iter().zip(&tf).map(|(x, s)| x + s).collect())
                .collect(),
        };
        SelfSimilarMeasure {
            wifs: WeightedIFS::new(ifs, self.wifs.weights().to_vec()).expect("weights unchanged"),
            support_hull,
        }
    }

    /// Pushforward under x -> x / beta: conjugation sends a to a / beta.
    pub fn scale(&self, beta: &Scalar) -> Result<SelfSimilarMeasure> {
        if beta.is_zero() {
            return Err(Error::Domain("scale factor must be nonzero".into()));
        }
        let maps: Vec<Similarity> = self
            .wifs
            .ifs
            .maps()
            .iter()
            .map(|h| Similarity {
                ratio: h.ratio.clone(),
                orthogonal: h.orthogonal.clone(),
                translation: h.translation.iter().map(|a| a / beta).collect(),
            })
            .collect();
        let ifs = IFS::new(maps, self.wifs.ifs.mode)?;
        let bf = beta.to_f64();
        let m = self.dim();
        let o = if bf > 0.0 {
            OrthoMatrix::identity(m)
        } else if m == 1 {
            OrthoMatrix::sign(-1.0)
        } else {
            OrthoMatrix::rotation(std::f64::consts::PI)
        };
        let support_hull = self.support_hull.transform(1.0 / bf.abs(), &o, &vec![0.0; m]);
        Ok(SelfSimilarMeasure {
            wifs: WeightedIFS::new(ifs, self.wifs.weights().to_vec())?,
            support_hull,
        })
    }
}

/// Finite mixture with normalized weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureMeasure {
    pub components: Vec<(Measure, Scalar)>,
}

impl MixtureMeasure {
    pub fn new(components: Vec<(Measure, Scalar)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("mixture needs components".into()));
        }
        let m = components[0].0.dim();
        if components.iter().any(|(c, _)| c.dim() != m) {
            return Err(Error::DimensionMismatch(m, 0));
        }
        if components.iter().any(|(_, w)| w.to_f64() <= 0.0) {
            return Err(Error::InvalidInput("mixture weights must be positive".into()));
        }
        let total: f64 = components.iter().map(|(_, w)| w.to_f64()).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(MixtureMeasure { components })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Measure {
    Discrete(DiscreteMeasure),
    SelfSimilar(SelfSimilarMeasure),
    Mixture(MixtureMeasure),
}

impl Measure {
    pub fn dim(&self) -> usize {
        match self {
            Measure::Discrete(d) => d.dim(),
            Measure::SelfSimilar(s) => s.dim(),
            Measure::Mixture(m) => m.components[0].0.dim(),
        }
    }

    pub fn translate(&self, t: &[Scalar]) -> Measure {
        match self {
            Measure::Discrete(d) => Measure::Discrete(d.translate(t)),
            Measure::SelfSimilar(s) => Measure::SelfSimilar(s.translate(t)),
            Measure::Mixture(m) => Measure::Mixture(MixtureMeasure {
                components: m
                    .components
                    .iter()
                    .map(|(c, w)| (c.translate(t), w.clone()))
                    .collect(),
            }),
        }
    }

    pub fn scale(&self, beta: &Scalar) -> Result<Measure> {
        match self {
            Measure::Discrete(d) => Ok(Measure::Discrete(d.scale(beta)?)),
            Measure::SelfSimilar(s) => Ok(Measure::SelfSimilar(s.scale(beta)?)),
            Measure::Mixture(m) => {
                let mut components = Vec::with_capacity(m.components.len());
                for (c, w) in &m.components {
                    components.push((c.scale(beta)?, w.clone()));
                }
                Ok(Measure::Mixture(MixtureMeasure { components }))
            }
        }
    }

    /// Axis-aligned bounding box of the support.
    pub fn support_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Measure::Discrete(d) => {
                let m = d.dim();
                let mut lo = vec![f64::INFINITY; m];
                let mut hi = vec![f64::NEG_INFINITY; m];
                for (p, _) in d.atoms() {
                    for (i, x) in p.iter().enumerate() {
                        let v = x.to_f64();
                        lo[i] = lo[i].min(v);
                        hi[i] = hi[i].max(v);
                    }
                }
                (lo, hi)
            }
            Measure::SelfSimilar(s) => {
                let m = s.dim();
                let mut lo = vec![f64::INFINITY; m];
                let mut hi = vec![f64::NEG_INFINITY; m];
                for v in &s.support_hull.vertices {
                    for i in 0..m {
                        lo[i] = lo[i].min(v[i]);
                        hi[i] = hi[i].max(v[i]);
                    }
                }
                (lo, hi)
            }
            Measure::Mixture(mx) => {
                let m = self.dim();
                let mut lo = vec![f64::INFINITY; m];
                let mut hi = vec![f64::NEG_INFINITY; m];
                for (c, _) in &mx.components {
                    let (clo, chi) = c.support_bounds();
                    for i in 0..m {
                        lo[i] = lo[i].min(clo[i]);
                        hi[i] = hi[i].max(chi[i]);
                    }
                }
                (lo, hi)
            }
        }
    }

    pub fn support_diameter(&self) -> f64 {
        let (lo, hi) = self.support_bounds();
        dist2(&lo, &hi)
    }
}

/// Atom-by-atom convolution; coincident sums merge.
pub fn convolve(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch(mu.dim(), nu.dim()));
    }
    let mut atoms = Vec::with_capacity(mu.atoms().len() * nu.atoms().len());
    for (x, wx) in mu.atoms() {
        for (y, wy) in nu.atoms() {
            let pos: Vec<Scalar> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            atoms.push((pos, wx.clone() * wy.clone()));
        }
    }
    DiscreteMeasure::new(atoms)
}

/// mu * sum c_j delta_{x_j} = sum c_j (mu translated by x_j).
pub fn convolve_with_discrete(
    mu: &SelfSimilarMeasure,
    omega: &DiscreteMeasure,
) -> Result<MixtureMeasure> {
    if mu.dim() != omega.dim() {
        return Err(Error::DimensionMismatch(mu.dim(), omega.dim()));
    }
    let components = omega
        .atoms()
        .iter()
        .map(|(x, c)| (Measure::SelfSimilar(mu.translate(x)), c.clone()))
        .collect();
    MixtureMeasure::new(components)
}

/// nu(D) = mu(beta D): pushforward under x -> x / beta.
pub fn scale_measure(mu: &Measure, beta: &Scalar) -> Result<Measure> {
    mu.scale(beta)
}

/// The 1D template in S_beta: {r x, r x + (1 - r)} with r = 2^{-1/beta},
/// equal weights. beta = 1 is the Lebesgue surrogate; integer 1/beta gives
/// exact dyadic r.
pub fn template_measure(beta: f64) -> Result<SelfSimilarMeasure> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain(format!("beta = {beta} outside (0, 1]")));
    }
    let inv = 1.0 / beta;
    let (r, one_minus_r, mode) = if (inv - inv.round()).abs() < 1e-12 {
        let s = inv.round() as i64;
        let r = rat(1, 1i64 << s);
        let omr = rat((1i64 << s) - 1, 1i64 << s);
        (Scalar::from_rat(r), Scalar::from_rat(omr), ArithmeticMode::Exact)
    } else {
        let r = 2.0f64.powf(-inv);
        (
            Scalar::from_f64(r),
            Scalar::from_f64(1.0 - r),
            ArithmeticMode::Float,
        )
    };
    let maps = vec![
        canonicalize(r.clone(), OrthoMatrix::identity(1), vec![Scalar::zero()])?,
        canonicalize(r, OrthoMatrix::identity(1), vec![one_minus_r])?,
    ];
    let ifs = IFS::new(maps, mode)?;
    SelfSimilarMeasure::new(WeightedIFS::uniform(ifs)?)
}

/// Cantor measure: equal weights on the middle-third system.
pub fn cantor_measure() -> SelfSimilarMeasure {
    SelfSimilarMeasure::new(WeightedIFS::uniform(crate::corpus::cantor()).unwrap()).unwrap()
}

/// Uniform measure on [0,1] as the invariant measure of {x/2, x/2 + 1/2}.
pub fn lebesgue_surrogate() -> SelfSimilarMeasure {
    SelfSimilarMeasure::new(WeightedIFS::uniform(crate::corpus::lebesgue_system()).unwrap())
        .unwrap()
}
