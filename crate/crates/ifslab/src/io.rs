//! JSON schemas for IFS and measure definitions, and the built-in corpus
//! registry used by the CLI.

use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::geometry::{Matrix, OrthoMatrix};
use crate::ifs::{canonicalize, ArithmeticMode, WeightedIFS, IFS};
use crate::measure::{cantor_measure, lebesgue_surrogate, DiscreteMeasure, Measure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub ratio: Scalar,
    pub orthogonal: Vec<Vec<f64>>,
    pub translation: Vec<Scalar>,
}

/// On-disk IFS description. Rationals serialize as "p/q" strings in exact
/// mode; weights are optional and default to uniform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfsSpec {
    pub dim: usize,
    pub maps: Vec<MapSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Scalar>>,
    pub arithmetic: ArithmeticMode,
}

impl IfsSpec {
    pub fn from_ifs(ifs: &IFS, weights: Option<&[Scalar]>) -> Self {
        let maps = ifs
            .maps()
            .iter()
            .map(|h| {
                let m = h.orthogonal.matrix();
                let d = h.dim();
                let rows = (0..d)
                    .map(|i| (0..d).map(|j| m.at(i, j)).collect())
                    .collect();
                MapSpec {
                    ratio: h.ratio.clone(),
                    orthogonal: rows,
                    translation: h.translation.clone(),
                }
            })
            .collect();
        IfsSpec {
            dim: ifs.dim(),
            maps,
            weights: weights.map(|w| w.to_vec()),
            arithmetic: ifs.mode,
        }
    }

    pub fn to_ifs(&self) -> Result<IFS> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, spec) in self.maps.iter().enumerate() {
            if spec.translation.len() != self.dim || spec.orthogonal.len() != self.dim {
                return Err(Error::InvalidInput(format!(
                    "map {}: expected dimension {}",
                    i + 1,
                    self.dim
                )));
            }
            let o = OrthoMatrix::new(Matrix::from_rows(&spec.orthogonal)?)?;
            maps.push(canonicalize(spec.ratio.clone(), o, spec.translation.clone())?);
        }
        IFS::new(maps, self.arithmetic)
    }

    pub fn to_weighted(&self) -> Result<WeightedIFS> {
        let ifs = self.to_ifs()?;
        match &self.weights {
            Some(w) => WeightedIFS::new(ifs, w.clone()),
            None => WeightedIFS::uniform(ifs),
        }
    }
}

pub const BUILTIN_SYSTEMS: &[&str] = &[
    "cantor",
    "sierpinski",
    "garsia",
    "overlap-remark",
    "overlap-exact",
    "lebesgue",
];

pub const BUILTIN_MEASURES: &[&str] = &["cantor-measure", "lebesgue", "dirac0"];

pub fn builtin_ifs(name: &str) -> Option<IFS> {
    match name {
        "cantor" => Some(corpus::cantor()),
        "sierpinski" => Some(corpus::sierpinski()),
        "garsia" => Some(corpus::garsia()),
        "overlap-remark" => Some(corpus::overlap_remark()),
        "overlap-exact" => Some(corpus::overlap_exact()),
        "lebesgue" => Some(corpus::lebesgue_system()),
        _ => None,
    }
}

pub fn builtin_measure(name: &str) -> Option<Measure> {
    match name {
        "cantor-measure" => Some(Measure::SelfSimilar(cantor_measure())),
        "lebesgue" => Some(Measure::SelfSimilar(lebesgue_surrogate())),
        "dirac0" => Some(Measure::Discrete(DiscreteMeasure::dirac(vec![
            Scalar::zero(),
        ]))),
        _ => None,
    }
}

pub fn parse_ifs_json(text: &str) -> Result<IfsSpec> {
    serde_json::from_str(text).map_err(Error::from)
}

pub fn parse_measure_json(text: &str) -> Result<Measure> {
    serde_json::from_str(text).map_err(Error::from)
}
