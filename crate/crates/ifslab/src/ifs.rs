//! Similarity maps, word composition, the similarity-space metric, product
//! systems, attractor approximation and Moran-equation dimension solvers.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rat, Scalar};
use crate::geometry::{
    block_diag, convex_hull, norm2, operator_norm, polytope_hausdorff, OrthoMatrix, Point,
    PointCloud, Polytope,
};

/// Default cap on N^depth for attractor enumeration.
pub const POINT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

/// One contracting similarity x -> r * O x + t with canonical ratio
/// r in (0, 1); a negative input ratio is absorbed into the orthogonal part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub ratio: Scalar,
    pub orthogonal: OrthoMatrix,
    pub translation: Vec<Scalar>,
}

impl Similarity {
    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn ratio_f64(&self) -> f64 {
        self.ratio.to_f64()
    }

    pub fn translation_f64(&self) -> Point {
        self.translation.iter().map(|t| t.to_f64()).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Point {
        let r = self.ratio_f64();
        let ox = self.orthogonal.apply(x);
        ox.iter()
            .zip(self.translation.iter())
            .map(|(v, t)| r * v + t.to_f64())
            .collect()
    }

    /// Apply preserving exactness where possible (1D: the orthogonal part is
    /// an exact sign).
    pub fn apply_scalar(&self, x: &[Scalar]) -> Vec<Scalar> {
        if self.dim() == 1 {
            let sign = self.orthogonal.matrix().at(0, 0);
            let sx = if sign < 0.0 { -x[0].clone() } else { x[0].clone() };
            vec![self.ratio.clone() * sx + self.translation[0].clone()]
        } else {
            self.apply(&x.iter().map(|s| s.to_f64()).collect::<Vec<_>>())
                .into_iter()
                .map(Scalar::from_f64)
                .collect()
        }
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose_with(&self, other: &Similarity) -> Similarity {
        let ratio = self.ratio.clone() * other.ratio.clone();
        let orthogonal = self
            .orthogonal
            .compose(&other.orthogonal)
            .expect("same dimension");
        let translation = self.apply_scalar(&other.translation);
        Similarity {
            ratio,
            orthogonal,
            translation,
        }
    }

    /// Fixed point by iterating the map to machine precision.
    pub fn fixed_point(&self) -> Point {
        let mut x = vec![0.0; self.dim()];
        for _ in 0..10_000 {
            let next = self.apply(&x);
            let delta: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
            x = next;
            if delta < 1e-16 {
                break;
            }
        }
        x
    }

    /// Exact fixed point for 1D rational maps: x = d / (1 - sigma c).
    pub fn fixed_point_exact_1d(&self) -> Option<Rat> {
        if self.dim() != 1 {
            return None;
        }
        let c = self.ratio.as_rat()?.clone();
        let d = self.translation[0].as_rat()?.clone();
        let sc = if self.orthogonal.matrix().at(0, 0) < 0.0 { -c } else { c };
        Some(d / (Rat::one() - sc))
    }
}

/// Build a canonical similarity from a possibly-negative scaling ratio.
pub fn canonicalize(signed_ratio: Scalar, o: OrthoMatrix, a: Vec<Scalar>) -> Result<Similarity> {
    if signed_ratio.is_zero() {
        return Err(Error::DegenerateMap("scaling ratio is zero".into()));
    }
    if o.dim() != a.len() {
        return Err(Error::DimensionMismatch(o.dim(), a.len()));
    }
    let (ratio, orthogonal) = if signed_ratio.is_negative() {
        (-signed_ratio, o.negate())
    } else {
        (signed_ratio, o)
    };
    if ratio >= Scalar::one() {
        return Err(Error::DegenerateMap(format!(
            "|ratio| = {} is not contracting",
            ratio
        )));
    }
    Ok(Similarity {
        ratio,
        orthogonal,
        translation: a,
    })
}

/// A finite word over {1..N}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn new(symbols: Vec<u32>, n_maps: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidInput("empty word".into()));
        }
        if symbols.iter().any(|&s| s < 1 || s as usize > n_maps) {
            return Err(Error::InvalidInput(format!(
                "word symbols must lie in 1..={n_maps}"
            )));
        }
        Ok(Word(symbols))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// An iterated function system of N >= 2 contracting similarities on R^m.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IFS {
    maps: Vec<Similarity>,
    pub mode: ArithmeticMode,
}

impl IFS {
    pub fn new(maps: Vec<Similarity>, mode: ArithmeticMode) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::InvalidInput("an IFS needs at least 2 maps".into()));
        }
        let m = maps[0].dim();
        for map in &maps {
            if map.dim() != m {
                return Err(Error::DimensionMismatch(m, map.dim()));
            }
            let r = map.ratio_f64();
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::DegenerateMap(format!(
                    "ratio {r} outside (0,1)"
                )));
            }
            if mode == ArithmeticMode::Exact && (!map.ratio.is_exact()
                || map.translation.iter().any(|t| !t.is_exact()))
            {
                return Err(Error::InvalidInput(
                    "exact mode requires rational ratios and translations".into(),
                ));
            }
        }
        Ok(IFS { maps, mode })
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().map(|m| m.ratio_f64()).fold(0.0, f64::max)
    }

    /// Radius of a ball at the origin that the IFS maps into itself.
    pub fn bound_radius(&self) -> f64 {
        let a_max = self
            .maps
            .iter()
            .map(|m| norm2(&m.translation_f64()))
            .fold(0.0, f64::max);
        a_max / (1.0 - self.max_ratio())
    }

    /// Compose the maps named by a word: h_w = h_{w1} . h_{w2} . ... . h_{wn}.
    pub fn compose(&self, w: &Word) -> Result<Similarity> {
        if w.is_empty() {
            return Err(Error::InvalidInput("cannot compose the empty word".into()));
        }
        let mut it = w.0.iter();
        let first = *it.next().unwrap() as usize;
        if first < 1 || first > self.len() {
            return Err(Error::InvalidInput("word symbol out of range".into()));
        }
        let mut acc = self.maps[first - 1].clone();
        for &s in it {
            let s = s as usize;
            if s < 1 || s > self.len() {
                return Err(Error::InvalidInput("word symbol out of range".into()));
            }
            acc = acc.compose_with(&self.maps[s - 1]);
        }
        Ok(acc)
    }

    /// All length-n compositions in lexicographic word order.
    pub fn compose_level(&self, n: u32, budget: u128) -> Result<Vec<(Word, Similarity)>> {
        let count = (self.len() as u128)
            .checked_pow(n)
            .ok_or(Error::Budget {
                what: "level enumeration",
                needed: u128::MAX,
                cap: budget,
                largest_feasible_n: None,
            })?;
        if count > budget {
            let mut feasible = 0u32;
            let mut c = 1u128;
            while c.saturating_mul(self.len() as u128) <= budget {
                c *= self.len() as u128;
                feasible += 1;
            }
            return Err(Error::Budget {
                what: "level enumeration",
                needed: count,
                cap: budget,
                largest_feasible_n: Some(feasible),
            });
        }
        let mut level: Vec<(Word, Similarity)> = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| (Word(vec![i as u32 + 1]), m.clone()))
            .collect();
        for _ in 1..n {
            let mut next = Vec::with_capacity(level.len() * self.len());
            for (w, sim) in &level {
                for (i, m) in self.maps.iter().enumerate() {
                    let mut sw = w.0.clone();
                    sw.push(i as u32 + 1);
                    next.push((Word(sw), sim.compose_with(m)));
                }
            }
            level = next;
        }
        Ok(level)
    }
}

/// Hochman's metric on canonical similarities:
/// |log r - log r'| + ||O - O'|| + ||t - t'||_2, exact where the inputs are.
pub fn map_distance(f: &Similarity, g: &Similarity) -> Result<Scalar> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    let log_term = if f.ratio == g.ratio {
        Scalar::zero()
    } else {
        Scalar::from_f64((f.ratio_f64().ln() - g.ratio_f64().ln()).abs())
    };
    let orth_term = if f.orthogonal == g.orthogonal {
        Scalar::zero()
    } else if f.dim() == 1 {
        // 1x1 orthogonal parts are exact signs
        let d = (f.orthogonal.matrix().at(0, 0) - g.orthogonal.matrix().at(0, 0)).abs();
        Scalar::exact_from_f64(d).unwrap()
    } else {
        let diff = f.orthogonal.matrix().sub(g.orthogonal.matrix())?;
        Scalar::from_f64(operator_norm(&diff))
    };
    let trans_term = if f.dim() == 1 {
        (f.translation[0].clone() - g.translation[0].clone()).abs()
    } else {
        let df: Vec<f64> = f
            .translation_f64()
            .iter()
            .zip(g.translation_f64().iter())
            .map(|(a, b)| a - b)
            .collect();
        Scalar::from_f64(norm2(&df))
    };
    Ok(log_term + orth_term + trans_term)
}

/// A weighted IFS: the data of a self-similar measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedIFS {
    pub ifs: IFS,
    weights: Vec<Scalar>,
}

impl WeightedIFS {
    pub fn new(ifs: IFS, weights: Vec<Scalar>) -> Result<Self> {
        if weights.len() != ifs.len() {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} maps",
                weights.len(),
                ifs.len()
            )));
        }
        if weights.iter().any(|w| w.to_f64() <= 0.0) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        let total: f64 = weights.iter().map(|w| w.to_f64()).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(WeightedIFS { ifs, weights })
    }

    pub fn uniform(ifs: IFS) -> Result<Self> {
        let n = ifs.len() as i64;
        let w = Scalar::from_rat(crate::exact::rat(1, n));
        Self::new(ifs, vec![w; n as usize])
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.to_f64()).collect()
    }
}

/// Product of two common-ratio systems: psi_ij = (h_i, g_j) on R^{k+m}.
pub fn product_ifs(i1: &IFS, i2: &IFS) -> Result<IFS> {
    let mut ratios: Vec<f64> = i1.maps().iter().map(|m| m.ratio_f64()).collect();
    ratios.extend(i2.maps().iter().map(|m| m.ratio_f64()));
    let c = ratios[0];
    if ratios.iter().any(|r| (r - c).abs() > 1e-12) {
        return Err(Error::NotSimilitude(
            "all maps of both factors must share one contraction ratio".into(),
        ));
    }
    let mut maps = Vec::with_capacity(i1.len() * i2.len());
    for h in i1.maps() {
        for g in i2.maps() {
            let orthogonal = block_diag(&h.orthogonal, &g.orthogonal);
            let mut translation = h.translation.clone();
            translation.extend(g.translation.iter().cloned());
            maps.push(Similarity {
                ratio: h.ratio.clone(),
                orthogonal,
                translation,
            });
        }
    }
    let mode = if i1.mode == ArithmeticMode::Exact && i2.mode == ArithmeticMode::Exact {
        ArithmeticMode::Exact
    } else {
        ArithmeticMode::Float
    };
    IFS::new(maps, mode)
}

/// Level-`depth` image of the fixed point of h_1 under every word.
pub fn attractor_points(ifs: &IFS, depth: u32) -> Result<PointCloud> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be >= 1".into()));
    }
    let count = (ifs.len() as u128).checked_pow(depth).unwrap_or(u128::MAX);
    if count > POINT_BUDGET {
        return Err(Error::Budget {
            what: "attractor points",
            needed: count,
            cap: POINT_BUDGET,
            largest_feasible_n: None,
        });
    }
    let x0 = ifs.maps()[0].fixed_point();
    let mut pts = vec![x0];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(pts.len() * ifs.len());
        for map in ifs.maps() {
            for p in &pts {
                next.push(map.apply(p));
            }
        }
        pts = next;
    }
    let resolution = ifs.max_ratio().powi(depth as i32) * 2.0 * ifs.bound_radius();
    PointCloud::with_resolution(pts, resolution)
}

/// Deterministic 64-bit PRNG for the chaos game.
///
/// State update (xorshift64*): s ^= s >> 12; s ^= s << 25; s ^= s >> 27;
/// output = (s * 0x2545F4914F6CDD1D) >> 11, mapped to [0,1) with 53 bits.
/// The seed is first mixed through one splitmix64 step so that seed 0 works.
pub struct ChaosRng {
    state: u64,
}

impl ChaosRng {
    pub fn new(seed: u64) -> Self {
        // splitmix64 finalizer
        let mut z = seed.wrapping_add(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^= z >> 31;
        ChaosRng {
            state: if z == 0 { 0x9E3779B97F4A7C15 } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut s = self.state;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        self.state = s;
        s.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Monte Carlo sampler of the invariant measure; deterministic given seed.
pub fn chaos_game(wifs: &WeightedIFS, count: usize, seed: u64) -> Result<PointCloud> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be >= 1".into()));
    }
    let mut rng = ChaosRng::new(seed);
    let weights = wifs.weights_f64();
    let mut cum = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cum.push(acc);
    }
    let pick = |u: f64, cum: &[f64]| -> usize {
        cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1)
    };
    let mut x = wifs.ifs.maps()[0].fixed_point();
    for _ in 0..100 {
        let i = pick(rng.next_f64(), &cum);
        x = wifs.ifs.maps()[i].apply(&x);
    }
    let mut pts = Vec::with_capacity(count);
    for _ in 0..count {
        let i = pick(rng.next_f64(), &cum);
        x = wifs.ifs.maps()[i].apply(&x);
        pts.push(x.clone());
    }
    PointCloud::with_resolution(pts, f64::NAN).map(|mut c| {
        c.resolution = 0.0; // samples lie on (numerically) the attractor
        c
    })
}

/// Convex hull of the attractor by iterating K -> hull(U h_i(K)) from the
/// bound box until the Hausdorff change drops below `tol`.
pub fn attractor_hull(ifs: &IFS, tol: f64) -> Result<Polytope> {
    if tol <= 0.0 {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let m = ifs.dim();
    if m > 2 {
        return Err(Error::UnsupportedDimension(m));
    }
    let r0 = ifs.bound_radius().max(tol);
    let mut hull = match m {
        1 => Polytope::interval(-r0, r0),
        _ => Polytope {
            vertices: vec![
                vec![-r0, -r0],
                vec![r0, -r0],
                vec![r0, r0],
                vec![-r0, r0],
            ],
        },
    };
    for _ in 0..10_000 {
        let mut pts: Vec<Point> = Vec::new();
        for map in ifs.maps() {
            for v in &hull.vertices {
                pts.push(map.apply(v));
            }
        }
        let next = convex_hull(&PointCloud::exact(pts)?)?;
        let change = polytope_hausdorff(&hull, &next)?;
        hull = next;
        if change < tol {
            return Ok(hull);
        }
    }
    Err(Error::NonConvergence(10_000))
}

/// Exact convex hull [a, b] of a 1D rational IFS.
///
/// The float iteration identifies which map/endpoint pair pins each end;
/// the resulting 2x2 rational system is solved and the answer verified by
/// exact invariance. Returns None when the system is not rational 1D or the
/// verification fails.
pub fn attractor_hull_exact_1d(ifs: &IFS) -> Option<(Rat, Rat)> {
    if ifs.dim() != 1 {
        return None;
    }
    // signed ratio and rational translation per map
    let mut maps: Vec<(Rat, Rat)> = Vec::new();
    for m in ifs.maps() {
        let c = m.ratio.as_rat()?.clone();
        let d = m.translation[0].as_rat()?.clone();
        let sc = if m.orthogonal.matrix().at(0, 0) < 0.0 { -c } else { c };
        maps.push((sc, d));
    }
    let hull = attractor_hull(ifs, 1e-13).ok()?;
    let (af, bf) = hull.interval_bounds();
    // find the (map, endpoint) pair attaining each end, numerically
    let eval = |sc: &Rat, d: &Rat, x: f64| sc.to_f64().unwrap() * x + d.to_f64().unwrap();
    let mut lo_choice = (0usize, false);
    let mut hi_choice = (0usize, false);
    let mut lo_val = f64::INFINITY;
    let mut hi_val = f64::NEG_INFINITY;
    for (i, (sc, d)) in maps.iter().enumerate() {
        for (endpoint_is_b, x) in [(false, af), (true, bf)] {
            let v = eval(sc, d, x);
            if v < lo_val {
                lo_val = v;
                lo_choice = (i, endpoint_is_b);
            }
            if v > hi_val {
                hi_val = v;
                hi_choice = (i, endpoint_is_b);
            }
        }
    }
    // solve a = s1 * X1 + d1, b = s2 * X2 + d2 with X in {a, b}
    let (s1, d1) = maps[lo_choice.0].clone();
    let (s2, d2) = maps[hi_choice.0].clone();
    let one = Rat::one();
    let (a, b) = match (lo_choice.1, hi_choice.1) {
        (false, true) => {
            let a = d1.clone() / (one.clone() - s1.clone());
            let b = d2.clone() / (one - s2.clone());
            (a, b)
        }
        (true, true) => {
            let b = d2 / (one.clone() - s2);
            let a = s1 * b.clone() + d1;
            (a, b)
        }
        (false, false) => {
            let a = d1 / (one.clone() - s1);
            let b = s2 * a.clone() + d2;
            (a, b)
        }
        (true, false) => {
            // a = s1 b + d1, b = s2 a + d2
            let det = one.clone() - s1.clone() * s2.clone();
            if det.is_zero() {
                return None;
            }
            let a = (d1.clone() + s1.clone() * d2.clone()) / det.clone();
            let b = s2 * a.clone() + d2;
            (a, b)
        }
    };
    if a > b {
        return None;
    }
    // exact invariance check: every endpoint image stays inside [a, b] and
    // the extremes are attained
    let mut min_img: Option<Rat> = None;
    let mut max_img: Option<Rat> = None;
    for (sc, d) in &maps {
        for x in [&a, &b] {
            let v = sc.clone() * x.clone() + d.clone();
            if v < a || v > b {
                return None;
            }
            min_img = Some(match min_img {
                Some(m) => m.min(v.clone()),
                None => v.clone(),
            });
            max_img = Some(match max_img {
                Some(m) => m.max(v.clone()),
                None => v.clone(),
            });
        }
    }
    if min_img? != a || max_img? != b {
        return None;
    }
    Some((a, b))
}

/// Root of the Moran equation sum c_i^s = 1 by bisection.
pub fn similarity_dimension(ifs: &IFS) -> f64 {
    let ratios: Vec<f64> = ifs.maps().iter().map(|m| m.ratio_f64()).collect();
    moran_root(&ratios)
}

pub fn moran_root(ratios: &[f64]) -> f64 {
    let c_max = ratios.iter().cloned().fold(0.0f64, f64::max);
    let n = ratios.len() as f64;
    let mut lo = 0.0f64;
    let mut hi = n.ln() / (1.0 / c_max).ln();
    // f is strictly decreasing; f(0) = N - 1 > 0, f(hi) <= 0
    let f = |s: f64| ratios.iter().map(|c| c.powf(s)).sum::<f64>() - 1.0;
    if f(hi) > 0.0 {
        hi += 1.0; // guard against rounding at the closed-form bound
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Entropy/Lyapunov quotient: sum p log p / sum p log c.
pub fn measure_similarity_dimension(wifs: &WeightedIFS) -> f64 {
    let p = wifs.weights_f64();
    let c: Vec<f64> = wifs.ifs.maps().iter().map(|m| m.ratio_f64()).collect();
    let num: f64 = p.iter().map(|&pi| pi * pi.log2()).sum();
    let den: f64 = p.iter().zip(&c).map(|(&pi, &ci)| pi * ci.log2()).sum();
    num / den
}

/// Convenience constructor for 1D maps x -> c x + d with rational data.
pub fn map_1d(c: Rat, d: Rat) -> Result<Similarity> {
    let neg = c.is_negative();
    canonicalize(
        Scalar::from_rat(if neg { -c } else { c }),
        OrthoMatrix::sign(if neg { -1.0 } else { 1.0 }),
        vec![Scalar::from_rat(d)],
    )
}

/// 1D float map x -> c x + d.
pub fn map_1d_f64(c: f64, d: f64) -> Result<Similarity> {
    canonicalize(
        Scalar::from_f64(c.abs()),
        OrthoMatrix::sign(c.signum()),
        vec![Scalar::from_f64(d)],
    )
}

pub fn word_count(n_maps: usize, n: u32) -> u128 {
    (n_maps as u128).checked_pow(n).unwrap_or(u128::MAX)
}

#[allow(dead_code)]
fn scalar_to_f64(s: &Scalar) -> f64 {
    s.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn cantor() -> IFS {
        IFS::new(
            vec![
                map_1d(rat(1, 3), rat(0, 1)).unwrap(),
                map_1d(rat(1, 3), rat(2, 3)).unwrap(),
            ],
            ArithmeticMode::Exact,
        )
        .unwrap()
    }

    #[test]
    fn canonicalize_absorbs_sign() {
        let s = canonicalize(
            Scalar::from_rat(rat(-1, 2)),
            OrthoMatrix::identity(1),
            vec![Scalar::zero()],
        )
        .unwrap();
        assert_eq!(s.ratio, Scalar::from_rat(rat(1, 2)));
        assert_eq!(s.orthogonal.matrix().at(0, 0), -1.0);
        // action equality on a few points
        for x in [-2.0, -0.3, 0.0, 0.7, 5.0] {
            assert!((s.apply(&[x])[0] - (-0.5 * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn canonicalize_rejects_zero() {
        assert!(canonicalize(
            Scalar::zero(),
            OrthoMatrix::identity(1),
            vec![Scalar::zero()]
        )
        .is_err());
    }

    #[test]
    fn compose_cantor_word_12() {
        // h1(h2(x)) = (x/3 + 2/3)/3 = x/9 + 2/9
        let ifs = cantor();
        let w = Word::new(vec![1, 2], 2).unwrap();
        let c = ifs.compose(&w).unwrap();
        assert_eq!(c.ratio, Scalar::from_rat(rat(1, 9)));
        assert_eq!(c.translation[0], Scalar::from_rat(rat(2, 9)));
    }

    #[test]
    fn compose_all_ones_is_pure_scaling() {
        let ifs = cantor();
        for n in 1..=8 {
            let w = Word::new(vec![1; n], 2).unwrap();
            let c = ifs.compose(&w).unwrap();
            assert_eq!(c.ratio, Scalar::from_rat(rat(1, 3i64.pow(n as u32))));
            assert!(c.translation[0].is_zero());
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        // pseudo-random float IFS in 2D
        let mut rng = ChaosRng::new(7);
        let mut maps = Vec::new();
        for _ in 0..3 {
            let theta = rng.next_f64() * std::f64::consts::TAU;
            maps.push(Similarity {
                ratio: Scalar::from_f64(0.2 + 0.3 * rng.next_f64()),
                orthogonal: OrthoMatrix::rotation(theta),
                translation: vec![
                    Scalar::from_f64(rng.next_f64()),
                    Scalar::from_f64(rng.next_f64()),
                ],
            });
        }
        let ifs = IFS::new(maps, ArithmeticMode::Float).unwrap();
        let w = Word::new(vec![2, 1, 3, 3, 2], 3).unwrap();
        let composed = ifs.compose(&w).unwrap();
        for trial in 0..100 {
            let x = vec![rng.next_f64() * 4.0 - 2.0, rng.next_f64() * 4.0 - 2.0];
            let mut y = x.clone();
            for &s in w.0.iter().rev() {
                y = ifs.maps()[s as usize - 1].apply(&y);
            }
            let z = composed.apply(&x);
            assert!(
                (y[0] - z[0]).abs() < 1e-12 && (y[1] - z[1]).abs() < 1e-12,
                "trial {trial}: {y:?} vs {z:?}"
            );
        }
    }

    #[test]
    fn map_distance_cantor_words() {
        // d(h_{1^n}, h_{1^{n-1}2}) = 2/3^n
        let ifs = cantor();
        for n in 1..=10u32 {
            let i = Word::new(vec![1; n as usize], 2).unwrap();
            let mut j = vec![1; n as usize];
            j[n as usize - 1] = 2;
            let j = Word::new(j, 2).unwrap();
            let d = map_distance(&ifs.compose(&i).unwrap(), &ifs.compose(&j).unwrap()).unwrap();
            assert_eq!(d, Scalar::from_rat(rat(2, 3i64.pow(n))));
        }
    }

    #[test]
    fn map_distance_log_term() {
        let f = map_1d_f64(0.5, 0.0).unwrap();
        let g = map_1d_f64(0.25, 0.0).unwrap();
        let d = map_distance(&f, &g).unwrap().to_f64();
        assert!((d - 2.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn product_requires_common_ratio() {
        let i1 = cantor();
        let i2 = IFS::new(
            vec![
                map_1d(rat(1, 2), rat(0, 1)).unwrap(),
                map_1d(rat(1, 2), rat(1, 2)).unwrap(),
            ],
            ArithmeticMode::Exact,
        )
        .unwrap();
        assert!(matches!(product_ifs(&i1, &i2), Err(Error::NotSimilitude(_))));
        let p = product_ifs(&i1, &cantor()).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.dim(), 2);
        assert!(p.maps().iter().all(|m| m.ratio == Scalar::from_rat(rat(1, 3))));
    }

    #[test]
    fn attractor_points_cantor() {
        let ifs = cantor();
        let cloud = attractor_points(&ifs, 1).unwrap();
        let mut xs: Vec<f64> = cloud.points.iter().map(|p| p[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(xs, vec![0.0, 2.0 / 3.0]);
        assert!(cloud.resolution <= 1.0 / 3.0 * 2.0 + 1e-12);
        let deep = attractor_points(&ifs, 8).unwrap();
        assert_eq!(deep.points.len(), 256);
        assert!(deep.points.iter().all(|p| (0.0..=1.0).contains(&p[0])));
    }

    #[test]
    fn chaos_game_deterministic_and_bounded() {
        let w = WeightedIFS::uniform(cantor()).unwrap();
        let a = chaos_game(&w, 10_000, 42).unwrap();
        let b = chaos_game(&w, 10_000, 42).unwrap();
        assert_eq!(a.points, b.points);
        assert!(a.points.iter().all(|p| (0.0..=1.0).contains(&p[0])));
        let mean: f64 = a.points.iter().map(|p| p[0]).sum::<f64>() / a.points.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean = {mean}");
    }

    #[test]
    fn attractor_hull_cantor_and_exact() {
        let ifs = cantor();
        let h = attractor_hull(&ifs, 1e-12).unwrap();
        let (a, b) = h.interval_bounds();
        assert!(a.abs() < 1e-10 && (b - 1.0).abs() < 1e-10);
        let (ea, eb) = attractor_hull_exact_1d(&ifs).unwrap();
        assert_eq!(ea, rat(0, 1));
        assert_eq!(eb, rat(1, 1));
    }

    #[test]
    fn attractor_hull_degenerate_common_fixed_point() {
        let ifs = IFS::new(
            vec![
                map_1d(rat(1, 2), rat(0, 1)).unwrap(),
                map_1d(rat(1, 2), rat(0, 1)).unwrap(),
            ],
            ArithmeticMode::Exact,
        )
        .unwrap();
        let h = attractor_hull(&ifs, 1e-10).unwrap();
        let (a, b) = h.interval_bounds();
        assert!(b - a < 1e-9);
        assert!(a.abs() < 1e-9);
    }

    #[test]
    fn sierpinski_hull_is_unit_triangle() {
        let ifs = crate::corpus::sierpinski();
        let h = attractor_hull(&ifs, 1e-12).unwrap();
        let s3 = 3.0f64.sqrt() / 2.0;
        let triangle = Polytope {
            vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, s3]],
        };
        let d = polytope_hausdorff(&h, &triangle).unwrap();
        assert!(d < 1e-9, "hull off by {d}");
    }

    #[test]
    fn moran_closed_forms() {
        let ifs = cantor();
        let d = similarity_dimension(&ifs);
        assert!((d - 2.0f64.ln() / 3.0f64.ln()).abs() < 1e-10);
        // N maps of ratio 1/N -> dimension 1
        let ifs2 = IFS::new(
            vec![
                map_1d(rat(1, 4), rat(0, 1)).unwrap(),
                map_1d(rat(1, 4), rat(1, 4)).unwrap(),
                map_1d(rat(1, 4), rat(2, 4)).unwrap(),
                map_1d(rat(1, 4), rat(3, 4)).unwrap(),
            ],
            ArithmeticMode::Exact,
        )
        .unwrap();
        assert!((similarity_dimension(&ifs2) - 1.0).abs() < 1e-12);
        let sier = crate::corpus::sierpinski();
        assert!((similarity_dimension(&sier) - 3.0f64.ln() / 2.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn measure_dimension_formula() {
        let w = WeightedIFS::uniform(cantor()).unwrap();
        assert!(
            (measure_similarity_dimension(&w) - 2.0f64.ln() / 3.0f64.ln()).abs() < 1e-12
        );
        let w2 = WeightedIFS::new(
            cantor(),
            vec![Scalar::from_rat(rat(1, 3)), Scalar::from_rat(rat(2, 3))],
        )
        .unwrap();
        // independent evaluation: (-(1/3)log(1/3) - (2/3)log(2/3)) / log 3
        let p: [f64; 2] = [1.0 / 3.0, 2.0 / 3.0];
        let expect = -(p[0] * p[0].ln() + p[1] * p[1].ln()) / 3.0f64.ln();
        assert!((measure_similarity_dimension(&w2) - expect).abs() < 1e-12);
        assert!((measure_similarity_dimension(&w2) - 0.5794).abs() < 1e-3);
    }

    #[test]
    fn weights_must_be_positive_and_normalized() {
        assert!(WeightedIFS::new(
            cantor(),
            vec![Scalar::one(), Scalar::zero()]
        )
        .is_err());
        assert!(WeightedIFS::new(
            cantor(),
            vec![Scalar::from_f64(0.6), Scalar::from_f64(0.6)]
        )
        .is_err());
    }

    #[test]
    fn composition_concatenation_law() {
        let ifs = cantor();
        let w1 = Word::new(vec![1, 2], 2).unwrap();
        let w2 = Word::new(vec![2, 1, 2], 2).unwrap();
        let cat = Word::new(vec![1, 2, 2, 1, 2], 2).unwrap();
        let lhs = ifs.compose(&cat).unwrap();
        let rhs = ifs
            .compose(&w1)
            .unwrap()
            .compose_with(&ifs.compose(&w2).unwrap());
        assert_eq!(lhs.ratio, rhs.ratio);
        assert_eq!(lhs.translation, rhs.translation);
    }
}
