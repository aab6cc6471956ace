//! Metric substrate: vectors, orthogonal matrices, operator norms, convex
//! hulls and Hausdorff distances.
//!
//! Exact polytope machinery is limited to ambient dimension m <= 2; for
//! higher dimensions callers fall back to sampled point clouds carrying an
//! explicit resolution bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ORTHO_TOL: f64 = 1e-12;

/// A point in R^m.
pub type Point = Vec<f64>;

pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub m: usize,
    pub entries: Vec<f64>,
}

impl Matrix {
    pub fn new(m: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(Error::NonSquare {
                rows: entries.len() / m.max(1),
                cols: m,
            });
        }
        Ok(Matrix { m, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        for r in rows {
            if r.len() != m {
                return Err(Error::NonSquare { rows: m, cols: r.len() });
            }
        }
        Ok(Matrix {
            m,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(m: usize) -> Self {
        let mut entries = vec![0.0; m * m];
        for i in 0..m {
            entries[i * m + i] = 1.0;
        }
        Matrix { m, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.m + j]
    }

    pub fn transpose(&self) -> Matrix {
        let m = self.m;
        let mut t = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                t[j * m + i] = self.entries[i * m + j];
            }
        }
        Matrix { m, entries: t }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        let m = self.m;
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                let a = self.entries[i * m + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..m {
                    out[i * m + j] += a * other.entries[k * m + j];
                }
            }
        }
        Ok(Matrix { m, entries: out })
    }

    pub fn apply(&self, v: &[f64]) -> Point {
        let m = self.m;
        (0..m)
            .map(|i| (0..m).map(|j| self.entries[i * m + j] * v[j]).sum())
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        Ok(Matrix {
            m: self.m,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            m: self.m,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }
}

/// Largest singular value via power iteration on M^T M.
///
/// Largest singular value via cyclic Jacobi sweeps on the Gram matrix.
/// Jacobi handles clustered eigenvalues (where power iteration stalls)
/// and reaches machine precision in a handful of sweeps at these sizes.
pub fn operator_norm(mat: &Matrix) -> f64 {
    let m = mat.m;
    if m == 0 {
        return 0.0;
    }
    if m == 1 {
        return mat.entries[0].abs();
    }
    let gram = mat.transpose().matmul(mat).expect("square");
    let mut g: Vec<f64> = gram.entries.clone();
    let scale = g.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..m {
            for q in (p + 1)..m {
                off = off.max(g[p * m + q].abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let gpq = g[p * m + q];
                if gpq.abs() <= 1e-18 * scale {
                    continue;
                }
                let tau = (g[q * m + q] - g[p * m + p]) / (2.0 * gpq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let gkp = g[k * m + p];
                    let gkq = g[k * m + q];
                    g[k * m + p] = c * gkp - s * gkq;
                    g[k * m + q] = s * gkp + c * gkq;
                }
                for k in 0..m {
                    let gpk = g[p * m + k];
                    let gqk = g[q * m + k];
                    g[p * m + k] = c * gpk - s * gqk;
                    g[q * m + k] = s * gpk + c * gqk;
                }
            }
        }
    }
    let lambda = (0..m).fold(0.0f64, |acc, i| acc.max(g[i * m + i]));
    lambda.max(0.0).sqrt()
}

/// Orthogonal matrix, validated at construction (M^T M = I within 1e-12).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoMatrix(Matrix);

impl OrthoMatrix {
    pub fn new(mat: Matrix) -> Result<Self> {
        let gram = mat.transpose().matmul(&mat)?;
        let id = Matrix::identity(mat.m);
        let defect = gram
            .entries
            .iter()
            .zip(&id.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if defect > ORTHO_TOL {
            return Err(Error::NotOrthogonal { defect });
        }
        Ok(OrthoMatrix(mat))
    }

    pub fn identity(m: usize) -> Self {
        OrthoMatrix(Matrix::identity(m))
    }

    /// 1x1 orthogonal matrix: just a sign.
    pub fn sign(s: f64) -> Self {
        OrthoMatrix(Matrix {
            m: 1,
            entries: vec![s.signum()],
        })
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        OrthoMatrix(Matrix {
            m: 2,
            entries: vec![c, -s, s, c],
        })
    }

    pub fn dim(&self) -> usize {
        self.0.m
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn apply(&self, v: &[f64]) -> Point {
        self.0.apply(v)
    }

    pub fn compose(&self, other: &OrthoMatrix) -> Result<OrthoMatrix> {
        // product of orthogonal matrices is orthogonal; skip re-validation
        Ok(OrthoMatrix(self.0.matmul(&other.0)?))
    }

    pub fn negate(&self) -> OrthoMatrix {
        OrthoMatrix(self.0.scale(-1.0))
    }
}

/// Block-diagonal assembly of two orthogonal matrices.
pub fn block_diag(a: &OrthoMatrix, b: &OrthoMatrix) -> OrthoMatrix {
    let (k, m) = (a.dim(), b.dim());
    let n = k + m;
    let mut entries = vec![0.0; n * n];
    for i in 0..k {
        for j in 0..k {
            entries[i * n + j] = a.matrix().at(i, j);
        }
    }
    for i in 0..m {
        for j in 0..m {
            entries[(k + i) * n + (k + j)] = b.matrix().at(i, j);
        }
    }
    OrthoMatrix(Matrix { m: n, entries })
}

/// Finite point set standing in for a compact set, with a guaranteed
/// Hausdorff error `resolution` to the ideal set it approximates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<Point>,
    pub resolution: f64,
}

impl PointCloud {
    pub fn exact(points: Vec<Point>) -> Result<Self> {
        Self::with_resolution(points, 0.0)
    }

    pub fn with_resolution(points: Vec<Point>, resolution: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let m = points[0].len();
        if points.iter().any(|p| p.len() != m) {
            return Err(Error::DimensionMismatch(m, 0));
        }
        Ok(PointCloud { points, resolution })
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

/// Exact Hausdorff distance between finite point sets (brute force).
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(directed_hausdorff(&a.points, &b.points).max(directed_hausdorff(&b.points, &a.points)))
}

fn directed_hausdorff(from: &[Point], to: &[Point]) -> f64 {
    let mut sup = 0.0f64;
    for p in from {
        let mut best = f64::INFINITY;
        for q in to {
            let d = dist2(p, q);
            if d < best {
                best = d;
                if best <= sup {
                    break; // cannot raise the supremum
                }
            }
        }
        sup = sup.max(best);
    }
    sup
}

/// Convex polytope: an interval in R^1, a CCW strictly convex polygon in R^2
/// (possibly degenerate: a point or a segment).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    pub vertices: Vec<Point>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn interval(a: f64, b: f64) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Polytope {
            vertices: vec![vec![a], vec![b]],
        }
    }

    pub fn interval_bounds(&self) -> (f64, f64) {
        debug_assert_eq!(self.dim(), 1);
        let a = self.vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        let b = self.vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
        (a, b)
    }

    /// Max Euclidean norm over vertices (the k constant of the comparison
    /// inequality between the two separation sequences).
    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices.iter().map(|v| norm2(v)).fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                d = d.max(dist2(p, q));
            }
        }
        d
    }

    /// Image under x -> r * O x + t.
    pub fn transform(&self, r: f64, o: &OrthoMatrix, t: &[f64]) -> Polytope {
        let mut verts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| {
                let ov = o.apply(v);
                ov.iter().zip(t).map(|(x, ti)| r * x + ti).collect()
            })
            .collect();
        // a reflection flips orientation; restore CCW order in 2D
        if self.dim() == 2 && verts.len() >= 3 && polygon_signed_area(&verts) < 0.0 {
            verts.reverse();
        }
        Polytope { vertices: verts }
    }
}

fn polygon_signed_area(verts: &[Point]) -> f64 {
    let n = verts.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = &verts[i];
        let b = &verts[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    s / 2.0
}

/// Convex hull of a point cloud; m in {1, 2} only.
pub fn convex_hull(cloud: &PointCloud) -> Result<Polytope> {
    match cloud.dim() {
        1 => {
            let xs: Vec<f64> = cloud.points.iter().map(|p| p[0]).collect();
            let a = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let b = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            Ok(Polytope::interval(a, b))
        }
        2 => Ok(Polytope {
            vertices: hull_2d(&cloud.points),
        }),
        m => Err(Error::UnsupportedDimension(m)),
    }
}

/// Andrew's monotone chain; collinear points dropped, CCW output.
fn hull_2d(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() <= 2 {
        return pts.into_iter().map(|(x, y)| vec![x, y]).collect();
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| -> f64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // all points coincide or are collinear duplicates
        let (a, b) = (pts[0], pts[pts.len() - 1]);
        return if a == b {
            vec![vec![a.0, a.1]]
        } else {
            vec![vec![a.0, a.1], vec![b.0, b.1]]
        };
    }
    lower.into_iter().map(|(x, y)| vec![x, y]).collect()
}

fn point_segment_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let (wx, wy) = (p.0 - a.0, p.1 - a.1);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0)
    };
    let (dx, dy) = (p.0 - (a.0 + t * vx), p.1 - (a.1 + t * vy));
    (dx * dx + dy * dy).sqrt()
}

fn point_in_polygon(p: (f64, f64), verts: &[Point]) -> bool {
    // CCW convex polygon: inside iff on the left of (or on) every edge
    let n = verts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = &verts[i];
        let b = &verts[(i + 1) % n];
        let cross = (b[0] - a[0]) * (p.1 - a[1]) - (b[1] - a[1]) * (p.0 - a[0]);
        if cross < 0.0 {
            return false;
        }
    }
    true
}

/// Distance from a point to a convex polytope (0 inside).
pub fn point_polytope_distance(p: &[f64], q: &Polytope) -> f64 {
    match q.dim() {
        1 => {
            let (a, b) = q.interval_bounds();
            let x = p[0];
            if x < a {
                a - x
            } else if x > b {
                x - b
            } else {
                0.0
            }
        }
        2 => {
            let pt = (p[0], p[1]);
            let verts = &q.vertices;
            if verts.len() == 1 {
                return dist2(p, &verts[0]);
            }
            if point_in_polygon(pt, verts) {
                return 0.0;
            }
            let n = verts.len();
            let edges = if n == 2 { 1 } else { n };
            (0..edges)
                .map(|i| {
                    let a = (verts[i][0], verts[i][1]);
                    let b = (verts[(i + 1) % n][0], verts[(i + 1) % n][1]);
                    point_segment_dist(pt, a, b)
                })
                .fold(f64::INFINITY, f64::min)
        }
        _ => unreachable!("polytopes only exist for m <= 2"),
    }
}

/// Exact Hausdorff distance between convex polytopes.
///
/// For convex bodies the directed supremum of the distance function is
/// attained at a vertex, so the max over vertices of the point-to-body
/// distance is exact.
pub fn polytope_hausdorff(p: &Polytope, q: &Polytope) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    if p.dim() > 2 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    if p.dim() == 1 {
        let (a1, b1) = p.interval_bounds();
        let (a2, b2) = q.interval_bounds();
        return Ok((a1 - a2).abs().max((b1 - b2).abs()));
    }
    let d1 = p
        .vertices
        .iter()
        .map(|v| point_polytope_distance(v, q))
        .fold(0.0f64, f64::max);
    let d2 = q
        .vertices
        .iter()
        .map(|v| point_polytope_distance(v, p))
        .fold(0.0f64, f64::max);
    Ok(d1.max(d2))
}

/// Lower bound on the Hausdorff distance from axis-aligned bounding boxes
/// (projection onto each axis is 1-Lipschitz). Used to prune pair scans.
pub fn bbox_hausdorff_lower_bound(p: &Polytope, q: &Polytope) -> f64 {
    let m = p.dim();
    let mut bound = 0.0f64;
    for axis in 0..m {
        let (pmin, pmax) = axis_bounds(p, axis);
        let (qmin, qmax) = axis_bounds(q, axis);
        bound = bound.max((pmin - qmin).abs()).max((pmax - qmax).abs());
    }
    bound
}

fn axis_bounds(p: &Polytope, axis: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in &p.vertices {
        lo = lo.min(v[axis]);
        hi = hi.max(v[axis]);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_norm_identity_is_one() {
        assert!((operator_norm(&Matrix::identity(2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_diagonal() {
        // oracle: max |eigenvalue| of M^T M by characteristic polynomial;
        // for diag(3,4), M^T M = diag(9,16), largest root 16, sqrt = 4
        let m = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        assert!((operator_norm(&m) - 4.0).abs() < 1e-10);
    }

    #[test]
    fn operator_norm_of_orthogonal_block_diag_is_one() {
        let a = OrthoMatrix::rotation(0.7);
        let b = OrthoMatrix::sign(-1.0);
        let bd = block_diag(&a, &b);
        assert!((operator_norm(bd.matrix()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn operator_norm_transpose_invariant() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert!((operator_norm(&m) - operator_norm(&m.transpose())).abs() < 1e-10);
    }

    #[test]
    fn block_diag_places_blocks() {
        let r = OrthoMatrix::rotation(0.3);
        let one = OrthoMatrix::identity(1);
        let bd = block_diag(&r, &one);
        assert_eq!(bd.dim(), 3);
        assert_eq!(bd.matrix().at(2, 2), 1.0);
        assert_eq!(bd.matrix().at(0, 2), 0.0);
        assert!((bd.matrix().at(0, 0) - 0.3f64.cos()).abs() < 1e-15);
        // (I1, I1) -> I2
        let id = block_diag(&one, &one);
        assert_eq!(id.matrix(), &Matrix::identity(2));
    }

    #[test]
    fn orthogonality_checked_at_construction() {
        let bad = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.1]]).unwrap();
        assert!(OrthoMatrix::new(bad).is_err());
    }

    #[test]
    fn hausdorff_identical_sets() {
        let a = PointCloud::exact(vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_cantor_level_one_pieces() {
        // dense samples of [0,1/3] vs [2/3,1] -> 2/3
        let n = 1000;
        let a = PointCloud::exact((0..=n).map(|i| vec![i as f64 / (3 * n) as f64]).collect())
            .unwrap();
        let b = PointCloud::exact(
            (0..=n)
                .map(|i| vec![2.0 / 3.0 + i as f64 / (3 * n) as f64])
                .collect(),
        )
        .unwrap();
        assert!((hausdorff_distance(&a, &b).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_asymmetric_small_case() {
        // oracle: direct max-min over the two points
        let a = PointCloud::exact(vec![vec![0.0]]).unwrap();
        let b = PointCloud::exact(vec![vec![3.0], vec![4.0]]).unwrap();
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 4.0);
    }

    #[test]
    fn hull_1d() {
        let c = PointCloud::exact(vec![vec![0.0], vec![0.3], vec![1.0]]).unwrap();
        let h = convex_hull(&c).unwrap();
        assert_eq!(h.interval_bounds(), (0.0, 1.0));
    }

    #[test]
    fn hull_square_with_center() {
        let c = PointCloud::exact(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ])
        .unwrap();
        let h = convex_hull(&c).unwrap();
        assert_eq!(h.vertices.len(), 4);
        // idempotent
        let h2 = convex_hull(&PointCloud::exact(h.vertices.clone()).unwrap()).unwrap();
        assert_eq!(h2.vertices.len(), 4);
    }

    #[test]
    fn hull_rejects_3d() {
        let c = PointCloud::exact(vec![vec![0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(convex_hull(&c), Err(Error::UnsupportedDimension(3))));
    }

    #[test]
    fn interval_hausdorff_cantor_pieces() {
        let p = Polytope::interval(0.0, 1.0 / 3.0);
        let q = Polytope::interval(2.0 / 3.0, 1.0);
        assert!((polytope_hausdorff(&p, &q).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(polytope_hausdorff(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn triangle_hausdorff_shared_vertex() {
        // level-1 Sierpinski sub-triangles sharing (1/2, 0) -> 1/2
        let s3 = 3.0f64.sqrt();
        let t1 = Polytope {
            vertices: vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![0.25, s3 / 4.0]],
        };
        let t2 = Polytope {
            vertices: vec![vec![0.5, 0.0], vec![1.0, 0.0], vec![0.75, s3 / 4.0]],
        };
        assert!((polytope_hausdorff(&t1, &t2).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn point_distance_inside_polygon_is_zero() {
        let sq = Polytope {
            vertices: vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
        };
        assert_eq!(point_polytope_distance(&[0.5, 0.5], &sq), 0.0);
        assert!((point_polytope_distance(&[2.0, 0.5], &sq) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polytope_vs_sampled_boundary_cross_oracle() {
        // compare against a dense boundary sampling of both polygons
        let tri = Polytope {
            vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.8]],
        };
        let tri2 = Polytope {
            vertices: vec![vec![0.2, 0.1], vec![1.3, 0.1], vec![0.7, 0.9]],
        };
        let sample = |p: &Polytope| -> PointCloud {
            let mut pts = Vec::new();
            let n = p.vertices.len();
            for i in 0..n {
                let a = &p.vertices[i];
                let b = &p.vertices[(i + 1) % n];
                for t in 0..1000 {
                    let t = t as f64 / 1000.0;
                    pts.push(vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                }
            }
            PointCloud::exact(pts).unwrap()
        };
        let exact = polytope_hausdorff(&tri, &tri2).unwrap();
        let sampled = hausdorff_distance(&sample(&tri), &sample(&tri2)).unwrap();
        // boundary samples suffice: Hausdorff between convex bodies with
        // nonoverlapping interiors is attained on boundaries here
        assert!((exact - sampled).abs() < 2.0 * 2.0 / 1000.0);
    }
}
