//! Exact CDF evaluation for 1D rational self-similar measures with
//! positive-orientation maps.
//!
//! F(x) = mu((-inf, x)) satisfies F(x) = sum_i p_i F((x - d_i)/c_i) with
//! F clipped to 0 left of the hull and 1 right of it. The recursion can
//! revisit an argument (e.g. F(1/4) for the Cantor measure); such cycles
//! are solved by carrying values as affine expressions in the unknowns on
//! the recursion stack: a self-coefficient b < 1 yields F = a / (1 - b).

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::SelfSimilarMeasure;
use crate::exact::Rat;
use crate::ifs::attractor_hull_exact_1d;

const NODE_BUDGET: usize = 200_000;

/// Affine expression constant + sum coeff_i * X_i over stack indices.
struct Expr {
    constant: Rat,
    terms: Vec<(usize, Rat)>,
}

impl Expr {
    fn constant(c: Rat) -> Self {
        Expr {
            constant: c,
            terms: Vec::new(),
        }
    }

    fn var(i: usize) -> Self {
        Expr {
            constant: Rat::zero(),
            terms: vec![(i, Rat::one())],
        }
    }

    fn add_scaled(&mut self, p: &Rat, other: Expr) {
        self.constant += p * other.constant;
        for (i, c) in other.terms {
            match self.terms.iter_mut().find(|(j, _)| *j == i) {
                Some((_, existing)) => *existing += p * c,
                None => self.terms.push((i, p * c)),
            }
        }
    }
}

pub struct Cdf1D {
    /// (c, d, p) per map, ratios positive.
    maps: Vec<(Rat, Rat, Rat)>,
    hull: (Rat, Rat),
    memo: HashMap<Rat, Rat>,
    nodes: usize,
}

impl Cdf1D {
    /// None when the measure is outside this engine's scope (non-1D,
    /// irrational data, orientation-reversing maps, or a common fixed
    /// point making the measure atomic).
    pub fn new(mu: &SelfSimilarMeasure) -> Option<Self> {
        if mu.dim() != 1 {
            return None;
        }
        let hull = attractor_hull_exact_1d(&mu.wifs.ifs)?;
        if hull.0 == hull.1 {
            return None; // Dirac: has an atom, handled upstream
        }
        let mut maps = Vec::new();
        for (h, w) in mu.wifs.ifs.maps().iter().zip(mu.wifs.weights()) {
            if h.orthogonal.matrix().at(0, 0) < 0.0 {
                return None;
            }
            let c = h.ratio.as_rat()?.clone();
            let d = h.translation[0].as_rat()?.clone();
            let p = w.as_rat()?.clone();
            maps.push((c, d, p));
        }
        Some(Cdf1D {
            maps,
            hull,
            memo: HashMap::new(),
            nodes: 0,
        })
    }

    pub fn hull(&self) -> &(Rat, Rat) {
        &self.hull
    }

    /// F(x) = mu((-inf, x)); None when the argument set blows past the
    /// node budget (denominator-growing systems).
    pub fn eval(&mut self, x: &Rat) -> Option<Rat> {
        let mut stack = Vec::new();
        let expr = self.eval_expr(x.clone(), &mut stack)?;
        debug_assert!(expr.terms.is_empty());
        if expr.terms.is_empty() {
            Some(expr.constant)
        } else {
            None
        }
    }

    fn eval_expr(&mut self, x: Rat, stack: &mut Vec<Rat>) -> Option<Expr> {
        if x <= self.hull.0 {
            return Some(Expr::constant(Rat::zero()));
        }
        if x > self.hull.1 {
            return Some(Expr::constant(Rat::one()));
        }
        if let Some(v) = self.memo.get(&x) {
            return Some(Expr::constant(v.clone()));
        }
        if let Some(i) = stack.iter().position(|y| y == &x) {
            return Some(Expr::var(i));
        }
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return None;
        }
        let idx = stack.len();
        stack.push(x.clone());
        let mut expr = Expr::constant(Rat::zero());
        for (c, d, p) in self.maps.clone() {
            let arg = (x.clone() - d) / c;
            let sub = match self.eval_expr(arg, stack) {
                Some(e) => e,
                None => {
                    stack.pop();
                    return None;
                }
            };
            expr.add_scaled(&p, sub);
        }
        stack.pop();
        // solve the self-reference: F(x) = a + ... + b F(x), b < 1
        if let Some(pos) = expr.terms.iter().position(|(i, _)| *i == idx) {
            let (_, b) = expr.terms.swap_remove(pos);
            let denom = Rat::one() - b;
            if denom.is_zero() {
                return None;
            }
            expr.constant /= denom.clone();
            for (_, c) in expr.terms.iter_mut() {
                *c /= denom.clone();
            }
        }
        if expr.terms.is_empty() {
            self.memo.insert(x, expr.constant.clone());
        }
        Some(expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::measure::{cantor_measure, lebesgue_surrogate};

    #[test]
    fn lebesgue_cdf_is_identity() {
        let mut cdf = Cdf1D::new(&lebesgue_surrogate()).unwrap();
        for (n, d) in [(0i64, 1i64), (1, 2), (1, 4), (3, 8), (5, 8), (1, 1)] {
            assert_eq!(cdf.eval(&rat(n, d)).unwrap(), rat(n, d).max(rat(0, 1)));
        }
        assert_eq!(cdf.eval(&rat(3, 2)).unwrap(), rat(1, 1));
        assert_eq!(cdf.eval(&rat(-1, 2)).unwrap(), rat(0, 1));
    }

    #[test]
    fn cantor_cdf_known_values() {
        // the devil's staircase: F(1/3) = F on the whole gap = 1/2;
        // F(1/4) = 1/3 (cycle-solved), F(3/4) = 2/3, F(1/9) = 1/4
        let mut cdf = Cdf1D::new(&cantor_measure()).unwrap();
        assert_eq!(cdf.eval(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(cdf.eval(&rat(2, 3)).unwrap(), rat(1, 2));
        assert_eq!(cdf.eval(&rat(1, 4)).unwrap(), rat(1, 3));
        assert_eq!(cdf.eval(&rat(3, 4)).unwrap(), rat(2, 3));
        assert_eq!(cdf.eval(&rat(1, 9)).unwrap(), rat(1, 4));
        assert_eq!(cdf.eval(&rat(1, 1)).unwrap(), rat(2, 3) + rat(1, 3));
    }

    #[test]
    fn cdf_monotone_on_grid() {
        let mut cdf = Cdf1D::new(&cantor_measure()).unwrap();
        let mut prev = rat(-1, 1);
        let mut prev_val = rat(0, 1);
        for j in 0..=64i64 {
            let x = rat(j, 64);
            let v = cdf.eval(&x).unwrap();
            assert!(v >= prev_val, "F not monotone at {prev} -> {x}");
            prev = x;
            prev_val = v;
        }
        assert_eq!(prev_val, rat(1, 1));
    }

    #[test]
    fn rejects_out_of_scope_measures() {
        use crate::exact::Scalar;
        use crate::ifs::{canonicalize, ArithmeticMode, IFS, WeightedIFS};
        use crate::geometry::OrthoMatrix;
        // orientation-reversing map
        let maps = vec![
            canonicalize(
                Scalar::from_rat(rat(-1, 3)),
                OrthoMatrix::identity(1),
                vec![Scalar::zero()],
            )
            .unwrap(),
            canonicalize(
                Scalar::from_rat(rat(1, 3)),
                OrthoMatrix::identity(1),
                vec![Scalar::from_rat(rat(2, 3))],
            )
            .unwrap(),
        ];
        let ifs = IFS::new(maps, ArithmeticMode::Exact).unwrap();
        let mu = SelfSimilarMeasure::new(WeightedIFS::uniform(ifs).unwrap()).unwrap();
        assert!(Cdf1D::new(&mu).is_none());
    }
}
