//! Named example systems used throughout the tests and the CLI.

use crate::exact::{rat, Scalar};
use crate::geometry::OrthoMatrix;
use crate::ifs::{canonicalize, map_1d, ArithmeticMode, Similarity, IFS};

/// Real root of x^3 - x^2 - 2 = 0, to 50 decimal digits (bisection).
pub const GARSIA_GAMMA_DIGITS: &str =
    "1.6956207695598620574163671001175353426181793882085";
pub const GARSIA_POLYNOMIAL: &str = "x^3 - x^2 - 2";
pub const GARSIA_GAMMA: f64 = 1.6956207695598620574163671001175353426181793882085;

/// Middle-third Cantor system {x/3, x/3 + 2/3}, exact.
pub fn cantor() -> IFS {
    IFS::new(
        vec![
            map_1d(rat(1, 3), rat(0, 1)).unwrap(),
            map_1d(rat(1, 3), rat(2, 3)).unwrap(),
        ],
        ArithmeticMode::Exact,
    )
    .unwrap()
}

fn map_2d(c: f64, tx: f64, ty: f64) -> Similarity {
    canonicalize(
        Scalar::from_f64(c),
        OrthoMatrix::identity(2),
        vec![Scalar::from_f64(tx), Scalar::from_f64(ty)],
    )
    .unwrap()
}

/// Sierpinski gasket on the triangle (0,0), (1,0), (1/2, sqrt(3)/2).
pub fn sierpinski() -> IFS {
    let s3 = 3.0f64.sqrt();
    IFS::new(
        vec![
            map_2d(0.5, 0.0, 0.0),
            map_2d(0.5, 0.5, 0.0),
            map_2d(0.5, 0.25, s3 / 4.0),
        ],
        ArithmeticMode::Float,
    )
    .unwrap()
}

/// Garsia system {x/gamma + 1, x/gamma - 1}; gamma is algebraic, so float.
pub fn garsia() -> IFS {
    let c = 1.0 / GARSIA_GAMMA;
    IFS::new(
        vec![
            crate::ifs::map_1d_f64(c, 1.0).unwrap(),
            crate::ifs::map_1d_f64(c, -1.0).unwrap(),
        ],
        ArithmeticMode::Float,
    )
    .unwrap()
}

/// {x/4, x/4 + 9/16, x/4 + 3/4}: fails SSC at level 1 yet has a disjoint
/// common-suffix subfamily at level 2.
pub fn overlap_remark() -> IFS {
    IFS::new(
        vec![
            map_1d(rat(1, 4), rat(0, 1)).unwrap(),
            map_1d(rat(1, 4), rat(9, 16)).unwrap(),
            map_1d(rat(1, 4), rat(3, 4)).unwrap(),
        ],
        ArithmeticMode::Exact,
    )
    .unwrap()
}

/// {x/2, x/2 + 1/2, x/2 + 1}: two level-2 words coincide (21 and 13),
/// so Delta_2 = 0.
pub fn overlap_exact() -> IFS {
    IFS::new(
        vec![
            map_1d(rat(1, 2), rat(0, 1)).unwrap(),
            map_1d(rat(1, 2), rat(1, 2)).unwrap(),
            map_1d(rat(1, 2), rat(1, 1)).unwrap(),
        ],
        ArithmeticMode::Exact,
    )
    .unwrap()
}

/// {x/2, x/2 + 1/2}: attractor [0,1], invariant measure = Lebesgue on [0,1].
pub fn lebesgue_system() -> IFS {
    IFS::new(
        vec![
            map_1d(rat(1, 2), rat(0, 1)).unwrap(),
            map_1d(rat(1, 2), rat(1, 2)).unwrap(),
        ],
        ArithmeticMode::Exact,
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rat;
    use num_bigint::BigInt;
    use num_traits::{One, Signed, ToPrimitive};

    #[test]
    fn gamma_digits_match_bisection_oracle() {
        // independent oracle: rational bisection of x^3 - x^2 - 2 to 1e-52
        let p = |x: &Rat| x * x * x - x * x - Rat::from_integer(BigInt::from(2));
        let mut lo = Rat::one();
        let mut hi = Rat::from_integer(BigInt::from(2));
        for _ in 0..200 {
            let mid = (&lo + &hi) / Rat::from_integer(BigInt::from(2));
            if p(&mid).is_positive() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // compare digit string against the oracle: |gamma - digits| < 1e-49
        let digits: Rat = {
            let s = GARSIA_GAMMA_DIGITS;
            let (int_part, frac_part) = s.split_once('.').unwrap();
            let scale = BigInt::from(10).pow(frac_part.len() as u32);
            let num: BigInt =
                format!("{int_part}{frac_part}").parse().unwrap();
            Rat::new(num, scale)
        };
        let err = (digits - lo).abs();
        assert!(err < Rat::new(BigInt::one(), BigInt::from(10).pow(49)));
        assert!((GARSIA_GAMMA.powi(3) - GARSIA_GAMMA.powi(2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn garsia_ratio_value() {
        let c = garsia().maps()[0].ratio_f64();
        assert!((c - 0.5897545123014583).abs() < 1e-15);
    }

    #[test]
    fn overlap_exact_has_level2_coincidence() {
        use crate::ifs::Word;
        let ifs = overlap_exact();
        let a = ifs.compose(&Word::new(vec![2, 1], 3).unwrap()).unwrap();
        let b = ifs.compose(&Word::new(vec![1, 3], 3).unwrap()).unwrap();
        assert_eq!(a.translation, b.translation);
        assert_eq!(a.ratio, b.ratio);
    }

    #[test]
    fn remark_images_at_level_one_touch() {
        // h2([0,1]) = [9/16, 13/16], h3([0,1]) = [12/16, 16/16] overlap
        let ifs = overlap_remark();
        let h2 = &ifs.maps()[1];
        let h3 = &ifs.maps()[2];
        let b2 = h2.apply(&[1.0])[0];
        let a3 = h3.apply(&[0.0])[0];
        assert!(b2 > a3);
    }

    #[test]
    fn gamma_f64_round() {
        let parsed: f64 = GARSIA_GAMMA_DIGITS.parse().unwrap();
        assert_eq!(parsed, GARSIA_GAMMA);
        let _ = GARSIA_POLYNOMIAL;
        assert!(garsia().maps()[0].ratio_f64().to_f64().is_some());
    }
}
