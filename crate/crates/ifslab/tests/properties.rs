//! Randomized invariants that back the exact-oracle suite: metric axioms,
//! algebraic identities of composition and convolution, and the
//! hull-image comparison bound on arbitrary small systems.

use proptest::prelude::*;

use ifslab::exact::{rat, Scalar};
use ifslab::geometry::{hausdorff_distance, PointCloud};
use ifslab::ifs::{attractor_hull, map_1d, map_distance, ArithmeticMode, Similarity, Word, IFS};
use ifslab::measure::{convolve, dl_distance, dyadic_histogram, DiscreteMeasure, Measure};
use ifslab::separation::{delta_n, delta_star_n};

fn cloud_strategy() -> impl Strategy<Value = PointCloud> {
    prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..12)
        .prop_map(|pts| PointCloud::exact(pts.into_iter().map(|(x, y)| vec![x, y]).collect()).unwrap())
}

fn similarity_strategy() -> impl Strategy<Value = Similarity> {
    ((1i64..=7), (-40i64..=40)).prop_map(|(num, d)| map_1d(rat(num, 8), rat(d, 8)).unwrap())
}

fn ifs_strategy() -> impl Strategy<Value = IFS> {
    prop::collection::vec(((1i64..=3), (-8i64..=8)), 2..=3).prop_map(|params| {
        let maps = params
            .iter()
            .map(|(num, d)| map_1d(rat(*num, 4), rat(*d, 4)).unwrap())
            .collect();
        IFS::new(maps, ArithmeticMode::Exact).unwrap()
    })
}

fn discrete_strategy() -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::btree_map(-64i64..=64, 1u64..=9, 1..6).prop_map(|m| {
        let total: u64 = m.values().sum();
        DiscreteMeasure::new(
            m.iter()
                .map(|(p, w)| {
                    (
                        vec![Scalar::from_rat(rat(*p, 32))],
                        Scalar::from_rat(rat(*w as i64, total as i64)),
                    )
                })
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_triangle(a in cloud_strategy(), b in cloud_strategy(), c in cloud_strategy()) {
        let ab = hausdorff_distance(&a, &b).unwrap();
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!((ab - hausdorff_distance(&b, &a).unwrap()).abs() <= 1e-15);
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn map_distance_metric(f in similarity_strategy(), g in similarity_strategy(), h in similarity_strategy()) {
        let fg = map_distance(&f, &g).unwrap().to_f64();
        let gf = map_distance(&g, &f).unwrap().to_f64();
        let gh = map_distance(&g, &h).unwrap().to_f64();
        let fh = map_distance(&f, &h).unwrap().to_f64();
        prop_assert!((fg - gf).abs() <= 1e-15);
        prop_assert_eq!(map_distance(&f, &f).unwrap().to_f64(), 0.0);
        prop_assert!(fh <= fg + gh + 1e-12);
    }

    #[test]
    fn compose_concatenates(ifs in ifs_strategy(), u in prop::collection::vec(0u32..2, 1..4), v in prop::collection::vec(0u32..2, 1..4)) {
        let n = ifs.len() as u32;
        let wu = Word(u.iter().map(|s| s % n + 1).collect());
        let wv = Word(v.iter().map(|s| s % n + 1).collect());
        let mut joined = wu.0.clone();
        joined.extend(&wv.0);
        let whole = ifs.compose(&Word(joined)).unwrap();
        let split = ifs.compose(&wu).unwrap().compose_with(&ifs.compose(&wv).unwrap());
        prop_assert!(map_distance(&whole, &split).unwrap().to_f64() <= 1e-12);
    }

    #[test]
    fn convolution_commutes(mu in discrete_strategy(), nu in discrete_strategy()) {
        let ab = convolve(&mu, &nu).unwrap();
        let ba = convolve(&nu, &mu).unwrap();
        prop_assert_eq!(dl_distance(&ab, &ba).unwrap(), 0.0);
        prop_assert_eq!(ab.atoms().len(), ba.atoms().len());
    }

    #[test]
    fn comparison_bound_holds(ifs in ifs_strategy()) {
        let hull = attractor_hull(&ifs, 1e-9).unwrap();
        let k_star = hull.max_vertex_norm().max(1.0);
        for n in 1..=3u32 {
            let (d, _) = delta_n(&ifs, n, 1_000_000).unwrap();
            let (ds, _) = delta_star_n(&ifs, n, &hull, 1_000_000).unwrap();
            prop_assert!(ds.to_f64() <= k_star * d.to_f64() + 1e-10);
        }
    }

    #[test]
    fn histogram_masses_normalize(mu in discrete_strategy(), k in 1u32..=12) {
        let h = dyadic_histogram(&Measure::Discrete(mu), k, 10_000_000).unwrap();
        prop_assert!((h.total_mass() - 1.0).abs() <= 1e-12);
        let coarse = dyadic_histogram(&Measure::Discrete(DiscreteMeasure::dirac(vec![Scalar::zero()])), k, 10_000_000).unwrap();
        prop_assert_eq!(coarse.cells.len(), 1);
    }
}
