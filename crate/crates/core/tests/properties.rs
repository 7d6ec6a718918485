use proptest::prelude::*;
use stackcoh::arith::{int, rat, Coeff, Rational};
use stackcoh::bundles::*;
use stackcoh::gerbes::*;
use stackcoh::homalg::{invariant_factors, snf, solve, BigMatrix, IntMatrix};
use stackcoh::{fixtures, Cochain, FormComplex, TotalCochain, DEFAULT_CELL_CAP};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=12, 1usize..=12).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-9i128..=9, c), r).prop_map(|rows| IntMatrix::from_dense(&rows))
    })
}

fn sphere() -> FormComplex {
    FormComplex::of_cech(&fixtures::tetrahedron_cech(), 2, DEFAULT_CELL_CAP).unwrap()
}

fn rationals(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-20i128..=20, 1i128..=6), len).prop_map(|v| v.into_iter().map(|(a, b)| rat(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_factorization(a in matrix()) {
        let f = snf(&a).unwrap();
        prop_assert_eq!(f.u.mul(&BigMatrix::from_int(&a)).unwrap().mul(&f.v).unwrap(), f.s());
        prop_assert_eq!(f.u.mul(&f.u_inv).unwrap(), BigMatrix::identity(a.rows()));
        prop_assert_eq!(f.v_inv.mul(&f.v).unwrap(), BigMatrix::identity(a.cols()));
        for w in f.diag.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert_eq!(invariant_factors(&a).unwrap(), f.diagonal());
    }

    #[test]
    fn integer_solutions_are_found(a in matrix(), seed in proptest::collection::vec(-5i128..=5, 12)) {
        let x: Vec<i128> = seed[..a.cols()].to_vec();
        let y: Vec<Rational> = a.mul_vec_int(&x).unwrap().into_iter().map(int).collect();
        let f = snf(&a).unwrap();
        let sol = solve(&f, Coeff::Z, &y).unwrap().expect("a solution exists");
        prop_assert!(sol.iter().all(|v| v.is_integer()));
        prop_assert_eq!(a.mul_vec_rat(&sol), y);
    }

    #[test]
    fn delta_squares_to_zero(which in 0usize..6, values in rationals(200)) {
        let (_, g) = fixtures::groupoids().swap_remove(which);
        let fc = FormComplex::of_groupoid(&g, 3, DEFAULT_CELL_CAP).unwrap();
        for n in 0..2 {
            let len = fc.total_len(n);
            let c = TotalCochain::new(n, Coeff::Q, values.iter().cycle().take(len).cloned().collect());
            prop_assert!(fc.apply_delta(&fc.apply_delta(&c).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn double_complex_identities_on_the_sphere(values in rationals(64)) {
        let fc = sphere();
        for (p, k) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let c = Cochain::new(p, k, Coeff::Q, values.iter().cycle().take(fc.block_len(p, k)).cloned().collect());
            prop_assert!(fc.apply_d(&fc.apply_d(&c)).is_zero());
            prop_assert!(fc.apply_del(&fc.apply_del(&c)).is_zero());
            prop_assert_eq!(fc.apply_d(&fc.apply_del(&c)), fc.apply_del(&fc.apply_d(&c)));
        }
    }

    #[test]
    fn pseudo_curvature_class_ignores_the_connection(a in rationals(64), b in rationals(64)) {
        let fc = sphere();
        let vol = fc.free_cocycles(2).unwrap().remove(0);
        let (c, _) = realize_bundle(&fc, &without_top_component(&fc, &vol).unwrap()).unwrap();
        let conn = |v: &[Rational]| PseudoConnection::new(Cochain::new(0, 1, Coeff::Q, v.iter().cycle().take(fc.block_len(0, 1)).cloned().collect())).unwrap();
        let ka = pseudo_curvature(&fc, &c, &conn(&a)).unwrap().total(&fc).unwrap();
        let kb = pseudo_curvature(&fc, &c, &conn(&b)).unwrap().total(&fc).unwrap();
        prop_assert!(fc.cohomologous(&ka, &kb).unwrap());
        prop_assert!(fc.is_integer_class(&ka).unwrap().integral);
    }

    #[test]
    fn chern_class_ignores_the_lift(shift in proptest::collection::vec(-3i128..=3, 64), f in rationals(64)) {
        let fc = sphere();
        let vol = fc.free_cocycles(2).unwrap().remove(0);
        let (c, a) = realize_bundle(&fc, &without_top_component(&fc, &vol).unwrap()).unwrap();
        let base = chern_class(&fc, &c).unwrap();
        // a locally constant integer shift of the lift, then a gauge transformation
        let n = fc.cochain_from_fn(1, 0, Coeff::Q, |cell, _| int(shift[cell.iter().fold(7, |h, &i| h * 31 + i) % 64]));
        let shifted = BundleCocycle::new(&c.lift + &n).unwrap();
        prop_assert!(validate_bundle(&fc, &shifted).is_empty());
        prop_assert_eq!(&chern_class(&fc, &shifted).unwrap().coordinates, &base.coordinates);
        let g = Cochain::new(0, 0, Coeff::Q, f.iter().cycle().take(fc.block_len(0, 0)).cloned().collect());
        let (c2, a2) = gauge(&fc, (&c, &a), &g).unwrap();
        prop_assert_eq!(&chern_class(&fc, &c2).unwrap().coordinates, &base.coordinates);
        let k1 = pseudo_curvature(&fc, &c, &a).unwrap().total(&fc).unwrap();
        let k2 = pseudo_curvature(&fc, &c2, &a2).unwrap().total(&fc).unwrap();
        prop_assert!(fc.cohomologous(&k1, &k2).unwrap());
    }

    #[test]
    fn dd_class_ignores_the_lift(shift in proptest::collection::vec(-3i128..=3, 64), pick in 0usize..2) {
        let fc = FormComplex::of_groupoid(&fixtures::klein_four(), 3, DEFAULT_CELL_CAP).unwrap();
        let sigma = enumerate_extension_classes(&fc, 2).unwrap().swap_remove(pick);
        let n = Cochain::new(2, 0, Coeff::Q, shift.iter().cycle().take(fc.block_len(2, 0)).map(|&x| int(x)).collect());
        let shifted = ExtensionCocycle::new(&sigma.lift + &n).unwrap();
        prop_assert_eq!(dd_class(&fc, &shifted).unwrap().coordinates, dd_class(&fc, &sigma).unwrap().coordinates);
    }
}
