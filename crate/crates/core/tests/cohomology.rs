use num::Signed;
use stackcoh::arith::{int, rat, Coeff};
use stackcoh::cech::cech_groupoid;
use stackcoh::fixtures;
use stackcoh::homalg::{invariant_factors, IntMatrix, Presentation};
use stackcoh::simplicial::Cover;
use stackcoh::{FormComplex, TotalCochain, DEFAULT_CELL_CAP};

/// Inhomogeneous bar complex of a group given by its multiplication table,
/// trivial coefficients. Cells of degree p are p-tuples encoded in base |G|.
fn bar_coboundary(table: &[Vec<usize>], p: usize) -> IntMatrix {
    let g = table.len();
    let decode = |mut x: usize, len: usize| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = x % g;
            x /= g;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * g + x);
    let mut triplets = Vec::new();
    for row in 0..g.pow(p as u32 + 1) {
        let t = decode(row, p + 1);
        triplets.push((row, encode(&t[1..]), 1));
        for i in 1..=p {
            let mut s = t[..i - 1].to_vec();
            s.push(table[t[i - 1]][t[i]]);
            s.extend_from_slice(&t[i + 1..]);
            triplets.push((row, encode(&s), if i % 2 == 0 { 1 } else { -1 }));
        }
        triplets.push((row, encode(&t[..p]), if (p + 1).is_multiple_of(2) { 1 } else { -1 }));
    }
    IntMatrix::from_triplets(g.pow(p as u32 + 1), g.pow(p as u32), triplets)
}

fn bar_cohomology(table: &[Vec<usize>], n: usize) -> Presentation {
    let g = table.len();
    let next = invariant_factors(&bar_coboundary(table, n)).unwrap();
    let prev = if n == 0 { Vec::new() } else { invariant_factors(&bar_coboundary(table, n - 1)).unwrap() };
    let rank = g.pow(n as u32) - next.len() - prev.len();
    Presentation::from_cyclic(rank, &prev).unwrap()
}

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

#[test]
fn cyclic_groups_match_bar_oracle() {
    for n in [2usize, 3, 4] {
        let c = FormComplex::of_groupoid(&fixtures::cyclic(n), 4, DEFAULT_CELL_CAP).unwrap();
        for k in 0..=4 {
            let got = c.cohomology(k, Coeff::Z).unwrap();
            assert_eq!(got, bar_cohomology(&cyclic_table(n), k), "Z/{n} degree {k}");
            let expected = match k {
                0 => Presentation::free(1),
                k if k % 2 == 1 => Presentation::zero(),
                _ => Presentation { rank: 0, torsion: vec![n as i128] },
            };
            assert_eq!(got, expected);
        }
    }
}

#[test]
fn trivial_groupoid() {
    let c = FormComplex::of_groupoid(&fixtures::trivial(), 3, DEFAULT_CELL_CAP).unwrap();
    assert_eq!(c.cohomology(0, Coeff::Z).unwrap(), Presentation::free(1));
    for k in 1..=3 {
        assert!(c.cohomology(k, Coeff::Z).unwrap().is_zero());
    }
    assert_eq!(c.homology(0).unwrap(), Presentation::free(1));
}

#[test]
fn finite_groups_rationally_acyclic_and_uct() {
    for (name, g) in fixtures::groupoids() {
        let c = FormComplex::of_groupoid(&g, 3, DEFAULT_CELL_CAP).unwrap();
        for k in 1..=3 {
            assert_eq!(c.cohomology(k, Coeff::Q).unwrap().rank, 0, "{name}");
        }
        for k in 0..=3 {
            let h = c.cohomology(k, Coeff::Z).unwrap();
            assert_eq!(h.rank, c.homology(k).unwrap().rank);
            if k > 0 {
                assert_eq!(h.torsion, c.homology(k - 1).unwrap().torsion, "{name} degree {k}");
            }
        }
    }
}

#[test]
fn schur_multiplier_of_v4() {
    let c = FormComplex::of_groupoid(&fixtures::klein_four(), 3, DEFAULT_CELL_CAP).unwrap();
    assert_eq!(c.cohomology(2, Coeff::QModZ).unwrap(), Presentation { rank: 0, torsion: vec![2] });
    assert_eq!(c.cohomology(2, Coeff::Z).unwrap(), Presentation { rank: 0, torsion: vec![2, 2] });
    let c2 = FormComplex::of_groupoid(&fixtures::cyclic(2), 3, DEFAULT_CELL_CAP).unwrap();
    assert!(c2.cohomology(2, Coeff::QModZ).unwrap().is_zero());
    assert_eq!(c2.cohomology(1, Coeff::QModZ).unwrap(), Presentation { rank: 0, torsion: vec![2] });
    assert_eq!(c2.cohomology(2, Coeff::ZMod(2)).unwrap(), Presentation { rank: 0, torsion: vec![2] });
}

#[test]
fn homology_of_z2() {
    let c = FormComplex::of_groupoid(&fixtures::cyclic(2), 3, DEFAULT_CELL_CAP).unwrap();
    assert_eq!(c.homology(1).unwrap(), Presentation { rank: 0, torsion: vec![2] });
}

#[test]
fn cech_models_match_simplicial_cohomology() {
    for k in [fixtures::triangle(), fixtures::tetrahedron()] {
        for cover in [Cover::by_facets(&k), Cover::by_closed_stars(&k), Cover::single(&k)] {
            let cg = cech_groupoid(&k, &cover).unwrap();
            let c = FormComplex::of_cech(&cg, 2, DEFAULT_CELL_CAP).unwrap();
            assert!(c.check_identities().unwrap().is_empty());
            for n in 0..=2 {
                assert_eq!(c.cohomology(n, Coeff::Z).unwrap(), k.integral_cohomology(n).unwrap());
                assert_eq!(c.cohomology(n, Coeff::Q).unwrap().rank, k.integral_cohomology(n).unwrap().rank);
            }
        }
    }
}

#[test]
fn coboundary_witnesses() {
    let cg = fixtures::triangle_cech();
    let c = FormComplex::of_cech(&cg, 2, DEFAULT_CELL_CAP).unwrap();
    let b = TotalCochain::new(0, Coeff::Q, (0..c.total_len(0)).map(|i| rat(i as i128, 3)).collect());
    let db = c.apply_delta(&b).unwrap();
    let w = c.is_coboundary(&db).unwrap().unwrap();
    assert_eq!(c.apply_delta(&w).unwrap(), db);
    assert!(c.is_coboundary(&c.zero_total(1, Coeff::Q)).unwrap().is_some());
    let gen = &c.free_cocycles(1).unwrap()[0];
    assert!(c.is_coboundary(gen).unwrap().is_none());
}

#[test]
fn z2_generator_is_not_a_coboundary() {
    let c = FormComplex::of_groupoid(&fixtures::cyclic(2), 3, DEFAULT_CELL_CAP).unwrap();
    let (gen, order) = c.torsion_generators(1).unwrap().remove(0);
    assert_eq!(order, 2);
    assert!(c.is_coboundary(&gen).unwrap().is_none());
    // its Q/Z lift: half of a Z-cocycle whose δ is 2·gen
    let doubled = gen.scale(int(2));
    assert!(c.is_coboundary(&doubled).unwrap().is_some());
}

#[test]
fn integrality_on_the_sphere() {
    let cg = fixtures::tetrahedron_cech();
    let c = FormComplex::of_cech(&cg, 2, DEFAULT_CELL_CAP).unwrap();
    let gen = c.free_cocycles(2).unwrap().remove(0).with_coeff(Coeff::Q);
    let fc = c.fundamental_cycle().unwrap();
    assert!(c.is_cycle(&fc).unwrap());
    assert_eq!(c.pair(&fc, &gen).unwrap().abs(), int(1));
    for (scale, integral) in [(int(1), true), (int(-1), true), (int(2), true), (rat(1, 2), false)] {
        let w = gen.scale(scale);
        let route1 = c.is_integer_class(&w).unwrap();
        let route2 = c.integrality_by_pairing(&w).unwrap();
        assert_eq!(route1.integral, integral);
        assert_eq!(route2.integral, integral);
        if integral {
            let z = route1.z.unwrap();
            let b = route1.b.unwrap();
            assert!(z.is_integral());
            assert_eq!(&z.with_coeff(Coeff::Q) + &c.apply_delta(&b).unwrap(), w);
        }
    }
    assert_eq!(c.integrality_by_pairing(&gen.scale(rat(1, 2))).unwrap().pairings[0].abs(), rat(1, 2));
}

#[test]
fn fundamental_cycles() {
    let tri = FormComplex::of_cech(&fixtures::triangle_cech(), 2, DEFAULT_CELL_CAP).unwrap();
    let fc = tri.fundamental_cycle().unwrap();
    let gen = tri.free_cocycles(1).unwrap().remove(0);
    assert_eq!(tri.pair(&fc, &gen).unwrap().abs(), int(1));

    let single = FormComplex::of_cech(&fixtures::single_piece(&fixtures::tetrahedron()), 2, DEFAULT_CELL_CAP).unwrap();
    let fc = single.fundamental_cycle().unwrap();
    // no correction cells: everything sits at p = 0
    let layout = single.total_layout(2);
    let (_, _, _, len0) = layout[0];
    assert!(fc.values[len0..].iter().all(|&v| v == 0));
    assert_eq!(fc.values[..len0].iter().filter(|&&v| v != 0).count(), 4);

    // boundaries pair to zero
    let bd = tri.boundary_of(1, &vec![1; tri.total_len(2)]).unwrap();
    assert_eq!(tri.pair(&bd, &gen).unwrap(), int(0));
}

#[test]
fn class_coordinates_detect_classes() {
    let c = FormComplex::of_groupoid(&fixtures::klein_four(), 3, DEFAULT_CELL_CAP).unwrap();
    let gens = c.torsion_generators(1).unwrap();
    assert_eq!(gens.len(), 2);
    let a = c.class_coordinates(&gens[0].0).unwrap();
    let b = c.class_coordinates(&gens[1].0).unwrap();
    assert_ne!(a, b);
    assert!(a.iter().any(|&x| x != 0));
    let zero = c.class_coordinates(&c.zero_total(2, Coeff::Z)).unwrap();
    assert!(zero.iter().all(|&x| x == 0));
}
