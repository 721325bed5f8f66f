mod common;

use std::collections::HashSet;

use num::{BigInt, BigUint};
use proptest::prelude::*;

use noetherian_lab::campaign::gen;
use noetherian_lab::kernel::rational::{format_rational, parse_rational, rat, rational_sqrt, Rational};
use noetherian_lab::kernel::{Point, SampleUniverse, TaggedBox};
use noetherian_lab::poset::{self, PCondition};
use noetherian_lab::{io, lattice};

fn universe(seed: u64) -> SampleUniverse {
    gen::any_universe(&mut gen::rng(seed), 12, 30).unwrap().1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adjacency_is_symmetric_and_irreflexive(seed in any::<u64>()) {
        let u = universe(seed);
        for x in 0..u.len() {
            prop_assert!(!u.adjacent(x, x));
            for y in 0..u.len() {
                prop_assert_eq!(u.adjacent(x, y), u.adjacent(y, x));
                if x != y {
                    prop_assert_eq!(u.adjacent(x, y), u.instance().adjacent(u.point(x), u.point(y)).unwrap());
                }
            }
        }
    }

    #[test]
    fn gamma_intersection_and_antitone(seed in any::<u64>()) {
        let u = universe(seed);
        let mut rng = gen::rng(seed ^ 0x5eed);
        let a = gen::subset(&mut rng, &u, 0.4);
        let b = gen::subset(&mut rng, &u, 0.4);
        let ab = a.union(&b);
        prop_assert_eq!(u.common_neighborhood(&ab), u.common_neighborhood(&a).intersection(&u.common_neighborhood(&b)));
        prop_assert!(u.common_neighborhood(&ab).is_subset(&u.common_neighborhood(&a)));
        prop_assert_eq!(u.common_neighborhood(&a), common::gamma(&u, &a.to_vec()));
        prop_assert_eq!(u.common_neighborhood(&u.empty_set()), u.full_set());
    }

    #[test]
    fn closure_operator_and_heart(seed in any::<u64>()) {
        let u = universe(seed);
        let mut rng = gen::rng(seed ^ 0xc105e);
        let a = gen::subset(&mut rng, &u, 0.3);
        let b = gen::subset(&mut rng, &u, 0.3);
        let cl = lattice::good_closure(&u, &a);
        prop_assert!(a.is_subset(&cl));
        prop_assert_eq!(lattice::good_closure(&u, &cl).clone(), cl.clone());
        prop_assert!(cl.is_subset(&lattice::good_closure(&u, &a.union(&b))));
        prop_assert!(lattice::is_good(&u, &cl));
        let h = lattice::heart(&u, &a);
        prop_assert!(common::is_clique(&u, &h));
        prop_assert!(h.is_subset(&u.common_neighborhood(&a)));
        prop_assert_eq!(h, common::heart(&u, &a.to_vec()));
    }

    #[test]
    fn no_rational_unit_triangle_in_plane_samples(seed in any::<u64>()) {
        let u = gen::plane(&mut gen::rng(seed), 30).unwrap();
        let n = u.len();
        for x in 0..n {
            for y in x + 1..n {
                if !u.adjacent(x, y) {
                    continue;
                }
                for z in y + 1..n {
                    prop_assert!(!(u.adjacent(x, z) && u.adjacent(y, z)));
                }
            }
        }
    }

    /// The apex of an equilateral triangle on a rational unit segment sits
    /// √3/2 off the midpoint, never at a rational point.
    #[test]
    fn equilateral_apex_is_irrational(t in -50i64..50, s in 1i64..50) {
        let (t, s) = (rat(t, 1), rat(s, 1));
        let d = &t * &t + &s * &s;
        let v = ((&s * &s - &t * &t) / &d, (rat(2, 1) * &t * &s) / &d);
        let len = &v.0 * &v.0 + &v.1 * &v.1;
        prop_assert_eq!(len.clone(), rat(1, 1));
        prop_assert!(rational_sqrt(&(rat(3, 4) * len)).is_none());
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let q = Rational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn instances_round_trip(seed in any::<u64>()) {
        let u = universe(seed);
        let back = io::parse_instance(&io::instance_to_json(&u)).unwrap();
        prop_assert_eq!(back.points(), u.points());
        for x in 0..u.len() {
            prop_assert_eq!(back.closed_neighborhood(x), u.closed_neighborhood(x));
        }
    }

    #[test]
    fn lower_bounds_sit_below_their_family(seed in any::<u64>()) {
        let u = universe(seed);
        let mut rng = gen::rng(seed ^ 0xb0);
        let family: Vec<PCondition> = (0..3).map(|_| gen::p_condition(&mut rng, &u).unwrap()).collect();
        let maps: Vec<_> = family.iter().map(PCondition::assignment).collect();
        match poset::p_lower_bound(&u, &family, None) {
            Ok(q) => {
                prop_assert!(common::p_lower_bound_exists(&u, &maps));
                for p in &family {
                    prop_assert!(poset::p_leq(&u, &q, p));
                    prop_assert!(common::p_below(&u, q.assignment(), p.assignment()));
                }
            }
            Err(_) => prop_assert!(!common::p_lower_bound_exists(&u, &maps)),
        }
        for p in &family {
            prop_assert!(poset::p_leq(&u, p, p));
            for q in &family {
                prop_assert_eq!(poset::p_compatible(&u, p, q), poset::p_compatible(&u, q, p));
            }
        }
    }
}

#[test]
fn box_index_is_a_bijection_on_the_first_indices() {
    for dim in 1..=2 {
        let mut seen = HashSet::new();
        for i in 0u32..10_000 {
            let i = BigUint::from(i);
            let b = TaggedBox::from_index(dim, &i);
            assert_eq!(b.index(), i, "dim {dim}");
            let rebuilt = TaggedBox::new(b.tag(), b.level(), b.corners().to_vec()).unwrap();
            assert_eq!(rebuilt, b);
            assert!(seen.insert(b));
        }
    }
}

#[test]
fn boxes_contain_their_interior_points() {
    let b = TaggedBox::from_ints(0, 1, &[1]).unwrap();
    assert!(b.contains(&Point::new(vec![rat(3, 4)])));
    assert!(!b.contains(&Point::new(vec![rat(1, 2)])));
}
