//! Library results against brute-force oracles that only use permutation
//! composition: closure by breadth-first search, conjugacy classes by direct
//! conjugation, and derived subgroups by commutator closure.

use std::collections::{BTreeSet, HashSet, VecDeque};

use acd_core::catalog;
use acd_core::metrics::{self, Analysis};
use acd_core::subgroup::{derived_subgroup, fitting_subgroup, solvable_radical, SubgroupHandle};
use acd_core::{character_table, conjugacy_classes, PermGroup, Permutation};
use proptest::prelude::*;

fn closure(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = x.mul(s);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn class_sizes(elements: &[Permutation]) -> Vec<usize> {
    let mut done: HashSet<Permutation> = HashSet::new();
    let mut sizes = Vec::new();
    for x in elements {
        if done.contains(x) {
            continue;
        }
        let class: HashSet<Permutation> = elements.iter().map(|g| g.inverse().mul(x).mul(g)).collect();
        sizes.push(class.len());
        done.extend(class);
    }
    sizes.sort_unstable();
    sizes
}

fn commutator_subgroup(degree: usize, elements: &[Permutation]) -> usize {
    let comms: BTreeSet<Vec<u32>> = elements
        .iter()
        .flat_map(|a| elements.iter().map(move |b| a.inverse().mul(&b.inverse()).mul(a).mul(b).images().to_vec()))
        .collect();
    let gens: Vec<Permutation> = comms.into_iter().map(|v| Permutation::from_images(v).unwrap()).collect();
    closure(degree, &gens).len()
}

fn group_of(degree: usize, gens: &[Permutation]) -> PermGroup {
    PermGroup::from_generators(degree, gens.to_vec(), 1_000_000).unwrap()
}

#[test]
fn closure_of_five_cycle_and_three_cycle() {
    let gens = vec![
        Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
        Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
    ];
    assert_eq!(closure(5, &gens).len(), 60);
    assert_eq!(group_of(5, &gens).order(), 60);
}

#[test]
fn catalog_groups_against_oracles() {
    let groups = [
        catalog::symmetric(4).unwrap(),
        catalog::alternating(5).unwrap(),
        catalog::dihedral(6).unwrap(),
        catalog::quaternion().unwrap(),
        catalog::frobenius_agl1(7).unwrap(),
        catalog::affine(13, 3).unwrap(),
        catalog::wreath_imprimitive(&catalog::cyclic(2).unwrap(), 3).unwrap(),
        catalog::direct_product(&catalog::symmetric(3).unwrap(), &catalog::frobenius_agl1(5).unwrap()).unwrap(),
        catalog::psl2(7).unwrap(),
    ];
    for g in groups {
        let elements = closure(g.degree(), g.generators());
        assert_eq!(elements.len(), g.order());
        let classes = conjugacy_classes(&g);
        let mut sizes = classes.sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, class_sizes(&elements));
        let derived = derived_subgroup(&g, &SubgroupHandle::whole(&g));
        assert_eq!(derived.order(), commutator_subgroup(g.degree(), &elements));
        let t = character_table(&g, &classes).unwrap();
        assert_eq!(t.num_linear(), g.order() / derived.order());
    }
}

#[test]
fn characteristic_subgroups_from_the_catalog() {
    let s3f5 = catalog::direct_product(&catalog::symmetric(3).unwrap(), &catalog::frobenius_agl1(5).unwrap()).unwrap();
    let c = conjugacy_classes(&s3f5);
    assert_eq!(fitting_subgroup(&s3f5, &c).order(), 15);
    let a5c2 = catalog::direct_product(&catalog::alternating(5).unwrap(), &catalog::cyclic(2).unwrap()).unwrap();
    let c = conjugacy_classes(&a5c2);
    assert_eq!(solvable_radical(&a5c2, &c).order(), 2);
    assert_eq!(fitting_subgroup(&a5c2, &c).order(), 2);
}

#[test]
fn worked_examples_on_tables() {
    // numbers the two examples state, computed from the library directly
    let w = catalog::wreath_imprimitive(&catalog::symmetric(4).unwrap(), 3).unwrap();
    assert_eq!(w.order(), 82944);
    assert_eq!(w.degree(), 12);
    let a = Analysis::new("S4 wr S3", w).unwrap();
    assert_eq!(a.table.b(), 108);
    assert_eq!(a.fitting_index(), 1296);
    let gluck = metrics::check_gluck(&a).unwrap();
    assert_eq!(gluck.verdict, metrics::Verdict::Holds);
    let conj = metrics::check_conj_c(&a, &metrics::Exponent::two(), false).unwrap();
    assert_eq!(conj.verdict, metrics::Verdict::Holds);
    assert!(conj.witness.unwrap().ends_with("= 54"));
    let orbit = metrics::orbit_bound_data(&a).unwrap();
    assert_eq!(orbit.largest_orbit, 27);
    assert_eq!(orbit.verdict, metrics::Verdict::Holds);

    let c2wr = catalog::wreath_imprimitive(&catalog::cyclic(2).unwrap(), 3).unwrap();
    let t = character_table(&c2wr, &conjugacy_classes(&c2wr)).unwrap();
    let mut d = t.degrees().to_vec();
    d.sort_unstable();
    assert_eq!(d, [1, 1, 1, 1, 2, 2, 3, 3, 3, 3]);
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_subgroups_of_s6(gens in prop::collection::vec(perm_strategy(6), 1..3)) {
        let g = group_of(6, &gens);
        let elements = closure(6, &gens);
        prop_assert_eq!(g.order(), elements.len());
        let classes = conjugacy_classes(&g);
        let mut sizes = classes.sizes().to_vec();
        sizes.sort_unstable();
        prop_assert_eq!(&sizes, &class_sizes(&elements));

        let a = Analysis::new("random", g).unwrap();
        prop_assert!(metrics::check_properties(&a).all());
        let order = a.order() as u64;
        prop_assert_eq!(a.acs(), metrics::rational(order, a.table.len() as u64));
        prop_assert_eq!(metrics::commuting_probability(&a.classes) * a.acs(), metrics::rational(1, 1));
        let one = metrics::rational(1, 1);
        prop_assert_eq!(a.acd() == one, a.group.is_abelian());
        prop_assert_eq!(a.acs() == one, a.group.is_abelian());
        prop_assert!(a.acd() <= metrics::rational(a.table.b(), 1));
        let b = metrics::rational(a.table.b(), 1);
        for f in a.fibers().unwrap() {
            let acd: acd_core::Rational = f.acd.parse().unwrap();
            prop_assert!(acd <= b);
        }
    }
}
