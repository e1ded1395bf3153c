//! Cross-checks of the cohomology pipeline against independent computations.

mod common;

use std::collections::BTreeMap;

use ekedahl::abelian::FGAbelian;
use ekedahl::cohomology::{
    bogomolov_multiplier, coboundary_matrix, h2_units, h2_units_with, kernel_of_restrictions,
    restriction_matrix, CohomologyConfig,
};
use ekedahl::group::{builtin_group, direct_product, FiniteGroup};
use num_traits::ToPrimitive;

use common::oracle::{brute_force_h2, commutator_quotient_b0_at, cycle_space_h2, hopf_h2};
use common::{all_abelian_subgroups, order_profile, relabeled};

#[test]
fn exhaustive_enumeration_agrees_up_to_order_four() {
    let trivial = FiniteGroup::from_table(&[vec![0]], None).unwrap();
    let mut groups = vec![trivial];
    for n in 2..=4 {
        groups.push(builtin_group("cyclic", &[n]).unwrap());
    }
    let klein = builtin_group("elementary_abelian", &[2, 2]).unwrap();
    groups.push(relabeled(&klein, 3));
    groups.push(relabeled(&builtin_group("cyclic", &[4]).unwrap(), 1));
    groups.push(klein);
    for g in &groups {
        let pipeline = h2_units(g).unwrap().group();
        let expected = if g.order() == 1 {
            BTreeMap::from([(1, 1)])
        } else {
            brute_force_h2(g)
        };
        assert_eq!(order_profile(&pipeline), expected, "order {}", g.order());
    }
    let klein = builtin_group("elementary_abelian", &[2, 2]).unwrap();
    assert_eq!(h2_units(&klein).unwrap().group(), FGAbelian::cyclic(2));
}

#[test]
fn hopf_formula_matches_bar_complex() {
    let cases: Vec<(FiniteGroup, Vec<&str>, FGAbelian)> = vec![
        (
            builtin_group("quaternion8", &[]).unwrap(),
            vec!["aaaa", "aaBB", "baBa"],
            FGAbelian::trivial(),
        ),
        (
            builtin_group("dihedral", &[4]).unwrap(),
            vec!["aaaa", "bb", "abab"],
            FGAbelian::cyclic(2),
        ),
        (
            builtin_group("symmetric", &[3]).unwrap(),
            vec!["aaa", "bb", "abab"],
            FGAbelian::trivial(),
        ),
        (
            builtin_group("elementary_abelian", &[2, 2]).unwrap(),
            vec!["aa", "bb", "abAB"],
            FGAbelian::cyclic(2),
        ),
        (
            builtin_group("elementary_abelian", &[3, 2]).unwrap(),
            vec!["aaa", "bbb", "abAB"],
            FGAbelian::cyclic(3),
        ),
        (
            builtin_group("cyclic", &[6]).unwrap(),
            vec!["aaaaaa"],
            FGAbelian::trivial(),
        ),
        (
            direct_product(
                &builtin_group("cyclic", &[2]).unwrap(),
                &builtin_group("cyclic", &[4]).unwrap(),
            ),
            vec!["aa", "bbbb", "abAB"],
            FGAbelian::cyclic(2),
        ),
        (
            builtin_group("dihedral", &[6]).unwrap(),
            vec!["aaaaaa", "bb", "abab"],
            FGAbelian::cyclic(2),
        ),
        (
            builtin_group("symmetric", &[4]).unwrap(),
            vec!["aa", "bbb", "abababab"],
            FGAbelian::cyclic(2),
        ),
    ];
    for (g, relators, expected) in cases {
        let hopf = hopf_h2(&g, &relators);
        assert_eq!(hopf, expected, "Hopf formula for {relators:?}");
        assert_eq!(
            h2_units(&g).unwrap().group(),
            hopf,
            "bar complex for {relators:?}"
        );
    }
    for name in ["quaternion8", "dihedral"] {
        let params: &[u64] = if name == "dihedral" { &[4] } else { &[] };
        assert!(bogomolov_multiplier(&builtin_group(name, params).unwrap())
            .unwrap()
            .is_trivial());
    }
}

// ---------------------------------------------------------------------------
// structural checks

fn small_nonabelian_groups() -> Vec<FiniteGroup> {
    let c2 = builtin_group("cyclic", &[2]).unwrap();
    let c3 = builtin_group("cyclic", &[3]).unwrap();
    let s3 = builtin_group("symmetric", &[3]).unwrap();
    let d4 = builtin_group("dihedral", &[4]).unwrap();
    let q8 = builtin_group("quaternion8", &[]).unwrap();
    vec![
        s3.clone(),
        d4.clone(),
        q8.clone(),
        builtin_group("dihedral", &[5]).unwrap(),
        builtin_group("dihedral", &[6]).unwrap(),
        builtin_group("dihedral", &[8]).unwrap(),
        builtin_group("dihedral", &[12]).unwrap(),
        builtin_group("symmetric", &[4]).unwrap(),
        direct_product(&c2, &d4),
        direct_product(&c2, &q8),
        direct_product(&c3, &s3),
        direct_product(&c2, &builtin_group("dihedral", &[6]).unwrap()),
    ]
}

#[test]
fn maximal_abelian_subgroups_suffice() {
    for g in small_nonabelian_groups() {
        assert!(g.order() <= 24);
        let all = all_abelian_subgroups(&g);
        let subgroups: Vec<_> = all.iter().map(|m| g.subgroup(m).unwrap()).collect();
        let from_all =
            kernel_of_restrictions(&g, &subgroups, &CohomologyConfig::default()).unwrap();
        assert_eq!(
            from_all,
            bogomolov_multiplier(&g).unwrap(),
            "order {}",
            g.order()
        );
        assert!(from_all.is_trivial());
    }
}

/// `res(H -> K) . res(G -> H) = res(G -> K)` on generators, modulo the orders in `H^2(K)`.
#[test]
fn restriction_is_functorial() {
    for g in [
        builtin_group("symmetric", &[3]).unwrap(),
        builtin_group("dihedral", &[4]).unwrap(),
        builtin_group("dihedral", &[8]).unwrap(),
    ] {
        let m = g.order() as u64;
        let cfg = CohomologyConfig::default();
        let on_g = h2_units_with(&g, m, &cfg).unwrap();
        let subs = all_abelian_subgroups(&g);
        let mut checked = 0;
        for h_members in all_subgroups(&g) {
            let h = g.subgroup(&h_members).unwrap();
            let h_group = h.to_group();
            let on_h = h2_units_with(&h_group, m, &cfg).unwrap();
            let r_gh = restriction_matrix(&g, &h, &on_g, &on_h).unwrap();
            for k_members in subs
                .iter()
                .filter(|k| k.iter().all(|x| h_members.contains(x)))
            {
                let k = g.subgroup(k_members).unwrap();
                let k_in_h: Vec<usize> = k_members
                    .iter()
                    .map(|x| h_members.iter().position(|y| y == x).unwrap())
                    .collect();
                let k_sub_h = h_group.subgroup(&k_in_h).unwrap();
                let on_k = h2_units_with(&k.to_group(), m, &cfg).unwrap();
                let on_k_via_h = h2_units_with(&k_sub_h.to_group(), m, &cfg).unwrap();
                let r_gk = restriction_matrix(&g, &k, &on_g, &on_k).unwrap();
                let r_hk = restriction_matrix(&h_group, &k_sub_h, &on_h, &on_k_via_h).unwrap();
                let composed = r_hk.mul(&r_gh);
                let orders = on_k.generator_orders();
                assert_eq!(orders, on_k_via_h.generator_orders());
                for (i, &d) in orders.iter().enumerate() {
                    for j in 0..composed.cols() {
                        let a = composed.row(i)[j].to_i64().unwrap().rem_euclid(d as i64);
                        let b = r_gk.row(i)[j].to_i64().unwrap().rem_euclid(d as i64);
                        assert_eq!(a, b);
                    }
                }
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

fn all_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![vec![g.identity()]];
    seen.insert(vec![g.identity()]);
    while let Some(a) = stack.pop() {
        for x in 0..g.order() {
            if !a.contains(&x) {
                let mut gens = a.clone();
                gens.push(x);
                let b = g.generate(&gens);
                if seen.insert(b.clone()) {
                    stack.push(b);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Representatives are genuine cocycles, coboundaries express as zero, and
/// `express` inverts integer combinations of representatives.
#[test]
fn representatives_and_coordinates() {
    let mut groups = small_nonabelian_groups();
    groups.push(builtin_group("elementary_abelian", &[2, 3]).unwrap());
    groups.push(builtin_group("heisenberg", &[3]).unwrap());
    groups.push(direct_product(
        &builtin_group("cyclic", &[4]).unwrap(),
        &builtin_group("cyclic", &[6]).unwrap(),
    ));
    for g in groups {
        let h2 = h2_units(&g).unwrap();
        let m = h2.modulus();
        let d2 = coboundary_matrix(&g, 2, m).unwrap();
        let d1 = coboundary_matrix(&g, 1, m).unwrap();
        for rep in h2.cocycle_representatives() {
            assert!(d2.apply(rep).iter().all(|&x| x == 0));
        }
        let f: Vec<u64> = (0..d1.cols).map(|i| (i as u64 * 7 + 3) % m).collect();
        let boundary = d1.apply(&f);
        assert!(h2.express(&boundary).unwrap().iter().all(|&x| x == 0));

        let orders = h2.generator_orders().to_vec();
        let coeffs: Vec<u64> = (0..orders.len())
            .map(|i| (i as u64 * 5 + 1) % orders[i])
            .collect();
        let mut combo = boundary.clone();
        for (c, rep) in coeffs.iter().zip(h2.cocycle_representatives()) {
            for (x, r) in combo.iter_mut().zip(rep) {
                *x = (*x + c * r) % m;
            }
        }
        let got = h2.express(&combo).unwrap();
        let got: Vec<u64> = got.iter().zip(&orders).map(|(x, d)| x % d).collect();
        assert_eq!(got, coeffs, "order {}", g.order());
    }
}

#[test]
fn cycle_space_formulas_on_small_groups() {
    let c2 = builtin_group("cyclic", &[2]).unwrap();
    let cases: Vec<(FiniteGroup, u64)> = vec![
        (builtin_group("dihedral", &[4]).unwrap(), 2),
        (builtin_group("quaternion8", &[]).unwrap(), 2),
        (builtin_group("symmetric", &[4]).unwrap(), 2),
        (builtin_group("elementary_abelian", &[2, 3]).unwrap(), 2),
        (
            direct_product(&c2, &builtin_group("dihedral", &[4]).unwrap()),
            2,
        ),
        (builtin_group("heisenberg", &[3]).unwrap(), 3),
        (builtin_group("elementary_abelian", &[3, 2]).unwrap(), 3),
    ];
    for (g, p) in cases {
        let h2 = h2_units(&g).unwrap().group();
        assert_eq!(cycle_space_h2(&g, p, 8), h2, "order {}", g.order());
        assert!(
            commutator_quotient_b0_at(&g, p, 8).is_trivial(),
            "order {}",
            g.order()
        );
    }
}
