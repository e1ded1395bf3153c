#![allow(dead_code)]

use std::collections::BTreeMap;

pub mod oracle;

use ekedahl::abelian::FGAbelian;
use ekedahl::group::FiniteGroup;
use num_traits::ToPrimitive;

/// Number of elements of each order in a finite abelian group; determines it up to isomorphism.
pub fn order_profile(a: &FGAbelian) -> BTreeMap<u64, u64> {
    assert!(a.is_finite());
    let factors: Vec<u64> = a
        .invariant_factors()
        .iter()
        .map(|d| d.to_u64().unwrap())
        .collect();
    let mut profile = BTreeMap::new();
    let total: u64 = factors.iter().product();
    for mut code in 0..total {
        let mut ord = 1u64;
        for &d in &factors {
            let x = code % d;
            code /= d;
            ord = num_integer::lcm(ord, d / num_integer::gcd(x, d));
        }
        *profile.entry(ord).or_insert(0) += 1;
    }
    profile
}

/// Every abelian subgroup, as sorted member lists.
pub fn all_abelian_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![vec![g.identity()]];
    seen.insert(vec![g.identity()]);
    while let Some(a) = stack.pop() {
        for x in 0..g.order() {
            if a.contains(&x) || !a.iter().all(|&y| g.commute(x, y)) {
                continue;
            }
            let mut gens = a.clone();
            gens.push(x);
            let b = g.generate(&gens);
            if seen.insert(b.clone()) {
                stack.push(b);
            }
        }
    }
    seen.into_iter().collect()
}

/// A group from a multiplication table whose elements are listed in a shuffled order.
pub fn relabeled(g: &FiniteGroup, shift: usize) -> FiniteGroup {
    let n = g.order();
    let to = |x: usize| (x + shift) % n;
    let from = |y: usize| (y + n - shift % n) % n;
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| to(g.mul(from(a), from(b)))).collect())
        .collect();
    FiniteGroup::from_table(&table, None).unwrap()
}

pub mod strategies {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use ekedahl::abelian::{FGAbelian, L0AbElement, L0Label};
    use ekedahl::hcoh::CohomologyTable;
    use ekedahl::kring::{GeneratorSymbol, KElement};
    use proptest::prelude::*;

    pub const PRIME_POWERS: &[u64] = &[2, 3, 4, 5, 7, 8, 9, 25, 27];

    pub fn fg_abelian(max_rank: usize) -> impl Strategy<Value = FGAbelian> {
        (0..=max_rank, prop::collection::vec(2u64..30, 0..4))
            .prop_map(|(r, t)| FGAbelian::new(r, &t))
    }

    /// Effective elements of L0(Ab).
    pub fn l0_effective() -> impl Strategy<Value = L0AbElement> {
        prop::collection::vec((prop::sample::select(PRIME_POWERS), 0i64..3), 0..3).prop_flat_map(
            |torsion| {
                (0i64..3).prop_map(move |free| {
                    let mut e = L0AbElement::zero();
                    e.add_term(L0Label::Z, free);
                    for &(q, c) in &torsion {
                        e.add_term(L0Label::torsion(q).unwrap(), c);
                    }
                    e
                })
            },
        )
    }

    /// Cohomology of a `dim`-dimensional variety with `Z` at the ends and random groups between.
    pub fn table(dim: u32, torsion: bool) -> impl Strategy<Value = CohomologyTable> {
        let inner = if torsion {
            fg_abelian(2).boxed()
        } else {
            (0usize..3).prop_map(FGAbelian::free).boxed()
        };
        prop::collection::vec(inner, 2 * dim as usize + 1).prop_map(move |groups| {
            let last = groups.len() - 1;
            let groups = groups.into_iter().enumerate().map(|(k, g)| match k {
                0 => (0, FGAbelian::free(1)),
                k if k == last => (k as u32, FGAbelian::free(1)),
                k => (k as u32, g),
            });
            CohomologyTable::from_groups(dim, groups).unwrap()
        })
    }

    /// Blow-up data `(X, Y, d)` with `dim X = dim Y + d`.
    pub fn blowup_triple() -> impl Strategy<Value = (CohomologyTable, CohomologyTable, u32)> {
        (0u32..3, 1u32..4).prop_flat_map(|(dy, d)| (table(dy + d, true), table(dy, true), Just(d)))
    }

    pub fn symbols() -> Vec<Arc<GeneratorSymbol>> {
        vec![
            GeneratorSymbol::new("X", 2, true).unwrap(),
            GeneratorSymbol::new("Y", 1, true).unwrap(),
        ]
    }

    /// Exact element built from `c * X^a * Y^b * L^e`.
    pub fn exact_element(syms: Vec<Arc<GeneratorSymbol>>) -> impl Strategy<Value = KElement> {
        prop::collection::vec((-5i128..=5, 0u32..2, 0u32..2, -4i64..=4), 0..5).prop_map(
            move |terms| {
                terms
                    .into_iter()
                    .fold(KElement::zero(), |acc, (c, a, b, e)| {
                        let t = KElement::symbol(&syms[0])
                            .pow(a)
                            .mul(&KElement::symbol(&syms[1]).pow(b))
                            .mul(&KElement::lefschetz(e))
                            .scale(c);
                        acc.add(&t)
                    })
            },
        )
    }

    /// Element with optional precision in `[-6, 2]`.
    pub fn element(syms: Vec<Arc<GeneratorSymbol>>) -> impl Strategy<Value = KElement> {
        (exact_element(syms), prop::option::of(-6i64..=2)).prop_map(|(x, t)| match t {
            Some(t) => x.truncate(t),
            None => x,
        })
    }

    /// `sum_(j < n) e_(k + 2j)` for every `k` from `-2(n-1)` to `top`.
    pub fn window_sums(
        e: &BTreeMap<i64, L0AbElement>,
        n: u32,
        top: i64,
    ) -> BTreeMap<i64, L0AbElement> {
        let floor = -2 * (n as i64 - 1);
        (floor..=top)
            .map(|k| {
                (
                    k,
                    (0..n as i64)
                        .filter_map(|j| e.get(&(k + 2 * j)).cloned())
                        .sum(),
                )
            })
            .collect()
    }

    /// Admissible sequences: `e_0 = {Z}`, `e_1 = 0`, random effective values up to `e_top`.
    pub fn admissible_sequence() -> impl Strategy<Value = BTreeMap<i64, L0AbElement>> {
        prop::collection::vec(l0_effective(), 0..7).prop_map(|rest| {
            let mut e = BTreeMap::from([(0, L0AbElement::z()), (1, L0AbElement::zero())]);
            for (i, v) in rest.into_iter().enumerate() {
                e.insert(i as i64 + 2, v);
            }
            e
        })
    }
}

pub mod stretch {
    use ekedahl::group::{group_from_permutations, FiniteGroup};

    /// A subgroup of order 64 of the Sylow 2-subgroup of `S_16` with `B_0 = Z/2`.
    pub fn order_64_group() -> FiniteGroup {
        let gens = vec![
            vec![2, 3, 0, 1, 6, 7, 5, 4, 15, 14, 13, 12, 11, 10, 9, 8],
            vec![0, 1, 2, 3, 6, 7, 4, 5, 13, 12, 14, 15, 8, 9, 11, 10],
            vec![2, 3, 0, 1, 6, 7, 4, 5, 10, 11, 8, 9, 12, 13, 15, 14],
        ];
        let g = group_from_permutations(&gens, 64).unwrap();
        assert_eq!(g.order(), 64);
        g
    }
}
