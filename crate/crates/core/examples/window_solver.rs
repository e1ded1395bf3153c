//! Recovering Ekedahl invariants from sums over windows of width n.

use std::collections::BTreeMap;

use ekedahl::abelian::{l0_class_of, FGAbelian, L0AbElement};
use ekedahl::ekedahl::solve_from_projective_sums;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 2;
    let z2 = l0_class_of(&FGAbelian::cyclic(2));
    // e = ({Z}, 0, {Z/2}, 0, {Z/3})
    let e: BTreeMap<i64, L0AbElement> = BTreeMap::from([
        (0, L0AbElement::z()),
        (2, z2),
        (4, l0_class_of(&FGAbelian::cyclic(3))),
    ]);
    let sums: BTreeMap<i64, L0AbElement> = (-2..=4)
        .map(|k| (k, (0..n).filter_map(|j| e.get(&(k + 2 * j)).cloned()).sum()))
        .collect();
    for (k, s) in &sums {
        println!("window at {k}: {s}");
    }
    for (i, v) in solve_from_projective_sums(&sums, n as u32)? {
        println!("e_{i} = {v}");
    }
    Ok(())
}
