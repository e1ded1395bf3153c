//! Integral cohomology of classes: blow-up relations and the h_k map.

use ekedahl::abelian::FGAbelian;
use ekedahl::hcoh::{h_k, table_blowup, table_projective_space, CohomologyTable};
use ekedahl::kring::{GeneratorSymbol, KElement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a surface with 2-torsion in H^3, blown up at a point
    let x = CohomologyTable::from_groups(
        2,
        [
            (0, FGAbelian::free(1)),
            (2, FGAbelian::free(2)),
            (3, FGAbelian::cyclic(2)),
            (4, FGAbelian::free(1)),
        ],
    )?;
    let point = CohomologyTable::point();
    let (bl, e) = table_blowup(&x, &point, 2)?;
    println!(
        "Bl: {:?}",
        bl.groups()
            .map(|(k, g)| format!("H^{k} = {g}"))
            .collect::<Vec<_>>()
    );
    println!(
        "E:  {:?}",
        e.groups()
            .map(|(k, g)| format!("H^{k} = {g}"))
            .collect::<Vec<_>>()
    );

    let sym = |name: &str, t: &CohomologyTable| {
        Ok::<_, Box<dyn std::error::Error>>(KElement::symbol(&GeneratorSymbol::with_table(
            name,
            t.clone(),
        )?))
    };
    let lhs = sym("X", &x)?.add(&sym("E", &e)?);
    let rhs = sym("Bl", &bl)?.add(&KElement::one());
    for k in 0..=4 {
        println!("h_{k}: {} = {}", h_k(&lhs, k)?, h_k(&rhs, k)?);
    }

    let p3 = KElement::symbol(&GeneratorSymbol::with_table(
        "P3",
        table_projective_space(3),
    )?);
    let class = p3.mul(&KElement::lefschetz(-2)).sub(&KElement::one());
    for k in -4..=2 {
        println!("h_{k}({{P^3}} L^-2 - 1) = {}", h_k(&class, k)?);
    }
    Ok(())
}
