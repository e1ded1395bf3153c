//! H^2(G, C*) with explicit cocycle representatives, and restriction to abelian subgroups.

use ekedahl::cohomology::{h2_units, h2_units_with, restriction_matrix, CohomologyConfig};
use ekedahl::group::{builtin_group, maximal_abelian_subgroups};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d4 = builtin_group("dihedral", &[4])?;
    let h2 = h2_units(&d4)?;
    println!(
        "H^2(D4, C*) = {} with cochains mod {}",
        h2.group(),
        h2.modulus()
    );
    for (i, rep) in h2.cocycle_representatives().iter().enumerate() {
        let nonzero = rep.iter().filter(|&&x| x != 0).count();
        println!(
            "  generator {i}: order {}, {nonzero} nonzero values",
            h2.generator_orders()[i]
        );
        println!(
            "  coordinates of the representative: {:?}",
            h2.express(rep)?
        );
    }

    let m = d4.order() as u64;
    let on_g = h2_units_with(&d4, m, &CohomologyConfig::default())?;
    for a in maximal_abelian_subgroups(&d4) {
        let on_a = h2_units_with(&a.to_group(), m, &CohomologyConfig::default())?;
        let r = restriction_matrix(&d4, &a, &on_g, &on_a)?;
        let images: Vec<String> = (0..r.rows()).map(|i| format!("{:?}", r.row(i))).collect();
        println!(
            "restriction to a subgroup of order {} with H^2 = {}: {}",
            a.order(),
            on_a.group(),
            if images.is_empty() {
                "zero map".into()
            } else {
                images.join(" ")
            }
        );
    }
    Ok(())
}
