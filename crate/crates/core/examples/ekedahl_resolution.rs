//! Ekedahl invariants: theorem constants, the Bogomolov corollary, the catalog and resolution data.

use ekedahl::ekedahl::{
    ekedahl_from_resolution, ekedahl_invariant, EkedahlOptions, InvariantResult, ResolutionData,
};
use ekedahl::group::builtin_group;
use ekedahl::hcoh::table_projective_space;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Z/2 acting on C^2 by a sign: P^2 with one copy of P^1 subtracted
    let data = ResolutionData::new(
        1,
        2,
        table_projective_space(2),
        vec![(-1, table_projective_space(1))],
    )?;
    println!("Z/2 from its resolution data:");
    for i in 0..=4 {
        let r = ekedahl_from_resolution(&data, i)?;
        let gap = r.bound_gap.map_or(String::new(), |g| {
            format!("  (m is {g} short of the bound)")
        });
        println!("  e_{i} = {}{gap}", r.value);
    }

    for (name, params) in [("symmetric", &[4u64][..]), ("quaternion8", &[])] {
        let g = builtin_group(name, params)?;
        println!("{name}{params:?}:");
        for i in -1..=3 {
            match ekedahl_invariant(&g, i, None, &EkedahlOptions::default())? {
                InvariantResult::Known { value, provenance } => {
                    println!("  e_{i} = {value}  [{provenance:?}]")
                }
                InvariantResult::Unknown { notes } => {
                    println!("  e_{i} unknown: {}", notes.join("; "))
                }
            }
        }
    }
    Ok(())
}
