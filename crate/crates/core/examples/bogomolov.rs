//! Bogomolov multipliers of a few groups, including one of order 64 where it is nonzero.

use ekedahl::cohomology::{bogomolov_multiplier_with, CohomologyConfig};
use ekedahl::formats::parse_group_json;
use ekedahl::group::{builtin_group, group_from_permutations};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = CohomologyConfig { order_cap: 64 };
    let s4 = parse_group_json(
        r#"{"format": "group-perms-v1", "degree": 4, "generators": [[1, 0, 2, 3], [1, 2, 3, 0]]}"#,
        64,
    )?;
    let groups = vec![
        ("S4 from JSON", s4),
        ("Q8", builtin_group("quaternion8", &[])?),
        ("D8", builtin_group("dihedral", &[8])?),
        ("Heisenberg, p = 3", builtin_group("heisenberg", &[3])?),
        (
            "order 64 in S16",
            group_from_permutations(
                &[
                    vec![2, 3, 0, 1, 6, 7, 5, 4, 15, 14, 13, 12, 11, 10, 9, 8],
                    vec![0, 1, 2, 3, 6, 7, 4, 5, 13, 12, 14, 15, 8, 9, 11, 10],
                    vec![2, 3, 0, 1, 6, 7, 4, 5, 10, 11, 8, 9, 12, 13, 15, 14],
                ],
                64,
            )?,
        ),
    ];
    for (name, g) in &groups {
        let start = std::time::Instant::now();
        let b0 = bogomolov_multiplier_with(g, &config)?;
        println!(
            "{name:<20} |G| = {:<3} B0 = {b0}  ({:.0?})",
            g.order(),
            start.elapsed()
        );
    }
    Ok(())
}
