//! Catalogued families with vanishing higher Ekedahl invariants.

use ekedahl::ekedahl::{catalog_lookup, catalog_notes, CatalogAssertions};
use ekedahl::formats::group_to_json;
use ekedahl::group::builtin_group;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases: [(&str, &[u64]); 6] = [
        ("symmetric", &[5]),
        ("cyclic", &[12]),
        ("dihedral", &[7]),
        ("heisenberg", &[5]),
        ("heisenberg", &[3]),
        ("quaternion8", &[]),
    ];
    for (name, params) in cases {
        let g = builtin_group(name, params)?;
        let entry = catalog_lookup(&g, &CatalogAssertions::default());
        let shown = entry.map_or("not catalogued".to_string(), |e| e.to_string());
        println!("{name}{params:?} (order {}): {shown}", g.order());
        for note in catalog_notes(&g) {
            println!("  note: {note}");
        }
    }
    // Q8 embeds in GL_2(C); the caller may vouch for that
    let q8 = builtin_group("quaternion8", &[])?;
    let vouched = catalog_lookup(
        &q8,
        &CatalogAssertions {
            gl3_embeddable: true,
        },
    );
    println!("quaternion8 with a GL_3 assertion: {vouched:?}");
    println!("{}", group_to_json(&q8));
    Ok(())
}
