//! Arithmetic in the completed Grothendieck ring: units, series and classifying stacks.

use ekedahl::kring::{class_b_subgroup, class_gl, k_invert_unit, parse_kring_expr, KElement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unit = KElement::one().sub(&KElement::lefschetz(-1));
    println!("(1 - L^-1)^-1 = {}", k_invert_unit(&unit, -6)?);

    for n in 1..=3 {
        let gl = class_gl(n);
        let b = class_b_subgroup(&gl, None, -12)?;
        println!("{{GL_{n}}} = {gl}");
        println!("  {{B GL_{n}}} = {b}");
        println!("  product = {}", gl.mul(&b));
    }

    let x = parse_kring_expr("P^2 * inv(L^2 - 1) - 3*L^-3", Some(-6))?;
    println!("P^2 / (L^2 - 1) - 3 L^-3 = {x}");
    println!("filtration degree {:?}", x.fil_degree());
    println!(
        "{{GL_3}} counted over F_2: {:?}",
        class_gl(3).evaluate_lefschetz(2)
    );
    Ok(())
}
