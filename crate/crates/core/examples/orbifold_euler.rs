//! Homomorphism counts and orbifold Euler numbers of small quotient stacks.

use charclass::groups::{hom_count, AbelianGroupSpec, FiniteGroup};
use charclass::stacks::{orbifold_euler, StratifiedStackModel};

fn main() -> charclass::Result<()> {
    let z2: AbelianGroupSpec = "Z^2".parse()?;
    for name in ["Z/2", "Z/5", "S3", "Q8", "D4", "A4", "S4"] {
        let g = FiniteGroup::preset(name)?;
        let pairs = hom_count(&z2, &g);
        let k = g.conjugacy_class_count();
        let e = orbifold_euler(&StratifiedStackModel::point(g), &z2);
        println!("[pt/{name:<3}] commuting pairs {pairs:>4}, classes {k:>2}, orbifold Euler {e}");
    }
    let m = StratifiedStackModel::projective_line_mod_involution();
    for a in ["0", "Z", "Z^2", "Z^3"] {
        println!("[P1/Z2] measured by {a:<4} {}", orbifold_euler(&m, &a.parse()?));
    }
    Ok(())
}
