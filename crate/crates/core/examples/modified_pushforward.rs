//! Modified pushforward along [P1/Z2] -> [pt/Z2] -> pt, and the two ways of
//! computing a degree.

use std::sync::Arc;

use charclass::groups::{AbelianGroupSpec, FiniteGroup};
use charclass::stacks::{
    degree_ca, modified_pushforward, one, pushforward, ConstructibleFunction, Level, StratifiedMap,
    StratifiedStackModel,
};

fn main() -> charclass::Result<()> {
    let m = Arc::new(StratifiedStackModel::projective_line_mod_involution());
    let bz2 = Arc::new(StratifiedStackModel::point(FiniteGroup::cyclic(2)?));
    let pt = Arc::new(StratifiedStackModel::point(FiniteGroup::trivial()));
    let f = StratifiedMap::new(&m, &bz2, vec![vec![1], vec![1], vec![0]])?;
    let g = StratifiedMap::new(&bz2, &pt, vec![vec![1]])?;
    let gf = f.then(&g)?;
    let alpha = ConstructibleFunction::from_integers(&m, &[1, 1, 1], Level::Invariant)?;
    println!("plain f_*(1) = {}", pushforward(&f, &alpha)?.values()[0]);
    for a in ["0", "Z", "Z^2", "Z/2"] {
        let a: AbelianGroupSpec = a.parse()?;
        let step = modified_pushforward(&g, &modified_pushforward(&f, &alpha, &a)?, &a)?;
        let direct = modified_pushforward(&gf, &alpha, &a)?;
        let r = degree_ca(&one(&m), &a)?;
        println!(
            "A = {a:<4} g_* f_* = {}  (g f)_* = {}  class degree {}  integral {}  coarse {}",
            step.values()[0],
            direct.values()[0],
            r.class_degree,
            r.direct_integral,
            r.underline
        );
    }
    Ok(())
}
