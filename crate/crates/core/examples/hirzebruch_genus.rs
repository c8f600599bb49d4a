//! Hirzebruch classes and chi_y genera, with the three classical
//! specializations.

use charclass::csm::{Arrangement, DivisorSubset};
use charclass::hirzebruch::{chi_y, eval_y, scissor_decompose_stratum, ty_smooth, ty_stratum};
use charclass::ring::int;
use charclass::spaces::{hypersurface, projective_space};

fn main() -> charclass::Result<()> {
    let names = ["y".to_string()];
    for x in [
        projective_space(2),
        projective_space(3),
        hypersurface(2, 3)?,
        hypersurface(3, 4)?,
    ] {
        let p = chi_y(&x)?;
        let vals: Vec<String> = [-1, 0, 1].iter().map(|y| eval_y(&p, &int(*y)).to_string()).collect();
        println!(
            "{:<8} chi_y = {:<20} at -1,0,1: {}",
            x.label(),
            p.to_pretty_string(&names),
            vals.join(", ")
        );
    }
    let p2 = projective_space(2);
    println!("T_y(P2) = {}", ty_smooth(&p2)?.value);
    let arr = Arrangement::from_classes(p2, &["h", "h"])?;
    let open = DivisorSubset::EMPTY;
    println!("[P2 - two lines] = {}", scissor_decompose_stratum(&arr, open)?);
    println!("chi_y = {}", ty_stratum(&arr, open)?.degree()?.to_pretty_string(&names));
    Ok(())
}
