//! Strata of a normal-crossing arrangement: three general lines in the plane.

use charclass::csm::{csm_complement, csm_of_function, csm_stratum, euler_degree, Arrangement, ArrangementFunction};
use charclass::ring::int;
use charclass::spaces::projective_space;

fn main() -> charclass::Result<()> {
    let arr = Arrangement::from_classes(projective_space(2), &["h", "h", "h"])?;
    let open = csm_complement(&arr)?;
    println!("complement: {}  (chi = {})", open.value, euler_degree(&open));
    for i in arr.strata() {
        let c = csm_stratum(&arr, i)?;
        println!(
            "{:<10} {:<14} chi = {}",
            i.to_string(),
            c.value.to_string(),
            euler_degree(&c)
        );
    }
    // 2 on the three vertices, 1 elsewhere
    let mut f = ArrangementFunction::constant(3, int(1));
    for i in arr.strata().filter(|i| i.len() == 2) {
        f.set(i, int(2));
    }
    println!("weighted: chi = {}", euler_degree(&csm_of_function(&arr, &f)?));
    Ok(())
}
