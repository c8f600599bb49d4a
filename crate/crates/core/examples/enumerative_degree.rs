//! Degrees of the form  integral of c(E) cap C_*(alpha).

use charclass::classes::BundleData;
use charclass::csm::{csm_complement, csm_smooth, enumerative_degree, Arrangement};
use charclass::spaces::projective_space;

fn main() -> charclass::Result<()> {
    let p2 = projective_space(2);
    let o1 = BundleData::line(&p2.element("h")?)?;
    println!("O(1) on P2: {}", enumerative_degree(&p2, &o1, &csm_smooth(&p2))?);
    let p1 = projective_space(1);
    let o2 = BundleData::line(&p1.element("2*h")?)?;
    println!("O(2) on P1: {}", enumerative_degree(&p1, &o2, &csm_smooth(&p1))?);
    let arr = Arrangement::from_classes(p2.clone(), &["h", "h"])?;
    let e = BundleData::line(&p2.element("h")?)?.direct_sum(&BundleData::line(&p2.element("2*h")?)?)?;
    println!(
        "O(1)+O(2) on P2 minus two lines: {}",
        enumerative_degree(&p2, &e, &csm_complement(&arr)?)?
    );
    Ok(())
}
