//! CSM classes of smooth catalog spaces and their degrees.

use charclass::csm::{csm_smooth, euler_degree};
use charclass::spaces::{hypersurface, product, projective_space};

fn main() -> charclass::Result<()> {
    let spaces = [
        projective_space(2),
        projective_space(3),
        product(&projective_space(1), &projective_space(1))?,
        hypersurface(2, 3)?,
        hypersurface(3, 2)?,
    ];
    for x in &spaces {
        let c = csm_smooth(x);
        println!(
            "{:<8} c = {:<28} chi = {}",
            x.label(),
            c.value.to_string(),
            euler_degree(&c)
        );
    }
    Ok(())
}
