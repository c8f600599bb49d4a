//! Finite Borel models of equivariant classes stabilize as the level grows.

use charclass::classes::SeriesKind;
use charclass::hirzebruch::equivariant_scaling_approx;
use charclass::spaces::{borel_approximation, BorelFiber};

fn main() -> charclass::Result<()> {
    for fiber in [BorelFiber::Point, BorelFiber::Projective { weights: vec![0, 1, 2] }] {
        let mut prev = None;
        for level in 1..=5 {
            let c = borel_approximation(1, &fiber, level)?;
            let stable = prev.as_ref().is_some_and(|p| c.stable_agreement(p));
            println!(
                "{fiber:?} level {level}: {}{}",
                c.value,
                if stable { "  (stable)" } else { "" }
            );
            prev = Some(c);
        }
    }
    for kind in SeriesKind::ALL {
        let v: Vec<String> = (1..=4)
            .map(|l| equivariant_scaling_approx(&kind.series(8), l).map(|c| c.to_string()))
            .collect::<charclass::Result<_>>()?;
        println!("scaling {:<6} {}", kind.name(), v.join(", "));
    }
    Ok(())
}
