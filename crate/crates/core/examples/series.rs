//! The four characteristic series and the classes they define on P^4.

use charclass::classes::{apply_series, series_tdy, specialize_y, SeriesKind};
use charclass::ring::int;
use charclass::spaces::projective_space;

fn main() -> charclass::Result<()> {
    for kind in SeriesKind::ALL {
        println!("{:<6} {}", kind.name(), kind.series(6).to_pretty_string());
    }
    let tdy = series_tdy(6);
    for y in [-1, 0, 1] {
        println!("tdy at y={y:<2} {}", specialize_y(&tdy, &int(y)).to_pretty_string());
    }
    let x = projective_space(4);
    for kind in [SeriesKind::Chern, SeriesKind::Todd, SeriesKind::L] {
        let c = apply_series(&kind.series(8), x.tangent())?;
        println!(
            "{:<6}(P4) = {:<40} degree {}",
            kind.name(),
            c.to_string(),
            x.integrate_rational(&c)?
        );
    }
    Ok(())
}
