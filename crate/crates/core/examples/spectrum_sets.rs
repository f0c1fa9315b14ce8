//! Arcs on the circle: merging, measure, Hausdorff distance and the
//! butterfly symmetries of one flux.

use magwalk::analysis::symmetry_report;
use magwalk::{band_spectrum, Flux, SpectrumSet};

fn main() -> magwalk::Result<()> {
    let a = SpectrumSet::from_arcs([(6.0, 6.6), (0.1, 0.5), (3.0, 3.2)]);
    let b = SpectrumSet::from_samples(&[0.0, 0.2, 3.1], 0.15)?;
    println!("a = {:?}", a.arcs());
    println!("measure(a) = {:.4}, d(a, b) = {:.4}", a.lebesgue_measure(), a.hausdorff_distance(&b)?);

    let flux = Flux::new(2, 9)?;
    let s = band_spectrum(flux, 32)?.arcs;
    let s_rev = band_spectrum(flux.reversed(), 32)?.arcs;
    println!("{:?}", symmetry_report(flux, &s, &s_rev)?);
    Ok(())
}
