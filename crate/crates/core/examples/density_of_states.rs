//! DOS of W_L against the exact moments of the infinite walk.

use magwalk::spectral::{dos_measure, moment_compare, sdf_moments, unitary_eigenphases};
use magwalk::walk::DENSE_CAP;
use magwalk::{restricted_walk, Flux, GaugeField};

fn main() -> magwalk::Result<()> {
    let flux = Flux::new(5, 8)?;
    let t_max = 6;
    let exact = sdf_moments(flux, t_max);
    for l in [4, 8, 12] {
        let w = restricted_walk(&GaugeField::symmetric(flux), l)?;
        let dos = dos_measure(&unitary_eigenphases(&w, DENSE_CAP)?, l)?;
        let cmp = moment_compare(&dos.moments(t_max), &exact, t_max, Some(l))?;
        let dev: Vec<String> = cmp.deviations.iter().map(|d| format!("{d:.2e}")).collect();
        println!("L={l:2} atoms {:4}  |μ̂(t) − τ(W^t)| = [{}]", dos.phases.len(), dev.join(", "));
    }
    let hist = dos_measure(
        &unitary_eigenphases(&restricted_walk(&GaugeField::symmetric(flux), 12)?, DENSE_CAP)?,
        12,
    )?
    .histogram(16);
    println!("histogram (16 bins, L=12): {:?}", hist.iter().map(|h| (h * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    Ok(())
}
