//! One-dimensional almost-Mathieu walks: the two coin axes and the 2D bands.

use magwalk::analysis::{axis_correspondence, compare_1d_2d};
use magwalk::spectral::unitary_eigenphases;
use magwalk::walk::{build_amo_on, DENSE_CAP};
use magwalk::{golden_convergents, Pauli};
use magwalk::lattice::Chain;

fn main() -> magwalk::Result<()> {
    let seq = golden_convergents(6);
    let flux = seq.convergents[3];
    let w = build_amo_on(flux, 0.4, Pauli::X, Chain::ring(flux.period() * 6, 0.0))?;
    let ph = unitary_eigenphases(&w.to_sparse(), DENSE_CAP)?;
    println!("ring of {} sites at {flux}: {} eigenphases", flux.period() * 6, ph.len());

    let a = axis_correspondence(flux, 0.4, 16)?;
    println!("σ1 at θ = {:.3} matches σ2 at θ' = {:.3}, distance {:.1e}", a.theta, a.theta_sigma2, a.distance);

    for &f in &seq.convergents[2..5] {
        let c = compare_1d_2d(f, 32, 32)?;
        println!("{f}: d(∪θ σ_1D, σ_2D) = {:.1e} (grid tolerance {:.3})", c.distance, c.grid_tolerance);
    }
    Ok(())
}
