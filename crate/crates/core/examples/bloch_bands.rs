//! Band structure at one rational flux: branch count, arcs, total measure.
//!
//! cargo run --example bloch_bands -- 3/7 64

use magwalk::{band_spectrum, bloch_matrix, Flux};

fn main() -> magwalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let flux: Flux = args.next().as_deref().unwrap_or("1/3").parse()?;
    let n_k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(32);

    let fiber = bloch_matrix(flux, 0.1, 0.2);
    println!("fibre at k = (0.1, 0.2) is {}x{}", fiber.matrix.nrows(), fiber.matrix.ncols());

    let bands = band_spectrum(flux, n_k)?;
    println!("flux {flux}: {} branches, |λ| deviation {:.1e}", bands.branch_count(), bands.modulus_deviation);
    for a in bands.arcs.arcs() {
        println!("  [{:.6}, {:.6}]", a.start, a.end());
    }
    println!("measure {:.6}, gaps {}", bands.arcs.lebesgue_measure(), bands.arcs.gap_count());
    Ok(())
}
