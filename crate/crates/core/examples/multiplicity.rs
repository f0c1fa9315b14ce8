//! Largest eigenvalue multiplicity of W_L next to the 8(2L+1) bound.

use magwalk::spectral::{max_multiplicity, unitary_eigenphases, CLUSTER_TOL};
use magwalk::walk::DENSE_CAP;
use magwalk::{restricted_walk, Flux, GaugeField};

fn main() -> magwalk::Result<()> {
    for (p, q) in [(0, 1), (1, 3), (2, 5), (5, 8)] {
        let flux = Flux::new(p, q)?;
        for l in [4, 6, 8] {
            let w = restricted_walk(&GaugeField::symmetric(flux), l)?;
            let m = max_multiplicity(&unitary_eigenphases(&w, DENSE_CAP)?, CLUSTER_TOL);
            let side = 2 * l + 1;
            println!(
                "{flux:>4} L={l}: multiplicity {m:3} ≤ {:3}, atom {:.4} ≤ {:.4}",
                8 * side,
                m as f64 / (side * side) as f64,
                8.0 / side as f64
            );
        }
    }
    Ok(())
}
