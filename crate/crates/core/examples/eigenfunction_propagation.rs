//! Solutions of Wψ = zψ on Λ_L are fixed by their values on a thin set.

use std::f64::consts::TAU;

use magwalk::propagation::{determining_set, eigen_residual, propagate_eigenfunction, propagation_rank, Sweep};
use magwalk::walk::quasiperiodic_coins;
use magwalk::Flux;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> magwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let coins = quasiperiodic_coins(Flux::new(3, 7)?);
    let l = 4;
    for sweep in [Sweep::Downward, Sweep::Upward] {
        let set = determining_set(l, sweep)?;
        let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        let data: Vec<Complex64> =
            (0..2 * set.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let psi = propagate_eigenfunction(&data, z, l, &coins, sweep)?;
        println!(
            "{sweep:?}: |D| = {}, residual {:.1e}, rank {} (bound {})",
            set.len(),
            eigen_residual(&psi, z, &coins, sweep)?,
            propagation_rank(z, l, &coins, sweep)?,
            2 * (8 * l + 1)
        );
    }
    Ok(())
}
