//! Diagonal matrix elements of W^t do not depend on the site, and shifted
//! off-diagonal ones agree up to a magnetic phase.

use magwalk::spectral::{covariance_check_with, diagonal_spread, CovarianceSign};
use magwalk::{Flux, Site};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> magwalk::Result<()> {
    let flux = Flux::new(3, 8)?;
    let sites: Vec<Site> = (-3..=3).map(|i| Site::new(7 * i, -5 * i + 2)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..=4 {
        println!(
            "t={t}: diagonal spread {:.1e}, covariance + {:.1e}, − {:.1e}",
            diagonal_spread(flux, t, &sites),
            covariance_check_with(flux, t, 20, CovarianceSign::Plus, &mut rng),
            covariance_check_with(flux, t, 20, CovarianceSign::Minus, &mut rng)
        );
    }
    Ok(())
}
