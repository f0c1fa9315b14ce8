//! The finite unitary W_L: boundary sets, unitarity and where W_d differs from W.

use magwalk::restriction::difference_support;
use magwalk::{boundary_sets, restricted_walk, Flux, GaugeField};

fn main() -> magwalk::Result<()> {
    let g = GaugeField::symmetric(Flux::new(2, 7)?);
    for l in [2, 4, 8] {
        let sets = boundary_sets(l)?;
        let w = restricted_walk(&g, l)?;
        let diff = difference_support(&g, l)?;
        let inside = diff.iter().filter(|x| sets.delta2.contains(x)).count();
        println!(
            "L={l}: dim {}, |ΔΛ| = {}, |D| = {}, ‖W_L*W_L − 1‖ = {:.1e}, W − W_d touches {} sites ({} near the ring)",
            w.nrows(),
            sets.delta.len(),
            sets.determining.len(),
            w.unitarity_deviation(),
            diff.len(),
            inside
        );
    }
    Ok(())
}
