//! A point mass under the magnetic walk: spreading, norm and gauge phases.

use magwalk::gauge::plaquette_phase;
use magwalk::walk::build_magnetic_walk;
use magwalk::{Flux, GaugeField, LatticeBox, Site, Spin, StateVector};

fn main() -> magwalk::Result<()> {
    let flux = Flux::new(1, 5)?;
    let steps = 8;
    for g in [GaugeField::symmetric(flux), GaugeField::landau(flux)] {
        let window = LatticeBox::new(steps + 1);
        let w = build_magnetic_walk(&g, window);
        let psi = StateVector::point(window, Site::ORIGIN, Spin::Up)?;
        let out = w.apply_power(&psi, steps)?;
        let far = out.support().iter().map(|x| x.linf()).max().unwrap_or(0);
        println!(
            "{:?}: plaquette phase {:.6}, norm after {steps} steps {:.15}, reach {far}",
            g.kind(),
            plaquette_phase(&g, Site::new(2, -1)),
            out.norm()
        );
        println!("  <0,+|W^{steps}|0,+> = {:.6}", out.at(Site::ORIGIN, Spin::Up));
    }
    Ok(())
}
