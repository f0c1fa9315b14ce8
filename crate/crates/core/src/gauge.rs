//! Gauge fields `U_α(x)` realising a homogeneous flux, and plaquette phases.
//!
//! Phases are evaluated from closed forms on demand. A [`GaugeTransform`]
//! stores its phases `G(x)` only on a finite window and is the identity
//! outside of it, so a transformed gauge is still defined on all of `Z^2`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::flux::Flux;
use crate::lattice::{Direction, LatticeBox, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GaugeKind {
    Symmetric,
    Landau,
    Transformed,
}

/// Closed-form gauge underlying a (possibly transformed) field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseGauge {
    /// `U_1(x) = e^{−i x2 Φ/2}`, `U_2(x) = e^{i x1 Φ/2}`.
    Symmetric,
    /// `U_1(x) = e^{−i x2 Φ}`, `U_2(x) = 1`.
    Landau,
}

/// Site-indexed unit phases `G(x) = e^{i φ(x)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform {
    window: LatticeBox,
    angles: Vec<f64>,
}

impl GaugeTransform {
    pub fn new(window: LatticeBox, angles: Vec<f64>) -> Self {
        assert_eq!(angles.len(), window.num_sites(), "one angle per window site");
        GaugeTransform { window, angles }
    }

    pub fn random<R: Rng + ?Sized>(window: LatticeBox, rng: &mut R) -> Self {
        let angles = (0..window.num_sites()).map(|_| rng.gen::<f64>() * TAU).collect();
        GaugeTransform { window, angles }
    }

    pub fn window(&self) -> LatticeBox {
        self.window
    }

    pub fn angle(&self, x: Site) -> f64 {
        self.window.site_index(x).map_or(0.0, |i| self.angles[i])
    }

    pub fn phase(&self, x: Site) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeField {
    flux: Flux,
    base: BaseGauge,
    transform: Option<Arc<GaugeTransform>>,
}

impl GaugeField {
    pub fn symmetric(flux: Flux) -> Self {
        GaugeField { flux, base: BaseGauge::Symmetric, transform: None }
    }

    pub fn landau(flux: Flux) -> Self {
        GaugeField { flux, base: BaseGauge::Landau, transform: None }
    }

    /// `U'_α(x) = G(x+e_α) U_α(x) G(x)^{-1}`.
    pub fn transformed(self, transform: GaugeTransform) -> Self {
        GaugeField { transform: Some(Arc::new(transform)), ..self }
    }

    pub fn flux(&self) -> Flux {
        self.flux
    }

    pub fn base(&self) -> BaseGauge {
        self.base
    }

    pub fn transform(&self) -> Option<&GaugeTransform> {
        self.transform.as_deref()
    }

    pub fn kind(&self) -> GaugeKind {
        match (self.transform.is_some(), self.base) {
            (true, _) => GaugeKind::Transformed,
            (false, BaseGauge::Symmetric) => GaugeKind::Symmetric,
            (false, BaseGauge::Landau) => GaugeKind::Landau,
        }
    }

    fn base_angle(&self, x: Site, dir: Direction) -> f64 {
        let phi = self.flux.value();
        match (self.base, dir) {
            (BaseGauge::Symmetric, Direction::One) => -(x.x2 as f64) * phi / 2.0,
            (BaseGauge::Symmetric, Direction::Two) => (x.x1 as f64) * phi / 2.0,
            (BaseGauge::Landau, Direction::One) => -(x.x2 as f64) * phi,
            (BaseGauge::Landau, Direction::Two) => 0.0,
        }
    }

    /// `U_α(x)`, the phase picked up when hopping from `x` to `x + e_α`.
    pub fn phase(&self, x: Site, dir: Direction) -> Complex64 {
        let mut angle = self.base_angle(x, dir);
        if let Some(g) = &self.transform {
            angle += g.angle(x + dir.unit()) - g.angle(x);
        }
        Complex64::from_polar(1.0, angle)
    }

    /// `F_12(x) ∈ [0, 2π)` defined by
    /// `U_1(x)* U_2(x+e_1)* U_1(x+e_2) U_2(x) = e^{−i F_12(x)}`.
    pub fn plaquette_phase(&self, x: Site) -> f64 {
        let (e1, e2) = (Direction::One, Direction::Two);
        let loop_phase = self.phase(x, e1).conj()
            * self.phase(x + e1.unit(), e2).conj()
            * self.phase(x + e2.unit(), e1)
            * self.phase(x, e2);
        wrap_angle(-loop_phase.arg())
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

/// Free function form of [`GaugeField::phase`].
pub fn gauge_phase(g: &GaugeField, x: Site, dir: Direction) -> Complex64 {
    g.phase(x, dir)
}

/// Free function form of [`GaugeField::plaquette_phase`].
pub fn plaquette_phase(g: &GaugeField, x: Site) -> f64 {
    g.plaquette_phase(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-13
    }

    #[test]
    fn symmetric_phase_example() {
        let g = GaugeField::symmetric(Flux::new(1, 2).unwrap());
        let u = g.phase(Site::new(0, 3), Direction::One);
        assert!(close(u, Complex64::from_polar(1.0, -3.0 * PI / 2.0)));
    }

    #[test]
    fn landau_direction_two_is_trivial() {
        let g = GaugeField::landau(Flux::new(3, 7).unwrap());
        for x in [Site::new(4, -9), Site::new(0, 0), Site::new(-2, 11)] {
            assert_eq!(g.phase(x, Direction::Two), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn origin_phases_vanish() {
        let g = GaugeField::symmetric(Flux::new(5, 11).unwrap());
        assert!(close(g.phase(Site::ORIGIN, Direction::One), Complex64::new(1.0, 0.0)));
        assert!(close(g.phase(Site::ORIGIN, Direction::Two), Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn plaquette_examples() {
        let f = Flux::new(1, 3).unwrap();
        let sym = GaugeField::symmetric(f);
        assert!(circle_distance(sym.plaquette_phase(Site::new(5, -2)), 2.0 * PI / 3.0) < 1e-12);
        let lan = GaugeField::landau(f);
        assert!(circle_distance(lan.plaquette_phase(Site::ORIGIN), 2.0 * PI / 3.0) < 1e-12);
    }

    #[test]
    fn plaquette_is_homogeneous_and_gauge_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let window = LatticeBox::new(10);
        for f in [Flux::new(1, 4).unwrap(), Flux::new(2, 5).unwrap(), Flux::new(8, 13).unwrap()] {
            let gauges = [
                GaugeField::symmetric(f),
                GaugeField::landau(f),
                GaugeField::symmetric(f).transformed(GaugeTransform::random(window, &mut rng)),
                GaugeField::landau(f).transformed(GaugeTransform::random(window, &mut rng)),
            ];
            for g in &gauges {
                for x in LatticeBox::new(10).sites() {
                    let d = circle_distance(g.plaquette_phase(x), f.value());
                    assert!(d < 1e-12, "{:?} at {x:?}: {d}", g.kind());
                }
            }
        }
    }

    #[test]
    fn transformed_phase_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let window = LatticeBox::new(3);
        let t = GaugeTransform::random(window, &mut rng);
        let base = GaugeField::symmetric(Flux::new(1, 5).unwrap());
        let g = base.clone().transformed(t.clone());
        assert_eq!(g.kind(), GaugeKind::Transformed);
        let x = Site::new(1, -2);
        let expect = t.phase(x + Site::new(0, 1)) * base.phase(x, Direction::Two) * t.phase(x).conj();
        assert!(close(g.phase(x, Direction::Two), expect));
        // identity outside the window
        let far = Site::new(40, 40);
        assert!(close(g.phase(far, Direction::One), base.phase(far, Direction::One)));
    }

    #[test]
    fn wrap_and_distance() {
        assert_eq!(wrap_angle(-0.0), 0.0);
        assert!((wrap_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!(wrap_angle(-1e-300) < TAU);
        assert!((circle_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-14);
        assert!((circle_distance(0.0, PI) - PI).abs() < 1e-15);
    }
}
