//! One-step walk unitaries: the magnetic walk on `Z^2` in shift-coin form or
//! quasi-periodic-coin form, and the one-dimensional almost-Mathieu walks.
//!
//! Operators are matrix-free sequences of layers (coins and spin-dependent
//! shifts) acting on a finite domain. On an open domain amplitude that is
//! shifted off the edge is dropped, so the raw operator is not unitary there;
//! see [`WalkOperator::is_truncated`].

use std::fmt;
use std::sync::Arc;

use faer::Mat;
use num_complex::Complex64;

use crate::coin::{Coin, Pauli};
use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::gauge::GaugeField;
use crate::lattice::{Chain, Closure, Direction, LatticeBox, Site, Spin};
use crate::restriction::in_decoupling_ring;
use crate::sparse::SparseMatrix;

/// Default cap on the dimension of dense assemblies.
pub const DENSE_CAP: usize = 8192;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkKind {
    /// `diag(T1, T1*) C_H diag(T2, T2*) C_H` in some gauge.
    Magnetic2d,
    /// `S1 C1 S2 C2` with plain shifts and position-dependent coins.
    Coined2d,
    /// Boundary-decoupled walk `W_d`.
    Decoupled2d,
    Amo1dSigma1,
    Amo1dSigma2,
}

/// Site-dependent coin.
#[derive(Clone)]
pub enum CoinField {
    Uniform(Coin),
    /// Symmetric-gauge coins `C_j(x) = e^{(−1)^j i Φ x_k σ3/2} C_H`, `k ≠ j`,
    /// for the step in direction `step = e_j`.
    QuasiPeriodic { flux: Flux, step: Direction },
    /// `σ1` on the decoupling ring of `Λ_L`, identity elsewhere.
    Decoupling { half_width: usize },
    Custom(Arc<dyn Fn(Site) -> Coin + Send + Sync>),
}

impl CoinField {
    pub fn at(&self, x: Site) -> Coin {
        match self {
            CoinField::Uniform(c) => *c,
            CoinField::QuasiPeriodic { flux, step } => {
                let phi = flux.value();
                let angle = match step {
                    Direction::One => -phi * x.x2 as f64 / 2.0,
                    Direction::Two => phi * x.x1 as f64 / 2.0,
                };
                Coin::exp_pauli(angle, Pauli::Z) * Coin::hadamard()
            }
            CoinField::Decoupling { half_width } => {
                if in_decoupling_ring(x, *half_width) {
                    Coin::pauli(Pauli::X)
                } else {
                    Coin::identity()
                }
            }
            CoinField::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for CoinField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinField::Uniform(c) => f.debug_tuple("Uniform").field(c).finish(),
            CoinField::QuasiPeriodic { flux, step } => {
                f.debug_struct("QuasiPeriodic").field("flux", flux).field("step", step).finish()
            }
            CoinField::Decoupling { half_width } => {
                f.debug_struct("Decoupling").field("half_width", half_width).finish()
            }
            CoinField::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// The coin pair `(C1, C2)` of a walk `W = S1 C1 S2 C2`.
#[derive(Clone, Debug)]
pub struct WalkCoins {
    pub c1: CoinField,
    pub c2: CoinField,
}

impl WalkCoins {
    pub fn hadamard() -> Self {
        WalkCoins { c1: CoinField::Uniform(Coin::hadamard()), c2: CoinField::Uniform(Coin::hadamard()) }
    }
}

/// Quasi-periodic coins that turn the symmetric-gauge magnetic walk into a
/// plain shift-coin walk: `C1` depends on `x2`, `C2` on `x1`.
pub fn quasiperiodic_coins(flux: Flux) -> WalkCoins {
    WalkCoins {
        c1: CoinField::QuasiPeriodic { flux, step: Direction::One },
        c2: CoinField::QuasiPeriodic { flux, step: Direction::Two },
    }
}

/// Which spin components a shift layer moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftPart {
    Full,
    /// Spin up moves `+e_α`, spin down stays.
    Up,
    /// Spin down moves `−e_α`, spin up stays.
    Down,
}

#[derive(Clone, Debug)]
pub enum Layer {
    Coin(CoinField),
    /// Spin-conditional (magnetic) translation. With `gauge = None` the
    /// plain lattice translation is used.
    Shift { dir: Direction, part: ShiftPart, gauge: Option<GaugeField> },
}

/// Walk on a box of `Z^2`, layers listed in the order they act.
#[derive(Clone, Debug)]
pub struct PlanarWalk {
    kind: WalkKind,
    domain: LatticeBox,
    layers: Vec<Layer>,
}

impl PlanarWalk {
    pub fn new(kind: WalkKind, domain: LatticeBox, layers: Vec<Layer>) -> Self {
        PlanarWalk { kind, domain, layers }
    }

    pub fn domain(&self) -> LatticeBox {
        self.domain
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    fn apply_layer(&self, layer: &Layer, psi: &[Complex64], out: &mut [Complex64]) {
        let b = &self.domain;
        match layer {
            Layer::Coin(field) => {
                for i in 0..b.num_sites() {
                    let c = field.at(b.site(i));
                    let (u, d) = c.apply(psi[2 * i], psi[2 * i + 1]);
                    out[2 * i] = u;
                    out[2 * i + 1] = d;
                }
            }
            Layer::Shift { dir, part, gauge } => {
                out.fill(ZERO);
                let e = dir.unit();
                let moves_up = *part != ShiftPart::Down;
                let moves_down = *part != ShiftPart::Up;
                for i in 0..b.num_sites() {
                    let x = b.site(i);
                    let up = psi[2 * i];
                    let down = psi[2 * i + 1];
                    if moves_up {
                        if let Some(j) = b.site_index(x + e) {
                            let u = gauge.as_ref().map_or(Complex64::new(1.0, 0.0), |g| g.phase(x, *dir));
                            out[2 * j] += u * up;
                        }
                    } else {
                        out[2 * i] += up;
                    }
                    if moves_down {
                        if let Some(j) = b.site_index(x - e) {
                            // T* |x> = conj(U(x − e)) |x − e>
                            let u = gauge.as_ref().map_or(Complex64::new(1.0, 0.0), |g| g.phase(x - e, *dir).conj());
                            out[2 * j + 1] += u * down;
                        }
                    } else {
                        out[2 * i + 1] += down;
                    }
                }
            }
        }
    }

    pub fn apply_slice(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut cur = psi.to_vec();
        let mut next = vec![ZERO; cur.len()];
        for layer in &self.layers {
            self.apply_layer(layer, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    fn layer_matrix(&self, layer: &Layer) -> SparseMatrix {
        let b = &self.domain;
        let n = b.dim();
        let mut t = Vec::with_capacity(2 * n);
        match layer {
            Layer::Coin(field) => {
                for i in 0..b.num_sites() {
                    let c = field.at(b.site(i));
                    for r in 0..2 {
                        for s in 0..2 {
                            t.push((2 * i + r, 2 * i + s, c.m[r][s]));
                        }
                    }
                }
            }
            Layer::Shift { dir, part, gauge } => {
                let e = dir.unit();
                let one = Complex64::new(1.0, 0.0);
                for i in 0..b.num_sites() {
                    let x = b.site(i);
                    if *part != ShiftPart::Down {
                        if let Some(j) = b.site_index(x + e) {
                            let u = gauge.as_ref().map_or(one, |g| g.phase(x, *dir));
                            t.push((2 * j, 2 * i, u));
                        }
                    } else {
                        t.push((2 * i, 2 * i, one));
                    }
                    if *part != ShiftPart::Up {
                        if let Some(j) = b.site_index(x - e) {
                            let u = gauge.as_ref().map_or(one, |g| g.phase(x - e, *dir).conj());
                            t.push((2 * j + 1, 2 * i + 1, u));
                        }
                    } else {
                        t.push((2 * i + 1, 2 * i + 1, one));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(n, n, t)
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut m = SparseMatrix::identity(self.domain.dim());
        for layer in &self.layers {
            m = self.layer_matrix(layer).matmul(&m);
        }
        m
    }
}

/// Walk `S·C` on a one-dimensional chain with `C(x) = exp(i(Φx+θ)σ_axis)`.
#[derive(Clone, Debug)]
pub struct ChainWalk {
    kind: WalkKind,
    chain: Chain,
    flux: Flux,
    theta: f64,
    axis: Pauli,
}

impl ChainWalk {
    pub fn chain(&self) -> Chain {
        self.chain
    }

    pub fn coin(&self, x: i64) -> Coin {
        Coin::exp_pauli(self.flux.value() * x as f64 + self.theta, self.axis)
    }

    /// Returns `(target index, phase)` for moving a component at site index
    /// `i` one step in direction `sign`.
    fn hop(&self, i: usize, sign: i64) -> Option<(usize, Complex64)> {
        let len = self.chain.len as i64;
        let j = i as i64 + sign;
        match self.chain.closure {
            Closure::Open => (0..len).contains(&j).then_some((j as usize, Complex64::new(1.0, 0.0))),
            Closure::Periodic { twist } => {
                if j >= len {
                    Some(((j - len) as usize, Complex64::from_polar(1.0, twist)))
                } else if j < 0 {
                    Some(((j + len) as usize, Complex64::from_polar(1.0, -twist)))
                } else {
                    Some((j as usize, Complex64::new(1.0, 0.0)))
                }
            }
        }
    }

    pub fn apply_slice(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; psi.len()];
        for i in 0..self.chain.len {
            let c = self.coin(self.chain.site(i));
            let (u, d) = c.apply(psi[2 * i], psi[2 * i + 1]);
            if let Some((j, ph)) = self.hop(i, 1) {
                out[2 * j] += ph * u;
            }
            if let Some((j, ph)) = self.hop(i, -1) {
                out[2 * j + 1] += ph * d;
            }
        }
        out
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let n = self.chain.dim();
        let mut t = Vec::with_capacity(2 * n);
        for i in 0..self.chain.len {
            let c = self.coin(self.chain.site(i));
            for (spin, sign) in [(0usize, 1i64), (1, -1)] {
                if let Some((j, ph)) = self.hop(i, sign) {
                    for s in 0..2 {
                        t.push((2 * j + spin, 2 * i + s, ph * c.m[spin][s]));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(n, n, t)
    }
}

/// Where a state lives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Plane(LatticeBox),
    Chain(Chain),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Plane(b) => b.dim(),
            Domain::Chain(c) => c.dim(),
        }
    }
}

/// Amplitudes `ψ(x, s)` on a finite domain.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub domain: Domain,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(domain: Domain) -> Self {
        StateVector { domain, amps: vec![ZERO; domain.dim()] }
    }

    /// Point mass `|x, s>` on a planar box.
    pub fn point(b: LatticeBox, x: Site, s: Spin) -> Result<Self> {
        let mut v = StateVector::zeros(Domain::Plane(b));
        let i = b
            .state_index(x, s)
            .ok_or_else(|| Error::InvalidArgument(format!("site {x:?} outside the box")))?;
        v.amps[i] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn basis(domain: Domain, index: usize) -> Self {
        let mut v = StateVector::zeros(domain);
        v.amps[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitude at `(x, s)` of a planar state; zero off the box.
    pub fn at(&self, x: Site, s: Spin) -> Complex64 {
        match &self.domain {
            Domain::Plane(b) => b.state_index(x, s).map_or(ZERO, |i| self.amps[i]),
            Domain::Chain(_) => panic!("planar lookup on a chain state"),
        }
    }

    /// Sites carrying nonzero amplitude (planar states only).
    pub fn support(&self) -> Vec<Site> {
        let Domain::Plane(b) = self.domain else { return Vec::new() };
        (0..b.num_sites())
            .filter(|&i| self.amps[2 * i] != ZERO || self.amps[2 * i + 1] != ZERO)
            .map(|i| b.site(i))
            .collect()
    }
}

/// A one-step walk operator on a finite domain.
#[derive(Clone, Debug)]
pub enum WalkOperator {
    Planar(PlanarWalk),
    Chain(ChainWalk),
}

impl WalkOperator {
    pub fn kind(&self) -> WalkKind {
        match self {
            WalkOperator::Planar(w) => w.kind,
            WalkOperator::Chain(w) => w.kind,
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            WalkOperator::Planar(w) => Domain::Plane(w.domain),
            WalkOperator::Chain(w) => Domain::Chain(w.chain),
        }
    }

    pub fn dim(&self) -> usize {
        self.domain().dim()
    }

    /// True when amplitude can leave the domain, i.e. the raw operator is a
    /// non-unitary truncation.
    pub fn is_truncated(&self) -> bool {
        match self {
            WalkOperator::Planar(_) => true,
            WalkOperator::Chain(w) => w.chain.closure == Closure::Open,
        }
    }

    pub fn as_planar(&self) -> Option<&PlanarWalk> {
        match self {
            WalkOperator::Planar(w) => Some(w),
            WalkOperator::Chain(_) => None,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.domain != self.domain() {
            return Err(Error::DomainMismatch);
        }
        let amps = match self {
            WalkOperator::Planar(w) => w.apply_slice(&psi.amps),
            WalkOperator::Chain(w) => w.apply_slice(&psi.amps),
        };
        Ok(StateVector { domain: psi.domain, amps })
    }

    /// Applies the operator `t` times.
    pub fn apply_power(&self, psi: &StateVector, t: usize) -> Result<StateVector> {
        let mut cur = psi.clone();
        for _ in 0..t {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        match self {
            WalkOperator::Planar(w) => w.to_sparse(),
            WalkOperator::Chain(w) => w.to_sparse(),
        }
    }

    /// Dense assembly, refused above `cap`.
    pub fn matrix(&self, cap: usize) -> Result<Mat<Complex64>> {
        if self.dim() > cap {
            return Err(Error::DimensionCap { dim: self.dim(), cap });
        }
        self.to_sparse().to_dense(cap)
    }
}

/// The magnetic walk `diag(T1, T1*) C_H diag(T2, T2*) C_H` on a box.
pub fn build_magnetic_walk(g: &GaugeField, domain: LatticeBox) -> WalkOperator {
    let h = CoinField::Uniform(Coin::hadamard());
    let layers = vec![
        Layer::Coin(h.clone()),
        Layer::Shift { dir: Direction::Two, part: ShiftPart::Full, gauge: Some(g.clone()) },
        Layer::Coin(h),
        Layer::Shift { dir: Direction::One, part: ShiftPart::Full, gauge: Some(g.clone()) },
    ];
    WalkOperator::Planar(PlanarWalk::new(WalkKind::Magnetic2d, domain, layers))
}

/// The walk `S1 C1 S2 C2` with plain shifts.
pub fn build_coin_walk(coins: &WalkCoins, domain: LatticeBox) -> WalkOperator {
    let layers = vec![
        Layer::Coin(coins.c2.clone()),
        Layer::Shift { dir: Direction::Two, part: ShiftPart::Full, gauge: None },
        Layer::Coin(coins.c1.clone()),
        Layer::Shift { dir: Direction::One, part: ShiftPart::Full, gauge: None },
    ];
    WalkOperator::Planar(PlanarWalk::new(WalkKind::Coined2d, domain, layers))
}

fn amo_kind(axis: Pauli) -> Result<WalkKind> {
    match axis {
        Pauli::X => Ok(WalkKind::Amo1dSigma1),
        Pauli::Y => Ok(WalkKind::Amo1dSigma2),
        Pauli::Z => Err(Error::InvalidArgument("almost-Mathieu coins rotate about σ1 or σ2".into())),
    }
}

/// Unitary almost-Mathieu walk on the open chain `[−h, h]`.
pub fn build_amo_1d(flux: Flux, theta: f64, axis: Pauli, half_width: usize) -> Result<WalkOperator> {
    if half_width < 1 {
        return Err(Error::InvalidArgument("half-width must be at least 1".into()));
    }
    build_amo_on(flux, theta, axis, Chain::centered(half_width))
}

/// Almost-Mathieu walk on an arbitrary chain (e.g. a twisted ring).
pub fn build_amo_on(flux: Flux, theta: f64, axis: Pauli, chain: Chain) -> Result<WalkOperator> {
    let kind = amo_kind(axis)?;
    Ok(WalkOperator::Chain(ChainWalk { kind, chain, flux, theta, axis }))
}

/// `W^t |x, s>` for the full-space symmetric-gauge magnetic walk, computed
/// on a window of half-width `t + 1` around `x`. Every path moves each
/// coordinate by exactly one per step, so nothing reaches the window edge.
pub fn propagate_point(g: &GaugeField, t: usize, x: Site, s: Spin) -> StateVector {
    let window = LatticeBox::centered(x, t + 1);
    let w = build_magnetic_walk(g, window);
    let psi = StateVector::point(window, x, s).expect("centre lies in its window");
    w.apply_power(&psi, t).expect("same domain")
}

/// Exact `<k, s'| W^t |l, s>` of the full-space walk.
pub fn matrix_element(g: &GaugeField, t: usize, k: Site, s_out: Spin, l: Site, s_in: Spin) -> Complex64 {
    if (k - l).linf() > t as i64 {
        return ZERO;
    }
    propagate_point(g, t, l, s_in).at(k, s_out)
}

/// `<x, s| W_Φ^t |x, s>` in the symmetric gauge.
pub fn diagonal_element(flux: Flux, t: usize, x: Site, s: Spin) -> Complex64 {
    let g = GaugeField::symmetric(flux);
    propagate_point(&g, t, x, s).at(x, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::CoinClass;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zero_flux_box(l: usize) -> (GaugeField, LatticeBox) {
        (GaugeField::symmetric(Flux::zero()), LatticeBox::new(l))
    }

    #[test]
    fn point_mass_at_zero_flux() {
        // S1 C_H S2 C_H |0,+>: C_H gives (|+> + |->)/√2; S2 sends + to e2 and
        // − to −e2; C_H then S1 split each into the four diagonal neighbours.
        let (g, b) = zero_flux_box(3);
        let w = build_magnetic_walk(&g, b);
        let psi = StateVector::point(b, Site::ORIGIN, Spin::Up).unwrap();
        let out = w.apply(&psi).unwrap();
        let h = 0.5;
        let expect = [
            (Site::new(1, 1), Spin::Up, c(h, 0.0)),
            (Site::new(-1, 1), Spin::Down, c(h, 0.0)),
            (Site::new(1, -1), Spin::Up, c(h, 0.0)),
            (Site::new(-1, -1), Spin::Down, c(-h, 0.0)),
        ];
        for (x, s, a) in expect {
            assert!((out.at(x, s) - a).norm() < 1e-15, "{x:?} {s:?}");
        }
        assert!((out.norm() - 1.0).abs() < 1e-14);
        let mut support = out.support();
        support.sort();
        assert_eq!(support, vec![Site::new(-1, -1), Site::new(-1, 1), Site::new(1, -1), Site::new(1, 1)]);
    }

    #[test]
    fn one_step_never_returns() {
        let b = LatticeBox::new(3);
        for f in [Flux::zero(), Flux::new(1, 3).unwrap(), Flux::new(5, 13).unwrap()] {
            let w = build_magnetic_walk(&GaugeField::symmetric(f), b);
            for s in Spin::BOTH {
                let out = w.apply(&StateVector::point(b, Site::ORIGIN, s).unwrap()).unwrap();
                for s2 in Spin::BOTH {
                    assert_eq!(out.at(Site::ORIGIN, s2), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn zero_flux_equals_plain_hadamard_walk() {
        let (g, b) = zero_flux_box(3);
        let a = build_magnetic_walk(&g, b).to_sparse().to_dense(DENSE_CAP).unwrap();
        let h = build_coin_walk(&WalkCoins::hadamard(), b).to_sparse().to_dense(DENSE_CAP).unwrap();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                assert!((a[(i, j)] - h[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn quasiperiodic_coin_examples() {
        let f = Flux::new(3, 7).unwrap();
        let qc = quasiperiodic_coins(f);
        assert!(qc.c1.at(Site::new(9, 0)).max_deviation(&Coin::hadamard()) < 1e-15);
        let pi = Flux::new(1, 2).unwrap();
        let c2 = quasiperiodic_coins(pi).c2.at(Site::new(1, 4));
        let expect = Coin::diag(Complex64::from_polar(1.0, PI / 2.0), Complex64::from_polar(1.0, -PI / 2.0))
            * Coin::hadamard();
        assert!(c2.max_deviation(&expect) < 1e-15);
    }

    #[test]
    fn quasiperiodic_coins_are_generic() {
        for f in Flux::enumerate(7) {
            let qc = quasiperiodic_coins(f);
            for x in LatticeBox::new(6).sites() {
                assert_eq!(qc.c1.at(x).classify().unwrap(), CoinClass::Generic);
                assert_eq!(qc.c2.at(x).classify().unwrap(), CoinClass::Generic);
            }
        }
    }

    #[test]
    fn coin_form_matches_symmetric_gauge_walk() {
        let b = LatticeBox::new(6);
        for f in [Flux::new(1, 5).unwrap(), Flux::new(2, 7).unwrap(), Flux::new(1, 2).unwrap()] {
            let a = build_magnetic_walk(&GaugeField::symmetric(f), b).to_sparse();
            let q = build_coin_walk(&quasiperiodic_coins(f), b).to_sparse();
            let mut dev: f64 = 0.0;
            for (r, col, v) in a.triplets() {
                dev = dev.max((v - q.get(r, col)).norm());
            }
            for (r, col, v) in q.triplets() {
                dev = dev.max((v - a.get(r, col)).norm());
            }
            assert!(dev <= 1e-12, "{f}: {dev}");
        }
    }

    #[test]
    fn apply_agrees_with_assembled_matrix() {
        let b = LatticeBox::new(4);
        let w = build_magnetic_walk(&GaugeField::symmetric(Flux::new(2, 5).unwrap()), b);
        let m = w.matrix(DENSE_CAP).unwrap();
        let sp = w.to_sparse();
        for j in 0..b.dim() {
            let col = w.apply(&StateVector::basis(w.domain(), j)).unwrap();
            for i in 0..b.dim() {
                assert!((col.amps[i] - m[(i, j)]).norm() <= 1e-13);
            }
        }
        for r in 0..sp.nrows() {
            assert!(sp.row_nonzeros(r) <= 4);
        }
    }

    #[test]
    fn apply_rejects_foreign_state() {
        let w = build_magnetic_walk(&GaugeField::symmetric(Flux::zero()), LatticeBox::new(2));
        let psi = StateVector::zeros(Domain::Plane(LatticeBox::new(3)));
        assert!(matches!(w.apply(&psi), Err(Error::DomainMismatch)));
        let zero = StateVector::zeros(w.domain());
        assert!(w.apply(&zero).unwrap().amps.iter().all(|a| *a == c(0.0, 0.0)));
    }

    #[test]
    fn dense_cap_enforced() {
        let w = build_magnetic_walk(&GaugeField::symmetric(Flux::zero()), LatticeBox::new(5));
        assert!(matches!(w.matrix(100), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn interior_norm_is_preserved() {
        let b = LatticeBox::new(6);
        let w = build_magnetic_walk(&GaugeField::symmetric(Flux::new(1, 3).unwrap()), b);
        let mut psi = StateVector::zeros(w.domain());
        for x in LatticeBox::new(3).sites() {
            let i = b.state_index(x, Spin::Up).unwrap();
            psi.amps[i] = c((x.x1 as f64).sin(), (x.x2 as f64 * 0.3).cos());
            psi.amps[i + 1] = c(0.2, -0.1 * x.x1 as f64);
        }
        let out = w.apply(&psi).unwrap();
        assert!((out.norm() - psi.norm()).abs() < 1e-12);
    }

    #[test]
    fn column_parity_anticommutes() {
        let b = LatticeBox::new(6);
        let w = build_magnetic_walk(&GaugeField::symmetric(Flux::new(2, 5).unwrap()), b);
        let mut psi = StateVector::zeros(w.domain());
        for x in LatticeBox::new(3).sites() {
            let i = b.state_index(x, Spin::Up).unwrap();
            psi.amps[i] = c(0.3 * x.x1 as f64, 1.0 + 0.1 * x.x2 as f64);
            psi.amps[i + 1] = c((x.x1 * x.x2) as f64 * 0.05, -0.4);
        }
        let parity = |psi: &StateVector, odd: fn(Site) -> bool| {
            let mut out = psi.clone();
            for i in 0..out.amps.len() {
                if odd(b.state(i).0) {
                    out.amps[i] = -out.amps[i];
                }
            }
            out
        };
        let column: fn(Site) -> bool = |x| x.x1.rem_euclid(2) == 1;
        let checker: fn(Site) -> bool = |x| (x.x1 + x.x2).rem_euclid(2) == 1;
        let wj = w.apply(&parity(&psi, column)).unwrap();
        let jw = parity(&w.apply(&psi).unwrap(), column);
        assert!(wj.amps.iter().zip(&jw.amps).all(|(a, b)| (a + b).norm() < 1e-14));
        let wj = w.apply(&parity(&psi, checker)).unwrap();
        let jw = parity(&w.apply(&psi).unwrap(), checker);
        assert!(wj.amps.iter().zip(&jw.amps).all(|(a, b)| (a - b).norm() < 1e-14));
    }

    #[test]
    fn amo_zero_flux_is_free_shift() {
        let f = Flux::zero();
        let w = build_amo_on(f, 0.0, Pauli::Y, Chain::ring(5, 0.0)).unwrap();
        let WalkOperator::Chain(cw) = &w else { unreachable!() };
        for x in 0..5 {
            assert!(cw.coin(x).max_deviation(&Coin::identity()) < 1e-15);
        }
        let w = build_amo_1d(f, PI / 2.0, Pauli::Y, 3).unwrap();
        let WalkOperator::Chain(cw) = &w else { unreachable!() };
        let i_sigma2 = Coin { m: [[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]] };
        assert!(cw.coin(2).max_deviation(&i_sigma2) < 1e-15);
        assert!(build_amo_1d(f, 0.0, Pauli::Z, 3).is_err());
        assert!(build_amo_1d(f, 0.0, Pauli::X, 0).is_err());
    }

    #[test]
    fn ring_is_unitary_and_open_chain_is_not() {
        let f = Flux::new(2, 5).unwrap();
        let ring = build_amo_on(f, 0.3, Pauli::X, Chain::ring(5, 0.7)).unwrap();
        assert!(!ring.is_truncated());
        assert!(ring.to_sparse().unitarity_deviation() < 1e-14);
        let open = build_amo_1d(f, 0.3, Pauli::X, 4).unwrap();
        assert!(open.is_truncated());
        assert!(open.to_sparse().unitarity_deviation() > 0.5);
    }

    #[test]
    fn diagonal_element_small_times() {
        for f in [Flux::zero(), Flux::new(3, 8).unwrap()] {
            for x in [Site::ORIGIN, Site::new(7, -3)] {
                for s in Spin::BOTH {
                    assert!((diagonal_element(f, 0, x, s) - c(1.0, 0.0)).norm() < 1e-15);
                    assert_eq!(diagonal_element(f, 1, x, s), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn diagonal_element_matches_dense_square() {
        let b = LatticeBox::new(3);
        let m = build_magnetic_walk(&GaugeField::symmetric(Flux::zero()), b).matrix(DENSE_CAP).unwrap();
        let m2 = &m * &m;
        for s in Spin::BOTH {
            let i = b.state_index(Site::ORIGIN, s).unwrap();
            let d = diagonal_element(Flux::zero(), 2, Site::ORIGIN, s);
            assert!((d - m2[(i, i)]).norm() < 1e-14);
        }
    }
}
