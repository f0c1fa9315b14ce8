//! Unitary finite-volume restriction of the magnetic walk.
//!
//! Inserting `σ1` coins on the contour `ΔΛ` between the half shifts
//! `S_α↓` and `S_α↑` reflects every path that would cross it, which makes
//! the compression `W_L = P_L W_d P_L*` to `Λ_L = [−L, L]^2` exactly unitary.

use std::collections::HashSet;

use num_complex::Complex64;

use crate::coin::Coin;
use crate::error::{Error, Result};
use crate::gauge::GaugeField;
use crate::lattice::{Direction, LatticeBox, Site};
use crate::sparse::SparseMatrix;
use crate::walk::{build_magnetic_walk, CoinField, Layer, PlanarWalk, ShiftPart, WalkCoins, WalkKind, WalkOperator};

/// Tolerance on `‖W_L* W_L − 1‖_max`.
pub const RESTRICTION_UNITARY_TOL: f64 = 1e-12;

/// Extra sites around `Λ_L` in the box on which `W_d` is built.
pub const WORKING_MARGIN: usize = 3;

/// Whether `x` lies on `ΔΛ`, the perimeter of `[−L−1, L]^2`.
pub fn in_decoupling_ring(x: Site, l: usize) -> bool {
    let l = l as i64;
    let inside = |v: i64| (-l - 1..=l).contains(&v);
    let edge = |v: i64| v == -l - 1 || v == l;
    inside(x.x1) && inside(x.x2) && (edge(x.x1) || edge(x.x2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySets {
    pub l: usize,
    /// Outer ring of `Λ_L`.
    pub boundary: Vec<Site>,
    /// Perimeter of `[−L−1, L]^2`.
    pub delta: Vec<Site>,
    /// Sites within lattice (ℓ1) distance 2 of `ΔΛ`.
    pub delta2: Vec<Site>,
    /// Column `x1 = −L` and rows `x2 ∈ {−L, L−1, L}`.
    pub determining: Vec<Site>,
    /// Column `x1 = −L` and rows `x2 ∈ {−L, −L+1, L}`.
    pub determining_upward: Vec<Site>,
}

pub fn boundary_sets(l: usize) -> Result<BoundarySets> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!("boundary sets need L >= 2, got {l}")));
    }
    let lam = LatticeBox::new(l);
    let li = l as i64;
    let boundary = lam.sites().filter(|&x| lam.depth(x) == 0).collect();
    let big = LatticeBox::new(l + 2);
    let delta: Vec<Site> = big.sites().filter(|&x| in_decoupling_ring(x, l)).collect();
    let ring: HashSet<Site> = delta.iter().copied().collect();
    let delta2 = LatticeBox::new(l + 3)
        .sites()
        .filter(|&x| {
            (-2i64..=2).any(|a| {
                (-2i64..=2)
                    .filter(|b| a.abs() + b.abs() <= 2)
                    .any(|b| ring.contains(&(x + Site::new(a, b))))
            })
        })
        .collect();
    let pick = |rows: [i64; 3]| lam.sites().filter(|x| x.x1 == -li || rows.contains(&x.x2)).collect::<Vec<_>>();
    Ok(BoundarySets {
        l,
        boundary,
        delta,
        delta2,
        determining: pick([-li, li - 1, li]),
        determining_upward: pick([-li, -li + 1, li]),
    })
}

fn decoupled_layers(c1: CoinField, c2: CoinField, l: usize, gauge: Option<&GaugeField>, with_ring: bool) -> Vec<Layer> {
    let cd = if with_ring {
        CoinField::Decoupling { half_width: l }
    } else {
        CoinField::Uniform(Coin::identity())
    };
    let shift = |dir, part| Layer::Shift { dir, part, gauge: gauge.cloned() };
    vec![
        Layer::Coin(c2),
        shift(Direction::Two, ShiftPart::Down),
        Layer::Coin(cd.clone()),
        shift(Direction::Two, ShiftPart::Up),
        Layer::Coin(c1),
        shift(Direction::One, ShiftPart::Down),
        Layer::Coin(cd),
        shift(Direction::One, ShiftPart::Up),
    ]
}

/// `W_d = (S1↑ C_d S1↓) C_H (S2↑ C_d S2↓) C_H` with magnetic shifts in
/// gauge `g`, on a box of half-width `L + 3`.
pub fn build_decoupled(g: &GaugeField, l: usize) -> Result<WalkOperator> {
    build_decoupled_with(g, l, true)
}

/// [`build_decoupled`] with the decoupling coin optionally replaced by the
/// identity (a deliberately broken walk used by the fault-injection check).
pub fn build_decoupled_with(g: &GaugeField, l: usize, with_ring: bool) -> Result<WalkOperator> {
    check_l(l)?;
    let h = CoinField::Uniform(Coin::hadamard());
    let layers = decoupled_layers(h.clone(), h, l, Some(g), with_ring);
    let domain = LatticeBox::new(l + WORKING_MARGIN);
    Ok(WalkOperator::Planar(PlanarWalk::new(WalkKind::Decoupled2d, domain, layers)))
}

/// Decoupled version of the plain-shift walk `S1 C1 S2 C2`.
pub fn build_decoupled_coin_form(coins: &WalkCoins, l: usize) -> Result<WalkOperator> {
    check_l(l)?;
    let layers = decoupled_layers(coins.c1.clone(), coins.c2.clone(), l, None, true);
    let domain = LatticeBox::new(l + WORKING_MARGIN);
    Ok(WalkOperator::Planar(PlanarWalk::new(WalkKind::Decoupled2d, domain, layers)))
}

fn check_l(l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!("decoupling needs L >= 2, got {l}")));
    }
    Ok(())
}

/// Flat indices of the states of `Λ_L` inside `domain`, in `Λ_L` order.
pub fn inner_indices(domain: LatticeBox, l: usize) -> Vec<usize> {
    let inner = LatticeBox::new(l);
    (0..inner.dim())
        .map(|i| {
            let (x, s) = inner.state(i);
            domain.state_index(x, s).expect("Λ_L lies inside the working box")
        })
        .collect()
}

/// `W_L = P_L W_d P_L*`, with hard failure when the result is not unitary.
pub fn restrict(w_d: &WalkOperator, l: usize) -> Result<SparseMatrix> {
    let planar = w_d
        .as_planar()
        .filter(|_| w_d.kind() == WalkKind::Decoupled2d)
        .ok_or_else(|| Error::InvalidArgument("restriction expects a decoupled planar walk".into()))?;
    let domain = planar.domain();
    if domain.half_width() < l + 1 || domain.center() != Site::ORIGIN {
        return Err(Error::InvalidArgument(format!("working box too small for L = {l}")));
    }
    let idx = inner_indices(domain, l);
    let m = w_d.to_sparse().submatrix(&idx, &idx);
    let dev = m.unitarity_deviation();
    if dev > RESTRICTION_UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: dev, tolerance: RESTRICTION_UNITARY_TOL });
    }
    Ok(m)
}

/// Convenience: `W_L` for gauge `g`.
pub fn restricted_walk(g: &GaugeField, l: usize) -> Result<SparseMatrix> {
    restrict(&build_decoupled(g, l)?, l)
}

/// Sites `x` such that some matrix element of `W − W_d` in row or column
/// `(x, s)` is nonzero, evaluated on the working box.
pub fn difference_support(g: &GaugeField, l: usize) -> Result<Vec<Site>> {
    let wd = build_decoupled(g, l)?;
    let domain = wd.as_planar().expect("planar").domain();
    let w = build_magnetic_walk(g, domain).to_sparse();
    let wd = wd.to_sparse();
    let mut sites = HashSet::new();
    let mut mark = |r: usize, c: usize| {
        sites.insert(domain.state(r).0);
        sites.insert(domain.state(c).0);
    };
    for (r, c, v) in w.triplets() {
        if v != wd.get(r, c) {
            mark(r, c);
        }
    }
    for (r, c, v) in wd.triplets() {
        if v != w.get(r, c) && v != Complex64::new(0.0, 0.0) {
            mark(r, c);
        }
    }
    let mut out: Vec<Site> = sites.into_iter().collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::Flux;
    use crate::gauge::GaugeTransform;
    use crate::lattice::Spin;
    use crate::walk::{quasiperiodic_coins, StateVector, DENSE_CAP};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn boundary_set_sizes() {
        for l in 2..9 {
            let b = boundary_sets(l).unwrap();
            assert_eq!(b.delta.len(), 8 * l + 4);
            assert_eq!(b.determining.len(), 8 * l + 1);
            assert_eq!(b.determining_upward.len(), 8 * l + 1);
            assert_eq!(b.boundary.len(), 8 * l);
            let lam = LatticeBox::new(l);
            assert!(b.boundary.iter().all(|&x| lam.contains(x)));
            assert!(b.delta.iter().any(|&x| !lam.contains(x)));
            assert!(b.delta.iter().all(|x| b.delta2.contains(x)));
        }
        assert_eq!(boundary_sets(5).unwrap().delta.len(), 44);
        assert_eq!(boundary_sets(5).unwrap().determining.len(), 41);
        assert!(boundary_sets(1).is_err());
    }

    #[test]
    fn restriction_is_unitary() {
        for (p, q) in [(0, 1), (2, 5), (3, 7)] {
            let g = GaugeField::symmetric(Flux::new(p, q).unwrap());
            let m = restricted_walk(&g, 4).unwrap();
            assert_eq!(m.nrows(), 162);
            assert!(m.unitarity_deviation() <= 1e-12);
        }
    }

    #[test]
    fn missing_ring_breaks_unitarity() {
        let g = GaugeField::symmetric(Flux::new(1, 3).unwrap());
        let w = build_decoupled_with(&g, 3, false).unwrap();
        assert!(matches!(restrict(&w, 3), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn difference_lives_near_the_ring() {
        let g = GaugeField::symmetric(Flux::new(2, 7).unwrap());
        let sets = boundary_sets(6).unwrap();
        let support = difference_support(&g, 6).unwrap();
        assert!(!support.is_empty());
        let near: HashSet<Site> = sets.delta2.iter().copied().collect();
        for x in support {
            assert!(near.contains(&x), "{x:?}");
        }
    }

    #[test]
    fn deep_point_mass_unaffected() {
        let l = 6;
        let g = GaugeField::symmetric(Flux::new(1, 4).unwrap());
        let wd = build_decoupled(&g, l).unwrap();
        let domain = wd.as_planar().unwrap().domain();
        let w = build_magnetic_walk(&g, domain);
        for s in Spin::BOTH {
            let psi = StateVector::point(domain, Site::new(-1, 0), s).unwrap();
            assert_eq!(w.apply(&psi).unwrap(), wd.apply(&psi).unwrap());
        }
    }

    #[test]
    fn both_builder_forms_agree_at_zero_flux() {
        let g = GaugeField::symmetric(Flux::zero());
        let a = build_decoupled(&g, 4).unwrap().matrix(DENSE_CAP).unwrap();
        let b = build_decoupled_coin_form(&quasiperiodic_coins(Flux::zero()), 4).unwrap().matrix(DENSE_CAP).unwrap();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                assert!((a[(i, j)] - b[(i, j)]).norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn gauge_transform_is_a_diagonal_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = 3;
        let f = Flux::new(2, 5).unwrap();
        let t = GaugeTransform::random(LatticeBox::new(l + 4), &mut rng);
        let base = restricted_walk(&GaugeField::symmetric(f), l).unwrap();
        let moved = restricted_walk(&GaugeField::symmetric(f).transformed(t.clone()), l).unwrap();
        let lam = LatticeBox::new(l);
        for (r, c, v) in base.triplets() {
            let g = t.phase(lam.state(r).0) * t.phase(lam.state(c).0).conj();
            assert!((moved.get(r, c) - g * v).norm() < 1e-13);
        }
    }
}
