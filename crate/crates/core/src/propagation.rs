//! Reconstruction of solutions of `Wψ = zψ` inside `Λ_L` from their values
//! on a thin determining set, strip by strip from left to right.
//!
//! For `W = S1 C1 S2 C2` the component `(Wψ)(x, +)` involves `ψ` at
//! `x − e1 ± e2` only, and `(Wψ)(y, −)` involves `ψ` at `y + e1 ± e2` only.
//! On each strip `x1 = c` the first relation yields `ψ(·, +)` from strip
//! `c − 1`; the second is then solved for `ψ(x, −)` one site at a time,
//! either from the top (`Downward`, determining set `D`) or from the bottom
//! (`Upward`, set `D′`).

use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::coin::Coin;
use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, Site, Spin};
use crate::restriction::boundary_sets;
use crate::walk::{build_coin_walk, Domain, StateVector, WalkCoins};

/// Coin entries used as divisors must exceed this in modulus.
pub const DIVISOR_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sweep {
    /// Needs coins that are nowhere completely diagonal.
    Downward,
    /// Needs coins that are nowhere completely off-diagonal.
    Upward,
}

/// The determining set of a sweep, in `Λ_L` enumeration order.
pub fn determining_set(l: usize, sweep: Sweep) -> Result<Vec<Site>> {
    let b = boundary_sets(l)?;
    Ok(match sweep {
        Sweep::Downward => b.determining,
        Sweep::Upward => b.determining_upward,
    })
}

struct Field<'a> {
    coins: &'a WalkCoins,
}

impl Field<'_> {
    fn c1(&self, x: Site) -> Coin {
        self.coins.c1.at(x)
    }
    fn c2(&self, x: Site) -> Coin {
        self.coins.c2.at(x)
    }
}

fn divide(num: Complex64, den: Complex64, site: Site) -> Result<Complex64> {
    if den.norm() < DIVISOR_TOL {
        return Err(Error::NearDegenerate { site, value: den.norm() });
    }
    Ok(num / den)
}

/// Extends boundary data to all of `Λ_L`.
///
/// `boundary` holds `(ψ(x,+), ψ(x,−))` for each site of the determining set
/// in the order returned by [`determining_set`]. `z` should be a unit complex
/// number but any nonzero value is accepted.
pub fn propagate_eigenfunction(
    boundary: &[Complex64],
    z: Complex64,
    l: usize,
    coins: &WalkCoins,
    sweep: Sweep,
) -> Result<StateVector> {
    let set = determining_set(l, sweep)?;
    if boundary.len() != 2 * set.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} boundary values, got {}",
            2 * set.len(),
            boundary.len()
        )));
    }
    if z.norm() < DIVISOR_TOL {
        return Err(Error::InvalidArgument("z must be nonzero".into()));
    }
    let lam = LatticeBox::new(l);
    let mut psi = StateVector::zeros(Domain::Plane(lam));
    for (i, &x) in set.iter().enumerate() {
        for s in Spin::BOTH {
            psi.amps[lam.state_index(x, s).unwrap()] = boundary[2 * i + s.index()];
        }
    }
    let f = Field { coins };
    let li = l as i64;
    let at = |psi: &StateVector, x: Site, s: Spin| psi.at(x, s);
    let up = Spin::Up;
    let down = Spin::Down;
    let e1 = Site::new(1, 0);
    let e2 = Site::new(0, 1);
    let (lo, hi) = match sweep {
        Sweep::Downward => (-li + 1, li - 2),
        Sweep::Upward => (-li + 2, li - 1),
    };
    for c in -li + 1..=li {
        // (Wψ)(x,+) = zψ(x,+) with the right side supported on strip c − 1
        for x2 in lo..=hi {
            let x = Site::new(c, x2);
            let a = x - e1 - e2;
            let b = x - e1 + e2;
            let c1 = f.c1(x - e1);
            let ca = f.c2(a);
            let cb = f.c2(b);
            let wpsi = c1.m[0][0] * (ca.m[0][0] * at(&psi, a, up) + ca.m[0][1] * at(&psi, a, down))
                + c1.m[0][1] * (cb.m[1][0] * at(&psi, b, up) + cb.m[1][1] * at(&psi, b, down));
            psi.amps[lam.state_index(x, up).unwrap()] = wpsi / z;
        }
        // (Wψ)(y,−) = zψ(y,−) solved for ψ(x,−)
        let rows: Vec<i64> = match sweep {
            Sweep::Downward => (lo..=hi).rev().collect(),
            Sweep::Upward => (lo..=hi).collect(),
        };
        for x2 in rows {
            let x = Site::new(c, x2);
            let value = match sweep {
                Sweep::Downward => {
                    let y = x - e1 + e2;
                    let top = x + e2 * 2;
                    let cm = f.c1(x + e2);
                    let ct = f.c2(top);
                    let cx = f.c2(x);
                    let far = cm.m[1][1] * (ct.m[1][0] * at(&psi, top, up) + ct.m[1][1] * at(&psi, top, down));
                    let inner = divide(z * at(&psi, y, down) - far, cm.m[1][0], x + e2)?;
                    divide(inner - cx.m[0][0] * at(&psi, x, up), cx.m[0][1], x)?
                }
                Sweep::Upward => {
                    let y = x - e1 - e2;
                    let bottom = x - e2 * 2;
                    let cm = f.c1(x - e2);
                    let cbt = f.c2(bottom);
                    let cx = f.c2(x);
                    let far =
                        cm.m[1][0] * (cbt.m[0][0] * at(&psi, bottom, up) + cbt.m[0][1] * at(&psi, bottom, down));
                    let inner = divide(z * at(&psi, y, down) - far, cm.m[1][1], x - e2)?;
                    divide(inner - cx.m[1][0] * at(&psi, x, up), cx.m[1][1], x)?
                }
            };
            psi.amps[lam.state_index(x, down).unwrap()] = value;
        }
    }
    Ok(psi)
}

/// The components `(site, spin)` of `Wψ = zψ` that the sweep enforces.
pub fn enforced_components(l: usize, sweep: Sweep) -> Vec<(Site, Spin)> {
    let li = l as i64;
    let (lo, hi, dy) = match sweep {
        Sweep::Downward => (-li + 1, li - 2, 1),
        Sweep::Upward => (-li + 2, li - 1, -1),
    };
    let mut out = Vec::new();
    for c in -li + 1..=li {
        for x2 in lo..=hi {
            out.push((Site::new(c, x2), Spin::Up));
            out.push((Site::new(c - 1, x2 + dy), Spin::Down));
        }
    }
    out
}

/// `max |(Wψ)(x,s) − zψ(x,s)|` over the enforced components.
pub fn eigen_residual(psi: &StateVector, z: Complex64, coins: &WalkCoins, sweep: Sweep) -> Result<f64> {
    let Domain::Plane(lam) = psi.domain else {
        return Err(Error::DomainMismatch);
    };
    let w = build_coin_walk(coins, lam);
    let wpsi = w.apply(psi)?;
    Ok(enforced_components(lam.half_width(), sweep)
        .into_iter()
        .map(|(x, s)| (wpsi.at(x, s) - z * psi.at(x, s)).norm())
        .fold(0.0, f64::max))
}

/// Numerical rank of the linear map boundary data ↦ ψ.
pub fn propagation_rank(z: Complex64, l: usize, coins: &WalkCoins, sweep: Sweep) -> Result<usize> {
    let nb = 2 * determining_set(l, sweep)?.len();
    let n = LatticeBox::new(l).dim();
    let mut m = Mat::<Complex64>::zeros(n, nb);
    for j in 0..nb {
        let mut data = vec![Complex64::new(0.0, 0.0); nb];
        data[j] = Complex64::new(1.0, 0.0);
        let psi = propagate_eigenfunction(&data, z, l, coins, sweep)?;
        for (i, a) in psi.amps.iter().enumerate() {
            m[(i, j)] = *a;
        }
    }
    let sv = m.singular_values().map_err(|e| Error::Solver(format!("{e:?}")))?;
    let top = sv.iter().copied().fold(0.0, f64::max);
    let tol = top * f64::EPSILON * n as f64;
    Ok(sv.iter().filter(|&&s| s > tol).count())
}
