//! Local 2×2 coin unitaries.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const UNITARY_TOL: f64 = 1e-12;
const ZERO_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Rotation axis in spin space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// A 2×2 unitary `c_{ij}`, rows and columns ordered (up, down).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coin {
    pub m: [[Complex64; 2]; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoinClass {
    Diagonal,
    OffDiagonal,
    Generic,
}

impl Coin {
    /// Checked constructor.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let c = Coin { m };
        let dev = c.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev, tolerance: UNITARY_TOL });
        }
        Ok(c)
    }

    pub const fn identity() -> Self {
        Coin { m: [[ONE, ZERO], [ZERO, ONE]] }
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Coin { m: [[h, h], [h, -h]] }
    }

    pub fn pauli(axis: Pauli) -> Self {
        match axis {
            Pauli::X => Coin { m: [[ZERO, ONE], [ONE, ZERO]] },
            Pauli::Y => Coin { m: [[ZERO, -I], [I, ZERO]] },
            Pauli::Z => Coin { m: [[ONE, ZERO], [ZERO, -ONE]] },
        }
    }

    /// `exp(i·angle·σ_axis) = cos(angle) 1 + i sin(angle) σ_axis`.
    pub fn exp_pauli(angle: f64, axis: Pauli) -> Self {
        let (s, c) = angle.sin_cos();
        let cos = Complex64::new(c, 0.0);
        match axis {
            Pauli::X => Coin { m: [[cos, I * s], [I * s, cos]] },
            Pauli::Y => Coin { m: [[cos, Complex64::new(s, 0.0)], [Complex64::new(-s, 0.0), cos]] },
            Pauli::Z => Coin {
                m: [[Complex64::new(c, s), ZERO], [ZERO, Complex64::new(c, -s)]],
            },
        }
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Coin { m: [[a, ZERO], [ZERO, b]] }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Coin { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    pub fn conj(&self) -> Self {
        let m = &self.m;
        Coin { m: [[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]] }
    }

    #[inline]
    pub fn apply(&self, up: Complex64, down: Complex64) -> (Complex64, Complex64) {
        (self.m[0][0] * up + self.m[0][1] * down, self.m[1][0] * up + self.m[1][1] * down)
    }

    /// Max-entry deviation of `C*C` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { ONE } else { ZERO };
                dev = dev.max((p.m[i][j] - target).norm());
            }
        }
        dev
    }

    pub fn max_deviation(&self, other: &Coin) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }

    pub fn classify(&self) -> Result<CoinClass> {
        let dev = self.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev, tolerance: UNITARY_TOL });
        }
        let m = &self.m;
        if m[0][1].norm() <= ZERO_TOL && m[1][0].norm() <= ZERO_TOL {
            Ok(CoinClass::Diagonal)
        } else if m[0][0].norm() <= ZERO_TOL && m[1][1].norm() <= ZERO_TOL {
            Ok(CoinClass::OffDiagonal)
        } else {
            Ok(CoinClass::Generic)
        }
    }
}

impl Mul for Coin {
    type Output = Coin;
    fn mul(self, o: Coin) -> Coin {
        let a = &self.m;
        let b = &o.m;
        let mut m = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Coin { m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        assert_eq!(Coin::hadamard().classify().unwrap(), CoinClass::Generic);
        assert_eq!(Coin::identity().classify().unwrap(), CoinClass::Diagonal);
        assert_eq!(Coin::pauli(Pauli::X).classify().unwrap(), CoinClass::OffDiagonal);
        assert_eq!(Coin::pauli(Pauli::Z).classify().unwrap(), CoinClass::Diagonal);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = [[ONE, ONE], [ZERO, ONE]];
        assert!(Coin::new(m).is_err());
        assert!(Coin { m }.classify().is_err());
    }

    #[test]
    fn hadamard_is_an_involution() {
        let h = Coin::hadamard();
        assert!((h * h).max_deviation(&Coin::identity()) < 1e-15);
    }

    #[test]
    fn exp_pauli_matches_series() {
        for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
            let a = 0.37;
            let s = Coin::pauli(axis);
            // truncated power series of exp(i a σ)
            let mut term = Coin::identity();
            let mut sum = Coin::identity();
            for k in 1..30 {
                let f = I * (a / k as f64);
                term = term * s;
                let mut t = term;
                for row in t.m.iter_mut() {
                    for e in row.iter_mut() {
                        *e *= f;
                    }
                }
                term = t;
                for i in 0..2 {
                    for j in 0..2 {
                        sum.m[i][j] += term.m[i][j];
                    }
                }
            }
            assert!(sum.max_deviation(&Coin::exp_pauli(a, axis)) < 1e-14, "{axis:?}");
        }
    }

    #[test]
    fn sigma_y_rotation_matches_display_form() {
        // exp(iασ2) = [[cos, sin], [−sin, cos]] with σ2 = [[0,−i],[i,0]]
        let a = 0.9;
        let c = Coin::exp_pauli(a, Pauli::Y);
        assert!((c.m[0][1].re - a.sin()).abs() < 1e-15);
        assert!((c.m[1][0].re + a.sin()).abs() < 1e-15);
    }
}
