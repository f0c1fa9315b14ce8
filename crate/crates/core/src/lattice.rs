//! Sites of `Z^2`, spin labels, and finite boxes with a fixed flat indexing.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x1: i64,
    pub x2: i64,
}

impl Site {
    pub const ORIGIN: Site = Site { x1: 0, x2: 0 };

    pub const fn new(x1: i64, x2: i64) -> Self {
        Site { x1, x2 }
    }

    /// Skew product `k ∧ l = k1 l2 − k2 l1`.
    pub fn wedge(self, other: Site) -> i64 {
        self.x1 * other.x2 - self.x2 * other.x1
    }

    pub fn linf(self) -> i64 {
        self.x1.abs().max(self.x2.abs())
    }

    pub fn l1(self) -> i64 {
        self.x1.abs() + self.x2.abs()
    }
}

impl Add for Site {
    type Output = Site;
    fn add(self, o: Site) -> Site {
        Site::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for Site {
    type Output = Site;
    fn sub(self, o: Site) -> Site {
        Site::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Mul<i64> for Site {
    type Output = Site;
    fn mul(self, k: i64) -> Site {
        Site::new(self.x1 * k, self.x2 * k)
    }
}

impl Neg for Site {
    type Output = Site;
    fn neg(self) -> Site {
        Site::new(-self.x1, -self.x2)
    }
}

/// Lattice direction `e_1` or `e_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    One,
    Two,
}

impl Direction {
    pub fn unit(self) -> Site {
        match self {
            Direction::One => Site::new(1, 0),
            Direction::Two => Site::new(0, 1),
        }
    }
}

/// Internal state `s = ±1`. Up is stored first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn from_index(i: usize) -> Spin {
        if i == 0 {
            Spin::Up
        } else {
            Spin::Down
        }
    }
}

/// The square `center + [−L, L]^2`.
///
/// Sites are enumerated with `x1` as the slow index; the state `(x, s)` has
/// flat index `2·site_index + s.index()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    center: Site,
    half_width: usize,
}

impl LatticeBox {
    pub fn new(half_width: usize) -> Self {
        LatticeBox { center: Site::ORIGIN, half_width }
    }

    pub fn centered(center: Site, half_width: usize) -> Self {
        LatticeBox { center, half_width }
    }

    pub fn center(&self) -> Site {
        self.center
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn side(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn num_sites(&self) -> usize {
        self.side() * self.side()
    }

    /// Hilbert-space dimension `2 (2L+1)^2`.
    pub fn dim(&self) -> usize {
        2 * self.num_sites()
    }

    pub fn contains(&self, x: Site) -> bool {
        (x - self.center).linf() <= self.half_width as i64
    }

    pub fn site_index(&self, x: Site) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let l = self.half_width as i64;
        let r = x - self.center;
        Some(((r.x1 + l) as usize) * self.side() + (r.x2 + l) as usize)
    }

    pub fn site(&self, index: usize) -> Site {
        let l = self.half_width as i64;
        let side = self.side();
        let r1 = (index / side) as i64 - l;
        let r2 = (index % side) as i64 - l;
        self.center + Site::new(r1, r2)
    }

    pub fn state_index(&self, x: Site, s: Spin) -> Option<usize> {
        self.site_index(x).map(|i| 2 * i + s.index())
    }

    pub fn state(&self, index: usize) -> (Site, Spin) {
        (self.site(index / 2), Spin::from_index(index % 2))
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.num_sites()).map(move |i| self.site(i))
    }

    /// `ℓ∞` distance from `x` to the outer ring of the box.
    pub fn depth(&self, x: Site) -> i64 {
        self.half_width as i64 - (x - self.center).linf()
    }
}

/// Closure of a one-dimensional chain at its ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Closure {
    /// Amplitude leaving the chain is dropped.
    Open,
    /// Ring; wrapping forward multiplies by `e^{i twist}`.
    Periodic { twist: f64 },
}

/// Consecutive integer sites `start, start+1, …, start+len−1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chain {
    pub start: i64,
    pub len: usize,
    pub closure: Closure,
}

impl Chain {
    pub fn centered(half_width: usize) -> Self {
        Chain { start: -(half_width as i64), len: 2 * half_width + 1, closure: Closure::Open }
    }

    pub fn ring(len: usize, twist: f64) -> Self {
        Chain { start: 0, len, closure: Closure::Periodic { twist } }
    }

    pub fn dim(&self) -> usize {
        2 * self.len
    }

    pub fn site(&self, index: usize) -> i64 {
        self.start + index as i64
    }

    pub fn state_index(&self, x: i64, s: Spin) -> Option<usize> {
        let r = x - self.start;
        if r < 0 || r >= self.len as i64 {
            return None;
        }
        Some(2 * r as usize + s.index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_index_is_a_bijection() {
        for b in [LatticeBox::new(0), LatticeBox::new(3), LatticeBox::centered(Site::new(-4, 7), 2)] {
            assert_eq!(b.num_sites(), b.side() * b.side());
            let mut seen = vec![false; b.dim()];
            for i in 0..b.dim() {
                let (x, s) = b.state(i);
                assert!(b.contains(x));
                let j = b.state_index(x, s).unwrap();
                assert_eq!(i, j);
                assert!(!seen[j]);
                seen[j] = true;
            }
            assert!(seen.iter().all(|&v| v));
        }
    }

    #[test]
    fn box_dimensions() {
        let b = LatticeBox::new(4);
        assert_eq!(b.num_sites(), 81);
        assert_eq!(b.dim(), 162);
        assert_eq!(b.site_index(Site::new(5, 0)), None);
        assert_eq!(b.depth(Site::new(4, -1)), 0);
        assert_eq!(b.depth(Site::ORIGIN), 4);
    }

    #[test]
    fn wedge_is_antisymmetric() {
        let k = Site::new(2, -3);
        let l = Site::new(5, 1);
        assert_eq!(k.wedge(l), 2 + 15);
        assert_eq!(k.wedge(l), -l.wedge(k));
    }
}
