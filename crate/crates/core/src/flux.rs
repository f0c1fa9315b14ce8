//! Magnetic flux per plaquette as a reduced rational multiple of 2π, plus
//! continued-fraction approximants that stand in for irrational flux.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flux `Φ = 2π p/q` with `0 <= p < q` and `gcd(p, q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flux {
    #[serde(rename = "p")]
    numerator: i64,
    #[serde(rename = "q")]
    denominator: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Reduces `p/q` and normalises the numerator into `[0, q)`.
pub fn reduce_flux(p: i64, q: i64) -> Result<Flux> {
    Flux::new(p, q)
}

impl Flux {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidArgument(format!(
                "flux denominator must be positive, got {q}"
            )));
        }
        let p = p.rem_euclid(q);
        let g = gcd(p, q);
        // gcd(0, q) = q, which reduces 0/q to 0/1
        Ok(Flux { numerator: p / g, denominator: q / g })
    }

    pub fn zero() -> Self {
        Flux { numerator: 0, denominator: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// Period `q` as a size.
    pub fn period(&self) -> usize {
        self.denominator as usize
    }

    /// The angle `Φ ∈ [0, 2π)` in radians.
    pub fn value(&self) -> f64 {
        TAU * self.numerator as f64 / self.denominator as f64
    }

    /// `Φ / 2π` as a float.
    pub fn ratio(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// The reversed field `2π − Φ`.
    pub fn reversed(&self) -> Self {
        Flux::new(-self.numerator, self.denominator).expect("denominator is positive")
    }

    /// Every reduced flux with denominator at most `q_max`, ordered by `(q, p)`.
    pub fn enumerate(q_max: i64) -> Vec<Flux> {
        let mut out = Vec::new();
        for q in 1..=q_max {
            for p in 0..q {
                if gcd(p, q) == 1 {
                    out.push(Flux { numerator: p, denominator: q });
                }
            }
        }
        out
    }
}

impl fmt::Display for Flux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for Flux {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("flux must look like P/Q, got {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        Flux::new(p, q)
    }
}

/// Rational approximants of an irrational flux ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentSequence {
    pub target: f64,
    pub convergents: Vec<Flux>,
}

impl ConvergentSequence {
    pub fn len(&self) -> usize {
        self.convergents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.convergents.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Flux> {
        self.convergents.iter()
    }
}

/// First `n` convergents `F_k / F_{k+1}` of the golden mean `(√5 − 1)/2`,
/// starting at `1/2`.
pub fn golden_convergents(n: usize) -> ConvergentSequence {
    let target = (5f64.sqrt() - 1.0) / 2.0;
    let mut convergents = Vec::with_capacity(n);
    let (mut a, mut b) = (1i64, 2i64);
    for _ in 0..n {
        convergents.push(Flux::new(a, b).expect("Fibonacci denominators are positive"));
        let next = a + b;
        a = b;
        b = next;
    }
    ConvergentSequence { target, convergents }
}

/// Continued-fraction convergents of `target ∈ [0, 1)`, skipping the trivial
/// leading `0/1` and any repeated value. Stops early if the expansion
/// terminates or denominators would overflow.
pub fn continued_fraction_convergents(target: f64, n: usize) -> ConvergentSequence {
    let mut convergents: Vec<Flux> = Vec::with_capacity(n);
    // h_{k} = a_k h_{k-1} + h_{k-2}, same for k
    let (mut h_prev, mut h) = (0i64, 1i64);
    let (mut k_prev, mut k) = (1i64, 0i64);
    let mut x = target;
    while convergents.len() < n {
        let a = x.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let (h_next, k_next) = match (a.checked_mul(h), a.checked_mul(k)) {
            (Some(ah), Some(ak)) => (ah + h_prev, ak + k_prev),
            _ => break,
        };
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        if k > 0 && h > 0 {
            let f = Flux::new(h, k).expect("positive denominator");
            if convergents.last().is_none_or(|l| l.denominator < f.denominator) {
                convergents.push(f);
            }
        }
        let frac = x - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    ConvergentSequence { target, convergents }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reduction_examples() {
        let f = reduce_flux(2, 4).unwrap();
        assert_eq!((f.numerator(), f.denominator()), (1, 2));
        assert!((f.value() - PI).abs() < 1e-15);

        let f = reduce_flux(0, 1).unwrap();
        assert_eq!(f.value(), 0.0);

        let f = reduce_flux(-1, 3).unwrap();
        assert_eq!((f.numerator(), f.denominator()), (2, 3));
        assert!((f.value() - 4.0 * PI / 3.0).abs() < 1e-15);

        assert_eq!(reduce_flux(0, 7).unwrap(), Flux::zero());
        assert!(reduce_flux(1, 0).is_err());
        assert!(reduce_flux(1, -3).is_err());
    }

    #[test]
    fn parse_and_display() {
        let f: Flux = "6/8".parse().unwrap();
        assert_eq!(f.to_string(), "3/4");
        assert!("x/3".parse::<Flux>().is_err());
        assert!("1/0".parse::<Flux>().is_err());
        assert_eq!("0".parse::<Flux>().unwrap(), Flux::zero());
    }

    #[test]
    fn golden_examples() {
        let g = golden_convergents(3);
        let pq: Vec<_> = g.iter().map(|f| (f.numerator(), f.denominator())).collect();
        assert_eq!(pq, vec![(1, 2), (2, 3), (3, 5)]);
        assert_eq!(golden_convergents(1).convergents, vec![Flux::new(1, 2).unwrap()]);
        assert_eq!(*golden_convergents(6).convergents.last().unwrap(), Flux::new(13, 21).unwrap());
    }

    #[test]
    fn golden_matches_generic_expansion() {
        let g = golden_convergents(10);
        let cf = continued_fraction_convergents(g.target, 12);
        // generic expansion also yields 1/1 before 1/2
        let tail: Vec<_> = cf.convergents.iter().skip_while(|f| f.denominator() < 2).take(10).copied().collect();
        assert_eq!(tail, g.convergents);
        for f in g.iter() {
            let q = f.denominator() as f64;
            assert!((g.target - f.ratio()).abs() < 1.0 / (q * q));
        }
    }

    #[test]
    fn enumerate_small() {
        let all = Flux::enumerate(2);
        assert_eq!(all, vec![Flux::zero(), Flux::new(1, 2).unwrap()]);
        assert_eq!(Flux::enumerate(5).len(), 1 + 1 + 2 + 2 + 4);
    }

    #[test]
    fn reversal() {
        assert_eq!(Flux::new(1, 3).unwrap().reversed(), Flux::new(2, 3).unwrap());
        assert_eq!(Flux::zero().reversed(), Flux::zero());
    }
}
