//! Closed subsets of the unit circle given as finite unions of arcs, and the
//! set-level comparisons built on them.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{arc_link, band_spectrum, bloch_matrix_1d};
use crate::coin::Pauli;
use crate::error::{Error, Result};
use crate::flux::{ConvergentSequence, Flux};
use crate::gauge::{circle_distance, wrap_angle};
use crate::spectral::eigenphases_dense;

/// Closed arc `{start + s : 0 <= s <= len}`; `start ∈ [0, 2π)`, so the end
/// `start + len` may exceed `2π` for arcs through angle 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Arc {
    pub start: f64,
    pub len: f64,
}

impl Arc {
    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    pub fn contains(&self, theta: f64) -> bool {
        wrap_angle(theta - self.start) <= self.len
    }

    fn distance_to(&self, theta: f64) -> f64 {
        if self.contains(theta) {
            0.0
        } else {
            circle_distance(theta, self.start).min(circle_distance(theta, self.end()))
        }
    }
}

/// Disjoint, sorted arcs. The full circle is a single arc of length `2π`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpectrumSet {
    arcs: Vec<Arc>,
}

impl SpectrumSet {
    pub fn empty() -> Self {
        SpectrumSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        SpectrumSet { arcs: vec![Arc { start: 0.0, len: TAU }] }
    }

    /// Union of arbitrary `(start, end)` arcs, `end >= start`.
    pub fn from_arcs(raw: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut arcs: Vec<Arc> = raw
            .into_iter()
            .map(|(a, b)| Arc { start: wrap_angle(a), len: (b - a).max(0.0) })
            .collect();
        if arcs.iter().any(|a| a.len >= TAU) {
            return SpectrumSet::full();
        }
        arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut merged: Vec<Arc> = Vec::with_capacity(arcs.len());
        for a in arcs {
            match merged.last_mut() {
                Some(last) if a.start <= last.end() => {
                    last.len = last.len.max(a.end() - last.start);
                }
                _ => merged.push(a),
            }
        }
        // arcs running past 2π can swallow arcs at the start of the list
        while merged.len() > 1 {
            let first = merged[0];
            let last = merged.last_mut().unwrap();
            if last.end() >= first.start + TAU {
                last.len = last.len.max(first.end() + TAU - last.start);
                merged.remove(0);
            } else {
                break;
            }
        }
        if merged.iter().any(|a| a.len >= TAU) {
            return SpectrumSet::full();
        }
        // restore the order by start after a wrap merge
        merged.sort_by(|a, b| a.start.total_cmp(&b.start));
        SpectrumSet { arcs: merged }
    }

    /// Union of the closed `tol`-neighbourhoods of the samples.
    pub fn from_samples(phases: &[f64], tol: f64) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        Ok(SpectrumSet::from_arcs(phases.iter().map(|&p| (p - tol, p + tol))))
    }

    /// Samples chained by circular gaps of at most `link`; each chain
    /// becomes the arc from its first to its last sample (no padding).
    pub fn from_linked_samples(phases: &[f64], link: f64) -> Self {
        if phases.is_empty() {
            return SpectrumSet::empty();
        }
        let mut p: Vec<f64> = phases.iter().map(|&t| wrap_angle(t)).collect();
        p.sort_by(f64::total_cmp);
        let n = p.len();
        let gap_after = |i: usize| if i + 1 < n { p[i + 1] - p[i] } else { p[0] + TAU - p[n - 1] };
        let Some(cut) = (0..n).find(|&i| gap_after(i) > link) else {
            return SpectrumSet::full();
        };
        // walk once around the circle starting just after a wide gap
        let first = (cut + 1) % n;
        let unwrapped: Vec<f64> = (0..n)
            .map(|j| {
                let i = first + j;
                if i >= n {
                    p[i - n] + TAU
                } else {
                    p[i]
                }
            })
            .collect();
        let mut arcs = Vec::new();
        let mut start = unwrapped[0];
        for j in 0..n {
            if j + 1 == n || unwrapped[j + 1] - unwrapped[j] > link {
                arcs.push((start, unwrapped[j]));
                if j + 1 < n {
                    start = unwrapped[j + 1];
                }
            }
        }
        SpectrumSet::from_arcs(arcs)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].len >= TAU
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(theta))
    }

    /// Arc-length measure.
    pub fn lebesgue_measure(&self) -> f64 {
        self.arcs.iter().map(|a| a.len).sum()
    }

    /// Number of gaps between arcs.
    pub fn gap_count(&self) -> usize {
        if self.is_full() {
            0
        } else {
            self.arcs.len()
        }
    }

    /// Image under `z ↦ z̄`.
    pub fn conjugate(&self) -> Self {
        SpectrumSet::from_arcs(self.arcs.iter().map(|a| (-a.end(), -a.start)))
    }

    /// Image under rotation by `angle`.
    pub fn rotate(&self, angle: f64) -> Self {
        SpectrumSet::from_arcs(self.arcs.iter().map(|a| (a.start + angle, a.end() + angle)))
    }

    /// Image under `z ↦ −z`.
    pub fn negate(&self) -> Self {
        self.rotate(PI)
    }

    pub fn union(&self, other: &SpectrumSet) -> Self {
        SpectrumSet::from_arcs(self.arcs.iter().chain(other.arcs.iter()).map(|a| (a.start, a.end())))
    }

    pub fn distance_to(&self, theta: f64) -> f64 {
        self.arcs.iter().map(|a| a.distance_to(theta)).fold(f64::INFINITY, f64::min)
    }

    /// Midpoints of the gaps of the set.
    fn gap_midpoints(&self) -> Vec<f64> {
        let n = self.arcs.len();
        if self.is_full() {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let a = self.arcs[i];
                let b = self.arcs[(i + 1) % n];
                let gap = wrap_angle(b.start - a.end());
                a.end() + gap / 2.0
            })
            .collect()
    }

    /// `sup_{a ∈ self} dist(a, other)`.
    fn directed(&self, other: &SpectrumSet) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.arcs {
            d = d.max(other.distance_to(a.start)).max(other.distance_to(a.end()));
        }
        for m in other.gap_midpoints() {
            if self.contains(m) {
                d = d.max(other.distance_to(m));
            }
        }
        d
    }

    /// Symmetric Hausdorff distance in the arc-length metric.
    pub fn hausdorff_distance(&self, other: &SpectrumSet) -> Result<f64> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.directed(other).max(other.directed(self)))
    }
}

/// Free function form of [`SpectrumSet::lebesgue_measure`].
pub fn lebesgue_measure(s: &SpectrumSet) -> f64 {
    s.lebesgue_measure()
}

/// Free function form of [`SpectrumSet::hausdorff_distance`].
pub fn hausdorff_distance(a: &SpectrumSet, b: &SpectrumSet) -> Result<f64> {
    a.hausdorff_distance(b)
}

/// Distances measuring the three symmetries of the butterfly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub flux: Flux,
    /// `d(conj(σ_Φ), σ_{2π−Φ})`.
    pub conjugation: f64,
    /// `d(−σ_Φ, σ_Φ)`.
    pub reflection: f64,
    /// `d(σ_Φ, σ_{2π−Φ})`.
    pub reversal: f64,
}

impl SymmetryReport {
    pub fn max(&self) -> f64 {
        self.conjugation.max(self.reflection).max(self.reversal)
    }
}

pub fn symmetry_report(flux: Flux, s: &SpectrumSet, s_minus: &SpectrumSet) -> Result<SymmetryReport> {
    Ok(SymmetryReport {
        flux,
        conjugation: s.conjugate().hausdorff_distance(s_minus)?,
        reflection: s.negate().hausdorff_distance(s)?,
        reversal: s.hausdorff_distance(s_minus)?,
    })
}

/// Union over a `θ`-grid and a `k`-grid of the Bloch spectra of the
/// one-dimensional walk. Both grids cover the reduced period `[0, 2π/q)`.
pub fn spectrum_1d(flux: Flux, axis: Pauli, theta_grid: usize, n_k: usize) -> Result<SpectrumSet> {
    if theta_grid == 0 || n_k == 0 {
        return Err(Error::InvalidArgument("grids must be nonempty".into()));
    }
    let q = flux.period() as f64;
    let phases: Vec<f64> = (0..theta_grid)
        .into_par_iter()
        .map(|i| {
            let theta = TAU * i as f64 / (q * theta_grid as f64);
            let mut out = Vec::new();
            for j in 0..n_k {
                let k = TAU * j as f64 / (q * n_k as f64);
                out.extend(eigenphases_dense(&bloch_matrix_1d(flux, theta, k, axis)?)?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    Ok(SpectrumSet::from_linked_samples(&phases, link_1d(flux, theta_grid, n_k)))
}

/// Eigenphases move at most at rate 1 in `θ` and rate `q` in `k`, so samples
/// of one band on neighbouring grid points are closer than this.
fn link_1d(flux: Flux, theta_grid: usize, n_k: usize) -> f64 {
    let q = flux.period() as f64;
    2.0 * (TAU / n_k as f64).max(TAU / (q * theta_grid as f64))
}

/// Distance between the two-dimensional band spectrum and the union of the
/// one-dimensional spectra.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison1d2d {
    pub flux: Flux,
    pub distance: f64,
    /// Arc-merging length used on either side.
    pub grid_tolerance: f64,
}

pub fn compare_1d_2d(flux: Flux, theta_grid: usize, n_k: usize) -> Result<Comparison1d2d> {
    let two_d = band_spectrum(flux, n_k)?.linked_arcs();
    let one_d = spectrum_1d(flux, Pauli::X, theta_grid, n_k)?;
    Ok(Comparison1d2d {
        flux,
        distance: two_d.hausdorff_distance(&one_d)?,
        grid_tolerance: link_1d(flux, theta_grid, n_k).max(arc_link(n_k)),
    })
}

/// Eigenphases of the `σ_axis` walk fibre, pooled over a `k`-grid.
fn pooled_1d(flux: Flux, theta: f64, axis: Pauli, n_k: usize) -> Result<Vec<f64>> {
    let q = flux.period() as f64;
    let mut out = Vec::new();
    for j in 0..n_k {
        let k = TAU * j as f64 / (q * n_k as f64);
        out.extend(eigenphases_dense(&bloch_matrix_1d(flux, theta, k, axis)?)?);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn sorted_phase_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let sa = SpectrumSet::from_arcs(a.iter().map(|&t| (t, t)));
    let sb = SpectrumSet::from_arcs(b.iter().map(|&t| (t, t)));
    sa.hausdorff_distance(&sb).unwrap_or(f64::INFINITY)
}

/// Result of matching the `σ1` walk at `θ` with a `σ2` walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxisCorrespondence {
    pub theta: f64,
    pub theta_sigma2: f64,
    /// Hausdorff distance between the pooled eigenphase sets.
    pub distance: f64,
}

/// Finds the `θ′` among `±θ + {0, π/2, −π/2, π}` for which the `σ2` walk at
/// `θ′` has the spectrum of the `σ1` walk at `θ` (pooled over a `k`-grid).
pub fn axis_correspondence(flux: Flux, theta: f64, n_k: usize) -> Result<AxisCorrespondence> {
    let reference = pooled_1d(flux, theta, Pauli::X, n_k)?;
    let mut best = AxisCorrespondence { theta, theta_sigma2: theta, distance: f64::INFINITY };
    for sign in [1.0, -1.0] {
        for shift in [0.0, PI / 2.0, -PI / 2.0, PI] {
            let cand = wrap_angle(sign * theta + shift);
            let d = sorted_phase_distance(&reference, &pooled_1d(flux, cand, Pauli::Y, n_k)?);
            if d < best.distance {
                best = AxisCorrespondence { theta, theta_sigma2: cand, distance: d };
            }
        }
    }
    Ok(best)
}

/// Spectral measure at each convergent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandwidthEntry {
    pub flux: Flux,
    pub measure: f64,
    pub arcs: usize,
}

pub fn bandwidth_scan(seq: &ConvergentSequence, n_k: usize) -> Result<Vec<BandwidthEntry>> {
    seq.iter()
        .map(|&flux| {
            let s = band_spectrum(flux, n_k)?.arcs;
            Ok(BandwidthEntry { flux, measure: s.lebesgue_measure(), arcs: s.arcs().len() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn from_samples_examples() {
        let s = SpectrumSet::from_samples(&[0.0], 0.1).unwrap();
        assert_eq!(s.arcs().len(), 1);
        assert!((s.lebesgue_measure() - 0.2).abs() < 1e-15);
        let s = SpectrumSet::from_samples(&[0.0, PI], 0.1).unwrap();
        assert_eq!(s.arcs().len(), 2);
        let dense: Vec<f64> = (0..100).map(|i| TAU * i as f64 / 100.0).collect();
        let s = SpectrumSet::from_samples(&dense, TAU / 100.0).unwrap();
        assert!(s.is_full());
        assert!((s.lebesgue_measure() - TAU).abs() < 1e-15);
        assert!(SpectrumSet::from_samples(&[0.0], 0.0).is_err());
        assert_eq!(SpectrumSet::empty().lebesgue_measure(), 0.0);
    }

    #[test]
    fn hausdorff_examples() {
        let a = SpectrumSet::from_arcs([(0.0, 0.0)]);
        let b = SpectrumSet::from_arcs([(PI, PI)]);
        assert!((a.hausdorff_distance(&b).unwrap() - PI).abs() < 1e-15);
        assert_eq!(a.hausdorff_distance(&a).unwrap(), 0.0);
        assert!(matches!(a.hausdorff_distance(&SpectrumSet::empty()), Err(Error::EmptySet)));
        // a point against an arc that wraps through 0
        let arc = SpectrumSet::from_arcs([(TAU - 0.5, TAU + 0.5)]);
        assert!((arc.hausdorff_distance(&a).unwrap() - 0.5).abs() < 1e-14);
        // an arc covering a gap in the middle
        let two = SpectrumSet::from_arcs([(0.0, 1.0), (2.0, 3.0)]);
        let one = SpectrumSet::from_arcs([(0.0, 3.0)]);
        assert!((one.hausdorff_distance(&two).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn wrap_merging() {
        let s = SpectrumSet::from_arcs([(6.0, 6.5), (0.1, 0.4), (3.0, 3.1)]);
        assert_eq!(s.arcs().len(), 2);
        assert!((s.lebesgue_measure() - (6.5 - 6.0 + 0.4 - (6.5 - TAU)) - 0.1).abs() < 1e-12);
        assert!(s.contains(0.0));
        assert!(!s.contains(1.0));
        let linked = SpectrumSet::from_linked_samples(&[6.2, 0.05, 0.1, 3.0], 0.2);
        assert_eq!(linked.arcs().len(), 2);
        assert!(linked.contains(0.0) && linked.contains(6.25));
        assert!((linked.lebesgue_measure() - (0.1 + TAU - 6.2)).abs() < 1e-12);
        let chained: Vec<f64> = (0..50).map(|i| i as f64 * 0.13).collect();
        assert!(SpectrumSet::from_linked_samples(&chained, 0.2).is_full());
        assert_eq!(SpectrumSet::from_linked_samples(&[1.0], 0.2).lebesgue_measure(), 0.0);
    }

    #[test]
    fn symmetries_at_zero_flux() {
        let s = SpectrumSet::full();
        let r = symmetry_report(Flux::zero(), &s, &s).unwrap();
        assert_eq!(r.max(), 0.0);
    }

    fn arb_set() -> impl Strategy<Value = SpectrumSet> {
        prop::collection::vec((0.0..TAU, 0.0..1.0f64), 1..6)
            .prop_map(|v| SpectrumSet::from_arcs(v.into_iter().map(|(a, l)| (a, a + l))))
    }

    proptest! {
        #[test]
        fn hausdorff_is_a_metric(a in arb_set(), b in arb_set(), c in arb_set(), rot in 0.0..TAU) {
            let ab = a.hausdorff_distance(&b).unwrap();
            let ba = b.hausdorff_distance(&a).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!(a.hausdorff_distance(&a).unwrap() < 1e-12);
            let ac = a.hausdorff_distance(&c).unwrap();
            let cb = c.hausdorff_distance(&b).unwrap();
            prop_assert!(ab <= ac + cb + 1e-12);
            let r = a.rotate(rot).hausdorff_distance(&b.rotate(rot)).unwrap();
            prop_assert!((r - ab).abs() < 1e-9);
        }

        #[test]
        fn measure_is_monotone_in_tolerance(p in prop::collection::vec(0.0..TAU, 1..20), t in 1e-3..0.5f64) {
            let m1 = SpectrumSet::from_samples(&p, t).unwrap().lebesgue_measure();
            let m2 = SpectrumSet::from_samples(&p, 1.5 * t).unwrap().lebesgue_measure();
            prop_assert!(m1 <= m2 + 1e-12);
            prop_assert!(m2 <= TAU + 1e-12);
        }

        #[test]
        fn arcs_stay_disjoint(s in arb_set()) {
            let arcs = s.arcs();
            for w in arcs.windows(2) {
                prop_assert!(w[0].end() < w[1].start);
            }
            if arcs.len() > 1 {
                prop_assert!(arcs.last().unwrap().end() < arcs[0].start + TAU);
            }
            prop_assert!((s.conjugate().lebesgue_measure() - s.lebesgue_measure()).abs() < 1e-12);
        }
    }
}
