//! Magnetic Bloch reduction at rational flux `Φ = 2πp/q`.
//!
//! In the Landau gauge `U1(x) = e^{−i x2 Φ}`, `U2 = 1` the walk commutes
//! with the ordinary translation by `e1` and with the translation by `q e2`.
//! On the unit cell `{0} × {0, …, q−1}` with basis `|m, s>` (flat index
//! `2m + s`) the fibre at quasi-momentum `k = (k1, k2)` is
//! `F(k) = B1(k1) (1 ⊗ C_H) B2(k2) (1 ⊗ C_H)`, where `B1` is diagonal with
//! entries `e^{±i(k1 − Φm)}` and `B2` shifts `m ↦ m ± 1` cyclically with
//! twist `e^{±iqk2}` on wrap-around.
//!
//! Conjugating by the cyclic shift gives `F(k1 + Φ, k2) ≅ F(k1, k2)`, so the
//! spectrum is `2π/q`-periodic in both momenta and the grids below sample
//! the reduced zone `[0, 2π/q)^2`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::io::Write;

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::SpectrumSet;
use crate::coin::{Coin, Pauli};
use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::format::fmt_g12;
use crate::gauge::wrap_angle;
use crate::spectral::{eigenvalues_dense, phase_of};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct BlochFiber {
    pub flux: Flux,
    pub k: (f64, f64),
    pub matrix: Mat<Complex64>,
}

/// `F(k) = B1 (1 ⊗ C_H) B2 (1 ⊗ C_H)`, assembled densely.
pub fn bloch_matrix(flux: Flux, k1: f64, k2: f64) -> BlochFiber {
    let q = flux.period();
    let phi = flux.value();
    let n = 2 * q;
    let h = FRAC_1_SQRT_2;
    let twist = Complex64::from_polar(1.0, q as f64 * k2);
    // (B2 (1 ⊗ C_H))[row, 2m + s]: C_H mixes the spins of cell m, then spin
    // up moves to m + 1 and spin down to m − 1.
    let mut b2h = Mat::<Complex64>::zeros(n, n);
    for m in 0..q {
        let (up, up_phase) = if m + 1 == q { (0, twist) } else { (m + 1, Complex64::new(1.0, 0.0)) };
        let (down, down_phase) = if m == 0 { (q - 1, twist.conj()) } else { (m - 1, Complex64::new(1.0, 0.0)) };
        for s in 0..2 {
            let sign = if s == 0 { 1.0 } else { -1.0 };
            b2h[(2 * up, 2 * m + s)] += up_phase * h;
            b2h[(2 * down + 1, 2 * m + s)] += down_phase * (sign * h);
        }
    }
    // F = B1 (1 ⊗ C_H) · b2h
    let mut f = Mat::<Complex64>::zeros(n, n);
    for m in 0..q {
        let a = Complex64::from_polar(1.0, k1 - phi * m as f64);
        let d1 = [a, a.conj()];
        for col in 0..n {
            let u = b2h[(2 * m, col)];
            let d = b2h[(2 * m + 1, col)];
            f[(2 * m, col)] = d1[0] * (u + d) * h;
            f[(2 * m + 1, col)] = d1[1] * (u - d) * h;
        }
    }
    BlochFiber { flux, k: (k1, k2), matrix: f }
}

/// Fibre of the one-dimensional walk `S · exp(i(Φx + θ)σ_axis)` over the
/// `q`-site cell, with twist `e^{iqk}` on forward wrap-around.
pub fn bloch_matrix_1d(flux: Flux, theta: f64, k: f64, axis: Pauli) -> Result<Mat<Complex64>> {
    if axis == Pauli::Z {
        return Err(Error::InvalidArgument("almost-Mathieu coins rotate about σ1 or σ2".into()));
    }
    let q = flux.period();
    let phi = flux.value();
    let twist = Complex64::from_polar(1.0, q as f64 * k);
    let mut f = Mat::<Complex64>::zeros(2 * q, 2 * q);
    for x in 0..q {
        let c = Coin::exp_pauli(phi * x as f64 + theta, axis);
        let (up, up_phase) = if x + 1 == q { (0, twist) } else { (x + 1, Complex64::new(1.0, 0.0)) };
        let (down, down_phase) = if x == 0 { (q - 1, twist.conj()) } else { (x - 1, Complex64::new(1.0, 0.0)) };
        for s in 0..2 {
            f[(2 * up, 2 * x + s)] += up_phase * c.m[0][s];
            f[(2 * down + 1, 2 * x + s)] += down_phase * c.m[1][s];
        }
    }
    Ok(f)
}

/// Band data on an `n_k × n_k` grid of the reduced zone.
#[derive(Clone, Debug)]
pub struct BandSpectrum {
    pub flux: Flux,
    pub n_k: usize,
    /// Angle inside a spectral gap from which eigenphases are ordered, if
    /// the sampling resolves one.
    pub cut: Option<f64>,
    /// `branches[b][g]`: the `b`-th eigenphase at grid point `g`, counting
    /// counterclockwise from `cut` (from 0 when there is no cut).
    pub branches: Vec<Vec<f64>>,
    /// Union of the ranges of the branches.
    pub arcs: SpectrumSet,
    /// `max | |λ| − 1 |` over all computed eigenvalues.
    pub modulus_deviation: f64,
}

impl BandSpectrum {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// Grid spacing `2π/(q n_k)` of the reduced zone.
    pub fn spacing(&self) -> f64 {
        TAU / (self.flux.period() * self.n_k) as f64
    }

    /// Chain length used to merge samples into arcs.
    pub fn link_length(&self) -> f64 {
        arc_link(self.n_k)
    }

    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        self.branches.iter().flatten().copied()
    }

    /// Sample clusters chained at [`arc_link`]: closes every gap narrower
    /// than the grid can resolve.
    pub fn linked_arcs(&self) -> SpectrumSet {
        let all: Vec<f64> = self.samples().collect();
        SpectrumSet::from_linked_samples(&all, self.link_length())
    }
}

/// Within a band, neighbouring grid samples differ by less than `2π/n_k`.
pub fn arc_link(n_k: usize) -> f64 {
    2.0 * TAU / n_k as f64
}

/// Midpoint of the widest circular gap between sorted samples, if that gap
/// is wide enough to lie outside every band.
fn gap_cut(sorted: &[f64], n_k: usize) -> Option<f64> {
    let n = sorted.len();
    let (mut best, mut at) = (0.0, 0);
    for i in 0..n {
        let g = if i + 1 < n { sorted[i + 1] - sorted[i] } else { sorted[0] + TAU - sorted[n - 1] };
        if g > best {
            best = g;
            at = i;
        }
    }
    (best > 2.0 * arc_link(n_k)).then(|| wrap_angle(sorted[at] + best / 2.0))
}

pub fn band_spectrum(flux: Flux, n_k: usize) -> Result<BandSpectrum> {
    if n_k < 8 {
        return Err(Error::InvalidArgument(format!("k-grid must have at least 8 points, got {n_k}")));
    }
    let q = flux.period();
    let h = TAU / (q * n_k) as f64;
    let per_row: Vec<(Vec<Vec<f64>>, f64)> = (0..n_k)
        .into_par_iter()
        .map(|i| {
            let mut rows = Vec::with_capacity(n_k);
            let mut dev: f64 = 0.0;
            for j in 0..n_k {
                let fiber = bloch_matrix(flux, i as f64 * h, j as f64 * h);
                let ev = eigenvalues_dense(&fiber.matrix)?;
                let mut ph: Vec<f64> = ev.iter().map(|z| phase_of(*z)).collect();
                dev = ev.iter().fold(dev, |d, z| d.max((z.norm() - 1.0).abs()));
                ph.sort_by(f64::total_cmp);
                rows.push(ph);
            }
            Ok((rows, dev))
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<f64> = per_row.iter().flat_map(|(rows, _)| rows.iter().flatten().copied()).collect();
    all.sort_by(f64::total_cmp);
    let cut = gap_cut(&all, n_k);
    let origin = cut.unwrap_or(0.0);
    let mut branches = vec![Vec::with_capacity(n_k * n_k); 2 * q];
    let mut modulus_deviation: f64 = 0.0;
    for (rows, dev) in per_row {
        modulus_deviation = modulus_deviation.max(dev);
        for ph in rows {
            let first = ph.iter().position(|&p| p >= origin).unwrap_or(0);
            for b in 0..ph.len() {
                branches[b].push(ph[(first + b) % ph.len()]);
            }
        }
    }
    let arcs = match cut {
        Some(g) => SpectrumSet::from_arcs(branches.iter().map(|br| {
            let (lo, hi) = br.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                let v = wrap_angle(p - g);
                (lo.min(v), hi.max(v))
            });
            (g + lo, g + hi)
        })),
        None => SpectrumSet::from_linked_samples(&all, arc_link(n_k)),
    };
    Ok(BandSpectrum { flux, n_k, cut, branches, arcs, modulus_deviation })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ButterflyRow {
    pub p: i64,
    pub q: i64,
    pub phi: f64,
    pub arc_start: f64,
    pub arc_end: f64,
}

/// Band arcs for every reduced `p/q` with `q <= q_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Butterfly {
    pub n_k: usize,
    pub rows: Vec<ButterflyRow>,
}

impl Butterfly {
    /// Arcs of one flux, rebuilt from the rows.
    pub fn spectrum(&self, flux: Flux) -> SpectrumSet {
        SpectrumSet::from_arcs(
            self.rows
                .iter()
                .filter(|r| r.p == flux.numerator() && r.q == flux.denominator())
                .map(|r| (r.arc_start, r.arc_end)),
        )
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "p,q,phi,arc_start,arc_end")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{}", r.p, r.q, fmt_g12(r.phi), fmt_g12(r.arc_start), fmt_g12(r.arc_end))?;
        }
        Ok(())
    }
}

pub fn butterfly(q_max: i64, n_k: usize) -> Result<Butterfly> {
    if q_max < 1 {
        return Err(Error::InvalidArgument(format!("q_max must be at least 1, got {q_max}")));
    }
    let fluxes = Flux::enumerate(q_max);
    let spectra: Vec<(Flux, SpectrumSet)> = fluxes
        .par_iter()
        .map(|&f| band_spectrum(f, n_k).map(|b| (f, b.arcs)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (f, s) in spectra {
        for a in s.arcs() {
            rows.push(ButterflyRow {
                p: f.numerator(),
                q: f.denominator(),
                phi: f.value(),
                arc_start: a.start,
                arc_end: a.end(),
            });
        }
    }
    rows.sort_by(|a, b| (a.q, a.p).cmp(&(b.q, b.p)).then(a.arc_start.total_cmp(&b.arc_start)));
    Ok(Butterfly { n_k, rows })
}

/// Dense unitarity deviation `max |(F*F − 1)_{ij}|`.
pub fn fiber_unitarity(m: &Mat<Complex64>) -> f64 {
    let p = m.adjoint() * m;
    let mut dev: f64 = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let t = if i == j { Complex64::new(1.0, 0.0) } else { ZERO };
            dev = dev.max((p[(i, j)] - t).norm());
        }
    }
    dev
}
