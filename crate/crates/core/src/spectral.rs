//! Eigenphases of unitaries, eigenvalue-counting measures, trace moments and
//! the checks that tie finite-volume data to the infinite walk.

use std::f64::consts::TAU;

use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::format::round12;
use crate::gauge::{wrap_angle, GaugeField};
use crate::lattice::{LatticeBox, Site, Spin};
use crate::sparse::SparseMatrix;
use crate::walk::{build_magnetic_walk, diagonal_element, propagate_point, StateVector};

/// Input tolerance on `‖M*M − 1‖_max` for the eigensolver.
pub const EIG_UNITARY_TOL: f64 = 1e-10;
/// Bound on `| |λ| − 1 |` and on the residuals `‖Mv − λv‖`.
pub const EIG_RESIDUAL_TOL: f64 = 1e-8;
/// Default single-linkage radius for multiplicities.
pub const CLUSTER_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `arg z` in `[0, 2π)`.
pub fn phase_of(z: Complex64) -> f64 {
    wrap_angle(z.arg())
}

pub fn eigenvalues_dense(m: &Mat<Complex64>) -> Result<Vec<Complex64>> {
    m.eigenvalues().map_err(|e| Error::Solver(format!("{e:?}")))
}

/// Sorted eigenphases, without any unitarity checks.
pub fn eigenphases_dense(m: &Mat<Complex64>) -> Result<Vec<f64>> {
    let mut p: Vec<f64> = eigenvalues_dense(m)?.into_iter().map(phase_of).collect();
    p.sort_by(f64::total_cmp);
    Ok(p)
}

fn dense_unitarity(m: &Mat<Complex64>) -> f64 {
    let p = m.adjoint() * m;
    let mut dev: f64 = 0.0;
    for j in 0..p.ncols() {
        for i in 0..p.nrows() {
            let t = if i == j { Complex64::new(1.0, 0.0) } else { ZERO };
            dev = dev.max((p[(i, j)] - t).norm());
        }
    }
    dev
}

#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    /// Sorted eigenphases in `[0, 2π)`.
    pub phases: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Column `i` belongs to `phases[i]`.
    pub vectors: Mat<Complex64>,
    pub max_residual: f64,
    pub max_modulus_deviation: f64,
}

pub fn eigendecompose_unitary(m: &Mat<Complex64>) -> Result<UnitaryEigen> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let dev = dense_unitarity(m);
    if dev > EIG_UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: dev, tolerance: EIG_UNITARY_TOL });
    }
    let evd = m.eigen().map_err(|e| Error::Solver(format!("{e:?}")))?;
    let n = m.nrows();
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    let raw: Vec<Complex64> = (0..n).map(|i| s[i]).collect();
    order.sort_by(|&a, &b| phase_of(raw[a]).total_cmp(&phase_of(raw[b])));
    let values: Vec<Complex64> = order.iter().map(|&i| raw[i]).collect();
    let vectors = Mat::<Complex64>::from_fn(n, n, |r, c| u[(r, order[c])]);
    let mv = m * &vectors;
    let mut max_residual: f64 = 0.0;
    for c in 0..n {
        let mut r2 = 0.0;
        for r in 0..n {
            r2 += (mv[(r, c)] - values[c] * vectors[(r, c)]).norm_sqr();
        }
        max_residual = max_residual.max(r2.sqrt());
    }
    let max_modulus_deviation = values.iter().fold(0.0f64, |d, z| d.max((z.norm() - 1.0).abs()));
    if max_modulus_deviation > EIG_RESIDUAL_TOL || max_residual > EIG_RESIDUAL_TOL {
        return Err(Error::Solver(format!(
            "eigenpairs inaccurate: residual {max_residual:.3e}, modulus deviation {max_modulus_deviation:.3e}"
        )));
    }
    Ok(UnitaryEigen {
        phases: values.iter().map(|z| phase_of(*z)).collect(),
        values,
        vectors,
        max_residual,
        max_modulus_deviation,
    })
}

/// Eigenphases of a unitary given in sparse form; the dense copy is
/// bounded by `cap`.
pub fn unitary_eigenphases(m: &SparseMatrix, cap: usize) -> Result<Vec<f64>> {
    let dev = m.unitarity_deviation();
    if dev > EIG_UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: dev, tolerance: EIG_UNITARY_TOL });
    }
    let ev = eigenvalues_dense(&m.to_dense(cap)?)?;
    let worst = ev.iter().fold(0.0f64, |d, z| d.max((z.norm() - 1.0).abs()));
    if worst > EIG_RESIDUAL_TOL {
        return Err(Error::Solver(format!("eigenvalue modulus off by {worst:.3e}")));
    }
    let mut p: Vec<f64> = ev.into_iter().map(phase_of).collect();
    p.sort_by(f64::total_cmp);
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Dos { l: usize },
    Bloch { n_k: usize },
    Moments,
}

/// Which trace normalisation to use for a box `Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `1/(2|Λ|)`: a probability measure.
    PerState,
    /// `1/|Λ|`: counts both internal states of a site, total mass 2.
    PerSite,
}

/// Point masses on the circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralMeasure {
    pub phases: Vec<f64>,
    pub weights: Vec<f64>,
    pub provenance: Provenance,
}

impl SpectralMeasure {
    pub fn new(mut atoms: Vec<(f64, f64)>, provenance: Provenance) -> Result<Self> {
        if atoms.iter().any(|&(_, w)| w.is_nan() || w <= 0.0) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        for a in atoms.iter_mut() {
            a.0 = wrap_angle(a.0);
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (phases, weights) = atoms.into_iter().unzip();
        Ok(SpectralMeasure { phases, weights, provenance })
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `μ(I(θ))` for the closed arc `I(θ) = {e^{iθ'} : 0 <= θ' <= θ}`,
    /// extended by `N(θ + 2π) = N(θ) + 1`.
    pub fn cdf(&self, theta: f64) -> f64 {
        let turns = (theta / TAU).floor();
        let r = theta - turns * TAU;
        let inside: f64 = self.phases.iter().zip(&self.weights).filter(|(p, _)| **p <= r).map(|(_, w)| w).sum();
        turns * self.total_mass() + inside
    }

    /// `μ̂(t) = ∫ e^{itθ} dμ(θ)`.
    pub fn moment(&self, t: i64) -> Complex64 {
        self.phases
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| Complex64::from_polar(*w, t as f64 * p))
            .sum()
    }

    pub fn moments(&self, t_max: usize) -> MomentSequence {
        MomentSequence { values: (0..=t_max as i64).map(|t| self.moment(t)).collect() }
    }

    /// Masses in `bins` equal bins of `[0, 2π)`.
    pub fn histogram(&self, bins: usize) -> Vec<f64> {
        let mut h = vec![0.0; bins];
        for (p, w) in self.phases.iter().zip(&self.weights) {
            let b = ((p / TAU) * bins as f64).floor() as usize;
            h[b.min(bins - 1)] += w;
        }
        h
    }
}

/// Half the `ℓ1` distance of two histograms.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Eigenvalue-counting measure of `W_L` with weight `1/(2|Λ_L|)` per phase.
pub fn dos_measure(phases: &[f64], l: usize) -> Result<SpectralMeasure> {
    let n = LatticeBox::new(l).dim();
    if phases.len() != n {
        return Err(Error::InvalidArgument(format!("expected {n} eigenphases for L = {l}, got {}", phases.len())));
    }
    let w = 1.0 / n as f64;
    SpectralMeasure::new(phases.iter().map(|&p| (p, w)).collect(), Provenance::Dos { l })
}

/// `μ̂(t)` for `t = 0, 1, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    pub values: Vec<Complex64>,
}

impl MomentSequence {
    pub fn t_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// `μ̂(t)`, using `μ̂(−t) = conj μ̂(t)` for negative `t`.
    pub fn get(&self, t: i64) -> Option<Complex64> {
        let v = self.values.get(t.unsigned_abs() as usize)?;
        Some(if t < 0 { v.conj() } else { *v })
    }

    pub fn entries(&self) -> Vec<MomentEntry> {
        self.values
            .iter()
            .enumerate()
            .map(|(t, v)| MomentEntry { t, re: round12(v.re), im: round12(v.im) })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentEntry {
    pub t: usize,
    pub re: f64,
    pub im: f64,
}

/// Exact `τ2(W^t) = ½ Σ_s <0,s|W^t|0,s>` for `t = 0..=t_max`, symmetric
/// gauge. One window of half-width `t_max + 1` serves every `t`.
pub fn sdf_moments(flux: Flux, t_max: usize) -> MomentSequence {
    let g = GaugeField::symmetric(flux);
    let window = LatticeBox::new(t_max + 1);
    let w = build_magnetic_walk(&g, window);
    let mut values = vec![ZERO; t_max + 1];
    for s in Spin::BOTH {
        let mut psi = StateVector::point(window, Site::ORIGIN, s).expect("origin is in the window");
        for (t, v) in values.iter_mut().enumerate() {
            if t > 0 {
                psi = w.apply(&psi).expect("same domain");
            }
            *v += 0.5 * psi.at(Site::ORIGIN, s);
        }
    }
    MomentSequence { values }
}

/// `tr(W_L^t) / n` by repeated sparse multiplication, where `n` is the
/// matrix dimension (`PerState`) or half of it (`PerSite`).
pub fn trace_moments(w_l: &SparseMatrix, t_max: usize, norm: Normalization) -> MomentSequence {
    let n = match norm {
        Normalization::PerState => w_l.nrows() as f64,
        Normalization::PerSite => w_l.nrows() as f64 / 2.0,
    };
    let mut values = Vec::with_capacity(t_max + 1);
    let mut power = SparseMatrix::identity(w_l.nrows());
    for t in 0..=t_max {
        if t > 0 {
            power = w_l.matmul(&power);
        }
        let tr: Complex64 = (0..power.nrows()).map(|i| power.get(i, i)).sum();
        values.push(tr / n);
    }
    MomentSequence { values }
}

/// `max |<x,s|W_L^t|x,s> − <x,s|W^t|x,s>|` over `t ≤ t_max` and the sites of
/// `Λ_L` at depth greater than `2t`. Also returns how many diagonal entries
/// were compared.
pub fn interior_trace_deviation(g: &GaugeField, l: usize, w_l: &SparseMatrix, t_max: usize) -> Result<(f64, usize)> {
    let lam = LatticeBox::new(l);
    if w_l.nrows() != lam.dim() {
        return Err(Error::InvalidArgument(format!("W_L has dimension {}, expected {}", w_l.nrows(), lam.dim())));
    }
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for x in lam.sites() {
        let depth = lam.depth(x);
        for s in Spin::BOTH {
            let i = lam.state_index(x, s).expect("site of the box");
            let mut v = vec![ZERO; lam.dim()];
            v[i] = Complex64::new(1.0, 0.0);
            for t in 1..=t_max {
                v = w_l.mul_vec(&v);
                if depth > 2 * t as i64 {
                    let exact = propagate_point(g, t, x, s).at(x, s);
                    worst = worst.max((v[i] - exact).norm());
                    count += 1;
                }
            }
        }
    }
    Ok((worst, count))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentComparison {
    pub l: Option<usize>,
    /// `|μ̂_dos(t) − τ2(W^t)|` for `t = 0..=T`.
    pub deviations: Vec<f64>,
}

impl MomentComparison {
    pub fn max(&self) -> f64 {
        self.deviations.iter().copied().fold(0.0, f64::max)
    }
}

pub fn moment_compare(dos: &MomentSequence, sdf: &MomentSequence, t_max: usize, l: Option<usize>) -> Result<MomentComparison> {
    if dos.t_max() < t_max || sdf.t_max() < t_max {
        return Err(Error::InvalidArgument(format!("moment sequences shorter than T = {t_max}")));
    }
    let deviations = (0..=t_max).map(|t| (dos.values[t] - sdf.values[t]).norm()).collect();
    Ok(MomentComparison { l, deviations })
}

/// Largest single-linkage cluster of sorted phases, gaps measured around
/// the circle.
pub fn max_multiplicity(phases: &[f64], tol: f64) -> usize {
    let n = phases.len();
    if n == 0 {
        return 0;
    }
    let gap = |i: usize| if i + 1 < n { phases[i + 1] - phases[i] } else { phases[0] + TAU - phases[n - 1] };
    let Some(cut) = (0..n).find(|&i| gap(i) > tol) else {
        return n;
    };
    let mut best = 0;
    let mut run = 0;
    for step in 1..=n {
        let i = (cut + step) % n;
        run += 1;
        if gap(i) > tol {
            best = best.max(run);
            run = 0;
        }
    }
    best
}

/// Spread `max − min` of `<x,s|W^t|x,s>` over the given sites, per spin,
/// maximised over spins.
pub fn diagonal_spread(flux: Flux, t: usize, sites: &[Site]) -> f64 {
    let mut worst: f64 = 0.0;
    for s in Spin::BOTH {
        let vals: Vec<Complex64> = sites.iter().map(|&x| diagonal_element(flux, t, x, s)).collect();
        for a in &vals {
            for b in &vals {
                worst = worst.max((a - b).norm());
            }
        }
    }
    worst
}

/// Sign convention of the magnetic-translation phase `e^{∓iΦ k∧l/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovarianceSign {
    Minus,
    Plus,
}

/// Maximum over random `(k, l, m)` and spins of
/// `|A_{kl} e^{∓iΦ k∧l/2} − A_{(k+m)(l+m)} e^{∓iΦ (k+m)∧(l+m)/2}|`
/// for `A = W^t` in the symmetric gauge. `k − l` is drawn from the light
/// cone so that the entries are not trivially zero.
pub fn covariance_check_with<R: Rng + ?Sized>(flux: Flux, t: usize, trials: usize, sign: CovarianceSign, rng: &mut R) -> f64 {
    let g = GaugeField::symmetric(flux);
    let phi = flux.value();
    let sgn = match sign {
        CovarianceSign::Minus => -1.0,
        CovarianceSign::Plus => 1.0,
    };
    let reach = t as i64;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let l = Site::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let k = l + Site::new(rng.gen_range(-reach..=reach), rng.gen_range(-reach..=reach));
        let m = Site::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let a = propagate_point(&g, t, l, Spin::Up);
        let a_down = propagate_point(&g, t, l, Spin::Down);
        let b = propagate_point(&g, t, l + m, Spin::Up);
        let b_down = propagate_point(&g, t, l + m, Spin::Down);
        let pa = Complex64::from_polar(1.0, sgn * phi * k.wedge(l) as f64 / 2.0);
        let pb = Complex64::from_polar(1.0, sgn * phi * (k + m).wedge(l + m) as f64 / 2.0);
        for s_out in Spin::BOTH {
            for (col_a, col_b) in [(&a, &b), (&a_down, &b_down)] {
                let lhs = col_a.at(k, s_out) * pa;
                let rhs = col_b.at(k + m, s_out) * pb;
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    worst
}

/// [`covariance_check_with`] using the phase `e^{+iΦ k∧l/2}`, which is the
/// one that matches `U1 = e^{−i x2 Φ/2}`, `U2 = e^{i x1 Φ/2}`.
pub fn covariance_check<R: Rng + ?Sized>(flux: Flux, t: usize, trials: usize, rng: &mut R) -> f64 {
    covariance_check_with(flux, t, trials, CovarianceSign::Plus, rng)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FluxRecord {
    pub p: i64,
    pub q: i64,
}

impl From<Flux> for FluxRecord {
    fn from(f: Flux) -> Self {
        FluxRecord { p: f.numerator(), q: f.denominator() }
    }
}

/// DOS output: eigenphases of `W_L`, their moments and a histogram.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DosReport {
    pub flux: FluxRecord,
    #[serde(rename = "L")]
    pub l: usize,
    pub eigenphases: Vec<f64>,
    pub moments: Vec<MomentEntry>,
    pub histogram: Vec<f64>,
}

impl DosReport {
    pub fn new(flux: Flux, l: usize, measure: &SpectralMeasure, t_max: usize, bins: usize) -> Self {
        DosReport {
            flux: flux.into(),
            l,
            eigenphases: measure.phases.iter().map(|&p| round12(p)).collect(),
            moments: measure.moments(t_max).entries(),
            histogram: measure.histogram(bins).into_iter().map(round12).collect(),
        }
    }
}

/// Exact trace moments of the infinite walk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub flux: FluxRecord,
    pub moments: Vec<MomentEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::restriction::restricted_walk;
    use crate::walk::{build_magnetic_walk, DENSE_CAP};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn eigen_examples() {
        let id = Mat::<Complex64>::identity(10, 10);
        let e = eigendecompose_unitary(&id).unwrap();
        assert!(e.phases.iter().all(|&p| p == 0.0 || (p - TAU).abs() < 1e-12));
        let d = Mat::<Complex64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(0.0, 1.0),
            (1, 1) => Complex64::new(0.0, -1.0),
            _ => ZERO,
        });
        let e = eigendecompose_unitary(&d).unwrap();
        assert!((e.phases[0] - PI / 2.0).abs() < 1e-14);
        assert!((e.phases[1] - 3.0 * PI / 2.0).abs() < 1e-14);
        let bad = Mat::<Complex64>::from_fn(2, 2, |_, _| Complex64::new(1.0, 0.0));
        assert!(matches!(eigendecompose_unitary(&bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn restricted_walk_eigenpairs() {
        let w = restricted_walk(&GaugeField::symmetric(Flux::zero()), 4).unwrap();
        let e = eigendecompose_unitary(&w.to_dense(DENSE_CAP).unwrap()).unwrap();
        assert_eq!(e.phases.len(), 162);
        assert!(e.max_residual <= 1e-8);
        let sparse_route = unitary_eigenphases(&w, DENSE_CAP).unwrap();
        assert_eq!(sparse_route.len(), 162);
    }

    #[test]
    fn dos_basics() {
        let l = 3;
        let w = restricted_walk(&GaugeField::symmetric(Flux::new(1, 3).unwrap()), l).unwrap();
        let phases = unitary_eigenphases(&w, DENSE_CAP).unwrap();
        let mu = dos_measure(&phases, l).unwrap();
        assert!((mu.total_mass() - 1.0).abs() < 1e-12);
        assert!((mu.cdf(TAU - 1e-15) - 1.0).abs() < 1e-12);
        assert!((mu.cdf(TAU + 0.5) - 1.0 - mu.cdf(0.5)).abs() < 1e-12);
        // eigenphase moments equal normalised traces
        let by_trace = trace_moments(&w, 6, Normalization::PerState);
        let by_phase = mu.moments(6);
        for t in 0..=6 {
            assert!((by_trace.values[t] - by_phase.values[t]).norm() < 1e-12, "t = {t}");
        }
        let per_site = trace_moments(&w, 3, Normalization::PerSite);
        assert!((per_site.values[0] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(dos_measure(&phases[1..], l).is_err());
    }

    #[test]
    fn sdf_small_times() {
        for f in [Flux::zero(), Flux::new(2, 7).unwrap()] {
            let m = sdf_moments(f, 4);
            assert!((m.values[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            assert_eq!(m.values[1], ZERO);
            assert_eq!(m.get(-2), Some(m.values[2].conj()));
        }
        // dense oracle for t = 2, Φ = 0
        let b = LatticeBox::new(3);
        let w = build_magnetic_walk(&GaugeField::symmetric(Flux::zero()), b).matrix(DENSE_CAP).unwrap();
        let w2 = &w * &w;
        let i = b.state_index(Site::ORIGIN, Spin::Up).unwrap();
        let expect = 0.5 * (w2[(i, i)] + w2[(i + 1, i + 1)]);
        assert!((sdf_moments(Flux::zero(), 2).values[2] - expect).norm() < 1e-14);
    }

    #[test]
    fn interior_diagonals_agree() {
        let g = GaugeField::symmetric(Flux::new(2, 7).unwrap());
        let w = restricted_walk(&g, 8).unwrap();
        let (dev, n) = interior_trace_deviation(&g, 8, &w, 3).unwrap();
        assert!(n > 0);
        assert!(dev <= 1e-12, "{dev}");
    }

    #[test]
    fn first_moment_deviation_is_the_trace() {
        let l = 4;
        let f = Flux::new(2, 5).unwrap();
        let w = restricted_walk(&GaugeField::symmetric(f), l).unwrap();
        let dos = trace_moments(&w, 2, Normalization::PerState);
        let cmp = moment_compare(&dos, &sdf_moments(f, 2), 2, Some(l)).unwrap();
        assert_eq!(cmp.deviations[0], 0.0);
        let tr: Complex64 = (0..w.nrows()).map(|i| w.get(i, i)).sum();
        assert!((cmp.deviations[1] - tr.norm() / w.nrows() as f64).abs() < 1e-15);
        assert!(moment_compare(&dos, &sdf_moments(f, 2), 3, None).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(max_multiplicity(&[0.1, 0.5, 1.0, 2.0], 1e-8), 1);
        assert_eq!(max_multiplicity(&[0.0; 7], 1e-8), 7);
        assert_eq!(max_multiplicity(&[0.0, 0.0, 3.0, TAU - 1e-10], 1e-8), 3);
        assert_eq!(max_multiplicity(&[], 1e-8), 0);
    }

    #[test]
    fn covariance_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(covariance_check(Flux::new(1, 3).unwrap(), 0, 10, &mut rng) < 1e-15);
        assert!(diagonal_spread(Flux::new(1, 3).unwrap(), 1, &[Site::ORIGIN, Site::new(3, 1)]) == 0.0);
    }

    #[test]
    fn covariance_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = covariance_check(Flux::new(2, 7).unwrap(), 3, 50, &mut rng);
        // the opposite phase convention does not give a symmetry
        let wrong = covariance_check_with(Flux::new(2, 7).unwrap(), 3, 50, CovarianceSign::Minus, &mut rng);
        assert!(wrong > 1e-3);
        assert!(d <= 1e-11, "{d}");
    }

    #[test]
    fn histogram_and_tv() {
        let mu = SpectralMeasure::new(vec![(0.1, 0.5), (PI, 0.25), (-0.1, 0.25)], Provenance::Moments).unwrap();
        let h = mu.histogram(4);
        assert_eq!(h, vec![0.5, 0.0, 0.25, 0.25]);
        assert_eq!(total_variation(&h, &h), 0.0);
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert!(SpectralMeasure::new(vec![(0.0, 0.0)], Provenance::Moments).is_err());
    }

    proptest! {
        #[test]
        fn cdf_and_moments_agree(atoms in prop::collection::vec((0.0..TAU, 0.01..1.0f64), 1..30), t in 0i64..8) {
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(p, w)| (p, w / total)).collect();
            let mu = SpectralMeasure::new(atoms, Provenance::Moments).unwrap();
            prop_assert!((mu.total_mass() - 1.0).abs() < 1e-12);
            // re-integrate e^{itθ} against the jumps of the CDF
            let mut prev = 0.0;
            let mut acc = ZERO;
            let mut seen = Vec::new();
            for &p in &mu.phases {
                if seen.contains(&p) { continue; }
                seen.push(p);
                let c = mu.cdf(p);
                acc += Complex64::from_polar(c - prev, t as f64 * p);
                prev = c;
            }
            prop_assert!((acc - mu.moment(t)).norm() < 1e-12);
            prop_assert!((mu.moment(-t) - mu.moment(t).conj()).norm() < 1e-12);
        }
    }
}
