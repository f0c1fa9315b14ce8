//! The invariant suite behind `magwalk check`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{axis_correspondence, compare_1d_2d, symmetry_report};
use crate::bloch::band_spectrum;
use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::gauge::GaugeField;
use crate::lattice::Site;
use crate::propagation::{determining_set, eigen_residual, propagate_eigenfunction, Sweep};
use crate::restriction::{boundary_sets, build_decoupled_with, difference_support, restrict};
use crate::spectral::{
    covariance_check, diagonal_spread, dos_measure, interior_trace_deviation, max_multiplicity, trace_moments,
    unitary_eigenphases, Normalization, CLUSTER_TOL,
};
use crate::walk::{quasiperiodic_coins, DENSE_CAP};

/// Deliberate defects for exercising the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    SkipDecouplingCoin,
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub flux: Flux,
    pub l: usize,
    pub q_max: i64,
    pub n_k: usize,
    pub t_max: usize,
    pub cluster_tol: f64,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            flux: Flux::new(5, 8).expect("reduced"),
            l: 6,
            q_max: 8,
            n_k: 16,
            t_max: 4,
            cluster_tol: CLUSTER_TOL,
            seed: 7,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl CheckItem {
    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        CheckItem { name: name.into(), value, bound, pass: value <= bound }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.items
            .iter()
            .map(|i| {
                let tag = if i.pass { "PASS" } else { "FAIL" };
                format!("{tag} {:<28} value={:.3e} bound={:.3e}", i.name, i.value, i.bound)
            })
            .collect()
    }
}

pub fn run_checks(cfg: &CheckConfig) -> Result<CheckReport> {
    if cfg.l < 2 || cfg.q_max < 1 || cfg.n_k < 8 {
        return Err(Error::InvalidArgument("check needs L ≥ 2, qmax ≥ 1, kgrid ≥ 8".into()));
    }
    let mut items = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let flux = cfg.flux;
    let g = GaugeField::symmetric(flux);

    let mut worst_modulus: f64 = 0.0;
    let mut worst_count: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    let fluxes = Flux::enumerate(cfg.q_max);
    let spectra = fluxes.iter().map(|&f| band_spectrum(f, cfg.n_k)).collect::<Result<Vec<_>>>()?;
    for (f, b) in fluxes.iter().zip(&spectra) {
        worst_modulus = worst_modulus.max(b.modulus_deviation);
        worst_count = worst_count.max((b.branch_count() as f64 - 2.0 * f.period() as f64).abs());
        let j = fluxes.iter().position(|o| *o == f.reversed()).expect("closed under reversal");
        worst_sym = worst_sym.max(symmetry_report(*f, &b.arcs, &spectra[j].arcs)?.max());
    }
    items.push(CheckItem::at_most("band eigenvalue modulus", worst_modulus, 1e-10));
    items.push(CheckItem::at_most("band count minus 2q", worst_count, 0.0));
    items.push(CheckItem::at_most("butterfly symmetries", worst_sym, 1e-8));

    let with_ring = cfg.fault != Some(Fault::SkipDecouplingCoin);
    let w_l = match restrict(&build_decoupled_with(&g, cfg.l, with_ring)?, cfg.l) {
        Ok(m) => Some(m),
        Err(Error::NotUnitary { deviation, tolerance }) => {
            items.push(CheckItem { name: "W_L unitarity".into(), value: deviation, bound: tolerance, pass: false });
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(w_l) = &w_l {
        items.push(CheckItem::at_most("W_L unitarity", w_l.unitarity_deviation(), 1e-12));
    }

    let delta2 = boundary_sets(cfg.l)?.delta2;
    let stray = difference_support(&g, cfg.l)?.iter().filter(|x| !delta2.contains(x)).count();
    items.push(CheckItem::at_most("W - W_d support off ring", stray as f64, 0.0));

    if let Some(w_l) = &w_l {
        let (dev, _) = interior_trace_deviation(&g, cfg.l, w_l, cfg.t_max)?;
        items.push(CheckItem::at_most("interior trace equality", dev, 1e-12));

        let phases = unitary_eigenphases(w_l, DENSE_CAP)?;
        let dos = dos_measure(&phases, cfg.l)?;
        let traces = trace_moments(w_l, cfg.t_max, Normalization::PerState);
        let consistency =
            (0..=cfg.t_max).map(|t| (dos.moment(t as i64) - traces.values[t]).norm()).fold(0.0, f64::max);
        items.push(CheckItem::at_most("DOS moment consistency", consistency, 1e-12));

        let side = 2 * cfg.l + 1;
        let mult = max_multiplicity(&phases, cfg.cluster_tol);
        items.push(CheckItem::at_most("max multiplicity", mult as f64, (8 * side) as f64));
        items.push(CheckItem::at_most("largest DOS atom", mult as f64 / (side * side) as f64, 8.0 / side as f64));
    }

    let sites: Vec<Site> = (0..10).map(|_| Site::new(rng.gen_range(-20..=20), rng.gen_range(-20..=20))).collect();
    let spread = (0..=cfg.t_max).map(|t| diagonal_spread(flux, t, &sites)).fold(0.0, f64::max);
    items.push(CheckItem::at_most("diagonal x-independence", spread, 1e-12));
    let cov = (0..=cfg.t_max.min(4)).map(|t| covariance_check(flux, t, 10, &mut rng)).fold(0.0, f64::max);
    items.push(CheckItem::at_most("magnetic covariance", cov, 1e-11));

    let coins = quasiperiodic_coins(flux);
    let pl = 4;
    let mut residual: f64 = 0.0;
    for sweep in [Sweep::Downward, Sweep::Upward] {
        let nb = 2 * determining_set(pl, sweep)?.len();
        let data: Vec<Complex64> =
            (0..nb).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        let psi = propagate_eigenfunction(&data, z, pl, &coins, sweep)?;
        residual = residual.max(eigen_residual(&psi, z, &coins, sweep)?);
    }
    items.push(CheckItem::at_most("propagation residual", residual, 1e-9));

    let axis = axis_correspondence(flux, rng.gen_range(0.0..TAU), cfg.n_k)?;
    items.push(CheckItem::at_most("sigma1/sigma2 correspondence", axis.distance, 1e-10));

    let cmp = compare_1d_2d(flux, 16, cfg.n_k)?;
    items.push(CheckItem::at_most("1D/2D distance", cmp.distance, cmp.grid_tolerance));

    Ok(CheckReport { items })
}
