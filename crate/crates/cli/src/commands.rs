use clap::{Args, ValueEnum};
use dicke_core::dicke::{self, Phase};
use dicke_core::gaussian::{self, log_negativity, symplectic_spectrum};
use dicke_core::measurements::{
    fi_homodyne, fi_photon_counting, mean_photon_decomposition, photon_distribution, Cutoff,
    HomodyneSetting, Subsystem,
};
use dicke_core::qfi::{cramer_rao_bound, qfi};
use dicke_core::Result;
use nalgebra::DVector;
use rayon::prelude::*;

use crate::config::Sweep;
use crate::table::{Cell, Row, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Radiation,
    Atoms,
}

impl From<Target> for Subsystem {
    fn from(t: Target) -> Self {
        match t {
            Target::Radiation => Subsystem::Radiation,
            Target::Atoms => Subsystem::Atoms,
        }
    }
}

fn sweep_rows<F>(table: &mut Table, keys: &[Vec<Cell>], f: F)
where
    F: Fn(usize) -> Result<Vec<Cell>> + Sync,
{
    let width = table.width();
    let rows: Vec<Row> = (0..keys.len())
        .into_par_iter()
        .map(|i| match f(i) {
            Ok(cells) => Row::ok(cells),
            Err(e) => Row::failed(keys[i].clone(), width, &e),
        })
        .collect();
    table.rows = rows;
}

fn lambda_keys(sweep: &Sweep) -> Vec<Vec<Cell>> {
    sweep.grid.iter().map(|&l| vec![Cell::Float(l)]).collect()
}

pub fn entanglement(sweep: &Sweep) -> Table {
    let mut t = Table::new("entanglement", &["lambda", "log_negativity", "ppt_d_minus"]);
    sweep_rows(&mut t, &lambda_keys(sweep), |i| {
        let lam = sweep.grid[i];
        let gs = dicke::ground_state(&sweep.params(lam))?;
        let spec = symplectic_spectrum(gs.cov())?;
        Ok(vec![
            Cell::Float(lam),
            Cell::Float(log_negativity(gs.cov())?),
            Cell::Float(spec.ppt_d_minus),
        ])
    });
    t
}

pub fn qfi_table(sweep: &Sweep) -> Table {
    let mut t = Table::new(
        "qfi",
        &["lambda", "qfi", "quadratic_term", "displacement_term"],
    );
    sweep_rows(&mut t, &lambda_keys(sweep), |i| {
        let lam = sweep.grid[i];
        let h = qfi(&sweep.params(lam))?;
        Ok(vec![
            Cell::Float(lam),
            Cell::Float(h.qfi),
            Cell::Float(h.quadratic_term),
            Cell::Float(h.displacement_term),
        ])
    });
    t
}

#[derive(Debug, Clone, Args)]
pub struct WignerArgs {
    /// Which mode to plot
    #[arg(long, value_enum, default_value = "radiation")]
    pub mode: Target,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub p_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub p_max: f64,
    /// Points per phase-space axis
    #[arg(long, default_value_t = 41)]
    pub grid_points: usize,
}

impl WignerArgs {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.grid_points < 2 {
            return Err("grid_points must be >= 2".into());
        }
        if !(self.x_max > self.x_min) || !(self.p_max > self.p_min) {
            return Err("phase-space ranges must be non-empty".into());
        }
        Ok(())
    }
}

pub fn wigner(sweep: &Sweep, args: &WignerArgs) -> Table {
    let n = args.grid_points;
    let axis = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut keys = Vec::new();
    for &lam in &sweep.grid {
        for i in 0..n {
            for j in 0..n {
                keys.push(vec![
                    Cell::Float(lam),
                    Cell::Float(axis(args.x_min, args.x_max, i)),
                    Cell::Float(axis(args.p_min, args.p_max, j)),
                ]);
            }
        }
    }
    let mut t = Table::new("wigner", &["lambda", "x", "p", "wigner"]);
    let mode = Subsystem::from(args.mode).mode();
    sweep_rows(&mut t, &keys, |k| {
        let lam = sweep.grid[k / (n * n)];
        let (i, j) = ((k / n) % n, k % n);
        let gs = dicke::ground_state(&sweep.params(lam))?;
        let red = gaussian::partial_trace(&gs, &[mode])?;
        let (x, p) = (
            axis(args.x_min, args.x_max, i),
            axis(args.p_min, args.p_max, j),
        );
        let w = gaussian::wigner_at(&red, &DVector::from_vec(vec![x, p]))?;
        Ok(vec![
            Cell::Float(lam),
            Cell::Float(x),
            Cell::Float(p),
            Cell::Float(w),
        ])
    });
    t
}

pub fn fi_homodyne_table(sweep: &Sweep, target: Target) -> Table {
    let phis = &sweep.config.phi;
    let pairs: Vec<(f64, f64)> = sweep
        .grid
        .iter()
        .flat_map(|&l| phis.iter().map(move |&p| (l, p)))
        .collect();
    let keys: Vec<Vec<Cell>> = pairs
        .iter()
        .map(|&(l, p)| vec![Cell::Float(l), Cell::Float(p)])
        .collect();
    let mut t = Table::new("fi_homodyne", &["lambda", "phi", "fi", "qfi", "ratio"]);
    sweep_rows(&mut t, &keys, |i| {
        let (lam, phi) = pairs[i];
        let params = sweep.params(lam);
        let fi = fi_homodyne(
            &params,
            &HomodyneSetting {
                phi,
                target: target.into(),
            },
        )?;
        let h = qfi(&params)?.qfi;
        Ok(vec![
            Cell::Float(lam),
            Cell::Float(phi),
            Cell::Float(fi),
            Cell::Float(h),
            Cell::Float(fi / h),
        ])
    });
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhotonTable {
    /// Mean photon number and its decomposition
    Mean,
    /// Photon-number probabilities
    Distribution,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct PhotonArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub table: PhotonTable,
    /// Fixed cutoff of the distribution (default: until the tail is below 1e-10)
    #[arg(long)]
    pub n_max: Option<usize>,
}

pub fn photon_mean(sweep: &Sweep) -> Table {
    let mut t = Table::new(
        "photon_mean",
        &["lambda", "squeezing", "thermal", "coherent", "total"],
    );
    sweep_rows(&mut t, &lambda_keys(sweep), |i| {
        let lam = sweep.grid[i];
        let red = dicke::reduced_radiation_state(&sweep.params(lam))?;
        let m = mean_photon_decomposition(&red)?;
        Ok(vec![
            Cell::Float(lam),
            Cell::Float(m.squeezing),
            Cell::Float(m.thermal),
            Cell::Float(m.coherent),
            Cell::Float(m.total),
        ])
    });
    t
}

pub fn photon_distribution_table(sweep: &Sweep, n_max: Option<usize>) -> Table {
    let cutoff = n_max.map_or(Cutoff::default(), Cutoff::Fixed);
    let per_lambda: Vec<std::result::Result<Vec<f64>, dicke_core::Error>> = sweep
        .grid
        .par_iter()
        .map(|&lam| {
            let red = dicke::reduced_radiation_state(&sweep.params(lam))?;
            Ok(photon_distribution(&red, cutoff)?.probs)
        })
        .collect();
    let mut t = Table::new("photon_distribution", &["lambda", "n", "probability"]);
    for (&lam, res) in sweep.grid.iter().zip(per_lambda) {
        match res {
            Ok(probs) => {
                for (n, p) in probs.into_iter().enumerate() {
                    t.rows.push(Row::ok(vec![
                        Cell::Float(lam),
                        Cell::Int(n as u64),
                        Cell::Float(p),
                    ]));
                }
            }
            Err(e) => t.rows.push(Row::failed(vec![Cell::Float(lam)], 3, &e)),
        }
    }
    t
}

pub fn fi_photon_table(sweep: &Sweep) -> Table {
    let mut t = Table::new("fi_photon", &["lambda", "fi", "qfi", "ratio", "n_max"]);
    sweep_rows(&mut t, &lambda_keys(sweep), |i| {
        let lam = sweep.grid[i];
        let params = sweep.params(lam);
        let fi = fi_photon_counting(&params)?;
        let h = qfi(&params)?.qfi;
        Ok(vec![
            Cell::Float(lam),
            Cell::Float(fi.fi),
            Cell::Float(h),
            Cell::Float(fi.fi / h),
            Cell::Int(fi.n_max as u64),
        ])
    });
    t
}

pub fn report(sweep: &Sweep, samples: Option<u64>) -> Table {
    let mut t = Table::new(
        "report",
        &[
            "lambda",
            "lambda_c",
            "phase",
            "qfi",
            "quadratic_term",
            "displacement_term",
            "log_negativity",
            "mean_photons",
            "samples",
            "cramer_rao_bound",
        ],
    );
    sweep_rows(&mut t, &lambda_keys(sweep), |i| {
        let lam = sweep.grid[i];
        let params = sweep.params(lam);
        let derived = dicke::derive(&params)?;
        let h = qfi(&params)?;
        let gs = dicke::ground_state(&params)?;
        let red = gaussian::partial_trace(&gs, &[0])?;
        let (m, bound) = match samples {
            Some(m) => (Cell::Int(m), Cell::Float(cramer_rao_bound(h.qfi, m)?)),
            None => (Cell::Missing, Cell::Missing),
        };
        let phase = match derived.phase {
            Phase::Normal => "normal",
            Phase::Superradiant => "superradiant",
        };
        Ok(vec![
            Cell::Float(lam),
            Cell::Float(derived.lambda_c),
            Cell::Text(phase.into()),
            Cell::Float(h.qfi),
            Cell::Float(h.quadratic_term),
            Cell::Float(h.displacement_term),
            Cell::Float(log_negativity(gs.cov())?),
            Cell::Float(mean_photon_decomposition(&red)?.total),
            m,
            bound,
        ])
    });
    t
}
