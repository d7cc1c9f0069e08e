//! Finite-difference check of the exact spectra.
//!
//! `-d^2/dx^2 + V` is discretised with central differences and Dirichlet ends on
//! `[x_min, x_max]`. Eigenvalues come from bisection on the Sturm count of the
//! symmetric tridiagonal matrix, eigenvectors from inverse iteration.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dbt::{extend, extra_state, regularity, transformed_wave, Series};
use crate::error::{Error, Result};
use crate::exact::{isolate_roots, Bound, Rat};
use crate::field::{EvenField, Params};
use crate::rsfields::{isotonic_potential, sector_wave};

/// Uniform grid, `h = (x_max - x_min) / (npoints - 1)`; the two end points carry
/// the Dirichlet condition, so the matrix has `npoints - 2` rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub npoints: usize,
}

pub const DEFAULT_POINTS: usize = 4000;

impl Grid {
    pub fn new(x_min: f64, x_max: f64, npoints: usize) -> Result<Grid> {
        if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) || npoints < 3 {
            return Err(Error::InvalidParams(format!(
                "grid needs 0 < x_min < x_max and npoints >= 3, got [{x_min}, {x_max}] with {npoints}"
            )));
        }
        Ok(Grid { x_min, x_max, npoints })
    }

    /// `x_min = 1e-3 sqrt(2/omega)`; `x_max = 2 sqrt(E_max + 20 omega) / omega`, the
    /// turning point of `omega^2 x^2 / 4` at 20 omega above the highest level.
    pub fn default_for(omega: f64, e_max: f64) -> Grid {
        let x_min = 1e-3 * (2.0 / omega).sqrt();
        let x_max = 2.0 * (e_max.max(0.0) + 20.0 * omega).sqrt() / omega;
        Grid {
            x_min,
            x_max,
            npoints: DEFAULT_POINTS,
        }
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.npoints - 1) as f64
    }

    /// Interior abscissae, one per matrix row.
    pub fn interior(&self) -> Vec<f64> {
        let h = self.h();
        (1..self.npoints - 1).map(|i| self.x_min + i as f64 * h).collect()
    }

    /// Same window with the spacing halved exactly.
    pub fn refined(&self) -> Grid {
        Grid {
            npoints: 2 * self.npoints - 1,
            ..*self
        }
    }
}

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i] = T[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> SymTridiagonal {
        assert!(!diag.is_empty() && off.len() + 1 == diag.len(), "off-diagonal must be one shorter");
        SymTridiagonal { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `diag = 2/h^2 + V(x_i)`, `off = -1/h^2`.
    pub fn from_potential(v: impl Fn(f64) -> f64, g: &Grid) -> SymTridiagonal {
        let h2 = g.h() * g.h();
        let diag = g.interior().into_iter().map(|x| 2.0 / h2 + v(x)).collect::<Vec<_>>();
        let off = vec![-1.0 / h2; diag.len() - 1];
        SymTridiagonal::new(diag, off)
    }

    /// Number of eigenvalues strictly below `lambda`, from the signs of the `LDL^T` pivots.
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.dim() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / d };
            d = self.diag[i] - lambda - coupling;
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + lambda.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `count` smallest eigenvalues in ascending order, each bracketed to
    /// `1e-10 * max(1, |lambda|)`.
    pub fn eigen_lowest(&self, count: usize) -> Vec<f64> {
        let count = count.min(self.dim());
        let (glo, ghi) = self.gershgorin();
        let mut out: Vec<f64> = Vec::with_capacity(count);
        for k in 0..count {
            let mut lo = out.last().copied().unwrap_or(glo).min(ghi);
            let mut hi = ghi;
            while hi - lo > 1e-10 * lo.abs().max(hi.abs()).max(1.0) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    /// Unit eigenvector for an eigenvalue estimate, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..3 {
            v = self.shifted_solve(lambda, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    /// Solves `(T - lambda) y = b` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, lambda: f64, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::EPSILON * self.gershgorin().1.abs().max(1.0);
        // Row i of U holds u0[i] (diagonal), u1[i], u2[i] (two super-diagonals).
        let mut u0: Vec<f64> = self.diag.iter().map(|d| d - lambda).collect();
        let mut u1: Vec<f64> = self.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut lower = self.off.clone();
        let mut y = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if lower[i].abs() > u0[i].abs() {
                // swap rows i and i+1
                let (a0, a1, a2) = (u0[i], u1[i], u2[i]);
                u0[i] = lower[i];
                u1[i] = u0[i + 1];
                u2[i] = u1[i + 1];
                lower[i] = a0;
                u0[i + 1] = a1;
                u1[i + 1] = a2;
                y.swap(i, i + 1);
            }
            if u0[i] == 0.0 {
                u0[i] = tiny;
            }
            let m = lower[i] / u0[i];
            u0[i + 1] -= m * u1[i];
            u1[i + 1] -= m * u2[i];
            y[i + 1] -= m * y[i];
        }
        if u0[n - 1] == 0.0 {
            u0[n - 1] = tiny;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / u0[i];
        }
        x
    }
}

/// Interior sign changes, skipping entries below `1e-6` of the largest magnitude.
pub fn count_nodes(v: &[f64]) -> usize {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &x in v {
        if x.abs() <= 1e-6 * scale {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            nodes += 1;
        }
        last = x;
    }
    nodes
}

/// Rejects windows containing a pole of the potential (in `xi`) and `a < 1`, where a
/// Dirichlet condition at `x_min` is the wrong boundary behaviour.
pub fn check_window(v: &EvenField, a: &Rat, g: &Grid) -> Result<()> {
    if *a < 1 {
        return Err(Error::UnsupportedBoundary(format!(
            "a = {a} < 1: the solution near the origin is not captured by a Dirichlet wall"
        )));
    }
    let om = v.omega().to_f64();
    let to_xi = |x: f64| Rat::from_f64(0.5 * om * x * x).expect("finite grid end");
    let (lo, hi) = (to_xi(g.x_min), to_xi(g.x_max));
    let den = v.ratfunc().den();
    for end in [&lo, &hi] {
        if den.sign_at(end) == 0 {
            return Err(Error::PoleInWindow {
                lo: end.clone(),
                hi: end.clone(),
            });
        }
    }
    if let Some(iv) = isolate_roots(den, &Bound::At(lo), &Bound::At(hi))?.into_iter().next() {
        return Err(Error::PoleInWindow { lo: iv.lo, hi: iv.hi });
    }
    Ok(())
}

pub fn discretize(v: &EvenField, a: &Rat, g: &Grid) -> Result<SymTridiagonal> {
    check_window(v, a, g)?;
    Ok(SymTridiagonal::from_potential(|x| v.eval_f64(x), g))
}

/// What to diagonalise: the isotonic potential itself or one extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Base,
    #[serde(untagged)]
    Extended(Series, usize),
}

impl Target {
    pub fn potential(self, p: &Params) -> Result<EvenField> {
        match self {
            Target::Base => Ok(isotonic_potential(p)),
            Target::Extended(series, n) => {
                let ep = extend(series, n, p)?;
                let rep = regularity(&ep)?;
                if let Some(iv) = rep.pole_locations.first() {
                    // Poles anywhere on the half line make the problem ill posed, even
                    // if they fall outside the chosen window.
                    return Err(Error::PoleInWindow {
                        lo: iv.lo.clone(),
                        hi: iv.hi.clone(),
                    });
                }
                Ok(ep.field)
            }
        }
    }

    /// `2 k omega` for `k < levels`, preceded by `-2(n+1) omega` for L3.
    pub fn predicted(self, p: &Params, levels: usize) -> Vec<Rat> {
        let two_om = &p.omega * Rat::from_int(2);
        let mut out = Vec::with_capacity(levels + 1);
        if let Target::Extended(Series::L3, n) = self {
            out.push(-(&two_om * Rat::from_int(n as i64 + 1)));
        }
        out.extend((0..levels).map(|k| &two_om * Rat::from_int(k as i64)));
        out
    }
}

/// Computed against predicted low-lying spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub target: Target,
    pub params: Params,
    pub grid: Grid,
    pub energies: Vec<f64>,
    pub predicted: Vec<Rat>,
    pub abs_errors: Vec<f64>,
    pub max_abs_error: f64,
    pub node_counts: Vec<usize>,
}

impl SpectrumReport {
    pub fn nodes_ok(&self) -> bool {
        self.node_counts.iter().enumerate().all(|(k, &c)| c == k)
    }

    /// CSV rows `k,predicted,computed,abs_error,nodes`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Parse(e.to_string());
        wr.write_record(["k", "predicted", "computed", "abs_error", "nodes"]).map_err(io)?;
        for k in 0..self.energies.len() {
            wr.write_record([
                k.to_string(),
                self.predicted[k].to_string(),
                format!("{:.12}", self.energies[k]),
                format!("{:.3e}", self.abs_errors[k]),
                self.node_counts[k].to_string(),
            ])
            .map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}

/// Default grid sized for the highest predicted level.
pub fn default_grid(target: Target, p: &Params, levels: usize) -> Grid {
    let e_max = target.predicted(p, levels).last().map_or(0.0, Rat::to_f64);
    Grid::default_for(p.omega.to_f64(), e_max)
}

pub fn spectrum_check(target: Target, p: &Params, levels: usize, g: &Grid) -> Result<SpectrumReport> {
    let v = target.potential(p)?;
    let t = discretize(&v, &p.a, g)?;
    let predicted = target.predicted(p, levels);
    let energies = t.eigen_lowest(predicted.len());
    let node_counts = energies.iter().map(|&e| count_nodes(&t.eigenvector(e))).collect();
    let abs_errors: Vec<f64> = energies.iter().zip(&predicted).map(|(e, p)| (e - p.to_f64()).abs()).collect();
    Ok(SpectrumReport {
        target,
        params: p.clone(),
        grid: *g,
        max_abs_error: abs_errors.iter().cloned().fold(0.0, f64::max),
        energies,
        predicted,
        abs_errors,
        node_counts,
    })
}

/// Eigenvalue errors on a grid and on the same window with half the spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub coarse_errors: Vec<f64>,
    pub fine_errors: Vec<f64>,
    pub ratios: Vec<f64>,
}

pub fn convergence_check(target: Target, p: &Params, levels: usize, g: &Grid) -> Result<ConvergenceReport> {
    let coarse = spectrum_check(target, p, levels, g)?;
    let fine = spectrum_check(target, p, levels, &g.refined())?;
    let ratios = coarse.abs_errors.iter().zip(&fine.abs_errors).map(|(c, f)| c / f).collect();
    Ok(ConvergenceReport {
        coarse_errors: coarse.abs_errors,
        fine_errors: fine.abs_errors,
        ratios,
    })
}

/// Exact eigenfunction sampled on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveCheck {
    pub label: String,
    pub energy: Rat,
    pub rayleigh: f64,
    pub nodes: usize,
    pub expected_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveReport {
    pub waves: Vec<WaveCheck>,
    pub max_rayleigh_error: f64,
    /// Largest `|<psi_i, psi_j>| / (|psi_i| |psi_j|)` over distinct pairs.
    pub max_overlap: f64,
}

impl WaveReport {
    pub fn nodes_ok(&self) -> bool {
        self.waves.iter().all(|w| w.nodes == w.expected_nodes)
    }
}

/// Labelled exact eigenfunctions of a target, ordered by energy, for `k <= k_max`.
pub fn exact_waves(target: Target, p: &Params, k_max: usize) -> Result<Vec<(String, Rat, Box<dyn Fn(f64) -> f64>)>> {
    let mut out: Vec<(String, Rat, Box<dyn Fn(f64) -> f64>)> = Vec::new();
    match target {
        Target::Base => {
            for k in 0..=k_max {
                let w = sector_wave(1, k, p)?;
                out.push((format!("psi_{k}"), w.energy.clone(), Box::new(move |x| w.eval_f64(x))));
            }
        }
        Target::Extended(series, n) => {
            if series == Series::L3 {
                let w = extra_state(series, n, p)?;
                out.push(("psi_minus".into(), w.energy.clone(), Box::new(move |x| w.eval_f64(x))));
            }
            for k in 0..=k_max {
                let w = transformed_wave(series, n, k, p)?;
                out.push((format!("psi_{k}"), w.wave.energy.clone(), Box::new(move |x| w.eval_f64(x))));
            }
        }
    }
    Ok(out)
}

pub fn wave_checks(target: Target, p: &Params, k_max: usize, g: &Grid) -> Result<WaveReport> {
    let v = target.potential(p)?;
    let t = discretize(&v, &p.a, g)?;
    let xs = g.interior();
    let h = g.h();
    let samples: Vec<(String, Rat, Vec<f64>)> = exact_waves(target, p, k_max)?
        .into_iter()
        .map(|(l, e, f)| (l, e, xs.iter().map(|&x| f(x)).collect()))
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * h;
    let apply = |u: &[f64]| -> Vec<f64> {
        (0..u.len())
            .map(|i| {
                let mut s = t.diag[i] * u[i];
                if i > 0 {
                    s += t.off[i - 1] * u[i - 1];
                }
                if i + 1 < u.len() {
                    s += t.off[i] * u[i + 1];
                }
                s
            })
            .collect()
    };
    let mut waves = Vec::new();
    let mut max_rayleigh_error = 0.0f64;
    for (i, (label, energy, psi)) in samples.iter().enumerate() {
        let rayleigh = dot(psi, &apply(psi)) / dot(psi, psi);
        max_rayleigh_error = max_rayleigh_error.max((rayleigh - energy.to_f64()).abs());
        waves.push(WaveCheck {
            label: label.clone(),
            energy: energy.clone(),
            rayleigh,
            nodes: count_nodes(psi),
            expected_nodes: i,
        });
    }
    let mut max_overlap = 0.0f64;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let (a, b) = (&samples[i].2, &samples[j].2);
            max_overlap = max_overlap.max(dot(a, b).abs() / (dot(a, a) * dot(b, b)).sqrt());
        }
    }
    Ok(WaveReport {
        waves,
        max_rayleigh_error,
        max_overlap,
    })
}
