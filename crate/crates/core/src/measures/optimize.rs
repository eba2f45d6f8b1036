//! Grid search followed by Nelder-Mead refinement over local qubit angles.

use rand::seq::index::sample;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

use super::OptimizerConfig;
use crate::qcore::random::rng_from_seed;

/// Cap on the number of coarse grid cells evaluated. Grids above this size
/// are subsampled deterministically.
pub const MAX_GRID_CELLS: usize = 20_736;

#[derive(Debug, Clone)]
pub struct Minimum {
    pub angles: Vec<(f64, f64)>,
    pub value: f64,
    pub evaluations: usize,
}

fn theta_at(i: usize, g: usize) -> f64 {
    if g == 1 {
        0.0
    } else {
        i as f64 * FRAC_PI_2 / (g - 1) as f64
    }
}

fn phi_at(j: usize, g: usize) -> f64 {
    j as f64 * PI / g as f64
}

/// Angles of grid cell `cell` for `qubits` qubits; qubit 0 is the
/// slowest-varying digit and within a qubit theta varies slower than phi.
fn cell_angles(mut cell: usize, qubits: usize, g: usize) -> Vec<f64> {
    let per_qubit = g * g;
    let mut out = vec![0.0; 2 * qubits];
    for q in (0..qubits).rev() {
        let local = cell % per_qubit;
        cell /= per_qubit;
        out[2 * q] = theta_at(local / g, g);
        out[2 * q + 1] = phi_at(local % g, g);
    }
    out
}

/// Grid cells to evaluate, in a fixed order. The full grid when it fits;
/// otherwise the reference cell, every cell with identical angles on all
/// qubits, then seeded random cells.
fn coarse_cells(qubits: usize, cfg: &OptimizerConfig) -> Vec<usize> {
    let g = cfg.grid_points_per_angle;
    let per_qubit = g * g;
    let total = (per_qubit as u128).checked_pow(qubits as u32);
    match total {
        Some(t) if t <= MAX_GRID_CELLS as u128 => (0..t as usize).collect(),
        _ => {
            let total = total.unwrap_or(u128::MAX).min(usize::MAX as u128) as usize;
            let uniform = |local: usize| (0..qubits).fold(0usize, |acc, _| acc * per_qubit + local);
            let mut cells: Vec<usize> = (0..per_qubit).map(uniform).collect();
            let mut seen: std::collections::HashSet<usize> = cells.iter().copied().collect();
            let mut rng = rng_from_seed(cfg.seed);
            let want = MAX_GRID_CELLS.saturating_sub(cells.len());
            // oversample so duplicates of the uniform cells do not shrink the budget
            let draw = (want + per_qubit).min(total);
            for idx in sample(&mut rng, total, draw).into_iter() {
                if cells.len() >= MAX_GRID_CELLS {
                    break;
                }
                if seen.insert(idx) {
                    cells.push(idx);
                }
            }
            cells
        }
    }
}

/// Minimizes `f` over `qubits` pairs of (theta, phi).
pub fn minimize_angles<F>(qubits: usize, cfg: &OptimizerConfig, f: F) -> Minimum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let g = cfg.grid_points_per_angle;
    let cells = coarse_cells(qubits, cfg);
    let values: Vec<f64> = cells.par_iter().map(|&cell| f(&cell_angles(cell, qubits, g))).collect();
    let mut evaluations = cells.len();

    // best cells first; ties keep grid order
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let starts: Vec<Vec<f64>> = order
        .iter()
        .take(cfg.multistarts)
        .map(|&i| cell_angles(cells[i], qubits, g))
        .collect();

    let step = 0.5 * FRAC_PI_2 / g.max(2) as f64;
    let runs: Vec<NelderMead> = starts.par_iter().map(|x0| refine(&f, x0, step, cfg)).collect();

    let mut best_x = cell_angles(cells[order[0]], qubits, g);
    let mut best_f = values[order[0]];
    for run in runs {
        evaluations += run.evaluations;
        if run.value < best_f {
            best_f = run.value;
            best_x = run.x;
        }
    }
    Minimum {
        angles: best_x.chunks(2).map(|p| (p[0], p[1])).collect(),
        value: best_f,
        evaluations,
    }
}

/// Restarts allowed after the first Nelder-Mead run from one start.
pub const MAX_RESTARTS: usize = 8;

/// Nelder-Mead from `x0`, restarted from a fresh simplex around its own
/// result until a restart improves by no more than `refine_tol`. A collapsed
/// simplex in ten or more dimensions otherwise stalls short of the minimum.
fn refine<F>(f: &F, x0: &[f64], step: f64, cfg: &OptimizerConfig) -> NelderMead
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut best = nelder_mead(f, x0, step, cfg.refine_tol, cfg.max_refine_iters);
    let mut evaluations = best.evaluations;
    let mut iterations = best.iterations;
    for _ in 0..MAX_RESTARTS {
        let next = nelder_mead(f, &best.x, step, cfg.refine_tol, cfg.max_refine_iters);
        evaluations += next.evaluations;
        iterations += next.iterations;
        let gain = best.value - next.value;
        if gain > 0.0 {
            best = next;
        }
        if gain <= cfg.refine_tol {
            break;
        }
    }
    NelderMead {
        evaluations,
        iterations,
        ..best
    }
}

#[derive(Debug, Clone)]
pub struct NelderMead {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
}

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2) from an axis-aligned simplex of size `step`. Stops once the
/// spread of simplex values drops below `tol`.
pub fn nelder_mead<F>(f: &F, x0: &[f64], step: f64, tol: f64, max_iters: usize) -> NelderMead
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let mut iterations = 0;
    while iterations < max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[n].1 - simplex[0].1 < tol {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = along(-1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *fx = eval(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMead {
        x,
        value,
        evaluations,
        iterations,
    }
}
