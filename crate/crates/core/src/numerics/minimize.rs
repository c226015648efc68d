// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    /// Simplex diameter (max-norm distance of any vertex from the best one)
    /// below which a run counts as converged.
    pub tolerance: f64,
    /// Iteration cap per run.
    pub max_iterations: usize,
    /// Extra runs after the first, each started from the best point so far
    /// with multiplicative jitter.
    pub restarts: usize,
    pub seed: u64,
    /// Relative jitter applied on restart, uniform in [-jitter, jitter].
    pub jitter: f64,
    /// Initial simplex edge, relative to |x_i| (absolute when x_i = 0).
    pub initial_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 5000,
            restarts: 0,
            seed: 0,
            jitter: 0.1,
            initial_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    /// Nelder–Mead iterations summed over all runs.
    pub iterations: usize,
    pub evaluations: usize,
}

struct Run {
    x: Vec<f64>,
    fx: f64,
    converged: bool,
}

/// Derivative-free Nelder–Mead with optional seeded random restarts.
///
/// A run that meets a non-finite objective value is abandoned and reports the
/// best finite vertex it had. The returned value never exceeds `f(start)`.
pub fn minimize<F>(mut f: F, start: &[f64], opts: &MinimizeOptions) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    let f_start = f(start);
    if !f_start.is_finite() {
        return Err(Error::NonFiniteStart);
    }
    let mut counter = Counter {
        evaluations: 1,
        iterations: 0,
    };
    let mut best = Run {
        x: start.to_vec(),
        fx: f_start,
        converged: start.is_empty(),
    };
    if start.is_empty() {
        return Ok(Minimum {
            argmin: vec![],
            value: f_start,
            converged: true,
            iterations: 0,
            evaluations: 1,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for r in 0..=opts.restarts {
        let x0: Vec<f64> = if r == 0 {
            start.to_vec()
        } else {
            best.x
                .iter()
                .map(|&x| {
                    let u: f64 = rng.random_range(-opts.jitter..=opts.jitter);
                    if x == 0.0 {
                        u * opts.initial_step
                    } else {
                        x * (1.0 + u)
                    }
                })
                .collect()
        };
        let run = nelder_mead(&mut f, x0, opts, &mut counter);
        if run.fx <= best.fx {
            best = run;
        }
    }
    Ok(Minimum {
        argmin: best.x,
        value: best.fx,
        converged: best.converged,
        iterations: counter.iterations,
        evaluations: counter.evaluations,
    })
}

struct Counter {
    evaluations: usize,
    iterations: usize,
}

fn nelder_mead<F>(f: &mut F, x0: Vec<f64>, opts: &MinimizeOptions, counter: &mut Counter) -> Run
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut eval = |x: &[f64], counter: &mut Counter| {
        counter.evaluations += 1;
        f(x)
    };

    let f0 = eval(&x0, counter);
    if !f0.is_finite() {
        return Run {
            x: x0,
            fx: f64::INFINITY,
            converged: false,
        };
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.clone(), f0)];
    for i in 0..n {
        let mut x = x0.clone();
        x[i] += if x[i] != 0.0 {
            opts.initial_step * x[i]
        } else {
            opts.initial_step
        };
        let fx = eval(&x, counter);
        if !fx.is_finite() {
            return Run {
                x: x0,
                fx: f0,
                converged: false,
            };
        }
        simplex.push((x, fx));
    }

    let abort = |simplex: &mut Vec<(Vec<f64>, f64)>| {
        sort(simplex);
        let (x, fx) = simplex.swap_remove(0);
        Run {
            x,
            fx,
            converged: false,
        }
    };

    for _ in 0..opts.max_iterations {
        sort(&mut simplex);
        if diameter(&simplex) < opts.tolerance {
            let (x, fx) = simplex.swap_remove(0);
            return Run {
                x,
                fx,
                converged: true,
            };
        }
        counter.iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v.0[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = eval(&xr, counter);
        if !fr.is_finite() {
            return abort(&mut simplex);
        }
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe, counter);
            if !fe.is_finite() {
                return abort(&mut simplex);
            }
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(0.5);
            let fc = eval(&xc, counter);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc, counter);
            (xc, fc)
        };
        if !fc.is_finite() {
            return abort(&mut simplex);
        }
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            for (x, b) in v.0.iter_mut().zip(&best) {
                *x = b + 0.5 * (*x - b);
            }
            v.1 = eval(&v.0, counter);
            if !v.1.is_finite() {
                v.1 = f64::INFINITY;
            }
        }
        if simplex.iter().any(|v| !v.1.is_finite()) {
            return abort(&mut simplex);
        }
    }
    sort(&mut simplex);
    let (x, fx) = simplex.swap_remove(0);
    Run {
        x,
        fx,
        converged: false,
    }
}

fn sort(simplex: &mut [(Vec<f64>, f64)]) {
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .flat_map(|v| v.0.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}
