use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::Result;

/// Downhill-simplex minimizer with the standard coefficients
/// (reflection 1, expansion 2, contraction ½, shrink ½).
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop as soon as the best value drops to this level.
    pub f_target: f64,
    /// Stop once every vertex lies within this distance of the best one.
    pub x_tol: f64,
    /// Per-coordinate offsets for the initial simplex.
    pub initial_step: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmReport {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    /// Largest distance from the best vertex to any other vertex.
    pub diameter: f64,
    pub reached_target: bool,
    pub reached_tolerance: bool,
}

impl NelderMead {
    pub fn new(initial_step: Vec<f64>) -> Self {
        NelderMead { max_iter: 2000, f_target: f64::NEG_INFINITY, x_tol: 1e-10, initial_step }
    }

    pub fn minimize<F>(&self, mut objective: F, x0: &[f64]) -> Result<NmReport>
    where
        F: FnMut(&[f64]) -> Result<f64>,
    {
        let n = x0.len();
        assert_eq!(self.initial_step.len(), n, "initial step dimension mismatch");
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), objective(x0)?));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.initial_step[i];
            let f = objective(&x)?;
            simplex.push((x, f));
        }

        let mut iterations = 0;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let diameter = diameter(&simplex);
            let best = simplex[0].1;
            let reached_target = best <= self.f_target;
            let reached_tolerance = diameter < self.x_tol;
            if reached_target || reached_tolerance || iterations >= self.max_iter {
                let (x, f) = simplex.swap_remove(0);
                return Ok(NmReport { x, f, iterations, diameter, reached_target, reached_tolerance });
            }
            iterations += 1;

            let centroid: Vec<f64> =
                (0..n).map(|d| simplex[..n].iter().map(|v| v.0[d]).sum::<f64>() / n as f64).collect();
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> { (0..n).map(|d| centroid[d] + t * (worst.0[d] - centroid[d])).collect() };

            let xr = along(-1.0);
            let fr = objective(&xr)?;
            if fr < simplex[0].1 {
                let xe = along(-2.0);
                let fe = objective(&xe)?;
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc, accept) = if fr < worst.1 {
                let xc = along(-0.5);
                let fc = objective(&xc)?;
                (xc, fc, fc <= fr)
            } else {
                let xc = along(0.5);
                let fc = objective(&xc)?;
                (xc, fc, fc < worst.1)
            };
            if accept {
                simplex[n] = (xc, fc);
                continue;
            }
            let x_best = simplex[0].0.clone();
            for v in simplex.iter_mut().skip(1) {
                for (x, b) in v.0.iter_mut().zip(&x_best) {
                    *x = b + 0.5 * (*x - b);
                }
                v.1 = objective(&v.0)?;
            }
        }
    }
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}
