use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::linalg::{invert_spd, solve};

/// Levenberg-Marquardt with Marquardt diagonal scaling and a central
/// difference Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct LevenbergMarquardt {
    pub max_iter: usize,
    /// Relative step for the numerical Jacobian.
    pub jac_step: f64,
    /// Converged when an accepted step lowers the cost by less than this
    /// fraction.
    pub ftol: f64,
    /// Converged when the accepted step is this small relative to `x`.
    pub xtol: f64,
    pub initial_lambda: f64,
}

impl Default for LevenbergMarquardt {
    fn default() -> Self {
        LevenbergMarquardt { max_iter: 500, jac_step: 1e-6, ftol: 1e-14, xtol: 1e-14, initial_lambda: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmReport {
    pub x: Vec<f64>,
    /// Sum of squared residuals at `x`.
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Diagonal of `(JᵀJ)⁻¹ · cost / (m − n)` when defined.
    pub covariance_diag: Option<Vec<f64>>,
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

impl LevenbergMarquardt {
    pub fn minimize<F>(&self, mut residuals: F, x0: &[f64]) -> LmReport
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let n = x0.len();
        let mut x = x0.to_vec();
        let mut r = residuals(&x);
        let m = r.len();
        let mut cost = sum_sq(&r);
        let mut lambda = self.initial_lambda;
        let mut iterations = 0;
        let mut converged = false;
        let mut jtj = vec![0.0; n * n];

        if !cost.is_finite() {
            return LmReport { x, cost, iterations, converged, covariance_diag: None };
        }

        while iterations < self.max_iter {
            iterations += 1;
            let jac = self.jacobian(&mut residuals, &x, m);
            let mut g = vec![0.0; n];
            for a in 0..n {
                for b in a..n {
                    let v: f64 = (0..m).map(|k| jac[k * n + a] * jac[k * n + b]).sum();
                    jtj[a * n + b] = v;
                    jtj[b * n + a] = v;
                }
                g[a] = (0..m).map(|k| jac[k * n + a] * r[k]).sum();
            }
            if cost == 0.0 || g.iter().all(|v| *v == 0.0) {
                converged = true;
                break;
            }

            let mut accepted = false;
            while lambda < 1e16 {
                let mut a = jtj.clone();
                for d in 0..n {
                    a[d * n + d] += lambda * jtj[d * n + d].max(1e-12);
                }
                let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
                let step = match solve(&a, &rhs) {
                    Some(s) => s,
                    None => {
                        lambda *= 10.0;
                        continue;
                    }
                };
                let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
                let r_trial = residuals(&trial);
                let c_trial = sum_sq(&r_trial);
                if c_trial.is_finite() && c_trial < cost {
                    let drop = cost - c_trial;
                    let step_norm = step.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    x = trial;
                    r = r_trial;
                    cost = c_trial;
                    lambda = (lambda / 10.0).max(1e-15);
                    accepted = true;
                    if drop <= self.ftol * (cost + drop) || step_norm <= self.xtol * (x_norm + self.xtol) {
                        converged = true;
                    }
                    break;
                }
                lambda *= 10.0;
            }
            if !accepted {
                // no descent direction left at working precision
                converged = true;
                break;
            }
            if converged {
                break;
            }
        }

        let covariance_diag = (m > n)
            .then(|| invert_spd(&jtj, n))
            .flatten()
            .map(|inv| (0..n).map(|d| inv[d * n + d] * cost / (m - n) as f64).collect());
        LmReport { x, cost, iterations, converged, covariance_diag }
    }

    fn jacobian<F>(&self, residuals: &mut F, x: &[f64], m: usize) -> Vec<f64>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let n = x.len();
        let mut jac = vec![0.0; m * n];
        let mut xp = x.to_vec();
        for c in 0..n {
            let h = self.jac_step * (x[c].abs() + 1e-3);
            xp[c] = x[c] + h;
            let rp = residuals(&xp);
            xp[c] = x[c] - h;
            let rm = residuals(&xp);
            xp[c] = x[c];
            for k in 0..m {
                jac[k * n + c] = (rp[k] - rm[k]) / (2.0 * h);
            }
        }
        jac
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn exponential_round_trip() {
        let ts: Vec<f64> = (0..40).map(|k| k as f64 * 0.1).collect();
        let data: Vec<f64> = ts.iter().map(|t| 2.5 * (-1.3 * t).exp() + 0.2).collect();
        let rep = LevenbergMarquardt::default().minimize(
            |p| ts.iter().zip(&data).map(|(t, y)| p[0] * (-p[1] * t).exp() + p[2] - y).collect(),
            &[1.0, 0.5, 0.0],
        );
        assert!(rep.converged);
        assert!(
            (rep.x[0] - 2.5).abs() < 1e-8 && (rep.x[1] - 1.3).abs() < 1e-8 && (rep.x[2] - 0.2).abs() < 1e-8,
            "{:?}",
            rep.x
        );
        assert!(rep.cost < 1e-20);
    }

    #[test]
    fn linear_fit_covariance() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> =
            xs.iter().enumerate().map(|(k, x)| 1.0 + 2.0 * x + if k % 2 == 0 { 0.1 } else { -0.1 }).collect();
        let rep = LevenbergMarquardt::default()
            .minimize(|p| xs.iter().zip(&ys).map(|(x, y)| p[0] + p[1] * x - y).collect(), &[0.0, 0.0]);
        let cov = rep.covariance_diag.unwrap();
        assert!(cov.iter().all(|v| *v > 0.0));
        assert!((rep.x[1] - 2.0).abs() < 0.05);
    }
}
