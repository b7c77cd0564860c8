//! Derivative-free minimization with the Nelder–Mead simplex method.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub max_iter: usize,
    /// Largest vertex distance from the best vertex at convergence.
    pub x_tol: f64,
    /// Largest objective spread across the simplex at convergence.
    pub f_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_iter: 2000,
            x_tol: 1e-8,
            f_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `x0` plus one vertex per axis at distance `step`.
pub fn axis_simplex(x0: &[f64], step: f64) -> Vec<Vec<f64>> {
    let mut simplex = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    simplex
}

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, simplex: Vec<Vec<f64>>) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = simplex[0].len();
        assert!(
            simplex.len() == dim + 1 && simplex.iter().all(|v| v.len() == dim),
            "simplex must have dim + 1 vertices of equal length"
        );
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        };
        let mut verts: Vec<(Vec<f64>, f64)> = simplex
            .into_iter()
            .map(|x| {
                let v = eval(&x);
                (x, v)
            })
            .collect();

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            verts.sort_by(|a, b| a.1.total_cmp(&b.1));
            if self.is_converged(&verts) {
                converged = true;
                break;
            }
            iterations += 1;

            let worst = dim;
            let mut centroid = vec![0.0; dim];
            for (x, _) in &verts[..worst] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / dim as f64;
                }
            }
            let toward = |from: &[f64], scale: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, x)| c + scale * (x - c))
                    .collect()
            };

            let xr = toward(&verts[worst].0, -self.reflection);
            let fr = eval(&xr);
            if fr < verts[0].1 {
                let xe = toward(&xr, self.expansion);
                let fe = eval(&xe);
                verts[worst] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < verts[worst - 1].1 {
                verts[worst] = (xr, fr);
                continue;
            }
            let (xc, fc, accept) = if fr < verts[worst].1 {
                let xc = toward(&xr, self.contraction);
                let fc = eval(&xc);
                (xc, fc, fc <= fr)
            } else {
                let xc = toward(&verts[worst].0, self.contraction);
                let fc = eval(&xc);
                (xc, fc, fc < verts[worst].1)
            };
            if accept {
                verts[worst] = (xc, fc);
                continue;
            }
            let best = verts[0].0.clone();
            for (x, v) in verts.iter_mut().skip(1) {
                for (xi, bi) in x.iter_mut().zip(&best) {
                    *xi = bi + self.shrink * (*xi - bi);
                }
                *v = eval(x);
            }
        }
        verts.sort_by(|a, b| a.1.total_cmp(&b.1));
        if !converged {
            converged = self.is_converged(&verts);
        }
        let (point, value) = verts.swap_remove(0);
        Minimum {
            point,
            value,
            iterations,
            converged,
        }
    }

    fn is_converged(&self, sorted: &[(Vec<f64>, f64)]) -> bool {
        let best = &sorted[0];
        let spread = sorted[sorted.len() - 1].1 - best.1;
        if !(spread <= self.f_tol) {
            return false;
        }
        sorted.iter().skip(1).all(|(x, _)| {
            let d2: f64 = x.iter().zip(&best.0).map(|(a, b)| (a - b) * (a - b)).sum();
            d2.sqrt() <= self.x_tol
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let nm = NelderMead::default();
        let m = nm.minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5 * (x[2] - 0.3).powi(2),
            axis_simplex(&[0.0, 0.0, 0.0], 1.0),
        );
        assert!(m.converged);
        assert!((m.point[0] - 1.0).abs() < 1e-7);
        assert!((m.point[1] + 2.0).abs() < 1e-7);
        assert!((m.point[2] - 0.3).abs() < 1e-7);
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead {
            max_iter: 5000,
            ..NelderMead::default()
        };
        let m = nm.minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            axis_simplex(&[-1.2, 1.0], 0.5),
        );
        assert!(m.converged);
        assert!((m.point[0] - 1.0).abs() < 1e-6 && (m.point[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let nm = NelderMead::default();
        let m = nm.minimize(
            |x| {
                if x[0] < 0.0 {
                    f64::NAN
                } else {
                    (x[0] - 2.0).powi(2) + x[1] * x[1]
                }
            },
            axis_simplex(&[0.5, 0.5], 1.0),
        );
        assert!((m.point[0] - 2.0).abs() < 1e-7);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let nm = NelderMead {
            max_iter: 3,
            ..NelderMead::default()
        };
        let m = nm.minimize(
            |x| x[0] * x[0] + x[1] * x[1],
            axis_simplex(&[5.0, 5.0], 1.0),
        );
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }
}
