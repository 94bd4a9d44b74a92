//! Derivative-free search over projective qubit measurements.
//!
//! A qubit measurement is a Bloch direction, and opposite directions give the
//! same measurement, so the search space is a hemisphere. A fixed coarse grid
//! seeds a Nelder-Mead refinement from its best points.

use std::f64::consts::{PI, TAU};

use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Stop when every vertex lies within this distance of every other.
    pub diameter_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            diameter_tol: tolerances::SIMPLEX_DIAMETER,
            max_evals: tolerances::SIMPLEX_MAX_EVALS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..simplex.len() {
        for j in i + 1..simplex.len() {
            let dist = simplex[i]
                .iter()
                .zip(&simplex[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d = d.max(dist);
        }
    }
    d
}

/// Minimises `f` with the Nelder-Mead simplex method from an axis-aligned
/// initial simplex `x0 + step_i e_i`.
pub fn nelder_mead_minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: &[f64],
    opts: SimplexOptions,
) -> SimplexResult {
    let dim = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    loop {
        // stable ordering keeps runs deterministic under ties
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if diameter(&simplex) < opts.diameter_tol || evals >= opts.max_evals {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|v| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = eval(&expanded, &mut evals);
            if fe < fr {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[dim] {
            let c = along(-0.5);
            let fc = eval(&c, &mut evals);
            (c, fc)
        } else {
            let c = along(0.5);
            let fc = eval(&c, &mut evals);
            (c, fc)
        };
        if fc < values[dim].min(fr) {
            simplex[dim] = contracted;
            values[dim] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=dim {
            let shrunk: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| b + 0.5 * (x - b))
                .collect();
            values[i] = eval(&shrunk, &mut evals);
            simplex[i] = shrunk;
        }
    }

    SimplexResult {
        x: simplex[0].clone(),
        value: values[0],
        evaluations: evals,
    }
}

/// Maps arbitrary (θ, φ) to the representative of the same measurement with
/// θ ∈ [0, π/2], φ ∈ [0, 2π) (φ ∈ [0, π) on the equator, φ = 0 at the pole).
pub fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut theta = theta.rem_euclid(TAU);
    let mut phi = phi;
    if theta > PI {
        theta = TAU - theta;
        phi += PI;
    }
    if theta > PI / 2.0 {
        theta = PI - theta;
        phi += PI;
    }
    phi = phi.rem_euclid(TAU);
    if (theta - PI / 2.0).abs() < 1e-12 {
        theta = PI / 2.0;
        phi = phi.rem_euclid(PI);
    }
    if theta.sin() < 1e-15 {
        phi = 0.0;
    }
    if phi >= TAU {
        phi = 0.0;
    }
    (theta, phi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereOptimum {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Grid-then-simplex maximiser over measurement directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSearch {
    /// Polar divisions of [0, π]; the grid covers the θ ≤ π/2 half.
    pub theta_divisions: usize,
    /// Azimuthal divisions of [0, 2π).
    pub phi_divisions: usize,
    /// Number of best grid points refined.
    pub starts: usize,
    pub simplex: SimplexOptions,
}

impl Default for SphereSearch {
    fn default() -> Self {
        Self {
            theta_divisions: tolerances::BASIS_GRID_THETA,
            phi_divisions: tolerances::BASIS_GRID_PHI,
            starts: tolerances::BASIS_REFINE_STARTS,
            simplex: SimplexOptions::default(),
        }
    }
}

impl SphereSearch {
    /// Hemisphere grid, one point per distinct measurement.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        let dtheta = PI / self.theta_divisions as f64;
        let dphi = TAU / self.phi_divisions as f64;
        let mut pts = vec![(0.0, 0.0)];
        let mut i = 1;
        while i as f64 * dtheta <= PI / 2.0 + 1e-12 {
            let theta = (i as f64 * dtheta).min(PI / 2.0);
            let equator = (theta - PI / 2.0).abs() < 1e-12;
            for j in 0..self.phi_divisions {
                let phi = j as f64 * dphi;
                if equator && phi >= PI - 1e-12 {
                    break;
                }
                pts.push((theta, phi));
            }
            i += 1;
        }
        pts
    }

    pub fn maximize(&self, f: impl Fn(f64, f64) -> f64) -> SphereOptimum {
        let grid = self.grid();
        let mut scored: Vec<(f64, f64, f64)> =
            grid.iter().map(|&(t, p)| (f(t, p), t, p)).collect();
        let mut evaluations = scored.len();
        scored.sort_by(|a, b| {
            b.0.total_cmp(&a.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.total_cmp(&b.2))
        });

        let step = [
            0.5 * PI / self.theta_divisions as f64,
            0.5 * TAU / self.phi_divisions as f64,
        ];
        let mut best: Option<SphereOptimum> = None;
        for &(_, t0, p0) in scored.iter().take(self.starts.max(1)) {
            let res = nelder_mead_minimize(|x| -f(x[0], x[1]), &[t0, p0], &step, self.simplex);
            evaluations += res.evaluations;
            let (theta, phi) = canonical_angles(res.x[0], res.x[1]);
            let cand = SphereOptimum {
                theta,
                phi,
                value: -res.value,
                evaluations: 0,
            };
            best = Some(match best {
                None => cand,
                Some(b) => {
                    if cand.value > b.value + 1e-12
                        || ((cand.value - b.value).abs() <= 1e-12
                            && (cand.theta, cand.phi) < (b.theta, b.phi))
                    {
                        cand
                    } else {
                        b
                    }
                }
            });
        }
        let mut best = best.expect("grid is never empty");
        best.evaluations = evaluations;
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let res = nelder_mead_minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + 0.5 * x[0] * x[1],
            &[0.0, 0.0],
            &[0.3, 0.3],
            SimplexOptions {
                diameter_tol: 1e-9,
                max_evals: 2000,
            },
        );
        // stationary point of the quadratic solved by hand: 2(x-1)+0.5y=0, 6(y+0.5)+0.5x=0
        let y = (-3.0 - 0.5) / (6.0 - 0.125);
        let x = 1.0 - 0.25 * y;
        assert_abs_diff_eq!(res.x[0], x, epsilon = 1e-7);
        assert_abs_diff_eq!(res.x[1], y, epsilon = 1e-7);
    }

    #[test]
    fn evaluation_budget_respected() {
        let res = nelder_mead_minimize(|x| x[0].sin() * x[1], &[0.1, 0.2], &[0.1, 0.1], SimplexOptions {
            diameter_tol: 0.0,
            max_evals: 40,
        });
        assert!(res.evaluations <= 45);
    }

    #[test]
    fn canonicalisation() {
        let (t, p) = canonical_angles(PI - 0.3, 0.2);
        assert_abs_diff_eq!(t, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(p, 0.2 + PI, epsilon = 1e-15);
        let (t, p) = canonical_angles(-0.4, 1.0);
        assert_abs_diff_eq!(t, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(p, 1.0 + PI, epsilon = 1e-15);
        assert_eq!(canonical_angles(0.0, 3.0), (0.0, 0.0));
        let (t, p) = canonical_angles(PI / 2.0, 1.5 * PI);
        assert_eq!(t, PI / 2.0);
        assert_abs_diff_eq!(p, 0.5 * PI, epsilon = 1e-12);
    }

    #[test]
    fn grid_covers_hemisphere_once() {
        let g = SphereSearch::default().grid();
        assert_eq!(g.len(), 1 + 11 * 48 + 24);
        for &(t, p) in &g {
            assert_eq!(canonical_angles(t, p), (t, p));
        }
    }

    #[test]
    fn finds_direction_of_a_smooth_bump() {
        // f = (n·m)² peaks at ±m
        let m = (0.8f64, 2.0f64);
        let dir = |t: f64, p: f64| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
        let mv = dir(m.0, m.1);
        let opt = SphereSearch::default().maximize(|t, p| {
            let v = dir(t, p);
            (v[0] * mv[0] + v[1] * mv[1] + v[2] * mv[2]).powi(2)
        });
        assert_abs_diff_eq!(opt.value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(opt.theta, 0.8, epsilon = 1e-6);
        assert_abs_diff_eq!(opt.phi, 2.0, epsilon = 1e-6);
    }
}
