//! Independent reference implementations shared by the integration tests.
//! Nothing here calls the crate's own linear algebra beyond its data types.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use qdarwin_core::{CMatrix, CVector, DensityMatrix, ModelParams, StateVector, SubsystemLayout};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Tr over every factor not in `keep`, by explicit multi-index contraction.
pub fn naive_partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> CMatrix {
    let total: usize = dims.iter().product();
    let digits = |mut idx: usize| {
        let mut d = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            d[k] = idx % dims[k];
            idx /= dims[k];
        }
        d
    };
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let dk: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..total {
        let di = digits(i);
        for j in 0..total {
            let dj = digits(j);
            let traced_equal = (0..dims.len()).all(|k| keep.contains(&k) || di[k] == dj[k]);
            if traced_equal {
                out[(kept_index(&di), kept_index(&dj))] += m[(i, j)];
            }
        }
    }
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn pauli(name: char) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    match name {
        'i' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        'x' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!(),
    }
}

/// Tensor product of single-qubit Paulis given as a string, leftmost factor first.
pub fn pauli_string(s: &str) -> CMatrix {
    s.chars().skip(1).fold(pauli(s.chars().next().unwrap()), |acc, ch| kron(&acc, &pauli(ch)))
}

/// H built term by term from Kronecker products.
pub fn naive_hamiltonian(p: &ModelParams) -> CMatrix {
    let n = p.n;
    let ids = "i".repeat(n);
    let mut h = pauli_string(&format!("x{ids}")) * c(p.omega * p.p, 0.0)
        + pauli_string(&format!("z{ids}")) * c(p.omega * (1.0 - p.p), 0.0);
    for k in 0..n {
        let mut s = String::from("z");
        for j in 0..n {
            s.push(if j == k { 'x' } else { 'i' });
        }
        h += pauli_string(&s) * c(p.gamma, 0.0);
    }
    h
}

/// Eigenvalues of a Hermitian matrix through a real 2d×2d embedding, so the
/// check does not share the crate's complex eigen path.
pub fn real_embedded_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let d = m.nrows();
    let mut r = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i + d, j + d)] = z.re;
            r[(i, j + d)] = -z.im;
            r[(i + d, j)] = z.im;
        }
    }
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(r).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    // every eigenvalue appears twice in the embedding
    ev.into_iter().step_by(2).collect()
}

pub fn entropy_bits(m: &CMatrix) -> f64 {
    real_embedded_eigenvalues(m)
        .into_iter()
        .filter(|&l| l > 1e-14)
        .map(|l| -l * l.log2())
        .sum()
}

/// S(ρ_F) − Σ_a p_a S(ρ_{F|a}) for one system basis, from explicit projectors.
pub fn chi_for_basis(rho: &CMatrix, fraction_dim: usize, theta: f64, phi: f64) -> f64 {
    let dims = [2, fraction_dim];
    let rho_f = naive_partial_trace(rho, &dims, &[1]);
    let (ct, st) = (theta.cos(), theta.sin());
    let e = C64::from_polar(1.0, phi);
    let kets = [[c(ct, 0.0), e * st], [c(st, 0.0), -e * ct]];
    let mut avg = 0.0;
    for k in kets {
        let v = CVector::from_column_slice(&k);
        let proj = &v * v.adjoint();
        let big = kron(&proj, &CMatrix::identity(fraction_dim, fraction_dim));
        let post = &big * rho * &big;
        let cond = naive_partial_trace(&post, &dims, &[1]);
        let p = cond.trace().re;
        if p > 1e-14 {
            avg += p * entropy_bits(&(cond / c(p, 0.0)));
        }
    }
    entropy_bits(&rho_f) - avg
}

/// Dense θ×φ grid over the full sphere followed by shrinking coordinate
/// search around the best cell.
pub fn grid_chi(rho: &CMatrix, fraction_dim: usize, n_theta: usize, n_phi: usize) -> f64 {
    use std::f64::consts::PI;
    let f = |t: f64, p: f64| chi_for_basis(rho, fraction_dim, t, p);
    let mut best = (f64::MIN, 0.0, 0.0);
    for i in 0..n_theta {
        let t = PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let p = 2.0 * PI * j as f64 / n_phi as f64;
            let v = f(t, p);
            if v > best.0 {
                best = (v, t, p);
            }
        }
    }
    let mut step = (PI / n_theta as f64, 2.0 * PI / n_phi as f64);
    while step.0 > 1e-9 {
        let mut improved = false;
        for (dt, dp) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let (t, p) = (best.1 + dt * step.0, best.2 + dp * step.1);
            let v = f(t, p);
            if v > best.0 {
                best = (v, t, p);
                improved = true;
            }
        }
        if !improved {
            step = (step.0 / 2.0, step.1 / 2.0);
        }
    }
    best.0
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random density matrix of the given rank from a Ginibre factor.
pub fn random_density<R: Rng>(rng: &mut R, layout: SubsystemLayout, rank: usize) -> DensityMatrix {
    let d = layout.dim();
    let g = random_matrix(rng, d, rank);
    let m = &g * g.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    // exact hermiticity
    m = (&m + m.adjoint()) * c(0.5, 0.0);
    DensityMatrix::new(m, layout).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R, layout: SubsystemLayout) -> StateVector {
    let v = random_matrix(rng, layout.dim(), 1).column(0).into_owned();
    StateVector::normalized(v, layout).unwrap()
}

pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    random_matrix(rng, d, d).qr().q()
}

pub fn two_qubits() -> SubsystemLayout {
    SubsystemLayout::qubits(&["S", "E1"]).unwrap()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
