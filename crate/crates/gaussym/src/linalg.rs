//! Dense linear-algebra helpers shared by the rest of the crate.
//!
//! Matrices are small (tens of rows), so everything is eigendecomposition
//! based and favors accuracy over speed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Dmat = DMatrix<f64>;
pub type Dvec = DVector<f64>;
pub type Cmat = DMatrix<C64>;
pub type Cvec = DVector<C64>;

/// Symplectic form Ω on `n` modes in the interleaved basis:
/// block-diagonal with `n` copies of [[0, 1], [−1, 0]].
pub fn omega(n: usize) -> Dmat {
    assert!(n >= 1, "omega requires at least one mode");
    let mut m = Dmat::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    m
}

pub fn frobenius(m: &Dmat) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn frobenius_c(m: &Cmat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖a − b‖_F / max(‖b‖_F, 1).
pub fn rel_diff(a: &Dmat, b: &Dmat) -> f64 {
    frobenius(&(a - b)) / frobenius(b).max(1.0)
}

pub fn rel_diff_c(a: &Cmat, b: &Cmat) -> f64 {
    frobenius_c(&(a - b)) / frobenius_c(b).max(1.0)
}

pub fn to_complex(m: &Dmat) -> Cmat {
    m.map(|x| C64::new(x, 0.0))
}

/// Largest |imaginary part| dropped; callers assert it is negligible.
pub fn to_real(m: &Cmat) -> (Dmat, f64) {
    let max_im = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    (m.map(|z| z.re), max_im)
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn sym_eigen(m: &Dmat) -> (Dvec, Dmat) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    sort_eigen(eig.eigenvalues, eig.eigenvectors)
}

fn sort_eigen(vals: Dvec, vecs: Dmat) -> (Dvec, Dmat) {
    let n = vals.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let sorted_vals = Dvec::from_iterator(n, idx.iter().map(|&i| vals[i]));
    let mut sorted_vecs = Dmat::zeros(vecs.nrows(), n);
    for (k, &i) in idx.iter().enumerate() {
        sorted_vecs.set_column(k, &vecs.column(i));
    }
    (sorted_vals, sorted_vecs)
}

/// Eigendecomposition of a complex Hermitian matrix, eigenvalues ascending.
pub fn herm_eigen(m: &Cmat) -> (Dvec, Cmat) {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let vals = eig.eigenvalues;
    let vecs = eig.eigenvectors;
    let n = vals.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let sorted_vals = Dvec::from_iterator(n, idx.iter().map(|&i| vals[i]));
    let mut sorted_vecs = Cmat::zeros(vecs.nrows(), n);
    for (k, &i) in idx.iter().enumerate() {
        sorted_vecs.set_column(k, &vecs.column(i));
    }
    (sorted_vals, sorted_vecs)
}

/// f(M) for symmetric positive-definite (or semidefinite, if `f` allows it)
/// `M`, through the spectral decomposition M = O Λ Oᵀ.
///
/// `f` returns `None` for eigenvalues outside its domain; the offending
/// eigenvalue is reported in the error.
pub fn matrix_function_spd(
    m: &Dmat,
    f: impl Fn(f64) -> Option<f64>,
    name: &'static str,
) -> Result<Dmat> {
    let sym_res = rel_diff(&m.transpose(), m);
    if sym_res > 1e-8 {
        return Err(Error::NotPositiveDefinite(format!(
            "matrix is not symmetric (residual {sym_res:.3e})"
        )));
    }
    let (vals, vecs) = sym_eigen(m);
    let mut fvals = Dvec::zeros(vals.len());
    for (i, &v) in vals.iter().enumerate() {
        match f(v) {
            Some(fv) => fvals[i] = fv,
            None => return Err(Error::Domain { function: name, value: v }),
        }
    }
    Ok(&vecs * Dmat::from_diagonal(&fvals) * vecs.transpose())
}

/// √M for SPD `M`.
pub fn spd_sqrt(m: &Dmat) -> Result<Dmat> {
    matrix_function_spd(m, |x| if x >= 0.0 { Some(x.sqrt()) } else { None }, "sqrt")
}

/// M^{−1/2} for SPD `M`.
pub fn spd_inv_sqrt(m: &Dmat) -> Result<Dmat> {
    matrix_function_spd(
        m,
        |x| if x > 0.0 { Some(1.0 / x.sqrt()) } else { None },
        "inv_sqrt",
    )
}

/// log det M for SPD `M`, via Cholesky.
pub fn spd_log_det(m: &Dmat) -> Result<f64> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("Cholesky failed in log det".into()))?;
    let l = chol.l();
    Ok(2.0 * (0..m.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// Solve M x = b for SPD `M`.
pub fn spd_solve(m: &Dmat, b: &Dvec) -> Result<Dvec> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("Cholesky failed in solve".into()))?;
    Ok(chol.solve(b))
}

/// Matrix exponential of a real matrix.
pub fn expm(m: &Dmat) -> Dmat {
    m.clone().exp()
}

/// Matrix exponential of a complex matrix (scaling and squaring with a
/// truncated Taylor series; matrices here are small and well scaled).
pub fn expm_c(m: &Cmat) -> Cmat {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = m / C64::new(2f64.powi(s as i32), 0.0);
    let mut term = Cmat::identity(n, n);
    let mut acc = Cmat::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        acc += &term;
    }
    let mut out = acc;
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

/// Orthonormal basis of the (right) null space of a complex matrix, via the
/// Gram matrix M†M; eigenvalues below (tol·s_max)² count as zero.
pub fn nullspace_c(m: &Cmat, tol: f64) -> Cmat {
    let gram = m.adjoint() * m;
    let (vals, vecs) = herm_eigen(&gram); // ascending
    let vmax = vals[vals.len() - 1].max(0.0);
    // the eigensolver's zero floor is ~ε·λ_max, so never cut below that
    let cut = vmax.max(1.0) * (tol * tol).max(3e-13);
    let cols: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] <= cut).collect();
    let mut out = Cmat::zeros(m.ncols(), cols.len());
    for (k, &i) in cols.iter().enumerate() {
        out.set_column(k, &vecs.column(i));
    }
    out
}

/// Real-matrix null space basis, as for [`nullspace_c`].
pub fn nullspace(m: &Dmat, tol: f64) -> Dmat {
    let gram = m.transpose() * m;
    let (vals, vecs) = sym_eigen(&gram);
    let vmax = vals[vals.len() - 1].max(0.0);
    let cut = vmax.max(1.0) * (tol * tol).max(3e-13);
    let cols: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] <= cut).collect();
    let mut out = Dmat::zeros(m.ncols(), cols.len());
    for (k, &i) in cols.iter().enumerate() {
        out.set_column(k, &vecs.column(i));
    }
    out
}

/// Simultaneous eigendecomposition of a family of pairwise commuting
/// Hermitian matrices.
///
/// Returns a unitary `q` and per-matrix eigenvalue lists such that
/// qᴴ mats[k] q is diagonal with the k-th list on the diagonal. Blocks are
/// refined matrix by matrix; `cluster_tol[k]` decides when two eigenvalues
/// of `mats[k]` belong to the same degenerate cluster.
pub fn joint_hermitian_eigenbasis(mats: &[Cmat], cluster_tol: &[f64]) -> (Cmat, Vec<Vec<f64>>) {
    assert_eq!(mats.len(), cluster_tol.len());
    let n = mats[0].nrows();
    let mut q = Cmat::identity(n, n);
    let mut blocks: Vec<(usize, usize)> = vec![(0, n)];
    let mut vals: Vec<Vec<f64>> = vec![vec![0.0; n]; mats.len()];

    for (k, m) in mats.iter().enumerate() {
        let mut next_blocks = Vec::new();
        for &(lo, hi) in &blocks {
            let qb = q.columns(lo, hi - lo).into_owned();
            let compressed = qb.adjoint() * m * &qb;
            let (evals, evecs) = herm_eigen(&compressed);
            let rotated = &qb * &evecs;
            for (j, col) in rotated.column_iter().enumerate() {
                q.set_column(lo + j, &col);
                vals[k][lo + j] = evals[j];
            }
            // split the block into degenerate clusters
            let mut start = lo;
            for j in 1..(hi - lo) {
                if (evals[j] - evals[j - 1]).abs() > cluster_tol[k] {
                    next_blocks.push((start, lo + j));
                    start = lo + j;
                }
            }
            next_blocks.push((start, hi));
        }
        blocks = next_blocks;
    }
    (q, vals)
}

/// Random orthogonal-free symmetric matrix entries are not needed here; see
/// call sites for purpose-built random generators.
pub fn kron(a: &Dmat, b: &Dmat) -> Dmat {
    a.kronecker(b)
}

pub fn kron_c(a: &Cmat, b: &Cmat) -> Cmat {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_squares_to_minus_identity() {
        for n in 1..=3 {
            let o = omega(n);
            let id = Dmat::identity(2 * n, 2 * n);
            assert!(rel_diff(&(&o * &o), &(-&id)) < 1e-15);
            assert!(rel_diff(&o.transpose(), &(-&o)) < 1e-15);
        }
    }

    #[test]
    fn spd_sqrt_squares_back() {
        let a = Dmat::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let r = spd_sqrt(&a).unwrap();
        assert!(rel_diff(&(&r * &r), &a) < 1e-10);
    }

    #[test]
    fn matrix_function_reports_offending_eigenvalue() {
        let a = Dmat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let err = matrix_function_spd(&a, |x| if x > 0.0 { Some(x.ln()) } else { None }, "ln")
            .unwrap_err();
        match err {
            Error::Domain { value, .. } => assert!((value + 2.0).abs() < 1e-12),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn expm_complex_matches_scalar() {
        let m = Cmat::from_row_slice(1, 1, &[C64::new(0.3, 1.2)]);
        let e = expm_c(&m);
        let expect = C64::new(0.3, 1.2).exp();
        assert!((e[(0, 0)] - expect).norm() < 1e-12);
    }

    #[test]
    fn joint_eigenbasis_diagonalizes_commuting_pair() {
        // A = diag(1,1,2), B arbitrary Hermitian commuting with A (block form)
        let a = Cmat::from_diagonal(&Cvec::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
        ]));
        let mut b = Cmat::zeros(3, 3);
        b[(0, 0)] = C64::new(0.5, 0.0);
        b[(0, 1)] = C64::new(0.1, 0.2);
        b[(1, 0)] = C64::new(0.1, -0.2);
        b[(1, 1)] = C64::new(-0.3, 0.0);
        b[(2, 2)] = C64::new(4.0, 0.0);
        let (q, vals) = joint_hermitian_eigenbasis(&[a.clone(), b.clone()], &[1e-9, 1e-9]);
        for (m, v) in [(a, &vals[0]), (b, &vals[1])] {
            let d = q.adjoint() * &m * &q;
            for i in 0..3 {
                assert!((d[(i, i)].re - v[i]).abs() < 1e-10);
                for j in 0..3 {
                    if i != j {
                        assert!(d[(i, j)].norm() < 1e-10);
                    }
                }
            }
        }
    }
}
