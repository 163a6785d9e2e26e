//! Symplectic predicates, spectra and decompositions.
//!
//! The workhorse is [`antisym_joint_canonical`]: an orthogonal congruence
//! bringing a real antisymmetric matrix to its 2×2 canonical form while
//! commuting with a supplied block-diagonal charge. Williamson's theorem,
//! its charge-respecting extension and the Bloch–Messiah decomposition are
//! all built on top of it.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    expm, frobenius, herm_eigen, joint_hermitian_eigenbasis, omega, rel_diff,
    spd_inv_sqrt, spd_sqrt, sym_eigen, to_complex, Cmat, Dmat, Dvec, C64,
};

/// True iff `m` is square, even-dimensional and satisfies M Ω Mᵀ = Ω within
/// the relative Frobenius tolerance `tol.sympl`.
pub fn is_symplectic(m: &Dmat, tol: &Tolerances) -> bool {
    symplectic_residual(m).map(|r| r <= tol.sympl).unwrap_or(false)
}

/// ‖MΩMᵀ − Ω‖_F / ‖Ω‖_F, or an error for odd/non-square shapes.
pub fn symplectic_residual(m: &Dmat) -> Result<f64> {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix cannot be symplectic",
            m.nrows(),
            m.ncols()
        )));
    }
    let om = omega(m.nrows() / 2);
    Ok(frobenius(&(m * &om * m.transpose() - &om)) / frobenius(&om))
}

/// True iff `m` is symplectic and orthogonal.
pub fn is_orthogonal_symplectic(m: &Dmat, tol: &Tolerances) -> bool {
    if !is_symplectic(m, tol) {
        return false;
    }
    let id = Dmat::identity(m.nrows(), m.ncols());
    rel_diff(&(m * m.transpose()), &id) <= tol.sympl
}

/// Symplectic spectrum of a covariance matrix: the moduli of the
/// eigenvalues of iΩσ, one per mode, in descending order.
#[derive(Debug, Clone)]
pub struct SymplecticSpectrum {
    /// One value per mode, descending.
    pub values: Vec<f64>,
    /// False when min ν < 1 − tol.phys, i.e. the uncertainty relation fails.
    pub physical: bool,
}

pub fn symplectic_eigenvalues(sigma: &Dmat, tol: &Tolerances) -> Result<SymplecticSpectrum> {
    let n = even_modes(sigma)?;
    let root = spd_sqrt(sigma)?;
    let a = &root * omega(n) * &root; // antisymmetric, eigenvalues ±iν
    let ia = to_complex(&a).map(|z| z * C64::new(0.0, 1.0));
    let (vals, _) = herm_eigen(&ia);
    // eigenvalues come in ±ν pairs; keep the non-negative half, descending
    let mut nus: Vec<f64> = vals.iter().cloned().filter(|v| *v >= 0.0).collect();
    nus.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if nus.len() != n {
        // pairing can split at 0 under rounding; rebuild from moduli
        let mut all: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
        all.sort_by(|a, b| b.partial_cmp(a).unwrap());
        nus = all.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect();
    }
    let physical = nus.last().map(|&v| v >= 1.0 - tol.phys).unwrap_or(true);
    Ok(SymplecticSpectrum { values: nus, physical })
}

fn even_modes(m: &Dmat) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected a square even-dimensional matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows() / 2)
}

/// Orthogonal congruence O A Oᵀ = ⊕ⱼ aⱼ Ω₁ for antisymmetric `a`.
///
/// When `charge` (an antisymmetric matrix of the form ⊕ qⱼΩ₁ commuting with
/// `a`) is supplied, the returned `o` additionally commutes with it and the
/// canonical coefficients are made non-negative, with the charge pattern of
/// the output matching the input pattern position by position. Returns
/// `(o, a_coeffs, q_coeffs)`.
pub fn antisym_joint_canonical(
    a: &Dmat,
    charge: Option<&Dmat>,
) -> Result<(Dmat, Vec<f64>, Vec<f64>)> {
    let n = even_modes(a)?;
    let anti_res = rel_diff(&a.transpose(), &(-a));
    if anti_res > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "matrix is not antisymmetric (residual {anti_res:.3e})"
        )));
    }
    let ia = to_complex(a).map(|z| z * C64::new(0.0, 1.0));
    let a_scale = frobenius(a).max(1e-12);

    let (q_basis, qvals, avals) = match charge {
        Some(qm) => {
            let comm = qm * a - a * qm;
            let comm_res = frobenius(&comm) / (frobenius(qm) * frobenius(a)).max(1e-300);
            if comm_res > 1e-7 {
                return Err(Error::InvalidArgument(format!(
                    "charge does not commute with the antisymmetric matrix (residual {comm_res:.3e})"
                )));
            }
            let iq = to_complex(qm).map(|z| z * C64::new(0.0, 1.0));
            let q_scale = frobenius(qm).max(1e-12);
            let (basis, vals) = joint_hermitian_eigenbasis(
                &[iq, ia],
                &[1e-7 * q_scale.max(1.0), 1e-8 * a_scale],
            );
            (basis, vals[0].clone(), vals[1].clone())
        }
        None => {
            let (basis, vals) = joint_hermitian_eigenbasis(&[ia], &[1e-8 * a_scale]);
            (basis, vec![0.0; 2 * n], vals[0].clone())
        }
    };

    let zero_a = 1e-10 * a_scale;
    let zero_q = 1e-8;

    // pick one representative per conjugate pair
    let mut picked: Vec<(f64, f64, usize)> = Vec::new(); // (a, q, column)
    let mut neutral: Vec<usize> = Vec::new();
    for i in 0..2 * n {
        let av = avals[i];
        let qv = qvals[i];
        if av > zero_a {
            picked.push((av, qv, i));
        } else if av.abs() <= zero_a {
            if qv > zero_q {
                picked.push((0.0, qv, i));
            } else if qv.abs() <= zero_q {
                neutral.push(i);
            }
        }
    }
    if picked.len() + neutral.len() / 2 != n || neutral.len() % 2 != 0 {
        return Err(Error::Infeasible {
            reason: "conjugate pairing of the canonical form failed".into(),
            residual: f64::NAN,
        });
    }

    // order the modes: match the input charge pattern when given, else sort
    // ascending in a (descending symplectic eigenvalues downstream)
    let mut rows: Vec<(Dvec, Dvec, f64, f64)> = Vec::with_capacity(n);
    let col_pair = |i: usize| -> (Dvec, Dvec) {
        let v = q_basis.column(i);
        let w = Dvec::from_iterator(2 * n, v.iter().map(|z| z.im * 2f64.sqrt()));
        let u = Dvec::from_iterator(2 * n, v.iter().map(|z| z.re * 2f64.sqrt()));
        (w, u)
    };

    match charge {
        Some(qm) => {
            let pattern: Vec<f64> = (0..n).map(|j| qm[(2 * j, 2 * j + 1)]).collect();
            let mut used = vec![false; picked.len()];
            // stable: largest a first within each charge slot
            let mut order: Vec<usize> = (0..picked.len()).collect();
            order.sort_by(|&x, &y| picked[y].0.partial_cmp(&picked[x].0).unwrap());
            let mut neutral_iter = neutral.clone();
            for &slot_q in &pattern {
                if slot_q.abs() <= zero_q && !neutral_iter.is_empty() && picked.len() < n {
                    // handled below via the neutral pool
                }
                let found = order.iter().position(|&k| {
                    !used[k] && (picked[k].1 - slot_q).abs() <= zero_q.max(1e-7 * slot_q.abs())
                });
                match found {
                    Some(pos) => {
                        let k = order[pos];
                        used[k] = true;
                        let (w, u) = col_pair(picked[k].2);
                        rows.push((w, u, picked[k].0, picked[k].1));
                    }
                    None => {
                        // try the neutral pool for zero-charge slots
                        if slot_q.abs() <= zero_q && neutral_iter.len() >= 2 {
                            let (w, u) = realified_pair(&q_basis, &mut neutral_iter);
                            rows.push((w, u, 0.0, 0.0));
                        } else {
                            return Err(Error::Infeasible {
                                reason: format!(
                                    "no positive canonical mode available for charge {slot_q}"
                                ),
                                residual: f64::NAN,
                            });
                        }
                    }
                }
            }
        }
        None => {
            picked.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            for &(av, qv, i) in &picked {
                let (w, u) = col_pair(i);
                rows.push((w, u, av, qv));
            }
            let mut pool = neutral.clone();
            while pool.len() >= 2 {
                let (w, u) = realified_pair(&q_basis, &mut pool);
                rows.push((w, u, 0.0, 0.0));
            }
        }
    }

    let mut o = Dmat::zeros(2 * n, 2 * n);
    let mut a_out = Vec::with_capacity(n);
    let mut q_out = Vec::with_capacity(n);
    for (j, (w, u, av, qv)) in rows.into_iter().enumerate() {
        o.set_row(2 * j, &w.transpose());
        o.set_row(2 * j + 1, &u.transpose());
        a_out.push(av);
        q_out.push(qv);
    }
    let orth_res = rel_diff(&(&o * o.transpose()), &Dmat::identity(2 * n, 2 * n));
    if orth_res > 1e-8 {
        return Err(Error::Infeasible {
            reason: "assembled canonical basis is not orthogonal".into(),
            residual: orth_res,
        });
    }
    Ok((o, a_out, q_out))
}

/// Extract one real orthonormal pair out of a conjugation-closed set of
/// basis columns (joint kernel case: both canonical coefficients vanish).
fn realified_pair(basis: &Cmat, pool: &mut Vec<usize>) -> (Dvec, Dvec) {
    let dim = basis.nrows();
    // real span of the pooled columns
    let mut cand: Vec<Dvec> = Vec::new();
    for &i in pool.iter() {
        cand.push(Dvec::from_iterator(dim, basis.column(i).iter().map(|z| z.re)));
        cand.push(Dvec::from_iterator(dim, basis.column(i).iter().map(|z| z.im)));
    }
    let mut picked: Vec<Dvec> = Vec::new();
    for mut v in cand {
        for p in &picked {
            let c = p.dot(&v);
            v -= p * c;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            picked.push(v / norm);
            if picked.len() == 2 {
                break;
            }
        }
    }
    assert!(picked.len() == 2, "realified pair extraction failed");
    // consume two pool entries (the real span shrinks by one complex dim each)
    pool.pop();
    pool.pop();
    let u = picked.pop().unwrap();
    let w = picked.pop().unwrap();
    (w, u)
}

/// Williamson normal form: S M Sᵀ = ⊕ⱼ νⱼ I₂ with S symplectic, for SPD `M`.
/// Symplectic eigenvalues are returned in descending order.
pub fn williamson(m: &Dmat) -> Result<(Dmat, Vec<f64>)> {
    let n = even_modes(m)?;
    check_spd(m)?;
    let b = spd_inv_sqrt(m)?;
    let a = &b * omega(n) * &b;
    let (o, acoef, _) = antisym_joint_canonical(&a, None)?;
    let nus: Vec<f64> = acoef.iter().map(|&x| 1.0 / x).collect();
    let mut dhalf = Dmat::zeros(2 * n, 2 * n);
    for j in 0..n {
        let r = nus[j].sqrt();
        dhalf[(2 * j, 2 * j)] = r;
        dhalf[(2 * j + 1, 2 * j + 1)] = r;
    }
    let s = dhalf * o * b;
    Ok((s, nus))
}

pub(crate) fn check_spd(m: &Dmat) -> Result<()> {
    let sym_res = rel_diff(&m.transpose(), m);
    if sym_res > 1e-8 {
        return Err(Error::NotPositiveDefinite(format!(
            "not symmetric (residual {sym_res:.3e})"
        )));
    }
    let (vals, _) = sym_eigen(m);
    let min = vals[0];
    if min <= 0.0 {
        return Err(Error::NotPositiveDefinite(format!(
            "minimum eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// Diagonal ⊕ⱼ diag(e^{rⱼ}, e^{−rⱼ}) from a list of squeezing parameters.
pub fn squeeze_diag(rs: &[f64]) -> Dmat {
    let n = rs.len();
    let mut d = Dmat::zeros(2 * n, 2 * n);
    for (j, &r) in rs.iter().enumerate() {
        d[(2 * j, 2 * j)] = r.exp();
        d[(2 * j + 1, 2 * j + 1)] = (-r).exp();
    }
    d
}

/// Bloch–Messiah (symplectic SVD): V = O′ D Oᵀ with O, O′ orthogonal
/// symplectic and D = ⊕ diag(e^{rⱼ}, e^{−rⱼ}), rⱼ ≥ 0 descending.
pub fn bloch_messiah(v: &Dmat, tol: &Tolerances) -> Result<(Dmat, Dmat, Dmat)> {
    let n = even_modes(v)?;
    let res = symplectic_residual(v)?;
    if res > tol.sympl.max(1e-8) {
        return Err(Error::NotSymplectic { residual: res });
    }
    let p = spd_sqrt(&(v * v.transpose()))?;
    let (vals, vecs) = sym_eigen(&p); // ascending
    let om = omega(n);
    let pair_tol = 1e-8;

    let mut cols: Vec<(f64, Dvec)> = Vec::new(); // (r_j, leading column)
    let mut unit: Vec<Dvec> = Vec::new();
    for i in (0..2 * n).rev() {
        let lam = vals[i];
        if lam > 1.0 + pair_tol {
            cols.push((lam.ln(), vecs.column(i).into_owned()));
        } else if (lam - 1.0).abs() <= pair_tol {
            unit.push(vecs.column(i).into_owned());
        }
    }
    // squeezed modes: partner column is Ωᵀ v, automatically in the 1/λ space
    let mut columns: Vec<Dvec> = Vec::new();
    let mut rs: Vec<f64> = Vec::new();
    for (r, v1) in &cols {
        columns.push(v1.clone());
        columns.push(om.transpose() * v1);
        rs.push(*r);
    }
    // unit modes: greedy symplectic pairing inside the λ ≈ 1 eigenspace
    let mut pool = unit;
    while !pool.is_empty() {
        let u = pool[0].normalize();
        let w = om.transpose() * &u;
        columns.push(u.clone());
        columns.push(w.clone());
        rs.push(0.0);
        let mut next = Vec::new();
        for cand in pool.iter().skip(1) {
            let mut c = cand.clone();
            c -= &u * u.dot(cand);
            c -= &w * w.dot(cand);
            if c.norm() > 1e-8 {
                next.push(c.normalize());
            }
        }
        pool = next;
    }
    if columns.len() != 2 * n {
        return Err(Error::Infeasible {
            reason: "Bloch-Messiah pairing failed".into(),
            residual: f64::NAN,
        });
    }
    let mut oprime = Dmat::zeros(2 * n, 2 * n);
    for (k, c) in columns.iter().enumerate() {
        oprime.set_column(k, c);
    }
    let d = squeeze_diag(&rs);
    let o0 = spd_inv_sqrt(&(v * v.transpose()))? * v; // polar orthogonal factor
    let o = o0.transpose() * &oprime;
    Ok((oprime, d, o))
}

/// exp(−Ω H) for a symmetric Hamiltonian matrix `h`; always symplectic.
pub fn symplectic_from_hamiltonian(h: &Dmat) -> Dmat {
    let n = h.nrows() / 2;
    expm(&(-omega(n) * h))
}

/// Random symplectic matrix from a random symmetric generator.
pub fn random_symplectic(n: usize, scale: f64, rng: &mut impl rand::Rng) -> Dmat {
    let mut h = Dmat::zeros(2 * n, 2 * n);
    for i in 0..2 * n {
        for j in 0..=i {
            let x: f64 = rng.gen_range(-1.0..1.0) * scale;
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    symplectic_from_hamiltonian(&h)
}

/// Basis (columns) of the symplectic complement {v : uᵀΩv = 0 ∀ u ∈ F}.
pub fn symplectic_complement(basis: &Dmat) -> Dmat {
    let n = basis.nrows() / 2;
    let m = basis.transpose() * omega(n); // 2k x 2n
    crate::linalg::nullspace(&m, 1e-10)
}

/// Symplectic Gram–Schmidt: returns columns (e₁ f₁ e₂ f₂ …) spanning the
/// same subspace with eᵢᵀΩfⱼ = δᵢⱼ and all other pairings zero.
pub fn symplectic_gram_schmidt(basis: &Dmat) -> Result<Dmat> {
    let n2 = basis.nrows();
    let om = omega(n2 / 2);
    let mut pool: Vec<Dvec> = basis.column_iter().map(|c| c.into_owned()).collect();
    let mut pairs: Vec<(Dvec, Dvec)> = Vec::new();
    while pool.len() >= 2 {
        // pivot on the largest symplectic pairing for stability
        let mut best = (0usize, 1usize, 0.0f64);
        for i in 0..pool.len() {
            for j in (i + 1)..pool.len() {
                let val = (pool[i].transpose() * &om * &pool[j])[(0, 0)].abs()
                    / (pool[i].norm() * pool[j].norm()).max(1e-300);
                if val > best.2 {
                    best = (i, j, val);
                }
            }
        }
        if best.2 < 1e-10 {
            return Err(Error::InvalidArgument(
                "subspace is degenerate for the symplectic form".into(),
            ));
        }
        let e = pool[best.0].normalize();
        let pairing = (e.transpose() * &om * &pool[best.1])[(0, 0)];
        let f = &pool[best.1] / pairing;
        // project the rest onto the symplectic complement of span{e, f}
        let mut next = Vec::new();
        for (k, u) in pool.iter().enumerate() {
            if k == best.0 || k == best.1 {
                continue;
            }
            let ce = (e.transpose() * &om * u)[(0, 0)];
            let cf = (f.transpose() * &om * u)[(0, 0)];
            let proj = u + &e * cf - &f * ce;
            if proj.norm() > 1e-10 {
                next.push(proj);
            }
        }
        pairs.push((e, f));
        pool = next;
    }
    let mut out = Dmat::zeros(n2, 2 * pairs.len());
    for (j, (e, f)) in pairs.iter().enumerate() {
        out.set_column(2 * j, e);
        out.set_column(2 * j + 1, f);
    }
    Ok(out)
}

/// Symplectic transform T mapping the subspace spanned by `basis` onto the
/// leading coordinate modes (and its symplectic complement onto the rest).
pub fn adapted_symplectic_transform(basis: &Dmat) -> Result<Dmat> {
    let inside = symplectic_gram_schmidt(basis)?;
    let comp = symplectic_complement(basis);
    let outside = symplectic_gram_schmidt(&comp)?;
    let n2 = basis.nrows();
    if inside.ncols() + outside.ncols() != n2 {
        return Err(Error::InvalidArgument(format!(
            "subspace splitting failed: {} + {} != {}",
            inside.ncols(),
            outside.ncols(),
            n2
        )));
    }
    let mut m = Dmat::zeros(n2, n2);
    for j in 0..inside.ncols() {
        m.set_column(j, &inside.column(j));
    }
    for j in 0..outside.ncols() {
        m.set_column(inside.ncols() + j, &outside.column(j));
    }
    let t = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("adapted basis is singular".into()))?;
    Ok(t)
}

pub fn identity_like(n_modes: usize) -> Dmat {
    Dmat::identity(2 * n_modes, 2 * n_modes)
}
