//! Gaussian states as (displacement, covariance) pairs.

use serde::{Deserialize, Serialize};

use crate::basis::{dmat_from_row_major, dmat_to_row_major};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{omega, rel_diff, Dmat, Dvec, C64};
use crate::symplectic::{symplectic_eigenvalues, williamson};

/// A Gaussian state on `n` modes: a real 2n displacement vector and a real
/// symmetric 2n×2n covariance matrix in the interleaved basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n: usize,
    pub d: Dvec,
    pub sigma: Dmat,
}

/// Standard single-purpose state families.
#[derive(Debug, Clone, PartialEq)]
pub enum StandardState {
    Vacuum,
    /// Coherent state with amplitude γ (one mode).
    Coherent(C64),
    /// Thermal state with mean occupation n̄ (one mode).
    Thermal(f64),
    /// Squeezed vacuum with σ = diag(e^{2r}, e^{−2r}) (one mode).
    Squeezed(f64),
    /// Two-mode squeezed vacuum at parameter r.
    Epr(f64),
    /// Product of phase-averaged free states with the given symplectic
    /// eigenvalues (νⱼ ≥ 1).
    PhaseAvgFree(Vec<f64>),
}

impl GaussianState {
    /// Build a state, validating symmetry of σ and the uncertainty relation
    /// σ + iΩ ⪰ −tol.phys.
    pub fn new(d: Dvec, sigma: Dmat, tol: &Tolerances) -> Result<Self> {
        if sigma.nrows() != sigma.ncols() || sigma.nrows() % 2 != 0 || sigma.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "covariance matrix is {}x{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if d.len() != sigma.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "displacement has length {}, covariance is {}x{}",
                d.len(),
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let sym_res = rel_diff(&sigma.transpose(), &sigma);
        if sym_res > tol.sympl.max(1e-9) {
            return Err(Error::NotPositiveDefinite(format!(
                "covariance not symmetric (residual {sym_res:.3e})"
            )));
        }
        let spec = symplectic_eigenvalues(&sigma, tol)?;
        if !spec.physical {
            return Err(Error::Uncertainty {
                min_nu: *spec.values.last().unwrap(),
            });
        }
        Ok(GaussianState {
            n: sigma.nrows() / 2,
            d,
            sigma,
        })
    }

    /// Build without validation; for internal use where validity is already
    /// established by construction.
    pub(crate) fn from_parts_unchecked(d: Dvec, sigma: Dmat) -> Self {
        let n = sigma.nrows() / 2;
        GaussianState { n, d, sigma }
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn standard(kind: StandardState, modes: usize) -> Result<Self> {
        let tol = Tolerances::default();
        match kind {
            StandardState::Vacuum => {
                if modes == 0 {
                    return Err(Error::InvalidArgument("vacuum needs at least one mode".into()));
                }
                Ok(Self::from_parts_unchecked(
                    Dvec::zeros(2 * modes),
                    Dmat::identity(2 * modes, 2 * modes),
                ))
            }
            StandardState::Coherent(g) => {
                expect_modes(modes, 1, "coherent")?;
                let d = Dvec::from_vec(vec![2f64.sqrt() * g.re, 2f64.sqrt() * g.im]);
                Ok(Self::from_parts_unchecked(d, Dmat::identity(2, 2)))
            }
            StandardState::Thermal(nbar) => {
                expect_modes(modes, 1, "thermal")?;
                if nbar < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "thermal occupation must be non-negative, got {nbar}"
                    )));
                }
                Ok(Self::from_parts_unchecked(
                    Dvec::zeros(2),
                    Dmat::identity(2, 2) * (2.0 * nbar + 1.0),
                ))
            }
            StandardState::Squeezed(r) => {
                expect_modes(modes, 1, "squeezed")?;
                if !r.is_finite() {
                    return Err(Error::InvalidArgument("squeezing must be finite".into()));
                }
                let sigma = Dmat::from_diagonal(&Dvec::from_vec(vec![
                    (2.0 * r).exp(),
                    (-2.0 * r).exp(),
                ]));
                Ok(Self::from_parts_unchecked(Dvec::zeros(2), sigma))
            }
            StandardState::Epr(r) => {
                expect_modes(modes, 2, "epr")?;
                let v = crate::channel::two_mode_squeezer_matrix(r);
                let sigma = &v * v.transpose();
                Ok(Self::from_parts_unchecked(Dvec::zeros(4), sigma))
            }
            StandardState::PhaseAvgFree(nus) => {
                if nus.is_empty() || (modes != 0 && modes != nus.len()) {
                    return Err(Error::InvalidArgument(
                        "phase-averaged free state needs one ν per mode".into(),
                    ));
                }
                let n = nus.len();
                let mut sigma = Dmat::zeros(2 * n, 2 * n);
                for (j, &v) in nus.iter().enumerate() {
                    if v < 1.0 - tol.phys {
                        return Err(Error::Uncertainty { min_nu: v });
                    }
                    sigma[(2 * j, 2 * j)] = v;
                    sigma[(2 * j + 1, 2 * j + 1)] = v;
                }
                Ok(Self::from_parts_unchecked(Dvec::zeros(2 * n), sigma))
            }
        }
    }

    /// Phase-space direct sum of two states.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let n = self.n + other.n;
        let mut d = Dvec::zeros(2 * n);
        let mut sigma = Dmat::zeros(2 * n, 2 * n);
        d.rows_mut(0, 2 * self.n).copy_from(&self.d);
        d.rows_mut(2 * self.n, 2 * other.n).copy_from(&other.d);
        sigma
            .view_mut((0, 0), (2 * self.n, 2 * self.n))
            .copy_from(&self.sigma);
        sigma
            .view_mut((2 * self.n, 2 * self.n), (2 * other.n, 2 * other.n))
            .copy_from(&other.sigma);
        GaussianState::from_parts_unchecked(d, sigma)
    }

    /// Restriction to the listed modes (partial trace over the rest).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<GaussianState> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("cannot keep an empty mode set".into()));
        }
        for &m in keep {
            if m >= self.n {
                return Err(Error::DimensionMismatch(format!(
                    "mode {m} out of range for {} modes",
                    self.n
                )));
            }
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mut d = Dvec::zeros(idx.len());
        let mut sigma = Dmat::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            d[a] = self.d[i];
            for (b, &j) in idx.iter().enumerate() {
                sigma[(a, b)] = self.sigma[(i, j)];
            }
        }
        Ok(GaussianState::from_parts_unchecked(d, sigma))
    }

    /// Covariance matrix of ρ^α / tr[ρ^α] for α ∈ (0, 1]; the displacement
    /// is unchanged. Pure states are fixed points. A mixed state with a unit
    /// symplectic eigenvalue has no finite inverse temperature rescaling and
    /// is rejected.
    pub fn power_state(&self, alpha: f64) -> Result<GaussianState> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if (alpha - 1.0).abs() < 1e-15 {
            return Ok(self.clone());
        }
        let pure_tol = 1e-8;
        let (s, nus) = williamson(&self.sigma)?;
        let all_pure = nus.iter().all(|&v| v <= 1.0 + pure_tol);
        if all_pure {
            return Ok(self.clone());
        }
        if nus.iter().any(|&v| v <= 1.0 + pure_tol) {
            return Err(Error::Domain {
                function: "acoth at a unit symplectic eigenvalue",
                value: 1.0,
            });
        }
        let f = |nu: f64| {
            let y = alpha * acoth(nu);
            1.0 / y.tanh()
        };
        let n = self.n;
        let mut d_alpha = Dmat::zeros(2 * n, 2 * n);
        for (j, &nu) in nus.iter().enumerate() {
            let v = f(nu);
            d_alpha[(2 * j, 2 * j)] = v;
            d_alpha[(2 * j + 1, 2 * j + 1)] = v;
        }
        let s_inv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("singular symplectic factor".into()))?;
        let sigma_alpha = &s_inv * d_alpha * s_inv.transpose();
        Ok(GaussianState::from_parts_unchecked(
            self.d.clone(),
            sigma_alpha,
        ))
    }

    /// 1 / ∏ νⱼ from the symplectic spectrum.
    pub fn purity(&self) -> Result<f64> {
        let spec = symplectic_eigenvalues(&self.sigma, &Tolerances::default())?;
        Ok(spec.values.iter().map(|v| 1.0 / v.max(1.0)).product())
    }

    /// Von Neumann entropy in nats: Σⱼ h(νⱼ) with
    /// h(ν) = ((ν+1)/2) ln((ν+1)/2) − ((ν−1)/2) ln((ν−1)/2).
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let spec = symplectic_eigenvalues(&self.sigma, &Tolerances::default())?;
        Ok(spec.values.iter().map(|&v| binary_entropy_nu(v)).sum())
    }

    /// Total mean occupation Σⱼ ⟨âⱼ†âⱼ⟩ = tr σ / 4 − n/2 + |d|²/2.
    pub fn mean_photon_number(&self) -> f64 {
        self.sigma.trace() / 4.0 - self.n as f64 / 2.0 + self.d.norm_squared() / 2.0
    }

    /// True iff all symplectic eigenvalues are 1 within `tol`.
    pub fn is_pure(&self, tol: f64) -> Result<bool> {
        let spec = symplectic_eigenvalues(&self.sigma, &Tolerances::default())?;
        Ok(spec.values.iter().all(|&v| (v - 1.0).abs() <= tol))
    }

    /// Min eigenvalue of the Hermitian matrix σ + iΩ (≥ −tol.phys for
    /// physical states).
    pub fn uncertainty_margin(&self) -> f64 {
        use crate::linalg::{herm_eigen, to_complex};
        let om = omega(self.n);
        let herm = to_complex(&self.sigma) + to_complex(&om).map(|z| z * C64::new(0.0, 1.0));
        let (vals, _) = herm_eigen(&herm);
        vals[0]
    }
}

fn expect_modes(got: usize, want: usize, what: &str) -> Result<()> {
    if got != want && got != 0 {
        return Err(Error::DimensionMismatch(format!(
            "{what} state lives on {want} mode(s), requested {got}"
        )));
    }
    Ok(())
}

pub(crate) fn acoth(x: f64) -> f64 {
    0.5 * ((x + 1.0) / (x - 1.0)).ln()
}

pub(crate) fn binary_entropy_nu(nu: f64) -> f64 {
    if nu <= 1.0 + 1e-12 {
        return 0.0;
    }
    let p = (nu + 1.0) / 2.0;
    let q = (nu - 1.0) / 2.0;
    p * p.ln() - q * q.ln()
}

/// JSON schema: `{n, d: [..], sigma: [row-major ..]}`.
#[derive(Serialize, Deserialize)]
struct StateJson {
    n: usize,
    d: Vec<f64>,
    sigma: Vec<f64>,
}

impl Serialize for GaussianState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson {
            n: self.n,
            d: self.d.iter().cloned().collect(),
            sigma: dmat_to_row_major(&self.sigma),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = StateJson::deserialize(d)?;
        let sigma = dmat_from_row_major(2 * j.n, 2 * j.n, &j.sigma)
            .map_err(serde::de::Error::custom)?;
        if j.d.len() != 2 * j.n {
            return Err(serde::de::Error::custom("displacement length mismatch"));
        }
        GaussianState::new(
            Dvec::from_vec(j.d),
            sigma,
            &Tolerances::default(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Random valid Gaussian state: a random symplectic congruence of a product
/// of thermal modes, plus a random displacement.
pub fn random_state(
    n: usize,
    max_nbar: f64,
    displacement_scale: f64,
    rng: &mut impl rand::Rng,
) -> GaussianState {
    use crate::symplectic::random_symplectic;
    let v = random_symplectic(n, 0.4, rng);
    let mut diag = Dmat::zeros(2 * n, 2 * n);
    for j in 0..n {
        let nu = 1.0 + 2.0 * rng.gen_range(0.0..max_nbar.max(1e-12));
        diag[(2 * j, 2 * j)] = nu;
        diag[(2 * j + 1, 2 * j + 1)] = nu;
    }
    let sigma = &v * diag * v.transpose();
    let d = Dvec::from_iterator(
        2 * n,
        (0..2 * n).map(|_| rng.gen_range(-1.0..1.0) * displacement_scale),
    );
    GaussianState::from_parts_unchecked(d, sigma)
}
