//! Gaussian unitaries and channels in phase space.

use serde::{Deserialize, Serialize};

use crate::basis::{dmat_from_row_major, dmat_to_row_major};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{herm_eigen, omega, rel_diff, to_complex, Cmat, Dmat, Dvec, C64};
use crate::state::GaussianState;
use crate::symplectic::{is_symplectic, symplectic_residual};

/// A Gaussian unitary: symplectic matrix `v` plus displacement `xi`,
/// acting on states as d ↦ V d + ξ, σ ↦ V σ Vᵀ.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianUnitary {
    pub v: Dmat,
    pub xi: Dvec,
}

impl GaussianUnitary {
    pub fn new(v: Dmat, xi: Dvec) -> Result<Self> {
        let res = symplectic_residual(&v)?;
        if res > 1e-8 {
            return Err(Error::NotSymplectic { residual: res });
        }
        if xi.len() != v.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "displacement length {} vs matrix dimension {}",
                xi.len(),
                v.nrows()
            )));
        }
        Ok(GaussianUnitary { v, xi })
    }

    pub fn identity(n: usize) -> Self {
        GaussianUnitary {
            v: Dmat::identity(2 * n, 2 * n),
            xi: Dvec::zeros(2 * n),
        }
    }

    pub fn from_symplectic(v: Dmat) -> Result<Self> {
        let n2 = v.nrows();
        Self::new(v, Dvec::zeros(n2))
    }

    pub fn n_modes(&self) -> usize {
        self.v.nrows() / 2
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        self.as_channel().apply(state)
    }

    /// Composition: `self` after `first`.
    pub fn compose(&self, first: &GaussianUnitary) -> Result<GaussianUnitary> {
        if self.n_modes() != first.n_modes() {
            return Err(Error::DimensionMismatch("unitary composition".into()));
        }
        Ok(GaussianUnitary {
            v: &self.v * &first.v,
            xi: &self.v * &first.xi + &self.xi,
        })
    }

    pub fn inverse(&self) -> GaussianUnitary {
        // V⁻¹ = Ωᵀ Vᵀ Ω for symplectic V
        let n = self.n_modes();
        let om = omega(n);
        let vinv = om.transpose() * self.v.transpose() * &om;
        GaussianUnitary {
            xi: -(&vinv * &self.xi),
            v: vinv,
        }
    }

    /// The unitary viewed as a channel (X = V, Y = 0).
    pub fn as_channel(&self) -> GaussianChannel {
        let n = self.n_modes();
        GaussianChannel {
            n_in: n,
            n_out: n,
            x: self.v.clone(),
            y: Dmat::zeros(2 * n, 2 * n),
            xi: self.xi.clone(),
        }
    }

    /// Direct sum with another unitary.
    pub fn tensor(&self, other: &GaussianUnitary) -> GaussianUnitary {
        let (a, b) = (2 * self.n_modes(), 2 * other.n_modes());
        let mut v = Dmat::zeros(a + b, a + b);
        v.view_mut((0, 0), (a, a)).copy_from(&self.v);
        v.view_mut((a, a), (b, b)).copy_from(&other.v);
        let mut xi = Dvec::zeros(a + b);
        xi.rows_mut(0, a).copy_from(&self.xi);
        xi.rows_mut(a, b).copy_from(&other.xi);
        GaussianUnitary { v, xi }
    }
}

/// A Gaussian channel (X, Y, ξ) from `n_in` to `n_out` modes:
/// d ↦ X d + ξ, σ ↦ X σ Xᵀ + Y.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    pub n_in: usize,
    pub n_out: usize,
    pub x: Dmat,
    pub y: Dmat,
    pub xi: Dvec,
}

/// Result of the complete-positivity eigenvalue check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CpReport {
    pub ok: bool,
    pub min_eigenvalue: f64,
}

impl GaussianChannel {
    pub fn new(x: Dmat, y: Dmat, xi: Dvec) -> Result<Self> {
        if x.nrows() % 2 != 0 || x.ncols() % 2 != 0 || x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "X is {}x{}",
                x.nrows(),
                x.ncols()
            )));
        }
        let (n_out, n_in) = (x.nrows() / 2, x.ncols() / 2);
        if y.nrows() != 2 * n_out || y.ncols() != 2 * n_out || xi.len() != 2 * n_out {
            return Err(Error::DimensionMismatch(
                "Y/ξ dimensions do not match X".into(),
            ));
        }
        let sym_res = rel_diff(&y.transpose(), &y);
        if sym_res > 1e-9 {
            return Err(Error::NotPositiveDefinite(format!(
                "Y not symmetric (residual {sym_res:.3e})"
            )));
        }
        Ok(GaussianChannel { n_in, n_out, x, y, xi })
    }

    pub fn identity(n: usize) -> Self {
        GaussianUnitary::identity(n).as_channel()
    }

    /// Min Hermitian eigenvalue of Y + i(Ω_B − X Ω_A Xᵀ); the channel is
    /// completely positive iff it is ≥ −tol.phys.
    pub fn validate_cp(&self, tol: &Tolerances) -> CpReport {
        let gap = omega(self.n_out) - &self.x * omega(self.n_in) * self.x.transpose();
        let herm = to_complex(&self.y) + to_complex(&gap).map(|z| z * C64::new(0.0, 1.0));
        let (vals, _) = herm_eigen(&herm);
        CpReport {
            ok: vals[0] >= -tol.phys,
            min_eigenvalue: vals[0],
        }
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.n_modes() != self.n_in {
            return Err(Error::DimensionMismatch(format!(
                "channel expects {} input modes, state has {}",
                self.n_in,
                state.n_modes()
            )));
        }
        let d = &self.x * &state.d + &self.xi;
        let sigma = &self.x * &state.sigma * self.x.transpose() + &self.y;
        Ok(GaussianState::from_parts_unchecked(d, sigma))
    }

    /// Composition: `self` after `first`.
    pub fn compose(&self, first: &GaussianChannel) -> Result<GaussianChannel> {
        if self.n_in != first.n_out {
            return Err(Error::DimensionMismatch(format!(
                "composition mismatch: {} vs {}",
                self.n_in, first.n_out
            )));
        }
        Ok(GaussianChannel {
            n_in: first.n_in,
            n_out: self.n_out,
            x: &self.x * &first.x,
            y: &self.x * &first.y * self.x.transpose() + &self.y,
            xi: &self.x * &first.xi + &self.xi,
        })
    }

    /// Direct sum of two channels.
    pub fn tensor(&self, other: &GaussianChannel) -> GaussianChannel {
        let (ri, ci) = (2 * self.n_out, 2 * self.n_in);
        let (rj, cj) = (2 * other.n_out, 2 * other.n_in);
        let mut x = Dmat::zeros(ri + rj, ci + cj);
        x.view_mut((0, 0), (ri, ci)).copy_from(&self.x);
        x.view_mut((ri, ci), (rj, cj)).copy_from(&other.x);
        let mut y = Dmat::zeros(ri + rj, ri + rj);
        y.view_mut((0, 0), (ri, ri)).copy_from(&self.y);
        y.view_mut((ri, ri), (rj, rj)).copy_from(&other.y);
        let mut xi = Dvec::zeros(ri + rj);
        xi.rows_mut(0, ri).copy_from(&self.xi);
        xi.rows_mut(ri, rj).copy_from(&other.xi);
        GaussianChannel {
            n_in: self.n_in + other.n_in,
            n_out: self.n_out + other.n_out,
            x,
            y,
            xi,
        }
    }

    /// 1-mode attenuator: X = cos α I, Y = (2n̄+1) sin²α I.
    pub fn attenuator(alpha: f64, nbar: f64) -> Self {
        let x = Dmat::identity(2, 2) * alpha.cos();
        let y = Dmat::identity(2, 2) * ((2.0 * nbar + 1.0) * alpha.sin().powi(2));
        GaussianChannel { n_in: 1, n_out: 1, x, y, xi: Dvec::zeros(2) }
    }

    /// 1-mode amplifier: X = cosh α I, Y = (2n̄+1) sinh²α I.
    pub fn amplifier(alpha: f64, nbar: f64) -> Self {
        let x = Dmat::identity(2, 2) * alpha.cosh();
        let y = Dmat::identity(2, 2) * ((2.0 * nbar + 1.0) * alpha.sinh().powi(2));
        GaussianChannel { n_in: 1, n_out: 1, x, y, xi: Dvec::zeros(2) }
    }
}

/// Standard one- and two-mode symplectic building blocks.
#[derive(Debug, Clone, PartialEq)]
pub enum StandardUnitary {
    PhaseShift(f64),
    BeamSplitter(f64),
    TwoModeSqueezer(f64),
    OneModeSqueezer(f64),
    Displacement(Vec<f64>),
}

/// V_ps(φ) = exp(−φΩ₁).
pub fn phase_shift_matrix(phi: f64) -> Dmat {
    Dmat::from_row_slice(2, 2, &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()])
}

/// V_bs(φ) = [[cos φ I₂, sin φ I₂], [−sin φ I₂, cos φ I₂]].
pub fn beam_splitter_matrix(phi: f64) -> Dmat {
    let (c, s) = (phi.cos(), phi.sin());
    let mut v = Dmat::zeros(4, 4);
    for k in 0..2 {
        v[(k, k)] = c;
        v[(k, k + 2)] = s;
        v[(k + 2, k)] = -s;
        v[(k + 2, k + 2)] = c;
    }
    v
}

/// V_2sq(r) = [[cosh r I₂, sinh r Z], [sinh r Z, cosh r I₂]].
pub fn two_mode_squeezer_matrix(r: f64) -> Dmat {
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut v = Dmat::identity(4, 4) * ch;
    v[(0, 2)] = sh;
    v[(1, 3)] = -sh;
    v[(2, 0)] = sh;
    v[(3, 1)] = -sh;
    v
}

/// V_1sq(r) = diag(e^r, e^{−r}).
pub fn one_mode_squeezer_matrix(r: f64) -> Dmat {
    Dmat::from_diagonal(&Dvec::from_vec(vec![r.exp(), (-r).exp()]))
}

pub fn standard_unitary(kind: StandardUnitary) -> Result<GaussianUnitary> {
    match kind {
        StandardUnitary::PhaseShift(phi) => {
            GaussianUnitary::new(phase_shift_matrix(phi), Dvec::zeros(2))
        }
        StandardUnitary::BeamSplitter(phi) => {
            GaussianUnitary::new(beam_splitter_matrix(phi), Dvec::zeros(4))
        }
        StandardUnitary::TwoModeSqueezer(r) => {
            if !r.is_finite() {
                return Err(Error::InvalidArgument("squeezing must be finite".into()));
            }
            GaussianUnitary::new(two_mode_squeezer_matrix(r), Dvec::zeros(4))
        }
        StandardUnitary::OneModeSqueezer(r) => {
            if !r.is_finite() {
                return Err(Error::InvalidArgument("squeezing must be finite".into()));
            }
            GaussianUnitary::new(one_mode_squeezer_matrix(r), Dvec::zeros(2))
        }
        StandardUnitary::Displacement(xi) => {
            if xi.len() % 2 != 0 || xi.is_empty() {
                return Err(Error::DimensionMismatch("displacement length".into()));
            }
            let n2 = xi.len();
            GaussianUnitary::new(Dmat::identity(n2, n2), Dvec::from_vec(xi))
        }
    }
}

/// Embed a unitary acting on `targets` (in order) into `total` modes, with
/// identity elsewhere.
pub fn embed_unitary(u: &GaussianUnitary, total: usize, targets: &[usize]) -> Result<GaussianUnitary> {
    if targets.len() != u.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "unitary acts on {} modes, {} targets given",
            u.n_modes(),
            targets.len()
        )));
    }
    let mut v = Dmat::identity(2 * total, 2 * total);
    let mut xi = Dvec::zeros(2 * total);
    for (a, &ma) in targets.iter().enumerate() {
        if ma >= total {
            return Err(Error::DimensionMismatch(format!("target mode {ma} out of range")));
        }
        for da in 0..2 {
            xi[2 * ma + da] = u.xi[2 * a + da];
            for (b, &mb) in targets.iter().enumerate() {
                for db in 0..2 {
                    v[(2 * ma + da, 2 * mb + db)] = u.v[(2 * a + da, 2 * b + db)];
                }
            }
            // clear the identity on embedded rows/cols
            v[(2 * ma + da, 2 * ma + da)] = u.v[(2 * a + da, 2 * a + da)];
        }
    }
    // fix diagonal identity entries that overlap targets
    for &ma in targets {
        for da in 0..2 {
            let row = 2 * ma + da;
            for col in 0..2 * total {
                let in_targets = targets.iter().any(|&m| col / 2 == m);
                if !in_targets && col != row {
                    v[(row, col)] = 0.0;
                }
            }
        }
    }
    GaussianUnitary::new(v, xi)
}

/// SU(2)-covariant two-mode channel family:
/// X = e^{φΩ₂}(x₊ I₄ + x₋ e^{θΩ₂} X₋), Y = y I₄, ξ = 0, with X₋ = Ω ⊗ Z.
/// The caller may build non-CP instances; see [`su2_cp_bound`].
pub fn su2_covariant_channel(x_plus: f64, x_minus: f64, theta: f64, phi: f64, y: f64) -> Result<GaussianChannel> {
    let om2 = omega(2);
    let x_minus_mat = Dmat::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, -1.0, //
            -1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0,
        ],
    );
    let rot_phi = crate::linalg::expm(&(&om2 * phi));
    let rot_theta = crate::linalg::expm(&(&om2 * theta));
    let x = rot_phi * (Dmat::identity(4, 4) * x_plus + rot_theta * x_minus_mat * x_minus);
    GaussianChannel::new(x, Dmat::identity(4, 4) * y, Dvec::zeros(4))
}

/// Closed-form CP threshold for [`su2_covariant_channel`]:
/// y ≥ √(((x₊−1)² + x₋²)((x₊+1)² + x₋²)).
pub fn su2_cp_bound(x_plus: f64, x_minus: f64) -> f64 {
    (((x_plus - 1.0).powi(2) + x_minus.powi(2)) * ((x_plus + 1.0).powi(2) + x_minus.powi(2)))
        .sqrt()
}

/// Multimode entangler: the 2m-mode symplectic unitary generated by
/// Σ r_{jk} âⱼ† b̂ₖ† − H.c. for a complex m×m correlation matrix `r`, with
/// blocks cosh √(rr†) and sinh √(rr†) (rr†)^{−1/2} r in the complex basis.
/// Reduces to the two-mode squeezer for m = 1 and real r.
pub fn entangler(r: &Cmat, conjugator: Option<&Dmat>) -> Result<GaussianUnitary> {
    use crate::basis::{convert_basis, BasisTag, PhaseSpaceMatrix, TensorType};
    let m = r.nrows();
    if r.ncols() != m || m == 0 {
        return Err(Error::DimensionMismatch("correlation matrix must be square".into()));
    }
    let svd = r.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd");
    let vt = svd.v_t.as_ref().expect("svd");
    let sing = &svd.singular_values;
    let mut ch = Cmat::zeros(m, m);
    let mut sh = Cmat::zeros(m, m);
    let mut chb = Cmat::zeros(m, m);
    for i in 0..m {
        ch[(i, i)] = C64::new(sing[i].cosh(), 0.0);
        sh[(i, i)] = C64::new(sing[i].sinh(), 0.0);
        chb[(i, i)] = C64::new(sing[i].cosh(), 0.0);
    }
    // r = U D W with W = vt; cosh√(rr†) = U cosh(D) U†, etc.
    let cosh_a = u * &ch * u.adjoint();
    let snh = u * &sh * vt; // sinh√(rr†) (rr†)^{−1/2} r = U sinh(D) W
    let cosh_b = vt.adjoint() * &chb * vt;
    let snh_b = vt.adjoint() * &sh * u.adjoint(); // sinh√(r†r)(r†r)^{−1/2} r†

    // assemble in the complex basis ordered (a_A, a_B, a_A†, a_B†)
    let n = 2 * m;
    let mut vc = Cmat::zeros(2 * n, 2 * n);
    let set = |vc: &mut Cmat, bi: usize, bj: usize, blk: &Cmat| {
        for i in 0..m {
            for j in 0..m {
                vc[(bi * m + i, bj * m + j)] = blk[(i, j)];
            }
        }
    };
    // block indices: 0 = a_A, 1 = a_B, 2 = a_A†, 3 = a_B†
    set(&mut vc, 0, 0, &cosh_a);
    set(&mut vc, 0, 3, &snh);
    set(&mut vc, 1, 1, &cosh_b.map(|z| z.conj()));
    set(&mut vc, 1, 2, &snh_b.map(|z| z.conj()));
    set(&mut vc, 2, 2, &cosh_a.map(|z| z.conj()));
    set(&mut vc, 2, 1, &snh.map(|z| z.conj()));
    set(&mut vc, 3, 3, &cosh_b);
    set(&mut vc, 3, 0, &snh_b);

    let complex = PhaseSpaceMatrix { entries: vc, basis: BasisTag::Complex };
    let real = convert_basis(&complex, TensorType::OneOne, BasisTag::RealInterleaved)?;
    let (v, max_im) = crate::linalg::to_real(&real.entries);
    if max_im > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "entangler produced non-real symplectic matrix (imag {max_im:.3e})"
        )));
    }
    let v = match conjugator {
        Some(rmat) => {
            if rmat.nrows() != 2 * n {
                return Err(Error::DimensionMismatch("conjugator size".into()));
            }
            let rinv = rmat
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::InvalidArgument("singular conjugator".into()))?;
            rmat * v * rinv
        }
        None => v,
    };
    GaussianUnitary::new(v, Dvec::zeros(2 * n))
}

/// Serialized form: `{n_in, n_out, X, Y, xi}` with row-major matrices.
#[derive(Serialize, Deserialize)]
struct ChannelJson {
    n_in: usize,
    n_out: usize,
    #[serde(rename = "X")]
    x: Vec<f64>,
    #[serde(rename = "Y")]
    y: Vec<f64>,
    xi: Vec<f64>,
}

impl Serialize for GaussianChannel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChannelJson {
            n_in: self.n_in,
            n_out: self.n_out,
            x: dmat_to_row_major(&self.x),
            y: dmat_to_row_major(&self.y),
            xi: self.xi.iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianChannel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ChannelJson::deserialize(d)?;
        let x = dmat_from_row_major(2 * j.n_out, 2 * j.n_in, &j.x).map_err(serde::de::Error::custom)?;
        let y = dmat_from_row_major(2 * j.n_out, 2 * j.n_out, &j.y).map_err(serde::de::Error::custom)?;
        if j.xi.len() != 2 * j.n_out {
            return Err(serde::de::Error::custom("xi length mismatch"));
        }
        GaussianChannel::new(x, y, Dvec::from_vec(j.xi)).map_err(serde::de::Error::custom)
    }
}

/// Check that a symplectic matrix saturates the CP bound when viewed as a
/// channel (used in tests and certifications).
pub fn unitary_saturates_cp(u: &GaussianUnitary, tol: &Tolerances) -> bool {
    let rep = u.as_channel().validate_cp(tol);
    rep.ok && rep.min_eigenvalue.abs() <= tol.phys && is_symplectic(&u.v, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_state, GaussianState, StandardState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerances = Tolerances::DEFAULT;

    #[test]
    fn phase_shift_pi_is_minus_identity() {
        let v = phase_shift_matrix(std::f64::consts::PI);
        assert!(rel_diff(&v, &(-Dmat::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn beam_splitter_zero_is_identity() {
        assert!(rel_diff(&beam_splitter_matrix(0.0), &Dmat::identity(4, 4)) < 1e-15);
    }

    #[test]
    fn standard_unitaries_are_symplectic() {
        for u in [
            standard_unitary(StandardUnitary::PhaseShift(0.3)).unwrap(),
            standard_unitary(StandardUnitary::BeamSplitter(1.2)).unwrap(),
            standard_unitary(StandardUnitary::TwoModeSqueezer(0.8)).unwrap(),
            standard_unitary(StandardUnitary::OneModeSqueezer(-0.5)).unwrap(),
        ] {
            assert!(is_symplectic(&u.v, &TOL));
            assert!(unitary_saturates_cp(&u, &TOL));
        }
    }

    #[test]
    fn noiseless_amplifier_fails_cp() {
        let ch = GaussianChannel::new(Dmat::identity(2, 2) * 2.0, Dmat::zeros(2, 2), Dvec::zeros(2))
            .unwrap();
        let rep = ch.validate_cp(&TOL);
        assert!(!rep.ok);
        assert!((rep.min_eigenvalue + 3.0).abs() < 1e-9);
    }

    #[test]
    fn attenuator_is_cp_for_all_occupations() {
        for nbar in [0.0, 0.3, 2.0, 10.0] {
            let ch = GaussianChannel::attenuator(0.7, nbar);
            assert!(ch.validate_cp(&TOL).ok);
        }
    }

    #[test]
    fn attenuator_scales_coherent_amplitude() {
        let alpha = 0.9;
        let g = C64::new(1.1, -0.4);
        let ch = GaussianChannel::attenuator(alpha, 0.0);
        let s = GaussianState::standard(StandardState::Coherent(g), 1).unwrap();
        let out = ch.apply(&s).unwrap();
        let expect = GaussianState::standard(StandardState::Coherent(g * alpha.cos()), 1).unwrap();
        assert!((out.d - expect.d).norm() < 1e-12);
        assert!(rel_diff(&out.sigma, &expect.sigma) < 1e-12);
    }

    #[test]
    fn half_turn_phase_shift_swaps_squeezing_axes() {
        let r = 0.6;
        let s = GaussianState::standard(StandardState::Squeezed(r), 1).unwrap();
        let u = standard_unitary(StandardUnitary::PhaseShift(std::f64::consts::FRAC_PI_2)).unwrap();
        let out = u.apply(&s).unwrap();
        let expect = Dmat::from_diagonal(&Dvec::from_vec(vec![(-2.0 * r).exp(), (2.0 * r).exp()]));
        assert!(rel_diff(&out.sigma, &expect) < 1e-12);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c1 = GaussianChannel::attenuator(0.4, 0.5);
        let c2 = GaussianChannel::amplifier(0.3, 0.2);
        let comp = c2.compose(&c1).unwrap();
        for _ in 0..20 {
            let s = random_state(1, 1.0, 1.0, &mut rng);
            let direct = comp.apply(&s).unwrap();
            let seq = c2.apply(&c1.apply(&s).unwrap()).unwrap();
            assert!((direct.d.clone() - seq.d.clone()).norm() < 1e-10);
            assert!(rel_diff(&direct.sigma, &seq.sigma) < 1e-10);
        }
    }

    #[test]
    fn tensor_acts_independently() {
        let c1 = GaussianChannel::attenuator(0.4, 0.0);
        let c2 = GaussianChannel::amplifier(0.2, 1.0);
        let both = c1.tensor(&c2);
        let a = GaussianState::standard(StandardState::Coherent(C64::new(0.5, 0.0)), 1).unwrap();
        let b = GaussianState::standard(StandardState::Thermal(0.5), 1).unwrap();
        let joint = both.apply(&a.tensor(&b)).unwrap();
        let separate = c1.apply(&a).unwrap().tensor(&c2.apply(&b).unwrap());
        assert!((joint.d.clone() - separate.d.clone()).norm() < 1e-12);
        assert!(rel_diff(&joint.sigma, &separate.sigma) < 1e-12);
    }

    #[test]
    fn epr_from_two_mode_squeezer_has_thermal_marginals() {
        let r = 0.5;
        let u = standard_unitary(StandardUnitary::TwoModeSqueezer(r)).unwrap();
        let vac = GaussianState::standard(StandardState::Vacuum, 2).unwrap();
        let out = u.apply(&vac).unwrap();
        let marg = out.partial_trace(&[1]).unwrap();
        assert!(rel_diff(&marg.sigma, &(Dmat::identity(2, 2) * (2.0 * r).cosh())) < 1e-12);
    }

    #[test]
    fn su2_channel_special_points() {
        let id = su2_covariant_channel(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(rel_diff(&id.x, &Dmat::identity(4, 4)) < 1e-12);
        assert!(id.validate_cp(&TOL).ok);
        // x₊ = 0, x₋ = 1 is CP iff y ≥ 2
        assert!((su2_cp_bound(0.0, 1.0) - 2.0).abs() < 1e-12);
        assert!(su2_covariant_channel(0.0, 1.0, 0.3, 0.1, 2.0).unwrap().validate_cp(&TOL).ok);
        assert!(!su2_covariant_channel(0.0, 1.0, 0.3, 0.1, 1.9).unwrap().validate_cp(&TOL).ok);
    }

    #[test]
    fn su2_bound_matches_eigenvalue_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let xp: f64 = rng.gen_range(-2.0..2.0);
            let xm: f64 = rng.gen_range(-2.0..2.0);
            let th: f64 = rng.gen_range(0.0..6.28);
            let ph: f64 = rng.gen_range(0.0..6.28);
            let y: f64 = rng.gen_range(0.0..6.0);
            let bound = su2_cp_bound(xp, xm);
            if (y - bound).abs() < 1e-6 {
                continue;
            }
            let ch = su2_covariant_channel(xp, xm, th, ph, y).unwrap();
            assert_eq!(ch.validate_cp(&TOL).ok, y >= bound, "xp={xp} xm={xm} y={y} bound={bound}");
        }
    }

    #[test]
    fn entangler_matches_two_mode_squeezer() {
        let r = 0.73;
        let rm = Cmat::from_row_slice(1, 1, &[C64::new(r, 0.0)]);
        let u = entangler(&rm, None).unwrap();
        assert!(rel_diff(&u.v, &two_mode_squeezer_matrix(r)) < 1e-10);
        // zero correlation gives the identity
        let z = entangler(&Cmat::zeros(1, 1), None).unwrap();
        assert!(rel_diff(&z.v, &Dmat::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn entangler_random_is_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..5 {
            let r = Cmat::from_fn(2, 2, |_, _| {
                C64::new(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8))
            });
            let u = entangler(&r, None).unwrap();
            assert!(is_symplectic(&u.v, &TOL));
        }
    }

    #[test]
    fn embed_unitary_places_blocks() {
        let u = standard_unitary(StandardUnitary::BeamSplitter(0.3)).unwrap();
        let e = embed_unitary(&u, 3, &[0, 2]).unwrap();
        assert!(is_symplectic(&e.v, &TOL));
        // mode 1 untouched
        for d in 0..2 {
            assert!((e.v[(2 + d, 2 + d)] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unitary_inverse_composes_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = crate::symplectic::random_symplectic(2, 0.5, &mut rng);
        let mut u = GaussianUnitary::from_symplectic(v).unwrap();
        u.xi = Dvec::from_vec(vec![0.1, -0.2, 0.3, 0.4]);
        let id = u.compose(&u.inverse()).unwrap();
        assert!(rel_diff(&id.v, &Dmat::identity(4, 4)) < 1e-9);
        assert!(id.xi.norm() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let ch = GaussianChannel::attenuator(0.6, 0.5);
        let text = serde_json::to_string(&ch).unwrap();
        let back: GaussianChannel = serde_json::from_str(&text).unwrap();
        assert!(rel_diff(&back.x, &ch.x) < 1e-15);
        assert!(rel_diff(&back.y, &ch.y) < 1e-15);
    }
}
