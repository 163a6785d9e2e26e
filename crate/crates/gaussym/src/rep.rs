//! Symplectic symmetry representations and invariance/covariance tests.
//!
//! Supported groups: U(1) with integer charges per mode, SU(2) in the
//! Schwinger (two-mode) form, and explicit finite generator sets. A
//! representation may carry a symplectic conjugator R, giving the squeezed
//! passive family S(g) = R S₀(g) R⁻¹.
//!
//! Invariance of states, unitaries, Hamiltonians and covariance of channels
//! are linear conditions; for the connected groups they are decided by the
//! Lie generators (exact for these checks) and cross-checked on sampled
//! probe elements, whose worst residual is reported.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{convert_basis, BasisTag, PhaseSpaceMatrix, TensorType};
use crate::channel::GaussianChannel;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, omega, rel_diff, spd_sqrt, to_real, Cmat, Dmat, Dvec, C64,
};
use crate::state::GaussianState;
use crate::symplectic::{is_orthogonal_symplectic, symplectic_residual, williamson};

/// One Schwinger pair: the two modes carrying the defining representation,
/// with `conjugated` marking the complex-conjugate copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchwingerPair {
    pub modes: (usize, usize),
    pub conjugated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RepKind {
    /// Block rotations exp(−θ qⱼ Ω₁) with one integer charge per mode.
    U1 { charges: Vec<i64> },
    /// Schwinger angular-momentum representation on disjoint mode pairs.
    Su2Schwinger { pairs: Vec<SchwingerPair> },
    /// A finite set of explicit symplectic generators.
    ExplicitFinite { generators: Vec<Dmat> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryRep {
    kind: RepKind,
    n_modes: usize,
    conjugator: Option<Dmat>,
}

/// Group element, matching the representation kind.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    U1 { theta: f64 },
    Su2 { euler: [f64; 3] },
    /// Word over the generator alphabet; letter k > 0 means generator k−1,
    /// k < 0 its inverse. The empty word is the identity.
    Word { letters: Vec<i64> },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Worst relative residual over generators and probe elements.
    pub residual: f64,
}

impl SymmetryRep {
    pub fn u1(charges: Vec<i64>) -> Result<Self> {
        if charges.is_empty() {
            return Err(Error::InvalidArgument("need at least one mode".into()));
        }
        Ok(SymmetryRep {
            n_modes: charges.len(),
            kind: RepKind::U1 { charges },
            conjugator: None,
        })
    }

    pub fn su2_schwinger(pairs: Vec<SchwingerPair>, n_modes: usize) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("need at least one pair".into()));
        }
        let mut seen = vec![false; n_modes];
        for p in &pairs {
            for m in [p.modes.0, p.modes.1] {
                if m >= n_modes {
                    return Err(Error::DimensionMismatch(format!("mode {m} out of range")));
                }
                if seen[m] {
                    return Err(Error::InvalidArgument(format!("mode {m} used twice")));
                }
                seen[m] = true;
            }
            if p.modes.0 == p.modes.1 {
                return Err(Error::InvalidArgument("pair must use two distinct modes".into()));
            }
        }
        Ok(SymmetryRep {
            kind: RepKind::Su2Schwinger { pairs },
            n_modes,
            conjugator: None,
        })
    }

    pub fn explicit_finite(generators: Vec<Dmat>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument("need at least one generator".into()));
        }
        let dim = generators[0].nrows();
        for g in &generators {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::DimensionMismatch("generator dimensions differ".into()));
            }
            let res = symplectic_residual(g)?;
            if res > 1e-8 {
                return Err(Error::NotSymplectic { residual: res });
            }
        }
        Ok(SymmetryRep {
            n_modes: dim / 2,
            kind: RepKind::ExplicitFinite { generators },
            conjugator: None,
        })
    }

    /// Conjugate every element by the symplectic matrix `r`.
    pub fn with_conjugator(mut self, r: Dmat) -> Result<Self> {
        if r.nrows() != 2 * self.n_modes {
            return Err(Error::DimensionMismatch("conjugator size".into()));
        }
        let res = symplectic_residual(&r)?;
        if res > 1e-8 {
            return Err(Error::NotSymplectic { residual: res });
        }
        self.conjugator = Some(r);
        Ok(self)
    }

    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn conjugator(&self) -> Option<&Dmat> {
        self.conjugator.as_ref()
    }

    pub fn is_passive(&self) -> bool {
        self.conjugator.is_none()
    }

    pub fn identity_element(&self) -> GroupElement {
        match &self.kind {
            RepKind::U1 { .. } => GroupElement::U1 { theta: 0.0 },
            RepKind::Su2Schwinger { .. } => GroupElement::Su2 { euler: [0.0; 3] },
            RepKind::ExplicitFinite { .. } => GroupElement::Word { letters: Vec::new() },
        }
    }

    /// The symplectic matrix S(g).
    pub fn element_matrix(&self, g: &GroupElement) -> Result<Dmat> {
        let base = match (&self.kind, g) {
            (RepKind::U1 { charges }, GroupElement::U1 { theta }) => {
                let mut m = Dmat::zeros(2 * self.n_modes, 2 * self.n_modes);
                for (j, &q) in charges.iter().enumerate() {
                    let a = q as f64 * theta;
                    m[(2 * j, 2 * j)] = a.cos();
                    m[(2 * j, 2 * j + 1)] = -a.sin();
                    m[(2 * j + 1, 2 * j)] = a.sin();
                    m[(2 * j + 1, 2 * j + 1)] = a.cos();
                }
                m
            }
            (RepKind::Su2Schwinger { pairs }, GroupElement::Su2 { euler }) => {
                let u = su2_matrix(euler);
                let ufull = self.su2_full_unitary(&u, pairs);
                passive_complex_to_real(&ufull)?
            }
            (RepKind::ExplicitFinite { generators }, GroupElement::Word { letters }) => {
                let dim = 2 * self.n_modes;
                let mut m = Dmat::identity(dim, dim);
                for &l in letters {
                    if l == 0 || l.unsigned_abs() as usize > generators.len() {
                        return Err(Error::InvalidArgument(format!("letter {l} out of range")));
                    }
                    let gmat = &generators[l.unsigned_abs() as usize - 1];
                    if l > 0 {
                        m = m * gmat;
                    } else {
                        m = m * symplectic_inverse(gmat);
                    }
                }
                m
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "group element does not match the representation kind".into(),
                ))
            }
        };
        Ok(self.conjugate_matrix(base))
    }

    fn conjugate_matrix(&self, base: Dmat) -> Dmat {
        match &self.conjugator {
            None => base,
            Some(r) => r * base * symplectic_inverse(r),
        }
    }

    fn su2_full_unitary(&self, u: &Cmat, pairs: &[SchwingerPair]) -> Cmat {
        let n = self.n_modes;
        let mut ufull = Cmat::identity(n, n);
        for p in pairs {
            let block = if p.conjugated { u.map(|z| z.conj()) } else { u.clone() };
            let (j, k) = p.modes;
            let idx = [j, k];
            for a in 0..2 {
                for b in 0..2 {
                    ufull[(idx[a], idx[b])] = block[(a, b)];
                }
            }
        }
        ufull
    }

    /// Lie-algebra generators G with S(t) = e^{tG} near the identity
    /// (empty for explicit finite sets).
    pub fn generators(&self) -> Vec<Dmat> {
        let base: Vec<Dmat> = match &self.kind {
            RepKind::U1 { charges } => {
                let q = u1_charge_matrix(charges);
                vec![-omega(self.n_modes) * q]
            }
            RepKind::Su2Schwinger { pairs } => {
                let gen_z = Cmat::from_row_slice(
                    2,
                    2,
                    &[
                        C64::new(0.0, -0.5),
                        C64::new(0.0, 0.0),
                        C64::new(0.0, 0.0),
                        C64::new(0.0, 0.5),
                    ],
                );
                let gen_x = Cmat::from_row_slice(
                    2,
                    2,
                    &[
                        C64::new(0.0, 0.0),
                        C64::new(0.0, -0.5),
                        C64::new(0.0, -0.5),
                        C64::new(0.0, 0.0),
                    ],
                );
                [gen_z, gen_x]
                    .iter()
                    .map(|gen| {
                        let n = self.n_modes;
                        let mut full = Cmat::zeros(n, n);
                        for p in pairs {
                            let block = if p.conjugated { gen.map(|z| z.conj()) } else { gen.clone() };
                            let idx = [p.modes.0, p.modes.1];
                            for a in 0..2 {
                                for b in 0..2 {
                                    full[(idx[a], idx[b])] = block[(a, b)];
                                }
                            }
                        }
                        passive_complex_to_real(&full).expect("generator conversion")
                    })
                    .collect()
            }
            RepKind::ExplicitFinite { .. } => Vec::new(),
        };
        match &self.conjugator {
            None => base,
            Some(r) => {
                let rinv = symplectic_inverse(r);
                base.into_iter().map(|g| r * g * &rinv).collect()
            }
        }
    }

    /// Symmetric charge matrices Q̃ with generators G = −ΩQ̃. For the plain
    /// U(1) kind this is ⊕ qⱼI₂; a conjugator yields the conjugated charge.
    pub fn charge_matrices(&self) -> Vec<Dmat> {
        let om = omega(self.n_modes);
        self.generators().iter().map(|g| &om * g).collect()
    }

    /// Fixed probe elements used by the invariance checks.
    pub fn probe_elements(&self) -> Vec<GroupElement> {
        match &self.kind {
            RepKind::U1 { .. } => {
                let golden = 2.0 * std::f64::consts::PI * 0.618_033_988_749_894_9;
                [std::f64::consts::FRAC_PI_2, std::f64::consts::PI, golden, 1.0]
                    .iter()
                    .map(|&theta| GroupElement::U1 { theta })
                    .collect()
            }
            RepKind::Su2Schwinger { .. } => vec![
                GroupElement::Su2 { euler: [std::f64::consts::FRAC_PI_2, 0.0, 0.0] },
                GroupElement::Su2 { euler: [0.0, std::f64::consts::FRAC_PI_2, 0.0] },
                GroupElement::Su2 { euler: [0.0, 0.0, std::f64::consts::FRAC_PI_2] },
                GroupElement::Su2 { euler: [1.0, 0.7, 0.3] },
                GroupElement::Su2 { euler: [std::f64::consts::PI, 1.2, 2.1] },
            ],
            RepKind::ExplicitFinite { generators } => words_up_to(generators.len(), 3),
        }
    }

    /// Deterministic sampled group elements: uniform draws plus, for U(1),
    /// the fixed probes {π/2, π, golden·2π}.
    pub fn sample_elements(&self, count: usize, seed: u64) -> Result<Vec<GroupElement>> {
        if count == 0 {
            return Err(Error::InvalidArgument("count must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        match &self.kind {
            RepKind::U1 { .. } => {
                let golden = 2.0 * std::f64::consts::PI * 0.618_033_988_749_894_9;
                let fixed = [std::f64::consts::FRAC_PI_2, std::f64::consts::PI, golden];
                for theta in fixed.into_iter().take(count) {
                    out.push(GroupElement::U1 { theta });
                }
                while out.len() < count {
                    out.push(GroupElement::U1 {
                        theta: rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                    });
                }
            }
            RepKind::Su2Schwinger { .. } => {
                while out.len() < count {
                    out.push(GroupElement::Su2 {
                        euler: [
                            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                            rng.gen_range(0.0..std::f64::consts::PI),
                            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
                        ],
                    });
                }
            }
            RepKind::ExplicitFinite { generators } => {
                let words = words_up_to(generators.len(), 3);
                for w in words.into_iter().take(count) {
                    out.push(w);
                }
                while out.len() < count {
                    let len = rng.gen_range(1..=3);
                    let letters = (0..len)
                        .map(|_| rng.gen_range(1..=generators.len() as i64))
                        .collect();
                    out.push(GroupElement::Word { letters });
                }
            }
        }
        Ok(out)
    }

    /// Complex n×n unitary U(g) of a passive representation (annihilation
    /// sector); errors if a conjugator is present or the kind has no
    /// passive complex form.
    pub fn passive_unitary(&self, g: &GroupElement) -> Result<Cmat> {
        if self.conjugator.is_some() {
            return Err(Error::UnsupportedRep(
                "passive unitary requested on a conjugated representation".into(),
            ));
        }
        match (&self.kind, g) {
            (RepKind::U1 { charges }, GroupElement::U1 { theta }) => {
                let mut u = Cmat::zeros(self.n_modes, self.n_modes);
                for (j, &q) in charges.iter().enumerate() {
                    u[(j, j)] = C64::from_polar(1.0, q as f64 * theta);
                }
                Ok(u)
            }
            (RepKind::Su2Schwinger { pairs }, GroupElement::Su2 { euler }) => {
                Ok(self.su2_full_unitary(&su2_matrix(euler), pairs))
            }
            (RepKind::ExplicitFinite { .. }, _) => {
                let s = self.element_matrix(g)?;
                real_symplectic_to_passive_unitary(&s)
            }
            _ => Err(Error::InvalidArgument("element does not match kind".into())),
        }
    }

    /// The complex-conjugate representation (I ⊗ Z) S(g) (I ⊗ Z).
    pub fn conjugate(&self) -> SymmetryRep {
        let zs = z_reflection(self.n_modes);
        let kind = match &self.kind {
            RepKind::U1 { charges } => RepKind::U1 {
                charges: charges.iter().map(|q| -q).collect(),
            },
            RepKind::Su2Schwinger { pairs } => RepKind::Su2Schwinger {
                pairs: pairs
                    .iter()
                    .map(|p| SchwingerPair { modes: p.modes, conjugated: !p.conjugated })
                    .collect(),
            },
            RepKind::ExplicitFinite { generators } => RepKind::ExplicitFinite {
                generators: generators.iter().map(|g| &zs * g * &zs).collect(),
            },
        };
        let conjugator = self.conjugator.as_ref().map(|r| &zs * r * &zs);
        SymmetryRep { kind, n_modes: self.n_modes, conjugator }
    }

    /// Direct sum with another representation of the same group.
    pub fn direct_sum(&self, other: &SymmetryRep) -> Result<SymmetryRep> {
        let n = self.n_modes + other.n_modes;
        let kind = match (&self.kind, &other.kind) {
            (RepKind::U1 { charges: a }, RepKind::U1 { charges: b }) => {
                let mut charges = a.clone();
                charges.extend_from_slice(b);
                RepKind::U1 { charges }
            }
            (RepKind::Su2Schwinger { pairs: a }, RepKind::Su2Schwinger { pairs: b }) => {
                let mut pairs = a.clone();
                pairs.extend(b.iter().map(|p| SchwingerPair {
                    modes: (p.modes.0 + self.n_modes, p.modes.1 + self.n_modes),
                    conjugated: p.conjugated,
                }));
                RepKind::Su2Schwinger { pairs }
            }
            (RepKind::ExplicitFinite { generators: a }, RepKind::ExplicitFinite { generators: b }) => {
                if a.len() != b.len() {
                    return Err(Error::UnsupportedRep(
                        "direct sum needs matching generator counts".into(),
                    ));
                }
                let gens = a
                    .iter()
                    .zip(b.iter())
                    .map(|(ga, gb)| {
                        let mut m = Dmat::zeros(2 * n, 2 * n);
                        m.view_mut((0, 0), (ga.nrows(), ga.ncols())).copy_from(ga);
                        m.view_mut((ga.nrows(), ga.ncols()), (gb.nrows(), gb.ncols()))
                            .copy_from(gb);
                        m
                    })
                    .collect();
                RepKind::ExplicitFinite { generators: gens }
            }
            _ => {
                return Err(Error::UnsupportedRep(
                    "direct sum of different representation kinds".into(),
                ))
            }
        };
        let conjugator = match (&self.conjugator, &other.conjugator) {
            (None, None) => None,
            (ca, cb) => {
                let ra = ca.clone().unwrap_or_else(|| Dmat::identity(2 * self.n_modes, 2 * self.n_modes));
                let rb = cb.clone().unwrap_or_else(|| Dmat::identity(2 * other.n_modes, 2 * other.n_modes));
                let mut r = Dmat::zeros(2 * n, 2 * n);
                r.view_mut((0, 0), (ra.nrows(), ra.ncols())).copy_from(&ra);
                r.view_mut((ra.nrows(), ra.ncols()), (rb.nrows(), rb.ncols())).copy_from(&rb);
                Some(r)
            }
        };
        Ok(SymmetryRep { kind, n_modes: n, conjugator })
    }
}

/// Compose two group elements: `compose(g2, g1)` represents g₂g₁, i.e.
/// S(g₂g₁) = S(g₂) S(g₁).
pub fn compose(g2: &GroupElement, g1: &GroupElement) -> Result<GroupElement> {
    match (g2, g1) {
        (GroupElement::U1 { theta: t2 }, GroupElement::U1 { theta: t1 }) => Ok(GroupElement::U1 {
            theta: (t1 + t2).rem_euclid(2.0 * std::f64::consts::PI),
        }),
        (GroupElement::Su2 { euler: e2 }, GroupElement::Su2 { euler: e1 }) => {
            let u = su2_matrix(e2) * su2_matrix(e1);
            Ok(GroupElement::Su2 { euler: euler_angles(&u) })
        }
        (GroupElement::Word { letters: l2 }, GroupElement::Word { letters: l1 }) => {
            let mut letters = l2.clone();
            letters.extend_from_slice(l1);
            Ok(GroupElement::Word { letters })
        }
        _ => Err(Error::InvalidArgument("cannot compose different element kinds".into())),
    }
}

pub fn invert(g: &GroupElement) -> GroupElement {
    match g {
        GroupElement::U1 { theta } => GroupElement::U1 {
            theta: (-theta).rem_euclid(2.0 * std::f64::consts::PI),
        },
        GroupElement::Su2 { euler } => {
            let u = su2_matrix(euler).adjoint();
            GroupElement::Su2 { euler: euler_angles(&u) }
        }
        GroupElement::Word { letters } => GroupElement::Word {
            letters: letters.iter().rev().map(|l| -l).collect(),
        },
    }
}

/// 2×2 SU(2) matrix from zxz Euler angles.
pub fn su2_matrix(euler: &[f64; 3]) -> Cmat {
    let rz = |a: f64| {
        Cmat::from_diagonal(&crate::linalg::Cvec::from_vec(vec![
            C64::from_polar(1.0, -a / 2.0),
            C64::from_polar(1.0, a / 2.0),
        ]))
    };
    let rx = |a: f64| {
        let c = C64::new((a / 2.0).cos(), 0.0);
        let s = C64::new(0.0, -(a / 2.0).sin());
        Cmat::from_row_slice(2, 2, &[c, s, s, c])
    };
    rz(euler[0]) * rx(euler[1]) * rz(euler[2])
}

/// zxz Euler angles of an SU(2) matrix [[a, b], [−b̄, ā]].
fn euler_angles(u: &Cmat) -> [f64; 3] {
    let a = u[(0, 0)];
    let b = u[(0, 1)];
    let alpha2 = 2.0 * b.norm().atan2(a.norm());
    if b.norm() < 1e-12 {
        return [-2.0 * a.arg(), 0.0, 0.0];
    }
    if a.norm() < 1e-12 {
        let phi_m = -2.0 * (b.arg() + std::f64::consts::FRAC_PI_2);
        return [phi_m, std::f64::consts::PI, 0.0];
    }
    let phi_p = -2.0 * a.arg();
    let phi_m = -2.0 * (b.arg() + std::f64::consts::FRAC_PI_2);
    [(phi_p + phi_m) / 2.0, alpha2, (phi_p - phi_m) / 2.0]
}

fn words_up_to(k: usize, max_len: usize) -> Vec<GroupElement> {
    let mut out = vec![GroupElement::Word { letters: Vec::new() }];
    let mut frontier: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 1..=k as i64 {
                let mut nw = w.clone();
                nw.push(l);
                out.push(GroupElement::Word { letters: nw.clone() });
                next.push(nw);
            }
        }
        frontier = next;
    }
    out
}

/// (I ⊗ Z): x ↦ x, p ↦ −p on every mode.
pub fn z_reflection(n: usize) -> Dmat {
    let mut m = Dmat::identity(2 * n, 2 * n);
    for j in 0..n {
        m[(2 * j + 1, 2 * j + 1)] = -1.0;
    }
    m
}

/// ⊕ⱼ qⱼ I₂ for U(1) charges.
pub fn u1_charge_matrix(charges: &[i64]) -> Dmat {
    let n = charges.len();
    let mut q = Dmat::zeros(2 * n, 2 * n);
    for (j, &c) in charges.iter().rev().enumerate() {
        // reversed iteration is irrelevant; kept simple below
        let _ = (j, c);
    }
    for (j, &c) in charges.iter().enumerate() {
        q[(2 * j, 2 * j)] = c as f64;
        q[(2 * j + 1, 2 * j + 1)] = c as f64;
    }
    q
}

/// V⁻¹ = Ωᵀ Vᵀ Ω for symplectic V.
pub fn symplectic_inverse(v: &Dmat) -> Dmat {
    let om = omega(v.nrows() / 2);
    om.transpose() * v.transpose() * om
}

/// Real interleaved matrix of a passive transformation given its complex
/// annihilation-sector unitary: the (1,1)-tensor [[U, 0], [0, U*]].
pub fn passive_complex_to_real(u: &Cmat) -> Result<Dmat> {
    let n = u.nrows();
    let mut big = Cmat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = u[(i, j)];
            big[(n + i, n + j)] = u[(i, j)].conj();
        }
    }
    let ps = PhaseSpaceMatrix { entries: big, basis: BasisTag::Complex };
    let real = convert_basis(&ps, TensorType::OneOne, BasisTag::RealInterleaved)?;
    let (m, max_im) = to_real(&real.entries);
    if max_im > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "passive conversion produced imaginary parts up to {max_im:.3e}"
        )));
    }
    Ok(m)
}

/// Annihilation-sector unitary of an orthogonal symplectic matrix; errors
/// if the matrix mixes creation and annihilation operators.
pub fn real_symplectic_to_passive_unitary(s: &Dmat) -> Result<Cmat> {
    let ps = PhaseSpaceMatrix::from_real(s.clone(), BasisTag::RealInterleaved);
    let c = convert_basis(&ps, TensorType::OneOne, BasisTag::Complex)?;
    let n = s.nrows() / 2;
    let mut u = Cmat::zeros(n, n);
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            u[(i, j)] = c.entries[(i, j)];
            off = off.max(c.entries[(i, n + j)].norm());
        }
    }
    if off > 1e-8 {
        return Err(Error::UnsupportedRep(format!(
            "matrix is not passive (creation/annihilation mixing {off:.3e})"
        )));
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// invariance and covariance checks
// ---------------------------------------------------------------------------

fn vec_residual(v: &Dvec) -> f64 {
    v.norm()
}

/// Invariance of a state's moments: S(g) d = d and S(g) σ S(g)ᵀ = σ.
pub fn is_invariant_state(
    rep: &SymmetryRep,
    d: &Dvec,
    sigma: &Dmat,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    if d.len() != 2 * rep.n_modes() || sigma.nrows() != 2 * rep.n_modes() {
        return Err(Error::DimensionMismatch("state vs representation".into()));
    }
    let dscale = 1.0_f64.max(d.norm());
    let sscale = 1.0_f64.max(frobenius(sigma));
    let mut residual: f64 = 0.0;
    for gen in rep.generators() {
        residual = residual.max(vec_residual(&(&gen * d)) / dscale);
        residual = residual.max(frobenius(&(&gen * sigma + sigma * gen.transpose())) / sscale);
    }
    for g in rep.probe_elements() {
        let s = rep.element_matrix(&g)?;
        residual = residual.max(vec_residual(&(&s * d - d)) / dscale);
        residual = residual.max(frobenius(&(&s * sigma * s.transpose() - sigma)) / sscale);
    }
    Ok(InvarianceReport { invariant: residual <= tol.inv, residual })
}

/// Invariance of a Gaussian unitary: S(g) ξ = ξ and S(g) V S(g)⁻¹ = V.
pub fn is_invariant_unitary(
    rep: &SymmetryRep,
    xi: &Dvec,
    v: &Dmat,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    let vscale = 1.0_f64.max(frobenius(v));
    let xscale = 1.0_f64.max(xi.norm());
    let mut residual: f64 = 0.0;
    for gen in rep.generators() {
        residual = residual.max(vec_residual(&(&gen * xi)) / xscale);
        residual = residual.max(frobenius(&(&gen * v - v * &gen)) / vscale);
    }
    for g in rep.probe_elements() {
        let s = rep.element_matrix(&g)?;
        residual = residual.max(vec_residual(&(&s * xi - xi)) / xscale);
        residual = residual.max(frobenius(&(&s * v - v * &s)) / vscale);
    }
    Ok(InvarianceReport { invariant: residual <= tol.inv, residual })
}

/// Invariance of a second-order Hamiltonian (ξ, H):
/// S(g) ξ = ξ and S(g) Ω H Ω S(g)ᵀ = Ω H Ω.
pub fn is_invariant_hamiltonian(
    rep: &SymmetryRep,
    xi: &Dvec,
    h: &Dmat,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    let om = omega(rep.n_modes());
    let core = &om * h * &om;
    let cscale = 1.0_f64.max(frobenius(&core));
    let xscale = 1.0_f64.max(xi.norm());
    let mut residual: f64 = 0.0;
    for gen in rep.generators() {
        residual = residual.max(vec_residual(&(&gen * xi)) / xscale);
        residual = residual.max(frobenius(&(&gen * &core + &core * gen.transpose())) / cscale);
    }
    for g in rep.probe_elements() {
        let s = rep.element_matrix(&g)?;
        residual = residual.max(vec_residual(&(&s * xi - xi)) / xscale);
        residual = residual.max(frobenius(&(&s * &core * s.transpose() - &core)) / cscale);
    }
    Ok(InvarianceReport { invariant: residual <= tol.inv, residual })
}

/// Covariance of a channel: S_B(g) ξ = ξ, X S_A(g) = S_B(g) X,
/// S_B(g) Y S_B(g)ᵀ = Y.
pub fn is_covariant_channel(
    rep_in: &SymmetryRep,
    rep_out: &SymmetryRep,
    ch: &GaussianChannel,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    if rep_in.n_modes() != ch.n_in || rep_out.n_modes() != ch.n_out {
        return Err(Error::DimensionMismatch("channel vs representations".into()));
    }
    let xscale = 1.0_f64.max(frobenius(&ch.x));
    let yscale = 1.0_f64.max(frobenius(&ch.y));
    let xiscale = 1.0_f64.max(ch.xi.norm());
    let mut residual: f64 = 0.0;
    let gens_in = rep_in.generators();
    let gens_out = rep_out.generators();
    if gens_in.len() == gens_out.len() {
        for (ga, gb) in gens_in.iter().zip(gens_out.iter()) {
            residual = residual.max(frobenius(&(&ch.x * ga - gb * &ch.x)) / xscale);
            residual = residual.max(frobenius(&(gb * &ch.y + &ch.y * gb.transpose())) / yscale);
            residual = residual.max(vec_residual(&(gb * &ch.xi)) / xiscale);
        }
    }
    let probes_in = rep_in.probe_elements();
    for g in probes_in {
        let sa = rep_in.element_matrix(&g)?;
        let sb = rep_out.element_matrix(&g)?;
        residual = residual.max(frobenius(&(&ch.x * &sa - &sb * &ch.x)) / xscale);
        residual = residual.max(frobenius(&(&sb * &ch.y * sb.transpose() - &ch.y)) / yscale);
        residual = residual.max(vec_residual(&(&sb * &ch.xi - &ch.xi)) / xiscale);
    }
    Ok(InvarianceReport { invariant: residual <= tol.inv, residual })
}

/// Orthogonalize a representation around a supplied invariant covariance:
/// returns the symplectic R = √σ_∞ (σ_∞ the pure zero-temperature limit of
/// σ) and the equivalent passive representation R⁻¹ S(g) R.
pub fn orthogonalize(
    rep: &SymmetryRep,
    sigma: &Dmat,
    tol: &Tolerances,
) -> Result<(Dmat, SymmetryRep)> {
    let zero = Dvec::zeros(2 * rep.n_modes());
    let check = is_invariant_state(rep, &zero, sigma, tol)?;
    if !check.invariant {
        return Err(Error::NotInvariant { residual: check.residual });
    }
    // σ_∞ = S⁻¹ S⁻ᵀ from the Williamson factor: the α→∞ limit of σ_α
    let (s, _) = williamson(sigma)?;
    let s_inv = symplectic_inverse(&s);
    let sigma_inf = &s_inv * s_inv.transpose();
    let r = spd_sqrt(&sigma_inf)?;
    let r_inv = symplectic_inverse(&r);
    let old_conj = rep
        .conjugator
        .clone()
        .unwrap_or_else(|| Dmat::identity(2 * rep.n_modes(), 2 * rep.n_modes()));
    let new_conj = &r_inv * old_conj;
    let passive = SymmetryRep {
        kind: rep.kind.clone(),
        n_modes: rep.n_modes,
        conjugator: Some(new_conj),
    };
    // certify orthogonality on the probes
    for g in passive.probe_elements() {
        let m = passive.element_matrix(&g)?;
        if !is_orthogonal_symplectic(&m, &Tolerances { sympl: 1e-7, ..*tol }) {
            return Err(Error::Infeasible {
                reason: "orthogonalized representation is not orthogonal".into(),
                residual: rel_diff(&(&m * m.transpose()), &Dmat::identity(m.nrows(), m.ncols())),
            });
        }
    }
    Ok((r, passive))
}

// ---------------------------------------------------------------------------
// irrep projection
// ---------------------------------------------------------------------------

/// Irrep label for [`irrep_project`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrepLabel {
    /// U(1) irrep with integer charge m.
    U1Charge(i64),
    /// The defining (2-dimensional) SU(2) irrep.
    Su2Defining,
}

/// Project a complex 2n×2n matrix (e.g. d d† of a complex-basis
/// displacement) onto an irrep block, tracing out the multiplicity space.
///
/// Output is d_μ × d_μ: 1×1 for U(1) charges, 2×2 for the SU(2) defining
/// irrep. Positive semidefinite whenever the input is.
pub fn irrep_project(
    rep: &SymmetryRep,
    label: IrrepLabel,
    m: &Cmat,
) -> Result<Cmat> {
    let n = rep.n_modes();
    if m.nrows() != 2 * n || m.ncols() != 2 * n {
        return Err(Error::DimensionMismatch("matrix must be 2n×2n in the complex basis".into()));
    }
    // undo the conjugator: M lives on (1,0)⊗(0,1) tensors, so it transforms
    // with the complex form of R⁻¹ on both sides
    let m = match &rep.conjugator {
        None => m.clone(),
        Some(r) => {
            let rinv = symplectic_inverse(r);
            let ps = PhaseSpaceMatrix::from_real(rinv, BasisTag::RealInterleaved);
            let rc = convert_basis(&ps, TensorType::OneOne, BasisTag::Complex)?.entries;
            &rc * m * rc.adjoint()
        }
    };
    match (&rep.kind, label) {
        (RepKind::U1 { charges }, IrrepLabel::U1Charge(want)) => {
            let mut total = C64::new(0.0, 0.0);
            for i in 0..2 * n {
                let q = if i < n { charges[i] } else { -charges[i - n] };
                if q == want {
                    total += m[(i, i)];
                }
            }
            Ok(Cmat::from_row_slice(1, 1, &[total]))
        }
        (RepKind::Su2Schwinger { pairs }, IrrepLabel::Su2Defining) => {
            // K groups each pair into two multiplicity rows of the defining
            // irrep: the annihilation block unchanged, the creation block
            // rotated by Ω (which intertwines U* with U).
            let mut t = Cmat::zeros(2, 2);
            let omega1 = [
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
                [C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
            ];
            for p in pairs {
                if p.conjugated {
                    return Err(Error::UnsupportedRep(
                        "irrep projection with conjugated Schwinger pairs".into(),
                    ));
                }
                let (j, k) = p.modes;
                let ann = [j, k];
                let cre = [n + j, n + k];
                // annihilation multiplicity row: rows (j,k) of K are identity
                for s in 0..2 {
                    for sp in 0..2 {
                        t[(s, sp)] += m[(ann[s], ann[sp])];
                    }
                }
                // creation multiplicity row: rows are Ω over (j†, k†)
                for s in 0..2 {
                    for sp in 0..2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for a in 0..2 {
                            for b in 0..2 {
                                acc += omega1[s][a] * m[(cre[a], cre[b])] * omega1[sp][b].conj();
                            }
                        }
                        t[(s, sp)] += acc;
                    }
                }
            }
            Ok(t)
        }
        _ => Err(Error::UnsupportedRep(
            "irrep projection supports U(1) charges and the SU(2) defining irrep".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// samplers in the commutant
// ---------------------------------------------------------------------------

/// Random real matrix intertwining two U(1) charge patterns
/// (X S_in(θ) = S_out(θ) X), built from the 2×2 block form of the
/// commutant: m·e^{θΩ} between equal charges, m·Z e^{θΩ} between opposite
/// charges, arbitrary on zero-charge blocks.
pub fn u1_intertwiner_sample(
    charges_out: &[i64],
    charges_in: &[i64],
    scale: f64,
    rng: &mut impl Rng,
) -> Dmat {
    let (no, ni) = (charges_out.len(), charges_in.len());
    let mut x = Dmat::zeros(2 * no, 2 * ni);
    for (j, &qo) in charges_out.iter().enumerate() {
        for (k, &qi) in charges_in.iter().enumerate() {
            let block: Option<Dmat> = if qo == 0 && qi == 0 {
                Some(Dmat::from_fn(2, 2, |_, _| rng.gen_range(-1.0..1.0) * scale))
            } else if qo == qi && qo != 0 {
                let m: f64 = rng.gen_range(-1.0..1.0) * scale;
                let t: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                Some(rot(t) * m)
            } else if qo == -qi && qo != 0 {
                let m: f64 = rng.gen_range(-1.0..1.0) * scale;
                let t: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                Some(zmat() * rot(t) * m)
            } else {
                None
            };
            if let Some(b) = block {
                for a in 0..2 {
                    for c in 0..2 {
                        x[(2 * j + a, 2 * k + c)] = b[(a, c)];
                    }
                }
            }
        }
    }
    x
}

fn rot(t: f64) -> Dmat {
    Dmat::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
}

fn zmat() -> Dmat {
    Dmat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Random symmetric matrix commuting (by congruence) with a U(1)
/// representation: a symmetrized commutant sample.
pub fn u1_invariant_symmetric_sample(charges: &[i64], scale: f64, rng: &mut impl Rng) -> Dmat {
    let a = u1_intertwiner_sample(charges, charges, scale, rng);
    (&a + a.transpose()) * 0.5
}

/// Random invariant Gaussian state of a representation: an invariant
/// symplectic congruence of a product of thermal modes, displaced only on
/// trivially-acting modes.
pub fn random_invariant_state(
    rep: &SymmetryRep,
    max_nbar: f64,
    rng: &mut impl Rng,
) -> Result<GaussianState> {
    let n = rep.n_modes();
    let base = match &rep.kind {
        RepKind::U1 { charges } => {
            let h = u1_invariant_symmetric_sample(charges, 0.4, rng);
            let v = crate::symplectic::symplectic_from_hamiltonian(&h);
            let mut diag = Dmat::zeros(2 * n, 2 * n);
            for j in 0..n {
                let nu = 1.0 + 2.0 * rng.gen_range(0.0..max_nbar.max(1e-9));
                diag[(2 * j, 2 * j)] = nu;
                diag[(2 * j + 1, 2 * j + 1)] = nu;
            }
            let sigma = &v * diag * v.transpose();
            let mut d = Dvec::zeros(2 * n);
            for (j, &q) in charges.iter().enumerate() {
                if q == 0 {
                    d[2 * j] = rng.gen_range(-1.0..1.0);
                    d[2 * j + 1] = rng.gen_range(-1.0..1.0);
                }
            }
            GaussianState::from_parts_unchecked(d, sigma)
        }
        RepKind::Su2Schwinger { pairs } => {
            // invariant states are products of equal-temperature pairs
            let mut sigma = Dmat::identity(2 * n, 2 * n);
            for p in pairs {
                let nu = 1.0 + 2.0 * rng.gen_range(0.0..max_nbar.max(1e-9));
                for m in [p.modes.0, p.modes.1] {
                    sigma[(2 * m, 2 * m)] = nu;
                    sigma[(2 * m + 1, 2 * m + 1)] = nu;
                }
            }
            GaussianState::from_parts_unchecked(Dvec::zeros(2 * n), sigma)
        }
        RepKind::ExplicitFinite { .. } => {
            return Err(Error::UnsupportedRep(
                "random invariant states are generated for U(1) and SU(2) only".into(),
            ))
        }
    };
    match &rep.conjugator {
        None => Ok(base),
        Some(r) => {
            let d = r * &base.d;
            let sigma = r * &base.sigma * r.transpose();
            Ok(GaussianState::from_parts_unchecked(d, sigma))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::one_mode_squeezer_matrix;
    use crate::linalg::expm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerances = Tolerances::DEFAULT;

    #[test]
    fn u1_quarter_turn() {
        let rep = SymmetryRep::u1(vec![1]).unwrap();
        let s = rep
            .element_matrix(&GroupElement::U1 { theta: std::f64::consts::FRAC_PI_2 })
            .unwrap();
        let expect = Dmat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(rel_diff(&s, &expect) < 1e-14);
    }

    #[test]
    fn identity_element_maps_to_identity() {
        let rep = SymmetryRep::u1(vec![2, -1]).unwrap();
        let s = rep.element_matrix(&rep.identity_element()).unwrap();
        assert!(rel_diff(&s, &Dmat::identity(4, 4)) < 1e-15);
    }

    #[test]
    fn u1_element_equals_matrix_exponential() {
        let rep = SymmetryRep::u1(vec![1, -1]).unwrap();
        let theta = 0.3;
        let s = rep.element_matrix(&GroupElement::U1 { theta }).unwrap();
        let q = u1_charge_matrix(&[1, -1]);
        let via_exp = expm(&(-omega(2) * q * theta));
        assert!(rel_diff(&s, &via_exp) < 1e-10);
    }

    #[test]
    fn group_law_u1_and_su2() {
        let u1 = SymmetryRep::u1(vec![1, 2, -1]).unwrap();
        let su2 = SymmetryRep::su2_schwinger(
            vec![SchwingerPair { modes: (0, 1), conjugated: false }],
            2,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for rep in [&u1, &su2] {
            let elems = rep.sample_elements(20, 99).unwrap();
            for _ in 0..30 {
                let g1 = &elems[rng.gen_range(0..elems.len())];
                let g2 = &elems[rng.gen_range(0..elems.len())];
                let s1 = rep.element_matrix(g1).unwrap();
                let s2 = rep.element_matrix(g2).unwrap();
                let s21 = rep.element_matrix(&compose(g2, g1).unwrap()).unwrap();
                assert!(rel_diff(&(&s2 * &s1), &s21) < 1e-9);
            }
            // inverse law
            let g = &elems[3];
            let s = rep.element_matrix(g).unwrap();
            let sinv = rep.element_matrix(&invert(g)).unwrap();
            assert!(rel_diff(&(&s * &sinv), &Dmat::identity(s.nrows(), s.ncols())) < 1e-9);
        }
    }

    #[test]
    fn sampled_elements_are_symplectic_and_reproducible() {
        let su2 = SymmetryRep::su2_schwinger(
            vec![SchwingerPair { modes: (0, 1), conjugated: false }],
            2,
        )
        .unwrap();
        let a = su2.sample_elements(5, 0).unwrap();
        let b = su2.sample_elements(5, 0).unwrap();
        assert_eq!(a, b);
        for g in &a {
            let s = su2.element_matrix(g).unwrap();
            assert!(crate::symplectic::is_symplectic(&s, &TOL));
            assert!(is_orthogonal_symplectic(&s, &TOL));
        }
        let u1 = SymmetryRep::u1(vec![1]).unwrap();
        let e = u1.sample_elements(3, 0).unwrap();
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn explicit_words_enumerate() {
        let g = rot(std::f64::consts::FRAC_PI_2);
        let rep = SymmetryRep::explicit_finite(vec![g]).unwrap();
        let words = rep.probe_elements();
        // lengths 0..=3 over one generator
        assert_eq!(words.len(), 4);
        for w in &words {
            let s = rep.element_matrix(w).unwrap();
            assert!(crate::symplectic::is_symplectic(&s, &TOL));
        }
    }

    #[test]
    fn vacuum_invariant_under_passive_reps() {
        let reps = [
            SymmetryRep::u1(vec![1, -2]).unwrap(),
            SymmetryRep::su2_schwinger(
                vec![SchwingerPair { modes: (0, 1), conjugated: false }],
                2,
            )
            .unwrap(),
        ];
        for rep in reps {
            let d = Dvec::zeros(4);
            let sigma = Dmat::identity(4, 4);
            let rep_report = is_invariant_state(&rep, &d, &sigma, &TOL).unwrap();
            assert!(rep_report.invariant, "residual {}", rep_report.residual);
        }
    }

    #[test]
    fn opposite_charge_cross_block_state_is_invariant() {
        // σ with blocks a₁₂ Z e^{θΩ} between charges (1, −1)
        let rep = SymmetryRep::u1(vec![1, -1]).unwrap();
        let a11 = 2.0;
        let a22 = 1.5;
        let a12 = 0.4;
        let theta = 0.9;
        let cross = zmat() * rot(theta) * a12;
        let mut sigma = Dmat::zeros(4, 4);
        for i in 0..2 {
            sigma[(i, i)] = a11;
            sigma[(2 + i, 2 + i)] = a22;
        }
        for a in 0..2 {
            for b in 0..2 {
                sigma[(a, 2 + b)] = cross[(a, b)];
                sigma[(2 + b, a)] = cross[(a, b)];
            }
        }
        let rpt = is_invariant_state(&rep, &Dvec::zeros(4), &sigma, &TOL).unwrap();
        assert!(rpt.invariant, "residual {}", rpt.residual);
    }

    #[test]
    fn squeezed_state_not_invariant_under_passive_u1() {
        let rep = SymmetryRep::u1(vec![1]).unwrap();
        let v = one_mode_squeezer_matrix(0.5);
        let sigma = &v * v.transpose();
        let rpt = is_invariant_state(&rep, &Dvec::zeros(2), &sigma, &TOL).unwrap();
        assert!(!rpt.invariant);
        assert!(rpt.residual > 1e-2);
    }

    #[test]
    fn beam_splitter_invariance_by_charge_pattern() {
        let bs = crate::channel::beam_splitter_matrix(0.7);
        let equal = SymmetryRep::u1(vec![1, 1]).unwrap();
        let rpt = is_invariant_unitary(&equal, &Dvec::zeros(4), &bs, &TOL).unwrap();
        assert!(rpt.invariant, "residual {}", rpt.residual);

        let sq = crate::channel::two_mode_squeezer_matrix(0.4);
        let rpt = is_invariant_unitary(&equal, &Dvec::zeros(4), &sq, &TOL).unwrap();
        assert!(!rpt.invariant);
        // two-mode squeezer respects opposite charges instead
        let opp = SymmetryRep::u1(vec![1, -1]).unwrap();
        let rpt = is_invariant_unitary(&opp, &Dvec::zeros(4), &sq, &TOL).unwrap();
        assert!(rpt.invariant, "residual {}", rpt.residual);
    }

    #[test]
    fn attenuator_is_covariant_for_equal_charges() {
        let rep = SymmetryRep::u1(vec![1]).unwrap();
        let ch = GaussianChannel::attenuator(0.8, 0.7);
        let rpt = is_covariant_channel(&rep, &rep, &ch, &TOL).unwrap();
        assert!(rpt.invariant);
        // displacement on a charged mode breaks covariance
        let mut bad = ch.clone();
        bad.xi = Dvec::from_vec(vec![0.5, 0.0]);
        let rpt = is_covariant_channel(&rep, &rep, &bad, &TOL).unwrap();
        assert!(!rpt.invariant);
        // identity channel is covariant for any matching representations
        let id = GaussianChannel::identity(1);
        assert!(is_covariant_channel(&rep, &rep, &id, &TOL).unwrap().invariant);
    }

    #[test]
    fn conjugate_rep_negates_charges_and_is_involutive() {
        let rep = SymmetryRep::u1(vec![1, 2]).unwrap();
        let conj = rep.conjugate();
        match conj.kind() {
            RepKind::U1 { charges } => assert_eq!(charges, &vec![-1, -2]),
            _ => panic!("kind changed"),
        }
        let back = conj.conjugate();
        assert_eq!(back, rep);
        // matrices agree with Z-sandwich
        let zs = z_reflection(2);
        let g = GroupElement::U1 { theta: 0.7 };
        let a = conj.element_matrix(&g).unwrap();
        let b = &zs * rep.element_matrix(&g).unwrap() * &zs;
        assert!(rel_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn conjugated_su2_elements_remain_symplectic() {
        let rep = SymmetryRep::su2_schwinger(
            vec![SchwingerPair { modes: (0, 1), conjugated: true }],
            2,
        )
        .unwrap();
        for g in rep.probe_elements() {
            let s = rep.element_matrix(&g).unwrap();
            assert!(crate::symplectic::is_symplectic(&s, &TOL));
        }
    }

    #[test]
    fn orthogonalize_squeezed_u1_family() {
        // S_r(θ) = V_1sq(r) e^{−θΩ} V_1sq(−r) admits invariant σ = V V ᵀ
        let r = 0.5;
        let v = one_mode_squeezer_matrix(r);
        let rep = SymmetryRep::u1(vec![1]).unwrap().with_conjugator(v.clone()).unwrap();
        let sigma = &v * v.transpose();
        let (rmat, passive) = orthogonalize(&rep, &sigma, &TOL).unwrap();
        // R = V_1sq(r) up to an orthogonal symplectic factor
        let q = symplectic_inverse(&v) * &rmat;
        assert!(is_orthogonal_symplectic(&q, &Tolerances { sympl: 1e-7, ..TOL }));
        for g in passive.probe_elements() {
            assert!(is_orthogonal_symplectic(
                &passive.element_matrix(&g).unwrap(),
                &Tolerances { sympl: 1e-7, ..TOL }
            ));
        }
        // passive rep with σ = I returns R orthogonal
        let plain = SymmetryRep::u1(vec![1, -1]).unwrap();
        let (r2, _) = orthogonalize(&plain, &Dmat::identity(4, 4), &TOL).unwrap();
        assert!(rel_diff(&r2, &Dmat::identity(4, 4)) < 1e-9);
    }

    #[test]
    fn irrep_projection_u1_coherent() {
        let rep = SymmetryRep::u1(vec![1]).unwrap();
        let g = C64::new(0.8, 0.5);
        // complex displacement (γ, γ*)
        let d = crate::linalg::Cvec::from_vec(vec![g, g.conj()]);
        let dd = &d * d.adjoint();
        let t = irrep_project(&rep, IrrepLabel::U1Charge(1), &dd).unwrap();
        assert!((t[(0, 0)].re - g.norm_sqr()).abs() < 1e-12);
        // zero displacement projects to zero
        let z = irrep_project(&rep, IrrepLabel::U1Charge(1), &Cmat::zeros(2, 2)).unwrap();
        assert!(z[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn irrep_projection_su2_full_support() {
        let rep = SymmetryRep::su2_schwinger(
            vec![SchwingerPair { modes: (0, 1), conjugated: false }],
            2,
        )
        .unwrap();
        // ⟨a₁⟩ = 1, ⟨a₂⟩ = 0
        let d = crate::linalg::Cvec::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let dd = &d * d.adjoint();
        let t = irrep_project(&rep, IrrepLabel::Su2Defining, &dd).unwrap();
        let svd = t.svd(false, false);
        let smax = svd.singular_values[0];
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-8 * smax)
            .count();
        assert_eq!(rank, 2);
    }

    #[test]
    fn u1_intertwiner_commutes_on_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let charges = vec![1, -1, 0];
        let rep = SymmetryRep::u1(charges.clone()).unwrap();
        let x = u1_intertwiner_sample(&charges, &charges, 1.0, &mut rng);
        for g in rep.probe_elements() {
            let s = rep.element_matrix(&g).unwrap();
            assert!(frobenius(&(&x * &s - &s * &x)) / frobenius(&x).max(1.0) < 1e-10);
        }
    }

    #[test]
    fn random_invariant_states_check_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rep = SymmetryRep::u1(vec![1, -1, 0]).unwrap();
        for _ in 0..5 {
            let s = random_invariant_state(&rep, 1.0, &mut rng).unwrap();
            let rpt = is_invariant_state(&rep, &s.d, &s.sigma, &TOL).unwrap();
            assert!(rpt.invariant, "residual {}", rpt.residual);
            assert!(s.uncertainty_margin() > -1e-8);
        }
    }
}
