//! Basis tags and conversions for phase-space tensors.
//!
//! Canonical storage is the real interleaved basis (x₁, p₁, …, xₙ, pₙ).
//! The xp-ordered basis (x₁, …, xₙ, p₁, …, pₙ) exists transiently as a
//! stepping stone to the complex basis (â₁, …, âₙ, â†₁, …, â†ₙ).
//!
//! How a tensor converts depends on how it transforms under a basis change:
//! (1,1)-tensors (symplectic matrices, X) by similarity, (2,0)-tensors
//! (covariance matrices, Y) and (0,2)-tensors (Hamiltonian matrices) by
//! congruence, (1,0)-tensors (displacement vectors) as plain vectors. In
//! the complex basis the (2,0)/(0,2) tensors pick up a left-right mirroring
//! by X ⊗ Iₙ on top of the (1,1) rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{to_complex, Cmat, Dmat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisTag {
    #[serde(rename = "real-interleaved")]
    RealInterleaved,
    #[serde(rename = "real-xp-ordered")]
    RealXpOrdered,
    #[serde(rename = "complex")]
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TensorType {
    #[serde(rename = "(1,1)")]
    OneOne,
    #[serde(rename = "(2,0)")]
    TwoZero,
    #[serde(rename = "(0,2)")]
    ZeroTwo,
    #[serde(rename = "(1,0)")]
    OneZero,
}

/// A matrix (or column vector, for (1,0)-tensors) together with the basis
/// its entries refer to. Entries are stored complex; real-tagged values
/// have vanishing imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceMatrix {
    pub entries: Cmat,
    pub basis: BasisTag,
}

impl PhaseSpaceMatrix {
    pub fn from_real(m: Dmat, basis: BasisTag) -> Self {
        PhaseSpaceMatrix { entries: to_complex(&m), basis }
    }

    pub fn real_entries(&self) -> Result<Dmat> {
        let max_im = self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if max_im > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "matrix has imaginary parts up to {max_im:.3e}; not a real-basis tensor"
            )));
        }
        Ok(self.entries.map(|z| z.re))
    }
}

fn check_even(dim: usize) -> Result<usize> {
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::DimensionMismatch(format!(
            "phase-space dimension {dim} is not a positive even number"
        )));
    }
    Ok(dim / 2)
}

/// Permutation sending interleaved coordinates to xp-ordered ones.
fn perm_interleaved_to_xp(n: usize) -> Dmat {
    let mut p = Dmat::zeros(2 * n, 2 * n);
    for j in 0..n {
        p[(j, 2 * j)] = 1.0; // x_j
        p[(n + j, 2 * j + 1)] = 1.0; // p_j
    }
    p
}

/// Unitary sending xp-ordered real coordinates to the complex basis,
/// C = (1/√2) [[I, iI], [I, −iI]].
fn xp_to_complex_unitary(n: usize) -> Cmat {
    let s = C64::new(1.0 / 2f64.sqrt(), 0.0);
    let i = C64::new(0.0, 1.0);
    let mut c = Cmat::zeros(2 * n, 2 * n);
    for j in 0..n {
        c[(j, j)] = s;
        c[(j, n + j)] = s * i;
        c[(n + j, j)] = s;
        c[(n + j, n + j)] = -s * i;
    }
    c
}

/// The mirroring X ⊗ Iₙ applied to (2,0)/(0,2)-tensors in the complex basis.
fn mirror(n: usize) -> Cmat {
    let one = C64::new(1.0, 0.0);
    let mut m = Cmat::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(j, n + j)] = one;
        m[(n + j, j)] = one;
    }
    m
}

/// Convert a phase-space tensor between bases.
///
/// Conversions are involutive: converting to a basis and back reproduces
/// the input up to rounding.
pub fn convert_basis(
    m: &PhaseSpaceMatrix,
    tensor: TensorType,
    target: BasisTag,
) -> Result<PhaseSpaceMatrix> {
    if m.basis == target {
        return Ok(m.clone());
    }
    // route everything through the xp-ordered real basis
    let as_xp = to_xp(m, tensor)?;
    match target {
        BasisTag::RealXpOrdered => Ok(as_xp),
        BasisTag::RealInterleaved => {
            let n = check_even(as_xp.entries.nrows())?;
            let p = to_complex(&perm_interleaved_to_xp(n));
            let e = match tensor {
                TensorType::OneZero => p.adjoint() * &as_xp.entries,
                _ => p.adjoint() * &as_xp.entries * &p,
            };
            Ok(PhaseSpaceMatrix { entries: e, basis: BasisTag::RealInterleaved })
        }
        BasisTag::Complex => {
            let n = check_even(as_xp.entries.nrows())?;
            let c = xp_to_complex_unitary(n);
            let e = match tensor {
                TensorType::OneZero => &c * &as_xp.entries,
                TensorType::OneOne => &c * &as_xp.entries * c.adjoint(),
                TensorType::TwoZero => (&c * &as_xp.entries * c.adjoint()) * mirror(n),
                TensorType::ZeroTwo => mirror(n) * (&c * &as_xp.entries * c.adjoint()),
            };
            Ok(PhaseSpaceMatrix { entries: e, basis: BasisTag::Complex })
        }
    }
}

fn to_xp(m: &PhaseSpaceMatrix, tensor: TensorType) -> Result<PhaseSpaceMatrix> {
    let n = check_even(m.entries.nrows())?;
    let e = match m.basis {
        BasisTag::RealXpOrdered => m.entries.clone(),
        BasisTag::RealInterleaved => {
            let p = to_complex(&perm_interleaved_to_xp(n));
            match tensor {
                TensorType::OneZero => &p * &m.entries,
                _ => &p * &m.entries * p.adjoint(),
            }
        }
        BasisTag::Complex => {
            let c = xp_to_complex_unitary(n);
            match tensor {
                TensorType::OneZero => c.adjoint() * &m.entries,
                TensorType::OneOne => c.adjoint() * &m.entries * &c,
                TensorType::TwoZero => c.adjoint() * (&m.entries * mirror(n)) * &c,
                TensorType::ZeroTwo => c.adjoint() * (mirror(n) * &m.entries) * &c,
            }
        }
    };
    Ok(PhaseSpaceMatrix { entries: e, basis: BasisTag::RealXpOrdered })
}

/// Serialized form: row-major data, re/im interleaved when complex.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    basis_tag: BasisTag,
    data: Vec<f64>,
}

impl Serialize for PhaseSpaceMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let complex = self.basis == BasisTag::Complex;
        let mut data = Vec::with_capacity(self.entries.len() * if complex { 2 } else { 1 });
        for r in 0..self.entries.nrows() {
            for c in 0..self.entries.ncols() {
                data.push(self.entries[(r, c)].re);
                if complex {
                    data.push(self.entries[(r, c)].im);
                }
            }
        }
        MatrixJson {
            rows: self.entries.nrows(),
            cols: self.entries.ncols(),
            basis_tag: self.basis,
            data,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhaseSpaceMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        let complex = j.basis_tag == BasisTag::Complex;
        let stride = if complex { 2 } else { 1 };
        if j.data.len() != j.rows * j.cols * stride {
            return Err(serde::de::Error::custom("matrix data length mismatch"));
        }
        let mut m = Cmat::zeros(j.rows, j.cols);
        for r in 0..j.rows {
            for c in 0..j.cols {
                let k = (r * j.cols + c) * stride;
                m[(r, c)] = if complex {
                    C64::new(j.data[k], j.data[k + 1])
                } else {
                    C64::new(j.data[k], 0.0)
                };
            }
        }
        Ok(PhaseSpaceMatrix { entries: m, basis: j.basis_tag })
    }
}

/// Row-major flattening used by the state/channel JSON schemas.
pub fn dmat_to_row_major(m: &Dmat) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(m[(r, c)]);
        }
    }
    out
}

pub fn dmat_from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Dmat> {
    if data.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "expected {} entries for a {rows}x{cols} matrix, got {}",
            rows * cols,
            data.len()
        )));
    }
    Ok(Dmat::from_row_slice(rows, cols, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{omega, rel_diff_c};

    #[test]
    fn identity_one_one_tensor_is_identity_in_complex_basis() {
        let id = PhaseSpaceMatrix::from_real(Dmat::identity(4, 4), BasisTag::RealInterleaved);
        let c = convert_basis(&id, TensorType::OneOne, BasisTag::Complex).unwrap();
        assert!(rel_diff_c(&c.entries, &Cmat::identity(4, 4)) < 1e-14);
    }

    #[test]
    fn omega_as_two_zero_tensor_has_off_diagonal_complex_blocks() {
        // Ω → −i [[0, I], [−I, 0]] in the complex basis
        let om = PhaseSpaceMatrix::from_real(omega(1), BasisTag::RealInterleaved);
        let c = convert_basis(&om, TensorType::TwoZero, BasisTag::Complex).unwrap();
        let mi = C64::new(0.0, -1.0);
        let mut expect = Cmat::zeros(2, 2);
        expect[(0, 1)] = mi;
        expect[(1, 0)] = -mi;
        assert!(rel_diff_c(&c.entries, &expect) < 1e-14);
    }

    #[test]
    fn round_trip_is_tight_for_all_tensor_types() {
        let m = Dmat::from_row_slice(
            4,
            4,
            &[
                0.3, -1.2, 0.7, 2.0, 1.1, 0.4, -0.6, 0.9, -0.2, 1.5, 0.1, -0.8, 0.5, -0.3, 1.9, 0.2,
            ],
        );
        for tensor in [
            TensorType::OneOne,
            TensorType::TwoZero,
            TensorType::ZeroTwo,
        ] {
            let src = PhaseSpaceMatrix::from_real(m.clone(), BasisTag::RealInterleaved);
            for target in [BasisTag::Complex, BasisTag::RealXpOrdered] {
                let there = convert_basis(&src, tensor, target).unwrap();
                let back = convert_basis(&there, tensor, BasisTag::RealInterleaved).unwrap();
                assert!(rel_diff_c(&back.entries, &src.entries) < 1e-12);
            }
        }
    }

    #[test]
    fn vector_conversion_gives_annihilation_amplitudes() {
        // coherent-like displacement √2(Re γ, Im γ) → (γ, γ*)
        let g = C64::new(0.7, -0.4);
        let d = Dmat::from_row_slice(2, 1, &[2f64.sqrt() * g.re, 2f64.sqrt() * g.im]);
        let src = PhaseSpaceMatrix::from_real(d, BasisTag::RealInterleaved);
        let c = convert_basis(&src, TensorType::OneZero, BasisTag::Complex).unwrap();
        assert!((c.entries[(0, 0)] - g).norm() < 1e-14);
        assert!((c.entries[(1, 0)] - g.conj()).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let m = PhaseSpaceMatrix::from_real(omega(2), BasisTag::RealInterleaved);
        let s = serde_json::to_string(&m).unwrap();
        let back: PhaseSpaceMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
