//! Dense complex matrices on (graded) tensor spaces.
//!
//! Basis of `V₁⊗V₂` is row-major: index `i·dim₂ + j` for `v_i⊗w_j`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(d: &[Complex64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |i, j| {
        if i == j {
            d[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Matrix of `a⊗b` under the Koszul rule `(a⊗b)(v⊗w) = (−1)^{deg b·deg v} av⊗bw`.
pub fn graded_kron(a: &CMat, b: &CMat, deg_b: u8, p1: &[u8]) -> CMat {
    let mut m = kron(a, b);
    if deg_b % 2 == 1 {
        let n2 = b.ncols();
        for (v, &pv) in p1.iter().enumerate() {
            if pv % 2 == 1 {
                for w in 0..n2 {
                    m.column_mut(v * n2 + w).neg_mut();
                }
            }
        }
    }
    m
}

/// Graded flip `V₁⊗V₂ → V₂⊗V₁`, `v⊗w ↦ (−1)^{deg v·deg w} w⊗v`.
pub fn flip(p1: &[u8], p2: &[u8]) -> CMat {
    let (n1, n2) = (p1.len(), p2.len());
    let mut m = CMat::zeros(n1 * n2, n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            let s = if (p1[i] * p2[j]) % 2 == 1 { -1.0 } else { 1.0 };
            m[(j * n1 + i, i * n2 + j)] = c(s);
        }
    }
    m
}

/// `X₂₁ = P X P` for `X` acting on `V₂⊗V₁`, returned on `V₁⊗V₂`.
pub fn flip_conj(x: &CMat, p1: &[u8], p2: &[u8]) -> CMat {
    flip(p2, p1) * x * flip(p1, p2)
}

pub fn emb12(a: &CMat, n3: usize) -> CMat {
    kron(a, &identity(n3))
}

pub fn emb23(a: &CMat, n1: usize) -> CMat {
    kron(&identity(n1), a)
}

/// Operator on `V₁⊗V₃` placed in slots 1 and 3 of `V₁⊗V₂⊗V₃`.
pub fn emb13(a: &CMat, p1: &[u8], p2: &[u8], p3: &[u8]) -> CMat {
    let n1 = p1.len();
    let to = kron(&identity(n1), &flip(p2, p3));
    let back = kron(&identity(n1), &flip(p3, p2));
    back * kron(a, &identity(p2.len())) * to
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Max-abs residual normalized by `max(1, ‖lhs‖, ‖rhs‖)`.
pub fn rel_residual(lhs: &CMat, rhs: &CMat) -> f64 {
    let scale = 1f64.max(max_abs(lhs)).max(max_abs(rhs));
    max_abs(&(lhs - rhs)) / scale
}

pub fn inverse(m: &CMat, what: &'static str) -> Result<CMat> {
    m.clone().try_inverse().ok_or(Error::Singular(what))
}

pub fn parities_tensor(p1: &[u8], p2: &[u8]) -> Vec<u8> {
    p1.iter()
        .flat_map(|a| p2.iter().map(move |b| (a + b) % 2))
        .collect()
}
