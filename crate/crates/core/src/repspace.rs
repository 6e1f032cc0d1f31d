//! Finite-dimensional representations as generator matrices, their graded
//! tensor products, composite root vectors and a relations validator.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::cartan::{
    AlgebraId, NormalOrdering, Q, RootSystem, Weight, build_root_system, decomposition_pair,
    validate_normal_ordering,
};
use crate::error::{Error, Result};
use crate::linalg::{CMat, c, diag, graded_kron, identity, max_abs, parities_tensor, rel_residual};

#[derive(Clone, Debug)]
pub struct Representation {
    pub rs: Arc<RootSystem>,
    pub q: f64,
    pub weights: Vec<Weight>,
    pub parities: Vec<u8>,
    pub e: Vec<CMat>,
    pub f: Vec<CMat>,
    pub label: String,
}

pub type RootMatrices = BTreeMap<Weight, (CMat, CMat)>;

/// Symmetric q-integer `(qⁿ − q⁻ⁿ)/(q − q⁻¹)`.
pub fn sym_qint(n: f64, q: f64) -> f64 {
    (q.powf(n) - q.powf(-n)) / (q - 1.0 / q)
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn algebra(&self) -> AlgebraId {
        self.rs.algebra
    }

    /// Diagonal of `q^{t_β}`: entry `q^{(λ|β)}` on a basis vector of weight λ.
    pub fn qt_root(&self, beta: &Weight) -> Vec<Complex64> {
        self.weights
            .iter()
            .map(|w| c(self.q.powf(self.rs.pair_f64(w, beta))))
            .collect()
    }

    pub fn qt(&self, i: usize) -> Vec<Complex64> {
        self.qt_root(&self.rs.simple_root(i))
    }

    /// Eigenvalues of `t_β`, i.e. `(λ|β)` per basis vector.
    pub fn t_root(&self, beta: &Weight) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| self.rs.pair_f64(w, beta))
            .collect()
    }
}

fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = c(1.0);
    m
}

pub fn spin_rep_sl2(j: f64, q: f64) -> Result<Representation> {
    let two_j = 2.0 * j;
    if !(two_j >= 0.0) || (two_j - two_j.round()).abs() > 1e-12 {
        return Err(Error::BadSpin(j));
    }
    let d = two_j.round() as usize + 1;
    let rs = Arc::new(build_root_system(AlgebraId::A1));
    let ms: Vec<Q> = (0..d)
        .map(|k| Q::new(k as i64 * 2 - (d as i64 - 1), 2))
        .collect();
    let mut e = CMat::zeros(d, d);
    for k in 0..d - 1 {
        let m = ms[k].to_f64().unwrap();
        e[(k + 1, k)] = c((sym_qint(j - m, q) * sym_qint(j + m + 1.0, q)).sqrt());
    }
    let f = e.transpose();
    Ok(Representation {
        rs,
        q,
        weights: ms.into_iter().map(|m| Weight(vec![m])).collect(),
        parities: vec![0; d],
        e: vec![e],
        f: vec![f],
        label: format!("spin:{j}"),
    })
}

pub fn vector_rep_sln(n: usize, q: f64) -> Result<Representation> {
    let id = match n {
        2 => AlgebraId::A1,
        3 => AlgebraId::A2,
        4 => AlgebraId::A3,
        _ => return Err(Error::UnsupportedRank(n)),
    };
    let rs = Arc::new(build_root_system(id));
    let r = n - 1;
    let mut eps = Weight((1..n).map(|i| Q::new((n - i) as i64, n as i64)).collect());
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        weights.push(eps.clone());
        if k < r {
            eps = &eps - &Weight::simple(r, k);
        }
    }
    Ok(Representation {
        rs,
        q,
        weights,
        parities: vec![0; n],
        e: (0..r).map(|i| unit(n, i, i + 1)).collect(),
        f: (0..r).map(|i| unit(n, i + 1, i)).collect(),
        label: "vector".into(),
    })
}

/// Three-dimensional osp(1|2) module on weights (α, 0, −α), parities (0, 1, 0).
pub fn osp12_rep(q: f64) -> Representation {
    let rs = Arc::new(build_root_system(AlgebraId::Osp12));
    let mut e = CMat::zeros(3, 3);
    let mut f = CMat::zeros(3, 3);
    e[(0, 1)] = c(1.0);
    e[(1, 2)] = c(1.0);
    f[(1, 0)] = c(1.0);
    f[(2, 1)] = c(-1.0);
    Representation {
        rs,
        q,
        weights: vec![
            Weight::from_ints(&[1]),
            Weight::from_ints(&[0]),
            Weight::from_ints(&[-1]),
        ],
        parities: vec![0, 1, 0],
        e: vec![e],
        f: vec![f],
        label: "osp3".into(),
    }
}

/// Five-dimensional B2 module on ε₁, ε₂, 0, −ε₂, −ε₁ (α₁ long, α₂ short).
pub fn b2_vector_rep(q: f64) -> Representation {
    let rs = Arc::new(build_root_system(AlgebraId::B2));
    let s = c((q + 1.0 / q).sqrt());
    let e1 = (unit(5, 0, 1) + unit(5, 3, 4)) * s;
    let f1 = (unit(5, 1, 0) + unit(5, 4, 3)) * s;
    let e2 = (unit(5, 1, 2) + unit(5, 2, 3)) * s;
    let f2 = (unit(5, 2, 1) + unit(5, 3, 2)) * s;
    Representation {
        rs,
        q,
        weights: [[1, 1], [0, 1], [0, 0], [0, -1], [-1, -1]]
            .iter()
            .map(|c| Weight::from_ints(c))
            .collect(),
        parities: vec![0; 5],
        e: vec![e1, e2],
        f: vec![f1, f2],
        label: "vector".into(),
    }
}

pub fn trivial_rep(id: AlgebraId, q: f64) -> Representation {
    let rs = Arc::new(build_root_system(id));
    let r = rs.rank;
    Representation {
        rs,
        q,
        weights: vec![Weight::zero(r)],
        parities: vec![0],
        e: vec![CMat::zeros(1, 1); r],
        f: vec![CMat::zeros(1, 1); r],
        label: "trivial".into(),
    }
}

/// Representation on `V₁⊗V₂` through `Δe = e⊗q^t + 1⊗e`, `Δf = f⊗1 + q^{−t}⊗f`.
pub fn tensor_rep(r1: &Representation, r2: &Representation) -> Result<Representation> {
    if r1.rs.algebra != r2.rs.algebra {
        return Err(Error::AlgebraMismatch(
            r1.rs.algebra.to_string(),
            r2.rs.algebra.to_string(),
        ));
    }
    if r1.q != r2.q {
        return Err(Error::AlgebraMismatch(
            format!("q={}", r1.q),
            format!("q={}", r2.q),
        ));
    }
    let (n1, n2) = (r1.dim(), r2.dim());
    let weights = r1
        .weights
        .iter()
        .flat_map(|a| r2.weights.iter().map(move |b| a + b))
        .collect();
    let parities = parities_tensor(&r1.parities, &r2.parities);
    let p1 = &r1.parities;
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..r1.rs.rank {
        let d = r1.rs.simple_parity(i);
        let qt2 = diag(&r2.qt(i));
        let qti1 = diag(&r1.qt(i).iter().map(|z| z.inv()).collect::<Vec<_>>());
        e.push(graded_kron(&r1.e[i], &qt2, 0, p1) + graded_kron(&identity(n1), &r2.e[i], d, p1));
        f.push(graded_kron(&r1.f[i], &identity(n2), 0, p1) + graded_kron(&qti1, &r2.f[i], d, p1));
    }
    Ok(Representation {
        rs: r1.rs.clone(),
        q: r1.q,
        weights,
        parities,
        e,
        f,
        label: format!("({})⊗({})", r1.label, r2.label),
    })
}

/// Graded commutator `ab − (−1)^{da·db} ba`.
pub fn supercommutator(a: &CMat, b: &CMat, da: u8, db: u8) -> CMat {
    if (da * db) % 2 == 1 {
        a * b + b * a
    } else {
        a * b - b * a
    }
}

/// Root vectors `e_α, f_α` for every positive root, built by
/// `e_{β+γ} = e_β e_γ − q^{−(β|γ)} e_γ e_β`, `f_{β+γ} = f_γ f_β − q^{(β|γ)} f_β f_γ`.
pub fn composite_root_matrices(rep: &Representation, ord: &NormalOrdering) -> Result<RootMatrices> {
    match validate_normal_ordering(ord, &rep.rs) {
        Ok(true) => {}
        Ok(false) => return Err(Error::InvalidOrdering("not a normal ordering".into())),
        Err(_) => {
            return Err(Error::InvalidOrdering(
                "not a permutation of the positive roots".into(),
            ));
        }
    }
    let mut out = RootMatrices::new();
    let mut roots = ord.sequence.clone();
    roots.sort_by_key(|r| r.height());
    for a in roots {
        let m = if a.height() == Q::from_integer(1) {
            let i = a.0.iter().position(|x| *x == Q::from_integer(1)).unwrap();
            (rep.e[i].clone(), rep.f[i].clone())
        } else {
            let (b, g) = decomposition_pair(&a, ord)?;
            let (eb, fb) = &out[&b];
            let (eg, fg) = &out[&g];
            let pbg = rep.rs.pair_f64(&b, &g);
            let qm = c(rep.q.powf(-pbg));
            let qp = c(rep.q.powf(pbg));
            (eb * eg - eg * eb * qm, fg * fb - fb * fg * qp)
        };
        out.insert(a, m);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RepReport {
    pub weight: f64,
    pub parity: f64,
    pub ef: f64,
    pub serre: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub failed: Vec<String>,
}

fn sym_qbinom(n: i64, k: i64, q: f64) -> f64 {
    let fact = |m: i64| (1..=m).map(|s| sym_qint(s as f64, q)).product::<f64>();
    fact(n) / (fact(k) * fact(n - k))
}

fn serre_residual(x: &[CMat], i: usize, j: usize, n: i64, qi: f64) -> f64 {
    let dim = x[i].nrows();
    let mut pows = vec![identity(dim)];
    for k in 1..=n as usize {
        let next = &pows[k - 1] * &x[i];
        pows.push(next);
    }
    let mut sum = CMat::zeros(dim, dim);
    let mut scale = 1f64;
    for k in 0..=n {
        let term = &pows[k as usize] * &x[j] * &pows[(n - k) as usize];
        scale = scale.max(max_abs(&term));
        let coef = if k % 2 == 0 { 1.0 } else { -1.0 } * sym_qbinom(n, k, qi);
        sum += term * c(coef);
    }
    max_abs(&sum) / scale
}

/// Residuals of the defining relations; `pass` iff all are at most `tol`.
pub fn validate_rep(rep: &Representation, tol: f64) -> RepReport {
    let rs = &rep.rs;
    let r = rs.rank;
    let n = rep.dim();
    let q = rep.q;
    let dims_ok = rep.e.len() == r
        && rep.f.len() == r
        && rep.parities.len() == n
        && rep
            .e
            .iter()
            .chain(&rep.f)
            .all(|m| m.nrows() == n && m.ncols() == n);
    if !dims_ok {
        return RepReport {
            weight: f64::INFINITY,
            parity: f64::INFINITY,
            ef: f64::INFINITY,
            serre: f64::INFINITY,
            tolerance: tol,
            pass: false,
            failed: vec!["structure".into()],
        };
    }

    let mut weight = 0f64;
    let mut parity = 0f64;
    for i in 0..r {
        let t = diag(
            &rep.t_root(&rs.simple_root(i))
                .into_iter()
                .map(c)
                .collect::<Vec<_>>(),
        );
        for j in 0..r {
            let a = rs.pair_f64(&rs.simple_root(i), &rs.simple_root(j));
            let ej = &rep.e[j];
            let fj = &rep.f[j];
            weight = weight.max(rel_residual(&(&t * ej - ej * &t), &(ej * c(a))));
            weight = weight.max(rel_residual(&(&t * fj - fj * &t), &(fj * c(-a))));
        }
        let d = rs.simple_parity(i);
        for m in [&rep.e[i], &rep.f[i]] {
            for a in 0..n {
                for b in 0..n {
                    if (rep.parities[a] + rep.parities[b] + d) % 2 == 1 {
                        parity = parity.max(m[(a, b)].norm());
                    }
                }
            }
        }
    }

    let mut ef = 0f64;
    for i in 0..r {
        for j in 0..r {
            let (di, dj) = (rs.simple_parity(i), rs.simple_parity(j));
            let lhs = supercommutator(&rep.e[i], &rep.f[j], di, dj);
            let rhs = if i == j {
                let qt = rep.qt(i);
                diag(
                    &qt.iter()
                        .map(|z| (z - z.inv()) / (q - 1.0 / q))
                        .collect::<Vec<_>>(),
                )
            } else {
                CMat::zeros(n, n)
            };
            ef = ef.max(rel_residual(&lhs, &rhs));
        }
    }

    let mut serre = 0f64;
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let nij = Q::from_integer(1) - Q::from_integer(2) * rs.sym[i][j] / rs.sym[i][i];
            let nij = nij.to_integer();
            let qi = q.powf(rs.sym[i][i].to_f64().unwrap() / 2.0);
            serre = serre.max(serre_residual(&rep.e, i, j, nij, qi));
            serre = serre.max(serre_residual(&rep.f, i, j, nij, qi));
        }
    }

    let mut failed = Vec::new();
    for (name, v) in [
        ("weight", weight),
        ("parity", parity),
        ("ef", ef),
        ("serre", serre),
    ] {
        if !(v <= tol) {
            failed.push(name.to_string());
        }
    }
    RepReport {
        weight,
        parity,
        ef,
        serre,
        tolerance: tol,
        pass: failed.is_empty(),
        failed,
    }
}

/// Probe module used to extract the root-vector normalizations.
pub fn probe_rep(id: AlgebraId, q: f64) -> Representation {
    match id {
        AlgebraId::A1 => vector_rep_sln(2, q).unwrap(),
        AlgebraId::A2 => vector_rep_sln(3, q).unwrap(),
        AlgebraId::A3 => vector_rep_sln(4, q).unwrap(),
        AlgebraId::B2 => b2_vector_rep(q),
        AlgebraId::Osp12 => osp12_rep(q),
    }
}
