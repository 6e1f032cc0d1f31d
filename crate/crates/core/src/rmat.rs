//! The static R-matrix `R = K R̂` and its identity checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::cartan::{NormalOrdering, RootSystem, Weight};
use crate::error::{Error, Result};
use crate::linalg::{CMat, c, emb12, emb13, emb23, graded_kron, identity, max_abs, rel_residual};
use crate::repspace::{
    Representation, RootMatrices, composite_root_matrices, probe_rep, supercommutator, tensor_rep,
};

/// `[n]_b = (1 − bⁿ)/(1 − b)`.
pub fn q_int(n: i64, base: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::NegativeN(n));
    }
    if base == 1.0 {
        return Ok(n as f64);
    }
    Ok((1.0 - base.powi(n as i32)) / (1.0 - base))
}

pub fn q_factorial(n: i64, base: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::NegativeN(n));
    }
    let mut acc = 1.0;
    for k in 1..=n {
        acc *= q_int(k, base)?;
    }
    Ok(acc)
}

/// `exp_b(z) = Σ zⁿ/[n]_b!` for nilpotent `z`.
pub fn q_exp(z: &CMat, base: f64) -> Result<CMat> {
    let d = z.nrows();
    let mut out = identity(d);
    let mut term = identity(d);
    let mut fact = 1.0;
    for n in 1..=d + 1 {
        term = &term * z;
        if max_abs(&term) <= 1e-300 {
            return Ok(out);
        }
        let qn = q_int(n as i64, base)?;
        if qn.abs() < 1e-14 {
            return Err(Error::DegenerateBase(base));
        }
        fact *= qn;
        out += &term * c(1.0 / fact);
    }
    Err(Error::NotNilpotent)
}

/// Which reading of `q̄_α` to use in the q-exponential base.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum QbarMode {
    /// `q̄_α = (−1)^{deg α} q^{−(α|α)}`.
    #[default]
    Standard,
    /// `q_α = q^{(α|α)/2}`, `q̄_α = (−1)^{deg α} q_α^{−(α|α)}`.
    HalfNorm,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaConstants {
    #[serde(serialize_with = "ser_alpha")]
    pub values: BTreeMap<Weight, f64>,
}

fn ser_alpha<S: serde::Serializer>(
    m: &BTreeMap<Weight, f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

/// `a_α` from `[e_α, f_α] = a_α (q^{t_α} − q^{−t_α})/(q − q⁻¹)` in the probe module.
pub fn a_alpha(rs: &RootSystem, ord: &NormalOrdering, q: f64) -> Result<AlphaConstants> {
    let probe = probe_rep(rs.algebra, q);
    let mats = composite_root_matrices(&probe, ord)?;
    let mut values = BTreeMap::new();
    for (root, (e, f)) in &mats {
        let d = rs.root_parity(root);
        let comm = supercommutator(e, f, d, d);
        let t = probe.qt_root(root);
        let den: Vec<f64> = t
            .iter()
            .map(|z| (z.re - 1.0 / z.re) / (q - 1.0 / q))
            .collect();
        let n = den.len();
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(0f64, |m, (i, j)| m.max(comm[(i, j)].norm()));
        let scale = 1f64.max(max_abs(&comm));
        if off > 1e-10 * scale {
            return Err(Error::InconsistentRatio(root.to_string()));
        }
        let mut ratio: Option<f64> = None;
        for k in 0..n {
            if den[k].abs() > 1e-8 {
                let r = comm[(k, k)].re / den[k];
                match ratio {
                    None => ratio = Some(r),
                    Some(r0) if (r - r0).abs() > 1e-10 * r0.abs().max(1.0) => {
                        return Err(Error::InconsistentRatio(root.to_string()));
                    }
                    _ => {}
                }
            } else if comm[(k, k)].norm() > 1e-10 * scale {
                return Err(Error::InconsistentRatio(root.to_string()));
            }
        }
        values.insert(
            root.clone(),
            ratio.ok_or_else(|| Error::AllDenominatorsSmall(root.to_string()))?,
        );
    }
    Ok(AlphaConstants { values })
}

/// Everything the R-matrix needs besides the two modules.
#[derive(Clone, Debug)]
pub struct RData {
    pub rs: Arc<RootSystem>,
    pub ord: NormalOrdering,
    pub q: f64,
    pub alpha: AlphaConstants,
    pub qbar: QbarMode,
}

impl RData {
    pub fn new(rs: Arc<RootSystem>, ord: NormalOrdering, q: f64) -> Result<Self> {
        Self::with_mode(rs, ord, q, QbarMode::Standard)
    }

    pub fn with_mode(
        rs: Arc<RootSystem>,
        ord: NormalOrdering,
        q: f64,
        qbar: QbarMode,
    ) -> Result<Self> {
        let alpha = a_alpha(&rs, &ord, q)?;
        Ok(RData {
            rs,
            ord,
            q,
            alpha,
            qbar,
        })
    }

    /// Default data for the algebra of `rep`, using shipped ordering `index`.
    pub fn for_rep(rep: &Representation, index: usize) -> Result<Self> {
        let ord = rep.rs.ordering(index)?.clone();
        Self::new(rep.rs.clone(), ord, rep.q)
    }

    pub fn qbar(&self, root: &Weight) -> f64 {
        let n = self.rs.pair_f64(root, root);
        let sign = if self.rs.root_parity(root) == 1 {
            -1.0
        } else {
            1.0
        };
        match self.qbar {
            QbarMode::Standard => sign * self.q.powf(-n),
            QbarMode::HalfNorm => sign * self.q.powf(-n * n / 2.0),
        }
    }

    fn factors(&self, r1: &Representation, r2: &Representation) -> Result<Vec<(CMat, f64)>> {
        check_pair(self, r1, r2)?;
        let m1: RootMatrices = composite_root_matrices(r1, &self.ord)?;
        let m2: RootMatrices = composite_root_matrices(r2, &self.ord)?;
        let q = self.q;
        let mut out = Vec::new();
        for root in &self.ord.sequence {
            if self.rs.is_doubled_odd(root) {
                continue;
            }
            let d = self.rs.root_parity(root);
            let sign = if d == 1 { -1.0 } else { 1.0 };
            let z = graded_kron(&m1[root].0, &m2[root].1, d, &r1.parities);
            let coef = sign * (q - 1.0 / q) / self.alpha.values[root];
            out.push((z * c(coef), self.qbar(root)));
        }
        Ok(out)
    }
}

fn check_pair(data: &RData, r1: &Representation, r2: &Representation) -> Result<()> {
    for r in [r1, r2] {
        if r.rs.algebra != data.rs.algebra {
            return Err(Error::AlgebraMismatch(
                data.rs.algebra.to_string(),
                r.rs.algebra.to_string(),
            ));
        }
        if r.q != data.q {
            return Err(Error::AlgebraMismatch(
                format!("q={}", data.q),
                format!("q={}", r.q),
            ));
        }
    }
    Ok(())
}

/// Diagonal `K` with entry `q^{(λ₁|λ₂)}`.
pub fn k_diag(r1: &Representation, r2: &Representation) -> Result<Vec<Complex64>> {
    if r1.rs.algebra != r2.rs.algebra {
        return Err(Error::AlgebraMismatch(
            r1.rs.algebra.to_string(),
            r2.rs.algebra.to_string(),
        ));
    }
    let q = r1.q;
    Ok(r1
        .weights
        .iter()
        .flat_map(|a| {
            r2.weights
                .iter()
                .map(move |b| c(q.powf(r1.rs.pair_f64(a, b))))
        })
        .collect())
}

pub fn k_matrix(r1: &Representation, r2: &Representation) -> Result<CMat> {
    Ok(crate::linalg::diag(&k_diag(r1, r2)?))
}

/// `R̂`: product over the reversed normal order of q-exponentials.
pub fn rhat(r1: &Representation, r2: &Representation, data: &RData) -> Result<CMat> {
    let mut out = identity(r1.dim() * r2.dim());
    for (z, base) in data.factors(r1, r2)?.iter().rev() {
        out *= q_exp(z, *base)?;
    }
    Ok(out)
}

/// `R̂⁻¹` from the inverse law `exp_b(z)⁻¹ = exp_{1/b}(−z)`, factors in normal order.
pub fn rhat_inverse(r1: &Representation, r2: &Representation, data: &RData) -> Result<CMat> {
    let mut out = identity(r1.dim() * r2.dim());
    for (z, base) in data.factors(r1, r2)?.iter() {
        out *= q_exp(&(-z), 1.0 / base)?;
    }
    Ok(out)
}

pub fn full_r(r1: &Representation, r2: &Representation, data: &RData) -> Result<CMat> {
    Ok(k_matrix(r1, r2)? * rhat(r1, r2, data)?)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StaticReport {
    pub ybe_residual: f64,
    pub quasitri_left: f64,
    pub quasitri_right: f64,
    pub ordering_independence: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn static_checks(
    r1: &Representation,
    r2: &Representation,
    r3: &Representation,
    data: &RData,
    data2: &RData,
    tol: f64,
) -> Result<StaticReport> {
    let (p1, p2, p3) = (&r1.parities, &r2.parities, &r3.parities);
    let (n1, n3) = (r1.dim(), r3.dim());
    let r12 = emb12(&full_r(r1, r2, data)?, n3);
    let r13 = emb13(&full_r(r1, r3, data)?, p1, p2, p3);
    let r23 = emb23(&full_r(r2, r3, data)?, n1);

    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    let ybe_residual = rel_residual(&lhs, &rhs);

    let left = full_r(&tensor_rep(r1, r2)?, r3, data)?;
    let quasitri_left = rel_residual(&left, &(&r13 * &r23));
    let right = full_r(r1, &tensor_rep(r2, r3)?, data)?;
    let quasitri_right = rel_residual(&right, &(&r13 * &r12));

    let ordering_independence = rel_residual(&full_r(r1, r2, data)?, &full_r(r1, r2, data2)?);

    let pass = [
        ybe_residual,
        quasitri_left,
        quasitri_right,
        ordering_independence,
    ]
    .iter()
    .all(|&v| v <= tol);
    Ok(StaticReport {
        ybe_residual,
        quasitri_left,
        quasitri_right,
        ordering_independence,
        tolerance: tol,
        pass,
    })
}
