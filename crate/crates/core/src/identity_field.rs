//! Identity vector fields: from determinant minors of `F_{i₀ij}`, from the
//! closed-form case table, and through a constant metric.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_named, Params};
use crate::error::{Error, Result};
use crate::geometry::{cdot, VectorConfig, C64};
use crate::linalg::{det, frob, guarded_inverse, singular_values, symmetric_normalizer, CMatrix};
use crate::prepotential::{DerivativeTensor, POLE_HIT};

/// Relative rank threshold for `P`.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityField {
    /// Signed maximal minors `A^k` of `P`.
    pub a: Vec<C64>,
    pub h: C64,
    /// `max_i |h_i − h| / |h|` over the diagonal choices `h_i = Σ_k A^k F_{kii}`.
    pub h_spread: f64,
    pub e: Vec<C64>,
    pub pivot: usize,
    pub p_rank: usize,
    pub p_singular_values: Vec<f64>,
}

/// The `(N−1)×N` matrix with rows `(F_{i₀ i 1}, …, F_{i₀ i N})`, `i ≠ i₀`.
pub fn p_matrix(t: &DerivativeTensor, i0: usize) -> Result<CMatrix> {
    let n = t.dim();
    if i0 >= n {
        return Err(Error::IndexOutOfRange { index: i0, len: n });
    }
    let rows: Vec<usize> = (0..n).filter(|&i| i != i0).collect();
    Ok(CMatrix::from_fn(n - 1, n, |r, j| t.get(i0, rows[r], j)))
}

fn without_column(p: &CMatrix, k: usize) -> CMatrix {
    p.clone().remove_column(k)
}

/// `A^k = (−1)^{k+1} det P_k` (1-based `k`), `P_k` being `P` without column `k`.
pub fn minor_coefficients(t: &DerivativeTensor, i0: usize) -> Result<Vec<C64>> {
    let p = p_matrix(t, i0)?;
    Ok((0..t.dim())
        .map(|k| {
            let d = det(&without_column(&p, k));
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect())
}

/// `B_{ij} = Σ_k A^k F_{kij}`.
pub fn b_matrix(t: &DerivativeTensor, a: &[C64]) -> Result<CMatrix> {
    let n = t.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.len() });
    }
    let mut b = CMatrix::zeros(n, n);
    for (k, ak) in a.iter().enumerate() {
        b += t.matrix(k) * *ak;
    }
    Ok(b)
}

fn tensor_norm(t: &DerivativeTensor) -> f64 {
    t.matrices().iter().map(|m| frob(m).powi(2)).sum::<f64>().sqrt()
}

/// Identity field `e = h⁻¹ A` from the minors of `P`.
pub fn minor_identity_field(t: &DerivativeTensor, i0: usize) -> Result<IdentityField> {
    let n = t.dim();
    let p = p_matrix(t, i0)?;
    let sv = singular_values(&p);
    let p_rank = match sv.first() {
        Some(&smax) if smax > 0.0 => sv.iter().filter(|&&s| s > RANK_TOL * smax).count(),
        _ => 0,
    };
    if p_rank < n - 1 {
        return Err(Error::RankDeficient { rank: p_rank, required: n - 1 });
    }
    let a = minor_coefficients(t, i0)?;
    let hs: Vec<C64> = (0..n).map(|i| (0..n).map(|k| a[k] * t.get(k, i, i)).sum()).collect();
    let h = hs.iter().sum::<C64>() / n as f64;
    let an = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if h.norm() < 1e-12 * an * tensor_norm(t) || h.norm() == 0.0 {
        return Err(Error::ZeroH { value: h.norm() });
    }
    let h_spread = hs.iter().map(|x| (x - h).norm()).fold(0.0, f64::max) / h.norm();
    let e = a.iter().map(|x| x / h).collect();
    Ok(IdentityField { a, h, h_spread, e, pivot: i0, p_rank, p_singular_values: sv })
}

/// `max_{ij} |e^k F_{kij} − g_{ij}|` with `g = I` when `g_lower` is `None`.
pub fn verify_identity_field(t: &DerivativeTensor, e: &[C64], g_lower: Option<&CMatrix>) -> Result<f64> {
    let n = t.dim();
    let b = b_matrix(t, e)?;
    let g = g_lower.cloned().unwrap_or_else(|| CMatrix::identity(n, n));
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.nrows() });
    }
    Ok((b - g).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BDefects {
    /// `max_{i≠j} |B_ij|`
    pub off_diagonal: f64,
    /// `max_i |B_ii − B_11|`
    pub diagonal_spread: f64,
}

pub fn b_defects(b: &CMatrix) -> BDefects {
    let n = b.nrows();
    let mut off: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(b[(i, j)].norm());
            }
        }
        spread = spread.max((b[(i, i)] - b[(0, 0)]).norm());
    }
    BDefects { off_diagonal: off, diagonal_spread: spread }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetQ {
    pub r: usize,
    pub t: usize,
    /// `|det Q|` divided by the product of the row norms of `Q`.
    pub value: f64,
}

/// For each `r < t` with `r, t ≠ i₀`, the matrix `Q` obtained from `P` by
/// inserting the row `(F_{1rt}, …, F_{Nrt})` at position `i₀`.
pub fn det_q_values(t: &DerivativeTensor, i0: usize) -> Result<Vec<DetQ>> {
    let n = t.dim();
    let p = p_matrix(t, i0)?;
    let mut out = Vec::new();
    for r in (0..n).filter(|&r| r != i0) {
        for s in (r + 1..n).filter(|&s| s != i0) {
            let q = p.clone().insert_row(i0, C64::new(0.0, 0.0));
            let mut q = q;
            for k in 0..n {
                q[(i0, k)] = t.get(k, r, s);
            }
            let norms: f64 = (0..n).map(|i| q.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).product();
            let d = det(&q).norm();
            out.push(DetQ { r, t: s, value: if norms > 0.0 { d / norms } else { 0.0 } });
        }
    }
    Ok(out)
}

/// The six cases of the closed-form identity field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// F4 and its projections, `r = −2q`.
    F4RMinus2Q,
    /// F4 and its projections, `r = −4q`.
    F4RMinus4Q,
    /// G2, `p = −3q`.
    G2PMinus3Q,
    /// G2, `p = −9q`.
    G2PMinus9Q,
    /// `BC_n(q,r,s;m)`, `n ≥ 2`, `r = −8s − 2q(Σm − 2)`.
    BCn,
    /// `BC_1` with `c_{e₁} = r`, `c_{2e₁} = s`.
    BC1,
}

impl CaseTag {
    pub const ALL: [CaseTag; 6] =
        [CaseTag::F4RMinus2Q, CaseTag::F4RMinus4Q, CaseTag::G2PMinus3Q, CaseTag::G2PMinus9Q, CaseTag::BCn, CaseTag::BC1];

    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).expect("listed") + 1
    }

    pub fn from_number(k: usize) -> Option<Self> {
        k.checked_sub(1).and_then(|i| Self::ALL.get(i).copied())
    }

    /// Whether the catalog entry `name` belongs to this case.
    pub fn accepts(self, name: &str) -> bool {
        match self {
            CaseTag::F4RMinus2Q | CaseTag::F4RMinus4Q => {
                matches!(name, "F4+" | "F4_A1_1" | "F4_A1_2" | "F4_A2_1" | "F4_A1sq")
            }
            CaseTag::G2PMinus3Q | CaseTag::G2PMinus9Q => name == "G2+",
            CaseTag::BCn => name == "BCn",
            CaseTag::BC1 => name == "BC1",
        }
    }

    /// Parameters with the case relation imposed (the free parameter is
    /// overwritten).
    pub fn impose(self, params: &Params) -> Result<Params> {
        let p = params.clone();
        Ok(match self {
            CaseTag::F4RMinus2Q => {
                let q = p.get("q")?;
                p.with("r", -2.0 * q)
            }
            CaseTag::F4RMinus4Q => {
                let q = p.get("q")?;
                p.with("r", -4.0 * q)
            }
            CaseTag::G2PMinus3Q => {
                let q = p.get("q")?;
                p.with("p", -3.0 * q)
            }
            CaseTag::G2PMinus9Q => {
                let q = p.get("q")?;
                p.with("p", -9.0 * q)
            }
            CaseTag::BCn => {
                let r = bcn_relation(&p)?;
                p.with("r", r)
            }
            CaseTag::BC1 => p,
        })
    }
}

fn bcn_relation(p: &Params) -> Result<f64> {
    let entry = crate::catalog::entry("BCn")?;
    (entry.relations[0].eval)(p)
}

/// Case data: configuration `(A, c)`, reduced multiplicities `c̄` aligned
/// with it, and the constants `c₀`, `H₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormCase {
    pub tag: CaseTag,
    pub config: VectorConfig,
    pub reduced: Vec<C64>,
    pub c0: C64,
    pub h0: C64,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

impl ClosedFormCase {
    /// Build the case for a catalog entry, checking that the entry belongs
    /// to the case and that the parameters satisfy its relation.
    pub fn new(tag: CaseTag, name: &str, params: &Params) -> Result<Self> {
        let holds = match tag {
            CaseTag::F4RMinus2Q | CaseTag::F4RMinus4Q | CaseTag::G2PMinus3Q | CaseTag::G2PMinus9Q | CaseTag::BCn => {
                let imposed = tag.impose(params)?;
                let key = if matches!(tag, CaseTag::G2PMinus3Q | CaseTag::G2PMinus9Q) { "p" } else { "r" };
                close(params.get(key)?, imposed.get(key)?)
            }
            CaseTag::BC1 => true,
        };
        if !holds {
            return Err(Error::BadCaseParameters(format!("parameters {params} violate the relation of case {}", tag.number())));
        }
        Self::unchecked(tag, name, params)
    }

    /// Like [`ClosedFormCase::new`] without the relation check; used to
    /// evaluate the formulas off their locus.
    pub fn unchecked(tag: CaseTag, name: &str, params: &Params) -> Result<Self> {
        if !tag.accepts(name) {
            return Err(Error::BadCaseParameters(format!("case {} does not cover {name}", tag.number())));
        }
        let config = build_named(name, params)?;
        let zeroed = |keys: &[&str]| -> Result<Vec<C64>> {
            let mut p = params.clone();
            for k in keys {
                p.set(k, 0.0);
            }
            Ok(build_named(name, &p)?.multiplicities().to_vec())
        };
        let c = |x: f64| C64::new(x, 0.0);
        let nonzero = |k: &str, v: f64| -> Result<f64> {
            if v == 0.0 {
                Err(Error::BadCaseParameters(format!("case {} needs {k} != 0", tag.number())))
            } else {
                Ok(v)
            }
        };
        let (reduced, c0, h0) = match tag {
            CaseTag::F4RMinus2Q => {
                let q = nonzero("q", params.get("q")?)?;
                (config.multiplicities().to_vec(), c(-1.0 / (4.0 * q)), c(0.0))
            }
            CaseTag::F4RMinus4Q => {
                let q = nonzero("q", params.get("q")?)?;
                (zeroed(&["q"])?, c(1.0 / (4.0 * q)), c(36.0 * q))
            }
            CaseTag::G2PMinus3Q => {
                let q = nonzero("q", params.get("q")?)?;
                (config.multiplicities().to_vec(), c(-1.0 / (9.0 * q)), c(0.0))
            }
            CaseTag::G2PMinus9Q => {
                let q = nonzero("q", params.get("q")?)?;
                (zeroed(&["q"])?, c(1.0 / (9.0 * q)), c(27.0 * q))
            }
            CaseTag::BCn => {
                let q = nonzero("q", params.get("q")?)?;
                if config.dim() < 2 {
                    return Err(Error::BadCaseParameters("case 5 needs n >= 2".into()));
                }
                let (r, s) = (params.get("r")?, params.get("s")?);
                (zeroed(&["q", "s"])?, c(-1.0 / (4.0 * q)), c(r * (2.0 * s - q) / q))
            }
            CaseTag::BC1 => {
                let (r, s) = (params.get("r")?, params.get("s")?);
                let d = nonzero("r + 8s", r + 8.0 * s)?;
                (zeroed(&["s"])?, c(-1.0 / (2.0 * d)), c(-r * (r + 4.0 * s) / d))
            }
        };
        Self::from_parts(tag, config, reduced, c0, h0)
    }

    pub fn from_parts(tag: CaseTag, config: VectorConfig, reduced: Vec<C64>, c0: C64, h0: C64) -> Result<Self> {
        if reduced.len() != config.len() {
            return Err(Error::DimensionMismatch { expected: config.len(), found: reduced.len() });
        }
        if c0 == C64::new(0.0, 0.0) {
            return Err(Error::BadCaseParameters("c0 must be nonzero".into()));
        }
        Ok(Self { tag, config, reduced, c0, h0 })
    }

    /// `H(x) = H₀ + Σ c̄_α sin²(α,x)`.
    pub fn h(&self, x: &[C64]) -> C64 {
        self.h0 + (0..self.config.len()).map(|k| self.reduced[k] * cdot(self.config.numeric(k), x).sin().powi(2)).sum::<C64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub e: Vec<C64>,
    pub h: C64,
}

/// `e(x) = c₀ H(x)⁻¹ Σ c̄_α sin(2(α,x)) α`.
pub fn closed_form_identity(case: &ClosedFormCase, x: &[C64]) -> Result<ClosedForm> {
    let cfg = &case.config;
    if x.len() != cfg.dim() {
        return Err(Error::DimensionMismatch { expected: cfg.dim(), found: x.len() });
    }
    let h = case.h(x);
    if h.norm() < 1e-10 {
        return Err(Error::HVanishes { value: h.norm() });
    }
    let mut e = vec![C64::new(0.0, 0.0); cfg.dim()];
    for k in 0..cfg.len() {
        let a = cfg.numeric(k);
        let w = case.reduced[k] * (cdot(a, x) * 2.0).sin();
        for (ei, ai) in e.iter_mut().zip(a) {
            *ei += w * ai;
        }
    }
    let scale = case.c0 / h;
    Ok(ClosedForm { e: e.into_iter().map(|z| z * scale).collect(), h })
}

/// `|L − R| / (Σ|terms of L| + |R|)` for
/// `L = Σ_{α,β} c̄_α c_β (α,β)(β,u)(β,v) sin(2(α,x)) cot((β,x))`,
/// `R = c₀⁻¹ H(x) (u,v)`.
pub fn master_identity_residual(case: &ClosedFormCase, x: &[C64], u: &[C64], v: &[C64]) -> Result<f64> {
    let cfg = &case.config;
    let n = cfg.dim();
    for w in [x, u, v] {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: w.len() });
        }
    }
    let mut cots = Vec::with_capacity(cfg.len());
    for k in 0..cfg.len() {
        let z = cdot(cfg.numeric(k), x);
        if z.sin().norm() < POLE_HIT {
            return Err(Error::PoleHit { value: z.sin().norm() });
        }
        cots.push(z.cos() / z.sin());
    }
    let mut lhs = C64::new(0.0, 0.0);
    let mut mag = 0.0;
    for a in 0..cfg.len() {
        let alpha = cfg.numeric(a);
        let sa = case.reduced[a] * (cdot(alpha, x) * 2.0).sin();
        if sa == C64::new(0.0, 0.0) {
            continue;
        }
        for b in 0..cfg.len() {
            let beta = cfg.numeric(b);
            let term = sa * cfg.mult(b) * cdot(alpha, beta) * cdot(beta, u) * cdot(beta, v) * cots[b];
            lhs += term;
            mag += term.norm();
        }
    }
    let rhs = case.h(x) / case.c0 * cdot(u, v);
    let denom = mag + rhs.norm();
    Ok(if denom == 0.0 { 0.0 } else { (lhs - rhs).norm() / denom })
}

/// Explicit F4 components `B^k` and `h`, with `e = h⁻¹ B`. Only the two F4
/// cases are accepted.
pub fn f4_explicit_components(x: &[C64], variant: CaseTag, q: f64) -> Result<(Vec<C64>, C64)> {
    if x.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: x.len() });
    }
    let one = C64::new(1.0, 0.0);
    let prod_except = |k: usize| (0..4).filter(|&i| i != k).map(|i| x[i].cos()).product::<C64>();
    let (b, h) = match variant {
        CaseTag::F4RMinus2Q => {
            let b: Vec<C64> = (0..4)
                .map(|k| {
                    let s: C64 = (0..4).filter(|&i| i != k).map(|i| (x[i] * 2.0).cos()).sum();
                    x[k].sin() * (x[k].cos() * (s - one) - prod_except(k) * 2.0)
                })
                .collect();
            let cfg = build_named("F4+", &Params::new().with("r", -2.0 * q).with("q", q))?;
            let sum: C64 = (0..cfg.len()).map(|k| cfg.mult(k) * (cdot(cfg.numeric(k), x) * 2.0).cos()).sum();
            (b, C64::new(6.0 * q, 0.0) + sum * 0.5)
        }
        CaseTag::F4RMinus4Q => {
            let b: Vec<C64> = (0..4).map(|k| x[k].sin() * (x[k].cos() + prod_except(k) * 2.0)).collect();
            let s: C64 = x.iter().map(|xi| (xi * 2.0).cos()).sum();
            let p: C64 = x.iter().map(|xi| xi.cos()).product();
            (b, -(C64::new(6.0, 0.0) + s + p * 8.0) * q)
        }
        other => {
            return Err(Error::BadCaseParameters(format!("explicit components exist only for F4, not case {}", other.number())))
        }
    };
    if h.norm() < 1e-10 {
        return Err(Error::HVanishes { value: h.norm() });
    }
    Ok((b, h))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    pub c_hat: CMatrix,
    /// `‖Ĉ G Ĉᵀ − I‖`
    pub residual: f64,
}

/// `Ĉ` with `Ĉ g Ĉᵀ = I` for a symmetric invertible upper metric `g`.
pub fn metric_normalizer(g_upper: &CMatrix) -> Result<Normalizer> {
    let c_hat = symmetric_normalizer(g_upper)?;
    let n = g_upper.nrows();
    let residual = frob(&(&c_hat * g_upper * c_hat.transpose() - CMatrix::identity(n, n)));
    Ok(Normalizer { c_hat, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricIdentity {
    /// Components in the original coordinates.
    pub e: Vec<C64>,
    /// The minors field in the normalized coordinates.
    pub normalized: IdentityField,
    pub c_hat: CMatrix,
    /// `max |e^k F_{klm} − g_{lm}|` with `g_{lm}` the inverse of `g_upper`.
    pub residual: f64,
}

/// Identity field for a constant metric: pass to coordinates `x = Ĉ t` in
/// which the metric is the identity, take the minors field there, and pull
/// it back. `c_hat` overrides the computed normalizer; the rank condition on
/// `P` depends on that choice.
pub fn identity_for_metric(
    t: &DerivativeTensor,
    g_upper: &CMatrix,
    c_hat: Option<&CMatrix>,
    i0: usize,
) -> Result<MetricIdentity> {
    let n = t.dim();
    if g_upper.nrows() != n || g_upper.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g_upper.nrows() });
    }
    let c_hat = match c_hat {
        Some(m) => {
            let res = frob(&(m * g_upper * m.transpose() - CMatrix::identity(n, n)));
            if res > 1e-10 * (1.0 + frob(g_upper)) {
                return Err(Error::FactorizationFailure(format!("supplied normalizer misses by {res:e}")));
            }
            m.clone()
        }
        None => metric_normalizer(g_upper)?.c_hat,
    };
    let c = guarded_inverse(&c_hat, 1e-12)?;
    let tt = t.transformed(&c);
    let normalized = minor_identity_field(&tt, i0)?;
    let e: Vec<C64> = (&c * DVector::from_column_slice(&normalized.e)).iter().copied().collect();
    let g_lower = guarded_inverse(g_upper, 1e-12)?;
    let residual = verify_identity_field(t, &e, Some(&g_lower))?;
    Ok(MetricIdentity { e, normalized, c_hat, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn two_by_two(a: f64, b: f64, cc: f64, d: f64) -> DerivativeTensor {
        DerivativeTensor::from_fn(2, vec![c(0.0); 2], |i, j, k| match i + j + k {
            0 => c(a),
            1 => c(b),
            2 => c(cc),
            _ => c(d),
        })
    }

    #[test]
    fn two_dimensional_minors() {
        let (a, b, cc) = (2.0, 1.0, 3.0);
        // ac + bd = b² + c² makes the pair commute
        let d = (b * b + cc * cc - a * cc) / b;
        let t = two_by_two(a, b, cc, d);
        assert_eq!(minor_coefficients(&t, 0).unwrap(), vec![c(cc), c(-b)]);
        let f = minor_identity_field(&t, 0).unwrap();
        assert!((f.h - c(a * cc - b * b)).norm() < 1e-14);
        let bm = b_matrix(&t, &f.a).unwrap();
        let defects = b_defects(&bm);
        assert!(defects.off_diagonal < 1e-13 && defects.diagonal_spread < 1e-13);
        assert!(verify_identity_field(&t, &f.e, None).unwrap() < 1e-14);
    }

    #[test]
    fn b_matrix_of_basis_vector_is_that_slice() {
        let t = two_by_two(1.0, 2.0, 3.0, 4.0);
        assert_eq!(b_matrix(&t, &[c(0.0), c(1.0)]).unwrap(), t.matrix(1).clone());
        assert_eq!(b_matrix(&t, &[c(0.0), c(0.0)]).unwrap(), CMatrix::zeros(2, 2));
    }

    #[test]
    fn one_dimensional_field() {
        let t = DerivativeTensor::from_fn(1, vec![c(0.0)], |_, _, _| c(4.0));
        let f = minor_identity_field(&t, 0).unwrap();
        assert_eq!(f.a, vec![c(1.0)]);
        assert_eq!(f.e, vec![c(0.25)]);
    }

    #[test]
    fn rank_deficient_and_zero_h() {
        let t = two_by_two(1.0, 0.0, 0.0, 1.0);
        assert_eq!(minor_identity_field(&t, 0), Err(Error::RankDeficient { rank: 0, required: 1 }));
        // P = (b, c) nonzero, h = ac - b² = 0
        let t = two_by_two(1.0, 1.0, 1.0, 1.0);
        assert!(matches!(minor_identity_field(&t, 0), Err(Error::ZeroH { .. })));
        assert!(matches!(minor_identity_field(&t, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn normalizer_examples() {
        let g = CMatrix::from_row_slice(2, 2, &[c(4.0), c(0.0), c(0.0), c(1.0)]);
        let nz = metric_normalizer(&g).unwrap();
        assert!(frob(&(nz.c_hat - CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(1.0)]))) < 1e-14);
        let id = metric_normalizer(&CMatrix::identity(3, 3)).unwrap();
        assert!(id.residual < 1e-14);
    }

    #[test]
    fn case_numbering() {
        for (i, tag) in CaseTag::ALL.iter().enumerate() {
            assert_eq!(tag.number(), i + 1);
            assert_eq!(CaseTag::from_number(i + 1), Some(*tag));
        }
        assert_eq!(CaseTag::from_number(7), None);
    }

    #[test]
    fn relation_is_enforced() {
        let off = Params::new().with("r", 1.0).with("q", 1.0);
        assert!(matches!(ClosedFormCase::new(CaseTag::F4RMinus2Q, "F4+", &off), Err(Error::BadCaseParameters(_))));
        assert!(ClosedFormCase::unchecked(CaseTag::F4RMinus2Q, "F4+", &off).is_ok());
        let on = Params::new().with("r", -2.0).with("q", 1.0);
        assert!(matches!(ClosedFormCase::new(CaseTag::F4RMinus2Q, "G2+", &on), Err(Error::BadCaseParameters(_))));
    }

    #[test]
    fn bc1_reduced_multiplicities() {
        let case = ClosedFormCase::new(CaseTag::BC1, "BC1", &Params::new().with("r", 3.0).with("s", 2.0)).unwrap();
        assert_eq!(case.reduced, vec![c(3.0), c(0.0)]);
        assert!((case.c0 - c(-1.0 / 38.0)).norm() < 1e-16);
        assert!((case.h0 - c(-3.0 * 11.0 / 19.0)).norm() < 1e-14);
    }

    #[test]
    fn explicit_components_vanish_with_sine() {
        let x = [c(0.0), C64::new(0.3, 0.1), c(0.7), C64::new(-0.2, 0.4)];
        for v in [CaseTag::F4RMinus2Q, CaseTag::F4RMinus4Q] {
            let (b, _) = f4_explicit_components(&x, v, 1.0).unwrap();
            assert_eq!(b[0], c(0.0));
        }
        assert!(f4_explicit_components(&x, CaseTag::BC1, 1.0).is_err());
    }
}
