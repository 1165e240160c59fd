//! Subsystems `B = A ∩ W`, the orthonormal frame of `W_B = B^⊥`, and the
//! projected configuration on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_rank, null_space, ExactScalar};
use crate::geometry::{
    cdot, cnorm, collinear_classes, exact_dot, merge_positive, Mode, Vector, VectorConfig, C64,
};
use crate::identity_field::{closed_form_identity, ClosedFormCase};
use crate::linalg::{det, frob, rank, symmetric_normalizer, CMatrix};
use crate::prepotential::{commutativity_residual, sample_points, third_derivative_tensor, Kernel};
use crate::report::{CheckReport, CheckResult, Hypothesis};

fn exact_rows(cfg: &VectorConfig, idx: &[usize]) -> Option<Vec<Vec<ExactScalar>>> {
    idx.iter().map(|&i| cfg.vector(i).as_exact().map(<[ExactScalar]>::to_vec)).collect()
}

fn spans(rows: &[Vector], candidate: &Vector) -> bool {
    let exact: Option<Vec<Vec<ExactScalar>>> =
        rows.iter().chain(std::iter::once(candidate)).map(|v| v.as_exact().map(<[ExactScalar]>::to_vec)).collect();
    match exact {
        Some(mut all) => {
            let with = exact_rank(&all);
            all.pop();
            with == exact_rank(&all)
        }
        None => {
            let n = candidate.dim();
            let m = CMatrix::from_fn(rows.len() + 1, n, |i, j| {
                if i < rows.len() {
                    rows[i].to_complex()[j]
                } else {
                    candidate.to_complex()[j]
                }
            });
            let base = CMatrix::from_fn(rows.len(), n, |i, j| rows[i].to_complex()[j]);
            rank(&m, 1e-10) == rank(&base, 1e-10)
        }
    }
}

/// Indices of the configuration vectors lying in the span of `generators`.
pub fn subsystem(cfg: &VectorConfig, generators: &[Vector]) -> Result<Vec<usize>> {
    for g in generators {
        if g.dim() != cfg.dim() {
            return Err(Error::DimensionMismatch { expected: cfg.dim(), found: g.dim() });
        }
    }
    if generators.is_empty() {
        return Ok(vec![]);
    }
    Ok((0..cfg.len()).filter(|&i| spans(generators, cfg.vector(i))).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionFrame {
    /// All configuration vectors in the span of the requested subsystem.
    pub subsystem: Vec<usize>,
    /// Orthonormal basis `f₁ … f_n` of `W_B`, in ambient coordinates.
    pub basis: Vec<Vector>,
    /// Exact when the basis could be normalized inside the field.
    pub mode: Mode,
    /// Vectors `((α,f₁), …, (α,f_n))` for `α ∉ B`, sign-normalized with
    /// equal vectors merged.
    pub projected: VectorConfig,
    /// For each projected vector, the ambient indices merged into it.
    pub sources: Vec<Vec<usize>>,
}

impl RestrictionFrame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `N × n` matrix whose columns are the `f_i`.
    pub fn basis_matrix(&self) -> CMatrix {
        let n = self.basis.first().map_or(0, Vector::dim);
        CMatrix::from_fn(n, self.basis.len(), |i, j| self.basis[j].to_complex()[i])
    }

    /// `x = Σ ξ_i f_i`.
    pub fn embed(&self, xi: &[C64]) -> Vec<C64> {
        let f = self.basis_matrix();
        (0..f.nrows()).map(|r| (0..f.ncols()).map(|c| f[(r, c)] * xi[c]).sum()).collect()
    }

    /// `ξ_i = (x, f_i)`.
    pub fn coordinates(&self, x: &[C64]) -> Vec<C64> {
        self.basis.iter().map(|f| cdot(&f.to_complex(), x)).collect()
    }

    /// Push ambient per-vector data (such as reduced multiplicities) onto the
    /// projected vectors by summing over merge sources.
    pub fn map_multiplicities(&self, ambient: &[C64]) -> Vec<C64> {
        self.sources.iter().map(|src| src.iter().map(|&i| ambient[i]).sum()).collect()
    }
}

// Gram-Schmidt over the exact field; `None` as soon as a norm leaves it.
fn exact_orthonormal(w: &[Vec<ExactScalar>]) -> Result<Option<Vec<Vec<ExactScalar>>>> {
    let mut us: Vec<Vec<ExactScalar>> = Vec::new();
    let mut norms: Vec<ExactScalar> = Vec::new();
    for wi in w {
        let mut u = wi.clone();
        for (uj, nj) in us.iter().zip(&norms) {
            let k = &exact_dot(wi, uj) / nj;
            for (x, y) in u.iter_mut().zip(uj) {
                *x -= &(&k * y);
            }
        }
        let nn = exact_dot(&u, &u);
        if nn.is_zero() {
            return Ok(None);
        }
        us.push(u);
        norms.push(nn);
    }
    let mut out = Vec::new();
    for (u, nn) in us.iter().zip(&norms) {
        let Some(root) = nn.sqrt() else { return Ok(None) };
        let inv = root.inv().ok_or(Error::DivisionByZero)?;
        out.push(u.iter().map(|x| x * &inv).collect());
    }
    Ok(Some(out))
}

// Null space of the rows by Gaussian elimination with partial pivoting.
fn numeric_null_space(rows: &[Vec<C64>], n: usize) -> Vec<Vec<C64>> {
    let mut m: Vec<Vec<C64>> = rows.to_vec();
    let scale = m.iter().map(|r| cnorm(r)).fold(0.0, f64::max).max(1.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m.len() {
            break;
        }
        let (p, best) = (r..m.len()).map(|i| (i, m[i][col].norm())).fold((r, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if best <= 1e-12 * scale {
            continue;
        }
        m.swap(r, p);
        let piv = m[r][col];
        for x in m[r].iter_mut() {
            *x /= piv;
        }
        for i in 0..m.len() {
            if i != r {
                let f = m[i][col];
                if f != C64::new(0.0, 0.0) {
                    for j in 0..n {
                        let t = f * m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[free] = C64::new(1.0, 0.0);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free];
            }
            v
        })
        .collect()
}

fn numeric_orthonormal(w: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    let k = w.len();
    let gram = CMatrix::from_fn(k, k, |i, j| cdot(&w[i], &w[j]));
    let scale = w.iter().map(|v| cnorm(v).powi(2)).product::<f64>();
    if det(&gram).norm() <= 1e-12 * scale {
        return Err(Error::IsotropicComplement);
    }
    let s = symmetric_normalizer(&gram).map_err(|_| Error::IsotropicComplement)?;
    let n = w.first().map_or(0, Vec::len);
    Ok((0..k).map(|r| (0..n).map(|x| (0..k).map(|t| s[(r, t)] * w[t][x]).sum()).collect()).collect())
}

/// Restrict along the subsystem `b` (closed up to `A ∩ span(b)`).
pub fn restrict(cfg: &VectorConfig, b: &[usize]) -> Result<RestrictionFrame> {
    for &i in b {
        cfg.check_index(i)?;
    }
    let n = cfg.dim();
    let generators: Vec<Vector> = b.iter().map(|&i| cfg.vector(i).clone()).collect();
    let sub = subsystem(cfg, &generators)?;
    let (basis, mode) = match exact_rows(cfg, b) {
        Some(rows) => {
            let w = if rows.is_empty() { (0..n).map(|i| Vector::basis(n, i).as_exact().unwrap().to_vec()).collect() } else { null_space(&rows, n) };
            match exact_orthonormal(&w)? {
                Some(f) => (f.into_iter().map(Vector::Exact).collect::<Vec<_>>(), Mode::Exact),
                None => {
                    let wn: Vec<Vec<C64>> = w.iter().map(|v| v.iter().map(|x| C64::new(x.to_f64(), 0.0)).collect()).collect();
                    (numeric_orthonormal(&wn)?.into_iter().map(Vector::Numeric).collect(), Mode::Numeric)
                }
            }
        }
        None => {
            let rows: Vec<Vec<C64>> = b.iter().map(|&i| cfg.numeric(i).to_vec()).collect();
            let w = numeric_null_space(&rows, n);
            (numeric_orthonormal(&w)?.into_iter().map(Vector::Numeric).collect(), Mode::Numeric)
        }
    };
    let rest: Vec<usize> = (0..cfg.len()).filter(|i| !sub.contains(i)).collect();
    let projected: Vec<Vector> = rest
        .iter()
        .map(|&i| match (cfg.vector(i).as_exact(), mode) {
            (Some(a), Mode::Exact) => Vector::Exact(basis.iter().map(|f| exact_dot(a, f.as_exact().unwrap())).collect()),
            _ => Vector::Numeric(basis.iter().map(|f| cdot(cfg.numeric(i), &f.to_complex())).collect()),
        })
        .collect();
    let mults: Vec<C64> = rest.iter().map(|&i| cfg.mult(i)).collect();
    let (vectors, merged, local) = merge_positive(&projected, &mults);
    let sources = local.into_iter().map(|src| src.into_iter().map(|k| rest[k]).collect()).collect();
    let projected = if basis.is_empty() { VectorConfig::empty(0) } else { VectorConfig::new_lenient(basis.len(), vectors, merged)? };
    Ok(RestrictionFrame { subsystem: sub, basis, mode, projected, sources })
}

// A maximal linearly independent subset of `b`, greedily in order.
fn independent_subset(cfg: &VectorConfig, b: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for &i in b {
        let rows: Vec<Vector> = chosen.iter().map(|&k| cfg.vector(k).clone()).collect();
        if rows.is_empty() || !spans(&rows, cfg.vector(i)) {
            chosen.push(i);
        }
    }
    chosen
}

/// Smallest `|C_δ|` over sub-collections `δ ⊆ δ_α` for `α` in a basis of
/// the subsystem; `None` for an empty subsystem.
pub fn subsystem_min_c(cfg: &VectorConfig, b: &[usize]) -> Option<f64> {
    let classes = collinear_classes(cfg);
    independent_subset(cfg, b)
        .into_iter()
        .filter_map(|i| classes.iter().find(|cl| cl.members.contains(&i)))
        .map(|cl| cl.min_subset_c(cfg))
        .reduce(f64::min)
}

/// Commutativity of the restricted prepotential at seeded points of `W_B`.
pub fn restricted_commutativity(
    cfg: &VectorConfig,
    b: &[usize],
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let frame = restrict(cfg, b)?;
    let proj = &frame.projected;
    let samples = sample_points(proj, &Kernel::Trig, points, seed)?;
    let mut worst: f64 = 0.0;
    for s in &samples {
        worst = worst.max(commutativity_residual(&third_derivative_tensor(proj, &Kernel::Trig, &s.point)?));
    }
    let mut report = CheckReport::new(format!("restriction along {:?}", frame.subsystem), proj.digest());
    report.push(CheckResult::new("restricted_commute", worst, tol));
    if let Some(c) = subsystem_min_c(cfg, b) {
        report.hypotheses.push(Hypothesis::new("min_subsystem_C", c, c > 1e-12));
    }
    report.points = samples;
    report.finish();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangency {
    pub tangent: bool,
    /// Largest `‖e − Σ (e,f_i) f_i‖ / ‖e‖` over the points.
    pub max_normal: f64,
}

/// Tangency of an arbitrary field to `W_B` at the embedded points `ξ`.
pub fn field_tangency(
    field: impl Fn(&[C64]) -> Result<Vec<C64>>,
    frame: &RestrictionFrame,
    points: &[Vec<C64>],
) -> Result<Tangency> {
    let mut worst: f64 = 0.0;
    for xi in points {
        let x = frame.embed(xi);
        let e = field(&x)?;
        let along = frame.embed(&frame.coordinates(&e));
        let normal: Vec<C64> = e.iter().zip(&along).map(|(a, b)| a - b).collect();
        let en = cnorm(&e);
        if en > 0.0 {
            worst = worst.max(cnorm(&normal) / en);
        }
    }
    Ok(Tangency { tangent: worst < 1e-9, max_normal: worst })
}

/// Tangency of the closed-form identity field of `case` to `W_B`.
pub fn tangency_check(case: &ClosedFormCase, frame: &RestrictionFrame, points: &[Vec<C64>]) -> Result<Tangency> {
    field_tangency(|x| closed_form_identity(case, x).map(|f| f.e), frame, points)
}

/// The closed-form case carried over to the projected configuration.
pub fn restricted_case(case: &ClosedFormCase, frame: &RestrictionFrame) -> Result<ClosedFormCase> {
    ClosedFormCase::from_parts(case.tag, frame.projected.clone(), frame.map_multiplicities(&case.reduced), case.c0, case.h0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatch {
    /// `a[i]` corresponds to `b[permutation[i]]`, up to the sign `signs[i]`.
    pub permutation: Vec<usize>,
    pub signs: Vec<i8>,
    /// `λ` with `λ (α_i, α_j) = (β_π(i), β_π(j))`.
    pub scale: f64,
}

/// Whether two configurations agree up to an orthogonal map (and, with
/// `allow_scale`, a global rescaling of the vectors): a bijection with
/// matching multiplicities and matching Gram matrices, vectors taken up to
/// sign.
pub fn gram_equivalent(a: &VectorConfig, b: &VectorConfig, allow_scale: bool, tol: f64) -> Option<GramMatch> {
    if a.len() != b.len() {
        return None;
    }
    let m = a.len();
    let ga = CMatrix::from_fn(m, m, |i, j| cdot(a.numeric(i), a.numeric(j)));
    let gb = CMatrix::from_fn(m, m, |i, j| cdot(b.numeric(i), b.numeric(j)));
    let scale = if allow_scale {
        let (ta, tb) = (ga.trace(), gb.trace());
        if ta.norm() == 0.0 {
            return None;
        }
        (tb / ta).re
    } else {
        1.0
    };
    let gnorm = frob(&gb).max(1.0);
    let near = |x: C64, y: C64, s: f64| (x - y).norm() <= tol * s;
    let cscale = b.multiplicities().iter().map(|c| c.norm()).fold(1.0, f64::max);
    let mut perm = vec![usize::MAX; m];
    let mut signs = vec![1i8; m];
    let mut used = vec![false; m];

    #[allow(clippy::too_many_arguments)]
    fn extend(
        i: usize,
        ctx: &(&CMatrix, &CMatrix, f64, &VectorConfig, &VectorConfig),
        near: &dyn Fn(C64, C64, f64) -> bool,
        gnorm: f64,
        cscale: f64,
        perm: &mut Vec<usize>,
        signs: &mut Vec<i8>,
        used: &mut Vec<bool>,
    ) -> bool {
        let (ga, gb, scale, a, b) = *ctx;
        if i == perm.len() {
            return true;
        }
        for k in 0..perm.len() {
            if used[k] || !near(a.mult(i), b.mult(k), cscale) || !near(ga[(i, i)] * scale, gb[(k, k)], gnorm) {
                continue;
            }
            for s in [1i8, -1] {
                let ok = (0..i).all(|j| near(ga[(i, j)] * scale * f64::from(s * signs[j]), gb[(k, perm[j])], gnorm));
                if ok {
                    perm[i] = k;
                    signs[i] = s;
                    used[k] = true;
                    if extend(i + 1, ctx, near, gnorm, cscale, perm, signs, used) {
                        return true;
                    }
                    used[k] = false;
                }
            }
        }
        false
    }

    let ctx = (&ga, &gb, scale, a, b);
    extend(0, &ctx, &near, gnorm, cscale, &mut perm, &mut signs, &mut used).then_some(GramMatch { permutation: perm, signs, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_named, Params};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn f4(r: f64, q: f64) -> VectorConfig {
        build_named("F4+", &Params::new().with("r", r).with("q", q)).unwrap()
    }

    #[test]
    fn subsystem_examples() {
        let cfg = f4(1.0, 1.0);
        let b = subsystem(&cfg, &[Vector::from_ints(&[0, 0, 1, -1])]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(cfg.vector(b[0]), &Vector::from_ints(&[0, 0, 1, -1]));
        let all: Vec<Vector> = (0..4).map(|i| Vector::basis(4, i)).collect();
        assert_eq!(subsystem(&cfg, &all).unwrap().len(), 24);
        let b2 = build_named("F4_A1sq", &Params::new().with("r", 1.0).with("q", 1.0)).unwrap();
        assert!(subsystem(&b2, &[Vector::from_ints(&[1, 2])]).unwrap().is_empty());
    }

    #[test]
    fn empty_restriction_is_identity() {
        let cfg = f4(1.0, 2.0);
        let frame = restrict(&cfg, &[]).unwrap();
        assert_eq!(frame.mode, Mode::Exact);
        assert_eq!(frame.projected.len(), 24);
        assert!(gram_equivalent(&frame.projected, &cfg, false, 1e-12).is_some());
    }

    #[test]
    fn frame_is_orthonormal_and_orthogonal_to_b() {
        let cfg = f4(1.0, 1.0);
        let b = subsystem(&cfg, &[Vector::from_ints(&[0, 1, -1, 0]), Vector::from_ints(&[0, 0, 1, -1])]).unwrap();
        let frame = restrict(&cfg, &b).unwrap();
        assert_eq!(frame.mode, Mode::Exact);
        assert_eq!(frame.dim(), 2);
        for (i, f) in frame.basis.iter().enumerate() {
            for (j, g) in frame.basis.iter().enumerate() {
                let d = exact_dot(f.as_exact().unwrap(), g.as_exact().unwrap());
                assert_eq!(d, if i == j { ExactScalar::one() } else { ExactScalar::zero() });
            }
            for &k in &b {
                assert!(exact_dot(f.as_exact().unwrap(), cfg.vector(k).as_exact().unwrap()).is_zero());
            }
        }
    }

    #[test]
    fn isotropic_complement_is_rejected() {
        // W_B for B = {(1, i, 0)} contains the isotropic (1, i, 0)
        let v = Vector::Numeric(vec![c(1.0), C64::new(0.0, 1.0), c(0.0)]);
        let cfg = VectorConfig::new(3, vec![v, Vector::from_real(&[0.0, 0.0, 1.0])], vec![c(1.0); 2]).unwrap();
        assert_eq!(restrict(&cfg, &[0]), Err(Error::IsotropicComplement));
    }

    #[test]
    fn constant_field_is_not_tangent() {
        let cfg = f4(1.0, 1.0);
        let b = subsystem(&cfg, &[Vector::basis(4, 0)]).unwrap();
        let frame = restrict(&cfg, &b).unwrap();
        let pts = vec![vec![c(0.1), c(0.2), c(0.3)]];
        let t = field_tangency(|_| Ok(vec![c(1.0), c(0.0), c(0.0), c(0.0)]), &frame, &pts).unwrap();
        assert!(!t.tangent);
        let t = field_tangency(|_| Ok(vec![c(0.0), c(1.0), c(0.0), c(0.0)]), &frame, &pts).unwrap();
        assert!(t.tangent);
    }

    #[test]
    fn gram_match_handles_signs_and_scale() {
        let a = VectorConfig::new(2, vec![Vector::from_ints(&[1, 0]), Vector::from_ints(&[1, 1])], vec![c(1.0), c(2.0)]).unwrap();
        let b = VectorConfig::new(2, vec![Vector::from_ints(&[0, 2]), Vector::from_ints(&[-2, 0])], vec![c(2.0), c(1.0)]).unwrap();
        assert!(gram_equivalent(&a, &b, false, 1e-12).is_none());
        // b is not a rotation of a: the angle between the vectors differs
        assert!(gram_equivalent(&a, &b, true, 1e-12).is_none());
        let rotated = VectorConfig::new(2, vec![Vector::from_ints(&[0, 2]), Vector::from_ints(&[-2, 2])], vec![c(1.0), c(2.0)]).unwrap();
        let m = gram_equivalent(&a, &rotated, true, 1e-12).unwrap();
        assert!((m.scale - 4.0).abs() < 1e-12);
    }
}
