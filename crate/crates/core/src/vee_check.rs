//! ∨-condition checkers.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_rank, ExactScalar};
use crate::geometry::{
    cdot, cnorm, collinear_classes, exact_dot, gram_operator, positive_normalize, Mode, Vector, VectorConfig, C64,
};
use crate::linalg::{column_span_basis, frob, rank, symmetric_normalizer, CMatrix};
use crate::strings::alpha_strings;

/// One row of a residual table: the vector `alpha` together with the members
/// it was tested against (an α-string, or the members of a 2-plane).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VeeEntry {
    pub alpha: usize,
    pub members: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VeeReport {
    pub max_residual: f64,
    pub entries: Vec<VeeEntry>,
    pub tolerance: f64,
    pub pass: bool,
    /// Smallest `|C_δ|` over collinear classes and their sub-collections.
    pub min_class_c: Option<f64>,
}

impl VeeReport {
    fn assemble(entries: Vec<VeeEntry>, tolerance: f64, min_class_c: Option<f64>) -> Self {
        let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
        Self { max_residual, pass: max_residual < tolerance, entries, tolerance, min_class_c }
    }
}

fn min_class_c(cfg: &VectorConfig) -> Option<f64> {
    collinear_classes(cfg).iter().map(|cl| cl.min_subset_c(cfg)).reduce(f64::min)
}

fn numeric_wedge(a: &[C64], b: &[C64]) -> CMatrix {
    let n = a.len();
    CMatrix::from_fn(n, n, |i, j| a[i] * b[j] - a[j] * b[i])
}

// Σ_β c_β (α,β) α∧β over `members`, summing exactly inside each group of equal
// multiplicities when the configuration is exact.
fn string_sum(cfg: &VectorConfig, alpha: usize, members: &[usize]) -> CMatrix {
    let n = cfg.dim();
    let mut total = CMatrix::zeros(n, n);
    if let Some(a) = cfg.vector(alpha).as_exact() {
        let mut groups: Vec<(C64, Vec<ExactScalar>)> = Vec::new();
        for &b in members {
            let beta = cfg.vector(b).as_exact().expect("exact configuration");
            let ab = exact_dot(a, beta);
            let pos = match groups.iter().position(|(c, _)| *c == cfg.mult(b)) {
                Some(p) => p,
                None => {
                    groups.push((cfg.mult(b), vec![ExactScalar::zero(); n * n]));
                    groups.len() - 1
                }
            };
            let acc = &mut groups[pos].1;
            for i in 0..n {
                for j in 0..n {
                    let w = &(&a[i] * &beta[j]) - &(&a[j] * &beta[i]);
                    acc[i * n + j] += &(&ab * &w);
                }
            }
        }
        for (c, acc) in groups {
            for i in 0..n {
                for j in 0..n {
                    let x = &acc[i * n + j];
                    if !x.is_zero() {
                        total[(i, j)] += c * x.to_f64();
                    }
                }
            }
        }
    } else {
        let a = cfg.numeric(alpha);
        for &b in members {
            let beta = cfg.numeric(b);
            total += numeric_wedge(a, beta) * (cfg.mult(b) * cdot(a, beta));
        }
    }
    total
}

/// Euclidean trigonometric ∨-condition: for every α and every α-string,
/// `‖Σ c_β (α,β) α∧β‖ / (1 + Σ |c_β| ‖α‖²‖β‖²)`.
pub fn euclidean_vee_residual(cfg: &VectorConfig, tol: f64) -> VeeReport {
    let mut entries = Vec::new();
    for alpha in 0..cfg.len() {
        let an = cnorm(cfg.numeric(alpha));
        for s in alpha_strings(cfg, alpha).expect("index in range") {
            let sum = string_sum(cfg, alpha, &s.members);
            let scale = 1.0 + s.members.iter().map(|&b| cfg.mult(b).norm() * an * an * cnorm(cfg.numeric(b)).powi(2)).sum::<f64>();
            entries.push(VeeEntry { alpha, members: s.members, residual: frob(&sum) / scale });
        }
    }
    VeeReport::assemble(entries, tol, min_class_c(cfg))
}

/// Trigonometric ∨-condition: the Euclidean check with `(α,β)` replaced by
/// `G_{A,c}(α,β)`.
pub fn trig_vee_residual(cfg: &VectorConfig, tol: f64) -> VeeReport {
    let m = gram_operator(cfg);
    let mn = frob(&m);
    let mut entries = Vec::new();
    for alpha in 0..cfg.len() {
        let a = cfg.numeric(alpha);
        let ma: Vec<C64> = (0..cfg.dim()).map(|i| (0..cfg.dim()).map(|j| m[(i, j)] * a[j]).sum()).collect();
        let an = cnorm(a);
        for s in alpha_strings(cfg, alpha).expect("index in range") {
            let mut sum = CMatrix::zeros(cfg.dim(), cfg.dim());
            let mut scale = 1.0;
            for &b in &s.members {
                let beta = cfg.numeric(b);
                sum += numeric_wedge(a, beta) * (cfg.mult(b) * cdot(&ma, beta));
                scale += cfg.mult(b).norm() * mn * an * an * cnorm(beta).powi(2);
            }
            entries.push(VeeEntry { alpha, members: s.members, residual: frob(&sum) / scale });
        }
    }
    VeeReport::assemble(entries, tol, min_class_c(cfg))
}

/// The tensor `T_{abij} = Σ_{α,β∈A₊} c_α c_β (α,β) (α∧β)_{ab} (α∧β)_{ij}`,
/// flattened with index `((a·N + b)·N + i)·N + j`.
pub fn condition2_tensor(cfg: &VectorConfig) -> Vec<C64> {
    let pos = positive_normalize(cfg);
    let n = pos.dim();
    let mut t = vec![C64::new(0.0, 0.0); n.pow(4)];
    for p in 0..pos.len() {
        for q in p + 1..pos.len() {
            let (a, b) = (pos.numeric(p), pos.numeric(q));
            // the (p,q) and (q,p) terms are equal
            let k = pos.mult(p) * pos.mult(q) * cdot(a, b) * 2.0;
            if k == C64::new(0.0, 0.0) {
                continue;
            }
            let w = numeric_wedge(a, b);
            for x in 0..n * n {
                let wx = w[(x / n, x % n)];
                if wx == C64::new(0.0, 0.0) {
                    continue;
                }
                for y in 0..n * n {
                    t[x * n * n + y] += k * wx * w[(y / n, y % n)];
                }
            }
        }
    }
    t
}

/// Largest absolute entry of [`condition2_tensor`].
pub fn condition2_residual(cfg: &VectorConfig) -> f64 {
    condition2_tensor(cfg).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub eigenvalue: C64,
    pub members: Vec<usize>,
    /// Orthonormal basis of `V_i` as columns.
    pub basis: CMatrix,
    /// `‖VᵀMV − λ VᵀV‖ / ‖M‖`: zero when `A_i` is well distributed in `V_i`.
    pub distribution_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub components: Vec<Component>,
    /// Eigen-residual `‖Mα − λ_α α‖ / (‖M‖ ‖α‖)` per vector.
    pub eigen_residuals: Vec<f64>,
    /// Largest `|(u,v)|` between basis vectors of different components.
    pub orthogonality_defect: f64,
}

// Σ |c_α| ‖α‖², the size of M before cancellation.
fn term_scale(cfg: &VectorConfig) -> f64 {
    (0..cfg.len()).map(|k| cfg.mult(k).norm() * cnorm(cfg.numeric(k)).powi(2)).sum()
}

fn vectors_span(cfg: &VectorConfig) -> usize {
    match cfg.mode() {
        Mode::Exact => {
            let rows: Vec<Vec<ExactScalar>> = cfg.vectors().iter().map(|v| v.as_exact().expect("exact").to_vec()).collect();
            exact_rank(&rows)
        }
        Mode::Numeric => {
            let m = CMatrix::from_fn(cfg.len(), cfg.dim(), |i, j| cfg.numeric(i)[j]);
            rank(&m, 1e-10)
        }
    }
}

// Whether every group of equal multiplicities maps α onto a multiple of α.
fn exact_eigenvector(cfg: &VectorConfig, alpha: usize) -> bool {
    let Some(a) = cfg.vector(alpha).as_exact() else { return false };
    let n = cfg.dim();
    let mut groups: Vec<(C64, Vec<ExactScalar>)> = Vec::new();
    for b in 0..cfg.len() {
        let beta = cfg.vector(b).as_exact().expect("exact");
        let k = exact_dot(beta, a);
        let pos = match groups.iter().position(|(c, _)| *c == cfg.mult(b)) {
            Some(p) => p,
            None => {
                groups.push((cfg.mult(b), vec![ExactScalar::zero(); n]));
                groups.len() - 1
            }
        };
        for (acc, x) in groups[pos].1.iter_mut().zip(beta) {
            *acc += &(&k * x);
        }
    }
    groups.iter().all(|(_, v)| v.iter().all(ExactScalar::is_zero) || crate::geometry::exact_ratio(v, a).is_some())
}

/// Split `V` along the eigenvalues of `M = Σ c_α α⊗α`. With `diagnostic`
/// set, vectors that are not eigenvectors are kept (and visible through
/// `eigen_residuals`) instead of raising `NotEigenvector`.
pub fn m_decomposition(cfg: &VectorConfig, tau_cluster: f64, diagnostic: bool) -> Result<Decomposition> {
    let n = cfg.dim();
    let r = vectors_span(cfg);
    if r < n {
        return Err(Error::SpanDeficient { rank: r, dim: n });
    }
    let m = gram_operator(cfg);
    let mn = frob(&m);
    // M that vanishes up to rounding is treated as exactly zero
    let scale = if mn > 1e-12 * term_scale(cfg) { mn } else { 1.0 };
    let mut lambdas = Vec::with_capacity(cfg.len());
    let mut residuals = Vec::with_capacity(cfg.len());
    for k in 0..cfg.len() {
        let a = cfg.numeric(k);
        let ma: Vec<C64> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] * a[j]).sum::<C64>() / scale).collect();
        let an2 = cnorm(a).powi(2);
        let lam = a.iter().zip(&ma).map(|(x, y)| x.conj() * y).sum::<C64>() / an2;
        let res = if cfg.mode() == Mode::Exact && exact_eigenvector(cfg, k) {
            0.0
        } else {
            ma.iter().zip(a).map(|(y, x)| (y - lam * x).norm_sqr()).sum::<f64>().sqrt() / an2.sqrt()
        };
        if res > tau_cluster && !diagnostic {
            return Err(Error::NotEigenvector { index: k, residual: res });
        }
        lambdas.push(lam);
        residuals.push(res);
    }
    // single-linkage clustering of the normalized eigenvalues
    let mut label: Vec<usize> = (0..cfg.len()).collect();
    for i in 0..cfg.len() {
        for j in 0..i {
            if (lambdas[i] - lambdas[j]).norm() < tau_cluster && label[i] != label[j] {
                let (from, to) = (label[i].max(label[j]), label[i].min(label[j]));
                label.iter_mut().filter(|l| **l == from).for_each(|l| *l = to);
            }
        }
    }
    let mut roots: Vec<usize> = label.clone();
    roots.sort_unstable();
    roots.dedup();
    let mut components = Vec::new();
    for root in roots {
        let members: Vec<usize> = (0..cfg.len()).filter(|&k| label[k] == root).collect();
        let eigenvalue = members.iter().map(|&k| lambdas[k]).sum::<C64>() / members.len() as f64 * scale;
        let span = CMatrix::from_fn(n, members.len(), |i, j| cfg.numeric(members[j])[i]);
        let basis = column_span_basis(&span, 1e-10);
        let gm = basis.transpose() * &m * &basis;
        let gv = basis.transpose() * &basis;
        let distribution_defect = frob(&(gm - gv * eigenvalue)) / scale;
        components.push(Component { eigenvalue, members, basis, distribution_defect });
    }
    let mut orthogonality_defect: f64 = 0.0;
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let cross = components[i].basis.transpose() * &components[j].basis;
            orthogonality_defect = orthogonality_defect.max(cross.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    Ok(Decomposition { components, eigen_residuals: residuals, orthogonality_defect })
}

fn in_plane(cfg: &VectorConfig, i: usize, j: usize, k: usize) -> bool {
    let m = CMatrix::from_fn(3, cfg.dim(), |r, c| cfg.numeric([i, j, k][r])[c]);
    let sv = crate::linalg::singular_values(&m);
    let numeric = sv.get(2).map_or(true, |&s| s <= 1e-8 * sv[0]);
    match cfg.mode() {
        // exact confirmation only for the candidates that survive the
        // numeric filter
        Mode::Exact if numeric => {
            let rows: Vec<Vec<ExactScalar>> =
                [i, j, k].iter().map(|&x| cfg.vector(x).as_exact().expect("exact").to_vec()).collect();
            exact_rank(&rows) == 2
        }
        Mode::Exact => false,
        Mode::Numeric => rank(&m, 1e-10) == 2,
    }
}

/// Rational complex Euclidean ∨-test: every 2-plane spanned by a pair of
/// vectors carries a subsystem that is reducible or well distributed.
/// Entries report the proportionality defect `‖G − (tr G / 2) I‖ / ‖G‖` of
/// the form `Σ c (α,x)(α,y)` on the plane; reducible planes report zero.
pub fn rational_complex_vee_check(cfg: &VectorConfig, tol: f64) -> VeeReport {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut entries = Vec::new();
    for i in 0..cfg.len() {
        for j in i + 1..cfg.len() {
            if cfg.collinear(i, j) {
                continue;
            }
            let members: Vec<usize> =
                (0..cfg.len()).filter(|&k| k == i || k == j || in_plane(cfg, i, j, k)).collect();
            if seen.contains(&members) {
                continue;
            }
            seen.push(members.clone());
            let residual = plane_defect(cfg, i, j, &members);
            entries.push(VeeEntry { alpha: i, members, residual });
        }
    }
    VeeReport::assemble(entries, tol, min_class_c(cfg))
}

fn plane_defect(cfg: &VectorConfig, i: usize, j: usize, members: &[usize]) -> f64 {
    let (a, b) = (cfg.numeric(i), cfg.numeric(j));
    let gram = CMatrix::from_row_slice(2, 2, &[cdot(a, a), cdot(a, b), cdot(b, a), cdot(b, b)]);
    let Ok(s) = symmetric_normalizer(&gram) else {
        // isotropic plane: the form restricted to it is degenerate
        return f64::INFINITY;
    };
    // f_r = Σ_t s_{rt} p_t is an orthonormal basis of the plane
    let f: Vec<Vec<C64>> =
        (0..2).map(|r| (0..cfg.dim()).map(|x| s[(r, 0)] * a[x] + s[(r, 1)] * b[x]).collect()).collect();
    let coords: Vec<Vector> =
        members.iter().map(|&k| Vector::Numeric(f.iter().map(|fr| cdot(cfg.numeric(k), fr)).collect())).collect();
    let mults: Vec<C64> = members.iter().map(|&k| cfg.mult(k)).collect();
    let Ok(sub) = VectorConfig::new(2, coords, mults) else { return f64::INFINITY };
    if let Ok(d) = m_decomposition(&sub, 1e-8, true) {
        if d.components.len() >= 2 && d.eigen_residuals.iter().all(|&r| r < 1e-8) {
            return 0.0;
        }
    }
    let g = gram_operator(&sub);
    let gn = frob(&g);
    if gn <= 1e-12 * term_scale(&sub) {
        return 0.0;
    }
    let tr = (g[(0, 0)] + g[(1, 1)]) / 2.0;
    frob(&(g - DMatrix::identity(2, 2) * tr)) / gn
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn cfg(dim: usize, vs: &[&[i64]], ms: &[f64]) -> VectorConfig {
        VectorConfig::new(dim, vs.iter().map(|v| Vector::from_ints(v)).collect(), ms.iter().map(|&m| c(m)).collect()).unwrap()
    }

    fn b2(r: f64, q: f64) -> VectorConfig {
        cfg(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]], &[r, r, q, q])
    }

    #[test]
    fn b2_is_a_euclidean_vee_system() {
        let rep = euclidean_vee_residual(&b2(1.3, -0.4), 1e-12);
        assert_eq!(rep.max_residual, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn failing_pair_has_positive_residual() {
        let bad = cfg(2, &[&[1, 0], &[1, 1]], &[1.0, 1.0]);
        // α = e1, β = e1+e2: (α,β) = 1, ‖α∧β‖ = √2, scale = 1 + 2
        let rep = euclidean_vee_residual(&bad, 1e-8);
        assert!((rep.max_residual - 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert!(!rep.pass);
        assert!(!trig_vee_residual(&bad, 1e-8).pass);
        assert!(!rational_complex_vee_check(&bad, 1e-8).pass);
    }

    #[test]
    fn single_vector_is_vacuous() {
        let one = cfg(2, &[&[1, 2]], &[3.0]);
        assert_eq!(euclidean_vee_residual(&one, 1e-8).max_residual, 0.0);
        assert_eq!(trig_vee_residual(&one, 1e-8).max_residual, 0.0);
        assert_eq!(condition2_residual(&one), 0.0);
        assert_eq!(condition2_residual(&VectorConfig::empty(3)), 0.0);
    }

    #[test]
    fn condition2_tensor_symmetries() {
        let cfg = b2(0.7, -1.9);
        let t = condition2_tensor(&cfg);
        let n = 2;
        let at = |a: usize, b: usize, i: usize, j: usize| t[((a * n + b) * n + i) * n + j];
        for a in 0..n {
            for b in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        assert!((at(a, b, i, j) + at(b, a, i, j)).norm() < 1e-12);
                        assert!((at(a, b, i, j) + at(a, b, j, i)).norm() < 1e-12);
                        assert!((at(a, b, i, j) - at(i, j, a, b)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn decomposition_of_diagonal_config() {
        let d = m_decomposition(&cfg(2, &[&[1, 0], &[0, 1]], &[1.0, 2.0]), 1e-8, false).unwrap();
        assert_eq!(d.components.len(), 2);
        assert!((d.components[0].eigenvalue - c(1.0)).norm() < 1e-14);
        assert!((d.components[1].eigenvalue - c(2.0)).norm() < 1e-14);
        assert_eq!(d.components[0].members, vec![0]);
        assert!(d.orthogonality_defect < 1e-14);
    }

    #[test]
    fn decomposition_errors() {
        assert_eq!(
            m_decomposition(&cfg(2, &[&[1, 1]], &[1.0]), 1e-8, false),
            Err(Error::SpanDeficient { rank: 1, dim: 2 })
        );
        let bad = cfg(2, &[&[1, 0], &[1, 1]], &[1.0, 1.0]);
        assert!(matches!(m_decomposition(&bad, 1e-8, false), Err(Error::NotEigenvector { .. })));
        let diag = m_decomposition(&bad, 1e-8, true).unwrap();
        assert!(diag.eigen_residuals.iter().all(|&r| r > 1e-3));
    }

    #[test]
    fn b2_is_well_distributed() {
        let d = m_decomposition(&b2(1.0, 1.0), 1e-8, false).unwrap();
        assert_eq!(d.components.len(), 1);
        assert!((d.components[0].eigenvalue - c(3.0)).norm() < 1e-12);
        assert!(d.components[0].distribution_defect < 1e-14);
    }

    #[test]
    fn orthogonal_pair_is_reducible() {
        let rep = rational_complex_vee_check(&cfg(2, &[&[1, 0], &[0, 1]], &[1.0, 5.0]), 1e-8);
        assert_eq!(rep.entries.len(), 1);
        assert!(rep.pass);
    }
}
