//! Multiplicity relations as zero loci of the condition-(2) residual.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::catalog::{build_named, Params};
use crate::error::{Error, Result};
use crate::geometry::{VectorConfig, C64};
use crate::vee_check::{condition2_tensor, euclidean_vee_residual};

/// Roots are kept when the full residual there is below this.
pub const ROOT_TOL: f64 = 1e-10;
const VEE_TOL: f64 = 1e-10;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    Bisection,
    GoldenSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub value: f64,
    pub residual: f64,
    pub signed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRoot {
    pub value: f64,
    pub residual: f64,
    pub method: RootMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationScan {
    pub builder: String,
    pub fixed: String,
    pub free: String,
    pub interval: (f64, f64),
    pub samples: Vec<ScanSample>,
    /// Component of the condition-(2) tensor used as the signed surrogate.
    pub surrogate: usize,
    pub roots: Vec<ScanRoot>,
}

impl RelationScan {
    pub fn root_values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }
}

type Builder<'a> = dyn Fn(&Params) -> Result<VectorConfig> + 'a;

fn tensor_at(build: &Builder, fixed: &Params, free: &str, t: f64) -> Result<Vec<C64>> {
    Ok(condition2_tensor(&build(&fixed.clone().with(free, t))?))
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_condition_one(build: &Builder, params: &Params) -> Result<()> {
    let report = euclidean_vee_residual(&build(params)?, VEE_TOL);
    if report.pass {
        Ok(())
    } else {
        Err(Error::ConditionOneFails { residual: report.max_residual })
    }
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn golden_min(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > 1e-14 * (1.0 + a.abs().max(b.abs())) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Scan `free` over `interval` with the other parameters fixed and return
/// the zeros of the condition-(2) residual.
pub fn relation_scan(name: &str, fixed: &Params, free: &str, interval: (f64, f64), grid: usize) -> Result<RelationScan> {
    let mut scan = relation_scan_with(&|p: &Params| build_named(name, p), fixed, free, interval, grid)?;
    scan.builder = name.to_string();
    Ok(scan)
}

/// [`relation_scan`] over an arbitrary parameterized family.
pub fn relation_scan_with(
    build: &Builder,
    fixed: &Params,
    free: &str,
    interval: (f64, f64),
    grid: usize,
) -> Result<RelationScan> {
    let (lo, hi) = interval;
    if grid < 8 {
        return Err(Error::BadParameter { name: "grid".into(), reason: "at least 8 points required".into() });
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BadParameter { name: "interval".into(), reason: format!("[{lo}, {hi}] is not a finite interval") });
    }
    let mid = 0.5 * (lo + hi);
    check_condition_one(build, &fixed.clone().with(free, mid))?;

    let at_mid = tensor_at(build, fixed, free, mid)?;
    let surrogate = (0..at_mid.len()).max_by(|&a, &b| at_mid[a].norm().total_cmp(&at_mid[b].norm())).unwrap_or(0);

    let ts: Vec<f64> = (0..grid).map(|k| lo + (hi - lo) * k as f64 / (grid - 1) as f64).collect();
    let mut samples = Vec::with_capacity(grid);
    for &t in &ts {
        let v = tensor_at(build, fixed, free, t)?;
        samples.push(ScanSample { value: t, residual: max_norm(&v), signed: v.get(surrogate).map_or(0.0, |z| z.re) });
    }
    let scale = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let residual = |t: f64| tensor_at(build, fixed, free, t).map(|v| max_norm(&v));
    let signed = |t: f64| tensor_at(build, fixed, free, t).map(|v| v.get(surrogate).map_or(0.0, |z| z.re));

    let mut candidates: Vec<(f64, RootMethod)> = Vec::new();
    if at_mid.get(surrogate).map_or(0.0, |z| z.norm()) > 1e-8 * scale {
        for w in samples.windows(2) {
            if w[0].signed == 0.0 {
                candidates.push((w[0].value, RootMethod::Bisection));
            } else if (w[0].signed < 0.0) != (w[1].signed < 0.0) && w[1].signed != 0.0 {
                candidates.push((bisect(signed, w[0].value, w[1].value, w[0].signed)?, RootMethod::Bisection));
            }
        }
        if samples.last().is_some_and(|s| s.signed == 0.0) {
            candidates.push((hi, RootMethod::Bisection));
        }
    }
    // Zeros the surrogate misses (or every zero, if it degenerated).
    for k in 0..samples.len() {
        let left = k.checked_sub(1).map_or(f64::INFINITY, |j| samples[j].residual);
        let right = samples.get(k + 1).map_or(f64::INFINITY, |s| s.residual);
        if samples[k].residual <= left && samples[k].residual <= right {
            let a = ts[k.saturating_sub(1)];
            let b = ts[(k + 1).min(grid - 1)];
            candidates.push((golden_min(residual, a, b)?, RootMethod::GoldenSection));
        }
    }

    let mut roots: Vec<ScanRoot> = Vec::new();
    for (t, method) in candidates {
        let r = residual(t)?;
        if r >= ROOT_TOL {
            continue;
        }
        match roots.iter_mut().find(|x| (x.value - t).abs() < 1e-8 * (1.0 + t.abs())) {
            Some(x) if r < x.residual => *x = ScanRoot { value: t, residual: r, method },
            Some(_) => {}
            None => roots.push(ScanRoot { value: t, residual: r, method }),
        }
    }
    if roots.is_empty() {
        return Err(Error::NoRootInInterval { lo, hi });
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(RelationScan {
        builder: String::from("custom"),
        fixed: fixed.to_string(),
        free: free.to_string(),
        interval,
        samples,
        surrogate,
        roots,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub params: Params,
    pub values: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

pub const NEWTON_TOL: f64 = 1e-11;
const NEWTON_MAX: usize = 25;
const FD_STEP: f64 = 1e-6;

fn residual_vector(name: &str, params: &Params) -> Result<DVector<f64>> {
    let t = condition2_tensor(&build_named(name, params)?);
    Ok(DVector::from_iterator(2 * t.len(), t.iter().flat_map(|z| [z.re, z.im])))
}

fn assign(params: &Params, free: &[&str], x: &[f64]) -> Params {
    let mut p = params.clone();
    for (k, v) in free.iter().zip(x) {
        p.set(k, *v);
    }
    p
}

/// Gauss-Newton on the condition-(2) tensor over the `free` parameters.
pub fn newton_refine(name: &str, params: &Params, free: &[&str], init: &[f64]) -> Result<Refinement> {
    if free.len() != init.len() || free.is_empty() {
        return Err(Error::DimensionMismatch { expected: free.len().max(1), found: init.len() });
    }
    let mut x = init.to_vec();
    let mut r = residual_vector(name, &assign(params, free, &x))?;
    let start = r.amax();
    for it in 0..=NEWTON_MAX {
        let res = r.amax();
        if res < NEWTON_TOL {
            return Ok(Refinement { params: assign(params, free, &x), values: x, iterations: it, residual: res });
        }
        if it == NEWTON_MAX || !res.is_finite() || res > 1e6 * start.max(1.0) {
            return Err(Error::Diverged { iterations: it, residual: res });
        }
        let mut jac = DMatrix::<f64>::zeros(r.len(), x.len());
        for k in 0..x.len() {
            let h = FD_STEP * (1.0 + x[k].abs());
            let mut up = x.clone();
            let mut down = x.clone();
            up[k] += h;
            down[k] -= h;
            let col = (residual_vector(name, &assign(params, free, &up))? - residual_vector(name, &assign(params, free, &down))?) / (2.0 * h);
            jac.set_column(k, &col);
        }
        // Dependent columns are fine (the minimum-norm step lands on the
        // locus); a parameter with no effect is not.
        let norms: Vec<f64> = jac.column_iter().map(|c| c.norm()).collect();
        let top = norms.iter().copied().fold(0.0, f64::max);
        if top == 0.0 || norms.iter().any(|&n| n <= 1e-10 * top) {
            return Err(Error::SingularJacobian);
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let step = svd.solve(&(-&r), 1e-10 * smax).map_err(|e| Error::FactorizationFailure(e.to_string()))?;
        for (xi, d) in x.iter_mut().zip(step.iter()) {
            *xi += d;
        }
        r = residual_vector(name, &assign(params, free, &x))?;
    }
    unreachable!()
}
