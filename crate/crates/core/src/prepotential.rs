//! Third derivatives `F_ijk` of trigonometric and rational prepotentials.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cdot, VectorConfig, C64};
use crate::linalg::{frob, guarded_inverse, singular_values, CMatrix};

/// Minimum pole clearance for sampled points.
pub const DELTA_POLE: f64 = 1e-2;
/// Points closer than this to a pole are rejected outright.
pub const POLE_HIT: f64 = 1e-14;
const MAX_ATTEMPTS: usize = 1000;

/// The one-variable kernel `f'''` of the prepotential.
#[derive(Clone)]
pub enum Kernel {
    /// `cot z`
    Trig,
    /// `2 / z`
    Rational,
    Custom(Arc<dyn Fn(C64) -> C64 + Send + Sync>),
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Trig => write!(f, "Trig"),
            Kernel::Rational => write!(f, "Rational"),
            Kernel::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Kernel {
    pub fn eval(&self, z: C64) -> C64 {
        match self {
            Kernel::Trig => z.cos() / z.sin(),
            Kernel::Rational => C64::new(2.0, 0.0) / z,
            Kernel::Custom(k) => k(z),
        }
    }

    /// Distance-like measure from `z` to the nearest pole.
    pub fn clearance(&self, z: C64) -> f64 {
        match self {
            Kernel::Trig => z.sin().norm(),
            Kernel::Rational | Kernel::Custom(_) => z.norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub point: Vec<C64>,
    pub seed: u64,
    #[serde(with = "crate::report::unbounded")]
    pub clearance: f64,
}

/// Smallest kernel clearance of `x` over the configuration.
pub fn pole_clearance(cfg: &VectorConfig, kernel: &Kernel, x: &[C64]) -> f64 {
    (0..cfg.len()).map(|k| kernel.clearance(cdot(cfg.numeric(k), x))).fold(f64::INFINITY, f64::min)
}

/// Seeded points `x = re + i·im`, components uniform in `[-1, 1]`, rejected
/// until the pole clearance reaches [`DELTA_POLE`].
pub fn sample_points(cfg: &VectorConfig, kernel: &Kernel, count: usize, seed: u64) -> Result<Vec<PointSample>> {
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut found = None;
        for _ in 0..MAX_ATTEMPTS {
            let point: Vec<C64> =
                (0..cfg.dim()).map(|_| C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))).collect();
            let clearance = pole_clearance(cfg, kernel, &point);
            if clearance >= DELTA_POLE {
                found = Some(PointSample { point, seed, clearance });
                break;
            }
        }
        out.push(found.ok_or(Error::SamplingExhausted { clearance: DELTA_POLE, attempts: MAX_ATTEMPTS })?);
    }
    Ok(out)
}

/// The matrices `(F_i)_{jk} = F_{ijk}` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTensor {
    matrices: Vec<CMatrix>,
    point: Vec<C64>,
}

impl DerivativeTensor {
    /// Build from a function of sorted indices `i ≤ j ≤ k`; symmetry is
    /// exact by construction.
    pub fn from_fn(n: usize, point: Vec<C64>, mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut vals = vec![C64::new(0.0, 0.0); n * n * n];
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let v = f(i, j, k);
                    for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        vals[(a * n + b) * n + c] = v;
                    }
                }
            }
        }
        let matrices = (0..n).map(|i| CMatrix::from_fn(n, n, |j, k| vals[(i * n + j) * n + k])).collect();
        Self { matrices, point }
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &CMatrix {
        &self.matrices[i]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.matrices[i][(j, k)]
    }

    pub fn point(&self) -> &[C64] {
        &self.point
    }

    /// `F̃_abc = Σ C_pa C_jb C_kc F_pjk`: the tensor in coordinates `x = C y`.
    pub fn transformed(&self, c: &CMatrix) -> Self {
        let n = self.dim();
        let mut half = vec![C64::new(0.0, 0.0); n * n * n];
        // contract one index at a time
        for a in 0..n {
            for j in 0..n {
                for k in 0..n {
                    half[(a * n + j) * n + k] = (0..n).map(|p| c[(p, a)] * self.get(p, j, k)).sum();
                }
            }
        }
        let mut two = vec![C64::new(0.0, 0.0); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    two[(a * n + b) * n + k] = (0..n).map(|j| c[(j, b)] * half[(a * n + j) * n + k]).sum();
                }
            }
        }
        let y = guarded_inverse(c, 1e-14).map(|ci| ci * nalgebra::DVector::from_column_slice(&self.point));
        let point = y.map(|v| v.iter().copied().collect()).unwrap_or_default();
        Self::from_fn(n, point, |a, b, cc| (0..n).map(|k| c[(k, cc)] * two[(a * n + b) * n + k]).sum())
    }
}

/// `(F_i)_{jk} = Σ_α c_α α_i α_j α_k · kernel((α, x))`.
pub fn third_derivative_tensor(cfg: &VectorConfig, kernel: &Kernel, x: &[C64]) -> Result<DerivativeTensor> {
    let n = cfg.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let mut weights = Vec::with_capacity(cfg.len());
    for k in 0..cfg.len() {
        let z = cdot(cfg.numeric(k), x);
        let clear = kernel.clearance(z);
        if clear < POLE_HIT {
            return Err(Error::PoleHit { value: clear });
        }
        weights.push(cfg.mult(k) * kernel.eval(z));
    }
    Ok(DerivativeTensor::from_fn(n, x.to_vec(), |i, j, l| {
        (0..cfg.len())
            .map(|k| {
                let a = cfg.numeric(k);
                weights[k] * a[i] * a[j] * a[l]
            })
            .sum()
    }))
}

/// `max_{i<j} ‖[F_i, F_j]‖ / (1 + ‖F_i‖‖F_j‖)`.
pub fn commutativity_residual(t: &DerivativeTensor) -> f64 {
    let f = t.matrices();
    let norms: Vec<f64> = f.iter().map(frob).collect();
    let mut worst: f64 = 0.0;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let c = &f[i] * &f[j] - &f[j] * &f[i];
            worst = worst.max(frob(&c) / (1.0 + norms[i] * norms[j]));
        }
    }
    worst
}

/// `max_{i<j} ‖F_i B⁻¹ F_j − F_j B⁻¹ F_i‖ / (1 + ‖F_i‖ ‖B⁻¹‖₂ ‖F_j‖)`.
pub fn wdvv_residual(t: &DerivativeTensor, b: &CMatrix) -> Result<f64> {
    let n = t.dim();
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.nrows() });
    }
    let binv = guarded_inverse(b, 1e-12)?;
    let inv_norm = 1.0 / singular_values(b).last().copied().unwrap_or(1.0);
    let f = t.matrices();
    let norms: Vec<f64> = f.iter().map(frob).collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let left = &f[i] * &binv;
        for j in i + 1..n {
            let c = &left * &f[j] - &f[j] * &binv * &f[i];
            worst = worst.max(frob(&c) / (1.0 + norms[i] * inv_norm * norms[j]));
        }
    }
    Ok(worst)
}
