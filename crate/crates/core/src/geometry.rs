//! Vector configurations `(A, c)`: finite lists of nonzero vectors with
//! complex multiplicities, in exact or numeric mode.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactScalar;

pub type C64 = Complex64;

/// Relative tolerance for collinearity and equality in numeric mode.
pub const TAU_COL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

/// A single scalar, exact or numeric.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(ExactScalar),
    Numeric(C64),
}

impl Scalar {
    pub fn to_complex(&self) -> C64 {
        match self {
            Scalar::Exact(x) => C64::new(x.to_f64(), 0.0),
            Scalar::Numeric(z) => *z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(x) => x.is_zero(),
            Scalar::Numeric(z) => *z == C64::new(0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Exact(Vec<ExactScalar>),
    Numeric(Vec<C64>),
}

impl Vector {
    pub fn from_ints(xs: &[i64]) -> Self {
        Vector::Exact(xs.iter().map(|&x| ExactScalar::from_int(x)).collect())
    }

    pub fn from_exact(xs: Vec<ExactScalar>) -> Self {
        Vector::Exact(xs)
    }

    pub fn from_real(xs: &[f64]) -> Self {
        Vector::Numeric(xs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Parse exact tokens such as `"1/2+sqrt3/2"`.
    pub fn parse_exact(tokens: &[&str]) -> Result<Self> {
        tokens.iter().map(|t| t.parse::<ExactScalar>()).collect::<Result<Vec<_>>>().map(Vector::Exact)
    }

    /// Standard basis vector `e_i` (0-based) in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![ExactScalar::zero(); dim];
        v[i] = ExactScalar::one();
        Vector::Exact(v)
    }

    pub fn dim(&self) -> usize {
        match self {
            Vector::Exact(v) => v.len(),
            Vector::Numeric(v) => v.len(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Vector::Exact(_) => Mode::Exact,
            Vector::Numeric(_) => Mode::Numeric,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Exact(v) => v.iter().all(ExactScalar::is_zero),
            Vector::Numeric(v) => v.iter().all(|z| z.norm() == 0.0),
        }
    }

    pub fn to_complex(&self) -> Vec<C64> {
        match self {
            Vector::Exact(v) => v.iter().map(|x| C64::new(x.to_f64(), 0.0)).collect(),
            Vector::Numeric(v) => v.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&[ExactScalar]> {
        match self {
            Vector::Exact(v) => Some(v),
            Vector::Numeric(_) => None,
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Vector::Exact(v) => Vector::Exact(v.iter().map(|x| -x).collect()),
            Vector::Numeric(v) => Vector::Numeric(v.iter().map(|z| -z).collect()),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        match (self, s) {
            (Vector::Exact(v), Scalar::Exact(k)) => Vector::Exact(v.iter().map(|x| x * k).collect()),
            _ => {
                let k = s.to_complex();
                Vector::Numeric(self.to_complex().iter().map(|z| z * k).collect())
            }
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Self> {
        check_dims(self, other)?;
        Ok(match (self, other) {
            (Vector::Exact(a), Vector::Exact(b)) => Vector::Exact(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            _ => Vector::Numeric(self.to_complex().iter().zip(other.to_complex()).map(|(x, y)| x + y).collect()),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Self> {
        self.add(&other.neg())
    }
}

impl std::fmt::Display for Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = match self {
            Vector::Exact(xs) => xs.iter().map(|x| x.to_string()).collect(),
            Vector::Numeric(xs) => xs.iter().map(|z| if z.im == 0.0 { z.re.to_string() } else { z.to_string() }).collect(),
        };
        write!(f, "({})", parts.join(", "))
    }
}

fn check_dims(u: &Vector, v: &Vector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    Ok(())
}

pub(crate) fn exact_dot(u: &[ExactScalar], v: &[ExactScalar]) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (x, y) in u.iter().zip(v) {
        acc += &(x * y);
    }
    acc
}

pub(crate) fn cdot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

pub(crate) fn cnorm(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Standard bilinear (not Hermitian) form `sum u_i v_i`.
pub fn inner(u: &Vector, v: &Vector) -> Result<Scalar> {
    check_dims(u, v)?;
    Ok(match (u, v) {
        (Vector::Exact(a), Vector::Exact(b)) => Scalar::Exact(exact_dot(a, b)),
        _ => Scalar::Numeric(cdot(&u.to_complex(), &v.to_complex())),
    })
}

/// Dense square matrix of scalars, exact or numeric.
#[derive(Debug, Clone, PartialEq)]
pub enum SquareMatrix {
    Exact { n: usize, entries: Vec<ExactScalar> },
    Numeric(DMatrix<C64>),
}

impl SquareMatrix {
    pub fn size(&self) -> usize {
        match self {
            SquareMatrix::Exact { n, .. } => *n,
            SquareMatrix::Numeric(m) => m.nrows(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self {
            SquareMatrix::Exact { n, entries } => Scalar::Exact(entries[i * n + j].clone()),
            SquareMatrix::Numeric(m) => Scalar::Numeric(m[(i, j)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SquareMatrix::Exact { entries, .. } => entries.iter().all(ExactScalar::is_zero),
            SquareMatrix::Numeric(m) => m.iter().all(|z| z.norm() == 0.0),
        }
    }

    pub fn to_complex(&self) -> DMatrix<C64> {
        match self {
            SquareMatrix::Exact { n, entries } => {
                DMatrix::from_fn(*n, *n, |i, j| C64::new(entries[i * n + j].to_f64(), 0.0))
            }
            SquareMatrix::Numeric(m) => m.clone(),
        }
    }
}

/// `(u ∧ v)_{ij} = u_i v_j - u_j v_i`.
pub fn wedge_matrix(u: &Vector, v: &Vector) -> Result<SquareMatrix> {
    check_dims(u, v)?;
    let n = u.dim();
    Ok(match (u, v) {
        (Vector::Exact(a), Vector::Exact(b)) => {
            let mut entries = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    entries.push(&(&a[i] * &b[j]) - &(&a[j] * &b[i]));
                }
            }
            SquareMatrix::Exact { n, entries }
        }
        _ => {
            let a = u.to_complex();
            let b = v.to_complex();
            SquareMatrix::Numeric(DMatrix::from_fn(n, n, |i, j| a[i] * b[j] - a[j] * b[i]))
        }
    })
}

/// Exact ratio `k` with `v = k * base`, if the vectors are collinear.
pub(crate) fn exact_ratio(v: &[ExactScalar], base: &[ExactScalar]) -> Option<ExactScalar> {
    let pivot = base.iter().position(|x| !x.is_zero())?;
    let k = &v[pivot] / &base[pivot];
    v.iter().zip(base).all(|(x, y)| *x == &k * y).then_some(k)
}

/// Numeric ratio with relative tolerance `tol`.
pub(crate) fn numeric_ratio(v: &[C64], base: &[C64], tol: f64) -> Option<C64> {
    let bn = cnorm(base);
    let vn = cnorm(v);
    if bn == 0.0 {
        return None;
    }
    let k = base.iter().zip(v).map(|(b, x)| b.conj() * x).sum::<C64>() / (bn * bn);
    let res: f64 = v.iter().zip(base).map(|(x, b)| (x - k * b).norm_sqr()).sum::<f64>().sqrt();
    (res <= tol * vn.max(bn)).then_some(k)
}

/// Ratio `k` with `v = k * base` in whatever mode the pair supports.
pub fn collinear_ratio(v: &Vector, base: &Vector) -> Option<Scalar> {
    match (v, base) {
        (Vector::Exact(a), Vector::Exact(b)) => exact_ratio(a, b).map(Scalar::Exact),
        _ => numeric_ratio(&v.to_complex(), &base.to_complex(), TAU_COL).map(Scalar::Numeric),
    }
}

/// The configuration `(A, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorConfig {
    dim: usize,
    vectors: Vec<Vector>,
    mults: Vec<C64>,
    numeric: Vec<Vec<C64>>,
    mode: Mode,
}

/// Validate and assemble a configuration.
pub fn build_config(dim: usize, vectors: Vec<Vector>, mults: Vec<C64>) -> Result<VectorConfig> {
    VectorConfig::new(dim, vectors, mults)
}

impl VectorConfig {
    pub fn new(dim: usize, vectors: Vec<Vector>, mults: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if vectors.len() != mults.len() {
            return Err(Error::DimensionMismatch { expected: vectors.len(), found: mults.len() });
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector { index: i });
            }
        }
        let exact = vectors.iter().filter(|v| v.mode() == Mode::Exact).count();
        let mode = if exact == vectors.len() {
            Mode::Exact
        } else if exact == 0 {
            Mode::Numeric
        } else {
            return Err(Error::MixedScalarMode);
        };
        let numeric = vectors.iter().map(Vector::to_complex).collect();
        Ok(Self { dim, vectors, mults, numeric, mode })
    }

    /// Like [`VectorConfig::new`] but converts exact vectors to numeric when
    /// the inputs mix both kinds.
    pub fn new_lenient(dim: usize, vectors: Vec<Vector>, mults: Vec<C64>) -> Result<Self> {
        let mixed = vectors.iter().any(|v| v.mode() == Mode::Exact) && vectors.iter().any(|v| v.mode() == Mode::Numeric);
        if mixed {
            let vectors = vectors.iter().map(|v| Vector::Numeric(v.to_complex())).collect();
            Self::new(dim, vectors, mults)
        } else {
            Self::new(dim, vectors, mults)
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, vectors: vec![], mults: vec![], numeric: vec![], mode: Mode::Exact }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &Vector {
        &self.vectors[i]
    }

    pub fn multiplicities(&self) -> &[C64] {
        &self.mults
    }

    pub fn mult(&self, i: usize) -> C64 {
        self.mults[i]
    }

    /// Complex image of vector `i`.
    pub fn numeric(&self, i: usize) -> &[C64] {
        &self.numeric[i]
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        } else {
            Ok(())
        }
    }

    /// Same vectors, new multiplicities.
    pub fn with_multiplicities(&self, mults: Vec<C64>) -> Result<Self> {
        if mults.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: mults.len() });
        }
        Ok(Self { mults, ..self.clone() })
    }

    pub fn scaled_multiplicities(&self, lambda: C64) -> Self {
        Self { mults: self.mults.iter().map(|c| c * lambda).collect(), ..self.clone() }
    }

    /// Sub-configuration on the given indices, in that order.
    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            dim: self.dim,
            vectors: idx.iter().map(|&i| self.vectors[i].clone()).collect(),
            mults: idx.iter().map(|&i| self.mults[i]).collect(),
            numeric: idx.iter().map(|&i| self.numeric[i].clone()).collect(),
            mode: self.mode,
        }
    }

    /// Numeric copy of this configuration.
    pub fn to_numeric(&self) -> Self {
        Self {
            vectors: self.numeric.iter().cloned().map(Vector::Numeric).collect(),
            mode: Mode::Numeric,
            ..self.clone()
        }
    }

    /// Apply a linear map `x -> C x` to every vector (numeric result).
    pub fn transformed(&self, c: &DMatrix<C64>) -> Result<Self> {
        if c.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: c.ncols() });
        }
        let vectors = self
            .numeric
            .iter()
            .map(|v| {
                let out = c * nalgebra::DVector::from_column_slice(v);
                Vector::Numeric(out.iter().copied().collect())
            })
            .collect();
        Self::new(c.nrows(), vectors, self.mults.clone())
    }

    /// Whether vectors `i` and `j` are collinear.
    pub fn collinear(&self, i: usize, j: usize) -> bool {
        collinear_ratio(&self.vectors[i], &self.vectors[j]).is_some()
    }

    /// Hash of the canonical text form of the configuration.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(format!("dim={};mode={:?};", self.dim, self.mode));
        for (v, c) in self.vectors.iter().zip(&self.mults) {
            match v {
                Vector::Exact(xs) => {
                    for x in xs {
                        h.update(format!("{x},"));
                    }
                }
                Vector::Numeric(xs) => {
                    for x in xs {
                        h.update(format!("{:?}/{:?},", x.re, x.im));
                    }
                }
            }
            h.update(format!("|{:?}/{:?};", c.re, c.im));
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A maximal class of mutually collinear configuration vectors (`δ_α`).
#[derive(Debug, Clone, PartialEq)]
pub struct CollinearClass {
    pub representative: usize,
    pub members: Vec<usize>,
    /// `k_γ` with `γ = k_γ α₀`, aligned with `members`.
    pub ratios: Vec<Scalar>,
    /// `C = Σ c_γ k_γ²` for the stored representative.
    pub c_value: C64,
}

impl CollinearClass {
    /// Smallest `|C_δ|` over all nonempty sub-collections `δ` of the class.
    pub fn min_subset_c(&self, cfg: &VectorConfig) -> f64 {
        let n = self.members.len().min(16);
        let terms: Vec<C64> = self
            .members
            .iter()
            .zip(&self.ratios)
            .take(n)
            .map(|(&i, k)| cfg.mult(i) * k.to_complex() * k.to_complex())
            .collect();
        (1u32..(1 << n))
            .map(|mask| (0..n).filter(|b| mask & (1 << b) != 0).map(|b| terms[b]).sum::<C64>().norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Partition the indices into maximal collinear classes. The representative
/// is the smallest index in the class.
pub fn collinear_classes(cfg: &VectorConfig) -> Vec<CollinearClass> {
    let mut classes: Vec<CollinearClass> = Vec::new();
    for i in 0..cfg.len() {
        let found = classes.iter_mut().find_map(|cl| {
            collinear_ratio(cfg.vector(i), cfg.vector(cl.representative)).map(|k| (cl, k))
        });
        match found {
            Some((cl, k)) => {
                let kc = k.to_complex();
                cl.c_value += cfg.mult(i) * kc * kc;
                cl.members.push(i);
                cl.ratios.push(k);
            }
            None => {
                let one = match cfg.mode() {
                    Mode::Exact => Scalar::Exact(ExactScalar::one()),
                    Mode::Numeric => Scalar::Numeric(C64::new(1.0, 0.0)),
                };
                classes.push(CollinearClass { representative: i, members: vec![i], ratios: vec![one], c_value: cfg.mult(i) });
            }
        }
    }
    classes
}

/// Sign of the first nonzero coordinate under the lexicographic half-space
/// functional; complex coordinates compare by real part, then imaginary part.
pub(crate) fn leading_sign(v: &Vector) -> i32 {
    match v {
        Vector::Exact(xs) => xs.iter().map(ExactScalar::signum).find(|&s| s != 0).unwrap_or(0),
        Vector::Numeric(xs) => {
            let scale = cnorm(xs);
            let tol = TAU_COL * scale;
            for z in xs {
                if z.norm() > tol {
                    if z.re.abs() > tol {
                        return if z.re > 0.0 { 1 } else { -1 };
                    }
                    return if z.im > 0.0 { 1 } else { -1 };
                }
            }
            0
        }
    }
}

pub(crate) fn vectors_equal(u: &Vector, v: &Vector) -> bool {
    match (u, v) {
        (Vector::Exact(a), Vector::Exact(b)) => a == b,
        _ => {
            let a = u.to_complex();
            let b = v.to_complex();
            let d: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
            d <= TAU_COL * cnorm(&a).max(cnorm(&b))
        }
    }
}

/// Flip every vector into the positive half-space, merge duplicates by
/// summing multiplicities and drop entries whose merged multiplicity is
/// exactly zero. Order of first appearance is kept.
pub fn positive_normalize(cfg: &VectorConfig) -> VectorConfig {
    let (vectors, mults, _) = merge_positive(cfg.vectors(), cfg.multiplicities());
    let keep: Vec<usize> = (0..vectors.len()).filter(|&i| mults[i] != C64::new(0.0, 0.0)).collect();
    let vectors = keep.iter().map(|&i| vectors[i].clone()).collect();
    let mults = keep.iter().map(|&i| mults[i]).collect();
    VectorConfig::new(cfg.dim(), vectors, mults).expect("normalized vectors stay valid")
}

/// Sign-normalize and merge without dropping anything. Returns the merged
/// vectors, summed multiplicities and, for each merged vector, the source
/// indices.
pub(crate) fn merge_positive(vectors: &[Vector], mults: &[C64]) -> (Vec<Vector>, Vec<C64>, Vec<Vec<usize>>) {
    let mut out_v: Vec<Vector> = Vec::new();
    let mut out_c: Vec<C64> = Vec::new();
    let mut sources: Vec<Vec<usize>> = Vec::new();
    for (i, (v, c)) in vectors.iter().zip(mults).enumerate() {
        let v = if leading_sign(v) < 0 { v.neg() } else { v.clone() };
        match out_v.iter().position(|w| vectors_equal(w, &v)) {
            Some(j) => {
                out_c[j] += c;
                sources[j].push(i);
            }
            None => {
                out_v.push(v);
                out_c.push(*c);
                sources.push(vec![i]);
            }
        }
    }
    (out_v, out_c, sources)
}

/// `M = Σ c_α α ⊗ α`.
pub fn gram_operator(cfg: &VectorConfig) -> DMatrix<C64> {
    let n = cfg.dim();
    let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for k in 0..cfg.len() {
        let a = cfg.numeric(k);
        let c = cfg.mult(k);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += c * a[i] * a[j];
            }
        }
    }
    m
}

/// `G_{A,c}(x, y) = Σ c_α (α,x)(α,y)`.
pub fn g_form(cfg: &VectorConfig, x: &[C64], y: &[C64]) -> C64 {
    (0..cfg.len()).map(|k| cfg.mult(k) * cdot(cfg.numeric(k), x) * cdot(cfg.numeric(k), y)).sum()
}
