//! Named configurations: BC_n and its deformation, F4, G2, the four tabulated
//! F4 projections, and the two-dimensional polynomial prepotential.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::geometry::{Vector, VectorConfig, C64};
use crate::prepotential::DerivativeTensor;

/// Parameter assignments. Every value is a list so that `m = 3,1,2` fits;
/// scalar parameters are lists of length one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params(BTreeMap<String, Vec<f64>>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.set(key, value);
        self
    }

    pub fn with_list(mut self, key: &str, values: &[f64]) -> Self {
        self.0.insert(key.to_string(), values.to_vec());
        self
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.0.insert(key.to_string(), vec![value]);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        match self.0.get(key).map(Vec::as_slice) {
            Some([x]) => Ok(*x),
            Some(_) => Err(Error::BadParameter { name: key.into(), reason: "expected a single number".into() }),
            None => Err(Error::MissingParameter(key.into())),
        }
    }

    pub fn get_or(&self, key: &str, default: f64) -> Result<f64> {
        if self.contains(key) {
            self.get(key)
        } else {
            Ok(default)
        }
    }

    pub fn get_list(&self, key: &str) -> Option<&[f64]> {
        self.0.get(key).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Vec<f64>)> {
        self.0.iter()
    }

    /// Parse one `key=value` or `key=v1,v2,...` assignment into `self`.
    pub fn parse_assignment(&mut self, text: &str) -> Result<()> {
        let (k, v) = text.split_once('=').ok_or_else(|| Error::Parse {
            location: format!("--set {text}"),
            message: "expected key=value".into(),
        })?;
        let values = v
            .split(',')
            .map(|x| {
                x.trim().parse::<f64>().map_err(|e| Error::Parse { location: format!("--set {text}"), message: e.to_string() })
            })
            .collect::<Result<Vec<f64>>>()?;
        self.0.insert(k.trim().to_string(), values);
        Ok(())
    }
}

impl FromStr for Params {
    type Err = Error;

    /// Semicolon separated assignments, e.g. `"r=-2;q=1"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Params::new();
        for part in s.split(';').filter(|x| !x.trim().is_empty()) {
            p.parse_assignment(part)?;
        }
        Ok(p)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| format!("{k}={}", v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// A known commutativity locus: `target = eval(params)`.
#[derive(Clone, Serialize)]
pub struct Relation {
    pub text: &'static str,
    pub target: &'static str,
    #[serde(skip)]
    pub eval: fn(&Params) -> Result<f64>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({})", self.text)
    }
}

impl Relation {
    /// `params` with the relation imposed.
    pub fn apply(&self, params: &Params) -> Result<Params> {
        let v = (self.eval)(params)?;
        Ok(params.clone().with(self.target, v))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamDoc {
    pub name: &'static str,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// `None` when the dimension depends on the parameters.
    pub dim: Option<usize>,
    pub params: Vec<ParamDoc>,
    pub relations: Vec<Relation>,
    pub summary: &'static str,
}

pub const NAMES: [&str; 9] = ["BCn", "BC1", "F4+", "G2+", "F4_A1_1", "F4_A1_2", "F4_A2_1", "F4_A1sq", "poly2d"];

fn bcn_relation(p: &Params) -> Result<f64> {
    let m = bcn_m(p)?;
    let total: f64 = m.iter().sum();
    Ok(-8.0 * p.get("s")? - 2.0 * p.get("q")? * (total - 2.0))
}

fn f4_params() -> Vec<ParamDoc> {
    vec![ParamDoc { name: "r", doc: "short roots" }, ParamDoc { name: "q", doc: "long roots" }]
}

fn f4_relations() -> Vec<Relation> {
    vec![
        Relation { text: "r = -2q", target: "r", eval: |p| Ok(-2.0 * p.get("q")?) },
        Relation { text: "r = -4q", target: "r", eval: |p| Ok(-4.0 * p.get("q")?) },
    ]
}

pub fn list_catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "BCn",
            dim: None,
            params: vec![
                ParamDoc { name: "q", doc: "m_i^-1/2 e_i ± m_j^-1/2 e_j carry q m_i m_j" },
                ParamDoc { name: "r", doc: "m_i^-1/2 e_i carries r m_i" },
                ParamDoc { name: "s", doc: "2 m_i^-1/2 e_i carries s m_i + q m_i (m_i - 1) / 2" },
                ParamDoc { name: "m", doc: "list m_1,...,m_n of nonzero numbers (or give n for all ones)" },
                ParamDoc { name: "n", doc: "rank, when m is omitted" },
            ],
            relations: vec![Relation { text: "r = -8s - 2q(m_1 + ... + m_n - 2)", target: "r", eval: bcn_relation }],
            summary: "deformed BC_n configuration",
        },
        CatalogEntry {
            name: "BC1",
            dim: Some(1),
            params: vec![ParamDoc { name: "r", doc: "e1" }, ParamDoc { name: "s", doc: "2e1" }],
            relations: vec![],
            summary: "BC_1 positive half {e1, 2e1}",
        },
        CatalogEntry { name: "F4+", dim: Some(4), params: f4_params(), relations: f4_relations(), summary: "positive half of F4" },
        CatalogEntry {
            name: "G2+",
            dim: Some(2),
            params: vec![ParamDoc { name: "p", doc: "short roots" }, ParamDoc { name: "q", doc: "long roots" }],
            relations: vec![
                Relation { text: "p = -3q", target: "p", eval: |p| Ok(-3.0 * p.get("q")?) },
                Relation { text: "p = -9q", target: "p", eval: |p| Ok(-9.0 * p.get("q")?) },
            ],
            summary: "positive half of G2",
        },
        CatalogEntry {
            name: "F4_A1_1",
            dim: Some(3),
            params: f4_params(),
            relations: f4_relations(),
            summary: "F4 projected along the short root e4",
        },
        CatalogEntry {
            name: "F4_A1_2",
            dim: Some(3),
            params: f4_params(),
            relations: f4_relations(),
            summary: "F4 projected along the long root e3 - e4",
        },
        CatalogEntry {
            name: "F4_A2_1",
            dim: Some(2),
            params: f4_params(),
            relations: f4_relations(),
            summary: "F4 projected along a long A2",
        },
        CatalogEntry {
            name: "F4_A1sq",
            dim: Some(2),
            params: f4_params(),
            relations: f4_relations(),
            summary: "F4 projected along A1 x A1 (one long, one short)",
        },
        CatalogEntry {
            name: "poly2d",
            dim: Some(2),
            params: vec![
                ParamDoc { name: "a", doc: "coefficient of f(t) = a t^n (default 1)" },
                ParamDoc { name: "n", doc: "exponent of f (default 4)" },
            ],
            relations: vec![],
            summary: "F = (t1)^2 t2 / 2 + f(t2) with constant metric [[0,1],[1,0]]",
        },
    ]
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    list_catalog().into_iter().find(|e| e.name == name).ok_or_else(|| unknown(name))
}

fn unknown(name: &str) -> Error {
    Error::UnknownName { name: name.to_string(), known: NAMES.join(", ") }
}

fn ex(tokens: &[&str]) -> Vector {
    Vector::parse_exact(tokens).expect("catalog tokens are valid")
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn bcn_m(p: &Params) -> Result<Vec<f64>> {
    let m = match p.get_list("m") {
        Some(m) => m.to_vec(),
        None => {
            let n = p.get("n")?;
            if n < 1.0 || n.fract() != 0.0 {
                return Err(Error::BadParameter { name: "n".into(), reason: "must be a positive integer".into() });
            }
            vec![1.0; n as usize]
        }
    };
    if m.is_empty() {
        return Err(Error::BadParameter { name: "m".into(), reason: "must be nonempty".into() });
    }
    if let Some(bad) = m.iter().find(|&&x| x == 0.0 || !x.is_finite()) {
        return Err(Error::BadParameter { name: "m".into(), reason: format!("entry {bad} is not a nonzero number") });
    }
    Ok(m)
}

// m^{-1/2} as an exact scalar when m is a positive integer whose inverse
// square root stays in the field
fn exact_inv_sqrt(m: f64) -> Option<ExactScalar> {
    if m <= 0.0 || m.fract() != 0.0 || m > 1e9 {
        return None;
    }
    ExactScalar::from_ratio(1, m as i64).sqrt()
}

fn bcn(p: &Params) -> Result<VectorConfig> {
    let (q, r, s) = (p.get("q")?, p.get("r")?, p.get("s")?);
    let m = bcn_m(p)?;
    let n = m.len();
    let exact: Option<Vec<ExactScalar>> = m.iter().map(|&x| exact_inv_sqrt(x)).collect();
    let numeric: Vec<C64> = m.iter().map(|&x| C64::new(x, 0.0).powf(-0.5)).collect();
    // coefficient list -> vector in whichever mode every entry supports
    let make = |coef: &[(usize, i64)]| -> Vector {
        match &exact {
            Some(k) => {
                let mut v = vec![ExactScalar::zero(); n];
                for &(i, s) in coef {
                    v[i] = &k[i] * &ExactScalar::from_int(s);
                }
                Vector::Exact(v)
            }
            None => {
                let mut v = vec![C64::new(0.0, 0.0); n];
                for &(i, s) in coef {
                    v[i] = numeric[i] * s as f64;
                }
                Vector::Numeric(v)
            }
        }
    };
    let mut vectors = Vec::new();
    let mut mults = Vec::new();
    for i in 0..n {
        vectors.push(make(&[(i, 1)]));
        mults.push(c(r * m[i]));
    }
    for i in 0..n {
        vectors.push(make(&[(i, 2)]));
        mults.push(c(s * m[i] + 0.5 * q * m[i] * (m[i] - 1.0)));
    }
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1, -1] {
                vectors.push(make(&[(i, 1), (j, sign)]));
                mults.push(c(q * m[i] * m[j]));
            }
        }
    }
    VectorConfig::new(n, vectors, mults)
}

fn f4(p: &Params) -> Result<VectorConfig> {
    let (r, q) = (p.get("r")?, p.get("q")?);
    let mut vectors = Vec::new();
    let mut mults = Vec::new();
    for i in 0..4 {
        vectors.push(Vector::basis(4, i));
        mults.push(c(r));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for s in [1, -1] {
                let mut v = [0i64; 4];
                v[i] = 1;
                v[j] = s;
                vectors.push(Vector::from_ints(&v));
                mults.push(c(q));
            }
        }
    }
    for mask in 0..8 {
        let signs: Vec<&str> = (0..3).map(|b| if mask & (1 << b) == 0 { "1/2" } else { "-1/2" }).collect();
        vectors.push(ex(&["1/2", signs[0], signs[1], signs[2]]));
        mults.push(c(r));
    }
    VectorConfig::new(4, vectors, mults)
}

fn g2(p: &Params) -> Result<VectorConfig> {
    let (pp, q) = (p.get("p")?, p.get("q")?);
    let vectors = vec![
        ex(&["sqrt3", "0"]),
        ex(&["sqrt3/2", "3/2"]),
        ex(&["sqrt3/2", "-3/2"]),
        ex(&["0", "1"]),
        ex(&["sqrt3/2", "1/2"]),
        ex(&["sqrt3/2", "-1/2"]),
    ];
    VectorConfig::new(2, vectors, vec![c(q), c(q), c(q), c(pp), c(pp), c(pp)])
}

fn bc1(p: &Params) -> Result<VectorConfig> {
    VectorConfig::new(1, vec![ex(&["1"]), ex(&["2"])], vec![c(p.get("r")?), c(p.get("s")?)])
}

// rows of (tokens, multiplicity) from a projection table
fn table(dim: usize, rows: Vec<(Vec<&str>, f64)>) -> Result<VectorConfig> {
    let (vectors, mults): (Vec<Vector>, Vec<C64>) = rows.into_iter().map(|(t, m)| (ex(&t), c(m))).unzip();
    VectorConfig::new(dim, vectors, mults)
}

fn f4_a1_1(p: &Params) -> Result<VectorConfig> {
    let (r, q) = (p.get("r")?, p.get("q")?);
    let mut rows = Vec::new();
    for i in 0..3 {
        let mut t = vec!["0"; 3];
        t[i] = "1";
        rows.push((t, r + 2.0 * q));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            for s in ["1", "-1"] {
                let mut t = vec!["0"; 3];
                t[i] = "1";
                t[j] = s;
                rows.push((t, q));
            }
        }
    }
    for a in ["1/2", "-1/2"] {
        for b in ["1/2", "-1/2"] {
            rows.push((vec!["1/2", a, b], 2.0 * r));
        }
    }
    table(3, rows)
}

fn f4_a1_2(p: &Params) -> Result<VectorConfig> {
    let (r, q) = (p.get("r")?, p.get("q")?);
    let mut rows = vec![
        (vec!["1", "0", "0"], r),
        (vec!["0", "1", "0"], r),
        (vec!["0", "0", "sqrt2"], q),
        (vec!["0", "0", "sqrt2/2"], 2.0 * r),
        (vec!["1", "1", "0"], q),
        (vec!["1", "-1", "0"], q),
        (vec!["1/2", "1/2", "0"], 2.0 * r),
        (vec!["1/2", "-1/2", "0"], 2.0 * r),
    ];
    for s in ["sqrt2/2", "-sqrt2/2"] {
        rows.push((vec!["1", "0", s], 2.0 * q));
        rows.push((vec!["0", "1", s], 2.0 * q));
    }
    for a in ["1/2", "-1/2"] {
        for b in ["sqrt2/2", "-sqrt2/2"] {
            rows.push((vec!["1/2", a, b], r));
        }
    }
    table(3, rows)
}

fn f4_a2_1(p: &Params) -> Result<VectorConfig> {
    let (r, q) = (p.get("r")?, p.get("q")?);
    table(
        2,
        vec![
            (vec!["1", "0"], r),
            (vec!["0", "sqrt3/3"], 3.0 * r),
            (vec!["0", "2*sqrt3/3"], 3.0 * q),
            (vec!["1", "sqrt3/3"], 3.0 * q),
            (vec!["1", "-sqrt3/3"], 3.0 * q),
            (vec!["1/2", "sqrt3/6"], 3.0 * r),
            (vec!["1/2", "-sqrt3/6"], 3.0 * r),
            (vec!["1/2", "sqrt3/2"], r),
            (vec!["1/2", "-sqrt3/2"], r),
        ],
    )
}

fn f4_a1sq(p: &Params) -> Result<VectorConfig> {
    let (r, q) = (p.get("r")?, p.get("q")?);
    table(
        2,
        vec![
            (vec!["1", "0"], r + 2.0 * q),
            (vec!["0", "sqrt2"], q),
            (vec!["1/2", "0"], 4.0 * r),
            (vec!["0", "sqrt2/2"], 2.0 * (r + 2.0 * q)),
            (vec!["1", "sqrt2/2"], 2.0 * q),
            (vec!["1", "-sqrt2/2"], 2.0 * q),
            (vec!["1/2", "sqrt2/2"], 2.0 * r),
            (vec!["1/2", "-sqrt2/2"], 2.0 * r),
        ],
    )
}

/// Build a named configuration. Parameters the entry does not use are
/// ignored. Vectors are never merged or dropped, so two builds of the same
/// entry with different multiplicities line up index by index.
pub fn build_named(name: &str, params: &Params) -> Result<VectorConfig> {
    match name {
        "BCn" => bcn(params),
        "BC1" => bc1(params),
        "F4+" => f4(params),
        "G2+" => g2(params),
        "F4_A1_1" => f4_a1_1(params),
        "F4_A1_2" => f4_a1_2(params),
        "F4_A2_1" => f4_a2_1(params),
        "F4_A1sq" => f4_a1sq(params),
        "poly2d" => Err(Error::BadParameter {
            name: "poly2d".into(),
            reason: "this entry is a tensor evaluator, not a vector configuration".into(),
        }),
        _ => Err(unknown(name)),
    }
}

/// `F(t¹, t²) = ½ (t¹)² t² + a (t²)ⁿ`, with `F₁₁₂ = 1` and
/// `F₂₂₂ = a n(n−1)(n−2) (t²)ⁿ⁻³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly2d {
    pub a: f64,
    pub n: i32,
}

impl Poly2d {
    pub fn from_params(p: &Params) -> Result<Self> {
        let a = p.get_or("a", 1.0)?;
        let n = p.get_or("n", 4.0)?;
        if n.fract() != 0.0 || n < 0.0 {
            return Err(Error::BadParameter { name: "n".into(), reason: "must be a nonnegative integer".into() });
        }
        Ok(Self { a, n: n as i32 })
    }

    /// `f'''(t)`.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        Sha256::digest(format!("poly2d;a={:?};n={}", self.a, self.n)).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn f3(&self, t: C64) -> C64 {
        let n = self.n;
        if n < 3 {
            return C64::new(0.0, 0.0);
        }
        t.powi(n - 3) * (self.a * (n * (n - 1) * (n - 2)) as f64)
    }

    /// The upper metric `g^{ij}`, which here equals `F₁`.
    pub fn metric_upper(&self) -> crate::linalg::CMatrix {
        crate::linalg::CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    pub fn tensor(&self, t: &[C64]) -> DerivativeTensor {
        let f3 = self.f3(t[1]);
        DerivativeTensor::from_fn(2, t.to_vec(), |i, j, k| match (i, j, k) {
            (0, 0, 1) => c(1.0),
            (1, 1, 1) => f3,
            _ => c(0.0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Mode;

    fn rq(r: f64, q: f64) -> Params {
        Params::new().with("r", r).with("q", q)
    }

    #[test]
    fn vector_counts() {
        let p = rq(1.0, 1.0).with("p", 1.0);
        let counts: Vec<usize> = ["F4+", "G2+", "F4_A1_1", "F4_A1_2", "F4_A2_1", "F4_A1sq"]
            .iter()
            .map(|n| build_named(n, &p).unwrap().len())
            .collect();
        assert_eq!(counts, vec![24, 6, 13, 16, 9, 8]);
    }

    #[test]
    fn everything_is_exact() {
        let p = rq(1.0, 1.0).with("p", 1.0).with("s", 1.0).with_list("m", &[3.0, 1.0, 2.0]);
        for name in ["BCn", "BC1", "F4+", "G2+", "F4_A1_1", "F4_A1_2", "F4_A2_1", "F4_A1sq"] {
            assert_eq!(build_named(name, &p).unwrap().mode(), Mode::Exact, "{name}");
        }
        let deformed = p.clone().with_list("m", &[5.0, 1.0]);
        assert_eq!(build_named("BCn", &deformed).unwrap().mode(), Mode::Numeric);
    }

    #[test]
    fn bcn_with_unit_m_is_the_root_system() {
        let p = Params::new().with("q", 2.0).with("r", 3.0).with("s", 5.0).with("n", 2.0);
        let cfg = build_named("BCn", &p).unwrap();
        assert_eq!(cfg.len(), 6);
        let m: Vec<f64> = cfg.multiplicities().iter().map(|z| z.re).collect();
        assert_eq!(m, vec![3.0, 3.0, 5.0, 5.0, 2.0, 2.0]);
    }

    #[test]
    fn bcn_multiplicities_with_m() {
        let p = Params::new().with("q", 1.0).with("r", 1.0).with("s", 1.0).with_list("m", &[3.0, 2.0]);
        let cfg = build_named("BCn", &p).unwrap();
        // 2 m_1^{-1/2} e_1 carries s m_1 + q m_1 (m_1 - 1) / 2 = 3 + 3
        assert_eq!(cfg.mult(2), C64::new(6.0, 0.0));
        assert_eq!(cfg.mult(4), C64::new(6.0, 0.0));
        let v = cfg.vector(0).to_complex();
        assert!((v[0].re - 3f64.sqrt().recip()).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_named("E8", &Params::new()), Err(Error::UnknownName { .. })));
        assert_eq!(build_named("F4+", &Params::new().with("r", 1.0)), Err(Error::MissingParameter("q".into())));
        let zero_m = Params::new().with("q", 1.0).with("r", 1.0).with("s", 1.0).with_list("m", &[1.0, 0.0]);
        assert!(matches!(build_named("BCn", &zero_m), Err(Error::BadParameter { .. })));
    }

    #[test]
    fn listing_and_relations() {
        let cat = list_catalog();
        assert_eq!(cat.len(), 9);
        let f4 = entry("F4+").unwrap();
        let texts: Vec<&str> = f4.relations.iter().map(|r| r.text).collect();
        assert_eq!(texts, vec!["r = -2q", "r = -4q"]);
        let bc = entry("BCn").unwrap();
        let p = Params::new().with("q", 1.0).with("s", 1.0).with_list("m", &[3.0, 1.0, 2.0]);
        assert_eq!(bc.relations[0].apply(&p).unwrap().get("r").unwrap(), -16.0);
    }

    #[test]
    fn params_parse_and_display() {
        let p: Params = "r=-2;q=1;m=3,1,2".parse().unwrap();
        assert_eq!(p.get("r").unwrap(), -2.0);
        assert_eq!(p.get_list("m").unwrap(), &[3.0, 1.0, 2.0]);
        assert_eq!(p.to_string(), "m=3,1,2;q=1;r=-2");
        assert!("r".parse::<Params>().is_err());
    }

    #[test]
    fn poly2d_third_derivatives() {
        let f = Poly2d { a: 1.0, n: 4 };
        let t = f.tensor(&[c(0.3), c(0.5)]);
        assert_eq!(t.get(1, 0, 0), c(1.0));
        assert_eq!(t.get(1, 1, 1), c(12.0));
        assert_eq!(t.get(0, 0, 0), c(0.0));
        assert!((Poly2d { a: 1.0 / 24.0, n: 3 }.f3(c(7.0)) - c(0.25)).norm() < 1e-15);
    }
}
