//! Exact arithmetic in the biquadratic field Q(sqrt2, sqrt3).
//!
//! Every coordinate of the catalog configurations lives in this field, so
//! collinearity, equality and integrality tests on them can be decided
//! without tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT6: f64 = 2.449_489_742_783_178;

/// `a + b*sqrt2 + c*sqrt3 + d*sqrt6` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Square root of a nonnegative rational when it lands in the field.
fn rational_sqrt(x: &BigRational) -> Option<ExactScalar> {
    if x.is_zero() {
        return Some(ExactScalar::zero());
    }
    if x.is_negative() {
        return None;
    }
    // sqrt(p/q) = sqrt(p*q)/q; p*q must be k*s^2 with k in {1,2,3,6}
    let pq = x.numer() * x.denom();
    for (k, slot) in [(1u32, 0usize), (2, 1), (3, 2), (6, 3)] {
        let kk = BigInt::from(k);
        if (&pq % &kk).is_zero() {
            let rest = &pq / &kk;
            let s = rest.sqrt();
            if &s * &s == rest {
                let coeff = BigRational::new(s, x.denom().clone());
                let mut out = ExactScalar::zero();
                match slot {
                    0 => out.a = coeff,
                    1 => out.b = coeff,
                    2 => out.c = coeff,
                    _ => out.d = coeff,
                }
                return Some(out);
            }
        }
    }
    None
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self { a, b: q(0), c: q(0), d: q(0) }
    }

    pub fn sqrt2() -> Self {
        Self { a: q(0), b: q(1), c: q(0), d: q(0) }
    }

    pub fn sqrt3() -> Self {
        Self { a: q(0), b: q(0), c: q(1), d: q(0) }
    }

    pub fn sqrt6() -> Self {
        Self { a: q(0), b: q(0), c: q(0), d: q(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    /// Nearest double; each coefficient is rounded once before combining.
    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.a) + q_to_f64(&self.b) * SQRT2 + q_to_f64(&self.c) * SQRT3 + q_to_f64(&self.d) * SQRT6
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.a.to_integer())
        } else {
            None
        }
    }

    /// Conjugate under sqrt3 -> -sqrt3.
    fn conj3(&self) -> Self {
        Self { a: self.a.clone(), b: self.b.clone(), c: -&self.c, d: -&self.d }
    }

    /// Conjugate under sqrt2 -> -sqrt2.
    fn conj2(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: -&self.d }
    }

    /// Exact sign, decided by repeated squaring of the two quadratic layers.
    pub fn signum(&self) -> i32 {
        // x = P + Q*sqrt3 with P = a + b*sqrt2, Q = c + d*sqrt2
        fn sign_q2(u: &BigRational, v: &BigRational) -> i32 {
            let su = sgn(u);
            let sv = sgn(v);
            if sv == 0 {
                return su;
            }
            if su == 0 || su == sv {
                return if su == 0 { sv } else { su };
            }
            // opposite signs: sign(u) * sign(u^2 - 2 v^2)
            let disc = u * u - q(2) * v * v;
            su * sgn(&disc)
        }
        fn sgn(x: &BigRational) -> i32 {
            match x.cmp(&BigRational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            }
        }
        let sp = sign_q2(&self.a, &self.b);
        let sq = sign_q2(&self.c, &self.d);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return if sp == 0 { sq } else { sp };
        }
        // P^2 - 3 Q^2 lies in Q(sqrt2)
        let p = Self { a: self.a.clone(), b: self.b.clone(), c: q(0), d: q(0) };
        let qq = Self { a: self.c.clone(), b: self.d.clone(), c: q(0), d: q(0) };
        let disc = &(&p * &p) - &(&(&qq * &qq) * &Self::from_int(3));
        sp * sign_q2(&disc.a, &disc.b)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/x = conj3(x) / (x*conj3(x)); the denominator lies in Q(sqrt2)
        let c3 = self.conj3();
        let n1 = self * &c3;
        let c2 = n1.conj2();
        let n2 = &n1 * &c2;
        debug_assert!(n2.is_rational());
        let scale = n2.a.recip();
        let num = &c3 * &c2;
        Some(num.scale(&scale))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        rhs.inv().map(|r| self * &r).ok_or(Error::DivisionByZero)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }

    /// Square root when it exists inside the field. Only rational radicands
    /// are handled; anything else returns `None`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_rational() {
            rational_sqrt(&self.a)
        } else {
            None
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (coeff, radical) in [(&self.a, ""), (&self.b, "sqrt2"), (&self.c, "sqrt3"), (&self.d, "sqrt6")] {
            if coeff.is_zero() {
                continue;
            }
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if wrote {
                f.write_str(if neg { "-" } else { "+" })?;
            } else if neg {
                f.write_str("-")?;
            }
            if radical.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(radical)?;
            } else if mag.numer().is_one() {
                write!(f, "{radical}/{}", mag.denom())?;
            } else {
                write!(f, "{}*{radical}", mag.numer())?;
                if !mag.denom().is_one() {
                    write!(f, "/{}", mag.denom())?;
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Grammar: a signed sum of terms `p`, `p/q`, `p*sqrtK`, `sqrtK/q`,
    /// `p*sqrtK/q` with K in {2,3,6}. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| Error::Parse { location: format!("token '{s}'"), message: msg.to_string() };
        if src.is_empty() {
            return Err(err("empty token"));
        }
        let bytes = src.as_bytes();
        let mut pos = 0;
        let mut out = ExactScalar::zero();

        let read_int = |pos: &mut usize| -> Option<BigInt> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                None
            } else {
                src[start..*pos].parse().ok()
            }
        };

        while pos < bytes.len() {
            let mut sign = 1;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(err("expected '+' or '-' between terms"));
            }
            let mut coeff = BigRational::one();
            let mut radical = 1u32;
            let mut saw_number = false;
            if let Some(n) = read_int(&mut pos) {
                coeff = BigRational::from_integer(n);
                saw_number = true;
                if pos < bytes.len() && bytes[pos] == b'/' && !src[pos + 1..].starts_with("sqrt") {
                    pos += 1;
                    let d = read_int(&mut pos).ok_or_else(|| err("expected denominator"))?;
                    if d.is_zero() {
                        return Err(err("zero denominator"));
                    }
                    coeff /= BigRational::from_integer(d);
                }
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                }
            }
            if src[pos..].starts_with("sqrt") {
                pos += 4;
                radical = match bytes.get(pos) {
                    Some(b'2') => 2,
                    Some(b'3') => 3,
                    Some(b'6') => 6,
                    _ => return Err(err("only sqrt2, sqrt3 and sqrt6 are supported")),
                };
                pos += 1;
                if pos < bytes.len() && bytes[pos] == b'/' {
                    pos += 1;
                    let d = read_int(&mut pos).ok_or_else(|| err("expected denominator"))?;
                    if d.is_zero() {
                        return Err(err("zero denominator"));
                    }
                    coeff /= BigRational::from_integer(d);
                }
            } else if !saw_number {
                return Err(err("expected a number or sqrtK"));
            }
            if pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                return Err(err(&format!("unexpected character '{}'", bytes[pos] as char)));
            }
            if sign < 0 {
                coeff = -coeff;
            }
            match radical {
                1 => out.a += coeff,
                2 => out.b += coeff,
                3 => out.c += coeff,
                _ => out.d += coeff,
            }
        }
        Ok(out)
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b, c: &self.c + &rhs.c, d: &self.d + &rhs.d }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b, c: &self.c - &rhs.c, d: &self.d - &rhs.d }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&o.a, &o.b, &o.c, &o.d);
        // sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3, sqrt3*sqrt6 = 3 sqrt2
        ExactScalar {
            a: a * e + q(2) * b * f + q(3) * c * g + q(6) * d * h,
            b: a * f + b * e + q(3) * (c * h + d * g),
            c: a * g + c * e + q(2) * (b * h + d * f),
            d: a * h + d * e + b * g + c * f,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

/// Panics on division by zero, like integer division.
impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("division by zero in ExactScalar")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self - rhs;
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(rows: &mut [Vec<ExactScalar>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn exact_rank(rows: &[Vec<ExactScalar>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// Basis of `{x : Σ_j rows[i][j] x_j = 0 ∀i}`.
pub fn null_space(rows: &[Vec<ExactScalar>], ncols: usize) -> Vec<Vec<ExactScalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ExactScalar::zero(); ncols];
        v[free] = ExactScalar::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[r][free];
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(s: &str) -> ExactScalar {
        s.parse().unwrap()
    }

    #[test]
    fn parses_tokens() {
        assert_eq!(ex("1/2+sqrt3/2"), &ExactScalar::from_ratio(1, 2) + &(&ExactScalar::sqrt3() * &ExactScalar::from_ratio(1, 2)));
        assert_eq!(ex(" -3*sqrt6 / 4 "), (&ExactScalar::sqrt6() * &ExactScalar::from_ratio(-3, 4)));
        assert_eq!(ex("2sqrt2"), &ExactScalar::sqrt2() * &ExactScalar::from_int(2));
        assert_eq!(ex("-1"), ExactScalar::from_int(-1));
        assert!("0.5".parse::<ExactScalar>().is_err());
        assert!("sqrt5".parse::<ExactScalar>().is_err());
        assert!("1/0".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/2+sqrt3/2", "-3*sqrt6/4", "0", "sqrt2-7/3", "5/2*sqrt3"] {
            let x: ExactScalar = ex(s);
            let back: ExactScalar = x.to_string().parse().unwrap();
            assert_eq!(x, back, "{s}");
        }
    }

    #[test]
    fn radical_products() {
        let r2 = ExactScalar::sqrt2();
        let r3 = ExactScalar::sqrt3();
        let r6 = ExactScalar::sqrt6();
        assert_eq!(&r2 * &r2, ExactScalar::from_int(2));
        assert_eq!(&r2 * &r3, r6);
        assert_eq!(&r2 * &r6, &r3 * &ExactScalar::from_int(2));
        assert_eq!(&r3 * &r6, &r2 * &ExactScalar::from_int(3));
        assert_eq!(&r6 * &r6, ExactScalar::from_int(6));
    }

    #[test]
    fn sign_of_near_cancellations() {
        // 1393^2 = 1940449 < 2 * 985^2 = 1940450
        let x = ex("1393-985*sqrt2");
        assert_eq!(x.signum(), -1);
        assert_eq!((-&x).signum(), 1);
        assert_eq!(ex("1393-985*sqrt2").to_f64() < 0.0, true);
        // sqrt2 + sqrt3 - sqrt6 - 0.5 ~ 0.2969
        assert_eq!(ex("sqrt2+sqrt3-sqrt6-1/2").signum(), 1);
        assert_eq!(ex("sqrt6-sqrt2-sqrt3").signum(), -1);
        assert_eq!(ExactScalar::zero().signum(), 0);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(ExactScalar::from_int(2).sqrt(), Some(ExactScalar::sqrt2()));
        assert_eq!(ExactScalar::from_ratio(3, 2).sqrt(), Some(&ExactScalar::sqrt6() * &ExactScalar::from_ratio(1, 2)));
        assert_eq!(ExactScalar::from_ratio(1, 3).sqrt(), Some(&ExactScalar::sqrt3() * &ExactScalar::from_ratio(1, 3)));
        assert_eq!(ExactScalar::from_int(9).sqrt(), Some(ExactScalar::from_int(3)));
        assert_eq!(ExactScalar::from_int(5).sqrt(), None);
        assert_eq!(ExactScalar::from_int(-4).sqrt(), None);
        assert_eq!(ex("1+sqrt2").sqrt(), None);
    }

    fn small() -> impl Strategy<Value = ExactScalar> {
        prop::array::uniform4((-20i64..20, 1i64..6)).prop_map(|t| {
            ExactScalar::new(
                BigRational::new(t[0].0.into(), t[0].1.into()),
                BigRational::new(t[1].0.into(), t[1].1.into()),
                BigRational::new(t[2].0.into(), t[2].1.into()),
                BigRational::new(t[3].0.into(), t[3].1.into()),
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in small(), y in small(), z in small()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }

        #[test]
        fn float_image_is_a_homomorphism(x in small(), y in small()) {
            let p = (&x * &y).to_f64();
            let scale = 1.0 + x.to_f64().abs() * y.to_f64().abs() + p.abs();
            prop_assert!((p - x.to_f64() * y.to_f64()).abs() < 1e-9 * scale * 100.0);
            let s = x.signum();
            let f = x.to_f64();
            if f.abs() > 1e-9 { prop_assert_eq!(s, f.signum() as i32); }
        }
    }

    #[test]
    fn null_space_of_two_mirrors() {
        let rows = vec![
            vec![ExactScalar::zero(), ExactScalar::one(), ExactScalar::from_int(-1), ExactScalar::zero()],
            vec![ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero(), ExactScalar::one()],
        ];
        assert_eq!(exact_rank(&rows), 2);
        let ns = null_space(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = r.iter().zip(v).fold(ExactScalar::zero(), |acc, (a, b)| &acc + &(a * b));
                assert!(dot.is_zero());
            }
        }
    }
}
