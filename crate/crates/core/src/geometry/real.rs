//! Scalars that stay exact as long as the computation allows it.
//!
//! Polyhedral data (vertex coordinates, l₁/l_∞ and gauge norms) lives in
//! [`Q`]. The Euclidean norm of a rational vector is the square root of a
//! rational and is kept symbolically as [`Real::Sqrt`], so ratios such as
//! `√(81/256) = 9/16` come out exact. Anything else falls back to `f64`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Rational `num/den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 gives up on very large parts; fall back to a scaled division.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// The exact rational value of a finite float.
pub fn q_from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `√x` as a rational when `x` is the square of one.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    let n = exact_sqrt_int(x.numer())?;
    let d = exact_sqrt_int(x.denom())?;
    Some(Q::new(n, d))
}

/// Formats a float with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{:.16e}", x)
    }
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug)]
pub enum Real {
    Exact(Q),
    /// Non-negative square root of a non-negative, non-square rational.
    Sqrt(Q),
    Float(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(Q::zero())
    }

    pub fn one() -> Self {
        Real::Exact(Q::one())
    }

    pub fn from_f64(x: f64) -> Self {
        Real::Float(x)
    }

    /// `√x` for `x ≥ 0`, exact when `x` is a rational square.
    pub fn sqrt_of(x: Q) -> Self {
        assert!(!x.is_negative(), "square root of a negative rational");
        match exact_sqrt(&x) {
            Some(r) => Real::Exact(r),
            None => Real::Sqrt(x),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Real::Float(_))
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Real::Exact(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(x) => q_to_f64(x),
            Real::Sqrt(x) => q_to_f64(x).sqrt(),
            Real::Float(x) => *x,
        }
    }

    fn sign(&self) -> Ordering {
        match self {
            Real::Exact(x) => x.cmp(&Q::zero()),
            Real::Sqrt(x) => x.cmp(&Q::zero()),
            Real::Float(x) => x.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    /// Signed square, exact for the exact variants.
    fn signed_square(&self) -> Option<Q> {
        match self {
            Real::Exact(x) => Some(if x.is_negative() { -(x * x) } else { x * x }),
            Real::Sqrt(x) => Some(x.clone()),
            Real::Float(_) => None,
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(x) => Real::Exact(x.abs()),
            Real::Sqrt(x) => Real::Sqrt(x.clone()),
            Real::Float(x) => Real::Float(x.abs()),
        }
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(x) => Real::Exact(-x),
            Real::Sqrt(_) => Real::Float(-self.to_f64()),
            Real::Float(x) => Real::Float(-x),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            (Real::Sqrt(a), Real::Sqrt(b)) => Real::sqrt_of(a * b),
            (Real::Exact(a), Real::Sqrt(s)) | (Real::Sqrt(s), Real::Exact(a)) => {
                if a.is_negative() {
                    Real::Float(q_to_f64(a) * q_to_f64(s).sqrt())
                } else {
                    Real::sqrt_of(a * a * s)
                }
            }
            _ => Real::Float(self.to_f64() * other.to_f64()),
        }
    }

    /// `self / other`; `None` when `other` is zero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        if other.sign() == Ordering::Equal {
            return None;
        }
        Some(match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a / b),
            (Real::Sqrt(a), Real::Sqrt(b)) => Real::sqrt_of(a / b),
            (Real::Sqrt(s), Real::Exact(b)) if b.is_positive() => Real::sqrt_of(s / (b * b)),
            (Real::Exact(a), Real::Sqrt(s)) if !a.is_negative() => Real::sqrt_of(a * a / s),
            _ => Real::Float(self.to_f64() / other.to_f64()),
        })
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            _ => Real::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    /// Exact comparison whenever both sides are exact; float otherwise.
    pub fn cmp_real(&self, other: &Real) -> Ordering {
        if self.is_exact() && other.is_exact() {
            let (sa, sb) = (self.sign(), other.sign());
            if sa != sb {
                return sa.cmp(&sb);
            }
            // Same sign: compare signed squares (monotone on each half-line).
            let a = self.signed_square().expect("exact");
            let b = other.signed_square().expect("exact");
            return a.cmp(&b);
        }
        self.to_f64()
            .partial_cmp(&other.to_f64())
            .unwrap_or(Ordering::Equal)
    }

    pub fn max(self, other: Real) -> Real {
        if other.cmp_real(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Exact equality for exact values; bitwise for floats.
    pub fn exactly_equals(&self, other: &Real) -> bool {
        self.is_exact() && other.is_exact() && self.cmp_real(other) == Ordering::Equal
    }

    /// `|self - other| ≤ tol`, or exact equality when both are exact.
    pub fn approx_eq(&self, other: &Real, tol: f64) -> bool {
        if self.is_exact() && other.is_exact() {
            return self.cmp_real(other) == Ordering::Equal;
        }
        (self.to_f64() - other.to_f64()).abs() <= tol
    }

    pub fn render(&self) -> String {
        match self {
            Real::Exact(x) => format_q(x),
            Real::Sqrt(x) => format!("sqrt({})", format_q(x)),
            Real::Float(x) => format_f64(*x),
        }
    }
}

impl From<Q> for Real {
    fn from(x: Q) -> Self {
        Real::Exact(x)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::Float(x)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.cmp_real(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        Some(self.cmp_real(other))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses `"num/den"`, an integer, a decimal (`"1.25"`, `"-3e-2"`) into an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Q::from_integer(n));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{}{}", int_part, frac_part).parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Q::from_integer(digits);
    if scale >= 0 {
        value *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_normalizes_perfect_squares() {
        assert_eq!(Real::sqrt_of(q(81, 256)).as_rational(), Some(&q(9, 16)));
        assert!(matches!(Real::sqrt_of(qi(18)), Real::Sqrt(_)));
    }

    #[test]
    fn ratio_of_square_roots_is_exact() {
        let a = Real::sqrt_of(q(1, 2));
        let b = Real::sqrt_of(qi(2));
        assert_eq!(a.div(&b).unwrap().as_rational(), Some(&q(1, 2)));
    }

    #[test]
    fn exact_ordering_mixes_sqrt_and_rational() {
        let s2 = Real::sqrt_of(qi(2));
        assert!(s2 > Real::Exact(q(141, 100)));
        assert!(s2 < Real::Exact(q(142, 100)));
        assert!(Real::Exact(qi(-2)) < s2);
    }

    #[test]
    fn parses_rational_and_decimal_strings() {
        assert_eq!(parse_q("-3/4"), Some(q(-3, 4)));
        assert_eq!(parse_q("1.25"), Some(q(5, 4)));
        assert_eq!(parse_q("2e-1"), Some(q(1, 5)));
        assert_eq!(parse_q("7"), Some(qi(7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("abc"), None);
    }

    #[test]
    fn renders_seventeen_significant_digits() {
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(Real::Exact(q(9, 16)).render(), "9/16");
        assert_eq!(Real::sqrt_of(qi(342)).render(), "sqrt(342)");
    }
}
