//! Exact rational helpers: parsing, printing, and continued-fraction rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational used for every coefficient in the library.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q`, an integer, or a decimal literal (optionally with exponent)
/// into an exact rational. Decimals are read exactly, not through `f64`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Rational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{whole}{frac}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * ten.pow(scale as u32))
    } else {
        Rational::new(num, ten.pow((-scale) as u32))
    };
    Ok(value)
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Shortest decimal rendering: exact when the expansion terminates,
/// otherwise 17 significant digits.
pub fn format_decimal(x: &Rational) -> String {
    if x.denom().is_one() {
        return x.numer().to_string();
    }
    let mut d = x.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut e2, mut e5) = (0u32, 0u32);
    while d.is_multiple_of(&two) {
        d /= &two;
        e2 += 1;
    }
    while d.is_multiple_of(&five) {
        d /= &five;
        e5 += 1;
    }
    if !d.is_one() {
        let f = x.to_f64().unwrap_or(f64::NAN);
        return format!("{f:.16e}");
    }
    let scale = e2.max(e5);
    let scaled = (x * Rational::from_integer(BigInt::from(10).pow(scale))).to_integer();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let scale = scale as usize;
    let padded = if digits.len() <= scale {
        format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (w, f) = padded.split_at(padded.len() - scale);
    format!("{}{}.{}", if neg { "-" } else { "" }, w, f)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

/// Best rational approximation of `x` with denominator at most `cap`,
/// taken among convergents and semiconvergents of its continued fraction.
pub fn best_approximation(x: &Rational, cap: u64) -> Rational {
    let cap = BigInt::from(cap.max(1));
    if x.denom() <= &cap {
        return x.clone();
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut r = x.clone();
    loop {
        let a = r.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > cap {
            let t = (&cap - &q0) / &q1;
            let semi = Rational::new(&t * &p1 + &p0, &t * &q1 + &q0);
            let conv = Rational::new(p1, q1);
            let ds = (&semi - x).abs();
            let dc = (&conv - x).abs();
            return if ds < dc { semi } else { conv };
        }
        let frac = &r - Rational::from_integer(a);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if frac.is_zero() {
            return Rational::new(p1, q1);
        }
        r = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("1/32").unwrap(), ratio(1, 32));
        assert_eq!(parse_rational("-7/96").unwrap(), ratio(-7, 96));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational("0.03125").unwrap(), ratio(1, 32));
        assert_eq!(parse_rational("-1.5e-3").unwrap(), ratio(-3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), int(200));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&ratio(1, 32)), "0.03125");
        assert_eq!(format_decimal(&ratio(-1, 2)), "-0.5");
        assert_eq!(format_decimal(&int(-3)), "-3");
        assert_eq!(format_decimal(&ratio(12, 125)), "0.096");
        assert_eq!(format_decimal(&ratio(251, 20)), "12.55");
        let third = format_decimal(&ratio(1, 3));
        assert_eq!(third, "3.3333333333333331e-1");
        assert_eq!(parse_rational(&third).unwrap().to_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn continued_fraction_rounding() {
        let x = parse_rational("0.33333333").unwrap();
        assert_eq!(best_approximation(&x, 100), ratio(1, 3));
        assert_eq!(best_approximation(&parse_rational("2.6").unwrap(), 1), int(3));
        assert_eq!(best_approximation(&parse_rational("-2.4").unwrap(), 1), int(-2));
        let pi = from_f64(std::f64::consts::PI).unwrap();
        assert_eq!(best_approximation(&pi, 10), ratio(22, 7));
        assert_eq!(best_approximation(&pi, 1000), ratio(355, 113));
        assert_eq!(best_approximation(&ratio(3, 7), 7), ratio(3, 7));
    }
}
