//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rat {
    frac(1, 2)
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"1.25"`.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((whole, fraction)) = text.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        let scale = BigInt::from(10).pow(fraction.len() as u32);
        let digits: BigInt = fraction.parse().ok()?;
        let magnitude = Rat::from_integer(whole.abs()) + Rat::new(digits, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    let value: Rat = text.parse().ok()?;
    if value.denom().is_zero() {
        return None;
    }
    Some(value)
}

/// Lowest-terms `p/q`, or `p` for integers.
pub fn fmt_rat(value: &Rat) -> String {
    value.to_string()
}

pub fn to_f64(value: &Rat) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Six-decimal approximation used in reports.
pub fn approx6(value: &Rat) -> String {
    format!("{:.6}", to_f64(value))
}

/// Smallest integer `k` with `k >= value`; `value` must be nonnegative.
pub fn ceil_usize(value: &Rat) -> usize {
    let (q, r) = value.numer().div_rem(value.denom());
    let q = if r.is_zero() { q } else { q + BigInt::one() };
    q.to_usize().expect("ceiling fits in usize")
}

pub fn is_nonnegative(value: &Rat) -> bool {
    !value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rat("3/6"), Some(frac(1, 2)));
        assert_eq!(parse_rat("-7"), Some(int(-7)));
        assert_eq!(parse_rat("1.25"), Some(frac(5, 4)));
        assert_eq!(parse_rat("-0.5"), Some(frac(-1, 2)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("abc"), None);
        assert_eq!(parse_rat(""), None);
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(fmt_rat(&frac(4, 6)), "2/3");
        assert_eq!(fmt_rat(&frac(6, 3)), "2");
    }

    #[test]
    fn ceiling() {
        assert_eq!(ceil_usize(&frac(6, 3)), 2);
        assert_eq!(ceil_usize(&frac(7, 3)), 3);
        assert_eq!(ceil_usize(&int(0)), 0);
    }
}
