//! Exact rational values for rubric scores and survey aggregates.
//!
//! Medians of tenths or halves are always representable as fractions with a
//! small power-of-two-and-five denominator, so they print as finite decimals
//! without any binary floating point in between.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

/// A reduced fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };

    /// Builds a reduced fraction. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den).max(1);
        Ratio { num: num / g as i64, den: den / g }
    }

    pub fn integer(n: i64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// Midpoint of two values, exact.
    pub fn midpoint(a: Ratio, b: Ratio) -> Ratio {
        let den = a.den * b.den;
        let num = a.num * b.den as i64 + b.num * a.den as i64;
        Ratio::new(num, den * 2)
    }

    /// Lossy conversion for display in contexts that need a float (JSON).
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal rendering, or `None` when the expansion does not terminate.
    pub fn to_decimal(&self) -> Option<String> {
        let mut d = self.den;
        while d.is_multiple_of(2) {
            d /= 2;
        }
        while d.is_multiple_of(5) {
            d /= 5;
        }
        if d != 1 {
            return None;
        }
        let mut out = String::new();
        if self.num < 0 {
            out.push('-');
        }
        let n = self.num.unsigned_abs();
        let int = n / self.den;
        let mut rem = n % self.den;
        out.push_str(&alloc::format!("{int}"));
        if rem != 0 {
            out.push('.');
            while rem != 0 {
                rem *= 10;
                let digit = rem / self.den;
                rem %= self.den;
                out.push(char::from(b'0' + digit as u8));
            }
        }
        Some(out)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal() {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.num, self.den),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a decimal number: {0:?}")]
pub struct ParseRatioError(pub String);

impl FromStr for Ratio {
    type Err = ParseRatioError;

    /// Parses plain decimals such as `4`, `0.7`, `-2.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatioError(String::from(s));
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int, frac) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if body.contains('.') && (frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit())) {
            return Err(err());
        }
        if int.len() + frac.len() > 17 {
            return Err(err());
        }
        let mut num: i64 = 0;
        for b in int.bytes().chain(frac.bytes()) {
            num = num * 10 + i64::from(b - b'0');
        }
        let den = 10u64.pow(frac.len() as u32);
        Ok(Ratio::new(if neg { -num } else { num }, den))
    }
}
