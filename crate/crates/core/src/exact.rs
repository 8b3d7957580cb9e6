//! Exact comparisons of expressions `a + c·log2(p/q)`.
//!
//! Every comparison reduces to an integer inequality between powers, so no
//! floating point is involved in any decision.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Pow;

/// The real number `offset + coeff · log2(num / den)`.
#[derive(Clone, Copy, Debug)]
pub struct LogExpr {
    pub offset: i64,
    pub coeff: u32,
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl LogExpr {
    /// `offset + coeff · log2(num / den)`; `num` and `den` must be positive.
    pub fn new(offset: i64, coeff: u32, num: u64, den: u64) -> Self {
        assert!(num > 0 && den > 0, "log argument must be positive");
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if coeff == 0 || num == den {
            return Self {
                offset,
                coeff: 0,
                num: 1,
                den: 1,
            };
        }
        Self {
            offset,
            coeff,
            num,
            den,
        }
    }

    pub fn integer(v: i64) -> Self {
        Self::new(v, 0, 1, 1)
    }

    /// `2^shift · base^coeff` as a big integer.
    fn scaled_power(base: u64, coeff: u32, shift: u64) -> BigUint {
        Pow::pow(BigUint::from(base), coeff) << shift
    }

    /// Largest `j ≥ 0` with `2^j · den^c ≤ num^c`, assuming `num ≥ den`.
    fn floor_log_ratio(num: u64, den: u64, c: u32) -> i64 {
        let top = Pow::pow(BigUint::from(num), c);
        let bottom = Pow::pow(BigUint::from(den), c);
        // bits(top) - bits(bottom) over-estimates by at most one.
        let mut j = top.bits().saturating_sub(bottom.bits());
        while j > 0 && (&bottom << j) > top {
            j -= 1;
        }
        j as i64
    }

    /// Smallest `j ≥ 0` with `2^j · den^c ≥ num^c`, assuming `num ≥ den`.
    fn ceil_log_ratio(num: u64, den: u64, c: u32) -> i64 {
        let f = Self::floor_log_ratio(num, den, c);
        let top = Pow::pow(BigUint::from(num), c);
        let bottom = Pow::pow(BigUint::from(den), c);
        if (bottom << f as u64) == top {
            f
        } else {
            f + 1
        }
    }

    pub fn floor(&self) -> i64 {
        if self.coeff == 0 {
            self.offset
        } else if self.num >= self.den {
            self.offset + Self::floor_log_ratio(self.num, self.den, self.coeff)
        } else {
            self.offset - Self::ceil_log_ratio(self.den, self.num, self.coeff)
        }
    }

    pub fn ceil(&self) -> i64 {
        if self.coeff == 0 {
            self.offset
        } else if self.num >= self.den {
            self.offset + Self::ceil_log_ratio(self.num, self.den, self.coeff)
        } else {
            self.offset - Self::floor_log_ratio(self.den, self.num, self.coeff)
        }
    }

    /// Whether the value is an integer.
    pub fn is_integer(&self) -> bool {
        self.floor() == self.ceil()
    }

    /// Approximate value, for display only.
    pub fn approx(&self) -> f64 {
        self.offset as f64 + self.coeff as f64 * log2_approx(self.num as f64 / self.den as f64)
    }
}

impl PartialEq for LogExpr {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LogExpr {}

impl PartialOrd for LogExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogExpr {
    /// `a + c·log2(p/q)` against `a' + c'·log2(p'/q')` compares
    /// `2^a · p^c · q'^c'` with `2^a' · p'^c' · q^c`.
    fn cmp(&self, other: &Self) -> Ordering {
        let shift = self.offset.min(other.offset);
        let lhs = Self::scaled_power(self.num, self.coeff, (self.offset - shift) as u64)
            * Pow::pow(BigUint::from(other.den), other.coeff);
        let rhs = Self::scaled_power(other.num, other.coeff, (other.offset - shift) as u64)
            * Pow::pow(BigUint::from(self.den), self.coeff);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for LogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff == 0 {
            return write!(f, "{}", self.offset);
        }
        write!(
            f,
            "{} + {}·log2({}/{})",
            self.offset, self.coeff, self.num, self.den
        )
    }
}

/// `log2(x)` for `x > 0` by normalisation and repeated squaring.
pub fn log2_approx(mut x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NAN;
    }
    let mut int = 0i32;
    while x >= 2.0 {
        x /= 2.0;
        int += 1;
    }
    while x < 1.0 {
        x *= 2.0;
        int -= 1;
    }
    let mut frac = 0.0;
    let mut bit = 0.5;
    for _ in 0..52 {
        x *= x;
        if x >= 2.0 {
            x /= 2.0;
            frac += bit;
        }
        bit /= 2.0;
    }
    int as f64 + frac
}
