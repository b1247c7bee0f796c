//! Fixed-point reals with 70 decimal digits, for checking the closed-form
//! constants far beyond `f64` precision.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

const DIGITS: u32 = 70;

fn scale() -> BigInt {
    BigInt::from(10u32).pow(DIGITS)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn int(n: i64) -> Fixed {
        Fixed(BigInt::from(n) * scale())
    }

    pub fn ratio(num: i64, den: i64) -> Fixed {
        Fixed::int(num) / Fixed::int(den)
    }

    /// The exact binary value of `x`, rounded to the grid.
    pub fn from_f64(x: f64) -> Fixed {
        let exact = BigRational::from_float(x).expect("finite input");
        let scaled = exact * BigRational::from_integer(scale());
        Fixed(scaled.round().to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        let s = scale();
        let sign = if self.0 < BigInt::from(0) { "-" } else { "" };
        let mag = if self.0 < BigInt::from(0) { -self.0.clone() } else { self.0.clone() };
        let whole = &mag / &s;
        let frac = &mag % &s;
        format!("{sign}{whole}.{frac:0>width$}", width = DIGITS as usize).parse().expect("decimal")
    }

    fn is_negligible(&self) -> bool {
        self.0 == BigInt::from(0)
    }

    fn halve(&self) -> Fixed {
        Fixed(&self.0 / 2)
    }

    fn double(&self) -> Fixed {
        Fixed(&self.0 * 2)
    }

    /// `atanh(z) = z + z³/3 + z⁵/5 + …` for `|z| ≤ 1/3`.
    fn atanh(z: &Fixed) -> Fixed {
        let z2 = z.clone() * z.clone();
        let mut power = z.clone();
        let mut sum = z.clone();
        let mut n = 1i64;
        loop {
            power = power * z2.clone();
            n += 2;
            let term = Fixed(&power.0 / n);
            if term.is_negligible() {
                return sum;
            }
            sum = sum + term;
        }
    }

    pub fn ln2() -> Fixed {
        Fixed::atanh(&Fixed::ratio(1, 3)).double()
    }

    /// Natural log: scale into `[1/2, 2]` by powers of two, then
    /// `ln y = 2 atanh((y − 1)/(y + 1))`.
    pub fn ln(&self) -> Fixed {
        assert!(self.0 > BigInt::from(0), "ln of a non-positive number");
        let one = Fixed::int(1);
        let two = Fixed::int(2);
        let half = Fixed::ratio(1, 2);
        let mut y = self.clone();
        let mut k = 0i64;
        while y > two {
            y = y.halve();
            k += 1;
        }
        while y < half {
            y = y.double();
            k -= 1;
        }
        let z = (y.clone() - one.clone()) / (y + one);
        Fixed::atanh(&z).double() + Fixed::ln2() * Fixed::int(k)
    }

    /// Newton iteration on the integer square root of the scaled value.
    pub fn sqrt(&self) -> Fixed {
        assert!(self.0 >= BigInt::from(0), "sqrt of a negative number");
        let target = &self.0 * scale();
        if target == BigInt::from(0) {
            return Fixed(target);
        }
        let mut x = target.clone();
        loop {
            let next = (&x + &target / &x) / 2;
            if next >= x {
                return Fixed(x);
            }
            x = next;
        }
    }

    /// `x^n` for a non-negative integer `n`.
    pub fn powi(&self, n: u32) -> Fixed {
        (0..n).fold(Fixed::int(1), |acc, _| acc * self.clone())
    }

    pub fn abs_diff(&self, other: &Fixed) -> Fixed {
        let d = self.clone() - other.clone();
        if d.0 < BigInt::from(0) {
            -d
        } else {
            d
        }
    }

    /// Compares with an `f64` taken at its exact binary value.
    pub fn cmp_f64(&self, x: f64) -> Ordering {
        self.cmp(&Fixed::from_f64(x))
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 + rhs.0)
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 - rhs.0)
    }
}

impl Mul for Fixed {
    type Output = Fixed;
    fn mul(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 * rhs.0 / scale())
    }
}

impl Div for Fixed {
    type Output = Fixed;
    fn div(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 * scale() / rhs.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

/// `1/log(1/(1 − c))`.
pub fn alpha(c: &Fixed) -> Fixed {
    Fixed::int(1) / -(Fixed::int(1) - c.clone()).ln()
}

/// `1/(1 − √(6/7))`.
pub fn geometric_deficit() -> Fixed {
    Fixed::int(1) / (Fixed::int(1) - Fixed::ratio(6, 7).sqrt())
}

/// `β − Σ_{j≤k} 1/√(A(7/6)^j)` for `k = 0..=steps`, the minimum over `k`.
pub fn lemma_scale_infimum(beta: &Fixed, a: &Fixed, steps: usize) -> Fixed {
    let ratio = Fixed::ratio(7, 6);
    let mut scale_k = a.clone();
    let mut value = beta.clone();
    for _ in 0..=steps {
        value = value - Fixed::int(1) / scale_k.sqrt();
        scale_k = scale_k * ratio.clone();
    }
    value
}

/// `(2α log(7A/6C) ≤ A/8, 4α log(7A/6C) ≤ √A)` at `A = 3000/C⁴`, with the
/// cut term itself.
pub fn side_conditions(c: &Fixed) -> (bool, bool, Fixed) {
    let a = Fixed::int(3000) / c.powi(4);
    let alpha = if *c == Fixed::int(1) { Fixed::int(0) } else { alpha(c) };
    let cut = alpha * (Fixed::int(7) * a.clone() / (Fixed::int(6) * c.clone())).ln();
    let halves = Fixed::int(2) * cut.clone() <= a.clone() / Fixed::int(8);
    let cheap = Fixed::int(4) * cut.clone() <= a.sqrt();
    (halves, cheap, cut)
}

