//! Exact Gaussian rationals `a + b·i`.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use crate::rational::{ParseRationalError, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { re: Rational::ZERO, im: Rational::ZERO };
    pub const ONE: Scalar = Scalar { re: Rational::ONE, im: Rational::ZERO };
    pub const I: Scalar = Scalar { re: Rational::ZERO, im: Rational::ONE };

    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar { re, im: Rational::ZERO }
    }

    pub fn imag(im: Rational) -> Self {
        Scalar { re: Rational::ZERO, im }
    }

    pub fn int(n: i64) -> Self {
        Scalar::real(Rational::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::real(Rational::new(n, d))
    }

    /// `n·i`
    pub fn i_times(n: i64) -> Self {
        Scalar::imag(Rational::from_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// `|s|² = s·conj(s)`, always real.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "reciprocal of zero scalar");
        Scalar { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Scalar { re: &self.re * r, im: &self.im * r }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `i·self`
    pub fn mul_i(&self) -> Self {
        Scalar { re: -&self.im, im: self.re.clone() }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::real(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        if self.im.is_zero() {
            return rhs.scale(&self.re);
        }
        if rhs.im.is_zero() {
            return self.scale(&rhs.re);
        }
        Scalar {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        if rhs.im.is_zero() {
            let r = rhs.re.recip();
            return self.scale(&r);
        }
        self * &rhs.recip()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Scalar {
    /// `re+imi` / `re-imi` with both parts as `p/q`, e.g. `1/2-3/4i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Scalar {
    /// Short human form: `3`, `-1/2`, `2i`, `-i`, `1/2-3/4i`.
    pub fn compact(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => self.re.compact(),
            (true, false) => match self.im.compact().as_str() {
                "1" => String::from("i"),
                "-1" => String::from("-i"),
                m => format!("{}i", m),
            },
            _ => {
                let im = self.im.abs().compact();
                let im = if im == "1" { String::new() } else { im };
                let sign = if self.im.is_negative() { '-' } else { '+' };
                format!("{}{}{}i", self.re.compact(), sign, im)
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ParseRationalError;

    /// Parses the `Display` form (`p/q+p/qi`); a bare rational is read as real.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar::real(s.parse()?));
        };
        // the separator is the last sign that is not at position 0
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| ParseRationalError(String::from(s)))?;
        let re: Rational = body[..split].parse()?;
        let im_str = &body[split..];
        let im: Rational = im_str.strip_prefix('+').unwrap_or(im_str).parse()?;
        Ok(Scalar { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn field_ops() {
        let a = Scalar::new(Rational::new(1, 2), Rational::from_int(3));
        let b = Scalar::new(Rational::from_int(-2), Rational::new(1, 3));
        let q = &(&a * &b) / &b;
        assert_eq!(q, a);
        assert_eq!(&Scalar::I * &Scalar::I, Scalar::int(-1));
        assert!((&a * &a.conj()).is_real());
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn display_roundtrip() {
        let a = Scalar::new(Rational::new(1, 2), Rational::new(-3, 4));
        assert_eq!(a.to_string(), "1/2-3/4i");
        assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
        let b = Scalar::new(Rational::new(-1, 2), Rational::ZERO);
        assert_eq!(b.to_string(), "-1/2+0/1i");
        assert_eq!(b.to_string().parse::<Scalar>().unwrap(), b);
        assert_eq!("-7/3".parse::<Scalar>().unwrap(), Scalar::frac(-7, 3));
    }
}
