//! Exact scalars: the field abstraction shared by polynomials and rational
//! functions, plus Gaussian numbers `a + b·i` over any exact real field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Arithmetic a coefficient type must support. Division by zero is a caller
/// error and may panic, as it does for `num_rational::Ratio`.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// The image of the natural number `n`.
    fn from_nat(n: u64) -> Self {
        let mut acc = Self::zero();
        let mut base = Self::one();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc + base.clone();
            }
            base = base.clone() + base;
            k >>= 1;
        }
        acc
    }
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Complex conjugation on a coefficient field. On real fields it is the
/// identity.
pub trait Conj: Sized {
    fn conj(&self) -> Self;
    fn is_real(&self) -> bool;
}

impl<T: Clone + Integer> Conj for Ratio<T> {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_real(&self) -> bool {
        true
    }
}

/// Sign of an exact real scalar as -1, 0 or +1.
pub fn rational_sign<T: Signed>(x: &T) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `a + b·i` with `a`, `b` in an exact real field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: Field> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }

    pub fn i() -> Self {
        Gaussian { re: T::zero(), im: T::one() }
    }

    /// `x · conj(x) = a² + b²`.
    pub fn norm(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Gaussian {
            re: self.re.clone() / n.clone(),
            im: -self.im.clone() / n,
        })
    }

    pub fn scale(&self, k: &T) -> Self {
        Gaussian {
            re: self.re.clone() * k.clone(),
            im: self.im.clone() * k.clone(),
        }
    }
}

impl<T: Field> Conj for Gaussian<T> {
    fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl<T: Field> Zero for Gaussian<T> {
    fn zero() -> Self {
        Gaussian { re: T::zero(), im: T::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: Field> One for Gaussian<T> {
    fn one() -> Self {
        Gaussian { re: T::one(), im: T::zero() }
    }
}

impl<T: Field> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gaussian { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<T: Field> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gaussian { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<T: Field> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gaussian {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<T: Field> Div for Gaussian<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero Gaussian number");
        self * inv
    }
}

impl<T: Field> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian { re: -self.re, im: -self.im }
    }
}

impl<T: Field> From<T> for Gaussian<T> {
    fn from(re: T) -> Self {
        Gaussian::real(re)
    }
}

/// Point order on Gaussian numbers: by real part, then by `|im|`, with the
/// upper half-plane member of a conjugate pair first. Real numbers precede
/// non-real numbers of the same real part, and conjugate pairs are adjacent.
pub fn point_cmp<T: Field + Signed + Ord>(a: &Gaussian<T>, b: &Gaussian<T>) -> Ordering {
    a.re.cmp(&b.re)
        .then_with(|| a.im.abs().cmp(&b.im.abs()))
        .then_with(|| b.im.cmp(&a.im))
}

impl<T: Field + Signed + fmt::Display> fmt::Display for Gaussian<T> {
    /// Canonical literal: `a`, `b*i`, `a + b*i`, `a - b*i` with `1*i` written `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_abs = self.im.abs();
        let im_text = if im_abs.is_one() { "i".to_string() } else { format!("{im_abs}*i") };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_negative() {
                    write!(f, "-{im_text}")
                } else {
                    write!(f, "{im_text}")
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{} {sign} {im_text}", self.re)
            }
        }
    }
}

/// Integer floor of an exact rational.
pub fn floor_rational(x: &Ratio<BigInt>) -> BigInt {
    x.floor().to_integer()
}
