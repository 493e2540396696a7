//! Rational functions in canonical form: coprime numerator and denominator,
//! denominator monic. Structural equality is therefore equality of functions.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::poly::Poly;
use crate::scalar::{Conj, Field};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFn<F> {
    /// `None` when `den` is zero.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFn::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.lead();
        if !lead.is_one() {
            let inv = F::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Some(RatFn { num, den })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFn::constant(F::one())
    }

    /// The coordinate `z`.
    pub fn var() -> Self {
        RatFn::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value when the function is constant.
    pub fn as_constant(&self) -> Option<F> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Option<Self> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 {
            self.inv().expect("negative power of the zero function")
        } else {
            self.clone()
        };
        let k = e.unsigned_abs() as u32;
        RatFn { num: base.num.pow(k), den: base.den.pow(k) }
    }

    pub fn scale(&self, k: &F) -> Self {
        RatFn::new(self.num.scale(k), self.den.clone()).expect("nonzero denominator")
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// Order of vanishing at a finite point (negative for poles).
    pub fn order_at_finite(&self, c: &F) -> i64 {
        assert!(!self.is_zero(), "order of the zero function");
        self.num.root_multiplicity(c) as i64 - self.den.root_multiplicity(c) as i64
    }

    /// `deg(den) − deg(num)`.
    pub fn order_at_infinity(&self) -> i64 {
        assert!(!self.is_zero(), "order of the zero function");
        self.den.degree().unwrap_or(0) as i64 - self.num.degree().unwrap_or(0) as i64
    }

    /// Substitutes `arg` for the coordinate: `self(arg(w))`.
    pub fn compose(&self, arg: &RatFn<F>) -> Option<Self> {
        let eval_poly = |p: &Poly<F>| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RatFn::zero(), |acc, c| &(&acc * arg) + &RatFn::constant(c.clone()))
        };
        let n = eval_poly(&self.num);
        let d = eval_poly(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(&n / &d)
    }
}

impl<F: Field + Conj> RatFn<F> {
    /// Coefficient-wise conjugation: the pullback by the standard real structure.
    pub fn conj(&self) -> Self {
        RatFn { num: self.num.conj(), den: self.den.conj() }
    }

    /// Fixed by conjugation. With a monic denominator this is equivalent to
    /// every coefficient being real.
    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }
}

impl<F: Field> Add for &RatFn<F> {
    type Output = RatFn<F>;
    fn add(self, rhs: &RatFn<F>) -> RatFn<F> {
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl<F: Field> Sub for &RatFn<F> {
    type Output = RatFn<F>;
    fn sub(self, rhs: &RatFn<F>) -> RatFn<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Mul for &RatFn<F> {
    type Output = RatFn<F>;
    fn mul(self, rhs: &RatFn<F>) -> RatFn<F> {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl<F: Field> Div for &RatFn<F> {
    type Output = RatFn<F>;
    /// Panics on division by the zero function.
    fn div(self, rhs: &RatFn<F>) -> RatFn<F> {
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num).expect("division by zero function")
    }
}

impl<F: Field> Neg for &RatFn<F> {
    type Output = RatFn<F>;
    fn neg(self) -> RatFn<F> {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for RatFn<F> {
            type Output = RatFn<F>;
            fn $m(self, rhs: RatFn<F>) -> RatFn<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<F: Field> Neg for RatFn<F> {
    type Output = RatFn<F>;
    fn neg(self) -> RatFn<F> {
        -&self
    }
}

impl<F: Field> From<Poly<F>> for RatFn<F> {
    fn from(p: Poly<F>) -> Self {
        RatFn::from_poly(p)
    }
}
