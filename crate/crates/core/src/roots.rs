//! Roots in `Q(i)` of polynomials over `Q(i)`.
//!
//! Work happens on a real square-free primitive integer polynomial `R`
//! (`p` itself when real, `p·p̄` otherwise): rational roots by the rational
//! root test, then conjugate pairs of Gaussian roots as positive-definite
//! integer quadratic factors `kz² + lz + m`. Anything left over has an
//! irreducible factor of degree ≥ 2 over `Q(i)`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::point_cmp;
use crate::{GaussianRational, Polynomial, Rational};

/// All roots of `p` in `Q(i)` with multiplicities, in point order.
pub fn poly_gaussian_roots(p: &Polynomial) -> Result<Vec<(GaussianRational, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let degree = p.degree().unwrap_or(0);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let real = if p.is_real() { p.clone() } else { p * &p.conj() };
    let rational: Poly<Rational> = real.map(|c| c.re.clone());
    let candidates = integer_poly_roots(primitive(&rational.square_free_part()))?;

    let mut roots: Vec<(GaussianRational, u32)> = candidates
        .into_iter()
        .filter_map(|r| {
            let m = p.root_multiplicity(&r);
            (m > 0).then_some((r, m))
        })
        .collect();
    roots.sort_by(|a, b| point_cmp(&a.0, &b.0));
    let total: usize = roots.iter().map(|(_, m)| *m as usize).sum();
    if total != degree {
        return Err(Error::NonGaussianRoots);
    }
    Ok(roots)
}

/// Clears denominators and content; leading coefficient positive.
fn primitive(p: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
    let scale = content * sign;
    for c in &mut ints {
        *c = &*c / &scale;
    }
    ints
}

fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `d` divides `x`, with `0 | x` only for `x = 0`.
fn divides(d: &BigInt, x: &BigInt) -> bool {
    if d.is_zero() {
        x.is_zero()
    } else {
        (x % d).is_zero()
    }
}

/// Exact quotient in `Z[z]`, or `None` if `b` does not divide `a`.
fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    let lead = &b[db];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let (q, r) = rem[k + db].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, c) in b.iter().enumerate() {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

/// Positive divisors of a nonzero integer.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.magnitude();
    let factors: Vec<(BigUint, usize)> = match n.to_u128() {
        Some(small) => num_prime::nt_funcs::factorize128(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect(),
        None => num_prime::nt_funcs::factorize(n.clone()).into_iter().collect(),
    };
    let mut out = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e + 1));
        for d in &out {
            let mut acc = d.clone();
            for _ in 0..=e {
                next.push(acc.clone());
                acc *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out.into_iter().map(|d| BigInt::from_biguint(Sign::Plus, d)).collect()
}

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

fn gauss(re: Rational, im: Rational) -> GaussianRational {
    GaussianRational::new(re, im)
}

/// Roots of a square-free primitive integer polynomial, all of which must
/// lie in `Q(i)`.
fn integer_poly_roots(mut r: Vec<BigInt>) -> Result<Vec<GaussianRational>> {
    let mut roots = Vec::new();
    if r.len() > 1 && r[0].is_zero() {
        roots.push(GaussianRational::zero());
        r.remove(0);
    }
    if r.len() > 1 {
        let r1 = eval(&r, &BigInt::one());
        let rm1 = eval(&r, &-BigInt::one());
        let lead = r.last().unwrap().clone();
        let constant = r[0].clone();
        'search: for v in divisors(&lead) {
            for u0 in divisors(&constant) {
                for u in [u0.clone(), -u0] {
                    if !u.gcd(&v).is_one()
                        || !divides(&(&v - &u), &r1)
                        || !divides(&(&v + &u), &rm1)
                    {
                        continue;
                    }
                    if let Some(q) = div_exact(&r, &[-u.clone(), v.clone()]) {
                        roots.push(GaussianRational::real(Rational::new(u, v.clone())));
                        r = q;
                        if r.len() == 1 {
                            break 'search;
                        }
                    }
                }
            }
        }
    }

    while r.len() > 1 {
        let degree = r.len() - 1;
        if degree % 2 == 1 {
            return Err(Error::NonGaussianRoots);
        }
        let factor = if degree == 2 {
            vec![r[0].clone(), r[1].clone(), r[2].clone()]
        } else {
            quadratic_factor(&r).ok_or(Error::NonGaussianRoots)?
        };
        let (m, l, k) = (&factor[0], &factor[1], &factor[2]);
        let disc = BigInt::from(4) * k * m - l * l;
        let s = perfect_sqrt(&disc).filter(|s| !s.is_zero()).ok_or(Error::NonGaussianRoots)?;
        let two_k = BigInt::from(2) * k;
        let re = Rational::new(-l.clone(), two_k.clone());
        let im = Rational::new(s, two_k);
        roots.push(gauss(re.clone(), im.clone()));
        roots.push(gauss(re, -im));
        r = div_exact(&r, &factor).ok_or(Error::NonGaussianRoots)?;
    }
    Ok(roots)
}

/// A positive-definite factor `kz² + lz + m` of `r` with Gaussian roots, if any.
/// Assumes `r` has no rational roots, so `r(±1) ≠ 0`.
fn quadratic_factor(r: &[BigInt]) -> Option<Vec<BigInt>> {
    let r1 = eval(r, &BigInt::one());
    let rm1 = eval(r, &-BigInt::one());
    let lead = r.last().unwrap();
    let four = BigInt::from(4);
    let ms = divisors(&r[0]);
    let ds = divisors(&r1);
    for k in divisors(lead) {
        for m in &ms {
            let km4 = &four * &k * m;
            for d in &ds {
                for value in [d.clone(), -d.clone()] {
                    let l = &value - &k - m;
                    if &l * &l >= km4 || perfect_sqrt(&(&km4 - &l * &l)).is_none() {
                        continue;
                    }
                    if !divides(&(&k - &l + m), &rm1) {
                        continue;
                    }
                    let factor = vec![m.clone(), l, k.clone()];
                    if div_exact(r, &factor).is_some() {
                        return Some(factor);
                    }
                }
            }
        }
    }
    None
}
