//! The graded algebra `A₀[D₋, D₊]` of a pair: generators of the graded
//! pieces, the conjugation between degrees `n` and `−n`, and verification of
//! presentations by generators and relations.

use std::collections::BTreeMap;

use crate::divisor::{function_with_divisor, is_regular_on, QDivisor};
use crate::error::{Error, Result};
use crate::pair::DpdPair;
use crate::syntax::Expr;
use crate::{Rational, RationalFunction};

/// The integral divisor `E` with degree-`n` piece `Γ(C, O(E))`:
/// `⌊n·D₊⌋` for `n ≥ 0` and `⌊−n·D₋⌋` for `n < 0`.
pub fn piece_divisor(pair: &DpdPair, n: i64) -> QDivisor {
    let k = Rational::from_integer(n.abs().into());
    if n >= 0 {
        pair.d().scale(&k).floor()
    } else {
        pair.d_minus().scale(&k).floor()
    }
}

/// `gₙ` with `Γ(C, O(E)) = gₙ·A₀`, i.e. `div(gₙ)|_C = −E`.
pub fn section_generator(pair: &DpdPair, n: i64) -> RationalFunction {
    function_with_divisor(&-&piece_divisor(pair, n), pair.curve()).expect("floor of a divisor on the curve")
}

/// Whether `f` lies in the degree-`n` piece.
pub fn in_piece(pair: &DpdPair, n: i64, f: &RationalFunction) -> bool {
    f.is_zero() || is_regular_on(&(f / &section_generator(pair, n)), pair.curve())
}

/// The conjugation `f ↦ hⁿ·τ*f` from degree `n` to degree `−n`. Applying it
/// with `n` and then with `−n` is the identity.
pub fn sigma_on_section(pair: &DpdPair, n: i64, f: &RationalFunction) -> Result<RationalFunction> {
    if !in_piece(pair, n, f) {
        return Err(Error::NotInPiece(n));
    }
    let image = &pair.h().pow(n) * &f.conj();
    if !in_piece(pair, -n, &image) {
        return Err(Error::InvariantBroken(format!("σ-image of a degree {n} section leaves degree {}", -n)));
    }
    Ok(image)
}

/// A named homogeneous generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub value: RationalFunction,
}

/// An element of `K(z)[t, t⁻¹]`: the graded algebra with each homogeneous
/// piece of degree `m` written as `f·tᵐ`.
type Graded = BTreeMap<i64, RationalFunction>;

fn graded_mul(a: &Graded, b: &Graded) -> Graded {
    let mut out = Graded::new();
    for (m, f) in a {
        for (n, g) in b {
            let entry = out.entry(m + n).or_insert_with(RationalFunction::zero);
            *entry = &*entry + &(f * g);
        }
    }
    out.retain(|_, f| !f.is_zero());
    out
}

fn graded_add(a: &Graded, b: &Graded, sign: bool) -> Graded {
    let mut out = a.clone();
    for (n, g) in b {
        let entry = out.entry(*n).or_insert_with(RationalFunction::zero);
        *entry = if sign { &*entry + g } else { &*entry - g };
    }
    out.retain(|_, f| !f.is_zero());
    out
}

fn graded_inverse(a: &Graded) -> std::result::Result<Graded, String> {
    match a.iter().collect::<Vec<_>>().as_slice() {
        [(m, f)] => Ok(Graded::from([(-**m, f.inv().expect("nonzero coefficient"))])),
        [] => Err("division by zero".into()),
        _ => Err("division by a non-homogeneous element".into()),
    }
}

fn eval_graded(e: &Expr, env: &dyn Fn(&str) -> Option<Graded>) -> std::result::Result<Graded, String> {
    let scalar = |f: RationalFunction| if f.is_zero() { Graded::new() } else { Graded::from([(0, f)]) };
    Ok(match e {
        Expr::Int(_) | Expr::Var | Expr::I => scalar(e.eval_closed().map_err(|err| err.message)?),
        Expr::Ident { name, .. } => env(name).ok_or_else(|| format!("unknown name `{name}`"))?,
        Expr::Neg(a) => graded_add(&Graded::new(), &eval_graded(a, env)?, false),
        Expr::Add(a, b) => graded_add(&eval_graded(a, env)?, &eval_graded(b, env)?, true),
        Expr::Sub(a, b) => graded_add(&eval_graded(a, env)?, &eval_graded(b, env)?, false),
        Expr::Mul(a, b) => graded_mul(&eval_graded(a, env)?, &eval_graded(b, env)?),
        Expr::Div { num, den, .. } => graded_mul(&eval_graded(num, env)?, &graded_inverse(&eval_graded(den, env)?)?),
        Expr::Pow { base, exp, .. } => {
            let mut b = eval_graded(base, env)?;
            if *exp < 0 {
                b = graded_inverse(&b)?;
            }
            (0..exp.unsigned_abs()).fold(scalar(RationalFunction::one()), |acc, _| graded_mul(&acc, &b))
        }
    })
}

/// Checks that every generator lies in its graded piece and that every
/// relation `lhs = rhs` holds identically in the graded algebra, a generator
/// `x` of degree `d` standing for `x·tᵈ`. Relations may use `z`, `i`, `h`
/// (degree 0) and the generator names.
pub fn verify_presentation(pair: &DpdPair, generators: &[Generator], relations: &[(Expr, Expr)]) -> Result<()> {
    for g in generators {
        if !in_piece(pair, g.degree, &g.value) {
            return Err(Error::NotInPiece(g.degree));
        }
    }
    let env = |name: &str| -> Option<Graded> {
        if let Some(g) = generators.iter().find(|g| g.name == name) {
            return Some(Graded::from([(g.degree, g.value.clone())]));
        }
        (name == "h").then(|| Graded::from([(0, pair.h().clone())]))
    };
    for (index, (lhs, rhs)) in relations.iter().enumerate() {
        let eval = |e: &Expr| eval_graded(e, &env).map_err(|message| Error::InvalidRelation(index, message));
        if eval(lhs)? != eval(rhs)? {
            return Err(Error::RelationFails(index));
        }
    }
    Ok(())
}
