use num_traits::{One, Signed, Zero};

use crate::{GaussianRational, Polynomial, Rational, RationalFunction};

fn monomial(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "z".into(),
        _ => format!("z^{k}"),
    }
}

/// Pushes `sign·magnitude·m` where `m` is a monomial (possibly empty) and
/// `unit` is `""` or `"i"`.
fn push_term(out: &mut String, negative: bool, magnitude: &Rational, unit: &str, m: &str) {
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let factors: Vec<String> = [
        (!magnitude.is_one() || (unit.is_empty() && m.is_empty())).then(|| magnitude.to_string()),
        (!unit.is_empty()).then(|| unit.to_string()),
        (!m.is_empty()).then(|| m.to_string()),
    ]
    .into_iter()
    .flatten()
    .collect();
    out.push_str(&factors.join("*"));
}

fn push_coefficient(out: &mut String, c: &GaussianRational, k: usize) {
    let m = monomial(k);
    match (c.re.is_zero(), c.im.is_zero()) {
        (true, true) => {}
        (false, true) => push_term(out, c.re.is_negative(), &c.re.abs(), "", &m),
        (true, false) => push_term(out, c.im.is_negative(), &c.im.abs(), "i", &m),
        (false, false) if k == 0 => {
            push_term(out, c.re.is_negative(), &c.re.abs(), "", "");
            push_term(out, c.im.is_negative(), &c.im.abs(), "i", "");
        }
        (false, false) => {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("({c})*{m}"));
        }
    }
}

/// Canonical text of a polynomial, lowest degree first: `1 - z^2`.
pub fn print_poly(p: &Polynomial) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        push_coefficient(&mut out, c, k);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn is_single_factor(p: &Polynomial) -> bool {
    let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    let lead = p.lead();
    nonzero == 1 && lead.im.is_zero() && lead.re.is_one()
}

/// Canonical text of a rational function: `numerator` or
/// `(numerator)/(denominator)`, parenthesized only where needed.
pub fn print_ratfn(f: &RationalFunction) -> String {
    let num = print_poly(f.num());
    if f.den().is_constant() {
        return num;
    }
    let num_nonzero = f.num().coeffs().iter().filter(|c| !c.is_zero()).count();
    let num_text = if num_nonzero == 1 && !num.contains(' ') {
        num
    } else {
        format!("({num})")
    };
    let den = print_poly(f.den());
    let den_text = if is_single_factor(f.den()) { den } else { format!("({den})") };
    format!("{num_text}/{den_text}")
}
