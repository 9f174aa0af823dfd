//! Rendering in the same grammar the parser accepts.

use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::expression::Expression;
use super::poly::{Monomial, Poly};

fn write_monomial(out: &mut String, m: &Monomial) {
    for (i, (s, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        write!(out, "{s}").unwrap();
        if *e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

fn render_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        if c.is_negative() {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        let a = c.abs();
        if m.is_one() {
            write!(out, "{a}").unwrap();
        } else {
            if !a.is_one() {
                write!(out, "{a}*").unwrap();
            }
            write_monomial(&mut out, m);
        }
    }
    out
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = render_poly(self.numerator());
        let den = self.denominator();
        if den.is_one() {
            return f.write_str(&num);
        }
        if self.numerator().len() > 1 {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        let bare = match den.terms() {
            [(m, c)] => (m.is_one() && c.is_positive()) || (c.is_one() && m.factors().len() == 1),
            _ => false,
        };
        if bare {
            write!(f, "/{}", render_poly(den))
        } else {
            write!(f, "/({})", render_poly(den))
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{coord, frac, int, Coord, Expression, FunctionRegistry};

    #[test]
    fn canonical_rendering() {
        let reg = FunctionRegistry::with_family_functions();
        let c = Expression::jet(reg.resolve_jet("C").unwrap());
        let alpha = coord(Coord::Alpha);
        let p = coord(Coord::P);
        let k = -c / (int(4) * alpha.pow(2) * p.clone());
        assert_eq!(k.to_string(), "-C/(4*alpha^2*p)");
        assert_eq!((frac(3, 2) * p.pow(2)).to_string(), "3*p^2/2");
        assert_eq!((int(1) / (p.clone() - int(1))).to_string(), "1/(p-1)");
        assert_eq!((int(1) / p.pow(3)).to_string(), "1/p^3");
        assert_eq!(int(0).to_string(), "0");
        assert_eq!(frac(-1, 3).to_string(), "-1/3");
    }
}
