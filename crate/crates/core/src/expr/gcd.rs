//! Multivariate polynomial gcd over the integers.
//!
//! The gcd is split into a monomial part, the gcd of the contents with respect
//! to a main variable (computed recursively in fewer variables) and a primitive
//! part. The primitive part is first attempted with the heuristic
//! evaluation/interpolation gcd, falling back to recursive primitive
//! polynomial remainder sequences when that fails.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Poly};
use super::symbol::Symbol;

/// Greatest common divisor with positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone().abs_leading();
    }
    if b.is_zero() {
        return a.clone().abs_leading();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::constant(a.content().gcd(&b.content()));
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let g = gcd_unshifted(&a.div_monomial(&ma), &b.div_monomial(&mb));
    g.mul_term(&mono, &BigInt::one())
}

/// gcd of two polynomials neither of which is divisible by a variable.
fn gcd_unshifted(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::constant(a.content().gcd(&b.content()));
    }
    if a.len() <= b.len() {
        if b.div_exact(a).is_some() {
            return a.clone().abs_leading();
        }
    } else if a.div_exact(b).is_some() {
        return b.clone().abs_leading();
    }
    let sa = a.symbols();
    let sb = b.symbols();
    if let Some(&v) = sa.difference(&sb).next() {
        return gcd_with_coefficients(a, v, b.clone());
    }
    if let Some(&v) = sb.difference(&sa).next() {
        return gcd_with_coefficients(b, v, a.clone());
    }
    if let Some(g) = heuristic_gcd(a, b) {
        return g;
    }
    let v = *sa
        .iter()
        .min_by_key(|&&s| a.degree_in(s).max(b.degree_in(s)))
        .expect("non-constant polynomial has a variable");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, v);
    g.mul(&c).abs_leading()
}

/// gcd of the coefficients of `p` as a polynomial in `v`.
pub fn content_in(p: &Poly, v: Symbol) -> Poly {
    gcd_with_coefficients(p, v, Poly::zero())
}

/// gcd of `start` and every coefficient of `p` in `v`, smallest coefficients
/// first so the running gcd shrinks early.
fn gcd_with_coefficients(p: &Poly, v: Symbol, start: Poly) -> Poly {
    let mut coeffs: Vec<Poly> = p.coefficients_in(v).into_values().collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = start;
    for c in coeffs {
        g = gcd(&g, &c);
        if g.is_constant() && !g.is_zero() {
            return if g.is_one() {
                g
            } else {
                Poly::constant(g.content().gcd(&p.content()))
            };
        }
    }
    g
}

fn primitive_part_in(p: &Poly, v: Symbol) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").abs_leading()
}

/// gcd of two polynomials primitive in `v`.
fn primitive_prs(mut a: Poly, mut b: Poly, v: Symbol) -> Poly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return b.abs_leading();
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}

/// Heuristic gcd: substitute a large integer for one variable at a time, take
/// the gcd of the images and lift it back by balanced base-`ξ` expansion.
/// Every candidate is confirmed by trial division, so a `Some` is always right.
pub fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let vars: Vec<Symbol> = a.symbols().union(&b.symbols()).copied().collect();
    heu(a, b, &vars).map(Poly::abs_leading)
}

fn heu(f: &Poly, g: &Poly, vars: &[Symbol]) -> Option<Poly> {
    if f.is_zero() || g.is_zero() {
        return Some(f.add(g));
    }
    let Some((&v, rest)) = vars.split_first() else {
        return Some(Poly::constant(f.content().gcd(&g.content())));
    };
    if f.degree_in(v) == 0 && g.degree_in(v) == 0 {
        return heu(f, g, rest);
    }
    let c = f.content().gcd(&g.content());
    let f = f.div_scalar(&c);
    let g = g.div_scalar(&c);
    let fnorm = max_norm(&f);
    let gnorm = max_norm(&g);
    let bound: BigInt = BigInt::from(2) * fnorm.clone().min(gnorm.clone()) + 29;
    let ratio =
        (&fnorm / f.leading_coefficient().abs()).min(&gnorm / g.leading_coefficient().abs());
    let start = bound.clone().min(BigInt::from(99) * bound.sqrt());
    let mut xi = start.max(BigInt::from(2) * ratio + 2);
    for _ in 0..6 {
        let ff = eval_at(&f, v, &xi);
        let gg = eval_at(&g, v, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heu(&ff, &gg, rest) {
                let cand = primitive(interpolate(&h, v, &xi));
                if !cand.is_zero() && f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                    return Some(cand.scale(&c));
                }
                for (image, source, other) in [(&ff, &f, &g), (&gg, &g, &f)] {
                    let Some(cofactor) = image.div_exact(&h) else {
                        continue;
                    };
                    let cofactor = interpolate(&cofactor, v, &xi);
                    if cofactor.is_zero() {
                        continue;
                    }
                    if let Some(cand) = source.div_exact(&cofactor) {
                        if other.div_exact(&cand).is_some() {
                            return Some(cand.scale(&c));
                        }
                    }
                }
            }
        }
        xi = BigInt::from(73794) * &xi * xi.sqrt().sqrt() / 27011;
    }
    None
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms()
        .iter()
        .map(|(_, c)| c.abs())
        .max()
        .unwrap_or_default()
}

fn primitive(p: Poly) -> Poly {
    let c = p.content();
    if c.is_zero() || c.is_one() {
        p
    } else {
        p.div_scalar(&c)
    }
}

/// `p` with `v` replaced by the integer `xi`.
fn eval_at(p: &Poly, v: Symbol, xi: &BigInt) -> Poly {
    Poly::from_terms(p.terms().iter().map(|(m, c)| {
        let e = m.exponent(v);
        if e == 0 {
            (m.clone(), c.clone())
        } else {
            (
                m.div(&Monomial::var(v, e)),
                c * num_traits::pow(xi.clone(), e as usize),
            )
        }
    }))
}

/// Inverse of `eval_at` for polynomials whose coefficients in `v` are smaller
/// than `xi/2` in absolute value: balanced base-`xi` digits become powers of `v`.
fn interpolate(h: &Poly, v: Symbol, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut rest = h.clone();
    let mut out = Vec::new();
    let mut i = 0u32;
    while !rest.is_zero() {
        let digit = Poly::from_terms(rest.terms().iter().map(|(m, c)| {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            (m.clone(), r)
        }));
        rest = rest.sub(&digit).div_scalar(xi);
        let shift = Monomial::var(v, i);
        out.extend(
            digit
                .terms()
                .iter()
                .map(|(m, c)| (m.mul(&shift), c.clone())),
        );
        i += 1;
    }
    Poly::from_terms(out)
}

/// `lc(b)^k * a mod b` in `v`, computed one leading term at a time.
pub fn pseudo_remainder(a: &Poly, b: &Poly, v: Symbol) -> Poly {
    let db = b.degree_in(v);
    let lb = b.coefficient_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lr = r.coefficient_in(v, dr);
        let shift = Monomial::var(v, dr - db);
        r = r.mul(&lb).sub(&lr.mul(b).mul_term(&shift, &BigInt::one()));
    }
    r
}

/// Least common multiple of two monomial-times-constant polynomials.
pub fn term_lcm(a: &Poly, b: &Poly) -> Poly {
    let (ma, ca) = a.leading().expect("nonzero");
    let (mb, cb) = b.leading().expect("nonzero");
    let c = ca.lcm(cb);
    let c = if c.is_zero() { BigInt::zero() } else { c };
    Poly::term(ma.lcm(mb), c)
}
