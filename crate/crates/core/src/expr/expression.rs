use std::collections::{BTreeMap, BTreeSet};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gcd::{gcd, term_lcm};
use super::poly::Poly;
use super::symbol::{Coord, CoordSet, FnName, Jet, Symbol};
use super::ExprError;

static GCD_TERM_BUDGET: AtomicUsize = AtomicUsize::new(5000);

/// Polynomials above this many terms (both numerator and denominator) only get
/// monomial and content reduction. Zero tests never depend on it.
pub fn set_gcd_term_budget(terms: usize) {
    GCD_TERM_BUDGET.store(terms, Ordering::Relaxed);
}

pub fn gcd_term_budget() -> usize {
    GCD_TERM_BUDGET.load(Ordering::Relaxed)
}

/// A rational function `num/den` in canonical form.
///
/// Canonical form: numerator and denominator have integer coefficients with
/// no common integer factor, no common monomial factor, no common polynomial
/// factor (within the gcd term budget), and the leading coefficient of the
/// denominator is positive. Zero is `0/1`.
#[derive(Clone, Debug)]
pub struct Expression {
    num: Poly,
    den: Poly,
}

impl Expression {
    pub fn zero() -> Self {
        Expression {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Expression {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn coord(c: Coord) -> Self {
        Self::symbol(Symbol::Coord(c))
    }

    pub fn jet(j: Jet) -> Self {
        Self::symbol(Symbol::Jet(j))
    }

    pub fn symbol(s: Symbol) -> Self {
        Expression {
            num: Poly::var(s),
            den: Poly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let (n, d) = q.into_raw();
        Self::normalized(Poly::constant(n), Poly::constant(d))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::normalized(p, Poly::one())
    }

    /// `num/den`, failing if `den` is the zero polynomial.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    /// Content and sign normalization for a numerator and denominator already
    /// known to share no polynomial factor.
    fn coprime(mut num: Poly, mut den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading_coefficient().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        Expression { num, den }
    }

    fn normalized(mut num: Poly, mut den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let mono = num.monomial_content().gcd(&den.monomial_content());
        if !mono.is_one() {
            num = num.div_monomial(&mono);
            den = den.div_monomial(&mono);
        }
        let needs_gcd = !num.is_monomial() && !den.is_monomial();
        if needs_gcd && num.len().min(den.len()) <= gcd_term_budget() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = Poly::one();
            } else {
                let g = gcd(&num, &den);
                if !g.is_constant() {
                    num = num.div_exact(&g).expect("gcd divides numerator");
                    den = den.div_exact(&g).expect("gcd divides denominator");
                }
            }
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading_coefficient().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        Expression { num, den }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact zero test on the canonical numerator.
    pub fn is_identically_zero(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        Some(BigRational::new(
            self.num.constant_value()?,
            self.den.constant_value()?,
        ))
    }

    /// Number of stored terms, numerator plus denominator.
    pub fn term_count(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    /// Coordinates the expression depends on, directly or through jets.
    pub fn dependencies(&self) -> CoordSet {
        let mut out = CoordSet::default();
        for s in self.symbols() {
            for c in s.dependencies().iter() {
                out.insert(c);
            }
        }
        out
    }

    pub fn depends_on(&self, c: Coord) -> bool {
        self.dependencies().contains(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        Expression {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
        .renormalized_sign()
    }

    fn renormalized_sign(self) -> Self {
        if self.den.leading_coefficient().is_negative() {
            Expression {
                num: self.num.neg(),
                den: self.den.neg(),
            }
        } else {
            self
        }
    }

    pub fn inv(&self) -> Result<Self, ExprError> {
        if self.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(Expression {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .renormalized_sign())
    }

    pub fn checked_div(&self, other: &Expression) -> Result<Self, ExprError> {
        if other.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(self.mul_impl(&other.inv()?))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        self.mul_impl(&Expression::from_rational(k.clone()))
    }

    /// Formal partial derivative.
    pub fn diff(&self, c: Coord) -> Self {
        let dn = self.num.derivative(c);
        let dd = self.den.derivative(c);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        if self.den.len().min(dd.len()) > gcd_term_budget() {
            let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
            return Self::normalized(num, self.den.mul(&self.den));
        }
        // with g = gcd(den, den'), den = g*u and den' = g*v, the quotient rule
        // gives (num'*u - num*v)/(g*u^2); only factors of g can cancel
        let g = gcd(&self.den, &dd);
        let u = self.den.div_exact(&g).expect("gcd divides");
        let v = dd.div_exact(&g).expect("gcd divides");
        let s = dn.mul(&u).sub(&self.num.mul(&v));
        if s.is_zero() {
            return Self::zero();
        }
        let h = if g.is_constant() || s.len() > gcd_term_budget() {
            Poly::one()
        } else {
            gcd(&s, &g)
        };
        let num = s.div_exact(&h).expect("gcd divides");
        let gh = g.div_exact(&h).expect("gcd divides");
        Self::coprime(num, gh.mul(&u).mul(&u))
    }

    /// Simultaneous substitution of symbols.
    pub fn subs(&self, map: &Substitution) -> Result<Self, ExprError> {
        let touched = |p: &Poly| p.symbols().iter().any(|s| map.map.contains_key(s));
        if !touched(&self.num) && !touched(&self.den) {
            return Ok(self.clone());
        }
        let num = subs_poly(&self.num, map);
        let den = subs_poly(&self.den, map);
        num.checked_div(&den)
    }

    /// Exact value at a point; every symbol must be assigned.
    pub fn evaluate(
        &self,
        point: &BTreeMap<Symbol, BigRational>,
    ) -> Result<BigRational, ExprError> {
        let mut lookup = |s: Symbol| point.get(&s).cloned();
        let n = self
            .num
            .evaluate(&mut lookup)
            .map_err(|s| ExprError::Unassigned(s.to_string()))?;
        let d = self
            .den
            .evaluate(&mut lookup)
            .map_err(|s| ExprError::Unassigned(s.to_string()))?;
        if d.is_zero() {
            return Err(ExprError::SingularPoint);
        }
        Ok(n / d)
    }

    /// Replace the opaque function `name` and all its jets by `value` and its derivatives.
    pub fn specialize(&self, name: FnName, value: &Expression) -> Result<Self, ExprError> {
        let mut map = Substitution::new();
        for s in self.symbols() {
            if let Symbol::Jet(j) = s {
                if j.name() == name {
                    let mut v = value.clone();
                    for c in j.index().sorted() {
                        v = v.diff(c);
                    }
                    map.insert(s, v);
                }
            }
        }
        self.subs(&map)
    }

    fn add_impl(&self, other: &Expression, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate {
                other.neg_impl()
            } else {
                other.clone()
            };
        }
        let combine = |a: Poly, b: Poly| if negate { a.sub(&b) } else { a.add(&b) };
        if self.den == other.den {
            return Self::normalized(
                combine(self.num.clone(), other.num.clone()),
                self.den.clone(),
            );
        }
        if self.den.is_monomial() && other.den.is_monomial() {
            let l = term_lcm(&self.den, &other.den);
            let fa = l.div_exact(&self.den).expect("lcm is a multiple");
            let fb = l.div_exact(&other.den).expect("lcm is a multiple");
            return Self::normalized(combine(self.num.mul(&fa), other.num.mul(&fb)), l);
        }
        if self.den.len().min(other.den.len()) > gcd_term_budget() {
            return Self::normalized(
                combine(self.num.mul(&other.den), other.num.mul(&self.den)),
                self.den.mul(&other.den),
            );
        }
        // a/b ± c/d with g = gcd(b, d): any common factor of the new numerator
        // and denominator divides g
        let g = gcd(&self.den, &other.den);
        let ad = self.den.div_exact(&g).expect("gcd divides");
        let bd = other.den.div_exact(&g).expect("gcd divides");
        let t = combine(self.num.mul(&bd), other.num.mul(&ad));
        if g.is_constant() {
            return Self::coprime(t, self.den.mul(&bd));
        }
        if t.is_zero() {
            return Self::zero();
        }
        if t.len() > gcd_term_budget() {
            return Self::normalized(t, self.den.mul(&bd));
        }
        let h = gcd(&t, &g);
        let num = t.div_exact(&h).expect("gcd divides");
        let gh = g.div_exact(&h).expect("gcd divides");
        Self::coprime(num, ad.mul(&bd).mul(&gh))
    }

    fn mul_impl(&self, other: &Expression) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_constant() && self.den.is_constant() {
            if let (Some(n), Some(d)) = (other.num.constant_value(), other.den.constant_value()) {
                return Self::normalized(self.num.scale(&n), self.den.scale(&d));
            }
        }
        let budget = gcd_term_budget();
        let fits = |a: &Poly, b: &Poly| a.len().min(b.len()) <= budget;
        if !fits(&self.num, &other.den) || !fits(&other.num, &self.den) {
            return Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den));
        }
        // both operands are in lowest terms, so cancelling across suffices
        let cancel = |n: &Poly, d: &Poly| {
            if n.is_constant() || d.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = gcd(n, d);
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (
                    n.div_exact(&g).expect("gcd divides"),
                    d.div_exact(&g).expect("gcd divides"),
                )
            }
        };
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        Self::coprime(n1.mul(&n2), d1.mul(&d2))
    }

    fn neg_impl(&self) -> Self {
        Expression {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

fn subs_poly(p: &Poly, map: &Substitution) -> Expression {
    let mut powers: BTreeMap<(Symbol, u32), Expression> = BTreeMap::new();
    let mut acc = Expression::zero();
    let mut poly_part: Vec<(super::poly::Monomial, BigInt)> = Vec::new();
    for (m, c) in p.terms() {
        let mut kept = super::poly::Monomial::one();
        let mut factor = Expression::one();
        let mut any = false;
        for &(s, e) in m.factors() {
            match map.map.get(&s) {
                Some(v) => {
                    any = true;
                    let pw = powers.entry((s, e)).or_insert_with(|| v.pow(e)).clone();
                    factor = factor.mul_impl(&pw);
                }
                None => kept = kept.mul(&super::poly::Monomial::var(s, e)),
            }
        }
        if any {
            let term = Expression::from_poly(Poly::term(kept, c.clone()));
            acc = acc.add_impl(&factor.mul_impl(&term), false);
        } else {
            poly_part.push((kept, c.clone()));
        }
    }
    acc.add_impl(&Expression::from_poly(Poly::from_terms(poly_part)), false)
}

/// Simultaneous symbol → expression map.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Symbol, Expression>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: impl Into<Symbol>, value: Expression) -> &mut Self {
        self.map.insert(s.into(), value);
        self
    }

    pub fn with(mut self, s: impl Into<Symbol>, value: Expression) -> Self {
        self.insert(s, value);
        self
    }

    pub fn get(&self, s: impl Into<Symbol>) -> Option<&Expression> {
        self.map.get(&s.into())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Expression)> {
        self.map.iter()
    }
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Expression {}

impl Default for Expression {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Expression {
    fn from(n: i64) -> Self {
        Expression {
            num: Poly::constant(BigInt::from(n)),
            den: Poly::one(),
        }
    }
}

impl From<BigInt> for Expression {
    fn from(n: BigInt) -> Self {
        Expression {
            num: Poly::constant(n),
            den: Poly::one(),
        }
    }
}

impl From<BigRational> for Expression {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl From<Coord> for Expression {
    fn from(c: Coord) -> Self {
        Self::coord(c)
    }
}

impl From<Jet> for Expression {
    fn from(j: Jet) -> Self {
        Self::jet(j)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Expression> for &Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                $body(self, rhs)
            }
        }
        impl $tr<Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                $body(&self, rhs)
            }
        }
        impl $tr<Expression> for &Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Expression, b: &Expression| a
    .add_impl(b, false));
binop!(Sub, sub, |a: &Expression, b: &Expression| a
    .add_impl(b, true));
binop!(Mul, mul, |a: &Expression, b: &Expression| a.mul_impl(b));
binop!(Div, div, |a: &Expression, b: &Expression| a
    .checked_div(b)
    .expect("division by an identically zero expression"));

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        self.neg_impl()
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        self.neg_impl()
    }
}

impl AddAssign<&Expression> for Expression {
    fn add_assign(&mut self, rhs: &Expression) {
        *self = self.add_impl(rhs, false);
    }
}

impl AddAssign<Expression> for Expression {
    fn add_assign(&mut self, rhs: Expression) {
        *self = self.add_impl(&rhs, false);
    }
}

impl SubAssign<&Expression> for Expression {
    fn sub_assign(&mut self, rhs: &Expression) {
        *self = self.add_impl(rhs, true);
    }
}

impl SubAssign<Expression> for Expression {
    fn sub_assign(&mut self, rhs: Expression) {
        *self = self.add_impl(&rhs, true);
    }
}

impl MulAssign<&Expression> for Expression {
    fn mul_assign(&mut self, rhs: &Expression) {
        *self = self.mul_impl(rhs);
    }
}

impl Sum for Expression {
    fn sum<I: Iterator<Item = Expression>>(iter: I) -> Self {
        iter.fold(Expression::zero(), |acc, e| acc + e)
    }
}

impl<'a> Sum<&'a Expression> for Expression {
    fn sum<I: Iterator<Item = &'a Expression>>(iter: I) -> Self {
        iter.fold(Expression::zero(), |acc, e| acc + e)
    }
}

impl Product for Expression {
    fn product<I: Iterator<Item = Expression>>(iter: I) -> Self {
        iter.fold(Expression::one(), |acc, e| acc * e)
    }
}

impl One for Expression {
    fn one() -> Self {
        Expression::one()
    }
}

impl Zero for Expression {
    fn zero() -> Self {
        Expression::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
