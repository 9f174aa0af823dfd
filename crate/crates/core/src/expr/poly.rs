//! Sparse multivariate polynomials with integer coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::symbol::{Coord, Symbol};

/// Power product of symbols, sorted by symbol, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(Symbol, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Symbol, e: u32) -> Self {
        let mut v = SmallVec::new();
        if e > 0 {
            v.push((s, e));
        }
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Symbol) -> u32 {
        self.0
            .binary_search_by(|(k, _)| k.cmp(&s))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(s, e)| other.exponent(s) >= e)
    }

    /// `self / other`; caller guarantees `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len());
        for &(s, e) in &self.0 {
            let d = other.exponent(s);
            debug_assert!(d <= e);
            if e > d {
                out.push((s, e - d));
            }
        }
        Monomial(out)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(s, e) in &self.0 {
            let m = e.min(other.exponent(s));
            if m > 0 {
                out.push((s, m));
            }
        }
        Monomial(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let g = self.gcd(other);
        self.mul(other).div(&g)
    }

    fn without(&self, s: Symbol) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(k, _)| *k != s).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order; the smallest symbol is the most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let mut i = 0;
        loop {
            match (self.0.get(i), other.0.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => {
                    if a == b {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                    } else if a < b {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
            i += 1;
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over the integers; terms sorted by decreasing monomial, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(s: Symbol) -> Self {
        Poly {
            terms: vec![(Monomial::var(s, 1), BigInt::one())],
        }
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Build from arbitrary terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.factors().iter().map(|(s, _)| *s))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Multiply by a single term; monomial orders are preserved.
    pub fn mul_term(&self, m: &Monomial, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c * k))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            let (m, k) = &other.terms[0];
            return self.mul_term(m, k);
        }
        if self.terms.len() == 1 {
            let (m, k) = &self.terms[0];
            return other.mul_term(m, k);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut out = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Formal partial derivative; opaque jets differentiate to higher jets.
    pub fn derivative(&self, c: Coord) -> Poly {
        let mut out = Vec::new();
        for (m, k) in &self.terms {
            for (pos, &(s, e)) in m.factors().iter().enumerate() {
                let ds = match s {
                    Symbol::Coord(cc) if cc == c => None,
                    Symbol::Coord(_) => continue,
                    Symbol::Jet(j) => match j.derivative(c) {
                        Some(dj) => Some(Symbol::Jet(dj)),
                        None => continue,
                    },
                };
                let mut rest: SmallVec<[(Symbol, u32); 4]> = m.factors().into();
                if e == 1 {
                    rest.remove(pos);
                } else {
                    rest[pos].1 = e - 1;
                }
                let mut mm = Monomial(rest);
                if let Some(ds) = ds {
                    mm = mm.mul(&Monomial::var(ds, 1));
                }
                out.push((mm, k * BigInt::from(e)));
            }
        }
        Poly::from_terms(out)
    }

    /// Integer content (gcd of coefficients), positive; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.div(m), c.clone()))
                .collect(),
        }
    }

    /// Exact division by an integer; caller guarantees divisibility.
    pub fn div_scalar(&self, k: &BigInt) -> Poly {
        if k.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / k)).collect(),
        }
    }

    /// `self / d` over the integers if the division is exact.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (ld, lc) = d.leading().expect("nonzero divisor");
        if d.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !ld.divides(m) {
                    return None;
                }
                let (q, r) = c.div_rem(lc);
                if !r.is_zero() {
                    return None;
                }
                out.push((m.div(ld), q));
            }
            return Some(Poly { terms: out });
        }
        if self.total_degree() < d.total_degree() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            if !ld.divides(&m) {
                return None;
            }
            let (q, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            let qm = m.div(ld);
            rem = rem.sub(&d.mul_term(&qm, &q));
            quot.push((qm, q));
        }
        // leading terms were produced in decreasing order
        Some(Poly { terms: quot })
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(s))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `s`.
    pub fn coefficients_in(&self, s: Symbol) -> BTreeMap<u32, Poly> {
        let mut buckets: BTreeMap<u32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            buckets
                .entry(m.exponent(s))
                .or_default()
                .push((m.without(s), c.clone()));
        }
        buckets
            .into_iter()
            .map(|(e, mut t)| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                (e, Poly { terms: t })
            })
            .collect()
    }

    /// Coefficient of `s^e`.
    pub fn coefficient_in(&self, s: Symbol, e: u32) -> Poly {
        let mut t: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(s) == e)
            .map(|(m, c)| (m.without(s), c.clone()))
            .collect();
        t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms: t }
    }

    pub fn evaluate(
        &self,
        value: &mut impl FnMut(Symbol) -> Option<BigRational>,
    ) -> Result<BigRational, Symbol> {
        let mut cache: HashMap<Symbol, BigRational> = HashMap::new();
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for &(s, e) in m.factors() {
                let v = match cache.get(&s) {
                    Some(v) => v.clone(),
                    None => {
                        let v = value(s).ok_or(s)?;
                        cache.insert(s, v.clone());
                        v
                    }
                };
                t *= num_traits::pow(v, e as usize);
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Make the leading coefficient positive.
    pub fn abs_leading(self) -> Poly {
        if self.leading_coefficient().is_negative() {
            self.neg()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(Symbol::Coord(Coord::X))
    }
    fn y() -> Poly {
        Poly::var(Symbol::Coord(Coord::Y))
    }

    #[test]
    fn graded_lex_order() {
        let xs = Symbol::Coord(Coord::X);
        let ys = Symbol::Coord(Coord::Y);
        let x2 = Monomial::var(xs, 2);
        let xy = Monomial::var(xs, 1).mul(&Monomial::var(ys, 1));
        let y2 = Monomial::var(ys, 2);
        let x = Monomial::var(xs, 1);
        assert!(x2 > xy && xy > y2 && y2 > x && x > Monomial::one());
    }

    #[test]
    fn square_of_binomial() {
        let s = x().add(&y()).pow(2);
        let expect = x()
            .mul(&x())
            .add(&x().mul(&y()).scale(&BigInt::from(2)))
            .add(&y().mul(&y()));
        assert_eq!(s, expect);
    }

    #[test]
    fn exact_division() {
        let a = x().add(&y());
        let b = x().sub(&y());
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&x()), None);
        let two = Poly::constant(BigInt::from(2));
        assert_eq!(a.div_exact(&two), None);
    }

    #[test]
    fn derivative_power_rule() {
        let p = x().pow(3).mul(&y());
        let d = p.derivative(Coord::X);
        assert_eq!(d, x().pow(2).mul(&y()).scale(&BigInt::from(3)));
        assert!(p.derivative(Coord::Z).is_zero());
    }
}
