//! Dense univariate polynomials over the rationals, just enough for
//! characteristic polynomials and their repeated roots.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::forms::Matrix;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<BigRational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> UPoly {
        match self.0.last() {
            Some(lc) => UPoly(self.0.iter().map(|c| c / lc).collect()),
            None => self.clone(),
        }
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.0.last().expect("nonzero");
        let mut r = self.0.clone();
        while r.len() > dd {
            let shift = r.len() - 1 - dd;
            let f = r.last().expect("nonempty") / lc;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Number of sign changes in the coefficient sequence, zeros skipped.
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<bool> = self
            .0
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// `p(−λ)`.
    pub fn reflect(&self) -> UPoly {
        UPoly(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Multiplicity of the root `0`.
    pub fn zero_multiplicity(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    /// `det(λI − m)` by Faddeev–LeVerrier.
    pub fn charpoly(m: &Matrix<BigRational>) -> UPoly {
        let n = m.rows();
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        let mut mk = Matrix::zeros(n, n);
        let id = Matrix::identity(n);
        for k in 1..=n {
            mk = m.mul(&mk).add(&id.scale(&c[n - k + 1]));
            let am = m.mul(&mk);
            c[n - k] = -am.trace() / BigRational::from_integer(k.into());
        }
        UPoly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn charpoly_and_repeated_roots() {
        let m = Matrix::from_rows(vec![
            vec![q(2), q(1), q(0)],
            vec![q(0), q(2), q(0)],
            vec![q(0), q(0), q(-4)],
        ]);
        // (λ−2)²(λ+4) = λ³ − 12λ + 16
        let p = UPoly::charpoly(&m);
        assert_eq!(p, UPoly::new(vec![q(16), q(-12), q(0), q(1)]));
        let g = p.gcd(&p.derivative());
        assert_eq!(g, UPoly::new(vec![q(-2), q(1)]));
        assert_eq!(p.sign_changes(), 2);
        assert_eq!(p.reflect().sign_changes(), 1);
    }
}
