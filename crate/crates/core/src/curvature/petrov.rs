use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::expr::Symbol;
use crate::forms::Matrix;

use super::metric::Metric4;
use super::tensors::CurvatureTensors;
use super::upoly::UPoly;
use super::CurvatureError;

/// Index pairs `a < b` labelling the basis `dxᵃ∧dxᵇ` of 2-forms.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PetrovType {
    I,
    II,
    D,
    III,
    N,
    O,
}

impl fmt::Display for PetrovType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PetrovType::I => "I",
            PetrovType::II => "II",
            PetrovType::D => "D",
            PetrovType::III => "III",
            PetrovType::N => "N",
            PetrovType::O => "O",
        };
        f.write_str(s)
    }
}

/// The Weyl endomorphism of 2-forms at a point, split by the Hodge star.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylOperator {
    pub point: BTreeMap<Symbol, BigRational>,
    /// Restriction to the `+1` eigenspace of `⋆` (orientation `dx∧dy∧dz∧dt`).
    pub plus: Matrix<BigRational>,
    /// Restriction to the `−1` eigenspace.
    pub minus: Matrix<BigRational>,
    pub plus_type: PetrovType,
    pub minus_type: PetrovType,
}

impl WeylOperator {
    /// `(self-dual, anti-self-dual)` labels.
    pub fn labels(&self) -> (PetrovType, PetrovType) {
        (self.plus_type, self.minus_type)
    }
}

fn levi_civita(ix: [usize; 4]) -> i64 {
    let mut v = ix;
    for i in 0..4 {
        for j in i + 1..4 {
            if v[i] == v[j] {
                return 0;
            }
        }
    }
    let mut sign = 1;
    for i in 0..4 {
        for j in 0..3 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    sign
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let (n, d) = (q.numer().abs(), q.denom().clone());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == n && &rd * &rd == d).then(|| BigRational::new(rn, rd))
}

/// `(⋆ω)_ab = ½ √|g| ε_abcd ω^cd` on the basis [`PAIRS`], at a point where
/// `|det g|` is a rational square.
pub fn hodge_star(g: &Matrix<BigRational>) -> Result<Matrix<BigRational>, CurvatureError> {
    let det = g.determinant();
    if det.is_zero() {
        return Err(CurvatureError::SingularAtPoint);
    }
    let vol = rational_sqrt(&det).ok_or(CurvatureError::IrrationalVolume)?;
    let gi = g.inverse().expect("nonzero determinant");
    Ok(Matrix::from_fn(6, 6, |row, col| {
        let (a, b) = PAIRS[row];
        let (i, j) = PAIRS[col];
        let mut acc = BigRational::zero();
        for &(c, d) in &PAIRS {
            let e = levi_civita([a, b, c, d]);
            if e != 0 {
                let m = gi.get(c, i) * gi.get(d, j) - gi.get(c, j) * gi.get(d, i);
                acc += m * BigRational::from_integer(e.into());
            }
        }
        acc * &vol
    }))
}

/// Columns of `m` that form a basis of its column space.
fn column_basis(m: &Matrix<BigRational>) -> Matrix<BigRational> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let lead = a[r][c].clone();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &lead;
                for k in c..cols {
                    let v = &f * &a[r][k];
                    a[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Matrix::from_fn(rows, pivots.len(), |i, j| m.get(i, pivots[j]).clone())
}

/// Petrov type of a 3×3 block from the repeated-root structure of its
/// characteristic polynomial and the degree of its minimal polynomial.
pub fn classify3(m: &Matrix<BigRational>) -> PetrovType {
    if m.is_zero() {
        return PetrovType::O;
    }
    let id = Matrix::identity(m.rows());
    let chi = UPoly::charpoly(m);
    let g = chi.gcd(&chi.derivative());
    match g.degree() {
        Some(0) | None => PetrovType::I,
        Some(1) => {
            let r = -&g.coefficients()[0];
            let mu = m.trace() - &r - &r;
            let a = m.sub(&id.scale(&r));
            let b = m.sub(&id.scale(&mu));
            if a.mul(&b).is_zero() {
                PetrovType::D
            } else {
                PetrovType::II
            }
        }
        _ => {
            let r = m.trace() / BigRational::from_integer(3.into());
            let nil = m.sub(&id.scale(&r));
            if nil.is_zero() {
                PetrovType::O
            } else if nil.mul(&nil).is_zero() {
                PetrovType::N
            } else {
                PetrovType::III
            }
        }
    }
}

/// Evaluate the Weyl endomorphism `(Wω)_ab = Σ_{c<d} W_ab^cd ω_cd` at a
/// rational point, restrict it to the `±1` eigenspaces of `⋆` and classify both.
pub fn petrov_classification(
    g: &Metric4,
    ct: &CurvatureTensors,
    point: &BTreeMap<Symbol, BigRational>,
) -> Result<WeylOperator, CurvatureError> {
    let gp = g.evaluate(point)?;
    let star = hodge_star(&gp)?;
    if !star.mul(&star).is_identity() {
        return Err(CurvatureError::StarNotInvolution);
    }
    let gi = gp.inverse().ok_or(CurvatureError::SingularAtPoint)?;
    let mut w = BTreeMap::new();
    for &(a, b) in &PAIRS {
        for i in 0..4 {
            for j in 0..4 {
                w.insert((a, b, i, j), ct.weyl(a, b, i, j).evaluate(point)?);
            }
        }
    }
    let op = Matrix::from_fn(6, 6, |row, col| {
        let (a, b) = PAIRS[row];
        let (c, d) = PAIRS[col];
        let mut acc = BigRational::zero();
        for i in 0..4 {
            for j in 0..4 {
                let f = gi.get(c, i) * gi.get(d, j);
                if !f.is_zero() {
                    acc += f * &w[&(a, b, i, j)];
                }
            }
        }
        acc
    });
    let id = Matrix::identity(6);
    let half = BigRational::new(1.into(), 2.into());
    let block = |sign: &BigRational| -> Result<Matrix<BigRational>, CurvatureError> {
        let proj = id.add(&star.scale(sign)).scale(&half);
        let b = column_basis(&proj);
        let bt = b.transpose();
        let gram_inv = bt
            .mul(&b)
            .inverse()
            .ok_or(CurvatureError::StarNotPreserved)?;
        let wb = op.mul(&b);
        let m = gram_inv.mul(&bt).mul(&wb);
        if b.mul(&m) != wb {
            return Err(CurvatureError::StarNotPreserved);
        }
        Ok(m)
    };
    let plus = block(&BigRational::one())?;
    let minus = block(&-BigRational::one())?;
    Ok(WeylOperator {
        point: point.clone(),
        plus_type: classify3(&plus),
        minus_type: classify3(&minus),
        plus,
        minus,
    })
}
